#![no_main]

use levyspline::GridRealization;
use libfuzzer_sys::fuzz_target;

// input: header line, newline, then the raw little-endian samples
fuzz_target!(|data: &[u8]| {
    let split = data.iter().position(|b| *b == b'\n').map_or(data.len(), |p| p + 1);
    let (head, bytes) = data.split_at(split);
    let Ok(header) = std::str::from_utf8(head) else { return };
    if let Ok(s) = GridRealization::from_bin(header, bytes) {
        let (h, b) = s.to_bin();
        assert_eq!(GridRealization::from_bin(&h, &b).unwrap(), s);
    }
});
