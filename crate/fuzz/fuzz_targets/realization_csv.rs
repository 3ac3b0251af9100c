#![no_main]

use levyspline::GridRealization;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // keep grids small so the fuzzer spends its time in the parser
    if text.len() > 1 << 16 {
        return;
    }
    if let Ok(s) = GridRealization::from_csv(text) {
        assert_eq!(GridRealization::from_csv(&s.to_csv()).unwrap(), s);
    }
});
