#![no_main]

use levyspline::OperatorSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(op) = OperatorSpec::parse(text) {
        assert_eq!(OperatorSpec::parse(&op.to_kv().to_text()).unwrap(), op);
    }
    if let Ok(op) = OperatorSpec::parse_compact(text) {
        let _ = op.to_compact();
    }
});
