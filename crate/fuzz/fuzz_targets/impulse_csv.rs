#![no_main]

use levyspline::ImpulseField;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(field) = ImpulseField::from_csv(text) {
        assert_eq!(ImpulseField::from_csv(&field.to_csv()).unwrap(), field);
    }
});
