#![no_main]

use levyspline::Domain;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = Domain::parse(text) {
        assert_eq!(Domain::parse(&d.to_text()).unwrap(), d);
    }
});
