#![no_main]

use levyspline::exponents::Exponent;
use levyspline::{LevyExponent, PoissonizedExponent};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = LevyExponent::parse(text) {
        assert_eq!(LevyExponent::parse(&f.to_kv().to_text()).unwrap(), f);
        let _ = f.eval(1.0);
    }
    if let Ok(block) = levyspline::kv::KvBlock::parse(text) {
        let _ = PoissonizedExponent::from_kv(&block);
    }
});
