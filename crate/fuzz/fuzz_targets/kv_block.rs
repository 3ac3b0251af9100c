#![no_main]

use levyspline::kv::KvBlock;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(block) = KvBlock::parse(text) {
        // the canonical text must parse back to the same pairs
        let again = KvBlock::parse(&block.to_text()).expect("canonical text parses");
        assert_eq!(again.to_text(), block.to_text());
    }
});
