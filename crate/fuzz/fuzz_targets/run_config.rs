#![no_main]

use levyspline_cli::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = RunConfig::parse(text) {
        assert_eq!(RunConfig::parse(&config.to_text()).unwrap(), config);
    }
    let _ = levyspline_cli::config::parse_ladder(text);
});
