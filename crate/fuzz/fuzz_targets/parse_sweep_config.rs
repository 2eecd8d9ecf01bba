#![no_main]

//! Sweep configs arrive as untrusted JSON files; parsing and validation
//! must reject bad input without panicking.

use aepcode::SweepConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(config) = SweepConfig::from_slice(data) {
        let _ = config.validate();
    }
});
