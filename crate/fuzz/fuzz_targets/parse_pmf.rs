#![no_main]

//! The CLI accepts pmfs as comma-separated decimals. Accepted inputs must
//! produce a valid model with entropy inside [0, log2(alphabet)].

use aepcode::source::parse_pmf;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(model) = parse_pmf(text) {
        let h = model.entropy_bits();
        let cap = (model.alphabet_size() as f64).log2();
        assert!(h >= -1e-12 && h <= cap + 1e-12, "entropy {h} outside [0, {cap}]");
    }
});
