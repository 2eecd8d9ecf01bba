#![no_main]

//! Hex-form codewords from logs: parsing must not panic for any string and
//! any width, and accepted words must round-trip through their hex form.

use aepcode::Codeword;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for total_bits in [1usize, 8, 11, 13, 64] {
        if let Ok(word) = Codeword::from_hex(text, total_bits) {
            let hex = word.to_hex();
            let reparsed = Codeword::from_hex(&hex, total_bits).expect("own hex parses");
            assert_eq!(reparsed, word);
        }
    }
});
