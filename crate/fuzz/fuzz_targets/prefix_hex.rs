#![no_main]

use levyspec::symbolic::{decode_hex, encode_hex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&b, rest)) = data.split_first() else { return };
    let base = b as u32 % 40;
    let Ok(s) = std::str::from_utf8(rest) else { return };
    if let Ok(d) = decode_hex(base, s) {
        assert_eq!(encode_hex(base, &d), s.to_ascii_lowercase());
    }
});
