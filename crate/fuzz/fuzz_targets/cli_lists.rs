#![no_main]

use gsd_core::io::{parse_dims_list, parse_party_list, parse_real_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(parties) = parse_party_list(text) {
        assert!(!parties.is_empty());
    }
    let _ = parse_dims_list(text);
    if let Ok(xs) = parse_real_list(text) {
        assert!(xs.iter().all(|x| x.is_finite()));
    }
});
