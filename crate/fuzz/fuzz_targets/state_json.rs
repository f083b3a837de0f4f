#![no_main]

use gsd_core::io::{parse_state_json, state_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Err is fine; a panic is not. Anything accepted must survive a round trip.
    if let Ok(loaded) = parse_state_json(text) {
        let again = parse_state_json(&state_to_json(&loaded.state)).expect("re-parse of emitted state");
        assert_eq!(again.state.dims(), loaded.state.dims());
    }
});
