#![no_main]

use gsd_core::io::{parse_plan_json, plan_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(plan) = parse_plan_json(text) {
        let _ = plan_to_json(&plan);
    }
});
