#![no_main]

use libfuzzer_sys::fuzz_target;
use qaga_core::ising::io::{model_from_json, model_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((model, offset)) = model_from_json(text) {
        let (again, again_offset) = model_from_json(&model_to_json(&model, offset)).unwrap();
        assert_eq!(again, model);
        assert_eq!(again_offset.to_bits(), offset.to_bits());
    }
});
