#![no_main]

use libfuzzer_sys::fuzz_target;
use qaga_core::ising::io::sampleset_from_json;
use qaga_core::IsingModel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = sampleset_from_json(text) {
        // Validate against the variables of the first sample so that the
        // success path is reachable too.
        let mut model = IsingModel::new();
        if let Some(first) = parsed.samples.first() {
            for l in first.labels() {
                model.add_variable(l);
            }
        }
        let _ = parsed.validate(&model);
    }
});
