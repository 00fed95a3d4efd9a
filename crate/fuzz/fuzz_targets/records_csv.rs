#![no_main]

use libfuzzer_sys::fuzz_target;
use qaga_core::bench::{read_records_csv, records_to_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(records) = read_records_csv(text) {
        let written = records_to_csv(&records).unwrap();
        let again = read_records_csv(&written).unwrap();
        assert_eq!(again.len(), records.len());
    }
});
