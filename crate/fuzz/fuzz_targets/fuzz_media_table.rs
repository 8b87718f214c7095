#![no_main]

use libfuzzer_sys::fuzz_target;
use resonance_core::config::parse_medium_table;
use resonance_core::media::MediumModel;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(table) = parse_medium_table(text) {
            // feed parsed rows through the model constructor too
            let _ = MediumModel::tabulated(78.5, table);
        }
    }
});
