#![no_main]

use libfuzzer_sys::fuzz_target;
use resonance_core::curve::{emit_csv, parse_csv, parse_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(curve) = parse_csv(text) {
            // anything that parses must re-emit and round-trip bit-exactly
            let emitted = emit_csv(&curve).expect("parsed curve re-emits");
            let again = parse_csv(&emitted).expect("emitted curve re-parses");
            assert_eq!(curve.rho_grid, again.rho_grid);
            assert_eq!(curve.u_values, again.u_values);
        }
        let _ = parse_json(text);
    }
});
