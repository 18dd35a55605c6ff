#![no_main]

use std::sync::Arc;

use dgla_deform::models;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let source = Arc::new(models::obstructed());
        let target = Arc::new(source.direct_sum(&models::cone()).unwrap());
        let _ = dgla_deform::io::parse_morphism(s, source, target);
    }
});
