#![no_main]

use std::sync::Arc;

use dgla_deform::artin::ArtinAlgebra;
use dgla_deform::models;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let l = models::gauge_demo();
        let fallback = Arc::new(ArtinAlgebra::dual_numbers("t"));
        let _ = dgla_deform::io::parse_cochain(s, &l, Some(&fallback));
    }
});
