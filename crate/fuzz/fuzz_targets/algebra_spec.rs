#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(a) = dgla_deform::artin::parse_algebra_spec(s) {
            assert!(a.dim() >= 1);
        }
    }
});
