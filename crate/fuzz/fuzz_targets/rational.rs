#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = dgla_deform::rational::parse(s) {
            let text = dgla_deform::rational::to_text(&r);
            assert_eq!(dgla_deform::rational::parse(&text).ok(), Some(r));
        }
    }
});
