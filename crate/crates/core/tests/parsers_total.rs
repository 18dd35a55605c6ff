//! Byte-level mutations of the fixtures fed to every parser entry point.
//! Any input must yield `Ok` or `Err`, never a panic.

use std::path::PathBuf;
use std::sync::Arc;

use dgla_deform::artin::{parse_algebra_spec, ArtinAlgebra};
use dgla_deform::{io, models, rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOKENS: &[&str] = &[
    "0",
    "-1",
    "1/0",
    "99999999999999999999",
    "4294967296",
    "\"\"",
    "null",
    "[]",
    "{}",
    "\"t^9\"",
    "-",
    ",",
    "[",
    "]",
    "\"x/2\"",
    "1e5",
    "true",
];

fn fixtures() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

fn mutate(rng: &mut ChaCha8Rng, text: &str) -> String {
    let mut s = text.to_string();
    for _ in 0..rng.gen_range(1..4) {
        let mut at = rng.gen_range(0..=s.len());
        while !s.is_char_boundary(at) {
            at -= 1;
        }
        match rng.gen_range(0..3) {
            0 => s.insert_str(at, TOKENS[rng.gen_range(0..TOKENS.len())]),
            1 => {
                let mut end = (at + rng.gen_range(1..8)).min(s.len());
                while !s.is_char_boundary(end) {
                    end += 1;
                }
                s.replace_range(at..end, "");
            }
            _ => {
                let digits: String = s
                    .chars()
                    .map(|c| {
                        if c.is_ascii_digit() && rng.gen_bool(0.2) {
                            char::from(b'0' + rng.gen_range(0..10))
                        } else {
                            c
                        }
                    })
                    .collect();
                s = digits;
            }
        }
    }
    s
}

fn feed(text: &str) {
    let l = models::gauge_demo();
    let fallback = Arc::new(ArtinAlgebra::dual_numbers("t"));
    let source = Arc::new(models::obstructed());
    let target = Arc::new(source.direct_sum(&models::cone()).unwrap());
    let _ = io::parse_algebra(text);
    let _ = io::parse_dgla(text);
    let _ = io::parse_cochain(text, &l, Some(&fallback));
    let _ = io::parse_extension(text);
    let _ = io::parse_morphism(text, source, target);
    let _ = io::parse_bicomplex(text);
    let _ = io::parse_simplicial(text);
    let _ = io::parse_group(text);
    let _ = io::parse_vector(text);
    let _ = rational::parse(text);
    let _ = parse_algebra_spec(text);
}

#[test]
fn mutated_fixtures_never_panic() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (name, text) in fixtures() {
        for round in 0..150 {
            let input = mutate(&mut rng, &text);
            let outcome = std::panic::catch_unwind(|| feed(&input));
            assert!(outcome.is_ok(), "{name} round {round} panicked on:\n{input}");
        }
    }
}

#[test]
fn short_inputs_never_panic() {
    for s in [
        "",
        " ",
        "t^",
        "^3",
        "x,y^0",
        "1/",
        "/2",
        "-/-",
        "t^4294967296",
        ",",
        "Q^3",
        "1,,2",
    ] {
        feed(s);
    }
}
