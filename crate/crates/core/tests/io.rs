use std::path::PathBuf;

use dgla_deform::io::{self, BicomplexFile, CochainFile, DglaFile, ExtensionFile, GroupFile, SimplicialFile};
use dgla_deform::rational::{self, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn dgla_fixtures_round_trip() {
    for name in [
        "obstructed",
        "unobstructed",
        "gauge_demo",
        "cone",
        "swap",
        "swap_invariants",
    ] {
        let loaded = io::parse_dgla(&fixture(&format!("{name}.dgla.json"))).unwrap();
        let text = io::to_json(&DglaFile::from_dgla(&loaded.dgla, loaded.action.as_ref()));
        let again = io::parse_dgla(&text).unwrap();
        assert_eq!(again.dgla, loaded.dgla, "{name}");
    }
}

#[test]
fn element_fixture_round_trips() {
    let l = io::parse_dgla(&fixture("gauge_demo.dgla.json")).unwrap().dgla;
    for name in ["gauge_a", "gauge_b", "gauge_x", "gauge_y", "gauge_h1"] {
        let (a, x) = io::parse_cochain(&fixture(&format!("{name}.elem.json")), &l, None).unwrap();
        let text = io::to_json(&CochainFile::from_cochain(&l, &a, &x).unwrap());
        let (b, y) = io::parse_cochain(&text, &l, None).unwrap();
        assert_eq!((a.as_ref(), &x), (b.as_ref(), &y), "{name}");
    }
}

#[test]
fn structure_fixtures_round_trip() {
    let ext = io::parse_extension(&fixture("t3_t2.ext.json")).unwrap();
    let again = io::parse_extension(&io::to_json(&ExtensionFile::from_extension(&ext).unwrap())).unwrap();
    assert_eq!(ext.projection().matrix(), again.projection().matrix());

    for name in ["triangle", "tetrahedron", "c2_trivial"] {
        let ab = io::parse_bicomplex(&fixture(&format!("{name}.bix.json"))).unwrap();
        let text = io::to_json(&BicomplexFile::from_bicomplex(&ab));
        assert_eq!(
            io::to_json(&BicomplexFile::from_bicomplex(&io::parse_bicomplex(&text).unwrap())),
            text
        );
    }
    for name in ["triangle", "tetrahedron"] {
        let k = io::parse_simplicial(&fixture(&format!("{name}.simp.json"))).unwrap();
        let again = io::parse_simplicial(&io::to_json(&SimplicialFile::from_complex(&k))).unwrap();
        assert_eq!(k, again);
    }
    for name in ["c2_trivial", "c2_sign"] {
        let (rep, p) = io::parse_group(&fixture(&format!("{name}.group.json"))).unwrap();
        let text = io::to_json(&GroupFile::from_representation(&rep, p));
        let (again, q) = io::parse_group(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(io::to_json(&GroupFile::from_representation(&again, q)), text);
    }
}

#[test]
fn morphism_fixture_needs_matching_shapes() {
    let src = io::parse_dgla(&fixture("obstructed.dgla.json")).unwrap().dgla;
    let dst = io::parse_dgla(&fixture("obstructed_plus_cone.dgla.json")).unwrap().dgla;
    let text = fixture("cone_inclusion.morph.json");
    assert!(io::parse_morphism(&text, src.clone(), dst.clone()).is_ok());
    assert!(io::parse_morphism(&text, dst, src).is_err());
}

#[test]
fn malformed_rationals() {
    for bad in ["", "1/0", "x", "1/2/3", "--1", "1.5"] {
        assert!(rational::parse(bad).is_err(), "{bad:?}");
    }
    assert_eq!(
        io::parse_vector("1, -2/4,0").unwrap(),
        vec![rational::int(1), rational::frac(-1, 2), rational::int(0)]
    );
    let err = io::parse_vector("1,q").unwrap_err();
    assert!(err.to_string().contains("[1]"), "{err}");
}

proptest! {
    #[test]
    fn rational_text_round_trip(p in any::<i64>(), q in 1i64..i64::MAX) {
        let r = Rational::new(BigInt::from(p), BigInt::from(q));
        prop_assert_eq!(rational::parse(&rational::to_text(&r)).unwrap(), r);
    }
}
