use std::path::PathBuf;

use proptest::prelude::*;

use pogroup::commands::{cmd_compare, cmd_validate, Session};
use pogroup::spec::{parse_spec, print_spec};
use pogroup::{Element, Error};

fn specs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

#[test]
fn shipped_specs_parse_and_round_trip() {
    let mut n = 0;
    for entry in std::fs::read_dir(specs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("pog") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let spec = parse_spec(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let printed = print_spec(&spec);
        assert_eq!(print_spec(&parse_spec(&printed).unwrap()), printed);
        n += 1;
    }
    assert!(n >= 3);
}

#[test]
fn heisenberg_declaration_builds_the_group() {
    let s = Session::from_text("group H = nilpotent2 { gens a b c; comm a b = c; }").unwrap();
    let h = s.spec.group("H").unwrap();
    assert_eq!(h.hirsch_length(), Some(3));
    let ab = h.mul(&h.gen(0), &h.gen(1));
    let ba = h.mul(&h.gen(1), &h.gen(0));
    assert_eq!(ab, Element::Pc(vec![1, 1, 0]));
    // b a = a b c^-1
    assert_eq!(ba, Element::Pc(vec![1, 1, -1]));
}

#[test]
fn empty_file_is_an_empty_spec() {
    let s = parse_spec("").unwrap();
    assert!(s.is_empty());
    let s = parse_spec("# nothing here\n\n").unwrap();
    assert!(s.is_empty());
}

#[test]
fn dangling_reference_names_the_declaration() {
    let err = parse_spec("group Z = abelian { gens t; }\norder o = pullback f p\n").unwrap_err();
    match &err {
        Error::Declaration { decl, source } => {
            assert_eq!(decl, "o");
            assert!(matches!(**source, Error::Unresolved { .. }), "{source}");
        }
        other => panic!("unexpected {other}"),
    }
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let err = parse_spec("group Z = abelian { gens t; }\ngroup Y = wobbly { gens s; }\n").unwrap_err();
    match err {
        Error::Parse { line, col, .. } => {
            assert_eq!(line, 2);
            assert_eq!(col, 11);
        }
        other => panic!("unexpected {other}"),
    }
    let err = parse_spec("group Z = abelian { gens t; }\norder o = character Z { t: }").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn duplicate_names_are_rejected() {
    assert!(parse_spec("group Z = abelian { gens t; }\ngroup Z = abelian { gens s; }").is_err());
}

#[test]
fn hom_must_respect_relations() {
    let text = "group H = nilpotent2 { gens a b c; comm a b = c; }\n\
                hom f : H -> H { a -> a; b -> b; c -> 1; }\n";
    assert!(parse_spec(text).is_err());
}

#[test]
fn compare_words_through_a_session() {
    let text = std::fs::read_to_string(specs_dir().join("heisenberg.pog")).unwrap();
    let s = Session::from_text(&text).unwrap();
    let r = cmd_compare(&s, "lex", "c^40", "a").unwrap();
    assert_eq!(r.result["comparison"], "less_than");
    let v = cmd_validate(&s).unwrap();
    assert_eq!(v.result["groups"].as_array().unwrap().len(), 3);
}

fn algnum() -> impl Strategy<Value = String> {
    prop_oneof![
        (-5i64..=5).prop_map(|n| n.to_string()),
        (-3i64..=3, 1i64..=4).prop_map(|(n, d)| format!("{n}/{d}")),
        prop::sample::select(vec![2u64, 3, 5, 6]).prop_map(|r| format!("sqrt({r})")),
        (1i64..=3, prop::sample::select(vec![2u64, 3])).prop_map(|(k, r)| format!("{k} + sqrt({r})")),
    ]
}

prop_compose! {
    fn random_spec()(rank in 1usize..=3, heis in any::<bool>(), vals in prop::collection::vec(algnum(), 3),
                     radii in prop::collection::vec(2usize..=6, 1..=3), bound in 1i64..=3) -> String {
        let names = ["x", "y", "z"];
        let mut s = format!("group A = abelian {{ gens {}; }}\n", names[..rank].join(" "));
        if heis {
            s.push_str("group H = nilpotent2 { gens a b c; comm a b = c^2; }\n");
        }
        let vs: Vec<String> = names[..rank].iter().zip(&vals).map(|(n, v)| format!("{n}: {v}")).collect();
        s.push_str(&format!("order o = character A {{ {} }}\n", vs.join(", ")));
        s.push_str("order t = trivial A\n");
        s.push_str(&format!(
            "experiment e {{ order o; radii {}; bound {bound}; }}\n",
            radii.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ")
        ));
        s
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_is_a_fixed_point(text in random_spec()) {
        match parse_spec(&text) {
            Ok(spec) => {
                let printed = print_spec(&spec);
                let again = parse_spec(&printed).unwrap();
                prop_assert_eq!(print_spec(&again), printed);
            }
            // An all-zero character is the only legal rejection.
            Err(e) => prop_assert!(e.to_string().contains("zero"), "{}", e),
        }
    }
}
