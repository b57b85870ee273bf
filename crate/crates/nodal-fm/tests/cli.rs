use std::process::Command;

use nodal_fm::cli_io::{module_from_json, module_to_json, parse, Descriptor};
use nodal_fm::labels::{BandLabel, StringLabel};
use nodal_fm::linalg::{qf, Q};
use nodal_fm::module::{band_module, direct_sum, string_module};
use nodal_fm::sheaf::{BandDesc, SheafDesc, StringDesc, TorsionDesc};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=7).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| qf(n, d)))
}

fn sheaf() -> impl Strategy<Value = SheafDesc> {
    let d = prop::collection::vec(-3i64..=3, 1..7);
    prop_oneof![
        (d.clone(), 1usize..4, scalar())
            .prop_filter_map("aperiodic", |(d, m, l)| BandDesc::new(d, m, l).ok().map(SheafDesc::Band)),
        d.prop_filter_map("valid", |d| StringDesc::new(d).ok().map(SheafDesc::String)),
    ]
}

fn torsion() -> impl Strategy<Value = TorsionDesc> {
    let pairs = prop::collection::vec((1usize..5, 1usize..5), 0..4);
    prop_oneof![
        (pairs.clone(), 1usize..4, scalar()).prop_filter_map("band", |(q, m, l)| {
            BandLabel::new(q, m, l).ok().map(TorsionDesc::SingularBand)
        }),
        (0usize..4, pairs, 0usize..4).prop_filter_map("string", |(a, p, b)| {
            StringLabel::new(a, p, b).ok().map(TorsionDesc::SingularString)
        }),
        (scalar(), 1usize..5).prop_map(|(l, len)| TorsionDesc::smooth_point(l, len).unwrap()),
    ]
}

proptest! {
    #[test]
    fn sheaf_descriptors_print_and_parse(d in sheaf()) {
        let text = d.to_string();
        prop_assert_eq!(parse(&text).unwrap(), Descriptor::Sheaf(d));
        prop_assert_eq!(parse(&text).unwrap().to_string(), text);
    }

    #[test]
    fn torsion_descriptors_print_and_parse(t in torsion()) {
        let text = t.to_string();
        prop_assert_eq!(parse(&text).unwrap().to_string(), text.clone());
        prop_assert_eq!(parse(&text).unwrap(), Descriptor::Torsion(t));
    }
}

#[test]
fn parse_errors_carry_offsets() {
    assert_eq!(parse("B[d=(1,1);m=1;l=0]").unwrap_err().offset(), 16);
    assert_eq!(parse("Q[d=(1)]").unwrap_err().offset(), 0);
    assert!(parse("B[d=(1,1);m=1;l=2]").is_err());
    assert!(parse("S[d=()]").is_err());
}

#[test]
fn module_json_round_trip() {
    let m = direct_sum(&[
        band_module(&BandLabel::new(vec![(1, 2)], 2, qf(-3, 5)).unwrap()),
        string_module(&StringLabel::new(1, vec![(1, 1)], 2).unwrap()),
    ]);
    let back = module_from_json(&module_to_json(&m)).unwrap();
    assert_eq!(back.x(), m.x());
    assert_eq!(back.y(), m.y());
    assert!(module_from_json(r#"{"field":"Fp:7","dim":0,"X":[],"Y":[]}"#).is_err());
    assert!(module_from_json(r#"{"field":"Q","dim":1,"X":[["1"]],"Y":[["0"]]}"#).is_err());
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nodal-fm")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["fm", "S[d=(-1)]"]), (0, "Nq[0()0]\n".to_owned()));
    assert_eq!(run(&["fm", "S[d=(1)]"]).0, 1);
    assert_eq!(run(&["fm", "S[d=(1"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["relations"]).0, 0);
}

#[test]
fn json_output_parses() {
    for args in [
        vec!["--json", "fm", "B[d=(1,-1);m=2;l=2]"],
        vec!["--json", "fm-inverse", "Nq[2(3,2)1]"],
        vec!["--json", "charge", "BAB"],
        vec!["--json", "cohomology", "--topology", "cycle", "--d", "1,0,-1"],
        vec!["--json", "diagram", "Nq[1(2,3)0]", "--dot"],
        vec!["--json", "verify", "S[d=(-1)]"],
    ] {
        let (code, out) = run(&args);
        assert_eq!(code, 0, "{args:?}");
        serde_json::from_str::<serde_json::Value>(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"));
    }
}
