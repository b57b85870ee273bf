use nodal_fm::fm::*;
use nodal_fm::identify::Identified;
use nodal_fm::labels::BandLabel;
use nodal_fm::linalg::{q, qf, Q};
use nodal_fm::module::{band_module, cokernel_module, is_isomorphic, label_module, matlis_dual};
use nodal_fm::sheaf::{BandDesc, SheafDesc, Shape, StringDesc, TorsionDesc};

fn band(d: &[i64], m: usize, l: Q) -> SheafDesc {
    SheafDesc::Band(BandDesc::new(d.to_vec(), m, l).unwrap())
}

fn string(d: &[i64]) -> SheafDesc {
    SheafDesc::String(StringDesc::new(d.to_vec()).unwrap())
}

const BAND_EXAMPLE: [i64; 15] = [1, 0, -1, 0, 1, 0, 0, -1, 0, 0, 0, 1, -1, 0, 0];

#[test]
fn forward_images() {
    assert_eq!(fm_forward(&band(&[1, -1], 1, q(5))).unwrap().to_string(), "Mq[(1,1);m=1;l=-5]");
    assert_eq!(fm_forward(&string(&[-1, 0, 1, 0, 0, -1, 0, 1, -1])).unwrap().to_string(), "Nq[2(3,2)1]");
    assert_eq!(fm_forward(&string(&[0, -1, 0, 1, 0, 0, -1, 0, 0])).unwrap().to_string(), "Nq[0(1,2)(3,2)0]");
    assert_eq!(fm_forward(&string(&[-1])).unwrap().to_string(), "Nq[0()0]");
    assert_eq!(fm_forward(&band(&[0], 3, q(2))).unwrap(), TorsionDesc::SmoothPoint { lambda: q(2), len: 3 });
    let t = fm_forward(&band(&BAND_EXAMPLE, 2, q(2))).unwrap();
    match &t {
        TorsionDesc::SingularBand(b) => assert_eq!(b.q(), &[(2, 2), (3, 4), (1, 3)]),
        _ => panic!(),
    }
    assert_eq!(fm_inverse(&t).unwrap(), band(&BAND_EXAMPLE, 2, q(2)));
}

#[test]
fn inverse_undoes_forward_on_catalog() {
    for n in 1..=8 {
        for d in string_catalog(n) {
            let s = string(&d);
            assert_eq!(fm_inverse(&fm_forward(&s).unwrap()).unwrap(), s, "{s}");
        }
        for d in band_catalog(n) {
            let b = band(&d, 2, qf(1, 3));
            assert_eq!(fm_inverse(&fm_forward(&b).unwrap()).unwrap(), b, "{b}");
        }
    }
}

#[test]
fn bab_swaps_rank_and_degree() {
    let m = sl2_matrix(&parse_word("BAB").unwrap());
    assert_eq!(m, [[0, -1], [1, 0]]);
    assert_eq!(apply_mat2(&m, 5, 0), (0, 5));
    assert!(check_relations().iter().all(|r| r.holds));
    let a = sl2_matrix(&parse_word("A").unwrap());
    assert_eq!(apply_mat2(&a, 1, 0), (1, 0));
    assert_eq!(apply_mat2(&a, 1, 1), (0, 1));
    assert_eq!(sl2_matrix(&parse_word("A A^-1 B^-1 B").unwrap()), IDENTITY);
    assert_eq!(parse_word("AxB").unwrap_err().offset, 1);
}

#[test]
fn cohomology_small_cases() {
    let c = cohomology(&GlueSpec::scalar(Topology::Cycle, vec![0, 0], q(1)).unwrap());
    assert_eq!((c.h0, c.h1), (1, 1));
    let c = cohomology(&GlueSpec::scalar(Topology::Cycle, vec![2, 0, 1], q(3)).unwrap());
    assert_eq!((c.h0, c.h1), (3, 0));
    let c = cohomology(&GlueSpec::scalar(Topology::Chain, vec![2, 0, 1], q(1)).unwrap());
    assert_eq!((c.h0, c.h1), (4, 0));
    let c = cohomology(&GlueSpec::scalar(Topology::Cycle, vec![0], q(2)).unwrap());
    assert_eq!((c.h0, c.h1), (0, 0));
}

#[test]
fn quoted_vectors_agree_with_tables() {
    for d in [&[1, -1][..], &[1, 0, -1], &[1, -1, 0]] {
        for l in [q(2), q(-1), qf(1, 3)] {
            let desc = band(d, 1, l);
            let paper = build_eval_presentation(&desc, EvalBasis::Paper, None).unwrap();
            let tables = build_eval_presentation(&desc, EvalBasis::Tables, None).unwrap();
            let cols = |p: &nodal_fm::trunc::Presentation| {
                let mut c: Vec<String> = (0..p.ncols()).map(|j| format!("{:?}", p.relations().iter().map(|r| &r[j]).collect::<Vec<_>>())).collect();
                c.sort();
                c
            };
            assert_eq!(cols(&paper), cols(&tables), "{desc}");
        }
    }
}

#[test]
fn table_bases_span_global_sections() {
    for n in 2..=7 {
        for d in band_catalog(n) {
            for m in 1..=2 {
                let desc = band(&d, m, q(2));
                assert!(sections_form_basis(&desc, EvalBasis::Tables).unwrap(), "{desc}");
            }
        }
        for d in string_catalog(n) {
            let desc = string(&d);
            assert!(sections_form_basis(&desc, EvalBasis::Tables).unwrap(), "{desc}");
        }
    }
    assert!(sections_form_basis(&string(&[-1]), EvalBasis::Tables).unwrap());
}

#[test]
fn verify_examples() {
    for (desc, want) in [
        (band(&[1, -1], 1, q(5)), "Mq[(1,1);m=1;l=-5]"),
        (band(&[1, -1], 2, q(2)), "Mq[(1,1);m=2;l=-2]"),
        (string(&[-1, 0, 1, 0, 0, -1, 0, 1, -1]), "Nq[2(3,2)1]"),
        (string(&[-1]), "Nq[0()0]"),
        (band(&BAND_EXAMPLE, 1, q(2)), "Mq[(1,3)(2,2)(3,4);m=1;l=2]"),
    ] {
        let r = verify_fm(&desc, VerifyOptions::default()).unwrap();
        assert!(r.passed(), "{desc}: {:?}", r.identified);
        match r.identified {
            Identified::Labels(ls) => assert_eq!(ls[0].to_string(), want),
            _ => unreachable!(),
        }
    }
}

#[test]
fn rotated_band_uses_kernel_basis() {
    let desc = band(&[-1, 0, 1, 0], 1, q(3));
    assert!(matches!(desc.shape(), Shape::Band { offset: 2, .. }));
    assert_eq!(default_basis(&desc), EvalBasis::Kernel);
    let r = verify_fm(&desc, VerifyOptions::default()).unwrap();
    assert!(r.passed(), "{:?}", r.identified);
}

#[test]
fn tables_and_kernel_give_isomorphic_cokernels() {
    for d in [&[1, 0, -1, 0, 1, -1, 0][..], &[1, 1, -1, -1]] {
        let Ok(b) = BandDesc::new(d.to_vec(), 1, q(2)) else { continue };
        let desc = SheafDesc::Band(b);
        if !desc.shape().is_ss() {
            continue;
        }
        let a = cokernel_module(&build_eval_presentation(&desc, EvalBasis::Tables, None).unwrap());
        let k = cokernel_module(&build_eval_presentation(&desc, EvalBasis::Kernel, None).unwrap());
        assert!(is_isomorphic(&a, &k).is_true());
    }
}

#[test]
fn dual_examples() {
    let r = fm_dual_check(&string(&[-1, 0, 1, 0, 0, -1, 0, 1, -1]), 1).unwrap();
    assert!(r.passed());
    assert_eq!(r.dual_image.to_string(), "Nq[0(2,3)(2,1)0]");
    let mirrored = fm_forward(&string(&[0, -1, 0, 1, 0, 0, -1, 0, 0])).unwrap();
    let plain_dual = matlis_dual(&label_module(&r.image.label().unwrap()));
    assert!(is_isomorphic(&plain_dual, &label_module(&mirrored.label().unwrap())).is_true());
    for m in 1..=2 {
        let r = fm_dual_check(&band(&BAND_EXAMPLE, m, q(2)), 1).unwrap();
        assert!(r.passed(), "{:?}", r.outcome);
    }
    let r = fm_dual_check(&band(&[0], 2, q(3)), 1).unwrap();
    assert_eq!(r.dual_image, TorsionDesc::SmoothPoint { lambda: qf(1, 3), len: 2 });
    assert!(r.passed());
}

#[test]
fn band_matlis_dual_reverses_the_word() {
    for m in 1..=2 {
        let a = band_module(&BandLabel::new(vec![(2, 2), (3, 4), (1, 3)], m, q(2)).unwrap());
        let b = band_module(&BandLabel::new(vec![(1, 4), (3, 2), (2, 3)], m, q(2)).unwrap());
        assert!(is_isomorphic(&matlis_dual(&a), &b).is_true());
    }
}
