use nodal_fm::labels::{BandLabel, ModuleLabel, StringLabel};
use nodal_fm::linalg::{intertwiner_space, q, qf, Matrix};
use nodal_fm::module::*;
use nodal_fm::poly;
use nodal_fm::trunc::{Monomial, Presentation, RingPoly, TruncElement, TruncPiece};

fn r(c: i64, xs: &[i64], ys: &[i64]) -> RingPoly {
    RingPoly { constant: q(c), xs: xs.iter().map(|&v| q(v)).collect(), ys: ys.iter().map(|&v| q(v)).collect() }
}

#[test]
fn rank_kernel_and_inverse() {
    let a = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
    assert_eq!(a.rank(), 2);
    assert_eq!(a.det(), q(0));
    let k = a.kernel_basis();
    assert_eq!(k.len(), 1);
    assert!(a.mul_vec(&k[0]).iter().all(|v| *v == q(0)));

    let b = Matrix::from_rows(vec![vec![qf(1, 2), q(1)], vec![q(3), qf(-1, 3)]]).unwrap();
    assert_eq!(&b * &b.inverse().unwrap(), Matrix::identity(2));
    assert_eq!(b.det(), qf(-1, 6) - q(3));
    assert!(a.inverse().is_err());
}

#[test]
fn charpoly_matches_trace_and_determinant() {
    let a = Matrix::from_i64(&[&[2, 1], &[-1, 5]]);
    assert_eq!(a.charpoly(), vec![q(11), q(-7), q(1)]);
}

#[test]
fn rational_roots_survive_large_denominators() {
    let p = poly::mul(&[qf(-7, 1_000_003), q(1)], &[q(1), q(0), q(1)]);
    assert_eq!(poly::rational_roots(&p), vec![qf(7, 1_000_003)]);
    assert!(poly::rational_roots(&[q(-2), q(0), q(1)]).is_empty());
}

#[test]
fn truncated_units_invert() {
    let u = TruncElement::new(6, &r(2, &[1, 0, 3], &[0, -1]));
    let inv = u.inverse().unwrap();
    assert_eq!(u.mul(&inv).poly(), &RingPoly::one());
    assert!(TruncElement::new(6, &r(0, &[1], &[])).inverse().is_none());
    assert_eq!(Monomial::X(2).times(Monomial::Y(1)), None);
    assert_eq!(Monomial::X(2).times(Monomial::X(1)), Some(Monomial::X(3)));
}

#[test]
fn cokernel_of_x_plus_y() {
    let p = Presentation::new(vec![TruncPiece::FullR], vec![vec![r(0, &[1], &[1])]], None).unwrap();
    let c = p.cokernel();
    assert_eq!(c.dim, 2);
    assert_eq!((c.x.rank(), c.y.rank()), (1, 1));
}

#[test]
fn minimal_presentation_keeps_the_cokernel() {
    let p = Presentation::new(
        vec![TruncPiece::FullR; 2],
        vec![vec![r(1, &[], &[]), r(0, &[], &[1])], vec![r(0, &[1], &[]), r(0, &[0, 1], &[0, 0, 1])]],
        None,
    )
    .unwrap();
    let m = p.minimal_presentation();
    assert_eq!(p.cokernel().dim, 5);
    assert!(m.targets().len() < p.targets().len());
    assert!(is_isomorphic(&cokernel_module(&p), &cokernel_module(&m)).is_true());
    assert!(stability_check(&p).is_stable());
}

#[test]
fn presentations_match_diagrams() {
    let b = BandLabel::new(vec![(2, 2), (3, 4), (1, 3)], 2, q(2)).unwrap();
    assert_eq!(band_module(&b).dim(), 30);
    assert!(is_isomorphic(&band_module(&b), &diagram_module(&ModuleLabel::Band(b))).is_true());
    let s = StringLabel::new(2, vec![(3, 2)], 1).unwrap();
    assert_eq!(string_module(&s).dim(), 9);
    assert!(is_isomorphic(&string_module(&s), &diagram_module(&ModuleLabel::String(s))).is_true());
}

#[test]
fn band_parameter_separates_modules() {
    let m2 = band_module(&BandLabel::new(vec![(1, 1)], 1, q(2)).unwrap());
    let m3 = band_module(&BandLabel::new(vec![(1, 1)], 1, q(3)).unwrap());
    assert!(is_isomorphic(&m2, &m3).is_false());
    let h = hom_space(&m2, &m3);
    assert_eq!(h.len(), intertwiner_space(m2.x(), m2.y(), m3.x(), m3.y()).unwrap().len());
    assert!(h.iter().all(|f| is_homomorphism(f, &m2, &m3)));
}

#[test]
fn rotated_band_words_are_equal_labels() {
    let a = BandLabel::new(vec![(2, 2), (3, 4), (1, 3)], 1, q(2)).unwrap();
    let b = BandLabel::new(vec![(1, 3), (2, 2), (3, 4)], 1, q(2)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.to_string(), b.to_string());
    assert!(BandLabel::new(vec![(1, 1), (1, 1)], 1, q(2)).is_err());
    assert!(BandLabel::new(vec![(1, 1)], 1, q(0)).is_err());
}

#[test]
fn duals_of_direct_sums() {
    let s = string_module(&StringLabel::new(1, vec![(2, 1)], 0).unwrap());
    let b = band_module(&BandLabel::new(vec![(1, 2)], 2, qf(1, 2)).unwrap());
    let sum = direct_sum(&[s.clone(), b.clone()]);
    assert_eq!(sum.dim(), s.dim() + b.dim());
    let dual = direct_sum(&[matlis_dual(&s), matlis_dual(&b)]);
    assert!(is_isomorphic(&matlis_dual(&sum), &dual).is_true());
    assert!(is_isomorphic(&twisted_matlis(&twisted_matlis(&sum)), &sum).is_true());
}
