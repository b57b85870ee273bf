use nodal_fm::labels::{BandLabel, StringLabel};
use nodal_fm::linalg::q;
use nodal_fm::module::{band_module, hom_space, is_isomorphic, matlis_dual, string_module, twisted_matlis};

fn main() {
    let s = StringLabel::new(2, vec![(3, 2)], 1).unwrap();
    let n = string_module(&s);
    println!("{s} has length {}, socle dimension {}", n.dim(), n.socle_dim());
    let dual = matlis_dual(&n);
    let expected = string_module(&StringLabel::new(0, vec![(1, 2), (3, 2)], 0).unwrap());
    println!("Matlis dual is Nq[0(1,2)(3,2)0]: {}", is_isomorphic(&dual, &expected).is_true());
    println!("twisted dual is again a string module of length {}", twisted_matlis(&n).dim());

    let b2 = band_module(&BandLabel::new(vec![(1, 1)], 1, q(2)).unwrap());
    let b3 = band_module(&BandLabel::new(vec![(1, 1)], 1, q(3)).unwrap());
    println!("dim Hom(M(2), M(3)) = {}", hom_space(&b2, &b3).len());
    println!("M(2) vs M(3): {:?}", is_isomorphic(&b2, &b3));
}
