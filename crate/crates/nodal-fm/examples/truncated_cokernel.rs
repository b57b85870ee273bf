//! The cokernel of a 2x2 matrix over k[[x,y]]/(xy), computed modulo (x^N, y^N).

use nodal_fm::linalg::q;
use nodal_fm::trunc::{Presentation, RingPoly, TruncPiece};

fn main() {
    let x2 = RingPoly::x_pow(2);
    let y = RingPoly::y_pow(1);
    let rel = vec![vec![x2.add(&y), RingPoly::zero()], vec![RingPoly::constant(q(0)), RingPoly::x_pow(1).add(&RingPoly::y_pow(3))]];
    let p = Presentation::new(vec![TruncPiece::FullR; 2], rel, None).unwrap();
    println!("working modulo (x^{0}, y^{0})", p.order());
    let c = p.cokernel();
    println!("cokernel has length {}", c.dim);
    for (piece, mono) in &c.basis {
        println!("  e{piece} * {mono}");
    }
    println!("rank of x: {}, rank of y: {}", c.x.rank(), c.y.rank());

    let min = p.minimal_presentation();
    println!("minimal presentation keeps {} generators", min.targets().len());
    assert_eq!(min.cokernel().dim, c.dim);
    assert_eq!(p.with_order(p.order() + 1).cokernel().dim, c.dim);
}
