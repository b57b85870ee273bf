//! Hide a direct sum behind a random change of basis, then recover its summands.

use nodal_fm::identify::{identify, Identified};
use nodal_fm::labels::{BandLabel, ModuleLabel, StringLabel};
use nodal_fm::linalg::{qf, Matrix};
use nodal_fm::module::{direct_sum, label_module};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let parts = [
        ModuleLabel::Band(BandLabel::new(vec![(2, 1)], 2, qf(-1, 3)).unwrap()),
        ModuleLabel::String(StringLabel::new(1, vec![(2, 2)], 0).unwrap()),
    ];
    let sum = direct_sum(&parts.iter().map(label_module).collect::<Vec<_>>());

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = sum.dim();
    let p = loop {
        let rows = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect::<Vec<i64>>()).collect::<Vec<_>>();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let p = Matrix::from_i64(&refs);
        if p.is_invertible() {
            break p;
        }
    };
    let hidden = sum.conjugate(&p).unwrap();

    match identify(&hidden) {
        Identified::Labels(ls) => {
            for l in ls {
                println!("{l}");
            }
        }
        Identified::Unidentified(d) => println!("not identified: {d:?}"),
    }
}
