use nodal_fm::identify::{identify, leg_counts, string_candidates, Identified};
use nodal_fm::labels::{BandLabel, ModuleLabel, StringLabel};
use nodal_fm::linalg::{q, qf, Matrix};
use nodal_fm::module::{direct_sum, label_module, FiniteLengthModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scramble(m: &FiniteLengthModule, seed: u64) -> FiniteLengthModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = m.dim();
    loop {
        let mut p = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] = q(rng.gen_range(-2..=2));
            }
        }
        if p.is_invertible() {
            return m.conjugate(&p).unwrap();
        }
    }
}

fn string(n0: usize, pairs: &[(usize, usize)], t: usize) -> ModuleLabel {
    ModuleLabel::String(StringLabel::new(n0, pairs.to_vec(), t).unwrap())
}

fn band(w: &[(usize, usize)], m: usize, l: nodal_fm::linalg::Q) -> ModuleLabel {
    ModuleLabel::Band(BandLabel::new(w.to_vec(), m, l).unwrap())
}

fn roundtrip(labels: Vec<ModuleLabel>, seed: u64) {
    let m = scramble(&direct_sum(&labels.iter().map(label_module).collect::<Vec<_>>()), seed);
    let mut want = labels.clone();
    want.sort_by_key(ModuleLabel::sort_key);
    match identify(&m) {
        Identified::Labels(got) => assert_eq!(got, want),
        Identified::Unidentified(d) => panic!("{want:?} not identified: {d:?}"),
    }
}

#[test]
fn string_leg_counts_produce_the_word() {
    let s = StringLabel::new(2, vec![(3, 2)], 1).unwrap();
    let c = leg_counts(&label_module(&ModuleLabel::String(s.clone())));
    assert!(string_candidates(&c).contains(&s));
}

#[test]
fn single_strings() {
    for (i, l) in [string(0, &[], 0), string(2, &[(3, 2)], 1), string(0, &[(1, 1)], 0), string(3, &[], 0), string(1, &[(2, 1), (1, 3)], 2)]
        .into_iter()
        .enumerate()
    {
        roundtrip(vec![l], i as u64);
    }
}

#[test]
fn single_bands() {
    roundtrip(vec![band(&[(1, 1)], 1, q(2))], 1);
    roundtrip(vec![band(&[(2, 1), (1, 3)], 2, qf(-1, 3))], 2);
    roundtrip(vec![band(&[(2, 2), (3, 4), (1, 3)], 1, q(2))], 3);
}

#[test]
fn mixed_sums() {
    roundtrip(vec![string(1, &[], 1), string(1, &[], 1), band(&[(1, 1)], 1, q(3))], 4);
    roundtrip(vec![band(&[(1, 1)], 1, q(2)), band(&[(1, 1)], 1, q(-1)), string(0, &[(2, 1)], 1)], 5);
    roundtrip(vec![band(&[(1, 2)], 1, q(5)), band(&[(1, 2)], 1, q(5))], 6);
}
