//! Decomposition of a finite length module into bands and strings.
//!
//! The module is first split into pieces with the Fitting lemma applied to
//! random endomorphisms: for a rational factor `h` of the characteristic
//! polynomial of `a`, `V = ker h(a)^n ⊕ im h(a)^n` as modules. A piece whose
//! endomorphism ring modulo its radical is `Q` is indecomposable; one whose
//! semisimple quotient has dimension `k^2` and resists splitting is treated
//! as `U^k`.
//!
//! Each piece is then read combinatorially. The top of a string or band
//! module has a basis of peaks, each with an `x`-leg and a `y`-leg, and its
//! socle has a basis of valleys where a `y`-leg meets the next `x`-leg. Both
//! leg statistics are additive invariants computable from ranks, and they
//! cut the possible words down to a handful that are then certified by an
//! explicit isomorphism. For a band the eigenvalue is a rational point where
//! `dim Hom(M(q,1,mu), U)` jumps.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::labels::{is_periodic, least_rotation, BandLabel, ModuleLabel, StringLabel};
use crate::linalg::{self, q, Matrix, SparseEchelon, Q};
use crate::module::{
    direct_sum, hom_space, is_isomorphic_with, label_module, top_generators, FiniteLengthModule, IsoOutcome,
};
use crate::poly::{self, Poly};

/// Knobs for [`identify_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentifyConfig {
    pub seed: u64,
    /// Random endomorphisms tried before a piece is declared unsplittable.
    pub split_attempts: usize,
    pub sample: linalg::SampleConfig,
}

impl Default for IdentifyConfig {
    fn default() -> Self {
        IdentifyConfig { seed: 0x1d_e4f1, split_attempts: 12, sample: linalg::SampleConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Identified {
    /// Labels, sorted, whose direct sum was certified isomorphic to the input.
    Labels(Vec<ModuleLabel>),
    Unidentified(Diagnostics),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Labels of the pieces that were recognised.
    pub partial: Vec<ModuleLabel>,
    /// Dimensions of the pieces that were not.
    pub unresolved_dims: Vec<usize>,
    /// Irreducible-looking factors of characteristic polynomials met on the way, rendered in `t`.
    pub charpoly_factors: Vec<String>,
    pub notes: Vec<String>,
}

pub fn identify(m: &FiniteLengthModule) -> Identified {
    identify_with(m, IdentifyConfig::default())
}

pub fn identify_with(m: &FiniteLengthModule, cfg: IdentifyConfig) -> Identified {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pieces = Vec::new();
    split(m, cfg, &mut rng, &mut pieces);
    let single_block = pieces.len() == 1;
    let mut labels = Vec::new();
    let mut diag = Diagnostics::default();
    for piece in pieces {
        match piece {
            Piece::Block { module, copies } => match read_block(&module, copies, cfg) {
                Ok(l) => labels.extend(std::iter::repeat_n(l, copies)),
                Err(note) => {
                    diag.unresolved_dims.push(module.dim());
                    diag.notes.push(note.text);
                    diag.charpoly_factors.extend(note.factors);
                }
            },
            Piece::Stuck { module, factors } => {
                diag.unresolved_dims.push(module.dim());
                diag.charpoly_factors.extend(factors);
                diag.notes.push(format!("a summand of dimension {} could not be split over Q", module.dim()));
            }
        }
    }
    labels.sort_by_key(ModuleLabel::sort_key);
    if !diag.unresolved_dims.is_empty() {
        diag.partial = labels;
        return Identified::Unidentified(diag);
    }
    // A single block is the whole module in its monomial basis and was certified when it was read.
    if single_block {
        return Identified::Labels(labels);
    }
    // The monomial basis is a change of basis, so certifying against it certifies `m`.
    let rebuilt = direct_sum(&labels.iter().map(label_module).collect::<Vec<_>>());
    match is_isomorphic_with(&rebuilt, &monomial_basis(m), cfg.sample, cfg.seed) {
        IsoOutcome::Isomorphic(_) => Identified::Labels(labels),
        other => {
            diag.partial = labels;
            diag.notes.push(format!("final certification failed: {other:?}"));
            Identified::Unidentified(diag)
        }
    }
}

enum Piece {
    /// Believed to be `U^copies` for an indecomposable `U` with `End(U)/rad = Q`.
    Block { module: FiniteLengthModule, copies: usize },
    Stuck { module: FiniteLengthModule, factors: Vec<String> },
}

/// Same module in a basis of vectors `x^a g`, `y^b g` over top generators `g`.
/// Such bases keep `X` and `Y` sparse, which the Hom computations rely on.
///
/// `X` sends `x^a g` to `x^{a+1} g` and kills `y^b g` for `b > 0`, so most
/// columns of the new matrices are unit vectors; only images that fell out of
/// the basis as dependent vectors need to be solved for.
pub fn monomial_basis(m: &FiniteLengthModule) -> FiniteLengthModule {
    let n = m.dim();
    if n == 0 {
        return m.clone();
    }
    #[derive(Clone)]
    enum Image {
        Zero,
        Basis(usize),
        Solve(usize),
    }
    let mut ech = SparseEchelon::new(n);
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    let mut images: Vec<[Image; 2]> = Vec::new();
    let mut loose: Vec<Vec<Q>> = Vec::new();
    for g in top_generators(m) {
        let mut e = vec![Q::zero(); n];
        e[g] = Q::one();
        let head = ech.insert(e.iter().cloned().enumerate()).then(|| {
            chosen.push(e.clone());
            images.push([Image::Zero, Image::Zero]);
            chosen.len() - 1
        });
        for (arrow, a) in [m.x(), m.y()].into_iter().enumerate() {
            let mut prev = head;
            let mut v = a.mul_vec(&e);
            while v.iter().any(|c| !c.is_zero()) {
                let image = if ech.insert(v.iter().cloned().enumerate()) {
                    chosen.push(v.clone());
                    images.push([Image::Zero, Image::Zero]);
                    Image::Basis(chosen.len() - 1)
                } else {
                    loose.push(v.clone());
                    Image::Solve(loose.len() - 1)
                };
                let next = match image {
                    Image::Basis(k) => Some(k),
                    _ => None,
                };
                if let Some(p) = prev {
                    images[p][arrow] = image;
                }
                prev = next;
                v = a.mul_vec(&v);
            }
        }
    }
    let p = Matrix::from_columns(n, &chosen);
    let coords = if loose.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        let (r, _) = p.hstack(&Matrix::from_columns(n, &loose)).rref();
        let cols: Vec<Vec<Q>> = (n..n + loose.len()).map(|j| r.column(j)[..n].to_vec()).collect();
        Matrix::from_columns(n, &cols)
    };
    let mut mats = [Matrix::zeros(n, n), Matrix::zeros(n, n)];
    for (j, imgs) in images.iter().enumerate() {
        for (arrow, img) in imgs.iter().enumerate() {
            match img {
                Image::Zero => {}
                Image::Basis(k) => mats[arrow][(*k, j)] = Q::one(),
                Image::Solve(k) => {
                    for i in 0..n {
                        mats[arrow][(i, j)] = coords[(i, *k)].clone();
                    }
                }
            }
        }
    }
    let [x, y] = mats;
    FiniteLengthModule::new(x, y).expect("a change of basis of a module")
}

/// The trace form on `End(M)` and a set of basis indices that is a basis modulo its radical.
fn trace_form(basis: &[Matrix]) -> (Matrix, Vec<usize>) {
    let s = basis.len();
    let mut g = Matrix::zeros(s, s);
    for i in 0..s {
        for j in i..s {
            let t = trace_of_product(&basis[i], &basis[j]);
            g[(i, j)] = t.clone();
            g[(j, i)] = t;
        }
    }
    let (_, pivots) = g.rref();
    (g, pivots)
}

/// Left multiplication by `a` on `End(M)/rad`, in the basis `end[p]` for `p` in `pivots`.
///
/// The functionals `h -> tr(h end[p])` identify the quotient with `Q^r`, so
/// the action is read off from `r^2` traces and never needs the full module.
fn quotient_action(a: &Matrix, end: &[Matrix], gram: &Matrix, pivots: &[usize]) -> Matrix {
    let r = pivots.len();
    let mut g = Matrix::zeros(r, r);
    let mut v = Matrix::zeros(r, r);
    for (i, &pi) in pivots.iter().enumerate() {
        let c = a * &end[pi];
        for (k, &pk) in pivots.iter().enumerate() {
            g[(i, k)] = gram[(pi, pk)].clone();
            v[(k, i)] = trace_of_product(&c, &end[pk]);
        }
    }
    &g.inverse().expect("trace form is nondegenerate on the pivots") * &v
}

/// `ker b^k` and `im b^k` for `k` large enough that both have stabilised.
fn fitting_parts(b: &Matrix) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let n = b.rows();
    let mut p = b.clone();
    let mut kernel = p.kernel_basis();
    loop {
        let next = &p * b;
        let k = next.kernel_basis();
        if k.len() == kernel.len() {
            break;
        }
        p = next;
        kernel = k;
    }
    (kernel, linalg::span_basis(n, &p.columns()))
}

fn trace_of_product(a: &Matrix, b: &Matrix) -> Q {
    let n = a.rows();
    let mut acc = Q::zero();
    for i in 0..n {
        for k in 0..n {
            let x = &a[(i, k)];
            if !x.is_zero() {
                let y = &b[(k, i)];
                if !y.is_zero() {
                    acc += x * y;
                }
            }
        }
    }
    acc
}

fn perfect_square_root(r: usize) -> Option<usize> {
    let k = (r as f64).sqrt().round() as usize;
    (k * k == r).then_some(k)
}

fn split(m: &FiniteLengthModule, cfg: IdentifyConfig, rng: &mut ChaCha8Rng, out: &mut Vec<Piece>) {
    let n = m.dim();
    if n == 0 {
        return;
    }
    let m = monomial_basis(m);
    let end = hom_space(&m, &m);
    // In characteristic zero the radical of End(M) is the kernel of the trace form.
    let (gram, pivots) = trace_form(&end);
    let r = pivots.len();
    if r == 1 {
        out.push(Piece::Block { module: m, copies: 1 });
        return;
    }
    let mut seen_factors = Vec::new();
    // Basis elements tend to have small eigenvalues, so they are tried before random combinations.
    let mut candidates = pivots.iter().map(|&p| end[p].clone()).collect::<Vec<_>>().into_iter();
    for attempt in 0..r + cfg.split_attempts {
        let a = match candidates.next() {
            Some(a) => a,
            None => linalg::random_combination(&end, cfg.sample.bound, rng),
        };
        let h = poly::squarefree_part(&quotient_action(&a, &end, &gram, &pivots).charpoly());
        let Some(f) = poly::rational_factor(&h, 3) else {
            if attempt >= r && poly::degree(&h).unwrap_or(0) > 1 {
                seen_factors.push(poly::render(&h));
            }
            continue;
        };
        let (kernel, image) = fitting_parts(&poly::eval_matrix(&f, &a));
        if kernel.is_empty() || kernel.len() == n {
            continue;
        }
        split(&m.restrict(&kernel), cfg, rng, out);
        split(&m.restrict(&image), cfg, rng, out);
        return;
    }
    match perfect_square_root(r) {
        Some(k) if n.is_multiple_of(k) => out.push(Piece::Block { module: m, copies: k }),
        _ => out.push(Piece::Stuck { module: m, factors: seen_factors }),
    }
}

struct Note {
    text: String,
    factors: Vec<String>,
}

type Counts = BTreeMap<(usize, usize), usize>;

/// Leg statistics of a module built from peaks and valleys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegCounts {
    /// `(x-leg, y-leg) -> number of peaks`.
    pub peaks: Counts,
    /// `(x-depth, y-depth) -> number of valleys`.
    pub valleys: Counts,
}

impl LegCounts {
    pub fn is_band_like(&self) -> bool {
        self.peaks.keys().chain(self.valleys.keys()).all(|&(a, b)| a > 0 && b > 0)
    }

    fn divide(&self, k: usize) -> Option<LegCounts> {
        let div = |c: &Counts| -> Option<Counts> {
            c.iter().map(|(key, &v)| (v % k == 0).then_some((*key, v / k))).collect()
        };
        Some(LegCounts { peaks: div(&self.peaks)?, valleys: div(&self.valleys)? })
    }
}

fn powers(a: &Matrix) -> Vec<Matrix> {
    let n = a.rows();
    let mut out = vec![Matrix::identity(n)];
    while !out.last().expect("nonempty").is_zero() {
        let next = out.last().expect("nonempty") * a;
        out.push(next);
    }
    out
}

/// Peak and valley statistics of `m`.
///
/// A top vector `t` has `x`-leg at least `a` exactly when `X^a t` is nonzero
/// modulo `X^{a+1} m`, which is well defined on the top because
/// `X^a(Xm + Ym) = X^{a+1} m`. Valleys of `x`-depth at least `a` and
/// `y`-depth at least `b` span `soc m ∩ X^a m ∩ Y^b m`.
pub fn leg_counts(m: &FiniteLengthModule) -> LegCounts {
    let n = m.dim();
    let xp = powers(m.x());
    let yp = powers(m.y());
    let (ix, iy) = (xp.len(), yp.len());
    let gens = top_generators(m);
    let lift = |g: usize| {
        let mut e = vec![Q::zero(); n];
        e[g] = Q::one();
        e
    };
    let lifts: Vec<Vec<Q>> = gens.iter().map(|&g| lift(g)).collect();
    let img = |ps: &[Matrix], a: usize| -> Vec<Vec<Q>> {
        if a >= ps.len() {
            Vec::new()
        } else {
            linalg::span_basis(n, &ps[a].columns())
        }
    };
    let im_x: Vec<Vec<Vec<Q>>> = (0..=ix).map(|a| img(&xp, a)).collect();
    let im_y: Vec<Vec<Vec<Q>>> = (0..=iy).map(|b| img(&yp, b)).collect();
    // below(a, b) = number of peaks with x-leg < a and y-leg < b.
    let below = |a: usize, b: usize| -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        let p = lifts.len();
        let xa = |v: &Vec<Q>| if a < ix { xp[a].mul_vec(v) } else { vec![Q::zero(); n] };
        let yb = |v: &Vec<Q>| if b < iy { yp[b].mul_vec(v) } else { vec![Q::zero(); n] };
        let sub_x = &im_x[(a + 1).min(ix)];
        let sub_y = &im_y[(b + 1).min(iy)];
        let mut cols: Vec<Vec<Q>> = Vec::new();
        for t in &lifts {
            let mut c = xa(t);
            c.extend(yb(t));
            cols.push(c);
        }
        for v in sub_x {
            let mut c = v.clone();
            c.extend(vec![Q::zero(); n]);
            cols.push(c);
        }
        for v in sub_y {
            let mut c = vec![Q::zero(); n];
            c.extend(v.iter().cloned());
            cols.push(c);
        }
        let rank = linalg::span_rank(2 * n, &cols) - sub_x.len() - sub_y.len();
        p - rank
    };
    let mut peaks = Counts::new();
    for a in 0..ix {
        for b in 0..iy {
            let c = below(a + 1, b + 1) + below(a, b);
            let d = below(a, b + 1) + below(a + 1, b);
            if c > d {
                peaks.insert((a, b), c - d);
            }
        }
    }
    let socle = m.x().transpose().hstack(&m.y().transpose()).transpose();
    let soc = socle.kernel_basis();
    let inter = |a: usize, b: usize| -> usize {
        let sx = if a < ix { im_x[a].clone() } else { Vec::new() };
        let sy = if b < iy { im_y[b].clone() } else { Vec::new() };
        let two = intersect(n, &soc, &sx);
        intersect(n, &two, &sy).len()
    };
    let mut valleys = Counts::new();
    for a in 0..ix {
        for b in 0..iy {
            let c = inter(a, b) + inter(a + 1, b + 1);
            let d = inter(a + 1, b) + inter(a, b + 1);
            if c > d {
                valleys.insert((a, b), c - d);
            }
        }
    }
    LegCounts { peaks, valleys }
}

/// Basis of the intersection of two subspaces given by bases.
fn intersect(n: usize, a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut cols = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|c| -c).collect::<Vec<Q>>()));
    let m = Matrix::from_columns(n, &cols);
    let ker = m.kernel_basis();
    let combos: Vec<Vec<Q>> = ker
        .iter()
        .map(|k| {
            let mut v = vec![Q::zero(); n];
            for (i, ai) in a.iter().enumerate() {
                if !k[i].is_zero() {
                    for (r, x) in ai.iter().enumerate() {
                        v[r] += &k[i] * x;
                    }
                }
            }
            v
        })
        .collect();
    linalg::span_basis(n, &combos)
}

fn take(c: &mut Counts, key: (usize, usize)) -> bool {
    match c.get_mut(&key) {
        Some(v) if *v > 0 => {
            *v -= 1;
            if *v == 0 {
                c.remove(&key);
            }
            true
        }
        _ => false,
    }
}

fn give(c: &mut Counts, key: (usize, usize)) {
    *c.entry(key).or_insert(0) += 1;
}

/// Every string word whose peaks and valleys match the counts exactly.
pub fn string_candidates(counts: &LegCounts) -> Vec<StringLabel> {
    let mut out = Vec::new();
    if counts.peaks.contains_key(&(0, 0)) {
        let unit: Counts = [((0, 0), 1)].into_iter().collect();
        if counts.peaks == unit && counts.valleys == unit {
            out.push(StringLabel::new(0, vec![], 0).expect("valid"));
        }
        return out;
    }
    let mut starts: Vec<usize> = vec![0];
    starts.extend(counts.peaks.keys().filter(|k| k.0 == 0).map(|k| k.1));
    for n0 in starts {
        let mut peaks = counts.peaks.clone();
        let mut valleys = counts.valleys.clone();
        if n0 > 0 && !take(&mut peaks, (0, n0)) {
            continue;
        }
        let mut pairs = Vec::new();
        walk_string(n0, n0, &mut pairs, &mut peaks, &mut valleys, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn walk_string(
    n0: usize,
    open: usize,
    pairs: &mut Vec<(usize, usize)>,
    peaks: &mut Counts,
    valleys: &mut Counts,
    out: &mut Vec<StringLabel>,
) {
    let mut tails: Vec<usize> = vec![0];
    tails.extend(peaks.keys().filter(|k| k.1 == 0 && k.0 > 0).map(|k| k.0));
    for t in tails {
        let tail_peak = t > 0;
        if tail_peak && !take(peaks, (t, 0)) {
            continue;
        }
        if take(valleys, (t, open)) {
            if peaks.is_empty() && valleys.is_empty() && !(n0 == 0 && t == 0 && pairs.is_empty()) {
                if let Ok(s) = StringLabel::new(n0, pairs.clone(), t) {
                    out.push(s);
                }
            }
            give(valleys, (t, open));
        }
        if tail_peak {
            give(peaks, (t, 0));
        }
    }
    let inner: Vec<(usize, usize)> = peaks.keys().copied().filter(|&(a, b)| a > 0 && b > 0).collect();
    for (a, b) in inner {
        if !valleys.contains_key(&(a, open)) {
            continue;
        }
        take(peaks, (a, b));
        take(valleys, (a, open));
        pairs.push((a, b));
        walk_string(n0, b, pairs, peaks, valleys, out);
        pairs.pop();
        give(valleys, (a, open));
        give(peaks, (a, b));
    }
}

/// Every non-periodic cyclic band word (least rotation) matching the counts.
pub fn band_words(counts: &LegCounts) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let Some(&first) = counts.peaks.keys().next() else { return out };
    let mut peaks = counts.peaks.clone();
    let mut valleys = counts.valleys.clone();
    take(&mut peaks, first);
    let mut word = vec![first];
    walk_band(&mut word, &mut peaks, &mut valleys, &mut out);
    let mut out: Vec<Vec<(usize, usize)>> =
        out.into_iter().filter(|w| !is_periodic(w)).map(|w| least_rotation(&w)).collect();
    out.sort();
    out.dedup();
    out
}

fn walk_band(word: &mut Vec<(usize, usize)>, peaks: &mut Counts, valleys: &mut Counts, out: &mut Vec<Vec<(usize, usize)>>) {
    let last = *word.last().expect("nonempty");
    if peaks.is_empty() {
        let closing = (word[0].0, last.1);
        if valleys.len() == 1 && valleys.get(&closing) == Some(&1) {
            out.push(word.clone());
        }
        return;
    }
    let next: Vec<(usize, usize)> = peaks.keys().copied().collect();
    for p in next {
        if !valleys.contains_key(&(p.0, last.1)) {
            continue;
        }
        take(peaks, p);
        take(valleys, (p.0, last.1));
        word.push(p);
        walk_band(word, peaks, valleys, out);
        word.pop();
        give(valleys, (p.0, last.1));
        give(peaks, p);
    }
}

fn certify(cand: &ModuleLabel, copies: usize, target: &FiniteLengthModule, cfg: IdentifyConfig) -> bool {
    let one = label_module(cand);
    let many = direct_sum(&vec![one; copies]);
    is_isomorphic_with(&many, target, cfg.sample, cfg.seed).is_true()
}

fn read_block(u: &FiniteLengthModule, copies: usize, cfg: IdentifyConfig) -> Result<ModuleLabel, Note> {
    let fail = |text: String, factors: Vec<String>| Note { text, factors };
    let counts = leg_counts(u);
    let Some(per_copy) = counts.divide(copies) else {
        return Err(fail(format!("leg counts of a {}-dimensional block are not divisible by {copies}", u.dim()), vec![]));
    };
    if !per_copy.is_band_like() {
        for s in string_candidates(&per_copy) {
            if s.dim() * copies == u.dim() && certify(&ModuleLabel::String(s.clone()), copies, u, cfg) {
                return Ok(ModuleLabel::String(s));
            }
        }
        return Err(fail(format!("no string word certified for a {}-dimensional block", u.dim()), vec![]));
    }
    let g = per_copy.peaks.values().chain(per_copy.valleys.values()).fold(0usize, |acc, &v| acc.gcd(&v));
    let mut factors = Vec::new();
    for m in (1..=g).rev().filter(|d| g % d == 0) {
        let Some(word_counts) = per_copy.divide(m) else { continue };
        for qw in band_words(&word_counts) {
            let per = qw.iter().map(|&(a, b)| a + b).sum::<usize>();
            if per * m * copies != u.dim() {
                continue;
            }
            let (roots, residue) = band_eigenvalues(u, &qw);
            if let Some(r) = residue {
                factors.push(r);
            }
            for lambda in roots {
                let Ok(b) = BandLabel::new(qw.clone(), m, lambda) else { continue };
                let cand = ModuleLabel::Band(b);
                if certify(&cand, copies, u, cfg) {
                    return Ok(cand);
                }
            }
        }
    }
    Err(fail(format!("no band word and eigenvalue certified for a {}-dimensional block", u.dim()), factors))
}

/// Rational `mu` at which `dim Hom(M(q,1,mu), u)` jumps, plus the rest of the
/// jump polynomial when it has no further rational roots.
///
/// A homomorphism from `M(q,1,mu)` is a tuple `(u_1..u_N)` satisfying
/// `y^{m_{j-1}} u_{j-1} + x^{n_j} u_j = 0` for `j >= 2` and
/// `x^{n_1} u_1 + mu y^{m_N} u_N = 0`. On the solution space `W` of the
/// first family the last equation is a pencil `F + mu G`, and its rank drops
/// exactly at the roots of `det(L (F + mu G) R)` for generic `L`, `R` that
/// are also rank drops.
pub fn band_eigenvalues(u: &FiniteLengthModule, word: &[(usize, usize)]) -> (Vec<Q>, Option<String>) {
    let n = u.dim();
    let nq = word.len();
    let xs: Vec<Matrix> = word.iter().map(|&(a, _)| u.x().pow(a)).collect();
    let ys: Vec<Matrix> = word.iter().map(|&(_, b)| u.y().pow(b)).collect();
    let mut sys = SparseEchelon::new(nq * n);
    for j in 1..nq {
        for r in 0..n {
            let mut eq = Vec::new();
            for s in 0..n {
                let yv = &ys[j - 1][(r, s)];
                if !yv.is_zero() {
                    eq.push(((j - 1) * n + s, yv.clone()));
                }
                let xv = &xs[j][(r, s)];
                if !xv.is_zero() {
                    eq.push((j * n + s, xv.clone()));
                }
            }
            if !eq.is_empty() {
                sys.insert(eq);
            }
        }
    }
    let w = sys.kernel_basis();
    if w.is_empty() {
        return (Vec::new(), None);
    }
    let apply = |mat: &Matrix, block: usize| -> Matrix {
        let cols: Vec<Vec<Q>> = w.iter().map(|v| mat.mul_vec(&v[block * n..(block + 1) * n])).collect();
        Matrix::from_columns(n, &cols)
    };
    let f = apply(&xs[0], 0);
    let g = apply(&ys[nq - 1], nq - 1);
    let pencil = |mu: &Q| &f + &g.scale(mu);
    let (r, probe) = (0..4).map(|t| (pencil(&q(7 + 13 * t)).rank(), q(7 + 13 * t))).max_by_key(|p| p.0).expect("four probes");
    if r == 0 {
        return (Vec::new(), None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xba4d);
    let rand_mat = |rows: usize, cols: usize, rng: &mut ChaCha8Rng| {
        use rand::Rng;
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = q(rng.gen_range(-9..=9));
            }
        }
        m
    };
    let mut compressions = (0..16).filter_map(|_| {
        let l = rand_mat(r, n, &mut rng);
        let rr = rand_mat(w.len(), r, &mut rng);
        let a = &(&l * &f) * &rr;
        let b = &(&l * &g) * &rr;
        (&a + &b.scale(&probe)).is_invertible().then_some((a, b))
    });
    let det_poly = |(a, b): (Matrix, Matrix)| {
        let pts: Vec<(Q, Q)> = (0..=r as i64).map(|t| (q(t), (&a + &b.scale(&q(t))).det())).collect();
        poly::interpolate(&pts)
    };
    let (Some(first), Some(second)) = (compressions.next(), compressions.next()) else {
        return (Vec::new(), Some("no compression of the pencil kept its rank".into()));
    };
    // Every compression vanishes at a true rank drop; stray roots of one compression are not shared.
    let det_poly = poly::gcd(&det_poly(first), &det_poly(second));
    let mut roots = Vec::new();
    let mut rest: Poly = poly::squarefree_part(&det_poly);
    for root in poly::rational_roots(&det_poly) {
        rest = poly::deflate(&rest, &root);
        if !root.is_zero() && pencil(&root).rank() < r {
            roots.push(root);
        }
    }
    let residue = (poly::degree(&rest).unwrap_or(0) > 0).then(|| poly::render(&rest));
    (roots, residue)
}
