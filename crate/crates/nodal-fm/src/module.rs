//! Finite length modules over `R = k[[x,y]]/(xy)`: a vector space with two
//! commuting nilpotent operators whose products vanish.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::labels::{jordan, BandLabel, Diagram, ModuleLabel, StringLabel};
use crate::linalg::{self, Matrix, Sampled, SampleConfig, SparseEchelon, Q};
use crate::trunc::{Presentation, RingPoly, TruncPiece};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("X and Y must be square matrices of the same size")]
    Shape,
    #[error("XY or YX is nonzero")]
    NotAnnihilated,
    #[error("X or Y is not nilpotent")]
    NotNilpotent,
}

/// `(V, X, Y)` with `XY = YX = 0` and `X`, `Y` nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLengthModule {
    x: Matrix,
    y: Matrix,
}

impl FiniteLengthModule {
    pub fn new(x: Matrix, y: Matrix) -> Result<Self, ModuleError> {
        let n = x.rows();
        if !x.is_square() || !y.is_square() || y.rows() != n {
            return Err(ModuleError::Shape);
        }
        if !(&x * &y).is_zero() || !(&y * &x).is_zero() {
            return Err(ModuleError::NotAnnihilated);
        }
        if !x.pow(n).is_zero() || !y.pow(n).is_zero() {
            return Err(ModuleError::NotNilpotent);
        }
        Ok(FiniteLengthModule { x, y })
    }

    pub fn zero() -> Self {
        FiniteLengthModule { x: Matrix::zeros(0, 0), y: Matrix::zeros(0, 0) }
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &Matrix {
        &self.y
    }

    /// Same module in the basis given by the columns of an invertible `p`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Self, linalg::LinalgError> {
        let pinv = p.inverse()?;
        Ok(FiniteLengthModule { x: &(&pinv * &self.x) * p, y: &(&pinv * &self.y) * p })
    }

    /// The submodule spanned by the columns of `basis`, which must be `X`- and `Y`-stable.
    pub fn restrict(&self, basis: &[Vec<Q>]) -> Self {
        let n = self.dim();
        let b = Matrix::from_columns(n, basis);
        let act = |a: &Matrix| {
            let image = &(a * &b);
            let cols: Vec<Vec<Q>> = image
                .columns()
                .iter()
                .map(|v| b.solve(v).expect("length").expect("subspace is not stable"))
                .collect();
            Matrix::from_columns(basis.len(), &cols)
        };
        FiniteLengthModule { x: act(&self.x), y: act(&self.y) }
    }

    /// Dimension of the socle `ker X ∩ ker Y`.
    pub fn socle_dim(&self) -> usize {
        self.dim() - self.x.transpose().hstack(&self.y.transpose()).rank()
    }
}

/// Block-diagonal sum.
pub fn direct_sum(mods: &[FiniteLengthModule]) -> FiniteLengthModule {
    mods.iter().fold(FiniteLengthModule::zero(), |acc, m| FiniteLengthModule {
        x: acc.x.block_diag(&m.x),
        y: acc.y.block_diag(&m.y),
    })
}

/// `(V*, X^T, Y^T)`.
pub fn matlis_dual(m: &FiniteLengthModule) -> FiniteLengthModule {
    FiniteLengthModule { x: m.x.transpose(), y: m.y.transpose() }
}

/// Pullback along the involution swapping `x` and `y`.
pub fn involution_pullback(m: &FiniteLengthModule) -> FiniteLengthModule {
    FiniteLengthModule { x: m.y.clone(), y: m.x.clone() }
}

/// Matlis dual followed by the involution.
pub fn twisted_matlis(m: &FiniteLengthModule) -> FiniteLengthModule {
    involution_pullback(&matlis_dual(m))
}

fn from_presentation(p: &Presentation) -> FiniteLengthModule {
    let c = p.cokernel();
    FiniteLengthModule { x: c.x, y: c.y }
}

/// Relation matrix of a band: `x^{n_i} I` on the diagonal, `y^{m_i} I` just
/// above it, and `y^{m_N} J_m(lambda)` in the bottom-left block.
pub fn band_presentation(b: &BandLabel) -> Presentation {
    let q = b.q();
    let (nq, m) = (q.len(), b.m());
    let size = nq * m;
    let mut rel = vec![vec![RingPoly::zero(); size]; size];
    let jm = jordan(m, b.lambda());
    let mut place = |bi: usize, bj: usize, block: &Matrix, mono: &RingPoly| {
        for r in 0..m {
            for c in 0..m {
                if !block[(r, c)].is_zero() {
                    let add = mono.scale(&block[(r, c)]);
                    rel[bi * m + r][bj * m + c] = rel[bi * m + r][bj * m + c].add(&add);
                }
            }
        }
    };
    let id = Matrix::identity(m);
    for i in 0..nq {
        let (ni, mi) = q[i];
        place(i, i, &id, &RingPoly::x_pow(ni));
        if i + 1 < nq {
            place(i, i + 1, &id, &RingPoly::y_pow(mi));
        } else {
            place(i, 0, &jm, &RingPoly::y_pow(mi));
        }
    }
    Presentation::new(vec![TruncPiece::FullR; size], rel, None).expect("square relation matrix")
}

/// Relation matrix of a string over `k[[y]] + R^N + k[[x]]`: column `j` has
/// `y^{n_j}` in row `j` and `x^{m_{j+1}}` in row `j+1`.
pub fn string_presentation(s: &StringLabel) -> Presentation {
    let gens = s.generators();
    let rows = gens.len();
    let mut targets = vec![TruncPiece::FullR; rows];
    targets[0] = TruncPiece::YOnly;
    targets[rows - 1] = TruncPiece::XOnly;
    let mut rel = vec![vec![RingPoly::zero(); rows - 1]; rows];
    for j in 0..rows - 1 {
        rel[j][j] = RingPoly::y_pow(gens[j].1);
        rel[j + 1][j] = RingPoly::x_pow(gens[j + 1].0);
    }
    Presentation::new(targets, rel, None).expect("well formed relation matrix")
}

pub fn band_module(b: &BandLabel) -> FiniteLengthModule {
    from_presentation(&band_presentation(b))
}

pub fn string_module(s: &StringLabel) -> FiniteLengthModule {
    from_presentation(&string_presentation(s))
}

pub fn label_module(l: &ModuleLabel) -> FiniteLengthModule {
    match l {
        ModuleLabel::Band(b) => band_module(b),
        ModuleLabel::String(s) => string_module(s),
    }
}

/// The module read straight off the vertex diagram, without any cokernel.
pub fn diagram_module(l: &ModuleLabel) -> FiniteLengthModule {
    let (x, y) = Diagram::of_label(l).matrices();
    FiniteLengthModule { x, y }
}

pub fn cokernel_module(p: &Presentation) -> FiniteLengthModule {
    from_presentation(p)
}

fn column_space(m: &Matrix) -> Vec<Vec<Q>> {
    linalg::span_basis(m.rows(), &m.columns())
}

fn dim_sum(n: usize, a: &[Vec<Q>], b: &[Vec<Q>]) -> usize {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    linalg::span_rank(n, &all)
}

fn dim_intersection(n: usize, a: &[Vec<Q>], b: &[Vec<Q>]) -> usize {
    a.len() + b.len() - dim_sum(n, a, b)
}

fn image_of(m: &Matrix, vs: &[Vec<Q>]) -> usize {
    let imgs: Vec<Vec<Q>> = vs.iter().map(|v| m.mul_vec(v)).collect();
    linalg::span_rank(m.rows(), &imgs)
}

/// Additive invariants used to rule out isomorphism cheaply.
///
/// For `0 <= a, b <= dim` it records, in this order, the dimensions of
/// `im X^a`, `im Y^b`, `ker X^a ∩ ker Y^b`, `im X^a + im Y^b`,
/// `X^a(ker Y^b)`, `Y^b(ker X^a)`, `im X^a ∩ ker Y^b` and `im Y^b ∩ ker X^a`,
/// each flattened over `(a, b)` in row-major order.
pub fn rank_profile(m: &FiniteLengthModule) -> Vec<usize> {
    let n = m.dim();
    // Powers stabilise at zero after the nilpotency index, so only that many are computed.
    let powers = |a: &Matrix| {
        let mut out = vec![Matrix::identity(n)];
        while !out.last().expect("nonempty").is_zero() && out.len() <= n {
            let next = out.last().expect("nonempty") * a;
            out.push(next);
        }
        out
    };
    let xp = powers(&m.x);
    let yp = powers(&m.y);
    let cap = |v: &[Matrix], a: usize| v[a.min(v.len() - 1)].clone();
    let ix = xp.len();
    let iy = yp.len();
    let im_x: Vec<Vec<Vec<Q>>> = (0..ix).map(|a| column_space(&xp[a])).collect();
    let im_y: Vec<Vec<Vec<Q>>> = (0..iy).map(|b| column_space(&yp[b])).collect();
    let ker_x: Vec<Vec<Vec<Q>>> = (0..ix).map(|a| xp[a].kernel_basis()).collect();
    let ker_y: Vec<Vec<Vec<Q>>> = (0..iy).map(|b| yp[b].kernel_basis()).collect();
    let mut fam = vec![vec![0usize; ix * iy]; 8];
    for a in 0..ix {
        for b in 0..iy {
            let k = a * iy + b;
            fam[0][k] = im_x[a].len();
            fam[1][k] = im_y[b].len();
            fam[2][k] = dim_intersection(n, &ker_x[a], &ker_y[b]);
            fam[3][k] = dim_sum(n, &im_x[a], &im_y[b]);
            fam[4][k] = image_of(&cap(&xp, a), &ker_y[b]);
            fam[5][k] = image_of(&cap(&yp, b), &ker_x[a]);
            fam[6][k] = dim_intersection(n, &im_x[a], &ker_y[b]);
            fam[7][k] = dim_intersection(n, &im_y[b], &ker_x[a]);
        }
    }
    let mut out = Vec::with_capacity(8 * (n + 1) * (n + 1));
    for f in &fam {
        for a in 0..=n {
            for b in 0..=n {
                out.push(f[a.min(ix - 1) * iy + b.min(iy - 1)]);
            }
        }
    }
    out
}

/// Generators of `m` as lifts of a basis of `m / (Xm + Ym)`, chosen among the standard basis vectors.
pub fn top_generators(m: &FiniteLengthModule) -> Vec<usize> {
    let n = m.dim();
    let mut ech = SparseEchelon::new(n);
    for a in [&m.x, &m.y] {
        for c in a.columns() {
            ech.insert(c.into_iter().enumerate());
        }
    }
    (0..n).filter(|&k| ech.insert([(k, Q::from_integer(1.into()))])).collect()
}

/// Basis of `Hom_R(m, n)` as `dim n x dim m` matrices.
///
/// Rather than solving for all `dim m * dim n` entries, a homomorphism is
/// pinned down by the images of a set of generators of `m`; those images
/// must satisfy every linear relation among the monomials `x^a g, y^b g`,
/// and the nilpotency order of each generator.
pub fn hom_space(m: &FiniteLengthModule, n: &FiniteLengthModule) -> Vec<Matrix> {
    let dm = m.dim();
    let dn = n.dim();
    if dm == 0 || dn == 0 {
        return Vec::new();
    }
    let gens = top_generators(m);
    // monomials: (generator index, kind, exponent); kind 0 = 1, 1 = x^a, 2 = y^b
    let mut monos: Vec<(usize, u8, usize)> = Vec::new();
    let mut vecs: Vec<Vec<Q>> = Vec::new();
    let mut xlen = Vec::new();
    let mut ylen = Vec::new();
    for (gi, &g) in gens.iter().enumerate() {
        let mut e = vec![Q::zero(); dm];
        e[g] = Q::from_integer(1.into());
        monos.push((gi, 0, 0));
        vecs.push(e.clone());
        for (kind, a, lens) in [(1u8, &m.x, &mut xlen), (2u8, &m.y, &mut ylen)] {
            let mut v = a.mul_vec(&e);
            let mut k = 0;
            while v.iter().any(|c| !c.is_zero()) {
                k += 1;
                monos.push((gi, kind, k));
                vecs.push(v.clone());
                v = a.mul_vec(&v);
            }
            lens.push(k);
        }
    }
    let phi = Matrix::from_columns(dm, &vecs);
    let relations = phi.kernel_basis();
    let maxpow = xlen.iter().chain(&ylen).copied().max().unwrap_or(0) + 1;
    let xpow: Vec<Matrix> = (0..=maxpow).map(|a| n.x.pow(a)).collect();
    let ypow: Vec<Matrix> = (0..=maxpow).map(|b| n.y.pow(b)).collect();
    let act = |kind: u8, e: usize| -> &Matrix {
        match kind {
            0 => &xpow[0],
            1 => &xpow[e],
            _ => &ypow[e],
        }
    };
    let var = |gi: usize, s: usize| gi * dn + s;
    let mut sys = SparseEchelon::new(gens.len() * dn);
    for rel in &relations {
        for r in 0..dn {
            let mut eq: Vec<(usize, Q)> = Vec::new();
            for (mi, c) in rel.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (gi, kind, e) = monos[mi];
                let a = act(kind, e);
                for s in 0..dn {
                    let v = &a[(r, s)];
                    if !v.is_zero() {
                        eq.push((var(gi, s), c * v));
                    }
                }
            }
            if !eq.is_empty() {
                sys.insert(eq);
            }
        }
    }
    for gi in 0..gens.len() {
        for a in [&xpow[xlen[gi] + 1], &ypow[ylen[gi] + 1]] {
            for r in 0..dn {
                let eq: Vec<(usize, Q)> =
                    (0..dn).filter(|&s| !a[(r, s)].is_zero()).map(|s| (var(gi, s), a[(r, s)].clone())).collect();
                if !eq.is_empty() {
                    sys.insert(eq);
                }
            }
        }
    }
    let (_, pivots) = phi.rref();
    let pmat = Matrix::from_columns(dm, &pivots.iter().map(|&p| vecs[p].clone()).collect::<Vec<_>>());
    let pinv = pmat.inverse().expect("monomials span the module");
    sys.kernel_basis()
        .into_iter()
        .map(|sol| {
            let images: Vec<Vec<Q>> = pivots
                .iter()
                .map(|&p| {
                    let (gi, kind, e) = monos[p];
                    act(kind, e).mul_vec(&sol[gi * dn..(gi + 1) * dn])
                })
                .collect();
            &Matrix::from_columns(dn, &images) * &pinv
        })
        .collect()
}

/// Why two modules were found not to be isomorphic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonIsoReason {
    Dimension,
    RankProfile,
    HomDimension { hom_mn: usize, hom_nm: usize, end_m: usize, end_n: usize },
    /// The determinant of a generic element of `Hom(m, n)` vanishes identically.
    NoInvertibleElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// An explicit isomorphism `S` with `S X = X' S` and `S Y = Y' S`.
    Isomorphic(Matrix),
    NotIsomorphic(NonIsoReason),
    /// Equal profiles and Hom dimensions but no invertible element was sampled.
    Undecided { hom_dim: usize, attempts: usize },
}

impl IsoOutcome {
    pub fn is_true(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }

    pub fn is_false(&self) -> bool {
        matches!(self, IsoOutcome::NotIsomorphic(_))
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

pub fn is_isomorphic(m: &FiniteLengthModule, n: &FiniteLengthModule) -> IsoOutcome {
    is_isomorphic_with(m, n, SampleConfig::default(), DEFAULT_SEED)
}

pub fn is_isomorphic_with(
    m: &FiniteLengthModule,
    n: &FiniteLengthModule,
    cfg: SampleConfig,
    seed: u64,
) -> IsoOutcome {
    if m.dim() != n.dim() {
        return IsoOutcome::NotIsomorphic(NonIsoReason::Dimension);
    }
    if m.dim() == 0 {
        return IsoOutcome::Isomorphic(Matrix::zeros(0, 0));
    }
    if rank_profile(m) != rank_profile(n) {
        return IsoOutcome::NotIsomorphic(NonIsoReason::RankProfile);
    }
    let h = hom_space(m, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Sampled::Found(s) = linalg::random_invertible_element(&h, cfg, &mut rng) {
        return IsoOutcome::Isomorphic(s);
    }
    // Only the negative answer needs the other Hom spaces.
    let end_m = hom_space(m, m).len();
    let hom_nm = hom_space(n, m).len();
    if h.len() != end_m || hom_nm != end_m {
        let end_n = hom_space(n, n).len();
        return IsoOutcome::NotIsomorphic(NonIsoReason::HomDimension {
            hom_mn: h.len(),
            hom_nm,
            end_m,
            end_n,
        });
    }
    if h.len() <= 2 && determinant_vanishes(&h) {
        return IsoOutcome::NotIsomorphic(NonIsoReason::NoInvertibleElement);
    }
    IsoOutcome::Undecided { hom_dim: h.len(), attempts: cfg.retries.max(1) }
}

/// Exact test, for a space spanned by at most two matrices, that no element is invertible.
///
/// `det(s S_1 + t S_2)` is homogeneous of degree `n` in `(s, t)`, so it is
/// identically zero as soon as it vanishes at `n + 1` distinct points of the
/// projective line.
fn determinant_vanishes(h: &[Matrix]) -> bool {
    match h {
        [] => true,
        [a] => !a.is_invertible(),
        [a, b] => {
            let n = a.rows();
            (0..=n as i64).all(|t| !(&a.scale(&linalg::q(t)) + b).is_invertible())
                && !a.is_invertible()
        }
        _ => false,
    }
}

/// True if `s` intertwines `m` and `n`.
pub fn is_homomorphism(s: &Matrix, m: &FiniteLengthModule, n: &FiniteLengthModule) -> bool {
    (s * &m.x) == (&n.x * s) && (s * &m.y) == (&n.y * s)
}

/// Result of comparing the cokernel of a presentation at two truncation orders.
#[derive(Clone, Debug)]
pub enum Stability {
    Stable { order: usize, dim: usize },
    /// The dimension changed, so the order is too small for this presentation.
    DimensionJump { order: usize, dims: (usize, usize) },
    NotIsomorphic { order: usize, outcome: IsoOutcome },
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        matches!(self, Stability::Stable { .. })
    }
}

/// Checks that truncating at the presentation's order and one past it give isomorphic cokernels.
pub fn stability_check(p: &Presentation) -> Stability {
    let order = p.order();
    let a = cokernel_module(p);
    let b = cokernel_module(&p.with_order(order + 1));
    if a.dim() != b.dim() {
        return Stability::DimensionJump { order, dims: (a.dim(), b.dim()) };
    }
    match is_isomorphic(&a, &b) {
        IsoOutcome::Isomorphic(_) => Stability::Stable { order, dim: a.dim() },
        outcome => Stability::NotIsomorphic { order, outcome },
    }
}
