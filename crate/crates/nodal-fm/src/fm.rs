//! The Fourier–Mukai transform on semistable degree zero sheaves.
//!
//! [`fm_forward`] and [`fm_inverse`] implement the dictionary between
//! multidegrees and band/string words. [`verify_fm`] checks the dictionary
//! against a direct computation: the stalk at the node of the transform is
//! the cokernel of the completed evaluation map `H^0(E(p_0)) ⊗ R -> E(p_0)^`,
//! whose matrix is built from an explicit basis of global sections.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::identify::{identify_with, Identified, IdentifyConfig};
use crate::labels::{jordan, BandLabel, LabelError, StringLabel};
use crate::linalg::{Matrix, SparseEchelon, Q};
use crate::module::{cokernel_module, is_isomorphic_with, label_module, twisted_matlis, IsoOutcome};
use crate::sheaf::{band_multidegree, sign, string_multidegree, BandDesc, SheafDesc, Shape, StringDesc, TorsionDesc};
use crate::trunc::{Monomial, Presentation, RingPoly, TruncPiece};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FmError {
    #[error("{0} is not semistable of degree zero")]
    NotSemistable(String),
    #[error("{0} is supported at a smooth point; it has no evaluation matrix at the node")]
    SmoothSupport(String),
    #[error("string word {0} has no preimage")]
    NoPreimage(String),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("gluing matrix must be square and invertible")]
    Glue,
    #[error("the paper basis only covers m = 1 and n = 2, 3")]
    NoPaperBasis,
}

pub fn fm_forward(desc: &SheafDesc) -> Result<TorsionDesc, FmError> {
    match (desc, desc.shape()) {
        (_, Shape::NotSS) => Err(FmError::NotSemistable(desc.to_string())),
        (SheafDesc::Band(b), Shape::Atiyah) => Ok(TorsionDesc::SmoothPoint { lambda: b.lambda().clone(), len: b.m() }),
        (SheafDesc::Band(b), Shape::Band { runs, .. }) => {
            let lambda = sign(b.d().len() + runs.len()) * b.lambda();
            Ok(TorsionDesc::SingularBand(BandLabel::new(runs, b.m(), lambda)?))
        }
        (SheafDesc::String(_), Shape::String { runs }) => {
            let last = runs.len() - 1;
            let pairs: Vec<(usize, usize)> = runs
                .iter()
                .enumerate()
                .map(|(i, &(n, m))| (if i == 0 { n } else { n + 1 }, if i == last { m } else { m + 1 }))
                .collect();
            Ok(TorsionDesc::SingularString(StringLabel::new(0, pairs, 0)?))
        }
        _ => unreachable!("shape always matches the descriptor kind"),
    }
}

pub fn fm_inverse(t: &TorsionDesc) -> Result<SheafDesc, FmError> {
    let desc = match t {
        TorsionDesc::SmoothPoint { lambda, len } => SheafDesc::Band(BandDesc::new(vec![0], *len, lambda.clone()).map_err(|_| FmError::Glue)?),
        TorsionDesc::SingularBand(b) => {
            let d = band_multidegree(b.q());
            let lambda = sign(d.len() + b.q().len()) * b.lambda();
            SheafDesc::Band(BandDesc::new(d, b.m(), lambda).map_err(|e| FmError::NoPreimage(e.to_string()))?)
        }
        TorsionDesc::SingularString(s) => {
            let mut full: Vec<(usize, usize)> = Vec::new();
            if s.n0() > 0 {
                full.push((0, s.n0()));
            }
            full.extend_from_slice(s.pairs());
            if s.tail() > 0 {
                full.push((s.tail(), 0));
            }
            if full.is_empty() {
                full.push((0, 0));
            }
            let last = full.len() - 1;
            let mut runs = Vec::with_capacity(full.len());
            for (i, &(a, b)) in full.iter().enumerate() {
                let n = if i == 0 { Some(a) } else { a.checked_sub(1) };
                let m = if i == last { Some(b) } else { b.checked_sub(1) };
                match (n, m) {
                    (Some(n), Some(m)) => runs.push((n, m)),
                    _ => return Err(FmError::NoPreimage(s.to_string())),
                }
            }
            SheafDesc::String(StringDesc::new(string_multidegree(&runs)).map_err(|e| FmError::NoPreimage(e.to_string()))?)
        }
    };
    Ok(desc)
}

/// Generators of the action on charges: `A = T_O`, `B = T_{k(p_0)}` and the shift `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Letter {
    A,
    B,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistLetter {
    pub letter: Letter,
    pub inverse: bool,
}

pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_pow(a: &Mat2, k: usize) -> Mat2 {
    (0..k).fold(IDENTITY, |acc, _| mat2_mul(&acc, a))
}

/// Action on the column `(rank, degree)`.
pub fn letter_matrix(l: TwistLetter) -> Mat2 {
    match (l.letter, l.inverse) {
        (Letter::A, false) => [[1, -1], [0, 1]],
        (Letter::A, true) => [[1, 1], [0, 1]],
        (Letter::B, false) => [[1, 0], [1, 1]],
        (Letter::B, true) => [[1, 0], [-1, 1]],
        (Letter::T, _) => [[-1, 0], [0, -1]],
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unexpected {found:?} at byte {offset} in twist word")]
pub struct WordError {
    pub offset: usize,
    pub found: String,
}

/// Parses words such as `BAB`, `A^-1 B`, `T^-1`.
pub fn parse_word(s: &str) -> Result<Vec<TwistLetter>, WordError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let letter = match c {
            b' ' | b'\t' | b'\n' | b'*' | b'.' => {
                i += 1;
                continue;
            }
            b'A' => Letter::A,
            b'B' => Letter::B,
            b'T' => Letter::T,
            _ => return Err(WordError { offset: i, found: s[i..].chars().next().unwrap_or(' ').to_string() }),
        };
        i += 1;
        let mut inverse = false;
        if s[i..].starts_with("^-1") {
            inverse = true;
            i += 3;
        } else if s[i..].starts_with('^') {
            return Err(WordError { offset: i, found: "^".into() });
        }
        out.push(TwistLetter { letter, inverse });
    }
    Ok(out)
}

/// Product of the letter matrices in written order, so the rightmost letter acts first.
pub fn sl2_matrix(word: &[TwistLetter]) -> Mat2 {
    word.iter().fold(IDENTITY, |acc, &l| mat2_mul(&acc, &letter_matrix(l)))
}

pub fn apply_mat2(m: &Mat2, rank: i64, degree: i64) -> (i64, i64) {
    (m[0][0] * rank + m[0][1] * degree, m[1][0] * rank + m[1][1] * degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub name: &'static str,
    pub lhs: Mat2,
    pub rhs: Mat2,
    pub holds: bool,
}

pub fn check_relations() -> Vec<RelationCheck> {
    let w = |s: &str| sl2_matrix(&parse_word(s).expect("fixed word"));
    let neg = [[-1, 0], [0, -1]];
    let bab = w("BAB");
    let ab = w("AB");
    let checks = [
        ("ABA = BAB", w("ABA"), bab),
        ("(AB)^6 = I", mat2_pow(&ab, 6), IDENTITY),
        ("(BAB)^2 = -I", mat2_pow(&bab, 2), neg),
        ("(BAB)^4 = I", mat2_pow(&bab, 4), IDENTITY),
        ("T^2 acts trivially", w("TT"), IDENTITY),
    ];
    checks.into_iter().map(|(name, lhs, rhs)| RelationCheck { name, holds: lhs == rhs, lhs, rhs }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Topology {
    Cycle,
    Chain,
}

/// A line bundle (tensored with `k^m`) on a cycle or chain of `n` lines.
///
/// On a cycle the node joining the last and first line is glued with the
/// matrix `glue`: `f_n(0:1) = glue · f_1(1:0)`. All other nodes are glued by
/// the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueSpec {
    pub topology: Topology,
    pub degrees: Vec<i64>,
    pub glue: Matrix,
}

impl GlueSpec {
    pub fn new(topology: Topology, degrees: Vec<i64>, glue: Matrix) -> Result<Self, FmError> {
        if degrees.is_empty() || !glue.is_square() || glue.rows() == 0 || !glue.is_invertible() {
            return Err(FmError::Glue);
        }
        Ok(GlueSpec { topology, degrees, glue })
    }

    pub fn scalar(topology: Topology, degrees: Vec<i64>, lambda: Q) -> Result<Self, FmError> {
        GlueSpec::new(topology, degrees, Matrix::from_columns(1, &[vec![lambda]]))
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn m(&self) -> usize {
        self.glue.rows()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let sum: i64 = self.degrees.iter().sum();
        let m = self.m() as i64;
        match self.topology {
            Topology::Cycle => m * sum,
            Topology::Chain => m * (sum + 1),
        }
    }

    fn layout(&self) -> Layout {
        let m = self.m();
        let mut offsets = Vec::with_capacity(self.n());
        let mut total = 0;
        for &d in &self.degrees {
            offsets.push(total);
            total += if d >= 0 { (d as usize + 1) * m } else { 0 };
        }
        Layout { degrees: self.degrees.clone(), m, offsets, total }
    }

    /// Node equations `f_v(0:1) - G f_{v+1}(1:0) = 0`, `m` rows per node.
    fn gluing_rows(&self, lay: &Layout) -> Vec<Vec<(usize, Q)>> {
        let n = self.n();
        let m = self.m();
        let nodes = match self.topology {
            Topology::Cycle => n,
            Topology::Chain => n - 1,
        };
        let mut rows = Vec::new();
        for v in 0..nodes {
            let w = (v + 1) % n;
            let closing = self.topology == Topology::Cycle && v == n - 1;
            for r in 0..m {
                let mut row = Vec::new();
                if let Some(i) = lay.index(v, 0, r) {
                    row.push((i, Q::one()));
                }
                if let Some(e) = lay.top(w) {
                    for c in 0..m {
                        let g = if closing { self.glue[(r, c)].clone() } else if r == c { Q::one() } else { Q::zero() };
                        if !g.is_zero() {
                            row.push((lay.index(w, e, c).expect("coefficient exists"), -g));
                        }
                    }
                }
                rows.push(row);
            }
        }
        rows
    }
}

/// Coordinates on `⊕_v H^0(P^1, O(e_v)) ⊗ k^m`: coefficient of
/// `x^i y^(e_v - i)` in component `r` of the `v`-th form.
#[derive(Clone, Debug)]
struct Layout {
    degrees: Vec<i64>,
    m: usize,
    offsets: Vec<usize>,
    total: usize,
}

impl Layout {
    fn top(&self, v: usize) -> Option<usize> {
        (self.degrees[v] >= 0).then(|| self.degrees[v] as usize)
    }

    fn index(&self, v: usize, i: usize, r: usize) -> Option<usize> {
        let e = self.top(v)?;
        (i <= e).then(|| self.offsets[v] + i * self.m + r)
    }

    /// Coefficient vector (length m) of `x^i y^(e-i)` in form `v`.
    fn coeff(&self, sec: &[Q], v: usize, i: usize) -> Vec<Q> {
        (0..self.m).map(|r| self.index(v, i, r).map_or_else(Q::zero, |k| sec[k].clone())).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub h0: usize,
    pub h1: usize,
}

/// `h^0` is the kernel of the gluing map on sections of the normalisation.
/// `h^1` is read off the same long exact sequence: the cokernel of the
/// gluing map plus the `h^1` of the lines of negative degree.
pub fn cohomology(g: &GlueSpec) -> Cohomology {
    let lay = g.layout();
    let rows = g.gluing_rows(&lay);
    let mut ech = SparseEchelon::new(lay.total);
    for row in &rows {
        ech.insert(row.iter().cloned());
    }
    let rank = ech.rank();
    let h1_lines: usize = g.degrees.iter().filter(|&&d| d < 0).map(|&d| (-d - 1) as usize).sum::<usize>() * g.m();
    Cohomology { h0: lay.total - rank, h1: rows.len() - rank + h1_lines }
}

/// Which basis of `H^0(E(p_0))` to feed into the evaluation map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EvalBasis {
    /// The image vectors written out for `n = 2, 3` (only `m = 1`).
    Paper,
    /// Basis vectors of types A to D, assembled position by position.
    Tables,
    /// A kernel basis of the gluing map, for any multidegree.
    Kernel,
}

/// The evaluation basis used by default: the written-out vectors when they
/// apply, the type tables for other multidegrees of theorem shape, and the
/// kernel otherwise.
pub fn default_basis(desc: &SheafDesc) -> EvalBasis {
    match (desc, desc.shape()) {
        (SheafDesc::Band(b), Shape::Band { offset: 0, .. }) if b.m() == 1 && matches!(b.d().len(), 2 | 3) => EvalBasis::Paper,
        (SheafDesc::Band(_), Shape::Band { offset: 0, .. }) | (SheafDesc::String(_), Shape::String { .. }) => EvalBasis::Tables,
        _ => EvalBasis::Kernel,
    }
}

fn twisted_spec(desc: &SheafDesc) -> GlueSpec {
    let degrees: Vec<i64> = desc.d().iter().map(|v| v + 1).collect();
    match desc {
        SheafDesc::Band(b) => GlueSpec { topology: Topology::Cycle, degrees, glue: jordan(b.m(), b.lambda()) },
        SheafDesc::String(_) => GlueSpec { topology: Topology::Chain, degrees, glue: Matrix::identity(1) },
    }
}

fn check_eval_input(desc: &SheafDesc) -> Result<(), FmError> {
    match desc.shape() {
        Shape::NotSS => Err(FmError::NotSemistable(desc.to_string())),
        Shape::Atiyah => Err(FmError::SmoothSupport(desc.to_string())),
        _ => Ok(()),
    }
}

/// Global sections of `E(p_0)` as coordinate vectors in the layout of `twisted_spec`.
fn sections(desc: &SheafDesc, basis: EvalBasis) -> Result<Vec<Vec<Q>>, FmError> {
    let spec = twisted_spec(desc);
    let lay = spec.layout();
    match basis {
        EvalBasis::Kernel => {
            let mut ech = SparseEchelon::new(lay.total);
            for row in spec.gluing_rows(&lay) {
                ech.insert(row);
            }
            Ok(ech.kernel_basis())
        }
        EvalBasis::Tables => Ok(table_sections(desc, &spec, &lay)),
        EvalBasis::Paper => Err(FmError::NoPaperBasis),
    }
}

#[derive(Clone, Copy)]
enum Coef {
    Id,
    JInv,
}

/// One basis section per table entry and per basis vector of `k^m`.
/// Entries `(v, i, coef)` put `coef · e_k` on `x^i y^(e_v - i)` of form `v`;
/// entries landing on the same coordinate add up.
fn table_sections(desc: &SheafDesc, spec: &GlueSpec, lay: &Layout) -> Vec<Vec<Q>> {
    let d = desc.d();
    let n = d.len();
    let e = |v: usize| (d[v] + 1) as usize;
    let mut vectors: Vec<Vec<(usize, usize, Coef)>> = Vec::new();
    let cycle = spec.topology == Topology::Cycle;
    for v in 0..n {
        if d[v] == 1 {
            vectors.push(vec![(v, 1, Coef::Id)]);
        }
        if d[v] == -1 {
            let mut vec = vec![(v, 0, Coef::Id)];
            if v > 0 {
                vec.push((v - 1, 0, Coef::Id));
            }
            if v + 1 < n {
                vec.push((v + 1, e(v + 1), Coef::Id));
            } else if cycle {
                vec.push((0, e(0), Coef::JInv));
            }
            vectors.push(vec);
        }
        let next_ok = if v + 1 < n { d[v + 1] != -1 } else { !cycle || d[0] != -1 };
        if d[v] != -1 && next_ok {
            let mut vec = vec![(v, 0, Coef::Id)];
            if v + 1 < n {
                vec.push((v + 1, e(v + 1), Coef::Id));
            } else if cycle {
                vec.push((0, e(0), Coef::JInv));
            }
            vectors.push(vec);
        }
    }
    if !cycle && d[0] == 0 {
        vectors.push(vec![(0, 1, Coef::Id)]);
    }
    let jinv = spec.glue.inverse().expect("gluing matrix is invertible");
    let m = spec.m();
    let mut out = Vec::new();
    for vec in vectors {
        for k in 0..m {
            let mut s = vec![Q::zero(); lay.total];
            for &(v, i, coef) in &vec {
                for r in 0..m {
                    let c = match coef {
                        Coef::Id if r == k => Q::one(),
                        Coef::Id => Q::zero(),
                        Coef::JInv => jinv[(r, k)].clone(),
                    };
                    if let Some(idx) = lay.index(v, i, r) {
                        s[idx] += c;
                    }
                }
            }
            out.push(s);
        }
    }
    out
}

fn form_at_x(lay: &Layout, sec: &[Q], v: usize, r: usize) -> RingPoly {
    let mut p = RingPoly::zero();
    if let Some(e) = lay.top(v) {
        for i in 0..=e {
            p.add_term(&lay.coeff(sec, v, i)[r], x_mono(i));
        }
    }
    p
}

fn form_at_y(lay: &Layout, sec: &[Q], v: usize, glue: Option<&Matrix>) -> Vec<RingPoly> {
    let mut out = vec![RingPoly::zero(); lay.m];
    if let Some(e) = lay.top(v) {
        for i in 0..=e {
            let c = lay.coeff(sec, v, i);
            let c = glue.map_or(c.clone(), |g| g.mul_vec(&c));
            for (r, cr) in c.iter().enumerate() {
                out[r].add_term(cr, y_mono(e - i));
            }
        }
    }
    out
}

fn x_mono(k: usize) -> Monomial {
    if k == 0 {
        Monomial::One
    } else {
        Monomial::X(k)
    }
}

fn y_mono(k: usize) -> Monomial {
    if k == 0 {
        Monomial::One
    } else {
        Monomial::Y(k)
    }
}

/// The column `(g_v)` of the completed evaluation map for one section.
fn eval_column(spec: &GlueSpec, lay: &Layout, sec: &[Q]) -> Vec<RingPoly> {
    let n = spec.n();
    let m = spec.m();
    let mut col = Vec::new();
    if spec.topology == Topology::Chain {
        col.extend(form_at_y(lay, sec, 0, None));
    }
    let inner = match spec.topology {
        Topology::Cycle => n,
        Topology::Chain => n - 1,
    };
    for v in 0..inner {
        let w = (v + 1) % n;
        let glue = (spec.topology == Topology::Cycle && v == n - 1).then_some(&spec.glue);
        let ys = form_at_y(lay, sec, w, glue);
        let c0 = lay.coeff(sec, v, 0);
        for r in 0..m {
            let g = form_at_x(lay, sec, v, r).add(&ys[r]).sub(&RingPoly::constant(c0[r].clone()));
            col.push(g);
        }
    }
    if spec.topology == Topology::Chain {
        for r in 0..m {
            col.push(form_at_x(lay, sec, n - 1, r));
        }
    }
    col
}

fn targets(spec: &GlueSpec) -> Vec<TruncPiece> {
    let m = spec.m();
    match spec.topology {
        Topology::Cycle => vec![TruncPiece::FullR; spec.n() * m],
        Topology::Chain => {
            let mut t = vec![TruncPiece::YOnly; m];
            t.extend(vec![TruncPiece::FullR; (spec.n() - 1) * m]);
            t.extend(vec![TruncPiece::XOnly; m]);
            t
        }
    }
}

fn paper_columns(b: &BandDesc) -> Result<Vec<Vec<RingPoly>>, FmError> {
    let l = b.lambda().clone();
    let li = l.recip();
    let t = |c: &Q, mono: Monomial| RingPoly::term(c.clone(), mono);
    let one = Q::one();
    let p = |terms: &[(Q, Monomial)]| {
        let mut r = RingPoly::zero();
        for (c, mono) in terms {
            r.add_term(c, *mono);
        }
        r
    };
    let z = RingPoly::zero;
    use Monomial::{One, X, Y};
    let cols = match (b.m(), b.d()) {
        (1, [1, -1]) => vec![
            vec![t(&one, X(1)), t(&l, Y(1))],
            vec![p(&[(li.clone(), X(2)), (one.clone(), One)]), p(&[(l.clone(), Y(2)), (one.clone(), One)])],
        ],
        (1, [1, 0, -1]) => vec![
            vec![t(&one, X(1)), z(), t(&l, Y(1))],
            vec![p(&[(li.clone(), X(2)), (one.clone(), Y(1))]), RingPoly::one(), RingPoly::one()],
            vec![RingPoly::one(), t(&one, X(1)), t(&l, Y(2))],
        ],
        (1, [1, -1, 0]) => vec![
            vec![t(&one, X(1)), z(), t(&l, Y(1))],
            vec![RingPoly::one(), RingPoly::one(), p(&[(one.clone(), X(1)), (l.clone(), Y(2))])],
            vec![t(&li, X(2)), t(&one, Y(1)), RingPoly::one()],
        ],
        _ => return Err(FmError::NoPaperBasis),
    };
    Ok(cols)
}

fn transpose(cols: Vec<Vec<RingPoly>>, rows: usize) -> Vec<Vec<RingPoly>> {
    (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

/// Matrix of the completed evaluation map at the node.
pub fn build_eval_presentation(desc: &SheafDesc, basis: EvalBasis, order: Option<usize>) -> Result<Presentation, FmError> {
    check_eval_input(desc)?;
    let spec = twisted_spec(desc);
    let tg = targets(&spec);
    let cols = match (basis, desc) {
        (EvalBasis::Paper, SheafDesc::Band(b)) => paper_columns(b)?,
        (EvalBasis::Paper, SheafDesc::String(_)) => return Err(FmError::NoPaperBasis),
        _ => {
            let lay = spec.layout();
            sections(desc, basis)?.iter().map(|s| eval_column(&spec, &lay, s)).collect()
        }
    };
    Ok(Presentation::new(tg.clone(), transpose(cols, tg.len()), order).expect("rows match targets"))
}

/// Whether a table or kernel basis really is a basis of `H^0(E(p_0))`.
pub fn sections_form_basis(desc: &SheafDesc, basis: EvalBasis) -> Result<bool, FmError> {
    check_eval_input(desc)?;
    let spec = twisted_spec(desc);
    let lay = spec.layout();
    let secs = sections(desc, basis)?;
    let rows = spec.gluing_rows(&lay);
    let glued = secs.iter().all(|s| {
        rows.iter().all(|row| row.iter().map(|(i, c)| c * &s[*i]).fold(Q::zero(), |a, b| a + b).is_zero())
    });
    let h0 = cohomology(&spec).h0;
    Ok(glued && secs.len() == h0 && crate::linalg::span_rank(lay.total, &secs) == h0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub order: Option<usize>,
    pub basis: Option<EvalBasis>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: IdentifyConfig::default().seed, order: None, basis: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub desc: SheafDesc,
    pub expected: TorsionDesc,
    pub basis: EvalBasis,
    pub order: usize,
    pub identified: Identified,
    pub length: usize,
    pub rank: i64,
    pub labels_match: bool,
    pub length_matches: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.labels_match && self.length_matches
    }
}

/// Identifies the cokernel of the evaluation matrix and compares it with [`fm_forward`].
pub fn verify_fm(desc: &SheafDesc, opts: VerifyOptions) -> Result<VerifyReport, FmError> {
    let expected = fm_forward(desc)?;
    let basis = opts.basis.unwrap_or_else(|| default_basis(desc));
    let p = build_eval_presentation(desc, basis, opts.order)?;
    let module = cokernel_module(&p.minimal_presentation());
    let cfg = IdentifyConfig { seed: opts.seed, ..IdentifyConfig::default() };
    let identified = identify_with(&module, cfg);
    let want = expected.label().expect("evaluation input is supported at the node");
    let labels_match = matches!(&identified, Identified::Labels(ls) if ls.len() == 1 && ls[0] == want);
    let rank = desc.charge().rank;
    Ok(VerifyReport {
        desc: desc.clone(),
        expected,
        basis,
        order: p.order(),
        identified,
        length: module.dim(),
        rank,
        labels_match,
        length_matches: module.dim() as i64 == rank,
    })
}

#[derive(Clone, Debug)]
pub struct DualReport {
    pub desc: SheafDesc,
    pub image: TorsionDesc,
    pub dual: SheafDesc,
    pub dual_image: TorsionDesc,
    pub outcome: DualOutcome,
}

#[derive(Clone, Debug)]
pub enum DualOutcome {
    /// Both sides supported at the node; the isomorphism test result.
    Node(IsoOutcome),
    /// Both sides at smooth points; whether the point inverted and the length was kept.
    Smooth { point_inverted: bool, length_kept: bool },
    Mismatch,
}

impl DualReport {
    pub fn passed(&self) -> bool {
        match &self.outcome {
            DualOutcome::Node(o) => o.is_true(),
            DualOutcome::Smooth { point_inverted, length_kept } => *point_inverted && *length_kept,
            DualOutcome::Mismatch => false,
        }
    }
}

/// Compares the transform of the dual sheaf with the twisted Matlis dual of the transform.
pub fn fm_dual_check(desc: &SheafDesc, seed: u64) -> Result<DualReport, FmError> {
    let image = fm_forward(desc)?;
    let dual = desc.dual();
    let dual_image = fm_forward(&dual)?;
    let outcome = match (&image, &dual_image) {
        (TorsionDesc::SmoothPoint { lambda, len }, TorsionDesc::SmoothPoint { lambda: l2, len: n2 }) => {
            DualOutcome::Smooth { point_inverted: *l2 == lambda.recip(), length_kept: len == n2 }
        }
        (TorsionDesc::SmoothPoint { .. }, _) | (_, TorsionDesc::SmoothPoint { .. }) => DualOutcome::Mismatch,
        _ => {
            let lhs = label_module(&dual_image.label().expect("node"));
            let rhs = twisted_matlis(&label_module(&image.label().expect("node")));
            DualOutcome::Node(is_isomorphic_with(&lhs, &rhs, Default::default(), seed))
        }
    };
    Ok(DualReport { desc: desc.clone(), image, dual, dual_image, outcome })
}

/// Every band multidegree of theorem shape (starting with `1`) with `n` entries.
pub fn band_catalog(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for runs in compositions_into_pairs(n, 1) {
        let d = band_multidegree(&runs);
        if !crate::labels::is_periodic(&d) {
            out.push(d);
        }
    }
    out
}

/// Every string multidegree of theorem shape with `n` entries.
pub fn string_catalog(n: usize) -> Vec<Vec<i64>> {
    // A string word with N pairs has n = sum(n_i + m_i) + 2N - 1 entries.
    let mut out = Vec::new();
    for big_n in 1..=n.div_ceil(2) {
        let zeros = n + 1 - 2 * big_n;
        for runs in weak_pairs(zeros, big_n) {
            out.push(string_multidegree(&runs));
        }
    }
    out
}

/// Sequences of pairs `(a, b)` with entries at least `min` summing to `total`.
fn compositions_into_pairs(total: usize, min: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    fn rec(left: usize, min: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if left == 0 && !cur.is_empty() {
            out.push(cur.clone());
        }
        for a in min..=left {
            for b in min..=left.saturating_sub(a) {
                if a + b > left || a + b == 0 {
                    continue;
                }
                cur.push((a, b));
                rec(left - a - b, min, cur, out);
                cur.pop();
            }
        }
    }
    rec(total, min, &mut Vec::new(), &mut out);
    out
}

/// All `count`-tuples of pairs of nonnegative integers with the given total.
fn weak_pairs(total: usize, count: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    fn rec(left: usize, count: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if cur.len() == count {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in 0..=left {
            for b in 0..=left - a {
                cur.push((a, b));
                rec(left - a - b, count, cur, out);
                cur.pop();
            }
        }
    }
    rec(total, count, &mut Vec::new(), &mut out);
    out
}

