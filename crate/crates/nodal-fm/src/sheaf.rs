//! Descriptors for torsion free sheaves on the nodal cubic and for torsion sheaves.
//!
//! `B(d, m, lambda)` is the push-forward of a line bundle of multidegree `d`
//! on the cycle of `n` lines, glued with `lambda`, tensored with the unipotent
//! bundle of rank `m`. `S(d)` is the push-forward of the line bundle of
//! multidegree `d` on the chain of `n` lines.

use std::fmt;

use num_traits::{One, Zero};

use crate::labels::{is_periodic, BandLabel, ModuleLabel, StringLabel};
use crate::linalg::Q;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DescError {
    #[error("multidegree must have at least one entry")]
    Empty,
    #[error("multidegree {0:?} is periodic")]
    Periodic(Vec<i64>),
    #[error("multiplicity must be at least 1")]
    Multiplicity,
    #[error("gluing parameter must be nonzero")]
    ZeroLambda,
    #[error("length must be at least 1")]
    Length,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BandDesc {
    d: Vec<i64>,
    m: usize,
    lambda: Q,
}

impl BandDesc {
    pub fn new(d: Vec<i64>, m: usize, lambda: Q) -> Result<Self, DescError> {
        if d.is_empty() {
            return Err(DescError::Empty);
        }
        if is_periodic(&d) {
            return Err(DescError::Periodic(d));
        }
        if m == 0 {
            return Err(DescError::Multiplicity);
        }
        if lambda.is_zero() {
            return Err(DescError::ZeroLambda);
        }
        Ok(BandDesc { d, m, lambda })
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambda(&self) -> &Q {
        &self.lambda
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StringDesc {
    d: Vec<i64>,
}

impl StringDesc {
    pub fn new(d: Vec<i64>) -> Result<Self, DescError> {
        if d.is_empty() {
            return Err(DescError::Empty);
        }
        Ok(StringDesc { d })
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SheafDesc {
    Band(BandDesc),
    String(StringDesc),
}

/// A torsion sheaf: supported at the node, or `O/m^len` at the smooth point `P(lambda)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TorsionDesc {
    SingularBand(BandLabel),
    SingularString(StringLabel),
    SmoothPoint { lambda: Q, len: usize },
}

impl TorsionDesc {
    pub fn smooth_point(lambda: Q, len: usize) -> Result<Self, DescError> {
        if lambda.is_zero() {
            return Err(DescError::ZeroLambda);
        }
        if len == 0 {
            return Err(DescError::Length);
        }
        Ok(TorsionDesc::SmoothPoint { lambda, len })
    }

    pub fn from_label(l: ModuleLabel) -> Self {
        match l {
            ModuleLabel::Band(b) => TorsionDesc::SingularBand(b),
            ModuleLabel::String(s) => TorsionDesc::SingularString(s),
        }
    }

    /// The module at the node, if the sheaf is supported there.
    pub fn label(&self) -> Option<ModuleLabel> {
        match self {
            TorsionDesc::SingularBand(b) => Some(ModuleLabel::Band(b.clone())),
            TorsionDesc::SingularString(s) => Some(ModuleLabel::String(s.clone())),
            TorsionDesc::SmoothPoint { .. } => None,
        }
    }

    pub fn length(&self) -> usize {
        match self {
            TorsionDesc::SingularBand(b) => b.dim(),
            TorsionDesc::SingularString(s) => s.dim(),
            TorsionDesc::SmoothPoint { len, .. } => *len,
        }
    }

    pub fn charge(&self) -> Charge {
        Charge { rank: 0, degree: self.length() as i64 }
    }
}

/// Rank and degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Charge {
    pub rank: i64,
    pub degree: i64,
}

impl SheafDesc {
    pub fn d(&self) -> &[i64] {
        match self {
            SheafDesc::Band(b) => &b.d,
            SheafDesc::String(s) => &s.d,
        }
    }

    pub fn charge(&self) -> Charge {
        let sum: i64 = self.d().iter().sum();
        match self {
            SheafDesc::Band(b) => {
                let m = b.m as i64;
                Charge { rank: m * b.d.len() as i64, degree: m * sum }
            }
            SheafDesc::String(s) => Charge { rank: s.d.len() as i64, degree: 1 + sum },
        }
    }

    /// The dual sheaf: `B(d,m,l) -> B(-d,m,1/l)` and `S(d) -> S(k - d)` with
    /// `k = (-1,0,...,0,-1)`, or `k = (-2)` on a single line.
    pub fn dual(&self) -> SheafDesc {
        match self {
            SheafDesc::Band(b) => SheafDesc::Band(BandDesc {
                d: b.d.iter().map(|v| -v).collect(),
                m: b.m,
                lambda: b.lambda.recip(),
            }),
            SheafDesc::String(s) => {
                let n = s.d.len();
                let mut k = vec![0i64; n];
                k[0] -= 1;
                k[n - 1] -= 1;
                SheafDesc::String(StringDesc { d: k.iter().zip(&s.d).map(|(a, b)| a - b).collect() })
            }
        }
    }

    /// Tensor with `O(k p_0)`, which adds `k` to every entry of `d`.
    pub fn twist_p0(&self, k: i64) -> SheafDesc {
        let shift = |d: &[i64]| d.iter().map(|v| v + k).collect::<Vec<_>>();
        match self {
            SheafDesc::Band(b) => SheafDesc::Band(BandDesc { d: shift(&b.d), m: b.m, lambda: b.lambda.clone() }),
            SheafDesc::String(s) => SheafDesc::String(StringDesc { d: shift(&s.d) }),
        }
    }

    pub fn shape(&self) -> Shape {
        ss_deg0_shape(self)
    }
}

/// Run-length data of a semistable degree zero descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `runs[i] = (n_i, m_i)`, read from `d` rotated left by `offset`.
    Band { runs: Vec<(usize, usize)>, offset: usize },
    String { runs: Vec<(usize, usize)> },
    Atiyah,
    NotSS,
}

impl Shape {
    pub fn is_ss(&self) -> bool {
        !matches!(self, Shape::NotSS)
    }
}

/// Reads `d` as `(1, 0^{n_1-1}, -1, 0^{m_1-1}, 1, ...)` for a band, or as
/// `(0^{n_1}, -1, 0^{m_1}, 1, 0^{n_2}, -1, ..., -1, 0^{m_N})` for a string.
///
/// A band multidegree whose pattern starts elsewhere than at a `1` is read
/// from its first `1`; the offset is reported so callers can tell.
pub fn ss_deg0_shape(desc: &SheafDesc) -> Shape {
    match desc {
        SheafDesc::Band(b) => {
            if b.d == [0] {
                return Shape::Atiyah;
            }
            let Some(offset) = b.d.iter().position(|&v| v == 1) else { return Shape::NotSS };
            let mut rot = b.d.clone();
            rot.rotate_left(offset);
            match band_runs(&rot) {
                Some(runs) => Shape::Band { runs, offset },
                None => Shape::NotSS,
            }
        }
        SheafDesc::String(s) => match string_runs(&s.d) {
            Some(runs) => Shape::String { runs },
            None => Shape::NotSS,
        },
    }
}

fn band_runs(d: &[i64]) -> Option<Vec<(usize, usize)>> {
    let marks: Vec<(usize, i64)> = d.iter().copied().enumerate().filter(|&(_, v)| v != 0).collect();
    if marks.is_empty() || !marks.len().is_multiple_of(2) || marks.iter().any(|&(_, v)| v.abs() != 1) {
        return None;
    }
    let mut runs = Vec::new();
    for (k, pair) in marks.chunks(2).enumerate() {
        let (up, down) = (pair[0], pair[1]);
        if up.1 != 1 || down.1 != -1 {
            return None;
        }
        let next = marks.get(2 * k + 2).map_or(d.len(), |p| p.0);
        runs.push((down.0 - up.0, next - down.0));
    }
    Some(runs)
}

fn string_runs(d: &[i64]) -> Option<Vec<(usize, usize)>> {
    let marks: Vec<(usize, i64)> = d.iter().copied().enumerate().filter(|&(_, v)| v != 0).collect();
    if marks.len() % 2 != 1 {
        return None;
    }
    let mut runs = Vec::new();
    let mut start = 0;
    for (k, &(pos, v)) in marks.iter().enumerate() {
        let want = if k % 2 == 0 { -1 } else { 1 };
        if v != want {
            return None;
        }
        if k % 2 == 0 {
            let n = pos - start;
            let end = marks.get(k + 1).map_or(d.len(), |p| p.0);
            runs.push((n, end - pos - 1));
        } else {
            start = pos + 1;
        }
    }
    Some(runs)
}

/// Inverse of [`band_runs`].
pub fn band_multidegree(runs: &[(usize, usize)]) -> Vec<i64> {
    let mut d = Vec::new();
    for &(n, m) in runs {
        d.push(1);
        d.extend(std::iter::repeat_n(0, n.saturating_sub(1)));
        d.push(-1);
        d.extend(std::iter::repeat_n(0, m.saturating_sub(1)));
    }
    d
}

/// Inverse of [`string_runs`].
pub fn string_multidegree(runs: &[(usize, usize)]) -> Vec<i64> {
    let mut d = Vec::new();
    for (i, &(n, m)) in runs.iter().enumerate() {
        if i > 0 {
            d.push(1);
        }
        d.extend(std::iter::repeat_n(0, n));
        d.push(-1);
        d.extend(std::iter::repeat_n(0, m));
    }
    d
}

fn render_d(d: &[i64]) -> String {
    d.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for BandDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B[d=({});m={};l={}]", render_d(&self.d), self.m, self.lambda)
    }
}

impl fmt::Display for StringDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S[d=({})]", render_d(&self.d))
    }
}

impl fmt::Display for SheafDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafDesc::Band(b) => b.fmt(f),
            SheafDesc::String(s) => s.fmt(f),
        }
    }
}

impl fmt::Display for TorsionDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionDesc::SingularBand(b) => b.fmt(f),
            TorsionDesc::SingularString(s) => s.fmt(f),
            TorsionDesc::SmoothPoint { lambda, len } => write!(f, "P[l={lambda};len={len}]"),
        }
    }
}

/// `(-1)^k` as a scalar.
pub(crate) fn sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}
