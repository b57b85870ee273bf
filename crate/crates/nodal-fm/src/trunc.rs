//! The truncated ring `k[[x,y]]/(xy)` and cokernels of presentations over it.
//!
//! An element of `R = k[[x,y]]/(xy)` is a constant plus a power series in `x`
//! plus a power series in `y`; there are no mixed monomials. [`RingPoly`] is
//! such an element with finitely many terms and [`TruncElement`] is one read
//! modulo `(x^N, y^N)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{q, Matrix, SparseEchelon, Q};

/// A monomial of `R`. Mixed monomials vanish, so these are all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Monomial {
    One,
    X(usize),
    Y(usize),
}

impl Monomial {
    pub fn degree(self) -> usize {
        match self {
            Monomial::One => 0,
            Monomial::X(k) | Monomial::Y(k) => k,
        }
    }

    fn kind_rank(self) -> u8 {
        match self {
            Monomial::X(_) => 0,
            Monomial::One => 1,
            Monomial::Y(_) => 2,
        }
    }

    /// Product of two monomials; `None` when it is zero in `R`.
    pub fn times(self, other: Monomial) -> Option<Monomial> {
        use Monomial::*;
        match (self, other) {
            (One, m) | (m, One) => Some(m),
            (X(a), X(b)) => Some(X(a + b)),
            (Y(a), Y(b)) => Some(Y(a + b)),
            _ => None,
        }
    }
}

/// `x` monomials first, then the constant, then `y` monomials, each by exponent.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.kind_rank(), self.degree()).cmp(&(other.kind_rank(), other.degree()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Monomial::One => write!(f, "1"),
            Monomial::X(1) => write!(f, "x"),
            Monomial::Y(1) => write!(f, "y"),
            Monomial::X(k) => write!(f, "x^{k}"),
            Monomial::Y(k) => write!(f, "y^{k}"),
        }
    }
}

/// An element of `R` with finitely many terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RingPoly {
    pub constant: Q,
    /// `xs[i]` is the coefficient of `x^(i+1)`.
    pub xs: Vec<Q>,
    /// `ys[i]` is the coefficient of `y^(i+1)`.
    pub ys: Vec<Q>,
}

impl RingPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        RingPoly { constant: c, ..Self::default() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(&c, m);
        p
    }

    pub fn x_pow(k: usize) -> Self {
        Self::term(Q::one(), if k == 0 { Monomial::One } else { Monomial::X(k) })
    }

    pub fn y_pow(k: usize) -> Self {
        Self::term(Q::one(), if k == 0 { Monomial::One } else { Monomial::Y(k) })
    }

    pub fn coeff(&self, m: Monomial) -> Q {
        match m {
            Monomial::One => self.constant.clone(),
            Monomial::X(k) => self.xs.get(k - 1).cloned().unwrap_or_else(Q::zero),
            Monomial::Y(k) => self.ys.get(k - 1).cloned().unwrap_or_else(Q::zero),
        }
    }

    pub fn add_term(&mut self, c: &Q, m: Monomial) {
        if c.is_zero() {
            return;
        }
        let slot = |v: &mut Vec<Q>, k: usize| {
            if v.len() < k {
                v.resize(k, Q::zero());
            }
            v[k - 1] += c;
        };
        match m {
            Monomial::One => self.constant += c,
            Monomial::X(k) => slot(&mut self.xs, k),
            Monomial::Y(k) => slot(&mut self.ys, k),
        }
        self.normalize();
    }

    fn normalize(&mut self) {
        while self.xs.last().is_some_and(Zero::is_zero) {
            self.xs.pop();
        }
        while self.ys.last().is_some_and(Zero::is_zero) {
            self.ys.pop();
        }
    }

    /// Nonzero terms in monomial order.
    pub fn terms(&self) -> Vec<(Monomial, Q)> {
        let mut out = Vec::new();
        for (i, c) in self.xs.iter().enumerate() {
            if !c.is_zero() {
                out.push((Monomial::X(i + 1), c.clone()));
            }
        }
        if !self.constant.is_zero() {
            out.push((Monomial::One, self.constant.clone()));
        }
        for (i, c) in self.ys.iter().enumerate() {
            if !c.is_zero() {
                out.push((Monomial::Y(i + 1), c.clone()));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.xs.is_empty() && self.ys.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        !self.constant.is_zero()
    }

    pub fn max_exponent(&self) -> usize {
        self.xs.len().max(self.ys.len())
    }

    pub fn exponent_sum(&self) -> usize {
        self.terms().iter().map(|(m, _)| m.degree()).sum()
    }

    pub fn add(&self, other: &RingPoly) -> RingPoly {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(&c, m);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> RingPoly {
        let mut out = RingPoly::zero();
        for (m, v) in self.terms() {
            out.add_term(&(v * c), m);
        }
        out
    }

    pub fn neg(&self) -> RingPoly {
        self.scale(&q(-1))
    }

    pub fn sub(&self, other: &RingPoly) -> RingPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RingPoly) -> RingPoly {
        let mut out = RingPoly::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some(m) = a.times(b) {
                    out.add_term(&(&ca * &cb), m);
                }
            }
        }
        out
    }

    /// Drops every term of degree `>= n`.
    pub fn truncate(&self, n: usize) -> RingPoly {
        let keep = n.saturating_sub(1);
        let mut out = self.clone();
        out.xs.truncate(keep);
        out.ys.truncate(keep);
        if n == 0 {
            out.constant = Q::zero();
        }
        out.normalize();
        out
    }

    /// The image of this element in a target piece.
    pub fn project(&self, piece: TruncPiece) -> RingPoly {
        let mut out = self.clone();
        match piece {
            TruncPiece::FullR => {}
            TruncPiece::XOnly => out.ys.clear(),
            TruncPiece::YOnly => out.xs.clear(),
        }
        out
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (m, a.is_one()) {
                (Monomial::One, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "{m}")?,
                (_, false) if a.is_integer() => write!(f, "{a}{m}")?,
                (_, false) => write!(f, "({a}){m}")?,
            }
        }
        Ok(())
    }
}

/// The summands a presentation may map onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TruncPiece {
    /// `R` itself.
    FullR,
    /// `k[x]/(x^N)`, on which `y` acts as zero.
    XOnly,
    /// `k[y]/(y^N)`, on which `x` acts as zero.
    YOnly,
}

impl TruncPiece {
    /// Monomial basis of the piece modulo `(x^n, y^n)`, in monomial order.
    pub fn monomials(self, n: usize) -> Vec<Monomial> {
        let xs = (1..n).map(Monomial::X);
        let ys = (1..n).map(Monomial::Y);
        let one = std::iter::once(Monomial::One).take(usize::from(n > 0));
        match self {
            TruncPiece::FullR => xs.chain(one).chain(ys).collect(),
            TruncPiece::XOnly => xs.chain(one).collect(),
            TruncPiece::YOnly => one.chain(ys).collect(),
        }
    }

    pub fn contains(self, m: Monomial) -> bool {
        !matches!((self, m), (TruncPiece::XOnly, Monomial::Y(_)) | (TruncPiece::YOnly, Monomial::X(_)))
    }
}

/// An element of `R/(x^N, y^N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncElement {
    order: usize,
    poly: RingPoly,
}

impl TruncElement {
    pub fn new(order: usize, poly: &RingPoly) -> Self {
        TruncElement { order, poly: poly.truncate(order) }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn poly(&self) -> &RingPoly {
        &self.poly
    }

    pub fn is_unit(&self) -> bool {
        self.poly.is_unit()
    }

    pub fn mul(&self, other: &TruncElement) -> TruncElement {
        TruncElement::new(self.order.min(other.order), &self.poly.mul(&other.poly))
    }

    /// Inverse of a unit `c + n` as the truncated geometric series in `-n/c`.
    pub fn inverse(&self) -> Option<TruncElement> {
        if !self.is_unit() {
            return None;
        }
        let cinv = self.poly.constant.recip();
        let mut nil = self.poly.clone();
        nil.constant = Q::zero();
        let step = nil.scale(&(-&cinv));
        let mut acc = RingPoly::one();
        let mut power = RingPoly::one();
        for _ in 1..self.order.max(1) {
            power = power.mul(&step).truncate(self.order);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Some(TruncElement::new(self.order, &acc.scale(&cinv)))
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relation matrix has {rows} rows but {targets} target pieces")]
    RowCount { rows: usize, targets: usize },
    #[error("relation matrix rows have different lengths")]
    Ragged,
}

/// A map `R^c -> T_1 + ... + T_r` given by an `r x c` matrix over `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    order: usize,
    targets: Vec<TruncPiece>,
    rel: Vec<Vec<RingPoly>>,
}

/// Default truncation order for a relation matrix: one more than the largest
/// exponent plus the sum of all exponents, plus one.
pub fn default_order(rel: &[Vec<RingPoly>]) -> usize {
    let max = rel.iter().flatten().map(RingPoly::max_exponent).max().unwrap_or(0);
    let sum: usize = rel.iter().flatten().map(RingPoly::exponent_sum).sum();
    max + sum + 2
}

impl Presentation {
    /// Entries are projected onto their row's piece. Without `order` the
    /// default from [`default_order`] is used.
    pub fn new(
        targets: Vec<TruncPiece>,
        rel: Vec<Vec<RingPoly>>,
        order: Option<usize>,
    ) -> Result<Self, PresentationError> {
        if rel.len() != targets.len() {
            return Err(PresentationError::RowCount { rows: rel.len(), targets: targets.len() });
        }
        let cols = rel.first().map_or(0, Vec::len);
        if rel.iter().any(|r| r.len() != cols) {
            return Err(PresentationError::Ragged);
        }
        let rel: Vec<Vec<RingPoly>> = rel
            .into_iter()
            .zip(&targets)
            .map(|(row, &t)| row.into_iter().map(|e| e.project(t)).collect())
            .collect();
        let order = order.unwrap_or_else(|| default_order(&rel));
        let rel = rel.into_iter().map(|row| row.iter().map(|e| e.truncate(order)).collect()).collect();
        Ok(Presentation { order, targets, rel })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn targets(&self) -> &[TruncPiece] {
        &self.targets
    }

    pub fn relations(&self) -> &[Vec<RingPoly>] {
        &self.rel
    }

    pub fn ncols(&self) -> usize {
        self.rel.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, i: usize, j: usize) -> TruncElement {
        TruncElement::new(self.order, &self.rel[i][j])
    }

    pub fn max_exponent(&self) -> usize {
        self.rel.iter().flatten().map(RingPoly::max_exponent).max().unwrap_or(0)
    }

    /// Same matrix read modulo `(x^n, y^n)`. Lowering the order may lose terms.
    pub fn with_order(&self, n: usize) -> Presentation {
        Presentation {
            order: n,
            targets: self.targets.clone(),
            rel: self.rel.iter().map(|r| r.iter().map(|e| e.truncate(n)).collect()).collect(),
        }
    }

    /// The cokernel as a finite dimensional vector space with the actions of `x` and `y`.
    ///
    /// The basis consists of monomials `m e_i`, listed by piece and then in
    /// monomial order; monomials of high degree are eliminated first.
    pub fn cokernel(&self) -> Cokernel {
        let n = self.order;
        let mut index = Vec::new();
        let mut offsets = Vec::new();
        for (i, t) in self.targets.iter().enumerate() {
            offsets.push(index.len());
            for m in t.monomials(n) {
                index.push((i, m));
            }
        }
        // Elimination priority: higher degree first, then the listing order.
        let mut by_priority: Vec<usize> = (0..index.len()).collect();
        by_priority.sort_by_key(|&g| (std::cmp::Reverse(index[g].1.degree()), g));
        let mut prio_of = vec![0; index.len()];
        for (p, &g) in by_priority.iter().enumerate() {
            prio_of[g] = p;
        }
        let locate = |piece: usize, m: Monomial| -> Option<usize> {
            let t = self.targets[piece];
            if !t.contains(m) || m.degree() >= n {
                return None;
            }
            let local = match (t, m) {
                (_, Monomial::X(k)) => k - 1,
                (TruncPiece::YOnly, Monomial::One) => 0,
                (_, Monomial::One) => n - 1,
                (TruncPiece::YOnly, Monomial::Y(k)) => k,
                (_, Monomial::Y(k)) => n - 1 + k,
            };
            Some(offsets[piece] + local)
        };
        let mut sys = SparseEchelon::new(index.len());
        let multipliers: Vec<Monomial> = std::iter::once(Monomial::One)
            .chain((1..n).map(Monomial::X))
            .chain((1..n).map(Monomial::Y))
            .collect();
        for j in 0..self.ncols() {
            for &mu in &multipliers {
                let mut row = Vec::new();
                for (i, r) in self.rel.iter().enumerate() {
                    for (m, c) in r[j].terms() {
                        if let Some(g) = mu.times(m).and_then(|mm| locate(i, mm)) {
                            row.push((prio_of[g], c));
                        }
                    }
                }
                if !row.is_empty() {
                    sys.insert(row);
                }
            }
        }
        let basis_globals: Vec<usize> = (0..index.len()).filter(|&g| !sys.is_pivot(prio_of[g])).collect();
        let pos_of_prio: std::collections::HashMap<usize, usize> =
            basis_globals.iter().enumerate().map(|(k, &g)| (prio_of[g], k)).collect();
        let dim = basis_globals.len();
        let mut xm = Matrix::zeros(dim, dim);
        let mut ym = Matrix::zeros(dim, dim);
        for (k, &g) in basis_globals.iter().enumerate() {
            let (piece, m) = index[g];
            for (mat, var) in [(&mut xm, Monomial::X(1)), (&mut ym, Monomial::Y(1))] {
                let Some(target) = var.times(m).and_then(|mm| locate(piece, mm)) else { continue };
                let nf = sys.normal_form([(prio_of[target], Q::one())]);
                for (p, v) in nf {
                    mat[(pos_of_prio[&p], k)] = v;
                }
            }
        }
        Cokernel { dim, x: xm, y: ym, basis: basis_globals.iter().map(|&g| index[g]).collect() }
    }

    /// Splits off every unit entry. The result has no unit entries and the same cokernel.
    ///
    /// A unit `u` at `(i, j)` first clears row `i` by column operations. If
    /// row `i` is free the pair `(i, j)` is then dropped. If row `i` is
    /// `k[x]` (resp. `k[y]`) the generator of that row is eliminated and
    /// column `j` is replaced by `y` (resp. `x`) times the rest of the column,
    /// which is exactly the relation the vanishing of `y e_i` imposes.
    pub fn minimal_presentation(&self) -> Presentation {
        let mut targets = self.targets.clone();
        let mut rel = self.rel.clone();
        let n = self.order;
        loop {
            let found = (0..targets.len())
                .flat_map(|i| (0..rel[i].len()).map(move |j| (i, j)))
                .find(|&(i, j)| rel[i][j].is_unit());
            let Some((i, j)) = found else { break };
            let uinv = TruncElement::new(n, &rel[i][j]).inverse().expect("unit").poly;
            let ncols = rel[i].len();
            for k in 0..ncols {
                if k == j || rel[i][k].is_zero() {
                    continue;
                }
                let factor = uinv.mul(&rel[i][k]).truncate(n);
                for (r, t) in targets.iter().enumerate() {
                    let sub = rel[r][j].mul(&factor).project(*t).truncate(n);
                    rel[r][k] = rel[r][k].sub(&sub).truncate(n);
                }
            }
            let piece = targets.remove(i);
            let _row_i = rel.remove(i);
            match piece {
                TruncPiece::FullR => {
                    for row in rel.iter_mut() {
                        row.remove(j);
                    }
                }
                TruncPiece::XOnly | TruncPiece::YOnly => {
                    let killer =
                        if piece == TruncPiece::XOnly { RingPoly::y_pow(1) } else { RingPoly::x_pow(1) };
                    for (row, t) in rel.iter_mut().zip(&targets) {
                        row[j] = row[j].mul(&killer).project(*t).truncate(n);
                    }
                }
            }
        }
        Presentation { order: n, targets, rel }
    }
}

/// Output of [`Presentation::cokernel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    pub dim: usize,
    pub x: Matrix,
    pub y: Matrix,
    /// `(piece, monomial)` for each basis vector.
    pub basis: Vec<(usize, Monomial)>,
}
