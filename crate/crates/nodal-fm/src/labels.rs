//! Band and string words and their diagrams.
//!
//! A band `M(q, m, lambda)` with `q = (n_1,m_1)...(n_N,m_N)` is the cyclic
//! diagram with `N` peaks; peak `j` has an `x`-leg of length `n_j` and a
//! `y`-leg of length `m_j`, and every vertex stands for a copy of `k^m`. A
//! string `N(q)` with `q = n_0 (m_1,n_1)...(m_N,n_N) m_{N+1}` is the linear
//! diagram whose generators `f_0, ..., f_{N+1}` have `x`-legs
//! `0, m_1, ..., m_{N+1}` and `y`-legs `n_0, n_1, ..., n_N, 0`.

use std::fmt;

use num_traits::{One, Zero};

use crate::linalg::{q as qi, Matrix, Q};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LabelError {
    #[error("band word is empty")]
    EmptyBand,
    #[error("band word entries must be at least 1")]
    BandEntry,
    #[error("band word {0} is periodic")]
    Periodic(String),
    #[error("multiplicity must be at least 1")]
    Multiplicity,
    #[error("eigenvalue must be nonzero")]
    ZeroEigenvalue,
    #[error("string word has a zero entry that cannot be removed")]
    StringEntry,
}

/// Label of a band module.
///
/// The word is kept in the rotation it was given in, since rotating `q`
/// does not change the module. Equality, hashing and printing all use the
/// lexicographically least rotation.
#[derive(Clone, Debug)]
pub struct BandLabel {
    q: Vec<(usize, usize)>,
    m: usize,
    lambda: Q,
}

/// True if the cyclic word equals a proper rotation of itself.
pub fn is_periodic<T: PartialEq>(w: &[T]) -> bool {
    let n = w.len();
    (1..n).any(|s| n.is_multiple_of(s) && (0..n).all(|i| w[i] == w[(i + s) % n]))
}

pub fn least_rotation<T: Ord + Clone>(w: &[T]) -> Vec<T> {
    (0..w.len().max(1))
        .map(|s| w.iter().cycle().skip(s).take(w.len()).cloned().collect::<Vec<T>>())
        .min()
        .unwrap_or_default()
}

impl BandLabel {
    pub fn new(q: Vec<(usize, usize)>, m: usize, lambda: Q) -> Result<Self, LabelError> {
        if q.is_empty() {
            return Err(LabelError::EmptyBand);
        }
        if q.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(LabelError::BandEntry);
        }
        if is_periodic(&q) {
            return Err(LabelError::Periodic(render_pairs(&q)));
        }
        if m == 0 {
            return Err(LabelError::Multiplicity);
        }
        if lambda.is_zero() {
            return Err(LabelError::ZeroEigenvalue);
        }
        Ok(BandLabel { q, m, lambda })
    }

    /// The word in the rotation supplied at construction.
    pub fn q(&self) -> &[(usize, usize)] {
        &self.q
    }

    pub fn canonical_q(&self) -> Vec<(usize, usize)> {
        least_rotation(&self.q)
    }

    pub fn canonical(&self) -> BandLabel {
        BandLabel { q: self.canonical_q(), m: self.m, lambda: self.lambda.clone() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambda(&self) -> &Q {
        &self.lambda
    }

    /// `m * sum (n_i + m_i)`.
    pub fn dim(&self) -> usize {
        self.m * self.q.iter().map(|&(a, b)| a + b).sum::<usize>()
    }
}

impl PartialEq for BandLabel {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.lambda == other.lambda && self.canonical_q() == other.canonical_q()
    }
}

impl Eq for BandLabel {}

impl std::hash::Hash for BandLabel {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical_q().hash(state);
        self.m.hash(state);
        self.lambda.hash(state);
    }
}

/// Label of a string module, kept in canonical form: every inner entry is at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringLabel {
    n0: usize,
    pairs: Vec<(usize, usize)>,
    tail: usize,
}

impl StringLabel {
    /// Canonicalizes `n0 (m_1,n_1) ... (m_N,n_N) tail`.
    ///
    /// A leading `0 (0,a)` collapses to `a` and a trailing `(b,0) 0`
    /// collapses to `b`; both describe the same diagram. Any other zero
    /// inside a pair is rejected.
    pub fn new(n0: usize, pairs: Vec<(usize, usize)>, tail: usize) -> Result<Self, LabelError> {
        let (mut n0, mut pairs, mut tail) = (n0, pairs, tail);
        loop {
            if n0 == 0 && pairs.first().is_some_and(|p| p.0 == 0) {
                n0 = pairs.remove(0).1;
            } else if tail == 0 && pairs.last().is_some_and(|p| p.1 == 0) {
                tail = pairs.pop().expect("nonempty").0;
            } else {
                break;
            }
        }
        if pairs.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(LabelError::StringEntry);
        }
        Ok(StringLabel { n0, pairs, tail })
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn tail(&self) -> usize {
        self.tail
    }

    /// `n_0 + sum (m_i + n_i) + m_{N+1} + 1`.
    pub fn dim(&self) -> usize {
        self.n0 + self.pairs.iter().map(|&(a, b)| a + b).sum::<usize>() + self.tail + 1
    }

    /// Leg data `(x-leg, y-leg)` of the generators `f_0, ..., f_{N+1}`.
    pub fn generators(&self) -> Vec<(usize, usize)> {
        let mut g = vec![(0, self.n0)];
        g.extend(self.pairs.iter().copied());
        g.push((self.tail, 0));
        g
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleLabel {
    Band(BandLabel),
    String(StringLabel),
}

impl ModuleLabel {
    pub fn dim(&self) -> usize {
        match self {
            ModuleLabel::Band(b) => b.dim(),
            ModuleLabel::String(s) => s.dim(),
        }
    }

    /// Sort key giving a deterministic order on multisets of labels.
    pub fn sort_key(&self) -> String {
        match self {
            ModuleLabel::String(s) => format!("0{s}"),
            ModuleLabel::Band(b) => format!("1{}", b.canonical()),
        }
    }
}

pub fn render_pairs(q: &[(usize, usize)]) -> String {
    q.iter().map(|(a, b)| format!("({a},{b})")).collect()
}

impl fmt::Display for BandLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mq[{};m={};l={}]", render_pairs(&self.q), self.m, self.lambda)
    }
}

impl fmt::Display for StringLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = if self.pairs.is_empty() { "()".to_owned() } else { render_pairs(&self.pairs) };
        write!(f, "Nq[{}{}{}]", self.n0, pairs, self.tail)
    }
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleLabel::Band(b) => b.fmt(f),
            ModuleLabel::String(s) => s.fmt(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arrow {
    X,
    Y,
}

/// Linear map carried by a diagram edge between two copies of `k^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeMap {
    Identity,
    /// `-I`: the last step of a `y`-leg into the valley it shares with the next `x`-leg.
    NegIdentity,
    /// `-J_m(lambda)^{-1}`: the closing step of a band.
    NegJordanInverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub arrow: Arrow,
    pub map: EdgeMap,
}

/// The vertex/arrow picture of a band or string module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    /// Human readable names such as `x^2 e3`.
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    /// Size of the vector space at each vertex.
    pub block: usize,
    pub lambda: Option<Q>,
}

impl Diagram {
    pub fn of_band(b: &BandLabel) -> Diagram {
        let q = b.q();
        let nq = q.len();
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        // Peak j owns its x-leg x^1..x^{n_j} (the last one is a valley) and
        // y^1..y^{m_j - 1}; its final y-step lands on the x-leg end of peak j+1.
        let mut peak = Vec::with_capacity(nq);
        let mut xleg_end = Vec::with_capacity(nq);
        for (j, &(n, _)) in q.iter().enumerate() {
            peak.push(vertices.len());
            vertices.push(format!("e{}", j + 1));
            let mut prev = peak[j];
            for a in 1..=n {
                let v = vertices.len();
                vertices.push(format!("x^{a} e{}", j + 1));
                edges.push(Edge { from: prev, to: v, arrow: Arrow::X, map: EdgeMap::Identity });
                prev = v;
            }
            xleg_end.push(prev);
        }
        for (j, &(_, m)) in q.iter().enumerate() {
            let mut prev = peak[j];
            for b in 1..m {
                let v = vertices.len();
                vertices.push(format!("y^{b} e{}", j + 1));
                edges.push(Edge { from: prev, to: v, arrow: Arrow::Y, map: EdgeMap::Identity });
                prev = v;
            }
            let closing = j + 1 == nq;
            edges.push(Edge {
                from: prev,
                to: xleg_end[(j + 1) % nq],
                arrow: Arrow::Y,
                map: if closing { EdgeMap::NegJordanInverse } else { EdgeMap::NegIdentity },
            });
        }
        Diagram { vertices, edges, block: b.m(), lambda: Some(b.lambda().clone()) }
    }

    pub fn of_string(s: &StringLabel) -> Diagram {
        let gens = s.generators();
        let k = gens.len();
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        // The valley between f_j and f_{j+1} is the end of the x-leg of f_{j+1}.
        let mut top: Vec<Option<usize>> = vec![None; k];
        let mut xleg_end = vec![0; k];
        for (j, &(xl, _)) in gens.iter().enumerate() {
            if j == 0 && gens[0].1 == 0 {
                continue;
            }
            let v0 = vertices.len();
            vertices.push(format!("f{j}"));
            top[j] = Some(v0);
            let mut prev = v0;
            for a in 1..=xl {
                let v = vertices.len();
                vertices.push(format!("x^{a} f{j}"));
                edges.push(Edge { from: prev, to: v, arrow: Arrow::X, map: EdgeMap::Identity });
                prev = v;
            }
            xleg_end[j] = prev;
        }
        for (j, &(_, yl)) in gens.iter().enumerate() {
            let Some(start) = top[j] else { continue };
            if yl == 0 {
                continue;
            }
            let mut prev = start;
            for b in 1..yl {
                let v = vertices.len();
                vertices.push(format!("y^{b} f{j}"));
                edges.push(Edge { from: prev, to: v, arrow: Arrow::Y, map: EdgeMap::Identity });
                prev = v;
            }
            edges.push(Edge { from: prev, to: xleg_end[j + 1], arrow: Arrow::Y, map: EdgeMap::NegIdentity });
        }
        Diagram { vertices, edges, block: 1, lambda: None }
    }

    pub fn of_label(l: &ModuleLabel) -> Diagram {
        match l {
            ModuleLabel::Band(b) => Diagram::of_band(b),
            ModuleLabel::String(s) => Diagram::of_string(s),
        }
    }

    /// The module spanned by the vertices, as `(X, Y)` in the vertex basis.
    pub fn matrices(&self) -> (Matrix, Matrix) {
        let m = self.block;
        let d = self.vertices.len() * m;
        let mut xm = Matrix::zeros(d, d);
        let mut ym = Matrix::zeros(d, d);
        let jinv = self.lambda.as_ref().map(|l| jordan(m, l).inverse().expect("nonzero eigenvalue"));
        for e in &self.edges {
            let block = match e.map {
                EdgeMap::Identity => Matrix::identity(m),
                EdgeMap::NegIdentity => Matrix::identity(m).scale(&qi(-1)),
                EdgeMap::NegJordanInverse => jinv.as_ref().expect("band edge").scale(&qi(-1)),
            };
            let target = if e.arrow == Arrow::X { &mut xm } else { &mut ym };
            for r in 0..m {
                for c in 0..m {
                    target[(e.to * m + r, e.from * m + c)] = block[(r, c)].clone();
                }
            }
        }
        (xm, ym)
    }
}

/// Upper triangular Jordan block `J_m(lambda)`.
pub fn jordan(m: usize, lambda: &Q) -> Matrix {
    let mut j = Matrix::zeros(m, m);
    for i in 0..m {
        j[(i, i)] = lambda.clone();
        if i + 1 < m {
            j[(i, i + 1)] = Q::one();
        }
    }
    j
}
