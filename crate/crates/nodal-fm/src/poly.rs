//! Univariate polynomials over Q, coefficients stored constant term first.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::Q;

pub type Poly = Vec<Q>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Q]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[Q], t: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
}

pub fn derivative(p: &[Q]) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
}

pub fn monic(p: Poly) -> Poly {
    let p = trim(p);
    match p.last() {
        Some(lead) => {
            let inv = lead.recip();
            p.iter().map(|c| c * &inv).collect()
        }
        None => p,
    }
}

/// Quotient and remainder of `a / b`. `b` must be nonzero.
pub fn divrem(a: &[Q], b: &[Q]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by the zero polynomial");
    let mut r = trim(a.to_vec());
    let mut quot = vec![Q::zero(); r.len().saturating_sub(db).max(1)];
    let lead_inv = b[db].recip();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] * &lead_inv;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &c * bc;
        }
        quot[shift] = c;
        r = trim(r);
    }
    (trim(quot), r)
}

pub fn gcd(a: &[Q], b: &[Q]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while degree(&b).is_some() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

/// The product of the distinct monic irreducible factors of `p`.
pub fn squarefree_part(p: &[Q]) -> Poly {
    let p = monic(p.to_vec());
    if degree(&p).unwrap_or(0) == 0 {
        return p;
    }
    let g = gcd(&p, &derivative(&p));
    monic(divrem(&p, &g).0)
}

/// Divides out `(t - r)` once. `r` must be a root.
pub fn deflate(p: &[Q], r: &Q) -> Poly {
    divrem(p, &[-r.clone(), Q::one()]).0
}

/// Best rational approximation with denominator at most `max_den`.
fn rational_near(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut frac = x;
    for _ in 0..64 {
        let a = frac.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let rem = frac - a;
        if rem.abs() < 1e-12 {
            break;
        }
        frac = 1.0 / rem;
    }
    if k1 == 0 {
        return None;
    }
    Some(Q::new(BigInt::from(h1), BigInt::from(k1)))
}

/// All rational roots of `p`, without multiplicity, in increasing order.
///
/// Candidates come from a floating point companion-matrix eigensolve of the
/// squarefree part followed by continued-fraction reconstruction; each one is
/// confirmed by exact evaluation, so the result never contains a non-root.
pub fn rational_roots(p: &[Q]) -> Vec<Q> {
    let mut sf = squarefree_part(p);
    let mut roots = Vec::new();
    let Some(d) = degree(&sf) else { return roots };
    if d == 0 {
        return roots;
    }
    if sf[0].is_zero() {
        roots.push(Q::zero());
        sf = deflate(&sf, &Q::zero());
    }
    loop {
        let d = degree(&sf).unwrap_or(0);
        if d == 0 {
            break;
        }
        if d == 1 {
            roots.push(-&sf[0] / &sf[1]);
            break;
        }
        let mut found = None;
        for cand in numeric_real_roots(&sf) {
            for max_den in [1_000, 1_000_000, 1_000_000_000] {
                if let Some(r) = rational_near(cand, max_den) {
                    if eval(&sf, &r).is_zero() {
                        found = Some(r);
                        break;
                    }
                }
            }
            if found.is_none() {
                found = exact_root_near(&sf, cand);
            }
            if found.is_some() {
                break;
            }
        }
        match found {
            Some(r) => {
                sf = deflate(&sf, &r);
                roots.push(r);
            }
            None => break,
        }
    }
    roots.sort();
    roots
}

/// A rational root of the squarefree `p` close to `approx`, by exact bisection.
///
/// After clearing denominators the rational roots have denominators dividing
/// the leading coefficient `c`, and two such numbers are at least `1/c^2`
/// apart. Once the bracket is narrower than that, the simplest rational inside
/// it is the only possible rational root there.
fn exact_root_near(p: &[Q], approx: f64) -> Option<Q> {
    let den = p.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Poly = p.iter().map(|c| c * Q::from_integer(den.clone())).collect();
    let lead = ints.last()?.numer().abs();
    let tol = Q::new(BigInt::one(), &lead * &lead);
    let sign = |t: &Q| eval(&ints, t).signum();
    let mut delta = 1e-9 * approx.abs().max(1.0);
    let (mut a, mut b) = loop {
        let a = Q::from_float(approx - delta)?;
        let b = Q::from_float(approx + delta)?;
        let (sa, sb) = (sign(&a), sign(&b));
        if sa.is_zero() {
            return Some(a);
        }
        if sb.is_zero() {
            return Some(b);
        }
        if sa != sb {
            break (a, b);
        }
        delta *= 16.0;
        if delta > 1e-2 * approx.abs().max(1.0) {
            return None;
        }
    };
    let sa = sign(&a);
    let mut step = 0usize;
    loop {
        if step.is_multiple_of(4) || &b - &a < tol {
            let s = simplest_between(&a, &b);
            if eval(&ints, &s).is_zero() {
                return Some(s);
            }
            if &b - &a < tol {
                return None;
            }
        }
        let mid = (&a + &b) / Q::from_integer(BigInt::from(2));
        let sm = sign(&mid);
        if sm.is_zero() {
            return Some(mid);
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
        step += 1;
    }
}

/// The rational with the smallest denominator in `[a, b]`, for `a < b`.
fn simplest_between(a: &Q, b: &Q) -> Q {
    let fa = a.floor();
    if fa == *a {
        return fa;
    }
    let next = &fa + Q::one();
    if next <= *b {
        return next;
    }
    let inner = simplest_between(&(b - &fa).recip(), &(a - &fa).recip());
    fa + inner.recip()
}

fn numeric_real_roots(p: &[Q]) -> Vec<f64> {
    let p = monic(p.to_vec());
    let d = degree(&p).unwrap_or(0);
    if d == 0 {
        return Vec::new();
    }
    let coeffs: Vec<f64> = p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Vec::new();
    }
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -coeffs[i];
    }
    let eig = comp.complex_eigenvalues();
    let mut out: Vec<f64> = eig
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    out.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    out
}

/// Renders a polynomial in `t`, highest degree first.
pub fn render(p: &[Q]) -> String {
    let p = trim(p.to_vec());
    if p.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let coeff = if a.is_one() && i > 0 { String::new() } else { a.to_string() };
        let coeff = if i > 0 && !a.is_integer() { format!("({coeff})") } else { coeff };
        match i {
            0 => s.push_str(&coeff),
            1 => s.push_str(&format!("{coeff}t")),
            _ => s.push_str(&format!("{coeff}t^{i}")),
        }
    }
    s
}

/// The polynomial of degree `< points.len()` through the given points.
pub fn interpolate(points: &[(Q, Q)]) -> Poly {
    let mut out: Poly = Vec::new();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis: Poly = vec![Q::one()];
        let mut denom = Q::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = mul(&basis, &[-xj.clone(), Q::one()]);
            denom *= xi - xj;
        }
        let scale = yi / denom;
        out = add(&out, &basis.iter().map(|c| c * &scale).collect::<Vec<_>>());
    }
    trim(out)
}

pub fn add(a: &[Q], b: &[Q]) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_else(Q::zero) + b.get(i).cloned().unwrap_or_else(Q::zero)).collect())
}

pub fn mul(a: &[Q], b: &[Q]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// A monic factor of `p` over Q of degree between 1 and `deg p - 1`, if one is found.
///
/// `p` is assumed squarefree. Products of small sets of numerically computed
/// roots are rounded to rational polynomials and kept only if they divide
/// `p` exactly, so a returned factor is always genuine; failure to find one
/// is not a proof of irreducibility.
pub fn rational_factor(p: &[Q], max_subset: usize) -> Option<Poly> {
    let p = monic(p.to_vec());
    let d = degree(&p)?;
    if d < 2 {
        return None;
    }
    if let Some(r) = rational_roots(&p).into_iter().next() {
        return Some(vec![-r, Q::one()]);
    }
    let roots = numeric_roots(&p);
    if roots.len() != d {
        return None;
    }
    let limit = max_subset.min(d / 2);
    let mut budget = 200_000usize;
    for size in 2..=limit {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if budget == 0 {
                return None;
            }
            budget -= 1;
            if let Some(f) = rounded_product(&roots, &idx) {
                if degree(&divrem(&p, &f).1).is_none() {
                    return Some(f);
                }
            }
            if !next_combination(&mut idx, d) {
                break;
            }
        }
    }
    None
}

/// Advances `idx` to the next increasing `idx.len()`-subset of `0..n`.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn numeric_roots(p: &[Q]) -> Vec<nalgebra::Complex<f64>> {
    let d = degree(p).unwrap_or(0);
    let coeffs: Vec<f64> = p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    if d == 0 || coeffs.iter().any(|c| !c.is_finite()) {
        return Vec::new();
    }
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -coeffs[i] / coeffs[d];
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

fn rounded_product(roots: &[nalgebra::Complex<f64>], idx: &[usize]) -> Option<Poly> {
    let mut c = vec![nalgebra::Complex::new(1.0, 0.0)];
    for &i in idx {
        let mut next = vec![nalgebra::Complex::new(0.0, 0.0); c.len() + 1];
        for (k, v) in c.iter().enumerate() {
            next[k + 1] += v;
            next[k] -= v * roots[i];
        }
        c = next;
    }
    let mut out = Vec::with_capacity(c.len());
    for z in c {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            return None;
        }
        out.push(rational_near(z.re, 1_000_000)?);
    }
    Some(out)
}

/// `p(A)` for a square matrix `A`.
pub fn eval_matrix(p: &[Q], a: &crate::linalg::Matrix) -> crate::linalg::Matrix {
    let n = a.rows();
    let mut acc = crate::linalg::Matrix::zeros(n, n);
    for c in p.iter().rev() {
        acc = &acc * a;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}
