//! Exact roots in `eta` of the initial mean parity of excited binomial
//! states.
//!
//! With `x = eta²`, the unnormalized parity of `a†^k |eta, M>` is the
//! integer polynomial
//! `f(x) = Σ_l (-1)^(l+k) (l+1)...(l+k) C(M,l) x^l (1-x)^(M-l)`.
//! Its square-free decomposition separates odd-multiplicity roots (sign
//! crossings) from even-multiplicity roots (touches); Sturm sequences over
//! the rationals then isolate each root in `(0, 1)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootKind {
    Crossing,
    Touch,
}

impl RootKind {
    pub fn name(&self) -> &'static str {
        match self {
            RootKind::Crossing => "crossing",
            RootKind::Touch => "touch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityRoot {
    pub eta: f64,
    /// `eta²`
    pub x: f64,
    pub multiplicity: usize,
    pub kind: RootKind,
}

type Poly = Vec<BigRational>;

fn binom(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn rising(l: usize, k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(l + i))
}

fn weighted_poly(k: usize, m: usize, signed: bool) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); m + 1];
    for l in 0..=m {
        let mut w = rising(l, k) * binom(m, l);
        if signed && (l + k) % 2 == 1 {
            w = -w;
        }
        for j in 0..=(m - l) {
            let mut term = &w * binom(m - l, j);
            if j % 2 == 1 {
                term = -term;
            }
            coeffs[l + j] += term;
        }
    }
    coeffs
}

/// Coefficients (lowest power first) of the parity numerator `f(x)`.
pub fn initial_parity_polynomial(k: usize, m: usize) -> Vec<BigInt> {
    weighted_poly(k, m, true)
}

/// Coefficients of the squared norm `||a†^k |eta, M>||²` as a polynomial in
/// `x`; for `k = 1` this is `1 + M x`.
pub fn initial_parity_norm_polynomial(k: usize, m: usize) -> Vec<BigInt> {
    weighted_poly(k, m, false)
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> usize {
    p.len().saturating_sub(1)
}

fn is_constant(p: &Poly) -> bool {
    p.len() <= 1
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    let db = degree(b);
    let lead = b.last().expect("divisor is non-zero").clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = degree(&r) - db;
        let factor = r.last().expect("non-empty") / &lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &factor * c;
        }
        q[shift] = factor;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(p: Poly) -> Poly {
    let lead = p.last().expect("non-zero").clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

/// Yun's algorithm: `f = Π a_i^i`, returned as `(a_i, i)` for non-constant
/// factors.
fn square_free(f: &Poly) -> Vec<(Poly, usize)> {
    let df = derivative(f);
    let b = gcd(f, &df);
    let mut c = div_rem(f, &b).0;
    let mut d = sub(&div_rem(&df, &b).0, &derivative(&c));
    let mut out = Vec::new();
    let mut i = 1;
    while !is_constant(&c) {
        let a = gcd(&c, &d);
        let c_next = div_rem(&c, &a).0;
        d = sub(&div_rem(&d, &a).0, &derivative(&c_next));
        if !is_constant(&a) {
            out.push((a, i));
        }
        c = c_next;
        i += 1;
    }
    out
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sturm(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = div_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn variations(seq: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn half(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigRational::from_integer(BigInt::from(2))
}

/// Bisects a simple root bracketed by `lo < hi` with opposite signs.
fn refine(p: &Poly, mut lo: BigRational, mut hi: BigRational) -> f64 {
    let lo_pos = eval(p, &lo).is_positive();
    for _ in 0..60 {
        let mid = half(&lo, &hi);
        let v = eval(p, &mid);
        if v.is_zero() {
            return mid.to_f64().expect("finite");
        }
        if v.is_positive() == lo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    half(&lo, &hi).to_f64().expect("finite")
}

/// Distinct roots of a square-free `p` in the open interval `(lo, hi)`;
/// `p` must not vanish at either end.
fn isolate(p: &Poly, lo: BigRational, hi: BigRational, out: &mut Vec<f64>) {
    let seq = sturm(p);
    let count = variations(&seq, &lo) - variations(&seq, &hi);
    match count {
        0 => {}
        1 => out.push(refine(p, lo, hi)),
        _ => {
            let mid = half(&lo, &hi);
            if eval(p, &mid).is_zero() {
                out.push(mid.to_f64().expect("finite"));
                let linear = vec![-mid.clone(), BigRational::one()];
                let (deflated, _) = div_rem(p, &linear);
                isolate(&deflated, lo, hi, out);
            } else {
                isolate(p, lo, mid.clone(), out);
                isolate(p, mid, hi, out);
            }
        }
    }
}

/// Roots in `eta ∈ (0, 1)` of the initial mean parity of `a†^k |eta, M>`,
/// sorted, each labeled as a sign crossing or a tangential touch.
pub fn initial_parity_roots(k: usize, m: usize) -> Result<Vec<ParityRoot>> {
    if !(1..=4).contains(&k) || m > 30 {
        return Err(Error::Domain(format!(
            "initial parity roots are supported for 1 <= k <= 4 and M <= 30, got k={k}, M={m}"
        )));
    }
    let f: Poly = trim(
        initial_parity_polynomial(k, m)
            .into_iter()
            .map(BigRational::from_integer)
            .collect(),
    );
    if is_constant(&f) {
        return Ok(Vec::new());
    }
    let (zero, one) = (BigRational::zero(), BigRational::one());
    let mut roots = Vec::new();
    for (mut factor, mult) in square_free(&f) {
        // Strip roots sitting exactly on the end points.
        for end in [&zero, &one] {
            while eval(&factor, end).is_zero() {
                factor = div_rem(&factor, &vec![-end.clone(), BigRational::one()]).0;
            }
        }
        if is_constant(&factor) {
            continue;
        }
        let mut xs = Vec::new();
        isolate(&factor, zero.clone(), one.clone(), &mut xs);
        let kind = if mult % 2 == 1 { RootKind::Crossing } else { RootKind::Touch };
        roots.extend(xs.into_iter().map(|x| ParityRoot { eta: x.sqrt(), x, multiplicity: mult, kind }));
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(roots)
}
