//! Binomial coefficients, Pochhammer symbols and the terminating Gauss
//! hypergeometric series.

use crate::error::{Error, Result};

/// `C(n, k)` in floating point by the multiplicative formula.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Rising factorial `(x)_j = x (x+1) ... (x+j-1)`.
pub fn pochhammer(x: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// `(l+1)(l+2)...(l+k)`, the squared norm gained by `k` creation operators
/// acting on `|l>`.
pub fn rising_from(l: usize, k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * (l + i) as f64)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `2F1(a, b; c; x)` for a non-positive integer `a`, summed term by term.
///
/// The series stops after `-a + 1` terms. A vanishing `(c)_j` inside that
/// range is a pole and is reported as a domain error.
pub fn hypergeom_2f1_terminating(a: i64, b: i64, c: f64, x: f64) -> Result<f64> {
    if a > 0 {
        return Err(Error::Domain(format!(
            "first parameter must be a non-positive integer, got {a}"
        )));
    }
    let terms = (-a) as usize;
    let mut sum = 1.0;
    let mut term = 1.0;
    for j in 0..terms {
        let jf = j as f64;
        let denom = (c + jf) * (jf + 1.0);
        if c + jf == 0.0 {
            return Err(Error::Domain(format!(
                "pole: (c)_{} vanishes for c = {c}",
                j + 1
            )));
        }
        term *= (a as f64 + jf) * (b as f64 + jf) * x / denom;
        sum += term;
    }
    Ok(sum)
}
