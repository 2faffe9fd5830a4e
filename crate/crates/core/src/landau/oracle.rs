//! Independent Laguerre evaluation for verification.
//!
//! Sums `Σ_{i=0}^{n} (−1)^i C(n+α, n−i) x^i / i!` exactly over the rationals
//! (both `α` and `x` are converted from `f64` without rounding) and rounds
//! once at the end. Shares no code with the recurrence in the parent module.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Largest degree accepted by [`laguerre_series_oracle`].
pub const MAX_ORACLE_DEGREE: i64 = 15;

fn exact(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::Domain(format!("non-finite oracle input {v}")))
}

/// `L_n^α(x)` by the explicit finite series.
pub fn laguerre_series_oracle(n: i64, alpha: f64, x: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain(format!(
            "Laguerre degree must be >= 0, got {n}"
        )));
    }
    if n > MAX_ORACLE_DEGREE {
        return Err(Error::Domain(format!(
            "series oracle limited to n <= {MAX_ORACLE_DEGREE}, got {n}"
        )));
    }
    let a = exact(alpha)?;
    let x = exact(x)?;
    let mut sum = BigRational::zero();
    let mut x_pow = BigRational::one();
    let mut fact = BigRational::one();
    for i in 0..=n {
        if i > 0 {
            x_pow *= &x;
            fact *= BigRational::from_integer(BigInt::from(i));
        }
        // C(n+α, n−i) = Π_{l=1}^{n−i} (α + i + l) / l
        let mut binom = BigRational::one();
        for l in 1..=(n - i) {
            binom *= &a + BigRational::from_integer(BigInt::from(i + l));
            binom /= BigRational::from_integer(BigInt::from(l));
        }
        let term = binom * &x_pow / &fact;
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum.to_f64()
        .ok_or_else(|| Error::Domain("oracle result not representable".into()))
}
