//! Exact rational scalars.
//!
//! Every coordinate, length-squared, and area in this crate is a
//! [`Scalar`] (an arbitrary-precision rational kept in lowest terms with a
//! positive denominator by `num-rational`). No floating point enters any
//! geometric decision; floats appear only in presentation output (CSV
//! `angle_float` columns, SVG coordinates).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number. All field operations are exact.
pub type Scalar = BigRational;

/// Shorthand for an integer-valued scalar.
pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `p/q`. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or a bare integer `p`, the wire syntax of `slitsurf v1`.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().ok()?;
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(p))
        }
    }
}

/// Formats a scalar in `slitsurf v1` syntax: `p/q`, or `p` when integral.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Presentation-only conversion. Never used in decision logic.
pub fn to_f64(x: &Scalar) -> f64 {
    let n = x.numer();
    let d = x.denom();
    // Cheap path for small values, bit-shifting fallback for big ones.
    match (n.to_string().parse::<f64>(), d.to_string().parse::<f64>()) {
        (Ok(nf), Ok(df)) if nf.is_finite() && df.is_finite() && df != 0.0 => nf / df,
        _ => {
            let shift = (n.bits().max(d.bits()) as i64 - 500).max(0) as u64;
            let nf = (n >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
            let df = (d >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN);
            nf / df
        }
    }
}

/// Sign of a scalar as -1, 0, or 1.
pub fn sign(x: &Scalar) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
