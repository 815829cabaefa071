//! Continued-fraction cylinder criterion.
//!
//! For an irrational slope `alpha` given by a prefix of its continued
//! fraction, each convergent `p/q` determines a long almost-horizontal
//! cylinder candidate on a slit torus of slit length `L`. The relevant
//! quantity is the energy
//!
//! ```text
//! E = L^2 (p^2 + q^2) d^2 / (d^2 + (1 + alpha p / q)^2),   d = alpha - p/q
//! ```
//!
//! `E < 1` certifies the cylinder criterion and `E < 2 L^2 / q^2` is the
//! coarser bound that tends to zero. Since `alpha` is only known through
//! the prefix, all quantities are computed as exact rational intervals and
//! every flag is certified (`Some`) or left open (`None`).

use crate::scalar::{scalar, sign, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DirichletError {
    #[error(
        "continued fraction prefix exhausted after {available} coefficients: the input only determines a rational number at this depth"
    )]
    RationalInput { available: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// A closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Interval {
    pub fn point(x: Scalar) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn new(a: Scalar, b: Scalar) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    fn shift(&self, c: &Scalar) -> Interval {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    fn scale(&self, c: &Scalar) -> Interval {
        Interval::new(&self.lo * c, &self.hi * c)
    }

    /// Square, clamped at zero when the interval straddles it.
    fn sq(&self) -> Interval {
        let l2 = &self.lo * &self.lo;
        let h2 = &self.hi * &self.hi;
        if sign(&self.lo) < 0 && sign(&self.hi) > 0 {
            Interval::new(Scalar::zero(), l2.max(h2))
        } else {
            Interval::new(l2, h2)
        }
    }

    /// Absolute value.
    fn abs(&self) -> Interval {
        self.sq_root_free_abs()
    }

    fn sq_root_free_abs(&self) -> Interval {
        let la = if sign(&self.lo) < 0 { -&self.lo } else { self.lo.clone() };
        let ha = if sign(&self.hi) < 0 { -&self.hi } else { self.hi.clone() };
        if sign(&self.lo) < 0 && sign(&self.hi) > 0 {
            Interval::new(Scalar::zero(), la.max(ha))
        } else {
            Interval::new(la, ha)
        }
    }

    /// Certified strict comparison against a bound: `Some(true)` when the
    /// whole interval is below it, `Some(false)` when none of it is.
    pub fn certified_lt(&self, bound: &Scalar) -> Option<bool> {
        if &self.hi < bound {
            Some(true)
        } else if &self.lo >= bound {
            Some(false)
        } else {
            None
        }
    }
}

/// One convergent's record.
#[derive(Clone, Debug)]
pub struct DirichletRecord {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
    /// Certified enclosure of the energy `E_n`.
    pub energy: Interval,
    /// `|alpha - p/q| < 1/q^2` (always true for convergents; kept as a
    /// cross-check of the interval machinery).
    pub dirichlet: Option<bool>,
    /// `E_n < 1`: the cylinder criterion.
    pub cylinder: Option<bool>,
    /// `E_n < 2 L^2 / q_n^2`.
    pub within_bound: Option<bool>,
    /// The bound `2 L^2 / q_n^2` itself; tends to zero monotonically.
    pub decay_bound: Scalar,
}

fn convergents(cf: &[u64]) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(cf.len());
    let (mut h2, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k2, mut k1) = (BigInt::one(), BigInt::zero());
    for &a in cf {
        let a = BigInt::from(a);
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        out.push((h.clone(), k.clone()));
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
    }
    out
}

/// Evaluates the records for `n = 1 ..= n_max`. `cf` is the coefficient
/// prefix `[a0, a1, ...]`; two coefficients beyond `n_max` are needed to
/// bracket `alpha`.
pub fn dirichlet_cylinder_check(
    cf: &[u64],
    l: &Scalar,
    n_max: usize,
) -> Result<Vec<DirichletRecord>, DirichletError> {
    if cf.is_empty() {
        return Err(DirichletError::Invalid("empty continued fraction".into()));
    }
    if cf.iter().skip(1).any(|&a| a == 0) {
        return Err(DirichletError::Invalid(
            "continued fraction coefficients after the first must be positive".into(),
        ));
    }
    if sign(l) <= 0 {
        return Err(DirichletError::Invalid("slit length must be positive".into()));
    }
    if cf.len() < n_max + 3 {
        return Err(DirichletError::RationalInput { available: cf.len() });
    }
    let conv = convergents(cf);
    let rat = |pq: &(BigInt, BigInt)| Scalar::new(pq.0.clone(), pq.1.clone());
    // alpha lies strictly between the last two convergents of any genuine
    // prefix of its continued fraction.
    let alpha = Interval::new(rat(&conv[conv.len() - 2]), rat(&conv[conv.len() - 1]));
    let l_sq = l * l;
    let two = scalar(2);

    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (p, q) = conv[n].clone();
        let pq = Scalar::new(p.clone(), q.clone());
        let delta = alpha.shift(&-&pq);
        let a = delta.sq();
        let b = alpha.scale(&pq).shift(&scalar(1)).sq();
        // E = C * A / (A + B) with A, B >= 0: monotone in each argument.
        let c = &l_sq * &Scalar::from_integer(&p * &p + &q * &q);
        let denom_hi = &a.hi + &b.hi;
        let denom_lo = &a.lo + &b.lo;
        if sign(&denom_lo) <= 0 {
            return Err(DirichletError::Invalid(
                "degenerate energy denominator".into(),
            ));
        }
        let energy = Interval {
            lo: &(&c * &a.lo) / &denom_hi,
            hi: &(&c * &a.hi) / &denom_lo,
        };
        let q_sq = Scalar::from_integer(&q * &q);
        let decay_bound = &(&two * &l_sq) / &q_sq;
        let record = DirichletRecord {
            n,
            dirichlet: delta.abs().certified_lt(&(Scalar::one() / &q_sq)),
            cylinder: energy.certified_lt(&Scalar::one()),
            within_bound: energy.certified_lt(&decay_bound),
            energy,
            decay_bound,
            p,
            q,
        };
        out.push(record);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_tail() {
        // alpha = [0; 1, 1, 1, ...] = 1/phi. Convergents are ratios of
        // Fibonacci numbers.
        let cf: Vec<u64> = std::iter::once(0).chain(std::iter::repeat(1).take(14)).collect();
        let records = dirichlet_cylinder_check(&cf, &scalar(1), 10).unwrap();
        assert_eq!(records.len(), 10);
        let mut prev_bound: Option<Scalar> = None;
        for r in &records {
            assert_eq!(r.dirichlet, Some(true), "n = {}", r.n);
            // The 2L^2/q_n^2 bounds decrease monotonically to zero.
            if let Some(pb) = prev_bound.take() {
                assert!(r.decay_bound <= pb);
            }
            prev_bound = Some(r.decay_bound.clone());
            assert!(sign(&r.energy.lo) >= 0);
            assert!(r.energy.lo <= r.energy.hi);
        }
        // Fibonacci denominators.
        let qs: Vec<i64> = records.iter().map(|r| i64::try_from(&r.q).unwrap()).collect();
        assert_eq!(qs, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
        // Deep convergents certify the cylinder criterion.
        assert_eq!(records.last().unwrap().cylinder, Some(true));
        assert_eq!(records.last().unwrap().within_bound, Some(true));
    }

    #[test]
    fn exhausted_prefix_is_an_error() {
        assert!(matches!(
            dirichlet_cylinder_check(&[0, 1, 1], &scalar(1), 10),
            Err(DirichletError::RationalInput { available: 3 })
        ));
    }

    #[test]
    fn sqrt2_records() {
        // alpha = [1; 2, 2, 2, ...] = sqrt(2).
        let cf: Vec<u64> = std::iter::once(1).chain(std::iter::repeat(2).take(10)).collect();
        let records = dirichlet_cylinder_check(&cf, &scalar(1), 5).unwrap();
        let pq: Vec<(i64, i64)> = records
            .iter()
            .map(|r| (i64::try_from(&r.p).unwrap(), i64::try_from(&r.q).unwrap()))
            .collect();
        assert_eq!(pq, vec![(3, 2), (7, 5), (17, 12), (41, 29), (99, 70)]);
        for r in &records {
            assert_eq!(r.dirichlet, Some(true));
        }
    }
}
