//! Univariate polynomials with exact rational coefficients.
//!
//! All coefficient arithmetic is exact; floating point only appears when a
//! polynomial (or one of its integrals) is evaluated or converted at the end
//! of a computation.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Converts an exact rational to the nearest `f64`.
///
/// `Ratio::to_f64` divides two separately rounded doubles, which loses
/// accuracy (or overflows) once numerator and denominator grow past 2^1023.
/// Here the quotient is formed in integer arithmetic with ~80 significant
/// bits and scaled back, so the result is correct to within a few ulps.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.is_negative();
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let shift: i64 = den.bits() as i64 + 80 - num.bits() as i64;
    let scaled = if shift >= 0 {
        num << shift as u64
    } else {
        num >> (-shift) as u64
    };
    let q = scaled / den;
    let qf = q.to_f64().expect("integer quotient converts to f64");
    let value = qf * 2f64.powi(-shift as i32);
    if negative {
        -value
    } else {
        value
    }
}

/// Polynomial `coeffs[0] + coeffs[1] x + ... + coeffs[d] x^d` with exact
/// rational coefficients. The representation is normalized: trailing zero
/// coefficients are trimmed and the zero polynomial has an empty coefficient
/// vector.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RationalPoly::constant(BigRational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        RationalPoly {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        RationalPoly { coeffs: vec![c] }.trimmed()
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        RationalPoly { coeffs }.trimmed()
    }

    /// Convenience constructor from integer coefficients, low order first.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        RationalPoly {
            coeffs: coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
        .trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + ratio_to_f64(c);
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return RationalPoly::zero();
        }
        RationalPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return RationalPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect();
        RationalPoly { coeffs }.trimmed()
    }

    /// The antiderivative `q(x) = \int_{-1}^{x} p(s) ds`, so `q(-1) = 0`.
    pub fn antiderivative_from_minus1(&self) -> Self {
        if self.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / BigRational::from_integer(BigInt::from(k as i64 + 1)));
        }
        let mut poly = RationalPoly { coeffs };
        let at_minus1 = poly.eval(&BigRational::from_integer(BigInt::from(-1)));
        poly.coeffs[0] = -at_minus1;
        poly.trimmed()
    }

    /// Exact value of `\int_{-1}^{1} p(x) dx`.
    pub fn integrate_over_minus1_1(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k % 2 == 0 {
                acc += c * BigRational::new(BigInt::from(2), BigInt::from(k as i64 + 1));
            }
        }
        acc
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*x", c)?,
                _ => write!(f, "{}*x^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = BigRational::zero();
            if let Some(a) = self.coeffs.get(k) {
                c += a;
            }
            if let Some(b) = rhs.coeffs.get(k) {
                c += b;
            }
            coeffs.push(c);
        }
        RationalPoly { coeffs }.trimmed()
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        self + &(-rhs)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RationalPoly { coeffs }.trimmed()
    }
}

/// Parses a rational stored as a decimal-free `num/den` string.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().ok()?;
    let den: BigInt = den.trim().parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Renders a rational as a decimal-free `num/den` string.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Used by tests asserting the float-conversion accuracy contract.
pub fn ratio_f64_relative_error(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let f = ratio_to_f64(r);
    let back = BigRational::from_float(f).expect("finite float");
    let err = (&back - r) / r;
    ratio_to_f64(&err).abs()
}

#[allow(unused)]
fn bigint_sign(i: &BigInt) -> Sign {
    i.sign()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalization_trims_trailing_zeros() {
        let p = RationalPoly::from_integers(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.coeffs().len(), 2);
        assert!(RationalPoly::from_integers(&[0, 0]).is_zero());
    }

    #[test]
    fn antiderivative_of_one_is_x_plus_one() {
        let q = RationalPoly::one().antiderivative_from_minus1();
        assert_eq!(q, RationalPoly::from_integers(&[1, 1]));
    }

    #[test]
    fn antiderivative_of_x() {
        // x -> (x^2 - 1)/2
        let q = RationalPoly::x().antiderivative_from_minus1();
        let expected = RationalPoly::from_coeffs(vec![rat(-1, 2), rat(0, 1), rat(1, 2)]);
        assert_eq!(q, expected);
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(RationalPoly::one().integrate_over_minus1_1(), rat(2, 1));
        assert_eq!(RationalPoly::x().integrate_over_minus1_1(), rat(0, 1));
        let x2 = RationalPoly::from_integers(&[0, 0, 1]);
        assert_eq!(x2.integrate_over_minus1_1(), rat(2, 3));
    }

    #[test]
    fn ratio_to_f64_handles_large_values() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * 3 + 1, big);
        let f = ratio_to_f64(&r);
        assert!((f - 3.0).abs() < 1e-12);

        let tiny = BigRational::new(BigInt::from(1), BigInt::from(10).pow(200));
        assert!(ratio_to_f64(&tiny) > 0.0);
    }

    proptest! {
        #[test]
        fn derivative_inverts_antiderivative(coeffs in prop::collection::vec(-50i64..50, 0..8)) {
            let p = RationalPoly::from_integers(&coeffs);
            let back = p.antiderivative_from_minus1().derivative();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn mul_matches_pointwise_eval(
            a in prop::collection::vec(-9i64..9, 0..6),
            b in prop::collection::vec(-9i64..9, 0..6),
            x_num in -20i64..20,
        ) {
            let pa = RationalPoly::from_integers(&a);
            let pb = RationalPoly::from_integers(&b);
            let x = rat(x_num, 7);
            let lhs = (&pa * &pb).eval(&x);
            let rhs = pa.eval(&x) * pb.eval(&x);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ratio_conversion_is_accurate(n in -1_000_000_000i64..1_000_000_000, d in 1i64..1_000_000_000) {
            let r = rat(n, d);
            prop_assert!(ratio_f64_relative_error(&r) < 1e-15);
        }
    }
}
