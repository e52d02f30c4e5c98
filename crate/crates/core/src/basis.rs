//! Legendre polynomials on [-1, 1] and the orthonormal basis scaled to a
//! step interval.

use crate::error::{Error, Result};
use crate::poly::RationalPoly;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Largest supported polynomial degree. Truncation orders above this are
/// rejected as a configuration error before any table is built.
pub const MAX_DEGREE: usize = 64;

pub fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        Err(Error::DegreeCap {
            requested: n,
            cap: MAX_DEGREE,
        })
    } else {
        Ok(())
    }
}

/// Legendre polynomial `P_n` with exact rational coefficients, via the
/// three-term recurrence `(n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}`.
///
/// Callers are expected to have validated `n` against [`MAX_DEGREE`]; the
/// bound is asserted here to keep arbitrary-precision blowup impossible.
pub fn legendre(n: usize) -> RationalPoly {
    assert!(
        n <= MAX_DEGREE,
        "Legendre degree {n} above cap {MAX_DEGREE}"
    );
    legendre_family(n).pop().expect("family is non-empty")
}

/// All of `P_0 .. P_n` in one pass.
pub fn legendre_family(n: usize) -> Vec<RationalPoly> {
    assert!(
        n <= MAX_DEGREE,
        "Legendre degree {n} above cap {MAX_DEGREE}"
    );
    let mut family = Vec::with_capacity(n + 1);
    family.push(RationalPoly::one());
    if n == 0 {
        return family;
    }
    family.push(RationalPoly::x());
    let x = RationalPoly::x();
    for k in 1..n {
        let a = BigRational::new(BigInt::from(2 * k as i64 + 1), BigInt::from(k as i64 + 1));
        let b = BigRational::new(BigInt::from(k as i64), BigInt::from(k as i64 + 1));
        let next = &(&x * &family[k]).scale(&a) - &family[k - 1].scale(&b);
        family.push(next);
    }
    family
}

/// Floating-point evaluation of `P_n(x)` by the same recurrence. Used where
/// only values are needed (basis evaluation, quadrature oracles).
pub fn legendre_value(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = x;
    for k in 1..n {
        let next = ((2 * k + 1) as f64 * x * curr - k as f64 * prev) / (k + 1) as f64;
        prev = curr;
        curr = next;
    }
    curr
}

/// Element of the orthonormal system on a step interval `[start, start + len]`:
/// `phi_i(x) = sqrt((2i+1)/len) * P_i((x - start - len/2) * 2/len)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBasisFn {
    degree: usize,
    step_start: f64,
    step_len: f64,
}

impl ScaledBasisFn {
    pub fn new(degree: usize, step_start: f64, step_len: f64) -> Result<Self> {
        check_degree(degree)?;
        if step_len <= 0.0 || step_len.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "step length must be positive, got {step_len}"
            )));
        }
        Ok(ScaledBasisFn {
            degree,
            step_start,
            step_len,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.step_start - self.step_len / 2.0) * 2.0 / self.step_len;
        ((2 * self.degree + 1) as f64 / self.step_len).sqrt() * legendre_value(self.degree, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio_to_f64;
    use num_traits::{One, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Rodrigues formula oracle: `P_n = d^n/dx^n (x^2-1)^n / (2^n n!)`,
    /// independent of the recurrence used by `legendre`.
    fn legendre_rodrigues(n: usize) -> RationalPoly {
        let base = RationalPoly::from_integers(&[-1, 0, 1]);
        let mut p = RationalPoly::one();
        for _ in 0..n {
            p = &p * &base;
        }
        let mut factor = BigRational::one();
        for k in 1..=n {
            p = p.derivative();
            factor = factor * rat(1, 2) * rat(1, k as i64);
        }
        p.scale(&factor)
    }

    #[test]
    fn low_order_polynomials() {
        assert_eq!(legendre(0), RationalPoly::one());
        assert_eq!(legendre(1), RationalPoly::x());
        // P_4 = (35x^4 - 30x^2 + 3)/8
        let p4 = RationalPoly::from_coeffs(vec![
            rat(3, 8),
            rat(0, 1),
            rat(-30, 8),
            rat(0, 1),
            rat(35, 8),
        ]);
        assert_eq!(legendre(4), p4);
    }

    #[test]
    fn recurrence_matches_rodrigues_oracle() {
        for n in 0..=8 {
            assert_eq!(legendre(n), legendre_rodrigues(n), "n = {n}");
        }
    }

    #[test]
    fn degree_and_value_at_one() {
        let one = BigRational::one();
        for (n, p) in legendre_family(10).iter().enumerate() {
            assert_eq!(p.degree(), n);
            assert_eq!(p.eval(&one), one);
        }
    }

    #[test]
    fn exact_orthogonality() {
        let family = legendre_family(8);
        for (i, pi) in family.iter().enumerate() {
            for (j, pj) in family.iter().enumerate() {
                let inner = (pi * pj).integrate_over_minus1_1();
                if i == j {
                    assert_eq!(inner, rat(2, 2 * i as i64 + 1));
                } else {
                    assert!(inner.is_zero(), "P_{i} . P_{j} = {inner}");
                }
            }
        }
    }

    #[test]
    fn recurrence_holds_as_polynomial_identity() {
        let family = legendre_family(10);
        let x = RationalPoly::x();
        for n in 1..10 {
            let lhs = family[n + 1].scale(&rat(n as i64 + 1, 1));
            let rhs = &(&x * &family[n]).scale(&rat(2 * n as i64 + 1, 1))
                - &family[n - 1].scale(&rat(n as i64, 1));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn antiderivative_of_p2() {
        // P_2 = (3x^2 - 1)/2 -> (x^3 - x)/2
        let expected = RationalPoly::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(0, 1), rat(1, 2)]);
        assert_eq!(legendre(2).antiderivative_from_minus1(), expected);
    }

    #[test]
    fn float_eval_matches_exact() {
        for n in 0..=12 {
            let p = legendre(n);
            for &x in &[-0.97, -0.4, 0.0, 0.33, 0.8, 1.0] {
                let exact = ratio_to_f64(&p.eval(&BigRational::from_float(x).unwrap()));
                assert!((legendre_value(n, x) - exact).abs() < 1e-12);
            }
        }
    }

    /// Gauss-Legendre nodes/weights computed in floating point by Newton
    /// iteration; independent of the exact-rational code path.
    fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..60 {
                let p = legendre_value(n, x);
                let pm1 = legendre_value(n - 1, x);
                let dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let pm1 = legendre_value(n - 1, x);
            let dp = n as f64 * (x * legendre_value(n, x) - pm1) / (x * x - 1.0);
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    }

    #[test]
    fn scaled_basis_orthonormal_by_quadrature() {
        let start = 0.7;
        let len = 0.35;
        let nodes = gauss_legendre(24);
        for i in 0..=6usize {
            for j in 0..=6usize {
                let fi = ScaledBasisFn::new(i, start, len).unwrap();
                let fj = ScaledBasisFn::new(j, start, len).unwrap();
                let mut acc = 0.0;
                for &(u, w) in &nodes {
                    let x = start + len * (u + 1.0) / 2.0;
                    acc += w * fi.eval(x) * fj.eval(x) * len / 2.0;
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((acc - expected).abs() < 1e-12, "phi_{i} . phi_{j} = {acc}");
            }
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        assert!(check_degree(MAX_DEGREE).is_ok());
        assert!(matches!(
            check_degree(MAX_DEGREE + 1),
            Err(Error::DegreeCap { .. })
        ));
        assert!(ScaledBasisFn::new(MAX_DEGREE + 1, 0.0, 1.0).is_err());
    }
}
