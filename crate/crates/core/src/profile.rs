//! Profile functions `(Ftilde, H)` defining the semilinear right-hand
//! side, with the family tag and the derived remainder derivatives.
//!
//! `H1` and `Ftilde1` are the parts of the profiles vanishing to second
//! order at 0: `H1(psi) = H(psi) - a psi - H(0)` with `a = H'(0)`, and
//! `Ftilde1(psi) = Ftilde(psi) + 2 b psi` with `b = -Ftilde'(0)/2`.
//! Their derivatives are evaluated directly from polynomial
//! coefficients, never by subtracting Taylor terms at run time.

use crate::error::{GsError, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Scalar profile as a polynomial in `psi` (coefficient of `psi^k` at
/// index `k`). The named built-ins used in configs are all special
/// cases of this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFn<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> ProfileFn<T> {
    pub fn poly(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    /// `slope * psi` (the `linear_H` / `linear_Ftilde` built-ins).
    pub fn linear(slope: T) -> Self {
        Self::poly(vec![T::zero(), slope])
    }

    /// `coeff * psi^2` (the `quadratic_Ftilde` built-in).
    pub fn quadratic(coeff: T) -> Self {
        Self::poly(vec![T::zero(), T::zero(), coeff])
    }

    pub fn eval(&self, psi: T) -> T {
        let mut acc = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * psi + c;
        }
        acc
    }

    pub fn d1(&self, psi: T) -> T {
        let mut acc = T::zero();
        for (k, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * psi + c * T::of_usize(k);
        }
        acc
    }

    pub fn d2(&self, psi: T) -> T {
        let mut acc = T::zero();
        for (k, &c) in self.coeffs.iter().enumerate().skip(2).rev() {
            acc = acc * psi + c * T::of_usize(k * (k - 1));
        }
        acc
    }
}

/// Which structural family the profile pair belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `Ftilde(0) = 0`, `Ftilde'(0) < 0`, `H'(0) > 0`.
    Generic,
    /// `Ftilde(0) = Ftilde'(0) = 0`, `H'(0) > 0`.
    Degenerate,
}

/// The validated pair `(Ftilde, H)`.
#[derive(Debug, Clone)]
pub struct ProfileFunctions<T> {
    pub ftilde: ProfileFn<T>,
    pub h: ProfileFn<T>,
    pub family: Family,
}

impl<T: Scalar> ProfileFunctions<T> {
    pub fn new(h: ProfileFn<T>, ftilde: ProfileFn<T>, family: Family) -> Result<Self> {
        let tol = T::of(1e3) * T::epsilon();
        let f0 = ftilde.eval(T::zero());
        let f1 = ftilde.d1(T::zero());
        let h1 = h.d1(T::zero());
        if f0.abs() > tol {
            return Err(GsError::InvalidProfile(format!(
                "Ftilde(0) = {} must vanish",
                f0.as_f64()
            )));
        }
        if !(h1 > T::zero()) {
            return Err(GsError::InvalidProfile(format!(
                "H'(0) = {} must be positive",
                h1.as_f64()
            )));
        }
        match family {
            Family::Generic => {
                if !(f1 < T::zero()) {
                    return Err(GsError::InvalidProfile(format!(
                        "generic family needs Ftilde'(0) < 0, got {}",
                        f1.as_f64()
                    )));
                }
            }
            Family::Degenerate => {
                if f1.abs() > tol {
                    return Err(GsError::InvalidProfile(format!(
                        "degenerate family needs Ftilde'(0) = 0, got {}",
                        f1.as_f64()
                    )));
                }
            }
        }
        Ok(Self { ftilde, h, family })
    }

    /// `a = H'(0)`.
    pub fn a(&self) -> T {
        self.h.d1(T::zero())
    }

    /// `b = -Ftilde'(0) / 2` (zero for the degenerate family).
    pub fn b(&self) -> T {
        -self.ftilde.d1(T::zero()) / T::of(2.0)
    }

    /// `H1'(psi) = H'(psi) - a`.
    pub fn h1_d1(&self, psi: T) -> T {
        self.h.d1(psi) - self.a()
    }

    /// `Ftilde1'(psi) = Ftilde'(psi) + 2 b`.
    pub fn ftilde1_d1(&self, psi: T) -> T {
        self.ftilde.d1(psi) + T::of(2.0) * self.b()
    }

    pub fn h1_d2(&self, psi: T) -> T {
        self.h.d2(psi)
    }

    pub fn ftilde1_d2(&self, psi: T) -> T {
        self.ftilde.d2(psi)
    }

    /// The swirl profile `F(psi)` and its derivative.
    ///
    /// Generic family: `F = sqrt(eps^2 F_R + Ftilde(psi))`, which must
    /// stay positive. Degenerate family: `F = eps F_R + Ftilde(psi)`.
    pub fn swirl(&self, eps: T, f_r: T, psi: T) -> Result<(T, T)> {
        match self.family {
            Family::Generic => {
                let radicand = eps * eps * f_r + self.ftilde.eval(psi);
                if radicand <= T::zero() {
                    return Err(GsError::NegativeRadicand {
                        r: f64::NAN,
                        z: f64::NAN,
                        value: radicand.as_f64(),
                    });
                }
                let f = radicand.sqrt();
                Ok((f, self.ftilde.d1(psi) / (T::of(2.0) * f)))
            }
            Family::Degenerate => Ok((
                eps * f_r + self.ftilde.eval(psi),
                self.ftilde.d1(psi),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_a() -> ProfileFunctions<f64> {
        ProfileFunctions::new(
            ProfileFn::linear(1.0),
            ProfileFn::linear(-2.0),
            Family::Generic,
        )
        .unwrap()
    }

    #[test]
    fn polynomial_derivatives() {
        let p = ProfileFn::poly(vec![1.0f64, -2.0, 3.0, 0.5]);
        let x = 0.3f64;
        assert!((p.eval(x) - (1.0 - 2.0 * x + 3.0 * x * x + 0.5 * x.powi(3))).abs() < 1e-15);
        assert!((p.d1(x) - (-2.0 + 6.0 * x + 1.5 * x * x)).abs() < 1e-15);
        assert!((p.d2(x) - (6.0 + 3.0 * x)).abs() < 1e-15);
    }

    #[test]
    fn fixture_a_constants() {
        let p = fixture_a();
        assert_eq!(p.a(), 1.0);
        assert_eq!(p.b(), 1.0);
        // Linear profiles have no remainder.
        assert_eq!(p.h1_d1(-0.4), 0.0);
        assert_eq!(p.ftilde1_d1(-0.4), 0.0);
    }

    #[test]
    fn family_validation() {
        // Generic with Ftilde'(0) = 0 rejected.
        let err = ProfileFunctions::new(
            ProfileFn::linear(1.0),
            ProfileFn::quadratic(1.0),
            Family::Generic,
        )
        .unwrap_err();
        assert!(matches!(err, GsError::InvalidProfile(_)));
        // Same pair is a valid degenerate profile.
        ProfileFunctions::new(
            ProfileFn::linear(1.0),
            ProfileFn::quadratic(1.0),
            Family::Degenerate,
        )
        .unwrap();
        // H'(0) <= 0 rejected.
        let err = ProfileFunctions::new(
            ProfileFn::linear(-1.0),
            ProfileFn::linear(-2.0),
            Family::Generic,
        )
        .unwrap_err();
        assert!(matches!(err, GsError::InvalidProfile(_)));
    }

    #[test]
    fn swirl_generic_and_degenerate() {
        let p = fixture_a();
        let (f, fd) = p.swirl(0.1, 0.3125, -0.001).unwrap();
        let expect = (0.01 * 0.3125 + 2.0 * 0.001f64).sqrt();
        assert!((f - expect).abs() < 1e-15);
        assert!((fd - (-2.0) / (2.0 * expect)).abs() < 1e-15);
        // Radicand going negative is an error.
        assert!(p.swirl(0.1, 0.3125, 0.01).is_err());

        let q = ProfileFunctions::new(
            ProfileFn::linear(1.0f64),
            ProfileFn::quadratic(1.0),
            Family::Degenerate,
        )
        .unwrap();
        let (f, fd) = q.swirl(0.1, 0.25, -0.002).unwrap();
        assert!((f - (0.025 + 4e-6)).abs() < 1e-15);
        assert!((fd + 0.004).abs() < 1e-15);
    }
}
