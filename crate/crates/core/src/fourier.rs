//! Real 2*pi-periodic functions as finite Fourier coefficient sequences.

use crate::scalar::{cis, Scalar, C};
use serde::{Deserialize, Serialize};

/// Real trigonometric polynomial `f(theta) = sum_{|n| <= N} f_n e^{i n theta}`.
///
/// Only the modes `n >= 0` are stored; reality `f_{-n} = conj(f_n)` is
/// built into the representation. The `even` and `in_x` flags record
/// membership in the symmetry classes the shape iteration works in:
/// even functions of theta (all real coefficients) and the constraint
/// space X of even functions orthogonal to `cos theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries<T> {
    coeffs: Vec<C<T>>,
    even: bool,
    in_x: bool,
}

/// Serialized form: one `[n, re, im]` triple per stored mode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierTriples<T>(pub Vec<(i64, T, T)>);

impl<T: Scalar> FourierSeries<T> {
    fn flag_tol(coeffs: &[C<T>]) -> T {
        let amp = coeffs
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), T::max)
            .sqrt();
        T::of(1e4) * T::epsilon() * (T::one() + amp)
    }

    /// Build from coefficients for modes `0..=N`. The zero mode is
    /// forced real (required by reality of `f`).
    pub fn from_coeffs(mut coeffs: Vec<C<T>>) -> Self {
        assert!(!coeffs.is_empty());
        coeffs[0].im = T::zero();
        let tol = Self::flag_tol(&coeffs);
        let even = coeffs.iter().all(|z| z.im.abs() <= tol);
        let in_x = even && coeffs.len() > 1 && coeffs[1].norm() <= tol;
        Self { coeffs, even, in_x }
    }

    pub fn zero(n_max: usize) -> Self {
        Self::from_coeffs(vec![C::new(T::zero(), T::zero()); n_max + 1])
    }

    pub fn constant(value: T, n_max: usize) -> Self {
        let mut c = vec![C::new(T::zero(), T::zero()); n_max + 1];
        c[0] = C::new(value, T::zero());
        Self::from_coeffs(c)
    }

    /// `amp * cos(k theta)` padded to truncation order `n_max`.
    pub fn cosine(k: usize, amp: T, n_max: usize) -> Self {
        assert!(k <= n_max);
        let mut c = vec![C::new(T::zero(), T::zero()); n_max + 1];
        if k == 0 {
            c[0] = C::new(amp, T::zero());
        } else {
            c[k] = C::new(amp / T::of(2.0), T::zero());
        }
        Self::from_coeffs(c)
    }

    /// `amp * sin(k theta)`, `k >= 1`.
    pub fn sine(k: usize, amp: T, n_max: usize) -> Self {
        assert!(k >= 1 && k <= n_max);
        let mut c = vec![C::new(T::zero(), T::zero()); n_max + 1];
        // sin k0 = (e^{ik0} - e^{-ik0}) / 2i, so f_k = -i amp / 2.
        c[k] = C::new(T::zero(), -amp / T::of(2.0));
        Self::from_coeffs(c)
    }

    /// Recover coefficients from samples on the uniform grid
    /// `theta_k = 2 pi k / K`. Requires `K >= 2 n_max + 1`.
    pub fn from_values(values: &[T], n_max: usize) -> Self {
        let k_len = values.len();
        assert!(k_len >= 2 * n_max + 1, "not enough samples for order {n_max}");
        let two_pi = T::PI() * T::of(2.0);
        let mut coeffs = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut acc = C::new(T::zero(), T::zero());
            for (k, &v) in values.iter().enumerate() {
                let th = two_pi * T::of_usize(k) / T::of_usize(k_len);
                acc = acc + cis(-T::of_usize(n) * th) * v;
            }
            coeffs.push(acc / T::of_usize(k_len));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    /// Even and orthogonal to `cos theta`.
    pub fn is_in_x(&self) -> bool {
        self.in_x
    }

    /// Coefficient of `e^{i n theta}` for any integer `n`.
    pub fn coeff(&self, n: i64) -> C<T> {
        let a = n.unsigned_abs() as usize;
        if a >= self.coeffs.len() {
            C::new(T::zero(), T::zero())
        } else if n >= 0 {
            self.coeffs[a]
        } else {
            self.coeffs[a].conj()
        }
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn eval(&self, theta: T) -> T {
        let mut acc = self.coeffs[0].re;
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            let e = cis(T::of_usize(n) * theta);
            acc = acc + T::of(2.0) * (*c * e).re;
        }
        acc
    }

    /// First derivative in theta.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| C::new(T::zero(), T::of_usize(n)) * *c)
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Pointwise product, truncated to the larger of the two orders.
    pub fn multiply(&self, other: &Self) -> Self {
        let n_out = self.n_max().max(other.n_max());
        let mut coeffs = vec![C::new(T::zero(), T::zero()); n_out + 1];
        for (n, slot) in coeffs.iter_mut().enumerate() {
            let n = n as i64;
            let lo = n - other.n_max() as i64;
            let hi = n + other.n_max() as i64;
            let mut acc = C::new(T::zero(), T::zero());
            for m in lo.max(-(self.n_max() as i64))..=hi.min(self.n_max() as i64) {
                acc = acc + self.coeff(m) * other.coeff(n - m);
            }
            *slot = acc;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n_out = self.n_max().max(other.n_max());
        let coeffs = (0..=n_out as i64)
            .map(|n| self.coeff(n) + other.coeff(n))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    /// `L^2(T)` pairing `<f, g> = int_0^{2 pi} f g dtheta`.
    pub fn inner(&self, other: &Self) -> T {
        let n = self.n_max().max(other.n_max()) as i64;
        let mut acc = T::zero();
        for m in -n..=n {
            acc = acc + (self.coeff(m) * other.coeff(-m)).re;
        }
        T::of(2.0) * T::PI() * acc
    }

    /// Sup norm over a fine uniform grid (exact up to sampling of a
    /// trigonometric polynomial; 8x oversampling is plenty here).
    pub fn sup_norm(&self) -> T {
        let k = 8 * (self.n_max() + 1);
        (0..k)
            .map(|i| {
                self.eval(T::of(2.0) * T::PI() * T::of_usize(i) / T::of_usize(k))
                    .abs()
            })
            .fold(T::zero(), T::max)
    }

    pub fn min_value(&self) -> T {
        let k = 8 * (self.n_max() + 1);
        (0..k)
            .map(|i| self.eval(T::of(2.0) * T::PI() * T::of_usize(i) / T::of_usize(k)))
            .fold(T::infinity(), T::min)
    }

    pub fn to_triples(&self) -> FourierTriples<T> {
        FourierTriples(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| (n as i64, c.re, c.im))
                .collect(),
        )
    }

    pub fn from_triples(t: &FourierTriples<T>) -> Self {
        let n_max = t.0.iter().map(|&(n, _, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![C::new(T::zero(), T::zero()); n_max + 1];
        for &(n, re, im) in &t.0 {
            if n >= 0 {
                coeffs[n as usize] = C::new(re, im);
            } else {
                coeffs[(-n) as usize] = C::new(re, -im);
            }
        }
        Self::from_coeffs(coeffs)
    }
}
