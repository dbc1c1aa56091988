//! Physical field assembly: stream function, velocity, pressure and
//! vorticity on the (r, z) half-plane, extended by zero outside the
//! cross-section, plus the weak-form verification quadrature.
//!
//! All fields are evaluated from the spectral representation of the
//! converged shape solve; the only discretization in this module is the
//! quadrature used by [`verify_weak`].

use crate::constants::ProblemConstants;
use crate::error::{GsError, Result};
use crate::profile::ProfileFunctions;
use crate::scalar::Scalar;
use crate::shape::ShapeState;
use ndarray::Array2;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::{self, Write};

/// A converged solve packaged with everything needed to evaluate the
/// physical fields at arbitrary points.
#[derive(Debug, Clone)]
pub struct SolutionBundle<T> {
    pub consts: ProblemConstants<T>,
    pub profile: ProfileFunctions<T>,
    pub shape: ShapeState<T>,
    /// Boundary swirl `F(0)`: `sqrt(eps^2 F_R)` generic, `eps F_R`
    /// degenerate.
    pub f0: T,
    /// Physical compatibility constant `c = eps^2 c_{eps,B}`.
    pub c_phys: T,
    /// `H(0) - c/2`, the constant pressure of the zero extension.
    pub outside_pressure: T,
}

/// Value of every field (and the stream-function derivatives they are
/// built from) at one point of the half-plane.
#[derive(Debug, Clone, Copy)]
pub struct PointState<T> {
    pub inside: bool,
    pub psi: T,
    pub psi_r: T,
    pub psi_z: T,
    pub psi_rr: T,
    pub psi_rz: T,
    pub psi_zz: T,
    /// Swirl profile `F(psi)` and its derivative (zero outside).
    pub f: T,
    pub f_d: T,
    pub u_r: T,
    pub u_phi: T,
    pub u_z: T,
    pub p: T,
    pub p_r: T,
    pub p_z: T,
    pub omega_r: T,
    pub omega_phi: T,
    pub omega_z: T,
}

impl<T: Scalar> SolutionBundle<T> {
    /// Package a converged shape solve. Fails if `F(0)` is not defined
    /// (non-positive radicand at the boundary).
    pub fn new(
        state: ShapeState<T>,
        consts: ProblemConstants<T>,
        profile: ProfileFunctions<T>,
    ) -> Result<Self> {
        let (f0, _) = profile
            .swirl(consts.eps, consts.f_r, T::zero())
            .map_err(|e| locate_radicand(e, consts.big_r, T::zero()))?;
        let c_phys = consts.eps * consts.eps * state.c_eps_b;
        let outside_pressure = profile.h.eval(T::zero()) - c_phys / T::of(2.0);
        Ok(Self {
            consts,
            profile,
            shape: state,
            f0,
            c_phys,
            outside_pressure,
        })
    }

    /// Largest scale factor `1 + eps B` of the boundary curve.
    pub fn max_scale(&self) -> T {
        let k = 256;
        let two_pi = T::PI() * T::of(2.0);
        (0..k)
            .map(|i| {
                self.shape
                    .solution
                    .map
                    .scale(two_pi * T::of_usize(i) / T::of_usize(k))
            })
            .fold(T::zero(), T::max)
    }

    /// Half-width of the smallest (r, z)-box centered at `(R, 0)` that
    /// contains the cross-section.
    pub fn support_half_width(&self) -> T {
        self.consts.eps * self.max_scale()
    }

    /// Whether the physical point lies in the (closed) cross-section.
    pub fn is_inside(&self, r: T, z: T) -> bool {
        let eps = self.consts.eps;
        if eps == T::zero() {
            return false;
        }
        let x = (r - self.consts.big_r) / eps;
        let y = z / eps;
        let rp = (x * x + y * y).sqrt();
        rp <= self.shape.solution.map.scale(y.atan2(x))
    }

    /// Evaluate every field at a physical point. Outside the
    /// cross-section the zero extension is returned exactly.
    pub fn eval(&self, r: T, z: T) -> Result<PointState<T>> {
        let eps = self.consts.eps;
        if eps == T::zero() {
            // Empty cross-section: the zero extension everywhere.
            return Ok(self.outside_state());
        }
        let big_r = self.consts.big_r;
        let x = (r - big_r) / eps;
        let y = z / eps;
        let rp = (x * x + y * y).sqrt();
        let th = y.atan2(x);
        let map = &self.shape.solution.map;
        let s = map.scale(th);
        if rp > s {
            return Ok(self.outside_state());
        }
        // The polar chain rule divides by the disk radius, which
        // amplifies round-off of the theta-derivatives near the pole.
        // There, evaluate on a small ring about the pole and average
        // four symmetric angles: odd positional errors cancel, leaving
        // O(ring^2) truncation and ~1e-10 round-off. The value itself
        // is stable and taken at the true point.
        let ring = T::of(1e-3);
        let cd = if rp < ring {
            let v = self.shape.solution.phi.eval_all(rp / s, th).v;
            let quarter = T::PI() / T::of(2.0);
            let mut acc = [T::zero(); 6];
            for k in 0..4 {
                let a = self.cart_derivs(ring, th + quarter * T::of_usize(k));
                for (dst, src) in acc.iter_mut().zip(a.iter()) {
                    *dst += *src;
                }
            }
            for dst in acc.iter_mut() {
                *dst /= T::of(4.0);
            }
            acc[0] = v;
            acc
        } else {
            self.cart_derivs(rp, th)
        };
        let [v, phi_x, phi_y, phi_xx, phi_xy, phi_yy] = cd;
        // psi = eps^2 phi with r = R + eps x, z = eps y.
        let psi = eps * eps * v;
        let psi_r = eps * phi_x;
        let psi_z = eps * phi_y;
        let psi_rr = phi_xx;
        let psi_rz = phi_xy;
        let psi_zz = phi_yy;
        let (f, f_d) = self
            .profile
            .swirl(eps, self.consts.f_r, psi)
            .map_err(|e| locate_radicand(e, r, z))?;
        let u_r = -psi_z / r;
        let u_z = psi_r / r;
        let u_phi = f / r;
        let grad_sq = psi_r * psi_r + psi_z * psi_z;
        let r2 = r * r;
        let p = self.profile.h.eval(psi) - (grad_sq + f * f) / (T::of(2.0) * r2);
        let hp = self.profile.h.d1(psi);
        let p_r = hp * psi_r + (grad_sq + f * f) / (r2 * r)
            - (psi_r * psi_rr + psi_z * psi_rz + f * f_d * psi_r) / r2;
        let p_z = hp * psi_z - (psi_r * psi_rz + psi_z * psi_zz + f * f_d * psi_z) / r2;
        let omega_r = -f_d * psi_z / r;
        let omega_z = f_d * psi_r / r;
        let omega_phi = -r * hp + f * f_d / r;
        Ok(PointState {
            inside: true,
            psi,
            psi_r,
            psi_z,
            psi_rr,
            psi_rz,
            psi_zz,
            f,
            f_d,
            u_r,
            u_phi,
            u_z,
            p,
            p_r,
            p_z,
            omega_r,
            omega_phi,
            omega_z,
        })
    }

    /// Value and Cartesian (x, y)-derivatives of the pullback solution
    /// at disk-polar coordinates `(rp, th)`, through the domain map.
    fn cart_derivs(&self, rp: T, th: T) -> [T; 6] {
        let map = &self.shape.solution.map;
        let s = map.scale(th);
        let d = self.shape.solution.phi.eval_all(rp / s, th);
        let rho = rp / s;
        let s1 = map.scale_d1(th);
        let s2 = map.scale_d2(th);
        // Pull the disk derivatives back to physical polar coordinates
        // (rp, th): the evaluation radius rho = rp/s(th) depends on th.
        let p_r = d.dr / s;
        let p_t = d.dth - d.dr * rho * s1 / s;
        let p_rr = d.drr / (s * s);
        let p_rt = d.drth / s - d.drr * rho * s1 / (s * s) - d.dr * s1 / (s * s);
        let p_tt = d.dthth - T::of(2.0) * d.drth * rho * s1 / s
            + d.drr * (rho * s1 / s) * (rho * s1 / s)
            - d.dr * rho * (s2 / s - T::of(2.0) * (s1 / s) * (s1 / s));
        // Polar to Cartesian in the (x, y) plane.
        let (ct, st) = (th.cos(), th.sin());
        let phi_x = p_r * ct - p_t * st / rp;
        let phi_y = p_r * st + p_t * ct / rp;
        let phi_xx = p_rr * ct * ct - T::of(2.0) * p_rt * st * ct / rp
            + p_tt * st * st / (rp * rp)
            + p_r * st * st / rp
            + T::of(2.0) * p_t * st * ct / (rp * rp);
        let phi_yy = p_rr * st * st + T::of(2.0) * p_rt * st * ct / rp
            + p_tt * ct * ct / (rp * rp)
            + p_r * ct * ct / rp
            - T::of(2.0) * p_t * st * ct / (rp * rp);
        let phi_xy = p_rr * st * ct + p_rt * (ct * ct - st * st) / rp
            - p_tt * st * ct / (rp * rp)
            - p_r * st * ct / rp
            + p_t * (st * st - ct * ct) / (rp * rp);
        [d.v, phi_x, phi_y, phi_xx, phi_xy, phi_yy]
    }

    fn outside_state(&self) -> PointState<T> {
        let z = T::zero();
        PointState {
            inside: false,
            psi: z,
            psi_r: z,
            psi_z: z,
            psi_rr: z,
            psi_rz: z,
            psi_zz: z,
            f: z,
            f_d: z,
            u_r: z,
            u_phi: z,
            u_z: z,
            p: self.outside_pressure,
            p_r: z,
            p_z: z,
            omega_r: z,
            omega_phi: z,
            omega_z: z,
        }
    }

    /// The steady-Euler momentum residual `u . grad u + grad p` at a
    /// point (zero outside by the zero extension).
    pub fn euler_residual(&self, r: T, z: T) -> Result<[T; 3]> {
        let st = self.eval(r, z)?;
        if !st.inside {
            return Ok([T::zero(); 3]);
        }
        let du_r_dr = -st.psi_rz / r + st.psi_z / (r * r);
        let du_r_dz = -st.psi_zz / r;
        let du_z_dr = st.psi_rr / r - st.psi_r / (r * r);
        let du_z_dz = st.psi_rz / r;
        let du_phi_dr = st.f_d * st.psi_r / r - st.f / (r * r);
        let du_phi_dz = st.f_d * st.psi_z / r;
        Ok([
            st.u_r * du_r_dr + st.u_z * du_r_dz - st.u_phi * st.u_phi / r + st.p_r,
            st.u_r * du_phi_dr + st.u_z * du_phi_dz + st.u_phi * st.u_r / r,
            st.u_r * du_z_dr + st.u_z * du_z_dz + st.p_z,
        ])
    }
}

fn locate_radicand(e: GsError, r: impl Scalar, z: impl Scalar) -> GsError {
    match e {
        GsError::NegativeRadicand { value, .. } => GsError::NegativeRadicand {
            r: r.as_f64(),
            z: z.as_f64(),
            value,
        },
        other => other,
    }
}

/// Sampling grid for [`assemble`]: an `n_r x n_z` box centered at
/// `(R, 0)` whose half-width exceeds the support by `margin` (as a
/// fraction of the support half-width).
#[derive(Debug, Clone, Copy)]
pub struct GridSpec<T> {
    pub n_r: usize,
    pub n_z: usize,
    pub margin: T,
}

impl<T: Scalar> Default for GridSpec<T> {
    fn default() -> Self {
        Self {
            n_r: 128,
            n_z: 128,
            margin: T::of(0.25),
        }
    }
}

/// Sampled physical fields on an (r, z) grid, zero-extended outside
/// the cross-section. Arrays are indexed `[i_r, j_z]`.
#[derive(Debug, Clone)]
pub struct AxiField<T> {
    pub r: Vec<T>,
    pub z: Vec<T>,
    pub inside: Array2<bool>,
    pub u_r: Array2<T>,
    pub u_phi: Array2<T>,
    pub u_z: Array2<T>,
    pub p: Array2<T>,
    pub psi: Array2<T>,
    pub omega_r: Array2<T>,
    pub omega_phi: Array2<T>,
    pub omega_z: Array2<T>,
}

/// Evaluate the physical fields of a converged solve on a grid.
pub fn assemble<T: Scalar>(
    state: ShapeState<T>,
    consts: ProblemConstants<T>,
    profile: ProfileFunctions<T>,
    spec: &GridSpec<T>,
) -> Result<(SolutionBundle<T>, AxiField<T>)> {
    let bundle = SolutionBundle::new(state, consts, profile)?;
    let field = sample_field(&bundle, spec)?;
    Ok((bundle, field))
}

fn sample_field<T: Scalar>(bundle: &SolutionBundle<T>, spec: &GridSpec<T>) -> Result<AxiField<T>> {
    let half = bundle.support_half_width() * (T::one() + spec.margin);
    let r0 = bundle.consts.big_r;
    let lin = |n: usize, c: T| -> Vec<T> {
        (0..n)
            .map(|i| {
                c - half + T::of(2.0) * half * T::of_usize(i) / T::of_usize(n - 1)
            })
            .collect()
    };
    let r = lin(spec.n_r, r0);
    let z = lin(spec.n_z, T::zero());
    let dim = (spec.n_r, spec.n_z);
    let mut field = AxiField {
        inside: Array2::from_elem(dim, false),
        u_r: Array2::zeros(dim),
        u_phi: Array2::zeros(dim),
        u_z: Array2::zeros(dim),
        p: Array2::zeros(dim),
        psi: Array2::zeros(dim),
        omega_r: Array2::zeros(dim),
        omega_phi: Array2::zeros(dim),
        omega_z: Array2::zeros(dim),
        r,
        z,
    };
    for i in 0..spec.n_r {
        for j in 0..spec.n_z {
            let st = bundle.eval(field.r[i], field.z[j])?;
            field.inside[[i, j]] = st.inside;
            field.u_r[[i, j]] = st.u_r;
            field.u_phi[[i, j]] = st.u_phi;
            field.u_z[[i, j]] = st.u_z;
            field.p[[i, j]] = st.p;
            field.psi[[i, j]] = st.psi;
            field.omega_r[[i, j]] = st.omega_r;
            field.omega_phi[[i, j]] = st.omega_phi;
            field.omega_z[[i, j]] = st.omega_z;
        }
    }
    Ok(field)
}

/// Re-evaluate the vorticity columns of a sampled field from the
/// closed-form curl of the assembled velocity.
pub fn vorticity<T: Scalar>(bundle: &SolutionBundle<T>, field: &AxiField<T>) -> Result<AxiField<T>> {
    let mut out = field.clone();
    for i in 0..field.r.len() {
        for j in 0..field.z.len() {
            let st = bundle.eval(field.r[i], field.z[j])?;
            out.omega_r[[i, j]] = st.omega_r;
            out.omega_phi[[i, j]] = st.omega_phi;
            out.omega_z[[i, j]] = st.omega_z;
        }
    }
    Ok(out)
}

/// Residuals of the weak stationary-Euler identities over a batch of
/// random test fields, normalized as described in [`verify_weak`].
#[derive(Debug, Clone, Copy)]
pub struct WeakReport<T> {
    /// Largest normalized momentum residual.
    pub momentum: T,
    /// Largest normalized divergence residual.
    pub divergence: T,
    pub n_tests: usize,
}

/// A compactly supported axisymmetric bump
/// `exp(1 - 1/(1 - q^2))` with `q^2 = ((r-r0)/ar)^2 + ((z-z0)/az)^2`.
#[derive(Debug, Clone, Copy)]
struct Bump<T> {
    r0: T,
    z0: T,
    ar: T,
    az: T,
    amp: T,
}

impl<T: Scalar> Bump<T> {
    /// Value and (d_r, d_z) gradient.
    fn eval(&self, r: T, z: T) -> (T, T, T) {
        let xr = (r - self.r0) / self.ar;
        let xz = (z - self.z0) / self.az;
        let q2 = xr * xr + xz * xz;
        if q2 >= T::one() {
            return (T::zero(), T::zero(), T::zero());
        }
        let v = self.amp * (T::one() - T::one() / (T::one() - q2)).exp();
        // d/d(q^2) of the exponent is -1/(1-q^2)^2.
        let dq2 = -v / ((T::one() - q2) * (T::one() - q2));
        (
            v,
            dq2 * T::of(2.0) * xr / self.ar,
            dq2 * T::of(2.0) * xz / self.az,
        )
    }
}

fn random_bump<T: Scalar>(rng: &mut ChaCha8Rng, r0: T, half: T) -> Bump<T> {
    let u = Uniform::new(-1.0f64, 1.0);
    let w = Uniform::new(0.6f64, 1.6);
    let a = Uniform::new(0.2f64, 1.0);
    Bump {
        r0: r0 + half * T::of(u.sample(rng)),
        z0: half * T::of(u.sample(rng)),
        ar: half * T::of(w.sample(rng)),
        az: half * T::of(w.sample(rng)),
        amp: T::of(a.sample(rng)),
    }
}

/// One cached quadrature node: position, weight, and the solution
/// fields there.
struct QuadNode<T> {
    r: T,
    z: T,
    w: T,
    u_r: T,
    u_phi: T,
    u_z: T,
    dp: T,
}

/// Build the quadrature over cells meeting the support, subdividing
/// cells cut by the boundary (depth-4 quadtree with the mask
/// re-evaluated at every level).
fn build_quadrature<T: Scalar>(
    bundle: &SolutionBundle<T>,
    n_cells: usize,
) -> Result<Vec<QuadNode<T>>> {
    let half = bundle.support_half_width() * T::of(1.05);
    let r0 = bundle.consts.big_r;
    let h = T::of(2.0) * half / T::of_usize(n_cells);
    // Cells across the cross-section diameter; the discontinuity layer
    // must be resolved before the cut-cell refinement can help.
    let across = (T::of(2.0) * bundle.support_half_width() / h).as_f64() as usize;
    if across < 8 {
        return Err(GsError::GridTooCoarse { cells: across });
    }
    let mut nodes = Vec::new();
    for i in 0..n_cells {
        for j in 0..n_cells {
            let rl = r0 - half + h * T::of_usize(i);
            let zl = -half + h * T::of_usize(j);
            push_cell(bundle, rl, zl, h, h, 0, &mut nodes)?;
        }
    }
    Ok(nodes)
}

fn push_cell<T: Scalar>(
    bundle: &SolutionBundle<T>,
    rl: T,
    zl: T,
    hr: T,
    hz: T,
    depth: usize,
    nodes: &mut Vec<QuadNode<T>>,
) -> Result<()> {
    let half = T::of(0.5);
    let rc = rl + hr * half;
    let zc = zl + hz * half;
    let corners = [
        bundle.is_inside(rl, zl),
        bundle.is_inside(rl + hr, zl),
        bundle.is_inside(rl, zl + hz),
        bundle.is_inside(rl + hr, zl + hz),
        bundle.is_inside(rc, zc),
    ];
    let n_in = corners.iter().filter(|&&b| b).count();
    let uncut = n_in == 0 || n_in == corners.len();
    if uncut || depth >= 4 {
        if n_in == 0 {
            return Ok(());
        }
        let st = bundle.eval(rc, zc)?;
        if !st.inside {
            return Ok(());
        }
        nodes.push(QuadNode {
            r: rc,
            z: zc,
            w: hr * hz,
            u_r: st.u_r,
            u_phi: st.u_phi,
            u_z: st.u_z,
            dp: st.p - bundle.outside_pressure,
        });
        return Ok(());
    }
    let (hr2, hz2) = (hr * half, hz * half);
    for di in 0..2 {
        for dj in 0..2 {
            push_cell(
                bundle,
                rl + hr2 * T::of_usize(di),
                zl + hz2 * T::of_usize(dj),
                hr2,
                hz2,
                depth + 1,
                nodes,
            )?;
        }
    }
    Ok(())
}

/// Test the weak stationary-Euler identities
/// `int [(u x u) : grad w + p div w] dx = 0` and `int u . grad q dx = 0`
/// against `n_tests` random compactly supported axisymmetric test
/// fields, using an `n_cells^2` midpoint quadrature with recursive
/// cut-cell subdivision.
///
/// Both residuals are reported relative to the size of the data and
/// the test field: momentum by `int |u|^2 + int |p - p_out|` times the
/// sup of the test-field derivatives, divergence by `int |u|` times
/// the sup of the test-gradient.
pub fn verify_weak<T: Scalar>(
    bundle: &SolutionBundle<T>,
    n_cells: usize,
    n_tests: usize,
    seed: u64,
) -> Result<WeakReport<T>> {
    let nodes = build_quadrature(bundle, n_cells)?;
    let two_pi = T::PI() * T::of(2.0);
    let mut int_u2 = T::zero();
    let mut int_u = T::zero();
    let mut int_dp = T::zero();
    for n in &nodes {
        let wq = two_pi * n.r * n.w;
        let usq = n.u_r * n.u_r + n.u_phi * n.u_phi + n.u_z * n.u_z;
        int_u2 += wq * usq;
        int_u += wq * usq.sqrt();
        int_dp += wq * n.dp.abs();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r0 = bundle.consts.big_r;
    let half = bundle.support_half_width();
    let mut momentum = T::zero();
    let mut divergence = T::zero();
    for _ in 0..n_tests {
        let w_r = random_bump(&mut rng, r0, half);
        let w_phi = random_bump(&mut rng, r0, half);
        let w_z = random_bump(&mut rng, r0, half);
        let q = random_bump(&mut rng, r0, half);
        let mut res_m = T::zero();
        let mut res_d = T::zero();
        let mut sup_w = T::zero();
        let mut sup_q = T::zero();
        for n in &nodes {
            let wq = two_pi * n.r * n.w;
            let (vr, vr_r, vr_z) = w_r.eval(n.r, n.z);
            let (vp, vp_r, vp_z) = w_phi.eval(n.r, n.z);
            let (_, vz_r, vz_z) = w_z.eval(n.r, n.z);
            let (_, q_r, q_z) = q.eval(n.r, n.z);
            let conv = n.u_r * (n.u_r * vr_r + n.u_z * vr_z - n.u_phi * vp / n.r)
                + n.u_phi * (n.u_r * vp_r + n.u_z * vp_z + n.u_phi * vr / n.r)
                + n.u_z * (n.u_r * vz_r + n.u_z * vz_z);
            let div_w = vr_r + vr / n.r + vz_z;
            res_m += wq * (conv + n.dp * div_w);
            res_d += wq * (n.u_r * q_r + n.u_z * q_z);
            for v in [vr_r, vr_z, vp_r, vp_z, vz_r, vz_z, div_w, vr / n.r, vp / n.r] {
                sup_w = sup_w.max(v.abs());
            }
            sup_q = sup_q.max(q_r.abs()).max(q_z.abs());
        }
        let denom_m = (int_u2 + int_dp) * sup_w;
        let denom_d = int_u * sup_q;
        if denom_m > T::zero() {
            momentum = momentum.max(res_m.abs() / denom_m);
        }
        if denom_d > T::zero() {
            divergence = divergence.max(res_d.abs() / denom_d);
        }
    }
    Ok(WeakReport {
        momentum,
        divergence,
        n_tests,
    })
}

/// Non-localizability indicator
/// `max |u . grad p| / (max |u| . max |grad p|)` over inside samples
/// (`0` for identically vanishing data).
pub fn localizability<T: Scalar>(bundle: &SolutionBundle<T>, n_samples: usize) -> Result<T> {
    let half = bundle.support_half_width();
    let r0 = bundle.consts.big_r;
    let mut max_num = T::zero();
    let mut max_u = T::zero();
    let mut max_gp = T::zero();
    for i in 0..n_samples {
        for j in 0..n_samples {
            let r = r0 - half
                + T::of(2.0) * half * (T::of_usize(i) + T::of(0.5)) / T::of_usize(n_samples);
            let z = -half
                + T::of(2.0) * half * (T::of_usize(j) + T::of(0.5)) / T::of_usize(n_samples);
            let st = bundle.eval(r, z)?;
            if !st.inside {
                continue;
            }
            let num = (st.u_r * st.p_r + st.u_z * st.p_z).abs();
            let u = (st.u_r * st.u_r + st.u_phi * st.u_phi + st.u_z * st.u_z).sqrt();
            let gp = (st.p_r * st.p_r + st.p_z * st.p_z).sqrt();
            max_num = max_num.max(num);
            max_u = max_u.max(u);
            max_gp = max_gp.max(gp);
        }
    }
    if max_u == T::zero() || max_gp == T::zero() {
        return Ok(T::zero());
    }
    Ok(max_num / (max_u * max_gp))
}

/// Decimal text of a float with 17 significant digits (round-trips any
/// binary double exactly).
pub fn fmt_float<T: Scalar>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

/// CSV dump of a sampled field, one row per grid node.
pub fn write_csv<T: Scalar, W: Write>(field: &AxiField<T>, out: &mut W) -> io::Result<()> {
    writeln!(
        out,
        "r,z,inside,u_r,u_phi,u_z,p,omega_r,omega_phi,omega_z,psi"
    )?;
    for i in 0..field.r.len() {
        for j in 0..field.z.len() {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                fmt_float(field.r[i]),
                fmt_float(field.z[j]),
                u8::from(field.inside[[i, j]]),
                fmt_float(field.u_r[[i, j]]),
                fmt_float(field.u_phi[[i, j]]),
                fmt_float(field.u_z[[i, j]]),
                fmt_float(field.p[[i, j]]),
                fmt_float(field.omega_r[[i, j]]),
                fmt_float(field.omega_phi[[i, j]]),
                fmt_float(field.omega_z[[i, j]]),
                fmt_float(field.psi[[i, j]]),
            )?;
        }
    }
    Ok(())
}

fn bilinear<T: Scalar>(xs: &[T], ys: &[T], a: &Array2<T>, x: T, y: T) -> T {
    let locate = |v: T, grid: &[T]| -> Option<(usize, T)> {
        let n = grid.len();
        if v < grid[0] || v > grid[n - 1] {
            return None;
        }
        let h = (grid[n - 1] - grid[0]) / T::of_usize(n - 1);
        let mut i = ((v - grid[0]) / h).as_f64() as usize;
        if i >= n - 1 {
            i = n - 2;
        }
        Some((i, (v - grid[i]) / h))
    };
    match (locate(x, xs), locate(y, ys)) {
        (Some((i, tx)), Some((j, ty))) => {
            let one = T::one();
            a[[i, j]] * (one - tx) * (one - ty)
                + a[[i + 1, j]] * tx * (one - ty)
                + a[[i, j + 1]] * (one - tx) * ty
                + a[[i + 1, j + 1]] * tx * ty
        }
        _ => T::zero(),
    }
}

/// Legacy-VTK structured-points export of the rotated 3D field
/// (velocity vectors and pressure) on an `n^3` Cartesian box, sampling
/// the (r, z) grid with bilinear interpolation.
pub fn write_vtk<T: Scalar, W: Write>(
    field: &AxiField<T>,
    outside_pressure: T,
    n: usize,
    out: &mut W,
) -> io::Result<()> {
    let r_max = field.r[field.r.len() - 1];
    let z_min = field.z[0];
    let z_max = field.z[field.z.len() - 1];
    let h_xy = 2.0 * r_max.as_f64() / (n - 1) as f64;
    let h_z = (z_max - z_min).as_f64() / (n - 1) as f64;
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "axisymmetric euler equilibrium (zero-extended)")?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET STRUCTURED_POINTS")?;
    writeln!(out, "DIMENSIONS {n} {n} {n}")?;
    writeln!(
        out,
        "ORIGIN {} {} {}",
        fmt_float(-r_max.as_f64()),
        fmt_float(-r_max.as_f64()),
        fmt_float(z_min.as_f64())
    )?;
    writeln!(
        out,
        "SPACING {} {} {}",
        fmt_float(h_xy),
        fmt_float(h_xy),
        fmt_float(h_z)
    )?;
    writeln!(out, "POINT_DATA {}", n * n * n)?;
    let sample = |x: f64, y: f64, zz: f64| -> (f64, f64, f64, f64) {
        let r = T::of((x * x + y * y).sqrt());
        let z = T::of(zz);
        let phi = y.atan2(x);
        let u_r = bilinear(&field.r, &field.z, &field.u_r, r, z).as_f64();
        let u_phi = bilinear(&field.r, &field.z, &field.u_phi, r, z).as_f64();
        let u_z = bilinear(&field.r, &field.z, &field.u_z, r, z).as_f64();
        let inside_box = r >= field.r[0] && r <= r_max && z >= z_min && z <= z_max;
        let p = if inside_box {
            bilinear(&field.r, &field.z, &field.p, r, z).as_f64()
        } else {
            outside_pressure.as_f64()
        };
        (
            u_r * phi.cos() - u_phi * phi.sin(),
            u_r * phi.sin() + u_phi * phi.cos(),
            u_z,
            p,
        )
    };
    writeln!(out, "SCALARS pressure double 1")?;
    writeln!(out, "LOOKUP_TABLE default")?;
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let (_, _, _, p) = sample(
                    -r_max.as_f64() + h_xy * i as f64,
                    -r_max.as_f64() + h_xy * j as f64,
                    z_min.as_f64() + h_z * k as f64,
                );
                writeln!(out, "{}", fmt_float(p))?;
            }
        }
    }
    writeln!(out, "VECTORS velocity double")?;
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let (ux, uy, uz, _) = sample(
                    -r_max.as_f64() + h_xy * i as f64,
                    -r_max.as_f64() + h_xy * j as f64,
                    z_min.as_f64() + h_z * k as f64,
                );
                writeln!(
                    out,
                    "{} {} {}",
                    fmt_float(ux),
                    fmt_float(uy),
                    fmt_float(uz)
                )?;
            }
        }
    }
    Ok(())
}
