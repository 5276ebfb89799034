//! Power-series solution of the 2×2 group differential system and the
//! generating function of the homogeneous components.
//!
//! With `c` running over the `2n` orbit pairings, the system reads
//!
//! ```text
//! X'(z) = (g, g_s) + [[h g, -h g_s], [h g_s, -(2γ/z + h g)]] X(z),   h = γ/(2n)
//! ```
//!
//! where `g` and `g_s` are the sums of `c / (1 - z c)` over rotation pairings
//! plus (resp. minus) reflection pairings. Its solution vanishing at `0` is
//! `Q(z) = Σ_{p≥1} A_p z^p`, and `Φ = 2n/γ + Q_1 - Q_2` generates the
//! components: `Φ(z)/(1 - z⟨x,y⟩) = (2n/γ) Σ_m (1+γ)_m E_m z^m`.

use crate::dihedral::{DihedralGroup, OrbitPairings, PlanePoint, C64};
use crate::error::{DunklError, Result};
use crate::kernel::delta_effective;
use crate::polyalg::{fmt_c, ParameterK};

pub type Mat2C = [[C64; 2]; 2];

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const POLE_TOL: f64 = 1e-14;
const SYMMETRY_TOL: f64 = 1e-12;

/// Taylor data of the system's solution, truncated at `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesData {
    pub order: usize,
    /// `B_0 .. B_{order-1}`.
    pub b: Vec<Mat2C>,
    /// `A_0 .. A_order`.
    pub a: Vec<[C64; 2]>,
    /// `φ_0 = 2n/γ`, `φ_p = A_p[0] - A_p[1]`.
    pub phi: Vec<C64>,
}

impl SeriesData {
    /// Euclidean norm of `A_p`.
    pub fn a_norm(&self, p: usize) -> f64 {
        (self.a[p][0].norm_sqr() + self.a[p][1].norm_sqr()).sqrt()
    }

    /// Truncated `Φ(z)`.
    pub fn phi_at(&self, z: C64) -> C64 {
        self.phi.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Truncated `Q(z)` (the `A_0` term excluded).
    pub fn q_at(&self, z: C64) -> [C64; 2] {
        let mut out = [ZERO; 2];
        for p in (1..=self.order).rev() {
            for (o, a) in out.iter_mut().zip(&self.a[p]) {
                *o = (*o + a) * z;
            }
        }
        out
    }

    /// Truncated `Q'(z)`.
    pub fn dq_at(&self, z: C64) -> [C64; 2] {
        let mut out = [ZERO; 2];
        for p in (1..=self.order).rev() {
            for (o, a) in out.iter_mut().zip(&self.a[p]) {
                *o = *o * z + a * p as f64;
            }
        }
        out
    }
}

/// Radius metadata for the contour paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusGuard {
    pub a_bound: f64,
    pub delta: f64,
    /// `1/(2 δ a)`, or `+∞` when `a = 0`.
    pub rho_default: f64,
}

impl RadiusGuard {
    pub fn new(a_bound: f64, delta: f64) -> Self {
        let rho_default = if a_bound > 0.0 { 0.5 / (delta * a_bound) } else { f64::INFINITY };
        Self { a_bound, delta, rho_default }
    }

    /// `1/(δ a)`, the radius within which the truncated series is certified.
    pub fn radius(&self) -> f64 {
        if self.a_bound > 0.0 {
            1.0 / (self.delta * self.a_bound)
        } else {
            f64::INFINITY
        }
    }
}

/// `B_p = (γ/2n) [[S⁺, -S⁻], [S⁻, -S⁺]]` with `S^± = Σ_i (⟨r^i x,y⟩^{p+1} ± ⟨r^i σ x,y⟩^{p+1})`.
pub fn b_matrix(param: &ParameterK, orbit: &OrbitPairings, p: usize) -> Mat2C {
    let e = (p + 1) as i32;
    let rot: C64 = orbit.rot_pairings.iter().map(|c| c.powi(e)).sum();
    let refl: C64 = orbit.refl_pairings.iter().map(|c| c.powi(e)).sum();
    assemble_b(param, rot + refl, rot - refl)
}

fn assemble_b(param: &ParameterK, s_plus: C64, s_minus: C64) -> Mat2C {
    let h = param.gamma / (2.0 * param.n as f64);
    [[h * s_plus, -h * s_minus], [h * s_minus, -h * s_plus]]
}

/// Builds `B_p`, `A_p` and `φ_p` through order `max_p`.
///
/// `A_0 = (2n/γ, 0)` and `A_p = diag(1/p, 1/(p+2γ)) Σ_{i<p} B_{p-i-1} A_i`.
pub fn a_coeffs(param: &ParameterK, orbit: &OrbitPairings, max_p: usize) -> Result<SeriesData> {
    param.require_nonzero_gamma()?;
    let n = param.n as f64;
    let gamma = param.gamma;

    // Running powers c^{p+1} for the power sums.
    let mut rot_pow = orbit.rot_pairings.clone();
    let mut refl_pow = orbit.refl_pairings.clone();
    let mut b = Vec::with_capacity(max_p);
    for _ in 0..max_p {
        let rot: C64 = rot_pow.iter().sum();
        let refl: C64 = refl_pow.iter().sum();
        b.push(assemble_b(param, rot + refl, rot - refl));
        for (pw, c) in rot_pow.iter_mut().zip(&orbit.rot_pairings) {
            *pw *= c;
        }
        for (pw, c) in refl_pow.iter_mut().zip(&orbit.refl_pairings) {
            *pw *= c;
        }
    }

    let mut a: Vec<[C64; 2]> = Vec::with_capacity(max_p + 1);
    a.push([C64::new(2.0 * n, 0.0) / gamma, ZERO]);
    for p in 1..=max_p {
        let mut acc = [ZERO; 2];
        for i in 0..p {
            let m = &b[p - i - 1];
            let v = &a[i];
            acc[0] += m[0][0] * v[0] + m[0][1] * v[1];
            acc[1] += m[1][0] * v[0] + m[1][1] * v[1];
        }
        let shifted = gamma * 2.0 + p as f64;
        if shifted.norm() <= crate::polyalg::REGULARITY_TOL {
            return Err(DunklError::Domain(format!(
                "p + 2γ = {} vanishes at p = {p}; the parameter is not regular",
                fmt_c(shifted)
            )));
        }
        a.push([acc[0] / p as f64, acc[1] / shifted]);
    }

    let phi = a.iter().enumerate().map(|(p, v)| if p == 0 { v[0] } else { v[0] - v[1] }).collect();
    Ok(SeriesData { order: max_p, b, a, phi })
}

/// `(g(z), g_s(z))`.
pub fn g_values(orbit: &OrbitPairings, z: C64) -> Result<(C64, C64)> {
    let term = |c: &C64| -> Result<C64> {
        let d = C64::new(1.0, 0.0) - z * c;
        if d.norm() < POLE_TOL {
            return Err(DunklError::Domain(format!("z = {} hits the pole 1/{}", fmt_c(z), fmt_c(*c))));
        }
        Ok(c / d)
    };
    let mut rot = ZERO;
    for c in &orbit.rot_pairings {
        rot += term(c)?;
    }
    let mut refl = ZERO;
    for c in &orbit.refl_pairings {
        refl += term(c)?;
    }
    Ok((rot + refl, rot - refl))
}

/// Euclidean norm of `X' - F(z, X)` for the full system (`inhomogeneous = true`)
/// or for the associated homogeneous one.
pub fn system_residual(
    param: &ParameterK,
    orbit: &OrbitPairings,
    z: C64,
    x: [C64; 2],
    dx: [C64; 2],
    inhomogeneous: bool,
) -> Result<f64> {
    if z == ZERO {
        return Err(DunklError::Domain("the system is singular at z = 0".into()));
    }
    let (g, gs) = g_values(orbit, z)?;
    let h = param.gamma / (2.0 * param.n as f64);
    let (f0, f1) = if inhomogeneous { (g, gs) } else { (ZERO, ZERO) };
    let r0 = dx[0] - (f0 + h * g * x[0] - h * gs * x[1]);
    let r1 = dx[1] - (f1 + h * gs * x[0] - (param.gamma * 2.0 / z + h * g) * x[1]);
    Ok((r0.norm_sqr() + r1.norm_sqr()).sqrt())
}

/// Residual of the truncated `Q` in the full system at `z`.
pub fn residual_check(param: &ParameterK, orbit: &OrbitPairings, s: &SeriesData, z: C64) -> Result<f64> {
    let guard = RadiusGuard::new(orbit.a_bound, delta_effective(param).delta_effective);
    if z.norm() >= guard.radius() {
        return Err(DunklError::Domain(format!(
            "|z| = {} lies outside the certified disk of radius {}",
            z.norm(),
            guard.radius()
        )));
    }
    system_residual(param, orbit, z, s.q_at(z), s.dq_at(z), true)
}

/// Truncation order for evaluating `Φ` on `|z| = rho` with tail below `tol`.
///
/// Starts at `max(2m, 40)` and doubles until
/// `√2 (2n/|γ|) (δaρ)^{P+1} / (1 - δaρ) < tol`.
pub fn truncation_order(param: &ParameterK, a_bound: f64, delta: f64, rho: f64, tol: f64, m: usize) -> Result<usize> {
    let mut order = (2 * m).max(40);
    if a_bound == 0.0 {
        return Ok(order);
    }
    let r = delta * a_bound * rho;
    if r >= 1.0 {
        return Err(DunklError::Domain(format!("contour radius {rho} is outside the certified disk")));
    }
    let lead = std::f64::consts::SQRT_2 * 2.0 * param.n as f64 / param.gamma.norm() / (1.0 - r);
    while lead * r.powi(order as i32 + 1) >= tol {
        order *= 2;
        if order > 1 << 16 {
            return Err(DunklError::Convergence(format!(
                "no truncation order below 65536 meets tolerance {tol:e} at δaρ = {r}"
            )));
        }
    }
    Ok(order)
}

/// `E_m = (γ/2n) Σ_{j≤m} φ_j ⟨x,y⟩^{m-j} / (1+γ)_m`.
pub fn em_genseries(param: &ParameterK, orbit: &OrbitPairings, s: &SeriesData, m: usize) -> Result<C64> {
    Ok(*em_genseries_sequence(param, orbit, s, m)?.last().expect("non-empty"))
}

/// `[E_0, ..., E_M]` from the generating series.
pub fn em_genseries_sequence(
    param: &ParameterK,
    orbit: &OrbitPairings,
    s: &SeriesData,
    max_m: usize,
) -> Result<Vec<C64>> {
    if max_m > s.order {
        return Err(DunklError::Range(format!("degree {max_m} exceeds the series truncation order {}", s.order)));
    }
    let h = param.gamma / (2.0 * param.n as f64);
    let xy = orbit.xy();
    let mut conv = ZERO;
    let mut poch = C64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(max_m + 1);
    for m in 0..=max_m {
        // Running Cauchy product with 1/(1 - z⟨x,y⟩).
        conv = conv * xy + s.phi[m];
        if m > 0 {
            poch *= param.gamma + m as f64;
        }
        out.push(h * conv / poch);
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(DunklError::Range("non-finite component; reduce the maximal degree".into()));
    }
    Ok(out)
}

fn require_sigma_symmetric(orbit: &OrbitPairings) -> Result<()> {
    if !orbit.is_sigma_symmetric(SYMMETRY_TOL) {
        return Err(DunklError::Domain(
            "closed form needs x or y fixed by σ (rotation and reflection pairings must coincide)".into(),
        ));
    }
    Ok(())
}

/// `Φ(z) = (2/k) Π_i (1 - z⟨r^i x,y⟩)^{-k}` on the principal branch, for σ-invariant data.
pub fn phi_sigma_invariant(param: &ParameterK, orbit: &OrbitPairings, z: C64) -> Result<C64> {
    param.require_nonzero_gamma()?;
    require_sigma_symmetric(orbit)?;
    let mut log_sum = ZERO;
    for c in &orbit.rot_pairings {
        let zc = z * c;
        if zc.norm() >= 1.0 {
            return Err(DunklError::Domain(format!("|z⟨r^i x,y⟩| = {} ≥ 1", zc.norm())));
        }
        let w = C64::new(1.0, 0.0) - zc;
        if w.re <= 0.0 && w.im.abs() < POLE_TOL {
            return Err(DunklError::Domain("1 - z⟨r^i x,y⟩ touches the branch cut".into()));
        }
        log_sum += w.ln();
    }
    Ok((-param.k * log_sum).exp() * 2.0 / param.k)
}

/// Taylor coefficients of `Π_i (1 - z c_i)^{-k}` through `z^max_j`:
/// `Σ_{ν_0+…+ν_{n-1}=j} Π_i (k)_{ν_i}/ν_i! c_i^{ν_i}`.
pub fn sigma_product_coeffs(k: C64, pairings: &[C64], max_j: usize) -> Vec<C64> {
    let mut acc = vec![ZERO; max_j + 1];
    acc[0] = C64::new(1.0, 0.0);
    let mut factor = vec![ZERO; max_j + 1];
    for c in pairings {
        factor[0] = C64::new(1.0, 0.0);
        for v in 0..max_j {
            factor[v + 1] = factor[v] * (k + v as f64) / (v + 1) as f64 * c;
        }
        let prev = acc.clone();
        for j in 0..=max_j {
            acc[j] = (0..=j).map(|i| prev[i] * factor[j - i]).sum();
        }
    }
    acc
}

/// `[E_0, ..., E_M]` from the closed form valid when `x` or `y` is σ-invariant.
pub fn em_closed_sigma_sequence(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    max_m: usize,
) -> Result<Vec<C64>> {
    let orbit = OrbitPairings::new(group, x, y);
    require_sigma_symmetric(&orbit)?;
    let coeffs = sigma_product_coeffs(param.k, &orbit.rot_pairings, max_m);
    let xy = orbit.xy();
    let mut conv = ZERO;
    let mut poch = C64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(max_m + 1);
    for (m, c) in coeffs.iter().enumerate() {
        conv = conv * xy + c;
        if m > 0 {
            poch *= param.gamma + m as f64;
        }
        out.push(conv / poch);
    }
    Ok(out)
}

pub fn em_closed_sigma(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    m: usize,
) -> Result<C64> {
    Ok(em_closed_sigma_sequence(group, param, x, y, m)?[m])
}
