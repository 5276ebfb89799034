//! The kernel `E_k(x,y) = Σ_m E_m(x,y)`, its growth constants and bounds.
//!
//! Two independent evaluations are provided: a certified partial sum of the
//! homogeneous components, and the time integral
//!
//! ```text
//! E_k = ∫_0^1 (1-t)^{γ-1} K(t) dt,
//! K(t) = (γ²/2n) (1/2πi) ∮_{|z|=ρ} Φ(z) e^{t/z} / (z (1 - z⟨x,y⟩)) dz,
//! ```
//!
//! valid for `Re γ > 0`.

use std::f64::consts::PI;
use std::fmt;

use crate::dihedral::{pairing, DihedralGroup, OrbitPairings, PlanePoint, C64};
use crate::error::{DunklError, Result};
use crate::polyalg::{fmt_c, ParameterK};
use crate::quadrature::GaussLegendre;
use crate::recurrence::{check_instance, coeff_matrix_norms, em_sequence_scaled};
use crate::series::{a_coeffs, em_closed_sigma_sequence, truncation_order, RadiusGuard, SeriesData};

/// Largest number of components summed by the series paths.
pub const MAX_TERMS: usize = 500;
/// Largest contour node count tried by the integral path.
pub const MAX_CONTOUR_NODES: usize = 1 << 14;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Growth constants of the coefficient recursions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaConstant {
    /// `2|γ| sup_{p≥1} max(1, p/|p+2γ|)`.
    pub delta_series: f64,
    /// `max_m (‖𝒜_m‖_∞ + ‖ℬ_m‖_∞)`.
    pub delta_matrix: f64,
    /// `max(1, delta_series, delta_matrix)`.
    pub delta_effective: f64,
}

pub fn delta_effective(param: &ParameterK) -> DeltaConstant {
    let delta_series = 2.0 * param.gamma.norm() * series_ratio_sup(param.gamma);
    let delta_matrix = matrix_norm_sup(param);
    DeltaConstant { delta_series, delta_matrix, delta_effective: delta_series.max(delta_matrix).max(1.0) }
}

/// `sup_{p≥1} max(1, p/|p+2γ|)`.
///
/// `|p+2γ|²/p² = 1 + 2 Re(2γ)/p + |2γ|²/p²` is convex in `1/p`, so only `p = 1`
/// and the integers around `p* = -|2γ|²/Re(2γ)` can beat the limit `1`.
pub fn series_ratio_sup(gamma: C64) -> f64 {
    let g2 = gamma * 2.0;
    let ratio = |p: f64| p / (g2 + p).norm();
    let mut sup = ratio(1.0).max(1.0);
    if g2.re < 0.0 {
        let p_star = -g2.norm_sqr() / g2.re;
        for p in [p_star.floor(), p_star.ceil()] {
            if p >= 1.0 {
                sup = sup.max(ratio(p));
            }
        }
    }
    sup
}

/// Scans the block norms up to `10(1+|γ|)`, then closes with a bound that is
/// decreasing for all later `m`.
fn matrix_norm_sup(param: &ParameterK) -> f64 {
    let g = param.gamma.norm();
    let end = (10.0 * (1.0 + g)).ceil() as usize;
    let scanned = (0..=end).map(|m| coeff_matrix_norms(param, m).sum()).fold(0.0, f64::max);
    // For m+1 > 2|γ|: |m+1+γ| ≥ m+1-|γ| and |m+1+2γ| ≥ m+1-2|γ|.
    let m1 = (end + 2) as f64;
    let tail = 1.0 / (m1 - g) + g * g / (m1 * (m1 - g) * (m1 - 2.0 * g)) + g / (m1 * (m1 - 2.0 * g));
    scanned.max(tail)
}

/// `ln` of the component bound `(e²/2)(m+2)² t^m / |(1+γ)_m|`, for `m = 0, 1, ...`.
struct LogBound {
    gamma: C64,
    ln_t: f64,
    m: usize,
    value: f64,
}

impl LogBound {
    fn new(gamma: C64, t: f64) -> Self {
        Self { gamma, ln_t: t.ln(), m: 0, value: 2.0 - 2f64.ln() + 2.0 * 2f64.ln() }
    }

    /// `ln(bound_{m+1}/bound_m)`.
    fn log_ratio(&self) -> f64 {
        let m = self.m as f64;
        2.0 * ((m + 3.0) / (m + 2.0)).ln() + self.ln_t - (self.gamma + m + 1.0).norm().ln()
    }

    /// True once the ratio is below `1/2` and can only decrease from here on.
    fn is_contracting(&self) -> bool {
        self.m as f64 + 1.0 + self.gamma.re > 0.0 && self.log_ratio() < -2f64.ln()
    }

    fn advance(&mut self) {
        self.value += self.log_ratio();
        self.m += 1;
    }
}

/// `(e²/2)(m+2)² t^m / |(1+γ)_m|`.
pub fn component_bound(gamma: C64, t: f64, m: usize) -> f64 {
    if t == 0.0 {
        return if m == 0 { 2.0 * std::f64::consts::E.powi(2) } else { 0.0 };
    }
    let mut lb = LogBound::new(gamma, t);
    for _ in 0..m {
        lb.advance();
    }
    lb.value.exp()
}

/// Number of terms after which the summed component bounds stay below `tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailCertificate {
    pub terms: usize,
    pub tail: f64,
}

/// Smallest `M` with `Σ_{m>M} (e²/2)(m+2)² t^m/|(1+γ)_m| < tol`.
pub fn certify_tail(gamma: C64, t: f64, tol: f64, cap: usize) -> Result<TailCertificate> {
    if t == 0.0 {
        return Ok(TailCertificate { terms: 0, tail: 0.0 });
    }
    let mut lb = LogBound::new(gamma, t);
    let mut logs = vec![lb.value];
    loop {
        if lb.is_contracting() {
            let r = lb.log_ratio().exp();
            let closure = lb.value.exp() * r / (1.0 - r);
            if closure < tol {
                let mut tails = vec![closure; logs.len()];
                for m in (0..logs.len() - 1).rev() {
                    tails[m] = tails[m + 1] + logs[m + 1].exp();
                }
                let terms = tails.iter().position(|&v| v < tol).expect("closure is below tol");
                if terms > cap {
                    break;
                }
                return Ok(TailCertificate { terms, tail: tails[terms] });
            }
        }
        if lb.m > cap.max(4 * t as usize) + 100 {
            break;
        }
        lb.advance();
        logs.push(lb.value);
    }
    Err(DunklError::Convergence(format!(
        "the certified tail needs more than {cap} terms at δa = {t}; the series path cannot reach tolerance {tol:e}"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMethod {
    SeriesSum,
    Integral,
    SigmaClosed,
    /// `k = 0`, where the kernel is `exp⟨x,y⟩`.
    ExpShortcut,
}

impl fmt::Display for KernelMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelMethod::SeriesSum => "series",
            KernelMethod::Integral => "integral",
            KernelMethod::SigmaClosed => "sigma",
            KernelMethod::ExpShortcut => "exp",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelResult {
    pub value: C64,
    pub method: KernelMethod,
    /// Components summed, or contour nodes for the integral.
    pub count: usize,
    /// Certified tail for the series paths, last refinement change for the integral.
    pub error_estimate: f64,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(DunklError::Domain(format!("tolerance must be positive and finite (got {tol})")));
    }
    Ok(())
}

fn shortcut(param: &ParameterK, orbit: &OrbitPairings, x: &PlanePoint, y: &PlanePoint) -> Option<KernelResult> {
    if param.is_zero() {
        return Some(KernelResult {
            value: pairing(x, y).exp(),
            method: KernelMethod::ExpShortcut,
            count: 0,
            error_estimate: 0.0,
        });
    }
    if orbit.a_bound == 0.0 {
        return Some(KernelResult {
            value: C64::new(1.0, 0.0),
            method: KernelMethod::SeriesSum,
            count: 1,
            error_estimate: 0.0,
        });
    }
    None
}

fn finish_sum(terms: &[C64], method: KernelMethod, cert: TailCertificate) -> Result<KernelResult> {
    let value: C64 = terms.iter().sum();
    if !value.is_finite() {
        return Err(DunklError::Range("the kernel sum is not finite in double precision".into()));
    }
    Ok(KernelResult { value, method, count: terms.len(), error_estimate: cert.tail })
}

/// Partial sum of the components, truncated where the certified tail drops below `tol`.
pub fn ek_series(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    tol: f64,
) -> Result<KernelResult> {
    check_tol(tol)?;
    check_instance(group, param, x, y)?;
    let orbit = OrbitPairings::new(group, x, y);
    if let Some(r) = shortcut(param, &orbit, x, y) {
        return Ok(r);
    }
    let delta = delta_effective(param).delta_effective;
    let cert = certify_tail(param.gamma, delta * orbit.a_bound, tol, MAX_TERMS)?;
    let terms = em_sequence_scaled(param, &orbit, cert.terms);
    finish_sum(&terms, KernelMethod::SeriesSum, cert)
}

/// Same partial sum with the components taken from the σ-invariant closed form.
pub fn ek_sigma_closed(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    tol: f64,
) -> Result<KernelResult> {
    check_tol(tol)?;
    check_instance(group, param, x, y)?;
    let orbit = OrbitPairings::new(group, x, y);
    if let Some(r) = shortcut(param, &orbit, x, y) {
        return Ok(r);
    }
    let delta = delta_effective(param).delta_effective;
    let cert = certify_tail(param.gamma, delta * orbit.a_bound, tol, MAX_TERMS)?;
    let terms = em_closed_sigma_sequence(group, param, x, y, cert.terms)?;
    finish_sum(&terms, KernelMethod::SigmaClosed, cert)
}

/// Samples of `Φ(z)/(1 - z⟨x,y⟩)` on `|z| = ρ`, reused for every `t`.
#[derive(Clone, Debug)]
pub struct ContourSampler {
    weights: Vec<C64>,
    inv_z: Vec<C64>,
    scale: C64,
}

impl ContourSampler {
    pub fn new(param: &ParameterK, orbit: &OrbitPairings, series: &SeriesData, rho: f64, nodes: usize) -> Result<Self> {
        if nodes < 8 {
            return Err(DunklError::Domain(format!("contour needs at least 8 nodes (got {nodes})")));
        }
        let xy = orbit.xy();
        let mut weights = Vec::with_capacity(nodes);
        let mut inv_z = Vec::with_capacity(nodes);
        for j in 0..nodes {
            let z = C64::from_polar(rho, 2.0 * PI * j as f64 / nodes as f64);
            let d = C64::new(1.0, 0.0) - z * xy;
            if d.norm() < 1e-14 {
                return Err(DunklError::Domain(format!("contour node {} hits the pole of 1/(1 - z⟨x,y⟩)", fmt_c(z))));
            }
            weights.push(series.phi_at(z) / d);
            inv_z.push(z.inv());
        }
        let scale = param.gamma * param.gamma / (2.0 * param.n as f64 * nodes as f64);
        Ok(Self { weights, inv_z, scale })
    }

    pub fn nodes(&self) -> usize {
        self.weights.len()
    }

    /// Trapezoid value of `K(t)`.
    pub fn kernel_at(&self, t: f64) -> C64 {
        let s: C64 = self.weights.iter().zip(&self.inv_z).map(|(w, iz)| w * (iz * t).exp()).sum();
        s * self.scale
    }
}

/// `K(t)` on `|z| = rho` with `nodes` trapezoid points.
pub fn kernel_k(param: &ParameterK, orbit: &OrbitPairings, t: f64, rho: f64, nodes: usize) -> Result<C64> {
    param.require_nonzero_gamma()?;
    let delta = delta_effective(param).delta_effective;
    let order = truncation_order(param, orbit.a_bound, delta, rho, 1e-15, 0)?;
    let series = a_coeffs(param, orbit, order)?;
    Ok(ContourSampler::new(param, orbit, &series, rho, nodes)?.kernel_at(t))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralOptions {
    pub tol: f64,
    /// Contour radius; defaults to `1/(2δa)` (or `1` when `a = 0`).
    pub rho: Option<f64>,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        Self { tol: 1e-10, rho: None }
    }
}

/// Dyadic-graded composite Gauss–Legendre rule on `(0, 1]`.
struct GradedRule {
    gl: GaussLegendre,
    levels: usize,
}

impl GradedRule {
    fn integrate(&self, sub: usize, f: &impl Fn(f64) -> C64) -> C64 {
        let mut acc = ZERO;
        let mut hi = 1.0;
        for level in 0..=self.levels {
            let lo = if level == self.levels { 0.0 } else { hi * 0.5 };
            let width = (hi - lo) / sub as f64;
            for i in 0..sub {
                let a = lo + i as f64 * width;
                acc += self.gl.integrate(a, a + width, f);
            }
            hi = lo;
        }
        acc
    }
}

pub fn ek_integral(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    tol: f64,
) -> Result<KernelResult> {
    ek_integral_with(group, param, x, y, &IntegralOptions { tol, rho: None })
}

/// Time-integral evaluation. Substituting `1 - t = u^q` with `q ≥ 1/Re γ`
/// leaves the bounded integrand `q u^{qγ-1} K(1 - u^q)`; the contour node
/// count and the panel count are doubled until successive values agree.
pub fn ek_integral_with(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    opts: &IntegralOptions,
) -> Result<KernelResult> {
    check_tol(opts.tol)?;
    check_instance(group, param, x, y)?;
    if param.gamma.re <= 0.0 {
        return Err(DunklError::Domain(format!(
            "the integral representation needs Re γ > 0 (γ = {})",
            fmt_c(param.gamma)
        )));
    }
    let orbit = OrbitPairings::new(group, x, y);
    let delta = delta_effective(param).delta_effective;
    let guard = RadiusGuard::new(orbit.a_bound, delta);
    let rho = match opts.rho {
        Some(r) => {
            if !(r > 0.0 && r < guard.radius()) {
                return Err(DunklError::Domain(format!("contour radius {r} must lie in (0, {})", guard.radius())));
            }
            r
        }
        None if orbit.a_bound == 0.0 => 1.0,
        None => guard.rho_default,
    };
    let order = truncation_order(param, orbit.a_bound, delta, rho, (opts.tol * 1e-3).min(1e-15), 0)?;
    let series = a_coeffs(param, &orbit, order)?;

    let q = (1.0 / param.gamma.re).ceil().max(1.0);
    let expo = param.gamma * q - 1.0;
    let rule = GradedRule { gl: GaussLegendre::new(16), levels: 60 };
    let integrate = |sampler: &ContourSampler, sub: usize| {
        let f = |u: f64| {
            if u == 0.0 {
                return ZERO;
            }
            (expo * u.ln()).exp() * q * sampler.kernel_at(1.0 - u.powf(q))
        };
        rule.integrate(sub, &f)
    };
    let close = |a: C64, b: C64| (a - b).norm() <= opts.tol * a.norm().max(b.norm()).max(1.0);

    let mut nodes = 64;
    let mut sub = 1;
    let mut sampler = ContourSampler::new(param, &orbit, &series, rho, nodes)?;
    loop {
        let coarse = integrate(&sampler, sub);
        let fine = integrate(&sampler, 2 * sub);
        if !close(coarse, fine) {
            sub *= 2;
            if sub > 256 {
                return Err(DunklError::Convergence(format!(
                    "time quadrature did not settle within tolerance {:e}",
                    opts.tol
                )));
            }
            continue;
        }
        let denser = ContourSampler::new(param, &orbit, &series, rho, 2 * nodes)?;
        let value = integrate(&denser, 2 * sub);
        if !close(fine, value) {
            nodes *= 2;
            if nodes > MAX_CONTOUR_NODES {
                return Err(DunklError::Convergence(format!(
                    "contour quadrature did not settle within {MAX_CONTOUR_NODES} nodes"
                )));
            }
            sampler = denser;
            continue;
        }
        if !value.is_finite() {
            return Err(DunklError::Range("the kernel integral is not finite in double precision".into()));
        }
        return Ok(KernelResult {
            value,
            method: KernelMethod::Integral,
            count: denser.nodes(),
            error_estimate: (fine - value).norm().max((coarse - fine).norm()),
        });
    }
}

fn check_nu(param: &ParameterK, nu: u32) -> Result<()> {
    if nu == 0 || param.gamma.re <= -(nu as f64) {
        return Err(DunklError::Domain(format!(
            "the bound needs a positive integer ν with Re γ > -ν (ν = {nu}, γ = {})",
            fmt_c(param.gamma)
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmBoundReport {
    pub delta: f64,
    /// `|E_m| / bound_m` for `m = 0..=M`.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

/// Compares `|E_m|` with `(e²/2)(m+2)²(δa)^m/|(1+γ)_m|`.
pub fn check_em_bound(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    max_m: usize,
    nu: u32,
) -> Result<EmBoundReport> {
    check_instance(group, param, x, y)?;
    check_nu(param, nu)?;
    let orbit = OrbitPairings::new(group, x, y);
    let delta = delta_effective(param).delta_effective;
    let t = delta * orbit.a_bound;
    let em = em_sequence_scaled(param, &orbit, max_m);
    let mut ratios = Vec::with_capacity(max_m + 1);
    let mut lb = (t > 0.0).then(|| LogBound::new(param.gamma, t));
    for (m, e) in em.iter().enumerate() {
        if m > 0 {
            if let Some(lb) = lb.as_mut() {
                lb.advance();
            }
        }
        let r = match &lb {
            _ if e.norm() == 0.0 => 0.0,
            Some(lb) => (e.norm().ln() - lb.value).exp(),
            None => e.norm() / component_bound(param.gamma, 0.0, m),
        };
        ratios.push(r);
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(EmBoundReport { delta, ratios, max_ratio })
}

/// `S(t) = Σ_m (e²/2)(m+2)² t^m/|(1+γ)_m|`.
fn bound_series(gamma: C64, t: f64) -> f64 {
    if t == 0.0 {
        return component_bound(gamma, 0.0, 0);
    }
    let mut lb = LogBound::new(gamma, t);
    let mut sum = 0.0;
    loop {
        let term = lb.value.exp();
        sum += term;
        if lb.is_contracting() && term < 1e-17 * sum {
            return sum;
        }
        lb.advance();
    }
}

/// `S(t) / ((t+1)^{ν+2} e^t)`.
fn envelope_ratio(gamma: C64, nu: u32, t: f64) -> f64 {
    (bound_series(gamma, t).ln() - (nu as f64 + 2.0) * (t + 1.0).ln() - t).exp()
}

/// Supremum of `S(t)/((t+1)^{ν+2} e^t)` over a grid of `[0, t_max]` and the extra points.
pub fn corollary_constant(param: &ParameterK, nu: u32, t_max: f64, extra: &[f64]) -> Result<f64> {
    check_nu(param, nu)?;
    let grid = 400;
    let top = t_max.max(1.0);
    let sup = (0..=grid)
        .map(|i| top * i as f64 / grid as f64)
        .chain(extra.iter().copied())
        .map(|t| envelope_ratio(param.gamma, nu, t))
        .fold(0.0, f64::max);
    Ok(sup)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EkBoundReport {
    pub constant: f64,
    /// `|E_k| / ((δa+1)^{ν+2} e^{δa})` per point.
    pub ratios: Vec<f64>,
    pub sup_ratio: f64,
}

/// Checks `|E_k(x,y)| ≤ C (δa+1)^{ν+2} e^{δa}` at the given pairs.
pub fn check_ek_bound(
    group: &DihedralGroup,
    param: &ParameterK,
    points: &[(PlanePoint, PlanePoint)],
    nu: u32,
) -> Result<EkBoundReport> {
    check_nu(param, nu)?;
    let delta = delta_effective(param).delta_effective;
    let mut ratios = Vec::with_capacity(points.len());
    let mut ts = Vec::with_capacity(points.len());
    for (x, y) in points {
        let t = delta * OrbitPairings::new(group, x, y).a_bound;
        let ek = ek_series(group, param, x, y, 1e-13)?;
        ratios.push((ek.value.norm().ln() - (nu as f64 + 2.0) * (t + 1.0).ln() - t).exp());
        ts.push(t);
    }
    let t_max = ts.iter().copied().fold(0.0, f64::max);
    let constant = corollary_constant(param, nu, t_max, &ts)?;
    let sup_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(EkBoundReport { constant, ratios, sup_ratio })
}
