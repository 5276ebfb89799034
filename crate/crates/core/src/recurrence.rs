//! Homogeneous components `E_m(x,y)` through the vectorised degree recurrence.
//!
//! The state `Y_m ∈ ℂ^{2n}` collects `(1+γ)_m E_m(g x, y)` over the rotated
//! points `g = r^j` followed by the reflected points `g = r^j σ`. One step is
//!
//! ```text
//! Y_{m+1} = D Y_m + γ/(2n(m+1)) ⟨D Y_m, W⟩ W - γ/(2n(m+1+2γ)) ⟨D Y_m, W_s⟩ W_s
//! ```
//!
//! with `D` the diagonal of orbit pairings, `W = (1,…,1)` and
//! `W_s = (1,…,1,-1,…,-1)`. Inner products are bilinear.

use crate::dihedral::{pairing, DihedralGroup, OrbitPairings, PlanePoint, C64};
use crate::error::{DunklError, Result};
use crate::polyalg::{HCoefficients, ParameterK, Pochhammer};

/// Largest degree reachable without renormalising `Y_m`.
pub const MAX_UNSCALED_DEGREE: usize = 200;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub m: usize,
    pub values: Vec<C64>,
}

impl StateVector {
    /// `Y_0 = W`.
    pub fn initial(n: usize) -> Self {
        Self { m: 0, values: vec![C64::new(1.0, 0.0); 2 * n] }
    }

    pub fn order(&self) -> usize {
        self.values.len() / 2
    }

    /// Max-modulus norm.
    pub fn norm_inf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// One application of the degree recurrence.
pub fn y_step(state: &StateVector, param: &ParameterK, orbit: &OrbitPairings) -> StateVector {
    let n = state.order();
    let m1 = (state.m + 1) as f64;
    let g = param.gamma;
    let dy: Vec<C64> = state.values.iter().zip(&orbit.big_diag).map(|(y, d)| y * d).collect();
    let (head, tail) = dy.split_at(n);
    let s_head: C64 = head.iter().sum();
    let s_tail: C64 = tail.iter().sum();
    let with_w = g / (2.0 * n as f64 * m1) * (s_head + s_tail);
    let with_ws = g / ((g * 2.0 + m1) * (2.0 * n as f64)) * (s_head - s_tail);
    let values =
        dy.iter().enumerate().map(|(i, v)| if i < n { v + with_w - with_ws } else { v + with_w + with_ws }).collect();
    StateVector { m: state.m + 1, values }
}

/// Same step divided by `m+1+γ`: propagates `X_m = Y_m / (1+γ)_m` directly.
pub(crate) fn x_step(state: &StateVector, param: &ParameterK, orbit: &OrbitPairings) -> StateVector {
    let mut next = y_step(state, param, orbit);
    let s = (param.gamma + next.m as f64).inv();
    for v in next.values.iter_mut() {
        *v *= s;
    }
    next
}

pub(crate) fn check_instance(group: &DihedralGroup, param: &ParameterK, x: &PlanePoint, y: &PlanePoint) -> Result<()> {
    if group.order() != param.n {
        return Err(DunklError::Domain(format!(
            "group order {} does not match parameter order {}",
            group.order(),
            param.n
        )));
    }
    if !x.is_finite() || !y.is_finite() {
        return Err(DunklError::Domain("x and y must have finite coordinates".into()));
    }
    Ok(())
}

/// `[E_0(x,y), ..., E_M(x,y)]`.
pub fn em_sequence(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    max_m: usize,
) -> Result<Vec<C64>> {
    check_instance(group, param, x, y)?;
    if max_m > MAX_UNSCALED_DEGREE {
        return Err(DunklError::Range(format!(
            "degree {max_m} exceeds {MAX_UNSCALED_DEGREE}; the unscaled recurrence is not renormalised"
        )));
    }
    let orbit = OrbitPairings::new(group, x, y);
    let poch = Pochhammer::new(param.gamma, max_m)?;
    let mut state = StateVector::initial(group.order());
    let mut out = Vec::with_capacity(max_m + 1);
    out.push(C64::new(1.0, 0.0));
    for m in 1..=max_m {
        state = y_step(&state, param, &orbit);
        out.push(state.values[0] / poch.get(m));
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(DunklError::Range("non-finite component; reduce the maximal degree".into()));
    }
    Ok(out)
}

/// Scaled propagation used by the kernel summation; reaches degrees past
/// [`MAX_UNSCALED_DEGREE`] without forming `(1+γ)_m`.
pub(crate) fn em_sequence_scaled(param: &ParameterK, orbit: &OrbitPairings, max_m: usize) -> Vec<C64> {
    let mut state = StateVector::initial(param.n);
    let mut out = Vec::with_capacity(max_m + 1);
    out.push(C64::new(1.0, 0.0));
    for _ in 1..=max_m {
        state = x_step(&state, param, orbit);
        out.push(state.values[0]);
    }
    out
}

/// Scalar form of the degree relation:
/// `E_{m+1}(x) = Σ_j a_j(m+1) ⟨r^j x, y⟩ E_m(r^j x) + Σ_j b_j(m+1) ⟨r^j σ x, y⟩ E_m(r^j σ x)`,
/// evaluated with `E_m` taken from [`em_sequence`] at every orbit point.
pub fn em_orbit_relation(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    m: usize,
) -> Result<C64> {
    check_instance(group, param, x, y)?;
    let h = HCoefficients::new(param, m + 1)?;
    let mut acc = ZERO;
    for g in group.elements() {
        let gx = group.act(g, x);
        let em = em_sequence(group, param, &gx, y, m)?[m];
        let weight = if g.is_reflection() { h.b(g.index) } else { h.a(g.index) };
        acc += weight * pairing(&gx, y) * em;
    }
    Ok(acc)
}

/// Row-sum norms of the blocks `𝒜_m = I/(m+1+γ) + c_m 𝒪_n` and `ℬ_m = b_m 𝒪_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeffMatrices {
    pub m: usize,
    pub a_mat_norm: f64,
    pub b_mat_norm: f64,
}

impl CoeffMatrices {
    pub fn sum(&self) -> f64 {
        self.a_mat_norm + self.b_mat_norm
    }
}

pub fn coeff_matrix_norms(param: &ParameterK, m: usize) -> CoeffMatrices {
    let g = param.gamma;
    let n = param.n as f64;
    let m1 = (m + 1) as f64;
    let diag = (g + m1).inv();
    let ones = g * g / ((g + m1) * (g * 2.0 + m1) * (n * m1));
    let refl = g / ((g * 2.0 + m1) * (n * m1));
    CoeffMatrices { m, a_mat_norm: (diag + ones).norm() + (n - 1.0) * ones.norm(), b_mat_norm: n * refl.norm() }
}
