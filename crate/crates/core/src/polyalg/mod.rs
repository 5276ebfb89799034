//! Symbolic oracle: Dunkl operators and the intertwining operator acting on
//! dense bivariate polynomials.
//!
//! Nothing here is used by the fast evaluation paths. Its job is to produce
//! `E_m(·, y) = V_k(⟨·, y⟩^m) / m!` as an explicit polynomial so the other
//! routes can be checked against it.

mod param;
mod poly;

pub use param::{ParameterK, Pochhammer, REGULARITY_TOL};
pub use poly::Poly2;

pub(crate) use param::fmt_c;

use crate::dihedral::{DihedralGroup, GroupElement, PlanePoint, C64};
use crate::error::{DunklError, Result};

/// Relative size of the divided-difference remainder that is still treated as roundoff.
pub const DIVISION_TOL: f64 = 1e-10;

/// Coefficients of `H_m = ((m+γ) - A)^{-1}` on homogeneous polynomials of degree `m`:
/// `H_m p(x) = Σ_j a_j p(r^j x) + Σ_j b_j p(r^j σ x)` with
/// `a_j = δ_{j0}·identity + rotation` and `b_j = reflection`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HCoefficients {
    /// `1/(m+γ)`.
    pub identity: C64,
    /// `γ² / (n m (m+γ)(m+2γ))`.
    pub rotation: C64,
    /// `γ / (n m (m+2γ))`.
    pub reflection: C64,
}

impl HCoefficients {
    pub fn new(param: &ParameterK, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(DunklError::Domain("H_m is only defined on homogeneous polynomials of degree m ≥ 1".into()));
        }
        let g = param.gamma;
        let mf = m as f64;
        let nm = (param.n * m) as f64;
        Ok(Self {
            identity: (g + mf).inv(),
            rotation: g * g / ((g + mf) * (g * 2.0 + mf) * nm),
            reflection: g / ((g * 2.0 + mf) * nm),
        })
    }

    /// `a_j(m)`.
    pub fn a(&self, j: usize) -> C64 {
        if j == 0 {
            self.identity + self.rotation
        } else {
            self.rotation
        }
    }

    /// `b_j(m)` (independent of `j`).
    pub fn b(&self, _j: usize) -> C64 {
        self.reflection
    }
}

/// Dunkl operator `T_ξ f = ∂_ξ f + Σ_{α ∈ R+} k ⟨α, ξ⟩ (f - f∘σ_α) / ⟨α, x⟩`.
pub fn dunkl_apply(group: &DihedralGroup, param: &ParameterK, xi: &[f64; 2], f: &Poly2) -> Result<Poly2> {
    let mut out = f.directional_deriv(xi);
    for alpha in group.positive_roots() {
        let weight = param.k * (alpha[0] * xi[0] + alpha[1] * xi[1]);
        if weight == C64::new(0.0, 0.0) {
            continue;
        }
        let reflected = f.compose_linear(&DihedralGroup::root_reflection(alpha));
        let numerator = f - &reflected;
        let (quotient, remainder) = numerator.divide_linear(alpha)?;
        let scale = numerator.max_abs().max(f.max_abs());
        if remainder > DIVISION_TOL * scale {
            return Err(DunklError::Consistency(format!(
                "divided difference for root ({:.6}, {:.6}) left remainder {remainder:.3e} (scale {scale:.3e})",
                alpha[0], alpha[1]
            )));
        }
        out = &out + &quotient.scale(weight);
    }
    Ok(out)
}

/// `A f = k Σ_j f ∘ (r^j σ)`.
pub fn a_op(group: &DihedralGroup, param: &ParameterK, f: &Poly2) -> Poly2 {
    let mut acc = Poly2::zero(f.degree_bound());
    for j in 0..group.order() {
        acc = &acc + &f.compose_linear(group.matrix(GroupElement::reflection(j)));
    }
    acc.scale(param.k)
}

/// `H_m f` for `f` homogeneous of degree `m ≥ 1`.
pub fn h_op(group: &DihedralGroup, param: &ParameterK, m: usize, f: &Poly2) -> Result<Poly2> {
    let h = HCoefficients::new(param, m)?;
    if !f.is_homogeneous_of(m) {
        return Err(DunklError::Domain(format!("H_{m} expects a homogeneous polynomial of degree {m}")));
    }
    let mut rot_sum = Poly2::zero(f.degree_bound());
    let mut refl_sum = Poly2::zero(f.degree_bound());
    for j in 0..group.order() {
        rot_sum = &rot_sum + &f.compose_linear(group.matrix(GroupElement::rotation(j)));
        refl_sum = &refl_sum + &f.compose_linear(group.matrix(GroupElement::reflection(j)));
    }
    let out = &(&f.scale(h.identity) + &rot_sum.scale(h.rotation)) + &refl_sum.scale(h.reflection);
    Ok(out)
}

/// The intertwining operator `V_k`, tabulated degree by degree.
///
/// `V_k` preserves homogeneous degree, so on `𝒫_m` it is an `(m+1)×(m+1)`
/// matrix in the monomial basis. The matrix for degree `m` is obtained from
/// degree `m-1` through `V_k(p) = Σ_j x_j V_k(∂_j H_m p)`.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    group: DihedralGroup,
    param: ParameterK,
    /// `mats[m][row][col]`, columns indexed by the input monomial's `x2` power.
    mats: Vec<Vec<Vec<C64>>>,
}

impl Intertwiner {
    pub fn new(group: &DihedralGroup, param: &ParameterK, max_degree: usize) -> Result<Self> {
        if group.order() != param.n {
            return Err(DunklError::Domain(format!(
                "group order {} does not match parameter order {}",
                group.order(),
                param.n
            )));
        }
        let mut mats = vec![vec![vec![C64::new(1.0, 0.0)]]];
        for m in 1..=max_degree {
            let prev = &mats[m - 1];
            let mut mat = vec![vec![C64::new(0.0, 0.0); m + 1]; m + 1];
            for col in 0..=m {
                let e = Poly2::monomial(m - col, col, C64::new(1.0, 0.0));
                let q = h_op(group, param, m, &e)?;
                let v1 = apply_matrix(prev, q.deriv(0).homogeneous_slice(m - 1));
                let v2 = apply_matrix(prev, q.deriv(1).homogeneous_slice(m - 1));
                // x1·v1 keeps the x2 power, x2·v2 raises it by one.
                for (b, v) in v1.iter().enumerate() {
                    mat[b][col] += v;
                }
                for (b, v) in v2.iter().enumerate() {
                    mat[b + 1][col] += v;
                }
            }
            mats.push(mat);
        }
        Ok(Self { group: group.clone(), param: *param, mats })
    }

    pub fn max_degree(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn group(&self) -> &DihedralGroup {
        &self.group
    }

    pub fn param(&self) -> &ParameterK {
        &self.param
    }

    pub fn apply(&self, f: &Poly2) -> Result<Poly2> {
        let deg = f.effective_degree().unwrap_or(0);
        if deg > self.max_degree() {
            return Err(DunklError::Range(format!(
                "intertwiner tabulated up to degree {}, input has degree {deg}",
                self.max_degree()
            )));
        }
        let mut out = Poly2::zero(f.degree_bound());
        for m in 0..=deg {
            let v = apply_matrix(&self.mats[m], f.homogeneous_slice(m));
            out = &out + &Poly2::from_homogeneous(m, &v);
        }
        Ok(out)
    }

    /// `E_m(·, y)` as a homogeneous polynomial in `x`.
    pub fn em_poly(&self, y: &PlanePoint, m: usize) -> Result<Poly2> {
        let fact: f64 = (1..=m).map(|i| i as f64).product();
        Ok(self.apply(&Poly2::linear(y).pow(m))?.scale(C64::new(1.0 / fact, 0.0)))
    }
}

fn apply_matrix(mat: &[Vec<C64>], v: &[C64]) -> Vec<C64> {
    mat.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `V_k f`.
pub fn intertwine(group: &DihedralGroup, param: &ParameterK, f: &Poly2) -> Result<Poly2> {
    let deg = f.effective_degree().unwrap_or(0);
    Intertwiner::new(group, param, deg)?.apply(f)
}

/// `E_m(x, y) = V_k(⟨·, y⟩^m)(x) / m!`.
pub fn oracle_em(group: &DihedralGroup, param: &ParameterK, x: &PlanePoint, y: &PlanePoint, m: usize) -> Result<C64> {
    Ok(Intertwiner::new(group, param, m)?.em_poly(y, m)?.eval(x))
}

/// `[E_0(x,y), ..., E_M(x,y)]` from one tabulated intertwiner.
pub fn oracle_em_sequence(
    group: &DihedralGroup,
    param: &ParameterK,
    x: &PlanePoint,
    y: &PlanePoint,
    max_m: usize,
) -> Result<Vec<C64>> {
    let v = Intertwiner::new(group, param, max_m)?;
    (0..=max_m).map(|m| Ok(v.em_poly(y, m)?.eval(x))).collect()
}
