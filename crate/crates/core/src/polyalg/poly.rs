use std::ops::{Add, Mul, Neg, Sub};

use crate::dihedral::{Mat2, PlanePoint, C64};
use crate::error::{DunklError, Result};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Dense bivariate polynomial with complex coefficients.
///
/// Coefficients are stored graded by total degree: the monomial
/// `x1^a x2^b` with `a + b = m` lives at `m(m+1)/2 + b`, so every
/// homogeneous component is a contiguous slice indexed by the power of `x2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    degree: usize,
    coeffs: Vec<C64>,
}

#[inline]
fn offset(m: usize) -> usize {
    m * (m + 1) / 2
}

impl Poly2 {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: vec![ZERO; offset(degree + 1)] }
    }

    pub fn constant(c: C64) -> Self {
        Self { degree: 0, coeffs: vec![c] }
    }

    pub fn monomial(a: usize, b: usize, c: C64) -> Self {
        let mut p = Self::zero(a + b);
        p.coeffs[offset(a + b) + b] = c;
        p
    }

    /// `y1·x1 + y2·x2`.
    pub fn linear(y: &PlanePoint) -> Self {
        Self { degree: 1, coeffs: vec![ZERO, y.x1, y.x2] }
    }

    /// Builds a homogeneous polynomial of degree `m` from its `m+1`
    /// coefficients, ordered by the power of `x2`.
    pub fn from_homogeneous(m: usize, coeffs: &[C64]) -> Self {
        assert_eq!(coeffs.len(), m + 1);
        let mut p = Self::zero(m);
        p.coeffs[offset(m)..].copy_from_slice(coeffs);
        p
    }

    /// Declared degree bound (coefficients up to this total degree are stored).
    pub fn degree_bound(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, a: usize, b: usize) -> C64 {
        let m = a + b;
        if m > self.degree {
            ZERO
        } else {
            self.coeffs[offset(m) + b]
        }
    }

    pub fn coeff_mut(&mut self, a: usize, b: usize) -> &mut C64 {
        let m = a + b;
        if m > self.degree {
            self.raise_degree(m);
        }
        &mut self.coeffs[offset(m) + b]
    }

    /// Coefficients of the degree-`m` component, ordered by the power of `x2`.
    pub fn homogeneous_slice(&self, m: usize) -> &[C64] {
        &self.coeffs[offset(m)..offset(m + 1)]
    }

    pub fn homogeneous_part(&self, m: usize) -> Poly2 {
        if m > self.degree {
            return Poly2::zero(m);
        }
        Poly2::from_homogeneous(m, self.homogeneous_slice(m))
    }

    /// True when every coefficient outside degree `m` is exactly zero.
    pub fn is_homogeneous_of(&self, m: usize) -> bool {
        (0..=self.degree).filter(|&d| d != m).all(|d| self.homogeneous_slice(d).iter().all(|c| *c == ZERO))
    }

    /// Largest total degree carrying a nonzero coefficient.
    pub fn effective_degree(&self) -> Option<usize> {
        (0..=self.degree).rev().find(|&d| self.homogeneous_slice(d).iter().any(|c| *c != ZERO))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Poly2) -> f64 {
        (self - other).max_abs()
    }

    pub fn raise_degree(&mut self, degree: usize) {
        if degree > self.degree {
            self.coeffs.resize(offset(degree + 1), ZERO);
            self.degree = degree;
        }
    }

    pub fn scale(&self, s: C64) -> Poly2 {
        Poly2 { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn pow(&self, e: usize) -> Poly2 {
        let mut acc = Poly2::constant(C64::new(1.0, 0.0));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x1` (`var = 0`) or `x2` (`var = 1`).
    pub fn deriv(&self, var: usize) -> Poly2 {
        let mut out = Poly2::zero(self.degree.saturating_sub(1));
        for m in 1..=self.degree {
            let src = self.homogeneous_slice(m);
            for b in 0..=m {
                let a = m - b;
                let c = src[b];
                match var {
                    0 if a > 0 => *out.coeff_mut(a - 1, b) += c * a as f64,
                    1 if b > 0 => *out.coeff_mut(a, b - 1) += c * b as f64,
                    0 | 1 => {}
                    _ => panic!("variable index must be 0 or 1"),
                }
            }
        }
        out
    }

    /// `ξ1 ∂1 f + ξ2 ∂2 f`.
    pub fn directional_deriv(&self, xi: &[f64; 2]) -> Poly2 {
        &self.deriv(0).scale(C64::new(xi[0], 0.0)) + &self.deriv(1).scale(C64::new(xi[1], 0.0))
    }

    /// `x ↦ f(M x)` for a real linear map `M`.
    pub fn compose_linear(&self, m: &Mat2) -> Poly2 {
        let mut out = Poly2::zero(self.degree);
        // New first coordinate m00 x1 + m01 x2, second m10 x1 + m11 x2.
        let l1 = [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)];
        let l2 = [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)];
        let p1 = linear_powers(&l1, self.degree);
        let p2 = linear_powers(&l2, self.degree);
        for d in 0..=self.degree {
            let src = self.homogeneous_slice(d);
            let dst = &mut out.coeffs[offset(d)..offset(d + 1)];
            for (b, &c) in src.iter().enumerate() {
                if c == ZERO {
                    continue;
                }
                let a = d - b;
                // (l1)^a (l2)^b, both homogeneous, indexed by the x2 power.
                for (i, u) in p1[a].iter().enumerate() {
                    let cu = c * u;
                    for (j, v) in p2[b].iter().enumerate() {
                        dst[i + j] += cu * v;
                    }
                }
            }
        }
        out
    }

    pub fn eval(&self, x: &PlanePoint) -> C64 {
        // Horner in the degree, then in x2/x1 within each component.
        let mut acc = ZERO;
        for d in (0..=self.degree).rev() {
            let s = self.homogeneous_slice(d);
            let mut h = ZERO;
            let mut x1p = C64::new(1.0, 0.0);
            // Σ_b c_b x1^{d-b} x2^b, evaluated as Σ_b c_b x2^b x1^{d-b}.
            for c in s.iter().rev() {
                h = h * x.x2 + c * x1p;
                x1p *= x.x1;
            }
            acc += h;
        }
        acc
    }

    /// Exact division by the linear form `α1·x1 + α2·x2`.
    ///
    /// Each homogeneous component is divided by synthetic division in the
    /// ratio of the two coordinates, pivoting on the larger of `|α1|, |α2|`.
    /// Returns the quotient and the largest remainder modulus encountered.
    pub fn divide_linear(&self, alpha: &[f64; 2]) -> Result<(Poly2, f64)> {
        let (p1, p2) = (alpha[0], alpha[1]);
        if p1 == 0.0 && p2 == 0.0 {
            return Err(DunklError::Domain("division by the zero linear form".into()));
        }
        let mut q = Poly2::zero(self.degree.saturating_sub(1));
        let mut worst = 0.0f64;
        worst = worst.max(self.homogeneous_slice(0)[0].norm());
        for m in 1..=self.degree {
            let c = self.homogeneous_slice(m);
            let mut quot = vec![ZERO; m];
            let rem;
            if p2.abs() >= p1.abs() {
                // P(t) = Σ c_b t^b with t = x2/x1; divide by α2 (t - t0).
                let t0 = -p1 / p2;
                let mut carry = c[m];
                for b in (1..=m).rev() {
                    quot[b - 1] = carry;
                    carry = c[b - 1] + carry * t0;
                }
                rem = carry;
                for v in quot.iter_mut() {
                    *v /= p2;
                }
            } else {
                // P(s) = Σ c_b s^{m-b} with s = x1/x2; divide by α1 (s - s0).
                let s0 = -p2 / p1;
                let mut carry = c[0];
                for a in (1..=m).rev() {
                    // coefficient of s^{a-1} in the quotient ↔ x1^{a-1} x2^{m-a}
                    quot[m - a] = carry;
                    carry = c[m - a + 1] + carry * s0;
                }
                rem = carry;
                for v in quot.iter_mut() {
                    *v /= p1;
                }
            }
            worst = worst.max(rem.norm());
            q.coeffs[offset(m - 1)..offset(m)].copy_from_slice(&quot);
        }
        Ok((q, worst))
    }
}

/// Powers `l^0..=l^max` of a linear form `l = l0 x1 + l1 x2`, each stored
/// as its homogeneous coefficient vector indexed by the power of `x2`.
fn linear_powers(l: &[C64; 2], max: usize) -> Vec<Vec<C64>> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(vec![C64::new(1.0, 0.0)]);
    for e in 1..=max {
        let prev: &Vec<C64> = &out[e - 1];
        let mut next = vec![ZERO; e + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i] += c * l[0];
            next[i + 1] += c * l[1];
        }
        out.push(next);
    }
    out
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        out.raise_degree(rhs.degree);
        for (o, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o += r;
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        out.raise_degree(rhs.degree);
        for (o, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o -= r;
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero(self.degree + rhs.degree);
        for d1 in 0..=self.degree {
            let s1 = self.homogeneous_slice(d1);
            for d2 in 0..=rhs.degree {
                let s2 = rhs.homogeneous_slice(d2);
                let base = offset(d1 + d2);
                for (i, u) in s1.iter().enumerate() {
                    if *u == ZERO {
                        continue;
                    }
                    for (j, v) in s2.iter().enumerate() {
                        out.coeffs[base + i + j] += u * v;
                    }
                }
            }
        }
        out
    }
}
