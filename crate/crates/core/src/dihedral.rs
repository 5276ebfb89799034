//! The dihedral group `D_n` acting on the plane.
//!
//! The plane is identified with `ℂ` through `z = x1 + i·x2`. With
//! `w = e^{iπ/n}` the rotations are `r^j: z ↦ z·w^{2j}` and the reflections
//! are `r^j σ: z ↦ z̄·w^{2j}`, `j = 0..n-1`. The positive roots are the unit
//! vectors identified with `i·w^j`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex;

use crate::error::{DunklError, Result};

pub type C64 = Complex<f64>;

/// A 2×2 real matrix acting on column vectors `(x1, x2)`.
pub type Mat2 = [[f64; 2]; 2];

/// A point of `ℂ²`. The `x` argument of the kernel is real; `y` may be complex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanePoint {
    pub x1: C64,
    pub x2: C64,
}

impl PlanePoint {
    pub fn new(x1: C64, x2: C64) -> Self {
        Self { x1, x2 }
    }

    pub fn real(a: f64, b: f64) -> Self {
        Self::new(C64::new(a, 0.0), C64::new(b, 0.0))
    }

    pub fn origin() -> Self {
        Self::real(0.0, 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.x1.im == 0.0 && self.x2.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    /// Euclidean (hermitian) norm.
    pub fn norm(&self) -> f64 {
        (self.x1.norm_sqr() + self.x2.norm_sqr()).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x1 * s, self.x2 * s)
    }

    pub fn add(&self, other: &PlanePoint) -> Self {
        Self::new(self.x1 + other.x1, self.x2 + other.x2)
    }

    /// Applies a real linear map.
    pub fn transform(&self, m: &Mat2) -> Self {
        Self::new(self.x1 * m[0][0] + self.x2 * m[0][1], self.x1 * m[1][0] + self.x2 * m[1][1])
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// Bilinear pairing `x1·y1 + x2·y2`. No complex conjugation is applied.
pub fn pairing(x: &PlanePoint, y: &PlanePoint) -> C64 {
    x.x1 * y.x1 + x.x2 * y.x2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Rotation,
    Reflection,
}

/// `r^index` or `r^index σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub kind: ElementKind,
    pub index: usize,
}

impl GroupElement {
    pub fn rotation(index: usize) -> Self {
        Self { kind: ElementKind::Rotation, index }
    }

    pub fn reflection(index: usize) -> Self {
        Self { kind: ElementKind::Reflection, index }
    }

    pub fn is_reflection(&self) -> bool {
        self.kind == ElementKind::Reflection
    }
}

#[derive(Clone, Debug)]
pub struct DihedralGroup {
    n: usize,
    rotation_angle: f64,
    positive_roots: Vec<[f64; 2]>,
    rotations: Vec<Mat2>,
    reflections: Vec<Mat2>,
}

impl DihedralGroup {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(DunklError::Domain(format!("dihedral order must be ≥ 2 (got n = {n})")));
        }
        let rotation_angle = 2.0 * PI / n as f64;
        let positive_roots = (0..n)
            .map(|j| {
                let t = j as f64 * PI / n as f64;
                [-t.sin(), t.cos()]
            })
            .collect();
        let rotations = (0..n).map(|j| rotation_matrix(n, j)).collect();
        let reflections = (0..n).map(|j| reflection_matrix(n, j)).collect();
        Ok(Self { n, rotation_angle, positive_roots, rotations, reflections })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rotation_angle(&self) -> f64 {
        self.rotation_angle
    }

    pub fn positive_roots(&self) -> &[[f64; 2]] {
        &self.positive_roots
    }

    /// All `2n` elements: rotations `r^0..r^{n-1}` followed by reflections.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.n).map(GroupElement::rotation).chain((0..self.n).map(GroupElement::reflection))
    }

    pub fn matrix(&self, g: GroupElement) -> &Mat2 {
        let j = g.index % self.n;
        match g.kind {
            ElementKind::Rotation => &self.rotations[j],
            ElementKind::Reflection => &self.reflections[j],
        }
    }

    pub fn act(&self, g: GroupElement, x: &PlanePoint) -> PlanePoint {
        x.transform(self.matrix(g))
    }

    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        match g.kind {
            ElementKind::Rotation => GroupElement::rotation((self.n - g.index % self.n) % self.n),
            ElementKind::Reflection => g,
        }
    }

    /// Orthogonal reflection through the line orthogonal to the unit root `alpha`.
    pub fn root_reflection(alpha: &[f64; 2]) -> Mat2 {
        [
            [1.0 - 2.0 * alpha[0] * alpha[0], -2.0 * alpha[0] * alpha[1]],
            [-2.0 * alpha[1] * alpha[0], 1.0 - 2.0 * alpha[1] * alpha[1]],
        ]
    }
}

fn rotation_matrix(n: usize, j: usize) -> Mat2 {
    let (s, c) = (2.0 * PI * j as f64 / n as f64).sin_cos();
    [[c, -s], [s, c]]
}

// z ↦ z̄·w^{2j}: conjugate, then rotate by 2jπ/n.
fn reflection_matrix(n: usize, j: usize) -> Mat2 {
    let (s, c) = (2.0 * PI * j as f64 / n as f64).sin_cos();
    [[c, s], [s, -c]]
}

/// The `2n` pairings `⟨g x, y⟩` together with `a(x,y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPairings {
    /// `⟨r^j x, y⟩`, `j = 0..n-1`.
    pub rot_pairings: Vec<C64>,
    /// `⟨r^j σ x, y⟩`, `j = 0..n-1`.
    pub refl_pairings: Vec<C64>,
    /// `max |⟨g x, y⟩|` over the whole group.
    pub a_bound: f64,
    /// Rotation pairings followed by reflection pairings.
    pub big_diag: Vec<C64>,
}

impl OrbitPairings {
    pub fn new(group: &DihedralGroup, x: &PlanePoint, y: &PlanePoint) -> Self {
        let n = group.order();
        let rot_pairings: Vec<C64> = (0..n).map(|j| pairing(&group.act(GroupElement::rotation(j), x), y)).collect();
        let refl_pairings: Vec<C64> = (0..n).map(|j| pairing(&group.act(GroupElement::reflection(j), x), y)).collect();
        let big_diag: Vec<C64> = rot_pairings.iter().chain(&refl_pairings).copied().collect();
        let a_bound = big_diag.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Self { rot_pairings, refl_pairings, a_bound, big_diag }
    }

    pub fn order(&self) -> usize {
        self.rot_pairings.len()
    }

    /// `⟨x, y⟩`.
    pub fn xy(&self) -> C64 {
        self.rot_pairings[0]
    }

    /// True when the rotation and reflection pairings coincide as multisets,
    /// which is the case whenever `x` or `y` is fixed by `σ`.
    pub fn is_sigma_symmetric(&self, tol: f64) -> bool {
        let eps = tol * self.a_bound.max(1.0);
        let mut used = vec![false; self.refl_pairings.len()];
        'outer: for c in &self.rot_pairings {
            for (j, d) in self.refl_pairings.iter().enumerate() {
                if !used[j] && (c - d).norm() <= eps {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

/// Convenience wrapper matching the other module-level operations.
pub fn orbit_pairings(group: &DihedralGroup, x: &PlanePoint, y: &PlanePoint) -> OrbitPairings {
    OrbitPairings::new(group, x, y)
}
