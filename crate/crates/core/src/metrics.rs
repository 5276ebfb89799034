//! Error measures shared by the cross-checks.

use crate::dihedral::C64;

/// `|a - b| / max(|a|, |b|)`, or `0` when both vanish.
pub fn rel_error(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Relative error with the denominator floored at `floor`.
///
/// Components can cancel far below their natural size
/// `a^m / |(1+γ)_m|`; passing that size as `floor` keeps the comparison
/// meaningful near such zeros.
pub fn scaled_error(a: C64, b: C64, floor: f64) -> f64 {
    let scale = a.norm().max(b.norm()).max(floor);
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Natural sizes `a^m / |(1+γ)_m|` for `m = 0..=max_m`.
pub fn component_scales(gamma: C64, a_bound: f64, max_m: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_m + 1);
    let mut s = 1.0;
    out.push(s);
    for m in 1..=max_m {
        s *= a_bound / (gamma + m as f64).norm();
        out.push(s);
    }
    out
}
