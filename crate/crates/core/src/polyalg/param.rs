use std::fmt;

use crate::dihedral::C64;
use crate::error::{DunklError, Result};

/// Closest allowed approach of `2γ` to a negative integer.
pub const REGULARITY_TOL: f64 = 1e-12;

/// Constant multiplicity `k` on the `n` positive roots of `D_n`; `γ = n·k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParameterK {
    pub n: usize,
    pub k: C64,
    pub gamma: C64,
}

impl ParameterK {
    /// Validates the regularity guard: `2γ` must stay away from `-1, -2, -3, ...`.
    pub fn new(n: usize, k: C64) -> Result<Self> {
        if n < 2 {
            return Err(DunklError::Domain(format!("dihedral order must be ≥ 2 (got n = {n})")));
        }
        if !k.is_finite() {
            return Err(DunklError::Domain(format!("parameter k = {k} is not finite")));
        }
        let p = Self { n, k, gamma: k * n as f64 };
        if p.negative_integer_distance() <= REGULARITY_TOL {
            return Err(DunklError::Domain(format!(
                "γ = {} violates regularity: 2γ must not be a negative integer",
                fmt_c(p.gamma)
            )));
        }
        Ok(p)
    }

    pub fn real(n: usize, k: f64) -> Result<Self> {
        Self::new(n, C64::new(k, 0.0))
    }

    /// Distance from `2γ` to the set `{-1, -2, -3, ...}`.
    pub fn negative_integer_distance(&self) -> f64 {
        let t = self.gamma * 2.0;
        let j = t.re.round().min(-1.0);
        (t - C64::new(j, 0.0)).norm()
    }

    /// Smallest distance to a forbidden configuration of the series paths
    /// (negative-integer `2γ` or `γ = 0`).
    pub fn regularity_margin(&self) -> f64 {
        self.negative_integer_distance().min(self.gamma.norm())
    }

    pub fn is_zero(&self) -> bool {
        self.k == C64::new(0.0, 0.0)
    }

    /// Series-based paths divide by `γ`.
    pub fn require_nonzero_gamma(&self) -> Result<()> {
        if self.gamma.norm() <= REGULARITY_TOL {
            return Err(DunklError::Domain("γ = 0 is excluded from series paths (the kernel is then exp⟨x,y⟩)".into()));
        }
        Ok(())
    }
}

impl fmt::Display for ParameterK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n = {}, k = {}, γ = {}", self.n, fmt_c(self.k), fmt_c(self.gamma))
    }
}

pub(crate) fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// Rising factorials `(1+γ)_m`, `m = 0..=M`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pochhammer {
    pub gamma: C64,
    pub values: Vec<C64>,
}

impl Pochhammer {
    pub fn new(gamma: C64, max_m: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(max_m + 1);
        let mut p = C64::new(1.0, 0.0);
        values.push(p);
        for m in 0..max_m {
            p *= gamma + 1.0 + m as f64;
            if !p.is_finite() {
                return Err(DunklError::Range(format!(
                    "(1+γ)_{} overflows double precision; reduce the maximal degree",
                    m + 1
                )));
            }
            values.push(p);
        }
        Ok(Self { gamma, values })
    }

    pub fn get(&self, m: usize) -> C64 {
        self.values[m]
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularity_guard() {
        assert!(ParameterK::real(2, -0.75).is_err()); // 2γ = -3
        assert!(ParameterK::real(3, -0.5).is_err()); // 2γ = -3
        assert!(ParameterK::real(4, -0.125).is_err()); // 2γ = -1
        assert!(ParameterK::real(4, -0.1).is_ok());
        assert!(ParameterK::new(3, C64::new(-0.5, 0.01)).is_ok());
        assert!(ParameterK::real(3, 0.0).is_ok());
        let msg = ParameterK::real(3, -0.5).unwrap_err().to_string();
        assert!(msg.contains("γ = -1.5"), "{msg}");
    }

    #[test]
    fn zero_gamma_rejected_for_series() {
        let p = ParameterK::real(3, 0.0).unwrap();
        assert!(p.require_nonzero_gamma().is_err());
        assert!(ParameterK::real(3, 0.2).unwrap().require_nonzero_gamma().is_ok());
    }

    #[test]
    fn pochhammer_recurrence() {
        let g = C64::new(0.7, -0.3);
        let p = Pochhammer::new(g, 10).unwrap();
        assert_eq!(p.get(0), C64::new(1.0, 0.0));
        for m in 0..10 {
            assert_eq!(p.get(m + 1), p.get(m) * (g + 1.0 + m as f64));
        }
    }

    #[test]
    fn pochhammer_overflow_is_range_error() {
        let err = Pochhammer::new(C64::new(10.0, 0.0), 400).unwrap_err();
        assert!(matches!(err, DunklError::Range(_)));
    }
}
