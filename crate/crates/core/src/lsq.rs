//! Weighted linear least-squares gradient kernel.
//!
//! For a stencil with offsets `(Δx_k, Δy_k)` and weights `w_k = 1/d_k^p` the
//! gradient solves the 2×2 normal system
//!
//! ```text
//! | Σ w²Δx²   Σ w²ΔxΔy | |ux|   | Σ w²Δx Δu |
//! | Σ w²ΔxΔy  Σ w²Δy²  | |uy| = | Σ w²Δy Δu |
//! ```
//!
//! The inverse is applied once to the unit-impulse right-hand sides, giving
//! per-neighbor coefficients `(c^x_k, c^y_k)`, so a gradient is then a dot
//! product with the neighbor differences `Δu_k`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::stencil::Stencil;

/// Relative determinant threshold below which the normal matrix is singular.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

pub type Gradient = Vec2;

/// Distance weighting `w_k = 1/d_k^p`, restricted to `p ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Weighting {
    /// p = 0.
    #[default]
    Unweighted,
    /// p = 1.
    InverseDistance,
}

impl Weighting {
    pub fn from_exponent(p: u32) -> Result<Weighting> {
        match p {
            0 => Ok(Weighting::Unweighted),
            1 => Ok(Weighting::InverseDistance),
            _ => Err(Error::InvalidSpec("weight exponent p must be 0 or 1")),
        }
    }

    pub fn exponent(self) -> u32 {
        match self {
            Weighting::Unweighted => 0,
            Weighting::InverseDistance => 1,
        }
    }

    #[inline]
    pub fn weight(self, distance: f64) -> f64 {
        match self {
            Weighting::Unweighted => 1.0,
            Weighting::InverseDistance => 1.0 / distance,
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exponent())
    }
}

/// Symmetric 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    /// Frobenius norm squared, counting the off-diagonal entry twice.
    pub fn frobenius_sq(&self) -> f64 {
        self.xx * self.xx + 2.0 * self.xy * self.xy + self.yy * self.yy
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.frobenius_sq())
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let r = libm::hypot(0.5 * (self.xx - self.yy), self.xy);
        (mean - r, mean + r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsqSystem {
    pub weighting: Weighting,
    pub weights: Vec<f64>,
    pub normal: Sym2,
    /// `(c^x_k, c^y_k)` per neighbor, in stencil order.
    pub coefficients: Vec<Vec2>,
    /// 2-norm condition number of the normal matrix.
    pub condition: f64,
}

impl LsqSystem {
    pub fn build(stencil: &Stencil, weighting: Weighting) -> Result<LsqSystem> {
        let weights: Vec<f64> = stencil
            .distances
            .iter()
            .map(|&d| weighting.weight(d))
            .collect();
        let mut normal = Sym2::default();
        for (d, w) in stencil.offsets.iter().zip(&weights) {
            let w2 = w * w;
            normal.xx += w2 * d.x * d.x;
            normal.xy += w2 * d.x * d.y;
            normal.yy += w2 * d.y * d.y;
        }
        let det = normal.det();
        let frobenius_sq = normal.frobenius_sq();
        if !(det > SINGULAR_TOLERANCE * frobenius_sq) {
            return Err(Error::SingularStencil { det, frobenius_sq });
        }
        let inv = Sym2 {
            xx: normal.yy / det,
            xy: -normal.xy / det,
            yy: normal.xx / det,
        };
        let coefficients = stencil
            .offsets
            .iter()
            .zip(&weights)
            .map(|(d, w)| {
                let (bx, by) = (w * w * d.x, w * w * d.y);
                Vec2::new(inv.xx * bx + inv.xy * by, inv.xy * bx + inv.yy * by)
            })
            .collect();
        let (lo, hi) = normal.eigenvalues();
        Ok(LsqSystem {
            weighting,
            weights,
            normal,
            coefficients,
            condition: hi / lo,
        })
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Gradient from neighbor differences `Δu_k = u_k - u_j`.
    pub fn apply(&self, du: &[f64]) -> Result<Gradient> {
        if du.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: du.len(),
            });
        }
        Ok(self.apply_iter(du.iter().copied()))
    }

    /// Unchecked variant of [`apply`](Self::apply); extra items are ignored.
    #[inline]
    pub fn apply_iter(&self, du: impl IntoIterator<Item = f64>) -> Gradient {
        self.coefficients
            .iter()
            .zip(du)
            .fold(Vec2::ZERO, |acc, (c, d)| acc + *c * d)
    }
}

pub fn build_system(stencil: &Stencil, weighting: Weighting) -> Result<LsqSystem> {
    LsqSystem::build(stencil, weighting)
}

pub fn apply_gradient(system: &LsqSystem, du: &[f64]) -> Result<Gradient> {
    system.apply(du)
}
