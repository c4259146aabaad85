//! Reconstruction of `N` from remainders carrying small errors.
//!
//! Two independent routes are provided for the `d*m_i` moduli family:
//! quotient recovery ([`reconstruct_quotient`], with the original two-stage
//! variant in [`reconstruct_wang_xia`]) and extreme residue statistics
//! ([`reconstruct_extremes`]). [`general`] handles arbitrary moduli whose
//! pairwise gcds differ.

mod extremes;
pub mod general;
mod quotient;
mod stats;

use std::fmt;

use crate::error::{CrtError, Result};
use crate::exact::RobustModuliSet;
use crate::scalar::Int;

pub use extremes::reconstruct_extremes;
pub use general::{build_general, general_recover_quotient, GeneralModuliSet, GeneralRecovery};
pub use quotient::{
    quotient_via_congruence, reconstruct_quotient, reconstruct_wang_xia, WangXiaTables,
};
pub use stats::{compute_stats, ExtremeStats};

/// Observed remainders, clamped into `[0, d*m_i)` on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation<'a, T> {
    mods: &'a RobustModuliSet<T>,
    rbar: Vec<T>,
    clamped: bool,
}

impl<'a, T: Int> Observation<'a, T> {
    /// Values `>= d*m_i` become `d*m_i - 1`, negatives become 0.
    pub fn new(mods: &'a RobustModuliSet<T>, rbar: Vec<T>) -> Result<Self> {
        if rbar.len() != mods.len() {
            return Err(CrtError::LengthMismatch {
                expected: mods.len(),
                got: rbar.len(),
            });
        }
        let mut clamped = false;
        let rbar = rbar
            .into_iter()
            .zip(mods.full_moduli())
            .map(|(r, full)| {
                let (v, c) = clamp(r, full);
                clamped |= c;
                v
            })
            .collect();
        Ok(Self {
            mods,
            rbar,
            clamped,
        })
    }

    pub fn mods(&self) -> &'a RobustModuliSet<T> {
        self.mods
    }

    pub fn rbar(&self) -> &[T] {
        &self.rbar
    }

    /// Whether any input had to be clamped.
    pub fn clamped(&self) -> bool {
        self.clamped
    }
}

/// Clamps `r` into `[0, bound)`; reports whether it moved.
pub(crate) fn clamp<T: Int>(r: T, bound: &T) -> (T, bool) {
    if r.is_negative() {
        (T::zero(), true)
    } else if &r >= bound {
        (bound.clone() - T::one(), true)
    } else {
        (r, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Quotient,
    WangXia,
    Extremes,
    Generalized,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Quotient => "quotient",
            Method::WangXia => "wang_xia",
            Method::Extremes => "extremes",
            Method::Generalized => "generalized",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which path the algorithm took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    None,
    /// `2(alpha - beta) < d`
    LowSpread,
    /// `2(alpha - beta) >= d`
    HighSpread,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::None => "none",
            Branch::LowSpread => "low-spread",
            Branch::HighSpread => "high-spread",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Output of a reconstruction. `n_hat` is never clamped into `[0, dM)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction<T> {
    pub n_hat: T,
    pub method: Method,
    pub branch: Branch,
    pub q_hat: Option<Vec<T>>,
    pub gamma_hat: Option<Vec<T>>,
    /// `d*m_i*q_i + rbar_i` for each modulus.
    pub per_modulus: Option<Vec<T>>,
    pub n0_hat: Option<T>,
    pub stats: Option<ExtremeStats<T>>,
}
