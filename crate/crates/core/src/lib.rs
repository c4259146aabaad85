//! Generalized Chinese remainder solving and robust reconstruction from
//! erroneous remainders.
//!
//! The system `x = r_i (mod d*m_i)` with pairwise coprime `m_i` has a unique
//! solution in `[0, d*M)` when all `r_i` agree modulo `d`. When the observed
//! remainders carry errors smaller than `d/4` the solution can still be
//! approximated to within `d/4`; [`robust`] implements two algorithms that do
//! so, and [`sim`] checks the bound exhaustively and at scale, along with the
//! counterexample showing `d/4` cannot be enlarged.
//!
//! Everything is generic over [`Int`]. The aliases below fix the carrier to
//! `BigInt`, which is what the CLI uses.

pub mod error;
pub mod exact;
pub mod modular;
pub mod robust;
mod scalar;
pub mod sim;

use num_bigint::BigInt;

pub use error::{CrtError, Result};
pub use exact::{check_consistency, CleanInstance, RobustModuliSet};
pub use modular::{
    bezout_chain, crt_solve, extended_gcd, mod_least_nonneg, round_half, CoprimeModuliSet,
    SignedRatio,
};
pub use robust::{
    compute_stats, reconstruct_extremes, reconstruct_quotient, reconstruct_wang_xia, ExtremeStats,
    GeneralModuliSet, Observation, Reconstruction,
};
pub use scalar::Int;

pub type BigCoprimeModuliSet = CoprimeModuliSet<BigInt>;
pub type BigRobustModuliSet = RobustModuliSet<BigInt>;
pub type BigCleanInstance = CleanInstance<BigInt>;
pub type BigReconstruction = Reconstruction<BigInt>;
pub type BigGeneralModuliSet = GeneralModuliSet<BigInt>;
pub type BigRatio = SignedRatio<BigInt>;

/// Machine-word carrier for small sweeps.
pub type SmallRobustModuliSet = RobustModuliSet<i64>;
pub type SmallCoprimeModuliSet = CoprimeModuliSet<i64>;
