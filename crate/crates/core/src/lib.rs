//! Congruence-class counts for the joint distribution of the major index and
//! the inverse major index over the symmetric groups `S_n`.
//!
//! The entry `m_n^{k,l}(i, j)` counts permutations `π ∈ S_n` with
//! `maj π ≡ i (mod k)` and `maj π⁻¹ ≡ j (mod l)`. This crate computes those
//! matrices by exhaustive enumeration, by standard Young tableaux, and by
//! closed forms where they exist, and cross-checks the three.
//!
//! Modules:
//!
//! - [`perm`]: permutations and the statistics `maj`, `inv`, `imaj`.
//! - [`enumerate`]: rank-addressed enumeration of `S_n` and the counting kernel.
//! - [`residue`]: exact count matrices and their structural operations.
//! - [`bijections`]: the cyclic-shift map `f_l`, its lift `g`, prefix-max orbits.
//! - [`shuffles`]: restricted shuffles and their weights.
//! - [`closed_forms`]: divisor-sum and prime/prime-power formulas, `p = 2` recursions.
//! - [`syt`]: standard Young tableaux and the tableau-side count matrix.
//! - [`verify`]: the parameterized theorem-check runner.

pub mod bijections;
pub mod closed_forms;
pub mod enumerate;
pub mod error;
pub mod perm;
pub mod pool;
pub mod residue;
pub mod shuffles;
pub mod syt;
pub mod verify;

pub use enumerate::{factorial, JointDistribution, Permutations, RankRange, HARD_LIMIT};
pub use error::{Error, Result};
pub use perm::{Permutation, StatPair};
pub use pool::Workers;
pub use residue::ResidueMatrix;
