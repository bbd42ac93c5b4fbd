//! Yang-Baxter maps, reflection maps, and their boundary refactorization
//! calculus on Hermitian projectors, complex projective space, and the
//! rational loop group, together with seeded numerical verification of the
//! defining identities (Yang-Baxter and reflection equations, involutivity,
//! and symplectomorphism checks by finite differences).
//!
//! The crate is organized bottom-up:
//!
//! - [`matrix`], [`linalg`]: dense complex arithmetic, projectors, Hermitian
//!   unitaries;
//! - [`simple`]: Blaschke-Potapov factors `g_{α,P}` and the boundary
//!   involution `σ`;
//! - [`yang_baxter`]: the pairwise refactorization solver and parametric
//!   Yang-Baxter maps;
//! - [`reflection`]: boundary refactorization and the reflection map `B`;
//! - [`projective`]: the rank-1 picture on CP^{n−1}, N-body polarization
//!   reflection, and the scattering map;
//! - [`loop_group`]: ordered products of factors, partial actions by
//!   refactorization, and loop-level reflection;
//! - [`symplectic`]: orbit and Fubini-Study 2-forms with finite-difference
//!   symplectomorphism checks;
//! - [`suites`]: the seeded verification suites and scatter runs behind the
//!   `reflectory` command-line tool.

pub mod error;
pub mod linalg;
pub mod loop_group;
pub mod matrix;
pub mod projective;
pub mod reflection;
pub mod rng;
pub mod simple;
pub mod suites;
pub mod symplectic;
pub mod tol;
pub mod yang_baxter;

pub use error::{Error, Result};
