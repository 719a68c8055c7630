//! Residues of differentials over local artinian rings, and contractions of
//! centrally aligned genus-one nodal curves.
//!
//! The crate is organised bottom-up:
//!
//! - [`artin`]: local artinian rings `k[u_1..u_r]/I` over `Q` or `F_p`;
//! - [`laurent`]: truncated Laurent series `A((x))`, differentials, residues,
//!   substitution and pullback along continuous automorphisms;
//! - [`resinv`]: the algorithms certifying that residues are coordinate
//!   independent (formal logarithm, nil-unit splitting, `p^{-n} d` calculus);
//! - [`tropical`]: dual graphs with monoid edge lengths, the radius function,
//!   central alignment, layers and semistable modification;
//! - [`contract`]: twisted residues, the residue condition and lifting
//!   through the artinian tower;
//! - [`singular`]: delta invariant, branch count, genus and classification
//!   of the contracted singularity;
//! - [`scenario`] and [`battery`]: file formats and the self-test battery
//!   used by the command line tool.

pub mod artin;
pub mod battery;
pub mod contract;
pub mod error;
pub mod field;
pub mod laurent;
pub mod linalg;
pub mod resinv;
pub mod scenario;
pub mod singular;
pub mod tropical;

pub use error::{Error, Result};
