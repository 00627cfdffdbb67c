//! Sum-capacity bounds for the two-user Gaussian interference channel.
//!
//! The crate evaluates the classic lower and upper bounds, decides the
//! low-interference regime where treating interference as noise is optimal,
//! builds the genie that certifies it, and checks all of this against
//! independent numerical oracles.

// Comparisons are written as `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channel;
pub mod cli;
pub mod error;
pub mod format;
pub mod gaussmi;
pub mod geometry;
pub mod montecarlo;
pub mod regime;
pub mod verify;

pub use bounds::{all_bounds, BoundSet};
pub use channel::{db_to_linear, linear_to_db, make_symmetric, ChannelParams, Rate};
pub use error::{Error, Result};
pub use regime::{GenieSpec, RegimeKind, RegimeLabel};
