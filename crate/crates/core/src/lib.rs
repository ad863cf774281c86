//! Tight `p`-fusion frames in `R^d`: weighted collections of subspaces whose
//! power form `Σ ω_j ||P_j x||^{2p}` is a multiple of `||x||^{2p}`.
//!
//! The crate covers subspace geometry ([`gram`]), exact tightness
//! certificates ([`frame`]), the frame potential and its lower bounds
//! ([`potential`]), Grassmannian moments and cubature checks ([`moments`]),
//! constructions from groups, extensions and complex designs
//! ([`constructions`]), and numerical search for minimizers ([`optimizer`]).

pub mod constructions;
pub mod error;
pub mod frame;
pub mod gram;
pub mod io;
pub mod jacobi;
pub mod moments;
pub mod optimizer;
pub mod poly;
pub mod potential;
pub mod quadrature;
pub mod special;

pub use error::{FrameError, Result};
pub use frame::{certify_tight, FrameEntry, TightnessCertificate, WeightedFrame};
pub use gram::Subspace;
