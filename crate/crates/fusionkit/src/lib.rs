//! Fusion rings of level-quantised loop-group representations, computed two
//! independent ways (affine Weyl folding of classical tensor products, and
//! character evaluation at distinguished torus points), plus the transport
//! and braiding matrices of the associated first-order complex ODEs.

pub mod braiding;
pub mod error;
pub mod fusionring;
pub mod numerics;
pub mod repcore;
pub mod symchar;
pub mod transport;

pub use error::{Error, Result};
pub use repcore::{LevelContext, Signature};
