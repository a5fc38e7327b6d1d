//! Numeric kernels shared by the theory and simulation modules.
//!
//! Everything here is a pure function of its arguments.

mod quadrature;
mod roots;
mod special;

pub use quadrature::{integrate, EndpointWeight, QuadratureSpec};
pub use roots::{brent_root, Bracket};
pub use special::{erf, erf_inv, erfc, mills_ratio};
