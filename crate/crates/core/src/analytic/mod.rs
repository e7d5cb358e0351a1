//! Analytic functions on polydiscs: exact polynomials, Taylor models with
//! remainder bounds, the built-in function library, and domain rescaling.

pub mod handle;
pub mod model;
pub mod poly;
pub mod polydisc;
pub mod roots;

pub use handle::FunctionHandle;
pub use model::TaylorModel;
pub use poly::{Multi, Poly, PolyDisplay};
pub use polydisc::{Polydisc, RealBox};

/// Default truncation order for scenario models.
pub const DEFAULT_ORDER: u32 = 24;
