//! Interpolation determinants, their upper and lower bounds, and the
//! choice of interpolating hypersurfaces.

pub mod basis;
pub mod bounds;
pub mod det;
pub mod hypersurface;
pub mod linalg;

pub use basis::{monomial_count, mu, MonomialBasis};
pub use bounds::{lower_bound, upper_bound_curve, upper_bound_general, vanishing_forced};
pub use det::{interp_det, monomial_row_exact, poly_interp_det, DetEnclosure, DetSign};
pub use linalg::det_rational;
pub use hypersurface::{select_hypersurface, Hypersurface, Selection};
