//! Weierstrass division, root counting on polydiscs, monomial co-ideals and
//! decomposition data.

pub mod coideal;
pub mod datum;
pub mod division;
pub mod winding;

pub use coideal::{coideal_contains, coideal_dim, e_constant, e_constant_witness, hilbert_samuel, CoIdeal};
pub use datum::{decompose, monomial_probes, tail_bound, verify_norm_constant, Decomposition, DecompositionDatum, Presentation};
pub use division::{division_residual, residual_vanishes_through, weierstrass_division, Division, WeierstrassPolynomial};
pub use winding::{certify_weierstrass_polydisc, WindingCertificate};
