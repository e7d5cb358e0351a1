//! The covering pipeline: harvest rational points of bounded height,
//! subdivide, select one hypersurface per box, and separate the algebraic
//! part from the transcendental points.

pub mod cover;
pub mod descent;
pub mod harvest;
pub mod scenario;
pub mod sweep;

pub use cover::{cover, subdivide, CoverOptions, CoveringReport};
pub use descent::{dimension_descent, AlgebraicPartWitness, Classification, DescentReport};
pub use harvest::harvest_points;
pub use scenario::{resolve, Scenario, ScenarioKind, ScenarioRef};
pub use sweep::{family_summary, family_sweep, height_sweep, verify_epsilon_bound, EpsilonTable, FamilySweep};
