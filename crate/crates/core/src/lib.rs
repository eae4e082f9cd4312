//! Cut-and-project model sets, weighted Dirac combs, and numerical checks of
//! their Fourier–Bohr series and transformability.

pub mod cps;
pub mod error;
pub mod fourier;
pub mod geometry;
pub mod io;
pub mod measures;
mod par;
pub mod profile;
pub mod quadrature;
pub mod svg;
pub mod test_function;
pub mod transformability;
pub mod verdict;
pub mod window;

pub use cps::{enumerate_points, CutProjectScheme, LatticePoint, DEFAULT_CELL_BUDGET};
pub use error::{Error, Result};
pub use fourier::{FourierBohrSeries, FrequencyAtom};
pub use geometry::AxisBox;
pub use measures::DiracComb;
pub use profile::Profile;
pub use quadrature::{QuadratureOptions, QuadratureResult};
pub use test_function::TestFunction;
pub use transformability::{sap_transformable, SapOptions, TransformabilityReport};
pub use verdict::{Evidence, Status, Verdict};
pub use window::WindowFunction;

pub use num_complex::Complex64;
