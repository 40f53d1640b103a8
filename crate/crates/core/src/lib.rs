//! Certified evaluation of Bernstein-type bounds for the derivative and the
//! polar derivative `D_alpha p(z) = n p(z) + (alpha - z) p'(z)` of complex
//! polynomials with prescribed zero structure.

pub mod bounds;
pub mod error;
pub mod extrema;
pub mod poly;
pub mod report;
pub mod suite;
pub mod sweep;
pub mod verify;
pub mod zeros;

pub use bounds::{BoundId, BoundResult, CircleExtrema, Direction, Shape};
pub use error::{Error, Result};
pub use extrema::{angular_lipschitz_bound, max_modulus, min_modulus, ExtremumKind, ExtremumResult};
pub use poly::{PolarParameter, Polynomial};
pub use sweep::{OutputFormat, SweepConfig, SweepOutput};
pub use verify::{verify_instance, Status, Summary, Tolerance, Verification, VerificationRecord};
pub use zeros::{classify, roots, sample_instance, DistinguishedZero, Regime, ZeroPattern};
