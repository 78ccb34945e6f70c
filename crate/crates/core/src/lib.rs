//! Isometries of a symmetric non-degenerate bilinear form in any dimension
//! and signature, parametrized by simple bivectors; the links `L R = S`
//! selected by a preferred ray; and their Minkowski specialization to
//! observers, boosts and relative velocities.

pub mod check;
pub mod error;
pub mod groupoid;
pub mod isometry;
pub mod kinematics;
pub mod linker;
pub mod metric;

pub use error::{Error, Result};
pub use groupoid::{Groupoid, ObserverObject, VelocityMorphism};
pub use isometry::Isometry;
pub use kinematics::{Observer, Velocity3};
pub use linker::LinkProblem;
pub use metric::{Covector, Endomorphism, MetricSpace, Signature, SimpleBivector, Tolerance, Vector};
