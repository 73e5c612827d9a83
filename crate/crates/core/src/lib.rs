//! Minkowski symmetrization of star-shaped and convex bodies.

pub mod error;
pub mod geom;
pub mod oracle;
pub mod pipeline;
pub mod schedule;
pub mod star2d;
pub mod support;

pub use error::{Error, Result};
pub use geom::{reflect, random_direction, sphere_quadrature, Direction, Point, SeedStream, SphereQuadrature};
pub use star2d::{minkowski_sum, symmetral, GridAngle, RasterSum, StarBody2D};
pub use support::{IntervalBody, SupportBody, SupportSymmetral};
pub use pipeline::{run_theorem, LemmaParams, Phase, PipelineConfig, RunFailure, RunReport, StepRecord};
pub use schedule::{StopRule, Strategy, StrategyKind};
