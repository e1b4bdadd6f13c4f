//! Exact measure, density and convergence computations on time scales.

pub mod companion;
pub mod convergence;
pub mod density;
pub mod equivalence;
pub mod error;
pub mod function;
pub mod gen;
pub mod input;
pub mod interval;
pub mod lemma;
pub mod measure;
pub mod oracle;
pub mod periodic;
pub mod rational;
pub mod set;
pub mod sparse;
pub mod timescale;

pub use companion::{companion_function, CompanionTrace};
pub use convergence::{delta_limit, is_delta_cauchy, CauchyVerdict, LimitVerdict};
pub use density::{complement_density, density, ratio_trajectory, DensityResult, RatioTrajectory};
pub use equivalence::{check_equivalence, EquivalenceReport};
pub use error::{Error, Result};
pub use function::{Rule, ScaleFunction};
pub use interval::{Interval, IntervalKind, IntervalUnion};
pub use measure::{measure, measure_interval, measure_singleton, MeasureValue};
pub use periodic::PeriodicSet;
pub use rational::{Rational, TimePoint};
pub use set::{DeltaSet, Piece};
pub use sparse::QuadraticFamily;
pub use timescale::{ScaleTail, TimeScale};
