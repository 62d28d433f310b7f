//! Stochastic-geometry simulation of IRS-assisted cellular downlinks.
//!
//! Base stations, users and intelligent reflecting surfaces (IRSs) are
//! homogeneous Poisson point processes in the plane. A typical user sits at
//! the origin. The crate draws network realizations, computes the exact
//! conditional signal and interference powers at the typical user, runs
//! Monte-Carlo ensembles over those powers, and evaluates closed-form
//! bounds on their means and tails.
//!
//! Module map:
//!
//! * [`params`] - validated system and bound parameters.
//! * [`geometry`] - point processes, distances, lens areas, Campbell checks.
//! * [`channel`] - Rician link draws, directivity gains, IRS phase alignment.
//! * [`scenario`] - one network realization and its conditional powers.
//! * [`montecarlo`] - deterministic parallel ensembles and sweeps.
//! * [`bounds`] - closed-form power, tail and outage bounds.
//! * [`rng`] - keyed random streams shared by all of the above.

pub mod bounds;
pub mod channel;
pub mod geometry;
pub mod montecarlo;
pub mod params;
pub mod rng;
pub mod scenario;

pub use bounds::{BoundBreakdown, BoundError};
pub use geometry::{NodeKind, Point2, PointSet};
pub use montecarlo::{EnsembleStats, PowerSample};
pub use params::{BoundParams, ParamError, SystemParams, ValidatedParams};
pub use scenario::Scenario;
