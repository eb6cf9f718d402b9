//! Simulation of intelligent-reflecting-surface (IRS) assisted downlink inside a
//! factory whose floor is littered with random screen blockages.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] builds the room, places the IRSs on the three walls around the
//!   blind spot and computes every distance and angle a link needs.
//! * [`blockage`] realizes random screen fields, counts link intersections and
//!   provides the analytic blockage statistics (mean counts, LOS probabilities,
//!   blockage-case weights).
//! * [`channel`] draws fading, configures IRS phases and evaluates SNR,
//!   finite-blocklength capacity and outage for one realization.
//! * [`analytic`] holds the high-density closed forms for the expected SNR and the
//!   Jensen bound on the expected finite-blocklength capacity.
//! * [`engine`] orchestrates the Monte Carlo estimation over UE grids with
//!   deterministic, thread-count independent random streams.

// Validation uses `!(x > 0.0)` so that NaN is rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod blockage;
pub mod channel;
pub mod engine;
mod error;
pub mod geometry;
pub mod special;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{FactoryLayout, IrsDeployment, LinkGeometry, Point3};
pub use blockage::{BlockageField, BlockageModel};
pub use channel::RadioConfig;
pub use engine::{EngineMode, MetricsReport, PointMetrics, SampleBudget, ScenarioConfig};
