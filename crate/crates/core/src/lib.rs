//! Performance analysis of a V2V link assisted by a RIS near the transmitter
//! and an energy-splitting STAR-IOS near the receivers, under NOMA and OMA.
//!
//! * [`fading`]: Fisher-Snedecor F element amplitudes and the Gaussian
//!   approximation of their coherent sum.
//! * [`linkmodel`]: scenario configuration and instantaneous SINR/SNR maps.
//! * [`analytics`]: closed-form outage, capacity upper bounds and energy
//!   efficiency.
//! * [`montecarlo`]: the simulation those closed forms are checked against.

pub mod analytics;
pub mod error;
pub mod fading;
pub mod linkmodel;
pub mod montecarlo;
pub mod numerics;

pub use analytics::{CapacityReport, OutageReport, Thresholds};
pub use error::{Error, Result};
pub use fading::{AggregateStats, FadingParams};
pub use linkmodel::{
    Geometry, LinkBudget, LosHops, PowerConfig, Scheme, SurfaceConfig, SystemConfig, User,
};
pub use montecarlo::{MetricEstimate, VSample};
