//! Stationary-state large deviations of the open TASEP.
//!
//! The boundary-driven totally asymmetric exclusion process on an open
//! chain has a non-product stationary measure whose per-configuration
//! "energy" Y = -(1/L) log mu(eta) satisfies a large deviation principle.
//! This crate computes the limiting entropy S(E) and pressure P(theta)
//! in closed form for the two totally asymmetric specializations
//! (competitive: bulk drift against the reservoir flux; cooperative:
//! drift aligned with it) and verifies them against independent layers:
//!
//! * [`oracle`]: reduced variational optimizations and numerical
//!   Legendre transforms,
//! * [`exact`]: the exact matrix-product stationary measure at small
//!   sizes, cross-checked against a master-equation solve,
//! * [`sim`]: kinetic Monte Carlo at sizes beyond enumeration.
//!
//! The closed forms live in [`closed`]; the scalar building blocks
//! (Bernoulli entropy, equilibrium entropy/pressure, derived constants)
//! in [`scalar`]. [`report`] bundles the full verification suite.
//!
//! Energies are in nats per site; all logarithms are natural.

pub mod closed;
pub mod curve;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod params;
pub mod profile;
pub mod report;
pub mod scalar;
pub mod sim;

pub use curve::{Curve, Value};
pub use error::Error;
pub use params::{Direction, Params};
pub use profile::Profile;
