//! Equilibrium analysis of advertising-sponsored public Wi-Fi markets.
//!
//! A venue owner (VO) sells premium Wi-Fi access to mobile users (MUs) and ad
//! spaces to advertisers (ADs), sharing ad revenue with an ad platform. The game
//! is solved by backward induction:
//!
//! * [`model`]: MU access choice and AD purchases at given prices.
//! * [`pricing`]: the VO's advertising and Wi-Fi prices for a sharing ratio.
//! * [`platform`]: the platform's sharing ratio and the full equilibrium.
//! * [`welfare`]: social welfare at equilibrium.
//!
//! [`oracle`] holds brute-force maximizers that check the closed forms,
//! [`simulation`] samples agents, and [`experiments`] produces the sweep,
//! uniform-sharing and welfare datasets.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod params;
pub mod platform;
pub mod pricing;
pub mod rng;
pub mod simulation;
pub mod welfare;

pub use error::{Error, Result};
pub use model::{AccessChoice, AccessSplit, AdDecision};
pub use params::{MarketConfig, MarketMode, MarketParams};
pub use platform::{solve_equilibrium, EquilibriumOutcome, OmegaRegime};
pub use pricing::{AdPriceBranch, AdPriceRegime};
