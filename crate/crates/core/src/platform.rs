//! Stage I: the ad platform's sharing ratio and the full subgame-perfect
//! equilibrium.
//!
//! Everything at this stage is driven by the equilibrium indicator
//! `Omega = lambda * beta * theta_max / (a * g)`, the VO's relative benefit of
//! premium over sponsored access.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::access_split;
use crate::params::MarketParams;
use crate::pricing::{
    asymptotic_ad_price, check_delta, g_function, optimal_wifi_price, vo_ad_revenue,
    vo_premium_revenue,
};
use crate::welfare::social_welfare_closed;

/// Interval of `Omega` that selects the equilibrium sharing policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaRegime {
    /// `(0, epsilon]`
    OmegaTiny,
    /// `(epsilon, 1/3]`
    OmegaLow,
    /// `(1/3, 1 - 2 epsilon)`
    OmegaMid,
    /// `[1 - 2 epsilon, inf)`
    OmegaHigh,
}

impl OmegaRegime {
    pub fn classify(omega: f64, epsilon: f64) -> Self {
        if omega <= epsilon {
            OmegaRegime::OmegaTiny
        } else if omega <= 1.0 / 3.0 {
            OmegaRegime::OmegaLow
        } else if omega < 1.0 - 2.0 * epsilon {
            OmegaRegime::OmegaMid
        } else {
            OmegaRegime::OmegaHigh
        }
    }

    /// This regime's sharing formula, evaluated at any `omega`.
    pub fn sharing_formula(self, omega: f64, epsilon: f64) -> f64 {
        match self {
            OmegaRegime::OmegaTiny | OmegaRegime::OmegaHigh => 1.0 - epsilon,
            OmegaRegime::OmegaLow => 1.0 - omega,
            OmegaRegime::OmegaMid => 0.5 * (1.0 + omega),
        }
    }

    /// This regime's equilibrium Wi-Fi price in units of `beta * theta_max`.
    pub fn wifi_price_formula(self, omega: f64, epsilon: f64) -> f64 {
        match self {
            OmegaRegime::OmegaTiny | OmegaRegime::OmegaLow => 1.0,
            OmegaRegime::OmegaMid => 0.25 + 0.25 / omega,
            OmegaRegime::OmegaHigh => 0.5 + 0.5 * epsilon / omega,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OmegaRegime::OmegaTiny => "OmegaTiny",
            OmegaRegime::OmegaLow => "OmegaLow",
            OmegaRegime::OmegaMid => "OmegaMid",
            OmegaRegime::OmegaHigh => "OmegaHigh",
        }
    }
}

/// The full equilibrium of the three-stage game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumOutcome {
    pub omega: f64,
    pub regime: OmegaRegime,
    pub delta_star: f64,
    pub p_f_star: f64,
    pub p_a: f64,
    /// `ln(a * gamma / p_a)` at the equilibrium advertising price.
    pub ad_log_discount: f64,
    pub sigma_threshold: f64,
    pub g: f64,
    pub phi_a: f64,
    pub phi_f: f64,
    pub platform_revenue: f64,
    pub vo_ad_revenue: f64,
    pub vo_premium_revenue: f64,
    pub vo_total_revenue: f64,
    pub social_welfare: f64,
}

pub fn equilibrium_indicator(params: &MarketParams) -> Result<f64> {
    let g = g_function(params);
    if g <= 0.0 {
        return Err(Error::EmptyMarket);
    }
    Ok(params.lambda() * params.beta() * params.theta_max() / (params.a() * g))
}

pub fn omega_regime(params: &MarketParams) -> Result<OmegaRegime> {
    Ok(OmegaRegime::classify(
        equilibrium_indicator(params)?,
        params.epsilon(),
    ))
}

/// The platform's revenue-maximizing sharing ratio.
pub fn optimal_sharing(params: &MarketParams) -> Result<f64> {
    let omega = equilibrium_indicator(params)?;
    let eps = params.epsilon();
    Ok(OmegaRegime::classify(omega, eps).sharing_formula(omega, eps))
}

/// The VO's Wi-Fi price at equilibrium.
pub fn equilibrium_wifi_price(params: &MarketParams) -> Result<f64> {
    let omega = equilibrium_indicator(params)?;
    let eps = params.epsilon();
    let unit = OmegaRegime::classify(omega, eps).wifi_price_formula(omega, eps);
    Ok(unit * params.beta() * params.theta_max())
}

/// `delta * a * N * phi_a(p_f*(delta)) * g`.
pub fn platform_revenue(delta: f64, params: &MarketParams) -> Result<f64> {
    check_delta(delta)?;
    let p_f = optimal_wifi_price(delta, params)?;
    let phi_a = access_split(p_f, params).phi_a;
    Ok(delta * params.a() * params.n() * phi_a * g_function(params))
}

/// Solve all three stages by backward induction.
pub fn solve_equilibrium(params: &MarketParams) -> Result<EquilibriumOutcome> {
    if params.is_finite() {
        return Err(Error::RequiresAsymptoticMode("solve_equilibrium"));
    }
    let omega = equilibrium_indicator(params)?;
    let eps = params.epsilon();
    let regime = OmegaRegime::classify(omega, eps);
    let delta_star = regime.sharing_formula(omega, eps);
    let p_f_star = equilibrium_wifi_price(params)?;
    let ad = asymptotic_ad_price(params)?;
    let split = access_split(p_f_star, params);
    let g = g_function(params);

    let vo_ad = vo_ad_revenue(p_f_star, ad.price, delta_star, params)?;
    let vo_premium = vo_premium_revenue(p_f_star, params);
    let mut outcome = EquilibriumOutcome {
        omega,
        regime,
        delta_star,
        p_f_star,
        p_a: ad.price,
        ad_log_discount: ad.log_discount,
        sigma_threshold: ad.log_discount / params.gamma(),
        g,
        phi_a: split.phi_a,
        phi_f: split.phi_f,
        platform_revenue: delta_star * params.a() * params.n() * split.phi_a * g,
        vo_ad_revenue: vo_ad,
        vo_premium_revenue: vo_premium,
        vo_total_revenue: vo_ad + vo_premium,
        social_welfare: 0.0,
    };
    outcome.social_welfare = social_welfare_closed(params, &outcome);
    Ok(outcome)
}
