//! Stage II: the VO's advertising price, its revenues, and its Wi-Fi price as
//! a best response to the platform's sharing ratio.
//!
//! Prices are parameterized internally by the log discount
//! `L = ln(a * gamma / p_a)`, which keeps the optimal price exact when `L` is
//! a closed-form expression.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{access_split, log_discount, sigma_threshold, sponsored_audience};
use crate::params::MarketParams;

/// Which case of the finite-market optimal advertising price applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdPriceBranch {
    /// The capacity `lambda * N * phi_a` binds while some ADs stay inactive.
    CapacityBound,
    /// Every AD is active and the capacity binds.
    FiniteCaseB1,
    /// Every AD is active and the capacity is slack.
    FiniteCaseB3,
    /// Some ADs stay inactive and the capacity is slack.
    Unconstrained,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdPriceRegime {
    pub regime: AdPriceBranch,
    pub price: f64,
    /// `ln(a * gamma / price)`.
    pub log_discount: f64,
}

impl AdPriceRegime {
    fn from_log_discount(regime: AdPriceBranch, log_discount: f64, params: &MarketParams) -> Self {
        AdPriceRegime {
            regime,
            price: params.a() * params.gamma() * (-log_discount).exp(),
            log_discount,
        }
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && (0.0..=1.0).contains(&delta) {
        Ok(())
    } else {
        Err(Error::invalid(
            "delta",
            format!("sharing ratio must lie in [0, 1], got {delta}"),
        ))
    }
}

/// Total ad spaces sold given the log discount `l`, valid for either market mode.
pub(crate) fn spaces_sold_at(l: f64, p_f: f64, params: &MarketParams) -> f64 {
    let gamma = params.gamma();
    let audience = sponsored_audience(p_f, params);
    if l <= 0.0 || audience <= 0.0 {
        return 0.0;
    }
    match (params.ads(), params.sigma_max()) {
        (Ok(m), Ok(sigma_max)) => {
            let t = (l / gamma).min(sigma_max);
            m * audience / sigma_max * (l * t - 0.5 * gamma * t * t)
        }
        _ => params.eta() * audience * l * l / (2.0 * gamma),
    }
}

/// Expected number of ad spaces sold to all ADs in a finite market.
pub fn total_ad_spaces_sold(p_a: f64, p_f: f64, params: &MarketParams) -> Result<f64> {
    if !params.is_finite() {
        return Err(Error::RequiresFiniteMode("total_ad_spaces_sold"));
    }
    sigma_threshold(p_a, params)?;
    Ok(spaces_sold_at(log_discount(p_a, params), p_f, params))
}

/// Ad spaces sold in either mode; the asymptotic market uses density `eta` on `[0, inf)`.
pub fn ad_spaces_sold(p_a: f64, p_f: f64, params: &MarketParams) -> Result<f64> {
    sigma_threshold(p_a, params)?;
    Ok(spaces_sold_at(log_discount(p_a, params), p_f, params))
}

/// The VO's share of advertising revenue, `(1 - delta) * p_a * Q`.
pub fn vo_ad_revenue(p_f: f64, p_a: f64, delta: f64, params: &MarketParams) -> Result<f64> {
    check_delta(delta)?;
    Ok((1.0 - delta) * p_a * ad_spaces_sold(p_a, p_f, params)?)
}

/// Log discount of the finite-market optimum and its case.
pub(crate) fn finite_log_discount(params: &MarketParams) -> Result<(AdPriceBranch, f64)> {
    let m = params.ads()?;
    let sigma_max = params.sigma_max()?;
    let r = params.lambda() / m;
    let h = params.gamma() * sigma_max / 2.0;
    Ok(if r <= h.min(1.0).min(1.0 / h) {
        (AdPriceBranch::CapacityBound, (4.0 * r * h).sqrt())
    } else if h < r && r <= 1.0 {
        (AdPriceBranch::FiniteCaseB1, h + r)
    } else if h < 1.0 && 1.0 < r {
        (AdPriceBranch::FiniteCaseB3, h + 1.0)
    } else {
        (AdPriceBranch::Unconstrained, 2.0)
    })
}

/// Revenue-maximizing advertising price in a finite market with capacity constraint.
pub fn optimal_ad_price_finite(params: &MarketParams) -> Result<AdPriceRegime> {
    let (branch, l) = finite_log_discount(params)?;
    Ok(AdPriceRegime::from_log_discount(branch, l, params))
}

/// `lambda <= 2 eta / gamma` selects the capacity-bound asymptotic regime.
pub fn small_lambda_regime(params: &MarketParams) -> bool {
    params.lambda() * params.gamma() <= 2.0 * params.eta()
}

pub(crate) fn asymptotic_log_discount(params: &MarketParams) -> f64 {
    if small_lambda_regime(params) {
        (2.0 * params.lambda() * params.gamma() / params.eta()).sqrt()
    } else {
        2.0
    }
}

/// Optimal advertising price for the asymptotic market, with its log discount.
pub fn asymptotic_ad_price(params: &MarketParams) -> Result<AdPriceRegime> {
    if params.eta() == 0.0 {
        return Err(Error::EmptyMarket);
    }
    let branch = if small_lambda_regime(params) {
        AdPriceBranch::CapacityBound
    } else {
        AdPriceBranch::Unconstrained
    };
    Ok(AdPriceRegime::from_log_discount(
        branch,
        asymptotic_log_discount(params),
        params,
    ))
}

pub fn optimal_ad_price_asymptotic(params: &MarketParams) -> Result<f64> {
    Ok(asymptotic_ad_price(params)?.price)
}

/// Advertising revenue per sponsored MU per unit of `a` at the asymptotic optimum.
pub fn g_function(params: &MarketParams) -> f64 {
    let (lambda, gamma, eta) = (params.lambda(), params.gamma(), params.eta());
    if eta == 0.0 {
        0.0
    } else if small_lambda_regime(params) {
        lambda * gamma * (-(2.0 * lambda * gamma / eta).sqrt()).exp()
    } else {
        2.0 * eta * (-2.0f64).exp()
    }
}

/// Expected number of active ADs at the asymptotic optimal price.
pub fn active_ad_count(params: &MarketParams) -> f64 {
    let (lambda, gamma, eta) = (params.lambda(), params.gamma(), params.eta());
    if small_lambda_regime(params) {
        (2.0 * lambda * eta / gamma).sqrt()
    } else {
        2.0 * eta / gamma
    }
}

/// `lambda * p_f * N * phi_f(p_f)`.
pub fn vo_premium_revenue(p_f: f64, params: &MarketParams) -> f64 {
    params.lambda() * p_f * params.n() * access_split(p_f, params).phi_f
}

/// The same revenue written as `lambda * beta * theta_max * N * phi_f * phi_a`.
pub fn vo_premium_revenue_split_form(p_f: f64, params: &MarketParams) -> f64 {
    let s = access_split(p_f, params);
    params.lambda() * params.beta() * params.theta_max() * params.n() * s.phi_f * s.phi_a
}

/// Premium revenue plus the VO's share of asymptotic-optimal advertising revenue.
pub fn vo_total_revenue(p_f: f64, delta: f64, params: &MarketParams) -> Result<f64> {
    check_delta(delta)?;
    let phi_a = access_split(p_f, params).phi_a;
    Ok(vo_premium_revenue(p_f, params)
        + (1.0 - delta) * params.a() * params.n() * g_function(params) * phi_a)
}

/// The VO's best-response Wi-Fi price to sharing ratio `delta`.
pub fn optimal_wifi_price(delta: f64, params: &MarketParams) -> Result<f64> {
    check_delta(delta)?;
    let half = 0.5 * params.beta() * params.theta_max();
    let ad_pull = (1.0 - delta) * params.a() * g_function(params) / (2.0 * params.lambda());
    Ok(half + ad_pull.min(half))
}
