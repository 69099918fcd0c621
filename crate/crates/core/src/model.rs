//! Stage III: MU access choices and AD ad-space purchases at given prices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::MarketParams;

/// An MU's access choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccessChoice {
    /// `d = 0`: watch one ad per segment, utility discounted by `1 - beta`.
    Sponsored,
    /// `d = 1`: pay `p_f` per segment.
    Premium,
}

impl AccessChoice {
    pub fn as_index(self) -> u8 {
        match self {
            AccessChoice::Sponsored => 0,
            AccessChoice::Premium => 1,
        }
    }
}

/// Fractions of MUs on each access type under a Wi-Fi price.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccessSplit {
    pub phi_a: f64,
    pub phi_f: f64,
    pub theta_t: f64,
}

/// A type-sigma AD's best response to the VO's prices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdDecision {
    pub sigma: f64,
    pub m_star: f64,
    pub active: bool,
}

fn check_theta(theta: f64, params: &MarketParams) -> Result<()> {
    if theta.is_finite() && (0.0..=params.theta_max()).contains(&theta) {
        Ok(())
    } else {
        Err(Error::invalid(
            "theta",
            format!("must lie in [0, {}], got {theta}", params.theta_max()),
        ))
    }
}

fn check_nonneg(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be nonnegative, got {v}"),
        ))
    }
}

/// Per-segment payoff of a type-theta MU.
pub fn mu_payoff(theta: f64, choice: AccessChoice, p_f: f64, params: &MarketParams) -> Result<f64> {
    check_theta(theta, params)?;
    check_nonneg("p_f", p_f)?;
    Ok(match choice {
        AccessChoice::Sponsored => theta * (1.0 - params.beta()),
        AccessChoice::Premium => theta - p_f,
    })
}

/// `theta_T(p_f) = min(p_f / beta, theta_max)`.
pub fn threshold_mu_type(p_f: f64, params: &MarketParams) -> f64 {
    if p_f >= params.beta() * params.theta_max() {
        params.theta_max()
    } else {
        (p_f / params.beta()).min(params.theta_max())
    }
}

/// Premium iff `theta >= theta_T`; the threshold type itself takes premium.
pub fn mu_access_choice(theta: f64, p_f: f64, params: &MarketParams) -> Result<AccessChoice> {
    check_theta(theta, params)?;
    check_nonneg("p_f", p_f)?;
    Ok(if theta >= threshold_mu_type(p_f, params) {
        AccessChoice::Premium
    } else {
        AccessChoice::Sponsored
    })
}

pub fn access_split(p_f: f64, params: &MarketParams) -> AccessSplit {
    let theta_t = threshold_mu_type(p_f.max(0.0), params);
    let phi_a = theta_t / params.theta_max();
    AccessSplit {
        phi_a,
        phi_f: 1.0 - phi_a,
        theta_t,
    }
}

/// Expected number of MUs on sponsored access, `N * phi_a(p_f)`.
pub fn sponsored_audience(p_f: f64, params: &MarketParams) -> f64 {
    params.n() * access_split(p_f, params).phi_a
}

/// `s(sigma) = gamma * exp(-gamma * sigma)`.
pub fn ad_popularity(sigma: f64, params: &MarketParams) -> f64 {
    let g = params.gamma();
    g * (-g * sigma).exp()
}

/// Probability that a sponsored segment shows a given AD that bought `m` spaces.
pub fn display_probability(m: f64, p_f: f64, params: &MarketParams) -> Result<f64> {
    check_nonneg("m", m)?;
    if m == 0.0 {
        return Ok(0.0);
    }
    let audience = sponsored_audience(p_f, params);
    if audience <= 0.0 {
        return Err(Error::DegenerateMarket);
    }
    Ok(m / (params.lambda() * audience))
}

/// Probability that a sponsored MU sees the AD at least once:
/// `1 - exp(-m / (N phi_a))`, the closed form of the Poisson mixture.
pub fn view_probability(m: f64, p_f: f64, params: &MarketParams) -> Result<f64> {
    check_nonneg("m", m)?;
    let audience = sponsored_audience(p_f, params);
    if audience <= 0.0 {
        return Err(Error::DegenerateMarket);
    }
    Ok(-(-m / audience).exp_m1())
}

/// Revenue minus payment of a type-sigma AD buying `m` spaces.
pub fn ad_payoff(sigma: f64, m: f64, p_f: f64, p_a: f64, params: &MarketParams) -> Result<f64> {
    check_nonneg("p_a", p_a)?;
    let nu = view_probability(m, p_f, params)?;
    let audience = sponsored_audience(p_f, params);
    Ok(params.a() * audience * ad_popularity(sigma, params) * nu - p_a * m)
}

/// Gross advertising benefit of the AD, without its payment.
pub(crate) fn ad_gross_benefit(sigma: f64, m: f64, p_f: f64, params: &MarketParams) -> Result<f64> {
    ad_payoff(sigma, m, p_f, 0.0, params)
}

fn check_ad_price(p_a: f64) -> Result<()> {
    if p_a.is_finite() && p_a > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "p_a",
            format!("must be positive, got {p_a}"),
        ))
    }
}

/// `ln(a gamma / p_a)`, clamped at zero when nobody buys.
pub(crate) fn log_discount(p_a: f64, params: &MarketParams) -> f64 {
    (params.a() * params.gamma() / p_a).ln().max(0.0)
}

/// Threshold AD type: only ADs with `sigma <= sigma_T(p_a)` buy.
pub fn sigma_threshold(p_a: f64, params: &MarketParams) -> Result<f64> {
    check_ad_price(p_a)?;
    let uncapped = log_discount(p_a, params) / params.gamma();
    Ok(match params.sigma_max() {
        Ok(sigma_max) => uncapped.min(sigma_max),
        Err(_) => uncapped,
    })
}

/// Optimal expected number of ad spaces bought by a type-sigma AD.
pub fn ad_optimal_quantity(sigma: f64, p_a: f64, p_f: f64, params: &MarketParams) -> Result<f64> {
    Ok(ad_decision(sigma, p_a, p_f, params)?.m_star)
}

pub fn ad_decision(sigma: f64, p_a: f64, p_f: f64, params: &MarketParams) -> Result<AdDecision> {
    check_nonneg("sigma", sigma)?;
    let threshold = sigma_threshold(p_a, params)?;
    let audience = sponsored_audience(p_f, params);
    let active = sigma <= threshold && audience > 0.0;
    let m_star = if active {
        (audience * (log_discount(p_a, params) - params.gamma() * sigma)).max(0.0)
    } else {
        0.0
    };
    Ok(AdDecision {
        sigma,
        m_star,
        active,
    })
}
