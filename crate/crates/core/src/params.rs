//! Exogenous parameters of one venue's market.
//!
//! [`MarketConfig`] is the plain, serializable form read from JSON config
//! files. [`MarketParams`] is the validated form every solver takes; it can
//! only be obtained through [`MarketParams::new`], so downstream code never
//! re-checks ranges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default floor on the VO's retained advertising share.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Whether the advertiser population is finite (`M` ADs with types on
/// `[0, sigma_max]`) or the large-market limit characterised by `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MarketMode {
    Finite,
    #[default]
    Asymptotic,
}

/// Serializable parameter document. Field names are the lowercase names of
/// the model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketConfig {
    #[serde(default)]
    pub mode: MarketMode,
    pub n: f64,
    pub theta_max: f64,
    pub beta: f64,
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_max: Option<f64>,
    pub gamma: f64,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

impl MarketConfig {
    /// Baseline venue used throughout the numerical studies
    /// (N=200, theta_max=1, beta=0.1, eta=1, a=4, epsilon=0.01) at gamma=0.5, lambda=4.
    pub fn baseline() -> Self {
        MarketConfig {
            mode: MarketMode::Asymptotic,
            n: 200.0,
            theta_max: 1.0,
            beta: 0.1,
            lambda: 4.0,
            m: None,
            sigma_max: None,
            gamma: 0.5,
            a: 4.0,
            eta: Some(1.0),
            epsilon: DEFAULT_EPSILON,
        }
    }

    /// A finite-market document with `M` ADs and type support `[0, sigma_max]`.
    pub fn finite(mut self, m: f64, sigma_max: f64) -> Self {
        self.mode = MarketMode::Finite;
        self.m = Some(m);
        self.sigma_max = Some(sigma_max);
        self.eta = None;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum AdMarket {
    Finite { ads: f64, sigma_max: f64 },
    Asymptotic,
}

/// Validated market parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    n: f64,
    theta_max: f64,
    beta: f64,
    lambda: f64,
    gamma: f64,
    a: f64,
    eta: f64,
    epsilon: f64,
    ads: AdMarket,
}

fn positive(field: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::invalid(
            field,
            format!("must be a positive finite number, got {v}"),
        ))
    }
}

fn unit_interval(field: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(Error::invalid(
            field,
            format!("must lie in (0, 1], got {v}"),
        ))
    }
}

impl MarketParams {
    pub fn new(cfg: MarketConfig) -> Result<Self> {
        let n = positive("n", cfg.n)?;
        let theta_max = positive("theta_max", cfg.theta_max)?;
        let beta = unit_interval("beta", cfg.beta)?;
        let lambda = positive("lambda", cfg.lambda)?;
        let gamma = unit_interval("gamma", cfg.gamma)?;
        let a = positive("a", cfg.a)?;
        let epsilon = cfg.epsilon;
        if !(epsilon > 0.0 && epsilon < 1.0 / 3.0) {
            return Err(Error::invalid(
                "epsilon",
                format!("must lie in (0, 1/3), got {epsilon}"),
            ));
        }
        let (ads, eta) = match cfg.mode {
            MarketMode::Finite => {
                let m = cfg
                    .m
                    .ok_or_else(|| Error::invalid("m", "required in finite mode"))?;
                let sigma_max = cfg
                    .sigma_max
                    .ok_or_else(|| Error::invalid("sigma_max", "required in finite mode"))?;
                let m = positive("m", m)?;
                let sigma_max = positive("sigma_max", sigma_max)?;
                if cfg.eta.is_some() {
                    return Err(Error::invalid(
                        "eta",
                        "derived as m / sigma_max in finite mode; do not set it",
                    ));
                }
                (AdMarket::Finite { ads: m, sigma_max }, m / sigma_max)
            }
            MarketMode::Asymptotic => {
                if cfg.m.is_some() {
                    return Err(Error::invalid("m", "not allowed in asymptotic mode"));
                }
                if cfg.sigma_max.is_some() {
                    return Err(Error::invalid(
                        "sigma_max",
                        "not allowed in asymptotic mode",
                    ));
                }
                let eta = cfg
                    .eta
                    .ok_or_else(|| Error::invalid("eta", "required in asymptotic mode"))?;
                if !(eta.is_finite() && eta >= 0.0) {
                    return Err(Error::invalid(
                        "eta",
                        format!("must be a nonnegative finite number, got {eta}"),
                    ));
                }
                (AdMarket::Asymptotic, eta)
            }
        };
        Ok(MarketParams {
            n,
            theta_max,
            beta,
            lambda,
            gamma,
            a,
            eta,
            epsilon,
            ads,
        })
    }

    pub fn baseline() -> Self {
        MarketParams::new(MarketConfig::baseline()).expect("baseline parameters are valid")
    }

    pub fn to_config(&self) -> MarketConfig {
        let (mode, m, sigma_max, eta) = match self.ads {
            AdMarket::Finite { ads, sigma_max } => {
                (MarketMode::Finite, Some(ads), Some(sigma_max), None)
            }
            AdMarket::Asymptotic => (MarketMode::Asymptotic, None, None, Some(self.eta)),
        };
        MarketConfig {
            mode,
            n: self.n,
            theta_max: self.theta_max,
            beta: self.beta,
            lambda: self.lambda,
            m,
            sigma_max,
            gamma: self.gamma,
            a: self.a,
            eta,
            epsilon: self.epsilon,
        }
    }

    pub fn mode(&self) -> MarketMode {
        match self.ads {
            AdMarket::Finite { .. } => MarketMode::Finite,
            AdMarket::Asymptotic => MarketMode::Asymptotic,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.mode() == MarketMode::Finite
    }

    /// Expected number of MUs per period.
    pub fn n(&self) -> f64 {
        self.n
    }
    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    /// Advertising-market popularity. In finite mode this is `M / sigma_max`.
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Number of ADs `M`; finite mode only.
    pub fn ads(&self) -> Result<f64> {
        match self.ads {
            AdMarket::Finite { ads, .. } => Ok(ads),
            AdMarket::Asymptotic => Err(Error::RequiresFiniteMode("ads")),
        }
    }

    /// Upper bound of the AD type support; finite mode only.
    pub fn sigma_max(&self) -> Result<f64> {
        match self.ads {
            AdMarket::Finite { sigma_max, .. } => Ok(sigma_max),
            AdMarket::Asymptotic => Err(Error::RequiresFiniteMode("sigma_max")),
        }
    }

    /// The large-market counterpart of these parameters, with `eta = M / sigma_max`.
    pub fn asymptotic_limit(&self) -> Self {
        MarketParams {
            ads: AdMarket::Asymptotic,
            ..*self
        }
    }

    fn revalidate(&self, mutate: impl FnOnce(&mut MarketConfig)) -> Result<Self> {
        let mut cfg = self.to_config();
        mutate(&mut cfg);
        MarketParams::new(cfg)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        self.revalidate(|c| c.gamma = gamma)
    }
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        self.revalidate(|c| c.lambda = lambda)
    }
    pub fn with_n(&self, n: f64) -> Result<Self> {
        self.revalidate(|c| c.n = n)
    }
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        self.revalidate(|c| c.beta = beta)
    }
    pub fn with_theta_max(&self, theta_max: f64) -> Result<Self> {
        self.revalidate(|c| c.theta_max = theta_max)
    }
    pub fn with_a(&self, a: f64) -> Result<Self> {
        self.revalidate(|c| c.a = a)
    }
    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        self.revalidate(|c| c.eta = Some(eta))
    }
}

impl TryFrom<MarketConfig> for MarketParams {
    type Error = Error;

    fn try_from(cfg: MarketConfig) -> Result<Self> {
        MarketParams::new(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(err: Error) -> &'static str {
        match err {
            Error::InvalidParameter { field, .. } => field,
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn baseline_is_asymptotic() {
        let p = MarketParams::baseline();
        assert_eq!(p.mode(), MarketMode::Asymptotic);
        assert_eq!(p.eta(), 1.0);
        assert!(matches!(p.ads(), Err(Error::RequiresFiniteMode(_))));
        assert!(p.sigma_max().is_err());
    }

    #[test]
    fn rejects_out_of_range_fields() {
        let bad = |f: fn(&mut MarketConfig)| {
            let mut c = MarketConfig::baseline();
            f(&mut c);
            field_of(MarketParams::new(c).unwrap_err())
        };
        assert_eq!(bad(|c| c.beta = 1.5), "beta");
        assert_eq!(bad(|c| c.beta = 0.0), "beta");
        assert_eq!(bad(|c| c.gamma = 0.0), "gamma");
        assert_eq!(bad(|c| c.n = -1.0), "n");
        assert_eq!(bad(|c| c.lambda = f64::NAN), "lambda");
        assert_eq!(bad(|c| c.epsilon = 1.0 / 3.0), "epsilon");
        assert_eq!(bad(|c| c.eta = Some(-0.1)), "eta");
        assert_eq!(bad(|c| c.eta = None), "eta");
        assert_eq!(bad(|c| c.m = Some(3.0)), "m");
    }

    #[test]
    fn finite_mode_derives_eta() {
        let p = MarketParams::new(MarketConfig::baseline().finite(12.0, 4.0)).unwrap();
        assert_eq!(p.eta(), 3.0);
        assert_eq!(p.ads().unwrap(), 12.0);
        let lim = p.asymptotic_limit();
        assert_eq!(lim.mode(), MarketMode::Asymptotic);
        assert_eq!(lim.eta(), 3.0);

        let mut cfg = MarketConfig::baseline().finite(12.0, 4.0);
        cfg.eta = Some(3.0);
        assert_eq!(field_of(MarketParams::new(cfg).unwrap_err()), "eta");
    }

    #[test]
    fn config_json_round_trip() {
        for p in [
            MarketParams::baseline(),
            MarketParams::new(MarketConfig::baseline().finite(7.0, 9.0)).unwrap(),
        ] {
            let json = serde_json::to_string(&p.to_config()).unwrap();
            let back: MarketConfig = serde_json::from_str(&json).unwrap();
            assert_eq!(MarketParams::new(back).unwrap(), p);
        }
    }

    #[test]
    fn epsilon_defaults_when_omitted() {
        let json = r#"{"n":200,"theta_max":1,"beta":0.1,"lambda":4,"gamma":0.5,"a":4,"eta":1}"#;
        let cfg: MarketConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.epsilon, DEFAULT_EPSILON);
        assert_eq!(cfg.mode, MarketMode::Asymptotic);
    }
}
