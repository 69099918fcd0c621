//! Agent-level Monte Carlo of one period of the market at fixed prices.
//!
//! Each replication samples `N` MU types and their Poisson segment counts,
//! samples AD types, lets every active AD buy an integer number of ad spaces by
//! randomizing between the two integers around its optimal expected quantity,
//! and then fills each sponsored segment with one categorical draw over the
//! ADs' display probabilities. Slots left over go to the VO's own promotions.

use std::io::Write;
use std::path::Path;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ad_optimal_quantity, ad_payoff, ad_popularity, mu_access_choice, AccessChoice};
use crate::numeric::{linspace, simpson};
use crate::params::MarketParams;
use crate::platform::{solve_equilibrium, EquilibriumOutcome};
use crate::pricing::ad_spaces_sold;
use crate::rng::{self, tag, Rng};

/// Largest Poisson mean sampled by a single inversion pass.
const POISSON_INVERSION_LIMIT: f64 = 30.0;

/// Buy `floor(m_star)` or `ceil(m_star)` spaces so that the expectation is `m_star`.
pub fn randomized_purchase(m_star: f64, rng: &mut Rng) -> u64 {
    let floor = m_star.max(0.0).floor();
    let kappa = m_star.max(0.0) - floor;
    let up = kappa > 0.0 && rng.random::<f64>() < kappa;
    floor as u64 + u64::from(up)
}

/// Poisson variate by CDF inversion, splitting means above
/// [`POISSON_INVERSION_LIMIT`] into independent chunks.
pub fn sample_poisson(lambda: f64, rng: &mut Rng) -> u64 {
    let mut remaining = lambda;
    let mut total = 0;
    while remaining > 0.0 {
        let chunk = remaining.min(POISSON_INVERSION_LIMIT);
        remaining -= chunk;
        let u: f64 = rng.random();
        let mut p = (-chunk).exp();
        let mut cdf = p;
        let mut k = 0u64;
        while u > cdf && k < 10_000 {
            k += 1;
            p *= chunk / k as f64;
            cdf += p;
        }
        total += k;
    }
    total
}

/// Relative payoff loss from randomized integer purchase, at the given prices.
pub fn tau_at(sigma: f64, params: &MarketParams, eq: &EquilibriumOutcome) -> Result<f64> {
    let threshold = eq.sigma_threshold;
    if !(0.0..threshold).contains(&sigma) {
        return Err(Error::UndefinedTau { sigma, threshold });
    }
    let m_star = ad_optimal_quantity(sigma, eq.p_a, eq.p_f_star, params)?;
    let floor = m_star.floor();
    let kappa = m_star - floor;
    if kappa == 0.0 {
        return Ok(0.0);
    }
    let payoff = |m: f64| ad_payoff(sigma, m, eq.p_f_star, eq.p_a, params);
    let randomized = (1.0 - kappa) * payoff(floor)? + kappa * payoff(floor + 1.0)?;
    Ok(1.0 - randomized / payoff(m_star)?)
}

/// [`tau_at`] evaluated at the market's equilibrium prices.
pub fn tau(sigma: f64, params: &MarketParams) -> Result<f64> {
    tau_at(sigma, params, &solve_equilibrium(params)?)
}

/// `(sigma, tau)` on `points` evenly spaced types in `[0, sigma_T)`.
pub fn tau_curve(
    params: &MarketParams,
    eq: &EquilibriumOutcome,
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    let top = eq.sigma_threshold;
    linspace(0.0, top, points + 1)
        .into_iter()
        .take(points)
        .map(|s| Ok((s, tau_at(s, params, eq)?)))
        .collect()
}

pub fn write_tau_csv<W: Write>(curve: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sigma", "tau"])?;
    for (s, t) in curve {
        w.write_record([s.to_string(), t.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// The AD with the largest purchase in each replication, tracked for view frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaggedAdStats {
    /// Fraction of sponsored MUs, pooled over replications, who saw the AD at least once.
    pub empirical_nu: f64,
    /// Closed-form view probability at the realized purchases, averaged with the same weights.
    pub closed_nu: f64,
    pub standard_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub replication_count: usize,
    pub seed: u64,
    pub empirical_vo_ad_revenue: f64,
    pub empirical_vo_premium_revenue: f64,
    pub empirical_platform_revenue: f64,
    pub expected_vo_ad_revenue: f64,
    pub expected_vo_premium_revenue: f64,
    pub expected_platform_revenue: f64,
    /// Mean number of ad spaces bought per replication.
    pub empirical_purchased_spaces: f64,
    /// Mean number of ads actually displayed per replication.
    pub empirical_displayed_spaces: f64,
    pub expected_spaces_sold: f64,
    /// Standard error of the mean purchased spaces.
    pub purchased_spaces_standard_error: f64,
    pub empirical_sponsored_fraction: f64,
    /// Replications in which every MU chose sponsored access.
    pub all_sponsored_replications: usize,
    /// Replications whose display probabilities summed above one and were rescaled.
    pub oversold_replications: usize,
    /// Largest `displayed - sponsored segments` over replications; never positive.
    pub max_display_excess: i64,
    pub empirical_ad_payoff: f64,
    pub expected_ad_payoff: f64,
    pub tagged_ad: TaggedAdStats,
    pub tau_curve: Vec<(f64, f64)>,
}

impl SimulationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Replication {
    premium_revenue: f64,
    displays: u64,
    purchased: u64,
    sponsored_segments: u64,
    sponsored_mus: u64,
    premium_mus: u64,
    oversold: bool,
    ad_payoff: f64,
    tag_seen: u64,
    tag_closed_nu: f64,
}

/// Round half up to an integer count.
fn count(x: f64) -> usize {
    (x + 0.5).floor().max(0.0) as usize
}

/// AD types for one replication, stratified so each unit of type density holds one AD.
fn sample_ad_types(params: &MarketParams, threshold: f64, rng: &mut Rng) -> Vec<f64> {
    match (params.ads(), params.sigma_max()) {
        (Ok(m), Ok(sigma_max)) => {
            let m = count(m);
            (0..m)
                .map(|j| sigma_max * (j as f64 + rng.random::<f64>()) / m as f64)
                .filter(|&s| s <= threshold)
                .collect()
        }
        _ => {
            let eta = params.eta();
            let strata = (threshold * eta).ceil() as usize;
            (0..strata)
                .map(|j| (j as f64 + rng.random::<f64>()) / eta)
                .filter(|&s| s <= threshold)
                .collect()
        }
    }
}

fn replicate(params: &MarketParams, eq: &EquilibriumOutcome, rng: &mut Rng) -> Result<Replication> {
    let n = count(params.n());
    let p_f = eq.p_f_star;
    let mut out = Replication::default();

    let mut segments = Vec::with_capacity(n);
    for _ in 0..n {
        let theta = rng.random::<f64>() * params.theta_max();
        let k = sample_poisson(params.lambda(), rng);
        match mu_access_choice(theta, p_f, params)? {
            AccessChoice::Premium => {
                out.premium_mus += 1;
                out.premium_revenue += p_f * k as f64;
            }
            AccessChoice::Sponsored => {
                out.sponsored_mus += 1;
                out.sponsored_segments += k;
                segments.push(k);
            }
        }
    }

    let threshold = crate::model::sigma_threshold(eq.p_a, params)?;
    let types = sample_ad_types(params, threshold, rng);
    let purchases: Vec<u64> = types
        .iter()
        .map(|&s| {
            Ok(randomized_purchase(
                ad_optimal_quantity(s, eq.p_a, p_f, params)?,
                rng,
            ))
        })
        .collect::<Result<_>>()?;
    out.purchased = purchases.iter().sum();

    let expected_segments = params.lambda() * n as f64 * eq.phi_a;
    let mut chi: Vec<f64> = purchases
        .iter()
        .map(|&m| {
            if expected_segments > 0.0 {
                m as f64 / expected_segments
            } else {
                0.0
            }
        })
        .collect();
    let total_chi: f64 = chi.iter().sum();
    if total_chi > 1.0 {
        out.oversold = true;
        chi.iter_mut().for_each(|c| *c /= total_chi);
    }
    let cumulative: Vec<f64> = chi
        .iter()
        .scan(0.0, |acc, c| {
            *acc += c;
            Some(*acc)
        })
        .collect();

    let tagged = purchases
        .iter()
        .enumerate()
        .max_by_key(|(_, m)| **m)
        .map(|(i, _)| i);
    let mut displays = vec![0u64; types.len()];
    let mut viewers = vec![0u64; types.len()];
    let mut last_viewer = vec![usize::MAX; types.len()];
    for (mu, &k) in segments.iter().enumerate() {
        for _ in 0..k {
            let u: f64 = rng.random();
            if let Some(j) = cumulative.iter().position(|&c| u < c) {
                displays[j] += 1;
                if last_viewer[j] != mu {
                    last_viewer[j] = mu;
                    viewers[j] += 1;
                }
            }
        }
    }
    out.displays = displays.iter().sum();

    for (j, &sigma) in types.iter().enumerate() {
        out.ad_payoff += params.a() * ad_popularity(sigma, params) * viewers[j] as f64
            - eq.p_a * displays[j] as f64;
    }
    if let Some(t) = tagged {
        out.tag_seen = viewers[t];
        let audience = n as f64 * eq.phi_a;
        out.tag_closed_nu = if audience > 0.0 {
            -(-(purchases[t] as f64) / audience).exp_m1()
        } else {
            0.0
        };
    }
    Ok(out)
}

/// Expected total AD payoff at the given prices, integrated over the type density.
fn expected_ad_payoff(params: &MarketParams, eq: &EquilibriumOutcome) -> Result<f64> {
    let threshold = crate::model::sigma_threshold(eq.p_a, params)?;
    if eq.phi_a <= 0.0 || threshold <= 0.0 {
        return Ok(0.0);
    }
    let density = match (params.ads(), params.sigma_max()) {
        (Ok(m), Ok(s)) => m / s,
        _ => params.eta(),
    };
    let f = |s: f64| {
        ad_optimal_quantity(s, eq.p_a, eq.p_f_star, params)
            .and_then(|m| ad_payoff(s, m, eq.p_f_star, eq.p_a, params))
            .unwrap_or(0.0)
    };
    Ok(density * simpson(f, 0.0, threshold, crate::numeric::SIMPSON_NODES))
}

/// Simulate `replications` independent periods at the prices and sharing ratio of `eq`.
pub fn run_market_simulation(
    params: &MarketParams,
    eq: &EquilibriumOutcome,
    replications: usize,
    seed: u64,
) -> Result<SimulationReport> {
    if replications == 0 {
        return Err(Error::invalid("replications", "must be at least 1"));
    }
    let reps: Vec<Replication> = (0..replications)
        .into_par_iter()
        .map(|i| {
            replicate(
                params,
                eq,
                &mut rng::stream(seed, tag::SIMULATION | i as u64),
            )
        })
        .collect::<Result<_>>()?;

    let r = replications as f64;
    let mean = |f: &dyn Fn(&Replication) -> f64| reps.iter().map(f).sum::<f64>() / r;
    let gross_ad = mean(&|x| eq.p_a * x.displays as f64);
    let purchased_mean = mean(&|x| x.purchased as f64);
    let purchased_var = reps
        .iter()
        .map(|x| (x.purchased as f64 - purchased_mean).powi(2))
        .sum::<f64>()
        / (r - 1.0).max(1.0);

    let sponsored: u64 = reps.iter().map(|x| x.sponsored_mus).sum();
    let tagged = if sponsored > 0 {
        let w = sponsored as f64;
        let seen: u64 = reps.iter().map(|x| x.tag_seen).sum();
        let closed = reps
            .iter()
            .map(|x| x.tag_closed_nu * x.sponsored_mus as f64)
            .sum::<f64>()
            / w;
        let var = reps
            .iter()
            .map(|x| x.tag_closed_nu * (1.0 - x.tag_closed_nu) * x.sponsored_mus as f64)
            .sum::<f64>();
        TaggedAdStats {
            empirical_nu: seen as f64 / w,
            closed_nu: closed,
            standard_error: var.sqrt() / w,
        }
    } else {
        TaggedAdStats {
            empirical_nu: 0.0,
            closed_nu: 0.0,
            standard_error: 0.0,
        }
    };

    let q = ad_spaces_sold(eq.p_a, eq.p_f_star, params)?;
    let delta = eq.delta_star;
    let total_mus = reps
        .iter()
        .map(|x| x.sponsored_mus + x.premium_mus)
        .sum::<u64>() as f64;
    Ok(SimulationReport {
        replication_count: replications,
        seed,
        empirical_vo_ad_revenue: (1.0 - delta) * gross_ad,
        empirical_vo_premium_revenue: mean(&|x| x.premium_revenue),
        empirical_platform_revenue: delta * gross_ad,
        expected_vo_ad_revenue: (1.0 - delta) * eq.p_a * q,
        expected_vo_premium_revenue: crate::pricing::vo_premium_revenue(eq.p_f_star, params),
        expected_platform_revenue: delta * eq.p_a * q,
        empirical_purchased_spaces: purchased_mean,
        empirical_displayed_spaces: mean(&|x| x.displays as f64),
        expected_spaces_sold: q,
        purchased_spaces_standard_error: (purchased_var / r).sqrt(),
        empirical_sponsored_fraction: sponsored as f64 / total_mus.max(1.0),
        all_sponsored_replications: reps.iter().filter(|x| x.premium_mus == 0).count(),
        oversold_replications: reps.iter().filter(|x| x.oversold).count(),
        max_display_excess: reps
            .iter()
            .map(|x| x.displays as i64 - x.sponsored_segments as i64)
            .max()
            .unwrap_or(0),
        empirical_ad_payoff: mean(&|x| x.ad_payoff),
        expected_ad_payoff: expected_ad_payoff(params, eq)?,
        tagged_ad: tagged,
        tau_curve: tau_curve(params, eq, 200)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::MarketConfig;

    fn large_venue() -> MarketParams {
        MarketParams::new(MarketConfig {
            n: 1000.0,
            ..MarketConfig::baseline()
        })
        .unwrap()
    }

    #[test]
    fn integer_purchase_is_deterministic() {
        let mut r = rng::stream(1, 0);
        assert!((0..1000).all(|_| randomized_purchase(3.0, &mut r) == 3));
        assert_eq!(randomized_purchase(0.0, &mut r), 0);
    }

    #[test]
    fn randomized_purchase_mean() {
        let mut r = rng::stream(2, 0);
        let draws = 1_000_000;
        let total: u64 = (0..draws).map(|_| randomized_purchase(2.25, &mut r)).sum();
        let mean = total as f64 / draws as f64;
        assert!((mean - 2.25).abs() < 0.005, "{mean}");

        let halves: u64 = (0..100_000).map(|_| randomized_purchase(0.5, &mut r)).sum();
        assert!((halves as f64 / 100_000.0 - 0.5).abs() < 0.01);
    }

    #[test]
    fn poisson_moments() {
        let mut r = rng::stream(3, 0);
        for &lambda in &[0.3, 4.0, 25.0, 75.0] {
            let draws = 200_000;
            let xs: Vec<f64> = (0..draws)
                .map(|_| sample_poisson(lambda, &mut r) as f64)
                .collect();
            let mean = xs.iter().sum::<f64>() / draws as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / draws as f64;
            let se = (lambda / draws as f64).sqrt();
            assert!((mean - lambda).abs() < 5.0 * se, "{lambda}: {mean}");
            assert!((var / lambda - 1.0).abs() < 0.03, "{lambda}: {var}");
        }
    }

    #[test]
    fn tau_is_zero_for_integer_quantity_and_nonnegative() {
        let p = large_venue();
        let eq = solve_equilibrium(&p).unwrap();
        let audience = p.n() * eq.phi_a;
        // choose sigma so that m* is an integer
        let sigma = (eq.ad_log_discount - 100.0 / audience) / p.gamma();
        let m = ad_optimal_quantity(sigma, eq.p_a, eq.p_f_star, &p).unwrap();
        if m.fract() == 0.0 {
            assert_eq!(tau_at(sigma, &p, &eq).unwrap(), 0.0);
        }
        for (s, t) in tau_curve(&p, &eq, 400).unwrap() {
            assert!(t >= -1e-12, "tau({s}) = {t}");
        }
    }

    #[test]
    fn tau_undefined_at_threshold() {
        let p = large_venue();
        let eq = solve_equilibrium(&p).unwrap();
        assert_eq!(eq.sigma_threshold, 4.0);
        assert!(matches!(tau(4.0, &p), Err(Error::UndefinedTau { .. })));
        assert!(matches!(tau(5.0, &p), Err(Error::UndefinedTau { .. })));
        assert!(tau(3.5, &p).is_ok());
    }

    #[test]
    fn tau_csv_header() {
        let mut buf = Vec::new();
        write_tau_csv(&[(0.0, 0.0), (0.5, 1e-6)], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("sigma,tau\n"));
    }

    #[test]
    fn simulation_is_seed_reproducible() {
        let p = MarketParams::baseline();
        let eq = solve_equilibrium(&p).unwrap();
        let a = run_market_simulation(&p, &eq, 8, 5).unwrap();
        let b = run_market_simulation(&p, &eq, 8, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.max_display_excess <= 0);
        assert!(a.empirical_vo_ad_revenue >= 0.0 && a.empirical_platform_revenue >= 0.0);
        assert!(run_market_simulation(&p, &eq, 0, 5).is_err());
    }

    #[test]
    fn low_indicator_market_is_all_sponsored() {
        let p = MarketParams::baseline()
            .with_lambda(1.5)
            .unwrap()
            .with_gamma(1.0)
            .unwrap();
        let eq = solve_equilibrium(&p).unwrap();
        assert!(eq.omega <= 1.0 / 3.0);
        let rep = run_market_simulation(&p, &eq, 20, 9).unwrap();
        assert_eq!(rep.all_sponsored_replications, 20);
        assert_eq!(rep.empirical_vo_premium_revenue, 0.0);
    }

    #[test]
    fn finite_market_simulation_runs() {
        let p = MarketParams::new(MarketConfig::baseline().finite(12.0, 10.0)).unwrap();
        let asym = MarketParams::baseline().with_eta(1.2).unwrap();
        let eq = solve_equilibrium(&asym).unwrap();
        let rep = run_market_simulation(&p, &eq, 50, 4).unwrap();
        let se = rep.purchased_spaces_standard_error;
        assert!((rep.empirical_purchased_spaces - rep.expected_spaces_sold).abs() < 4.0 * se + 1.0);
    }
}
