//! Parameter sweeps, the uniform sharing ratio across many venues, and the
//! welfare-versus-visit-frequency curve.

use std::io::Write;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::linspace;
use crate::params::{MarketConfig, MarketParams};
use crate::platform::{platform_revenue, solve_equilibrium, EquilibriumOutcome};
use crate::pricing::{active_ad_count, optimal_wifi_price, vo_total_revenue};
use crate::rng::{self, tag};

pub const DEFAULT_GAMMA_RANGE: (f64, f64) = (0.01, 1.0);
pub const DEFAULT_LAMBDA_RANGE: (f64, f64) = (0.1, 15.0);
pub const DEFAULT_VO_COUNT: usize = 10_000;
/// Spacing of candidate uniform sharing ratios.
pub const UNIFORM_DELTA_STEP: f64 = 1e-4;

/// `<experiment>_<seed>.csv`
pub fn artifact_name(experiment: &str, seed: u64) -> String {
    format!("{experiment}_{seed}.csv")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub gamma_axis: Vec<f64>,
    pub lambda_axis: Vec<f64>,
    /// `cells[i][j]` is solved at `gamma_axis[i]`, `lambda_axis[j]`.
    pub cells: Vec<Vec<EquilibriumOutcome>>,
    /// Expected active ADs per cell, same layout as `cells`.
    pub active_ads: Vec<Vec<f64>>,
}

fn check_range(field: &'static str, (lo, hi): (f64, f64)) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("need 0 < min <= max, got [{lo}, {hi}]"),
        ))
    }
}

/// Solve the equilibrium on a `resolution x resolution` lattice of `(gamma, lambda)`.
pub fn sweep(
    base: &MarketParams,
    gamma_range: (f64, f64),
    lambda_range: (f64, f64),
    resolution: usize,
) -> Result<SweepGrid> {
    check_range("gamma", gamma_range)?;
    check_range("lambda", lambda_range)?;
    if resolution < 2 {
        return Err(Error::invalid(
            "grid",
            format!("resolution must be at least 2, got {resolution}"),
        ));
    }
    let gamma_axis = linspace(gamma_range.0, gamma_range.1, resolution);
    let lambda_axis = linspace(lambda_range.0, lambda_range.1, resolution);
    let rows: Vec<(Vec<EquilibriumOutcome>, Vec<f64>)> = gamma_axis
        .par_iter()
        .map(|&g| {
            let row_base = base.with_gamma(g)?;
            lambda_axis
                .iter()
                .map(|&l| {
                    let p = row_base.with_lambda(l)?;
                    Ok((solve_equilibrium(&p)?, active_ad_count(&p)))
                })
                .collect::<Result<Vec<_>>>()
                .map(|v| v.into_iter().unzip())
        })
        .collect::<Result<_>>()?;
    let (cells, active_ads) = rows.into_iter().unzip();
    Ok(SweepGrid {
        gamma_axis,
        lambda_axis,
        cells,
        active_ads,
    })
}

impl SweepGrid {
    /// Field names emitted by [`SweepGrid::write_long_csv`], in row order per cell.
    pub const FIELDS: [&'static str; 12] = [
        "omega",
        "delta_star",
        "p_f_star",
        "p_a",
        "phi_a",
        "phi_f",
        "active_ads",
        "platform_revenue",
        "vo_ad_revenue",
        "vo_premium_revenue",
        "vo_total_revenue",
        "social_welfare",
    ];

    fn field_values(eq: &EquilibriumOutcome, active: f64) -> [f64; 12] {
        [
            eq.omega,
            eq.delta_star,
            eq.p_f_star,
            eq.p_a,
            eq.phi_a,
            eq.phi_f,
            active,
            eq.platform_revenue,
            eq.vo_ad_revenue,
            eq.vo_premium_revenue,
            eq.vo_total_revenue,
            eq.social_welfare,
        ]
    }

    /// Long-format CSV with header `gamma,lambda,field,value`.
    pub fn write_long_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["gamma", "lambda", "field", "value"])?;
        for (i, g) in self.gamma_axis.iter().enumerate() {
            for (j, l) in self.lambda_axis.iter().enumerate() {
                let values = Self::field_values(&self.cells[i][j], self.active_ads[i][j]);
                for (name, v) in Self::FIELDS.iter().zip(values) {
                    w.write_record([
                        g.to_string(),
                        l.to_string(),
                        name.to_string(),
                        v.to_string(),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformSharingResult {
    pub delta_u_star: f64,
    /// Mean platform revenue per VO under the uniform ratio.
    pub expected_platform_revenue: f64,
    /// Mean platform revenue per VO when each VO gets its own optimal ratio.
    pub vo_specific_platform_revenue: f64,
    pub vo_count: usize,
    pub seed: u64,
    /// `(delta, mean platform revenue)` over the candidate grid.
    pub curve: Vec<(f64, f64)>,
}

impl UniformSharingResult {
    pub fn write_curve_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["delta", "expected_platform_revenue"])?;
        for (d, v) in &self.curve {
            w.write_record([d.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sample `vo_count` venues with `gamma ~ U[0.01, 1]` and `lambda ~ U[0.1, 15]`.
pub fn sample_venues(base: &MarketParams, vo_count: usize, seed: u64) -> Result<Vec<MarketParams>> {
    (0..vo_count)
        .map(|i| {
            let mut r = rng::stream(seed, tag::UNIFORM | i as u64);
            let gamma = r.random_range(0.01..=1.0);
            let lambda = r.random_range(0.1..=15.0);
            base.with_gamma(gamma)?.with_lambda(lambda)
        })
        .collect()
}

/// The single sharing ratio that maximizes the platform's mean revenue over
/// sampled venues, each VO best-responding with its own Wi-Fi price.
///
/// Every candidate ratio is scored on the same sample.
pub fn uniform_sharing_optimum(
    base: &MarketParams,
    vo_count: usize,
    seed: u64,
) -> Result<UniformSharingResult> {
    if vo_count == 0 {
        return Err(Error::invalid("vo_count", "must be at least 1"));
    }
    let venues = sample_venues(base, vo_count, seed)?;
    let top = 1.0 - base.epsilon();
    let steps = (top / UNIFORM_DELTA_STEP).round() as usize;
    let candidates: Vec<f64> = (0..=steps)
        .map(|k| (k as f64 * UNIFORM_DELTA_STEP).min(top))
        .collect();
    let n = vo_count as f64;
    let curve: Vec<(f64, f64)> = candidates
        .par_iter()
        .map(|&d| {
            let total = venues
                .iter()
                .map(|p| platform_revenue(d, p))
                .sum::<Result<f64>>()?;
            Ok((d, total / n))
        })
        .collect::<Result<_>>()?;
    let &(delta_u_star, expected_platform_revenue) = curve
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("candidate grid is non-empty");
    let specific = venues
        .iter()
        .map(|p| Ok(solve_equilibrium(p)?.platform_revenue))
        .sum::<Result<f64>>()?
        / n;
    Ok(UniformSharingResult {
        delta_u_star,
        expected_platform_revenue,
        vo_specific_platform_revenue: specific,
        vo_count,
        seed,
        curve,
    })
}

/// A VO's total revenue when the platform imposes sharing ratio `delta`.
pub fn vo_revenue_under_sharing(params: &MarketParams, delta: f64) -> Result<f64> {
    vo_total_revenue(optimal_wifi_price(delta, params)?, delta, params)
}

/// Market used for the welfare-versus-lambda example.
pub fn welfare_example_params() -> MarketParams {
    MarketParams::new(MarketConfig {
        n: 200.0,
        theta_max: 1.0,
        beta: 0.8,
        eta: Some(1.0),
        a: 20.0,
        epsilon: 0.01,
        gamma: 0.8,
        ..MarketConfig::baseline()
    })
    .expect("constant parameters are valid")
}

/// Equilibrium social welfare at `resolution` evenly spaced values of `lambda`.
pub fn welfare_lambda_curve(
    params: &MarketParams,
    lambda_range: (f64, f64),
    resolution: usize,
) -> Result<Vec<(f64, f64)>> {
    check_range("lambda", lambda_range)?;
    linspace(lambda_range.0, lambda_range.1, resolution)
        .into_iter()
        .map(|l| {
            Ok((
                l,
                solve_equilibrium(&params.with_lambda(l)?)?.social_welfare,
            ))
        })
        .collect()
}

pub fn write_pairs_csv<W: Write>(header: [&str; 2], rows: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for (x, y) in rows {
        w.write_record([x.to_string(), y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
