//! Brute-force maximizers used as ground truth for the closed-form solvers,
//! plus the experiment comparing the asymptotic ad price against the
//! finite-market optimum.

use std::io::Write;
use std::path::Path;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::sponsored_audience;
use crate::numeric::{geomspace, golden_section_max, linspace};
use crate::params::{MarketConfig, MarketParams};
use crate::platform::{optimal_sharing, platform_revenue, OmegaRegime};
use crate::pricing::{
    asymptotic_log_discount, finite_log_discount, g_function, optimal_wifi_price, spaces_sold_at,
    vo_total_revenue,
};
use crate::rng::{self, tag};

/// Grid size for acceptance-grade oracle runs.
pub const DEFAULT_GRID_POINTS: usize = 100_000;
/// Smaller grid for quick checks.
pub const QUICK_GRID_POINTS: usize = 10_000;
/// Relative tolerance for oracle-versus-closed-form revenue.
pub const ORACLE_TOLERANCE: f64 = 1e-4;
/// Average-ratio floor for the asymptotic ad price on large finite markets.
pub const ZETA_FLOOR: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub argmax: f64,
    pub max_value: f64,
    pub closed_form_arg: f64,
    pub closed_form_value: f64,
    pub rel_gap: f64,
}

impl OracleResult {
    fn new(argmax: f64, max_value: f64, closed_form_arg: f64, closed_form_value: f64) -> Self {
        OracleResult {
            argmax,
            max_value,
            closed_form_arg,
            closed_form_value,
            rel_gap: (max_value - closed_form_value).abs() / max_value.abs().max(1e-12),
        }
    }
}

fn argmax_index(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
}

/// Grid search for the VO's advertising price subject to the sales capacity.
///
/// The search runs over the log discount `L = ln(a gamma / p_a)`, geometrically
/// spaced from `1e-9` to `50` (plus `L = 0`, the choke price), then repeats on a
/// uniform grid across the bracket of the best point.
pub fn brute_ad_price(
    p_f: f64,
    delta: f64,
    params: &MarketParams,
    grid_points: usize,
) -> Result<OracleResult> {
    if !params.is_finite() {
        return Err(Error::RequiresFiniteMode("brute_ad_price"));
    }
    crate::pricing::check_delta(delta)?;
    let choke = params.a() * params.gamma();
    let capacity = params.lambda() * sponsored_audience(p_f, params) * (1.0 + 1e-12);
    let objective = |l: f64| {
        if spaces_sold_at(l, p_f, params) <= capacity {
            (1.0 - delta) * choke * (-l).exp() * spaces_sold_at(l, p_f, params)
        } else {
            f64::NEG_INFINITY
        }
    };

    let mut grid = Vec::with_capacity(grid_points + 1);
    grid.push(0.0);
    grid.extend(geomspace(1e-9, 50.0, grid_points.max(2)));
    let values: Vec<f64> = grid.iter().map(|&l| objective(l)).collect();
    let best = argmax_index(&values).ok_or(Error::InfeasibleEverywhere)?;

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let fine = linspace(lo, hi, grid_points.max(2));
    let fine_values: Vec<f64> = fine.iter().map(|&l| objective(l)).collect();
    let (best_l, best_v) = match argmax_index(&fine_values) {
        Some(i) if fine_values[i] >= values[best] => (fine[i], fine_values[i]),
        _ => (grid[best], values[best]),
    };

    let (_, closed_l) = finite_log_discount(params)?;
    let closed_v =
        (1.0 - delta) * choke * (-closed_l).exp() * spaces_sold_at(closed_l, p_f, params);
    Ok(OracleResult::new(
        choke * (-best_l).exp(),
        best_v,
        choke * (-closed_l).exp(),
        closed_v,
    ))
}

/// Locate the maximum of `f` on `[lo, hi]`: a coarse grid picks a bracket and
/// golden-section search refines it.
fn grid_then_golden<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid_points: usize) -> (f64, f64) {
    let grid = linspace(lo, hi, grid_points.max(3));
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let best = argmax_index(&values).unwrap_or(0);
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(grid.len() - 1)];
    let (x, v) = golden_section_max(&f, a, b, 1e-12 * (hi - lo).max(1e-300));
    if v >= values[best] {
        (x, v)
    } else {
        (grid[best], values[best])
    }
}

/// Numerical maximization of the VO's total revenue over `p_f in [0, beta theta_max]`.
pub fn brute_wifi_price(
    delta: f64,
    params: &MarketParams,
    grid_points: usize,
) -> Result<OracleResult> {
    crate::pricing::check_delta(delta)?;
    let top = params.beta() * params.theta_max();
    let f = |p: f64| vo_total_revenue(p, delta, params).unwrap_or(f64::NEG_INFINITY);
    let (x, v) = grid_then_golden(f, 0.0, top, grid_points);
    let closed = optimal_wifi_price(delta, params)?;
    Ok(OracleResult::new(
        x,
        v,
        closed,
        vo_total_revenue(closed, delta, params)?,
    ))
}

/// Numerical maximization of the platform's revenue over `delta in [0, 1 - epsilon]`,
/// with the VO's Wi-Fi price as its best response at each `delta`.
pub fn brute_sharing(params: &MarketParams, grid_points: usize) -> Result<OracleResult> {
    let top = 1.0 - params.epsilon();
    let f = |d: f64| platform_revenue(d, params).unwrap_or(f64::NEG_INFINITY);
    let (x, v) = grid_then_golden(f, 0.0, top, grid_points);
    let closed = optimal_sharing(params)?;
    Ok(OracleResult::new(
        x,
        v,
        closed,
        platform_revenue(closed, params)?,
    ))
}

/// Outcome of one verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub draws: usize,
    /// Worst relative gap for oracle suites; `1 - min cell average` for the ratio suite.
    pub max_rel_gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteReport {
    fn from_gaps(name: &str, gaps: &[f64], tolerance: f64) -> Self {
        let max_rel_gap = gaps.iter().copied().fold(0.0, f64::max);
        SuiteReport {
            name: name.to_string(),
            draws: gaps.len(),
            max_rel_gap,
            tolerance,
            passed: gaps.iter().all(|g| g.is_finite()) && max_rel_gap < tolerance,
        }
    }
}

/// Random finite market with the ratio experiment's distributions.
pub fn draw_finite_market(r: &mut rng::Rng) -> MarketParams {
    let m = r.random_range(1..=15) as f64;
    let sigma_max = r.random_range(1..=15) as f64;
    draw_ratio_market(r, m, sigma_max)
}

fn draw_ratio_market(r: &mut rng::Rng, m: f64, sigma_max: f64) -> MarketParams {
    let cfg = MarketConfig {
        gamma: r.random_range(0.01..=1.0),
        lambda: r.random_range(0.1..=5.0),
        a: r.random_range(1.0..=3.0),
        ..MarketConfig::baseline()
    };
    MarketParams::new(cfg.finite(m, sigma_max)).expect("sampled ranges are valid")
}

/// Random asymptotic market whose indicator falls in `regime`.
///
/// `gamma`, `lambda`, `eta`, `a` and `beta` are drawn first; `theta_max` is then
/// chosen so that `Omega` equals a target drawn uniformly inside the regime.
pub fn draw_market_in_regime(r: &mut rng::Rng, regime: OmegaRegime) -> MarketParams {
    let epsilon = r.random_range(0.005..0.1);
    let base = MarketParams::new(MarketConfig {
        gamma: r.random_range(0.01..=1.0),
        lambda: r.random_range(0.1..=15.0),
        eta: Some(r.random_range(0.1..=5.0)),
        a: r.random_range(1.0..=10.0),
        beta: r.random_range(0.05..=1.0),
        n: r.random_range(50.0..=1000.0),
        epsilon,
        ..MarketConfig::baseline()
    })
    .expect("sampled ranges are valid");
    let (lo, hi) = match regime {
        OmegaRegime::OmegaTiny => (0.05 * epsilon, epsilon),
        OmegaRegime::OmegaLow => (epsilon, 1.0 / 3.0),
        OmegaRegime::OmegaMid => (1.0 / 3.0, 1.0 - 2.0 * epsilon),
        OmegaRegime::OmegaHigh => (1.0 - 2.0 * epsilon, 3.0),
    };
    // keep targets strictly inside the regime so rounding cannot move them across
    let width = hi - lo;
    let omega = r.random_range(lo + 1e-6 * width..hi - 1e-6 * width);
    let theta_max = omega * base.a() * g_function(&base) / (base.lambda() * base.beta());
    base.with_theta_max(theta_max).expect("positive theta_max")
}

const REGIMES: [OmegaRegime; 4] = [
    OmegaRegime::OmegaTiny,
    OmegaRegime::OmegaLow,
    OmegaRegime::OmegaMid,
    OmegaRegime::OmegaHigh,
];

pub fn verify_ad_price(
    draws: usize,
    seed: u64,
    grid_points: usize,
) -> Result<(SuiteReport, Vec<OracleResult>)> {
    let results = (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, tag::AD_PRICE | i as u64);
            let p = draw_finite_market(&mut r);
            let bt = p.beta() * p.theta_max();
            let p_f = r.random_range(0.01 * bt..=bt);
            let delta = r.random_range(0.0..=1.0 - p.epsilon());
            brute_ad_price(p_f, delta, &p, grid_points)
        })
        .collect::<Result<Vec<_>>>()?;
    let gaps: Vec<f64> = results.iter().map(|o| o.rel_gap).collect();
    Ok((
        SuiteReport::from_gaps("ad_price", &gaps, ORACLE_TOLERANCE),
        results,
    ))
}

pub fn verify_wifi_price(
    draws: usize,
    seed: u64,
    grid_points: usize,
) -> Result<(SuiteReport, Vec<OracleResult>)> {
    let results = (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, tag::WIFI_PRICE | i as u64);
            let p = draw_market_in_regime(&mut r, REGIMES[i % 4]);
            let delta = r.random_range(0.0..=1.0 - p.epsilon());
            brute_wifi_price(delta, &p, grid_points)
        })
        .collect::<Result<Vec<_>>>()?;
    let gaps: Vec<f64> = results.iter().map(|o| o.rel_gap).collect();
    Ok((
        SuiteReport::from_gaps("wifi_price", &gaps, ORACLE_TOLERANCE),
        results,
    ))
}

pub fn verify_sharing(
    draws: usize,
    seed: u64,
    grid_points: usize,
) -> Result<(SuiteReport, Vec<OracleResult>)> {
    let results = (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, tag::SHARING | i as u64);
            let p = draw_market_in_regime(&mut r, REGIMES[i % 4]);
            brute_sharing(&p, grid_points)
        })
        .collect::<Result<Vec<_>>>()?;
    let gaps: Vec<f64> = results.iter().map(|o| o.rel_gap).collect();
    Ok((
        SuiteReport::from_gaps("sharing", &gaps, ORACLE_TOLERANCE),
        results,
    ))
}

/// Ratio of advertising revenue under the asymptotic price to the finite-market optimum.
///
/// The ratio does not depend on `N`, `p_f` or `delta`, all of which scale both revenues equally.
pub fn zeta(params: &MarketParams) -> Result<f64> {
    let (_, l_star) = finite_log_discount(params)?;
    let l_inf = asymptotic_log_discount(params);
    let p_f = params.beta() * params.theta_max();
    let revenue = |l: f64| (-l).exp() * spaces_sold_at(l, p_f, params);
    Ok(revenue(l_inf) / revenue(l_star))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaCell {
    #[serde(rename = "M")]
    pub m: u32,
    pub sigma_max: u32,
    pub avg_zeta: f64,
    #[serde(skip)]
    pub min_zeta: f64,
    #[serde(skip)]
    pub max_zeta: f64,
}

/// Average ratio per `(M, sigma_max)` cell over `draws_per_cell` random markets.
pub fn zeta_experiment(
    m_range: std::ops::RangeInclusive<u32>,
    sigma_max_range: std::ops::RangeInclusive<u32>,
    draws_per_cell: usize,
    seed: u64,
) -> Result<Vec<ZetaCell>> {
    let cells: Vec<(u32, u32)> = m_range
        .flat_map(|m| sigma_max_range.clone().map(move |s| (m, s)))
        .collect();
    cells
        .into_par_iter()
        .map(|(m, s)| {
            let id = tag::ZETA | (u64::from(m) << 16) | u64::from(s);
            let mut r = rng::stream(seed, id);
            let (mut sum, mut lo, mut hi) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
            for _ in 0..draws_per_cell {
                let z = zeta(&draw_ratio_market(&mut r, f64::from(m), f64::from(s)))?;
                sum += z;
                lo = lo.min(z);
                hi = hi.max(z);
            }
            Ok(ZetaCell {
                m,
                sigma_max: s,
                avg_zeta: sum / draws_per_cell.max(1) as f64,
                min_zeta: lo,
                max_zeta: hi,
            })
        })
        .collect()
}

pub fn write_zeta_csv<W: Write>(cells: &[ZetaCell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for c in cells {
        w.serialize(c)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_zeta_csv_file(cells: &[ZetaCell], path: &Path) -> Result<()> {
    write_zeta_csv(cells, std::fs::File::create(path)?)
}

/// Suite report for the ratio experiment: cells with `M, sigma_max >= 6` must average
/// at least [`ZETA_FLOOR`] and no single ratio may exceed one.
pub fn zeta_report(cells: &[ZetaCell]) -> SuiteReport {
    let worst = cells
        .iter()
        .filter(|c| c.m >= 6 && c.sigma_max >= 6)
        .map(|c| c.avg_zeta)
        .fold(f64::INFINITY, f64::min);
    let max_ratio = cells.iter().map(|c| c.max_zeta).fold(0.0, f64::max);
    let gap = 1.0 - worst;
    SuiteReport {
        name: "zeta".to_string(),
        draws: cells.len(),
        max_rel_gap: gap,
        tolerance: 1.0 - ZETA_FLOOR,
        passed: worst >= ZETA_FLOOR && max_ratio <= 1.0 + 1e-12,
    }
}

/// Run every oracle suite with `draws` draws each; the ratio suite uses `draws` per cell.
pub fn verify_all(draws: usize, seed: u64, grid_points: usize) -> Result<Vec<SuiteReport>> {
    let (a, _) = verify_ad_price(draws, seed, grid_points)?;
    let (w, _) = verify_wifi_price(draws, seed, grid_points)?;
    let (s, _) = verify_sharing(draws, seed, grid_points)?;
    let z = zeta_report(&zeta_experiment(1..=15, 1..=15, draws, seed)?);
    Ok(vec![a, w, s, z])
}
