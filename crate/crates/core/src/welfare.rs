//! Social welfare at equilibrium.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{ad_gross_benefit, ad_optimal_quantity, ad_payoff, mu_payoff, AccessChoice};
use crate::numeric::{simpson_checked, SIMPSON_NODES, SIMPSON_TOLERANCE};
use crate::params::MarketParams;
use crate::platform::EquilibriumOutcome;

/// Social welfare in closed form: total MU utility plus total AD utility.
pub fn social_welfare_closed(params: &MarketParams, eq: &EquilibriumOutcome) -> f64 {
    let (n, lambda) = (params.n(), params.lambda());
    let mu = 0.5 * lambda * n * params.theta_max() - 0.5 * lambda * n * eq.p_f_star * eq.phi_a;
    let ad = params.eta()
        * n
        * eq.phi_a
        * (params.a() - eq.p_a / params.gamma() * (1.0 + eq.ad_log_discount));
    mu + ad
}

/// Components of the long-form welfare sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelfareBreakdown {
    pub platform_revenue: f64,
    pub vo_total_revenue: f64,
    /// `lambda * N` times the mean MU payoff, payments included.
    pub mu_payoff: f64,
    /// `eta` times the integral of AD payoffs over active types.
    pub ad_payoff: f64,
    /// MU payoff integral without the premium payment.
    pub mu_utility: f64,
    /// AD payoff integral without ad-space payments.
    pub ad_utility: f64,
    pub total: f64,
}

impl WelfareBreakdown {
    /// Gap between the revenue-plus-payoff sum and the payment-free utilities.
    pub fn payment_residual(&self) -> f64 {
        self.total - (self.mu_utility + self.ad_utility)
    }
}

fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    simpson_checked(f, lo, hi, SIMPSON_NODES, SIMPSON_TOLERANCE)
}

/// Integrate over MU types: `below` on `[0, theta_t]` where MUs take sponsored
/// access and `above` on `[theta_t, theta_max]` where they take premium access.
/// Utility jumps at `theta_t`, so each side uses its own branch up to the endpoint.
fn integrate_mu<F, G>(below: F, above: G, theta_t: f64, theta_max: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    Ok(integrate(below, 0.0, theta_t)? + integrate(above, theta_t, theta_max)?)
}

/// Social welfare as the sum of platform revenue, VO revenue, and the
/// numerically integrated MU and AD payoffs.
pub fn social_welfare_longform(
    params: &MarketParams,
    eq: &EquilibriumOutcome,
) -> Result<WelfareBreakdown> {
    let (n, lambda, theta_max) = (params.n(), params.lambda(), params.theta_max());
    let p_f = eq.p_f_star;
    let theta_t = eq.phi_a * theta_max;
    let scale = lambda * n / theta_max;

    let branch = |choice: AccessChoice| {
        move |theta: f64| mu_payoff(theta, choice, p_f, params).unwrap_or(0.0)
    };
    let mu_payoff_total = scale
        * integrate_mu(
            branch(AccessChoice::Sponsored),
            branch(AccessChoice::Premium),
            theta_t,
            theta_max,
        )?;
    let mu_utility_total = scale
        * integrate_mu(
            |theta| theta * (1.0 - params.beta()),
            |theta| theta,
            theta_t,
            theta_max,
        )?;

    let (ad_payoff_total, ad_utility_total) = if eq.phi_a > 0.0 && eq.sigma_threshold > 0.0 {
        let quantity = |sigma: f64| ad_optimal_quantity(sigma, eq.p_a, p_f, params).unwrap_or(0.0);
        let payoff = integrate(
            |s| ad_payoff(s, quantity(s), p_f, eq.p_a, params).unwrap_or(0.0),
            0.0,
            eq.sigma_threshold,
        )?;
        let utility = integrate(
            |s| ad_gross_benefit(s, quantity(s), p_f, params).unwrap_or(0.0),
            0.0,
            eq.sigma_threshold,
        )?;
        (params.eta() * payoff, params.eta() * utility)
    } else {
        (0.0, 0.0)
    };

    Ok(WelfareBreakdown {
        platform_revenue: eq.platform_revenue,
        vo_total_revenue: eq.vo_total_revenue,
        mu_payoff: mu_payoff_total,
        ad_payoff: ad_payoff_total,
        mu_utility: mu_utility_total,
        ad_utility: ad_utility_total,
        total: eq.platform_revenue + eq.vo_total_revenue + mu_payoff_total + ad_payoff_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linspace;
    use crate::params::MarketConfig;
    use crate::platform::solve_equilibrium;
    use crate::rng;
    use rand::Rng as _;

    #[test]
    fn closed_form_limits() {
        let p = MarketParams::baseline();
        let mut eq = solve_equilibrium(&p).unwrap();
        eq.phi_a = 0.0;
        assert!((social_welfare_closed(&p, &eq) - 0.5 * 4.0 * 200.0).abs() < 1e-12);

        let mut eq = solve_equilibrium(&p).unwrap();
        eq.p_a = p.a() * p.gamma();
        eq.ad_log_discount = 0.0;
        let mu_only = 0.5 * 4.0 * 200.0 * (1.0 - eq.p_f_star * eq.phi_a);
        assert!((social_welfare_closed(&p, &eq) - mu_only).abs() < 1e-9);
    }

    #[test]
    fn longform_matches_closed_form() {
        let mut r = rng::stream(31, 0);
        for _ in 0..100 {
            let p = MarketParams::new(MarketConfig {
                n: r.random_range(10.0..1000.0),
                theta_max: r.random_range(0.1..5.0),
                beta: r.random_range(0.01..=1.0),
                lambda: r.random_range(0.1..15.0),
                gamma: r.random_range(0.01..=1.0),
                a: r.random_range(0.5..20.0),
                eta: Some(r.random_range(0.05..5.0)),
                ..MarketConfig::baseline()
            })
            .unwrap();
            let eq = solve_equilibrium(&p).unwrap();
            let long = social_welfare_longform(&p, &eq).unwrap();
            let closed = social_welfare_closed(&p, &eq);
            assert!((long.total - closed).abs() <= 1e-6 * closed.abs());
            assert!(long.payment_residual().abs() <= 1e-8 * closed.abs().max(1.0));
        }
    }

    #[test]
    fn mu_and_ad_utility_formulas() {
        let p = MarketParams::baseline();
        let eq = solve_equilibrium(&p).unwrap();
        let long = social_welfare_longform(&p, &eq).unwrap();
        let (n, lambda) = (p.n(), p.lambda());
        let mu = 0.5 * lambda * n * p.theta_max() - 0.5 * lambda * n * eq.p_f_star * eq.phi_a;
        let ad = p.eta() * n * eq.phi_a * (p.a() - eq.p_a / p.gamma() * (1.0 + eq.ad_log_discount));
        assert!((long.mu_utility - mu).abs() < 1e-8 * mu);
        assert!((long.ad_utility - ad).abs() < 1e-8 * ad);
    }

    #[test]
    fn welfare_constant_in_gamma_above_threshold() {
        // gamma >= 2 eta / lambda puts every gamma in the large-lambda regime
        let base = MarketParams::baseline().with_lambda(8.0).unwrap();
        let values: Vec<f64> = linspace(0.25, 1.0, 50)
            .into_iter()
            .map(|g| {
                solve_equilibrium(&base.with_gamma(g).unwrap())
                    .unwrap()
                    .social_welfare
            })
            .collect();
        for v in &values {
            assert!((v - values[0]).abs() < 1e-9 * values[0]);
        }
    }

    #[test]
    fn welfare_nondecreasing_in_gamma() {
        let mut r = rng::stream(32, 0);
        for _ in 0..20 {
            let base = MarketParams::baseline()
                .with_lambda(r.random_range(0.1..15.0))
                .unwrap();
            let mut prev = f64::NEG_INFINITY;
            for g in linspace(0.01, 1.0, 200) {
                let sw = solve_equilibrium(&base.with_gamma(g).unwrap())
                    .unwrap()
                    .social_welfare;
                assert!(sw >= prev - 1e-9 * sw.abs());
                prev = sw;
            }
        }
    }
}
