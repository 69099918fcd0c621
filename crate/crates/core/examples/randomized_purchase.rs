//! Payoff loss when ADs round their optimal quantity at random.

use wifi_monetization::simulation::tau_curve;
use wifi_monetization::{solve_equilibrium, MarketParams};

fn main() -> wifi_monetization::Result<()> {
    let params = MarketParams::baseline();
    let eq = solve_equilibrium(&params)?;
    let curve = tau_curve(&params, &eq, 40)?;
    for (sigma, tau) in curve.iter().step_by(4) {
        println!("sigma {sigma:6.3}  tau {tau:.3e}");
    }
    Ok(())
}
