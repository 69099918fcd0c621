//! Monte Carlo market at the equilibrium prices against the closed forms.

use wifi_monetization::simulation::run_market_simulation;
use wifi_monetization::{solve_equilibrium, MarketParams};

fn main() -> wifi_monetization::Result<()> {
    let params = MarketParams::baseline().with_n(1000.0)?.with_lambda(8.0)?;
    let eq = solve_equilibrium(&params)?;
    let r = run_market_simulation(&params, &eq, 200, 1)?;
    println!(
        "premium  {:.3} vs {:.3}",
        r.empirical_vo_premium_revenue, r.expected_vo_premium_revenue
    );
    println!(
        "VO ads   {:.3} vs {:.3}",
        r.empirical_vo_ad_revenue, r.expected_vo_ad_revenue
    );
    println!(
        "platform {:.3} vs {:.3}",
        r.empirical_platform_revenue, r.expected_platform_revenue
    );
    println!(
        "spaces   {:.1} vs {:.1} (se {:.2})",
        r.empirical_purchased_spaces, r.expected_spaces_sold, r.purchased_spaces_standard_error
    );
    println!(
        "view rate of the largest AD {:.4} vs {:.4} (se {:.1e})",
        r.tagged_ad.empirical_nu, r.tagged_ad.closed_nu, r.tagged_ad.standard_error
    );
    Ok(())
}
