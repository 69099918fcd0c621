//! Solve the three-stage game for the baseline venue and print the outcome.

use wifi_monetization::{solve_equilibrium, MarketParams};

fn main() -> wifi_monetization::Result<()> {
    let params = MarketParams::baseline();
    let eq = solve_equilibrium(&params)?;
    println!("regime {} (omega = {:.4})", eq.regime.name(), eq.omega);
    println!("platform keeps delta* = {:.4} of ad revenue", eq.delta_star);
    println!(
        "VO charges p_f* = {:.4}, so {:.1}% of MUs watch ads",
        eq.p_f_star,
        100.0 * eq.phi_a
    );
    println!(
        "ad price {:.5}, threshold AD type {:.3}",
        eq.p_a, eq.sigma_threshold
    );
    println!(
        "revenues: platform {:.3}, VO ads {:.3}, VO premium {:.3}",
        eq.platform_revenue, eq.vo_ad_revenue, eq.vo_premium_revenue
    );
    println!("social welfare {:.3}", eq.social_welfare);
    Ok(())
}
