//! Check the sharing ratio and Wi-Fi price against numerical maximization in
//! each indicator regime.

use wifi_monetization::oracle::{brute_sharing, brute_wifi_price, QUICK_GRID_POINTS};
use wifi_monetization::platform::{omega_regime, optimal_sharing};
use wifi_monetization::MarketParams;

fn main() -> wifi_monetization::Result<()> {
    for lambda in [0.05, 1.0, 4.0, 40.0] {
        let params = MarketParams::baseline().with_lambda(lambda)?;
        let delta = optimal_sharing(&params)?;
        let sharing = brute_sharing(&params, QUICK_GRID_POINTS)?;
        let wifi = brute_wifi_price(delta, &params, QUICK_GRID_POINTS)?;
        println!(
            "lambda {lambda:>5}: {:<10} delta* {:.4} vs {:.4}, p_f* {:.5} vs {:.5}",
            omega_regime(&params)?.name(),
            delta,
            sharing.argmax,
            wifi.closed_form_arg,
            wifi.argmax
        );
    }
    Ok(())
}
