//! Optimal ad price with a finite AD population, compared with the grid oracle,
//! and the zeta ratio that measures how close the asymptotic price comes.

use wifi_monetization::oracle::{brute_ad_price, zeta, QUICK_GRID_POINTS};
use wifi_monetization::pricing::optimal_ad_price_finite;
use wifi_monetization::{MarketConfig, MarketParams};

fn main() -> wifi_monetization::Result<()> {
    for (m, sigma_max) in [(2.0, 2.0), (6.0, 6.0), (15.0, 3.0)] {
        let params = MarketParams::new(MarketConfig::baseline().finite(m, sigma_max))?;
        let closed = optimal_ad_price_finite(&params)?;
        let oracle = brute_ad_price(0.05, 0.7, &params, QUICK_GRID_POINTS)?;
        println!(
            "M={m:>4} sigma_max={sigma_max:>4}: {:?} price {:.5}, oracle {:.5} (gap {:.1e}), zeta {:.5}",
            closed.regime,
            closed.price,
            oracle.argmax,
            oracle.rel_gap,
            zeta(&params)?
        );
    }
    Ok(())
}
