//! One sharing ratio for many venues with random popularity and visit rates.

use wifi_monetization::experiments::uniform_sharing_optimum;
use wifi_monetization::MarketParams;

fn main() -> wifi_monetization::Result<()> {
    let res = uniform_sharing_optimum(&MarketParams::baseline(), 2000, 0)?;
    println!("best uniform delta {:.4}", res.delta_u_star);
    println!(
        "expected platform revenue {:.4}",
        res.expected_platform_revenue
    );
    println!(
        "tailored sharing would earn {:.4} ({:.2}% more)",
        res.vo_specific_platform_revenue,
        100.0 * (res.vo_specific_platform_revenue / res.expected_platform_revenue - 1.0)
    );
    Ok(())
}
