//! Equilibrium quantities across popularity concentration and visit frequency.

use wifi_monetization::experiments::sweep;
use wifi_monetization::MarketParams;

fn main() -> wifi_monetization::Result<()> {
    let grid = sweep(&MarketParams::baseline(), (0.1, 1.0), (0.5, 15.0), 4)?;
    print!("{:>8}", "gamma");
    for l in &grid.lambda_axis {
        print!("  lambda={l:<6.2}");
    }
    println!();
    for (g, row) in grid.gamma_axis.iter().zip(&grid.cells) {
        print!("{g:>8.2}");
        for eq in row {
            print!("  delta*={:.3}  ", eq.delta_star);
        }
        println!();
    }
    Ok(())
}
