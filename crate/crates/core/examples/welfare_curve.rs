//! Social welfare along visit frequency, with the integral decomposition at one point.

use wifi_monetization::experiments::{welfare_example_params, welfare_lambda_curve};
use wifi_monetization::solve_equilibrium;
use wifi_monetization::welfare::social_welfare_longform;

fn main() -> wifi_monetization::Result<()> {
    let params = welfare_example_params();
    for (lambda, sw) in welfare_lambda_curve(&params, (0.5, 10.0), 20)? {
        println!("lambda {lambda:6.2}  SW {sw:10.3}");
    }
    let p = params.with_lambda(4.0)?;
    let b = social_welfare_longform(&p, &solve_equilibrium(&p)?)?;
    println!(
        "at lambda 4: platform {:.2} + VO {:.2} + MUs {:.2} + ADs {:.2} = {:.2}",
        b.platform_revenue, b.vo_total_revenue, b.mu_payoff, b.ad_payoff, b.total
    );
    Ok(())
}
