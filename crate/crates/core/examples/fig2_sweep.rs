//! Loop measurement sweep: exact spin-1 probabilities after one field loop
//! against the closed-form holonomy prediction.
//!
//! cargo run --release --example fig2_sweep -- [rho] [steps_per_period]

use floquet_holonomy::driving::harmonic_profile;
use floquet_holonomy::protocols::{run_fig2, MeasurementPlan};
use floquet_holonomy::spin::SpinSystem;

fn main() -> floquet_holonomy::Result<()> {
    let mut args = std::env::args().skip(1);
    let rho: f64 = args.next().map_or(0.1, |s| s.parse().expect("rho"));
    let steps: usize = args.next().map_or(512, |s| s.parse().expect("steps"));

    let sys = SpinSystem::new(1.0, 1.0)?;
    let profile = harmonic_profile(1.0, 0.0)?;
    let grid: Vec<f64> = (0..=16).map(|k| 0.25 * k as f64).collect();
    let plan = MeasurementPlan {
        rho,
        steps_per_period: steps,
        ..Default::default()
    };
    let rows = run_fig2(&sys, &profile, &grid, &plan)?;

    println!("rho = {rho}, steps/period = {steps}");
    println!("    a   gamma    p(+1)   p(0)    p(-1)  | analytic               | dev");
    let mut worst: f64 = 0.0;
    for r in &rows {
        println!(
            "{:5.2} {:7.4}  {:.4} {:.4} {:.4} | {:.4} {:.4} {:.4} | {:.2e}",
            r.a, r.gamma, r.exact[0], r.exact[1], r.exact[2], r.analytic[0], r.analytic[1], r.analytic[2], r.max_dev
        );
        worst = worst.max(r.max_dev);
    }
    println!("max deviation {worst:.3e}");
    Ok(())
}
