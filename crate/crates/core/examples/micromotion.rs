//! Original-frame solution e^{−iS(t)} U_eff e^{iS(t0)}: with B = 0 at both ends
//! of a measurement schedule the micromotion drops out, mid-schedule it does not.

use floquet_holonomy::driving::harmonic_profile;
use floquet_holonomy::evolution::{full_solution, propagate_effective_frame, propagate_exact, Body};
use floquet_holonomy::protocols::{build_fig2_schedule, MeasurementPlan};
use floquet_holonomy::smallmat::dist;
use floquet_holonomy::spin::SpinSystem;
use floquet_holonomy::transform::{TransformedFrame, VOperatorMap};

fn main() -> floquet_holonomy::Result<()> {
    let sys = SpinSystem::new(1.0, 1.0)?;
    let profile = harmonic_profile(1.0, 0.9)?;
    let plan = MeasurementPlan {
        rho: 0.05,
        ..Default::default()
    };
    let schedule = build_fig2_schedule(&sys, 1.0, 1.5, &plan)?;
    let map = VOperatorMap::new(&sys, &schedule);
    let frame = TransformedFrame::new(map, &profile);
    let t0 = schedule.t_start();
    let loop_mid = {
        let (a, b) = schedule.segment_times()[1];
        0.5 * (a + b) + 0.25 * profile.period()
    };

    println!("     t      |S(t)|   |full - exact|  |U_eff - exact|");
    for t in [loop_mid, schedule.t_end()] {
        let exact = propagate_exact(&map, &profile, t0, t, plan.steps_per_period)?;
        let full = full_solution(&frame, t0, t, Body::Effective { steps: 256 })?;
        let eff = propagate_effective_frame(&frame, t0, t, 256)?;
        println!(
            "{t:9.2}  {:8.2e}  {:12.2e}  {:12.2e}",
            frame.micromotion(profile.phase(t), t).frobenius_norm(),
            dist(&full.u, &exact.u)?,
            dist(&eff.u, &exact.u)?
        );
    }
    Ok(())
}
