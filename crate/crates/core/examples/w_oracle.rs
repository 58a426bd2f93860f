//! The transformed-frame generator W by three routes: finite differences of
//! R = exp(-i c V), the nested-commutator series, and the spin closed form.

use floquet_holonomy::driving::harmonic_profile;
use floquet_holonomy::smallmat::dist;
use floquet_holonomy::spin::{SpinSystem, Vec3};
use floquet_holonomy::transform::{w_numeric, w_series, w_spin_closed, LinearPath, VOperatorMap};

fn main() -> floquet_holonomy::Result<()> {
    let sys = SpinSystem::new(1.5, 1.0)?;
    let profile = harmonic_profile(1.0, 0.0)?;
    let b_dot = Vec3::new(0.2, -0.5, 0.1);
    let dir = Vec3::new(1.0, 1.0, 2.0).normalize();

    println!("   a   |numeric-series|  |series-closed|  |numeric-closed|");
    for a in [0.1, 0.5, 1.0, 2.0, 4.0, 6.0] {
        let b = dir * a;
        let phase = 1.1;
        let path = LinearPath {
            origin: b.as_slice().to_vec(),
            rate: b_dot.as_slice().to_vec(),
        };
        let wn = w_numeric(&VOperatorMap::new(&sys, &path), &profile, phase, 0.0)?;
        let ws = w_series(profile.c(phase), &sys.zeeman(&b), &sys.zeeman(&b_dot), 20)?;
        let wc = w_spin_closed(&sys, &b, &b_dot, &profile, phase);
        println!(
            "{a:5.1}  {:14.2e}  {:14.2e}  {:14.2e}",
            dist(&wn, &ws)?,
            dist(&ws, &wc)?,
            dist(&wn, &wc)?
        );
    }
    Ok(())
}
