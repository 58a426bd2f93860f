//! Non-harmonic drives: a tabulated square wave, its primitive, p-factor and
//! the weak-driving effective Hamiltonian against the period average of W.

use floquet_holonomy::driving::{harmonic_profile, parse_drive_table, DrivingProfile};
use floquet_holonomy::smallmat::dist;
use floquet_holonomy::spin::{SpinSystem, Vec3};
use floquet_holonomy::transform::{w_fourier, w_spin_closed, weak_driving_w0};

fn main() -> floquet_holonomy::Result<()> {
    let n = 512;
    let mut table = String::from("# phase  f\n");
    for k in 0..n {
        let phase = std::f64::consts::TAU * k as f64 / n as f64;
        let f = if phase < std::f64::consts::PI { 1.0 } else { -1.0 };
        table.push_str(&format!("{phase} {f}\n"));
    }
    let square = DrivingProfile::tabulated(1.0, 0.0, &parse_drive_table(&table)?)?;
    let cosine = harmonic_profile(1.0, 0.0)?;
    println!("p-factor: square {:.5} (pi^2/12 = {:.5}), cosine {:.5}", square.p_factor(), std::f64::consts::PI.powi(2) / 12.0, cosine.p_factor());

    let sys = SpinSystem::new(1.0, 1.0)?;
    let b_dot = Vec3::new(0.0, 0.3, 0.0);
    for (name, profile) in [("square", &square), ("cosine", &cosine)] {
        for a in [0.05, 0.5, 2.0] {
            let b = Vec3::new(0.0, 0.0, a);
            let w0 = w_fourier(0, 512, |th| Ok(w_spin_closed(&sys, &b, &b_dot, profile, th)))?;
            let weak = weak_driving_w0(&sys.zeeman(&b), &sys.zeeman(&b_dot), profile.p_factor(), 1.0)?;
            println!(
                "{name} a = {a}: |W0| = {:.4e}, relative weak-driving error {:.2e}",
                w0.frobenius_norm(),
                dist(&w0, &weak)? / w0.frobenius_norm()
            );
        }
    }
    Ok(())
}
