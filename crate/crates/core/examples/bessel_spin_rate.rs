//! Spin rotation rate Ω_spin/Ω = 1 − J₀(a) and the loop angle γ = 2π[1 − J₀(a)].

use floquet_holonomy::evolution::{geometric_angle, omega_spin};
use floquet_holonomy::transform::bessel_j0;

fn main() {
    println!("    a     J0(a)   Omega_spin/Omega   gamma");
    for k in 0..=16 {
        let a = 0.5 * k as f64;
        println!(
            "{a:5.2}  {:8.5}  {:10.5}  {:12.5}",
            bessel_j0(a),
            omega_spin(1.0, a),
            geometric_angle(a)
        );
    }
    let (a_max, rate_max) = (0..=2000)
        .map(|k| 3.0 + 1.5 * k as f64 / 2000.0)
        .map(|a| (a, omega_spin(1.0, a)))
        .fold((0.0, 0.0), |best, x| if x.1 > best.1 { x } else { best });
    println!("\nspin rotates with the field at a = 2.405: {:.5}", omega_spin(1.0, 2.405));
    println!("fastest spin rotation: {rate_max:.4} Omega at a = {a_max:.4}");
}
