//! Two consecutive field loops, simulated exactly in both orders and compared
//! with the product of closed-form holonomies.

use floquet_holonomy::driving::harmonic_profile;
use floquet_holonomy::protocols::{run_double_loop, MeasurementPlan};
use floquet_holonomy::smallmat::StateVector;
use floquet_holonomy::spin::{SpinSystem, Vec3};

fn main() -> floquet_holonomy::Result<()> {
    let sys = SpinSystem::new(0.5, 1.0)?;
    let profile = harmonic_profile(1.0, 0.0)?;
    let x = Vec3::new(1.0, 0.0, 0.0);
    let y = Vec3::new(0.0, 1.0, 0.0);
    let up = StateVector::basis(2, 0);
    let a = 2.0;
    for rho in [0.2, 0.1, 0.05] {
        let plan = MeasurementPlan {
            rho,
            ..Default::default()
        };
        let yx = run_double_loop(&sys, &profile, a, (y, x), &plan)?;
        let xy = run_double_loop(&sys, &profile, a, (x, y), &plan)?;
        let overlap = yx.exact.apply(&up).inner(&xy.exact.apply(&up)).norm();
        println!(
            "rho = {rho}: |U_exact - U_x U_y| = {:.2e}, |U_exact - U_y U_x| = {:.2e}, order overlap {overlap:.4}",
            yx.distance, xy.distance
        );
    }
    Ok(())
}
