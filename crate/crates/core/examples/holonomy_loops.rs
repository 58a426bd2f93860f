//! Loop holonomies exp(−iγ F·n̂) and their non-commutativity.

use floquet_holonomy::evolution::{commutator_norm, holonomy_loop};
use floquet_holonomy::smallmat::{dist, Operator};
use floquet_holonomy::spin::{SpinSystem, Vec3};

fn main() -> floquet_holonomy::Result<()> {
    let x = Vec3::new(1.0, 0.0, 0.0);
    let y = Vec3::new(0.0, 1.0, 0.0);
    for f in [0.5, 1.0] {
        let sys = SpinSystem::new(f, 1.0)?;
        let d = sys.dim();
        let at_zero = holonomy_loop(&sys, &y, 2.405)?;
        println!(
            "f = {f}: at a = 2.405, |U - I| = {:.2e}, |U + I| = {:.2e}",
            dist(&at_zero.u, &Operator::identity(d))?,
            dist(&at_zero.u, &Operator::identity(d).scale_re(-1.0))?
        );
        for a in [0.5, 1.0, 2.0, 3.0] {
            let ux = holonomy_loop(&sys, &x, a)?;
            let uy = holonomy_loop(&sys, &y, a)?;
            println!(
                "  a = {a}: gamma = {:.4}, |[U_y, U_x]| = {:.4}",
                ux.gamma,
                commutator_norm(&uy.u, &ux.u)?
            );
        }
    }
    let half = SpinSystem::new(0.5, 1.0)?;
    println!("\nspin-1/2 y-loop at a = 2:\n{:?}", holonomy_loop(&half, &y, 2.0)?.u);
    Ok(())
}
