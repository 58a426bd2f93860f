//! Spin matrices for several f_F, their algebra, and the Zeeman spectrum.

use floquet_holonomy::smallmat::{commutator, dist, herm_eig, I};
use floquet_holonomy::spin::{spin_matrices, SpinSystem, Vec3};

fn main() -> floquet_holonomy::Result<()> {
    for f in [0.5, 1.0, 1.5, 2.0] {
        let [fx, fy, fz] = spin_matrices(f)?;
        let algebra = dist(&commutator(&fx, &fy)?, &fz.scale(I))?;
        let casimir = &(&(&fx * &fx) + &(&fy * &fy)) + &(&fz * &fz);
        println!(
            "f = {f}: dim {}, |[Fx,Fy] - iFz| = {algebra:.1e}, F^2 trace / dim = {:.3}",
            fz.dim(),
            casimir.trace().re / fz.dim() as f64
        );
    }

    let sys = SpinSystem::new(1.0, 0.5)?;
    let b = Vec3::new(0.3, -1.2, 0.8);
    let levels = herm_eig(&sys.zeeman(&b))?.values;
    println!("\nspin 1, g = 0.5, |B| = {:.4}: Zeeman levels {levels:.4?}", b.norm());
    println!("spin 1 Fx:\n{:?}", sys.fx());
    Ok(())
}
