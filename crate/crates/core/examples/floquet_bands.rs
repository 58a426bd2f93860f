//! Extended-space matrix K_{nm} = nω δ_{nm} + W⁽ⁿ⁻ᵐ⁾: degenerate bands for a
//! frozen field, and their splitting once the field moves.

use floquet_holonomy::driving::harmonic_profile;
use floquet_holonomy::spin::SpinSystem;
use floquet_holonomy::transform::{ConstantPath, LinearPath, TransformedFrame, VOperatorMap};

fn main() -> floquet_holonomy::Result<()> {
    let sys = SpinSystem::new(1.0, 1.0)?;
    let profile = harmonic_profile(1.0, 0.0)?;
    let frozen = ConstantPath(vec![0.0, 0.0, 1.5]);
    let moving = LinearPath {
        origin: vec![0.0, 0.0, 1.5],
        rate: vec![0.15, 0.0, 0.0],
    };
    for (name, frame) in [
        ("frozen field", TransformedFrame::new(VOperatorMap::new(&sys, &frozen), &profile)),
        ("moving field", TransformedFrame::new(VOperatorMap::new(&sys, &moving), &profile)),
    ] {
        let eig = frame.k_matrix(0.0, 2)?.eigenvalues()?;
        println!("{name}: adiabaticity {:.3e}", frame.adiabaticity(0.0, 2)?);
        for band in eig.chunks(sys.dim()) {
            println!("  {band:+.5?}");
        }
    }
    Ok(())
}
