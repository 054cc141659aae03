//! Recovers double-extension data from a Lorentzian nilpotent algebra whose
//! Ricci operator squares to zero, after hiding it behind a basis change.

use metric_lie::classify::decompose_double_extension;
use metric_lie::constructions::{double_extension, extension_invariants};
use metric_lie::linalg::Tolerance;
use metric_lie::sampling::{random_invertible, random_nilpotent_spec};
use rand::SeedableRng;

fn main() -> metric_lie::error::Result<()> {
    let tol = Tolerance::default();
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let spec = random_nilpotent_spec(&mut rng, 4);
    let hidden = double_extension(&spec, &tol)?.change_basis(&random_invertible(&mut rng, 6), &tol)?;
    let dec = decompose_double_extension(&hidden, &tol)?;
    println!("input gamma {:+.4}, recovered gamma {:+.4} (sign {})", extension_invariants(&spec).gamma, extension_invariants(&dec.spec).gamma, dec.sign);
    println!("recovered base of dim {}, rebuild residual {:.1e}", dec.spec.base.dim(), dec.rebuild_residual);
    println!("D =\n{:.4}K =\n{:.4}", dec.spec.derivation, dec.spec.skew);
    Ok(())
}
