//! Compares the Koszul Ricci tensor with the structural formula on random
//! metric Lie algebras of mixed signature.

use metric_lie::linalg::{max_abs, Signature, Tolerance};
use metric_lie::sampling::random_metric_lie_algebra;
use rand::SeedableRng;

fn main() -> metric_lie::error::Result<()> {
    let tol = Tolerance::default();
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for dim in 2..=6 {
        for sig in [Signature::euclidean(dim), Signature::lorentz(dim)] {
            let m = random_metric_lie_algebra(&mut rng, dim, sig, &tol)?;
            let diff = max_abs(&(&m.ricci().ric - m.ricci_structural(&tol)?));
            println!("dim {dim} signature ({}, {}): scalar curvature {:+.4}, discrepancy {diff:.1e}", sig.p, sig.q, m.ricci().scalar);
        }
    }
    Ok(())
}
