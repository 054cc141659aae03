//! Ricci spectra of the Heisenberg algebras and of their rank-one Einstein
//! extensions.

use metric_lie::constructions::catalog::{einstein_solvable, heisenberg};

fn main() -> metric_lie::error::Result<()> {
    for n in 1..=4 {
        let h = heisenberg(n)?;
        let mut ev: Vec<f64> = h.ricci().operator.complex_eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        let e = einstein_solvable(n)?;
        let c = e.ricci().operator.trace() / e.dim() as f64;
        println!("H_{n}: Ricci eigenvalues {ev:.4?}; extension of dim {} has Einstein constant {c:.6}", e.dim());
    }
    Ok(())
}
