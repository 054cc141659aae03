//! Cotangent-type constructions: trivial central extensions by the dual,
//! and two-step nilpotent Heisenberg presentations.

use metric_lie::constructions::{central_extension_metric, two_step_parallel};
use metric_lie::lie::{AntisymmetricMap, LieAlgebra};
use metric_lie::linalg::{max_abs, Matrix, Signature, Tolerance, Vector};

fn main() -> metric_lie::error::Result<()> {
    let tol = Tolerance::default();
    let sl2 = LieAlgebra::new(
        3,
        [
            ((0, 1), Vector::from_vec(vec![0., 2., 0.])),
            ((0, 2), Vector::from_vec(vec![0., 0., -2.])),
            ((1, 2), Vector::from_vec(vec![1., 0., 0.])),
        ],
    )?;
    let m = central_extension_metric(&sl2, &AntisymmetricMap::zero(3, 3), &tol)?;
    let killing = m.algebra().killing_form();
    println!(
        "sl(2) ⋉ dual: dim {}, ‖ric + K/2‖ = {:.1e}, Ricci parallel {}",
        m.dim(),
        max_abs(&(&m.ricci().ric + killing * 0.5)),
        m.is_ricci_parallel(&tol).passed
    );

    let theta = AntisymmetricMap::new(4, 1, [((0, 1), Vector::from_vec(vec![1.])), ((2, 3), Vector::from_vec(vec![1.]))])?;
    let h2 = two_step_parallel(Signature::euclidean(3), &[Matrix::zeros(3, 3)], &AntisymmetricMap::zero(1, 3), &theta, &tol)?;
    let report = h2.algebra().structure_report(&tol);
    println!(
        "two-step presentation: dim {}, nilpotency step {:?}, center dim {}, Ricci parallel {}",
        h2.dim(),
        report.nilpotency_step,
        report.center_dim,
        h2.is_ricci_parallel(&tol).passed
    );
    Ok(())
}
