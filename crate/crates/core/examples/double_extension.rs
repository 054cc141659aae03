//! Double extension of an abelian plane: invariants, the parallel-Ricci
//! conditions and the classification of the result.

use metric_lie::classify::classify_ricci;
use metric_lie::constructions::{check_parallel_conditions, double_extension, extension_invariants, DoubleExtensionSpec};
use metric_lie::geometry::MetricLieAlgebra;
use metric_lie::lie::LieAlgebra;
use metric_lie::linalg::{Matrix, Tolerance, Vector};

fn main() -> metric_lie::error::Result<()> {
    let tol = Tolerance::default();
    let plane = MetricLieAlgebra::from_parts(LieAlgebra::abelian(2), Matrix::identity(2, 2), &tol)?;
    let rotation = Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let cases = [
        ("D = I", Matrix::identity(2, 2), Matrix::zeros(2, 2)),
        ("K = rotation", Matrix::zeros(2, 2), rotation),
    ];
    for (label, d, k) in cases {
        let spec = DoubleExtensionSpec::new(plane.clone(), d, k, Vector::from_vec(vec![0.5, 0.0]))?;
        let inv = extension_invariants(&spec);
        let cond = check_parallel_conditions(&spec, &tol);
        let m = double_extension(&spec, &tol)?;
        println!(
            "{label}: gamma {:+.3}, conditions hold {}, Ricci parallel {}, class {:?}",
            inv.gamma,
            cond.passed,
            m.is_ricci_parallel(&tol).passed,
            classify_ricci(&m, &tol).tag
        );
    }
    Ok(())
}
