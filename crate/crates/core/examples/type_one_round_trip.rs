//! Builds metrics with Ricci operator λI + μJ on a complexified Einstein
//! algebra and recovers J and the underlying Einstein metric.

use metric_lie::classify::{classify_ricci, type_i_decomposition};
use metric_lie::constructions::catalog::affine_plane;
use metric_lie::constructions::type_i_metric;
use metric_lie::linalg::Tolerance;

fn main() -> metric_lie::error::Result<()> {
    let tol = Tolerance::default();
    let base = affine_plane()?;
    for (lambda, mu) in [(0.0, 1.0), (1.0, 1.0), (-3.0, 5.0)] {
        let m = type_i_metric(&base, -1.0, lambda, mu, &tol)?;
        let cls = classify_ricci(&m, &tol);
        let dec = type_i_decomposition(&m, &cls, &tol)?;
        println!(
            "requested ({lambda}, {mu}) recovered ({:.6}, {:.6}); reconstruction residual {:.1e}, J parallel to {:.1e}",
            dec.lambda, dec.mu, dec.residuals.reconstruction, dec.residuals.parallel
        );
    }
    Ok(())
}
