//! Complexification `g₀ ⊕ i g₀` with the split metric `G₀ ⊕ (−G₀)`.

use crate::error::{Error, Result};
use crate::geometry::MetricLieAlgebra;
use crate::lie::LieAlgebra;
use crate::linalg::{Matrix, SymmetricForm, Tolerance, Vector};

/// Returns the complexified algebra in the basis `(x_1..x_n, y_1..y_n)` with
/// `y_a = i x_a`, and the complex structure `J x_a = y_a`, `J y_a = −x_a`.
pub fn complexify(base: &MetricLieAlgebra) -> Result<(MetricLieAlgebra, Matrix)> {
    let n = base.dim();
    let alg = base.algebra();
    let algebra = LieAlgebra::from_fn(2 * n, |i, j| {
        let mut out = Vector::zeros(2 * n);
        let (a, ai) = (i % n, i >= n);
        let (b, bi) = (j % n, j >= n);
        let c = alg.bracket_basis(a, b);
        match (ai, bi) {
            (false, false) => out.rows_mut(0, n).copy_from(&c),
            (true, true) => out.rows_mut(0, n).copy_from(&(-c)),
            _ => out.rows_mut(n, n).copy_from(&c),
        }
        out
    })?;
    let g0 = base.gram();
    let mut gram = Matrix::zeros(2 * n, 2 * n);
    gram.view_mut((0, 0), (n, n)).copy_from(g0);
    gram.view_mut((n, n), (n, n)).copy_from(&(-g0));

    let m = MetricLieAlgebra::from_parts(algebra, gram, &Tolerance::default())?;
    Ok((m, complex_structure(n)))
}

/// `[[0, −I], [I, 0]]`.
pub fn complex_structure(n: usize) -> Matrix {
    let mut j = Matrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        j[(n + a, a)] = 1.0;
        j[(a, n + a)] = -1.0;
    }
    j
}

/// The metric `(2c/(λ²+μ²)) (λ G′ − μ G′J)` on the complexification of an
/// Einstein base with constant `c`; its Ricci operator is `λI + μJ`.
pub fn type_i_metric(base: &MetricLieAlgebra, c: f64, lambda: f64, mu: f64, tol: &Tolerance) -> Result<MetricLieAlgebra> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(Error::ZeroMu);
    }
    if !(c.is_finite() && lambda.is_finite()) {
        return Err(Error::BadParams("c and lambda must be finite".into()));
    }
    let check = base.is_einstein(tol);
    let scale = base.data_scale();
    let residual = check.residual.max((check.candidate - c).abs());
    if check.constant.is_none() || !tol.passes(residual, scale) {
        return Err(Error::NotEinstein { residual });
    }
    if c == 0.0 {
        return Err(Error::NotEinstein { residual: 0.0 });
    }
    let (complex, j) = complexify(base)?;
    let gp = complex.gram();
    let g = (gp * lambda - gp * &j * mu) * (2.0 * c / (lambda * lambda + mu * mu));
    complex.with_metric(SymmetricForm::new(g, tol)?)
}
