//! Metrics on `𝔇 ⊕ 𝔇*` and the two-step family built from commuting
//! derivations. Cochains are supplied by the caller and checked here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::MetricLieAlgebra;
use crate::lie::{AntisymmetricMap, LieAlgebra};
use crate::linalg::{max_abs, max_abs_vec, Matrix, Signature, SymmetricForm, Tolerance, Vector};

/// Largest cyclic sum `θ([x_i,x_j],x_k) + θ([x_j,x_k],x_i) + θ([x_k,x_i],x_j)`:
/// the 2-cocycle condition for the trivial module.
pub fn trivial_cocycle_residual(algebra: &LieAlgebra, theta: &AntisymmetricMap) -> f64 {
    let n = algebra.dim();
    let mut worst = 0.0_f64;
    let unit = |i: usize| {
        let mut v = Vector::zeros(n);
        v[i] = 1.0;
        v
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = theta.value(&algebra.bracket_basis(i, j), &unit(k))
                    + theta.value(&algebra.bracket_basis(j, k), &unit(i))
                    + theta.value(&algebra.bracket_basis(k, i), &unit(j));
                worst = worst.max(max_abs_vec(&s));
            }
        }
    }
    worst
}

/// `x_i · φ` for the coadjoint action: `(x_i · φ)_m = −Σ_k c(i,m,k) φ_k`.
fn coadjoint(algebra: &LieAlgebra, i: usize, phi: &Vector) -> Vector {
    let n = algebra.dim();
    Vector::from_fn(n, |m, _| -(0..n).map(|k| algebra.constant(i, m, k) * phi[k]).sum::<f64>())
}

/// Largest cyclic sum of `x₁·θ(x₂,x₃) − θ([x₁,x₂],x₃)`: the cocycle
/// condition for the coadjoint module.
pub fn coadjoint_cocycle_residual(algebra: &LieAlgebra, theta: &AntisymmetricMap) -> f64 {
    let n = algebra.dim();
    let unit = |i: usize| {
        let mut v = Vector::zeros(n);
        v[i] = 1.0;
        v
    };
    let term = |a: usize, b: usize, c: usize| {
        coadjoint(algebra, a, &theta.basis_value(b, c)) - theta.value(&algebra.bracket_basis(a, b), &unit(c))
    };
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = term(i, j, k) + term(j, k, i) + term(k, i, j);
                worst = worst.max(max_abs_vec(&s));
            }
        }
    }
    worst
}

/// Largest `|θ(x_i,x_j)(x_k) + θ(x_i,x_k)(x_j)|`.
pub fn cyclicity_residual(theta: &AntisymmetricMap) -> f64 {
    let n = theta.dim();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((theta.basis_value(i, j)[k] + theta.basis_value(i, k)[j]).abs());
            }
        }
    }
    worst
}

fn cochain_scale(algebra: &LieAlgebra, theta: &AntisymmetricMap) -> f64 {
    let c = algebra.max_constant().max(theta.max_abs()).max(1.0);
    c * c
}

fn check_shape(theta: &AntisymmetricMap, dim: usize, out: usize) -> Result<()> {
    if theta.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: theta.dim() });
    }
    if theta.out_dim() != out {
        return Err(Error::DimensionMismatch { expected: out, found: theta.out_dim() });
    }
    Ok(())
}

/// `g ⊕ ℝᵐ` with `[x, y] = [x, y]_g + θ(x, y)` and `ℝᵐ` central.
fn central_extension(algebra: &LieAlgebra, theta: &AntisymmetricMap) -> Result<LieAlgebra> {
    let n = algebra.dim();
    let m = theta.out_dim();
    LieAlgebra::from_fn(n + m, |i, j| {
        let mut out = Vector::zeros(n + m);
        if j < n {
            out.rows_mut(0, n).copy_from(&algebra.bracket_basis(i, j));
            out.rows_mut(n, m).copy_from(&theta.basis_value(i, j));
        }
        out
    })
}

/// `𝔇 ⊕ 𝔇*` with `𝔇*` central, `[x_i, x_j] = [x_i, x_j]_𝔇 + θ(x_i, x_j)` and
/// the hyperbolic pairing `<x + f, x' + f'> = f(x') + f'(x)`.
pub fn central_extension_metric(algebra: &LieAlgebra, theta: &AntisymmetricMap, tol: &Tolerance) -> Result<MetricLieAlgebra> {
    let n = algebra.dim();
    check_shape(theta, n, n)?;
    let residual = trivial_cocycle_residual(algebra, theta);
    if !tol.passes(residual, cochain_scale(algebra, theta)) {
        return Err(Error::CocycleFailure { residual });
    }
    let ext = central_extension(algebra, theta)?.validated(tol)?;
    MetricLieAlgebra::new(ext, SymmetricForm::split(n))
}

/// `𝔇 ⊕ 𝔇*` with bracket `[x₁,x₂]_𝔇 + x₁·f₂ − x₂·f₁ + θ(x₁,x₂)` for the
/// coadjoint action and the hyperbolic pairing, which is ad-invariant.
pub fn bordemann_cotangent(algebra: &LieAlgebra, theta: &AntisymmetricMap, tol: &Tolerance) -> Result<MetricLieAlgebra> {
    let n = algebra.dim();
    check_shape(theta, n, n)?;
    let scale = cochain_scale(algebra, theta);
    let residual = cyclicity_residual(theta);
    if !tol.passes(residual, scale) {
        return Err(Error::CyclicityFailure { residual });
    }
    let residual = coadjoint_cocycle_residual(algebra, theta);
    if !tol.passes(residual, scale) {
        return Err(Error::CocycleFailure { residual });
    }
    let ext = LieAlgebra::from_fn(2 * n, |i, j| {
        let mut out = Vector::zeros(2 * n);
        if j < n {
            out.rows_mut(0, n).copy_from(&algebra.bracket_basis(i, j));
            out.rows_mut(n, n).copy_from(&theta.basis_value(i, j));
        } else if i < n {
            let mut f = Vector::zeros(n);
            f[j - n] = 1.0;
            out.rows_mut(n, n).copy_from(&coadjoint(algebra, i, &f));
        }
        out
    })?
    .validated(tol)?;
    MetricLieAlgebra::new(ext, SymmetricForm::split(n))
}

/// Residuals reported by [`two_step_parallel_checked`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwoStepResiduals {
    pub commutator: f64,
    pub alpha_condition: f64,
    pub cocycle: f64,
}

/// `𝔇 ⊕ g₀ ⊕ 𝔇*` for an abelian `g₀` with the given signature, commuting
/// `derivations` `D_a` of `g₀`, `α: 𝔇 × 𝔇 → g₀` and a cocycle
/// `θ: (𝔇 ⊕ g₀)² → 𝔇*` of the intermediate bracket
///
/// ```text
/// [D_a, D_b]' = α(D_a, D_b),   [D_a, e]' = D_a e,   [e, e']' = 0.
/// ```
///
/// Basis order `(D_1..D_n, e_1..e_m, f_1..f_n)`, metric `G₀` on the middle
/// block and `<f_a, D_b> = δ_ab`.
pub fn two_step_parallel(
    g0_signature: Signature,
    derivations: &[Matrix],
    alpha: &AntisymmetricMap,
    theta: &AntisymmetricMap,
    tol: &Tolerance,
) -> Result<MetricLieAlgebra> {
    two_step_parallel_checked(g0_signature, derivations, alpha, theta, tol).map(|(m, _)| m)
}

pub fn two_step_parallel_checked(
    g0_signature: Signature,
    derivations: &[Matrix],
    alpha: &AntisymmetricMap,
    theta: &AntisymmetricMap,
    tol: &Tolerance,
) -> Result<(MetricLieAlgebra, TwoStepResiduals)> {
    let n = derivations.len();
    let m = g0_signature.dim();
    for d in derivations {
        if d.nrows() != m || d.ncols() != m {
            return Err(Error::DimensionMismatch { expected: m, found: d.nrows() });
        }
    }
    check_shape(alpha, n, m)?;
    check_shape(theta, n + m, n)?;

    let data = derivations.iter().map(max_abs).fold(alpha.max_abs().max(theta.max_abs()), f64::max).max(1.0);
    let scale = data * data;

    let mut commutator = 0.0_f64;
    for a in 0..n {
        for b in a + 1..n {
            let (da, db) = (&derivations[a], &derivations[b]);
            commutator = commutator.max(max_abs(&(da * db - db * da)));
        }
    }
    if !tol.passes(commutator, scale) {
        return Err(Error::NonCommuting { residual: commutator });
    }

    let mut alpha_condition = 0.0_f64;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let s = &derivations[a] * alpha.basis_value(b, c)
                    + &derivations[b] * alpha.basis_value(c, a)
                    + &derivations[c] * alpha.basis_value(a, b);
                alpha_condition = alpha_condition.max(max_abs_vec(&s));
            }
        }
    }
    if !tol.passes(alpha_condition, scale) {
        return Err(Error::PreconditionFailed(format!(
            "alpha violates the cyclic derivation condition (residual {alpha_condition:.3e})"
        )));
    }

    let inner = LieAlgebra::from_fn(n + m, |i, j| {
        let mut out = Vector::zeros(n + m);
        match (i < n, j < n) {
            (true, true) => out.rows_mut(n, m).copy_from(&alpha.basis_value(i, j)),
            (true, false) => out.rows_mut(n, m).copy_from(&derivations[i].column(j - n)),
            _ => {}
        }
        out
    })?;
    let cocycle = trivial_cocycle_residual(&inner, theta);
    if !tol.passes(cocycle, scale) {
        return Err(Error::CocycleFailure { residual: cocycle });
    }
    let ext = central_extension(&inner, theta)?.validated(tol)?;

    let dim = 2 * n + m;
    let mut gram = Matrix::zeros(dim, dim);
    gram.view_mut((n, n), (m, m)).copy_from(g0_signature.diagonal_form().gram());
    for a in 0..n {
        gram[(a, n + m + a)] = 1.0;
        gram[(n + m + a, a)] = 1.0;
    }
    let metric = MetricLieAlgebra::new(ext, SymmetricForm::new(gram, tol)?)?;
    Ok((metric, TwoStepResiduals { commutator, alpha_condition, cocycle }))
}
