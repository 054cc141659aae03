//! Shapes of the Ricci operator and the normal forms they admit.
//!
//! A Ricci-parallel operator on an indecomposable space is Einstein, or has
//! minimal polynomial `(X−α)(X−ᾱ)` with `α = λ + iμ` (type I), or `X²`
//! (type II). [`classify_ricci`] tests these shapes in that precedence and
//! falls back to `Other`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::constructions::{double_extension, DoubleExtensionSpec};
use crate::error::{Error, Result};
use crate::geometry::MetricLieAlgebra;
use crate::lie::LieAlgebra;
use crate::linalg::{column_space, max_abs, pseudo_orthonormal_basis, Matrix, SymmetricForm, Tolerance, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum RicciType {
    Einstein { constant: f64 },
    TypeI { lambda: f64, mu: f64 },
    TypeII,
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct RicciClassification {
    pub tag: RicciType,
    /// Every residual that was evaluated, by name.
    pub residuals: BTreeMap<String, f64>,
}

fn symmetrize(a: &Matrix) -> Matrix {
    (a + a.transpose()) * 0.5
}

/// `max(1, ‖Ric‖∞)`, the magnitude linear residuals are measured against.
fn ricci_scale(ric: &Matrix) -> f64 {
    max_abs(ric).max(1.0)
}

pub fn classify_ricci(m: &MetricLieAlgebra, tol: &Tolerance) -> RicciClassification {
    let ric = &m.ricci().operator;
    let n = m.dim();
    let id = Matrix::identity(n, n);
    let s = ricci_scale(ric);
    let s2 = s * s;
    let mut residuals = BTreeMap::new();

    let lambda = if n == 0 { 0.0 } else { ric.trace() / n as f64 };
    let einstein = max_abs(&(ric - &id * lambda));
    residuals.insert("einstein".to_string(), einstein);
    if tol.passes(einstein, s) {
        return RicciClassification { tag: RicciType::Einstein { constant: lambda }, residuals };
    }

    let shifted = ric - &id * lambda;
    let shifted_sq = &shifted * &shifted;
    let mu = (-shifted_sq.trace() / n as f64).max(0.0).sqrt();
    let type_one = max_abs(&(&shifted_sq + &id * (mu * mu)));
    residuals.insert("mu".to_string(), mu);
    residuals.insert("type_i".to_string(), type_one);
    // μ is a square root, so its noise floor sits at the quadratic scale
    if tol.passes(type_one, s2) && mu * mu > tol.threshold(s2) {
        return RicciClassification { tag: RicciType::TypeI { lambda, mu }, residuals };
    }

    let norm = max_abs(ric);
    let square = max_abs(&(ric * ric));
    residuals.insert("ricci_norm".to_string(), norm);
    residuals.insert("ricci_squared".to_string(), square);
    if norm > tol.threshold(s) && tol.passes(square, s2) {
        return RicciClassification { tag: RicciType::TypeII, residuals };
    }
    RicciClassification { tag: RicciType::Other, residuals }
}

/// Residuals of the identities a type I decomposition must satisfy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TypeIResiduals {
    /// `‖J² + I‖`
    pub j_squared: f64,
    /// `‖J* − J‖` for the Einstein metric.
    pub self_adjoint: f64,
    /// Einstein constant of the recovered metric (should be 1).
    pub einstein_constant: f64,
    /// `‖ric′ − G′‖`
    pub einstein: f64,
    /// `‖G − (λG′ − μG′J)/(λ²+μ²)‖`
    pub reconstruction: f64,
    /// `max_i ‖∇_{e_i}J − J∇_{e_i}‖`
    pub parallel: f64,
}

/// `Ric = λI + μJ` with `J² = −I`, and the Einstein metric
/// `G′ = λG + μGJ` (Einstein constant 1) that recovers `G`.
#[derive(Debug, Clone)]
pub struct TypeIDecomposition {
    pub j: Matrix,
    pub einstein_metric: SymmetricForm,
    pub lambda: f64,
    pub mu: f64,
    pub residuals: TypeIResiduals,
}

pub fn type_i_decomposition(
    m: &MetricLieAlgebra,
    cls: &RicciClassification,
    tol: &Tolerance,
) -> Result<TypeIDecomposition> {
    let RicciType::TypeI { lambda, mu } = cls.tag else {
        return Err(Error::NotTypeI);
    };
    let n = m.dim();
    let id = Matrix::identity(n, n);
    let ric = &m.ricci().operator;
    let g = m.gram();
    let j = (ric - &id * lambda) / mu;
    let gp = symmetrize(&(g * lambda + g * &j * mu));

    let j_squared = max_abs(&(&j * &j + &id));
    let gp_form = SymmetricForm::new(gp.clone(), tol)?;
    let j_adj = gp_form.inverse() * j.transpose() * &gp;
    let self_adjoint = max_abs(&(&j_adj - &j));
    let einstein_m = m.with_metric(gp_form.clone())?;
    let check = einstein_m.is_einstein(tol);
    let einstein = max_abs(&(&einstein_m.ricci().ric - &gp));
    let rebuilt = (&gp * lambda - &gp * &j * mu) / (lambda * lambda + mu * mu);
    let reconstruction = max_abs(&(g - rebuilt));
    let parallel = m
        .connection()
        .operators()
        .iter()
        .map(|op| max_abs(&(op * &j - &j * op)))
        .fold(0.0, f64::max);

    let residuals = TypeIResiduals {
        j_squared,
        self_adjoint,
        einstein_constant: check.candidate,
        einstein,
        reconstruction,
        parallel,
    };
    // J inherits the error of Ric amplified by 1/μ
    let js = (ricci_scale(ric) / mu).max(1.0);
    let gs = max_abs(g).max(1.0) * js;
    let checks = [
        ("J² = −I", j_squared, js * js),
        ("J self-adjoint", self_adjoint, js * js),
        ("Einstein constant 1", einstein.max((check.candidate - 1.0).abs()), einstein_m.data_scale() * js),
        ("reconstruction", reconstruction, gs * js),
        ("parallel J", parallel, js * m.data_scale()),
    ];
    for (what, r, scale) in checks {
        if !tol.passes(r, scale) {
            return Err(Error::VerificationFailure(format!("type I decomposition: {what} residual {r:.3e}")));
        }
    }
    Ok(TypeIDecomposition { j, einstein_metric: gp_form, lambda, mu, residuals })
}

/// Columns `(u, v, e_1, …, e_n)` with `<u,v> = 1`, `<e_i,e_i> = 1`, all
/// other products zero, and `Ric u = sign·v`, `Ric v = Ric e_i = 0`.
///
/// `sign` is the sign of `ric(u, u)`, an isometry invariant, so the block
/// `[[0,0],[1,0]]` is reached exactly when it is positive.
#[derive(Debug, Clone)]
pub struct TypeIICanonicalBasis {
    pub basis: Matrix,
    pub sign: f64,
    /// `‖BᵀGB − G_canonical‖`
    pub gram_residual: f64,
    /// `‖B⁻¹ Ric B − N‖`
    pub ricci_residual: f64,
}

fn lorentz_canonical_gram(n: usize) -> Matrix {
    let mut g = Matrix::identity(n, n);
    g[(0, 0)] = 0.0;
    g[(1, 1)] = 0.0;
    g[(0, 1)] = 1.0;
    g[(1, 0)] = 1.0;
    g
}

pub fn type_ii_canonical_basis(m: &MetricLieAlgebra, tol: &Tolerance) -> Result<TypeIICanonicalBasis> {
    let sig = m.signature(tol)?;
    if !sig.is_lorentz() {
        return Err(Error::WrongSignature { p: sig.p, q: sig.q });
    }
    if classify_ricci(m, tol).tag != RicciType::TypeII {
        return Err(Error::NotTypeII);
    }
    let n = m.dim();
    let g = m.gram();
    let ric = &m.ricci().operator;
    let s = ricci_scale(ric);
    let gs = max_abs(g).max(1.0);

    // the image is spanned by the largest column
    let col = (0..n).max_by(|&a, &b| ric.column(a).norm().total_cmp(&ric.column(b).norm())).unwrap_or(0);
    let w: Vector = ric.column(col).normalize();
    let ww = w.dot(&(g * &w));
    if !tol.passes(ww.abs(), gs * s) {
        return Err(Error::NullImageNotNull { norm: ww });
    }
    let gw = g * &w;
    let u0 = &gw / gw.norm_squared();
    // Ric x = κ <w, x> w
    let kappa = (ric * &u0).dot(&w);
    let rank_one = max_abs(&(ric - &w * gw.transpose() * kappa));
    if !tol.passes(rank_one, s) {
        return Err(Error::VerificationFailure(format!("Ricci operator is not rank one (residual {rank_one:.3e})")));
    }
    let sign = kappa.signum();
    let b = kappa.abs().sqrt().recip();
    let t = -b * u0.dot(&(g * &u0)) / 2.0;
    let u = &u0 * b + &w * t;
    let v = &w * kappa.abs().sqrt();

    // orthogonal complement of span(u, v)
    let gu = g * &u;
    let gv = g * &v;
    let proj = Matrix::identity(n, n) - &u * gv.transpose() - &v * gu.transpose();
    let q = column_space(&proj, tol);
    if q.ncols() != n - 2 {
        return Err(Error::VerificationFailure(format!(
            "complement of the null plane has dimension {} instead of {}",
            q.ncols(),
            n - 2
        )));
    }
    let restricted = SymmetricForm::new(symmetrize(&(q.transpose() * g * &q)), tol)?;
    let (pon, signs) = pseudo_orthonormal_basis(&restricted, tol)?;
    if signs.iter().any(|&e| e < 0.0) {
        return Err(Error::VerificationFailure("complement of the null plane is not positive definite".into()));
    }
    let e = q * pon;

    let mut basis = Matrix::zeros(n, n);
    basis.set_column(0, &u);
    basis.set_column(1, &v);
    basis.view_mut((0, 2), (n, n - 2)).copy_from(&e);

    let gram_residual = max_abs(&(basis.transpose() * g * &basis - lorentz_canonical_gram(n)));
    let b_inv = basis
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::VerificationFailure("canonical basis is singular".into()))?;
    let mut block = Matrix::zeros(n, n);
    block[(1, 0)] = sign;
    let ricci_residual = max_abs(&(b_inv * ric * &basis - block));
    let cond = (s / kappa.abs()).max(1.0);
    if !tol.passes(gram_residual, gs * cond) || !tol.passes(ricci_residual, s * cond) {
        return Err(Error::VerificationFailure(format!(
            "canonical basis residuals {gram_residual:.3e} (metric), {ricci_residual:.3e} (Ricci)"
        )));
    }
    Ok(TypeIICanonicalBasis { basis, sign, gram_residual, ricci_residual })
}

/// A double extension of Euclidean abelian `ℝⁿ` recovered from a Lorentz
/// type II algebra.
#[derive(Debug, Clone)]
pub struct DoubleExtensionDecomposition {
    pub spec: DoubleExtensionSpec,
    /// Columns `(u, v, e_1, …, e_n)` in the input basis.
    pub basis: Matrix,
    pub sign: f64,
    /// Structure-constant and metric mismatch between the input (in the
    /// canonical basis) and the rebuilt extension.
    pub rebuild_residual: f64,
}

/// Writes a nilpotent Lorentz type II metric algebra as a double extension
/// of a Euclidean abelian algebra. In dimensions 3 and 4 nilpotency is not
/// required when the metric is Ricci-parallel.
pub fn decompose_double_extension(m: &MetricLieAlgebra, tol: &Tolerance) -> Result<DoubleExtensionDecomposition> {
    let n = m.dim();
    let sig = m.signature(tol)?;
    if !sig.is_lorentz() || n < 2 {
        return Err(Error::PreconditionFailed(format!("metric has signature ({}, {}), not Lorentz", sig.p, sig.q)));
    }
    if classify_ricci(m, tol).tag != RicciType::TypeII {
        return Err(Error::PreconditionFailed("Ricci operator is not of type II".into()));
    }
    if !m.algebra().structure_report(tol).is_nilpotent {
        let low_dim_parallel = n <= 4 && m.is_ricci_parallel(tol).passed;
        if !low_dim_parallel {
            return Err(Error::PreconditionFailed("algebra is not nilpotent".into()));
        }
    }
    let canonical = type_ii_canonical_basis(m, tol)?;
    let c = m.change_basis(&canonical.basis, tol)?;
    let alg = c.algebra();
    let scale = c.data_scale();
    let base_dim = n - 2;

    let mut v_central = 0.0_f64;
    let mut u_component = 0.0_f64;
    let mut base_bracket = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            v_central = v_central.max(alg.bracket_basis(1, j).amax());
            u_component = u_component.max(alg.constant(i, j, 0).abs());
            if i >= 2 && j >= 2 {
                for k in 2..n {
                    base_bracket = base_bracket.max(alg.constant(i, j, k).abs());
                }
            }
        }
    }
    for (what, r) in [("[v, g] = 0", v_central), ("no u-components", u_component), ("abelian base", base_bracket)] {
        if !tol.passes(r, scale) {
            return Err(Error::StructureMismatch { what, residual: r });
        }
    }

    let derivation = Matrix::from_fn(base_dim, base_dim, |b, a| alg.constant(0, 2 + a, 2 + b));
    let skew = Matrix::from_fn(base_dim, base_dim, |b, a| alg.constant(2 + a, 2 + b, 1));
    let twist = Vector::from_fn(base_dim, |a, _| alg.constant(0, 2 + a, 1));
    let base = MetricLieAlgebra::from_parts(LieAlgebra::abelian(base_dim), Matrix::identity(base_dim, base_dim), tol)?;
    let spec = DoubleExtensionSpec::new(base, derivation, skew, twist)?;
    let rebuilt = double_extension(&spec, tol).map_err(|e| match e {
        Error::InvalidSpec { condition, residual } => Error::StructureMismatch { what: condition, residual },
        other => other,
    })?;

    let mut rebuild_residual = max_abs(&(rebuilt.gram() - c.gram()));
    for i in 0..n {
        rebuild_residual = rebuild_residual.max(max_abs(&(rebuilt.algebra().ad_basis(i) - alg.ad_basis(i))));
    }
    if !tol.passes(rebuild_residual, scale) {
        return Err(Error::StructureMismatch { what: "rebuilt extension", residual: rebuild_residual });
    }
    Ok(DoubleExtensionDecomposition { spec, basis: canonical.basis, sign: canonical.sign, rebuild_residual })
}
