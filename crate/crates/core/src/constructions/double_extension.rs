//! Double extensions of a metric Lie algebra by a hyperbolic plane.
//!
//! Given a base `(g₀, <·,·>₀)` and data `(D, K, L)`, the extension lives on
//! `ℝu ⊕ ℝv ⊕ g₀` with basis order `(u, v, e_1, …, e_n)`, metric
//! `[[0,1],[1,0]] ⊕ G₀`, and brackets
//!
//! ```text
//! [u, e]  = D e + <L, e>₀ v
//! [e, e'] = [e, e']₀ + <K e, e'>₀ v
//! ```
//!
//! with `v` central.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ConnectionTensor, MetricLieAlgebra, ParallelCheck};
use crate::lie::LieAlgebra;
use crate::linalg::{adjoint_with_inverse, max_abs, max_abs_vec, Matrix, Tolerance, Vector};

/// Base metric algebra plus the extension data.
#[derive(Debug, Clone)]
pub struct DoubleExtensionSpec {
    pub base: MetricLieAlgebra,
    /// `D`, a derivation of the base.
    pub derivation: Matrix,
    /// `K`, skew for the base metric.
    pub skew: Matrix,
    /// `L ∈ g₀`.
    pub twist: Vector,
}

/// Residuals of the three conditions that make the bracket a Lie bracket.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpecResiduals {
    pub skewness: f64,
    pub derivation: f64,
    pub compatibility: f64,
    pub scale: f64,
}

/// `Δ`, `Γ` and the base mean curvature vector `Z₀`.
#[derive(Debug, Clone)]
pub struct ExtensionInvariants {
    pub delta: Vector,
    pub gamma: f64,
    pub z0: Vector,
}

/// Residuals of the five conditions characterising Ricci-parallel extensions.
#[derive(Debug, Clone, Serialize)]
pub struct ParallelConditions {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub base_parallel: ParallelCheck,
    pub scale: f64,
    pub passed: bool,
}

impl ParallelConditions {
    pub fn residuals(&self) -> [f64; 5] {
        [self.c1, self.c2, self.c3, self.c4, self.c5]
    }
}

impl DoubleExtensionSpec {
    pub fn new(base: MetricLieAlgebra, derivation: Matrix, skew: Matrix, twist: Vector) -> Result<Self> {
        let n = base.dim();
        for m in [&derivation, &skew] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
            }
            if !m.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite("extension data"));
            }
        }
        if twist.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: twist.len() });
        }
        if !twist.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("extension data"));
        }
        Ok(Self { base, derivation, skew, twist })
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    fn base_inverse(&self) -> Matrix {
        self.base.metric().inverse()
    }

    /// `D*` for the base metric.
    pub fn derivation_adjoint(&self) -> Matrix {
        adjoint_with_inverse(&self.derivation, self.base.gram(), &self.base_inverse())
    }

    /// Magnitude used to scale every residual computed from the data.
    pub fn scale(&self) -> f64 {
        let data = max_abs(&self.derivation).max(max_abs(&self.skew)).max(max_abs_vec(&self.twist));
        self.base.data_scale().max(data * data).max(data)
    }

    pub fn residuals(&self) -> SpecResiduals {
        let n = self.base_dim();
        let g = self.base.gram();
        let alg = self.base.algebra();
        let d = &self.derivation;

        let gk = g * &self.skew;
        let skewness = max_abs(&(gk.transpose() + &gk));

        let mut derivation = 0.0_f64;
        for a in 0..n {
            let dea = d.column(a).into_owned();
            for b in a + 1..n {
                let deb = d.column(b).into_owned();
                let lhs = d * alg.bracket_basis(a, b);
                let ea = unit(n, a);
                let eb = unit(n, b);
                let rhs = alg.bracket_unchecked(&dea, &eb) + alg.bracket_unchecked(&ea, &deb);
                derivation = derivation.max(max_abs_vec(&(lhs - rhs)));
            }
        }

        // <(KD + D*K) e_a, e_b>₀ = (G₀ (KD + D*K))_{ba}
        let m = g * (&self.skew * d + self.derivation_adjoint() * &self.skew);
        let gl = g * &self.twist;
        let mut compatibility = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                let lhs = alg.bracket_basis(a, b).dot(&gl);
                compatibility = compatibility.max((lhs - m[(b, a)]).abs());
            }
        }
        SpecResiduals { skewness, derivation, compatibility, scale: self.scale() }
    }

    pub fn validate(&self, tol: &Tolerance) -> Result<SpecResiduals> {
        let r = self.residuals();
        for (condition, residual) in
            [("skewness", r.skewness), ("derivation", r.derivation), ("compatibility", r.compatibility)]
        {
            if !tol.passes(residual, r.scale) {
                return Err(Error::InvalidSpec { condition, residual });
            }
        }
        Ok(r)
    }
}

fn unit(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}

/// Structure constants of the extension without any validation.
pub(crate) fn extension_algebra(spec: &DoubleExtensionSpec) -> Result<LieAlgebra> {
    let n = spec.base_dim();
    let g = spec.base.gram();
    let alg = spec.base.algebra();
    let gl = g * &spec.twist;
    // <K e_a, e_b>₀ = (Kᵀ G₀)_{ab}
    let kg = spec.skew.transpose() * g;
    LieAlgebra::from_fn(n + 2, |i, j| {
        let mut out = Vector::zeros(n + 2);
        match (i, j) {
            (0, 1) | (1, _) => {}
            (0, j) => {
                let a = j - 2;
                out.rows_mut(2, n).copy_from(&spec.derivation.column(a));
                out[1] = gl[a];
            }
            (i, j) => {
                let (a, b) = (i - 2, j - 2);
                out.rows_mut(2, n).copy_from(&alg.bracket_basis(a, b));
                out[1] = kg[(a, b)];
            }
        }
        out
    })
}

pub(crate) fn extension_gram(base_gram: &Matrix) -> Matrix {
    let n = base_gram.nrows();
    let mut g = Matrix::zeros(n + 2, n + 2);
    g[(0, 1)] = 1.0;
    g[(1, 0)] = 1.0;
    g.view_mut((2, 2), (n, n)).copy_from(base_gram);
    g
}

/// Builds the `(n+2)`-dimensional extension after validating the data.
pub fn double_extension(spec: &DoubleExtensionSpec, tol: &Tolerance) -> Result<MetricLieAlgebra> {
    spec.validate(tol)?;
    let algebra = extension_algebra(spec)?;
    let residual = algebra.jacobi_residual();
    if !tol.passes(residual, spec.scale()) {
        return Err(Error::JacobiFailure { residual });
    }
    MetricLieAlgebra::from_parts(algebra, extension_gram(spec.base.gram()), tol)
}

/// `Δ` from `G₀Δ = rhs` and `Γ` term by term. The last term of `Γ` pairs
/// `L` and `Z₀` with the base metric.
pub fn extension_invariants(spec: &DoubleExtensionSpec) -> ExtensionInvariants {
    let n = spec.base_dim();
    let g = spec.base.gram();
    let g_inv = spec.base_inverse();
    let alg = spec.base.algebra();
    let d = &spec.derivation;
    let k = &spec.skew;
    let d_adj = spec.derivation_adjoint();
    let z0 = &g_inv * alg.trace_functional();

    let sym = d + &d_adj;
    let dzk = g * ((d - k) * &z0);
    let ad_adj: Vec<Matrix> = (0..n).map(|j| adjoint_with_inverse(&alg.ad_basis(j), g, &g_inv)).collect();
    let rhs = Vector::from_fn(n, |a, _| {
        // S⁰_{e_a}: column j is (ad₀ e_j)* e_a
        let s = Matrix::from_fn(n, n, |r, j| ad_adj[j][(r, a)]);
        -0.5 * (&sym * alg.ad_basis(a)).trace() + 0.5 * dzk[a] - 0.25 * (k * s).trace()
    });
    let delta = &g_inv * rhs;

    let gamma = -0.5 * (d * d).trace() - 0.5 * (&d_adj * d).trace() - 0.25 * (k * k).trace()
        + spec.twist.dot(&(g * &z0));
    ExtensionInvariants { delta, gamma, z0 }
}

/// Levi-Civita connection of the extension written directly in terms of
/// `(D, K, L)` and the base connection.
pub fn closed_form_connection(spec: &DoubleExtensionSpec) -> ConnectionTensor {
    let n = spec.base_dim();
    let g = spec.base.gram();
    let d = &spec.derivation;
    let k = &spec.skew;
    let d_adj = spec.derivation_adjoint();
    let l = &spec.twist;
    let gl = g * l;
    let base_nabla = spec.base.connection();

    let minus = d - &d_adj - k;
    let plus = d + &d_adj + k;
    let g_plus = g * &plus;

    let mut ops = Vec::with_capacity(n + 2);
    // ∇_u
    let mut nu = Matrix::zeros(n + 2, n + 2);
    for r in 0..n {
        nu[(2 + r, 0)] = -l[r];
    }
    for a in 0..n {
        for r in 0..n {
            nu[(2 + r, 2 + a)] = 0.5 * minus[(r, a)];
        }
        nu[(1, 2 + a)] = gl[a];
    }
    ops.push(nu);
    ops.push(Matrix::zeros(n + 2, n + 2));
    for a in 0..n {
        let mut ne = Matrix::zeros(n + 2, n + 2);
        for r in 0..n {
            ne[(2 + r, 0)] = -0.5 * plus[(r, a)];
        }
        let base_op = base_nabla.operator(a);
        for b in 0..n {
            for r in 0..n {
                ne[(2 + r, 2 + b)] = base_op[(r, b)];
            }
            // ½ <(D + D* + K) e_a, e_b>₀
            ne[(1, 2 + b)] = 0.5 * g_plus[(b, a)];
        }
        ops.push(ne);
    }
    ConnectionTensor::from_operators(ops)
}

/// Ricci operator of the extension from `Δ`, `Γ` and the base Ricci operator.
pub fn closed_form_ricci(spec: &DoubleExtensionSpec) -> Matrix {
    let n = spec.base_dim();
    let inv = extension_invariants(spec);
    let ric0 = &spec.base.ricci().operator;
    let g_delta = spec.base.gram() * &inv.delta;
    let mut ric = Matrix::zeros(n + 2, n + 2);
    ric.view_mut((2, 0), (n, 1)).copy_from(&inv.delta);
    ric[(1, 0)] = inv.gamma;
    ric.view_mut((2, 2), (n, n)).copy_from(ric0);
    for a in 0..n {
        ric[(1, 2 + a)] = g_delta[a];
    }
    ric
}

/// Evaluates the five algebraic conditions on the data that are equivalent
/// to the extension being Ricci-parallel, together with parallelism of the
/// base.
pub fn check_parallel_conditions(spec: &DoubleExtensionSpec, tol: &Tolerance) -> ParallelConditions {
    let n = spec.base_dim();
    let g = spec.base.gram();
    let d = &spec.derivation;
    let k = &spec.skew;
    let d_adj = spec.derivation_adjoint();
    let inv = extension_invariants(spec);
    let delta = &inv.delta;
    let ric0 = &spec.base.ricci().operator;
    let minus = d - &d_adj - k;
    let plus = d + &d_adj + k;

    let c1 = spec.twist.dot(&(g * delta)).abs();
    let c2 = max_abs_vec(&(ric0 * &spec.twist + &minus * delta * 0.5));
    let c3 = max_abs(&(ric0 * &minus - &minus * ric0));
    let c4 = max_abs_vec(&((d + &d_adj - k) * delta));
    let nabla0 = spec.base.connection();
    let c5 = (0..n)
        .map(|a| {
            let lhs = nabla0.operator(a) * delta;
            let rhs = ric0 * plus.column(a) * 0.5;
            max_abs_vec(&(lhs + rhs))
        })
        .fold(0.0, f64::max);

    let base_parallel = spec.base.is_ricci_parallel(tol);
    let inv_scale = 1.0_f64.max(max_abs_vec(delta)).max(inv.gamma.abs());
    let scale = spec.scale().max(inv_scale * inv_scale);
    let passed = [c1, c2, c3, c4, c5].iter().all(|&r| tol.passes(r, scale)) && base_parallel.passed;
    ParallelConditions { c1, c2, c3, c4, c5, base_parallel, scale, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymmetricForm;

    fn abelian_base(n: usize) -> MetricLieAlgebra {
        MetricLieAlgebra::from_parts(LieAlgebra::abelian(n), Matrix::identity(n, n), &Tolerance::default()).unwrap()
    }

    fn affine_base() -> MetricLieAlgebra {
        let alg = LieAlgebra::new(2, [((0, 1), Vector::from_vec(vec![0.0, 1.0]))]).unwrap();
        MetricLieAlgebra::from_parts(alg, Matrix::identity(2, 2), &Tolerance::default()).unwrap()
    }

    fn rotation() -> Matrix {
        Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
    }

    #[test]
    fn identity_derivation_on_plane() {
        let tol = Tolerance::default();
        let spec = DoubleExtensionSpec::new(abelian_base(2), Matrix::identity(2, 2), Matrix::zeros(2, 2), Vector::zeros(2))
            .unwrap();
        let m = double_extension(&spec, &tol).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(m.algebra().jacobi_residual(), 0.0);
        let sig = m.signature(&tol).unwrap();
        assert_eq!((sig.p, sig.q), (1, 3));
        assert!(!m.algebra().structure_report(&tol).is_nilpotent);
        let inv = extension_invariants(&spec);
        assert_eq!(inv.delta, Vector::zeros(2));
        assert!((inv.gamma + 2.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_gives_two_step_nilpotent() {
        let tol = Tolerance::default();
        let spec = DoubleExtensionSpec::new(abelian_base(2), Matrix::zeros(2, 2), rotation(), Vector::zeros(2)).unwrap();
        let m = double_extension(&spec, &tol).unwrap();
        let rep = m.algebra().structure_report(&tol);
        assert!(rep.is_nilpotent);
        assert_eq!(rep.nilpotency_step, Some(2));
        assert!((extension_invariants(&spec).gamma - 0.5).abs() < 1e-15);
    }

    #[test]
    fn incompatible_data_is_rejected() {
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 0.0]));
        let spec = DoubleExtensionSpec::new(abelian_base(2), d, rotation(), Vector::zeros(2)).unwrap();
        match double_extension(&spec, &Tolerance::default()) {
            Err(Error::InvalidSpec { condition, .. }) => assert_eq!(condition, "compatibility"),
            other => panic!("unexpected {other:?}"),
        }
        let not_skew = DoubleExtensionSpec::new(abelian_base(2), Matrix::zeros(2, 2), Matrix::identity(2, 2), Vector::zeros(2))
            .unwrap();
        assert!(matches!(
            double_extension(&not_skew, &Tolerance::default()),
            Err(Error::InvalidSpec { condition: "skewness", .. })
        ));
    }

    #[test]
    fn affine_base_delta() {
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![0.0, 1.0]));
        let spec = DoubleExtensionSpec::new(affine_base(), d, Matrix::zeros(2, 2), Vector::zeros(2)).unwrap();
        spec.validate(&Tolerance::default()).unwrap();
        let inv = extension_invariants(&spec);
        assert!((inv.delta[0] + 1.0).abs() < 1e-14);
        assert!(inv.delta[1].abs() < 1e-14);
    }

    #[test]
    fn closed_forms_match_direct_computation() {
        let tol = Tolerance::default();
        let d = Matrix::from_row_slice(2, 2, &[0.0, 0.0, 0.7, 1.3]);
        let spec = DoubleExtensionSpec::new(affine_base(), d, Matrix::zeros(2, 2), Vector::from_vec(vec![0.4, 0.0]))
            .unwrap();
        spec.validate(&tol).unwrap();
        let m = double_extension(&spec, &tol).unwrap();
        let closed = closed_form_connection(&spec);
        for i in 0..4 {
            assert!(max_abs(&(closed.operator(i) - m.connection().operator(i))) < 1e-12, "operator {i}");
        }
        assert!(max_abs(&(closed_form_ricci(&spec) - &m.ricci().operator)) < 1e-12);
    }

    #[test]
    fn parallel_condition_examples() {
        let tol = Tolerance::default();
        let flat = DoubleExtensionSpec::new(abelian_base(3), Matrix::identity(3, 3), Matrix::zeros(3, 3), Vector::from_vec(vec![1.0, 2.0, 3.0]))
            .unwrap();
        assert!(check_parallel_conditions(&flat, &tol).passed);

        let zero = DoubleExtensionSpec::new(affine_base(), Matrix::zeros(2, 2), Matrix::zeros(2, 2), Vector::zeros(2)).unwrap();
        let report = check_parallel_conditions(&zero, &tol);
        assert!(report.passed);
        let m = double_extension(&zero, &tol).unwrap();
        assert!(m.is_ricci_parallel(&tol).passed);

        // D = diag(0,1) has Δ = −e1 yet satisfies every condition
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![0.0, 1.0]));
        let diag = DoubleExtensionSpec::new(affine_base(), d, Matrix::zeros(2, 2), Vector::zeros(2)).unwrap();
        assert!(check_parallel_conditions(&diag, &tol).passed);
        assert!(double_extension(&diag, &tol).unwrap().is_ricci_parallel(&tol).passed);
        // an off-diagonal derivation breaks C2, C4 and C5
        let d = Matrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let bad = DoubleExtensionSpec::new(affine_base(), d, Matrix::zeros(2, 2), Vector::zeros(2)).unwrap();
        let report = check_parallel_conditions(&bad, &tol);
        assert!(!report.passed);
        assert!(report.c5 > 0.1 && report.c4 > 0.1);
        assert!(!double_extension(&bad, &tol).unwrap().is_ricci_parallel(&tol).passed);
    }

    #[test]
    fn metric_block_layout() {
        let base = abelian_base(2).with_metric(SymmetricForm::identity(2)).unwrap();
        let spec = DoubleExtensionSpec::new(base, Matrix::zeros(2, 2), Matrix::zeros(2, 2), Vector::zeros(2)).unwrap();
        let m = double_extension(&spec, &Tolerance::default()).unwrap();
        let g = m.gram();
        assert_eq!(g[(0, 1)], 1.0);
        assert_eq!(g[(0, 0)], 0.0);
        assert_eq!(g[(2, 2)], 1.0);
    }
}
