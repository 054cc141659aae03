//! Left-invariant pseudo-Riemannian geometry at the Lie algebra level.
//!
//! All tensors have constant coefficients in the algebra's basis. The
//! Levi-Civita connection comes from the Koszul formula
//! `∇_x y = ½[x,y] + U(x,y)`, curvature from
//! `R(x,y) = [∇_x, ∇_y] − ∇_{[x,y]}`, and the Ricci tensor from
//! `ric(x,y) = tr(ξ ↦ R(ξ,x)y)`.
//!
//! [`MetricLieAlgebra::ricci_structural`] evaluates the Ricci tensor a second
//! way, through the Killing form, the mean curvature vector and the `S_x`
//! operators in a pseudo-orthonormal basis. The two routes share nothing
//! beyond the structure constants and the Gram matrix.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, ValidatedAlgebra};
use crate::linalg::{
    adjoint_with_inverse, max_abs, pseudo_orthonormal_basis, signature, Matrix, Signature, SymmetricForm,
    Tolerance, Vector,
};

/// A validated Lie algebra together with a nondegenerate metric.
#[derive(Debug, Clone)]
pub struct MetricLieAlgebra {
    algebra: ValidatedAlgebra,
    metric: SymmetricForm,
    gram_inv: Matrix,
    connection: OnceLock<ConnectionTensor>,
    ricci: OnceLock<RicciData>,
}

/// `coeffs[(i*n + j)*n + k]` is the `e_k` component of `∇_{e_i} e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionTensor {
    dim: usize,
    operators: Vec<Matrix>,
}

impl ConnectionTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> f64 {
        self.operators[i][(k, j)]
    }

    /// The operator `∇_{e_i}`; column `j` holds `∇_{e_i} e_j`.
    pub fn operator(&self, i: usize) -> &Matrix {
        &self.operators[i]
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    /// `∇_x` for an arbitrary `x`.
    pub fn along(&self, x: &Vector) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, op) in self.operators.iter().enumerate() {
            if x[i] != 0.0 {
                m += op * x[i];
            }
        }
        m
    }

    pub fn covariant(&self, x: &Vector, y: &Vector) -> Vector {
        self.along(x) * y
    }

    pub(crate) fn from_operators(operators: Vec<Matrix>) -> Self {
        let dim = operators.len();
        Self { dim, operators }
    }
}

/// `R(e_i, e_j)` as operators; entry `(l, k)` of operator `(i, j)` is the
/// `e_l` component of `R(e_i, e_j) e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    operators: Vec<Matrix>,
}

impl CurvatureTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Component of `R(e_i, e_j) e_k` along `e_l`.
    pub fn coeff(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.operators[i * self.dim + j][(l, k)]
    }

    pub fn operator(&self, i: usize, j: usize) -> &Matrix {
        &self.operators[i * self.dim + j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicciData {
    /// `ric(e_i, e_j)`.
    pub ric: Matrix,
    /// `Ric = G⁻¹ ric`, so `<Ric x, y> = ric(x, y)`.
    pub operator: Matrix,
    pub scalar: f64,
    /// `Z` with `<Z, x> = tr(ad x)`.
    pub mean_curvature: Vector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParallelCheck {
    pub passed: bool,
    /// `max_i ‖Ric ∘ ∇_{e_i} − ∇_{e_i} ∘ Ric‖∞`.
    pub commutator_residual: f64,
    /// `max ‖∇ric‖∞`.
    pub nabla_ric_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EinsteinCheck {
    /// Set when `‖ric − c G‖∞` passes.
    pub constant: Option<f64>,
    /// `scalar / dim`.
    pub candidate: f64,
    pub residual: f64,
    pub ricci_flat: bool,
    /// `‖ric‖∞`.
    pub flat_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdInvariance {
    pub passed: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryCheck {
    pub passed: bool,
    pub smallest_singular_value: f64,
    pub bracket_residual: f64,
    pub metric_residual: f64,
}

impl MetricLieAlgebra {
    pub fn new(algebra: ValidatedAlgebra, metric: SymmetricForm) -> Result<Self> {
        if algebra.dim() != metric.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: metric.dim() });
        }
        let gram_inv = metric.inverse();
        Ok(Self { algebra, metric, gram_inv, connection: OnceLock::new(), ricci: OnceLock::new() })
    }

    /// Validates both the algebra (Jacobi) and the Gram matrix.
    pub fn from_parts(algebra: LieAlgebra, gram: Matrix, tol: &Tolerance) -> Result<Self> {
        let algebra = algebra.validated(tol)?;
        let metric = SymmetricForm::new(gram, tol)?;
        Self::new(algebra, metric)
    }

    pub fn algebra(&self) -> &ValidatedAlgebra {
        &self.algebra
    }

    pub fn metric(&self) -> &SymmetricForm {
        &self.metric
    }

    pub fn gram(&self) -> &Matrix {
        self.metric.gram()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn signature(&self, tol: &Tolerance) -> Result<Signature> {
        signature(&self.metric, tol)
    }

    /// Same algebra with a different metric.
    pub fn with_metric(&self, metric: SymmetricForm) -> Result<Self> {
        Self::new(self.algebra.clone(), metric)
    }

    /// The same metric Lie algebra written in the basis `f_a = Σ_i P_ia e_i`.
    pub fn change_basis(&self, p: &Matrix, tol: &Tolerance) -> Result<Self> {
        let algebra = self.algebra.change_basis(p)?.validated(tol)?;
        let metric = self.metric.congruent(p, tol)?;
        Self::new(algebra, metric)
    }

    /// `max(1, ‖G‖∞, c_max²)`: ric is quadratic in the structure constants.
    pub fn data_scale(&self) -> f64 {
        1.0_f64.max(max_abs(self.gram())).max(self.algebra.max_constant().powi(2))
    }

    fn check_len(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    /// `<[e_z, e_x], e_y>` for all basis triples, indexed `[(z*n + x)*n + y]`.
    fn lowered_constants(&self) -> Vec<f64> {
        let n = self.dim();
        let g = self.gram();
        let mut out = vec![0.0; n * n * n];
        for z in 0..n {
            for x in 0..n {
                for y in 0..n {
                    out[(z * n + x) * n + y] = (0..n).map(|k| self.algebra.constant(z, x, k) * g[(k, y)]).sum();
                }
            }
        }
        out
    }

    /// `U(x,y)` defined by `<U(x,y), z> = ½(<[z,x],y> + <x,[z,y]>)`.
    pub fn u_map(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_len(x)?;
        self.check_len(y)?;
        let n = self.dim();
        let g = self.gram();
        let gx = g * x;
        let gy = g * y;
        let lower = Vector::from_fn(n, |z, _| {
            let ad_z = self.algebra.ad_basis(z);
            0.5 * ((&ad_z * x).dot(&gy) + gx.dot(&(&ad_z * y)))
        });
        Ok(&self.gram_inv * lower)
    }

    /// Levi-Civita connection via the Koszul formula. Memoized.
    pub fn connection(&self) -> &ConnectionTensor {
        self.connection.get_or_init(|| {
            let n = self.dim();
            let cl = self.lowered_constants();
            let operators = (0..n)
                .map(|i| {
                    let mut op = Matrix::zeros(n, n);
                    for j in 0..n {
                        let lower = Vector::from_fn(n, |z, _| 0.5 * (cl[(z * n + i) * n + j] + cl[(z * n + j) * n + i]));
                        let col = &self.gram_inv * lower + self.algebra.bracket_basis(i, j) * 0.5;
                        op.set_column(j, &col);
                    }
                    op
                })
                .collect();
            ConnectionTensor { dim: n, operators }
        })
    }

    pub fn curvature(&self) -> CurvatureTensor {
        let n = self.dim();
        let nabla = self.connection();
        let mut operators = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let a = nabla.operator(i);
                let b = nabla.operator(j);
                let mut r = a * b - b * a;
                for m in 0..n {
                    let c = self.algebra.constant(i, j, m);
                    if c != 0.0 {
                        r -= nabla.operator(m) * c;
                    }
                }
                operators.push(r);
            }
        }
        CurvatureTensor { dim: n, operators }
    }

    /// Ricci data from the trace of the curvature tensor. Memoized.
    pub fn ricci(&self) -> &RicciData {
        self.ricci.get_or_init(|| {
            let n = self.dim();
            let r = self.curvature();
            let ric = Matrix::from_fn(n, n, |x, y| (0..n).map(|i| r.coeff(i, x, y, i)).sum());
            let operator = &self.gram_inv * &ric;
            let scalar = operator.trace();
            let mean_curvature = &self.gram_inv * self.algebra.trace_functional();
            RicciData { ric, operator, scalar, mean_curvature }
        })
    }

    /// Ricci tensor from the structural formula
    /// `ric = −½K − ½(<[Z,·],·> + <·,[Z,·]>) − ½ tr((ad x)* ad y) + ¼ tr(S_x* S_y)`,
    /// evaluated in a pseudo-orthonormal basis.
    pub fn ricci_structural(&self, tol: &Tolerance) -> Result<Matrix> {
        let n = self.dim();
        let g = self.gram();
        let (basis, signs) = pseudo_orthonormal_basis(&self.metric, tol)?;
        let killing = self.algebra.killing_form();

        let z = &self.gram_inv * self.algebra.trace_functional();
        let g_ad_z = g * self.algebra.ad(&z)?;
        let mean_term = g_ad_z.transpose() + &g_ad_z;

        // Σ_i ε_i <[x, b_i], [y, b_i]>
        let mut ad_term = Matrix::zeros(n, n);
        for (b, eps) in basis.column_iter().zip(&signs) {
            let w = self.algebra.ad(&b.into_owned())?;
            ad_term += (w.transpose() * g * &w) * *eps;
        }

        // S_x(y) = (ad y)*(x); column j of S_{e_x} is (ad e_j)* e_x
        let ad_adj: Vec<Matrix> = (0..n)
            .map(|j| adjoint_with_inverse(&self.algebra.ad_basis(j), g, &self.gram_inv))
            .collect();
        let s_ops: Vec<Matrix> = (0..n)
            .map(|x| Matrix::from_fn(n, n, |k, j| ad_adj[j][(k, x)]))
            .collect();
        let s_adj: Vec<Matrix> = s_ops.iter().map(|s| adjoint_with_inverse(s, g, &self.gram_inv)).collect();
        let s_term = Matrix::from_fn(n, n, |x, y| (&s_adj[x] * &s_ops[y]).trace());

        Ok(killing * -0.5 - mean_term * 0.5 - ad_term * 0.5 + s_term * 0.25)
    }

    /// `(∇_{e_i} ric)(e_j, e_k) = −ric(∇_{e_i}e_j, e_k) − ric(e_j, ∇_{e_i}e_k)`;
    /// element `i` of the result is the matrix over `(j, k)`.
    pub fn nabla_ric(&self) -> Vec<Matrix> {
        let ric = &self.ricci().ric;
        self.connection()
            .operators()
            .iter()
            .map(|op| -(op.transpose() * ric + ric * op))
            .collect()
    }

    pub fn is_ricci_parallel(&self, tol: &Tolerance) -> ParallelCheck {
        let ric_op = &self.ricci().operator;
        let commutator_residual = self
            .connection()
            .operators()
            .iter()
            .map(|op| max_abs(&(ric_op * op - op * ric_op)))
            .fold(0.0, f64::max);
        let nabla_ric_residual = self.nabla_ric().iter().map(max_abs).fold(0.0, f64::max);
        let scale = self.data_scale();
        ParallelCheck {
            passed: tol.passes(commutator_residual, scale) && tol.passes(nabla_ric_residual, scale),
            commutator_residual,
            nabla_ric_residual,
        }
    }

    pub fn is_einstein(&self, tol: &Tolerance) -> EinsteinCheck {
        let data = self.ricci();
        let n = self.dim().max(1) as f64;
        let candidate = data.scalar / n;
        let residual = max_abs(&(&data.ric - self.gram() * candidate));
        let flat_residual = max_abs(&data.ric);
        let scale = self.data_scale();
        EinsteinCheck {
            constant: tol.passes(residual, scale).then_some(candidate),
            candidate,
            residual,
            ricci_flat: tol.passes(flat_residual, scale),
            flat_residual,
        }
    }

    /// Residual of `<[x,y],z> + <y,[x,z]> = 0` over basis triples.
    pub fn is_ad_invariant(&self, tol: &Tolerance) -> AdInvariance {
        let g = self.gram();
        let residual = (0..self.dim())
            .map(|i| {
                let ga = g * self.algebra.ad_basis(i);
                max_abs(&(ga.transpose() + &ga))
            })
            .fold(0.0, f64::max);
        AdInvariance { passed: tol.passes(residual, self.data_scale()), residual }
    }
}

/// Checks that `phi` (columns = images of the basis of `m1`, in the basis of
/// `m2`) is an isomorphism of Lie algebras preserving the metrics.
pub fn verify_isometry(
    phi: &Matrix,
    m1: &MetricLieAlgebra,
    m2: &MetricLieAlgebra,
    tol: &Tolerance,
) -> Result<IsometryCheck> {
    let n = m1.dim();
    if m2.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m2.dim() });
    }
    if phi.nrows() != n || phi.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: phi.nrows() });
    }
    let sv = phi.clone().singular_values();
    let smallest = sv.min();
    let invertible = smallest > tol.rank * sv.max().max(1.0);

    let images: Vec<Vector> = (0..n).map(|i| phi.column(i).into_owned()).collect();
    let mut bracket_residual = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            let lhs = phi * m1.algebra().bracket_basis(i, j);
            let rhs = m2.algebra().bracket_unchecked(&images[i], &images[j]);
            bracket_residual = bracket_residual.max((lhs - rhs).amax());
        }
    }
    let metric_residual = max_abs(&(phi.transpose() * m2.gram() * phi - m1.gram()));
    let scale = m1.data_scale().max(m2.data_scale()) * max_abs(phi).max(1.0).powi(2);
    Ok(IsometryCheck {
        passed: invertible && tol.passes(bracket_residual, scale) && tol.passes(metric_residual, scale),
        smallest_singular_value: smallest,
        bracket_residual,
        metric_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn e(n: usize, i: usize) -> Vector {
        let mut v = Vector::zeros(n);
        v[i] = 1.0;
        v
    }

    fn affine() -> MetricLieAlgebra {
        let g = LieAlgebra::new(2, [((0, 1), e(2, 1))]).unwrap();
        MetricLieAlgebra::from_parts(g, Matrix::identity(2, 2), &tol()).unwrap()
    }

    fn heisenberg1() -> MetricLieAlgebra {
        let a = (2.0_f64 / 3.0).sqrt();
        let g = LieAlgebra::new(3, [((0, 1), e(3, 2) * a)]).unwrap();
        MetricLieAlgebra::from_parts(g, Matrix::identity(3, 3), &tol()).unwrap()
    }

    fn sl2_killing() -> MetricLieAlgebra {
        let g = LieAlgebra::new(3, [((0, 1), e(3, 1) * 2.0), ((0, 2), e(3, 2) * -2.0), ((1, 2), e(3, 0))]).unwrap();
        let k = g.killing_form();
        MetricLieAlgebra::from_parts(g, k, &tol()).unwrap()
    }

    fn abelian(n: usize, gram: Matrix) -> MetricLieAlgebra {
        MetricLieAlgebra::from_parts(LieAlgebra::abelian(n), gram, &tol()).unwrap()
    }

    #[test]
    fn u_map_examples() {
        let a = affine();
        assert_abs_diff_eq!(a.u_map(&e(2, 1), &e(2, 1)).unwrap(), e(2, 0), epsilon = 1e-14);
        let s = sl2_killing();
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(s.u_map(&e(3, i), &e(3, j)).unwrap(), Vector::zeros(3), epsilon = 1e-14);
            }
        }
        let flat = abelian(3, Matrix::from_diagonal(&Vector::from_vec(vec![-1., 1., 2.])));
        assert_eq!(flat.u_map(&e(3, 0), &e(3, 2)).unwrap(), Vector::zeros(3));
    }

    #[test]
    fn connection_examples() {
        let a = affine();
        let c = a.connection();
        // ∇_{e2}e2 = e1, ∇_{e2}e1 = −e2, ∇_{e1} = 0
        assert_abs_diff_eq!(c.operator(1).column(1).into_owned(), e(2, 0), epsilon = 1e-14);
        assert_abs_diff_eq!(c.operator(1).column(0).into_owned(), -e(2, 1), epsilon = 1e-14);
        assert_abs_diff_eq!(c.operator(0).clone(), Matrix::zeros(2, 2), epsilon = 1e-14);

        let s = sl2_killing();
        for i in 0..3 {
            assert_abs_diff_eq!(s.connection().operator(i).clone(), s.algebra().ad_basis(i) * 0.5, epsilon = 1e-14);
        }
        let flat = abelian(2, Matrix::identity(2, 2));
        assert!(flat.connection().operators().iter().all(|m| max_abs(m) == 0.0));
    }

    #[test]
    fn curvature_examples() {
        let a = affine();
        let r = a.curvature();
        // R(e1,e2)e2 = −e1
        assert_abs_diff_eq!(r.coeff(0, 1, 1, 0), -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.coeff(0, 1, 1, 1), 0.0, epsilon = 1e-14);

        let s = sl2_killing();
        let r = s.curvature();
        for i in 0..3 {
            for j in 0..3 {
                let expected = s.algebra().ad(&s.algebra().bracket_basis(i, j)).unwrap() * -0.25;
                assert_abs_diff_eq!(r.operator(i, j).clone(), expected, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn ricci_examples() {
        let h = heisenberg1();
        let third = 1.0 / 3.0;
        assert_abs_diff_eq!(
            h.ricci().operator.clone(),
            Matrix::from_diagonal(&Vector::from_vec(vec![-third, -third, third])),
            epsilon = 1e-14
        );
        let a = affine();
        assert_abs_diff_eq!(a.ricci().ric.clone(), -Matrix::identity(2, 2), epsilon = 1e-14);
        assert_abs_diff_eq!(a.ricci().mean_curvature.clone(), e(2, 0), epsilon = 1e-14);
        let flat = abelian(3, Matrix::identity(3, 3));
        assert_eq!(flat.ricci().ric, Matrix::zeros(3, 3));
        assert_eq!(flat.ricci().mean_curvature, Vector::zeros(3));
    }

    #[test]
    fn structural_ricci_examples() {
        let h = heisenberg1();
        assert_abs_diff_eq!(h.ricci_structural(&tol()).unwrap(), h.ricci().ric.clone(), epsilon = 1e-14);
        let s = sl2_killing();
        assert_abs_diff_eq!(s.ricci_structural(&tol()).unwrap(), s.gram() * -0.25, epsilon = 1e-13);
        assert_abs_diff_eq!(s.ricci().operator.clone(), Matrix::identity(3, 3) * -0.25, epsilon = 1e-13);
        let flat = abelian(2, Matrix::from_row_slice(2, 2, &[0., 1., 1., 0.]));
        assert_eq!(flat.ricci_structural(&tol()).unwrap(), Matrix::zeros(2, 2));
    }

    #[test]
    fn nabla_ric_examples() {
        let a = affine();
        assert!(a.nabla_ric().iter().all(|m| max_abs(m) < 1e-14));
        let s = sl2_killing();
        assert!(s.nabla_ric().iter().all(|m| max_abs(m) < 1e-13));
        // affine plane × ℝ, ric = diag(−1, −1, 0)
        let g = LieAlgebra::new(3, [((0, 1), e(3, 1))]).unwrap();
        let prod = MetricLieAlgebra::from_parts(g, Matrix::identity(3, 3), &tol()).unwrap();
        assert_abs_diff_eq!(
            prod.ricci().ric.clone(),
            Matrix::from_diagonal(&Vector::from_vec(vec![-1., -1., 0.])),
            epsilon = 1e-14
        );
        assert!(prod.nabla_ric().iter().all(|m| max_abs(m) < 1e-14));
    }

    #[test]
    fn parallel_einstein_and_invariance_predicates() {
        assert!(sl2_killing().is_ricci_parallel(&tol()).passed);
        let h = heisenberg1().is_ricci_parallel(&tol());
        assert!(!h.passed && h.commutator_residual > 0.1);
        assert!(affine().is_ricci_parallel(&tol()).passed);

        let a = affine().is_einstein(&tol());
        assert_abs_diff_eq!(a.constant.unwrap(), -1.0, epsilon = 1e-14);
        assert!(!a.ricci_flat);
        assert_eq!(heisenberg1().is_einstein(&tol()).constant, None);
        let flat = abelian(2, Matrix::identity(2, 2)).is_einstein(&tol());
        assert_eq!(flat.constant, Some(0.0));
        assert!(flat.ricci_flat);

        assert!(sl2_killing().is_ad_invariant(&tol()).passed);
        assert!(!heisenberg1().is_ad_invariant(&tol()).passed);
        assert!(abelian(3, Matrix::from_diagonal(&Vector::from_vec(vec![-1., 1., 2.]))).is_ad_invariant(&tol()).passed);
    }

    #[test]
    fn isometry_examples() {
        let h = heisenberg1();
        assert!(verify_isometry(&Matrix::identity(3, 3), &h, &h, &tol()).unwrap().passed);

        let flat = abelian(3, Matrix::identity(3, 3));
        let perm = Matrix::from_row_slice(3, 3, &[0., 1., 0., 0., 0., 1., 1., 0., 0.]);
        assert!(verify_isometry(&perm, &flat, &flat, &tol()).unwrap().passed);

        let check = verify_isometry(&(Matrix::identity(3, 3) * 2.0), &h, &h, &tol()).unwrap();
        assert!(!check.passed);
        assert_abs_diff_eq!(check.metric_residual, 3.0, epsilon = 1e-14);

        assert!(matches!(
            verify_isometry(&Matrix::identity(2, 2), &h, &h, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn memoized_values_are_stable_across_threads() {
        let h = heisenberg1();
        let first = h.ricci().ric.clone();
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| assert_eq!(h.ricci().ric, first));
            }
        });
    }
}
