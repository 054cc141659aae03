//! Dense linear algebra for indefinite symmetric bilinear forms.
//!
//! Every operator in the crate (ad maps, connection operators, Ricci
//! operators, complex structures) is a coordinate matrix in the algebra's
//! basis. Bilinear forms are stored by their Gram matrix `G`, so that
//! `<x, y> = xᵀ G y`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Residual policy shared by every predicate in the crate.
///
/// A residual `r` measured on data of magnitude `s` passes when
/// `r <= abs + rel * s`. `rank` is the relative singular-value cutoff used
/// for numerical rank and nondegeneracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub rank: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-9, rel: 1e-9, rank: 1e-8 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64, rank: f64) -> Result<Self> {
        if !(abs > 0.0 && rel > 0.0 && rank > 0.0) || !(abs.is_finite() && rel.is_finite() && rank.is_finite()) {
            return Err(Error::Validation(format!(
                "tolerances must be finite and strictly positive (abs={abs}, rel={rel}, rank={rank})"
            )));
        }
        Ok(Self { abs, rel, rank })
    }

    /// Same threshold for the absolute and relative parts.
    pub fn uniform(eps: f64) -> Self {
        Self { abs: eps, rel: eps, rank: Self::default().rank }
    }

    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale.abs()
    }

    pub fn passes(&self, residual: f64, scale: f64) -> bool {
        residual <= self.threshold(scale)
    }
}

/// `(p, q)`: `p` negative and `q` positive directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn euclidean(n: usize) -> Self {
        Self { p: 0, q: n }
    }

    pub fn lorentz(n: usize) -> Self {
        assert!(n >= 1, "Lorentz signature needs dimension at least 1");
        Self { p: 1, q: n - 1 }
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn is_lorentz(&self) -> bool {
        self.p == 1
    }

    /// `diag(-1, ..., -1, 1, ..., 1)`.
    pub fn diagonal_form(&self) -> SymmetricForm {
        let n = self.dim();
        let gram = Matrix::from_fn(n, n, |i, j| match (i == j, i < self.p) {
            (true, true) => -1.0,
            (true, false) => 1.0,
            _ => 0.0,
        });
        SymmetricForm { gram }
    }
}

/// A nondegenerate symmetric bilinear form, stored by its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricForm {
    gram: Matrix,
}

impl SymmetricForm {
    /// Checks symmetry (`‖G − Gᵀ‖∞ ≤ tol.abs`) and nondegeneracy, then
    /// stores the exactly symmetrized matrix.
    pub fn new(gram: Matrix, tol: &Tolerance) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: gram.nrows(), found: gram.ncols() });
        }
        ensure_finite(&gram, "metric")?;
        let asym = max_abs(&(&gram - gram.transpose()));
        if asym > tol.abs {
            return Err(Error::NotSymmetric { residual: asym });
        }
        let gram = (&gram + gram.transpose()) * 0.5;
        check_nondegenerate(&gram, tol)?;
        Ok(Self { gram })
    }

    pub fn identity(n: usize) -> Self {
        Self { gram: Matrix::identity(n, n) }
    }

    /// The hyperbolic pairing `[[0, I], [I, 0]]` on `ℝⁿ ⊕ ℝⁿ`.
    pub fn split(n: usize) -> Self {
        let mut gram = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            gram[(i, n + i)] = 1.0;
            gram[(n + i, i)] = 1.0;
        }
        Self { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn into_gram(self) -> Matrix {
        self.gram
    }

    pub fn inner(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.gram * y))
    }

    /// Raises an index: solves `G x = covector`.
    pub fn raise(&self, covector: &Vector) -> Vector {
        self.inverse() * covector
    }

    pub fn inverse(&self) -> Matrix {
        self.gram.clone().try_inverse().expect("nondegenerate form is invertible")
    }

    /// `PᵀGP`: the form expressed in the basis given by the columns of `P`.
    pub fn congruent(&self, p: &Matrix, tol: &Tolerance) -> Result<Self> {
        Self::new(p.transpose() * &self.gram * p, tol)
    }
}

pub(crate) fn ensure_finite(m: &Matrix, what: &'static str) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

fn check_nondegenerate(gram: &Matrix, tol: &Tolerance) -> Result<()> {
    if gram.nrows() == 0 {
        return Ok(());
    }
    let sv = gram.clone().singular_values();
    let largest = sv.max();
    let smallest = sv.min();
    if smallest <= tol.rank * largest.max(1.0) {
        return Err(Error::DegenerateForm { smallest });
    }
    Ok(())
}

/// Max-norm of a matrix (largest absolute entry).
pub fn max_abs(a: &Matrix) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn max_abs_vec(a: &Vector) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Max-norm residual of an operator that should vanish.
pub fn operator_residual(a: &Matrix) -> f64 {
    max_abs(a)
}

pub fn signature(form: &SymmetricForm, tol: &Tolerance) -> Result<Signature> {
    let eig = form.gram.clone().symmetric_eigen();
    let cutoff = tol.rank * eig.eigenvalues.amax().max(1.0);
    let mut sig = Signature::new(0, 0);
    for &lambda in eig.eigenvalues.iter() {
        if lambda.abs() <= cutoff {
            return Err(Error::DegenerateForm { smallest: lambda.abs() });
        }
        if lambda < 0.0 {
            sig.p += 1;
        } else {
            sig.q += 1;
        }
    }
    Ok(sig)
}

/// Columns `b_i` with `<b_i, b_j> = signs_i δ_ij`, negative directions first.
///
/// Diagonal Gram matrices keep the coordinate directions (rescaled), so the
/// identity maps to the identity. Otherwise the eigenvectors of `G` are
/// scaled by `|λ|^{-1/2}`.
pub fn pseudo_orthonormal_basis(form: &SymmetricForm, tol: &Tolerance) -> Result<(Matrix, Vec<f64>)> {
    let g = &form.gram;
    let n = g.nrows();
    let is_diagonal = (0..n).all(|i| (0..n).all(|j| i == j || g[(i, j)] == 0.0));
    let (values, vectors): (Vec<f64>, Matrix) = if is_diagonal {
        ((0..n).map(|i| g[(i, i)]).collect(), Matrix::identity(n, n))
    } else {
        let eig = g.clone().symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    let cutoff = tol.rank * values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    if let Some(bad) = values.iter().find(|v| v.abs() <= cutoff) {
        return Err(Error::DegenerateForm { smallest: bad.abs() });
    }
    // stable: negatives first, original order kept within each group
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| values[i] > 0.0);
    let mut basis = Matrix::zeros(n, n);
    let mut signs = Vec::with_capacity(n);
    for (col, &i) in order.iter().enumerate() {
        let scale = values[i].abs().sqrt().recip();
        basis.set_column(col, &(vectors.column(i) * scale));
        signs.push(values[i].signum());
    }
    Ok((basis, signs))
}

/// `A* = G⁻¹ Aᵀ G`, the adjoint with `<Ax, y> = <x, A*y>`.
pub fn metric_adjoint(a: &Matrix, form: &SymmetricForm) -> Result<Matrix> {
    if a.nrows() != form.dim() || a.ncols() != form.dim() {
        return Err(Error::DimensionMismatch { expected: form.dim(), found: a.nrows() });
    }
    Ok(adjoint_with_inverse(a, &form.gram, &form.inverse()))
}

pub(crate) fn adjoint_with_inverse(a: &Matrix, gram: &Matrix, gram_inv: &Matrix) -> Matrix {
    gram_inv * a.transpose() * gram
}

/// Numerical rank with singular values cut at `tol.rank · max(1, σ_max)`.
pub fn numerical_rank(a: &Matrix, tol: &Tolerance) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.clone().singular_values();
    let cutoff = tol.rank * sv.max().max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal (Euclidean) basis of the column space of `a`.
pub fn column_space(a: &Matrix, tol: &Tolerance) -> Matrix {
    let n = a.nrows();
    if a.ncols() == 0 || n == 0 {
        return Matrix::zeros(n, 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let cutoff = tol.rank * svd.singular_values.max().max(1.0);
    let cols: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cutoff)
        .map(|(k, _)| u.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

/// Orthonormal (Euclidean) basis of the null space of `a`.
pub fn null_space(a: &Matrix, tol: &Tolerance) -> Matrix {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Matrix::identity(n, n);
    }
    // pad so the SVD returns a full right basis
    let padded = if a.nrows() < n {
        let mut p = Matrix::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let cutoff = tol.rank * svd.singular_values.max().max(1.0);
    let cols: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(k, _)| vt.row(k).transpose())
        .collect();
    if cols.is_empty() {
        Matrix::zeros(n, 0)
    } else {
        Matrix::from_columns(&cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn form(rows: &[&[f64]]) -> SymmetricForm {
        let n = rows.len();
        SymmetricForm::new(Matrix::from_fn(n, n, |i, j| rows[i][j]), &tol()).unwrap()
    }

    #[test]
    fn signature_of_diagonal_hyperbolic_and_euclidean_forms() {
        assert_eq!(signature(&form(&[&[-1., 0., 0.], &[0., 1., 0.], &[0., 0., 1.]]), &tol()).unwrap(), Signature::new(1, 2));
        // eigenvalues of [[0,1],[1,0]] are the roots of t² − 1
        assert_eq!(signature(&form(&[&[0., 1.], &[1., 0.]]), &tol()).unwrap(), Signature::new(1, 1));
        assert_eq!(signature(&SymmetricForm::identity(4), &tol()).unwrap(), Signature::new(0, 4));
    }

    #[test]
    fn degenerate_forms_are_rejected() {
        let g = Matrix::from_row_slice(2, 2, &[1., 1., 1., 1.]);
        assert!(matches!(SymmetricForm::new(g, &tol()), Err(Error::DegenerateForm { .. })));
        let g = Matrix::from_row_slice(2, 2, &[1., 2., 0., 1.]);
        assert!(matches!(SymmetricForm::new(g, &tol()), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn pseudo_orthonormal_basis_examples() {
        let (b, s) = pseudo_orthonormal_basis(&form(&[&[4.]]), &tol()).unwrap();
        assert_abs_diff_eq!(b[(0, 0)], 0.5, epsilon = 1e-15);
        assert_eq!(s, vec![1.0]);

        let g = form(&[&[0., 1.], &[1., 0.]]);
        let (b, s) = pseudo_orthonormal_basis(&g, &tol()).unwrap();
        assert_eq!(s, vec![-1.0, 1.0]);
        let check = b.transpose() * g.gram() * &b;
        assert_abs_diff_eq!(check, Matrix::from_diagonal(&Vector::from_vec(s)), epsilon = 1e-12);

        let (b, s) = pseudo_orthonormal_basis(&SymmetricForm::identity(3), &tol()).unwrap();
        assert_eq!(b, Matrix::identity(3, 3));
        assert_eq!(s, vec![1.0; 3]);
    }

    #[test]
    fn negative_directions_come_first() {
        let g = form(&[&[1., 0., 0.], &[0., -2., 0.], &[0., 0., 3.]]);
        let (b, s) = pseudo_orthonormal_basis(&g, &tol()).unwrap();
        assert_eq!(s, vec![-1.0, 1.0, 1.0]);
        assert_abs_diff_eq!(b[(1, 0)], 2f64.sqrt().recip(), epsilon = 1e-15);
    }

    #[test]
    fn adjoint_examples() {
        let a = Matrix::from_row_slice(2, 2, &[1., 2., 3., 4.]);
        assert_eq!(metric_adjoint(&a, &SymmetricForm::identity(2)).unwrap(), a.transpose());
        // hyperbolic plane: [[a,b],[c,d]] -> [[d,b],[c,a]]
        let hyp = form(&[&[0., 1.], &[1., 0.]]);
        let adj = metric_adjoint(&a, &hyp).unwrap();
        assert_abs_diff_eq!(adj, Matrix::from_row_slice(2, 2, &[4., 2., 3., 1.]), epsilon = 1e-14);
        // skew for the hyperbolic plane: diag(t, −t)
        let skew = Matrix::from_row_slice(2, 2, &[2., 0., 0., -2.]);
        assert_abs_diff_eq!(metric_adjoint(&skew, &hyp).unwrap() + &skew, Matrix::zeros(2, 2), epsilon = 1e-14);
    }

    #[test]
    fn operator_residual_is_max_abs_entry() {
        assert_eq!(operator_residual(&Matrix::zeros(2, 2)), 0.0);
        assert_eq!(operator_residual(&Matrix::identity(3, 3)), 1.0);
        assert_eq!(operator_residual(&Matrix::from_row_slice(2, 2, &[0., 2., -1., 0.])), 2.0);
    }

    #[test]
    fn rank_and_null_space() {
        let a = Matrix::from_row_slice(2, 3, &[1., 0., 1., 0., 1., 1.]);
        assert_eq!(numerical_rank(&a, &tol()), 2);
        let ns = null_space(&a, &tol());
        assert_eq!(ns.ncols(), 1);
        assert_abs_diff_eq!(max_abs(&(&a * &ns)), 0.0, epsilon = 1e-12);
        assert_eq!(column_space(&a, &tol()).ncols(), 2);
        assert_eq!(numerical_rank(&Matrix::zeros(3, 3), &tol()), 0);
    }

    #[test]
    fn tolerance_policy() {
        let t = Tolerance::default();
        assert!(t.passes(1.5e-9, 1.0));
        assert!(!t.passes(3e-9, 1.0));
        assert!(Tolerance::new(0.0, 1.0, 1.0).is_err());
    }
}
