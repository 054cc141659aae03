//! Lie algebras given by structure constants.

use std::collections::BTreeMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{column_space, max_abs, max_abs_vec, null_space, Matrix, Tolerance, Vector};

/// A finite-dimensional real Lie algebra in a fixed basis `e_0, …, e_{n-1}`.
///
/// Only the brackets `[e_i, e_j]` with `i < j` are stored; the rest follows
/// from antisymmetry. A raw `LieAlgebra` may violate Jacobi; see
/// [`LieAlgebra::validated`].
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    structure: BTreeMap<(usize, usize), Vector>,
    basis_names: Option<Vec<String>>,
    // full antisymmetric table, c[(i*n + j)*n + k] = <[e_i, e_j]>_k
    dense: Vec<f64>,
}

impl LieAlgebra {
    pub fn new<I>(dim: usize, brackets: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Vector)>,
    {
        let mut structure = BTreeMap::new();
        for ((i, j), coeffs) in brackets {
            if i >= j {
                return Err(Error::BadBracket { i, j, reason: "indices must satisfy i < j".into() });
            }
            if j >= dim {
                return Err(Error::BadBracket { i, j, reason: format!("index out of range for dimension {dim}") });
            }
            if coeffs.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: coeffs.len() });
            }
            if !coeffs.iter().all(|c| c.is_finite()) {
                return Err(Error::NonFinite("structure constants"));
            }
            if structure.insert((i, j), coeffs).is_some() {
                return Err(Error::BadBracket { i, j, reason: "duplicate bracket record".into() });
            }
        }
        let dense = densify(dim, &structure);
        Ok(Self { dim, structure, basis_names: None, dense })
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(dim, std::iter::empty()).expect("empty bracket table is well formed")
    }

    /// Builds the algebra from a bracket function on basis indices; only
    /// pairs `i < j` are queried and zero brackets are dropped.
    pub fn from_fn(dim: usize, mut bracket: impl FnMut(usize, usize) -> Vector) -> Result<Self> {
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let v = bracket(i, j);
                if v.iter().any(|&c| c != 0.0) {
                    entries.push(((i, j), v));
                }
            }
        }
        Self::new(dim, entries)
    }

    pub fn with_basis_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: names.len() });
        }
        self.basis_names = Some(names);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> &BTreeMap<(usize, usize), Vector> {
        &self.structure
    }

    pub fn basis_names(&self) -> Option<&[String]> {
        self.basis_names.as_deref()
    }

    /// Component `k` of `[e_i, e_j]`.
    #[inline]
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.dense[(i * self.dim + j) * self.dim + k]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        Vector::from_fn(self.dim, |k, _| self.constant(i, j, k))
    }

    pub fn max_constant(&self) -> f64 {
        self.dense.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    fn check_len(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    out[k] += w * self.dense[base + k];
                }
            }
        }
        out
    }

    /// `ad(e_i)`: column `j` holds `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> Matrix {
        let n = self.dim;
        Matrix::from_fn(n, n, |k, j| self.constant(i, j, k))
    }

    pub fn ad(&self, x: &Vector) -> Result<Matrix> {
        self.check_len(x)?;
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            if x[i] != 0.0 {
                m += self.ad_basis(i) * x[i];
            }
        }
        Ok(m)
    }

    /// Largest cyclic-sum residual `‖[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]‖∞`
    /// over basis triples `i < j < k`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += self.constant(j, k, m) * self.constant(i, m, l)
                                + self.constant(k, i, m) * self.constant(j, m, l)
                                + self.constant(i, j, m) * self.constant(k, m, l);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `K_ij = tr(ad e_i ∘ ad e_j)`. May be degenerate.
    pub fn killing_form(&self) -> Matrix {
        let n = self.dim;
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut k = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = (&ads[i] * &ads[j]).trace();
                k[(i, j)] = t;
                k[(j, i)] = t;
            }
        }
        k
    }

    /// `τ_i = tr(ad e_i)`; vanishes exactly when the algebra is unimodular.
    pub fn trace_functional(&self) -> Vector {
        let n = self.dim;
        Vector::from_fn(n, |i, _| (0..n).map(|j| self.constant(i, j, j)).sum())
    }

    /// Structure constants in the basis `f_a = Σ_i P_ia e_i`.
    pub fn change_basis(&self, p: &Matrix) -> Result<LieAlgebra> {
        let n = self.dim;
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.nrows() });
        }
        let p_inv = p
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Validation("change of basis is not invertible".into()))?;
        let cols: Vec<Vector> = (0..n).map(|a| p.column(a).into_owned()).collect();
        let mut out = Self::from_fn(n, |a, b| &p_inv * self.bracket_unchecked(&cols[a], &cols[b]))?;
        out.basis_names = None;
        Ok(out)
    }

    /// Jacobi check at scale `max(1, c_max)²`.
    pub fn validated(self, tol: &Tolerance) -> Result<ValidatedAlgebra> {
        let residual = self.jacobi_residual();
        let scale = self.max_constant().max(1.0).powi(2);
        if !tol.passes(residual, scale) {
            return Err(Error::JacobiFailure { residual });
        }
        Ok(ValidatedAlgebra(self))
    }

    pub fn structure_report(&self, tol: &Tolerance) -> StructureReport {
        let n = self.dim;
        let full = Matrix::identity(n, n);

        // lower central series g ⊃ [g,g] ⊃ [g,[g,g]] ⊃ …
        let mut lower = vec![n];
        let mut current = full.clone();
        let mut nilpotent = n == 0;
        loop {
            let next = self.bracket_span(&full, &current, tol);
            let d = next.ncols();
            if d == 0 {
                nilpotent = true;
                break;
            }
            if d == current.ncols() {
                break;
            }
            lower.push(d);
            current = next;
        }
        let derived_dim = self.bracket_span(&full, &full, tol).ncols();

        let mut solvable = n == 0;
        let mut current = full.clone();
        loop {
            let next = self.bracket_span(&current, &current, tol);
            if next.ncols() == 0 {
                solvable = true;
                break;
            }
            if next.ncols() == current.ncols() {
                break;
            }
            current = next;
        }

        // center = ∩ ker ad(e_j)^T-stacked: x with [x, e_j] = 0 for all j
        let mut stacked = Matrix::zeros(n * n, n);
        for j in 0..n {
            for x in 0..n {
                for k in 0..n {
                    stacked[(j * n + k, x)] = self.constant(x, j, k);
                }
            }
        }
        let center_dim = null_space(&stacked, tol).ncols();

        let tau = self.trace_functional();
        let unimodular = tol.passes(max_abs_vec(&tau), self.max_constant());

        StructureReport {
            is_nilpotent: nilpotent,
            is_solvable: solvable || nilpotent,
            is_unimodular: unimodular || nilpotent,
            center_dim,
            derived_dim,
            nilpotency_step: nilpotent.then_some(if n == 0 { 0 } else { lower.len() }),
        }
    }

    /// A basis of the derivation algebra `Der(g)`, as matrices `D` with
    /// `D[x,y] = [Dx,y] + [x,Dy]`.
    pub fn derivations(&self, tol: &Tolerance) -> Vec<Matrix> {
        let n = self.dim;
        if n == 0 {
            return Vec::new();
        }
        // unknown D[p][q] sits at column p*n + q
        let pairs = n * (n.saturating_sub(1)) / 2;
        let mut system = Matrix::zeros((pairs * n).max(1), n * n);
        let mut row = 0;
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    for m in 0..n {
                        system[(row, k * n + m)] += self.constant(i, j, m);
                        system[(row, m * n + i)] -= self.constant(m, j, k);
                        system[(row, m * n + j)] -= self.constant(i, m, k);
                    }
                    row += 1;
                }
            }
        }
        let kernel = null_space(&system, tol);
        kernel
            .column_iter()
            .map(|c| Matrix::from_fn(n, n, |p, q| c[p * n + q]))
            .collect()
    }

    /// Orthonormal basis of `span{[a, b] : a ∈ cols(left), b ∈ cols(right)}`.
    fn bracket_span(&self, left: &Matrix, right: &Matrix, tol: &Tolerance) -> Matrix {
        let n = self.dim;
        let mut cols = Vec::with_capacity(left.ncols() * right.ncols());
        for a in left.column_iter() {
            let a = a.into_owned();
            for b in right.column_iter() {
                cols.push(self.bracket_unchecked(&a, &b.into_owned()));
            }
        }
        if cols.is_empty() {
            return Matrix::zeros(n, 0);
        }
        let m = Matrix::from_columns(&cols);
        if max_abs(&m) == 0.0 {
            return Matrix::zeros(n, 0);
        }
        column_space(&m, tol)
    }
}

fn densify(n: usize, structure: &BTreeMap<(usize, usize), Vector>) -> Vec<f64> {
    let mut dense = vec![0.0; n * n * n];
    for (&(i, j), v) in structure {
        for k in 0..n {
            dense[(i * n + j) * n + k] = v[k];
            dense[(j * n + i) * n + k] = -v[k];
        }
    }
    dense
}

/// A Lie algebra whose Jacobi residual passed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedAlgebra(LieAlgebra);

impl ValidatedAlgebra {
    pub fn into_inner(self) -> LieAlgebra {
        self.0
    }
}

impl Deref for ValidatedAlgebra {
    type Target = LieAlgebra;

    fn deref(&self) -> &LieAlgebra {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub is_nilpotent: bool,
    pub is_solvable: bool,
    pub is_unimodular: bool,
    pub center_dim: usize,
    pub derived_dim: usize,
    pub nilpotency_step: Option<usize>,
}

/// An antisymmetric bilinear map `ℝⁿ × ℝⁿ → ℝᵐ` (a 2-cochain), stored on
/// basis pairs `i < j` like the structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMap {
    dim: usize,
    out_dim: usize,
    values: BTreeMap<(usize, usize), Vector>,
}

impl AntisymmetricMap {
    pub fn zero(dim: usize, out_dim: usize) -> Self {
        Self { dim, out_dim, values: BTreeMap::new() }
    }

    pub fn new<I>(dim: usize, out_dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Vector)>,
    {
        let mut values = BTreeMap::new();
        for ((i, j), v) in entries {
            if i >= j || j >= dim {
                return Err(Error::BadBracket { i, j, reason: format!("need i < j < {dim}") });
            }
            if v.len() != out_dim {
                return Err(Error::DimensionMismatch { expected: out_dim, found: v.len() });
            }
            if !v.iter().all(|c| c.is_finite()) {
                return Err(Error::NonFinite("cochain"));
            }
            values.insert((i, j), v);
        }
        Ok(Self { dim, out_dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Vector> {
        &self.values
    }

    /// Value on basis vectors `(e_i, e_j)`.
    pub fn basis_value(&self, i: usize, j: usize) -> Vector {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Vector::zeros(self.out_dim),
            Less => self.values.get(&(i, j)).cloned().unwrap_or_else(|| Vector::zeros(self.out_dim)),
            Greater => -self.values.get(&(j, i)).cloned().unwrap_or_else(|| Vector::zeros(self.out_dim)),
        }
    }

    pub fn value(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.out_dim);
        for (&(i, j), v) in &self.values {
            let w = x[i] * y[j] - x[j] * y[i];
            if w != 0.0 {
                out += v * w;
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.values().map(max_abs_vec).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.iter().all(|&c| c == 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn e(n: usize, i: usize) -> Vector {
        let mut v = Vector::zeros(n);
        v[i] = 1.0;
        v
    }

    fn affine() -> LieAlgebra {
        LieAlgebra::new(2, [((0, 1), e(2, 1))]).unwrap()
    }

    fn heisenberg1() -> LieAlgebra {
        let a = (2.0_f64 / 3.0).sqrt();
        LieAlgebra::new(3, [((0, 1), e(3, 2) * a)]).unwrap()
    }

    // [h,x]=2x, [h,y]=−2y, [x,y]=h in basis (h, x, y)
    fn sl2() -> LieAlgebra {
        LieAlgebra::new(3, [((0, 1), e(3, 1) * 2.0), ((0, 2), e(3, 2) * -2.0), ((1, 2), e(3, 0))]).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let h = heisenberg1();
        assert_abs_diff_eq!(h.bracket(&e(3, 0), &e(3, 1)).unwrap(), e(3, 2) * (2.0_f64 / 3.0).sqrt(), epsilon = 1e-15);
        let x = Vector::from_vec(vec![0.3, -1.2, 2.0]);
        assert_eq!(h.bracket(&x, &x).unwrap(), Vector::zeros(3));
        assert_eq!(affine().bracket(&e(2, 1), &e(2, 0)).unwrap(), -e(2, 1));
        assert!(matches!(h.bracket(&e(2, 0), &e(3, 0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn malformed_bracket_records() {
        assert!(matches!(LieAlgebra::new(2, [((1, 0), e(2, 0))]), Err(Error::BadBracket { .. })));
        assert!(matches!(LieAlgebra::new(2, [((0, 2), e(2, 0))]), Err(Error::BadBracket { .. })));
        assert!(matches!(LieAlgebra::new(2, [((0, 1), e(3, 0))]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn jacobi_residuals() {
        assert_eq!(LieAlgebra::abelian(5).jacobi_residual(), 0.0);
        assert_eq!(heisenberg1().jacobi_residual(), 0.0);
        assert_eq!(sl2().jacobi_residual(), 0.0);
        // perturb [h,x] = 2x to 2.1x; the cyclic sum on (h,x,y) picks up 0.1·h
        let bad = LieAlgebra::new(3, [((0, 1), e(3, 1) * 2.1), ((0, 2), e(3, 2) * -2.0), ((1, 2), e(3, 0))]).unwrap();
        assert!(bad.jacobi_residual() >= 0.1 - 1e-12);
        assert!(matches!(bad.validated(&Tolerance::default()), Err(Error::JacobiFailure { .. })));
    }

    #[test]
    fn ad_examples() {
        let a = affine();
        assert_eq!(a.ad(&e(2, 0)).unwrap(), Matrix::from_row_slice(2, 2, &[0., 0., 0., 1.]));
        let h = heisenberg1();
        assert_eq!(h.ad(&e(3, 2)).unwrap(), Matrix::zeros(3, 3));
        let x = Vector::from_vec(vec![1.0, 2.0, -0.5]);
        assert_abs_diff_eq!(h.ad(&x).unwrap() * &x, Vector::zeros(3), epsilon = 1e-15);
    }

    #[test]
    fn killing_form_examples() {
        let k = sl2().killing_form();
        // K = 4 tr(xy); H = diag(1,−1) gives 8
        assert_abs_diff_eq!(k[(0, 0)], 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k[(1, 2)], 4.0, epsilon = 1e-14);
        assert_eq!(heisenberg1().killing_form(), Matrix::zeros(3, 3));
        assert_eq!(LieAlgebra::abelian(3).killing_form(), Matrix::zeros(3, 3));
    }

    #[test]
    fn trace_functional_examples() {
        assert_eq!(heisenberg1().trace_functional(), Vector::zeros(3));
        assert_eq!(affine().trace_functional(), Vector::from_vec(vec![1.0, 0.0]));
        assert_eq!(sl2().trace_functional(), Vector::zeros(3));
    }

    #[test]
    fn structure_reports() {
        let tol = Tolerance::default();
        let h = heisenberg1().structure_report(&tol);
        assert!(h.is_nilpotent && h.is_solvable && h.is_unimodular);
        assert_eq!(h.nilpotency_step, Some(2));
        assert_eq!(h.center_dim, 1);
        assert_eq!(h.derived_dim, 1);

        let a = affine().structure_report(&tol);
        assert!(a.is_solvable && !a.is_nilpotent && !a.is_unimodular);
        assert_eq!(a.derived_dim, 1);
        assert_eq!(a.center_dim, 0);

        let r = LieAlgebra::abelian(4).structure_report(&tol);
        assert!(r.is_nilpotent);
        assert_eq!(r.nilpotency_step, Some(1));
        assert_eq!(r.center_dim, 4);

        let s = sl2().structure_report(&tol);
        assert!(!s.is_solvable && s.is_unimodular);
        assert_eq!(s.derived_dim, 3);
    }

    #[test]
    fn derivation_spaces() {
        let tol = Tolerance::default();
        // Der(ℝⁿ) = gl(n)
        assert_eq!(LieAlgebra::abelian(3).derivations(&tol).len(), 9);
        // Der(aff) = {[[0,0],[y,q]]}
        let ders = affine().derivations(&tol);
        assert_eq!(ders.len(), 2);
        for d in &ders {
            assert!(d[(0, 0)].abs() < 1e-12 && d[(0, 1)].abs() < 1e-12);
        }
        // sl(2) is semisimple: every derivation is inner, dim 3
        assert_eq!(sl2().derivations(&tol).len(), 3);
        // Heisenberg H_1: dim Der = 6
        assert_eq!(heisenberg1().derivations(&tol).len(), 6);
    }

    #[test]
    fn antisymmetric_map_completion() {
        let th = AntisymmetricMap::new(3, 2, [((0, 2), Vector::from_vec(vec![1.0, -2.0]))]).unwrap();
        assert_eq!(th.basis_value(2, 0), Vector::from_vec(vec![-1.0, 2.0]));
        assert_eq!(th.basis_value(1, 1), Vector::zeros(2));
        assert_eq!(th.value(&e(3, 0), &e(3, 2)), th.basis_value(0, 2));
        assert!(AntisymmetricMap::new(3, 2, [((1, 1), Vector::zeros(2))]).is_err());
    }

    #[test]
    fn change_basis_preserves_jacobi_and_identity_is_noop() {
        let g = sl2();
        let same = g.change_basis(&Matrix::identity(3, 3)).unwrap();
        assert_eq!(same.structure(), g.structure());
        let p = Matrix::from_row_slice(3, 3, &[1., 0.5, 0., 0., 1., -1., 2., 0., 3.]);
        let h = g.change_basis(&p).unwrap();
        assert!(h.jacobi_residual() < 1e-12);
        // Killing form transforms by congruence
        assert_abs_diff_eq!(h.killing_form(), p.transpose() * g.killing_form() * &p, epsilon = 1e-10);
    }
}
