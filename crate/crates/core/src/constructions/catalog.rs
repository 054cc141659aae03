//! Named metric Lie algebras.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::MetricLieAlgebra;
use crate::lie::LieAlgebra;
use crate::linalg::{Matrix, Signature, SymmetricForm, Tolerance, Vector};

use super::complexify::complexify;
use super::double_extension::{double_extension, DoubleExtensionSpec};

/// Catalog entries with their parameter names.
pub const CATALOG: &[(&str, &[&str])] = &[
    ("heisenberg", &["n"]),
    ("einstein_solvable", &["n"]),
    ("sl_killing", &["n"]),
    ("sl_complex_typeI", &["n", "lambda", "mu"]),
    ("affine_plane", &[]),
    ("abelian", &["p", "q"]),
    ("double_ext_demo", &["n"]),
];

/// Looks up a catalog entry by name.
pub fn catalog(name: &str, params: &BTreeMap<String, f64>) -> Result<MetricLieAlgebra> {
    let (_, expected) =
        CATALOG.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
    if let Some(extra) = params.keys().find(|k| !expected.contains(&k.as_str())) {
        return Err(Error::BadParams(format!("`{name}` takes no parameter `{extra}`")));
    }
    let real = |key: &str| -> Result<f64> {
        let v = *params.get(key).ok_or_else(|| Error::BadParams(format!("`{name}` needs parameter `{key}`")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::BadParams(format!("`{key}` must be finite")))
        }
    };
    let count = |key: &str| -> Result<usize> {
        let v = real(key)?;
        if v < 0.0 || v.fract() != 0.0 || v > 64.0 {
            return Err(Error::BadParams(format!("`{key}` must be a small nonnegative integer, got {v}")));
        }
        Ok(v as usize)
    };
    match name {
        "heisenberg" => heisenberg(count("n")?),
        "einstein_solvable" => einstein_solvable(count("n")?),
        "sl_killing" => sl_killing(count("n")?),
        "sl_complex_typeI" => sl_complex_type_i(count("n")?, real("lambda")?, real("mu")?),
        "affine_plane" => affine_plane(),
        "abelian" => abelian(count("p")?, count("q")?),
        "double_ext_demo" => double_ext_demo(count("n")?),
        _ => unreachable!("names come from CATALOG"),
    }
}

fn positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::BadParams(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

fn heisenberg_names(n: usize) -> Vec<String> {
    (1..=2 * n).map(|i| format!("E{i}")).chain(std::iter::once("Z".to_string())).collect()
}

/// `H_n` with orthonormal basis `(E_1, …, E_2n, Z)` and
/// `[E_{2i−1}, E_{2i}] = √(2/(n+2)) Z`, scaled to the nilsoliton.
pub fn heisenberg(n: usize) -> Result<MetricLieAlgebra> {
    positive(n, "n")?;
    let dim = 2 * n + 1;
    let s = (2.0 / (n as f64 + 2.0)).sqrt();
    let alg = LieAlgebra::new(
        dim,
        (0..n).map(|i| {
            let mut z = Vector::zeros(dim);
            z[dim - 1] = s;
            ((2 * i, 2 * i + 1), z)
        }),
    )?
    .with_basis_names(heisenberg_names(n))?;
    MetricLieAlgebra::from_parts(alg, Matrix::identity(dim, dim), &Tolerance::default())
}

/// `ℝD ⋉ H_n` in the basis `(E_1, …, E_2n, Z, D)`: the Heisenberg part as in
/// [`heisenberg`], `[D, E_i] = (n+1)/(n+2) E_i`, `[D, Z] = 2(n+1)/(n+2) Z`,
/// `<D, D> = 2(n+1)²/(n+2)`, `D` orthogonal to `H_n`.
pub fn einstein_solvable(n: usize) -> Result<MetricLieAlgebra> {
    positive(n, "n")?;
    let h = heisenberg(n)?;
    let hd = 2 * n + 1;
    let dim = hd + 1;
    let nf = n as f64;
    let a = (nf + 1.0) / (nf + 2.0);
    let mut entries: Vec<((usize, usize), Vector)> = h
        .algebra()
        .structure()
        .iter()
        .map(|(&k, v)| {
            let mut w = Vector::zeros(dim);
            w.rows_mut(0, hd).copy_from(v);
            (k, w)
        })
        .collect();
    for i in 0..hd {
        let mut w = Vector::zeros(dim);
        // [e_i, D] = −[D, e_i]
        w[i] = -if i + 1 == hd { 2.0 * a } else { a };
        entries.push(((i, hd), w));
    }
    let mut names = heisenberg_names(n);
    names.push("D".into());
    let alg = LieAlgebra::new(dim, entries)?.with_basis_names(names)?;
    let mut g = Matrix::identity(dim, dim);
    g[(hd, hd)] = 2.0 * (nf + 1.0).powi(2) / (nf + 2.0);
    MetricLieAlgebra::from_parts(alg, g, &Tolerance::default())
}

/// Basis of `sl(n, ℝ)`: `E_ij` (i ≠ j, lexicographic) then `H_k = E_kk − E_{k+1,k+1}`.
fn sl_basis(n: usize) -> (Vec<Matrix>, Vec<String>) {
    let mut mats = Vec::new();
    let mut names = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = Matrix::zeros(n, n);
                m[(i, j)] = 1.0;
                mats.push(m);
                names.push(format!("E{}{}", i + 1, j + 1));
            }
        }
    }
    for k in 0..n.saturating_sub(1) {
        let mut m = Matrix::zeros(n, n);
        m[(k, k)] = 1.0;
        m[(k + 1, k + 1)] = -1.0;
        mats.push(m);
        names.push(format!("H{}", k + 1));
    }
    (mats, names)
}

/// Coordinates of a traceless matrix in [`sl_basis`].
fn sl_coords(n: usize, m: &Matrix) -> Vector {
    let dim = n * n - 1;
    let mut out = Vector::zeros(dim);
    let mut idx = 0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[idx] = m[(i, j)];
                idx += 1;
            }
        }
    }
    // diag(d) = Σ_k h_k H_k gives h_k = d_1 + … + d_k
    let mut partial = 0.0;
    for k in 0..n - 1 {
        partial += m[(k, k)];
        out[idx + k] = partial;
    }
    out
}

/// `sl(n, ℝ)` and the trace-form matrix `T_ab = tr(B_a B_b)`.
fn sl_algebra(n: usize) -> Result<(LieAlgebra, Matrix)> {
    if n < 2 {
        return Err(Error::BadParams("sl(n) needs n >= 2".into()));
    }
    let (basis, names) = sl_basis(n);
    let dim = basis.len();
    let alg = LieAlgebra::from_fn(dim, |a, b| {
        let c = &basis[a] * &basis[b] - &basis[b] * &basis[a];
        sl_coords(n, &c)
    })?
    .with_basis_names(names)?;
    let trace = Matrix::from_fn(dim, dim, |a, b| (&basis[a] * &basis[b]).trace());
    Ok((alg, trace))
}

/// `sl(n, ℝ)` with its Killing form `2n·tr(xy)`.
pub fn sl_killing(n: usize) -> Result<MetricLieAlgebra> {
    let (alg, trace) = sl_algebra(n)?;
    MetricLieAlgebra::from_parts(alg, trace * (2.0 * n as f64), &Tolerance::default())
}

/// The complexification of `sl(n, ℝ)` in the basis `(x_a, y_a = i x_a)` with
/// `<x₁+iy₁, x₂+iy₂> = −n/(λ²+μ²) [λ tr(x₁x₂) − λ tr(y₁y₂) + μ tr(x₁y₂) + μ tr(y₁x₂)]`.
pub fn sl_complex_type_i(n: usize, lambda: f64, mu: f64) -> Result<MetricLieAlgebra> {
    if mu == 0.0 {
        return Err(Error::ZeroMu);
    }
    let (alg, trace) = sl_algebra(n)?;
    let base = MetricLieAlgebra::from_parts(alg, trace.clone(), &Tolerance::default())?;
    let (complex, _) = complexify(&base)?;
    let d = trace.nrows();
    let f = -(n as f64) / (lambda * lambda + mu * mu);
    let mut g = Matrix::zeros(2 * d, 2 * d);
    g.view_mut((0, 0), (d, d)).copy_from(&(&trace * (f * lambda)));
    g.view_mut((d, d), (d, d)).copy_from(&(&trace * (-f * lambda)));
    g.view_mut((0, d), (d, d)).copy_from(&(&trace * (f * mu)));
    g.view_mut((d, 0), (d, d)).copy_from(&(&trace * (f * mu)));
    complex.with_metric(SymmetricForm::new(g, &Tolerance::default())?)
}

/// `[e_1, e_2] = e_2` with the Euclidean metric; Einstein with constant −1.
pub fn affine_plane() -> Result<MetricLieAlgebra> {
    let alg = LieAlgebra::new(2, [((0, 1), Vector::from_vec(vec![0.0, 1.0]))])?;
    MetricLieAlgebra::from_parts(alg, Matrix::identity(2, 2), &Tolerance::default())
}

/// `ℝ^{p+q}` with `diag(−1,…,−1, 1,…,1)`.
pub fn abelian(p: usize, q: usize) -> Result<MetricLieAlgebra> {
    let form = Signature::new(p, q).diagonal_form();
    MetricLieAlgebra::new(LieAlgebra::abelian(p + q).validated(&Tolerance::default())?, form)
}

/// Double extension of Euclidean `ℝⁿ` by `D = 0`, `L = 0` and `K` the
/// block rotation on consecutive coordinate pairs: a nilpotent Lorentz
/// algebra with `Γ = ⌊n/2⌋/2`.
pub fn double_ext_demo(n: usize) -> Result<MetricLieAlgebra> {
    if n < 2 {
        return Err(Error::BadParams("double_ext_demo needs n >= 2".into()));
    }
    let tol = Tolerance::default();
    let base = abelian(0, n)?;
    let mut k = Matrix::zeros(n, n);
    for i in 0..n / 2 {
        k[(2 * i + 1, 2 * i)] = 1.0;
        k[(2 * i, 2 * i + 1)] = -1.0;
    }
    let spec = DoubleExtensionSpec::new(base, Matrix::zeros(n, n), k, Vector::zeros(n))?;
    double_extension(&spec, &tol)
}
