//! Seeded random generators for property tests and the acceptance suite.
//!
//! Every function takes the RNG explicitly; with
//! `rand_chacha::ChaCha8Rng::seed_from_u64` the outputs are reproducible.

use rand::Rng;

use crate::constructions::DoubleExtensionSpec;
use crate::error::{Error, Result};
use crate::geometry::MetricLieAlgebra;
use crate::lie::LieAlgebra;
use crate::linalg::{max_abs_vec, null_space, Matrix, Signature, Tolerance, Vector};

fn uniform_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, amp: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-amp..=amp))
}

fn uniform_vector<R: Rng>(rng: &mut R, n: usize, amp: f64) -> Vector {
    Vector::from_fn(n, |_, _| rng.gen_range(-amp..=amp))
}

/// An invertible matrix close to the identity (condition number below ~10).
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let p = Matrix::identity(n, n) + uniform_matrix(rng, n, n, 0.4);
        let sv = p.clone().singular_values();
        if n == 0 || sv.min() > 0.1 * sv.max() {
            return p;
        }
    }
}

/// A Haar-ish orthogonal matrix from the QR factorization of a random one.
pub fn random_orthogonal<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let a = uniform_matrix(rng, n, n, 1.0);
        if a.clone().singular_values().min() > 1e-3 {
            return a.qr().q();
        }
    }
}

/// `PᵀΣP` with `Σ` diagonal of the given signature and entries of size 0.5..2.
pub fn random_metric<R: Rng>(rng: &mut R, sig: Signature) -> Matrix {
    let n = sig.dim();
    let diag = Vector::from_fn(n, |i, _| {
        let mag = rng.gen_range(0.5..2.0);
        if i < sig.p {
            -mag
        } else {
            mag
        }
    });
    let p = random_invertible(rng, n);
    let g = p.transpose() * Matrix::from_diagonal(&diag) * p;
    (&g + g.transpose()) * 0.5
}

/// A random Lie algebra of the given dimension written in a random basis.
///
/// Families: `ℝ ⋉_A ℝ^{n−1}`, two-step nilpotent, `sl(2)` or `so(3)` plus an
/// abelian summand, and affine planes with abelian summands.
pub fn random_lie_algebra<R: Rng>(rng: &mut R, dim: usize) -> LieAlgebra {
    let family = if dim < 3 { rng.gen_range(0..2) } else { rng.gen_range(0..4) };
    let alg = match family {
        0 => semidirect_abelian(rng, dim),
        1 => affine_sum(dim),
        2 => two_step(rng, dim),
        _ => simple_plus_abelian(rng, dim),
    };
    let p = random_invertible(rng, dim);
    alg.change_basis(&p).expect("random_invertible is well conditioned")
}

fn semidirect_abelian<R: Rng>(rng: &mut R, dim: usize) -> LieAlgebra {
    if dim == 0 {
        return LieAlgebra::abelian(0);
    }
    let a = uniform_matrix(rng, dim - 1, dim - 1, 1.0);
    LieAlgebra::from_fn(dim, |i, j| {
        let mut out = Vector::zeros(dim);
        if i == 0 {
            out.rows_mut(1, dim - 1).copy_from(&a.column(j - 1));
        }
        out
    })
    .expect("well formed")
}

fn affine_sum(dim: usize) -> LieAlgebra {
    // copies of [x, y] = y, plus an abelian remainder
    LieAlgebra::from_fn(dim, |i, j| {
        let mut out = Vector::zeros(dim);
        if i % 2 == 0 && j == i + 1 && j < dim {
            out[j] = 1.0;
        }
        out
    })
    .expect("well formed")
}

fn two_step<R: Rng>(rng: &mut R, dim: usize) -> LieAlgebra {
    let center = rng.gen_range(1..=(dim - 2).max(1));
    let gens = dim - center;
    let coeffs: Vec<Vector> = (0..gens * gens).map(|_| uniform_vector(rng, center, 1.0)).collect();
    LieAlgebra::from_fn(dim, |i, j| {
        let mut out = Vector::zeros(dim);
        if j < gens {
            out.rows_mut(gens, center).copy_from(&coeffs[i * gens + j]);
        }
        out
    })
    .expect("well formed")
}

fn simple_plus_abelian<R: Rng>(rng: &mut R, dim: usize) -> LieAlgebra {
    let compact = rng.gen_bool(0.5);
    LieAlgebra::from_fn(dim, |i, j| {
        let mut out = Vector::zeros(dim);
        match (i, j, compact) {
            // so(3): [e0,e1] = e2, [e1,e2] = e0, [e2,e0] = e1
            (0, 1, true) => out[2] = 1.0,
            (1, 2, true) => out[0] = 1.0,
            (0, 2, true) => out[1] = -1.0,
            // sl(2): [h,x] = 2x, [h,y] = −2y, [x,y] = h
            (0, 1, false) => out[1] = 2.0,
            (0, 2, false) => out[2] = -2.0,
            (1, 2, false) => out[0] = 1.0,
            _ => {}
        }
        out
    })
    .expect("well formed")
}

pub fn random_metric_lie_algebra<R: Rng>(rng: &mut R, dim: usize, sig: Signature, tol: &Tolerance) -> Result<MetricLieAlgebra> {
    if sig.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: sig.dim() });
    }
    let alg = random_lie_algebra(rng, dim);
    let g = random_metric(rng, sig);
    MetricLieAlgebra::from_parts(alg, g, tol)
}

/// The three constructive families of valid data over an abelian base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbelianFamily {
    /// `D = 0`, `K` skew.
    ZeroDerivation,
    /// `K = 0`, `D` arbitrary.
    ZeroSkew,
    /// `D` symmetric and anticommuting with `K`.
    Anticommuting,
}

impl AbelianFamily {
    pub const ALL: [AbelianFamily; 3] = [Self::ZeroDerivation, Self::ZeroSkew, Self::Anticommuting];
}

fn random_skew<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let a = uniform_matrix(rng, n, n, 1.0);
    &a - a.transpose()
}

/// Valid extension data over Euclidean abelian `ℝⁿ`, with `L` free.
pub fn random_abelian_spec<R: Rng>(rng: &mut R, n: usize, family: AbelianFamily) -> DoubleExtensionSpec {
    let base = MetricLieAlgebra::from_parts(LieAlgebra::abelian(n), Matrix::identity(n, n), &Tolerance::default())
        .expect("identity metric");
    let (d, k) = match family {
        AbelianFamily::ZeroDerivation => (Matrix::zeros(n, n), random_skew(rng, n)),
        AbelianFamily::ZeroSkew => (uniform_matrix(rng, n, n, 1.0), Matrix::zeros(n, n)),
        AbelianFamily::Anticommuting => {
            // 2×2 blocks: b·J against the reflection [[a, c], [c, −a]]
            let mut d = Matrix::zeros(n, n);
            let mut k = Matrix::zeros(n, n);
            for i in 0..n / 2 {
                let (r, s) = (2 * i, 2 * i + 1);
                let (a, c, b) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                d[(r, r)] = a;
                d[(s, s)] = -a;
                d[(r, s)] = c;
                d[(s, r)] = c;
                k[(s, r)] = b;
                k[(r, s)] = -b;
            }
            if n % 2 == 1 {
                d[(n - 1, n - 1)] = rng.gen_range(-1.0..1.0);
            }
            let q = random_orthogonal(rng, n);
            (q.transpose() * d * &q, q.transpose() * k * &q)
        }
    };
    let l = uniform_vector(rng, n, 1.0);
    DoubleExtensionSpec::new(base, d, k, l).expect("shapes agree")
}

/// Data over Euclidean `ℝⁿ` (`n ≥ 2`) whose extension is nilpotent with
/// `Γ ≠ 0`: either `D = 0` and `K ≠ 0`, or `D` square-zero anticommuting
/// with `K ≠ 0` in the sense `KD + D*K = 0`.
pub fn random_nilpotent_spec<R: Rng>(rng: &mut R, n: usize) -> DoubleExtensionSpec {
    let base = MetricLieAlgebra::from_parts(LieAlgebra::abelian(n), Matrix::identity(n, n), &Tolerance::default())
        .expect("identity metric");
    let l = uniform_vector(rng, n, 1.0);
    if n < 4 || rng.gen_bool(0.5) {
        let k = random_skew(rng, n);
        return DoubleExtensionSpec::new(base, Matrix::zeros(n, n), k, l).expect("shapes agree");
    }
    // on ℝᵏ ⊕ ℝᵏ (⊕ ℝ): K = [[0, I], [−I, 0]], D = [[0, A], [0, 0]], A symmetric
    let h = n / 2;
    loop {
        let a = uniform_matrix(rng, h, h, 0.3);
        let a = &a + a.transpose();
        let mut d = Matrix::zeros(n, n);
        let mut k = Matrix::zeros(n, n);
        d.view_mut((0, h), (h, h)).copy_from(&a);
        for i in 0..h {
            k[(i, h + i)] = 1.0;
            k[(h + i, i)] = -1.0;
        }
        // Γ = ¼‖K‖² − ½‖D‖² for these shapes
        let gamma = 0.5 * h as f64 - 0.5 * a.norm_squared();
        if gamma.abs() < 0.1 {
            continue;
        }
        let q = random_orthogonal(rng, n);
        let spec = DoubleExtensionSpec::new(base, q.transpose() * d * &q, q.transpose() * k * &q, l)
            .expect("shapes agree");
        return spec;
    }
}

/// Valid data over an arbitrary base: `D` a random derivation, `K` a random
/// skew map with `L` solving the compatibility system. When that system is
/// inconsistent, falls back to `K = 0` and `L ⊥ [g₀, g₀]`.
pub fn random_valid_spec<R: Rng>(rng: &mut R, base: MetricLieAlgebra, tol: &Tolerance) -> DoubleExtensionSpec {
    let n = base.dim();
    let g = base.gram().clone();
    let g_inv = base.metric().inverse();
    let ders = base.algebra().derivations(tol);
    let mut d = Matrix::zeros(n, n);
    for der in &ders {
        d += der * rng.gen_range(-1.0..1.0);
    }
    let scale = crate::linalg::max_abs(&d);
    if scale > 1.0 {
        d /= scale;
    }
    let k = &g_inv * random_skew(rng, n) * 0.5;

    // rows (a < b): Σ_k c(a,b,k) y_k = (G₀(KD + D*K))_{ba}, with y = G₀ L
    let alg = base.algebra();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let c = Matrix::from_fn(pairs.len().max(1), n, |r, kk| pairs.get(r).map_or(0.0, |&(a, b)| alg.constant(a, b, kk)));
    let d_adj = &g_inv * d.transpose() * &g;
    let m = &g * (&k * &d + &d_adj * &k);
    let rhs = Vector::from_fn(pairs.len().max(1), |r, _| pairs.get(r).map_or(0.0, |&(a, b)| m[(b, a)]));

    let kernel = null_space(&c, tol);
    let free = if kernel.ncols() > 0 { &kernel * uniform_vector(rng, kernel.ncols(), 1.0) } else { Vector::zeros(n) };
    let solved = c.clone().svd(true, true).solve(&rhs, 1e-12).ok();
    let (k, y) = match solved {
        Some(y0) if max_abs_vec(&(&c * &y0 - &rhs)) < 1e-10 * (1.0 + max_abs_vec(&rhs)) => (k, y0 + free),
        _ => (Matrix::zeros(n, n), free),
    };
    let l = &g_inv * y;
    DoubleExtensionSpec::new(base, d, k, l).expect("shapes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_algebras_satisfy_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tol = Tolerance::default();
        for dim in 2..=6 {
            for _ in 0..10 {
                let alg = random_lie_algebra(&mut rng, dim);
                assert!(alg.validated(&tol).is_ok());
            }
        }
    }

    #[test]
    fn random_metrics_have_requested_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tol = Tolerance::default();
        for sig in [Signature::new(0, 4), Signature::new(1, 3), Signature::new(2, 2)] {
            let m = random_metric_lie_algebra(&mut rng, 4, sig, &tol).unwrap();
            assert_eq!(m.signature(&tol).unwrap(), sig);
        }
    }

    #[test]
    fn sampled_specs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tol = Tolerance::default();
        for n in 2..=5 {
            for family in AbelianFamily::ALL {
                random_abelian_spec(&mut rng, n, family).validate(&tol).unwrap();
            }
            random_nilpotent_spec(&mut rng, n).validate(&tol).unwrap();
            let base = random_metric_lie_algebra(&mut rng, n, Signature::euclidean(n), &tol).unwrap();
            random_valid_spec(&mut rng, base, &tol).validate(&tol).unwrap();
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_lie_algebra(&mut ChaCha8Rng::seed_from_u64(5), 4);
        let b = random_lie_algebra(&mut ChaCha8Rng::seed_from_u64(5), 4);
        assert_eq!(a, b);
    }
}
