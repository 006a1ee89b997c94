//! Block shift-invert Krylov iteration with Rayleigh–Ritz restarts.

use super::cholesky::SparseCholesky;
use super::{EigenError, EigenOptions, EigenPairs};
use crate::discretize::SparseSymMatrix;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Scaled residual used as the convergence test.
pub(crate) fn relative_residual(ku: &[f64], mu: &[f64], u: &[f64], lambda: f64, k_norm: f64, m_norm: f64) -> f64 {
    let r: f64 = ku
        .iter()
        .zip(mu)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt();
    r / ((k_norm + lambda.abs() * m_norm) * norm(u))
}

struct Basis<'a> {
    k: &'a SparseSymMatrix,
    m: &'a SparseSymMatrix,
    v: Vec<Vec<f64>>,
    kv: Vec<Vec<f64>>,
    mv: Vec<Vec<f64>>,
}

impl Basis<'_> {
    /// M-orthogonalizes `w` against the basis twice and appends it;
    /// returns false when `w` is numerically dependent.
    fn push(&mut self, mut w: Vec<f64>) -> bool {
        let mut mw = self.m.mul(&w);
        let initial = dot(&w, &mw).max(0.0).sqrt();
        if !(initial > 0.0) {
            return false;
        }
        for _ in 0..2 {
            for (vi, mvi) in self.v.iter().zip(&self.mv) {
                let c = dot(mvi, &w);
                axpy(&mut w, -c, vi);
            }
            mw = self.m.mul(&w);
        }
        let nrm = dot(&w, &mw).max(0.0).sqrt();
        if !(nrm > 1e-10 * initial) {
            return false;
        }
        let s = 1.0 / nrm;
        w.iter_mut().for_each(|x| *x *= s);
        mw.iter_mut().for_each(|x| *x *= s);
        self.kv.push(self.k.mul(&w));
        self.mv.push(mw);
        self.v.push(w);
        true
    }

    fn len(&self) -> usize {
        self.v.len()
    }
}

fn combine(cols: &[Vec<f64>], y: &DMatrix<f64>, j: usize) -> Vec<f64> {
    let n = cols[0].len();
    let mut out = vec![0.0; n];
    for (i, c) in cols.iter().enumerate() {
        axpy(&mut out, y[(i, j)], c);
    }
    out
}

pub(crate) fn solve(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    count: usize,
    opts: &EigenOptions,
) -> Result<EigenPairs, EigenError> {
    let n = k.n;
    let want = (count + opts.extra).min(n);
    let block = opts.block.max(1);
    let max_basis = (2 * want + 2 * block).min(n);
    let k_norm = k.norm1();
    let m_norm = m.norm1();
    let sigma = -1e-8 * k_norm / m_norm;
    let shifted = k.combine(1.0, m, -sigma);
    let factor = SparseCholesky::factor(&shifted).map_err(|e| {
        EigenError::FactorizationFailure(format!("pivot {} at column {}", e.pivot, e.column))
    })?;
    let mut work = Vec::with_capacity(n);
    let mut apply = |x: &[f64]| {
        let mut y = m.mul(x);
        factor.solve_in_place(&mut y, &mut work);
        y
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let random = |rng: &mut ChaCha8Rng| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
    let mut basis = Basis {
        k,
        m,
        v: Vec::new(),
        kv: Vec::new(),
        mv: Vec::new(),
    };
    let mut seeds: Vec<Vec<f64>> = (0..block).map(|_| random(&mut rng)).collect();
    let mut worst = f64::INFINITY;

    for restart in 0..opts.max_restarts {
        // Expand block by block.
        while basis.len() < max_basis {
            let mut added = Vec::new();
            for s in &seeds {
                if basis.len() >= max_basis {
                    break;
                }
                let mut w = apply(s);
                let mut tries = 0;
                while !basis.push(w.clone()) {
                    tries += 1;
                    if tries > 3 {
                        break;
                    }
                    w = apply(&random(&mut rng));
                }
                if tries <= 3 {
                    added.push(basis.v.last().unwrap().clone());
                }
            }
            if added.is_empty() {
                break;
            }
            seeds = added;
        }

        // Rayleigh–Ritz on K with the M-orthonormal basis.
        let dim = basis.len();
        let mut a = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = 0.5 * (dot(&basis.v[i], &basis.kv[j]) + dot(&basis.v[j], &basis.kv[i]));
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(a);
        let mut idx: Vec<usize> = (0..dim).collect();
        idx.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
        let y = eig.eigenvectors;
        let keep = (want + block).min(dim.saturating_sub(block).max(want.min(dim)));

        let mut values = Vec::with_capacity(keep);
        let mut vecs = Vec::with_capacity(keep);
        let mut kvs = Vec::with_capacity(keep);
        let mut mvs = Vec::with_capacity(keep);
        let mut residuals = Vec::with_capacity(keep);
        for &j in idx.iter().take(keep) {
            let lambda = eig.eigenvalues[j];
            let u = combine(&basis.v, &y, j);
            let ku = combine(&basis.kv, &y, j);
            let mu = combine(&basis.mv, &y, j);
            residuals.push(relative_residual(&ku, &mu, &u, lambda, k_norm, m_norm));
            values.push(lambda);
            vecs.push(u);
            kvs.push(ku);
            mvs.push(mu);
        }
        worst = residuals[..count].iter().copied().fold(0.0, f64::max);
        if worst <= opts.tol || dim == n {
            if dim == n && worst > opts.tol {
                // Full space: Ritz pairs are exact up to rounding.
                if worst > opts.tol.sqrt() {
                    return Err(EigenError::NoConvergence {
                        iterations: restart + 1,
                        worst_residual: worst,
                    });
                }
            }
            values.truncate(count);
            vecs.truncate(count);
            residuals.truncate(count);
            return Ok(EigenPairs {
                values,
                vectors: vecs,
                residuals,
            });
        }

        // Restart from the kept Ritz vectors; expand from the lowest
        // unconverged ones.
        let mut order: Vec<usize> = (0..keep).filter(|&i| residuals[i] > opts.tol).collect();
        order.extend((0..keep).filter(|&i| residuals[i] <= opts.tol));
        seeds = order.iter().take(block).map(|&i| vecs[i].clone()).collect();
        basis.v = vecs;
        basis.kv = kvs;
        basis.mv = mvs;
    }
    Err(EigenError::NoConvergence {
        iterations: opts.max_restarts,
        worst_residual: worst,
    })
}

/// Dense generalized eigensolver for small systems.
pub(crate) fn solve_dense(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    count: usize,
) -> Result<EigenPairs, EigenError> {
    let n = k.n;
    let kd = DMatrix::from_fn(n, n, |i, j| k.get(i, j));
    let md = DMatrix::from_fn(n, n, |i, j| m.get(i, j));
    let chol = md
        .clone()
        .cholesky()
        .ok_or_else(|| EigenError::FactorizationFailure("mass matrix not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| EigenError::FactorizationFailure("singular mass factor".into()))?;
    let mut c = &linv * &kd * linv.transpose();
    c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let k_norm = k.norm1();
    let m_norm = m.norm1();
    let lt_inv = linv.transpose();
    let mut out = EigenPairs {
        values: Vec::new(),
        vectors: Vec::new(),
        residuals: Vec::new(),
    };
    for &j in idx.iter().take(count) {
        let x = &lt_inv * eig.eigenvectors.column(j);
        let u: Vec<f64> = x.iter().copied().collect();
        let lambda = eig.eigenvalues[j];
        let ku = k.mul(&u);
        let mu = m.mul(&u);
        out.residuals.push(relative_residual(&ku, &mu, &u, lambda, k_norm, m_norm));
        out.values.push(lambda);
        out.vectors.push(u);
    }
    Ok(out)
}
