//! Small dense complex matrices and a Hermitian eigensolver.
//!
//! The eigensolver embeds `H = A + iB` into the real symmetric matrix
//! `[[A, −B], [B, A]]` and diagonalises that with cyclic Jacobi rotations.
//! Every eigenvalue of `H` shows up twice in the embedding; an eigenvector
//! `(u; v)` of the embedding maps back to `u + iv`.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

/// Off-diagonal Frobenius norm target, relative to the matrix norm.
pub const JACOBI_TOLERANCE: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 100;
/// Absolute Hermiticity tolerance, scaled by `max(1, ‖M‖)`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let n = other.dim;
        CMatrix::from_fn(self.dim * n, |i, j| {
            self[(i / n, j / n)] * other[(i % n, j % n)]
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        CMatrix::from_fn(self.dim, |i, j| {
            (0..self.dim).map(|k| self[(i, k)] * other[(k, j)]).sum()
        })
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|M_ij − conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

/// Real symmetric matrix stored densely, row-major.
struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    fn off_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }
}

/// Cyclic Jacobi on a real symmetric matrix. Returns the diagonal and the
/// accumulated rotation matrix (columns are eigenvectors).
fn jacobi_symmetric(mut m: SymMatrix) -> Result<(Vec<f64>, Vec<f64>), LinalgError> {
    let n = m.n;
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = m.a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = JACOBI_TOLERANCE * norm;

    let mut sweeps = 0;
    loop {
        let off = m.off_norm();
        if off <= target || off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::ConvergenceFailure { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
                m.set(p, q, 0.0);
                m.set(q, p, 0.0);

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let diag = (0..n).map(|i| m.get(i, i)).collect();
    Ok((diag, v))
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigensystem(m: &CMatrix) -> Result<Eigensystem, LinalgError> {
    let n = m.dim();
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOLERANCE * m.frobenius_norm().max(1.0) {
        return Err(LinalgError::NotHermitian(defect));
    }

    // Symmetrise first so the embedding is exactly symmetric.
    let mut embed = SymMatrix {
        n: 2 * n,
        a: vec![0.0; 4 * n * n],
    };
    for i in 0..n {
        for j in 0..n {
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            embed.set(i, j, z.re);
            embed.set(i + n, j + n, z.re);
            embed.set(i, j + n, -z.im);
            embed.set(i + n, j, z.im);
        }
    }

    let (diag, rot) = jacobi_symmetric(embed)?;
    let two_n = 2 * n;
    let mut order: Vec<usize> = (0..two_n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));

    // Walk the sorted spectrum in clusters. A cluster of 2k real eigenpairs
    // spans a k-dimensional complex eigenspace. Greedy Gram-Schmidt over the
    // complex candidates `u + iv` (always taking the candidate with the
    // largest residual) recovers an orthonormal basis of it.
    let scale = m.frobenius_norm().max(1.0);
    let cluster_tol = 1e-11 * scale;
    let mut values = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < two_n {
        let mut end = start + 1;
        while end < two_n && diag[order[end]] - diag[order[end - 1]] <= cluster_tol {
            end += 1;
        }
        let mut candidates: Vec<Vec<Complex64>> = order[start..end]
            .iter()
            .map(|&col| {
                (0..n)
                    .map(|row| {
                        Complex64::new(rot[row * two_n + col], rot[(row + n) * two_n + col])
                    })
                    .collect()
            })
            .collect();
        while vectors.len() < n {
            for z in &mut candidates {
                for b in &vectors {
                    let proj = inner(b, z);
                    for (zi, bi) in z.iter_mut().zip(b) {
                        *zi -= proj * bi;
                    }
                }
            }
            let Some((best, norm)) = candidates
                .iter()
                .map(|z| vec_norm(z))
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(&b.1))
            else {
                break;
            };
            if norm < 1e-6 {
                break;
            }
            let z: Vec<Complex64> = candidates.swap_remove(best).into_iter().map(|x| x / norm).collect();
            values.push(inner(&z, &m.mul_vec(&z)).re);
            vectors.push(z);
        }
        start = end;
    }

    // Rayleigh quotients may reorder values within a cluster.
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let values: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
    let vectors: Vec<Vec<Complex64>> = idx.iter().map(|&i| vectors[i].clone()).collect();
    debug_assert_eq!(values.len(), n);
    Ok(Eigensystem { values, vectors })
}
