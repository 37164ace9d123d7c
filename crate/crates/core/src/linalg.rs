//! Small dense linear algebra for normal equations and Newton steps.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting. Returns `None` when a
/// pivot vanishes.
pub fn lu_solve(a: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.n;
    let mut m = a.data.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        let mut best = m[col * n + col].abs();
        for r in col + 1..n {
            let v = m[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return None;
        }
        if piv != col {
            for j in 0..n {
                m.swap(col * n + j, piv * n + j);
            }
            x.swap(col, piv);
        }
        let d = m[col * n + col];
        for r in col + 1..n {
            let f = m[r * n + col] / d;
            if f != 0.0 {
                for j in col..n {
                    m[r * n + j] -= f * m[col * n + j];
                }
                x[r] -= f * x[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for j in col + 1..n {
            s -= m[col * n + j] * x[j];
        }
        x[col] = s / m[col * n + col];
    }
    Some(x)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and the matrix whose columns are the eigenvectors.
pub fn sym_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.n;
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m.get(i, j) * m.get(i, j);
            }
        }
        if off == 0.0 {
            break;
        }
        let scale: f64 = m.data.iter().map(|x| x * x).sum();
        if off <= 1e-34 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + math::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + math::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    ((0..n).map(|i| m.get(i, i)).collect(), v)
}

/// Solution of the symmetric positive semi-definite system `G x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdSolution {
    pub x: Vec<f64>,
    /// Numerical rank; below `n` the minimal-norm solution was returned.
    pub rank: usize,
}

/// Solves a Gram system. Full rank uses pivoted elimination; otherwise the minimal-norm
/// solution from the eigen-decomposition with relative cut-off `rel_tol`.
pub fn solve_gram(g: &Matrix, b: &[f64], rel_tol: f64) -> SpdSolution {
    let n = g.n;
    let (vals, vecs) = sym_eigen(g);
    let top = vals.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let cut = rel_tol * top;
    let rank = vals.iter().filter(|&&l| l > cut).count();
    if rank == n {
        if let Some(x) = lu_solve(g, b) {
            return SpdSolution { x, rank };
        }
    }
    let mut x = vec![0.0; n];
    for (k, &l) in vals.iter().enumerate() {
        if l > cut {
            let proj: f64 = (0..n).map(|i| vecs.get(i, k) * b[i]).sum();
            for i in 0..n {
                x[i] += vecs.get(i, k) * proj / l;
            }
        }
    }
    SpdSolution { x, rank }
}
