use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::tol::Tolerances;

/// Symmetric matrix, stored dense. Construction symmetrizes the input as
/// `(A + A') / 2`, so the stored matrix is exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn from_mat(m: &Mat) -> Result<SymMatrix> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                got: m.cols(),
                context: "symmetric matrix input",
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite("symmetric matrix entries"));
        }
        let n = m.rows();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = 0.5 * (m[(i, j)] + m[(j, i)]);
            }
        }
        Ok(SymMatrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> SymMatrix {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = 0.5 * (f(i, j) + f(j, i));
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_mat(&self) -> Mat {
        Mat::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// `v' S v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.n, "quad_form length mismatch");
        let mut acc = 0.0;
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let mut s = 0.0;
            for (a, b) in row.iter().zip(v) {
                s += a * b;
            }
            acc += v[i] * s;
        }
        acc
    }
}

/// Eigendecomposition of a symmetric matrix: `S = V diag(values) V'` with
/// `values` sorted descending and the k-th column of `vectors` the matching
/// eigenvector.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition. Rotation order is fixed, so the output
/// is a pure function of the input.
pub fn sym_eigen(s: &SymMatrix) -> Result<Eigen> {
    let n = s.n;
    if n == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: 0,
            context: "eigendecomposition input",
        });
    }
    let mut a = vec![0.0; n * n];
    a.copy_from_slice(&s.data);
    let mut v = Mat::identity(n);
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let idx = |i: usize, j: usize| i * n + j;

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n - 1 {
            for j in i + 1..n {
                off += a[idx(i, j)].abs();
            }
        }
        if off == 0.0 {
            return Ok(sorted_eigen(d, v));
        }
        let thresh = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for i in 0..n - 1 {
            for j in i + 1..n {
                let g = 100.0 * a[idx(i, j)].abs();
                if sweep > 3 && d[i].abs() + g == d[i].abs() && d[j].abs() + g == d[j].abs() {
                    a[idx(i, j)] = 0.0;
                } else if a[idx(i, j)].abs() > thresh {
                    let mut h = d[j] - d[i];
                    let t = if h.abs() + g == h.abs() {
                        a[idx(i, j)] / h
                    } else {
                        let theta = 0.5 * h / a[idx(i, j)];
                        let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            t = -t;
                        }
                        t
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let sn = t * c;
                    let tau = sn / (1.0 + c);
                    h = t * a[idx(i, j)];
                    z[i] -= h;
                    z[j] += h;
                    d[i] -= h;
                    d[j] += h;
                    a[idx(i, j)] = 0.0;
                    let rot = |a: &mut Vec<f64>, ki: usize, kj: usize| {
                        let g = a[ki];
                        let h = a[kj];
                        a[ki] = g - sn * (h + g * tau);
                        a[kj] = h + sn * (g - h * tau);
                    };
                    for k in 0..i {
                        rot(&mut a, idx(k, i), idx(k, j));
                    }
                    for k in i + 1..j {
                        rot(&mut a, idx(i, k), idx(k, j));
                    }
                    for k in j + 1..n {
                        rot(&mut a, idx(i, k), idx(j, k));
                    }
                    for k in 0..n {
                        let g = v[(k, i)];
                        let h = v[(k, j)];
                        v[(k, i)] = g - sn * (h + g * tau);
                        v[(k, j)] = h + sn * (g - h * tau);
                    }
                }
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }
    Err(Error::NoConvergence {
        algorithm: "jacobi eigendecomposition",
        iterations: MAX_SWEEPS,
    })
}

fn sorted_eigen(d: Vec<f64>, v: Mat) -> Eigen {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable descending sort; ties keep the Jacobi output order so repeated
    // runs agree bit for bit.
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = Mat::from_fn(n, n, |r, c| v[(r, order[c])]);
    Eigen { values, vectors }
}

pub fn min_eigenvalue(s: &SymMatrix) -> Result<f64> {
    Ok(*sym_eigen(s)?.values.last().unwrap())
}

pub fn is_psd(s: &SymMatrix, tol: &Tolerances) -> Result<bool> {
    Ok(min_eigenvalue(s)? >= -tol.abs_tol)
}
