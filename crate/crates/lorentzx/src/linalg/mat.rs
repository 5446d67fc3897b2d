use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Mat> {
        if rows.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
                context: "matrix rows",
            });
        }
        let cols = rows[0].len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                    context: "matrix row length",
                });
            }
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Ok(Mat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.add_scaled(other, 1.0)
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add_scaled(other, -1.0)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Mat, c: f64) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + c * b)
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| c * a).collect(),
        }
    }

    /// Copies the `nr x nc` block with upper-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        Mat::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc: f64, a| acc.max(a.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|a| a.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn solve(a: &Mat, b: &Mat) -> Result<Mat> {
    assert!(a.is_square(), "solve requires a square system");
    assert_eq!(a.rows, b.rows, "solve shape mismatch");
    let n = a.rows;
    let m = b.cols;
    let mut lhs = a.clone();
    let mut rhs = b.clone();
    for k in 0..n {
        let mut piv = k;
        let mut piv_val = lhs[(k, k)].abs();
        for i in k + 1..n {
            let v = lhs[(i, k)].abs();
            if v > piv_val {
                piv = i;
                piv_val = v;
            }
        }
        if piv_val == 0.0 || !piv_val.is_finite() {
            return Err(Error::SingularSystem("gaussian elimination"));
        }
        if piv != k {
            for j in 0..n {
                let t = lhs[(k, j)];
                lhs[(k, j)] = lhs[(piv, j)];
                lhs[(piv, j)] = t;
            }
            for j in 0..m {
                let t = rhs[(k, j)];
                rhs[(k, j)] = rhs[(piv, j)];
                rhs[(piv, j)] = t;
            }
        }
        for i in k + 1..n {
            let f = lhs[(i, k)] / lhs[(k, k)];
            if f == 0.0 {
                continue;
            }
            lhs[(i, k)] = 0.0;
            for j in k + 1..n {
                lhs[(i, j)] -= f * lhs[(k, j)];
            }
            for j in 0..m {
                rhs[(i, j)] -= f * rhs[(k, j)];
            }
        }
    }
    let mut x = Mat::zeros(n, m);
    for j in 0..m {
        for i in (0..n).rev() {
            let mut s = rhs[(i, j)];
            for k in i + 1..n {
                s -= lhs[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / lhs[(i, i)];
        }
    }
    if !x.is_finite() {
        return Err(Error::SingularSystem("gaussian elimination back-substitution"));
    }
    Ok(x)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
