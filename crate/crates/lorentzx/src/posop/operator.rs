use crate::cone::{ConeDims, PointPQ};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// A linear operator on `R^(p+q)` with its cone block structure cached:
///
/// ```text
/// A = [ A11  A12 ]      A11: p x p,  A12: p x q
///     [ A21  A22 ]      A21: q x p,  A22: q x q
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dims: ConeDims,
    mat: Mat,
    a11: Mat,
    a12: Mat,
    a21: Mat,
    a22: Mat,
}

impl Operator {
    pub fn new(dims: ConeDims, mat: Mat) -> Result<Self> {
        let n = dims.n();
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: mat.rows().max(mat.cols()),
                context: "operator matrix",
            });
        }
        if !mat.is_finite() {
            return Err(Error::NonFinite("operator entries"));
        }
        let p = dims.p();
        let q = dims.q();
        Ok(Operator {
            dims,
            a11: mat.block(0, 0, p, p),
            a12: mat.block(0, p, p, q),
            a21: mat.block(p, 0, q, p),
            a22: mat.block(p, p, q, q),
            mat,
        })
    }

    pub fn from_rows(dims: ConeDims, rows: &[Vec<f64>]) -> Result<Self> {
        Operator::new(dims, Mat::from_rows(rows)?)
    }

    pub fn identity(dims: ConeDims) -> Self {
        Operator::new(dims, Mat::identity(dims.n())).expect("identity always conforms")
    }

    /// `blkdiag(P, Q)` from the two diagonal blocks.
    pub fn block_diag(dims: ConeDims, p_block: &Mat, q_block: &Mat) -> Result<Self> {
        let p = dims.p();
        let q = dims.q();
        if p_block.rows() != p || p_block.cols() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: p_block.rows().max(p_block.cols()),
                context: "block-diagonal P block",
            });
        }
        if q_block.rows() != q || q_block.cols() != q {
            return Err(Error::DimensionMismatch {
                expected: q,
                got: q_block.rows().max(q_block.cols()),
                context: "block-diagonal Q block",
            });
        }
        let mat = Mat::from_fn(dims.n(), dims.n(), |i, j| {
            if i < p && j < p {
                p_block[(i, j)]
            } else if i >= p && j >= p {
                q_block[(i - p, j - p)]
            } else {
                0.0
            }
        });
        Operator::new(dims, mat)
    }

    pub fn dims(&self) -> ConeDims {
        self.dims
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn a11(&self) -> &Mat {
        &self.a11
    }

    pub fn a12(&self) -> &Mat {
        &self.a12
    }

    pub fn a21(&self) -> &Mat {
        &self.a21
    }

    pub fn a22(&self) -> &Mat {
        &self.a22
    }

    pub fn transpose(&self) -> Operator {
        Operator::new(self.dims, self.mat.transpose()).expect("transpose keeps dimensions")
    }

    pub fn negate(&self) -> Operator {
        Operator::new(self.dims, self.mat.scale(-1.0)).expect("negation keeps dimensions")
    }

    pub fn norm_fro(&self) -> f64 {
        self.mat.norm_fro()
    }

    pub fn apply(&self, z: &PointPQ) -> Result<PointPQ> {
        if z.dims() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.n(),
                got: z.dims().n(),
                context: "operator argument",
            });
        }
        let out = self.mat.mul_vec(&z.to_flat());
        PointPQ::from_flat(self.dims, &out)
    }

    /// Image `A (e_i, u) = (A11 e_i + A12 u, A21 e_i + A22 u)` of a cone
    /// generator; `u` is not required to be unit here.
    pub fn mapped_generator(&self, i: usize, u: &[f64]) -> Result<PointPQ> {
        let p = self.dims.p();
        let q = self.dims.q();
        if i >= p {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: p,
                context: "generator index",
            });
        }
        if u.len() != q {
            return Err(Error::DimensionMismatch {
                expected: q,
                got: u.len(),
                context: "generator direction",
            });
        }
        let x: Vec<f64> = (0..p)
            .map(|k| {
                self.a11[(k, i)]
                    + self.a12.row(k).iter().zip(u).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect();
        let uu: Vec<f64> = (0..q)
            .map(|k| {
                self.a21[(k, i)]
                    + self.a22.row(k).iter().zip(u).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect();
        PointPQ::new(self.dims, x, uu)
    }

    /// Column `i` of `A` restricted to the first `p` input coordinates, read
    /// as a point: `(A11 e_i, A21 e_i)`.
    pub fn column_point(&self, i: usize) -> Result<PointPQ> {
        if i >= self.dims.p() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.dims.p(),
                context: "column index",
            });
        }
        PointPQ::new(self.dims, self.a11.col(i), self.a21.col(i))
    }

    /// Row `k` of `(A11 | A12)` read as a point of `R^p x R^q`.
    pub fn row_point(&self, k: usize) -> Result<PointPQ> {
        if k >= self.dims.p() {
            return Err(Error::IndexOutOfRange {
                index: k,
                bound: self.dims.p(),
                context: "row index",
            });
        }
        PointPQ::new(self.dims, self.a11.row(k).to_vec(), self.a12.row(k).to_vec())
    }
}
