//! Exact dense matrices and the rectangular-matrix torsor
//! `(XYZ)_A = (X − Y)(AY)⁻¹(AZ) + Z` on `{X : det(AX) ≠ 0}`.

use std::fmt;

use rand::RngCore;
use thiserror::Error;

use crate::scalars::{FieldElement, Scalar, ScalarField};
use crate::torsor::{Group, TernaryLaw, Undefined};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("AY is singular")]
    SingularAnchorProduct,
    #[error("anchor has rank {rank}, needs full row rank {rows}")]
    RankDeficientAnchor { rank: usize, rows: usize },
    #[error("matrix dimensions must be positive")]
    Empty,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols)).finish()
    }
}

impl<F: FieldElement> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize, like: &F) -> Self {
        let data = (0..n * n)
            .map(|k| if k / n == k % n { like.one_like() } else { like.zero_like() })
            .collect();
        Matrix { rows: n, cols: n, data }
    }

    pub fn zeros(rows: usize, cols: usize, like: &F) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![like.zero_like(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn zip(&self, other: &Self, op: impl Fn(F, F) -> F) -> Result<Self, MatrixError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| op(a.clone(), b.clone()))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.data[0].zero_like();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                data.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Row echelon form by elimination, pivoting on the first nonzero entry.
    /// Returns the reduced matrix, its rank and the determinant sign factor.
    fn echelon(&self) -> (Self, usize, F) {
        let mut m = self.clone();
        let mut sign = self.data[0].one_like();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if piv != rank {
                m.swap_rows(piv, rank);
                sign = -sign;
            }
            let inv = m.get(rank, col).inv().expect("pivot is nonzero");
            for r in rank + 1..m.rows {
                let f = m.get(r, col).clone() * inv.clone();
                if !f.is_zero() {
                    for c in col..m.cols {
                        let v = m.get(r, c).clone() - f.clone() * m.get(rank, c).clone();
                        m.data[r * m.cols + c] = v;
                    }
                }
            }
            rank += 1;
        }
        (m, rank, sign)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().1
    }

    pub fn det(&self) -> Result<F, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let (m, _, sign) = self.echelon();
        Ok((0..m.rows).fold(sign, |acc, i| acc * m.get(i, i).clone()))
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = Matrix::identity(n, &self.data[0]);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(MatrixError::Singular)?;
            a.swap_rows(piv, col);
            b.swap_rows(piv, col);
            let inv = a.get(col, col).inv().expect("pivot is nonzero");
            for c in 0..n {
                a.data[col * n + c] = a.get(col, c).clone() * inv.clone();
                b.data[col * n + c] = b.get(col, c).clone() * inv.clone();
            }
            for r in (0..n).filter(|&r| r != col) {
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    a.data[r * n + c] = a.get(r, c).clone() - f.clone() * a.get(col, c).clone();
                    b.data[r * n + c] = b.get(r, c).clone() - f.clone() * b.get(col, c).clone();
                }
            }
        }
        Ok(b)
    }
}

impl Matrix<Scalar> {
    /// Row-major nested array of scalar JSON values.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }

    pub fn from_json(field: &ScalarField, v: &serde_json::Value) -> Result<Self, MatrixError> {
        let bad = || MatrixError::DimensionMismatch(format!("not a matrix: {v}"));
        let rows = v.as_array().ok_or_else(bad)?;
        let parsed = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|c| field.scalar_from_json(c).map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(parsed)
    }

    /// Every `rows × cols` matrix over a finite field, in lexicographic order.
    pub fn enumerate(field: &ScalarField, rows: usize, cols: usize) -> Option<Vec<Self>> {
        let els = field.elements().ok()?;
        let count = (els.len() as u64).checked_pow((rows * cols) as u32)?;
        if count > 1 << 20 {
            return None;
        }
        let mut out = Vec::with_capacity(count as usize);
        for mut k in 0..count {
            let mut data = vec![field.zero(); rows * cols];
            for slot in data.iter_mut().rev() {
                *slot = els[(k % els.len() as u64) as usize].clone();
                k /= els.len() as u64;
            }
            out.push(Matrix { rows, cols, data });
        }
        Some(out)
    }

    pub fn random(field: &ScalarField, rows: usize, cols: usize, rng: &mut dyn RngCore) -> Self {
        Matrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| field.sample(rng)).collect(),
        }
    }
}

/// The carrier `{X ∈ 𝕂^{q×p} : det(AX) ≠ 0}` for an anchor `A ∈ 𝕂^{p×q}`.
#[derive(Clone, Debug)]
pub struct MatrixTorsorSpace {
    anchor: Matrix<Scalar>,
    field: ScalarField,
}

impl MatrixTorsorSpace {
    /// Rejects anchors without full row rank, whose carrier would be empty.
    pub fn new(field: ScalarField, anchor: Matrix<Scalar>) -> Result<Self, MatrixError> {
        let rank = anchor.rank();
        if rank != anchor.rows() {
            return Err(MatrixError::RankDeficientAnchor {
                rank,
                rows: anchor.rows(),
            });
        }
        Ok(MatrixTorsorSpace { anchor, field })
    }

    pub fn anchor(&self) -> &Matrix<Scalar> {
        &self.anchor
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    /// `p`, the number of rows of `A`.
    pub fn p(&self) -> usize {
        self.anchor.rows()
    }

    /// `q`, the number of columns of `A`.
    pub fn q(&self) -> usize {
        self.anchor.cols()
    }

    fn check_shape(&self, x: &Matrix<Scalar>) -> Result<(), MatrixError> {
        if (x.rows(), x.cols()) != (self.q(), self.p()) {
            return Err(MatrixError::DimensionMismatch(format!(
                "expected a {}x{} matrix, got {}x{}",
                self.q(),
                self.p(),
                x.rows(),
                x.cols()
            )));
        }
        Ok(())
    }

    /// `X ↦ AX`.
    pub fn alpha(&self, x: &Matrix<Scalar>) -> Result<Matrix<Scalar>, MatrixError> {
        self.check_shape(x)?;
        self.anchor.mul(x)
    }

    pub fn contains(&self, x: &Matrix<Scalar>) -> Result<bool, MatrixError> {
        Ok(!self.alpha(x)?.det()?.is_zero())
    }

    /// `(X − Y)(AY)⁻¹(AZ) + Z`.
    pub fn trapezoid(
        &self,
        x: &Matrix<Scalar>,
        y: &Matrix<Scalar>,
        z: &Matrix<Scalar>,
    ) -> Result<Matrix<Scalar>, MatrixError> {
        self.check_shape(x)?;
        let ay_inv = self
            .alpha(y)?
            .inverse()
            .map_err(|_| MatrixError::SingularAnchorProduct)?;
        let az = self.alpha(z)?;
        let w = x.sub(y)?.mul(&ay_inv)?.mul(&az)?.add(z)?;
        debug_assert_eq!(
            self.anchor.mul(&w)?,
            self.alpha(x)?.mul(&ay_inv)?.mul(&az)?,
            "A-homomorphism"
        );
        Ok(w)
    }

    /// All carrier elements over a small finite field.
    pub fn carrier(&self) -> Option<Vec<Matrix<Scalar>>> {
        let mut all = Matrix::enumerate(&self.field, self.q(), self.p())?;
        all.retain(|x| self.contains(x).unwrap_or(false));
        Some(all)
    }
}

impl TernaryLaw for MatrixTorsorSpace {
    type Elem = Matrix<Scalar>;

    fn name(&self) -> String {
        format!("matrix torsor over {} with A = {:?}", self.field, self.anchor)
    }

    fn eval(&self, x: &Self::Elem, y: &Self::Elem, z: &Self::Elem) -> Result<Self::Elem, Undefined> {
        self.trapezoid(x, y, z).map_err(|e| Undefined(e.to_string()))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        loop {
            let x = Matrix::random(&self.field, self.q(), self.p(), rng);
            if self.contains(&x).unwrap_or(false) {
                return x;
            }
        }
    }

    fn contains(&self, x: &Self::Elem) -> bool {
        MatrixTorsorSpace::contains(self, x).unwrap_or(false)
    }

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        self.carrier()
    }
}

/// `GL(n, 𝕂)` under matrix multiplication.
pub struct GeneralLinear {
    pub n: usize,
    pub field: ScalarField,
}

impl Group for GeneralLinear {
    type Elem = Matrix<Scalar>;

    fn name(&self) -> String {
        format!("GL({}, {})", self.n, self.field)
    }

    fn identity(&self) -> Self::Elem {
        Matrix::identity(self.n, &self.field.zero())
    }

    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b).expect("square matrices of equal size")
    }

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        a.inverse().expect("invertible matrix")
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        loop {
            let m = Matrix::random(&self.field, self.n, self.n, rng);
            if !m.det().expect("square").is_zero() {
                return m;
            }
        }
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.rows() == self.n && a.det().is_ok_and(|d| !d.is_zero())
    }

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        let mut all = Matrix::enumerate(&self.field, self.n, self.n)?;
        all.retain(|m| !m.det().expect("square").is_zero());
        Some(all)
    }
}
