//! Dense matrices over a finite field, stored row-major as raw field values.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|&v| v >= field.order()) {
            return Err(Error::InvalidInput("matrix entry outside the field".into()));
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn check_shape(&self, other: &Matrix, same: bool) -> Result<()> {
        self.field.check_same(&other.field)?;
        let ok = if same {
            self.rows == other.rows && self.cols == other.cols
        } else {
            self.cols == other.rows
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_shape(other, true)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add_raw(a, b)).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        Matrix { data: self.data.iter().map(|&a| f.neg_raw(a)).collect(), ..self.clone() }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_shape(other, false)?;
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        if f.is_prime_field() {
            let p = f.characteristic() as u64;
            let mut acc = vec![0u64; other.cols];
            for r in 0..self.rows {
                acc.iter_mut().for_each(|v| *v = 0);
                for k in 0..self.cols {
                    let a = self.get(r, k) as u64;
                    if a == 0 {
                        continue;
                    }
                    for (v, &b) in acc.iter_mut().zip(other.row(k)) {
                        *v += a * b as u64;
                    }
                    if k % 1024 == 1023 {
                        acc.iter_mut().for_each(|v| *v %= p);
                    }
                }
                for (c, v) in acc.iter().enumerate() {
                    out.set(r, c, (v % p) as u32);
                }
            }
        } else {
            for r in 0..self.rows {
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a == 0 {
                        continue;
                    }
                    for c in 0..other.cols {
                        let v = f.add_raw(out.get(r, c), f.mul_raw(a, other.get(k, c)));
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Places `blocks` (a grid of equally tall rows of matrices) side by side.
    pub fn block(field: &Field, blocks: &[Vec<&Matrix>]) -> Result<Matrix> {
        let mut rows = Vec::new();
        for band in blocks {
            let height = band.first().map_or(0, |m| m.rows);
            if band.iter().any(|m| m.rows != height) {
                return Err(Error::InvalidInput("block rows differ in height".into()));
            }
            for r in 0..height {
                rows.push(band.iter().flat_map(|m| m.row(r).iter().copied()).collect::<Vec<_>>());
            }
        }
        Self::from_rows(field, &rows)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv_raw(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = f.mul_raw(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub_raw(m.get(i, j), f.mul_raw(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.rows, self.cols, self.field.order())?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}
