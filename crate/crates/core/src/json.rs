//! JSON encodings shared by the library types: complex numbers are `[re, im]`
//! pairs, matrices are row-major nested arrays.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexPair = [f64; 2];

pub fn pair(c: Complex64) -> ComplexPair {
    [c.re, c.im]
}

pub fn unpair(p: ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn vector_to_pairs(v: &DVector<Complex64>) -> Vec<ComplexPair> {
    v.iter().copied().map(pair).collect()
}

pub fn vector_from_pairs(v: &[ComplexPair]) -> DVector<Complex64> {
    DVector::from_iterator(v.len(), v.iter().copied().map(unpair))
}

pub fn matrix_to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<ComplexPair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<ComplexPair>]) -> Result<DMatrix<Complex64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Domain("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| unpair(rows[i][j])))
}

pub fn int_matrix_to_rows(m: &DMatrix<i64>) -> Vec<Vec<i64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn int_matrix_from_rows(rows: &[Vec<i64>]) -> Result<DMatrix<i64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Domain("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}
