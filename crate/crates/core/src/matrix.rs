//! Dense square matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netmodel::radius::{spectral_radius_with, RadiusOptions};

/// Induced operator norms supported by the product enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "induced-1")]
    Induced1,
    #[serde(rename = "induced-2")]
    Induced2,
    #[serde(rename = "induced-inf")]
    InducedInf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::Induced1, NormKind::Induced2, NormKind::InducedInf];

    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::Induced1 => "induced-1",
            NormKind::Induced2 => "induced-2",
            NormKind::InducedInf => "induced-inf",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "induced-1" | "1" => Ok(NormKind::Induced1),
            "induced-2" | "2" => Ok(NormKind::Induced2),
            "induced-inf" | "inf" => Ok(NormKind::InducedInf),
            other => Err(Error::Parameter(format!("unknown norm '{other}'"))),
        }
    }
}

/// Row-major dense `n x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Dimension { expected: n, actual: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= 0.0)
    }

    /// Exact symmetry; system matrices built from undirected graphs satisfy it bitwise.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if rhs.n != self.n {
            return Err(Error::Dimension { expected: self.n, actual: rhs.n });
        }
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::Dimension { expected: self.n, actual: x.len() });
        }
        Ok((0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Spectral norm as `sqrt(rho(M^T M))`. Requires a nonnegative matrix.
    pub fn norm_2(&self, opts: &RadiusOptions) -> Result<f64> {
        let gram = self.transpose().mul(self)?;
        Ok(spectral_radius_with(&gram, opts)?.sqrt())
    }

    pub fn norm(&self, kind: NormKind, opts: &RadiusOptions) -> Result<f64> {
        match kind {
            NormKind::Induced1 => Ok(self.norm_1()),
            NormKind::InducedInf => Ok(self.norm_inf()),
            NormKind::Induced2 => self.norm_2(opts),
        }
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius_with(self, &RadiusOptions::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_and_matvec() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.to_rows(), vec![vec![2.0, 1.0], vec![4.0, 3.0]]);
        assert_eq!(a.matvec(&[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
        assert!(a.matvec(&[1.0]).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn induced_norms() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [0.5, 0.0]]).unwrap();
        assert_eq!(m.norm_1(), 2.0);
        assert_eq!(m.norm_inf(), 3.0);
        // M^T M = [[1.25, 2], [2, 4]]; rho = (5.25 + sqrt(5.25^2 - 4*1)) / 2
        let rho = (5.25 + (5.25f64 * 5.25 - 4.0).sqrt()) / 2.0;
        assert_relative_eq!(
            m.norm_2(&RadiusOptions::default()).unwrap(),
            rho.sqrt(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn norm_names_round_trip() {
        for k in NormKind::ALL {
            assert_eq!(k.as_str().parse::<NormKind>().unwrap(), k);
        }
        assert!("frobenius".parse::<NormKind>().is_err());
    }
}
