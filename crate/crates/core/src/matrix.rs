//! Dense matrices over a polynomial ring.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMatrix {
    ring: PolyRing,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl RingMatrix {
    pub fn zeros(ring: &PolyRing, rows: usize, cols: usize) -> RingMatrix {
        RingMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(ring: &PolyRing, n: usize) -> RingMatrix {
        RingMatrix::scalar(ring, n, &ring.one())
    }

    pub fn scalar(ring: &PolyRing, n: usize, c: &Poly) -> RingMatrix {
        let mut m = RingMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Row-major entries with an explicit shape.
    pub fn from_entries(
        ring: &PolyRing,
        rows: usize,
        cols: usize,
        entries: Vec<Poly>,
    ) -> Result<RingMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RingMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(ring: &PolyRing, rows: Vec<Vec<Poly>>) -> Result<RingMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        RingMatrix::from_entries(ring, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_columns(ring: &PolyRing, rows: usize, columns: &[Vec<Poly>]) -> Result<RingMatrix> {
        let cols = columns.len();
        let mut m = RingMatrix::zeros(ring, rows, cols);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Shape(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, e) in col.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        Ok(m)
    }

    /// Parses entries written as polynomial strings, row by row.
    pub fn parse(ring: &PolyRing, rows: &[&[&str]]) -> Result<RingMatrix> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| ring.parse(e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        RingMatrix::from_rows(ring, parsed)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Poly) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    fn check_ring(&self, other: &RingMatrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RingMatrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Poly::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    fn zip_with(&self, other: &RingMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<RingMatrix> {
        self.check_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(RingMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.zip_with(other, Poly::add)
    }

    pub fn sub(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.zip_with(other, Poly::sub)
    }

    pub fn neg(&self) -> RingMatrix {
        self.map(Poly::neg)
    }

    pub fn scale(&self, c: &Poly) -> RingMatrix {
        self.map(|e| e.mul(c))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> RingMatrix {
        RingMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut out = RingMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_ring(other)?;
        if self.rows != other.rows {
            return Err(Error::Shape(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = RingMatrix::zeros(&self.ring, self.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, other);
        Ok(out)
    }

    pub fn vstack(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_ring(other)?;
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut out = RingMatrix::zeros(&self.ring, self.rows + other.rows, self.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, 0, other);
        Ok(out)
    }

    pub fn block_diag(ring: &PolyRing, blocks: &[&RingMatrix]) -> RingMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = RingMatrix::zeros(ring, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.paste(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Copies `block` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, block: &RingMatrix) {
        assert!(
            r + block.rows <= self.rows && c + block.cols <= self.cols,
            "block out of range"
        );
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> RingMatrix {
        let mut out = RingMatrix::zeros(&self.ring, rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out.set(oi, oj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, keep: &[usize]) -> RingMatrix {
        let mut out = RingMatrix::zeros(&self.ring, self.rows, keep.len());
        for (oj, &j) in keep.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, oj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, keep: &[usize]) -> RingMatrix {
        let mut out = RingMatrix::zeros(&self.ring, keep.len(), self.cols);
        for (oi, &i) in keep.iter().enumerate() {
            for j in 0..self.cols {
                out.set(oi, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product: block `(i, j)` is `self[i][j] * other`.
    pub fn kronecker(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_ring(other)?;
        let mut out = RingMatrix::zeros(&self.ring, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(
                            i * other.rows + k,
                            j * other.cols + l,
                            a.mul(other.get(k, l)),
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(ring: &PolyRing, perm: &[usize]) -> RingMatrix {
        let mut out = RingMatrix::zeros(ring, perm.len(), perm.len());
        for (j, &i) in perm.iter().enumerate() {
            out.set(i, j, ring.one());
        }
        out
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.entries.iter().filter_map(|e| e.total_degree()).max()
    }

    /// Entries as polynomial strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| self.ring.format(e)).collect())
            .collect()
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_strings()
            .into_iter()
            .map(|r| format!("[{}]", r.join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_blocks() {
        let r = PolyRing::rationals(&["x", "y"]);
        let a = RingMatrix::parse(&r, &[&["x", "y"]]).unwrap();
        let b = RingMatrix::parse(&r, &[&["y"], &["-x"]]).unwrap();
        assert!(a.mul(&b).unwrap().is_zero());
        assert_eq!(b.mul(&a).unwrap().rows(), 2);
        assert!(a.mul(&a).is_err());
        let k = a.kronecker(&RingMatrix::identity(&r, 2)).unwrap();
        assert_eq!((k.rows(), k.cols()), (2, 4));
        assert_eq!(k.get(1, 3), &r.p("y"));
        let s = a
            .vstack(&a)
            .unwrap()
            .hstack(&RingMatrix::zeros(&r, 2, 1))
            .unwrap();
        assert_eq!(
            s.to_strings(),
            vec![vec!["x", "y", "0"], vec!["x", "y", "0"]]
        );
        assert_eq!(
            a.transpose(),
            RingMatrix::parse(&r, &[&["x"], &["y"]]).unwrap()
        );
    }

    #[test]
    fn permutation_matrix_moves_basis_vectors() {
        let r = PolyRing::rationals(&["x"]);
        let p = RingMatrix::permutation(&r, &[2, 0, 1]);
        let v = vec![r.p("1"), r.p("x"), r.p("x^2")];
        assert_eq!(p.apply(&v).unwrap(), vec![r.p("x"), r.p("x^2"), r.p("1")]);
    }
}
