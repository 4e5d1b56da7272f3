//! Membership, lifting and syzygies for submodules of `R^rows` given by
//! generating columns.
//!
//! Lifting uses the augmented module generated by `(a_j, e_j)` in
//! `R^{rows + cols}`. In position-over-term order the first `rows`
//! coordinates are eliminated first, so the basis elements with zero top
//! part generate the syzygies and the others carry their own expression in
//! the original columns.

use crate::error::Result;
use crate::field::Field;
use crate::groebner::{groebner_basis, reduce, top_reduce_below, GroebnerOptions, Vector};
use crate::poly::Poly;

/// Gröbner basis of the column span; answers membership only.
#[derive(Clone, Debug)]
pub struct ImageBasis {
    rows: usize,
    basis: Vec<Vector>,
}

impl ImageBasis {
    pub fn new(columns: &[Vec<Poly>], rows: usize, opts: GroebnerOptions) -> Result<ImageBasis> {
        let gens: Vec<Vector> = columns.iter().map(Vector::from_polys).collect();
        Ok(ImageBasis {
            rows,
            basis: groebner_basis(&gens, opts)?,
        })
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        reduce(&Vector::from_polys(v), &self.basis).is_zero()
    }

    pub fn normal_form(&self, v: &[Poly]) -> Vec<Poly> {
        reduce(&Vector::from_polys(v), &self.basis).to_polys(self.rows)
    }

    /// Whether the span is all of `R^rows`.
    pub fn is_everything(&self) -> bool {
        (0..self.rows).all(|i| {
            self.basis.iter().any(|g| {
                let l = g.leading().unwrap();
                l.pos == i && l.mono.is_one()
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct Lifting {
    rows: usize,
    cols: usize,
    basis: Vec<Vector>,
}

impl Lifting {
    pub fn new(
        columns: &[Vec<Poly>],
        rows: usize,
        nvars: usize,
        field: Field,
        opts: GroebnerOptions,
    ) -> Result<Lifting> {
        let cols = columns.len();
        let gens: Vec<Vector> = columns
            .iter()
            .enumerate()
            .map(|(j, c)| Vector::from_polys(c).add(&Vector::unit(rows + j, nvars, field.one())))
            .collect();
        Ok(Lifting {
            rows,
            cols,
            basis: groebner_basis(&gens, opts)?,
        })
    }

    /// Generators of the module of relations among the columns, in the
    /// order of the reduced basis.
    pub fn syzygies(&self) -> Vec<Vec<Poly>> {
        self.basis
            .iter()
            .filter(|g| g.leading().unwrap().pos >= self.rows)
            .map(|g| g.to_polys_range(self.rows, self.cols))
            .collect()
    }

    /// Some `v` with `A v = b`, if one exists.
    pub fn solve(&self, b: &[Poly]) -> Option<Vec<Poly>> {
        let rest = top_reduce_below(&Vector::from_polys(b), &self.basis, self.rows)?;
        Some(
            rest.to_polys_range(self.rows, self.cols)
                .into_iter()
                .map(|p| p.neg())
                .collect(),
        )
    }

    pub fn contains(&self, b: &[Poly]) -> bool {
        top_reduce_below(&Vector::from_polys(b), &self.basis, self.rows).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    #[test]
    fn koszul_syzygy_and_lift() {
        let r = PolyRing::rationals(&["x", "y"]);
        let cols = vec![vec![r.p("x")], vec![r.p("y")]];
        let l = Lifting::new(&cols, 1, 2, r.field(), GroebnerOptions::default()).unwrap();
        let syz = l.syzygies();
        assert_eq!(syz, vec![vec![r.p("y"), r.p("-x")]]);
        let b = vec![r.p("x^2 + x*y + y")];
        let v = l.solve(&b).unwrap();
        let back = r.p("x").mul(&v[0]).add(&r.p("y").mul(&v[1]));
        assert_eq!(back, b[0]);
        assert!(l.solve(&[r.p("1")]).is_none());
    }

    #[test]
    fn zero_rows_give_identity_syzygies() {
        let r = PolyRing::rationals(&["x"]);
        let cols = vec![vec![], vec![]];
        let l = Lifting::new(&cols, 0, 1, r.field(), GroebnerOptions::default()).unwrap();
        assert_eq!(
            l.syzygies(),
            vec![vec![r.p("1"), r.p("0")], vec![r.p("0"), r.p("1")]]
        );
    }
}
