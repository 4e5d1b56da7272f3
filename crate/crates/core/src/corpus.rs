//! Standard prime tables and curated certificates.

use std::collections::BTreeMap;

use crate::certify::{Certificate, Node, Witness};
use crate::complex::{comparison_map, cone, ChainMap, FreeComplex};
use crate::error::Result;
use crate::ideal::Ideal;
use crate::koszul::{koszul, KoszulSpec};
use crate::matrix::RingMatrix;
use crate::module::PresentedModule;
use crate::poly::PolyRing;
use crate::spectrum::PrimeTable;

pub fn ring_x() -> PolyRing {
    PolyRing::rationals(&["x"])
}

pub fn ring_xy() -> PolyRing {
    PolyRing::rationals(&["x", "y"])
}

/// `(0) ⊂ (x) ⊂ (x, y)`.
pub fn chain_table(r: &PolyRing) -> Result<PrimeTable> {
    PrimeTable::parse(r, &[("0", &[]), ("x", &["x"]), ("x,y", &["x", "y"])])
}

/// `(0), (x), (y), (x, y), (x - 1, y)`.
pub fn five_table(r: &PolyRing) -> Result<PrimeTable> {
    PrimeTable::parse(
        r,
        &[
            ("0", &[]),
            ("x", &["x"]),
            ("y", &["y"]),
            ("x,y", &["x", "y"]),
            ("x-1,y", &["x - 1", "y"]),
        ],
    )
}

/// `(x), (y), (x, y)`.
pub fn axes_table(r: &PolyRing) -> Result<PrimeTable> {
    PrimeTable::parse(r, &[("x", &["x"]), ("y", &["y"]), ("x,y", &["x", "y"])])
}

/// `(x), (y), (x, y), (x - 1, y), (x, y - 1)`.
pub fn points_table(r: &PolyRing) -> Result<PrimeTable> {
    PrimeTable::parse(
        r,
        &[
            ("x", &["x"]),
            ("y", &["y"]),
            ("x,y", &["x", "y"]),
            ("x-1,y", &["x - 1", "y"]),
            ("x,y-1", &["x", "y - 1"]),
        ],
    )
}

/// `(x), (y), (x - y), (x, y), (x - 1, y), (x - 1, y - 1)`.
pub fn lines_table(r: &PolyRing) -> Result<PrimeTable> {
    PrimeTable::parse(
        r,
        &[
            ("x", &["x"]),
            ("y", &["y"]),
            ("x-y", &["x - y"]),
            ("x,y", &["x", "y"]),
            ("x-1,y", &["x - 1", "y"]),
            ("x-1,y-1", &["x - 1", "y - 1"]),
        ],
    )
}

/// A free resolution of `R/I` in degree 0.
pub fn residue(r: &PolyRing, gens: &[&str]) -> Result<FreeComplex> {
    Ok(PresentedModule::quotient(&Ideal::parse(r, gens)?)
        .free_resolution(r.nvars())?
        .complex)
}

#[derive(Clone, Debug)]
pub struct CuratedCertificate {
    pub name: &'static str,
    pub generator: FreeComplex,
    pub certificate: Certificate,
}

/// `R/(x) < R/(x²)` over `Q[x]` through `0 -> R/(x) -x-> R/(x²) -> R/(x) -> 0`.
pub fn square_extension(r: &PolyRing) -> Result<CuratedCertificate> {
    let e = residue(r, &["x"])?;
    let y = residue(r, &["x^2"])?;
    let mut comps = BTreeMap::new();
    comps.insert(0, RingMatrix::parse(r, &[&["x"]])?);
    comps.insert(1, RingMatrix::parse(r, &[&["1"]])?);
    let f = ChainMap::new(&e, &y, comps)?;
    let w = comparison_map(&cone(&f)?, &e, 0, &RingMatrix::identity(r, 1))?;
    let mut c = Certificate::new(r, "y");
    c.push(
        "g",
        Node::Generator {
            complex: e.clone(),
            witness: None,
        },
    );
    c.push(
        "y",
        Node::Extend {
            x: "g".into(),
            y: y.clone(),
            map: f,
            cone_witness: Witness::Forward(w),
            z: "g".into(),
        },
    );
    Ok(CuratedCertificate {
        name: "square-extension",
        generator: e,
        certificate: c.with_claim(y, None),
    })
}

/// `R/(x, y) < K(x, y)` over `Q[x, y]` by replacing the resolution with the Koszul complex.
pub fn koszul_replacement(r: &PolyRing) -> Result<CuratedCertificate> {
    let e = residue(r, &["x", "y"])?;
    let k = koszul(&KoszulSpec::plain(r, vec![r.parse("x")?, r.parse("y")?])?)?;
    let w = comparison_map(&e, &k, 0, &RingMatrix::identity(r, 1))?;
    let mut c = Certificate::new(r, "k");
    c.push(
        "g",
        Node::Generator {
            complex: e.clone(),
            witness: None,
        },
    );
    c.push(
        "k",
        Node::Replace {
            node: "g".into(),
            target: k.clone(),
            witness: Witness::Forward(w),
        },
    );
    Ok(CuratedCertificate {
        name: "koszul-replacement",
        generator: e,
        certificate: c.with_claim(k, None),
    })
}

pub fn curated_certificates() -> Result<Vec<CuratedCertificate>> {
    Ok(vec![
        square_extension(&ring_x())?,
        koszul_replacement(&ring_xy())?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::check_certificate;

    #[test]
    fn tables_build() {
        let r = ring_xy();
        assert_eq!(chain_table(&r).unwrap().len(), 3);
        assert_eq!(five_table(&r).unwrap().len(), 5);
        assert_eq!(axes_table(&r).unwrap().len(), 3);
        assert_eq!(points_table(&r).unwrap().len(), 5);
        assert_eq!(lines_table(&r).unwrap().len(), 6);
    }

    #[test]
    fn curated_certificates_check() {
        for c in curated_certificates().unwrap() {
            let rep = check_certificate(&c.certificate, &c.generator).unwrap();
            assert!(rep.accepted(), "{}: {:?}", c.name, rep.rejection);
        }
    }
}
