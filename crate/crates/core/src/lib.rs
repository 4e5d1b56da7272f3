//! Exact computations with bounded free complexes over polynomial rings:
//! Gröbner bases, presented modules, homology and supports, Koszul
//! complexes, perversity functions and certificates for the killing relation.

pub mod certify;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod field;
pub mod groebner;
pub mod ideal;
pub mod koszul;
pub mod lemmas;
pub mod linsys;
pub mod matrix;
pub mod module;
pub mod monomial;
pub mod perversity;
pub mod poly;
pub mod solve;
pub mod spectrum;

pub use certify::{
    cellular_certificate, check_certificate, tensor_certificate, Certificate, CheckReport, Node,
    Witness,
};
pub use complex::{check_homotopy, cone, ChainMap, FreeComplex, Homotopy};
pub use error::{Error, Result};
pub use field::{Coeff, Field};
pub use ideal::Ideal;
pub use koszul::{annihilator_power, check_annihilation, koszul, minsupp_map, KoszulSpec};
pub use lemmas::{LemmaReport, Status};
pub use linsys::HomotopySystem;
pub use matrix::RingMatrix;
pub use module::{free_resolution, syzygies, ModuleMap, PresentedModule, Resolution};
pub use monomial::Monomial;
pub use perversity::{build_s, phi, roundtrip_check, PerversityFunction};
pub use poly::{Poly, PolyRing};
pub use spectrum::{supp_complex, supp_member, PrimeSet, PrimeTable};
