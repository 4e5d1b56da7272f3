//! Fixed inputs for the benchmarks.

use nullity_core::koszul::KoszulSpec;
use nullity_core::{koszul, FreeComplex, Ideal, PolyRing, PresentedModule};

pub fn ring(n: usize) -> PolyRing {
    let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    PolyRing::rationals(&vars)
}

/// The ideal of 2 x 2 minors of a generic 2 x 3 matrix of linear forms.
pub fn minors(r: &PolyRing) -> Ideal {
    Ideal::parse(r, &["x0*x4 - x1*x3", "x0*x5 - x2*x3", "x1*x5 - x2*x4"]).expect("literals parse")
}

/// A resolution of `R/I` in degree 0.
pub fn residue(r: &PolyRing, gens: &[&str]) -> FreeComplex {
    PresentedModule::quotient(&Ideal::parse(r, gens).expect("literals parse"))
        .free_resolution(r.nvars())
        .expect("resolution exists")
        .complex
}

/// `K(x_0^k, ..., x_{m-1}^k)`.
pub fn koszul_powers(r: &PolyRing, m: usize, k: u32) -> FreeComplex {
    let gens = (0..m).map(|i| r.var(i)).collect();
    koszul(&KoszulSpec::new(r, gens, vec![k; m]).expect("valid spec")).expect("koszul builds")
}
