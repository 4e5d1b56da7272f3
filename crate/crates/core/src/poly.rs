//! Polynomial rings over exact fields and their sparse polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};
use crate::monomial::Monomial;

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingData {
    field: Field,
    vars: Vec<String>,
}

/// `field[vars]` with the degree-reverse-lexicographic order over the
/// declared variable sequence. Cheap to clone.
#[derive(Clone, Debug)]
pub struct PolyRing(Arc<RingData>);

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for PolyRing {}

impl PolyRing {
    pub fn new<S: AsRef<str>>(field: Field, vars: &[S]) -> Result<PolyRing> {
        if vars.is_empty() {
            return Err(Error::InvalidRing(
                "at least one variable is required".into(),
            ));
        }
        let mut names: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref();
            let valid = v
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidRing(format!("bad variable name {v:?}")));
            }
            if names.iter().any(|n| n == v) {
                return Err(Error::InvalidRing(format!("duplicate variable {v}")));
            }
            names.push(v.to_string());
        }
        Ok(PolyRing(Arc::new(RingData { field, vars: names })))
    }

    /// `Q[vars]`.
    pub fn rationals<S: AsRef<str>>(vars: &[S]) -> PolyRing {
        PolyRing::new(Field::Rationals, vars).expect("valid variable names")
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field().one())
    }

    pub fn constant(&self, c: Coeff) -> Poly {
        Poly::monomial(Monomial::one(self.nvars()), c)
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(self.field().from_i64(n))
    }

    /// The `i`-th variable.
    pub fn var(&self, index: usize) -> Poly {
        Poly::monomial(Monomial::var(self.nvars(), index, 1), self.field().one())
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// Parses an ASCII polynomial expression over the declared variables.
    pub fn parse(&self, text: &str) -> Result<Poly> {
        Parser::new(self, text).parse_all()
    }

    /// Parse that panics on malformed input; for literals in code and tests.
    pub fn p(&self, text: &str) -> Poly {
        self.parse(text)
            .unwrap_or_else(|e| panic!("bad polynomial literal {text:?}: {e}"))
    }

    pub fn display<'a>(&'a self, poly: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { ring: self, poly }
    }

    pub fn format(&self, poly: &Poly) -> String {
        self.display(poly).to_string()
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field(), self.vars().join(","))
    }
}

/// Sparse polynomial, terms strictly descending in the monomial order with
/// nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Coeff)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn monomial(m: Monomial, c: Coeff) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(mut terms: Vec<(Monomial, Coeff)>) -> Poly {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => lc.add_assign_ref(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Nonzero constant, i.e. a unit of the polynomial ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.is_unit()
    }

    pub fn is_one(&self) -> bool {
        self.is_unit() && self.terms[0].1.is_one()
    }

    pub fn leading(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(t, d)| (t.mul(m), d * c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        Poly {
            terms: merge(&self.terms, &other.terms, None),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        Poly {
            terms: merge(&self.terms, &other.terms, Some(())),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Poly::zero();
        for (m, c) in &small.terms {
            acc = acc.add(&large.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, mut e: u32, ring: &PolyRing) -> Poly {
        let mut base = self.clone();
        let mut acc = ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }
}

/// Merges two descending term lists; `negate_rhs` subtracts instead of adding.
fn merge(
    a: &[(Monomial, Coeff)],
    b: &[(Monomial, Coeff)],
    negate_rhs: Option<()>,
) -> Vec<(Monomial, Coeff)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let rhs = |c: &Coeff| if negate_rhs.is_some() { -c } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b[j].0.clone(), rhs(&b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_rhs.is_some() {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), rhs(c))));
    out
}

pub struct PolyDisplay<'a> {
    ring: &'a PolyRing,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || !abs.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars()[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    ring: &'a PolyRing,
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a PolyRing, text: &'a str) -> Self {
        Parser {
            ring,
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Poly> {
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let p = self.expr()?;
        if self.peek().is_some() {
            return self.err(format!(
                "unexpected character {:?}",
                self.bytes[self.pos] as char
            ));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    self.skip_ws();
                    let d = self.integer()?;
                    if d == BigInt::from(0) {
                        return self.err("division by zero");
                    }
                    let inv = BigRational::new(1.into(), d);
                    acc = acc.scale(&self.ring.field().from_rational(&inv)?);
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = match u32::try_from(e) {
                Ok(e) if e <= u16::MAX as u32 => e,
                _ => return self.err("exponent out of range"),
            };
            return Ok(base.pow(e, self.ring));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        Ok(self.text[start..self.pos].parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let q = BigRational::from_integer(n);
                Ok(self.ring.constant(self.ring.field().from_rational(&q)?))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier_run(),
            Some(c) => self.err(format!("unexpected character {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    /// Reads the longest declared variable name at the cursor, so `xy`
    /// reads as `x*y` when only `x` and `y` are declared and an exponent binds
    /// to the last variable only.
    fn identifier_run(&mut self) -> Result<Poly> {
        let rest = &self.text[self.pos..];
        let best = self
            .ring
            .vars()
            .iter()
            .enumerate()
            .filter(|(_, v)| rest.starts_with(v.as_str()))
            .max_by_key(|(_, v)| v.len());
        match best {
            Some((i, v)) => {
                self.pos += v.len();
                Ok(self.ring.var(i))
            }
            None => {
                let end = rest
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(rest.len());
                self.err(format!("unknown variable in {:?}", &rest[..end]))
            }
        }
    }
}
