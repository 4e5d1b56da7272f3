//! Buchberger's algorithm for submodules of free modules `R^n`.
//!
//! Vectors are ordered position-over-term: a smaller position index is
//! larger, and within a position the ring's degree-reverse-lexicographic
//! order decides. Ideals are the rank-one case.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::Coeff;
use crate::monomial::Monomial;
use crate::poly::Poly;

pub const DEFAULT_PAIR_BUDGET: usize = 200_000;

/// A single term `c * m * e_pos`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub pos: usize,
    pub mono: Monomial,
    pub coeff: Coeff,
}

fn term_order(a_pos: usize, a: &Monomial, b_pos: usize, b: &Monomial) -> Ordering {
    b_pos.cmp(&a_pos).then_with(|| a.cmp(b))
}

/// An element of `R^n`, terms strictly descending in position-over-term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    terms: Vec<Term>,
}

impl Vector {
    pub fn zero() -> Vector {
        Vector { terms: Vec::new() }
    }

    /// Vector whose `i`-th component is `entries[i]`.
    pub fn from_polys<'a, I: IntoIterator<Item = &'a Poly>>(entries: I) -> Vector {
        Self::from_polys_at(entries, 0)
    }

    /// Like `from_polys` but component `i` is placed at position `offset + i`.
    pub fn from_polys_at<'a, I: IntoIterator<Item = &'a Poly>>(
        entries: I,
        offset: usize,
    ) -> Vector {
        let mut terms = Vec::new();
        for (i, p) in entries.into_iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term {
                    pos: offset + i,
                    mono: m.clone(),
                    coeff: c.clone(),
                });
            }
        }
        // positions ascend, monomials already descend inside each position
        Vector { terms }
    }

    pub fn unit(pos: usize, nvars: usize, one: Coeff) -> Vector {
        Vector {
            terms: vec![Term {
                pos,
                mono: Monomial::one(nvars),
                coeff: one,
            }],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Components `0..len` as polynomials (positions `>= len` are ignored).
    pub fn to_polys(&self, len: usize) -> Vec<Poly> {
        self.to_polys_range(0, len)
    }

    /// Components `offset..offset+len`, re-indexed from zero.
    pub fn to_polys_range(&self, offset: usize, len: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); len];
        for t in &self.terms {
            if t.pos >= offset && t.pos < offset + len {
                buckets[t.pos - offset].push((t.mono.clone(), t.coeff.clone()));
            }
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    /// Drops every term at a position `< offset` and shifts the rest down.
    pub fn drop_below(&self, offset: usize) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|t| t.pos >= offset)
                .map(|t| Term {
                    pos: t.pos - offset,
                    mono: t.mono.clone(),
                    coeff: t.coeff.clone(),
                })
                .collect(),
        }
    }

    pub fn max_pos(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.pos).max()
    }

    pub fn scale(&self, c: &Coeff) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    pos: t.pos,
                    mono: t.mono.clone(),
                    coeff: &t.coeff * c,
                })
                .collect(),
        }
    }

    pub fn monic(&self) -> Vector {
        match self.terms.first() {
            None => Vector::zero(),
            Some(t) if t.coeff.is_one() => self.clone(),
            Some(t) => self.scale(&t.coeff.inv()),
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector {
            terms: merge_scaled(&self.terms, &other.terms, None, None),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        let minus_one = match other.terms.first() {
            Some(t) => -t.coeff.one_like(),
            None => return self.clone(),
        };
        Vector {
            terms: merge_scaled(&self.terms, &other.terms, None, Some(&minus_one)),
        }
    }

    /// `self + c * m * other`.
    pub fn add_multiple(&self, other: &Vector, m: &Monomial, c: &Coeff) -> Vector {
        Vector {
            terms: merge_scaled(&self.terms, &other.terms, Some(m), Some(c)),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Vector {
        let mut acc = Vector::zero();
        for (m, c) in p.terms() {
            acc = acc.add_multiple(self, m, c);
        }
        acc
    }

    /// Largest total degree of any term, ignoring positions.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }
}

/// Merge `a + c*m*b` where both are descending term lists.
fn merge_scaled(a: &[Term], b: &[Term], m: Option<&Monomial>, c: Option<&Coeff>) -> Vec<Term> {
    let scaled = |t: &Term| Term {
        pos: t.pos,
        mono: match m {
            Some(m) => t.mono.mul(m),
            None => t.mono.clone(),
        },
        coeff: match c {
            Some(c) => &t.coeff * c,
            None => t.coeff.clone(),
        },
    };
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bj = b.iter().map(scaled).peekable();
    while i < a.len() {
        let Some(tb) = bj.peek() else { break };
        match term_order(a[i].pos, &a[i].mono, tb.pos, &tb.mono) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(bj.next().unwrap());
            }
            Ordering::Equal => {
                let tb = bj.next().unwrap();
                let s = &a[i].coeff + &tb.coeff;
                if !s.is_zero() {
                    out.push(Term {
                        pos: tb.pos,
                        mono: tb.mono,
                        coeff: s,
                    });
                }
                i += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(bj.filter(|t| !t.coeff.is_zero()));
    out
}

fn find_reducer<'a>(t: &Term, basis: &'a [Vector]) -> Option<&'a Vector> {
    basis.iter().find(|g| {
        let l = g.leading().expect("basis elements are nonzero");
        l.pos == t.pos && l.mono.divides(&t.mono)
    })
}

/// Full normal form of `f` modulo a list of monic vectors.
pub fn reduce(f: &Vector, basis: &[Vector]) -> Vector {
    let mut p = f.terms.clone();
    let mut rem: Vec<Term> = Vec::new();
    let mut idx = 0;
    while idx < p.len() {
        match find_reducer(&p[idx], basis) {
            Some(g) => {
                let lt = g.leading().unwrap();
                let q = lt.mono.quotient_of(&p[idx].mono);
                let c = -&p[idx].coeff.div(&lt.coeff);
                p = merge_scaled(&p[idx..], &g.terms, Some(&q), Some(&c));
                idx = 0;
            }
            None => {
                rem.push(p[idx].clone());
                idx += 1;
                if idx == p.len() {
                    break;
                }
                // keep `p` suffix small: drain the processed prefix
                if idx > 32 {
                    p.drain(..idx);
                    idx = 0;
                }
            }
        }
    }
    Vector { terms: rem }
}

/// Reduces only while the leading term sits at a position `< limit`,
/// returning `None` as soon as such a leading term is irreducible.
/// Used to decide membership in the projection onto the first `limit`
/// coordinates.
pub fn top_reduce_below(f: &Vector, basis: &[Vector], limit: usize) -> Option<Vector> {
    let mut p = f.terms.clone();
    loop {
        let Some(t) = p.first() else {
            return Some(Vector::zero());
        };
        if t.pos >= limit {
            return Some(Vector { terms: p });
        }
        let g = find_reducer(t, basis)?;
        let lt = g.leading().unwrap();
        let q = lt.mono.quotient_of(&t.mono);
        let c = -&t.coeff.div(&lt.coeff);
        p = merge_scaled(&p, &g.terms, Some(&q), Some(&c));
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GroebnerOptions {
    /// Maximum number of S-pairs reduced before giving up.
    pub pair_budget: usize,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        GroebnerOptions {
            pair_budget: DEFAULT_PAIR_BUDGET,
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis of the submodule generated by `gens`, sorted by
/// descending leading term.
pub fn groebner_basis(gens: &[Vector], opts: GroebnerOptions) -> Result<Vec<Vector>> {
    let mut basis: Vec<Vector> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let ideal_case = gens.iter().all(|g| g.max_pos().unwrap_or(0) == 0);

    let mut inputs: Vec<Vector> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    inputs.sort_by(|a, b| {
        let (la, lb) = (a.leading().unwrap(), b.leading().unwrap());
        term_order(la.pos, &la.mono, lb.pos, &lb.mono)
    });
    inputs.dedup();

    let add = |v: Vector,
               basis: &mut Vec<Vector>,
               pairs: &mut Vec<Pair>,
               pending: &mut HashSet<(usize, usize)>| {
        let k = basis.len();
        let lk = v.leading().unwrap().clone();
        for (i, g) in basis.iter().enumerate() {
            let li = g.leading().unwrap();
            if li.pos == lk.pos {
                pairs.push(Pair {
                    i,
                    j: k,
                    lcm: li.mono.lcm(&lk.mono),
                });
                pending.insert((i, k));
            }
        }
        basis.push(v);
    };

    for v in inputs {
        let r = reduce(&v, &basis);
        if !r.is_zero() {
            add(r.monic(), &mut basis, &mut pairs, &mut pending);
        }
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.lcm
                    .degree()
                    .cmp(&b.lcm.degree())
                    .then_with(|| a.lcm.cmp(&b.lcm))
                    .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)))
            })
            .map(|(k, _)| k)
            .unwrap();
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));

        let li = basis[pair.i].leading().unwrap().clone();
        let lj = basis[pair.j].leading().unwrap().clone();
        if ideal_case && li.mono.is_coprime(&lj.mono) {
            continue;
        }
        let chain = basis.iter().enumerate().any(|(k, g)| {
            if k == pair.i || k == pair.j {
                return false;
            }
            let lk = g.leading().unwrap();
            lk.pos == li.pos
                && lk.mono.divides(&pair.lcm)
                && !pending.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }

        processed += 1;
        if processed > opts.pair_budget {
            return Err(Error::Budget(format!(
                "more than {} S-pairs in a Gröbner basis computation",
                opts.pair_budget
            )));
        }
        let qi = li.mono.quotient_of(&pair.lcm);
        let qj = lj.mono.quotient_of(&pair.lcm);
        let minus_one = -li.coeff.one_like();
        let s = Vector::zero()
            .add_multiple(&basis[pair.i], &qi, &li.coeff.one_like())
            .add_multiple(&basis[pair.j], &qj, &minus_one);
        let r = reduce(&s, &basis);
        if !r.is_zero() {
            add(r.monic(), &mut basis, &mut pairs, &mut pending);
        }
    }

    Ok(interreduce(basis))
}

/// Turns a Gröbner basis into the reduced one.
fn interreduce(basis: Vec<Vector>) -> Vec<Vector> {
    let mut keep: Vec<Vector> = Vec::new();
    let mut sorted = basis;
    sorted.sort_by(|a, b| {
        let (la, lb) = (a.leading().unwrap(), b.leading().unwrap());
        term_order(la.pos, &la.mono, lb.pos, &lb.mono)
    });
    // ascending leads: an element is redundant iff an earlier kept lead divides it
    for g in sorted {
        let lg = g.leading().unwrap();
        let redundant = keep.iter().any(|k| {
            let lk = k.leading().unwrap();
            lk.pos == lg.pos && lk.mono.divides(&lg.mono)
        });
        if !redundant {
            keep.push(g);
        }
    }
    let mut out: Vec<Vector> = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Vector> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let lead = Vector {
            terms: vec![keep[i].terms[0].clone()],
        };
        let tail = Vector {
            terms: keep[i].terms[1..].to_vec(),
        };
        out.push(lead.add(&reduce(&tail, &others)).monic());
    }
    out.sort_by(|a, b| {
        let (la, lb) = (a.leading().unwrap(), b.leading().unwrap());
        term_order(lb.pos, &lb.mono, la.pos, &la.mono)
    });
    out
}
