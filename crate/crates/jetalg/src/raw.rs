//! Raw polynomials in uncanonicalized words, rewritten to normal form by
//! local swaps.
//!
//! A swap at an out-of-order letter pair uses
//! `X_{u·12·v} − X_{u·21·v} = D_u(wt(X_v)·R·X_v)`, where `D_u` is expanded by
//! the Leibniz rule on raw words. Different swap orders must reach the same
//! normal form as the derivation-based canonicalization; this is what the
//! confluence checks compare.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::jet::{qi, JetPoly};
use crate::ralg::RAlg;
use crate::ring::free_word;
use crate::word::Word;

/// Which family a raw factor belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// A derivative of the curvature; canonical words ascend.
    R,
    /// A derivative of the base; canonical words descend.
    S,
}

impl Kind {
    fn weight(self, w: Word) -> i64 {
        match self {
            Kind::R => 2 + w.len() as i64,
            Kind::S => 1 + w.len() as i64,
        }
    }

    fn in_order(self, w: Word) -> bool {
        match self {
            Kind::R => w.is_ascending(),
            Kind::S => w.is_descending(),
        }
    }

    /// The letter pair that is out of order for this family.
    fn bad_pair(self) -> (u8, u8) {
        match self {
            Kind::R => (2, 1),
            Kind::S => (1, 2),
        }
    }
}

type RawMono = BTreeMap<(Kind, Word), i32>;

/// A rational combination of products of raw factors `R_w^k`, `s_w^k`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawPoly {
    terms: BTreeMap<RawMono, BigRational>,
}

/// Order in which out-of-order letter pairs are swapped.
#[derive(Clone, Copy, Debug)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

impl RawPoly {
    pub fn zero() -> RawPoly {
        RawPoly::default()
    }

    pub fn one() -> RawPoly {
        RawPoly::term(RawMono::new(), BigRational::one())
    }

    pub fn factor(kind: Kind, w: Word) -> RawPoly {
        let mut m = RawMono::new();
        m.insert((kind, w), 1);
        RawPoly::term(m, BigRational::one())
    }

    fn term(m: RawMono, q: BigRational) -> RawPoly {
        let mut out = RawPoly::zero();
        out.add(m, q);
        out
    }

    fn add(&mut self, m: RawMono, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn plus(&self, other: &RawPoly) -> RawPoly {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add(m.clone(), q.clone());
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> RawPoly {
        let mut out = RawPoly::zero();
        for (m, c) in &self.terms {
            out.add(m.clone(), c * q);
        }
        out
    }

    pub fn times(&self, other: &RawPoly) -> RawPoly {
        let mut out = RawPoly::zero();
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                let mut m = a.clone();
                for (k, e) in b {
                    *m.entry(*k).or_insert(0) += e;
                }
                m.retain(|_, e| *e != 0);
                out.add(m, p * q);
            }
        }
        out
    }

    /// Raw derivative: `D_i X_w = X_{iw}`, Leibniz on products.
    pub fn derive(&self, i: u8) -> RawPoly {
        let mut out = RawPoly::zero();
        for (m, q) in &self.terms {
            for (&(kind, w), &e) in m {
                let mut rest = m.clone();
                let slot = rest.get_mut(&(kind, w)).expect("present");
                *slot -= 1;
                if *slot == 0 {
                    rest.remove(&(kind, w));
                }
                *rest.entry((kind, w.prepend(i))).or_insert(0) += 1;
                out.add(rest, q * qi(e as i64));
            }
        }
        out
    }

    pub fn derive_word(&self, u: Word) -> RawPoly {
        let mut out = self.clone();
        for i in u.letters().rev() {
            out = out.derive(i);
        }
        out
    }

    /// Canonical form obtained by evaluating every factor through derivations.
    pub fn to_jet_by_derivation(&self) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m, q) in &self.terms {
            let mut acc = JetPoly::from_ralg(RAlg::constant(q.clone()));
            for (&(kind, w), &e) in m {
                let base = match kind {
                    Kind::R => JetPoly::from_ralg(RAlg::word(w)),
                    Kind::S => free_word(w),
                };
                let p = if e >= 0 {
                    base.pow(e as u32)
                } else {
                    let inv = base
                        .as_s_poly()
                        .and_then(|c| c.first().and_then(RAlg::inverse))
                        .expect("only R may carry a negative exponent");
                    JetPoly::from_ralg(inv).pow(e.unsigned_abs())
                };
                acc = &acc * &p;
            }
            out += &acc;
        }
        out
    }

    /// Canonical form obtained by local swaps in the given order.
    pub fn to_jet_by_swaps(&self, strategy: Strategy) -> JetPoly {
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(<rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed)),
            _ => None,
        };
        let mut cur = self.clone();
        loop {
            let candidates: Vec<(RawMono, (Kind, Word))> = cur
                .terms
                .keys()
                .flat_map(|m| {
                    m.keys().filter(|(k, w)| !k.in_order(*w)).map(move |f| (m.clone(), *f)).collect::<Vec<_>>()
                })
                .collect();
            if candidates.is_empty() {
                return cur.to_jet_by_derivation();
            }
            let pick = match (&mut rng, strategy) {
                (Some(r), _) => r.gen_range(0..candidates.len()),
                (None, Strategy::Rightmost) => candidates.len() - 1,
                _ => 0,
            };
            let (mono, (kind, w)) = candidates[pick].clone();
            let positions: Vec<usize> =
                (0..w.len() - 1).filter(|&k| (w.letter(k), w.letter(k + 1)) == kind.bad_pair()).collect();
            let pos = match (&mut rng, strategy) {
                (Some(r), _) => positions[r.gen_range(0..positions.len())],
                (None, Strategy::Rightmost) => *positions.last().expect("out of order"),
                _ => positions[0],
            };
            let q = cur.terms.remove(&mono).expect("picked term");
            let replacement = swap(kind, w, pos);
            let mut rest = mono.clone();
            let e = rest.remove(&(kind, w)).expect("factor present");
            let mut factor_pow = RawPoly::one();
            for _ in 0..e {
                factor_pow = factor_pow.times(&replacement);
            }
            let rest_poly = RawPoly::term(rest, q);
            cur = cur.plus(&rest_poly.times(&factor_pow));
        }
    }
}

/// Rewrites `X_w` at the out-of-order pair starting at `pos`.
fn swap(kind: Kind, w: Word, pos: usize) -> RawPoly {
    let letters: Vec<u8> = w.letters().collect();
    let u = Word::from_letters(&letters[..pos]).expect("prefix");
    let v = Word::from_letters(&letters[pos + 2..]).expect("suffix");
    let mut swapped = letters.clone();
    swapped.swap(pos, pos + 1);
    let swapped = RawPoly::factor(kind, Word::from_letters(&swapped).expect("same length"));
    let r = RawPoly::factor(Kind::R, Word::EMPTY);
    let xv = RawPoly::factor(kind, v);
    let correction = r.times(&xv).scale(&qi(kind.weight(v))).derive_word(u);
    match kind {
        // X_{u21v} = X_{u12v} − D_u(wt·R·X_v)
        Kind::R => swapped.plus(&correction.scale(&-BigRational::one())),
        // X_{u12v} = X_{u21v} + D_u(wt·R·X_v)
        Kind::S => swapped.plus(&correction),
    }
}

/// A random raw polynomial with words up to `max_len` letters.
pub fn random_raw(rng: &mut impl Rng, terms: usize, max_len: usize) -> RawPoly {
    let mut out = RawPoly::zero();
    for _ in 0..terms {
        let mut t = RawPoly::term(RawMono::new(), qi(rng.gen_range(-5..=5)));
        for _ in 0..rng.gen_range(1..=3) {
            let kind = if rng.gen_bool(0.5) { Kind::R } else { Kind::S };
            let len = rng.gen_range(0..=max_len);
            let letters: Vec<u8> = (0..len).map(|_| rng.gen_range(1..=2)).collect();
            t = t.times(&RawPoly::factor(kind, Word::from_letters(&letters).expect("short")));
        }
        out = out.plus(&t);
    }
    out
}
