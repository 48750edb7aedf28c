//! The coefficient algebra: Laurent polynomials in the curvature `R` times
//! ordinary polynomials in its covariant derivatives `R_w`.
//!
//! Derivative words of `R` are kept in ascending form `1^a 2^b`. Applying
//! `D_1` prepends a letter and stays canonical; applying `D_2` to a word that
//! starts with `1` moves the `2` inward with the commutation rule
//! `D_2 D_1 X = D_1 D_2 X − wt(X)·R·X`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use symexpr::{fmt_rational, NumValue};

use crate::error::JetError;
use crate::word::Word;

/// Longest derivative word of `R` that the algebra can represent.
pub const MAX_R_ORDER: usize = 8;
const N_RWORDS: usize = (MAX_R_ORDER - 1) * (MAX_R_ORDER + 2) / 2 + MAX_R_ORDER + 1;

/// A canonical derivative word `1^a 2^b` of the curvature, with `a + b ≥ 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RWord {
    ones: u8,
    twos: u8,
}

impl RWord {
    pub fn new(ones: usize, twos: usize) -> RWord {
        let n = ones + twos;
        assert!(n >= 1, "the empty word denotes R itself");
        assert!(n <= MAX_R_ORDER, "derivative word of R of order {n} exceeds {MAX_R_ORDER}");
        RWord { ones: ones as u8, twos: twos as u8 }
    }

    pub fn ones(self) -> usize {
        self.ones as usize
    }

    pub fn twos(self) -> usize {
        self.twos as usize
    }

    pub fn order(self) -> usize {
        self.ones() + self.twos()
    }

    pub fn weight(self) -> i32 {
        2 + self.order() as i32
    }

    pub fn word(self) -> Word {
        Word::ascending(self.ones(), self.twos())
    }

    fn index(self) -> usize {
        let n = self.order();
        (n - 1) * (n + 2) / 2 + self.twos()
    }

    fn from_index(idx: usize) -> RWord {
        let mut n = 1;
        while (n) * (n + 3) / 2 <= idx {
            n += 1;
        }
        let twos = idx - (n - 1) * (n + 2) / 2;
        RWord::new(n - twos, twos)
    }

    /// Every canonical word of order `1..=max_order`, shortest first.
    pub fn all(max_order: usize) -> Vec<RWord> {
        (1..=max_order).flat_map(|n| (0..=n).rev().map(move |ones| RWord::new(ones, n - ones))).collect()
    }
}

impl fmt::Display for RWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.word())
    }
}

/// A monomial `R^r · ∏ R_w^{e_w}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RMono {
    r: i32,
    e: [u8; N_RWORDS],
}

impl RMono {
    pub const ONE: RMono = RMono { r: 0, e: [0; N_RWORDS] };

    pub fn r_pow(k: i32) -> RMono {
        RMono { r: k, ..RMono::ONE }
    }

    pub fn rword(w: RWord) -> RMono {
        let mut m = RMono::ONE;
        m.e[w.index()] = 1;
        m
    }

    pub fn r_exponent(&self) -> i32 {
        self.r
    }

    /// Words with nonzero exponent, with their exponents.
    pub fn words(&self) -> impl Iterator<Item = (RWord, u32)> + '_ {
        self.e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (RWord::from_index(i), k as u32))
    }

    pub fn exponent(&self, w: RWord) -> u32 {
        self.e[w.index()] as u32
    }

    pub fn has_words(&self) -> bool {
        self.e.iter().any(|&k| k > 0)
    }

    pub fn weight(&self) -> i32 {
        2 * self.r + self.words().map(|(w, k)| w.weight() * k as i32).sum::<i32>()
    }

    pub fn max_order(&self) -> usize {
        self.words().map(|(w, _)| w.order()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &RMono) -> RMono {
        let mut out = *self;
        out.r += other.r;
        for (a, b) in out.e.iter_mut().zip(other.e.iter()) {
            *a = a.checked_add(*b).expect("exponent of a curvature word overflows");
        }
        out
    }

    fn without_one(&self, w: RWord) -> RMono {
        let mut out = *self;
        out.e[w.index()] -= 1;
        out
    }
}

impl fmt::Display for RMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.r {
            0 => {}
            1 => parts.push("R".to_string()),
            k => parts.push(format!("R^{k}")),
        }
        for (w, k) in self.words() {
            if k == 1 {
                parts.push(w.to_string());
            } else {
                parts.push(format!("{w}^{k}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for RMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Element of the coefficient algebra: a finite rational combination of [`RMono`]s.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RAlg {
    terms: BTreeMap<RMono, BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RAlg {
    pub fn zero() -> RAlg {
        RAlg::default()
    }

    pub fn one() -> RAlg {
        RAlg::constant(BigRational::one())
    }

    pub fn constant(q: BigRational) -> RAlg {
        RAlg::term(RMono::ONE, q)
    }

    pub fn int(n: i64) -> RAlg {
        RAlg::constant(rat(n))
    }

    pub fn term(m: RMono, q: BigRational) -> RAlg {
        let mut out = RAlg::zero();
        out.add_term(m, q);
        out
    }

    /// `R^k`.
    pub fn r_pow(k: i32) -> RAlg {
        RAlg::term(RMono::r_pow(k), BigRational::one())
    }

    /// The curvature `R`.
    pub fn r() -> RAlg {
        RAlg::r_pow(1)
    }

    /// The generator `R_w` for a canonical word.
    pub fn rword(w: RWord) -> RAlg {
        RAlg::term(RMono::rword(w), BigRational::one())
    }

    /// `R_w` for an arbitrary written word, brought to canonical form.
    pub fn word(w: Word) -> RAlg {
        let mut out = RAlg::r();
        for i in w.letters().rev() {
            out = out.derive(i);
        }
        out
    }

    pub fn add_term(&mut self, m: RMono, q: BigRational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(c) => {
                *c += q;
                if c.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, q);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RMono, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &RMono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The rational value of a constant element.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, q) = self.terms.iter().next()?;
                (*m == RMono::ONE).then(|| q.clone())
            }
            _ => None,
        }
    }

    /// The single term of a one-term element.
    pub fn as_monomial(&self) -> Option<(&RMono, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Inverse of an element of the form `q·R^k`; no other element is invertible.
    pub fn inverse(&self) -> Option<RAlg> {
        let (m, q) = self.as_monomial()?;
        if m.has_words() {
            return None;
        }
        Some(RAlg::term(RMono::r_pow(-m.r), q.recip()))
    }

    pub fn scale(&self, q: &BigRational) -> RAlg {
        if q.is_zero() {
            return RAlg::zero();
        }
        RAlg { terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect() }
    }

    pub fn mul_mono(&self, m: &RMono, q: &BigRational) -> RAlg {
        if q.is_zero() {
            return RAlg::zero();
        }
        RAlg { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * q)).collect() }
    }

    pub fn pow(&self, k: u32) -> RAlg {
        let mut out = RAlg::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Set of weights occurring in the element.
    pub fn weights(&self) -> BTreeSet<i32> {
        self.terms.keys().map(RMono::weight).collect()
    }

    /// Longest derivative word that occurs.
    pub fn max_order(&self) -> usize {
        self.terms.keys().map(RMono::max_order).max().unwrap_or(0)
    }

    /// Covariant derivative `D_i`, returned in canonical form.
    pub fn derive(&self, i: u8) -> RAlg {
        let mut out = RAlg::zero();
        for (m, q) in &self.terms {
            if m.r != 0 {
                let mut n = *m;
                n.r -= 1;
                n.e[RWord::new(if i == 1 { 1 } else { 0 }, if i == 2 { 1 } else { 0 }).index()] += 1;
                out.add_term(n, q * rat(m.r as i64));
            }
            for (w, k) in m.words() {
                let base = m.without_one(w);
                let dw = derive_rword(w, i);
                let factor = q * rat(k as i64);
                for (n, c) in &dw.terms {
                    out.add_term(n.mul(&base), c * &factor);
                }
            }
        }
        out
    }

    /// Image under the symmetry exchanging the two frame directions: every
    /// `R_w` maps to `−R_{σw}` with `σ` swapping the letters.
    pub fn mirror(&self) -> RAlg {
        let mut images: HashMap<RWord, RAlg> = HashMap::new();
        let mut out = RAlg::zero();
        for (m, q) in &self.terms {
            let sign = if m.r.rem_euclid(2) == 1 { -BigRational::one() } else { BigRational::one() };
            let mut acc = RAlg::term(RMono::r_pow(m.r), q * sign);
            for (w, k) in m.words() {
                let img = images.entry(w).or_insert_with(|| -RAlg::word(w.word().mirror())).clone();
                acc = &acc * &img.pow(k);
            }
            out += &acc;
        }
        out
    }

    /// Evaluates with numeric values for `R` and the canonical words.
    pub fn eval(&self, values: &RValues) -> Result<NumValue, JetError> {
        let mut total = NumValue::zero();
        let mut r_powers: BTreeMap<i32, NumValue> = BTreeMap::new();
        for (m, q) in &self.terms {
            let mut v = NumValue::Exact(q.clone());
            if m.r != 0 {
                if let std::collections::btree_map::Entry::Vacant(e) = r_powers.entry(m.r) {
                    let p = values.r.powi(m.r).ok_or(JetError::SingularCurvature)?;
                    e.insert(p);
                }
                v = &v * &r_powers[&m.r];
            }
            for (w, k) in m.words() {
                let x = values.get(w).ok_or_else(|| JetError::Unbound(w.to_string()))?;
                v = &v * &x.powi(k as i32).expect("nonnegative power");
            }
            total = &total + &v;
        }
        Ok(total)
    }
}

/// `D_i R_w` for a canonical word.
fn derive_rword(w: RWord, i: u8) -> RAlg {
    if i == 1 {
        return RAlg::rword(RWord::new(w.ones() + 1, w.twos()));
    }
    if w.ones() == 0 {
        return RAlg::rword(RWord::new(0, w.twos() + 1));
    }
    d2_table()[w.index()].clone().expect("table entry for a word starting with 1")
}

fn d2_table() -> &'static Vec<Option<RAlg>> {
    static TABLE: OnceLock<Vec<Option<RAlg>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<Option<RAlg>> = vec![None; N_RWORDS];
        for n in 1..MAX_R_ORDER {
            for twos in 0..n {
                let ones = n - twos;
                let w = RWord::new(ones, twos);
                // w = 1·u, so D_2 R_w = D_1(D_2 R_u) − wt(R_u)·R·R_u.
                let (du, ru, weight) = if n == 1 {
                    (RAlg::rword(RWord::new(0, 1)), RAlg::r(), 2)
                } else {
                    let u = RWord::new(ones - 1, twos);
                    let du = if u.ones() == 0 {
                        RAlg::rword(RWord::new(0, u.twos() + 1))
                    } else {
                        table[u.index()].clone().expect("shorter entries are filled first")
                    };
                    (du, RAlg::rword(u), u.weight())
                };
                let entry = du.derive(1) - (&RAlg::r() * &ru).scale(&rat(weight as i64));
                table[w.index()] = Some(entry);
            }
        }
        table
    })
}

/// Numeric values for `R` and its canonical derivative words.
#[derive(Clone, Debug)]
pub struct RValues {
    r: NumValue,
    words: Vec<Option<NumValue>>,
}

impl RValues {
    pub fn new(r: NumValue) -> RValues {
        RValues { r, words: vec![None; N_RWORDS] }
    }

    pub fn r(&self) -> &NumValue {
        &self.r
    }

    pub fn set(&mut self, w: RWord, v: NumValue) {
        self.words[w.index()] = Some(v);
    }

    pub fn get(&self, w: RWord) -> Option<&NumValue> {
        self.words[w.index()].as_ref()
    }

    /// True when every bound value is exact.
    pub fn is_exact(&self) -> bool {
        self.r.is_exact() && self.words.iter().flatten().all(NumValue::is_exact)
    }
}

impl fmt::Display for RAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, q)) in self.terms.iter().enumerate() {
            let negative = q.is_negative();
            let a = q.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *m == RMono::ONE {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RAlg({self})")
    }
}

impl AddAssign<&RAlg> for RAlg {
    fn add_assign(&mut self, rhs: &RAlg) {
        for (m, q) in &rhs.terms {
            self.add_term(*m, q.clone());
        }
    }
}

impl SubAssign<&RAlg> for RAlg {
    fn sub_assign(&mut self, rhs: &RAlg) {
        for (m, q) in &rhs.terms {
            self.add_term(*m, -q.clone());
        }
    }
}

impl Add for &RAlg {
    type Output = RAlg;
    fn add(self, rhs: &RAlg) -> RAlg {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &RAlg {
    type Output = RAlg;
    fn sub(self, rhs: &RAlg) -> RAlg {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for RAlg {
    type Output = RAlg;
    fn add(mut self, rhs: RAlg) -> RAlg {
        self += &rhs;
        self
    }
}

impl Sub for RAlg {
    type Output = RAlg;
    fn sub(mut self, rhs: RAlg) -> RAlg {
        self -= &rhs;
        self
    }
}

impl Mul for &RAlg {
    type Output = RAlg;
    fn mul(self, rhs: &RAlg) -> RAlg {
        let mut out = RAlg::zero();
        for (a, p) in &self.terms {
            for (b, q) in &rhs.terms {
                out.add_term(a.mul(b), p * q);
            }
        }
        out
    }
}

impl Mul for RAlg {
    type Output = RAlg;
    fn mul(self, rhs: RAlg) -> RAlg {
        &self * &rhs
    }
}

impl Neg for &RAlg {
    type Output = RAlg;
    fn neg(self) -> RAlg {
        RAlg { terms: self.terms.iter().map(|(m, q)| (*m, -q.clone())).collect() }
    }
}

impl Neg for RAlg {
    type Output = RAlg;
    fn neg(self) -> RAlg {
        -&self
    }
}
