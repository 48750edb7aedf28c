//! Jet variables of the base invariant and polynomials over [`RAlg`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use symexpr::{fmt_rational, NumValue};

use crate::error::JetError;
use crate::ralg::{RAlg, RMono, RValues};
use crate::word::Word;

/// Longest derivative word of `s` that a [`JetMono`] can hold.
pub const MAX_S_ORDER: usize = 6;
const N_JETS: usize = (MAX_S_ORDER + 1) * (MAX_S_ORDER + 2) / 2;

/// A jet variable `s_w` with `w` in descending form `2^b 1^a`; `s` itself is
/// the empty word. The weight of `s_w` is `1 + |w|`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    twos: u8,
    ones: u8,
}

impl JetVar {
    pub const S: JetVar = JetVar { twos: 0, ones: 0 };
    pub const S1: JetVar = JetVar { twos: 0, ones: 1 };
    pub const S2: JetVar = JetVar { twos: 1, ones: 0 };
    pub const S21: JetVar = JetVar { twos: 1, ones: 1 };
    pub const S11: JetVar = JetVar { twos: 0, ones: 2 };
    pub const S22: JetVar = JetVar { twos: 2, ones: 0 };

    pub fn new(twos: usize, ones: usize) -> JetVar {
        assert!(twos + ones <= MAX_S_ORDER, "jet order {} exceeds {MAX_S_ORDER}", twos + ones);
        JetVar { twos: twos as u8, ones: ones as u8 }
    }

    pub fn twos(self) -> usize {
        self.twos as usize
    }

    pub fn ones(self) -> usize {
        self.ones as usize
    }

    pub fn order(self) -> usize {
        self.twos() + self.ones()
    }

    pub fn weight(self) -> i32 {
        1 + self.order() as i32
    }

    pub fn word(self) -> Word {
        Word::descending(self.twos(), self.ones())
    }

    /// Splits `s_{i·u}` into the outer letter `i` and the inner variable `s_u`.
    pub fn split_first(self) -> Option<(u8, JetVar)> {
        if self.twos > 0 {
            Some((2, JetVar::new(self.twos() - 1, self.ones())))
        } else if self.ones > 0 {
            Some((1, JetVar::new(0, self.ones() - 1)))
        } else {
            None
        }
    }

    fn index(self) -> usize {
        let n = self.order();
        n * (n + 1) / 2 + self.ones()
    }

    fn from_index(idx: usize) -> JetVar {
        let mut n = 0;
        while (n + 1) * (n + 2) / 2 <= idx {
            n += 1;
        }
        let ones = idx - n * (n + 1) / 2;
        JetVar::new(n - ones, ones)
    }

    /// Every variable of order `≤ max_order`, lowest order first.
    pub fn all(max_order: usize) -> Vec<JetVar> {
        (0..=max_order).flat_map(|n| (0..=n).map(move |ones| JetVar::new(n - ones, ones))).collect()
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.word())
    }
}

/// A monomial in jet variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetMono {
    e: [u8; N_JETS],
}

impl JetMono {
    pub const ONE: JetMono = JetMono { e: [0; N_JETS] };

    pub fn var(v: JetVar) -> JetMono {
        JetMono::ONE.times(v, 1)
    }

    pub fn times(mut self, v: JetVar, k: u32) -> JetMono {
        let slot = &mut self.e[v.index()];
        *slot = u8::try_from(*slot as u32 + k).expect("jet exponent overflows");
        self
    }

    pub fn exponent(&self, v: JetVar) -> u32 {
        self.e[v.index()] as u32
    }

    pub fn vars(&self) -> impl Iterator<Item = (JetVar, u32)> + '_ {
        self.e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (JetVar::from_index(i), k as u32))
    }

    pub fn degree(&self) -> u32 {
        self.e.iter().map(|&k| k as u32).sum()
    }

    pub fn weight(&self) -> i32 {
        self.vars().map(|(v, k)| v.weight() * k as i32).sum()
    }

    pub fn mul(&self, other: &JetMono) -> JetMono {
        let mut out = *self;
        for (a, b) in out.e.iter_mut().zip(other.e.iter()) {
            *a = a.checked_add(*b).expect("jet exponent overflows");
        }
        out
    }

    /// Removes one factor `v`; the caller guarantees it is present.
    pub fn without_one(&self, v: JetVar) -> JetMono {
        let mut out = *self;
        out.e[v.index()] -= 1;
        out
    }

    /// The monomial with the exponent of `v` set to zero, and that exponent.
    pub fn split_var(&self, v: JetVar) -> (JetMono, u32) {
        let mut out = *self;
        let k = out.e[v.index()] as u32;
        out.e[v.index()] = 0;
        (out, k)
    }

    pub fn max_order(&self) -> usize {
        self.vars().map(|(v, _)| v.order()).max().unwrap_or(0)
    }
}

impl fmt::Display for JetMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.vars().map(|(v, k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") }).collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for JetMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A polynomial in jet variables with [`RAlg`] coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct JetPoly {
    terms: BTreeMap<JetMono, RAlg>,
}

/// Result of a weight count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Homogeneous(i32),
    /// The zero polynomial has every weight.
    Zero,
    /// Distinct weights together with one offending term for each.
    Inhomogeneous(Vec<(i32, String)>),
}

impl JetPoly {
    pub fn zero() -> JetPoly {
        JetPoly::default()
    }

    pub fn one() -> JetPoly {
        JetPoly::from_ralg(RAlg::one())
    }

    pub fn int(n: i64) -> JetPoly {
        JetPoly::from_ralg(RAlg::int(n))
    }

    pub fn from_ralg(c: RAlg) -> JetPoly {
        let mut out = JetPoly::zero();
        out.add_term(JetMono::ONE, c);
        out
    }

    pub fn var(v: JetVar) -> JetPoly {
        JetPoly::term(JetMono::var(v), RAlg::one())
    }

    pub fn term(m: JetMono, c: RAlg) -> JetPoly {
        let mut out = JetPoly::zero();
        out.add_term(m, c);
        out
    }

    pub fn s() -> JetPoly {
        JetPoly::var(JetVar::S)
    }

    pub fn s1() -> JetPoly {
        JetPoly::var(JetVar::S1)
    }

    pub fn s2() -> JetPoly {
        JetPoly::var(JetVar::S2)
    }

    pub fn s21() -> JetPoly {
        JetPoly::var(JetVar::S21)
    }

    pub fn add_term(&mut self, m: JetMono, c: RAlg) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMono, &RAlg)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total number of rational coefficients over all terms.
    pub fn size(&self) -> usize {
        self.terms.values().map(RAlg::len).sum()
    }

    pub fn coefficient(&self, m: &JetMono) -> RAlg {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &RAlg) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    pub fn scale_q(&self, q: &BigRational) -> JetPoly {
        JetPoly { terms: self.terms.iter().map(|(m, a)| (*m, a.scale(q))).filter(|(_, a)| !a.is_zero()).collect() }
    }

    pub fn mul_mono(&self, n: &JetMono) -> JetPoly {
        JetPoly { terms: self.terms.iter().map(|(m, a)| (m.mul(n), a.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> JetPoly {
        let mut out = JetPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Variables occurring with nonzero exponent.
    pub fn vars(&self) -> BTreeSet<JetVar> {
        self.terms.keys().flat_map(|m| m.vars().map(|(v, _)| v).collect::<Vec<_>>()).collect()
    }

    pub fn degree_in(&self, v: JetVar) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn max_order(&self) -> usize {
        self.terms.keys().map(JetMono::max_order).max().unwrap_or(0)
    }

    pub fn max_r_order(&self) -> usize {
        self.terms.values().map(RAlg::max_order).max().unwrap_or(0)
    }

    /// Replaces every occurrence of `v` by `p`.
    pub fn substitute(&self, v: JetVar, p: &JetPoly) -> JetPoly {
        let mut powers: Vec<JetPoly> = vec![JetPoly::one()];
        let mut out = JetPoly::zero();
        for (m, a) in &self.terms {
            let (rest, k) = m.split_var(v);
            while powers.len() <= k as usize {
                let next = powers.last().expect("nonempty") * p;
                powers.push(next);
            }
            out += &powers[k as usize].mul_mono(&rest).scale(a);
        }
        out
    }

    /// Replaces each variable by the image given by `f`; variables for which
    /// `f` returns `None` stay as they are.
    pub fn map_vars(&self, mut f: impl FnMut(JetVar) -> Option<JetPoly>) -> JetPoly {
        let mut cache: BTreeMap<(JetVar, u32), JetPoly> = BTreeMap::new();
        let mut images: BTreeMap<JetVar, Option<JetPoly>> = BTreeMap::new();
        let mut out = JetPoly::zero();
        for (m, a) in &self.terms {
            let mut acc = JetPoly::from_ralg(a.clone());
            for (v, k) in m.vars() {
                let img = images.entry(v).or_insert_with(|| f(v)).clone();
                match img {
                    None => acc = acc.mul_mono(&JetMono::ONE.times(v, k)),
                    Some(p) => {
                        let pk = cache.entry((v, k)).or_insert_with(|| p.pow(k)).clone();
                        acc = &acc * &pk;
                    }
                }
            }
            out += &acc;
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&RAlg) -> RAlg) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, f(a));
        }
        out
    }

    /// Decomposes by the exponents of `s₁` and `s₂`, with coefficients that
    /// are polynomials in the remaining variables.
    pub fn collect_s1_s2(&self) -> BTreeMap<(u32, u32), JetPoly> {
        let mut out: BTreeMap<(u32, u32), JetPoly> = BTreeMap::new();
        for (m, a) in &self.terms {
            let (rest, i) = m.split_var(JetVar::S1);
            let (rest, j) = rest.split_var(JetVar::S2);
            out.entry((i, j)).or_default().add_term(rest, a.clone());
        }
        out
    }

    /// Coefficients of the powers of `s`, when `s` is the only variable.
    pub fn as_s_poly(&self) -> Option<Vec<RAlg>> {
        let mut out: Vec<RAlg> = Vec::new();
        for (m, a) in &self.terms {
            let (rest, k) = m.split_var(JetVar::S);
            if rest != JetMono::ONE {
                return None;
            }
            if out.len() <= k as usize {
                out.resize(k as usize + 1, RAlg::zero());
            }
            out[k as usize] = a.clone();
        }
        Some(out)
    }

    pub fn from_s_poly(coeffs: &[RAlg]) -> JetPoly {
        let mut out = JetPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out.add_term(JetMono::ONE.times(JetVar::S, k as u32), c.clone());
        }
        out
    }

    /// Common weight of all terms, counting `s_w ↦ 1 + |w|` and `R_w ↦ 2 + |w|`.
    pub fn weight(&self) -> Weight {
        let mut seen: BTreeMap<i32, String> = BTreeMap::new();
        for (m, a) in &self.terms {
            for (rm, q) in a.terms() {
                let w = m.weight() + rm.weight();
                seen.entry(w).or_insert_with(|| format!("{}*{}*{}", fmt_rational(q), rm, m));
            }
        }
        match seen.len() {
            0 => Weight::Zero,
            1 => Weight::Homogeneous(*seen.keys().next().expect("one weight")),
            _ => Weight::Inhomogeneous(seen.into_iter().collect()),
        }
    }

    pub fn mirror_coefficients(&self) -> JetPoly {
        self.map_coefficients(RAlg::mirror)
    }

    /// Evaluates with numeric values for curvature words and jet variables.
    pub fn eval(&self, r: &RValues, jets: &JetValues) -> Result<NumValue, JetError> {
        let mut total = NumValue::zero();
        for (m, a) in &self.terms {
            let mut v = a.eval(r)?;
            for (var, k) in m.vars() {
                let x = jets.get(var).ok_or_else(|| JetError::Unbound(var.to_string()))?;
                v = &v * &x.powi(k as i32).expect("nonnegative power");
            }
            total = &total + &v;
        }
        Ok(total)
    }

    /// Evaluates the coefficients only, producing a polynomial over numbers.
    pub fn eval_coefficients(&self, r: &RValues) -> Result<BTreeMap<JetMono, NumValue>, JetError> {
        let mut out = BTreeMap::new();
        for (m, a) in &self.terms {
            let v = a.eval(r)?;
            if !v.is_zero() {
                out.insert(*m, v);
            }
        }
        Ok(out)
    }
}

/// Numeric values for jet variables.
#[derive(Clone, Debug, Default)]
pub struct JetValues {
    values: BTreeMap<JetVar, NumValue>,
}

impl JetValues {
    pub fn new() -> JetValues {
        JetValues::default()
    }

    pub fn set(&mut self, v: JetVar, x: NumValue) {
        self.values.insert(v, x);
    }

    pub fn get(&self, v: JetVar) -> Option<&NumValue> {
        self.values.get(&v)
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, a) in &self.terms {
            for (rm, q) in a.terms() {
                let negative = q.is_negative();
                let q = q.abs();
                if first {
                    if negative {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if negative { " - " } else { " + " })?;
                }
                first = false;
                let mut parts = Vec::new();
                if !q.is_one() || (*rm == RMono::ONE && *m == JetMono::ONE) {
                    parts.push(fmt_rational(&q));
                }
                if *rm != RMono::ONE {
                    parts.push(rm.to_string());
                }
                if *m != JetMono::ONE {
                    parts.push(m.to_string());
                }
                write!(f, "{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetPoly({self})")
    }
}

impl AddAssign<&JetPoly> for JetPoly {
    fn add_assign(&mut self, rhs: &JetPoly) {
        for (m, a) in &rhs.terms {
            self.add_term(*m, a.clone());
        }
    }
}

impl SubAssign<&JetPoly> for JetPoly {
    fn sub_assign(&mut self, rhs: &JetPoly) {
        for (m, a) in &rhs.terms {
            self.add_term(*m, -a);
        }
    }
}

impl Add for &JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for JetPoly {
    type Output = JetPoly;
    fn add(mut self, rhs: JetPoly) -> JetPoly {
        self += &rhs;
        self
    }
}

impl Sub for JetPoly {
    type Output = JetPoly;
    fn sub(mut self, rhs: JetPoly) -> JetPoly {
        self -= &rhs;
        self
    }
}

impl Mul for &JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: &JetPoly) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Mul for JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: JetPoly) -> JetPoly {
        &self * &rhs
    }
}

impl Neg for &JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        JetPoly { terms: self.terms.iter().map(|(m, a)| (*m, -a)).collect() }
    }
}

impl Neg for JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        -&self
    }
}

impl From<RAlg> for JetPoly {
    fn from(c: RAlg) -> JetPoly {
        JetPoly::from_ralg(c)
    }
}

/// Shorthand for an integer coefficient.
pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for a rational coefficient.
pub fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl JetPoly {
    /// Convenience: `q · self`.
    pub fn times_int(&self, n: i64) -> JetPoly {
        self.scale_q(&qi(n))
    }

    pub fn is_constant_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&JetMono::ONE).map(|a| a == &RAlg::one()).unwrap_or(false)
    }
}
