//! Derivations and normal forms in three reduction modes.
//!
//! * [`Mode::Free`]: only the commutation rule `s_{12} = s_{21} + R·s` and its
//!   consequences are applied; jet variables are descending words `2^b 1^a`.
//! * [`Mode::P2`]: additionally the second-order system
//!   `s_{22} = 2s_{21} − s s_2 + 2s s_1 + R s + R_2`,
//!   `s_{11} = 2s_{21} − 2s s_2 + s s_1 + R s + R_1`
//!   and its prolongations, leaving the variables `s, s_1, s_2, s_{21}`.
//! * [`Mode::PPhi`]: additionally `φ = 0` solved for `s_{21}`, leaving
//!   `s, s_1, s_2`.
//!
//! Third-order reductions are obtained by differentiating the second-order
//! system and solving the resulting linear system for
//! `s_{111}, s_{211}, s_{221}, s_{222}`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::JetError;
use crate::jet::{qi, JetMono, JetPoly, JetVar, MAX_S_ORDER};
use crate::ralg::{RAlg, RWord};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Free,
    P2,
    PPhi,
}

fn r() -> JetPoly {
    JetPoly::from_ralg(RAlg::r())
}

fn r_i(i: u8) -> JetPoly {
    JetPoly::from_ralg(RAlg::rword(if i == 1 { RWord::new(1, 0) } else { RWord::new(0, 1) }))
}

/// Right-hand side of the second-order equation for `s_{22}`.
pub fn rhs_s22() -> JetPoly {
    let (s, s1, s2) = (JetPoly::s(), JetPoly::s1(), JetPoly::s2());
    JetPoly::s21().times_int(2) - &s * &s2 + (&s * &s1).times_int(2) + &r() * &s + r_i(2)
}

/// Right-hand side of the second-order equation for `s_{11}`.
pub fn rhs_s11() -> JetPoly {
    let (s, s1, s2) = (JetPoly::s(), JetPoly::s1(), JetPoly::s2());
    JetPoly::s21().times_int(2) - (&s * &s2).times_int(2) + &s * &s1 + &r() * &s + r_i(1)
}

/// The residuals `P₂₁ = s_{22} − (…)` and `P₂₂ = s_{11} − (…)` as free polynomials.
pub fn p2_residuals() -> (JetPoly, JetPoly) {
    (JetPoly::var(JetVar::S22) - rhs_s22(), JetPoly::var(JetVar::S11) - rhs_s11())
}

/// Leibniz extension of a derivation given on coefficients and on variables.
fn derive_with(e: &JetPoly, i: u8, mut dvar: impl FnMut(JetVar) -> JetPoly) -> JetPoly {
    let mut out = JetPoly::zero();
    for (m, a) in e.terms() {
        out.add_term(*m, a.derive(i));
        for (v, k) in m.vars() {
            let rest = m.without_one(v);
            let coeff = a.scale(&qi(k as i64));
            out += &dvar(v).mul_mono(&rest).scale(&coeff);
        }
    }
    out
}

fn free_cache() -> &'static Mutex<HashMap<(JetVar, u8), JetPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(JetVar, u8), JetPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `D_i s_v` in free mode.
fn free_var_derivative(v: JetVar, i: u8) -> JetPoly {
    if let Some(p) = free_cache().lock().expect("cache lock").get(&(v, i)) {
        return p.clone();
    }
    assert!(v.order() < MAX_S_ORDER, "jet variable {v} cannot be differentiated further");
    let out = if i == 2 {
        JetPoly::var(JetVar::new(v.twos() + 1, v.ones()))
    } else if v.twos() == 0 {
        JetPoly::var(JetVar::new(0, v.ones() + 1))
    } else {
        // v = 2·u, and D_1 D_2 s_u = D_2 D_1 s_u + wt(s_u)·R·s_u.
        let u = JetVar::new(v.twos() - 1, v.ones());
        let inner = free_var_derivative(u, 1);
        free_derive(&inner, 2) + (&r() * &JetPoly::var(u)).times_int(u.weight() as i64)
    };
    free_cache().lock().expect("cache lock").insert((v, i), out.clone());
    out
}

/// Covariant derivative in free mode.
pub fn free_derive(e: &JetPoly, i: u8) -> JetPoly {
    derive_with(e, i, |v| free_var_derivative(v, i))
}

/// `s_w` for an arbitrary written word, in free canonical form.
pub fn free_word(w: Word) -> JetPoly {
    let mut out = JetPoly::s();
    for i in w.letters().rev() {
        out = free_derive(&out, i);
    }
    out
}

/// Substitutes `s_{21} := −(φ − c·s_{21}) / c`, where `c` is the coefficient of
/// `s_{21}` in `φ`. The coefficient must be of the form `q·R^k`.
pub fn eliminate_s21(e: &JetPoly, phi: &JetPoly) -> Result<JetPoly, JetError> {
    Ok(e.substitute(JetVar::S21, &solve_for_s21(phi)?))
}

fn solve_for_s21(phi: &JetPoly) -> Result<JetPoly, JetError> {
    if phi.degree_in(JetVar::S21) != 1 {
        return Err(JetError::Shape("φ must be linear in s21".into()));
    }
    let lead = phi.coefficient(&JetMono::var(JetVar::S21));
    if phi.terms().any(|(m, _)| m.exponent(JetVar::S21) == 1 && *m != JetMono::var(JetVar::S21)) {
        return Err(JetError::Shape("the s21 coefficient of φ must not involve jet variables".into()));
    }
    let inv = lead.inverse().ok_or_else(|| JetError::Shape(format!("s21 coefficient {lead} is not invertible")))?;
    let rest = phi - &JetPoly::term(JetMono::var(JetVar::S21), lead);
    Ok(-rest.scale(&inv))
}

/// Reduces `e` to degree at most one in each of `s₁`, `s₂` using `ψ¹ = 0`
/// for `s₂²` and `ψ² = 0` for `s₁²`.
///
/// The rewriting closes for inputs of total degree two in `(s₁, s₂)`; higher
/// degrees may cycle, which is reported once the pass bound
/// `2·deg(e)` is exceeded.
pub fn eliminate_squares(e: &JetPoly, psi1: &JetPoly, psi2: &JetPoly) -> Result<JetPoly, JetError> {
    let sq2 = square_rule(psi1, (0, 2), (2, 0))?;
    let sq1 = square_rule(psi2, (2, 0), (0, 2))?;
    let degree = e.terms().map(|(m, _)| m.exponent(JetVar::S1) + m.exponent(JetVar::S2)).max().unwrap_or(0);
    let bound = (2 * degree as usize).max(1);
    let mut cur = e.clone();
    for _ in 0..bound {
        let mut changed = false;
        let mut next = JetPoly::zero();
        for (m, a) in cur.terms() {
            let term = JetPoly::term(*m, a.clone());
            if m.exponent(JetVar::S1) >= 2 {
                let rest = m.without_one(JetVar::S1).without_one(JetVar::S1);
                next += &sq1.mul_mono(&rest).scale(a);
                changed = true;
            } else if m.exponent(JetVar::S2) >= 2 {
                let rest = m.without_one(JetVar::S2).without_one(JetVar::S2);
                next += &sq2.mul_mono(&rest).scale(a);
                changed = true;
            } else {
                next += &term;
            }
        }
        cur = next;
        if !changed {
            return Ok(cur);
        }
    }
    if cur.terms().all(|(m, _)| m.exponent(JetVar::S1) <= 1 && m.exponent(JetVar::S2) <= 1) {
        return Ok(cur);
    }
    Err(JetError::NonTermination { passes: bound })
}

/// From `ψ = c·s_k² + rest` returns `−rest / c`.
fn square_rule(psi: &JetPoly, lead: (u32, u32), forbidden: (u32, u32)) -> Result<JetPoly, JetError> {
    let parts = psi.collect_s1_s2();
    if parts.keys().any(|&(i, j)| i + j > 2 || (i, j) == forbidden) {
        return Err(JetError::Shape("ψ has monomials outside the expected quadratic shape".into()));
    }
    let c = parts.get(&lead).cloned().unwrap_or_default();
    let c = c
        .as_s_poly()
        .filter(|v| v.len() == 1)
        .map(|v| v[0].clone())
        .ok_or_else(|| JetError::Shape("leading square coefficient must be free of jet variables".into()))?;
    let inv = c.inverse().ok_or_else(|| JetError::Shape(format!("square coefficient {c} is not invertible")))?;
    let mono = JetMono::ONE.times(JetVar::S1, lead.0).times(JetVar::S2, lead.1);
    let rest = psi - &JetPoly::term(mono, c);
    Ok(-rest.scale(&inv))
}

/// Solves the prolonged second-order system for the four third-order variables.
fn solve_third_order() -> Vec<(JetVar, JetPoly)> {
    let (p21, p22) = p2_residuals();
    let second = |e: &JetPoly| e.substitute(JetVar::S22, &rhs_s22()).substitute(JetVar::S11, &rhs_s11());
    let unknowns = [JetVar::new(0, 3), JetVar::new(1, 2), JetVar::new(2, 1), JetVar::new(3, 0)];
    let mut matrix: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<JetPoly> = Vec::new();
    for p in [&p21, &p22] {
        for k in [1u8, 2] {
            let eq = second(&free_derive(p, k));
            let mut row = vec![BigRational::zero(); 4];
            let mut rest = JetPoly::zero();
            for (m, a) in eq.terms() {
                match unknowns.iter().position(|&u| m.exponent(u) > 0) {
                    Some(j) => {
                        assert!(*m == JetMono::var(unknowns[j]), "third-order variables enter linearly");
                        row[j] = a.as_constant().expect("rational coefficient of a third-order variable");
                    }
                    None => rest.add_term(*m, a.clone()),
                }
            }
            matrix.push(row);
            rhs.push(-rest);
        }
    }
    // Gauss-Jordan elimination with JetPoly right-hand sides.
    for col in 0..4 {
        let pivot = (col..4).find(|&r| !matrix[r][col].is_zero()).expect("third-order system is nonsingular");
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = matrix[col][col].recip();
        for c in 0..4 {
            matrix[col][c] = &matrix[col][c] * &inv;
        }
        rhs[col] = rhs[col].scale_q(&inv);
        for row in 0..4 {
            if row != col && !matrix[row][col].is_zero() {
                let factor = matrix[row][col].clone();
                for c in 0..4 {
                    let v = &matrix[col][c] * &factor;
                    matrix[row][c] -= v;
                }
                let sub = rhs[col].scale_q(&factor);
                rhs[row] -= &sub;
            }
        }
    }
    debug_assert!((0..4).all(|k| matrix[k][k].is_one()));
    unknowns.into_iter().zip(rhs).collect()
}

/// A reduction mode with memoized derivatives of its variables.
pub struct JetRing {
    mode: Mode,
    third: HashMap<JetVar, JetPoly>,
    s21: Option<JetPoly>,
    deriv: Mutex<HashMap<(JetVar, u8), JetPoly>>,
    reduced: Mutex<HashMap<JetVar, JetPoly>>,
}

impl JetRing {
    pub fn free() -> JetRing {
        JetRing::with(Mode::Free, HashMap::new(), None)
    }

    pub fn p2() -> JetRing {
        JetRing::with(Mode::P2, solve_third_order().into_iter().collect(), None)
    }

    /// The mode in which `φ = 0` is also imposed.
    pub fn p_phi(phi: &JetPoly) -> Result<JetRing, JetError> {
        let s21 = solve_for_s21(phi)?;
        Ok(JetRing::with(Mode::PPhi, solve_third_order().into_iter().collect(), Some(s21)))
    }

    fn with(mode: Mode, third: HashMap<JetVar, JetPoly>, s21: Option<JetPoly>) -> JetRing {
        JetRing { mode, third, s21, deriv: Mutex::new(HashMap::new()), reduced: Mutex::new(HashMap::new()) }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The reduction of a third-order variable, when the mode has one.
    pub fn third_order_rule(&self, v: JetVar) -> Option<&JetPoly> {
        self.third.get(&v)
    }

    /// The polynomial substituted for `s_{21}` in [`Mode::PPhi`].
    pub fn s21_rule(&self) -> Option<&JetPoly> {
        self.s21.as_ref()
    }

    fn is_ring_var(&self, v: JetVar) -> bool {
        match self.mode {
            Mode::Free => true,
            Mode::P2 => v.order() <= 1 || v == JetVar::S21,
            Mode::PPhi => v.order() <= 1,
        }
    }

    fn after_p2(&self, e: JetPoly) -> JetPoly {
        match &self.s21 {
            Some(rule) => e.substitute(JetVar::S21, rule),
            None => e,
        }
    }

    /// Normal form of a single free canonical variable.
    fn reduce_var(&self, v: JetVar) -> JetPoly {
        if self.is_ring_var(v) {
            return JetPoly::var(v);
        }
        if let Some(p) = self.reduced.lock().expect("memo lock").get(&v) {
            return p.clone();
        }
        let out = if v == JetVar::S21 {
            self.after_p2(JetPoly::s21())
        } else if v == JetVar::S22 {
            self.after_p2(rhs_s22())
        } else if v == JetVar::S11 {
            self.after_p2(rhs_s11())
        } else if let Some(rule) = self.third.get(&v) {
            self.after_p2(rule.clone())
        } else {
            let (i, u) = v.split_first().expect("order at least four");
            let inner = self.reduce_var(u);
            self.derive(&inner, i)
        };
        self.reduced.lock().expect("memo lock").insert(v, out.clone());
        out
    }

    /// Brings a polynomial in free canonical variables to the normal form of
    /// this mode.
    pub fn normalize(&self, e: &JetPoly) -> JetPoly {
        if e.vars().iter().all(|&v| self.is_ring_var(v)) {
            return e.clone();
        }
        e.map_vars(|v| (!self.is_ring_var(v)).then(|| self.reduce_var(v)))
    }

    fn var_derivative(&self, v: JetVar, i: u8) -> JetPoly {
        if self.mode == Mode::Free {
            return free_var_derivative(v, i);
        }
        if let Some(p) = self.deriv.lock().expect("memo lock").get(&(v, i)) {
            return p.clone();
        }
        let raw = match (v, i) {
            (JetVar::S, 1) => JetPoly::s1(),
            (JetVar::S, 2) => JetPoly::s2(),
            (JetVar::S1, 1) => rhs_s11(),
            (JetVar::S1, 2) => JetPoly::s21(),
            (JetVar::S2, 1) => JetPoly::s21() + &r() * &JetPoly::s(),
            (JetVar::S2, 2) => rhs_s22(),
            (JetVar::S21, 1) => self.third[&JetVar::new(1, 2)].clone() + (&r() * &JetPoly::s1()).times_int(2),
            (JetVar::S21, 2) => self.third[&JetVar::new(2, 1)].clone(),
            _ => {
                let inner = self.reduce_var(v);
                return self.derive(&inner, i);
            }
        };
        let out = self.after_p2(raw);
        self.deriv.lock().expect("memo lock").insert((v, i), out.clone());
        out
    }

    /// Covariant derivative `D_i`, returned in the normal form of this mode.
    pub fn derive(&self, e: &JetPoly, i: u8) -> JetPoly {
        derive_with(e, i, |v| self.var_derivative(v, i))
    }

    /// `D_{w₁}(…D_{wₖ}(e))` for a written word.
    pub fn derive_word(&self, e: &JetPoly, w: Word) -> JetPoly {
        let mut out = e.clone();
        for i in w.letters().rev() {
            out = self.derive(&out, i);
        }
        out
    }

    /// `s_w` for a written word in the normal form of this mode.
    pub fn word(&self, w: Word) -> JetPoly {
        self.normalize(&free_word(w))
    }

    /// Image under the exchange of the two frame directions: `s_w ↦ −s_{σw}`,
    /// `R_w ↦ −R_{σw}`, followed by normalization.
    pub fn mirror(&self, e: &JetPoly) -> JetPoly {
        let image = e.mirror_coefficients().map_vars(|v| Some(-free_word(v.word().mirror())));
        self.normalize(&image)
    }
}
