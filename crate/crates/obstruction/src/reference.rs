//! Structural comparison of the derived tower against the reference
//! coefficient tables shipped in `data/reference_tables.txt`.

use std::fmt;

use jetalg::{parse_named_blocks, JetMono, JetPoly, JetVar};
use num_rational::BigRational;
use symexpr::fmt_rational;

use crate::error::TowerError;
use crate::spoly::SymPoly;
use crate::tower::ObstructionTower;

/// The reference tables: `α … γ̂` and rows 1–3 of the system.
pub const REFERENCE_TABLES: &str = include_str!("../data/reference_tables.txt");

/// One monomial on which the reference and the derivation disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct TypoEntry {
    pub table: String,
    /// The monomial in `s` and the curvature words, e.g. `R*R1` or `R12*s`.
    pub monomial: String,
    pub printed: BigRational,
    pub derived: BigRational,
}

impl fmt::Display for TypoEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} printed {} derived {}",
            self.table,
            self.monomial,
            fmt_rational(&self.printed),
            fmt_rational(&self.derived)
        )
    }
}

/// The derived counterpart of each reference table, as a polynomial in `s`.
pub fn derived_tables(t: &ObstructionTower) -> Vec<(String, JetPoly)> {
    let psi_part = |p: &JetPoly, v: Option<JetVar>| {
        let key = v.map_or(JetMono::ONE, JetMono::var);
        let mut out = JetPoly::zero();
        for (m, c) in p.terms() {
            let (rest, k) = m.split_var(JetVar::S);
            if rest == key {
                out.add_term(JetMono::ONE.times(JetVar::S, k), c.clone());
            }
        }
        out
    };
    let mut out = vec![
        ("alpha".to_string(), psi_part(&t.psi1, Some(JetVar::S1))),
        ("beta".to_string(), psi_part(&t.psi1, Some(JetVar::S2))),
        ("gamma".to_string(), psi_part(&t.psi1, None)),
        ("alpha_hat".to_string(), psi_part(&t.psi2, Some(JetVar::S1))),
        ("beta_hat".to_string(), psi_part(&t.psi2, Some(JetVar::S2))),
        ("gamma_hat".to_string(), psi_part(&t.psi2, None)),
    ];
    for (k, row) in t.rows.iter().take(3).enumerate() {
        for (name, p) in ["a", "b", "c", "d"].into_iter().zip(row.parts()) {
            out.push((format!("{name}{}", k + 1), SymPoly::to_jet(p)));
        }
    }
    out
}

fn monomial_name(r: &str, s: &str) -> String {
    match (r, s) {
        ("1", s) => s.to_string(),
        (r, "1") => r.to_string(),
        (r, s) => format!("{r}*{s}"),
    }
}

/// Per-monomial differences between the reference tables and the derivation.
pub fn compare_with_reference(t: &ObstructionTower) -> Result<Vec<TypoEntry>, TowerError> {
    let reference = parse_named_blocks(REFERENCE_TABLES)?;
    let derived = derived_tables(t);
    let mut ledger = Vec::new();
    for (name, printed) in &reference {
        let (_, mine) = derived
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| TowerError::Shape("reference", format!("no derived table named {name}")))?;
        let diff = mine.clone() - printed.clone();
        for (m, c) in diff.terms() {
            for (rm, _) in c.terms() {
                let coeff = |p: &JetPoly| p.coefficient(m).coefficient(rm);
                ledger.push(TypoEntry {
                    table: name.clone(),
                    monomial: monomial_name(&rm.to_string(), &m.to_string()),
                    printed: coeff(printed),
                    derived: coeff(mine),
                });
            }
        }
    }
    Ok(ledger)
}
