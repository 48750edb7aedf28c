//! Derivation of the obstruction tower `φ → (ψ¹, ψ²) → 𝒮 → (D, A, B, C)`.

use jetalg::{eliminate_s21, eliminate_squares, free_derive, p2_residuals, JetPoly, JetRing, RAlg, Weight};

use crate::error::TowerError;
use crate::phi::build_phi;
use crate::qsys::det3;
use crate::spoly::SymPoly;

/// `ψ¹ = 24ℛ·D₁P₂₁ − 2D₁φ + D₂φ` and `ψ² = 24ℛ·D₂P₂₂ + D₁φ − 2D₂φ`, reduced by
/// the second-order system and with `s₂₁` eliminated through `φ = 0`.
pub fn build_psi(phi: &JetPoly) -> Result<(JetPoly, JetPoly), TowerError> {
    let (p21, p22) = p2_residuals();
    let r24 = JetPoly::from_ralg(RAlg::r().scale(&jetalg::qi(24)));
    let (d1phi, d2phi) = (free_derive(phi, 1), free_derive(phi, 2));
    let raw1 = &r24 * &free_derive(&p21, 1) - d1phi.times_int(2) + d2phi.clone();
    let raw2 = &r24 * &free_derive(&p22, 2) + d1phi - d2phi.times_int(2);
    let p2 = JetRing::p2();
    let psi1 = eliminate_s21(&p2.normalize(&raw1), phi)?;
    let psi2 = eliminate_s21(&p2.normalize(&raw2), phi)?;
    check_psi_shape("psi1", &psi1, (0, 2))?;
    check_psi_shape("psi2", &psi2, (2, 0))?;
    Ok((psi1, psi2))
}

fn check_psi_shape(name: &'static str, psi: &JetPoly, square: (u32, u32)) -> Result<(), TowerError> {
    if psi.max_order() > 1 {
        return Err(TowerError::Shape(name, "jets of order two remain".into()));
    }
    let allowed = [(0, 0), (1, 0), (0, 1), (1, 1), square];
    for (k, c) in psi.collect_s1_s2() {
        if !allowed.contains(&k) {
            return Err(TowerError::Shape(name, format!("unexpected monomial s1^{}*s2^{}", k.0, k.1)));
        }
        if c.as_s_poly().is_none() {
            return Err(TowerError::Shape(name, "coefficient depends on a jet other than s".into()));
        }
    }
    Ok(())
}

/// One equation `a·s₁ + b·s₂ + c·s₁s₂ + d = 0` of the system 𝒮.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub a: SymPoly,
    pub b: SymPoly,
    pub c: SymPoly,
    pub d: SymPoly,
}

impl Row {
    /// Splits a polynomial of degree one in each of `s₁`, `s₂`.
    pub fn from_jet(name: &'static str, e: &JetPoly) -> Result<Row, TowerError> {
        let mut parts = e.collect_s1_s2();
        let mut take = |k: (u32, u32)| -> Result<SymPoly, TowerError> {
            let p = parts.remove(&k).unwrap_or_default();
            SymPoly::from_jet(&p)
                .ok_or_else(|| TowerError::Shape(name, "coefficient depends on a jet other than s".into()))
        };
        let row = Row { a: take((1, 0))?, b: take((0, 1))?, c: take((1, 1))?, d: take((0, 0))? };
        if let Some(k) = parts.keys().next() {
            return Err(TowerError::Shape(name, format!("residual monomial s1^{}*s2^{}", k.0, k.1)));
        }
        Ok(row)
    }

    pub fn to_jet(&self) -> JetPoly {
        self.a.to_jet() * JetPoly::s1()
            + self.b.to_jet() * JetPoly::s2()
            + self.c.to_jet() * (JetPoly::s1() * JetPoly::s2())
            + self.d.to_jet()
    }

    /// `(a, b, c, d)`.
    pub fn parts(&self) -> [&SymPoly; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Coefficientwise `∇_i`.
    pub fn nabla(&self, i: u8) -> Row {
        Row { a: self.a.nabla(i), b: self.b.nabla(i), c: self.c.nabla(i), d: self.d.nabla(i) }
    }

    /// Image under the exchange of directions.
    ///
    /// The equation `a s₁ + b s₂ + c s₁s₂ + d` is sent to
    /// `−σb s₁ − σa s₂ + σc s₁s₂ + σd`, since `σs₁ = −s₂` and `σs₂ = −s₁`.
    pub fn mirror(&self) -> Row {
        Row { a: self.b.mirror().neg(), b: self.a.mirror().neg(), c: self.c.mirror(), d: self.d.mirror() }
    }

    pub fn neg(&self) -> Row {
        Row { a: self.a.neg(), b: self.b.neg(), c: self.c.neg(), d: self.d.neg() }
    }
}

/// Differentiates `ψ¹, ψ²` along both directions in the ring where the
/// second-order system and `φ = 0` hold, then removes `s₁²`, `s₂²`.
///
/// Rows are ordered `D₁ψ¹, D₂ψ¹, D₁ψ², D₂ψ²`.
pub fn derive_rows(phi: &JetPoly, psi1: &JetPoly, psi2: &JetPoly) -> Result<[Row; 4], TowerError> {
    let ring = JetRing::p_phi(phi)?;
    let names = ["row1", "row2", "row3", "row4"];
    let mut rows = Vec::with_capacity(4);
    for (k, (psi, i)) in [(psi1, 1), (psi1, 2), (psi2, 1), (psi2, 2)].into_iter().enumerate() {
        let reduced = eliminate_squares(&ring.derive(psi, i), psi1, psi2)?;
        rows.push(Row::from_jet(names[k], &reduced)?);
    }
    Ok(rows.try_into().expect("four rows"))
}

/// Weight check with a name for the error.
pub fn check_weight(name: &str, e: &JetPoly, expected: i32) -> Result<(), TowerError> {
    match e.weight() {
        Weight::Homogeneous(w) if w == expected => Ok(()),
        Weight::Zero => Ok(()),
        other => {
            Err(TowerError::Inhomogeneous { name: name.into(), detail: format!("{other:?}, expected {expected}") })
        }
    }
}

/// The symbolic part of the tower.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionTower {
    pub phi: JetPoly,
    pub psi1: JetPoly,
    pub psi2: JetPoly,
    pub rows: [Row; 4],
}

impl ObstructionTower {
    /// Runs the derivation pipeline and its structural checks.
    pub fn derive() -> Result<ObstructionTower, TowerError> {
        let phi = build_phi();
        check_weight("phi", &phi, 5)?;
        let (psi1, psi2) = build_psi(&phi)?;
        check_weight("psi1", &psi1, 6)?;
        check_weight("psi2", &psi2, 6)?;
        let rows = derive_rows(&phi, &psi1, &psi2)?;
        let tower = ObstructionTower { phi, psi1, psi2, rows };
        tower.check()?;
        Ok(tower)
    }

    /// Shape, weight, degree and symmetry checks of a derived or loaded tower.
    pub fn check(&self) -> Result<(), TowerError> {
        for (k, row) in self.rows.iter().enumerate() {
            check_weight(&format!("row{}", k + 1), &row.to_jet(), 7)?;
        }
        let bounds = [[3, 3, 1, 5], [3, 3, 0, 4], [3, 3, 0, 4], [3, 3, 1, 5]];
        for (k, (row, b)) in self.rows.iter().zip(bounds).enumerate() {
            for ((p, bound), name) in row.parts().into_iter().zip(b).zip(["a", "b", "c", "d"]) {
                if let Some(deg) = p.degree() {
                    if deg > bound {
                        return Err(TowerError::DegreeOverrun { name: format!("{name}{}", k + 1), found: deg, bound });
                    }
                }
            }
        }
        let ring = JetRing::p_phi(&self.phi)?;
        let mirrored = ring.mirror(&self.psi1);
        if mirrored != self.psi2 && mirrored != -self.psi2.clone() {
            return Err(TowerError::Mirror("psi1 does not map to psi2".into()));
        }
        let m1 = self.rows[0].mirror();
        if m1 != self.rows[3] && m1 != self.rows[3].neg() {
            return Err(TowerError::Mirror("row1 does not map to row4".into()));
        }
        let m2 = self.rows[1].mirror();
        if m2 != self.rows[2] && m2 != self.rows[2].neg() {
            return Err(TowerError::Mirror("row2 does not map to row3".into()));
        }
        Ok(())
    }

    /// `(D, A, B, C)` as symbolic polynomials in `s`, from rows 1–3.
    pub fn dets(&self) -> [SymPoly; 4] {
        let r = &self.rows;
        let nd: Vec<SymPoly> = r.iter().take(3).map(|row| row.d.neg()).collect();
        let d = det3([[&r[0].a, &r[0].b, &r[0].c], [&r[1].a, &r[1].b, &r[1].c], [&r[2].a, &r[2].b, &r[2].c]]);
        let a = det3([[&nd[0], &r[0].b, &r[0].c], [&nd[1], &r[1].b, &r[1].c], [&nd[2], &r[2].b, &r[2].c]]);
        let b = det3([[&r[0].a, &nd[0], &r[0].c], [&r[1].a, &nd[1], &r[1].c], [&r[2].a, &nd[2], &r[2].c]]);
        let c = det3([[&r[0].a, &r[0].b, &nd[0]], [&r[1].a, &r[1].b, &nd[1]], [&r[2].a, &r[2].b, &nd[2]]]);
        [d, a, b, c]
    }

    /// The 4×4 determinant of the whole system, symbolically.
    pub fn det4(&self) -> SymPoly {
        let parts: Vec<[SymPoly; 4]> =
            self.rows.iter().map(|r| [r.a.clone(), r.b.clone(), r.c.clone(), r.d.clone()]).collect();
        crate::qsys::det4([&parts[0], &parts[1], &parts[2], &parts[3]])
    }

    /// `Q₁` and `Q₂` from the symbolic determinants and their symbolic
    /// derivatives.
    pub fn symbolic_q1_q2(&self) -> [SymPoly; 2] {
        let [d, a, b, c] = self.dets();
        let nabla = [1, 2].map(|i| [d.nabla(i), a.nabla(i), b.nabla(i)]);
        crate::qsys::q1_q2(&RAlg::r(), &d, &a, &b, &c, &nabla)
    }
}
