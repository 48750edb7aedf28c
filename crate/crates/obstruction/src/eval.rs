//! Evaluation of the tower at a numeric binding of the curvature words.

use jetalg::{JetMono, JetPoly, JetVar, RAlg, RValues, RWord};
use symexpr::{EvalMode, NumValue};
use webgeom::{evaluate_ladder, CurvLadder, LadderValues, Point, WebChart};

use crate::error::TowerError;
use crate::qsys::{QInputs, QSystem, RowParts};
use crate::spoly::{NumPoly, SymPoly};
use crate::tower::ObstructionTower;

/// Bounds on `deg Q₁ … deg Q₇`.
pub const Q_DEGREE_BOUNDS: [usize; 7] = [18, 15, 23, 23, 24, 17, 17];
/// Generic degrees of `(D, A, B, C)`.
pub const DET_DEGREES: [usize; 4] = [7, 8, 8, 11];

fn coefficient(e: &JetPoly, m: JetMono) -> Result<SymPoly, TowerError> {
    let mut part = JetPoly::zero();
    for (k, c) in e.terms() {
        let (rest, _) = k.split_var(JetVar::S);
        if rest == m {
            part.add_term(*k, c.clone());
        }
    }
    let mut shifted = JetPoly::zero();
    for (k, c) in part.terms() {
        let (_, e) = k.split_var(JetVar::S);
        shifted.add_term(JetMono::ONE.times(JetVar::S, e), c.clone());
    }
    SymPoly::from_jet(&shifted).ok_or_else(|| TowerError::Shape("coefficient", e.to_string()))
}

fn mono(vars: &[(JetVar, u32)]) -> JetMono {
    vars.iter().fold(JetMono::ONE, |m, &(v, k)| m.times(v, k))
}

/// The symbolic inputs of the `Q` system.
pub fn symbolic_inputs(t: &ObstructionTower) -> Result<QInputs<RAlg>, TowerError> {
    let row = |k: usize| -> RowParts<RAlg> {
        let r = &t.rows[k];
        [r.a.clone(), r.b.clone(), r.c.clone(), r.d.clone()]
    };
    let nrow = |i: u8, k: usize| -> RowParts<RAlg> {
        let r = t.rows[k].nabla(i);
        [r.a, r.b, r.c, r.d]
    };
    let (s1, s2) = (JetVar::S1, JetVar::S2);
    let phi = [
        coefficient(&t.phi, mono(&[(JetVar::S21, 1)]))?,
        coefficient(&t.phi, mono(&[(s1, 1)]))?,
        coefficient(&t.phi, mono(&[(s2, 1)]))?,
        coefficient(&t.phi, JetMono::ONE)?,
    ];
    let psi_parts = |p: &JetPoly| -> Result<[SymPoly; 6], TowerError> {
        Ok([
            coefficient(p, mono(&[(s1, 2)]))?,
            coefficient(p, mono(&[(s1, 1), (s2, 1)]))?,
            coefficient(p, mono(&[(s2, 2)]))?,
            coefficient(p, mono(&[(s1, 1)]))?,
            coefficient(p, mono(&[(s2, 1)]))?,
            coefficient(p, JetMono::ONE)?,
        ])
    };
    Ok(QInputs {
        rows: [row(0), row(1), row(2)],
        nabla_rows: [[nrow(1, 0), nrow(1, 1), nrow(1, 2)], [nrow(2, 0), nrow(2, 1), nrow(2, 2)]],
        phi,
        psi: [psi_parts(&t.psi1)?, psi_parts(&t.psi2)?],
        r: [RAlg::r(), RAlg::rword(RWord::new(1, 0)), RAlg::rword(RWord::new(0, 1))],
    })
}

fn bind_inputs(inp: &QInputs<RAlg>, v: &RValues) -> Result<QInputs<NumValue>, TowerError> {
    let b = |p: &SymPoly| p.bind(v).map_err(TowerError::from);
    let brow = |r: &RowParts<RAlg>| -> Result<RowParts<NumValue>, TowerError> {
        Ok([b(&r[0])?, b(&r[1])?, b(&r[2])?, b(&r[3])?])
    };
    let b6 = |p: &[SymPoly; 6]| -> Result<[NumPoly; 6], TowerError> {
        Ok([b(&p[0])?, b(&p[1])?, b(&p[2])?, b(&p[3])?, b(&p[4])?, b(&p[5])?])
    };
    let rv = |c: &RAlg| c.eval(v).map_err(TowerError::from);
    Ok(QInputs {
        rows: [brow(&inp.rows[0])?, brow(&inp.rows[1])?, brow(&inp.rows[2])?],
        nabla_rows: [
            [brow(&inp.nabla_rows[0][0])?, brow(&inp.nabla_rows[0][1])?, brow(&inp.nabla_rows[0][2])?],
            [brow(&inp.nabla_rows[1][0])?, brow(&inp.nabla_rows[1][1])?, brow(&inp.nabla_rows[1][2])?],
        ],
        phi: [b(&inp.phi[0])?, b(&inp.phi[1])?, b(&inp.phi[2])?, b(&inp.phi[3])?],
        psi: [b6(&inp.psi[0])?, b6(&inp.psi[1])?],
        r: [rv(&inp.r[0])?, rv(&inp.r[1])?, rv(&inp.r[2])?],
    })
}

/// A tower prepared for repeated evaluation.
#[derive(Clone, Debug)]
pub struct TowerEvaluator {
    inputs: QInputs<RAlg>,
    row4: RowParts<RAlg>,
}

/// The tower evaluated at one binding.
#[derive(Clone, Debug)]
pub struct EvaluatedTower {
    pub curvature: NumValue,
    pub rows: [RowParts<NumValue>; 4],
    pub system: QSystem<NumValue>,
    /// `Q₁ … Q₇` with rational content removed.
    pub q: [NumPoly; 7],
}

impl TowerEvaluator {
    pub fn new(t: &ObstructionTower) -> Result<TowerEvaluator, TowerError> {
        let r = &t.rows[3];
        Ok(TowerEvaluator { inputs: symbolic_inputs(t)?, row4: [r.a.clone(), r.b.clone(), r.c.clone(), r.d.clone()] })
    }

    pub fn inputs(&self) -> &QInputs<RAlg> {
        &self.inputs
    }

    /// Evaluates at a binding of `ℛ` and its words. A vanishing curvature is
    /// reported as [`TowerError::Parallelizable`].
    pub fn evaluate(&self, v: &RValues) -> Result<EvaluatedTower, TowerError> {
        if v.r().is_zero() {
            return Err(TowerError::Parallelizable);
        }
        let inp = bind_inputs(&self.inputs, v)?;
        let row4 = [0, 1, 2, 3].map(|k| self.row4[k].bind(v));
        let row4 = [row4[0].clone()?, row4[1].clone()?, row4[2].clone()?, row4[3].clone()?];
        let system = QSystem::new(&inp);
        let q = system.q.clone().map(|p| p.primitive());
        Ok(EvaluatedTower {
            curvature: v.r().clone(),
            rows: [inp.rows[0].clone(), inp.rows[1].clone(), inp.rows[2].clone(), row4],
            system,
            q,
        })
    }

    /// Evaluates the ladder of a web at `p` and then the tower.
    pub fn evaluate_at(
        &self,
        chart: &WebChart,
        ladder: &CurvLadder,
        p: &Point,
        mode: EvalMode,
    ) -> Result<(LadderValues, EvaluatedTower), TowerError> {
        let values = evaluate_ladder(chart, ladder, p, mode)?;
        let t = self.evaluate(&values.to_rvalues())?;
        Ok((values, t))
    }
}

impl EvaluatedTower {
    pub fn is_exact(&self) -> bool {
        self.q.iter().all(NumPoly::is_exact)
    }

    /// Degrees of `(D, A, B, C)`.
    pub fn det_degrees(&self) -> [Option<usize>; 4] {
        let s = &self.system;
        [s.d.degree(), s.a.degree(), s.b.degree(), s.c.degree()]
    }

    pub fn q_degrees(&self) -> [Option<usize>; 7] {
        self.q.clone().map(|p| p.degree())
    }

    /// `(s₁, s₂) = (A/D, B/D)` at a value of `s`, if `D(s) ≠ 0`.
    pub fn slopes(&self, s: &NumValue) -> Option<(NumValue, NumValue)> {
        let d = self.system.d.eval(s);
        let a = self.system.a.eval(s);
        let b = self.system.b.eval(s);
        Some((a.checked_div(&d)?, b.checked_div(&d)?))
    }

    /// Determinant of the full 4×4 system at this binding, as a polynomial in `s`.
    pub fn det4(&self) -> NumPoly {
        let r = &self.rows;
        crate::qsys::det4([&r[0], &r[1], &r[2], &r[3]])
    }
}
