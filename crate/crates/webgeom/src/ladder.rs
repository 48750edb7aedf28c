//! The curvature ladder: all covariant derivatives `ℛ_w` up to a given order.

use std::collections::BTreeMap;

use jetalg::{RValues, RWord, Word};
use symexpr::{EvalMode, Expr, NumValue, Tape};

use crate::chart::{Point, WebChart};
use crate::error::WebError;
use crate::frame::{FrameField, Gauge};

/// Deepest ladder this crate builds.
pub const MAX_LADDER_ORDER: usize = 6;

/// `ℛ_w` as expressions, with `ℛ_{i w} = D_i(ℛ_w)` and `wt(ℛ_w) = 2 + |w|`.
pub struct CurvLadder {
    frame: FrameField,
    max_order: usize,
    entries: BTreeMap<Word, Expr>,
}

/// Which words a ladder contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Words {
    /// Ascending words `1ᵃ2ᵇ`, enough to bind every coefficient.
    Canonical,
    /// Every word over `{1, 2}`.
    All,
}

impl CurvLadder {
    pub fn build(chart: &WebChart, gauge: Gauge, max_order: usize, words: Words) -> Result<CurvLadder, WebError> {
        if max_order > MAX_LADDER_ORDER {
            return Err(WebError::OrderTooHigh(max_order, MAX_LADDER_ORDER));
        }
        let frame = FrameField::new(chart, gauge);
        let base = match frame.gauge() {
            Gauge::Gradient => crate::frame::curvature(chart),
            _ => frame.curvature(),
        };
        let mut entries = BTreeMap::new();
        entries.insert(Word::EMPTY, base);
        for n in 1..=max_order {
            let targets: Vec<Word> = match words {
                Words::Canonical => (0..=n).map(|twos| Word::ascending(n - twos, twos)).collect(),
                Words::All => Word::all_of_len(n),
            };
            for w in targets {
                let (i, rest) = w.split_first().expect("nonempty word");
                let d = frame.derive(&entries[&rest], 2 + rest.len() as i64, i);
                entries.insert(w, d);
            }
        }
        Ok(CurvLadder { frame, max_order, entries })
    }

    pub fn frame(&self) -> &FrameField {
        &self.frame
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn get(&self, w: Word) -> Option<&Expr> {
        self.entries.get(&w)
    }

    pub fn curvature(&self) -> &Expr {
        &self.entries[&Word::EMPTY]
    }

    pub fn entries(&self) -> impl Iterator<Item = (Word, &Expr)> {
        self.entries.iter().map(|(w, e)| (*w, e))
    }

    /// Compiles the ladder together with the frame data used by integrators.
    pub fn compile(&self, chart: &WebChart) -> LadderTape {
        let words: Vec<Word> = self.entries.keys().copied().collect();
        let mut roots: Vec<Expr> = words.iter().map(|w| self.entries[w].clone()).collect();
        roots.extend([
            chart.fx().clone(),
            chart.fy().clone(),
            self.frame.rho().clone(),
            self.frame.mu(1).clone(),
            self.frame.mu(2).clone(),
        ]);
        LadderTape { words, tape: Tape::compile(&roots) }
    }
}

/// Frame data at a point: `f_x`, `f_y`, `ρ`, `μ₁`, `μ₂`.
#[derive(Clone, Debug)]
pub struct FrameValues<T> {
    pub fx: T,
    pub fy: T,
    pub rho: T,
    pub mu1: T,
    pub mu2: T,
}

/// Numeric values `ℛ_w(p)` of a ladder.
#[derive(Clone, Debug)]
pub struct LadderValues {
    pub values: BTreeMap<Word, NumValue>,
    pub frame: FrameValues<NumValue>,
}

impl LadderValues {
    pub fn get(&self, w: Word) -> Option<&NumValue> {
        self.values.get(&w)
    }

    pub fn curvature(&self) -> &NumValue {
        &self.values[&Word::EMPTY]
    }

    pub fn is_exact(&self) -> bool {
        self.values.values().all(NumValue::is_exact)
    }

    /// Binding of the canonical words for coefficient evaluation.
    pub fn to_rvalues(&self) -> RValues {
        let mut out = RValues::new(self.curvature().clone());
        for (w, v) in &self.values {
            if !w.is_empty() && w.is_ascending() {
                let (ones, twos) = w.counts();
                out.set(RWord::new(ones, twos), v.clone());
            }
        }
        out
    }
}

/// A compiled ladder for repeated evaluation.
#[derive(Clone, Debug)]
pub struct LadderTape {
    words: Vec<Word>,
    tape: Tape,
}

impl LadderTape {
    pub fn eval(&self, p: &Point, mode: EvalMode) -> Result<LadderValues, WebError> {
        let v = self.tape.eval(&p.x, &p.y, mode)?;
        self.split(v, || (p.x.to_string(), p.y.to_string()))
    }

    /// Float evaluation at an arbitrary point.
    pub fn eval_f64(&self, x: f64, y: f64) -> Result<LadderValues, WebError> {
        let v = self.tape.eval_f64(x, y)?.into_iter().map(NumValue::Float).collect();
        self.split(v, || (x.to_string(), y.to_string()))
    }

    fn split(&self, mut v: Vec<NumValue>, at: impl Fn() -> (String, String)) -> Result<LadderValues, WebError> {
        let tail = v.split_off(self.words.len());
        let [fx, fy, rho, mu1, mu2]: [NumValue; 5] = tail.try_into().expect("five frame roots");
        for (value, which) in [(&fx, "f_x"), (&fy, "f_y"), (&rho, "rho")] {
            if value.is_zero() {
                let (x, y) = at();
                return Err(WebError::Degenerate { x, y, which });
            }
        }
        Ok(LadderValues {
            values: self.words.iter().copied().zip(v).collect(),
            frame: FrameValues { fx, fy, rho, mu1, mu2 },
        })
    }
}

/// Evaluates every ladder entry at `p`.
pub fn evaluate_ladder(
    chart: &WebChart,
    ladder: &CurvLadder,
    p: &Point,
    mode: EvalMode,
) -> Result<LadderValues, WebError> {
    chart.check_point(p, mode)?;
    ladder.compile(chart).eval(p, mode)
}
