//! Pointwise data of a web in a chosen gauge, compiled for float evaluation.

use std::collections::BTreeMap;

use jetalg::{RAlg, RWord};
use num_traits::ToPrimitive;
use obstruction::SymPoly;
use symexpr::{Expr, Tape, Var};
use webgeom::{CurvLadder, Gauge, WebChart, WebError, Words};

/// Frame and curvature data at one point.
///
/// `λ_a = f_a/ρ`, so that `∂_a = λ_a e_a`, and `dlambda[a][b] = ∂_a λ_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Local {
    pub lambda: [f64; 2],
    pub dlambda: [[f64; 2]; 2],
    pub mu: [f64; 2],
    pub f_grad: [f64; 2],
    /// `hess[a][b] = ∂_a ∂_b f`.
    pub hess: [[f64; 2]; 2],
    /// `ℛ` followed by the canonical curvature words of [`LocalModel::words`].
    pub words: Vec<f64>,
    r_index: [usize; 3],
}

impl Local {
    pub fn curvature(&self) -> f64 {
        self.words[self.r_index[0]]
    }

    pub fn r1(&self) -> f64 {
        self.words[self.r_index[1]]
    }

    pub fn r2(&self) -> f64 {
        self.words[self.r_index[2]]
    }
}

/// A compiled tape for [`Local`] data.
#[derive(Clone, Debug)]
pub struct LocalModel {
    tape: Tape,
    words: Vec<RWord>,
    index: BTreeMap<RWord, usize>,
    gauge: Gauge,
}

impl LocalModel {
    /// Compiles the ladder up to `order` (at least one) together with the frame.
    pub fn new(chart: &WebChart, gauge: Gauge, order: usize) -> Result<LocalModel, WebError> {
        let order = order.max(1);
        let ladder = CurvLadder::build(chart, gauge.clone(), order, Words::Canonical)?;
        let words = RWord::all(order);
        let mut roots = vec![ladder.curvature().clone()];
        for w in &words {
            roots.push(ladder.get(w.word()).ok_or_else(|| WebError::MissingWord(w.to_string()))?.clone());
        }
        let frame = ladder.frame();
        let rho = frame.rho();
        let lambda = [Expr::div(chart.fx(), rho), Expr::div(chart.fy(), rho)];
        for v in [Var::X, Var::Y] {
            for l in &lambda {
                roots.push(l.diff(v));
            }
        }
        roots.extend(lambda);
        roots.extend([frame.mu(1).clone(), frame.mu(2).clone(), chart.fx().clone(), chart.fy().clone()]);
        roots.extend([chart.partial(2, 0).clone(), chart.partial(1, 1).clone(), chart.partial(0, 2).clone()]);
        let index = words.iter().enumerate().map(|(k, w)| (*w, k + 1)).collect();
        Ok(LocalModel { tape: Tape::compile(&roots), words, index, gauge })
    }

    pub fn gauge(&self) -> &Gauge {
        &self.gauge
    }

    pub fn words(&self) -> &[RWord] {
        &self.words
    }

    /// Position of a word in [`Local::words`], where slot 0 holds `ℛ`.
    pub fn word_index(&self, w: RWord) -> Option<usize> {
        self.index.get(&w).copied()
    }

    pub fn at(&self, x: f64, y: f64) -> Result<Local, WebError> {
        let v = self.tape.eval_f64(x, y)?;
        let n = self.words.len() + 1;
        let tail = &v[n..];
        let lambda = [tail[4], tail[5]];
        for (value, which) in [(lambda[0], "f_x/rho"), (lambda[1], "f_y/rho")] {
            if value == 0.0 || !value.is_finite() {
                return Err(WebError::Degenerate { x: x.to_string(), y: y.to_string(), which });
            }
        }
        let r_index = [0, self.index[&RWord::new(1, 0)], self.index[&RWord::new(0, 1)]];
        Ok(Local {
            lambda,
            dlambda: [[tail[0], tail[1]], [tail[2], tail[3]]],
            mu: [tail[6], tail[7]],
            f_grad: [tail[8], tail[9]],
            hess: [[tail[10], tail[11]], [tail[11], tail[12]]],
            words: v[..n].to_vec(),
            r_index,
        })
    }
}

struct Term {
    coeff: f64,
    r_power: i32,
    factors: Vec<(usize, i32)>,
}

/// One coefficient of the algebra, compiled against a word index.
pub struct CompiledCoeff {
    terms: Vec<Term>,
}

impl CompiledCoeff {
    pub fn new(c: &RAlg, model: &LocalModel) -> Option<CompiledCoeff> {
        let mut terms = Vec::new();
        for (m, q) in c.terms() {
            let mut factors = Vec::new();
            for (w, k) in m.words() {
                factors.push((model.word_index(w)?, k as i32));
            }
            terms.push(Term { coeff: q.to_f64()?, r_power: m.r_exponent(), factors });
        }
        Some(CompiledCoeff { terms })
    }

    pub fn eval(&self, words: &[f64]) -> f64 {
        let r = words[0];
        self.terms
            .iter()
            .map(|t| t.factors.iter().fold(t.coeff * r.powi(t.r_power), |acc, &(i, k)| acc * words[i].powi(k)))
            .sum()
    }
}

/// A polynomial in `s` with compiled coefficients.
pub struct CompiledPoly(Vec<CompiledCoeff>);

impl CompiledPoly {
    pub fn new(p: &SymPoly, model: &LocalModel) -> Option<CompiledPoly> {
        p.coeffs().iter().map(|c| CompiledCoeff::new(c, model)).collect::<Option<_>>().map(CompiledPoly)
    }

    /// Coefficients at a point, lowest degree first.
    pub fn at(&self, words: &[f64]) -> Vec<f64> {
        self.0.iter().map(|c| c.eval(words)).collect()
    }
}

/// Horner evaluation; also returns `Σ|c_k||s|^k` as a scale.
pub fn horner(c: &[f64], s: f64) -> (f64, f64) {
    c.iter().rev().fold((0.0, 0.0), |(v, a), ck| (v * s + ck, a * s.abs() + ck.abs()))
}
