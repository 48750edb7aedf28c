//! The subcommands as library functions.
//!
//! Each command fills a [`Report`] and returns it with the process exit
//! status. A failing stage leaves an error stanza naming the stage.

use std::path::Path;

use jetalg::{RValues, RWord};
use linearize::{
    assemble_l, dump_grid, projective_equiv_check, seed_tz, verify, Branch, FieldGrid, GridSpec, LinError,
    LinearizationField, Linearizer,
};
use num_rational::BigRational;
use obstruction::{
    compare_with_reference, CacheStatus, EvaluatedTower, ObstructionTower, TowerCache, TowerEvaluator, DET_DEGREES,
    Q_DEGREE_BOUNDS,
};
use polyalg::{radical_at_point_with, resultant, roots, PolyError, QPoly, RootValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use symexpr::{fmt_rational, rational_to_f64, EvalMode, NumValue};
use webgeom::{evaluate_ladder, ladder, CurvLadder, Point, WebChart};

use crate::config::{fmt_point, JobConfig};
use crate::error::{CliError, EXIT_DECISIVE, EXIT_INCONCLUSIVE};
use crate::report::*;

/// Highest curvature word order the tower reads.
pub const LADDER_ORDER: usize = 6;

/// Neighborhood offsets as fractions of the sampling radius, all inside the unit disc.
pub const SAMPLE_OFFSETS: [(i64, i64, i64, i64); 8] = [
    (1, 2, 1, 3),
    (-2, 5, 1, 2),
    (0, 1, 1, 2),
    (2, 3, -1, 4),
    (-1, 3, -1, 3),
    (-3, 4, 0, 1),
    (1, 5, -3, 5),
    (3, 7, 2, 3),
];

/// Tolerance on the base difference when comparing two linearizations.
pub const EQUIVALENCE_TOL: f64 = 1e-9;

/// A finished command.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    fn finish(mut report: Report, result: Result<i32, CliError>) -> Outcome {
        match result {
            Ok(exit_code) => Outcome { report, exit_code },
            Err(e) => {
                let exit_code = e.exit_code();
                report.error = Some(ErrorStanza { stage: e.stage(), message: e.to_string(), exit_code });
                Outcome { report, exit_code }
            }
        }
    }

    fn from_verdict(report: &mut Report, verdict: Verdict) -> Result<i32, CliError> {
        report.verdict = Some(verdict);
        Ok(if verdict.is_decisive() { EXIT_DECISIVE } else { EXIT_INCONCLUSIVE })
    }
}

fn echo(cfg: &JobConfig) -> InputEcho {
    InputEcho {
        f: cfg.f.clone(),
        point: fmt_point(&cfg.point),
        mode: match cfg.mode {
            EvalMode::Exact => "exact",
            EvalMode::Float => "float",
        },
        gauge: cfg.gauge.name(),
        grid_h: cfg.grid.h,
        grid_n: cfg.grid.n,
        tol: cfg.tol.rel,
        verify_tol: cfg.verify_tol,
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Main => "main",
        Branch::Parallel => "parallel",
        Branch::Singular => "singular",
    }
}

fn curvature_stanza(cfg: &JobConfig) -> Result<(CurvatureStanza, Branch), CliError> {
    let lad = ladder(&cfg.chart, cfg.gauge.clone(), 0)?;
    let values = evaluate_ladder(&cfg.chart, &lad, &cfg.point, cfg.mode)?;
    let r = values.curvature();
    let branch = Branch::detect(&cfg.chart, &cfg.gauge, &cfg.point, rational_to_f64(&cfg.radius))?;
    let stanza = CurvatureStanza {
        value: num(r),
        exact: r.is_exact(),
        branch: branch_name(branch),
        parallelizable: branch == Branch::Parallel,
    };
    Ok((stanza, branch))
}

/// `weblin curvature`: the curvature at the point and the branch of the web.
pub fn cmd_curvature(cfg: &JobConfig) -> Outcome {
    let mut report = Report::new("curvature");
    report.input = Some(echo(cfg));
    let result = curvature_stanza(cfg).map(|(stanza, branch)| {
        if branch == Branch::Singular {
            report.notes.push("the curvature vanishes at the point but not on the sampled neighborhood".into());
        }
        report.curvature = Some(stanza);
        EXIT_DECISIVE
    });
    Outcome::finish(report, result)
}

fn cache_text(status: &CacheStatus) -> String {
    match status {
        CacheStatus::Hit => "hit".into(),
        CacheStatus::Rebuilt { reason } => format!("rebuilt: {reason}"),
    }
}

fn load_tower(dir: &Path, rebuild: bool) -> Result<(ObstructionTower, TowerStanza), CliError> {
    let cache = TowerCache::new(dir);
    let (tower, status) = if rebuild {
        (cache.rebuild()?, CacheStatus::Rebuilt { reason: "requested".into() })
    } else {
        cache.load_or_build()?
    };
    let ledger = compare_with_reference(&tower)?;
    let stanza = TowerStanza {
        cache: cache_text(&status),
        cache_dir: dir.display().to_string(),
        pipeline: obstruction::pipeline_hash(),
        typo_ledger: ledger.iter().map(LedgerEntry::from).collect(),
        degree_table: None,
    };
    Ok((tower, stanza))
}

/// A pseudo-random exact binding of the curvature words with every value nonzero.
///
/// The determinant leading coefficients are multiples of `ℛ³`, `ℛ²ℛ₁`, `ℛ²ℛ₂`
/// and `ℛ³`, so a zero word can lower a degree; drawing from nonzero values
/// keeps the binding off that locus.
pub fn probe_binding(seed: u64) -> RValues {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nonzero = || loop {
        let v = NumValue::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        if !v.is_zero() {
            return v;
        }
    };
    let mut v = RValues::new(nonzero());
    for w in RWord::all(LADDER_ORDER) {
        if w.order() > 0 {
            v.set(w, nonzero());
        }
    }
    v
}

/// Number of probe bindings behind the degree table.
pub const PROBE_BINDINGS: usize = 3;

fn degree_table(tower: &ObstructionTower) -> Result<DegreeTable, CliError> {
    let evaluator = TowerEvaluator::new(tower)?;
    let mut det = [None; 4];
    let mut q = [None; 7];
    let mut det4_vanishes = true;
    for seed in 0..PROBE_BINDINGS as u64 {
        let t = evaluator.evaluate(&probe_binding(seed))?;
        for (slot, d) in det.iter_mut().zip(t.det_degrees()) {
            *slot = (*slot).max(d);
        }
        for (slot, d) in q.iter_mut().zip(t.q_degrees()) {
            *slot = (*slot).max(d);
        }
        det4_vanishes &= t.det4().is_zero();
    }
    let generic = det == DET_DEGREES.map(Some) && q == Q_DEGREE_BOUNDS.map(Some);
    Ok(DegreeTable {
        bindings: PROBE_BINDINGS,
        det_degrees: det,
        det_expected: DET_DEGREES,
        q_degrees: q,
        q_bounds: Q_DEGREE_BOUNDS,
        generic,
        det4_vanishes,
    })
}

/// `weblin tower`: builds or validates the cached tower and prints its degree table and typo ledger.
pub fn cmd_tower(cache_dir: &Path, rebuild: bool) -> Outcome {
    let mut report = Report::new("tower");
    let result = (|| {
        let (tower, mut stanza) = load_tower(cache_dir, rebuild)?;
        let table = degree_table(&tower)?;
        if !table.det4_vanishes {
            return Err(CliError::Internal("the 4x4 determinant does not vanish at a probe binding".into()));
        }
        if !table.generic {
            report.notes.push("the probe bindings did not attain every generic degree".into());
        }
        stanza.degree_table = Some(table);
        report.tower = Some(stanza);
        Ok(EXIT_DECISIVE)
    })();
    Outcome::finish(report, result)
}

/// The tower evaluated at one point, with the obstruction polynomials and their radical.
pub struct PointEvaluation {
    pub tower: EvaluatedTower,
    pub qs: Vec<QPoly>,
    pub radical: Result<QPoly, PolyError>,
}

impl PointEvaluation {
    pub fn is_exact(&self) -> bool {
        self.tower.is_exact()
    }
}

/// Evaluates the tower at `p` and takes the radical of `Q₁ … Q₇` there.
pub fn evaluate_point(
    evaluator: &TowerEvaluator,
    chart: &WebChart,
    lad: &CurvLadder,
    p: &Point,
    cfg: &JobConfig,
) -> Result<PointEvaluation, CliError> {
    let (_, tower) = evaluator.evaluate_at(chart, lad, p, cfg.mode)?;
    let qs: Vec<QPoly> = tower.q.iter().map(|q| QPoly::new(q.coeffs().to_vec())).collect();
    let radical = radical_at_point_with(&qs, cfg.tol);
    Ok(PointEvaluation { tower, qs, radical })
}

/// A pair of obstructions with a nonzero resultant, trying `(Q₂, Q₆)` first.
pub fn resultant_certificate(qs: &[QPoly]) -> Option<Certificate> {
    let mut pairs = vec![(1, 5)];
    pairs.extend((0..qs.len()).flat_map(|i| (i + 1..qs.len()).map(move |j| (i, j))).filter(|&p| p != (1, 5)));
    pairs.into_iter().find_map(|(i, j)| {
        let r = resultant(&qs[i], &qs[j]).ok()?;
        (!r.is_zero()).then(|| Certificate { pair: [i + 1, j + 1], resultant: num(&r), nonzero: true })
    })
}

fn sample_points(cfg: &JobConfig) -> Vec<Point> {
    SAMPLE_OFFSETS[..cfg.samples]
        .iter()
        .map(|&(a, b, c, d)| {
            let dx = BigRational::new(a.into(), b.into()) * &cfg.radius;
            let dy = BigRational::new(c.into(), d.into()) * &cfg.radius;
            Point::new(&cfg.point.x + dx, &cfg.point.y + dy)
        })
        .collect()
}

/// Relative agreement required of float radical coefficients.
pub const RADICAL_MATCH_TOL: f64 = 1e-6;

/// Equal radicals: exactly when both are exact, otherwise coefficientwise to [`RADICAL_MATCH_TOL`].
pub fn same_radical(a: &QPoly, b: &QPoly) -> bool {
    if a.degree() != b.degree() {
        return false;
    }
    if a.is_exact() && b.is_exact() {
        return a == b;
    }
    a.f64_coeffs()
        .iter()
        .zip(b.f64_coeffs())
        .all(|(x, y)| (x - y).abs() <= RADICAL_MATCH_TOL * x.abs().max(y.abs()).max(1.0))
}

fn neighborhood(evaluator: &TowerEvaluator, lad: &CurvLadder, cfg: &JobConfig, center: &QPoly) -> NeighborhoodStanza {
    let center_degree = center.degree();
    let mut samples = Vec::new();
    let mut constant = true;
    for p in sample_points(cfg) {
        let point = fmt_point(&p);
        let skip = |reason: String| Sample {
            point: point.clone(),
            exact: false,
            radical: None,
            radical_degree: None,
            skipped: Some(reason),
        };
        if let Err(e) = cfg.chart.check_point(&p, cfg.mode) {
            samples.push(skip(e.to_string()));
            continue;
        }
        let sample = match evaluate_point(evaluator, &cfg.chart, lad, &p, cfg) {
            Ok(ev) => match &ev.radical {
                Ok(r) => {
                    constant &= same_radical(r, center);
                    Sample {
                        point: point.clone(),
                        exact: ev.is_exact(),
                        radical: Some(r.to_string()),
                        radical_degree: r.degree(),
                        skipped: None,
                    }
                }
                Err(e) => skip(e.to_string()),
            },
            Err(e) => skip(e.to_string()),
        };
        samples.push(sample);
    }
    let evaluated: Vec<&Sample> = samples.iter().filter(|s| s.skipped.is_none()).collect();
    NeighborhoodStanza {
        radius: fmt_rational(&cfg.radius),
        requested: cfg.samples,
        evaluated: evaluated.len(),
        degree_constant: evaluated.iter().all(|s| s.radical_degree == center_degree),
        radical_constant: constant,
        samples,
    }
}

/// Integrates and optionally verifies one linearization with base `s0` at the point.
pub fn linearize_from(
    lin: &Linearizer,
    cfg: &JobConfig,
    s0: f64,
    seed: SeedStanza,
    check: bool,
) -> (LinStanza, Result<(FieldGrid, LinearizationField), LinError>) {
    let mut stanza = LinStanza {
        base: json_f64(s0),
        grid_h: cfg.grid.h,
        grid_n: cfg.grid.n,
        seed,
        integration: None,
        verification: None,
        error: None,
    };
    let center = cfg.point_f64();
    let spec = GridSpec { h: cfg.grid.h, n: cfg.grid.n };
    let grid = lin.integrate_base(center, s0, spec).and_then(|g| lin.integrate_tz(&g, stanza.seed.t0, stanza.seed.z0));
    let grid = match grid {
        Ok(g) => g,
        Err(e) => {
            stanza.error = Some(e.to_string());
            return (stanza, Err(e));
        }
    };
    stanza.integration = Some(IntegrationStanza {
        fgh_max: grid.max_fgh(),
        s_min: grid.s.iter().copied().fold(f64::INFINITY, f64::min),
        s_max: grid.s.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    });
    let field = assemble_l(&grid);
    if check {
        stanza.verification = Some(VerificationStanza::from(&verify(&grid, &field, cfg.tolerances())));
    }
    (stanza, Ok((grid, field)))
}

fn seed_for(tower: &EvaluatedTower, s0: &NumValue, cfg: &JobConfig) -> SeedStanza {
    match seed_tz(tower, s0, cfg.t0, cfg.z0) {
        Some(seed) => SeedStanza::from(&seed),
        None => SeedStanza::free(cfg.t0, cfg.z0),
    }
}

fn root_as_num(v: &RootValue) -> Option<NumValue> {
    match v {
        RootValue::Rational(q) => Some(NumValue::Exact(q.clone())),
        RootValue::Real(x) => Some(NumValue::Float(*x)),
        RootValue::Complex(_) => None,
    }
}

fn pairwise_inequivalent(fields: &[LinearizationField]) -> bool {
    (0..fields.len()).all(|i| {
        (i + 1..fields.len()).all(|j| !projective_equiv_check(&fields[i], &fields[j], EQUIVALENCE_TOL).equal_base)
    })
}

/// `weblin analyze`: the full pipeline from the web to a verdict.
pub fn cmd_analyze(cfg: &JobConfig) -> Outcome {
    let mut report = Report::new("analyze");
    report.input = Some(echo(cfg));
    let result = analyze(cfg, &mut report);
    Outcome::finish(report, result)
}

fn analyze(cfg: &JobConfig, report: &mut Report) -> Result<i32, CliError> {
    let (stanza, branch) = curvature_stanza(cfg)?;
    report.curvature = Some(stanza);
    match branch {
        Branch::Parallel => analyze_parallel(cfg, report),
        Branch::Singular => {
            report.notes.push(
                "the curvature vanishes at the point but not nearby; the obstruction tower needs nonzero curvature"
                    .into(),
            );
            Outcome::from_verdict(report, Verdict::InconclusiveNumeric)
        }
        Branch::Main => analyze_main(cfg, report),
    }
}

fn analyze_parallel(cfg: &JobConfig, report: &mut Report) -> Result<i32, CliError> {
    let lin = Linearizer::parallel(&cfg.chart, cfg.gauge.clone())?;
    let s0 = cfg.s0.clone().unwrap_or_default();
    let (mut stanza, fields) = linearize_from(&lin, cfg, rational_to_f64(&s0), SeedStanza::free(cfg.t0, cfg.z0), true);
    stanza.base = Value::String(fmt_rational(&s0));
    if let Err(e) = fields {
        report.linearizations.push(stanza);
        return Err(e.into());
    }
    if !stanza.verified() {
        report.notes.push("the sample linearization did not pass verification at this grid".into());
    }
    report.linearizations.push(stanza);
    report.notes.push(
        "curvature vanishes identically: every initial base, together with any initial t and z, integrates to a \
         linearization, and distinct bases are not projectively equivalent"
            .into(),
    );
    Outcome::from_verdict(report, Verdict::Parallelizable)
}

fn analyze_main(cfg: &JobConfig, report: &mut Report) -> Result<i32, CliError> {
    let (tower, tower_stanza) = load_tower(&cfg.cache_dir, false)?;
    report.tower = Some(tower_stanza);
    let evaluator = TowerEvaluator::new(&tower)?;
    let lad = ladder(&cfg.chart, cfg.gauge.clone(), LADDER_ORDER)?;
    let at_p = evaluate_point(&evaluator, &cfg.chart, &lad, &cfg.point, cfg)?;
    let mut obstruction = ObstructionStanza {
        exact: at_p.is_exact(),
        det_degrees: at_p.tower.det_degrees(),
        q_degrees: at_p.tower.q_degrees(),
        radical: None,
        radical_degree: None,
        roots: Vec::new(),
        certificate: None,
    };
    let radical = match &at_p.radical {
        Ok(r) => r.clone(),
        Err(e) => {
            report.notes.push(format!("the radical could not be decided: {e}"));
            report.obstruction = Some(obstruction);
            return Outcome::from_verdict(report, Verdict::InconclusiveNumeric);
        }
    };
    obstruction.radical = Some(radical.to_string());
    obstruction.radical_degree = radical.degree();
    let degree = radical.degree().unwrap_or(0);
    if degree == 0 {
        obstruction.certificate = resultant_certificate(&at_p.qs);
        if obstruction.certificate.is_none() {
            report
                .notes
                .push("no pair of obstructions has a nonzero resultant; the gcd chain alone is constant".into());
        }
        report.obstruction = Some(obstruction);
        report.classes = Some(ClassStanza {
            count: 0,
            bound: CLASS_BOUND,
            within_bound: true,
            radical_degree: 0,
            pairwise_inequivalent: true,
        });
        report.notes.push("the obstructions have no common zero at the point, hence none on a neighborhood".into());
        return Outcome::from_verdict(report, Verdict::NotLinearizable);
    }
    let rts = match roots(&radical) {
        Ok(r) => r,
        Err(e) => {
            report.notes.push(format!("root finding failed: {e}"));
            report.obstruction = Some(obstruction);
            return Outcome::from_verdict(report, Verdict::InconclusiveNumeric);
        }
    };
    obstruction.roots = rts.iter().map(RootEntry::from).collect();
    report.obstruction = Some(obstruction);

    let hood = neighborhood(&evaluator, &lad, cfg, &radical);
    let hood_ok = hood.degree_constant && hood.evaluated > 0;
    report.notes.push(format!(
        "neighborhood claim based on {} of {} sample points within radius {}",
        hood.evaluated,
        hood.requested,
        fmt_rational(&cfg.radius)
    ));
    if !hood.radical_constant && hood.degree_constant {
        report.notes.push("the admissible bases move with the point while their number stays fixed".into());
    }
    report.neighborhood = Some(hood);

    let real: Vec<NumValue> = rts.iter().filter_map(|r| root_as_num(&r.value)).collect();
    let count = real.len();
    if count > CLASS_BOUND {
        return Err(CliError::Internal(format!("{count} linearization classes exceed the bound {CLASS_BOUND}")));
    }
    let lin = Linearizer::new(&cfg.chart, cfg.gauge.clone(), &tower)?;
    let mut fields = Vec::new();
    for s0 in &real {
        let seed = seed_for(&at_p.tower, s0, cfg);
        let (mut stanza, field) = linearize_from(&lin, cfg, s0.to_f64(), seed, true);
        stanza.base = num(s0);
        if let Ok((_, f)) = field {
            fields.push(f);
        }
        report.linearizations.push(stanza);
    }
    let verified = report.linearizations.iter().filter(|l| l.verified()).count();
    let inequivalent = pairwise_inequivalent(&fields);
    report.classes = Some(ClassStanza {
        count,
        bound: CLASS_BOUND,
        within_bound: true,
        radical_degree: degree,
        pairwise_inequivalent: inequivalent,
    });
    if !report.linearizations.is_empty() && report.linearizations.iter().any(|l| !l.seed.determined) {
        report
            .notes
            .push("initial t and z are not fixed by the consistency relations; the configured values were used".into());
    }
    let verdict = if count == 0 {
        report.notes.push("every common zero is complex; no real base exists".into());
        Verdict::NotLinearizable
    } else if !hood_ok {
        report.notes.push("the number of common zeros is not constant on the sampled neighborhood".into());
        Verdict::InconclusiveNumeric
    } else if verified == 0 {
        report.notes.push("no admissible base produced a verified linearization on the grid".into());
        Verdict::InconclusiveNumeric
    } else {
        if verified < count {
            report.notes.push(format!("{} of {count} admissible bases failed verification", count - verified));
        }
        Verdict::Linearizable
    };
    Outcome::from_verdict(report, verdict)
}

/// `weblin integrate` and `weblin verify`: one linearization from a chosen base.
pub fn cmd_integrate(cfg: &JobConfig, check: bool, dump_out: Option<&Path>) -> Outcome {
    let mut report = Report::new(if check { "verify" } else { "integrate" });
    report.input = Some(echo(cfg));
    let result = integrate(cfg, check, dump_out, &mut report);
    Outcome::finish(report, result)
}

fn integrate(cfg: &JobConfig, check: bool, dump_out: Option<&Path>, report: &mut Report) -> Result<i32, CliError> {
    let (stanza, branch) = curvature_stanza(cfg)?;
    report.curvature = Some(stanza);
    let (lin, seed, s0) = match branch {
        Branch::Parallel => {
            let s0 = cfg.s0.clone().unwrap_or_default();
            (Linearizer::parallel(&cfg.chart, cfg.gauge.clone())?, SeedStanza::free(cfg.t0, cfg.z0), s0)
        }
        Branch::Singular => {
            return Err(CliError::Input("the curvature vanishes at the point; choose another point".into()))
        }
        Branch::Main => {
            let s0 = cfg
                .s0
                .clone()
                .ok_or_else(|| CliError::Input("a base value --s0 is required for a curved web".into()))?;
            let (tower, tower_stanza) = load_tower(&cfg.cache_dir, false)?;
            report.tower = Some(tower_stanza);
            let evaluator = TowerEvaluator::new(&tower)?;
            let lad = ladder(&cfg.chart, cfg.gauge.clone(), LADDER_ORDER)?;
            let (_, evaluated) = evaluator.evaluate_at(&cfg.chart, &lad, &cfg.point, cfg.mode)?;
            let seed = seed_for(&evaluated, &NumValue::Exact(s0.clone()), cfg);
            (Linearizer::new(&cfg.chart, cfg.gauge.clone(), &tower)?, seed, s0)
        }
    };
    let center = cfg.point_f64();
    let spec = GridSpec { h: cfg.grid.h, n: cfg.grid.n };
    let grid = lin.integrate_base(center, rational_to_f64(&s0), spec)?;
    let grid = lin.integrate_tz(&grid, seed.t0, seed.z0)?;
    let field = assemble_l(&grid);
    let verification = check.then(|| verify(&grid, &field, cfg.tolerances()));
    if let Some(path) = dump_out {
        std::fs::write(path, dump_grid(&grid, Some(&field), verification.as_ref()))?;
    }
    report.linearizations.push(LinStanza {
        base: Value::String(fmt_rational(&s0)),
        grid_h: cfg.grid.h,
        grid_n: cfg.grid.n,
        seed,
        integration: Some(IntegrationStanza {
            fgh_max: grid.max_fgh(),
            s_min: grid.s.iter().copied().fold(f64::INFINITY, f64::min),
            s_max: grid.s.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }),
        verification: verification.as_ref().map(VerificationStanza::from),
        error: None,
    });
    Ok(match verification {
        Some(v) if !v.passed() => EXIT_INCONCLUSIVE,
        _ => EXIT_DECISIVE,
    })
}
