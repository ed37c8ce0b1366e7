//! Acceptance criteria. Run with `cargo test --test acceptance`; prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use epirisk::applications::{
    contagion_frame, contagion_scenario, flood_grid, liquidity_frame, lognormal_var_es, model_risk_grid,
    two_world_catalog, FloodParams, LognormalModelState, ModelRiskParams, RegionGrid, RegionLabel,
};
use epirisk::governance::{typed_reach_check, AuditRegister, AuditStatus, Diagnostic, DiagnosticKind, DiagnosticRecord};
use epirisk::modal::statuses;
use epirisk::properties::{
    self, check_package_laws, random_frame, random_proposition, run_suite, FrameShape, Principle, Suite, SuiteConfig,
};
use epirisk::{AlgebraPackage, Degree, Proposition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

const G: AlgebraPackage = AlgebraPackage::GODEL;

const LIQUIDITY_TOL: f64 = 1e-9;
const LIQUIDITY_BUDGET: Duration = Duration::from_millis(1);
const MODEL_RISK_BUDGET: Duration = Duration::from_secs(10);
const MC_DRAWS: usize = 10_000_000;
const MC_REL_TOL: f64 = 0.01;
const MC_BUDGET: Duration = Duration::from_secs(30);
const SUITE_TOL: f64 = 1e-9;
const SUITE_MIN_FRAMES: usize = 1000;
const SUITE_BUDGET: Duration = Duration::from_secs(60);
const REGISTER_SEQUENCES: usize = 10_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type TableRule = (&'static str, fn(f64, f64) -> [f64; 3]);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_liquidity() -> Outcome {
    let start = Instant::now();
    let f = liquidity_frame();
    let s = statuses(&f, "K", f.proposition("r").map_err(|e| e.to_string())?, G).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let got = [s.box_.values()[0], s.diamond.values()[0], s.dual.values()[0], s.hesitation.values()[0]];
    let want = [0.0, 0.6, 0.9, 0.9];
    for (g, w) in got.iter().zip(want) {
        ensure((g - w).abs() <= LIQUIDITY_TOL, format!("got {got:?}, want {want:?}"))?;
    }
    ensure(elapsed < LIQUIDITY_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("(Kr, ◇r, K̄r, H) = {got:?} in {elapsed:?}"))
}

fn c2_two_world() -> Outcome {
    let cat = two_world_catalog(G, None).map_err(|e| e.to_string())?;
    // Rows at w0 as the tables state them, in terms of (p0, p1).
    let rules: [TableRule; 4] = [
        ("{}", |_, _| [1.0, 0.0, 0.0]),
        ("{w0}", |a, _| [a, a, a]),
        ("{w1}", |_, b| [b, b, b]),
        ("{w0,w1}", |a, b| [a.min(b), a.max(b), a.max(b)]),
    ];
    let mut n = 0;
    for row in &cat.evidence_sets {
        let rule = rules.iter().find(|(s, _)| *s == row.evidence).ok_or("unknown evidence set")?.1;
        let want = rule(row.p0, row.p1);
        ensure([row.box_, row.diamond, row.dual] == want, format!("{} {:?}", row.evidence, row))?;
        n += 1;
    }
    ensure(n == 16, format!("{n} evidence rows"))?;
    let want = [
        (0.0, 0.0, 0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0, 1.0, 1.0),
        (0.0, 1.0, 0.0, 1.0, 0.0),
        (1.0, 1.0, 1.0, 1.0, 0.0),
    ];
    let got: Vec<_> = cat.assurance.iter().map(|r| (r.p0, r.p1, r.kp, r.dia_kp, r.moore)).collect();
    ensure(got == want, format!("assurance rows {got:?}"))?;
    let b = &cat.es_breach;
    ensure((b.p0, b.p1, b.kp, b.dia_kp, b.moore) == (1.0, 0.0, 0.0, 1.0, 1.0), format!("breach {b:?}"))?;
    let c = &cat.cascade;
    ensure((c.bq, c.dia_bq, c.dual_bq) == (1.0, 1.0, 1.0), format!("cascade {c:?}"))?;
    let kd45: Vec<bool> = cat.kd45_frames.iter().map(|r| r.profile.reflexive).collect();
    ensure(kd45 == [false, false, true, true], format!("kd45 factive column {kd45:?}"))?;
    Ok("16 evidence rows, 4 assurance rows, breach (0,1,1), cascade (1,1,1)".into())
}

fn c3_contagion() -> Outcome {
    let r = contagion_scenario(G).map_err(|e| e.to_string())?;
    ensure(r.bp_w0 == 1.0 && r.p_w0 == 0.0, format!("{r:?}"))?;
    let laws = check_package_laws(&contagion_frame(), "B", G).map_err(|e| e.to_string())?;
    let fact = laws.iter().find(|l| l.principle == Principle::Factivity).ok_or("no factivity report")?;
    let w = fact.witness.as_ref().ok_or("no witness")?;
    ensure(!fact.holds && w.gap == 1.0 && w.world == "w0", format!("{fact:?}"))?;
    Ok(format!("Bp(w0)=1, p(w0)=0, witness {} at {} gap {}", w.proposition, w.world, w.gap))
}

fn nesting_and_counts(grid: &RegionGrid) -> Result<[usize; 4], String> {
    ensure(grid.is_nested(), "Kp ⊆ p ⊆ ◇p violated")?;
    let counts = RegionLabel::ALL.map(|l| grid.count(l));
    ensure(counts.iter().sum::<usize>() == grid.len(), "labels do not partition")?;
    Ok(counts)
}

fn c4_model_risk() -> Outcome {
    let params = ModelRiskParams::default();
    ensure(
        (params.alpha, params.c, params.beta_mu, params.beta_sigma, params.steps) == (0.99, 100.0, 0.10, 0.045, 201),
        "unexpected defaults",
    )?;
    let start = Instant::now();
    let grid = model_risk_grid(&params).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let counts = nesting_and_counts(&grid)?;
    ensure(counts.iter().all(|&c| c > 0), format!("empty label in {counts:?}"))?;
    ensure(elapsed < MODEL_RISK_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("robust/moore/possible_only/excluded = {counts:?} in {elapsed:?}"))
}

fn c5_lognormal() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (i, &(mu, sigma, alpha)) in [(0.0, 1.0, 0.99), (0.5, 0.5, 0.95), (1.0, 0.3, 0.99)].iter().enumerate() {
        let closed = lognormal_var_es(LognormalModelState::new(mu, sigma).map_err(|e| e.to_string())?, alpha)
            .map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        let dist = LogNormal::new(mu, sigma).map_err(|e| e.to_string())?;
        let mut draws: Vec<f64> = (0..MC_DRAWS).map(|_| dist.sample(&mut rng)).collect();
        let k = (alpha * MC_DRAWS as f64).ceil() as usize;
        let (_, var, tail) = draws.select_nth_unstable_by(k, f64::total_cmp);
        let var = *var;
        let es = (tail.iter().sum::<f64>() + var) / (tail.len() + 1) as f64;
        let rv = (closed.var - var).abs() / var;
        let re = (closed.es - es).abs() / es;
        worst = worst.max(rv).max(re);
        ensure(
            rv <= MC_REL_TOL && re <= MC_REL_TOL,
            format!("({mu},{sigma},{alpha}): closed {closed:?} vs MC var {var} es {es}"),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < MC_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("max relative error {worst:.2e} over 3 cases in {elapsed:?}"))
}

fn c6_flood() -> Outcome {
    let grid = flood_grid(&FloodParams::default()).map_err(|e| e.to_string())?;
    nesting_and_counts(&grid)?;
    let (kp, a, dia) = (
        grid.kp.values().iter().filter(|&&v| v == 1.0).count(),
        grid.p.values().iter().filter(|&&v| v == 1.0).count(),
        grid.dia.values().iter().filter(|&&v| v == 1.0).count(),
    );
    ensure(0 < kp && kp < a && a < dia && dia < grid.len(), format!("|Kp|={kp} |A|={a} |◇p|={dia}"))?;
    for w in 0..grid.len() {
        if grid.kp.values()[w] == 1.0 {
            ensure(grid.rho.values()[w] == 1.0, format!("Kp=1 but ρ={} at {w}", grid.rho.values()[w]))?;
        }
    }
    let mut bands = Vec::new();
    for beta in [0.04, 0.08, 0.16] {
        let g = flood_grid(&FloodParams { beta, ..Default::default() }).map_err(|e| e.to_string())?;
        bands.push(g.hesitation_count());
    }
    ensure(bands.windows(2).all(|w| w[0] <= w[1]), format!("hesitation {bands:?}"))?;
    Ok(format!("|Kp|={kp} < |A|={a} < |◇p|={dia}; hesitation over β {bands:?}"))
}

fn c7_suite() -> Outcome {
    let start = Instant::now();
    let report = run_suite(Suite::All, SuiteConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let gates = [
        "factivity",
        "introspection",
        "crisp_reduction",
        "crisp_duality",
        "bottom_preservation",
        "conjunction_separation",
        "thm_belief_internal",
        "thm_factive_pressure",
        "cor_moore",
        "cor_conflict",
        "thm_belief_reach",
        "cor_collapse",
        "cor_belief_collapse",
    ];
    let mut checked = 0;
    for gate in gates {
        for pkg in AlgebraPackage::all() {
            let e = report.entry(gate, Some(pkg.name())).ok_or(format!("missing {gate}/{}", pkg.name()))?;
            ensure(
                e.satisfied && e.max_violation <= SUITE_TOL && e.frames_checked >= SUITE_MIN_FRAMES,
                format!("{gate}/{}: {e:?}", pkg.name()),
            )?;
            checked += e.frames_checked;
        }
    }
    ensure(report.all_satisfied(), "some entry unsatisfied")?;
    ensure(elapsed < SUITE_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("{} gates × 3 packages, {checked} frames, zero violations in {elapsed:?}", gates.len()))
}

fn c8_aggregated() -> Outcome {
    let reports = properties::aggregated_counterexamples().map_err(|e| e.to_string())?;
    let by_id: BTreeMap<&str, _> = reports.iter().map(|r| (r.bound_id.name(), r)).collect();
    let fact = by_id.get("agg_factivity").ok_or("missing agg_factivity")?;
    // ½(1⇒0) + ½(1⇒1) under Gödel, against p(w0) = 0.
    let half = 0.5 * 0.0 + 0.5 * 1.0;
    ensure(fact.value == Some(half) && fact.rhs.values()[0] == 0.0, format!("{fact:?}"))?;
    let ne = by_id.get("agg_non_exclusion").ok_or("missing agg_non_exclusion")?;
    ensure(ne.value == Some(0.0) && ne.rhs.values()[0] > 0.0, format!("{ne:?}"))?;
    let lot = by_id.get("agg_conjunction_closure").ok_or("missing agg_conjunction_closure")?;
    let worst = lot.value.ok_or("no lottery value")?;
    ensure(lot.satisfied && (worst - 1.0 / 3.0).abs() < 1e-12 && worst < 2.0 / 3.0, format!("{lot:?}"))?;
    Ok(format!("M^agg = {half}, ◇^agg = 0 vs ◇ = {}, lottery pair {worst:.4} < 2/3", ne.rhs.values()[0]))
}

fn c9_governance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let kinds = [DiagnosticKind::Moore, DiagnosticKind::Anti, DiagnosticKind::Conf];
    let statuses = [
        AuditStatus::Open,
        AuditStatus::Reviewed,
        AuditStatus::Escalated,
        AuditStatus::ClosedWithJustification,
    ];
    let mut ops = 0usize;
    for _ in 0..REGISTER_SEQUENCES {
        let mut reg = AuditRegister::new();
        let len = rng.random_range(1..30);
        for _ in 0..len {
            let key = Diagnostic::new(kinds[rng.random_range(0..3)].clone(), "p", &["K"])
                .at(format!("w{}", rng.random_range(0..3)));
            let before: BTreeMap<_, _> = reg.items().map(|i| (i.key.clone(), (i.history.len(), i.degree))).collect();
            if rng.random_bool(0.6) {
                let d = if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>() };
                reg.record(&DiagnosticRecord { key, degree: Degree::new(d).map_err(|e| e.to_string())? });
            } else {
                let s = statuses[rng.random_range(0..4)];
                let j = rng.random_bool(0.5).then(|| "documented".to_string());
                let _ = reg.set_status(&key, s, j);
            }
            ops += 1;
            for (k, (hist, degree)) in &before {
                let item = reg.get(k).ok_or(format!("{k} disappeared"))?;
                ensure(item.history.len() >= *hist && item.degree >= *degree, format!("{k} shrank"))?;
            }
        }
        let replayed = AuditRegister::from_ndjson(reg.to_ndjson().as_bytes()).map_err(|e| e.to_string())?;
        ensure(replayed == reg, "replay differs")?;
        ensure(
            replayed.items().zip(reg.items()).all(|(a, b)| a.degree.to_bits() == b.degree.to_bits()),
            "replayed degree bits differ",
        )?;
    }

    let mut frames = 0;
    for shape in [FrameShape::Any, FrameShape::Reflexive, FrameShape::Kd45, FrameShape::Crisp] {
        for _ in 0..250 {
            let f = random_frame(&mut rng, shape, G);
            let risk: Vec<(String, Proposition)> =
                (0..3).map(|i| (format!("r{i}"), random_proposition(&mut rng, f.len()))).collect();
            let mut reg = AuditRegister::new();
            let report = typed_reach_check(&f, properties::GENERATED_STANDARD, "A", &risk, &mut reg, G)
                .map_err(|e| e.to_string())?;
            ensure(!report.has_box_over_moore(), "stance obligation over a Moorean diagnostic")?;
            ensure(report.entries.iter().all(|e| e.reach1_holds), "Reach₁ failed under identity audit")?;
            frames += 1;
        }
    }
    Ok(format!("{REGISTER_SEQUENCES} sequences ({ops} ops) append-only with exact replay; {frames} reach reports clean"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("fuzzy liquidity row", c1_liquidity),
        ("crisp two-world catalog", c2_two_world),
        ("contagion non-factivity", c3_contagion),
        ("model-risk regions", c4_model_risk),
        ("lognormal VaR/ES vs Monte Carlo", c5_lognormal),
        ("flood geometry", c6_flood),
        ("theorem suite", c7_suite),
        ("aggregated counterexamples", c8_aggregated),
        ("governance layer", c9_governance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
