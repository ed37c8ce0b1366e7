use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use epirisk::applications::{self, FloodParams, ModelRiskParams, RegionGrid, RegionLabel};
use epirisk::formula::{self, evaluate};
use epirisk::frame::{classify_frame, frame_from_json, Frame};
use epirisk::governance::{apply_rule, AuditRegister, Diagnostic, DiagnosticRecord, GovernanceThresholds};
use epirisk::modal::{self, RefinementKind};
use epirisk::properties::{self, Suite, SuiteConfig};
use epirisk::{AlgebraPackage, Degree, Error};

#[derive(Parser)]
#[command(name = "epirisk", version, about = "Graded epistemic modal operators for risk governance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a frame file.
    Eval {
        frame: PathBuf,
        formula: String,
        #[arg(long)]
        world: Option<String>,
        #[arg(long, default_value = "godel")]
        package: AlgebraPackage,
    },
    /// Reproduce a worked example.
    Example {
        #[command(subcommand)]
        which: ExampleCmd,
    },
    /// Run a seeded property suite and print a JSON report.
    Check {
        suite: SuiteArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = properties::DEFAULT_FRAMES_PER_GATE)]
        frames: usize,
        /// Check package laws on this frame instead of generated ones.
        #[arg(long, requires = "standard")]
        frame: Option<PathBuf>,
        #[arg(long)]
        standard: Option<String>,
        #[arg(long, default_value = "godel")]
        package: AlgebraPackage,
    },
    /// Apply the threshold rule per world and log audit items.
    Govern {
        frame: PathBuf,
        #[arg(long)]
        prop: String,
        #[arg(long)]
        standard: String,
        /// Second standard for the evidence-relative diagnostics.
        #[arg(long)]
        evidence: Option<String>,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long)]
        register: PathBuf,
        #[arg(long, default_value = "godel")]
        package: AlgebraPackage,
    },
    /// Validate a frame file and print its structural profile.
    FrameValidate {
        frame: PathBuf,
        #[arg(long, default_value = "godel")]
        package: AlgebraPackage,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Laws,
    Factive,
    Belief,
    Aggregated,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Laws => Suite::Laws,
            SuiteArg::Factive => Suite::Factive,
            SuiteArg::Belief => Suite::Belief,
            SuiteArg::Aggregated => Suite::Aggregated,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 0.5)]
    iota: f64,
}

impl ThresholdArgs {
    fn build(&self) -> Result<GovernanceThresholds, Error> {
        Ok(GovernanceThresholds {
            alpha: Degree::new(self.alpha)?,
            beta: Degree::new(self.beta)?,
            eta: Degree::new(self.eta)?,
            delta: Degree::new(self.delta)?,
            iota: Degree::new(self.iota)?,
        })
    }
}

#[derive(Subcommand)]
enum ExampleCmd {
    /// Crisp two-world tables, optionally with a fuzzy relation.
    TwoWorld {
        #[arg(long, default_value = "godel")]
        package: AlgebraPackage,
        /// Fuzzy relation entries `a,b,c,d` for `[[a,b],[c,d]]`.
        #[arg(long, value_delimiter = ',', requires = "degrees")]
        fuzzy: Option<Vec<f64>>,
        /// Proposition degrees `p0,p1` for the fuzzy case.
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lognormal expected-shortfall breach regions.
    ModelRisk {
        #[arg(long, default_value_t = 0.99)]
        alpha: f64,
        #[arg(long, default_value_t = 100.0)]
        c: f64,
        #[arg(long, default_value_t = 0.10)]
        beta_mu: f64,
        #[arg(long, default_value_t = 0.045)]
        beta_sigma: f64,
        #[arg(long, default_value_t = 1.5)]
        mu_lo: f64,
        #[arg(long, default_value_t = 4.5)]
        mu_hi: f64,
        #[arg(long, default_value_t = 0.2)]
        sigma_lo: f64,
        #[arg(long, default_value_t = 1.2)]
        sigma_hi: f64,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flood regions and probability quadrants.
    Flood {
        #[arg(long, default_value_t = 0.8)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        a_x: f64,
        #[arg(long, default_value_t = 1.0)]
        a_y: f64,
        #[arg(long, default_value_t = 0.08)]
        beta: f64,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[arg(long, default_value_t = 0.8)]
        rho_high: f64,
        #[arg(long, default_value_t = 0.2)]
        rho_low: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Three-bank contagion scenario.
    Contagion {
        #[arg(long, default_value = "godel")]
        package: AlgebraPackage,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => Failure::Usage(p.to_string()),
            other => Failure::Domain(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.into())
    }
}

type CliResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Eval {
            frame,
            formula,
            world,
            package,
        } => cmd_eval(&frame, &formula, world.as_deref(), package),
        Command::Example { which } => cmd_example(which),
        Command::Check {
            suite,
            seed,
            frames,
            frame,
            standard,
            package,
        } => match (frame, standard) {
            (Some(path), Some(std)) => cmd_check_frame(&path, &std, package),
            _ => cmd_check(suite.into(), seed, frames),
        },
        Command::Govern {
            frame,
            prop,
            standard,
            evidence,
            thresholds,
            register,
            package,
        } => cmd_govern(&frame, &prop, &standard, evidence.as_deref(), &thresholds, &register, package),
        Command::FrameValidate { frame, package } => cmd_frame_validate(&frame, package),
    }
}

fn load_frame(path: &Path) -> Result<Frame, Failure> {
    let text = std::fs::read_to_string(path)?;
    Ok(frame_from_json(&text)?)
}

fn cmd_eval(path: &Path, text: &str, world: Option<&str>, pkg: AlgebraPackage) -> CliResult {
    let f = formula::parse(text).map_err(|e| Failure::Usage(e.to_string()))?;
    let frame = load_frame(path)?;
    let value = evaluate(&f, &frame, pkg)?;
    match world {
        Some(name) => {
            let w = frame.world_index(name)?;
            println!("{:.6}", value.values()[w]);
        }
        None => {
            for (w, v) in value.values().iter().enumerate() {
                println!("{}: {v:.6}", frame.world_name(w));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(suite: Suite, seed: u64, frames: usize) -> CliResult {
    let cfg = SuiteConfig {
        seed,
        frames_per_gate: frames,
        ..SuiteConfig::default()
    };
    let report = properties::run_suite(suite, cfg)?;
    println!("{}", serde_json::to_string_pretty(&report).map_err(Error::from)?);
    Ok(exit_if(report.all_satisfied()))
}

fn cmd_check_frame(path: &Path, std: &str, pkg: AlgebraPackage) -> CliResult {
    let frame = load_frame(path)?;
    let reports = properties::check_package_laws(&frame, std, pkg)?;
    println!("{}", serde_json::to_string_pretty(&reports).map_err(Error::from)?);
    Ok(exit_if(reports.iter().all(|r| !r.is_violation())))
}

fn exit_if(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_govern(
    path: &Path,
    prop: &str,
    std: &str,
    evidence: Option<&str>,
    th: &ThresholdArgs,
    register: &Path,
    pkg: AlgebraPackage,
) -> CliResult {
    let th = th.build()?;
    let frame = load_frame(path)?;
    let p = frame.proposition(prop)?;
    let bundle = modal::statuses(&frame, std, p, pkg)?;

    let mut kinds = vec![RefinementKind::moore(std), RefinementKind::anti(std)];
    if let Some(e) = evidence {
        kinds.push(RefinementKind::unsup(e, std)?);
        kinds.push(RefinementKind::conf(e, std)?);
    }
    let mut diagnostics = Vec::new();
    for kind in &kinds {
        diagnostics.push((Diagnostic::refinement(kind, prop), modal::refine(&frame, p, kind, pkg)?));
    }
    let moore = &diagnostics[0].1;

    let mut reg = AuditRegister::load(register)?;
    let persisted = reg.events().len();
    for w in 0..frame.len() {
        let actions = apply_rule(&bundle, moore.get(w), &th, w);
        println!("{}: {actions}", frame.world_name(w));
        for (diag, values) in &diagnostics {
            let degree = values.get(w);
            if degree.value() >= th.delta.value() && degree.value() > 0.0 {
                reg.record(&DiagnosticRecord {
                    key: diag.at(frame.world_name(w)),
                    degree,
                });
            }
        }
    }
    let appended = reg.append_new_events(register, persisted)?;
    eprintln!("register: {} items, {appended} new events", reg.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_frame_validate(path: &Path, pkg: AlgebraPackage) -> CliResult {
    let frame = load_frame(path)?;
    println!("worlds: {}", frame.worlds().join(", "));
    let props: Vec<&str> = frame.propositions().keys().map(String::as_str).collect();
    println!("propositions: {}", if props.is_empty() { "none".into() } else { props.join(", ") });
    let standards: Vec<String> = frame.standards().map(str::to_string).collect();
    for std in standards {
        let profile = classify_frame(&frame, &std, pkg)?;
        let rows: Vec<String> = profile
            .package_rows()
            .iter()
            .map(|r| serde_json::to_value(r).map(|v| v.as_str().unwrap_or_default().to_string()))
            .collect::<Result<_, _>>()
            .map_err(Error::from)?;
        println!(
            "{std}: {} rows=[{}]",
            serde_json::to_string(&profile).map_err(Error::from)?,
            rows.join(", ")
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Failure> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_grid(grid: &RegionGrid, dir: &Path, stem: &str) -> Result<(), Failure> {
    let mut csv = create(dir, &format!("{stem}.csv"))?;
    grid.write_csv(&mut csv)?;
    csv.flush()?;
    let mut pgm = create(dir, &format!("{stem}.pgm"))?;
    grid.write_pgm(&mut pgm)?;
    pgm.flush()?;
    Ok(())
}

fn print_label_counts(grid: &RegionGrid) {
    for label in RegionLabel::ALL {
        println!("{}: {}", label.name(), grid.count(label));
    }
    println!("hesitation: {}", grid.hesitation_count());
}

fn cmd_example(which: ExampleCmd) -> CliResult {
    match which {
        ExampleCmd::TwoWorld {
            package,
            fuzzy,
            degrees,
            out,
        } => {
            let fuzzy = match (fuzzy, degrees) {
                (Some(g), Some(d)) if g.len() == 4 && d.len() == 2 => {
                    Some(([[g[0], g[1]], [g[2], g[3]]], [d[0], d[1]]))
                }
                (Some(_), _) => return Err(Failure::Usage("--fuzzy takes a,b,c,d and --degrees takes p0,p1".into())),
                _ => None,
            };
            let cat = applications::two_world_catalog(package, fuzzy)?;
            println!("evidence p0 p1 Mp Dia Dual");
            for r in &cat.evidence_sets {
                println!("{} {} {} {:.6} {:.6} {:.6}", r.evidence, r.p0, r.p1, r.box_, r.diamond, r.dual);
            }
            println!("p0 p1 Kp DiaKp moore");
            for r in &cat.assurance {
                println!("{} {} {:.6} {:.6} {:.6}", r.p0, r.p1, r.kp, r.dia_kp, r.moore);
            }
            let b = &cat.es_breach;
            println!("es_breach Kp={:.6} DiaKp={:.6} moore={:.6}", b.kp, b.dia_kp, b.moore);
            let c = &cat.cascade;
            println!("cascade Bq={:.6} DiaBq={:.6} DualBq={:.6}", c.bq, c.dia_bq, c.dual_bq);
            for r in cat.s5_frames.iter().chain(&cat.kd45_frames) {
                println!("frame {} {} {} factive={}", r.name, r.evidence[0], r.evidence[1], r.profile.reflexive);
            }
            let liq = applications::liquidity_frame();
            let s = modal::statuses(&liq, "K", liq.proposition("r")?, package)?;
            println!(
                "liquidity w0 Kr={:.6} DiaKr={:.6} DualKr={:.6} H={:.6}",
                s.box_.values()[0],
                s.diamond.values()[0],
                s.dual.values()[0],
                s.hesitation.values()[0]
            );
            if let Some(fz) = &cat.fuzzy {
                for w in 0..2 {
                    println!(
                        "fuzzy w{w} Mp={:.6} Dia={:.6} Dual={:.6} H={:.6} moore={:.6} anti={:.6} I={:.6}",
                        fz.box_[w], fz.diamond[w], fz.dual[w], fz.hesitation[w], fz.moore[w], fz.anti[w], fz.inconsistency[w]
                    );
                }
            }
            if let Some(dir) = out {
                let mut f = create(&dir, "two_world_evidence.csv")?;
                writeln!(f, "evidence,p0,p1,Mp,DiaMp,DualMp")?;
                for r in &cat.evidence_sets {
                    writeln!(f, "\"{}\",{},{},{:.6},{:.6},{:.6}", r.evidence, r.p0, r.p1, r.box_, r.diamond, r.dual)?;
                }
                f.flush()?;
                let mut f = create(&dir, "two_world_assurance.csv")?;
                writeln!(f, "p0,p1,Kp,DiaKp,moore")?;
                for r in cat.assurance.iter().chain(std::iter::once(&cat.es_breach)) {
                    writeln!(f, "{},{},{:.6},{:.6},{:.6}", r.p0, r.p1, r.kp, r.dia_kp, r.moore)?;
                }
                f.flush()?;
            }
        }
        ExampleCmd::ModelRisk {
            alpha,
            c,
            beta_mu,
            beta_sigma,
            mu_lo,
            mu_hi,
            sigma_lo,
            sigma_hi,
            steps,
            out,
        } => {
            let params = ModelRiskParams {
                alpha,
                c,
                beta_mu,
                beta_sigma,
                mu_axis: (mu_lo, mu_hi),
                sigma_axis: (sigma_lo, sigma_hi),
                steps,
            };
            let grid = applications::model_risk_grid(&params)?;
            print_label_counts(&grid);
            if let Some(dir) = out {
                write_grid(&grid, &dir, "model_risk")?;
            }
        }
        ExampleCmd::Flood {
            c,
            a_x,
            a_y,
            beta,
            steps,
            rho_high,
            rho_low,
            out,
        } => {
            let grid = applications::flood_grid(&FloodParams {
                c,
                a_x,
                a_y,
                beta,
                steps,
            })?;
            let quads = applications::flood_quadrants(&grid, rho_high, rho_low)?;
            print_label_counts(&grid);
            let mut counts = std::collections::BTreeMap::new();
            for q in &quads {
                *counts.entry(q.quadrant.name()).or_insert(0usize) += 1;
            }
            for (name, n) in counts {
                println!("{name}: {n}");
            }
            if let Some(dir) = out {
                write_grid(&grid, &dir, "flood")?;
                let mut f = create(&dir, "flood_quadrants.csv")?;
                writeln!(f, "x,y,Kp,DiaKp,rho,quadrant,action")?;
                for (w, q) in quads.iter().enumerate() {
                    let (x, y) = grid.coords(w);
                    let action = serde_json::to_value(q.action).map_err(Error::from)?;
                    writeln!(
                        f,
                        "{x:.6},{y:.6},{},{},{:.6},{},{}",
                        u8::from(q.modal),
                        u8::from(q.possible),
                        q.local_prob,
                        q.quadrant.name(),
                        action.as_str().unwrap_or_default()
                    )?;
                }
                f.flush()?;
            }
        }
        ExampleCmd::Contagion { package } => {
            let r = applications::contagion_scenario(package)?;
            println!("Bp(w0)={} p(w0)={} nonfactive={}", r.bp_w0, r.p_w0, r.nonfactive);
            println!("with w0 in its evidence set: Bp(w0)={}", r.bp_w0_with_actual);
        }
    }
    Ok(ExitCode::SUCCESS)
}
