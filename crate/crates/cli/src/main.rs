//! `semikappa` command-line driver.
//!
//! Exit status: 0 on success, 2 for usage and validation errors (nothing is
//! written), 1 when a run fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use semikappa::experiments::runner::{convergence_study, run_experiment, RunOptions, StepRule};
use semikappa::experiments::{builtin_case, ErrorReport, ExperimentCase};
use semikappa::io::config::{parse_config, RunConfig, SCHEMA};
use semikappa::io::dump::dump_field;
use semikappa::io::table::{emit_stability, emit_table, StabilityRow};
use semikappa::{
    max_amplification, max_amplification_box, sample_field, Dim, Error, KappaChoice, Sampling,
    SchemeFamily, SchemeSpec, SweepPolicy,
};

#[derive(Parser)]
#[command(
    name = "semikappa",
    version,
    about = "Kappa-scheme level-set advection runs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every grid of a config and print one row per grid.
    Run { config: PathBuf },
    /// Run the grid list of a config and add convergence orders.
    Converge { config: PathBuf },
    /// Tabulate max |S| along a Courant path.
    Stability {
        /// Preset: siLW1d, siF1d, siQ1d, fiQ1d, siLW2d, siF2d, siQ2d, ctuQ.
        #[arg(long)]
        scheme: String,
        /// diag, x, y, box, or a direction `dc,dd`.
        #[arg(long, default_value = "diag")]
        ray: String,
        /// Path parameter before the first sample.
        #[arg(long, default_value_t = 0.0)]
        min: f64,
        /// Largest path parameter.
        #[arg(long)]
        max: f64,
        /// Number of samples in (min, max].
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Reproduce a benchmark table.
    Table {
        #[arg(long, value_enum)]
        name: TableName,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a config and write field dumps into its output directory.
    Dump { config: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableName {
    Table1,
    Table2,
    Table3,
    CtuCircle,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load_config(path: &Path) -> Result<RunConfig, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| Failure::Usage(format!("{}: {e}\n\n{SCHEMA}", path.display())))
}

fn case_of(cfg: &RunConfig) -> Result<ExperimentCase, Failure> {
    let case = builtin_case(&cfg.case)?;
    match cfg.m_ref {
        Some(m) => Ok(case.with_reference_grid(m)?),
        None => Ok(case),
    }
}

fn write_or_print(csv: &str, target: Option<&Path>) -> Outcome {
    match target {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
            }
            fs::write(p, csv).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn run(path: &Path, with_orders: bool) -> Outcome {
    let cfg = load_config(path)?;
    let case = case_of(&cfg)?;
    let spec = cfg.scheme()?;
    let reports = if with_orders {
        convergence_study(&case, &spec, &cfg.ms, cfg.steps, cfg.sweeps)?
    } else {
        let options = RunOptions {
            policy: cfg.sweeps,
            store_stride: None,
        };
        cfg.ms
            .iter()
            .map(|&m| Ok(run_experiment(&case, &spec, m, cfg.steps.steps(m)?, &options)?.report))
            .collect::<Result<Vec<_>, Error>>()?
    };
    let name = if with_orders {
        "convergence.csv"
    } else {
        "run.csv"
    };
    let target = cfg.output.as_ref().map(|d| d.join(name));
    write_or_print(&emit_table(&reports), target.as_deref())
}

fn dump(path: &Path) -> Outcome {
    let cfg = load_config(path)?;
    let dir = cfg
        .output
        .clone()
        .ok_or_else(|| Failure::Usage(format!("{}: dump needs output=<dir>", path.display())))?;
    let case = case_of(&cfg)?;
    let spec = cfg.scheme()?;
    fs::create_dir_all(&dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
    for &m in &cfg.ms {
        let n = cfg.steps.steps(m)?;
        let stride = cfg.dump_stride.unwrap_or(n);
        let options = RunOptions {
            policy: cfg.sweeps,
            store_stride: Some(stride),
        };
        let out = run_experiment(&case, &spec, m, n, &options)?;
        for (k, (t, field)) in out.stored.iter().enumerate() {
            let level = if k == 0 { 0 } else { (k * stride).min(n) };
            let exact = match case.exact() {
                Some(u) => {
                    let (u, t) = (u.clone(), *t);
                    Some(sample_field(field.grid(), move |x, y| u(x, y, t))?)
                }
                None => None,
            };
            let stem = dir.join(format!("{}_M{m}_n{level}", case.name));
            for p in dump_field(field, *t, exact.as_ref(), &stem)? {
                eprintln!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}

fn parse_ray(ray: &str) -> Result<Option<(f64, f64)>, Failure> {
    let dir = match ray {
        "diag" => (1.0, 1.0),
        "x" => (1.0, 0.0),
        "y" => (0.0, 1.0),
        "box" => return Ok(None),
        other => {
            let parsed = other
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            match parsed {
                Some((a, b)) if f64::is_finite(a) && f64::is_finite(b) && (a, b) != (0.0, 0.0) => {
                    (a, b)
                }
                _ => {
                    return Err(Failure::Usage(format!(
                        "--ray={other}: expected diag, x, y, box or dc,dd"
                    )))
                }
            }
        }
    };
    Ok(Some(dir))
}

fn stability(scheme: &str, ray: &str, (min, max): (f64, f64), points: usize) -> Outcome {
    let spec = SchemeSpec::preset(scheme).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown scheme {scheme:?}; known: {}",
            SchemeSpec::PRESETS.join(", ")
        ))
    })?;
    let dir = parse_ray(ray)?;
    if !(0.0 <= min && min < max && max.is_finite()) || points == 0 {
        return Err(Failure::Usage(
            "need 0 <= --min < --max and --points at least 1".into(),
        ));
    }
    let sampling = Sampling::default();
    let mut rows = Vec::with_capacity(points);
    for k in 1..=points {
        let s = min + (max - min) * k as f64 / points as f64;
        let (c, d, report) = match dir {
            Some((dc, dd)) => {
                let (c, d) = match spec.dim() {
                    Dim::One => (s * dc, 0.0),
                    Dim::Two => (s * dc, s * dd),
                };
                (c, d, max_amplification(&spec, c, d, &sampling)?)
            }
            None => {
                let r = max_amplification_box(&spec, s, &sampling)?;
                (r.argmax.c, r.argmax.d, r)
            }
        };
        rows.push(StabilityRow { s, c, d, report });
    }
    print!("{}", emit_stability(&rows));
    Ok(())
}

fn si2d(kappa: KappaChoice) -> SchemeSpec {
    SchemeSpec::new(SchemeFamily::SemiImplicit2D, kappa).expect("fixed scheme")
}

fn ctu_k3() -> SchemeSpec {
    SchemeSpec::new(
        SchemeFamily::Ctu { theta: 1.0 },
        KappaChoice::ThirdOrderSemiImplicit,
    )
    .expect("fixed scheme")
}

const KAPPAS: [KappaChoice; 4] = [
    KappaChoice::UpwindSign,
    KappaChoice::DownwindSign,
    KappaChoice::Central,
    KappaChoice::ThirdOrderSemiImplicit,
];

fn table(name: TableName, output: Option<&Path>) -> Outcome {
    let single = SweepPolicy::FixedSweeps(1);
    let five_fourths = StepRule::Ratio { num: 5, den: 4 };
    let coarse = [40, 80, 160];
    let mut reports: Vec<ErrorReport> = Vec::new();
    match name {
        TableName::Table1 => {
            for case in ["rotation_euclid", "rotation_maxdist"] {
                let case = builtin_case(case)?;
                for k in KAPPAS {
                    reports.extend(convergence_study(
                        &case,
                        &si2d(k),
                        &coarse,
                        five_fourths,
                        single,
                    )?);
                }
            }
        }
        TableName::Table2 => {
            let case = builtin_case("exp_velocity")?;
            let rules = [
                StepRule::Ratio { num: 1, den: 1 },
                StepRule::Ratio { num: 1, den: 10 },
            ];
            let schemes = KAPPAS[..3].iter().map(|&k| si2d(k)).chain([ctu_k3()]);
            for spec in schemes {
                for rule in rules {
                    reports.extend(convergence_study(&case, &spec, &coarse, rule, single)?);
                }
            }
        }
        TableName::Table3 => {
            let zalesak = builtin_case("zalesak")?;
            for k in KAPPAS {
                reports.extend(convergence_study(
                    &zalesak,
                    &si2d(k),
                    &coarse,
                    five_fourths,
                    single,
                )?);
            }
            let vortex = builtin_case("vortex")?;
            let spec = si2d(KappaChoice::ThirdOrderSemiImplicit);
            reports.extend(convergence_study(
                &vortex,
                &spec,
                &[80, 160, 320],
                five_fourths,
                single,
            )?);
        }
        TableName::CtuCircle => {
            let case = builtin_case("rotation_euclid")?;
            for n in [25, 50, 100, 200] {
                let sweeps = if n == 25 { 2 } else { 1 };
                let options = RunOptions {
                    policy: SweepPolicy::FixedSweeps(sweeps),
                    store_stride: None,
                };
                reports.push(run_experiment(&case, &ctu_k3(), 80, n, &options)?.report);
            }
        }
    }
    write_or_print(&emit_table(&reports), output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config } => run(&config, false),
        Command::Converge { config } => run(&config, true),
        Command::Stability {
            scheme,
            ray,
            min,
            max,
            points,
        } => stability(&scheme, &ray, (min, max), points),
        Command::Table { name, output } => table(name, output.as_deref()),
        Command::Dump { config } => dump(&config),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
