//! Command-line surface: every computation and verification as a
//! scriptable run emitting CSV or JSON.
//!
//! Exit codes: 0 success, 1 validation error, 2 verification failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::{BigInt, ToPrimitive};
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;
use tasep::closed::{classify, energy_band, entropy, maximizer, pressure, MaximizerFamily};
use tasep::curve::{Curve, Value};
use tasep::exact;
use tasep::oracle;
use tasep::params::{Direction, Params};
use tasep::report;
use tasep::sim::{self, SimConfig};

#[derive(Parser)]
#[command(name = "tasep", version, about = "Entropy and pressure of the boundary-driven TASEP stationary state", disable_help_subcommand = true)]
struct Cli {
    /// Worker threads (default: available cores; env TASEP_THREADS wins)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (default: stdout)
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Competitive,
    Cooperative,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Direction {
        match d {
            Dir::Competitive => Direction::Competitive,
            Dir::Cooperative => Direction::Cooperative,
        }
    }
}

/// Reservoir density, decimal ("0.25") or exact rational ("1/4").
#[derive(Clone)]
struct Density {
    value: f64,
    exact: Option<BigRational>,
}

impl FromStr for Density {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad numerator: {e}"))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad denominator: {e}"))?;
            if q == BigInt::from(0) {
                return Err("zero denominator".into());
            }
            let r = BigRational::new(p, q);
            let value = r.to_f64().ok_or("rational out of range")?;
            Ok(Density { value, exact: Some(r) })
        } else {
            let value: f64 = s.parse().map_err(|e| format!("bad decimal: {e}"))?;
            Ok(Density { value, exact: None })
        }
    }
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Driving direction
    #[arg(long, value_enum)]
    dir: Dir,
    /// Left reservoir density rho- (decimal or "p/q")
    #[arg(long = "rho-", visible_alias = "rho-minus", allow_hyphen_values = false)]
    rho_minus: Density,
    /// Right reservoir density rho+ (decimal or "p/q")
    #[arg(long = "rho+", visible_alias = "rho-plus")]
    rho_plus: Density,
}

impl ParamArgs {
    fn params(&self) -> Result<Params, String> {
        Params::new(self.rho_minus.value, self.rho_plus.value, self.dir.into())
            .map_err(|e| format!("--rho-/--rho+: {e}"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entropy S(E) sampled over the energy band
    Entropy {
        #[command(flatten)]
        p: ParamArgs,
        /// Number of grid points
        #[arg(long = "e-grid", default_value_t = 200)]
        e_grid: usize,
    },
    /// Pressure P(theta) over a theta grid
    Pressure {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long = "theta-min", default_value_t = -3.0, allow_hyphen_values = true)]
        theta_min: f64,
        #[arg(long = "theta-max", default_value_t = 3.0, allow_hyphen_values = true)]
        theta_max: f64,
        #[arg(long = "theta-grid", default_value_t = 200)]
        theta_grid: usize,
    },
    /// Energy band [E_min, E_max] of the finite-entropy region
    Band {
        #[command(flatten)]
        p: ParamArgs,
    },
    /// Phase classification and stationary quantities
    Phase {
        #[command(flatten)]
        p: ParamArgs,
    },
    /// Entropy-maximizing density profile at one energy
    Maximizer {
        #[command(flatten)]
        p: ParamArgs,
        /// Energy E inside the band
        #[arg(long, allow_hyphen_values = true)]
        energy: f64,
    },
    /// Variational oracle for S(E) against the closed form
    OracleEntropy {
        #[command(flatten)]
        p: ParamArgs,
        /// Number of band-interior energies
        #[arg(long = "e-grid", default_value_t = 20)]
        e_grid: usize,
    },
    /// Variational oracle for the energy band against the closed form
    OracleBand {
        #[command(flatten)]
        p: ParamArgs,
    },
    /// Numerical Legendre transform of S against closed-form P
    LegendreCheck {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long = "theta-min", default_value_t = -3.0, allow_hyphen_values = true)]
        theta_min: f64,
        #[arg(long = "theta-max", default_value_t = 3.0, allow_hyphen_values = true)]
        theta_max: f64,
        #[arg(long = "theta-grid", default_value_t = 121)]
        theta_grid: usize,
        #[arg(long = "e-grid", default_value_t = 10_000)]
        e_grid: usize,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// Exact matrix-product measure, Y spectrum, finite pressure
    Exact {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long = "L", visible_alias = "l")]
        l: usize,
    },
    /// Exhaustive exact weight-exchange sign check
    LemmaCheck {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long = "L", visible_alias = "l")]
        l: usize,
    },
    /// Local-equilibrium diagnostic over box sizes
    LocalEq {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long = "L", visible_alias = "l")]
        l: usize,
    },
    /// Kinetic Monte Carlo run: density profile, bulk density, current
    Mc {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long = "L", visible_alias = "l", default_value_t = 200)]
        l: usize,
        #[arg(long = "t-burnin", default_value_t = 3000.0)]
        t_burnin: f64,
        #[arg(long = "t-measure", default_value_t = 6000.0)]
        t_measure: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        replicas: usize,
    },
    /// Simulated bulk density over a parameter grid vs prediction
    PhaseSweep {
        /// Driving direction
        #[arg(long, value_enum)]
        dir: Dir,
        #[arg(long = "L", visible_alias = "l", default_value_t = 200)]
        l: usize,
        #[arg(long = "t-burnin", default_value_t = 3000.0)]
        t_burnin: f64,
        #[arg(long = "t-measure", default_value_t = 6000.0)]
        t_measure: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        replicas: usize,
        #[arg(long, default_value_t = 0.03)]
        tol: f64,
        #[arg(long, default_value_t = 0.05)]
        exclusion: f64,
    },
    /// Run the full acceptance suite, one pass/fail line per criterion
    Verify {
        /// Reduced sizes for a fast smoke run
        #[arg(long)]
        quick: bool,
    },
}

/// 17 significant digits, locale-free; round-trips bit-exactly.
fn fmt(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

fn fmt_value(v: Value) -> String {
    match v {
        Value::NegInf => "-inf".into(),
        Value::Finite(x) => fmt(x),
    }
}

/// Table destined for CSV (rows of strings) or JSON (array of objects).
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A run's artifact: tabular data plus scalar summary fields.
struct Artifact {
    command: &'static str,
    summary: serde_json::Map<String, serde_json::Value>,
    table: Option<Table>,
}

impl Artifact {
    fn new(command: &'static str) -> Self {
        Artifact { command, summary: serde_json::Map::new(), table: None }
    }

    fn field(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    fn emit(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(vec![]);
                if let Some(t) = &self.table {
                    w.write_record(&t.columns)?;
                    for row in &t.rows {
                        w.write_record(row)?;
                    }
                } else {
                    let keys: Vec<&String> = self.summary.keys().collect();
                    w.write_record(&keys)?;
                    w.write_record(self.summary.values().map(json_scalar_to_csv))?;
                }
                out.write_all(&w.into_inner().expect("vec writer"))?;
                // scalar summary goes to stderr so the CSV stays tabular
                if self.table.is_some() && !self.summary.is_empty() {
                    for (k, v) in &self.summary {
                        eprintln!("{k} = {}", json_scalar_to_csv(v));
                    }
                }
            }
            Format::Json => {
                let mut obj = json!({
                    "schema": 1,
                    "command": self.command,
                });
                let map = obj.as_object_mut().expect("object");
                for (k, v) in &self.summary {
                    map.insert(k.clone(), v.clone());
                }
                if let Some(t) = &self.table {
                    let rows: Vec<serde_json::Value> = t
                        .rows
                        .iter()
                        .map(|r| {
                            t.columns
                                .iter()
                                .zip(r)
                                .map(|(c, v)| (c.to_string(), json!(v)))
                                .collect::<serde_json::Map<_, _>>()
                                .into()
                        })
                        .collect();
                    map.insert("rows".into(), rows.into());
                }
                serde_json::to_writer_pretty(&mut *out, &obj)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn json_scalar_to_csv(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn run(cli: &Cli) -> Result<(Artifact, bool), String> {
    match &cli.command {
        Command::Entropy { p, e_grid } => {
            let p = p.params()?;
            if *e_grid < 2 {
                return Err("--e-grid: need at least 2 points".into());
            }
            let band = energy_band(&p);
            let mut t = Table::new(vec!["e", "s"]);
            for i in 0..*e_grid {
                let e = band.lo + (band.hi - band.lo) * i as f64 / (*e_grid - 1) as f64;
                t.push(vec![fmt(e), fmt_value(entropy(&p, e))]);
            }
            let mut a = Artifact::new("entropy");
            a.table = Some(t);
            Ok((a, true))
        }
        Command::Pressure { p, theta_min, theta_max, theta_grid } => {
            let p = p.params()?;
            if *theta_grid < 2 || theta_max <= theta_min {
                return Err("--theta-grid/--theta-min/--theta-max: bad grid".into());
            }
            let mut t = Table::new(vec!["theta", "p"]);
            for i in 0..*theta_grid {
                let th = theta_min + (theta_max - theta_min) * i as f64 / (*theta_grid - 1) as f64;
                t.push(vec![fmt(th), fmt(pressure(&p, th))]);
            }
            let mut a = Artifact::new("pressure");
            a.table = Some(t);
            Ok((a, true))
        }
        Command::Band { p } => {
            let p = p.params()?;
            let band = energy_band(&p);
            let mut a = Artifact::new("band");
            a.field("e_min", fmt(band.lo));
            a.field("e_max", fmt(band.hi));
            Ok((a, true))
        }
        Command::Phase { p } => {
            let p = p.params()?;
            let info = classify(&p);
            let mut a = Artifact::new("phase");
            a.field("phase", format!("{:?}", info.phase));
            a.field("rho_bar", fmt(info.rho_bar.representative()));
            a.field("phi_bar", fmt(info.phi_bar));
            a.field("rho0", fmt(info.rho0));
            a.field("phi0", fmt(info.phi0));
            a.field("vbar", fmt(info.vbar));
            a.field("stationary_energy", fmt(tasep::closed::stationary_energy(&p)));
            Ok((a, true))
        }
        Command::Maximizer { p, energy } => {
            let p = p.params()?;
            let fam = maximizer(&p, *energy).map_err(|e| format!("--energy: {e}"))?;
            let mut a = Artifact::new("maximizer");
            a.field("e", fmt(*energy));
            match fam {
                MaximizerFamily::Constant { u } => {
                    a.field("family", "constant");
                    a.field("u", fmt(u));
                }
                MaximizerFamily::Monotone { lo, hi, target } => {
                    a.field("family", "monotone");
                    a.field("lo", fmt(lo));
                    a.field("hi", fmt(hi));
                    a.field("gibbs_shannon_target", fmt(target));
                }
            }
            Ok((a, true))
        }
        Command::OracleEntropy { p, e_grid } => {
            let p = p.params()?;
            let band = energy_band(&p);
            let mut t = Table::new(vec!["e", "s_closed", "s_oracle", "gap"]);
            let mut worst = 0.0f64;
            for i in 1..=*e_grid {
                let e = band.lo + (band.hi - band.lo) * i as f64 / (*e_grid + 1) as f64;
                let closed = entropy(&p, e);
                let num = oracle::oracle_entropy(&p, e);
                let gap = match (closed.finite(), num.finite()) {
                    (Some(c), Some(n)) => (c - n).abs(),
                    _ => f64::INFINITY,
                };
                worst = worst.max(gap);
                t.push(vec![fmt(e), fmt_value(closed), fmt_value(num), fmt(gap)]);
            }
            let mut a = Artifact::new("oracle-entropy");
            a.field("max_gap", fmt(worst));
            a.table = Some(t);
            Ok((a, true))
        }
        Command::OracleBand { p } => {
            let p = p.params()?;
            let band = energy_band(&p);
            let (olo, ohi) = oracle::oracle_energy_band(&p);
            let mut a = Artifact::new("oracle-band");
            a.field("e_min_closed", fmt(band.lo));
            a.field("e_min_oracle", fmt(olo));
            a.field("e_max_closed", fmt(band.hi));
            a.field("e_max_oracle", fmt(ohi));
            a.field("max_gap", fmt((olo - band.lo).abs().max((ohi - band.hi).abs())));
            Ok((a, true))
        }
        Command::LegendreCheck { p, theta_min, theta_max, theta_grid, e_grid, tol } => {
            let p = p.params()?;
            if *theta_grid < 2 || *e_grid < 2 {
                return Err("--theta-grid/--e-grid: need at least 2 points".into());
            }
            let band = energy_band(&p);
            let mut xs: Vec<f64> = (0..*e_grid)
                .map(|i| band.lo + (band.hi - band.lo) * i as f64 / (*e_grid - 1) as f64)
                .chain(tasep::closed::entropy_breakpoints(&p))
                .collect();
            xs.sort_by(|a, b| a.total_cmp(b));
            let ys = xs.iter().map(|&e| entropy(&p, e)).collect();
            let curve = Curve::new(xs, ys);
            let mut t = Table::new(vec!["theta", "transform", "closed", "gap"]);
            let mut worst = 0.0f64;
            for i in 0..*theta_grid {
                let th = theta_min + (theta_max - theta_min) * i as f64 / (*theta_grid - 1) as f64;
                if p.direction() == Direction::Cooperative && (th + 1.0).abs() < 0.05 {
                    continue;
                }
                let lhs = oracle::legendre_transform(&curve, th);
                let rhs = pressure(&p, th);
                let gap = (lhs - rhs).abs();
                worst = worst.max(gap);
                t.push(vec![fmt(th), fmt(lhs), fmt(rhs), fmt(gap)]);
            }
            let mut a = Artifact::new("legendre-check");
            a.field("max_gap", fmt(worst));
            a.field("tol", fmt(*tol));
            a.field("pass", worst <= *tol);
            a.table = Some(t);
            Ok((a, worst <= *tol))
        }
        Command::Exact { p, l } => {
            let rational = p.rho_minus.exact.is_some() && p.rho_plus.exact.is_some();
            let dir: Direction = p.dir.into();
            let (rm, rp) = (p.rho_minus.value, p.rho_plus.value);
            let mut t = Table::new(vec!["config", "probability", "y"]);
            let mut a = Artifact::new("exact");
            let measure = if rm == rp {
                exact::equilibrium_measure(rm, *l).map_err(|e| format!("--L: {e}"))?
            } else {
                let params =
                    Params::new(rm, rp, dir).map_err(|e| format!("--rho-/--rho+: {e}"))?;
                exact::stationary_measure(&params, *l).map_err(|e| format!("--L: {e}"))?
            };
            if rational {
                let exact_measure = exact::stationary_measure_rational(
                    p.rho_minus.exact.as_ref().expect("checked"),
                    p.rho_plus.exact.as_ref().expect("checked"),
                    dir,
                    *l,
                )
                .map_err(|e| format!("--L: {e}"))?;
                for (c, q) in exact_measure.probabilities().iter().enumerate() {
                    t.push(vec![
                        format!("{c:0l$b}", l = *l),
                        q.to_string(),
                        fmt(-measure.probability(c).ln() / *l as f64),
                    ]);
                }
            } else {
                for (c, &mu) in measure.probabilities().iter().enumerate() {
                    t.push(vec![
                        format!("{c:0l$b}", l = *l),
                        fmt(mu),
                        fmt(-mu.ln() / *l as f64),
                    ]);
                }
            }
            let (y_mean, y_var) = exact::y_mean_var(&measure);
            a.field("gibbs_shannon", fmt(exact::gibbs_shannon_exact(&measure)));
            a.field("y_mean", fmt(y_mean));
            a.field("y_var", fmt(y_var));
            for th in [0.0, 0.5, 1.0, 2.0] {
                a.field(&format!("finite_pressure_{th}"), fmt(exact::finite_pressure(&measure, th)));
            }
            a.table = Some(t);
            Ok((a, true))
        }
        Command::LemmaCheck { p, l } => {
            let (Some(rm), Some(rp)) = (&p.rho_minus.exact, &p.rho_plus.exact) else {
                return Err("--rho-/--rho+: lemma-check needs exact rationals like 1/10".into());
            };
            let rep = exact::lemma_sign_check(rm, rp, p.dir.into(), *l)
                .map_err(|e| format!("{e}"))?;
            let mut a = Artifact::new("lemma-check");
            a.field("l", rep.l);
            a.field("pairs_checked", rep.pairs_checked);
            a.field("violations", rep.violations);
            a.field("zeros", rep.zeros);
            a.field("holds_strictly", rep.holds_strictly());
            Ok((a, rep.holds_strictly()))
        }
        Command::LocalEq { p, l } => {
            let params = p.params()?;
            let measure = exact::stationary_measure(&params, *l).map_err(|e| format!("--L: {e}"))?;
            let mut t = Table::new(vec!["k", "diagnostic"]);
            for k in 1..=*l {
                if l % k == 0 {
                    let d = exact::local_eq_diagnostic(&measure, k).expect("k divides L");
                    t.push(vec![k.to_string(), fmt(d)]);
                }
            }
            let mut a = Artifact::new("local-eq");
            a.table = Some(t);
            Ok((a, true))
        }
        Command::Mc { p, l, t_burnin, t_measure, seed, replicas } => {
            let params = p.params()?;
            let cfg = SimConfig {
                l: *l,
                params,
                t_burnin: *t_burnin,
                t_measure: *t_measure,
                seed: *seed,
                n_replicas: *replicas,
            };
            cfg.validate().map_err(|e| format!("{e}"))?;
            let res = sim::simulate(&cfg).map_err(|e| format!("{e}"))?;
            let mut t = Table::new(vec!["site", "density", "stderr"]);
            for (i, (&d, &se)) in res.profile.iter().zip(&res.profile_stderr).enumerate() {
                t.push(vec![(i + 1).to_string(), fmt(d), fmt(se)]);
            }
            let mut a = Artifact::new("mc");
            a.field("bulk_density", fmt(res.bulk_density));
            a.field("bulk_stderr", fmt(res.bulk_stderr));
            a.field("current", fmt(res.current));
            a.field("current_stderr", fmt(res.current_stderr));
            a.table = Some(t);
            Ok((a, true))
        }
        Command::PhaseSweep { dir, l, t_burnin, t_measure, seed, replicas, tol, exclusion } => {
            let cfg = SimConfig {
                l: *l,
                params: Params::new(0.1, 0.7, Direction::Competitive).expect("placeholder"),
                t_burnin: *t_burnin,
                t_measure: *t_measure,
                seed: *seed,
                n_replicas: *replicas,
            };
            cfg.validate().map_err(|e| format!("{e}"))?;
            let rows = sim::phase_sweep(&sim::default_sweep_grid(), (*dir).into(), &cfg, *tol, *exclusion)
                .map_err(|e| format!("{e}"))?;
            let mut t = Table::new(vec!["rho_minus", "rho_plus", "predicted", "measured", "agree"]);
            let mut agreeing = 0usize;
            let mut judged = 0usize;
            for r in &rows {
                let verdict = match r.agree {
                    None => "excluded".to_string(),
                    Some(a) => {
                        judged += 1;
                        agreeing += a as usize;
                        a.to_string()
                    }
                };
                t.push(vec![fmt(r.rho_minus), fmt(r.rho_plus), fmt(r.predicted), fmt(r.measured), verdict]);
            }
            let mut a = Artifact::new("phase-sweep");
            a.field("judged", judged);
            a.field("agreeing", agreeing);
            a.table = Some(t);
            Ok((a, true))
        }
        Command::Verify { quick } => {
            let results = report::run_all(*quick);
            let mut t = Table::new(vec!["criterion", "name", "verdict", "seconds", "details"]);
            let mut all = true;
            for r in &results {
                println!("{}", r.line());
                all &= r.passed;
                t.push(vec![
                    r.id.to_string(),
                    r.name.clone(),
                    if r.passed { "pass" } else { "fail" }.to_string(),
                    format!("{:.1}", r.seconds),
                    r.details.clone(),
                ]);
            }
            let mut a = Artifact::new("verify");
            a.field("all_pass", all);
            a.table = Some(t);
            Ok((a, all))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = std::env::var("TASEP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .or(cli.threads);
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("--threads: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok((artifact, verified)) => {
            let result = match &cli.output {
                Some(path) => std::fs::File::create(path)
                    .map_err(|e| e.to_string())
                    .and_then(|mut f| artifact.emit(cli.format, &mut f).map_err(|e| e.to_string())),
                None => {
                    let stdout = std::io::stdout();
                    artifact.emit(cli.format, &mut stdout.lock()).map_err(|e| e.to_string())
                }
            };
            if let Err(e) = result {
                eprintln!("--output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if verified { 0 } else { 2 })
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
