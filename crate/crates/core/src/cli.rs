//! The `majorana-lu` command line.
//!
//! Exit codes: 0 success, 1 a negative or undecided answer, 2 usage
//! errors, 3 domain errors (reported as `{"error": ...}` on stdout).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::classify::{classify_state, lu_equivalent_pure, StabilizerClass};
use crate::error::{Error, Result};
use crate::io::{
    configuration_json, density_json, local_unitary_json, read_density, read_state,
    read_state_input, state_json, to_json_string, unitary_json, StateInput,
};
use crate::majorana::{majorana_points, MajoranaConfiguration};
use crate::mixed::{
    lu_equivalent_mixed, two_factor_search, EquivalenceSearchConfig, MixedEquivalence,
};
use crate::rotmatch::{symmetry_group, PointGroup};
use crate::states::{DensityMatrix, SymmetricPureState, C64};
use crate::tolerances::Tolerances;
use crate::verify::{
    check_stabilizes, sample_stabilizer, stabilizer_anomalies, StabilizerSearchConfig,
    StabilizerWitness,
};

/// Fixed default seed so that reruns are byte-identical.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(
    name = "majorana-lu",
    version,
    about = "Majorana points, LU equivalence and stabilizer classes of symmetric qubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Override the command's main tolerance (state equality for classify
    /// and equiv, stabilizer residual for verify).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, conflicts_with_all = ["csv", "human"])]
    pub json: bool,
    #[arg(long, global = true, conflicts_with = "human")]
    pub csv: bool,
    #[arg(long, global = true)]
    pub human: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Json,
    Csv,
    Human,
}

impl GlobalArgs {
    pub fn mode(&self) -> OutputMode {
        if self.csv {
            OutputMode::Csv
        } else if self.human {
            OutputMode::Human
        } else {
            OutputMode::Json
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a state file.
    Mkstate {
        #[command(subcommand)]
        kind: StateKind,
        /// Emit the density matrix instead of Dicke coefficients.
        #[arg(long, global = true)]
        density: bool,
    },
    /// Majorana points of a state.
    Majorana { input: String },
    /// Rotation symmetry group of a state's Majorana configuration.
    Symmetry { input: String },
    /// Stabilizer class, canonical representative and generators.
    Classify { input: String },
    /// Decide LU equivalence of two symmetric pure states.
    Equiv { a: String, b: String },
    /// Search for g with g^{⊗n} ρ g^{⊗n}† = ρ' between mixed states.
    EquivMixed {
        a: String,
        b: String,
        #[arg(long, default_value_t = 12)]
        grid: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Accepted distance; defaults to 1e-7 · 2^{n/2}.
        #[arg(long)]
        threshold: Option<f64>,
        /// For two qubits, search over independent factors instead (no
        /// single-g guarantee applies there).
        #[arg(long)]
        two_factor: bool,
    },
    /// Check a state's classification against brute-force stabilizer search.
    Verify {
        input: String,
        /// Also flag searched stabilizers outside the classified group.
        #[arg(long)]
        class_check: bool,
        #[arg(long, default_value_t = 12)]
        search_grid: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum StateKind {
    /// |D_n^(k)⟩.
    Dicke { n: usize, k: usize },
    /// cos(πt/4)|0…0⟩ + sin(πt/4)|1…1⟩; t = 1 is GHZ.
    Ghz {
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// The state whose Majorana points are listed in a file.
    FromPoints { input: String },
    /// Gaussian random coefficients from --seed.
    Random { n: usize },
}

/// Output value: JSON, plus CSV and human renderings.
struct Report {
    json: Value,
    csv: String,
    human: String,
    code: i32,
}

impl Report {
    fn new(json: Value, csv: String, human: String) -> Self {
        Self {
            json,
            csv,
            human,
            code: 0,
        }
    }

    fn with_code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let mode = cli.global.mode();
    match execute(&cli, stdin) {
        Ok(report) => {
            let text = match mode {
                OutputMode::Json => to_json_string(&report.json).map(|s| s + "\n"),
                OutputMode::Csv => Ok(report.csv),
                OutputMode::Human => Ok(report.human),
            };
            match text {
                Ok(t) => {
                    let _ = stdout.write_all(t.as_bytes());
                    report.code
                }
                Err(e) => fail(&e, stdout),
            }
        }
        Err(e) => fail(&e, stdout),
    }
}

fn fail(e: &Error, stdout: &mut dyn Write) -> i32 {
    let body = to_json_string(&json!({ "error": e.to_string() }))
        .unwrap_or_else(|_| "{\"error\":\"unprintable\"}".into());
    let _ = writeln!(stdout, "{body}");
    3
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn read_pair(a: &str, b: &str, stdin: &mut dyn Read) -> Result<(String, String)> {
    if a == "-" && b == "-" {
        return Err(Error::Format(
            "only one input can be read from stdin".into(),
        ));
    }
    Ok((read_input(a, stdin)?, read_input(b, stdin)?))
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Report> {
    let g = &cli.global;
    let mut tol = Tolerances::default();
    if let Some(t) = g.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Format(format!(
                "--tol must be positive and finite, got {t}"
            )));
        }
        tol.equality = t;
    }
    match &cli.command {
        Command::Mkstate { kind, density } => mkstate(kind, *density, g.seed, &tol, stdin),
        Command::Majorana { input } => {
            let psi = read_state(&read_input(input, stdin)?, &tol)?;
            majorana_report(&majorana_points(&psi, &tol)?)
        }
        Command::Symmetry { input } => {
            let config = match read_state_input(&read_input(input, stdin)?, &tol)? {
                StateInput::Points(c) => c,
                StateInput::Dicke(psi) => majorana_points(&psi, &tol)?,
            };
            symmetry_report(&symmetry_group(&config, tol.matching)?)
        }
        Command::Classify { input } => {
            classify_report(&read_state(&read_input(input, stdin)?, &tol)?, &tol)
        }
        Command::Equiv { a, b } => {
            let (ta, tb) = read_pair(a, b, stdin)?;
            equiv_report(&read_state(&ta, &tol)?, &read_state(&tb, &tol)?, &tol)
        }
        Command::EquivMixed {
            a,
            b,
            grid,
            restarts,
            threshold,
            two_factor,
        } => {
            let (ta, tb) = read_pair(a, b, stdin)?;
            let cfg = EquivalenceSearchConfig {
                grid: *grid,
                restarts: *restarts,
                threshold: *threshold,
                seed: g.seed,
                ..Default::default()
            };
            equiv_mixed_report(
                &read_density(&ta, &tol)?,
                &read_density(&tb, &tol)?,
                &cfg,
                *two_factor,
            )
        }
        Command::Verify {
            input,
            class_check,
            search_grid,
        } => {
            let cfg = StabilizerSearchConfig {
                euler_grid: *search_grid,
                tol: g.tol.unwrap_or(StabilizerSearchConfig::default().tol),
                ..Default::default()
            };
            verify_report(
                &read_state(&read_input(input, stdin)?, &tol)?,
                &tol,
                &cfg,
                *class_check,
            )
        }
    }
}

fn mkstate(
    kind: &StateKind,
    density: bool,
    seed: u64,
    tol: &Tolerances,
    stdin: &mut dyn Read,
) -> Result<Report> {
    let psi = match kind {
        StateKind::Dicke { n, k } => SymmetricPureState::dicke(*n, *k)?,
        StateKind::Ghz { n, t } => {
            let (s, c) = (std::f64::consts::FRAC_PI_4 * t).sin_cos();
            SymmetricPureState::ghz(*n, C64::new(c, 0.0), C64::new(s, 0.0))?
        }
        StateKind::FromPoints { input } => read_state(&read_input(input, stdin)?, tol)?,
        StateKind::Random { n } => {
            SymmetricPureState::random(*n, &mut ChaCha8Rng::seed_from_u64(seed))?
        }
    };
    if density {
        let rho = psi.to_density()?;
        let mut csv = String::from("row,col,re,im\n");
        for r in 0..rho.dim() {
            for c in 0..rho.dim() {
                let z = rho.entry(r, c);
                let _ = writeln!(csv, "{r},{c},{:.16e},{:.16e}", z.re, z.im);
            }
        }
        let human = format!(
            "{}-qubit density matrix of a pure symmetric state\n",
            rho.n()
        );
        return Ok(Report::new(density_json(&rho), csv, human));
    }
    let mut csv = String::from("k,re,im\n");
    let mut human = format!("{}-qubit symmetric state (Dicke coefficients)\n", psi.n());
    for (k, c) in psi.coeffs().iter().enumerate() {
        let _ = writeln!(csv, "{k},{:.16e},{:.16e}", c.re, c.im);
        let _ = writeln!(human, "  c_{k} = {:+.10} {:+.10}i", c.re, c.im);
    }
    Ok(Report::new(state_json(&psi), csv, human))
}

fn majorana_report(config: &MajoranaConfiguration) -> Result<Report> {
    let mut csv = String::from("x,y,z,multiplicity\n");
    let mut human = format!(
        "{} Majorana points in {} clusters\n",
        config.n(),
        config.clusters().len()
    );
    for c in config.clusters() {
        let v = c.point.vector();
        let _ = writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{}",
            v.x, v.y, v.z, c.multiplicity
        );
        let _ = writeln!(
            human,
            "  theta = {:>12.6} deg  phi = {:>12.6} deg  x{}",
            c.point.theta().to_degrees(),
            c.point.phi().to_degrees(),
            c.multiplicity
        );
    }
    Ok(Report::new(configuration_json(config), csv, human))
}

fn group_json(g: &PointGroup) -> Value {
    json!({
        "group": g.kind().name(),
        "m": g.kind().m(),
        "order": g.order(),
        "axis": g.axis().map(|a| vec![a.x, a.y, a.z]),
    })
}

fn symmetry_report(g: &PointGroup) -> Result<Report> {
    let axis = g.axis();
    let (ax, ay, az) = axis.map_or((String::new(), String::new(), String::new()), |a| {
        (
            format!("{:.16e}", a.x),
            format!("{:.16e}", a.y),
            format!("{:.16e}", a.z),
        )
    });
    let m = g.kind().m().map(|m| m.to_string()).unwrap_or_default();
    let order = g
        .order()
        .map(|o| o.to_string())
        .unwrap_or_else(|| "inf".into());
    let csv = format!(
        "group,m,order,ax,ay,az\n{},{m},{order},{ax},{ay},{az}\n",
        g.kind().name()
    );
    let mut human = format!("group {}", g.kind().name());
    if let Some(m) = g.kind().m() {
        let _ = write!(human, "({m})");
    }
    let _ = write!(human, ", order {order}");
    if let Some(a) = axis {
        let _ = write!(
            human,
            ", axis theta = {:.6} deg phi = {:.6} deg",
            a.z.clamp(-1.0, 1.0).acos().to_degrees(),
            a.y.atan2(a.x)
                .rem_euclid(std::f64::consts::TAU)
                .to_degrees()
        );
    }
    human.push('\n');
    Ok(Report::new(group_json(g), csv, human))
}

fn classify_report(psi: &SymmetricPureState, tol: &Tolerances) -> Result<Report> {
    let r = classify_state(psi, tol)?;
    let label = r.class.label();
    let mut obj = json!({
        "class": label,
        "canonical": state_json(&r.canonical),
        "g": unitary_json(&r.transform),
        "generators": r.generators.iter().map(local_unitary_json).collect::<Vec<_>>(),
        "residual": r.residual,
    });
    let mut param = String::new();
    match &r.class {
        StabilizerClass::GhzGeneral { t } => {
            obj["t"] = json!(t);
            param = format!("t={t:.16e}");
        }
        StabilizerClass::DickeGeneral { k } => {
            obj["k"] = json!(k);
            param = format!("k={k}");
        }
        StabilizerClass::Finite(g) => {
            obj["group"] = group_json(g);
        }
        _ => {}
    }
    let csv = format!(
        "class,parameter,residual\n{label},{param},{:.16e}\n",
        r.residual
    );
    let mut human = format!("class {label}");
    if !param.is_empty() {
        let _ = write!(human, " ({param})");
    }
    let _ = writeln!(
        human,
        ", {} generator(s), residual {:.3e}",
        r.generators.len(),
        r.residual
    );
    Ok(Report::new(obj, csv, human))
}

fn equiv_report(
    a: &SymmetricPureState,
    b: &SymmetricPureState,
    tol: &Tolerances,
) -> Result<Report> {
    Ok(match lu_equivalent_pure(a, b, tol)? {
        Some(g) => Report::new(
            json!({ "equivalent": true, "g": unitary_json(&g) }),
            "equivalent\ntrue\n".into(),
            "equivalent\n".into(),
        ),
        None => Report::new(
            json!({ "equivalent": false }),
            "equivalent\nfalse\n".into(),
            "not equivalent\n".into(),
        )
        .with_code(1),
    })
}

fn equiv_mixed_report(
    a: &DensityMatrix,
    b: &DensityMatrix,
    cfg: &EquivalenceSearchConfig,
    two_factor: bool,
) -> Result<Report> {
    let n = a.n();
    if n == 2 && b.n() == 2 {
        if !two_factor {
            return Err(Error::Unsupported(
                "single-g reduction needs at least 3 qubits; --two-factor runs a brute-force search without that guarantee".into(),
            ));
        }
        let r = two_factor_search(a, b, cfg)?;
        let status = if r.equivalent {
            "equivalent"
        } else {
            "undecided"
        };
        let json = json!({
            "method": "two-factor fallback",
            "equivalent": r.equivalent,
            "status": status,
            "distance": r.distance,
            "threshold": cfg.threshold_for(2),
            "g": local_unitary_json(&r.unitary),
        });
        let csv = format!("status,distance\n{status},{:.16e}\n", r.distance);
        let human = format!(
            "{status} (two-factor fallback), distance {:.3e}\n",
            r.distance
        );
        return Ok(Report::new(json, csv, human).with_code(if r.equivalent { 0 } else { 1 }));
    }
    let threshold = cfg.threshold_for(n);
    let (json, csv, human, code) = match lu_equivalent_mixed(a, b, cfg)? {
        MixedEquivalence::Equivalent { g, distance } => (
            json!({ "equivalent": true, "status": "equivalent", "distance": distance, "threshold": threshold, "g": unitary_json(&g) }),
            format!("status,distance\nequivalent,{distance:.16e}\n"),
            format!("equivalent, distance {distance:.3e}\n"),
            0,
        ),
        MixedEquivalence::NotEquivalent { reason } => (
            json!({ "equivalent": false, "status": "not-equivalent", "reason": reason }),
            "status,distance\nnot-equivalent,\n".into(),
            format!("not equivalent: {reason}\n"),
            1,
        ),
        MixedEquivalence::Undecided { best, distance } => (
            json!({ "equivalent": false, "status": "undecided", "distance": distance, "threshold": threshold, "best": unitary_json(&best) }),
            format!("status,distance\nundecided,{distance:.16e}\n"),
            format!("undecided at threshold {threshold:.3e}: best distance {distance:.3e}\n"),
            1,
        ),
    };
    Ok(Report::new(json, csv, human).with_code(code))
}

fn witness_json(w: &StabilizerWitness) -> Value {
    json!({ "unitary": local_unitary_json(&w.unitary), "residual": w.residual, "accepted": w.accepted })
}

fn verify_report(
    psi: &SymmetricPureState,
    tol: &Tolerances,
    cfg: &StabilizerSearchConfig,
    class_check: bool,
) -> Result<Report> {
    let r = classify_state(psi, tol)?;
    let rho = r.canonical.to_density()?;
    let generators = r
        .generators
        .iter()
        .map(|u| check_stabilizes(u, &rho, cfg.tol))
        .collect::<Result<Vec<_>>>()?;
    let (witnesses, anomalies) = if class_check {
        let report = stabilizer_anomalies(&r, cfg)?;
        (report.witnesses, Some(report.anomalies))
    } else {
        (sample_stabilizer(&rho, cfg)?, None)
    };
    let rejected = generators.iter().filter(|w| !w.accepted).count();
    let agree = rejected == 0 && anomalies.as_ref().is_none_or(|a| a.is_empty());
    let json = json!({
        "class": r.class.label(),
        "agree": agree,
        "generators": generators.iter().map(witness_json).collect::<Vec<_>>(),
        "witnesses": witnesses.iter().map(witness_json).collect::<Vec<_>>(),
        "anomalies": anomalies.as_ref().map(|a| a.iter().map(witness_json).collect::<Vec<_>>()),
    });
    let mut csv = String::from("kind,index,residual,accepted\n");
    for (kind, list) in [("generator", &generators), ("witness", &witnesses)] {
        for (i, w) in list.iter().enumerate() {
            let _ = writeln!(csv, "{kind},{i},{:.16e},{}", w.residual, w.accepted);
        }
    }
    if let Some(a) = &anomalies {
        for (i, w) in a.iter().enumerate() {
            let _ = writeln!(csv, "anomaly,{i},{:.16e},{}", w.residual, w.accepted);
        }
    }
    let mut human = format!(
        "class {}: {} generator(s), {} rejected; {} stabilizer witness(es) found",
        r.class.label(),
        generators.len(),
        rejected,
        witnesses.len()
    );
    if let Some(a) = &anomalies {
        let _ = write!(human, ", {} outside the classified group", a.len());
    }
    human.push('\n');
    Ok(Report::new(json, csv, human).with_code(if agree { 0 } else { 1 }))
}
