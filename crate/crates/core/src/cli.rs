//! Command-line front end. `run` parses arguments, executes one subcommand and
//! returns the process exit code: 0 ok, 2 usage or invalid input, 3 REE
//! non-convergence (output is still written), 1 any other failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::boundaries::{
    boundary_curve_with, special_points, CurveKind, CurveOptions, MeasurePlane,
};
use crate::channels::{
    adc_on_pure, amplitude_damping, pdc_on_pure, phase_damping, AmplitudeDampingParams,
    PhaseDampingParams,
};
use crate::error::Error;
use crate::linalg::C64;
use crate::measures::{concurrence, eof, negativity, ree_numerical_with, ReeOptions};
use crate::output::{OutputEnvelope, Table};
use crate::potentials::{evaluate, GeneralizedPipeline};
use crate::scan::{containment_report, run_scan, ScanConfig, SigmaZEnvelope};
use crate::states::{
    bell_diagonal, generalized_horodecki, horodecki_state, psi_q, pure_output, single_qubit,
    werner, BeamSplitterConfig, BellDiagonalWeights, GeneralizedHorodeckiParams, TwoQubitState,
};

#[derive(Debug, Parser)]
#[command(
    name = "entpot",
    version,
    about = "Entanglement potentials of single-photon qubits"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct CommonArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Target accuracy of REE solves, in bits.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub ree_tol: f64,
    /// Random seed for sampling commands.
    #[arg(long, default_value_t = 7, global = true)]
    pub seed: u64,
    /// Omit `produced_at` from JSON output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// N, C, E_F and E_R of a two-qubit state.
    Measures(MeasuresArgs),
    /// NP, CP and REEP (or their generalized versions) of a single-qubit state.
    Potentials(PotentialsArgs),
    /// Sample a boundary family in a measure plane.
    Curve(CurveArgs),
    /// The three special points of the (E_R, N) plane.
    SpecialPoints(SpecialPointsArgs),
    /// Monte-Carlo scan of single-qubit states with a containment report.
    Scan(ScanArgs),
    /// Damping channel acting on |ψ_q⟩: closed form against Kraus application.
    Channel(ChannelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Pure,
    Horodecki,
    Gh,
    Bell,
    Werner,
    BsOutput,
}

/// Parses exactly `K` comma-separated numbers.
fn parse_list<const K: usize>(s: &str) -> Result<[f64; K], String> {
    let vals = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    vals.try_into()
        .map_err(|v: Vec<f64>| format!("expected {K} comma-separated numbers, got {}", v.len()))
}

#[derive(Debug, Args, Serialize)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Modulus of the coherence parameter x.
    #[arg(long)]
    pub x: Option<f64>,
    /// Phase of x in radians.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Bell-diagonal weights on ψ⁻, ψ⁺, φ⁻, φ⁺.
    #[arg(long, value_parser = parse_list::<4>)]
    pub lambda: Option<[f64; 4]>,
    /// Negativity (Werner family).
    #[arg(long)]
    pub n: Option<f64>,
}

#[derive(Debug, Args, Serialize, Default)]
pub struct PipelineArgs {
    /// Beam-splitter angle θ in degrees (90 is balanced).
    #[arg(long)]
    pub theta_deg: Option<f64>,
    /// Phase damping κ₁,κ₂ on the output modes.
    #[arg(long, value_parser = parse_list::<2>)]
    pub pdc: Option<[f64; 2]>,
    /// Amplitude damping γ₁,γ₂ on the output modes.
    #[arg(long, value_parser = parse_list::<2>)]
    pub adc: Option<[f64; 2]>,
}

impl PipelineArgs {
    fn pipeline(&self) -> Result<GeneralizedPipeline, Error> {
        let bs = match self.theta_deg {
            Some(d) => BeamSplitterConfig::from_degrees(d)?,
            None => BeamSplitterConfig::balanced(),
        };
        Ok(GeneralizedPipeline {
            bs,
            adc: self
                .adc
                .as_ref()
                .map(|g| AmplitudeDampingParams::new(g[0], g[1]))
                .transpose()?,
            pdc: self
                .pdc
                .as_ref()
                .map(|k| PhaseDampingParams::new(k[0], k[1]))
                .transpose()?,
        })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct PotentialsArgs {
    #[arg(long)]
    pub p: f64,
    /// Modulus of the coherence parameter x.
    #[arg(long, default_value_t = 0.0)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum KindArg {
    #[value(name = "pure")]
    Pure,
    #[value(name = "horodecki")]
    Horodecki,
    #[value(name = "bell_diagonal")]
    BellDiagonal,
    #[value(name = "rho_A")]
    RhoA,
    #[value(name = "rho_Z")]
    RhoZ,
    #[value(name = "gh_fixed_p")]
    GhFixedP,
}

impl From<KindArg> for CurveKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Pure => CurveKind::Pure,
            KindArg::Horodecki => CurveKind::Horodecki,
            KindArg::BellDiagonal => CurveKind::BellDiagonal,
            KindArg::RhoA => CurveKind::RhoA,
            KindArg::RhoZ => CurveKind::RhoZ,
            KindArg::GhFixedP => CurveKind::GhFixedP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum PlaneArg {
    #[value(name = "n-c")]
    NC,
    #[value(name = "ree-c")]
    ReeC,
    #[value(name = "ree-n")]
    ReeN,
    #[value(name = "profile")]
    Profile,
}

impl From<PlaneArg> for MeasurePlane {
    fn from(p: PlaneArg) -> Self {
        match p {
            PlaneArg::NC => MeasurePlane::NC,
            PlaneArg::ReeC => MeasurePlane::ReeC,
            PlaneArg::ReeN => MeasurePlane::ReeN,
            PlaneArg::Profile => MeasurePlane::Profile,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value_t = PlaneArg::ReeN)]
    pub plane: PlaneArg,
    /// Number of samples.
    #[arg(long, default_value_t = 101)]
    pub n: usize,
    /// Pure-state weight of the gh_fixed_p family.
    #[arg(long, default_value_t = 0.8)]
    pub p: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SpecialPointsArgs {
    /// Bisection width in N.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// Number of sampled states.
    #[arg(long, default_value_t = 1500)]
    pub n: usize,
    /// N-grid size of the tabulated σ_Z envelope.
    #[arg(long, default_value_t = 101)]
    pub envelope_grid: usize,
    #[arg(long, default_value_t = crate::scan::CONTAINMENT_TOL)]
    pub containment_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Pdc,
    Adc,
}

#[derive(Debug, Args, Serialize)]
pub struct ChannelArgs {
    #[arg(long, value_enum)]
    pub kind: ChannelKind,
    /// Balance of |ψ_q⟩ = √q|01⟩ + √(1−q)|10⟩.
    #[arg(long)]
    pub q: f64,
    /// Damping coefficients of the two modes.
    #[arg(long, value_parser = parse_list::<2>)]
    pub params: [f64; 2],
}

/// What a command produced.
struct Output {
    table: Table,
    /// Extra JSON payload fields; printed to stderr in CSV mode.
    summary: Option<Value>,
    parameters: Value,
    all_converged: bool,
}

fn missing(flag: &str, family: &str) -> Error {
    Error::OutOfDomain(format!("--{flag} is required for family {family}"))
}

fn build_state(s: &StateArgs, pipe: &PipelineArgs) -> Result<TwoQubitState, Error> {
    let fam = format!("{:?}", s.family).to_lowercase();
    if pipe.theta_deg.is_some() && s.family != Family::BsOutput {
        return Err(Error::OutOfDomain(
            "--theta-deg only applies to --family bs-output".into(),
        ));
    }
    let rho = match s.family {
        Family::Pure => match (s.p, s.q) {
            (Some(p), None) => pure_output(p)?,
            (None, Some(q)) => psi_q(q)?,
            _ => return Err(Error::OutOfDomain("pure needs exactly one of --p, --q".into())),
        },
        Family::Horodecki => horodecki_state(s.p.ok_or_else(|| missing("p", &fam))?)?,
        Family::Gh => generalized_horodecki(GeneralizedHorodeckiParams::new(
            s.p.ok_or_else(|| missing("p", &fam))?,
            s.q.ok_or_else(|| missing("q", &fam))?,
        )?),
        Family::Bell => {
            let l = s.lambda.as_ref().ok_or_else(|| missing("lambda", &fam))?;
            bell_diagonal(&BellDiagonalWeights::new(*l)?)
        }
        Family::Werner => werner(s.n.ok_or_else(|| missing("n", &fam))?)?,
        Family::BsOutput => {
            let p = s.p.ok_or_else(|| missing("p", "bs-output"))?;
            let x = C64::from_polar(s.x.unwrap_or(0.0), s.phi.unwrap_or(0.0));
            let sigma = single_qubit(p, x)?;
            let only_bs = PipelineArgs {
                theta_deg: pipe.theta_deg,
                ..PipelineArgs::default()
            };
            only_bs.pipeline()?.output(&sigma)?
        }
    };
    let mut rho = rho;
    if let Some(g) = &pipe.adc {
        rho = amplitude_damping(&rho, &AmplitudeDampingParams::new(g[0], g[1])?)?;
    }
    if let Some(k) = &pipe.pdc {
        rho = phase_damping(&rho, &PhaseDampingParams::new(k[0], k[1])?)?;
    }
    Ok(rho)
}

fn ree_opts(common: &CommonArgs) -> ReeOptions {
    ReeOptions {
        tol: common.ree_tol,
        ..ReeOptions::default()
    }
}

fn cmd_measures(a: &MeasuresArgs, common: &CommonArgs) -> Result<Output, Error> {
    let rho = build_state(&a.state, &a.pipeline)?;
    let ree = ree_numerical_with(&rho, &ree_opts(common))?;
    let c = concurrence(&rho)?;
    let mut table = Table::new(vec![
        "n", "c", "e_f", "e_r", "converged", "iterations", "final_step_norm",
    ]);
    table.push(vec![
        negativity(&rho).into(),
        c.into(),
        eof(c)?.into(),
        ree.value.max(0.0).into(),
        ree.converged.into(),
        ree.iterations.into(),
        ree.final_step_norm.into(),
    ]);
    Ok(Output {
        table,
        summary: None,
        parameters: json!(a),
        all_converged: ree.converged,
    })
}

fn cmd_potentials(a: &PotentialsArgs, common: &CommonArgs) -> Result<Output, Error> {
    let sigma = single_qubit(a.p, C64::from_polar(a.x, a.phi))?;
    let pipe = a.pipeline.pipeline()?;
    let (t, ree) = evaluate(&pipe.output(&sigma)?, &ree_opts(common))?;
    let mut table = Table::new(vec!["p", "x_abs", "phi", "np", "cp", "reep", "converged"]);
    table.push(vec![
        a.p.into(),
        a.x.into(),
        a.phi.into(),
        t.np.into(),
        t.cp.into(),
        t.reep.into(),
        ree.converged.into(),
    ]);
    let mut summary = Map::new();
    summary.insert("generalized".into(), json!(!pipe.is_trivial()));
    Ok(Output {
        table,
        summary: Some(Value::Object(summary)),
        parameters: json!(a),
        all_converged: ree.converged,
    })
}

fn cmd_curve(a: &CurveArgs, common: &CommonArgs) -> Result<Output, Error> {
    let opts = CurveOptions {
        gh_p: a.p,
        ree: ree_opts(common),
    };
    let curve = boundary_curve_with(a.kind.into(), a.n, a.plane.into(), &opts)?;
    let mut table = Table::new(vec!["abscissa", "ordinate", "param1", "param2"]);
    for s in &curve.samples {
        table.push(vec![
            s.abscissa.into(),
            s.ordinate.into(),
            s.param1.into(),
            s.param2.into(),
        ]);
    }
    Ok(Output {
        table,
        summary: Some(json!({
            "kind": curve.kind.name(),
            "plane": curve.plane.name(),
            "axes": [curve.axes.0, curve.axes.1],
        })),
        parameters: json!(a),
        all_converged: true,
    })
}

fn cmd_special_points(a: &SpecialPointsArgs) -> Result<Output, Error> {
    let sp = special_points(a.tol)?;
    let mut table = Table::new(vec!["n1", "e1", "n2", "e2", "n3", "e3"]);
    table.push(vec![
        sp.n1.into(),
        sp.e1.into(),
        sp.n2.into(),
        sp.e2.into(),
        sp.n3.into(),
        sp.e3.into(),
    ]);
    Ok(Output {
        table,
        summary: None,
        parameters: json!(a),
        all_converged: true,
    })
}

fn cmd_scan(a: &ScanArgs, common: &CommonArgs) -> Result<Output, Error> {
    let cfg = ScanConfig {
        n_states: a.n,
        seed: common.seed,
        ree_tol: common.ree_tol,
    };
    let outcome = run_scan(&cfg)?;
    let envelope = SigmaZEnvelope::compute(a.envelope_grid)?;
    let report = containment_report(&outcome.records, &envelope, a.containment_tol)?;
    let mut table = Table::new(vec!["p", "x_abs", "phi", "np", "cp", "reep", "converged"]);
    for r in &outcome.records {
        table.push(vec![
            r.p.into(),
            r.x_abs.into(),
            r.phi.into(),
            r.potentials.np.into(),
            r.potentials.cp.into(),
            r.potentials.reep.into(),
            r.converged.into(),
        ]);
    }
    let planes: Vec<Value> = report
        .planes
        .iter()
        .map(|p| {
            json!({
                "plane": p.plane.name(),
                "checked": p.checked,
                "violations": p.violations.len(),
                "offending": p.violations,
                "max_excess": p.max_excess,
            })
        })
        .collect();
    Ok(Output {
        table,
        summary: Some(json!({
            "containment": {
                "tolerance": report.tolerance,
                "clean": report.is_clean(),
                "planes": planes,
                "bell_gap": report.bell_gap,
                "refined": report.refined,
            },
            "not_converged": outcome.not_converged.len(),
            "phi_spot_check": outcome.phi_spot_check,
        })),
        parameters: json!({ "scan": a, "seed": common.seed, "ree_tol": common.ree_tol }),
        all_converged: outcome.not_converged.is_empty(),
    })
}

fn cmd_channel(a: &ChannelArgs, common: &CommonArgs) -> Result<Output, Error> {
    let (k1, k2) = (a.params[0], a.params[1]);
    let input = psi_q(a.q)?;
    let opts = ree_opts(common);
    let (table, converged) = match a.kind {
        ChannelKind::Pdc => {
            let closed = pdc_on_pure(a.q, k1, k2)?;
            let kraus = phase_damping(&input, &PhaseDampingParams::new(k1, k2)?)?;
            let (t, ree) = evaluate(&closed, &opts)?;
            let mut table = Table::new(vec![
                "q", "kappa1", "kappa2", "n", "c", "e_r", "kraus_deviation",
            ]);
            table.push(vec![
                a.q.into(),
                k1.into(),
                k2.into(),
                t.np.into(),
                t.cp.into(),
                t.reep.into(),
                closed.matrix().max_abs_diff(kraus.matrix()).into(),
            ]);
            (table, ree.converged)
        }
        ChannelKind::Adc => {
            let (closed, params) = adc_on_pure(a.q, k1, k2)?;
            let kraus = amplitude_damping(&input, &AmplitudeDampingParams::new(k1, k2)?)?;
            let (t, ree) = evaluate(&closed, &opts)?;
            let mut table = Table::new(vec![
                "q", "gamma1", "gamma2", "w", "q_prime", "n", "c", "e_r", "kraus_deviation",
            ]);
            table.push(vec![
                a.q.into(),
                k1.into(),
                k2.into(),
                params.p.into(),
                params.q.into(),
                t.np.into(),
                t.cp.into(),
                t.reep.into(),
                closed.matrix().max_abs_diff(kraus.matrix()).into(),
            ]);
            (table, ree.converged)
        }
    };
    Ok(Output {
        table,
        summary: None,
        parameters: json!(a),
        all_converged: converged,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Measures(_) => "measures",
        Command::Potentials(_) => "potentials",
        Command::Curve(_) => "curve",
        Command::SpecialPoints(_) => "special-points",
        Command::Scan(_) => "scan",
        Command::Channel(_) => "channel",
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotConverged { .. } => 3,
        Error::OutOfDomain(_)
        | Error::NotAState(_)
        | Error::WrongDimension { .. }
        | Error::NotHermitian(_)
        | Error::NotTracePreserving(_)
        | Error::UnsupportedPair { .. } => 2,
        _ => 1,
    }
}

fn emit(cli: &Cli, out: &Output) -> io::Result<()> {
    let sink: Box<dyn Write> = match &cli.common.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match cli.common.format {
        Format::Csv => {
            out.table.write_csv(&mut sink).map_err(io::Error::other)?;
            if let Some(summary) = &out.summary {
                eprintln!("{}", serde_json::to_string(summary).map_err(io::Error::other)?);
            }
        }
        Format::Json => {
            let mut payload = out.table.to_json();
            if let (Some(Value::Object(extra)), Value::Object(p)) = (&out.summary, &mut payload) {
                p.extend(extra.clone());
            }
            let mut parameters = match &out.parameters {
                Value::Object(m) => m.clone(),
                _ => Map::new(),
            };
            parameters.insert("common".into(), json!(cli.common));
            let env = OutputEnvelope::new(
                command_name(&cli.command),
                parameters,
                payload,
                !cli.common.no_timestamp,
            );
            serde_json::to_writer_pretty(&mut sink, &env).map_err(io::Error::other)?;
            writeln!(sink)?;
        }
    }
    sink.flush()
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    let c = &cli.common;
    if !(c.ree_tol > 0.0 && c.ree_tol.is_finite()) {
        return Err(Error::OutOfDomain(format!("--ree-tol {}", c.ree_tol)));
    }
    match &cli.command {
        Command::Measures(a) => cmd_measures(a, c),
        Command::Potentials(a) => cmd_potentials(a, c),
        Command::Curve(a) => cmd_curve(a, c),
        Command::SpecialPoints(a) => cmd_special_points(a),
        Command::Scan(a) => cmd_scan(a, c),
        Command::Channel(a) => cmd_channel(a, c),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("error: {e}");
                return 1;
            }
            if out.all_converged {
                0
            } else {
                eprintln!("warning: REE solver did not converge for at least one state");
                3
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

