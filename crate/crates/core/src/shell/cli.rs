use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use super::svg::{render_svg, Figure, Marker, Series};
use super::table::{write_csv, write_json, Cell, Table};
use crate::correlation::{correlation_spectrum, CorrelationReport};
use crate::error::{invalid, Error, Result};
use crate::gamespace::{audit_commutators, payoff_variance, BoundaryMode, CommutatorAudit, GameSpace, OperatorSet, Player};
use crate::numerics::{ComplexScalar, DenseComplexMatrix};
use crate::roundwaves::{
    classical_mixture_density, compare_quantum_classical, correlation_eigenfunction, density_grid, density_peaks,
    divergence_scan, eigen_exponent, eigenfunction_ode_residual, uniform_grid, DivergenceKind, Ordering,
};

#[derive(Debug, Parser)]
#[command(name = "qht", version, about = "Two-player quantum heads-or-tails: operators, correlation spectra, round densities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ladder, number, pay-off and pre-correlation matrices.
    Operators(GameArgs),
    /// Commutator audit of the ladder and pay-off operators.
    Audit(GameArgs),
    /// Pre-correlation eigenstates with pay-off statistics.
    Spectrum(GameArgs),
    /// `spectrum` for every N = 1..=rounds-max.
    Sweep(SweepArgs),
    /// Mean-square pay-off of one player in a round-number state.
    Variance(VarianceArgs),
    /// Hermite wavefunction and pay-off density on a grid.
    Density(DensityArgs),
    /// Local maxima of the round-n pay-off density.
    Peaks(PeaksArgs),
    /// Classical random-walk density next to the quantum one.
    Classical(DensityArgs),
    /// Quantum vs classical summary for round n.
    Compare(CompareArgs),
    /// Correlation eigenfunction xi^s on a positive grid.
    CorrEigen(CorrEigenArgs),
    /// Norm divergence of free-player and correlation eigenstates.
    Diverge(DivergeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Finite,
    Periodic,
}

impl From<ModeArg> for BoundaryMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Finite => BoundaryMode::Finite,
            ModeArg::Periodic => BoundaryMode::Periodic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderingArg {
    Printed,
    Weyl,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Plane,
    Printed,
    Weyl,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write results here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KappaArgs {
    #[arg(long, default_value_t = 1.0)]
    kappa1: f64,
    #[arg(long, default_value_t = 1.0)]
    kappa2: f64,
}

#[derive(Debug, Args)]
struct GameArgs {
    #[arg(long)]
    rounds: usize,
    #[arg(long, value_enum, default_value = "finite")]
    mode: ModeArg,
    #[command(flatten)]
    kappa: KappaArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    rounds_max: usize,
    #[arg(long, value_enum, default_value = "finite")]
    mode: ModeArg,
    #[command(flatten)]
    kappa: KappaArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VarianceArgs {
    #[arg(long)]
    rounds: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    player: u8,
    #[command(flatten)]
    kappa: KappaArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = -8.0, allow_negative_numbers = true)]
    xi_min: f64,
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    xi_max: f64,
    #[arg(long, default_value_t = 1601)]
    samples: usize,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PeaksArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CorrEigenArgs {
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, value_enum, default_value = "weyl")]
    ordering: OrderingArg,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    xi_min: f64,
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    xi_max: f64,
    #[arg(long, default_value_t = 1601)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct DivergeArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    cutoffs: Vec<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Everything a run depends on; echoed as the `config` object of JSON output.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<BoundaryMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub player: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Ordering>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<DivergenceKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<Vec<f64>>,
    pub format: String,
}

/// Result of one subcommand before serialization.
#[derive(Debug)]
pub struct Report {
    pub config: RunConfig,
    pub table: Table,
    pub audit: Option<Value>,
    pub svg: Option<String>,
}

struct Plan {
    report: Report,
    format: Format,
    out: Option<PathBuf>,
    svg_path: Option<PathBuf>,
}

/// Runs the CLI on `argv` (program name first) and returns the process exit code:
/// 0 on success, 2 on usage or input errors, 1 on numerical or I/O failure.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command).and_then(emit) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qht: {e}");
            match e {
                Error::InvalidInput(_) => 2,
                _ => 1,
            }
        }
    }
}

fn emit(plan: Plan) -> Result<()> {
    let mut buf = Vec::new();
    match plan.format {
        Format::Csv => write_csv(&plan.report.table, &mut buf)?,
        Format::Json => write_json(&plan.report.config, &plan.report.table, plan.report.audit.as_ref(), &mut buf)?,
    }
    match &plan.out {
        Some(path) => fs::write(path, &buf)?,
        None => io::stdout().lock().write_all(&buf)?,
    }
    if let (Some(path), Some(svg)) = (&plan.svg_path, &plan.report.svg) {
        fs::write(path, svg)?;
    }
    Ok(())
}

fn format_name(f: Format) -> String {
    match f {
        Format::Csv => "csv".into(),
        Format::Json => "json".into(),
    }
}

fn game_config(name: &str, rounds: usize, mode: ModeArg, kappa: &KappaArgs, format: Format) -> RunConfig {
    RunConfig {
        subcommand: name.into(),
        rounds: Some(rounds),
        mode: Some(mode.into()),
        kappa1: Some(kappa.kappa1),
        kappa2: Some(kappa.kappa2),
        format: format_name(format),
        ..RunConfig::default()
    }
}

fn execute(command: Command) -> Result<Plan> {
    let (report, output, svg_path) = match command {
        Command::Operators(a) => {
            let gs = GameSpace::new(a.rounds, a.mode.into(), a.kappa.kappa1, a.kappa.kappa2)?;
            let config = game_config("operators", a.rounds, a.mode, &a.kappa, a.output.format);
            (operators_report(&gs, config), a.output, None)
        }
        Command::Audit(a) => {
            let gs = GameSpace::new(a.rounds, a.mode.into(), a.kappa.kappa1, a.kappa.kappa2)?;
            let config = game_config("audit", a.rounds, a.mode, &a.kappa, a.output.format);
            (audit_report(&gs, config), a.output, None)
        }
        Command::Spectrum(a) => {
            let gs = GameSpace::new(a.rounds, a.mode.into(), a.kappa.kappa1, a.kappa.kappa2)?;
            let config = game_config("spectrum", a.rounds, a.mode, &a.kappa, a.output.format);
            (spectrum_report(&gs, config)?, a.output, None)
        }
        Command::Sweep(a) => {
            let config = RunConfig {
                subcommand: "sweep".into(),
                rounds_max: Some(a.rounds_max),
                mode: Some(a.mode.into()),
                kappa1: Some(a.kappa.kappa1),
                kappa2: Some(a.kappa.kappa2),
                format: format_name(a.output.format),
                ..RunConfig::default()
            };
            (sweep_report(a.rounds_max, a.mode.into(), &a.kappa, config)?, a.output, None)
        }
        Command::Variance(a) => {
            let config = RunConfig {
                subcommand: "variance".into(),
                rounds: Some(a.rounds),
                n: Some(a.n),
                player: Some(a.player),
                kappa1: Some(a.kappa.kappa1),
                kappa2: Some(a.kappa.kappa2),
                format: format_name(a.output.format),
                ..RunConfig::default()
            };
            (variance_report(&a, config)?, a.output, None)
        }
        Command::Density(a) => {
            let config = grid_config("density", &a);
            (density_report(&a, config)?, a.output, a.svg)
        }
        Command::Peaks(a) => {
            let config = RunConfig {
                subcommand: "peaks".into(),
                n: Some(a.n),
                format: format_name(a.output.format),
                ..RunConfig::default()
            };
            (peaks_report(a.n, config)?, a.output, None)
        }
        Command::Classical(a) => {
            let config = grid_config("classical", &a);
            (classical_report(&a, config)?, a.output, a.svg)
        }
        Command::Compare(a) => {
            let config = RunConfig {
                subcommand: "compare".into(),
                n: Some(a.n),
                format: format_name(a.output.format),
                ..RunConfig::default()
            };
            (compare_report(a.n, config, a.svg.is_some())?, a.output, a.svg)
        }
        Command::CorrEigen(a) => {
            let ordering = match a.ordering {
                OrderingArg::Printed => Ordering::Printed,
                OrderingArg::Weyl => Ordering::Weyl,
            };
            let config = RunConfig {
                subcommand: "corr-eigen".into(),
                lambda: Some(a.lambda),
                ordering: Some(ordering),
                xi_min: Some(a.xi_min),
                xi_max: Some(a.xi_max),
                samples: Some(a.samples),
                format: format_name(a.output.format),
                ..RunConfig::default()
            };
            (corr_eigen_report(&a, ordering, config)?, a.output, None)
        }
        Command::Diverge(a) => {
            let kind = match a.kind {
                KindArg::Plane => DivergenceKind::Plane,
                KindArg::Printed => DivergenceKind::Printed,
                KindArg::Weyl => DivergenceKind::Weyl,
            };
            let config = RunConfig {
                subcommand: "diverge".into(),
                kind: Some(kind),
                cutoffs: Some(a.cutoffs.clone()),
                format: format_name(a.output.format),
                ..RunConfig::default()
            };
            (diverge_report(kind, &a.cutoffs, config)?, a.output, None)
        }
    };
    Ok(Plan {
        report,
        format: output.format,
        out: output.out,
        svg_path,
    })
}

fn grid_config(name: &str, a: &DensityArgs) -> RunConfig {
    RunConfig {
        subcommand: name.into(),
        n: Some(a.n),
        xi_min: Some(a.grid.xi_min),
        xi_max: Some(a.grid.xi_max),
        samples: Some(a.grid.samples),
        format: format_name(a.output.format),
        ..RunConfig::default()
    }
}

fn complex_json(z: ComplexScalar) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn matrix_json(m: &DenseComplexMatrix) -> Value {
    let part = |f: fn(&ComplexScalar) -> f64| -> Value {
        (0..m.dim())
            .map(|r| m.row(r).iter().map(f).collect::<Vec<f64>>())
            .collect::<Vec<_>>()
            .into()
    };
    json!({"re": part(|z| z.re), "im": part(|z| z.im)})
}

fn push_matrix(table: &mut Table, name: &str, m: &DenseComplexMatrix) {
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            let z = m[(r, c)];
            table.push(vec![name.into(), r.into(), c.into(), z.re.into(), z.im.into()]);
        }
    }
}

/// Structured audit object. `eq15_*` compares against the finite-game pattern
/// `diag(1, .., 1, 1 - N)`, `eq16_*` against the periodic `diag(0, 1, .., 1, 1 - N)`.
pub fn audit_json(audit: &CommutatorAudit) -> Value {
    json!({
        "rounds_max": audit.gamespace.rounds_max(),
        "mode": audit.gamespace.mode().as_str(),
        "ladder_commutator": matrix_json(&audit.ladder_commutator),
        "payoff_commutator": matrix_json(&audit.payoff_commutator),
        "ladder_trace": complex_json(audit.ladder_trace),
        "interior_block": audit.interior_block.map(|(lo, hi)| vec![lo, hi]),
        "interior_deviation": audit.interior_deviation,
        "canonical_sign": audit.canonical_sign,
        "eq15_pattern": audit.finite_pattern.pattern,
        "eq15_deviation": audit.finite_pattern.diagonal_deviation,
        "eq15_max_deviation": audit.finite_pattern.max_deviation,
        "eq16_pattern": audit.periodic_pattern.pattern,
        "eq16_deviation": audit.periodic_pattern.diagonal_deviation,
        "eq16_max_deviation": audit.periodic_pattern.max_deviation,
        "ground_payoff_commutator": complex_json(audit.ground_payoff_commutator),
    })
}

fn operators_report(gs: &GameSpace, config: RunConfig) -> Report {
    let ops = OperatorSet::build(gs);
    let mut table = Table::new(vec!["matrix", "row", "col", "re", "im"]);
    for (name, m) in ops.named() {
        push_matrix(&mut table, name, m);
    }
    Report {
        config,
        table,
        audit: Some(audit_json(&audit_commutators(gs))),
        svg: None,
    }
}

fn audit_report(gs: &GameSpace, config: RunConfig) -> Report {
    let audit = audit_commutators(gs);
    let mut table = Table::new(vec!["quantity", "row", "col", "re", "im"]);
    push_matrix(&mut table, "ladder_commutator", &audit.ladder_commutator);
    push_matrix(&mut table, "payoff_commutator", &audit.payoff_commutator);
    let diag_rows: [(&str, &[f64]); 4] = [
        ("eq15_pattern", &audit.finite_pattern.pattern),
        ("eq15_deviation", &audit.finite_pattern.diagonal_deviation),
        ("eq16_pattern", &audit.periodic_pattern.pattern),
        ("eq16_deviation", &audit.periodic_pattern.diagonal_deviation),
    ];
    for (name, values) in diag_rows {
        for (k, &v) in values.iter().enumerate() {
            table.push(vec![name.into(), k.into(), k.into(), v.into(), 0.0.into()]);
        }
    }
    let scalars = [
        ("ladder_trace", audit.ladder_trace),
        ("interior_deviation", ComplexScalar::new(audit.interior_deviation, 0.0)),
        ("canonical_sign", ComplexScalar::new(audit.canonical_sign as f64, 0.0)),
        ("eq15_max_deviation", ComplexScalar::new(audit.finite_pattern.max_deviation, 0.0)),
        ("eq16_max_deviation", ComplexScalar::new(audit.periodic_pattern.max_deviation, 0.0)),
        ("ground_payoff_commutator", audit.ground_payoff_commutator),
    ];
    for (name, z) in scalars {
        table.push(vec![name.into(), Cell::Null, Cell::Null, z.re.into(), z.im.into()]);
    }
    Report {
        config,
        table,
        audit: Some(audit_json(&audit)),
        svg: None,
    }
}

const SPECTRUM_COLUMNS: [&str; 10] = [
    "index",
    "eigenvalue",
    "parity",
    "exp_pi1",
    "exp_pi2",
    "sigma1",
    "sigma2",
    "correlation",
    "pearson",
    "sign_class",
];

fn spectrum_cells(report: &CorrelationReport) -> Vec<Vec<Cell>> {
    report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.index.into(),
                r.eigenvalue.into(),
                r.parity.as_str().into(),
                r.exp_pi1.into(),
                r.exp_pi2.into(),
                r.sigma1.into(),
                r.sigma2.into(),
                r.correlation.into(),
                r.pearson.into(),
                r.sign_class.value().into(),
            ]
        })
        .collect()
}

fn spectrum_report(gs: &GameSpace, config: RunConfig) -> Result<Report> {
    let report = correlation_spectrum(gs)?;
    let mut table = Table::new(SPECTRUM_COLUMNS.to_vec());
    for row in spectrum_cells(&report) {
        table.push(row);
    }
    Ok(Report {
        config,
        table,
        audit: None,
        svg: None,
    })
}

fn sweep_report(rounds_max: usize, mode: BoundaryMode, kappa: &KappaArgs, config: RunConfig) -> Result<Report> {
    if rounds_max == 0 {
        return Err(invalid("--rounds-max must be at least 1"));
    }
    let spaces = (1..=rounds_max)
        .map(|n| GameSpace::new(n, mode, kappa.kappa1, kappa.kappa2))
        .collect::<Result<Vec<_>>>()?;
    // independent spectra; results are collected back in N order
    let reports: Vec<Result<CorrelationReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = spaces.iter().map(|gs| s.spawn(move || correlation_spectrum(gs))).collect();
        handles.into_iter().map(|h| h.join().expect("spectrum worker panicked")).collect()
    });
    let mut header = vec!["rounds"];
    header.extend(SPECTRUM_COLUMNS);
    let mut table = Table::new(header);
    for (gs, report) in spaces.iter().zip(reports) {
        for cells in spectrum_cells(&report?) {
            let mut row = vec![Cell::from(gs.rounds_max())];
            row.extend(cells);
            table.push(row);
        }
    }
    Ok(Report {
        config,
        table,
        audit: None,
        svg: None,
    })
}

fn variance_report(a: &VarianceArgs, config: RunConfig) -> Result<Report> {
    let gs = GameSpace::new(a.rounds, BoundaryMode::Finite, a.kappa.kappa1, a.kappa.kappa2)?;
    let player = Player::from_index(a.player)?;
    let v = payoff_variance(&gs, a.n, player)?;
    let mut table = Table::new(vec!["rounds", "n", "player", "kappa", "value", "expected", "interior"]);
    table.push(vec![
        a.rounds.into(),
        a.n.into(),
        a.player.into(),
        gs.kappa(player).into(),
        v.value.into(),
        v.expected.into(),
        v.interior.into(),
    ]);
    Ok(Report {
        config,
        table,
        audit: None,
        svg: None,
    })
}

fn density_report(a: &DensityArgs, config: RunConfig) -> Result<Report> {
    let grid = density_grid(a.n, a.grid.xi_min, a.grid.xi_max, a.grid.samples)?;
    let mut table = Table::new(vec!["xi", "psi", "density"]);
    for k in 0..grid.xi.len() {
        table.push(vec![grid.xi[k].into(), grid.psi[k].into(), grid.density[k].into()]);
    }
    let svg = match a.svg {
        Some(_) => Some(render_svg(&Figure {
            title: format!("pay-off density after {} rounds", a.n),
            x_label: "xi".into(),
            y_label: "P_n(xi)".into(),
            series: vec![Series::new(format!("P_{}", a.n), &grid.xi, &grid.density)],
            markers: vec![],
        })?),
        None => None,
    };
    Ok(Report {
        config,
        table,
        audit: None,
        svg,
    })
}

fn join_values(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| super::table::format_float(v))
        .collect::<Vec<_>>()
        .join(",")
}

fn peaks_report(n: usize, config: RunConfig) -> Result<Report> {
    let peaks = density_peaks(n)?;
    let mut table = Table::new(vec!["n", "maxima", "classical_centers"]);
    table.push(vec![
        n.into(),
        join_values(&peaks.maxima).into(),
        join_values(&peaks.classical_centers).into(),
    ]);
    Ok(Report {
        config,
        table,
        audit: None,
        svg: None,
    })
}

fn classical_report(a: &DensityArgs, config: RunConfig) -> Result<Report> {
    let quantum = density_grid(a.n, a.grid.xi_min, a.grid.xi_max, a.grid.samples)?;
    let classical = classical_mixture_density(a.n, &quantum.xi);
    let mut table = Table::new(vec!["xi", "classical", "quantum"]);
    for ((x, c), q) in quantum.xi.iter().zip(&classical).zip(&quantum.density) {
        table.push(vec![(*x).into(), (*c).into(), (*q).into()]);
    }
    let svg = match a.svg {
        Some(_) => Some(render_svg(&Figure {
            title: format!("round {}: quantum vs classical walk", a.n),
            x_label: "xi".into(),
            y_label: "density".into(),
            series: vec![
                Series::new(format!("quantum P_{}", a.n), &quantum.xi, &quantum.density),
                Series::new("classical walk", &quantum.xi, &classical),
            ],
            markers: vec![],
        })?),
        None => None,
    };
    Ok(Report {
        config,
        table,
        audit: None,
        svg,
    })
}

fn compare_report(n: usize, config: RunConfig, want_svg: bool) -> Result<Report> {
    let c = compare_quantum_classical(n)?;
    let mut table = Table::new(vec![
        "n",
        "quantum_peaks",
        "classical_centers",
        "quantum_density_at_0",
        "classical_density_at_0",
        "quantum_minimum_deeper",
        "quantum_variance",
        "classical_variance",
        "outermost_quantum_peak",
        "outermost_deviation",
    ]);
    table.push(vec![
        n.into(),
        join_values(&c.quantum_peaks).into(),
        join_values(&c.classical_centers).into(),
        c.quantum_density_at_0.into(),
        c.classical_density_at_0.into(),
        c.quantum_minimum_deeper.into(),
        c.quantum_variance.into(),
        c.classical_variance.into(),
        c.outermost_quantum_peak.into(),
        c.outermost_deviation.into(),
    ]);
    let svg = if want_svg {
        let half = n as f64 + 3.0;
        let xs = uniform_grid(-half, half, 1201)?;
        let quantum = density_grid(n, -half, half, 1201)?;
        let classical = classical_mixture_density(n, &xs);
        let mut markers: Vec<Marker> = c
            .classical_centers
            .iter()
            .map(|&x| Marker {
                x,
                label: super::table::format_float(x),
                color: 1,
            })
            .collect();
        markers.extend(c.quantum_peaks.iter().map(|&x| Marker {
            x,
            label: format!("{x:.4}"),
            color: 0,
        }));
        Some(render_svg(&Figure {
            title: format!("round {n}: density peaks vs classical centers"),
            x_label: "xi".into(),
            y_label: "density".into(),
            series: vec![
                Series::new(format!("quantum P_{n}"), &quantum.xi, &quantum.density),
                Series::new("classical walk", &xs, &classical),
            ],
            markers,
        })?)
    } else {
        None
    };
    Ok(Report {
        config,
        table,
        audit: Some(serde_json::to_value(&c).map_err(|e| Error::Numerical(e.to_string()))?),
        svg,
    })
}

fn corr_eigen_report(a: &CorrEigenArgs, ordering: Ordering, config: RunConfig) -> Result<Report> {
    if a.xi_min.is_nan() || a.xi_min <= 0.0 {
        return Err(invalid("--xi-min must be positive for correlation eigenfunctions"));
    }
    let grid = uniform_grid(a.xi_min, a.xi_max, a.samples)?;
    let psi = correlation_eigenfunction(a.lambda, ordering, 1.0, &grid)?;
    let residual = eigenfunction_ode_residual(a.lambda, ordering, 1.0, &grid)?;
    let s = eigen_exponent(a.lambda, ordering, 1.0);
    let mut table = Table::new(vec!["xi", "re", "im", "abs"]);
    for (x, z) in grid.iter().zip(&psi) {
        table.push(vec![(*x).into(), z.re.into(), z.im.into(), z.norm().into()]);
    }
    Ok(Report {
        config,
        table,
        audit: Some(json!({"exponent": complex_json(s), "ode_residual": residual})),
        svg: None,
    })
}

fn diverge_report(kind: DivergenceKind, cutoffs: &[f64], config: RunConfig) -> Result<Report> {
    let d = divergence_scan(kind, cutoffs)?;
    let mut table = Table::new(vec![
        "kind",
        "cutoff",
        "integral",
        "linear_residual",
        "log_residual",
        "classification",
    ]);
    for (c, i) in d.cutoffs.iter().zip(&d.integrals) {
        table.push(vec![
            kind.as_str().into(),
            (*c).into(),
            (*i).into(),
            d.linear.relative_residual.into(),
            d.logarithmic.relative_residual.into(),
            d.classification.as_str().into(),
        ]);
    }
    Ok(Report {
        config,
        table,
        audit: Some(serde_json::to_value(&d).map_err(|e| Error::Numerical(e.to_string()))?),
        svg: None,
    })
}

/// Runs a subcommand and returns its serialized primary output in memory.
pub fn render(argv: &[&str]) -> Result<Vec<u8>> {
    let cli = Cli::try_parse_from(argv).map_err(|e| invalid(e.to_string()))?;
    let plan = execute(cli.command)?;
    let mut buf = Vec::new();
    match plan.format {
        Format::Csv => write_csv(&plan.report.table, &mut buf)?,
        Format::Json => write_json(&plan.report.config, &plan.report.table, plan.report.audit.as_ref(), &mut buf)?,
    }
    Ok(buf)
}
