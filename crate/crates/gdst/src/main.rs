//! `gdst` command line: combine CBBA documents, emit the conflict
//! surface, run single predictions, and fit datasets.
//!
//! Exit codes: 0 success, 2 parse/flag errors, 3 document validation
//! failures, 4 total conflict.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gdst::evidence::{combine, conflict_surface, Cbba, ConflictReport, EvidenceError};
use gdst::fit::{
    evaluate_report, fit_alone, fit_ctd, Coupling, FitConfig, FitResult, ObservedDataset,
    DEFAULT_ALONE_WEIGHT,
};
use gdst::io::{
    render_report_csv, render_report_text, render_surface_csv, write_atomic, CbbaDocument,
    DatasetDocument, IoError,
};
use gdst::quantum::{
    predict_alone, predict_ctd, AloneMeasure, CategoryWeights, HamiltonianParams,
    HamiltonianScaling, ModelConfig, UncertainCombination,
};

#[derive(Parser)]
#[command(name = "gdst", version, about = "Generalized Dempster-Shafer evidence theory toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Combine two or more CBBA documents with the generalized rule
    Combine {
        /// CBBA document paths, folded left in argument order
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Emit the |K| conflict surface as CSV
    Surface {
        /// Grid step in (0, 0.5]
        #[arg(long = "grid-step")]
        grid_step: f64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Evaluate the model once at explicit parameters
    Predict(PredictArgs),
    /// Fit dataset documents and print/emit the prediction report
    Fit(FitArgs),
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long = "h-g", allow_hyphen_values = true)]
    h_g: f64,
    #[arg(long = "h-b", allow_hyphen_values = true)]
    h_b: f64,
    #[arg(long = "h-u", allow_hyphen_values = true, default_value_t = 0.0)]
    h_u: f64,
    #[arg(long = "p-g")]
    p_g: f64,
    #[arg(long = "p-b")]
    p_b: f64,
    #[arg(long = "p-u", default_value_t = 0.0)]
    p_u: f64,
    /// Evolution time (radians-equivalent)
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    t: f64,
    #[arg(long, value_enum, default_value_t = ScalingArg::PaperLiteral)]
    scaling: ScalingArg,
    #[arg(long = "alone-measure", value_enum, default_value_t = MeasureArg::PaperLiteral)]
    alone_measure: MeasureArg,
    #[arg(long, value_enum, default_value_t = UncertainArg::Orthogonal)]
    uncertain: UncertainArg,
    #[arg(long, value_enum)]
    condition: ConditionArg,
}

#[derive(Args)]
struct FitArgs {
    /// Dataset document path; repeat for a multi-dataset report
    #[arg(long = "dataset", required = true)]
    datasets: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = FitConditionArg::Both)]
    condition: FitConditionArg,
    #[arg(long, default_value_t = 64)]
    starts: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Parameter box as "lo,hi"
    #[arg(long, default_value = "-10,10", value_parser = parse_bounds)]
    bounds: (f64, f64),
    #[arg(long, value_enum, default_value_t = ScalingArg::PaperLiteral)]
    scaling: ScalingArg,
    #[arg(long = "alone-measure", value_enum, default_value_t = MeasureArg::PaperLiteral)]
    alone_measure: MeasureArg,
    #[arg(long, value_enum, default_value_t = UncertainArg::Orthogonal)]
    uncertain: UncertainArg,
    #[arg(long, value_enum, default_value_t = CouplingArg::Joint)]
    coupling: CouplingArg,
    /// D-alone residual weight in the joint objective
    #[arg(long = "alone-weight", default_value_t = DEFAULT_ALONE_WEIGHT)]
    alone_weight: f64,
    /// Write the report as CSV to this path
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalingArg {
    PaperLiteral,
    UnitSpectrum,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    PaperLiteral,
    AttackConsistent,
}

#[derive(Clone, Copy, ValueEnum)]
enum UncertainArg {
    Orthogonal,
    Coherent,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConditionArg {
    CThenD,
    DAlone,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitConditionArg {
    Both,
    CThenD,
    DAlone,
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    Joint,
    Separate,
}

fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected \"lo,hi\"")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    Ok((lo, hi))
}

fn model_config(scaling: ScalingArg, measure: MeasureArg, uncertain: UncertainArg, t: f64) -> ModelConfig {
    ModelConfig {
        t,
        scaling: match scaling {
            ScalingArg::PaperLiteral => HamiltonianScaling::PaperLiteral,
            ScalingArg::UnitSpectrum => HamiltonianScaling::UnitSpectrum,
        },
        alone_measure: match measure {
            MeasureArg::PaperLiteral => AloneMeasure::PaperLiteral,
            MeasureArg::AttackConsistent => AloneMeasure::AttackConsistent,
        },
        uncertain: match uncertain {
            UncertainArg::Orthogonal => UncertainCombination::Orthogonal,
            UncertainArg::Coherent => UncertainCombination::Coherent,
        },
        ..ModelConfig::default()
    }
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Failure {
        let code = match &e {
            IoError::Parse(_) | IoError::File(_) => 2,
            IoError::Validation(_) => 3,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<EvidenceError> for Failure {
    fn from(e: EvidenceError) -> Failure {
        let code = match &e {
            EvidenceError::TotalConflict { .. } => 4,
            EvidenceError::InvalidCbba(_) => 3,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Combine { inputs } => run_combine(&inputs),
        Command::Surface { grid_step, output } => run_surface(grid_step, &output),
        Command::Predict(args) => run_predict(&args),
        Command::Fit(args) => run_fit(&args),
    }
}

fn print_masses(cbba: &Cbba) {
    for (h, m) in cbba.iter() {
        let labels = cbba.frame().members(h).join(",");
        println!("m({labels}) = {m:.6}");
    }
}

fn print_conflict(report: &ConflictReport) {
    println!("K = {:.6}", report.k);
    println!("|K| = {:.6}", report.k_abs);
}

fn run_combine(inputs: &[PathBuf]) -> Result<(), Failure> {
    let mut cbbas = Vec::with_capacity(inputs.len());
    for path in inputs {
        cbbas.push(CbbaDocument::from_path(path)?.to_cbba()?);
    }
    let mut acc = cbbas.remove(0);
    if cbbas.is_empty() {
        // single input: the fold is the identity and carries no conflict
        print_conflict(&ConflictReport { k: gdst::Complex::ZERO, k_abs: 0.0 });
        print_masses(&acc);
        return Ok(());
    }
    for (step, next) in cbbas.iter().enumerate() {
        let out = combine(&acc, next).map_err(Failure::from)?;
        if inputs.len() > 2 {
            println!("step {}:", step + 1);
        }
        print_conflict(&out.conflict);
        for w in &out.warnings {
            eprintln!(
                "warning: |m({})|^2 = {:.6} outside [0, 1]",
                out.cbba.frame().members(w.hypothesis).join(","),
                w.norm_sq
            );
        }
        acc = out.cbba;
    }
    print_masses(&acc);
    Ok(())
}

fn run_surface(grid_step: f64, output: &std::path::Path) -> Result<(), Failure> {
    let rows = conflict_surface(grid_step).map_err(Failure::from)?;
    write_atomic(output, &render_surface_csv(&rows))?;
    println!("{} rows -> {}", rows.len(), output.display());
    Ok(())
}

fn run_predict(args: &PredictArgs) -> Result<(), Failure> {
    let config = model_config(args.scaling, args.alone_measure, args.uncertain, args.t);
    if args.t < 0.0 {
        return Err(Failure::new(2, format!("t must be non-negative, got {}", args.t)));
    }
    let weights = CategoryWeights::new(args.p_g, args.p_b, args.p_u)
        .map_err(|e| Failure::new(2, e.to_string()))?;
    let params = HamiltonianParams::new(args.h_g, args.h_b, args.h_u);
    match args.condition {
        ConditionArg::CThenD => {
            let pred = predict_ctd(&params, &weights, &config)
                .map_err(|e| Failure::new(2, e.to_string()))?;
            for w in &pred.warnings {
                eprintln!("warning: {} = {:.4} outside [0, 1]", w.quantity, w.value);
            }
            println!("P(A|G) = {:.4}", pred.p_a_given_g);
            println!("P(A|B) = {:.4}", pred.p_a_given_b);
            println!("P_T(A) = {:.4}", pred.p_total);
        }
        ConditionArg::DAlone => {
            let pred = predict_alone(&params, &weights, &config)
                .map_err(|e| Failure::new(2, e.to_string()))?;
            for w in &pred.warnings {
                eprintln!("warning: {} = {:.4} outside [0, 1]", w.quantity, w.value);
            }
            println!("P(A) = {:.4}", pred.p_attack);
        }
    }
    Ok(())
}

fn print_fit(label: &str, r: &FitResult) {
    let convergence = if r.converged { "converged" } else { "NOT CONVERGED (best-so-far)" };
    println!(
        "{label}: h_g = {:+.6}, h_b = {:+.6}, h_u = {:+.6}  sse = {:.6e}  start = {}  [{convergence}]",
        r.params.h_g, r.params.h_b, r.params.h_u, r.sse, r.start_index
    );
}

fn run_fit(args: &FitArgs) -> Result<(), Failure> {
    let mut datasets: Vec<ObservedDataset> = Vec::with_capacity(args.datasets.len());
    for path in &args.datasets {
        datasets.push(DatasetDocument::from_path(path)?.to_observed()?);
    }
    let cfg = FitConfig {
        bounds: args.bounds,
        starts: args.starts,
        tol: args.tol,
        max_iters: 2000,
        model: model_config(args.scaling, args.alone_measure, args.uncertain, std::f64::consts::FRAC_PI_2),
        coupling: match args.coupling {
            CouplingArg::Joint => Coupling::Joint { alone_weight: args.alone_weight },
            CouplingArg::Separate => Coupling::Separate,
        },
    };

    match args.condition {
        FitConditionArg::CThenD => {
            for obs in &datasets {
                let r = fit_ctd(obs, &cfg).map_err(|e| Failure::new(2, e.to_string()))?;
                println!("dataset {}", obs.name);
                print_fit("C-then-D", &r);
                println!("P(A|G) = {:.4}", r.predictions.p_a_given_g);
                println!("P(A|B) = {:.4}", r.predictions.p_a_given_b);
                println!("P_T(A) = {:.4}", r.predictions.p_total);
            }
            Ok(())
        }
        FitConditionArg::DAlone => {
            for obs in &datasets {
                let r = fit_alone(obs, &cfg).map_err(|e| Failure::new(2, e.to_string()))?;
                println!("dataset {}", obs.name);
                print_fit("D-alone", &r);
                println!("P(A) = {:.4}", r.predictions.p_a_alone);
            }
            Ok(())
        }
        FitConditionArg::Both => {
            let report =
                evaluate_report(&datasets, &cfg).map_err(|e| Failure::new(2, e.to_string()))?;
            for row in &report.rows {
                println!("dataset {}", row.name);
                print_fit("C-then-D", &row.ctd);
                print_fit("D-alone", &row.alone);
            }
            println!();
            print!("{}", render_report_text(&report));
            if let Some(path) = &args.report {
                write_atomic(path, &render_report_csv(&report))?;
                eprintln!("report -> {}", path.display());
            }
            Ok(())
        }
    }
}
