//! Command-line front end for the modal satisfiability workbench.
//!
//! Exit codes: 0 = SAT (or plain success), 1 = UNSAT, 2 = usage or input
//! error, 3 = the oracle's world budget ran out below its completeness
//! bound. `solve` and `oracle` print the verdict as the first stdout line,
//! machine-parsable.

use clap::{Args, Parser, Subcommand, ValueEnum};
use modalsat_core::{
    brute_force_sat, classify_operator_set, completeness_bound, fixed_frame_sat, frame3,
    normalize_qbf, parse, poorman_sat_k, poorman_sat_kd_pairs, poorman_sat_le1, reduce_3col,
    reduce_constants_to_vars, reduce_eliminate_true, reduce_kd_to_k, reduce_onevar_to_zerovar,
    reduce_qbf, sat, sat_k_tableau, sat_kd_tableau, sat_le1, sat_le2, Decision, Formula,
    FrameClass, Graph, KripkeModel, OperatorSet, OracleOutcome, QbfInstance, SatVerdict,
};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "modalsat",
    version,
    about = "Decide, classify, and transform modal satisfiability problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a formula over a frame class.
    Solve(SolveArgs),
    /// Print the complexity classification of an operator set.
    Classify {
        /// Comma-separated operators, e.g. "atneg,and,box,dia" ("" = none).
        #[arg(value_name = "OPSET")]
        opset: String,
    },
    /// Print the set of operators a formula uses.
    Fragment {
        /// Formula text ("-" reads stdin).
        #[arg(value_name = "FORMULA")]
        formula: String,
    },
    /// Rewrite an input problem through one of the reductions.
    Reduce(ReduceArgs),
    /// Decide by bounded exhaustive model enumeration.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Frame class to decide over.
    #[arg(long, value_enum)]
    frame: FrameArg,
    /// Decision procedure.
    #[arg(long, value_enum, default_value_t = AlgoArg::Auto)]
    algo: AlgoArg,
    /// World budget for the exhaustive oracle (required by --algo oracle).
    #[arg(long, value_name = "N")]
    max_worlds: Option<usize>,
    /// On SAT, write the witness model as JSON to this path.
    #[arg(long, value_name = "FILE")]
    model_out: Option<PathBuf>,
    /// Formula text ("-" reads stdin).
    #[arg(value_name = "FORMULA", conflicts_with = "input")]
    formula: Option<String>,
    /// Read the formula from a file ("-" reads stdin).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Frame class to decide over.
    #[arg(long, value_enum)]
    frame: FrameArg,
    /// World budget for the enumeration.
    #[arg(long, value_name = "N")]
    max_worlds: usize,
    /// Formula text ("-" reads stdin).
    #[arg(value_name = "FORMULA", conflicts_with = "input")]
    formula: Option<String>,
    /// Read the formula from a file ("-" reads stdin).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Which reduction to apply.
    #[arg(value_enum, value_name = "REDUCTION")]
    reduction: ReductionArg,
    /// Input file ("-" reads stdin): graph JSON for 3col, quantified-CNF
    /// JSON for qbf, a formula for the rest.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Also decide the output on the reduction's target frame class.
    #[arg(long)]
    solve: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FrameArg {
    /// All frames.
    K,
    /// Serial frames: every world has a successor.
    Kd,
    /// At most one successor per world.
    Le1,
    /// At most two successors per world.
    Le2,
    /// The fixed three-leaf coloring frame.
    Frame3,
}

impl FrameArg {
    fn to_class(self) -> FrameClass {
        match self {
            FrameArg::K => FrameClass::K,
            FrameArg::Kd => FrameClass::Serial,
            FrameArg::Le1 => FrameClass::AtMostOne,
            FrameArg::Le2 => FrameClass::AtMostTwo,
            FrameArg::Frame3 => FrameClass::Fixed(frame3()),
        }
    }

    fn name(self) -> &'static str {
        match self {
            FrameArg::K => "k",
            FrameArg::Kd => "kd",
            FrameArg::Le1 => "le1",
            FrameArg::Le2 => "le2",
            FrameArg::Frame3 => "frame3",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    /// Pick the fastest sound procedure for the frame and fragment.
    Auto,
    /// The general branching solver.
    Tableau,
    /// The dedicated poor man's fragment procedures.
    Poorman,
    /// Bounded exhaustive model enumeration.
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionArg {
    /// Graph 3-colorability to fixed-frame satisfiability.
    #[value(name = "3col")]
    ThreeCol,
    /// Quantified 3CNF truth to satisfiability over two-successor frames.
    Qbf,
    /// Serial-frame satisfiability to arbitrary-frame satisfiability.
    Kd2k,
    /// Replace constants by globally pinned fresh variables.
    Const2var,
    /// Remove the constant true from conjunction/box/diamond formulas.
    Elimtrue,
    /// Compress a one-variable formula to a variable-free one.
    Onevar2zerovar,
}

fn main() {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    std::process::exit(run(cli, &mut out, &mut err));
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args, out, err),
        Command::Classify { opset } => cmd_classify(&opset, out),
        Command::Fragment { formula } => cmd_fragment(&formula, out),
        Command::Reduce(args) => cmd_reduce(args, out, err),
        Command::Oracle(args) => cmd_oracle(args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn cmd_solve(args: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let text = read_input(args.formula.as_deref(), args.input.as_deref())?;
    let f = parse(&text).map_err(|e| e.to_string())?;
    let fc = args.frame.to_class();
    let verdict = match args.algo {
        AlgoArg::Auto => sat(&f, &fc),
        AlgoArg::Tableau => match args.frame {
            FrameArg::K => sat_k_tableau(&f),
            FrameArg::Kd => sat_kd_tableau(&f),
            FrameArg::Le1 => sat_le1(&f),
            FrameArg::Le2 => sat_le2(&f),
            FrameArg::Frame3 => {
                return Err(
                    "the tableau decides frame classes, not fixed frames; use --algo auto"
                        .to_string(),
                )
            }
        },
        AlgoArg::Poorman => match args.frame {
            FrameArg::K => poorman_sat_k(&f).map_err(|e| e.to_string())?,
            FrameArg::Kd => poorman_sat_kd_pairs(&f).map_err(|e| e.to_string())?,
            FrameArg::Le1 => poorman_sat_le1(&f).map_err(|e| e.to_string())?,
            FrameArg::Le2 | FrameArg::Frame3 => {
                return Err(format!(
                    "no dedicated poor man's procedure exists for {}; use --algo auto",
                    args.frame.name()
                ))
            }
        },
        AlgoArg::Oracle => {
            if let FrameClass::Fixed(frame) = &fc {
                verdict_from_model(fixed_frame_sat(&f, frame))
            } else {
                let budget = args
                    .max_worlds
                    .ok_or_else(|| "--algo oracle requires --max-worlds".to_string())?;
                match brute_force_sat(&f, &fc, budget) {
                    OracleOutcome::Sat(m) => verdict_from_model(Some(m)),
                    OracleOutcome::Unsat => verdict_from_model(None),
                    OracleOutcome::BoundExceeded => {
                        return bound_exceeded(&f, &fc, budget, out, err);
                    }
                }
            }
        }
    };
    let satisfiable = verdict.is_sat();
    let _ = writeln!(out, "{}", if satisfiable { "SAT" } else { "UNSAT" });
    if let Some(path) = &args.model_out {
        if satisfiable {
            let model = match verdict.witness {
                Some(m) => m,
                None => rederive_witness(&f, args.frame).ok_or_else(|| {
                    "internal: no witness could be rebuilt for a satisfiable formula".to_string()
                })?,
            };
            write_model(path, &model)?;
        } else {
            let _ = writeln!(err, "note: no model written; the formula is unsatisfiable");
        }
    }
    Ok(if satisfiable { 0 } else { 1 })
}

/// Procedures that answer without constructing a model (the pairwise serial
/// check) leave `witness` empty; rebuild one with the general solver.
fn rederive_witness(f: &Formula, frame: FrameArg) -> Option<KripkeModel> {
    match frame {
        FrameArg::K => sat_k_tableau(f).witness,
        FrameArg::Kd => sat_kd_tableau(f).witness,
        FrameArg::Le1 => sat_le1(f).witness,
        FrameArg::Le2 => sat_le2(f).witness,
        FrameArg::Frame3 => fixed_frame_sat(f, &frame3()),
    }
}

fn verdict_from_model(model: Option<KripkeModel>) -> SatVerdict {
    match model {
        Some(m) => SatVerdict {
            decision: Decision::Sat,
            witness: Some(m),
            trace: None,
        },
        None => SatVerdict {
            decision: Decision::Unsat,
            witness: None,
            trace: None,
        },
    }
}

fn bound_exceeded(
    f: &Formula,
    fc: &FrameClass,
    budget: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, String> {
    let _ = writeln!(out, "BOUND_EXCEEDED");
    let _ = writeln!(
        err,
        "note: no model within {budget} worlds, but completeness needs {}; no verdict",
        completeness_bound(f, fc)
    );
    Ok(3)
}

fn cmd_classify(opset: &str, out: &mut dyn Write) -> Result<i32, String> {
    let s: OperatorSet = opset.parse().map_err(|e| format!("{e}"))?;
    let _ = writeln!(out, "{}", classify_operator_set(s));
    Ok(0)
}

fn cmd_fragment(formula: &str, out: &mut dyn Write) -> Result<i32, String> {
    let text = read_input(Some(formula), None)?;
    let f = parse(&text).map_err(|e| e.to_string())?;
    let _ = writeln!(out, "{}", f.operator_set());
    Ok(0)
}

fn cmd_reduce(args: ReduceArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let text = read_path(&args.input)?;
    let (output, target) = match args.reduction {
        ReductionArg::ThreeCol => {
            let g: Graph = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let f = reduce_3col(&g).map_err(|e| e.to_string())?;
            (f, FrameArg::Frame3)
        }
        ReductionArg::Qbf => {
            let q: QbfInstance = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let norm = normalize_qbf(&q.prefix, &q.clauses).map_err(|e| e.to_string())?;
            if norm != q {
                let _ = writeln!(
                    err,
                    "note: instance normalized to strict form (n={})",
                    norm.n
                );
            }
            (reduce_qbf(&norm), FrameArg::Le2)
        }
        ReductionArg::Kd2k => {
            let f = parse(text.trim()).map_err(|e| e.to_string())?;
            if !f.is_poor_mans() {
                return Err(format!(
                    "the serial-to-arbitrary transfer accepts only the poor man's fragment \
                     (operators found: {})",
                    f.operator_set()
                ));
            }
            (reduce_kd_to_k(&f), FrameArg::K)
        }
        ReductionArg::Const2var => {
            let f = parse(text.trim()).map_err(|e| e.to_string())?;
            (
                reduce_constants_to_vars(&f).map_err(|e| e.to_string())?,
                FrameArg::K,
            )
        }
        ReductionArg::Elimtrue => {
            let f = parse(text.trim()).map_err(|e| e.to_string())?;
            (
                reduce_eliminate_true(&f).map_err(|e| e.to_string())?,
                FrameArg::K,
            )
        }
        ReductionArg::Onevar2zerovar => {
            let f = parse(text.trim()).map_err(|e| e.to_string())?;
            (
                reduce_onevar_to_zerovar(&f).map_err(|e| e.to_string())?,
                FrameArg::K,
            )
        }
    };
    let mut code = 0;
    if args.solve {
        let verdict = sat(&output, &target.to_class());
        let _ = writeln!(out, "{}", if verdict.is_sat() { "SAT" } else { "UNSAT" });
        code = if verdict.is_sat() { 0 } else { 1 };
    }
    let _ = writeln!(out, "{output}");
    let _ = writeln!(out, "target: {}", target.name());
    Ok(code)
}

fn cmd_oracle(args: OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let text = read_input(args.formula.as_deref(), args.input.as_deref())?;
    let f = parse(&text).map_err(|e| e.to_string())?;
    let fc = args.frame.to_class();
    let outcome = if let FrameClass::Fixed(frame) = &fc {
        match fixed_frame_sat(&f, frame) {
            Some(m) => OracleOutcome::Sat(m),
            None => OracleOutcome::Unsat,
        }
    } else {
        brute_force_sat(&f, &fc, args.max_worlds)
    };
    match outcome {
        OracleOutcome::Sat(_) => {
            let _ = writeln!(out, "SAT");
            Ok(0)
        }
        OracleOutcome::Unsat => {
            let _ = writeln!(out, "UNSAT");
            Ok(1)
        }
        OracleOutcome::BoundExceeded => bound_exceeded(&f, &fc, args.max_worlds, out, err),
    }
}

fn read_input(formula: Option<&str>, file: Option<&Path>) -> Result<String, String> {
    match (formula, file) {
        (Some(_), Some(_)) => Err("pass either a formula or --in, not both".to_string()),
        (Some("-"), None) => read_stdin(),
        (Some(text), None) => Ok(text.to_string()),
        (None, Some(path)) => read_path(path),
        (None, None) => {
            Err("no input given: pass a formula, --in FILE, or \"-\" for stdin".to_string())
        }
    }
}

fn read_path(path: &Path) -> Result<String, String> {
    if path.as_os_str() == "-" {
        return read_stdin();
    }
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_stdin() -> Result<String, String> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| format!("stdin: {e}"))?;
    Ok(buf)
}

fn write_model(path: &Path, model: &KripkeModel) -> Result<(), String> {
    let json = serde_json::to_string_pretty(model).expect("models serialize");
    std::fs::write(path, json + "\n").map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invoke(argv: &[&str]) -> (i32, String, String) {
        let cli = Cli::try_parse_from(argv).expect("test argv parses");
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(cli, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn solve_prints_the_verdict_first() {
        let (code, out, _) = invoke(&["modalsat", "solve", "--frame", "kd", "[]p & []~p"]);
        assert_eq!(code, 1);
        assert_eq!(out.lines().next(), Some("UNSAT"));

        let (code, out, _) = invoke(&["modalsat", "solve", "--frame", "k", "[]p & []~p"]);
        assert_eq!(code, 0);
        assert_eq!(out, "SAT\n");
    }

    #[test]
    fn algo_choices_agree() {
        let formula = "<>p & <>~p & [](q | ~p)";
        for algo in ["auto", "tableau"] {
            let (code, out, _) =
                invoke(&["modalsat", "solve", "--frame", "kd", "--algo", algo, formula]);
            assert_eq!(code, 0, "algo {algo}");
            assert_eq!(out, "SAT\n");
        }
        let (code, _, err) = invoke(&[
            "modalsat", "solve", "--frame", "kd", "--algo", "poorman", formula,
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("poor man's fragment"));
    }

    #[test]
    fn oracle_budget_exhaustion_is_reported() {
        let (code, out, err) = invoke(&[
            "modalsat",
            "oracle",
            "--frame",
            "kd",
            "--max-worlds",
            "1",
            "<>p & <>~p",
        ]);
        assert_eq!(code, 3);
        assert_eq!(out, "BOUND_EXCEEDED\n");
        assert!(err.contains("completeness"));
    }

    #[test]
    fn classification_examples() {
        let (code, out, _) = invoke(&["modalsat", "classify", "atneg,and,box,dia"]);
        assert_eq!(code, 0);
        assert_eq!(out, "coNP-complete (Theorem conp, case 1)\n");

        let (code, out, _) = invoke(&["modalsat", "classify", "neg,and,box"]);
        assert_eq!(code, 0);
        assert_eq!(out, "PSPACE-complete (Theorem pspace, case 1)\n");

        let (code, _, err) = invoke(&["modalsat", "classify", "nand"]);
        assert_eq!(code, 2);
        assert!(err.contains("nand"));
    }

    #[test]
    fn fragment_reports_operator_sets() {
        let (code, out, _) = invoke(&["modalsat", "fragment", "~p & [](q | true)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "atneg,and,or,box,true\n");
    }

    #[test]
    fn reduce_transfers_serial_to_arbitrary_frames() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        std::fs::write(&path, "[]p & <>q\n").unwrap();
        let (code, out, _) = invoke(&[
            "modalsat",
            "reduce",
            "kd2k",
            "--in",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "[]p & <>q & <>__aux_q & []<>__aux_q\ntarget: k\n");
    }

    #[test]
    fn reduce_solve_decides_on_the_target_frame() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k4.json");
        std::fs::write(
            &path,
            r#"{"n":4,"edges":[[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#,
        )
        .unwrap();
        let (code, out, _) = invoke(&[
            "modalsat",
            "reduce",
            "3col",
            "--in",
            path.to_str().unwrap(),
            "--solve",
        ]);
        assert_eq!(code, 1);
        assert_eq!(out.lines().next(), Some("UNSAT"));
        assert_eq!(out.lines().last(), Some("target: frame3"));
    }

    #[test]
    fn model_out_rebuilds_witnesses_for_decision_only_procedures() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let (code, out, _) = invoke(&[
            "modalsat",
            "solve",
            "--frame",
            "kd",
            "--algo",
            "poorman",
            "--model-out",
            path.to_str().unwrap(),
            "<>p & []q",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "SAT\n");
        let text = std::fs::read_to_string(&path).unwrap();
        let model: KripkeModel = serde_json::from_str(&text).unwrap();
        assert!(model.worlds.contains(&model.root));
    }

    #[test]
    fn missing_input_is_a_usage_error() {
        let (code, _, err) = invoke(&["modalsat", "solve", "--frame", "k"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error:"));
    }
}
