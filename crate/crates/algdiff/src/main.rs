//! Command-line front end: one binary per pipeline stage, stable JSON
//! formats, exit code 0 on success, 1 on violated hypotheses or failed
//! certificates, 2 on internal invariant breaches.

use algdiff::algtodiff::{
    alg_to_diff, alg_to_diff_heuristic, alg_to_diff_prob, HeuristicFlavor,
};
use algdiff::arith::text::parse_bipoly;
use algdiff::bounds::{eta, thm2_bounds, thm3_bound, thm4_presets, DegreeProfile};
use algdiff::diffop::{diffop_from_json, diffop_to_json, DiffOp, DiffOpJson};
use algdiff::error::Error;
use algdiff::lab;
use algdiff::rec::{expand, expand_algebra, expand_newton, expand_with_op, Via};
use algdiff::resolvent::{cockle_fraction, resolvent};
use algdiff::telescope::{find_lambda, find_theta_operator, verify_associated};
use algdiff::{BiPoly, FieldSpec, VarForm};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "algdiff", version, about = "Differential operators and fast expansion for algebraic series")]
struct Cli {
    /// Work over the prime field F_p.
    #[arg(long, global = true)]
    modulus: Option<u64>,
    /// Work over the rationals.
    #[arg(long, global = true)]
    rational: bool,
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker hint; the current implementation is single-threaded.
    #[arg(long, global = true, default_value_t = 1, hide = true)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Series,
    Fraction,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarArg {
    Dx,
    Theta,
}

impl From<VarArg> for VarForm {
    fn from(v: VarArg) -> VarForm {
        match v {
            VarArg::Dx => VarForm::Dx,
            VarArg::Theta => VarForm::Theta,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TelescopeMode {
    Quadratic,
    Refined,
}

#[derive(Clone, Copy, ValueEnum)]
enum RunMode {
    Det,
    Prob,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViaArg {
    Recurrence,
    Newton,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimal differential resolvent of P.
    Resolvent {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::Series)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = VarArg::Dx)]
        var: VarArg,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Creative-telescoping operator associated to P.
    Telescope {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = TelescopeMode::Refined)]
        mode: TelescopeMode,
        /// Order/degree parameter for refined mode (default: the proven bound).
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Operator by Padé–Hermite approximation.
    Algtodiff {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        expr: Option<String>,
        /// 1|2|3 select the proven presets; thm2|thm3 the heuristics.
        #[arg(long, default_value = "2")]
        preset: String,
        #[arg(long, value_enum, default_value_t = RunMode::Det)]
        mode: RunMode,
        #[arg(long, value_enum, default_value_t = VarArg::Theta)]
        var: VarArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Force an a-posteriori certificate even in deterministic mode.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// First N coefficients of a root of P.
    Expand {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        expr: Option<String>,
        /// Scalar root value at X = 0, or "algebra" for all conjugates.
        #[arg(long)]
        root: String,
        #[arg(long)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = ViaArg::Recurrence)]
        via: ViaArg,
        /// Operator JSON to drive the recurrence (default: resolvent).
        #[arg(long)]
        op: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Degree and precision bounds for a bidegree profile.
    Bounds {
        #[arg(long)]
        dx: usize,
        #[arg(long)]
        dy: usize,
        /// Total degree (defaults to dx + dy).
        #[arg(long)]
        d: Option<usize>,
    },
    /// Certify that an operator annihilates every root of P.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        op: PathBuf,
    },
    /// Experiment drivers.
    Lab {
        #[command(subcommand)]
        what: LabCmd,
    },
}

#[derive(Subcommand)]
enum LabCmd {
    Table1 {
        #[arg(long, default_value_t = 3)]
        max_d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here (text goes to stdout).
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    Table2 {
        #[arg(long, default_value_t = 8)]
        dy: usize,
        #[arg(long = "n", num_args = 1.., default_values_t = [4096usize, 8192, 16384])]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    Conjectures {
        #[arg(long, default_value_t = 3)]
        max_d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
}

fn field_of(cli: &Cli) -> Result<FieldSpec, Error> {
    match (cli.modulus, cli.rational) {
        (Some(_), true) => Err(Error::InvalidInput(
            "--modulus and --rational are mutually exclusive".into(),
        )),
        (Some(p), false) => FieldSpec::prime(p),
        (None, _) => Ok(FieldSpec::rational()),
    }
}

fn read_poly(
    field: FieldSpec,
    input: &Option<PathBuf>,
    expr: &Option<String>,
) -> Result<BiPoly, Error> {
    let text = match (expr, input) {
        (Some(e), _) if e == "-" => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
            buf
        }
        (Some(e), _) => e.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?,
        (None, None) => {
            return Err(Error::InvalidInput(
                "provide the polynomial via --expr or --input".into(),
            ))
        }
    };
    let text = text.trim();
    if text.starts_with('{') {
        let j: algdiff::arith::text::BiPolyJson = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("polynomial JSON: {e}")))?;
        algdiff::arith::text::bipoly_from_json(&j)
    } else {
        parse_bipoly(field, text)
    }
}

fn emit_op(op: &DiffOp, output: &Option<PathBuf>) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(&diffop_to_json(op)).unwrap();
    match output {
        Some(path) => std::fs::write(path, json)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn read_op(field: FieldSpec, path: &PathBuf) -> Result<DiffOp, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let j: DiffOpJson =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("operator JSON: {e}")))?;
    diffop_from_json(field, &j)
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.cmd {
        Cmd::Resolvent { input, expr, method, var, output, seed } => {
            let field = field_of(cli)?;
            let p = read_poly(field, input, expr)?;
            let (op, r) = match method {
                MethodArg::Series => resolvent(&p, *seed)?,
                MethodArg::Fraction => cockle_fraction(&p)?,
            };
            let op = match var {
                VarArg::Dx => op,
                VarArg::Theta => op.to_theta_form()?,
            };
            if !cli.json {
                eprintln!("resolvent order {r}, deg_X {}", op.deg_x());
            }
            emit_op(&op, output)?;
        }
        Cmd::Telescope { input, expr, mode, d, output } => {
            let field = field_of(cli)?;
            let p = read_poly(field, input, expr)?;
            let op = match mode {
                TelescopeMode::Quadratic => {
                    let dx = p.deg_x().unwrap_or(0);
                    let dy = p.deg_y().ok_or(Error::ConstantInY)?;
                    let (n_x, n_d, _, _) = thm2_bounds(dx, dy);
                    find_lambda(&p, *d.as_ref().unwrap_or(&n_x).min(&n_x), n_d)?.a
                }
                TelescopeMode::Refined => {
                    let dd = d.map(Ok).unwrap_or_else(|| {
                        DegreeProfile::of(&p).map(|prof| thm3_bound(&prof))
                    })?;
                    find_theta_operator(&p, dd)?.ok_or_else(|| {
                        Error::InvalidInput(format!("no θ-operator at d = {dd}"))
                    })?
                }
            };
            emit_op(&op, output)?;
        }
        Cmd::Algtodiff { input, expr, preset, mode, var, seed, verify, output } => {
            let field = field_of(cli)?;
            let p = read_poly(field, input, expr)?;
            let var_form: VarForm = (*var).into();
            let res = match preset.as_str() {
                "thm2" => alg_to_diff_heuristic(&p, HeuristicFlavor::Thm2, var_form, *seed)?,
                "thm3" => alg_to_diff_heuristic(&p, HeuristicFlavor::Thm3, var_form, *seed)?,
                k @ ("1" | "2" | "3") => {
                    let idx: usize = k.parse::<usize>().unwrap() - 1;
                    let dx = p.deg_x().unwrap_or(0);
                    let dy = p.deg_y().ok_or(Error::ConstantInY)?;
                    let (b_x, b_d) = thm4_presets(dx, dy)?[idx];
                    match mode {
                        RunMode::Det => alg_to_diff(&p, b_x, b_d, var_form)?,
                        RunMode::Prob => alg_to_diff_prob(&p, b_x, b_d, var_form, *seed)?,
                    }
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown preset {other:?} (use 1|2|3|thm2|thm3)"
                    )))
                }
            };
            let certified = if *verify && res.mode == algdiff::algtodiff::Mode::Deterministic {
                verify_associated(&res.op, &p)?
            } else {
                res.verified
            };
            if !cli.json {
                eprintln!(
                    "order {}, deg_X {}, verified: {certified}",
                    res.op.order(),
                    res.op.deg_x()
                );
            }
            emit_op(&res.op, output)?;
            if !certified {
                return Ok(false);
            }
        }
        Cmd::Expand { input, expr, root, terms, via, op, seed } => {
            let field = field_of(cli)?;
            let p = read_poly(field, input, expr)?;
            if root == "algebra" {
                let via = match via {
                    ViaArg::Recurrence => Via::Recurrence,
                    ViaArg::Newton => Via::Newton,
                };
                let coeffs = expand_algebra(&p, *terms, via, *seed)?;
                if cli.json {
                    let arr: Vec<Vec<String>> = coeffs
                        .iter()
                        .map(algdiff::arith::text::unipoly_to_json)
                        .collect();
                    println!("{}", serde_json::to_string(&arr).unwrap());
                } else {
                    for c in &coeffs {
                        println!("{}", c.format_with_var("y"));
                    }
                }
            } else {
                let y0 = field.parse_scalar(root)?;
                let coeffs = match (via, op) {
                    (ViaArg::Newton, _) => expand_newton(&p, &y0, *terms)?,
                    (ViaArg::Recurrence, Some(path)) => {
                        let op = read_op(field, path)?;
                        expand_with_op(&p, &y0, *terms, &op)?
                    }
                    (ViaArg::Recurrence, None) => expand(&p, &y0, *terms, Via::Recurrence, *seed)?,
                };
                if cli.json {
                    let arr: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
                    println!("{}", serde_json::to_string(&arr).unwrap());
                } else {
                    for c in &coeffs {
                        println!("{c}");
                    }
                }
            }
        }
        Cmd::Bounds { dx, dy, d } => {
            let mut out = serde_json::Map::new();
            let mut etas = serde_json::Map::new();
            for r in 1..=*dy {
                etas.insert(format!("r={r}"), eta(*dx, *dy, r)?.into());
            }
            out.insert("eta".into(), etas.into());
            let (t_deg, t_ord, rec_ord, rec_deg) = thm2_bounds(*dx, *dy);
            out.insert(
                "thm2".into(),
                serde_json::json!({
                    "deg_x": t_deg, "order": t_ord,
                    "rec_order": rec_ord, "rec_deg": rec_deg
                }),
            );
            let total = d.unwrap_or(dx + dy);
            let profile = DegreeProfile::new(*dx, *dy, total)?;
            out.insert("thm3".into(), thm3_bound(&profile).into());
            if *dy >= 2 {
                let presets = thm4_presets(*dx, *dy)?;
                out.insert("thm4_presets".into(), serde_json::json!(presets));
            }
            println!("{}", serde_json::to_string_pretty(&serde_json::Value::Object(out)).unwrap());
        }
        Cmd::Verify { input, expr, op } => {
            let field = field_of(cli)?;
            let p = read_poly(field, input, expr)?;
            let op = read_op(field, op)?;
            let ok = verify_associated(&op, &p)?;
            if cli.json {
                println!("{}", serde_json::json!({ "verified": ok }));
            } else {
                println!("{}", if ok { "verified" } else { "NOT associated" });
            }
            return Ok(ok);
        }
        Cmd::Lab { what } => {
            let (report, json_out) = match what {
                LabCmd::Table1 { max_d, seed, json_out } => {
                    let field = field_of(cli).unwrap_or(FieldSpec::rational());
                    let field = if cli.modulus.is_none() && !cli.rational {
                        FieldSpec::prime(9973)?
                    } else {
                        field
                    };
                    (lab::run_table1(*max_d, field, *seed)?, json_out)
                }
                LabCmd::Table2 { dy, n_list, seed, json_out } => {
                    (lab::run_table2(*dy, n_list, *seed)?, json_out)
                }
                LabCmd::Conjectures { max_d, seed, json_out } => {
                    let ds: Vec<usize> = (1..=*max_d).collect();
                    (lab::run_conjectures(&ds, *seed)?, json_out)
                }
            };
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if let Some(path) = json_out {
                std::fs::write(path, report.to_json())
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
