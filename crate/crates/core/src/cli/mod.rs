//! Command-line front end. [`run_with`] is the testable entry point; exit codes
//! are 0 on success, 1 when a verification or identity check fails and 2 on
//! usage or input errors.

pub mod generators;
pub mod io;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::curvature::operator_matrix;
use crate::positivity::{
    classify, dual_nakano_class, griffiths_min, hermitian_spectrum, nakano_class, theorem_chain_report, DEFAULT_TOL,
};
use crate::verify::{run_suite, SuiteConfig};
use crate::{CMatrix, CurvatureTensor, Error, SymmetryMode, C64};

use generators::fubini_study_tensor;

#[derive(Parser, Debug)]
#[command(name = "curvop", version, about = "Curvature operators of Hermitian vector bundles on (p,q)-forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug)]
struct TensorInput {
    /// Tensor file.
    #[arg(long)]
    input: PathBuf,
    /// Replace the tensor by its Hermitian part instead of rejecting asymmetric input.
    #[arg(long)]
    symmetrize: bool,
}

impl TensorInput {
    fn load(&self) -> crate::Result<CurvatureTensor> {
        let mode = if self.symmetrize {
            SymmetryMode::Symmetrize
        } else {
            SymmetryMode::Strict
        };
        io::read_tensor_file(&self.input, mode)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the matrix of [iΘ, Λ] on E-valued (p,q)-forms and its spectrum.
    Matrix {
        #[command(flatten)]
        tensor: TensorInput,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Nakano, dual Nakano and Griffiths classes, and the per-bidegree table.
    Classify {
        #[command(flatten)]
        tensor: TensorInput,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Random starts of the Griffiths search.
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        /// Alternating sweeps per start.
        #[arg(long, default_value_t = 50)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply the Hodge star to a form file.
    Star {
        #[arg(long = "input-form")]
        input_form: PathBuf,
    },
    /// Apply the tilde map to a form file.
    Tilde {
        #[arg(long = "input-form")]
        input_form: PathBuf,
    },
    /// Write the curvature tensor of the dual metric.
    Dual {
        #[command(flatten)]
        tensor: TensorInput,
    },
    /// Built-in examples.
    Example {
        #[command(subcommand)]
        which: Example,
    },
    /// Seeded property suite.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Classification tolerance.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum Example {
    /// Fubini–Study metric on the tangent bundle of P^n.
    FubiniStudy {
        #[arg(long)]
        n: usize,
        /// Write the tensor file to PATH, or to stdout when PATH is omitted.
        #[arg(long, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
        emit: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

/// Parses `std::env::args` and runs against the process streams.
pub fn run() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn check_tol(tol: f64) -> crate::Result<()> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("--tol must be finite and non-negative, got {tol}")))
    }
}

fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn write_matrix(out: &mut dyn Write, m: &CMatrix) -> std::io::Result<()> {
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|z| fmt_complex(*z)).collect();
        writeln!(out, "[{}]", cells.join(", "))?;
    }
    Ok(())
}

fn fmt_spectrum(s: &[f64]) -> String {
    let parts: Vec<String> = s.iter().map(|x| format!("{x:.12}")).collect();
    format!("[{}]", parts.join(", "))
}

fn json_matrix(m: &CMatrix) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = m
        .row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    json!(rows)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> crate::Result<i32> {
    match cmd {
        Command::Matrix {
            tensor,
            p,
            q,
            tol,
            format,
        } => {
            check_tol(tol)?;
            let c = tensor.load()?;
            let op = operator_matrix(&c, p, q)?;
            let spectrum = hermitian_spectrum(&op.matrix)?;
            let class = classify(&spectrum, tol);
            let defect = op.hermitian_defect();
            match format {
                Format::Json => {
                    let v = json!({
                        "n": c.n(),
                        "r": c.rank(),
                        "bidegree": [p, q],
                        "fiber": "E",
                        "tol": tol,
                        "matrix": json_matrix(&op.matrix),
                        "spectrum": spectrum,
                        "class": class,
                        "residuals": { "hermitian_defect": defect },
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
                Format::Text => {
                    writeln!(out, "# curvop matrix n={} r={} tol={tol:e}", c.n(), c.rank())?;
                    writeln!(out, "A^{{{p},{q}}} on E, dimension {}", op.dim())?;
                    write_matrix(out, &op.matrix)?;
                    writeln!(out, "spectrum: {}", fmt_spectrum(&spectrum))?;
                    writeln!(out, "class: {class}")?;
                    writeln!(out, "hermitian defect: {defect:e}")?;
                }
            }
            Ok(0)
        }
        Command::Classify {
            tensor,
            tol,
            restarts,
            iters,
            seed,
            format,
        } => {
            check_tol(tol)?;
            let c = tensor.load()?;
            let report = theorem_chain_report(&c, tol)?;
            let griffiths = griffiths_min(&c, restarts, iters, seed);
            let griffiths_class = if griffiths.value < -tol {
                "not_griffiths_semi_positive"
            } else if griffiths.value > tol {
                "griffiths_positive_heuristic"
            } else {
                "griffiths_semi_positive_heuristic"
            };
            match format {
                Format::Json => {
                    let v = json!({
                        "tol": tol,
                        "seed": seed,
                        "restarts": restarts,
                        "iters": iters,
                        "report": report,
                        "griffiths": {
                            "heuristic": true,
                            "value": griffiths.value,
                            "class": griffiths_class,
                            "xi": griffiths.xi.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                            "s": griffiths.s.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                        },
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
                Format::Text => {
                    writeln!(
                        out,
                        "# curvop classify n={} r={} tol={tol:e} seed={seed} restarts={restarts} iters={iters}",
                        c.n(),
                        c.rank()
                    )?;
                    writeln!(out, "nakano: {} {}", report.nakano.class, fmt_spectrum(&report.nakano.spectrum))?;
                    writeln!(
                        out,
                        "dual nakano: {} {}",
                        report.dual_nakano.class,
                        fmt_spectrum(&report.dual_nakano.spectrum)
                    )?;
                    writeln!(
                        out,
                        "griffiths (heuristic upper bound on min θ(ξ⊗s)): {:.12} -> {griffiths_class}",
                        griffiths.value
                    )?;
                    writeln!(out, "bidegree  class          min            max            negation_gap  star_gap")?;
                    for e in &report.bidegrees {
                        let (lo, hi) = match (e.spectrum.first(), e.spectrum.last()) {
                            (Some(a), Some(b)) => (*a, *b),
                            _ => (0.0, 0.0),
                        };
                        writeln!(
                            out,
                            "({},{})     {:<14} {:<14.6e} {:<14.6e} {:<13.3e} {:.3e}",
                            e.bidegree.0,
                            e.bidegree.1,
                            e.class.as_str(),
                            lo,
                            hi,
                            e.negation_gap,
                            e.star_gap
                        )?;
                    }
                    writeln!(out, "chain:")?;
                    for m in &report.chain {
                        let mark = if m.consistent { "ok" } else { "MISMATCH" };
                        writeln!(out, "  {:<14} {:<14} {mark} (gap {:.3e})", m.label, m.class.as_str(), m.gap)?;
                    }
                    for v in &report.violations {
                        writeln!(out, "violation: {} {} (witness {:.3e})", v.label, v.detail, v.witness)?;
                    }
                    for s in &report.inferences {
                        writeln!(out, "inference: {s}")?;
                    }
                }
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Star { input_form } => {
            let u = io::read_form_file(&input_form)?;
            out.write_all(io::emit_form(&u.hodge_star()).as_bytes())?;
            Ok(0)
        }
        Command::Tilde { input_form } => {
            let u = io::read_form_file(&input_form)?;
            out.write_all(io::emit_form(&u.tilde_map()).as_bytes())?;
            Ok(0)
        }
        Command::Dual { tensor } => {
            let c = tensor.load()?;
            out.write_all(io::emit_tensor(&c.dual()).as_bytes())?;
            Ok(0)
        }
        Command::Example {
            which: Example::FubiniStudy { n, emit, tol },
        } => {
            check_tol(tol)?;
            if n == 0 {
                return Err(Error::Invalid("--n must be at least 1".into()));
            }
            let c = fubini_study_tensor(n);
            let nak = nakano_class(&c, tol)?;
            let dual = dual_nakano_class(&c, tol)?;
            if emit.as_deref() == Some("-") {
                out.write_all(io::emit_tensor(&c).as_bytes())?;
                return Ok(0);
            }
            writeln!(out, "# curvop example fubini-study n={n} r={n} tol={tol:e}")?;
            writeln!(out, "nakano: {} {}", nak.class, fmt_spectrum(&nak.spectrum))?;
            writeln!(out, "dual nakano: {} {}", dual.class, fmt_spectrum(&dual.spectrum))?;
            if let Some(path) = emit {
                std::fs::write(&path, io::emit_tensor(&c))?;
                writeln!(out, "wrote {path}")?;
            }
            Ok(0)
        }
        Command::Verify {
            n,
            r,
            trials,
            seed,
            tol,
            format,
        } => {
            check_tol(tol)?;
            if n == 0 || r == 0 {
                return Err(Error::Invalid("--n and --r must be at least 1".into()));
            }
            let cfg = SuiteConfig {
                tol,
                ..SuiteConfig::new(n, r, trials, seed)
            };
            let results = run_suite(&cfg)?;
            let all = results.iter().all(|p| p.passed);
            match format {
                Format::Json => {
                    let v = json!({ "config": cfg, "passed": all, "properties": results });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
                Format::Text => {
                    writeln!(out, "# curvop verify n={n} r={r} trials={trials} seed={seed} tol={tol:e}")?;
                    for p in &results {
                        writeln!(
                            out,
                            "{} {:<22} worst {:.3e} threshold {:.1e} cases {}{}",
                            if p.passed { "PASS" } else { "FAIL" },
                            p.name,
                            p.worst,
                            p.threshold,
                            p.cases,
                            if p.detail.is_empty() { String::new() } else { format!("  ({})", p.detail) }
                        )?;
                    }
                }
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}
