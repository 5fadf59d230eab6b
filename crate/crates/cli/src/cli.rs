use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tfsym_core::exponents::{feasible, p0_range, ExponentProfile, Mode, PermSearch, SearchOptions};
use tfsym_core::lattice::CArray;
use tfsym_core::modspace::{modulation_norm, symbol_mod_norm, PathChoice, SymbolNormSpec, SymbolWindow, WeightSpec};
use tfsym_core::operators::{apply, bht_direct, tht_direct, OperatorResult};
use tfsym_core::symbols::{PsiWindow, SymbolForm, SymbolSpec};
use tfsym_core::tfa::{Window, DENSE_CAP};

use crate::conventions;
use crate::io::{self, IoError, IoResult, ProfileJson};
use crate::report::SuiteReport;
use crate::suites;

const CSV_HELP: &str = "\
CSV formats:
  arrays    optional first line `#{\"axes\":[[n,extent],...],\"measure\":\"riemann\"}`,
            then a header row of coordinate columns (x, or x0..x{r-1}) followed by re[,im];
            one row per lattice point in row-major order. Without the `#` line the
            file must have a single x column starting at -L/2 with even spacing.
  reports   suite,index,kind,label,digest,check,lhs,rhs,rule,tol,pass
  summary   suite,trials,passed,failed,seed";

#[derive(Parser, Debug)]
#[command(name = "tfsym", version, about = "Mixed-norm and symbol-STFT toolkit for multilinear operators", after_help = CSV_HELP)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide whether an exponent profile satisfies the interpolation conditions.
    Feasible {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_enum, default_value = "prop")]
        mode: ModeArg,
        /// Solve for the auxiliary exponents instead of fixing them to p, q.
        #[arg(long)]
        search_tilde: bool,
        /// Report the admissible range of p0 instead of checking the given one.
        #[arg(long)]
        max_p0: bool,
        /// Use the profile's κ, ρ instead of searching over all orders.
        #[arg(long)]
        fixed_perms: bool,
    },
    /// Modulation-space norm of a sampled function (Gaussian window).
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Polynomial weight exponent s in ⟨z⟩^s.
        #[arg(long)]
        weight: Option<f64>,
        #[command(flatten)]
        grid: MeasureArg,
    },
    /// Symbol modulation norm for a profile's (r0, r; s, s_last) and orders.
    SymbolNorm {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// Require the factored evaluation path.
        #[arg(long)]
        factored: bool,
        /// Force the dense path.
        #[arg(long, conflicts_with = "factored")]
        dense: bool,
        #[arg(long, value_enum)]
        window: Option<WindowArg>,
    },
    /// Bilinear Hilbert transform of two sampled functions.
    Bht(OpArgs),
    /// Trilinear Hilbert transform of three sampled functions.
    Tht(OpArgs),
    /// Run a verification suite: young-time, young-freq, proposition, lemma21, bht, minkowski, all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        /// Write the JSON report(s) here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run every suite and write JSON and CSV reports plus CONVENTIONS.md.
    Report {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct MeasureArg {
    #[arg(long, default_value = "riemann")]
    measure: String,
}

#[derive(Args, Debug)]
struct OpArgs {
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    /// Principal-value sum instead of the multiplier path.
    #[arg(long)]
    direct: bool,
    /// Output CSV; metadata goes to the same path with a .json extension.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    grid: MeasureArg,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Prop,
    Thm,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum WindowArg {
    Gaussian,
    Psi,
}

/// Parses `argv` (program name first) and runs; returns the exit code:
/// 0 on success, 1 when a suite fails, 2 on usage or input errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.cmd, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> IoResult<i32> {
    match cmd {
        Cmd::Feasible { profile, mode, search_tilde, max_p0, fixed_perms } => {
            let pr = io::read_profile(&profile)?;
            let mut opts = SearchOptions::new(match mode {
                ModeArg::Prop => Mode::Proposition,
                ModeArg::Thm => Mode::Theorem,
            });
            opts.tilde = search_tilde;
            if fixed_perms {
                opts.perms = PermSearch::Fixed;
            }
            feasible_cmd(&pr, &opts, max_p0, out)
        }
        Cmd::Norm { input, p, q, weight, grid } => {
            let f = io::read_array(&input, io::parse_measure(&grid.measure)?)?;
            let (p, q) = (parse_exp(&p)?, parse_exp(&q)?);
            let w = weight.map_or(WeightSpec::One, WeightSpec::Polynomial);
            let v = modulation_norm(&f, p, q, &w, &Window::gaussian(f.grid()))?;
            writeln!(out, "{v:.12e}")?;
            Ok(0)
        }
        Cmd::SymbolNorm { symbol, profile, factored, dense, window } => {
            let sym = io::read_symbol(&symbol)?;
            let pr = io::read_profile(&profile)?;
            if pr.m() != sym.spec.m {
                return Err(IoError(format!("profile has m = {}, symbol has m = {}", pr.m(), sym.spec.m)));
            }
            let win = match window {
                Some(WindowArg::Gaussian) => SymbolWindow::Gaussian,
                Some(WindowArg::Psi) => SymbolWindow::Psi(PsiWindow::default()),
                None if matches!(sym.spec.form, SymbolForm::Bht | SymbolForm::Tht) => {
                    SymbolWindow::Psi(PsiWindow::default())
                }
                None => SymbolWindow::Gaussian,
            };
            let choice = if factored {
                PathChoice::Factored
            } else if dense {
                PathChoice::Dense
            } else {
                PathChoice::Auto
            };
            let spec = SymbolNormSpec::from_profile(&pr)?;
            let res = symbol_mod_norm(&sym.spec, &sym.grid, &spec, &WeightSpec::One, &win, choice, DENSE_CAP)?;
            let rec = json!({
                "profile": ProfileJson::from_profile(&pr),
                "window": win.name(),
                "grid": io::GridHeader::of(&sym.grid),
                "symbol": sym.spec.name(),
                "value": res.value,
                "path": res.path.name(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&rec)?)?;
            Ok(0)
        }
        Cmd::Bht(args) => operator_cmd(&args, 2, out),
        Cmd::Tht(args) => operator_cmd(&args, 3, out),
        Cmd::Verify { suite, seed, trials, json } => {
            let Some(reports) = suites::run_suite(&suite, seed, trials) else {
                return Err(IoError(format!(
                    "unknown suite {suite:?}; expected one of {} or all",
                    suites::SUITES.join(", ")
                )));
            };
            for r in &reports {
                writeln!(out, "{}", r.summary_line())?;
                for (rec, c) in r.failures().take(10) {
                    writeln!(out, "  failed: {} [{}]: {} (lhs {}, rhs {})", rec.label, rec.index, c.name, c.lhs, c.rhs)?;
                }
            }
            if let Some(path) = json {
                let body = if reports.len() == 1 {
                    reports[0].to_json()
                } else {
                    serde_json::to_string_pretty(&reports)?
                };
                fs::write(&path, body + "\n")?;
            }
            Ok(if reports.iter().all(SuiteReport::all_passed) { 0 } else { 1 })
        }
        Cmd::Report { out: dir, seed } => {
            let reports = suites::run_suite("all", seed, None).expect("`all` is a suite");
            write_reports(&dir, &reports)?;
            for r in &reports {
                writeln!(out, "{}", r.summary_line())?;
            }
            writeln!(out, "wrote {}", dir.display())?;
            Ok(if reports.iter().all(SuiteReport::all_passed) { 0 } else { 1 })
        }
    }
}

fn parse_exp(s: &str) -> IoResult<tfsym_core::exponents::ExtExp> {
    s.parse().map_err(|e: tfsym_core::Error| IoError(e.to_string()))
}

fn feasible_cmd(pr: &ExponentProfile, opts: &SearchOptions, max_p0: bool, out: &mut dyn Write) -> IoResult<i32> {
    if max_p0 {
        match p0_range(pr, opts)? {
            Some((lo, hi)) => writeln!(out, "max_p0 = {hi}\nmin_p0 = {lo}")?,
            None => writeln!(out, "infeasible")?,
        }
        return Ok(0);
    }
    match feasible(pr, opts)? {
        Some(w) => {
            let list = |v: &[tfsym_core::exponents::ExtExp]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
            writeln!(out, "feasible")?;
            writeln!(out, "kappa = {:?}", w.kappa.images())?;
            writeln!(out, "rho = {:?}", w.rho.images())?;
            writeln!(out, "tilde_p = [{}]", list(&w.tilde_p))?;
            writeln!(out, "tilde_q = [{}]", list(&w.tilde_q))?;
        }
        None => writeln!(out, "infeasible")?,
    }
    Ok(0)
}

fn operator_cmd(args: &OpArgs, m: usize, out: &mut dyn Write) -> IoResult<i32> {
    if args.inputs.len() != m {
        return Err(IoError(format!("--inputs needs {m} files, got {}", args.inputs.len())));
    }
    let measure = io::parse_measure(&args.grid.measure)?;
    let fs: Vec<CArray> = args.inputs.iter().map(|p| io::read_array(p, measure)).collect::<IoResult<_>>()?;
    let res: OperatorResult = match (m, args.direct) {
        (2, true) => bht_direct(&fs[0], &fs[1])?,
        (3, true) => tht_direct(&fs[0], &fs[1], &fs[2])?,
        (2, false) => apply(&SymbolSpec::bht(), &fs)?,
        _ => apply(&SymbolSpec::tht(), &fs)?,
    };
    let meta = json!({
        "form": res.form,
        "path": res.path.name(),
        "grid": io::GridHeader::of(res.output.grid()),
        "inputs": args.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    match &args.out {
        Some(path) => {
            io::write_array(fs::File::create(path)?, &res.output)?;
            fs::write(path.with_extension("json"), serde_json::to_string_pretty(&meta)? + "\n")?;
            writeln!(out, "{}", serde_json::to_string_pretty(&meta)?)?;
        }
        None => io::write_array(out, &res.output)?,
    }
    Ok(0)
}

/// `<suite>.json`, `<suite>.csv`, `summary.csv` and `CONVENTIONS.md` under `dir`.
pub fn write_reports(dir: &Path, reports: &[SuiteReport]) -> IoResult<()> {
    fs::create_dir_all(dir)?;
    let mut summary = csv::Writer::from_path(dir.join("summary.csv"))?;
    summary.write_record(["suite", "trials", "passed", "failed", "seed"])?;
    for r in reports {
        fs::write(dir.join(format!("{}.json", r.suite)), r.to_json() + "\n")?;
        r.write_csv(fs::File::create(dir.join(format!("{}.csv", r.suite)))?)?;
        summary.write_record([r.suite.clone(), r.trials.to_string(), r.passed.to_string(), r.failed.to_string(), r.seed.to_string()])?;
    }
    summary.flush()?;
    let find = |name: &str| reports.iter().find(|r| r.suite == name);
    fs::write(dir.join("CONVENTIONS.md"), conventions::render(find("lemma21"), find("minkowski")))?;
    Ok(())
}
