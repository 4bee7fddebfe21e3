//! `winv`: compute, verify and sample weighted generalized inverses from
//! Matrix Market files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use winv_core::classic::{drazin, moore_penrose, one23_family, w_drazin, weighted_core, InverseFamily};
use winv_core::decomp::weighted_index;
use winv_core::gen::{cn_construct, cn_construct_exact, random_parameter, InstanceSpec};
use winv_core::io::{parse_exact_matrix, parse_matrix, write_matrix};
use winv_core::matrix::numerical_rank;
use winv_core::oracle::{check_membership, exact_report, InverseSet, VerificationReport};
use winv_core::w123k::{
    collapse_classify, uniqueness_class, w1231k_family, w1231k_particular, w1241k_family,
    w1241k_particular,
};
use winv_core::weighted::{existence, w123_family, w123_particular, w124_family, w1_family};
use winv_core::{ExactMatrix, Matrix, Result, Tolerance, WinvError};

const EX_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "winv", version, about = "Weighted generalized inverses of complex matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an inverse and write it as a Matrix Market file.
    Compute {
        #[arg(long)]
        set: String,
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "W")]
        w: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        /// Free parameter selecting a family member instead of the particular one.
        #[arg(long)]
        param: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every defining equation of a set; exit 0 iff all hold.
    Verify {
        #[arg(long)]
        set: String,
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "W")]
        w: Option<PathBuf>,
        #[arg(long = "X")]
        x: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Re-read the files as exact rationals and check without rounding.
        #[arg(long)]
        exact: bool,
        /// JSON report path; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Sample family members from seeded random parameters.
    Family {
        #[arg(long)]
        set: String,
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "W")]
        w: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Generate a pair with prescribed rank and weighted index.
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "out-A")]
        out_a: PathBuf,
        #[arg(long = "out-W")]
        out_w: PathBuf,
        /// Small-integer entries, suitable for `verify --exact`.
        #[arg(long)]
        integers: bool,
    },
    /// Print ranks, indices, existence, uniqueness and collapse data as JSON.
    Analyze {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "W")]
        w: PathBuf,
    },
}

/// Failure that is not a library error: bad flag combinations.
enum Failure {
    Usage(String),
    Lib(WinvError),
}

impl From<WinvError> for Failure {
    fn from(e: WinvError) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("winv: {msg}");
            ExitCode::from(EX_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("winv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Outcome {
    let tol = Tolerance::from_env()?;
    match command {
        Command::Compute { set, a, w, k, param, out } => {
            let set = parse_set(&set)?;
            let a = parse_matrix(&a)?;
            let w = load_weight(set, w.as_deref())?;
            let param = param.map(parse_matrix).transpose()?;
            let x = compute(set, &a, &w, k, param.as_ref(), &tol)?;
            write_matrix(&x, &out)?;
            Ok(0)
        }
        Command::Verify { set, a, w, x, k, exact, report } => {
            let set = parse_set(&set)?;
            let rep = if exact {
                let a = parse_exact_matrix(&a)?;
                let w = match (&w, set.is_weighted()) {
                    (Some(p), _) => parse_exact_matrix(p)?,
                    (None, false) => ExactMatrix::identity(a.cols()),
                    (None, true) => return Err(missing_w(set)),
                };
                exact_report(&a, &w, &parse_exact_matrix(&x)?, k, set)?
            } else {
                let a = parse_matrix(&a)?;
                let w = load_weight(set, w.as_deref())?;
                check_membership(&a, &w, &parse_matrix(&x)?, k, set, &tol)?
            };
            emit(&rep.to_json(), report.as_deref())?;
            Ok(if rep.pass { 0 } else { 1 })
        }
        Command::Family { set, a, w, k, samples, seed, out_dir } => {
            let set = parse_set(&set)?;
            let a = parse_matrix(&a)?;
            let w = load_weight(set, w.as_deref())?;
            family(set, &a, &w, k, samples, seed, &out_dir, &tol)
        }
        Command::Gen { m, n, rank, index, seed, out_a, out_w, integers } => {
            let spec = InstanceSpec::new(m, n, rank, index, seed);
            let (a, w) = if integers {
                let (a, w) = cn_construct_exact(&spec.integers())?;
                (a.to_matrix(), w.to_matrix())
            } else {
                cn_construct(&spec)?
            };
            write_matrix(&a, &out_a)?;
            write_matrix(&w, &out_w)?;
            Ok(0)
        }
        Command::Analyze { a, w } => {
            let a = parse_matrix(&a)?;
            let w = parse_matrix(&w)?;
            println!("{}", analyze(&a, &w, &tol)?);
            Ok(0)
        }
    }
}

fn parse_set(name: &str) -> std::result::Result<InverseSet, Failure> {
    name.parse().map_err(|e: WinvError| Failure::Usage(e.to_string()))
}

fn missing_w(set: InverseSet) -> Failure {
    Failure::Usage(format!("set `{set}` needs --W"))
}

/// Classical sets ignore the weight, so an empty placeholder stands in when none is given.
fn load_weight(set: InverseSet, path: Option<&Path>) -> std::result::Result<Matrix, Failure> {
    match path {
        Some(p) => Ok(parse_matrix(p)?),
        None if !set.is_weighted() => Ok(Matrix::zeros(0, 0)),
        None => Err(missing_w(set)),
    }
}

fn family_of(set: InverseSet, a: &Matrix, w: &Matrix, k: Option<usize>, tol: &Tolerance) -> Option<Result<InverseFamily>> {
    Some(match set {
        InverseSet::W1 => w1_family(a, w, tol),
        InverseSet::W123 => w123_family(a, w, tol),
        InverseSet::W124 => w124_family(a, w, tol),
        InverseSet::W1231k => w1231k_family(a, w, k, tol),
        InverseSet::W124k1 => w1241k_family(a, w, k, tol),
        InverseSet::Classic123 => Ok(one23_family(a, tol)),
        InverseSet::MoorePenrose | InverseSet::Drazin | InverseSet::Wdi | InverseSet::WCore => return None,
    })
}

fn compute(
    set: InverseSet,
    a: &Matrix,
    w: &Matrix,
    k: Option<usize>,
    param: Option<&Matrix>,
    tol: &Tolerance,
) -> std::result::Result<Matrix, Failure> {
    if let Some(p) = param {
        let fam = family_of(set, a, w, k, tol)
            .ok_or_else(|| Failure::Usage(format!("set `{set}` has no free parameter")))??;
        return Ok(fam.member(p)?);
    }
    Ok(match set {
        InverseSet::MoorePenrose => moore_penrose(a, tol),
        InverseSet::Drazin => drazin(a, tol)?,
        InverseSet::Wdi => w_drazin(a, w, tol)?,
        InverseSet::WCore => weighted_core(a, w, tol)?,
        InverseSet::W123 => w123_particular(a, w, tol)?,
        InverseSet::W1231k => w1231k_particular(a, w, k, tol)?,
        InverseSet::W124k1 => w1241k_particular(a, w, k, tol)?,
        InverseSet::W1 | InverseSet::W124 | InverseSet::Classic123 => {
            family_of(set, a, w, k, tol).expect("parametrized set")?.base().clone()
        }
    })
}

#[derive(Serialize)]
struct FamilyReport {
    set: InverseSet,
    k: usize,
    samples: usize,
    seed: u64,
    /// Largest residual seen per equation.
    residuals: std::collections::BTreeMap<String, f64>,
    verdicts: std::collections::BTreeMap<String, bool>,
    /// Largest `‖Xᵢ − X₀‖/(‖X₀‖+1)` over the samples, `X₀` the base member.
    max_deviation_from_base: f64,
    pass: bool,
}

#[allow(clippy::too_many_arguments)]
fn family(
    set: InverseSet,
    a: &Matrix,
    w: &Matrix,
    k: Option<usize>,
    samples: usize,
    seed: u64,
    out_dir: &Path,
    tol: &Tolerance,
) -> Outcome {
    let fam = family_of(set, a, w, k, tol)
        .ok_or_else(|| Failure::Usage(format!("set `{set}` has no free parameter")))??;
    let members = (0..samples)
        .map(|i| fam.member(&random_parameter(fam.param_shape(), seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let reports = members
        .par_iter()
        .map(|x| check_membership(a, w, x, k, set, tol))
        .collect::<Result<Vec<VerificationReport>>>()?;

    fs::create_dir_all(out_dir).map_err(|source| WinvError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    for (i, x) in members.iter().enumerate() {
        write_matrix(x, out_dir.join(format!("member-{i:04}.mtx")))?;
    }

    let mut agg = FamilyReport {
        set,
        k: reports.first().map_or_else(|| resolved_k(set, a, w, k, tol), |r| Ok(r.k_used))?,
        samples,
        seed,
        residuals: Default::default(),
        verdicts: Default::default(),
        max_deviation_from_base: 0.0,
        pass: true,
    };
    for rep in &reports {
        for (eq, &r) in &rep.residuals {
            let slot = agg.residuals.entry(eq.clone()).or_insert(0.0);
            *slot = slot.max(r);
        }
        for (eq, &ok) in &rep.verdicts {
            *agg.verdicts.entry(eq.clone()).or_insert(true) &= ok;
        }
        agg.pass &= rep.pass;
    }
    agg.max_deviation_from_base = members
        .iter()
        .map(|x| x.rel_diff(fam.base()))
        .fold(0.0, f64::max);
    let text = serde_json::to_string_pretty(&agg).expect("report serializes");
    emit(&text, Some(&out_dir.join("report.json")))?;
    Ok(if agg.pass { 0 } else { 1 })
}

fn resolved_k(set: InverseSet, a: &Matrix, w: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<usize> {
    match k {
        Some(k) => Ok(k),
        None if set.is_weighted() => weighted_index(a, w, tol),
        None => Ok(0),
    }
}

fn analyze(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<String> {
    let verdict = existence(a, w, tol)?;
    let uniqueness = if verdict.exists_w123 {
        Some(uniqueness_class(a, w, tol)?)
    } else {
        None
    };
    let value = json!({
        "shape": { "m": a.rows(), "n": a.cols() },
        "rank_A": verdict.rank_a,
        "rank_W": numerical_rank(w, tol),
        "rank_AW": verdict.rank_aw,
        "rank_WA": verdict.rank_wa,
        "rank_WAW": verdict.rank_waw,
        "weighted_index": weighted_index(a, w, tol)?,
        "existence": verdict,
        "uniqueness": uniqueness,
        "collapse": collapse_classify(a, w, tol)?,
    });
    Ok(serde_json::to_string_pretty(&value).expect("analysis serializes"))
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|source| WinvError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
