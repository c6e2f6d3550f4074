//! The `plancherel` command line: argument parsing, dispatch and exit codes.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use plancherel_core::document::{parse_invariants, ComponentRecord, DensityDocument};
use plancherel_core::invariants::FundamentalInvariants;
use plancherel_core::plancherel::{density, enumerate_components, integrate_with_check, select_component};
use plancherel_core::transfer::{kappa, lambda_df, transfer_density};
use plancherel_core::verify::{run_suite, SuiteReport, SUITES};
use plancherel_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_SELECTOR: i32 = 4;
pub const EXIT_SINGULARITY: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "plancherel", version, about = "Exact Plancherel densities for GL(n) Bernstein components")]
pub struct Cli {
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the components of the tempered dual.
    Components { input: PathBuf },
    /// Emit the density on one component.
    Density {
        input: PathBuf,
        /// Partition tuple such as `2+1|3`.
        #[arg(long)]
        component: String,
        #[arg(long)]
        q: Option<f64>,
        /// Torus point, coordinates separated by `;`, each `re` or `re,im`.
        #[arg(long = "point", requires = "q")]
        points: Vec<String>,
    },
    /// Run the identity suites.
    Verify {
        /// Restrict to the named suites (repeatable or comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Total mass of the density on one component.
    Integrate {
        input: PathBuf,
        #[arg(long)]
        component: String,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Density on GL(n/d, D) for a division algebra of index d.
    Transfer {
        input: PathBuf,
        #[arg(long)]
        component: String,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        q: Option<f64>,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    body: serde_json::Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) => (EXIT_PARSE, "parse"),
            Error::Domain(_) => (EXIT_PARSE, "domain"),
            Error::Input(_) => (EXIT_PARSE, "input"),
            Error::MissingData(_) => (EXIT_VALIDATION, "missing_data"),
            Error::Index(_) => (EXIT_SELECTOR, "selector"),
            Error::Singularity(_) => (EXIT_SINGULARITY, "singularity"),
            Error::MixedCuspidal(_) => (EXIT_PARSE, "mixed_cuspidal"),
            Error::NotProportional(_) => (EXIT_VERIFY_FAILED, "not_proportional"),
        };
        Failure {
            code,
            body: json!({"error": kind, "message": e.to_string()}),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let render = |v: &serde_json::Value| {
        let mut s = if cli.pretty {
            serde_json::to_string_pretty(v)
        } else {
            serde_json::to_string(v)
        }
        .expect("JSON values serialize");
        s.push('\n');
        s
    };
    match dispatch(&cli.command) {
        Ok((code, body)) => Outcome {
            code,
            stdout: render(&body),
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: render(&f.body),
        },
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("records serialize")
}

fn load(path: &Path) -> Result<FundamentalInvariants, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        body: json!({"error": "io", "message": format!("{}: {e}", path.display())}),
    })?;
    let inv = parse_invariants(&text)?;
    let violations = inv.validate();
    if !violations.is_empty() {
        return Err(Failure {
            code: EXIT_VALIDATION,
            body: json!({"error": "validation", "violations": violations}),
        });
    }
    Ok(inv)
}

/// `"1;-1"` or `"1,0;0,1"`.
pub fn parse_point(s: &str) -> Result<Vec<Complex64>, Error> {
    s.split(';')
        .map(|c| {
            let nums = c
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad torus point {s:?}")))?;
            match nums.as_slice() {
                [re] => Ok(Complex64::new(*re, 0.0)),
                [re, im] => Ok(Complex64::new(*re, *im)),
                _ => Err(Error::Parse(format!("bad torus point {s:?}"))),
            }
        })
        .collect()
}

fn dispatch(cmd: &Command) -> Result<(i32, serde_json::Value), Failure> {
    match cmd {
        Command::Components { input } => {
            let inv = load(input)?;
            let records: Vec<ComponentRecord> = enumerate_components(&inv)?
                .iter()
                .map(ComponentRecord::new)
                .collect();
            Ok((EXIT_OK, json!({"n": inv.n(), "count": records.len(), "components": records})))
        }
        Command::Density {
            input,
            component,
            q,
            points,
        } => {
            let inv = load(input)?;
            let report = density(&select_component(&inv, component)?)?;
            let mut doc = DensityDocument::new(&report);
            if let Some(q) = q {
                let pts = points
                    .iter()
                    .map(|p| parse_point(p))
                    .collect::<Result<Vec<_>, _>>()?;
                doc = doc.with_numeric(&report, *q, &pts)?;
            }
            Ok((EXIT_OK, to_value(&doc)))
        }
        Command::Verify { only } => {
            let names: Vec<&str> = if only.is_empty() {
                SUITES.to_vec()
            } else {
                only.iter().map(String::as_str).collect()
            };
            let mut reports: Vec<SuiteReport> = Vec::new();
            for name in names {
                let rep = run_suite(name).ok_or_else(|| Failure {
                    code: EXIT_PARSE,
                    body: json!({"error": "input", "message": format!("unknown suite {name:?}"), "suites": SUITES}),
                })?;
                reports.push(rep);
            }
            let passed = reports.iter().all(SuiteReport::passed);
            let code = if passed { EXIT_OK } else { EXIT_VERIFY_FAILED };
            Ok((code, json!({"passed": passed, "suites": reports})))
        }
        Command::Integrate {
            input,
            component,
            q,
            grid,
        } => {
            let inv = load(input)?;
            let report = density(&select_component(&inv, component)?)?;
            let res = integrate_with_check(&report, *q, *grid)?;
            Ok((
                EXIT_OK,
                json!({
                    "selector": report.selector,
                    "q": q,
                    "grid": res.grid,
                    "mass": res.value,
                    "coarse_grid": (res.grid / 2).max(8),
                    "coarse_mass": res.coarse,
                    "delta": res.delta,
                }),
            ))
        }
        Command::Transfer { input, component, d, q } => {
            let inv = load(input)?;
            let n = inv.n();
            if *d == 0 || n % d != 0 {
                return Err(Error::Input(format!("d = {d} does not divide n = {n}")).into());
            }
            let n_prime = n / d;
            let spec = select_component(&inv, component)?;
            let report = density(&spec)?;
            let lambda = lambda_df(*d, n_prime)?;
            let moved = transfer_density(&report, *d, n_prime)?;
            let mut doc = DensityDocument::new(&moved);
            if let Some(q) = q {
                doc = doc.with_numeric(&moved, *q, &[])?;
            }
            let kappa = (inv.cuspidals.len() == 1)
                .then(|| kappa(&spec).ok())
                .flatten();
            Ok((
                EXIT_OK,
                json!({
                    "d": d,
                    "n_prime": n_prime,
                    "lambda": lambda.to_string(),
                    "density": doc,
                    "kappa": kappa,
                }),
            ))
        }
    }
}
