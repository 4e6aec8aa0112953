//! Command-line driver.
//!
//! Exit codes: 0 on success, 1 on domain failures (rank conditions, singular
//! blocks, non-stochastic input, failed residual checks), 2 on usage, I/O and
//! parse errors. Diagnostics and residual summaries go to standard error;
//! tensors go to `-o` or standard output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cproduct::cprod;
use crate::decomp::{c_full_rank, c_hs, c_qdr, c_qr, c_schur, c_svd, core_nilpotent_parts};
use crate::error::Error;
use crate::geninv::{
    check_along, check_drazin, check_penrose, drazin_inverse, group_inverse, inverse_along,
    mp_inverse, tensor_index, AlongMethod, DrazinMethod, GenInvResult, MpMethod, Residual,
};
use crate::io::{parse_tensor_file, write_tensor};
use crate::markov::{limit_estimate, validate_transition, Estimator, StochasticMode};
use crate::tensor::Tensor3;
use crate::transform::TransformContext;

#[derive(Debug, Parser)]
#[command(
    name = "ctensor",
    version,
    about = "Tensor algebra under the cosine-transform product"
)]
struct Cli {
    /// Absolute singular-value cutoff replacing the default rank rule.
    #[arg(long, global = true, value_parser = parse_tol)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Product A *c B.
    Cprod {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Moore-Penrose inverse.
    Pinv {
        a: PathBuf,
        #[arg(long, default_value_t)]
        method: MpMethod,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Drazin inverse; the tensor index is reported on stderr.
    Drazin {
        a: PathBuf,
        #[arg(long, default_value_t)]
        method: DrazinMethod,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Group inverse (index at most 1).
    Group {
        a: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Inverse of A along G.
    Along {
        a: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t)]
        method: AlongMethod,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Tensor factorization; with -o PREFIX each factor goes to PREFIX.<factor>.ct.
    Decomp {
        a: PathBuf,
        #[arg(long, value_enum)]
        kind: DecompKind,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Ergodic projector of a transition tensor and the error of a limit estimator.
    Markov {
        p: PathBuf,
        #[arg(long, default_value = "transform")]
        mode: StochasticMode,
        #[arg(long, value_enum, default_value_t = EstimatorKind::Cesaro)]
        estimator: EstimatorKind,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Residuals of the defining equations for a candidate inverse X.
    Check {
        a: PathBuf,
        x: PathBuf,
        #[arg(long, value_enum)]
        relation: Relation,
        /// G, for --relation along.
        #[arg(long)]
        g: Option<PathBuf>,
        /// Index to check against, for --relation drazin (default: computed).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Tensor index.
    Index { a: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DecompKind {
    Svd,
    Qr,
    Schur,
    Fullrank,
    Qdr,
    Hs,
    Corenil,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EstimatorKind {
    Cesaro,
    Alpha,
    Power,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Relation {
    Mp,
    Drazin,
    Along,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
        _ => Err(format!("`{s}` is not a finite nonnegative number")),
    }
}

#[derive(Debug)]
enum Failure {
    Domain(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::DimsMismatch(_)
        | Error::ShapeMismatch(_)
        | Error::SplitOutOfRange { .. }
        | Error::InvalidAlpha(_) => 2,
        _ => 1,
    }
}

type Outcome = Result<i32, Failure>;

struct Driver<'a> {
    tol: Option<f64>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Driver<'_> {
    fn read(&self, path: &Path) -> Result<Tensor3, Failure> {
        let bytes = fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        parse_tensor_file(&bytes).map_err(|e| match e {
            Error::Parse { line, reason } => Failure::Domain(Error::Parse {
                line,
                reason: format!("{}: {reason}", path.display()),
            }),
            other => Failure::Domain(other),
        })
    }

    fn context(&self, a: &Tensor3) -> TransformContext {
        let ctx = TransformContext::new(a.n3());
        match self.tol {
            Some(t) => ctx.with_rank_tol(t),
            None => ctx,
        }
    }

    fn emit(&mut self, t: &Tensor3, o: Option<&Path>) -> Result<(), Failure> {
        let text = write_tensor(t);
        match o {
            Some(path) => {
                fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
            }
            None => Ok(self.out.write_all(text.as_bytes())?),
        }
    }

    fn report_residuals(&mut self, residuals: &[Residual]) -> Result<(), Failure> {
        for r in residuals {
            writeln!(self.err, "residual {}", format_residual(r))?;
        }
        Ok(())
    }

    fn finish(&mut self, result: &GenInvResult, o: Option<&Path>) -> Outcome {
        self.emit(&result.x, o)?;
        self.report_residuals(&result.residuals)?;
        Ok(0)
    }

    fn run(&mut self, command: Command) -> Outcome {
        match command {
            Command::Cprod { a, b, o } => {
                let (a, b) = (self.read(&a)?, self.read(&b)?);
                let c = cprod(&a, &b, &self.context(&a))?;
                self.emit(&c, o.as_deref())?;
                Ok(0)
            }
            Command::Pinv { a, method, o } => {
                let a = self.read(&a)?;
                let r = mp_inverse(&a, &self.context(&a), method)?;
                self.finish(&r, o.as_deref())
            }
            Command::Drazin { a, method, o } => {
                let a = self.read(&a)?;
                let r = drazin_inverse(&a, &self.context(&a), method)?;
                writeln!(self.err, "index {}", r.index.unwrap_or(0))?;
                self.finish(&r, o.as_deref())
            }
            Command::Group { a, o } => {
                let a = self.read(&a)?;
                let r = group_inverse(&a, &self.context(&a))?;
                self.finish(&r, o.as_deref())
            }
            Command::Along { a, g, method, o } => {
                let (a, g) = (self.read(&a)?, self.read(&g)?);
                let r = inverse_along(&a, &g, &self.context(&a), method)?;
                self.finish(&r, o.as_deref())
            }
            Command::Decomp { a, kind, o } => self.decomp(&a, kind, o.as_deref()),
            Command::Markov {
                p,
                mode,
                estimator,
                steps,
                alpha,
                o,
            } => {
                let p = self.read(&p)?;
                let ctx = self.context(&p);
                let t = validate_transition(&p, &ctx, mode)?;
                let estimator = match estimator {
                    EstimatorKind::Cesaro => Estimator::Cesaro,
                    EstimatorKind::Alpha => Estimator::AlphaBlend(alpha),
                    EstimatorKind::Power => Estimator::Power,
                };
                if steps == 0 {
                    return Err(Failure::Usage("--steps must be positive".into()));
                }
                let report = limit_estimate(&t, &ctx, estimator, steps)?;
                self.emit(&report.e, o.as_deref())?;
                writeln!(self.err, "estimator {}", report.estimator)?;
                for (n, e) in &report.errors {
                    writeln!(self.err, "steps {n} error {e:e}")?;
                }
                if let Some(regular) = report.regular {
                    writeln!(self.err, "regular {regular}")?;
                }
                Ok(0)
            }
            Command::Check {
                a,
                x,
                relation,
                g,
                k,
            } => {
                let (a, x) = (self.read(&a)?, self.read(&x)?);
                let ctx = self.context(&a);
                let residuals = match relation {
                    Relation::Mp => check_penrose(&a, &x, &ctx)?,
                    Relation::Drazin => {
                        let k = match k {
                            Some(k) => k,
                            None => tensor_index(&a, &ctx)?,
                        };
                        check_drazin(&a, &x, k, &ctx)?
                    }
                    Relation::Along => {
                        let g =
                            g.ok_or_else(|| Failure::Usage("--relation along needs --g".into()))?;
                        check_along(&a, &self.read(&g)?, &x, &ctx)?
                    }
                };
                for r in &residuals {
                    writeln!(self.out, "{}", format_residual(r))?;
                }
                Ok(if residuals.iter().all(Residual::passed) {
                    0
                } else {
                    1
                })
            }
            Command::Index { a } => {
                let a = self.read(&a)?;
                let k = tensor_index(&a, &self.context(&a))?;
                writeln!(self.out, "{k}")?;
                Ok(0)
            }
        }
    }

    fn decomp(&mut self, path: &Path, kind: DecompKind, prefix: Option<&Path>) -> Outcome {
        let a = self.read(path)?;
        let ctx = self.context(&a);
        let (factors, rank): (Vec<(&str, Tensor3)>, Option<usize>) = match kind {
            DecompKind::Svd => {
                let f = c_svd(&a, &ctx)?;
                (vec![("U", f.u), ("S", f.s), ("V", f.v)], None)
            }
            DecompKind::Qr => {
                let f = c_qr(&a, &ctx)?;
                (vec![("Q", f.q), ("R", f.r)], None)
            }
            DecompKind::Schur => {
                let f = c_schur(&a, &ctx)?;
                (vec![("Q", f.q), ("T", f.t)], None)
            }
            DecompKind::Fullrank => {
                let f = c_full_rank(&a, &ctx)?;
                (vec![("M", f.m), ("N", f.n)], Some(f.r))
            }
            DecompKind::Qdr => {
                let f = c_qdr(&a, &ctx)?;
                (vec![("Q", f.q), ("D", f.d), ("R", f.r_factor)], Some(f.r))
            }
            DecompKind::Hs => {
                let f = c_hs(&a, &ctx)?;
                (
                    vec![("U", f.u), ("Sr", f.sr), ("K", f.k), ("L", f.l)],
                    Some(f.r),
                )
            }
            DecompKind::Corenil => {
                let f = core_nilpotent_parts(&a, &ctx)?;
                writeln!(self.err, "index {}", f.k)?;
                (vec![("core", f.core), ("nil", f.nil)], None)
            }
        };
        if let Some(r) = rank {
            writeln!(self.err, "rank {r}")?;
        }
        for (name, t) in &factors {
            match prefix {
                Some(p) => {
                    let mut file = p.as_os_str().to_owned();
                    file.push(format!(".{name}.ct"));
                    self.emit(t, Some(Path::new(&file)))?;
                }
                None => {
                    writeln!(self.out, "# factor {name}")?;
                    self.emit(t, None)?;
                }
            }
        }
        Ok(0)
    }
}

fn format_residual(r: &Residual) -> String {
    let status = if r.passed() { "ok" } else { "FAIL" };
    format!("{} {:e} {:e} {status}", r.label, r.value, r.threshold)
}

/// Parses `args` (including the program name) and runs one command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
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
    let mut driver = Driver {
        tol: cli.tol,
        out,
        err,
    };
    match driver.run(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Domain(e) => (exit_code(&e), e.to_string()),
                Failure::Io(msg) | Failure::Usage(msg) => (2, msg),
            };
            let _ = writeln!(driver.err, "error: {msg}");
            code
        }
    }
}
