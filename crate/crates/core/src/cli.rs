//! Command-line front end. `main.rs` only forwards to [`run`].

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::coaction::{ansatz_solve, pin_free_unknowns, Ansatz};
use crate::diffcalc::{wz_relations, WzCalculus};
use crate::error::{Error, Result};
use crate::linalg::rhat_builtin;
use crate::presentations::{builtin, load_presentation_file, Presentation};
use crate::report::Status;
use crate::suites::{parse_bindings, run_suite, Context};

#[derive(Parser, Debug)]
#[command(name = "qwh", version, about = "Checks for the deformed oscillator space, its quantum groups and calculus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// Rational specialization, e.g. `u=2,s=3/4`.
    #[arg(long)]
    pub params: Option<String>,
    /// Keep q independent of u.
    #[arg(long)]
    pub generic_q: bool,
}

impl ParamArgs {
    fn context(&self) -> Result<Context> {
        let bindings = match &self.params {
            Some(p) => parse_bindings(p)?,
            None => vec![],
        };
        let base = if self.generic_q {
            Context::generic()
        } else {
            Context::symbolic()
        };
        Ok(base.with_bindings(bindings))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a check suite.
    Check {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the normal form of an expression.
    Normalize {
        /// Built-in name or presentation file.
        #[arg(short, long)]
        algebra: String,
        #[arg(short, long)]
        expr: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Apply the derivative `d_i` to a polynomial in x1, x2, x3.
    D {
        #[arg(long)]
        index: usize,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Solve the graded ansatz for the one-form relations.
    Derive {
        /// `xi` or `xi-variant`.
        #[arg(long)]
        ansatz: String,
        #[command(flatten)]
        params: ParamArgs,
    },
}

/// Parses arguments, runs, and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn load_algebra(name: &str) -> Result<Presentation> {
    let path = std::path::Path::new(name);
    if path.is_file() {
        load_presentation_file(path)
    } else {
        builtin(name)
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Check {
            suite,
            params,
            format,
            out: path,
        } => {
            let rep = run_suite(&suite, &params.context()?)?;
            let body = match format {
                Format::Text => rep.to_text(),
                Format::Json => rep.to_json() + "\n",
            };
            match path {
                Some(p) => {
                    std::fs::write(&p, &body)?;
                    writeln!(out, "suite {}: {}", rep.suite, rep.status)?;
                }
                None => out.write_all(body.as_bytes())?,
            }
            Ok(rep.status.exit_code())
        }
        Command::Normalize {
            algebra,
            expr,
            params,
        } => {
            let ctx = params.context()?;
            let pres = load_algebra(&algebra)?;
            let pres = if pres.name == "xspace_generic_q" {
                pres.substitute(ctx.user())?
            } else {
                pres.substitute(&ctx.space_bindings())?
            };
            let p = pres.parse_expr(&expr)?.substitute(&ctx.space_bindings())?;
            let sys = pres.system()?;
            writeln!(out, "{}", sys.render(&sys.normal_form(&p)))?;
            Ok(0)
        }
        Command::D {
            index,
            expr,
            params,
        } => {
            if !(1..=3).contains(&index) {
                return Err(Error::Dimension(format!("derivative index {index} not in 1..3")));
            }
            let ctx = params.context()?;
            let x = builtin("xspace_generic_q")?.substitute(&ctx.space_bindings())?;
            let calc = WzCalculus::from_presentation(wz_relations(
                &rhat_builtin().substitute(ctx.user())?,
                &x,
                &builtin("xispace")?.substitute(ctx.user())?,
            )?)?;
            let p = calc.parse(&expr)?;
            if p.terms().any(|(w, _)| w.letters().iter().any(|g| !calc.table().name(*g).starts_with('x') || calc.table().name(*g).starts_with("xi"))) {
                return Err(Error::Binding(format!("`{expr}` is not a polynomial in x1, x2, x3")));
            }
            let p = calc.system.normal_form(&p.substitute(&ctx.space_bindings())?);
            writeln!(out, "{}", calc.render(&calc.apply_derivative(index, &p)))?;
            Ok(0)
        }
        Command::Derive { ansatz, params } => {
            let ctx = params.context()?;
            let name = match ansatz.as_str() {
                "xi" => "ansatz_xi",
                "xi-variant" => "ansatz_xi_variant",
                other => {
                    return Err(Error::UnknownBuiltin {
                        name: other.to_string(),
                        valid: "xi, xi-variant".into(),
                    })
                }
            };
            let a = Ansatz::builtin(name)?;
            let group = builtin("TT7")?.substitute(ctx.user())?;
            let cs = ansatz_solve(&a, &group)?;
            write!(out, "{}", cs.render())?;
            if !cs.is_consistent() {
                return Ok(Status::Fail.exit_code());
            }
            let xspace = builtin("xspace_generic_q")?.substitute(&ctx.space_bindings())?;
            let pin = pin_free_unknowns(&a, &cs, &rhat_builtin().substitute(ctx.user())?, &xspace)?;
            writeln!(out, "pinned by confluence at q = u^2:")?;
            write!(out, "{}", pin.constraints.render())?;
            Ok(0)
        }
    }
}
