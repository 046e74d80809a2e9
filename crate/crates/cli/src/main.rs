use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use procspec::io::{process_text, spectrum_text, verification_text, ProcessLiteral, QueryBlock, SpectrumDoc, VerificationDoc, Workspace};
use procspec::spectrum::{self, SpectrumQuery};
use procspec::verifier::{self, LinearReference, VerifyOptions};
use procspec::{rational, ConvexProcess, Error, PolyhedralCone, Rational};

#[derive(Parser)]
#[command(name = "procspec", version, about = "Exact spectral analysis of polyhedral convex processes")]
struct Cli {
    /// Input document (`-` for stdin); fixtures are available without one.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Output destination (`-` or omitted for stdout).
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Document, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Document,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reference {
    Hat,
    Minimal,
}

#[derive(Args, Clone, Default)]
struct Target {
    /// Process name (document entry or fixture).
    #[arg(long)]
    process: Option<String>,
    /// Cone name; defaults to `<process>.K` when that exists, else the whole space.
    #[arg(long)]
    cone: Option<String>,
}

#[derive(Args, Clone, Default)]
struct Scan {
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    range: Option<Vec<String>>,
    #[arg(long)]
    tol: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Negative dual process.
    Dual(Target),
    /// Inverse process.
    Inverse(Target),
    /// q-th power.
    Power {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        q: Option<usize>,
    },
    /// Restriction to a cone.
    Restrict(Target),
    /// Reduced process on K ∩ W⊥ (W defaults to lin K).
    Reduce {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        w_name: Option<String>,
    },
    /// Grid scan of the spectrum with respect to a cone.
    Spectrum {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        scan: Scan,
    },
    /// Hypothesis check and theorem application.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        w_name: Option<String>,
        #[arg(long, value_enum, default_value_t = Reference::Hat)]
        reference: Reference,
        #[arg(long = "lambda", allow_negative_numbers = true)]
        lambdas: Vec<String>,
    },
    /// Cross-check of spectrum membership against the independent oracle.
    Oracle {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        scan: Scan,
        #[arg(long = "lambda", allow_negative_numbers = true)]
        lambdas: Vec<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Dual(_) => "dual",
            Self::Inverse(_) => "inverse",
            Self::Power { .. } => "power",
            Self::Restrict(_) => "restrict",
            Self::Reduce { .. } => "reduce",
            Self::Spectrum { .. } => "spectrum",
            Self::Verify { .. } => "verify",
            Self::Oracle { .. } => "oracle",
        }
    }
}

struct Outcome {
    document: serde_json::Value,
    text: String,
    code: u8,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn read_input(path: Option<&str>) -> Result<String, Error> {
    match path {
        None => Ok(String::new()),
        Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| fail(format!("stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => fs::read_to_string(p).map_err(|e| fail(format!("{p}: {e}"))),
    }
}

fn rat(s: &str) -> Result<Rational, Error> {
    rational::parse(s)
}

struct Ctx<'a> {
    ws: &'a Workspace,
    query: QueryBlock,
}

impl Ctx<'_> {
    fn process(&self, t: &Target) -> Result<(String, ConvexProcess), Error> {
        let name = t
            .process
            .clone()
            .or_else(|| self.query.process.clone())
            .ok_or_else(|| fail("no process given (--process or a query block)"))?;
        Ok((name.clone(), self.ws.process(&name)?))
    }

    fn cone(&self, t: &Target, process_name: &str, n: usize) -> Result<PolyhedralCone, Error> {
        let k = match t.cone.clone().or_else(|| self.query.cone.clone()) {
            Some(name) => self.ws.cone(&name)?,
            None => self
                .ws
                .cone(&format!("{process_name}.K"))
                .unwrap_or_else(|_| PolyhedralCone::full(n)),
        };
        if k.dim() != n {
            return Err(fail(format!("cone has dimension {}, process has n = {n}", k.dim())));
        }
        Ok(k)
    }

    fn w_name(&self, flag: &Option<String>) -> Option<String> {
        flag.clone().or_else(|| self.query.w.clone())
    }

    fn scan(&self, s: &Scan, default_range: Option<[&str; 2]>, default_grid: usize) -> Result<SpectrumQuery, Error> {
        let range: [String; 2] = match (&s.range, &self.query.range, default_range) {
            (Some(r), _, _) => [r[0].clone(), r[1].clone()],
            (None, Some(r), _) => r.clone(),
            (None, None, Some([lo, hi])) => [lo.into(), hi.into()],
            _ => return Err(fail("no range given (--range LO HI or a query block)")),
        };
        let grid = s.grid.or(self.query.grid).unwrap_or(default_grid);
        let tol = match s.tol.clone().or_else(|| self.query.tol.clone()) {
            Some(t) => rat(&t)?,
            None => rational::frac(1, 1024),
        };
        SpectrumQuery::new(rat(&range[0])?, rat(&range[1])?, grid, tol)
    }

    fn lambdas(&self, flags: &[String]) -> Result<Option<Vec<Rational>>, Error> {
        let raw: Vec<String> = if flags.is_empty() {
            self.query.lambdas.clone().unwrap_or_default()
        } else {
            flags.to_vec()
        };
        if raw.is_empty() {
            return Ok(None);
        }
        raw.iter().map(|s| rat(s)).collect::<Result<Vec<_>, _>>().map(Some)
    }
}

fn process_outcome(h: &ConvexProcess) -> Outcome {
    Outcome {
        document: serde_json::to_value(ProcessLiteral::from_process(h)).expect("serializable"),
        text: process_text(h),
        code: 0,
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let text = read_input(cli.input.as_deref())?;
    let ws = Workspace::parse(&text)?;
    let ctx = Ctx {
        ws: &ws,
        query: ws.query(cli.command.name()).cloned().unwrap_or_default(),
    };
    match &cli.command {
        Command::Dual(t) => Ok(process_outcome(&ctx.process(t)?.1.dual())),
        Command::Inverse(t) => Ok(process_outcome(&ctx.process(t)?.1.inverse())),
        Command::Power { target, q } => {
            let q = q.or(ctx.query.q).ok_or_else(|| fail("no power given (--q or a query block)"))?;
            Ok(process_outcome(&ctx.process(target)?.1.power(q)))
        }
        Command::Restrict(t) => {
            let (name, h) = ctx.process(t)?;
            let k = ctx.cone(t, &name, h.n())?;
            Ok(process_outcome(&h.restrict(&k)?))
        }
        Command::Reduce { target, w_name } => {
            let (name, h) = ctx.process(target)?;
            let k = ctx.cone(target, &name, h.n())?;
            let w = match ctx.w_name(w_name) {
                Some(w) => ws.subspace(&w)?,
                None => k.lin_of(),
            };
            Ok(process_outcome(&h.reduce(&k, &w)?))
        }
        Command::Spectrum { target, scan } => {
            let (name, h) = ctx.process(target)?;
            let k = ctx.cone(target, &name, h.n())?;
            let q = ctx.scan(scan, None, 33)?;
            let doc = SpectrumDoc::from(&spectrum::spectrum_scan(&h, &k, &q)?);
            Ok(Outcome {
                text: spectrum_text(&doc),
                document: serde_json::to_value(&doc).expect("serializable"),
                code: 0,
            })
        }
        Command::Verify { target, w_name, reference, lambdas } => {
            let (name, h) = ctx.process(target)?;
            let k = ctx.cone(target, &name, h.n())?;
            let opts = VerifyOptions {
                w: ctx.w_name(w_name).map(|w| ws.subspace(&w)).transpose()?,
                reference: match reference {
                    Reference::Hat => LinearReference::Hat,
                    Reference::Minimal => LinearReference::Minimal,
                },
                grid: ctx.lambdas(lambdas)?,
            };
            let report = verifier::theorem_conclusions(&h, &k, &opts)?;
            let code = report.exit_code();
            let doc = VerificationDoc::from(&report);
            Ok(Outcome {
                text: verification_text(&doc),
                document: serde_json::to_value(&doc).expect("serializable"),
                code,
            })
        }
        Command::Oracle { target, scan, lambdas } => {
            let (name, h) = ctx.process(target)?;
            let k = ctx.cone(target, &name, h.n())?;
            let grid = match ctx.lambdas(lambdas)? {
                Some(l) => l,
                None => ctx.scan(scan, Some(["0", "4"]), 17)?.grid(),
            };
            let mut rows = Vec::new();
            let mut text = String::from("lambda  fast  oracle  agree\n");
            let mut all = true;
            for lambda in &grid {
                let fast = spectrum::is_eigenvalue_in(&h, &k, lambda)?.is_some();
                let slow = spectrum::oracle_eigenpair_search(&h, &k, lambda)?.is_some();
                all &= fast == slow;
                let l = rational::format(lambda);
                text.push_str(&format!("{l}  {fast}  {slow}  {}\n", fast == slow));
                rows.push(json!({ "lambda": l, "fast": fast, "oracle": slow, "agree": fast == slow }));
            }
            Ok(Outcome {
                document: json!({ "rows": rows, "all_agree": all }),
                text,
                code: if all { 0 } else { 1 },
            })
        }
    }
}

fn emit(cli: &Cli, out: &Outcome) -> io::Result<()> {
    let body = match cli.format {
        Format::Document => format!("{}\n", serde_json::to_string_pretty(&out.document).expect("serializable")),
        Format::Text => out.text.clone(),
    };
    match cli.output.as_deref() {
        None | Some("-") => io::stdout().write_all(body.as_bytes()),
        Some(p) => fs::write(p, body),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(Error::SplitNotRational(msg)) => {
            eprintln!("error: root split not rational: {msg}");
            ExitCode::from(3)
        }
        Err(e @ Error::Internal(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
