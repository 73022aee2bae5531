//! Command-line front end for `treeprod`.

pub mod parse;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use treeprod::amalgam::{make_amalgam, AmalgamSpec, NormalForm, Side};
use treeprod::group::{check_group_axioms, hom_from_generators, FiniteGroup, GroupAction};
use treeprod::iso::{verify_all, CompatibleActionTriple, IsoInstance, SampleConfig};
use treeprod::matgroup::{build_dihedral_model, sl2_decompose, Glt2Word, Letter};
use treeprod::products::{verify_functor_laws, FunctorCatalog};
use treeprod::report::{CheckRecord, Report, Status};

use parse::{
    builtin_group, parse_action_spec, parse_amalgam_word, parse_gen_map, parse_glt2_word, parse_group_spec,
    parse_matrix, ParseError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Debug, Parser)]
#[command(name = "treeprod", version, about = "Semidirect products, amalgams and GL2(Z) normal forms")]
pub struct Cli {
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of sampled pairs per check
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: usize,
    /// Head-length bound for exhaustive checks
    #[arg(long, global = true, default_value_t = 3)]
    bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct AmalgamArgs {
    /// First factor: Z<n>, D<n>, or a group-spec file
    #[arg(long = "A", default_value = "Z4")]
    a: String,
    #[arg(long = "B", default_value = "Z6")]
    b: String,
    /// Amalgamated subgroup
    #[arg(long = "D", default_value = "Z2")]
    d: String,
    /// Embedding of D in A as a generator map, e.g. 1:2
    #[arg(long = "iotaA", default_value = "1:2")]
    iota_a: String,
    #[arg(long = "iotaB", default_value = "1:3")]
    iota_b: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal form of a word over a:i / b:j
    Nf {
        #[command(flatten)]
        amalgam: AmalgamArgs,
        /// Word, or - for stdin
        word: String,
    },
    /// Verify the exact sequence, the split isomorphism and naturality
    IsoCheck {
        #[command(flatten)]
        amalgam: AmalgamArgs,
        /// Acting group
        #[arg(long = "C", default_value = "Z2")]
        c: String,
        /// Action on A: inv, trivial, or an action-spec file
        #[arg(long = "actA", default_value = "inv")]
        act_a: String,
        #[arg(long = "actB", default_value = "inv")]
        act_b: String,
        #[arg(long = "actD", default_value = "inv")]
        act_d: String,
    },
    /// Functor laws on the inversion catalog Z_n ⋊ Z2
    FunctorCheck {
        #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
        orders: Vec<usize>,
    },
    /// GL2(Z) normal forms over s, u, j
    Gl2 {
        #[command(subcommand)]
        op: Gl2Op,
    },
    /// SL2(Z) normal forms over s, u
    Sl2 {
        #[command(subcommand)]
        op: Sl2Op,
    },
    /// Check the group axioms of a table
    Axioms { group: String },
}

#[derive(Debug, Subcommand)]
enum Gl2Op {
    /// Matrix [[a,b],[c,d]] to a normal-form word
    Decompose { matrix: String },
    /// Word to matrix
    Eval { word: String },
}

#[derive(Debug, Subcommand)]
enum Sl2Op {
    Decompose { matrix: String },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

struct Ctx<'a> {
    format: Format,
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn input(&mut self, arg: &str) -> Result<String, CliError> {
        if arg != "-" {
            return Ok(arg.to_string());
        }
        let mut s = String::new();
        self.stdin
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading stdin: {e}")))?;
        Ok(s.trim_end_matches(['\n', '\r']).to_string())
    }

    fn line(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.out, "{text}").map_err(|e| usage(format!("writing output: {e}")))
    }

    fn record(&mut self, r: &CheckRecord) -> Result<(), CliError> {
        let text = match self.format {
            Format::JsonLines => serde_json::to_string(r).expect("records serialize"),
            Format::Text => {
                let status = match r.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                };
                match &r.witness {
                    Some(w) => format!("{status} {} [{}]: {w}", r.check, r.instance),
                    None => format!("{status} {} [{}]", r.check, r.instance),
                }
            }
        };
        self.line(&text)
    }

    fn report(&mut self, report: &Report) -> Result<i32, CliError> {
        for r in &report.records {
            self.record(r)?;
        }
        Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
    }

    fn result(&mut self, check: &str, instance: &str, result: &str) -> Result<i32, CliError> {
        match self.format {
            Format::Text => self.line(result)?,
            Format::JsonLines => {
                let v = serde_json::json!({
                    "check": check,
                    "instance": instance,
                    "status": "pass",
                    "result": result,
                });
                self.line(&v.to_string())?;
            }
        }
        Ok(EXIT_OK)
    }
}

/// `Z<n>`, `D<n>`, or a group-spec file, without the axiom check.
fn load_table(name: &str) -> Result<FiniteGroup, CliError> {
    if let Some(g) = builtin_group(name) {
        return Ok(g);
    }
    let text = std::fs::read_to_string(name).map_err(|e| usage(format!("group '{name}': {e}")))?;
    parse_group_spec(&text).map_err(|e| usage(format!("{name}: {e}")))
}

fn load_group(name: &str) -> Result<Arc<FiniteGroup>, CliError> {
    let g = load_table(name)?;
    check_group_axioms(&g).map_err(|v| usage(format!("{name} is not a group: {v}")))?;
    Ok(Arc::new(g))
}

fn load_action(name: &str, actor: &Arc<FiniteGroup>, space: &Arc<FiniteGroup>) -> Result<GroupAction, CliError> {
    match name {
        "trivial" => Ok(GroupAction::trivial(actor.clone(), space.clone())),
        "inv" => GroupAction::inversion(actor.clone(), space.clone()).map_err(usage),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("action '{path}': {e}")))?;
            parse_action_spec(&text, actor, space).map_err(|e| usage(format!("{path}: {e}")))
        }
    }
}

fn load_amalgam(args: &AmalgamArgs) -> Result<AmalgamSpec, CliError> {
    let (a, b, d) = (load_group(&args.a)?, load_group(&args.b)?, load_group(&args.d)?);
    let iota = |target: &Arc<FiniteGroup>, map: &str, flag: &str| {
        let pairs = parse_gen_map(map).map_err(|e| usage(format!("--{flag}: {e}")))?;
        hom_from_generators(d.clone(), target.clone(), &pairs).map_err(|e| usage(format!("--{flag}: {e}")))
    };
    let ia = iota(&a, &args.iota_a, "iotaA")?;
    let ib = iota(&b, &args.iota_b, "iotaB")?;
    make_amalgam(a, b, d.clone(), ia, ib).map_err(usage)
}

/// The `s`/`u` spelling of a normal form over `ℤ₄ ∗_{ℤ₂} ℤ₆`.
fn render_sl2(form: &NormalForm) -> Glt2Word {
    let mut raw: Vec<(Letter, i64)> = form
        .head()
        .iter()
        .map(|s| match s.side {
            Side::A => (Letter::S, s.elem as i64),
            Side::B => (Letter::U, s.elem as i64),
        })
        .collect();
    if form.tail() != 0 {
        raw.push((Letter::S, 2));
    }
    Glt2Word::new(raw)
}

fn execute(cli: Cli, ctx: &mut Ctx<'_>) -> Result<i32, CliError> {
    let cfg = SampleConfig {
        samples: cli.samples,
        max_head: SampleConfig::default().max_head,
        seed: cli.seed,
    };
    match cli.command {
        Command::Nf { amalgam, word } => {
            let spec = load_amalgam(&amalgam)?;
            let text = ctx.input(&word)?;
            let w = parse_amalgam_word(&spec, &text)?;
            let nf = spec.reduce(&w);
            ctx.result("nf", &spec.label(), &spec.embed(&nf).to_string())
        }
        Command::IsoCheck {
            amalgam,
            c,
            act_a,
            act_b,
            act_d,
        } => {
            let spec = load_amalgam(&amalgam)?;
            let c = load_group(&c)?;
            let acts = CompatibleActionTriple::new(
                &spec,
                load_action(&act_a, &c, spec.group(Side::A))?,
                load_action(&act_b, &c, spec.group(Side::B))?,
                load_action(&act_d, &c, spec.amalgamated())?,
            )
            .map_err(usage)?;
            let inst = IsoInstance::new(spec, acts).map_err(usage)?;
            ctx.report(&verify_all(&inst, cli.bound, cfg))
        }
        Command::FunctorCheck { orders } => {
            let catalog = FunctorCatalog::inversion_catalog(&orders).map_err(usage)?;
            ctx.report(&verify_functor_laws(&catalog))
        }
        Command::Gl2 { op: Gl2Op::Decompose { matrix } } => {
            let text = ctx.input(&matrix)?;
            let m = parse_matrix(&text)?;
            let model = build_dihedral_model();
            let form = model
                .gl2_decompose(&m)
                .map_err(|e| CliError::Failed(e.to_string()))?;
            ctx.result("gl2-decompose", &m.to_string(), &model.render(&form).to_string())
        }
        Command::Gl2 { op: Gl2Op::Eval { word } } => {
            let text = ctx.input(&word)?;
            let w = parse_glt2_word(&text)?;
            ctx.result("gl2-eval", &w.to_string(), &w.evaluate().to_string())
        }
        Command::Sl2 { op: Sl2Op::Decompose { matrix } } => {
            let text = ctx.input(&matrix)?;
            let m = parse_matrix(&text)?;
            let form = sl2_decompose(&m).map_err(|e| CliError::Failed(e.to_string()))?;
            ctx.result("sl2-decompose", &m.to_string(), &render_sl2(&form).to_string())
        }
        Command::Axioms { group } => {
            let g = load_table(&group)?;
            let mut report = Report::new();
            report.record("group-axioms", g.label(), check_group_axioms(&g));
            ctx.report(&report)
        }
    }
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code: 0 on success, 1 when a check or operation fails, 2 on usage and
/// parse errors.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut ctx = Ctx {
        format: cli.format,
        stdin,
        out,
    };
    match execute(cli, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}
