mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pmotion::catalog::{Params, Registry, Side};
use pmotion::combinatorics::{enumerate_set, FrequencySequence, MultiPartition, SetSpec};
use pmotion::motion::{lambda_traced, ppm_traced, worked_example};
use pmotion::verify::{
    bijection_suite, explicit_motion_suite, mutation_suite, parity_suite, ring_law_suite, sweep, verify_identity,
    MotionGrid, Mutation, Report,
};

use output::Emitter;

#[derive(Parser)]
#[command(
    name = "pmotion",
    version,
    about = "Verify parity-restricted partition identities and particle-motion bijections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Report elapsedMs as 0 so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,

    /// Truncation order for series.
    #[arg(long, global = true, env = "PMOTION_ORDER", default_value_t = 40)]
    order: usize,

    /// Weight cap for enumerations and bijection suites.
    #[arg(long, global = true, default_value_t = 14)]
    max_weight: i64,

    /// Truncation order for enumerated (set) sides.
    #[arg(long, global = true, default_value_t = 25)]
    set_order: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    j: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
}

impl ParamArgs {
    fn params(&self) -> Params {
        let mut p = Params::new();
        for (name, v) in [
            ("k", self.k),
            ("a", self.a),
            ("b", self.b),
            ("j", self.j),
            ("r", self.r),
        ] {
            if let Some(v) = v {
                p.set(name, v);
            }
        }
        p
    }
}

#[derive(Subcommand)]
enum Command {
    /// Registered identities with parameters, constraints and sides.
    List,
    /// Compare the sides of one identity instance.
    Verify {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated sides; all sides when omitted.
        #[arg(long, value_delimiter = ',')]
        sides: Vec<Side>,
    },
    /// Every valid parameter assignment of one or more identities.
    Sweep {
        /// Identity to sweep (repeatable); all when omitted.
        #[arg(long)]
        id: Vec<String>,
        /// Largest value of any parameter.
        #[arg(long, default_value_t = 4)]
        k_max: u32,
    },
    /// Exhaustive Λ, φ, shift and Λ̃ checks.
    Bijection {
        #[arg(long)]
        j: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        u: i64,
    },
    /// Stage-wise parity lemma over all k-tuples.
    Parity {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        u: i64,
    },
    /// Literal particle motion against its closed form.
    MotionCheck {
        #[arg(long, default_value_t = 8)]
        span: usize,
        #[arg(long, default_value_t = 4)]
        max_entry: u32,
        #[arg(long, default_value_t = 4)]
        max_h: u32,
        #[arg(long, default_value_t = 12)]
        max_m: u64,
    },
    /// Dump the members of a family up to --max-weight.
    Enumerate {
        /// Family name, e.g. Z, Zo, Ze, X, W.
        #[arg(long)]
        set: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<i64>,
    },
    /// Coefficients of one side of an identity.
    Series {
        #[arg(long)]
        id: String,
        #[arg(long)]
        side: Side,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Step-by-step particle motion.
    Trace {
        /// Built-in example; only `figure1` exists.
        #[arg(long, conflicts_with_all = ["seq", "bla"])]
        example: Option<String>,
        /// Sequence as `start:f_start,f_start+1,...`.
        #[arg(long, requires = "m", conflicts_with = "bla")]
        seq: Option<String>,
        /// Number of motions for --seq.
        #[arg(long)]
        m: Option<u64>,
        /// Multipartition as `parts;parts;...` for a full Λ trace.
        #[arg(long)]
        bla: Option<String>,
        /// Number of components; pads --bla with empty partitions.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<i64>,
    },
    /// Ring laws on seeded random series.
    RingLaws {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Run the suites with a deliberate defect; mismatches are expected.
    Mutate {
        #[arg(long, value_parser = parse_mutation)]
        name: Mutation,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
    },
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    Mutation::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
        let names: Vec<_> = Mutation::ALL.iter().map(|m| m.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

/// Failure that maps to an exit code.
enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<pmotion::Error> for Failure {
    fn from(e: pmotion::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = std::io::stdout();
    let mut out = Emitter::new(stdout.lock(), cli.global.format, cli.global.no_timing);
    let result = run(&cli, &mut out).and_then(|ok| {
        out.flush()?;
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Runs one subcommand; `Ok(false)` means at least one check failed.
fn run<W: Write>(cli: &Cli, out: &mut Emitter<W>) -> Result<bool, Failure> {
    let g = &cli.global;
    let reg = Registry::standard();
    match &cli.command {
        Command::List => {
            out.registry(&reg.describe())?;
            Ok(true)
        }
        Command::Verify { id, params, sides } => {
            let id = reg.get(id)?;
            let report = verify_identity(id, &params.params(), g.order, g.set_order, sides)?;
            reports(out, vec![report], false)
        }
        Command::Sweep { id, k_max } => {
            let names: Vec<&str> = id.iter().map(String::as_str).collect();
            let all = sweep(&reg, &names, *k_max, g.order, g.set_order)?;
            reports(out, all, true)
        }
        Command::Bijection { j, r, k, u } => reports(out, vec![bijection_suite(*j, *r, *k, *u, g.max_weight)?], false),
        Command::Parity { k, u } => reports(out, vec![parity_suite(*k, *u, g.max_weight)?], false),
        Command::MotionCheck {
            span,
            max_entry,
            max_h,
            max_m,
        } => {
            let grid = MotionGrid {
                span: *span,
                max_entry: *max_entry,
                max_h: *max_h,
                max_m: *max_m,
            };
            reports(out, vec![explicit_motion_suite(grid)?], false)
        }
        Command::Enumerate { set, params, u } => {
            let p = params.params();
            let spec = SetSpec::from_name(set, |name| match name {
                "u" => *u,
                other => p.get(other).ok().map(i64::from),
            })?;
            out.members(&enumerate_set(&spec, g.max_weight)?)?;
            Ok(true)
        }
        Command::Series { id, side, params } => {
            let series = reg.get(id)?.evaluate(*side, &params.params(), g.order)?;
            out.series(&series)?;
            Ok(true)
        }
        Command::Trace {
            example,
            seq,
            m,
            bla,
            k,
            u,
        } => trace(out, example.as_deref(), seq.as_deref(), *m, bla.as_deref(), *k, *u),
        Command::RingLaws { seed, trials } => reports(out, vec![ring_law_suite(*seed, *trials, g.order)?], false),
        Command::Mutate { name, k_max } => {
            let all = mutation_suite(*name, &reg, *k_max, g.order, g.max_weight)?;
            reports(out, all, true)
        }
    }
}

fn reports<W: Write>(out: &mut Emitter<W>, reports: Vec<Report>, many: bool) -> Result<bool, Failure> {
    let ok = reports.iter().all(Report::passed);
    out.reports(&reports, many)?;
    Ok(ok)
}

fn trace<W: Write>(
    out: &mut Emitter<W>,
    example: Option<&str>,
    seq: Option<&str>,
    m: Option<u64>,
    bla: Option<&str>,
    k: Option<usize>,
    u: Option<i64>,
) -> Result<bool, Failure> {
    let (f, start, m) = match (example, seq, bla) {
        (Some("figure1"), _, _) => worked_example(),
        (Some(other), _, _) => return Err(Failure::Usage(format!("unknown example {other}; try figure1"))),
        (None, Some(s), _) => {
            let start = u.ok_or_else(|| Failure::Usage("--seq needs --u".into()))?;
            (parse_seq(s)?, start, m.unwrap_or(0))
        }
        (None, None, Some(b)) => {
            let mut bla: MultiPartition = b.parse()?;
            if let Some(k) = k {
                bla = pad(bla, k)?;
            }
            let trace = lambda_traced(&bla, u.unwrap_or(0), true);
            out.lambda_trace(&bla, &trace)?;
            return Ok(true);
        }
        (None, None, None) => return Err(Failure::Usage("trace needs --example, --seq or --bla".into())),
    };
    let (g, focus, steps) = ppm_traced(&f, start, m)?;
    out.motion_trace(&f, start, m, &steps, &g, focus)?;
    Ok(true)
}

fn pad(bla: MultiPartition, k: usize) -> Result<MultiPartition, Failure> {
    if bla.k() > k {
        return Err(Failure::Usage(format!(
            "--bla has {} components but --k is {k}",
            bla.k()
        )));
    }
    let mut comps = bla.components().to_vec();
    comps.resize(k, Default::default());
    Ok(MultiPartition::new(comps))
}

fn parse_seq(s: &str) -> Result<FrequencySequence, Failure> {
    let bad = || Failure::Usage(format!("cannot read sequence {s:?}; expected start:f0,f1,..."));
    let (start, counts) = s.split_once(':').ok_or_else(bad)?;
    let start: i64 = start.trim().parse().map_err(|_| bad())?;
    let counts = counts
        .split(',')
        .map(|c| c.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    Ok(FrequencySequence::from_dense(start, counts))
}
