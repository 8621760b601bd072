use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use synchrokit::dot::{dfa_to_dot, pair_digraph_to_dot};
use synchrokit::monoid::{has_full_transition_monoid, is_two_transitive, PermGroup};
use synchrokit::pairgraph::{
    certificate_target, n_certificate, table2_word, verify_certificate, CertificateCheck,
    DiameterOutcome, Pair, PairDigraph,
};
use synchrokit::search::{
    random_pair_diameter_experiment, random_rt_experiment, run_max_reset_threshold, summarize,
    SearchConfig, SearchMode, DEFAULT_EXHAUSTIVE_MAX,
};
use synchrokit::sync::{
    cb_reset_word, extension_reset_word, pairchase_reset_word, reset_threshold_exact_with,
    ExactOptions, ExactOutcome, ResetResult, DEFAULT_EXACT_CAP,
};
use synchrokit::{Dfa, Error, Exec, Family, FamilySpec, Transformation};

#[derive(Parser)]
#[command(
    name = "synchrokit",
    version,
    about = "Synchronizing automata with full transition monoid"
)]
struct Cli {
    /// Worker threads for parallel work
    #[arg(long, global = true, env = "SYNCHROKIT_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family automaton
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact reset threshold with a shortest reset word
    Rt {
        #[command(flatten)]
        input: Input,
        /// Largest state count for the subset search
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        cap: usize,
    },
    /// Reset word from one of the synthesizers
    Word {
        #[arg(long, value_enum)]
        method: WordMethod,
        #[command(flatten)]
        input: Input,
    },
    /// Transition monoid and permutation group facts
    MonoidCheck {
        #[command(flatten)]
        input: Input,
    },
    /// Diameter of the pair digraph of the permutation letters
    PairDiam {
        #[command(flatten)]
        input: Input,
    },
    /// Check the pair-digraph lower-bound certificate of F_n
    Certify {
        #[arg(long, default_value = "f")]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Exhaustive and random experiments
    Search(SearchArgs),
    /// Graphviz rendering of an automaton or its pair digraph
    ExportDot {
        #[command(flatten)]
        input: Input,
        /// Draw the pair digraph instead of the automaton
        #[arg(long)]
        pairs: bool,
        /// Label pair vertices with certificate values (family f)
        #[arg(long, requires = "pairs")]
        certificate: bool,
        /// Name states q0, q1, ... regardless of the family's convention
        #[arg(long)]
        zero_based_labels: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
}

/// An automaton file (`-` for stdin) or a family.
#[derive(Args)]
struct Input {
    #[arg(conflicts_with = "family")]
    dfa: Option<PathBuf>,
    #[arg(long, requires = "n")]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct SearchArgs {
    #[command(subcommand)]
    action: Option<SearchAction>,
    #[arg(long, required = true)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Random)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ExperimentArg::Rt)]
    experiment: ExperimentArg,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample the rank n-1 letter instead of fixing it
    #[arg(long)]
    sample_merge: bool,
    /// Only keep permutation pairs generating S_n
    #[arg(long)]
    full_monoid_only: bool,
    /// Allow exhaustive runs above the default size cap
    #[arg(long)]
    allow_large: bool,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    /// JSON-lines results file; an existing file is resumed
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SearchAction {
    /// Summarize a results file
    Summarize { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum WordMethod {
    Exact,
    Pairchase,
    Extension,
    Cb,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Rt,
    PairDiameter,
}

enum Failure {
    /// Bad input: exit 2, nothing on stdout.
    Usage(String),
    /// Well-formed request with a negative or failed answer: exit 1.
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidDfa(_)
            | Error::InvalidFamily(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::DimensionMismatch { .. }
            | Error::StateOutOfRange { .. }
            | Error::InvalidLetter { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

/// JSON for stdout and whether the answer counts as a success.
struct Report {
    body: String,
    ok: bool,
}

impl Report {
    fn json(v: Value, ok: bool) -> Self {
        Report {
            body: format!("{v}\n"),
            ok,
        }
    }

    fn text(body: String) -> Self {
        Report { body, ok: true }
    }
}

type Outcome = Result<Report, Failure>;

impl Input {
    fn load(&self) -> Result<Dfa, Failure> {
        match (&self.dfa, self.family) {
            (Some(path), _) => {
                let mut text = String::new();
                if path.as_os_str() == "-" {
                    std::io::stdin()
                        .read_to_string(&mut text)
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                } else {
                    text = fs::read_to_string(path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                }
                Ok(Dfa::parse_any(&text)?)
            }
            (None, Some(family)) => {
                let n = self.n.expect("clap enforces --n");
                Ok(FamilySpec::new(family, n, self.k).build()?)
            }
            (None, None) => Err(Failure::Usage(
                "give an automaton file or --family and --n".into(),
            )),
        }
    }
}

fn word_json(d: &Dfa, r: &ResetResult) -> Value {
    json!({
        "length": r.length,
        "word": d.word_names(&r.word),
        "verified": r.verified,
        "method": r.method,
    })
}

fn pair_json(p: Pair) -> Value {
    json!([p.lo, p.hi])
}

fn pair_label(d: &Dfa, p: Pair) -> String {
    format!("{}{}", d.label(p.lo), d.label(p.hi))
}

fn gen(family: &FamilyArgs, format: Format, output: &Option<PathBuf>) -> Outcome {
    let d = FamilySpec::new(family.family, family.n, family.k).build()?;
    let body = match format {
        Format::Text => d.to_text(),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string(&d.to_json()).expect("serializable")
        ),
    };
    match output {
        None => Ok(Report::text(body)),
        Some(path) => {
            fs::write(path, body)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(Report::json(
                json!({"written": path, "n": d.n(), "letters": d.letters().len()}),
                true,
            ))
        }
    }
}

fn rt(input: &Input, cap: usize) -> Outcome {
    let d = input.load()?;
    let opts = ExactOptions {
        cap,
        exec: Exec::Parallel,
    };
    Ok(match reset_threshold_exact_with(&d, &opts)? {
        ExactOutcome::Reset { rt, word } => Report::json(
            json!({"rt": rt, "word": d.word_names(&word), "verified": d.is_reset_word(&word)?}),
            true,
        ),
        ExactOutcome::NotSynchronizing => {
            Report::json(json!({"rt": null, "synchronizing": false}), false)
        }
    })
}

fn word(method: WordMethod, input: &Input) -> Outcome {
    if let WordMethod::Cb = method {
        let (Some(n), Some(k)) = (input.n, input.k) else {
            return Err(Failure::Usage("--method cb needs --n and --k".into()));
        };
        let d = synchrokit::families::cb(n, k)?;
        return Ok(Report::json(word_json(&d, &cb_reset_word(n, k)?), true));
    }
    let d = input.load()?;
    let r = match method {
        WordMethod::Exact => match reset_threshold_exact_with(&d, &ExactOptions::default())? {
            ExactOutcome::Reset { word, .. } => {
                let verified = d.is_reset_word(&word)?;
                return Ok(Report::json(
                    json!({"length": word.len(), "word": d.word_names(&word), "verified": verified, "method": "exact_bfs"}),
                    true,
                ));
            }
            ExactOutcome::NotSynchronizing => return Err(Error::NotSynchronizing.into()),
        },
        WordMethod::Pairchase => pairchase_reset_word(&d)?,
        WordMethod::Extension => extension_reset_word(&d)?,
        WordMethod::Cb => unreachable!("handled above"),
    };
    Ok(Report::json(word_json(&d, &r), r.verified))
}

fn monoid_check(input: &Input) -> Outcome {
    let d = input.load()?;
    let perms: Vec<Transformation> = d
        .permutation_letters()
        .into_iter()
        .map(|i| d.letters()[i].t.clone())
        .collect();
    let order = PermGroup::new(d.n(), &perms)?.order();
    let order = match u64::try_from(&order) {
        Ok(o) => json!(o),
        Err(_) => json!(order.to_string()),
    };
    let two_transitive = !perms.is_empty() && is_two_transitive(&perms, d.n())?;
    Ok(Report::json(
        json!({
            "full_Tn": has_full_transition_monoid(&d),
            "perm_group_order": order,
            "two_transitive": two_transitive,
        }),
        true,
    ))
}

fn pair_diam(input: &Input, exec: Exec) -> Outcome {
    let d = input.load()?;
    let g = PairDigraph::new(&d)?;
    Ok(match g.diameter(exec) {
        DiameterOutcome::Finite { diameter, argmax } => {
            let (from, to) = argmax[0];
            let (_, w) = g
                .pair_distance(from, to)?
                .expect("argmax pair is reachable");
            Report::json(
                json!({
                    "diameter": diameter,
                    "witness_from": pair_json(from),
                    "witness_to": pair_json(to),
                    "witness_labels": [pair_label(&d, from), pair_label(&d, to)],
                    "word": d.word_names(&w),
                    "argmax_count": argmax.len(),
                }),
                true,
            )
        }
        DiameterOutcome::NotStronglyConnected { from, to } => Report::json(
            json!({
                "diameter": null,
                "strongly_connected": false,
                "unreachable_from": pair_json(from),
                "unreachable_to": pair_json(to),
            }),
            false,
        ),
    })
}

fn certify(family: Family, n: usize) -> Outcome {
    if family != Family::F {
        return Err(Failure::Usage(
            "certificates exist for family f only".into(),
        ));
    }
    let d = synchrokit::families::f(n)?;
    let g = PairDigraph::new(&d)?;
    let c = n_certificate(n)?;
    let start = Pair::new(1, 3).expect("distinct");
    let target = certificate_target(n);
    let bound = c.get(start) - c.get(target);
    let bfs = g.pair_distance(start, target)?.map(|(len, _)| len);
    let check = verify_certificate(&g, &c)?;
    let valid = check == CertificateCheck::Valid;
    let mut out = json!({
        "valid": valid,
        "N_q2q4": c.get(start),
        "bound": bound,
        "bfs_distance": bfs,
        "tight": bfs == Some(bound as usize),
        "target": pair_label(&d, target),
    });
    if let Ok(w) = table2_word(n) {
        out["table2_length"] = json!(w.len());
    }
    if !valid {
        out["violation"] = serde_json::to_value(&check).expect("serializable");
    }
    Ok(Report::json(out, valid))
}

fn search(args: &SearchArgs, workers: Option<usize>) -> Outcome {
    if let Some(SearchAction::Summarize { file }) = &args.action {
        let s = summarize(file)?;
        return Ok(Report::json(
            serde_json::to_value(&s).expect("serializable"),
            true,
        ));
    }
    let n = args.n.expect("clap enforces --n");
    let mut cfg = match args.mode {
        ModeArg::Exhaustive => SearchConfig::exhaustive(n),
        ModeArg::Random => SearchConfig::random(n, args.trials, args.seed),
    };
    cfg.sample_merge = args.sample_merge;
    cfg.full_monoid_only = args.full_monoid_only;
    cfg.allow_large = args.allow_large;
    cfg.exact_cap = args.exact_cap;
    cfg.workers = workers;
    cfg.output_path = args.out.clone();
    if cfg.mode == SearchMode::Exhaustive && cfg.allow_large && n > DEFAULT_EXHAUSTIVE_MAX {
        eprintln!("warning: exhaustive search at n = {n} may run for a very long time");
    }
    let summary = match (args.experiment, args.mode) {
        (ExperimentArg::Rt, ModeArg::Exhaustive) => {
            serde_json::to_value(run_max_reset_threshold(&cfg)?)
        }
        (ExperimentArg::Rt, ModeArg::Random) => serde_json::to_value(random_rt_experiment(&cfg)?),
        (ExperimentArg::PairDiameter, _) => {
            serde_json::to_value(random_pair_diameter_experiment(&cfg)?)
        }
    };
    Ok(Report::json(summary.expect("serializable"), true))
}

fn export_dot(
    input: &Input,
    pairs: bool,
    certificate: bool,
    zero_based: bool,
) -> Result<String, Failure> {
    let d = input.load()?;
    if !pairs {
        return Ok(dfa_to_dot(&d, zero_based));
    }
    let g = PairDigraph::new(&d)?;
    let values = if certificate {
        if input.family != Some(Family::F) {
            return Err(Failure::Usage("--certificate needs --family f".into()));
        }
        Some(n_certificate(d.n())?)
    } else {
        None
    };
    Ok(pair_digraph_to_dot(&d, &g, values.as_ref(), zero_based))
}

fn run(cli: Cli) -> Outcome {
    let exec = if cli.workers == Some(1) {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    if let Some(w) = cli.workers {
        synchrokit::par::set_workers(w);
    }
    match &cli.command {
        Command::Gen {
            family,
            format,
            output,
        } => gen(family, *format, output),
        Command::Rt { input, cap } => rt(input, *cap),
        Command::Word { method, input } => word(*method, input),
        Command::MonoidCheck { input } => monoid_check(input),
        Command::PairDiam { input } => pair_diam(input, exec),
        Command::Certify { family, n } => certify(*family, *n),
        Command::Search(args) => search(args, cli.workers),
        Command::ExportDot {
            input,
            pairs,
            certificate,
            zero_based_labels,
            output,
        } => {
            let dot = export_dot(input, *pairs, *certificate, *zero_based_labels)?;
            match output {
                None => Ok(Report::text(dot)),
                Some(path) => {
                    fs::write(path, dot)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    Ok(Report::json(json!({"written": path}), true))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) => {
            print!("{}", r.body);
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
