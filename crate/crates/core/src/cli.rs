//! The `cpnet` command line. [`run`] takes explicit streams so that tests can
//! drive it in-process.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::colored::{
    check_colored_morphism, colored_fire, colored_reachable, ColoredMarking, ColoredPetriNet, ColoredStep,
};
use crate::error::Error;
use crate::ids::{Binding, Transition};
use crate::netio::{
    emit_document, emit_morphism, parse_colored_marking, parse_document, parse_marking, parse_morphism,
    random_colored_marking, random_colored_net, GeneratorConfig, MorphismDocument, NetDocument,
};
use crate::petri::{self, check_net_morphism, Marking, PetriNet, Step};
use crate::report::Report;
use crate::semantics::enumerate_step_sequences;
use crate::system::DEFAULT_NODE_BUDGET;
use crate::unfolding::{marking_to_unfolded, unfold_net, verify_unfolding_iso};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cpnet",
    version,
    about = "Colored Petri nets, their step semantics and unfoldings"
)]
pub struct Cli {
    /// Maximum number of search nodes any enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: usize,
    /// Print only essential output.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct NetSource {
    /// An ordinary net document (`-` for stdin).
    #[arg(long)]
    pub net: Option<PathBuf>,
    /// A colored net document (`-` for stdin).
    #[arg(long)]
    pub colored_net: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unfold a colored net into an ordinary net document.
    Unfold {
        #[arg(long)]
        colored_net: PathBuf,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// List step sequences: all firing sequences of an ordinary net, or the
    /// normal forms of a colored net.
    Enumerate {
        #[command(flatten)]
        source: NetSource,
        /// Initial marking; defaults to the document's marking.
        #[arg(long)]
        marking: Option<String>,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_step_size: usize,
        /// Print per-length counts instead of the sequences.
        #[arg(long)]
        count_only: bool,
    },
    /// Check that a colored net and its unfolding behave alike within bounds.
    VerifyUnfolding {
        #[arg(long)]
        colored_net: PathBuf,
        #[arg(long)]
        marking: Option<String>,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_step_size: usize,
        #[arg(long)]
        token_bound: u64,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Validate a morphism between two nets of the same kind.
    CheckMorphism {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        morphism: PathBuf,
    },
    /// Markings reachable by single firings, up to a token bound.
    Reachable {
        #[command(flatten)]
        source: NetSource,
        #[arg(long)]
        marking: Option<String>,
        #[arg(long)]
        token_bound: u64,
    },
    /// Replay steps read line by line, printing the marking after each.
    ///
    /// A line lists comma-separated firings `transition [mode] [*count]`;
    /// blank lines and `#` comments are skipped.
    Simulate {
        #[command(flatten)]
        source: NetSource,
        #[arg(long)]
        marking: Option<String>,
        #[arg(long, default_value = "-")]
        script: PathBuf,
    },
    /// Emit a random colored net.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_places: usize,
        #[arg(long, default_value_t = 3)]
        max_transitions: usize,
        #[arg(long, default_value_t = 3)]
        max_colors_per_place: usize,
        #[arg(long, default_value_t = 3)]
        max_modes_per_transition: usize,
        #[arg(long, default_value_t = 2)]
        max_inscription_size: u64,
        /// Also emit a random initial marking with at most this many tokens.
        #[arg(long)]
        marking_tokens: Option<u64>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Rewrite a net or morphism document in canonical form.
    Fmt {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ValidationFailed(_) | Error::NotEnabled { .. } | Error::NotFunctionLike(_) => EXIT_VIOLATED,
            Error::ResourceLimit(_) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stdin_taken: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &PathBuf) -> Result<String, Failure> {
        if path.as_os_str() == "-" {
            if self.stdin_taken {
                return Err(usage("standard input can only be used for one argument"));
            }
            self.stdin_taken = true;
            let mut text = String::new();
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| usage(format!("reading standard input: {e}")))?;
            Ok(text)
        } else {
            fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
        }
    }

    fn write(&mut self, path: &PathBuf, text: &str) -> Result<(), Failure> {
        if path.as_os_str() == "-" {
            self.out(text)
        } else {
            fs::write(path, text).map_err(|e| usage(format!("writing {}: {e}", path.display())))
        }
    }

    fn out(&mut self, text: &str) -> Result<(), Failure> {
        self.stdout
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("writing output: {e}")))
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stdin_taken: false,
    };
    match execute(&cli, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

enum Loaded {
    Ordinary(PetriNet, Marking),
    Colored(ColoredPetriNet, ColoredMarking),
}

fn load_net(io: &mut Io, source: &NetSource, marking: Option<&str>) -> Result<Loaded, Failure> {
    if let Some(path) = &source.net {
        let NetDocument::Ordinary { net, marking: m } = parse_document(&io.read(path)?)? else {
            return Err(usage("--net expects an ordinary net document"));
        };
        let m = match marking {
            Some(text) => parse_marking(&net, text)?,
            None => m.unwrap_or_default(),
        };
        Ok(Loaded::Ordinary(net, m))
    } else {
        let path = source.colored_net.as_ref().expect("clap enforces one source");
        let (net, cm) = load_colored(io, path, marking)?;
        Ok(Loaded::Colored(net, cm))
    }
}

fn load_colored(
    io: &mut Io,
    path: &PathBuf,
    marking: Option<&str>,
) -> Result<(ColoredPetriNet, ColoredMarking), Failure> {
    let NetDocument::Colored { net, marking: m } = parse_document(&io.read(path)?)? else {
        return Err(usage("--colored-net expects a colored net document"));
    };
    let cm = match marking {
        Some(text) => parse_colored_marking(&net, text)?,
        None => m.unwrap_or_default(),
    };
    Ok((net, cm))
}

fn execute(cli: &Cli, io: &mut Io) -> Result<i32, Failure> {
    let budget = cli.node_budget;
    match &cli.command {
        Command::Unfold { colored_net, out } => {
            let (net, cm) = load_colored(io, colored_net, None)?;
            let unfolded = unfold_net(&net)?;
            let marking = if cm.is_empty() {
                None
            } else {
                Some(marking_to_unfolded(&net, &cm)?)
            };
            io.write(out, &emit_document(&NetDocument::Ordinary { net: unfolded, marking }))?;
            Ok(EXIT_OK)
        }

        Command::Enumerate {
            source,
            marking,
            max_len,
            max_step_size,
            count_only,
        } => {
            let sequences: Vec<Vec<String>> = match load_net(io, source, marking.as_deref())? {
                Loaded::Ordinary(net, m) => {
                    petri::enumerate_firing_sequences(&net, &m, *max_len, *max_step_size, budget)?
                        .into_iter()
                        .map(|(steps, _)| steps.iter().map(Step::to_string).collect())
                        .collect()
                }
                Loaded::Colored(net, cm) => enumerate_step_sequences(&net, &cm, *max_len, *max_step_size, budget)?
                    .into_iter()
                    .map(|s| s.layers().iter().map(ColoredStep::to_string).collect())
                    .collect(),
            };
            let mut text = String::new();
            if *count_only {
                let mut per_length = BTreeMap::new();
                for s in &sequences {
                    *per_length.entry(s.len()).or_insert(0usize) += 1;
                }
                for (len, n) in per_length {
                    text.push_str(&format!("length {len}: {n}\n"));
                }
            } else {
                for (i, s) in sequences.iter().enumerate() {
                    text.push_str(&format!("# sequence {} (length {})\n", i + 1, s.len()));
                    for layer in s {
                        text.push_str(layer);
                        text.push('\n');
                    }
                }
            }
            text.push_str(&format!("total: {}\n", sequences.len()));
            io.out(&text)?;
            Ok(EXIT_OK)
        }

        Command::VerifyUnfolding {
            colored_net,
            marking,
            max_len,
            max_step_size,
            token_bound,
            report,
        } => {
            let (net, cm) = load_colored(io, colored_net, marking.as_deref())?;
            let result = verify_unfolding_iso(&net, &cm, *max_len, *max_step_size, *token_bound, budget)?;
            if let Some(path) = report {
                let json = serde_json::to_string_pretty(&result).expect("report serializes");
                io.write(path, &(json + "\n"))?;
            }
            if !cli.quiet {
                io.out(&format!("{result}\n"))?;
            }
            Ok(if result.holds() { EXIT_OK } else { EXIT_VIOLATED })
        }

        Command::CheckMorphism { from, to, morphism } => {
            let from = parse_document(&io.read(from)?)?;
            let to = parse_document(&io.read(to)?)?;
            let psi = parse_morphism(&io.read(morphism)?)?;
            let report: Report = match (&from, &to, &psi) {
                (
                    NetDocument::Ordinary { net: a, .. },
                    NetDocument::Ordinary { net: b, .. },
                    MorphismDocument::Ordinary(phi),
                ) => check_net_morphism(a, b, phi),
                (
                    NetDocument::Colored { net: a, .. },
                    NetDocument::Colored { net: b, .. },
                    MorphismDocument::Colored(psi),
                ) => check_colored_morphism(a, b, psi),
                (
                    NetDocument::Colored { net: a, .. },
                    NetDocument::Colored { net: b, .. },
                    MorphismDocument::Ordinary(base),
                ) => {
                    let psi = crate::colored::ColoredMorphism {
                        base: base.clone(),
                        ..Default::default()
                    };
                    check_colored_morphism(a, b, &psi)
                }
                _ => return Err(usage("the two nets and the morphism must be of the same kind")),
            };
            if report.is_valid() {
                if !cli.quiet {
                    io.out("valid\n")?;
                }
                Ok(EXIT_OK)
            } else {
                io.out(&format!("{report}\n"))?;
                Ok(EXIT_VIOLATED)
            }
        }

        Command::Reachable {
            source,
            marking,
            token_bound,
        } => {
            let lines: Vec<String> = match load_net(io, source, marking.as_deref())? {
                Loaded::Ordinary(net, m) => petri::reachable(&net, &m, *token_bound, budget)?
                    .iter()
                    .map(Marking::to_string)
                    .collect(),
                Loaded::Colored(net, cm) => colored_reachable(&net, &cm, *token_bound, budget)?
                    .iter()
                    .map(ColoredMarking::to_string)
                    .collect(),
            };
            let mut text = lines.join("\n");
            text.push('\n');
            if !cli.quiet {
                text.push_str(&format!("total: {}\n", lines.len()));
            }
            io.out(&text)?;
            Ok(EXIT_OK)
        }

        Command::Simulate {
            source,
            marking,
            script,
        } => {
            let loaded = load_net(io, source, marking.as_deref())?;
            let script = io.read(script)?;
            simulate(io, loaded, &script, cli.quiet)
        }

        Command::Generate {
            seed,
            max_places,
            max_transitions,
            max_colors_per_place,
            max_modes_per_transition,
            max_inscription_size,
            marking_tokens,
            out,
        } => {
            let cfg = GeneratorConfig {
                seed: *seed,
                max_places: *max_places,
                max_transitions: *max_transitions,
                max_colors_per_place: *max_colors_per_place,
                max_modes_per_transition: *max_modes_per_transition,
                max_inscription_size: *max_inscription_size,
            };
            let net = random_colored_net(&cfg)?;
            let marking = marking_tokens.map(|n| random_colored_marking(&net, *seed, n));
            io.write(out, &emit_document(&NetDocument::Colored { net, marking }))?;
            Ok(EXIT_OK)
        }

        Command::Fmt { input, out } => {
            let text = io.read(input)?;
            let is_morphism = crate::netio::syntax::parse_entries(&text)?
                .iter()
                .any(|(k, v)| k.name == "kind" && matches!(v.as_atom("kind"), Ok("morphism")));
            let canonical = if is_morphism {
                emit_morphism(&parse_morphism(&text)?)
            } else {
                emit_document(&parse_document(&text)?)
            };
            io.write(out, &canonical)?;
            Ok(EXIT_OK)
        }
    }
}

/// One firing item of a simulation line: `transition [mode] [*count]`.
fn parse_item(item: &str, colored: bool, line: usize) -> Result<(Transition, Option<String>, u64), Failure> {
    let mut words: Vec<&str> = item.split_whitespace().collect();
    let mut count = 1;
    if let Some(last) = words.last() {
        if let Some(n) = last.strip_prefix('*') {
            count = n
                .parse()
                .map_err(|_| usage(format!("line {line}: bad count `{last}`")))?;
            words.pop();
        }
    }
    match (colored, words.as_slice()) {
        (false, [t]) => Ok((Transition::from(*t), None, count)),
        (true, [t, k]) => Ok((Transition::from(*t), Some(k.to_string()), count)),
        (false, _) => Err(usage(format!(
            "line {line}: expected `transition [*count]`, found `{item}`"
        ))),
        (true, _) => Err(usage(format!(
            "line {line}: expected `transition mode [*count]`, found `{item}`"
        ))),
    }
}

fn simulate(io: &mut Io, loaded: Loaded, script: &str, quiet: bool) -> Result<i32, Failure> {
    let colored = matches!(loaded, Loaded::Colored(..));
    let mut state = loaded;
    if !quiet {
        let initial = match &state {
            Loaded::Ordinary(_, m) => m.to_string(),
            Loaded::Colored(_, cm) => cm.to_string(),
        };
        io.out(&format!("initial: {initial}\n"))?;
    }
    for (i, raw) in script.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        let items = content
            .split(',')
            .map(|item| parse_item(item, colored, line))
            .collect::<Result<Vec<_>, _>>()?;
        let fired = match &mut state {
            Loaded::Ordinary(net, m) => {
                let mut step = Step::new();
                for (t, _, n) in items {
                    step.insert(t, n)?;
                }
                *m = petri::fire(net, m, &step)?;
                m.to_string()
            }
            Loaded::Colored(net, cm) => {
                let mut step = ColoredStep::new();
                for (t, k, n) in items {
                    step.insert(Binding::new(t, k.expect("colored items carry a mode")), n)?;
                }
                *cm = colored_fire(net, cm, &step)?;
                cm.to_string()
            }
        };
        io.out(&format!("{line}: {fired}\n"))?;
    }
    Ok(EXIT_OK)
}
