//! `rectrep` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input,
//! 3 input that parses but violates a requirement (not a bijection,
//! infeasible placement, non-biplane permutation for `construct`, ...).

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rectrep::evaluate::{compact, exhaustive_optimum_limited, Netlist, Objective, DEFAULT_SEARCH_LIMIT};
use rectrep::forcing::construct_forcing_placement;
use rectrep::io::{self as rio, CertificateJson};
use rectrep::permutation::{count, enumerate, enumerate_pruned, PermClass};
use rectrep::render::{embedding_svg, placement_svg};
use rectrep::seqpair::{build_constraint_graphs, extract_sequence_pair};
use rectrep::verify::{run_suite, Suite, SuiteConfig};
use rectrep::Error;

#[derive(Parser)]
#[command(name = "rectrep", version, about = "Representations of rectangle placements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Plane,
    Biplane,
}

impl From<ClassArg> for PermClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Plane => PermClass::Plane,
            ClassArg::Biplane => PermClass::Biplane,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Upper,
    Lower,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Area,
    Hpwl,
}

/// Inputs are a file path, `-` for stdin, or inline JSON.
#[derive(Subcommand)]
enum Command {
    /// Report whether a permutation is plane (or biplane).
    CheckPerm {
        perm: String,
        #[arg(long)]
        biplane: bool,
    },
    /// List plane or biplane permutations of [n], lexicographically.
    Enum {
        class: ClassArg,
        #[arg(long)]
        n: usize,
        /// Print `n<TAB>count` instead of the permutations.
        #[arg(long)]
        count_only: bool,
        /// Use the backtracking generator instead of filtering all n!.
        #[arg(long)]
        pruned: bool,
    },
    /// Print `n<TAB>plane<TAB>biplane` for every n up to the bound.
    Count {
        #[arg(long)]
        up_to: usize,
    },
    /// Extract a sequence pair representing a placement.
    Extract {
        placement: String,
        /// Unrestricted extraction (the result may contain bad quartets).
        #[arg(long)]
        classic: bool,
    },
    /// Dump the constraint graphs of a placement as sorted `i j` arc lines.
    Graphs {
        placement: String,
        #[arg(long)]
        augmented: bool,
    },
    /// Find a bad quartet in a sequence pair.
    Badquartet {
        seqpair: String,
        #[arg(long)]
        extreme: bool,
    },
    /// Build a forcing placement for a biplane permutation.
    Construct {
        perm: String,
        /// Write the placement here and the certificate next to it.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Pack a sequence pair with given rectangle sizes.
    Compact { seqpair: String, dims: String },
    /// Exhaustively optimize over sequence pairs.
    Solve {
        dims: String,
        nets: Option<String>,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        /// Search all (n!)^2 pairs instead of those without bad quartets.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = DEFAULT_SEARCH_LIMIT)]
        limit: usize,
    },
    /// Draw a placement, or the natural embedding of a permutation, as SVG.
    Render {
        input: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

enum Failure {
    Input(Error),
    Io(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_input(arg: &str) -> CliResult<String> {
    let trimmed = arg.trim_start();
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else if trimmed.starts_with('[') || trimmed.starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Io(format!("{arg}: {e}")))
    }
}

fn parse_json(arg: &str) -> CliResult<Value> {
    Ok(serde_json::from_str(&read_input(arg)?).map_err(Error::from)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli, out: &mut impl Write) -> CliResult<()> {
    match cli.command {
        Command::CheckPerm { perm, biplane } => {
            let pi = rio::permutation_from_value(parse_json(&perm)?)?;
            let verdict = match (biplane, biplane && pi.is_biplane(), pi.is_plane()) {
                (true, true, _) => "biplane",
                (true, false, _) => "not-biplane",
                (false, _, true) => "plane",
                (false, _, false) => "not-plane",
            };
            writeln!(out, "{verdict}")?;
        }
        Command::Enum { class, n, count_only, pruned } => {
            if n == 0 {
                return Err(Error::Format("--n must be at least 1".into()).into());
            }
            let class = PermClass::from(class);
            if count_only && !pruned {
                writeln!(out, "{n}\t{}", count(n, class))?;
            } else {
                let perms = if pruned { enumerate_pruned(n, class) } else { enumerate(n, class) };
                if count_only {
                    writeln!(out, "{n}\t{}", perms.len())?;
                } else {
                    for p in perms {
                        writeln!(out, "{}", rio::permutation_to_value(&p))?;
                    }
                }
            }
        }
        Command::Count { up_to } => {
            for n in 1..=up_to {
                writeln!(out, "{n}\t{}\t{}", count(n, PermClass::Plane), count(n, PermClass::Biplane))?;
            }
        }
        Command::Extract { placement, classic } => {
            let p = rio::placement_from_value(parse_json(&placement)?)?;
            let sp = extract_sequence_pair(&p, !classic)?;
            writeln!(out, "{}", rio::sequence_pair_to_value(&sp))?;
        }
        Command::Graphs { placement, augmented } => {
            let p = rio::placement_from_value(parse_json(&placement)?)?;
            let (g1, g2) = build_constraint_graphs(&p, augmented)?;
            for g in [g1, g2] {
                writeln!(out, "# {}", g.label.as_str())?;
                write!(out, "{}", g.dump())?;
            }
        }
        Command::Badquartet { seqpair, extreme } => {
            let sp = rio::sequence_pair_from_value(parse_json(&seqpair)?)?;
            let found = if extreme { sp.find_extreme_bad_quartet() } else { sp.find_bad_quartet() };
            match found {
                Some(q) => writeln!(out, "{}", rio::bad_quartet_to_value(&q))?,
                None => writeln!(out, "none")?,
            }
        }
        Command::Construct { perm, output } => {
            let pi = rio::permutation_from_value(parse_json(&perm)?)?;
            let cert = construct_forcing_placement(&pi)?;
            let placement = rio::placement_to_value(&cert.placement);
            let sidecar = serde_json::to_value(CertificateJson { pi: pi.to_one_based(), verified: cert.checked })
                .expect("certificate serializes");
            match output {
                Some(path) => {
                    write_file(&path, &(pretty(&placement) + "\n"))?;
                    write_file(&path.with_extension("cert.json"), &(pretty(&sidecar) + "\n"))?;
                    writeln!(out, "{sidecar}")?;
                }
                None => writeln!(out, "{}", pretty(&json!({ "placement": placement, "certificate": sidecar })))?,
            }
        }
        Command::Verify { suite, n, samples, seed } => {
            if n == 0 {
                return Err(Error::Format("--n must be at least 1".into()).into());
            }
            let suite = match suite {
                SuiteArg::Upper => Suite::Upper,
                SuiteArg::Lower => Suite::Lower,
                SuiteArg::All => Suite::All,
            };
            let report = run_suite(suite, &SuiteConfig::new(n, samples, seed));
            write!(out, "{report}")?;
            if !report.all_passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Compact { seqpair, dims } => {
            let sp = rio::sequence_pair_from_value(parse_json(&seqpair)?)?;
            let dims = rio::dimensions_from_value(parse_json(&dims)?)?;
            let p = compact(&sp, &dims)?;
            writeln!(out, "{}", pretty(&rio::placement_to_value(&p)))?;
        }
        Command::Solve { dims, nets, objective, full, limit } => {
            let dims = rio::dimensions_from_value(parse_json(&dims)?)?;
            let nets = match nets {
                Some(arg) => rio::netlist_from_value(parse_json(&arg)?)?,
                None => Netlist::empty(),
            };
            let objective = match objective {
                ObjectiveArg::Area => Objective::Area,
                ObjectiveArg::Hpwl => Objective::Hpwl,
            };
            let best = exhaustive_optimum_limited(&dims, &nets, objective, !full, limit)?;
            let report = json!({
                "objective": objective.as_str(),
                "mode": if full { "full" } else { "restricted" },
                "n": dims.len(),
                "candidates": best.candidates,
                "value": rio::rational_to_json(&best.value),
                "sequence_pair": rio::sequence_pair_to_value(&best.sequence_pair),
                "placement": rio::placement_to_value(&best.placement),
            });
            writeln!(out, "{}", pretty(&report))?;
        }
        Command::Render { input, output } => {
            let value = parse_json(&input)?;
            let svg = if value.is_array() {
                embedding_svg(&rio::permutation_from_value(value)?)
            } else {
                placement_svg(&rio::placement_from_value(value)?)
            };
            write_file(&output, &svg)?;
        }
    }
    Ok(())
}

fn configure_threads() {
    if let Some(threads) = std::env::var("SEQPAIR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Ignore the error if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_format() { 2 } else { 3 })
        }
    }
}
