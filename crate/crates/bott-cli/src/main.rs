//! `bott`: census and exploration of acyclic digraphs up to Bott
//! equivalence.
//!
//! Exit codes: 0 success (or "true" verdicts), 1 domain-false (e.g. `equiv`
//! on inequivalent digraphs, a failed selftest), 2 usage or input errors,
//! 3 resource errors (memory budget, truncated orbits).

use bott::record::{census_json, fingerprint_json};
use bott::{
    adjacency_matrix, characteristic_matrix, classify, enumerate_dags, fingerprint, format_record,
    parse_record, CensusConfig, CensusFilter, Error, GF2Matrix, IndexSet,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "bott", version, about = "Bott equivalence census of acyclic digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Orientable,
    Symplectic,
}

impl From<FilterArg> for CensusFilter {
    fn from(f: FilterArg) -> CensusFilter {
        match f {
            FilterArg::All => CensusFilter::All,
            FilterArg::Orientable => CensusFilter::Orientable,
            FilterArg::Symplectic => CensusFilter::Symplectic,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Stream every isomorphism class of acyclic digraphs on K vertices,
    /// one record per line, ascending by canonical code.
    Enumerate {
        #[arg(short = 'n', value_name = "K")]
        n: usize,
        /// Write records to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long = "mem-mb")]
        mem_mb: Option<usize>,
    },
    /// Count Bott equivalence classes on K vertices and print the census as
    /// one JSON line.
    Classify {
        #[arg(short = 'n', value_name = "K")]
        n: usize,
        /// Which class representatives the --reps file receives.
        #[arg(long, value_enum, default_value = "all")]
        filter: FilterArg,
        /// Write one representative record per class to this file.
        #[arg(long)]
        reps: Option<PathBuf>,
        /// Partition seeds by level sequence into this many passes.
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long = "mem-mb")]
        mem_mb: Option<usize>,
    },
    /// Print the invariant fingerprint of a record (or of each line of a
    /// file) as JSON.
    Invariants {
        #[arg(value_name = "REC", required_unless_present = "file")]
        rec: Option<String>,
        #[arg(long, conflicts_with = "rec")]
        file: Option<PathBuf>,
    },
    /// Decide Bott equivalence of two records. Exit code 0 = equivalent,
    /// 1 = not equivalent.
    Equiv {
        rec1: String,
        rec2: String,
    },
    /// Print the Bott orbit of a record as JSON.
    Orbit {
        rec: String,
        /// Stop after this many members and report a truncated orbit
        /// (exit code 3).
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Print the canonical representative of a record.
    Canon {
        rec: String,
    },
    /// Randomized digraph/matrix correspondence checks. Exit code 0 when
    /// every trial passes.
    Selftest {
        #[arg(short = 'n', value_name = "K")]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn thread_count(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("BOTT_THREADS").ok().and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

fn census_config(threads: Option<usize>, mem_mb: Option<usize>) -> CensusConfig {
    CensusConfig {
        threads: thread_count(threads),
        mem_budget_mb: mem_mb.unwrap_or(2048),
        ..CensusConfig::default()
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Enumerate { n, out, threads, mem_mb } => {
            let cfg = census_config(threads, mem_mb);
            let classes = enumerate_dags(n, &cfg)?;
            let mut sink: BufWriter<Box<dyn Write>> = BufWriter::new(match out {
                Some(path) => Box::new(File::create(path).map_err(io_error)?),
                None => Box::new(std::io::stdout().lock()),
            });
            for class in classes {
                writeln!(sink, "{}", format_record(&class.digraph())).map_err(io_error)?;
            }
            sink.flush().map_err(io_error)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { n, filter, reps, shards, threads, mem_mb } => {
            let cfg = CensusConfig {
                shards,
                filter: filter.into(),
                keep_representatives: reps.is_some(),
                ..census_config(threads, mem_mb)
            };
            let start = Instant::now();
            let census = classify(n, &cfg)?;
            let elapsed_ms = start.elapsed().as_millis() as u64;
            if let Some(path) = reps {
                let mut sink = BufWriter::new(File::create(path).map_err(io_error)?);
                for rep in census.representatives.as_deref().unwrap_or(&[]) {
                    writeln!(sink, "{}", format_record(&rep.digraph())).map_err(io_error)?;
                }
                sink.flush().map_err(io_error)?;
            }
            println!("{}", census_json(&census, elapsed_ms));
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants { rec, file } => {
            match (rec, file) {
                (Some(rec), None) => {
                    println!("{}", fingerprint_json(&fingerprint(&parse_record(&rec)?)));
                }
                (None, Some(path)) => {
                    let reader = BufReader::new(File::open(path).map_err(io_error)?);
                    let stdout = std::io::stdout().lock();
                    let mut sink = BufWriter::new(stdout);
                    for line in reader.lines() {
                        let line = line.map_err(io_error)?;
                        if line.is_empty() {
                            continue;
                        }
                        let fp = fingerprint(&parse_record(&line)?);
                        writeln!(sink, "{}", fingerprint_json(&fp)).map_err(io_error)?;
                    }
                    sink.flush().map_err(io_error)?;
                }
                _ => unreachable!("clap enforces exactly one input"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { rec1, rec2 } => {
            let d = parse_record(&rec1)?;
            let h = parse_record(&rec2)?;
            if bott::are_bott_equivalent(&d, &h) {
                println!("equivalent");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not equivalent");
                Ok(ExitCode::from(1))
            }
        }
        Command::Orbit { rec, limit } => {
            let d = parse_record(&rec)?;
            let result = bott::classify::orbit(&d, limit);
            #[derive(serde::Serialize)]
            struct OrbitReport {
                representative: String,
                size: usize,
                truncated: bool,
                members: Vec<String>,
            }
            let report = OrbitReport {
                representative: format_record(&result.representative.digraph()),
                size: result.size,
                truncated: result.truncated,
                members: result.members.iter().map(|m| format_record(&m.digraph())).collect(),
            };
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            if result.truncated {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Canon { rec } => {
            let d = parse_record(&rec)?;
            println!("{}", format_record(&d.canonical_form().digraph()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { n, trials, seed } => {
            if n == 0 || n > bott::N_MAX {
                return Err(Error::VertexCount { n, max: bott::N_MAX });
            }
            match selftest(n, trials, seed) {
                Ok(()) => {
                    println!("selftest: {trials} trials passed (n<={n}, seed {seed})");
                    Ok(ExitCode::SUCCESS)
                }
                Err(msg) => {
                    eprintln!("selftest: FAILED: {msg}");
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::Format(format!("io: {e}"))
}

/// Correspondence checks on seeded random digraphs: graph moves
/// against their matrix counterparts, involutions, characteristic-matrix
/// minors, rank preservation and fingerprint constancy.
fn selftest(n_max: usize, trials: usize, seed: u64) -> Result<(), String> {
    let mut rng = bott::random::rng_from_seed(seed);
    for t in 0..trials {
        let n = 1 + t % n_max;
        let density = 1 + (t / n_max) % 3;
        let d = bott::random::random_digraph(n, density as u32, 4, &mut rng);
        let a = adjacency_matrix(&d);

        for v in 0..n {
            let lc = d.local_complement(v).map_err(|e| e.to_string())?;
            if lc.local_complement(v) != Ok(d) {
                return Err(format!("local complementation at {v} is not an involution: {d:?}"));
            }
            let phi = a.local_complement(v).map_err(|e| e.to_string())?;
            if phi != adjacency_matrix(&lc) {
                return Err(format!("matrix/digraph mismatch for local complement at {v}: {d:?}"));
            }
            if phi.rank() != a.rank() {
                return Err(format!("rank changed under local complement at {v}: {d:?}"));
            }
            if fingerprint(&lc) != fingerprint(&d) {
                return Err(format!("fingerprint changed under local complement at {v}: {d:?}"));
            }
        }

        if n >= 2 {
            let (s, v, w) = bott::random::random_digraph_with_siblings(n, 2, 4, &mut rng);
            let sa = adjacency_matrix(&s);
            let slid = s.slide(v, w).map_err(|e| e.to_string())?;
            if slid.slide(v, w) != Ok(s) {
                return Err(format!("slide ({v},{w}) is not an involution: {s:?}"));
            }
            // elementary coefficient matrix realizing the slide: the row of v
            // adds into the row of w, at their positions in the sorted pair
            let idx = IndexSet::new(vec![v.min(w), v.max(w)]).map_err(|e| e.to_string())?;
            let c = if v < w {
                GF2Matrix::from_rows(vec![0b01, 0b11], 2)
            } else {
                GF2Matrix::from_rows(vec![0b11, 0b10], 2)
            }
            .map_err(|e| e.to_string())?;
            let phi = sa.transform_row_block(&idx, &c).map_err(|e| e.to_string())?;
            if phi != adjacency_matrix(&slid) {
                return Err(format!("matrix/digraph mismatch for slide ({v},{w}): {s:?}"));
            }
            if phi.rank() != sa.rank() {
                return Err(format!("rank changed under slide ({v},{w}): {s:?}"));
            }
            if fingerprint(&slid) != fingerprint(&s) {
                return Err(format!("fingerprint changed under slide ({v},{w}): {s:?}"));
            }
        }

        let characteristic = characteristic_matrix(&a).map_err(|e| e.to_string())?;
        if !characteristic.all_principal_minors_one().map_err(|e| e.to_string())? {
            return Err(format!("characteristic matrix has a zero principal minor: {d:?}"));
        }

        let p = bott::random::random_permutation(n, &mut rng);
        let relabeled = d.relabel(&p).map_err(|e| e.to_string())?;
        if adjacency_matrix(&relabeled) != a.conjugate(&p).map_err(|e| e.to_string())? {
            return Err(format!("conjugation does not match relabeling: {d:?}"));
        }
        if relabeled.canonical_form() != d.canonical_form() {
            return Err(format!("canonical form changed under relabeling: {d:?}"));
        }
        if fingerprint(&relabeled) != fingerprint(&d) {
            return Err(format!("fingerprint changed under relabeling: {d:?}"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Resource { .. } | Error::LimitExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
