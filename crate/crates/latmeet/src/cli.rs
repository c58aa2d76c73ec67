//! Command-line front end. Exit codes: 0 success (or a true answer), 1 a
//! false answer from a boolean query, 2 parse/usage errors, 3 validation
//! errors, 4 algorithm/lattice mismatches.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bench::{
    self, Algorithm, BenchRecord, DkSuite, LatticeKind, MeetSuite,
};
use crate::endo;
use crate::files::{self, FileError};
use crate::generators::{self, GenError};
use crate::knowledge::{self, KnowledgeError};
use crate::lattice::Lattice;
use crate::meet::MeetError;
use crate::partition::{self, PartitionError};

#[derive(Parser)]
#[command(name = "latmeet", version, about = "Lattice meets of join-endomorphisms, distributed-knowledge checks, and benchmarks")]
struct Cli {
    /// Seed for anything randomized
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record stream format for bench output
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate lattices, endomorphisms, or partitions
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Compute the meet of two join-endomorphisms
    Meet {
        /// Lattice file ({"n","covers"} or {"powerset":k} / {"mn":n})
        lattice: PathBuf,
        /// First endomorphism (JSON array)
        f: PathBuf,
        /// Second endomorphism (JSON array)
        g: PathBuf,
        /// dmeet, dmeet+, gmeet, gmeet*, gmeet_mono, gmeet_mono*, gmeet_mono_lazy, brute
        #[arg(long, default_value = "gmeet_mono*")]
        algorithm: String,
    },
    /// Run a meet-algorithm benchmark campaign
    Bench(BenchArgs),
    /// Decide distributed knowledge; exit 0 = yes, 1 = no
    Dk(DkArgs),
    /// Partition operations backed by disjoint sets
    Partition {
        #[command(subcommand)]
        op: PartitionCmd,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Write a lattice file
    Lattice {
        /// powerset, mn, dist, or arb
        #[arg(long)]
        kind: String,
        /// Bits, middle count, poset points, or target size (kind-dependent)
        #[arg(long)]
        param: usize,
    },
    /// Write a random join-endomorphism for a lattice
    Endo {
        #[arg(long)]
        lattice: PathBuf,
        /// Number of generator steps (defaults to |J(L)|)
        #[arg(long)]
        density: Option<usize>,
    },
    /// Write a uniform random partition of 0..n
    Partition {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Lattice families: powerset, mn, dist, arb, chain (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "powerset")]
    kinds: Vec<String>,
    /// Size parameters: comma list and/or inclusive ranges, e.g. 4..10 or 3,5,9
    #[arg(long, default_value = "4..10")]
    sizes: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Algorithms to run (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "dmeet,dmeet+")]
    algorithms: Vec<String>,
}

#[derive(Args)]
struct DkArgs {
    /// How the three inputs are represented
    #[arg(long, value_enum, required_unless_present = "bench")]
    mode: Option<DkMode>,
    /// The two agents' files followed by the candidate (i, j, m)
    #[arg(num_args = 0..=3)]
    inputs: Vec<PathBuf>,
    /// Benchmark the four decision variants instead of answering one query
    #[arg(long)]
    bench: bool,
    /// Sizes for --bench
    #[arg(long, default_value = "8..12")]
    sizes: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Largest n for the operator-array variants
    #[arg(long, default_value_t = 16)]
    op_cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DkMode {
    Operators,
    Relations,
    Partitions,
}

#[derive(Subcommand)]
enum PartitionCmd {
    /// Intersect two partitions; optionally check a third against the result
    Intersect {
        a: PathBuf,
        b: PathBuf,
        /// When given, also print whether this partition equals the intersection
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Test whether two partitions are equal
    Equal { a: PathBuf, b: PathBuf },
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Validation(String),
    Mismatch(String),
}

impl CliError {
    fn exit(&self) -> ExitCode {
        match self {
            CliError::Parse(_) => ExitCode::from(2),
            CliError::Validation(_) => ExitCode::from(3),
            CliError::Mismatch(_) => ExitCode::from(4),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) | CliError::Mismatch(m) => m,
        }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> CliError {
        match e {
            FileError::Io(_) | FileError::Parse { .. } => CliError::Parse(e.to_string()),
            FileError::Validation { .. } => CliError::Validation(e.to_string()),
        }
    }
}

impl From<MeetError> for CliError {
    fn from(e: MeetError) -> CliError {
        CliError::Mismatch(e.to_string())
    }
}

impl From<KnowledgeError> for CliError {
    fn from(e: KnowledgeError) -> CliError {
        CliError::Validation(e.to_string())
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> CliError {
        CliError::Validation(e.to_string())
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> CliError {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Parse(e.to_string())
    }
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.cmd {
        Cmd::Gen { what } => cmd_gen(cli, what),
        Cmd::Meet { lattice, f, g, algorithm } => cmd_meet(cli, lattice, f, g, algorithm),
        Cmd::Bench(args) => cmd_bench(cli, args),
        Cmd::Dk(args) => cmd_dk(cli, args),
        Cmd::Partition { op } => cmd_partition(cli, op),
    }
}

/// Print a line, treating a closed pipe (e.g. `| head`) as a silent success.
fn say(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.map_err(CliError::from),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(CliError::from),
        None => say(text.trim_end()),
    }
}

fn emit_records(cli: &Cli, records: &[BenchRecord]) -> Result<(), CliError> {
    let mut buf = Vec::new();
    match cli.format {
        Format::Csv => {
            bench::write_csv(records, &mut buf)?;
            if records.is_empty() {
                buf.extend_from_slice(bench::csv_header().as_bytes());
                buf.push(b'\n');
            }
        }
        Format::Json => bench::write_json(records, &mut buf)?,
    }
    emit(cli, &String::from_utf8(buf).expect("utf8 records"))
}

fn cmd_gen(cli: &Cli, what: &GenCmd) -> Result<ExitCode, CliError> {
    match what {
        GenCmd::Lattice { kind, param } => {
            let kind = LatticeKind::parse(kind)
                .filter(|k| *k != LatticeKind::Chain)
                .ok_or_else(|| CliError::Parse(format!("unknown lattice kind '{kind}'")))?;
            let lat = kind.build(*param, cli.seed)?;
            emit(cli, &lattice_json(&lat))?;
            eprintln!("n={}", lat.n());
            Ok(ExitCode::SUCCESS)
        }
        GenCmd::Endo { lattice, density } => {
            let lat = files::read_lattice(lattice)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let e = match density {
                Some(d) => endo::random_endo_with_density(&lat, &mut rng, *d),
                None => endo::random_endo(&lat, &mut rng),
            };
            emit(cli, &serde_json::to_string(e.map()).expect("serializable"))?;
            Ok(ExitCode::SUCCESS)
        }
        GenCmd::Partition { n } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let p = generators::random_partition(*n, &mut rng);
            emit(cli, &serde_json::to_string(p.blocks()).expect("serializable"))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn lattice_json(lat: &Lattice) -> String {
    #[derive(serde::Serialize)]
    struct L {
        n: usize,
        covers: Vec<(usize, usize)>,
    }
    serde_json::to_string(&L { n: lat.n(), covers: lat.cover_pairs() }).expect("serializable")
}

fn cmd_meet(
    cli: &Cli,
    lattice: &PathBuf,
    f: &PathBuf,
    g: &PathBuf,
    algorithm: &str,
) -> Result<ExitCode, CliError> {
    let alg = Algorithm::parse(algorithm)
        .ok_or_else(|| CliError::Parse(format!("unknown algorithm '{algorithm}'")))?;
    let lat = files::read_lattice(lattice)?;
    let fe = files::read_endo(f, &lat)?;
    let ge = files::read_endo(g, &lat)?;
    if !endo::is_join_endo(&lat, &fe) {
        return Err(CliError::Validation(format!("{} is not a join-endomorphism", f.display())));
    }
    if !endo::is_join_endo(&lat, &ge) {
        return Err(CliError::Validation(format!("{} is not a join-endomorphism", g.display())));
    }
    let res = alg.run(&lat, &fe, &ge)?;
    emit(cli, &serde_json::to_string(res.endo.map()).expect("serializable"))?;
    eprintln!(
        "algorithm={} n={} joins={} meets={} iterations={}",
        alg.name(),
        lat.n(),
        res.counters.joins,
        res.counters.meets,
        res.iterations
    );
    Ok(ExitCode::SUCCESS)
}

/// Inclusive range syntax: "4..10" → 4,5,…,10; commas combine terms.
fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let mut sizes = Vec::new();
    for term in text.split(',') {
        let term = term.trim();
        if let Some((lo, hi)) = term.split_once("..") {
            let lo: usize =
                lo.parse().map_err(|_| CliError::Parse(format!("bad size '{term}'")))?;
            let hi: usize =
                hi.parse().map_err(|_| CliError::Parse(format!("bad size '{term}'")))?;
            if lo > hi {
                return Err(CliError::Parse(format!("empty range '{term}'")));
            }
            sizes.extend(lo..=hi);
        } else {
            sizes.push(term.parse().map_err(|_| CliError::Parse(format!("bad size '{term}'")))?);
        }
    }
    if sizes.is_empty() {
        return Err(CliError::Parse("no sizes given".into()));
    }
    Ok(sizes)
}

fn cmd_bench(cli: &Cli, args: &BenchArgs) -> Result<ExitCode, CliError> {
    let kinds = args
        .kinds
        .iter()
        .map(|k| {
            LatticeKind::parse(k).ok_or_else(|| CliError::Parse(format!("unknown kind '{k}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let algorithms = args
        .algorithms
        .iter()
        .map(|a| {
            Algorithm::parse(a).ok_or_else(|| CliError::Parse(format!("unknown algorithm '{a}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let suite = MeetSuite {
        kinds,
        sizes: parse_sizes(&args.sizes)?,
        trials: args.trials,
        algorithms,
        seed: cli.seed,
    };
    let records = bench::run_meet_suite(&suite)?;
    emit_records(cli, &records)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dk(cli: &Cli, args: &DkArgs) -> Result<ExitCode, CliError> {
    if args.bench {
        let mut suite = DkSuite::new(parse_sizes(&args.sizes)?, args.trials, cli.seed);
        suite.op_cap = args.op_cap;
        let records = bench::run_dk_suite(&suite);
        emit_records(cli, &records)?;
        return Ok(ExitCode::SUCCESS);
    }
    if args.inputs.len() != 3 {
        return Err(CliError::Parse(format!(
            "expected three input files (i, j, m), got {}",
            args.inputs.len()
        )));
    }
    let (a, b, m) = (&args.inputs[0], &args.inputs[1], &args.inputs[2]);
    let yes = match args.mode.expect("required unless --bench") {
        DkMode::Operators => {
            let vki = files::read_kop(a)?;
            let vkj = files::read_kop(b)?;
            let vkm = files::read_kop(m)?;
            knowledge::decide_dk_operators(&vki, &vkj, &vkm)?
        }
        DkMode::Relations => {
            let ri = files::read_relation(a)?;
            let rj = files::read_relation(b)?;
            let rm = files::read_relation(m)?;
            knowledge::decide_dk_relations(&ri, &rj, &rm)?
        }
        DkMode::Partitions => {
            let pi = files::read_partition(a)?;
            let pj = files::read_partition(b)?;
            let pm = files::read_partition(m)?;
            knowledge::decide_dk_partitions(&pi, &pj, &pm)?
        }
    };
    say(&yes.to_string())?;
    Ok(if yes { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_partition(cli: &Cli, op: &PartitionCmd) -> Result<ExitCode, CliError> {
    match op {
        PartitionCmd::Intersect { a, b, check } => {
            let pa = files::read_partition(a)?;
            let pb = files::read_partition(b)?;
            if pa.n() != pb.n() {
                return Err(CliError::Validation(format!(
                    "operands cover different ground sets ({} vs {})",
                    pa.n(),
                    pb.n()
                )));
            }
            let mut da = partition::partition_to_ds(&pa);
            let mut db = partition::partition_to_ds(&pb);
            let mut q = partition::intersection(&mut da, &mut db)?;
            let pq = partition::ds_to_partition(&mut q);
            emit(cli, &serde_json::to_string(pq.blocks()).expect("serializable"))?;
            if let Some(check) = check {
                let pm = files::read_partition(check)?;
                let same = pm.n() == pq.n() && pm == pq;
                say(&same.to_string())?;
                return Ok(if same { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
            Ok(ExitCode::SUCCESS)
        }
        PartitionCmd::Equal { a, b } => {
            let pa = files::read_partition(a)?;
            let pb = files::read_partition(b)?;
            let mut da = partition::partition_to_ds(&pa);
            let mut db = partition::partition_to_ds(&pb);
            let same = partition::equal(&mut da, &mut db)?;
            say(&same.to_string())?;
            Ok(if same { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_syntax() {
        assert_eq!(parse_sizes("4..7").unwrap(), vec![4, 5, 6, 7]);
        assert_eq!(parse_sizes("3,9,2").unwrap(), vec![3, 9, 2]);
        assert_eq!(parse_sizes("1..2,10").unwrap(), vec![1, 2, 10]);
        assert!(parse_sizes("9..3").is_err());
        assert!(parse_sizes("x").is_err());
        assert!(parse_sizes("").is_err());
    }

    #[test]
    fn cli_structure_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
