use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use hurwitzlab::cache::{CharCache, CACHE_ENV};
use hurwitzlab::dessin::{verify_dessin, Dessin, RoleMap};
use hurwitzlab::emit::{self, Format};
use hurwitzlab::enumeration::golden::{self, KnownVerdict};
use hurwitzlab::monodromy::counting::count_both;
use hurwitzlab::monodromy::perm::verify_certificate;
use hurwitzlab::{decide, enumerate_s4, enumerate_t1, BranchDatum, CandidateRecord, Certificate, Decision, Policy, Verdict};

const USAGE: u8 = 1;
const MISMATCH: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "hurwitzlab", version, about = "Candidate branched covers over hyperbolic triangle orbifolds")]
struct RunConfig {
    #[command(subcommand)]
    command: Command,

    /// Character cache file.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List candidate branch data.
    Enumerate {
        #[command(flatten)]
        select: Select,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Decide realizability of one datum or of the listed candidates.
    Decide {
        /// A datum such as "8:(2,2,2,2)(5,1,1,1)(6,2)".
        #[arg(long, value_parser = parse_datum, conflicts_with_all = ["all", "number"])]
        datum: Option<BranchDatum>,
        /// Every candidate passing the filters.
        #[arg(long)]
        all: bool,
        /// Candidates by table number.
        #[arg(long, value_delimiter = ',')]
        number: Vec<u32>,
        #[command(flatten)]
        select: Select,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Produce or check a monodromy certificate and its dessin.
    Certify {
        #[arg(long, value_parser = parse_datum)]
        datum: BranchDatum,
        /// Check a certificate JSON file instead of searching for one.
        #[arg(long)]
        verify: Option<PathBuf>,
        /// Which partitions give white vertices, black vertices and faces,
        /// as indices into the datum, e.g. "0,2,1".
        #[arg(long, value_parser = parse_roles, default_value = "0,1,2")]
        roles: RoleMap,
        /// Write the dessin as Graphviz text to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exact counts of all and of transitive triples for a datum.
    Count {
        #[arg(long, value_parser = parse_datum)]
        datum: BranchDatum,
    },
    /// Rebuild the candidate tables with verdicts and compare them with the
    /// bundled fixture.
    Tables {
        #[arg(long, value_enum, default_value_t = FamilyArg::Both)]
        family: FamilyArg,
        /// Write the regenerated table here.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Inspect or compact the character cache.
    Cache {
        #[arg(value_enum, default_value_t = CacheAction::Stats)]
        action: CacheAction,
    },
}

#[derive(Args, Debug, Clone)]
struct Select {
    #[arg(long, value_enum, default_value_t = FamilyArg::Both)]
    family: FamilyArg,
    #[arg(long)]
    min_degree: Option<u32>,
    #[arg(long)]
    max_degree: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Degrees up to this are searched exhaustively.
    #[arg(long)]
    exhaustive_max_degree: Option<u32>,
    /// Search nodes before falling back to counting.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Never fall back to counting.
    #[arg(long)]
    no_count: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl BudgetArgs {
    fn policy(&self) -> Policy {
        let base = Policy::default();
        Policy {
            exhaustive_max_degree: self.exhaustive_max_degree.unwrap_or(base.exhaustive_max_degree),
            node_budget: self.node_budget.unwrap_or(base.node_budget),
            allow_counting: !self.no_count,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    S4,
    T1,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
    Md,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
            OutputFormat::Md => Format::Md,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CacheAction {
    Stats,
    Keys,
    Compact,
}

fn parse_datum(s: &str) -> Result<BranchDatum, String> {
    s.parse::<BranchDatum>().map_err(|e| match e {
        hurwitzlab::Error::Parse { position, message } => {
            format!("{message}\n  {s}\n  {}^ at byte {position}", " ".repeat(position))
        }
        other => other.to_string(),
    })
}

fn parse_roles(s: &str) -> Result<RoleMap, String> {
    let idx: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match idx[..] {
        [w, b, f] => RoleMap::new(w, b, f).map_err(|e| e.to_string()),
        _ => Err("expected three indices".into()),
    }
}

/// Failure with an exit code and a message for stderr.
struct Failure(u8, String);

impl From<hurwitzlab::Error> for Failure {
    fn from(e: hurwitzlab::Error) -> Self {
        Failure(USAGE, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(USAGE, e.to_string())
    }
}

impl From<hurwitzlab::cache::CacheError> for Failure {
    fn from(e: hurwitzlab::cache::CacheError) -> Self {
        Failure(USAGE, e.to_string())
    }
}

fn candidates(select: &Select) -> Result<Vec<CandidateRecord>, Failure> {
    let mut out = Vec::new();
    if select.family != FamilyArg::T1 {
        out.extend(enumerate_s4()?);
    }
    if select.family != FamilyArg::S4 {
        out.extend(enumerate_t1()?);
    }
    let lo = select.min_degree.unwrap_or(0);
    let hi = select.max_degree.unwrap_or(u32::MAX);
    out.retain(|r| (lo..=hi).contains(&r.datum.degree()));
    Ok(out)
}

fn decide_many(
    records: &[CandidateRecord],
    policy: &Policy,
    cache: Option<&CharCache>,
) -> Result<Vec<(Option<u32>, Decision)>, Failure> {
    let decided: Vec<hurwitzlab::Result<Decision>> =
        records.par_iter().map(|r| decide(&r.datum, policy, cache)).collect();
    let mut out = Vec::with_capacity(records.len());
    for (r, d) in records.iter().zip(decided) {
        out.push((r.reference_number, d?));
    }
    Ok(out)
}

fn open_cache(path: &Option<PathBuf>) -> Result<Option<CharCache>, Failure> {
    Ok(match path {
        Some(p) => Some(CharCache::open(p)?),
        None => None,
    })
}

fn run(config: RunConfig, out: &mut impl Write) -> Result<(), Failure> {
    let cache = open_cache(&config.cache)?;
    let cache = cache.as_ref();
    match config.command {
        Command::Enumerate { select, format } => {
            let records = candidates(&select)?;
            out.write_all(emit::candidates(&records, format.into())?.as_bytes())?;
        }
        Command::Decide {
            datum,
            all,
            number,
            select,
            budget,
            format,
        } => {
            let policy = budget.policy();
            let items = if let Some(datum) = datum {
                let d = decide(&datum, &policy, cache)?;
                vec![(golden::number_of(&datum), d)]
            } else if all || !number.is_empty() {
                let mut records = candidates(&select)?;
                if !number.is_empty() {
                    records.retain(|r| r.reference_number.is_some_and(|n| number.contains(&n)));
                }
                decide_many(&records, &policy, cache)?
            } else {
                return Err(Failure(USAGE, "give --datum, --number or --all".into()));
            };
            out.write_all(emit::decisions(&items, format.into())?.as_bytes())?;
        }
        Command::Certify {
            datum,
            verify,
            roles,
            dot,
            budget,
        } => {
            let cert = match verify {
                Some(path) => {
                    let cert = Certificate::from_json(&fs::read_to_string(path)?)?;
                    if !verify_certificate(&datum, &cert) {
                        return Err(Failure(MISMATCH, format!("certificate does not realize {datum}")));
                    }
                    cert
                }
                None => {
                    let d = decide(&datum, &budget.policy(), cache)?;
                    match (d.verdict, &d.certificate) {
                        (Verdict::Realizable, Some(c)) => c.clone(),
                        (v, _) => return Err(Failure(MISMATCH, format!("{datum} is {v}: {}", d.evidence_summary()))),
                    }
                }
            };
            let dessin = Dessin::with_roles(&datum, &cert, roles)?;
            if !verify_dessin(&datum, &dessin, roles) {
                return Err(Failure(MISMATCH, "dessin does not match the datum".into()));
            }
            writeln!(out, "{}", cert.to_json())?;
            writeln!(out, "{}", dessin.to_json())?;
            if let Some(path) = dot {
                fs::write(path, dessin.export_dot())?;
            }
        }
        Command::Count { datum } => {
            let c = count_both(&datum, cache)?;
            writeln!(out, "datum {datum}")?;
            writeln!(out, "all {}", c.all_count)?;
            writeln!(out, "connected {}", c.connected_count)?;
        }
        Command::Tables {
            family,
            output,
            format,
            budget,
        } => {
            let select = Select {
                family,
                min_degree: None,
                max_degree: None,
            };
            let records = candidates(&select)?;
            let items = decide_many(&records, &budget.policy(), cache)?;
            let (report, diffs) = compare_with_fixture(family, &records, &items);
            for line in &diffs {
                writeln!(out, "diff: {line}")?;
            }
            writeln!(out, "{report}")?;
            if let Some(path) = output {
                fs::write(path, emit::decisions(&items, format.into())?)?;
            }
            if !diffs.is_empty() {
                return Err(Failure(MISMATCH, format!("{} differences from the fixture", diffs.len())));
            }
        }
        Command::Cache { action } => {
            let cache = cache.ok_or_else(|| Failure(USAGE, format!("no cache: pass --cache or set {CACHE_ENV}")))?;
            match action {
                CacheAction::Stats => {
                    let s = cache.stats();
                    writeln!(out, "slices {}", s.slices)?;
                    writeln!(out, "complete {}", s.complete_slices)?;
                    writeln!(out, "values {}", s.values)?;
                }
                CacheAction::Keys => {
                    for k in cache.keys() {
                        writeln!(out, "{}|{}", k.degree, k.class)?;
                    }
                }
                CacheAction::Compact => {
                    let dropped = cache.compact()?;
                    writeln!(out, "dropped {dropped}")?;
                }
            }
        }
    }
    Ok(())
}

/// Diff lines against the fixture and the one-line report.
fn compare_with_fixture(
    family: FamilyArg,
    records: &[CandidateRecord],
    items: &[(Option<u32>, Decision)],
) -> (String, Vec<String>) {
    let mut diffs = Vec::new();
    let expected: BTreeMap<u32, &golden::GoldenRow> = golden::rows()
        .iter()
        .filter(|r| match family {
            FamilyArg::S4 => r.datum.cover_genus() == 0,
            FamilyArg::T1 => r.datum.cover_genus() == 1,
            FamilyArg::Both => true,
        })
        .map(|r| (r.number, r))
        .collect();
    let mut seen = BTreeMap::new();
    for (rec, (_, decision)) in records.iter().zip(items) {
        let Some(n) = rec.reference_number else {
            diffs.push(format!("{} is not in the fixture", rec.datum));
            continue;
        };
        let Some(row) = expected.get(&n) else {
            diffs.push(format!("#{n} {} belongs to another family", rec.datum));
            continue;
        };
        seen.insert(n, ());
        if rec.cover.source.to_string() != row.cover_source || rec.cover.target.to_string() != row.cover_target {
            diffs.push(format!(
                "#{n} cover {} -> {}, fixture {} -> {}",
                rec.cover.source, rec.cover.target, row.cover_source, row.cover_target
            ));
        }
        let want = match row.verdict {
            KnownVerdict::Realizable => Verdict::Realizable,
            KnownVerdict::Exceptional => Verdict::Exceptional,
        };
        if decision.verdict != want {
            diffs.push(format!("#{n} decided {}, fixture {}", decision.verdict, want));
        } else if !decision.evidence_holds() {
            diffs.push(format!("#{n} evidence does not check"));
        }
    }
    for n in expected.keys().filter(|n| !seen.contains_key(n)) {
        diffs.push(format!("#{n} missing"));
    }

    let tally = |genus: u32| {
        let total = records.iter().filter(|r| r.datum.cover_genus() == genus).count();
        let exceptional = items
            .iter()
            .filter(|(_, d)| d.datum.cover_genus() == genus && d.verdict == Verdict::Exceptional)
            .count();
        (total, exceptional)
    };
    let ((s, se), (t, te)) = (tally(0), tally(1));
    let report = match family {
        FamilyArg::Both => format!("{s}+{t} candidates, {se}+{te} exceptional, {} diffs", diffs.len()),
        FamilyArg::S4 => format!("{s} candidates, {se} exceptional, {} diffs", diffs.len()),
        FamilyArg::T1 => format!("{t} candidates, {te} exceptional, {} diffs", diffs.len()),
    };
    (report, diffs)
}

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = config.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    }
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(config, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) => match flushed {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(USAGE)
            }
        },
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
