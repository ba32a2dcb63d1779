use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fanoatlas::atlas::{self, AtlasStore, SearchConfig};
use fanoatlas::fanovariants::{evaluate, FanoRecord};
use fanoatlas::loci::{
    canonical_section_locus, class_from_resolution, conic_discriminant, en_hilbert, en_terms, porteous, ConicData,
    MorphismData,
};
use fanoatlas::FanoError;
use flagcalc::dsl::{format_irreducible, parse_ambient, parse_bundle, parse_spec};
use flagcalc::sheafcohom::{cohomology, irreducible_cohomology};
use flagcalc::CoreError;

const WORKERS_ENV: &str = "FANOATLAS_WORKERS";

#[derive(Parser)]
#[command(name = "fanoatlas", version, about = "Fano fourfolds as zero loci of homogeneous bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
    Ndjson,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Part {
    All,
    Fk3,
    Appendix,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of the zero locus, e.g. "P(5) ; O(3)".
    Invariants {
        spec: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cohomology of a bundle on a single factor or product, e.g. "P(4)" "S2Q(-4)".
    Bwb { factor: String, bundle: String },
    /// Cohomology and Euler characteristic of a bundle on an ambient.
    Chi { ambient: String, bundle: String },
    /// Hilbert polynomial of an Eagon–Northcott degeneracy locus.
    Hilbert {
        file: PathBuf,
        /// Lowest and highest twist sampled.
        #[arg(long, default_value_t = -2)]
        from: i64,
        #[arg(long, default_value_t = 5)]
        to: i64,
    },
    /// Discriminant of a conic bundle.
    Discriminant { file: PathBuf },
    /// Bounded enumeration of candidate pairs.
    Search {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_enum, default_value = "all")]
        part: Part,
    },
    /// Evaluate a seed list.
    Table {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_enum, default_value = "all")]
        part: Part,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Fano(#[from] FanoError),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Fano(e.into())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Fano(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Fano(e) if e.is_parse() => 2,
            CliError::Fano(e) if e.is_consistency() => 3,
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.clone(), source })
}

fn print_record_text(out: &mut impl Write, r: &FanoRecord) -> io::Result<()> {
    let opt = |v: Option<i64>| v.map_or("?".to_string(), |x| x.to_string());
    let h = |p, q| r.hodge.get(p, q).to_string();
    writeln!(out, "id {}", r.id)?;
    writeln!(out, "pair {}", r.spec())?;
    writeln!(out, "dim {}", r.dim_x)?;
    writeln!(out, "h0(-K) (-K)^n: {} {}", r.h0_minus_k, r.k_pow)?;
    if r.dim_x == 4 {
        writeln!(out, "h11={} h21={} h31={} h22={}", h(1, 1), h(1, 2), h(1, 3), h(2, 2))?;
    }
    writeln!(out, "rho={} level={} fk3={}", opt(r.rho), opt(r.level), r.is_fk3.map_or("?".into(), |b| b.to_string()))?;
    writeln!(out, "-chi(T)={} euler={}", -r.chi_t, r.euler)?;
    write!(out, "{}", r.hodge)?;
    for a in &r.annotations {
        writeln!(out, "annotation: {a}")?;
    }
    for f in &r.flags {
        writeln!(out, "flag: {f}")?;
    }
    Ok(())
}

fn emit(store: &AtlasStore, part: Part, format: Format) -> Result<()> {
    let (fk3, appendix) = store.split_fk3();
    let chosen: Vec<FanoRecord> = match part {
        Part::All => store.records.clone(),
        Part::Fk3 => fk3.into_iter().cloned().collect(),
        Part::Appendix => appendix.into_iter().cloned().collect(),
    };
    let sub = AtlasStore { records: chosen };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Csv => sub.write_csv(&mut out)?,
        Format::Json => writeln!(out, "{}", sub.to_json()?)?,
        Format::Ndjson => sub.write_ndjson(&mut out)?,
        Format::Text => {
            for r in &sub.records {
                print_record_text(&mut out, r)?;
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

fn summarize(store: &AtlasStore) {
    let (fk3, appendix) = store.split_fk3();
    eprintln!("{} records: {} FK3, {} with h31 != 1 or undetermined", store.len(), fk3.len(), appendix.len());
    for r in &store.records {
        if r.flags.iter().any(|f| f == atlas::GG_INCONCLUSIVE_FLAG) {
            eprintln!("global generation criterion inconclusive: {}", r.spec());
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Invariants { spec, format } => {
            let ast = parse_spec(&spec)?;
            let mut r = evaluate(&ast)?;
            r.annotations = atlas::recognize_patterns(&r);
            let store = atlas::dedup_and_id(vec![r]);
            let r = &store.records[0];
            match format {
                Format::Text => print_record_text(&mut out, r)?,
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(r).map_err(FanoError::from)?)?,
                Format::Ndjson => store.write_ndjson(&mut out)?,
                Format::Csv => store.write_csv(&mut out)?,
            }
        }
        Command::Bwb { factor, bundle } => {
            let amb = parse_ambient(&factor)?;
            let node = parse_bundle(&amb, &bundle)?;
            let expr = node.to_expr(&amb)?;
            let dec = expr.normalize(&amb)?;
            for (b, m) in &dec {
                let t = irreducible_cohomology(&amb, b);
                let mult = if *m > 1 { format!("{m} x ") } else { String::new() };
                writeln!(out, "{mult}{}: {t}", format_irreducible(&amb, b))?;
            }
            let total = cohomology(&amb, &expr)?;
            let nonzero: Vec<String> = total
                .entries
                .iter()
                .enumerate()
                .filter_map(|(q, e)| e.exact().filter(|v| !num_traits::Zero::is_zero(*v)).map(|v| format!("H^{q} = {v}")))
                .collect();
            if nonzero.is_empty() {
                writeln!(out, "acyclic")?;
            } else {
                for l in nonzero {
                    writeln!(out, "{l}")?;
                }
            }
        }
        Command::Chi { ambient, bundle } => {
            let amb = parse_ambient(&ambient)?;
            let expr = parse_bundle(&amb, &bundle)?.to_expr(&amb)?;
            let t = cohomology(&amb, &expr)?;
            let chi = flagcalc::sheafcohom::chi(&amb, &expr)?;
            writeln!(out, "{t}")?;
            writeln!(out, "chi = {chi} (agrees with Riemann-Roch)")?;
        }
        Command::Hilbert { file, from, to } => {
            let m = MorphismData::parse(&read(&file)?)?;
            if to < from {
                return Err(CliError::Usage("--to must not be below --from".into()));
            }
            let ks: Vec<i64> = (from..=to).collect();
            let p = en_hilbert(&m, &ks)?;
            let amb = &m.ambient;
            writeln!(out, "codim {} in the base, dim {}", m.expected_codim(), m.base_dim() - m.expected_codim())?;
            writeln!(out, "chi(O_Z(k)) = {p}")?;
            let terms = en_terms(&m)?;
            let top = amb.top_chern(&m.base);
            let r = m.rank_source().min(m.rank_target()) - 1;
            let a = porteous(amb, &m.target.dual(), &m.source.dual(), r).mul(&top);
            let b = class_from_resolution(&m, &terms).mul(&top);
            let (fa, fb) = (amb.format_class(&a)?, amb.format_class(&b)?);
            writeln!(out, "[Z] = {fa}")?;
            if amb.coordinates(&a)? != amb.coordinates(&b)? {
                return Err(FanoError::Inconsistent { what: "class of Z".into(), left: fa, right: fb }.into());
            }
            if let Ok(s) = canonical_section_locus(&m) {
                writeln!(out, "zero locus of the canonical section: {} ({})", s.formatted, s.description)?;
            }
        }
        Command::Discriminant { file } => {
            let d = ConicData::parse(&read(&file)?)?;
            let amb = &d.ambient;
            let r = conic_discriminant(&d);
            writeln!(out, "[Delta] = {}", amb.format_class(&r.delta)?)?;
            if let Some(q) = &r.delta_degree {
                writeln!(out, "degree of Delta = {q}")?;
            }
            writeln!(out, "[Delta_sing] = {}", amb.format_class(&r.delta_sing)?)?;
            if let Some(n) = &r.sing_count {
                writeln!(out, "singular points of Delta = {n}")?;
            }
        }
        Command::Search { config, format, part } => {
            let cfg = SearchConfig::parse(&read(&config)?)?;
            let res = atlas::search(&cfg);
            let empty = res.failures.iter().filter(|(_, e)| matches!(e, FanoError::VanishingTopChern(_))).count();
            eprintln!("skipped {empty} candidates with empty zero locus");
            for (s, e) in res.failures.iter().filter(|(_, e)| !matches!(e, FanoError::VanishingTopChern(_))) {
                eprintln!("skipped {s}: {e}");
            }
            summarize(&res.store);
            drop(out);
            emit(&res.store, part, format)?;
        }
        Command::Table { seed, format, part } => {
            let rows = atlas::parse_seed(&read(&seed)?)?;
            let specs: Vec<_> = rows.iter().map(|r| r.spec.clone()).collect();
            let res = atlas::run_batch(&specs);
            if let Some((s, e)) = res.failures.first() {
                eprintln!("{s}: {e}");
                return Err(CliError::Usage(format!("{} seed rows failed", res.failures.len())));
            }
            for row in &rows {
                let Some(expected) = &row.expected_id else { continue };
                let spec = row.spec.to_string();
                if let Some(r) = res.store.records.iter().find(|r| r.spec() == spec) {
                    if r.base_id() != atlas::strip_letter(expected) {
                        eprintln!("line {}: computed {} but the seed expects {}", row.line, r.base_id(), expected);
                    }
                }
            }
            summarize(&res.store);
            drop(out);
            emit(&res.store, part, format)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var(WORKERS_ENV) {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("ignoring {WORKERS_ENV}={n}: not a positive integer"),
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
