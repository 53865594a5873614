//! Command line surface: classification, table inspection, stratum
//! arithmetic and finite-field verification with reproducible, citable
//! output.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 on budget refusals.
//!
//! Type grammar: a shape is a comma-separated list of simple types
//! `X<rank>` with an optional central torus suffix `+T<k>`, e.g. `B6`,
//! `A3,A3,D5`, `A2+T1`, or a bare torus `T4`. Levi subsets are 1-based
//! simple-root indices, comma-separated, with `/` separating component
//! groups in product shapes (`1,3` or `1,3/2` or `/2`).

use crate::classifier::{
    classify_borel_closed_form, classify_borel_equidimensional, classify_borel_irreducible,
    classify_borel_normal, classify_borel_normal_closed_form, classify_parabolic_irreducible,
    EquidimStatus, ModalityOracle, NormalityStatus, ParabolicSpec, Status, Verdict,
};
use crate::fforacle::{
    census_cost, count_commuting_pairs, count_cost, empirical_modality,
    exhaustive_smoothness_cost, fit_degree, orbit_census, sampled_smoothness_cost,
    singular_witness, smoothness_exhaustive, smoothness_sample, tangent_dim, Budget, CountMethod,
    GroupKind, OracleError, Support, DEFAULT_BUDGET,
};
use crate::modtables::ModalityTable;
use crate::report::Report;
use crate::rootsys::{build_root_system, cartan_matrix, ReductiveShape, SimpleType};
use crate::strata::{component_floor, cprime_dim, stratum_dim, StratumDatum};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Deserialize;
use serde_json::json;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Environment variable overriding the operation budget (and nothing else).
pub const BUDGET_ENV_VAR: &str = "COMMVAR_BUDGET_OPS";

#[derive(Parser, Debug)]
#[command(
    name = "commvar",
    version,
    about = "Commuting varieties of Borel and parabolic subalgebras: classification and finite-field verification",
    after_help = "Type grammar: COMP(,COMP)*(+T<k>)? or T<k>, where COMP is one of \
A<l> (l>=1), B<l> (l>=2), C<l> (l>=2), D<l> (l>=3), E6, E7, E8, F4, G2.\n\
Levi subsets: 1-based simple-root indices `1,3`, with `/` separating component groups.\n\
Exit codes: 0 ok, 1 input error, 2 budget refusal."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Config file (TOML with optional keys budget_ops, threads)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores; results are thread-count-invariant)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Attach wall-clock runtime to structured reports
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Irreducible,
    Normal,
    Equidim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Sweep,
    #[value(name = "closed-form")]
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountMethodArg {
    #[value(name = "centralizer-sum")]
    CentralizerSum,
    Enumeration,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide irreducibility, normality or equidimensionality
    Classify {
        #[command(subcommand)]
        what: ClassifyCmd,
    },
    /// Inspect the modality tables and the Cartan matrix catalogue
    Tables {
        #[command(subcommand)]
        what: TablesCmd,
    },
    /// Evaluate stratum dimension formulas
    Strata {
        #[command(subcommand)]
        what: StrataCmd,
    },
    /// Brute-force finite-field verification for gl_n
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
}

#[derive(Subcommand, Debug)]
enum ClassifyCmd {
    /// Commuting variety of the Borel subalgebra
    Borel {
        /// Reductive shape, e.g. B6 or A3,A3,D5+T2
        #[arg(long = "type")]
        shape: String,
        #[arg(long, value_enum, default_value_t = Property::Irreducible)]
        property: Property,
        #[arg(long, value_enum, default_value_t = Method::Sweep)]
        method: Method,
        /// Use extrapolated lower bounds beyond the tabulated range
        #[arg(long)]
        extrapolate: bool,
        /// Modality table override file (TOML)
        #[arg(long)]
        overrides: Option<PathBuf>,
    },
    /// Commuting variety of a parabolic subalgebra
    Parabolic {
        #[arg(long = "type")]
        shape: String,
        /// Levi subset I of the parabolic (empty = Borel)
        #[arg(long, default_value = "")]
        levi: String,
        /// Relative modality oracle file (TOML)
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long)]
        extrapolate: bool,
        #[arg(long)]
        overrides: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum TablesCmd {
    /// Dump modality table entries with provenance
    Show {
        /// Restrict to one family (A..G)
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        extrapolate: bool,
        #[arg(long)]
        overrides: Option<PathBuf>,
    },
    /// Dump a Cartan matrix from the embedded catalogue
    Cartan {
        #[arg(long = "type")]
        simple: String,
    },
}

#[derive(Subcommand, Debug)]
enum StrataCmd {
    /// Evaluate the strata described in a TOML file
    Eval {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Count commuting pairs over F_q
    Count {
        #[arg(long)]
        n: usize,
        /// Field sizes, comma separated (primes <= 13)
        #[arg(long, value_delimiter = ',')]
        q: Vec<u8>,
        #[arg(long, default_value = "borel")]
        support: String,
        #[arg(long, value_enum, default_value_t = CountMethodArg::CentralizerSum)]
        method: CountMethodArg,
    },
    /// Census of U(q)- or B(q)-orbits on the nilradical
    Orbits {
        /// U (unitriangular) or B (Borel)
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u8>,
    },
    /// Tangent-space smoothness sampling on regular commuting pairs
    Smooth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u8,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Seed for the sampling generator (required in structured mode)
        #[arg(long)]
        seed: Option<u64>,
        /// Also check every regular commuting pair exhaustively
        #[arg(long)]
        exhaustive: bool,
        /// Also evaluate the constructed singular witness (needs n >= 3)
        #[arg(long)]
        witness: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Budget(String),
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Budget { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<crate::classifier::ClassifyError> for CliError {
    fn from(e: crate::classifier::ClassifyError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<crate::strata::StrataError> for CliError {
    fn from(e: crate::strata::StrataError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<crate::modtables::TableError> for CliError {
    fn from(e: crate::modtables::TableError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<crate::rootsys::RootSysError> for CliError {
    fn from(e: crate::rootsys::RootSysError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Deserialize, Default)]
struct ConfigFile {
    budget_ops: Option<u64>,
    threads: Option<usize>,
}

struct Settings {
    format: Format,
    budget: Budget,
    threads: Option<usize>,
    timings: bool,
}

/// Parses and runs a command line (without the program name); returns the
/// process exit code.
pub fn run(args: &[String]) -> i32 {
    let argv = std::iter::once("commvar".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    let settings = match load_settings(&cli) {
        Ok(s) => s,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            return 1;
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("{msg}");
            return 2;
        }
    };

    let outcome = match settings.threads {
        Some(t) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                Ok(pool) => pool,
                Err(e) => {
                    eprintln!("error: cannot build thread pool: {e}");
                    return 1;
                }
            };
            pool.install(|| dispatch(&cli.command, &settings))
        }
        None => dispatch(&cli.command, &settings),
    };

    match outcome {
        Ok(()) => 0,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("{msg}");
            2
        }
    }
}

fn load_settings(cli: &Cli) -> Result<Settings, CliError> {
    let mut budget_ops = DEFAULT_BUDGET;
    let mut threads = None;
    if let Some(path) = &cli.config {
        let text = read_file(path)?;
        let config: ConfigFile =
            toml::from_str(&text).map_err(|e| CliError::Input(format!("config file: {e}")))?;
        if let Some(b) = config.budget_ops {
            budget_ops = b;
        }
        threads = config.threads;
    }
    if let Ok(env_budget) = std::env::var(BUDGET_ENV_VAR) {
        budget_ops = env_budget.parse().map_err(|_| {
            CliError::Input(format!(
                "{BUDGET_ENV_VAR} must be an integer operation count"
            ))
        })?;
    }
    if cli.threads.is_some() {
        threads = cli.threads;
    }
    Ok(Settings {
        format: cli.format,
        budget: Budget::new(budget_ops),
        threads,
        timings: cli.timings,
    })
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn parse_shape(s: &str) -> Result<ReductiveShape, CliError> {
    s.parse::<ReductiveShape>().map_err(CliError::from)
}

fn parse_levi_spec(spec: &str, shape: &ReductiveShape) -> Result<Vec<BTreeSet<u16>>, CliError> {
    crate::classifier::parse_levi_grammar(spec, shape).map_err(CliError::Input)
}

fn parse_q_list(qs: &[u8]) -> Result<Vec<u8>, CliError> {
    if qs.is_empty() {
        return Err(CliError::Input(
            "at least one field size is required".into(),
        ));
    }
    for &q in qs {
        crate::fforacle::gf::check_prime(q)?;
    }
    Ok(qs.to_vec())
}

fn load_table(extrapolate: bool, overrides: &Option<PathBuf>) -> Result<ModalityTable, CliError> {
    let mut table = if extrapolate {
        ModalityTable::builtin_extrapolating()
    } else {
        ModalityTable::builtin()
    };
    if let Some(path) = overrides {
        let text = read_file(path)?;
        table.apply_overrides(&text)?;
    }
    Ok(table)
}

fn fmt_subset(set: &BTreeSet<u16>) -> String {
    let inner: Vec<String> = set.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn emit(settings: &Settings, report: Report, text: String, started: Instant) {
    match settings.format {
        Format::Text => println!("{text}"),
        Format::Structured => {
            let mut report = report;
            if settings.timings {
                report.runtime_ms = Some(started.elapsed().as_millis() as u64);
            }
            println!("{}", report.to_json());
        }
    }
}

fn dispatch(command: &Command, settings: &Settings) -> Result<(), CliError> {
    let started = Instant::now();
    match command {
        Command::Classify { what } => classify(what, settings, started),
        Command::Tables { what } => tables(what, settings, started),
        Command::Strata { what } => strata(what, settings, started),
        Command::Verify { what } => verify(what, settings, started),
    }
}

fn describe_witness(v: &Verdict) -> Vec<String> {
    let mut lines = Vec::new();
    if let Some(w) = &v.witness {
        let types: Vec<String> = w
            .levi
            .component_types
            .iter()
            .map(|t| t.to_string())
            .collect();
        lines.push(format!(
            "witness: component {} ({}), J = {}, levi type {}, {}",
            w.component_index + 1,
            w.component_type,
            fmt_subset(&w.levi.subset),
            types.join(" x "),
            w.inequality
        ));
    }
    lines
}

fn classify(cmd: &ClassifyCmd, settings: &Settings, started: Instant) -> Result<(), CliError> {
    match cmd {
        ClassifyCmd::Borel {
            shape,
            property,
            method,
            extrapolate,
            overrides,
        } => {
            let parsed = parse_shape(shape)?;
            let table = load_table(*extrapolate, overrides)?;
            let parameters = json!({
                "type": parsed.to_string(),
                "property": match property {
                    Property::Irreducible => "irreducible",
                    Property::Normal => "normal",
                    Property::Equidim => "equidim",
                },
                "method": match method {
                    Method::Sweep => "sweep",
                    Method::ClosedForm => "closed-form",
                },
                "extrapolate": extrapolate,
            });
            let (status_text, result, citations, extra_lines) = match property {
                Property::Irreducible => {
                    let verdict = match method {
                        Method::Sweep => classify_borel_irreducible(&parsed, &table),
                        Method::ClosedForm => classify_borel_closed_form(&parsed),
                    };
                    let status = match verdict.status {
                        Status::Irreducible => "irreducible",
                        Status::Reducible => "reducible",
                        Status::Unknown => "unknown",
                    };
                    let mut lines = describe_witness(&verdict);
                    if let Some(d) = verdict.dimension {
                        lines.push(format!("dimension: {d}"));
                    }
                    (
                        status.to_string(),
                        serde_json::to_value(&verdict).expect("verdict serializes"),
                        verdict.citations.clone(),
                        lines,
                    )
                }
                Property::Normal => {
                    let verdict = match method {
                        Method::Sweep => classify_borel_normal(&parsed, &table),
                        Method::ClosedForm => classify_borel_normal_closed_form(&parsed),
                    };
                    let status = match verdict.status {
                        NormalityStatus::Normal => "normal",
                        NormalityStatus::IrreducibleNotNormal => "irreducible, not normal",
                        NormalityStatus::Reducible => "reducible",
                        NormalityStatus::Unknown => "unknown",
                    };
                    let mut lines = Vec::new();
                    if let Some(w) = &verdict.witness {
                        lines.push(format!(
                            "witness: component {} ({}), J = {}, {}",
                            w.component_index + 1,
                            w.component_type,
                            fmt_subset(&w.levi.subset),
                            w.inequality
                        ));
                    }
                    if let Some(d) = verdict.dimension {
                        lines.push(format!("dimension: {d}"));
                    }
                    (
                        status.to_string(),
                        serde_json::to_value(&verdict).expect("verdict serializes"),
                        verdict.citations.clone(),
                        lines,
                    )
                }
                Property::Equidim => {
                    if *method == Method::ClosedForm {
                        return Err(CliError::Input(
                            "equidimensionality has no closed-form method; use --method sweep"
                                .into(),
                        ));
                    }
                    let verdict = classify_borel_equidimensional(&parsed, &table);
                    let status = match verdict.status {
                        EquidimStatus::Equidimensional => "equidimensional",
                        EquidimStatus::NotEquidimensional => "not equidimensional",
                        EquidimStatus::Unknown => "unknown",
                    };
                    let mut lines = Vec::new();
                    if let Some(w) = &verdict.witness {
                        lines.push(format!(
                            "witness: component {} ({}), J = {}, {}",
                            w.component_index + 1,
                            w.component_type,
                            fmt_subset(&w.levi.subset),
                            w.inequality
                        ));
                    }
                    if let Some(d) = verdict.dimension {
                        lines.push(format!("dimension: {d}"));
                    }
                    (
                        status.to_string(),
                        serde_json::to_value(&verdict).expect("verdict serializes"),
                        verdict.citations.clone(),
                        lines,
                    )
                }
            };
            let mut text = format!("shape: {parsed}\nstatus: {status_text}");
            for line in extra_lines {
                text.push('\n');
                text.push_str(&line);
            }
            text.push_str(&format!("\ncitations: {}", citations.join(", ")));
            let report = Report::new("classify-borel", parameters, result, citations);
            emit(settings, report, text, started);
            Ok(())
        }
        ClassifyCmd::Parabolic {
            shape,
            levi,
            oracle,
            extrapolate,
            overrides,
        } => {
            let parsed = parse_shape(shape)?;
            let levi_sets = parse_levi_spec(levi, &parsed)?;
            let spec = ParabolicSpec::new(parsed.clone(), levi_sets)?;
            let table = load_table(*extrapolate, overrides)?;
            let oracle_data = match oracle {
                Some(path) => ModalityOracle::from_toml(&read_file(path)?)?,
                None => ModalityOracle::empty(),
            };
            let verdict = classify_parabolic_irreducible(&spec, &oracle_data, &table)?;
            let status = match verdict.status {
                Status::Irreducible => "irreducible",
                Status::Reducible => "reducible",
                Status::Unknown => "unknown",
            };
            let parameters = json!({
                "type": parsed.to_string(),
                "levi": levi,
                "oracle": oracle.as_ref().map(|p| p.display().to_string()),
                "extrapolate": extrapolate,
            });
            let mut text = format!("shape: {parsed}\nlevi: {levi}\nstatus: {status}");
            for line in describe_witness(&verdict) {
                text.push('\n');
                text.push_str(&line);
            }
            if let Some(d) = verdict.dimension {
                text.push_str(&format!("\ndimension: {d}"));
            }
            for note in &verdict.notes {
                text.push_str(&format!("\nnote: {note}"));
            }
            text.push_str(&format!("\ncitations: {}", verdict.citations.join(", ")));
            let citations = verdict.citations.clone();
            let result = serde_json::to_value(&verdict).expect("verdict serializes");
            let report = Report::new("classify-parabolic", parameters, result, citations);
            emit(settings, report, text, started);
            Ok(())
        }
    }
}

fn tables(cmd: &TablesCmd, settings: &Settings, started: Instant) -> Result<(), CliError> {
    match cmd {
        TablesCmd::Show {
            family,
            extrapolate,
            overrides,
        } => {
            let table = load_table(*extrapolate, overrides)?;
            let family_filter = match family {
                Some(f) => Some(
                    f.parse::<crate::rootsys::Family>()
                        .map_err(|_| CliError::Input(format!("unknown family `{f}`")))?,
                ),
                None => None,
            };
            let mut rows = Vec::new();
            let mut text_lines = vec![format!("{:<6} {:<10} provenance", "type", "mod(B:u)")];
            for (&ty, entry) in table.iter() {
                if let Some(f) = family_filter {
                    if ty.family() != f {
                        continue;
                    }
                }
                rows.push(json!({
                    "type": ty.to_string(),
                    "value": entry.value,
                    "provenance": entry.provenance,
                }));
                text_lines.push(format!(
                    "{:<6} {:<10} {}",
                    ty.to_string(),
                    entry.value.to_string(),
                    entry.provenance
                ));
            }
            let parameters = json!({
                "family": family,
                "extrapolate": extrapolate,
            });
            let report = Report::new(
                "tables-show",
                parameters,
                json!({ "entries": rows }),
                vec![crate::classifier::citations::MODALITY_TABLE.to_string()],
            );
            emit(settings, report, text_lines.join("\n"), started);
            Ok(())
        }
        TablesCmd::Cartan { simple } => {
            let ty: SimpleType = simple
                .parse()
                .map_err(|e: crate::rootsys::RootSysError| CliError::Input(e.to_string()))?;
            let cartan = cartan_matrix(ty);
            let rs = build_root_system(ty);
            let mut text = format!(
                "type: {ty}\nrank: {}\npositive roots: {}\ncartan matrix (Bourbaki numbering):",
                ty.rank(),
                rs.positive_roots().len()
            );
            for row in &cartan {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
                text.push_str(&format!("\n  {}", cells.join(" ")));
            }
            let report = Report::new(
                "tables-cartan",
                json!({ "type": ty.to_string() }),
                json!({
                    "type": ty.to_string(),
                    "rank": ty.rank(),
                    "positive_roots": rs.positive_roots().len(),
                    "cartan": cartan,
                }),
                vec!["table:cartan-catalogue".to_string()],
            );
            emit(settings, report, text, started);
            Ok(())
        }
    }
}

#[derive(Debug, Deserialize)]
struct StrataFile {
    ambient: AmbientSpec,
    #[serde(default)]
    stratum: Vec<StratumSpec>,
}

#[derive(Debug, Deserialize)]
struct AmbientSpec {
    #[serde(rename = "type")]
    shape: String,
    #[serde(default)]
    levi: String,
}

#[derive(Debug, Deserialize)]
struct StratumSpec {
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    levi: String,
    sheet_dim: u64,
    orbit_dim: u64,
}

fn strata(cmd: &StrataCmd, settings: &Settings, started: Instant) -> Result<(), CliError> {
    let StrataCmd::Eval { file } = cmd;
    let text = read_file(file)?;
    let parsed: StrataFile =
        toml::from_str(&text).map_err(|e| CliError::Input(format!("strata file: {e}")))?;
    let shape = parse_shape(&parsed.ambient.shape)?;
    let ambient_levi = parse_levi_spec(&parsed.ambient.levi, &shape)?;
    let ambient = ParabolicSpec::new(shape.clone(), ambient_levi)?;
    let floor = component_floor(&ambient);

    let mut rows = Vec::new();
    let mut lines = vec![
        format!(
            "ambient: {shape}, levi I = `{}`, dim p = {}, rank = {}",
            parsed.ambient.levi,
            ambient.dim_parabolic(),
            shape.dims().rank
        ),
        format!("component floor: {floor}"),
        format!(
            "{:<12} {:<14} {:>6} {:>4} {:>12} {:>12}",
            "stratum", "levi J", "dim S", "j", "dim C'_H_S", "dim C_H_S"
        ),
    ];
    for (i, s) in parsed.stratum.iter().enumerate() {
        let levi = parse_levi_spec(&s.levi, &shape)?;
        let datum = StratumDatum::new(ambient.clone(), levi, s.sheet_dim, s.orbit_dim)?;
        let cprime = cprime_dim(&datum);
        let full = stratum_dim(&datum);
        let label = s
            .label
            .clone()
            .unwrap_or_else(|| format!("stratum-{}", i + 1));
        lines.push(format!(
            "{:<12} {:<14} {:>6} {:>4} {:>12} {:>12}",
            label, s.levi, s.sheet_dim, s.orbit_dim, cprime, full
        ));
        rows.push(json!({
            "label": label,
            "levi": s.levi,
            "sheet_dim": s.sheet_dim,
            "orbit_dim": s.orbit_dim,
            "cprime_dim": cprime,
            "stratum_dim": full,
            "meets_floor": full >= floor,
        }));
    }
    let report = Report::new(
        "strata-eval",
        json!({
            "file": file.display().to_string(),
            "type": shape.to_string(),
            "levi": parsed.ambient.levi,
        }),
        json!({
            "dim_parabolic": ambient.dim_parabolic(),
            "rank": shape.dims().rank,
            "component_floor": floor,
            "strata": rows,
        }),
        vec![
            crate::strata::citations::RESTRICTED_STRATUM_DIMENSION.to_string(),
            crate::strata::citations::STRATUM_DIMENSION.to_string(),
            crate::strata::citations::COMPONENT_FLOOR.to_string(),
        ],
    );
    emit(settings, report, lines.join("\n"), started);
    Ok(())
}

fn verify(cmd: &VerifyCmd, settings: &Settings, started: Instant) -> Result<(), CliError> {
    match cmd {
        VerifyCmd::Count {
            n,
            q,
            support,
            method,
        } => {
            let qs = parse_q_list(q)?;
            let support: Support = support.parse().map_err(CliError::Input)?;
            let primary_method = match method {
                CountMethodArg::Enumeration => CountMethod::Enumeration,
                _ => CountMethod::CentralizerSum,
            };
            let mut counts = Vec::new();
            let mut samples: Vec<(u64, BigUint)> = Vec::new();
            let mut cross = Vec::new();
            let mut budget_used: u128 = 0;
            let mut lines = Vec::new();
            for &qv in &qs {
                let pc = count_commuting_pairs(*n, qv, support, primary_method, settings.budget)?;
                budget_used += count_cost(*n, qv, support, primary_method);
                let mut line = format!(
                    "n={n} q={qv} support={support} method={} count={}",
                    pc.method, pc.count
                );
                if let Some(m) = pc.min_centralizer_dim {
                    line.push_str(&format!(" (min centralizer dim {m})"));
                }
                if *method == CountMethodArg::Both {
                    let other = count_commuting_pairs(
                        *n,
                        qv,
                        support,
                        CountMethod::Enumeration,
                        settings.budget,
                    )?;
                    budget_used += count_cost(*n, qv, support, CountMethod::Enumeration);
                    let agree = other.count == pc.count;
                    line.push_str(&format!(" enumeration={} agree={agree}", other.count));
                    if !agree {
                        return Err(CliError::Input(format!(
                            "internal disagreement between counting methods at q = {qv}"
                        )));
                    }
                    cross.push(json!({
                        "q": qv,
                        "count": other.count.to_string(),
                        "agree": agree,
                    }));
                }
                samples.push((u64::from(qv), pc.count.clone()));
                counts.push(serde_json::to_value(&pc).expect("count serializes"));
                lines.push(line);
            }
            let fit = if qs.len() >= 2 {
                let max_degree = support.dim(*n) + n;
                let fit = fit_degree(&samples, max_degree)?;
                lines.push(format!(
                    "fit: degree {} ({}), status {:?}",
                    fit.degree, fit.polynomial, fit.status
                ));
                Some(fit)
            } else {
                None
            };
            let mut citations = vec!["oracle:commuting-pair-count".to_string()];
            if fit.is_some() {
                citations.push("oracle:point-count-degree-fit".to_string());
                citations.push(crate::classifier::citations::DIMENSION_FORMULA.to_string());
            }
            let report = Report::new(
                "verify-count",
                json!({
                    "n": n,
                    "q": qs,
                    "support": support,
                    "method": match method {
                        CountMethodArg::CentralizerSum => "centralizer-sum",
                        CountMethodArg::Enumeration => "enumeration",
                        CountMethodArg::Both => "both",
                    },
                }),
                json!({
                    "counts": counts,
                    "cross_check": if cross.is_empty() {
                        serde_json::Value::Null
                    } else {
                        json!(cross)
                    },
                    "fit": fit,
                }),
                citations,
            )
            .with_budget(budget_used.min(u128::from(u64::MAX)) as u64);
            emit(settings, report, lines.join("\n"), started);
            Ok(())
        }
        VerifyCmd::Orbits { group, n, q } => {
            let qs = parse_q_list(q)?;
            let group: GroupKind = group.parse().map_err(CliError::Input)?;
            let mut censuses = Vec::new();
            let mut lines = Vec::new();
            let mut budget_used: u128 = 0;
            for &qv in &qs {
                let census = orbit_census(group, *n, qv, settings.budget)?;
                budget_used += census_cost(group, *n, qv, Support::Nilradical);
                let sizes: Vec<String> =
                    census.orbit_sizes.iter().map(|s| s.to_string()).collect();
                lines.push(format!(
                    "group={group} n={n} q={qv}: {} orbits, sizes [{}]",
                    census.orbit_count,
                    sizes.join(",")
                ));
                censuses.push(census);
            }
            let modality = if qs.len() >= 2 {
                let m = empirical_modality(group, *n, &qs, settings.budget)?;
                budget_used += qs
                    .iter()
                    .map(|&qv| census_cost(group, *n, qv, Support::Nilradical))
                    .sum::<u128>();
                lines.push(format!(
                    "fit: {} (degree {}), status {:?}; fitted modality {}; table prediction {}{}",
                    m.fit.polynomial,
                    m.fit.degree,
                    m.fit.status,
                    m.fitted,
                    m.table_prediction,
                    match m.agrees {
                        Some(true) => "; agree",
                        Some(false) => "; DISAGREE",
                        None => "",
                    }
                ));
                Some(m)
            } else {
                None
            };
            let mut citations = vec!["oracle:adjoint-orbit-census".to_string()];
            if modality.is_some() {
                citations.push("bridge:unipotent-borel-modality".to_string());
                citations.push(crate::classifier::citations::MODALITY_TABLE.to_string());
            }
            let report = Report::new(
                "verify-orbits",
                json!({ "group": group.to_string(), "n": n, "q": qs }),
                json!({ "censuses": censuses, "modality": modality }),
                citations,
            )
            .with_budget(budget_used.min(u128::from(u64::MAX)) as u64);
            emit(settings, report, lines.join("\n"), started);
            Ok(())
        }
        VerifyCmd::Smooth {
            n,
            q,
            trials,
            seed,
            exhaustive,
            witness,
        } => {
            let seed = match (seed, settings.format) {
                (Some(s), _) => *s,
                (None, Format::Structured) => {
                    return Err(CliError::Input(
                        "randomized commands require an explicit --seed in structured mode"
                            .into(),
                    ))
                }
                (None, Format::Text) => 0,
            };
            let mut budget_used = sampled_smoothness_cost(*n, *trials);
            let sample = smoothness_sample(*n, *q, *trials, seed)?;
            let mut lines = vec![format!(
                "n={n} q={q} trials={trials} seed={seed}: {} violations (expected tangent dim {})",
                sample.violations.len(),
                sample.expected_dim
            )];
            let exhaustive_report = if *exhaustive {
                let report = smoothness_exhaustive(*n, *q, settings.budget)?;
                budget_used += exhaustive_smoothness_cost(*n, *q);
                lines.push(format!(
                    "exhaustive: {} pairs on regular elements: {} violations",
                    report.pairs_checked,
                    report.violations.len()
                ));
                Some(report)
            } else {
                None
            };
            let witness_report = if *witness {
                let (x, y) = singular_witness(*n, *q)?;
                let dim = tangent_dim(&x, &y)?;
                lines.push(format!(
                    "singular witness: x_index={} y_index={} tangent dim {} > {}",
                    x.index(),
                    y.index(),
                    dim,
                    sample.expected_dim
                ));
                Some(json!({
                    "x_index": x.index(),
                    "y_index": y.index(),
                    "tangent_dim": dim,
                    "smooth_dim": sample.expected_dim,
                }))
            } else {
                None
            };
            let mut citations = vec!["oracle:tangent-space-smoothness".to_string()];
            if witness_report.is_some() {
                citations.push("witness:singular-commuting-pair".to_string());
            }
            let report = Report::new(
                "verify-smooth",
                json!({
                    "n": n,
                    "q": q,
                    "trials": trials,
                    "exhaustive": exhaustive,
                    "witness": witness,
                }),
                json!({
                    "sample": sample,
                    "exhaustive": exhaustive_report,
                    "singular_witness": witness_report,
                }),
                citations,
            )
            .with_seed(seed)
            .with_budget(budget_used.min(u128::from(u64::MAX)) as u64);
            emit(settings, report, lines.join("\n"), started);
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        run(&owned)
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["classify", "borel", "--type", "B6"]), 0);
        assert_eq!(run_args(&["classify", "borel", "--type", "X9"]), 1);
        assert_eq!(run_args(&["--help"]), 0);
        assert_eq!(run_args(&["no-such-verb"]), 1);
        // randomized command without a seed in structured mode
        assert_eq!(
            run_args(&[
                "verify",
                "smooth",
                "--n",
                "2",
                "--q",
                "2",
                "--trials",
                "1",
                "--format",
                "structured"
            ]),
            1
        );
    }

    #[test]
    fn budget_refusal_exit_code() {
        assert_eq!(
            run_args(&["verify", "count", "--n", "6", "--q", "13", "--support", "full"]),
            2
        );
    }

    #[test]
    fn levi_spec_parsing() {
        let shape: ReductiveShape = "A3,A3".parse().unwrap();
        let parsed = parse_levi_spec("1,3/2", &shape).unwrap();
        assert_eq!(parsed[0], [1u16, 3].into_iter().collect());
        assert_eq!(parsed[1], [2u16].into_iter().collect());
        let empty = parse_levi_spec("", &shape).unwrap();
        assert!(empty.iter().all(|s| s.is_empty()));
        assert!(parse_levi_spec("1,2", &shape).is_err());
        let single: ReductiveShape = "A5".parse().unwrap();
        assert_eq!(
            parse_levi_spec("1,3", &single).unwrap(),
            vec![[1u16, 3].into_iter().collect::<BTreeSet<u16>>()]
        );
    }
}
