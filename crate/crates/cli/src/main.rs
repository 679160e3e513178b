//! Command-line surface: parse structure/block/generator files, run the
//! 2-design checks, and emit aligned tables or JSON.
//!
//! Exit codes: 0 success (2-design where applicable), 1 criterion failure,
//! 2 parse/validation error, 3 cap exceeded, 4 internal disagreement
//! (enumeration vs criterion, or computed values vs reference tables —
//! never expected).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use gwdesign::design::{check_criterion_opts, enumerate_design, orbital_pair_counts, DesignError};
use gwdesign::families::{build_block, verify_family, FamilyError, FamilyOptions, FamilySpec};
use gwdesign::gwp::{ComponentGroups, GwpError};
use gwdesign::io::{parse_block, parse_component_groups, parse_structure, ParseError};
use gwdesign::sample;
use gwdesign::{report, Block, BlockStructure};

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Parser)]
#[command(
    name = "gwd",
    version,
    about = "Exact 2-design verification on poset block structures under generalised wreath products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table, env = "FORMAT")]
    format: Format,

    /// Also evaluate the J = ∅ comparison (implied by the nonempty ones)
    #[arg(
        long,
        global = true,
        env = "WITH_EMPTY",
        value_parser = clap::builder::BoolishValueParser::new(),
        action = clap::ArgAction::Set,
        num_args = 0..=1,
        default_value_t = false,
        default_missing_value = "true"
    )]
    with_empty: bool,

    /// Cap on the number of enumerated group elements
    #[arg(long, global = true, default_value_t = gwdesign::gwp::DEFAULT_GROUP_CAP, env = "GROUP_CAP")]
    group_cap: u64,

    /// Cap on the point-set size for enumeration paths
    #[arg(long, global = true, default_value_t = gwdesign::gwp::DEFAULT_POINT_CAP, env = "V_CAP")]
    v_cap: u64,

    /// Skip or refuse k²-pair scans larger than this
    #[arg(long, global = true, env = "PAIR_BUDGET")]
    pair_budget: Option<u64>,

    /// Seed for randomized workflows
    #[arg(long, global = true, default_value_t = 0, env = "SEED")]
    seed: u64,

    /// Write the block under inspection to this path
    #[arg(long, global = true, env = "EMIT_BLOCK")]
    emit_block: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the 2-design criterion on a structure and block file
    Check {
        structure: PathBuf,
        block: PathBuf,
        /// Component-group generator file (default: full symmetric groups)
        #[arg(long)]
        groups: Option<PathBuf>,
    },
    /// Compare the k²-pair oracle against the alternating μ-sums
    Oracle {
        structure: PathBuf,
        block: Option<PathBuf>,
        /// Additionally test N random blocks (seeded)
        #[arg(long, default_value_t = 0)]
        random: u64,
    },
    /// Enumerate the group, materialize B^F, and cross-check the criterion
    Enumerate {
        structure: PathBuf,
        block: PathBuf,
        #[arg(long)]
        groups: Option<PathBuf>,
    },
    /// Build one of the explicit families and verify it against its tables
    Family {
        /// chgrid, v, vinv or n
        family: String,
        #[arg(long)]
        p: u64,
        /// Override the desk-scale p cap for the three-element families
        #[arg(long)]
        max_p_small: Option<u64>,
        /// Override the desk-scale p cap for the N family
        #[arg(long)]
        max_p_n: Option<u64>,
    },
    /// Print every orbital size of a structure
    Orbits { structure: PathBuf },
}

/// Failure classes carrying their exit codes.
enum Failure {
    /// exit 1: a checked property does not hold
    Negative,
    /// exit 2: unusable input
    Usage(String),
    /// exit 3: a configured cap was exceeded
    Cap(String),
    /// exit 4: two routes that must agree did not — an implementation bug
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative => 1,
            Failure::Usage(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

fn gwp_failure(e: GwpError) -> Failure {
    match e {
        GwpError::GroupCapExceeded { .. }
        | GwpError::PointCapExceeded { .. }
        | GwpError::ComponentTooLarge { .. }
        | GwpError::TupleSpaceTooLarge { .. } => Failure::Cap(e.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        match e {
            ParseError::Gwp(g) => gwp_failure(g),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Failure {
        match e {
            FamilyError::UnknownFamily(_) | FamilyError::InvalidP(_) => {
                Failure::Usage(e.to_string())
            }
            FamilyError::ScaleCapExceeded { .. }
            | FamilyError::ScaleOverflow(_)
            | FamilyError::BlockTooLarge { .. } => Failure::Cap(e.to_string()),
        }
    }
}

impl From<DesignError> for Failure {
    fn from(e: DesignError) -> Failure {
        match e {
            DesignError::Gwp(g) => gwp_failure(g),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<Arc<BlockStructure>, Failure> {
    Ok(Arc::new(parse_structure(&read_file(path)?)?))
}

fn load_groups(
    path: &Option<PathBuf>,
    structure: &BlockStructure,
    cap: u64,
) -> Result<Option<ComponentGroups>, Failure> {
    match path {
        None => Ok(None),
        Some(p) => Ok(Some(parse_component_groups(&read_file(p)?, structure, cap)?)),
    }
}

fn emit_block_if_asked(cli: &Cli, block: &Block) -> Result<(), Failure> {
    if let Some(path) = &cli.emit_block {
        std::fs::write(path, gwdesign::io::emit_block(block))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn print_json(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("report JSON serializes")
    );
}

fn cmd_check(
    cli: &Cli,
    structure: &Path,
    block: &Path,
    groups: &Option<PathBuf>,
) -> Result<(), Failure> {
    let structure = load_structure(structure)?;
    let block = parse_block(&read_file(block)?, &structure)?;
    let groups = load_groups(groups, &structure, cli.group_cap)?;
    let report = check_criterion_opts(&block, groups.as_ref(), cli.with_empty);
    emit_block_if_asked(cli, &block)?;
    match cli.format {
        Format::Table => print!("{}", report::check_table(&report, structure.poset())),
        Format::Json => print_json(report::check_json(&report, structure.poset())),
    }
    if report.is_2_design {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn oracle_one(cli: &Cli, name: &str, block: &Block) -> Result<bool, Failure> {
    if let Some(budget) = cli.pair_budget {
        let kk = block.k().saturating_mul(block.k());
        if kk > budget {
            return Err(Failure::Cap(format!(
                "k² = {kk} exceeds the pair budget {budget}"
            )));
        }
    }
    let structure = block.structure();
    let report = check_criterion_opts(block, None, true);
    let counts = orbital_pair_counts(block);
    let rows = report::oracle_rows(&report, &counts);
    let all_agree = rows.iter().all(|(_, _, _, agree)| *agree);
    match cli.format {
        Format::Table => {
            println!("{name}: k = {}", block.k());
            print!(
                "{}",
                report::oracle_table(&report, &counts, structure.poset())
            );
        }
        Format::Json => {
            let mut value = report::oracle_json(&report, &counts, structure.poset());
            value["block"] = serde_json::Value::String(name.to_string());
            value["k"] = serde_json::Value::String(block.k().to_string());
            print_json(value);
        }
    }
    Ok(all_agree)
}

fn cmd_oracle(
    cli: &Cli,
    structure: &Path,
    block: &Option<PathBuf>,
    random: u64,
) -> Result<(), Failure> {
    let structure = load_structure(structure)?;
    if block.is_none() && random == 0 {
        return Err(Failure::Usage(
            "oracle needs a block file or --random N".into(),
        ));
    }
    let mut all_agree = true;
    if let Some(path) = block {
        let block = parse_block(&read_file(path)?, &structure)?;
        emit_block_if_asked(cli, &block)?;
        all_agree &= oracle_one(cli, &path.display().to_string(), &block)?;
    }
    if random > 0 {
        if structure.point_count_u64().is_none() {
            return Err(Failure::Cap(
                "structure too large for random block sampling".into(),
            ));
        }
        let mut rng = sample::rng(cli.seed);
        for i in 0..random {
            let block = sample::random_block(&mut rng, &structure);
            all_agree &= oracle_one(cli, &format!("random[{i}]"), &block)?;
        }
    }
    if all_agree {
        Ok(())
    } else {
        Err(Failure::Internal(
            "pair-count oracle disagrees with the alternating μ-sums".into(),
        ))
    }
}

fn cmd_enumerate(
    cli: &Cli,
    structure: &Path,
    block: &Path,
    groups: &Option<PathBuf>,
) -> Result<(), Failure> {
    let structure = load_structure(structure)?;
    let block = parse_block(&read_file(block)?, &structure)?;
    let groups = load_groups(groups, &structure, cli.group_cap)?
        .unwrap_or_else(|| ComponentGroups::symmetric(&structure));
    let report = enumerate_design(&block, &groups, cli.group_cap, cli.v_cap)?;
    emit_block_if_asked(cli, &block)?;
    match cli.format {
        Format::Table => print!("{}", report::check_table(&report, structure.poset())),
        Format::Json => print_json(report::check_json(&report, structure.poset())),
    }
    let e = report.enumeration.as_ref().expect("enumeration ran");
    if report.two_transitive_hypothesis && !e.agrees_with_criterion {
        return Err(Failure::Internal(
            "enumerated design verdict disagrees with the criterion".into(),
        ));
    }
    if e.is_2_design {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn cmd_family(
    cli: &Cli,
    family: &str,
    p: u64,
    max_p_small: Option<u64>,
    max_p_n: Option<u64>,
) -> Result<(), Failure> {
    let spec = FamilySpec::new(family.parse()?, p)?;
    let mut opts = FamilyOptions {
        pair_budget: cli.pair_budget,
        ..FamilyOptions::default()
    };
    if let Some(m) = max_p_small {
        opts.max_p_small = m;
    }
    if let Some(m) = max_p_n {
        opts.max_p_n = m;
    }
    let verification = verify_family(&spec, &opts)?;
    if cli.emit_block.is_some() {
        emit_block_if_asked(cli, &build_block(&spec)?)?;
    }
    match cli.format {
        Format::Table => print!("{}", report::family_table(&verification)),
        Format::Json => print_json(report::family_json(&verification)),
    }
    if verification.internal_mismatch() {
        Err(Failure::Internal(
            "computed values disagree with the reference tables".into(),
        ))
    } else if !verification.report.is_2_design {
        Err(Failure::Negative)
    } else {
        Ok(())
    }
}

fn cmd_orbits(cli: &Cli, structure: &Path) -> Result<(), Failure> {
    let structure = load_structure(structure)?;
    match cli.format {
        Format::Table => print!("{}", report::orbits_table(&structure)),
        Format::Json => print_json(report::orbits_json(&structure)),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Check {
            structure,
            block,
            groups,
        } => cmd_check(cli, structure, block, groups),
        Command::Oracle {
            structure,
            block,
            random,
        } => cmd_oracle(cli, structure, block, *random),
        Command::Enumerate {
            structure,
            block,
            groups,
        } => cmd_enumerate(cli, structure, block, groups),
        Command::Family {
            family,
            p,
            max_p_small,
            max_p_n,
        } => cmd_family(cli, family, *p, *max_p_small, *max_p_n),
        Command::Orbits { structure } => cmd_orbits(cli, structure),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Negative => {}
                Failure::Usage(msg) | Failure::Cap(msg) | Failure::Internal(msg) => {
                    eprintln!("error: {msg}");
                }
            }
            ExitCode::from(f.code())
        }
    }
}
