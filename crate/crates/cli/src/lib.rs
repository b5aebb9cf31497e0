//! Command-line front end: argument parsing, dispatch and dual text/JSON
//! rendering. [`run`] never exits the process, so it can be driven from tests.

use std::path::Path;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use k3lat::acceptance::{criterion_count, data_file_checks, run_criterion};
use k3lat::classifier::{
    cover_euler_solutions, enriques_classify, k3_classify, table_lookup, CoverKind, DFact, EnriquesInput, GFact,
    K3Input, Realizability, TableFilter, TableRow,
};
use k3lat::elliptic::{relation_residual, validate_fibration, verify_relation, FibrationSpec, Relation};
use k3lat::geometry::{
    affine_hyperplanes, ag23_two_six_sets, ag23_unique_six_set, divisible_point_sets, hyperplane_pair_law,
    kummer_subset_witnesses, AffineSpaceModel,
};
use k3lat::groups::{
    count_normal_subgroups, count_normal_subgroups_isomorphic_to, find_isomorphism, group_from_str,
    FiniteGroupTable, DEFAULT_COSET_BOUND,
};
use k3lat::lattice::{discriminant_group, primitive_closure, smith_normal_form, EmbeddedSublattice, GramLattice, IntMatrix};
use k3lat::root_config::{find_p_divisible_subsets, ChainConfiguration};
use k3lat::{data, format_rational, Error, Result, DEFAULT_MAX_CANDIDATES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub status: i32,
    pub payload: Value,
    pub human: String,
    /// `--json` was given, so `payload` is the primary output.
    pub json: bool,
}

impl CommandResult {
    fn new(status: i32, payload: Value, human: impl Into<String>) -> Self {
        CommandResult {
            status,
            payload,
            human: human.into(),
            json: false,
        }
    }

    fn verdict(ok: bool, payload: Value, human: impl Into<String>) -> Self {
        Self::new(if ok { EXIT_OK } else { EXIT_FALSE }, payload, human)
    }

    fn error(e: &Error) -> Self {
        Self::new(EXIT_INVALID, json!({ "error": e.to_string() }), format!("error: {e}"))
    }

    /// The text to print: the payload with `--json`, otherwise the human form.
    pub fn rendered(&self) -> String {
        if self.json {
            serde_json::to_string_pretty(&self.payload).unwrap_or_default()
        } else {
            self.human.clone()
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "k3lat",
    version,
    about = "Exact lattice, geometry and group computations for open K3 and Enriques surfaces"
)]
struct Cli {
    /// Print the machine-readable payload instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel searches (1 runs sequentially).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Upper bound on candidates enumerated by exhaustive searches.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_MAX_CANDIDATES)]
    max_candidates: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form, discriminant groups, primitive closures.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Divisibility of chain configurations.
    #[command(subcommand)]
    Config(ConfigCmd),
    /// Affine-space models over F_2 and F_3.
    #[command(subcommand)]
    Geometry(GeometryCmd),
    /// Elliptic fibrations: validation, heights, relations.
    #[command(subcommand)]
    Fibration(FibrationCmd),
    /// Finite groups from catalog names or presentations.
    #[command(subcommand)]
    Groups(GroupsCmd),
    /// Select the table row consistent with a configuration.
    #[command(subcommand)]
    Classify(ClassifyCmd),
    /// Query the K3 (1) or Enriques (2) table.
    Table(TableArgs),
    /// Cyclic covers of a K3 surface with K3 or abelian total space.
    Lemma13,
    /// Run the acceptance suite and the bundled-data checks.
    Selftest {
        /// Run only this criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    Snf {
        /// Matrix as inline JSON or a file.
        #[arg(long)]
        matrix: String,
    },
    Disc {
        /// Catalog name, inline JSON or file.
        #[arg(long)]
        lattice: String,
    },
    Closure {
        #[arg(long)]
        lattice: String,
        /// Generators in ambient coordinates, inline JSON or file.
        #[arg(long)]
        basis: String,
    },
}

#[derive(Subcommand, Debug)]
enum ConfigCmd {
    Divisible {
        #[arg(long)]
        config: String,
    },
    Primitive {
        #[arg(long)]
        config: String,
    },
}

#[derive(Subcommand, Debug)]
enum GeometryCmd {
    Hyperplanes {
        #[arg(long, default_value = "kummer")]
        space: String,
    },
    Kummer,
    Lemma16,
    Ag23,
}

#[derive(Subcommand, Debug)]
enum FibrationCmd {
    Validate {
        #[arg(long)]
        spec: String,
    },
    Height {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        section: String,
        /// Second section for the height pairing.
        #[arg(long)]
        with: Option<String>,
    },
    Relation {
        /// Defaults to the `spec` named inside the relation file.
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        relation: String,
    },
}

#[derive(Subcommand, Debug)]
enum GroupsCmd {
    Build {
        #[arg(long)]
        group: String,
    },
    NormalCount {
        #[arg(long)]
        group: String,
        #[arg(long)]
        index: Option<usize>,
        /// Count only subgroups isomorphic to this group.
        #[arg(long)]
        iso: Option<String>,
    },
    Iso {
        #[arg(long)]
        group: String,
        #[arg(long)]
        other: String,
    },
}

#[derive(Subcommand, Debug)]
enum ClassifyCmd {
    K3 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        c: u32,
        /// Fact about the curve configuration; omit to try all.
        #[arg(long)]
        facts: Option<DFact>,
    },
    Enriques {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        c: u32,
        /// Fact about the configuration on the Enriques surface.
        #[arg(long)]
        w: Option<GFact>,
        /// Fact about its preimage on the K3 cover.
        #[arg(long)]
        cover: Option<DFact>,
    },
}

#[derive(Args, Debug)]
struct TableArgs {
    id: u8,
    #[arg(long)]
    row: Option<u32>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    c: Option<u32>,
    #[arg(long)]
    finite: Option<bool>,
    /// `known` or `unknown`.
    #[arg(long)]
    realizable: Option<String>,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult::new(EXIT_OK, json!(null), text),
                _ => CommandResult::new(EXIT_INVALID, json!({ "error": e.to_string() }), text),
            };
        }
    };
    let json = cli.json;
    let mut result = match with_threads(cli.threads, || dispatch(&cli)) {
        Ok(r) => r,
        Err(e) => CommandResult::error(&e),
    };
    result.json = json;
    result
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    match threads {
        None => f(),
        Some(0) => Err(Error::Invalid("--threads must be at least 1".into())),
        Some(1) => k3lat::par::sequential(f),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Invalid(e.to_string()))?
            .install(f),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    match threads {
        Some(0) => Err(Error::Invalid("--threads must be at least 1".into())),
        _ => f(),
    }
}

fn dispatch(cli: &Cli) -> Result<CommandResult> {
    let bound = cli.max_candidates;
    match &cli.command {
        Command::Lattice(cmd) => lattice(cmd),
        Command::Config(cmd) => config(cmd, bound),
        Command::Geometry(cmd) => geometry(cmd),
        Command::Fibration(cmd) => fibration(cmd),
        Command::Groups(cmd) => groups(cmd),
        Command::Classify(cmd) => classify(cmd),
        Command::Table(args) => table(args),
        Command::Lemma13 => Ok(lemma13()),
        Command::Selftest { criterion } => selftest(*criterion),
    }
}

/// Inline JSON (starting with `{` or `[`), a file path, or a bundled name.
fn read_json_arg(arg: &str) -> Result<Value> {
    let t = arg.trim();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(serde_json::from_str(t)?);
    }
    Ok(serde_json::from_str(&data::resolve(t)?)?)
}

fn is_reference(arg: &str) -> bool {
    let t = arg.trim();
    t.starts_with('{') || t.starts_with('[') || Path::new(t).is_file() || data::resolve(t).is_ok()
}

fn lattice_arg(arg: &str) -> Result<GramLattice> {
    if is_reference(arg) {
        GramLattice::from_json(&read_json_arg(arg)?)
    } else {
        GramLattice::from_json(&Value::String(arg.trim().to_string()))
    }
}

fn int_rows(v: Value) -> Result<Vec<Vec<i128>>> {
    let rows: Vec<Vec<i64>> = serde_json::from_value(v)?;
    Ok(rows.into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect())
}

fn format_rows(m: &IntMatrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| format!("  {:?}", r))
        .collect::<Vec<_>>()
        .join("\n")
}

fn lattice(cmd: &LatticeCmd) -> Result<CommandResult> {
    match cmd {
        LatticeCmd::Snf { matrix } => {
            let m = IntMatrix::from_rows(&int_rows(read_json_arg(matrix)?)?)?;
            let s = smith_normal_form(&m)?;
            let payload = json!({
                "diagonal": s.diagonal(),
                "rank": s.rank(),
                "p": s.p.to_rows(),
                "q": s.q.to_rows(),
            });
            let human = format!(
                "diagonal {:?} (rank {})\nP =\n{}\nQ =\n{}",
                s.diagonal(),
                s.rank(),
                format_rows(&s.p),
                format_rows(&s.q)
            );
            Ok(CommandResult::new(EXIT_OK, payload, human))
        }
        LatticeCmd::Disc { lattice } => {
            let l = lattice_arg(lattice)?;
            let g = discriminant_group(&l)?;
            let (pos, neg) = l.signature()?;
            let payload = json!({
                "name": l.name,
                "rank": l.rank(),
                "determinant": l.determinant()?,
                "signature": [pos, neg],
                "even": l.is_even(),
                "invariants": g.factors,
                "order": g.order(),
            });
            let human = format!(
                "rank {}, det {}, signature ({pos},{neg}), {}; discriminant group {g} (order {})",
                l.rank(),
                l.determinant()?,
                if l.is_even() { "even" } else { "odd" },
                g.order()
            );
            Ok(CommandResult::new(EXIT_OK, payload, human))
        }
        LatticeCmd::Closure { lattice, basis } => {
            let l = lattice_arg(lattice)?;
            let s = EmbeddedSublattice::new(l, int_rows(read_json_arg(basis)?)?)?;
            let c = primitive_closure(&s)?;
            let payload = json!({ "basis": c.basis, "glue": c.glue.factors, "index": c.glue.order() });
            let human = format!(
                "closure of rank {}, glue group {} (index {})\n{}",
                c.basis.len(),
                c.glue,
                c.glue.order(),
                c.basis.iter().map(|v| format!("  {v:?}")).collect::<Vec<_>>().join("\n")
            );
            Ok(CommandResult::new(EXIT_OK, payload, human))
        }
    }
}

fn config(cmd: &ConfigCmd, bound: u128) -> Result<CommandResult> {
    match cmd {
        ConfigCmd::Divisible { config } => {
            let cfg = ChainConfiguration::from_json(&read_json_arg(config)?)?;
            let found = find_p_divisible_subsets(&cfg, bound)?;
            let human = if found.is_empty() {
                format!("no {}-divisible subset", cfg.p)
            } else {
                found
                    .iter()
                    .map(|w| format!("{:?} with coefficients {:?}", w.subset, w.coefficients))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok(CommandResult::new(EXIT_OK, serde_json::to_value(&found)?, human))
        }
        ConfigCmd::Primitive { config } => {
            let cfg = ChainConfiguration::from_json(&read_json_arg(config)?)?;
            let found = find_p_divisible_subsets(&cfg, bound)?;
            let primitive = found.is_empty();
            let glue = cfg.glue()?;
            let payload = json!({ "primitive": primitive, "glue": glue.factors, "witnesses": found.len() });
            let human = if primitive {
                "true: no divisible subset".to_string()
            } else {
                format!("false: {} divisible subsets, glue {glue}", found.len())
            };
            Ok(CommandResult::verdict(primitive, payload, human))
        }
    }
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

fn space_arg(name: &str) -> Result<AffineSpaceModel> {
    match name {
        "kummer" => Ok(AffineSpaceModel::kummer()),
        "ag23" => Ok(AffineSpaceModel::ag23()),
        other => Err(Error::UnknownName(format!("{other} (expected kummer or ag23)"))),
    }
}

fn geometry(cmd: &GeometryCmd) -> Result<CommandResult> {
    match cmd {
        GeometryCmd::Hyperplanes { space } => {
            let s = space_arg(space)?;
            let hs = affine_hyperplanes(&s);
            let law = hyperplane_pair_law(&s);
            let human = format!(
                "{} hyperplanes, {} pairs, intersection sizes {:?}",
                hs.len(),
                law.pairs,
                law.intersection_sizes
            );
            Ok(CommandResult::new(EXIT_OK, json!({ "hyperplanes": hs, "pair_law": law }), human))
        }
        GeometryCmd::Kummer => {
            let sets: Vec<Vec<usize>> = divisible_point_sets(&AffineSpaceModel::kummer())?
                .into_iter()
                .map(members)
                .collect();
            let eights = sets.iter().filter(|s| s.len() == 8).count();
            let full = sets.iter().filter(|s| s.len() == 16).count();
            let human = format!("{eights} divisible 8-sets, {full} divisible 16-set");
            Ok(CommandResult::new(EXIT_OK, json!(sets), human))
        }
        GeometryCmd::Lemma16 => {
            let w = kummer_subset_witnesses()?;
            let ok = w.pair_13 && w.unique_12.is_some() && w.none_11.is_some();
            let human = format!(
                "13-subsets: {} checked, two 8-sets meeting in 4 in each: {}\n12-subset with one divisible subset: {:?}\n11-subset with none: {:?}",
                w.checked_13, w.pair_13, w.unique_12, w.none_11
            );
            Ok(CommandResult::verdict(ok, serde_json::to_value(&w)?, human))
        }
        GeometryCmd::Ag23 => {
            let unique = ag23_unique_six_set()?;
            let two = ag23_two_six_sets()?;
            let ok = unique.unique_six_set && two.is_some();
            let human = format!(
                "7-subsets: {} checked, exactly one divisible 6-set in each: {}\n8-subset with two 6-sets: {}",
                unique.checked_7,
                unique.unique_six_set,
                two.as_ref()
                    .map(|t| format!("{:?} from {:?}", t.six_sets, t.eight_set))
                    .unwrap_or_else(|| "none".into())
            );
            Ok(CommandResult::verdict(ok, json!({ "unique_six_set": unique, "two_six_sets": two }), human))
        }
    }
}

fn load_spec(arg: &str) -> Result<FibrationSpec> {
    FibrationSpec::from_json(&read_json_arg(arg)?)
}

fn fibration(cmd: &FibrationCmd) -> Result<CommandResult> {
    match cmd {
        FibrationCmd::Validate { spec } => {
            let report = validate_fibration(&load_spec(spec)?);
            let human = report
                .checks
                .iter()
                .map(|c| format!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(CommandResult::verdict(report.passed(), serde_json::to_value(&report)?, human))
        }
        FibrationCmd::Height { spec, section, with } => {
            let s = load_spec(spec)?;
            let other = with.as_deref().unwrap_or(section);
            let h = format_rational(&s.height_pairing(section, other)?);
            let human = format!("<{section}, {other}> = {h}");
            Ok(CommandResult::new(
                EXIT_OK,
                json!({ "p": section, "q": other, "height": h }),
                human,
            ))
        }
        FibrationCmd::Relation { spec, relation } => {
            let v = read_json_arg(relation)?;
            let spec_ref = match spec {
                Some(s) => s.clone(),
                None => v
                    .get("spec")
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| Error::Invalid("no --spec given and the relation names none".into()))?,
            };
            let s = load_spec(&spec_ref)?;
            let r = Relation::from_json(&v)?;
            let holds = verify_relation(&s, &r)?;
            let residual = relation_residual(&s, &r)?;
            let human = if holds {
                format!("true: lhs = {} * rhs in the Picard group", r.p)
            } else {
                let parts: Vec<String> = residual.iter().map(|(g, x)| format!("{g}: {x}")).collect();
                format!("false: nonzero pairings {}", parts.join(", "))
            };
            Ok(CommandResult::verdict(
                holds,
                json!({ "holds": holds, "p": r.p, "residual": residual }),
                human,
            ))
        }
    }
}

fn group_arg(arg: &str) -> Result<FiniteGroupTable> {
    let t = arg.trim();
    if !t.starts_with('{') && Path::new(t).is_file() {
        return group_from_str(&data::read_path(Path::new(t))?, DEFAULT_COSET_BOUND);
    }
    group_from_str(t, DEFAULT_COSET_BOUND)
}

fn groups(cmd: &GroupsCmd) -> Result<CommandResult> {
    match cmd {
        GroupsCmd::Build { group } => {
            let g = group_arg(group)?;
            let inv = g.abelian_invariants();
            let stats = g.order_statistics();
            let payload = json!({
                "name": g.name,
                "order": g.order(),
                "abelian": g.is_abelian(),
                "abelian_invariants": inv.as_ref().map(|i| i.factors.clone()),
                "element_orders": stats,
                "generators": g.generators(),
            });
            let human = format!(
                "order {}{}; element orders {:?}",
                g.order(),
                inv.map(|i| format!(", abelian {i}")).unwrap_or_else(|| ", nonabelian".into()),
                stats
            );
            Ok(CommandResult::new(EXIT_OK, payload, human))
        }
        GroupsCmd::NormalCount { group, index, iso } => {
            let g = group_arg(group)?;
            let count = match (index, iso) {
                (None, None) => return Err(Error::Invalid("give --index, --iso or both".into())),
                (Some(k), None) => count_normal_subgroups(&g, *k),
                (k, Some(name)) => {
                    let pattern = group_arg(name)?;
                    match k {
                        Some(k) if pattern.order() * k != g.order() => 0,
                        _ => count_normal_subgroups_isomorphic_to(&g, &pattern),
                    }
                }
            };
            Ok(CommandResult::new(EXIT_OK, json!(count), count.to_string()))
        }
        GroupsCmd::Iso { group, other } => {
            let (g, h) = (group_arg(group)?, group_arg(other)?);
            let map = find_isomorphism(&g, &h);
            let human = if map.is_some() { "true" } else { "false" };
            Ok(CommandResult::verdict(
                map.is_some(),
                json!({ "isomorphic": map.is_some(), "map": map }),
                human,
            ))
        }
    }
}

fn row_summary(r: &TableRow) -> String {
    let facts: Vec<String> = r
        .facts
        .g
        .map(|g| format!("W: {g}"))
        .into_iter()
        .chain(r.facts.d.map(|d| format!("D: {d}")))
        .collect();
    format!(
        "table {} row {}: {} [{}] pi1 = {}{}",
        r.table,
        r.number,
        r.condition,
        facts.join(", "),
        r.pi1,
        match r.realizable {
            Realizability::Known => "",
            Realizability::Unknown => " (realizability unknown)",
        }
    )
}

fn classify(cmd: &ClassifyCmd) -> Result<CommandResult> {
    match cmd {
        ClassifyCmd::K3 { p, c, facts } => {
            let r = k3_classify(&K3Input {
                p: *p,
                c: *c,
                fact: *facts,
            })?;
            let human = format!("{}\nfact: {}, {}", row_summary(&r.row), r.fact, r.sing_y);
            Ok(CommandResult::new(EXIT_OK, serde_json::to_value(&r)?, human))
        }
        ClassifyCmd::Enriques { p, c, w, cover } => {
            let r = enriques_classify(&EnriquesInput {
                p: *p,
                c: *c,
                g: *w,
                d: *cover,
            })?;
            let human = format!(
                "{}\nfacts: W {}, D {}; K3 cover pi1 = {}",
                row_summary(&r.row),
                r.g,
                r.d,
                r.k3_pi1
            );
            Ok(CommandResult::new(EXIT_OK, serde_json::to_value(&r)?, human))
        }
    }
}

fn table(args: &TableArgs) -> Result<CommandResult> {
    let realizable = match args.realizable.as_deref() {
        None => None,
        Some("known") => Some(Realizability::Known),
        Some("unknown") => Some(Realizability::Unknown),
        Some(other) => return Err(Error::Invalid(format!("--realizable {other}: expected known or unknown"))),
    };
    let filter = TableFilter {
        row: args.row,
        p: args.p,
        c: args.c,
        finite: args.finite,
        realizable,
    };
    let rows = table_lookup(args.id, &filter)?;
    if let (Some(n), true) = (args.row, rows.is_empty()) {
        return Err(Error::Invalid(format!("table {} has no row {n} matching the filter", args.id)));
    }
    let human = rows.iter().map(row_summary).collect::<Vec<_>>().join("\n");
    Ok(CommandResult::new(EXIT_OK, serde_json::to_value(&rows)?, human))
}

fn lemma13() -> CommandResult {
    let sols = cover_euler_solutions();
    let kind = |k: CoverKind| match k {
        CoverKind::K3 => "K3",
        CoverKind::Abelian => "ab",
    };
    let payload: Vec<Value> = sols
        .iter()
        .map(|s| json!({ "p": s.p, "c": s.c, "cover": kind(s.kind) }))
        .collect();
    let human = sols
        .iter()
        .map(|s| format!("({},{},{})", s.p, s.c, kind(s.kind)))
        .collect::<Vec<_>>()
        .join(" ");
    CommandResult::new(EXIT_OK, json!(payload), human)
}

fn selftest(only: Option<u8>) -> Result<CommandResult> {
    let ids: Vec<u8> = match only {
        Some(id) => vec![id],
        None => (1..=criterion_count() as u8).collect(),
    };
    let results = ids.into_iter().map(run_criterion).collect::<Result<Vec<_>>>()?;
    let files = if only.is_none() { data_file_checks() } else { Vec::new() };
    let ok = results.iter().all(|r| r.passed) && files.iter().all(|f| f.passed);
    let mut lines: Vec<String> = results.iter().map(|r| r.to_string()).collect();
    lines.extend(
        files
            .iter()
            .map(|f| format!("[{}] data {}: {}", if f.passed { "PASS" } else { "FAIL" }, f.file, f.detail)),
    );
    Ok(CommandResult::verdict(
        ok,
        json!({ "passed": ok, "criteria": results, "data_files": files }),
        lines.join("\n"),
    ))
}
