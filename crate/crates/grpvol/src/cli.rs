//! Command-line grammar and dispatch.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use grpvol_core::fixtures;
use grpvol_core::hopf::{growth_report, CoverHarness, Gauge, HopfEngine, SupNorm};
use grpvol_core::presentations::{parse_presentation, Presentation, DEFAULT_SIMPLIFY_BUDGET};
use grpvol_core::simplicial::{homology, Cochain, Triangulation};
use grpvol_core::subgroups::{enumerate_subgroups, EnumerationOptions, SubgroupFilter, DEFAULT_NODE_BUDGET};
use grpvol_core::volumes::{
    check_volume_axiom, distinctability_report, hopfian_harness, truncated_volume, VolumeKind, VolumeOptions,
};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::formats::{self, FormatError};
use crate::report;
use crate::sample::random_cocycle;

#[derive(Debug, Parser)]
#[command(name = "grpvol", version, about = "Volumes of finitely presented groups and Hopf pairings of triangulated 3-manifolds")]
pub struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finitely presented groups.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Triangulated 3-manifolds.
    Manifold {
        #[command(subcommand)]
        command: ManifoldCommand,
    },
    /// Built-in fixture files.
    Fixtures {
        #[command(subcommand)]
        command: FixtureCommand,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Budgets {
    /// Tietze moves allowed per simplification.
    #[arg(long, default_value_t = DEFAULT_SIMPLIFY_BUDGET, value_parser = positive_usize)]
    pub simplify_budget: usize,
    /// Backtracking nodes allowed in subgroup enumeration.
    #[arg(long, env = "GRPVOL_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub node_budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    All,
    Conjugacy,
    Normal,
}

impl From<FilterArg> for SubgroupFilter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::All => SubgroupFilter::All,
            FilterArg::Conjugacy => SubgroupFilter::ConjugacyClasses,
            FilterArg::Normal => SubgroupFilter::Normal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Def,
    Rank,
    Euler,
    Modp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeArg {
    Harmonic,
    Any,
}

impl From<GaugeArg> for Gauge {
    fn from(g: GaugeArg) -> Self {
        match g {
            GaugeArg::Harmonic => Gauge::Harmonic,
            GaugeArg::Any => Gauge::Any,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// Abelianization and certified rank and deficiency intervals.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Coset tables of the subgroups of index at most N.
    Subgroups {
        file: PathBuf,
        #[arg(long, value_parser = positive_usize)]
        max_index: usize,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Truncated volume over subgroups of index at most N.
    Volume {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_parser = positive_usize)]
        max_index: usize,
        /// Prime for `--kind modp`.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
        /// Assert that the presentation complex is aspherical (needed by `--kind euler`).
        #[arg(long)]
        aspherical: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Check the volume inequalities subgroup by subgroup.
    Axioms {
        file: PathBuf,
        #[arg(long, value_parser = positive_usize)]
        max_index: usize,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Certify that isomorphic finite-index subgroups share their index.
    Distinct {
        file: PathBuf,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Compare truncated rank volumes along a surjection.
    Hopfian {
        file: PathBuf,
        /// JSON `{"images": {"gen": "word", …}}` over the target's generators.
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, value_parser = positive_usize, default_value_t = 3)]
        max_index: usize,
        #[command(flatten)]
        budgets: Budgets,
    },
}

#[derive(Debug, Subcommand)]
pub enum ManifoldCommand {
    /// Counts, orientation, homology and the rational homology sphere test.
    Check {
        file: PathBuf,
        /// Also compute |det(d+δ)|.
        #[arg(long)]
        det: bool,
    },
    /// The Hopf pairing of a 2-cocycle.
    Pairing {
        file: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, value_enum, default_value_t = GaugeArg::Harmonic)]
        gauge: GaugeArg,
        /// Include the solved potential.
        #[arg(long)]
        potential: bool,
    },
    /// The Hadamard complexity bound, checked against a cocycle if given.
    Bound {
        file: PathBuf,
        /// `pi` or a positive rational.
        #[arg(long, default_value = "pi", value_parser = parse_sup_norm)]
        sup_norm: SupNorm,
        #[arg(long)]
        gamma: Option<PathBuf>,
    },
    /// Multiplicativity of the pairing on a cyclic cover.
    Cover {
        file: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, default_value = "pi", value_parser = parse_sup_norm)]
        sup_norm: SupNorm,
    },
    /// Pairings, bounds and implied complexity lower bounds over a cover family.
    Growth {
        file: PathBuf,
        /// JSON array of cover specifications.
        #[arg(long)]
        spec_family: PathBuf,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, default_value = "pi", value_parser = parse_sup_norm)]
        sup_norm: SupNorm,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixtureCommand {
    /// Boundary of the 4-simplex.
    S3,
    /// Lens space L(p, q).
    Lens {
        #[arg(value_parser = clap::value_parser!(u64).range(2..1000))]
        p: u64,
        #[arg(default_value_t = 1)]
        q: u64,
    },
    /// S² × S¹ (not a rational homology sphere).
    S2xs1,
    /// RP² × S¹ (non-orientable).
    Rp2xs1,
    /// A named presentation: trefoil, s3, z, fN, zN, surfaceG.
    Group { name: String },
    /// Names accepted by `group`.
    Presentations,
    /// Generator 2-cocycle of L(p, q).
    Cocycle {
        #[arg(value_parser = clap::value_parser!(u64).range(2..1000))]
        p: u64,
        #[arg(default_value_t = 1)]
        q: u64,
    },
    /// Seeded random integral 2-coboundary on a triangulation.
    RandomCocycle {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Entries of the random 1-cochain lie in [-max, max].
        #[arg(long, default_value_t = 3)]
        max: i64,
    },
    /// Cover specification of the degree-d cover of L(p, q), for d | p.
    CoverSpec {
        p: u64,
        #[arg(default_value_t = 1)]
        q: u64,
        #[arg(long)]
        degree: u64,
    },
    /// All cyclic covers of L(p, q) of degree d | p, d ≥ 2.
    SpecFamily {
        p: u64,
        #[arg(default_value_t = 1)]
        q: u64,
    },
    /// Shorthand for `group NAME`, e.g. `grpvol fixtures f2`.
    #[command(external_subcommand)]
    Named(Vec<String>),
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_sup_norm(s: &str) -> Result<SupNorm, String> {
    if s.eq_ignore_ascii_case("pi") {
        return Ok(SupNorm::Pi);
    }
    let r = formats::parse_rational(s).map_err(|e| e.to_string())?;
    if !r.is_positive() {
        return Err("sup-norm must be positive".into());
    }
    Ok(SupNorm::Value(r))
}

/// What a command produces.
pub enum Output {
    Json(Value),
    /// JSON with an alternative CSV rendering.
    Table { json: Value, csv: String },
    Text(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parsed<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, FormatError>) -> Result<T, CliError> {
    f(&read(path)?).map_err(|e| CliError::parse(path.display().to_string(), e))
}

fn presentation(path: &Path) -> Result<Presentation, CliError> {
    let text = read(path)?;
    parse_presentation(&text).map_err(|e| CliError::parse(path.display().to_string(), e))
}

fn triangulation(path: &Path) -> Result<Triangulation, CliError> {
    parsed(path, formats::parse_triangulation)
}

fn cochain(path: &Path) -> Result<Cochain, CliError> {
    parsed(path, formats::parse_cochain)
}

fn volume_options(max_index: usize, filter: FilterArg, budgets: &Budgets) -> VolumeOptions {
    let mut o = VolumeOptions::new(max_index).with_filter(filter.into());
    o.simplify_budget = budgets.simplify_budget;
    o.node_budget = budgets.node_budget;
    o
}

fn engine(t: Triangulation) -> Result<HopfEngine, CliError> {
    Ok(HopfEngine::new(t)?)
}

pub fn run_group(cmd: &GroupCommand) -> Result<Output, CliError> {
    Ok(Output::Json(match cmd {
        GroupCommand::Analyze { file, budgets } => report::analyze(&presentation(file)?, budgets.simplify_budget),
        GroupCommand::Subgroups {
            file,
            max_index,
            filter,
            budgets,
        } => {
            let p = presentation(file)?;
            let opts = EnumerationOptions::new(*max_index)
                .with_node_budget(budgets.node_budget)
                .with_filter((*filter).into());
            let tables = enumerate_subgroups(&p, opts)?;
            let counts: Vec<Value> = (1..=*max_index)
                .map(|d| json!({"d": d, "count": tables.iter().filter(|t| t.index() == d).count()}))
                .collect();
            let tables: Vec<Value> = tables.iter().map(formats::coset_table_json).collect();
            json!({
                "max_index": max_index,
                "filter": report::filter_name((*filter).into()),
                "count": tables.len(),
                "per_index": counts,
                "subgroups": tables,
            })
        }
        GroupCommand::Volume {
            file,
            kind,
            max_index,
            prime,
            filter,
            aspherical,
            budgets,
        } => {
            let p = presentation(file)?;
            let kind = match (kind, prime) {
                (KindArg::Modp, Some(q)) => VolumeKind::ModP(*q),
                (KindArg::Modp, None) => return Err(CliError::Usage("--kind modp needs --prime".into())),
                (_, Some(_)) => return Err(CliError::Usage("--prime only applies to --kind modp".into())),
                (KindArg::Def, None) => VolumeKind::Deficiency,
                (KindArg::Rank, None) => VolumeKind::Rank,
                (KindArg::Euler, None) => VolumeKind::Euler,
            };
            let mut opts = volume_options(*max_index, *filter, budgets);
            opts.aspherical = *aspherical;
            report::volume(&truncated_volume(&p, kind, &opts)?)
        }
        GroupCommand::Axioms {
            file,
            max_index,
            budgets,
        } => {
            let p = presentation(file)?;
            report::axioms(&check_volume_axiom(&p, &volume_options(*max_index, FilterArg::All, budgets))?)
        }
        GroupCommand::Distinct { file, budgets } => {
            report::distinct(&distinctability_report(&presentation(file)?, budgets.simplify_budget))
        }
        GroupCommand::Hopfian {
            file,
            map,
            target,
            max_index,
            budgets,
        } => {
            let src = presentation(file)?;
            let dst = presentation(target)?;
            let images = parsed(map, |text| formats::parse_map(text, &src, &dst))?;
            let opts = volume_options(*max_index, FilterArg::All, budgets);
            report::hopfian(&hopfian_harness(&src, &dst, &images, &opts)?)
        }
    }))
}

pub fn run_manifold(cmd: &ManifoldCommand) -> Result<Output, CliError> {
    Ok(match cmd {
        ManifoldCommand::Check { file, det } => {
            let t = triangulation(file)?;
            let e = HopfEngine::new(t.clone()).ok().filter(|e| e.qhs_failure().is_none());
            let dd = match &e {
                Some(e) => {
                    let m = e.dplusdelta()?;
                    let mut v = json!({
                        "size": m.size(),
                        "expected_size": t.dplusdelta_size(),
                        "invertible": true,
                        "certificate_prime": m.solver.prime().to_string(),
                    });
                    if *det {
                        v["abs_det"] = json!(m.abs_det().to_string());
                    }
                    Some(v)
                }
                None => None,
            };
            Output::Json(report::check(&t, dd))
        }
        ManifoldCommand::Pairing {
            file,
            gamma,
            gauge,
            potential,
        } => {
            let e = engine(triangulation(file)?)?;
            let g = cochain(gamma)?;
            Output::Json(report::pairing(&e.pairing(&g, (*gauge).into())?, *potential))
        }
        ManifoldCommand::Bound { file, sup_norm, gamma } => {
            let t = triangulation(file)?;
            match gamma {
                None => Output::Json(report::bound(&grpvol_core::hopf::hadamard_bound(&t, sup_norm))),
                Some(path) => {
                    let g = cochain(path)?;
                    Output::Json(report::bound_report(&engine(t)?.verify_bound(&g, sup_norm)?))
                }
            }
        }
        ManifoldCommand::Cover {
            file,
            spec,
            gamma,
            sup_norm,
        } => {
            let base = engine(triangulation(file)?)?;
            let spec = parsed(spec, formats::parse_cover_spec)?;
            let g = cochain(gamma)?;
            let harness = CoverHarness::new(&base, &spec)?;
            Output::Json(report::cover(&harness.check(&base, &g, sup_norm)?))
        }
        ManifoldCommand::Growth {
            file,
            spec_family,
            gamma,
            sup_norm,
        } => {
            let base = engine(triangulation(file)?)?;
            let family = parsed(spec_family, formats::parse_cover_family)?;
            let g = cochain(gamma)?;
            let r = growth_report(&base, &family, &g, sup_norm)?;
            Output::Table {
                json: report::growth(&r),
                csv: report::growth_csv(&r),
            }
        }
    })
}

fn named_group(name: &str) -> Result<Output, CliError> {
    fixtures::presentation_text(name)
        .map(Output::Text)
        .ok_or_else(|| CliError::Usage(format!("unknown fixture `{}`; see `grpvol fixtures presentations`", name)))
}

fn lens(p: u64, q: u64) -> Result<fixtures::LensSpace, CliError> {
    use num_integer::Integer;
    if p < 2 || q == 0 || p.gcd(&q) != 1 {
        return Err(CliError::Usage(format!("L({}, {}) needs p >= 2 and q coprime to p", p, q)));
    }
    Ok(fixtures::lens_space(p as usize, (q % p) as usize))
}

pub fn run_fixture(cmd: &FixtureCommand) -> Result<Output, CliError> {
    Ok(match cmd {
        FixtureCommand::S3 => {
            let t = fixtures::boundary_4simplex();
            Output::Json(formats::triangulation_json(&t, Some("boundary of the 4-simplex"), Some("0")))
        }
        FixtureCommand::Lens { p, q } => {
            let l = lens(*p, *q)?;
            let h1 = homology(&l.triangulation).groups[1].clone();
            let expected = format!("Z/{}", p);
            if h1.to_string() != expected {
                return Err(CliError::precondition(format!("L({}, {}) has H1 = {}, expected {}", p, q, h1, expected)));
            }
            let name = format!("L({},{})", l.p, l.q);
            Output::Json(formats::triangulation_json(&l.triangulation, Some(&name), Some(&expected)))
        }
        FixtureCommand::S2xs1 => {
            let t = fixtures::sphere_times_circle();
            Output::Json(formats::triangulation_json(&t, Some("S2 x S1"), Some("Z")))
        }
        FixtureCommand::Rp2xs1 => {
            let t = fixtures::projective_plane_times_circle();
            Output::Json(formats::triangulation_json(&t, Some("RP2 x S1"), Some("Z + Z/2")))
        }
        FixtureCommand::Group { name } => named_group(name)?,
        FixtureCommand::Named(args) => match args.as_slice() {
            [name] => named_group(name)?,
            _ => return Err(CliError::Usage(format!("unexpected arguments {:?}", args))),
        },
        FixtureCommand::Presentations => Output::Json(json!({
            "names": ["trefoil", "s3", "z", "fN", "zN", "surfaceG"],
            "examples": ["f2", "z2", "surface2"],
        })),
        FixtureCommand::Cocycle { p, q } => Output::Json(formats::cochain_json(&lens(*p, *q)?.generator_dual())),
        FixtureCommand::RandomCocycle { file, seed, max } => {
            let t = triangulation(file)?;
            Output::Json(formats::cochain_json(&random_cocycle(&t, *seed, *max)))
        }
        FixtureCommand::CoverSpec { p, q, degree } => {
            if *degree < 2 || p % degree != 0 {
                return Err(CliError::Usage(format!("degree must divide {} and be at least 2", p)));
            }
            Output::Json(formats::cover_spec_json(&lens(*p, *q)?.cover_spec(*degree as usize)))
        }
        FixtureCommand::SpecFamily { p, q } => {
            let l = lens(*p, *q)?;
            let specs: Vec<Value> = (2..=*p as usize)
                .filter(|d| (*p as usize).is_multiple_of(*d))
                .map(|d| formats::cover_spec_json(&l.cover_spec(d)))
                .collect();
            Output::Json(Value::Array(specs))
        }
    })
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Group { command } => run_group(command),
        Command::Manifold { command } => run_manifold(command),
        Command::Fixtures { command } => run_fixture(command),
    }
}

/// Render in the requested format, newline-terminated.
pub fn render(out: &Output, format: Format) -> Result<String, CliError> {
    let json = report::json_text;
    Ok(match (out, format) {
        (Output::Text(s), _) => s.clone(),
        (Output::Table { csv, .. }, Format::Csv) => csv.clone(),
        (Output::Json(_), Format::Csv) => {
            return Err(CliError::Usage("--format csv is only available for tables".into()))
        }
        (Output::Json(v) | Output::Table { json: v, .. }, Format::Json) => json(v),
        (Output::Json(v) | Output::Table { json: v, .. }, Format::Pretty) => report::pretty(v),
    })
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    let io = |p: &str, source| CliError::Io {
        path: p.to_string(),
        source,
    };
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io(&p.display().to_string(), e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| io("<stdout>", e)),
    }
}

/// Process entry point; returns the exit code. Errors are written to
/// standard output as a JSON body.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = run(&cli)
        .and_then(|out| render(&out, cli.format))
        .and_then(|text| emit(&text, cli.output.as_deref()));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let body = report::json_text(&e.to_json());
            let _ = std::io::stdout().write_all(body.as_bytes());
            e.exit_code()
        }
    }
}

