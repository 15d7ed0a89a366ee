use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bilinlab_core::constructions::{
    family_p_lower, family_p_upper, prop13_family, rademacher_family, FamilyInstance, FamilyTag,
};
use bilinlab_core::experiments::{self, Baseline, ExperimentConfig, ExperimentKind, SelfTestOptions};
use bilinlab_core::field::{read_field, write_field};
use bilinlab_core::operator::{apply_direct, apply_fast, SymbolSpec};
use bilinlab_core::spaces::{amalgam_norm, besov_norm, default_window, modulation_norm, wiener_norm, BesovParams};
use bilinlab_core::{build_dyadic, lp_quasi_norm, Error, Field, Flavor, Grid, Result};

#[derive(Parser)]
#[command(name = "bilinlab", version, about = "Numerical lab for bilinear pseudo-differential operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a norm of a field file.
    Norm(NormArgs),
    /// Apply a builtin symbol to two field files.
    Apply(ApplyArgs),
    /// Generate a builtin family and write its fields.
    Family(FamilyArgs),
    /// Run an experiment and write its CSV records.
    Exp(ExpArgs),
    /// Run the invariant suites; nonzero exit status on failure.
    Selftest(SelftestArgs),
    /// Measure the regression thresholds and write them as TOML.
    Calibrate(CalibrateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum NormKind {
    Lp,
    Besov,
    Amalgam,
    Modulation,
    Wiener,
}

#[derive(Args)]
struct NormArgs {
    #[arg(value_enum)]
    kind: NormKind,
    /// Field file.
    input: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 0.0)]
    s: f64,
    #[arg(long, default_value = "sharp")]
    flavor: String,
}

#[derive(Args)]
struct ApplyArgs {
    /// Builtin symbol: one, p_lower, p_upper or rademacher.
    #[arg(long)]
    symbol: String,
    #[arg(long)]
    f1: PathBuf,
    #[arg(long)]
    f2: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the literal double sum instead of the fast path.
    #[arg(long)]
    direct: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

#[derive(Args)]
struct FamilyArgs {
    /// Family name; omit with --list.
    name: Option<String>,
    /// List the builtin families.
    #[arg(long)]
    list: bool,
    /// `j` for p_lower/p_upper, `N` for prop13.
    #[arg(long, default_value_t = 3)]
    param: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long = "L")]
    length: Option<f64>,
    #[arg(long = "M")]
    samples: Option<usize>,
    /// Directory for `f1.field`, `f2.field` and `out.field`.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ExpArgs {
    #[arg(value_parser = parse_kind)]
    kind: ExperimentKind,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Extra `key=value` overrides applied after the config file.
    #[arg(long = "set")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Inject a partition defect (negative control).
    #[arg(long)]
    corrupt_partition: bool,
}

#[derive(Args)]
struct CalibrateArgs {
    #[arg(long, default_value_t = 1.5)]
    margin: f64,
    /// Destination; stdout when omitted.
    #[arg(long)]
    write: Option<PathBuf>,
}

fn parse_kind(s: &str) -> std::result::Result<ExperimentKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn load(path: &Path) -> Result<Field> {
    read_field(BufReader::new(File::open(path)?))
}

fn save(f: &Field, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field(f, &mut w)?;
    w.flush()?;
    Ok(())
}

fn norm(a: &NormArgs) -> Result<()> {
    let f = load(&a.input)?;
    let v = match a.kind {
        NormKind::Lp => lp_quasi_norm(&f, a.p)?,
        NormKind::Besov => {
            let part = build_dyadic(a.flavor.parse::<Flavor>()?, f.grid())?;
            besov_norm(&f, BesovParams::new(a.s, a.p, a.q)?, &part)?
        }
        NormKind::Amalgam => amalgam_norm(&f, a.p, a.q)?,
        NormKind::Modulation => modulation_norm(&f, a.p, a.q, &default_window(f.grid()))?,
        NormKind::Wiener => wiener_norm(&f, a.p, a.q, &default_window(f.grid()))?,
    };
    println!("{v:.17e}");
    Ok(())
}

fn builtin_symbol(name: &str, grid: &Grid, seed: u64, epsilon: f64) -> Result<SymbolSpec> {
    let from = |inst: FamilyInstance| inst.symbol.expect("operator family");
    match name {
        "one" => Ok(SymbolSpec::one()),
        "p_lower" => Ok(from(family_p_lower(1, grid)?)),
        "p_upper" => Ok(from(family_p_upper(1, grid)?)),
        "rademacher" => Ok(from(rademacher_family(seed, epsilon, grid)?)),
        other => Err(Error::Parse(format!("unknown symbol `{other}`"))),
    }
}

fn apply(a: &ApplyArgs) -> Result<()> {
    let f1 = load(&a.f1)?;
    let f2 = load(&a.f2)?;
    let sigma = builtin_symbol(&a.symbol, f1.grid(), a.seed, a.epsilon)?;
    let out = if a.direct { apply_direct(&sigma, &f1, &f2)? } else { apply_fast(&sigma, &f1, &f2)? };
    match &a.out {
        Some(p) => save(&out, p),
        None => write_field(&out, io::stdout().lock()),
    }
}

fn family(a: &FamilyArgs) -> Result<()> {
    if a.list {
        for t in FamilyTag::ALL {
            println!("{t}");
        }
        return Ok(());
    }
    let tag: FamilyTag = a.name.as_deref().ok_or_else(|| Error::Config("family name or --list required".into()))?.parse()?;
    let preset = match tag {
        FamilyTag::PLower => ExperimentConfig::preset(ExperimentKind::Growth, Some(FamilyTag::PLower)),
        FamilyTag::PUpper => ExperimentConfig::preset(ExperimentKind::Growth, Some(FamilyTag::PUpper)),
        FamilyTag::Prop13 => ExperimentConfig::preset(ExperimentKind::Prop13, None),
        FamilyTag::Rademacher => ExperimentConfig::preset(ExperimentKind::Rademacher, None),
    };
    let grid = Grid::new(a.n, a.length.unwrap_or(preset.length), a.samples.unwrap_or(preset.samples))?;
    let inst = match tag {
        FamilyTag::PLower => family_p_lower(a.param, &grid)?,
        FamilyTag::PUpper => family_p_upper(a.param, &grid)?,
        FamilyTag::Prop13 => prop13_family(a.param, &grid)?,
        FamilyTag::Rademacher => rademacher_family(a.seed, a.epsilon, &grid)?,
    };
    std::fs::create_dir_all(&a.out_dir)?;
    for (i, f) in inst.fields.iter().enumerate() {
        let path = a.out_dir.join(format!("f{}.field", i + 1));
        save(f, &path)?;
        println!("{}", path.display());
    }
    if let Some(sigma) = &inst.symbol {
        let out = apply_fast(sigma, &inst.fields[0], &inst.fields[1])?;
        let path = a.out_dir.join("out.field");
        save(&out, &path)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn exp(a: &ExpArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => {
            let cfg = ExperimentConfig::parse(&std::fs::read_to_string(p)?)?;
            if cfg.experiment != a.kind {
                return Err(Error::Config(format!("config is for `{}`, not `{}`", cfg.experiment, a.kind)));
            }
            cfg
        }
        None => {
            let family = a
                .overrides
                .iter()
                .filter_map(|o| o.split_once('='))
                .find(|(k, _)| k.trim() == "family")
                .map(|(_, v)| v.trim().parse::<FamilyTag>())
                .transpose()?;
            ExperimentConfig::preset(a.kind, family)
        }
    };
    for o in &a.overrides {
        let (k, v) = o.split_once('=').ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(p) = &a.out {
        cfg.out = Some(p.clone());
    }
    cfg.validate()?;
    let report = experiments::run(&cfg)?;
    for f in &report.fits {
        eprintln!("fit {} p={} slope={:.6} predicted={} r2={:.6}", f.series, f.p, f.slope, f.predicted, f.r2);
    }
    match &cfg.out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            experiments::write_records(&report.records, &mut w)?;
            w.flush()?;
            Ok(())
        }
        None => experiments::write_records(&report.records, io::stdout().lock()),
    }
}

fn selftest(a: &SelftestArgs) -> Result<bool> {
    let report = experiments::run_selftest(SelfTestOptions { seed: a.seed, corrupt_partition: a.corrupt_partition });
    print!("{}", report.to_text());
    Ok(report.passed())
}

fn calibrate(a: &CalibrateArgs) -> Result<()> {
    if !(a.margin >= 1.0) {
        return Err(Error::Config(format!("margin {} must be at least 1", a.margin)));
    }
    let m = experiments::measure()?;
    eprintln!("measured {m:?}");
    let text = Baseline::from_measured(&m, a.margin).to_toml()?;
    match &a.write {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Norm(a) => norm(a).map(|_| true),
        Command::Apply(a) => apply(a).map(|_| true),
        Command::Family(a) => family(a).map(|_| true),
        Command::Exp(a) => exp(a).map(|_| true),
        Command::Selftest(a) => selftest(a),
        Command::Calibrate(a) => calibrate(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
