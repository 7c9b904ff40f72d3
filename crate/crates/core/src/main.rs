use std::collections::BTreeMap;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use spldens::bounds::{csp_bound_pipeline, BoundsError, PipelineOptions, DEFAULT_MATERIALIZE_LIMIT};
use spldens::calculus::{
    compositum_degree, disjoint_union_density, inclusion_exclusion_density,
    intersection_lower_bound, pigeonhole_threshold, proposition_theta, selection_lower_bound,
    subset_mask, union_upper_bound, CalculusError, TowerSpec,
};
use spldens::density::{
    chebotarev_reference, dirichlet_density_estimate, natural_density_curve,
    upper_density_estimate, DensityError, DensityEstimate, DEFAULT_S_GRID,
};
use spldens::exact::{rational_to_string, ExactError};
use spldens::primes::{map_segments, PrimeError, PrimeRange};
use spldens::sets::{AllPrimes, PrimeSet};
use spldens::splitting::config::{load_model, ConfigError};
use spldens::splitting::{
    frobenius_cycle_type, FrobeniusCycleType, GaloisExtensionModel, ProgressionMode, SplitError,
    SplittingPredicate,
};
use spldens::verify::{run_all, run_criterion, DEFAULT_SEED};
use spldens::weyl::{constants_for_group, enumerate_weyl_group, RootSystemType, WeylError};
use spldens::ExactDensity;

#[derive(Parser)]
#[command(name = "spldens", version, about = "Prime splitting, density calculus and explicit index bounds")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// Splitting behaviour of every prime in a range.
    Spl {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_count)]
        from: u64,
        #[arg(long, value_parser = parse_count)]
        to: u64,
    },
    /// Frobenius cycle types at the given primes.
    Frob {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_count)]
        primes: Vec<u64>,
    },
    /// Empirical density of Spl(L/Q), a Frobenius cycle type, or all primes.
    Density {
        #[command(flatten)]
        model: ModelArgs,
        /// Use the set of all primes instead of a model.
        #[arg(long, conflicts_with_all = ["model_file", "poly", "modulus"])]
        all_primes: bool,
        /// Primes whose Frobenius has this cycle type, e.g. 1,2.
        #[arg(long, value_delimiter = ',')]
        cycle_type: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Kind::Natural)]
        kind: Kind,
        #[arg(long, value_delimiter = ',', value_parser = parse_count, env = "SPLDENS_CUTOFF", default_value = "10000000")]
        cutoffs: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_S_GRID)]
        s_grid: Vec<f64>,
    },
    /// Exact density calculus.
    Calculus {
        #[command(subcommand)]
        op: CalculusOp,
    },
    /// Rank, Weyl order and class count of a root system type.
    Weyl {
        #[arg(long = "type", value_name = "TYPE")]
        ty: RootSystemType,
        /// Also enumerate the group and count classes directly.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = spldens::weyl::DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// The explicit constant pipeline r, θ, δ, n = φ(δ, d).
    Bounds {
        #[arg(long = "type", value_name = "TYPE")]
        ty: RootSystemType,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        omega: ExactDensity,
        #[arg(long)]
        rho: Option<BigUint>,
        /// Largest n, in decimal digits, printed in full.
        #[arg(long, default_value_t = DEFAULT_MATERIALIZE_LIMIT)]
        materialize_limit: u64,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long)]
        criterion: Option<u8>,
        #[arg(long, env = "SPLDENS_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Natural,
    Dirichlet,
    Upper,
}

#[derive(Args)]
struct ModelArgs {
    /// JSON model description.
    #[arg(long, conflicts_with_all = ["poly", "modulus"])]
    model_file: Option<PathBuf>,
    /// Monic polynomial, coefficients constant term first: -2,0,0,1 is x^3 - 2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "galois_order", conflicts_with = "modulus")]
    poly: Option<Vec<i64>>,
    #[arg(long)]
    galois_order: Option<u64>,
    /// Abelian model: subgroup H of (Z/m)^x, the field fixed by H.
    #[arg(long, requires = "residues")]
    modulus: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    residues: Option<Vec<u64>>,
}

#[derive(Subcommand)]
enum CalculusOp {
    /// min(dA + dB, 1).
    UnionBound {
        #[arg(long)]
        da: ExactDensity,
        #[arg(long)]
        db: ExactDensity,
    },
    /// ε/r.
    Pigeonhole {
        #[arg(long)]
        epsilon: ExactDensity,
        #[arg(long)]
        r: u64,
    },
    /// max(dA + dB - dC, 0) for A, B ⊆ C.
    Intersection {
        #[arg(long)]
        da: ExactDensity,
        #[arg(long)]
        db: ExactDensity,
        #[arg(long)]
        dc: ExactDensity,
    },
    /// θ = d(A0) + d(A1 ∪ ... ∪ Ar) - d(C) and the bound θ/r.
    Selection {
        #[arg(long)]
        da0: ExactDensity,
        #[arg(long)]
        dunion: ExactDensity,
        #[arg(long)]
        dc: ExactDensity,
        #[arg(long)]
        r: u64,
    },
    /// Union density from intersection densities, e.g. "1=1/2;2=1/2;1,2=1/4".
    InclusionExclusion {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        table: String,
    },
    /// Densities of the linearly disjoint tower model.
    Tower {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        r: u64,
        /// d(S ∩ Spl(M/K)); adds θ and θ/r.
        #[arg(long)]
        omega: Option<ExactDensity>,
    },
}

#[derive(Debug, Error)]
enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Primes(#[from] PrimeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    /// Records were written, some of them errors.
    #[error("{0} error record(s) emitted")]
    Records(usize),
}

fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    let parsed = if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.parse().map_err(|e| format!("{s}: {e}"))?;
        let exp: u32 = exp.parse().map_err(|e| format!("{s}: {e}"))?;
        base.checked_pow(exp)
    } else if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let mant: u64 = mant.parse().map_err(|e| format!("{s}: {e}"))?;
        let exp: u32 = exp.parse().map_err(|e| format!("{s}: {e}"))?;
        10u64.checked_pow(exp).and_then(|p| p.checked_mul(mant))
    } else {
        Some(s.parse().map_err(|e| format!("{s}: {e}"))?)
    };
    parsed.ok_or_else(|| format!("{s} does not fit in 64 bits"))
}

impl ModelArgs {
    fn is_given(&self) -> bool {
        self.model_file.is_some() || self.poly.is_some() || self.modulus.is_some()
    }

    fn build(&self) -> Result<GaloisExtensionModel, AppError> {
        if let Some(path) = &self.model_file {
            return Ok(load_model(path)?);
        }
        if let Some(coeffs) = &self.poly {
            let order = self.galois_order.expect("required by clap");
            return Ok(GaloisExtensionModel::splitting_field(coeffs.clone(), order)?);
        }
        if let (Some(m), Some(residues)) = (self.modulus, &self.residues) {
            return Ok(GaloisExtensionModel::abelian(m, residues.iter().copied())?);
        }
        Err(AppError::Usage(
            "a model is required: --model-file, --poly with --galois-order, or --modulus with --residues".into(),
        ))
    }
}

fn write_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<(), AppError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct PrimeRecord {
    p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    splits: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle_type: Option<FrobeniusCycleType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl PrimeRecord {
    fn classify(model: &GaloisExtensionModel, p: u64) -> Self {
        match frobenius_cycle_type(model, p) {
            Ok(cycle) => PrimeRecord {
                p,
                splits: Some(cycle.is_split()),
                cycle_type: Some(cycle),
                error: None,
            },
            Err(e) => PrimeRecord {
                p,
                splits: None,
                cycle_type: None,
                error: Some(e.to_string()),
            },
        }
    }

    fn write<W: Write>(&self, out: &mut W, format: Format) -> Result<(), AppError> {
        match format {
            Format::Json => {
                serde_json::to_writer(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let cycle = self.cycle_type.as_ref().map(cycle_csv).unwrap_or_default();
                let splits = self.splits.map(|b| b.to_string()).unwrap_or_default();
                let error = self.error.as_deref().unwrap_or_default();
                writeln!(out, "{},{},{},\"{}\"", self.p, splits, cycle, error.replace('"', "'"))?;
            }
            Format::Human => match (&self.cycle_type, &self.error) {
                (Some(c), _) => {
                    let tag = if c.is_split() { "splits" } else { "" };
                    writeln!(out, "{:>12}  {:<12} {}", self.p, c.to_string(), tag)?;
                }
                (None, Some(e)) => writeln!(out, "{:>12}  error: {e}", self.p)?,
                (None, None) => {}
            },
        }
        Ok(())
    }
}

fn cycle_csv(c: &FrobeniusCycleType) -> String {
    c.degrees().iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

const SPL_CHUNK: u64 = 1 << 24;

fn cmd_spl<W: Write>(out: &mut W, format: Format, model: &GaloisExtensionModel, from: u64, to: u64) -> Result<(), AppError> {
    let range = PrimeRange::new(from, to);
    let ramified: Vec<u64> = map_segments(&range, |primes| {
        primes.iter().copied().filter(|&p| model.is_ramified(p)).collect::<Vec<_>>()
    })?
    .concat();
    match format {
        Format::Json => {
            let header = json!({"model": model.to_string(), "from": from, "to": to, "ramified": ramified});
            serde_json::to_writer(&mut *out, &header)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "# {model}; ramified: {ramified:?}")?;
            writeln!(out, "p,splits,cycle_type,error")?;
        }
        Format::Human => writeln!(out, "{model}\nprimes in [{from}, {to}), ramified: {ramified:?}")?,
    }
    let mut errors = 0;
    let mut lo = from;
    while lo < to {
        let hi = lo.saturating_add(SPL_CHUNK).min(to);
        if to - from > SPL_CHUNK {
            log::info!("spl: scanning [{lo}, {hi})");
        }
        let records = map_segments(&PrimeRange::new(lo, hi), |primes| {
            primes
                .iter()
                .filter(|&&p| !model.is_ramified(p))
                .map(|&p| PrimeRecord::classify(model, p))
                .collect::<Vec<_>>()
        })?;
        for record in records.iter().flatten() {
            errors += usize::from(record.error.is_some());
            record.write(out, format)?;
        }
        lo = hi;
    }
    if errors > 0 {
        return Err(AppError::Records(errors));
    }
    Ok(())
}

fn cmd_frob<W: Write>(out: &mut W, format: Format, model: &GaloisExtensionModel, primes: &[u64]) -> Result<(), AppError> {
    if format == Format::Csv {
        writeln!(out, "p,splits,cycle_type,error")?;
    }
    let mut errors = 0;
    for &p in primes {
        let record = PrimeRecord::classify(model, p);
        errors += usize::from(record.error.is_some());
        record.write(out, format)?;
    }
    if errors > 0 {
        return Err(AppError::Records(errors));
    }
    Ok(())
}

struct DensityTarget {
    label: String,
    set: Box<dyn PrimeSet + Send>,
    reference: Option<ExactDensity>,
}

fn density_target(model: &ModelArgs, all_primes: bool, cycle_type: Option<Vec<usize>>) -> Result<DensityTarget, AppError> {
    if all_primes {
        if cycle_type.is_some() {
            return Err(AppError::Usage("--cycle-type needs a model".into()));
        }
        return Ok(DensityTarget {
            label: "all primes".into(),
            set: Box::new(AllPrimes),
            reference: Some(ExactDensity::one()),
        });
    }
    let model = model.build()?;
    match cycle_type {
        None => Ok(DensityTarget {
            label: format!("Spl({model})"),
            reference: Some(chebotarev_reference(&model)),
            set: Box::new(model),
        }),
        Some(degrees) => {
            let cycle = FrobeniusCycleType::new(degrees);
            let label = format!("Frobenius cycle type {cycle} in {model}");
            let pred = SplittingPredicate::progression(model, ProgressionMode::CycleTypeEquals(cycle))?;
            Ok(DensityTarget {
                label,
                set: Box::new(pred),
                reference: None,
            })
        }
    }
}

fn cmd_density<W: Write>(
    out: &mut W,
    format: Format,
    target: &DensityTarget,
    kind: Kind,
    cutoffs: &[u64],
    s_grid: &[f64],
) -> Result<(), AppError> {
    let estimates: Vec<DensityEstimate> = match kind {
        Kind::Natural => natural_density_curve(&target.set, cutoffs)?,
        Kind::Dirichlet | Kind::Upper => cutoffs
            .iter()
            .map(|&x| {
                log::info!("density: cutoff {x}");
                if kind == Kind::Dirichlet {
                    dirichlet_density_estimate(&target.set, s_grid, x)
                } else {
                    upper_density_estimate(&target.set, s_grid, x)
                }
            })
            .collect::<Result<_, _>>()?,
    };
    let reference = target.reference.as_ref().map(ToString::to_string);
    match format {
        Format::Json => write_json(
            out,
            &json!({"set": target.label, "kind": kind, "reference": reference, "estimates": estimates}),
        )?,
        Format::Csv => {
            let reference = reference.unwrap_or_default();
            if kind == Kind::Natural {
                writeln!(out, "cutoff,members,primes,value,reference")?;
                for e in &estimates {
                    let (m, n) = e.counts.unwrap_or_default();
                    writeln!(out, "{},{m},{n},{:.10},{reference}", e.cutoff, e.value)?;
                }
            } else {
                writeln!(out, "cutoff,s,xi,ratio,tail_corrected,local_slope,estimate,reference")?;
                for e in &estimates {
                    for pt in &e.diagnostics {
                        let slope = pt.local_slope.map(|x| format!("{x:.10}")).unwrap_or_default();
                        writeln!(
                            out,
                            "{},{},{:.10},{:.10},{:.10},{slope},{:.10},{reference}",
                            e.cutoff, pt.s, pt.xi, pt.ratio, pt.tail_corrected, e.value
                        )?;
                    }
                }
            }
        }
        Format::Human => {
            writeln!(out, "{} ({} density)", target.label, kind_name(kind))?;
            if let Some(r) = &reference {
                writeln!(out, "Chebotarev reference: {r}")?;
            }
            for e in &estimates {
                writeln!(out, "  X = {:<12} estimate {:.6}  (spread {:.2e})", e.cutoff, e.value, e.spread)?;
            }
        }
    }
    Ok(())
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Natural => "natural",
        Kind::Dirichlet => "Dirichlet",
        Kind::Upper => "upper Dirichlet",
    }
}

fn parse_ie_table(text: &str) -> Result<BTreeMap<u32, ExactDensity>, AppError> {
    let mut table = BTreeMap::new();
    for entry in text.split(';').map(str::trim).filter(|e| !e.is_empty()) {
        let (lhs, rhs) = entry
            .split_once('=')
            .ok_or_else(|| AppError::Usage(format!("table entry {entry:?} lacks '='")))?;
        let indices: Vec<usize> = lhs
            .split(',')
            .map(|i| i.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| AppError::Usage(format!("table entry {entry:?}: {e}")))?;
        if indices.iter().any(|&i| i == 0 || i > 20) {
            return Err(AppError::Usage(format!("table entry {entry:?}: indices run from 1 to 20")));
        }
        table.insert(subset_mask(&indices), rhs.trim().parse()?);
    }
    Ok(table)
}

fn cmd_calculus(op: CalculusOp) -> Result<Value, AppError> {
    Ok(match op {
        CalculusOp::UnionBound { da, db } => json!({"upper_bound": union_upper_bound(&da, &db)}),
        CalculusOp::Pigeonhole { epsilon, r } => {
            json!({"threshold": pigeonhole_threshold(&epsilon, r)?})
        }
        CalculusOp::Intersection { da, db, dc } => {
            json!({"lower_bound": intersection_lower_bound(&da, &db, &dc)?})
        }
        CalculusOp::Selection { da0, dunion, dc, r } => {
            serde_json::to_value(selection_lower_bound(&da0, &dunion, &dc, r)?)?
        }
        CalculusOp::InclusionExclusion { r, table } => {
            json!({"union_density": inclusion_exclusion_density(r, &parse_ie_table(&table)?)?})
        }
        CalculusOp::Tower { m, t, r, omega } => {
            let spec = TowerSpec::new(m, t, r)?;
            let degrees: Vec<String> = (1..=r.min(16))
                .map(|ell| compositum_degree(&spec, ell).map(|d| d.to_string()))
                .collect::<Result<_, _>>()?;
            let mut report = json!({
                "m": m, "t": t, "r": r,
                "union_density": disjoint_union_density(&spec),
                "uncovered": rational_to_string(&spec.uncovered()),
                "compositum_degrees": degrees,
            });
            if let Some(omega) = omega {
                report["theta"] = serde_json::to_value(proposition_theta(&omega, &spec)?)?;
            }
            report
        }
    })
}

fn write_value<W: Write>(out: &mut W, format: Format, value: &Value) -> Result<(), AppError> {
    match format {
        Format::Json => write_json(out, value),
        Format::Csv => {
            let Value::Object(map) = value else {
                return write_json(out, value);
            };
            let keys: Vec<&String> = map.keys().collect();
            let cells: Vec<String> = map.values().map(csv_cell).collect();
            writeln!(out, "{}", keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","))?;
            writeln!(out, "{}", cells.join(","))?;
            Ok(())
        }
        Format::Human => {
            if let Value::Object(map) = value {
                for (k, v) in map {
                    writeln!(out, "{k:>20}: {}", human_cell(v))?;
                }
                Ok(())
            } else {
                write_json(out, value)
            }
        }
    }
}

fn human_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_cell(v: &Value) -> String {
    let s = human_cell(v);
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn cmd_weyl(ty: RootSystemType, enumerate: bool, cap: u64) -> Result<Value, AppError> {
    let mut value = serde_json::to_value(constants_for_group(ty))?;
    if enumerate {
        let group = enumerate_weyl_group(ty, cap)?;
        value["enumerated_order"] = group.order().into();
        value["enumerated_classes"] = group.class_count.into();
    }
    Ok(value)
}

fn cmd_verify<W: Write>(out: &mut W, format: Format, criterion: Option<u8>, seed: u64) -> Result<(), AppError> {
    let results = match criterion {
        Some(id) => vec![run_criterion(id, seed)
            .ok_or_else(|| AppError::Usage(format!("no acceptance criterion {id}")))?],
        None => run_all(seed),
    };
    let failed = results.iter().filter(|r| !r.passed).count();
    match format {
        Format::Json => write_json(out, &json!({"seed": seed, "results": results}))?,
        Format::Csv => {
            writeln!(out, "id,name,passed,detail")?;
            for r in &results {
                writeln!(out, "{},{},{},\"{}\"", r.id, r.name, r.passed, r.detail.replace('"', "'"))?;
            }
        }
        Format::Human => {
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                writeln!(out, "[{status}] {} {}: {}", r.id, r.name, r.detail)?;
            }
        }
    }
    if failed > 0 {
        return Err(AppError::Records(failed));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), AppError> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let format = cli.format;
    let result = match cli.command {
        Command::Spl { model, from, to } => cmd_spl(&mut out, format, &model.build()?, from, to),
        Command::Frob { model, primes } => cmd_frob(&mut out, format, &model.build()?, &primes),
        Command::Density {
            model,
            all_primes,
            cycle_type,
            kind,
            cutoffs,
            s_grid,
        } => {
            if !all_primes && !model.is_given() {
                return Err(AppError::Usage("give a model or --all-primes".into()));
            }
            let target = density_target(&model, all_primes, cycle_type)?;
            cmd_density(&mut out, format, &target, kind, &cutoffs, &s_grid)
        }
        Command::Calculus { op } => cmd_calculus(op).and_then(|v| write_value(&mut out, format, &v)),
        Command::Weyl { ty, enumerate, cap } => {
            cmd_weyl(ty, enumerate, cap).and_then(|v| write_value(&mut out, format, &v))
        }
        Command::Bounds {
            ty,
            m,
            omega,
            rho,
            materialize_limit,
        } => {
            let options = PipelineOptions {
                rho,
                materialize_limit,
                ..PipelineOptions::default()
            };
            csp_bound_pipeline(ty, m, &omega, &options)
                .map_err(AppError::from)
                .and_then(|report| serde_json::to_value(report).map_err(AppError::from))
                .and_then(|v| write_value(&mut out, format, &v))
        }
        Command::Verify { criterion, seed } => cmd_verify(&mut out, format, criterion, seed),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
