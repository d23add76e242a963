//! Command-line front end: one binary with subcommands for code
//! construction, single-shot decoding, exhaustive audits, Monte Carlo
//! sweeps, and analytic reference curves.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use itertools::Itertools;

use crate::channel::{init_llrs, init_probs};
use crate::decoder::{
    cbp_linear_decode, reference_vector_bp, ArithmeticMode, DecodeOutcome, DecoderConfig,
    LlrBpDecoder, Schedule,
};
use crate::error::{Error, Result};
use crate::galois::{default_primitive_polynomial, FieldTables};
use crate::harness::{
    bdd_curve, convert_rate, decode_all_syndromes, run_sweep, BddSpec, DecoderBackend, StopRule,
    SweepConfig,
};
use crate::stabilizer::{
    bicycle_construct, binary_to_check_matrix, classify, css_extend, format_error_vector,
    generalized_css_extend, hypergraph_product, parse_check_matrix, read_binary_matrix,
    read_check_matrix, read_error_vector, read_syndrome, write_check_matrix, CheckMatrix,
    DecodeClass, RowSpan,
};

fn version_string() -> String {
    let polys = (1..=4u32)
        .map(|l| {
            format!(
                "l={l}: {:#b}/{:#b}",
                default_primitive_polynomial(l),
                default_primitive_polynomial(2 * l)
            )
        })
        .join(", ");
    format!(
        "{}\ndefault field polynomials ({polys})",
        env!("CARGO_PKG_VERSION")
    )
}

#[derive(Parser, Debug)]
#[command(
    name = "qldpc",
    version = version_string(),
    about = "Belief propagation decoding of stabilizer codes over GF(2^l)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a check matrix and write it to a file
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Decode one error or syndrome
    Decode(DecodeArgs),
    /// Exhaustively decode all errors up to a weight limit
    Audit(AuditArgs),
    /// Monte Carlo logical-error-rate sweep over channel rates
    Sweep(SweepArgs),
    /// Analytic bounded-distance reference curve
    Bdd(BddArgs),
}

#[derive(Subcommand, Debug)]
enum ConstructKind {
    /// Circulant pair [C | C^T] with row deletion, then scalar extension
    Bicycle {
        /// block length N (even)
        #[arg(long)]
        n: usize,
        /// 1-indexed generator positions of the circulant
        #[arg(long, value_delimiter = ',')]
        gen: Vec<usize>,
        /// 1-indexed rows to delete after stacking
        #[arg(long, value_delimiter = ',')]
        delete: Vec<usize>,
        /// extension degree of the symbol field GF(2^l)
        #[arg(long, default_value_t = 1)]
        l: usize,
        /// where to write the check matrix
        #[arg(long)]
        output: PathBuf,
    },
    /// Stack of scaled copies of one Hermitian self-orthogonal base matrix
    CssExtend {
        /// base matrix: a check-matrix file, or a 0/1 text matrix
        #[arg(long)]
        input: PathBuf,
        /// extension degree, for 0/1 inputs (a check-matrix header wins)
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Stack of 2l pairwise-orthogonal binary matrices, scaled per block
    Gcss {
        /// comma-separated list of 2l binary matrix files
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Hypergraph product of two binary seed matrices (l = 1)
    Hypergraph {
        /// first seed matrix, 0/1 text
        #[arg(long)]
        input1: PathBuf,
        /// second seed matrix, 0/1 text
        #[arg(long)]
        input2: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

/// Decoder knobs shared by decode, audit, and sweep. Every flag overrides
/// the matching config-file entry.
#[derive(Args, Debug, Default)]
struct DecoderFlags {
    /// decoder family: llr, cbp, or reference
    #[arg(long, value_parser = parse_backend)]
    decoder: Option<DecoderBackend>,
    /// maximum number of iterations
    #[arg(long)]
    t_max: Option<usize>,
    /// message-passing order: parallel or serial
    #[arg(long, value_parser = parse_schedule)]
    schedule: Option<Schedule>,
    /// check-message normalization divisor
    #[arg(long)]
    alpha: Option<f64>,
    /// check-message offset
    #[arg(long)]
    beta: Option<f64>,
    /// fixed initialization rate (defaults to the channel rate in sweeps)
    #[arg(long)]
    epsilon0: Option<f64>,
    /// quantize messages to sign plus k-1 significand bits
    #[arg(long)]
    bit_width: Option<u32>,
    /// correction-term arithmetic: exact or table
    #[arg(long, value_parser = parse_arith)]
    arith: Option<ArithmeticMode>,
    /// TOML config file, or the JSON echo of a previous sweep
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    /// check-matrix file
    #[arg(long)]
    code: Option<PathBuf>,
    /// error-vector file; the syndrome is computed and the result classified
    #[arg(long)]
    error: Option<PathBuf>,
    /// syndrome file of 0/1 characters, one per check
    #[arg(long)]
    syndrome: Option<PathBuf>,
    /// emit per-iteration hard decisions and LLR snapshots as JSON lines
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    decoder: DecoderFlags,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(long)]
    code: Option<PathBuf>,
    /// largest error weight to enumerate
    #[arg(long)]
    weight_limit: Option<usize>,
    /// rayon thread count (default: one per core)
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    decoder: DecoderFlags,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    code: Option<PathBuf>,
    /// comma-separated channel error rates
    #[arg(long, value_delimiter = ',')]
    epsilon: Vec<f64>,
    /// base RNG seed; trials are derived streams
    #[arg(long)]
    seed: Option<u64>,
    /// stop once this many logical errors are seen (with --min-trials)
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long)]
    min_trials: Option<u64>,
    #[arg(long)]
    max_trials: Option<u64>,
    /// trials per stop-rule evaluation
    #[arg(long)]
    batch_size: Option<u64>,
    /// global index of the first trial, for pooling disjoint runs
    #[arg(long)]
    trial_offset: Option<u64>,
    /// rayon thread count (default: one per core)
    #[arg(long)]
    workers: Option<usize>,
    /// also write the CSV here
    #[arg(long)]
    output: Option<PathBuf>,
    /// write a JSON report with the resolved config echoed
    #[arg(long)]
    json: Option<PathBuf>,
    #[command(flatten)]
    decoder: DecoderFlags,
}

#[derive(Args, Debug)]
struct BddArgs {
    /// block length
    #[arg(long)]
    n: usize,
    /// decoding radius
    #[arg(long)]
    t: usize,
    /// corrected fractions gamma_0..gamma_t (missing entries default to 1)
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<f64>,
    /// comma-separated channel error rates
    #[arg(long, value_delimiter = ',', required = true)]
    epsilon: Vec<f64>,
    /// treat rates as binary symbol-flip rates and convert to depolarizing
    #[arg(long)]
    from_binary: bool,
}

fn parse_backend(s: &str) -> std::result::Result<DecoderBackend, String> {
    match s {
        "llr" => Ok(DecoderBackend::Llr),
        "cbp" => Ok(DecoderBackend::Cbp),
        "reference" => Ok(DecoderBackend::Reference),
        _ => Err(format!("unknown decoder '{s}' (llr, cbp, reference)")),
    }
}

fn parse_schedule(s: &str) -> std::result::Result<Schedule, String> {
    match s {
        "parallel" => Ok(Schedule::Parallel),
        "serial" => Ok(Schedule::Serial),
        _ => Err(format!("unknown schedule '{s}' (parallel, serial)")),
    }
}

fn parse_arith(s: &str) -> std::result::Result<ArithmeticMode, String> {
    match s {
        "exact" => Ok(ArithmeticMode::Exact),
        "table" => Ok(ArithmeticMode::LookupTable),
        _ => Err(format!("unknown arithmetic mode '{s}' (exact, table)")),
    }
}

/// Config file schema. Every field is optional; flags take precedence.
#[derive(Debug, Default, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub field: FieldBlock,
    pub code: CodeBlock,
    pub decoder: DecoderBlock,
    pub channel: ChannelBlock,
    pub sweep: SweepBlock,
    pub audit: AuditBlock,
}

#[derive(Debug, Default, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldBlock {
    /// extension degree; must match the code file when both are present
    pub l: Option<usize>,
    /// primitive polynomial bit-mask for GF(2^l)
    pub poly_q: Option<u64>,
    /// primitive polynomial bit-mask for GF(2^2l)
    pub poly_q2: Option<u64>,
}

#[derive(Debug, Default, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CodeBlock {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecoderBlock {
    pub backend: Option<DecoderBackend>,
    pub t_max: Option<usize>,
    pub schedule: Option<Schedule>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub epsilon_0: Option<f64>,
    pub bit_width: Option<u32>,
    pub arith: Option<ArithmeticMode>,
}

#[derive(Debug, Default, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelBlock {
    pub epsilon: Option<Vec<f64>>,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepBlock {
    pub min_errors: Option<u64>,
    pub min_trials: Option<u64>,
    pub max_trials: Option<u64>,
    pub batch_size: Option<u64>,
    pub trial_offset: Option<u64>,
    pub workers: Option<usize>,
}

#[derive(Debug, Default, Clone, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditBlock {
    pub weight_limit: Option<usize>,
    pub epsilon_0: Option<f64>,
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)?;
    let bad = |e: String| Error::InvalidConfig(format!("{}: {e}", path.display()));
    if path.extension().is_some_and(|e| e == "json") {
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        // a sweep's JSON report nests its echo under "config"
        let value = match value.get("config") {
            Some(inner) => inner.clone(),
            None => value,
        };
        serde_json::from_value(value).map_err(|e| bad(e.to_string()))
    } else {
        toml::from_str(&text).map_err(|e| bad(e.to_string()))
    }
}

fn build_tables(l: usize, config: &RunConfig) -> Result<FieldTables> {
    if let Some(cl) = config.field.l {
        if cl != l {
            return Err(Error::InvalidConfig(format!(
                "config sets l = {cl} but the code file has l = {l}"
            )));
        }
    }
    if config.field.poly_q.is_none() && config.field.poly_q2.is_none() {
        return FieldTables::new(l);
    }
    let poly_q = config
        .field
        .poly_q
        .unwrap_or_else(|| default_primitive_polynomial(l as u32));
    let poly_q2 = config
        .field
        .poly_q2
        .unwrap_or_else(|| default_primitive_polynomial(2 * l as u32));
    FieldTables::with_polynomials(l, poly_q, poly_q2)
}

fn resolve_decoder(flags: &DecoderFlags, config: &RunConfig) -> (DecoderBackend, DecoderConfig) {
    let defaults = DecoderConfig::default();
    let backend = flags
        .decoder
        .or(config.decoder.backend)
        .unwrap_or_default();
    let decoder = DecoderConfig {
        t_max: flags.t_max.or(config.decoder.t_max).unwrap_or(defaults.t_max),
        schedule: flags
            .schedule
            .or(config.decoder.schedule)
            .unwrap_or(defaults.schedule),
        alpha: flags.alpha.or(config.decoder.alpha),
        beta: flags.beta.or(config.decoder.beta),
        epsilon_0: flags.epsilon0.or(config.decoder.epsilon_0),
        bit_width: flags.bit_width.or(config.decoder.bit_width),
        mode: flags.arith.or(config.decoder.arith).unwrap_or(defaults.mode),
    };
    (backend, decoder)
}

fn load_code(flag: Option<&Path>, config: &RunConfig) -> Result<(PathBuf, CheckMatrix)> {
    let path = flag
        .map(Path::to_path_buf)
        .or_else(|| config.code.path.clone())
        .ok_or_else(|| Error::Usage("no code given: pass --code or set [code] path".into()))?;
    let matrix = read_check_matrix(&path)?;
    Ok((path, matrix))
}

fn with_workers<R, F>(workers: Option<usize>, f: F) -> Result<R>
where
    F: FnOnce() -> Result<R> + Send,
    R: Send,
{
    match workers {
        None => f(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("workers: {e}")))?
            .install(f),
    }
}

/// Parses and executes, returning the stdout payload. Help and version
/// requests come back as `Ok` text; bad flags as `Error::Usage`.
pub fn run_from<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::error::ErrorKind;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Ok(e.render().to_string());
        }
        Err(e) => return Err(Error::Usage(e.render().to_string())),
    };
    match cli.command {
        Command::Construct { kind } => cmd_construct(kind),
        Command::Decode(args) => cmd_decode(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Bdd(args) => cmd_bdd(args),
    }
}

fn construct_summary(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    output: &Path,
) -> Result<String> {
    // constructors validate self-orthogonality; recheck to report the verdict
    matrix.validate_self_orthogonal(tables)?;
    let span = RowSpan::new(tables, matrix)?;
    let mut out = format!(
        "M = {}\nN = {}\nkappa = {}\n",
        matrix.num_checks(),
        matrix.num_symbols(),
        matrix.row_density()
    );
    if span.rank() % tables.l() == 0 {
        out.push_str(&format!(
            "k = {}\n",
            matrix.num_symbols() - span.rank() / tables.l()
        ));
    }
    out.push_str("self_orthogonal = yes\n");
    out.push_str(&format!("wrote {}\n", output.display()));
    Ok(out)
}

fn cmd_construct(kind: ConstructKind) -> Result<String> {
    let (tables, matrix, output) = match kind {
        ConstructKind::Bicycle {
            n,
            gen,
            delete,
            l,
            output,
        } => {
            if gen.is_empty() {
                return Err(Error::Usage("bicycle construction needs --gen positions".into()));
            }
            let tables = FieldTables::new(l)?;
            let base = bicycle_construct(n, 2 * gen.len(), &gen, &delete)?;
            let matrix = css_extend(&tables, &binary_to_check_matrix(l, &base)?)?;
            (tables, matrix, output)
        }
        ConstructKind::CssExtend { input, l, output } => {
            let text = std::fs::read_to_string(&input)?;
            let base = if text.starts_with("qldpc") {
                let base = parse_check_matrix(&text)?;
                if let Some(l) = l {
                    if l != base.l() {
                        return Err(Error::InvalidConfig(format!(
                            "--l {l} conflicts with the file header l = {}",
                            base.l()
                        )));
                    }
                }
                base
            } else {
                let l = l.unwrap_or(1);
                binary_to_check_matrix(l, &crate::stabilizer::parse_binary_matrix(&text)?)?
            };
            let tables = FieldTables::new(base.l())?;
            let matrix = css_extend(&tables, &base)?;
            (tables, matrix, output)
        }
        ConstructKind::Gcss { inputs, l, output } => {
            let blocks = inputs
                .iter()
                .map(read_binary_matrix)
                .collect::<Result<Vec<_>>>()?;
            let tables = FieldTables::new(l)?;
            let matrix = generalized_css_extend(&tables, &blocks)?;
            (tables, matrix, output)
        }
        ConstructKind::Hypergraph {
            input1,
            input2,
            output,
        } => {
            let h1 = read_binary_matrix(&input1)?;
            let h2 = read_binary_matrix(&input2)?;
            let (hx, hz) = hypergraph_product(&h1, &h2)?;
            let tables = FieldTables::new(1)?;
            let matrix = generalized_css_extend(&tables, &[hx, hz])?;
            (tables, matrix, output)
        }
    };
    write_check_matrix(&tables, &matrix, &output)?;
    construct_summary(&tables, &matrix, &output)
}

fn run_backend(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    backend: DecoderBackend,
    decoder: &DecoderConfig,
    z: &[u8],
    epsilon_0: f64,
    trace: bool,
) -> Result<DecodeOutcome> {
    let n = matrix.num_symbols();
    match backend {
        DecoderBackend::Llr => {
            let priors = init_llrs(tables, epsilon_0, n)?;
            LlrBpDecoder::new(tables, matrix, decoder.clone())?.run(z, &priors, true, trace)
        }
        DecoderBackend::Cbp => {
            let priors = init_llrs(tables, epsilon_0, n)?;
            cbp_linear_decode(tables, matrix, z, &priors, decoder.t_max, true, trace)
        }
        DecoderBackend::Reference => {
            let priors = init_probs(tables, epsilon_0, n)?;
            reference_vector_bp(tables, matrix, z, &priors, decoder.t_max, true, trace)
        }
    }
}

fn class_label(class: DecodeClass) -> &'static str {
    match class {
        DecodeClass::ConvergedExact => "converged_exact",
        DecodeClass::DegenerateSuccess => "degenerate_success",
        DecodeClass::LogicalError => "logical_error",
        DecodeClass::DetectedFailure => "detected_failure",
    }
}

fn cmd_decode(args: DecodeArgs) -> Result<String> {
    let config = load_config(args.decoder.config.as_deref())?;
    let (_, matrix) = load_code(args.code.as_deref(), &config)?;
    let tables = build_tables(matrix.l(), &config)?;
    let (backend, decoder) = resolve_decoder(&args.decoder, &config);
    decoder.validate()?;
    let error = match (&args.error, &args.syndrome) {
        (Some(path), None) => Some(read_error_vector(&tables, path)?),
        (None, Some(_)) => None,
        _ => {
            return Err(Error::Usage(
                "pass exactly one of --error and --syndrome".into(),
            ))
        }
    };
    let z = match (&error, &args.syndrome) {
        (Some(e), _) => matrix.syndrome(&tables, e)?,
        (None, Some(path)) => read_syndrome(path)?,
        _ => unreachable!(),
    };
    let epsilon_0 = decoder.epsilon_0.unwrap_or(0.1);
    let outcome = run_backend(
        &tables, &matrix, backend, &decoder, &z, epsilon_0, args.trace,
    )?;
    let mut out = String::new();
    if let Some(trace) = &outcome.trace {
        for step in trace {
            let line = serde_json::json!({
                "iteration": step.iteration,
                "hard_decision": format_error_vector(&tables, &step.hard_decision),
                "syndrome_matched": step.syndrome_matched,
                "gamma": step.gamma,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
    }
    out.push_str(&format!(
        "e_hat = {}\n",
        format_error_vector(&tables, &outcome.e_hat)
    ));
    out.push_str(&format!("converged = {}\n", outcome.converged));
    out.push_str(&format!("iterations = {}\n", outcome.iterations_used));
    if let Some(e) = &error {
        let span = RowSpan::new(&tables, &matrix)?;
        let class = classify(&tables, &matrix, &span, &outcome.e_hat, e)?;
        out.push_str(&format!("class = {}\n", class_label(class)));
    }
    Ok(out)
}

fn cmd_audit(args: AuditArgs) -> Result<String> {
    let config = load_config(args.decoder.config.as_deref())?;
    let (_, matrix) = load_code(args.code.as_deref(), &config)?;
    let tables = build_tables(matrix.l(), &config)?;
    let (backend, decoder) = resolve_decoder(&args.decoder, &config);
    let weight_limit = args
        .weight_limit
        .or(config.audit.weight_limit)
        .ok_or_else(|| Error::Usage("no --weight-limit given".into()))?;
    let epsilon_0 = decoder
        .epsilon_0
        .or(config.audit.epsilon_0)
        .unwrap_or(0.1);
    let report = with_workers(args.workers.or(config.sweep.workers), || {
        decode_all_syndromes(&tables, &matrix, &decoder, backend, epsilon_0, weight_limit)
    })?;
    let mut out = String::from("weight,total,corrected,gamma\n");
    for w in &report.per_weight {
        out.push_str(&format!(
            "{},{},{},{}\n",
            w.weight,
            w.total,
            w.corrected,
            w.gamma()
        ));
    }
    Ok(out)
}

fn cmd_sweep(args: SweepArgs) -> Result<String> {
    let config = load_config(args.decoder.config.as_deref())?;
    let (code_path, matrix) = load_code(args.code.as_deref(), &config)?;
    let tables = build_tables(matrix.l(), &config)?;
    let (backend, decoder) = resolve_decoder(&args.decoder, &config);
    let epsilons = if args.epsilon.is_empty() {
        config.channel.epsilon.clone().unwrap_or_default()
    } else {
        args.epsilon.clone()
    };
    if epsilons.is_empty() {
        return Err(Error::Usage(
            "no channel rates: pass --epsilon or set [channel] epsilon".into(),
        ));
    }
    let defaults = StopRule::default();
    let stop = StopRule {
        min_logical_errors: args
            .min_errors
            .or(config.sweep.min_errors)
            .unwrap_or(defaults.min_logical_errors),
        min_trials: args
            .min_trials
            .or(config.sweep.min_trials)
            .unwrap_or(defaults.min_trials),
        max_trials: args
            .max_trials
            .or(config.sweep.max_trials)
            .unwrap_or(defaults.max_trials),
    };
    let sweep = SweepConfig {
        seed: args.seed.or(config.channel.seed).unwrap_or(0),
        backend,
        stop,
        batch_size: args
            .batch_size
            .or(config.sweep.batch_size)
            .unwrap_or(SweepConfig::default().batch_size),
        trial_offset: args
            .trial_offset
            .or(config.sweep.trial_offset)
            .unwrap_or(0),
    };
    let workers = args.workers.or(config.sweep.workers);
    let result = with_workers(workers, || {
        run_sweep(&tables, &matrix, &epsilons, &decoder, &sweep)
    })?;
    let csv = result.to_csv();
    if let Some(path) = &args.output {
        std::fs::write(path, &csv)?;
    }
    if let Some(path) = &args.json {
        let resolved = RunConfig {
            field: FieldBlock {
                l: Some(tables.l()),
                poly_q: Some(tables.poly_q()),
                poly_q2: Some(tables.poly_q2()),
            },
            code: CodeBlock {
                path: Some(code_path),
            },
            decoder: DecoderBlock {
                backend: Some(backend),
                t_max: Some(decoder.t_max),
                schedule: Some(decoder.schedule),
                alpha: decoder.alpha,
                beta: decoder.beta,
                epsilon_0: decoder.epsilon_0,
                bit_width: decoder.bit_width,
                arith: Some(decoder.mode),
            },
            channel: ChannelBlock {
                epsilon: Some(epsilons.clone()),
                seed: Some(sweep.seed),
            },
            sweep: SweepBlock {
                min_errors: Some(stop.min_logical_errors),
                min_trials: Some(stop.min_trials),
                max_trials: Some(stop.max_trials),
                batch_size: Some(sweep.batch_size),
                trial_offset: Some(sweep.trial_offset),
                workers,
            },
            audit: AuditBlock::default(),
        };
        let points: Vec<serde_json::Value> = result
            .points
            .iter()
            .map(|p| {
                let (lo, hi) = p.ler_interval();
                serde_json::json!({
                    "epsilon": p.epsilon,
                    "trials": p.trials,
                    "converged_exact": p.converged_exact,
                    "degenerate_successes": p.degenerate_successes,
                    "logical_errors": p.logical_errors,
                    "detected_failures": p.detected_failures,
                    "ler": p.ler(),
                    "ler_ci": [lo, hi],
                    "mean_iterations": p.mean_iterations(),
                    "total_iterations": p.total_iterations,
                    "wall_time": p.wall_time,
                })
            })
            .collect();
        let doc = serde_json::json!({ "config": resolved, "points": points });
        let text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        std::fs::write(path, text + "\n")?;
    }
    Ok(csv)
}

fn cmd_bdd(args: BddArgs) -> Result<String> {
    let spec = BddSpec::new(args.n, args.t, args.gamma)?;
    let epsilons = args
        .epsilon
        .iter()
        .map(|&e| {
            if args.from_binary {
                convert_rate(e)
            } else {
                Ok(e)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let curve = bdd_curve(&spec, &epsilons);
    let mut out = String::from("epsilon,ler\n");
    for (eps, ler) in epsilons.iter().zip(&curve) {
        out.push_str(&format!("{eps},{ler}\n"));
    }
    Ok(out)
}
