//! msrc: encode files with repair-efficient MDS array codes, simulate
//! node failures, repair them, and verify the codes' guarantees.

mod container;
mod pipeline;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use itertools::Itertools;
use num_rational::Ratio;

use msr_core::c1::{assign_lambdas, validate_lambdas, C1Code, C1Params};
use msr_core::c2::C2Code;
use msr_core::code::{CodeParams, CodeRegistry};
use msr_core::codec::{encode as encode_codeword, shorten, verify_mds_with, ShortenedCode};
use msr_core::gf::{self, Construction, SymbolMode};
use msr_core::{Code, Error as CoreError, Vector};

use container::{Container, ContainerLoadError, Header, FLAG_C1, FLAG_C2};
use pipeline::PipelineError;

#[derive(Parser)]
#[command(
    name = "msrc",
    version,
    about = "MDS array codes with optimal and near-optimal repair bandwidth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derived parameters of a code
    Info {
        n: usize,
        k: usize,
        d: usize,
        /// Replication factor; s > 1 selects the replicated construction
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Field order override
        #[arg(long)]
        q: Option<u64>,
        /// Accept odd n by shortening an (n+1, k+1, d+1) code
        #[arg(long)]
        shorten: bool,
    },
    /// Encode a file into a container (byte mode: prime field >= 257)
    Encode {
        input: PathBuf,
        output: PathBuf,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Field order override (must be a prime >= 257 in byte mode)
        #[arg(long)]
        q: Option<u64>,
        /// Accept odd n by shortening an (n+1, k+1, d+1) code
        #[arg(long)]
        shorten: bool,
    },
    /// Recover the original file from >= k nodes of a container
    Decode {
        container: PathBuf,
        output: PathBuf,
        /// Node indices to read from (default: all nodes)
        #[arg(long, num_args = 1..)]
        available: Option<Vec<usize>>,
    },
    /// Recompute one node from helper downloads and report the bandwidth
    Repair {
        container: PathBuf,
        output: PathBuf,
        /// The node to fail and repair
        #[arg(long)]
        fail: usize,
        /// Helper nodes (default: all survivors, valid when d = n-1)
        #[arg(long, num_args = 1..)]
        helpers: Option<Vec<usize>>,
    },
    /// Check the code's guarantees: coefficient conditions, MDS
    /// subsets, factorization identities, and a repair sweep
    Verify {
        /// Container whose parameters (and shards) should be verified
        container: Option<PathBuf>,
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(short, long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        shorten: bool,
        /// Plant a coefficient collision first (debugging aid; must fail)
        #[arg(long)]
        corrupt_lambda: bool,
        /// Subset budget before MDS verification switches to sampling
        #[arg(long, default_value_t = 100_000)]
        mds_cap: u64,
        /// Budget for the (node, helper set) repair sweep
        #[arg(long, default_value_t = 512)]
        repair_cap: u64,
    },
}

/// Failure classes mapped to exit codes: usage 2, property 1, I/O 3,
/// integrity 4.
enum CliError {
    Usage(String),
    Property(String),
    Io(String),
    Integrity(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Property(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Integrity(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Property(m)
            | CliError::Io(m)
            | CliError::Integrity(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Singular | CoreError::Internal(_) => CliError::Property(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Core(c) => c.into(),
            PipelineError::Corrupt(m) => CliError::Integrity(m),
        }
    }
}

impl From<ContainerLoadError> for CliError {
    fn from(e: ContainerLoadError) -> Self {
        match e {
            ContainerLoadError::Io(io) => CliError::Io(io.to_string()),
            ContainerLoadError::Malformed(m) => CliError::Integrity(m.to_string()),
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("MSRC_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Info {
            n,
            k,
            d,
            s,
            q,
            shorten,
        } => cmd_info(n, k, d, s, q, shorten),
        Command::Encode {
            input,
            output,
            n,
            k,
            d,
            s,
            q,
            shorten,
        } => cmd_encode(&input, &output, n, k, d, s, q, shorten),
        Command::Decode {
            container,
            output,
            available,
        } => cmd_decode(&container, &output, available),
        Command::Repair {
            container,
            output,
            fail,
            helpers,
        } => cmd_repair(&container, &output, fail, helpers),
        Command::Verify {
            container,
            n,
            k,
            d,
            s,
            q,
            shorten,
            corrupt_lambda,
            mds_cap,
            repair_cap,
        } => cmd_verify(
            container,
            n,
            k,
            d,
            s,
            q,
            shorten,
            corrupt_lambda,
            mds_cap,
            repair_cap,
        ),
    }
}

/// Which registry entry a (n, k, d, s, shorten) request selects.
fn pick_construction(
    n: usize,
    d: usize,
    s: usize,
    shorten: bool,
) -> Result<&'static str, CliError> {
    if s > 1 {
        if n % 2 != 0 {
            return Err(CliError::Usage(format!(
                "replicated construction needs an even base length, got {n}"
            )));
        }
        if d != n - 1 {
            return Err(CliError::Usage(format!(
                "replicated construction requires d = n-1 = {}, got {d}",
                n - 1
            )));
        }
        return Ok("c2");
    }
    if n % 2 != 0 {
        if shorten {
            Ok("c1-shortened")
        } else {
            Err(CliError::Usage(format!(
                "code length {n} is odd; pass --shorten to derive it from an \
                 ({}, k+1, d+1) code",
                n + 1
            )))
        }
    } else {
        Ok("c1")
    }
}

fn build_code(
    name: &str,
    n: usize,
    k: usize,
    d: usize,
    s: usize,
    q: Option<u64>,
) -> Result<Box<dyn Code>, CliError> {
    let mut params = CodeParams::new(n, k, d).with_s(if name == "c2" { s } else { 1 });
    if let Some(q) = q {
        params = params.with_q(q);
    }
    Ok(CodeRegistry::builtin().build(name, &params)?)
}

/// The construction/threshold pair used for field sizing.
fn sizing_params(
    name: &str,
    n: usize,
    k: usize,
    d: usize,
    s: usize,
) -> (Construction, usize, usize, usize, usize) {
    match name {
        "c2" => (Construction::C2, n, k, d, s),
        "c1-shortened" => (Construction::C1, n + 1, k + 1, d + 1, 1),
        _ => (Construction::C1, n, k, d, 1),
    }
}

fn cmd_info(
    n: usize,
    k: usize,
    d: usize,
    s: usize,
    q: Option<u64>,
    shorten_flag: bool,
) -> Result<(), CliError> {
    let name = pick_construction(n, d, s, shorten_flag)?;
    let code = build_code(name, n, k, d, s, q)?;
    let (cons, tn, tk, td, ts) = sizing_params(name, n, k, d, s);
    let byte_q = gf::smallest_valid_q(cons, tn, tk, td, ts, SymbolMode::Byte)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let big_n = code.sub_packetization();
    let w = code.repair_degree() - code.data_node_count() + 1;
    let m = big_n.ilog(w.max(2)) as usize;
    println!("construction: {}", code.name());
    println!(
        "n: {}  k: {}  d: {}  r: {}",
        code.node_count(),
        code.data_node_count(),
        code.repair_degree(),
        code.parity_node_count()
    );
    println!("w: {w}  m: {m}  sub-packetization N: {big_n}");
    println!(
        "field: {} (symbol mode; byte mode uses q = {byte_q})",
        code.field()
    );
    println!(
        "optimal repair bandwidth: {} symbols per repaired node",
        code.optimal_repair_bandwidth()
    );
    let eps = code.epsilon();
    if eps != Ratio::from_integer(0) {
        let ratio = Ratio::from_integer(1) + eps;
        println!("epsilon: {eps}  (repair bandwidth = {ratio} of optimal)");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_encode(
    input: &Path,
    output: &Path,
    n: usize,
    k: usize,
    d: usize,
    s: usize,
    q: Option<u64>,
    shorten_flag: bool,
) -> Result<(), CliError> {
    let name = pick_construction(n, d, s, shorten_flag)?;
    let (cons, tn, tk, td, ts) = sizing_params(name, n, k, d, s);
    let q = match q {
        Some(q) => {
            let threshold = gf::field_threshold(cons, tn, tk, td, ts)?;
            let prime = matches!(gf::prime_power_decomposition(q), Some((_, 1)));
            if !prime || q < 257 {
                return Err(CliError::Usage(format!(
                    "byte mode needs a prime field of order >= 257, got {q}"
                )));
            }
            if q <= threshold {
                return Err(CliError::Usage(format!(
                    "field order {q} too small: need q > {threshold}"
                )));
            }
            q
        }
        None => gf::smallest_valid_q(cons, tn, tk, td, ts, SymbolMode::Byte)?,
    };
    let code = build_code(name, n, k, d, s, Some(q))?;

    let data =
        std::fs::read(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    let shard_bytes = code.data_node_count() * code.sub_packetization();
    let shards = data.len().div_ceil(shard_bytes);
    let field = code.field();
    let header = Header {
        construction: if name == "c2" { FLAG_C2 } else { FLAG_C1 },
        p: field.characteristic() as u16,
        e: field.extension_degree() as u8,
        n: code.node_count() as u16,
        k: code.data_node_count() as u16,
        d: code.repair_degree() as u16,
        s: s as u16,
        original_len: data.len() as u64,
        shards: shards as u32,
    };
    let container = pipeline::encode_bytes(code.as_ref(), header, &data)?;
    container
        .write_to(output)
        .map_err(|e| CliError::Io(format!("{}: {e}", output.display())))?;
    println!(
        "encoded {} bytes into {} shards across {} nodes ({} symbols per node)",
        data.len(),
        shards,
        code.node_count(),
        code.sub_packetization() * shards
    );
    Ok(())
}

fn load(container_path: &Path) -> Result<(Container, Box<dyn Code>), CliError> {
    let container = Container::read_from(container_path)?;
    let code = container
        .header
        .build_code(&CodeRegistry::builtin())
        .map_err(|e| CliError::Integrity(e.to_string()))?;
    Ok((container, code))
}

fn cmd_decode(
    container_path: &Path,
    output: &Path,
    available: Option<Vec<usize>>,
) -> Result<(), CliError> {
    let (container, code) = load(container_path)?;
    let n = code.node_count();
    let available: BTreeSet<usize> = match available {
        Some(list) => {
            let set: BTreeSet<usize> = list.iter().copied().collect();
            if set.len() != list.len() {
                return Err(CliError::Usage("duplicate node index".into()));
            }
            if let Some(&bad) = set.iter().find(|&&i| i >= n) {
                return Err(CliError::Usage(format!(
                    "node {bad} out of range for n = {n}"
                )));
            }
            set
        }
        None => (0..n).collect(),
    };
    let bytes = pipeline::decode_bytes(code.as_ref(), &container, &available)?;
    std::fs::write(output, &bytes)
        .map_err(|e| CliError::Io(format!("{}: {e}", output.display())))?;
    println!(
        "decoded {} bytes from nodes {:?}",
        bytes.len(),
        available.iter().collect::<Vec<_>>()
    );
    Ok(())
}

fn cmd_repair(
    container_path: &Path,
    output: &Path,
    fail: usize,
    helpers: Option<Vec<usize>>,
) -> Result<(), CliError> {
    let (mut container, code) = load(container_path)?;
    let n = code.node_count();
    if fail >= n {
        return Err(CliError::Usage(format!(
            "node {fail} out of range for n = {n}"
        )));
    }
    let helpers: Vec<usize> = match helpers {
        Some(h) => h,
        None => {
            if code.repair_degree() == n - 1 {
                (0..n).filter(|&j| j != fail).collect()
            } else {
                return Err(CliError::Usage(format!(
                    "--helpers is required: pick {} of the {} survivors",
                    code.repair_degree(),
                    n - 1
                )));
            }
        }
    };
    let summary = pipeline::repair_container(code.as_ref(), &mut container, fail, &helpers)?;

    println!(
        "repaired node {} from helpers {:?} over {} shards",
        summary.failed, summary.helpers, summary.shards
    );
    let per_helper = summary
        .downloads_per_shard
        .iter()
        .map(|(j, c)| format!("{j}:{c}"))
        .join(" ");
    println!("downloads per shard (node:symbols): {per_helper}");
    println!(
        "bandwidth per shard: {} symbols (optimal {})",
        summary.bandwidth_per_shard, summary.optimal_per_shard
    );
    let ratio = summary.ratio();
    println!(
        "ratio: {ratio} ({:.3}), guaranteed 1 + {}",
        *ratio.numer() as f64 / *ratio.denom() as f64,
        summary.epsilon
    );
    println!(
        "total downloaded: {} symbols",
        summary.bandwidth_per_shard * summary.shards
    );
    if !summary.matches_stored {
        return Err(CliError::Integrity(format!(
            "recovered node {} differs from the stored content",
            summary.failed
        )));
    }
    container
        .write_to(output)
        .map_err(|e| CliError::Io(format!("{}: {e}", output.display())))?;
    println!("repaired container written (byte-identical)");
    Ok(())
}

// ---- verify -----------------------------------------------------------

/// Concrete handle on whichever construction verify built, since the
/// coefficient and factorization suites need more than the trait exposes.
enum Built {
    C1(C1Code),
    Shortened(ShortenedCode),
    C2(C2Code),
}

impl Built {
    fn as_code(&self) -> &dyn Code {
        match self {
            Built::C1(c) => c,
            Built::Shortened(c) => c,
            Built::C2(c) => c,
        }
    }

    fn base(&self) -> &C1Code {
        match self {
            Built::C1(c) => c,
            Built::Shortened(c) => c.base(),
            Built::C2(c) => c.base(),
        }
    }
}

fn plant_collision(params: &C1Params) -> msr_core::c1::LambdaTable {
    // collide a node with its partner half: breaks the MDS pair condition
    let mut table = assign_lambdas(params);
    table.set(params.m, 0, table.get(0, 0));
    table
}

fn build_for_verify(
    name: &str,
    n: usize,
    k: usize,
    d: usize,
    s: usize,
    q: Option<u64>,
    corrupt: bool,
) -> Result<Built, CliError> {
    match name {
        "c1" | "c1-shortened" => {
            let (bn, bk, bd) = if name == "c1" {
                (n, k, d)
            } else {
                (n + 1, k + 1, d + 1)
            };
            let params = C1Params::new(bn, bk, bd, q)?;
            let table = if corrupt {
                plant_collision(&params)
            } else {
                assign_lambdas(&params)
            };
            let base = C1Code::from_table_unchecked(params, table);
            if name == "c1" {
                Ok(Built::C1(base))
            } else {
                Ok(Built::Shortened(shorten(base)))
            }
        }
        "c2" => {
            if corrupt {
                let threshold = gf::field_threshold(Construction::C2, n, k, n - 1, s)?;
                let q = match q {
                    Some(q) => q,
                    None => {
                        gf::smallest_valid_q(Construction::C2, n, k, n - 1, s, SymbolMode::Symbol)?
                    }
                };
                if q <= threshold {
                    return Err(CliError::Usage(
                        CoreError::FieldTooSmall { q, threshold }.to_string(),
                    ));
                }
                let params = C1Params::new(n, k, n - 1, Some(q))?;
                let table = plant_collision(&params);
                let base = C1Code::from_table_unchecked(params, table);
                Ok(Built::C2(C2Code::from_base_unchecked(base, s)))
            } else {
                Ok(Built::C2(C2Code::new(n, k, s, q)?))
            }
        }
        other => Err(CliError::Usage(format!("unknown construction {other}"))),
    }
}

/// Deterministic non-trivial test data (splitmix64 stream reduced mod q).
fn deterministic_data(code: &dyn Code, seed: u64) -> Vec<Vector> {
    let f = code.field();
    let q = f.order();
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    (0..code.data_node_count())
        .map(|_| {
            let vals: Vec<u64> = (0..code.sub_packetization()).map(|_| next() % q).collect();
            Vector::from_values(f.clone(), &vals)
        })
        .collect()
}

struct Suite {
    failures: usize,
}

impl Suite {
    fn report(&mut self, label: &str, checked: usize, witnesses: Vec<String>) {
        if witnesses.is_empty() {
            println!("{label}: PASS ({checked} checked)");
        } else {
            self.failures += witnesses.len();
            println!("{label}: FAIL ({} of {checked} checks)", witnesses.len());
            for w in witnesses.iter().take(5) {
                println!("  witness: {w}");
            }
            if witnesses.len() > 5 {
                println!("  ... {} more", witnesses.len() - 5);
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    container_path: Option<PathBuf>,
    n: Option<usize>,
    k: Option<usize>,
    d: Option<usize>,
    s: usize,
    q: Option<u64>,
    shorten_flag: bool,
    corrupt: bool,
    mds_cap: u64,
    repair_cap: u64,
) -> Result<(), CliError> {
    let (built, container) = match (&container_path, n, k, d) {
        (Some(path), None, None, None) => {
            let (container, _) = load(path)?;
            let (name, params) = container
                .header
                .code_params()
                .map_err(|e| CliError::Integrity(e.to_string()))?;
            let built = build_for_verify(
                name, params.n, params.k, params.d, params.s, params.q, corrupt,
            )?;
            (built, Some(container))
        }
        (None, Some(n), Some(k), Some(d)) => {
            let name = pick_construction(n, d, s, shorten_flag)?;
            (build_for_verify(name, n, k, d, s, q, corrupt)?, None)
        }
        _ => {
            return Err(CliError::Usage(
                "pass either a container path or all of -n, -k, -d".into(),
            ))
        }
    };

    let code = built.as_code();
    println!(
        "construction: {} (n={}, k={}, d={}) over {}, N={}",
        code.name(),
        code.node_count(),
        code.data_node_count(),
        code.repair_degree(),
        code.field(),
        code.sub_packetization()
    );
    let mut suite = Suite { failures: 0 };

    // coefficient distinctness
    let base = built.base();
    let lambda_witnesses: Vec<String> = validate_lambdas(base.params(), base.lambdas())
        .into_iter()
        .map(|v| {
            format!(
                "{:?} at (i={}, u={}, j={}, v={})",
                v.condition, v.i, v.u, v.j, v.v
            )
        })
        .collect();
    let bw = base.params().w;
    let checked = base.params().n * bw * base.params().n * bw;
    suite.report("coefficient conditions", checked, lambda_witnesses);
    if let Built::C2(c2) = &built {
        let witnesses: Vec<String> = c2
            .validate_conditions()
            .into_iter()
            .map(|v| {
                format!(
                    "{:?} at (i={}, u={}, j={}, v={})",
                    v.condition, v.i, v.u, v.j, v.v
                )
            })
            .collect();
        let nn = code.node_count() * code.parity_node_count();
        suite.report("scaled coefficient conditions", nn * nn, witnesses);
    }

    // MDS subsets
    let mds = verify_mds_with(code, mds_cap, 0);
    let witnesses: Vec<String> = mds
        .failures
        .iter()
        .map(|s| format!("subset {s:?}"))
        .collect();
    let label = if mds.exhaustive {
        format!("mds subsets ({}/{} exhaustive)", mds.checked, mds.total)
    } else {
        format!("mds subsets (sampled {}/{})", mds.checked, mds.total)
    };
    suite.report(&label, mds.checked as usize, witnesses);

    // factorization of the projected products, on the base code
    let bp = base.params().clone();
    let mut factor_witnesses = Vec::new();
    let mut factor_checked = 0usize;
    for i in 0..bp.n {
        let select = base.select_matrix(i);
        let repair = base.repair_matrix(i);
        for j in 0..bp.n {
            if i == j {
                continue;
            }
            for t in 0..bp.r {
                factor_checked += 1;
                let lhs = select
                    .mat_mul(&base.parity_block(t, j))
                    .map_err(|e| CliError::Property(e.to_string()))?;
                let rhs = base
                    .b_matrix(t, j, i)
                    .mat_mul(&repair)
                    .map_err(|e| CliError::Property(e.to_string()))?;
                if lhs != rhs {
                    factor_witnesses.push(format!("i={i} j={j} t={t}"));
                }
            }
        }
    }
    suite.report("factorization identities", factor_checked, factor_witnesses);

    // projected self-products
    let mut proj_witnesses = Vec::new();
    let mut proj_checked = 0usize;
    for i in 0..bp.n {
        let select = base.select_matrix(i);
        for t in 0..bp.r {
            proj_checked += 1;
            let lhs = select
                .mat_mul(&base.parity_block(t, i))
                .map_err(|e| CliError::Property(e.to_string()))?;
            let mut rhs = msr_core::Matrix::zeros(bp.field.clone(), lhs.rows(), lhs.cols());
            for u in 0..bp.w {
                let v = base.space().partition_matrix(i % bp.m, u, &bp.field);
                rhs = rhs
                    .add(&v.scale(base.projection_coeff(i, u, t)))
                    .map_err(|e| CliError::Property(e.to_string()))?;
            }
            if lhs != rhs {
                proj_witnesses.push(format!("i={i} t={t}"));
            }
        }
    }
    suite.report("projection identities", proj_checked, proj_witnesses);

    // repair sweep on a deterministic codeword
    let mut repair_witnesses = Vec::new();
    let mut repairs = 0usize;
    match encode_codeword(code, &deterministic_data(code, 0x5eed)) {
        Ok(cw) => {
            let nn = code.node_count();
            let dd = code.repair_degree();
            let expected_ratio = Ratio::from_integer(1) + code.epsilon();
            'sweep: for failed in 0..nn {
                let survivors: Vec<usize> = (0..nn).filter(|&j| j != failed).collect();
                for helpers in survivors.iter().copied().combinations(dd) {
                    if repairs as u64 >= repair_cap {
                        break 'sweep;
                    }
                    repairs += 1;
                    match code.repair(&cw, failed, &helpers) {
                        Ok(report) => {
                            if &report.recovered != cw.node(failed) {
                                repair_witnesses
                                    .push(format!("node {failed} via {helpers:?}: wrong content"));
                            }
                            if report.bandwidth_ratio() != expected_ratio {
                                repair_witnesses.push(format!(
                                    "node {failed} via {helpers:?}: bandwidth {} != {} * {}",
                                    report.bandwidth, expected_ratio, report.optimal
                                ));
                            }
                        }
                        Err(e) => {
                            repair_witnesses.push(format!("node {failed} via {helpers:?}: {e}"))
                        }
                    }
                }
            }
        }
        Err(e) => repair_witnesses.push(format!("encode failed: {e}")),
    }
    suite.report("repair sweep", repairs, repair_witnesses);

    // shard residuals, when verifying a container
    if let Some(container) = &container {
        let bad = pipeline::invalid_shards(code, container)?;
        let shards = container.header.shards as usize;
        if bad.is_empty() {
            println!("shard residuals: PASS ({shards} checked)");
        } else {
            println!("shard residuals: FAIL ({} of {shards})", bad.len());
            return Err(CliError::Integrity(format!(
                "shards with nonzero parity residual: {bad:?}"
            )));
        }
    }

    if suite.failures == 0 {
        println!("overall: PASS");
        Ok(())
    } else {
        println!("overall: FAIL");
        Err(CliError::Property(format!(
            "{} property check(s) failed",
            suite.failures
        )))
    }
}
