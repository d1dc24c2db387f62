//! Command-line front end: loads FCIDUMP fixtures, dispatches to the
//! library, and emits JSON or CSV reports.
//!
//! Exit codes: 0 on success, 1 on domain errors (message on stderr), 2 on
//! usage errors. `SYMUCC_THREADS` caps the worker-thread count.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Once;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::circuit::{build_ansatz, resource_report};
use crate::error::{Error, Result};
use crate::fermionics::enumerate_pool;
use crate::integrals::IntegralTable;
use crate::pauli_jw::qubit_hamiltonian;
use crate::simulator::{
    noisy_energy_folded, prepare_reference, zne_extrapolate, NoiseSpec,
};
use crate::solvers::{
    adapt_vqe, fci_solve, pes_scan, sector_dimension, vqe_minimize, AdaptRound, IterationRecord,
    ScanMethod, VqeOptions,
};
use crate::symmetry::{filter_pool, irrep_census, subgroup_scan, IrrepLabel, PointGroup};

#[derive(Parser)]
#[command(
    name = "symucc",
    about = "Symmetry-reduced UCCSD ansatz construction, statevector VQE, and exact-diagonalization references",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FixtureArgs {
    /// FCIDUMP file with MO-basis integrals and ORBSYM labels
    #[arg(long)]
    fcidump: PathBuf,
    /// Abelian point group used for irrep display names (labels stay numeric
    /// when omitted)
    #[arg(long)]
    group: Option<String>,
    /// Drop stored integrals below this magnitude before any computation
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Pool size before and after the symmetry filter
    Pool(PoolArgs),
    /// Per-irrep census of the excitation pool as CSV
    Census(CensusArgs),
    /// Compile the (filtered) ansatz to OpenQASM and report gate resources
    Compile(CompileArgs),
    /// Run the VQE loop and write a JSON report
    Vqe(VqeArgs),
    /// Adaptive operator-pool growth (gradient screening)
    Adapt(AdaptArgs),
    /// Exact sector-restricted ground-state energy
    Fci(FciArgs),
    /// Solve a sequence of fixtures and emit curve data
    Scan(ScanArgs),
    /// Noisy-energy sweep with optional zero-noise extrapolation
    NoiseSweep(NoiseSweepArgs),
    /// Survivor counts under subgroup ORBSYM relabellings
    SubgroupScan(SubgroupScanArgs),
}

#[derive(Args)]
struct PoolArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Skip the symmetry filter (baseline ansatz)
    #[arg(long)]
    no_filter: bool,
    /// Output OpenQASM path
    #[arg(long)]
    out: PathBuf,
    /// JSON file with a parameter vector to bind (zeros when omitted)
    #[arg(long)]
    params: Option<PathBuf>,
}

#[derive(Args)]
struct VqeArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Skip the symmetry filter (baseline ansatz)
    #[arg(long)]
    no_filter: bool,
    /// Also run the unfiltered baseline and report the energy difference
    #[arg(long)]
    compare_unfiltered: bool,
    /// Convergence threshold on both the energy change and the gradient
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Switch to adaptive pool growth
    #[arg(long)]
    adapt: bool,
    /// Screening threshold for --adapt
    #[arg(long, default_value_t = 1e-2)]
    epsilon: f64,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdaptArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Skip the symmetry filter on the initial pool
    #[arg(long)]
    no_filter: bool,
    /// Screening threshold on the pool-average gradient
    #[arg(long, default_value_t = 1e-2)]
    epsilon: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FciArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// FCIDUMP files, scanned in order
    #[arg(long, num_args = 1.., required = true)]
    fcidump: Vec<PathBuf>,
    /// vqe or fci
    #[arg(long, default_value = "vqe")]
    method: String,
    /// Skip the symmetry filter (vqe method only)
    #[arg(long)]
    no_filter: bool,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NoiseSweepArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Skip the symmetry filter (baseline ansatz)
    #[arg(long)]
    no_filter: bool,
    /// Comma-separated two-qubit depolarizing probabilities
    #[arg(long, default_value = "0")]
    p2: String,
    /// Single-qubit depolarizing probability
    #[arg(long, default_value_t = 0.0)]
    p1: f64,
    /// Measurement shots per Pauli term (0 = exact expectations)
    #[arg(long, default_value_t = 0)]
    shots: u64,
    /// Monte Carlo trajectories per point
    #[arg(long, default_value_t = 100)]
    trajectories: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add a zero-noise-extrapolated column (gate folding)
    #[arg(long)]
    zne: bool,
    /// Comma-separated odd fold factors for --zne
    #[arg(long, default_value = "1,3,5")]
    fold: String,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SubgroupScanArgs {
    #[command(flatten)]
    fixture: FixtureArgs,
    /// Relabellings as GROUP=PATH, where PATH holds one line of 1-based
    /// labels for the fixture's orbital ordering
    #[arg(long, num_args = 1.., required = true)]
    orbsym: Vec<String>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

static THREAD_POOL_INIT: Once = Once::new();

fn init_threads() {
    THREAD_POOL_INIT.call_once(|| {
        if let Ok(threads) = std::env::var("SYMUCC_THREADS") {
            if let Ok(n) = threads.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    });
}

/// Parse and dispatch; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Pool(args) => cmd_pool(args),
        Command::Census(args) => cmd_census(args),
        Command::Compile(args) => cmd_compile(args),
        Command::Vqe(args) => cmd_vqe(args),
        Command::Adapt(args) => cmd_adapt(args),
        Command::Fci(args) => cmd_fci(args),
        Command::Scan(args) => cmd_scan(args),
        Command::NoiseSweep(args) => cmd_noise_sweep(args),
        Command::SubgroupScan(args) => cmd_subgroup_scan(args),
    }
}

struct Fixture {
    table: IntegralTable,
    group: Option<&'static PointGroup>,
    molecule: String,
}

fn load_fixture(args: &FixtureArgs) -> Result<Fixture> {
    let mut table = IntegralTable::from_file(&args.fcidump)?;
    if let Some(threshold) = args.threshold {
        table = table.thresholded(threshold);
    }
    let group = match &args.group {
        Some(name) => {
            let g = PointGroup::from_name(name)?;
            g.validate_orbsym(&table.orbsym)?;
            Some(g)
        }
        None => None,
    };
    let molecule = args
        .fcidump
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| args.fcidump.display().to_string());
    Ok(Fixture {
        table,
        group,
        molecule,
    })
}

fn irrep_display(group: Option<&PointGroup>, label: IrrepLabel) -> String {
    match group {
        Some(g) => g.irrep_name(label),
        None => format!("{label}"),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_pool(args: PoolArgs) -> Result<()> {
    let fixture = load_fixture(&args.fixture)?;
    let pool = enumerate_pool(&fixture.table);
    let target = fixture.table.reference_determinant().irrep;
    let kept = filter_pool(&pool, &fixture.table, target);
    let ratio = if pool.is_empty() {
        1.0
    } else {
        kept.len() as f64 / pool.len() as f64
    };
    println!("before={} after={} ratio={:.4}", pool.len(), kept.len(), ratio);
    Ok(())
}

fn cmd_census(args: CensusArgs) -> Result<()> {
    let fixture = load_fixture(&args.fixture)?;
    let pool = enumerate_pool(&fixture.table);
    let census = irrep_census(&pool, &fixture.table);
    let mut csv = String::from("irrep,singles,doubles\n");
    let (mut ts, mut td) = (0usize, 0usize);
    for (label, (s, d)) in &census {
        let _ = writeln!(csv, "{},{},{}", irrep_display(fixture.group, *label), s, d);
        ts += s;
        td += d;
    }
    let _ = writeln!(csv, "total,{ts},{td}");
    write_output(&args.out, &csv)
}

fn filtered_pool(table: &IntegralTable, no_filter: bool) -> Vec<crate::fermionics::Excitation> {
    let pool = enumerate_pool(table);
    if no_filter {
        pool
    } else {
        filter_pool(&pool, table, table.reference_determinant().irrep)
    }
}

#[derive(Serialize)]
struct CompileReport {
    parameters: usize,
    rotations: usize,
    rz: usize,
    cnot: usize,
    depth: usize,
}

fn cmd_compile(args: CompileArgs) -> Result<()> {
    let fixture = load_fixture(&args.fixture)?;
    let pool = filtered_pool(&fixture.table, args.no_filter);
    let circuit = build_ansatz(&pool, &fixture.table)?;
    let params: Vec<f64> = match &args.params {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)
            .map_err(|e| Error::Parse(format!("bad parameter file: {e}")))?,
        None => vec![0.0; circuit.n_parameters],
    };
    std::fs::write(&args.out, circuit.to_qasm(&params)?)?;
    let r = resource_report(&circuit);
    let report = CompileReport {
        parameters: r.parameters,
        rotations: r.rotations,
        rz: r.rz,
        cnot: r.cnot,
        depth: r.depth,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}

#[derive(Serialize)]
struct VqeJsonReport {
    molecule: String,
    n_qubits: usize,
    group: Option<String>,
    params_before: usize,
    params_after: usize,
    e_hf: f64,
    e_fci: Option<f64>,
    e_final: f64,
    delta_fci: Option<f64>,
    delta_unfiltered: Option<f64>,
    converged: bool,
    iterations: Vec<IterationRecord>,
}

fn cmd_vqe(args: VqeArgs) -> Result<()> {
    if args.adapt {
        return cmd_adapt(AdaptArgs {
            fixture: args.fixture,
            no_filter: args.no_filter,
            epsilon: args.epsilon,
            tol: args.tol,
            max_iter: args.max_iter,
            out: args.out,
        });
    }
    let fixture = load_fixture(&args.fixture)?;
    let table = &fixture.table;
    let options = VqeOptions {
        max_iter: args.max_iter,
        tol: args.tol,
    };
    let hamiltonian = qubit_hamiltonian(table)?;
    let reference = table.reference_determinant();
    let state0 = prepare_reference(table.n_qubits(), &reference)?;
    let pool = enumerate_pool(table);
    let working_pool = if args.no_filter {
        pool.clone()
    } else {
        filter_pool(&pool, table, reference.irrep)
    };
    let circuit = build_ansatz(&working_pool, table)?;
    let report = vqe_minimize(&circuit, &hamiltonian, &state0, options)?;
    let e_fci = if table.n_qubits() <= 16 {
        Some(fci_solve(&hamiltonian, table.n_electrons, 0)?.0)
    } else {
        None
    };
    let delta_unfiltered = if args.compare_unfiltered && !args.no_filter {
        let baseline = build_ansatz(&pool, table)?;
        let base_report = vqe_minimize(&baseline, &hamiltonian, &state0, options)?;
        Some(report.final_energy - base_report.final_energy)
    } else {
        None
    };
    let json = VqeJsonReport {
        molecule: fixture.molecule,
        n_qubits: table.n_qubits(),
        group: fixture.group.map(|g| g.name.to_string()),
        params_before: pool.len(),
        params_after: working_pool.len(),
        e_hf: table.hf_energy(),
        e_fci,
        e_final: report.final_energy,
        delta_fci: e_fci.map(|f| report.final_energy - f),
        delta_unfiltered,
        converged: report.converged,
        iterations: report.iterations,
    };
    let text = serde_json::to_string_pretty(&json).expect("serializable");
    write_output(&args.out, &format!("{text}\n"))
}

#[derive(Serialize)]
struct AdaptJsonReport {
    molecule: String,
    n_qubits: usize,
    group: Option<String>,
    pool_size: usize,
    epsilon: f64,
    n_selected: usize,
    selected: Vec<String>,
    e_hf: f64,
    e_fci: Option<f64>,
    e_final: f64,
    delta_fci: Option<f64>,
    rounds: Vec<AdaptRound>,
}

fn cmd_adapt(args: AdaptArgs) -> Result<()> {
    let fixture = load_fixture(&args.fixture)?;
    let table = &fixture.table;
    let options = VqeOptions {
        max_iter: args.max_iter,
        tol: args.tol,
    };
    let hamiltonian = qubit_hamiltonian(table)?;
    let reference = table.reference_determinant();
    let state0 = prepare_reference(table.n_qubits(), &reference)?;
    let pool = filtered_pool(table, args.no_filter);
    let report = adapt_vqe(&pool, table, &hamiltonian, &state0, args.epsilon, options)?;
    let e_fci = if table.n_qubits() <= 16 {
        Some(fci_solve(&hamiltonian, table.n_electrons, 0)?.0)
    } else {
        None
    };
    let json = AdaptJsonReport {
        molecule: fixture.molecule,
        n_qubits: table.n_qubits(),
        group: fixture.group.map(|g| g.name.to_string()),
        pool_size: report.pool_size,
        epsilon: args.epsilon,
        n_selected: report.selected.len(),
        selected: report.selected.iter().map(|e| e.describe()).collect(),
        e_hf: table.hf_energy(),
        e_fci,
        e_final: report.final_energy,
        delta_fci: e_fci.map(|f| report.final_energy - f),
        rounds: report.rounds,
    };
    let text = serde_json::to_string_pretty(&json).expect("serializable");
    write_output(&args.out, &format!("{text}\n"))
}

#[derive(Serialize)]
struct FciJsonReport {
    molecule: String,
    n_qubits: usize,
    sector_dimension: usize,
    e_hf: f64,
    e_fci: f64,
}

fn cmd_fci(args: FciArgs) -> Result<()> {
    let fixture = load_fixture(&args.fixture)?;
    let table = &fixture.table;
    let hamiltonian = qubit_hamiltonian(table)?;
    let (energy, _) = fci_solve(&hamiltonian, table.n_electrons, 0)?;
    let json = FciJsonReport {
        molecule: fixture.molecule,
        n_qubits: table.n_qubits(),
        sector_dimension: sector_dimension(table.n_spatial, table.n_electrons),
        e_hf: table.hf_energy(),
        e_fci: energy,
    };
    let text = serde_json::to_string_pretty(&json).expect("serializable");
    write_output(&args.out, &format!("{text}\n"))
}

fn cmd_scan(args: ScanArgs) -> Result<()> {
    let method = match args.method.to_ascii_lowercase().as_str() {
        "vqe" => ScanMethod::Vqe,
        "fci" => ScanMethod::Fci,
        other => {
            return Err(Error::ContractViolation(format!(
                "unknown scan method {other}; expected vqe or fci"
            )))
        }
    };
    let options = VqeOptions {
        max_iter: args.max_iter,
        tol: args.tol,
    };
    let rows = pes_scan(&args.fcidump, method, !args.no_filter, options);
    let mut csv = String::from("label,energy,error\n");
    for row in &rows {
        let energy = row
            .energy
            .map(|e| format!("{e:.12}"))
            .unwrap_or_default();
        let error = row.error.clone().unwrap_or_default();
        let _ = writeln!(csv, "{},{},{}", row.label, energy, error);
    }
    write_output(&args.out, &csv)
}

fn parse_float_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn cmd_noise_sweep(args: NoiseSweepArgs) -> Result<()> {
    let fixture = load_fixture(&args.fixture)?;
    let table = &fixture.table;
    let hamiltonian = qubit_hamiltonian(table)?;
    let reference = table.reference_determinant();
    let state0 = prepare_reference(table.n_qubits(), &reference)?;
    let pool = filtered_pool(table, args.no_filter);
    let circuit = build_ansatz(&pool, table)?;
    let options = VqeOptions {
        max_iter: args.max_iter,
        tol: args.tol,
    };
    // optimize noiselessly, then measure the optimum under noise
    let vqe = vqe_minimize(&circuit, &hamiltonian, &state0, options)?;
    let params = vqe.final_params.clone();
    let p2_list = parse_float_list(&args.p2, "p2")?;
    let fold_factors: Vec<usize> = parse_float_list(&args.fold, "fold")?
        .into_iter()
        .map(|f| f as usize)
        .collect();
    let mut csv = String::from("p,shots,e_mean,e_stderr,e_zne\n");
    for &p2 in &p2_list {
        let noise = NoiseSpec {
            p1: args.p1,
            p2,
            shots: args.shots,
            trajectories: args.trajectories,
            fold_factors: fold_factors.clone(),
        };
        let (mean, stderr) = noisy_energy_folded(
            &params,
            &circuit,
            &hamiltonian,
            &state0,
            &noise,
            args.seed,
            1,
        )?;
        let zne = if args.zne {
            let mut points = Vec::new();
            for &f in &noise.fold_factors {
                let (e, _) = noisy_energy_folded(
                    &params,
                    &circuit,
                    &hamiltonian,
                    &state0,
                    &noise,
                    args.seed,
                    f,
                )?;
                points.push((f as f64, e));
            }
            Some(zne_extrapolate(&points)?)
        } else {
            None
        };
        let zne_text = zne.map(|z| format!("{z:.12}")).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{:.12},{:.12},{}",
            p2, args.shots, mean, stderr, zne_text
        );
    }
    write_output(&args.out, &csv)
}

fn cmd_subgroup_scan(args: SubgroupScanArgs) -> Result<()> {
    let fixture = load_fixture(&args.fixture)?;
    let mut groups = Vec::new();
    for spec in &args.orbsym {
        let (name, path) = spec.split_once('=').ok_or_else(|| {
            Error::Parse(format!("expected GROUP=PATH, got {spec:?}"))
        })?;
        let group = PointGroup::from_name(name)?;
        let text = std::fs::read_to_string(path)?;
        let labels: Vec<u8> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u8>()
                    .map_err(|_| Error::Parse(format!("bad orbsym label {t:?} in {path}")))
            })
            .collect::<Result<_>>()?;
        groups.push((group, labels));
    }
    let results = subgroup_scan(&fixture.table, &groups)?;
    let pool_size = enumerate_pool(&fixture.table).len();
    let mut csv = String::from("group,order,survivors,ratio\n");
    for (group, survivors) in results {
        let ratio = if pool_size == 0 {
            1.0
        } else {
            survivors as f64 / pool_size as f64
        };
        let _ = writeln!(csv, "{},{},{},{:.4}", group.name, group.order, survivors, ratio);
    }
    write_output(&args.out, &csv)
}
