//! Command-line front end: reference-example verification, circuit runs,
//! Deutsch-Jozsa runs and dynamics runs. Machine-readable JSON goes to
//! stdout, a human summary to stderr.
//!
//! Exit codes: 0 success, 2 input/parse error, 3 validation error,
//! 4 numerical check failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::Value;

use gauge_qc::circuit::CircuitFile;
use gauge_qc::deutsch_jozsa::{
    deutsch_jozsa, deutsch_jozsa_gauge_state, deutsch_jozsa_statevector, theoretical_probability,
    OracleSpec,
};
use gauge_qc::dynamics::{default_steps, evolve_closed, evolve_ode};
use gauge_qc::gauge::{encode_state, gauge_transform};
use gauge_qc::linalg::{pauli_x, pauli_y, pauli_z, ComplexMatrix, HermitianOperator, StateVector, UnitaryOperator, C64};
use gauge_qc::report::{digest, matrix, num, vector, Check, RunReport};
use gauge_qc::spectral::{standard_qubit_triple, SpectralTriple};
use gauge_qc::{
    gauge_readout, run_gauge_computation, statevector_oracle, GaugeError, ReadoutSpec,
};

#[derive(Parser)]
#[command(name = "gauge-qc", version, about = "Gauge quantum computation simulator")]
struct Cli {
    /// Seed echoed into reports; reserved for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the built-in single-qubit example: six gauge-state matrices
    /// and the two-preparation coincidence.
    VerifyPaper {
        /// Perturb one recomputed matrix (negative-control test hook).
        #[arg(long, hide = true)]
        inject_error: bool,
    },
    /// Run a circuit file through the gauge model and the state-vector
    /// reference, reporting both readouts and their gap.
    Run {
        /// Circuit JSON file: {"qubits", "gates", "readout"?}.
        #[arg(long)]
        circuit: PathBuf,
        /// Initial basis state as a bitstring (default all zeros).
        #[arg(long)]
        input: Option<String>,
        /// Dirac operator: "standard", "standard:N", or a triple JSON file.
        #[arg(long, default_value = "standard")]
        dirac: String,
    },
    /// Run Deutsch-Jozsa in gauge form.
    Dj {
        /// Input bit-width (required with --oracle).
        #[arg(long)]
        n: Option<usize>,
        /// Builtin oracle: constant0, constant1, balanced-parity,
        /// balanced-firstbit.
        #[arg(long, conflicts_with = "oracle_file")]
        oracle: Option<String>,
        /// Oracle JSON file: {"n": k, "table": [...]}.
        #[arg(long)]
        oracle_file: Option<PathBuf>,
        /// Dirac operator: "standard", "standard:N", or a triple JSON file.
        #[arg(long, default_value = "standard")]
        dirac: String,
        /// Second Dirac operator; when given, the run is repeated and the
        /// probabilities are checked to coincide.
        #[arg(long)]
        alt_dirac: Option<String>,
    },
    /// Evolve a gauge state under a Hamiltonian: closed form vs RK4.
    Evolve {
        /// Hamiltonian JSON file: row-major [re,im] matrix.
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Evolution time.
        #[arg(long)]
        t: f64,
        /// RK4 step count (default 1000·max(1,|t|)).
        #[arg(long)]
        steps: Option<usize>,
        /// Initial basis state as a bitstring (default all zeros).
        #[arg(long)]
        input: Option<String>,
        /// Dirac operator: "standard", "standard:N", or a triple JSON file.
        #[arg(long, default_value = "standard")]
        dirac: String,
    },
}

enum CliError {
    /// Unreadable or unparseable input: exit 2.
    Parse(String),
    /// Well-formed input failing a domain validation: exit 3.
    Validation(String),
}

impl From<GaugeError> for CliError {
    fn from(e: GaugeError) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8], what: &str) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse(format!("invalid {what}: {e}")))
}

/// "standard", "standard:N", or a path to a triple JSON file.
fn load_triple(spec: &str, expected_dim: usize) -> Result<SpectralTriple, CliError> {
    let triple = if spec == "standard" {
        let n = expected_dim.trailing_zeros() as usize;
        if expected_dim != 1usize << n {
            return Err(CliError::Validation(format!(
                "dimension {expected_dim} is not a power of two; pass an explicit Dirac file"
            )));
        }
        standard_qubit_triple(n)?
    } else if let Some(n) = spec.strip_prefix("standard:") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Parse(format!("bad qubit count in {spec:?}")))?;
        standard_qubit_triple(n)?
    } else {
        parse_json(&read_file(Path::new(spec))?, "triple file")?
    };
    if triple.dim() != expected_dim {
        return Err(CliError::Validation(format!(
            "Dirac operator dimension {} does not match required dimension {expected_dim}",
            triple.dim()
        )));
    }
    Ok(triple)
}

/// Basis state from a bitstring, qubit 0 first; default all zeros.
fn parse_input_state(input: Option<&str>, n: usize) -> Result<StateVector, CliError> {
    let index = match input {
        None => 0,
        Some(bits) => {
            if bits.len() != n {
                return Err(CliError::Validation(format!(
                    "input bitstring {bits:?} must have {n} bit(s)"
                )));
            }
            bits.chars().try_fold(0usize, |acc, c| match c {
                '0' => Ok(acc << 1),
                '1' => Ok((acc << 1) | 1),
                _ => Err(CliError::Validation(format!(
                    "input bitstring {bits:?} may contain only 0 and 1"
                ))),
            })?
        }
    };
    Ok(StateVector::basis(1 << n, index)?)
}

fn cmd_verify_paper(inject_error: bool) -> Result<RunReport, CliError> {
    let triple = standard_qubit_triple(1)?;
    let zero = StateVector::basis(2, 0)?;
    let one = StateVector::basis(2, 1)?;
    let v0 = encode_state(&zero, &triple)?;
    let v1 = encode_state(&one, &triple)?;
    let u = |m: ComplexMatrix| UnitaryOperator::new(m).map_err(CliError::from);
    let gx0 = gauge_transform(&v0, &u(pauli_x())?)?;
    let gy0 = gauge_transform(&v0, &u(pauli_y())?)?;
    let gz0 = gauge_transform(&v0, &u(pauli_z())?)?;
    let gy1 = gauge_transform(&v1, &u(pauli_y())?)?;

    let expect = |entries: &[f64; 4]| ComplexMatrix::from_real(2, 2, entries).unwrap();
    let mut cases = vec![
        ("V(|0>)", v0.value().matrix().clone(), expect(&[1.0, 0.0, 0.0, 0.0])),
        ("G_sigma_x(V(|0>))", gx0.value().matrix().clone(), expect(&[0.0, 0.0, 0.0, 1.0])),
        ("G_sigma_y(V(|0>))", gy0.value().matrix().clone(), expect(&[0.0, -2.0, -2.0, 1.0])),
        ("G_sigma_z(V(|0>))", gz0.value().matrix().clone(), expect(&[1.0, -2.0, -2.0, 0.0])),
        ("V(|1>)", v1.value().matrix().clone(), expect(&[0.0, 0.0, 0.0, 1.0])),
        ("G_sigma_y(V(|1>))", gy1.value().matrix().clone(), expect(&[1.0, -2.0, -2.0, 0.0])),
    ];
    if inject_error {
        let mut perturbed = cases[0].1.clone();
        perturbed.set(0, 0, perturbed.get(0, 0) + C64::new(1e-6, 0.0));
        cases[0].1 = perturbed;
    }

    let mut report = RunReport::new("verify-paper");
    report.input("inject_error", Value::Bool(inject_error));
    for (name, got, want) in &cases {
        report.result(name.to_string(), matrix(got));
        report.check(Check::new(*name, got.sub(want)?.max_norm(), 1e-12));
    }
    let coincidence = gy1
        .value()
        .matrix()
        .sub(gz0.value().matrix())?
        .max_norm();
    report.check(Check::new(
        "two-preparation coincidence G_sigma_y(V(|1>)) = G_sigma_z(V(|0>))",
        coincidence,
        1e-12,
    ));
    Ok(report)
}

fn cmd_run(circuit: &Path, input: Option<&str>, dirac: &str) -> Result<RunReport, CliError> {
    let bytes = read_file(circuit)?;
    let file: CircuitFile = parse_json(&bytes, "circuit file")?;
    let n = file.circuit.qubits();
    let psi0 = parse_input_state(input, n)?;
    let triple = load_triple(dirac, 1 << n)?;
    let readout = file.readout.clone().unwrap_or_else(ReadoutSpec::first_qubit_one);

    let gs = run_gauge_computation(&file.circuit, &psi0, &triple)?;
    let gauge_p = gauge_readout(&gs, &readout)?;
    let oracle_p = statevector_oracle(&file.circuit, &psi0, &readout)?;

    let mut report = RunReport::new("run");
    report.input("circuit_digest", Value::String(digest(&bytes)));
    report.input("qubits", Value::from(n));
    report.input("gate_count", Value::from(file.circuit.gates().len()));
    report.result("gauge_probability", num(gauge_p));
    report.result("oracle_probability", num(oracle_p));
    report.result("gap", num((gauge_p - oracle_p).abs()));
    report.result(
        "gauge_state",
        serde_json::to_value(&gs).map_err(|e| CliError::Validation(e.to_string()))?,
    );
    report.check(Check::new(
        "gauge readout matches state-vector reference",
        (gauge_p - oracle_p).abs(),
        1e-10,
    ));
    Ok(report)
}

fn cmd_dj(
    n: Option<usize>,
    oracle: Option<&str>,
    oracle_file: Option<&Path>,
    dirac: &str,
    alt_dirac: Option<&str>,
) -> Result<RunReport, CliError> {
    let (oracle_label, oracle) = match (oracle, oracle_file) {
        (Some(name), None) => {
            let n = n.ok_or_else(|| {
                CliError::Validation("--n is required with a builtin --oracle".into())
            })?;
            (name.to_string(), OracleSpec::builtin(name, n)?)
        }
        (None, Some(path)) => {
            let spec: OracleSpec = parse_json(&read_file(path)?, "oracle file")?;
            if let Some(n) = n {
                if n != spec.bits() {
                    return Err(CliError::Validation(format!(
                        "--n {n} conflicts with oracle file bit-width {}",
                        spec.bits()
                    )));
                }
            }
            (format!("file:{}", path.display()), spec)
        }
        _ => {
            return Err(CliError::Validation(
                "exactly one of --oracle or --oracle-file is required".into(),
            ))
        }
    };
    let n = oracle.bits();
    let triple = load_triple(dirac, 1 << (n + 1))?;
    let outcome = deutsch_jozsa(&oracle, &triple)?;
    let reference = deutsch_jozsa_statevector(&oracle)?;
    let theory = theoretical_probability(&oracle);

    let mut report = RunReport::new("dj");
    report.input("oracle", Value::String(oracle_label));
    report.input("dirac", Value::String(dirac.to_string()));
    report.result("n", Value::from(n));
    report.result(
        "oracle",
        serde_json::to_value(&oracle).map_err(|e| CliError::Validation(e.to_string()))?,
    );
    report.result("probability", num(outcome.probability));
    report.result(
        "verdict",
        serde_json::to_value(outcome.verdict).map_err(|e| CliError::Validation(e.to_string()))?,
    );
    report.result("gauge_transform_count", Value::from(outcome.gauge_transform_count));
    report.check(Check::new(
        "gauge probability matches state-vector reference",
        (outcome.probability - reference).abs(),
        1e-10,
    ));
    report.check(Check::new(
        "probability matches closed-form amplitude",
        (outcome.probability - theory).abs(),
        1e-9,
    ));
    if let Some(alt) = alt_dirac {
        let alt_triple = load_triple(alt, 1 << (n + 1))?;
        let alt_outcome = deutsch_jozsa(&oracle, &alt_triple)?;
        report.result("alt_dirac_probability", num(alt_outcome.probability));
        report.check(Check::new(
            "probability independent of Dirac operator",
            (outcome.probability - alt_outcome.probability).abs(),
            1e-12,
        ));
        // The readout only sees provenance, but the gauge states themselves
        // differ unless the Dirac operators coincide.
        let _ = deutsch_jozsa_gauge_state(&oracle, &alt_triple)?;
    }
    Ok(report)
}

fn cmd_evolve(
    hamiltonian: &Path,
    t: f64,
    steps: Option<usize>,
    input: Option<&str>,
    dirac: &str,
) -> Result<RunReport, CliError> {
    let bytes = read_file(hamiltonian)?;
    let raw: ComplexMatrix = parse_json(&bytes, "Hamiltonian file")?;
    let h = HermitianOperator::new(raw)?;
    let dim = h.dim();
    let triple = load_triple(dirac, dim)?;
    let n = dim.trailing_zeros() as usize;
    if dim != 1 << n {
        return Err(CliError::Validation(format!(
            "Hamiltonian dimension {dim} is not a power of two"
        )));
    }
    let psi0 = parse_input_state(input, n)?;
    let steps = steps.unwrap_or_else(|| default_steps(t));

    let gs = encode_state(&psi0, &triple)?;
    let closed = evolve_closed(&gs, &h, t)?;
    let integrated = evolve_ode(&gs, &h, t, steps)?;
    let gap = integrated.matrix().sub(closed.value().matrix())?.max_norm();

    // Group-law spot check: two half-steps equal one full step.
    let half = evolve_closed(&evolve_closed(&gs, &h, t / 2.0)?, &h, t / 2.0)?;
    let group_gap = half.value().matrix().sub(closed.value().matrix())?.max_norm();

    let mut report = RunReport::new("evolve");
    report.input("hamiltonian_digest", Value::String(digest(&bytes)));
    report.input("t", num(t));
    report.input("steps", Value::from(steps));
    report.result("closed_form", matrix(closed.value().matrix()));
    report.result("rk4", matrix(integrated.matrix()));
    report.result("gap", num(gap));
    report.result("initial_state", vector(&psi0));
    report.check(Check::new("RK4 matches closed form", gap, 1e-6));
    report.check(Check::new("group law at t/2", group_gap, 1e-10));
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::VerifyPaper { inject_error } => cmd_verify_paper(*inject_error),
        Command::Run { circuit, input, dirac } => cmd_run(circuit, input.as_deref(), dirac),
        Command::Dj {
            n,
            oracle,
            oracle_file,
            dirac,
            alt_dirac,
        } => cmd_dj(
            *n,
            oracle.as_deref(),
            oracle_file.as_deref(),
            dirac,
            alt_dirac.as_deref(),
        ),
        Command::Evolve {
            hamiltonian,
            t,
            steps,
            input,
            dirac,
        } => cmd_evolve(hamiltonian, *t, *steps, input.as_deref(), dirac),
    };
    match outcome {
        Ok(report) => {
            let json = report.finish();
            println!("{}", serde_json::to_string_pretty(&json).expect("report serializes"));
            eprint!("{}", report.summary(start.elapsed().as_secs_f64()));
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
