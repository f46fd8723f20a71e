//! Gauge quantum computation simulator.
//!
//! Quantum states are encoded as noncommutative connections on a finite
//! spectral triple; unitary gates act as gauge transforms. The crate
//! provides the encoding, gauge dynamics, the circuit model with an
//! independent state-vector reference simulator, and the Deutsch-Jozsa
//! algorithm in gauge form.

pub mod circuit;
pub mod deutsch_jozsa;
pub mod dynamics;
pub mod error;
pub mod gauge;
pub mod linalg;
pub mod report;
pub mod spectral;

pub use circuit::{
    compile_circuit, gauge_readout, projector_of, run_gauge_computation, statevector_oracle,
    CircuitFile, GateSpec, NamedGate, QuantumCircuit, ReadoutSpec,
};
pub use deutsch_jozsa::{
    build_oracle_unitary, deutsch_jozsa, hadamard_layer, DeutschJozsaOutcome, OracleSpec, Verdict,
};
pub use dynamics::{evolve_closed, evolve_ode};
pub use error::GaugeError;
pub use gauge::{
    encode_state, gauge_transform, measure_probability, Connection, EventProjector, GaugeState,
};
pub use linalg::{
    commutator, embed_gate, expm_unitary, tensor, ComplexMatrix, HermitianOperator, StateVector,
    UnitaryOperator, C64,
};
pub use spectral::{single_qubit_triple, standard_qubit_triple, SpectralTriple};
