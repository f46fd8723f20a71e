//! The standard quantum circuit model and its gauge counterpart, plus an
//! independent state-vector simulator used for differential testing.
//!
//! The gauge path composes dense matrices and gauge transforms; the oracle
//! path walks amplitudes gate by gate and never forms the circuit unitary,
//! so a matrix-composition bug cannot cancel in both.

use serde::{Deserialize, Serialize};

use crate::error::{GaugeError, Result};
use crate::gauge::{
    encode_state, gauge_transform, measure_probability, EventProjector, GaugeState,
};
use crate::linalg::{
    embed_gate, hadamard, pauli_x, pauli_y, pauli_z, ComplexMatrix, HermitianOperator,
    StateVector, UnitaryOperator, C64,
};
use crate::spectral::SpectralTriple;

/// Gate vocabulary of the circuit model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedGate {
    X,
    Y,
    Z,
    H,
    S,
    T,
    CNOT,
    CZ,
    SWAP,
}

pub const SUPPORTED_GATES: [&str; 9] = ["X", "Y", "Z", "H", "S", "T", "CNOT", "CZ", "SWAP"];

impl NamedGate {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "X" => Ok(Self::X),
            "Y" => Ok(Self::Y),
            "Z" => Ok(Self::Z),
            "H" => Ok(Self::H),
            "S" => Ok(Self::S),
            "T" => Ok(Self::T),
            "CNOT" => Ok(Self::CNOT),
            "CZ" => Ok(Self::CZ),
            "SWAP" => Ok(Self::SWAP),
            other => Err(GaugeError::Validation(format!(
                "unknown gate name {other:?}; supported gates: {}",
                SUPPORTED_GATES.join(", ")
            ))),
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Self::X | Self::Y | Self::Z | Self::H | Self::S | Self::T => 1,
            Self::CNOT | Self::CZ | Self::SWAP => 2,
        }
    }

    /// Standard matrix; for CNOT the first target is the control.
    pub fn matrix(self) -> ComplexMatrix {
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let zero = C64::new(0.0, 0.0);
        match self {
            Self::X => pauli_x(),
            Self::Y => pauli_y(),
            Self::Z => pauli_z(),
            Self::H => hadamard(),
            Self::S => ComplexMatrix::new(2, 2, vec![one, zero, zero, i]).unwrap(),
            Self::T => ComplexMatrix::new(
                2,
                2,
                vec![one, zero, zero, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
            )
            .unwrap(),
            Self::CNOT => ComplexMatrix::from_real(
                4,
                4,
                &[
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 1.0, 0.0, 0.0, //
                    0.0, 0.0, 0.0, 1.0, //
                    0.0, 0.0, 1.0, 0.0,
                ],
            )
            .unwrap(),
            Self::CZ => ComplexMatrix::from_real(
                4,
                4,
                &[
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 1.0, 0.0, 0.0, //
                    0.0, 0.0, 1.0, 0.0, //
                    0.0, 0.0, 0.0, -1.0,
                ],
            )
            .unwrap(),
            Self::SWAP => ComplexMatrix::from_real(
                4,
                4,
                &[
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 0.0, 1.0, 0.0, //
                    0.0, 1.0, 0.0, 0.0, //
                    0.0, 0.0, 0.0, 1.0,
                ],
            )
            .unwrap(),
        }
    }
}

/// One gate application: a named gate or an explicit unitary matrix, with
/// its target qubits (1 or 2, distinct). The first listed target of a
/// two-qubit gate is the more significant factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    kind: GateKind,
    targets: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    Named(NamedGate),
    Explicit(UnitaryOperator),
}

impl GateSpec {
    pub fn named(gate: NamedGate, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != gate.arity() {
            return Err(GaugeError::Validation(format!(
                "gate {gate:?} acts on {} qubit(s), got {} target(s)",
                gate.arity(),
                targets.len()
            )));
        }
        Self::check_targets(&targets)?;
        Ok(Self {
            kind: GateKind::Named(gate),
            targets,
        })
    }

    /// Explicit 2x2 or 4x4 unitary.
    pub fn explicit(matrix: ComplexMatrix, targets: Vec<usize>) -> Result<Self> {
        let expected = match targets.len() {
            1 => 2,
            2 => 4,
            k => {
                return Err(GaugeError::Validation(format!(
                    "explicit gates act on 1 or 2 qubits, got {k} target(s)"
                )))
            }
        };
        if matrix.rows() != expected || matrix.cols() != expected {
            return Err(GaugeError::Shape(format!(
                "explicit gate on {} target(s) must be {expected}x{expected}",
                targets.len()
            )));
        }
        Self::check_targets(&targets)?;
        Ok(Self {
            kind: GateKind::Explicit(UnitaryOperator::new(matrix)?),
            targets,
        })
    }

    fn check_targets(targets: &[usize]) -> Result<()> {
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(GaugeError::Validation("duplicate target qubits".into()));
        }
        Ok(())
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn unitary_matrix(&self) -> ComplexMatrix {
        match &self.kind {
            GateKind::Named(g) => g.matrix(),
            GateKind::Explicit(u) => u.matrix().clone(),
        }
    }
}

/// Wire format for one gate: {"name": "...", "targets": [...]} or
/// {"matrix": [...], "targets": [...]}.
#[derive(Serialize, Deserialize)]
struct GateRepr {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<ComplexMatrix>,
    targets: Vec<usize>,
}

impl Serialize for GateSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match &self.kind {
            GateKind::Named(g) => GateRepr {
                name: Some(format!("{g:?}")),
                matrix: None,
                targets: self.targets.clone(),
            },
            GateKind::Explicit(u) => GateRepr {
                name: None,
                matrix: Some(u.matrix().clone()),
                targets: self.targets.clone(),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GateSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let repr = GateRepr::deserialize(deserializer)?;
        match (repr.name, repr.matrix) {
            (Some(name), None) => {
                let gate = NamedGate::parse(&name).map_err(D::Error::custom)?;
                GateSpec::named(gate, repr.targets).map_err(D::Error::custom)
            }
            (None, Some(matrix)) => {
                GateSpec::explicit(matrix, repr.targets).map_err(D::Error::custom)
            }
            _ => Err(D::Error::custom(
                "gate must have exactly one of \"name\" or \"matrix\"",
            )),
        }
    }
}

/// Ordered gate list over n qubits; the first listed gate is applied first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumCircuit {
    #[serde(rename = "qubits")]
    n: usize,
    gates: Vec<GateSpec>,
}

impl QuantumCircuit {
    pub fn new(n: usize, gates: Vec<GateSpec>) -> Result<Self> {
        if n == 0 {
            return Err(GaugeError::Validation("qubit count must be at least 1".into()));
        }
        for g in &gates {
            if let Some(&t) = g.targets().iter().find(|&&t| t >= n) {
                return Err(GaugeError::Validation(format!(
                    "gate target {t} out of range for {n} qubits"
                )));
            }
        }
        Ok(Self { n, gates })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[GateSpec] {
        &self.gates
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }
}

#[derive(Deserialize)]
struct CircuitRepr {
    qubits: usize,
    gates: Vec<GateSpec>,
}

impl<'de> Deserialize<'de> for QuantumCircuit {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CircuitRepr::deserialize(deserializer)?;
        QuantumCircuit::new(repr.qubits, repr.gates).map_err(D::Error::custom)
    }
}

/// Readout pattern: require the listed qubits to hold the listed bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadoutSpec {
    qubits: Vec<usize>,
    bits: Vec<u8>,
}

impl ReadoutSpec {
    pub fn new(qubits: Vec<usize>, bits: Vec<u8>) -> Result<Self> {
        if qubits.len() != bits.len() {
            return Err(GaugeError::Validation(format!(
                "readout lists {} qubit(s) but {} bit(s)",
                qubits.len(),
                bits.len()
            )));
        }
        for (i, &q) in qubits.iter().enumerate() {
            if qubits[..i].contains(&q) {
                return Err(GaugeError::Validation(format!("duplicate readout qubit {q}")));
            }
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(GaugeError::Validation(format!("readout bit {b} is not 0 or 1")));
        }
        Ok(Self { qubits, bits })
    }

    /// Π₁ of the circuit model: qubit 0 observed as |1⟩.
    pub fn first_qubit_one() -> Self {
        Self::new(vec![0], vec![1]).unwrap()
    }

    /// All of the first k qubits observed as |0⟩.
    pub fn leading_zeros(k: usize) -> Self {
        Self::new((0..k).collect(), vec![0; k]).unwrap()
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    fn matches_index(&self, index: usize, n: usize) -> bool {
        self.qubits
            .iter()
            .zip(&self.bits)
            .all(|(&q, &b)| ((index >> (n - 1 - q)) & 1) as u8 == b)
    }
}

impl<'de> Deserialize<'de> for ReadoutSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        struct Repr {
            qubits: Vec<usize>,
            bits: Vec<u8>,
        }
        let repr = Repr::deserialize(deserializer)?;
        ReadoutSpec::new(repr.qubits, repr.bits).map_err(D::Error::custom)
    }
}

/// Circuit file: {"qubits": n, "gates": [...], "readout": {...}}.
#[derive(Debug, Clone)]
pub struct CircuitFile {
    pub circuit: QuantumCircuit,
    pub readout: Option<ReadoutSpec>,
}

impl Serialize for CircuitFile {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("CircuitFile", 3)?;
        s.serialize_field("qubits", &self.circuit.qubits())?;
        s.serialize_field("gates", &self.circuit.gates())?;
        if let Some(r) = &self.readout {
            s.serialize_field("readout", r)?;
        }
        s.end()
    }
}

impl<'de> Deserialize<'de> for CircuitFile {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        struct Repr {
            qubits: usize,
            gates: Vec<GateSpec>,
            #[serde(default)]
            readout: Option<ReadoutSpec>,
        }
        let repr = Repr::deserialize(deserializer)?;
        Ok(CircuitFile {
            circuit: QuantumCircuit::new(repr.qubits, repr.gates).map_err(D::Error::custom)?,
            readout: repr.readout,
        })
    }
}

/// The circuit unitary: the ordered product of embedded gates with the
/// last gate leftmost.
pub fn compile_circuit(c: &QuantumCircuit) -> Result<UnitaryOperator> {
    let mut gamma = ComplexMatrix::identity(c.dim());
    for gate in c.gates() {
        let embedded = embed_gate(&gate.unitary_matrix(), gate.targets(), c.qubits())?;
        gamma = embedded.mul(&gamma)?;
    }
    UnitaryOperator::new(gamma)
}

/// Tensor of |b⟩⟨b| on the listed qubits and identity elsewhere.
pub fn projector_of(r: &ReadoutSpec, n: usize) -> Result<EventProjector> {
    if let Some(&q) = r.qubits().iter().find(|&&q| q >= n) {
        return Err(GaugeError::Shape(format!(
            "readout qubit {q} out of range for {n} qubits"
        )));
    }
    let dim = 1usize << n;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        if r.matches_index(i, n) {
            m.set(i, i, C64::new(1.0, 0.0));
        }
    }
    EventProjector::new(HermitianOperator::new(m)?)
}

/// Encode the initial state and apply each gate as a gauge transform.
pub fn run_gauge_computation(
    c: &QuantumCircuit,
    psi0: &StateVector,
    triple: &SpectralTriple,
) -> Result<GaugeState> {
    if triple.dim() != c.dim() {
        return Err(GaugeError::Shape(format!(
            "triple dimension {} does not match {}-qubit circuit",
            triple.dim(),
            c.qubits()
        )));
    }
    let mut gs = encode_state(psi0, triple)?;
    for gate in c.gates() {
        let u = UnitaryOperator::new(embed_gate(&gate.unitary_matrix(), gate.targets(), c.qubits())?)?;
        gs = gauge_transform(&gs, &u)?;
    }
    Ok(gs)
}

/// Readout on a gauge state through its provenance.
pub fn gauge_readout(gs: &GaugeState, r: &ReadoutSpec) -> Result<f64> {
    let dim = gs.triple().dim();
    let n = dim.trailing_zeros() as usize;
    if dim != 1usize << n {
        return Err(GaugeError::Shape(format!(
            "gauge state dimension {dim} is not a power of two"
        )));
    }
    measure_probability(gs, &projector_of(r, n)?)
}

fn apply_gate_to_amplitudes(
    amps: &mut [C64],
    gate: &ComplexMatrix,
    targets: &[usize],
    n: usize,
) {
    match targets {
        [t] => {
            let p = n - 1 - t;
            let bit = 1usize << p;
            for i in 0..amps.len() {
                if i & bit != 0 {
                    continue;
                }
                let j = i | bit;
                let (a0, a1) = (amps[i], amps[j]);
                amps[i] = gate.get(0, 0) * a0 + gate.get(0, 1) * a1;
                amps[j] = gate.get(1, 0) * a0 + gate.get(1, 1) * a1;
            }
        }
        [t0, t1] => {
            let b0 = 1usize << (n - 1 - t0);
            let b1 = 1usize << (n - 1 - t1);
            for i in 0..amps.len() {
                if i & (b0 | b1) != 0 {
                    continue;
                }
                // Sub-index: first listed target is the high bit.
                let idx = [i, i | b1, i | b0, i | b0 | b1];
                let old: Vec<C64> = idx.iter().map(|&k| amps[k]).collect();
                for (r, &k) in idx.iter().enumerate() {
                    amps[k] = (0..4).map(|c| gate.get(r, c) * old[c]).sum();
                }
            }
        }
        _ => unreachable!("gate specs are validated to 1 or 2 targets"),
    }
}

/// Independent reference: evolve the state vector gate by gate (the circuit
/// unitary is never formed) and return ‖Πψ‖² for the readout pattern.
pub fn statevector_oracle(
    c: &QuantumCircuit,
    psi0: &StateVector,
    r: &ReadoutSpec,
) -> Result<f64> {
    if psi0.dim() != c.dim() {
        return Err(GaugeError::Shape(format!(
            "state dimension {} does not match {}-qubit circuit",
            psi0.dim(),
            c.qubits()
        )));
    }
    if let Some(&q) = r.qubits().iter().find(|&&q| q >= c.qubits()) {
        return Err(GaugeError::Shape(format!(
            "readout qubit {q} out of range for {} qubits",
            c.qubits()
        )));
    }
    let mut amps = psi0.amplitudes().to_vec();
    for gate in c.gates() {
        apply_gate_to_amplitudes(&mut amps, &gate.unitary_matrix(), gate.targets(), c.qubits());
    }
    Ok(amps
        .iter()
        .enumerate()
        .filter(|(i, _)| r.matches_index(*i, c.qubits()))
        .map(|(_, a)| a.norm_sqr())
        .sum())
}
