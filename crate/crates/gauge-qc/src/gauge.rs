//! Connections on a spectral triple, encoding of pure states as
//! connections, gauge transforms, preparation provenance and projective
//! measurement.
//!
//! A gauge state is kept in the canonical form V = |wφ⟩⟨wφ| + wDw† − D,
//! with the preparation provenance (base state φ, cumulative unitary w)
//! stored explicitly: measurement probabilities are defined through the
//! preparation, so a bare matrix is not measurable.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{GaugeError, Result};
use crate::linalg::{
    commutator, ComplexMatrix, HermitianOperator, StateVector, UnitaryOperator, C64,
};
use crate::spectral::SpectralTriple;

/// Tolerance for the canonical-form identity and witness reconstruction.
const GAUGE_TOL: f64 = 1e-10;

/// A connection: a selfadjoint operator V, optionally with a decomposition
/// witness {(aⱼ, bⱼ)} such that V = Σⱼ aⱼ[D, bⱼ].
#[derive(Debug, Clone)]
pub struct Connection {
    value: HermitianOperator,
    witness: Option<Vec<(ComplexMatrix, ComplexMatrix)>>,
}

impl Connection {
    pub fn new(
        value: HermitianOperator,
        witness: Option<Vec<(ComplexMatrix, ComplexMatrix)>>,
    ) -> Self {
        Self { value, witness }
    }

    pub fn value(&self) -> &HermitianOperator {
        &self.value
    }

    pub fn witness(&self) -> Option<&[(ComplexMatrix, ComplexMatrix)]> {
        self.witness.as_deref()
    }

    /// Check the witness reconstruction Σⱼ aⱼ[D, bⱼ] against the stored
    /// value. A missing witness is an error, not `false`.
    pub fn verify(&self, triple: &SpectralTriple) -> Result<bool> {
        let witness = self.witness.as_ref().ok_or_else(|| {
            GaugeError::Unverifiable("connection carries no decomposition witness".into())
        })?;
        let n = self.value.dim();
        if n != triple.dim() {
            return Err(GaugeError::Shape(format!(
                "connection dimension {n} does not match triple dimension {}",
                triple.dim()
            )));
        }
        let d = triple.dirac().matrix();
        let mut sum = ComplexMatrix::zeros(n, n);
        for (a, b) in witness {
            sum = sum.add(&a.mul(&commutator(d, b)?)?)?;
        }
        Ok(sum.sub(self.value.matrix())?.max_norm() <= GAUGE_TOL)
    }
}

/// Idempotent selfadjoint operator representing a measurable event.
#[derive(Debug, Clone, PartialEq)]
pub struct EventProjector {
    matrix: HermitianOperator,
}

impl EventProjector {
    pub fn new(matrix: HermitianOperator) -> Result<Self> {
        let m = matrix.matrix();
        let dev = m.mul(m)?.sub(m)?.max_norm();
        if dev > GAUGE_TOL {
            return Err(GaugeError::Validation(format!(
                "operator is not idempotent (‖E²−E‖ = {dev:.3e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// A gauge state V = |wφ⟩⟨wφ| + wDw† − D with its preparation provenance.
#[derive(Debug, Clone)]
pub struct GaugeState {
    triple: SpectralTriple,
    value: HermitianOperator,
    base_state: StateVector,
    cum_unitary: UnitaryOperator,
    witness: Option<Vec<(ComplexMatrix, ComplexMatrix)>>,
}

impl GaugeState {
    /// Assemble from parts, re-validating the canonical-form identity.
    /// This is also the JSON import path.
    pub fn from_parts(
        triple: SpectralTriple,
        value: HermitianOperator,
        base_state: StateVector,
        cum_unitary: UnitaryOperator,
    ) -> Result<Self> {
        let n = triple.dim();
        if value.dim() != n || base_state.dim() != n || cum_unitary.dim() != n {
            return Err(GaugeError::Shape(format!(
                "gauge state parts do not match triple dimension {n}"
            )));
        }
        let gs = Self {
            triple,
            value,
            base_state,
            cum_unitary,
            witness: None,
        };
        gs.check_canonical()?;
        Ok(gs)
    }

    pub fn triple(&self) -> &SpectralTriple {
        &self.triple
    }

    pub fn value(&self) -> &HermitianOperator {
        &self.value
    }

    pub fn base_state(&self) -> &StateVector {
        &self.base_state
    }

    pub fn cum_unitary(&self) -> &UnitaryOperator {
        &self.cum_unitary
    }

    /// The state viewed as a connection; freshly encoded states carry an
    /// explicit decomposition witness.
    pub fn connection(&self) -> Connection {
        Connection::new(self.value.clone(), self.witness.clone())
    }

    /// The physical state wφ this gauge state was prepared into.
    fn prepared_state(&self) -> Result<StateVector> {
        self.base_state.apply(&self.cum_unitary)
    }

    fn check_canonical(&self) -> Result<()> {
        let d = self.triple.dirac().matrix();
        let w = self.cum_unitary.matrix();
        let rotated_d = w.mul(d)?.mul(&w.adjoint())?;
        let expected = self.prepared_state()?.projector().add(&rotated_d)?.sub(d)?;
        let dev = expected.sub(self.value.matrix())?.max_norm();
        if dev > GAUGE_TOL {
            return Err(GaugeError::Corruption(format!(
                "canonical-form identity violated (deviation {dev:.3e})"
            )));
        }
        Ok(())
    }

    /// Recover (ψ' = wφ, w) and re-verify V = |ψ'⟩⟨ψ'| + wDw† − D.
    pub fn canonical_form(&self) -> Result<(StateVector, UnitaryOperator)> {
        self.check_canonical()?;
        Ok((self.prepared_state()?, self.cum_unitary.clone()))
    }
}

impl Serialize for GaugeState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("GaugeState", 3)?;
        s.serialize_field("value", self.value.matrix())?;
        s.serialize_field("base_state", &self.base_state)?;
        s.serialize_field("cum_unitary", self.cum_unitary.matrix())?;
        s.end()
    }
}

/// Serialized gauge-state payload; combine with a triple via
/// [`GaugeState::from_parts`] to re-validate on import.
#[derive(Deserialize)]
pub struct GaugeStateRepr {
    pub value: HermitianOperator,
    pub base_state: StateVector,
    pub cum_unitary: UnitaryOperator,
}

impl GaugeStateRepr {
    pub fn into_gauge_state(self, triple: SpectralTriple) -> Result<GaugeState> {
        GaugeState::from_parts(triple, self.value, self.base_state, self.cum_unitary)
    }
}

/// Encode a pure state as the gauge state V = |ψ⟩⟨ψ| with identity
/// provenance, together with an explicit connection witness
/// {(i a†, b a), (−i a† b, a)} where a = |φ⟩⟨ψ| and (φ, b) are built from
/// an eigenvector pair of D with extremal eigenvalues, so that i[D, b] has
/// eigenvalue 1 at φ.
pub fn encode_state(psi: &StateVector, triple: &SpectralTriple) -> Result<GaugeState> {
    let n = triple.dim();
    if psi.dim() != n {
        return Err(GaugeError::Shape(format!(
            "state dimension {} does not match triple dimension {n}",
            psi.dim()
        )));
    }
    let i_c = C64::new(0.0, 1.0);

    // Largest-gap eigenvalue pair of D is always (lowest, highest); the
    // triple constructor guarantees the gap is nonzero.
    let (values, vectors) = triple.dirac().eigh();
    let (lo, hi) = (0, n - 1);
    let gap = values[lo] - values[hi];
    let e1: Vec<C64> = (0..n).map(|r| vectors.get(r, lo)).collect();
    let e2: Vec<C64> = (0..n).map(|r| vectors.get(r, hi)).collect();

    // b = (λ₁−λ₂)⁻¹ (|e₁⟩⟨e₂| + |e₂⟩⟨e₁|), φ = (e₁ − i e₂)/√2.
    let mut b = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            b.set(r, c, (e1[r] * e2[c].conj() + e2[r] * e1[c].conj()) / gap);
        }
    }
    let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let phi: Vec<C64> = e1
        .iter()
        .zip(&e2)
        .map(|(x, y)| (x - i_c * y) * inv_sqrt2)
        .collect();
    let phi = StateVector::new(phi)?;

    // a = |φ⟩⟨ψ|
    let mut a = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            a.set(r, c, phi.amplitudes()[r] * psi.amplitudes()[c].conj());
        }
    }
    let a_adj = a.adjoint();
    let witness = vec![
        (a_adj.scale(i_c), b.mul(&a)?),
        (a_adj.mul(&b)?.scale(-i_c), a.clone()),
    ];

    let value = HermitianOperator::new(psi.projector())?;
    let connection = Connection::new(value.clone(), Some(witness.clone()));
    if !connection.verify(triple)? {
        return Err(GaugeError::Corruption(
            "encoded-state witness failed to reconstruct the projector".into(),
        ));
    }

    let gs = GaugeState {
        triple: triple.clone(),
        value,
        base_state: psi.clone(),
        cum_unitary: UnitaryOperator::identity(n),
        witness: Some(witness),
    };
    gs.check_canonical()?;
    Ok(gs)
}

/// Apply the gauge transform G_u(V) = uVu† + u[D, u†], updating provenance:
/// the base state is unchanged and the cumulative unitary becomes u·w.
pub fn gauge_transform(gs: &GaugeState, u: &UnitaryOperator) -> Result<GaugeState> {
    let n = gs.triple.dim();
    if u.dim() != n {
        return Err(GaugeError::Shape(format!(
            "unitary dimension {} does not match triple dimension {n}",
            u.dim()
        )));
    }
    let d = gs.triple.dirac().matrix();
    let um = u.matrix();
    let rotated = um.mul(gs.value.matrix())?.mul(&um.adjoint())?;
    let gauge_term = um.mul(&commutator(d, &um.adjoint())?)?;
    let value = HermitianOperator::new(rotated.add(&gauge_term)?)?;
    let out = GaugeState {
        triple: gs.triple.clone(),
        value,
        base_state: gs.base_state.clone(),
        cum_unitary: u.compose(&gs.cum_unitary)?,
        witness: None,
    };
    out.check_canonical()?;
    Ok(out)
}

/// Probability of the event E on a gauge state, evaluated through the
/// preparation: ⟨φ| w† E w |φ⟩. Values within 1e-10 outside [0, 1] clamp to
/// the boundary; larger excursions are errors.
pub fn measure_probability(gs: &GaugeState, event: &EventProjector) -> Result<f64> {
    if event.dim() != gs.triple.dim() {
        return Err(GaugeError::Shape(format!(
            "projector dimension {} does not match triple dimension {}",
            event.dim(),
            gs.triple.dim()
        )));
    }
    let prepared = gs.prepared_state()?;
    let applied = event.matrix().mul_vec(prepared.amplitudes())?;
    let p: C64 = prepared
        .amplitudes()
        .iter()
        .zip(&applied)
        .map(|(a, b)| a.conj() * b)
        .sum();
    if p.im.abs() > 1e-10 {
        return Err(GaugeError::Validation(format!(
            "probability has non-negligible imaginary part {:.3e}",
            p.im
        )));
    }
    let p = p.re;
    if (-1e-10..0.0).contains(&p) {
        Ok(0.0)
    } else if p > 1.0 && p <= 1.0 + 1e-10 {
        Ok(1.0)
    } else if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(GaugeError::Validation(format!(
            "probability {p} outside [0, 1] beyond rounding"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        pauli_x, pauli_y, pauli_z, random_state, random_unitary, ComplexMatrix,
    };
    use crate::spectral::{single_qubit_triple, standard_qubit_triple};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit() -> SpectralTriple {
        single_qubit_triple()
    }

    fn basis(i: usize) -> StateVector {
        StateVector::basis(2, i).unwrap()
    }

    fn unitary(m: ComplexMatrix) -> UnitaryOperator {
        UnitaryOperator::new(m).unwrap()
    }

    fn real_mat(entries: &[f64; 4]) -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, entries).unwrap()
    }

    #[test]
    fn encode_basis_states() {
        let t = qubit();
        let v0 = encode_state(&basis(0), &t).unwrap();
        assert!(v0.value().matrix().sub(&real_mat(&[1.0, 0.0, 0.0, 0.0])).unwrap().max_norm() < 1e-12);
        let v1 = encode_state(&basis(1), &t).unwrap();
        assert!(v1.value().matrix().sub(&real_mat(&[0.0, 0.0, 0.0, 1.0])).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn encode_superposition_is_projector() {
        let t = qubit();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::new(vec![C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let gs = encode_state(&psi, &t).unwrap();
        assert!(gs.value().matrix().sub(&real_mat(&[0.5, 0.5, 0.5, 0.5])).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn encoded_witness_verifies() {
        let t = qubit();
        let gs = encode_state(&basis(0), &t).unwrap();
        assert!(gs.connection().verify(&t).unwrap());
    }

    #[test]
    fn zero_connection_with_empty_witness() {
        let t = qubit();
        let zero = HermitianOperator::new(ComplexMatrix::zeros(2, 2)).unwrap();
        let c = Connection::new(zero, Some(vec![]));
        assert!(c.verify(&t).unwrap());
    }

    #[test]
    fn wrong_witness_is_false_not_error() {
        let t = qubit();
        let v = HermitianOperator::new(real_mat(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        let c = Connection::new(
            v,
            Some(vec![(ComplexMatrix::identity(2), ComplexMatrix::identity(2))]),
        );
        assert!(!c.verify(&t).unwrap());
    }

    #[test]
    fn missing_witness_is_unverifiable() {
        let t = qubit();
        let v = HermitianOperator::new(real_mat(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        let c = Connection::new(v, None);
        assert!(matches!(c.verify(&t), Err(GaugeError::Unverifiable(_))));
    }

    #[test]
    fn gauge_transform_qubit_example_matrices() {
        let t = qubit();
        let v0 = encode_state(&basis(0), &t).unwrap();

        let gx = gauge_transform(&v0, &unitary(pauli_x())).unwrap();
        assert!(gx.value().matrix().sub(&real_mat(&[0.0, 0.0, 0.0, 1.0])).unwrap().max_norm() < 1e-12);

        let gy = gauge_transform(&v0, &unitary(pauli_y())).unwrap();
        assert!(gy.value().matrix().sub(&real_mat(&[0.0, -2.0, -2.0, 1.0])).unwrap().max_norm() < 1e-12);

        let gz = gauge_transform(&v0, &unitary(pauli_z())).unwrap();
        assert!(gz.value().matrix().sub(&real_mat(&[1.0, -2.0, -2.0, 0.0])).unwrap().max_norm() < 1e-12);

        let gi = gauge_transform(&v0, &UnitaryOperator::identity(2)).unwrap();
        assert!(gi.value().matrix().sub(v0.value().matrix()).unwrap().max_norm() < 1e-15);
    }

    #[test]
    fn two_preparations_same_gauge_state() {
        let t = qubit();
        let a = gauge_transform(&encode_state(&basis(0), &t).unwrap(), &unitary(pauli_z())).unwrap();
        let b = gauge_transform(&encode_state(&basis(1), &t).unwrap(), &unitary(pauli_y())).unwrap();
        assert_eq!(a.value().matrix(), b.value().matrix());
        assert!(a.value().matrix().sub(&real_mat(&[1.0, -2.0, -2.0, 0.0])).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn canonical_form_fresh_encode() {
        let t = qubit();
        let gs = encode_state(&basis(0), &t).unwrap();
        let (psi, w) = gs.canonical_form().unwrap();
        assert_eq!(psi, basis(0));
        assert!(w.matrix().sub(&ComplexMatrix::identity(2)).unwrap().max_norm() < 1e-15);
    }

    #[test]
    fn canonical_form_after_pauli_z() {
        let t = qubit();
        let gs = gauge_transform(&encode_state(&basis(0), &t).unwrap(), &unitary(pauli_z())).unwrap();
        let (psi, w) = gs.canonical_form().unwrap();
        // σ_z|0⟩ = |0⟩
        assert_eq!(psi, basis(0));
        assert!(w.matrix().sub(&pauli_z()).unwrap().max_norm() < 1e-15);
        // Residual: V − |0⟩⟨0| = σ_z σ_x σ_z − σ_x = −2σ_x.
        let residual = gs.value().matrix().sub(&basis(0).projector()).unwrap();
        assert!(residual.sub(&pauli_x().scale(C64::new(-2.0, 0.0))).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn canonical_form_after_pauli_y_on_one() {
        let t = qubit();
        let gs = gauge_transform(&encode_state(&basis(1), &t).unwrap(), &unitary(pauli_y())).unwrap();
        let (psi, w) = gs.canonical_form().unwrap();
        // σ_y|1⟩ = −i|0⟩
        assert!((psi.amplitudes()[0] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(psi.amplitudes()[1].norm() < 1e-15);
        assert!(w.matrix().sub(&pauli_y()).unwrap().max_norm() < 1e-15);
        assert!(gs.value().matrix().sub(&real_mat(&[1.0, -2.0, -2.0, 0.0])).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn measurement_examples() {
        let t = qubit();
        let p0 = EventProjector::new(HermitianOperator::new(basis(0).projector()).unwrap()).unwrap();
        let p1 = EventProjector::new(HermitianOperator::new(basis(1).projector()).unwrap()).unwrap();

        let v0 = encode_state(&basis(0), &t).unwrap();
        assert!((measure_probability(&v0, &p0).unwrap() - 1.0).abs() < 1e-12);

        let gx = gauge_transform(&v0, &unitary(pauli_x())).unwrap();
        assert!((measure_probability(&gx, &p1).unwrap() - 1.0).abs() < 1e-12);

        let gy = gauge_transform(&v0, &unitary(pauli_y())).unwrap();
        assert!((measure_probability(&gy, &p1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_idempotent_projector() {
        let m = HermitianOperator::new(real_mat(&[0.5, 0.0, 0.0, 0.0])).unwrap();
        assert!(matches!(EventProjector::new(m), Err(GaugeError::Validation(_))));
    }

    #[test]
    fn composition_law_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for n in 1..=3 {
            let t = standard_qubit_triple(n).unwrap();
            let dim = t.dim();
            for _ in 0..15 {
                let psi = random_state(&mut rng, dim);
                let gs = encode_state(&psi, &t).unwrap();
                let u = random_unitary(&mut rng, dim);
                let v = random_unitary(&mut rng, dim);
                let uv = u.compose(&v).unwrap();
                let lhs = gauge_transform(&gs, &uv).unwrap();
                let rhs = gauge_transform(&gauge_transform(&gs, &v).unwrap(), &u).unwrap();
                assert!(
                    lhs.value().matrix().sub(rhs.value().matrix()).unwrap().max_norm() <= 1e-10
                );
                // Closure: both outputs re-validate the canonical form.
                lhs.canonical_form().unwrap();
                rhs.canonical_form().unwrap();
            }
        }
    }

    #[test]
    fn encoding_is_projector_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let t = standard_qubit_triple(2).unwrap();
        for _ in 0..100 {
            let psi = random_state(&mut rng, 4);
            let gs = encode_state(&psi, &t).unwrap();
            assert!(gs.value().matrix().sub(&psi.projector()).unwrap().max_norm() <= 1e-12);
        }
    }

    #[test]
    fn gauge_term_vanishes_when_unitary_commutes_with_dirac() {
        // u = e^{iσ_x} commutes with D = σ_x.
        let t = qubit();
        let u = crate::linalg::expm_unitary(&HermitianOperator::new(pauli_x()).unwrap(), 1.0).unwrap();
        assert!(commutator(u.matrix(), t.dirac().matrix()).unwrap().max_norm() <= 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        let psi = random_state(&mut rng, 2);
        let gs = encode_state(&psi, &t).unwrap();
        let transformed = gauge_transform(&gs, &u).unwrap();
        let conjugated = u
            .matrix()
            .mul(gs.value().matrix())
            .unwrap()
            .mul(&u.matrix().adjoint())
            .unwrap();
        assert!(transformed.value().matrix().sub(&conjugated).unwrap().max_norm() <= 1e-10);
    }

    #[test]
    fn export_import_round_trip() {
        let t = qubit();
        let gs = gauge_transform(&encode_state(&basis(0), &t).unwrap(), &unitary(pauli_y())).unwrap();
        let json = serde_json::to_string(&gs).unwrap();
        let repr: GaugeStateRepr = serde_json::from_str(&json).unwrap();
        let back = repr.into_gauge_state(t.clone()).unwrap();
        assert_eq!(back.value().matrix(), gs.value().matrix());
    }

    #[test]
    fn import_rejects_inconsistent_parts() {
        let t = qubit();
        let gs = encode_state(&basis(0), &t).unwrap();
        let json = serde_json::to_string(&gs).unwrap();
        let repr: GaugeStateRepr = serde_json::from_str(&json).unwrap();
        // Claim a different base state than the one the value was built from.
        let tampered = GaugeState::from_parts(
            t.clone(),
            repr.value,
            basis(1),
            repr.cum_unitary,
        );
        assert!(matches!(tampered, Err(GaugeError::Corruption(_))));
    }

    #[test]
    fn dimension_mismatches_are_shape_errors() {
        let t = qubit();
        let gs = encode_state(&basis(0), &t).unwrap();
        let u4 = UnitaryOperator::identity(4);
        assert!(matches!(gauge_transform(&gs, &u4), Err(GaugeError::Shape(_))));
        let p4 = EventProjector::new(
            HermitianOperator::new(ComplexMatrix::identity(4)).unwrap(),
        )
        .unwrap();
        assert!(matches!(measure_probability(&gs, &p4), Err(GaugeError::Shape(_))));
    }
}
