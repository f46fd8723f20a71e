//! Dense complex matrix kernel: tensor products, commutators, validated
//! Hermitian/unitary wrappers, eigendecomposition-based matrix exponentials
//! and gate embedding on qubit registers.
//!
//! Everything is dimensionless (ħ = 1). Qubit 0 is the leftmost, most
//! significant tensor factor throughout: the basis index of
//! |x₀x₁…x_{n−1}⟩ is the integer with x₀ as the most significant bit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GaugeError, Result};

pub type C64 = Complex64;

/// Relative max-norm tolerance used by all structural validations.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(GaugeError::Shape("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(GaugeError::Shape(format!(
                "entry count {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GaugeError::Validation("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from real entries, row major.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(GaugeError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut data = vec![C64::new(0.0, 0.0); n * m];
        for i in 0..n {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[l * m..(l + 1) * m];
                let out = &mut data[i * m..(i + 1) * m];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self::new(n, m, data)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); self.rows * self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c].conj();
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(GaugeError::Shape(format!(
                "cannot apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect())
    }

    pub fn is_hermitian(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let tol = VALIDATION_TOL * self.max_norm().max(1.0);
        self.sub(&self.adjoint()).map(|d| d.max_norm() <= tol).unwrap_or(false)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(GaugeError::Shape(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c))
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| {
                        let z = self.get(r, c);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        if rows.is_empty() {
            return Err(D::Error::custom("empty matrix"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&[re, im]| C64::new(re, im)))
            .collect();
        ComplexMatrix::new(rows.len(), cols, data).map_err(D::Error::custom)
    }
}

/// Unit vector in the register Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: Vec<C64>,
}

impl StateVector {
    /// Norm must be 1 within 1e-12.
    pub fn new(data: Vec<C64>) -> Result<Self> {
        if data.is_empty() {
            return Err(GaugeError::Shape("empty state vector".into()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GaugeError::Validation("non-finite vector entry".into()));
        }
        let norm = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(GaugeError::Validation(format!(
                "state vector norm {norm} is not 1"
            )));
        }
        Ok(Self { data })
    }

    /// Computational basis state |index⟩ in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(GaugeError::Shape(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut data = vec![C64::new(0.0, 0.0); dim];
        data[index] = C64::new(1.0, 0.0);
        Self::new(data)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.data
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(GaugeError::Shape("inner product dimension mismatch".into()));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Rank-one projector |self⟩⟨self|.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, self.data[r] * self.data[c].conj());
            }
        }
        m
    }

    pub fn apply(&self, u: &UnitaryOperator) -> Result<Self> {
        let out = u.matrix().mul_vec(&self.data)?;
        Self::new(out)
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[f64; 2]> = self.data.iter().map(|z| [z.re, z.im]).collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<[f64; 2]> = Vec::deserialize(deserializer)?;
        StateVector::new(v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .map_err(D::Error::custom)
    }
}

/// Square matrix validated as unitary: ‖UU†−I‖_max and ‖U†U−I‖_max within
/// 1e-10 relative to max(1, ‖U‖_max).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(GaugeError::Shape("unitary must be square".into()));
        }
        let n = matrix.rows();
        let id = ComplexMatrix::identity(n);
        let tol = VALIDATION_TOL * matrix.max_norm().max(1.0);
        let adj = matrix.adjoint();
        let d1 = matrix.mul(&adj)?.sub(&id)?.max_norm();
        let d2 = adj.mul(&matrix)?.sub(&id)?.max_norm();
        if d1 > tol || d2 > tol {
            return Err(GaugeError::Validation(format!(
                "matrix is not unitary (deviation {:.3e})",
                d1.max(d2)
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Product self · other.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }
}

impl<'de> Deserialize<'de> for UnitaryOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(deserializer)?;
        UnitaryOperator::new(m).map_err(D::Error::custom)
    }
}

/// Square matrix validated as selfadjoint within relative tolerance 1e-10.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(GaugeError::Shape("selfadjoint operator must be square".into()));
        }
        if !matrix.is_hermitian() {
            return Err(GaugeError::Validation(format!(
                "matrix is not Hermitian (deviation {:.3e})",
                matrix.sub(&matrix.adjoint()).map(|d| d.max_norm()).unwrap_or(f64::NAN)
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Eigendecomposition. Returns (eigenvalues ascending, eigenvectors as
    /// matching columns). Each eigenvector is normalized with its first
    /// component of modulus > 1e-12 made real positive, so the
    /// decomposition is deterministic across runs.
    pub fn eigh(&self) -> (Vec<f64>, ComplexMatrix) {
        let se = self.matrix.to_nalgebra().symmetric_eigen();
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
        let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let mut vectors = ComplexMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            let v = se.eigenvectors.column(i);
            let pivot = (0..n).find(|&r| v[r].norm() > 1e-12).unwrap_or(0);
            let phase = v[pivot] / v[pivot].norm();
            for r in 0..n {
                vectors.set(r, col, v[r] * phase.conj());
            }
        }
        (values, vectors)
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_norm(&self) -> f64 {
        let (values, _) = self.eigh();
        values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(deserializer)?;
        HermitianOperator::new(m).map_err(D::Error::custom)
    }
}

/// [A, B] = AB − BA.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(GaugeError::Shape(format!(
            "commutator requires equal square matrices, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Kronecker product A ⊗ B with A's index slowest.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows() {
        for ac in 0..a.cols() {
            let av = a.get(ar, ac);
            if av == C64::new(0.0, 0.0) {
                continue;
            }
            for br in 0..b.rows() {
                for bc in 0..b.cols() {
                    out.set(ar * b.rows() + br, ac * b.cols() + bc, av * b.get(br, bc));
                }
            }
        }
    }
    out
}

#[inline]
fn qubit_bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

/// Embed a 1- or 2-qubit gate into an n-qubit register as identity on all
/// other factors. The first listed target is the more significant factor of
/// a 4x4 gate; non-adjacent and reversed-order target pairs are handled by
/// basis-index permutation.
pub fn embed_gate(gate: &ComplexMatrix, targets: &[usize], n: usize) -> Result<ComplexMatrix> {
    let expected = match targets.len() {
        1 => 2,
        2 => {
            if targets[0] == targets[1] {
                return Err(GaugeError::Shape("duplicate target qubits".into()));
            }
            4
        }
        k => {
            return Err(GaugeError::Shape(format!(
                "gate must act on 1 or 2 qubits, got {k} targets"
            )))
        }
    };
    if gate.rows() != expected || gate.cols() != expected {
        return Err(GaugeError::Shape(format!(
            "{}-target gate must be {expected}x{expected}, got {}x{}",
            targets.len(),
            gate.rows(),
            gate.cols()
        )));
    }
    if let Some(&t) = targets.iter().find(|&&t| t >= n) {
        return Err(GaugeError::Shape(format!(
            "target qubit {t} out of range for {n} qubits"
        )));
    }
    let dim = 1usize << n;
    let target_mask: usize = targets.iter().map(|&t| 1usize << (n - 1 - t)).sum();
    let sub_index = |i: usize| {
        targets
            .iter()
            .fold(0usize, |acc, &t| (acc << 1) | qubit_bit(i, t, n))
    };
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        let gr = sub_index(r);
        for c in 0..dim {
            if (r & !target_mask) != (c & !target_mask) {
                continue;
            }
            out.set(r, c, gate.get(gr, sub_index(c)));
        }
    }
    Ok(out)
}

/// e^{itH} for selfadjoint H, via eigendecomposition. Exact unitarity of the
/// result is re-validated on construction.
pub fn expm_unitary(h: &HermitianOperator, t: f64) -> Result<UnitaryOperator> {
    if t == 0.0 {
        return Ok(UnitaryOperator::identity(h.dim()));
    }
    let (values, vectors) = h.eigh();
    let n = h.dim();
    let mut diag = ComplexMatrix::zeros(n, n);
    for (i, &lambda) in values.iter().enumerate() {
        diag.set(i, i, (C64::new(0.0, 1.0) * C64::new(t * lambda, 0.0)).exp());
    }
    UnitaryOperator::new(vectors.mul(&diag)?.mul(&vectors.adjoint())?)
}

/// Random matrix with entries uniform in the unit square, for test corpora.
pub fn random_matrix(rng: &mut impl rand::Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(n, n, data).unwrap()
}

/// Random selfadjoint operator, (M + M†)/2 of a random matrix.
pub fn random_hermitian(rng: &mut impl rand::Rng, n: usize) -> HermitianOperator {
    let m = random_matrix(rng, n);
    HermitianOperator::new(m.add(&m.adjoint()).unwrap().scale(C64::new(0.5, 0.0))).unwrap()
}

/// Haar-ish random unitary, e^{iH} of a random selfadjoint H.
pub fn random_unitary(rng: &mut impl rand::Rng, n: usize) -> UnitaryOperator {
    expm_unitary(&random_hermitian(rng, n), 1.0).unwrap()
}

/// Random unit vector.
pub fn random_state(rng: &mut impl rand::Rng, n: usize) -> StateVector {
    loop {
        let data: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return StateVector::new(data.iter().map(|z| z / norm).collect()).unwrap();
        }
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
    .unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn i_c() -> C64 {
        C64::new(0.0, 1.0)
    }

    #[test]
    fn commutator_pauli_identities() {
        let c = commutator(&pauli_x(), &pauli_y()).unwrap();
        assert!(c.sub(&pauli_z().scale(i_c() * 2.0)).unwrap().max_norm() < 1e-15);
        let c = commutator(&pauli_x(), &pauli_z()).unwrap();
        assert!(c.sub(&pauli_y().scale(-i_c() * 2.0)).unwrap().max_norm() < 1e-15);
    }

    #[test]
    fn commutator_with_self_vanishes() {
        let a = pauli_y();
        assert_eq!(commutator(&a, &a).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn commutator_shape_mismatch() {
        let err = commutator(&pauli_x(), &ComplexMatrix::identity(3));
        assert!(matches!(err, Err(GaugeError::Shape(_))));
    }

    #[test]
    fn tensor_identities() {
        assert_eq!(
            tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
        let xt = tensor(&pauli_x(), &ComplexMatrix::identity(2));
        for (r, c) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
            assert_eq!(xt.get(r, c), C64::new(1.0, 0.0));
        }
        assert_eq!(xt.entries().iter().map(|z| z.norm()).sum::<f64>(), 4.0);
        let zz = tensor(&pauli_z(), &pauli_z());
        for (i, d) in [1.0, -1.0, -1.0, 1.0].iter().enumerate() {
            assert_eq!(zz.get(i, i), C64::new(*d, 0.0));
        }
    }

    #[test]
    fn tensor_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            // Integer entries: associativity should be exact.
            let m = |rng: &mut ChaCha8Rng| {
                let data = (0..4)
                    .map(|_| C64::new(rng.gen_range(-3..4) as f64, rng.gen_range(-3..4) as f64))
                    .collect();
                ComplexMatrix::new(2, 2, data).unwrap()
            };
            let (a, b, c) = (m(&mut rng), m(&mut rng), m(&mut rng));
            assert_eq!(tensor(&tensor(&a, &b), &c), tensor(&a, &tensor(&b, &c)));
        }
    }

    #[test]
    fn embed_single_qubit_matches_tensor() {
        let h = hadamard();
        let direct = tensor(&h, &ComplexMatrix::identity(2));
        let embedded = embed_gate(&h, &[0], 2).unwrap();
        assert!(embedded.sub(&direct).unwrap().max_norm() < 1e-15);
    }

    #[test]
    fn embed_identity_two_qubit() {
        let embedded = embed_gate(&ComplexMatrix::identity(4), &[0, 1], 3).unwrap();
        assert!(embedded.sub(&ComplexMatrix::identity(8)).unwrap().max_norm() < 1e-15);
    }

    #[test]
    fn embed_reversed_cnot_action_on_basis() {
        // CNOT with control listed first; reversed targets make qubit 1 the
        // control. Oracle: brute-force expected action on all 4 basis states.
        let cnot = ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        )
        .unwrap();
        let u = embed_gate(&cnot, &[1, 0], 2).unwrap();
        // |00⟩→|00⟩, |01⟩→|11⟩, |10⟩→|10⟩, |11⟩→|01⟩
        let expected = [0usize, 3, 2, 1];
        for (input, &output) in expected.iter().enumerate() {
            let e = StateVector::basis(4, input).unwrap();
            let mapped = u.mul_vec(e.amplitudes()).unwrap();
            for (i, amp) in mapped.iter().enumerate() {
                let want = if i == output { 1.0 } else { 0.0 };
                assert!((amp - C64::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn embed_rejects_bad_targets() {
        assert!(matches!(embed_gate(&hadamard(), &[2], 2), Err(GaugeError::Shape(_))));
        assert!(matches!(
            embed_gate(&ComplexMatrix::identity(4), &[0, 0], 2),
            Err(GaugeError::Shape(_))
        ));
        assert!(matches!(
            embed_gate(&ComplexMatrix::identity(4), &[0], 2),
            Err(GaugeError::Shape(_))
        ));
    }

    #[test]
    fn disjoint_embeddings_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_unitary(&mut rng, 2);
            let h = random_unitary(&mut rng, 2);
            let a = embed_gate(g.matrix(), &[0], 3).unwrap();
            let b = embed_gate(h.matrix(), &[2], 3).unwrap();
            assert!(commutator(&a, &b).unwrap().max_norm() <= 1e-12);
        }
    }

    #[test]
    fn expm_at_zero_is_identity() {
        let h = HermitianOperator::new(pauli_z()).unwrap();
        let u = expm_unitary(&h, 0.0).unwrap();
        assert!(u.matrix().sub(&ComplexMatrix::identity(2)).unwrap().max_norm() < 1e-15);
    }

    #[test]
    fn expm_pauli_z_pi() {
        let h = HermitianOperator::new(pauli_z()).unwrap();
        let u = expm_unitary(&h, std::f64::consts::PI).unwrap();
        let minus_i2 = ComplexMatrix::identity(2).scale(C64::new(-1.0, 0.0));
        assert!(u.matrix().sub(&minus_i2).unwrap().max_norm() < 1e-10);
    }

    #[test]
    fn expm_matches_power_series() {
        // Oracle: 20-term power series for e^{i(π/2)σ_x}; expected i·σ_x.
        let h = HermitianOperator::new(pauli_x()).unwrap();
        let t = std::f64::consts::FRAC_PI_2;
        let mut series = ComplexMatrix::identity(2);
        let mut term = ComplexMatrix::identity(2);
        for k in 1..=20 {
            term = term.mul(&pauli_x()).unwrap().scale(i_c() * t / k as f64);
            series = series.add(&term).unwrap();
        }
        let u = expm_unitary(&h, t).unwrap();
        assert!(u.matrix().sub(&series).unwrap().max_norm() < 1e-12);
        assert!(u.matrix().sub(&pauli_x().scale(i_c())).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(HermitianOperator::new(m), Err(GaugeError::Validation(_))));
    }

    #[test]
    fn expm_one_parameter_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let h = random_hermitian(&mut rng, 3);
            let t = rng.gen_range(-2.0..2.0);
            let s = rng.gen_range(-2.0..2.0);
            let lhs = expm_unitary(&h, t).unwrap().compose(&expm_unitary(&h, s).unwrap()).unwrap();
            let rhs = expm_unitary(&h, t + s).unwrap();
            assert!(lhs.matrix().sub(rhs.matrix()).unwrap().max_norm() <= 1e-10);
        }
    }

    #[test]
    fn commutator_of_hermitians_is_antihermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let a = random_hermitian(&mut rng, 4);
            let b = random_hermitian(&mut rng, 4);
            let c = commutator(a.matrix(), b.matrix()).unwrap();
            let anti = c.adjoint().add(&c).unwrap();
            assert!(anti.max_norm() <= 1e-12);
        }
    }

    #[test]
    fn matrix_rejects_nan() {
        assert!(ComplexMatrix::new(1, 1, vec![C64::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn eigh_reconstructs_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 5);
            let (values, vectors) = h.eigh();
            let mut diag = ComplexMatrix::zeros(5, 5);
            for (i, &v) in values.iter().enumerate() {
                diag.set(i, i, C64::new(v, 0.0));
            }
            let rebuilt = vectors.mul(&diag).unwrap().mul(&vectors.adjoint()).unwrap();
            assert!(rebuilt.sub(h.matrix()).unwrap().max_norm() < 1e-10);
            assert!(values.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
