//! Time evolution of gauge states under a Hamiltonian: the closed form
//! through u_t = e^{itH}, and direct fixed-step RK4 integration of
//! i dV/dt = [V, H] + [D, H] used to cross-check it.

use crate::error::{GaugeError, Result};
use crate::gauge::{gauge_transform, GaugeState};
use crate::linalg::{commutator, expm_unitary, ComplexMatrix, HermitianOperator, C64};

/// Default RK4 step count for a time span |t|.
pub fn default_steps(t: f64) -> usize {
    (1000.0 * t.abs().max(1.0)).ceil() as usize
}

/// Closed-form evolution: the gauge transform under u_t = e^{itH}, with
/// provenance updated accordingly.
pub fn evolve_closed(gs: &GaugeState, h: &HermitianOperator, t: f64) -> Result<GaugeState> {
    if h.dim() != gs.triple().dim() {
        return Err(GaugeError::Shape(format!(
            "Hamiltonian dimension {} does not match triple dimension {}",
            h.dim(),
            gs.triple().dim()
        )));
    }
    gauge_transform(gs, &expm_unitary(h, t)?)
}

/// Direct integration of i dV/dt = [V, H] + [D, H] with classical RK4 at
/// fixed step t/steps. Returns a bare matrix: integration carries no
/// preparation provenance, so the result is not a [`GaugeState`]. This is
/// the verification path for [`evolve_closed`], not the computational one.
pub fn evolve_ode(
    gs: &GaugeState,
    h: &HermitianOperator,
    t: f64,
    steps: usize,
) -> Result<HermitianOperator> {
    if h.dim() != gs.triple().dim() {
        return Err(GaugeError::Shape(format!(
            "Hamiltonian dimension {} does not match triple dimension {}",
            h.dim(),
            gs.triple().dim()
        )));
    }
    if steps == 0 {
        return Err(GaugeError::Validation("step count must be at least 1".into()));
    }
    if !t.is_finite() {
        return Err(GaugeError::Validation("integration time must be finite".into()));
    }
    let minus_i = C64::new(0.0, -1.0);
    let drift = commutator(gs.triple().dirac().matrix(), h.matrix())?;
    // dV/dt = −i([V,H] + [D,H])
    let rhs = |v: &ComplexMatrix| -> Result<ComplexMatrix> {
        Ok(commutator(v, h.matrix())?.add(&drift)?.scale(minus_i))
    };

    let dt = t / steps as f64;
    let half = C64::new(dt / 2.0, 0.0);
    let full = C64::new(dt, 0.0);
    let sixth = C64::new(dt / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);

    let mut v = gs.value().matrix().clone();
    for _ in 0..steps {
        let k1 = rhs(&v)?;
        let k2 = rhs(&v.add(&k1.scale(half))?)?;
        let k3 = rhs(&v.add(&k2.scale(half))?)?;
        let k4 = rhs(&v.add(&k3.scale(full))?)?;
        let incr = k1.add(&k2.scale(two))?.add(&k3.scale(two))?.add(&k4)?;
        v = v.add(&incr.scale(sixth))?;
    }

    let drift_dev = v.sub(&v.adjoint())?.max_norm();
    if drift_dev > 1e-8 {
        return Err(GaugeError::Validation(format!(
            "RK4 iterate lost Hermiticity (deviation {drift_dev:.3e})"
        )));
    }
    // Symmetrize the tail rounding before wrapping.
    HermitianOperator::new(v.add(&v.adjoint())?.scale(C64::new(0.5, 0.0)))
}
