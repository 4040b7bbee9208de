//! Gluing two states along one qudit of each: `⋄` (no measurement), `⋄⋆`
//! (measure `x`) and `⋄⋆⋆` (measure `x` and `y`, i.e. entanglement swapping).
//!
//! The glued layout is `(x̄, x, y, ȳ)`: the parties of `phi` in their original
//! order with `x` moved last, followed by the parties of `psi` with `y` moved
//! first. Measured parties are removed from that layout.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QGlueError, Result};
use crate::gates::TwoQuditGate;
use crate::state::PureState;

/// One of the two gluing points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GluePoint {
    X,
    Y,
}

impl fmt::Display for GluePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GluePoint::X => "x",
            GluePoint::Y => "y",
        })
    }
}

/// Where a party of the glued state came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    Phi(usize),
    Psi(usize),
}

/// Post-gluing state with its measurement record.
#[derive(Debug, Clone)]
pub struct GlueOutcome {
    pub state: PureState,
    pub measured: Vec<(GluePoint, usize)>,
    pub probability: f64,
}

/// Original provenance of every party of `phi ⋄ psi`, in glued order.
pub fn glued_order(m: usize, x: usize, n: usize, y: usize) -> Vec<Origin> {
    (0..m)
        .filter(|&p| p != x)
        .map(Origin::Phi)
        .chain([Origin::Phi(x), Origin::Psi(y)])
        .chain((0..n).filter(|&p| p != y).map(Origin::Psi))
        .collect()
}

fn check_inputs(phi: &PureState, x: usize, psi: &PureState, y: usize, gate: &TwoQuditGate) -> Result<()> {
    let d = gate.local_dim();
    if phi.local_dim() != d || psi.local_dim() != d {
        return Err(QGlueError::dim(format!(
            "local dimensions differ: phi d={}, psi d={}, gate d={d}",
            phi.local_dim(),
            psi.local_dim()
        )));
    }
    if x >= phi.num_parties() {
        return Err(QGlueError::arg(format!(
            "x={x} out of range for {} parties",
            phi.num_parties()
        )));
    }
    if y >= psi.num_parties() {
        return Err(QGlueError::arg(format!(
            "y={y} out of range for {} parties",
            psi.num_parties()
        )));
    }
    Ok(())
}

/// `phi ⋄ psi`: applies `gate` across `x` and `y` with no measurement.
pub fn glue(phi: &PureState, x: usize, psi: &PureState, y: usize, gate: &TwoQuditGate) -> Result<PureState> {
    check_inputs(phi, x, psi, y, gate)?;
    let m = phi.num_parties();
    let n = psi.num_parties();
    let phi_order: Vec<usize> = (0..m).filter(|&p| p != x).chain([x]).collect();
    let psi_order: Vec<usize> = [y].into_iter().chain((0..n).filter(|&p| p != y)).collect();
    let joined = phi
        .permute_parties(&phi_order)?
        .tensor(&psi.permute_parties(&psi_order)?)?;
    joined.apply_local(gate.matrix(), &[m - 1, m])
}

/// `phi ⋄⋆ psi`: glue, then measure `x` (forced `outcome` or sampled from `seed`).
pub fn glue_star(
    phi: &PureState,
    x: usize,
    psi: &PureState,
    y: usize,
    gate: &TwoQuditGate,
    outcome: Option<usize>,
    seed: u64,
) -> Result<GlueOutcome> {
    let glued = glue(phi, x, psi, y, gate)?;
    let x_pos = phi.num_parties() - 1;
    let m = glued.measure_computational(x_pos, outcome, seed)?;
    Ok(GlueOutcome {
        state: m.state,
        measured: vec![(GluePoint::X, m.outcome)],
        probability: m.probability,
    })
}

/// `phi ⋄⋆⋆ psi`: glue, then measure both `x` and `y`.
///
/// Sampling draws `x` from `seed` and `y` (conditioned on `x`) from `seed + 1`.
pub fn glue_star_star(
    phi: &PureState,
    x: usize,
    psi: &PureState,
    y: usize,
    gate: &TwoQuditGate,
    outcomes: Option<(usize, usize)>,
    seed: u64,
) -> Result<GlueOutcome> {
    if phi.num_parties() + psi.num_parties() < 3 {
        return Err(QGlueError::arg(
            "double measurement of two single-party states leaves no parties",
        ));
    }
    let glued = glue(phi, x, psi, y, gate)?;
    let x_pos = phi.num_parties() - 1;
    let mx = glued.measure_computational(x_pos, outcomes.map(|o| o.0), seed)?;
    // y slides into x's old slot once x is removed
    let my = mx
        .state
        .measure_computational(x_pos, outcomes.map(|o| o.1), seed.wrapping_add(1))
        .map_err(|e| match e {
            QGlueError::ZeroProbabilityBranch { outcome, probability, .. } => {
                QGlueError::ZeroProbabilityBranch {
                    party: x_pos + 1,
                    outcome,
                    probability: probability * mx.probability,
                }
            }
            other => other,
        })?;
    let probability = mx.probability * my.probability;
    if probability < crate::state::ZERO_PROBABILITY {
        return Err(QGlueError::ZeroProbabilityBranch {
            party: x_pos + 1,
            outcome: my.outcome,
            probability,
        });
    }
    Ok(GlueOutcome {
        state: my.state,
        measured: vec![(GluePoint::X, mx.outcome), (GluePoint::Y, my.outcome)],
        probability,
    })
}
