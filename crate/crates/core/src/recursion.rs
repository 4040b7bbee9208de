//! Recursion matrices for chains of `⋄⋆` gluings against fresh Bell pairs.
//!
//! A state glued at its last party is written `|Φ⟩ = Σ_a |φ_a⟩|a⟩`. Gluing
//! that party to the first qudit of `(1/√d) Σ_k |kk⟩` with gate `V` and
//! reading outcome `o` on `x` produces `Σ_b |φ'_b⟩|b⟩` with
//! `|φ'_b⟩ = Σ_a |φ_a⟩ ⊗ 𝒢_ab`, where `𝒢_ab = Σ_j V_{(o,j),(a,b)} |j⟩`.
//! Entries are kept unnormalized; only [`assemble`] normalizes.

use num_complex::Complex64;

use crate::builders::max_entangled_pair;
use crate::error::{QGlueError, Result};
use crate::gates::TwoQuditGate;
use crate::gluing::{glue_star, GlueOutcome, GluePoint};
use crate::state::{squared_norm, PureState};

type Amps = Vec<Complex64>;

fn kron(a: &[Complex64], b: &[Complex64]) -> Amps {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        out.extend(b.iter().map(|y| x * y));
    }
    out
}

fn add_into(acc: &mut [Complex64], v: &[Complex64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

/// `d × d` array of (unnormalized) `p`-party amplitude vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionMatrix {
    d: usize,
    block_parties: usize,
    entries: Vec<Amps>,
}

impl RecursionMatrix {
    /// Row-major entries; every entry must have length `d^block_parties`.
    pub fn new(d: usize, block_parties: usize, entries: Vec<Amps>) -> Result<Self> {
        if d < 2 {
            return Err(QGlueError::arg(format!("local dimension must be >= 2, got {d}")));
        }
        if entries.len() != d * d {
            return Err(QGlueError::dim(format!(
                "{} entries for a {d}x{d} recursion matrix",
                entries.len()
            )));
        }
        let len = crate::state::checked_dim(d, block_parties)
            .ok_or_else(|| QGlueError::dim("block too large"))?;
        if let Some(bad) = entries.iter().find(|e| e.len() != len) {
            return Err(QGlueError::dim(format!(
                "entry of length {} in a matrix of {block_parties}-party blocks (length {len})",
                bad.len()
            )));
        }
        Ok(RecursionMatrix {
            d,
            block_parties,
            entries,
        })
    }

    #[inline]
    pub fn local_dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn block_parties(&self) -> usize {
        self.block_parties
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> &[Complex64] {
        &self.entries[row * self.d + col]
    }

    pub fn entries(&self) -> &[Amps] {
        &self.entries
    }

    pub fn max_abs_diff(&self, other: &RecursionMatrix) -> f64 {
        assert_eq!(self.d, other.d);
        assert_eq!(self.block_parties, other.block_parties);
        self.entries
            .iter()
            .zip(&other.entries)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }
}

/// `𝒢_ab = Σ_j V_{(outcome, j),(a, b)} |j⟩`.
pub fn recursion_from_gate(gate: &TwoQuditGate, outcome: usize) -> Result<RecursionMatrix> {
    let d = gate.local_dim();
    if outcome >= d {
        return Err(QGlueError::arg(format!("outcome {outcome} out of range for d={d}")));
    }
    let mut entries = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            entries.push((0..d).map(|j| gate.element((outcome, j), (a, b))).collect());
        }
    }
    RecursionMatrix::new(d, 1, entries)
}

/// `(g1·g2)_ac = Σ_b g1_ab ⊗ g2_bc`; g1's parties come first.
pub fn compose(g1: &RecursionMatrix, g2: &RecursionMatrix) -> Result<RecursionMatrix> {
    if g1.d != g2.d {
        return Err(QGlueError::dim(format!(
            "cannot compose d={} with d={}",
            g1.d, g2.d
        )));
    }
    let d = g1.d;
    let p = g1.block_parties + g2.block_parties;
    let len = g1.entries[0].len() * g2.entries[0].len();
    let mut entries = Vec::with_capacity(d * d);
    for a in 0..d {
        for c in 0..d {
            let mut acc = vec![Complex64::new(0.0, 0.0); len];
            for b in 0..d {
                add_into(&mut acc, &kron(g1.entry(a, b), g2.entry(b, c)));
            }
            entries.push(acc);
        }
    }
    RecursionMatrix::new(d, p, entries)
}

/// `gⁿ` for `n ≥ 1`.
pub fn power(g: &RecursionMatrix, n: usize) -> Result<RecursionMatrix> {
    if n < 1 {
        return Err(QGlueError::arg("power requires n >= 1"));
    }
    let mut acc = g.clone();
    for _ in 1..n {
        acc = compose(&acc, g)?;
    }
    Ok(acc)
}

/// The coefficient states `|φ_a⟩` of `Σ_a |φ_a⟩|a⟩`, possibly unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffStates {
    d: usize,
    parties: usize,
    states: Vec<Amps>,
}

impl CoeffStates {
    pub fn new(d: usize, parties: usize, states: Vec<Amps>) -> Result<Self> {
        if states.len() != d {
            return Err(QGlueError::dim(format!(
                "{} coefficient states for d={d}",
                states.len()
            )));
        }
        let len = crate::state::checked_dim(d, parties)
            .ok_or_else(|| QGlueError::dim("coefficients too large"))?;
        if let Some(bad) = states.iter().find(|s| s.len() != len) {
            return Err(QGlueError::dim(format!(
                "coefficient state of length {}, expected {len}",
                bad.len()
            )));
        }
        Ok(CoeffStates { d, parties, states })
    }

    /// Splits `state` along `site`: `|Φ⟩ = Σ_a |φ_a⟩_{rest} |a⟩_{site}`.
    ///
    /// The remaining parties keep their relative order.
    pub fn split(state: &PureState, site: usize) -> Result<Self> {
        let n = state.num_parties();
        if site >= n {
            return Err(QGlueError::arg(format!("site {site} out of range for {n} parties")));
        }
        let order: Vec<usize> = (0..n).filter(|&p| p != site).chain([site]).collect();
        let moved = state.permute_parties(&order)?;
        let d = state.local_dim();
        let states = (0..d)
            .map(|a| moved.amplitudes().iter().skip(a).step_by(d).copied().collect())
            .collect();
        Self::new(d, n - 1, states)
    }

    /// Splits along the first party: `|Ψ⟩ = Σ_a |a⟩ |ψ_a⟩`.
    pub fn split_first(state: &PureState) -> Result<Self> {
        let d = state.local_dim();
        let chunk = state.amplitudes().len() / d;
        let states = state
            .amplitudes()
            .chunks(chunk)
            .map(<[Complex64]>::to_vec)
            .collect();
        Self::new(d, state.num_parties() - 1, states)
    }

    #[inline]
    pub fn local_dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn states(&self) -> &[Amps] {
        &self.states
    }

    pub fn squared_norm(&self) -> f64 {
        self.states.iter().map(|s| squared_norm(s)).sum()
    }
}

/// `out_b = Σ_a coeffs_a ⊗ g_ab`.
pub fn expand(coeffs: &CoeffStates, g: &RecursionMatrix) -> Result<CoeffStates> {
    if coeffs.d != g.d {
        return Err(QGlueError::dim(format!(
            "coefficients have d={}, recursion matrix d={}",
            coeffs.d, g.d
        )));
    }
    let d = g.d;
    let len = coeffs.states[0].len() * g.entries[0].len();
    let states = (0..d)
        .map(|b| {
            let mut acc = vec![Complex64::new(0.0, 0.0); len];
            for a in 0..d {
                add_into(&mut acc, &kron(&coeffs.states[a], g.entry(a, b)));
            }
            acc
        })
        .collect();
    CoeffStates::new(d, coeffs.parties + g.block_parties, states)
}

/// Normalized `Σ_i coeffs_i ⊗ |i⟩`, chain party appended last.
pub fn assemble(coeffs: &CoeffStates) -> Result<PureState> {
    let d = coeffs.d;
    let len = coeffs.states[0].len();
    let mut amps = vec![Complex64::new(0.0, 0.0); len * d];
    for (i, s) in coeffs.states.iter().enumerate() {
        for (r, a) in s.iter().enumerate() {
            amps[r * d + i] = *a;
        }
    }
    PureState::from_amplitudes(d, coeffs.parties + 1, amps)
}

/// Chain state plus the weight of the recorded outcome sequence.
#[derive(Debug, Clone)]
pub struct ChainResult {
    pub state: PureState,
    pub outcomes: Vec<usize>,
    pub probability: f64,
}

/// Chain from the maximally entangled pair, one recursion step per outcome.
///
/// The returned probability is that of observing exactly `outcomes`.
pub fn chain_via_recursion(gate: &TwoQuditGate, outcomes: &[usize]) -> Result<ChainResult> {
    let d = gate.local_dim();
    let mut coeffs = CoeffStates::split(&max_entangled_pair(d)?, 1)?;
    for &o in outcomes {
        coeffs = expand(&coeffs, &recursion_from_gate(gate, o)?)?;
    }
    // each appended pair carries an unrecorded 1/√d
    let probability = coeffs.squared_norm() / (d as f64).powi(outcomes.len() as i32);
    let state = assemble(&coeffs).map_err(|_| QGlueError::ZeroProbabilityBranch {
        party: 0,
        outcome: outcomes.last().copied().unwrap_or(0),
        probability: 0.0,
    })?;
    Ok(ChainResult {
        state,
        outcomes: outcomes.to_vec(),
        probability,
    })
}

/// How a chain picks the outcome on `x` at each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomePolicy {
    /// Force the listed outcomes (repeating the last one if the list is short).
    Forced(Vec<usize>),
    /// Draw each outcome from the Born rule; step `i` uses `seed + i`.
    Sample { seed: u64 },
}

impl OutcomePolicy {
    pub fn zero() -> Self {
        OutcomePolicy::Forced(vec![0])
    }
}

/// Physical chain: start from the maximally entangled pair and `⋄⋆`-glue a
/// fresh pair at the last party, `steps` times.
pub fn chain_direct(gate: &TwoQuditGate, steps: usize, policy: &OutcomePolicy) -> Result<ChainResult> {
    chain_from(&max_entangled_pair(gate.local_dim())?, gate, steps, policy)
}

/// Like [`chain_direct`] but starting from an arbitrary state.
pub fn chain_from(
    initial: &PureState,
    gate: &TwoQuditGate,
    steps: usize,
    policy: &OutcomePolicy,
) -> Result<ChainResult> {
    let pair = max_entangled_pair(gate.local_dim())?;
    let mut state = initial.clone();
    let mut outcomes = Vec::with_capacity(steps);
    let mut probability = 1.0;
    for step in 0..steps {
        let (forced, seed) = match policy {
            OutcomePolicy::Forced(list) => {
                let o = list.get(step).or(list.last()).copied();
                if o.is_none() {
                    return Err(QGlueError::arg("forced policy needs at least one outcome"));
                }
                (o, 0)
            }
            OutcomePolicy::Sample { seed } => (None, seed.wrapping_add(step as u64)),
        };
        let x = state.num_parties() - 1;
        let GlueOutcome {
            state: next,
            measured,
            probability: p,
        } = glue_star(&state, x, &pair, 0, gate, forced, seed)?;
        debug_assert_eq!(measured[0].0, GluePoint::X);
        outcomes.push(measured[0].1);
        probability *= p;
        state = next;
    }
    Ok(ChainResult {
        state,
        outcomes,
        probability,
    })
}
