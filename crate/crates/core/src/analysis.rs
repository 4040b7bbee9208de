//! k-uniformity, average purity and local-unitary equivalence checks.
//!
//! Subsets are always enumerated in lexicographic order. Per-subset work may
//! run on the rayon pool, but results are collected in enumeration order so
//! reports and sums do not depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::density::{reduced_density, DensityMatrix};
use crate::error::{QGlueError, Result};
use crate::gluing::GlueOutcome;
use crate::operator::{Operator, UNITARY_TOL};
use crate::state::PureState;

/// Default `‖ρ_S − I/d^k‖_max` tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Lexicographic `k`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations {
        n,
        current: (k <= n).then(|| (0..k).collect()),
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // rightmost slot that can still advance
        if let Some(i) = (0..k).rev().find(|&i| next[i] < self.n - k + i) {
            next[i] += 1;
            for j in i + 1..k {
                next[j] = next[j - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Sum by recursive halving; the rounding pattern depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2..=8 => xs.iter().sum(),
        len => {
            let (a, b) = xs.split_at(len / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetDeviation {
    pub subset: Vec<usize>,
    pub deviation: f64,
}

/// `‖ρ_S − I/d^k‖_max` for every `k`-subset, in lexicographic order.
pub fn uniformity_scan(state: &PureState, k: usize) -> Result<Vec<SubsetDeviation>> {
    let subsets: Vec<Vec<usize>> = combinations(state.num_parties(), k).collect();
    subsets
        .into_par_iter()
        .map(|subset| {
            let deviation = reduced_density(state, &subset)?.deviation_from_maximally_mixed();
            Ok(SubsetDeviation { subset, deviation })
        })
        .collect()
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 1 || k > n / 2 {
        return Err(QGlueError::arg(format!(
            "k={k} outside 1..={} for {n} parties",
            n / 2
        )));
    }
    Ok(())
}

/// True iff every `k`-party reduction is `I/d^k` within `tol` (max-entry norm).
pub fn is_k_uniform(state: &PureState, k: usize, tol: f64) -> Result<bool> {
    check_k(state.num_parties(), k)?;
    Ok(uniformity_scan(state, k)?.iter().all(|s| s.deviation < tol))
}

/// Largest `k` for which the state is `k`-uniform (0 if not even 1-uniform).
pub fn max_uniformity(state: &PureState, tol: f64) -> usize {
    let n = state.num_parties();
    let mut best = 0;
    for k in 1..=n / 2 {
        match is_k_uniform(state, k, tol) {
            Ok(true) => best = k,
            _ => break,
        }
    }
    best
}

/// Mean of Tr ρ_S² over all `⌊n/2⌋`-party subsets.
pub fn average_purity(state: &PureState) -> Result<f64> {
    let n = state.num_parties();
    if n < 2 {
        return Err(QGlueError::arg("average purity needs at least two parties"));
    }
    let k = n / 2;
    let subsets: Vec<Vec<usize>> = combinations(n, k).collect();
    let purities: Vec<f64> = subsets
        .par_iter()
        .map(|s| reduced_density(state, s).map(|rho| rho.purity()))
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&purities) / purities.len() as f64)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner_product(b)?.norm_sqr())
}

/// True iff `|⟨a|b⟩| > 1 − tol`.
pub fn equal_up_to_phase(a: &PureState, b: &PureState, tol: f64) -> Result<bool> {
    Ok(a.inner_product(b)?.norm() > 1.0 - tol)
}

/// Applies one local correction per branch and checks all results are
/// pairwise equal up to a global phase.
///
/// `corrections[i]` must list exactly one `d × d` unitary per party of
/// branch `i` (use the identity for untouched parties).
pub fn lu_correctable_states(branches: &[PureState], corrections: &[Vec<Operator>], tol: f64) -> Result<bool> {
    if branches.len() != corrections.len() {
        return Err(QGlueError::arg(format!(
            "{} branches but {} correction lists",
            branches.len(),
            corrections.len()
        )));
    }
    let mut corrected = Vec::with_capacity(branches.len());
    for (i, (state, ops)) in branches.iter().zip(corrections).enumerate() {
        if ops.len() != state.num_parties() {
            return Err(QGlueError::arg(format!(
                "branch {i}: {} corrections for {} parties",
                ops.len(),
                state.num_parties()
            )));
        }
        if let Some(bad) = ops.iter().position(|op| op.dim() != state.local_dim()) {
            return Err(QGlueError::arg(format!(
                "branch {i}: correction on party {bad} is not {0}x{0}",
                state.local_dim()
            )));
        }
        if let Some(bad) = ops.iter().position(|op| !op.is_unitary(UNITARY_TOL)) {
            return Err(QGlueError::arg(format!(
                "branch {i}: correction on party {bad} is not unitary"
            )));
        }
        corrected.push(state.apply_product(ops)?);
    }
    for (i, a) in corrected.iter().enumerate() {
        for b in &corrected[i + 1..] {
            if a.local_dim() != b.local_dim() || a.num_parties() != b.num_parties() {
                return Ok(false);
            }
            if !equal_up_to_phase(a, b, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`lu_correctable_states`] over glue outcomes, with the default tolerance.
pub fn lu_correctable(branches: &[GlueOutcome], corrections: &[Vec<Operator>]) -> Result<bool> {
    let states: Vec<PureState> = branches.iter().map(|b| b.state.clone()).collect();
    lu_correctable_states(&states, corrections, DEFAULT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checks {
    KUniformity,
    Purity,
    All,
}

impl std::str::FromStr for Checks {
    type Err = QGlueError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k-uniformity" => Ok(Checks::KUniformity),
            "purity" => Ok(Checks::Purity),
            "all" => Ok(Checks::All),
            _ => Err(QGlueError::arg(format!(
                "checks must be k-uniformity, purity or all; got '{s}'"
            ))),
        }
    }
}

/// Summary serialized by the CLI `analyze` command.
///
/// `failures` lists the subsets that break uniformity at level `k_max + 1`
/// (empty when the state reaches `⌊n/2⌋`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub k_max: Option<usize>,
    pub pi_me: Option<f64>,
    pub failures: Vec<SubsetDeviation>,
}

pub fn analyze(state: &PureState, checks: Checks, tol: f64) -> Result<AnalysisReport> {
    let n = state.num_parties();
    let mut report = AnalysisReport {
        k_max: None,
        pi_me: None,
        failures: Vec::new(),
    };
    if matches!(checks, Checks::KUniformity | Checks::All) {
        let k_max = max_uniformity(state, tol);
        if k_max < n / 2 {
            report.failures = uniformity_scan(state, k_max + 1)?
                .into_iter()
                .filter(|s| s.deviation >= tol)
                .collect();
        }
        report.k_max = Some(k_max);
    }
    if matches!(checks, Checks::Purity | Checks::All) && n >= 2 {
        report.pi_me = Some(average_purity(state)?);
    }
    Ok(report)
}
