//! Dense pure states of `n` qudits with local dimension `d`.
//!
//! Amplitudes are indexed big-endian: party 0 is the most significant base-`d`
//! digit, so `|a_0 a_1 … a_{n-1}⟩` lives at `Σ a_p · d^(n-1-p)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QGlueError, Result};
use crate::operator::{Operator, UNITARY_TOL};

/// Squared-norm tolerance for normalized states.
pub const NORM_TOL: f64 = 1e-10;

/// Branches below this probability cannot be forced.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Immutable normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    d: usize,
    n: usize,
    amps: Vec<Complex64>,
}

/// Result of a computational-basis measurement on one party.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: usize,
    pub probability: f64,
    pub state: PureState,
}

/// `d^n`, or `None` on overflow.
pub fn checked_dim(d: usize, n: usize) -> Option<usize> {
    d.checked_pow(u32::try_from(n).ok()?)
}

pub(crate) fn squared_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// Base-`d` digits of `index` over `n` places, most significant first.
pub fn digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for p in (0..n).rev() {
        out[p] = index % d;
        index /= d;
    }
    out
}

pub fn index_of(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

impl PureState {
    /// Normalizes `amps` and wraps them.
    pub fn from_amplitudes(d: usize, n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if d < 2 {
            return Err(QGlueError::arg(format!("local dimension must be >= 2, got {d}")));
        }
        let expected = checked_dim(d, n)
            .ok_or_else(|| QGlueError::dim(format!("{d}^{n} overflows")))?;
        if amps.len() != expected {
            return Err(QGlueError::dim(format!(
                "{} amplitudes given, {d}^{n} = {expected} required",
                amps.len()
            )));
        }
        let norm = squared_norm(&amps).sqrt();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(QGlueError::DegenerateInput(
                "amplitude vector has zero (or non-finite) norm".into(),
            ));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(PureState { d, n, amps })
    }

    pub fn from_real(d: usize, n: usize, amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(d, n, amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(d: usize, digits: &[usize]) -> Result<Self> {
        if let Some(&bad) = digits.iter().find(|&&x| x >= d) {
            return Err(QGlueError::arg(format!("digit {bad} out of range for d={d}")));
        }
        let n = digits.len();
        let len = checked_dim(d, n).ok_or_else(|| QGlueError::dim("state too large"))?;
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index_of(digits, d)] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(d, n, amps)
    }

    /// Wraps amplitudes already known to be normalized (up to rounding).
    pub(crate) fn from_normalized_unchecked(d: usize, n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(Some(amps.len()), checked_dim(d, n));
        PureState { d, n, amps }
    }

    #[inline]
    pub fn local_dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn num_parties(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        squared_norm(&self.amps).sqrt()
    }

    fn same_shape(&self, other: &PureState) -> Result<()> {
        if self.d != other.d || self.n != other.n {
            return Err(QGlueError::dim(format!(
                "shapes differ: (d={}, n={}) vs (d={}, n={})",
                self.d, self.n, other.d, other.n
            )));
        }
        Ok(())
    }

    /// ⟨self|other⟩, conjugating `self`.
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64> {
        self.same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self ⊗ other`, with `self`'s parties first.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        if self.d != other.d {
            return Err(QGlueError::dim(format!(
                "cannot tensor d={} with d={}",
                self.d, other.d
            )));
        }
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(PureState::from_normalized_unchecked(self.d, self.n + other.n, amps))
    }

    /// Reorders parties: party `i` of the result is party `order[i]` of `self`.
    pub fn permute_parties(&self, order: &[usize]) -> Result<PureState> {
        validate_sites(order, self.n)?;
        if order.len() != self.n {
            return Err(QGlueError::arg(format!(
                "permutation has {} entries for {} parties",
                order.len(),
                self.n
            )));
        }
        let d = self.d;
        let strides = strides(d, self.n);
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (new_idx, slot) in amps.iter_mut().enumerate() {
            let ds = digits(new_idx, d, self.n);
            let old_idx: usize = ds
                .iter()
                .zip(order)
                .map(|(&digit, &party)| digit * strides[party])
                .sum();
            *slot = self.amps[old_idx];
        }
        Ok(PureState::from_normalized_unchecked(d, self.n, amps))
    }

    /// Applies a `d^k × d^k` unitary to the listed sites, in the listed order.
    pub fn apply_local(&self, gate: &Operator, sites: &[usize]) -> Result<PureState> {
        validate_sites(sites, self.n)?;
        let k = sites.len();
        let block = checked_dim(self.d, k).ok_or_else(|| QGlueError::dim("gate too large"))?;
        if gate.dim() != block {
            return Err(QGlueError::dim(format!(
                "gate is {0}x{0} but {k} sites of dimension {1} need {block}x{block}",
                gate.dim(),
                self.d
            )));
        }
        if !gate.is_unitary(UNITARY_TOL) {
            return Err(QGlueError::Validation(format!(
                "gate is not unitary (defect {:e})",
                gate.unitarity_defect()
            )));
        }
        let amps = apply_to_vector(&self.amps, self.d, self.n, gate, sites);
        Ok(PureState::from_normalized_unchecked(self.d, self.n, amps))
    }

    /// Applies one single-party operator per party (a full local product).
    pub fn apply_product(&self, ops: &[Operator]) -> Result<PureState> {
        if ops.len() != self.n {
            return Err(QGlueError::arg(format!(
                "{} local operators for {} parties",
                ops.len(),
                self.n
            )));
        }
        let mut out = self.clone();
        for (site, op) in ops.iter().enumerate() {
            out = out.apply_local(op, &[site])?;
        }
        Ok(out)
    }

    /// Probability of each outcome when measuring `site`.
    pub fn outcome_probabilities(&self, site: usize) -> Result<Vec<f64>> {
        if site >= self.n {
            return Err(QGlueError::arg(format!("site {site} out of range for {} parties", self.n)));
        }
        let stride = checked_dim(self.d, self.n - 1 - site).expect("fits");
        let mut probs = vec![0.0; self.d];
        for (idx, a) in self.amps.iter().enumerate() {
            probs[(idx / stride) % self.d] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Measures `site` in the computational basis and removes it.
    ///
    /// With `outcome == None` the outcome is drawn from the Born distribution
    /// using a ChaCha8 stream seeded with `seed`.
    pub fn measure_computational(
        &self,
        site: usize,
        outcome: Option<usize>,
        seed: u64,
    ) -> Result<Measurement> {
        let probs = self.outcome_probabilities(site)?;
        let outcome = match outcome {
            Some(o) if o >= self.d => {
                return Err(QGlueError::arg(format!("outcome {o} out of range for d={}", self.d)))
            }
            Some(o) => o,
            None => sample(&probs, seed),
        };
        let probability = probs[outcome];
        if probability < ZERO_PROBABILITY {
            return Err(QGlueError::ZeroProbabilityBranch {
                party: site,
                outcome,
                probability,
            });
        }
        let branch = project_out(&self.amps, self.d, self.n, site, outcome);
        let scale = probability.sqrt();
        let amps = branch.into_iter().map(|a| a / scale).collect();
        Ok(Measurement {
            outcome,
            probability,
            state: PureState::from_normalized_unchecked(self.d, self.n - 1, amps),
        })
    }
}

fn sample(probs: &[f64], seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: f64 = probs.iter().sum();
    let r: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (o, &p) in probs.iter().enumerate() {
        if p >= ZERO_PROBABILITY {
            last_nonzero = o;
        }
        acc += p;
        if r < acc && p >= ZERO_PROBABILITY {
            return o;
        }
    }
    last_nonzero
}

pub(crate) fn strides(d: usize, n: usize) -> Vec<usize> {
    (0..n).map(|p| checked_dim(d, n - 1 - p).expect("fits")).collect()
}

pub(crate) fn validate_sites(sites: &[usize], n: usize) -> Result<()> {
    for (i, &s) in sites.iter().enumerate() {
        if s >= n {
            return Err(QGlueError::arg(format!("site {s} out of range for {n} parties")));
        }
        if sites[..i].contains(&s) {
            return Err(QGlueError::arg(format!("site {s} repeated")));
        }
    }
    Ok(())
}

/// Unnormalized branch vector `(⟨outcome|_site ⊗ I)|v⟩` over the remaining parties.
pub(crate) fn project_out(
    amps: &[Complex64],
    d: usize,
    n: usize,
    site: usize,
    outcome: usize,
) -> Vec<Complex64> {
    let low = checked_dim(d, n - 1 - site).expect("fits");
    let high = amps.len() / (low * d);
    let mut out = Vec::with_capacity(high * low);
    for h in 0..high {
        let base = (h * d + outcome) * low;
        out.extend_from_slice(&amps[base..base + low]);
    }
    out
}

/// Gate application on a raw (possibly unnormalized) amplitude vector.
pub(crate) fn apply_to_vector(
    amps: &[Complex64],
    d: usize,
    n: usize,
    gate: &Operator,
    sites: &[usize],
) -> Vec<Complex64> {
    let block = gate.dim();
    let st = strides(d, n);
    let offsets: Vec<usize> = (0..block)
        .map(|l| {
            digits(l, d, sites.len())
                .iter()
                .zip(sites)
                .map(|(&digit, &s)| digit * st[s])
                .sum()
        })
        .collect();
    let mut out = amps.to_vec();
    let mut local = vec![Complex64::new(0.0, 0.0); block];
    for base in 0..amps.len() {
        if sites.iter().any(|&s| !(base / st[s]).is_multiple_of(d)) {
            continue;
        }
        for (l, slot) in local.iter_mut().enumerate() {
            *slot = amps[base + offsets[l]];
        }
        for (r, row) in gate.rows().enumerate() {
            out[base + offsets[r]] = row.iter().zip(&local).map(|(g, a)| g * a).sum();
        }
    }
    out
}
