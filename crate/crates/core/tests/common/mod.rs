#![allow(dead_code)]

use num_complex::Complex64;
use qglue::{Operator, PureState, TwoQuditGate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-ish random state (normalized complex Gaussian vector).
pub fn random_state(rng: &mut impl Rng, d: usize, n: usize) -> PureState {
    let len = d.pow(n as u32);
    let amps = (0..len).map(|_| gaussian(rng)).collect();
    PureState::from_amplitudes(d, n, amps).unwrap()
}

/// Random unitary from Gram-Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> Operator {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        for c in &cols {
            let ip: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= ip * y;
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    let rows = (0..dim).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    Operator::from_rows(rows).unwrap()
}

pub fn digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for p in (0..n).rev() {
        out[p] = idx % d;
        idx /= d;
    }
    out
}

pub fn index(ds: &[usize], d: usize) -> usize {
    ds.iter().fold(0, |a, &x| a * d + x)
}

/// Brute-force `Σ_{a,b} |φ_a⟩ ⊗ V|a,b⟩ ⊗ |ψ_b⟩` in layout (x̄, x, y, ȳ),
/// written directly from digit loops.
pub fn glue_oracle(phi: &PureState, x: usize, psi: &PureState, y: usize, gate: &TwoQuditGate) -> Vec<Complex64> {
    let d = phi.local_dim();
    let (m, n) = (phi.num_parties(), psi.num_parties());
    let mut out = vec![Complex64::new(0.0, 0.0); d.pow((m + n) as u32)];
    for (pi, pa) in phi.amplitudes().iter().enumerate() {
        let pd = digits(pi, d, m);
        let a = pd[x];
        let rest_phi: Vec<usize> = (0..m).filter(|&p| p != x).map(|p| pd[p]).collect();
        for (qi, qa) in psi.amplitudes().iter().enumerate() {
            let qd = digits(qi, d, n);
            let b = qd[y];
            let rest_psi: Vec<usize> = (0..n).filter(|&p| p != y).map(|p| qd[p]).collect();
            for r in 0..d {
                for s in 0..d {
                    let v = gate.matrix().get(r * d + s, a * d + b);
                    let mut ds = rest_phi.clone();
                    ds.push(r);
                    ds.push(s);
                    ds.extend(&rest_psi);
                    out[index(&ds, d)] += pa * qa * v;
                }
            }
        }
    }
    out
}

/// Coefficient states `|φ_a⟩` of `Σ_a |φ_a⟩|a⟩_site` by digit loops.
pub fn coeffs_oracle(state: &PureState, site: usize) -> Vec<Vec<Complex64>> {
    let d = state.local_dim();
    let n = state.num_parties();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); d.pow((n - 1) as u32)]; d];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let ds = digits(i, d, n);
        let rest: Vec<usize> = (0..n).filter(|&p| p != site).map(|p| ds[p]).collect();
        out[ds[site]][index(&rest, d)] = *a;
    }
    out
}

pub fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn phase_fidelity(a: &PureState, b: &PureState) -> f64 {
    a.inner_product(b).unwrap().norm_sqr()
}
