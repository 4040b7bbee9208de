//! Reduced density matrices of pure states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{QGlueError, Result};
use crate::state::{checked_dim, strides, validate_sites, PureState};

/// `d^|S| × d^|S|` Hermitian, unit-trace matrix over the parties of `S`.
///
/// Row/column indices are big-endian over the subset in the order it was
/// given to [`reduced_density`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    d: usize,
    parties: usize,
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    #[inline]
    pub fn local_dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn num_parties(&self) -> usize {
        self.parties
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Tr ρ² / (Tr ρ)², with Tr ρ² = Σ |ρ_ij|², accumulated in double-double
    /// so that e.g. a maximally mixed ρ gives exactly 1/dim.
    pub fn purity(&self) -> f64 {
        let sq = self.entries.iter().fold(TwoFloat::from(0.0), |acc, x| {
            acc + TwoFloat::new_mul(x.re, x.re) + TwoFloat::new_mul(x.im, x.im)
        });
        let tr = (0..self.dim).fold(TwoFloat::from(0.0), |acc, i| acc + self.get(i, i).re);
        f64::from(sq / (tr * tr))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `‖ρ − I/dim‖_max`.
    pub fn deviation_from_maximally_mixed(&self) -> f64 {
        let target = 1.0 / self.dim as f64;
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let t = if i == j { target } else { 0.0 };
                worst = worst.max((self.get(i, j) - t).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.entries);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }
}

/// ρ_S = Tr_{complement(S)} |ψ⟩⟨ψ|.
///
/// `subset` must be nonempty and free of duplicates; passing every party
/// yields the (permuted) full projector.
pub fn reduced_density(state: &PureState, subset: &[usize]) -> Result<DensityMatrix> {
    let n = state.num_parties();
    let d = state.local_dim();
    if subset.is_empty() {
        return Err(QGlueError::arg("subset must be nonempty"));
    }
    validate_sites(subset, n)?;
    let k = subset.len();
    let dim_s = checked_dim(d, k).ok_or_else(|| QGlueError::dim("subset too large"))?;
    let dim_c = state.amplitudes().len() / dim_s;

    let st = strides(d, n);
    let complement: Vec<usize> = (0..n).filter(|p| !subset.contains(p)).collect();
    // A[s][c] laid out row-major.
    let mut a = vec![Complex64::new(0.0, 0.0); dim_s * dim_c];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        let s = subset.iter().fold(0, |acc, &p| acc * d + (idx / st[p]) % d);
        let c = complement.iter().fold(0, |acc, &p| acc * d + (idx / st[p]) % d);
        a[s * dim_c + c] = *amp;
    }

    let mut entries = vec![Complex64::new(0.0, 0.0); dim_s * dim_s];
    for i in 0..dim_s {
        let row_i = &a[i * dim_c..(i + 1) * dim_c];
        for j in i..dim_s {
            let row_j = &a[j * dim_c..(j + 1) * dim_c];
            let v: Complex64 = row_i.iter().zip(row_j).map(|(x, y)| x * y.conj()).sum();
            entries[i * dim_s + j] = v;
            entries[j * dim_s + i] = v.conj();
        }
    }
    Ok(DensityMatrix {
        d,
        parties: k,
        dim: dim_s,
        entries,
    })
}
