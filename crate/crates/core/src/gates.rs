//! Entangling two-qudit gates `V = Σ_{i,j} |χ_ij⟩⟨i,j|`.
//!
//! Column `(i, j)` of the matrix sits at index `i·d + j` and holds the
//! amplitudes of `|χ_ij⟩`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::density::reduced_density;
use crate::error::{QGlueError, Result};
use crate::operator::{Operator, UNITARY_TOL};
use crate::state::PureState;

/// Tolerance for the "every column is maximally entangled" check.
pub const ENTANGLING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQuditGate {
    d: usize,
    matrix: Operator,
    entangling_basis: bool,
}

/// The four qubit gates with tabulated recursion matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    V1,
    V2,
    V3,
    V4,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::V1, Builtin::V2, Builtin::V3, Builtin::V4];
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Builtin::V1 => "V1",
            Builtin::V2 => "V2",
            Builtin::V3 => "V3",
            Builtin::V4 => "V4",
        };
        f.write_str(s)
    }
}

impl FromStr for Builtin {
    type Err = QGlueError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "V1" => Ok(Builtin::V1),
            "V2" => Ok(Builtin::V2),
            "V3" => Ok(Builtin::V3),
            "V4" => Ok(Builtin::V4),
            _ => Err(QGlueError::arg(format!("unknown gate '{s}' (expected V1..V4)"))),
        }
    }
}

/// `|χ_ij⟩ = d^{-1/2} Σ_k ω^{ik} |k, k+j mod d⟩`, returned in `(i, j)` big-endian order.
pub fn generalized_bell_basis(d: usize) -> Result<Vec<PureState>> {
    if d < 2 {
        return Err(QGlueError::arg(format!("local dimension must be >= 2, got {d}")));
    }
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
            for k in 0..d {
                let phase = 2.0 * PI * ((i * k) % d) as f64 / d as f64;
                amps[k * d + (k + j) % d] = Complex64::from_polar(1.0, phase);
            }
            basis.push(PureState::from_amplitudes(d, 2, amps)?);
        }
    }
    Ok(basis)
}

/// Whether a two-party state has single-party marginal `I/d`.
pub fn is_maximally_entangled(state: &PureState, tol: f64) -> bool {
    state.num_parties() == 2
        && reduced_density(state, &[0])
            .map(|rho| rho.deviation_from_maximally_mixed() < tol)
            .unwrap_or(false)
}

/// `V = Σ |basis[i·d+j]⟩⟨i,j|`.
///
/// The basis must be orthonormal. Bases with product (or partially
/// entangled) columns are accepted but not tagged as entangling.
pub fn gate_from_basis(basis: &[PureState]) -> Result<TwoQuditGate> {
    let first = basis
        .first()
        .ok_or_else(|| QGlueError::arg("basis is empty"))?;
    let d = first.local_dim();
    if basis.len() != d * d {
        return Err(QGlueError::dim(format!(
            "{} basis states given, d^2 = {} required",
            basis.len(),
            d * d
        )));
    }
    if let Some(bad) = basis.iter().find(|s| s.local_dim() != d || s.num_parties() != 2) {
        return Err(QGlueError::dim(format!(
            "basis entry has shape (d={}, n={}), expected (d={d}, n=2)",
            bad.local_dim(),
            bad.num_parties()
        )));
    }
    for (a, sa) in basis.iter().enumerate() {
        for (b, sb) in basis.iter().enumerate().skip(a) {
            let ip = sa.inner_product(sb)?;
            let target = if a == b { 1.0 } else { 0.0 };
            if (ip - target).norm() > UNITARY_TOL {
                return Err(QGlueError::Validation(format!(
                    "basis entries {a} and {b} have overlap {ip}"
                )));
            }
        }
    }
    let dim = d * d;
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (col, s) in basis.iter().enumerate() {
        for (row, amp) in s.amplitudes().iter().enumerate() {
            data[row * dim + col] = *amp;
        }
    }
    let entangling_basis = basis.iter().all(|s| is_maximally_entangled(s, ENTANGLING_TOL));
    Ok(TwoQuditGate {
        d,
        matrix: Operator::from_row_major(dim, data)?,
        entangling_basis,
    })
}

impl TwoQuditGate {
    /// Wraps a `d² × d²` unitary; the entangling tag is computed from its columns.
    pub fn from_matrix(d: usize, matrix: Operator) -> Result<Self> {
        if d < 2 || matrix.dim() != d * d {
            return Err(QGlueError::dim(format!(
                "matrix is {0}x{0}, expected {1}x{1}",
                matrix.dim(),
                d * d
            )));
        }
        if !matrix.is_unitary(UNITARY_TOL) {
            return Err(QGlueError::Validation(format!(
                "matrix is not unitary (defect {:e})",
                matrix.unitarity_defect()
            )));
        }
        let entangling_basis = (0..d * d).all(|c| {
            PureState::from_amplitudes(d, 2, matrix.column(c))
                .map(|s| is_maximally_entangled(&s, ENTANGLING_TOL))
                .unwrap_or(false)
        });
        Ok(TwoQuditGate {
            d,
            matrix,
            entangling_basis,
        })
    }

    pub fn builtin(which: Builtin) -> Self {
        let h = FRAC_1_SQRT_2;
        let rows: [[f64; 4]; 4] = match which {
            Builtin::V1 => [
                [h, 0.0, 0.0, h],
                [0.0, h, h, 0.0],
                [0.0, h, -h, 0.0],
                [h, 0.0, 0.0, -h],
            ],
            Builtin::V2 => [
                [h, 0.0, 0.0, h],
                [0.0, h, -h, 0.0],
                [0.0, h, h, 0.0],
                [h, 0.0, 0.0, -h],
            ],
            Builtin::V3 => [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
            ],
            Builtin::V4 => [
                [h, 0.0, 0.0, h],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [h, 0.0, 0.0, -h],
            ],
        };
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let matrix = Operator::from_real_rows(&refs).expect("4x4");
        Self::from_matrix(2, matrix).expect("builtin gates are unitary")
    }

    /// Gate built from the generalized Bell basis of dimension `d`.
    pub fn generalized_bell(d: usize) -> Result<Self> {
        gate_from_basis(&generalized_bell_basis(d)?)
    }

    /// Looks a gate up by CLI-style name: `V1`..`V4` or `bell` (generalized Bell, needs `d`).
    pub fn by_name(name: &str, d: usize) -> Result<Self> {
        if name.eq_ignore_ascii_case("bell") || name.eq_ignore_ascii_case("gbell") {
            return Self::generalized_bell(d);
        }
        let g = Self::builtin(name.parse()?);
        if d != 2 {
            return Err(QGlueError::dim(format!("gate {name} is a qubit gate, states have d={d}")));
        }
        Ok(g)
    }

    #[inline]
    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    /// `V_{(r0,r1),(c0,c1)}`.
    #[inline]
    pub fn element(&self, row: (usize, usize), col: (usize, usize)) -> Complex64 {
        self.matrix.get(row.0 * self.d + row.1, col.0 * self.d + col.1)
    }

    /// True when every column is a maximally entangled two-qudit state.
    pub fn is_entangling_basis(&self) -> bool {
        self.entangling_basis
    }

    pub fn column_state(&self, i: usize, j: usize) -> PureState {
        PureState::from_amplitudes(self.d, 2, self.matrix.column(i * self.d + j))
            .expect("unitary columns are nonzero")
    }
}
