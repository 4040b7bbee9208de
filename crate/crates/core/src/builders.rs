//! Named states: Bell pairs, GHZ, W, parity states, M₄ and ring graph states.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{QGlueError, Result};
use crate::operator::Operator;
use crate::state::{checked_dim, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl FromStr for BellState {
    type Err = QGlueError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi+" => Ok(BellState::PhiPlus),
            "phi-" => Ok(BellState::PhiMinus),
            "psi+" => Ok(BellState::PsiPlus),
            "psi-" => Ok(BellState::PsiMinus),
            _ => Err(QGlueError::arg(format!("unknown Bell state '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl FromStr for Parity {
    type Err = QGlueError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(QGlueError::arg(format!("parity must be 'even' or 'odd', got '{s}'"))),
        }
    }
}

pub fn bell(which: BellState) -> PureState {
    let amps = match which {
        BellState::PhiPlus => [1.0, 0.0, 0.0, 1.0],
        BellState::PhiMinus => [1.0, 0.0, 0.0, -1.0],
        BellState::PsiPlus => [0.0, 1.0, 1.0, 0.0],
        BellState::PsiMinus => [0.0, 1.0, -1.0, 0.0],
    };
    PureState::from_real(2, 2, &amps).expect("bell")
}

/// `(1/√d) Σ_k |kk⟩`.
pub fn max_entangled_pair(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(QGlueError::arg(format!("local dimension must be >= 2, got {d}")));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        amps[k * d + k] = Complex64::new(1.0, 0.0);
    }
    PureState::from_amplitudes(d, 2, amps)
}

fn qubit_len(n: usize) -> Result<usize> {
    checked_dim(2, n)
        .filter(|&l| l <= 1 << 40)
        .ok_or_else(|| QGlueError::arg(format!("{n} qubits is too many")))
}

pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(QGlueError::arg("ghz needs n >= 2"));
    }
    let len = qubit_len(n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); len];
    amps[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[len - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::from_amplitudes(2, n, amps)
}

/// Uniform superposition of the `n` single-excitation basis states.
pub fn w(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(QGlueError::arg("w needs n >= 2"));
    }
    let len = qubit_len(n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); len];
    for p in 0..n {
        amps[1 << p] = Complex64::new(1.0, 0.0);
    }
    PureState::from_amplitudes(2, n, amps)
}

/// `(1/2)|001⟩ + (1/√2)|010⟩ + (1/2)|100⟩`.
pub fn asymmetric_w3() -> PureState {
    let mut amps = [0.0; 8];
    amps[0b001] = 0.5;
    amps[0b010] = FRAC_1_SQRT_2;
    amps[0b100] = 0.5;
    PureState::from_real(2, 3, &amps).expect("aw3")
}

/// Uniform superposition over basis states with the given bit-sum parity.
pub fn parity_state(n: usize, parity: Parity) -> Result<PureState> {
    if n < 1 {
        return Err(QGlueError::arg("parity_state needs n >= 1"));
    }
    let want = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let amps = (0..qubit_len(n)?)
        .map(|i: usize| {
            let v = if i.count_ones() % 2 == want { 1.0 } else { 0.0 };
            Complex64::new(v, 0.0)
        })
        .collect();
    PureState::from_amplitudes(2, n, amps)
}

/// `(1/2)(|00⟩φ⁺ + |01⟩ψ⁺ + |10⟩ψ⁻ + |11⟩φ⁻)`.
pub fn m4() -> PureState {
    let pairs = [
        BellState::PhiPlus,
        BellState::PsiPlus,
        BellState::PsiMinus,
        BellState::PhiMinus,
    ];
    let mut amps = Vec::with_capacity(16);
    for b in pairs {
        amps.extend(bell(b).amplitudes().iter().map(|a| a * 0.5));
    }
    PureState::from_amplitudes(2, 4, amps).expect("m4")
}

/// Controlled-Z along the cycle `0-1-…-(n-1)-0` applied to `|+⟩^⊗n`.
pub fn ring_graph_state(n: usize) -> Result<PureState> {
    if n < 3 {
        return Err(QGlueError::arg("ring graph state needs n >= 3"));
    }
    let len = qubit_len(n)?;
    let amp = 1.0 / (len as f64).sqrt();
    let mut state = PureState::from_amplitudes(2, n, vec![Complex64::new(amp, 0.0); len])?;
    let cz = Operator::cz();
    for p in 0..n {
        state = state.apply_local(&cz, &[p, (p + 1) % n])?;
    }
    Ok(state)
}

/// A parsed builder spec such as `ghz:4`, `w:3`, `bell:phi+`, `ring:5`,
/// `m4`, `parity:4:even`, `aw3` or `maxent:3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpec {
    Bell(String),
    MaxEntangled(usize),
    Ghz(usize),
    W(usize),
    AsymmetricW3,
    Parity(usize, String),
    M4,
    Ring(usize),
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Bell(b) => write!(f, "bell:{b}"),
            StateSpec::MaxEntangled(d) => write!(f, "maxent:{d}"),
            StateSpec::Ghz(n) => write!(f, "ghz:{n}"),
            StateSpec::W(n) => write!(f, "w:{n}"),
            StateSpec::AsymmetricW3 => write!(f, "aw3"),
            StateSpec::Parity(n, p) => write!(f, "parity:{n}:{p}"),
            StateSpec::M4 => write!(f, "m4"),
            StateSpec::Ring(n) => write!(f, "ring:{n}"),
        }
    }
}

fn parse_count(s: Option<&str>, spec: &str) -> Result<usize> {
    s.ok_or_else(|| QGlueError::arg(format!("'{spec}' is missing a size")))?
        .parse()
        .map_err(|_| QGlueError::arg(format!("'{spec}' has a non-integer size")))
}

impl FromStr for StateSpec {
    type Err = QGlueError;

    fn from_str(spec: &str) -> Result<Self> {
        let mut parts = spec.split(':');
        let head = parts.next().unwrap_or_default();
        let parsed = match head {
            "bell" => {
                let which = parts.next().unwrap_or("phi+");
                which.parse::<BellState>()?;
                StateSpec::Bell(which.to_string())
            }
            "maxent" => StateSpec::MaxEntangled(parse_count(parts.next(), spec)?),
            "ghz" => StateSpec::Ghz(parse_count(parts.next(), spec)?),
            "w" => StateSpec::W(parse_count(parts.next(), spec)?),
            "aw3" => StateSpec::AsymmetricW3,
            "parity" => {
                let n = parse_count(parts.next(), spec)?;
                let p = parts.next().unwrap_or("even");
                p.parse::<Parity>()?;
                StateSpec::Parity(n, p.to_string())
            }
            "m4" => StateSpec::M4,
            "ring" => StateSpec::Ring(parse_count(parts.next(), spec)?),
            _ => return Err(QGlueError::arg(format!("unknown builder '{spec}'"))),
        };
        if parts.next().is_some() {
            return Err(QGlueError::arg(format!("trailing fields in '{spec}'")));
        }
        Ok(parsed)
    }
}

impl StateSpec {
    /// `(d, n)` of the state this spec builds, without building it.
    pub fn shape(&self) -> (usize, usize) {
        match *self {
            StateSpec::Bell(_) => (2, 2),
            StateSpec::MaxEntangled(d) => (d, 2),
            StateSpec::Ghz(n) | StateSpec::W(n) | StateSpec::Parity(n, _) | StateSpec::Ring(n) => (2, n),
            StateSpec::AsymmetricW3 => (2, 3),
            StateSpec::M4 => (2, 4),
        }
    }

    pub fn build(&self) -> Result<PureState> {
        match self {
            StateSpec::Bell(b) => Ok(bell(b.parse()?)),
            StateSpec::MaxEntangled(d) => max_entangled_pair(*d),
            StateSpec::Ghz(n) => ghz(*n),
            StateSpec::W(n) => w(*n),
            StateSpec::AsymmetricW3 => Ok(asymmetric_w3()),
            StateSpec::Parity(n, p) => parity_state(*n, p.parse()?),
            StateSpec::M4 => Ok(m4()),
            StateSpec::Ring(n) => ring_graph_state(*n),
        }
    }
}
