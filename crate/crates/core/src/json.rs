//! JSON forms of states, gates, glue outcomes, recursion matrices and reports.
//!
//! Complex numbers are `[re, im]` pairs. Every float is written with 17
//! significant digits so doubles survive a round trip bit for bit.

use std::io;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::analysis::AnalysisReport;
use crate::error::{QGlueError, Result};
use crate::gates::TwoQuditGate;
use crate::gluing::{GlueOutcome, GluePoint};
use crate::operator::Operator;
use crate::recursion::RecursionMatrix;
use crate::state::{checked_dim, PureState};

type Pair = [f64; 2];

fn pair(c: &Complex64) -> Pair {
    [c.re, c.im]
}

fn complex(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub d: usize,
    pub n: usize,
    pub amps: Vec<Pair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateJson {
    pub d: usize,
    pub matrix: Vec<Vec<Pair>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlueOutcomeJson {
    pub state: StateJson,
    pub measured: Vec<(GluePoint, usize)>,
    pub prob: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecursionJson {
    pub d: usize,
    pub p: usize,
    pub entries: Vec<Vec<Pair>>,
}

impl From<&PureState> for StateJson {
    fn from(s: &PureState) -> Self {
        StateJson {
            d: s.local_dim(),
            n: s.num_parties(),
            amps: s.amplitudes().iter().map(pair).collect(),
        }
    }
}

impl TryFrom<StateJson> for PureState {
    type Error = QGlueError;

    fn try_from(j: StateJson) -> Result<Self> {
        let expected = checked_dim(j.d, j.n);
        if expected != Some(j.amps.len()) {
            return Err(QGlueError::dim(format!(
                "state declares d={} n={} but carries {} amplitudes",
                j.d,
                j.n,
                j.amps.len()
            )));
        }
        PureState::from_amplitudes(j.d, j.n, j.amps.iter().map(complex).collect())
    }
}

impl From<&TwoQuditGate> for GateJson {
    fn from(g: &TwoQuditGate) -> Self {
        GateJson {
            d: g.local_dim(),
            matrix: g.matrix().rows().map(|r| r.iter().map(pair).collect()).collect(),
        }
    }
}

impl TryFrom<GateJson> for TwoQuditGate {
    type Error = QGlueError;

    fn try_from(j: GateJson) -> Result<Self> {
        let rows = j
            .matrix
            .iter()
            .map(|r| r.iter().map(complex).collect())
            .collect();
        TwoQuditGate::from_matrix(j.d, Operator::from_rows(rows)?)
    }
}

impl From<&GlueOutcome> for GlueOutcomeJson {
    fn from(o: &GlueOutcome) -> Self {
        GlueOutcomeJson {
            state: (&o.state).into(),
            measured: o.measured.clone(),
            prob: o.probability,
        }
    }
}

impl TryFrom<GlueOutcomeJson> for GlueOutcome {
    type Error = QGlueError;

    fn try_from(j: GlueOutcomeJson) -> Result<Self> {
        Ok(GlueOutcome {
            state: j.state.try_into()?,
            measured: j.measured,
            probability: j.prob,
        })
    }
}

impl From<&RecursionMatrix> for RecursionJson {
    fn from(g: &RecursionMatrix) -> Self {
        RecursionJson {
            d: g.local_dim(),
            p: g.block_parties(),
            entries: g.entries().iter().map(|e| e.iter().map(pair).collect()).collect(),
        }
    }
}

impl TryFrom<RecursionJson> for RecursionMatrix {
    type Error = QGlueError;

    fn try_from(j: RecursionJson) -> Result<Self> {
        let entries = j
            .entries
            .iter()
            .map(|e| e.iter().map(complex).collect())
            .collect();
        RecursionMatrix::new(j.d, j.p, entries)
    }
}

/// Compact JSON with floats printed as `{:.16e}`.
#[derive(Debug, Default, Clone, Copy)]
pub struct SigDigitsFormatter;

impl Formatter for SigDigitsFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // JSON has no NaN/inf; mirror serde_json's default
            CompactFormatter.write_null(writer)
        }
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitsFormatter);
    value.serialize(&mut ser).expect("serializing to memory");
    String::from_utf8(buf).expect("json is utf-8")
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

pub fn state_to_json(state: &PureState) -> String {
    to_json_string(&StateJson::from(state))
}

pub fn state_from_json(s: &str) -> Result<PureState> {
    from_json_str::<StateJson>(s)?.try_into()
}

pub fn gate_to_json(gate: &TwoQuditGate) -> String {
    to_json_string(&GateJson::from(gate))
}

pub fn gate_from_json(s: &str) -> Result<TwoQuditGate> {
    from_json_str::<GateJson>(s)?.try_into()
}

pub fn outcome_to_json(outcome: &GlueOutcome) -> String {
    to_json_string(&GlueOutcomeJson::from(outcome))
}

pub fn outcome_from_json(s: &str) -> Result<GlueOutcome> {
    from_json_str::<GlueOutcomeJson>(s)?.try_into()
}

pub fn recursion_to_json(g: &RecursionMatrix) -> String {
    to_json_string(&RecursionJson::from(g))
}

pub fn recursion_from_json(s: &str) -> Result<RecursionMatrix> {
    from_json_str::<RecursionJson>(s)?.try_into()
}

pub fn report_to_json(report: &AnalysisReport) -> String {
    to_json_string(report)
}
