//! JSON file formats. Rationals are strings `"p/q"` (or `"p"`).

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::counter::Counter;
use crate::error::{Error, Result};
use crate::lattice::FaceLattice;
use crate::quantum::PureState;
use crate::scalar::{Real, Scalar};
use crate::space::{make_state_space, StateSpace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub label: String,
    pub dimension: usize,
    pub vertices: Vec<Vec<String>>,
}

impl SpaceFile {
    pub fn from_space<T: Scalar>(space: &StateSpace<T>) -> Self {
        SpaceFile {
            label: space.label().to_string(),
            dimension: space.dimension(),
            vertices: space
                .vertices()
                .iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    pub fn to_space<T: Scalar>(&self) -> Result<StateSpace<T>> {
        let mut points = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != self.dimension {
                return Err(Error::input(format!(
                    "vertex {i} has {} coordinates, expected dimension {}",
                    v.len(),
                    self.dimension
                )));
            }
            points.push(v.iter().map(|s| T::parse(s)).collect::<Result<Vec<T>>>()?);
        }
        make_state_space(&self.label, points)
    }
}

pub fn parse_space<T: Scalar>(json: &str) -> Result<StateSpace<T>> {
    let file: SpaceFile =
        serde_json::from_str(json).map_err(|e| Error::input(format!("bad state-space file: {e}")))?;
    file.to_space()
}

pub fn space_to_json<T: Scalar>(space: &StateSpace<T>) -> String {
    serde_json::to_string_pretty(&SpaceFile::from_space(space)).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterFile {
    pub a: Vec<String>,
    pub b: String,
}

impl CounterFile {
    pub fn from_counter<T: Scalar>(phi: &Counter<T>) -> Self {
        CounterFile {
            a: phi.a.iter().map(|x| x.to_string()).collect(),
            b: phi.b.to_string(),
        }
    }

    pub fn to_counter<T: Scalar>(&self) -> Result<Counter<T>> {
        Ok(Counter::new(
            self.a.iter().map(|s| T::parse(s)).collect::<Result<_>>()?,
            T::parse(&self.b)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub faces: Vec<Vec<usize>>,
    pub cover_pairs: Vec<(usize, usize)>,
}

impl LatticeFile {
    pub fn from_lattice<T: Scalar>(lattice: &FaceLattice<T>) -> Self {
        LatticeFile {
            faces: lattice.faces.iter().map(|f| f.vertices().to_vec()).collect(),
            cover_pairs: lattice.cover_pairs.clone(),
        }
    }
}

/// `[["re","im"], ...]`.
pub fn parse_pure_state<T: Real>(json: &str) -> Result<PureState<T>> {
    let raw: Vec<(String, String)> =
        serde_json::from_str(json).map_err(|e| Error::input(format!("bad pure-state file: {e}")))?;
    let num = |s: &str| -> Result<T> {
        s.trim()
            .parse::<f64>()
            .map(T::lit)
            .map_err(|_| Error::input(format!("not a decimal number: {s:?}")))
    };
    let amps = raw
        .iter()
        .map(|(re, im)| Ok(Complex::new(num(re)?, num(im)?)))
        .collect::<Result<Vec<_>>>()?;
    PureState::new(amps)
}

pub fn pure_state_to_json<T: Real>(psi: &PureState<T>) -> String {
    let raw: Vec<(String, String)> = psi
        .amplitudes()
        .iter()
        .map(|z| (z.re.to_string(), z.im.to_string()))
        .collect();
    serde_json::to_string(&raw).expect("serializable")
}
