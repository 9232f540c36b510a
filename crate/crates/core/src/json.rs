//! JSON formats.
//!
//! ```text
//! ring:   {"ring":"zmod","m":5}  |  {"ring":"poly","base":{"ring":"zmod","m":5}}
//! value:  3                      |  [1,0,2]          (coefficients, constant term first)
//! matrix: {"n":2,"ring":<ring>,"rows":[[..],[..]]}
//! ```
//!
//! Parsing is strict: non-canonical values (residues `>= m`, trailing zero
//! coefficients) are rejected, so emitting a parsed document again
//! reproduces it byte for byte when it was produced by this module.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::ring::{Elem, Ring, RingKind};

#[derive(Serialize, Deserialize)]
#[serde(tag = "ring", deny_unknown_fields)]
enum RingRepr {
    #[serde(rename = "zmod")]
    ZMod { m: u64 },
    #[serde(rename = "poly")]
    Poly { base: Box<RingRepr> },
}

impl From<Ring> for RingRepr {
    fn from(r: Ring) -> RingRepr {
        let base = RingRepr::ZMod { m: r.modulus() };
        match r.kind() {
            RingKind::ZMod => base,
            RingKind::Poly => RingRepr::Poly { base: Box::new(base) },
        }
    }
}

impl TryFrom<RingRepr> for Ring {
    type Error = crate::Error;
    fn try_from(repr: RingRepr) -> Result<Ring> {
        match repr {
            RingRepr::ZMod { m } => Ring::zmod(m),
            RingRepr::Poly { base } => Ring::poly_over(Ring::try_from(*base)?),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RingRepr::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Ring, D::Error> {
        Ring::try_from(RingRepr::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[derive(Serialize)]
struct MatrixOut<'a> {
    n: usize,
    ring: Ring,
    rows: Vec<&'a [Elem]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixIn {
    n: usize,
    ring: Ring,
    rows: Vec<Vec<Elem>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixOut {
            n: self.n(),
            ring: self.ring(),
            rows: self.entries().chunks(self.n()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Matrix, D::Error> {
        let raw = MatrixIn::deserialize(d)?;
        if raw.rows.len() != raw.n {
            return Err(D::Error::custom(format!(
                "matrix declares n = {} but has {} rows",
                raw.n,
                raw.rows.len()
            )));
        }
        Matrix::from_rows(raw.ring, raw.rows).map_err(D::Error::custom)
    }
}

impl Serialize for SymmetricMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_matrix().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<SymmetricMatrix, D::Error> {
        SymmetricMatrix::new(Matrix::deserialize(d)?).map_err(D::Error::custom)
    }
}

impl Matrix {
    /// Canonical compact JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization is infallible")
    }

    /// Parses and validates a matrix; errors carry line and column.
    pub fn from_json(text: &str) -> Result<Matrix> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Ring {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ring serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Ring> {
        Ok(serde_json::from_str(text)?)
    }
}
