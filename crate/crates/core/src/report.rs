use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;

/// One violated identity: `lhs` should have equaled `rhs` at `probe`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub probe: String,
    pub lhs: Matrix,
    pub rhs: Matrix,
}

impl Failure {
    pub fn new(probe: impl Into<String>, lhs: Matrix, rhs: Matrix) -> Failure {
        Failure {
            probe: probe.into(),
            lhs,
            rhs,
        }
    }
}

/// Pushes a failure unless `lhs == rhs`.
pub(crate) fn expect_eq(failures: &mut Vec<Failure>, probe: impl FnOnce() -> String, lhs: Matrix, rhs: Matrix) {
    if lhs != rhs {
        failures.push(Failure::new(probe(), lhs, rhs));
    }
}
