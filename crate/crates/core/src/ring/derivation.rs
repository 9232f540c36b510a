use std::fmt;

use super::{Elem, Ring, RingValue};
use crate::error::{Error, Result};

/// A derivation `δ` of the base ring.
///
/// On `Z_m` every derivation vanishes (`δ(1) = 0` and additivity force it),
/// so only [`BaseDerivation::Zero`] is accepted there. On `Z_m[t]` the
/// derivations offered are `f · d/dt` for a fixed polynomial `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseDerivation {
    Zero,
    /// `d/dt`
    FormalDerivative,
    /// `p ↦ f · dp/dt`
    ScaledFormalDerivative(RingValue),
}

impl BaseDerivation {
    /// `t · d/dt` on the given polynomial ring.
    pub fn t_formal_derivative(ring: Ring) -> Result<BaseDerivation> {
        let t = ring.t()?;
        Ok(BaseDerivation::ScaledFormalDerivative(RingValue::from_canonical(ring, t)))
    }

    /// Checks that this derivation is defined on `ring`.
    pub fn check(&self, ring: Ring) -> Result<()> {
        match self {
            BaseDerivation::Zero => Ok(()),
            BaseDerivation::FormalDerivative if ring.is_poly() => Ok(()),
            BaseDerivation::FormalDerivative => Err(Error::domain(format!(
                "d/dt is not defined on {ring}; only the zero derivation exists there"
            ))),
            BaseDerivation::ScaledFormalDerivative(f) => {
                if !ring.is_poly() {
                    return Err(Error::domain(format!(
                        "f·d/dt is not defined on {ring}; only the zero derivation exists there"
                    )));
                }
                if f.ring() != ring {
                    return Err(Error::domain(format!(
                        "scaling factor lives in {}, not {ring}",
                        f.ring()
                    )));
                }
                Ok(())
            }
        }
    }

    /// `δ(p)`.
    pub fn apply(&self, p: &RingValue) -> Result<RingValue> {
        self.check(p.ring())?;
        Ok(RingValue::from_canonical(
            p.ring(),
            self.apply_elem(p.ring(), p.elem()),
        ))
    }

    /// `δ(p)` on a raw payload. The caller has already run [`check`](Self::check).
    pub fn apply_elem(&self, ring: Ring, p: &Elem) -> Elem {
        match self {
            BaseDerivation::Zero => ring.zero(),
            BaseDerivation::FormalDerivative => ring.formal_derivative(p),
            BaseDerivation::ScaledFormalDerivative(f) => {
                ring.mul(f.elem(), &ring.formal_derivative(p))
            }
        }
    }
}

impl fmt::Display for BaseDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseDerivation::Zero => f.write_str("zero"),
            BaseDerivation::FormalDerivative => f.write_str("d/dt"),
            BaseDerivation::ScaledFormalDerivative(s) => write!(f, "({s})*d/dt"),
        }
    }
}
