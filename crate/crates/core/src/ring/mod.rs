//! Exact commutative rings in which 2 is invertible.
//!
//! Two families are supported: the residue rings `Z_m` for odd `m >= 3`, and
//! the polynomial rings `Z_m[t]` over them. A [`Ring`] is a small `Copy`
//! descriptor; elements are stored as canonical [`Elem`] payloads and paired
//! with their ring in [`RingValue`] when they cross the public API.
//!
//! Canonical forms: residues live in `[0, m)`, polynomial coefficients are
//! little-endian (constant term first) with trailing zeros stripped, so the
//! zero polynomial is the empty list. Equality of payloads is equality of
//! ring elements.

mod derivation;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use derivation::BaseDerivation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    /// `Z_m`
    ZMod,
    /// `Z_m[t]`
    Poly,
}

/// Descriptor of a supported ring. Only constructible through the checked
/// constructors, so every `Ring` value has an odd modulus `>= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    kind: RingKind,
    modulus: u64,
}

/// Canonical payload of a ring element. The variant must match the kind of
/// the ring it is used with; use [`Ring::check`] on untrusted payloads.
///
/// Serializes as a bare integer (residue) or an integer array (coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Elem {
    Residue(u64),
    Poly(Vec<u64>),
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 3 {
        return Err(Error::InvalidRing(format!(
            "modulus {m} is too small: need an odd modulus >= 3 so that 2 is invertible"
        )));
    }
    if m.is_multiple_of(2) {
        return Err(Error::InvalidRing(format!(
            "modulus {m} is even: 2 is invertible in Z_m only for odd m"
        )));
    }
    Ok(())
}

#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn trim(mut coeffs: Vec<u64>) -> Vec<u64> {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    coeffs
}

impl Ring {
    /// `Z_m`. Fails with [`Error::InvalidRing`] unless `m` is odd and at least 3.
    pub fn zmod(m: u64) -> Result<Ring> {
        check_modulus(m)?;
        Ok(Ring {
            kind: RingKind::ZMod,
            modulus: m,
        })
    }

    /// `Z_m[t]`.
    pub fn poly(m: u64) -> Result<Ring> {
        check_modulus(m)?;
        Ok(Ring {
            kind: RingKind::Poly,
            modulus: m,
        })
    }

    /// Polynomials over `base`, which must itself be a `Z_m`.
    pub fn poly_over(base: Ring) -> Result<Ring> {
        match base.kind {
            RingKind::ZMod => Ring::poly(base.modulus),
            RingKind::Poly => Err(Error::InvalidRing(
                "polynomial rings are only supported over Z_m".into(),
            )),
        }
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The coefficient ring: `Z_m` for both `Z_m` and `Z_m[t]`.
    pub fn base(&self) -> Ring {
        Ring {
            kind: RingKind::ZMod,
            modulus: self.modulus,
        }
    }

    pub fn is_poly(&self) -> bool {
        self.kind == RingKind::Poly
    }

    pub fn zero(&self) -> Elem {
        match self.kind {
            RingKind::ZMod => Elem::Residue(0),
            RingKind::Poly => Elem::Poly(Vec::new()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    /// Image of an integer under the unique ring map `Z -> R`.
    pub fn from_i64(&self, k: i64) -> Elem {
        let m = self.modulus as i128;
        let r = (k as i128).rem_euclid(m) as u64;
        match self.kind {
            RingKind::ZMod => Elem::Residue(r),
            RingKind::Poly => Elem::Poly(if r == 0 { Vec::new() } else { vec![r] }),
        }
    }

    /// The indeterminate `t`; only exists in polynomial rings.
    pub fn t(&self) -> Result<Elem> {
        match self.kind {
            RingKind::Poly => Ok(Elem::Poly(vec![0, 1])),
            RingKind::ZMod => Err(Error::domain(format!("{self} has no indeterminate t"))),
        }
    }

    /// Builds a polynomial from coefficients given constant term first,
    /// reducing them modulo `m`.
    pub fn poly_from_coeffs(&self, coeffs: &[i64]) -> Result<Elem> {
        if self.kind != RingKind::Poly {
            return Err(Error::domain(format!("{self} is not a polynomial ring")));
        }
        let m = self.modulus as i128;
        Ok(Elem::Poly(trim(
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(m) as u64)
                .collect(),
        )))
    }

    /// Verifies that `e` is a canonical payload for this ring.
    pub fn check(&self, e: &Elem) -> Result<()> {
        let m = self.modulus;
        match (self.kind, e) {
            (RingKind::ZMod, Elem::Residue(r)) => {
                if *r >= m {
                    return Err(Error::domain(format!(
                        "residue {r} is not canonical modulo {m}"
                    )));
                }
            }
            (RingKind::Poly, Elem::Poly(c)) => {
                if let Some(bad) = c.iter().find(|&&x| x >= m) {
                    return Err(Error::domain(format!(
                        "coefficient {bad} is not canonical modulo {m}"
                    )));
                }
                if c.last() == Some(&0) {
                    return Err(Error::domain(
                        "polynomial has trailing zero coefficients",
                    ));
                }
            }
            (RingKind::ZMod, Elem::Poly(_)) => {
                return Err(Error::domain(format!("polynomial value given for {self}")))
            }
            (RingKind::Poly, Elem::Residue(_)) => {
                return Err(Error::domain(format!(
                    "scalar value given for {self}; polynomials are coefficient lists"
                )))
            }
        }
        Ok(())
    }

    /// Re-canonicalizes a payload: reduces residues and strips trailing zeros.
    pub fn canonicalize(&self, e: Elem) -> Elem {
        let m = self.modulus;
        match e {
            Elem::Residue(r) => Elem::Residue(r % m),
            Elem::Poly(c) => Elem::Poly(trim(c.into_iter().map(|x| x % m).collect())),
        }
    }

    pub fn is_zero(&self, e: &Elem) -> bool {
        match e {
            Elem::Residue(r) => *r == 0,
            Elem::Poly(c) => c.is_empty(),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let m = self.modulus;
        match (a, b) {
            (Elem::Residue(x), Elem::Residue(y)) => Elem::Residue(add_mod(*x, *y, m)),
            (Elem::Poly(x), Elem::Poly(y)) => {
                let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
                let mut out = long.clone();
                for (o, s) in out.iter_mut().zip(short) {
                    *o = add_mod(*o, *s, m);
                }
                Elem::Poly(trim(out))
            }
            _ => panic!("ring element kinds do not match"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        let m = self.modulus;
        match a {
            Elem::Residue(x) => Elem::Residue(sub_mod(0, *x, m)),
            Elem::Poly(c) => Elem::Poly(c.iter().map(|&x| sub_mod(0, x, m)).collect()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        let m = self.modulus;
        match (a, b) {
            (Elem::Residue(x), Elem::Residue(y)) => Elem::Residue(sub_mod(*x, *y, m)),
            (Elem::Poly(x), Elem::Poly(y)) => {
                let len = x.len().max(y.len());
                let out = (0..len)
                    .map(|k| {
                        sub_mod(
                            x.get(k).copied().unwrap_or(0),
                            y.get(k).copied().unwrap_or(0),
                            m,
                        )
                    })
                    .collect();
                Elem::Poly(trim(out))
            }
            _ => panic!("ring element kinds do not match"),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let m = self.modulus;
        match (a, b) {
            (Elem::Residue(x), Elem::Residue(y)) => Elem::Residue(mul_mod(*x, *y, m)),
            (Elem::Poly(x), Elem::Poly(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Elem::Poly(Vec::new());
                }
                let mut out = vec![0u64; x.len() + y.len() - 1];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        out[i + j] = add_mod(out[i + j], mul_mod(xi, yj, m), m);
                    }
                }
                // a zero leading product is possible when m is composite
                Elem::Poly(trim(out))
            }
            _ => panic!("ring element kinds do not match"),
        }
    }

    /// Multiplies by an integer.
    pub fn scale(&self, k: i64, a: &Elem) -> Elem {
        self.mul(&self.from_i64(k), a)
    }

    /// The inverse of 2, which is `(m + 1) / 2` in `Z_m`.
    pub fn half_unit(&self) -> Elem {
        self.half(&self.one())
    }

    /// The unique `h` with `2h = a`.
    pub fn half(&self, a: &Elem) -> Elem {
        let inv2 = (self.modulus - 1) / 2 + 1;
        match a {
            Elem::Residue(x) => Elem::Residue(mul_mod(*x, inv2, self.modulus)),
            Elem::Poly(c) => Elem::Poly(c.iter().map(|&x| mul_mod(x, inv2, self.modulus)).collect()),
        }
    }

    /// Formal derivative `d/dt`. Zero on `Z_m`, where no nonzero derivation exists.
    pub fn formal_derivative(&self, a: &Elem) -> Elem {
        let m = self.modulus;
        match a {
            Elem::Residue(_) => Elem::Residue(0),
            Elem::Poly(c) => Elem::Poly(trim(
                c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, &x)| mul_mod(k as u64 % m, x, m))
                    .collect(),
            )),
        }
    }

    /// Human-readable rendering of a payload (`3`, `t^2 + 4`, ...).
    pub fn display(&self, e: &Elem) -> String {
        match e {
            Elem::Residue(r) => r.to_string(),
            Elem::Poly(c) if c.is_empty() => "0".to_string(),
            Elem::Poly(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, &x)| x != 0)
                    .map(|(k, &x)| match (k, x) {
                        (0, x) => x.to_string(),
                        (1, 1) => "t".to_string(),
                        (1, x) => format!("{x}t"),
                        (k, 1) => format!("t^{k}"),
                        (k, x) => format!("{x}t^{k}"),
                    })
                    .collect();
                terms.join(" + ")
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::ZMod => write!(f, "zmod:{}", self.modulus),
            RingKind::Poly => write!(f, "poly:zmod:{}", self.modulus),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    /// Parses `zmod:M` or `poly:zmod:M`.
    fn from_str(s: &str) -> Result<Ring> {
        let parse_m = |m: &str| {
            m.parse::<u64>()
                .map_err(|_| Error::InvalidRing(format!("bad modulus {m:?} in ring {s:?}")))
        };
        if let Some(m) = s.strip_prefix("poly:zmod:") {
            Ring::poly(parse_m(m)?)
        } else if let Some(m) = s.strip_prefix("zmod:") {
            Ring::zmod(parse_m(m)?)
        } else {
            Err(Error::InvalidRing(format!(
                "unknown ring {s:?}; expected zmod:M or poly:zmod:M"
            )))
        }
    }
}

/// An element together with the ring it lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingValue {
    ring: Ring,
    elem: Elem,
}

impl RingValue {
    /// Pairs a payload with its ring, rejecting non-canonical payloads.
    pub fn new(ring: Ring, elem: Elem) -> Result<RingValue> {
        ring.check(&elem)?;
        Ok(RingValue { ring, elem })
    }

    pub(crate) fn from_canonical(ring: Ring, elem: Elem) -> RingValue {
        debug_assert!(ring.check(&elem).is_ok());
        RingValue { ring, elem }
    }

    pub fn from_i64(ring: Ring, k: i64) -> RingValue {
        RingValue {
            ring,
            elem: ring.from_i64(k),
        }
    }

    pub fn zero(ring: Ring) -> RingValue {
        RingValue::from_i64(ring, 0)
    }

    pub fn one(ring: Ring) -> RingValue {
        RingValue::from_i64(ring, 1)
    }

    /// Polynomial from coefficients, constant term first.
    pub fn poly(ring: Ring, coeffs: &[i64]) -> Result<RingValue> {
        Ok(RingValue {
            ring,
            elem: ring.poly_from_coeffs(coeffs)?,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn elem(&self) -> &Elem {
        &self.elem
    }

    pub fn into_elem(self) -> Elem {
        self.elem
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.elem)
    }

    fn same_ring(&self, other: &RingValue) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::domain(format!(
                "ring mismatch: {} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &RingValue) -> Result<RingValue> {
        self.same_ring(other)?;
        Ok(RingValue {
            ring: self.ring,
            elem: self.ring.add(&self.elem, &other.elem),
        })
    }

    pub fn try_sub(&self, other: &RingValue) -> Result<RingValue> {
        self.same_ring(other)?;
        Ok(RingValue {
            ring: self.ring,
            elem: self.ring.sub(&self.elem, &other.elem),
        })
    }

    pub fn try_mul(&self, other: &RingValue) -> Result<RingValue> {
        self.same_ring(other)?;
        Ok(RingValue {
            ring: self.ring,
            elem: self.ring.mul(&self.elem, &other.elem),
        })
    }

    /// The unique `h` with `h + h = self`.
    pub fn half(&self) -> RingValue {
        RingValue {
            ring: self.ring,
            elem: self.ring.half(&self.elem),
        }
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.display(&self.elem))
    }
}

// The operator forms panic on ring mismatch; use the `try_*` methods on untrusted input.

impl Add for &RingValue {
    type Output = RingValue;
    fn add(self, rhs: &RingValue) -> RingValue {
        self.try_add(rhs).expect("ring mismatch in +")
    }
}

impl Sub for &RingValue {
    type Output = RingValue;
    fn sub(self, rhs: &RingValue) -> RingValue {
        self.try_sub(rhs).expect("ring mismatch in -")
    }
}

impl Mul for &RingValue {
    type Output = RingValue;
    fn mul(self, rhs: &RingValue) -> RingValue {
        self.try_mul(rhs).expect("ring mismatch in *")
    }
}

impl Neg for &RingValue {
    type Output = RingValue;
    fn neg(self) -> RingValue {
        RingValue {
            ring: self.ring,
            elem: self.ring.neg(&self.elem),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u64, k: i64) -> RingValue {
        RingValue::from_i64(Ring::zmod(m).unwrap(), k)
    }

    #[test]
    fn zmod_add_and_mul() {
        assert_eq!(&z(5, 3) + &z(5, 4), z(5, 2));
        assert_eq!(&z(5, 3) * &z(5, 4), z(5, 2));
        for k in 0..5 {
            assert_eq!(&z(5, k) + &z(5, 0), z(5, k));
        }
    }

    #[test]
    fn poly_coefficients_reduce() {
        let r = Ring::poly(9).unwrap();
        let a = RingValue::poly(r, &[1, 1]).unwrap();
        let b = RingValue::poly(r, &[0, 8]).unwrap();
        assert_eq!(&a + &b, RingValue::one(r));
    }

    #[test]
    fn poly_product_matches_schoolbook() {
        // (t + 1)(t + 4) = t^2 + 5t + 4 = t^2 + 4 over Z_5
        let r = Ring::poly(5).unwrap();
        let a = RingValue::poly(r, &[1, 1]).unwrap();
        let b = RingValue::poly(r, &[-1, 1]).unwrap();
        assert_eq!(b, RingValue::poly(r, &[4, 1]).unwrap());
        assert_eq!(&a * &b, RingValue::poly(r, &[4, 0, 1]).unwrap());
    }

    #[test]
    fn composite_modulus_can_kill_leading_term() {
        // (3t)(3t) = 9t^2 = 0 over Z_9
        let r = Ring::poly(9).unwrap();
        let a = RingValue::poly(r, &[0, 3]).unwrap();
        assert!((&a * &a).is_zero());
    }

    #[test]
    fn half_inverts_doubling() {
        assert_eq!(z(5, 1).half(), z(5, 3));
        assert_eq!(z(9, 1).half(), z(9, 5));
        let r = Ring::zmod(9).unwrap();
        for k in 0..9 {
            let a = z(9, k);
            let h = a.half();
            assert_eq!(&h + &h, a);
        }
        assert_eq!(r.half_unit(), Elem::Residue(5));
    }

    #[test]
    fn even_and_tiny_moduli_are_rejected() {
        let err = Ring::zmod(6).unwrap_err();
        assert!(matches!(err, Error::InvalidRing(_)));
        assert!(err.to_string().contains("2 is invertible"));
        assert!(Ring::zmod(1).is_err());
        assert!(Ring::zmod(0).is_err());
        assert!(Ring::poly(4).is_err());
        assert!(Ring::poly_over(Ring::poly(5).unwrap()).is_err());
        assert_eq!(Ring::poly_over(Ring::zmod(7).unwrap()).unwrap(), Ring::poly(7).unwrap());
    }

    #[test]
    fn mismatched_rings_are_domain_errors() {
        let err = z(5, 1).try_add(&z(7, 1)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let p = RingValue::one(Ring::poly(5).unwrap());
        assert!(z(5, 1).try_mul(&p).is_err());
    }

    #[test]
    fn canonical_form_is_checked() {
        let r = Ring::zmod(5).unwrap();
        assert!(RingValue::new(r, Elem::Residue(5)).is_err());
        assert!(RingValue::new(r, Elem::Poly(vec![1])).is_err());
        let p = Ring::poly(5).unwrap();
        assert!(RingValue::new(p, Elem::Poly(vec![1, 0])).is_err());
        assert!(RingValue::new(p, Elem::Poly(vec![1, 7])).is_err());
        assert!(RingValue::new(p, Elem::Poly(vec![])).is_ok());
        assert_eq!(p.canonicalize(Elem::Poly(vec![6, 5, 10])), Elem::Poly(vec![1]));
    }

    #[test]
    fn ring_strings_round_trip() {
        for s in ["zmod:5", "zmod:9", "poly:zmod:5"] {
            assert_eq!(s.parse::<Ring>().unwrap().to_string(), s);
        }
        assert!("zmod:6".parse::<Ring>().is_err());
        assert!("gf:5".parse::<Ring>().is_err());
        assert!("zmod:x".parse::<Ring>().is_err());
    }

    #[test]
    fn display_polynomials() {
        let r = Ring::poly(5).unwrap();
        assert_eq!(RingValue::poly(r, &[1, 3, 1]).unwrap().to_string(), "t^2 + 3t + 1");
        assert_eq!(RingValue::zero(r).to_string(), "0");
    }
}
