//! Inner derivations of the Jordan ring `H_n(R)` of symmetric matrices under
//! `x∘y = ½(xy + yx)`, and the reconstruction of 2-local ones.
//!
//! A pair list `(a_k, b_k)` acts by `D(x) = Σ a_k∘(b_k∘x) − b_k∘(a_k∘x)`.
//! Expanding the Jordan products gives `D(x) = [s, x]` with
//! `s = ¼ Σ [a_k, b_k]`, on all of `M_n(R)` and not only on `H_n(R)`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymmetricMatrix};
use crate::report::{expect_eq, Failure};
use crate::ring::Ring;
use crate::sample::{seeded, Sampler, DEFAULT_MAX_DEGREE};
use crate::two_local::{ReconstructionResult, TwoLocalOracle};

/// `Σ D_{a_k,b_k}` for a finite list of symmetric pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanPairDerivation {
    ring: Ring,
    n: usize,
    pairs: Vec<(SymmetricMatrix, SymmetricMatrix)>,
}

impl JordanPairDerivation {
    pub fn new(ring: Ring, n: usize, pairs: Vec<(SymmetricMatrix, SymmetricMatrix)>) -> Result<JordanPairDerivation> {
        for (k, (a, b)) in pairs.iter().enumerate() {
            for m in [a, b] {
                if m.ring() != ring || m.n() != n {
                    return Err(Error::domain(format!(
                        "pair {k} is not in H_{n} over {ring}"
                    )));
                }
            }
        }
        Ok(JordanPairDerivation { ring, n, pairs })
    }

    pub fn empty(ring: Ring, n: usize) -> JordanPairDerivation {
        JordanPairDerivation {
            ring,
            n,
            pairs: Vec::new(),
        }
    }

    /// `m` pairs with independent random symmetric entries.
    pub fn random<R: Rng + ?Sized>(sampler: &Sampler, rng: &mut R, n: usize, m: usize) -> JordanPairDerivation {
        let pairs = (0..m)
            .map(|_| (sampler.symmetric(rng, n), sampler.symmetric(rng, n)))
            .collect();
        JordanPairDerivation {
            ring: sampler.ring(),
            n,
            pairs,
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(SymmetricMatrix, SymmetricMatrix)] {
        &self.pairs
    }

    /// `Σ a_k∘(b_k∘x) − b_k∘(a_k∘x)`.
    pub fn apply(&self, x: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        jordan_inner_apply(self, x)
    }

    /// `¼ Σ [a_k, b_k]`.
    pub fn commutator_form(&self) -> Matrix {
        pairs_to_commutator(self)
    }
}

fn pair_action(pd: &JordanPairDerivation, x: &Matrix) -> Result<Matrix> {
    if x.ring() != pd.ring || x.n() != pd.n {
        return Err(Error::domain(format!(
            "pair derivation acts on {}x{} matrices over {}",
            pd.n, pd.n, pd.ring
        )));
    }
    let mut acc = Matrix::zeros(pd.ring, pd.n);
    for (a, b) in &pd.pairs {
        let (a, b) = (a.as_matrix(), b.as_matrix());
        let ab = a.jordan_mul(&b.jordan_mul(x)?)?;
        let ba = b.jordan_mul(&a.jordan_mul(x)?)?;
        acc = &acc + &(&ab - &ba);
    }
    Ok(acc)
}

pub fn jordan_inner_apply(pd: &JordanPairDerivation, x: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    pair_action(pd, x.as_matrix()).map(SymmetricMatrix::new_unchecked)
}

/// The same formula applied to an arbitrary matrix of `M_n(R)`.
pub fn jordan_inner_apply_full(pd: &JordanPairDerivation, x: &Matrix) -> Result<Matrix> {
    pair_action(pd, x)
}

pub fn pairs_to_commutator(pd: &JordanPairDerivation) -> Matrix {
    let sum = Matrix::sum(
        pd.ring,
        pd.n,
        &pd.pairs
            .iter()
            .map(|(a, b)| a.commutator(b).expect("pairs share a shape"))
            .collect::<Vec<_>>(),
    );
    sum.half().half()
}

/// Every diagonal entry of `Σ [a_k, b_k]` is zero.
pub fn check_diag_zero(pairs: &[(Matrix, Matrix)]) -> Result<bool> {
    let Some((first, _)) = pairs.first() else {
        return Ok(true);
    };
    let mut sum = Matrix::zeros(first.ring(), first.n());
    for (k, (a, b)) in pairs.iter().enumerate() {
        if !a.is_symmetric() || !b.is_symmetric() {
            return Err(Error::domain(format!("pair {k} is not symmetric")));
        }
        sum = sum.try_add(&a.commutator(b)?)?;
    }
    Ok(sum.has_zero_diagonal())
}

/// The corner equalities between diagonal-probe witnesses `d(ii)` and `d(jj)`:
///
/// ```text
/// e_ii d(ii) e_jj = e_ii d(jj) e_jj      e_jj d(ii) e_ii = e_jj d(jj) e_ii
/// e_jj d(ii) e_kk = e_jj d(jj) e_kk      e_kk d(ii) e_jj = e_kk d(jj) e_jj    (k ≠ i, j)
/// e_ii d(ii) e_kk = e_ii d(jj) e_kk      e_kk d(ii) e_ii = e_kk d(jj) e_ii    (k ≠ i, j)
/// ```
///
/// Only the first line is forced by `Δ(e_ii) = [d(ii), e_ii]` and
/// `Δ(e_jj) = [d(jj), e_jj]`; see [`JordanNoise::ProbeCommutant`].
pub fn check_corner_consistency(d_ii: &Matrix, d_jj: &Matrix, i: usize, j: usize) -> Result<bool> {
    d_ii.check_compatible(d_jj)?;
    if i == j {
        return Err(Error::domain(format!("corner consistency needs i ≠ j, got {i} = {j}")));
    }
    let n = d_ii.n();
    let mut clauses = vec![(i, j), (j, i)];
    for k in (1..=n).filter(|&k| k != i && k != j) {
        clauses.extend([(j, k), (k, j), (i, k), (k, i)]);
    }
    for (r, c) in clauses {
        if d_ii.corner(r, c)? != d_jj.corner(r, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_determined_corners(d_ii: &Matrix, d_jj: &Matrix, i: usize, j: usize) -> Result<bool> {
    Ok(d_ii.corner(i, j)? == d_jj.corner(i, j)? && d_ii.corner(j, i)? == d_jj.corner(j, i)?)
}

/// `x ↦ e·Δ(x)·e` with `e = e_ii + e_jj`, on matrices supported in the
/// `{i, j}` rows and columns.
#[derive(Clone, Debug)]
pub struct CornerCompression {
    oracle: TwoLocalOracle,
    i: usize,
    j: usize,
    e: Matrix,
}

pub fn corner_compress(oracle: &TwoLocalOracle, i: usize, j: usize) -> Result<CornerCompression> {
    if i == j {
        return Err(Error::domain(format!("corner compression needs i ≠ j, got {i} = {j}")));
    }
    let (ring, n) = (oracle.ring(), oracle.n());
    let e = &Matrix::unit(ring, n, i, i)? + &Matrix::unit(ring, n, j, j)?;
    Ok(CornerCompression {
        oracle: oracle.clone(),
        i,
        j,
        e,
    })
}

impl CornerCompression {
    pub fn indices(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    /// The idempotent `e_ii + e_jj`.
    pub fn idempotent(&self) -> &Matrix {
        &self.e
    }

    fn check_support(&self, x: &Matrix) -> Result<()> {
        self.e.check_compatible(x)?;
        if &(&self.e * x) * &self.e != *x {
            return Err(Error::domain(format!(
                "matrix is not supported on the ({},{}) corner",
                self.i, self.j
            )));
        }
        Ok(())
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        self.check_support(x)?;
        Ok(&(&self.e * &self.oracle.evaluate(x)?) * &self.e)
    }

    /// `¼ e(Σ[a_k,b_k])e·x − ¼ x·e(Σ[a_k,b_k])e` for the pair list `pd`.
    pub fn predicted(&self, pd: &JordanPairDerivation, x: &Matrix) -> Result<Matrix> {
        self.check_support(x)?;
        let s = pairs_to_commutator(pd);
        let ese = &(&self.e * &s) * &self.e;
        ese.commutator(x)
    }
}

/// Diagonal-probe witnesses `d(ii) = ¼ Σ [a_k, b_k]`, stored in reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanWitnessFamily {
    ring: Ring,
    n: usize,
    diag: Vec<Matrix>,
    validated: bool,
}

impl JordanWitnessFamily {
    /// `diag[i-1]` is `d(ii)`.
    pub fn new(diag: Vec<Matrix>) -> Result<JordanWitnessFamily> {
        let first = diag.first().ok_or_else(|| Error::domain("empty Jordan witness family"))?;
        let (ring, n) = (first.ring(), first.n());
        if diag.len() != n {
            return Err(Error::domain(format!(
                "{n}x{n} witnesses need {n} diagonal probes, got {}",
                diag.len()
            )));
        }
        for d in &diag {
            first.check_compatible(d)?;
        }
        Ok(JordanWitnessFamily {
            ring,
            n,
            diag,
            validated: false,
        })
    }

    /// Reduces one pair list per diagonal probe.
    pub fn from_pair_lists(lists: &[JordanPairDerivation]) -> Result<JordanWitnessFamily> {
        JordanWitnessFamily::new(lists.iter().map(pairs_to_commutator).collect())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `d(ii)`, 1-based.
    pub fn witness(&self, i: usize) -> Result<&Matrix> {
        crate::matrix::check_index(self.n, i)?;
        Ok(&self.diag[i - 1])
    }

    pub fn diag(&self) -> &[Matrix] {
        &self.diag
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Each `d(ii)` is skew and reproduces `Δ(e_ii)`.
    pub fn check_against(&self, oracle: &TwoLocalOracle) -> Result<()> {
        if oracle.ring() != self.ring || oracle.n() != self.n {
            return Err(Error::contract("Jordan witness family and oracle act on different rings"));
        }
        for (idx, d) in self.diag.iter().enumerate() {
            let i = idx + 1;
            if !d.is_skew() {
                return Err(Error::contract(format!("d({i}{i}) is not skew-symmetric")));
            }
            let e = Matrix::unit(self.ring, self.n, i, i)?;
            if oracle.evaluate(&e)? != d.commutator(&e)? {
                return Err(Error::contract(format!("d({i}{i}) does not reproduce Δ(e_{{{i},{i}}})")));
            }
        }
        Ok(())
    }

    pub fn validate(mut self, oracle: &TwoLocalOracle) -> Result<JordanWitnessFamily> {
        self.check_against(oracle)?;
        self.validated = true;
        Ok(self)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JordanFamilyRepr {
    n: usize,
    ring: Ring,
    diag: Vec<Matrix>,
}

impl Serialize for JordanWitnessFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JordanFamilyRepr {
            n: self.n,
            ring: self.ring,
            diag: self.diag.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JordanWitnessFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<JordanWitnessFamily, D::Error> {
        use serde::de::Error as _;
        let repr = JordanFamilyRepr::deserialize(d)?;
        let family = JordanWitnessFamily::new(repr.diag).map_err(D::Error::custom)?;
        if family.n != repr.n || family.ring != repr.ring {
            return Err(D::Error::custom("witness matrices disagree with the declared n or ring"));
        }
        Ok(family)
    }
}

/// `a_{i,j} = e_ii d(ii) e_jj`, `ā = Σ a_{i,j}`.
///
/// Refuses unvalidated families. The diagonal corners are computed and must
/// vanish; the `(i,j)` and `(j,i)` corners of `d(ii)` and `d(jj)` must agree.
/// Both conditions follow from validation, so a violation means the checks
/// themselves are broken.
pub fn reconstruct_abar_jordan(jwf: &JordanWitnessFamily) -> Result<ReconstructionResult> {
    if !jwf.validated {
        return Err(Error::contract(
            "Jordan witness family has not been validated against an oracle",
        ));
    }
    let n = jwf.n;
    let mut parts = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let part = jwf.diag[i - 1].corner(i, j)?;
            if i == j && !part.is_zero() {
                return Err(Error::contract(format!("d({i}{i}) has a nonzero ({i},{i}) entry")));
            }
            if i < j && !check_determined_corners(&jwf.diag[i - 1], &jwf.diag[j - 1], i, j)? {
                return Err(Error::contract(format!(
                    "d({i}{i}) and d({j}{j}) disagree on the ({i},{j}) corners"
                )));
            }
            parts.push(part);
        }
    }
    let abar = Matrix::sum(jwf.ring, n, &parts);
    Ok(ReconstructionResult { abar, parts })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanTheoremReport {
    pub abar: Matrix,
    pub samples: usize,
    pub leibniz_pairs: usize,
    pub failures: Vec<Failure>,
}

impl JordanTheoremReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Validates `jwf`, reconstructs `ā` and checks, recording every failure:
/// `ā` is skew; `Δ(x) = [ā, x]` and `Δ(x)` is symmetric for every sample;
/// `Δ(ē_ij) = [ā, ē_ij]` for all `i < j`; and `D = [ā, ·]` satisfies
/// `D(x∘y) = D(x)∘y + x∘D(y)` on every pair.
pub fn verify_jordan_theorem(
    oracle: &TwoLocalOracle,
    jwf: &JordanWitnessFamily,
    samples: &[SymmetricMatrix],
    pairs: &[(SymmetricMatrix, SymmetricMatrix)],
) -> Result<JordanTheoremReport> {
    let jwf = jwf.clone().validate(oracle)?;
    let abar = reconstruct_abar_jordan(&jwf)?.abar;
    let (ring, n) = (jwf.ring, jwf.n);
    let mut failures = Vec::new();
    expect_eq(&mut failures, || "ā skew".into(), abar.transpose(), abar.neg());
    for (k, x) in samples.iter().enumerate() {
        let dx = oracle.evaluate(x)?;
        expect_eq(&mut failures, || format!("sample {k}: Δ(x) symmetric"), dx.transpose(), dx.clone());
        let rhs = abar.commutator(x)?;
        expect_eq(&mut failures, || format!("sample {k}: Δ(x) vs [ā, x]"), dx, rhs);
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let e = SymmetricMatrix::jordan_unit(ring, n, i, j)?;
            let lhs = oracle.evaluate(&e)?;
            let rhs = abar.commutator(&e)?;
            expect_eq(&mut failures, || format!("Δ(ē_{{{i},{j}}}) vs [ā, ē_{{{i},{j}}}]"), lhs, rhs);
        }
    }
    let d = |x: &Matrix| abar.commutator(x);
    for (k, (x, y)) in pairs.iter().enumerate() {
        let (x, y) = (x.as_matrix(), y.as_matrix());
        let lhs = d(&x.jordan_mul(y)?)?;
        let rhs = &d(x)?.jordan_mul(y)? + &x.jordan_mul(&d(y)?)?;
        expect_eq(&mut failures, || format!("pair {k}: D(x∘y) vs D(x)∘y + x∘D(y)"), lhs, rhs);
    }
    Ok(JordanTheoremReport {
        abar,
        samples: samples.len(),
        leibniz_pairs: pairs.len(),
        failures,
    })
}

/// How generated diagonal witnesses differ from the hidden pair list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JordanNoise {
    /// Every probe uses the hidden list itself.
    None,
    /// Each probe gets its own rewriting of the hidden list: pairs split
    /// along a random summand, swapped with a sign, padded with `(r, r)`
    /// and shuffled. The reduced form is unchanged.
    Reexpress,
    /// As `Reexpress`, plus pairs `(4w·e_jj, ē_jk)` with `j, k ≠ i` in the
    /// list for probe `i`. These add a skew term with zero row and column
    /// `i`, invisible at `e_ii`, so the family still validates while the
    /// corner equalities involving a third index `k` generally fail.
    ProbeCommutant,
}

impl fmt::Display for JordanNoise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JordanNoise::None => "none",
            JordanNoise::Reexpress => "reexpress",
            JordanNoise::ProbeCommutant => "probe-commutant",
        })
    }
}

impl FromStr for JordanNoise {
    type Err = Error;
    fn from_str(s: &str) -> Result<JordanNoise> {
        match s {
            "none" => Ok(JordanNoise::None),
            "reexpress" => Ok(JordanNoise::Reexpress),
            "probe-commutant" => Ok(JordanNoise::ProbeCommutant),
            other => Err(Error::domain(format!(
                "unknown Jordan noise {other:?}; expected none, reexpress or probe-commutant"
            ))),
        }
    }
}

fn reexpress<R: Rng + ?Sized>(hidden: &JordanPairDerivation, sampler: &Sampler, rng: &mut R) -> Vec<(SymmetricMatrix, SymmetricMatrix)> {
    let n = hidden.n;
    let sym = |m: Matrix| SymmetricMatrix::new_unchecked(m);
    let mut out = Vec::new();
    for (a, b) in &hidden.pairs {
        match rng.random_range(0..3) {
            0 => out.push((a.clone(), b.clone())),
            1 => out.push((b.clone(), sym(a.neg()))),
            _ => {
                let r = sampler.symmetric(rng, n);
                let rest = sym(a.as_matrix() - r.as_matrix());
                out.push((r, b.clone()));
                out.push((rest, b.clone()));
            }
        }
    }
    for _ in 0..rng.random_range(1..=2) {
        let r = sampler.symmetric(rng, n);
        out.push((r.clone(), r));
    }
    out.shuffle(rng);
    out
}

/// Builds the oracle `x ↦ Σ D_{a_k,b_k}(x)` for `hidden` and one reduced
/// witness per diagonal probe, rewritten according to `noise`.
pub fn generate_jordan_instance<R: Rng + ?Sized>(
    hidden: &JordanPairDerivation,
    noise: JordanNoise,
    sampler: &Sampler,
    rng: &mut R,
) -> (TwoLocalOracle, JordanWitnessFamily, Vec<JordanPairDerivation>) {
    let (ring, n) = (hidden.ring, hidden.n);
    let mut lists = Vec::with_capacity(n);
    for i in 1..=n {
        let mut pairs = match noise {
            JordanNoise::None => hidden.pairs.clone(),
            JordanNoise::Reexpress | JordanNoise::ProbeCommutant => reexpress(hidden, sampler, rng),
        };
        if noise == JordanNoise::ProbeCommutant {
            let four = ring.from_i64(4);
            for j in (1..=n).filter(|&j| j != i) {
                for k in (j + 1..=n).filter(|&k| k != i) {
                    let w = ring.mul(&four, &sampler.elem(rng));
                    let ejj = SymmetricMatrix::new_unchecked(Matrix::unit(ring, n, j, j).expect("index in range").scale(&w));
                    pairs.push((ejj, SymmetricMatrix::jordan_unit(ring, n, j, k).expect("j ≠ k")));
                }
            }
        }
        lists.push(JordanPairDerivation { ring, n, pairs });
    }
    let family = JordanWitnessFamily::from_pair_lists(&lists).expect("n probes of matching shape");
    let oracle_pairs = hidden.clone();
    let oracle = TwoLocalOracle::new(ring, n, move |x| {
        jordan_inner_apply_full(&oracle_pairs, x).expect("oracle shape checked")
    });
    (oracle, family, lists)
}

/// [`generate_jordan_instance`] seeded from `seed`, entries of degree at most
/// [`DEFAULT_MAX_DEGREE`].
pub fn gen_jordan_instance(hidden: &JordanPairDerivation, noise: JordanNoise, seed: u64) -> (TwoLocalOracle, JordanWitnessFamily) {
    let sampler = Sampler::new(hidden.ring, DEFAULT_MAX_DEGREE);
    let (oracle, family, _) = generate_jordan_instance(hidden, noise, &sampler, &mut seeded(seed));
    (oracle, family)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5() -> Ring {
        Ring::zmod(5).unwrap()
    }

    fn z9() -> Ring {
        Ring::zmod(9).unwrap()
    }

    fn e(ring: Ring, n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(ring, n, i, j).unwrap()
    }

    fn ebar(ring: Ring, n: usize, i: usize, j: usize) -> SymmetricMatrix {
        SymmetricMatrix::jordan_unit(ring, n, i, j).unwrap()
    }

    fn single_pair() -> JordanPairDerivation {
        let a = SymmetricMatrix::diagonal_unit(z5(), 2, 1).unwrap();
        JordanPairDerivation::new(z5(), 2, vec![(a, ebar(z5(), 2, 1, 2))]).unwrap()
    }

    #[test]
    fn hand_example_action_and_commutator() {
        let pd = single_pair();
        let x = SymmetricMatrix::diagonal_unit(z5(), 2, 1).unwrap();
        assert_eq!(pd.apply(&x).unwrap(), ebar(z5(), 2, 1, 2));
        let s = pd.commutator_form();
        assert_eq!(s, (&e(z5(), 2, 1, 2) - &e(z5(), 2, 2, 1)).scale_int(4));
        assert_eq!(s.commutator(&x).unwrap(), *ebar(z5(), 2, 1, 2));
    }

    #[test]
    fn trivial_pair_lists() {
        let x = ebar(z5(), 2, 1, 2);
        assert!(JordanPairDerivation::empty(z5(), 2).apply(&x).unwrap().is_zero());
        let a = SymmetricMatrix::new(Matrix::from_ints(z5(), &[[1, 2], [2, 3]]).unwrap()).unwrap();
        let pd = JordanPairDerivation::new(z5(), 2, vec![(a.clone(), a)]).unwrap();
        assert!(pd.apply(&x).unwrap().is_zero());
        assert!(pd.commutator_form().is_zero());
    }

    #[test]
    fn shape_mismatch() {
        let pd = single_pair();
        assert!(pd.apply(&ebar(z5(), 3, 1, 2)).is_err());
        assert!(JordanPairDerivation::new(z9(), 2, single_pair().pairs().to_vec()).is_err());
    }

    #[test]
    fn diag_zero_examples() {
        let r = z5();
        let pair = (ebar(r, 2, 1, 2).into_matrix(), e(r, 2, 1, 1));
        assert_eq!(pair.0.commutator(&pair.1).unwrap(), &e(r, 2, 2, 1) - &e(r, 2, 1, 2));
        assert!(check_diag_zero(&[pair]).unwrap());
        let a = e(r, 2, 2, 2);
        assert!(check_diag_zero(&[(a.clone(), a)]).unwrap());
        assert!(check_diag_zero(&[]).unwrap());
        assert!(matches!(check_diag_zero(&[(e(r, 2, 1, 2), e(r, 2, 1, 1))]), Err(Error::Domain(_))));
    }

    #[test]
    fn corner_consistency_examples() {
        let sampler = Sampler::new(z9(), 0);
        let s = sampler.skew(&mut seeded(1), 3);
        assert!(check_corner_consistency(&s, &s, 1, 3).unwrap());
        assert!(check_corner_consistency(&s, &s, 2, 2).is_err());
    }

    #[test]
    fn compression_of_inner_map() {
        let r = z9();
        let sampler = Sampler::new(r, 0);
        let mut rng = seeded(4);
        let s = sampler.skew(&mut rng, 3);
        let oracle = TwoLocalOracle::from_inner(s.clone());
        let comp = corner_compress(&oracle, 1, 2).unwrap();
        let ese = &(comp.idempotent() * &s) * comp.idempotent();
        for _ in 0..20 {
            let full = sampler.symmetric(&mut rng, 3).into_matrix();
            let x = &(comp.idempotent() * &full) * comp.idempotent();
            let y = comp.apply(&x).unwrap();
            assert_eq!(y, ese.commutator(&x).unwrap());
            assert!(y.is_symmetric());
        }
        assert!(comp.apply(&e(r, 3, 3, 3)).is_err());
        assert!(corner_compress(&oracle, 2, 2).is_err());
        let zero = corner_compress(&TwoLocalOracle::zero(r, 3), 1, 3).unwrap();
        assert!(zero.apply(&e(r, 3, 1, 3)).unwrap().is_zero());
    }

    #[test]
    fn compression_matches_pair_prediction() {
        let sampler = Sampler::new(z9(), 0);
        let mut rng = seeded(8);
        let pd = JordanPairDerivation::random(&sampler, &mut rng, 3, 3);
        let p = pd.clone();
        let oracle = TwoLocalOracle::new(z9(), 3, move |x| jordan_inner_apply_full(&p, x).unwrap());
        let comp = corner_compress(&oracle, 2, 3).unwrap();
        let x = (&e(z9(), 3, 2, 3) + &e(z9(), 3, 3, 2)).scale_int(5);
        assert_eq!(comp.apply(&x).unwrap(), comp.predicted(&pd, &x).unwrap());
    }

    #[test]
    fn reconstruction_examples() {
        let r = z5();
        let zero = JordanWitnessFamily::new(vec![Matrix::zeros(r, 2); 2])
            .unwrap()
            .validate(&TwoLocalOracle::zero(r, 2))
            .unwrap();
        assert!(reconstruct_abar_jordan(&zero).unwrap().abar.is_zero());

        let s = (&e(r, 2, 1, 2) - &e(r, 2, 2, 1)).scale_int(4);
        let fam = JordanWitnessFamily::new(vec![s.clone(), s.clone()]).unwrap();
        assert!(matches!(reconstruct_abar_jordan(&fam), Err(Error::Contract(_))));
        let fam = fam.validate(&TwoLocalOracle::from_inner(s.clone())).unwrap();
        assert_eq!(reconstruct_abar_jordan(&fam).unwrap().abar, s);

        let s3 = Sampler::new(z9(), 0).skew(&mut seeded(2), 3);
        let fam = JordanWitnessFamily::new(vec![s3.clone(); 3])
            .unwrap()
            .validate(&TwoLocalOracle::from_inner(s3.clone()))
            .unwrap();
        assert_eq!(reconstruct_abar_jordan(&fam).unwrap().abar, s3);
    }

    #[test]
    fn validation_rejects_bad_witnesses() {
        let r = z5();
        let s = (&e(r, 2, 1, 2) - &e(r, 2, 2, 1)).scale_int(4);
        let oracle = TwoLocalOracle::from_inner(s.clone());
        let not_skew = JordanWitnessFamily::new(vec![e(r, 2, 1, 1), s.clone()]).unwrap();
        assert!(matches!(not_skew.validate(&oracle), Err(Error::Contract(_))));
        let wrong = JordanWitnessFamily::new(vec![s.neg(), s]).unwrap();
        assert!(matches!(wrong.validate(&oracle), Err(Error::Contract(_))));
        assert!(JordanWitnessFamily::new(vec![e(r, 2, 1, 1)]).is_err());
    }

    #[test]
    fn generator_modes() {
        let sampler = Sampler::new(z9(), 0);
        let hidden = JordanPairDerivation::random(&sampler, &mut seeded(5), 3, 2);
        let s = pairs_to_commutator(&hidden);

        let (_, fam) = gen_jordan_instance(&hidden, JordanNoise::None, 1);
        assert!(fam.diag().iter().all(|d| *d == s));

        let (oracle, fam, lists) = generate_jordan_instance(&hidden, JordanNoise::Reexpress, &sampler, &mut seeded(3));
        assert!(lists.iter().any(|l| l.pairs() != hidden.pairs()));
        assert!(fam.diag().iter().all(|d| *d == s));
        let fam = fam.validate(&oracle).unwrap();
        assert_eq!(reconstruct_abar_jordan(&fam).unwrap().abar, s);
    }

    #[test]
    fn probe_commutant_witnesses_validate_but_break_third_index_corners() {
        let sampler = Sampler::new(z9(), 0);
        let hidden = JordanPairDerivation::random(&sampler, &mut seeded(6), 3, 2);
        let s = pairs_to_commutator(&hidden);
        let mut broken = 0;
        for seed in 0..20 {
            let (oracle, fam) = gen_jordan_instance(&hidden, JordanNoise::ProbeCommutant, seed);
            let fam = fam.validate(&oracle).unwrap();
            assert_eq!(reconstruct_abar_jordan(&fam).unwrap().abar, s);
            let d = fam.diag();
            if !check_corner_consistency(&d[0], &d[1], 1, 2).unwrap() {
                broken += 1;
            }
        }
        assert!(broken > 0);
    }

    #[test]
    fn theorem_on_generated_and_zero_instances() {
        let sampler = Sampler::new(z5(), 0);
        let mut rng = seeded(9);
        let hidden = JordanPairDerivation::random(&sampler, &mut rng, 3, 2);
        let (oracle, fam) = gen_jordan_instance(&hidden, JordanNoise::Reexpress, 2);
        let samples: Vec<_> = (0..10).map(|_| sampler.symmetric(&mut rng, 3)).collect();
        let pairs: Vec<_> = (0..10)
            .map(|_| (sampler.symmetric(&mut rng, 3), sampler.symmetric(&mut rng, 3)))
            .collect();
        let report = verify_jordan_theorem(&oracle, &fam, &samples, &pairs).unwrap();
        assert!(report.holds(), "{:?}", report.failures);

        let zero = JordanWitnessFamily::new(vec![Matrix::zeros(z5(), 3); 3]).unwrap();
        let report = verify_jordan_theorem(&TwoLocalOracle::zero(z5(), 3), &zero, &samples, &pairs).unwrap();
        assert!(report.holds() && report.abar.is_zero());
    }

    #[test]
    fn non_derivation_oracle_is_reported() {
        // Δ agrees with [s,·] on the probes but not elsewhere: failures, not errors
        let r = z5();
        let s = (&e(r, 2, 1, 2) - &e(r, 2, 2, 1)).scale_int(4);
        let inner = s.clone();
        let oracle = TwoLocalOracle::new(r, 2, move |x| {
            if x.is_zero() || x.entry(1, 2).unwrap().is_zero() {
                inner.commutator(x).unwrap()
            } else {
                Matrix::zeros(r, 2)
            }
        });
        let fam = JordanWitnessFamily::new(vec![s.clone(), s]).unwrap();
        let sample = ebar(r, 2, 1, 2);
        let report = verify_jordan_theorem(&oracle, &fam, &[sample], &[]).unwrap();
        assert!(!report.holds());
        assert_eq!(report.failures.len(), 2);
    }

    #[test]
    fn noise_strings() {
        for s in ["none", "reexpress", "probe-commutant"] {
            assert_eq!(s.parse::<JordanNoise>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn family_json_round_trip() {
        let s = Sampler::new(z9(), 0).skew(&mut seeded(1), 3);
        let fam = JordanWitnessFamily::new(vec![s; 3]).unwrap();
        let text = serde_json::to_string(&fam).unwrap();
        assert_eq!(serde_json::from_str::<JordanWitnessFamily>(&text).unwrap(), fam);
    }
}
