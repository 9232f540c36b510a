//! 2-local inner derivations of `M_n(R)` and the reconstruction of their
//! implementing element.
//!
//! A 2-local inner derivation `Δ` is only known through probes: for each
//! matrix unit `e_{i,j}` (`i ≠ j`) a witness `a(i,j)` with
//!
//! ```text
//! Δ(e_{i,j}) = [a(i,j), e_{i,j}]    and    Δ(x₀) = [a(i,j), x₀]
//! ```
//!
//! where `x₀ = Σ e_{k,k+1}`, plus a witness `c` with `Δ(x₀) = [c, x₀]`. The
//! element
//!
//! ```text
//! ā = Σ_{i≠j} e_{i,i}·a(j,i)·e_{j,j} + Σ_i e_{i,i}·c·e_{i,i}
//! ```
//!
//! then satisfies `Δ(x) = [ā, x]` for every `x`. Note the swapped indices:
//! entry `(i, j)` of `ā` is read off the witness for `e_{j,i}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::report::{expect_eq, Failure};
use crate::ring::Ring;
use crate::sample::{seeded, Sampler, DEFAULT_MAX_DEGREE};

type MapFn = dyn Fn(&Matrix) -> Matrix + Send + Sync;

/// Black-box access to a map `Δ` on `M_n(R)` (or on `H_n(R)` for the Jordan checks).
#[derive(Clone)]
pub struct TwoLocalOracle {
    ring: Ring,
    n: usize,
    map: Arc<MapFn>,
}

impl TwoLocalOracle {
    pub fn new(ring: Ring, n: usize, map: impl Fn(&Matrix) -> Matrix + Send + Sync + 'static) -> TwoLocalOracle {
        TwoLocalOracle {
            ring,
            n,
            map: Arc::new(map),
        }
    }

    /// `x ↦ [hidden, x]`.
    pub fn from_inner(hidden: Matrix) -> TwoLocalOracle {
        let (ring, n) = (hidden.ring(), hidden.n());
        TwoLocalOracle::new(ring, n, move |x| &(&hidden * x) - &(x * &hidden))
    }

    pub fn zero(ring: Ring, n: usize) -> TwoLocalOracle {
        TwoLocalOracle::new(ring, n, move |_| Matrix::zeros(ring, n))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn evaluate(&self, x: &Matrix) -> Result<Matrix> {
        if x.ring() != self.ring || x.n() != self.n {
            return Err(Error::domain(format!(
                "oracle acts on {}x{} matrices over {}, got {}x{} over {}",
                self.n,
                self.n,
                self.ring,
                x.n(),
                x.n(),
                x.ring()
            )));
        }
        Ok((self.map)(x))
    }
}

impl fmt::Debug for TwoLocalOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoLocalOracle")
            .field("ring", &self.ring)
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

/// Ambiguity injected into generated witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseSpec {
    /// Every witness is the hidden generator.
    None,
    /// Each witness is `hidden + z·I` with an independent random `z`.
    CentralShifts,
    /// As `CentralShifts`, and `c` additionally gets a random polynomial in `x₀`.
    X0CommutantShiftOnC,
    /// As `X0CommutantShiftOnC`, and each `a(i,j)` additionally gets
    /// `Σ_{k ≥ max(i, n−j+1)} p_k x₀^k`, the powers of `x₀` that also commute
    /// with `e_{i,j}`. These change off-diagonal corners that central shifts
    /// leave alone, so they tell `a(i,j)` and `a(j,i)` apart.
    ProbeCommutant,
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseSpec::None => "none",
            NoiseSpec::CentralShifts => "central",
            NoiseSpec::X0CommutantShiftOnC => "x0-commutant",
            NoiseSpec::ProbeCommutant => "probe-commutant",
        })
    }
}

impl FromStr for NoiseSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<NoiseSpec> {
        match s {
            "none" => Ok(NoiseSpec::None),
            "central" => Ok(NoiseSpec::CentralShifts),
            "x0-commutant" => Ok(NoiseSpec::X0CommutantShiftOnC),
            "probe-commutant" => Ok(NoiseSpec::ProbeCommutant),
            other => Err(Error::domain(format!(
                "unknown noise {other:?}; expected none, central, x0-commutant or probe-commutant"
            ))),
        }
    }
}

/// Witnesses `a(i,j)` for the off-diagonal probes and `c` for `x₀`.
///
/// Construction only checks shapes. [`validate`](Self::validate) checks the
/// witnessing identities against an oracle; reconstruction refuses families
/// that have not been validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFamily {
    ring: Ring,
    n: usize,
    offdiag: BTreeMap<(usize, usize), Matrix>,
    c: Matrix,
    validated: bool,
}

impl WitnessFamily {
    /// `offdiag` must hold a witness for every `(i, j)` with `1 <= i ≠ j <= n`.
    /// When `c` is omitted, `a(1,2)` is used: every `a(i,j)` also witnesses `x₀`.
    pub fn new(n: usize, offdiag: BTreeMap<(usize, usize), Matrix>, c: Option<Matrix>) -> Result<WitnessFamily> {
        if n < 2 {
            return Err(Error::domain(format!("witness families need n >= 2, got {n}")));
        }
        let first = offdiag
            .get(&(1, 2))
            .ok_or_else(|| Error::domain("missing witness a(1,2)"))?
            .clone();
        let ring = first.ring();
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let w = offdiag
                    .get(&(i, j))
                    .ok_or_else(|| Error::domain(format!("missing witness a({i},{j})")))?;
                if w.ring() != ring || w.n() != n {
                    return Err(Error::domain(format!("witness a({i},{j}) has the wrong shape or ring")));
                }
            }
        }
        if let Some(&(i, j)) = offdiag.keys().find(|&&(i, j)| i == j || i == 0 || j == 0 || i > n || j > n) {
            return Err(Error::domain(format!("unexpected witness key ({i},{j})")));
        }
        let c = c.unwrap_or(first);
        if c.ring() != ring || c.n() != n {
            return Err(Error::domain("witness c has the wrong shape or ring"));
        }
        Ok(WitnessFamily {
            ring,
            n,
            offdiag,
            c,
            validated: false,
        })
    }

    /// Every witness equal to `w`.
    pub fn constant(w: &Matrix) -> WitnessFamily {
        let n = w.n();
        let mut offdiag = BTreeMap::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    offdiag.insert((i, j), w.clone());
                }
            }
        }
        WitnessFamily::new(n, offdiag, Some(w.clone())).expect("constant family is well formed")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a(i,j)`, 1-based, `i ≠ j`.
    pub fn witness(&self, i: usize, j: usize) -> Result<&Matrix> {
        self.offdiag
            .get(&(i, j))
            .ok_or_else(|| Error::domain(format!("no witness a({i},{j}) in a family of size {}", self.n)))
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn offdiag(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.offdiag
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Checks every witnessing identity against `oracle`, returning the first
    /// one that fails as a [`Error::Contract`].
    pub fn check_against(&self, oracle: &TwoLocalOracle) -> Result<()> {
        if oracle.ring() != self.ring || oracle.n() != self.n {
            return Err(Error::contract("witness family and oracle act on different rings"));
        }
        let x0 = Matrix::probe_x0(self.ring, self.n)?;
        let delta_x0 = oracle.evaluate(&x0)?;
        for (&(i, j), a) in &self.offdiag {
            let e = Matrix::unit(self.ring, self.n, i, j)?;
            if oracle.evaluate(&e)? != a.commutator(&e)? {
                return Err(Error::contract(format!(
                    "a({i},{j}) does not reproduce Δ(e_{{{i},{j}}})"
                )));
            }
            if delta_x0 != a.commutator(&x0)? {
                return Err(Error::contract(format!("a({i},{j}) does not reproduce Δ(x₀)")));
            }
        }
        if delta_x0 != self.c.commutator(&x0)? {
            return Err(Error::contract("c does not reproduce Δ(x₀)"));
        }
        Ok(())
    }

    /// Marks the family as validated after [`check_against`](Self::check_against) succeeds.
    pub fn validate(mut self, oracle: &TwoLocalOracle) -> Result<WitnessFamily> {
        self.check_against(oracle)?;
        self.validated = true;
        Ok(self)
    }

    /// Corner summands `a_{i,j}` (0-based row-major).
    fn corner_parts(&self) -> Vec<Matrix> {
        let n = self.n;
        let mut parts = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let part = if r == c {
                    self.c.corner0(r, r)
                } else {
                    self.offdiag[&(c + 1, r + 1)].corner0(r, c)
                };
                parts.push(part);
            }
        }
        parts
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessEntry {
    i: usize,
    j: usize,
    witness: Matrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessFamilyRepr {
    n: usize,
    ring: Ring,
    offdiag: Vec<WitnessEntry>,
    c: Matrix,
}

impl Serialize for WitnessFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WitnessFamilyRepr {
            n: self.n,
            ring: self.ring,
            offdiag: self
                .offdiag
                .iter()
                .map(|(&(i, j), w)| WitnessEntry { i, j, witness: w.clone() })
                .collect(),
            c: self.c.clone(),
        }
        .serialize(s)
    }
}

/// Deserialized families are never validated.
impl<'de> Deserialize<'de> for WitnessFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<WitnessFamily, D::Error> {
        use serde::de::Error as _;
        let repr = WitnessFamilyRepr::deserialize(d)?;
        let mut offdiag = BTreeMap::new();
        for entry in repr.offdiag {
            if offdiag.insert((entry.i, entry.j), entry.witness).is_some() {
                return Err(D::Error::custom(format!("duplicate witness a({},{})", entry.i, entry.j)));
            }
        }
        let family = WitnessFamily::new(repr.n, offdiag, Some(repr.c)).map_err(D::Error::custom)?;
        if family.ring != repr.ring {
            return Err(D::Error::custom("witness matrices disagree with the declared ring"));
        }
        Ok(family)
    }
}

/// `ā` together with the `n²` corner summands it was assembled from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionResult {
    pub abar: Matrix,
    /// Row-major: `parts[(i-1)*n + (j-1)] = a_{i,j}`.
    pub parts: Vec<Matrix>,
}

impl ReconstructionResult {
    /// `a_{i,j}`, 1-based.
    pub fn part(&self, i: usize, j: usize) -> &Matrix {
        let n = self.abar.n();
        &self.parts[(i - 1) * n + (j - 1)]
    }
}

/// `ā = Σ_{i≠j} e_{i,i} a(j,i) e_{j,j} + Σ_i e_{i,i} c e_{i,i}`.
pub fn reconstruct_abar(wf: &WitnessFamily) -> Result<ReconstructionResult> {
    if !wf.validated {
        return Err(Error::contract(
            "witness family has not been validated against an oracle",
        ));
    }
    let parts = wf.corner_parts();
    let abar = Matrix::sum(wf.ring, wf.n, &parts);
    Ok(ReconstructionResult { abar, parts })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub abar: Matrix,
    pub checked: usize,
    pub failures: Vec<Failure>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Validates `wf` against `oracle`, reconstructs `ā` and checks
/// `Δ(x) = āx − xā` on every sample.
pub fn verify_theorem1(oracle: &TwoLocalOracle, wf: &WitnessFamily, samples: &[Matrix]) -> Result<TheoremReport> {
    if samples.is_empty() {
        return Err(Error::domain("verify_theorem1 needs at least one sample"));
    }
    let wf = wf.clone().validate(oracle)?;
    let abar = reconstruct_abar(&wf)?.abar;
    let mut failures = Vec::new();
    for (k, x) in samples.iter().enumerate() {
        let lhs = oracle.evaluate(x)?;
        let rhs = abar.commutator(x)?;
        expect_eq(&mut failures, || format!("sample {k}: Δ(x) vs [ā, x]"), lhs, rhs);
    }
    Ok(TheoremReport {
        abar,
        checked: samples.len(),
        failures,
    })
}

/// `[ā − hidden, e_{i,j}]` for every matrix unit whose commutator is nonzero.
/// Empty exactly when `ā` recovers `hidden` up to a central summand.
pub fn recovery_defects(abar: &Matrix, hidden: &Matrix) -> Result<Vec<Failure>> {
    let diff = abar.try_sub(hidden)?;
    let (ring, n) = (diff.ring(), diff.n());
    let mut failures = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let e = Matrix::unit(ring, n, i, j)?;
            expect_eq(
                &mut failures,
                || format!("[ā − hidden, e_{{{i},{j}}}]"),
                diff.commutator(&e)?,
                Matrix::zeros(ring, n),
            );
        }
    }
    Ok(failures)
}

/// `e_{k,k}·a(i,j)·e_{i,j} = e_{k,k}·a(i,k)·e_{i,j}` for `k ≠ i`.
pub fn check_cross_corner(a_ij: &Matrix, a_ik: &Matrix, i: usize, j: usize, k: usize) -> Result<bool> {
    let (lhs, rhs) = cross_corner_sides(a_ij, a_ik, i, j, k)?;
    Ok(lhs == rhs)
}

/// Both sides of [`check_cross_corner`].
pub fn cross_corner_sides(a_ij: &Matrix, a_ik: &Matrix, i: usize, j: usize, k: usize) -> Result<(Matrix, Matrix)> {
    a_ij.check_compatible(a_ik)?;
    if k == i {
        return Err(Error::domain(format!("cross-corner identity needs k ≠ i, got i = k = {i}")));
    }
    let (ring, n) = (a_ij.ring(), a_ij.n());
    let ekk = Matrix::unit(ring, n, k, k)?;
    let eij = Matrix::unit(ring, n, i, j)?;
    Ok((&(&ekk * a_ij) * &eij, &(&ekk * a_ik) * &eij))
}

/// The mirrored identity `e_{i,j}·a(i,j)·e_{k,k} = e_{i,j}·a(k,j)·e_{k,k}` for `k ≠ j`.
pub fn check_cross_corner_mirror(a_ij: &Matrix, a_kj: &Matrix, i: usize, j: usize, k: usize) -> Result<bool> {
    let (lhs, rhs) = cross_corner_mirror_sides(a_ij, a_kj, i, j, k)?;
    Ok(lhs == rhs)
}

/// Both sides of [`check_cross_corner_mirror`].
pub fn cross_corner_mirror_sides(a_ij: &Matrix, a_kj: &Matrix, i: usize, j: usize, k: usize) -> Result<(Matrix, Matrix)> {
    a_ij.check_compatible(a_kj)?;
    if k == j {
        return Err(Error::domain(format!("mirrored cross-corner identity needs k ≠ j, got j = k = {j}")));
    }
    let (ring, n) = (a_ij.ring(), a_ij.n());
    let ekk = Matrix::unit(ring, n, k, k)?;
    let eij = Matrix::unit(ring, n, i, j)?;
    Ok((&(&eij * a_ij) * &ekk, &(&eij * a_kj) * &ekk))
}

/// `Δ(e_{i,j}) = O·e_{i,j} − e_{i,j}·O + a(i,j)^{i,i} e_{i,j} − e_{i,j} a(i,j)^{j,j}`
/// where `O = Σ_{k≠l} a_{k,l}` is the off-diagonal part of `ā`.
pub fn check_offdiag_formula(wf: &WitnessFamily, oracle: &TwoLocalOracle, i: usize, j: usize) -> Result<bool> {
    let (lhs, rhs) = offdiag_formula_sides(wf, oracle, i, j)?;
    Ok(lhs == rhs)
}

/// Both sides of [`check_offdiag_formula`]: `Δ(e_{i,j})` and the formula.
pub fn offdiag_formula_sides(wf: &WitnessFamily, oracle: &TwoLocalOracle, i: usize, j: usize) -> Result<(Matrix, Matrix)> {
    if i == j {
        return Err(Error::domain(format!("off-diagonal formula needs i ≠ j, got {i} = {j}")));
    }
    let (ring, n) = (wf.ring, wf.n);
    let eij = Matrix::unit(ring, n, i, j)?;
    let parts = wf.corner_parts();
    let off = Matrix::sum(
        ring,
        n,
        parts.iter().enumerate().filter(|(idx, _)| idx / n != idx % n).map(|(_, p)| p),
    );
    let a = wf.witness(i, j)?;
    let diag_term = eij.scale(&ring.sub(a.at(i - 1, i - 1), a.at(j - 1, j - 1)));
    let rhs = &(&(&off * &eij) - &(&eij * &off)) + &diag_term;
    Ok((oracle.evaluate(&eij)?, rhs))
}

/// Both `b` and `c` must witness `Δ(x₀)`; then `c^{k,k} − c^{l,l} = b^{k,k} − b^{l,l}` for all `k, l`.
pub fn check_diag_difference(b: &Matrix, c: &Matrix, oracle: &TwoLocalOracle) -> Result<bool> {
    let (lhs, rhs) = diag_difference_sides(b, c, oracle)?;
    Ok(lhs == rhs)
}

/// The diagonals of `c` and `b` normalized to start at zero:
/// `diag(c) − c^{1,1}·I` and `diag(b) − b^{1,1}·I`. They are equal exactly
/// when all diagonal differences agree.
pub fn diag_difference_sides(b: &Matrix, c: &Matrix, oracle: &TwoLocalOracle) -> Result<(Matrix, Matrix)> {
    b.check_compatible(c)?;
    let (ring, n) = (b.ring(), b.n());
    let x0 = Matrix::probe_x0(ring, n)?;
    let delta_x0 = oracle.evaluate(&x0)?;
    if b.commutator(&x0)? != delta_x0 {
        return Err(Error::contract("b does not witness Δ(x₀)"));
    }
    if c.commutator(&x0)? != delta_x0 {
        return Err(Error::contract("c does not witness Δ(x₀)"));
    }
    let normalized = |m: &Matrix| {
        Matrix::from_fn(ring, n, |r, col| {
            if r == col {
                ring.sub(m.at(r, r), m.at(0, 0))
            } else {
                ring.zero()
            }
        })
    };
    Ok((normalized(c), normalized(b)))
}

/// Builds the oracle `x ↦ [hidden, x]` and a witness family for it with the
/// requested ambiguity, drawing randomness from `rng`.
pub fn generate_witness_family<R: Rng + ?Sized>(
    hidden: &Matrix,
    noise: NoiseSpec,
    sampler: &Sampler,
    rng: &mut R,
) -> (TwoLocalOracle, WitnessFamily) {
    let n = hidden.n();
    let ring = hidden.ring();
    let shifted = |rng: &mut R| match noise {
        NoiseSpec::None => hidden.clone(),
        _ => hidden + &sampler.central(rng, n),
    };
    let mut offdiag = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let mut a = shifted(rng);
            if noise == NoiseSpec::ProbeCommutant {
                let x0 = Matrix::probe_x0(ring, n).expect("n >= 2");
                for k in i.max(n + 1 - j)..n {
                    a = &a + &x0.pow(k as u32).scale(&sampler.elem(rng));
                }
            }
            offdiag.insert((i, j), a);
        }
    }
    let mut c = shifted(rng);
    if matches!(noise, NoiseSpec::X0CommutantShiftOnC | NoiseSpec::ProbeCommutant) {
        c = &c + &sampler.x0_polynomial(rng, n);
    }
    let family = WitnessFamily::new(n, offdiag, Some(c)).expect("generated family is well formed");
    (TwoLocalOracle::from_inner(hidden.clone()), family)
}

/// [`generate_witness_family`] seeded from `seed`, with polynomial shifts of
/// degree at most [`DEFAULT_MAX_DEGREE`].
pub fn gen_witness_family(hidden: &Matrix, noise: NoiseSpec, seed: u64) -> (TwoLocalOracle, WitnessFamily) {
    let sampler = Sampler::new(hidden.ring(), DEFAULT_MAX_DEGREE);
    generate_witness_family(hidden, noise, &sampler, &mut seeded(seed))
}
