//! Seeded verification campaigns.
//!
//! A campaign draws `trials` independent instances for one suite and
//! collects every violated identity. Instance `k` uses
//! [`instance_rng(seed, k)`](crate::sample::instance_rng), instances run in
//! parallel, and failures are assembled in instance order, so a config
//! always produces the same report.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::derivation::{extend_tower, leibniz_check, two_generator_check};
use crate::error::{Error, Result};
use crate::jordan::{
    generate_jordan_instance, jordan_inner_apply_full, pairs_to_commutator, verify_jordan_theorem, JordanNoise,
    JordanPairDerivation,
};
use crate::matrix::Matrix;
use crate::report::Failure;
use crate::ring::{BaseDerivation, Ring, RingValue};
use crate::sample::{instance_rng, CampaignRng, Sampler, DEFAULT_MAX_DEGREE};
use crate::two_local::{
    cross_corner_mirror_sides, cross_corner_sides, diag_difference_sides, generate_witness_family,
    offdiag_formula_sides, recovery_defects, verify_theorem1, NoiseSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Theorem1,
    LemmaCross,
    LemmaOffdiag,
    LemmaDiagdiff,
    Extend,
    TwoGenerator,
    JordanDiag,
    JordanTheorem,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Theorem1,
        Suite::LemmaCross,
        Suite::LemmaOffdiag,
        Suite::LemmaDiagdiff,
        Suite::Extend,
        Suite::TwoGenerator,
        Suite::JordanDiag,
        Suite::JordanTheorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::LemmaCross => "lemma-cross",
            Suite::LemmaOffdiag => "lemma-offdiag",
            Suite::LemmaDiagdiff => "lemma-diagdiff",
            Suite::Extend => "extend",
            Suite::TwoGenerator => "two-generator",
            Suite::JordanDiag => "jordan-diag",
            Suite::JordanTheorem => "jordan-theorem",
        }
    }

    fn is_two_local(self) -> bool {
        matches!(
            self,
            Suite::Theorem1 | Suite::LemmaCross | Suite::LemmaOffdiag | Suite::LemmaDiagdiff
        )
    }

    /// Noise used when none is requested.
    pub fn default_noise(self) -> Noise {
        match self {
            s if s.is_two_local() => Noise::X0Commutant,
            Suite::JordanTheorem => Noise::Reexpress,
            _ => Noise::None,
        }
    }

    fn accepts(self, noise: Noise) -> bool {
        match noise {
            Noise::None => true,
            Noise::Central | Noise::X0Commutant => self.is_two_local(),
            Noise::Reexpress => self == Suite::JordanTheorem,
            Noise::ProbeCommutant => self.is_two_local() || self == Suite::JordanTheorem,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::domain(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Witness ambiguity for the 2-local suites (`none`, `central`,
/// `x0-commutant`, `probe-commutant`) and the Jordan theorem suite (`none`,
/// `reexpress`, `probe-commutant`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Noise {
    None,
    Central,
    X0Commutant,
    Reexpress,
    ProbeCommutant,
}

impl Noise {
    const ALL: [Noise; 5] = [
        Noise::None,
        Noise::Central,
        Noise::X0Commutant,
        Noise::Reexpress,
        Noise::ProbeCommutant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Noise::None => "none",
            Noise::Central => "central",
            Noise::X0Commutant => "x0-commutant",
            Noise::Reexpress => "reexpress",
            Noise::ProbeCommutant => "probe-commutant",
        }
    }

    fn two_local(self) -> NoiseSpec {
        match self {
            Noise::Central => NoiseSpec::CentralShifts,
            Noise::X0Commutant => NoiseSpec::X0CommutantShiftOnC,
            Noise::ProbeCommutant => NoiseSpec::ProbeCommutant,
            _ => NoiseSpec::None,
        }
    }

    fn jordan(self) -> JordanNoise {
        match self {
            Noise::Reexpress => JordanNoise::Reexpress,
            Noise::ProbeCommutant => JordanNoise::ProbeCommutant,
            _ => JordanNoise::None,
        }
    }
}

impl fmt::Display for Noise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Noise {
    type Err = Error;
    fn from_str(s: &str) -> Result<Noise> {
        Noise::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown noise {s:?}")))
    }
}

/// The base derivation extended by the `extend` suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeltaSpec {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "d/dt")]
    Ddt,
    #[serde(rename = "t*d/dt")]
    TDdt,
}

impl DeltaSpec {
    pub fn name(self) -> &'static str {
        match self {
            DeltaSpec::Zero => "zero",
            DeltaSpec::Ddt => "d/dt",
            DeltaSpec::TDdt => "t*d/dt",
        }
    }

    pub fn resolve(self, ring: Ring) -> Result<BaseDerivation> {
        let delta = match self {
            DeltaSpec::Zero => BaseDerivation::Zero,
            DeltaSpec::Ddt => BaseDerivation::FormalDerivative,
            DeltaSpec::TDdt => BaseDerivation::t_formal_derivative(ring)?,
        };
        delta.check(ring)?;
        Ok(delta)
    }
}

impl fmt::Display for DeltaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DeltaSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<DeltaSpec> {
        match s {
            "zero" => Ok(DeltaSpec::Zero),
            "d/dt" => Ok(DeltaSpec::Ddt),
            "t*d/dt" => Ok(DeltaSpec::TDdt),
            other => Err(Error::domain(format!(
                "unknown derivation {other:?}; expected zero, d/dt or t*d/dt"
            ))),
        }
    }
}

mod ring_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::ring::Ring;

    pub fn serialize<S: Serializer>(ring: &Ring, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(ring)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ring, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub suite: Suite,
    #[serde(with = "ring_str")]
    pub ring: Ring,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// `None` selects [`Suite::default_noise`].
    pub noise: Option<Noise>,
    pub max_degree: usize,
    /// Random samples (or sample pairs) per instance.
    pub samples: usize,
    /// Longest word for `two-generator`.
    pub max_len: usize,
    /// Base derivation for `extend`.
    pub delta: DeltaSpec,
}

impl CampaignConfig {
    pub fn new(suite: Suite, ring: Ring, n: usize) -> CampaignConfig {
        CampaignConfig {
            suite,
            ring,
            n,
            trials: 100,
            seed: 0,
            noise: None,
            max_degree: DEFAULT_MAX_DEGREE,
            samples: 50,
            max_len: 6,
            delta: DeltaSpec::Zero,
        }
    }

    pub fn trials(mut self, trials: u64) -> CampaignConfig {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> CampaignConfig {
        self.seed = seed;
        self
    }

    pub fn noise(mut self, noise: Noise) -> CampaignConfig {
        self.noise = Some(noise);
        self
    }

    pub fn samples(mut self, samples: usize) -> CampaignConfig {
        self.samples = samples;
        self
    }

    pub fn max_len(mut self, max_len: usize) -> CampaignConfig {
        self.max_len = max_len;
        self
    }

    pub fn max_degree(mut self, max_degree: usize) -> CampaignConfig {
        self.max_degree = max_degree;
        self
    }

    pub fn delta(mut self, delta: DeltaSpec) -> CampaignConfig {
        self.delta = delta;
        self
    }

    pub fn effective_noise(&self) -> Noise {
        self.noise.unwrap_or(self.suite.default_noise())
    }

    /// Rejects configurations no instance could run under.
    pub fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("campaigns need n >= 2, got {}", self.n)));
        }
        let noise = self.effective_noise();
        if !self.suite.accepts(noise) {
            return Err(Error::domain(format!(
                "noise {noise} does not apply to suite {}",
                self.suite
            )));
        }
        if self.samples == 0 && self.suite != Suite::TwoGenerator {
            return Err(Error::domain("samples must be at least 1"));
        }
        if self.suite == Suite::TwoGenerator && self.max_len == 0 {
            return Err(Error::domain("max-len must be at least 1"));
        }
        if self.suite == Suite::Extend {
            self.delta.resolve(self.ring)?;
        }
        Ok(())
    }
}

/// A failure tagged with the instance that produced it; `(seed, instance)`
/// replays it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFailure {
    pub instance: u64,
    pub seed: u64,
    pub probe: String,
    pub lhs: Matrix,
    pub rhs: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub config: CampaignConfig,
    pub instances: u64,
    pub failures: Vec<InstanceFailure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// `0` when every identity held, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }
}

/// Runs every instance of `config` and collects the failures in instance
/// order. Configuration problems are errors; violated identities are data.
pub fn run_campaign(config: &CampaignConfig) -> Result<Report> {
    config.check()?;
    let mut config = config.clone();
    config.noise = Some(config.effective_noise());
    let ctx = Context::new(&config)?;
    let per_instance = (0..config.trials)
        .into_par_iter()
        .map(|k| ctx.run(&mut instance_rng(config.seed, k)))
        .collect::<Result<Vec<_>>>()?;
    let failures = per_instance
        .into_iter()
        .enumerate()
        .flat_map(|(k, fs)| {
            fs.into_iter().map(move |f| InstanceFailure {
                instance: k as u64,
                seed: config.seed,
                probe: f.probe,
                lhs: f.lhs,
                rhs: f.rhs,
            })
        })
        .collect();
    Ok(Report {
        instances: config.trials,
        config,
        failures,
    })
}

struct Context {
    suite: Suite,
    n: usize,
    noise: Noise,
    sampler: Sampler,
    samples: usize,
    max_len: usize,
    delta: BaseDerivation,
}

impl Context {
    fn new(config: &CampaignConfig) -> Result<Context> {
        let delta = if config.suite == Suite::Extend {
            config.delta.resolve(config.ring)?
        } else {
            BaseDerivation::Zero
        };
        Ok(Context {
            suite: config.suite,
            n: config.n,
            noise: config.effective_noise(),
            sampler: Sampler::new(config.ring, config.max_degree),
            samples: config.samples,
            max_len: config.max_len,
            delta,
        })
    }

    fn ring(&self) -> Ring {
        self.sampler.ring()
    }

    fn matrices(&self, rng: &mut CampaignRng) -> Vec<Matrix> {
        (0..self.samples).map(|_| self.sampler.matrix(rng, self.n)).collect()
    }

    fn run(&self, rng: &mut CampaignRng) -> Result<Vec<Failure>> {
        match self.suite {
            Suite::Theorem1 => self.theorem1(rng),
            Suite::LemmaCross => self.lemma_cross(rng),
            Suite::LemmaOffdiag => self.lemma_offdiag(rng),
            Suite::LemmaDiagdiff => self.lemma_diagdiff(rng),
            Suite::Extend => self.extend(rng),
            Suite::TwoGenerator => self.two_generator(rng),
            Suite::JordanDiag => self.jordan_diag(rng),
            Suite::JordanTheorem => self.jordan_theorem(rng),
        }
    }

    fn theorem1(&self, rng: &mut CampaignRng) -> Result<Vec<Failure>> {
        let hidden = self.sampler.matrix(rng, self.n);
        let (oracle, wf) = generate_witness_family(&hidden, self.noise.two_local(), &self.sampler, rng);
        let samples = self.matrices(rng);
        let report = verify_theorem1(&oracle, &wf, &samples)?;
        let mut failures = report.failures;
        failures.extend(recovery_defects(&report.abar, &hidden)?);
        Ok(failures)
    }

    fn lemma_cross(&self, rng: &mut CampaignRng) -> Result<Vec<Failure>> {
        let hidden = self.sampler.matrix(rng, self.n);
        let (oracle, wf) = generate_witness_family(&hidden, self.noise.two_local(), &self.sampler, rng);
        wf.check_against(&oracle)?;
        let n = self.n;
        let mut failures = Vec::new();
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                let a_ij = wf.witness(i, j)?;
                for k in (1..=n).filter(|&k| k != i) {
                    let (lhs, rhs) = cross_corner_sides(a_ij, wf.witness(i, k)?, i, j, k)?;
                    if lhs != rhs {
                        failures.push(Failure::new(format!("e_kk a({i},{j}) e_ij vs e_kk a({i},{k}) e_ij, k = {k}"), lhs, rhs));
                    }
                }
                for k in (1..=n).filter(|&k| k != j) {
                    let (lhs, rhs) = cross_corner_mirror_sides(a_ij, wf.witness(k, j)?, i, j, k)?;
                    if lhs != rhs {
                        failures.push(Failure::new(format!("e_ij a({i},{j}) e_kk vs e_ij a({k},{j}) e_kk, k = {k}"), lhs, rhs));
                    }
                }
            }
        }
        Ok(failures)
    }

    fn lemma_offdiag(&self, rng: &mut CampaignRng) -> Result<Vec<Failure>> {
        let hidden = self.sampler.matrix(rng, self.n);
        let (oracle, wf) = generate_witness_family(&hidden, self.noise.two_local(), &self.sampler, rng);
        wf.check_against(&oracle)?;
        let mut failures = Vec::new();
        for i in 1..=self.n {
            for j in (1..=self.n).filter(|&j| j != i) {
                let (lhs, rhs) = offdiag_formula_sides(&wf, &oracle, i, j)?;
                if lhs != rhs {
                    failures.push(Failure::new(format!("Δ(e_{{{i},{j}}}) vs corner formula"), lhs, rhs));
                }
            }
        }
        Ok(failures)
    }

    fn lemma_diagdiff(&self, rng: &mut CampaignRng) -> Result<Vec<Failure>> {
        let hidden = self.sampler.matrix(rng, self.n);
        let (oracle, wf) = generate_witness_family(&hidden, self.noise.two_local(), &self.sampler, rng);
        wf.check_against(&oracle)?;
        let shifted = &hidden + &self.sampler.x0_polynomial(rng, self.n);
        let mut bs: Vec<(String, &Matrix)> = vec![("hidden".into(), &hidden), ("hidden + p(x₀)".into(), &shifted)];
        bs.extend(wf.offdiag().iter().map(|(&(i, j), a)| (format!("a({i},{j})"), a)));
        let mut failures = Vec::new();
        for (name, b) in bs {
            let (lhs, rhs) = diag_difference_sides(b, wf.c(), &oracle)?;
            if lhs != rhs {
                failures.push(Failure::new(format!("diagonal differences of c vs {name}"), lhs, rhs));
            }
        }
        Ok(failures)
    }

    fn extend(&self, rng: &mut CampaignRng) -> Result<Vec<Failure>> {
        let ext = extend_tower(self.delta.clone(), self.ring(), self.n)?;
        let pairs: Vec<(Matrix, Matrix)> = (0..self.samples)
            .map(|_| (self.sampler.matrix(rng, self.n), self.sampler.matrix(rng, self.n)))
            .collect();
        let mut failures: Vec<Failure> = leibniz_check(&ext, &pairs)?.into_failure().into_iter().collect();
        let e11 = Matrix::unit(self.ring(), self.n, 1, 1)?;
        for k in 0..self.samples {
            let lambda = RingValue::from_canonical(self.ring(), self.sampler.elem(rng));
            let lhs = ext.apply(&e11.scale(lambda.elem()))?;
            let rhs = e11.scale(self.delta.apply(&lambda)?.elem());
            if lhs != rhs {
                failures.push(Failure::new(format!("restriction {k}: D̄(λe_11) vs δ(λ)e_11"), lhs, rhs));
            }
        }
        Ok(failures)
    }

    fn two_generator(&self, rng: &mut CampaignRng) -> Result<Vec<Failure>> {
        let x = self.sampler.matrix(rng, self.n);
        let y = self.sampler.matrix(rng, self.n);
        let d = self.sampler.matrix(rng, self.n);
        Ok(two_generator_check(&x, &y, &d, self.max_len)?.failures)
    }

    fn random_pairs(&self, rng: &mut CampaignRng, max: usize) -> JordanPairDerivation {
        let m = rng.random_range(1..=max);
        JordanPairDerivation::random(&self.sampler, rng, self.n, m)
    }

    fn jordan_diag(&self, rng: &mut CampaignRng) -> Result<Vec<Failure>> {
        let (ring, n) = (self.ring(), self.n);
        let pd = self.random_pairs(rng, 4);
        let mut failures = Vec::new();
        let sum = Matrix::sum(
            ring,
            n,
            &pd.pairs()
                .iter()
                .map(|(a, b)| a.commutator(b))
                .collect::<Result<Vec<_>>>()?,
        );
        let diag = Matrix::from_fn(ring, n, |r, c| if r == c { sum.at(r, r).clone() } else { ring.zero() });
        if !diag.is_zero() {
            failures.push(Failure::new("diagonal of Σ[a_k, b_k]", diag, Matrix::zeros(ring, n)));
        }
        let s = pairs_to_commutator(&pd);
        for k in 0..self.samples {
            let x = self.sampler.symmetric(rng, n);
            let lhs = jordan_inner_apply_full(&pd, &x)?;
            if !lhs.is_symmetric() {
                failures.push(Failure::new(format!("sample {k}: D(x) symmetric"), lhs.transpose(), lhs.clone()));
            }
            let rhs = s.commutator(&x)?;
            if lhs != rhs {
                failures.push(Failure::new(format!("sample {k}: D(x) vs [¼Σ[a_k,b_k], x]"), lhs, rhs));
            }
        }
        Ok(failures)
    }

    fn jordan_theorem(&self, rng: &mut CampaignRng) -> Result<Vec<Failure>> {
        let n = self.n;
        let hidden = self.random_pairs(rng, 3);
        let (oracle, family, _) = generate_jordan_instance(&hidden, self.noise.jordan(), &self.sampler, rng);
        let samples: Vec<_> = (0..self.samples).map(|_| self.sampler.symmetric(rng, n)).collect();
        let pairs: Vec<_> = (0..self.samples)
            .map(|_| (self.sampler.symmetric(rng, n), self.sampler.symmetric(rng, n)))
            .collect();
        Ok(verify_jordan_theorem(&oracle, &family, &samples, &pairs)?.failures)
    }
}
