//! Derivations of `M_n(R)`: inner derivations, a sampling Leibniz checker,
//! extension of a derivation `δ` of `R` to `M_n(R)`, and propagation of a
//! derivation from two generators to words in them.
//!
//! The extension works in two steps. On `M_2(R)`,
//!
//! ```text
//! D̄ [[λ, μ], [ν, η]] = [[δλ, δμ + μ], [δν − ν, δη]]
//! ```
//!
//! which is entrywise `δ` plus the inner derivation of `diag(½, −½)`.
//! Applying the same block formula to `M_2(M_{2^j}(R)) = M_{2^{j+1}}(R)`
//! doubles the dimension each time; once `2^k >= n`, the map is compressed
//! back to `M_n(R)` by `a ↦ e·D(a)·e` with `e = Σ_{i≤n} e_{i,i}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::report::Failure;
use crate::ring::{BaseDerivation, Ring};

/// A map `M_n(R) -> M_n(R)`, possibly failing on inputs of the wrong shape.
pub trait MatrixMap {
    fn eval(&self, x: &Matrix) -> Result<Matrix>;
}

impl<F: Fn(&Matrix) -> Matrix> MatrixMap for F {
    fn eval(&self, x: &Matrix) -> Result<Matrix> {
        Ok(self(x))
    }
}

/// `[a, x] = ax − xa`.
pub fn inner_apply(a: &Matrix, x: &Matrix) -> Result<Matrix> {
    a.commutator(x)
}

/// The inner derivation `x ↦ ax − xa`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerDerivation {
    generator: Matrix,
}

impl InnerDerivation {
    pub fn new(generator: Matrix) -> InnerDerivation {
        InnerDerivation { generator }
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        inner_apply(&self.generator, x)
    }
}

impl MatrixMap for InnerDerivation {
    fn eval(&self, x: &Matrix) -> Result<Matrix> {
        self.apply(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `D(x + y) = D(x) + D(y)`
    Additivity,
    /// `D(xy) = D(x)y + xD(y)`
    Leibniz,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizViolation {
    /// Index of the offending pair in the sample list.
    pub pair: usize,
    pub rule: Rule,
    pub lhs: Matrix,
    pub rhs: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizReport {
    /// Pairs examined before stopping.
    pub checked: usize,
    pub violation: Option<LeibnizViolation>,
}

impl LeibnizReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }

    pub fn into_failure(self) -> Option<Failure> {
        self.violation.map(|v| {
            let rule = match v.rule {
                Rule::Additivity => "additivity",
                Rule::Leibniz => "leibniz",
            };
            Failure::new(format!("{rule} at pair {}", v.pair), v.lhs, v.rhs)
        })
    }
}

/// Checks additivity and the Leibniz rule of `d` on every sample pair,
/// stopping at the first violation. Violations are data, not errors; an
/// error means `d` itself refused an input.
pub fn leibniz_check<D: MatrixMap + ?Sized>(d: &D, samples: &[(Matrix, Matrix)]) -> Result<LeibnizReport> {
    for (idx, (x, y)) in samples.iter().enumerate() {
        x.check_compatible(y)?;
        let dx = d.eval(x)?;
        let dy = d.eval(y)?;

        let sum_lhs = d.eval(&(x + y))?;
        let sum_rhs = &dx + &dy;
        if sum_lhs != sum_rhs {
            return Ok(LeibnizReport {
                checked: idx + 1,
                violation: Some(LeibnizViolation {
                    pair: idx,
                    rule: Rule::Additivity,
                    lhs: sum_lhs,
                    rhs: sum_rhs,
                }),
            });
        }

        let prod_lhs = d.eval(&(x * y))?;
        let prod_rhs = &(&dx * y) + &(x * &dy);
        if prod_lhs != prod_rhs {
            return Ok(LeibnizReport {
                checked: idx + 1,
                violation: Some(LeibnizViolation {
                    pair: idx,
                    rule: Rule::Leibniz,
                    lhs: prod_lhs,
                    rhs: prod_rhs,
                }),
            });
        }
    }
    Ok(LeibnizReport {
        checked: samples.len(),
        violation: None,
    })
}

fn check_input(ring: Ring, n: usize, x: &Matrix) -> Result<()> {
    if x.ring() != ring || x.n() != n {
        return Err(Error::domain(format!(
            "map acts on M_{n}({ring}), got a {}x{} matrix over {}",
            x.n(),
            x.n(),
            x.ring()
        )));
    }
    Ok(())
}

/// `δ̄`: a base derivation applied to every entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntrywiseDerivation {
    delta: BaseDerivation,
    ring: Ring,
    n: usize,
}

impl EntrywiseDerivation {
    pub fn new(delta: BaseDerivation, ring: Ring, n: usize) -> Result<EntrywiseDerivation> {
        delta.check(ring)?;
        Ok(EntrywiseDerivation { delta, ring, n })
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        check_input(self.ring, self.n, x)?;
        Ok(x.map(|e| self.delta.apply_elem(self.ring, e)))
    }
}

impl MatrixMap for EntrywiseDerivation {
    fn eval(&self, x: &Matrix) -> Result<Matrix> {
        self.apply(x)
    }
}

/// Smallest `k` with `2^k >= n`.
pub fn tower_depth(n: usize) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

/// The extension `D̄` of a base derivation `δ` to `M_n(R)`.
///
/// Stored as an evaluator rather than as the matrix of a linear map: `R`
/// may be infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    delta: BaseDerivation,
    ring: Ring,
    n: usize,
    depth: u32,
}

/// `D̄ [[λ, μ], [ν, η]] = [[δλ, δμ + μ], [δν − ν, δη]]` on `M_2(R)`.
pub fn extend_m2(delta: BaseDerivation, ring: Ring) -> Result<Extension> {
    extend_tower(delta, ring, 2)
}

/// Extends `δ` to `M_n(R)` through the doubling tower `M_2 ⊂ M_4 ⊂ … ⊂
/// M_{2^k}` and compression by `e = Σ_{i≤n} e_{i,i}`.
pub fn extend_tower(delta: BaseDerivation, ring: Ring, n: usize) -> Result<Extension> {
    if n < 2 {
        return Err(Error::domain(format!(
            "extension needs n >= 2, got n = {n}"
        )));
    }
    delta.check(ring)?;
    Ok(Extension {
        delta,
        ring,
        n,
        depth: tower_depth(n),
    })
}

impl Extension {
    pub fn delta(&self) -> &BaseDerivation {
        &self.delta
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of doublings `k`; the tower tops out at `M_{2^k}(R)`.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        check_input(self.ring, self.n, x)?;
        let size = 1usize << self.depth;
        let top = self.apply_level(&x.embed(size));
        if size == self.n {
            return Ok(top);
        }
        let mut e = Matrix::zeros(self.ring, size);
        for i in 0..self.n {
            *e.at_mut(i, i) = self.ring.one();
        }
        let compressed = &(&e * &top) * &e;
        Ok(compressed.block(0, 0, self.n))
    }

    /// The derivation of `M_{2^j}(R)` built by `j` doublings.
    fn apply_level(&self, m: &Matrix) -> Matrix {
        if m.n() == 1 {
            return m.map(|e| self.delta.apply_elem(self.ring, e));
        }
        let h = m.n() / 2;
        let (a, b) = (m.block(0, 0, h), m.block(0, h, h));
        let (c, d) = (m.block(h, 0, h), m.block(h, h, h));
        Matrix::from_blocks(
            &self.apply_level(&a),
            &(&self.apply_level(&b) + &b),
            &(&self.apply_level(&c) - &c),
            &self.apply_level(&d),
        )
    }
}

impl MatrixMap for Extension {
    fn eval(&self, x: &Matrix) -> Result<Matrix> {
        self.apply(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoGeneratorReport {
    /// Distinct words examined.
    pub words: usize,
    /// Split evaluations performed (one per word and split point).
    pub splits: usize,
    pub failures: Vec<Failure>,
}

impl TwoGeneratorReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Propagates `Δ(x) = [d, x]`, `Δ(y) = [d, y]` to every word `w` in `x, y`
/// of length at most `max_len` through `Δ(uv) = Δ(u)v + uΔ(v)`, evaluating
/// every split `w = uv`. Reports splits that disagree and words where the
/// propagated value differs from `[d, w]`.
pub fn two_generator_check(x: &Matrix, y: &Matrix, d: &Matrix, max_len: usize) -> Result<TwoGeneratorReport> {
    if max_len == 0 {
        return Err(Error::domain("max_len must be at least 1"));
    }
    x.check_compatible(y)?;
    x.check_compatible(d)?;

    // word -> (value of the word, propagated Δ)
    let mut memo: HashMap<String, (Matrix, Matrix)> = HashMap::new();
    let mut layer = vec![String::from("x"), String::from("y")];
    memo.insert("x".into(), (x.clone(), d.commutator(x)?));
    memo.insert("y".into(), (y.clone(), d.commutator(y)?));

    let mut report = TwoGeneratorReport {
        words: 2,
        splits: 0,
        failures: Vec::new(),
    };

    for _len in 2..=max_len {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for prefix in &layer {
            for g in ["x", "y"] {
                let word = format!("{prefix}{g}");
                let value = &memo[prefix.as_str()].0 * &memo[g].0;
                let mut propagated: Option<Matrix> = None;
                for s in 1..word.len() {
                    let (u, v) = word.split_at(s);
                    let (uval, udelta) = &memo[u];
                    let (vval, vdelta) = &memo[v];
                    let candidate = &(udelta * vval) + &(uval * vdelta);
                    report.splits += 1;
                    match &propagated {
                        None => propagated = Some(candidate),
                        Some(first) if *first != candidate => report.failures.push(Failure::new(
                            format!("word {word}: split {u}|{v} disagrees with split at 1"),
                            candidate,
                            first.clone(),
                        )),
                        Some(_) => {}
                    }
                }
                let propagated = propagated.expect("words of length >= 2 have a split");
                let inner = d.commutator(&value)?;
                if propagated != inner {
                    report
                        .failures
                        .push(Failure::new(format!("word {word}: Δ(w) vs [d, w]"), propagated.clone(), inner));
                }
                memo.insert(word.clone(), (value, propagated));
                next.push(word);
                report.words += 1;
            }
        }
        layer = next;
    }
    Ok(report)
}
