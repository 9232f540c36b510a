//! Seeded random instances.
//!
//! All randomness goes through ChaCha8 ([`rand_chacha::ChaCha8Rng`]). A
//! campaign seeded with `seed` runs instance `k` on the generator
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `k`, so any single
//! instance can be replayed from `(seed, k)` alone. Reports depend on this
//! choice; changing the generator changes every report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{Matrix, SymmetricMatrix};
use crate::ring::{Elem, Ring, RingKind};

pub type CampaignRng = ChaCha8Rng;

/// Default cap on the degree of random polynomial entries.
pub const DEFAULT_MAX_DEGREE: usize = 3;

pub fn seeded(seed: u64) -> CampaignRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The generator for instance `instance` of a campaign seeded with `seed`.
pub fn instance_rng(seed: u64, instance: u64) -> CampaignRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(instance);
    rng
}

/// Uniform sampling of ring elements and matrices.
#[derive(Clone, Copy, Debug)]
pub struct Sampler {
    ring: Ring,
    max_degree: usize,
}

impl Sampler {
    pub fn new(ring: Ring, max_degree: usize) -> Sampler {
        Sampler { ring, max_degree }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Uniform residue in `Z_m`, or a polynomial of degree at most
    /// `max_degree` with uniform coefficients.
    pub fn elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        let m = self.ring.modulus();
        match self.ring.kind() {
            RingKind::ZMod => Elem::Residue(rng.random_range(0..m)),
            RingKind::Poly => self
                .ring
                .canonicalize(Elem::Poly((0..=self.max_degree).map(|_| rng.random_range(0..m)).collect())),
        }
    }

    pub fn matrix<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Matrix {
        Matrix::from_fn(self.ring, n, |_, _| self.elem(rng))
    }

    pub fn symmetric<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> SymmetricMatrix {
        let mut m = Matrix::zeros(self.ring, n);
        for r in 0..n {
            for c in r..n {
                let v = self.elem(rng);
                *m.at_mut(c, r) = v.clone();
                *m.at_mut(r, c) = v;
            }
        }
        SymmetricMatrix::new_unchecked(m)
    }

    /// Random skew-symmetric matrix (zero diagonal).
    pub fn skew<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Matrix {
        let mut m = Matrix::zeros(self.ring, n);
        for r in 0..n {
            for c in r + 1..n {
                let v = self.elem(rng);
                *m.at_mut(c, r) = self.ring.neg(&v);
                *m.at_mut(r, c) = v;
            }
        }
        m
    }

    /// Random central element `z·I`.
    pub fn central<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Matrix {
        Matrix::scalar(self.ring, n, &self.elem(rng))
    }

    /// Random polynomial `Σ_{k<n} p_k x₀^k` in the shift probe; these are
    /// exactly the matrices commuting with `x₀`.
    pub fn x0_polynomial<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Matrix {
        let coeffs: Vec<Elem> = (0..n).map(|_| self.elem(rng)).collect();
        // Σ p_k x₀^k is the upper-triangular Toeplitz matrix with p_k on diagonal k.
        Matrix::from_fn(self.ring, n, |r, c| {
            if c >= r {
                coeffs[c - r].clone()
            } else {
                self.ring.zero()
            }
        })
    }
}
