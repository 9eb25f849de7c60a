//! Probe grids of vector/functional pairs for weak (pairing-level) checks:
//! all standard basis pairs, plus seeded random cone and signed pairs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::{LatticeContext, LatticeVector};

const RANDOM_PAIRS_PER_FLAVOR: usize = 32;

/// A deterministic grid of `(x, x*)` pairs.
#[derive(Clone, Debug)]
pub struct ProbeGrid {
    cone: Vec<(LatticeVector, LatticeVector)>,
    signed: Vec<(LatticeVector, LatticeVector)>,
}

impl ProbeGrid {
    /// Basis pairs `(e_i, e_j)`, 32 random cone pairs, 32 random signed
    /// pairs, deterministic in `seed`.
    pub fn new(ctx: &LatticeContext, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = ctx.dim();
        let mut cone = Vec::new();
        for i in 0..n {
            for j in 0..n {
                cone.push((LatticeVector::basis(ctx, i), LatticeVector::basis(ctx, j)));
            }
        }
        let mut draw = |lo: f64, hi: f64| -> LatticeVector {
            let coords: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
            LatticeVector::new(coords, ctx).expect("length matches dim")
        };
        for _ in 0..RANDOM_PAIRS_PER_FLAVOR {
            let x = draw(0.0, 1.0);
            let xs = draw(0.0, 1.0);
            cone.push((x, xs));
        }
        let mut signed = Vec::new();
        for _ in 0..RANDOM_PAIRS_PER_FLAVOR {
            let x = draw(-1.0, 1.0);
            let xs = draw(-1.0, 1.0);
            signed.push((x, xs));
        }
        ProbeGrid { cone, signed }
    }

    /// Pairs lying in the positive cones (basis pairs included).
    pub fn cone_pairs(&self) -> impl Iterator<Item = &(LatticeVector, LatticeVector)> {
        self.cone.iter()
    }

    /// All pairs, cone and signed.
    pub fn all_pairs(&self) -> impl Iterator<Item = &(LatticeVector, LatticeVector)> {
        self.cone.iter().chain(self.signed.iter())
    }
}
