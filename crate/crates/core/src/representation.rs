//! The positive representation of the bounded measurable functions
//! generated by a positive spectral measure, together with the checks that
//! tie its norm, commutant, and generated subalgebra back to the measure.
//!
//! At finite scale every bounded measurable function is simple, so the
//! generated representation `pi_P(phi) = sum_a phi(a) P_a` is exact — no
//! closure step is involved. The sup-norm unit ball of the function algebra
//! has the sign vectors as extreme points, which makes `||pi_P||` an exact
//! finite enumeration for up to 16 atoms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lattice::LatticeContext;
use crate::linalg;
use crate::operator::RegularOperator;
use crate::probe::ProbeGrid;
use crate::space::{AtomSpace, BorelFunction, MeasurableSet};
use crate::spectral::PositiveSpectralMeasure;
use crate::{Error, Result};

/// Sign-vector enumeration cap: `2^16` norm evaluations.
pub const SIGN_ENUMERATION_MAX_ATOMS: usize = 16;

/// The representation `pi_P` generated by a (validated) positive spectral
/// measure.
#[derive(Clone, Debug)]
pub struct GeneratedRepresentation {
    measure: PositiveSpectralMeasure,
}

/// A candidate positive representation given through its images of the atom
/// indicators. The algebra-homomorphism and positivity constraints, read on
/// the atom basis, are exactly: positive, idempotent, pairwise annihilating
/// images. [`extract_spectral_measure`](Self::extract_spectral_measure)
/// checks them and recovers the generating measure.
#[derive(Clone, Debug)]
pub struct PositiveRepresentation {
    space: AtomSpace,
    context: LatticeContext,
    atom_images: Vec<RegularOperator>,
}

impl GeneratedRepresentation {
    /// Wrap a measure after checking its axioms.
    pub fn new(measure: PositiveSpectralMeasure, tol: f64) -> Result<Self> {
        let report = measure.validate(tol);
        if !report.pass() {
            let first = report.failures().next().expect("some failure");
            return Err(Error::InvalidRepresentation(format!(
                "generating measure fails {}: {}",
                first.name,
                first.witness.as_deref().unwrap_or("no witness")
            )));
        }
        Ok(GeneratedRepresentation { measure })
    }

    /// Wrap without re-validating (for measures already known valid).
    pub fn from_valid(measure: PositiveSpectralMeasure) -> Self {
        GeneratedRepresentation { measure }
    }

    pub fn measure(&self) -> &PositiveSpectralMeasure {
        &self.measure
    }

    pub fn space(&self) -> &AtomSpace {
        self.measure.space()
    }

    pub fn context(&self) -> &LatticeContext {
        self.measure.context()
    }

    /// `pi_P(phi) = sum_a phi(a) P_a`. For a characteristic function this
    /// is `P(Delta)`.
    pub fn apply(&self, phi: &BorelFunction) -> Result<RegularOperator> {
        if phi.space() != self.measure.space() {
            return Err(Error::SpaceMismatch);
        }
        let mut acc = RegularOperator::zero(self.measure.context());
        for (a, p) in self.measure.atom_projections().iter().enumerate() {
            let v = phi.value(a);
            if v != 0.0 {
                acc = acc.add(&p.scale(v))?;
            }
        }
        Ok(acc)
    }

    /// `||pi_P|| = sup {||pi_P(phi)|| : ||phi|| <= 1}`, exact by
    /// enumerating the sign vectors (extreme points of the unit ball).
    /// Errors beyond 16 atoms.
    pub fn rep_norm(&self) -> Result<f64> {
        self.enumerated_norm(|op| op.operator_norm())
    }

    /// Same enumeration under the regular norm `||pi_P(phi)||_r`.
    pub fn regular_rep_norm(&self) -> Result<f64> {
        self.enumerated_norm(|op| op.regular_norm())
    }

    fn enumerated_norm(&self, norm: impl Fn(&RegularOperator) -> Result<f64>) -> Result<f64> {
        let k = self.measure.space().len();
        if k > SIGN_ENUMERATION_MAX_ATOMS {
            return Err(Error::TooManyAtoms(k));
        }
        let mut best = 0.0_f64;
        for mask in 0u32..(1u32 << k) {
            let mut acc = RegularOperator::zero(self.measure.context());
            for (a, p) in self.measure.atom_projections().iter().enumerate() {
                let sign = if mask >> a & 1 == 1 { -1.0 } else { 1.0 };
                acc = acc.add(&p.scale(sign))?;
            }
            best = best.max(norm(&acc)?);
        }
        Ok(best)
    }

    /// The norm identity `||pi_P|| = ||pi_P||_r = ||P(X)||`, each side
    /// computed independently.
    pub fn norm_identity_check(&self, tol: f64) -> Result<NormIdentity> {
        let rep_norm = self.rep_norm()?;
        let regular_rep_norm = self.regular_rep_norm()?;
        let full_projection_norm = self.measure.full_projection().operator_norm()?;
        let max_deviation = (rep_norm - regular_rep_norm)
            .abs()
            .max((rep_norm - full_projection_norm).abs())
            .max((regular_rep_norm - full_projection_norm).abs());
        Ok(NormIdentity {
            rep_norm,
            regular_rep_norm,
            full_projection_norm,
            max_deviation,
            pass: max_deviation <= tol,
        })
    }

    /// Automatic-boundedness estimates over a list of functions: for
    /// positive `phi` the sharp bound `||pi(phi)|| <= ||pi(1)|| ||phi||`;
    /// for general `phi` both the split bound
    /// `||pi(phi)|| <= ||pi(1)|| (||phi+|| + ||phi-||)` and the sharp bound
    /// without the factor 2.
    pub fn boundedness_check(
        &self,
        functions: &[BorelFunction],
        tol: f64,
    ) -> Result<BoundednessCheck> {
        let unit_norm = self
            .apply(&BorelFunction::one(self.measure.space()))?
            .operator_norm()?;
        let mut worst_sharp = 0.0_f64;
        let mut worst_split = 0.0_f64;
        for phi in functions {
            let image_norm = self.apply(phi)?.operator_norm()?;
            let (pos, neg) = phi.pos_neg_parts();
            let split = unit_norm * (pos.sup_norm() + neg.sup_norm());
            let sharp = unit_norm * phi.sup_norm();
            worst_sharp = worst_sharp.max(image_norm - sharp);
            worst_split = worst_split.max(image_norm - split);
        }
        Ok(BoundednessCheck {
            unit_image_norm: unit_norm,
            sharp_excess: worst_sharp,
            split_excess: worst_split,
            pass: worst_sharp <= tol && worst_split <= tol,
        })
    }

    /// `<pi_P(phi) x, x*> = integral phi d mu_{x,x*}` over the probe grid.
    pub fn weak_characterization_check(
        &self,
        phi: &BorelFunction,
        probe: &ProbeGrid,
        tol: f64,
    ) -> Result<WeakCharacterization> {
        let image = self.apply(phi)?;
        let mut max_gap = 0.0_f64;
        for (x, xstar) in probe.all_pairs() {
            let lhs = image.apply(x)?.pair(xstar)?;
            let rhs = self.measure.mu_pair(x, xstar)?.integrate(phi)?;
            max_gap = max_gap.max((lhs - rhs).abs());
        }
        Ok(WeakCharacterization {
            max_gap,
            pass: max_gap <= tol,
        })
    }

    /// Monotone convergence along a pointwise nondecreasing chain: images
    /// nondecreasing, dominated by the image of the pointwise supremum,
    /// entrywise supremum of the images equal to it, and the pairing-level
    /// (weak-operator) limit over the probe grid.
    pub fn monotone_convergence_check(
        &self,
        chain: &[BorelFunction],
        probe: &ProbeGrid,
        tol: f64,
    ) -> Result<MonotoneConvergence> {
        if chain.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for (i, pair) in chain.windows(2).enumerate() {
            if !pair[0].leq(&pair[1], tol) {
                return Err(Error::NonMonotoneChain(i + 1));
            }
        }
        let mut limit = chain[0].clone();
        for phi in &chain[1..] {
            limit = limit.pointwise_max(phi)?;
        }
        let limit_image = self.apply(&limit)?;
        let images = chain
            .iter()
            .map(|phi| self.apply(phi))
            .collect::<Result<Vec<_>>>()?;
        let images_monotone = images
            .windows(2)
            .all(|pair| pair[0].leq_entrywise(&pair[1], tol));
        let dominated = images
            .iter()
            .all(|img| img.leq_entrywise(&limit_image, tol));
        let sup_deviation = RegularOperator::sup_family(&images)?
            .sub(&limit_image)?
            .max_abs_entry();
        // pairing-level limit: nondecreasing on cone pairs, final value at
        // the limit (the chain stabilizes at finite scale)
        let mut wot_monotone = true;
        let mut wot_final_gap = 0.0_f64;
        for (x, xstar) in probe.cone_pairs() {
            let values = images
                .iter()
                .map(|img| img.apply(x).and_then(|v| v.pair(xstar)))
                .collect::<Result<Vec<f64>>>()?;
            if values.windows(2).any(|p| p[0] > p[1] + tol) {
                wot_monotone = false;
            }
            let target = limit_image.apply(x)?.pair(xstar)?;
            wot_final_gap = wot_final_gap.max((values.last().unwrap() - target).abs());
        }
        Ok(MonotoneConvergence {
            images_monotone,
            dominated,
            sup_deviation,
            wot_monotone,
            wot_final_gap,
            pass: images_monotone
                && dominated
                && sup_deviation <= tol
                && wot_monotone
                && wot_final_gap <= tol,
        })
    }

    /// The three commutants — of `{P(Delta)}`, of the images of a spanning
    /// set of simple functions, and of the images of a random function
    /// sample — must coincide as subspaces.
    pub fn commutant_equality_check(&self, seed: u64, tol: f64) -> Result<CommutantEquality> {
        let families = self.three_families(seed)?;
        let bases: Vec<Vec<RegularOperator>> = families
            .iter()
            .map(|family| {
                // commuting with a family is commuting with its span
                let thinned = span_basis(family, tol);
                if thinned.is_empty() {
                    // the zero family commutes with everything
                    RegularOperator::commutant_basis(&[RegularOperator::zero(self.context())], tol)
                } else {
                    RegularOperator::commutant_basis(&thinned, tol)
                }
            })
            .collect::<Result<_>>()?;
        let dims = [bases[0].len(), bases[1].len(), bases[2].len()];
        let equal = spans_coincide(&bases, tol);
        Ok(CommutantEquality { dims, equal })
    }

    /// The three generated subalgebras (spans closed under products) must
    /// coincide; closure is automatic in finite dimension.
    pub fn generated_subalgebra_check(&self, seed: u64, tol: f64) -> Result<SubalgebraCheck> {
        let families = self.three_families(seed)?;
        let bases: Vec<Vec<RegularOperator>> = families
            .iter()
            .map(|family| product_closed_span(family, tol))
            .collect();
        let dims = [bases[0].len(), bases[1].len(), bases[2].len()];
        let equal = spans_coincide(&bases, tol);
        Ok(SubalgebraCheck { dims, equal })
    }

    /// The generating families used by the commutant and subalgebra checks:
    /// all `P(Delta)`; images of a spanning set of simple functions; images
    /// of a random function sample.
    fn three_families(&self, seed: u64) -> Result<[Vec<RegularOperator>; 3]> {
        let space = self.measure.space().clone();
        let k = space.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let sets: Vec<MeasurableSet> = if k <= 6 {
            space.all_subsets()
        } else {
            let mut sets = vec![space.full_set()];
            sets.extend((0..k).map(|i| space.singleton(i).expect("in range")));
            sets.extend((0..32).map(|_| random_subset(&space, &mut rng)));
            sets
        };
        let measure_values = sets
            .iter()
            .map(|d| self.measure.evaluate(d))
            .collect::<Result<Vec<_>>>()?;

        let mut simple = Vec::new();
        for i in 0..k {
            simple.push(space.singleton(i)?.char_fn());
        }
        simple.push(BorelFunction::one(&space));
        for _ in 0..16 {
            simple.push(random_subset(&space, &mut rng).char_fn());
        }
        let simple_images = simple
            .iter()
            .map(|phi| self.apply(phi))
            .collect::<Result<Vec<_>>>()?;

        let random_functions: Vec<BorelFunction> = (0..32)
            .map(|_| {
                let values = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
                BorelFunction::new(values, &space).expect("length matches")
            })
            .collect();
        let random_images = random_functions
            .iter()
            .map(|phi| self.apply(phi))
            .collect::<Result<Vec<_>>>()?;

        Ok([measure_values, simple_images, random_images])
    }
}

impl PositiveRepresentation {
    /// Shape checks only; the representation constraints are verified by
    /// [`extract_spectral_measure`](Self::extract_spectral_measure).
    pub fn new(
        space: AtomSpace,
        context: LatticeContext,
        atom_images: Vec<RegularOperator>,
    ) -> Result<Self> {
        if atom_images.len() != space.len() {
            return Err(Error::InvalidSpace(format!(
                "{} images for {} atoms",
                atom_images.len(),
                space.len()
            )));
        }
        for p in &atom_images {
            if p.context() != &context {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(PositiveRepresentation {
            space,
            context,
            atom_images,
        })
    }

    /// The restriction of a generated representation to the atom
    /// indicators.
    pub fn from_measure(measure: &PositiveSpectralMeasure) -> Self {
        PositiveRepresentation {
            space: measure.space().clone(),
            context: measure.context().clone(),
            atom_images: measure.atom_projections().to_vec(),
        }
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn context(&self) -> &LatticeContext {
        &self.context
    }

    pub fn atom_images(&self) -> &[RegularOperator] {
        &self.atom_images
    }

    /// `pi(phi) = sum_a phi(a) pi(chi_a)`.
    pub fn apply(&self, phi: &BorelFunction) -> Result<RegularOperator> {
        if phi.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let mut acc = RegularOperator::zero(&self.context);
        for (a, p) in self.atom_images.iter().enumerate() {
            let v = phi.value(a);
            if v != 0.0 {
                acc = acc.add(&p.scale(v))?;
            }
        }
        Ok(acc)
    }

    /// Recover the generating measure `P(Delta) = pi(chi_Delta)`. Fails
    /// when the images violate the measure axioms (the input was not a
    /// positive representation); on success the generated representation
    /// agrees with this one on every characteristic function, which is
    /// asserted exhaustively for small spaces.
    pub fn extract_spectral_measure(&self, tol: f64) -> Result<PositiveSpectralMeasure> {
        let measure = PositiveSpectralMeasure::new(
            self.space.clone(),
            self.context.clone(),
            self.atom_images.clone(),
        )?;
        let report = measure.validate(tol);
        if !report.pass() {
            let first = report.failures().next().expect("some failure");
            return Err(Error::InvalidRepresentation(format!(
                "{}: {}",
                first.name,
                first.witness.as_deref().unwrap_or("no witness")
            )));
        }
        let sets = if self.space.len() <= 6 {
            self.space.all_subsets()
        } else {
            (0..self.space.len())
                .map(|i| self.space.singleton(i).expect("in range"))
                .chain([self.space.full_set()])
                .collect()
        };
        for set in &sets {
            let lhs = measure.evaluate(set)?;
            let rhs = self.apply(&set.char_fn())?;
            if !lhs.approx_eq(&rhs, tol) {
                return Err(Error::InvalidRepresentation(
                    "extracted measure disagrees on a characteristic function".into(),
                ));
            }
        }
        Ok(measure)
    }
}

fn random_subset(space: &AtomSpace, rng: &mut ChaCha8Rng) -> MeasurableSet {
    let indices: Vec<usize> = (0..space.len())
        .filter(|_| rng.random_range(0.0..1.0) < 0.5)
        .collect();
    space.set_of(&indices).expect("indices in range")
}

/// Mutual span containment of several operator families, by rank tests.
fn spans_coincide(bases: &[Vec<RegularOperator>], tol: f64) -> bool {
    let builders: Vec<linalg::SpanBuilder> = bases
        .iter()
        .map(|b| {
            let mut builder = linalg::SpanBuilder::new(tol);
            for op in b {
                builder.insert(&op.vectorize());
            }
            builder
        })
        .collect();
    for i in 0..bases.len() {
        for j in 0..bases.len() {
            if i == j {
                continue;
            }
            if !bases[j]
                .iter()
                .all(|op| builders[i].contains(&op.vectorize()))
            {
                return false;
            }
        }
    }
    true
}

/// A subfamily spanning the same subspace; commutants and spans only
/// depend on the span, so the large generated families can be thinned
/// before the quadratic work.
fn span_basis(family: &[RegularOperator], tol: f64) -> Vec<RegularOperator> {
    let mut builder = linalg::SpanBuilder::new(tol);
    let mut basis = Vec::new();
    for op in family {
        if builder.insert(&op.vectorize()) {
            basis.push(op.clone());
        }
    }
    basis
}

/// A basis of the smallest product-closed subspace containing the family.
fn product_closed_span(family: &[RegularOperator], tol: f64) -> Vec<RegularOperator> {
    let mut basis: Vec<RegularOperator> = Vec::new();
    let mut builder = linalg::SpanBuilder::new(tol);
    for op in family {
        if builder.insert(&op.vectorize()) {
            basis.push(op.clone());
        }
    }
    // saturate under products; dimension is bounded by n^2, so this stops
    loop {
        let snapshot = basis.clone();
        let mut grew = false;
        for a in &snapshot {
            for b in &snapshot {
                let prod = a.compose(b).expect("same context");
                if builder.insert(&prod.vectorize()) {
                    basis.push(prod);
                    grew = true;
                }
            }
        }
        if !grew {
            return basis;
        }
    }
}

/// Result of the independent three-way norm computation.
#[derive(Clone, Debug)]
pub struct NormIdentity {
    pub rep_norm: f64,
    pub regular_rep_norm: f64,
    pub full_projection_norm: f64,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Result of the automatic-boundedness estimates.
#[derive(Clone, Debug)]
pub struct BoundednessCheck {
    pub unit_image_norm: f64,
    /// Worst excess of `||pi(phi)||` over `||pi(1)|| ||phi||`.
    pub sharp_excess: f64,
    /// Worst excess over `||pi(1)|| (||phi+|| + ||phi-||)`.
    pub split_excess: f64,
    pub pass: bool,
}

/// Result of a weak-characterization probe.
#[derive(Clone, Debug)]
pub struct WeakCharacterization {
    pub max_gap: f64,
    pub pass: bool,
}

/// Result of a monotone-convergence check along a chain.
#[derive(Clone, Debug)]
pub struct MonotoneConvergence {
    pub images_monotone: bool,
    pub dominated: bool,
    pub sup_deviation: f64,
    pub wot_monotone: bool,
    pub wot_final_gap: f64,
    pub pass: bool,
}

/// Result of the commutant comparison.
#[derive(Clone, Debug)]
pub struct CommutantEquality {
    pub dims: [usize; 3],
    pub equal: bool,
}

/// Result of the generated-subalgebra comparison.
#[derive(Clone, Debug)]
pub struct SubalgebraCheck {
    pub dims: [usize; 3],
    pub equal: bool,
}
