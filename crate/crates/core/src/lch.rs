//! A desk-scale model of a locally compact Hausdorff space: the points
//! `0..N-1` of a truncated discrete half-line, plus an optional tail atom
//! standing for everything beyond the cutoff as a single Borel lump.
//!
//! Every point is isolated, so every subset of the model is open, and the
//! compact sets are exactly the tail-free subsets. The tail atom never lies
//! in a compact set and is the one place where inner regularity, the gap
//! between continuous and measurable functionals, and regular versus
//! irregular spectral measures become non-vacuous. Without it, a finite
//! Hausdorff space is discrete and every regularity statement trivializes.
//!
//! The compact model (`has_tail = false`) doubles as the compact-space
//! case, where the constant function 1 belongs to the function algebra and
//! the unital theory applies.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lattice::LatticeContext;
use crate::operator::RegularOperator;
use crate::probe::ProbeGrid;
use crate::representation::{GeneratedRepresentation, PositiveRepresentation};
use crate::space::{AtomSpace, BorelFunction, MeasurableSet, SignedMeasure};
use crate::spectral::PositiveSpectralMeasure;
use crate::{Error, Result};

/// Point count beyond which subset enumeration in the regularity and
/// retrieval checks would blow up.
const ENUMERATION_MAX_POINTS: usize = 12;
/// Random `[0,1]`-valued functions per check grid.
const GRID_RANDOM_FUNCTIONS: usize = 32;

/// Label used for the tail atom.
pub const TAIL_LABEL: &str = "tail";

/// Truncated discrete model: points `0..cutoff`, optionally a tail lump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LchSpec", into = "LchSpec")]
pub struct DiscreteLch {
    cutoff: usize,
    has_tail: bool,
}

/// Wire form: `{"cutoff": N, "tail": true|false}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct LchSpec {
    cutoff: usize,
    tail: bool,
}

impl TryFrom<LchSpec> for DiscreteLch {
    type Error = Error;
    fn try_from(spec: LchSpec) -> Result<Self> {
        DiscreteLch::new(spec.cutoff, spec.tail)
    }
}

impl From<DiscreteLch> for LchSpec {
    fn from(m: DiscreteLch) -> Self {
        LchSpec {
            cutoff: m.cutoff,
            tail: m.has_tail,
        }
    }
}

impl DiscreteLch {
    pub fn new(cutoff: usize, has_tail: bool) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidModel("cutoff must be >= 1".into()));
        }
        if cutoff > ENUMERATION_MAX_POINTS {
            return Err(Error::InvalidModel(format!(
                "cutoff {cutoff} exceeds the enumeration cap {ENUMERATION_MAX_POINTS}"
            )));
        }
        Ok(DiscreteLch { cutoff, has_tail })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn has_tail(&self) -> bool {
        self.has_tail
    }

    /// The Borel σ-algebra carrier: atoms `"0".."N-1"` plus `"tail"`.
    pub fn atom_space(&self) -> AtomSpace {
        let mut labels: Vec<String> = (0..self.cutoff).map(|n| n.to_string()).collect();
        if self.has_tail {
            labels.push(TAIL_LABEL.to_string());
        }
        AtomSpace::new(labels).expect("labels are distinct")
    }

    /// Index of the tail atom in the atom space, when present.
    pub fn tail_index(&self) -> Option<usize> {
        self.has_tail.then_some(self.cutoff)
    }

    /// The set of all points (the largest compact set).
    pub fn point_set(&self) -> MeasurableSet {
        self.atom_space()
            .set_of(&(0..self.cutoff).collect::<Vec<_>>())
            .expect("points in range")
    }

    /// A set from point indices (tail excluded).
    pub fn set_of_points(&self, points: &[usize]) -> Result<MeasurableSet> {
        for &p in points {
            if p >= self.cutoff {
                return Err(Error::AtomOutOfRange {
                    index: p,
                    atoms: self.cutoff,
                });
            }
        }
        self.atom_space().set_of(points)
    }

    /// Compact sets are the tail-free ones.
    pub fn is_compact(&self, set: &MeasurableSet) -> bool {
        match self.tail_index() {
            Some(t) => !set.contains(t),
            None => true,
        }
    }

    /// Extend point values to the atom space, tail value 0: the embedding
    /// of the continuous functions into the bounded measurable ones.
    pub fn c0_to_borel(&self, phi: &C0Function) -> Result<BorelFunction> {
        if phi.point_values().len() != self.cutoff {
            return Err(Error::InvalidModel(format!(
                "function has {} point values for cutoff {}",
                phi.point_values().len(),
                self.cutoff
            )));
        }
        let mut values = phi.point_values().to_vec();
        if self.has_tail {
            values.push(0.0);
        }
        BorelFunction::new(values, &self.atom_space())
    }
}

/// A function in the model of `C_0(X)`: values on the points, tail value
/// identically zero — that zero is what "vanishing at infinity" means here.
/// At finite cutoff every such function has compact support; the flag is
/// retained for fidelity of the compactly-supported subalgebra.
#[derive(Clone, Debug, PartialEq)]
pub struct C0Function {
    values: Vec<f64>,
    compactly_supported: bool,
}

impl C0Function {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidModel("function values must be finite".into()));
        }
        Ok(C0Function {
            values,
            compactly_supported: true,
        })
    }

    pub fn indicator(cutoff: usize, point: usize) -> Result<Self> {
        if point >= cutoff {
            return Err(Error::AtomOutOfRange {
                index: point,
                atoms: cutoff,
            });
        }
        let mut values = vec![0.0; cutoff];
        values[point] = 1.0;
        Ok(C0Function {
            values,
            compactly_supported: true,
        })
    }

    pub fn constant(cutoff: usize, c: f64) -> Self {
        C0Function {
            values: vec![c; cutoff],
            compactly_supported: true,
        }
    }

    pub fn point_values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.compactly_supported
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// The Riesz correspondence on the discrete model: a functional given by
/// point weights (plus a tail weight the continuous functions cannot see)
/// against its representing measure.
#[derive(Clone, Debug)]
pub struct RieszCorrespondence {
    pub measure: SignedMeasure,
    /// `l1` norm of all atom weights, the total variation.
    pub total_variation: f64,
    /// Norm of `phi -> integral phi d mu` over the `C_0` model, by sign
    /// enumeration over the points.
    pub functional_norm: f64,
    /// `l1` norm of the point part alone; this is what the functional norm
    /// can attain.
    pub point_part: f64,
    /// `functional_norm == point_part` exactly; the tail weight is the
    /// documented gap between `C_0` and the bounded measurable functions.
    pub isometry_holds: bool,
}

/// Build the measure with the given atom weights and check the isometric
/// correspondence between its total variation and the induced functional
/// norm on the `C_0` model.
pub fn riesz_to_measure(
    model: &DiscreteLch,
    point_weights: &[f64],
    tail_weight: f64,
) -> Result<RieszCorrespondence> {
    if point_weights.len() != model.cutoff() {
        return Err(Error::InvalidModel(format!(
            "{} weights for cutoff {}",
            point_weights.len(),
            model.cutoff()
        )));
    }
    if !model.has_tail() && tail_weight != 0.0 {
        return Err(Error::InvalidModel(
            "compact model has no tail atom to weight".into(),
        ));
    }
    let mut values = point_weights.to_vec();
    if model.has_tail() {
        values.push(tail_weight);
    }
    let measure = SignedMeasure::new(values, &model.atom_space())?;
    let total_variation = measure.total_variation();
    let point_part: f64 = point_weights.iter().map(|w| w.abs()).sum();
    // sup over the unit ball of the C_0 model, exact on sign vectors
    let n = model.cutoff();
    if n > 16 {
        return Err(Error::TooManyAtoms(n));
    }
    let mut functional_norm = 0.0_f64;
    for mask in 0u32..(1u32 << n) {
        let phi = C0Function::new(
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect(),
        )?;
        let value = measure.integrate(&model.c0_to_borel(&phi)?)?;
        functional_norm = functional_norm.max(value.abs());
    }
    Ok(RieszCorrespondence {
        measure,
        total_variation,
        functional_norm,
        point_part,
        isometry_holds: (functional_norm - point_part).abs() <= f64::EPSILON * point_part.max(1.0),
    })
}

/// One compared identity inside a regularity report.
#[derive(Clone, Debug)]
pub struct Identity {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Identity {
    fn compare(lhs: f64, rhs: f64, tol: f64) -> Self {
        Identity {
            lhs,
            rhs,
            holds: (lhs - rhs).abs() <= tol,
        }
    }
}

/// Regularity of a positive scalar measure at one Borel set.
#[derive(Clone, Debug)]
pub struct MeasureRegularity {
    /// `mu(D) = inf {mu(V) : V open, V contains D}`; exact here since `D`
    /// itself is open.
    pub outer: Identity,
    /// `mu(D) = sup {mu(K) : K compact, K inside D}`; fails by the tail
    /// mass when the tail lies in `D`.
    pub inner: Identity,
    /// `mu(V) = sup of integrals over compactly supported 0 <= phi <= 1`
    /// with support in `V := D`.
    pub open_function_formula: Identity,
    /// `mu(K) = inf of integrals over phi >= chi_K` with `K := D` minus
    /// the tail.
    pub compact_function_formula: Identity,
    /// The inner-regularity defect, i.e. the tail mass inside `D`.
    pub gap: f64,
    pub regular_on_set: bool,
}

/// Check outer/inner regularity and both function formulas for a positive
/// measure at the set `delta`, by exhaustive enumeration plus a seeded
/// function grid.
pub fn measure_regularity_check(
    model: &DiscreteLch,
    mu: &SignedMeasure,
    delta: &MeasurableSet,
    seed: u64,
    tol: f64,
) -> Result<MeasureRegularity> {
    let space = model.atom_space();
    if mu.space() != &space || delta.space() != &space {
        return Err(Error::SpaceMismatch);
    }
    if !mu.is_positive(tol) {
        return Err(Error::MeasureNotPositive);
    }
    let target = mu.measure_of(delta)?;

    // outer: every superset is open; the inf scans them all
    let complement_atoms: Vec<usize> = delta.complement().members().collect();
    let mut outer_inf = f64::INFINITY;
    for mask in 0u32..(1u32 << complement_atoms.len()) {
        let extra: Vec<usize> = complement_atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        let v = delta.union(&space.set_of(&extra)?)?;
        outer_inf = outer_inf.min(mu.measure_of(&v)?);
    }
    let outer = Identity::compare(target, outer_inf, tol);

    // inner: compacts are the tail-free subsets of delta
    let compact_part = match model.tail_index() {
        Some(t) => delta.difference(&space.singleton(t)?)?,
        None => delta.clone(),
    };
    let compact_atoms: Vec<usize> = compact_part.members().collect();
    let mut inner_sup = 0.0_f64;
    for mask in 0u32..(1u32 << compact_atoms.len()) {
        let k: Vec<usize> = compact_atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        inner_sup = inner_sup.max(mu.measure_of(&space.set_of(&k)?)?);
    }
    let inner = Identity::compare(target, inner_sup, tol);
    let gap = target - mu.measure_of(&compact_part)?;

    // sup over compactly supported 0 <= phi <= 1 with support in V := delta
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support_points: Vec<usize> = compact_part.members().collect();
    let mut open_sup = 0.0_f64;
    for phi in function_grid(model, &support_points, &mut rng)? {
        open_sup = open_sup.max(mu.integrate(&phi)?);
    }
    let open_function_formula = Identity::compare(target, open_sup, tol);

    // inf over phi >= chi_K for the compact part K
    let k_target = mu.measure_of(&compact_part)?;
    let chi_k = compact_part.char_fn();
    let mut compact_inf = mu.integrate(&chi_k)?;
    for _ in 0..GRID_RANDOM_FUNCTIONS {
        let bump: Vec<f64> = (0..space.len())
            .map(|_| rng.random_range(0.0..1.0))
            .collect();
        let mut phi = BorelFunction::new(bump, &space)?.pointwise_max(&chi_k)?;
        if let Some(t) = model.tail_index() {
            // stay inside the compactly supported family
            let mut vals = phi.values().to_vec();
            vals[t] = 0.0;
            phi = BorelFunction::new(vals, &space)?;
        }
        if chi_k.leq(&phi, 0.0) {
            compact_inf = compact_inf.min(mu.integrate(&phi)?);
        }
    }
    let compact_function_formula = Identity::compare(k_target, compact_inf, tol);

    let regular_on_set =
        outer.holds && inner.holds && open_function_formula.holds && compact_function_formula.holds;
    Ok(MeasureRegularity {
        outer,
        inner,
        open_function_formula,
        compact_function_formula,
        gap,
        regular_on_set,
    })
}

/// All 0/1 indicators of subsets of `support_points`, plus random
/// `[0,1]`-valued functions supported there, as measurable functions on the
/// model's atom space (tail value 0, so all are compactly supported).
fn function_grid(
    model: &DiscreteLch,
    support_points: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<BorelFunction>> {
    let space = model.atom_space();
    let mut grid = Vec::new();
    for mask in 0u32..(1u32 << support_points.len()) {
        let subset: Vec<usize> = support_points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        grid.push(space.set_of(&subset)?.char_fn());
    }
    for _ in 0..GRID_RANDOM_FUNCTIONS {
        let mut values = vec![0.0; space.len()];
        for &p in support_points {
            values[p] = rng.random_range(0.0..1.0);
        }
        grid.push(BorelFunction::new(values, &space)?);
    }
    Ok(grid)
}

/// Regularity of a positive spectral measure on the model.
#[derive(Clone, Debug)]
pub struct SpectralRegularity {
    /// Every induced scalar measure over the cone probe grid is regular.
    pub regular: bool,
    /// `||P(tail)||`, zero when there is no tail atom.
    pub tail_norm: f64,
    /// At this scale, regular must mean exactly `P(tail) = 0`.
    pub matches_tail_predicate: bool,
    pub witness: Option<String>,
    /// Entrywise deviation of `P(D)` from the inf over open supersets.
    pub outer_deviation: f64,
    /// Entrywise deviation of `P(D)` from the sup over compact subsets.
    pub inner_deviation: f64,
}

/// Check the spectral measure's regularity: scalar regularity of the
/// induced measures over the cone probe pairs, the tail dichotomy, and the
/// operator-order identities (inf over open supersets, sup over compact
/// subsets) at the set `delta`.
pub fn spectral_regularity_check(
    model: &DiscreteLch,
    measure: &PositiveSpectralMeasure,
    delta: &MeasurableSet,
    probe: &ProbeGrid,
    seed: u64,
    tol: f64,
) -> Result<SpectralRegularity> {
    let space = model.atom_space();
    if measure.space() != &space || delta.space() != &space {
        return Err(Error::SpaceMismatch);
    }
    let mut regular = true;
    let mut witness = None;
    for (x, xstar) in probe.cone_pairs() {
        let mu = measure.mu_pair(x, xstar)?;
        let reg = measure_regularity_check(model, &mu, &space.full_set(), seed, tol)?;
        if !reg.regular_on_set {
            regular = false;
            witness = Some(format!(
                "mu_(x,x*) with x = {:?}, x* = {:?} has tail mass {}",
                x.coords(),
                xstar.coords(),
                reg.gap
            ));
            break;
        }
    }
    let tail_norm = match model.tail_index() {
        Some(t) => measure.atom_projection(t).operator_norm()?,
        None => 0.0,
    };
    let matches_tail_predicate = regular == (tail_norm <= tol);

    // operator-order identities, entrywise over exhaustive enumerations
    let target = measure.evaluate(delta)?;
    let complement_atoms: Vec<usize> = delta.complement().members().collect();
    let mut open_values = Vec::new();
    for mask in 0u32..(1u32 << complement_atoms.len()) {
        let extra: Vec<usize> = complement_atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        open_values.push(measure.evaluate(&delta.union(&space.set_of(&extra)?)?)?);
    }
    let outer_deviation = RegularOperator::inf_family(&open_values)?
        .sub(&target)?
        .max_abs_entry();

    let compact_part = match model.tail_index() {
        Some(t) => delta.difference(&space.singleton(t)?)?,
        None => delta.clone(),
    };
    let compact_atoms: Vec<usize> = compact_part.members().collect();
    let mut compact_values = Vec::new();
    for mask in 0u32..(1u32 << compact_atoms.len()) {
        let k: Vec<usize> = compact_atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        compact_values.push(measure.evaluate(&space.set_of(&k)?)?);
    }
    let inner_deviation = RegularOperator::sup_family(&compact_values)?
        .sub(&target)?
        .max_abs_entry();

    Ok(SpectralRegularity {
        regular,
        tail_norm,
        matches_tail_predicate,
        witness,
        outer_deviation,
        inner_deviation,
    })
}

/// A positive representation of the `C_0` model, given through the images
/// of the point indicators.
#[derive(Clone, Debug)]
pub struct C0Representation {
    model: DiscreteLch,
    context: LatticeContext,
    point_images: Vec<RegularOperator>,
}

impl C0Representation {
    pub fn new(
        model: DiscreteLch,
        context: LatticeContext,
        point_images: Vec<RegularOperator>,
    ) -> Result<Self> {
        if point_images.len() != model.cutoff() {
            return Err(Error::InvalidModel(format!(
                "{} images for {} points",
                point_images.len(),
                model.cutoff()
            )));
        }
        for p in &point_images {
            if p.context() != &context {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(C0Representation {
            model,
            context,
            point_images,
        })
    }

    /// Restrict a spectral measure on the model's Borel algebra to the
    /// continuous functions: keep the point projections, forget the tail.
    pub fn restriction_of(model: &DiscreteLch, measure: &PositiveSpectralMeasure) -> Result<Self> {
        if measure.space() != &model.atom_space() {
            return Err(Error::SpaceMismatch);
        }
        Ok(C0Representation {
            model: model.clone(),
            context: measure.context().clone(),
            point_images: measure.atom_projections()[..model.cutoff()].to_vec(),
        })
    }

    pub fn model(&self) -> &DiscreteLch {
        &self.model
    }

    pub fn context(&self) -> &LatticeContext {
        &self.context
    }

    pub fn point_images(&self) -> &[RegularOperator] {
        &self.point_images
    }

    /// `pi(phi) = sum_n phi(n) pi(chi_n)`.
    pub fn apply(&self, phi: &C0Function) -> Result<RegularOperator> {
        if phi.point_values().len() != self.model.cutoff() {
            return Err(Error::InvalidModel("point count mismatch".into()));
        }
        let mut acc = RegularOperator::zero(&self.context);
        for (n, p) in self.point_images.iter().enumerate() {
            let v = phi.point_values()[n];
            if v != 0.0 {
                acc = acc.add(&p.scale(v))?;
            }
        }
        Ok(acc)
    }

    /// The constructive existence direction on this model: the unique
    /// generating regular positive spectral measure of the representation.
    /// `P({n}) = pi(chi_n)`, and `P(tail) = 0` is forced — the supremum of
    /// the images of compactly supported functions living inside the tail
    /// region is the supremum of the empty family, i.e. zero. (The
    /// hypothesis that makes this work in general — increasing norm-bounded
    /// positive sequences converge — is automatic here: the lattice is
    /// finite-dimensional, hence reflexive.)
    ///
    /// Fails when the images do not satisfy the representation constraints;
    /// on success the generated representation restricts back to this one
    /// exactly, and the measure is regular.
    pub fn extract_regular_measure(&self, tol: f64) -> Result<PositiveSpectralMeasure> {
        let space = self.model.atom_space();
        let mut projections = self.point_images.clone();
        if self.model.has_tail() {
            projections.push(RegularOperator::zero(&self.context));
        }
        let candidate = PositiveSpectralMeasure::new(space, self.context.clone(), projections)?;
        let report = candidate.validate(tol);
        if !report.pass() {
            let first = report.failures().next().expect("some failure");
            return Err(Error::InvalidRepresentation(format!(
                "{}: {}",
                first.name,
                first.witness.as_deref().unwrap_or("no witness")
            )));
        }
        // restriction agreement on the point indicators
        let generated = GeneratedRepresentation::from_valid(candidate.clone());
        for n in 0..self.model.cutoff() {
            let phi = C0Function::indicator(self.model.cutoff(), n)?;
            let lhs = generated.apply(&self.model.c0_to_borel(&phi)?)?;
            let rhs = self.apply(&phi)?;
            if !lhs.approx_eq(&rhs, tol) {
                return Err(Error::InvalidRepresentation(
                    "generated representation does not restrict to the input".into(),
                ));
            }
        }
        Ok(candidate)
    }
}

/// Retrieval of the measure from the representation by order formulas.
#[derive(Clone, Debug)]
pub struct RetrievalReport {
    /// The extraction round-trip reproduces `P`; fails exactly when `P`
    /// carries tail mass.
    pub roundtrip_ok: bool,
    /// Entrywise deviation of `sup {pi(phi) : supp phi in V}` from `P(V)`.
    pub open_sup_deviation: f64,
    /// Entrywise deviation of `inf {pi(phi) : phi >= chi_K}` from `P(K)`.
    pub compact_inf_deviation: f64,
    /// Entrywise deviation of `sup {pi(phi) : 0 <= phi <= 1}` from `P(X)`.
    pub full_sup_deviation: f64,
    /// The truncation chain has entrywise nondecreasing images.
    pub truncation_monotone: bool,
    /// First truncation step whose image reaches `P(X)`.
    pub steps_to_converge: usize,
    /// Final pairing gap of the truncation chain over the probe grid.
    pub wot_final_gap: f64,
    pub pass: bool,
}

/// Check the order-retrieval formulas tying a representation to its
/// generating measure: the sup formula on an open set, the inf formula on a
/// compact set, the sup formula for `P(X)`, and the truncation chain
/// modeling an exhaustion by compact sets.
pub fn retrieval_formulas_check(
    model: &DiscreteLch,
    rep: &C0Representation,
    measure: &PositiveSpectralMeasure,
    open_set: &MeasurableSet,
    compact_set: &MeasurableSet,
    probe: &ProbeGrid,
    seed: u64,
    tol: f64,
) -> Result<RetrievalReport> {
    let space = model.atom_space();
    if measure.space() != &space || open_set.space() != &space || compact_set.space() != &space {
        return Err(Error::SpaceMismatch);
    }
    if !model.is_compact(compact_set) {
        return Err(Error::InvalidModel(
            "compact sets cannot contain the tail".into(),
        ));
    }
    // pre: the measure generates the representation
    let roundtrip_ok = match rep.extract_regular_measure(tol) {
        Ok(extracted) => extracted
            .atom_projections()
            .iter()
            .zip(measure.atom_projections())
            .all(|(p, q)| p.approx_eq(q, tol)),
        Err(_) => false,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // sup over compactly supported functions under chi_V
    let open_points: Vec<usize> = open_set
        .members()
        .filter(|&a| Some(a) != model.tail_index())
        .collect();
    let mut family = vec![RegularOperator::zero(rep.context())];
    for phi in point_function_grid(model, &open_points, &mut rng)? {
        family.push(rep.apply(&phi)?);
    }
    let open_sup_deviation = RegularOperator::sup_family(&family)?
        .sub(&measure.evaluate(open_set)?)?
        .max_abs_entry();

    // inf over functions dominating chi_K
    let compact_points: Vec<usize> = compact_set.members().collect();
    let chi_k = {
        let mut values = vec![0.0; model.cutoff()];
        for &p in &compact_points {
            values[p] = 1.0;
        }
        C0Function::new(values)?
    };
    let mut family = vec![rep.apply(&chi_k)?];
    for _ in 0..GRID_RANDOM_FUNCTIONS {
        let values: Vec<f64> = (0..model.cutoff())
            .map(|p| {
                if compact_points.contains(&p) {
                    1.0
                } else {
                    rng.random_range(0.0..1.0)
                }
            })
            .collect();
        family.push(rep.apply(&C0Function::new(values)?)?);
    }
    let compact_inf_deviation = RegularOperator::inf_family(&family)?
        .sub(&measure.evaluate(compact_set)?)?
        .max_abs_entry();

    // sup over all 0 <= phi <= 1 in the C_0 model against P(X)
    let all_points: Vec<usize> = (0..model.cutoff()).collect();
    let mut family = vec![RegularOperator::zero(rep.context())];
    for phi in point_function_grid(model, &all_points, &mut rng)? {
        family.push(rep.apply(&phi)?);
    }
    let full_sup_deviation = RegularOperator::sup_family(&family)?
        .sub(&measure.full_projection())?
        .max_abs_entry();

    // truncation chain chi_{[0,n)} increasing to the whole space
    let full = measure.full_projection();
    let mut truncation_monotone = true;
    let mut steps_to_converge = model.cutoff();
    let mut prev = RegularOperator::zero(rep.context());
    let mut images = Vec::new();
    for n in 1..=model.cutoff() {
        let phi = C0Function::new(
            (0..model.cutoff())
                .map(|p| if p < n { 1.0 } else { 0.0 })
                .collect(),
        )?;
        let image = rep.apply(&phi)?;
        if !prev.leq_entrywise(&image, tol) {
            truncation_monotone = false;
        }
        if image.approx_eq(&full, tol) && n < steps_to_converge {
            steps_to_converge = n;
        }
        prev = image.clone();
        images.push(image);
    }
    let mut wot_final_gap = 0.0_f64;
    let last = images.last().expect("cutoff >= 1");
    for (x, xstar) in probe.cone_pairs() {
        let lhs = last.apply(x)?.pair(xstar)?;
        let rhs = full.apply(x)?.pair(xstar)?;
        wot_final_gap = wot_final_gap.max((lhs - rhs).abs());
    }
    let converged = last.approx_eq(&full, tol);

    let pass = roundtrip_ok
        && open_sup_deviation <= tol
        && compact_inf_deviation <= tol
        && full_sup_deviation <= tol
        && truncation_monotone
        && converged
        && wot_final_gap <= tol;
    Ok(RetrievalReport {
        roundtrip_ok,
        open_sup_deviation,
        compact_inf_deviation,
        full_sup_deviation,
        truncation_monotone,
        steps_to_converge,
        wot_final_gap,
        pass,
    })
}

/// Indicators of all subsets of the given points plus random `[0,1]`
/// functions supported there, as `C_0` model functions.
fn point_function_grid(
    model: &DiscreteLch,
    points: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<C0Function>> {
    let mut grid = Vec::new();
    for mask in 0u32..(1u32 << points.len()) {
        let mut values = vec![0.0; model.cutoff()];
        for (i, &p) in points.iter().enumerate() {
            if mask >> i & 1 == 1 {
                values[p] = 1.0;
            }
        }
        grid.push(C0Function::new(values)?);
    }
    for _ in 0..GRID_RANDOM_FUNCTIONS {
        let mut values = vec![0.0; model.cutoff()];
        for &p in points {
            values[p] = rng.random_range(0.0..1.0);
        }
        grid.push(C0Function::new(values)?);
    }
    Ok(grid)
}

/// Automatic-continuity report on the compact model.
#[derive(Clone, Debug)]
pub struct ContinuityReport {
    pub unit_image_norm: f64,
    pub rep_norm: f64,
    pub regular_rep_norm: f64,
    /// Worst excess of `||pi(phi)||` over
    /// `||pi(1)|| (||phi+|| + ||phi-||)` on the function grid.
    pub split_excess: f64,
    /// Worst excess over `2 ||pi(1)|| ||phi||`.
    pub factor2_excess: f64,
    /// Worst excess over the sharp `||pi(1)|| ||phi||`; finite dimension is
    /// Dedekind complete, so the factor 2 disappears.
    pub sharp_excess: f64,
    pub pass: bool,
}

/// On a compact model, check the boundedness estimates and the norm
/// equalities `||pi|| = ||pi||_r = ||pi(1)||`, each side computed
/// independently (sign enumeration for the left sides).
pub fn automatic_continuity_check(
    model: &DiscreteLch,
    rep: &C0Representation,
    seed: u64,
    tol: f64,
) -> Result<ContinuityReport> {
    if model.has_tail() {
        return Err(Error::TailModel);
    }
    let unit = C0Function::constant(model.cutoff(), 1.0);
    let unit_image_norm = rep.apply(&unit)?.operator_norm()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split_excess = 0.0_f64;
    let mut factor2_excess = 0.0_f64;
    let mut sharp_excess = 0.0_f64;
    for _ in 0..GRID_RANDOM_FUNCTIONS {
        let values: Vec<f64> = (0..model.cutoff())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let phi = C0Function::new(values)?;
        let image_norm = rep.apply(&phi)?.operator_norm()?;
        let pos: f64 = phi.point_values().iter().fold(0.0, |m, v| m.max(*v));
        let neg: f64 = phi.point_values().iter().fold(0.0, |m, v| m.max(-*v));
        split_excess = split_excess.max(image_norm - unit_image_norm * (pos + neg));
        factor2_excess = factor2_excess.max(image_norm - 2.0 * unit_image_norm * phi.sup_norm());
        sharp_excess = sharp_excess.max(image_norm - unit_image_norm * phi.sup_norm());
    }

    // ||pi|| and ||pi||_r by sign enumeration over the points
    let n = model.cutoff();
    if n > 16 {
        return Err(Error::TooManyAtoms(n));
    }
    let mut rep_norm = 0.0_f64;
    let mut regular_rep_norm = 0.0_f64;
    for mask in 0u32..(1u32 << n) {
        let phi = C0Function::new(
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect(),
        )?;
        let image = rep.apply(&phi)?;
        rep_norm = rep_norm.max(image.operator_norm()?);
        regular_rep_norm = regular_rep_norm.max(image.regular_norm()?);
    }
    let equalities = (rep_norm - unit_image_norm).abs() <= tol
        && (regular_rep_norm - unit_image_norm).abs() <= tol;
    let pass = equalities && split_excess <= tol && factor2_excess <= tol && sharp_excess <= tol;
    Ok(ContinuityReport {
        unit_image_norm,
        rep_norm,
        regular_rep_norm,
        split_excess,
        factor2_excess,
        sharp_excess,
        pass,
    })
}

/// Monotone-class extension of a `C_0`-model representation to the bounded
/// measurable functions.
#[derive(Clone, Debug)]
pub struct ExtensionReport {
    /// The extension, with one image per Borel atom (tail included).
    pub extension: PositiveRepresentation,
    /// `||pi~(chi_tail)||`; the family of compactly supported functions
    /// under the tail indicator is empty, so this must vanish.
    pub tail_image_norm: f64,
    /// Worst deviation of `pi~(phi psi)` from `pi~(phi) pi~(psi)`.
    pub multiplicativity_deviation: f64,
    /// Worst deviation from the generated representation of the extracted
    /// measure over the random function grid.
    pub agreement_deviation: f64,
    pub pass: bool,
}

/// Extend a representation of the continuous functions to the bounded
/// measurable ones: indicator images via the sup formula over compactly
/// supported minorants, then linear extension. Agreement with the generated
/// representation of the extracted measure is checked on a random grid of
/// 64 measurable functions.
pub fn monotone_class_extend(
    model: &DiscreteLch,
    rep: &C0Representation,
    seed: u64,
    tol: f64,
) -> Result<ExtensionReport> {
    let space = model.atom_space();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // indicator images: sup over the compactly supported grid below chi_V
    let mut atom_images = Vec::with_capacity(space.len());
    for atom in 0..space.len() {
        let points: Vec<usize> = if Some(atom) == model.tail_index() {
            Vec::new()
        } else {
            vec![atom]
        };
        let mut family = vec![RegularOperator::zero(rep.context())];
        for phi in point_function_grid(model, &points, &mut rng)? {
            family.push(rep.apply(&phi)?);
        }
        atom_images.push(RegularOperator::sup_family(&family)?);
    }
    let extension = PositiveRepresentation::new(space.clone(), rep.context().clone(), atom_images)?;
    let tail_image_norm = match model.tail_index() {
        Some(t) => extension.atom_images()[t].operator_norm()?,
        None => 0.0,
    };

    let random_fn = |rng: &mut ChaCha8Rng| -> Result<BorelFunction> {
        let values: Vec<f64> = (0..space.len())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        BorelFunction::new(values, &space)
    };

    let mut multiplicativity_deviation = 0.0_f64;
    for _ in 0..32 {
        let phi = random_fn(&mut rng)?;
        let psi = random_fn(&mut rng)?;
        let lhs = extension.apply(&phi.mul(&psi)?)?;
        let rhs = extension.apply(&phi)?.compose(&extension.apply(&psi)?)?;
        multiplicativity_deviation = multiplicativity_deviation.max(lhs.sub(&rhs)?.max_abs_entry());
    }

    let extracted = rep.extract_regular_measure(tol)?;
    let generated = GeneratedRepresentation::from_valid(extracted);
    let mut agreement_deviation = 0.0_f64;
    for _ in 0..64 {
        let phi = random_fn(&mut rng)?;
        let lhs = extension.apply(&phi)?;
        let rhs = generated.apply(&phi)?;
        agreement_deviation = agreement_deviation.max(lhs.sub(&rhs)?.max_abs_entry());
    }

    let pass =
        tail_image_norm <= tol && multiplicativity_deviation <= tol && agreement_deviation <= tol;
    Ok(ExtensionReport {
        extension,
        tail_image_norm,
        multiplicativity_deviation,
        agreement_deviation,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{LatticeVector, NormKind};
    use crate::spectral::GeneratorStyle;
    use crate::DEFAULT_TOL;

    fn ctx(dim: usize) -> LatticeContext {
        LatticeContext::unweighted(dim, NormKind::Linf).unwrap()
    }

    fn band_measure_on(model: &DiscreteLch, tail_mass: f64) -> PositiveSpectralMeasure {
        // one diagonal coordinate per point, optional tail mass on the last
        let n = model.cutoff();
        let dim = n + 1;
        let c = ctx(dim);
        let mut projections = Vec::new();
        for p in 0..n {
            let mut diag = vec![0.0; dim];
            diag[p] = 1.0;
            projections.push(RegularOperator::diagonal(&c, &diag).unwrap());
        }
        if model.has_tail() {
            let mut diag = vec![0.0; dim];
            diag[dim - 1] = tail_mass;
            projections.push(RegularOperator::diagonal(&c, &diag).unwrap());
        }
        PositiveSpectralMeasure::new(model.atom_space(), c, projections).unwrap()
    }

    #[test]
    fn model_structure() {
        let m = DiscreteLch::new(3, true).unwrap();
        assert_eq!(m.atom_space().labels(), &["0", "1", "2", "tail"]);
        assert_eq!(m.tail_index(), Some(3));
        assert!(m.is_compact(&m.point_set()));
        assert!(!m.is_compact(&m.atom_space().full_set()));
        let compact = DiscreteLch::new(3, false).unwrap();
        assert_eq!(compact.atom_space().len(), 3);
        assert!(DiscreteLch::new(0, true).is_err());
        let json: DiscreteLch = serde_json::from_str(r#"{"cutoff":4,"tail":true}"#).unwrap();
        assert_eq!(json, DiscreteLch::new(4, true).unwrap());
    }

    #[test]
    fn riesz_isometry_on_points() {
        let m = DiscreteLch::new(3, false).unwrap();
        let r = riesz_to_measure(&m, &[1.0, -2.0, 0.5], 0.0).unwrap();
        assert!((r.total_variation - 3.5).abs() < 1e-15);
        assert!((r.functional_norm - 3.5).abs() < 1e-15);
        assert!(r.isometry_holds);
        let zero = riesz_to_measure(&m, &[0.0, 0.0, 0.0], 0.0).unwrap();
        assert_eq!(zero.functional_norm, 0.0);
    }

    #[test]
    fn riesz_tail_weight_is_invisible_to_c0() {
        let m = DiscreteLch::new(2, true).unwrap();
        let r = riesz_to_measure(&m, &[1.0, 2.0], 0.5).unwrap();
        assert!((r.total_variation - 3.5).abs() < 1e-15);
        assert!((r.functional_norm - 3.0).abs() < 1e-15);
        assert!((r.point_part - 3.0).abs() < 1e-15);
        assert!(r.isometry_holds, "attainable norm is the point part");
        // positive weights: the norm is reached along increasing truncations
        let pos = riesz_to_measure(&m, &[0.5, 1.5], 0.0).unwrap();
        assert!((pos.functional_norm - 2.0).abs() < 1e-15);
        let mut previous = 0.0;
        for n in 1..=m.cutoff() {
            let phi = C0Function::new(
                (0..m.cutoff())
                    .map(|p| if p < n { 1.0 } else { 0.0 })
                    .collect(),
            )
            .unwrap();
            let value = pos
                .measure
                .integrate(&m.c0_to_borel(&phi).unwrap())
                .unwrap();
            assert!(value >= previous);
            previous = value;
        }
        assert!((previous - pos.functional_norm).abs() < 1e-15);
    }

    #[test]
    fn measure_regularity_dichotomy() {
        let m = DiscreteLch::new(3, true).unwrap();
        let space = m.atom_space();
        let mu = SignedMeasure::new(vec![1.0, 0.5, 0.25, 0.3], &space).unwrap();
        // tail-free sets are fully regular
        let delta = m.set_of_points(&[0, 2]).unwrap();
        let reg = measure_regularity_check(&m, &mu, &delta, 1, DEFAULT_TOL).unwrap();
        assert!(reg.regular_on_set);
        assert_eq!(reg.gap, 0.0);
        // the tail singleton exposes the inner-regularity gap
        let tail = space.singleton(m.tail_index().unwrap()).unwrap();
        let reg = measure_regularity_check(&m, &mu, &tail, 1, DEFAULT_TOL).unwrap();
        assert!(!reg.regular_on_set);
        assert!((reg.gap - 0.3).abs() < 1e-15);
        assert!(
            reg.outer.holds,
            "outer regularity is free on a discrete model"
        );
        assert!(!reg.inner.holds);
        // the zero measure is regular everywhere
        let zero = SignedMeasure::zero(&space);
        let reg = measure_regularity_check(&m, &zero, &tail, 1, DEFAULT_TOL).unwrap();
        assert!(reg.regular_on_set);
        // signed measures are rejected
        let signed = SignedMeasure::new(vec![1.0, -0.5, 0.25, 0.0], &space).unwrap();
        assert!(matches!(
            measure_regularity_check(&m, &signed, &delta, 1, DEFAULT_TOL),
            Err(Error::MeasureNotPositive)
        ));
    }

    #[test]
    fn spectral_regularity_matches_tail_predicate() {
        let model = DiscreteLch::new(3, true).unwrap();
        let probe = ProbeGrid::new(&ctx(4), 9);
        let delta = model.atom_space().set_of(&[1, 3]).unwrap();

        let regular = band_measure_on(&model, 0.0);
        let r =
            spectral_regularity_check(&model, &regular, &delta, &probe, 5, DEFAULT_TOL).unwrap();
        assert!(r.regular && r.matches_tail_predicate);
        assert_eq!(r.tail_norm, 0.0);
        assert!(r.outer_deviation <= DEFAULT_TOL);
        assert!(
            r.inner_deviation <= DEFAULT_TOL,
            "P(tail) = 0 closes the gap"
        );

        let irregular = band_measure_on(&model, 1.0);
        let r =
            spectral_regularity_check(&model, &irregular, &delta, &probe, 5, DEFAULT_TOL).unwrap();
        assert!(!r.regular && r.matches_tail_predicate);
        assert!(r.tail_norm > 0.5);
        assert!(r.witness.is_some());
        assert!(r.inner_deviation > 0.5, "tail mass breaks inner retrieval");
        assert!(
            r.outer_deviation <= DEFAULT_TOL,
            "outer attains at V = Delta"
        );
    }

    #[test]
    fn extraction_from_c0_representation() {
        let model = DiscreteLch::new(3, true).unwrap();
        let measure = band_measure_on(&model, 0.0);
        let rep = C0Representation::restriction_of(&model, &measure).unwrap();
        let extracted = rep.extract_regular_measure(DEFAULT_TOL).unwrap();
        for (p, q) in extracted
            .atom_projections()
            .iter()
            .zip(measure.atom_projections())
        {
            assert!(p.approx_eq(q, 0.0));
        }
        // zero representation extracts the zero measure
        let c = ctx(4);
        let zero =
            C0Representation::new(model.clone(), c.clone(), vec![RegularOperator::zero(&c); 3])
                .unwrap();
        let extracted = zero.extract_regular_measure(DEFAULT_TOL).unwrap();
        assert_eq!(extracted.full_projection().max_abs_entry(), 0.0);
        // non-representations are rejected
        let c2 = ctx(2);
        let model2 = DiscreteLch::new(2, false).unwrap();
        let pa = RegularOperator::from_rows(vec![vec![1.0, 0.0], vec![0.0, 0.0]], &c2).unwrap();
        let pb = RegularOperator::from_rows(vec![vec![0.0, 0.0], vec![1.0, 1.0]], &c2).unwrap();
        let bad = C0Representation::new(model2, c2, vec![pa, pb]).unwrap();
        assert!(matches!(
            bad.extract_regular_measure(DEFAULT_TOL),
            Err(Error::InvalidRepresentation(_))
        ));
    }

    #[test]
    fn rank1_c0_representation_norm_identity() {
        // single-point compact model with the rank-one image [[1,0],[3,0]]
        let model = DiscreteLch::new(1, false).unwrap();
        let c = ctx(2);
        let image = RegularOperator::from_rows(vec![vec![1.0, 0.0], vec![3.0, 0.0]], &c).unwrap();
        let rep = C0Representation::new(model.clone(), c, vec![image]).unwrap();
        let measure = rep.extract_regular_measure(DEFAULT_TOL).unwrap();
        let generated = GeneratedRepresentation::from_valid(measure.clone());
        let ni = generated.norm_identity_check(DEFAULT_TOL).unwrap();
        assert!(ni.pass);
        assert!((ni.full_projection_norm - 3.0).abs() < 1e-12);
        let cont = automatic_continuity_check(&model, &rep, 3, DEFAULT_TOL).unwrap();
        assert!(cont.pass);
        assert!((cont.rep_norm - 3.0).abs() < 1e-12);
        assert!((cont.regular_rep_norm - 3.0).abs() < 1e-12);
    }

    #[test]
    fn retrieval_formulas_on_band_model() {
        let model = DiscreteLch::new(5, true).unwrap();
        let measure = band_measure_on(&model, 0.0);
        let rep = C0Representation::restriction_of(&model, &measure).unwrap();
        let probe = ProbeGrid::new(measure.context(), 2);
        let open = model.set_of_points(&[1, 3]).unwrap();
        let compact = model.set_of_points(&[0, 4]).unwrap();
        let r = retrieval_formulas_check(
            &model,
            &rep,
            &measure,
            &open,
            &compact,
            &probe,
            17,
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.steps_to_converge <= model.cutoff());
        // sup attained at chi_V: P_1 + P_3
        let expected = measure.evaluate(&open).unwrap();
        assert!(expected.approx_eq(
            &rep.apply(&C0Function::new(vec![0.0, 1.0, 0.0, 1.0, 0.0]).unwrap())
                .unwrap(),
            0.0
        ));
        // empty compact set: the inf formula gives 0
        let empty = model.set_of_points(&[]).unwrap();
        let r = retrieval_formulas_check(
            &model,
            &rep,
            &measure,
            &open,
            &empty,
            &probe,
            17,
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(r.compact_inf_deviation <= DEFAULT_TOL);
        // irregular measures fail the round-trip precondition
        let irregular = band_measure_on(&model, 1.0);
        let rep_irr = C0Representation::restriction_of(&model, &irregular).unwrap();
        let r = retrieval_formulas_check(
            &model,
            &rep_irr,
            &irregular,
            &open,
            &compact,
            &probe,
            17,
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(!r.roundtrip_ok && !r.pass);
    }

    #[test]
    fn continuity_requires_compact_model() {
        let model = DiscreteLch::new(2, true).unwrap();
        let measure = band_measure_on(&model, 0.0);
        let rep = C0Representation::restriction_of(&model, &measure).unwrap();
        assert!(matches!(
            automatic_continuity_check(&model, &rep, 1, DEFAULT_TOL),
            Err(Error::TailModel)
        ));
    }

    #[test]
    fn continuity_on_unital_diagonal() {
        let model = DiscreteLch::new(3, false).unwrap();
        let c = ctx(3);
        let images = vec![
            RegularOperator::diagonal(&c, &[1.0, 0.0, 0.0]).unwrap(),
            RegularOperator::diagonal(&c, &[0.0, 1.0, 0.0]).unwrap(),
            RegularOperator::diagonal(&c, &[0.0, 0.0, 1.0]).unwrap(),
        ];
        let rep = C0Representation::new(model.clone(), c.clone(), images).unwrap();
        let r = automatic_continuity_check(&model, &rep, 7, DEFAULT_TOL).unwrap();
        assert!(r.pass);
        assert!((r.rep_norm - 1.0).abs() < 1e-12);
        // zero representation
        let zero = C0Representation::new(
            model.clone(),
            c.clone(),
            vec![
                RegularOperator::zero(&c),
                RegularOperator::zero(&c),
                RegularOperator::zero(&c),
            ],
        )
        .unwrap();
        let r = automatic_continuity_check(&model, &zero, 7, DEFAULT_TOL).unwrap();
        assert_eq!(r.rep_norm, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn monotone_class_extension_agrees() {
        let model = DiscreteLch::new(3, true).unwrap();
        let measure = band_measure_on(&model, 0.0);
        let rep = C0Representation::restriction_of(&model, &measure).unwrap();
        let r = monotone_class_extend(&model, &rep, 23, DEFAULT_TOL).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.tail_image_norm, 0.0, "empty compactly supported family");
        // indicator images of points coincide with the input images
        for n in 0..model.cutoff() {
            assert!(r.extension.atom_images()[n].approx_eq(&rep.point_images()[n], 0.0));
        }
    }

    #[test]
    fn regularity_over_generated_corpus() {
        let model = DiscreteLch::new(4, true).unwrap();
        let c = ctx(5);
        let probe = ProbeGrid::new(&c, 31);
        let delta = model.atom_space().set_of(&[0, 2, 4]).unwrap();
        for seed in 0..10 {
            let measure = PositiveSpectralMeasure::random_on_space(
                &c,
                model.atom_space(),
                seed,
                GeneratorStyle::Band,
            )
            .unwrap();
            let tail_free = measure
                .atom_projection(model.tail_index().unwrap())
                .max_abs_entry()
                == 0.0;
            let r = spectral_regularity_check(&model, &measure, &delta, &probe, seed, DEFAULT_TOL)
                .unwrap();
            assert!(r.matches_tail_predicate, "seed {seed}");
            assert_eq!(r.regular, tail_free, "seed {seed}");
        }
    }

    #[test]
    fn uniqueness_of_the_generating_regular_measure() {
        // two regular measures with the same restriction to the continuous
        // functions are atomwise identical: perturbing the tail breaks
        // regularity, perturbing a point changes the restriction
        let model = DiscreteLch::new(3, true).unwrap();
        let a = band_measure_on(&model, 0.0);
        let b = band_measure_on(&model, 0.0);
        let ra = C0Representation::restriction_of(&model, &a).unwrap();
        let rb = C0Representation::restriction_of(&model, &b).unwrap();
        for n in 0..model.cutoff() {
            let phi = C0Function::indicator(model.cutoff(), n).unwrap();
            assert!(ra
                .apply(&phi)
                .unwrap()
                .approx_eq(&rb.apply(&phi).unwrap(), 0.0));
        }
        for (p, q) in a.atom_projections().iter().zip(b.atom_projections()) {
            assert!(p.approx_eq(q, 0.0));
        }
        let tail_perturbed = band_measure_on(&model, 0.25);
        let r = spectral_regularity_check(
            &model,
            &tail_perturbed,
            &model.point_set(),
            &ProbeGrid::new(a.context(), 3),
            3,
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(!r.regular, "tail perturbation loses regularity");

        // perturbing a point projection is visible to the restriction
        let mut projections = a.atom_projections().to_vec();
        projections[1] = projections[1].scale(0.0);
        let point_perturbed =
            PositiveSpectralMeasure::new(model.atom_space(), a.context().clone(), projections)
                .unwrap();
        let rp = C0Representation::restriction_of(&model, &point_perturbed).unwrap();
        let phi = C0Function::indicator(model.cutoff(), 1).unwrap();
        assert!(!rp
            .apply(&phi)
            .unwrap()
            .approx_eq(&ra.apply(&phi).unwrap(), DEFAULT_TOL));
    }

    #[test]
    fn regular_measure_norm_is_attained_over_c0() {
        // with no tail mass, the sup of ||pi(phi)|| over the C_0 unit ball
        // reaches ||P(X)||; tail mass pushes ||P(X)|| out of reach
        let model = DiscreteLch::new(3, true).unwrap();
        let regular = band_measure_on(&model, 0.0);
        let rep = C0Representation::restriction_of(&model, &regular).unwrap();
        let mut c0_norm = 0.0_f64;
        for mask in 0u32..(1 << model.cutoff()) {
            let phi = C0Function::new(
                (0..model.cutoff())
                    .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                    .collect(),
            )
            .unwrap();
            c0_norm = c0_norm.max(rep.apply(&phi).unwrap().operator_norm().unwrap());
        }
        let full_norm = regular.full_projection().operator_norm().unwrap();
        assert!((c0_norm - full_norm).abs() < 1e-12);

        let irregular = band_measure_on(&model, 2.0);
        let rep = C0Representation::restriction_of(&model, &irregular).unwrap();
        let mut c0_norm = 0.0_f64;
        for mask in 0u32..(1 << model.cutoff()) {
            let phi = C0Function::new(
                (0..model.cutoff())
                    .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                    .collect(),
            )
            .unwrap();
            c0_norm = c0_norm.max(rep.apply(&phi).unwrap().operator_norm().unwrap());
        }
        let full_norm = irregular.full_projection().operator_norm().unwrap();
        assert!(
            c0_norm <= full_norm + 1e-12,
            "restriction norm is dominated"
        );
        assert!(
            c0_norm < full_norm - 0.5,
            "tail mass is out of reach for C_0"
        );
    }

    #[test]
    fn vector_pairs_see_the_tail() {
        // an irregular measure yields an irregular scalar measure on some
        // probe pair; check a concrete witness by hand
        let model = DiscreteLch::new(2, true).unwrap();
        let measure = band_measure_on(&model, 1.0);
        let c = measure.context().clone();
        let x = LatticeVector::basis(&c, 2);
        let xs = LatticeVector::basis(&c, 2);
        let mu = measure.mu_pair(&x, &xs).unwrap();
        assert_eq!(mu.atom_value(model.tail_index().unwrap()), 1.0);
    }
}
