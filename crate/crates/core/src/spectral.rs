//! Positive spectral measures on finite atom spaces.
//!
//! A measure is stored through its atom projections `P_a`; the value on a
//! set is the sum over its atoms, so finite additivity (the finite-scale
//! form of σ-additivity) holds by construction and is re-verified rather
//! than assumed. The defining axioms — positivity, idempotence,
//! multiplicativity `P(D1 n D2) = P(D1) P(D2)` — are checked by
//! [`PositiveSpectralMeasure::validate`], which reports failures with
//! witnesses instead of raising.
//!
//! Multiplicativity quantifies over ordered pairs of sets, so at atom level
//! it forces annihilation in both orders: `P_a P_b = P_b P_a = 0` for
//! distinct atoms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lattice::{LatticeContext, LatticeVector};
use crate::operator::RegularOperator;
use crate::probe::ProbeGrid;
use crate::report::{CheckResult, ValidationReport};
use crate::space::{AtomSpace, MeasurableSet, SignedMeasure};
use crate::{Error, Result};

/// Atom count up to which the subset-pair checks are exhaustive.
const EXHAUSTIVE_ATOMS: usize = 6;
/// Sample size per check beyond the exhaustive range.
const SAMPLED_PAIRS: usize = 128;

/// An atom-indexed family of positive projections with pairwise zero
/// products, representing a positive spectral measure `P` on the power-set
/// σ-algebra of the atom space.
#[derive(Clone, Debug)]
pub struct PositiveSpectralMeasure {
    space: AtomSpace,
    context: LatticeContext,
    atom_projections: Vec<RegularOperator>,
}

/// How [`PositiveSpectralMeasure::random`] builds its instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorStyle {
    /// 0/1 diagonal projections on disjoint coordinate blocks; some
    /// coordinates stay unassigned, so non-unital instances arise.
    Band,
    /// Rank-one positive projections `u v^t` with `v . u = 1` and disjoint
    /// `v`-supports; the designated source of instances with `||P(X)|| > 1`.
    Rank1,
}

impl PositiveSpectralMeasure {
    /// Shape-checks only; the measure axioms are the business of
    /// [`validate`](Self::validate), so counterexamples stay constructible.
    pub fn new(
        space: AtomSpace,
        context: LatticeContext,
        atom_projections: Vec<RegularOperator>,
    ) -> Result<Self> {
        if atom_projections.len() != space.len() {
            return Err(Error::InvalidSpace(format!(
                "{} projections for {} atoms",
                atom_projections.len(),
                space.len()
            )));
        }
        for p in &atom_projections {
            if p.context() != &context {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(PositiveSpectralMeasure {
            space,
            context,
            atom_projections,
        })
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn context(&self) -> &LatticeContext {
        &self.context
    }

    pub fn atom_projections(&self) -> &[RegularOperator] {
        &self.atom_projections
    }

    pub fn atom_projection(&self, atom: usize) -> &RegularOperator {
        &self.atom_projections[atom]
    }

    /// `P(Delta) = sum of the atom projections in Delta`; `P(empty) = 0`.
    pub fn evaluate(&self, set: &MeasurableSet) -> Result<RegularOperator> {
        if set.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let mut acc = RegularOperator::zero(&self.context);
        for a in set.members() {
            acc = acc.add(&self.atom_projections[a])?;
        }
        Ok(acc)
    }

    /// `P(X)`, the value on the whole space.
    pub fn full_projection(&self) -> RegularOperator {
        self.evaluate(&self.space.full_set())
            .expect("full set lives on the measure's space")
    }

    /// `P(X) = id` within `tol`?
    pub fn is_unital(&self, tol: f64) -> bool {
        self.full_projection()
            .approx_eq(&RegularOperator::identity(&self.context), tol)
    }

    /// Check every defining axiom and report per-axiom results: positivity,
    /// idempotence, both-order annihilation, `P(empty) = 0`, finite
    /// additivity, multiplicativity over subset pairs, and positivity +
    /// idempotence of every derived `P(Delta)`. Exhaustive over subsets for
    /// up to 6 atoms, seeded sampling beyond.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut report = ValidationReport::default();
        let k = self.space.len();
        let labels = self.space.labels();

        // per-atom positivity
        let mut worst = (0.0_f64, None::<String>);
        for (a, p) in self.atom_projections.iter().enumerate() {
            let min_entry = p
                .rows()
                .into_iter()
                .flatten()
                .fold(f64::INFINITY, f64::min)
                .min(0.0);
            if -min_entry > worst.0 {
                worst = (-min_entry, Some(format!("atom {:?}", labels[a])));
            }
        }
        let mut c = CheckResult::deviation("positivity", "P_a >= 0", worst.0, tol);
        if let Some(w) = worst.1.filter(|_| !c.pass) {
            c = c.with_witness(w);
        }
        report.push(c);

        // per-atom idempotence
        let mut worst = (0.0_f64, None::<String>);
        for (a, p) in self.atom_projections.iter().enumerate() {
            let dev = p
                .compose(p)
                .expect("same context")
                .sub(p)
                .expect("same context")
                .max_abs_entry();
            if dev > worst.0 {
                worst = (dev, Some(format!("atom {:?}", labels[a])));
            }
        }
        let mut c = CheckResult::deviation("idempotence", "P_a P_a = P_a", worst.0, tol);
        if let Some(w) = worst.1.filter(|_| !c.pass) {
            c = c.with_witness(w);
        }
        report.push(c);

        // both-order annihilation of distinct atoms
        let mut worst = (0.0_f64, None::<String>);
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                let dev = self.atom_projections[a]
                    .compose(&self.atom_projections[b])
                    .expect("same context")
                    .max_abs_entry();
                if dev > worst.0 {
                    worst = (
                        dev,
                        Some(format!("P_{:?} P_{:?} != 0", labels[a], labels[b])),
                    );
                }
            }
        }
        let mut c = CheckResult::deviation(
            "annihilation",
            "P_a P_b = P_b P_a = 0 for a != b",
            worst.0,
            tol,
        );
        if let Some(w) = worst.1.filter(|_| !c.pass) {
            c = c.with_witness(w);
        }
        report.push(c);

        // P(empty) = 0 — holds by construction, asserted anyway
        let dev = self
            .evaluate(&self.space.empty_set())
            .expect("own space")
            .max_abs_entry();
        report.push(CheckResult::deviation(
            "empty_set",
            "P(empty) = 0",
            dev,
            tol,
        ));

        let pairs = self.subset_pairs();

        // finite additivity over disjoint pairs (σ-additivity at finite scale)
        let mut worst = (0.0_f64, None::<String>);
        for (d1, d2) in &pairs {
            if !d1.is_disjoint_from(d2) {
                continue;
            }
            let lhs = self
                .evaluate(&d1.union(d2).expect("same space"))
                .expect("own space");
            let rhs = self
                .evaluate(d1)
                .expect("own space")
                .add(&self.evaluate(d2).expect("own space"))
                .expect("same context");
            let dev = lhs.sub(&rhs).expect("same context").max_abs_entry();
            if dev > worst.0 {
                worst = (dev, Some(describe_pair(d1, d2, labels)));
            }
        }
        let mut c = CheckResult::deviation(
            "additivity",
            "P(D1 u D2) = P(D1) + P(D2) for disjoint D1, D2",
            worst.0,
            tol,
        );
        if let Some(w) = worst.1.filter(|_| !c.pass) {
            c = c.with_witness(w);
        }
        report.push(c);

        // multiplicativity over ordered subset pairs
        let mut worst = (0.0_f64, None::<String>);
        for (d1, d2) in &pairs {
            let lhs = self
                .evaluate(&d1.intersect(d2).expect("same space"))
                .expect("own space");
            let rhs = self
                .evaluate(d1)
                .expect("own space")
                .compose(&self.evaluate(d2).expect("own space"))
                .expect("same context");
            let dev = lhs.sub(&rhs).expect("same context").max_abs_entry();
            if dev > worst.0 {
                worst = (dev, Some(describe_pair(d1, d2, labels)));
            }
        }
        let mut c =
            CheckResult::deviation("multiplicativity", "P(D1 n D2) = P(D1) P(D2)", worst.0, tol);
        if let Some(w) = worst.1.filter(|_| !c.pass) {
            c = c.with_witness(w);
        }
        report.push(c);

        // every derived P(Delta) is again a positive projection
        let mut worst = (0.0_f64, None::<String>);
        for (d1, _) in &pairs {
            let p = self.evaluate(d1).expect("own space");
            let idem = p
                .compose(&p)
                .expect("same context")
                .sub(&p)
                .expect("same context")
                .max_abs_entry();
            let neg = p
                .rows()
                .into_iter()
                .flatten()
                .fold(f64::INFINITY, f64::min)
                .min(0.0);
            let dev = idem.max(-neg);
            if dev > worst.0 {
                worst = (dev, Some(describe_set(d1, labels)));
            }
        }
        let mut c = CheckResult::deviation(
            "derived_projections",
            "P(Delta) is a positive projection for every Delta",
            worst.0,
            tol,
        );
        if let Some(w) = worst.1.filter(|_| !c.pass) {
            c = c.with_witness(w);
        }
        report.push(c);

        report
    }

    /// Ordered subset pairs: exhaustive for small spaces, seeded sample
    /// beyond.
    fn subset_pairs(&self) -> Vec<(MeasurableSet, MeasurableSet)> {
        let k = self.space.len();
        if k <= EXHAUSTIVE_ATOMS {
            let subsets = self.space.all_subsets();
            let mut pairs = Vec::with_capacity(subsets.len() * subsets.len());
            for d1 in &subsets {
                for d2 in &subsets {
                    pairs.push((d1.clone(), d2.clone()));
                }
            }
            pairs
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5E75);
            (0..SAMPLED_PAIRS)
                .map(|_| {
                    (
                        random_subset(&self.space, &mut rng),
                        random_subset(&self.space, &mut rng),
                    )
                })
                .collect()
        }
    }

    /// Monotonicity on a nested pair: `0 <= P(D1) <= P(D2)` entrywise and
    /// the norm comparison `||P(D1)|| <= ||P(D2)||`.
    pub fn check_monotone(
        &self,
        smaller: &MeasurableSet,
        larger: &MeasurableSet,
        tol: f64,
    ) -> Result<MonotoneCheck> {
        if !smaller.is_subset_of(larger) {
            return Err(Error::NotNested);
        }
        let p1 = self.evaluate(smaller)?;
        let p2 = self.evaluate(larger)?;
        let entrywise = RegularOperator::zero(&self.context).leq_entrywise(&p1, tol)
            && p1.leq_entrywise(&p2, tol);
        let norm_smaller = p1.operator_norm()?;
        let norm_larger = p2.operator_norm()?;
        Ok(MonotoneCheck {
            entrywise,
            norm_smaller,
            norm_larger,
            norm_monotone: norm_smaller <= norm_larger + tol,
        })
    }

    /// The induced scalar measure `mu_{x,x*}(Delta) = <P(Delta) x, x*>`,
    /// stored atomwise.
    pub fn mu_pair(&self, x: &LatticeVector, xstar: &LatticeVector) -> Result<SignedMeasure> {
        if x.context().dim() != self.context.dim() || xstar.context().dim() != self.context.dim() {
            return Err(Error::DimMismatch {
                left: x.context().dim(),
                right: self.context.dim(),
            });
        }
        let values = self
            .atom_projections
            .iter()
            .map(|p| p.apply(x).and_then(|px| px.pair(xstar)))
            .collect::<Result<Vec<f64>>>()?;
        SignedMeasure::new(values, &self.space)
    }

    /// The total-variation estimate: `||mu_{x,x*}|| <= <P(X)|x|, |x*|>`,
    /// with equality for cone-signed `x, x*`, and the cruder bound
    /// `||P(X)|| ||x|| ||x*||'`.
    pub fn variation_bound_check(
        &self,
        x: &LatticeVector,
        xstar: &LatticeVector,
        tol: f64,
    ) -> Result<VariationBound> {
        let mu = self.mu_pair(x, xstar)?;
        let total_variation = mu.total_variation();
        let px_abs = self.full_projection().apply(&x.abs())?;
        let pairing_bound = px_abs.pair(&xstar.abs())?;
        let norm_bound = self.full_projection().operator_norm()? * x.norm() * xstar.dual_norm();
        let cone = |v: &LatticeVector| v.is_positive(tol) || v.scale(-1.0).is_positive(tol);
        let cone_signed = cone(x) && cone(xstar);
        let equality = (total_variation - pairing_bound).abs() <= tol;
        Ok(VariationBound {
            total_variation,
            pairing_bound,
            norm_bound,
            cone_signed,
            equality,
            bound_holds: total_variation <= pairing_bound + tol,
            norm_bound_holds: total_variation <= norm_bound + tol,
            equality_as_expected: !cone_signed || equality,
        })
    }

    /// Order infimum/supremum of `{P(Delta_i)}` against `P(Delta)`.
    ///
    /// Preconditions: `Delta` is contained in every `Delta_i` (inf) or
    /// contains every `Delta_i` (sup); the scalar hypothesis
    /// `mu_{x,x*}(Delta) = inf/sup_i mu_{x,x*}(Delta_i)` is probed over the
    /// grid's cone pairs, and a violation is reported, not raised.
    pub fn order_inf_sup_check(
        &self,
        set: &MeasurableSet,
        family: &[MeasurableSet],
        direction: OrderDirection,
        probe: &ProbeGrid,
        tol: f64,
    ) -> Result<OrderInfSupCheck> {
        if family.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for d in family {
            let nested = match direction {
                OrderDirection::Inf => set.is_subset_of(d),
                OrderDirection::Sup => d.is_subset_of(set),
            };
            if !nested {
                return Err(Error::NotNested);
            }
        }
        let mut hypothesis_ok = true;
        let mut witness = None;
        for (x, xstar) in probe.cone_pairs() {
            let mu = self.mu_pair(x, xstar)?;
            let target = mu.measure_of(set)?;
            let values = family
                .iter()
                .map(|d| mu.measure_of(d))
                .collect::<Result<Vec<f64>>>()?;
            let extreme = match direction {
                OrderDirection::Inf => values.iter().copied().fold(f64::INFINITY, f64::min),
                OrderDirection::Sup => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            };
            if (target - extreme).abs() > tol {
                hypothesis_ok = false;
                witness = Some(format!(
                    "scalar hypothesis fails: mu(Delta) = {target}, extreme over family = {extreme}"
                ));
                break;
            }
        }
        let members = family
            .iter()
            .map(|d| self.evaluate(d))
            .collect::<Result<Vec<_>>>()?;
        let operator = match direction {
            OrderDirection::Inf => RegularOperator::inf_family(&members)?,
            OrderDirection::Sup => RegularOperator::sup_family(&members)?,
        };
        let target = self.evaluate(set)?;
        let deviation = operator.sub(&target)?.max_abs_entry();
        Ok(OrderInfSupCheck {
            operator,
            hypothesis_ok,
            witness,
            deviation,
            matches: deviation <= tol,
            implication_holds: !hypothesis_ok || deviation <= tol,
        })
    }

    /// Deterministic random instance in the given style. Band style is
    /// always feasible; rank-one needs `atom_count <= dim`.
    pub fn random(
        ctx: &LatticeContext,
        atom_count: usize,
        seed: u64,
        style: GeneratorStyle,
    ) -> Result<Self> {
        let space = AtomSpace::new((0..atom_count).map(|a| format!("a{a}")).collect())?;
        Self::random_on_space(ctx, space, seed, style)
    }

    /// Like [`random`](Self::random) but reusing an existing atom space
    /// (the discrete topological model supplies labeled points).
    pub fn random_on_space(
        ctx: &LatticeContext,
        space: AtomSpace,
        seed: u64,
        style: GeneratorStyle,
    ) -> Result<Self> {
        let atom_count = space.len();
        let dim = ctx.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let projections = match style {
            GeneratorStyle::Band => {
                // each coordinate joins one atom's block or stays unassigned
                let mut blocks = vec![Vec::new(); atom_count];
                for coord in 0..dim {
                    if rng.random_range(0.0..1.0) < 0.25 {
                        continue;
                    }
                    let atom = rng.random_range(0..atom_count);
                    blocks[atom].push(coord);
                }
                blocks
                    .into_iter()
                    .map(|block| {
                        let mut diag = vec![0.0; dim];
                        for c in block {
                            diag[c] = 1.0;
                        }
                        RegularOperator::diagonal(ctx, &diag).expect("lengths match")
                    })
                    .collect::<Vec<_>>()
            }
            GeneratorStyle::Rank1 => {
                if atom_count > dim {
                    return Err(Error::InfeasibleSupports {
                        atoms: atom_count,
                        dim,
                    });
                }
                // disjoint v-supports: one core coordinate per atom, the
                // rest split between extra v-support and a free pool that
                // only the u's may touch
                let mut coords: Vec<usize> = (0..dim).collect();
                for i in (1..coords.len()).rev() {
                    let j = rng.random_range(0..=i);
                    coords.swap(i, j);
                }
                let mut v_support = vec![Vec::new(); atom_count];
                for (a, &c) in coords.iter().take(atom_count).enumerate() {
                    v_support[a].push(c);
                }
                let mut free = Vec::new();
                for &c in &coords[atom_count..] {
                    if rng.random_range(0.0..1.0) < 0.4 {
                        let atom = rng.random_range(0..atom_count);
                        v_support[atom].push(c);
                    } else {
                        free.push(c);
                    }
                }
                let mut projections = Vec::with_capacity(atom_count);
                for support in &v_support {
                    let mut v = vec![0.0; dim];
                    for &c in support {
                        v[c] = rng.random_range(0.5..1.5);
                    }
                    let mut u = vec![0.0; dim];
                    for &c in support {
                        u[c] = rng.random_range(0.5..1.5);
                    }
                    for &c in &free {
                        if rng.random_range(0.0..1.0) < 0.5 {
                            u[c] = rng.random_range(0.5..1.5);
                        }
                    }
                    let dot: f64 = v.iter().zip(&u).map(|(a, b)| a * b).sum();
                    u.iter_mut().for_each(|x| *x /= dot);
                    projections.push(RegularOperator::from_fn(ctx, |i, j| u[i] * v[j]));
                }
                projections
            }
        };
        PositiveSpectralMeasure::new(space, ctx.clone(), projections)
    }
}

fn random_subset(space: &AtomSpace, rng: &mut ChaCha8Rng) -> MeasurableSet {
    let indices: Vec<usize> = (0..space.len())
        .filter(|_| rng.random_range(0.0..1.0) < 0.5)
        .collect();
    space.set_of(&indices).expect("indices in range")
}

fn describe_set(set: &MeasurableSet, labels: &[String]) -> String {
    let names: Vec<&str> = set.members().map(|i| labels[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

fn describe_pair(d1: &MeasurableSet, d2: &MeasurableSet, labels: &[String]) -> String {
    format!(
        "({}, {})",
        describe_set(d1, labels),
        describe_set(d2, labels)
    )
}

/// Direction selector for [`PositiveSpectralMeasure::order_inf_sup_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderDirection {
    Inf,
    Sup,
}

/// Result of a monotonicity check on a nested pair of sets.
#[derive(Clone, Debug)]
pub struct MonotoneCheck {
    pub entrywise: bool,
    pub norm_smaller: f64,
    pub norm_larger: f64,
    pub norm_monotone: bool,
}

impl MonotoneCheck {
    pub fn holds(&self) -> bool {
        self.entrywise && self.norm_monotone
    }
}

/// Result of the total-variation estimate on one `(x, x*)` pair.
#[derive(Clone, Debug)]
pub struct VariationBound {
    pub total_variation: f64,
    /// `<P(X)|x|, |x*|>`.
    pub pairing_bound: f64,
    /// `||P(X)|| ||x|| ||x*||'` with the dual norm on the functional side.
    pub norm_bound: f64,
    pub cone_signed: bool,
    pub equality: bool,
    pub bound_holds: bool,
    pub norm_bound_holds: bool,
    /// Equality must occur whenever both vectors are cone-signed.
    pub equality_as_expected: bool,
}

impl VariationBound {
    pub fn holds(&self) -> bool {
        self.bound_holds && self.norm_bound_holds && self.equality_as_expected
    }
}

/// Result of an order-infimum/supremum comparison.
///
/// The scalar hypothesis is sufficient for the operator identity, not
/// necessary: a finite family can satisfy the identity entrywise while the
/// per-pair extreme over the family overshoots on mixed cone vectors. Both
/// facts are reported separately; `implication_holds` records that the
/// hypothesis, when satisfied, did force the identity.
#[derive(Clone, Debug)]
pub struct OrderInfSupCheck {
    /// The entrywise inf/sup of the evaluated family.
    pub operator: RegularOperator,
    /// Scalar hypothesis `mu(Delta) = inf/sup_i mu(Delta_i)` over the cone
    /// probe pairs.
    pub hypothesis_ok: bool,
    pub witness: Option<String>,
    pub deviation: f64,
    /// The operator identity `P(Delta) = inf/sup_i P(Delta_i)` holds.
    pub matches: bool,
    /// The scalar hypothesis implies the operator identity.
    pub implication_holds: bool,
}
