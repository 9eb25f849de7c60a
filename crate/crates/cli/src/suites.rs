//! The verification suites: deterministic corpus generation plus one
//! runner per suite, each emitting report entries.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latspec::lch::{
    automatic_continuity_check, measure_regularity_check, monotone_class_extend,
    retrieval_formulas_check, riesz_to_measure, spectral_regularity_check, C0Representation,
    DiscreteLch,
};
use latspec::spectral::OrderDirection;
use latspec::{
    AtomSpace, BorelFunction, GeneratedRepresentation, GeneratorStyle, LatticeContext,
    LatticeVector, MeasurableSet, NormKind, PositiveRepresentation, PositiveSpectralMeasure,
    ProbeGrid, RegularOperator,
};

use crate::config::{Suite, VerificationConfig};
use crate::report::{ReportEntry, VerificationReport};

/// A generated measure on a plain atom space.
pub struct SpectralInstance {
    pub id: String,
    pub seed: u64,
    pub measure: PositiveSpectralMeasure,
}

/// A generated measure living on a discrete-model Borel algebra.
pub struct LchInstance {
    pub id: String,
    pub seed: u64,
    pub model: DiscreteLch,
    pub measure: PositiveSpectralMeasure,
}

pub struct Corpus {
    pub spectral: Vec<SpectralInstance>,
    pub lch: Vec<LchInstance>,
    pub compact: Vec<LchInstance>,
}

fn mix(seed: u64, index: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .rotate_left(23)
}

fn fnv1a(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h
}

/// Deterministic corpus from the configuration: measures cycle through the
/// (style, dim, atom count, norm kind) combinations; discrete-model
/// instances cycle through cutoffs with and without a tail.
pub fn build_corpus(config: &VerificationConfig) -> Result<Corpus, String> {
    let styles = [GeneratorStyle::Band, GeneratorStyle::Rank1];
    let mut combos = Vec::new();
    for &style in &styles {
        for &dim in &config.dims {
            for &atoms in &config.atom_counts {
                for &kind in &config.norm_kinds {
                    combos.push((style, dim, atoms, kind));
                }
            }
        }
    }
    let mut spectral = Vec::with_capacity(config.corpus_size);
    for i in 0..config.corpus_size {
        let (style, dim, atoms, kind) = combos[i % combos.len()];
        // rank-one needs disjoint supports, so clamp the atom count
        let atoms = match style {
            GeneratorStyle::Rank1 => atoms.min(dim),
            GeneratorStyle::Band => atoms,
        };
        let ctx = LatticeContext::unweighted(dim, kind).map_err(|e| e.to_string())?;
        let seed = mix(config.seed, i as u64);
        let measure =
            PositiveSpectralMeasure::random(&ctx, atoms, seed, style).map_err(|e| e.to_string())?;
        let style_name = match style {
            GeneratorStyle::Band => "band",
            GeneratorStyle::Rank1 => "rank1",
        };
        let kind_name = match kind {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::Linf => "linf",
            NormKind::Wl1 => "wl1",
            NormKind::Wlinf => "wlinf",
        };
        spectral.push(SpectralInstance {
            id: format!("{style_name}-d{dim}-a{atoms}-{kind_name}-s{i:04}"),
            seed,
            measure,
        });
    }

    let lch_count = (config.corpus_size / 5).clamp(8, 40);
    let mut lch = Vec::with_capacity(lch_count);
    for i in 0..lch_count {
        let cutoff = 3 + i % 4;
        let model = DiscreteLch::new(cutoff, true).map_err(|e| e.to_string())?;
        let dim = cutoff + 2;
        let ctx = LatticeContext::unweighted(dim, NormKind::Linf).map_err(|e| e.to_string())?;
        let style = styles[i % 2];
        let seed = mix(config.seed, 0x10_000 + i as u64);
        let measure =
            PositiveSpectralMeasure::random_on_space(&ctx, model.atom_space(), seed, style)
                .map_err(|e| e.to_string())?;
        let style_name = match style {
            GeneratorStyle::Band => "band",
            GeneratorStyle::Rank1 => "rank1",
        };
        lch.push(LchInstance {
            id: format!("lch-n{cutoff}-{style_name}-s{i:03}"),
            seed,
            model,
            measure,
        });
    }

    let compact_count = (config.corpus_size / 10).clamp(6, 20);
    let mut compact = Vec::with_capacity(compact_count);
    for i in 0..compact_count {
        let cutoff = 2 + i % 4;
        let model = DiscreteLch::new(cutoff, false).map_err(|e| e.to_string())?;
        let dim = cutoff + 1;
        let ctx = LatticeContext::unweighted(dim, NormKind::Linf).map_err(|e| e.to_string())?;
        let style = styles[i % 2];
        let seed = mix(config.seed, 0x20_000 + i as u64);
        let measure =
            PositiveSpectralMeasure::random_on_space(&ctx, model.atom_space(), seed, style)
                .map_err(|e| e.to_string())?;
        let style_name = match style {
            GeneratorStyle::Band => "band",
            GeneratorStyle::Rank1 => "rank1",
        };
        compact.push(LchInstance {
            id: format!("compact-n{cutoff}-{style_name}-s{i:03}"),
            seed,
            model,
            measure,
        });
    }

    Ok(Corpus {
        spectral,
        lch,
        compact,
    })
}

/// Zero out the tail projection, turning any model measure into a regular
/// one (the annihilation and idempotence constraints survive).
fn regularized(instance: &LchInstance) -> PositiveSpectralMeasure {
    let mut projections = instance.measure.atom_projections().to_vec();
    if let Some(t) = instance.model.tail_index() {
        projections[t] = RegularOperator::zero(instance.measure.context());
    }
    PositiveSpectralMeasure::new(
        instance.measure.space().clone(),
        instance.measure.context().clone(),
        projections,
    )
    .expect("shape unchanged")
}

struct EntrySink {
    suite: &'static str,
    entries: Vec<ReportEntry>,
}

impl EntrySink {
    fn new(suite: Suite) -> Self {
        EntrySink {
            suite: suite.name(),
            entries: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        instance: &str,
        name: &str,
        identity: &str,
        pass: bool,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        witness: Option<String>,
        started: Instant,
    ) {
        self.entries.push(ReportEntry {
            suite: self.suite.to_string(),
            instance: instance.to_string(),
            name: name.to_string(),
            identity: identity.to_string(),
            pass,
            lhs,
            rhs,
            tolerance,
            witness,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        });
    }
}

/// Run the configured suites over a deterministic corpus.
pub fn run_suites(config: &VerificationConfig) -> Result<VerificationReport, String> {
    config.validate()?;
    let corpus = build_corpus(config)?;
    let mut entries = Vec::new();
    for &suite in &config.suites {
        let sink = match suite {
            Suite::Definition => definition_suite(config, &corpus),
            Suite::Norms => norms_suite(config, &corpus),
            Suite::Monotone => monotone_suite(config, &corpus),
            Suite::Commutant => commutant_suite(config, &corpus),
            Suite::Subalgebra => subalgebra_suite(config, &corpus),
            Suite::Riesz => riesz_suite(config),
            Suite::Regularity => regularity_suite(config, &corpus),
            Suite::Retrieval => retrieval_suite(config, &corpus),
            Suite::Roundtrip => roundtrip_suite(config, &corpus),
            Suite::Continuity => continuity_suite(config, &corpus),
        }
        .map_err(|e| format!("suite {} failed to run: {e}", suite.name()))?;
        entries.extend(sink.entries);
    }
    Ok(VerificationReport::assemble(
        config.seed,
        config.tolerance,
        entries,
    ))
}

type SuiteResult = Result<EntrySink, latspec::Error>;

fn definition_suite(config: &VerificationConfig, corpus: &Corpus) -> SuiteResult {
    let tol = config.tolerance;
    let mut sink = EntrySink::new(Suite::Definition);
    for instance in &corpus.spectral {
        let t0 = Instant::now();
        let report = instance.measure.validate(tol);
        for check in &report.checks {
            sink.push(
                &instance.id,
                &check.name,
                &check.identity,
                check.pass,
                check.lhs,
                check.rhs,
                check.tolerance,
                check.witness.clone(),
                t0,
            );
        }
    }

    // the one-sided annihilation counterexample must be rejected with the
    // right witness
    let t0 = Instant::now();
    let ctx = LatticeContext::unweighted(2, NormKind::Linf).expect("valid context");
    let space = AtomSpace::from_labels(&["a", "b"]).expect("distinct labels");
    let pa =
        RegularOperator::from_rows(vec![vec![1.0, 0.0], vec![0.0, 0.0]], &ctx).expect("square");
    let pb =
        RegularOperator::from_rows(vec![vec![0.0, 0.0], vec![1.0, 1.0]], &ctx).expect("square");
    let counterexample =
        PositiveSpectralMeasure::new(space.clone(), ctx.clone(), vec![pa, pb]).expect("shape");
    let report = counterexample.validate(tol);
    let annihilation_failure = report
        .failures()
        .find(|c| c.name == "annihilation")
        .map(|c| c.witness.clone().unwrap_or_default());
    sink.push(
        "counterexample-one-sided",
        "rejects_one_sided_annihilation",
        "P_a P_b = 0 must hold in both orders",
        !report.pass() && annihilation_failure.is_some(),
        f64::from(u8::from(!report.pass())),
        1.0,
        tol,
        annihilation_failure,
        t0,
    );

    // a non-idempotent perturbation of a valid band projection
    let t0 = Instant::now();
    let perturbed =
        RegularOperator::from_rows(vec![vec![1.01, 0.0], vec![0.0, 0.0]], &ctx).expect("square");
    let zero = RegularOperator::zero(&ctx);
    let bad = PositiveSpectralMeasure::new(space, ctx, vec![perturbed, zero]).expect("shape");
    let report = bad.validate(tol);
    let idem_failure = report
        .failures()
        .find(|c| c.name == "idempotence")
        .map(|c| c.witness.clone().unwrap_or_default());
    sink.push(
        "counterexample-non-idempotent",
        "rejects_non_idempotent",
        "P_a P_a = P_a",
        !report.pass() && idem_failure.is_some(),
        f64::from(u8::from(!report.pass())),
        1.0,
        tol,
        idem_failure,
        t0,
    );
    Ok(sink)
}

fn norms_suite(config: &VerificationConfig, corpus: &Corpus) -> SuiteResult {
    let tol = config.tolerance;
    let mut sink = EntrySink::new(Suite::Norms);
    for instance in &corpus.spectral {
        let rep = GeneratedRepresentation::from_valid(instance.measure.clone());
        let t0 = Instant::now();
        let ni = rep.norm_identity_check(tol)?;
        sink.push(
            &instance.id,
            "rep_norm_identity",
            "||pi_P|| = ||P(X)||",
            (ni.rep_norm - ni.full_projection_norm).abs() <= tol,
            ni.rep_norm,
            ni.full_projection_norm,
            tol,
            None,
            t0,
        );
        let t0 = Instant::now();
        sink.push(
            &instance.id,
            "regular_norm_identity",
            "||pi_P||_r = ||pi_P(1)||",
            (ni.regular_rep_norm - ni.full_projection_norm).abs() <= tol,
            ni.regular_rep_norm,
            ni.full_projection_norm,
            tol,
            None,
            t0,
        );
        let t0 = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(mix(instance.seed, 1));
        let space = instance.measure.space().clone();
        let functions: Vec<BorelFunction> = (0..16)
            .map(|_| {
                let values = (0..space.len())
                    .map(|_| rng.random_range(-2.0..2.0))
                    .collect();
                BorelFunction::new(values, &space).expect("length matches")
            })
            .collect();
        let bc = rep.boundedness_check(&functions, tol)?;
        sink.push(
            &instance.id,
            "automatic_boundedness",
            "||pi(phi)|| <= ||pi(1)|| ||phi|| (and the split bound)",
            bc.pass,
            bc.sharp_excess.max(bc.split_excess),
            0.0,
            tol,
            None,
            t0,
        );
    }
    Ok(sink)
}

fn random_vector(rng: &mut ChaCha8Rng, ctx: &LatticeContext, lo: f64, hi: f64) -> LatticeVector {
    LatticeVector::new(
        (0..ctx.dim()).map(|_| rng.random_range(lo..hi)).collect(),
        ctx,
    )
    .expect("length matches dim")
}

fn random_subset(rng: &mut ChaCha8Rng, space: &AtomSpace) -> MeasurableSet {
    let indices: Vec<usize> = (0..space.len())
        .filter(|_| rng.random_range(0.0..1.0) < 0.5)
        .collect();
    space.set_of(&indices).expect("indices in range")
}

fn monotone_suite(config: &VerificationConfig, corpus: &Corpus) -> SuiteResult {
    let tol = config.tolerance;
    let mut sink = EntrySink::new(Suite::Monotone);
    for instance in &corpus.spectral {
        let measure = &instance.measure;
        let ctx = measure.context().clone();
        let space = measure.space().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(mix(instance.seed, 2));
        let probe = ProbeGrid::new(&ctx, mix(instance.seed, 3));

        // nested monotonicity
        let t0 = Instant::now();
        let larger = random_subset(&mut rng, &space);
        let smaller_indices: Vec<usize> = larger
            .members()
            .filter(|_| rng.random_range(0.0..1.0) < 0.5)
            .collect();
        let smaller = space.set_of(&smaller_indices).expect("subset of larger");
        let mc = measure.check_monotone(&smaller, &larger, tol)?;
        sink.push(
            &instance.id,
            "monotonicity",
            "D1 in D2 implies 0 <= P(D1) <= P(D2) and ||P(D1)|| <= ||P(D2)||",
            mc.holds(),
            mc.norm_smaller,
            mc.norm_larger,
            tol,
            None,
            t0,
        );

        // total-variation bounds on random and cone-signed pairs
        let t0 = Instant::now();
        let mut worst_excess = f64::NEG_INFINITY;
        let mut cone_equality = true;
        for k in 0..10 {
            let (x, xstar) = if k < 6 {
                (
                    random_vector(&mut rng, &ctx, -2.0, 2.0),
                    random_vector(&mut rng, &ctx, -2.0, 2.0),
                )
            } else {
                // cone-signed combinations, including negated cones
                let sx = if k % 2 == 0 { 1.0 } else { -1.0 };
                let sy = if k % 3 == 0 { 1.0 } else { -1.0 };
                (
                    random_vector(&mut rng, &ctx, 0.0, 2.0).scale(sx),
                    random_vector(&mut rng, &ctx, 0.0, 2.0).scale(sy),
                )
            };
            let vb = measure.variation_bound_check(&x, &xstar, tol)?;
            worst_excess = worst_excess
                .max(vb.total_variation - vb.pairing_bound)
                .max(vb.total_variation - vb.norm_bound);
            if !vb.equality_as_expected {
                cone_equality = false;
            }
        }
        sink.push(
            &instance.id,
            "variation_bound",
            "||mu_{x,x*}|| <= <P(X)|x|, |x*|> <= ||P(X)|| ||x|| ||x*||'",
            worst_excess <= tol,
            worst_excess,
            0.0,
            tol,
            None,
            t0,
        );
        let t0 = Instant::now();
        sink.push(
            &instance.id,
            "variation_equality_cone",
            "equality in the variation bound for cone-signed pairs",
            cone_equality,
            f64::from(u8::from(cone_equality)),
            1.0,
            tol,
            None,
            t0,
        );

        // weak characterization of pi_P
        let t0 = Instant::now();
        let rep = GeneratedRepresentation::from_valid(measure.clone());
        let mut max_gap = 0.0_f64;
        for _ in 0..4 {
            let values: Vec<f64> = (0..space.len())
                .map(|_| rng.random_range(-2.0..2.0))
                .collect();
            let phi = BorelFunction::new(values, &space).expect("length matches");
            let w = rep.weak_characterization_check(&phi, &probe, tol)?;
            max_gap = max_gap.max(w.max_gap);
        }
        sink.push(
            &instance.id,
            "weak_characterization",
            "<pi_P(phi) x, x*> = integral of phi d mu_{x,x*}",
            max_gap <= tol,
            max_gap,
            0.0,
            tol,
            None,
            t0,
        );

        // monotone convergence along an exhaustion of the space
        let t0 = Instant::now();
        let mut chain = Vec::new();
        for upto in 1..=space.len() {
            let set = space
                .set_of(&(0..upto).collect::<Vec<_>>())
                .expect("in range");
            chain.push(set.char_fn());
        }
        let mc = rep.monotone_convergence_check(&chain, &probe, tol)?;
        sink.push(
            &instance.id,
            "monotone_convergence",
            "phi_n up to phi implies pi_P(phi_n) up to pi_P(phi), WOT limit included",
            mc.pass,
            mc.sup_deviation.max(mc.wot_final_gap),
            0.0,
            tol,
            None,
            t0,
        );

        // order inf/sup: the singleton family is exact, and the scalar
        // hypothesis must never hold without the operator identity
        let t0 = Instant::now();
        let delta = random_subset(&mut rng, &space);
        let trivially = measure.order_inf_sup_check(
            &delta,
            std::slice::from_ref(&delta),
            OrderDirection::Inf,
            &probe,
            tol,
        )?;
        let extra = delta
            .union(&random_subset(&mut rng, &space))
            .expect("same space");
        let family = vec![delta.clone(), extra];
        let inf_check =
            measure.order_inf_sup_check(&delta, &family, OrderDirection::Inf, &probe, tol)?;
        sink.push(
            &instance.id,
            "order_inf_sup",
            "mu-level hypothesis implies P(D) = inf P(D_i) in the operator order",
            trivially.matches && trivially.hypothesis_ok && inf_check.implication_holds,
            inf_check.deviation,
            0.0,
            tol,
            inf_check.witness.clone(),
            t0,
        );
    }
    Ok(sink)
}

fn commutant_suite(config: &VerificationConfig, corpus: &Corpus) -> SuiteResult {
    let tol = config.tolerance;
    let mut sink = EntrySink::new(Suite::Commutant);
    for instance in &corpus.spectral {
        let rep = GeneratedRepresentation::from_valid(instance.measure.clone());
        let t0 = Instant::now();
        let ce = rep.commutant_equality_check(mix(instance.seed, 4), tol)?;
        sink.push(
            &instance.id,
            "commutant_equality",
            "{P(Omega)}' = {pi_P(simple)}' = {pi_P(measurable)}'",
            ce.equal,
            ce.dims[0] as f64,
            ce.dims[2] as f64,
            tol,
            (!ce.equal).then(|| format!("dims {:?}", ce.dims)),
            t0,
        );
    }
    Ok(sink)
}

fn subalgebra_suite(config: &VerificationConfig, corpus: &Corpus) -> SuiteResult {
    let tol = config.tolerance;
    let mut sink = EntrySink::new(Suite::Subalgebra);
    for instance in &corpus.spectral {
        let rep = GeneratedRepresentation::from_valid(instance.measure.clone());
        let t0 = Instant::now();
        let sc = rep.generated_subalgebra_check(mix(instance.seed, 5), tol)?;
        sink.push(
            &instance.id,
            "subalgebra_equality",
            "the subalgebras generated by P(Omega), pi_P(simple), pi_P(measurable) coincide",
            sc.equal,
            sc.dims[0] as f64,
            sc.dims[2] as f64,
            tol,
            (!sc.equal).then(|| format!("dims {:?}", sc.dims)),
            t0,
        );
    }
    Ok(sink)
}

fn riesz_suite(config: &VerificationConfig) -> SuiteResult {
    let mut sink = EntrySink::new(Suite::Riesz);

    // the frozen example: weights (1, -2, 0.5) represent a functional of
    // norm 3.5 = total variation
    let t0 = Instant::now();
    let model = DiscreteLch::new(3, false)?;
    let frozen = riesz_to_measure(&model, &[1.0, -2.0, 0.5], 0.0)?;
    sink.push(
        "frozen-1-neg2-half",
        "isometry",
        "functional norm over C_0 = total variation",
        frozen.isometry_holds && (frozen.total_variation - 3.5).abs() <= 1e-12,
        frozen.functional_norm,
        frozen.total_variation,
        1e-12,
        None,
        t0,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(mix(config.seed, 6));
    for i in 0..100 {
        let t0 = Instant::now();
        let cutoff = 1 + i % 6;
        let has_tail = i % 3 == 0;
        let model = DiscreteLch::new(cutoff, has_tail)?;
        let weights: Vec<f64> = (0..cutoff).map(|_| rng.random_range(-3.0..3.0)).collect();
        let tail_weight = if has_tail {
            rng.random_range(-1.0..1.0)
        } else {
            0.0
        };
        let r = riesz_to_measure(&model, &weights, tail_weight)?;
        sink.push(
            &format!("riesz-{i:03}"),
            "isometry",
            "functional norm over C_0 = l1 norm of the point weights",
            r.isometry_holds,
            r.functional_norm,
            r.point_part,
            1e-12,
            None,
            t0,
        );
        let t0 = Instant::now();
        let expected_tv = r.point_part + tail_weight.abs();
        sink.push(
            &format!("riesz-{i:03}"),
            "total_variation",
            "total variation = l1 norm of all atom weights",
            (r.total_variation - expected_tv).abs() <= 1e-12,
            r.total_variation,
            expected_tv,
            1e-12,
            None,
            t0,
        );
    }
    Ok(sink)
}

fn regularity_suite(config: &VerificationConfig, corpus: &Corpus) -> SuiteResult {
    let tol = config.tolerance;
    let mut sink = EntrySink::new(Suite::Regularity);
    for instance in &corpus.lch {
        let model = &instance.model;
        let measure = &instance.measure;
        let space = model.atom_space();
        let probe = ProbeGrid::new(measure.context(), mix(instance.seed, 7));
        let mut rng = ChaCha8Rng::seed_from_u64(mix(instance.seed, 8));

        // tail-containing set: the full space
        let t0 = Instant::now();
        let full = space.full_set();
        let r = spectral_regularity_check(model, measure, &full, &probe, instance.seed, tol)?;
        sink.push(
            &instance.id,
            "verdict_matches_tail_predicate",
            "P is regular iff P(tail) = 0",
            r.matches_tail_predicate,
            f64::from(u8::from(r.regular)),
            f64::from(u8::from(r.tail_norm <= tol)),
            tol,
            r.witness.clone(),
            t0,
        );
        let t0 = Instant::now();
        sink.push(
            &instance.id,
            "outer_identity",
            "P(D) = inf {P(V) : V open, D in V}",
            r.outer_deviation <= tol,
            r.outer_deviation,
            0.0,
            tol,
            None,
            t0,
        );
        let t0 = Instant::now();
        // on a tail-containing set the inner identity holds exactly for
        // regular measures and must break by the tail mass otherwise
        let inner_ok = if r.regular {
            r.inner_deviation <= tol
        } else {
            r.inner_deviation > tol
        };
        sink.push(
            &instance.id,
            "inner_identity_dichotomy",
            "P(D) = sup {P(K) : K compact in D} iff no tail mass in D",
            inner_ok,
            r.inner_deviation,
            r.tail_norm,
            tol,
            None,
            t0,
        );

        // tail-free sets are exact regardless of regularity
        let t0 = Instant::now();
        let free_indices: Vec<usize> = (0..model.cutoff())
            .filter(|_| rng.random_range(0.0..1.0) < 0.6)
            .collect();
        let free = space.set_of(&free_indices).expect("points in range");
        let rf = spectral_regularity_check(model, measure, &free, &probe, instance.seed, tol)?;
        sink.push(
            &instance.id,
            "tail_free_identities",
            "both order identities are exact on tail-free sets",
            rf.outer_deviation <= tol && rf.inner_deviation <= tol,
            rf.outer_deviation.max(rf.inner_deviation),
            0.0,
            tol,
            None,
            t0,
        );

        // measure-level gap equals the tail mass for a cone pair
        let t0 = Instant::now();
        let x = random_vector(&mut rng, measure.context(), 0.0, 2.0);
        let xstar = random_vector(&mut rng, measure.context(), 0.0, 2.0);
        let mu = measure.mu_pair(&x, &xstar)?;
        let mr = measure_regularity_check(model, &mu, &full, instance.seed, tol)?;
        let tail_mass = mu.atom_value(model.tail_index().expect("tail model"));
        sink.push(
            &instance.id,
            "measure_gap_is_tail_mass",
            "the inner-regularity defect equals mu(tail)",
            (mr.gap - tail_mass).abs() <= tol,
            mr.gap,
            tail_mass,
            tol,
            None,
            t0,
        );
    }
    Ok(sink)
}

fn retrieval_suite(config: &VerificationConfig, corpus: &Corpus) -> SuiteResult {
    let tol = config.tolerance;
    let mut sink = EntrySink::new(Suite::Retrieval);
    for instance in &corpus.lch {
        let model = &instance.model;
        let measure = regularized(instance);
        let rep = C0Representation::restriction_of(model, &measure)?;
        let probe = ProbeGrid::new(measure.context(), mix(instance.seed, 9));
        let mut rng = ChaCha8Rng::seed_from_u64(mix(instance.seed, 10));

        let t0 = Instant::now();
        let open_indices: Vec<usize> = (0..model.cutoff())
            .filter(|_| rng.random_range(0.0..1.0) < 0.5)
            .collect();
        let open = model.set_of_points(&open_indices).expect("points in range");
        let compact_indices: Vec<usize> = (0..model.cutoff())
            .filter(|_| rng.random_range(0.0..1.0) < 0.5)
            .collect();
        let compact = model
            .set_of_points(&compact_indices)
            .expect("points in range");
        let r = retrieval_formulas_check(
            model,
            &rep,
            &measure,
            &open,
            &compact,
            &probe,
            mix(instance.seed, 11),
            tol,
        )?;
        sink.push(
            &instance.id,
            "retrieval_formulas",
            "P(V) = sup pi(phi), P(K) = inf pi(phi), P(X) = sup over 0<=phi<=1",
            r.pass,
            r.open_sup_deviation
                .max(r.compact_inf_deviation)
                .max(r.full_sup_deviation),
            0.0,
            tol,
            None,
            t0,
        );
        let t0 = Instant::now();
        sink.push(
            &instance.id,
            "truncation_chain",
            "the compact exhaustion chain increases to P(X) within N steps",
            r.truncation_monotone && r.steps_to_converge <= model.cutoff(),
            r.steps_to_converge as f64,
            model.cutoff() as f64,
            tol,
            None,
            t0,
        );
    }
    Ok(sink)
}

fn roundtrip_suite(config: &VerificationConfig, corpus: &Corpus) -> SuiteResult {
    let tol = config.tolerance;
    let mut sink = EntrySink::new(Suite::Roundtrip);
    for instance in &corpus.spectral {
        let t0 = Instant::now();
        let restricted = PositiveRepresentation::from_measure(&instance.measure);
        let pass = match restricted.extract_spectral_measure(tol) {
            Ok(extracted) => extracted
                .atom_projections()
                .iter()
                .zip(instance.measure.atom_projections())
                .all(|(p, q)| p.approx_eq(q, 0.0)),
            Err(_) => false,
        };
        sink.push(
            &instance.id,
            "extract_restrict_identity",
            "extracting the measure back from its atom images is the identity",
            pass,
            f64::from(u8::from(pass)),
            1.0,
            tol,
            None,
            t0,
        );
    }
    for instance in &corpus.lch {
        let model = &instance.model;
        let measure = regularized(instance);

        // generate -> restrict -> extract
        let t0 = Instant::now();
        let rep = C0Representation::restriction_of(model, &measure)?;
        let pass = match rep.extract_regular_measure(tol) {
            Ok(extracted) => extracted
                .atom_projections()
                .iter()
                .zip(measure.atom_projections())
                .all(|(p, q)| p.approx_eq(q, 0.0)),
            Err(_) => false,
        };
        sink.push(
            &instance.id,
            "c0_roundtrip_identity",
            "generate, restrict to C_0, extract: the identity on regular measures",
            pass,
            f64::from(u8::from(pass)),
            1.0,
            tol,
            None,
            t0,
        );

        // restrict -> extract -> generate: the regenerated representation
        // restricts to the original point images
        let t0 = Instant::now();
        let pass = match rep.extract_regular_measure(tol) {
            Ok(extracted) => {
                let regenerated = C0Representation::restriction_of(model, &extracted)?;
                regenerated
                    .point_images()
                    .iter()
                    .zip(rep.point_images())
                    .all(|(p, q)| p.approx_eq(q, 0.0))
            }
            Err(_) => false,
        };
        sink.push(
            &instance.id,
            "extract_generate_identity",
            "extract then regenerate: the identity on C_0 representations",
            pass,
            f64::from(u8::from(pass)),
            1.0,
            tol,
            None,
            t0,
        );

        // monotone-class extension agrees with the generated representation
        let t0 = Instant::now();
        let ext = monotone_class_extend(model, &rep, mix(instance.seed, 12), tol)?;
        sink.push(
            &instance.id,
            "monotone_class_extension",
            "the sup-formula extension is multiplicative and equals pi_P",
            ext.pass,
            ext.multiplicativity_deviation.max(ext.agreement_deviation),
            0.0,
            tol,
            (!ext.pass).then(|| format!("tail image norm {}", ext.tail_image_norm)),
            t0,
        );
    }
    let _ = config;
    Ok(sink)
}

fn continuity_suite(config: &VerificationConfig, corpus: &Corpus) -> SuiteResult {
    let tol = config.tolerance;
    let mut sink = EntrySink::new(Suite::Continuity);
    for instance in &corpus.compact {
        let model = &instance.model;
        let rep = C0Representation::restriction_of(model, &instance.measure)?;
        let t0 = Instant::now();
        let r = automatic_continuity_check(model, &rep, mix(instance.seed, 13), tol)?;
        sink.push(
            &instance.id,
            "automatic_continuity",
            "||pi(phi)|| <= ||pi(1)|| (||phi+|| + ||phi-||), ||pi|| <= 2 ||pi(1)||",
            r.split_excess <= tol && r.factor2_excess <= tol,
            r.split_excess.max(r.factor2_excess),
            0.0,
            tol,
            None,
            t0,
        );
        let t0 = Instant::now();
        sink.push(
            &instance.id,
            "norm_equalities",
            "||pi|| = ||pi||_r = ||pi(1)||",
            (r.rep_norm - r.unit_image_norm).abs() <= tol
                && (r.regular_rep_norm - r.unit_image_norm).abs() <= tol,
            r.rep_norm,
            r.unit_image_norm,
            tol,
            None,
            t0,
        );
    }
    let _ = config;
    Ok(sink)
}

/// Deterministic per-instance hash used by callers that need stable
/// sub-seeds for ids.
pub fn instance_hash(id: &str) -> u64 {
    fnv1a(id)
}
