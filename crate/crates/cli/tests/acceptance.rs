//! Acceptance suite: every exit criterion as an integration test, one
//! printed pass/fail line per criterion. Tolerances are pinned in code.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latspec::lch::{
    monotone_class_extend, retrieval_formulas_check, riesz_to_measure, spectral_regularity_check,
    C0Representation, DiscreteLch,
};
use latspec::{
    AtomSpace, BorelFunction, GeneratedRepresentation, GeneratorStyle, LatticeContext,
    LatticeVector, NormKind, PositiveRepresentation, PositiveSpectralMeasure, ProbeGrid,
    RegularOperator, SignedMeasure,
};
use latspec_cli::config::VerificationConfig;
use latspec_cli::suites::build_corpus;

const TOL: f64 = 1e-9;

fn criterion(number: u32, name: &str, pass: bool) {
    println!(
        "criterion {number:02} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number:02} ({name}) failed");
}

fn ctx(kind: NormKind, dim: usize) -> LatticeContext {
    LatticeContext::unweighted(dim, kind).unwrap()
}

/// dims 2..=6, atoms 1..=6, l1 and l-infinity, both generator styles.
fn norm_corpus(seeds: u64) -> Vec<PositiveSpectralMeasure> {
    let mut corpus = Vec::new();
    for dim in 2..=6 {
        for atoms in 1..=6 {
            for kind in [NormKind::L1, NormKind::Linf] {
                for style in [GeneratorStyle::Band, GeneratorStyle::Rank1] {
                    let atoms = match style {
                        GeneratorStyle::Rank1 => atoms.min(dim),
                        GeneratorStyle::Band => atoms,
                    };
                    for seed in 0..seeds {
                        let c = ctx(kind, dim);
                        let mixed = seed * 1_000_003
                            + dim as u64 * 101
                            + atoms as u64 * 13
                            + u64::from(kind == NormKind::L1);
                        corpus.push(
                            PositiveSpectralMeasure::random(&c, atoms, mixed, style).unwrap(),
                        );
                    }
                }
            }
        }
    }
    corpus
}

fn rank1_u13_instance() -> PositiveSpectralMeasure {
    // u = (1,3), v = (1,0): P_a = [[1,0],[3,0]] with ||P(X)||_inf = 3
    let c = ctx(NormKind::Linf, 2);
    let space = AtomSpace::from_labels(&["a"]).unwrap();
    let p = RegularOperator::from_rows(vec![vec![1.0, 0.0], vec![3.0, 0.0]], &c).unwrap();
    PositiveSpectralMeasure::new(space, c, vec![p]).unwrap()
}

#[test]
fn criterion_01_norm_identity_suite() {
    let started = Instant::now();
    let mut corpus = norm_corpus(2);
    corpus.push(rank1_u13_instance());
    assert!(corpus.len() >= 200, "corpus has {} instances", corpus.len());

    let mut nontrivial_norm = 0usize;
    let mut pass = true;
    for measure in &corpus {
        let rep = GeneratedRepresentation::from_valid(measure.clone());
        let ni = rep.norm_identity_check(TOL).unwrap();
        if !ni.pass {
            pass = false;
        }
        if ni.full_projection_norm > 1.0 + TOL {
            nontrivial_norm += 1;
        }
    }
    let u13 = GeneratedRepresentation::from_valid(rank1_u13_instance())
        .norm_identity_check(TOL)
        .unwrap();
    pass &= (u13.rep_norm - 3.0).abs() <= TOL && (u13.full_projection_norm - 3.0).abs() <= TOL;
    pass &= nontrivial_norm >= 20;
    pass &= started.elapsed() <= Duration::from_secs(30);
    criterion(1, "norm identity over >= 200 measures", pass);
    assert!(
        nontrivial_norm >= 20,
        "only {nontrivial_norm} instances with ||P(X)|| > 1"
    );
}

#[test]
fn criterion_02_definition_suite() {
    let corpus = build_corpus(&VerificationConfig::default()).unwrap();
    let mut pass = corpus
        .spectral
        .iter()
        .all(|instance| instance.measure.validate(TOL).pass());

    // one-sided annihilation: rejected, witness names the reversed product
    let c = ctx(NormKind::Linf, 2);
    let space = AtomSpace::from_labels(&["a", "b"]).unwrap();
    let pa = RegularOperator::from_rows(vec![vec![1.0, 0.0], vec![0.0, 0.0]], &c).unwrap();
    let pb = RegularOperator::from_rows(vec![vec![0.0, 0.0], vec![1.0, 1.0]], &c).unwrap();
    let one_sided = PositiveSpectralMeasure::new(space.clone(), c.clone(), vec![pa, pb]).unwrap();
    let report = one_sided.validate(TOL);
    let witness_ok = report
        .failures()
        .find(|check| check.name == "annihilation")
        .and_then(|check| check.witness.as_deref())
        .is_some_and(|w| w.contains("P_\"b\" P_\"a\""));
    pass &= !report.pass() && witness_ok;

    // non-idempotent perturbation: rejected with the offending atom named
    let perturbed = RegularOperator::from_rows(vec![vec![1.01, 0.0], vec![0.0, 0.0]], &c).unwrap();
    let bad =
        PositiveSpectralMeasure::new(space, c.clone(), vec![perturbed, RegularOperator::zero(&c)])
            .unwrap();
    let report = bad.validate(TOL);
    let witness_ok = report
        .failures()
        .find(|check| check.name == "idempotence")
        .and_then(|check| check.witness.as_deref())
        .is_some_and(|w| w.contains("a"));
    pass &= !report.pass() && witness_ok;

    criterion(2, "definition suite with rejected counterexamples", pass);
}

#[test]
fn criterion_03_total_variation_suite() {
    let corpus = norm_corpus(1);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut pairs = 0usize;
    let mut pass = true;
    for measure in corpus.iter().take(60) {
        let c = measure.context().clone();
        for k in 0..20 {
            let cone_signed = k >= 10;
            let (x, xstar) = if cone_signed {
                let sx = if k % 2 == 0 { 1.0 } else { -1.0 };
                let sy = if k % 3 == 0 { 1.0 } else { -1.0 };
                (
                    random_vec(&mut rng, &c, 0.0, 2.0).scale(sx),
                    random_vec(&mut rng, &c, 0.0, 2.0).scale(sy),
                )
            } else {
                (
                    random_vec(&mut rng, &c, -2.0, 2.0),
                    random_vec(&mut rng, &c, -2.0, 2.0),
                )
            };
            let vb = measure.variation_bound_check(&x, &xstar, TOL).unwrap();
            pairs += 1;
            pass &= vb.bound_holds && vb.norm_bound_holds;
            if cone_signed {
                pass &= vb.equality;
            }
        }
    }
    pass &= pairs >= 1000;

    // the strict-inequality witness: totvar 0 < bound 2, exactly
    let c = ctx(NormKind::Linf, 2);
    let space = AtomSpace::from_labels(&["a"]).unwrap();
    let p = RegularOperator::from_rows(vec![vec![1.0, 1.0], vec![0.0, 0.0]], &c).unwrap();
    let m = PositiveSpectralMeasure::new(space, c.clone(), vec![p]).unwrap();
    let x = LatticeVector::new(vec![1.0, -1.0], &c).unwrap();
    let xstar = LatticeVector::new(vec![1.0, 0.0], &c).unwrap();
    let vb = m.variation_bound_check(&x, &xstar, TOL).unwrap();
    pass &= vb.total_variation == 0.0 && vb.pairing_bound == 2.0 && !vb.equality;

    criterion(3, "total variation bounds over >= 1000 pairs", pass);
}

fn random_vec(rng: &mut ChaCha8Rng, c: &LatticeContext, lo: f64, hi: f64) -> LatticeVector {
    LatticeVector::new((0..c.dim()).map(|_| rng.random_range(lo..hi)).collect(), c).unwrap()
}

/// All set partitions of `{0..n}`.
fn partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn recurse(i: usize, n: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(i);
            recurse(i + 1, n, current, out);
            current[b].pop();
        }
        current.push(vec![i]);
        recurse(i + 1, n, current, out);
        current.pop();
    }
    let mut out = Vec::new();
    recurse(0, n, &mut Vec::new(), &mut out);
    out
}

fn partition_oracle(mu: &SignedMeasure) -> f64 {
    partitions(mu.space().len())
        .into_iter()
        .map(|p| {
            p.iter()
                .map(|block| block.iter().map(|&a| mu.atom_value(a)).sum::<f64>().abs())
                .sum()
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_04_weak_characterization_suite() {
    let corpus = norm_corpus(1);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut pass = true;
    for (i, measure) in corpus.iter().take(40).enumerate() {
        let rep = GeneratedRepresentation::from_valid(measure.clone());
        let probe = ProbeGrid::new(measure.context(), i as u64);
        let space = measure.space().clone();
        for _ in 0..4 {
            let phi = BorelFunction::new(
                (0..space.len())
                    .map(|_| rng.random_range(-2.0..2.0))
                    .collect(),
                &space,
            )
            .unwrap();
            let w = rep.weak_characterization_check(&phi, &probe, TOL).unwrap();
            pass &= w.pass;
        }
        // induced scalar measures match the exhaustive partition oracle
        // (1e-12 slack: equal-valued partitions may round one ulp apart)
        if space.len() <= 6 {
            let x = random_vec(&mut rng, measure.context(), -2.0, 2.0);
            let xstar = random_vec(&mut rng, measure.context(), -2.0, 2.0);
            let mu = measure.mu_pair(&x, &xstar).unwrap();
            pass &= (mu.total_variation() - partition_oracle(&mu)).abs() <= 1e-12;
        }
    }
    for atoms in 1..=6 {
        let labels: Vec<String> = (0..atoms).map(|i| format!("t{i}")).collect();
        let space = AtomSpace::new(labels).unwrap();
        for _ in 0..20 {
            let mu = SignedMeasure::new(
                (0..atoms).map(|_| rng.random_range(-3.0..3.0)).collect(),
                &space,
            )
            .unwrap();
            pass &= (mu.total_variation() - partition_oracle(&mu)).abs() <= 1e-12;
        }
    }
    criterion(4, "weak characterization and partition oracle", pass);
}

#[test]
fn criterion_05_commutant_subalgebra_suite() {
    let corpus = norm_corpus(1);
    let mut pass = true;
    for (i, measure) in corpus.iter().take(60).enumerate() {
        let rep = GeneratedRepresentation::from_valid(measure.clone());
        let ce = rep.commutant_equality_check(i as u64, TOL).unwrap();
        let sc = rep.generated_subalgebra_check(i as u64, TOL).unwrap();
        pass &= ce.equal && sc.equal;
    }
    // the partial diagonal pair has commutant dimension 3
    let c = ctx(NormKind::Linf, 3);
    let space = AtomSpace::from_labels(&["a", "b"]).unwrap();
    let m = PositiveSpectralMeasure::new(
        space,
        c.clone(),
        vec![
            RegularOperator::diagonal(&c, &[1.0, 0.0, 0.0]).unwrap(),
            RegularOperator::diagonal(&c, &[0.0, 1.0, 0.0]).unwrap(),
        ],
    )
    .unwrap();
    let ce = GeneratedRepresentation::from_valid(m)
        .commutant_equality_check(1, TOL)
        .unwrap();
    pass &= ce.equal && ce.dims == [3, 3, 3];
    criterion(5, "commutant and subalgebra equalities", pass);
}

#[test]
fn criterion_06_riesz_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut pass = true;
    let mut count = 0usize;
    for i in 0..110 {
        let cutoff = 1 + i % 6;
        let has_tail = i % 3 == 0;
        let model = DiscreteLch::new(cutoff, has_tail).unwrap();
        let weights: Vec<f64> = (0..cutoff).map(|_| rng.random_range(-3.0..3.0)).collect();
        let tail = if has_tail {
            rng.random_range(-1.0..1.0)
        } else {
            0.0
        };
        let r = riesz_to_measure(&model, &weights, tail).unwrap();
        let expected: f64 = weights.iter().map(|w| w.abs()).sum();
        pass &= r.functional_norm == expected && r.isometry_holds;
        count += 1;
    }
    pass &= count >= 100;
    let model = DiscreteLch::new(3, false).unwrap();
    let frozen = riesz_to_measure(&model, &[1.0, -2.0, 0.5], 0.0).unwrap();
    pass &= frozen.total_variation == 3.5 && frozen.functional_norm == 3.5;
    criterion(6, "Riesz functional norm equals total variation", pass);
}

#[test]
fn criterion_07_regularity_suite() {
    let mut pass = true;
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for i in 0..24u64 {
        let cutoff = 3 + (i as usize) % 3;
        let model = DiscreteLch::new(cutoff, true).unwrap();
        let dim = cutoff + 2;
        let c = ctx(NormKind::Linf, dim);
        let style = if i % 2 == 0 {
            GeneratorStyle::Band
        } else {
            GeneratorStyle::Rank1
        };
        let measure =
            PositiveSpectralMeasure::random_on_space(&c, model.atom_space(), i, style).unwrap();
        let probe = ProbeGrid::new(&c, i);
        let delta_indices: Vec<usize> = (0..model.atom_space().len())
            .filter(|_| rng.random_range(0.0..1.0) < 0.5)
            .collect();
        let delta = model.atom_space().set_of(&delta_indices).unwrap();
        let r = spectral_regularity_check(&model, &measure, &delta, &probe, i, TOL).unwrap();
        let tail_free = measure
            .atom_projection(model.tail_index().unwrap())
            .max_abs_entry()
            == 0.0;
        pass &= r.matches_tail_predicate && (r.regular == tail_free);
        // the order identities hold exactly whenever the measure is regular
        pass &= r.outer_deviation <= TOL;
        if r.regular {
            pass &= r.inner_deviation <= TOL;
        }
    }
    criterion(7, "regularity verdict equals the tail predicate", pass);
}

#[test]
fn criterion_08_retrieval_suite() {
    let mut pass = true;
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for (case, cutoff) in [3usize, 5, 8, 10].into_iter().enumerate() {
        let model = DiscreteLch::new(cutoff, true).unwrap();
        let dim = cutoff + 2;
        let c = ctx(NormKind::Linf, dim);
        for seed in 0..3u64 {
            let style = if seed % 2 == 0 {
                GeneratorStyle::Band
            } else {
                GeneratorStyle::Rank1
            };
            let raw = PositiveSpectralMeasure::random_on_space(
                &c,
                model.atom_space(),
                seed + case as u64 * 101,
                style,
            )
            .unwrap();
            // regularize: drop any tail mass
            let mut projections = raw.atom_projections().to_vec();
            projections[model.tail_index().unwrap()] = RegularOperator::zero(&c);
            let measure =
                PositiveSpectralMeasure::new(model.atom_space(), c.clone(), projections).unwrap();
            let rep = C0Representation::restriction_of(&model, &measure).unwrap();
            let probe = ProbeGrid::new(&c, seed);
            let open_indices: Vec<usize> = (0..cutoff)
                .filter(|_| rng.random_range(0.0..1.0) < 0.5)
                .collect();
            let compact_indices: Vec<usize> = (0..cutoff)
                .filter(|_| rng.random_range(0.0..1.0) < 0.5)
                .collect();
            let open = model.set_of_points(&open_indices).unwrap();
            let compact = model.set_of_points(&compact_indices).unwrap();
            let r = retrieval_formulas_check(
                &model, &rep, &measure, &open, &compact, &probe, seed, TOL,
            )
            .unwrap();
            pass &= r.pass && r.truncation_monotone && r.steps_to_converge <= cutoff;
        }
    }
    criterion(8, "retrieval formulas on models up to 10 points", pass);
}

#[test]
fn criterion_09_roundtrip_suite() {
    let mut pass = true;
    for seed in 0..100u64 {
        let cutoff = 3 + (seed as usize) % 3;
        let model = DiscreteLch::new(cutoff, true).unwrap();
        let dim = cutoff + 2;
        let c = ctx(NormKind::Linf, dim);
        let style = if seed % 2 == 0 {
            GeneratorStyle::Band
        } else {
            GeneratorStyle::Rank1
        };
        let raw =
            PositiveSpectralMeasure::random_on_space(&c, model.atom_space(), seed, style).unwrap();
        let mut projections = raw.atom_projections().to_vec();
        projections[model.tail_index().unwrap()] = RegularOperator::zero(&c);
        let measure =
            PositiveSpectralMeasure::new(model.atom_space(), c.clone(), projections).unwrap();

        // generate -> restrict -> extract is the identity
        let rep = C0Representation::restriction_of(&model, &measure).unwrap();
        let extracted = rep.extract_regular_measure(TOL).unwrap();
        pass &= extracted
            .atom_projections()
            .iter()
            .zip(measure.atom_projections())
            .all(|(p, q)| p.approx_eq(q, 0.0));

        // restrict -> extract -> generate is the identity on representations
        let regenerated = C0Representation::restriction_of(&model, &extracted).unwrap();
        pass &= regenerated
            .point_images()
            .iter()
            .zip(rep.point_images())
            .all(|(p, q)| p.approx_eq(q, 0.0));

        // plain measurable-space round trip
        let restricted = PositiveRepresentation::from_measure(&measure);
        let back = restricted.extract_spectral_measure(TOL).unwrap();
        pass &= back
            .atom_projections()
            .iter()
            .zip(measure.atom_projections())
            .all(|(p, q)| p.approx_eq(q, 0.0));

        // the monotone-class extension agrees with pi_P on 64 functions
        let ext = monotone_class_extend(&model, &rep, seed, TOL).unwrap();
        pass &= ext.pass;
    }
    criterion(9, "round trips are exact over 100 seeds", pass);
}

#[test]
fn criterion_10_full_default_verify_run() {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/default_config.json");
    let started = Instant::now();
    let out = std::process::Command::new(PathBuf::from(env!("CARGO_BIN_EXE_latspec")))
        .args(["verify", config.to_str().unwrap()])
        .output()
        .expect("run latspec verify");
    let elapsed = started.elapsed();
    let pass = out.status.code() == Some(0) && elapsed <= Duration::from_secs(120);
    criterion(10, "full default verify run under two minutes", pass);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}
