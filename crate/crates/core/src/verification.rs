//! Deterministic reports for the acceptance criteria.
//!
//! Each criterion draws its randomness from a ChaCha stream keyed by the
//! seed and the criterion id, so criteria can be run in isolation and give
//! the same numbers as in a full run. Reports carry no timings.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::characteristics::{enumerate, Characteristic, Parity};
use crate::error::{Error, Result};
use crate::locus::{classify_point, trace_zero_curve, verify_reducible_structure, ClassifyTolerances, PointKind};
use crate::siegel::{CVector, PeriodMatrix, SymplecticIntMatrix};
use crate::strata_nerve::{build_nerve, compute_hc, expected_counts, gysin_vanishing, kernel_report, GradedRanks};
use crate::surface_group::{
    dehn_is_trivial, figure2_verify, hall_witt_check, lemma34_absorption_step, lemma34_expansion_step, lemma34_identity,
    SurfaceWord,
};
use crate::theta::{check_product, heat_residual, thetanull, transformation_table};

/// Criteria computed by the library; determinism of the CLI report is
/// checked by running the binary twice.
pub const LIBRARY_CRITERIA: std::ops::RangeInclusive<u8> = 1..=13;

pub const ODD_NULL_SLACK: f64 = 1e-12;
pub const HEAT_STEP: f64 = 1e-4;
pub const HEAT_TOL: f64 = 1e-6;
pub const PRODUCT_TOL: f64 = 1e-10;
pub const GENERIC_POINTS: usize = 200;
pub const GENERIC_SLICES: usize = 256;
pub const BRANCH_TOL: f64 = 1e-6;
pub const REDUCIBLE_SLICES: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcceptanceReport {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

fn stream(seed: u64, id: u8) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(id));
    rng
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_point(rng: &mut ChaCha8Rng, g: usize, scale: f64) -> CVector {
    DVector::from_fn(g, |_, _| c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
}

pub fn criterion_name(id: u8) -> &'static str {
    match id {
        1 => "parity census",
        2 => "odd thetanulls vanish",
        3 => "heat equation",
        4 => "product formula",
        5 => "transformation law",
        6 => "reducible zero locus",
        7 => "generic simple vanishing",
        8 => "hall-witt identities",
        9 => "separating curve table",
        10 => "word problem",
        11 => "nerve cohomology",
        12 => "gysin vanishing",
        13 => "kernel rank growth",
        14 => "determinism",
        _ => "unknown",
    }
}

/// Runs one library criterion; a module error becomes a failed report.
pub fn run_criterion(id: u8, seed: u64) -> CriterionReport {
    let outcome = match id {
        1 => parity_census(),
        2 => odd_thetanulls(seed),
        3 => heat_equation(seed),
        4 => product_formula(seed),
        5 => transformation_law(seed),
        6 => reducible_locus(),
        7 => generic_simple_vanishing(),
        8 => hall_witt_suite(seed),
        9 => figure2_reproduction(),
        10 => word_problem(seed),
        11 => nerve_cohomology(),
        12 => gysin_forced_zeros(),
        13 => kernel_rank_growth(),
        _ => Err(Error::Domain(format!("criterion {id} is not computed by the library"))),
    };
    let (passed, details) = match outcome {
        Ok(v) => v,
        Err(e) => (false, json!({ "error": { "code": e.code(), "message": e.to_string() } })),
    };
    CriterionReport { id, name: criterion_name(id), passed, details }
}

pub fn run_all(seed: u64) -> AcceptanceReport {
    let criteria: Vec<CriterionReport> = LIBRARY_CRITERIA.map(|id| run_criterion(id, seed)).collect();
    AcceptanceReport { seed, passed: criteria.iter().all(|c| c.passed), criteria }
}

type Outcome = Result<(bool, Value)>;

fn parity_census() -> Outcome {
    let all = enumerate(2)?;
    let even = all.iter().filter(|d| d.parity() == Parity::Even).count();
    let odd = all.len() - even;
    Ok((even == 10 && odd == 6, json!({ "even": even, "odd": odd })))
}

fn odd_thetanulls(seed: u64) -> Outcome {
    let mut rng = stream(seed, 2);
    let odd: Vec<Characteristic> = enumerate(2)?.into_iter().filter(|d| d.parity() == Parity::Odd).collect();
    let mut max_abs: f64 = 0.0;
    let mut max_excess = f64::NEG_INFINITY;
    let mut samples = 0;
    for k in 0..10 {
        let omega = PeriodMatrix::random(&mut rng, 2, k < 5);
        for delta in &odd {
            let r = thetanull(delta, &omega, 1e-12)?;
            max_abs = max_abs.max(r.value.norm());
            max_excess = max_excess.max(r.value.norm() - r.truncation_bound - ODD_NULL_SLACK);
            samples += 1;
        }
    }
    Ok((max_excess <= 0.0, json!({ "samples": samples, "max_abs": max_abs, "max_excess_over_bound": max_excess })))
}

fn heat_equation(seed: u64) -> Outcome {
    let mut rng = stream(seed, 3);
    let all = enumerate(2)?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let omega = PeriodMatrix::random(&mut rng, 2, false);
        let z = random_point(&mut rng, 2, 0.5);
        let delta = &all[rng.gen_range(0..all.len())];
        worst = worst.max(heat_residual(delta, &omega, &z, HEAT_STEP, 1e-13)?.relative);
    }
    Ok((worst <= HEAT_TOL, json!({ "samples": 20, "step": HEAT_STEP, "max_relative_residual": worst, "tolerance": HEAT_TOL })))
}

fn product_formula(seed: u64) -> Outcome {
    let mut rng = stream(seed, 4);
    let all = enumerate(2)?;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let o1 = PeriodMatrix::random(&mut rng, 1, true);
        let o2 = PeriodMatrix::random(&mut rng, 1, true);
        let z = random_point(&mut rng, 2, 0.8);
        let delta = &all[rng.gen_range(0..all.len())];
        worst = worst.max(check_product(delta, &o1, &o2, &z, 1e-12)?);
    }
    Ok((worst <= PRODUCT_TOL, json!({ "samples": 10, "max_relative_residual": worst, "tolerance": PRODUCT_TOL })))
}

fn transformation_law(seed: u64) -> Outcome {
    let mut rng = stream(seed, 5);
    let omega = PeriodMatrix::random(&mut rng, 2, false);
    let mut generators = Vec::new();
    let mut passed = true;
    for (name, m) in SymplecticIntMatrix::genus2_generators() {
        let table = transformation_table(&m, &omega, 1e-12)?;
        let images: BTreeSet<Characteristic> = table.iter().map(|t| t.image.clone()).collect();
        let bijective = images.len() == 16;
        let parity_preserved = table.iter().all(|t| t.image.parity() == t.delta.parity());
        let max_spread = table.iter().map(|t| t.spread).fold(0.0, f64::max);
        let min_runner_up = table.iter().map(|t| t.runner_up_spread).fold(f64::INFINITY, f64::min);
        passed &= bijective && parity_preserved;
        let permutation: Vec<String> = table.iter().map(|t| format!("{} -> {}", t.delta, t.image)).collect();
        generators.push(json!({
            "generator": name,
            "bijective": bijective,
            "parity_preserved": parity_preserved,
            "max_match_spread": max_spread,
            "min_runner_up_spread": min_runner_up,
            "permutation": permutation,
        }));
    }
    Ok((passed, json!({ "generators": generators })))
}

fn reducible_locus() -> Outcome {
    let t1 = PeriodMatrix::diagonal(&[c(0.0, 1.0)])?;
    let t2 = PeriodMatrix::diagonal(&[c(0.0, 2.0)])?;
    let report = verify_reducible_structure(&Characteristic::all_halves(2), &t1, &t2, REDUCIBLE_SLICES)?;
    let passed = report.branch_residual <= BRANCH_TOL && report.node_count == 1 && report.node_order == 2;
    Ok((passed, serde_json::to_value(&report).map_err(|e| Error::Domain(e.to_string()))?))
}

/// The generic period matrix with `Ω₁₂ = 0.1 + 0.2i`.
pub fn generic_period_matrix() -> PeriodMatrix {
    PeriodMatrix::new(DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.1, 0.2), c(0.1, 0.2), c(0.0, 2.0)]))
        .expect("positive definite")
}

fn generic_simple_vanishing() -> Outcome {
    let omega = generic_period_matrix();
    let delta = Characteristic::all_halves(2);
    let cloud = trace_zero_curve(&delta, &omega, GENERIC_SLICES)?;
    let tol = ClassifyTolerances::default();
    let mut smooth = 0;
    let mut min_grad = f64::INFINITY;
    let mut min_full_grad = f64::INFINITY;
    let mut max_multiplicity = 0;
    for p in cloud.iter().take(GENERIC_POINTS) {
        let class = classify_point(&delta, &omega, &p.z, &tol)?;
        if class.kind == PointKind::Smooth && class.full_grad_norm > 1e-8 {
            smooth += 1;
        }
        min_grad = min_grad.min(class.grad_norm);
        min_full_grad = min_full_grad.min(class.full_grad_norm);
        max_multiplicity = max_multiplicity.max(p.multiplicity);
    }
    let checked = cloud.len().min(GENERIC_POINTS);
    let passed = checked == GENERIC_POINTS && smooth == GENERIC_POINTS;
    Ok((
        passed,
        json!({
            "traced_points": cloud.len(),
            "checked_points": checked,
            "smooth_points": smooth,
            "min_grad_norm": min_grad,
            "min_full_grad_norm": min_full_grad,
            "max_multiplicity": max_multiplicity,
        }),
    ))
}

fn hall_witt_suite(seed: u64) -> Outcome {
    let mut rng = stream(seed, 8);
    let mut failures = 0;
    for _ in 0..100 {
        let x = SurfaceWord::random(&mut rng, 8);
        let y = SurfaceWord::random(&mut rng, 8);
        let z = SurfaceWord::random(&mut rng, 8);
        if !hall_witt_check(&x, &y, &z) {
            failures += 1;
        }
    }
    let relation = lemma34_identity();
    let expansion = lemma34_expansion_step();
    let absorption = lemma34_absorption_step();
    Ok((
        failures == 0 && relation && expansion && absorption,
        json!({
            "triples": 100,
            "failures": failures,
            "four_curve_relation": relation,
            "expansion_step": expansion,
            "absorption_step": absorption,
        }),
    ))
}

fn figure2_reproduction() -> Outcome {
    let report = figure2_verify()?;
    let passed = report.pairwise_distinct && report.relation_holds && report.rows.iter().all(|r| r.matches && r.invariants_hold);
    Ok((passed, serde_json::to_value(&report).map_err(|e| Error::Domain(e.to_string()))?))
}

fn word_problem(seed: u64) -> Outcome {
    let mut rng = stream(seed, 10);
    let relator = SurfaceWord::relator();
    let mut trivial_ok = dehn_is_trivial(&relator);
    for _ in 0..20 {
        let g = SurfaceWord::random(&mut rng, 12);
        trivial_ok &= dehn_is_trivial(&relator.conjugate(&g.inverse()));
    }
    let mut nontrivial_ok = !dehn_is_trivial(&SurfaceWord::a1());
    let mut drawn = 0;
    while drawn < 20 {
        let w = SurfaceWord::random(&mut rng, 12);
        if w.abelianize() == [0; 4] {
            continue;
        }
        nontrivial_ok &= !dehn_is_trivial(&w);
        drawn += 1;
    }
    Ok((
        trivial_ok && nontrivial_ok,
        json!({ "relator_and_conjugates_trivial": trivial_ok, "nontrivial_words_rejected": nontrivial_ok, "conjugates": 20, "nontrivial_words": 20 }),
    ))
}

fn nerve_cohomology() -> Outcome {
    let mut cases = 0;
    let mut passed = true;
    for n_beta in 0..=10 {
        for radius in 0..=4 {
            let hc = compute_hc(&build_nerve(n_beta, radius)?);
            let (comps, pairs) = expected_counts(n_beta, radius);
            let support_ok = hc.support().iter().all(|&k| k == 5 || k == 6);
            passed &= support_ok && hc.get(5) == pairs && hc.get(6) == comps;
            cases += 1;
        }
    }
    Ok((passed, json!({ "cases": cases, "max_n_beta": 10, "max_radius": 4 })))
}

fn gysin_forced_zeros() -> Outcome {
    let required: BTreeSet<i64> = (4..=8).collect();
    let mut cases = 0;
    let mut passed = true;
    for r5 in 0..=3 {
        for r6 in 0..=3 {
            let hc = GradedRanks::from_pairs([(5, r5), (6, r6)]);
            passed &= required.is_subset(&gysin_vanishing(&hc, 3, 8));
            cases += 1;
        }
    }
    let reference_case = gysin_vanishing(&GradedRanks::from_pairs([(5, 1875), (6, 150)]), 3, 8);
    passed &= reference_case == required;
    Ok((passed, json!({ "cases": cases, "forced_zero_degrees": reference_case })))
}

fn kernel_rank_growth() -> Outcome {
    let mut ranks = Vec::new();
    let mut passed = true;
    for n in 0..=20 {
        let r = kernel_report(n);
        passed &= r.kernel_rank == n && r.difference_rank == n && r.differences_in_kernel && r.differences_span_kernel;
        ranks.push(r.kernel_rank);
    }
    Ok((passed, json!({ "kernel_ranks": ranks })))
}
