//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test -p eja-core --test acceptance -- --nocapture` to see
//! them). Criterion 10 (CLI byte determinism) lives in the CLI crate's
//! acceptance test, next to the binary it drives.

use eja_core::automorphism::WITNESS_TOL;
use eja_core::campaigns;
use eja_core::hypercomplex::HMatrix;
use eja_core::jordan::JordanAlgebra;
use eja_core::metric::{self, h2r_angle_atom};
use eja_core::par;

const SPIN_FAMILY: [&str; 7] = [
    "spin(2)", "spin(3)", "spin(4)", "spin(5)", "spin(6)", "spin(7)", "spin(8)",
];
const MATRIX_FAMILY: [&str; 9] = [
    "H(2,R)", "H(3,R)", "H(4,R)", "H(2,C)", "H(3,C)", "H(4,C)", "H(2,H)", "H(3,H)", "H(4,H)",
];
const SUMS: [&str; 2] = ["sum(H(2,R),H(2,R))", "sum(spin(3),H(3,C))"];

fn all_simple() -> Vec<&'static str> {
    SPIN_FAMILY
        .iter()
        .chain(MATRIX_FAMILY.iter())
        .chain(["H(3,O)"].iter())
        .copied()
        .collect()
}

fn all_families() -> Vec<&'static str> {
    all_simple().into_iter().chain(SUMS).collect()
}

fn report(criterion: u32, description: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion:>2} [{}] {description} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {description} ({detail})");
}

/// 1. The precomputed structure tensor of every matrix-family algebra up to
/// H(4,H) and H(3,O) matches dense hypercomplex matrix arithmetic on all
/// basis pairs to 1e-12.
#[test]
fn criterion_01_structure_tensor_oracle() {
    let mut worst = 0.0f64;
    for text in MATRIX_FAMILY.iter().chain(["H(2,O)", "H(3,O)"].iter()) {
        let alg = JordanAlgebra::parse(text).unwrap();
        let basis: Vec<HMatrix> = (0..alg.dim).map(|k| alg.basis_matrix(k).unwrap()).collect();
        let weights: Vec<f64> = basis.iter().map(|b| b.frob_dot(b)).collect();
        for i in 0..alg.dim {
            for j in 0..alg.dim {
                // the oracle multiplies dense hypercomplex matrices; the
                // tensor came from symbolic basis products
                let dense = basis[i].jordan(&basis[j]);
                let mut reconstructed = HMatrix::zeros(dense.level, dense.n);
                for k in 0..alg.dim {
                    let coeff = dense.frob_dot(&basis[k]) / weights[k];
                    worst = worst.max((coeff - alg.structure_constant(i, j, k)).abs());
                    reconstructed = reconstructed.add(&basis[k].scale(coeff));
                }
                // completeness: the dense product lies in the basis span
                worst = worst.max(dense.sub(&reconstructed).frob_norm());
            }
        }
    }
    report(
        1,
        "structure tensors match the dense matrix oracle",
        worst <= 1e-12,
        &format!("max deviation {worst:.3e}"),
    );
}

/// 2. Jordan identity residual ≤ 1e-10 over 1000 random pairs in each
/// family algebra and two direct sums.
#[test]
fn criterion_02_jordan_identity() {
    let mut worst = 0.0f64;
    for text in all_families() {
        let alg = JordanAlgebra::parse(text).unwrap();
        let residuals = par::try_map_trials(1000, |i| {
            let mut rng = par::rng_for_trial(0xAC02, i);
            let a = alg.random_element(&mut rng);
            let b = alg.random_element(&mut rng);
            let aa = alg.square(&a)?;
            let lhs = alg.product(&a, &alg.product(&aa, &b)?)?;
            let rhs = alg.product(&aa, &alg.product(&a, &b)?)?;
            Ok(alg.norm(&alg.sub(&lhs, &rhs)))
        })
        .unwrap();
        worst = worst.max(residuals.into_iter().fold(0.0f64, f64::max));
    }
    report(
        2,
        "Jordan identity on 1000 random pairs per algebra",
        worst <= 1e-10,
        &format!("max residual {worst:.3e}"),
    );
}

/// 3. Midpoints: 500 random + 100 forced-orthogonal pairs per simple
/// algebra, halving and between defects ≤ 1e-9; the closed form validated
/// against a brute-force grid search over the H₂(ℝ) angle family.
#[test]
fn criterion_03_midpoint_reproduction() {
    // closed form against brute force first
    let alg = JordanAlgebra::parse("H(2,R)").unwrap();
    let grid_step = 1e-4;
    let mut brute_worst = 0.0f64;
    for (s, t) in [(0.15, 0.95), (0.0, 1.3), (-0.5, 0.4)] {
        let p = h2r_angle_atom(&alg, s).unwrap();
        let q = h2r_angle_atom(&alg, t).unwrap();
        let d_pq = metric::distance_unchecked(&alg, &p, &q).value();
        let mut best = (f64::INFINITY, 0.0f64);
        let mut r = 0.0;
        while r < std::f64::consts::PI {
            let e = h2r_angle_atom(&alg, r).unwrap();
            let defect = (metric::distance_unchecked(&alg, &p, &e).value() - d_pq / 2.0).abs()
                + (metric::distance_unchecked(&alg, &e, &q).value() - d_pq / 2.0).abs();
            if defect < best.0 {
                best = (defect, r);
            }
            r += grid_step;
        }
        let expected = (s + t) / 2.0;
        let wrapped = (best.1 - expected).rem_euclid(std::f64::consts::PI);
        let angle_err = wrapped.min(std::f64::consts::PI - wrapped);
        brute_worst = brute_worst.max(angle_err);
        // the closed-form midpoint agrees with the best grid atom
        let mut rng = par::rng_for_trial(0xAC03, 0);
        let e_closed = metric::midpoint(&alg, &p, &q, &mut rng).unwrap();
        let e_grid = h2r_angle_atom(&alg, best.1).unwrap();
        brute_worst = brute_worst.max(alg.norm(&alg.sub(&e_closed, &e_grid)));
    }
    let brute_pass = brute_worst <= 2.0 * grid_step;

    let mut worst_halving = 0.0f64;
    let mut worst_between = 0.0f64;
    let mut worst_atom = 0.0f64;
    for text in all_simple() {
        let rep = campaigns::midpoint_campaign(text, 500, 100, 0, 0xAC03, 1e-9).unwrap();
        worst_halving = worst_halving.max(rep.max_halving_defect);
        worst_between = worst_between.max(rep.max_between_defect);
        worst_atom = worst_atom.max(rep.max_atom_residual);
    }
    report(
        3,
        "midpoints halve distances on 600 pairs per simple algebra",
        brute_pass && worst_halving <= 1e-9 && worst_between <= 1e-9 && worst_atom <= 1e-8,
        &format!(
            "grid deviation {brute_worst:.3e}, max halving {worst_halving:.3e}, max between {worst_between:.3e}"
        ),
    );
}

/// 4. trace(e_s ∘ e_t) = cos²(s − t) on a 100×100 grid, to 1e-12.
#[test]
fn criterion_04_squared_cosine_identity() {
    let alg = JordanAlgebra::parse("H(2,R)").unwrap();
    let mut worst = 0.0f64;
    for a in 0..100 {
        for b in 0..100 {
            let s = a as f64 * std::f64::consts::PI / 100.0;
            let t = b as f64 * std::f64::consts::PI / 100.0;
            let es = h2r_angle_atom(&alg, s).unwrap();
            let et = h2r_angle_atom(&alg, t).unwrap();
            let tr = alg.trace(&alg.product(&es, &et).unwrap());
            worst = worst.max((tr - (s - t).cos().powi(2)).abs());
        }
    }
    report(
        4,
        "trace(e_s∘e_t) equals the squared cosine on a 100x100 grid",
        worst <= 1e-12,
        &format!("max deviation {worst:.3e}"),
    );
}

/// 5. Transition invariance under 100 derivation-exponential automorphisms
/// per algebra (including H(3,O)), 100 atom pairs each, to 1e-8.
#[test]
fn criterion_05_transition_invariance() {
    let mut worst_defect = 0.0f64;
    let mut worst_cert = 0.0f64;
    for text in all_families() {
        let rep = campaigns::invariance_campaign(text, 100, 100, 0xAC05, 1e-8).unwrap();
        worst_defect = worst_defect.max(rep.max_invariance_defect);
        worst_cert = worst_cert.max(rep.max_cert_residual);
    }
    report(
        5,
        "transition probabilities invariant under derivation exponentials",
        worst_defect <= 1e-8 && worst_cert <= 1e-8,
        &format!("max defect {worst_defect:.3e}, max certification {worst_cert:.3e}"),
    );
}

const WITNESS_ALGEBRAS: [&str; 7] = [
    "spin(3)", "spin(8)", "H(2,R)", "H(3,R)", "H(3,C)", "H(4,C)", "H(3,H)",
];

/// 6. Homogeneity witnesses on 100 planted quadruples per supported algebra:
/// zero failures, mapping residual ≤ 1e-8.
#[test]
fn criterion_06_homogeneity_witnesses() {
    let mut failures = 0u64;
    let mut worst = 0.0f64;
    for text in WITNESS_ALGEBRAS {
        let rep = campaigns::homogeneity_campaign(text, 100, 0xAC06, false).unwrap();
        failures += rep.failures;
        worst = worst.max(rep.max_mapping_residual);
    }
    report(
        6,
        "planted homogeneity witnesses found on every supported algebra",
        failures == 0 && worst <= WITNESS_TOL,
        &format!("failures {failures}, max residual {worst:.3e}"),
    );
}

/// 7. Bit-symmetry witnesses on 100 orthogonal problems per supported
/// algebra; the reducible demo finds zero witnesses in 10⁴ bounded searches
/// and block preservation holds throughout.
#[test]
fn criterion_07_bit_symmetry_and_reducible_demo() {
    let mut failures = 0u64;
    let mut worst = 0.0f64;
    for text in WITNESS_ALGEBRAS {
        let rep = campaigns::bit_symmetry_campaign(text, 100, 0xAC07, false).unwrap();
        failures += rep.failures;
        worst = worst.max(rep.max_mapping_residual);
    }
    let demo = campaigns::reducible_demo("H(2,R)", "H(2,R)", 10_000, 0xAC07).unwrap();
    let demo_ok = demo.report.witnesses_found == 0
        && demo.report.max_block_leak <= 1e-9
        && demo.report.automorphisms_fixing_p > 0
        && demo.report.transition_q1.abs() < 1e-12
        && demo.report.transition_q2.abs() < 1e-12;
    report(
        7,
        "bit symmetry holds on simple algebras and fails across summands",
        failures == 0 && worst <= WITNESS_TOL && demo_ok,
        &format!(
            "failures {failures}, max residual {worst:.3e}, demo witnesses {}, block leak {:.3e}",
            demo.report.witnesses_found, demo.report.max_block_leak
        ),
    );
}

/// 8. Greedy orthogonal rank equals 2 on spin factors and n on H(n, ·).
#[test]
fn criterion_08_orthogonal_rank() {
    let mut pass = true;
    let mut detail = String::new();
    for text in all_simple().into_iter().chain(["H(2,O)"]) {
        let alg = JordanAlgebra::parse(text).unwrap();
        let rep = campaigns::rank_check(text, 0xAC08).unwrap();
        if rep.orthogonal_rank != alg.rank {
            pass = false;
            detail = format!("{text}: got {} want {}", rep.orthogonal_rank, alg.rank);
        }
    }
    if detail.is_empty() {
        detail = "all families match".into();
    }
    report(8, "maximal orthogonal atom chains match the rank", pass, &detail);
}

/// 9. Bioctonion layer: exact zero divisor and Freudenthal unit identities,
/// 1000 certified points, exact state normalization, metric triangles,
/// embedded-subplane agreement ≤ 1e-10, embedded midpoint defect ≤ 1e-6.
#[test]
fn criterion_09_bioctonion_layer() {
    let rep = campaigns::bioct_campaign(1000, 0xAC09, 50_000).unwrap();
    let pass = rep.zero_divisor_exact
        && rep.freudenthal_unit_identities_exact
        && rep.max_point_norm_deviation <= 1e-10
        && rep.max_freudenthal_residual <= 1e-9
        && rep.state_normalization_exact
        && rep.metric_triangle_min_slack >= -1e-9
        && rep.embedded_transition_max_error <= 1e-10
        && rep.formal_reality.conclusive
        && rep.midpoint_embedded_max_defect <= 1e-6;
    let general: Vec<String> = rep
        .midpoint_general
        .iter()
        .map(|r| format!("{:.1e}", r.defect))
        .collect();
    report(
        9,
        "bioctonionic plane certifications and embedded subplane agreement",
        pass,
        &format!(
            "norm dev {:.2e}, freudenthal {:.2e}, embed {:.2e}, midpoint(embedded) {:.2e}, \
             midpoint(general, reported) [{}]",
            rep.max_point_norm_deviation,
            rep.max_freudenthal_residual,
            rep.embedded_transition_max_error,
            rep.midpoint_embedded_max_defect,
            general.join(", ")
        ),
    );
}
