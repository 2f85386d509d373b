//! Batch verification campaigns behind the CLI verbs. Every campaign takes a
//! master seed, derives one RNG per trial, and produces a serde-serializable
//! report; identical configs produce byte-identical JSON.

use crate::automorphism::{
    self, derivation_exponential, homogeneity_witness, planted_orthogonal_problem,
    planted_problem, Automorphism, ReducibleDemoReport,
};
use crate::bioct::{self, BioctMatrix, MidpointSearchRecord};
use crate::error::{EjaError, Result};
use crate::jordan::{Descriptor, JordanAlgebra};
use crate::metric::{midpoint_trial, MidpointRecord, PairKind};
use crate::par;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resolved configuration echoed into every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub algebra: Option<String>,
    pub algebra2: Option<String>,
    pub trials: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub version: String,
}

impl RunConfig {
    pub fn new(command: &str, algebra: Option<&str>, trials: u64, seed: u64, tolerance: f64) -> Self {
        RunConfig {
            command: command.to_string(),
            algebra: algebra.map(|s| s.to_string()),
            algebra2: None,
            trials,
            seed,
            tolerance,
            version: VERSION.to_string(),
        }
    }
}

// ---------------------------------------------------------------------------
// verify-core
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoreVerifyReport {
    pub config: RunConfig,
    pub dimension: usize,
    pub rank: usize,
    pub jordan_identity_max: f64,
    pub unit_action_max: f64,
    pub trace_unit_error: f64,
    pub atom_trace_max_error: f64,
    pub peirce_law_max: f64,
    pub orthogonal_rank: usize,
    pub pass: bool,
}

/// Jordan identity, trace normalization, Peirce eigenspace laws, greedy rank.
pub fn verify_core(algebra: &str, trials: u64, seed: u64, tolerance: f64) -> Result<CoreVerifyReport> {
    let alg = JordanAlgebra::parse(algebra)?;
    let trial_residuals = par::try_map_trials(trials, |i| {
        let mut rng = par::rng_for_trial(seed, i);
        let a = alg.random_element(&mut rng);
        let b = alg.random_element(&mut rng);
        let aa = alg.square(&a)?;
        let lhs = alg.product(&a, &alg.product(&aa, &b)?)?;
        let rhs = alg.product(&aa, &alg.product(&a, &b)?)?;
        let jordan = alg.norm(&alg.sub(&lhs, &rhs))
            / (1.0 + alg.norm(&a).powi(3) * alg.norm(&b));
        let ua = alg.product(&alg.unit_element(), &a)?;
        let unit_action = alg.norm(&alg.sub(&ua, &a));
        let p = alg.random_atom(&mut rng)?;
        let atom_trace = (alg.trace(&p) - 1.0).abs();
        // Peirce laws at the sampled atom: L_p P_λ = λ P_λ
        let (p1, ph, p0) = alg.peirce_projections(&p)?;
        let l = alg.lmul_matrix(&p);
        let peirce = l
            .matmul(&p1)
            .sub(&p1)
            .norm_fro()
            .max(l.matmul(&ph).sub(&ph.scale(0.5)).norm_fro())
            .max(l.matmul(&p0).norm_fro());
        Ok((jordan, unit_action, atom_trace, peirce))
    })?;
    let fold = |f: fn(&(f64, f64, f64, f64)) -> f64| {
        trial_residuals.iter().map(f).fold(0.0f64, f64::max)
    };
    let jordan_identity_max = fold(|r| r.0);
    let unit_action_max = fold(|r| r.1);
    let atom_trace_max_error = fold(|r| r.2);
    let peirce_law_max = fold(|r| r.3);
    let trace_unit_error = (alg.trace(&alg.unit_element()) - alg.rank as f64).abs();
    let mut rng = par::rng_for_trial(seed, u64::MAX);
    let orthogonal_rank = alg.orthogonal_rank(&mut rng)?;
    let pass = jordan_identity_max <= tolerance
        && unit_action_max <= 1e-12
        && trace_unit_error <= 1e-12
        && atom_trace_max_error <= 1e-8
        && peirce_law_max <= tolerance.max(1e-10)
        && orthogonal_rank == alg.rank;
    Ok(CoreVerifyReport {
        config: RunConfig::new("verify-core", Some(algebra), trials, seed, tolerance),
        dimension: alg.dim,
        rank: alg.rank,
        jordan_identity_max,
        unit_action_max,
        trace_unit_error,
        atom_trace_max_error,
        peirce_law_max,
        orthogonal_rank,
        pass,
    })
}

// ---------------------------------------------------------------------------
// lemma1 (midpoint / convexity campaign)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MidpointCampaignReport {
    pub config: RunConfig,
    pub forced_orthogonal: u64,
    pub forced_near_equal: u64,
    pub max_atom_residual: f64,
    pub max_halving_defect: f64,
    pub max_between_defect: f64,
    pub pass: bool,
    pub records: Vec<MidpointRecord>,
}

/// Midpoint campaign over random pairs plus forced orthogonal pairs (the
/// v² = p + q route) and forced near-equal pairs.
pub fn midpoint_campaign(
    algebra: &str,
    random_pairs: u64,
    orthogonal_pairs: u64,
    near_equal_pairs: u64,
    seed: u64,
    tolerance: f64,
) -> Result<MidpointCampaignReport> {
    let alg = JordanAlgebra::parse(algebra)?;
    if !alg.is_simple() {
        return Err(EjaError::Precondition(format!(
            "midpoint campaigns need a simple algebra, got {}",
            alg.descriptor
        )));
    }
    let total = random_pairs + orthogonal_pairs + near_equal_pairs;
    let records = par::try_map_trials(total, |i| {
        let mut rng = par::rng_for_trial(seed, i);
        let kind = if i < random_pairs {
            PairKind::Random
        } else if i < random_pairs + orthogonal_pairs {
            PairKind::Orthogonal
        } else {
            PairKind::NearEqual
        };
        midpoint_trial(&alg, &mut rng, i, kind)
    })?;
    let fold = |f: fn(&MidpointRecord) -> f64| records.iter().map(f).fold(0.0f64, f64::max);
    let max_atom_residual = fold(|r| r.atom_residual);
    let max_halving_defect = fold(|r| r.halving_defect);
    let max_between_defect = fold(|r| r.between_defect);
    let pass = max_halving_defect <= tolerance && max_between_defect <= tolerance;
    Ok(MidpointCampaignReport {
        config: RunConfig::new("lemma1", Some(algebra), total, seed, tolerance),
        forced_orthogonal: orthogonal_pairs,
        forced_near_equal: near_equal_pairs,
        max_atom_residual,
        max_halving_defect,
        max_between_defect,
        pass,
        records,
    })
}

// ---------------------------------------------------------------------------
// homogeneity / bit-symmetry
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub trial: u64,
    pub transition: f64,
    pub residual_p: f64,
    pub residual_q: f64,
    pub cert_unit: f64,
    pub cert_mult: f64,
    pub success: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessCampaignReport {
    pub config: RunConfig,
    pub failures: u64,
    pub max_mapping_residual: f64,
    pub max_cert_residual: f64,
    pub best_effort: bool,
    pub successes: u64,
    pub records: Vec<WitnessRecord>,
    pub pass: bool,
}

fn witness_trial(
    alg: &JordanAlgebra,
    problem: &automorphism::WitnessProblem,
    trial: u64,
    rng: &mut impl rand::Rng,
) -> WitnessRecord {
    let transition = alg.inner(&problem.p1, &problem.q1);
    match homogeneity_witness(alg, problem, rng) {
        Ok(t) => {
            let rp = alg.norm(&alg.sub(&t.apply(alg, &problem.p1).unwrap(), &problem.p2));
            let rq = alg.norm(&alg.sub(&t.apply(alg, &problem.q1).unwrap(), &problem.q2));
            WitnessRecord {
                trial,
                transition,
                residual_p: rp,
                residual_q: rq,
                cert_unit: t.cert.unit_residual,
                cert_mult: t.cert.mult_residual,
                success: rp <= automorphism::WITNESS_TOL && rq <= automorphism::WITNESS_TOL,
            }
        }
        Err(_) => WitnessRecord {
            trial,
            transition,
            residual_p: f64::INFINITY,
            residual_q: f64::INFINITY,
            cert_unit: f64::INFINITY,
            cert_mult: f64::INFINITY,
            success: false,
        },
    }
}

/// Planted homogeneity campaign: quadruples (p₂, q₂) = (T₀p₁, T₀q₁) for
/// random known T₀; the witness must recover some valid map. `best_effort`
/// marks the octonion search, whose failures are reported, not asserted.
pub fn homogeneity_campaign(
    algebra: &str,
    trials: u64,
    seed: u64,
    best_effort: bool,
) -> Result<WitnessCampaignReport> {
    let alg = JordanAlgebra::parse(algebra)?;
    let octonion = matches!(alg.descriptor, Descriptor::Matrix(_, crate::hypercomplex::Division::Octonion));
    if octonion && !best_effort {
        return Err(EjaError::Precondition(
            "H(n,O) has no constructive witness; pass best-effort to run the bounded search".into(),
        ));
    }
    let records = par::try_map_trials(trials, |i| {
        let mut rng = par::rng_for_trial(seed, i);
        let problem = planted_problem(&alg, &mut rng)?;
        Ok(witness_trial(&alg, &problem, i, &mut rng))
    })?;
    finish_witness_report("homogeneity", algebra, trials, seed, best_effort, records)
}

/// Bit-symmetry campaign: independently drawn orthogonal pairs (transition
/// exactly zero on both sides).
pub fn bit_symmetry_campaign(
    algebra: &str,
    trials: u64,
    seed: u64,
    best_effort: bool,
) -> Result<WitnessCampaignReport> {
    let alg = JordanAlgebra::parse(algebra)?;
    let records = par::try_map_trials(trials, |i| {
        let mut rng = par::rng_for_trial(seed, i);
        let problem = planted_orthogonal_problem(&alg, &mut rng)?;
        Ok(witness_trial(&alg, &problem, i, &mut rng))
    })?;
    finish_witness_report("bit-symmetry", algebra, trials, seed, best_effort, records)
}

fn finish_witness_report(
    command: &str,
    algebra: &str,
    trials: u64,
    seed: u64,
    best_effort: bool,
    records: Vec<WitnessRecord>,
) -> Result<WitnessCampaignReport> {
    let successes = records.iter().filter(|r| r.success).count() as u64;
    let failures = trials - successes;
    let finite_max = |f: fn(&WitnessRecord) -> f64| {
        records
            .iter()
            .filter(|r| r.success)
            .map(f)
            .fold(0.0f64, f64::max)
    };
    let max_mapping_residual = finite_max(|r| r.residual_p.max(r.residual_q));
    let max_cert_residual = finite_max(|r| r.cert_unit.max(r.cert_mult));
    let pass = best_effort || failures == 0;
    Ok(WitnessCampaignReport {
        config: RunConfig::new(command, Some(algebra), trials, seed, automorphism::WITNESS_TOL),
        failures,
        max_mapping_residual,
        max_cert_residual,
        best_effort,
        successes,
        records,
        pass,
    })
}

// ---------------------------------------------------------------------------
// transition invariance under certified automorphisms
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub config: RunConfig,
    pub automorphisms: u64,
    pub pairs_per_automorphism: u64,
    pub max_invariance_defect: f64,
    pub max_cert_residual: f64,
    pub pass: bool,
}

/// For random derivation-exponential automorphisms T and random atom pairs,
/// checks |ℙ(Tq|Tp) − ℙ(q|p)|.
pub fn invariance_campaign(
    algebra: &str,
    automorphisms: u64,
    pairs: u64,
    seed: u64,
    tolerance: f64,
) -> Result<InvarianceReport> {
    let alg = JordanAlgebra::parse(algebra)?;
    let per_trial: Vec<(f64, f64)> = par::try_map_trials(automorphisms, |i| {
        let mut rng = par::rng_for_trial(seed, i);
        let a = alg.random_element(&mut rng);
        let b = alg.random_element(&mut rng);
        let t = derivation_exponential(&alg, &a, &b, 1.0)?;
        let mut defect = 0.0f64;
        for _ in 0..pairs {
            let p = alg.random_atom(&mut rng)?;
            let q = alg.random_atom(&mut rng)?;
            let tp = t.apply(&alg, &p)?;
            let tq = t.apply(&alg, &q)?;
            defect = defect.max((alg.inner(&tp, &tq) - alg.inner(&p, &q)).abs());
        }
        Ok((defect, t.cert.unit_residual.max(t.cert.mult_residual)))
    })?;
    let max_invariance_defect = per_trial.iter().map(|r| r.0).fold(0.0f64, f64::max);
    let max_cert_residual = per_trial.iter().map(|r| r.1).fold(0.0f64, f64::max);
    Ok(InvarianceReport {
        config: RunConfig::new("invariance", Some(algebra), automorphisms, seed, tolerance),
        automorphisms,
        pairs_per_automorphism: pairs,
        max_invariance_defect,
        max_cert_residual,
        pass: max_invariance_defect <= tolerance && max_cert_residual <= tolerance,
    })
}

// ---------------------------------------------------------------------------
// reducible-demo
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReducibleDemoOutput {
    pub config: RunConfig,
    pub report: ReducibleDemoReport,
    pub pass: bool,
}

pub fn reducible_demo(
    algebra1: &str,
    algebra2: &str,
    samples: u64,
    seed: u64,
) -> Result<ReducibleDemoOutput> {
    let a1 = Descriptor::parse(algebra1)?;
    let a2 = Descriptor::parse(algebra2)?;
    let report = automorphism::reducible_nonhomogeneity_demo(&a1, &a2, samples, seed)?;
    let mut config = RunConfig::new("reducible-demo", Some(algebra1), samples, seed, 1e-8);
    config.algebra2 = Some(algebra2.to_string());
    let pass = report.witnesses_found == 0 && report.max_block_leak <= 1e-9;
    Ok(ReducibleDemoOutput {
        config,
        report,
        pass,
    })
}

// ---------------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankReport {
    pub config: RunConfig,
    pub orthogonal_rank: usize,
    pub descriptor_rank: usize,
    pub pass: bool,
}

pub fn rank_check(algebra: &str, seed: u64) -> Result<RankReport> {
    let alg = JordanAlgebra::parse(algebra)?;
    let mut rng = par::rng_for_trial(seed, 0);
    let orthogonal_rank = alg.orthogonal_rank(&mut rng)?;
    Ok(RankReport {
        config: RunConfig::new("rank", Some(algebra), 1, seed, 0.0),
        orthogonal_rank,
        descriptor_rank: alg.rank,
        pass: orthogonal_rank == alg.rank,
    })
}

// ---------------------------------------------------------------------------
// bioct
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BioctReport {
    pub config: RunConfig,
    pub zero_divisor_exact: bool,
    pub freudenthal_unit_identities_exact: bool,
    pub points_checked: u64,
    pub max_point_norm_deviation: f64,
    pub max_freudenthal_residual: f64,
    pub state_normalization_exact: bool,
    pub metric_triangle_min_slack: f64,
    pub embedded_transition_max_error: f64,
    pub formal_reality: bioct::FormalRealityWitness,
    pub midpoint_embedded_max_defect: f64,
    pub midpoint_general: Vec<MidpointSearchRecord>,
    pub pass: bool,
}

/// Full plane campaign: certifications, logic/state identities, metric
/// sampling, embedded-subplane agreement and the midpoint search.
pub fn bioct_campaign(trials: u64, seed: u64, budget: u64) -> Result<BioctReport> {
    // exact identities
    let x = crate::hypercomplex::Bioctonion {
        re: crate::hypercomplex::Octonion::one(),
        im: crate::hypercomplex::Octonion::unit(1),
    };
    let y = crate::hypercomplex::Bioctonion {
        re: crate::hypercomplex::Octonion::one(),
        im: -crate::hypercomplex::Octonion::unit(1),
    };
    let zero_divisor_exact = (x * y).is_zero(0.0) && x.norm_form() == 2.0 && y.norm_form() == 2.0;
    let e11 = BioctMatrix::diag_unit(0);
    let freud_e11 = bioct::freudenthal_square(&e11).max_abs() == 0.0;
    let id = BioctMatrix::identity();
    let freud_id = bioct::freudenthal_square(&id).sub(&id).max_abs() == 0.0;

    // point certification + state normalization + triangles
    struct Trial {
        norm_dev: f64,
        freud: f64,
        state_exact: bool,
        slack: f64,
    }
    let records: Vec<Trial> = par::try_map_trials(trials, |i| {
        let mut rng = par::rng_for_trial(seed, i);
        let a = bioct::random_point(&mut rng)?;
        let b = bioct::random_point(&mut rng)?;
        let c = bioct::random_point(&mut rng)?;
        let (norm_dev, freud) = bioct::point_residuals(a.rep());
        let mu = bioct::PlaneState { anchor: a.clone() };
        let v = bioct::state_eval(&mu, &bioct::LogicElement::Point(b.clone()));
        let w = bioct::state_eval(&mu, &bioct::LogicElement::Line(b.clone()));
        let state_exact = v + w == 1.0;
        let slack = bioct::plane_metric(&a, &b) + bioct::plane_metric(&b, &c)
            - bioct::plane_metric(&a, &c);
        Ok(Trial {
            norm_dev,
            freud,
            state_exact,
            slack,
        })
    })?;
    let max_point_norm_deviation = records.iter().map(|r| r.norm_dev).fold(0.0f64, f64::max);
    let max_freudenthal_residual = records.iter().map(|r| r.freud).fold(0.0f64, f64::max);
    let state_normalization_exact = records.iter().all(|r| r.state_exact);
    let metric_triangle_min_slack = records
        .iter()
        .map(|r| r.slack)
        .fold(f64::INFINITY, f64::min)
        .min(f64::INFINITY);

    // embedded H₃(𝕆) agreement
    let alg = JordanAlgebra::parse("H(3,O)")?;
    let embed_trials = trials.min(200);
    let embedded: Vec<f64> = par::try_map_trials(embed_trials, |i| {
        let mut rng = par::rng_for_trial(seed.wrapping_add(101), i);
        let p = alg.random_atom(&mut rng)?;
        let q = alg.random_atom(&mut rng)?;
        let ep = bioct::embed_atom(&alg, &p)?;
        let eq = bioct::embed_atom(&alg, &q)?;
        Ok((bioct::plane_transition(&ep, &eq).value() - alg.inner(&p, &q).clamp(0.0, 1.0)).abs())
    })?;
    let embedded_transition_max_error = embedded.iter().cloned().fold(0.0f64, f64::max);

    // midpoint searches: embedded pairs must reach 1e-6, general pairs are
    // reported without a bound
    let embedded_mid = par::try_map_trials(trials.min(6), |i| {
        let mut rng = par::rng_for_trial(seed.wrapping_add(202), i);
        let p = alg.random_atom(&mut rng)?;
        let q = alg.random_atom(&mut rng)?;
        let ep = bioct::embed_atom(&alg, &p)?;
        let eq = bioct::embed_atom(&alg, &q)?;
        let d_pq = bioct::plane_metric(&ep, &eq);
        let (point, defect, evaluations) =
            bioct::plane_midpoint_search(&ep, &eq, budget, seed.wrapping_add(i));
        Ok(MidpointSearchRecord {
            trial: i,
            transition: bioct::plane_transition(&ep, &eq).value(),
            d_pq,
            defect,
            evaluations,
            midpoint: Some(point),
        })
    })?;
    let midpoint_embedded_max_defect = embedded_mid.iter().map(|r| r.defect).fold(0.0f64, f64::max);
    let midpoint_general = par::try_map_trials(trials.min(6), |i| {
        let mut rng = par::rng_for_trial(seed.wrapping_add(303), i);
        let p = bioct::random_point(&mut rng)?;
        let q = bioct::random_point(&mut rng)?;
        let d_pq = bioct::plane_metric(&p, &q);
        let (point, defect, evaluations) =
            bioct::plane_midpoint_search(&p, &q, budget, seed.wrapping_add(7 * i));
        Ok(MidpointSearchRecord {
            trial: i,
            transition: bioct::plane_transition(&p, &q).value(),
            d_pq,
            defect,
            evaluations,
            midpoint: Some(point),
        })
    })?;

    let formal_reality = bioct::formal_reality_failure(trials.min(500), seed.wrapping_add(404));

    let pass = zero_divisor_exact
        && freud_e11
        && freud_id
        && max_point_norm_deviation <= 1e-10
        && max_freudenthal_residual <= 1e-9
        && state_normalization_exact
        && (trials == 0 || metric_triangle_min_slack >= -1e-9)
        && embedded_transition_max_error <= 1e-10
        && formal_reality.conclusive
        && (trials == 0 || midpoint_embedded_max_defect <= 1e-6);
    Ok(BioctReport {
        config: RunConfig::new("bioct", None, trials, seed, 1e-9),
        zero_divisor_exact,
        freudenthal_unit_identities_exact: freud_e11 && freud_id,
        points_checked: trials,
        max_point_norm_deviation,
        max_freudenthal_residual,
        state_normalization_exact,
        metric_triangle_min_slack: if records.is_empty() {
            0.0
        } else {
            metric_triangle_min_slack
        },
        embedded_transition_max_error,
        formal_reality,
        midpoint_embedded_max_defect,
        midpoint_general,
        pass,
    })
}

/// Best-effort octonion homogeneity: success-rate reporting wrapper used by
/// the CLI for the H(n, 𝕆) family.
pub fn octonion_witness_campaign(
    algebra: &str,
    trials: u64,
    seed: u64,
    budget: usize,
) -> Result<WitnessCampaignReport> {
    let alg = JordanAlgebra::parse(algebra)?;
    if !matches!(
        alg.descriptor,
        Descriptor::Matrix(_, crate::hypercomplex::Division::Octonion)
    ) {
        return Err(EjaError::Precondition(format!(
            "the bounded witness search is for the octonion family, got {}",
            alg.descriptor
        )));
    }
    let records = par::try_map_trials(trials, |i| {
        let mut rng = par::rng_for_trial(seed, i);
        // plant small motions so the bounded search has a reasonable target
        let p1 = alg.random_atom(&mut rng)?;
        let q1 = alg.random_atom(&mut rng)?;
        let a = alg.random_element(&mut rng);
        let b = alg.random_element(&mut rng);
        let t0 = derivation_exponential(&alg, &a, &b, 0.05)?;
        let p2 = t0.apply(&alg, &p1)?;
        let q2 = t0.apply(&alg, &q1)?;
        let problem = automorphism::WitnessProblem::new(&alg, p1, q1, p2, q2, 1e-8)?;
        let transition = alg.inner(&problem.p1, &problem.q1);
        let record = match automorphism::search_witness_octonion(&alg, &problem, budget, &mut rng) {
            Ok(t) => {
                let rp = alg.norm(&alg.sub(&t.apply(&alg, &problem.p1)?, &problem.p2));
                let rq = alg.norm(&alg.sub(&t.apply(&alg, &problem.q1)?, &problem.q2));
                WitnessRecord {
                    trial: i,
                    transition,
                    residual_p: rp,
                    residual_q: rq,
                    cert_unit: t.cert.unit_residual,
                    cert_mult: t.cert.mult_residual,
                    success: true,
                }
            }
            Err(_) => WitnessRecord {
                trial: i,
                transition,
                residual_p: f64::INFINITY,
                residual_q: f64::INFINITY,
                cert_unit: f64::INFINITY,
                cert_mult: f64::INFINITY,
                success: false,
            },
        };
        Ok(record)
    })?;
    finish_witness_report("homogeneity", algebra, trials, seed, true, records)
}

/// Convenience re-export used by benches and the CLI.
pub fn certified_random_automorphism(
    algebra: &str,
    seed: u64,
) -> Result<Automorphism> {
    let alg = JordanAlgebra::parse(algebra)?;
    let mut rng = par::rng_for_trial(seed, 0);
    automorphism::random_automorphism(&alg, &mut rng)
}

// ---------------------------------------------------------------------------
// CSV rendering: fixed columns per record type
// ---------------------------------------------------------------------------

/// CSV rows for midpoint campaigns:
/// trial,kind,transition,d_pq,d_pe,d_eq,atom_residual,halving_defect,between_defect
pub fn midpoint_records_csv(records: &[MidpointRecord]) -> String {
    let mut out = String::from(
        "trial,kind,transition,d_pq,d_pe,d_eq,atom_residual,halving_defect,between_defect\n",
    );
    for r in records {
        let kind = match r.kind {
            PairKind::Random => "random",
            PairKind::Orthogonal => "orthogonal",
            PairKind::NearEqual => "near_equal",
        };
        out.push_str(&format!(
            "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
            r.trial,
            kind,
            r.transition,
            r.d_pq,
            r.d_pe,
            r.d_eq,
            r.atom_residual,
            r.halving_defect,
            r.between_defect
        ));
    }
    out
}

/// CSV rows for witness campaigns:
/// trial,transition,residual_p,residual_q,cert_unit,cert_mult,success
pub fn witness_records_csv(records: &[WitnessRecord]) -> String {
    let mut out = String::from("trial,transition,residual_p,residual_q,cert_unit,cert_mult,success\n");
    for r in records {
        out.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}\n",
            r.trial, r.transition, r.residual_p, r.residual_q, r.cert_unit, r.cert_mult, r.success
        ));
    }
    out
}

/// CSV rows for plane midpoint searches (point coordinates stay in the JSON
/// form): trial,transition,d_pq,defect,evaluations
pub fn midpoint_search_csv(records: &[MidpointSearchRecord]) -> String {
    let mut out = String::from("trial,transition,d_pq,defect,evaluations\n");
    for r in records {
        out.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{}\n",
            r.trial, r.transition, r.d_pq, r.defect, r.evaluations
        ));
    }
    out
}

/// Newline-delimited JSON, one record per line.
pub fn records_jsonl<T: serde::Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serialization"));
        out.push('\n');
    }
    out
}
