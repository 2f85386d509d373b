//! Transition probabilities between atoms, the existence criterion for
//! general idempotent pairs, the normalized geodesic metric
//! d(p, q) = (2/π)·arccos(√trace(p∘q)), and the constructive midpoint that
//! witnesses convexity of that metric.

use crate::error::{EjaError, Result};
use crate::jordan::{tol, Element, JordanAlgebra};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Transition values near the endpoints are snapped there: arccos and the
/// c^(-1/2) in the midpoint formula are ill-conditioned at 0 and 1.
pub const EQUAL_CUTOFF: f64 = 1e-12;
pub const ORTHOGONAL_CUTOFF: f64 = 1e-12;

/// A transition probability, clamped to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionValue(f64);

impl TransitionValue {
    pub fn new(v: f64) -> TransitionValue {
        TransitionValue(v.clamp(0.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A normalized geodesic distance in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue(f64);

impl MetricValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// ℙ(q|p) = trace(p ∘ q) for an atom p and an idempotent q.
pub fn transition_probability(
    alg: &JordanAlgebra,
    p: &Element,
    q: &Element,
) -> Result<TransitionValue> {
    if !alg.is_atom(p) {
        return Err(EjaError::Precondition("transition source must be an atom".into()));
    }
    let residual = alg.idempotency_residual(q);
    if residual > tol::IDEMPOTENT {
        return Err(EjaError::NotIdempotent { residual });
    }
    Ok(TransitionValue::new(alg.inner(p, q)))
}

/// Existence criterion for idempotent pairs: the transition ℙ(q|p) exists
/// iff {p, q, p} = s·p for some real s; returns that s when the least-squares
/// residual stays below 1e-8·‖p‖.
pub fn transition_exists(
    alg: &JordanAlgebra,
    p: &Element,
    q: &Element,
) -> Result<Option<TransitionValue>> {
    for e in [p, q] {
        let residual = alg.idempotency_residual(e);
        if residual > tol::IDEMPOTENT {
            return Err(EjaError::NotIdempotent { residual });
        }
    }
    let w = alg.triple(p, q)?;
    let pp = alg.inner(p, p);
    if pp < 1e-12 {
        // p = 0: {0, q, 0} = 0 = s·0 for every s; report s = 0
        return Ok(Some(TransitionValue::new(0.0)));
    }
    let s = alg.inner(&w, p) / pp;
    let residual = alg.norm(&alg.sub(&w, &alg.scale(p, s)));
    if residual <= 1e-8 * alg.norm(p) {
        Ok(Some(TransitionValue::new(s)))
    } else {
        Ok(None)
    }
}

/// Normalized geodesic distance (2/π)·arccos(√trace(p∘q)) between atoms.
/// Defined for atoms in different summands of a reducible algebra too
/// (transition 0, distance 1).
pub fn geodesic_distance(alg: &JordanAlgebra, p: &Element, q: &Element) -> Result<MetricValue> {
    for e in [p, q] {
        if !alg.is_atom(e) {
            return Err(EjaError::Precondition("geodesic distance needs atoms".into()));
        }
    }
    Ok(distance_unchecked(alg, p, q))
}

/// Distance without the atom certification; callers in campaign loops
/// certify once and reuse.
pub fn distance_unchecked(alg: &JordanAlgebra, p: &Element, q: &Element) -> MetricValue {
    MetricValue(distance_from_transition(alg.inner(p, q)))
}

pub fn distance_from_transition(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    if c >= 1.0 - EQUAL_CUTOFF {
        0.0
    } else if c <= ORTHOGONAL_CUTOFF {
        1.0
    } else {
        std::f64::consts::FRAC_2_PI * c.sqrt().acos()
    }
}

/// For orthogonal atoms p, q in a simple algebra, finds a symmetry
/// v ∈ {p, A, q} with v² = p + q: a random element is pushed into the joint
/// Peirce-(1/2, 1/2) space and normalized to trace(v∘v) = 2. Cross-summand
/// pairs in a reducible algebra have {p, A, q} = 0, so every attempt dies in
/// the projection and the search reports the missing symmetry.
pub fn find_symmetry(
    alg: &JordanAlgebra,
    p: &Element,
    q: &Element,
    rng: &mut impl Rng,
) -> Result<Element> {
    if !alg.is_atom(p) || !alg.is_atom(q) {
        return Err(EjaError::Precondition("find_symmetry needs atoms".into()));
    }
    if alg.inner(p, q).abs() > 1e-10 {
        return Err(EjaError::Precondition("find_symmetry needs orthogonal atoms".into()));
    }
    let (_, half_p, _) = alg.peirce_projections(p)?;
    let (_, half_q, _) = alg.peirce_projections(q)?;
    let joint = half_q.matmul(&half_p);
    let target = alg.add(p, q);
    const ATTEMPTS: usize = 32;
    for _ in 0..ATTEMPTS {
        let x = alg.random_element(rng);
        let v_raw = alg.element(joint.matvec(&x.coeffs))?;
        let norm = alg.norm(&v_raw);
        if norm < 1e-6 {
            continue;
        }
        // v² = (‖v‖²/2)(p + q) on the joint Peirce space; normalize to ‖v‖² = 2
        let v = alg.scale(&v_raw, (2.0f64).sqrt() / norm);
        let vv = alg.square(&v)?;
        if alg.norm(&alg.sub(&vv, &target)) <= 1e-9 {
            return Ok(v);
        }
    }
    Err(EjaError::NoSymmetry(format!(
        "no element of the joint Peirce space squares to p + q after {ATTEMPTS} draws \
         (expected for atoms in different summands of {})",
        alg.descriptor
    )))
}

/// The between atom e with d(p, e) = d(e, q) = d(p, q)/2.
///
/// Non-orthogonal pairs use the closed form
/// e = (p + q + 2c^(-1/2)(p∘q)) / (2 + 2√c) with c = trace(p∘q), which in
/// H₂(ℝ) reproduces the angle-halving atom exactly; orthogonal pairs go
/// through the symmetry v with v² = p + q and e = (v + p + q)/2. If the
/// closed form fails its atom certification a constrained search over the
/// subalgebra spanned by p, q, p∘q takes over.
pub fn midpoint(
    alg: &JordanAlgebra,
    p: &Element,
    q: &Element,
    rng: &mut impl Rng,
) -> Result<Element> {
    if !alg.is_atom(p) || !alg.is_atom(q) {
        return Err(EjaError::Precondition("midpoint needs atoms".into()));
    }
    let c = alg.inner(p, q).clamp(0.0, 1.0);
    if c >= 1.0 - EQUAL_CUTOFF {
        return Ok(p.clone());
    }
    if c <= ORTHOGONAL_CUTOFF {
        let v = find_symmetry(alg, p, q, rng)?;
        let e = alg.scale(&alg.add(&v, &alg.add(p, q)), 0.5);
        return Ok(e);
    }
    let pq = alg.product(p, q)?;
    let scale = 1.0 / (2.0 + 2.0 * c.sqrt());
    let chord = alg.add(&alg.add(p, q), &alg.scale(&pq, 2.0 / c.sqrt()));
    let e = alg.scale(&chord, scale);
    if alg.idempotency_residual(&e) <= 1e-8 && alg.is_atom(&e) {
        return Ok(e);
    }
    refine_in_span(alg, p, q, &pq, &e)
}

/// Fallback: minimize ‖e∘e − e‖² + (trace e − 1)² over span{p, q, p∘q} by
/// coordinate descent starting from the closed-form candidate.
fn refine_in_span(
    alg: &JordanAlgebra,
    p: &Element,
    q: &Element,
    pq: &Element,
    start: &Element,
) -> Result<Element> {
    let basis = [p.clone(), q.clone(), pq.clone()];
    let assemble = |w: &[f64; 3]| {
        let mut e = alg.zero();
        for (c, b) in w.iter().zip(&basis) {
            e = alg.add(&e, &alg.scale(b, *c));
        }
        e
    };
    let objective = |w: &[f64; 3]| {
        let e = assemble(w);
        let sq = alg.square(&e).unwrap();
        let r = alg.norm(&alg.sub(&sq, &e));
        let t = alg.trace(&e) - 1.0;
        r * r + t * t
    };
    // project the starting candidate's coefficients by least squares on the
    // 3-element Gram system
    let mut weights = {
        let mut g = crate::linalg::Mat::zeros(3, 3);
        let mut rhs = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[(i, j)] = alg.inner(&basis[i], &basis[j]);
            }
            rhs[i] = alg.inner(&basis[i], start);
        }
        let sol = g.solve(&rhs).unwrap_or_else(|_| vec![0.5, 0.5, 0.0]);
        [sol[0], sol[1], sol[2]]
    };
    let mut best = objective(&weights);
    let mut step = 0.1;
    for _ in 0..4000 {
        let mut improved = false;
        for k in 0..3 {
            for dir in [1.0, -1.0] {
                let mut trial = weights;
                trial[k] += dir * step;
                let val = objective(&trial);
                if val < best {
                    best = val;
                    weights = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-14 {
                break;
            }
        }
        if best < 1e-22 {
            break;
        }
    }
    let e = assemble(&weights);
    if alg.is_atom(&e) {
        Ok(e)
    } else {
        Err(EjaError::SearchExhausted {
            what: "midpoint refinement in span{p, q, p∘q}".into(),
            attempts: 4000,
        })
    }
}

/// How midpoint trial pairs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Random,
    Orthogonal,
    NearEqual,
}

/// One row of a midpoint campaign.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MidpointRecord {
    pub trial: u64,
    pub kind: PairKind,
    pub transition: f64,
    pub d_pq: f64,
    pub d_pe: f64,
    pub d_eq: f64,
    pub atom_residual: f64,
    pub halving_defect: f64,
    pub between_defect: f64,
}

/// Samples one atom pair of the requested kind and runs the midpoint
/// construction on it.
pub fn midpoint_trial(
    alg: &JordanAlgebra,
    rng: &mut impl Rng,
    trial: u64,
    kind: PairKind,
) -> Result<MidpointRecord> {
    let (p, q) = match kind {
        PairKind::Random => {
            let p = alg.random_atom(rng)?;
            let q = alg.random_atom(rng)?;
            (p, q)
        }
        PairKind::Orthogonal => alg.random_orthogonal_atoms(rng)?,
        PairKind::NearEqual => {
            // keep forced pairs clear of the treat-as-equal cutoff: inside
            // c ∈ (1 − 4e-12, 1 − 1e-12) the pair distance and its halves
            // would straddle the snap and report a spurious defect
            let p = alg.random_atom(rng)?;
            let mut t: f64 = rng.random_range(1e-4..1e-2);
            let mut q = p.clone();
            for _ in 0..6 {
                let map = alg.random_derivation_exponential(rng, t);
                let cand = alg.element(map.matvec(&p.coeffs))?;
                if alg.inner(&p, &cand) <= 1.0 - 1e-10 {
                    q = cand;
                    break;
                }
                t *= 4.0;
            }
            // fallback: an exactly equal pair, which snaps consistently
            (p, q)
        }
    };
    let e = midpoint(alg, &p, &q, rng)?;
    let d_pq = distance_unchecked(alg, &p, &q).value();
    let d_pe = distance_unchecked(alg, &p, &e).value();
    let d_eq = distance_unchecked(alg, &e, &q).value();
    let halving = (d_pe - d_pq / 2.0).abs().max((d_eq - d_pq / 2.0).abs());
    Ok(MidpointRecord {
        trial,
        kind,
        transition: alg.inner(&p, &q),
        d_pq,
        d_pe,
        d_eq,
        atom_residual: alg.idempotency_residual(&e),
        halving_defect: halving,
        between_defect: (d_pe + d_eq - d_pq).abs(),
    })
}

/// Convexity report: per-pair between-point defects over a seeded campaign.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub algebra: String,
    pub trials: u64,
    pub seed: u64,
    pub max_between_defect: f64,
    pub max_halving_defect: f64,
    pub max_atom_residual: f64,
    pub records: Vec<MidpointRecord>,
}

/// Verifies the between-point equation d(p, q) = d(p, e) + d(e, q) through
/// the midpoint construction on `trials` sampled pairs.
pub fn convexity_check(alg: &JordanAlgebra, trials: u64, seed: u64) -> Result<ConvexityReport> {
    if !alg.is_simple() {
        return Err(EjaError::Precondition(
            "convexity check needs a simple algebra".into(),
        ));
    }
    let records = crate::par::try_map_trials(trials, |i| {
        let mut rng = crate::par::rng_for_trial(seed, i);
        midpoint_trial(alg, &mut rng, i, PairKind::Random)
    })?;
    let fold = |f: fn(&MidpointRecord) -> f64| records.iter().map(f).fold(0.0f64, f64::max);
    Ok(ConvexityReport {
        algebra: alg.descriptor.to_string(),
        trials,
        seed,
        max_between_defect: fold(|r| r.between_defect),
        max_halving_defect: fold(|r| r.halving_defect),
        max_atom_residual: fold(|r| r.atom_residual),
        records,
    })
}

/// The one-parameter atom family of H₂(ℝ):
/// e_t = [[cos²t, −sin t·cos t], [−sin t·cos t, sin²t]], expressed against
/// the basis (E11, E22, E12 + E21). Satisfies trace(e_s ∘ e_t) = cos²(s − t).
pub fn h2r_angle_atom(alg: &JordanAlgebra, t: f64) -> Result<Element> {
    if alg.dim != 3 || alg.rank != 2 {
        return Err(EjaError::Precondition("angle atoms live in H(2,R)".into()));
    }
    alg.element(vec![t.cos().powi(2), t.sin().powi(2), -t.sin() * t.cos()])
}
