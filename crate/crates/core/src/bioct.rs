//! The bioctonionic projective plane built on H₃(ℂ⊗𝕆): 3×3 matrices over
//! the bioctonions that are Hermitian with respect to octonion conjugation
//! (so the diagonal entries are complex numbers).
//!
//! Points are ± classes of matrices with ⟨p|p⟩ = 1 and vanishing Freudenthal
//! square; lines are the orthocomplements of points; the quantum logic is
//! {0, points, lines, 𝕀} and states come from μ_p̄(q̄) = |⟨p|q⟩|. The inner
//! product is ⟨x|y⟩ = trace(x∘y* + y∘x*)/2 where the matrix star is the
//! transpose with full (complex and octonion) conjugation of the entries;
//! on Hermitian matrices that reduces to entrywise complex conjugation.
//! With this star the embedded H₃(𝕆) subplane reproduces trace(p∘q)
//! exactly.
//!
//! This algebra is not formally real (trace(x∘x) < 0 happens, e.g. for
//! x = diag(i, 0, 0)) and the transition probability here is not
//! homogeneous; the code only verifies the positive structure.

use crate::error::{EjaError, Result};
use crate::hypercomplex::{Bioctonion, Division, Octonion};
use crate::jordan::{Descriptor, Element, JordanAlgebra};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub const POINT_NORM_TOL: f64 = 1e-9;
pub const POINT_FREUDENTHAL_TOL: f64 = 1e-9;

/// 3×3 bioctonion matrix, Hermitian with respect to octonion conjugation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BioctMatrix {
    pub e: [[Bioctonion; 3]; 3],
}

impl BioctMatrix {
    pub const ZERO: BioctMatrix = BioctMatrix {
        e: [[Bioctonion::ZERO; 3]; 3],
    };

    pub fn identity() -> BioctMatrix {
        let mut m = BioctMatrix::ZERO;
        for i in 0..3 {
            m.e[i][i] = Bioctonion::one();
        }
        m
    }

    pub fn diag_unit(k: usize) -> BioctMatrix {
        let mut m = BioctMatrix::ZERO;
        m.e[k][k] = Bioctonion::one();
        m
    }

    pub fn add(&self, o: &BioctMatrix) -> BioctMatrix {
        let mut m = BioctMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[i][j] + o.e[i][j];
            }
        }
        m
    }

    pub fn sub(&self, o: &BioctMatrix) -> BioctMatrix {
        let mut m = BioctMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[i][j] - o.e[i][j];
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> BioctMatrix {
        let mut m = BioctMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[i][j].scale(s);
            }
        }
        m
    }

    pub fn scale_complex(&self, a: f64, b: f64) -> BioctMatrix {
        let mut m = BioctMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[i][j].scale_complex(a, b);
            }
        }
        m
    }

    pub fn matmul(&self, o: &BioctMatrix) -> BioctMatrix {
        let mut m = BioctMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Bioctonion::ZERO;
                for k in 0..3 {
                    acc = acc + self.e[i][k] * o.e[k][j];
                }
                m.e[i][j] = acc;
            }
        }
        m
    }

    /// Transpose with full conjugation of the entries. For Hermitian
    /// matrices this is entrywise complex conjugation.
    pub fn star(&self) -> BioctMatrix {
        let mut m = BioctMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[j][i].star();
            }
        }
        m
    }

    /// ‖entry(j,i) − oct_conj(entry(i,j))‖_∞ over all entries.
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let d = self.e[j][i] - self.e[i][j].oct_conj();
                for c in d.re.0.iter().chain(d.im.0.iter()) {
                    worst = worst.max(c.abs());
                }
            }
        }
        worst
    }

    /// Complex trace (sum of diagonal entries). The octonion-imaginary parts
    /// of the diagonal vanish for Hermitian matrices.
    pub fn trace_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for i in 0..3 {
            let (a, b) = self.e[i][i].complex_part();
            re += a;
            im += b;
        }
        (re, im)
    }

    pub fn frob_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.e[i][j].norm_form();
            }
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                for c in self.e[i][j].re.0.iter().chain(self.e[i][j].im.0.iter()) {
                    worst = worst.max(c.abs());
                }
            }
        }
        worst
    }

    /// Flat coordinate vector (row-major entries, re then im octonion
    /// coordinates): 144 reals. Used for canonical signs and serialization.
    pub fn flat_coords(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(144);
        for i in 0..3 {
            for j in 0..3 {
                v.extend_from_slice(&self.e[i][j].re.0);
                v.extend_from_slice(&self.e[i][j].im.0);
            }
        }
        v
    }
}

/// Jordan product (xy + yx)/2 in bioctonion matrix arithmetic.
pub fn bioct_jordan_product(x: &BioctMatrix, y: &BioctMatrix) -> BioctMatrix {
    x.matmul(y).add(&y.matmul(x)).scale(0.5)
}

/// ⟨x|y⟩ = trace(x∘y* + y∘x*)/2. Real for Hermitian inputs; the imaginary
/// part is asserted small and dropped.
pub fn bioct_inner(x: &BioctMatrix, y: &BioctMatrix) -> f64 {
    let a = bioct_jordan_product(x, &y.star());
    let b = bioct_jordan_product(y, &x.star());
    let (re, im) = a.add(&b).trace_complex();
    debug_assert!(
        im.abs() <= 1e-10 * (1.0 + re.abs()),
        "inner product acquired an imaginary part: {im}"
    );
    re / 2.0
}

pub fn bioct_norm(x: &BioctMatrix) -> f64 {
    bioct_inner(x, x).max(0.0).sqrt()
}

/// Freudenthal square x × x = x² − x·tr(x) − ½[tr(x²) − tr(x)²]·I,
/// evaluated with the complex-valued trace.
pub fn freudenthal_square(x: &BioctMatrix) -> BioctMatrix {
    let sq = x.matmul(x);
    let (t_re, t_im) = x.trace_complex();
    let (s_re, s_im) = sq.trace_complex();
    // tr(x)² over ℂ
    let (t2_re, t2_im) = (t_re * t_re - t_im * t_im, 2.0 * t_re * t_im);
    let half = (0.5 * (s_re - t2_re), 0.5 * (s_im - t2_im));
    sq.sub(&x.scale_complex(t_re, t_im))
        .sub(&BioctMatrix::identity().scale_complex(half.0, half.1))
}

/// Point test: ⟨p|p⟩ = 1 and p × p = 0, both within tolerance.
pub fn is_point(p: &BioctMatrix) -> bool {
    let (norm_dev, freud) = point_residuals(p);
    norm_dev <= POINT_NORM_TOL && freud <= POINT_FREUDENTHAL_TOL
}

/// (|⟨p|p⟩ − 1|, ‖p×p‖).
pub fn point_residuals(p: &BioctMatrix) -> (f64, f64) {
    let norm_dev = (bioct_inner(p, p) - 1.0).abs();
    let freud = bioct_norm(&freudenthal_square(p));
    (norm_dev, freud)
}

/// A point of the plane: the class {p, −p}, stored with a canonical sign
/// (first coordinate above threshold made positive).
#[derive(Debug, Clone, PartialEq)]
pub struct PlanePoint {
    rep: BioctMatrix,
}

impl PlanePoint {
    pub fn try_new(m: BioctMatrix) -> Result<PlanePoint> {
        if m.hermitian_residual() > 1e-9 {
            return Err(EjaError::Precondition(
                "point representatives must be octonion-Hermitian".into(),
            ));
        }
        if !is_point(&m) {
            let (norm_dev, freud) = point_residuals(&m);
            return Err(EjaError::Precondition(format!(
                "not a point: norm deviation {norm_dev:.3e}, Freudenthal residual {freud:.3e}"
            )));
        }
        Ok(PlanePoint {
            rep: canonical_sign(m),
        })
    }

    pub fn rep(&self) -> &BioctMatrix {
        &self.rep
    }

    /// Class equality: representatives agree up to sign.
    pub fn same_point(&self, other: &PlanePoint) -> bool {
        let d1 = self.rep.sub(&other.rep).frob_norm();
        let d2 = self.rep.add(&other.rep).frob_norm();
        d1.min(d2) <= 1e-8
    }
}

fn canonical_sign(m: BioctMatrix) -> BioctMatrix {
    for c in m.flat_coords() {
        if c.abs() > 1e-9 {
            return if c < 0.0 { m.scale(-1.0) } else { m };
        }
    }
    m
}

impl PlanePoint {
    /// The 27 complex coordinates of the representative: the three diagonal
    /// entries, then the eight octonion components of the upper-triangle
    /// entries (1,2), (1,3), (2,3); every coordinate is a [re, im] pair over
    /// the tensor-complex unit. The lower triangle is determined by
    /// Hermiticity.
    pub fn complex_coords(&self) -> [[f64; 2]; 27] {
        let mut out = [[0.0; 2]; 27];
        for k in 0..3 {
            let (re, im) = self.rep.e[k][k].complex_part();
            out[k] = [re, im];
        }
        let mut idx = 3;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let entry = self.rep.e[i][j];
            for c in 0..8 {
                out[idx] = [entry.re.0[c], entry.im.0[c]];
                idx += 1;
            }
        }
        out
    }

    /// Rebuilds and certifies a point from 27 complex coordinates.
    pub fn from_complex_coords(coords: &[[f64; 2]; 27]) -> Result<PlanePoint> {
        let mut m = BioctMatrix::ZERO;
        for k in 0..3 {
            m.e[k][k] = Bioctonion::complex(coords[k][0], coords[k][1]);
        }
        let mut idx = 3;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let mut re = [0.0; 8];
            let mut im = [0.0; 8];
            for c in 0..8 {
                re[c] = coords[idx][0];
                im[c] = coords[idx][1];
                idx += 1;
            }
            let b = Bioctonion {
                re: Octonion(re),
                im: Octonion(im),
            };
            m.e[i][j] = b;
            m.e[j][i] = b.oct_conj();
        }
        PlanePoint::try_new(m)
    }
}

impl Serialize for PlanePoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coords = self.complex_coords();
        coords.as_slice().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PlanePoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<[f64; 2]> = Vec::deserialize(deserializer)?;
        let coords: [[f64; 2]; 27] = raw
            .try_into()
            .map_err(|_| serde::de::Error::custom("expected 27 complex coordinates"))?;
        PlanePoint::from_complex_coords(&coords).map_err(serde::de::Error::custom)
    }
}

/// Rank-one matrix v ⊗ oct_conj(v) from a vector over ℂ⊗𝕆. With the third
/// component complex the entries live in a two-generator (hence associative)
/// subalgebra, which makes the Freudenthal square vanish identically.
pub fn outer_point_matrix(v: &[Bioctonion; 3]) -> BioctMatrix {
    let mut m = BioctMatrix::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            m.e[i][j] = v[i] * v[j].oct_conj();
        }
    }
    m
}

/// Samples a certified random point: random v = (x, y, γ) with γ complex,
/// rank-one outer matrix, real normalization, certification.
pub fn random_point(rng: &mut impl Rng) -> Result<PlanePoint> {
    const ATTEMPTS: usize = 32;
    for _ in 0..ATTEMPTS {
        let v = random_parameter_vector(rng);
        if let Some(p) = point_from_parameters(&v) {
            return PlanePoint::try_new(p);
        }
    }
    Err(EjaError::SearchExhausted {
        what: "random plane point".into(),
        attempts: ATTEMPTS,
    })
}

fn random_bioctonion(rng: &mut impl Rng) -> Bioctonion {
    let mut re = [0.0; 8];
    let mut im = [0.0; 8];
    for c in re.iter_mut().chain(im.iter_mut()) {
        *c = rng.sample(StandardNormal);
    }
    Bioctonion {
        re: Octonion(re),
        im: Octonion(im),
    }
}

fn random_parameter_vector(rng: &mut impl Rng) -> [f64; 34] {
    let mut v = [0.0; 34];
    for c in v.iter_mut() {
        *c = rng.sample(StandardNormal);
    }
    v
}

/// (x, y, γ) packed as 16 + 16 + 2 reals.
pub fn parameters_to_vector(params: &[f64; 34]) -> [Bioctonion; 3] {
    let mut x_re = [0.0; 8];
    let mut x_im = [0.0; 8];
    let mut y_re = [0.0; 8];
    let mut y_im = [0.0; 8];
    x_re.copy_from_slice(&params[0..8]);
    x_im.copy_from_slice(&params[8..16]);
    y_re.copy_from_slice(&params[16..24]);
    y_im.copy_from_slice(&params[24..32]);
    [
        Bioctonion {
            re: Octonion(x_re),
            im: Octonion(x_im),
        },
        Bioctonion {
            re: Octonion(y_re),
            im: Octonion(y_im),
        },
        Bioctonion::complex(params[32], params[33]),
    ]
}

/// Normalized point matrix from sampler parameters; None when the outer
/// matrix is too small to normalize.
pub fn point_from_parameters(params: &[f64; 34]) -> Option<BioctMatrix> {
    let v = parameters_to_vector(params);
    let raw = outer_point_matrix(&v);
    let norm = bioct_norm(&raw);
    if norm < 1e-8 {
        return None;
    }
    Some(raw.scale(1.0 / norm))
}

// ---------------------------------------------------------------------------
// Quantum logic and states
// ---------------------------------------------------------------------------

/// Element of the quantum logic L = {0, points, lines, 𝕀}. A line is tagged
/// by the point it orthocomplements.
#[derive(Debug, Clone)]
pub enum LogicElement {
    Zero,
    Point(PlanePoint),
    Line(PlanePoint),
    Unit,
}

impl LogicElement {
    pub fn orthocomplement(&self) -> LogicElement {
        match self {
            LogicElement::Zero => LogicElement::Unit,
            LogicElement::Unit => LogicElement::Zero,
            LogicElement::Point(p) => LogicElement::Line(p.clone()),
            LogicElement::Line(p) => LogicElement::Point(p.clone()),
        }
    }
}

/// The line p̄⊥ of all points with ⟨p|q⟩ = 0.
pub fn line_of(p: &PlanePoint) -> LogicElement {
    LogicElement::Line(p.clone())
}

/// Membership of a point on a line, |⟨p|q⟩| ≤ 1e-9 (sign-independent).
pub fn on_line(q: &PlanePoint, line: &LogicElement) -> Result<bool> {
    match line {
        LogicElement::Line(p) => Ok(bioct_inner(p.rep(), q.rep()).abs() <= 1e-9),
        _ => Err(EjaError::Precondition("membership test needs a line".into())),
    }
}

/// State μ_p̄ anchored at a point.
#[derive(Debug, Clone)]
pub struct PlaneState {
    pub anchor: PlanePoint,
}

/// μ_p̄(q̄) = |⟨p|q⟩|, μ_p̄(q̄⊥) = 1 − |⟨p|q⟩|, μ(0) = 0, μ(𝕀) = 1.
pub fn state_eval(state: &PlaneState, v: &LogicElement) -> f64 {
    match v {
        LogicElement::Zero => 0.0,
        LogicElement::Unit => 1.0,
        LogicElement::Point(q) => plane_transition(&state.anchor, q).value(),
        LogicElement::Line(q) => 1.0 - plane_transition(&state.anchor, q).value(),
    }
}

/// ℙ(q̄|p̄) = |⟨p|q⟩|.
pub fn plane_transition(p: &PlanePoint, q: &PlanePoint) -> crate::metric::TransitionValue {
    crate::metric::TransitionValue::new(bioct_inner(p.rep(), q.rep()).abs())
}

/// d(p̄, q̄) = arccos(√|⟨p|q⟩|). Not normalized; (2/π)·d is.
pub fn plane_metric(p: &PlanePoint, q: &PlanePoint) -> f64 {
    plane_transition(p, q).value().sqrt().clamp(0.0, 1.0).acos()
}

// ---------------------------------------------------------------------------
// Subplane embeddings
// ---------------------------------------------------------------------------

/// Entrywise inclusion of H₃(K) into H₃(ℂ⊗𝕆): division-algebra coordinates
/// land in the leading octonion coordinates and the tensor-complex part
/// stays zero. In particular the complex unit of H₃(ℂ) maps to the first
/// imaginary octonion unit — it must anticommute with octonion conjugation
/// for the image to stay Hermitian, which the tensor-factor i would not.
pub fn embed_atom(alg: &JordanAlgebra, atom: &Element) -> Result<PlanePoint> {
    let (n, _k) = match &alg.descriptor {
        Descriptor::Matrix(n, k) => (*n, *k),
        other => {
            return Err(EjaError::UnsupportedStructure(format!(
                "subplane embeddings take H(3, K) atoms, got {other}"
            )))
        }
    };
    if n != 3 {
        return Err(EjaError::UnsupportedStructure(
            "subplane embeddings take 3×3 matrix algebras".into(),
        ));
    }
    if !alg.is_atom(atom) {
        return Err(EjaError::Precondition("subplane embeddings take atoms".into()));
    }
    let m = alg.element_to_matrix(atom)?;
    let mut out = BioctMatrix::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            out.e[i][j] = Bioctonion::from_octonion(Octonion::from_hyper(m.at(i, j)));
        }
    }
    PlanePoint::try_new(out)
}

/// Extracts the H₃(𝕆) element under a real-octonion plane matrix
/// (im parts ≈ 0); used to cross-check embedded points.
pub fn project_to_octonion_algebra(alg: &JordanAlgebra, m: &BioctMatrix) -> Result<Element> {
    let mut h = crate::hypercomplex::HMatrix::zeros(Division::Octonion, 3);
    let mut leak = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for c in m.e[i][j].im.0.iter() {
                leak = leak.max(c.abs());
            }
            *h.at_mut(i, j) =
                crate::hypercomplex::Hyper::new(Division::Octonion, m.e[i][j].re.0.to_vec())?;
        }
    }
    if leak > 1e-9 {
        return Err(EjaError::Precondition(format!(
            "matrix has tensor-complex components (max {leak:.3e})"
        )));
    }
    alg.matrix_to_element(&h)
}

// ---------------------------------------------------------------------------
// Formal-reality failure
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormalRealityWitness {
    pub min_trace_of_square: f64,
    pub witness_norm: f64,
    pub conclusive: bool,
}

/// Searches for x ≠ 0 with trace(x∘x) ≤ 0, which a Euclidean algebra could
/// never produce. Deterministic candidates along the zero-divisor
/// directions (i on the diagonal, the nilpotent (1 + e₁i)-type off-diagonal
/// units) are scanned along with random complex-direction samples.
pub fn formal_reality_failure(trials: u64, seed: u64) -> FormalRealityWitness {
    let mut best = f64::INFINITY;
    let mut best_norm = 0.0;
    let mut consider = |x: &BioctMatrix| {
        let norm = x.frob_norm();
        if norm < 1e-9 {
            return;
        }
        let sq = bioct_jordan_product(x, x);
        let (tr, _) = sq.trace_complex();
        let scaled = tr / (norm * norm);
        if scaled < best {
            best = scaled;
            best_norm = norm;
        }
    };
    // diag(i, 0, 0): trace(x∘x) = −1
    let mut d = BioctMatrix::ZERO;
    d.e[0][0] = Bioctonion::complex(0.0, 1.0);
    consider(&d);
    // nilpotent off-diagonal (1 + e₁⊗i) E₁₂ + (1 − e₁⊗i) E₂₁: x∘x = 0
    let z = Bioctonion {
        re: Octonion::one(),
        im: Octonion::unit(1),
    };
    let mut n = BioctMatrix::ZERO;
    n.e[0][1] = z;
    n.e[1][0] = z.oct_conj();
    consider(&n);
    // random scan biased toward complex-diagonal directions
    for i in 0..trials {
        let mut rng = crate::par::rng_for_trial(seed, i);
        let mut x = BioctMatrix::ZERO;
        for k in 0..3 {
            x.e[k][k] = Bioctonion::complex(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        let b = random_bioctonion(&mut rng);
        x.e[0][1] = b;
        x.e[1][0] = b.oct_conj();
        consider(&x);
    }
    FormalRealityWitness {
        min_trace_of_square: best,
        witness_norm: best_norm,
        conclusive: best <= 1e-12,
    }
}

// ---------------------------------------------------------------------------
// Midpoint search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MidpointSearchRecord {
    pub trial: u64,
    pub transition: f64,
    pub d_pq: f64,
    pub defect: f64,
    pub evaluations: u64,
    /// Best between point found, as its 27 complex coordinates.
    pub midpoint: Option<PlanePoint>,
}

/// Numerically minimizes |d(p,e) + d(e,q) − d(p,q)| over certified points e,
/// seeded with chords of the recovered rank-one parameters and refined by
/// two-point numerical gradients. Best-effort: returns the best point found
/// with its defect once the evaluation budget runs out.
pub fn plane_midpoint_search(
    p: &PlanePoint,
    q: &PlanePoint,
    budget: u64,
    seed: u64,
) -> (PlanePoint, f64, u64) {
    if p.same_point(q) {
        return (p.clone(), 0.0, 0);
    }
    let d_pq = plane_metric(p, q);
    let evals = std::cell::Cell::new(0u64);
    let objective = |params: &[f64; 34]| -> Option<(f64, BioctMatrix)> {
        evals.set(evals.get() + 1);
        let m = point_from_parameters(params)?;
        let e = PlanePoint { rep: m };
        let defect = (plane_metric(p, &e) + plane_metric(&e, q) - d_pq).abs();
        Some((defect, m))
    };

    let mut rng = crate::par::rng_for_trial(seed, 0);
    let mut seeds: Vec<[f64; 34]> = Vec::new();
    if let (Some(vp), Some(vq)) = (recover_parameters(p.rep()), recover_parameters(q.rep())) {
        // align the sign/phase of q's parameters with p's before averaging:
        // v, −v, iv, −iv all represent ±q
        let variants = [
            vq,
            scale_params(&vq, -1.0, 0.0),
            scale_params(&vq, 0.0, 1.0),
            scale_params(&vq, 0.0, -1.0),
        ];
        let best_variant = variants
            .iter()
            .max_by(|a, b| param_dot(&vp, a).partial_cmp(&param_dot(&vp, b)).unwrap())
            .unwrap();
        let mut chord = [0.0; 34];
        for k in 0..34 {
            chord[k] = 0.5 * (vp[k] + best_variant[k]);
        }
        seeds.push(chord);
        seeds.push(vp);
        seeds.push(*best_variant);
    }
    for _ in 0..4 {
        seeds.push(random_parameter_vector(&mut rng));
    }

    let mut best_defect = f64::INFINITY;
    let mut best_m = *p.rep();
    for seed_params in seeds {
        // seed candidates are always evaluated; only the descent is budgeted
        let mut params = seed_params;
        let mut current_val = match objective(&params) {
            Some((v, m)) => {
                if v < best_defect {
                    best_defect = v;
                    best_m = m;
                }
                v
            }
            None => continue,
        };
        let mut step = 0.05;
        while evals.get() + 70 < budget && step > 1e-10 && current_val > 1e-9 {
            // two-point numerical gradient
            let mut grad = [0.0; 34];
            let h = 1e-6;
            let mut valid = true;
            for k in 0..34 {
                let mut plus = params;
                plus[k] += h;
                let mut minus = params;
                minus[k] -= h;
                match (objective(&plus), objective(&minus)) {
                    (Some((fp, _)), Some((fm, _))) => grad[k] = (fp - fm) / (2.0 * h),
                    _ => {
                        valid = false;
                        break;
                    }
                }
            }
            if !valid {
                break;
            }
            let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if gnorm < 1e-14 {
                break;
            }
            let mut improved = false;
            let mut trial_step = step;
            for _ in 0..12 {
                let mut trial = params;
                for k in 0..34 {
                    trial[k] -= trial_step * grad[k] / gnorm;
                }
                if let Some((val, m)) = objective(&trial) {
                    if val < current_val {
                        params = trial;
                        current_val = val;
                        if val < best_defect {
                            best_defect = val;
                            best_m = m;
                        }
                        improved = true;
                        break;
                    }
                }
                trial_step *= 0.5;
                if evals.get() >= budget {
                    break;
                }
            }
            if improved {
                step = (trial_step * 2.0).min(0.2);
            } else {
                step *= 0.25;
            }
            if evals.get() >= budget {
                break;
            }
        }
        if best_defect <= 1e-9 {
            break;
        }
    }
    (
        PlanePoint {
            rep: canonical_sign(best_m),
        },
        best_defect,
        evals.get(),
    )
}

fn param_dot(a: &[f64; 34], b: &[f64; 34]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Parameters scaled by the complex number a + bi (applied to the whole
/// vector; the induced point picks up the factor (a + bi)²).
fn scale_params(v: &[f64; 34], a: f64, b: f64) -> [f64; 34] {
    let vec = parameters_to_vector(v);
    let mut out = [0.0; 34];
    let scaled: Vec<Bioctonion> = vec.iter().map(|x| x.scale_complex(a, b)).collect();
    out[0..8].copy_from_slice(&scaled[0].re.0);
    out[8..16].copy_from_slice(&scaled[0].im.0);
    out[16..24].copy_from_slice(&scaled[1].re.0);
    out[24..32].copy_from_slice(&scaled[1].im.0);
    let (gr, gi) = scaled[2].complex_part();
    out[32] = gr;
    out[33] = gi;
    out
}

/// Principal complex square root.
fn complex_sqrt(a: f64, b: f64) -> (f64, f64) {
    let r = (a * a + b * b).sqrt();
    let re = ((r + a) / 2.0).max(0.0).sqrt();
    let im = ((r - a) / 2.0).max(0.0).sqrt() * if b < 0.0 { -1.0 } else { 1.0 };
    (re, im)
}

/// Recovers sampler parameters from a point matrix through its third column.
/// For a rank-one m the column is v scaled by the complex entry m₃₃ on the
/// right, so dividing by a complex square root of m₃₃ reproduces parameters
/// whose outer matrix is m itself (up to the irrelevant ±v ambiguity).
/// Returns None when the (3,3) entry is too small to divide by.
fn recover_parameters(m: &BioctMatrix) -> Option<[f64; 34]> {
    let (zr, zi) = m.e[2][2].complex_part();
    let zmod = (zr * zr + zi * zi).sqrt();
    if zmod < 1e-8 {
        return None;
    }
    let (sr, si) = complex_sqrt(zr, zi);
    // 1 / sqrt(z)
    let denom = sr * sr + si * si;
    let (ir, ii) = (sr / denom, -si / denom);
    let col = [m.e[0][2], m.e[1][2], m.e[2][2]];
    let v: Vec<Bioctonion> = col.iter().map(|c| c.scale_complex(ir, ii)).collect();
    let mut params = [0.0; 34];
    params[0..8].copy_from_slice(&v[0].re.0);
    params[8..16].copy_from_slice(&v[0].im.0);
    params[16..24].copy_from_slice(&v[1].re.0);
    params[24..32].copy_from_slice(&v[1].im.0);
    let (gr, gi) = v[2].complex_part();
    params[32] = gr;
    params[33] = gi;
    Some(params)
}
