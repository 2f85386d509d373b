//! Finite-dimensional Euclidean Jordan algebras realized over a fixed
//! orthogonal basis with a precomputed structure-constant tensor.
//!
//! Families: spin factors spin(n) on ℝ ⊕ ℝⁿ, Hermitian matrix algebras
//! H(n, K) for K ∈ {ℝ, ℂ, ℍ} and H(n ≤ 3, 𝕆), and direct sums. Matrix
//! algebra structure constants come from the exact symbolic products of the
//! basis elements (diagonal units E_ii and symmetrized off-diagonal units
//! u E_ij + ū E_ji), so every tensor entry is one of 0, ±1, ±1/2.
//!
//! Conventions: the trace functional is normalized so every atom has trace 1,
//! hence trace(unit) = rank; for spin factors trace(s, x) = 2s. H(n, 𝕆)
//! matrices are Hermitian with diagonal entries real and entry (j, i) the
//! octonion conjugate of entry (i, j).

use crate::error::{EjaError, Result};
use crate::hypercomplex::{Division, HMatrix, Hyper};
use crate::linalg::{vec_dot, vec_norm, vec_scale, vec_sub, Mat};
use rand::Rng;
use rand_distr::StandardNormal;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

pub mod tol {
    /// ‖p∘p − p‖ bound (trace norm) for idempotency.
    pub const IDEMPOTENT: f64 = 1e-9;
    /// Singular-value cutoff for the rank of y ↦ {p, y, p}.
    pub const ATOM_RANK_CUTOFF: f64 = 1e-8;
    /// Two atoms are considered equal when ‖p − q‖ is below this.
    pub const ATOM_EQ: f64 = 1e-9;
}

/// Compact description of an algebra: spin factor, Hermitian matrix algebra,
/// or a direct sum of simple ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Descriptor {
    Spin(usize),
    Matrix(usize, Division),
    Sum(Vec<Descriptor>),
}

impl Descriptor {
    /// Parses "spin(n)", "H(n,R|C|H|O)" and "sum(...,...)" (nested sums are
    /// flattened).
    pub fn parse(text: &str) -> Result<Descriptor> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let d = parse_descriptor(&s)?;
        d.validate()?;
        Ok(d.flatten())
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Descriptor::Spin(n) => {
                if *n == 0 {
                    return Err(EjaError::UnsupportedStructure("spin(0) has no vector part".into()));
                }
            }
            Descriptor::Matrix(n, k) => {
                if *n == 0 {
                    return Err(EjaError::UnsupportedStructure("H(0, ·) is empty".into()));
                }
                if *k == Division::Octonion && *n > 3 {
                    return Err(EjaError::UnsupportedStructure(format!(
                        "H({n}, O) is not a Jordan algebra; octonion matrices stop at n = 3"
                    )));
                }
            }
            Descriptor::Sum(parts) => {
                if parts.is_empty() {
                    return Err(EjaError::UnsupportedStructure("empty direct sum".into()));
                }
                for p in parts {
                    p.validate()?;
                }
            }
        }
        Ok(())
    }

    fn flatten(self) -> Descriptor {
        match self {
            Descriptor::Sum(parts) => {
                let mut flat = Vec::new();
                for p in parts {
                    match p.flatten() {
                        Descriptor::Sum(inner) => flat.extend(inner),
                        simple => flat.push(simple),
                    }
                }
                Descriptor::Sum(flat)
            }
            other => other,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Descriptor::Spin(n) => n + 1,
            Descriptor::Matrix(n, k) => n + k.dim() * n * (n - 1) / 2,
            Descriptor::Sum(parts) => parts.iter().map(|p| p.dim()).sum(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Descriptor::Spin(_) => 2,
            Descriptor::Matrix(n, _) => *n,
            Descriptor::Sum(parts) => parts.iter().map(|p| p.rank()).sum(),
        }
    }

    /// spin(1) is excluded: it is isomorphic to ℝ ⊕ ℝ, so orthogonal atoms
    /// there are not strongly connected.
    pub fn is_simple(&self) -> bool {
        match self {
            Descriptor::Sum(_) => false,
            Descriptor::Spin(n) => *n >= 2,
            Descriptor::Matrix(_, _) => true,
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Spin(n) => write!(f, "spin({n})"),
            Descriptor::Matrix(n, k) => write!(f, "H({n},{})", k.tag()),
            Descriptor::Sum(parts) => {
                write!(f, "sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn parse_descriptor(s: &str) -> Result<Descriptor> {
    let err = || EjaError::Parse(format!("cannot parse descriptor `{s}`"));
    if let Some(rest) = s.strip_prefix("spin(").and_then(|r| r.strip_suffix(')')) {
        let n: usize = rest.parse().map_err(|_| err())?;
        return Ok(Descriptor::Spin(n));
    }
    let matrix_body = s
        .strip_prefix("H(")
        .or_else(|| s.strip_prefix("h("))
        .and_then(|r| r.strip_suffix(')'));
    if let Some(body) = matrix_body {
        let (n_str, tag) = body.split_once(',').ok_or_else(err)?;
        let n: usize = n_str.parse().map_err(|_| err())?;
        return Ok(Descriptor::Matrix(n, Division::from_tag(tag)?));
    }
    if let Some(body) = s.strip_prefix("sum(").and_then(|r| r.strip_suffix(')')) {
        let mut parts = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        for (i, c) in body.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.checked_sub(1).ok_or_else(err)?,
                ',' if depth == 0 => {
                    parts.push(parse_descriptor(&body[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if start > body.len() || body[start..].is_empty() {
            return Err(err());
        }
        parts.push(parse_descriptor(&body[start..])?);
        return Ok(Descriptor::Sum(parts));
    }
    Err(err())
}

/// An element of a built algebra: its coefficient vector against the basis,
/// tagged with the owning algebra's fingerprint.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub(crate) fp: u64,
    pub coeffs: Vec<f64>,
}

impl Element {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// A realized Euclidean Jordan algebra: fixed basis, structure tensor,
/// trace functional and trace-form Gram matrix.
#[derive(Debug, Clone)]
pub struct JordanAlgebra {
    pub descriptor: Descriptor,
    pub dim: usize,
    pub rank: usize,
    fingerprint: u64,
    /// S[i·d² + j·d + k]: e_i ∘ e_j = Σ_k S_ijk e_k
    tensor: Vec<f64>,
    unit: Vec<f64>,
    trace_vec: Vec<f64>,
    gram: Mat,
    pub basis_labels: Vec<String>,
    /// Simple summands as (offset, descriptor); a simple algebra is its own
    /// single summand.
    pub summands: Vec<(usize, Descriptor)>,
}

pub fn build_algebra(descriptor: &Descriptor) -> Result<JordanAlgebra> {
    JordanAlgebra::build(descriptor.clone())
}

impl JordanAlgebra {
    pub fn parse(text: &str) -> Result<JordanAlgebra> {
        JordanAlgebra::build(Descriptor::parse(text)?)
    }

    pub fn build(descriptor: Descriptor) -> Result<JordanAlgebra> {
        descriptor.validate()?;
        let descriptor = descriptor.flatten();
        let dim = descriptor.dim();
        let mut tensor = vec![0.0; dim * dim * dim];
        let mut unit = vec![0.0; dim];
        let mut trace_vec = vec![0.0; dim];
        let mut basis_labels = Vec::with_capacity(dim);
        let mut summands = Vec::new();

        let parts: Vec<Descriptor> = match &descriptor {
            Descriptor::Sum(parts) => parts.clone(),
            simple => vec![simple.clone()],
        };
        let multi = parts.len() > 1;
        let mut offset = 0usize;
        for (s_idx, part) in parts.iter().enumerate() {
            let block = SimpleBlock::build(part)?;
            let bd = block.dim;
            for i in 0..bd {
                for j in 0..bd {
                    for k in 0..bd {
                        tensor[(offset + i) * dim * dim + (offset + j) * dim + (offset + k)] =
                            block.tensor[i * bd * bd + j * bd + k];
                    }
                }
            }
            for i in 0..bd {
                unit[offset + i] = block.unit[i];
                trace_vec[offset + i] = block.trace_vec[i];
                let label = if multi {
                    format!("A{}.{}", s_idx + 1, block.labels[i])
                } else {
                    block.labels[i].clone()
                };
                basis_labels.push(label);
            }
            summands.push((offset, part.clone()));
            offset += bd;
        }

        let mut hasher = DefaultHasher::new();
        descriptor.to_string().hash(&mut hasher);
        let fingerprint = hasher.finish();

        let mut alg = JordanAlgebra {
            rank: descriptor.rank(),
            descriptor,
            dim,
            fingerprint,
            tensor,
            unit,
            trace_vec,
            gram: Mat::zeros(dim, dim),
            basis_labels,
            summands,
        };
        let mut gram = Mat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                gram[(i, j)] = vec_dot(&alg.trace_vec, alg.tensor_row(i, j));
            }
        }
        alg.gram = gram;
        Ok(alg)
    }

    fn tensor_row(&self, i: usize, j: usize) -> &[f64] {
        let d = self.dim;
        &self.tensor[i * d * d + j * d..i * d * d + j * d + d]
    }

    /// Raw structure constant S_ijk.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.tensor[i * self.dim * self.dim + j * self.dim + k]
    }

    pub fn is_simple(&self) -> bool {
        self.descriptor.is_simple()
    }

    pub fn element(&self, coeffs: Vec<f64>) -> Result<Element> {
        if coeffs.len() != self.dim {
            return Err(EjaError::DimensionMismatch {
                expected: self.dim,
                got: coeffs.len(),
            });
        }
        Ok(Element {
            fp: self.fingerprint,
            coeffs,
        })
    }

    pub fn zero(&self) -> Element {
        Element {
            fp: self.fingerprint,
            coeffs: vec![0.0; self.dim],
        }
    }

    pub fn unit_element(&self) -> Element {
        Element {
            fp: self.fingerprint,
            coeffs: self.unit.clone(),
        }
    }

    pub fn basis_element(&self, k: usize) -> Element {
        let mut coeffs = vec![0.0; self.dim];
        coeffs[k] = 1.0;
        Element {
            fp: self.fingerprint,
            coeffs,
        }
    }

    pub fn owns(&self, a: &Element) -> bool {
        a.fp == self.fingerprint && a.coeffs.len() == self.dim
    }

    fn check(&self, a: &Element) -> Result<()> {
        if !self.owns(a) {
            return Err(EjaError::AlgebraMismatch);
        }
        Ok(())
    }

    pub(crate) fn mul_coeffs(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for i in 0..d {
            let ai = a[i];
            if ai == 0.0 {
                continue;
            }
            let base = i * d * d;
            for j in 0..d {
                let w = ai * b[j];
                if w == 0.0 {
                    continue;
                }
                let row = &self.tensor[base + j * d..base + j * d + d];
                for (o, s) in out.iter_mut().zip(row) {
                    *o += w * s;
                }
            }
        }
        out
    }

    /// Jordan product a ∘ b.
    pub fn product(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element {
            fp: self.fingerprint,
            coeffs: self.mul_coeffs(&a.coeffs, &b.coeffs),
        })
    }

    pub fn square(&self, a: &Element) -> Result<Element> {
        self.product(a, a)
    }

    /// Triple product {x, y, x} = 2 x∘(x∘y) − x²∘y.
    pub fn triple(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        let xy = self.mul_coeffs(&x.coeffs, &y.coeffs);
        let xxy = self.mul_coeffs(&x.coeffs, &xy);
        let xx = self.mul_coeffs(&x.coeffs, &x.coeffs);
        let xxy2 = self.mul_coeffs(&xx, &y.coeffs);
        let coeffs = xxy.iter().zip(&xxy2).map(|(a, b)| 2.0 * a - b).collect();
        Ok(Element {
            fp: self.fingerprint,
            coeffs,
        })
    }

    pub fn trace(&self, a: &Element) -> f64 {
        vec_dot(&self.trace_vec, &a.coeffs)
    }

    /// Trace form ⟨a, b⟩ = trace(a ∘ b), evaluated through the Gram matrix.
    pub fn inner(&self, a: &Element, b: &Element) -> f64 {
        let gb = self.gram.matvec(&b.coeffs);
        vec_dot(&a.coeffs, &gb)
    }

    /// Trace norm √⟨a, a⟩.
    pub fn norm(&self, a: &Element) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        Element {
            fp: self.fingerprint,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        Element {
            fp: self.fingerprint,
            coeffs: vec_sub(&a.coeffs, &b.coeffs),
        }
    }

    pub fn scale(&self, a: &Element, s: f64) -> Element {
        Element {
            fp: self.fingerprint,
            coeffs: vec_scale(&a.coeffs, s),
        }
    }

    /// Matrix of the multiplication operator L_a : y ↦ a ∘ y.
    pub fn lmul_matrix(&self, a: &Element) -> Mat {
        let d = self.dim;
        let mut m = Mat::zeros(d, d);
        for i in 0..d {
            let ai = a.coeffs[i];
            if ai == 0.0 {
                continue;
            }
            for j in 0..d {
                let row = self.tensor_row(i, j);
                for k in 0..d {
                    m[(k, j)] += ai * row[k];
                }
            }
        }
        m
    }

    /// Matrix of the quadratic map y ↦ {a, y, a} = (2L_a² − L_{a²}) y.
    pub fn quad_matrix(&self, a: &Element) -> Mat {
        let la = self.lmul_matrix(a);
        let aa = Element {
            fp: self.fingerprint,
            coeffs: self.mul_coeffs(&a.coeffs, &a.coeffs),
        };
        let laa = self.lmul_matrix(&aa);
        la.matmul(&la).scale(2.0).sub(&laa)
    }

    pub fn idempotency_residual(&self, a: &Element) -> f64 {
        let sq = self.mul_coeffs(&a.coeffs, &a.coeffs);
        let diff = Element {
            fp: self.fingerprint,
            coeffs: vec_sub(&sq, &a.coeffs),
        };
        self.norm(&diff)
    }

    pub fn is_idempotent(&self, a: &Element) -> bool {
        self.owns(a) && self.idempotency_residual(a) <= tol::IDEMPOTENT
    }

    /// An atom is an idempotent whose quadratic map has rank one.
    pub fn is_atom(&self, a: &Element) -> bool {
        if !self.is_idempotent(a) {
            return false;
        }
        if self.norm(a) < 0.5 {
            return false; // zero is idempotent but not an atom
        }
        self.quad_matrix(a).rank_with_cutoff(tol::ATOM_RANK_CUTOFF) == 1
    }

    /// Peirce projections (P₁, P_½, P₀) of an idempotent, by Lagrange
    /// interpolation in L_p over the spectrum {1, 1/2, 0}.
    pub fn peirce_projections(&self, p: &Element) -> Result<(Mat, Mat, Mat)> {
        self.check(p)?;
        let residual = self.idempotency_residual(p);
        if residual > tol::IDEMPOTENT {
            return Err(EjaError::NotIdempotent { residual });
        }
        let l = self.lmul_matrix(p);
        let l2 = l.matmul(&l);
        let id = Mat::identity(self.dim);
        let p1 = l2.scale(2.0).sub(&l);
        let ph = l.scale(4.0).sub(&l2.scale(4.0));
        let p0 = l2.scale(2.0).sub(&l.scale(3.0)).add(&id);
        Ok((p1, ph, p0))
    }

    /// Dimensions of the three Peirce eigenspaces (traces of the projections).
    pub fn peirce_dimensions(&self, p: &Element) -> Result<(usize, usize, usize)> {
        let (p1, ph, p0) = self.peirce_projections(p)?;
        let tr = |m: &Mat| -> usize {
            let t: f64 = (0..self.dim).map(|i| m[(i, i)]).sum();
            t.round() as usize
        };
        Ok((tr(&p1), tr(&ph), tr(&p0)))
    }

    /// Gaussian random element.
    pub fn random_element(&self, rng: &mut impl Rng) -> Element {
        Element {
            fp: self.fingerprint,
            coeffs: (0..self.dim).map(|_| rng.sample(StandardNormal)).collect(),
        }
    }

    /// Random atom. Spin factors sample a uniform sphere direction, matrix
    /// algebras over ℝ/ℂ/ℍ project a random unit vector, and the octonion
    /// algebras push a diagonal unit through a random derivation exponential.
    /// In a direct sum the atom lands in a uniformly chosen summand.
    pub fn random_atom(&self, rng: &mut impl Rng) -> Result<Element> {
        match &self.descriptor {
            Descriptor::Spin(n) => {
                let mut u: Vec<f64> = (0..*n).map(|_| rng.sample(StandardNormal)).collect();
                let nu = vec_norm(&u);
                if nu < 1e-12 {
                    u[0] = 1.0;
                } else {
                    u = vec_scale(&u, 1.0 / nu);
                }
                let mut coeffs = vec![0.0; self.dim];
                coeffs[0] = 0.5;
                for (i, v) in u.iter().enumerate() {
                    coeffs[1 + i] = 0.5 * v;
                }
                self.element(coeffs)
            }
            Descriptor::Matrix(n, k) if *k != Division::Octonion => {
                let v = random_unit_vector(*k, *n, rng);
                let m = rank_one_projection(*k, &v);
                self.matrix_to_element(&m)
            }
            Descriptor::Matrix(_, _) => {
                // octonion family: transport a diagonal unit by automorphisms
                for _ in 0..8 {
                    let k = rng.random_range(0..self.rank);
                    let start = self.basis_element(k);
                    let t = self.random_derivation_exponential(rng, 1.0);
                    let moved = self.element(t.matvec(&start.coeffs))?;
                    if self.is_atom(&moved) {
                        return Ok(moved);
                    }
                }
                Err(EjaError::SearchExhausted {
                    what: "random octonion atom".into(),
                    attempts: 8,
                })
            }
            Descriptor::Sum(_) => {
                let pick = rng.random_range(0..self.summands.len());
                let (offset, desc) = self.summands[pick].clone();
                let child = JordanAlgebra::build(desc)?;
                let atom = child.random_atom(rng)?;
                let mut coeffs = vec![0.0; self.dim];
                coeffs[offset..offset + child.dim].copy_from_slice(&atom.coeffs);
                self.element(coeffs)
            }
        }
    }

    /// exp(t[L_a, L_b]) for Gaussian a, b scaled by 1/dim. The commutator of
    /// multiplication operators is a derivation, so this is an automorphism
    /// of the connected component; certification happens elsewhere.
    pub fn random_derivation_exponential(&self, rng: &mut impl Rng, t: f64) -> Mat {
        let a = self.random_element(rng);
        let b = self.random_element(rng);
        self.derivation_exponential_matrix(&a, &b, t)
    }

    pub fn derivation_exponential_matrix(&self, a: &Element, b: &Element, t: f64) -> Mat {
        let la = self.lmul_matrix(a);
        let lb = self.lmul_matrix(b);
        let comm = la.matmul(&lb).sub(&lb.matmul(&la));
        comm.scale(t / self.dim as f64).expm()
    }

    /// Extracts an atom below the idempotent `c` by repeated squaring of a
    /// random positive element of the subalgebra {c, A, c}: squaring drives
    /// the spectrum to its dominant projection.
    pub fn atom_below(&self, c: &Element, rng: &mut impl Rng) -> Result<Element> {
        self.check(c)?;
        let tc = self.trace(c);
        if tc < 0.5 {
            return Err(EjaError::NotAtom);
        }
        if (tc - 1.0).abs() < 1e-6 && self.is_atom(c) {
            return Ok(c.clone());
        }
        let qc = self.quad_matrix(c);
        let attempts = 24;
        for _ in 0..attempts {
            let x = self.random_element(rng);
            let xc = Element {
                fp: self.fingerprint,
                coeffs: qc.matvec(&x.coeffs),
            };
            let shift = self.norm(&xc) + 1.0;
            let mut y = self.add(&xc, &self.scale(c, shift));
            let ny = self.norm(&y);
            if ny < 1e-9 {
                continue;
            }
            y = self.scale(&y, 1.0 / ny);
            for _ in 0..80 {
                let sq = self.mul_coeffs(&y.coeffs, &y.coeffs);
                let mut z = Element {
                    fp: self.fingerprint,
                    coeffs: sq,
                };
                let nz = self.norm(&z);
                if nz < 1e-300 {
                    break;
                }
                z = self.scale(&z, 1.0 / nz);
                let drift = self.norm(&self.sub(&z, &y));
                y = z;
                if drift < 1e-16 {
                    break;
                }
            }
            // y ≈ q/√trace(q) for the dominant spectral projection q
            let candidate = self.scale(&y, self.trace(&y));
            if self.is_atom(&candidate) {
                return Ok(candidate);
            }
            let t = self.trace(&candidate).round();
            if t >= 2.0 && self.idempotency_residual(&candidate) <= tol::IDEMPOTENT {
                // dominant eigenvalue was degenerate; recurse inside
                if let Ok(atom) = self.atom_below(&candidate, rng) {
                    return Ok(atom);
                }
            }
        }
        Err(EjaError::SearchExhausted {
            what: "atom below idempotent".into(),
            attempts,
        })
    }

    /// A pair of orthogonal atoms (requires rank ≥ 2).
    pub fn random_orthogonal_atoms(&self, rng: &mut impl Rng) -> Result<(Element, Element)> {
        if self.rank < 2 {
            return Err(EjaError::UnsupportedStructure(
                "rank-1 algebra has no orthogonal atom pair".into(),
            ));
        }
        let p = self.random_atom(rng)?;
        let c = self.sub(&self.unit_element(), &p);
        let q = self.atom_below(&c, rng)?;
        Ok((p, q))
    }

    /// Length of a greedily built maximal chain of pairwise orthogonal atoms.
    pub fn orthogonal_rank(&self, rng: &mut impl Rng) -> Result<usize> {
        let mut c = self.unit_element();
        let mut count = 0usize;
        while self.trace(&c) > 0.5 && count <= self.dim {
            let p = self.atom_below(&c, rng)?;
            c = self.sub(&c, &p);
            count += 1;
        }
        Ok(count)
    }

    // -- matrix representation (matrix families only) -----------------------

    fn matrix_family(&self) -> Result<(usize, Division)> {
        match &self.descriptor {
            Descriptor::Matrix(n, k) => Ok((*n, *k)),
            other => Err(EjaError::UnsupportedStructure(format!(
                "{other} has no Hermitian matrix representation"
            ))),
        }
    }

    /// Hermitian matrix for basis index `idx`.
    pub fn basis_matrix(&self, idx: usize) -> Result<HMatrix> {
        let (n, k) = self.matrix_family()?;
        let mut m = HMatrix::zeros(k, n);
        if idx < n {
            *m.at_mut(idx, idx) = Hyper::one(k);
            return Ok(m);
        }
        let (i, j, u) = off_diag_position(n, k, idx);
        let unit = Hyper::unit(k, u);
        *m.at_mut(i, j) = unit.clone();
        *m.at_mut(j, i) = unit.conj();
        Ok(m)
    }

    pub fn element_to_matrix(&self, a: &Element) -> Result<HMatrix> {
        self.check(a)?;
        let (n, k) = self.matrix_family()?;
        let mut m = HMatrix::zeros(k, n);
        for (idx, &c) in a.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let b = self.basis_matrix(idx)?;
            m = m.add(&b.scale(c));
        }
        Ok(m)
    }

    pub fn matrix_to_element(&self, m: &HMatrix) -> Result<Element> {
        let (n, k) = self.matrix_family()?;
        assert_eq!(m.n, n);
        assert_eq!(m.level, k);
        let mut coeffs = vec![0.0; self.dim];
        for (idx, c) in coeffs.iter_mut().enumerate() {
            let b = self.basis_matrix(idx)?;
            // diagonal units have Frobenius norm² 1, symmetrized ones 2
            *c = m.frob_dot(&b) / b.frob_dot(&b);
        }
        self.element(coeffs)
    }

    // -- direct-sum block helpers -------------------------------------------

    /// Euclidean norms of the element's components in each summand block.
    pub fn block_norms(&self, a: &Element) -> Vec<f64> {
        self.summands
            .iter()
            .map(|(offset, desc)| {
                let d = desc.dim();
                vec_norm(&a.coeffs[*offset..*offset + d])
            })
            .collect()
    }

    /// Embeds a coefficient vector of summand `idx` into the sum.
    pub fn embed_block(&self, idx: usize, coeffs: &[f64]) -> Result<Element> {
        let (offset, desc) = &self.summands[idx];
        if coeffs.len() != desc.dim() {
            return Err(EjaError::DimensionMismatch {
                expected: desc.dim(),
                got: coeffs.len(),
            });
        }
        let mut full = vec![0.0; self.dim];
        full[*offset..*offset + coeffs.len()].copy_from_slice(coeffs);
        self.element(full)
    }
}

fn off_diag_position(n: usize, k: Division, idx: usize) -> (usize, usize, usize) {
    let kd = k.dim();
    let mut rest = idx - n;
    for i in 0..n {
        for j in (i + 1)..n {
            if rest < kd {
                return (i, j, rest);
            }
            rest -= kd;
        }
    }
    unreachable!("basis index out of range")
}

fn random_unit_vector(k: Division, n: usize, rng: &mut impl Rng) -> Vec<Hyper> {
    loop {
        let v: Vec<Hyper> = (0..n)
            .map(|_| Hyper {
                level: k,
                coords: (0..k.dim()).map(|_| rng.sample(StandardNormal)).collect(),
            })
            .collect();
        let norm: f64 = v.iter().map(|h| h.norm_form()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.iter().map(|h| h.scale(1.0 / norm)).collect();
        }
    }
}

/// v v† as a Hermitian matrix (associative division algebras only).
fn rank_one_projection(k: Division, v: &[Hyper]) -> HMatrix {
    let n = v.len();
    let mut m = HMatrix::zeros(k, n);
    for i in 0..n {
        for j in 0..n {
            *m.at_mut(i, j) = &v[i] * &v[j].conj();
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Structure constants of the simple families.
// ---------------------------------------------------------------------------

struct SimpleBlock {
    dim: usize,
    tensor: Vec<f64>,
    unit: Vec<f64>,
    trace_vec: Vec<f64>,
    labels: Vec<String>,
}

impl SimpleBlock {
    fn build(desc: &Descriptor) -> Result<SimpleBlock> {
        match desc {
            Descriptor::Spin(n) => Ok(Self::spin(*n)),
            Descriptor::Matrix(n, k) => Ok(Self::matrix(*n, *k)),
            Descriptor::Sum(_) => unreachable!("sums are flattened before block construction"),
        }
    }

    fn spin(n: usize) -> SimpleBlock {
        let d = n + 1;
        let mut tensor = vec![0.0; d * d * d];
        let mut set = |i: usize, j: usize, k: usize, v: f64| tensor[i * d * d + j * d + k] = v;
        set(0, 0, 0, 1.0);
        for k in 1..d {
            set(0, k, k, 1.0);
            set(k, 0, k, 1.0);
            set(k, k, 0, 1.0);
        }
        let mut unit = vec![0.0; d];
        unit[0] = 1.0;
        let mut trace_vec = vec![0.0; d];
        trace_vec[0] = 2.0;
        let mut labels = vec!["s".to_string()];
        labels.extend((1..d).map(|k| format!("x{k}")));
        SimpleBlock {
            dim: d,
            tensor,
            unit,
            trace_vec,
            labels,
        }
    }

    fn matrix(n: usize, k: Division) -> SimpleBlock {
        let kd = k.dim();
        let d = n + kd * n * (n - 1) / 2;
        let units = UnitAlgebra::new(k);
        let index_of = |sym: &Sym| -> usize {
            match sym {
                Sym::Diag(i) => *i,
                Sym::Off(i, j, u) => {
                    let mut idx = n;
                    for a in 0..n {
                        for b in (a + 1)..n {
                            if (a, b) == (*i, *j) {
                                return idx + u;
                            }
                            idx += kd;
                        }
                    }
                    unreachable!()
                }
            }
        };
        let mut basis: Vec<Sym> = (0..n).map(Sym::Diag).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                for u in 0..kd {
                    basis.push(Sym::Off(i, j, u));
                }
            }
        }
        let mut tensor = vec![0.0; d * d * d];
        for (a, sa) in basis.iter().enumerate() {
            for (b, sb) in basis.iter().enumerate() {
                for (coeff, sym) in symbolic_product(sa, sb, &units) {
                    let c = index_of(&sym);
                    tensor[a * d * d + b * d + c] += coeff;
                }
            }
        }
        let mut unit = vec![0.0; d];
        let mut trace_vec = vec![0.0; d];
        for i in 0..n {
            unit[i] = 1.0;
            trace_vec[i] = 1.0;
        }
        let mut labels: Vec<String> = (0..n).map(|i| format!("E{}{}", i + 1, i + 1)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                for u in 0..kd {
                    labels.push(format!("S{}{}.e{}", i + 1, j + 1, u));
                }
            }
        }
        SimpleBlock {
            dim: d,
            tensor,
            unit,
            trace_vec,
            labels,
        }
    }
}

/// Basis symbols of a Hermitian matrix algebra: E_ii and u E_ij + ū E_ji
/// with i < j and u a division-algebra unit.
#[derive(Debug, Clone, PartialEq)]
enum Sym {
    Diag(usize),
    Off(usize, usize, usize),
}

/// Signed unit of the division algebra.
#[derive(Debug, Clone, Copy)]
struct SignedUnit {
    idx: usize,
    sign: f64,
}

struct UnitAlgebra {
    /// table[i][j] = e_i e_j
    table: Vec<Vec<SignedUnit>>,
}

impl UnitAlgebra {
    fn new(k: Division) -> UnitAlgebra {
        let kd = k.dim();
        let mut table = vec![Vec::with_capacity(kd); kd];
        for i in 0..kd {
            for j in 0..kd {
                let p = &Hyper::unit(k, i) * &Hyper::unit(k, j);
                let idx = p.coords.iter().position(|c| c.abs() > 0.5).unwrap();
                table[i].push(SignedUnit {
                    idx,
                    sign: p.coords[idx],
                });
            }
        }
        UnitAlgebra { table }
    }

    fn mul(&self, a: SignedUnit, b: SignedUnit) -> SignedUnit {
        let t = self.table[a.idx][b.idx];
        SignedUnit {
            idx: t.idx,
            sign: t.sign * a.sign * b.sign,
        }
    }

    fn conj(&self, a: SignedUnit) -> SignedUnit {
        if a.idx == 0 {
            a
        } else {
            SignedUnit {
                idx: a.idx,
                sign: -a.sign,
            }
        }
    }
}

/// Exact Jordan product of two basis symbols:
///   E_ii ∘ E_ii = E_ii,          E_ii ∘ E_jj = 0,
///   E_kk ∘ T_ij(u) = (δ_ki + δ_kj)/2 · T_ij(u),
///   T_ij(u) ∘ T_ij(v) = Re(u v̄) (E_ii + E_jj),
///   T_as(u) ∘ T_sb(v) = 1/2 · T_ab(u v)   for distinct a, s, b,
/// where T_ij(u) = u E_ij + ū E_ji and T_ji(u) = T_ij(ū).
fn symbolic_product(a: &Sym, b: &Sym, units: &UnitAlgebra) -> Vec<(f64, Sym)> {
    let unit = |u: usize| SignedUnit { idx: u, sign: 1.0 };
    match (a, b) {
        (Sym::Diag(i), Sym::Diag(j)) => {
            if i == j {
                vec![(1.0, Sym::Diag(*i))]
            } else {
                vec![]
            }
        }
        (Sym::Diag(kk), Sym::Off(i, j, u)) | (Sym::Off(i, j, u), Sym::Diag(kk)) => {
            let mut w = 0.0;
            if kk == i {
                w += 0.5;
            }
            if kk == j {
                w += 0.5;
            }
            if w == 0.0 {
                vec![]
            } else {
                vec![(w, Sym::Off(*i, *j, *u))]
            }
        }
        (Sym::Off(i1, j1, u), Sym::Off(i2, j2, v)) => {
            if (i1, j1) == (i2, j2) {
                // Re(u v̄) is 1 for equal units, 0 otherwise
                if u == v {
                    vec![(1.0, Sym::Diag(*i1)), (1.0, Sym::Diag(*j1))]
                } else {
                    vec![]
                }
            } else if i1 != i2 && i1 != j2 && j1 != i2 && j1 != j2 {
                vec![]
            } else {
                // exactly one shared index s; orient both factors through it
                let (s, a_out, w1) = if j1 == i2 || j1 == j2 {
                    (*j1, *i1, unit(*u))
                } else {
                    (*i1, *j1, units.conj(unit(*u)))
                };
                let (b_out, w2) = if *i2 == s {
                    (*j2, unit(*v))
                } else {
                    (*i2, units.conj(unit(*v)))
                };
                debug_assert!(a_out != b_out);
                let w = units.mul(w1, w2);
                let (lo, hi, w) = if a_out < b_out {
                    (a_out, b_out, w)
                } else {
                    (b_out, a_out, units.conj(w))
                };
                vec![(0.5 * w.sign, Sym::Off(lo, hi, w.idx))]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn descriptor_parse_and_display() {
        for text in ["spin(5)", "H(3,O)", "sum(spin(3),H(3,C))", "sum(H(2,R),H(2,R))"] {
            let d = Descriptor::parse(text).unwrap();
            assert_eq!(d.to_string(), text);
        }
        assert!(Descriptor::parse("H(4,O)").is_err());
        assert!(Descriptor::parse("ring(3)").is_err());
        assert!(Descriptor::parse("sum()").is_err());
        // spin(1) parses but is the two-outcome classical algebra, not simple
        let s1 = Descriptor::parse("spin(1)").unwrap();
        assert!(!s1.is_simple());
        assert!(Descriptor::parse("spin(4)").unwrap().is_simple());
        // nested sums flatten
        let d = Descriptor::parse("sum(sum(spin(2),spin(3)),H(2,C))").unwrap();
        assert_eq!(d.to_string(), "sum(spin(2),spin(3),H(2,C))");
    }

    #[test]
    fn dimensions_and_ranks() {
        let cases = [
            ("spin(2)", 3, 2),
            ("spin(8)", 9, 2),
            ("H(2,R)", 3, 2),
            ("H(3,C)", 9, 3),
            ("H(4,H)", 28, 4),
            ("H(3,O)", 27, 3),
            ("sum(spin(3),H(3,R))", 4 + 6, 5),
        ];
        for (text, dim, rank) in cases {
            let a = JordanAlgebra::parse(text).unwrap();
            assert_eq!(a.dim, dim, "{text}");
            assert_eq!(a.rank, rank, "{text}");
        }
    }

    #[test]
    fn unit_acts_as_identity_and_trace_normalization() {
        for text in ["spin(4)", "H(2,R)", "H(3,C)", "H(3,O)", "sum(spin(2),H(2,H))"] {
            let alg = JordanAlgebra::parse(text).unwrap();
            let unit = alg.unit_element();
            assert!((alg.trace(&unit) - alg.rank as f64).abs() < 1e-12, "{text}");
            let mut r = rng(1);
            for _ in 0..32 {
                let a = alg.random_element(&mut r);
                let ua = alg.product(&unit, &a).unwrap();
                assert!(alg.norm(&alg.sub(&ua, &a)) < 1e-12);
            }
        }
    }

    #[test]
    fn commutativity_is_exact_in_the_tensor() {
        for text in ["spin(5)", "H(3,H)", "H(3,O)"] {
            let alg = JordanAlgebra::parse(text).unwrap();
            for i in 0..alg.dim {
                for j in 0..alg.dim {
                    for k in 0..alg.dim {
                        assert_eq!(
                            alg.structure_constant(i, j, k),
                            alg.structure_constant(j, i, k)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn jordan_identity_sampled() {
        for text in ["spin(6)", "H(2,R)", "H(3,C)", "H(2,H)", "H(3,O)", "sum(H(2,R),spin(3))"] {
            let alg = JordanAlgebra::parse(text).unwrap();
            let mut r = rng(2);
            let mut worst = 0.0f64;
            for _ in 0..300 {
                let a = alg.random_element(&mut r);
                let b = alg.random_element(&mut r);
                let aa = alg.square(&a).unwrap();
                let lhs = alg.product(&a, &alg.product(&aa, &b).unwrap()).unwrap();
                let rhs = alg.product(&aa, &alg.product(&a, &b).unwrap()).unwrap();
                let scale = alg.norm(&a).powi(3) * alg.norm(&b) + 1.0;
                worst = worst.max(alg.norm(&alg.sub(&lhs, &rhs)) / scale);
            }
            assert!(worst < 1e-10, "{text}: residual {worst:.3e}");
        }
    }

    #[test]
    fn formal_reality_sampled() {
        let alg = JordanAlgebra::parse("H(3,O)").unwrap();
        let mut r = rng(3);
        for _ in 0..200 {
            let a = alg.random_element(&mut r);
            if alg.norm(&a) > 1e-9 {
                assert!(alg.inner(&a, &a) > 0.0);
            }
        }
    }

    #[test]
    fn spin_atoms_and_h2r_atoms() {
        let spin = JordanAlgebra::parse("spin(3)").unwrap();
        let atom = spin.element(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        assert!(spin.is_atom(&atom));
        assert!((spin.trace(&atom) - 1.0).abs() < 1e-12);

        let h2 = JordanAlgebra::parse("H(2,R)").unwrap();
        for t in [0.0, 0.3, 1.1, -2.2] {
            let e = h2r_angle_atom(&h2, t);
            assert!(h2.is_atom(&e), "e_t for t = {t}");
        }
        // unit is idempotent but not an atom; sums of orthogonal atoms are not atoms
        let unit = h2.unit_element();
        assert!(h2.is_idempotent(&unit) && !h2.is_atom(&unit));
        let p = h2.element(vec![1.0, 0.0, 0.0]).unwrap();
        let q = h2.element(vec![0.0, 1.0, 0.0]).unwrap();
        assert!(h2.is_atom(&p) && h2.is_atom(&q));
        let sum = h2.add(&p, &q);
        assert!(h2.is_idempotent(&sum) && !h2.is_atom(&sum));
        // zero is idempotent, not an atom
        assert!(h2.is_idempotent(&h2.zero()) && !h2.is_atom(&h2.zero()));
    }

    /// The one-parameter family of atoms in H₂(ℝ):
    /// [[cos²t, −sin t cos t], [−sin t cos t, sin²t]].
    pub(crate) fn h2r_angle_atom(alg: &JordanAlgebra, t: f64) -> Element {
        alg.element(vec![t.cos().powi(2), t.sin().powi(2), -t.sin() * t.cos()])
            .unwrap()
    }

    #[test]
    fn h2r_transition_is_squared_cosine() {
        let alg = JordanAlgebra::parse("H(2,R)").unwrap();
        for s in [0.0, 0.4, 1.2] {
            for t in [0.1, 0.9, 2.5] {
                let es = h2r_angle_atom(&alg, s);
                let et = h2r_angle_atom(&alg, t);
                let tr = alg.trace(&alg.product(&es, &et).unwrap());
                assert!((tr - (s - t).cos().powi(2)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn triple_product_examples() {
        let alg = JordanAlgebra::parse("H(3,C)").unwrap();
        let mut r = rng(4);
        let unit = alg.unit_element();
        for _ in 0..20 {
            let y = alg.random_element(&mut r);
            let t = alg.triple(&unit, &y).unwrap();
            assert!(alg.norm(&alg.sub(&t, &y)) < 1e-12);
            // for an atom p: {p, y, p} = trace(p∘y) p
            let p = alg.random_atom(&mut r).unwrap();
            let t2 = alg.triple(&p, &y).unwrap();
            let c = alg.inner(&p, &y);
            assert!(alg.norm(&alg.sub(&t2, &alg.scale(&p, c))) < 1e-8);
        }
        // orthogonal atoms annihilate
        let p = alg.basis_element(0);
        let q = alg.basis_element(1);
        let t = alg.triple(&p, &q).unwrap();
        assert!(alg.norm(&t) < 1e-14);
    }

    #[test]
    fn peirce_projection_laws() {
        for (text, idx, dims) in [
            ("H(2,R)", 0, (1usize, 1usize, 1usize)),
            ("H(3,C)", 0, (1, 4, 4)),
            ("H(3,O)", 2, (1, 16, 10)),
        ] {
            let alg = JordanAlgebra::parse(text).unwrap();
            let p = alg.basis_element(idx);
            let (p1, ph, p0) = alg.peirce_projections(&p).unwrap();
            let l = alg.lmul_matrix(&p);
            // idempotent, mutually annihilating, summing to the identity
            assert!(p1.matmul(&p1).sub(&p1).norm_fro() < 1e-10);
            assert!(ph.matmul(&ph).sub(&ph).norm_fro() < 1e-10);
            assert!(p0.matmul(&p0).sub(&p0).norm_fro() < 1e-10);
            assert!(p1.matmul(&ph).norm_fro() < 1e-10);
            assert!(ph.matmul(&p0).norm_fro() < 1e-10);
            let sum = p1.add(&ph).add(&p0);
            assert!(sum.sub(&Mat::identity(alg.dim)).norm_fro() < 1e-10);
            // eigenspace actions
            assert!(l.matmul(&p1).sub(&p1).norm_fro() < 1e-10);
            assert!(l.matmul(&ph).sub(&ph.scale(0.5)).norm_fro() < 1e-10);
            assert!(l.matmul(&p0).norm_fro() < 1e-10);
            assert_eq!(alg.peirce_dimensions(&p).unwrap(), dims, "{text}");
        }
        // unit: projections are (identity, 0, 0)
        let alg = JordanAlgebra::parse("spin(4)").unwrap();
        let (p1, ph, p0) = alg.peirce_projections(&alg.unit_element()).unwrap();
        assert!(p1.sub(&Mat::identity(alg.dim)).norm_fro() < 1e-12);
        assert!(ph.norm_fro() < 1e-12);
        assert!(p0.norm_fro() < 1e-12);
        // non-idempotent input is rejected
        let bad = alg.scale(&alg.unit_element(), 0.7);
        assert!(alg.peirce_projections(&bad).is_err());
    }

    #[test]
    fn random_atoms_certify() {
        for text in ["spin(7)", "H(3,R)", "H(4,C)", "H(3,H)", "H(3,O)", "sum(spin(3),H(2,C))"] {
            let alg = JordanAlgebra::parse(text).unwrap();
            let mut r = rng(5);
            for _ in 0..12 {
                let p = alg.random_atom(&mut r).unwrap();
                assert!(alg.is_atom(&p), "{text}");
                assert!((alg.trace(&p) - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn orthogonal_rank_matches_descriptor() {
        for (text, expected) in [
            ("spin(7)", 2),
            ("H(4,H)", 4),
            ("H(3,O)", 3),
            ("sum(spin(3),H(3,R))", 5),
        ] {
            let alg = JordanAlgebra::parse(text).unwrap();
            let mut r = rng(6);
            assert_eq!(alg.orthogonal_rank(&mut r).unwrap(), expected, "{text}");
        }
    }

    #[test]
    fn atom_pair_transitions_stay_in_range() {
        let alg = JordanAlgebra::parse("H(3,O)").unwrap();
        let mut r = rng(7);
        for _ in 0..40 {
            let p = alg.random_atom(&mut r).unwrap();
            let q = alg.random_atom(&mut r).unwrap();
            let c = alg.inner(&p, &q);
            assert!(c > -1e-10 && c < 1.0 + 1e-10);
            if c > 1.0 - 1e-9 {
                assert!(alg.norm(&alg.sub(&p, &q)) < 1e-4);
            }
        }
    }

    #[test]
    fn h2h_product_against_dense_quaternion_arithmetic() {
        // E11 ∘ (e2 E12 + ē2 E21) halves the off-diagonal unit and pairs to
        // zero against E22; cross-checked in dense 2×2 quaternion arithmetic
        let alg = JordanAlgebra::parse("H(2,H)").unwrap();
        let s12_j = alg
            .basis_labels
            .iter()
            .position(|l| l == "S12.e2")
            .unwrap();
        let prod = alg
            .product(&alg.basis_element(0), &alg.basis_element(s12_j))
            .unwrap();
        let paired = alg.trace(&alg.product(&prod, &alg.basis_element(1)).unwrap());
        assert!(paired.abs() < 1e-14);
        let dense = alg
            .basis_matrix(0)
            .unwrap()
            .jordan(&alg.basis_matrix(s12_j).unwrap());
        let back = alg.matrix_to_element(&dense).unwrap();
        assert!(alg.norm(&alg.sub(&back, &prod)) < 1e-14);
        assert!(alg.norm(&alg.sub(&prod, &alg.scale(&alg.basis_element(s12_j), 0.5))) < 1e-14);
    }

    #[test]
    fn spin_atom_sampler_is_statistically_rotation_invariant() {
        let alg = JordanAlgebra::parse("spin(3)").unwrap();
        let mut r = rng(8);
        let mut mean = [0.0f64; 3];
        let n = 2000;
        for _ in 0..n {
            let p = alg.random_atom(&mut r).unwrap();
            for (m, c) in mean.iter_mut().zip(&p.coeffs[1..]) {
                *m += 2.0 * c / n as f64;
            }
        }
        // the direction distribution has no preferred axis
        assert!(vec_norm(&mean) < 0.1, "mean direction {mean:?}");
    }

    #[test]
    fn algebra_mismatch_is_caught() {
        let a = JordanAlgebra::parse("spin(3)").unwrap();
        let b = JordanAlgebra::parse("H(2,R)").unwrap();
        let x = a.unit_element();
        let y = b.unit_element();
        assert!(matches!(a.product(&x, &y), Err(EjaError::AlgebraMismatch)));
    }
}
