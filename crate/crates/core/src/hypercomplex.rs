//! Composition-algebra arithmetic: the Cayley-Dickson tower ℝ, ℂ, ℍ, 𝕆 and
//! the bioctonions ℂ⊗𝕆.
//!
//! Basis labeling is fixed by the doubling recursion
//! `(a, b)(c, d) = (a c − d* b, d a + b c*)`: at each level the first half of
//! the coordinates is the previous algebra and the second half is its image
//! under the new unit. So e0 = 1, (e1, e2, e3) are the quaternion units
//! i, j, k, and e4..e7 = (1, i, j, k) times the octonion doubling unit.
//! Products of basis units are exact signed units; everything else is plain
//! f64 arithmetic over this basis.

use crate::error::{EjaError, Result};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Level tag of the Cayley-Dickson tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Division {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl Division {
    pub const fn dim(self) -> usize {
        match self {
            Division::Real => 1,
            Division::Complex => 2,
            Division::Quaternion => 4,
            Division::Octonion => 8,
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "R" | "r" => Ok(Division::Real),
            "C" | "c" => Ok(Division::Complex),
            "H" | "h" => Ok(Division::Quaternion),
            "O" | "o" => Ok(Division::Octonion),
            other => Err(EjaError::Parse(format!("unknown division algebra tag `{other}`"))),
        }
    }

    pub const fn tag(self) -> &'static str {
        match self {
            Division::Real => "R",
            Division::Complex => "C",
            Division::Quaternion => "H",
            Division::Octonion => "O",
        }
    }
}

/// Coordinate vector in one level of the tower.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyper {
    pub level: Division,
    pub coords: Vec<f64>,
}

/// Recursive Cayley-Dickson product on coordinate slices of length `dim`.
fn cd_mul_slice(x: &[f64], y: &[f64], out: &mut [f64], dim: usize) {
    if dim == 1 {
        out[0] = x[0] * y[0];
        return;
    }
    let h = dim / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let mut ac = vec![0.0; h];
    let mut db = vec![0.0; h];
    let mut da = vec![0.0; h];
    let mut bc = vec![0.0; h];
    // (a, b)(c, d) = (a c − d* b, d a + b c*)
    cd_mul_slice(a, c, &mut ac, h);
    let d_conj = conj_slice(d);
    cd_mul_slice(&d_conj, b, &mut db, h);
    cd_mul_slice(d, a, &mut da, h);
    let c_conj = conj_slice(c);
    cd_mul_slice(b, &c_conj, &mut bc, h);
    for i in 0..h {
        out[i] = ac[i] - db[i];
        out[h + i] = da[i] + bc[i];
    }
}

fn conj_slice(x: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = x.iter().map(|v| -v).collect();
    out[0] = x[0];
    out
}

impl Hyper {
    pub fn new(level: Division, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != level.dim() {
            return Err(EjaError::DimensionMismatch {
                expected: level.dim(),
                got: coords.len(),
            });
        }
        Ok(Hyper { level, coords })
    }

    pub fn zero(level: Division) -> Self {
        Hyper {
            level,
            coords: vec![0.0; level.dim()],
        }
    }

    pub fn one(level: Division) -> Self {
        Hyper::unit(level, 0)
    }

    /// The k-th basis unit e_k.
    pub fn unit(level: Division, k: usize) -> Self {
        let mut coords = vec![0.0; level.dim()];
        coords[k] = 1.0;
        Hyper { level, coords }
    }

    pub fn from_real(level: Division, s: f64) -> Self {
        let mut coords = vec![0.0; level.dim()];
        coords[0] = s;
        Hyper { level, coords }
    }

    pub fn conj(&self) -> Self {
        Hyper {
            level: self.level,
            coords: conj_slice(&self.coords),
        }
    }

    /// Norm form N(x) = Σ coordsᵢ².
    pub fn norm_form(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn real_part(&self) -> f64 {
        self.coords[0]
    }

    pub fn scale(&self, s: f64) -> Self {
        Hyper {
            level: self.level,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coords.iter().all(|c| c.abs() <= tol)
    }

    /// Checked product: errors on level mismatch.
    pub fn try_mul(&self, other: &Hyper) -> Result<Hyper> {
        if self.level != other.level {
            return Err(EjaError::DimensionMismatch {
                expected: self.level.dim(),
                got: other.level.dim(),
            });
        }
        Ok(self * other)
    }
}

/// Cayley-Dickson multiplication. Panics on level mismatch; use
/// [`Hyper::try_mul`] for the checked form.
pub fn cd_multiply(x: &Hyper, y: &Hyper) -> Result<Hyper> {
    x.try_mul(y)
}

pub fn conjugate(x: &Hyper) -> Hyper {
    x.conj()
}

impl Mul for &Hyper {
    type Output = Hyper;
    fn mul(self, rhs: &Hyper) -> Hyper {
        assert_eq!(self.level, rhs.level, "level mismatch");
        let dim = self.level.dim();
        let mut out = vec![0.0; dim];
        cd_mul_slice(&self.coords, &rhs.coords, &mut out, dim);
        Hyper {
            level: self.level,
            coords: out,
        }
    }
}

impl Add for &Hyper {
    type Output = Hyper;
    fn add(self, rhs: &Hyper) -> Hyper {
        assert_eq!(self.level, rhs.level);
        Hyper {
            level: self.level,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Hyper {
    type Output = Hyper;
    fn sub(self, rhs: &Hyper) -> Hyper {
        assert_eq!(self.level, rhs.level);
        Hyper {
            level: self.level,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Hyper {
    type Output = Hyper;
    fn neg(self) -> Hyper {
        self.scale(-1.0)
    }
}

// ---------------------------------------------------------------------------
// Octonions as fixed-size arrays, with a precomputed unit product table.
// ---------------------------------------------------------------------------

/// Octonion over a fixed `[f64; 8]` coordinate array. Used where products sit
/// in inner loops (bioctonion matrices).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Octonion(pub [f64; 8]);

/// table[i][j] = (k, sign) with e_i e_j = sign * e_k.
fn unit_table() -> &'static [[(usize, f64); 8]; 8] {
    static TABLE: OnceLock<[[(usize, f64); 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [[(0usize, 0.0f64); 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                let a = Hyper::unit(Division::Octonion, i);
                let b = Hyper::unit(Division::Octonion, j);
                let p = &a * &b;
                let k = p
                    .coords
                    .iter()
                    .position(|c| c.abs() > 0.5)
                    .expect("unit product is a signed unit");
                table[i][j] = (k, p.coords[k]);
            }
        }
        table
    })
}

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);

    pub fn one() -> Octonion {
        Octonion::unit(0)
    }

    pub fn unit(k: usize) -> Octonion {
        let mut c = [0.0; 8];
        c[k] = 1.0;
        Octonion(c)
    }

    pub fn from_hyper(h: &Hyper) -> Octonion {
        let mut c = [0.0; 8];
        c[..h.coords.len()].copy_from_slice(&h.coords);
        Octonion(c)
    }

    pub fn conj(&self) -> Octonion {
        let mut c = self.0;
        for v in c.iter_mut().skip(1) {
            *v = -*v;
        }
        Octonion(c)
    }

    pub fn norm_form(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn scale(&self, s: f64) -> Octonion {
        let mut c = self.0;
        for v in c.iter_mut() {
            *v *= s;
        }
        Octonion(c)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.0.iter().all(|c| c.abs() <= tol)
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        let table = unit_table();
        let mut out = [0.0; 8];
        for i in 0..8 {
            let xi = self.0[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..8 {
                let yj = rhs.0[j];
                if yj == 0.0 {
                    continue;
                }
                let (k, sign) = table[i][j];
                out[k] += sign * xi * yj;
            }
        }
        Octonion(out)
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        for (v, w) in c.iter_mut().zip(rhs.0) {
            *v += w;
        }
        Octonion(c)
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        for (v, w) in c.iter_mut().zip(rhs.0) {
            *v -= w;
        }
        Octonion(c)
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        self.scale(-1.0)
    }
}

// ---------------------------------------------------------------------------
// Bioctonions ℂ⊗𝕆: pairs re⊗1 + im⊗i with the complex unit commuting with
// the octonion units. Not a composition algebra — zero divisors exist.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bioctonion {
    pub re: Octonion,
    pub im: Octonion,
}

impl Bioctonion {
    pub const ZERO: Bioctonion = Bioctonion {
        re: Octonion::ZERO,
        im: Octonion::ZERO,
    };

    pub fn one() -> Bioctonion {
        Bioctonion {
            re: Octonion::one(),
            im: Octonion::ZERO,
        }
    }

    pub fn from_octonion(o: Octonion) -> Bioctonion {
        Bioctonion {
            re: o,
            im: Octonion::ZERO,
        }
    }

    /// The complex scalar a + b·i.
    pub fn complex(a: f64, b: f64) -> Bioctonion {
        Bioctonion {
            re: Octonion::one().scale(a),
            im: Octonion::one().scale(b),
        }
    }

    /// Octonion conjugation on both tensor legs.
    pub fn oct_conj(&self) -> Bioctonion {
        Bioctonion {
            re: self.re.conj(),
            im: self.im.conj(),
        }
    }

    /// Complex conjugation: negates the ⊗i component.
    pub fn complex_conj(&self) -> Bioctonion {
        Bioctonion {
            re: self.re,
            im: -self.im,
        }
    }

    /// Full star: octonion conjugation composed with complex conjugation.
    pub fn star(&self) -> Bioctonion {
        Bioctonion {
            re: self.re.conj(),
            im: -self.im.conj(),
        }
    }

    /// Sum of squared coordinates (16 reals). Not multiplicative.
    pub fn norm_form(&self) -> f64 {
        self.re.norm_form() + self.im.norm_form()
    }

    pub fn scale(&self, s: f64) -> Bioctonion {
        Bioctonion {
            re: self.re.scale(s),
            im: self.im.scale(s),
        }
    }

    /// Multiplication by the complex scalar a + b·i.
    pub fn scale_complex(&self, a: f64, b: f64) -> Bioctonion {
        Bioctonion {
            re: self.re.scale(a) - self.im.scale(b),
            im: self.re.scale(b) + self.im.scale(a),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.re.is_zero(tol) && self.im.is_zero(tol)
    }

    /// Real and imaginary parts of the complex component (coefficients of
    /// 1⊗1 and 1⊗i).
    pub fn complex_part(&self) -> (f64, f64) {
        (self.re.0[0], self.im.0[0])
    }
}

pub fn bioct_multiply(x: &Bioctonion, y: &Bioctonion) -> Bioctonion {
    *x * *y
}

pub fn bioct_star(x: &Bioctonion) -> Bioctonion {
    x.star()
}

impl Mul for Bioctonion {
    type Output = Bioctonion;
    fn mul(self, rhs: Bioctonion) -> Bioctonion {
        // (a⊗1 + b⊗i)(c⊗1 + d⊗i) = (ac − bd)⊗1 + (ad + bc)⊗i
        Bioctonion {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Add for Bioctonion {
    type Output = Bioctonion;
    fn add(self, rhs: Bioctonion) -> Bioctonion {
        Bioctonion {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for Bioctonion {
    type Output = Bioctonion;
    fn sub(self, rhs: Bioctonion) -> Bioctonion {
        Bioctonion {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for Bioctonion {
    type Output = Bioctonion;
    fn neg(self) -> Bioctonion {
        self.scale(-1.0)
    }
}

// ---------------------------------------------------------------------------
// Dense matrices over a tower level. Entry products follow the written
// order, so these work unchanged over the octonions (no reassociation).
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct HMatrix {
    pub level: Division,
    pub n: usize,
    pub entries: Vec<Hyper>,
}

impl HMatrix {
    pub fn zeros(level: Division, n: usize) -> Self {
        HMatrix {
            level,
            n,
            entries: vec![Hyper::zero(level); n * n],
        }
    }

    pub fn identity(level: Division, n: usize) -> Self {
        let mut m = HMatrix::zeros(level, n);
        for i in 0..n {
            *m.at_mut(i, i) = Hyper::one(level);
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Hyper {
        &self.entries[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Hyper {
        &mut self.entries[i * self.n + j]
    }

    pub fn matmul(&self, other: &HMatrix) -> HMatrix {
        assert_eq!(self.level, other.level);
        assert_eq!(self.n, other.n);
        let mut out = HMatrix::zeros(self.level, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Hyper::zero(self.level);
                for k in 0..self.n {
                    acc = &acc + &(self.at(i, k) * other.at(k, j));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &HMatrix) -> HMatrix {
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = &*e + o;
        }
        out
    }

    pub fn sub(&self, other: &HMatrix) -> HMatrix {
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = &*e - o;
        }
        out
    }

    pub fn scale(&self, s: f64) -> HMatrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.scale(s);
        }
        out
    }

    /// Jordan product (AB + BA) / 2.
    pub fn jordan(&self, other: &HMatrix) -> HMatrix {
        self.matmul(other).add(&other.matmul(self)).scale(0.5)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> HMatrix {
        let mut out = HMatrix::zeros(self.level, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                *out.at_mut(i, j) = self.at(j, i).conj();
            }
        }
        out
    }

    /// Entrywise coordinate inner product (real Frobenius pairing).
    pub fn frob_dot(&self, other: &HMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| crate::linalg::vec_dot(&a.coords, &b.coords))
            .sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.frob_dot(self).sqrt()
    }

    /// Real part of the matrix trace.
    pub fn trace_real(&self) -> f64 {
        (0..self.n).map(|i| self.at(i, i).real_part()).sum()
    }

    /// ‖U†U − I‖ in the Frobenius pairing.
    pub fn unitary_residual(&self) -> f64 {
        self.dagger()
            .matmul(self)
            .sub(&HMatrix::identity(self.level, self.n))
            .frob_norm()
    }

    /// Hermitian check: entry (j, i) equals the conjugate of entry (i, j).
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = &self.at(j, i).conj() - self.at(i, j);
                worst = worst.max(d.coords.iter().fold(0.0f64, |m, c| m.max(c.abs())));
            }
        }
        worst
    }
}

/// Gram-Schmidt over the division algebra; scalars multiply vectors from the
/// right so inner products ⟨x, y⟩ = Σ x̄ᵢ yᵢ stay linear in the second slot.
pub mod gram_schmidt {
    use super::*;

    pub fn inner(x: &[Hyper], y: &[Hyper]) -> Hyper {
        let mut acc = Hyper::zero(x[0].level);
        for (a, b) in x.iter().zip(y) {
            acc = &acc + &(&a.conj() * b)
        }
        acc
    }

    pub fn scale_right(v: &[Hyper], s: &Hyper) -> Vec<Hyper> {
        v.iter().map(|x| x * s).collect()
    }

    pub fn norm(x: &[Hyper]) -> f64 {
        x.iter().map(|a| a.norm_form()).sum::<f64>().sqrt()
    }

    /// Orthonormalizes `seed` columns (assumed independent), then extends to
    /// a full unitary basis with standard vectors. Returns n columns.
    pub fn complete_basis(level: Division, n: usize, seed: &[Vec<Hyper>]) -> Vec<Vec<Hyper>> {
        let mut basis: Vec<Vec<Hyper>> = Vec::with_capacity(n);
        let mut feed: Vec<Vec<Hyper>> = seed.to_vec();
        for k in 0..n {
            let mut unit = vec![Hyper::zero(level); n];
            unit[k] = Hyper::one(level);
            feed.push(unit);
        }
        for cand in feed {
            let mut v = cand;
            for b in &basis {
                let c = inner(b, &v);
                let proj = scale_right(b, &c);
                v = v.iter().zip(&proj).map(|(x, p)| x - p).collect();
            }
            let nv = norm(&v);
            if nv > 1e-8 {
                let v: Vec<Hyper> = v.iter().map(|x| x.scale(1.0 / nv)).collect();
                basis.push(v);
            }
            if basis.len() == n {
                break;
            }
        }
        assert_eq!(basis.len(), n, "could not complete a unitary basis");
        basis
    }

    /// Unitary matrix with the given orthonormal columns.
    pub fn matrix_from_columns(level: Division, cols: &[Vec<Hyper>]) -> HMatrix {
        let n = cols.len();
        let mut m = HMatrix::zeros(level, n);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                *m.at_mut(i, j) = col[i].clone();
            }
        }
        m
    }
}
