//! Exact arithmetic for rational quaternion algebras (a,b)_ℚ, the
//! Eisenstein/Gaussian integer rings, the order Γ = ℤ[w] ⊕ iℤ[w], and the
//! embeddings into 2×2 complex matrices.
//!
//! Everything at this layer is exact: quaternions carry arbitrary-precision
//! rational coordinates (Γ has half-integer coordinates, so plain integers
//! would not do), and ring elements carry 64-bit integer coordinates with
//! 128-bit norms. Floating point enters only through the complex embeddings.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// √3 to double precision; σ(w) = 1/2 + i·√3/2.
pub const SQRT_3: f64 = 1.7320508075688772;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

/// Structure constants (a, b) of the quaternion algebra (a,b)_ℚ with
/// i² = a, j² = b, ij = −ji.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraParams {
    a: BigRational,
    b: BigRational,
}

impl AlgebraParams {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::invalid("quaternion algebra parameters must be nonzero"));
        }
        Ok(AlgebraParams { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(rat(a), rat(b))
    }

    /// (−1, −1)_ℚ — the Hamilton algebra housing the ℤ[i] Alamouti code.
    pub fn hamilton() -> Self {
        AlgebraParams { a: rat(-1), b: rat(-1) }
    }

    /// (−1, −3)_ℚ — the algebra housing Γ = ℤ[w] ⊕ iℤ[w].
    pub fn eisenstein() -> Self {
        AlgebraParams { a: rat(-1), b: rat(-3) }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }
}

/// A quaternion x + y·i + z·j + t·ij with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quaternion {
    pub x: BigRational,
    pub y: BigRational,
    pub z: BigRational,
    pub t: BigRational,
}

impl Quaternion {
    pub fn new(x: BigRational, y: BigRational, z: BigRational, t: BigRational) -> Self {
        Quaternion { x, y, z, t }
    }

    pub fn from_ints(x: i64, y: i64, z: i64, t: i64) -> Self {
        Quaternion::new(rat(x), rat(y), rat(z), rat(t))
    }

    pub fn zero() -> Self {
        Quaternion::from_ints(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Quaternion::from_ints(1, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero() && self.t.is_zero()
    }

    pub fn add(&self, other: &Quaternion) -> Quaternion {
        Quaternion::new(
            &self.x + &other.x,
            &self.y + &other.y,
            &self.z + &other.z,
            &self.t + &other.t,
        )
    }

    /// Product in (a,b)_ℚ, expanded from i² = a, j² = b, ij = −ji.
    pub fn mul(&self, other: &Quaternion, params: &AlgebraParams) -> Quaternion {
        let (a, b) = (&params.a, &params.b);
        let (x1, y1, z1, t1) = (&self.x, &self.y, &self.z, &self.t);
        let (x2, y2, z2, t2) = (&other.x, &other.y, &other.z, &other.t);
        let ab = a * b;
        Quaternion::new(
            x1 * x2 + a * (y1 * y2) + b * (z1 * z2) - &ab * (t1 * t2),
            x1 * y2 + y1 * x2 - b * (z1 * t2) + b * (t1 * z2),
            x1 * z2 + z1 * x2 + a * (y1 * t2) - a * (t1 * y2),
            x1 * t2 + t1 * x2 + y1 * z2 - z1 * y2,
        )
    }

    /// Quaternion conjugate q* = x − (y·i + z·j + t·ij).
    pub fn conjugate(&self) -> Quaternion {
        Quaternion::new(self.x.clone(), -self.y.clone(), -self.z.clone(), -self.t.clone())
    }

    /// Reduced norm Nrd(q) = q·q* = x² − a·y² − b·z² + ab·t².
    pub fn reduced_norm(&self, params: &AlgebraParams) -> BigRational {
        let (a, b) = (&params.a, &params.b);
        &self.x * &self.x - a * (&self.y * &self.y) - b * (&self.z * &self.z)
            + a * b * (&self.t * &self.t)
    }

    /// Reduced trace Trd(q) = q + q* = 2x.
    pub fn reduced_trace(&self) -> BigRational {
        &self.x + &self.x
    }

    /// Matrix of left multiplication by q in M₂(ℂ), with √b realized as
    /// the principal root i·√|b| (requires b < 0):
    ///
    /// ```text
    /// M_q = [ x + z√b    a(y − t√b) ]
    ///       [ y + t√b    x − z√b    ]
    /// ```
    ///
    /// det(M_q) = Nrd(q), and q ↦ M_q is an algebra homomorphism.
    pub fn left_mult_matrix(&self, params: &AlgebraParams) -> Result<ComplexMatrix2> {
        if !params.b.is_negative() {
            return Err(Error::invalid(
                "left_mult_matrix requires b < 0 (definite complex embedding)",
            ));
        }
        let a = params.a.to_f64().ok_or_else(|| Error::invalid("parameter a overflows f64"))?;
        let root = params.b.abs().to_f64().ok_or_else(|| Error::invalid("parameter b overflows f64"))?.sqrt();
        let to_f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let (x, y, z, t) = (to_f(&self.x), to_f(&self.y), to_f(&self.z), to_f(&self.t));
        Ok(ComplexMatrix2::new([
            [Complex64::new(x, z * root), a * Complex64::new(y, -t * root)],
            [Complex64::new(y, t * root), Complex64::new(x, -z * root)],
        ]))
    }
}

/// A 2×2 complex matrix (row-major), the ambient space of codewords.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix2 {
    pub m: [[Complex64; 2]; 2],
}

impl ComplexMatrix2 {
    pub fn new(m: [[Complex64; 2]; 2]) -> Self {
        ComplexMatrix2 { m }
    }

    pub fn identity() -> Self {
        ComplexMatrix2::new([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn mul(&self, other: &ComplexMatrix2) -> ComplexMatrix2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0] * other.m[0][j] + self.m[i][1] * other.m[1][j];
            }
        }
        ComplexMatrix2::new(out)
    }

    pub fn sub(&self, other: &ComplexMatrix2) -> ComplexMatrix2 {
        let mut out = self.m;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell -= other.m[i][j];
            }
        }
        ComplexMatrix2::new(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix2 {
        ComplexMatrix2::new([
            [self.m[0][0].conj(), self.m[1][0].conj()],
            [self.m[0][1].conj(), self.m[1][1].conj()],
        ])
    }

    /// Largest entrywise magnitude; convenient for tolerance checks.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// An Eisenstein integer u + v·w with w = (1 + √−3)/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EisensteinInteger {
    pub u: i64,
    pub v: i64,
}

impl EisensteinInteger {
    pub fn new(u: i64, v: i64) -> Self {
        EisensteinInteger { u, v }
    }

    pub fn zero() -> Self {
        EisensteinInteger::new(0, 0)
    }

    pub fn one() -> Self {
        EisensteinInteger::new(1, 0)
    }

    /// The generator w itself.
    pub fn w() -> Self {
        EisensteinInteger::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }

    pub fn add(&self, o: &Self) -> Self {
        EisensteinInteger::new(self.u + o.u, self.v + o.v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        EisensteinInteger::new(self.u - o.u, self.v - o.v)
    }

    pub fn neg(&self) -> Self {
        EisensteinInteger::new(-self.u, -self.v)
    }

    /// Ring product, using w² = w − 1.
    pub fn mul(&self, o: &Self) -> Self {
        EisensteinInteger::new(
            self.u * o.u - self.v * o.v,
            self.u * o.v + self.v * o.u + self.v * o.v,
        )
    }

    /// Complex conjugate: (u + v·w)* = (u + v) − v·w.
    pub fn conj(&self) -> Self {
        EisensteinInteger::new(self.u + self.v, -self.v)
    }

    /// Algebraic norm N(u + v·w) = u² + uv + v², computed in 128 bits.
    pub fn norm(&self) -> i128 {
        let (u, v) = (i128::from(self.u), i128::from(self.v));
        u * u + u * v + v * v
    }

    /// Complex embedding σ(u + v·w) = u + v·(1/2 + i·√3/2).
    pub fn embed(&self) -> Complex64 {
        Complex64::new(self.u as f64 + 0.5 * self.v as f64, 0.5 * SQRT_3 * self.v as f64)
    }
}

/// A Gaussian integer re + im·√−1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussianInteger {
    pub re: i64,
    pub im: i64,
}

impl GaussianInteger {
    pub fn new(re: i64, im: i64) -> Self {
        GaussianInteger { re, im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussianInteger::new(self.re - o.re, self.im - o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussianInteger::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn conj(&self) -> Self {
        GaussianInteger::new(self.re, -self.im)
    }

    /// Algebraic norm N = re² + im², computed in 128 bits.
    pub fn norm(&self) -> i128 {
        let (re, im) = (i128::from(self.re), i128::from(self.im));
        re * re + im * im
    }

    pub fn embed(&self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

/// Embedding of an Eisenstein integer into ℂ (free-function form).
pub fn embed_eisenstein(x: &EisensteinInteger) -> Complex64 {
    x.embed()
}

/// Embedding of a Gaussian integer into ℂ (free-function form).
pub fn embed_gaussian(x: &GaussianInteger) -> Complex64 {
    x.embed()
}

/// An element q = x₀ + i·x₁ of the order Γ = ℤ[w] ⊕ iℤ[w] inside (−1,−3)_ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GammaElement {
    pub x0: EisensteinInteger,
    pub x1: EisensteinInteger,
}

impl GammaElement {
    pub fn new(x0: EisensteinInteger, x1: EisensteinInteger) -> Self {
        GammaElement { x0, x1 }
    }

    /// Reduced norm Nrd(x₀ + i·x₁) = N(x₀) + N(x₁), always a nonnegative
    /// integer; zero only at zero.
    pub fn reduced_norm(&self) -> i128 {
        self.x0.norm() + self.x1.norm()
    }

    /// Ring product inside Γ. Using i·c = c*·i for c ∈ ℚ(√−3) and i² = −1:
    /// (x₀ + i·x₁)(y₀ + i·y₁) = (x₀y₀ − x₁*y₁) + i(x₀*y₁ + x₁y₀).
    pub fn mul(&self, o: &Self) -> Self {
        GammaElement::new(
            self.x0.mul(&o.x0).sub(&self.x1.conj().mul(&o.x1)),
            self.x0.conj().mul(&o.x1).add(&self.x1.mul(&o.x0)),
        )
    }

    /// Expands w = (1 + j)/2 to express q = x₀ + i·x₁ in the (1, i, j, ij)
    /// basis of (−1,−3)_ℚ: with x₀ = u₀ + v₀w and x₁ = u₁ + v₁w, the
    /// coordinates are (u₀ + v₀/2, u₁ + v₁/2, v₀/2, v₁/2).
    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::new(
            rat(self.x0.u) + half(self.x0.v),
            rat(self.x1.u) + half(self.x1.v),
            half(self.x0.v),
            half(self.x1.v),
        )
    }

    /// Inverse of [`GammaElement::to_quaternion`]: recovers (x₀, x₁) from
    /// quaternion coordinates when they lie in Γ, else `None`.
    pub fn from_quaternion(q: &Quaternion) -> Option<GammaElement> {
        let two = rat(2);
        let v0 = &q.z * &two;
        let v1 = &q.t * &two;
        let u0 = &q.x - &q.z;
        let u1 = &q.y - &q.t;
        let as_i64 = |r: &BigRational| -> Option<i64> {
            if r.is_integer() {
                r.to_integer().to_i64()
            } else {
                None
            }
        };
        Some(GammaElement::new(
            EisensteinInteger::new(as_i64(&u0)?, as_i64(&v0)?),
            EisensteinInteger::new(as_i64(&u1)?, as_i64(&v1)?),
        ))
    }

    /// Complex embedding of Γ: the Alamouti-form matrix
    /// ((σ(x₀), −σ(x₁)*), (σ(x₁), σ(x₀)*)), which coincides with the left
    /// multiplication matrix of [`GammaElement::to_quaternion`].
    pub fn embed(&self) -> ComplexMatrix2 {
        let s0 = self.x0.embed();
        let s1 = self.x1.embed();
        ComplexMatrix2::new([[s0, -s1.conj()], [s1, s0.conj()]])
    }
}
