//! Quaternion arithmetic, slice coordinates and sphere sampling.
//!
//! Conventions: q = x0 + x1·i + x2·j + x3·k with i·j = k, j·k = i, k·i = j
//! and i² = j² = k² = -1. Every value is immutable and every operation pure.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::rng::SeededRng;
use crate::{Error, Result};

/// Absolute comparison tolerance used by the domain checks in this module.
pub const TOL: f64 = 1e-12;

/// A quaternion with four real components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.x0, q.x1, q.x2, q.x3]
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub const fn from_real(x: f64) -> Self {
        Self::new(x, 0.0, 0.0, 0.0)
    }

    pub fn re(self) -> f64 {
        self.x0
    }

    /// Imaginary part as a quaternion with zero real component.
    pub fn im(self) -> Quaternion {
        Self::new(0.0, self.x1, self.x2, self.x3)
    }

    pub fn im_norm(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn norm_sqr(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn conj(self) -> Quaternion {
        Self::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    /// Multiplicative inverse conj(q)/|q|².
    pub fn inv(self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() / n2)
    }

    /// Euclidean inner product of the two 4-vectors.
    pub fn dot(self, other: Quaternion) -> f64 {
        self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    pub fn is_finite(self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn approx_eq(self, other: Quaternion, tol: f64) -> bool {
        (self - other).norm() <= tol
    }

    pub fn scale(self, s: f64) -> Quaternion {
        Self::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.x0 + rhs.x0,
            self.x1 + rhs.x1,
            self.x2 + rhs.x2,
            self.x3 + rhs.x3,
        )
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.x0 - rhs.x0,
            self.x1 - rhs.x1,
            self.x2 - rhs.x2,
            self.x3 - rhs.x3,
        )
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

/// Hamilton product; non-commutative in general.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        let (a0, a1, a2, a3) = (self.x0, self.x1, self.x2, self.x3);
        let (b0, b1, b2, b3) = (rhs.x0, rhs.x1, rhs.x2, rhs.x3);
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        self.scale(1.0 / s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:+.6}{:+.6}i{:+.6}j{:+.6}k",
            self.x0, self.x1, self.x2, self.x3
        )
    }
}

/// A point of the 2-sphere of imaginary units: u² = -1, |u| = 1, Re u = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryUnit(Quaternion);

impl ImaginaryUnit {
    pub fn new(q: Quaternion) -> Result<Self> {
        let norm = q.norm();
        if q.x0.abs() > TOL || (norm - 1.0).abs() > TOL {
            return Err(Error::NotAnImaginaryUnit { re: q.x0, norm });
        }
        // Renormalize exactly so that downstream invariants hold to roundoff.
        let n = q.im_norm();
        Ok(Self(Quaternion::new(0.0, q.x1 / n, q.x2 / n, q.x3 / n)))
    }

    /// Build from imaginary components, normalizing; errors on the zero vector.
    pub fn from_components(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let n = (x1 * x1 + x2 * x2 + x3 * x3).sqrt();
        if n == 0.0 {
            return Err(Error::NotAnImaginaryUnit { re: 0.0, norm: 0.0 });
        }
        Ok(Self(Quaternion::new(0.0, x1 / n, x2 / n, x3 / n)))
    }

    pub fn i() -> Self {
        Self(Quaternion::I)
    }

    pub fn j() -> Self {
        Self(Quaternion::J)
    }

    pub fn k() -> Self {
        Self(Quaternion::K)
    }

    pub fn as_quaternion(self) -> Quaternion {
        self.0
    }

    pub fn components(self) -> [f64; 3] {
        [self.0.x1, self.0.x2, self.0.x3]
    }

    /// Inner product of the underlying 3-vectors.
    pub fn dot(self, other: ImaginaryUnit) -> f64 {
        self.0.dot(other.0)
    }

    pub fn is_orthogonal_to(self, other: ImaginaryUnit) -> bool {
        self.dot(other).abs() < TOL
    }

    /// A deterministic unit orthogonal to `self`.
    pub fn perpendicular(self) -> ImaginaryUnit {
        let [a, b, c] = self.components();
        // Cross with the basis vector least aligned with self.
        let (x1, x2, x3) = if a.abs() <= b.abs() && a.abs() <= c.abs() {
            (0.0, -c, b)
        } else if b.abs() <= c.abs() {
            (c, 0.0, -a)
        } else {
            (-b, a, 0.0)
        };
        Self::from_components(x1, x2, x3).expect("cross product of independent vectors is nonzero")
    }
}

impl Neg for ImaginaryUnit {
    type Output = ImaginaryUnit;
    fn neg(self) -> ImaginaryUnit {
        ImaginaryUnit(-self.0)
    }
}

/// A point x + yI of a slice, stored with y >= 0.
///
/// Since L_I = L_{-I}, the canonical representative flips the sign of I when
/// needed to keep y nonnegative.
#[derive(Clone, Copy, Debug)]
pub struct SlicePoint {
    x: f64,
    y: f64,
    unit: ImaginaryUnit,
}

impl SlicePoint {
    pub fn new(x: f64, y: f64, unit: ImaginaryUnit) -> Self {
        if y < 0.0 {
            Self { x, y: -y, unit: -unit }
        } else {
            Self { x, y, unit }
        }
    }

    /// Canonical slice coordinates of a quaternion. Real points get y = 0 on
    /// the i-slice; callers that need a particular slice through a real point
    /// must construct it explicitly.
    pub fn from_quaternion(q: Quaternion) -> Self {
        let y = q.im_norm();
        if y <= TOL {
            Self { x: q.x0, y: 0.0, unit: ImaginaryUnit::i() }
        } else {
            let im = q.im();
            let unit = ImaginaryUnit::from_components(im.x1, im.x2, im.x3)
                .expect("nonzero imaginary part");
            Self { x: q.x0, y, unit }
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn unit(&self) -> ImaginaryUnit {
        self.unit
    }

    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::from_real(self.x) + self.unit.as_quaternion() * self.y
    }

    pub fn modulus(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.y <= TOL
    }
}

/// r·e^{Iθ} = r(cos θ + I sin θ).
pub fn from_polar(r: f64, theta: f64, unit: ImaginaryUnit) -> Quaternion {
    Quaternion::from_real(r * theta.cos()) + unit.as_quaternion() * (r * theta.sin())
}

/// Polar coordinates (r, θ, I) with θ in [0, π] and y = r sin θ >= 0.
///
/// Real q degenerates to θ in {0, π} with I fixed to the first basis unit i;
/// real points lie on every slice, so callers needing a slice through one
/// must choose it themselves.
pub fn to_polar(q: Quaternion) -> (f64, f64, ImaginaryUnit) {
    let r = q.norm();
    let y = q.im_norm();
    if y <= TOL {
        let theta = if q.x0 >= 0.0 { 0.0 } else { std::f64::consts::PI };
        return (r, theta, ImaginaryUnit::i());
    }
    let unit =
        ImaginaryUnit::from_components(q.x1, q.x2, q.x3).expect("nonzero imaginary part");
    (r, y.atan2(q.x0), unit)
}

/// `n` i.i.d. samples, uniform for the area measure on the sphere of
/// imaginary units; deterministic for a given seed.
pub fn sample_units(n: usize, seed: u64) -> Vec<ImaginaryUnit> {
    let mut rng = SeededRng::substream(seed, 0x5fe7);
    (0..n)
        .map(|_| {
            let z = rng.uniform_in(-1.0, 1.0);
            let phi = rng.uniform_in(0.0, 2.0 * std::f64::consts::PI);
            let s = (1.0 - z * z).max(0.0).sqrt();
            ImaginaryUnit::from_components(s * phi.cos(), s * phi.sin(), z)
                .expect("sphere point is nonzero")
        })
        .collect()
}
