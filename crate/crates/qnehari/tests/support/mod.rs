//! Shared helpers for the integration suites: a seeded generator decoupled
//! from the library's internal streams, and random test data builders.

use qnehari::quat::Quaternion;
use qnehari::series::TruncatedSeries;

/// SplitMix64: tiny, deterministic, and independent of the crate's own
/// random streams so tests stay honest oracles.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = loop {
            let u = self.uniform();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

pub fn rand_quat(rng: &mut Rng) -> Quaternion {
    Quaternion::new(rng.normal(), rng.normal(), rng.normal(), rng.normal())
}

pub fn rand_series(deg: usize, scale: f64, rng: &mut Rng) -> TruncatedSeries {
    TruncatedSeries::new((0..=deg).map(|_| rand_quat(rng) * scale).collect())
}

/// A quaternion with |w| < r_max, radius uniform in [0, r_max).
pub fn rand_ball_point(r_max: f64, rng: &mut Rng) -> Quaternion {
    let dir = rand_quat(rng);
    dir * (r_max * rng.uniform() / dir.norm())
}
