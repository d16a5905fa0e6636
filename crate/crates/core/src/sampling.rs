//! Seeded generators for test potentials and exploration samples.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numerics::{ApproxComplex, ExactRational};
use crate::walk::Potential;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational weights `p/q` with `|p| <= 9`, `1 <= q <= 9` on the given steps.
pub fn rational_potential<R: Rng>(rng: &mut R, steps: &[i64]) -> Potential<ExactRational> {
    Potential::new(steps.iter().map(|&s| {
        let num: i64 = rng.random_range(-9..=9);
        let den: i64 = rng.random_range(1..=9);
        (s, ExactRational::new(num, den).expect("nonzero denominator"))
    }))
    .expect("steps are nonzero and even")
}

/// Inner and outer radius of the annulus sampled for complex potentials.
pub const ANNULUS: (f64, f64) = (0.5, 2.0);

/// One point uniform (by area) on the annulus `0.5 <= |z| <= 2`.
pub fn annulus_point<R: Rng>(rng: &mut R) -> ApproxComplex {
    let (lo, hi) = ANNULUS;
    let radius = rng.random_range(lo * lo..hi * hi).sqrt();
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    ApproxComplex::from_polar(radius, angle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<_> = (0..5)
            .map({
                let mut rng = seeded(7);
                move |_| annulus_point(&mut rng)
            })
            .collect();
        let b: Vec<_> = (0..5)
            .map({
                let mut rng = seeded(7);
                move |_| annulus_point(&mut rng)
            })
            .collect();
        assert_eq!(a, b);
        for z in a {
            assert!((0.5 - 1e-12..=2.0 + 1e-12).contains(&z.norm()));
        }
    }

    #[test]
    fn rational_potential_is_on_requested_steps() {
        let mut rng = seeded(1);
        let v = rational_potential(&mut rng, &[2, 4, 6]);
        assert_eq!(v.iter().map(|(s, _)| s).collect::<Vec<_>>(), vec![2, 4, 6]);
    }
}
