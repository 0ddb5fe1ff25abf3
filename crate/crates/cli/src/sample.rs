//! Random configurations and patterns.

use anyhow::{bail, Result};
use gridpattern::canonical::is_asymmetric;
use gridpattern::{GridPoint, PointSet};
use rand::Rng;

const MAX_ATTEMPTS: usize = 100_000;

/// `k` distinct points drawn uniformly from the `side` x `side` box at the
/// origin.
pub fn random_points(rng: &mut impl Rng, k: usize, side: i64) -> Result<PointSet> {
    if side <= 0 || (side * side) < k as i64 {
        bail!("a {side}x{side} box has no room for {k} points");
    }
    let mut s = PointSet::new();
    while s.len() < k {
        s.insert(GridPoint::new(
            rng.gen_range(0..side),
            rng.gen_range(0..side),
        ));
    }
    Ok(s)
}

/// Rejection-samples an asymmetric `k`-set in the box.
pub fn random_asymmetric(rng: &mut impl Rng, k: usize, side: i64) -> Result<PointSet> {
    for _ in 0..MAX_ATTEMPTS {
        let s = random_points(rng, k, side)?;
        if k < 2 || is_asymmetric(&s)? {
            return Ok(s);
        }
    }
    bail!("no asymmetric {k}-point set found in a {side}x{side} box after {MAX_ATTEMPTS} draws")
}

/// An asymmetric configuration in a random `w` x `h` box (up to 24 x 12)
/// and a pattern of as many points in a random square box of side up to 6.
/// Wide boxes reach the later phases far more often than square ones.
/// Returns `None` when a draw does not fit.
pub fn random_wide_instance(
    rng: &mut impl Rng,
    k_min: usize,
    k_max: usize,
) -> Result<Option<(PointSet, PointSet)>> {
    let k = rng.gen_range(k_min..=k_max);
    let w = rng.gen_range(2..=24i64);
    let h = rng.gen_range(1..=12i64);
    let side = rng.gen_range(2..=6i64);
    if ((w * h) as usize) < k || ((side * side) as usize) < k {
        return Ok(None);
    }
    let mut c = PointSet::new();
    while c.len() < k {
        c.insert(GridPoint::new(rng.gen_range(0..w), rng.gen_range(0..h)));
    }
    if !is_asymmetric(&c)? {
        return Ok(None);
    }
    Ok(Some((c, random_points(rng, k, side)?)))
}
