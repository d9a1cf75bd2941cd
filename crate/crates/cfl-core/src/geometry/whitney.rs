//! Whitney decomposition of pairs of directions.
//!
//! For a scale `R`, the decomposition runs the cap hierarchy down to level
//! `j* = ceil(log2 sqrt(R))` and sorts every pair of directions into
//! exactly one bucket:
//!
//! * a *related* pair `(k, k')` at some level `j <= j*` — the first level
//!   at which the containing caps stop being adjacent (their parents were
//!   adjacent, so the pair is `~~`-related there); or
//! * the *diagonal* — containing caps still adjacent at the bottom level,
//!   meaning the directions are within `O(2^{-j*}) = O(R^{-1/2})` of each
//!   other.
//!
//! Uniqueness of the level is structural: a child's closed cell is
//! contained in its parent's, so "containing caps are adjacent" is a
//! monotone property along the hierarchy.
//!
//! The decomposition also records `c_diag`, the maximum closed-adjacency
//! degree (self included) at the bottom level.  It is the constant in the
//! Cauchy-Schwarz bound for the leftover diagonal block:
//! `|sum_{k ~ k'} a_k conj(a_{k'})| <= c_diag * sum_k |a_k|^2`.

use serde::Serialize;

use super::caps::{
    adjacent_by_index, cap_index_containing, index_of_parts, neighbors_of, related_partners,
    whitney_caps, Cap,
};
use super::GeometryError;

#[derive(Clone, Debug, Serialize)]
pub struct LevelPairs {
    pub j: u32,
    /// Related pairs `(k, k')` with `k < k'`, sorted.
    pub related: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WhitneyDecomposition {
    pub n: usize,
    pub r: f64,
    pub j_star: u32,
    pub levels: Vec<LevelPairs>,
    /// All caps at the bottom level (the diagonal part of the cover).
    pub diagonal: Vec<Cap>,
    /// Max closed-adjacency degree at the bottom level, self included.
    pub c_diag: usize,
    #[serde(skip)]
    caps_by_level: Vec<Vec<Cap>>,
}

/// Where a pair of directions landed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capture {
    /// Containing caps are related at level `j` (unique such level).
    Related { j: u32, k: usize, k_prime: usize },
    /// Containing caps are still adjacent at the bottom level
    /// (`k == k_prime` for same-cap pairs).
    Diagonal { k: usize, k_prime: usize },
}

/// Builds the full decomposition for scale `R >= 16`.
pub fn whitney_cover_pairs(r: f64, n: usize) -> Result<WhitneyDecomposition, GeometryError> {
    if !(r >= 16.0) {
        return Err(GeometryError::RadiusTooSmall(r, 16.0));
    }
    let j_star = r.sqrt().log2().ceil() as u32;
    let mut levels = Vec::with_capacity(j_star as usize);
    let mut caps_by_level = Vec::with_capacity(j_star as usize);
    for j in 1..=j_star {
        let caps = whitney_caps(j, n)?;
        let mut related = Vec::new();
        for cap in &caps {
            for (f, c) in related_partners(j, n, cap.face, &cap.cell) {
                let other = index_of_parts(j, n, f, &c);
                if cap.k < other {
                    related.push((cap.k, other));
                }
            }
        }
        related.sort_unstable();
        related.dedup();
        levels.push(LevelPairs { j, related });
        caps_by_level.push(caps);
    }
    let diagonal = caps_by_level[j_star as usize - 1].clone();
    let c_diag = diagonal
        .iter()
        .map(|c| 1 + neighbors_of(j_star, n, c.face, &c.cell).len())
        .max()
        .unwrap();
    Ok(WhitneyDecomposition {
        n,
        r,
        j_star,
        levels,
        diagonal,
        c_diag,
        caps_by_level,
    })
}

impl WhitneyDecomposition {
    pub fn caps_at(&self, j: u32) -> &[Cap] {
        &self.caps_by_level[j as usize - 1]
    }

    /// Sorts a pair of directions into its unique bucket.  `None` only if
    /// a direction is zero.
    pub fn capture(&self, w: &[f64], w_prime: &[f64]) -> Option<Capture> {
        let mut bottom = (0, 0);
        for j in 1..=self.j_star {
            let k = cap_index_containing(j, self.n, w)?;
            let kp = cap_index_containing(j, self.n, w_prime)?;
            if !adjacent_by_index(j, self.n, k, kp) {
                return Some(Capture::Related { j, k, k_prime: kp });
            }
            bottom = (k, kp);
        }
        Some(Capture::Diagonal {
            k: bottom.0,
            k_prime: bottom.1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::caps::caps_related;
    use crate::util::seeded_stream;
    use rand::Rng;

    fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0f64)).collect();
            let norm: f64 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > 1e-3 {
                return v.iter().map(|c| c / norm).collect();
            }
        }
    }

    /// Unit vector at chord distance exactly `chord` from `w`.
    fn offset_by_chord(rng: &mut impl Rng, w: &[f64], chord: f64) -> Vec<f64> {
        let n = w.len();
        // Random tangent direction.
        let mut t;
        loop {
            let v = random_unit(rng, n);
            let proj: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
            t = v
                .iter()
                .zip(w)
                .map(|(a, b)| a - proj * b)
                .collect::<Vec<f64>>();
            let norm: f64 = t.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > 1e-3 {
                for c in &mut t {
                    *c /= norm;
                }
                break;
            }
        }
        // Rotate w by angle theta with chord = 2 sin(theta/2).
        let theta = 2.0 * (chord / 2.0).asin();
        let (c, s) = (theta.cos(), theta.sin());
        w.iter().zip(&t).map(|(a, b)| c * a + s * b).collect()
    }

    #[test]
    fn j_star_matches_scale() {
        assert_eq!(whitney_cover_pairs(16.0, 2).unwrap().j_star, 2);
        assert_eq!(whitney_cover_pairs(256.0, 2).unwrap().j_star, 4);
        assert_eq!(whitney_cover_pairs(512.0, 3).unwrap().j_star, 5);
        assert!(whitney_cover_pairs(8.0, 2).is_err());
    }

    #[test]
    fn antipodal_pairs_land_at_level_one() {
        let dec = whitney_cover_pairs(256.0, 3).unwrap();
        let mut rng = seeded_stream(41, "whitney-antipodal");
        for _ in 0..50 {
            let w = random_unit(&mut rng, 3);
            let wm: Vec<f64> = w.iter().map(|c| -c).collect();
            match dec.capture(&w, &wm).unwrap() {
                Capture::Related { j, .. } => assert_eq!(j, 1),
                other => panic!("antipodal pair not related: {other:?}"),
            }
        }
    }

    #[test]
    fn moderate_angle_lands_at_matching_level() {
        let dec = whitney_cover_pairs(256.0, 2).unwrap();
        let mut rng = seeded_stream(42, "whitney-moderate");
        for _ in 0..200 {
            let w = random_unit(&mut rng, 2);
            let wp = offset_by_chord(&mut rng, &w, 0.3);
            match dec.capture(&w, &wp).unwrap() {
                Capture::Related { j, .. } => {
                    // Separation 0.3 ~ 2^{-j} up to the construction's
                    // constants: caps stop being adjacent once ~2 cells
                    // apart, cells have size ~2^{1-j}.
                    assert!(
                        (2..=4).contains(&j),
                        "chord 0.3 captured at unexpected level {j}"
                    );
                }
                other => panic!("pair at chord 0.3 fell to diagonal: {other:?}"),
            }
        }
    }

    #[test]
    fn near_diagonal_pairs_fall_to_diagonal_part() {
        for n in [2usize, 3] {
            let dec = whitney_cover_pairs(256.0, n).unwrap();
            let mut rng = seeded_stream(43, "whitney-diagonal");
            let chord = (256f64).powf(-0.5) / 10.0;
            for _ in 0..100 {
                let w = random_unit(&mut rng, n);
                let wp = offset_by_chord(&mut rng, &w, chord);
                match dec.capture(&w, &wp).unwrap() {
                    Capture::Diagonal { k, k_prime } => {
                        // Within one cap or straddling adjacent caps.
                        assert!(adjacent_by_index(dec.j_star, n, k, k_prime));
                    }
                    other => panic!("near-diagonal pair captured as {other:?}"),
                }
            }
        }
    }

    #[test]
    fn wide_pairs_always_captured_as_related() {
        // Guaranteed-capture threshold: adjacent caps at the bottom level
        // span at most two cell diameters, i.e. chord 2^{2-j*} for n = 2
        // and sqrt(2) * 2^{2-j*} for n = 3 (cube-diagonal factor).
        for (n, factor) in [(2usize, 1.0f64), (3, 2f64.sqrt())] {
            let dec = whitney_cover_pairs(64.0, n).unwrap();
            let threshold = factor * 2f64.powi(2 - dec.j_star as i32);
            let mut rng = seeded_stream(44, "whitney-wide");
            for _ in 0..300 {
                let w = random_unit(&mut rng, n);
                let chord = rng.gen_range(threshold * 1.001..1.5);
                let wp = offset_by_chord(&mut rng, &w, chord);
                assert!(
                    matches!(dec.capture(&w, &wp).unwrap(), Capture::Related { .. }),
                    "chord {chord} >= {threshold} fell to diagonal (n={n})"
                );
            }
        }
    }

    #[test]
    fn capture_level_is_the_unique_related_level() {
        for n in [2usize, 3] {
            let dec = whitney_cover_pairs(128.0, n).unwrap();
            let mut rng = seeded_stream(45, "whitney-unique");
            for _ in 0..150 {
                let w = random_unit(&mut rng, n);
                let wp = random_unit(&mut rng, n);
                let captured = match dec.capture(&w, &wp).unwrap() {
                    Capture::Related { j, .. } => Some(j),
                    Capture::Diagonal { .. } => None,
                };
                for j in 1..=dec.j_star {
                    let k = cap_index_containing(j, n, &w).unwrap();
                    let kp = cap_index_containing(j, n, &wp).unwrap();
                    let a = &dec.caps_at(j)[k];
                    let b = &dec.caps_at(j)[kp];
                    assert_eq!(
                        caps_related(a, b),
                        captured == Some(j),
                        "level {j}, captured {captured:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn pair_lists_match_brute_force_enumeration() {
        for n in [2usize, 3] {
            let dec = whitney_cover_pairs(16.0, n).unwrap();
            for level in &dec.levels {
                let caps = dec.caps_at(level.j);
                let mut brute = Vec::new();
                for a in caps {
                    for b in caps {
                        if a.k < b.k && caps_related(a, b) {
                            brute.push((a.k, b.k));
                        }
                    }
                }
                assert_eq!(level.related, brute, "n={n} j={}", level.j);
            }
        }
    }

    #[test]
    fn listed_pairs_are_symmetric_in_capture() {
        let dec = whitney_cover_pairs(64.0, 2).unwrap();
        for level in &dec.levels {
            for &(k, kp) in level.related.iter().step_by(3) {
                let a = &dec.caps_at(level.j)[k];
                let b = &dec.caps_at(level.j)[kp];
                match dec.capture(&a.center, &b.center).unwrap() {
                    Capture::Related { j, .. } => assert_eq!(j, level.j),
                    other => panic!("center pair not related: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn diagonal_constant_is_the_max_degree() {
        let dec2 = whitney_cover_pairs(64.0, 2).unwrap();
        assert_eq!(dec2.c_diag, 3); // self + two arc neighbors
        let dec3 = whitney_cover_pairs(64.0, 3).unwrap();
        let brute = dec3
            .diagonal
            .iter()
            .map(|a| dec3.diagonal.iter().filter(|b| a.is_adjacent(b)).count())
            .max()
            .unwrap();
        assert_eq!(dec3.c_diag, brute);
        assert!(dec3.c_diag <= 12, "c_diag = {}", dec3.c_diag);
    }

    #[test]
    fn exports_to_json() {
        let dec = whitney_cover_pairs(16.0, 2).unwrap();
        let s = serde_json::to_string(&dec).unwrap();
        assert!(s.contains("\"j_star\":2"));
        assert!(s.contains("\"related\""));
    }
}
