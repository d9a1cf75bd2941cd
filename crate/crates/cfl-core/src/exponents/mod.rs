//! Exact exponent calculus for cone extension estimates against
//! `alpha`-dimensional measures.
//!
//! All quantities here are piecewise maxima of terms linear in `alpha` and
//! `1/q`, split over three ranges of `alpha` relative to the spatial
//! dimension `n`: at most 1 (`Low`), between 1 and `n` (`Mid`), and between
//! `n` and `n+1` (`High`).  Everything is computed in exact rational
//! arithmetic; the only floating point in this module is the optional
//! `to_f64` conversion for the numerical layers.
//!
//! Two exponent families matter downstream:
//!
//! * [`s_necessary`] — the exponent forced by explicit concentration
//!   examples (no estimate can beat it);
//! * [`s_sufficient`] — the exponent the bilinear machinery proves
//!   (estimates hold above it).
//!
//! Their difference, [`sharpness_gap`], vanishes identically on the
//! `n = 3` range `1 <= alpha <= 4`, which the acceptance suite checks on a
//! grid.  The bilinear decay exponent [`beta_bilinear`], its rescaling
//! bookkeeping [`gamma_rescale`], and the diagonal-part exponent
//! [`beta_diag`] feed the bilinear and localization experiments.

pub mod rational;
pub mod recursion;

pub use rational::{QVal, Rational};
pub use recursion::{run_decay_recursion, RecursionReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExponentError {
    #[error("alpha = {0} out of range (need 0 < alpha <= n+1)")]
    AlphaOutOfRange(Rational),
    #[error("q = {0} out of range (need q >= {1})")]
    QOutOfRange(QVal, Rational),
    #[error("r = {0} out of range (need 2 <= r < infinity)")]
    ROutOfRange(QVal),
    #[error("n = {0} out of range (need n >= 2)")]
    DimensionOutOfRange(u32),
    #[error("example family {family:?} needs the {needed:?} range, got {got:?}")]
    RegimeMismatch {
        family: ExampleFamily,
        needed: Regime,
        got: Regime,
    },
}

/// Range of `alpha` relative to the spatial dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `0 < alpha <= 1`
    Low,
    /// `1 < alpha <= n`
    Mid,
    /// `n < alpha <= n+1`
    High,
}

/// Which term of the piecewise maximum binds.
///
/// Each term is named for the concentration example that saturates it:
/// `Knapp` for the full-shell scaling example, `Plate` for a single dual
/// plate, `Lattice` for the plate-train / purely `alpha`-driven term.
/// Ties report the first branch in the order `Knapp`, `Plate`, `Lattice`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Knapp,
    Plate,
    Lattice,
}

/// Validated `(alpha, q, n)` triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentQuery {
    pub alpha: Rational,
    pub q: QVal,
    pub n: u32,
}

impl ExponentQuery {
    /// Requires `0 < alpha <= n+1`, `q >= 1`, `n >= 2`.
    pub fn new(alpha: Rational, q: QVal, n: u32) -> Result<Self, ExponentError> {
        if n < 2 {
            return Err(ExponentError::DimensionOutOfRange(n));
        }
        if alpha <= Rational::zero() || alpha > Rational::integer(n as i64 + 1) {
            return Err(ExponentError::AlphaOutOfRange(alpha));
        }
        if !q.at_least(Rational::one()) {
            return Err(ExponentError::QOutOfRange(q, Rational::one()));
        }
        Ok(ExponentQuery { alpha, q, n })
    }

    pub fn regime(&self) -> Regime {
        regime_of(self.alpha, self.n)
    }
}

/// Value of a piecewise-max exponent together with the binding branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentValue {
    pub value: Rational,
    pub branch: Branch,
    pub regime: Regime,
}

/// Concentration example families whose scaling exponents the experiments
/// reproduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExampleFamily {
    KnappCone,
    Plate,
    LatticeMid,
    LatticeHigh,
}

pub fn regime_of(alpha: Rational, n: u32) -> Regime {
    if alpha <= Rational::one() {
        Regime::Low
    } else if alpha <= Rational::integer(n as i64) {
        Regime::Mid
    } else {
        Regime::High
    }
}

fn max_with_branch(terms: &[(Branch, Rational)]) -> (Rational, Branch) {
    let mut best = terms[0];
    for &(b, v) in &terms[1..] {
        if v > best.1 {
            best = (b, v);
        }
    }
    (best.1, best.0)
}

fn half(v: i64) -> Rational {
    Rational::new(v, 2)
}

fn quarter(v: i64) -> Rational {
    Rational::new(v, 4)
}

/// Scaling term `n/2 - alpha/q`, saturated by data filling a full dyadic
/// cone shell against a radial power measure.
fn knapp_term(alpha: Rational, qinv: Rational, n: i64) -> Rational {
    half(n) - alpha * qinv
}

/// Critical exponent forced by the concentration examples: below it, the
/// extension inequality fails for some `alpha`-dimensional measure.
pub fn s_necessary(query: &ExponentQuery) -> Result<ExponentValue, ExponentError> {
    let (alpha, qinv, n) = (query.alpha, query.q.inv(), query.n as i64);
    let regime = query.regime();
    let knapp = knapp_term(alpha, qinv, n);
    let one = Rational::one();
    let terms: Vec<(Branch, Rational)> = match regime {
        Regime::Low => vec![(Branch::Knapp, knapp), (Branch::Plate, quarter(n + 1))],
        Regime::Mid => vec![
            (Branch::Knapp, knapp),
            (Branch::Plate, quarter(n + 1) + (one - alpha) * qinv / Rational::integer(2)),
            (Branch::Lattice, quarter(n + 2) - alpha / Rational::integer(4)),
        ],
        Regime::High => vec![
            (Branch::Knapp, knapp),
            (
                Branch::Plate,
                quarter(n + 1)
                    + (Rational::integer(n + 1) - Rational::integer(2) * alpha) * qinv
                        / Rational::integer(2),
            ),
            (Branch::Lattice, half(n + 1) - alpha / Rational::integer(2)),
        ],
    };
    let (value, branch) = max_with_branch(&terms);
    Ok(ExponentValue {
        value,
        branch,
        regime,
    })
}

/// Exponent above which the bilinear-to-linear machinery proves the
/// extension inequality (for `n >= 3`; the formula is still evaluated for
/// `n = 2`, where it is not known to dominate [`s_necessary`] for
/// `q < 2`).
///
/// Differs from [`s_necessary`] only in the third (`Lattice`-slot) term:
/// `(3n+1)/8 - alpha/4` in the `Low`/`Mid` ranges — which also joins the
/// `Low` range, making it three terms — and `(n+1-alpha)/2` in `High`
/// (equal to the corresponding term of [`s_necessary`], so the two
/// functions agree identically there).
pub fn s_sufficient(query: &ExponentQuery) -> Result<ExponentValue, ExponentError> {
    let (alpha, qinv, n) = (query.alpha, query.q.inv(), query.n as i64);
    let regime = query.regime();
    let knapp = knapp_term(alpha, qinv, n);
    let one = Rational::one();
    let two = Rational::integer(2);
    let smoothing = Rational::new(3 * n + 1, 8) - alpha / Rational::integer(4);
    let terms: Vec<(Branch, Rational)> = match regime {
        Regime::Low => vec![
            (Branch::Knapp, knapp),
            (Branch::Plate, quarter(n + 1)),
            (Branch::Lattice, smoothing),
        ],
        Regime::Mid => vec![
            (Branch::Knapp, knapp),
            (Branch::Plate, quarter(n + 1) + (one - alpha) * qinv / two),
            (Branch::Lattice, smoothing),
        ],
        Regime::High => vec![
            (Branch::Knapp, knapp),
            (
                Branch::Plate,
                quarter(n + 1) + (Rational::integer(n + 1) - two * alpha) * qinv / two,
            ),
            (Branch::Lattice, (Rational::integer(n + 1) - alpha) / two),
        ],
    };
    let (value, branch) = max_with_branch(&terms);
    Ok(ExponentValue {
        value,
        branch,
        regime,
    })
}

/// `s_sufficient - s_necessary`.  Zero exactly where the two-sided theory
/// is sharp; nonnegative whenever `n >= 3`.
pub fn sharpness_gap(query: &ExponentQuery) -> Result<Rational, ExponentError> {
    Ok(s_sufficient(query)?.value - s_necessary(query)?.value)
}

/// Decay exponent of the bilinear estimate for angularly separated data on
/// the shell: `max{ n/2 - alpha/q, (3n+1-2alpha)/8 }`.  Needs `q >= 2`.
pub fn beta_bilinear(alpha: Rational, q: QVal, n: u32) -> Result<Rational, ExponentError> {
    let query = ExponentQuery::new(alpha, q, n)?;
    if !q.at_least(Rational::integer(2)) {
        return Err(ExponentError::QOutOfRange(q, Rational::integer(2)));
    }
    let n = n as i64;
    let knapp = knapp_term(query.alpha, q.inv(), n);
    let smoothing =
        (Rational::integer(3 * n + 1) - Rational::integer(2) * alpha) / Rational::integer(8);
    Ok(knapp.max(smoothing))
}

/// Exponent of the dyadic-angle gain when a bilinear bound at separation
/// `~ 1` is rescaled to separation `2^-j`: the rescaled constant carries
/// `2^(gamma j)` with `gamma = -4 beta + (range-dependent q-term) + n + 1`.
///
/// `alpha = 1` sits in the `Low` arm; the `Mid` arm's q-term vanishes
/// there, so the two agree (asserted in tests).
pub fn gamma_rescale(
    alpha: Rational,
    beta: Rational,
    q: QVal,
    n: u32,
) -> Result<Rational, ExponentError> {
    let query = ExponentQuery::new(alpha, q, n)?;
    if !q.at_least(Rational::integer(2)) {
        return Err(ExponentError::QOutOfRange(q, Rational::integer(2)));
    }
    let n = n as i64;
    let two = Rational::integer(2);
    let qterm = match query.regime() {
        Regime::Low => Rational::zero(),
        Regime::Mid => two * (Rational::one() - alpha) * q.inv(),
        Regime::High => two * (Rational::integer(n + 1) - two * alpha) * q.inv(),
    };
    Ok(-Rational::integer(4) * beta + qterm + Rational::integer(n + 1))
}

/// Exponent of the near-diagonal (small-angle) part of the shell estimate:
/// `(n+1)/4` plus the range-dependent `q`-term.  This is also the exact
/// threshold at which [`gamma_rescale`] changes sign in `beta`.
pub fn beta_diag(alpha: Rational, q: QVal, n: u32) -> Result<Rational, ExponentError> {
    let query = ExponentQuery::new(alpha, q, n)?;
    if !q.at_least(Rational::integer(2)) {
        return Err(ExponentError::QOutOfRange(q, Rational::integer(2)));
    }
    let n = n as i64;
    let two = Rational::integer(2);
    let qterm = match query.regime() {
        Regime::Low => Rational::zero(),
        Regime::Mid => (Rational::one() - alpha) * q.inv() / two,
        Regime::High => (Rational::integer(n + 1) - two * alpha) * q.inv() / two,
    };
    Ok(quarter(n + 1) + qterm)
}

/// Admissibility test for the classical (Lebesgue-measure) space-time
/// estimate: the scaling identity `1/q + n/r = n/2 - s` together with
/// `1/q + (n-1)/(2r) <= (n-1)/4`, for `2 <= q, r < infinity` and `s >= 0`.
pub fn classical_admissible(
    q: QVal,
    r: QVal,
    n: u32,
    s: Rational,
) -> Result<bool, ExponentError> {
    if n < 2 {
        return Err(ExponentError::DimensionOutOfRange(n));
    }
    let two = Rational::integer(2);
    let (qv, rv) = match (q, r) {
        (QVal::Finite(qv), QVal::Finite(rv)) => (qv, rv),
        (QVal::Infinity, _) => return Err(ExponentError::QOutOfRange(q, two)),
        (_, QVal::Infinity) => return Err(ExponentError::ROutOfRange(r)),
    };
    if qv < two {
        return Err(ExponentError::QOutOfRange(q, two));
    }
    if rv < two {
        return Err(ExponentError::ROutOfRange(r));
    }
    if s.is_negative() {
        return Err(ExponentError::AlphaOutOfRange(s));
    }
    let n = n as i64;
    let scaling = q.inv() + Rational::integer(n) * r.inv() == half(n) - s;
    let admissible =
        q.inv() + Rational::integer(n - 1) * r.inv() / two <= quarter(n - 1);
    Ok(scaling && admissible)
}

/// Lower-bound exponent each concentration example forces, i.e. the slope
/// its norm-ratio ladder should exhibit.
pub fn predicted_example_slope(
    family: ExampleFamily,
    alpha: Rational,
    q: QVal,
    n: u32,
) -> Result<Rational, ExponentError> {
    let query = ExponentQuery::new(alpha, q, n)?;
    let regime = query.regime();
    let n = n as i64;
    let two = Rational::integer(2);
    match family {
        ExampleFamily::KnappCone => Ok(knapp_term(alpha, q.inv(), n)),
        ExampleFamily::Plate => {
            let qterm = match regime {
                Regime::Low => Rational::zero(),
                Regime::Mid => (Rational::one() - alpha) * q.inv() / two,
                Regime::High => (Rational::integer(n + 1) - two * alpha) * q.inv() / two,
            };
            Ok(quarter(n + 1) + qterm)
        }
        ExampleFamily::LatticeMid => {
            if regime != Regime::Mid {
                return Err(ExponentError::RegimeMismatch {
                    family,
                    needed: Regime::Mid,
                    got: regime,
                });
            }
            Ok(quarter(n + 2) - alpha / Rational::integer(4))
        }
        ExampleFamily::LatticeHigh => {
            if regime != Regime::High {
                return Err(ExponentError::RegimeMismatch {
                    family,
                    needed: Regime::High,
                    got: regime,
                });
            }
            Ok(half(n + 1) - alpha / two)
        }
    }
}

// =======================================================================
// tests
// =======================================================================

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> QVal {
        QVal::integer(v)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn query(alpha: Rational, qv: QVal, n: u32) -> ExponentQuery {
        ExponentQuery::new(alpha, qv, n).unwrap()
    }

    // ---- golden values, checked by hand before freezing ----

    #[test]
    fn necessary_golden_values() {
        let v = s_necessary(&query(rat(2, 1), q(2), 3)).unwrap();
        assert_eq!(v.value, rat(3, 4));
        assert_eq!(v.branch, Branch::Plate); // tie Plate/Lattice -> Plate
        assert_eq!(v.regime, Regime::Mid);

        let v = s_necessary(&query(rat(4, 1), q(2), 3)).unwrap();
        assert_eq!(v.value, Rational::zero());
        assert_eq!(v.branch, Branch::Plate); // tie with Lattice
        assert_eq!(v.regime, Regime::High);

        let v = s_necessary(&query(rat(3, 1), QVal::Infinity, 3)).unwrap();
        assert_eq!(v.value, rat(3, 2));
        assert_eq!(v.branch, Branch::Knapp);

        let v = s_necessary(&query(rat(2, 1), q(4), 2)).unwrap();
        assert_eq!(v.value, rat(5, 8));
        assert_eq!(v.branch, Branch::Plate);
    }

    #[test]
    fn sufficient_golden_values() {
        assert_eq!(
            s_sufficient(&query(rat(2, 1), q(2), 3)).unwrap().value,
            rat(3, 4)
        );
        assert_eq!(
            s_sufficient(&query(rat(2, 1), q(2), 4)).unwrap().value,
            rat(9, 8)
        );
        assert_eq!(
            s_sufficient(&query(rat(7, 2), q(2), 3)).unwrap().value,
            rat(1, 4)
        );
    }

    #[test]
    fn gap_golden_values() {
        assert_eq!(
            sharpness_gap(&query(rat(2, 1), q(2), 3)).unwrap(),
            Rational::zero()
        );
        assert_eq!(sharpness_gap(&query(rat(3, 1), q(2), 4)).unwrap(), rat(1, 8));
        assert_eq!(
            sharpness_gap(&query(rat(1, 2), q(8), 3)).unwrap(),
            Rational::zero()
        );
        // The binding branch in that last case is the scaling term in both.
        assert_eq!(
            s_necessary(&query(rat(1, 2), q(8), 3)).unwrap().value,
            rat(23, 16)
        );
    }

    #[test]
    fn beta_bilinear_golden_values() {
        assert_eq!(beta_bilinear(rat(2, 1), q(2), 3).unwrap(), rat(3, 4));
        assert_eq!(beta_bilinear(rat(4, 1), q(4), 3).unwrap(), rat(1, 2));
        assert_eq!(beta_bilinear(rat(3, 1), q(2), 2).unwrap(), rat(1, 8));
        assert!(matches!(
            beta_bilinear(rat(2, 1), QVal::finite(3, 2), 3),
            Err(ExponentError::QOutOfRange(_, _))
        ));
    }

    #[test]
    fn gamma_rescale_golden_values() {
        assert_eq!(
            gamma_rescale(rat(2, 1), rat(3, 4), q(2), 3).unwrap(),
            Rational::zero()
        );
        assert_eq!(
            gamma_rescale(rat(4, 1), rat(1, 2), q(2), 3).unwrap(),
            rat(-2, 1)
        );
        // alpha = 1 is served by the Low arm; the Mid arm's q-term vanishes
        // there, so computing the Mid expression directly must agree.
        let low = gamma_rescale(Rational::one(), Rational::one(), q(2), 3).unwrap();
        let mid_expr = -Rational::integer(4) * Rational::one()
            + Rational::integer(2) * (Rational::one() - Rational::one()) * q(2).inv()
            + Rational::integer(4);
        assert_eq!(low, Rational::zero());
        assert_eq!(low, mid_expr);
    }

    #[test]
    fn beta_diag_golden_values() {
        assert_eq!(beta_diag(rat(2, 1), q(2), 3).unwrap(), rat(3, 4));
        assert_eq!(beta_diag(rat(4, 1), q(4), 3).unwrap(), rat(1, 2));
        assert_eq!(beta_diag(rat(1, 2), q(2), 3).unwrap(), Rational::one());
    }

    #[test]
    fn classical_admissible_golden_values() {
        assert!(classical_admissible(q(4), q(4), 3, rat(1, 2)).unwrap());
        assert!(!classical_admissible(q(2), q(2), 3, rat(1, 2)).unwrap());
        assert!(matches!(
            classical_admissible(q(4), QVal::Infinity, 3, rat(1, 2)),
            Err(ExponentError::ROutOfRange(_))
        ));
        assert!(matches!(
            classical_admissible(QVal::finite(3, 2), q(4), 3, rat(1, 2)),
            Err(ExponentError::QOutOfRange(_, _))
        ));
    }

    #[test]
    fn example_slope_golden_values() {
        assert_eq!(
            predicted_example_slope(ExampleFamily::KnappCone, rat(3, 2), q(2), 2).unwrap(),
            rat(1, 4)
        );
        assert_eq!(
            predicted_example_slope(ExampleFamily::Plate, rat(2, 1), q(2), 3).unwrap(),
            rat(3, 4)
        );
        assert_eq!(
            predicted_example_slope(ExampleFamily::LatticeHigh, rat(7, 2), q(2), 3).unwrap(),
            rat(1, 4)
        );
        assert!(matches!(
            predicted_example_slope(ExampleFamily::LatticeMid, rat(7, 2), q(2), 3),
            Err(ExponentError::RegimeMismatch { .. })
        ));
        // Plate slope equals beta_diag wherever both are defined (q >= 2).
        for &(a, b) in &[(1i64, 2i64), (2, 1), (5, 2), (7, 2)] {
            let alpha = rat(a, b);
            assert_eq!(
                predicted_example_slope(ExampleFamily::Plate, alpha, q(2), 3).unwrap(),
                beta_diag(alpha, q(2), 3).unwrap()
            );
        }
    }

    // ---- structural properties over grids ----

    fn alpha_grid(n: u32, step_denom: i64) -> Vec<Rational> {
        // 1/step_denom increments over (0, n+1].
        (1..=(n as i64 + 1) * step_denom)
            .map(|k| Rational::new(k, step_denom))
            .collect()
    }

    fn q_grid() -> Vec<QVal> {
        vec![
            QVal::integer(1),
            QVal::finite(3, 2),
            QVal::integer(2),
            QVal::finite(5, 2),
            QVal::integer(3),
            QVal::integer(4),
            QVal::integer(8),
            QVal::Infinity,
        ]
    }

    #[test]
    fn sharpness_region_identity_n3() {
        // On 1 <= alpha <= 4 with q >= 2, the two exponents agree exactly.
        let qs = [
            QVal::integer(2),
            QVal::finite(5, 2),
            QVal::integer(3),
            QVal::integer(4),
            QVal::integer(8),
            QVal::Infinity,
        ];
        for k in 4..=16 {
            let alpha = Rational::new(k, 4);
            for &qv in &qs {
                let qq = query(alpha, qv, 3);
                assert_eq!(
                    s_sufficient(&qq).unwrap().value,
                    s_necessary(&qq).unwrap().value,
                    "alpha={alpha} q={qv}"
                );
            }
            // The key identity that makes n = 3 special.
            let n = 3i64;
            assert_eq!(
                (Rational::integer(3 * n + 1) - Rational::integer(2) * alpha)
                    / Rational::integer(8),
                (Rational::integer(n + 2) - alpha) / Rational::integer(4)
            );
        }
    }

    #[test]
    fn gap_nonnegative_for_n_at_least_3() {
        for n in [3u32, 4, 5] {
            for alpha in alpha_grid(n, 4) {
                for qv in q_grid() {
                    let gap = sharpness_gap(&query(alpha, qv, n)).unwrap();
                    assert!(
                        !gap.is_negative(),
                        "negative gap at n={n} alpha={alpha} q={qv}"
                    );
                }
            }
        }
        // For n = 2 the sufficiency formula is outside its proven range
        // when q < 2 and can dip below the necessary exponent; keep one
        // witness pinned so the n >= 3 scoping above stays deliberate.
        let witness = query(rat(2, 1), QVal::finite(3, 2), 2);
        assert!(sharpness_gap(&witness).unwrap().is_negative());
    }

    #[test]
    fn necessary_monotone_in_q_and_alpha() {
        // Nondecreasing in q (1/q shrinks, every q-coefficient is <= 0),
        // nonincreasing in alpha.
        for n in [2u32, 3, 4] {
            for alpha in alpha_grid(n, 4) {
                let mut prev: Option<Rational> = None;
                for qv in q_grid() {
                    let v = s_necessary(&query(alpha, qv, n)).unwrap().value;
                    if let Some(p) = prev {
                        assert!(v >= p, "not nondecreasing in q at n={n} alpha={alpha}");
                    }
                    prev = Some(v);
                }
            }
            for qv in q_grid() {
                let mut prev: Option<Rational> = None;
                for alpha in alpha_grid(n, 8) {
                    let v = s_necessary(&query(alpha, qv, n)).unwrap().value;
                    if let Some(p) = prev {
                        assert!(v <= p, "not nonincreasing in alpha at n={n} q={qv}");
                    }
                    prev = Some(v);
                }
            }
        }
    }

    #[test]
    fn necessary_continuous_across_regime_joins() {
        // Evaluate the adjacent-range formulas at the joins alpha = 1 and
        // alpha = n and check they give the same maximum.
        for n in [2u32, 3, 4, 5] {
            for qv in q_grid() {
                let ni = n as i64;
                let qinv = qv.inv();
                // alpha = 1: Low value vs Mid formula evaluated at 1.
                let low = s_necessary(&query(Rational::one(), qv, n)).unwrap().value;
                let mid_at_1 = [
                    half(ni) - qinv,
                    quarter(ni + 1),
                    quarter(ni + 2) - rat(1, 4),
                ]
                .into_iter()
                .max()
                .unwrap();
                assert_eq!(low, mid_at_1, "join at alpha=1, n={n} q={qv}");
                // alpha = n: Mid value vs High formula evaluated at n.
                let mid = s_necessary(&query(Rational::integer(ni), qv, n))
                    .unwrap()
                    .value;
                let high_at_n = [
                    half(ni) - Rational::integer(ni) * qinv,
                    quarter(ni + 1)
                        + (Rational::integer(ni + 1) - Rational::integer(2 * ni)) * qinv
                            / Rational::integer(2),
                    half(ni + 1) - half(ni),
                ]
                .into_iter()
                .max()
                .unwrap();
                assert_eq!(mid, high_at_n, "join at alpha=n, n={n} q={qv}");
            }
        }
    }

    #[test]
    fn sufficient_continuity_scoped_to_n3() {
        // Continuous at both joins when n = 3 ...
        for qv in q_grid() {
            let at_3 = s_sufficient(&query(rat(3, 1), qv, 3)).unwrap().value;
            let high_at_3 = [
                half(3) - Rational::integer(3) * qv.inv(),
                Rational::one() + (Rational::integer(4) - Rational::integer(6)) * qv.inv()
                    / Rational::integer(2),
                half(4) - rat(3, 2),
            ]
            .into_iter()
            .max()
            .unwrap();
            assert_eq!(at_3, high_at_3, "q={qv}");
        }
        // ... but genuinely jumps at alpha = n when n = 4: the third terms
        // evaluate to (n+1)/8 vs 1/2 there, and at q = 2 they bind.
        let mid_side = s_sufficient(&query(rat(4, 1), q(2), 4)).unwrap().value;
        assert_eq!(mid_side, rat(5, 8));
        let high_formula_at_4 = [
            Rational::zero(),
            quarter(5) + (Rational::integer(5) - Rational::integer(8)) * rat(1, 2)
                / Rational::integer(2),
            half(1),
        ]
        .into_iter()
        .max()
        .unwrap();
        assert_eq!(high_formula_at_4, rat(1, 2));
    }

    #[test]
    fn gamma_sign_matches_beta_diag_threshold() {
        // gamma(alpha, beta, q, n) <= 0 exactly when beta >= beta_diag.
        let betas: Vec<Rational> = (0..=12).map(|k| Rational::new(k, 8)).collect();
        for n in [2u32, 3] {
            for alpha in alpha_grid(n, 2) {
                for qv in [QVal::integer(2), QVal::integer(4), QVal::Infinity] {
                    let threshold = beta_diag(alpha, qv, n).unwrap();
                    for &beta in &betas {
                        let gamma = gamma_rescale(alpha, beta, qv, n).unwrap();
                        assert_eq!(
                            gamma <= Rational::zero(),
                            beta >= threshold,
                            "n={n} alpha={alpha} q={qv} beta={beta}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            ExponentQuery::new(Rational::zero(), q(2), 3),
            Err(ExponentError::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            ExponentQuery::new(rat(9, 2), q(2), 3),
            Err(ExponentError::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            ExponentQuery::new(rat(2, 1), QVal::finite(1, 2), 3),
            Err(ExponentError::QOutOfRange(_, _))
        ));
        assert!(matches!(
            ExponentQuery::new(rat(1, 1), q(2), 1),
            Err(ExponentError::DimensionOutOfRange(1))
        ));
    }

    #[test]
    fn tie_breaking_is_first_in_branch_order() {
        // alpha = n, q = infinity makes Knapp = n/2 the unique max; push q
        // down until Plate/Lattice tie and check the reported branch.
        let v = s_necessary(&query(rat(2, 1), q(2), 3)).unwrap();
        assert_eq!(v.branch, Branch::Plate);
        // A Knapp/Plate tie: n = 3, Low, q with 3/2 - alpha/q = 1.
        let v = s_necessary(&query(Rational::one(), q(2), 3)).unwrap();
        assert_eq!(v.value, Rational::one());
        assert_eq!(v.branch, Branch::Knapp);
    }
}
