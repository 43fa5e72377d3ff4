//! Oscillation envelopes for time-dependent functions on a compact space.
//!
//! A [`ContactEnvelope`] keeps exactly the statistics every in-scope formula
//! consumes: piecewise-constant-in-time upper and lower bounds on [0,1], and
//! a declared spectrum of forbidden values. From these come the oscillation
//! integrals, concatenation, the triangle-inequality arithmetic, and the
//! Fekete bracket for the subadditive limit c̃_k/k.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Violation};
use crate::field::{format_rational, Rational};

fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Piecewise-constant-in-time envelope of a function on [0,1]: on the piece
/// `[breakpoints[p], breakpoints[p+1]]` the function stays within
/// `[min_env[p], max_env[p]]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContactEnvelope {
    /// Strictly increasing, starting at 0 and ending at 1.
    pub breakpoints: Vec<Rational>,
    /// Per-piece upper bound; one entry per consecutive breakpoint pair.
    pub max_env: Vec<Rational>,
    /// Per-piece lower bound.
    pub min_env: Vec<Rational>,
    /// Declared forbidden values, strictly increasing.
    pub spectrum: Vec<Rational>,
}

impl ContactEnvelope {
    /// A constant envelope pinching the function to a single value.
    pub fn constant(value: Rational) -> ContactEnvelope {
        ContactEnvelope {
            breakpoints: alloc::vec![rint(0), rint(1)],
            max_env: alloc::vec![value.clone()],
            min_env: alloc::vec![value],
            spectrum: Vec::new(),
        }
    }

    pub fn pieces(&self) -> usize {
        self.max_env.len()
    }

    /// Checks the structural invariants: breakpoints partition [0,1]
    /// increasingly, envelope lengths match, max ≥ min on every piece, and
    /// the spectrum is strictly increasing.
    pub fn validate(&self) -> Result<(), Violation> {
        if self.breakpoints.len() < 2 {
            return Err(Violation("fewer than two breakpoints".into()));
        }
        if self.breakpoints[0] != rint(0) {
            return Err(Violation("breakpoints do not start at 0".into()));
        }
        if *self.breakpoints.last().expect("nonempty") != rint(1) {
            return Err(Violation("breakpoints do not end at 1".into()));
        }
        for p in 1..self.breakpoints.len() {
            if self.breakpoints[p - 1] >= self.breakpoints[p] {
                return Err(Violation(format!(
                    "breakpoints are not strictly increasing at index {p}"
                )));
            }
        }
        let pieces = self.breakpoints.len() - 1;
        if self.max_env.len() != pieces || self.min_env.len() != pieces {
            return Err(Violation(format!(
                "envelope has {} max and {} min entries for {} pieces",
                self.max_env.len(),
                self.min_env.len(),
                pieces
            )));
        }
        for p in 0..pieces {
            if self.max_env[p] < self.min_env[p] {
                return Err(Violation(format!(
                    "max below min on piece {p}"
                )));
            }
        }
        for i in 1..self.spectrum.len() {
            if self.spectrum[i - 1] >= self.spectrum[i] {
                return Err(Violation(format!(
                    "spectrum is not strictly increasing at index {i}"
                )));
            }
        }
        Ok(())
    }

    /// The total oscillation ∫₀¹ (max − min) dt, an exact sum over pieces.
    pub fn osc(&self) -> Rational {
        let mut total = rint(0);
        for p in 0..self.pieces() {
            let length = &self.breakpoints[p + 1] - &self.breakpoints[p];
            total += (&self.max_env[p] - &self.min_env[p]) * length;
        }
        total
    }

    /// The worst single-time oscillation max_t (max − min): the maximum of
    /// the per-piece oscillations.
    pub fn oscbar(&self) -> Rational {
        (0..self.pieces())
            .map(|p| &self.max_env[p] - &self.min_env[p])
            .max()
            .unwrap_or_else(|| rint(0))
    }

    /// Index of the piece containing time `t`, for 0 ≤ t < 1.
    fn piece_at(&self, t: &Rational) -> usize {
        self.breakpoints.partition_point(|b| b <= t) - 1
    }
}

/// The asymmetric pair oscillation ∫₀¹ (max h − min g) dt, evaluated on the
/// common refinement of the two breakpoint partitions.
pub fn osc_pair(h: &ContactEnvelope, g: &ContactEnvelope) -> Rational {
    let mut points: Vec<Rational> = h
        .breakpoints
        .iter()
        .chain(g.breakpoints.iter())
        .cloned()
        .collect();
    points.sort();
    points.dedup();
    let mut total = rint(0);
    for w in points.windows(2) {
        let hp = h.piece_at(&w[0]);
        let gp = g.piece_at(&w[0]);
        total += (&h.max_env[hp] - &g.min_env[gp]) * (&w[1] - &w[0]);
    }
    total
}

/// The interleaving bound 2·max(osc(h,g), osc(g,h)) controlling how far the
/// two modules' invariants can drift apart.
pub fn m_hg(h: &ContactEnvelope, g: &ContactEnvelope) -> Rational {
    let hg = osc_pair(h, g);
    let gh = osc_pair(g, h);
    rint(2) * hg.max(gh)
}

/// How envelope values transform under time-compressed concatenation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ConcatConvention {
    /// Values pass through unchanged; time is compressed. The worst
    /// single-time oscillation of a k-fold self-concatenation equals that of
    /// one copy, which is what the quasi-state pipeline relies on.
    #[default]
    ValuePreserving,
    /// Values double (speed-2 reparametrization of the generating function),
    /// making the total oscillation additive: osc(h # g) = osc(h) + osc(g).
    FlowRescaled,
}

/// Concatenates two envelopes: h's pieces compressed into [0, 1/2], g's into
/// [1/2, 1], values transformed per the convention, spectra merged.
pub fn concatenate(
    h: &ContactEnvelope,
    g: &ContactEnvelope,
    convention: ConcatConvention,
) -> ContactEnvelope {
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let mut breakpoints: Vec<Rational> =
        h.breakpoints.iter().map(|b| b * &half).collect();
    breakpoints.extend(g.breakpoints.iter().skip(1).map(|b| b * &half + &half));

    let rescale = |v: &Rational| match convention {
        ConcatConvention::ValuePreserving => v.clone(),
        ConcatConvention::FlowRescaled => v * rint(2),
    };
    let max_env = h.max_env.iter().chain(g.max_env.iter()).map(rescale).collect();
    let min_env = h.min_env.iter().chain(g.min_env.iter()).map(rescale).collect();

    let mut spectrum: Vec<Rational> = h
        .spectrum
        .iter()
        .chain(g.spectrum.iter())
        .cloned()
        .collect();
    spectrum.sort();
    spectrum.dedup();

    ContactEnvelope {
        breakpoints,
        max_env,
        min_env,
        spectrum,
    }
}

/// The corrected invariant c̃ = c + 3·osc̄, the quantity that is subadditive
/// under concatenation.
pub fn tilde_c(c: &Rational, oscbar_h: &Rational) -> Rational {
    c + rint(3) * oscbar_h
}

/// The triangle inequality for product classes:
/// c_product ≤ c_theta + c_eta + 3·max(osc̄ h, osc̄ g).
pub fn check_triangle(
    c_theta: &Rational,
    c_eta: &Rational,
    c_product: &Rational,
    oscbar_h: &Rational,
    oscbar_g: &Rational,
) -> bool {
    let worst = oscbar_h.clone().max(oscbar_g.clone());
    *c_product <= c_theta + c_eta + rint(3) * worst
}

/// Exact bracket around the subadditive limit lim c̃_k/k: the infimum over
/// the available window (which Fekete's lemma makes the limit as the window
/// grows) and the value at the horizon.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FeketeBracket {
    /// inf over k ≤ K of c̃_k/k.
    pub inf: Rational,
    /// c̃_K/K at the horizon K.
    pub current: Rational,
}

/// Verifies subadditivity c̃_{j+k} ≤ c̃_j + c̃_k on the 1-indexed window and
/// returns the exact bracket; reports the first violating pair otherwise.
pub fn fekete_limit(ctilde: &[Rational]) -> Result<FeketeBracket, Error> {
    let horizon = ctilde.len();
    if horizon == 0 {
        return Err(Error::Argument(
            "fekete_limit needs at least one value".into(),
        ));
    }
    for j in 1..=horizon {
        for k in j..=horizon {
            if j + k > horizon {
                break;
            }
            let sum = &ctilde[j - 1] + &ctilde[k - 1];
            if ctilde[j + k - 1] > sum {
                return Err(Error::Invalid(Violation(format!(
                    "subadditivity fails at the pair ({j}, {k}): value {} at {} exceeds {}",
                    format_rational(&ctilde[j + k - 1]),
                    j + k,
                    format_rational(&sum)
                ))));
            }
        }
    }
    let inf = (1..=horizon)
        .map(|k| &ctilde[k - 1] / rint(k as i64))
        .min()
        .expect("nonempty");
    let current = &ctilde[horizon - 1] / rint(horizon as i64);
    Ok(FeketeBracket { inf, current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int};
    use alloc::vec;

    /// Two pieces of length 1/2 with the given bounds.
    fn two_piece(bounds: [(i64, i64); 2]) -> ContactEnvelope {
        ContactEnvelope {
            breakpoints: vec![rat_int(0), rat(1, 2), rat_int(1)],
            max_env: vec![rat_int(bounds[0].1), rat_int(bounds[1].1)],
            min_env: vec![rat_int(bounds[0].0), rat_int(bounds[1].0)],
            spectrum: vec![],
        }
    }

    #[test]
    fn constant_envelope_has_zero_oscillation() {
        let h = ContactEnvelope::constant(rat_int(5));
        assert_eq!(h.validate(), Ok(()));
        assert_eq!(h.osc(), rat_int(0));
        assert_eq!(h.oscbar(), rat_int(0));
    }

    #[test]
    fn unit_band_has_unit_oscillation() {
        let h = ContactEnvelope {
            breakpoints: vec![rat_int(0), rat_int(1)],
            max_env: vec![rat_int(1)],
            min_env: vec![rat_int(0)],
            spectrum: vec![],
        };
        assert_eq!(h.osc(), rat_int(1));
    }

    #[test]
    fn oscillation_integrates_piece_by_piece() {
        // Pieces of length 1/2 with oscillations 1 and 3: ∫ = 1/2 + 3/2 = 2.
        let h = two_piece([(0, 1), (0, 3)]);
        assert_eq!(h.osc(), rat_int(2));
        assert_eq!(h.oscbar(), rat_int(3));
        assert!(h.oscbar() >= h.osc());
    }

    #[test]
    fn invalid_envelopes_are_reported() {
        let mut h = ContactEnvelope::constant(rat_int(0));
        h.breakpoints[1] = rat(1, 2);
        assert!(h.validate().unwrap_err().0.contains("end at 1"));
        let mut h = ContactEnvelope::constant(rat_int(0));
        h.min_env[0] = rat_int(1);
        assert!(h.validate().unwrap_err().0.contains("max below min"));
    }

    #[test]
    fn pair_oscillation_of_equal_constants_is_zero() {
        let h = ContactEnvelope::constant(rat_int(3));
        assert_eq!(osc_pair(&h, &h), rat_int(0));
    }

    #[test]
    fn pair_oscillation_integrates_across_envelopes() {
        // h within [0,1], g within [−1,2]: max h − min g ≡ 2 and
        // max g − min h ≡ 2.
        let h = two_piece([(0, 1), (0, 1)]);
        let g = two_piece([(-1, 2), (-1, 2)]);
        assert_eq!(osc_pair(&h, &g), rat_int(2));
        assert_eq!(osc_pair(&g, &h), rat_int(2));
        assert_eq!(m_hg(&h, &g), rat_int(4));
    }

    #[test]
    fn pair_oscillation_sums_to_the_individual_oscillations() {
        let h = two_piece([(0, 2), (1, 1)]);
        let g = ContactEnvelope {
            breakpoints: vec![rat_int(0), rat(1, 3), rat_int(1)],
            max_env: vec![rat_int(4), rat_int(0)],
            min_env: vec![rat_int(-1), rat_int(-2)],
            spectrum: vec![],
        };
        assert_eq!(
            osc_pair(&h, &g) + osc_pair(&g, &h),
            h.osc() + g.osc()
        );
    }

    #[test]
    fn self_pair_bound_is_twice_the_oscillation() {
        let h = two_piece([(0, 1), (0, 3)]);
        assert_eq!(m_hg(&h, &h), rat_int(2) * h.osc());
    }

    #[test]
    fn concatenating_zero_envelopes_gives_zero() {
        let zero = ContactEnvelope::constant(rat_int(0));
        for convention in [ConcatConvention::ValuePreserving, ConcatConvention::FlowRescaled] {
            let joined = concatenate(&zero, &zero, convention);
            assert_eq!(joined.validate(), Ok(()));
            assert_eq!(joined.osc(), rat_int(0));
            assert_eq!(joined.oscbar(), rat_int(0));
        }
    }

    #[test]
    fn flow_rescaled_concatenation_adds_oscillations() {
        let h = two_piece([(0, 2), (1, 1)]);
        let g = two_piece([(-1, 2), (0, 3)]);
        let joined = concatenate(&h, &g, ConcatConvention::FlowRescaled);
        assert_eq!(joined.validate(), Ok(()));
        assert_eq!(joined.osc(), h.osc() + g.osc());
    }

    #[test]
    fn paper_concatenation_preserves_worst_oscillation_under_self_joins() {
        let h = two_piece([(0, 1), (0, 3)]);
        let mut folded = h.clone();
        for _ in 0..3 {
            folded = concatenate(&folded, &h, ConcatConvention::ValuePreserving);
        }
        assert_eq!(folded.validate(), Ok(()));
        assert_eq!(folded.oscbar(), h.oscbar());
    }

    #[test]
    fn concatenation_merges_spectra() {
        let mut h = ContactEnvelope::constant(rat_int(0));
        h.spectrum = vec![rat_int(0), rat_int(2)];
        let mut g = ContactEnvelope::constant(rat_int(0));
        g.spectrum = vec![rat_int(1), rat_int(2)];
        let joined = concatenate(&h, &g, ConcatConvention::ValuePreserving);
        assert_eq!(joined.spectrum, vec![rat_int(0), rat_int(1), rat_int(2)]);
    }

    #[test]
    fn corrected_invariant_arithmetic() {
        assert_eq!(tilde_c(&rat_int(0), &rat_int(0)), rat_int(0));
        assert_eq!(tilde_c(&rat_int(1), &rat_int(0)), rat_int(1));
        assert_eq!(tilde_c(&rat_int(1), &rat(1, 3)), rat_int(2));
    }

    #[test]
    fn triangle_check_at_zero_reduces_to_nonnegativity() {
        // With both oscillations zero and all invariants equal to c, the
        // inequality reads c ≤ 2c, i.e. c ≥ 0.
        assert!(check_triangle(
            &rat_int(0),
            &rat_int(0),
            &rat_int(0),
            &rat_int(0),
            &rat_int(0)
        ));
        assert!(check_triangle(
            &rat_int(1),
            &rat_int(1),
            &rat_int(1),
            &rat_int(0),
            &rat_int(0)
        ));
        assert!(!check_triangle(
            &rat_int(-1),
            &rat_int(-1),
            &rat_int(-1),
            &rat_int(0),
            &rat_int(0)
        ));
    }

    #[test]
    fn triangle_check_is_exact_at_the_boundary() {
        let bound = rat_int(2) + rat_int(3) * rat_int(2); // 2 + 3·max(1,2)
        assert!(check_triangle(
            &rat_int(1),
            &rat_int(1),
            &bound,
            &rat_int(1),
            &rat_int(2)
        ));
        assert!(!check_triangle(
            &rat_int(1),
            &rat_int(1),
            &(bound + rat(1, 1000)),
            &rat_int(1),
            &rat_int(2)
        ));
    }

    #[test]
    fn fekete_bracket_of_linear_growth_is_the_slope() {
        let ctilde: Vec<Rational> = (1..=6).map(|k| rat_int(5 * k)).collect();
        let bracket = fekete_limit(&ctilde).unwrap();
        assert_eq!(bracket.inf, rat_int(5));
        assert_eq!(bracket.current, rat_int(5));
    }

    #[test]
    fn fekete_bracket_of_a_constant_shrinks_with_the_horizon() {
        let ctilde = vec![rat_int(7); 4];
        let bracket = fekete_limit(&ctilde).unwrap();
        assert_eq!(bracket.inf, rat(7, 4));
        assert_eq!(bracket.current, rat(7, 4));
    }

    #[test]
    fn fekete_bracket_with_parity_defect() {
        // c̃_k = 2k + (1 if k odd): subadditive; inf over k ≤ 10 is 2.
        let ctilde: Vec<Rational> = (1..=10)
            .map(|k| rat_int(2 * k + if k % 2 == 1 { 1 } else { 0 }))
            .collect();
        let bracket = fekete_limit(&ctilde).unwrap();
        assert_eq!(bracket.inf, rat_int(2));
        assert_eq!(bracket.current, rat_int(2));
    }

    #[test]
    fn non_subadditive_input_names_the_pair() {
        // c̃_2 = 5 > c̃_1 + c̃_1 = 2.
        let ctilde = vec![rat_int(1), rat_int(5)];
        let err = fekete_limit(&ctilde).unwrap_err();
        match err {
            Error::Invalid(violation) => {
                assert!(violation.0.contains("(1, 1)"), "{violation}");
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn empty_fekete_input_is_an_argument_error() {
        assert!(matches!(fekete_limit(&[]), Err(Error::Argument(_))));
    }
}
