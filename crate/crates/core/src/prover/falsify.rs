//! Numeric pre-flight: hunt for a point where the goal value is certainly
//! `<= 0`. A hit disproves strict positivity; a miss proves nothing.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::coeff::{Rational, Sign};
use crate::mtp::eval_iv;
use crate::numeric;
use crate::prover::Goal;

/// A certified non-positive sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub at: Rational,
    /// Sign certified by the enclosure: `Neg` when strictly below zero,
    /// `Zero` when the upper enclosure touches zero exactly.
    pub sign: Sign,
    /// Upper end of the value enclosure (always `<= 0`).
    pub value_hi: Rational,
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Evaluates the goal at equispaced and pseudo-random interior points with
/// rigorous enclosures; returns the first certified non-positive value.
pub fn numeric_falsify(goal: &Goal, samples: u32, digits: u32) -> Option<Counterexample> {
    let samples = samples.max(1);
    // Inner rational bracket of the interval (exact for rational endpoints).
    let lo_in = numeric::pipoly_iv(&goal.interval.lo, 30).hi;
    let hi_in = numeric::pipoly_iv(&goal.interval.hi, 30).lo;
    let span = &hi_in - &lo_in;
    if !span.is_positive() {
        return None;
    }
    let mut points = Vec::with_capacity(samples as usize + samples as usize / 2);
    for j in 1..=samples {
        let frac = Rational::new(BigInt::from(j), BigInt::from(samples + 1));
        points.push(&lo_in + &span * frac);
    }
    let mut state: u64 = 0x5EED_0F_3417;
    for _ in 0..samples / 2 {
        let r = splitmix(&mut state) % (1 << 20);
        if r == 0 {
            continue;
        }
        let frac = Rational::new(BigInt::from(r), BigInt::from(1u32 << 20));
        points.push(&lo_in + &span * frac);
    }
    for at in points {
        let Some(value) = eval_iv(&goal.expr, &at, digits) else {
            continue;
        };
        if value.is_nonpositive() {
            let sign = if value.hi.is_zero() && value.lo.is_zero() {
                Sign::Zero
            } else if value.hi.is_negative() {
                Sign::Neg
            } else {
                Sign::Zero
            };
            return Some(Counterexample {
                at,
                sign,
                value_hi: value.hi,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, PiPoly};
    use crate::fixtures;
    use crate::mtp::{Expr, Term, TermShape, Var};
    use crate::poly::IntervalQPi;

    #[test]
    fn healthy_goal_yields_no_counterexample() {
        let goal = Goal::new(fixtures::g1_expr(), IntervalQPi::zero_to_half_pi());
        assert!(numeric_falsify(&goal, 50, 40).is_none());
    }

    #[test]
    fn negated_goal_yields_a_counterexample() {
        let goal = Goal::new(fixtures::g1_expr().neg(), IntervalQPi::zero_to_half_pi());
        let cx = numeric_falsify(&goal, 50, 40).unwrap();
        assert_eq!(cx.sign, Sign::Neg);
    }

    #[test]
    fn interior_zero_is_detected_exactly() {
        // (t-1)^2 sin t vanishes at t = 1 inside (0, 2); the equispaced grid
        // hits the zero exactly.
        let square = Expr::from_poly(
            Var::T,
            &crate::poly::Poly::from_coeffs(vec![
                PiPoly::from_int(1),
                PiPoly::from_int(-2),
                PiPoly::from_int(1),
            ]),
        );
        let sin = Expr::new(
            Var::T,
            vec![Term {
                shape: TermShape {
                    sin_pow: 1,
                    ..TermShape::constant()
                },
                coeff: PiPoly::one(),
            }],
        );
        let expr = square.mul(&sin);
        let iv = IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::from_int(2),
            lo_open: true,
            hi_open: true,
        };
        let goal = Goal::new(expr, iv);
        let cx = numeric_falsify(&goal, 3, 40).unwrap();
        assert_eq!(cx.at, rat(1, 1));
        assert_eq!(cx.sign, Sign::Zero);
    }
}
