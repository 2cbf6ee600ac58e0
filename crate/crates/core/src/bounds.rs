//! Certified one-sided Taylor approximations and their application.
//!
//! The table holds Maclaurin polynomials of `sin`, `cos`, `atan` whose
//! one-sided direction is fixed by the degree:
//!
//! * `cos`:  degree `k ≡ 0 (mod 4)` bounds from above, `k ≡ 2 (mod 4)` from
//!   below, valid for arguments in `(0, sqrt((k+3)(k+4)))`;
//! * `sin`:  degree `k ≡ 1 (mod 4)` above, `k ≡ 3 (mod 4)` below, same
//!   validity radius;
//! * `atan`: degree `k ≡ 1 (mod 4)` above, `k ≡ 3 (mod 4)` below, for
//!   arguments in `(0, 1]` (applied here only to `sin t` / `cos t` with `t`
//!   in a subinterval of `(0, pi/2)`, so the argument stays inside `(0,1)`).
//!
//! Replacing an atom by a bound is *sign-correct* when atoms under a positive
//! total coefficient take lower bounds and atoms under a negative one take
//! upper bounds; then the rewritten expression is a pointwise minorant of the
//! original. Coefficient signs are decided exactly: constants through
//! `pipoly_sign`, genuine polynomials in `t` through a Sturm positivity
//! certificate on the interval.
//!
//! The one non-Taylor rule is the secant line under `atan(cos t)`:
//! `atan(cos t) >= pi/4 - t/2` on `[0, pi/2]`, a concave decreasing curve
//! above its chord. Its application emits machine-checked side conditions:
//! the concavity reduces to the goal `3 cos t - cos^3 t > 0` on `(0, pi/2)`,
//! the chord interpolation is checked exactly at both endpoints, and the
//! grouped coefficient of `atan(cos t)` becomes a positivity subgoal.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{pipoly_sign, CoeffError, PiPoly, Rational, Sign, SignCtx};
use crate::mtp::{ArcInner, Expr, MtpError, Term, TermShape, TrigFn, Var};
use crate::poly::{prove_positive, IntervalQPi, Poly, PolyError, PositivityCertificate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Mtp(#[from] MtpError),
    #[error("degree {degree} has the wrong parity for {func}")]
    ParityMismatch { func: BoundFn, degree: u32 },
    #[error("no atom matches selector {selector}")]
    NoMatchingAtom { selector: String },
    #[error("term not in a bindable shape: {detail}")]
    UnsupportedTermShape { detail: String },
    #[error("direction mismatch for {selector}: coefficient sign {coeff_sign} needs a {needed:?} bound")]
    DirectionMismatch {
        selector: String,
        coeff_sign: Sign,
        needed: Direction,
    },
    #[error("could not decide the sign of the coefficient of {selector} on the interval")]
    CoeffSignUndecided { selector: String },
    #[error("validity radius exceeded for {func} degree {degree} at argument multiplier {multiplier} on {interval}")]
    ValidityExceeded {
        func: BoundFn,
        degree: u32,
        multiplier: u32,
        interval: String,
    },
    #[error("interval {interval} is not admissible: {detail}")]
    IntervalNotAdmissible { interval: String, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundFn {
    Sin,
    Cos,
    Atan,
}

impl std::fmt::Display for BoundFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundFn::Sin => "sin",
            BoundFn::Cos => "cos",
            BoundFn::Atan => "atan",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Lower,
    Upper,
}

/// One table entry: a Maclaurin polynomial with a fixed one-sided direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRule {
    pub func: BoundFn,
    pub degree: u32,
    pub direction: Direction,
}

/// The direction forced by the alternating remainder pattern.
pub fn direction_for(func: BoundFn, degree: u32) -> Result<Direction, BoundError> {
    let parity_ok = match func {
        BoundFn::Cos => degree % 2 == 0,
        BoundFn::Sin | BoundFn::Atan => degree % 2 == 1,
    };
    if !parity_ok {
        return Err(BoundError::ParityMismatch { func, degree });
    }
    Ok(match func {
        BoundFn::Cos => {
            if degree % 4 == 0 {
                Direction::Upper
            } else {
                Direction::Lower
            }
        }
        BoundFn::Sin | BoundFn::Atan => {
            if degree % 4 == 1 {
                Direction::Upper
            } else {
                Direction::Lower
            }
        }
    })
}

impl BoundRule {
    pub fn new(func: BoundFn, degree: u32) -> Result<BoundRule, BoundError> {
        Ok(BoundRule {
            func,
            degree,
            direction: direction_for(func, degree)?,
        })
    }

    /// `(k+3)(k+4)`, the square of the validity radius (sin/cos only).
    pub fn radius_squared(&self) -> Option<u64> {
        match self.func {
            BoundFn::Sin | BoundFn::Cos => {
                Some((self.degree as u64 + 3) * (self.degree as u64 + 4))
            }
            BoundFn::Atan => None,
        }
    }
}

/// Maclaurin coefficients of the rule's function up to `degree`, ascending.
pub fn taylor_coeffs(func: BoundFn, degree: u32) -> Result<Vec<Rational>, BoundError> {
    direction_for(func, degree)?;
    let mut out = vec![Rational::from_integer(BigInt::from(0)); degree as usize + 1];
    match func {
        BoundFn::Cos => {
            let mut fact = Rational::one();
            for j in 0..=(degree as usize) {
                if j > 0 {
                    fact = fact * Rational::from_integer(BigInt::from(j));
                }
                if j % 2 == 0 {
                    let sign = if j % 4 == 0 { 1 } else { -1 };
                    out[j] = Rational::from_integer(BigInt::from(sign)) / &fact;
                }
            }
        }
        BoundFn::Sin => {
            let mut fact = Rational::one();
            for j in 0..=(degree as usize) {
                if j > 0 {
                    fact = fact * Rational::from_integer(BigInt::from(j));
                }
                if j % 2 == 1 {
                    let sign = if j % 4 == 1 { 1 } else { -1 };
                    out[j] = Rational::from_integer(BigInt::from(sign)) / &fact;
                }
            }
        }
        BoundFn::Atan => {
            for j in (1..=(degree as usize)).step_by(2) {
                let sign = if j % 4 == 1 { 1 } else { -1 };
                out[j] = Rational::new(BigInt::from(sign), BigInt::from(j));
            }
        }
    }
    Ok(out)
}

/// The Maclaurin polynomial as a polynomial over Q[pi].
pub fn taylor_poly(func: BoundFn, degree: u32) -> Result<Poly, BoundError> {
    let coeffs = taylor_coeffs(func, degree)?;
    Ok(Poly::from_coeffs(
        coeffs.into_iter().map(PiPoly::from_rational).collect(),
    ))
}

/// Every rule the prover may cite: sin/cos up to degree 23 (22 for cos) and
/// atan at the odd degrees up to 23.
pub fn bound_table() -> Vec<BoundRule> {
    let mut rules = Vec::new();
    for k in (0..=22u32).step_by(2) {
        rules.push(BoundRule::new(BoundFn::Cos, k).unwrap());
    }
    for k in (1..=23u32).step_by(2) {
        rules.push(BoundRule::new(BoundFn::Sin, k).unwrap());
        rules.push(BoundRule::new(BoundFn::Atan, k).unwrap());
    }
    rules
}

/// Record of a validity-radius / argument-domain check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityRecord {
    /// Angle multiplier `m` of the replaced atom's argument `m t`.
    pub multiplier: u32,
    /// `(k+3)(k+4)` for sin/cos rules; absent for atan.
    pub radius_squared: Option<u64>,
    pub digits: u32,
}

/// Which atom a rule is applied to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AtomSelector {
    /// `sin(m t)` or `cos(m t)`; `m = 1` addresses plain `sin t` / `cos t`.
    MultiAngle { func: TrigFn, multiplier: u32 },
    /// The `atan` atom with the given inner function.
    Atan { inner: ArcInner },
}

impl std::fmt::Display for AtomSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AtomSelector::MultiAngle { func, multiplier } => {
                write!(f, "{}@{}t", func.name(), multiplier)
            }
            AtomSelector::Atan { inner } => {
                let arg = match inner {
                    ArcInner::Var => "x",
                    ArcInner::Sin => "sin",
                    ArcInner::Cos => "cos",
                };
                write!(f, "atan({arg})")
            }
        }
    }
}

/// Why the sign of a replaced atom's coefficient is what it is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffSignEvidence {
    /// The total coefficient is a constant in Q[pi].
    Constant { sign: Sign, digits: u32 },
    /// A single-occurrence cofactor `c * t^p * sin^q t * cos^r t`: the sign
    /// is `pipoly_sign(c)` combined with the positivity of the trigonometric
    /// pattern on the interval (recorded by the powers).
    Monomial {
        coeff_sign: Sign,
        digits: u32,
        var_pow: i64,
        sin_pow: i64,
        cos_pow: i64,
    },
    /// A genuine polynomial in `t`, decided by Sturm positivity of the
    /// polynomial or its negation on the interval.
    IntervalSturm {
        negated: bool,
        cert: PositivityCertificate,
    },
}

impl CoeffSignEvidence {
    pub fn sign(&self) -> Sign {
        match self {
            CoeffSignEvidence::Constant { sign, .. } => *sign,
            CoeffSignEvidence::Monomial { coeff_sign, .. } => *coeff_sign,
            CoeffSignEvidence::IntervalSturm { negated, .. } => {
                if *negated {
                    Sign::Neg
                } else {
                    Sign::Pos
                }
            }
        }
    }
}

/// One replacement performed by [`apply_bounds`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedBound {
    pub selector: AtomSelector,
    pub rule: BoundRule,
    /// Total coefficient (multiple-angle atoms) or single-term cofactor
    /// shape (atan occurrences) the sign evidence speaks about.
    pub coefficient: BoundCoefficient,
    pub evidence: CoeffSignEvidence,
    pub validity: ValidityRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundCoefficient {
    /// Sum over all terms carrying the atom, as a polynomial in `t`.
    Total(Poly),
    /// The cofactor term of one atan occurrence (its atom removed).
    Cofactor(Term),
}

/// Checks that the interval sits inside `[0, pi/2]` with strict interior
/// (zero endpoint must be open). Returns the digits used.
fn check_interval_in_quarter_period(
    interval: &IntervalQPi,
    ctx: &SignCtx,
    allow_closed_hi_at_half_pi: bool,
) -> Result<u32, BoundError> {
    let mut digits = 0;
    let lo_sign = pipoly_sign(&interval.lo, ctx)?;
    digits = digits.max(lo_sign.digits);
    match lo_sign.sign {
        Sign::Neg => {
            return Err(BoundError::IntervalNotAdmissible {
                interval: interval.to_string(),
                detail: "lower endpoint below 0".into(),
            })
        }
        Sign::Zero if !interval.lo_open => {
            return Err(BoundError::IntervalNotAdmissible {
                interval: interval.to_string(),
                detail: "closed endpoint at 0".into(),
            })
        }
        _ => {}
    }
    let half_pi = PiPoly::monomial(Rational::new(BigInt::one(), BigInt::from(2)), 1);
    let room = &half_pi - &interval.hi;
    let hi_sign = pipoly_sign(&room, ctx)?;
    digits = digits.max(hi_sign.digits);
    match hi_sign.sign {
        Sign::Neg => {
            return Err(BoundError::IntervalNotAdmissible {
                interval: interval.to_string(),
                detail: "upper endpoint beyond pi/2".into(),
            })
        }
        Sign::Zero if !interval.hi_open && !allow_closed_hi_at_half_pi => {
            return Err(BoundError::IntervalNotAdmissible {
                interval: interval.to_string(),
                detail: "closed endpoint at pi/2".into(),
            })
        }
        _ => {}
    }
    Ok(digits)
}

/// Admissibility of a rule at argument `m t` over the interval, decided by
/// exact squaring: `(m hi)^2 < (k+3)(k+4)`.
pub fn check_validity(
    rule: &BoundRule,
    multiplier: u32,
    interval: &IntervalQPi,
    ctx: &SignCtx,
) -> Result<ValidityRecord, BoundError> {
    let mut digits;
    match rule.func {
        BoundFn::Sin | BoundFn::Cos => {
            // Argument must stay positive on the interior...
            let lo_sign = pipoly_sign(&interval.lo, ctx)?;
            digits = lo_sign.digits;
            if lo_sign.sign == Sign::Neg || (lo_sign.sign == Sign::Zero && !interval.lo_open) {
                return Err(BoundError::IntervalNotAdmissible {
                    interval: interval.to_string(),
                    detail: "argument of a one-sided bound must be positive".into(),
                });
            }
            // ...and below the validity radius at the supremum.
            let r2 = rule.radius_squared().unwrap();
            let m = PiPoly::from_int(multiplier as i64);
            let arg_sup = &m * &interval.hi;
            let margin = &PiPoly::from_int(r2 as i64) - &(&arg_sup * &arg_sup);
            let s = pipoly_sign(&margin, ctx)?;
            digits = digits.max(s.digits);
            if s.sign != Sign::Pos {
                return Err(BoundError::ValidityExceeded {
                    func: rule.func,
                    degree: rule.degree,
                    multiplier,
                    interval: interval.to_string(),
                });
            }
            Ok(ValidityRecord {
                multiplier,
                radius_squared: Some(r2),
                digits,
            })
        }
        BoundFn::Atan => {
            // The sandwich holds for arguments in (0, 1]; sin t and cos t
            // stay inside (0, 1) when t ranges over the open part of a
            // subinterval of (0, pi/2).
            digits = check_interval_in_quarter_period(interval, ctx, false)?;
            Ok(ValidityRecord {
                multiplier,
                radius_squared: None,
                digits,
            })
        }
    }
}

/// Total coefficient of a multiple-angle atom as a polynomial in `t`, or
/// `None` when the atom does not occur. Pure inspection, no sign decisions.
pub fn atom_total_coeff(
    e: &Expr,
    func: TrigFn,
    multiplier: u32,
) -> Result<Option<Poly>, BoundError> {
    let mut total = Poly::zero();
    let mut found = false;
    for t in &e.terms {
        if matches_multi_atom(&t.shape, func, multiplier)? {
            found = true;
            total = &total + &Poly::monomial(t.coeff.clone(), t.shape.var_pow as usize);
        }
    }
    Ok(if found { Some(total) } else { None })
}

fn decide_total_coeff_sign(
    selector: &AtomSelector,
    total: &Poly,
    interval: &IntervalQPi,
    ctx: &SignCtx,
) -> Result<CoeffSignEvidence, BoundError> {
    if total.degree() == Some(0) {
        let s = pipoly_sign(&total.coeff(0), ctx)?;
        return Ok(CoeffSignEvidence::Constant {
            sign: s.sign,
            digits: s.digits,
        });
    }
    if let Ok(cert) = prove_positive(total, interval, ctx) {
        return Ok(CoeffSignEvidence::IntervalSturm {
            negated: false,
            cert,
        });
    }
    if let Ok(cert) = prove_positive(&-total, interval, ctx) {
        return Ok(CoeffSignEvidence::IntervalSturm {
            negated: true,
            cert,
        });
    }
    Err(BoundError::CoeffSignUndecided {
        selector: selector.to_string(),
    })
}

fn require_direction(
    selector: &AtomSelector,
    rule: &BoundRule,
    coeff_sign: Sign,
) -> Result<(), BoundError> {
    let needed = match coeff_sign {
        Sign::Pos => Direction::Lower,
        Sign::Neg => Direction::Upper,
        Sign::Zero => {
            return Err(BoundError::CoeffSignUndecided {
                selector: selector.to_string(),
            })
        }
    };
    if rule.direction != needed {
        return Err(BoundError::DirectionMismatch {
            selector: selector.to_string(),
            coeff_sign,
            needed,
        });
    }
    Ok(())
}

/// Does this term carry exactly the selected multiple-angle atom (and no
/// other trigonometric structure)?
fn matches_multi_atom(shape: &TermShape, func: TrigFn, m: u32) -> Result<bool, BoundError> {
    let carries = if m == 1 {
        match func {
            TrigFn::Sin => shape.sin_pow != 0 && shape.cos_pow == 0 && shape.multi.is_empty(),
            TrigFn::Cos => shape.cos_pow != 0 && shape.sin_pow == 0 && shape.multi.is_empty(),
        }
    } else {
        shape.multi.iter().any(|&(f, k, _)| f == func && k == m)
    };
    if !carries {
        return Ok(false);
    }
    if shape.atan.is_some() || shape.asin_pow > 0 {
        return Err(BoundError::UnsupportedTermShape {
            detail: "atom shares a term with an inverse-function atom".into(),
        });
    }
    let clean = if m == 1 {
        let p = match func {
            TrigFn::Sin => shape.sin_pow,
            TrigFn::Cos => shape.cos_pow,
        };
        p == 1
    } else {
        shape.sin_pow == 0
            && shape.cos_pow == 0
            && shape.multi == vec![(func, m, 1)]
    };
    if !clean {
        return Err(BoundError::UnsupportedTermShape {
            detail: format!("{}({}t) appears with extra trigonometric factors", func.name(), m),
        });
    }
    if shape.var_pow < 0 {
        return Err(BoundError::UnsupportedTermShape {
            detail: "negative power of t in a bound target".into(),
        });
    }
    Ok(true)
}

/// Applies one rule to the selected atom, returning the rewritten expression
/// (a pointwise minorant of the input on the interval) and the evidence.
pub fn apply_bound(
    e: &Expr,
    interval: &IntervalQPi,
    selector: &AtomSelector,
    rule: &BoundRule,
    ctx: &SignCtx,
) -> Result<(Expr, Vec<AppliedBound>), BoundError> {
    match selector {
        AtomSelector::MultiAngle { func, multiplier } => {
            let m = *multiplier;
            let mut matched: Vec<&Term> = Vec::new();
            let mut rest: Vec<Term> = Vec::new();
            for t in &e.terms {
                if matches_multi_atom(&t.shape, *func, m)? {
                    matched.push(t);
                } else {
                    rest.push(t.clone());
                }
            }
            if matched.is_empty() {
                return Err(BoundError::NoMatchingAtom {
                    selector: selector.to_string(),
                });
            }
            let mut total = Poly::zero();
            for t in &matched {
                total = &total + &Poly::monomial(t.coeff.clone(), t.shape.var_pow as usize);
            }
            let evidence = decide_total_coeff_sign(selector, &total, interval, ctx)?;
            require_direction(selector, rule, evidence.sign())?;
            let validity = check_validity(rule, m, interval, ctx)?;

            let taylor = taylor_coeffs(rule.func, rule.degree)?;
            let m_big = Rational::from_integer(BigInt::from(m));
            let mut m_pow = Rational::one();
            let mut replacement_terms = Vec::new();
            for (j, a) in taylor.iter().enumerate() {
                if j > 0 {
                    m_pow *= &m_big;
                }
                if a.is_zero() {
                    continue;
                }
                let scaled = a * &m_pow;
                for t in &matched {
                    replacement_terms.push(Term {
                        shape: TermShape {
                            var_pow: t.shape.var_pow + j as i64,
                            ..TermShape::constant()
                        },
                        coeff: t.coeff.scale(&scaled),
                    });
                }
            }
            rest.extend(replacement_terms);
            let result = Expr::new(e.var, rest);
            let record = AppliedBound {
                selector: selector.clone(),
                rule: *rule,
                coefficient: BoundCoefficient::Total(total),
                evidence,
                validity,
            };
            Ok((result, vec![record]))
        }
        AtomSelector::Atan { inner } => {
            if rule.func != BoundFn::Atan {
                return Err(BoundError::UnsupportedTermShape {
                    detail: format!("selector {selector} requires an atan rule"),
                });
            }
            let wanted_sign = match rule.direction {
                Direction::Lower => Sign::Pos,
                Direction::Upper => Sign::Neg,
            };
            let mut records = Vec::new();
            let mut out_terms: Vec<Term> = Vec::new();
            let mut replaced_any = false;
            let taylor = taylor_coeffs(BoundFn::Atan, rule.degree)?;
            for t in &e.terms {
                let is_occurrence = match t.shape.atan {
                    Some((i, 1)) if i == *inner => true,
                    Some((i, exp)) if i == *inner && exp > 1 => {
                        return Err(BoundError::UnsupportedTermShape {
                            detail: "atan atom with exponent above 1".into(),
                        })
                    }
                    _ => false,
                };
                if !is_occurrence {
                    out_terms.push(t.clone());
                    continue;
                }
                if t.shape.var_pow < 0 || t.shape.sin_pow < 0 || t.shape.cos_pow < 0 {
                    return Err(BoundError::UnsupportedTermShape {
                        detail: "negative power in an atan cofactor".into(),
                    });
                }
                let s = pipoly_sign(&t.coeff, ctx)?;
                // Trig factors in the cofactor are positive on subintervals
                // of (0, pi/2); the occurrence sign is the coefficient sign.
                if s.sign != wanted_sign {
                    out_terms.push(t.clone());
                    continue;
                }
                replaced_any = true;
                let mut cofactor_shape = t.shape.clone();
                cofactor_shape.atan = None;
                let validity = check_validity(rule, 1, interval, ctx)?;
                records.push(AppliedBound {
                    selector: selector.clone(),
                    rule: *rule,
                    coefficient: BoundCoefficient::Cofactor(Term {
                        shape: cofactor_shape.clone(),
                        coeff: t.coeff.clone(),
                    }),
                    evidence: CoeffSignEvidence::Monomial {
                        coeff_sign: s.sign,
                        digits: s.digits,
                        var_pow: t.shape.var_pow,
                        sin_pow: t.shape.sin_pow,
                        cos_pow: t.shape.cos_pow,
                    },
                    validity,
                });
                for (j, a) in taylor.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let mut shape = cofactor_shape.clone();
                    match inner {
                        ArcInner::Var => shape.var_pow += j as i64,
                        ArcInner::Sin => shape.sin_pow += j as i64,
                        ArcInner::Cos => shape.cos_pow += j as i64,
                    }
                    out_terms.push(Term {
                        shape,
                        coeff: t.coeff.scale(a),
                    });
                }
            }
            if !replaced_any {
                return Err(BoundError::NoMatchingAtom {
                    selector: selector.to_string(),
                });
            }
            Ok((Expr::new(e.var, out_terms), records))
        }
    }
}

/// Exact-equality check of the secant line against the curve at one endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointCheck {
    pub at: PiPoly,
    pub secant_value: PiPoly,
    pub curve_value: PiPoly,
}

/// Result of replacing every `atan(cos t)` atom by the chord `pi/4 - t/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecantApplication {
    /// The rewritten expression (pointwise `<=` the input on the interval,
    /// given the cofactor subgoal).
    pub result: Expr,
    /// Grouped coefficient of `atan(cos t)`; must be proved positive.
    pub cofactor: Expr,
    pub endpoint_checks: [EndpointCheck; 2],
}

/// The concavity side condition shared by every secant application:
/// the second derivative of `atan(cos t)` has numerator `-(3 cos t - cos^3 t)`
/// over a positive denominator, so concavity on `[0, pi/2]` reduces to this goal.
pub fn secant_concavity_goal() -> (Expr, IntervalQPi) {
    let goal = Expr::new(
        Var::T,
        vec![
            Term {
                shape: TermShape {
                    cos_pow: 1,
                    ..TermShape::constant()
                },
                coeff: PiPoly::from_int(3),
            },
            Term {
                shape: TermShape {
                    cos_pow: 3,
                    ..TermShape::constant()
                },
                coeff: PiPoly::from_int(-1),
            },
        ],
    );
    (goal, IntervalQPi::zero_to_half_pi())
}

/// Built-in exact endpoint values: `atan(1) = pi/4`, `atan(0) = 0`.
fn secant_endpoint_checks() -> [EndpointCheck; 2] {
    let quarter_pi = PiPoly::monomial(Rational::new(BigInt::one(), BigInt::from(4)), 1);
    let half_pi = PiPoly::monomial(Rational::new(BigInt::one(), BigInt::from(2)), 1);
    [
        EndpointCheck {
            at: PiPoly::zero(),
            // secant(0) = pi/4; atan(cos 0) = atan(1) = pi/4
            secant_value: quarter_pi.clone(),
            curve_value: quarter_pi,
        },
        EndpointCheck {
            at: half_pi.clone(),
            // secant(pi/2) = pi/4 - pi/4 = 0; atan(cos pi/2) = atan(0) = 0
            secant_value: &PiPoly::monomial(Rational::new(BigInt::one(), BigInt::from(4)), 1)
                - &PiPoly::monomial(Rational::new(BigInt::one(), BigInt::from(4)), 1),
            curve_value: PiPoly::zero(),
        },
    ]
}

/// Verifies that the recorded endpoint checks are the exact built-in ones.
pub fn verify_endpoint_checks(checks: &[EndpointCheck; 2]) -> Result<(), String> {
    let expected = secant_endpoint_checks();
    for (got, want) in checks.iter().zip(expected.iter()) {
        if got.at != want.at || got.secant_value != want.secant_value {
            return Err("secant endpoint record differs from the built-in rule".into());
        }
        if got.secant_value != got.curve_value {
            return Err("secant line does not interpolate the curve at an endpoint".into());
        }
        if got.curve_value != want.curve_value {
            return Err("curve endpoint value differs from the exact constant".into());
        }
    }
    Ok(())
}

/// Replaces every `atan(cos t)` atom by the chord `pi/4 - t/2`, grouping all
/// occurrences under one cofactor whose positivity becomes a subgoal.
pub fn secant_bound_arctan_cos(
    e: &Expr,
    interval: &IntervalQPi,
    ctx: &SignCtx,
) -> Result<SecantApplication, BoundError> {
    check_interval_in_quarter_period(interval, ctx, true)?;
    let mut cofactor_terms = Vec::new();
    let mut out_terms = Vec::new();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let quarter_pi = PiPoly::monomial(Rational::new(BigInt::one(), BigInt::from(4)), 1);
    for t in &e.terms {
        match t.shape.atan {
            Some((ArcInner::Cos, 1)) => {
                let mut base = t.shape.clone();
                base.atan = None;
                cofactor_terms.push(Term {
                    shape: base.clone(),
                    coeff: t.coeff.clone(),
                });
                // c * (pi/4 - t/2)
                out_terms.push(Term {
                    shape: base.clone(),
                    coeff: &t.coeff * &quarter_pi,
                });
                let mut shifted = base;
                shifted.var_pow += 1;
                out_terms.push(Term {
                    shape: shifted,
                    coeff: t.coeff.scale(&-&half),
                });
            }
            Some((ArcInner::Cos, _)) => {
                return Err(BoundError::UnsupportedTermShape {
                    detail: "atan(cos t) with exponent above 1".into(),
                })
            }
            _ => out_terms.push(t.clone()),
        }
    }
    if cofactor_terms.is_empty() {
        return Err(BoundError::NoMatchingAtom {
            selector: "atan(cos)".into(),
        });
    }
    Ok(SecantApplication {
        result: Expr::new(e.var, out_terms),
        cofactor: Expr::new(e.var, cofactor_terms),
        endpoint_checks: secant_endpoint_checks(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::fixtures;
    use crate::mtp::{eval_iv, to_fourier_form};
    use crate::numeric;
    use num_traits::Signed;

    #[test]
    fn taylor_examples() {
        let atan3 = taylor_coeffs(BoundFn::Atan, 3).unwrap();
        assert_eq!(atan3, vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(-1, 3)]);
        let atan5 = taylor_coeffs(BoundFn::Atan, 5).unwrap();
        assert_eq!(atan5[5], rat(1, 5));
        let cos0 = taylor_coeffs(BoundFn::Cos, 0).unwrap();
        assert_eq!(cos0, vec![rat(1, 1)]);
        assert!(matches!(
            taylor_coeffs(BoundFn::Cos, 3),
            Err(BoundError::ParityMismatch { .. })
        ));
    }

    #[test]
    fn direction_table_alternates() {
        assert_eq!(direction_for(BoundFn::Cos, 0).unwrap(), Direction::Upper);
        assert_eq!(direction_for(BoundFn::Cos, 2).unwrap(), Direction::Lower);
        assert_eq!(direction_for(BoundFn::Cos, 10).unwrap(), Direction::Lower);
        assert_eq!(direction_for(BoundFn::Cos, 16).unwrap(), Direction::Upper);
        assert_eq!(direction_for(BoundFn::Sin, 9).unwrap(), Direction::Upper);
        for k in [7u32, 15, 19] {
            assert_eq!(direction_for(BoundFn::Sin, k).unwrap(), Direction::Lower);
        }
        let dirs: Vec<_> = [1u32, 3, 5, 7]
            .iter()
            .map(|&k| direction_for(BoundFn::Atan, k).unwrap())
            .collect();
        assert_eq!(
            dirs,
            vec![
                Direction::Upper,
                Direction::Lower,
                Direction::Upper,
                Direction::Lower
            ]
        );
    }

    fn interval_01_11() -> IntervalQPi {
        IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::from_rational(rat(11, 10)),
            lo_open: true,
            hi_open: false,
        }
    }

    #[test]
    fn validity_examples() {
        let ctx = SignCtx::default();
        // cos degree 16 at 8t on (0, 1.1]: 8.8^2 = 77.44 < 380
        let rule = BoundRule::new(BoundFn::Cos, 16).unwrap();
        let rec = check_validity(&rule, 8, &interval_01_11(), &ctx).unwrap();
        assert_eq!(rec.radius_squared, Some(380));
        // sin degree 7 at t on (0, 1.3]: 1.69 < 110
        let rule7 = BoundRule::new(BoundFn::Sin, 7).unwrap();
        let iv13 = IntervalQPi {
            hi: PiPoly::from_rational(rat(13, 10)),
            ..interval_01_11()
        };
        assert!(check_validity(&rule7, 1, &iv13, &ctx).is_ok());
        // cos degree 2 has radius sqrt 30; argument 6t on (0, 1.1] overflows
        let rule2 = BoundRule::new(BoundFn::Cos, 2).unwrap();
        assert!(matches!(
            check_validity(&rule2, 6, &interval_01_11(), &ctx),
            Err(BoundError::ValidityExceeded { .. })
        ));
    }

    #[test]
    fn sandwich_property_for_every_table_rule() {
        // For every rule, random admissible arguments satisfy the strict
        // one-sided bound; certified by interval arithmetic from 40 digits,
        // refining when the gap is tighter than the enclosure.
        let mut state: u64 = 0xFEEDFACE12345678;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for rule in bound_table() {
            let poly = taylor_poly(rule.func, rule.degree).unwrap();
            for _ in 0..12 {
                // y in (radius/20, radius*19/20), radius = 1 for atan; a
                // coarse radius approximation keeps denominators small.
                let r2 = rule.radius_squared();
                let radius_scaled = match r2 {
                    Some(r2) => numeric::sqrt_iv(&rat(r2 as i64, 1), 2).lo,
                    None => rat(1, 1),
                };
                let frac = rat((next() % 900 + 50) as i64, 1000);
                let y = radius_scaled * frac;
                let ty = poly.eval_rational(&y).as_rational().unwrap();
                let mut digits = 40;
                loop {
                    let f = match rule.func {
                        BoundFn::Sin => numeric::sin_iv(&y, digits),
                        BoundFn::Cos => numeric::cos_iv(&y, digits),
                        BoundFn::Atan => numeric::atan_iv(&y, digits),
                    };
                    let ok = match rule.direction {
                        Direction::Upper => ty > f.hi,
                        Direction::Lower => ty < f.lo,
                    };
                    let violated = match rule.direction {
                        Direction::Upper => ty < f.lo,
                        Direction::Lower => ty > f.hi,
                    };
                    assert!(
                        !violated,
                        "{:?} degree {} direction {:?} fails at y = {y}",
                        rule.func, rule.degree, rule.direction
                    );
                    if ok {
                        break;
                    }
                    digits *= 2;
                    assert!(digits <= 1280, "cannot separate bound from curve at y={y}");
                }
            }
        }
    }

    #[test]
    fn atan_bounds_produce_first_minorant() {
        let ctx = SignCtx::default();
        let g = fixtures::g1_expr();
        let iv = interval_01_11();
        let lower = BoundRule::new(BoundFn::Atan, 3).unwrap();
        let upper = BoundRule::new(BoundFn::Atan, 5).unwrap();
        let sel = AtomSelector::Atan {
            inner: ArcInner::Sin,
        };
        let (after_lower, recs) = apply_bound(&g, &iv, &sel, &lower, &ctx).unwrap();
        assert_eq!(recs.len(), 1); // only the positive-coefficient occurrence
        let (h, recs2) = apply_bound(&after_lower, &iv, &sel, &upper, &ctx).unwrap();
        assert_eq!(recs2.len(), 1);
        assert!(!h.has_atan());
        assert_eq!(h, fixtures::h1_expr());
    }

    #[test]
    fn cos_bounds_produce_the_degree16_minorant() {
        let ctx = SignCtx::default();
        let iv = interval_01_11();
        let h = to_fourier_form(&fixtures::h1_expr()).unwrap().to_expr();
        let plan = [
            (TrigFn::Cos, 8u32, 16u32),
            (TrigFn::Cos, 6, 12),
            (TrigFn::Cos, 4, 10),
            (TrigFn::Cos, 2, 4),
        ];
        let mut e = h;
        for (func, m, deg) in plan {
            let rule = BoundRule::new(BoundFn::Cos, deg).unwrap();
            let sel = AtomSelector::MultiAngle {
                func,
                multiplier: m,
            };
            let (next_e, _) = apply_bound(&e, &iv, &sel, &rule, &ctx).unwrap();
            e = next_e;
        }
        let p16 = e.to_poly().unwrap();
        assert_eq!(p16, fixtures::p16_poly());
    }

    #[test]
    fn sin_bounds_produce_the_degree19_minorant() {
        let ctx = SignCtx::default();
        let iv = IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::from_rational(rat(13, 10)),
            lo_open: true,
            hi_open: false,
        };
        let h = to_fourier_form(&fixtures::h2_expr()).unwrap().to_expr();
        let plan = [
            (7u32, 19u32),
            (5, 15),
            (3, 9),
            (1, 7),
        ];
        let mut e = h;
        for (m, deg) in plan {
            let rule = BoundRule::new(BoundFn::Sin, deg).unwrap();
            let sel = AtomSelector::MultiAngle {
                func: TrigFn::Sin,
                multiplier: m,
            };
            let (next_e, _) = apply_bound(&e, &iv, &sel, &rule, &ctx).unwrap();
            e = next_e;
        }
        let p19 = e.to_poly().unwrap();
        assert_eq!(p19, fixtures::p19_poly());
    }

    #[test]
    fn direction_mismatch_is_rejected() {
        let ctx = SignCtx::default();
        let iv = interval_01_11();
        let h = to_fourier_form(&fixtures::h1_expr()).unwrap().to_expr();
        // cos 8t carries a negative coefficient; a lower bound is unsound
        let rule = BoundRule::new(BoundFn::Cos, 10).unwrap();
        let sel = AtomSelector::MultiAngle {
            func: TrigFn::Cos,
            multiplier: 8,
        };
        assert!(matches!(
            apply_bound(&h, &iv, &sel, &rule, &ctx),
            Err(BoundError::DirectionMismatch { .. })
        ));
    }

    #[test]
    fn minorant_is_pointwise_below_numerically() {
        let ctx = SignCtx::default();
        let g = fixtures::g1_expr();
        let iv = interval_01_11();
        let sel = AtomSelector::Atan {
            inner: ArcInner::Sin,
        };
        let (e1, _) = apply_bound(
            &g,
            &iv,
            &sel,
            &BoundRule::new(BoundFn::Atan, 3).unwrap(),
            &ctx,
        )
        .unwrap();
        let (h, _) = apply_bound(
            &e1,
            &iv,
            &sel,
            &BoundRule::new(BoundFn::Atan, 5).unwrap(),
            &ctx,
        )
        .unwrap();
        let mut state: u64 = 0xABCD1234;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..25 {
            let t = rat((next() % 109 + 1) as i64, 100);
            let vg = eval_iv(&g, &t, 45).unwrap();
            let vh = eval_iv(&h, &t, 45).unwrap();
            assert!(vh.hi < vg.lo, "minorant not strictly below at t = {t}");
        }
    }

    #[test]
    fn secant_rule_applies_to_the_reflected_goal() {
        let ctx = SignCtx::default();
        let g2 = fixtures::g1_reflected_expr();
        let iv = IntervalQPi {
            lo: PiPoly::zero(),
            hi: &PiPoly::monomial(rat(1, 2), 1) - &PiPoly::from_rational(rat(11, 10)),
            lo_open: true,
            hi_open: true,
        };
        let app = secant_bound_arctan_cos(&g2, &iv, &ctx).unwrap();
        verify_endpoint_checks(&app.endpoint_checks).unwrap();
        assert!(!app.result.has_atan());
        // cofactor = ((pi^2+pi-8)cos^4 t - pi) cos t
        let expected_cofactor = Expr::new(
            Var::T,
            vec![
                Term {
                    shape: TermShape {
                        cos_pow: 5,
                        ..TermShape::constant()
                    },
                    coeff: fixtures::pi2_pi_m8(),
                },
                Term {
                    shape: TermShape {
                        cos_pow: 1,
                        ..TermShape::constant()
                    },
                    coeff: PiPoly::monomial(rat(-1, 1), 1),
                },
            ],
        );
        assert_eq!(app.cofactor, expected_cofactor);
        // h2(t) value check at t = 0.2: below g2 but positive
        let t = rat(1, 5);
        let vg = eval_iv(&g2, &t, 45).unwrap();
        let vh = eval_iv(&app.result, &t, 45).unwrap();
        assert!(vh.hi < vg.lo);
        assert!(vh.lo.is_positive());
    }

    #[test]
    fn secant_case2_produces_the_cubic() {
        let ctx = SignCtx::default();
        // Second goal, case II: reflect, secant, fourier, cos lower-2 bounds.
        let g2 = fixtures::g2_reflected_expr();
        let hi = &PiPoly::monomial(rat(1, 2), 1) - &PiPoly::from_rational(rat(13, 10));
        let iv = IntervalQPi {
            lo: PiPoly::zero(),
            hi,
            lo_open: true,
            hi_open: true,
        };
        let app = secant_bound_arctan_cos(&g2, &iv, &ctx).unwrap();
        let fourier = to_fourier_form(&app.result).unwrap().to_expr();
        let mut e = fourier;
        for m in [4u32, 2, 1] {
            let rule = BoundRule::new(BoundFn::Cos, 2).unwrap();
            let sel = AtomSelector::MultiAngle {
                func: TrigFn::Cos,
                multiplier: m,
            };
            let (next_e, _) = apply_bound(&e, &iv, &sel, &rule, &ctx).unwrap();
            e = next_e;
        }
        assert_eq!(e.to_poly().unwrap(), fixtures::case2_cubic_2());
    }
}
