//! Proof-strategy engine: executes proof scripts or the automatic search,
//! assembling certificates whose every step an independent checker replays.
//!
//! A proof is a tree of [`ProofNode`]s. Each node claims its goal — strict
//! positivity of an expression on an interval — and justifies the claim by
//! one step whose subgoals are the node's children. Leaves are kernel
//! verdicts: a Sturm positivity certificate, or a bound application whose
//! rewritten expression is identically zero (the original then exceeds zero
//! strictly wherever the replaced atoms' coefficients do not vanish, which
//! the recorded evidence guarantees).

mod auto;
mod falsify;
mod script;
mod verify;

pub use auto::{auto_prove, AutoConfig};
pub use falsify::{numeric_falsify, Counterexample};
pub use script::{run_script, ScriptNode, ScriptStep, SplitNode};
pub use verify::verify_certificate;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    apply_bound, secant_bound_arctan_cos, secant_concavity_goal, AppliedBound, AtomSelector,
    BoundError, BoundRule, EndpointCheck,
};
use crate::coeff::{
    pipoly_sign, rational_to_str, CoeffError, PiPoly, Rational, Sign, SignCtx,
};
use crate::mtp::{self, Expr, MtpError, Var};
use crate::poly::{
    prove_positive, IntervalQPi, Poly, PolyError, PositivityCertificate,
};

/// The certificate schema identifier; bump on any incompatible change.
pub const CERTIFICATE_SCHEMA: &str = "mtprove-certificate/1";

/// Claim of strict positivity of `expr` on `interval`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goal {
    pub expr: Expr,
    pub interval: IntervalQPi,
}

impl Goal {
    pub fn new(expr: Expr, interval: IntervalQPi) -> Goal {
        Goal { expr, interval }
    }
}

/// Built-in positivity pattern for a monomial `c * t^p * sin^q t * cos^r t`
/// on a subinterval of `(0, pi/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialPattern {
    pub coeff: PiPoly,
    pub digits: u32,
    pub var_pow: i64,
    pub sin_pow: i64,
    pub cos_pow: i64,
}

/// How a side condition was discharged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SideEvidence {
    /// Matched a built-in positivity pattern.
    Pattern(MonomialPattern),
    /// Proved as an explicit subgoal (the node's second child).
    Proved,
}

/// One proof step; the spine of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepRecord {
    /// `x = sin t`, mapping `(0,1)` onto `(0, pi/2)`. Child: the image goal.
    SubstituteSin { result: Expr },
    /// Multiply by a positive expression. Children: the product goal, then
    /// the multiplier-positivity goal when not discharged by pattern.
    MulPositive {
        multiplier: Expr,
        side: SideEvidence,
        result: Expr,
    },
    /// Split at an interior point. Children: `(lo, point]` and `(point, hi)`.
    Split { point: PiPoly },
    /// `t -> pi/2 - t`. Child: the reflected goal on the reflected interval.
    Reflect { result: Expr },
    /// Exact multiple-angle rewrite. Child: same claim, canonical form.
    ToFourier { result: Expr },
    /// One-sided Taylor replacement. Child: the minorant goal — absent when
    /// the minorant is identically zero, which closes the goal (strictness
    /// comes from the recorded nonvanishing coefficients).
    ApplyBounds {
        applications: Vec<AppliedBound>,
        result: Expr,
    },
    /// Chord rule `atan(cos t) >= pi/4 - t/2`. Children: the minorant goal,
    /// the grouped-coefficient positivity goal, and the concavity goal.
    SecantBound {
        cofactor: Expr,
        endpoint_checks: [EndpointCheck; 2],
        result: Expr,
    },
    /// `p = t^power * scale * quotient` with integer-normalized quotient.
    /// Child: positivity of the quotient on the same interval.
    FactorMonomial {
        power: u32,
        #[serde(with = "crate::poly::serde_rational")]
        scale: Rational,
        quotient: Poly,
    },
    /// `z = t^2` on an even polynomial; interval endpoints square.
    SubstSquare { result: Poly },
    /// Kernel decision: Sturm root count plus exact sign evaluations, after
    /// stripping `t^monomial_power` (positive on the interval's interior).
    SturmDecide {
        input: Poly,
        monomial_power: u32,
        kernel: PositivityCertificate,
    },
}

impl StepRecord {
    pub fn name(&self) -> &'static str {
        match self {
            StepRecord::SubstituteSin { .. } => "substitute-sin",
            StepRecord::MulPositive { .. } => "mul-positive",
            StepRecord::Split { .. } => "split",
            StepRecord::Reflect { .. } => "reflect",
            StepRecord::ToFourier { .. } => "to-fourier",
            StepRecord::ApplyBounds { .. } => "bound",
            StepRecord::SecantBound { .. } => "secant-arctan-cos",
            StepRecord::FactorMonomial { .. } => "factor-monomial",
            StepRecord::SubstSquare { .. } => "subst-square",
            StepRecord::SturmDecide { .. } => "sturm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub goal: Goal,
    pub step: StepRecord,
    pub children: Vec<ProofNode>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertStats {
    /// Largest pi-enclosure precision (decimal digits) any sign call used.
    pub max_digits: u32,
    /// Number of Sturm positivity certificates in the tree.
    pub sturm_certificates: u32,
    /// Total proof nodes.
    pub nodes: u32,
}

/// A complete, independently replayable proof document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub goal: Goal,
    pub notes: Vec<String>,
    pub root: ProofNode,
    pub stats: CertStats,
}

impl Certificate {
    pub fn assemble(goal: Goal, notes: Vec<String>, root: ProofNode) -> Certificate {
        let mut stats = CertStats::default();
        collect_stats(&root, &mut stats);
        Certificate {
            schema: CERTIFICATE_SCHEMA.to_string(),
            goal,
            notes,
            root,
            stats,
        }
    }
}

fn collect_stats(node: &ProofNode, stats: &mut CertStats) {
    stats.nodes += 1;
    match &node.step {
        StepRecord::ApplyBounds { applications, .. } => {
            for a in applications {
                stats.max_digits = stats.max_digits.max(a.validity.digits);
                match &a.evidence {
                    crate::bounds::CoeffSignEvidence::Constant { digits, .. }
                    | crate::bounds::CoeffSignEvidence::Monomial { digits, .. } => {
                        stats.max_digits = stats.max_digits.max(*digits);
                    }
                    crate::bounds::CoeffSignEvidence::IntervalSturm { cert, .. } => {
                        stats.max_digits = stats.max_digits.max(cert.digits);
                        stats.sturm_certificates += 1;
                    }
                }
            }
        }
        StepRecord::SturmDecide { kernel, .. } => {
            stats.max_digits = stats.max_digits.max(kernel.digits);
            stats.sturm_certificates += 1;
        }
        StepRecord::MulPositive {
            side: SideEvidence::Pattern(p),
            ..
        } => {
            stats.max_digits = stats.max_digits.max(p.digits);
        }
        _ => {}
    }
    for c in &node.children {
        collect_stats(c, stats);
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Mtp(#[from] MtpError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("substitute-sin requires the goal domain to be exactly (0, 1)")]
    SubstituteDomain,
    #[error("multiplier is not a recognized positive pattern and could not be proved positive: {detail}")]
    MultiplierNotPositive { detail: String },
    #[error("expression is identically zero; strict positivity is false")]
    DegenerateZero,
    #[error("monomial factor t^{power} needs an interval within the nonnegative reals, open at 0")]
    MonomialFactorDomain { power: u32 },
}

/// Failure report of a proof attempt.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProveFailure {
    #[error("disproved: value at {var} = {at} is {value_sign} (upper enclosure {value_hi})")]
    Disproved {
        var: &'static str,
        at: String,
        value_sign: Sign,
        value_hi: String,
    },
    #[error("step {index} (line {line}, {step}): {detail}")]
    StepFailed {
        index: usize,
        line: usize,
        step: String,
        detail: String,
    },
    #[error("script leaves an open goal: {detail}")]
    UnclosedGoal { detail: String },
    #[error("automatic search exhausted: {detail}")]
    Exhausted { detail: String },
}

/// Outcome of the transformation part of one step.
pub(crate) struct Applied {
    pub record: StepRecord,
    /// Main continuation goal; `None` when the step closed the goal.
    pub next: Option<Goal>,
    /// Extra subgoals (secant cofactor/concavity, multiplier positivity),
    /// each to be proved and appended after the main child.
    pub side_goals: Vec<Goal>,
}

pub(crate) fn step_substitute_sin(goal: &Goal) -> Result<Applied, StepError> {
    let iv = &goal.interval;
    let domain_ok = iv.lo == PiPoly::zero()
        && iv.hi == PiPoly::one()
        && iv.lo_open
        && iv.hi_open
        && goal.expr.var == Var::X;
    if !domain_ok {
        return Err(StepError::SubstituteDomain);
    }
    let result = mtp::substitute_sin(&goal.expr)?;
    let next = Goal::new(result.clone(), IntervalQPi::zero_to_half_pi());
    Ok(Applied {
        record: StepRecord::SubstituteSin { result },
        next: Some(next),
        side_goals: Vec::new(),
    })
}

/// Built-in patterns: `c * t^p * sin^q t * cos^r t > 0` on subintervals of
/// `(0, pi/2)` with positive `c` and nonnegative powers.
pub(crate) fn monomial_pattern(
    multiplier: &Expr,
    interval: &IntervalQPi,
    ctx: &SignCtx,
) -> Result<Option<MonomialPattern>, StepError> {
    let term = match multiplier.as_single_term() {
        Some(t) => t,
        None => return Ok(None),
    };
    let sh = &term.shape;
    if sh.atan.is_some()
        || sh.asin_pow > 0
        || !sh.multi.is_empty()
        || sh.var_pow < 0
        || sh.sin_pow < 0
        || sh.cos_pow < 0
    {
        return Ok(None);
    }
    let s = pipoly_sign(&term.coeff, ctx)?;
    if s.sign != Sign::Pos {
        return Ok(None);
    }
    let mut digits = s.digits;
    let needs_open_zero = sh.var_pow > 0 || sh.sin_pow > 0;
    if sh.var_pow > 0 || sh.sin_pow > 0 || sh.cos_pow > 0 {
        let lo_sign = pipoly_sign(&interval.lo, ctx)?;
        digits = digits.max(lo_sign.digits);
        if lo_sign.sign == Sign::Neg {
            return Ok(None);
        }
        if lo_sign.sign == Sign::Zero && needs_open_zero && !interval.lo_open {
            return Ok(None);
        }
        let half_pi = PiPoly::monomial(Rational::new(1.into(), 2.into()), 1);
        let room = &half_pi - &interval.hi;
        let room_sign = pipoly_sign(&room, ctx)?;
        digits = digits.max(room_sign.digits);
        if room_sign.sign == Sign::Neg {
            return Ok(None);
        }
        if room_sign.sign == Sign::Zero && sh.cos_pow > 0 && !interval.hi_open {
            return Ok(None);
        }
    }
    Ok(Some(MonomialPattern {
        coeff: term.coeff.clone(),
        digits,
        var_pow: sh.var_pow,
        sin_pow: sh.sin_pow,
        cos_pow: sh.cos_pow,
    }))
}

pub(crate) fn step_mul_positive(
    goal: &Goal,
    multiplier: &Expr,
    ctx: &SignCtx,
) -> Result<Applied, StepError> {
    let result = goal.expr.mul(multiplier);
    let next = Goal::new(result.clone(), goal.interval.clone());
    match monomial_pattern(multiplier, &goal.interval, ctx)? {
        Some(pattern) => Ok(Applied {
            record: StepRecord::MulPositive {
                multiplier: multiplier.clone(),
                side: SideEvidence::Pattern(pattern),
                result,
            },
            next: Some(next),
            side_goals: Vec::new(),
        }),
        None => Ok(Applied {
            record: StepRecord::MulPositive {
                multiplier: multiplier.clone(),
                side: SideEvidence::Proved,
                result,
            },
            next: Some(next),
            side_goals: vec![Goal::new(multiplier.clone(), goal.interval.clone())],
        }),
    }
}

pub(crate) fn step_reflect(goal: &Goal) -> Result<Applied, StepError> {
    let result = mtp::reflect(&goal.expr)?;
    let next = Goal::new(result.clone(), goal.interval.reflected());
    Ok(Applied {
        record: StepRecord::Reflect { result },
        next: Some(next),
        side_goals: Vec::new(),
    })
}

pub(crate) fn step_to_fourier(goal: &Goal) -> Result<Applied, StepError> {
    let form = mtp::to_fourier_form(&goal.expr)?;
    let result = form.to_expr();
    if result.is_zero() {
        return Err(StepError::DegenerateZero);
    }
    let next = Goal::new(result.clone(), goal.interval.clone());
    Ok(Applied {
        record: StepRecord::ToFourier { result },
        next: Some(next),
        side_goals: Vec::new(),
    })
}

pub(crate) fn step_bound(
    goal: &Goal,
    selector: &AtomSelector,
    rule: &BoundRule,
    ctx: &SignCtx,
) -> Result<Applied, StepError> {
    let (result, applications) = apply_bound(&goal.expr, &goal.interval, selector, rule, ctx)?;
    let next = if result.is_zero() {
        None
    } else {
        Some(Goal::new(result.clone(), goal.interval.clone()))
    };
    Ok(Applied {
        record: StepRecord::ApplyBounds {
            applications,
            result,
        },
        next,
        side_goals: Vec::new(),
    })
}

pub(crate) fn step_secant(goal: &Goal, ctx: &SignCtx) -> Result<Applied, StepError> {
    let app = secant_bound_arctan_cos(&goal.expr, &goal.interval, ctx)?;
    let next = Goal::new(app.result.clone(), goal.interval.clone());
    let cofactor_goal = Goal::new(app.cofactor.clone(), goal.interval.clone());
    let (concavity_expr, concavity_iv) = secant_concavity_goal();
    let concavity_goal = Goal::new(concavity_expr, concavity_iv);
    Ok(Applied {
        record: StepRecord::SecantBound {
            cofactor: app.cofactor,
            endpoint_checks: app.endpoint_checks,
            result: app.result,
        },
        next: Some(next),
        side_goals: vec![cofactor_goal, concavity_goal],
    })
}

/// Checks the `t^power > 0` pattern for the goal interval.
pub(crate) fn monomial_factor_admissible(
    power: u32,
    interval: &IntervalQPi,
    ctx: &SignCtx,
) -> Result<(), StepError> {
    if power == 0 {
        return Ok(());
    }
    let lo_sign = pipoly_sign(&interval.lo, ctx)?;
    let ok = match lo_sign.sign {
        Sign::Pos => true,
        Sign::Zero => interval.lo_open,
        Sign::Neg => false,
    };
    if !ok {
        return Err(StepError::MonomialFactorDomain { power });
    }
    Ok(())
}

pub(crate) fn step_factor_monomial(goal: &Goal, ctx: &SignCtx) -> Result<Applied, StepError> {
    let p = goal.expr.to_poly()?;
    let (power, q) = p.factor_monomial()?;
    let power = power as u32;
    monomial_factor_admissible(power, &goal.interval, ctx)?;
    let (scale, quotient) = q.normalize_integer()?;
    let next = Goal::new(
        Expr::from_poly(Var::T, &quotient),
        goal.interval.clone(),
    );
    Ok(Applied {
        record: StepRecord::FactorMonomial {
            power,
            scale,
            quotient,
        },
        next: Some(next),
        side_goals: Vec::new(),
    })
}

pub(crate) fn step_subst_square(goal: &Goal, ctx: &SignCtx) -> Result<Applied, StepError> {
    let p = goal.expr.to_poly()?;
    let result = p.substitute_square()?;
    let interval = goal.interval.squared(ctx)?;
    let next = Goal::new(Expr::from_poly(Var::T, &result), interval);
    Ok(Applied {
        record: StepRecord::SubstSquare { result },
        next: Some(next),
        side_goals: Vec::new(),
    })
}

pub(crate) fn step_sturm(goal: &Goal, ctx: &SignCtx) -> Result<StepRecord, StepError> {
    let input = goal.expr.to_poly()?;
    if input.is_zero() {
        return Err(StepError::DegenerateZero);
    }
    // A zero of t = 0 sitting on an open left endpoint is stripped first;
    // t^m is positive on the rest of the interval.
    let (m, quotient) = input.factor_monomial()?;
    let monomial_power = m as u32;
    monomial_factor_admissible(monomial_power, &goal.interval, ctx)?;
    let kernel = prove_positive(&quotient, &goal.interval, ctx)?;
    Ok(StepRecord::SturmDecide {
        input,
        monomial_power,
        kernel,
    })
}

/// A decimal-snapped rational strictly between the interval endpoints,
/// preferring short decimals (auto split points).
pub(crate) fn short_interior_rational(
    interval: &IntervalQPi,
    ctx: &SignCtx,
) -> Result<Rational, StepError> {
    use crate::numeric;
    for digits in [1u32, 2, 3, 6, 12] {
        let lo_iv = numeric::pipoly_iv(&interval.lo, 16);
        let hi_iv = numeric::pipoly_iv(&interval.hi, 16);
        let mid = (&lo_iv.hi + &hi_iv.lo) / Rational::from_integer(2.into());
        let grid = num_bigint::BigInt::from(10u32).pow(digits);
        let cand = Rational::new(
            (&mid * Rational::from_integer(grid.clone())).round().to_integer(),
            grid,
        );
        if cand.is_zero() {
            continue;
        }
        let above = &PiPoly::from_rational(cand.clone()) - &interval.lo;
        let below = &interval.hi - &PiPoly::from_rational(cand.clone());
        if pipoly_sign(&above, ctx)?.sign == Sign::Pos
            && pipoly_sign(&below, ctx)?.sign == Sign::Pos
        {
            return Ok(cand);
        }
    }
    Err(StepError::Poly(PolyError::NoSamplePoint {
        interval: interval.to_string(),
    }))
}

pub(crate) fn rational_display(r: &Rational) -> String {
    rational_to_str(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::fixtures;

    #[test]
    fn substitute_sin_requires_unit_interval() {
        let goal = Goal::new(fixtures::conjecture1_goal_expr(), IntervalQPi::unit_open());
        assert!(step_substitute_sin(&goal).is_ok());
        let bad = Goal::new(
            fixtures::conjecture1_goal_expr(),
            IntervalQPi {
                hi: PiPoly::from_rational(rat(1, 2)),
                ..IntervalQPi::unit_open()
            },
        );
        assert!(matches!(
            step_substitute_sin(&bad),
            Err(StepError::SubstituteDomain)
        ));
    }

    #[test]
    fn mul_positive_pattern_discharges_sin_powers() {
        let ctx = SignCtx::default();
        let goal = Goal::new(
            mtp::substitute_sin(&fixtures::conjecture1_goal_expr()).unwrap(),
            IntervalQPi::zero_to_half_pi(),
        );
        let multiplier = Expr::new(
            Var::T,
            vec![crate::mtp::Term {
                shape: crate::mtp::TermShape {
                    sin_pow: 2,
                    ..crate::mtp::TermShape::constant()
                },
                coeff: PiPoly::one(),
            }],
        );
        let applied = step_mul_positive(&goal, &multiplier, &ctx).unwrap();
        assert!(applied.side_goals.is_empty());
        match applied.record {
            StepRecord::MulPositive {
                side: SideEvidence::Pattern(p),
                result,
                ..
            } => {
                assert_eq!(p.sin_pow, 2);
                assert_eq!(result, fixtures::g1_expr());
            }
            other => panic!("unexpected record {other:?}"),
        }
    }

    #[test]
    fn sturm_step_strips_the_monomial_factor() {
        let ctx = SignCtx::default();
        let cubic = fixtures::case2_cubic_1();
        let hi = &PiPoly::monomial(rat(1, 2), 1) - &PiPoly::from_rational(rat(11, 10));
        let iv = IntervalQPi {
            lo: PiPoly::zero(),
            hi,
            lo_open: true,
            hi_open: true,
        };
        let goal = Goal::new(Expr::from_poly(Var::T, &cubic), iv);
        match step_sturm(&goal, &ctx).unwrap() {
            StepRecord::SturmDecide {
                monomial_power,
                kernel,
                ..
            } => {
                assert_eq!(monomial_power, 1);
                assert_eq!(kernel.root_count, 0);
            }
            other => panic!("unexpected record {other:?}"),
        }
    }

    #[test]
    fn sturm_step_proves_the_first_quintic() {
        let ctx = SignCtx::default();
        let iv = IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::from_rational(rat(121, 100)),
            lo_open: true,
            hi_open: false,
        };
        let goal = Goal::new(Expr::from_poly(Var::T, &fixtures::p5_poly()), iv);
        let record = step_sturm(&goal, &ctx).unwrap();
        match record {
            StepRecord::SturmDecide {
                monomial_power,
                kernel,
                ..
            } => {
                assert_eq!(monomial_power, 0);
                assert_eq!(kernel.root_count, 0);
                assert_eq!(kernel.hi_sign, Sign::Pos);
            }
            other => panic!("unexpected record {other:?}"),
        }
    }

    #[test]
    fn sturm_step_proves_the_second_septic() {
        let ctx = SignCtx::default();
        let iv = IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::from_rational(rat(169, 100)),
            lo_open: true,
            hi_open: false,
        };
        let goal = Goal::new(Expr::from_poly(Var::T, &fixtures::p7_poly()), iv);
        assert!(step_sturm(&goal, &ctx).is_ok());
    }
}
