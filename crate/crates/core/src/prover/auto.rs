//! Automatic proof search: bound-degree escalation per atom, rational
//! bisection splitting, and reflection of right branches that touch pi/2.
//!
//! The search mirrors the manual strategy: eliminate `atan` atoms by the
//! Taylor sandwich (direction per occurrence sign), rewrite to multiple-angle
//! form, replace every trigonometric atom by an admissible one-sided Taylor
//! bound, and decide the remaining polynomial by Sturm counting. Degrees
//! start at the smallest admissible value for each atom and escalate in
//! lock-step (+4 keeps the direction) up to the configured cap; when every
//! escalation fails the interval is bisected at a short rational, and a
//! right branch ending exactly at pi/2 is reflected onto `(0, pi/2 - c)`
//! first, where Taylor bounds at 0 are effective again.

use num_bigint::BigInt;

use crate::bounds::{atom_total_coeff, AtomSelector, BoundError, BoundFn, BoundRule, Direction};
use crate::coeff::{pipoly_sign, PiPoly, Rational, Sign, SignCtx};
use crate::mtp::{ArcInner, Expr, Term, TermShape, TrigFn, Var};
use crate::prover::{
    falsify, short_interior_rational, step_bound, step_factor_monomial, step_mul_positive,
    step_reflect, step_sturm, step_subst_square, step_substitute_sin, step_to_fourier,
    Certificate, Goal, ProofNode, ProveFailure, StepError, StepRecord,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutoConfig {
    /// Bisection depth cap.
    pub max_split_depth: u32,
    /// Largest Taylor degree the search may cite.
    pub max_bound_degree: u32,
    /// Sample count for the numeric pre-flight.
    pub falsify_samples: u32,
}

impl Default for AutoConfig {
    fn default() -> Self {
        AutoConfig {
            max_split_depth: 6,
            max_bound_degree: 23,
            falsify_samples: 33,
        }
    }
}

/// Automatic proof of a goal; returns the certificate or the reason the
/// search gave up (including a numeric counterexample when one exists).
pub fn auto_prove(
    goal: &Goal,
    cfg: &AutoConfig,
    ctx: &SignCtx,
) -> Result<Certificate, ProveFailure> {
    if let Some(cx) = falsify::numeric_falsify(goal, cfg.falsify_samples, 40) {
        return Err(ProveFailure::Disproved {
            var: goal.expr.var.name(),
            at: crate::coeff::rational_to_str(&cx.at),
            value_sign: cx.sign,
            value_hi: crate::numeric::decimal_string(&cx.value_hi, 30),
        });
    }
    let root = auto_prove_node(goal, cfg, ctx)?;
    Ok(Certificate::assemble(goal.clone(), Vec::new(), root))
}

/// Automatic proof producing a bare proof node (used for side conditions).
pub(crate) fn auto_prove_node(
    goal: &Goal,
    cfg: &AutoConfig,
    ctx: &SignCtx,
) -> Result<ProofNode, ProveFailure> {
    if goal.expr.is_zero() {
        return Err(ProveFailure::Exhausted {
            detail: "goal expression is identically zero".into(),
        });
    }
    if goal.expr.var == Var::X {
        let applied = step_substitute_sin(goal).map_err(auto_err)?;
        let next = applied.next.expect("substitution continues");
        let child = auto_prove_node(&next, cfg, ctx)?;
        return Ok(ProofNode {
            goal: goal.clone(),
            step: applied.record,
            children: vec![child],
        });
    }
    // Clear negative powers by a positive monomial multiplication.
    let (v, s, c) = goal.expr.laurent_depth();
    if v < 0 || s < 0 || c < 0 {
        let multiplier = Expr::new(
            Var::T,
            vec![Term {
                shape: TermShape {
                    var_pow: -v.min(0),
                    sin_pow: -s.min(0),
                    cos_pow: -c.min(0),
                    ..TermShape::constant()
                },
                coeff: PiPoly::one(),
            }],
        );
        let applied = step_mul_positive(goal, &multiplier, ctx).map_err(auto_err)?;
        if !applied.side_goals.is_empty() {
            return Err(ProveFailure::Exhausted {
                detail: format!(
                    "cannot discharge positivity of the clearing multiplier on {}",
                    goal.interval
                ),
            });
        }
        let next = applied.next.expect("multiplication continues");
        let child = auto_prove_node(&next, cfg, ctx)?;
        return Ok(ProofNode {
            goal: goal.clone(),
            step: applied.record,
            children: vec![child],
        });
    }
    solve(goal, cfg, 0, ctx)
}

fn auto_err(e: impl std::fmt::Display) -> ProveFailure {
    ProveFailure::Exhausted {
        detail: e.to_string(),
    }
}

fn solve(
    goal: &Goal,
    cfg: &AutoConfig,
    depth: u32,
    ctx: &SignCtx,
) -> Result<ProofNode, ProveFailure> {
    let direct_err = match direct_chain(goal, cfg, ctx) {
        Ok(node) => return Ok(node),
        Err(e) => e,
    };
    if depth >= cfg.max_split_depth {
        return Err(ProveFailure::Exhausted {
            detail: format!(
                "split depth {} exhausted on {}; deepest failure: {direct_err}",
                cfg.max_split_depth, goal.interval
            ),
        });
    }
    let point = short_interior_rational(&goal.interval, ctx).map_err(auto_err)?;
    let point_pi = PiPoly::from_rational(point);
    let (left_iv, right_iv) = goal
        .interval
        .split_at(&point_pi, ctx)
        .map_err(auto_err)?;
    let left = solve(&Goal::new(goal.expr.clone(), left_iv), cfg, depth + 1, ctx)?;
    let right_goal = Goal::new(goal.expr.clone(), right_iv);
    let half_pi = PiPoly::monomial(Rational::new(BigInt::from(1), BigInt::from(2)), 1);
    let right = if right_goal.interval.hi == half_pi {
        let applied = step_reflect(&right_goal).map_err(auto_err)?;
        let next = applied.next.expect("reflection continues");
        let child = solve(&next, cfg, depth + 1, ctx)?;
        ProofNode {
            goal: right_goal,
            step: applied.record,
            children: vec![child],
        }
    } else {
        solve(&right_goal, cfg, depth + 1, ctx)?
    };
    Ok(ProofNode {
        goal: goal.clone(),
        step: StepRecord::Split { point: point_pi },
        children: vec![left, right],
    })
}

type Stage = (Goal, StepRecord);

fn fold_vine(mut stages: Vec<Stage>, leaf: ProofNode) -> ProofNode {
    let mut node = leaf;
    while let Some((goal, record)) = stages.pop() {
        node = ProofNode {
            goal,
            step: record,
            children: vec![node],
        };
    }
    node
}

/// Attempts the splitless pipeline: atan sandwich, multiple-angle rewrite,
/// per-atom Taylor bounds with degree escalation, Sturm decision.
fn direct_chain(goal: &Goal, cfg: &AutoConfig, ctx: &SignCtx) -> Result<ProofNode, ProveFailure> {
    let mut last_failure = String::new();
    for atan_level in 0..=2u32 {
        let lower_deg = 3 + 4 * atan_level;
        let upper_deg = 5 + 4 * atan_level;
        if upper_deg > cfg.max_bound_degree {
            break;
        }
        match chain_with_atan_degrees(goal, cfg, lower_deg, upper_deg, ctx) {
            Ok(node) => return Ok(node),
            Err(e) => {
                last_failure = e.to_string();
                if !goal.expr.has_atan() {
                    // Escalating atan degrees cannot change anything.
                    break;
                }
            }
        }
    }
    Err(ProveFailure::Exhausted {
        detail: last_failure,
    })
}

fn chain_with_atan_degrees(
    goal: &Goal,
    cfg: &AutoConfig,
    lower_deg: u32,
    upper_deg: u32,
    ctx: &SignCtx,
) -> Result<ProofNode, ProveFailure> {
    let mut stages: Vec<Stage> = Vec::new();
    let mut current = goal.clone();

    // Eliminate atan atoms, lower bounds on positive-coefficient occurrences
    // and upper bounds on negative ones.
    for inner in [ArcInner::Sin, ArcInner::Cos, ArcInner::Var] {
        let selector = AtomSelector::Atan { inner };
        for (deg, dir_sign) in [(lower_deg, Sign::Pos), (upper_deg, Sign::Neg)] {
            let occurs = current.expr.terms.iter().any(|t| {
                matches!(t.shape.atan, Some((i, _)) if i == inner)
                    && pipoly_sign(&t.coeff, ctx).map_or(false, |s| s.sign == dir_sign)
            });
            if !occurs {
                continue;
            }
            let rule = BoundRule::new(BoundFn::Atan, deg).map_err(auto_err)?;
            let applied = step_bound(&current, &selector, &rule, ctx).map_err(auto_err)?;
            stages.push((current.clone(), applied.record));
            match applied.next {
                Some(next) => current = next,
                None => {
                    let (g, record) = stages.pop().expect("stage just pushed");
                    let leaf = ProofNode {
                        goal: g,
                        step: record,
                        children: Vec::new(),
                    };
                    return Ok(fold_vine(stages, leaf));
                }
            }
        }
    }

    // Canonical multiple-angle form (skip when already a plain polynomial).
    let needs_fourier = current
        .expr
        .terms
        .iter()
        .any(|t| t.shape.sin_pow != 0 || t.shape.cos_pow != 0 || !t.shape.multi.is_empty());
    if needs_fourier {
        let applied = step_to_fourier(&current).map_err(auto_err)?;
        stages.push((current.clone(), applied.record));
        current = applied.next.expect("rewrite continues");
    }

    let atoms =
        fourier_atoms(&current.expr).map_err(|detail| ProveFailure::Exhausted { detail })?;
    if atoms.is_empty() {
        let leaf = close_polynomial(&current, ctx).map_err(auto_err)?;
        return Ok(fold_vine(stages, leaf));
    }

    // Fixed per-atom directions and minimal admissible degrees.
    let mut plan: Vec<(TrigFn, u32, Direction, u32)> = Vec::new();
    for &(func, m) in &atoms {
        let total = atom_total_coeff(&current.expr, func, m)
            .map_err(auto_err)?
            .expect("atom listed so its coefficient exists");
        let sign = if total.degree() == Some(0) {
            pipoly_sign(&total.coeff(0), ctx).map_err(auto_err)?.sign
        } else if crate::poly::prove_positive(&total, &current.interval, ctx).is_ok() {
            Sign::Pos
        } else if crate::poly::prove_positive(&(-&total), &current.interval, ctx).is_ok() {
            Sign::Neg
        } else {
            return Err(ProveFailure::Exhausted {
                detail: format!(
                    "undecided coefficient sign for {}({m}t) on {}",
                    func.name(),
                    current.interval
                ),
            });
        };
        let direction = match sign {
            Sign::Pos => Direction::Lower,
            Sign::Neg => Direction::Upper,
            Sign::Zero => unreachable!("zero coefficients are dropped by normalization"),
        };
        let base = match min_admissible_degree(func, m, direction, &current, cfg, ctx) {
            Some(d) => d,
            None => {
                return Err(ProveFailure::Exhausted {
                    detail: format!(
                        "no admissible degree up to {} for {}({m}t) on {}",
                        cfg.max_bound_degree,
                        func.name(),
                        current.interval
                    ),
                })
            }
        };
        plan.push((func, m, direction, base));
    }

    let mut last = String::from("bound escalation never started");
    let mut prev_degrees: Option<Vec<u32>> = None;
    for level in 0.. {
        let degrees: Vec<u32> = plan
            .iter()
            .map(|&(func, _, direction, base)| {
                let wanted = base + 4 * level;
                if wanted > cfg.max_bound_degree {
                    largest_degree(direction, func, cfg.max_bound_degree).max(base)
                } else {
                    wanted
                }
            })
            .collect();
        if prev_degrees.as_ref() == Some(&degrees) {
            break; // every atom saturated at the cap
        }
        prev_degrees = Some(degrees.clone());

        let mut trial_stages: Vec<Stage> = Vec::new();
        let mut trial_goal = current.clone();
        let mut failed = None;
        let mut closed = None;
        for (&(func, m, _, _), &degree) in plan.iter().zip(&degrees) {
            let rule = BoundRule::new(bound_fn(func), degree).expect("parity by construction");
            let selector = AtomSelector::MultiAngle {
                func,
                multiplier: m,
            };
            match step_bound(&trial_goal, &selector, &rule, ctx) {
                Ok(applied) => {
                    trial_stages.push((trial_goal.clone(), applied.record));
                    match applied.next {
                        Some(next) => trial_goal = next,
                        None => {
                            let (g, record) = trial_stages.pop().expect("stage just pushed");
                            closed = Some(ProofNode {
                                goal: g,
                                step: record,
                                children: Vec::new(),
                            });
                            break;
                        }
                    }
                }
                Err(e) => {
                    failed = Some(format!("{}({m}t) degree {degree}: {e}", func.name()));
                    break;
                }
            }
        }
        if let Some(leaf) = closed {
            stages.extend(trial_stages);
            return Ok(fold_vine(stages, leaf));
        }
        if let Some(msg) = failed {
            last = msg;
            continue;
        }
        // Cheap numeric pre-filter before the Sturm machinery.
        if let Some(msg) = sample_rejects(&trial_goal, ctx) {
            last = format!("level {level}: {msg}");
            continue;
        }
        match close_polynomial(&trial_goal, ctx) {
            Ok(leaf) => {
                stages.extend(trial_stages);
                return Ok(fold_vine(stages, leaf));
            }
            Err(e) => {
                last = format!("level {level}: {e}");
            }
        }
    }
    Err(ProveFailure::Exhausted { detail: last })
}

/// Quick exact evaluation at interior samples; catches hopeless minorants
/// before a Sturm chain is built. Taylor error grows toward the right end,
/// so a sample near the upper endpoint is checked too.
fn sample_rejects(goal: &Goal, ctx: &SignCtx) -> Option<String> {
    let p = goal.expr.to_poly().ok()?;
    if p.is_zero() {
        return None;
    }
    let mut samples = Vec::new();
    if let Ok(mid) = goal.interval.interior_rational(ctx) {
        samples.push(mid);
    }
    let lo_in = crate::numeric::pipoly_iv(&goal.interval.lo, 12).hi;
    let hi_in = crate::numeric::pipoly_iv(&goal.interval.hi, 12).lo;
    let span = &hi_in - &lo_in;
    if num_traits::Signed::is_positive(&span) {
        for num in [63i64, 15] {
            let cand = &lo_in + &span * Rational::new(BigInt::from(num), BigInt::from(64));
            let cand = round_rational(&cand, 4);
            let above = &PiPoly::from_rational(cand.clone()) - &goal.interval.lo;
            let below = &goal.interval.hi - &PiPoly::from_rational(cand.clone());
            let inside = pipoly_sign(&above, ctx).map_or(false, |s| s.sign == Sign::Pos)
                && pipoly_sign(&below, ctx).map_or(false, |s| s.sign == Sign::Pos);
            if inside {
                samples.push(cand);
            }
        }
    }
    for sample in samples {
        let sr = pipoly_sign(&p.eval_rational(&sample), ctx).ok()?;
        if sr.sign != Sign::Pos {
            return Some(format!(
                "minorant not positive at sample t = {}",
                crate::coeff::rational_to_str(&sample)
            ));
        }
    }
    None
}

fn round_rational(r: &Rational, digits: u32) -> Rational {
    let grid = BigInt::from(10u32).pow(digits);
    Rational::new(
        (r * Rational::from_integer(grid.clone())).round().to_integer(),
        grid,
    )
}

fn bound_fn(func: TrigFn) -> BoundFn {
    match func {
        TrigFn::Sin => BoundFn::Sin,
        TrigFn::Cos => BoundFn::Cos,
    }
}

/// Atoms of a multiple-angle-form expression, or a description of why the
/// expression is not in that form.
fn fourier_atoms(e: &Expr) -> Result<Vec<(TrigFn, u32)>, String> {
    let mut atoms = std::collections::BTreeSet::new();
    for t in &e.terms {
        let sh = &t.shape;
        if sh.atan.is_some() || sh.asin_pow > 0 {
            return Err("inverse-function atom survived elimination".into());
        }
        match (sh.sin_pow, sh.cos_pow, sh.multi.as_slice()) {
            (0, 0, []) => {}
            (1, 0, []) => {
                atoms.insert((TrigFn::Sin, 1));
            }
            (0, 1, []) => {
                atoms.insert((TrigFn::Cos, 1));
            }
            (0, 0, [(f, k, 1)]) => {
                atoms.insert((*f, *k));
            }
            _ => {
                return Err(format!(
                    "term not in multiple-angle form: {}",
                    Expr::new(e.var, vec![t.clone()])
                ))
            }
        }
    }
    Ok(atoms.into_iter().collect())
}

/// Smallest degree of the right parity/direction whose validity radius
/// admits the argument `m t` over the goal interval.
fn min_admissible_degree(
    func: TrigFn,
    m: u32,
    direction: Direction,
    goal: &Goal,
    cfg: &AutoConfig,
    ctx: &SignCtx,
) -> Option<u32> {
    let mut deg = degree_base(func, direction);
    while deg <= cfg.max_bound_degree {
        let rule = BoundRule::new(bound_fn(func), deg).ok()?;
        match crate::bounds::check_validity(&rule, m, &goal.interval, ctx) {
            Ok(_) => return Some(deg),
            Err(BoundError::ValidityExceeded { .. }) => deg += 4,
            Err(_) => return None,
        }
    }
    None
}

fn degree_base(func: TrigFn, direction: Direction) -> u32 {
    match (func, direction) {
        (TrigFn::Cos, Direction::Upper) => 0,
        (TrigFn::Cos, Direction::Lower) => 2,
        (TrigFn::Sin, Direction::Upper) => 1,
        (TrigFn::Sin, Direction::Lower) => 3,
    }
}

fn largest_degree(direction: Direction, func: TrigFn, cap: u32) -> u32 {
    let base = degree_base(func, direction);
    base + 4 * ((cap - base) / 4)
}

/// Factor the monomial part, substitute `z = t^2` when even, decide by Sturm.
fn close_polynomial(goal: &Goal, ctx: &SignCtx) -> Result<ProofNode, StepError> {
    let p = goal.expr.to_poly()?;
    if p.is_zero() {
        return Err(StepError::DegenerateZero);
    }
    let mut stages: Vec<Stage> = Vec::new();
    let mut current = goal.clone();
    let (m, q) = p.factor_monomial()?;
    let one = Rational::new(BigInt::from(1), BigInt::from(1));
    if m > 0 || q.rational_content() != one {
        let applied = step_factor_monomial(&current, ctx)?;
        let next = applied.next.clone().expect("factoring continues");
        stages.push((current.clone(), applied.record));
        current = next;
    }
    let poly_now = current.expr.to_poly()?;
    let even = poly_now.degree().map_or(false, |d| d >= 2)
        && poly_now
            .coeffs()
            .iter()
            .enumerate()
            .all(|(i, c)| i % 2 == 0 || c.is_zero());
    if even {
        if let Ok(applied) = step_subst_square(&current, ctx) {
            let next = applied.next.clone().expect("substitution continues");
            stages.push((current.clone(), applied.record));
            current = next;
        }
    }
    let record = step_sturm(&current, ctx)?;
    let leaf = ProofNode {
        goal: current,
        step: record,
        children: Vec::new(),
    };
    Ok(fold_vine(stages, leaf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::fixtures;
    use crate::poly::IntervalQPi;
    use crate::prover::verify_certificate;

    fn t_minus_sin_t() -> Expr {
        Expr::new(
            Var::T,
            vec![
                Term {
                    shape: TermShape {
                        var_pow: 1,
                        ..TermShape::constant()
                    },
                    coeff: PiPoly::one(),
                },
                Term {
                    shape: TermShape {
                        sin_pow: 1,
                        ..TermShape::constant()
                    },
                    coeff: PiPoly::from_int(-1),
                },
            ],
        )
    }

    fn unit_interval_closed_hi() -> IntervalQPi {
        IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::one(),
            lo_open: true,
            hi_open: false,
        }
    }

    #[test]
    fn textbook_inequality_t_above_sin() {
        let ctx = SignCtx::default();
        let goal = Goal::new(t_minus_sin_t(), unit_interval_closed_hi());
        let cert = auto_prove(&goal, &AutoConfig::default(), &ctx).unwrap();
        verify_certificate(&cert, &ctx).unwrap();
    }

    #[test]
    fn false_claim_is_disproved_with_counterexample() {
        let ctx = SignCtx::default();
        let goal = Goal::new(t_minus_sin_t().neg(), unit_interval_closed_hi());
        match auto_prove(&goal, &AutoConfig::default(), &ctx) {
            Err(ProveFailure::Disproved { .. }) => {}
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn concavity_side_goal_needs_split_and_reflection() {
        let ctx = SignCtx::default();
        let (expr, iv) = crate::bounds::secant_concavity_goal();
        let goal = Goal::new(expr, iv);
        let cert = auto_prove(&goal, &AutoConfig::default(), &ctx).unwrap();
        verify_certificate(&cert, &ctx).unwrap();
        fn has_step(node: &ProofNode, name: &str) -> bool {
            node.step.name() == name || node.children.iter().any(|c| has_step(c, name))
        }
        assert!(has_step(&cert.root, "split"));
        assert!(has_step(&cert.root, "reflect"));
    }

    #[test]
    fn first_goal_case_one_is_automatable() {
        let ctx = SignCtx::default();
        let iv = IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::from_rational(rat(11, 10)),
            lo_open: true,
            hi_open: false,
        };
        let goal = Goal::new(fixtures::g1_expr(), iv);
        let cert = auto_prove(&goal, &AutoConfig::default(), &ctx).unwrap();
        verify_certificate(&cert, &ctx).unwrap();
    }
}
