//! Script execution: a parsed proof script drives the step functions in
//! order, threading goals and assembling the certificate tree.

use crate::bounds::{AtomSelector, BoundRule};
use crate::coeff::{PiPoly, Rational, SignCtx};
use crate::mtp::Expr;
use crate::prover::{
    auto, step_bound, step_factor_monomial, step_mul_positive, step_reflect, step_secant,
    step_sturm, step_subst_square, step_substitute_sin, step_to_fourier, Applied, Certificate,
    Goal, ProofNode, ProveFailure, StepRecord,
};

/// One scripted directive (line number kept for error reporting).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptStep {
    SubstituteSin,
    MulPositive(Expr),
    Reflect,
    ToFourier,
    Bound {
        selector: AtomSelector,
        rule: BoundRule,
    },
    SecantArctanCos,
    FactorMonomial,
    SubstSquare,
    Sturm,
}

impl ScriptStep {
    pub fn name(&self) -> &'static str {
        match self {
            ScriptStep::SubstituteSin => "substitute-sin",
            ScriptStep::MulPositive(_) => "mul-positive",
            ScriptStep::Reflect => "reflect",
            ScriptStep::ToFourier => "to-fourier",
            ScriptStep::Bound { .. } => "bound",
            ScriptStep::SecantArctanCos => "secant-arctan-cos",
            ScriptStep::FactorMonomial => "factor-monomial",
            ScriptStep::SubstSquare => "subst-square",
            ScriptStep::Sturm => "sturm",
        }
    }
}

/// A block of steps, optionally ending in a split with two branch blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptNode {
    pub steps: Vec<(usize, ScriptStep)>,
    pub split: Option<SplitNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitNode {
    pub line: usize,
    pub point: Rational,
    pub left: Box<ScriptNode>,
    pub right: Box<ScriptNode>,
}

/// Runs a script against a goal, producing a certificate or the failure
/// report naming the failing step.
pub fn run_script(
    goal: &Goal,
    script: &ScriptNode,
    notes: Vec<String>,
    ctx: &SignCtx,
) -> Result<Certificate, ProveFailure> {
    let mut index = 0usize;
    let root = exec_block(goal.clone(), script, ctx, &mut index)?;
    Ok(Certificate::assemble(goal.clone(), notes, root))
}

fn fail(index: usize, line: usize, step: &str, detail: impl ToString) -> ProveFailure {
    ProveFailure::StepFailed {
        index,
        line,
        step: step.to_string(),
        detail: detail.to_string(),
    }
}

fn exec_block(
    goal: Goal,
    node: &ScriptNode,
    ctx: &SignCtx,
    index: &mut usize,
) -> Result<ProofNode, ProveFailure> {
    exec_steps(goal, &node.steps, node.split.as_ref(), ctx, index)
}

fn exec_steps(
    goal: Goal,
    steps: &[(usize, ScriptStep)],
    split: Option<&SplitNode>,
    ctx: &SignCtx,
    index: &mut usize,
) -> Result<ProofNode, ProveFailure> {
    let Some(((line, step), rest)) = steps.split_first() else {
        // End of the linear block: a split must take over, otherwise the
        // goal was left open.
        let Some(sp) = split else {
            return Err(ProveFailure::UnclosedGoal {
                detail: format!("no decide step for goal on {}", goal.interval),
            });
        };
        return exec_split(goal, sp, ctx, index);
    };
    *index += 1;
    let this_index = *index;
    let on_err = |detail: &dyn std::fmt::Display| fail(this_index, *line, step.name(), detail);

    if let ScriptStep::Sturm = step {
        let record = step_sturm(&goal, ctx).map_err(|e| on_err(&e))?;
        if !rest.is_empty() || split.is_some() {
            return Err(fail(
                this_index,
                *line,
                step.name(),
                "steps remain after the goal was decided",
            ));
        }
        return Ok(ProofNode {
            goal,
            step: record,
            children: Vec::new(),
        });
    }

    let applied: Applied = match step {
        ScriptStep::SubstituteSin => step_substitute_sin(&goal).map_err(|e| on_err(&e))?,
        ScriptStep::MulPositive(m) => step_mul_positive(&goal, m, ctx).map_err(|e| on_err(&e))?,
        ScriptStep::Reflect => step_reflect(&goal).map_err(|e| on_err(&e))?,
        ScriptStep::ToFourier => step_to_fourier(&goal).map_err(|e| on_err(&e))?,
        ScriptStep::Bound { selector, rule } => {
            step_bound(&goal, selector, rule, ctx).map_err(|e| on_err(&e))?
        }
        ScriptStep::SecantArctanCos => step_secant(&goal, ctx).map_err(|e| on_err(&e))?,
        ScriptStep::FactorMonomial => step_factor_monomial(&goal, ctx).map_err(|e| on_err(&e))?,
        ScriptStep::SubstSquare => step_subst_square(&goal, ctx).map_err(|e| on_err(&e))?,
        ScriptStep::Sturm => unreachable!("handled above"),
    };

    let mut children = Vec::new();
    match applied.next {
        Some(next_goal) => {
            children.push(exec_steps(next_goal, rest, split, ctx, index)?);
        }
        None => {
            // The step closed the goal (identically-zero minorant).
            if !rest.is_empty() || split.is_some() {
                return Err(fail(
                    this_index,
                    *line,
                    step.name(),
                    "steps remain after the goal was decided",
                ));
            }
        }
    }
    // Side goals (multiplier positivity, secant cofactor and concavity) are
    // discharged by the automatic prover and appended as child proofs.
    for side in applied.side_goals {
        let side_proof = auto::auto_prove_node(&side, &auto::AutoConfig::default(), ctx)
            .map_err(|e| {
                fail(
                    this_index,
                    *line,
                    step.name(),
                    format!("side condition `{} > 0 on {}` failed: {e}", side.expr, side.interval),
                )
            })?;
        children.push(side_proof);
    }
    Ok(ProofNode {
        goal,
        step: applied.record,
        children,
    })
}

fn exec_split(
    goal: Goal,
    sp: &SplitNode,
    ctx: &SignCtx,
    index: &mut usize,
) -> Result<ProofNode, ProveFailure> {
    *index += 1;
    let this_index = *index;
    let point = PiPoly::from_rational(sp.point.clone());
    let (left_iv, right_iv) = goal
        .interval
        .split_at(&point, ctx)
        .map_err(|e| fail(this_index, sp.line, "split", e))?;
    let left_goal = Goal::new(goal.expr.clone(), left_iv);
    let right_goal = Goal::new(goal.expr.clone(), right_iv);
    let left = exec_block(left_goal, &sp.left, ctx, index)?;
    let right = exec_block(right_goal, &sp.right, ctx, index)?;
    Ok(ProofNode {
        goal,
        step: StepRecord::Split { point },
        children: vec![left, right],
    })
}
