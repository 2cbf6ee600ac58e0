//! Independent certificate replay: every step is recomputed from its goal
//! with kernel operations only — no search — and any mismatch rejects.

use crate::bounds::{
    apply_bound, secant_bound_arctan_cos, secant_concavity_goal, verify_endpoint_checks,
};
use crate::coeff::SignCtx;
use crate::mtp::{self, Var};
use crate::poly::{verify_positivity, IntervalQPi};
use crate::prover::{
    monomial_factor_admissible, monomial_pattern, Certificate, Goal, ProofNode, SideEvidence,
    StepRecord, CERTIFICATE_SCHEMA,
};

/// Accepts iff replaying every step reproduces the recorded tree exactly.
pub fn verify_certificate(cert: &Certificate, ctx: &SignCtx) -> Result<(), String> {
    if cert.schema != CERTIFICATE_SCHEMA {
        return Err(format!(
            "unknown certificate schema `{}` (expected `{CERTIFICATE_SCHEMA}`)",
            cert.schema
        ));
    }
    if cert.root.goal != cert.goal {
        return Err("root goal does not match the certificate goal".into());
    }
    if cert.goal.expr.is_zero() {
        return Err("goal expression is identically zero".into());
    }
    cert.goal
        .interval
        .validate(ctx)
        .map_err(|e| format!("goal interval invalid: {e}"))?;
    verify_node(&cert.root, ctx, "root")
}

fn reject(path: &str, step: &str, detail: impl std::fmt::Display) -> String {
    format!("{path} ({step}): {detail}")
}

fn expect_children(node: &ProofNode, n: usize, path: &str) -> Result<(), String> {
    if node.children.len() != n {
        return Err(reject(
            path,
            node.step.name(),
            format!("expected {n} subproofs, found {}", node.children.len()),
        ));
    }
    Ok(())
}

fn expect_child_goal(node: &ProofNode, idx: usize, want: &Goal, path: &str) -> Result<(), String> {
    let got = &node.children[idx].goal;
    if got != want {
        return Err(reject(
            path,
            node.step.name(),
            format!("subproof {idx} proves a different goal"),
        ));
    }
    Ok(())
}

fn verify_node(node: &ProofNode, ctx: &SignCtx, path: &str) -> Result<(), String> {
    let goal = &node.goal;
    let name = node.step.name();
    let oops = |detail: &dyn std::fmt::Display| reject(path, name, detail);
    match &node.step {
        StepRecord::SubstituteSin { result } => {
            let unit = IntervalQPi::unit_open();
            if goal.expr.var != Var::X || goal.interval != unit {
                return Err(oops(&"substitution requires an x-goal on (0, 1)"));
            }
            let recomputed = mtp::substitute_sin(&goal.expr).map_err(|e| oops(&e))?;
            if &recomputed != result {
                return Err(oops(&"recorded image differs from the recomputed one"));
            }
            expect_children(node, 1, path)?;
            let want = Goal::new(result.clone(), IntervalQPi::zero_to_half_pi());
            expect_child_goal(node, 0, &want, path)?;
        }
        StepRecord::MulPositive {
            multiplier,
            side,
            result,
        } => {
            let recomputed = goal.expr.mul(multiplier);
            if &recomputed != result {
                return Err(oops(&"recorded product differs from the recomputed one"));
            }
            let want_main = Goal::new(result.clone(), goal.interval.clone());
            match side {
                SideEvidence::Pattern(p) => {
                    let found = monomial_pattern(multiplier, &goal.interval, ctx)
                        .map_err(|e| oops(&e))?
                        .ok_or_else(|| oops(&"multiplier does not match a positive pattern"))?;
                    if found.coeff != p.coeff
                        || found.var_pow != p.var_pow
                        || found.sin_pow != p.sin_pow
                        || found.cos_pow != p.cos_pow
                    {
                        return Err(oops(&"recorded pattern differs from the multiplier"));
                    }
                    expect_children(node, 1, path)?;
                    expect_child_goal(node, 0, &want_main, path)?;
                }
                SideEvidence::Proved => {
                    expect_children(node, 2, path)?;
                    expect_child_goal(node, 0, &want_main, path)?;
                    let want_side = Goal::new(multiplier.clone(), goal.interval.clone());
                    expect_child_goal(node, 1, &want_side, path)?;
                }
            }
        }
        StepRecord::Split { point } => {
            let (left, right) = goal
                .interval
                .split_at(point, ctx)
                .map_err(|e| oops(&e))?;
            expect_children(node, 2, path)?;
            expect_child_goal(node, 0, &Goal::new(goal.expr.clone(), left), path)?;
            expect_child_goal(node, 1, &Goal::new(goal.expr.clone(), right), path)?;
        }
        StepRecord::Reflect { result } => {
            let recomputed = mtp::reflect(&goal.expr).map_err(|e| oops(&e))?;
            if &recomputed != result {
                return Err(oops(&"recorded reflection differs from the recomputed one"));
            }
            expect_children(node, 1, path)?;
            let want = Goal::new(result.clone(), goal.interval.reflected());
            expect_child_goal(node, 0, &want, path)?;
        }
        StepRecord::ToFourier { result } => {
            let recomputed = mtp::to_fourier_form(&goal.expr)
                .map_err(|e| oops(&e))?
                .to_expr();
            if &recomputed != result {
                return Err(oops(&"recorded multiple-angle form differs"));
            }
            if result.is_zero() {
                return Err(oops(&"expression is identically zero"));
            }
            expect_children(node, 1, path)?;
            let want = Goal::new(result.clone(), goal.interval.clone());
            expect_child_goal(node, 0, &want, path)?;
        }
        StepRecord::ApplyBounds {
            applications,
            result,
        } => {
            let first = applications
                .first()
                .ok_or_else(|| oops(&"no bound applications recorded"))?;
            let uniform = applications
                .iter()
                .all(|a| a.selector == first.selector && a.rule == first.rule);
            if !uniform {
                return Err(oops(&"applications mix selectors or rules"));
            }
            let (recomputed, records) =
                apply_bound(&goal.expr, &goal.interval, &first.selector, &first.rule, ctx)
                    .map_err(|e| oops(&e))?;
            if &recomputed != result {
                return Err(oops(&"recorded minorant differs from the recomputed one"));
            }
            if &records != applications {
                return Err(oops(&"recorded evidence differs from the recomputed evidence"));
            }
            if result.is_zero() {
                // Identically-zero minorant closes the goal; strictness comes
                // from the nonvanishing coefficient evidence just replayed.
                expect_children(node, 0, path)?;
            } else {
                expect_children(node, 1, path)?;
                let want = Goal::new(result.clone(), goal.interval.clone());
                expect_child_goal(node, 0, &want, path)?;
            }
        }
        StepRecord::SecantBound {
            cofactor,
            endpoint_checks,
            result,
        } => {
            let app = secant_bound_arctan_cos(&goal.expr, &goal.interval, ctx)
                .map_err(|e| oops(&e))?;
            if &app.result != result || &app.cofactor != cofactor {
                return Err(oops(&"recorded secant rewrite differs from the recomputed one"));
            }
            if &app.endpoint_checks != endpoint_checks {
                return Err(oops(&"recorded endpoint checks differ"));
            }
            verify_endpoint_checks(endpoint_checks).map_err(|e| oops(&e))?;
            expect_children(node, 3, path)?;
            expect_child_goal(
                node,
                0,
                &Goal::new(result.clone(), goal.interval.clone()),
                path,
            )?;
            expect_child_goal(
                node,
                1,
                &Goal::new(cofactor.clone(), goal.interval.clone()),
                path,
            )?;
            let (concavity_expr, concavity_iv) = secant_concavity_goal();
            expect_child_goal(node, 2, &Goal::new(concavity_expr, concavity_iv), path)?;
        }
        StepRecord::FactorMonomial {
            power,
            scale,
            quotient,
        } => {
            let p = goal.expr.to_poly().map_err(|e| oops(&e))?;
            let (m, q) = p.factor_monomial().map_err(|e| oops(&e))?;
            if m as u32 != *power {
                return Err(oops(&"monomial power differs from the recomputed one"));
            }
            monomial_factor_admissible(*power, &goal.interval, ctx).map_err(|e| oops(&e))?;
            let (s, qn) = q.normalize_integer().map_err(|e| oops(&e))?;
            if &s != scale || &qn != quotient {
                return Err(oops(&"normalized quotient differs from the recomputed one"));
            }
            expect_children(node, 1, path)?;
            let want = Goal::new(
                mtp::Expr::from_poly(Var::T, quotient),
                goal.interval.clone(),
            );
            expect_child_goal(node, 0, &want, path)?;
        }
        StepRecord::SubstSquare { result } => {
            let p = goal.expr.to_poly().map_err(|e| oops(&e))?;
            let recomputed = p.substitute_square().map_err(|e| oops(&e))?;
            if &recomputed != result {
                return Err(oops(&"squared polynomial differs from the recomputed one"));
            }
            let interval = goal.interval.squared(ctx).map_err(|e| oops(&e))?;
            expect_children(node, 1, path)?;
            let want = Goal::new(mtp::Expr::from_poly(Var::T, result), interval);
            expect_child_goal(node, 0, &want, path)?;
        }
        StepRecord::SturmDecide {
            input,
            monomial_power,
            kernel,
        } => {
            let p = goal.expr.to_poly().map_err(|e| oops(&e))?;
            if &p != input {
                return Err(oops(&"recorded input polynomial differs from the goal"));
            }
            let (m, q) = p.factor_monomial().map_err(|e| oops(&e))?;
            if m as u32 != *monomial_power {
                return Err(oops(&"monomial power differs from the recomputed one"));
            }
            monomial_factor_admissible(*monomial_power, &goal.interval, ctx)
                .map_err(|e| oops(&e))?;
            if kernel.poly != q {
                return Err(oops(&"kernel polynomial is not the monomial quotient"));
            }
            if kernel.interval != goal.interval {
                return Err(oops(&"kernel interval differs from the goal interval"));
            }
            verify_positivity(kernel, ctx).map_err(|e| oops(&e))?;
            expect_children(node, 0, path)?;
        }
    }
    for (i, child) in node.children.iter().enumerate() {
        let child_path = format!("{path}/{i}");
        child
            .goal
            .interval
            .validate(ctx)
            .map_err(|e| reject(&child_path, child.step.name(), e))?;
        verify_node(child, ctx, &child_path)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, PiPoly};
    use crate::fixtures;
    use crate::prover::{auto_prove, AutoConfig};

    #[test]
    fn accepted_certificates_replay_and_mutations_fail() {
        let ctx = SignCtx::default();
        let iv = IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::from_rational(rat(1, 1)),
            lo_open: true,
            hi_open: false,
        };
        let goal = Goal::new(
            crate::mtp::Expr::from_poly(
                Var::T,
                &crate::poly::Poly::from_coeffs(vec![
                    PiPoly::from_int(1),
                    PiPoly::zero(),
                    PiPoly::from_int(1),
                ]),
            ),
            iv,
        );
        let cert = auto_prove(&goal, &AutoConfig::default(), &ctx).unwrap();
        verify_certificate(&cert, &ctx).unwrap();

        // schema mutation
        let mut bad = cert.clone();
        bad.schema = "mtprove-certificate/0".into();
        assert!(verify_certificate(&bad, &ctx).is_err());

        // goal echo mutation
        let mut bad = cert.clone();
        bad.goal.interval.hi_open = true;
        assert!(verify_certificate(&bad, &ctx).is_err());

        // kernel mutation
        let mut bad = cert;
        if let StepRecord::SturmDecide { kernel, .. } = &mut bad.root.step {
            kernel.root_count = 1;
        } else {
            panic!("expected a sturm leaf, found {}", bad.root.step.name());
        }
        assert!(verify_certificate(&bad, &ctx).is_err());
    }

    #[test]
    fn empty_certificate_on_nontrivial_goal_rejects() {
        let ctx = SignCtx::default();
        // Hand-build a bogus leaf claiming the first goal with an unrelated
        // kernel certificate.
        let inner = crate::poly::prove_positive(
            &crate::poly::Poly::from_coeffs(vec![PiPoly::from_int(1)]),
            &IntervalQPi {
                lo: PiPoly::zero(),
                hi: PiPoly::one(),
                lo_open: true,
                hi_open: true,
            },
            &ctx,
        )
        .unwrap();
        let goal = Goal::new(fixtures::g1_expr(), IntervalQPi::zero_to_half_pi());
        let bogus = Certificate::assemble(
            goal.clone(),
            Vec::new(),
            ProofNode {
                goal,
                step: StepRecord::SturmDecide {
                    input: crate::poly::Poly::from_coeffs(vec![PiPoly::from_int(1)]),
                    monomial_power: 0,
                    kernel: inner,
                },
                children: Vec::new(),
            },
        );
        assert!(verify_certificate(&bogus, &ctx).is_err());
    }
}
