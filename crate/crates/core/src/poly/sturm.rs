//! Sturm sequences over Q[pi][t] with signed pseudo-remainders.
//!
//! Working over Q[pi] rules out field division, so the chain is built with
//! pseudo-remainders: each step multiplies by a power of the divisor's
//! leading coefficient. That multiplier's sign is decided exactly (one
//! `pipoly_sign` call on the leading coefficient) and compensated, so every
//! element equals a *positive* Q[pi]-multiple of the negated true remainder —
//! exactly what sign-variation counting requires. Positive rational content
//! is stripped from every remainder to keep coefficient growth polynomial.
//!
//! The source polynomial is made squarefree first via a primitive
//! pseudo-remainder gcd, as Sturm's theorem requires.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::coeff::{pipoly_sign, PiPoly, Rational, Sign, SignCtx};
use crate::poly::{serde_rational, IntervalQPi, Poly, PolyError, Witness};

/// Sturm chain for a (squarefree reduction of a) source polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SturmChain {
    /// The polynomial whose roots are counted.
    pub source: Poly,
    /// Its squarefree part; first element of the chain.
    pub squarefree: Poly,
    /// The chain itself, starting with `squarefree` and its derivative.
    pub seq: Vec<Poly>,
    /// Largest enclosure precision used while fixing remainder signs.
    pub digits: u32,
}

/// `(raw pseudo-remainder, number of leading-coefficient multiplications)`.
fn pseudo_rem(f: &Poly, g: &Poly) -> (Poly, u32) {
    let dg = g.degree().expect("pseudo_rem divisor must be nonzero");
    let lg = g.leading().unwrap().clone();
    let mut r = f.clone();
    let mut mults = 0u32;
    while let Some(dr) = r.degree() {
        if dr < dg {
            break;
        }
        let lr = r.leading().unwrap().clone();
        r = &r.scale_pipoly(&lg) - &g.mul_monomial(&lr, dr - dg);
        mults += 1;
        debug_assert!(r.degree().map_or(true, |d| d < dr));
    }
    (r, mults)
}

/// Gcd up to a unit, via the primitive pseudo-remainder sequence.
fn gcd_prs(a: &Poly, b: &Poly) -> Poly {
    let mut f = a.primitive_full();
    let mut g = b.primitive_full();
    if f.degree() < g.degree() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        let (r, _) = pseudo_rem(&f, &g);
        f = g;
        g = r.primitive_full();
    }
    f
}

/// Squarefree part of `p` (same distinct real roots, no repeated factors).
pub fn squarefree_part(p: &Poly) -> Result<Poly, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(Poly::one());
    }
    let g = gcd_prs(p, &p.derivative());
    if g.degree() == Some(0) {
        return Ok(p.primitive_rational());
    }
    let sf = p
        .primitive_full()
        .div_exact(&g)
        .expect("gcd(p, p') divides the primitive part of p");
    Ok(sf.primitive_rational())
}

impl SturmChain {
    /// Builds the chain for root counting. `p` must be nonzero.
    pub fn build(p: &Poly, ctx: &SignCtx) -> Result<SturmChain, PolyError> {
        let squarefree = squarefree_part(p)?;
        let mut digits = 0u32;
        let mut seq = vec![squarefree.clone()];
        if squarefree.degree().map_or(true, |d| d == 0) {
            return Ok(SturmChain {
                source: p.clone(),
                squarefree,
                seq,
                digits,
            });
        }
        seq.push(squarefree.derivative());
        loop {
            let n = seq.len();
            let (raw, mults) = pseudo_rem(&seq[n - 2], &seq[n - 1]);
            if raw.is_zero() {
                break;
            }
            // raw = lc(g)^mults * rem(f, g); flip so the stored element is a
            // positive multiple of -rem(f, g).
            let lg_sign = {
                let r = pipoly_sign(seq[n - 1].leading().unwrap(), ctx)?;
                digits = digits.max(r.digits);
                r.sign
            };
            let mult_sign = if mults % 2 == 0 { Sign::Pos } else { lg_sign };
            let next = match mult_sign {
                Sign::Pos => -&raw,
                Sign::Neg => raw,
                Sign::Zero => unreachable!("leading coefficient is nonzero"),
            };
            seq.push(next.primitive_rational());
        }
        Ok(SturmChain {
            source: p.clone(),
            squarefree,
            seq,
            digits,
        })
    }
}

/// Where roots are counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootRegion {
    WholeLine,
    Interval(IntervalQPi),
}

#[derive(Clone, Copy)]
enum EvalPoint<'a> {
    NegInf,
    PosInf,
    At(&'a PiPoly),
}

fn sign_at(
    p: &Poly,
    point: EvalPoint<'_>,
    ctx: &SignCtx,
    digits: &mut u32,
) -> Result<Sign, PolyError> {
    let (value_sign, flip) = match point {
        EvalPoint::At(x) => {
            let v = p.eval_pipoly(x);
            (pipoly_sign(&v, ctx)?, false)
        }
        EvalPoint::PosInf => (
            pipoly_sign(p.leading().unwrap_or(&PiPoly::zero()), ctx)?,
            false,
        ),
        EvalPoint::NegInf => (
            pipoly_sign(p.leading().unwrap_or(&PiPoly::zero()), ctx)?,
            p.degree().map_or(false, |d| d % 2 == 1),
        ),
    };
    *digits = (*digits).max(value_sign.digits);
    Ok(if flip {
        value_sign.sign.flip()
    } else {
        value_sign.sign
    })
}

fn variations(
    chain: &SturmChain,
    point: EvalPoint<'_>,
    ctx: &SignCtx,
    digits: &mut u32,
) -> Result<u32, PolyError> {
    let mut count = 0u32;
    let mut last: Option<Sign> = None;
    for p in &chain.seq {
        let s = sign_at(p, point, ctx, digits)?;
        if s == Sign::Zero {
            continue;
        }
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    Ok(count)
}

/// Exact number of distinct real roots of the chain's source in the region.
///
/// For bounded intervals the endpoints must not be roots (explicit error
/// otherwise); openness flags are then immaterial to the count.
pub fn count_roots(
    chain: &SturmChain,
    region: &RootRegion,
    ctx: &SignCtx,
) -> Result<(u32, u32), PolyError> {
    let mut digits = chain.digits;
    let (va, vb) = match region {
        RootRegion::WholeLine => (
            variations(chain, EvalPoint::NegInf, ctx, &mut digits)?,
            variations(chain, EvalPoint::PosInf, ctx, &mut digits)?,
        ),
        RootRegion::Interval(iv) => {
            for (endpoint, label) in [(&iv.lo, "lower"), (&iv.hi, "upper")] {
                let v = chain.squarefree.eval_pipoly(endpoint);
                let s = pipoly_sign(&v, ctx)?;
                digits = digits.max(s.digits);
                if s.sign == Sign::Zero {
                    return Err(PolyError::EndpointIsRoot {
                        endpoint: format!("{label} endpoint {endpoint}"),
                    });
                }
            }
            (
                variations(chain, EvalPoint::At(&iv.lo), ctx, &mut digits)?,
                variations(chain, EvalPoint::At(&iv.hi), ctx, &mut digits)?,
            )
        }
    };
    debug_assert!(va >= vb, "sign variations cannot increase left to right");
    Ok((va - vb, digits))
}

/// Replayable record that a polynomial is strictly positive on an interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityCertificate {
    pub poly: Poly,
    pub interval: IntervalQPi,
    pub squarefree: Poly,
    /// Distinct real roots counted strictly inside; always zero on success.
    pub root_count: u32,
    /// Interior rational sample with a verified positive sign.
    #[serde(with = "serde_rational")]
    pub sample: Rational,
    pub sample_sign: Sign,
    /// Exact signs of `poly` at the interval endpoints (never zero).
    pub lo_sign: Sign,
    pub hi_sign: Sign,
    /// Largest enclosure precision (decimal digits) used by any sign call.
    pub digits: u32,
}

/// Proves `p > 0` on the interval: zero roots inside, a positive interior
/// sample, and positive values at any closed endpoint.
pub fn prove_positive(
    p: &Poly,
    interval: &IntervalQPi,
    ctx: &SignCtx,
) -> Result<PositivityCertificate, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let chain = SturmChain::build(p, ctx)?;
    let mut digits = chain.digits;

    let mut endpoint_sign = |at: &PiPoly, label: &str| -> Result<Sign, PolyError> {
        let s = pipoly_sign(&p.eval_pipoly(at), ctx)?;
        digits = digits.max(s.digits);
        if s.sign == Sign::Zero {
            return Err(PolyError::EndpointIsRoot {
                endpoint: format!("{label} endpoint {at}"),
            });
        }
        Ok(s.sign)
    };
    let lo_sign = endpoint_sign(&interval.lo, "lower")?;
    let hi_sign = endpoint_sign(&interval.hi, "upper")?;

    let (count, count_digits) = count_roots(&chain, &RootRegion::Interval(interval.clone()), ctx)?;
    digits = digits.max(count_digits);
    if count > 0 {
        // Look for an explicit non-positive sample as the witness.
        if let Some(w) = scan_for_nonpositive(p, interval, ctx)? {
            return Err(PolyError::NotPositive {
                interval: interval.to_string(),
                witness: w,
            });
        }
        return Err(PolyError::NotPositive {
            interval: interval.to_string(),
            witness: Witness::RootsInside { count },
        });
    }

    let sample = interval.interior_rational(ctx)?;
    let s = pipoly_sign(&p.eval_rational(&sample), ctx)?;
    digits = digits.max(s.digits);
    if s.sign != Sign::Pos {
        return Err(PolyError::NotPositive {
            interval: interval.to_string(),
            witness: Witness::Sample {
                at: sample,
                sign: s.sign,
            },
        });
    }
    // No roots inside plus a positive interior sample forces positivity up to
    // the (non-root) endpoints by continuity; check anyway.
    if lo_sign != Sign::Pos || hi_sign != Sign::Pos {
        return Err(PolyError::Internal {
            detail: format!(
                "endpoint sign contradicts zero interior roots on {interval}"
            ),
        });
    }

    Ok(PositivityCertificate {
        poly: p.clone(),
        interval: interval.clone(),
        squarefree: chain.squarefree,
        root_count: count,
        sample,
        sample_sign: Sign::Pos,
        lo_sign,
        hi_sign,
        digits,
    })
}

/// Equispaced scan for an explicit witness point with value `<= 0`.
fn scan_for_nonpositive(
    p: &Poly,
    interval: &IntervalQPi,
    ctx: &SignCtx,
) -> Result<Option<Witness>, PolyError> {
    let lo_iv = crate::numeric::pipoly_iv(&interval.lo, 12);
    let hi_iv = crate::numeric::pipoly_iv(&interval.hi, 12);
    let width = &hi_iv.lo - &lo_iv.hi;
    if !width.is_positive() {
        return Ok(None);
    }
    let steps: i64 = 24;
    for k in 1..steps {
        let cand = &lo_iv.hi + &width * Rational::new(BigInt::from(k), BigInt::from(steps));
        let above = &PiPoly::from_rational(cand.clone()) - &interval.lo;
        let below = &interval.hi - &PiPoly::from_rational(cand.clone());
        if pipoly_sign(&above, ctx)?.sign != Sign::Pos
            || pipoly_sign(&below, ctx)?.sign != Sign::Pos
        {
            continue;
        }
        let s = pipoly_sign(&p.eval_rational(&cand), ctx)?;
        if s.sign != Sign::Pos {
            return Ok(Some(Witness::Sample {
                at: cand,
                sign: s.sign,
            }));
        }
    }
    Ok(None)
}

/// Independent replay of a positivity certificate: rebuilds the chain,
/// re-runs every sign evaluation and the variation count. No search.
pub fn verify_positivity(cert: &PositivityCertificate, ctx: &SignCtx) -> Result<(), String> {
    if cert.poly.is_zero() {
        return Err("certificate polynomial is zero".into());
    }
    if cert.root_count != 0 || cert.sample_sign != Sign::Pos {
        return Err("certificate does not assert strict positivity".into());
    }
    cert.interval
        .validate(ctx)
        .map_err(|e| format!("invalid interval: {e}"))?;
    let chain =
        SturmChain::build(&cert.poly, ctx).map_err(|e| format!("chain rebuild failed: {e}"))?;
    if chain.squarefree != cert.squarefree {
        return Err("squarefree part mismatch".into());
    }
    let (count, _) = count_roots(&chain, &RootRegion::Interval(cert.interval.clone()), ctx)
        .map_err(|e| format!("root count replay failed: {e}"))?;
    if count != cert.root_count {
        return Err(format!(
            "root count mismatch: recomputed {count}, recorded {}",
            cert.root_count
        ));
    }
    let inside_lo = &PiPoly::from_rational(cert.sample.clone()) - &cert.interval.lo;
    let inside_hi = &cert.interval.hi - &PiPoly::from_rational(cert.sample.clone());
    let pos = |p: &PiPoly| -> Result<bool, String> {
        Ok(pipoly_sign(p, ctx).map_err(|e| e.to_string())?.sign == Sign::Pos)
    };
    if !pos(&inside_lo)? || !pos(&inside_hi)? {
        return Err("sample point is not strictly inside the interval".into());
    }
    let sample_sign = pipoly_sign(&cert.poly.eval_rational(&cert.sample), ctx)
        .map_err(|e| e.to_string())?
        .sign;
    if sample_sign != Sign::Pos {
        return Err("sample sign replay is not positive".into());
    }
    for (at, recorded, label) in [
        (&cert.interval.lo, cert.lo_sign, "lower"),
        (&cert.interval.hi, cert.hi_sign, "upper"),
    ] {
        let s = pipoly_sign(&cert.poly.eval_pipoly(at), ctx)
            .map_err(|e| e.to_string())?
            .sign;
        if s == Sign::Zero {
            return Err(format!("{label} endpoint is a root"));
        }
        if s != recorded {
            return Err(format!("{label} endpoint sign mismatch"));
        }
        if s != Sign::Pos {
            return Err(format!("{label} endpoint sign is not positive"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn c(n: i64) -> PiPoly {
        PiPoly::from_int(n)
    }

    fn poly(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&n| c(n)).collect())
    }

    fn interval(lo: Rational, hi: Rational, lo_open: bool, hi_open: bool) -> IntervalQPi {
        IntervalQPi {
            lo: PiPoly::from_rational(lo),
            hi: PiPoly::from_rational(hi),
            lo_open,
            hi_open,
        }
    }

    #[test]
    fn chain_for_t_squared_minus_one() {
        let ctx = SignCtx::default();
        let chain = SturmChain::build(&poly(&[-1, 0, 1]), &ctx).unwrap();
        assert_eq!(chain.seq, vec![poly(&[-1, 0, 1]), poly(&[0, 2]), poly(&[1])]);
        let (count, _) = count_roots(
            &chain,
            &RootRegion::Interval(interval(rat(-2, 1), rat(2, 1), true, true)),
            &ctx,
        )
        .unwrap();
        assert_eq!(count, 2);
    }

    #[test]
    fn no_real_roots_for_t_squared_plus_one() {
        let ctx = SignCtx::default();
        let chain = SturmChain::build(&poly(&[1, 0, 1]), &ctx).unwrap();
        let (count, _) = count_roots(&chain, &RootRegion::WholeLine, &ctx).unwrap();
        assert_eq!(count, 0);
    }

    #[test]
    fn squarefree_strips_repeated_factors() {
        // (t-1)^2 (t+2)
        let p = &(&poly(&[-1, 1]) * &poly(&[-1, 1])) * &poly(&[2, 1]);
        let sf = squarefree_part(&p).unwrap();
        // same roots {1, -2}, each simple
        assert_eq!(sf.degree(), Some(2));
        assert!(sf.eval_rational(&rat(1, 1)).is_zero());
        assert!(sf.eval_rational(&rat(-2, 1)).is_zero());
        let ctx = SignCtx::default();
        let chain = SturmChain::build(&p, &ctx).unwrap();
        let (count, _) = count_roots(&chain, &RootRegion::WholeLine, &ctx).unwrap();
        assert_eq!(count, 2);
    }

    #[test]
    fn squarefree_with_pi_coefficients() {
        // (t - pi)^2 (t + 1)
        let lin = Poly::from_coeffs(vec![-&PiPoly::pi(), c(1)]);
        let p = &(&lin * &lin) * &poly(&[1, 1]);
        let sf = squarefree_part(&p).unwrap();
        assert_eq!(sf.degree(), Some(2));
        assert!(sf.eval_pipoly(&PiPoly::pi()).is_zero());
    }

    #[test]
    fn endpoint_root_is_an_error() {
        let ctx = SignCtx::default();
        let chain = SturmChain::build(&poly(&[-1, 0, 1]), &ctx).unwrap();
        let err = count_roots(
            &chain,
            &RootRegion::Interval(interval(rat(1, 1), rat(2, 1), true, true)),
            &ctx,
        )
        .unwrap_err();
        assert!(matches!(err, PolyError::EndpointIsRoot { .. }));
    }

    #[test]
    fn prove_positive_accepts_and_replays() {
        let ctx = SignCtx::default();
        // t^2 + 1 on (0, 2]
        let cert = prove_positive(
            &poly(&[1, 0, 1]),
            &interval(rat(0, 1), rat(2, 1), true, false),
            &ctx,
        )
        .unwrap();
        assert_eq!(cert.root_count, 0);
        verify_positivity(&cert, &ctx).unwrap();
    }

    #[test]
    fn prove_positive_rejects_with_sample_witness() {
        let ctx = SignCtx::default();
        // t - 2 on (0, 1]
        let err = prove_positive(
            &poly(&[-2, 1]),
            &interval(rat(0, 1), rat(1, 1), true, false),
            &ctx,
        )
        .unwrap_err();
        match err {
            PolyError::NotPositive {
                witness: Witness::Sample { sign, .. },
                ..
            } => assert_eq!(sign, Sign::Neg),
            other => panic!("expected sample witness, got {other}"),
        }
    }

    #[test]
    fn prove_positive_rejects_interior_root() {
        let ctx = SignCtx::default();
        // (t - 1)^2 >= 0 but not strictly positive on (0, 2)
        let p = &poly(&[-1, 1]) * &poly(&[-1, 1]);
        let err = prove_positive(&p, &interval(rat(0, 1), rat(2, 1), true, true), &ctx)
            .unwrap_err();
        assert!(matches!(err, PolyError::NotPositive { .. }));
    }

    #[test]
    fn mutated_certificate_is_rejected() {
        let ctx = SignCtx::default();
        let cert = prove_positive(
            &poly(&[1, 0, 1]),
            &interval(rat(0, 1), rat(2, 1), true, false),
            &ctx,
        )
        .unwrap();
        let mut bad = cert.clone();
        bad.sample = rat(5, 1); // outside the interval
        assert!(verify_positivity(&bad, &ctx).is_err());
        let mut bad = cert.clone();
        bad.squarefree = poly(&[1, 1]);
        assert!(verify_positivity(&bad, &ctx).is_err());
        let mut bad = cert;
        bad.poly = poly(&[-1, 0, 1]);
        assert!(verify_positivity(&bad, &ctx).is_err());
    }

    #[test]
    fn count_matches_known_roots_and_bisection_oracle() {
        let ctx = SignCtx::default();
        let mut state: u64 = 0xDEADBEEFCAFE1234;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..200u32 {
            // Distinct half-integer roots spaced >= 1/2 apart, degree <= 8.
            let mut roots: Vec<Rational> = Vec::new();
            let n_roots = 1 + (next() % 5) as usize;
            while roots.len() < n_roots {
                let r = rat((next() % 17) as i64 - 8, 2);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            let mut p = poly(&[1]);
            for r in &roots {
                p = &p * &Poly::from_coeffs(vec![PiPoly::from_rational(-r), c(1)]);
            }
            if next() % 2 == 0 {
                p = &p * &poly(&[1, 0, 1]); // irreducible quadratic factor
            }
            // Odd-numerator quarter-integer endpoints never hit half-integer
            // roots; spacing by whole halves keeps b's numerator odd too.
            let a = rat((next() % 25) as i64 * 2 - 25, 4);
            let b = &a + rat((next() % 20) as i64 + 1, 2);
            let expected = roots.iter().filter(|r| *r > &a && *r < &b).count() as u32;

            let chain = SturmChain::build(&p, &ctx).unwrap();
            let (got, _) = count_roots(
                &chain,
                &RootRegion::Interval(interval(a.clone(), b.clone(), true, true)),
                &ctx,
            )
            .unwrap();
            assert_eq!(got, expected, "trial {trial}: roots {roots:?} in ({a}, {b})");

            let (whole, _) = count_roots(&chain, &RootRegion::WholeLine, &ctx).unwrap();
            assert_eq!(whole, roots.len() as u32);

            // Independent oracle: bisection to width < 1/4 (roots are >= 1/2
            // apart, so each bracket holds at most one simple root).
            let eval = |x: &Rational| p.eval_rational(x).as_rational().unwrap();
            let mut stack = vec![(a.clone(), b.clone())];
            let mut isolated = 0u32;
            while let Some((x, y)) = stack.pop() {
                let fx = eval(&x);
                let fy = eval(&y);
                if &y - &x < rat(1, 4) {
                    if fx.is_positive() != fy.is_positive() {
                        isolated += 1;
                    }
                    continue;
                }
                let mid = (&x + &y) / rat(2, 1);
                stack.push((x, mid.clone()));
                stack.push((mid, y));
            }
            assert_eq!(isolated, expected, "bisection oracle disagrees");
        }
    }
}
