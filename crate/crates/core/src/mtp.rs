//! Mixed trigonometric polynomial expressions and their canonical rewrites.
//!
//! An expression is a sum of terms `c * v^p * sin^q(t) * cos^r(t) * A` where
//! `c` is in Q[pi], `v` is the goal variable (`x` on `(0,1)` goals, `t`
//! after the `x = sin t` substitution), and `A` is an optional product of
//! multiple-angle atoms `sin(kt)` / `cos(kt)` and at most one inverse atom
//! `atan(..)` / `asin(x)`. Powers may be negative transiently (between the
//! sine substitution and the clearing multiplication); every rewrite that
//! needs a genuine polynomial form rejects negative powers explicitly.
//!
//! The central rewrite is [`to_fourier_form`], the exact expansion of power
//! products into multiple-angle form via product-to-sum recurrences carried
//! out in rational arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{PiPoly, Rational};
use crate::numeric::{self, RatInterval};
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MtpError {
    #[error("operation `{op}` requires a {expected}-domain expression")]
    WrongDomain {
        op: &'static str,
        expected: &'static str,
    },
    #[error("atan atom still present; apply bounds before the multiple-angle rewrite")]
    AtanPresent,
    #[error("expression is not polynomial: negative power of {what}")]
    NegativePower { what: String },
    #[error("multiple-angle atom {fn_name}({k}t) present; reflection applies before the multiple-angle rewrite")]
    MultipleAnglePresent { fn_name: &'static str, k: u32 },
    #[error("trigonometric atoms remain; the expression is not a plain polynomial")]
    TrigAtomsRemain,
}

/// Goal variable: `x` ranging over (0, 1), or `t` over a subinterval of (0, pi/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    X,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::T => "t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrigFn {
    Sin,
    Cos,
}

impl TrigFn {
    pub fn name(self) -> &'static str {
        match self {
            TrigFn::Sin => "sin",
            TrigFn::Cos => "cos",
        }
    }
}

/// Argument of an `atan` atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcInner {
    /// `atan(x)` — the goal variable itself (x-domain goals).
    Var,
    /// `atan(sin t)`.
    Sin,
    /// `atan(cos t)`.
    Cos,
}

/// Everything of a term except its coefficient; the canonical sort key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TermShape {
    pub var_pow: i64,
    pub sin_pow: i64,
    pub cos_pow: i64,
    /// Multiple-angle atoms `(fn, k, exponent)` with `k >= 2`, sorted.
    pub multi: Vec<(TrigFn, u32, u32)>,
    /// At most one `atan` atom `(inner, exponent)`.
    pub atan: Option<(ArcInner, u32)>,
    /// Power of `asin(x)`; x-domain only.
    pub asin_pow: u32,
}

impl TermShape {
    pub fn constant() -> TermShape {
        TermShape {
            var_pow: 0,
            sin_pow: 0,
            cos_pow: 0,
            multi: Vec::new(),
            atan: None,
            asin_pow: 0,
        }
    }

    pub fn is_constant(&self) -> bool {
        *self == TermShape::constant()
    }

    fn has_trig(&self) -> bool {
        self.sin_pow != 0 || self.cos_pow != 0 || !self.multi.is_empty() || self.atan.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub shape: TermShape,
    pub coeff: PiPoly,
}

/// Normalized sum of terms: like shapes collected, zero coefficients dropped,
/// terms sorted by shape. Two equal expressions compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expr {
    pub var: Var,
    pub terms: Vec<Term>,
}

impl Expr {
    pub fn new(var: Var, terms: Vec<Term>) -> Expr {
        let mut map: BTreeMap<TermShape, PiPoly> = BTreeMap::new();
        for t in terms {
            let entry = map.entry(t.shape).or_insert_with(PiPoly::zero);
            *entry = &*entry + &t.coeff;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(shape, coeff)| Term { shape, coeff })
            .collect();
        Expr { var, terms }
    }

    pub fn zero(var: Var) -> Expr {
        Expr {
            var,
            terms: Vec::new(),
        }
    }

    pub fn constant(var: Var, c: PiPoly) -> Expr {
        Expr::new(
            var,
            vec![Term {
                shape: TermShape::constant(),
                coeff: c,
            }],
        )
    }

    /// Lifts a polynomial in the goal variable.
    pub fn from_poly(var: Var, p: &Poly) -> Expr {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| Term {
                shape: TermShape {
                    var_pow: i as i64,
                    ..TermShape::constant()
                },
                coeff: c.clone(),
            })
            .collect();
        Expr::new(var, terms)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &Expr) -> Expr {
        debug_assert_eq!(self.var, rhs.var);
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Expr::new(self.var, terms)
    }

    pub fn sub(&self, rhs: &Expr) -> Expr {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr {
            var: self.var,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    shape: t.shape.clone(),
                    coeff: -&t.coeff,
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &PiPoly) -> Expr {
        Expr::new(
            self.var,
            self.terms
                .iter()
                .map(|t| Term {
                    shape: t.shape.clone(),
                    coeff: &t.coeff * c,
                })
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Expr) -> Expr {
        debug_assert_eq!(self.var, rhs.var);
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &rhs.terms {
                let mut multi: BTreeMap<(TrigFn, u32), u32> = BTreeMap::new();
                for &(f, k, e) in a.shape.multi.iter().chain(b.shape.multi.iter()) {
                    *multi.entry((f, k)).or_insert(0) += e;
                }
                let atan = match (&a.shape.atan, &b.shape.atan) {
                    (None, None) => None,
                    (Some(x), None) | (None, Some(x)) => Some(*x),
                    (Some((ia, ea)), Some((ib, eb))) => {
                        assert_eq!(ia, ib, "cannot multiply distinct atan atoms");
                        Some((*ia, ea + eb))
                    }
                };
                terms.push(Term {
                    shape: TermShape {
                        var_pow: a.shape.var_pow + b.shape.var_pow,
                        sin_pow: a.shape.sin_pow + b.shape.sin_pow,
                        cos_pow: a.shape.cos_pow + b.shape.cos_pow,
                        multi: multi.into_iter().map(|((f, k), e)| (f, k, e)).collect(),
                        atan,
                        asin_pow: a.shape.asin_pow + b.shape.asin_pow,
                    },
                    coeff: &a.coeff * &b.coeff,
                });
            }
        }
        Expr::new(self.var, terms)
    }

    pub fn has_atan(&self) -> bool {
        self.terms.iter().any(|t| t.shape.atan.is_some())
    }

    pub fn has_asin(&self) -> bool {
        self.terms.iter().any(|t| t.shape.asin_pow > 0)
    }

    /// Most negative powers over all terms (nonpositive values; 0 when clean).
    pub fn laurent_depth(&self) -> (i64, i64, i64) {
        let mut v = 0i64;
        let mut s = 0i64;
        let mut c = 0i64;
        for t in &self.terms {
            v = v.min(t.shape.var_pow);
            s = s.min(t.shape.sin_pow);
            c = c.min(t.shape.cos_pow);
        }
        (v, s, c)
    }

    /// Reads the expression back as a plain polynomial in the goal variable.
    pub fn to_poly(&self) -> Result<Poly, MtpError> {
        let mut p = Poly::zero();
        for t in &self.terms {
            if t.shape.has_trig() || t.shape.asin_pow > 0 {
                return Err(MtpError::TrigAtomsRemain);
            }
            if t.shape.var_pow < 0 {
                return Err(MtpError::NegativePower {
                    what: self.var.name().to_string(),
                });
            }
            p = &p + &Poly::monomial(t.coeff.clone(), t.shape.var_pow as usize);
        }
        Ok(p)
    }

    /// The single term of a monomial expression, if it is one.
    pub fn as_single_term(&self) -> Option<&Term> {
        match self.terms.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }
}

/// Canonical multiple-angle form: `r(t) + sum p_k(t) cos(kt) + sum q_k(t) sin(kt)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierForm {
    pub r: Poly,
    pub cos: BTreeMap<u32, Poly>,
    pub sin: BTreeMap<u32, Poly>,
}

impl FourierForm {
    /// Back to an expression: `k = 1` atoms as `sin/cos` powers, `k >= 2` as
    /// multiple-angle atoms.
    pub fn to_expr(&self) -> Expr {
        let mut terms = Vec::new();
        for (i, c) in self.r.coeffs().iter().enumerate() {
            terms.push(Term {
                shape: TermShape {
                    var_pow: i as i64,
                    ..TermShape::constant()
                },
                coeff: c.clone(),
            });
        }
        for (fn_, map) in [(TrigFn::Cos, &self.cos), (TrigFn::Sin, &self.sin)] {
            for (&k, poly) in map {
                for (i, c) in poly.coeffs().iter().enumerate() {
                    let mut shape = TermShape {
                        var_pow: i as i64,
                        ..TermShape::constant()
                    };
                    if k == 1 {
                        match fn_ {
                            TrigFn::Sin => shape.sin_pow = 1,
                            TrigFn::Cos => shape.cos_pow = 1,
                        }
                    } else {
                        shape.multi = vec![(fn_, k, 1)];
                    }
                    terms.push(Term {
                        shape,
                        coeff: c.clone(),
                    });
                }
            }
        }
        Expr::new(Var::T, terms)
    }
}

/// Fourier combo over the rationals: `cos[0]` holds the constant part.
#[derive(Clone)]
struct Combo {
    cos: BTreeMap<u32, Rational>,
    sin: BTreeMap<u32, Rational>,
}

impl Combo {
    fn one() -> Combo {
        let mut cos = BTreeMap::new();
        cos.insert(0, Rational::one());
        Combo {
            cos,
            sin: BTreeMap::new(),
        }
    }

    fn push(map: &mut BTreeMap<u32, Rational>, k: u32, q: Rational) {
        if q.is_zero() {
            return;
        }
        let entry = map.entry(k).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            map.remove(&k);
        }
    }

    /// Multiplies by `fn2(m t)` using the exact product-to-sum identities.
    fn mul_atom(&self, fn2: TrigFn, m: u32) -> Combo {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut out = Combo {
            cos: BTreeMap::new(),
            sin: BTreeMap::new(),
        };
        for (&k, q) in &self.cos {
            let q2 = q * &half;
            match fn2 {
                TrigFn::Cos => {
                    // cos(kt) cos(mt) = [cos((k+m)t) + cos(|k-m|t)] / 2
                    Combo::push(&mut out.cos, k + m, q2.clone());
                    Combo::push(&mut out.cos, k.abs_diff(m), q2);
                }
                TrigFn::Sin => {
                    // cos(kt) sin(mt) = [sin((m+k)t) + sin((m-k)t)] / 2
                    Combo::push(&mut out.sin, k + m, q2.clone());
                    if m > k {
                        Combo::push(&mut out.sin, m - k, q2);
                    } else if k > m {
                        Combo::push(&mut out.sin, k - m, -q2);
                    }
                }
            }
        }
        for (&k, q) in &self.sin {
            let q2 = q * &half;
            match fn2 {
                TrigFn::Cos => {
                    // sin(kt) cos(mt) = [sin((k+m)t) + sin((k-m)t)] / 2
                    Combo::push(&mut out.sin, k + m, q2.clone());
                    if k > m {
                        Combo::push(&mut out.sin, k - m, q2);
                    } else if m > k {
                        Combo::push(&mut out.sin, m - k, -q2);
                    }
                }
                TrigFn::Sin => {
                    // sin(kt) sin(mt) = [cos(|k-m|t) - cos((k+m)t)] / 2
                    Combo::push(&mut out.cos, k.abs_diff(m), q2.clone());
                    Combo::push(&mut out.cos, k + m, -q2);
                }
            }
        }
        out
    }
}

/// Exact identity-preserving rewrite of every power product into
/// multiple-angle form with like terms collected.
pub fn to_fourier_form(e: &Expr) -> Result<FourierForm, MtpError> {
    if e.var != Var::T {
        return Err(MtpError::WrongDomain {
            op: "to-fourier",
            expected: "t",
        });
    }
    if e.has_atan() {
        return Err(MtpError::AtanPresent);
    }
    let mut form = FourierForm {
        r: Poly::zero(),
        cos: BTreeMap::new(),
        sin: BTreeMap::new(),
    };
    for term in &e.terms {
        let sh = &term.shape;
        if sh.var_pow < 0 {
            return Err(MtpError::NegativePower { what: "t".into() });
        }
        if sh.sin_pow < 0 || sh.cos_pow < 0 {
            return Err(MtpError::NegativePower {
                what: "sin/cos".into(),
            });
        }
        debug_assert_eq!(sh.asin_pow, 0, "asin never appears in the t domain");
        let mut combo = Combo::one();
        for _ in 0..sh.sin_pow {
            combo = combo.mul_atom(TrigFn::Sin, 1);
        }
        for _ in 0..sh.cos_pow {
            combo = combo.mul_atom(TrigFn::Cos, 1);
        }
        for &(f, k, exp) in &sh.multi {
            for _ in 0..exp {
                combo = combo.mul_atom(f, k);
            }
        }
        let tp = sh.var_pow as usize;
        for (&k, q) in &combo.cos {
            let mono = Poly::monomial(term.coeff.scale(q), tp);
            if k == 0 {
                form.r = &form.r + &mono;
            } else {
                let entry = form.cos.entry(k).or_insert_with(Poly::zero);
                *entry = &*entry + &mono;
            }
        }
        for (&k, q) in &combo.sin {
            let mono = Poly::monomial(term.coeff.scale(q), tp);
            let entry = form.sin.entry(k).or_insert_with(Poly::zero);
            *entry = &*entry + &mono;
        }
    }
    form.cos.retain(|_, p| !p.is_zero());
    form.sin.retain(|_, p| !p.is_zero());
    Ok(form)
}

/// Substitutes `t -> pi/2 - t`: swaps `sin` and `cos` powers, swaps the atan
/// inner function, and expands `(pi/2 - t)^p` into Q[pi]-coefficient
/// polynomials. Multiple-angle atoms must be reduced away first.
pub fn reflect(e: &Expr) -> Result<Expr, MtpError> {
    if e.var != Var::T {
        return Err(MtpError::WrongDomain {
            op: "reflect",
            expected: "t",
        });
    }
    let half_pi = PiPoly::monomial(Rational::new(BigInt::one(), BigInt::from(2)), 1);
    let linear = Poly::from_coeffs(vec![half_pi, PiPoly::from_int(-1)]);
    let mut terms = Vec::new();
    for term in &e.terms {
        let sh = &term.shape;
        if let Some(&(f, k, _)) = sh.multi.first() {
            return Err(MtpError::MultipleAnglePresent {
                fn_name: f.name(),
                k,
            });
        }
        if sh.var_pow < 0 {
            return Err(MtpError::NegativePower { what: "t".into() });
        }
        let atan = match sh.atan {
            None => None,
            Some((ArcInner::Sin, e)) => Some((ArcInner::Cos, e)),
            Some((ArcInner::Cos, e)) => Some((ArcInner::Sin, e)),
            Some((ArcInner::Var, _)) => {
                return Err(MtpError::WrongDomain {
                    op: "reflect",
                    expected: "t",
                })
            }
        };
        let mut expanded = Poly::constant(PiPoly::one());
        for _ in 0..sh.var_pow {
            expanded = &expanded * &linear;
        }
        for (j, c) in expanded.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(Term {
                shape: TermShape {
                    var_pow: j as i64,
                    sin_pow: sh.cos_pow,
                    cos_pow: sh.sin_pow,
                    multi: Vec::new(),
                    atan,
                    asin_pow: sh.asin_pow,
                },
                coeff: &term.coeff * c,
            });
        }
    }
    Ok(Expr::new(Var::T, terms))
}

/// Substitutes `x = sin t`: `x^p -> sin^p t`, `asin(x)^b -> t^b`,
/// `atan(x) -> atan(sin t)`. The domain `(0,1)` maps to `(0, pi/2)`.
pub fn substitute_sin(e: &Expr) -> Result<Expr, MtpError> {
    if e.var != Var::X {
        return Err(MtpError::WrongDomain {
            op: "substitute-sin",
            expected: "x",
        });
    }
    let mut terms = Vec::new();
    for term in &e.terms {
        let sh = &term.shape;
        debug_assert!(sh.sin_pow == 0 && sh.cos_pow == 0 && sh.multi.is_empty());
        let atan = match sh.atan {
            None => None,
            Some((ArcInner::Var, e)) => Some((ArcInner::Sin, e)),
            Some((other, _)) => {
                unreachable!("x-domain atan inner is always the variable, found {other:?}")
            }
        };
        terms.push(Term {
            shape: TermShape {
                var_pow: sh.asin_pow as i64,
                sin_pow: sh.var_pow,
                cos_pow: 0,
                multi: Vec::new(),
                atan,
                asin_pow: 0,
            },
            coeff: term.coeff.clone(),
        });
    }
    Ok(Expr::new(Var::T, terms))
}

/// Rigorous enclosure of the expression's value at an exact rational point.
/// `None` when a negative power divides by an interval straddling zero.
pub fn eval_iv(e: &Expr, at: &Rational, digits: u32) -> Option<RatInterval> {
    let mut total = RatInterval::zero();
    for term in &e.terms {
        let sh = &term.shape;
        let mut acc = numeric::pipoly_iv(&term.coeff, digits);
        acc = acc.mul(&ipow(&RatInterval::point(at.clone()), sh.var_pow)?);
        if sh.sin_pow != 0 {
            acc = acc.mul(&ipow(&numeric::sin_iv(at, digits), sh.sin_pow)?);
        }
        if sh.cos_pow != 0 {
            acc = acc.mul(&ipow(&numeric::cos_iv(at, digits), sh.cos_pow)?);
        }
        for &(f, k, exp) in &sh.multi {
            let arg = at * Rational::from_integer(BigInt::from(k));
            let base = match f {
                TrigFn::Sin => numeric::sin_iv(&arg, digits),
                TrigFn::Cos => numeric::cos_iv(&arg, digits),
            };
            acc = acc.mul(&ipow(&base, exp as i64)?);
        }
        if let Some((inner, exp)) = sh.atan {
            let arg = match inner {
                ArcInner::Var => RatInterval::point(at.clone()),
                ArcInner::Sin => numeric::sin_iv(at, digits),
                ArcInner::Cos => numeric::cos_iv(at, digits),
            };
            let v = numeric::atan_iv_of(&arg, digits);
            acc = acc.mul(&ipow(&v, exp as i64)?);
        }
        if sh.asin_pow > 0 {
            let v = numeric::asin_iv(at, digits);
            acc = acc.mul(&ipow(&v, sh.asin_pow as i64)?);
        }
        total = total.add(&acc);
    }
    Some(total)
}

fn ipow(base: &RatInterval, exp: i64) -> Option<RatInterval> {
    if exp >= 0 {
        Some(base.pow(exp as u32))
    } else {
        RatInterval::point(Rational::one()).div(&base.pow((-exp) as u32))
    }
}

impl fmt::Display for Expr {
    /// Canonical text that re-parses to the same expression.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let v = self.var.name();
        for (idx, term) in self.terms.iter().enumerate() {
            let sh = &term.shape;
            let nonzero: usize = term.coeff.coeffs().iter().filter(|r| !r.is_zero()).count();
            let compound = nonzero > 1;
            let body = term.coeff.to_string();
            let (neg, mag) = if compound {
                (false, format!("({body})"))
            } else if let Some(rest) = body.strip_prefix('-') {
                (true, rest.to_string())
            } else {
                (false, body)
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let has_atoms = !sh.is_constant();
            let drop_unit = mag == "1" && has_atoms;
            if !drop_unit {
                write!(f, "{mag}")?;
            }
            let mut lead_done = !drop_unit;
            let mut atom = |f: &mut fmt::Formatter<'_>, base: &str, pow: i64| -> fmt::Result {
                if pow == 0 {
                    return Ok(());
                }
                let prefix = if lead_done { "*" } else { "" };
                lead_done = true;
                if pow == 1 {
                    write!(f, "{prefix}{base}")
                } else {
                    write!(f, "{prefix}{base}^{pow}")
                }
            };
            atom(f, v, sh.var_pow)?;
            atom(f, &format!("sin({v})"), sh.sin_pow)?;
            atom(f, &format!("cos({v})"), sh.cos_pow)?;
            for &(fn_, k, exp) in &sh.multi {
                atom(f, &format!("{}({}*{})", fn_.name(), k, v), exp as i64)?;
            }
            if let Some((inner, exp)) = sh.atan {
                let arg = match inner {
                    ArcInner::Var => v.to_string(),
                    ArcInner::Sin => format!("sin({v})"),
                    ArcInner::Cos => format!("cos({v})"),
                };
                atom(f, &format!("atan({arg})"), exp as i64)?;
            }
            if sh.asin_pow > 0 {
                atom(f, &format!("asin({v})"), sh.asin_pow as i64)?;
            }
        }
        Ok(())
    }
}
