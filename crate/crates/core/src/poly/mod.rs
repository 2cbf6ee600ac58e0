//! Univariate polynomial algebra over Q[pi] and rigorous positivity
//! decisions on intervals whose endpoints may themselves live in Q[pi].

mod sturm;

pub use sturm::{
    count_roots, prove_positive, verify_positivity, PositivityCertificate, RootRegion,
    SturmChain,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::coeff::{
    pipoly_sign, rational_to_str, CoeffError, PiPoly, Rational, Sign, SignCtx,
};
use crate::numeric;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("the zero polynomial has no meaningful result here")]
    ZeroPolynomial,
    #[error("interval endpoint {endpoint} is a root of the polynomial")]
    EndpointIsRoot { endpoint: String },
    #[error("odd power t^{power} present; substitution z = t^2 needs even powers only")]
    OddPowerPresent { power: usize },
    #[error("interval is empty or reversed: {interval}")]
    EmptyInterval { interval: String },
    #[error("interval must lie in the nonnegative reals for this operation: {interval}")]
    NegativeInterval { interval: String },
    #[error("polynomial is not strictly positive on {interval}: {witness}")]
    NotPositive {
        interval: String,
        witness: Witness,
    },
    #[error("could not locate a rational sample point inside {interval}")]
    NoSamplePoint { interval: String },
    #[error("internal invariant violated: {detail}")]
    Internal { detail: String },
}

/// Evidence that a claimed positivity fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// A rational point where the value is `<= 0`.
    Sample {
        #[serde(with = "serde_rational")]
        at: Rational,
        sign: Sign,
    },
    /// Sturm counting found roots strictly inside the interval.
    RootsInside { count: u32 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Sample { at, sign } => {
                write!(f, "value at t = {} has sign {}", rational_to_str(at), sign)
            }
            Witness::RootsInside { count } => {
                write!(f, "{count} distinct real root(s) inside the interval")
            }
        }
    }
}

pub(crate) mod serde_rational {
    use super::*;
    use crate::coeff::rational_from_str;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        rational_to_str(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        rational_from_str(&text).map_err(D::Error::custom)
    }
}

/// Dense univariate polynomial over Q[pi]; `coeffs[i]` multiplies `t^i`.
/// The leading stored coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<PiPoly>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(PiPoly::one())
    }

    pub fn constant(c: PiPoly) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: PiPoly, k: usize) -> Poly {
        let mut coeffs = vec![PiPoly::zero(); k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<PiPoly>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[PiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PiPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(PiPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&PiPoly> {
        self.coeffs.last()
    }

    pub fn scale_pipoly(&self, c: &PiPoly) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_rational(&self, c: &Rational) -> Poly {
        self.scale_pipoly(&PiPoly::from_rational(c.clone()))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.scale(&Rational::from_integer(BigInt::from(i))));
        }
        Poly::from_coeffs(out)
    }

    /// Evaluation at a point of Q[pi]; the result stays in Q[pi].
    pub fn eval_pipoly(&self, at: &PiPoly) -> PiPoly {
        let mut acc = PiPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn eval_rational(&self, at: &Rational) -> PiPoly {
        self.eval_pipoly(&PiPoly::from_rational(at.clone()))
    }

    /// Splits off the highest power of `t` dividing the polynomial:
    /// `p = t^m * q` with `q(0) != 0`.
    pub fn factor_monomial(&self) -> Result<(usize, Poly), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let m = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero polynomial has a nonzero coefficient");
        Ok((m, Poly::from_coeffs(self.coeffs[m..].to_vec())))
    }

    /// Positive rational `scale` with `self = scale * q`, where every rational
    /// coefficient of `q` (over all powers of pi and t) is an integer and the
    /// overall integer content is 1.
    pub fn normalize_integer(&self) -> Result<(Rational, Poly), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let scale = self.rational_content();
        let inv = Rational::one() / &scale;
        Ok((scale, self.scale_rational(&inv)))
    }

    /// Positive gcd of all rational coefficients across powers of pi and t.
    pub fn rational_content(&self) -> Rational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            for r in c.coeffs() {
                if r.is_zero() {
                    continue;
                }
                num_gcd = num_gcd.gcd(r.numer());
                den_lcm = den_lcm.lcm(r.denom());
            }
        }
        debug_assert!(!num_gcd.is_zero());
        Rational::new(num_gcd, den_lcm)
    }

    /// `q` with `q(z) = p(sqrt z)`; requires even powers only.
    pub fn substitute_square(&self) -> Result<Poly, PolyError> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 1 && !c.is_zero() {
                return Err(PolyError::OddPowerPresent { power: i });
            }
        }
        let out = self
            .coeffs
            .iter()
            .step_by(2)
            .cloned()
            .collect::<Vec<_>>();
        Ok(Poly::from_coeffs(out))
    }

    /// `self * c * t^k`.
    pub fn mul_monomial(&self, c: &PiPoly, k: usize) -> Poly {
        if self.is_zero() || c.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![PiPoly::zero(); self.coeffs.len() + k];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i + k] = a * c;
        }
        Poly::from_coeffs(out)
    }

    /// Exact polynomial division; `None` if not divisible in Q[pi][t].
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let dd = d.degree().unwrap();
        if self.degree().unwrap() < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![PiPoly::zero(); rem.len() - dd];
        let lead = d.leading().unwrap();
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].div_exact(lead)?;
            for j in 0..=dd {
                let v = &d.coeffs[j] * &q;
                rem[i - dd + j] = &rem[i - dd + j] - &v;
            }
            quot[i - dd] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Poly::from_coeffs(quot))
        } else {
            None
        }
    }

    /// Strips the positive rational content (sign-preserving).
    pub(crate) fn primitive_rational(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.rational_content();
        self.scale_rational(&(Rational::one() / c))
    }

    /// Strips the full content over Q[pi]: the monic pi-part gcd of all
    /// coefficients and the remaining positive rational content.
    pub(crate) fn primitive_full(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut g = PiPoly::zero();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            g = PiPoly::gcd_monic(&g, c);
            if g.degree() == Some(0) {
                break;
            }
        }
        let divided = if g.degree().map_or(false, |d| d > 0) {
            Poly::from_coeffs(
                self.coeffs
                    .iter()
                    .map(|c| {
                        c.div_exact(&g)
                            .expect("gcd of coefficients divides each coefficient")
                    })
                    .collect(),
            )
        } else {
            self.clone()
        };
        divided.primitive_rational()
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) - &rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![PiPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    /// Descending powers with parenthesised compound coefficients, e.g.
    /// `(-8 + pi + pi^2)*t^5 + 2*t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            // Only sums need parentheses; single monomials like `3/4*pi^2`
            // re-parse unambiguously as products.
            let compound = c.coeffs().iter().filter(|r| !r.is_zero()).count() > 1;
            let body = c.to_string();
            let (sign_str, mag) = if !compound && body.starts_with('-') {
                ("-", body[1..].to_string())
            } else {
                ("+", if compound { format!("({body})") } else { body })
            };
            if first {
                if sign_str == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if sign_str == "-" { "-" } else { "+" })?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "t")?,
                1 => write!(f, "{mag}*t")?,
                _ if mag == "1" => write!(f, "t^{i}")?,
                _ => write!(f, "{mag}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let coeffs: Vec<PiPoly> = Vec::deserialize(d)?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

/// Interval with endpoints in Q[pi] and individually open/closed ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalQPi {
    pub lo: PiPoly,
    pub hi: PiPoly,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl IntervalQPi {
    /// Validated constructor: checks `lo < hi` as real numbers.
    pub fn new(
        lo: PiPoly,
        hi: PiPoly,
        lo_open: bool,
        hi_open: bool,
        ctx: &SignCtx,
    ) -> Result<IntervalQPi, PolyError> {
        let iv = IntervalQPi {
            lo,
            hi,
            lo_open,
            hi_open,
        };
        iv.validate(ctx)?;
        Ok(iv)
    }

    pub fn validate(&self, ctx: &SignCtx) -> Result<(), PolyError> {
        let diff = &self.hi - &self.lo;
        if pipoly_sign(&diff, ctx)?.sign != Sign::Pos {
            return Err(PolyError::EmptyInterval {
                interval: self.to_string(),
            });
        }
        Ok(())
    }

    /// `(0, pi/2)` — the ambient domain of every trigonometric goal.
    pub fn zero_to_half_pi() -> IntervalQPi {
        IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::monomial(Rational::new(BigInt::one(), BigInt::from(2)), 1),
            lo_open: true,
            hi_open: true,
        }
    }

    /// `(0, 1)`.
    pub fn unit_open() -> IntervalQPi {
        IntervalQPi {
            lo: PiPoly::zero(),
            hi: PiPoly::one(),
            lo_open: true,
            hi_open: true,
        }
    }

    /// Is the lower endpoint `>= 0`?
    pub fn is_nonnegative(&self, ctx: &SignCtx) -> Result<bool, CoeffError> {
        Ok(pipoly_sign(&self.lo, ctx)?.sign != Sign::Neg)
    }

    /// Image under `z = t^2`; requires `lo >= 0`.
    pub fn squared(&self, ctx: &SignCtx) -> Result<IntervalQPi, PolyError> {
        if !self.is_nonnegative(ctx)? {
            return Err(PolyError::NegativeInterval {
                interval: self.to_string(),
            });
        }
        Ok(IntervalQPi {
            lo: &self.lo * &self.lo,
            hi: &self.hi * &self.hi,
            lo_open: self.lo_open,
            hi_open: self.hi_open,
        })
    }

    /// Image under `t -> pi/2 - t` (endpoint roles swap).
    pub fn reflected(&self) -> IntervalQPi {
        let half_pi = PiPoly::monomial(Rational::new(BigInt::one(), BigInt::from(2)), 1);
        IntervalQPi {
            lo: &half_pi - &self.hi,
            hi: &half_pi - &self.lo,
            lo_open: self.hi_open,
            hi_open: self.lo_open,
        }
    }

    /// Splits at an interior point: `(lo, p]` and `(p, hi)` keeping the outer
    /// strictness flags.
    pub fn split_at(
        &self,
        point: &PiPoly,
        ctx: &SignCtx,
    ) -> Result<(IntervalQPi, IntervalQPi), PolyError> {
        let above_lo = point - &self.lo;
        let below_hi = &self.hi - point;
        if pipoly_sign(&above_lo, ctx)?.sign != Sign::Pos
            || pipoly_sign(&below_hi, ctx)?.sign != Sign::Pos
        {
            return Err(PolyError::EmptyInterval {
                interval: format!("split point {point} outside {self}"),
            });
        }
        let left = IntervalQPi {
            lo: self.lo.clone(),
            hi: point.clone(),
            lo_open: self.lo_open,
            hi_open: false,
        };
        let right = IntervalQPi {
            lo: point.clone(),
            hi: self.hi.clone(),
            lo_open: true,
            hi_open: self.hi_open,
        };
        Ok((left, right))
    }

    /// A rational point strictly inside the interval.
    pub fn interior_rational(&self, ctx: &SignCtx) -> Result<Rational, PolyError> {
        for digits in [8u32, 16, 32, 64] {
            let lo_iv = numeric::pipoly_iv(&self.lo, digits);
            let hi_iv = numeric::pipoly_iv(&self.hi, digits);
            let mid = (&lo_iv.hi + &hi_iv.lo) / Rational::from_integer(BigInt::from(2));
            // Snap to a short decimal so downstream arithmetic stays small.
            for snap in [2u32, 4, 8, digits] {
                let grid = BigInt::from(10u32).pow(snap);
                let cand = Rational::new(
                    (&mid * Rational::from_integer(grid.clone())).round().to_integer(),
                    grid,
                );
                let above = &PiPoly::from_rational(cand.clone()) - &self.lo;
                let below = &self.hi - &PiPoly::from_rational(cand.clone());
                if pipoly_sign(&above, ctx)?.sign == Sign::Pos
                    && pipoly_sign(&below, ctx)?.sign == Sign::Pos
                {
                    return Ok(cand);
                }
            }
        }
        Err(PolyError::NoSamplePoint {
            interval: self.to_string(),
        })
    }
}

impl fmt::Display for IntervalQPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { "(" } else { "[" },
            self.lo,
            self.hi,
            if self.hi_open { ")" } else { "]" },
        )
    }
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

    #[test]
    fn derivative_examples() {
        assert_eq!(poly(&[0, 0, 0, 1]).derivative(), poly(&[0, 0, 3]));
        assert_eq!(
            Poly::constant(PiPoly::pi_pow(2)).derivative(),
            Poly::zero()
        );
    }

    #[test]
    fn derivative_product_rule() {
        let f = Poly::from_coeffs(vec![c(1), PiPoly::pi(), c(-3)]);
        let g = Poly::from_coeffs(vec![PiPoly::pi_pow(2), c(2)]);
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn factor_monomial_examples() {
        let (m, q) = poly(&[0, 0, 1]).factor_monomial().unwrap();
        assert_eq!((m, q), (2, Poly::one()));
        let (m, q) = poly(&[0, 0, 0, 5, 0, 5]).factor_monomial().unwrap();
        assert_eq!(m, 3);
        assert_eq!(q, poly(&[5, 0, 5]));
        // reassembly
        let p = poly(&[0, 0, 0, 5, 0, 5]);
        assert_eq!(q.mul_monomial(&PiPoly::one(), m), p);
    }

    #[test]
    fn normalize_integer_example() {
        let p = Poly::from_coeffs(vec![PiPoly::from_rational(rat(1, 2)), PiPoly::from_rational(rat(1, 2))]);
        let (scale, q) = p.normalize_integer().unwrap();
        assert_eq!(scale, rat(1, 2));
        assert_eq!(q, poly(&[1, 1]));
        assert_eq!(q.scale_rational(&scale), p);
    }

    #[test]
    fn substitute_square_examples() {
        let p = poly(&[0, 0, 1, 0, 1]); // t^4 + t^2
        assert_eq!(p.substitute_square().unwrap(), poly(&[0, 1, 1]));
        let odd = poly(&[0, 1]);
        assert!(matches!(
            odd.substitute_square(),
            Err(PolyError::OddPowerPresent { power: 1 })
        ));
        // round trip: substitute t^2 back in
        let q = p.substitute_square().unwrap();
        let mut back = Poly::zero();
        for (i, coeff) in q.coeffs().iter().enumerate() {
            back = &back + &Poly::monomial(coeff.clone(), 2 * i);
        }
        assert_eq!(back, p);
    }

    #[test]
    fn exact_poly_division() {
        let f = poly(&[-1, 0, 1]); // t^2 - 1
        let g = poly(&[1, 1]); // t + 1
        assert_eq!(f.div_exact(&g), Some(poly(&[-1, 1])));
        assert_eq!(f.div_exact(&poly(&[2, 1])), None);
    }

    #[test]
    fn interval_validation_and_maps() {
        let ctx = SignCtx::default();
        let iv = IntervalQPi::new(c(0), PiPoly::from_rational(rat(11, 10)), true, false, &ctx)
            .unwrap();
        let squared = iv.squared(&ctx).unwrap();
        assert_eq!(squared.hi, PiPoly::from_rational(rat(121, 100)));
        assert!(squared.lo_open && !squared.hi_open);

        let dom = IntervalQPi::zero_to_half_pi();
        let r = dom.split_at(&PiPoly::from_rational(rat(11, 10)), &ctx).unwrap();
        assert_eq!(r.0.to_string(), "(0, 11/10]");
        let reflected = r.1.reflected();
        assert_eq!(reflected.lo, PiPoly::zero());
        assert_eq!(reflected.hi, &PiPoly::monomial(rat(1, 2), 1) - &PiPoly::from_rational(rat(11, 10)));

        assert!(dom.split_at(&PiPoly::monomial(rat(1, 2), 1), &ctx).is_err());
    }

    #[test]
    fn interior_rational_found() {
        let ctx = SignCtx::default();
        let dom = IntervalQPi::zero_to_half_pi();
        let s = dom.interior_rational(&ctx).unwrap();
        assert!(s > rat(0, 1) && s < rat(158, 100));
    }

    #[test]
    fn display_reads_naturally() {
        let p = Poly::from_coeffs(vec![c(4), PiPoly::zero(), PiPoly::pi()]);
        assert_eq!(p.to_string(), "pi*t^2 + 4");
    }
}
