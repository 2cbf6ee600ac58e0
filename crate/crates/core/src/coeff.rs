//! Exact arithmetic in Q and Q[pi], and rigorous sign determination at pi.
//!
//! Every coefficient in the prover lives in Q[pi]: polynomials in the symbol
//! pi with arbitrary-precision rational coefficients. Since pi is
//! transcendental, a nonzero element of Q[pi] evaluates to a nonzero real at
//! pi, so its sign can always be decided by evaluating over a sufficiently
//! tight rational enclosure of pi. Enclosures come from Machin's formula
//! `pi/4 = 4*atan(1/5) - atan(1/239)` computed in integer fixed point with an
//! explicit alternating-series truncation bound, then snapped outward to the
//! decimal grid so that enclosures at increasing precision are nested.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational, always stored reduced with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    /// The sign refinement loop hit the precision cap without separating the
    /// value from zero. Never silently reports a wrong sign.
    #[error("sign undecided at precision cap of {cap} digits")]
    PrecisionExceeded { cap: u32 },
    #[error("invalid rational literal `{text}`")]
    BadRational { text: String },
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-3"`, `"3/4"` or an exact decimal such as `"1.1"` (= 11/10).
pub fn rational_from_str(text: &str) -> Result<Rational, CoeffError> {
    let bad = || CoeffError::BadRational {
        text: text.to_string(),
    };
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let (sign, digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !digits.bytes().all(|b| b.is_ascii_digit()) || digits.is_empty() {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let num: BigInt =
            format!("{digits}{frac_part}").parse().map_err(|_| bad())?;
        return Ok(Rational::new(BigInt::from(sign) * num, scale));
    }
    let num: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(num))
}

/// Canonical text form: `"3"`, `"-3"`, `"3/4"`.
pub fn rational_to_str(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign of an exact real quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_rational(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Pos
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Neg => write!(f, "-1"),
            Sign::Zero => write!(f, "0"),
            Sign::Pos => write!(f, "+1"),
        }
    }
}

/// Element of Q[pi]: `coeffs[i]` is the rational coefficient of `pi^i`.
/// Trailing zero coefficients are stripped; zero has an empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiPoly {
    coeffs: Vec<Rational>,
}

impl PiPoly {
    pub fn zero() -> PiPoly {
        PiPoly { coeffs: Vec::new() }
    }

    pub fn one() -> PiPoly {
        PiPoly::from_rational(Rational::one())
    }

    pub fn pi() -> PiPoly {
        PiPoly::pi_pow(1)
    }

    /// `pi^k` as an element of Q[pi].
    pub fn pi_pow(k: usize) -> PiPoly {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        PiPoly { coeffs }
    }

    pub fn from_rational(r: Rational) -> PiPoly {
        PiPoly::from_coeffs(vec![r])
    }

    pub fn from_int(n: i64) -> PiPoly {
        PiPoly::from_rational(rat_int(n))
    }

    /// `c * pi^k`.
    pub fn monomial(c: Rational, k: usize) -> PiPoly {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        PiPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> PiPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        PiPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `pi^i` (zero beyond the stored degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Some(&r) when the element is a plain rational (degree <= 0).
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> PiPoly {
        if c.is_zero() {
            return PiPoly::zero();
        }
        PiPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, n: u32) -> PiPoly {
        let mut acc = PiPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division in Q[pi]; `None` when the remainder is nonzero.
    pub fn div_exact(&self, d: &PiPoly) -> Option<PiPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(PiPoly::zero());
        }
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return None;
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        let lead = &d.coeffs[dd];
        for i in (dd..rem.len()).rev() {
            let q = &rem[i] / lead;
            if !q.is_zero() {
                for j in 0..=dd {
                    let v = &d.coeffs[j] * &q;
                    rem[i - dd + j] -= v;
                }
            }
            quot[i - dd] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(PiPoly::from_coeffs(quot))
        } else {
            None
        }
    }

    /// Monic gcd in Q[pi] (zero when both inputs are zero).
    pub fn gcd_monic(a: &PiPoly, b: &PiPoly) -> PiPoly {
        let mut f = a.clone();
        let mut g = b.clone();
        while !g.is_zero() {
            let r = f.rem_by(&g);
            f = g;
            g = r;
        }
        if f.is_zero() {
            return f;
        }
        let lead = f.coeffs.last().unwrap().clone();
        f.scale(&(Rational::one() / lead))
    }

    fn rem_by(&self, d: &PiPoly) -> PiPoly {
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let lead = &d.coeffs[dd];
        for i in (dd..rem.len()).rev() {
            let q = &rem[i] / lead;
            if !q.is_zero() {
                for j in 0..=dd {
                    let v = &d.coeffs[j] * &q;
                    rem[i - dd + j] -= v;
                }
            }
        }
        while rem.len() > dd {
            rem.pop();
        }
        PiPoly::from_coeffs(rem)
    }
}

impl std::ops::Add for &PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: &PiPoly) -> PiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        PiPoly::from_coeffs(out)
    }
}

impl std::ops::Sub for &PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: &PiPoly) -> PiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        PiPoly::from_coeffs(out)
    }
}

impl std::ops::Mul for &PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: &PiPoly) -> PiPoly {
        if self.is_zero() || rhs.is_zero() {
            return PiPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PiPoly::from_coeffs(out)
    }
}

impl std::ops::Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        PiPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for PiPoly {
    /// Canonical text, ascending powers of pi: `-8 + pi + pi^2`, `3/4*pi^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match (i, unit) {
                (0, _) => write!(f, "{}", rational_to_str(&mag))?,
                (1, true) => write!(f, "pi")?,
                (1, false) => write!(f, "{}*pi", rational_to_str(&mag))?,
                (_, true) => write!(f, "pi^{i}")?,
                (_, false) => write!(f, "{}*pi^{i}", rational_to_str(&mag))?,
            }
        }
        Ok(())
    }
}

mod serde_pipoly {
    use super::*;
    use serde::de::Error as DeError;
    use serde::{Deserializer, Serializer};

    impl Serialize for PiPoly {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let strings: Vec<String> = self.coeffs.iter().map(rational_to_str).collect();
            strings.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for PiPoly {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let strings: Vec<String> = Vec::deserialize(d)?;
            let mut coeffs = Vec::with_capacity(strings.len());
            for s in &strings {
                coeffs.push(rational_from_str(s).map_err(D::Error::custom)?);
            }
            Ok(PiPoly::from_coeffs(coeffs))
        }
    }
}

/// Rational interval guaranteed to contain pi, `hi - lo <= 10^-digits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiEnclosure {
    pub lo: Rational,
    pub hi: Rational,
    pub digits: u32,
}

/// Integer fixed-point `atan(1/q) * scale` with floor rounding.
/// Returns the alternating partial sum and the number of terms; the absolute
/// error is at most `terms + 1` units (one per floor division plus the tail).
fn atan_inv_scaled(q: u64, scale: &BigInt) -> (BigInt, u64) {
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut qpow = q.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = scale / (&qpow * BigInt::from(2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        qpow *= &q2;
        k += 1;
    }
    (sum, k)
}

/// `(approximation of pi * 10^scale_digits, error bound in units)`.
fn machin_pi_scaled(scale_digits: u32) -> (BigInt, BigInt) {
    let scale = BigInt::from(10u32).pow(scale_digits);
    let (a5, n5) = atan_inv_scaled(5, &scale);
    let (a239, n239) = atan_inv_scaled(239, &scale);
    let value = BigInt::from(16) * a5 - BigInt::from(4) * a239;
    let err = BigInt::from(16 * (n5 + 1) + 4 * (n239 + 1));
    (value, err)
}

fn pi_enclosure_uncached(digits: u32) -> PiEnclosure {
    let digits = digits.max(1);
    // Guard digits absorb the fixed-point error; widen if the approximation
    // lands too close to a decimal grid line to determine the floor.
    let mut guard: u32 = 12;
    loop {
        let (value, err) = machin_pi_scaled(digits + guard);
        let guard_scale = BigInt::from(10u32).pow(guard);
        let rem = &value % &guard_scale;
        if rem > err && rem < &guard_scale - &err {
            let grid = BigInt::from(10u32).pow(digits);
            let floor = value / guard_scale;
            let lo = Rational::new(floor.clone(), grid.clone());
            let hi = Rational::new(floor + 1, grid);
            return PiEnclosure { lo, hi, digits };
        }
        guard *= 2;
    }
}

/// Rational interval of width exactly `10^-digits` containing pi, aligned to
/// the decimal grid so enclosures at higher precision nest inside coarser ones.
pub fn pi_enclosure(digits: u32) -> PiEnclosure {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, PiEnclosure>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(found) = cache.lock().unwrap().get(&digits) {
        return found.clone();
    }
    let computed = pi_enclosure_uncached(digits);
    cache
        .lock()
        .unwrap()
        .insert(digits, computed.clone());
    computed
}

/// Precision policy for sign refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCtx {
    /// Starting enclosure precision in decimal digits.
    pub start_digits: u32,
    /// Refinement cap; exceeding it is an explicit error, never a wrong sign.
    pub cap_digits: u32,
}

impl Default for SignCtx {
    fn default() -> Self {
        SignCtx {
            start_digits: 20,
            cap_digits: 10_000,
        }
    }
}

/// A decided sign together with the precision that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignResult {
    pub sign: Sign,
    pub digits: u32,
}

fn iv_mul(a: (&Rational, &Rational), b: (&Rational, &Rational)) -> (Rational, Rational) {
    let products = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
    let mut lo = products[0].clone();
    let mut hi = products[0].clone();
    for p in &products[1..] {
        if p < &lo {
            lo = p.clone();
        }
        if p > &hi {
            hi = p.clone();
        }
    }
    (lo, hi)
}

/// Evaluates `p` over a rational interval containing pi (Horner).
fn eval_over_enclosure(p: &PiPoly, enc: &PiEnclosure) -> (Rational, Rational) {
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for c in p.coeffs().iter().rev() {
        let (mlo, mhi) = iv_mul((&lo, &hi), (&enc.lo, &enc.hi));
        lo = mlo + c;
        hi = mhi + c;
    }
    (lo, hi)
}

/// Exact sign of `p` evaluated at the real number pi.
///
/// Refines the pi enclosure, doubling the digit count from
/// `ctx.start_digits`, until the evaluated interval excludes zero.
/// Terminates for every nonzero `p` because pi is transcendental.
pub fn pipoly_sign(p: &PiPoly, ctx: &SignCtx) -> Result<SignResult, CoeffError> {
    if p.is_zero() {
        return Ok(SignResult {
            sign: Sign::Zero,
            digits: 0,
        });
    }
    if let Some(r) = p.as_rational() {
        return Ok(SignResult {
            sign: Sign::of_rational(&r),
            digits: 0,
        });
    }
    let mut digits = ctx.start_digits.max(1);
    loop {
        let enc = pi_enclosure(digits);
        let (lo, hi) = eval_over_enclosure(p, &enc);
        if lo.is_positive() {
            return Ok(SignResult {
                sign: Sign::Pos,
                digits,
            });
        }
        if hi.is_negative() {
            return Ok(SignResult {
                sign: Sign::Neg,
                digits,
            });
        }
        if digits >= ctx.cap_digits {
            return Err(CoeffError::PrecisionExceeded {
                cap: ctx.cap_digits,
            });
        }
        digits = (digits * 2).min(ctx.cap_digits);
    }
}

/// Convenience wrapper with the default precision policy.
pub fn pipoly_sign_default(p: &PiPoly) -> Result<SignResult, CoeffError> {
    pipoly_sign(p, &SignCtx::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(coeffs: &[(i64, i64)]) -> PiPoly {
        PiPoly::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    // pi to 50 decimal places, an independently known constant.
    const PI_50: &str =
        "3.14159265358979323846264338327950288419716939937510";

    #[test]
    fn enclosure_two_digits_is_314_315() {
        let e = pi_enclosure(2);
        assert_eq!(e.lo, rat(314, 100));
        assert_eq!(e.hi, rat(315, 100));
    }

    #[test]
    fn enclosure_fifteen_digits_straddles_reference_value() {
        let reference = rational_from_str(PI_50).unwrap();
        let e = pi_enclosure(15);
        assert!(e.lo < reference && reference < e.hi);
        assert!(&e.hi - &e.lo <= rat(1, 10i64.pow(15)));
    }

    #[test]
    fn enclosures_nest_under_refinement() {
        let coarse = pi_enclosure(1);
        let fine = pi_enclosure(50);
        assert!(coarse.lo <= fine.lo && fine.hi <= coarse.hi);
        for (a, b) in [(2u32, 3u32), (10, 11), (20, 40), (7, 50)] {
            let ea = pi_enclosure(a);
            let eb = pi_enclosure(b);
            assert!(ea.lo <= eb.lo && eb.hi <= ea.hi, "nesting failed: {a} vs {b}");
        }
    }

    #[test]
    fn sign_of_pi_squared_plus_pi_minus_eight_is_positive() {
        let p = pp(&[(-8, 1), (1, 1), (1, 1)]);
        let r = pipoly_sign_default(&p).unwrap();
        assert_eq!(r.sign, Sign::Pos);
    }

    #[test]
    fn sign_of_zero_is_zero() {
        assert_eq!(
            pipoly_sign_default(&PiPoly::zero()).unwrap().sign,
            Sign::Zero
        );
    }

    #[test]
    fn sign_of_355_113_minus_pi_is_positive() {
        // 355/113 = 3.14159292... exceeds pi.
        let p = pp(&[(355, 113), (-1, 1)]);
        assert_eq!(pipoly_sign_default(&p).unwrap().sign, Sign::Pos);
        let q = pp(&[(-355, 113), (1, 1)]);
        assert_eq!(pipoly_sign_default(&q).unwrap().sign, Sign::Neg);
    }

    #[test]
    fn ring_op_examples() {
        let half_pi = PiPoly::monomial(rat(1, 2), 1);
        assert_eq!(&half_pi + &half_pi, PiPoly::pi());

        let a = pp(&[(-3, 1), (1, 1)]);
        let b = pp(&[(3, 1), (1, 1)]);
        assert_eq!(&a * &b, pp(&[(-9, 1), (0, 1), (1, 1)]));

        let c = pp(&[(-8, 1), (1, 1), (1, 1)]);
        assert_eq!(c.scale(&rat(1, 3)), pp(&[(-8, 3), (1, 3), (1, 3)]));
    }

    #[test]
    fn exact_division() {
        let a = pp(&[(-9, 1), (0, 1), (1, 1)]); // pi^2 - 9
        let b = pp(&[(3, 1), (1, 1)]); // pi + 3
        assert_eq!(a.div_exact(&b), Some(pp(&[(-3, 1), (1, 1)])));
        let c = pp(&[(1, 1), (1, 1)]);
        assert_eq!(a.div_exact(&c), None);
    }

    #[test]
    fn sign_matches_high_precision_numeric_evaluation() {
        // Cross-check pipoly_sign against direct evaluation at a 50-digit
        // rational approximation of pi on pseudo-random inputs.
        let pi_ref = rational_from_str(PI_50).unwrap();
        let mut state: u64 = 0x9E3779B97F4A7C15;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..200 {
            let mut coeffs = Vec::new();
            for _ in 0..=(next() % 5) {
                let num = (next() % (1 << 30)) as i64 - (1 << 29);
                let den = (next() % 1000 + 1) as i64;
                coeffs.push(rat(num, den));
            }
            let p = PiPoly::from_coeffs(coeffs);
            let direct: Rational = p
                .coeffs()
                .iter()
                .rev()
                .fold(Rational::zero(), |acc, c| acc * &pi_ref + c);
            // Values this close to zero would need more reference digits than
            // we carry; random 30-bit coefficients never get near that.
            if direct.abs() < rat(1, 10i64.pow(18)) && !p.is_zero() {
                continue;
            }
            let got = pipoly_sign_default(&p).unwrap().sign;
            let expected = if p.is_zero() {
                Sign::Zero
            } else {
                Sign::of_rational(&direct)
            };
            assert_eq!(got, expected, "sign mismatch for {p}");
        }
    }

    #[test]
    fn display_roundtrips_through_parser_helpers() {
        let p = pp(&[(-8, 1), (1, 1), (1, 1)]);
        assert_eq!(p.to_string(), "-8 + pi + pi^2");
        let q = pp(&[(1, 48), (-1, 384), (-1, 384)]);
        assert_eq!(q.to_string(), "1/48 - 1/384*pi - 1/384*pi^2");
        assert_eq!(PiPoly::zero().to_string(), "0");
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(rational_from_str("1.1").unwrap(), rat(11, 10));
        assert_eq!(rational_from_str("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(rational_from_str("13/10").unwrap(), rat(13, 10));
        assert!(rational_from_str("1.").is_err());
    }
}
