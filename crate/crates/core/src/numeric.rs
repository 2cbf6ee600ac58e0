//! Rigorous numeric evaluation over rational intervals.
//!
//! Proofs never depend on this module; it backs the numeric *pre-flight*
//! checks (counterexample search, limit trends, plot samples) and the test
//! oracles. Every function returns an interval that is guaranteed to contain
//! the true real value: series are truncated with an explicit alternating
//! tail bound and all grid rounding is outward.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coeff::{pi_enclosure, PiPoly, Rational, Sign};

/// Closed rational interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> RatInterval {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(v: Rational) -> RatInterval {
        RatInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero() -> RatInterval {
        RatInterval::point(Rational::zero())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    /// The sign when the interval excludes zero, `Sign::Zero` for the exact
    /// point zero, `None` when undetermined.
    pub fn sign(&self) -> Option<Sign> {
        if self.lo.is_positive() {
            Some(Sign::Pos)
        } else if self.hi.is_negative() {
            Some(Sign::Neg)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Sign::Zero)
        } else {
            None
        }
    }

    /// True when every point of the interval is `<= 0`.
    pub fn is_nonpositive(&self) -> bool {
        !self.hi.is_positive()
    }

    pub fn add(&self, rhs: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }

    pub fn sub(&self, rhs: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, rhs: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
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
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> RatInterval {
        if c.is_negative() {
            RatInterval::new(&self.hi * c, &self.lo * c)
        } else {
            RatInterval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// `None` when the divisor straddles zero.
    pub fn div(&self, rhs: &RatInterval) -> Option<RatInterval> {
        if !rhs.lo.is_positive() && !rhs.hi.is_negative() {
            return None;
        }
        let inv = RatInterval::new(
            Rational::one() / &rhs.hi,
            Rational::one() / &rhs.lo,
        );
        Some(self.mul(&inv))
    }

    pub fn pow(&self, n: u32) -> RatInterval {
        let mut acc = RatInterval::point(Rational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Outward rounding onto the `10^-digits` grid; keeps rationals small.
    pub fn round_out(&self, digits: u32) -> RatInterval {
        let grid = BigInt::from(10u32).pow(digits);
        let lo = (&self.lo * &grid).floor();
        let hi = (&self.hi * &grid).ceil();
        RatInterval::new(
            Rational::new(lo.to_integer(), grid.clone()),
            Rational::new(hi.to_integer(), grid),
        )
    }
}

/// Enclosure of pi as an interval.
pub fn pi_iv(digits: u32) -> RatInterval {
    let e = pi_enclosure(digits);
    RatInterval::new(e.lo, e.hi)
}

/// Evaluates an element of Q[pi] over the pi enclosure (Horner).
pub fn pipoly_iv(p: &PiPoly, digits: u32) -> RatInterval {
    let pi = pi_iv(digits);
    let mut acc = RatInterval::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&pi).add(&RatInterval::point(c.clone()));
    }
    acc
}

/// Enclosure of `sqrt(x)` for `x >= 0`.
pub fn sqrt_iv(x: &Rational, digits: u32) -> RatInterval {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return RatInterval::zero();
    }
    let grid = BigInt::from(10u32).pow(digits);
    let scaled = (x * Rational::from_integer(&grid * &grid)).floor().to_integer();
    let root = scaled.sqrt();
    RatInterval::new(
        Rational::new(root.clone(), grid.clone()),
        Rational::new(root + 1, grid),
    )
}

fn alternating_series(terms: impl Iterator<Item = Rational>, eps: &Rational) -> RatInterval {
    // Caller guarantees the magnitudes are eventually decreasing; we keep
    // summing until the next magnitude drops below eps *and* has started to
    // decrease, so the remaining tail is bounded by that magnitude.
    let mut sum = Rational::zero();
    let mut prev_mag: Option<Rational> = None;
    let mut sign_pos = true;
    for mag in terms {
        let decreasing = prev_mag.as_ref().map_or(false, |p| &mag < p);
        if decreasing && &mag < eps {
            let tail = mag;
            return RatInterval::new(&sum - &tail, &sum + &tail);
        }
        if sign_pos {
            sum += &mag;
        } else {
            sum -= &mag;
        }
        sign_pos = !sign_pos;
        prev_mag = Some(mag);
    }
    unreachable!("alternating series iterator must be infinite")
}

fn eps_for(digits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits + 3))
}

struct SinCosTerms {
    x2: Rational,
    term: Rational,
    k: u64,
    odd: bool,
}

impl Iterator for SinCosTerms {
    type Item = Rational;
    fn next(&mut self) -> Option<Rational> {
        let current = self.term.clone();
        let base = if self.odd { 2 * self.k + 2 } else { 2 * self.k + 1 };
        let denom = Rational::from_integer(BigInt::from(base) * BigInt::from(base + 1));
        self.term = &self.term * &self.x2 / denom;
        self.k += 1;
        Some(current)
    }
}

/// Enclosure of `sin(x)` at an exact rational argument.
pub fn sin_iv(x: &Rational, digits: u32) -> RatInterval {
    if x.is_zero() {
        return RatInterval::zero();
    }
    if x.is_negative() {
        return sin_iv(&-x, digits).neg();
    }
    let terms = SinCosTerms {
        x2: x * x,
        term: x.clone(),
        k: 0,
        odd: true,
    };
    alternating_series(terms, &eps_for(digits)).round_out(digits + 2)
}

/// Enclosure of `cos(x)` at an exact rational argument.
pub fn cos_iv(x: &Rational, digits: u32) -> RatInterval {
    let x = x.abs();
    let terms = SinCosTerms {
        x2: &x * &x,
        term: Rational::one(),
        k: 0,
        odd: false,
    };
    alternating_series(terms, &eps_for(digits)).round_out(digits + 2)
}

struct AtanTerms {
    x2: Rational,
    power: Rational,
    k: u64,
}

impl Iterator for AtanTerms {
    type Item = Rational;
    fn next(&mut self) -> Option<Rational> {
        let current = &self.power / Rational::from_integer(BigInt::from(2 * self.k + 1));
        self.power = &self.power * &self.x2;
        self.k += 1;
        Some(current)
    }
}

/// Enclosure of `atan(x)` at an exact rational argument (any sign/size).
pub fn atan_iv(x: &Rational, digits: u32) -> RatInterval {
    if x.is_zero() {
        return RatInterval::zero();
    }
    if x.is_negative() {
        return atan_iv(&-x, digits).neg();
    }
    if x > &Rational::one() {
        // atan(x) = pi/2 - atan(1/x)
        let half_pi = pi_iv(digits + 3).scale(&Rational::new(BigInt::one(), BigInt::from(2)));
        return half_pi
            .sub(&atan_iv(&(Rational::one() / x), digits))
            .round_out(digits + 2);
    }
    if x > &Rational::new(BigInt::one(), BigInt::from(2)) {
        // atan(x) = pi/4 + atan((x-1)/(x+1)); the shifted argument lies in
        // (-1/3, 0], so the series converges quickly near x = 1.
        let quarter_pi = pi_iv(digits + 3).scale(&Rational::new(BigInt::one(), BigInt::from(4)));
        let shifted = (x - Rational::one()) / (x + Rational::one());
        return quarter_pi
            .add(&atan_iv(&shifted, digits + 2))
            .round_out(digits + 2);
    }
    let terms = AtanTerms {
        x2: x * x,
        power: x.clone(),
        k: 0,
    };
    alternating_series(terms, &eps_for(digits)).round_out(digits + 2)
}

/// Monotone image of an interval under `atan`.
pub fn atan_iv_of(iv: &RatInterval, digits: u32) -> RatInterval {
    RatInterval::new(
        atan_iv(&iv.lo, digits).lo,
        atan_iv(&iv.hi, digits).hi,
    )
}

/// Enclosure of `asin(x)` for `0 <= x <= 1`.
pub fn asin_iv(x: &Rational, digits: u32) -> RatInterval {
    assert!(!x.is_negative() && x <= &Rational::one(), "asin domain");
    if x.is_zero() {
        return RatInterval::zero();
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if x <= &half {
        // asin(x) = atan(x / sqrt(1 - x^2))
        let s = sqrt_iv(&(Rational::one() - x * x), digits + 4);
        let arg = RatInterval::point(x.clone()).div(&s).expect("sqrt > 0");
        return atan_iv_of(&arg, digits).round_out(digits + 2);
    }
    // Near 1 the direct series is useless; use
    // asin(x) = pi/2 - 2 asin(sqrt((1-x)/2)), whose inner argument is <= 1/2.
    let s = sqrt_iv(&((Rational::one() - x) / Rational::from_integer(BigInt::from(2))), digits + 4);
    let inner = RatInterval::new(
        asin_iv(&s.lo, digits + 2).lo,
        asin_iv(&s.hi, digits + 2).hi,
    );
    let half_pi = pi_iv(digits + 3).scale(&half);
    half_pi
        .sub(&inner.scale(&Rational::from_integer(BigInt::from(2))))
        .round_out(digits + 2)
}

/// Decimal rendering of a rational, truncated toward zero at `digits`
/// fractional digits (used for plot/sample output, not for proofs).
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let grid = BigInt::from(10u32).pow(digits);
    let scaled = (r * Rational::from_integer(grid.clone())).trunc().to_integer();
    let neg = scaled.is_negative();
    let mag = scaled.abs();
    let int_part = &mag / &grid;
    let frac_part = &mag % &grid;
    let mut frac = frac_part.to_string();
    while (frac.len() as u32) < digits {
        frac.insert(0, '0');
    }
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, rational_from_str};

    fn tight(iv: &RatInterval, digits: u32) {
        assert!(iv.width() <= rat(1, 10).pow(digits as i32) * rat(100, 1));
    }

    #[test]
    fn sqrt_squares_back() {
        let iv = sqrt_iv(&rat(2, 1), 40);
        assert!(iv.lo.clone() * iv.lo.clone() <= rat(2, 1));
        assert!(iv.hi.clone() * iv.hi.clone() >= rat(2, 1));
        tight(&iv, 40);
    }

    #[test]
    fn pythagorean_identity_holds_numerically() {
        for t in [rat(1, 3), rat(7, 10), rat(3, 2), rat(11, 10)] {
            let s = sin_iv(&t, 45);
            let c = cos_iv(&t, 45);
            let total = s.mul(&s).add(&c.mul(&c));
            assert!(total.lo <= Rational::one() && Rational::one() <= total.hi);
            tight(&total, 43);
        }
    }

    #[test]
    fn atan_of_one_is_quarter_pi() {
        let got = atan_iv(&rat(1, 1), 45);
        let quarter_pi = pi_iv(50).scale(&rat(1, 4));
        assert!(got.lo <= quarter_pi.hi && quarter_pi.lo <= got.hi);
        tight(&got, 43);
    }

    #[test]
    fn asin_inverts_sin() {
        for t in [rat(1, 4), rat(1, 2), rat(6, 5), rat(3, 2)] {
            let s = sin_iv(&t, 50);
            // asin is monotone; evaluate at both enclosure ends.
            let lo = asin_iv(&s.lo, 45).lo;
            let hi = asin_iv(&s.hi, 45).hi;
            assert!(lo <= t && t <= hi, "asin(sin({t})) enclosure miss");
            assert!(&hi - &lo < rat(1, 10i64.pow(18)));
        }
    }

    #[test]
    fn asin_near_one_converges() {
        // asin(1 - 10^-8) is within 10^-3 of pi/2 but must be computed to
        // 60 digits without the direct series.
        let x = Rational::one() - rat(1, 100_000_000);
        let iv = asin_iv(&x, 60);
        tight(&iv, 58);
        let half_pi = pi_iv(60).scale(&rat(1, 2));
        assert!(iv.hi < half_pi.lo);
        assert!(half_pi.lo - &iv.lo < rat(1, 1000));
    }

    #[test]
    fn sin_at_large_argument_stays_rigorous() {
        // Arguments up to the largest validity radius in the bound table.
        let x = rational_from_str("25.5").unwrap();
        let iv = sin_iv(&x, 45);
        tight(&iv, 43);
        assert!(iv.lo >= rat(-1, 1) && iv.hi <= rat(1, 1));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&rat(11, 10), 3), "1.100");
        assert_eq!(decimal_string(&rat(-1, 3), 4), "-0.3333");
    }
}
