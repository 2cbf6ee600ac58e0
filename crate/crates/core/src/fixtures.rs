//! Benchmark fixtures: the two Chen inequalities for inverse trigonometric
//! functions and the reference polynomials their proofs pass through.
//!
//! Both goals are stored multiplied through by pi so every coefficient stays
//! in Q[pi]; positivity is unchanged. The reference polynomials are frozen
//! here so tests and the acceptance suite can compare prover output against
//! them bit-exactly.

use crate::coeff::{rat, rational_from_str, PiPoly, Rational};
use crate::mtp::{ArcInner, Expr, Term, TermShape, Var};
use crate::poly::Poly;

fn pp(coeffs: &[(i64, i64)]) -> PiPoly {
    PiPoly::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
}

fn pp_str(coeffs: &[&str]) -> PiPoly {
    PiPoly::from_coeffs(
        coeffs
            .iter()
            .map(|s| rational_from_str(s).expect("fixture literal"))
            .collect(),
    )
}

fn term(coeff: PiPoly, var_pow: i64, sin_pow: i64, cos_pow: i64) -> Term {
    Term {
        shape: TermShape {
            var_pow,
            sin_pow,
            cos_pow,
            multi: Vec::new(),
            atan: None,
            asin_pow: 0,
        },
        coeff,
    }
}

fn atan_term(coeff: PiPoly, var_pow: i64, sin_pow: i64, cos_pow: i64, inner: ArcInner) -> Term {
    Term {
        shape: TermShape {
            var_pow,
            sin_pow,
            cos_pow,
            multi: Vec::new(),
            atan: Some((inner, 1)),
            asin_pow: 0,
        },
        coeff,
    }
}

/// `pi^2 + pi - 8`, the leading constant of the first inequality.
pub fn pi2_pi_m8() -> PiPoly {
    pp(&[(-8, 1), (1, 1), (1, 1)])
}

/// `5 pi - 12`, the leading constant of the second inequality.
pub fn five_pi_m12() -> PiPoly {
    pp(&[(-12, 1), (5, 1)])
}

/// First inequality, x-domain, scaled by pi:
/// `2 pi + (pi^2+pi-8) x^3 atan x - pi atan(x)/x - pi (asin(x)/x)^2 > 0` on (0,1).
pub fn conjecture1_goal_expr() -> Expr {
    let two_pi = PiPoly::monomial(rat(2, 1), 1);
    let neg_pi = PiPoly::monomial(rat(-1, 1), 1);
    Expr::new(
        Var::X,
        vec![
            term(two_pi, 0, 0, 0),
            atan_term(pi2_pi_m8(), 3, 0, 0, ArcInner::Var),
            atan_term(neg_pi.clone(), -1, 0, 0, ArcInner::Var),
            Term {
                shape: TermShape {
                    var_pow: -2,
                    sin_pow: 0,
                    cos_pow: 0,
                    multi: Vec::new(),
                    atan: None,
                    asin_pow: 2,
                },
                coeff: neg_pi,
            },
        ],
    )
}

/// Second inequality, x-domain, scaled by pi:
/// `3 pi + (5 pi - 12) x^3 atan x - pi atan(x)/x - 2 pi asin(x)/x > 0` on (0,1).
pub fn conjecture2_goal_expr() -> Expr {
    let three_pi = PiPoly::monomial(rat(3, 1), 1);
    let neg_pi = PiPoly::monomial(rat(-1, 1), 1);
    let neg_two_pi = PiPoly::monomial(rat(-2, 1), 1);
    Expr::new(
        Var::X,
        vec![
            term(three_pi, 0, 0, 0),
            atan_term(five_pi_m12(), 3, 0, 0, ArcInner::Var),
            atan_term(neg_pi, -1, 0, 0, ArcInner::Var),
            Term {
                shape: TermShape {
                    var_pow: -1,
                    sin_pow: 0,
                    cos_pow: 0,
                    multi: Vec::new(),
                    atan: None,
                    asin_pow: 1,
                },
                coeff: neg_two_pi,
            },
        ],
    )
}

/// Cleared t-domain goal of the first inequality:
/// `2 pi sin^2 t + (pi^2+pi-8) sin^5 t atan(sin t) - pi sin t atan(sin t) - pi t^2`.
pub fn g1_expr() -> Expr {
    Expr::new(
        Var::T,
        vec![
            term(PiPoly::monomial(rat(2, 1), 1), 0, 2, 0),
            atan_term(pi2_pi_m8(), 0, 5, 0, ArcInner::Sin),
            atan_term(PiPoly::monomial(rat(-1, 1), 1), 0, 1, 0, ArcInner::Sin),
            term(PiPoly::monomial(rat(-1, 1), 1), 2, 0, 0),
        ],
    )
}

/// Cleared t-domain goal of the second inequality:
/// `3 pi sin t + (5 pi - 12) sin^4 t atan(sin t) - pi atan(sin t) - 2 pi t`.
pub fn g2_expr() -> Expr {
    Expr::new(
        Var::T,
        vec![
            term(PiPoly::monomial(rat(3, 1), 1), 0, 1, 0),
            atan_term(five_pi_m12(), 0, 4, 0, ArcInner::Sin),
            atan_term(PiPoly::monomial(rat(-1, 1), 1), 0, 0, 0, ArcInner::Sin),
            term(PiPoly::monomial(rat(-2, 1), 1), 1, 0, 0),
        ],
    )
}

/// Reflection of the first goal (case II display):
/// `((pi^2+pi-8)cos^4 t - pi)cos t atan(cos t) - pi(pi/2 - t)^2 + 2 pi cos^2 t`
/// with the square expanded.
pub fn g1_reflected_expr() -> Expr {
    Expr::new(
        Var::T,
        vec![
            atan_term(pi2_pi_m8(), 0, 0, 5, ArcInner::Cos),
            atan_term(PiPoly::monomial(rat(-1, 1), 1), 0, 0, 1, ArcInner::Cos),
            term(PiPoly::monomial(rat(2, 1), 1), 0, 0, 2),
            term(PiPoly::monomial(rat(-1, 4), 3), 0, 0, 0),
            term(PiPoly::monomial(rat(1, 1), 2), 1, 0, 0),
            term(PiPoly::monomial(rat(-1, 1), 1), 2, 0, 0),
        ],
    )
}

/// Reflection of the second goal (case II display):
/// `((5 pi - 12)cos^4 t - pi) atan(cos t) + 3 pi cos t - 2 pi (pi/2 - t)`.
pub fn g2_reflected_expr() -> Expr {
    Expr::new(
        Var::T,
        vec![
            atan_term(five_pi_m12(), 0, 0, 4, ArcInner::Cos),
            atan_term(PiPoly::monomial(rat(-1, 1), 1), 0, 0, 0, ArcInner::Cos),
            term(PiPoly::monomial(rat(3, 1), 1), 0, 0, 1),
            term(PiPoly::monomial(rat(-1, 1), 2), 0, 0, 0),
            term(PiPoly::monomial(rat(2, 1), 1), 1, 0, 0),
        ],
    )
}

/// Taylor minorant target of the first proof, case I:
/// `2 pi sin^2 t + (pi^2+pi-8) sin^5 t (sin t - sin^3 t / 3)
///  - pi sin t (sin t - sin^3 t / 3 + sin^5 t / 5) - pi t^2`.
pub fn h1_expr() -> Expr {
    let sin = |q: i64| Expr::new(Var::T, vec![term(PiPoly::one(), 0, q, 0)]);
    let lower3 = sin(1).add(&sin(3).scale(&PiPoly::from_rational(rat(-1, 3))));
    let upper5 = lower3.add(&sin(5).scale(&PiPoly::from_rational(rat(1, 5))));
    let mut h = Expr::new(Var::T, vec![term(PiPoly::monomial(rat(2, 1), 1), 0, 2, 0)]);
    h = h.add(&sin(5).scale(&pi2_pi_m8()).mul(&lower3));
    h = h.add(&sin(1).scale(&PiPoly::monomial(rat(-1, 1), 1)).mul(&upper5));
    h.add(&Expr::new(
        Var::T,
        vec![term(PiPoly::monomial(rat(-1, 1), 1), 2, 0, 0)],
    ))
}

/// Taylor minorant target of the second proof, case I:
/// `3 pi sin t + (5 pi - 12) sin^4 t (sin t - sin^3 t / 3)
///  - pi (sin t - sin^3 t / 3 + sin^5 t / 5) - 2 pi t`.
pub fn h2_expr() -> Expr {
    let sin = |q: i64| Expr::new(Var::T, vec![term(PiPoly::one(), 0, q, 0)]);
    let lower3 = sin(1).add(&sin(3).scale(&PiPoly::from_rational(rat(-1, 3))));
    let upper5 = lower3.add(&sin(5).scale(&PiPoly::from_rational(rat(1, 5))));
    let mut h = Expr::new(Var::T, vec![term(PiPoly::monomial(rat(3, 1), 1), 0, 1, 0)]);
    h = h.add(&sin(4).scale(&five_pi_m12()).mul(&lower3));
    h = h.add(&upper5.scale(&PiPoly::monomial(rat(-1, 1), 1)));
    h.add(&Expr::new(
        Var::T,
        vec![term(PiPoly::monomial(rat(-2, 1), 1), 1, 0, 0)],
    ))
}

/// The degree-16 polynomial minorant of the first proof (fractional display).
pub fn p16_poly() -> Poly {
    let mut coeffs = vec![PiPoly::zero(); 17];
    coeffs[16] = pp_str(&[
        "536870912/1915538625",
        "-67108864/1915538625",
        "-67108864/1915538625",
    ]);
    coeffs[14] = pp_str(&[
        "-134217728/127702575",
        "16777216/127702575",
        "16777216/127702575",
    ]);
    coeffs[12] = pp_str(&["945149/280665", "-11017201/28066500", "-945149/2245320"]);
    coeffs[10] = pp_str(&["-309929/42525", "27409/34020", "309929/340200"]);
    coeffs[8] = pp_str(&["20129/1890", "-1609/1512", "-20129/15120"]);
    coeffs[6] = pp_str(&["-1049/135", "293/540", "1049/1080"]);
    Poly::from_coeffs(coeffs)
}

/// `p16 = t^6 / 30648618000 * p10`.
pub fn p16_scale() -> Rational {
    rational_from_str("1/30648618000").unwrap()
}

/// The integer-normalized degree-10 polynomial of the first proof.
pub fn p10_poly() -> Poly {
    let mut coeffs = vec![PiPoly::zero(); 11];
    coeffs[10] = pp_str(&["8589934592", "-1073741824", "-1073741824"]);
    coeffs[8] = pp_str(&["-32212254720", "4026531840", "4026531840"]);
    coeffs[6] = pp_str(&["103210270800", "-12030783492", "-12901283850"]);
    coeffs[4] = pp_str(&["-223372028880", "24692768100", "27921503610"]);
    coeffs[2] = pp_str(&["326415889800", "-32614832250", "-40801986225"]);
    coeffs[0] = pp_str(&["-238151113200", "16629713100", "29768889150"]);
    Poly::from_coeffs(coeffs)
}

/// `p5(z) = p10(sqrt z)`.
pub fn p5_poly() -> Poly {
    p10_poly().substitute_square().expect("p10 is even")
}

/// The degree-19 polynomial minorant of the second proof (fractional display).
pub fn p19_poly() -> Poly {
    let mut coeffs = vec![PiPoly::zero(); 20];
    coeffs[19] = pp_str(&[
        "232630513987207/39720849113088000",
        "-232630513987207/95330037871411200",
    ]);
    coeffs[17] = pp_str(&[
        "-4747561509943/116142833664000",
        "4747561509943/278742800793600",
    ]);
    coeffs[15] = pp_str(&[
        "612518675071/2615348736000",
        "-111034112797/1141243084800",
    ]);
    coeffs[13] = pp_str(&["-585184807/566092800", "25601647133/59779399680"]);
    coeffs[11] = pp_str(&["277683421/79833600", "-549507467/383201280"]);
    coeffs[9] = pp_str(&["-9870319/1161216", "34570249/9953280"]);
    coeffs[7] = pp_str(&["14", "-473/84"]);
    coeffs[5] = pp_str(&["-12", "93/20"]);
    Poly::from_coeffs(coeffs)
}

/// `p19 = t^5 / 23355859278495744000 * p14`.
pub fn p19_scale() -> Rational {
    rational_from_str("1/23355859278495744000").unwrap()
}

/// The integer-normalized degree-14 polynomial of the second proof.
pub fn p14_poly() -> Poly {
    let mut coeffs = vec![PiPoly::zero(); 15];
    coeffs[14] = pp_str(&["136786742224477716", "-56994475926865715"]);
    coeffs[12] = pp_str(&["-954715629403497528", "397798178918123970"]);
    coeffs[10] = pp_str(&["5469977974061251584", "-2272344207942188160"]);
    coeffs[8] = pp_str(&["-24143557388833935360", "10002584016180806400"]);
    coeffs[6] = pp_str(&["81238161686899875840", "-33492109086208281600"]);
    coeffs[4] = pp_str(&["-198524461941501696000", "81120783386638195200"]);
    coeffs[2] = pp_str(&["326982029898940416000", "-131515731413434368000"]);
    coeffs[0] = pp_str(&["-280270311341948928000", "108604745645005209600"]);
    Poly::from_coeffs(coeffs)
}

/// `p7(z) = p14(sqrt z)`.
pub fn p7_poly() -> Poly {
    p14_poly().substitute_square().expect("p14 is even")
}

/// Case-II cubic of the first proof:
/// `(35pi^2/32 + 35pi/32 - 35/4) t^3 + (-35pi^3/64 - 35pi^2/64 + 11pi/8) t^2 + (pi^2/2 + 4) t`.
pub fn case2_cubic_1() -> Poly {
    let mut coeffs = vec![PiPoly::zero(); 4];
    coeffs[3] = pp(&[(-35, 4), (35, 32), (35, 32)]);
    coeffs[2] = pp(&[(0, 1), (11, 8), (-35, 64), (-35, 64)]);
    coeffs[1] = pp(&[(4, 1), (0, 1), (1, 2)]);
    Poly::from_coeffs(coeffs)
}

/// Case-II cubic of the second proof:
/// `(5pi - 12) t^3 + (-5pi^2/2 + 9pi/2) t^2 + 6 t`.
pub fn case2_cubic_2() -> Poly {
    let mut coeffs = vec![PiPoly::zero(); 4];
    coeffs[3] = pp(&[(-12, 1), (5, 1)]);
    coeffs[2] = pp(&[(0, 1), (9, 2), (-5, 2)]);
    coeffs[1] = pp(&[(6, 1)]);
    Poly::from_coeffs(coeffs)
}

/// Concavity side condition of the secant rule: `3 cos t - cos^3 t > 0`.
pub fn concavity_goal_expr() -> Expr {
    Expr::new(
        Var::T,
        vec![
            term(PiPoly::from_int(3), 0, 0, 1),
            term(PiPoly::from_int(-1), 0, 0, 3),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::SignCtx;
    use crate::poly::{count_roots, RootRegion, SturmChain};

    #[test]
    fn p16_is_the_scaled_monomial_multiple_of_p10() {
        let assembled = p10_poly()
            .scale_rational(&p16_scale())
            .mul_monomial(&PiPoly::one(), 6);
        assert_eq!(assembled, p16_poly());
    }

    #[test]
    fn p19_is_the_scaled_monomial_multiple_of_p14() {
        let assembled = p14_poly()
            .scale_rational(&p19_scale())
            .mul_monomial(&PiPoly::one(), 5);
        assert_eq!(assembled, p19_poly());
    }

    #[test]
    fn p5_has_one_real_root_outside_the_interval() {
        let ctx = SignCtx::default();
        let p5 = p5_poly();
        let chain = SturmChain::build(&p5, &ctx).unwrap();
        let (whole, _) = count_roots(&chain, &RootRegion::WholeLine, &ctx).unwrap();
        assert_eq!(whole, 1);
    }
}
