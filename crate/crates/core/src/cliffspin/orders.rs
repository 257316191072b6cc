//! Orders of finite orthogonal groups and the odd-index ratios built from them.

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthType {
    Plus,
    Minus,
    Odd,
}

impl OrthType {
    pub fn sign(self) -> i32 {
        match self {
            OrthType::Plus => 1,
            OrthType::Minus => -1,
            OrthType::Odd => 0,
        }
    }
}

fn pow(q: u64, e: u64) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// |O_dim^ε(q)|. For even dim = 2n:
/// 2 q^{n(n−1)} (q^n − ε) ∏_{i=1}^{n−1} (q^{2i} − 1); for odd dim = 2n+1:
/// 2 q^{n²} ∏_{i=1}^{n} (q^{2i} − 1).
pub fn orth_group_order(dim: u64, kind: OrthType, q: u64) -> BigUint {
    assert!(dim >= 1);
    let two = BigUint::from(2u32);
    let one = BigUint::one();
    if dim % 2 == 1 {
        assert_eq!(
            kind,
            OrthType::Odd,
            "odd dimension has a single orthogonal group"
        );
        let n = (dim - 1) / 2;
        let mut r = &two * pow(q, n * n);
        for i in 1..=n {
            r *= pow(q, 2 * i) - &one;
        }
        r
    } else {
        let n = dim / 2;
        let qn = pow(q, n);
        let mut r = &two * pow(q, n * (n - 1));
        r *= match kind {
            OrthType::Plus => qn - &one,
            OrthType::Minus => qn + &one,
            OrthType::Odd => panic!("even dimension needs a sign"),
        };
        for i in 1..n {
            r *= pow(q, 2 * i) - &one;
        }
        r
    }
}

/// Exact quotient, or None if the division is not exact.
pub fn exact_div(a: &BigUint, b: &BigUint) -> Option<BigUint> {
    if b.is_zero() || !(a % b).is_zero() {
        None
    } else {
        Some(a / b)
    }
}

pub fn is_odd(x: &BigUint) -> bool {
    x.bit(0)
}

/// The 2-part of a positive integer.
pub fn two_part(x: &BigUint) -> BigUint {
    let tz = x.trailing_zeros().unwrap_or(0);
    BigUint::one() << tz
}

/// |Spin_7(Q)| = Q^9 (Q^6 − 1)(Q^4 − 1)(Q^2 − 1).
pub fn spin7_order(qn: u64) -> BigUint {
    let one = BigUint::one();
    pow(qn, 9) * (pow(qn, 6) - &one) * (pow(qn, 4) - &one) * (pow(qn, 2) - &one)
}

/// |SL_2(Q)| = Q (Q² − 1).
pub fn sl2_order(qn: u64) -> BigUint {
    BigUint::from(qn) * (pow(qn, 2) - BigUint::one())
}

/// |H(Q)·⟨τ⟩| = 2 |SL_2(Q)|³.
pub fn h_tau_order(qn: u64) -> BigUint {
    BigUint::from(2u32) * sl2_order(qn).pow(3)
}

/// Closed form Q^6 (Q^4 + Q^2 + 1)(Q^2 + 1)/2 of [Spin_7(Q) : H(Q)⟨τ⟩].
pub fn spin7_index_closed_form(qn: u64) -> BigUint {
    let one = BigUint::one();
    pow(qn, 6) * (pow(qn, 4) + pow(qn, 2) + &one) * ((pow(qn, 2) + &one) / BigUint::from(2u32))
}

/// One evaluated index ratio.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct OddRatio {
    pub family: &'static str,
    pub q: u64,
    pub n: u64,
    pub sign: i32,
    /// Decimal value of the ratio, or None if the division was not exact.
    pub value: Option<String>,
    /// The quotient of group orders agrees with the factored closed form.
    pub matches_closed_form: bool,
    pub odd: bool,
}

impl OddRatio {
    pub fn passed(&self) -> bool {
        self.value.is_some() && self.matches_closed_form && self.odd
    }
}

fn ratio(
    family: &'static str,
    q: u64,
    n: u64,
    sign: i32,
    num: BigUint,
    den: BigUint,
    closed: BigUint,
) -> OddRatio {
    let quotient = exact_div(&num, &den);
    OddRatio {
        family,
        q,
        n,
        sign,
        matches_closed_form: quotient.as_ref() == Some(&closed),
        odd: quotient.as_ref().is_some_and(is_odd),
        value: quotient.map(|v| v.to_string()),
    }
}

fn kind(sign: i32) -> OrthType {
    if sign > 0 {
        OrthType::Plus
    } else {
        OrthType::Minus
    }
}

fn q_pow_minus(q: u64, e: u64, sign: i32) -> BigUint {
    if sign > 0 {
        pow(q, e) - BigUint::one()
    } else {
        pow(q, e) + BigUint::one()
    }
}

/// ∏_{i=1}^{m−1} (q^{2(j+i)} − 1)/(q^{2i} − 1), computed as a quotient of products.
fn shifted_product(q: u64, j: u64, m: u64) -> BigUint {
    let one = BigUint::one();
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for i in 1..m {
        num *= pow(q, 2 * (j + i)) - &one;
        den *= pow(q, 2 * i) - &one;
    }
    exact_div(&num, &den).expect("quotient of cyclotomic products")
}

/// The ratios showing that O(F_q^n) has a subgroup O_m × O_{n−m} of odd index unless
/// n is a power of 2 with square discriminant, for all half-dimensions 1 ≤ n ≤ max_n,
/// together with [Spin_7(q^n) : H(q^n)⟨τ⟩].
pub fn odd_index_ratios(q: u64, max_n: u64) -> Vec<OddRatio> {
    assert!(q % 2 == 1 && q >= 3);
    let two = BigUint::from(2u32);
    let o1 = orth_group_order(1, OrthType::Odd, q);
    let mut out = Vec::new();
    for n in 1..=max_n {
        // |O_{2n+1}| / (|O^ε_{2n}| |O_1|) = q^n (q^n + ε)/2; odd for the ε with q^n ≡ ε mod 4
        let sign = if pow(q, n) % 4u32 == BigUint::one() {
            1
        } else {
            -1
        };
        let closed = pow(q, n) * (q_pow_minus(q, n, -sign) / &two);
        let num = orth_group_order(2 * n + 1, OrthType::Odd, q);
        let den = orth_group_order(2 * n, kind(sign), q) * &o1;
        out.push(ratio("odd-dimension", q, n, sign, num, den, closed));

        if !n.is_power_of_two() {
            let k = 63 - n.leading_zeros() as u64;
            let m = n - (1 << k);
            for sign in [1, -1] {
                let closed = pow(q, m << (k + 1))
                    * shifted_product(q, 1 << k, m)
                    * exact_div(&q_pow_minus(q, n, sign), &q_pow_minus(q, m, sign))
                        .unwrap_or_default()
                    * ((pow(q, 1 << k) + BigUint::one()) / &two);
                let num = orth_group_order(2 * n, kind(sign), q);
                let den = orth_group_order(1 << (k + 1), OrthType::Plus, q)
                    * orth_group_order(2 * m, kind(sign), q);
                out.push(ratio("not-power-of-two", q, n, sign, num, den, closed));
            }
        } else if n >= 2 {
            let m = n / 2;
            let closed = pow(q, 2 * m * m)
                * shifted_product(q, m, m)
                * ((pow(q, 2 * m) + BigUint::one()) / &two);
            let num = orth_group_order(2 * n, OrthType::Minus, q);
            let den = orth_group_order(2 * m, OrthType::Plus, q)
                * orth_group_order(2 * m, OrthType::Minus, q);
            out.push(ratio("nonsquare-discriminant", q, n, -1, num, den, closed));
        }

        let qn = q.pow(n as u32);
        out.push(ratio(
            "spin7-index",
            q,
            n,
            0,
            spin7_order(qn),
            h_tau_order(qn),
            spin7_index_closed_form(qn),
        ));
    }
    // |O^ε_2| / |O_1|² = (q − ε)/2, with ε the sign of the nonsquare-discriminant plane
    let sign = if q % 4 == 1 { -1 } else { 1 };
    let closed = q_pow_minus(q, 1, sign) / &two;
    out.push(ratio(
        "plane",
        q,
        1,
        sign,
        orth_group_order(2, kind(sign), q),
        &o1 * &o1,
        closed,
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        assert_eq!(orth_group_order(1, OrthType::Odd, 7), BigUint::from(2u32));
        assert_eq!(orth_group_order(3, OrthType::Odd, 3), BigUint::from(48u32));
        assert_eq!(
            orth_group_order(4, OrthType::Plus, 3),
            BigUint::from(1152u32)
        );
        assert_eq!(orth_group_order(2, OrthType::Minus, 3), BigUint::from(8u32));
    }

    #[test]
    fn ratios_are_odd_for_small_q() {
        for q in [3, 5, 7, 9] {
            for r in odd_index_ratios(q, 3) {
                assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn sylow_order_of_spin7_3() {
        assert_eq!(two_part(&spin7_order(3)), BigUint::from(1024u32));
    }
}
