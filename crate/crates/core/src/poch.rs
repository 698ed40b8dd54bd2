//! Product sides: q-Pochhammer symbols, J-notation, eta quotients and the
//! Jacobi triple product.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::param::{ParamSeries, TailBound};
use crate::rat::{big, fmt_big, fmt_r64, int, parse_big, serde_r64, Exp};
use crate::series::QSeries;

/// `(sign·q^a; q^m)_len ^ pow`, i.e. `∏_{k < len} (1 - sign·q^{a + k m})^pow`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PochFactor {
    pub sign: i8,
    #[serde(with = "serde_r64")]
    pub a: Exp,
    #[serde(with = "serde_r64")]
    pub m: Exp,
    #[serde(with = "serde_len")]
    pub len: Option<u32>,
    pub pow: i32,
}

mod serde_len {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Len {
        Int(u32),
        Str(String),
    }

    pub fn serialize<S: Serializer>(len: &Option<u32>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match len {
            Some(n) => s.serialize_u32(*n),
            None => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<u32>, D::Error> {
        match Len::deserialize(d)? {
            Len::Int(n) => Ok(Some(n)),
            Len::Str(s) if s == "inf" => Ok(None),
            Len::Str(s) => Err(serde::de::Error::custom(format!("invalid length `{s}`"))),
        }
    }
}

impl PochFactor {
    /// `(q^a; q^m)_∞`.
    pub fn inf(a: Exp, m: Exp) -> Self {
        PochFactor { sign: 1, a, m, len: None, pow: 1 }
    }

    /// `(-q^a; q^m)_∞`.
    pub fn inf_neg(a: Exp, m: Exp) -> Self {
        PochFactor { sign: -1, a, m, len: None, pow: 1 }
    }

    pub fn finite(sign: i8, a: Exp, m: Exp, len: u32) -> Self {
        PochFactor { sign, a, m, len: Some(len), pow: 1 }
    }

    pub fn pow(mut self, pow: i32) -> Self {
        self.pow *= pow;
        self
    }

    pub fn inverse(self) -> Self {
        self.pow(-1)
    }

    fn check(&self) -> Result<()> {
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::Parse(format!("factor sign must be ±1, got {}", self.sign)));
        }
        if !self.m.is_positive() {
            return Err(Error::Divergent(format!("step {} is not positive", fmt_r64(self.m))));
        }
        if self.len.is_none() && (self.a.is_negative() || (self.a.is_zero() && self.sign == 1)) {
            return Err(Error::Divergent(format!(
                "({}q^{}; q^{})_∞",
                if self.sign < 0 { "-" } else { "" },
                fmt_r64(self.a),
                fmt_r64(self.m)
            )));
        }
        Ok(())
    }
}

/// `const · q^delta · ∏ factors`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpec {
    #[serde(with = "serde_r64")]
    pub delta: Exp,
    #[serde(rename = "const", with = "serde_big")]
    pub constant: BigRational,
    pub factors: Vec<PochFactor>,
}

mod serde_big {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_big(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_big(&s).map_err(serde::de::Error::custom)
    }
}

impl ProductSpec {
    pub fn new(factors: Vec<PochFactor>) -> Self {
        ProductSpec { delta: Exp::zero(), constant: BigRational::one(), factors }
    }

    pub fn with_delta(mut self, delta: Exp) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_const(mut self, c: BigRational) -> Self {
        self.constant = c;
        self
    }

    pub fn times(mut self, other: ProductSpec) -> Self {
        self.delta += other.delta;
        self.constant *= other.constant;
        self.factors.extend(other.factors);
        self
    }

    pub fn eval(&self, order: Exp) -> Result<QSeries> {
        eval_factors(&self.factors, order - self.delta)
            .map(|s| s.shift(self.delta).scale(&self.constant))
    }
}

/// One binomial `(1 - sign q^e)^pow` from the expansion of a symbol.
struct Binomial {
    sign: i8,
    e: Exp,
    pow: i32,
}

/// Multiplies out all factors, pulling nonpositive exponents out first so
/// that the in-place kernels only see positive ones.
fn eval_factors(factors: &[PochFactor], order: Exp) -> Result<QSeries> {
    let mut shift = Exp::zero();
    let mut constant = BigRational::one();
    let mut zero = false;
    let mut bins: Vec<Binomial> = Vec::new();
    // Only finite symbols can carry negative exponents.
    let mut pre = Exp::zero();
    for f in factors {
        f.check()?;
        if let Some(l) = f.len {
            for k in 0..l {
                let e = f.a + f.m * Exp::from_integer(k as i64);
                if e.is_negative() {
                    pre += e * Exp::from_integer(f.pow as i64);
                }
            }
        }
    }
    let work = order - pre;
    for f in factors {
        let mut k = 0u32;
        loop {
            if f.len.is_some_and(|l| k >= l) {
                break;
            }
            let e = f.a + f.m * Exp::from_integer(k as i64);
            if f.len.is_none() && e >= work && e.is_positive() {
                break;
            }
            if e.is_zero() {
                if f.sign == 1 {
                    if f.pow < 0 {
                        return Err(Error::Divergent("division by the factor (1 - 1)".into()));
                    }
                    zero |= f.pow > 0;
                } else {
                    constant *= big(2).pow(f.pow);
                }
            } else if e.is_negative() {
                // 1 - s q^e = -s q^e (1 - s q^{-e})
                shift += e * Exp::from_integer(f.pow as i64);
                if f.sign == 1 && f.pow % 2 != 0 {
                    constant = -constant;
                }
                bins.push(Binomial { sign: f.sign, e: -e, pow: f.pow });
            } else {
                bins.push(Binomial { sign: f.sign, e, pow: f.pow });
            }
            k += 1;
        }
    }
    debug_assert_eq!(pre, shift);
    if zero {
        return Ok(QSeries::zero(order));
    }
    let mut acc = QSeries::one(work);
    for b in bins.iter().filter(|b| b.pow < 0) {
        if b.e >= work {
            continue;
        }
        for _ in 0..(-b.pow) {
            acc.div_binomial(-b.sign, b.e)?;
        }
    }
    for b in bins.iter().filter(|b| b.pow > 0) {
        if b.e >= work {
            continue;
        }
        for _ in 0..b.pow {
            acc.mul_binomial(-b.sign, b.e);
        }
    }
    Ok(acc.shift(shift).scale(&constant))
}

pub fn poch(f: &PochFactor, order: Exp) -> Result<QSeries> {
    eval_factors(std::slice::from_ref(f), order)
}

/// `J_{a,m} = (q^a, q^{m-a}, q^m; q^m)_∞` as a product spec.
pub fn j_spec(a: Exp, m: Exp) -> ProductSpec {
    ProductSpec::new(vec![PochFactor::inf(a, m), PochFactor::inf(m - a, m), PochFactor::inf(m, m)])
}

/// `J_m = (q^m; q^m)_∞` as a product spec.
pub fn jm_spec(m: Exp) -> ProductSpec {
    ProductSpec::new(vec![PochFactor::inf(m, m)])
}

pub fn j(a: Exp, m: Exp, order: Exp) -> Result<QSeries> {
    if !(a.is_positive() && a < m) {
        return Err(Error::Divergent(format!("J_{{{},{}}} needs 0 < a < m", fmt_r64(a), fmt_r64(m))));
    }
    j_spec(a, m).eval(order)
}

pub fn jm(m: Exp, order: Exp) -> Result<QSeries> {
    jm_spec(m).eval(order)
}

/// `∏_m (q^m; q^m)_∞^{e_m}` as a product spec.
pub fn eta_spec(exps: &BTreeMap<i64, i32>) -> ProductSpec {
    ProductSpec::new(
        exps.iter()
            .filter(|(_, e)| **e != 0)
            .map(|(&m, &e)| PochFactor::inf(int(m), int(m)).pow(e))
            .collect(),
    )
}

pub fn eta_quotient(exps: &BTreeMap<i64, i32>, order: Exp) -> Result<QSeries> {
    if let Some((m, _)) = exps.iter().find(|(m, _)| **m <= 0) {
        return Err(Error::Divergent(format!("modulus {m} is not positive")));
    }
    eta_spec(exps).eval(order)
}

/// Bilateral sum `Σ_n (-1)^n q^{m n(n-1)/2} (zsign·q^{zexp})^n`.
pub fn jacobi_triple(zexp: Exp, zsign: i8, m: Exp, order: Exp) -> QSeries {
    bilateral(m / 2, zexp - m / 2, -zsign, order)
}

/// `Σ_{n ∈ ℤ} s^n q^{a n^2 + b n}` for `a > 0`.
pub fn bilateral(a: Exp, b: Exp, s: i8, order: Exp) -> QSeries {
    assert!(a.is_positive(), "bilateral theta sum needs a positive quadratic coefficient");
    let e = |n: i64| {
        let nn = Exp::from_integer(n);
        a * nn * nn + b * nn
    };
    let vertex = (-b / (a * 2)).floor().to_integer();
    let mut terms = Vec::new();
    let sign = |n: i64| if s < 0 && n.rem_euclid(2) == 1 { big(-1) } else { big(1) };
    let mut n = vertex + 1;
    while e(n) < order {
        terms.push((e(n), sign(n)));
        n += 1;
    }
    let mut n = vertex;
    while e(n) < order {
        terms.push((e(n), sign(n)));
        n -= 1;
    }
    QSeries::from_terms(terms, order)
}

/// Product form of [`jacobi_triple`]: `(q^m, s q^{zexp}, s q^{m - zexp}; q^m)_∞`.
pub fn jacobi_triple_spec(zexp: Exp, zsign: i8, m: Exp) -> ProductSpec {
    ProductSpec::new(vec![
        PochFactor::inf(m, m),
        PochFactor { sign: zsign, a: zexp, m, len: None, pow: 1 },
        PochFactor { sign: zsign, a: m - zexp, m, len: None, pow: 1 },
    ])
}

/// `(s q^a; -q^m)_∞` rewritten over the positive step `q^{2m}`.
pub fn neg_nome_factors(sign: i8, a: Exp, m: Exp) -> Vec<PochFactor> {
    vec![
        PochFactor { sign, a, m: m * 2, len: None, pow: 1 },
        PochFactor { sign: -sign, a: a + m, m: m * 2, len: None, pow: 1 },
    ]
}

/// `(sign·u^ua v^vb q^e; q^m)_len ^ pow` with formal parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoch {
    pub sign: i8,
    pub ua: u32,
    pub vb: u32,
    pub e: Exp,
    pub m: Exp,
    pub len: Option<u32>,
    pub pow: i32,
}

impl ParamPoch {
    pub fn inf(sign: i8, ua: u32, vb: u32, e: Exp, m: Exp) -> Self {
        ParamPoch { sign, ua, vb, e, m, len: None, pow: 1 }
    }

    pub fn eval(&self, order: Exp, udeg: u32, vdeg: u32) -> Result<ParamSeries> {
        let g = self.ua + self.vb;
        if g == 0 {
            let f = PochFactor { sign: self.sign, a: self.e, m: self.m, len: self.len, pow: self.pow };
            return Ok(ParamSeries::from_q(poch(&f, order)?, udeg, vdeg));
        }
        if self.pow == 0 {
            return Ok(ParamSeries::from_q(QSeries::one(order), udeg, vdeg));
        }
        if self.pow < 0 && self.e.is_negative() {
            return Err(Error::Divergent("inverse parameter product with a negative exponent".into()));
        }
        let kmax = |k: u32| self.len.is_some_and(|l| k >= l);
        // Deepest valuation the retained components can reach.
        let mut negsum = Exp::zero();
        let mut k = 0;
        while !kmax(k) {
            let e = self.e + self.m * Exp::from_integer(k as i64);
            if !e.is_negative() {
                break;
            }
            negsum += e;
            k += 1;
        }
        let work = order - negsum * Exp::from_integer(self.pow.unsigned_abs() as i64);
        let mut acc = ParamSeries::from_q(QSeries::one(work), udeg, vdeg);
        let mut k = 0u32;
        while !kmax(k) {
            let e = self.e + self.m * Exp::from_integer(k as i64);
            if self.len.is_none() && e >= work {
                break;
            }
            for _ in 0..self.pow.unsigned_abs() {
                acc = if self.pow > 0 {
                    acc.mul_param_binomial(-self.sign, self.ua, self.vb, e)
                } else {
                    acc.div_param_binomial(-self.sign, self.ua, self.vb, e)?
                };
            }
            k += 1;
        }
        let gq = Exp::from_integer(g as i64);
        let single = if self.pow > 0 {
            TailBound::new(self.m / (gq * gq * 2), (self.e - self.m / 2) / gq, Exp::zero().min(self.e))
        } else {
            TailBound::new(Exp::zero(), self.e / gq, Exp::zero())
        };
        let mut tail = single;
        for _ in 1..self.pow.unsigned_abs() {
            tail = TailBound::new(tail.a2.min(single.a2) / 2, tail.a1.min(single.a1), tail.a0 + single.a0);
        }
        let mut out = acc.truncate(order);
        out.set_tail(tail);
        // Only a finite numerator symbol is a polynomial in the parameters.
        out.set_poly_deg(match self.len {
            Some(l) if self.pow > 0 => Some(l * g * self.pow as u32),
            _ => None,
        });
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::r64;

    fn coeffs(s: &QSeries, n: i64) -> Vec<i64> {
        use num_traits::ToPrimitive;
        (0..n).map(|e| s.coeff(int(e)).to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn finite_poch() {
        let s = poch(&PochFactor::finite(1, int(1), int(1), 2), int(10)).unwrap();
        assert_eq!(coeffs(&s, 5), vec![1, -1, -1, 1, 0]);
    }

    #[test]
    fn minus_one_poch_has_constant_two() {
        let s = poch(&PochFactor::inf_neg(int(0), int(1)), int(6)).unwrap();
        let t = poch(&PochFactor::inf_neg(int(1), int(1)), int(6)).unwrap().scale_int(2);
        assert_eq!(s, t);
        assert_eq!(s.coeff(int(0)), big(2));
    }

    #[test]
    fn divergent_rejected() {
        assert!(poch(&PochFactor::inf(int(0), int(1)), int(5)).is_err());
        assert!(poch(&PochFactor::inf(int(-1), int(1)), int(5)).is_err());
        assert!(j(int(0), int(5), int(5)).is_err());
    }

    #[test]
    fn j_values() {
        let s = j(int(1), int(5), int(8)).unwrap();
        assert_eq!(coeffs(&s, 8), vec![1, -1, 0, 0, -1, 0, 0, 1]);
        let t = j(int(2), int(4), int(9)).unwrap();
        assert_eq!(coeffs(&t, 9), vec![1, 0, -2, 0, 0, 0, 0, 0, 2]);
        assert_eq!(j(int(3), int(7), int(40)).unwrap(), j(int(4), int(7), int(40)).unwrap());
    }

    #[test]
    fn negative_exponents_in_finite_symbols() {
        // (q^{-1}; q)_2 = (1 - q^{-1})(1 - 1) = 0
        assert!(poch(&PochFactor::finite(1, int(-1), int(1), 2), int(5)).unwrap().is_zero());
        // (q^{-1}; q)_1 = 1 - q^{-1}
        let s = poch(&PochFactor::finite(1, int(-1), int(1), 1), int(5)).unwrap();
        assert_eq!(s.terms(), vec![(int(-1), big(-1)), (int(0), big(1))]);
    }

    #[test]
    fn triple_product_forms_agree() {
        for (z, s, m) in [(int(2), -1i8, int(5)), (r64(1, 2), 1, int(2)), (int(12), -1, int(28))] {
            let a = jacobi_triple(z, s, m, int(60));
            let b = jacobi_triple_spec(z, s, m).eval(int(60)).unwrap();
            assert!(a.eq_to_order(&b, int(60)).unwrap().is_equal(), "z={z} s={s} m={m}");
        }
        assert!(jacobi_triple(int(1), 1, int(1), int(30)).is_zero());
    }

    #[test]
    fn param_poch_inverse() {
        let p = ParamPoch::inf(1, 1, 0, int(0), int(1)).eval(int(20), 8, 0).unwrap();
        let mut q = ParamPoch::inf(1, 1, 0, int(0), int(1));
        q.pow = -1;
        let r = q.eval(int(20), 8, 0).unwrap();
        let one = ParamSeries::from_q(QSeries::one(int(20)), 8, 0);
        assert!(p.mul(&r).eq_to_order(&one, int(20)).unwrap().is_equal());
    }

    #[test]
    fn param_poch_negative_substitution() {
        // (-u; q)_∞ at u = q^{-1} is (1 + q^{-1}) · 2 · (-q; q)_∞
        let p = ParamPoch::inf(-1, 1, 0, int(0), int(1)).eval(int(20), 4, 0).unwrap();
        let s = p.substitute(int(-1), int(0)).unwrap();
        assert_eq!(s.order(), int(5));
        let direct = poch(&PochFactor::inf_neg(int(-1), int(1)), int(5));
        assert!(direct.is_err());
        let want = poch(&PochFactor::inf_neg(int(1), int(1)), int(6))
            .unwrap()
            .scale_int(2)
            .mul(&QSeries::from_terms([(int(-1), big(1)), (int(0), big(1))], int(6)));
        assert!(s.eq_to_order(&want, int(5)).unwrap().is_equal());
        assert!(ParamPoch { pow: -1, ..ParamPoch::inf(1, 1, 0, int(0), int(1)) }
            .eval(int(20), 4, 0)
            .unwrap()
            .substitute(int(-1), int(0))
            .is_err());
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec = j_spec(int(1), int(5)).with_delta(r64(-1, 60)).with_const(big(2));
        let js = serde_json::to_string(&spec).unwrap();
        assert!(js.contains("\"len\":\"inf\""));
        assert!(js.contains("\"delta\":\"-1/60\""));
        let back: ProductSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(back, spec);
    }
}
