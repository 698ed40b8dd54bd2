//! Single sums `Σ_n s^n u^{wu·n} v^{wv·n} q^{αn² + βn + γ} ∏ (c q^a; q^m)_{kn+l}^{p}`.
//!
//! The cutoff is provable: numerator symbols can only lower the valuation by
//! the sum of their negative exponents, a constant `K` independent of `n`, so
//! once `αn² + βn + γ + K` passes the order and is increasing, no later term
//! contributes.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::param::{ParamSeries, TailBound};
use crate::poch::{ParamPoch, PochFactor, ProductSpec};
use crate::rat::{big, int, Exp};
use crate::series::QSeries;

/// `(sign·u^ua v^vb q^a; q^m)_{k n + l} ^ pow`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NPoch {
    pub sign: i8,
    pub ua: u32,
    pub vb: u32,
    pub a: Exp,
    pub m: Exp,
    pub k: u32,
    pub l: u32,
    pub pow: i32,
}

impl NPoch {
    /// `(sign q^a; q^m)_{kn+l}` in the numerator.
    pub fn num(sign: i8, a: Exp, m: Exp, k: u32, l: u32) -> Self {
        NPoch { sign, ua: 0, vb: 0, a, m, k, l, pow: 1 }
    }

    /// `(sign q^a; q^m)_{kn+l}` in the denominator.
    pub fn den(sign: i8, a: Exp, m: Exp, k: u32, l: u32) -> Self {
        NPoch { pow: -1, ..Self::num(sign, a, m, k, l) }
    }

    pub fn with_u(mut self, ua: u32) -> Self {
        self.ua = ua;
        self
    }

    fn len(&self, n: i64) -> u32 {
        self.k * n as u32 + self.l
    }

    fn has_param(&self) -> bool {
        self.ua + self.vb > 0
    }

    /// Most negative valuation the symbol can contribute, over all lengths.
    fn worst(&self) -> Exp {
        if self.pow <= 0 {
            return Exp::zero();
        }
        let mut acc = Exp::zero();
        let mut j = 0i64;
        loop {
            let e = self.a + self.m * int(j);
            if !e.is_negative() {
                break;
            }
            acc += e;
            j += 1;
        }
        acc * int(self.pow as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleSum {
    pub quad: Exp,
    pub lin: Exp,
    pub cst: Exp,
    /// Multiply the `n`-th term by `(-1)^n`.
    pub alternating: bool,
    pub wu: u32,
    pub wv: u32,
    pub factors: Vec<NPoch>,
}

impl SingleSum {
    pub fn new(quad: Exp, lin: Exp, factors: Vec<NPoch>) -> Self {
        SingleSum { quad, lin, cst: Exp::zero(), alternating: false, wu: 0, wv: 0, factors }
    }

    pub fn with_const(mut self, c: Exp) -> Self {
        self.cst = c;
        self
    }

    pub fn with_u_weight(mut self, w: u32) -> Self {
        self.wu = w;
        self
    }

    pub fn alternating(mut self) -> Self {
        self.alternating = true;
        self
    }

    pub fn has_param(&self) -> bool {
        self.wu + self.wv > 0 || self.factors.iter().any(NPoch::has_param)
    }

    fn exponent(&self, n: i64) -> Exp {
        let nn = int(n);
        self.quad * nn * nn + self.lin * nn + self.cst
    }

    /// Last index whose term may reach below `order`.
    fn last_index(&self, order: Exp) -> Result<i64> {
        if self.quad.is_negative() || (self.quad.is_zero() && !self.lin.is_positive()) {
            return Err(Error::Divergent("single sum exponent does not grow".into()));
        }
        if self.factors.iter().any(|f| f.pow < 0 && f.has_param() && f.a.is_negative()) {
            return Err(Error::Divergent("parameter denominator with negative exponent".into()));
        }
        let k: Exp = self.factors.iter().map(NPoch::worst).sum();
        let start = if self.quad.is_zero() {
            0
        } else {
            (-self.lin / (self.quad * int(2))).ceil().to_integer().max(0)
        };
        let mut n = start;
        while self.exponent(n) + k < order {
            n += 1;
        }
        Ok(n - 1)
    }

    fn sign(&self, n: i64) -> BigRational {
        if self.alternating && n % 2 == 1 {
            big(-1)
        } else {
            big(1)
        }
    }

    pub fn eval(&self, order: Exp) -> Result<QSeries> {
        if self.has_param() {
            return Ok(self.eval_param(order, 0, 0)?.coeff(0, 0));
        }
        let last = self.last_index(order)?;
        let mut acc = QSeries::zero(order);
        for n in 0..=last {
            let e = self.exponent(n);
            let factors: Vec<PochFactor> = self
                .factors
                .iter()
                .map(|f| PochFactor { sign: f.sign, a: f.a, m: f.m, len: Some(f.len(n)), pow: f.pow })
                .collect();
            let term = ProductSpec::new(factors).with_delta(e).with_const(self.sign(n)).eval(order)?;
            acc = acc.add(&term);
        }
        Ok(acc.truncate(order))
    }

    pub fn eval_param(&self, order: Exp, udeg: u32, vdeg: u32) -> Result<ParamSeries> {
        let last = self.last_index(order)?;
        let k: Exp = self.factors.iter().map(NPoch::worst).sum();
        let floor = (0..=last.max(0)).map(|n| self.exponent(n)).min().unwrap_or(order) + k;
        let mut acc = ParamSeries::zero(order, udeg, vdeg);
        for n in 0..=last {
            let (ku, kv) = (self.wu * n as u32, self.wv * n as u32);
            if ku > udeg || kv > vdeg {
                continue;
            }
            let e = self.exponent(n);
            let mut term = ParamSeries::monomial(ku, kv, e, self.sign(n), order - k, udeg, vdeg);
            for f in &self.factors {
                let p = ParamPoch { sign: f.sign, ua: f.ua, vb: f.vb, e: f.a, m: f.m, len: Some(f.len(n)), pow: f.pow };
                term = term.mul(&p.eval(order - e - k, udeg, vdeg)?);
            }
            acc = acc.add(&term.truncate(order));
        }
        let mut out = acc.truncate(order);
        out.set_tail(TailBound::new(Exp::zero(), Exp::zero(), floor.min(order)));
        out.set_poly_deg(None);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poch::PochFactor;
    use crate::rat::r64;

    fn rr(lin: i64) -> SingleSum {
        SingleSum::new(int(1), int(lin), vec![NPoch::den(1, int(1), int(1), 1, 0)])
    }

    #[test]
    fn rogers_ramanujan_pair() {
        let n = int(120);
        let g = rr(0).eval(n).unwrap();
        let h = rr(1).eval(n).unwrap();
        let pg = ProductSpec::new(vec![
            PochFactor::inf(int(1), int(5)).pow(-1),
            PochFactor::inf(int(4), int(5)).pow(-1),
        ])
        .eval(n)
        .unwrap();
        let ph = ProductSpec::new(vec![
            PochFactor::inf(int(2), int(5)).pow(-1),
            PochFactor::inf(int(3), int(5)).pow(-1),
        ])
        .eval(n)
        .unwrap();
        assert!(g.eq_to_order(&pg, n).unwrap().is_equal());
        assert!(h.eq_to_order(&ph, n).unwrap().is_equal());
    }

    #[test]
    fn euler_with_fractional_shift() {
        for r in [r64(1, 2), int(1), r64(3, 2), int(2)] {
            let n = int(60);
            let lhs = SingleSum::new(int(0), r, vec![NPoch::den(1, int(1), int(1), 1, 0)]).eval(n).unwrap();
            let rhs = ProductSpec::new(vec![PochFactor::inf(r, int(1)).pow(-1)]).eval(n).unwrap();
            assert!(lhs.eq_to_order(&rhs, n).unwrap().is_equal());
            let lhs = SingleSum::new(r64(1, 2), r - r64(1, 2), vec![NPoch::den(1, int(1), int(1), 1, 0)])
                .eval(n)
                .unwrap();
            let rhs = ProductSpec::new(vec![PochFactor::inf_neg(r, int(1))]).eval(n).unwrap();
            assert!(lhs.eq_to_order(&rhs, n).unwrap().is_equal());
        }
    }

    #[test]
    fn lebesgue_in_a_parameter() {
        // Σ q^{n(n+1)/2} (u;q)_n/(q;q)_n = (uq;q^2)_∞ (-q;q)_∞
        let n = int(30);
        let lhs = SingleSum::new(
            r64(1, 2),
            r64(1, 2),
            vec![NPoch::num(1, int(0), int(1), 1, 0).with_u(1), NPoch::den(1, int(1), int(1), 1, 0)],
        )
        .eval_param(n, 10, 0)
        .unwrap();
        let rhs = ParamPoch::inf(1, 1, 0, int(1), int(2))
            .eval(n, 10, 0)
            .unwrap()
            .mul_q(&ProductSpec::new(vec![PochFactor::inf_neg(int(1), int(1))]).eval(n).unwrap());
        assert!(lhs.eq_to_order(&rhs, n).unwrap().is_equal());
    }

    #[test]
    fn non_growing_sum_rejected() {
        let s = SingleSum::new(int(0), int(0), vec![]);
        assert!(s.eval(int(5)).is_err());
    }
}
