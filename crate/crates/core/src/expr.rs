//! Series constructors used as the two sides of registered identities.
//!
//! [`Expr`] builds plain `q`-series, [`PExpr`] builds series in the formal
//! parameters `u`, `v`. Evaluation at order `N` always returns a value exact
//! to `N`: products and quotients whose factors have negative valuation are
//! re-evaluated with a raised working order until the result reaches `N`.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use crate::ct::{integrand_constant_term, ZFactor};
use crate::error::{Error, Result};
use crate::nahm::{nahm_sum, nahm_sum_param, NahmQuadruple, ParamWeights, ParityMask};
use crate::param::ParamSeries;
use crate::poch::{bilateral, ParamPoch, PochFactor, ProductSpec};
use crate::rat::{big, fmt_r64, Exp};
use crate::series::QSeries;
use crate::single::SingleSum;

const RETRIES: usize = 8;

#[derive(Clone, Debug)]
pub enum Expr {
    Prod(ProductSpec),
    Nahm { quad: NahmQuadruple, parity: ParityMask },
    Single(SingleSum),
    /// `Σ_{n∈ℤ} sign^n q^{a n² + b n}`.
    Theta { a: Exp, b: Exp, sign: i8 },
    /// Constant term in `z` of a product of z-factors.
    ConstTerm(Vec<ZFactor>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Quot(Box<Expr>, Box<Expr>),
    Scale(BigRational, Box<Expr>),
    Shift(Exp, Box<Expr>),
    /// `q -> q^k`.
    Dilate(Exp, Box<Expr>),
    Even(Box<Expr>),
    Odd(Box<Expr>),
    /// `q -> -q` on the half-integer lattice with extra factor `i^phase`.
    Twist(i64, Box<Expr>),
}

impl Expr {
    pub fn nahm(quad: NahmQuadruple) -> Self {
        Expr::Nahm { quad, parity: Vec::new() }
    }

    pub fn nahm_parity(quad: NahmQuadruple, parity: ParityMask) -> Self {
        Expr::Nahm { quad, parity }
    }

    /// `c q^e`.
    pub fn mono(c: i64, e: Exp) -> Self {
        Expr::Prod(ProductSpec::new(Vec::new()).with_delta(e).with_const(big(c)))
    }

    pub fn int(c: i64) -> Self {
        Self::mono(c, Exp::zero())
    }

    pub fn shift(self, e: Exp) -> Self {
        Expr::Shift(e, Box::new(self))
    }

    pub fn dilate(self, k: Exp) -> Self {
        Expr::Dilate(k, Box::new(self))
    }

    pub fn scale(self, c: i64) -> Self {
        Expr::Scale(big(c), Box::new(self))
    }

    pub fn even(self) -> Self {
        Expr::Even(Box::new(self))
    }

    pub fn odd(self) -> Self {
        Expr::Odd(Box::new(self))
    }

    pub fn twist(self, phase: i64) -> Self {
        Expr::Twist(phase, Box::new(self))
    }

    pub fn div(self, other: Expr) -> Self {
        Expr::Quot(Box::new(self), Box::new(other))
    }

    /// Evaluates exactly to `order`.
    pub fn eval(&self, order: Exp) -> Result<QSeries> {
        let mut req = order;
        for _ in 0..RETRIES {
            let s = self.eval_raw(req)?;
            if s.order() >= order {
                return Ok(s.truncate(order));
            }
            req += order - s.order();
        }
        Err(Error::OrderTooLarge { requested: fmt_r64(order), available: fmt_r64(req) })
    }

    fn eval_raw(&self, n: Exp) -> Result<QSeries> {
        match self {
            Expr::Prod(p) => p.eval(n),
            Expr::Nahm { quad, parity } => nahm_sum(quad, parity, n),
            Expr::Single(s) => s.eval(n),
            Expr::Theta { a, b, sign } => Ok(bilateral(*a, *b, *sign, n)),
            Expr::ConstTerm(fs) => integrand_constant_term(fs, n, 1),
            Expr::Sum(xs) => {
                let mut acc = QSeries::zero(n);
                for x in xs {
                    acc = acc.add(&x.eval(n)?);
                }
                Ok(acc)
            }
            Expr::Product(xs) => {
                let mut acc = QSeries::one(n);
                for x in xs {
                    acc = acc.mul(&x.eval(n)?);
                }
                Ok(acc)
            }
            Expr::Quot(a, b) => a.eval(n)?.div(&b.eval(n)?),
            Expr::Scale(c, x) => Ok(x.eval(n)?.scale(c)),
            Expr::Shift(e, x) => Ok(x.eval(n - e)?.shift(*e)),
            Expr::Dilate(k, x) => Ok(x.eval(n / k)?.dilate(*k)),
            Expr::Even(x) => x.eval(n)?.even_part(),
            Expr::Odd(x) => x.eval(n)?.odd_part(),
            Expr::Twist(p, x) => x.eval(n)?.negate_q(*p),
        }
    }
}

impl From<ProductSpec> for Expr {
    fn from(p: ProductSpec) -> Self {
        Expr::Prod(p)
    }
}

impl From<SingleSum> for Expr {
    fn from(s: SingleSum) -> Self {
        Expr::Single(s)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        match self {
            Expr::Sum(mut xs) => {
                xs.push(o);
                Expr::Sum(xs)
            }
            x => Expr::Sum(vec![x, o]),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        self + (-o)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(-1)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        match self {
            Expr::Product(mut xs) => {
                xs.push(o);
                Expr::Product(xs)
            }
            x => Expr::Product(vec![x, o]),
        }
    }
}

/// Series in the formal parameters `u`, `v`.
#[derive(Clone, Debug)]
pub enum PExpr {
    Nahm { quad: NahmQuadruple, weights: ParamWeights },
    Single(SingleSum),
    /// Product of parameter Pochhammer symbols.
    Poch(Vec<ParamPoch>),
    /// `Σ c u^a v^b q^e` over `(a, b, e, c)`.
    Poly(Vec<(u32, u32, Exp, i64)>),
    Lift(Expr),
    Sum(Vec<PExpr>),
    Product(Vec<PExpr>),
    Scale(BigRational, Box<PExpr>),
    Shift(Exp, Box<PExpr>),
    Dilate(Exp, Box<PExpr>),
}

impl PExpr {
    pub fn shift(self, e: Exp) -> Self {
        PExpr::Shift(e, Box::new(self))
    }

    pub fn dilate(self, k: Exp) -> Self {
        PExpr::Dilate(k, Box::new(self))
    }

    pub fn scale(self, c: i64) -> Self {
        PExpr::Scale(big(c), Box::new(self))
    }

    pub fn eval(&self, order: Exp, udeg: u32, vdeg: u32) -> Result<ParamSeries> {
        let mut req = order;
        for _ in 0..RETRIES {
            let s = self.eval_raw(req, udeg, vdeg)?;
            if s.order() >= order {
                return Ok(s.truncate(order));
            }
            req += order - s.order();
        }
        Err(Error::OrderTooLarge { requested: fmt_r64(order), available: fmt_r64(req) })
    }

    fn eval_raw(&self, n: Exp, udeg: u32, vdeg: u32) -> Result<ParamSeries> {
        match self {
            PExpr::Nahm { quad, weights } => nahm_sum_param(quad, &[], weights, n, udeg, vdeg),
            PExpr::Single(s) => s.eval_param(n, udeg, vdeg),
            PExpr::Poch(fs) => {
                let mut acc = ParamSeries::from_q(QSeries::one(n), udeg, vdeg);
                for f in fs {
                    acc = acc.mul(&f.eval(n, udeg, vdeg)?);
                }
                Ok(acc)
            }
            PExpr::Poly(terms) => {
                let mut acc = ParamSeries::zero(n, udeg, vdeg);
                for &(a, b, e, c) in terms {
                    acc = acc.add(&ParamSeries::monomial(a, b, e, big(c), n, udeg, vdeg));
                }
                Ok(acc)
            }
            PExpr::Lift(x) => Ok(ParamSeries::from_q(x.eval(n)?, udeg, vdeg)),
            PExpr::Sum(xs) => {
                let mut acc = ParamSeries::zero(n, udeg, vdeg);
                for x in xs {
                    acc = acc.add(&x.eval(n, udeg, vdeg)?);
                }
                Ok(acc)
            }
            PExpr::Product(xs) => {
                let mut acc = ParamSeries::from_q(QSeries::one(n), udeg, vdeg);
                for x in xs {
                    acc = acc.mul(&x.eval(n, udeg, vdeg)?);
                }
                Ok(acc)
            }
            PExpr::Scale(c, x) => Ok(x.eval(n, udeg, vdeg)?.scale(c)),
            PExpr::Shift(e, x) => Ok(x.eval(n - e, udeg, vdeg)?.shift(*e)),
            PExpr::Dilate(k, x) => Ok(x.eval(n / k, udeg, vdeg)?.dilate(*k)),
        }
    }
}

impl From<Expr> for PExpr {
    fn from(x: Expr) -> Self {
        PExpr::Lift(x)
    }
}

impl Mul for PExpr {
    type Output = PExpr;
    fn mul(self, o: PExpr) -> PExpr {
        match self {
            PExpr::Product(mut xs) => {
                xs.push(o);
                PExpr::Product(xs)
            }
            x => PExpr::Product(vec![x, o]),
        }
    }
}

impl Add for PExpr {
    type Output = PExpr;
    fn add(self, o: PExpr) -> PExpr {
        match self {
            PExpr::Sum(mut xs) => {
                xs.push(o);
                PExpr::Sum(xs)
            }
            x => PExpr::Sum(vec![x, o]),
        }
    }
}

/// Product of J-symbols: `(a, m, pow)` is `J_{a,m}^pow`, or `J_m^pow` when `a = 0`.
pub fn jprod(terms: &[(i64, i64, i32)]) -> ProductSpec {
    let mut factors = Vec::new();
    for &(a, m, pow) in terms {
        let (a, m) = (Exp::from_integer(a), Exp::from_integer(m));
        if a.is_zero() {
            factors.push(PochFactor::inf(m, m).pow(pow));
        } else {
            for f in [PochFactor::inf(a, m), PochFactor::inf(m - a, m), PochFactor::inf(m, m)] {
                factors.push(f.pow(pow));
            }
        }
    }
    ProductSpec::new(factors)
}

/// Product of infinite symbols `(sign q^a; q^m)_∞^pow` over `(sign, a, m, pow)`.
pub fn pprod(terms: &[(i8, Exp, Exp, i32)]) -> ProductSpec {
    ProductSpec::new(
        terms
            .iter()
            .map(|&(sign, a, m, pow)| PochFactor { sign, a, m, len: None, pow })
            .collect(),
    )
}

/// `const · q^delta · spec` as an expression.
pub fn scaled(spec: ProductSpec, c: i64, delta: Exp) -> Expr {
    let d = spec.delta;
    Expr::Prod(spec.with_const(big(c)).with_delta(d + delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn negative_valuation_products_reach_order() {
        // q^{-3}/(q;q)_∞: the q^9 coefficient is p(12)
        let x = Expr::mono(1, int(-3)) * Expr::Prod(jprod(&[(0, 1, -1)]));
        let s = x.eval(int(10)).unwrap();
        assert_eq!(s.order(), int(10));
        assert_eq!(s.coeff(int(9)), big(77));
    }

    #[test]
    fn quotient_and_shift() {
        let p = Expr::Prod(jprod(&[(0, 1, 1)]));
        let q = p.clone().div(p.clone().shift(int(-2)));
        let s = q.eval(int(8)).unwrap();
        assert_eq!(s, QSeries::monomial(int(2), big(1), int(8)));
    }

    #[test]
    fn dilate_and_parts() {
        let p = Expr::Prod(jprod(&[(0, 1, -1)]));
        let d = p.clone().dilate(int(2)).eval(int(12)).unwrap();
        assert_eq!(d.coeff(int(10)), big(7));
        let all = p.eval(int(12)).unwrap();
        let e = Expr::Prod(jprod(&[(0, 1, -1)])).even().eval(int(12)).unwrap();
        let o = Expr::Prod(jprod(&[(0, 1, -1)])).odd().eval(int(12)).unwrap();
        assert_eq!(e.add(&o), all);
    }

    #[test]
    fn param_polynomial_times_product() {
        // (1 + u)(-u; q)_∞ has u^1 coefficient 1 + 1/(1-q)
        let x = PExpr::Poly(vec![(0, 0, int(0), 1), (1, 0, int(0), 1)])
            * PExpr::Poch(vec![ParamPoch::inf(-1, 1, 0, int(0), int(1))]);
        let s = x.eval(int(6), 4, 0).unwrap();
        let c1 = s.coeff(1, 0);
        assert_eq!(c1.coeff(int(0)), big(2));
        assert_eq!(c1.coeff(int(5)), big(1));
    }
}
