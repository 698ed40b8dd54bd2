//! Series whose coefficients are polynomials in two formal parameters `u`, `v`.
//!
//! A [`ParamSeries`] stores one [`QSeries`] per monomial `u^a v^b` with
//! `a <= udeg`, `b <= vdeg`. Dropped monomials are controlled by a
//! [`TailBound`]: the true coefficient of any `u^a v^b` with `a + b = k` has
//! `q`-valuation at least `a2 k^2 + a1 k + a0`. That bound is what lets
//! [`ParamSeries::substitute`] attach a provable order after `u = q^α`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{ceil_r64, floor_r64, fmt_r64, Exp};
use crate::series::{Comparison, QSeries};

/// Quadratic lower bound on the valuation of total-degree-`k` coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailBound {
    pub a2: Exp,
    pub a1: Exp,
    pub a0: Exp,
}

impl TailBound {
    pub fn new(a2: Exp, a1: Exp, a0: Exp) -> Self {
        assert!(!a2.is_negative(), "tail bound needs a nonnegative quadratic term");
        TailBound { a2, a1, a0 }
    }

    pub fn at(&self, k: i64) -> Exp {
        let k = Exp::from_integer(k);
        self.a2 * k * k + self.a1 * k + self.a0
    }

    /// Minimum of the bound with extra slope `m` over integers `k >= k0`.
    /// `None` when it is unbounded below.
    pub fn min_from(&self, k0: i64, m: Exp) -> Option<Exp> {
        let lin = self.a1 + m;
        let f = |k: i64| {
            let kk = Exp::from_integer(k);
            self.a2 * kk * kk + lin * kk + self.a0
        };
        if self.a2.is_zero() {
            return (!lin.is_negative()).then(|| f(k0));
        }
        let vertex = -lin / (self.a2 * 2);
        let cands = [floor_r64(vertex), ceil_r64(vertex), k0];
        cands.iter().filter(|&&k| k >= k0).map(|&k| f(k)).min()
    }

    fn shift(&self, e: Exp) -> Self {
        TailBound { a0: self.a0 + e, ..*self }
    }

    fn combine_add(&self, o: &Self) -> Self {
        TailBound { a2: self.a2.min(o.a2), a1: self.a1.min(o.a1), a0: self.a0.min(o.a0) }
    }

    /// Sum with a polynomial of total degree `<= g`: keep this shape and
    /// lower the constant until degrees `0..=g` are covered too.
    fn combine_add_poly(&self, poly: &Self, g: u32) -> Self {
        let excess = (0..=g as i64).map(|k| self.at(k) - poly.at(k)).max().unwrap_or_default();
        TailBound { a0: self.a0 - excess.max(Exp::zero()), ..*self }
    }

    fn combine_mul(&self, o: &Self) -> Self {
        TailBound {
            a2: self.a2.min(o.a2) / 2,
            a1: self.a1.min(o.a1),
            a0: self.a0 + o.a0,
        }
    }

    /// Product of an arbitrary series with tail `self` and a parameter
    /// polynomial of total degree `<= g` with tail `poly`.
    fn combine_poly(&self, poly: &Self, g: u32) -> Self {
        let g = Exp::from_integer(g as i64);
        let zero = Exp::zero();
        TailBound {
            a2: self.a2,
            a1: self.a1 - self.a2 * g * 2,
            a0: self.a0 + poly.a0 + poly.a1.min(zero) * g - self.a1.max(zero) * g,
        }
    }
}

/// Outcome of comparing two parameter series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamComparison {
    Equal,
    Mismatch { u: u32, v: u32, exp: Exp, lhs: BigRational, rhs: BigRational },
}

impl ParamComparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, ParamComparison::Equal)
    }
}

#[derive(Clone, Debug)]
pub struct ParamSeries {
    comps: BTreeMap<(u32, u32), QSeries>,
    order: Exp,
    udeg: u32,
    vdeg: u32,
    tail: TailBound,
    /// Total parameter degree when the series is a polynomial in `u`, `v`.
    poly_deg: Option<u32>,
}

/// Cap combination: a cap of 0 marks an unused parameter.
fn join_cap(a: u32, b: u32) -> u32 {
    match (a, b) {
        (0, x) | (x, 0) => x,
        (x, y) => x.min(y),
    }
}

impl ParamSeries {
    /// Wraps a plain series as the `u^0 v^0` component.
    pub fn from_q(s: QSeries, udeg: u32, vdeg: u32) -> Self {
        let order = s.order();
        let tail = TailBound::new(Exp::zero(), Exp::zero(), s.val_or_order());
        let mut comps = BTreeMap::new();
        if !s.is_zero() {
            comps.insert((0, 0), s);
        }
        ParamSeries { comps, order, udeg, vdeg, tail, poly_deg: Some(0) }
    }

    pub fn zero(order: Exp, udeg: u32, vdeg: u32) -> Self {
        Self::from_q(QSeries::zero(order), udeg, vdeg)
    }

    /// `c u^a v^b q^e`.
    pub fn monomial(a: u32, b: u32, e: Exp, c: BigRational, order: Exp, udeg: u32, vdeg: u32) -> Self {
        let mut p = Self::zero(order, udeg, vdeg);
        p.tail = TailBound::new(Exp::zero(), Exp::zero(), e.min(order));
        p.poly_deg = Some(a + b);
        if a <= udeg && b <= vdeg {
            let s = QSeries::monomial(e, c, order);
            if !s.is_zero() {
                p.comps.insert((a, b), s);
            }
        }
        p
    }

    /// Assembles a series from explicit components and a caller-proved tail bound.
    pub fn from_parts(
        comps: BTreeMap<(u32, u32), QSeries>,
        order: Exp,
        udeg: u32,
        vdeg: u32,
        tail: TailBound,
        poly_deg: Option<u32>,
    ) -> Self {
        let comps = comps
            .into_iter()
            .filter(|((a, b), _)| *a <= udeg && *b <= vdeg)
            .map(|(k, s)| (k, s.truncate(order)))
            .filter(|(_, s)| !s.is_zero())
            .collect();
        ParamSeries { comps, order, udeg, vdeg, tail, poly_deg }
    }

    pub fn order(&self) -> Exp {
        self.order
    }

    pub fn udeg(&self) -> u32 {
        self.udeg
    }

    pub fn vdeg(&self) -> u32 {
        self.vdeg
    }

    pub fn tail(&self) -> TailBound {
        self.tail
    }

    /// Degree bound when the series is a polynomial in `u`, `v`; `None` otherwise.
    pub fn poly_deg(&self) -> Option<u32> {
        self.poly_deg
    }

    pub fn set_poly_deg(&mut self, deg: Option<u32>) {
        self.poly_deg = deg;
    }

    pub fn set_tail(&mut self, tail: TailBound) {
        self.tail = tail;
    }

    pub fn components(&self) -> &BTreeMap<(u32, u32), QSeries> {
        &self.comps
    }

    pub fn coeff(&self, a: u32, b: u32) -> QSeries {
        self.comps.get(&(a, b)).cloned().unwrap_or_else(|| QSeries::zero(self.order))
    }

    fn min_val(&self) -> Exp {
        self.comps.values().map(|s| s.val_or_order()).min().unwrap_or(self.order)
    }

    fn map(&self, f: impl Fn(&QSeries) -> QSeries) -> Self {
        let comps: BTreeMap<_, _> = self.comps.iter().map(|(k, s)| (*k, f(s))).collect();
        ParamSeries { comps, ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.map(|s| s.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut p = self.map(|s| s.scale(r));
        p.comps.retain(|_, s| !s.is_zero());
        p
    }

    pub fn shift(&self, e: Exp) -> Self {
        let mut p = self.map(|s| s.shift(e));
        p.order = self.order + e;
        p.tail = self.tail.shift(e);
        p
    }

    pub fn dilate(&self, k: Exp) -> Self {
        let mut p = self.map(|s| s.dilate(k));
        p.order = self.order * k;
        p.tail = TailBound::new(self.tail.a2 * k, self.tail.a1 * k, self.tail.a0 * k);
        p
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let udeg = join_cap(self.udeg, o.udeg);
        let vdeg = join_cap(self.vdeg, o.vdeg);
        let mut comps: BTreeMap<(u32, u32), QSeries> = BTreeMap::new();
        for src in [self, o] {
            for (k, s) in &src.comps {
                if k.0 > udeg || k.1 > vdeg {
                    continue;
                }
                let s = s.truncate(order);
                let sum = match comps.remove(k) {
                    Some(t) => t.add(&s),
                    None => s,
                };
                comps.insert(*k, sum);
            }
        }
        comps.retain(|_, s| !s.is_zero());
        let poly_deg = match (self.poly_deg, o.poly_deg) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        let tail = match (self.poly_deg, o.poly_deg) {
            (Some(g), None) => o.tail.combine_add_poly(&self.tail, g),
            (None, Some(g)) => self.tail.combine_add_poly(&o.tail, g),
            _ => self.tail.combine_add(&o.tail),
        };
        ParamSeries { comps, order, udeg, vdeg, tail, poly_deg }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = (self.order + o.min_val()).min(o.order + self.min_val());
        let udeg = join_cap(self.udeg, o.udeg);
        let vdeg = join_cap(self.vdeg, o.vdeg);
        let mut comps: BTreeMap<(u32, u32), QSeries> = BTreeMap::new();
        for ((a1, b1), s) in &self.comps {
            for ((a2, b2), t) in &o.comps {
                let k = (a1 + a2, b1 + b2);
                if k.0 > udeg || k.1 > vdeg {
                    continue;
                }
                let prod = s.mul(t).truncate(order);
                let sum = match comps.remove(&k) {
                    Some(x) => x.add(&prod),
                    None => prod,
                };
                comps.insert(k, sum);
            }
        }
        for s in comps.values_mut() {
            *s = s.truncate(order);
        }
        comps.retain(|_, s| !s.is_zero());
        let tail = match (self.poly_deg, o.poly_deg) {
            (Some(g), _) => o.tail.combine_poly(&self.tail, g),
            (None, Some(g)) => self.tail.combine_poly(&o.tail, g),
            (None, None) => self.tail.combine_mul(&o.tail),
        };
        let poly_deg = match (self.poly_deg, o.poly_deg) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        ParamSeries { comps, order, udeg, vdeg, tail, poly_deg }
    }

    /// Multiplies by a plain series.
    pub fn mul_q(&self, s: &QSeries) -> Self {
        let order = (self.order + s.val_or_order()).min(s.order() + self.min_val());
        let mut comps = BTreeMap::new();
        for (k, c) in &self.comps {
            let prod = c.mul(s).truncate(order);
            if !prod.is_zero() {
                comps.insert(*k, prod);
            }
        }
        ParamSeries { comps, order, tail: self.tail.shift(s.val_or_order()), ..self.clone() }
    }

    /// `self * (1 + c u^a v^b q^e)`.
    pub fn mul_param_binomial(&self, c: i8, a: u32, b: u32, e: Exp) -> Self {
        let g = a + b;
        if g == 0 {
            let mut s = self.map(|s| {
                let mut t = s.clone();
                t.mul_binomial(c, e);
                t
            });
            s.comps.retain(|_, x| !x.is_zero());
            s.order = self.order + e.min(Exp::zero());
            s.tail = if e.is_negative() { self.tail.shift(e) } else { self.tail };
            return s;
        }
        let order = self.order + e.min(Exp::zero());
        let mut comps: BTreeMap<(u32, u32), QSeries> = BTreeMap::new();
        for (k, s) in &self.comps {
            comps.insert(*k, s.truncate(order));
        }
        for (k, s) in &self.comps {
            let nk = (k.0 + a, k.1 + b);
            if nk.0 > self.udeg || nk.1 > self.vdeg {
                continue;
            }
            let mut t = s.shift(e);
            if c < 0 {
                t = t.neg();
            }
            let t = t.truncate(order);
            let sum = match comps.remove(&nk) {
                Some(x) => x.add(&t),
                None => t,
            };
            comps.insert(nk, sum);
        }
        comps.retain(|_, s| !s.is_zero());
        let t = self.tail;
        let gq = Exp::from_integer(g as i64);
        let tail = TailBound::new(
            t.a2,
            t.a1 - t.a2 * gq * 2,
            t.a0.min(t.a2 * gq * gq - t.a1 * gq + t.a0 + e),
        );
        ParamSeries { comps, order, tail, poly_deg: self.poly_deg.map(|d| d + g), ..self.clone() }
    }

    /// `self / (1 + c u^a v^b q^e)` expanded as a geometric series in the
    /// parameters. The tail is left as the generic product bound; callers
    /// with sharper knowledge override it.
    pub fn div_param_binomial(&self, c: i8, a: u32, b: u32, e: Exp) -> Result<Self> {
        let g = a + b;
        if g == 0 {
            let mut out = self.clone();
            for s in out.comps.values_mut() {
                s.div_binomial(c, e)?;
            }
            out.order = self.order - e.min(Exp::zero());
            out.tail = if e.is_negative() { self.tail.shift(-e) } else { self.tail };
            out.poly_deg = None;
            return Ok(out);
        }
        if e.is_negative() {
            return Err(Error::Divergent(format!(
                "parameter binomial with q-exponent {} has no bounded expansion",
                fmt_r64(e)
            )));
        }
        // r[d] = s[d] - c q^e r[d - (a,b)], processed in increasing degree.
        let mut comps: BTreeMap<(u32, u32), QSeries> = BTreeMap::new();
        for ua in 0..=self.udeg {
            for vb in 0..=self.vdeg {
                let mut cur = self.comps.get(&(ua, vb)).cloned();
                if ua >= a && vb >= b {
                    if let Some(prev) = comps.get(&(ua - a, vb - b)) {
                        let mut t = prev.shift(e);
                        if c > 0 {
                            t = t.neg();
                        }
                        let t = t.truncate(self.order);
                        cur = Some(match cur {
                            Some(x) => x.add(&t),
                            None => t,
                        });
                    }
                }
                if let Some(x) = cur {
                    if !x.is_zero() {
                        comps.insert((ua, vb), x);
                    }
                }
            }
        }
        let inv_tail = TailBound::new(Exp::zero(), e / Exp::from_integer(g as i64), Exp::zero());
        Ok(ParamSeries {
            comps,
            order: self.order,
            tail: self.tail.combine_mul(&inv_tail),
            poly_deg: None,
            ..self.clone()
        })
    }

    pub fn truncate(&self, order: Exp) -> Self {
        let mut p = self.map(|s| s.truncate(order));
        p.order = self.order.min(order);
        p.comps.retain(|_, s| !s.is_zero());
        p
    }

    /// Restricts to caps no larger than the current ones.
    pub fn with_caps(&self, udeg: u32, vdeg: u32) -> Self {
        let mut p = self.clone();
        p.udeg = if self.udeg == 0 { 0 } else { udeg.min(self.udeg) };
        p.vdeg = if self.vdeg == 0 { 0 } else { vdeg.min(self.vdeg) };
        p.comps.retain(|k, _| k.0 <= p.udeg && k.1 <= p.vdeg);
        p
    }

    /// Order up to which [`Self::substitute`] is exact for `u = q^α`, `v = q^β`.
    pub fn substitution_order(&self, alpha: Exp, beta: Exp) -> Result<Exp> {
        let zero = Exp::zero();
        let retained = self.order
            + Exp::from_integer(self.udeg as i64) * alpha.min(zero)
            + Exp::from_integer(self.vdeg as i64) * beta.min(zero);
        let used: Vec<(u32, Exp)> = [(self.udeg, alpha), (self.vdeg, beta)]
            .into_iter()
            .filter(|(cap, _)| *cap > 0)
            .collect();
        let Some(kmin) = used.iter().map(|(cap, _)| *cap).min() else {
            return Ok(retained);
        };
        if self.poly_deg.is_some_and(|g| g <= kmin) {
            return Ok(retained);
        }
        let slope = used.iter().map(|(_, x)| *x).min().unwrap();
        let dropped = self.tail.min_from(kmin as i64 + 1, slope).ok_or_else(|| {
            Error::UnboundedSubstitution(format!(
                "tail {}k^2 + {}k + {} with slope {}",
                fmt_r64(self.tail.a2),
                fmt_r64(self.tail.a1),
                fmt_r64(self.tail.a0),
                fmt_r64(slope)
            ))
        })?;
        Ok(retained.min(dropped))
    }

    /// Substitutes `u = q^α`, `v = q^β`; the result carries the induced exact order.
    pub fn substitute(&self, alpha: Exp, beta: Exp) -> Result<QSeries> {
        let order = self.substitution_order(alpha, beta)?;
        let mut acc = QSeries::zero(order);
        for ((a, b), s) in &self.comps {
            let e = alpha * Exp::from_integer(*a as i64) + beta * Exp::from_integer(*b as i64);
            acc = acc.add(&s.shift(e).truncate(order));
        }
        Ok(acc.truncate(order))
    }

    /// Coefficient-wise comparison below `n`, scanning monomials in order.
    pub fn eq_to_order(&self, o: &Self, n: Exp) -> Result<ParamComparison> {
        for s in [self, o] {
            if n > s.order {
                return Err(Error::OrderTooLarge { requested: fmt_r64(n), available: fmt_r64(s.order) });
            }
        }
        let udeg = join_cap(self.udeg, o.udeg);
        let vdeg = join_cap(self.vdeg, o.vdeg);
        let mut keys: Vec<(u32, u32)> = self.comps.keys().chain(o.comps.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            if k.0 > udeg || k.1 > vdeg {
                continue;
            }
            let x = self.coeff(k.0, k.1);
            let y = o.coeff(k.0, k.1);
            if let Comparison::Mismatch { exp, lhs, rhs } = x.eq_to_order(&y, n)? {
                return Ok(ParamComparison::Mismatch { u: k.0, v: k.1, exp, lhs, rhs });
            }
        }
        Ok(ParamComparison::Equal)
    }
}
