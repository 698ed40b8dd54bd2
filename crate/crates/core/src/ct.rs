//! Constant terms in an auxiliary variable `z`.
//!
//! Integrands are products of [`ZFactor`]s. Each factor expands as a Laurent
//! series in `z` whose `z^w` coefficient is a `q`-series of known valuation
//! `φ(w)`. When every factor grows at least linearly in `|w|` the window of
//! relevant `w` is finite and the product is formed directly. One factor
//! `1/(c q^a z^s; q^m)_∞` with `a ≤ 0` (growth-free or decreasing) is allowed:
//! its coefficients are paired against the rest of the product, with the range
//! of the pairing fixed by a quadratic lower bound on the rest.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poch::{PochFactor, ProductSpec};
use crate::rat::{big, fmt_r64, int, Exp};
use crate::series::QSeries;

/// Finite Laurent polynomial in `z` with `q`-series coefficients.
#[derive(Clone, Debug)]
pub struct ZLaurent {
    terms: BTreeMap<i64, QSeries>,
    order: Exp,
}

impl ZLaurent {
    pub fn new(terms: BTreeMap<i64, QSeries>, order: Exp) -> Self {
        let terms = terms
            .into_iter()
            .map(|(w, s)| (w, s.truncate(order)))
            .filter(|(_, s)| !s.is_zero())
            .collect();
        ZLaurent { terms, order }
    }

    pub fn order(&self) -> Exp {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<i64, QSeries> {
        &self.terms
    }

    /// Retained window `[w_min, w_max]`, if any term survives.
    pub fn zrange(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn coeff(&self, w: i64) -> QSeries {
        self.terms.get(&w).cloned().unwrap_or_else(|| QSeries::zero(self.order))
    }
}

/// Product truncated at the smaller order.
pub fn z_mul(x: &ZLaurent, y: &ZLaurent) -> ZLaurent {
    let order = x.order.min(y.order);
    let mut out: BTreeMap<i64, QSeries> = BTreeMap::new();
    for (wx, sx) in &x.terms {
        for (wy, sy) in &y.terms {
            let p = sx.mul(sy).truncate(order);
            if p.is_zero() {
                continue;
            }
            let e = out.entry(wx + wy).or_insert_with(|| QSeries::zero(order));
            *e = e.add(&p);
        }
    }
    ZLaurent::new(out, order)
}

pub fn constant_term(x: &ZLaurent) -> QSeries {
    x.coeff(0)
}

/// One factor of an integrand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZFactor {
    /// `(sign q^a z^zpow; q^m)_∞ ^ pow` with `zpow, pow ∈ {±1}`.
    Poch { sign: i8, zpow: i8, a: Exp, m: Exp, pow: i8 },
    /// `Σ_k sign^k q^{a k² + b k} z^{zpow·k}`.
    Theta { a: Exp, b: Exp, sign: i8, zpow: i8 },
}

/// Lower bound `c w² + l w + k` on the valuation of the `z^w` coefficient,
/// plus `p|w|` for one-sided linear factors.
#[derive(Clone, Copy, Debug)]
struct Growth {
    c: Exp,
    l: Exp,
    p: Exp,
    k: Exp,
}

impl ZFactor {
    /// `(sign q^a z^zpow; q^m)_∞`.
    pub fn poch(sign: i8, zpow: i8, a: Exp, m: Exp) -> Self {
        ZFactor::Poch { sign, zpow, a, m, pow: 1 }
    }

    /// `1/(sign q^a z^zpow; q^m)_∞`.
    pub fn inv_poch(sign: i8, zpow: i8, a: Exp, m: Exp) -> Self {
        ZFactor::Poch { sign, zpow, a, m, pow: -1 }
    }

    /// `(q^m, -s q^{m/2} z, -s q^{m/2}/z; q^m)_∞ = Σ_k s^k q^{m k²/2} z^k`.
    pub fn triple(m: Exp, sign: i8) -> Self {
        ZFactor::Theta { a: m / 2, b: Exp::zero(), sign, zpow: 1 }
    }

    /// True for the growth-free or decreasing inverse symbol.
    fn is_flat(&self) -> bool {
        matches!(self, ZFactor::Poch { pow: -1, a, .. } if !a.is_positive())
    }

    fn validate(&self) -> Result<()> {
        match self {
            ZFactor::Poch { sign, zpow, m, pow, .. } => {
                if sign.abs() != 1 || zpow.abs() != 1 || pow.abs() != 1 || !m.is_positive() {
                    return Err(Error::Dimension("z-Pochhammer needs unit sign, z-power, power and m > 0".into()));
                }
            }
            ZFactor::Theta { a, sign, zpow, .. } => {
                if !a.is_positive() || sign.abs() != 1 || zpow.abs() != 1 {
                    return Err(Error::Dimension("theta kernel needs a > 0 and unit sign and z-power".into()));
                }
            }
        }
        Ok(())
    }

    fn growth(&self) -> Growth {
        let z = Exp::zero();
        match *self {
            ZFactor::Poch { zpow, a, m, pow: 1, .. } => {
                // j = zpow·w: m j(j-1)/2 + a j
                Growth { c: m / 2, l: (a - m / 2) * int(zpow as i64), p: z, k: z }
            }
            ZFactor::Poch { a, .. } => Growth { c: z, l: z, p: a, k: z },
            ZFactor::Theta { a, b, zpow, .. } => Growth { c: a, l: b * int(zpow as i64), p: z, k: z },
        }
    }

    /// Exact valuation of the `z^w` coefficient, `None` off the support.
    fn val(&self, w: i64) -> Option<Exp> {
        match *self {
            ZFactor::Poch { zpow, a, m, pow, .. } => {
                let j = w * zpow as i64;
                if j < 0 {
                    return None;
                }
                let jj = int(j);
                Some(if pow > 0 { m * jj * (jj - 1) / 2 + a * jj } else { a * jj })
            }
            ZFactor::Theta { a, b, zpow, .. } => {
                let k = int(w * zpow as i64);
                Some(a * k * k + b * k)
            }
        }
    }

    /// Minimum valuation over all `w` (nonpositive part only).
    fn floor(&self) -> Exp {
        let g = self.growth();
        if g.c.is_zero() {
            return Exp::zero();
        }
        let v = -g.l / (g.c * 2);
        let cands = [v.floor().to_integer(), v.ceil().to_integer(), 0];
        cands
            .iter()
            .filter_map(|&w| self.val(w))
            .min()
            .unwrap_or_else(Exp::zero)
            .min(Exp::zero())
    }

    /// The `z^w` coefficient exact to `order`.
    fn coeff(&self, w: i64, order: Exp) -> Result<QSeries> {
        let Some(v) = self.val(w) else {
            return Ok(QSeries::zero(order));
        };
        match *self {
            ZFactor::Poch { sign, zpow, m, pow, .. } => {
                let j = (w * zpow as i64) as u32;
                // numerator: (-sign)^j; inverse: sign^j
                let neg = if pow > 0 { sign > 0 } else { sign < 0 };
                let c = if neg && j % 2 == 1 { big(-1) } else { big(1) };
                let den = PochFactor { sign: 1, a: m, m, len: Some(j), pow: -1 };
                ProductSpec::new(vec![den]).with_delta(v).with_const(c).eval(order)
            }
            ZFactor::Theta { sign, zpow, .. } => {
                let k = w * zpow as i64;
                let c = if sign < 0 && k.rem_euclid(2) == 1 { big(-1) } else { big(1) };
                Ok(QSeries::monomial(v, c, order))
            }
        }
    }

    /// Every `w` whose coefficient has valuation `< order`.
    fn window(&self, order: Exp) -> Result<Vec<i64>> {
        let g = self.growth();
        if g.c.is_zero() && !g.p.is_positive() {
            return Err(Error::WindowOverflow(format!("factor {self:?} does not grow in |w|")));
        }
        let mut out = Vec::new();
        for dir in [1i64, -1] {
            let mut w = if dir > 0 { 0 } else { -1 };
            loop {
                match self.val(w) {
                    Some(v) if v < order => out.push(w),
                    Some(_) => {
                        // beyond the vertex the valuation only grows
                        let vertex = if g.c.is_zero() { Exp::zero() } else { -g.l / (g.c * 2) };
                        if (dir > 0 && int(w) >= vertex) || (dir < 0 && int(w) <= vertex) {
                            break;
                        }
                    }
                    None => break,
                }
                w += dir;
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// Expands one factor exactly to `order`, keeping every relevant `z^w`.
pub fn z_from_factor(f: &ZFactor, order: Exp) -> Result<ZLaurent> {
    f.validate()?;
    let mut terms = BTreeMap::new();
    for w in f.window(order)? {
        terms.insert(w, f.coeff(w, order)?);
    }
    Ok(ZLaurent::new(terms, order))
}

/// `(sign q^a z^zpow; q^m)_∞ ^ pow` as a z-Laurent series.
pub fn z_from_poch(sign: i8, zpow: i8, a: Exp, m: Exp, pow: i8, order: Exp) -> Result<ZLaurent> {
    z_from_factor(&ZFactor::Poch { sign, zpow, a, m, pow }, order)
}

/// `Σ_k sign^k q^{a k² + b k} z^{zpow k}`.
pub fn z_from_bilateral(a: Exp, b: Exp, sign: i8, zpow: i8, order: Exp) -> Result<ZLaurent> {
    z_from_factor(&ZFactor::Theta { a, b, sign, zpow }, order)
}

/// Quadratic-in-`|w|` lower bound `C w² + L |w| + K` for a product of
/// factors, valid for every `w`.
fn product_bound(factors: &[ZFactor]) -> (Exp, Exp, Exp) {
    let gs: Vec<Growth> = factors.iter().map(ZFactor::growth).collect();
    // ψ_i(w) = c w² + e |w| + k with e = p - |l|
    let es: Vec<Exp> = gs.iter().map(|g| g.p - g.l.abs()).collect();
    if gs.iter().all(|g| g.c.is_positive()) {
        // c x² + e x ≥ (c/2) x² - max(0,-e)²/(2c); Σ (c_i/2) w_i² ≥ w² / Σ 2/c_i
        let inv: Exp = gs.iter().map(|g| int(2) / g.c).sum();
        let k: Exp = gs
            .iter()
            .zip(&es)
            .map(|(g, e)| {
                let neg = (-*e).max(Exp::zero());
                g.k - neg * neg / (g.c * 2)
            })
            .sum();
        return (Exp::one() / inv, Exp::zero(), k);
    }
    // Linear bound: t = smallest slope among the linear factors.
    let t = gs.iter().zip(&es).filter(|(g, _)| g.c.is_zero()).map(|(_, e)| *e).min().unwrap();
    let k: Exp = gs
        .iter()
        .zip(&es)
        .map(|(g, e)| {
            if g.c.is_zero() {
                g.k
            } else {
                // c x² + e x ≥ t x - max(0, t - e)²/(4c)
                let d = (t - *e).max(Exp::zero());
                g.k - d * d / (g.c * 4)
            }
        })
        .sum();
    (Exp::zero(), t, k)
}

fn product_of(factors: &[ZFactor], order: Exp) -> Result<ZLaurent> {
    let neg: Exp = factors.iter().map(ZFactor::floor).sum();
    let work = order - neg;
    let mut acc = ZLaurent::new(BTreeMap::from([(0, QSeries::one(work))]), work);
    for f in factors {
        acc = z_mul(&acc, &z_from_factor(f, work)?);
    }
    Ok(ZLaurent::new(acc.terms, order))
}

/// Constant term of `∏ factors`, exact to `order`. `slack ≥ 1` enlarges every
/// window and working order; results must not depend on it.
pub fn integrand_constant_term(factors: &[ZFactor], order: Exp, slack: i64) -> Result<QSeries> {
    for f in factors {
        f.validate()?;
    }
    let slack = slack.max(1);
    let (flat, rest): (Vec<ZFactor>, Vec<ZFactor>) = factors.iter().cloned().partition(ZFactor::is_flat);
    let extra = int(slack - 1) * order.abs().max(Exp::one());
    match flat.len() {
        0 => Ok(constant_term(&product_of(&rest, order + extra)?).truncate(order)),
        1 => {
            let ZFactor::Poch { zpow, a, .. } = flat[0] else { unreachable!() };
            if rest.is_empty() {
                return Err(Error::WindowOverflow("lone flat factor has no finite constant term".into()));
            }
            let (c, l, k) = product_bound(&rest);
            // j-th flat coefficient has valuation a·j and meets z^{-zpow j} of the rest.
            if c.is_zero() && l + a <= Exp::zero() {
                return Err(Error::WindowOverflow(format!(
                    "rest of the integrand grows with slope {} against {}",
                    fmt_r64(l),
                    fmt_r64(a)
                )));
            }
            let f = |j: i64| {
                let jj = int(j);
                a * jj + c * jj * jj + l * jj + k
            };
            let vertex = if c.is_zero() { Exp::zero() } else { -(a + l) / (c * 2) };
            let mut jmax = 0i64;
            while f(jmax + 1) < order || int(jmax + 1) < vertex {
                jmax += 1;
            }
            let jmax = jmax * slack;
            let rest_order = order - a * int(jmax) + extra;
            let b = product_of(&rest, rest_order)?;
            let mut acc = QSeries::zero(order);
            let bneg: Exp = rest.iter().map(ZFactor::floor).sum();
            for j in 0..=jmax {
                let bj = b.coeff(-(zpow as i64) * j);
                if bj.is_zero() {
                    continue;
                }
                let lj = flat[0].coeff(zpow as i64 * j, order - bneg)?;
                acc = acc.add(&lj.mul(&bj).truncate(order));
            }
            Ok(acc.truncate(order))
        }
        _ => Err(Error::WindowOverflow("more than one growth-free factor".into())),
    }
}

/// The integrand `(-q v/z, -q z, -q/z, q²; q²)_∞ / (u z; q)_∞` at `u = q^α`, `v = q^β`.
pub fn example4_integrand(alpha: Exp, beta: Exp) -> Vec<ZFactor> {
    vec![
        ZFactor::poch(-1, -1, Exp::one() + beta, int(2)),
        ZFactor::triple(int(2), 1),
        ZFactor::inv_poch(1, 1, alpha, int(1)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nahm::{nahm_sum, NahmQuadruple};

    #[test]
    fn euler_kernel_leading_terms() {
        let x = z_from_poch(-1, 1, int(1), int(2), 1, int(30)).unwrap();
        for w in 0..5 {
            let s = x.coeff(w);
            assert_eq!(s.valuation(), Some(int(w * w)));
            assert_eq!(s.coeff(int(w * w)), big(1));
        }
        assert!(x.coeff(-1).is_zero());
    }

    #[test]
    fn orthogonality() {
        let theta = z_from_bilateral(int(1), int(0), 1, -1, int(50)).unwrap();
        for j in 0..5 {
            let zj = ZLaurent::new(BTreeMap::from([(j, QSeries::one(int(50)))]), int(50));
            let ct = constant_term(&z_mul(&theta, &zj));
            assert_eq!(ct, QSeries::monomial(int(j * j), big(1), int(50)));
        }
        let empty = ZLaurent::new(BTreeMap::from([(1, QSeries::one(int(5)))]), int(5));
        assert!(constant_term(&empty).is_zero());
    }

    #[test]
    fn polynomial_square() {
        let p = ZLaurent::new((-1..=1).map(|w| (w, QSeries::one(int(3)))).collect(), int(3));
        assert_eq!(constant_term(&z_mul(&p, &p)).coeff(int(0)), big(3));
    }

    #[test]
    fn flat_factor_alone_rejected() {
        assert!(z_from_poch(1, 1, int(0), int(1), -1, int(5)).is_err());
    }

    #[test]
    fn example4_integrands_match_nahm_sums() {
        let a = NahmQuadruple::from_ints(&[&[2, -1], &[-2, 2]], &[0, 0], &[1, 2]);
        let n = int(30);
        for (alpha, beta) in [(0, 0), (-1, 2), (1, 0)] {
            let ct = integrand_constant_term(&example4_integrand(int(alpha), int(beta)), n, 1).unwrap();
            let lhs = nahm_sum(&a.with_b(vec![int(alpha), int(beta)]), &[], n).unwrap();
            assert!(ct.eq_to_order(&lhs, n).unwrap().is_equal(), "case ({alpha},{beta})");
            let wide = integrand_constant_term(&example4_integrand(int(alpha), int(beta)), n, 2).unwrap();
            assert_eq!(wide, ct);
        }
    }
}
