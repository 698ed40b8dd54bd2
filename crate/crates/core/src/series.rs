//! Truncated Puiseux series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] stores coefficients for exponents `k/den` with `k` an
//! integer key. Storage is dense over `[lo, lo + nums.len())` with one shared
//! denominator, which keeps the hot loops (binomial multiply/divide) free of
//! rational normalisation. Every value carries a rational truncation order:
//! coefficients of exponents `>= order` are unknown and never stored.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{ceil_r64, fmt_big, fmt_r64, is_unit, lcm, Exp};

#[derive(Clone, Debug)]
pub struct QSeries {
    den: i64,
    order: Exp,
    lo: i64,
    nums: Vec<BigInt>,
    denom: BigInt,
}

/// Outcome of [`QSeries::eq_to_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Mismatch { exp: Exp, lhs: BigRational, rhs: BigRational },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

/// First key that is not exact: keys `k` with `k/den < order`.
fn key_limit(order: Exp, den: i64) -> i64 {
    ceil_r64(order * den)
}

fn key_of(e: Exp, den: i64) -> Option<i64> {
    let k = e * den;
    k.is_integer().then(|| k.to_integer())
}

impl QSeries {
    pub fn zero(order: Exp) -> Self {
        QSeries { den: 1, order, lo: 0, nums: Vec::new(), denom: BigInt::one() }
    }

    pub fn one(order: Exp) -> Self {
        Self::monomial(Exp::zero(), BigRational::one(), order)
    }

    pub fn constant(c: BigRational, order: Exp) -> Self {
        Self::monomial(Exp::zero(), c, order)
    }

    /// `c * q^e` truncated at `order`.
    pub fn monomial(e: Exp, c: BigRational, order: Exp) -> Self {
        let den = *e.denom();
        if e >= order || c.is_zero() {
            let mut z = Self::zero(order);
            z.den = den;
            return z;
        }
        QSeries {
            den,
            order,
            lo: *e.numer(),
            nums: vec![c.numer().clone()],
            denom: c.denom().clone(),
        }
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(terms: I, order: Exp) -> Self
    where
        I: IntoIterator<Item = (Exp, BigRational)>,
    {
        let terms: Vec<(Exp, BigRational)> = terms.into_iter().filter(|(e, _)| *e < order).collect();
        let den = terms.iter().fold(1i64, |d, (e, _)| lcm(d, *e.denom()));
        let common = terms.iter().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
        let keys: Vec<i64> = terms.iter().map(|(e, _)| (*e * den).to_integer()).collect();
        let Some(&lo) = keys.iter().min() else {
            let mut z = Self::zero(order);
            z.den = den;
            return z;
        };
        let hi = *keys.iter().max().unwrap();
        let mut nums = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (k, (_, c)) in keys.iter().zip(&terms) {
            nums[(k - lo) as usize] += c.numer() * (&common / c.denom());
        }
        let mut s = QSeries { den, order, lo, nums, denom: common };
        s.normalize();
        s
    }

    /// Integer coefficients `coeffs[i]` at exponent `(lo + i)/den`.
    pub fn from_ints(den: i64, lo: i64, coeffs: Vec<BigInt>, order: Exp) -> Self {
        let mut s = QSeries { den, order, lo, nums: coeffs, denom: BigInt::one() };
        s.normalize();
        s
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn order(&self) -> Exp {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.nums.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Exp> {
        (!self.nums.is_empty()).then(|| Exp::new(self.lo, self.den))
    }

    /// Valuation, or the order for a series that vanishes to its order.
    pub fn val_or_order(&self) -> Exp {
        self.valuation().unwrap_or(self.order)
    }

    /// Highest exponent currently stored with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<Exp> {
        (!self.nums.is_empty()).then(|| Exp::new(self.lo + self.nums.len() as i64 - 1, self.den))
    }

    pub fn leading(&self) -> Option<(Exp, BigRational)> {
        self.valuation().map(|e| (e, self.ratio(&self.nums[0])))
    }

    fn ratio(&self, n: &BigInt) -> BigRational {
        BigRational::new(n.clone(), self.denom.clone())
    }

    pub fn coeff(&self, e: Exp) -> BigRational {
        match key_of(e, self.den) {
            Some(k) if k >= self.lo && k < self.lo + self.nums.len() as i64 => {
                self.ratio(&self.nums[(k - self.lo) as usize])
            }
            _ => BigRational::zero(),
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> Vec<(Exp, BigRational)> {
        self.nums
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_zero())
            .map(|(i, n)| (Exp::new(self.lo + i as i64, self.den), self.ratio(n)))
            .collect()
    }

    /// Common denominator of all coefficients.
    pub fn coeff_denom(&self) -> &BigInt {
        &self.denom
    }

    /// Nonzero terms as `(exponent, numerator)` over [`Self::coeff_denom`].
    pub fn numer_terms(&self) -> impl Iterator<Item = (Exp, &BigInt)> + '_ {
        self.nums
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_zero())
            .map(move |(i, n)| (Exp::new(self.lo + i as i64, self.den), n))
    }

    fn limit(&self) -> i64 {
        key_limit(self.order, self.den)
    }

    /// Drops out-of-range keys, trims zeros and reduces the common denominator.
    fn normalize(&mut self) {
        let lim = self.limit();
        let keep = (lim - self.lo).clamp(0, self.nums.len() as i64) as usize;
        self.nums.truncate(keep);
        while self.nums.last().is_some_and(|n| n.is_zero()) {
            self.nums.pop();
        }
        let lead = self.nums.iter().position(|n| !n.is_zero()).unwrap_or(self.nums.len());
        if lead > 0 {
            self.nums.drain(..lead);
            self.lo += lead as i64;
        }
        if self.nums.is_empty() {
            self.lo = 0;
            self.denom = BigInt::one();
            return;
        }
        if self.denom.is_negative() {
            self.denom = -std::mem::take(&mut self.denom);
            for n in &mut self.nums {
                *n = -std::mem::take(n);
            }
        }
        if !self.denom.is_one() {
            let mut g = self.denom.clone();
            for n in &self.nums {
                if g.is_one() {
                    break;
                }
                if !n.is_zero() {
                    g = g.gcd(n);
                }
            }
            if !g.is_one() {
                for n in &mut self.nums {
                    *n /= &g;
                }
                self.denom /= &g;
            }
        }
    }

    /// Re-expresses the series over denominator `den`, a multiple of the current one.
    pub fn with_den(&self, den: i64) -> Self {
        assert!(den % self.den == 0, "with_den requires a multiple of the current denominator");
        let f = den / self.den;
        if f == 1 {
            return self.clone();
        }
        let mut nums = Vec::with_capacity(self.nums.len().saturating_sub(1) * f as usize + 1);
        for (i, n) in self.nums.iter().enumerate() {
            if i > 0 {
                nums.extend(std::iter::repeat_with(BigInt::zero).take(f as usize - 1));
            }
            nums.push(n.clone());
        }
        QSeries { den, order: self.order, lo: self.lo * f, nums, denom: self.denom.clone() }
    }

    /// Smallest denominator that still represents every stored exponent.
    pub fn reduce_den(&self) -> Self {
        if self.nums.is_empty() {
            let mut z = self.clone();
            z.den = 1;
            return z;
        }
        let mut g = self.den;
        for (i, n) in self.nums.iter().enumerate() {
            if !n.is_zero() {
                g = g.gcd(&(self.lo + i as i64));
                if g == 1 {
                    return self.clone();
                }
            }
        }
        if g == 1 {
            return self.clone();
        }
        let nums = self.nums.iter().step_by(g as usize).cloned().collect();
        QSeries { den: self.den / g, order: self.order, lo: self.lo / g, nums, denom: self.denom.clone() }
    }

    pub fn truncate(&self, order: Exp) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let mut s = self.clone();
        s.order = order;
        s.normalize();
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for n in &mut s.nums {
            *n = -std::mem::take(n);
        }
        s
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            let mut z = Self::zero(self.order);
            z.den = self.den;
            return z;
        }
        let mut s = self.clone();
        if !r.numer().is_one() {
            for n in &mut s.nums {
                *n *= r.numer();
            }
        }
        s.denom *= r.denom();
        s.normalize();
        s
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Multiplies by `q^e`; the order moves up by `e`.
    pub fn shift(&self, e: Exp) -> Self {
        let den = lcm(self.den, *e.denom());
        let mut s = self.with_den(den);
        s.lo += (e * den).to_integer();
        s.order = self.order + e;
        if s.nums.is_empty() {
            s.lo = 0;
        }
        s
    }

    /// Substitutes `q -> q^k` for a positive rational `k`.
    pub fn dilate(&self, k: Exp) -> Self {
        assert!(k > Exp::zero(), "dilation factor must be positive");
        let (p, r) = (*k.numer(), *k.denom());
        let den = self.den * r;
        let mut nums = Vec::new();
        if !self.nums.is_empty() {
            nums = vec![BigInt::zero(); (self.nums.len() - 1) * p as usize + 1];
            for (i, n) in self.nums.iter().enumerate() {
                nums[i * p as usize] = n.clone();
            }
        }
        QSeries { den, order: self.order * k, lo: self.lo * p, nums, denom: self.denom.clone() }.reduce_den()
    }

    /// Rescales `self` and `other` to a common denominator and coefficient base.
    fn common_parts(&self, other: &Self) -> (i64, BigInt, BigInt, BigInt) {
        let den = lcm(self.den, other.den);
        let l = self.denom.lcm(&other.denom);
        let fs = &l / &self.denom;
        let ft = &l / &other.denom;
        (den, l, fs, ft)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (den, denom, fs, ft) = self.common_parts(other);
        let order = self.order.min(other.order);
        let a = self.with_den(den);
        let b = other.with_den(den);
        let lim = key_limit(order, den);
        let (lo, hi) = match (a.nums.is_empty(), b.nums.is_empty()) {
            (true, true) => {
                let mut z = Self::zero(order);
                z.den = den;
                return z;
            }
            (false, true) => (a.lo, a.lo + a.nums.len() as i64),
            (true, false) => (b.lo, b.lo + b.nums.len() as i64),
            (false, false) => (
                a.lo.min(b.lo),
                (a.lo + a.nums.len() as i64).max(b.lo + b.nums.len() as i64),
            ),
        };
        let hi = hi.min(lim).max(lo);
        let mut nums = vec![BigInt::zero(); (hi - lo) as usize];
        for (src, f) in [(&a, &fs), (&b, &ft)] {
            for (i, n) in src.nums.iter().enumerate() {
                let k = src.lo + i as i64;
                if k >= hi {
                    break;
                }
                if n.is_zero() {
                    continue;
                }
                if f.is_one() {
                    nums[(k - lo) as usize] += n;
                } else {
                    nums[(k - lo) as usize] += n * f;
                }
            }
        }
        let mut s = QSeries { den, order, lo, nums, denom };
        s.normalize();
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; order is `min(N_s + v_t, N_t + v_s)`.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.val_or_order()).min(other.order + self.val_or_order());
        let den = lcm(self.den, other.den);
        if self.nums.is_empty() || other.nums.is_empty() {
            let mut z = Self::zero(order);
            z.den = den;
            return z;
        }
        let a = self.with_den(den);
        let b = other.with_den(den);
        let lo = a.lo + b.lo;
        let lim = key_limit(order, den);
        let len = (lim - lo).clamp(0, (a.nums.len() + b.nums.len() - 1) as i64) as usize;
        let mut nums = vec![BigInt::zero(); len];
        let bnz: Vec<(usize, &BigInt)> = b.nums.iter().enumerate().filter(|(_, n)| !n.is_zero()).collect();
        for (i, x) in a.nums.iter().enumerate() {
            if i >= len {
                break;
            }
            if x.is_zero() {
                continue;
            }
            for &(j, y) in &bnz {
                if i + j >= len {
                    break;
                }
                nums[i + j] += x * y;
            }
        }
        let mut s = QSeries { den, order, lo, nums, denom: &a.denom * &b.denom };
        s.normalize();
        s
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(Exp::from_integer(i64::MAX / 4));
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse; order becomes `N - 2v` for valuation `v`.
    pub fn invert(&self) -> Result<Self> {
        if self.nums.is_empty() {
            return Err(Error::ZeroLeadingTerm);
        }
        let v = Exp::new(self.lo, self.den);
        let order = self.order - v - v;
        let lim = key_limit(order, self.den);
        let len = (lim + self.lo).max(0) as usize;
        let a = &self.nums;
        let a0 = &a[0];
        let mut c: Vec<BigInt> = Vec::with_capacity(len);
        let denom;
        if is_unit(a0) {
            // b_0 = a0, b_k = -a0 * sum_{j>=1} a_j b_{k-j}
            for k in 0..len {
                if k == 0 {
                    c.push(a0.clone());
                    continue;
                }
                let mut acc = BigInt::zero();
                for j in 1..=k.min(a.len() - 1) {
                    if !a[j].is_zero() && !c[k - j].is_zero() {
                        acc += &a[j] * &c[k - j];
                    }
                }
                c.push(if a0.is_positive() { -acc } else { acc });
            }
            denom = BigInt::one();
            let mut s = QSeries {
                den: self.den,
                order,
                lo: -self.lo,
                nums: c.into_iter().map(|x| x * &self.denom).collect(),
                denom,
            };
            s.normalize();
            return Ok(s);
        }
        // General leading coefficient: c_k = b_k * a0^{k+1} stays integral.
        let mut pw = vec![BigInt::one()];
        for k in 0..len {
            if k == 0 {
                c.push(BigInt::one());
                continue;
            }
            while pw.len() < k {
                let next = pw.last().unwrap() * a0;
                pw.push(next);
            }
            let mut acc = BigInt::zero();
            for j in 1..=k.min(a.len() - 1) {
                if !a[j].is_zero() && !c[k - j].is_zero() {
                    acc += &a[j] * &pw[j - 1] * &c[k - j];
                }
            }
            c.push(-acc);
        }
        let m = len.saturating_sub(1);
        while pw.len() < m + 2 {
            let next = pw.last().unwrap() * a0;
            pw.push(next);
        }
        let nums: Vec<BigInt> = c
            .into_iter()
            .enumerate()
            .map(|(k, ck)| ck * &pw[m - k] * &self.denom)
            .collect();
        let mut s = QSeries { den: self.den, order, lo: -self.lo, nums, denom: pw[m + 1].clone() };
        s.normalize();
        Ok(s)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.invert()?))
    }

    /// Compares all coefficients of exponent `< n`.
    pub fn eq_to_order(&self, other: &Self, n: Exp) -> Result<Comparison> {
        for s in [self, other] {
            if n > s.order {
                return Err(Error::OrderTooLarge { requested: fmt_r64(n), available: fmt_r64(s.order) });
            }
        }
        let den = lcm(self.den, other.den);
        let a = self.with_den(den);
        let b = other.with_den(den);
        let lim = key_limit(n, den);
        let start = match (a.nums.is_empty(), b.nums.is_empty()) {
            (true, true) => return Ok(Comparison::Equal),
            (false, true) => a.lo,
            (true, false) => b.lo,
            _ => a.lo.min(b.lo),
        };
        fn get(s: &QSeries, k: i64) -> Option<&BigInt> {
            if k >= s.lo && k < s.lo + s.nums.len() as i64 {
                Some(&s.nums[(k - s.lo) as usize])
            } else {
                None
            }
        }
        let end = (a.lo + a.nums.len() as i64).max(b.lo + b.nums.len() as i64).min(lim);
        for k in start..end {
            let x = get(&a, k);
            let y = get(&b, k);
            let same = match (x, y) {
                (None, None) => true,
                (Some(x), None) => x.is_zero(),
                (None, Some(y)) => y.is_zero(),
                (Some(x), Some(y)) => x * &b.denom == y * &a.denom,
            };
            if !same {
                let e = Exp::new(k, den);
                return Ok(Comparison::Mismatch { exp: e, lhs: a.coeff(e), rhs: b.coeff(e) });
            }
        }
        Ok(Comparison::Equal)
    }

    /// Terms with integer exponents of the given parity (`0` even, `1` odd).
    fn parity_part(&self, parity: i64) -> Result<Self> {
        let s = self.reduce_den();
        if s.den != 1 {
            return Err(Error::NotIntegralLattice(format!("denominator {}", s.den)));
        }
        let mut t = s.clone();
        for (i, n) in t.nums.iter_mut().enumerate() {
            if (s.lo + i as i64).rem_euclid(2) != parity {
                *n = BigInt::zero();
            }
        }
        t.normalize();
        Ok(t)
    }

    pub fn even_part(&self) -> Result<Self> {
        self.parity_part(0)
    }

    pub fn odd_part(&self) -> Result<Self> {
        self.parity_part(1)
    }

    /// Replaces `q^e` by `i^{2e + phase} q^e`, i.e. `q -> -q` on the
    /// half-integer lattice with branch offset `phase`. Fails unless every
    /// resulting coefficient is real.
    pub fn negate_q(&self, phase: i64) -> Result<Self> {
        let mut t = self.clone();
        for (i, n) in t.nums.iter_mut().enumerate() {
            if n.is_zero() {
                continue;
            }
            let k = self.lo + i as i64;
            let two_e = 2 * k;
            if two_e % self.den != 0 {
                return Err(Error::NonRealTwist(fmt_r64(Exp::new(k, self.den))));
            }
            match (two_e / self.den + phase).rem_euclid(4) {
                0 => {}
                2 => *n = -std::mem::take(n),
                _ => return Err(Error::NonRealTwist(fmt_r64(Exp::new(k, self.den)))),
            }
        }
        Ok(t)
    }

    /// Makes room so every key below the limit is addressable.
    fn fill_to_limit(&mut self) {
        let lim = self.limit();
        if self.nums.is_empty() {
            return;
        }
        let want = (lim - self.lo).max(0) as usize;
        if self.nums.len() < want {
            self.nums.resize(want, BigInt::zero());
        }
    }

    /// In place `self *= (1 + c q^e)` with `c = ±1`.
    pub fn mul_binomial(&mut self, c: i8, e: Exp) {
        debug_assert!(c == 1 || c == -1);
        if e.is_zero() {
            if c < 0 {
                *self = QSeries::zero(self.order);
            } else {
                *self = self.scale_int(2);
            }
            return;
        }
        if e < Exp::zero() {
            let t = self.shift(e);
            *self = if c > 0 { self.add(&t) } else { self.sub(&t) };
            return;
        }
        if self.nums.is_empty() {
            return;
        }
        let den = lcm(self.den, *e.denom());
        if den != self.den {
            *self = self.with_den(den);
        }
        let k = (e * den).to_integer() as usize;
        let lim = self.limit();
        let new_len = ((self.nums.len() + k) as i64).min(lim - self.lo).max(0) as usize;
        self.nums.resize(new_len, BigInt::zero());
        for idx in (k..new_len).rev() {
            let (a, b) = self.nums.split_at_mut(idx);
            let src = &a[idx - k];
            if src.is_zero() {
                continue;
            }
            if c > 0 {
                b[0] += src;
            } else {
                b[0] -= src;
            }
        }
        self.normalize();
    }

    /// In place `self /= (1 + c q^e)` with `c = ±1`.
    pub fn div_binomial(&mut self, c: i8, e: Exp) -> Result<()> {
        debug_assert!(c == 1 || c == -1);
        if e.is_zero() {
            if c < 0 {
                return Err(Error::Divergent("division by (1 - 1)".into()));
            }
            *self = self.scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
            return Ok(());
        }
        if e < Exp::zero() {
            // 1/(1 + c q^e) = c q^{-e} / (1 + c q^{-e})
            let mut t = self.shift(-e);
            if c < 0 {
                t = t.neg();
            }
            t.div_binomial(c, -e)?;
            *self = t;
            return Ok(());
        }
        if self.nums.is_empty() {
            return Ok(());
        }
        let den = lcm(self.den, *e.denom());
        if den != self.den {
            *self = self.with_den(den);
        }
        self.fill_to_limit();
        let k = (e * den).to_integer() as usize;
        for idx in k..self.nums.len() {
            let (a, b) = self.nums.split_at_mut(idx);
            let src = &a[idx - k];
            if src.is_zero() {
                continue;
            }
            if c > 0 {
                b[0] -= src;
            } else {
                b[0] += src;
            }
        }
        self.normalize();
        Ok(())
    }

    /// Raises the truncation order without adding information. Only sound
    /// when the caller knows the true series has no further terms.
    pub fn with_order_unchecked(&self, order: Exp) -> Self {
        let mut s = self.clone();
        s.order = order;
        s.normalize();
        s
    }
}

impl PartialEq for QSeries {
    /// Same order and same coefficients.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.terms() == other.terms()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})q^{}", fmt_big(c), fmt_r64(*e))?;
        }
        write!(f, " + O(q^{})", fmt_r64(self.order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{big, int, r64};

    fn poly(cs: &[i64], order: i64) -> QSeries {
        QSeries::from_terms(cs.iter().enumerate().map(|(i, &c)| (int(i as i64), big(c))), int(order))
    }

    fn geometric(order: i64) -> QSeries {
        poly(&vec![1; order as usize], order)
    }

    #[test]
    fn align_lcm_and_min_order() {
        let a = QSeries::monomial(r64(1, 2), big(1), int(5));
        let b = QSeries::monomial(r64(1, 3), big(1), int(5));
        let s = a.add(&b);
        assert_eq!(s.den(), 6);
        assert_eq!(s.coeff(r64(1, 2)), big(1));
        assert_eq!(s.coeff(r64(1, 3)), big(1));
        let c = poly(&[1, 1], 10).add(&QSeries::one(int(5)));
        assert_eq!(c.order(), int(5));
    }

    #[test]
    fn ring_basics() {
        let s = poly(&[1, 1], 20).add(&poly(&[1, -1], 20));
        assert_eq!(s.terms(), vec![(int(0), big(2))]);
        let t = poly(&[1, -1], 20).mul(&geometric(20));
        assert_eq!(t.terms(), vec![(int(0), big(1))]);
        assert_eq!(t.order(), int(20));
        let u = poly(&[1, 1], 20).shift(r64(1, 2));
        assert_eq!(u.den(), 2);
        assert_eq!(u.terms(), vec![(r64(1, 2), big(1)), (r64(3, 2), big(1))]);
        assert_eq!(u.order(), r64(41, 2));
    }

    #[test]
    fn mul_order_rule() {
        let a = poly(&[0, 1], 10); // q + O(q^10)
        let b = poly(&[0, 0, 1], 7); // q^2 + O(q^7)
        assert_eq!(a.mul(&b).order(), int(8));
    }

    #[test]
    fn inverses() {
        let g = poly(&[1, -1], 30).invert().unwrap();
        assert_eq!(g, geometric(30));
        let h = QSeries::constant(big(2), int(10)).invert().unwrap();
        assert_eq!(h.terms(), vec![(int(0), BigRational::new(1.into(), 2.into()))]);
        let s = poly(&[0, 1, -1], 30).invert().unwrap();
        assert_eq!(s.valuation(), Some(int(-1)));
        assert_eq!(s.order(), int(28));
        for e in -1..27 {
            assert_eq!(s.coeff(int(e)), big(1));
        }
        assert_eq!(QSeries::zero(int(4)).invert(), Err(Error::ZeroLeadingTerm));
    }

    #[test]
    fn invert_non_unit_leading() {
        let s = poly(&[3, 5, -7, 2, 0, 1], 25);
        let prod = s.mul(&s.invert().unwrap());
        assert_eq!(prod.terms(), vec![(int(0), big(1))]);
        assert_eq!(prod.order(), int(25));
    }

    #[test]
    fn compare() {
        let a = poly(&[1, 1], 10);
        let b = poly(&[1, 1, 0, 0, 0, 1], 10);
        assert!(a.eq_to_order(&b, int(5)).unwrap().is_equal());
        let c = poly(&[1, 2], 10);
        assert_eq!(
            a.eq_to_order(&c, int(5)).unwrap(),
            Comparison::Mismatch { exp: int(1), lhs: big(1), rhs: big(2) }
        );
        assert!(matches!(a.eq_to_order(&c, int(11)), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn binomial_kernels_match_mul() {
        let s = poly(&[1, 2, 0, -1, 5], 15);
        for (c, e) in [(1i8, int(1)), (-1, int(3)), (1, r64(1, 2)), (-1, int(-2)), (1, int(0))] {
            let f = QSeries::one(int(100)).add(&QSeries::monomial(e, big(c as i64), int(100)));
            let mut t = s.clone();
            t.mul_binomial(c, e);
            assert_eq!(t.eq_to_order(&s.mul(&f), t.order()).unwrap(), Comparison::Equal);
            let mut u = t.clone();
            u.div_binomial(c, e).unwrap();
            let n = u.order().min(s.order());
            assert!(u.eq_to_order(&s, n).unwrap().is_equal(), "c={c} e={e}");
        }
        let mut z = s.clone();
        assert!(z.div_binomial(-1, int(0)).is_err());
    }

    #[test]
    fn dilate_and_parts() {
        let s = poly(&[1, 1, 1, 1], 4).dilate(r64(1, 2));
        assert_eq!(s.den(), 2);
        assert_eq!(s.order(), int(2));
        assert_eq!(s.coeff(r64(3, 2)), big(1));
        let t = poly(&[1, 2, 3, 4, 5], 5);
        assert_eq!(t.even_part().unwrap().terms(), vec![(int(0), big(1)), (int(2), big(3)), (int(4), big(5))]);
        assert_eq!(t.odd_part().unwrap().terms(), vec![(int(1), big(2)), (int(3), big(4))]);
        assert!(QSeries::monomial(r64(1, 2), big(1), int(3)).even_part().is_err());
    }

    #[test]
    fn twist() {
        // q^{1/2} -> i^{1+1} q^{1/2} = -q^{1/2} with phase 1
        let s = QSeries::monomial(r64(1, 2), big(1), int(3)).add(&QSeries::monomial(r64(3, 2), big(1), int(3)));
        let t = s.negate_q(1).unwrap();
        assert_eq!(t.coeff(r64(1, 2)), big(-1));
        assert_eq!(t.coeff(r64(3, 2)), big(1));
        assert!(s.negate_q(0).is_err());
        let u = poly(&[1, 1, 1], 5).negate_q(0).unwrap();
        assert_eq!(u.terms(), vec![(int(0), big(1)), (int(1), big(-1)), (int(2), big(1))]);
    }

    #[test]
    fn display_lists_terms() {
        let s = poly(&[1, 0, -2], 3);
        assert_eq!(s.to_string(), "(1)q^0 + (-2)q^2 + O(q^3)");
    }
}
