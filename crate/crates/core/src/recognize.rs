//! Recovery of `c · q^δ · ∏ (1 - q^n)^{a_n}` representations and the grid
//! search over linear terms `b` of a Nahm sum.
//!
//! Fractional exponent lattices are normalised first: with `x = q^{1/den}`
//! the input becomes `c · q^δ · t(x)`, `t(0) = 1`, and `a_n` is read off by
//! peeling one factor `(1 - x^n)` at a time.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nahm::{nahm_sum, NahmQuadruple};
use crate::par;
use crate::poch::{PochFactor, ProductSpec};
use crate::rat::{fmt_big, fmt_r64, int, lcm, Exp};
use crate::series::QSeries;

/// `constant · q^delta · P(x) · ∏_{n ≥ 1} (1 - x^n)^{a_n}` with `x = q^{1/den}`.
///
/// `cofactor` holds the integer coefficients of `P`, lowest first; it is `[1]`
/// for a pure product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentProfile {
    pub delta: Exp,
    pub constant: BigRational,
    pub den: i64,
    /// `a[i]` is `a_{i+1}`.
    pub a: Vec<i64>,
    pub cofactor: Vec<i64>,
    /// Truncation order (in `q`) up to which the profile reproduces the input.
    pub order: Exp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Period {
    pub period: usize,
    /// First `n` from which `a_n = a_{n + period}` holds throughout the scan.
    pub offset: usize,
    /// `residues[r]` is the common value of `a_n` for `n ≡ r (mod period)`.
    pub residues: Vec<i64>,
}

impl ExponentProfile {
    /// `a_n` for `n ≥ 1`, zero past the computed range.
    pub fn a_n(&self, n: usize) -> i64 {
        if n == 0 {
            return 0;
        }
        self.a.get(n - 1).copied().unwrap_or(0)
    }

    pub fn is_pure(&self) -> bool {
        self.cofactor == [1]
    }

    /// Rebuilds the series to `self.order` by direct factor multiplication.
    pub fn rebuild(&self) -> QSeries {
        let len = self.a.len() + 1;
        let mut t = vec![BigInt::zero(); len];
        t[0] = BigInt::one();
        for (i, &a) in self.a.iter().enumerate() {
            apply_factor(&mut t, i + 1, a);
        }
        let mut out = vec![BigInt::zero(); len];
        for (j, c) in self.cofactor.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            for k in 0..len.saturating_sub(j) {
                out[k + j] += &t[k] * c;
            }
        }
        let den = int(self.den);
        let terms = out
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.delta + int(k as i64) / den, BigRational::from_integer(c) * &self.constant));
        QSeries::from_terms(terms, self.order)
    }

    /// The profile as a finite product of `(1 - q^{n/den})^{a_n}` factors, when
    /// the cofactor is trivial.
    pub fn product_spec(&self) -> Option<ProductSpec> {
        if !self.is_pure() {
            return None;
        }
        let den = int(self.den);
        let factors = self
            .a
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0)
            .map(|(i, &a)| PochFactor::finite(1, int(i as i64 + 1) / den, den, 1).pow(a as i32))
            .collect();
        Some(ProductSpec::new(factors).with_const(self.constant.clone()).with_delta(self.delta))
    }
}

/// `t ← t · (1 - x^n)^a` in place, truncated to `t.len()`.
fn apply_factor(t: &mut [BigInt], n: usize, a: i64) {
    let len = t.len();
    if a == 0 || n >= len {
        return;
    }
    if a.unsigned_abs() <= 8 {
        for _ in 0..a.unsigned_abs() {
            if a > 0 {
                for k in (n..len).rev() {
                    let (lo, hi) = t.split_at_mut(k);
                    hi[0] -= &lo[k - n];
                }
            } else {
                for k in n..len {
                    let (lo, hi) = t.split_at_mut(k);
                    hi[0] += &lo[k - n];
                }
            }
        }
        return;
    }
    // Binomial series of (1 - y)^a with y = x^n.
    let terms = (len - 1) / n;
    let mut bin = Vec::with_capacity(terms + 1);
    let mut c = BigInt::one();
    bin.push(c.clone());
    for j in 1..=terms as i64 {
        c = -(c * BigInt::from(a - j + 1)) / BigInt::from(j);
        bin.push(c.clone());
    }
    let src = t.to_vec();
    for k in 0..len {
        let mut acc = BigInt::zero();
        for (j, b) in bin.iter().enumerate() {
            let off = j * n;
            if off > k {
                break;
            }
            acc += b * &src[k - off];
        }
        t[k] = acc;
    }
}

/// Peeling stopped at `a_n` (too large for the bound or for 64 bits).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Unbounded(usize);

/// Peels `t` (with `t[0] = 1`) into exponents `a_1..a_{len-1}`. With a bound,
/// stops at the first `|a_n|` above it.
fn peel(mut t: Vec<BigInt>, bound: Option<i64>) -> std::result::Result<Vec<i64>, Unbounded> {
    let len = t.len();
    let mut a = Vec::with_capacity(len.saturating_sub(1));
    for n in 1..len {
        let an = -t[n].clone();
        let Some(an) = an.to_i64() else { return Err(Unbounded(n)) };
        if bound.is_some_and(|b| an.abs() > b) {
            return Err(Unbounded(n));
        }
        apply_factor(&mut t, n, -an);
        debug_assert!(t[n].is_zero());
        a.push(an);
    }
    Ok(a)
}

/// Normalised coefficients `u[k]` of `q^{delta + k/den}` with `u[0] ≠ 0`,
/// keeping at most `max_n + 1` of them.
struct Normalized {
    delta: Exp,
    den: i64,
    u: Vec<BigRational>,
    order: Exp,
}

fn normalize(s: &QSeries, max_n: usize) -> Result<Normalized> {
    let terms = s.terms();
    let Some((delta, _)) = terms.first().cloned() else { return Err(Error::ZeroLeadingTerm) };
    let den = terms.iter().fold(1i64, |d, (e, _)| lcm(d, *(*e - delta).denom()));
    let den_r = int(den);
    // Keys k with delta + k/den < order.
    let avail = ((s.order() - delta) * den_r).ceil().to_integer().max(1) as usize;
    let len = avail.min(max_n + 1);
    let mut u = vec![BigRational::zero(); len];
    for (e, c) in terms {
        let k = ((e - delta) * den_r).to_integer() as usize;
        if k < len {
            u[k] = c;
        }
    }
    let order = delta + int(len as i64) / den_r;
    Ok(Normalized { delta, den, u, order })
}

/// Converts `u / u[0]` to integers; the first non-integral entry is the first
/// non-integral exponent.
fn unit_integral(u: &[BigRational]) -> Result<(BigRational, Vec<BigInt>)> {
    let c = u[0].clone();
    let mut t = Vec::with_capacity(u.len());
    for (k, x) in u.iter().enumerate() {
        let y = x / &c;
        if !y.is_integer() {
            return Err(Error::NonIntegralExponent { n: k, value: fmt_big(&(-y)) });
        }
        t.push(y.to_integer());
    }
    Ok((c, t))
}

/// Exponent profile of `s` using at most `max_n` factors.
pub fn extract_profile(s: &QSeries, max_n: usize) -> Result<ExponentProfile> {
    let nz = normalize(s, max_n)?;
    let (constant, t) = unit_integral(&nz.u)?;
    let a = peel(t, None).map_err(|Unbounded(n)| Error::WindowOverflow(format!("a_{n} does not fit in 64 bits")))?;
    Ok(ExponentProfile { delta: nz.delta, constant, den: nz.den, a, cofactor: vec![1], order: nz.order })
}

/// Smallest `p ≤ len / min_repeats` such that `a_n` is `p`-periodic from some
/// offset in the first half of the profile, with at least `min_repeats` full
/// periods observed.
pub fn detect_period(profile: &ExponentProfile, min_repeats: usize) -> Option<Period> {
    let a = &profile.a;
    let len = a.len();
    let min_repeats = min_repeats.max(1);
    for p in 1..=len / min_repeats {
        // Last index (1-based n) where a_n != a_{n+p}.
        let last_bad = (1..=len - p).rev().find(|&n| a[n - 1] != a[n + p - 1]);
        let offset = last_bad.map_or(1, |n| n + 1);
        if len + 1 - offset < min_repeats * p || offset > len / 2 + 1 {
            continue;
        }
        let residues = (0..p)
            .map(|r| {
                let n = (offset..offset + p).find(|n| n % p == r).unwrap();
                a[n - 1]
            })
            .collect();
        return Some(Period { period: p, offset, residues });
    }
    None
}

#[derive(Clone, Copy, Debug)]
pub struct RecognizeConfig {
    /// Largest `|a_n|` accepted as bounded.
    pub max_exp: i64,
    pub min_repeats: usize,
    /// Largest degree of the polynomial cofactor tried; `0` disables it.
    pub cofactor_degree: usize,
    pub max_n: usize,
}

impl Default for RecognizeConfig {
    fn default() -> Self {
        RecognizeConfig { max_exp: 4, min_repeats: 3, cofactor_degree: 4, max_n: usize::MAX - 1 }
    }
}

/// Candidate cofactors, in search order: `P = 1`, then by degree. `P(0)` is 1
/// or 2, inner coefficients lie in `{0,1,2}`, the top one in `{1,2}`, and
/// polynomials with a common factor are skipped.
pub fn cofactor_candidates(max_degree: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![1]];
    for deg in 1..=max_degree {
        let inner = 3usize.pow(deg as u32 - 1);
        for p0 in [1, 2] {
            for top in [1, 2] {
                for code in 0..inner {
                    let mut p = vec![p0];
                    let mut c = code;
                    for _ in 1..deg {
                        p.push((c % 3) as i64);
                        c /= 3;
                    }
                    p.push(top);
                    if p.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1 {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Incremental peeling of `u / P` through the logarithmic derivative: with
/// `t = g / g_0 = ∏ (1 - x^n)^{a_n}` and `x t'/t = Σ c_k x^k`,
/// `Σ_{d | k} d a_d = -c_k`. Each step costs `O(k)`, so a candidate that goes
/// non-integral or exceeds the bound is discarded after a few coefficients.
fn peel_cofactor(u: &[BigRational], p: &[i64], bound: i64) -> Option<(BigRational, Vec<i64>)> {
    let p0 = BigRational::from_integer(p[0].into());
    let g0 = &u[0] / &p0;
    let mut g: Vec<BigRational> = vec![g0.clone()];
    let mut t: Vec<BigInt> = vec![BigInt::one()];
    let mut c: Vec<BigInt> = vec![BigInt::zero()];
    let mut a: Vec<i64> = Vec::with_capacity(u.len());
    for k in 1..u.len() {
        let mut acc = u[k].clone();
        for (j, &pj) in p.iter().enumerate().skip(1) {
            if pj != 0 && j <= k {
                acc -= &g[k - j] * BigRational::from_integer(pj.into());
            }
        }
        let gk = acc / &p0;
        let tk = &gk / &g0;
        if !tk.is_integer() {
            return None;
        }
        g.push(gk);
        t.push(tk.to_integer());
        let mut ck = BigInt::from(k) * &t[k];
        for j in 1..k {
            ck -= &c[j] * &t[k - j];
        }
        let mut rest = -&ck;
        for d in 1..k {
            if k % d == 0 {
                rest -= BigInt::from(d as i64 * a[d - 1]);
            }
        }
        c.push(ck);
        let (q, r) = rest.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        let ak = q.to_i64().filter(|x| x.abs() <= bound)?;
        a.push(ak);
    }
    Some((g0, a))
}

/// Looks for a bounded, eventually periodic profile of `s`, trying the
/// cofactors of [`cofactor_candidates`] in order.
pub fn recognize(s: &QSeries, cfg: &RecognizeConfig) -> Result<Option<(ExponentProfile, Period)>> {
    let nz = normalize(s, cfg.max_n)?;
    for p in cofactor_candidates(cfg.cofactor_degree) {
        let Some((constant, a)) = peel_cofactor(&nz.u, &p, cfg.max_exp) else { continue };
        let prof = ExponentProfile { delta: nz.delta, constant, den: nz.den, a, cofactor: p, order: nz.order };
        if let Some(per) = detect_period(&prof, cfg.min_repeats) {
            return Ok(Some((prof, per)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct HuntHit {
    pub b: Vec<Exp>,
    pub profile: ExponentProfile,
    pub period: Period,
    pub order_checked: Exp,
}

/// One JSON row of a hunt report.
#[derive(Clone, Debug, Serialize)]
pub struct HuntRow {
    pub b: Vec<String>,
    pub delta: String,
    #[serde(rename = "const")]
    pub constant: String,
    pub period: usize,
    pub residue_exponents: Vec<i64>,
    pub order_checked: String,
    pub offset: usize,
    pub den: i64,
    pub cofactor: Vec<i64>,
}

impl HuntHit {
    pub fn row(&self) -> HuntRow {
        HuntRow {
            b: self.b.iter().map(|x| fmt_r64(*x)).collect(),
            delta: fmt_r64(self.profile.delta),
            constant: fmt_big(&self.profile.constant),
            period: self.period.period,
            residue_exponents: self.period.residues.clone(),
            order_checked: fmt_r64(self.order_checked),
            offset: self.period.offset,
            den: self.profile.den,
            cofactor: self.profile.cofactor.clone(),
        }
    }
}

/// Evaluates `f_{A,b,0,d}` to `order` for every `b` in `grid` and keeps the
/// points whose series is recognised. Hits come back in grid order.
pub fn hunt(a: &[Vec<Exp>], d: &[i64], grid: &[Vec<Exp>], order: Exp, cfg: &RecognizeConfig) -> Result<Vec<HuntHit>> {
    let results = par::map(grid, |b| -> Result<Option<HuntHit>> {
        let quad = NahmQuadruple::new(a.to_vec(), b.clone(), Exp::zero(), d.to_vec());
        let s = nahm_sum(&quad, &[], order)?;
        Ok(recognize(&s, cfg)?.map(|(profile, period)| HuntHit {
            b: b.clone(),
            order_checked: profile.order,
            profile,
            period,
        }))
    });
    let mut hits = Vec::new();
    for r in results {
        if let Some(h) = r? {
            hits.push(h);
        }
    }
    Ok(hits)
}

/// The grid `{(x/2, y) : x ∈ xs, y ∈ ys}`.
pub fn half_grid(xs: std::ops::RangeInclusive<i64>, ys: std::ops::RangeInclusive<i64>) -> Vec<Vec<Exp>> {
    let mut g = Vec::new();
    for x in xs {
        for y in ys.clone() {
            g.push(vec![Exp::new(x, 2), int(y)]);
        }
    }
    g
}
