//! Naive reference evaluator shared by the integration tests.
//!
//! Everything is a sparse map from `(z, u, v, q-exponent)` to a rational,
//! built by expanding every Pochhammer symbol factor by factor and every
//! lattice sum over a growing box. It deliberately shares no code with the
//! engine beyond the data types it reads, and it tracks no exactness order:
//! callers evaluate with generous headroom and compare only well below it.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nahm_forge::ct::ZFactor;
use nahm_forge::expr::{Expr, PExpr};
use nahm_forge::nahm::{NahmQuadruple, ParamWeights};
use nahm_forge::poch::{ParamPoch, PochFactor, ProductSpec};
use nahm_forge::rat::int;
use nahm_forge::registry::{IdentityRecord, Params, Sides};
use nahm_forge::single::SingleSum;
use nahm_forge::Exp;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Key = (i64, u32, u32, Exp);

#[derive(Clone, Copy, Debug)]
pub struct Box3 {
    /// Terms with `q`-exponent at or above this are dropped.
    pub q: Exp,
    pub u: u32,
    pub v: u32,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sp(pub BTreeMap<Key, BigRational>);

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn e(n: i64) -> Exp {
    Exp::from_integer(n)
}

impl Sp {
    pub fn one() -> Sp {
        Sp::mono(0, 0, 0, e(0), r(1))
    }

    pub fn mono(z: i64, u: u32, v: u32, q: Exp, c: BigRational) -> Sp {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((z, u, v, q), c);
        }
        Sp(m)
    }

    fn put(&mut self, k: Key, c: BigRational, b: &Box3) {
        if k.3 >= b.q || k.1 > b.u || k.2 > b.v {
            return;
        }
        let slot = self.0.entry(k).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn add(&self, o: &Sp, b: &Box3) -> Sp {
        let mut out = self.clone();
        for (k, c) in &o.0 {
            out.put(*k, c.clone(), b);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Sp {
        Sp(self.0.iter().filter(|_| !c.is_zero()).map(|(k, x)| (*k, x * c)).collect())
    }

    pub fn mul(&self, o: &Sp, b: &Box3) -> Sp {
        let mut out = Sp::default();
        for (k1, c1) in &self.0 {
            for (k2, c2) in &o.0 {
                let k = (k1.0 + k2.0, k1.1 + k2.1, k1.2 + k2.2, k1.3 + k2.3);
                out.put(k, c1 * c2, b);
            }
        }
        out
    }

    fn map_keys(&self, f: impl Fn(Key) -> Option<(Key, BigRational)>) -> Sp {
        let mut out = BTreeMap::new();
        for (k, c) in &self.0 {
            if let Some((k2, s)) = f(*k) {
                out.insert(k2, c * s);
            }
        }
        Sp(out)
    }

    pub fn min_q(&self) -> Option<Exp> {
        self.0.keys().map(|k| k.3).min()
    }

    /// `1 / self`, requiring a pure `q`-monomial as the lowest term and a
    /// remainder that is small in `q`, `u` or `v`.
    pub fn inv(&self, b: &Box3) -> Sp {
        let lead = self
            .0
            .iter()
            .filter(|(k, _)| k.0 == 0 && k.1 == 0 && k.2 == 0)
            .min_by_key(|(k, _)| k.3)
            .map(|(k, c)| (k.3, c.clone()))
            .expect("oracle inverse needs a constant-in-u,v,z term");
        let (v0, c0) = lead;
        let ci = c0.recip();
        // self = c0 q^v0 (1 + t)
        let mut t = self.map_keys(|k| Some(((k.0, k.1, k.2, k.3 - v0), ci.clone())));
        t.0.remove(&(0, 0, 0, e(0)));
        for k in t.0.keys() {
            assert!(k.0 == 0, "oracle inverse of a z-dependent series");
            assert!(k.3 > e(0) || k.1 + k.2 > 0, "oracle inverse: remainder is not small");
        }
        let wb = Box3 { q: b.q - v0, ..*b };
        let neg_t = t.scale(&r(-1));
        let mut acc = Sp::one();
        let mut pw = Sp::one();
        loop {
            pw = pw.mul(&neg_t, &wb);
            if pw.0.is_empty() {
                break;
            }
            acc = acc.add(&pw, &wb);
        }
        acc.map_keys(|k| Some(((k.0, k.1, k.2, k.3 - v0), ci.clone())))
    }

    pub fn shift(&self, s: Exp) -> Sp {
        self.map_keys(|k| Some(((k.0, k.1, k.2, k.3 + s), r(1))))
    }

    pub fn truncate(&self, q: Exp) -> Sp {
        Sp(self.0.iter().filter(|(k, _)| k.3 < q).map(|(k, c)| (*k, c.clone())).collect())
    }

    /// Coefficient list of the `u^a v^b z^0` part below `q`.
    pub fn slice(&self, a: u32, bb: u32, q: Exp) -> BTreeMap<Exp, BigRational> {
        self.0
            .iter()
            .filter(|(k, _)| k.0 == 0 && k.1 == a && k.2 == bb && k.3 < q)
            .map(|(k, c)| (k.3, c.clone()))
            .collect()
    }
}

/// `∏_{k < len} (1 - sign u^ua v^vb q^{a + k m})`, dropping factors at or past the box.
fn poch_poly(sign: i8, ua: u32, vb: u32, zp: i64, a: Exp, m: Exp, len: Option<u32>, b: &Box3) -> Sp {
    let mut acc = Sp::one();
    let mut k = 0u32;
    loop {
        if let Some(l) = len {
            if k >= l {
                break;
            }
        }
        let ex = a + m * e(k as i64);
        if len.is_none() && ex >= b.q && ex > e(0) {
            break;
        }
        let f = Sp::one().add(&Sp::mono(zp, ua, vb, ex, r(-(sign as i64))), &Box3 { q: e(i64::MAX / 4), ..*b });
        acc = acc.mul(&f, &Box3 { q: b.q + e(16), ..*b });
        k += 1;
    }
    acc
}

fn power(x: &Sp, pow: i32, b: &Box3) -> Sp {
    let base = if pow < 0 { x.inv(b) } else { x.clone() };
    let mut acc = Sp::one();
    for _ in 0..pow.unsigned_abs() {
        acc = acc.mul(&base, b);
    }
    acc
}

/// `∏_{k < len} 1/(1 - sign u^ua v^vb q^{a + k m})`, each factor a geometric
/// series. Needs every factor to be small in `q`, `u` or `v`.
fn inv_poch_geo(sign: i8, ua: u32, vb: u32, a: Exp, m: Exp, len: Option<u32>, b: &Box3) -> Sp {
    let mut acc = Sp::one();
    let mut k = 0u32;
    loop {
        if len.is_some_and(|l| k >= l) {
            break;
        }
        let ex = a + m * e(k as i64);
        if ex >= b.q {
            break;
        }
        assert!(ex > e(0) || ua + vb > 0);
        let mut g = Sp::default();
        let mut t = 0u32;
        loop {
            let key = (0, ua * t, vb * t, ex * e(t as i64));
            if key.3 >= b.q || key.1 > b.u || key.2 > b.v {
                break;
            }
            let c = if sign < 0 && t % 2 == 1 { -1 } else { 1 };
            g.put(key, r(c), b);
            t += 1;
        }
        acc = acc.mul(&g, b);
        k += 1;
    }
    acc
}

/// `(sign u^ua v^vb q^a; q^m)_len ^ pow`.
fn poch_pow(sign: i8, ua: u32, vb: u32, a: Exp, m: Exp, len: Option<u32>, pow: i32, b: &Box3) -> Sp {
    if pow < 0 && (a > e(0) || ua + vb > 0) {
        let g = inv_poch_geo(sign, ua, vb, a, m, len, b);
        return power(&g, -pow, b);
    }
    power(&poch_poly(sign, ua, vb, 0, a, m, len, b), pow, b)
}

/// Most negative exponent a product of the symbol can reach.
fn negativity(a: Exp, m: Exp, pow: i32) -> Exp {
    let mut acc = e(0);
    let mut k = 0;
    while a + m * e(k) < e(0) {
        acc += a + m * e(k);
        k += 1;
    }
    if pow < 0 && acc < e(0) {
        // 1/(1 - q^{-c}) = -q^c/(1 - q^c): shifts up, never down
        return e(0);
    }
    acc * e(pow.abs() as i64)
}

fn poch_factor(f: &PochFactor, b: &Box3) -> Sp {
    poch_pow(f.sign, 0, 0, f.a, f.m, f.len, f.pow, b)
}

pub fn product(p: &ProductSpec, b: &Box3) -> Sp {
    let mut acc = Sp::mono(0, 0, 0, p.delta, p.constant.clone());
    let inner = Box3 { q: b.q - p.delta, ..*b };
    let mut rest = Sp::one();
    for f in &p.factors {
        rest = rest.mul(&poch_factor(f, &inner), &inner);
    }
    acc = acc.mul(&rest, &Box3 { q: b.q, ..*b });
    acc
}

fn theta(a: Exp, bb: Exp, sign: i8, zpow: i64, zcap: i64, b: &Box3) -> Sp {
    let mut out = Sp::default();
    let ex = |n: i64| a * e(n) * e(n) + bb * e(n);
    for n in -4000i64..=4000 {
        if zpow != 0 && n.abs() > zcap {
            continue;
        }
        if ex(n) < b.q {
            let s = if sign < 0 && n.rem_euclid(2) == 1 { -1 } else { 1 };
            out.put((zpow * n, 0, 0, ex(n)), r(s), b);
        }
    }
    out
}

/// `1/(q^d; q^d)_n` by multiplying geometric series.
fn inv_qd(d: i64, n: i64, b: &Box3) -> Sp {
    let mut acc = Sp::one();
    for k in 1..=n {
        let step = e(d * k);
        if step >= b.q {
            break;
        }
        let mut g = Sp::default();
        let mut t = e(0);
        while t < b.q {
            g.put((0, 0, 0, t), r(1), b);
            t += step;
        }
        acc = acc.mul(&g, b);
    }
    acc
}

/// `½nᵀ(AD)n + nᵀb + c`.
fn nahm_exp(q: &NahmQuadruple, n: &[i64]) -> Exp {
    let r = n.len();
    let mut s = e(0);
    for i in 0..r {
        for j in 0..r {
            s += q.a[i][j] * e(q.d[j]) * e(n[i] * n[j]);
        }
    }
    s / e(2) + (0..r).map(|i| q.b[i] * e(n[i])).sum::<Exp>() + q.c
}

fn boxes(r: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for p in &out {
            for x in 0..=radius {
                let mut p2 = p.clone();
                p2.push(x);
                next.push(p2);
            }
        }
        out = next;
    }
    out
}

/// Lattice sum over a box grown until three consecutive shells lie past the box.
pub fn nahm(q: &NahmQuadruple, parity: &[Option<u8>], w: &ParamWeights, b: &Box3) -> Sp {
    let rank = q.a.len();
    let mut radius = 2i64;
    let mut quiet = 0;
    while quiet < 3 {
        let shell_min = boxes(rank, radius)
            .into_iter()
            .filter(|n| n.iter().any(|x| *x == radius))
            .map(|n| nahm_exp(q, &n))
            .min()
            .unwrap();
        if shell_min >= b.q {
            quiet += 1;
        } else {
            quiet = 0;
        }
        radius += 1;
    }
    let mut out = Sp::default();
    for n in boxes(rank, radius) {
        if parity.iter().zip(&n).any(|(p, x)| p.is_some_and(|p| x.rem_euclid(2) != p as i64)) {
            continue;
        }
        let ex = nahm_exp(q, &n);
        if ex >= b.q {
            continue;
        }
        let uu: u32 = w.u.iter().zip(&n).map(|(a, x)| a * *x as u32).sum();
        let vv: u32 = w.v.iter().zip(&n).map(|(a, x)| a * *x as u32).sum();
        let mut term = Sp::mono(0, uu, vv, ex, r(1));
        let inner = Box3 { q: b.q, ..*b };
        for i in 0..rank {
            term = term.mul(&inv_qd(q.d[i], n[i], &Box3 { q: b.q - ex, ..*b }), &inner);
        }
        out = out.add(&term, b);
    }
    out
}

/// Single sum, summed until four consecutive terms fall past the box.
pub fn single(s: &SingleSum, b: &Box3) -> Sp {
    let mut out = Sp::default();
    let vertex = if s.quad.is_zero() { 0 } else { (-s.lin / (s.quad * e(2))).ceil().to_integer().max(0) };
    let neg: Exp = s.factors.iter().map(|f| negativity(f.a, f.m, f.pow)).sum();
    let hb = Box3 { q: b.q - neg + e(1), ..*b };
    let mut quiet = 0;
    let mut n = 0i64;
    while quiet < 4 || n <= vertex {
        let ex = s.quad * e(n) * e(n) + s.lin * e(n) + s.cst;
        let sg = if s.alternating && n % 2 == 1 { -1 } else { 1 };
        let mut term = Sp::mono(0, s.wu * n as u32, s.wv * n as u32, ex, r(sg));
        if ex + neg >= b.q || term.0.iter().any(|(k, _)| k.1 > b.u || k.2 > b.v) {
            quiet += 1;
            n += 1;
            continue;
        }
        let fb = Box3 { q: hb.q - ex, ..*b };
        for f in &s.factors {
            let len = f.k * n as u32 + f.l;
            term = term.mul(&poch_pow(f.sign, f.ua, f.vb, f.a, f.m, Some(len), f.pow, &fb), &hb);
        }
        let term = term.truncate(b.q);
        quiet = if term.0.is_empty() { quiet + 1 } else { 0 };
        out = out.add(&term, b);
        n += 1;
    }
    out
}

fn zfactor(f: &ZFactor, zcap: i64, b: &Box3) -> Sp {
    match *f {
        ZFactor::Theta { a, b: bb, sign, zpow } => theta(a, bb, sign, zpow as i64, zcap, b),
        ZFactor::Poch { sign, zpow, a, m, pow } => {
            let zb = Box3 { q: b.q, ..*b };
            let mut acc = Sp::one();
            let mut k = 0i64;
            loop {
                let ex = a + m * e(k);
                if ex >= b.q {
                    break;
                }
                let mut g = Sp::default();
                if pow > 0 {
                    g.put((0, 0, 0, e(0)), r(1), &zb);
                    g.put((zpow as i64, 0, 0, ex), r(-(sign as i64)), &zb);
                } else {
                    // 1/(1 - x) = Σ x^t with at most `zcap` powers of z.
                    for t in 0..=zcap {
                        let c = if sign < 0 && t % 2 == 1 { -1 } else { 1 };
                        g.put((zpow as i64 * t, 0, 0, ex * e(t)), r(c), &zb);
                    }
                }
                acc = acc.mul(&g, &zb);
                acc = Sp(acc.0.into_iter().filter(|(key, _)| key.0.abs() <= zcap).collect());
                k += 1;
            }
            acc
        }
    }
}

/// Constant term in `z`, with every factor cut to `|z| ≤ zcap`.
pub fn const_term(fs: &[ZFactor], zcap: i64, b: &Box3) -> Sp {
    let neg = Box3 { q: b.q + e(zcap), ..*b };
    let mut acc = Sp::one();
    for f in fs {
        acc = acc.mul(&zfactor(f, zcap, &neg), &neg);
    }
    Sp(acc.0.into_iter().filter(|(k, _)| k.0 == 0 && k.3 < b.q).collect())
}

fn zcap_for(b: &Box3) -> i64 {
    let q = b.q.to_integer().max(1) as f64;
    2 * q.sqrt().ceil() as i64 + 6
}

pub fn expr(x: &Expr, b: &Box3) -> Sp {
    match x {
        Expr::Prod(p) => product(p, b),
        Expr::Nahm { quad, parity } => nahm(quad, parity, &ParamWeights::default(), b),
        Expr::Single(s) => single(s, b),
        Expr::Theta { a, b: bb, sign } => theta(*a, *bb, *sign, 0, 0, b),
        Expr::ConstTerm(fs) => {
            let z = zcap_for(b);
            let lo = const_term(fs, z, b);
            let hi = const_term(fs, z + 6, b);
            assert_eq!(lo, hi, "constant term not stable under a larger z-box");
            lo
        }
        Expr::Sum(xs) => xs.iter().fold(Sp::default(), |acc, x| acc.add(&expr(x, b), b)),
        Expr::Product(xs) => xs.iter().fold(Sp::one(), |acc, x| acc.mul(&expr(x, b), b)),
        Expr::Quot(a, d) => expr(a, b).mul(&expr(d, b).inv(b), b),
        Expr::Scale(c, x) => expr(x, b).scale(c),
        Expr::Shift(s, x) => expr(x, &Box3 { q: b.q - s, ..*b }).shift(*s),
        Expr::Dilate(k, x) => {
            let inner = expr(x, &Box3 { q: b.q / k, ..*b });
            inner.map_keys(|key| Some(((key.0, key.1, key.2, key.3 * k), r(1))))
        }
        Expr::Even(x) => expr(x, b).map_keys(|k| {
            assert!(k.3.is_integer());
            (k.3.to_integer().rem_euclid(2) == 0).then(|| (k, r(1)))
        }),
        Expr::Odd(x) => expr(x, b).map_keys(|k| {
            assert!(k.3.is_integer());
            (k.3.to_integer().rem_euclid(2) == 1).then(|| (k, r(1)))
        }),
        Expr::Twist(p, x) => expr(x, b).map_keys(|k| {
            // i^{2e + p}
            let two = k.3 * e(2);
            assert!(two.is_integer(), "twist off the half-integer lattice");
            match (two.to_integer() + p).rem_euclid(4) {
                0 => Some((k, r(1))),
                2 => Some((k, r(-1))),
                _ => panic!("twist produced a non-real coefficient"),
            }
        }),
    }
}

fn param_poch(f: &ParamPoch, b: &Box3) -> Sp {
    poch_pow(f.sign, f.ua, f.vb, f.e, f.m, f.len, f.pow, b)
}

pub fn pexpr(x: &PExpr, b: &Box3) -> Sp {
    match x {
        PExpr::Nahm { quad, weights } => nahm(quad, &[], weights, b),
        PExpr::Single(s) => single(s, b),
        PExpr::Poch(fs) => fs.iter().fold(Sp::one(), |acc, f| acc.mul(&param_poch(f, b), b)),
        PExpr::Poly(ts) => {
            let mut out = Sp::default();
            for &(a, bb, q, c) in ts {
                out.put((0, a, bb, q), r(c), b);
            }
            out
        }
        PExpr::Lift(x) => expr(x, b),
        PExpr::Sum(xs) => xs.iter().fold(Sp::default(), |acc, x| acc.add(&pexpr(x, b), b)),
        PExpr::Product(xs) => xs.iter().fold(Sp::one(), |acc, x| acc.mul(&pexpr(x, b), b)),
        PExpr::Scale(c, x) => pexpr(x, b).scale(c),
        PExpr::Shift(s, x) => pexpr(x, &Box3 { q: b.q - s, ..*b }).shift(*s),
        PExpr::Dilate(k, x) => {
            let inner = pexpr(x, &Box3 { q: b.q / k, ..*b });
            inner.map_keys(|key| Some(((key.0, key.1, key.2, key.3 * k), r(1))))
        }
    }
}

/// Evaluates `x` with headroom `h` twice (at `h` and `h + 6`) and returns the
/// part below `order` after checking the two agree there.
pub fn stable<F: Fn(&Box3) -> Sp>(f: F, order: i64, u: u32, v: u32, h: i64) -> Sp {
    let a = f(&Box3 { q: e(order + h), u, v }).truncate(e(order));
    let b = f(&Box3 { q: e(order + h + 6), u, v }).truncate(e(order));
    assert_eq!(a, b, "oracle is not stable under more headroom");
    a
}

/// The engine's plain series as a sparse map.
pub fn from_q(s: &nahm_forge::QSeries, u: u32, v: u32) -> Sp {
    Sp(s.terms().into_iter().map(|(ex, c)| ((0, u, v, ex), c)).collect())
}

pub fn from_param(s: &nahm_forge::ParamSeries) -> Sp {
    let mut out = BTreeMap::new();
    for ((a, b), comp) in s.components() {
        for (ex, c) in comp.terms() {
            out.insert((0, *a, *b, ex), c);
        }
    }
    Sp(out)
}

pub fn is_one(c: &BigRational) -> bool {
    c.is_one()
}

pub fn is_neg(c: &BigRational) -> bool {
    c.is_negative()
}

const HEADROOM: i64 = 12;

/// Both sides of a record from the oracle and from the engine, as
/// `(oracle, engine)` pairs.
pub fn oracle_sides(rec: &IdentityRecord, order: i64) -> [(Sp, Sp); 2] {
    let n = int(order);
    match &rec.sides {
        Sides::Q(l, r) => [l, r].map(|x| {
            let o = stable(|b| expr(x, b), order, 0, 0, HEADROOM);
            (o, from_q(&x.eval(n).unwrap(), 0, 0))
        }),
        Sides::Param(l, r, p) => {
            let d = order as u32;
            let (u, v) = match p {
                Params::None => (0, 0),
                Params::U => (d, 0),
                Params::V => (0, d),
                Params::UV => (d, d),
            };
            [l, r].map(|x| {
                let o = stable(|b| pexpr(x, b), order, u, v, HEADROOM);
                (o, from_param(&x.eval(n, u, v).unwrap()))
            })
        }
    }
}

/// Both engine sides equal their oracle values, and the oracle sides agree.
pub fn check_against_oracle(rec: &IdentityRecord, order: i64) -> Result<(), String> {
    let [(ol, el), (or, er)] = oracle_sides(rec, order);
    if ol != el {
        return Err(format!("{}: left side differs from the oracle", rec.id));
    }
    if or != er {
        return Err(format!("{}: right side differs from the oracle", rec.id));
    }
    if ol != or {
        return Err(format!("{}: oracle sides differ", rec.id));
    }
    Ok(())
}
