//! Floating-point evaluation in the upper half-plane: products, theta series,
//! eta and Weber functions, the vectors `U` and `V`, and numeric checks of
//! their transformation laws.
//!
//! Every value carries an absolute truncation bound. Fractional powers are
//! `q^e = exp(2πiτe)` computed from `τ`, never from a floating `q`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::poch::{PochFactor, ProductSpec};
use crate::rat::{big_to_f64, int, r64, r64_to_f64, Exp};
use crate::registry::{self, Sides};
use crate::series::QSeries;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tau {
    pub re: f64,
    pub im: f64,
}

impl Tau {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !im.is_finite() || !re.is_finite() {
            return Err(Error::InvalidTau(im));
        }
        Ok(Tau { re, im })
    }

    pub fn from_c(z: C64) -> Result<Self> {
        Tau::new(z.re, z.im)
    }

    pub fn c(self) -> C64 {
        C64::new(self.re, self.im)
    }

    pub fn shift(self, x: f64) -> Tau {
        Tau { re: self.re + x, im: self.im }
    }

    pub fn scale(self, k: f64) -> Tau {
        debug_assert!(k > 0.0);
        Tau { re: self.re * k, im: self.im * k }
    }

    /// `(aτ + b) / (cτ + d)` for a real matrix of positive determinant.
    pub fn moebius(self, a: f64, b: f64, c: f64, d: f64) -> Result<Tau> {
        let z = self.c();
        Tau::from_c((z * a + b) / (z * c + d))
    }

    /// `|q| = exp(-2π im τ)`.
    pub fn abs_q(self) -> f64 {
        (-2.0 * PI * self.im).exp()
    }

    pub fn default_points() -> Vec<Tau> {
        [(0.0, 1.0), (0.0, 2.0), (0.25, 0.5), (0.2, 1.0), (0.3, 0.8)]
            .iter()
            .map(|&(re, im)| Tau { re, im })
            .collect()
    }
}

/// `q^e` on the principal branch.
pub fn qpow(tau: Tau, e: f64) -> C64 {
    (C64::new(0.0, 2.0 * PI * e) * tau.c()).exp()
}

/// A value together with an absolute error bound.
#[derive(Clone, Copy, Debug)]
pub struct Approx {
    pub value: C64,
    pub err: f64,
}

impl Approx {
    pub fn exact(value: C64) -> Self {
        Approx { value, err: 0.0 }
    }

    pub fn add(self, o: Approx) -> Approx {
        Approx { value: self.value + o.value, err: self.err + o.err }
    }

    pub fn sub(self, o: Approx) -> Approx {
        Approx { value: self.value - o.value, err: self.err + o.err }
    }

    pub fn mul(self, o: Approx) -> Approx {
        Approx {
            value: self.value * o.value,
            err: self.value.norm() * o.err + o.value.norm() * self.err + self.err * o.err,
        }
    }

    pub fn div(self, o: Approx) -> Approx {
        let b = o.value.norm();
        let err = if o.err < b {
            (self.value.norm() * o.err + b * self.err) / (b * (b - o.err))
        } else {
            f64::INFINITY
        };
        Approx { value: self.value / o.value, err }
    }

    pub fn scale(self, c: C64) -> Approx {
        Approx { value: self.value * c, err: self.err * c.norm() }
    }
}

/// Truncation control.
#[derive(Clone, Copy, Debug)]
pub struct EvalConfig {
    /// Exponent below which every product factor and theta term is kept, and
    /// the `q`-order of series routes.
    pub order: i64,
    /// When set, products and thetas continue past `order` until their tail
    /// bound drops below `target`.
    pub adaptive: bool,
    pub target: f64,
    /// Growth constant `κ` of the coefficient model `|c_e| ≤ C e^{κ√e}` used for
    /// series tails.
    pub kappa: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { order: 60, adaptive: true, target: 1e-18, kappa: PI * 2f64.sqrt() }
    }
}

const MAX_FACTORS: usize = 1 << 20;

/// `(sign q^a; q^m)_len^pow` at `τ`, with its relative truncation bound.
fn eval_factor(f: &PochFactor, tau: Tau, cfg: &EvalConfig) -> (C64, f64) {
    let (a, m) = (r64_to_f64(f.a), r64_to_f64(f.m));
    let s = f64::from(f.sign);
    let mut acc = C64::new(1.0, 0.0);
    let r = tau.abs_q().powf(m);
    let mut k = 0usize;
    let eps = loop {
        if let Some(len) = f.len {
            if k >= len as usize {
                break 0.0;
            }
        } else {
            let e = a + m * k as f64;
            if e >= cfg.order as f64 && e > 0.0 {
                let z = tau.abs_q().powf(e);
                let eps = if z < 1.0 && r < 1.0 { z / ((1.0 - z) * (1.0 - r)) } else { f64::INFINITY };
                if !cfg.adaptive || eps <= cfg.target || k >= MAX_FACTORS {
                    break eps;
                }
            }
        }
        acc *= C64::new(1.0, 0.0) - qpow(tau, a + m * k as f64) * s;
        k += 1;
    };
    (acc.powi(f.pow), eps * f64::from(f.pow.unsigned_abs()))
}

/// Numeric value of a product side.
pub fn eval_product_at(spec: &ProductSpec, tau: Tau, cfg: &EvalConfig) -> Approx {
    let mut v = qpow(tau, r64_to_f64(spec.delta)) * big_to_f64(&spec.constant);
    let mut eps = 0.0;
    for f in &spec.factors {
        let (x, e) = eval_factor(f, tau, cfg);
        v *= x;
        eps += e;
    }
    Approx { value: v, err: v.norm() * eps.exp_m1() }
}

/// `Σ_{n∈ℤ} sign^n q^{a n² + b n}` for `a > 0`.
pub fn eval_theta_at(a: f64, b: f64, sign: i8, tau: Tau, cfg: &EvalConfig) -> Approx {
    debug_assert!(a > 0.0);
    let e = |n: f64| a * n * n + b * n;
    let lq = -2.0 * PI * tau.im;
    let n0 = (b.abs() / (2.0 * a)).ceil() + 1.0;
    let mut nmax = n0;
    // Side tail past N: ratio of consecutive terms is at most |q|^{a(2N+3) - |b|}.
    let tail = |n: f64| {
        let first = (lq * e(n + 1.0).min(e(-n - 1.0))).exp();
        let gap = a * (2.0 * n + 3.0) - b.abs();
        2.0 * first / (1.0 - (lq * gap).exp())
    };
    while e(nmax).min(e(-nmax)) < cfg.order as f64 || (cfg.adaptive && tail(nmax) > cfg.target) {
        nmax += 1.0;
        if nmax > 1e7 {
            break;
        }
    }
    let n = nmax as i64;
    let mut v = C64::zero();
    for k in -n..=n {
        let term = qpow(tau, e(k as f64));
        v += if sign < 0 && k.rem_euclid(2) == 1 { -term } else { term };
    }
    Approx { value: v, err: tail(nmax) }
}

/// `h_{j,m}(τ) = Σ q^{m(k + j/2m)²}`.
pub fn eval_h(j: f64, m: f64, tau: Tau, cfg: &EvalConfig) -> Approx {
    eval_theta_at(m, j, 1, tau, cfg).scale(qpow(tau, j * j / (4.0 * m)))
}

/// `g_{j,m}(τ) = Σ (-1)^k q^{m(k + j/2m)²}`.
pub fn eval_g(j: f64, m: f64, tau: Tau, cfg: &EvalConfig) -> Approx {
    eval_theta_at(m, j, -1, tau, cfg).scale(qpow(tau, j * j / (4.0 * m)))
}

fn spec1(sign: i8, a: Exp, m: Exp, delta: Exp) -> ProductSpec {
    ProductSpec::new(vec![PochFactor { sign, a, m, len: None, pow: 1 }]).with_delta(delta)
}

/// `η(τ) = q^{1/24} (q;q)_∞`.
pub fn eval_eta(tau: Tau, cfg: &EvalConfig) -> Approx {
    eval_product_at(&spec1(1, int(1), int(1), r64(1, 24)), tau, cfg)
}

/// `f(τ) = q^{-1/48} (-q^{1/2};q)_∞`.
pub fn eval_weber_f(tau: Tau, cfg: &EvalConfig) -> Approx {
    eval_product_at(&spec1(-1, r64(1, 2), int(1), r64(-1, 48)), tau, cfg)
}

/// `f₁(τ) = q^{-1/48} (q^{1/2};q)_∞`.
pub fn eval_weber_f1(tau: Tau, cfg: &EvalConfig) -> Approx {
    eval_product_at(&spec1(1, r64(1, 2), int(1), r64(-1, 48)), tau, cfg)
}

/// `f₂(τ) = q^{1/24} (-q;q)_∞`.
pub fn eval_weber_f2(tau: Tau, cfg: &EvalConfig) -> Approx {
    eval_product_at(&spec1(-1, int(1), int(1), r64(1, 24)), tau, cfg)
}

/// Truncated series at `τ` with a tail bound from the growth model
/// `|c_e| ≤ C e^{κ√(e - v + 1)}`, `v` the valuation. `C` is fitted to the known
/// coefficients.
pub fn eval_series_at(s: &QSeries, tau: Tau, kappa: f64, tol: f64) -> Result<Approx> {
    let terms = s.terms();
    let Some(v) = terms.first().map(|(e, _)| r64_to_f64(*e)) else {
        return Ok(Approx::exact(C64::zero()));
    };
    let mut value = C64::zero();
    let mut c_fit: f64 = 0.0;
    for (e, c) in &terms {
        let e = r64_to_f64(*e);
        let c = big_to_f64(c);
        value += qpow(tau, e) * c;
        c_fit = c_fit.max(c.abs() * (-kappa * (e - v + 1.0).sqrt()).exp());
    }
    let order = r64_to_f64(s.order());
    let step = 1.0 / s.den() as f64;
    let n = order - v + 1.0;
    let rho = tau.abs_q().powf(step) * (kappa * step / (2.0 * n.sqrt())).exp();
    let err = if rho < 1.0 {
        c_fit * (kappa * n.sqrt()).exp() * tau.abs_q().powf(order) / (1.0 - rho)
    } else {
        f64::INFINITY
    };
    if !(err <= tol) {
        return Err(Error::TailTooLarge { bound: err, tol });
    }
    Ok(Approx { value, err })
}

/// Numeric value of an expression. Product and theta nodes are evaluated
/// directly; everything else goes through its truncated series.
pub fn eval_expr_at(x: &Expr, tau: Tau, cfg: &EvalConfig) -> Result<Approx> {
    Ok(match x {
        Expr::Prod(p) => eval_product_at(p, tau, cfg),
        Expr::Theta { a, b, sign } => eval_theta_at(r64_to_f64(*a), r64_to_f64(*b), *sign, tau, cfg),
        Expr::Sum(xs) => {
            let mut acc = Approx::exact(C64::zero());
            for y in xs {
                acc = acc.add(eval_expr_at(y, tau, cfg)?);
            }
            acc
        }
        Expr::Product(xs) => {
            let mut acc = Approx::exact(C64::new(1.0, 0.0));
            for y in xs {
                acc = acc.mul(eval_expr_at(y, tau, cfg)?);
            }
            acc
        }
        Expr::Quot(a, b) => eval_expr_at(a, tau, cfg)?.div(eval_expr_at(b, tau, cfg)?),
        Expr::Scale(c, y) => eval_expr_at(y, tau, cfg)?.scale(C64::new(big_to_f64(c), 0.0)),
        Expr::Shift(e, y) => eval_expr_at(y, tau, cfg)?.scale(qpow(tau, r64_to_f64(*e))),
        Expr::Dilate(k, y) => eval_expr_at(y, tau.scale(r64_to_f64(*k)), cfg)?,
        Expr::Twist(p, y) => eval_expr_at(y, tau.shift(0.5), cfg)?.scale(C64::i().powi(p.rem_euclid(4) as i32)),
        _ => {
            let s = x.eval(int(cfg.order))?;
            eval_series_at(&s, tau, cfg.kappa, f64::INFINITY)?
        }
    })
}

// ---------------------------------------------------------------------------
// U and V.

/// How a component of `U` or `V` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Truncated parity-restricted Nahm sums.
    Series,
    /// Product and theta closed forms.
    Closed,
}

/// `(record id, shift numerator over 56)` for `U₁..U₆`.
const U_PARTS: [(&str, i64); 6] = [
    ("thm-parity-r1", -3),
    ("thm-parity-r4", 1),
    ("thm-parity-r6", 9),
    ("thm-parity-r2", -3),
    ("thm-parity-r3", 1),
    ("thm-parity-r5", 9),
];

fn record_sides(id: &str) -> (Expr, Expr) {
    match registry::find(id).expect("registered").sides {
        Sides::Q(l, r) => (l, r),
        Sides::Param(..) => unreachable!("{id} is a q-series record"),
    }
}

/// The six components of `U` as expressions.
pub fn u_exprs(route: Route) -> Vec<Expr> {
    U_PARTS
        .iter()
        .map(|&(id, s)| {
            let (l, r) = record_sides(id);
            let x = if route == Route::Series { l } else { r };
            x.shift(r64(s, 56))
        })
        .collect()
}

/// The six components of `V` as expressions: the twisted parity sums, or the
/// product-times-theta closed forms.
pub fn v_exprs(route: Route) -> Vec<Expr> {
    (1..=6)
        .map(|k| {
            let (l, r) = record_sides(&format!("v-closed-{k}"));
            if route == Route::Series {
                l
            } else {
                r
            }
        })
        .collect()
}

fn eval_vec(xs: &[Expr], tau: Tau, cfg: &EvalConfig) -> Result<Vec<Approx>> {
    xs.iter().map(|x| eval_expr_at(x, tau, cfg)).collect()
}

pub fn eval_u(tau: Tau, route: Route, cfg: &EvalConfig) -> Result<Vec<Approx>> {
    eval_vec(&u_exprs(route), tau, cfg)
}

pub fn eval_v(tau: Tau, route: Route, cfg: &EvalConfig) -> Result<Vec<Approx>> {
    eval_vec(&v_exprs(route), tau, cfg)
}

/// `V` through Weber functions: `f₁(2τ)/η(2τ) g_{1,3,5;7}(2τ)` and
/// `f₂(2τ)/η(2τ) g_{5,1,3;7}(τ/2)`.
pub fn eval_v_weber(tau: Tau, cfg: &EvalConfig) -> Vec<Approx> {
    let t2 = tau.scale(2.0);
    let eta = eval_eta(t2, cfg);
    let a = eval_weber_f1(t2, cfg).div(eta);
    let b = eval_weber_f2(t2, cfg).div(eta);
    let mut out: Vec<Approx> = [1.0, 3.0, 5.0].iter().map(|&j| a.mul(eval_g(j, 7.0, t2, cfg))).collect();
    out.extend([5.0, 1.0, 3.0].iter().map(|&j| b.mul(eval_g(j, 7.0, tau.scale(0.5), cfg))));
    out
}

/// `U₁..U₃` through `f(2τ)/η(2τ) g_{1,3,5;7}(2τ)`.
pub fn eval_u_weber(tau: Tau, cfg: &EvalConfig) -> Vec<Approx> {
    let t2 = tau.scale(2.0);
    let a = eval_weber_f(t2, cfg).div(eval_eta(t2, cfg));
    [1.0, 3.0, 5.0].iter().map(|&j| a.mul(eval_g(j, 7.0, t2, cfg))).collect()
}

// ---------------------------------------------------------------------------
// Matrices.

pub type Mat = Vec<Vec<C64>>;

/// `α_k = √(2/7) sin(kπ/7)`.
pub fn alpha(k: i32) -> f64 {
    (2.0f64 / 7.0).sqrt() * (f64::from(k) * PI / 7.0).sin()
}

fn real(m: [[f64; 3]; 3]) -> Mat {
    m.iter().map(|r| r.iter().map(|x| C64::new(*x, 0.0)).collect()).collect()
}

pub fn matrix_m() -> Mat {
    let (a1, a2, a3) = (alpha(1), alpha(2), alpha(3));
    real([[a3, a2, a1], [a2, -a1, -a3], [a1, -a3, a2]])
}

pub fn matrix_w() -> Mat {
    let (a1, a2, a3) = (alpha(1), alpha(2), alpha(3));
    let s = 2f64.sqrt();
    real([[s * a1, s * a3, s * a2], [-s * a3, s * a2, -s * a1], [s * a2, s * a1, -s * a3]])
}

fn zeta112(k: i32) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * f64::from(k) / 112.0)
}

/// `P^k` with `P = diag(ζ₁₁₂^{-3}, ζ₁₁₂, ζ₁₁₂^9)`.
pub fn matrix_p_pow(k: i32) -> Mat {
    diag(&[zeta112(-3 * k), zeta112(k), zeta112(9 * k)])
}

fn diag(d: &[C64]) -> Mat {
    (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { C64::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

pub fn transpose(a: &Mat) -> Mat {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// `((a, b), (c, d))` from 3×3 blocks.
pub fn block(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
    let mut out = Vec::with_capacity(6);
    for (l, r) in [(a, b), (c, d)] {
        for i in 0..3 {
            out.push(l[i].iter().chain(&r[i]).copied().collect());
        }
    }
    out
}

fn zero3() -> Mat {
    vec![vec![C64::zero(); 3]; 3]
}

fn neg(a: &Mat) -> Mat {
    a.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

fn scalar(a: &Mat, c: f64) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn identity(n: usize) -> Mat {
    diag(&vec![C64::new(1.0, 0.0); n])
}

/// Largest entrywise modulus of `a - b`.
pub fn mat_dist(a: &Mat, b: &Mat) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}

/// `Λ^k = diag(P^k, P^k)`.
pub fn matrix_lambda_pow(k: i32) -> Mat {
    let p = matrix_p_pow(k);
    block(&p, &zero3(), &zero3(), &p)
}

/// `D = diag(1, -1, -1, -1, 1, 1)`: the sign `e^{2πi·e}` picked up by the
/// components whose exponents lie in `r/56 + 1/2 + ℤ`.
pub fn matrix_parity() -> Mat {
    let s = [1.0, -1.0, -1.0, -1.0, 1.0, 1.0];
    diag(&s.map(|x| C64::new(x, 0.0)))
}

/// `T = Λ² D`, the exact action of `τ → τ+1` on `U` and on `V`.
pub fn matrix_t() -> Mat {
    mat_mul(&matrix_lambda_pow(2), &matrix_parity())
}

/// `E = Λ⁻¹ diag(1, -i, i, -i, 1, 1)` with `U(τ) = E V(τ + 1/2)`; the extra
/// units undo the factors `∓ζ₄` in the definition of `V`.
pub fn matrix_e() -> Mat {
    let i = C64::i();
    let one = C64::new(1.0, 0.0);
    mat_mul(&matrix_lambda_pow(-1), &diag(&[one, -i, i, -i, one, one]))
}

/// `H = ((0, W), (Wᵀ, 0))`.
pub fn matrix_h() -> Mat {
    let w = matrix_w();
    block(&zero3(), &w, &transpose(&w), &zero3())
}

/// Inverse of a diagonal matrix.
fn diag_inv(a: &Mat) -> Mat {
    diag(&(0..a.len()).map(|i| a[i][i].inv()).collect::<Vec<_>>())
}

fn apply(m: &Mat, v: &[Approx]) -> Vec<Approx> {
    m.iter()
        .map(|row| {
            let mut acc = Approx::exact(C64::zero());
            for (x, y) in row.iter().zip(v) {
                acc = acc.add(y.scale(*x));
            }
            acc
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Transformation laws.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `U(-1/τ) = ((M, M), (M, -M)) U(τ/2)`.
    UInversion,
    /// `U(τ+1) = Λ⁴ U(τ)`.
    UTranslation,
    /// `U(τ/(2τ+1)) = ((0, P³WP), (P³WᵀP, 0)) U(τ)`.
    UGamma2,
    /// `V(τ+1) = Λ⁴ V(τ)`.
    VTranslation,
    /// `V(-1/(4τ)) = ((0, W), (Wᵀ, 0)) V(τ)`.
    VInversion,
    /// `V(τ/(4τ+1)) = diag(W P⁻⁴ Wᵀ, Wᵀ P⁻⁴ W) V(τ)`.
    VGamma4,
    /// `U(-1/(4τ))` in terms of `U₁ ± U₄, …` at `2τ`.
    UQuarterInversion,
    /// `(U₁+U₄, …)(-1/(4τ)) = 2M (U₁, U₂, U₃)(2τ)`.
    USumInversion,
    /// `U(τ) = Λ⁻¹ V(τ + 1/2)`.
    UVShift,
    /// `U(τ+1) = T U(τ)` with `T = Λ² D`.
    UTranslationParity,
    /// `V(τ+1) = T V(τ)`.
    VTranslationParity,
    /// `U(τ/(2τ+1)) = E T H E⁻¹ U(τ)`.
    UGamma2Parity,
    /// `V(τ/(4τ+1)) = H T⁻¹ H V(τ)`.
    VGamma4Parity,
    /// `U(τ) = E V(τ + 1/2)`.
    UVShiftParity,
}

impl Relation {
    pub const ALL: [Relation; 14] = [
        Relation::UInversion,
        Relation::UTranslation,
        Relation::UGamma2,
        Relation::VTranslation,
        Relation::VInversion,
        Relation::VGamma4,
        Relation::UQuarterInversion,
        Relation::USumInversion,
        Relation::UVShift,
        Relation::UTranslationParity,
        Relation::VTranslationParity,
        Relation::UGamma2Parity,
        Relation::VGamma4Parity,
        Relation::UVShiftParity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Relation::UInversion => "u-inversion",
            Relation::UTranslation => "u-translation",
            Relation::UGamma2 => "u-gamma0-2",
            Relation::VTranslation => "v-translation",
            Relation::VInversion => "v-inversion",
            Relation::VGamma4 => "v-gamma0-4",
            Relation::UQuarterInversion => "u-quarter-inversion",
            Relation::USumInversion => "u-sum-inversion",
            Relation::UVShift => "u-v-shift",
            Relation::UTranslationParity => "u-translation-parity",
            Relation::VTranslationParity => "v-translation-parity",
            Relation::UGamma2Parity => "u-gamma0-2-parity",
            Relation::VGamma4Parity => "v-gamma0-4-parity",
            Relation::UVShiftParity => "u-v-shift-parity",
        }
    }

    /// Accepts the ids above, plus `conj1.1` for [`Relation::UInversion`].
    pub fn parse(s: &str) -> Result<Relation> {
        if s == "conj1.1" {
            return Ok(Relation::UInversion);
        }
        Relation::ALL.into_iter().find(|r| r.id() == s).ok_or_else(|| Error::UnknownRelation(s.into()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularReport {
    pub theorem: String,
    pub tau: [f64; 2],
    pub max_dev: f64,
    pub tail_bound: f64,
    pub pass: bool,
}

fn dev(l: &[Approx], r: &[Approx]) -> (f64, f64) {
    let d = l.iter().zip(r).map(|(a, b)| (a.value - b.value).norm()).fold(0.0, f64::max);
    let t = l.iter().zip(r).map(|(a, b)| a.err + b.err).fold(0.0, f64::max);
    (d, t)
}

/// Both sides of `rel` at `τ` (closed-form route).
pub fn relation_sides(rel: Relation, tau: Tau, cfg: &EvalConfig) -> Result<(Vec<Approx>, Vec<Approx>)> {
    let u = |t: Tau| eval_u(t, Route::Closed, cfg);
    let v = |t: Tau| eval_v(t, Route::Closed, cfg);
    let m = matrix_m();
    let w = matrix_w();
    let wt = transpose(&w);
    Ok(match rel {
        Relation::UInversion => {
            let s = block(&m, &m, &m, &neg(&m));
            (u(tau.moebius(0.0, -1.0, 1.0, 0.0)?)?, apply(&s, &u(tau.scale(0.5))?))
        }
        Relation::UTranslation => (u(tau.shift(1.0))?, apply(&matrix_lambda_pow(4), &u(tau)?)),
        Relation::UGamma2 => {
            let (p1, p3) = (matrix_p_pow(1), matrix_p_pow(3));
            let a = mat_mul(&mat_mul(&p3, &w), &p1);
            let b = mat_mul(&mat_mul(&p3, &wt), &p1);
            let s = block(&zero3(), &a, &b, &zero3());
            (u(tau.moebius(1.0, 0.0, 2.0, 1.0)?)?, apply(&s, &u(tau)?))
        }
        Relation::VTranslation => (v(tau.shift(1.0))?, apply(&matrix_lambda_pow(4), &v(tau)?)),
        Relation::VInversion => {
            let s = block(&zero3(), &w, &wt, &zero3());
            (v(tau.moebius(0.0, -1.0, 4.0, 0.0)?)?, apply(&s, &v(tau)?))
        }
        Relation::VGamma4 => {
            let p = matrix_p_pow(-4);
            let a = mat_mul(&mat_mul(&w, &p), &wt);
            let b = mat_mul(&mat_mul(&wt, &p), &w);
            let s = block(&a, &zero3(), &zero3(), &b);
            (v(tau.moebius(1.0, 0.0, 4.0, 1.0)?)?, apply(&s, &v(tau)?))
        }
        Relation::UQuarterInversion => {
            let s = block(&m, &m, &m, &neg(&m));
            (u(tau.moebius(0.0, -1.0, 4.0, 0.0)?)?, apply(&s, &u(tau.scale(2.0))?))
        }
        Relation::USumInversion => {
            let l = u(tau.moebius(0.0, -1.0, 4.0, 0.0)?)?;
            let sums: Vec<Approx> = (0..3).map(|i| l[i].add(l[i + 3])).collect();
            let r = u(tau.scale(2.0))?;
            (sums, apply(&scalar(&m, 2.0), &r[..3]))
        }
        Relation::UVShift => (u(tau)?, apply(&matrix_lambda_pow(-1), &v(tau.shift(0.5))?)),
        Relation::UTranslationParity => (u(tau.shift(1.0))?, apply(&matrix_t(), &u(tau)?)),
        Relation::VTranslationParity => (v(tau.shift(1.0))?, apply(&matrix_t(), &v(tau)?)),
        Relation::UGamma2Parity => {
            let e = matrix_e();
            let s = mat_mul(&mat_mul(&mat_mul(&e, &matrix_t()), &matrix_h()), &diag_inv(&e));
            (u(tau.moebius(1.0, 0.0, 2.0, 1.0)?)?, apply(&s, &u(tau)?))
        }
        Relation::VGamma4Parity => {
            let h = matrix_h();
            let s = mat_mul(&mat_mul(&h, &diag_inv(&matrix_t())), &h);
            (v(tau.moebius(1.0, 0.0, 4.0, 1.0)?)?, apply(&s, &v(tau)?))
        }
        Relation::UVShiftParity => (u(tau)?, apply(&matrix_e(), &v(tau.shift(0.5))?)),
    })
}

/// Checks `rel` at `τ`. Aborts with `TailTooLarge` unless `tol` exceeds 100
/// times the combined truncation bound.
pub fn check_transformation(rel: Relation, tau: Tau, tol: f64, cfg: &EvalConfig) -> Result<ModularReport> {
    let (l, r) = relation_sides(rel, tau, cfg)?;
    let (max_dev, tail_bound) = dev(&l, &r);
    if !(100.0 * tail_bound < tol) {
        return Err(Error::TailTooLarge { bound: tail_bound, tol });
    }
    Ok(ModularReport {
        theorem: rel.id().into(),
        tau: [tau.re, tau.im],
        max_dev,
        tail_bound,
        pass: max_dev < tol,
    })
}

/// Largest deviation between the two evaluation routes for `U` and `V`.
pub fn route_agreement(tau: Tau, cfg: &EvalConfig) -> Result<(f64, f64)> {
    let (du, tu) = dev(&eval_u(tau, Route::Series, cfg)?, &eval_u(tau, Route::Closed, cfg)?);
    let (dv, tv) = dev(&eval_v(tau, Route::Series, cfg)?, &eval_v(tau, Route::Closed, cfg)?);
    Ok((du.max(dv), tu.max(tv)))
}

/// Rounds `x` to the nearest `i64`, for tests on exact data.
pub fn to_i64(x: f64) -> Option<i64> {
    x.round().to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::jprod;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn tau_validation() {
        assert!(matches!(Tau::new(0.0, -1.0), Err(Error::InvalidTau(_))));
        assert!(matches!(Tau::new(0.0, 0.0), Err(Error::InvalidTau(_))));
        assert!(Tau::new(0.3, 0.8).is_ok());
    }

    #[test]
    fn euler_product_at_i() {
        let t = Tau::new(0.0, 1.0).unwrap();
        let v = eval_product_at(&spec1(1, int(1), int(1), int(0)), t, &cfg());
        // Direct partial product oracle.
        let q = (-2.0 * PI).exp();
        let mut p = 1.0;
        for n in 1..200 {
            p *= 1.0 - q.powi(n);
        }
        assert!((v.value.re - p).abs() < 1e-15, "{v:?}");
        assert!((v.value.re - 0.998_129).abs() < 1e-6);
        assert!(v.err < 1e-16);
    }

    #[test]
    fn eta_inversion() {
        for (re, im) in [(0.0, 1.0), (1.0, 2.0)] {
            let t = Tau::new(re, im).unwrap();
            let s = t.moebius(0.0, -1.0, 1.0, 0.0).unwrap();
            let lhs = eval_eta(s, &cfg()).value;
            let rhs = (C64::new(0.0, -1.0) * t.c()).sqrt() * eval_eta(t, &cfg()).value;
            assert!(close(lhs, rhs, 1e-10), "{lhs} {rhs}");
        }
    }

    #[test]
    fn weber_laws() {
        let c = cfg();
        let t = Tau::new(0.0, 2.0).unwrap();
        let s = t.moebius(0.0, -1.0, 1.0, 0.0).unwrap();
        assert!(close(eval_weber_f(s, &c).value, eval_weber_f(t, &c).value, 1e-10));
        assert!(close(eval_weber_f1(s, &c).value, eval_weber_f2(t, &c).value * 2f64.sqrt(), 1e-10));
        let t = Tau::new(0.0, 1.0).unwrap();
        let lhs = eval_weber_f(t.shift(1.0), &c).value;
        let rhs = C64::from_polar(1.0, -PI / 24.0) * eval_weber_f1(t, &c).value;
        assert!(close(lhs, rhs, 1e-10));
    }

    #[test]
    fn theta_laws() {
        let c = cfg();
        let t = Tau::new(0.0, 2.0).unwrap();
        let g = eval_g(1.0, 7.0, t, &c).value;
        let h = eval_h(2.0, 28.0, t, &c).value - eval_h(26.0, 28.0, t, &c).value;
        assert!(close(g, h, 1e-12));
        let t = Tau::new(0.13, 0.41).unwrap();
        for (j, m) in [(1.0, 7.0), (2.5, 3.5), (3.0, 1.5)] {
            let h = eval_h(j, m, t, &c).value;
            assert!(close(h, eval_h(-j, m, t, &c).value, 1e-12));
            assert!(close(h, eval_h(2.0 * m + j, m, t, &c).value, 1e-12));
            assert!(close(eval_h(j, m, t.scale(2.0), &c).value, eval_h(2.0 * j, 2.0 * m, t, &c).value, 1e-12));
        }
    }

    #[test]
    fn series_and_product_paths_agree() {
        let t = Tau::new(0.3, 0.8).unwrap();
        let spec = jprod(&[(1, 5, 1)]);
        let direct = eval_product_at(&spec, t, &cfg());
        let s = spec.eval(int(60)).unwrap();
        let via = eval_series_at(&s, t, PI * 2f64.sqrt(), 1e-12).unwrap();
        assert!(close(direct.value, via.value, 1e-12));
        let two = eval_series_at(&QSeries::constant(crate::rat::big(2), int(5)), t, 1.0, 1.0).unwrap();
        assert_eq!(two.value, C64::new(2.0, 0.0));
    }

    #[test]
    fn matrices() {
        assert!((alpha(1) - 0.23192).abs() < 1e-5);
        assert!((alpha(2) - 0.41791).abs() < 1e-5);
        assert!((alpha(3) - 0.52112).abs() < 1e-5);
        let w = matrix_w();
        assert!(mat_dist(&mat_mul(&transpose(&w), &w), &identity(3)) < 1e-12);
        let h = block(&zero3(), &w, &transpose(&w), &zero3());
        assert!(mat_dist(&mat_mul(&h, &h), &identity(6)) < 1e-12);
        let m = matrix_m();
        assert!(mat_dist(&m, &transpose(&m)) < 1e-15);
    }

    #[test]
    fn routes_agree_at_i() {
        let (d, t) = route_agreement(Tau::new(0.0, 1.0).unwrap(), &cfg()).unwrap();
        assert!(d < 1e-10, "{d} {t}");
    }

    #[test]
    fn u_component_order() {
        // U₄ is q^{-3/56} F₁(1,1;q): its series starts at q^{-3/56 + 1/2}.
        let x = &u_exprs(Route::Series)[3];
        let s = x.eval(int(5)).unwrap();
        assert_eq!(s.valuation(), Some(r64(-3, 56) + r64(1, 2)));
    }

    #[test]
    fn relations_at_i() {
        use Relation::*;
        let t = Tau::new(0.0, 1.0).unwrap();
        for rel in Relation::ALL {
            let r = check_transformation(rel, t, 1e-9, &cfg()).unwrap();
            // The Λ⁴ translation law ignores the half-integral exponents of
            // U₂, U₃, U₄, and the laws derived from it inherit the error.
            let broken = matches!(rel, UTranslation | VTranslation | UGamma2 | VGamma4 | UVShift);
            assert_eq!(r.pass, !broken, "{r:?}");
            if broken {
                assert!(r.max_dev > 1e-3);
            }
        }
    }

    #[test]
    fn parity_translation_is_diagonal_and_unitary() {
        let t = matrix_t();
        assert!(mat_dist(&mat_mul(&t, &transpose(&t).iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect()), &identity(6)) < 1e-14);
        // T differs from Λ⁴ even up to an overall constant.
        let l4 = matrix_lambda_pow(4);
        let r0 = t[0][0] / l4[0][0];
        assert!((1..6).any(|i| (t[i][i] / l4[i][i] - r0).norm() > 0.1));
    }
}
