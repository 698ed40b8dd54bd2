//! Inventory of identities with both sides as series constructors, plus the
//! verification driver.
//!
//! Records are built in code. Each side is an [`Expr`] (plain `q`-series) or a
//! [`PExpr`] (series in the formal parameters `u`, `v`), evaluated exactly to
//! the requested order and compared coefficient by coefficient.

use std::time::Instant;

use serde::Serialize;

use crate::ct::example4_integrand;
use crate::error::{Error, Result};
use crate::expr::{jprod, pprod, scaled, Expr, PExpr};
use crate::nahm::{NahmQuadruple, ParamWeights};
use crate::param::ParamComparison;
use crate::par;
use crate::poch::{neg_nome_factors, ParamPoch, ProductSpec};
use crate::rat::{fmt_big, fmt_r64, int, r64, Exp};
use crate::series::Comparison;
use crate::single::{NPoch, SingleSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Theorem,
    Known,
    Conjecture,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Theorem => "theorem",
            Status::Known => "known",
            Status::Conjecture => "conjecture",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        match s {
            "theorem" => Some(Status::Theorem),
            "known" => Some(Status::Known),
            "conjecture" => Some(Status::Conjecture),
            _ => None,
        }
    }
}

/// Formal parameters carried by a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Params {
    None,
    U,
    V,
    UV,
}

#[derive(Clone, Debug)]
pub enum Sides {
    Q(Expr, Expr),
    Param(PExpr, PExpr, Params),
}

#[derive(Clone, Debug)]
pub struct IdentityRecord {
    pub id: String,
    pub status: Status,
    pub anchor: String,
    pub note: Option<String>,
    pub sides: Sides,
}

impl IdentityRecord {
    fn q(id: &str, status: Status, anchor: &str, lhs: Expr, rhs: Expr) -> Self {
        IdentityRecord { id: id.into(), status, anchor: anchor.into(), note: None, sides: Sides::Q(lhs, rhs) }
    }

    fn param(id: &str, status: Status, anchor: &str, lhs: PExpr, rhs: PExpr, params: Params) -> Self {
        IdentityRecord {
            id: id.into(),
            status,
            anchor: anchor.into(),
            note: None,
            sides: Sides::Param(lhs, rhs, params),
        }
    }

    fn note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn params(&self) -> Params {
        match &self.sides {
            Sides::Q(..) => Params::None,
            Sides::Param(_, _, p) => *p,
        }
    }

    pub fn is_param(&self) -> bool {
        self.params() != Params::None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    ConjecturePass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exp: String,
    pub lhs: String,
    pub rhs: String,
    /// `[a, b]` for the `u^a v^b` component of a parameter identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uv: Option<[u32; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub id: String,
    pub status: Status,
    pub order: i64,
    pub result: Outcome,
    pub first_mismatch: Option<Mismatch>,
    pub ms: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.result != Outcome::Fail
    }
}

/// Largest order any record is guaranteed to support.
pub const MAX_ORDER: i64 = 500;

fn check_order(order: i64) -> Result<()> {
    if order <= 0 {
        return Err(Error::OrderTooSmall(order.to_string()));
    }
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge { requested: order.to_string(), available: MAX_ORDER.to_string() });
    }
    Ok(())
}

/// Verifies one record. Parameter identities use `udeg = vdeg = order` on the
/// parameters they carry.
pub fn verify_record(rec: &IdentityRecord, order: i64) -> Result<VerifyReport> {
    check_order(order)?;
    let start = Instant::now();
    let n = int(order);
    let mismatch = match &rec.sides {
        Sides::Q(l, r) => match l.eval(n)?.eq_to_order(&r.eval(n)?, n)? {
            Comparison::Equal => None,
            Comparison::Mismatch { exp, lhs, rhs } => {
                Some(Mismatch { exp: fmt_r64(exp), lhs: fmt_big(&lhs), rhs: fmt_big(&rhs), uv: None })
            }
        },
        Sides::Param(l, r, p) => {
            let deg = order as u32;
            let (ud, vd) = match p {
                Params::None => (0, 0),
                Params::U => (deg, 0),
                Params::V => (0, deg),
                Params::UV => (deg, deg),
            };
            match l.eval(n, ud, vd)?.eq_to_order(&r.eval(n, ud, vd)?, n)? {
                ParamComparison::Equal => None,
                ParamComparison::Mismatch { u, v, exp, lhs, rhs } => Some(Mismatch {
                    exp: fmt_r64(exp),
                    lhs: fmt_big(&lhs),
                    rhs: fmt_big(&rhs),
                    uv: Some([u, v]),
                }),
            }
        }
    };
    let result = match (&mismatch, rec.status) {
        (Some(_), _) => Outcome::Fail,
        (None, Status::Conjecture) => Outcome::ConjecturePass,
        (None, _) => Outcome::Pass,
    };
    Ok(VerifyReport {
        id: rec.id.clone(),
        status: rec.status,
        order,
        result,
        first_mismatch: mismatch,
        ms: start.elapsed().as_millis() as u64,
    })
}

pub fn find(id: &str) -> Result<IdentityRecord> {
    registry().into_iter().find(|r| r.id == id).ok_or_else(|| Error::UnknownId(id.into()))
}

pub fn verify(id: &str, order: i64) -> Result<VerifyReport> {
    verify_record(&find(id)?, order)
}

/// Orders used by [`verify_all`].
#[derive(Clone, Copy, Debug)]
pub struct SuiteOrders {
    pub q: i64,
    /// Order and degree cap for parameter identities.
    pub param: i64,
}

impl SuiteOrders {
    pub fn uniform(order: i64) -> Self {
        SuiteOrders { q: order, param: order }
    }
}

/// Verifies every record whose status passes `filter`, concurrently, and
/// returns the reports in registry order.
pub fn verify_all(orders: SuiteOrders, filter: Option<&[Status]>) -> Vec<Result<VerifyReport>> {
    let recs: Vec<IdentityRecord> =
        registry().into_iter().filter(|r| filter.is_none_or(|f| f.contains(&r.status))).collect();
    par::map(&recs, |r| verify_record(r, if r.is_param() { orders.param } else { orders.q }))
}

// ---------------------------------------------------------------------------
// Construction helpers.

fn r(n: i64, d: i64) -> Exp {
    r64(n, d)
}

fn quad2(a: [[Exp; 2]; 2], b: [Exp; 2], d: [i64; 2]) -> NahmQuadruple {
    NahmQuadruple::new(vec![a[0].to_vec(), a[1].to_vec()], b.to_vec(), int(0), d.to_vec())
}

/// `Σ q^{αi² + βij + γj² + λ₁i + λ₂j} / ((q^k;q^k)_i (q^{ke};q^{ke})_j)` as a
/// dilated generalized Nahm sum with `d = (1, e)`.
fn double_quad(alpha: Exp, beta: Exp, gamma: Exp, l1: Exp, l2: Exp, k: i64, e: i64) -> NahmQuadruple {
    let (k, e) = (int(k), int(e));
    quad2(
        [[alpha * 2 / k, beta / (k * e)], [beta / k, gamma * 2 / (k * e)]],
        [l1 / k, l2 / k],
        [1, *e.numer()],
    )
}

fn double(alpha: Exp, beta: Exp, gamma: Exp, l1: Exp, l2: Exp, k: i64, e: i64) -> Expr {
    let x = Expr::nahm(double_quad(alpha, beta, gamma, l1, l2, k, e));
    if k == 1 {
        x
    } else {
        x.dilate(int(k))
    }
}

/// Integer-coefficient version of [`double`].
fn dbl(c: [i64; 5], k: i64, e: i64) -> Expr {
    double(int(c[0]), int(c[1]), int(c[2]), int(c[3]), int(c[4]), k, e)
}

fn nahm(a: [[Exp; 2]; 2], b: [Exp; 2], d: [i64; 2]) -> Expr {
    Expr::nahm(quad2(a, b, d))
}

fn j(terms: &[(i64, i64, i32)]) -> Expr {
    Expr::Prod(jprod(terms))
}

fn cj(c: i64, delta: i64, terms: &[(i64, i64, i32)]) -> Expr {
    scaled(jprod(terms), c, int(delta))
}

/// Product of `(sign q^a; q^m)_∞^pow` over integer `(sign, a, m, pow)`.
fn pp(terms: &[(i8, i64, i64, i32)]) -> ProductSpec {
    let t: Vec<_> = terms.iter().map(|&(s, a, m, p)| (s, int(a), int(m), p)).collect();
    pprod(&t)
}

fn p(terms: &[(i8, i64, i64, i32)]) -> Expr {
    Expr::Prod(pp(terms))
}

fn cp(c: i64, delta: i64, terms: &[(i8, i64, i64, i32)]) -> Expr {
    scaled(pp(terms), c, int(delta))
}

/// `1 / (q^{a₁}, …, q^{a_k}; q^m)_∞`.
fn inv_classes(m: i64, classes: &[i64]) -> Expr {
    let t: Vec<_> = classes.iter().map(|&a| (1, a, m, -1)).collect();
    p(&t)
}

fn ss(quad: Exp, lin: Exp, factors: Vec<NPoch>) -> Expr {
    Expr::Single(SingleSum::new(quad, lin, factors))
}

fn num(sign: i8, a: i64, m: i64, k: u32, l: u32) -> NPoch {
    NPoch::num(sign, int(a), int(m), k, l)
}

fn den(sign: i8, a: i64, m: i64, k: u32, l: u32) -> NPoch {
    NPoch::den(sign, int(a), int(m), k, l)
}

/// `(s₁ q^{a₁}, …; -q^m)_∞` over `(sign, a)`.
fn neg_nome(m: i64, terms: &[(i8, i64)]) -> ProductSpec {
    ProductSpec::new(terms.iter().flat_map(|&(s, a)| neg_nome_factors(s, int(a), int(m))).collect())
}

fn half_theta(a: Exp, b: Exp) -> Expr {
    Expr::Theta { a, b, sign: -1 }
}

/// `F_σ(q^α, q^β; q)` with `n₁ ≡ σ (mod 2)`.
fn f_sigma(sigma: u8, alpha: i64, beta: i64) -> Expr {
    Expr::nahm_parity(
        quad2([[int(1), r(1, 2)], [int(1), int(1)]], [int(alpha), int(beta)], [1, 2]),
        vec![Some(sigma), None],
    )
}

fn ex4_quad(b: [i64; 2]) -> Expr {
    nahm([[int(2), int(-1)], [int(-2), int(2)]], [int(b[0]), int(b[1])], [1, 2])
}

fn ex6_lhs() -> Expr {
    double(int(1), int(-3), int(3), int(0), int(0), 2, 3)
}

fn ex6_parity(mask: [Option<u8>; 2]) -> Expr {
    let q = double_quad(int(1), int(-3), int(3), int(0), int(0), 2, 3);
    Expr::nahm_parity(q, mask.to_vec()).dilate(int(2))
}

fn ex7(b: [i64; 2]) -> Expr {
    nahm([[int(2), int(1)], [int(3), int(2)]], [int(b[0]), int(b[1])], [1, 3])
}

fn ex8(b: [i64; 2]) -> Expr {
    nahm([[int(2), int(-1)], [int(-3), int(2)]], [int(b[0]), int(b[1])], [1, 3])
}

/// `(q^{a₁}, …; q^9)_∞^pow` over `(a, pow)`.
fn nine(terms: &[(i64, i32)]) -> Expr {
    let t: Vec<_> = terms.iter().map(|&(a, pw)| (1, a, 9, pw)).collect();
    p(&t)
}

fn cnine(c: i64, delta: i64, terms: &[(i64, i32)]) -> Expr {
    let t: Vec<_> = terms.iter().map(|&(a, pw)| (1, a, 9, pw)).collect();
    cp(c, delta, &t)
}

/// `(-q;q²)_∞^3 / (q;q²)_∞` and its even-step twin `(-q²;q²)_∞^3 / (q;q²)_∞`.
fn ex4_pre(c: i64, delta: i64, odd: bool) -> ProductSpec {
    let a = if odd { 1 } else { 2 };
    let mut s = pp(&[(-1, a, 2, 3), (1, 1, 2, -1)]);
    s = s.with_const(crate::rat::big(c)).with_delta(int(delta));
    s
}

fn ex4_single(pre: ProductSpec, quad: i64, lin: i64, factors: Vec<NPoch>) -> Expr {
    Expr::Prod(pre) * ss(int(quad), int(lin), factors)
}

// ---------------------------------------------------------------------------

/// The full inventory, in a fixed order.
pub fn registry() -> Vec<IdentityRecord> {
    use Status::{Conjecture, Known, Theorem};
    let mut v = Vec::new();
    let one = int(1);
    let zero = int(0);

    // Rogers-Ramanujan and Capparelli.
    v.push(IdentityRecord::q(
        "rr-1",
        Known,
        "Rogers-Ramanujan identities, first",
        nahm1(2, 0),
        inv_classes(5, &[1, 4]),
    ));
    v.push(IdentityRecord::q(
        "rr-2",
        Known,
        "Rogers-Ramanujan identities, second",
        nahm1(2, 1),
        inv_classes(5, &[2, 3]),
    ));
    v.push(IdentityRecord::q(
        "capparelli",
        Known,
        "Capparelli's partition identity",
        nahm([[int(4), int(2)], [int(6), int(4)]], [zero, zero], [1, 3]),
        p(&[(-1, 2, 6, 1), (-1, 3, 6, 1), (-1, 4, 6, 1), (-1, 6, 6, 1)]),
    ));

    // Euler and Jacobi.
    v.push(IdentityRecord::param(
        "euler-1",
        Known,
        "Euler's q-exponential identity, sum of z^n/(q;q)_n at z = uq",
        PExpr::Single(SingleSum::new(zero, one, vec![den(1, 1, 1, 1, 0)]).with_u_weight(1)),
        PExpr::Poch(vec![ParamPoch { pow: -1, ..ParamPoch::inf(1, 1, 0, one, one) }]),
        Params::U,
    ));
    v.push(IdentityRecord::param(
        "euler-2",
        Known,
        "Euler's q-exponential identity, sum of q^(n choose 2) z^n/(q;q)_n at z = uq",
        PExpr::Single(SingleSum::new(r(1, 2), r(1, 2), vec![den(1, 1, 1, 1, 0)]).with_u_weight(1)),
        PExpr::Poch(vec![ParamPoch::inf(-1, 1, 0, one, one)]),
        Params::U,
    ));
    v.push(IdentityRecord::q(
        "jacobi-triple-1",
        Known,
        "Jacobi triple product at z = q^(1/3)",
        Expr::Theta { a: r(1, 2), b: r(-1, 6), sign: -1 },
        Expr::Prod(pprod(&[(1, one, one, 1), (1, r(1, 3), one, 1), (1, r(2, 3), one, 1)])),
    ));
    v.push(IdentityRecord::q(
        "jacobi-triple-2",
        Known,
        "Jacobi triple product at z = -q^(1/2)",
        Expr::Theta { a: r(1, 2), b: zero, sign: 1 },
        Expr::Prod(pprod(&[(1, one, one, 1), (-1, r(1, 2), one, 2)])),
    ));

    // Single-sum identities.
    v.push(IdentityRecord::param(
        "lebesgue",
        Known,
        "Lebesgue identity with parameter a = u",
        PExpr::Single(SingleSum::new(r(1, 2), r(1, 2), vec![num(1, 0, 1, 1, 0).with_u(1), den(1, 1, 1, 1, 0)])),
        PExpr::Poch(vec![ParamPoch::inf(1, 1, 0, one, int(2))]) * PExpr::Lift(p(&[(-1, 1, 1, 1)])),
        Params::U,
    ));
    v.push(IdentityRecord::q(
        "rr-variant",
        Known,
        "Rogers-Ramanujan variant with (-q;q)_{n+1}",
        ss(one, one, vec![num(-1, 1, 1, 1, 1), den(1, 2, 2, 1, 0)]),
        j(&[(0, 5, 1), (1, 5, -1)]),
    ));
    v.push(IdentityRecord::q(
        "gollnitz-gordon-variant",
        Known,
        "Gollnitz-Gordon type sum with (-q;q^2)_n",
        ss(one, one, vec![num(-1, 1, 2, 1, 0), den(1, 2, 2, 1, 0)]),
        inv_classes(8, &[2, 3, 7]),
    ));
    v.push(IdentityRecord::q(
        "slater-16",
        Known,
        "Slater (S.16)",
        ss(one, int(2), vec![den(1, 4, 4, 1, 0)]),
        j(&[(1, 5, 1), (1, 4, -1)]),
    ));
    v.push(IdentityRecord::q(
        "slater-20",
        Known,
        "Slater (S.20)",
        ss(one, zero, vec![den(1, 4, 4, 1, 0)]),
        j(&[(2, 5, 1), (1, 4, -1)]),
    ));
    for (id, lin, l, a) in [("slater-31", 2, 1, 1), ("slater-32", 2, 0, 2), ("slater-33", 0, 0, 3)] {
        v.push(IdentityRecord::q(
            id,
            Known,
            &format!("Slater (S.{})", &id[7..]),
            ss(int(2), int(lin), vec![den(-1, 1, 1, 2, l), den(1, 2, 2, 1, 0)]),
            j(&[(a, 7, 1), (0, 2, -1)]),
        ));
    }
    v.push(IdentityRecord::q(
        "slater-36",
        Known,
        "Slater (S.36)",
        ss(one, zero, vec![num(-1, 1, 2, 1, 0), den(1, 2, 2, 1, 0)]),
        inv_classes(8, &[1, 4, 7]),
    ));
    v.push(IdentityRecord::q(
        "ramanujan-lost-5.3.8",
        Known,
        "Ramanujan's lost notebook, Entry 5.3.8",
        ss(one, zero, vec![num(-1, 3, 6, 1, 0), den(1, 2, 2, 2, 0)]),
        j(&[(0, 2, 1), (2, 24, 1), (10, 24, 1), (0, 1, -1), (0, 24, -1), (4, 24, -1)]),
    ));
    v.push(IdentityRecord::q(
        "mc-laughlin-sills",
        Known,
        "sum with (-q^3;q^3)_n over (q;q)_{2n+1}",
        ss(r(1, 2), r(1, 2), vec![num(-1, 3, 3, 1, 0), den(1, 1, 1, 2, 1)]),
        j(&[(0, 12, 5), (2, 12, 1), (1, 12, -2), (3, 12, -2), (5, 12, -2)]),
    ));
    for (id, lin, a) in [("slater-59", 2, 2), ("slater-60", 1, 4)] {
        v.push(IdentityRecord::q(
            id,
            Known,
            &format!("Slater (S.{})", &id[7..]),
            ss(one, int(lin), vec![den(1, 1, 1, 1, 0), den(1, 1, 2, 1, 1)]),
            j(&[(a, 14, 1), (0, 1, -1)]),
        ));
    }
    v.push(IdentityRecord::q(
        "slater-61",
        Known,
        "Slater (S.61)",
        ss(one, zero, vec![den(1, 1, 2, 1, 0), den(1, 1, 1, 1, 0)]),
        j(&[(6, 14, 1), (0, 1, -1)]),
    ));
    let j14 = |a: i64, b: i64, c: i64| j(&[(0, 2, 1), (0, 14, 3), (0, 1, -1), (a, 14, -1), (b, 14, -1), (c, 14, -1)]);
    v.push(IdentityRecord::q(
        "slater-80",
        Known,
        "Slater (S.80)",
        ss(r(1, 2), r(1, 2), vec![den(1, 1, 1, 1, 0), den(1, 1, 2, 1, 1)]),
        j14(1, 4, 6),
    ));
    v.push(IdentityRecord::q(
        "slater-81",
        Known,
        "Slater (S.81)",
        ss(r(1, 2), r(1, 2), vec![den(1, 1, 2, 1, 0), den(1, 1, 1, 1, 0)]),
        j14(2, 3, 4),
    ));
    v.push(IdentityRecord::q(
        "slater-82",
        Known,
        "Slater (S.82)",
        ss(r(1, 2), r(3, 2), vec![den(1, 1, 1, 1, 0), den(1, 1, 2, 1, 1)]),
        j14(2, 5, 6),
    ));
    v.push(IdentityRecord::q(
        "slater-117",
        Known,
        "Slater (S.117)",
        ss(one, zero, vec![den(1, 1, 2, 1, 0), den(1, 4, 4, 1, 0)]),
        j(&[(0, 2, 1), (0, 14, 1), (3, 28, 1), (11, 28, 1), (0, 1, -1), (0, 28, -1), (4, 28, -1), (12, 28, -1)]),
    ));
    v.push(IdentityRecord::q(
        "slater-118",
        Known,
        "Slater (S.118)",
        ss(one, int(2), vec![den(1, 1, 2, 1, 0), den(1, 4, 4, 1, 0)]),
        j(&[(0, 2, 1), (1, 14, 1), (12, 28, 1), (0, 1, -1), (0, 4, -1), (0, 28, -1)]),
    ));
    v.push(IdentityRecord::q(
        "slater-119",
        Known,
        "Slater (S.119)",
        ss(one, int(2), vec![den(1, 1, 1, 2, 1), den(-1, 2, 2, 1, 0)]),
        j(&[(0, 2, 1), (4, 28, 1), (5, 14, 1), (0, 1, -1), (0, 4, -1), (0, 28, -1)]),
    ));
    v.push(IdentityRecord::q(
        "lem-W-1",
        Theorem,
        "new single-sum identity with (-q;q^2)_{3n} over (q^6;q^6)_{2n}",
        ss(int(3), zero, vec![num(-1, 1, 2, 3, 0), den(1, 6, 6, 2, 0)]),
        j(&[(0, 24, 3), (3, 24, -1), (4, 24, -1), (9, 24, -1)]),
    ));
    v.push(IdentityRecord::q(
        "lem-W-2",
        Theorem,
        "new single-sum identity with (-q;q)_{3n+1} over (q^3;q^3)_{2n+1}",
        ss(r(3, 2), r(3, 2), vec![num(-1, 1, 1, 3, 1), den(1, 3, 3, 2, 1)]),
        j(&[(0, 12, 3), (2, 12, 1), (1, 12, -1), (3, 12, -2), (5, 12, -1)]),
    ));

    // 2-dissection aids.
    v.push(IdentityRecord::q(
        "dissection-j1-square",
        Known,
        "2-dissection of 1/J_1^2",
        j(&[(0, 1, -2)]),
        j(&[(0, 8, 5), (0, 2, -5), (0, 16, -2)]) + cj(2, 1, &[(0, 4, 2), (0, 16, 2), (0, 2, -5), (0, 8, -1)]),
    ));
    v.push(IdentityRecord::q(
        "dissection-j1-four",
        Known,
        "2-dissection of 1/J_1^4",
        j(&[(0, 1, -4)]),
        j(&[(0, 4, 14), (0, 2, -14), (0, 8, -4)]) + cj(4, 1, &[(0, 4, 2), (0, 8, 4), (0, 2, -10)]),
    ));
    v.push(IdentityRecord::q(
        "xia-yao",
        Known,
        "Xia-Yao 2-dissection of 1/(J_1 J_3)",
        j(&[(0, 1, -1), (0, 3, -1)]),
        j(&[(0, 8, 2), (0, 12, 5), (0, 2, -2), (0, 4, -1), (0, 6, -4), (0, 24, -2)])
            + cj(1, 1, &[(0, 4, 5), (0, 24, 2), (0, 2, -4), (0, 6, -2), (0, 8, -2), (0, 12, -1)]),
    ));

    // Example 1 and the Cao-Wang parameter identity.
    let ex1 = [1, 2, 2];
    let e1 = |l1: i64, l2: i64| dbl([ex1[0], ex1[1], ex1[2], l1, l2], 1, 2);
    v.push(IdentityRecord::q("t1-1-1", Known, "Example 1, b = (0,0)", e1(0, 0), j(&[(0, 3, 2), (0, 1, -1), (0, 6, -1)])));
    v.push(IdentityRecord::q("t1-1-2", Known, "Example 1, b = (0,1)", e1(0, 1), p(&[(1, 1, 2, -1)])));
    v.push(IdentityRecord::q("t1-1-3", Known, "Example 1, b = (-1,-1)", e1(-1, -1), p(&[(-1, 0, 1, 1)])));
    v.push(IdentityRecord::q(
        "t1-1-4",
        Known,
        "Example 1, b = (-1/2,0)",
        dbl([2, 4, 4, -1, 0], 2, 2),
        p(&[(-1, 1, 2, 1)]),
    ));
    v.push(
        IdentityRecord::q("t1-1-5", Known, "Example 1, b = (1,2)", e1(1, 2), j(&[(0, 6, 2), (0, 2, -1), (0, 3, -1)]))
            .note("the printed left side lacks the subscript on (q;q); read as (q;q)_i like its siblings"),
    );
    let ex1_quad = |b: [Exp; 2]| quad2([[int(2), int(1)], [int(2), int(2)]], b, [1, 2]);
    v.push(IdentityRecord::param(
        "cao-wang",
        Known,
        "Cao-Wang identity, sum equals (-u;q)_inf",
        PExpr::Nahm { quad: ex1_quad([int(-1), int(-1)]), weights: ParamWeights::u_only(vec![1, 2]) },
        PExpr::Poch(vec![ParamPoch::inf(-1, 1, 0, zero, one)]),
        Params::U,
    ));

    // Example 2 and the Li-Wang parameter identity.
    let ex2_quad = |b: [Exp; 2]| quad2([[int(1), r(-1, 2)], [int(-1), int(1)]], b, [1, 2]);
    v.push(IdentityRecord::q(
        "t1-2-1",
        Known,
        "Example 2, b = (0,0)",
        dbl([1, -2, 2, 0, 0], 2, 2),
        j(&[(0, 2, 3), (0, 3, 2), (0, 1, -2), (0, 4, -2), (0, 6, -1)]),
    ));
    v.push(IdentityRecord::q(
        "t1-2-2",
        Known,
        "Example 2, b = (-1/2,1)",
        Expr::nahm(ex2_quad([r(-1, 2), one])),
        p(&[(-1, 0, 1, 1), (-1, 1, 1, 1)]),
    ));
    v.push(IdentityRecord::q(
        "t1-2-3",
        Known,
        "Example 2, b = (-1/2,0)",
        Expr::nahm(ex2_quad([r(-1, 2), zero])),
        p(&[(-1, 0, 1, 2)]),
    ));
    v.push(IdentityRecord::q(
        "t1-2-4",
        Known,
        "Example 2, b = (-1/2,1/2)",
        dbl([1, -2, 2, -1, 1], 2, 2),
        p(&[(-1, 0, 2, 1), (-1, 1, 2, 1)]),
    ));
    v.push(IdentityRecord::q(
        "t1-2-5",
        Known,
        "Example 2, b = (0,1)",
        dbl([1, -2, 2, 0, 2], 2, 2),
        j(&[(0, 2, 2), (0, 6, 2), (0, 1, -1), (0, 3, -1), (0, 4, -2)]),
    ));
    v.push(IdentityRecord::param(
        "li-wang",
        Known,
        "Li-Wang identity, sum equals (-1,-u;q^2)_inf",
        PExpr::Nahm { quad: ex2_quad([r(-1, 2), zero]), weights: ParamWeights::u_only(vec![0, 1]) }.dilate(int(2)),
        PExpr::Lift(p(&[(-1, 0, 2, 1)])) * PExpr::Poch(vec![ParamPoch::inf(-1, 1, 0, zero, int(2))]),
        Params::U,
    ));

    // New identities sharing (A, d) with Examples 1 and 2.
    v.push(IdentityRecord::param(
        "thm-new-exam1-param",
        Theorem,
        "Example 1 matrix, b = ((a-3)/2, a) with u = q^a: (1+uq+u/q)(-uq^3;q^2)_inf",
        PExpr::Nahm { quad: ex1_quad([r(-3, 2), zero]), weights: ParamWeights::u_only(vec![1, 2]) }.dilate(int(2)),
        PExpr::Poly(vec![(0, 0, zero, 1), (1, 0, one, 1), (1, 0, int(-1), 1)])
            * PExpr::Poch(vec![ParamPoch::inf(-1, 1, 0, int(3), int(2))]),
        Params::U,
    ));
    for a in 0..4 {
        v.push(IdentityRecord::q(
            &format!("thm-new-exam1-a{a}"),
            Theorem,
            &format!("Example 1 matrix, b = ((a-3)/2, a) at a = {a}"),
            Expr::nahm(ex1_quad([r(a - 3, 2), int(a)])).dilate(int(2)),
            (Expr::int(1) + Expr::mono(1, int(a + 1)) + Expr::mono(1, int(a - 1))) * p(&[(-1, a + 3, 2, 1)]),
        ));
    }
    v.push(IdentityRecord::param(
        "thm-new-exam2-param",
        Theorem,
        "Example 2 matrix, b = (-3/2, (a+3)/2) with v = q^a: 2q^-2(1+qv+q^2)(-q^2,-q^3 v;q^2)_inf",
        PExpr::Nahm {
            quad: ex2_quad([r(-3, 2), r(3, 2)]),
            weights: ParamWeights { u: vec![0, 0], v: vec![0, 1] },
        }
        .dilate(int(2)),
        PExpr::Poly(vec![(0, 0, int(-2), 2), (0, 1, int(-1), 2), (0, 0, zero, 2)])
            * PExpr::Lift(p(&[(-1, 2, 2, 1)]))
            * PExpr::Poch(vec![ParamPoch::inf(-1, 0, 1, int(3), int(2))]),
        Params::V,
    ));
    for a in 0..3 {
        v.push(IdentityRecord::q(
            &format!("thm-new-exam2-a{a}"),
            Theorem,
            &format!("Example 2 matrix, b = (-3/2, (a+3)/2) at a = {a}"),
            Expr::nahm(ex2_quad([r(-3, 2), r(a + 3, 2)])).dilate(int(2)),
            (Expr::mono(2, int(-2)) + Expr::mono(2, int(a - 1)) + Expr::int(2))
                * p(&[(-1, 2, 2, 1), (-1, a + 3, 2, 1)]),
        ));
    }

    // Example 3.
    let pre3 = |a: i64| p(&[(-1, 1, 2, 1)]) * j(&[(a, 7, 1), (0, 2, -1)]);
    v.push(IdentityRecord::q("t1-3-1", Known, "Example 3, b = (0,0)", dbl([1, 2, 2, 0, 0], 2, 2), pre3(3)));
    v.push(IdentityRecord::q("t1-3-2", Known, "Example 3, b = (0,1)", dbl([1, 2, 2, 0, 2], 2, 2), pre3(2)));
    v.push(IdentityRecord::q("t1-3-3", Known, "Example 3, b = (1,1)", dbl([1, 2, 2, 2, 2], 2, 2), pre3(1)));

    // Parity-restricted sums.
    let odd_pre = |delta: Exp, rest: Expr| {
        Expr::Prod(pprod(&[(-1, one, int(2), 1), (1, int(2), int(2), -1)]).with_delta(delta)) * rest
    };
    let even_pre = |rest: Expr| p(&[(-1, 2, 2, 1), (1, 2, 2, -1)]) * rest;
    v.push(IdentityRecord::q(
        "thm-parity-r1",
        Theorem,
        "F_0(1,1;q)",
        f_sigma(0, 0, 0),
        odd_pre(zero, j(&[(12, 28, 1)])),
    ));
    v.push(IdentityRecord::q(
        "thm-parity-r2",
        Theorem,
        "F_1(1,1;q)",
        f_sigma(1, 0, 0),
        even_pre(Expr::Prod(neg_nome(7, &[(-1, 1), (1, 6), (-1, 7)]).with_delta(r(1, 2)))),
    ));
    v.push(IdentityRecord::q(
        "thm-parity-r3",
        Theorem,
        "F_0(1,q;q)",
        f_sigma(0, 0, 1),
        even_pre(Expr::Prod(neg_nome(7, &[(-1, 3), (1, 4), (-1, 7)]))),
    ));
    v.push(IdentityRecord::q(
        "thm-parity-r4",
        Theorem,
        "F_1(1,q;q)",
        f_sigma(1, 0, 1),
        odd_pre(r(1, 2), j(&[(8, 28, 1)])),
    ));
    v.push(IdentityRecord::q(
        "thm-parity-r5",
        Theorem,
        "F_0(q,q;q)",
        f_sigma(0, 1, 1),
        even_pre(Expr::Prod(neg_nome(7, &[(1, 2), (-1, 5), (-1, 7)]))),
    ));
    v.push(IdentityRecord::q(
        "thm-parity-r6",
        Theorem,
        "F_1(q,q;q)",
        f_sigma(1, 1, 1),
        odd_pre(r(3, 2), j(&[(4, 28, 1)])),
    ));

    // Components of V as formal Puiseux identities.
    let v_odd = |delta: i64, a: i64, b: i64| {
        Expr::Prod(pprod(&[(1, one, int(2), 1), (1, int(2), int(2), -1)]).with_delta(r(delta, 56)))
            * half_theta(int(a), int(b))
    };
    let v_even = |delta: i64, b: i64| {
        Expr::Prod(pprod(&[(-1, int(2), int(2), 1), (1, int(2), int(2), -1)]).with_delta(r(delta, 56)))
            * half_theta(r(7, 2), r(b, 2))
    };
    let comps: [(&str, u8, i64, i64, i64, i64, Expr); 6] = [
        ("v-closed-1", 0, 0, 0, 0, -3, v_odd(-3, 14, 2)),
        ("v-closed-2", 1, 0, 1, 3, 1, v_odd(29, 14, 6)),
        ("v-closed-3", 1, 1, 1, 1, 9, v_odd(93, 14, 10)),
        ("v-closed-4", 1, 0, 0, 3, -3, v_even(25, 5)),
        ("v-closed-5", 0, 0, 1, 0, 1, v_even(1, 1)),
        ("v-closed-6", 0, 1, 1, 0, 9, v_even(9, 3)),
    ];
    for (k, (id, sigma, a, b, phase, shift, rhs)) in comps.into_iter().enumerate() {
        v.push(IdentityRecord::q(
            id,
            Theorem,
            &format!("component V_{} of the q -> -q companion vector", k + 1),
            f_sigma(sigma, a, b).twist(phase).shift(r(shift, 56)),
            rhs,
        ));
    }

    // Example 4: three-way agreement, single-sum splits and constant terms.
    let e4a = [
        j(&[(0, 2, 6), (0, 28, 3), (0, 1, -4), (0, 4, -2), (4, 28, -1), (6, 28, -1), (8, 28, -1)])
            + cj(-2, 1, &[(0, 4, 2), (4, 28, 1), (5, 14, 1), (0, 1, -2), (0, 2, -1), (0, 28, -1)]),
        cj(2, 0, &[(0, 4, 2), (1, 14, 1), (12, 28, 1), (0, 1, -2), (0, 2, -1), (0, 28, -1)])
            + cj(-1, 1, &[(0, 2, 6), (0, 28, 3), (0, 1, -4), (0, 4, -2), (4, 28, -1), (10, 28, -1), (12, 28, -1)]),
        cj(
            2,
            0,
            &[(0, 4, 3), (0, 14, 1), (3, 28, 1), (11, 28, 1), (0, 1, -2), (0, 2, -1), (0, 28, -1), (4, 28, -1), (12, 28, -1)],
        ) + cj(-1, 0, &[(0, 2, 6), (0, 28, 3), (0, 1, -4), (0, 4, -2), (2, 28, -1), (8, 28, -1), (12, 28, -1)]),
    ];
    let e4b = [
        j(&[(0, 4, 5), (0, 28, 1), (6, 56, 1), (16, 56, 1), (22, 56, 1), (0, 2, -4), (0, 8, -2), (0, 56, -3)])
            + cj(2, 1, &[(0, 4, 1), (0, 8, 1), (0, 56, 3), (2, 4, -1), (4, 8, -1), (4, 56, -1), (16, 56, -1), (24, 56, -1)]),
        cj(2, 0, &[(0, 8, 1), (0, 56, 1), (24, 56, 1), (0, 2, -2), (12, 56, -1)])
            + cj(1, 1, &[(0, 4, 5), (0, 28, 1), (8, 56, 1), (10, 56, 1), (18, 56, 1), (0, 2, -4), (0, 8, -2), (0, 56, -3)]),
        j(&[(0, 4, 5), (0, 28, 1), (2, 56, 1), (24, 56, 1), (26, 56, 1), (0, 2, -4), (0, 8, -2), (0, 56, -3)])
            + cj(2, 3, &[(0, 8, 1), (0, 56, 1), (16, 56, 1), (0, 2, -2), (20, 56, -1)]),
    ];
    // (S1, S2) as prefactor times single sum, and the (alpha, beta) of F(q^alpha, q^beta).
    let e4s: [(Expr, Expr); 3] = [
        (
            ex4_single(ex4_pre(1, 0, true), 1, 1, vec![den(1, 2, 2, 1, 0), den(1, 2, 4, 1, 0)]),
            ex4_single(ex4_pre(-2, 1, false), 1, 2, vec![den(1, 1, 2, 1, 1), den(1, 4, 4, 1, 0)]),
        ),
        (
            ex4_single(
                ex4_pre(2, 0, false),
                1,
                2,
                vec![den(1, 2, 2, 1, 0), den(-1, 2, 2, 1, 0), den(1, 1, 2, 1, 0)],
            ),
            ex4_single(ex4_pre(-1, 1, true), 1, 3, vec![den(1, 2, 2, 1, 0), den(1, 2, 4, 1, 1)]),
        ),
        (
            ex4_single(
                ex4_pre(2, 0, false),
                1,
                0,
                vec![den(1, 2, 2, 1, 0), den(-1, 2, 2, 1, 0), den(1, 1, 2, 1, 0)],
            ),
            ex4_single(ex4_pre(-1, 0, true), 1, 1, vec![den(1, 2, 2, 1, 0), den(1, 2, 4, 1, 1)]),
        ),
    ];
    let e4split = |k: usize| -> [Expr; 2] {
        let Expr::Sum(t) = e4a[k].clone() else { unreachable!() };
        [t[0].clone(), t[1].clone()]
    };
    let e4b_data: [([i64; 2], (i64, i64)); 3] = [([0, 0], (0, 0)), ([-1, 2], (-1, 2)), ([1, 0], (1, 0))];
    for (k, (b, (al, be))) in e4b_data.into_iter().enumerate() {
        let n = k + 1;
        let lhs = ex4_quad(b);
        let label = format!("Example 4, b = ({},{})", b[0], b[1]);
        v.push(IdentityRecord::q(&format!("ex4-{n}-a"), Theorem, &format!("{label}, first expression"), lhs.clone(), e4a[k].clone()));
        v.push(IdentityRecord::q(
            &format!("ex4-{n}-b"),
            Theorem,
            &format!("{label}, 2-dissected expression"),
            lhs.clone(),
            e4b[k].clone(),
        ));
        v.push(IdentityRecord::q(
            &format!("ex4-{n}-ab"),
            Theorem,
            &format!("{label}, first expression equals its 2-dissection"),
            e4a[k].clone(),
            e4b[k].clone(),
        ));
        let [pa, pb] = e4split(k);
        let (s1, s2) = e4s[k].clone();
        v.push(IdentityRecord::q(&format!("ex4-{n}-s1"), Theorem, &format!("{label}, residue term S1"), s1.clone(), pa));
        v.push(IdentityRecord::q(&format!("ex4-{n}-s2"), Theorem, &format!("{label}, residue term S2"), s2.clone(), pb));
        let integrand = Expr::ConstTerm(example4_integrand(int(al), int(be)));
        v.push(IdentityRecord::q(
            &format!("ex4-{n}-ct"),
            Theorem,
            &format!("{label}, constant term of the z-integrand equals the double sum"),
            integrand.clone(),
            lhs,
        ));
        v.push(IdentityRecord::q(
            &format!("ex4-{n}-ct-split"),
            Theorem,
            &format!("{label}, constant term equals S1 + S2"),
            integrand,
            s1 + s2,
        ));
    }

    // Example 6.
    let e6a = j(&[(0, 2, 2), (0, 6, 1), (0, 24, 1), (0, 1, -1), (0, 3, -1), (0, 4, -1), (4, 24, -1)])
        + cj(2, 1, &[(0, 4, 1), (0, 24, 3), (4, 24, 1), (0, 2, -1), (2, 24, -1), (6, 24, -2), (10, 24, -1)]);
    let e6b = j(&[(0, 24, 6), (4, 24, -3), (6, 24, -3)])
        + cj(3, 1, &[(0, 24, 6), (4, 24, 1), (2, 24, -2), (6, 24, -3), (10, 24, -2)]);
    v.push(IdentityRecord::q("ex6-a", Theorem, "Example 6, first expression", ex6_lhs(), e6a.clone()));
    v.push(IdentityRecord::q("ex6-b", Theorem, "Example 6, 2-dissected expression", ex6_lhs(), e6b.clone()));
    v.push(IdentityRecord::q("ex6-ab", Theorem, "Example 6, the two expressions agree", e6a, e6b));
    v.push(IdentityRecord::q(
        "ex6-s0",
        Theorem,
        "Example 6, terms with i even",
        ex6_parity([Some(0), None]),
        j(&[(0, 2, 1), (0, 6, 2), (2, 24, 1), (10, 24, 1), (0, 1, -1), (0, 3, -1), (0, 12, -1), (0, 24, -1), (4, 24, -1)]),
    ));
    v.push(IdentityRecord::q(
        "ex6-s1",
        Theorem,
        "Example 6, terms with i odd",
        ex6_parity([Some(1), None]),
        cj(2, 1, &[(0, 12, 1), (0, 24, 5), (4, 24, 1), (0, 6, -1), (2, 24, -2), (6, 24, -2), (10, 24, -2)]),
    ));
    v.push(IdentityRecord::q(
        "ex6-t0",
        Theorem,
        "Example 6, terms with j even",
        ex6_parity([None, Some(0)]),
        j(&[(0, 2, 2), (0, 24, 3), (0, 1, -1), (0, 4, -1), (3, 24, -1), (4, 24, -1), (9, 24, -1)]),
    ));
    v.push(IdentityRecord::q(
        "ex6-t1",
        Theorem,
        "Example 6, terms with j odd",
        ex6_parity([None, Some(1)]),
        cj(2, 1, &[(0, 4, 1), (0, 24, 3), (4, 24, 1), (0, 2, -1), (2, 24, -1), (6, 24, -2), (10, 24, -1)]),
    ));

    // Examples 7 and 8: Kanade-Russell and related conjectures.
    let kr = "Kanade-Russell conjecture";
    v.push(IdentityRecord::q("kr-1", Conjecture, kr, ex7([0, 0]), inv_classes(9, &[1, 3, 6, 8])));
    v.push(IdentityRecord::q("kr-2", Conjecture, kr, ex7([1, 3]), inv_classes(9, &[2, 3, 6, 7])));
    v.push(IdentityRecord::q("kr-3", Conjecture, kr, ex7([2, 3]), inv_classes(9, &[3, 4, 5, 6])));
    v.push(IdentityRecord::q(
        "kr-4",
        Conjecture,
        "Kanade-Russell companion (not modular)",
        ex7([1, 2]),
        inv_classes(9, &[2, 3, 5, 8]),
    ));
    let c1 = "new two-term product form for a Kanade-Russell sum";
    v.push(IdentityRecord::q(
        "conj-KR-1",
        Conjecture,
        c1,
        ex7([0, 0]),
        nine(&[(3, 2), (6, 2), (4, -2), (5, -2), (1, -1), (2, -1), (7, -1), (8, -1)])
            + cnine(-1, 2, &[(1, 2), (8, 2), (4, -3), (5, -3), (3, -1), (6, -1)]),
    ));
    v.push(IdentityRecord::q(
        "conj-KR-2",
        Conjecture,
        c1,
        ex7([1, 3]),
        nine(&[(3, 2), (6, 2), (2, -2), (4, -2), (5, -2), (7, -2)])
            + cnine(-1, 2, &[(1, 3), (8, 3), (4, -3), (5, -3), (2, -1), (3, -1), (6, -1), (7, -1)]),
    ));
    v.push(IdentityRecord::q(
        "conj-KR-3",
        Conjecture,
        c1,
        ex7([2, 3]),
        nine(&[(2, 2), (7, 2), (4, -2), (5, -2), (1, -1), (3, -1), (6, -1), (8, -1)])
            + cnine(-1, 1, &[(1, 1), (2, 1), (7, 1), (8, 1), (4, -3), (5, -3), (3, -1), (6, -1)]),
    ));
    let c2 = "dual of the Kanade-Russell matrix, two-term product form";
    v.push(IdentityRecord::q(
        "conj-dual-KR-1",
        Conjecture,
        c2,
        ex8([0, 0]),
        nine(&[(1, -2), (3, -2), (6, -2), (8, -2)]) + cnine(1, 1, &[(3, -2), (6, -2), (2, -1), (4, -1), (5, -1), (7, -1)]),
    ));
    v.push(IdentityRecord::q(
        "conj-dual-KR-2",
        Conjecture,
        c2,
        ex8([-1, 3]),
        nine(&[(2, -2), (3, -2), (6, -2), (7, -2)]) + nine(&[(3, -2), (6, -2), (1, -1), (4, -1), (5, -1), (8, -1)]),
    ));
    v.push(IdentityRecord::q(
        "conj-dual-KR-3",
        Conjecture,
        c2,
        ex8([1, 0]),
        nine(&[(2, 1), (7, 1), (1, -2), (3, -2), (6, -2), (8, -2), (4, -1), (5, -1)])
            + cnine(-2, 1, &[(3, -2), (4, -2), (5, -2), (6, -2)]),
    ));
    v.push(IdentityRecord::q(
        "lw-conj",
        Conjecture,
        "Li-Wang conjecture, dual of the Kanade-Russell companion",
        ex8([0, 1]),
        p(&[(1, 6, 9, 1), (1, 1, 6, -1), (1, 2, 6, -2), (1, 4, 6, -1), (1, 5, 6, -2)]),
    ));
    v.push(
        IdentityRecord::q(
            "conj-KR-4-new",
            Conjecture,
            "two-term product form for the Kanade-Russell companion",
            ex7([1, 2]),
            nine(&[(2, 1), (7, 2), (1, -1), (3, -1), (4, -1), (5, -2), (8, -2)])
                + cnine(-1, 1, &[(1, 1), (7, 1), (3, -1), (4, -2), (5, -3)]),
        )
        .note("checked against the double sum directly; no equivalence with the one-term product is claimed"),
    );
    v.push(
        IdentityRecord::q(
            "conj-LW-new",
            Conjecture,
            "two-term product form for the Li-Wang conjecture",
            ex8([0, 1]),
            nine(&[(6, 1), (7, 1), (5, -3), (8, -3), (1, -2), (4, -2)])
                + cnine(-1, 1, &[(6, 1), (2, -1), (8, -1), (4, -3), (5, -4)]),
        )
        .note("checked against the double sum directly; no equivalence with the one-term product is claimed"),
    );

    // Example 10.
    let m4 = |a: i64| p(&[(-1, 0, 4, 1)]) * j(&[(a, 5, 1), (1, 4, -1)]);
    v.push(IdentityRecord::q("ex10-1", Theorem, "Example 10, b = (-1/2,1/2)", dbl([2, -4, 3, -2, 2], 4, 2), m4(2)));
    v.push(IdentityRecord::q("ex10-2", Theorem, "Example 10, b = (-1/2,1)", dbl([2, -4, 3, -2, 4], 4, 2), m4(1)));

    // Example 12.
    let ex12 = |b0: i64, b1: i64| nahm([[int(1), r(-1, 2)], [int(-1), r(3, 2)]], [r(b0, 2), r(b1, 2)], [1, 2]);
    let m12 = |delta: i64, cls: [i64; 2]| cp(2, delta, &[(-1, 1, 1, 1), (1, cls[0], 5, -1), (1, cls[1], 5, -1)]);
    v.push(IdentityRecord::q("ex12-1", Theorem, "Example 12, b = (-3/2,5/2)", ex12(-3, 5), m12(-1, [1, 4])));
    v.push(IdentityRecord::q("ex12-2", Theorem, "Example 12, b = (-1/2,1/2)", ex12(-1, 1), m12(0, [1, 4])));
    v.push(IdentityRecord::q("ex12-3", Theorem, "Example 12, b = (-1/2,3/2)", ex12(-1, 3), m12(0, [2, 3])));

    // Examples 13 and 14.
    let ex13 = |b0: i64, b1: i64| nahm([[int(3), int(1)], [int(4), int(2)]], [r(b0, 2), int(b1)], [1, 4]);
    let ex14 = |b0: i64, b1: i64| nahm([[int(1), r(-1, 2)], [int(-2), r(3, 2)]], [r(b0, 2), int(b1)], [1, 4]);
    v.push(IdentityRecord::q("ex13-1", Known, "Example 13 matrix, b = (1/2,2)", ex13(1, 2), inv_classes(8, &[2, 3, 7])));
    v.push(IdentityRecord::q("ex13-2", Known, "Example 13 matrix, b = (-1/2,2)", ex13(-1, 2), inv_classes(8, &[1, 5, 6])));
    v.push(IdentityRecord::q(
        "thm-new-exam13",
        Theorem,
        "Example 13 matrix, b = (-5/2,0): q^-1 (1+q)/(q,q^4,q^7;q^8)_inf",
        ex13(-5, 0),
        (Expr::mono(1, int(-1)) + Expr::int(1)) * inv_classes(8, &[1, 4, 7]),
    ));
    v.push(IdentityRecord::q(
        "t1-14-1",
        Known,
        "Example 14, b = (-1/2,1)",
        ex14(-1, 1),
        cp(2, 0, &[(1, 1, 2, -1), (1, 1, 8, -1), (1, 4, 8, -1), (1, 7, 8, -1)]),
    ));
    v.push(IdentityRecord::q(
        "t1-14-2",
        Known,
        "Example 14, b = (-1/2,3)",
        ex14(-1, 3),
        cp(2, 0, &[(1, 1, 2, -1), (1, 3, 8, -1), (1, 4, 8, -1), (1, 5, 8, -1)]),
    ));
    let m14 = |delta: i64, cls: [i64; 3]| {
        cp(2, delta, &[(-1, 1, 1, 1), (1, cls[0], 8, -1), (1, cls[1], 8, -1), (1, cls[2], 8, -1)])
    };
    v.push(IdentityRecord::q("thm-new-exam14-1", Theorem, "Example 14 matrix, b = (-1/2,2)", ex14(-1, 2), m14(0, [2, 3, 7])));
    v.push(IdentityRecord::q("thm-new-exam14-2", Theorem, "Example 14 matrix, b = (-3/2,4)", ex14(-3, 4), m14(-1, [1, 5, 6])));
    v.push(IdentityRecord::q(
        "thm-new-exam14-3",
        Theorem,
        "Example 14 matrix, b = (-5/2,5)",
        ex14(-5, 5),
        (Expr::int(1) + Expr::mono(1, int(1))) * m14(-3, [1, 4, 7]),
    ));

    v
}

fn nahm1(a: i64, b: i64) -> Expr {
    Expr::nahm(NahmQuadruple::from_ints(&[&[a]], &[b], &[1]))
}
