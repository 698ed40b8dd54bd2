//! Generalized Nahm sums
//! `Σ_n q^{½nᵀADn + nᵀb + c} / ∏_i (q^{d_i}; q^{d_i})_{n_i}` and their duals.
//!
//! Enumeration uses a provable ball: with `λ` a rational lower bound on the
//! smallest eigenvalue of `S = AD` and `β = ‖b‖₁`, every `n` with
//! `‖n‖ ≥ R` has exponent `≥ ½λR² − βR`, so a finite box filtered exactly
//! covers every term below the requested order. Evaluation is a nested Horner
//! scheme: for each coordinate the denominators `(q^d;q^d)_v` are peeled off
//! one binomial division at a time, so no Pochhammer symbol is ever formed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::param::{ParamSeries, TailBound};
use crate::rat::{big_from_r64, ceil_r64, fmt_r64, int, r64, r64_from_big, serde_r64, serde_r64_mat, serde_r64_vec, Exp};
use crate::series::QSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NahmQuadruple {
    #[serde(rename = "A", with = "serde_r64_mat")]
    pub a: Vec<Vec<Exp>>,
    #[serde(with = "serde_r64_vec")]
    pub b: Vec<Exp>,
    #[serde(with = "serde_r64", default)]
    pub c: Exp,
    pub d: Vec<i64>,
}

/// Per-coordinate residue constraint mod 2.
pub type ParityMask = Vec<Option<u8>>;

/// Quadruple JSON with an optional parity mask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NahmInput {
    #[serde(flatten)]
    pub quad: NahmQuadruple,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<ParityMask>,
}

/// Formal parameter weights: the term for `n` carries `u^{Σ u_i n_i} v^{Σ v_i n_i}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamWeights {
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

impl ParamWeights {
    pub fn u_only(u: Vec<u32>) -> Self {
        let v = vec![0; u.len()];
        ParamWeights { u, v }
    }
}

fn to_big(m: &[Vec<Exp>]) -> Vec<Vec<BigRational>> {
    m.iter().map(|row| row.iter().map(|x| big_from_r64(*x)).collect()).collect()
}

/// Positive definiteness by Gaussian elimination: all pivots positive.
fn is_pos_def(m: &[Vec<BigRational>]) -> bool {
    let n = m.len();
    let mut a = m.to_vec();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

/// Exact inverse by Gauss-Jordan.
pub fn invert_matrix(m: &[Vec<Exp>]) -> Result<Vec<Vec<Exp>>> {
    let n = m.len();
    let mut a = to_big(m);
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(k, p);
        inv.swap(k, p);
        let piv = a[k][k].clone();
        for j in 0..n {
            a[k][j] = &a[k][j] / &piv;
            inv[k][j] = &inv[k][j] / &piv;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
                let t = &f * &inv[k][j];
                inv[i][j] -= t;
            }
        }
    }
    inv.iter()
        .map(|row| {
            row.iter()
                .map(|x| r64_from_big(x).ok_or_else(|| Error::Dimension("inverse entry exceeds 64 bits".into())))
                .collect()
        })
        .collect()
}

impl NahmQuadruple {
    pub fn new(a: Vec<Vec<Exp>>, b: Vec<Exp>, c: Exp, d: Vec<i64>) -> Self {
        NahmQuadruple { a, b, c, d }
    }

    /// Integer matrix and vector shorthand with `c = 0`.
    pub fn from_ints(a: &[&[i64]], b: &[i64], d: &[i64]) -> Self {
        NahmQuadruple {
            a: a.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect(),
            b: b.iter().map(|x| int(*x)).collect(),
            c: Exp::zero(),
            d: d.to_vec(),
        }
    }

    pub fn with_b(&self, b: Vec<Exp>) -> Self {
        NahmQuadruple { b, ..self.clone() }
    }

    pub fn with_c(&self, c: Exp) -> Self {
        NahmQuadruple { c, ..self.clone() }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    /// `S = AD`.
    pub fn symmetrized(&self) -> Vec<Vec<Exp>> {
        self.a
            .iter()
            .map(|row| row.iter().zip(&self.d).map(|(x, d)| *x * int(*d)).collect())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rank();
        if r == 0 {
            return Err(Error::Dimension("rank 0 quadruple".into()));
        }
        if self.a.iter().any(|row| row.len() != r) || self.b.len() != r || self.d.len() != r {
            return Err(Error::Dimension(format!("inconsistent sizes for rank {r}")));
        }
        if self.d.iter().any(|&d| d <= 0) {
            return Err(Error::Dimension("symmetrizer entries must be positive".into()));
        }
        let s = self.symmetrized();
        for i in 0..r {
            for j in 0..i {
                if s[i][j] != s[j][i] {
                    return Err(Error::NonSymmetric);
                }
            }
        }
        if !is_pos_def(&to_big(&s)) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(())
    }

    /// Rational `λ > 0` with `S - λI` positive definite.
    pub fn eigen_floor(&self) -> Exp {
        let s = to_big(&self.symmetrized());
        let shifted = |lam: &BigRational| {
            let mut m = s.clone();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] -= lam;
            }
            m
        };
        let mut lam = (0..s.len()).map(|i| s[i][i].clone()).min().unwrap();
        let two = BigRational::from_integer(BigInt::from(2));
        while !is_pos_def(&shifted(&lam)) {
            lam = &lam / &two;
        }
        let (mut lo, mut hi) = (lam.clone(), &lam * &two);
        for _ in 0..6 {
            let mid = (&lo + &hi) / &two;
            if is_pos_def(&shifted(&mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        r64_from_big(&lo).expect("eigenvalue floor fits in 64 bits")
    }

    /// Exponent `½nᵀSn + nᵀb` without `c`.
    pub fn quad_exponent(&self, n: &[i64]) -> Exp {
        let s = self.symmetrized();
        let mut e = Exp::zero();
        for i in 0..n.len() {
            if n[i] == 0 {
                continue;
            }
            for j in 0..n.len() {
                e += s[i][j] * int(n[i] * n[j]);
            }
        }
        e / int(2) + n.iter().zip(&self.b).map(|(x, b)| *b * int(*x)).sum::<Exp>()
    }

    fn l1_b(&self) -> Exp {
        self.b.iter().map(|x| x.abs()).sum()
    }

    /// Radius `R`: every `n` with `‖n‖₂ ≥ R` has exponent `≥ bound`.
    fn radius(&self, lam: Exp, bound: Exp) -> i64 {
        let beta = self.l1_b();
        let mut t = ceil_r64(beta / lam).max(1);
        loop {
            let tt = int(t);
            if lam * tt * tt / int(2) - beta * tt >= bound {
                return t;
            }
            t += 1;
        }
    }

    /// Lattice points with `½nᵀADn + nᵀb < order - c`, paired with the full exponent.
    pub fn enumerate_lattice(&self, order: Exp) -> Result<Vec<(Vec<i64>, Exp)>> {
        self.validate()?;
        let work = order - self.c;
        let lam = self.eigen_floor();
        let rad = self.radius(lam, work);
        let r = self.rank();
        let mut out = Vec::new();
        let mut n = vec![0i64; r];
        fn rec(q: &NahmQuadruple, i: usize, norm2: i64, rad: i64, work: Exp, n: &mut Vec<i64>, out: &mut Vec<(Vec<i64>, Exp)>) {
            if i == n.len() {
                let e = q.quad_exponent(n);
                if e < work {
                    out.push((n.clone(), e + q.c));
                }
                return;
            }
            for v in 0..rad {
                let nn = norm2 + v * v;
                if nn >= rad * rad {
                    break;
                }
                n[i] = v;
                rec(q, i + 1, nn, rad, work, n, out);
            }
            n[i] = 0;
        }
        rec(self, 0, 0, rad, work, &mut n, &mut out);
        Ok(out)
    }

    /// Dual quadruple `(A⁻¹, A⁻¹b, ½bᵀ(AD)⁻¹b − tr D/24 − c, d)`.
    pub fn dual(&self) -> Result<NahmQuadruple> {
        let r = self.rank();
        if self.a.iter().any(|row| row.len() != r) || self.b.len() != r || self.d.len() != r {
            return Err(Error::Dimension(format!("inconsistent sizes for rank {r}")));
        }
        let ainv = invert_matrix(&self.a)?;
        let bstar: Vec<Exp> = ainv
            .iter()
            .map(|row| row.iter().zip(&self.b).map(|(x, y)| *x * *y).sum())
            .collect();
        // (AD)^{-1} = D^{-1} A^{-1}
        let mut quad = Exp::zero();
        for i in 0..r {
            quad += self.b[i] * bstar[i] / int(self.d[i]);
        }
        let tr: i64 = self.d.iter().sum();
        let c = quad / int(2) - r64(tr, 24) - self.c;
        Ok(NahmQuadruple { a: ainv, b: bstar, c, d: self.d.clone() })
    }
}

/// Dual of `q`; errors with `SingularMatrix` when `A` is not invertible.
pub fn dual_quadruple(q: &NahmQuadruple) -> Result<NahmQuadruple> {
    q.dual()
}

type Comps = BTreeMap<(u32, u32), QSeries>;

struct Engine<'a> {
    q: &'a NahmQuadruple,
    mask: Vec<Option<u8>>,
    wu: Vec<u32>,
    wv: Vec<u32>,
    udeg: u32,
    vdeg: u32,
    work: Exp,
    rad: i64,
}

fn comps_add(acc: &mut Comps, other: Comps) {
    for (k, s) in other {
        let sum = match acc.remove(&k) {
            Some(x) => x.add(&s),
            None => s,
        };
        if !sum.is_zero() {
            acc.insert(k, sum);
        }
    }
}

impl Engine<'_> {
    fn allowed(&self, i: usize, v: i64) -> bool {
        match self.mask.get(i).copied().flatten() {
            Some(res) => v.rem_euclid(2) == res as i64,
            None => true,
        }
    }

    fn leaf(&self, n: &[i64]) -> Comps {
        let mut out = Comps::new();
        let e = self.q.quad_exponent(n);
        if e >= self.work {
            return out;
        }
        let ku: i64 = n.iter().zip(&self.wu).map(|(x, w)| x * *w as i64).sum();
        let kv: i64 = n.iter().zip(&self.wv).map(|(x, w)| x * *w as i64).sum();
        if ku > self.udeg as i64 || kv > self.vdeg as i64 {
            return out;
        }
        out.insert((ku as u32, kv as u32), QSeries::monomial(e, BigRational::one(), self.work));
        out
    }

    fn child(&self, i: usize, v: i64, n: &mut Vec<i64>, norm2: i64) -> Comps {
        n[i] = v;
        let out = if i + 1 == n.len() { self.leaf(n) } else { self.level(i + 1, n, norm2 + v * v) };
        n[i] = 0;
        out
    }

    /// Sum over coordinates `i..` with the prefix fixed, by Horner in `n_i`.
    fn level(&self, i: usize, n: &mut Vec<i64>, norm2: i64) -> Comps {
        let vals: Vec<i64> = (0..self.rad).take_while(|v| norm2 + v * v < self.rad * self.rad).collect();
        let children: Vec<Comps> = if i == 0 {
            par::map(&vals, |&v| {
                if !self.allowed(i, v) {
                    return Comps::new();
                }
                let mut m = n.clone();
                self.child(i, v, &mut m, norm2)
            })
        } else {
            vals.iter()
                .map(|&v| if self.allowed(i, v) { self.child(i, v, n, norm2) } else { Comps::new() })
                .collect()
        };
        self.horner(i, children)
    }

    fn horner(&self, i: usize, children: Vec<Comps>) -> Comps {
        let d = self.q.d[i];
        let Some(top) = children.iter().rposition(|c| !c.is_empty()) else {
            return Comps::new();
        };
        let mut acc = Comps::new();
        for (v, ch) in children.into_iter().enumerate().take(top + 1).rev() {
            if !acc.is_empty() {
                for s in acc.values_mut() {
                    s.div_binomial(-1, int(d * (v as i64 + 1))).expect("positive exponent");
                }
            }
            comps_add(&mut acc, ch);
        }
        acc
    }
}

fn check_mask(q: &NahmQuadruple, mask: &[Option<u8>]) -> Result<Vec<Option<u8>>> {
    if mask.is_empty() {
        return Ok(vec![None; q.rank()]);
    }
    if mask.len() != q.rank() {
        return Err(Error::Dimension(format!("parity mask of length {} for rank {}", mask.len(), q.rank())));
    }
    if mask.iter().flatten().any(|&r| r > 1) {
        return Err(Error::Dimension("parity residues must be 0 or 1".into()));
    }
    Ok(mask.to_vec())
}

/// Nahm sum with formal parameters attached per coordinate.
pub fn nahm_sum_param(
    q: &NahmQuadruple,
    mask: &[Option<u8>],
    weights: &ParamWeights,
    order: Exp,
    udeg: u32,
    vdeg: u32,
) -> Result<ParamSeries> {
    q.validate()?;
    let mask = check_mask(q, mask)?;
    let r = q.rank();
    let pad = |w: &[u32]| -> Result<Vec<u32>> {
        match w.len() {
            0 => Ok(vec![0; r]),
            l if l == r => Ok(w.to_vec()),
            l => Err(Error::Dimension(format!("{l} parameter weights for rank {r}"))),
        }
    };
    let wu = pad(&weights.u)?;
    let wv = pad(&weights.v)?;
    let udeg = if wu.iter().all(|&x| x == 0) { 0 } else { udeg };
    let vdeg = if wv.iter().all(|&x| x == 0) { 0 } else { vdeg };
    let work = order - q.c;
    let lam = q.eigen_floor();
    let rad = q.radius(lam, work);
    let eng = Engine { q, mask, wu: wu.clone(), wv: wv.clone(), udeg, vdeg, work, rad };
    let mut n = vec![0i64; r];
    let comps: Comps = eng
        .level(0, &mut n, 0)
        .into_iter()
        .map(|(k, s)| (k, s.shift(q.c)))
        .collect();
    let wmax = wu.iter().zip(&wv).map(|(a, b)| a + b).max().unwrap_or(0);
    let beta = q.l1_b();
    let tail = if wmax == 0 {
        TailBound::new(Exp::zero(), Exp::zero(), order)
    } else {
        let w = int(wmax as i64);
        TailBound::new(lam / (int(4) * w * w * int(r as i64)), Exp::zero(), q.c - beta * beta / lam)
    };
    Ok(ParamSeries::from_parts(comps, order, udeg, vdeg, tail, None))
}

/// Nahm sum exact to `order`, optionally parity restricted.
pub fn nahm_sum(q: &NahmQuadruple, mask: &[Option<u8>], order: Exp) -> Result<QSeries> {
    let p = nahm_sum_param(q, mask, &ParamWeights::default(), order, 0, 0)?;
    Ok(p.coeff(0, 0))
}

/// One example row: matrix, symmetrizer, and the printed `b` vectors.
#[derive(Clone, Debug)]
pub struct ExampleData {
    pub number: u8,
    pub a: Vec<Vec<Exp>>,
    pub d: Vec<i64>,
    pub bs: Vec<Vec<Exp>>,
}

impl ExampleData {
    pub fn quadruples(&self) -> Vec<NahmQuadruple> {
        self.bs
            .iter()
            .map(|b| NahmQuadruple::new(self.a.clone(), b.clone(), Exp::zero(), self.d.clone()))
            .collect()
    }
}

fn h(n: i64) -> Exp {
    r64(n, 2)
}

/// The fourteen rank-two examples with their printed `b` lists.
pub fn rank_two_examples() -> Vec<ExampleData> {
    let m = |rows: [[Exp; 2]; 2]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
    let bv = |xs: &[(Exp, Exp)]| xs.iter().map(|(x, y)| vec![*x, *y]).collect::<Vec<_>>();
    let i = int;
    let row = |number, a, d: [i64; 2], bs| ExampleData { number, a, d: d.to_vec(), bs };
    vec![
        row(1, m([[i(2), i(1)], [i(2), i(2)]]), [1, 2],
            bv(&[(i(0), i(0)), (i(0), i(1)), (i(-1), i(-1)), (h(-1), i(0)), (i(1), i(2))])),
        row(2, m([[i(1), h(-1)], [i(-1), i(1)]]), [1, 2],
            bv(&[(i(0), i(0)), (h(-1), i(1)), (h(-1), i(0)), (h(-1), h(1)), (i(0), i(1))])),
        row(3, m([[i(1), h(1)], [i(1), i(1)]]), [1, 2], bv(&[(i(0), i(0)), (i(0), i(1)), (i(1), i(1))])),
        row(4, m([[i(2), i(-1)], [i(-2), i(2)]]), [1, 2], bv(&[(i(0), i(0)), (i(-1), i(2)), (i(1), i(0))])),
        row(5, m([[i(4), i(2)], [i(6), i(4)]]), [1, 3], bv(&[(i(0), i(0))])),
        row(6, m([[i(1), h(-1)], [h(-3), i(1)]]), [1, 3], bv(&[(i(0), i(0))])),
        row(7, m([[i(2), i(1)], [i(3), i(2)]]), [1, 3], bv(&[(i(0), i(0)), (i(1), i(3)), (i(2), i(3))])),
        row(8, m([[i(2), i(-1)], [i(-3), i(2)]]), [1, 3], bv(&[(i(0), i(0)), (i(-1), i(3)), (i(1), i(0))])),
        row(9, m([[i(3), i(2)], [i(4), i(4)]]), [1, 2], bv(&[(h(-1), i(0)), (h(1), i(2))])),
        row(10, m([[i(1), h(-1)], [i(-1), r64(3, 4)]]), [1, 2], bv(&[(h(-1), h(1)), (h(-1), i(1))])),
        row(11, m([[h(3), h(1)], [i(1), i(1)]]), [1, 2], bv(&[(i(-1), i(1)), (h(-1), i(0)), (i(0), i(1))])),
        row(12, m([[i(1), h(-1)], [i(-1), h(3)]]), [1, 2], bv(&[(h(-3), h(5)), (h(-1), h(1)), (h(-1), h(3))])),
        row(13, m([[i(3), i(1)], [i(4), i(2)]]), [1, 4], bv(&[(h(-1), i(0)), (h(3), i(4))])),
        row(14, m([[i(1), h(-1)], [i(-2), h(3)]]), [1, 4], bv(&[(h(-1), i(1)), (h(-1), i(3))])),
    ]
}

/// Renders a quadruple compactly for diagnostics.
pub fn describe(q: &NahmQuadruple) -> String {
    let row = |v: &[Exp]| v.iter().map(|x| fmt_r64(*x)).collect::<Vec<_>>().join(",");
    let a: Vec<String> = q.a.iter().map(|r| format!("({})", row(r))).collect();
    format!("A=({}) b=({}) c={} d={:?}", a.join(","), row(&q.b), fmt_r64(q.c), q.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poch::{PochFactor, ProductSpec};

    fn rr_quad() -> NahmQuadruple {
        NahmQuadruple::from_ints(&[&[2]], &[0], &[1])
    }

    #[test]
    fn rogers_ramanujan_rank_one() {
        let s = nahm_sum(&rr_quad(), &[], int(7)).unwrap();
        let want: Vec<i64> = vec![1, 1, 1, 1, 2, 2, 3];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(s.coeff(int(k as i64)), big_from_r64(int(*w)));
        }
    }

    #[test]
    fn capparelli_matches_product() {
        let q = NahmQuadruple::from_ints(&[&[4, 2], &[6, 4]], &[0, 0], &[1, 3]);
        let lhs = nahm_sum(&q, &[], int(30)).unwrap();
        let rhs = ProductSpec::new(
            [2, 3, 4, 6].iter().map(|&a| PochFactor::inf_neg(int(a), int(6))).collect(),
        )
        .eval(int(30))
        .unwrap();
        assert!(lhs.eq_to_order(&rhs, int(30)).unwrap().is_equal());
    }

    #[test]
    fn enumeration_small_cases() {
        let pts = rr_quad().enumerate_lattice(int(5)).unwrap();
        let ns: Vec<i64> = pts.iter().map(|(n, _)| n[0]).collect();
        assert_eq!(ns, vec![0, 1, 2]);
        let only0 = NahmQuadruple::from_ints(&[&[2, 1], &[2, 2]], &[0, 1], &[1, 2]);
        assert_eq!(only0.enumerate_lattice(int(0)).unwrap().len(), 0);
        assert_eq!(only0.enumerate_lattice(r64(1, 2)).unwrap().len(), 1);
    }

    #[test]
    fn duality_capparelli() {
        let q = NahmQuadruple::from_ints(&[&[4, 2], &[6, 4]], &[0, 0], &[1, 3]).with_c(r64(-1, 24));
        let dq = q.dual().unwrap();
        assert_eq!(dq.a, vec![vec![int(1), r64(-1, 2)], vec![r64(-3, 2), int(1)]]);
        assert_eq!(dq.c, r64(-1, 8));
        assert_eq!(dq.dual().unwrap(), q);
    }

    #[test]
    fn singular_and_invalid() {
        let q = NahmQuadruple::from_ints(&[&[1, 1], &[1, 1]], &[0, 0], &[1, 1]);
        assert_eq!(q.dual().unwrap_err(), Error::SingularMatrix);
        assert_eq!(q.validate().unwrap_err(), Error::NotPositiveDefinite);
        let ns = NahmQuadruple::from_ints(&[&[2, 1], &[2, 2]], &[0, 0], &[1, 1]);
        assert_eq!(ns.validate().unwrap_err(), Error::NonSymmetric);
    }

    #[test]
    fn parity_split_sums_to_whole() {
        let q = NahmQuadruple::new(
            vec![vec![int(1), h(1)], vec![int(1), int(1)]],
            vec![int(0), int(0)],
            Exp::zero(),
            vec![1, 2],
        );
        let all = nahm_sum(&q, &[], int(25)).unwrap();
        let even = nahm_sum(&q, &[Some(0), None], int(25)).unwrap();
        let odd = nahm_sum(&q, &[Some(1), None], int(25)).unwrap();
        assert_eq!(odd.valuation(), Some(h(1)));
        assert!(even.add(&odd).eq_to_order(&all, int(25)).unwrap().is_equal());
    }

    #[test]
    fn examples_dualize_in_pairs() {
        let ex = rank_two_examples();
        for k in [0usize, 2, 4, 6, 8, 10, 12] {
            for (qa, qb) in ex[k].quadruples().iter().zip(ex[k + 1].quadruples()) {
                let d = qa.dual().unwrap();
                assert_eq!((d.a, d.b), (qb.a.clone(), qb.b.clone()), "example {}", ex[k].number);
            }
        }
    }
}
