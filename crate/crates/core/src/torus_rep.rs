//! Finite phase-permutation representations of the torus relations for
//! rational `theta = P / q`.
//!
//! The space has basis `|x>` for `x in (Z/q)^n` (mixed radix, `x_1` least
//! significant). With `L` the strictly lower-triangular part of `P` and
//! `zeta = e(1/m)`, `m = 2 q^2`,
//!
//! ```text
//!     U_j |x> = zeta^{2q (L x)_j} |x + e_j>
//! ```
//!
//! so `U_k U_j = zeta^{2q P_kj} U_j U_k = e(theta_kj) U_j U_k`. All phases are
//! exponents of `zeta` reduced mod `m`; no floating point is involved.

use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::exactmat::{RatMatrix, Rational, SkewMatrix};
use crate::{Error, Result};

/// Default cap on `q^n`.
pub const DEFAULT_MAX_DIM: u64 = 20736;

/// Work budget (pairs times dimension) for the default pair sample.
const PAIR_BUDGET: u64 = 1 << 27;

/// `theta = P / q` with integer antisymmetric `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RationalThetaJson", into = "RationalThetaJson")]
pub struct RationalTheta {
    q: i64,
    p: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RationalThetaJson {
    q: i64,
    #[serde(rename = "P")]
    p: RatMatrix,
}

impl TryFrom<RationalThetaJson> for RationalTheta {
    type Error = Error;
    fn try_from(raw: RationalThetaJson) -> Result<Self> {
        RationalTheta::new(&raw.p, raw.q)
    }
}

impl From<RationalTheta> for RationalThetaJson {
    fn from(rt: RationalTheta) -> Self {
        RationalThetaJson {
            q: rt.q,
            p: rt.p_matrix(),
        }
    }
}

fn to_i64(r: &Rational) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::NotIntegral);
    }
    r.to_integer()
        .to_i64()
        .ok_or_else(|| Error::InvalidArgument("entry does not fit in 64 bits".into()))
}

impl RationalTheta {
    pub fn new(p: &RatMatrix, q: i64) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidArgument(format!("q = {q} must be positive")));
        }
        if !p.is_square() {
            return Err(Error::NotSquare {
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        if !p.is_antisymmetric() {
            return Err(Error::NotAntisymmetric);
        }
        let rows = (0..p.rows())
            .map(|i| p.row(i).iter().map(to_i64).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { q, p: rows })
    }

    /// Writes a rational antisymmetric `theta` over its common denominator.
    pub fn from_theta(theta: &SkewMatrix) -> Result<Self> {
        let q = theta
            .inner()
            .entries()
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, x| {
                num_integer::Integer::lcm(&acc, x.denom())
            });
        let qr = Rational::from_integer(q.clone());
        let p = theta.inner().scale(&qr);
        let q = q
            .to_i64()
            .ok_or_else(|| Error::InvalidArgument("denominator too large".into()))?;
        Self::new(&p, q)
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn p(&self, i: usize, j: usize) -> i64 {
        self.p[i][j]
    }

    pub fn p_matrix(&self) -> RatMatrix {
        let n = self.n();
        RatMatrix::from_ints(n, n, &self.p.concat())
    }

    pub fn theta(&self) -> SkewMatrix {
        let qr = Rational::from_integer(self.q.into());
        SkewMatrix::new(self.p_matrix().scale(&(Rational::from_integer(1.into()) / qr)))
            .expect("P is antisymmetric")
    }

    /// `P + q N` for integer antisymmetric `N`: the same `theta` modulo integers.
    pub fn shifted(&self, nm: &RatMatrix) -> Result<Self> {
        let shift = RationalTheta::new(nm, 1)?;
        if shift.n() != self.n() {
            return Err(Error::DimensionMismatch("shift has the wrong size".into()));
        }
        let mut p = self.p.clone();
        for (row, srow) in p.iter_mut().zip(&shift.p) {
            for (x, s) in row.iter_mut().zip(srow) {
                *x += self.q * s;
            }
        }
        Ok(Self { q: self.q, p })
    }

    /// `R P R^t`, the numerator of `R theta R^t`.
    pub fn conjugated(&self, r: &RatMatrix) -> Result<Self> {
        let p = self.p_matrix();
        Self::new(&(&(r * &p) * &r.transpose()), self.q)
    }

    pub fn dim(&self) -> Result<u64> {
        (self.q as u64)
            .checked_pow(self.n() as u32)
            .ok_or(Error::DimensionCap {
                n: self.n(),
                cap: DEFAULT_MAX_DIM as usize,
            })
    }
}

/// Matrix with one nonzero entry per column: column `j` holds
/// `zeta^{phase[j]}` in row `perm[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhasePermMatrix {
    dim: usize,
    perm: Vec<usize>,
    #[serde(rename = "phase_exp")]
    phase: Vec<u64>,
    #[serde(rename = "m")]
    modulus: u64,
}

impl PhasePermMatrix {
    pub fn new(perm: Vec<usize>, phase: Vec<u64>, modulus: u64) -> Result<Self> {
        let dim = perm.len();
        if phase.len() != dim || modulus == 0 {
            return Err(Error::DimensionMismatch("perm and phase lengths differ".into()));
        }
        let mut seen = vec![false; dim];
        for &p in &perm {
            if p >= dim || seen[p] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[p] = true;
        }
        let phase = phase.into_iter().map(|e| e % modulus).collect();
        Ok(Self {
            dim,
            perm,
            phase,
            modulus,
        })
    }

    pub fn identity(dim: usize, modulus: u64) -> Self {
        Self {
            dim,
            perm: (0..dim).collect(),
            phase: vec![0; dim],
            modulus,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phase_exp(&self) -> &[u64] {
        &self.phase
    }

    /// Phase exponent of entry `(i, j)`, or `None` where the entry is zero.
    pub fn entry(&self, i: usize, j: usize) -> Option<u64> {
        (self.perm[j] == i).then(|| self.phase[j])
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(j, &p)| p == j) && self.phase.iter().all(|&e| e == 0)
    }

    /// `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "compose: dimension mismatch");
        assert_eq!(self.modulus, other.modulus, "compose: modulus mismatch");
        let m = self.modulus;
        let (perm, phase) = other
            .perm
            .iter()
            .zip(&other.phase)
            .map(|(&p, &e)| (self.perm[p], (e + self.phase[p]) % m))
            .unzip();
        Self {
            dim: self.dim,
            perm,
            phase,
            modulus: m,
        }
    }

    pub fn inverse(&self) -> Self {
        let m = self.modulus;
        let mut perm = vec![0; self.dim];
        let mut phase = vec![0; self.dim];
        for (j, (&p, &e)) in self.perm.iter().zip(&self.phase).enumerate() {
            perm[p] = j;
            phase[p] = (m - e) % m;
        }
        Self {
            dim: self.dim,
            perm,
            phase,
            modulus: m,
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(self.dim, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `zeta^k * self`.
    pub fn scaled(&self, k: i64) -> Self {
        let m = self.modulus;
        let k = k.rem_euclid(m as i64) as u64;
        Self {
            dim: self.dim,
            perm: self.perm.clone(),
            phase: self.phase.iter().map(|&e| (e + k) % m).collect(),
            modulus: m,
        }
    }

    /// `d` with `self * other = zeta^d * target`, without forming the product.
    pub fn product_ratio(&self, other: &Self, target: &Self) -> Option<u64> {
        assert_eq!(self.dim, other.dim, "product_ratio: dimension mismatch");
        if target.dim != self.dim || self.dim == 0 {
            return None;
        }
        let m = self.modulus;
        let mut d = None;
        for j in 0..self.dim {
            let p = other.perm[j];
            if self.perm[p] != target.perm[j] {
                return None;
            }
            let e = (other.phase[j] + self.phase[p] + m - target.phase[j]) % m;
            match d {
                None => d = Some(e),
                Some(d0) if d0 != e => return None,
                _ => {}
            }
        }
        d
    }

    /// `d` with `self = zeta^d * other`, if the two differ by a scalar.
    pub fn scalar_ratio(&self, other: &Self) -> Option<u64> {
        if self.perm != other.perm || self.dim == 0 {
            return None;
        }
        let m = self.modulus;
        let d = (self.phase[0] + m - other.phase[0]) % m;
        self.phase
            .iter()
            .zip(&other.phase)
            .all(|(a, b)| (a + m - b) % m == d)
            .then_some(d)
    }
}

/// `U_1 .. U_n` for a rational theta.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub theta: RationalTheta,
    pub dim: usize,
    pub modulus: u64,
    pub generators: Vec<PhasePermMatrix>,
}

pub fn build_rep(rt: &RationalTheta) -> Result<Representation> {
    build_rep_with_cap(rt, DEFAULT_MAX_DIM)
}

pub fn build_rep_with_cap(rt: &RationalTheta, max_dim: u64) -> Result<Representation> {
    let n = rt.n();
    let q = rt.q;
    let dim = rt.dim()?;
    if dim > max_dim {
        return Err(Error::DimensionCap {
            n: dim as usize,
            cap: max_dim as usize,
        });
    }
    let dim = dim as usize;
    let m = 2 * (q as u64) * (q as u64);
    let mi = m as i64;
    let mut generators = Vec::with_capacity(n);
    let mut stride = 1usize;
    for j in 0..n {
        let mut perm = Vec::with_capacity(dim);
        let mut phase = Vec::with_capacity(dim);
        for idx in 0..dim {
            let mut rest = idx;
            let mut lx = 0i64;
            let mut xj = 0;
            for i in 0..n {
                let xi = (rest % q as usize) as i64;
                rest /= q as usize;
                if i < j {
                    lx += rt.p[j][i] * xi;
                }
                if i == j {
                    xj = xi;
                }
            }
            perm.push(if xj == q - 1 {
                idx + stride - (q as usize) * stride
            } else {
                idx + stride
            });
            phase.push((2 * q * lx).rem_euclid(mi) as u64);
        }
        generators.push(PhasePermMatrix::new(perm, phase, m)?);
        stride *= q as usize;
    }
    Ok(Representation {
        theta: rt.clone(),
        dim,
        modulus: m,
        generators,
    })
}

impl Representation {
    pub fn n(&self) -> usize {
        self.generators.len()
    }

    fn p(&self, i: usize, j: usize) -> i64 {
        self.theta.p[i][j]
    }

    fn q(&self) -> i64 {
        self.theta.q
    }

    /// `x . P y`.
    fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| x[i] * self.p(i, j) * y[j])
            .sum()
    }

    /// Exponent of `gamma(x, y) = e(x . theta y / 2) = zeta^{q (x . P y)}`.
    pub fn gamma_exp(&self, x: &[i64], y: &[i64]) -> u64 {
        (self.q() * self.form(x, y)).rem_euclid(self.modulus as i64) as u64
    }
}

/// `U_x = zeta^{q (x . L x)} U_1^{x_1} ... U_n^{x_n}`, normalized so that
/// `U_x U_y = gamma(x, y) U_{x+y}`.
pub fn u_elem(rep: &Representation, x: &[i64]) -> Result<PhasePermMatrix> {
    let n = rep.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!("expected a vector of length {n}")));
    }
    let mut acc = PhasePermMatrix::identity(rep.dim, rep.modulus);
    for (j, &xj) in x.iter().enumerate() {
        if xj != 0 {
            acc = acc.compose(&rep.generators[j].pow(xj));
        }
    }
    let mut xlx = 0i64;
    for k in 0..n {
        for j in 0..k {
            xlx += x[k] * rep.p(k, j) * x[j];
        }
    }
    Ok(acc.scaled(rep.q() * xlx))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    /// Expected scalar exponent, or `None` when the two sides are not even
    /// proportional.
    pub expected_exp: u64,
    pub found_exp: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub relation: String,
    pub checked: u64,
    pub holds: bool,
    pub first_counterexample: Option<Counterexample>,
}

impl RelationReport {
    fn new(relation: &str) -> Self {
        Self {
            relation: relation.into(),
            checked: 0,
            holds: true,
            first_counterexample: None,
        }
    }

    fn record(&mut self, x: &[i64], y: &[i64], expected: u64, found: Option<u64>) {
        self.checked += 1;
        if found != Some(expected) && self.holds {
            self.holds = false;
            self.first_counterexample = Some(Counterexample {
                x: x.to_vec(),
                y: y.to_vec(),
                expected_exp: expected,
                found_exp: found,
            });
        }
    }
}

fn unit(n: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[j] = 1;
    v
}

/// `U_k U_j = e(theta_kj) U_j U_k` for all `k, j`.
pub fn verify_commutation(rep: &Representation) -> RelationReport {
    let n = rep.n();
    let mut report = RelationReport::new("commutation");
    for k in 0..n {
        for j in 0..n {
            let (uk, uj) = (&rep.generators[k], &rep.generators[j]);
            let found = uk.compose(uj).scalar_ratio(&uj.compose(uk));
            let expected = (2 * rep.q() * rep.p(k, j)).rem_euclid(rep.modulus as i64) as u64;
            report.record(&unit(n, k), &unit(n, j), expected, found);
        }
    }
    report
}

/// Commutator exponents `d_kj` with `U_k U_j = zeta^{d_kj} U_j U_k`.
pub fn commutation_exponents(rep: &Representation) -> Vec<Vec<Option<u64>>> {
    let n = rep.n();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|j| {
                    let (uk, uj) = (&rep.generators[k], &rep.generators[j]);
                    uk.compose(uj).scalar_ratio(&uj.compose(uk))
                })
                .collect()
        })
        .collect()
}

/// Largest radius `r <= 2` with `(2r+1)^{2n} * dim` within budget (at least 1).
pub fn default_radius(n: usize, dim: usize) -> i64 {
    let mut r = 2i64;
    while r > 1 {
        let pairs = ((2 * r + 1) as u64).saturating_pow(2 * n as u32);
        if pairs.saturating_mul(dim as u64) <= PAIR_BUDGET {
            break;
        }
        r -= 1;
    }
    r
}

fn box_points(n: usize, r: i64) -> Vec<Vec<i64>> {
    let side = (2 * r + 1) as usize;
    let total = side.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0; n];
            for x in v.iter_mut() {
                *x = (idx % side) as i64 - r;
                idx /= side;
            }
            v
        })
        .collect()
}

fn add(x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

/// Checks `U_{f(x)} U_{f(y)} = gamma'(x, y) U_{f(x+y)}` for all `x, y` in
/// the box of the given radius, where `f` is linear and `gamma'` has
/// exponent `q (x . P' y)`. Products are grouped by `x + y` so each
/// `U_{f(x+y)}` is built once.
fn verify_pairs(
    rep: &Representation,
    relation: &str,
    radius: i64,
    map: impl Fn(&[i64]) -> Vec<i64>,
    p_prime: &[Vec<i64>],
) -> Result<RelationReport> {
    let n = rep.n();
    let pts = box_points(n, radius);
    let images: Vec<PhasePermMatrix> = pts
        .iter()
        .map(|x| u_elem(rep, &map(x)))
        .collect::<Result<_>>()?;
    let mut report = RelationReport::new(relation);
    let ssum = 4 * radius + 1;
    // Bucket pairs by x + y (encoded in base 4r+1).
    let key = |s: &[i64]| s.iter().rev().fold(0i64, |acc, &v| acc * ssum + v + 2 * radius);
    let mut buckets: std::collections::BTreeMap<i64, Vec<(usize, usize)>> = Default::default();
    for a in 0..pts.len() {
        for b in 0..pts.len() {
            buckets.entry(key(&add(&pts[a], &pts[b]))).or_default().push((a, b));
        }
    }
    let m = rep.modulus as i64;
    for pairs in buckets.values() {
        let (a0, b0) = pairs[0];
        let s = add(&pts[a0], &pts[b0]);
        let us = u_elem(rep, &map(&s))?;
        for &(a, b) in pairs {
            let (x, y) = (&pts[a], &pts[b]);
            let form: i64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| x[i] * p_prime[i][j] * y[j])
                .sum();
            let expected = (rep.q() * form).rem_euclid(m) as u64;
            let found = images[a].product_ratio(&images[b], &us);
            report.record(x, y, expected, found);
        }
    }
    Ok(report)
}

/// `U_x U_y = gamma(x, y) U_{x+y}` on all pairs in `[-r, r]^n`, plus the
/// exponent identity `gamma(x, y) / gamma(y, x) = e(x . theta y)`.
pub fn verify_cocycle(rep: &Representation, radius: i64) -> Result<RelationReport> {
    let p = rep.theta.p.clone();
    let mut report = verify_pairs(rep, "cocycle", radius, |x| x.to_vec(), &p)?;
    let m = rep.modulus;
    for x in box_points(rep.n(), radius.min(1)) {
        for y in box_points(rep.n(), radius.min(1)) {
            let lhs = (rep.gamma_exp(&x, &y) + m - rep.gamma_exp(&y, &x)) % m;
            let rhs = (2 * rep.q() * rep.form(&x, &y)).rem_euclid(m as i64) as u64;
            if lhs != rhs {
                report.record(&x, &y, rhs, Some(lhs));
            }
        }
    }
    Ok(report)
}

/// `U_{R^t x} U_{R^t y} = e(x . theta' y / 2) U_{R^t (x+y)}` with
/// `theta' = R theta R^t`, on all pairs in `[-r, r]^n`.
pub fn verify_rho_iso(rep: &Representation, r: &RatMatrix, radius: i64) -> Result<RelationReport> {
    let n = rep.n();
    if r.rows() != n || r.cols() != n {
        return Err(Error::WrongDimension {
            expected: format!("{n}x{n}"),
            rows: r.rows(),
            cols: r.cols(),
        });
    }
    let det = r.determinant()?;
    if !r.is_integral() || !det.abs().is_one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    let rt: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| to_i64(&r[(j, i)])).collect())
        .collect::<Result<_>>()?;
    let conj = rep.theta.conjugated(r)?;
    verify_pairs(
        rep,
        "rho",
        radius,
        |x| {
            rt.iter()
                .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect()
        },
        &conj.p,
    )
}

/// Whether `P + q N` yields the same commutation exponents as `P`.
pub fn verify_nu_shift(rt: &RationalTheta, nm: &RatMatrix) -> Result<bool> {
    let base = build_rep(rt)?;
    let shifted = build_rep(&rt.shifted(nm)?)?;
    let e0 = commutation_exponents(&base);
    Ok(e0 == commutation_exponents(&shifted)
        && e0.iter().flatten().all(Option::is_some)
        && verify_commutation(&shifted).holds)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepCheckReport {
    pub n: usize,
    pub q: i64,
    pub m: u64,
    pub dim: usize,
    pub radius: i64,
    pub commutation: RelationReport,
    pub cocycle: RelationReport,
    pub rho: Option<RelationReport>,
    pub nu_shift_invariant: Option<bool>,
    pub pass: bool,
}

/// All representation checks in one report. `radius = None` uses
/// [`default_radius`].
pub fn rep_check(
    rt: &RationalTheta,
    r: Option<&RatMatrix>,
    nu_shift: Option<&RatMatrix>,
    radius: Option<i64>,
) -> Result<RepCheckReport> {
    let rep = build_rep(rt)?;
    let radius = radius.unwrap_or_else(|| default_radius(rep.n(), rep.dim));
    if radius < 0 {
        return Err(Error::InvalidArgument("radius must be nonnegative".into()));
    }
    let commutation = verify_commutation(&rep);
    let cocycle = verify_cocycle(&rep, radius)?;
    let rho = r.map(|r| verify_rho_iso(&rep, r, radius)).transpose()?;
    let nu_shift_invariant = nu_shift.map(|nm| verify_nu_shift(rt, nm)).transpose()?;
    let pass = commutation.holds
        && cocycle.holds
        && rho.as_ref().is_none_or(|r| r.holds)
        && nu_shift_invariant.unwrap_or(true);
    Ok(RepCheckReport {
        n: rep.n(),
        q: rt.q,
        m: rep.modulus,
        dim: rep.dim,
        radius,
        commutation,
        cocycle,
        rho,
        nu_shift_invariant,
        pass,
    })
}
