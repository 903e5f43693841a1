//! The group `O(n,n|Z)` in block form and its fractional-linear action on
//! antisymmetric matrices.
//!
//! Coordinates on `Z^{2n}` are `(a^1..a^n, b_1..b_n)` and the preserved form
//! is `a^i b_i`, i.e. `Q = [[0, I], [I, 0]]`. An element is stored as the
//! `2n x 2n` integer matrix `[[A, B], [C, D]]`; membership means
//! `M^t Q M = Q`, which unpacks to
//! `A^t C + C^t A = 0`, `B^t D + D^t B = 0`, `A^t D + C^t B = I`.

mod sample;
mod word;

pub use sample::{
    random_generator, random_skew_int, random_unimodular, random_word, sample_domain_report,
    DomainReport, LengthStats,
};
pub use word::{evaluate, GeneratorWord, Token};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmat::{format_rational, RatMatrix, Rational, SkewMatrix};
use crate::{Error, Result};

/// Points of the space of antisymmetric matrices acted on by the group.
pub type ThetaPoint = SkewMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    n: usize,
    m: RatMatrix,
}

/// Block-equation and determinant check of an arbitrary square matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub n: usize,
    pub integral: bool,
    /// `A^t C + C^t A = 0`
    pub atc_symmetric_part_zero: bool,
    /// `B^t D + D^t B = 0`
    pub btd_symmetric_part_zero: bool,
    /// `A^t D + C^t B = I`
    pub atd_ctb_identity: bool,
    pub det: String,
    pub in_o_nn_z: bool,
    pub in_so_nn_z: bool,
}

/// `Q = [[0, I], [I, 0]]`.
pub fn split_form(n: usize) -> RatMatrix {
    let id = RatMatrix::identity(n);
    let z = RatMatrix::zeros(n, n);
    RatMatrix::from_blocks(&[vec![&z, &id], vec![&id, &z]]).unwrap()
}

pub fn membership(m: &RatMatrix) -> Result<MembershipReport> {
    if !m.is_square() || m.rows() % 2 == 1 {
        return Err(Error::WrongDimension {
            expected: "2n x 2n".into(),
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows() / 2;
    let (a, b, c, d) = (
        m.block(0, 0, n, n),
        m.block(0, n, n, n),
        m.block(n, 0, n, n),
        m.block(n, n, n, n),
    );
    let (at, bt, ct, dt) = (a.transpose(), b.transpose(), c.transpose(), d.transpose());
    let eq1 = (&(&at * &c) + &(&ct * &a)).is_zero();
    let eq2 = (&(&bt * &d) + &(&dt * &b)).is_zero();
    let eq3 = (&(&at * &d) + &(&ct * &b)).is_identity();
    let det = m.determinant()?;
    let integral = m.is_integral();
    let in_o = integral && eq1 && eq2 && eq3;
    Ok(MembershipReport {
        n,
        integral,
        atc_symmetric_part_zero: eq1,
        btd_symmetric_part_zero: eq2,
        atd_ctb_identity: eq3,
        in_so_nn_z: in_o && det.is_one(),
        det: format_rational(&det),
        in_o_nn_z: in_o,
    })
}

impl GroupElement {
    /// Validates integrality and form preservation.
    pub fn from_matrix(m: RatMatrix) -> Result<Self> {
        let report = membership(&m)?;
        if !report.integral {
            return Err(Error::NotIntegral);
        }
        if !report.in_o_nn_z {
            return Err(Error::NotInGroup(
                "block equations A^tC+C^tA=0, B^tD+D^tB=0, A^tD+C^tB=I fail".into(),
            ));
        }
        Ok(Self { n: report.n, m })
    }

    pub fn from_blocks(a: &RatMatrix, b: &RatMatrix, c: &RatMatrix, d: &RatMatrix) -> Result<Self> {
        Self::from_matrix(RatMatrix::from_blocks(&[vec![a, b], vec![c, d]])?)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            m: RatMatrix::identity(2 * n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn a(&self) -> RatMatrix {
        self.m.block(0, 0, self.n, self.n)
    }

    pub fn b(&self) -> RatMatrix {
        self.m.block(0, self.n, self.n, self.n)
    }

    pub fn c(&self) -> RatMatrix {
        self.m.block(self.n, 0, self.n, self.n)
    }

    pub fn d(&self) -> RatMatrix {
        self.m.block(self.n, self.n, self.n, self.n)
    }

    pub fn det(&self) -> Rational {
        self.m.determinant().expect("square")
    }

    pub fn is_special(&self) -> bool {
        self.det().is_one()
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "compose n = {} with n = {}",
                self.n, other.n
            )));
        }
        Ok(GroupElement {
            n: self.n,
            m: &self.m * &other.m,
        })
    }

    /// `M^-1 = Q M^t Q = [[D^t, B^t], [C^t, A^t]]`.
    pub fn inverse(&self) -> GroupElement {
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        let m = RatMatrix::from_blocks(&[
            vec![&d.transpose(), &b.transpose()],
            vec![&c.transpose(), &a.transpose()],
        ])
        .unwrap();
        debug_assert!((&m * &self.m).is_identity());
        GroupElement { n: self.n, m }
    }

    fn check_theta(&self, theta: &SkewMatrix) -> Result<()> {
        if theta.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "group element has n = {}, theta has n = {}",
                self.n,
                theta.n()
            )));
        }
        Ok(())
    }

    /// `C theta + D`.
    pub fn denominator(&self, theta: &SkewMatrix) -> Result<RatMatrix> {
        self.check_theta(theta)?;
        Ok(&(&self.c() * theta.inner()) + &self.d())
    }

    pub fn in_domain(&self, theta: &SkewMatrix) -> bool {
        self.denominator(theta)
            .and_then(|m| m.determinant())
            .is_ok_and(|d| !d.is_zero())
    }

    /// `theta' = (A theta + B)(C theta + D)^-1`.
    pub fn act(&self, theta: &SkewMatrix) -> Result<SkewMatrix> {
        let den = self.denominator(theta)?;
        let inv = den.invert().map_err(|_| Error::OutsideDomain)?;
        let num = &(&self.a() * theta.inner()) + &self.b();
        SkewMatrix::new(&num * &inv).map_err(|_| {
            Error::InternalAssertion("(A theta + B)(C theta + D)^-1 is not antisymmetric".into())
        })
    }
}

pub fn act(g: &GroupElement, theta: &SkewMatrix) -> Result<SkewMatrix> {
    g.act(theta)
}

pub fn in_domain(g: &GroupElement, theta: &SkewMatrix) -> bool {
    g.in_domain(theta)
}

fn require_integral_square(m: &RatMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_integral() {
        return Err(Error::NotIntegral);
    }
    Ok(m.rows())
}

/// `rho(R) = [[R, 0], [0, (R^-1)^t]]` for unimodular integer `R`.
pub fn rho(r: &RatMatrix) -> Result<GroupElement> {
    let n = require_integral_square(r)?;
    let det = r.determinant()?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(format_rational(&det)));
    }
    let d = r.invert()?.transpose();
    let z = RatMatrix::zeros(n, n);
    GroupElement::from_blocks(r, &z, &z, &d)
}

fn require_skew_int(nm: &RatMatrix) -> Result<usize> {
    let n = require_integral_square(nm)?;
    if !nm.is_antisymmetric() {
        return Err(Error::NotAntisymmetric);
    }
    Ok(n)
}

/// `nu(N) = [[I, N], [0, I]]`: `a -> a + N b`, acts by `theta -> theta + N`.
pub fn nu(nm: &RatMatrix) -> Result<GroupElement> {
    let n = require_skew_int(nm)?;
    let (i, z) = (RatMatrix::identity(n), RatMatrix::zeros(n, n));
    GroupElement::from_blocks(&i, nm, &z, &i)
}

/// `mu(N) = [[I, 0], [N, I]]`: `b -> b + N a`.
pub fn mu(nm: &RatMatrix) -> Result<GroupElement> {
    let n = require_skew_int(nm)?;
    let (i, z) = (RatMatrix::identity(n), RatMatrix::zeros(n, n));
    GroupElement::from_blocks(&i, &z, nm, &i)
}

/// `sigma_k` swaps `a^i <-> b_i` for `i <= k`. Only even `k` lands in
/// `SO(n,n|Z)`.
pub fn sigma(k: usize, n: usize) -> Result<GroupElement> {
    sigma_with(k, n, false)
}

pub fn sigma_with(k: usize, n: usize, allow_odd: bool) -> Result<GroupElement> {
    if k > n {
        return Err(Error::SigmaOutOfRange { k, n });
    }
    if k % 2 == 1 && !allow_odd {
        return Err(Error::OddKRejected(k));
    }
    let mut m = RatMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        if i < k {
            m[(i, n + i)] = Rational::one();
            m[(n + i, i)] = Rational::one();
        } else {
            m[(i, i)] = Rational::one();
            m[(n + i, n + i)] = Rational::one();
        }
    }
    GroupElement::from_matrix(m)
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupElementJson {
            n: self.n,
            a: self.a(),
            b: self.b(),
            c: self.c(),
            d: self.d(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = GroupElementJson::deserialize(de)?;
        raw.into_element().map_err(serde::de::Error::custom)
    }
}

/// Wire form `{"n": n, "A": .., "B": .., "C": .., "D": ..}` without the
/// membership check, so malformed candidates can still be inspected.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElementJson {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: RatMatrix,
    #[serde(rename = "B")]
    pub b: RatMatrix,
    #[serde(rename = "C")]
    pub c: RatMatrix,
    #[serde(rename = "D")]
    pub d: RatMatrix,
}

impl GroupElementJson {
    pub fn to_matrix(&self) -> Result<RatMatrix> {
        for blk in [&self.a, &self.b, &self.c, &self.d] {
            if blk.rows() != self.n || blk.cols() != self.n {
                return Err(Error::DimensionMismatch(format!(
                    "block is {}x{}, expected {n}x{n}",
                    blk.rows(),
                    blk.cols(),
                    n = self.n
                )));
            }
        }
        RatMatrix::from_blocks(&[vec![&self.a, &self.b], vec![&self.c, &self.d]])
    }

    pub fn into_element(self) -> Result<GroupElement> {
        GroupElement::from_matrix(self.to_matrix()?)
    }
}
