//! `K_0`/`K_1` of the torus as the even/odd integral lattice in `F_n*`, the
//! trace pairing against `theta_hat`, trace ranges, and the induced action of
//! `SO(n,n|Z)` on the lattice.

mod wedge;

pub use wedge::{
    counterexample_search, det3, det_identity_sample, search_wedge_target, wedge_square,
    wedge_square_i64, CounterexampleReport, DetIdentityReport, DeterminantWitness, Mat3,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmat::{
    format_rational, gcd_rational, serialize_rational, RatMatrix, RatRepr, Rational, SkewMatrix,
};
use crate::grassmann::{intertwiner, mask_of, subset_of, theta_hat};
use crate::group::GroupElement;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_mask(mask: usize) -> Self {
        if mask.count_ones().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Masks of the subsets of `{1..n}` with the given parity, ascending.
pub fn subsets_of_parity(n: usize, parity: Parity) -> Vec<usize> {
    (0..1usize << n).filter(|&m| Parity::of_mask(m) == parity).collect()
}

/// Integral element of `F_n*` supported on subsets of one parity. Stored as
/// a full `2^n` coefficient vector that vanishes off that parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLatticeElement {
    n: usize,
    parity: Parity,
    coords: Vec<BigInt>,
}

impl KLatticeElement {
    pub fn zero(n: usize, parity: Parity) -> Self {
        Self {
            n,
            parity,
            coords: vec![BigInt::zero(); 1 << n],
        }
    }

    /// Dual basis vector of the monomial `a^S`.
    pub fn dual_basis(n: usize, subset: &[usize]) -> Result<Self> {
        let mask = mask_of(n, subset)?;
        let mut e = Self::zero(n, Parity::of_mask(mask));
        e.coords[mask] = BigInt::one();
        Ok(e)
    }

    /// From `(mask, coefficient)` pairs; every mask must have `parity`.
    pub fn from_terms(n: usize, parity: Parity, terms: &[(usize, BigInt)]) -> Result<Self> {
        let mut e = Self::zero(n, parity);
        for (mask, c) in terms {
            if *mask >= 1 << n {
                return Err(Error::IndexOutOfRange {
                    index: *mask,
                    max: (1 << n) - 1,
                });
            }
            if Parity::of_mask(*mask) != parity {
                return Err(Error::ParityMismatch);
            }
            e.coords[*mask] += c;
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coeff(&self, mask: usize) -> &BigInt {
        &self.coords[mask]
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.coords
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeTerm {
    subset: Vec<usize>,
    coeff: RatRepr,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    n: usize,
    parity: Parity,
    terms: Vec<LatticeTerm>,
}

impl Serialize for KLatticeElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson {
            n: self.n,
            parity: self.parity,
            terms: self
                .coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| LatticeTerm {
                    subset: subset_of(m),
                    coeff: RatRepr::Str(c.to_string()),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KLatticeElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = LatticeJson::deserialize(de)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let mask = mask_of(raw.n, &t.subset).map_err(D::Error::custom)?;
            let c = t.coeff.parse().map_err(D::Error::custom)?;
            if !c.is_integer() {
                return Err(D::Error::custom(Error::NotIntegral));
            }
            terms.push((mask, c.to_integer()));
        }
        KLatticeElement::from_terms(raw.n, raw.parity, &terms).map_err(D::Error::custom)
    }
}

/// `Pf(theta_S)` for every even subset `S`, in mask order (`Pf(theta_0) = 1`).
pub fn sub_pfaffians(theta: &SkewMatrix) -> Vec<(usize, Rational)> {
    subsets_of_parity(theta.n(), Parity::Even)
        .into_iter()
        .map(|mask| {
            let idx: Vec<usize> = subset_of(mask).into_iter().map(|s| s - 1).collect();
            let pf = theta
                .restrict(&idx)
                .pfaffian()
                .expect("even principal minor");
            (mask, pf)
        })
        .collect()
}

/// `<theta_hat, x> = sum_S x_S Pf(theta_S)` for even `x`.
pub fn trace_pairing(theta: &SkewMatrix, x: &KLatticeElement) -> Result<Rational> {
    if x.parity != Parity::Even {
        return Err(Error::ParityMismatch);
    }
    if x.n != theta.n() {
        return Err(Error::DimensionMismatch(format!(
            "lattice element has n = {}, theta has n = {}",
            x.n,
            theta.n()
        )));
    }
    let direct: Rational = sub_pfaffians(theta)
        .into_iter()
        .filter(|(m, _)| !x.coords[*m].is_zero())
        .map(|(m, pf)| pf * Rational::from_integer(x.coords[m].clone()))
        .sum();
    let paired = theta_hat(theta).pair(&x.to_rationals());
    if paired != direct {
        return Err(Error::InternalAssertion(
            "sub-Pfaffian sum differs from the theta_hat pairing".into(),
        ));
    }
    Ok(direct)
}

/// The subgroup `generator * Z` of Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRange {
    #[serde(serialize_with = "serialize_rational")]
    pub generator: Rational,
}

/// Image of `K_0` under the trace: generated by all sub-Pfaffians.
pub fn trace_range(theta: &SkewMatrix) -> TraceRange {
    let generator = sub_pfaffians(theta)
        .iter()
        .fold(Rational::zero(), |acc, (_, pf)| gcd_rational(&acc, pf));
    TraceRange { generator }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoritaTrace {
    pub theta_prime: SkewMatrix,
    pub before: TraceRange,
    pub after: TraceRange,
    /// `after.generator / before.generator`.
    #[serde(serialize_with = "serialize_rational")]
    pub c: Rational,
    /// True when `C = 0`, where the trace range must be unchanged.
    pub unimodular_subgroup: bool,
}

/// Ratio `c` with `trace_range(g theta) = c * trace_range(theta)`. For `g`
/// with vanishing `C` block (`rho`, `nu` and their products) `c = 1` is
/// asserted.
pub fn morita_trace_check(theta: &SkewMatrix, g: &GroupElement) -> Result<MoritaTrace> {
    let theta_prime = g.act(theta)?;
    let before = trace_range(theta);
    let after = trace_range(&theta_prime);
    let c = &after.generator / &before.generator;
    let unimodular_subgroup = g.c().is_zero();
    if unimodular_subgroup && !c.is_one() {
        return Err(Error::InternalAssertion(format!(
            "trace range changed by {} under an element with C = 0",
            format_rational(&c)
        )));
    }
    Ok(MoritaTrace {
        theta_prime,
        before,
        after,
        c,
        unimodular_subgroup,
    })
}

/// Integral action of an element of `SO(n,n|Z)` on `F_n*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KAction {
    pub n: usize,
    /// `2^n x 2^n`, mask order, content 1.
    pub matrix: RatMatrix,
    /// Positive factor applied to `U^-t`.
    #[serde(serialize_with = "serialize_rational")]
    pub scale: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub det: Rational,
}

impl KAction {
    /// Restriction to the even (`K_0`) or odd (`K_1`) coordinates.
    pub fn block(&self, parity: Parity) -> RatMatrix {
        let idx = subsets_of_parity(self.n, parity);
        let mut b = RatMatrix::zeros(idx.len(), idx.len());
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                b[(r, c)] = self.matrix[(i, j)].clone();
            }
        }
        b
    }

    pub fn apply(&self, x: &KLatticeElement) -> Result<KLatticeElement> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch("lattice element and action differ in n".into()));
        }
        let image = self.matrix.mul_vec(&x.to_rationals());
        let coords = image.into_iter().map(|v| v.to_integer()).collect();
        Ok(KLatticeElement {
            n: self.n,
            parity: x.parity,
            coords,
        })
    }
}

/// `U_g^-t`, rescaled by the unique positive rational that makes it integral
/// with coprime entries. Asserts integrality, `det = +-1` and that parity is
/// preserved.
pub fn induced_k_action(g: &GroupElement) -> Result<KAction> {
    if !g.is_special() {
        return Err(Error::NotInGroup(
            "the K-theory action needs determinant +1".into(),
        ));
    }
    let n = g.n();
    let u = intertwiner(g)?.u;
    let dual = u
        .matrix()
        .invert()
        .map_err(|_| Error::InternalAssertion("intertwiner is singular".into()))?
        .transpose();
    let content = dual
        .entries()
        .iter()
        .fold(Rational::zero(), |acc, x| gcd_rational(&acc, x));
    let scale = Rational::one() / content;
    let matrix = dual.scale(&scale);
    if !matrix.is_integral() {
        return Err(Error::NonIntegralAction("entries are not integers".into()));
    }
    let det = matrix.determinant()?;
    if !det.abs().is_one() {
        return Err(Error::NonIntegralAction(format!(
            "determinant {}",
            format_rational(&det)
        )));
    }
    let dim = 1usize << n;
    for r in 0..dim {
        for c in 0..dim {
            if Parity::of_mask(r) != Parity::of_mask(c) && !matrix[(r, c)].is_zero() {
                return Err(Error::NonIntegralAction(
                    "action mixes even and odd coordinates".into(),
                ));
            }
        }
    }
    Ok(KAction {
        n,
        matrix,
        scale,
        det,
    })
}
