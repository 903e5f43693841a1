//! Grassmann algebra `F_n` on generators `a^1..a^n`, its Fock-space
//! operators, and the projective action of `O(n,n)` on it.
//!
//! Basis monomials `a^{s_1} ... a^{s_k}` (`s_1 < ... < s_k`) are indexed by
//! bitmasks, bit `j - 1` standing for `a^j`; every vector and operator matrix
//! uses ascending mask order (colexicographic order on subsets).

mod intertwiner;
mod operator;

pub use intertwiner::{
    intertwiner, intertwiner_for_matrix, projective_act, verify_annihilators, AnnihilatorReport,
    Intertwiner, ProjectiveAction, DEFAULT_MAX_N,
};
pub use operator::{annihilation, clifford_image, creation, CliffordOp, OperatorMatrix};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmat::{format_rational, RatRepr, Rational, SkewMatrix};
use crate::{Error, Result};

/// 1-based elements of the subset encoded by `mask`, ascending.
pub fn subset_of(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

pub fn mask_of(n: usize, subset: &[usize]) -> Result<usize> {
    let mut mask = 0usize;
    for &s in subset {
        if s == 0 || s > n {
            return Err(Error::IndexOutOfRange { index: s, max: n });
        }
        if mask >> (s - 1) & 1 == 1 {
            return Err(Error::InvalidArgument(format!("repeated index {s} in subset")));
        }
        mask |= 1 << (s - 1);
    }
    Ok(mask)
}

pub fn is_even(mask: usize) -> bool {
    mask.count_ones().is_multiple_of(2)
}

/// Sign of `a^S a^T = sign * a^{S u T}` for disjoint `S`, `T`.
pub(crate) fn wedge_sign(s: usize, t: usize) -> bool {
    // Count pairs (x in S, y in T) with x > y.
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let y = rest.trailing_zeros();
        inversions += (s >> (y + 1)).count_ones();
        rest &= rest - 1;
    }
    inversions % 2 == 1
}

/// Element of `F_n`, one coefficient per subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannElement {
    n: usize,
    coeffs: Vec<Rational>,
}

impl GrassmannElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![Rational::zero(); 1 << n],
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0, Rational::one())
    }

    pub fn monomial(n: usize, mask: usize, c: Rational) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[mask] = c;
        e
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for n = {n}",
                coeffs.len()
            )));
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> &Rational {
        &self.coeffs[mask]
    }

    pub fn coeff_of(&self, subset: &[usize]) -> Result<&Rational> {
        Ok(&self.coeffs[mask_of(self.n, subset)?])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| is_even(m) || c.is_zero())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    /// Exterior product `self ^ other`.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (s, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() || s & t != 0 {
                    continue;
                }
                let prod = a * b;
                if wedge_sign(s, t) {
                    out.coeffs[s | t] -= prod;
                } else {
                    out.coeffs[s | t] += prod;
                }
            }
        }
        out
    }

    /// `exp(x)` for `x` with zero scalar part (hence nilpotent).
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument(
                "exp_nilpotent needs a vanishing scalar part".into(),
            ));
        }
        let mut sum = Self::one(self.n);
        let mut term = Self::one(self.n);
        for k in 1..=self.n {
            term = term.wedge(self).scale(&Rational::new(1.into(), k.into()));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        Ok(sum)
    }

    /// `<self, x>`: coefficient pairing with the dual basis.
    pub fn pair(&self, dual: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(dual)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// `(1/2) a^i theta_ij a^j = sum_{i<j} theta_ij a^i a^j`.
pub fn quadratic_element(theta: &SkewMatrix) -> GrassmannElement {
    let n = theta.n();
    let mut x = GrassmannElement::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            x.coeffs[(1 << i) | (1 << j)] = theta.get(i, j).clone();
        }
    }
    x
}

/// `theta_hat = exp((1/2) a^i theta_ij a^j)`; its coefficient on an even
/// subset `S` is the Pfaffian of `theta` restricted to `S`.
pub fn theta_hat(theta: &SkewMatrix) -> GrassmannElement {
    quadratic_element(theta)
        .exp_nilpotent()
        .expect("quadratic element has no scalar part")
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    subset: Vec<usize>,
    coeff: RatRepr,
}

#[derive(Serialize, Deserialize)]
struct GrassmannJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for GrassmannElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GrassmannJson {
            n: self.n,
            terms: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| TermJson {
                    subset: subset_of(m),
                    coeff: RatRepr::Str(format_rational(c)),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GrassmannElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = GrassmannJson::deserialize(de)?;
        let mut e = GrassmannElement::zero(raw.n);
        for t in raw.terms {
            let m = mask_of(raw.n, &t.subset).map_err(D::Error::custom)?;
            e.coeffs[m] += t.coeff.parse().map_err(D::Error::custom)?;
        }
        Ok(e)
    }
}
