//! Creation/annihilation operators on `F_n` and their images under the
//! Clifford automorphism induced by a group element.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{subset_of, GrassmannElement, DEFAULT_MAX_N};
use crate::exactmat::{RatMatrix, Rational};
use crate::group::GroupElement;
use crate::{Error, Result};

/// Action of generator `gen` (0-based: `0..n` are `a^{gen+1}` acting by left
/// multiplication, `n..2n` the left derivatives `d/da^{gen-n+1}`) on the basis
/// monomial `mask`. Returns `(negate, new_mask)`, or `None` when it kills it.
pub(crate) fn ladder(n: usize, gen: usize, mask: usize) -> Option<(bool, usize)> {
    let (bit, create) = if gen < n { (gen, true) } else { (gen - n, false) };
    let b = 1usize << bit;
    if (mask & b != 0) == create {
        return None;
    }
    let negate = (mask & (b - 1)).count_ones() % 2 == 1;
    Some((negate, mask ^ b))
}

/// Linear combination `sum_k c_k gamma_k` of the `2n` ladder operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordOp {
    n: usize,
    terms: Vec<(usize, Rational)>,
}

impl CliffordOp {
    pub fn generator(n: usize, gen: usize) -> Self {
        Self {
            n,
            terms: vec![(gen, Rational::one())],
        }
    }

    /// `alpha(gamma_i) = sum_k M_{k,i} gamma_k`: the images are the columns
    /// of `M`, so that `a^i -> A_ji a^j + C_ji b_j` and
    /// `b_i -> B_ji a^j + D_ji b_j`.
    pub fn image(m: &RatMatrix, gen: usize) -> Self {
        let n = m.rows() / 2;
        Self {
            n,
            terms: (0..2 * n)
                .filter(|&k| !m[(k, gen)].is_zero())
                .map(|k| (k, m[(k, gen)].clone()))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(usize, Rational)] {
        &self.terms
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for (mask, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (gen, c) in &self.terms {
                if let Some((neg, to)) = ladder(self.n, *gen, mask) {
                    let t = c * x;
                    if neg {
                        out[to] -= t;
                    } else {
                        out[to] += t;
                    }
                }
            }
        }
        out
    }

    pub fn to_operator(&self) -> OperatorMatrix {
        let dim = 1usize << self.n;
        let mut m = RatMatrix::zeros(dim, dim);
        for mask in 0..dim {
            for (gen, c) in &self.terms {
                if let Some((neg, to)) = ladder(self.n, *gen, mask) {
                    if neg {
                        m[(to, mask)] -= c;
                    } else {
                        m[(to, mask)] += c;
                    }
                }
            }
        }
        OperatorMatrix { n: self.n, m }
    }
}

/// Linear operator on `F_n` as a `2^n x 2^n` matrix in mask order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    n: usize,
    m: RatMatrix,
}

#[derive(Serialize)]
struct OperatorJson<'a> {
    n: usize,
    basis: Vec<Vec<usize>>,
    matrix: &'a RatMatrix,
}

impl Serialize for OperatorMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorJson {
            n: self.n,
            basis: (0..1usize << self.n).map(subset_of).collect(),
            matrix: &self.m,
        }
        .serialize(s)
    }
}

impl OperatorMatrix {
    pub fn new(n: usize, m: RatMatrix) -> Result<Self> {
        let dim = 1usize << n;
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::WrongDimension {
                expected: format!("{dim}x{dim}"),
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(Self { n, m })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            m: RatMatrix::identity(1 << n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.m
    }

    pub fn apply(&self, x: &GrassmannElement) -> GrassmannElement {
        assert_eq!(x.n(), self.n);
        GrassmannElement::from_coeffs(self.n, self.m.mul_vec(x.coeffs())).unwrap()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            m: &self.m * &other.m,
        }
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            m: &(&self.m * &other.m) + &(&other.m * &self.m),
        }
    }

    pub fn is_scalar(&self, c: &Rational) -> bool {
        self.m == RatMatrix::identity(1 << self.n).scale(c)
    }
}

fn check_index(n: usize, j: usize) -> Result<()> {
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    if n > DEFAULT_MAX_N {
        return Err(Error::DimensionCap { n, cap: DEFAULT_MAX_N });
    }
    Ok(())
}

/// `a^j`: left multiplication by the generator.
pub fn creation(n: usize, j: usize) -> Result<OperatorMatrix> {
    check_index(n, j)?;
    Ok(CliffordOp::generator(n, j - 1).to_operator())
}

/// `b_j = d/da^j`: the left derivative.
pub fn annihilation(n: usize, j: usize) -> Result<OperatorMatrix> {
    check_index(n, j)?;
    Ok(CliffordOp::generator(n, n + j - 1).to_operator())
}

/// `alpha_g(gamma_index)` for `index` in `1..=2n` (`1..=n` are `a^i`,
/// `n+1..=2n` are `b_i`).
pub fn clifford_image(g: &GroupElement, index: usize) -> Result<OperatorMatrix> {
    let n = g.n();
    check_index(2 * n, index)?;
    if n > DEFAULT_MAX_N {
        return Err(Error::DimensionCap { n, cap: DEFAULT_MAX_N });
    }
    Ok(CliffordOp::image(g.matrix(), index - 1).to_operator())
}
