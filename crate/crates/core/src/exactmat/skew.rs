use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{RatMatrix, Rational};
use crate::{Error, Result};

/// Antisymmetric square matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RatMatrix", into = "RatMatrix")]
pub struct SkewMatrix {
    inner: RatMatrix,
}

impl SkewMatrix {
    pub fn new(inner: RatMatrix) -> Result<Self> {
        if !inner.is_square() {
            return Err(Error::NotSquare {
                rows: inner.rows(),
                cols: inner.cols(),
            });
        }
        if !inner.is_antisymmetric() {
            return Err(Error::NotAntisymmetric);
        }
        Ok(Self { inner })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: RatMatrix::zeros(n, n),
        }
    }

    /// Builds the matrix from its strictly upper-triangular entries, listed
    /// row by row: `(0,1), (0,2), ..., (1,2), ...`.
    pub fn from_upper(n: usize, upper: &[Rational]) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::DimensionMismatch(format!(
                "{} upper entries for n = {n}",
                upper.len()
            )));
        }
        let mut m = RatMatrix::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().unwrap();
                m[(i, j)] = v.clone();
                m[(j, i)] = -v.clone();
            }
        }
        Ok(Self { inner: m })
    }

    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    pub fn inner(&self) -> &RatMatrix {
        &self.inner
    }

    pub fn into_inner(self) -> RatMatrix {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.inner[(i, j)]
    }

    /// Principal submatrix on the given (sorted, 0-based) indices.
    pub fn restrict(&self, idx: &[usize]) -> SkewMatrix {
        let k = idx.len();
        let mut m = RatMatrix::zeros(k, k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = self.inner[(i, j)].clone();
            }
        }
        SkewMatrix { inner: m }
    }

    /// Top-left `k x k` principal block.
    pub fn leading_block(&self, k: usize) -> SkewMatrix {
        SkewMatrix {
            inner: self.inner.block(0, 0, k, k),
        }
    }

    /// Pfaffian by skew-symmetric elimination. `Pf([[0, a], [-a, 0]]) = a`
    /// and the empty matrix has Pfaffian 1.
    pub fn pfaffian(&self) -> Result<Rational> {
        let n = self.n();
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        let mut a = self.inner.to_rows();
        let mut pf = Rational::one();
        for k in (0..n).step_by(2) {
            let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) else {
                return Ok(Rational::zero());
            };
            if j != k + 1 {
                a.swap(j, k + 1);
                for row in a.iter_mut() {
                    row.swap(j, k + 1);
                }
                pf = -pf;
            }
            let pivot = a[k][k + 1].clone();
            pf *= &pivot;
            // Schur complement of the leading 2x2 block, which is again skew.
            for i in k + 2..n {
                for l in i + 1..n {
                    let corr = (&a[k][i] * &a[k + 1][l] - &a[k + 1][i] * &a[k][l]) / &pivot;
                    if corr.is_zero() {
                        continue;
                    }
                    a[i][l] -= &corr;
                    a[l][i] += &corr;
                }
            }
        }
        Ok(pf)
    }
}

impl TryFrom<RatMatrix> for SkewMatrix {
    type Error = Error;
    fn try_from(m: RatMatrix) -> Result<Self> {
        SkewMatrix::new(m)
    }
}

impl From<SkewMatrix> for RatMatrix {
    fn from(s: SkewMatrix) -> Self {
        s.inner
    }
}

/// `J0 = [[0, I_p], [-I_p, 0]]`.
pub fn standard_symplectic(p: usize) -> RatMatrix {
    let mut j = RatMatrix::zeros(2 * p, 2 * p);
    for i in 0..p {
        j[(i, p + i)] = Rational::one();
        j[(p + i, i)] = -Rational::one();
    }
    j
}

fn pairing(form: &RatMatrix, u: &[Rational], v: &[Rational]) -> Rational {
    let fv = form.mul_vec(v);
    u.iter()
        .zip(&fv)
        .filter(|(a, _)| !a.is_zero())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Invertible `T` with `T^t J0 T = -theta11` for an invertible skew block of
/// even size.
///
/// Symplectic Gram-Schmidt on the form `-theta11`, starting from the standard
/// basis: the first remaining vector is paired with the first later vector it
/// does not annihilate, the partner is rescaled so the pair is canonical, and
/// the pair is projected out of the rest. With `P = [e_1..e_p | f_1..f_p]`
/// we have `P^t (-theta11) P = J0`, so `T = P^-1`.
pub fn skew_congruence_factor(theta11: &SkewMatrix) -> Result<RatMatrix> {
    let dim = theta11.n();
    if dim % 2 == 1 {
        return Err(Error::OddDimension(dim));
    }
    let form = -theta11.inner();
    if form.determinant()?.is_zero() {
        return Err(Error::SingularInput);
    }
    let mut remaining: Vec<Vec<Rational>> = RatMatrix::identity(dim).to_rows();
    let mut es = Vec::with_capacity(dim / 2);
    let mut fs = Vec::with_capacity(dim / 2);
    while !remaining.is_empty() {
        let e = remaining.remove(0);
        let (pos, w) = remaining
            .iter()
            .enumerate()
            .map(|(i, v)| (i, pairing(&form, &e, v)))
            .find(|(_, w)| !w.is_zero())
            .ok_or(Error::SingularInput)?;
        let f: Vec<Rational> = remaining.remove(pos).iter().map(|x| x / &w).collect();
        for v in remaining.iter_mut() {
            let vf = pairing(&form, v, &f);
            let ve = pairing(&form, v, &e);
            for ((x, ei), fi) in v.iter_mut().zip(&e).zip(&f) {
                *x = &*x - &vf * ei + &ve * fi;
            }
        }
        es.push(e);
        fs.push(f);
    }
    let cols: Vec<Vec<Rational>> = es.into_iter().chain(fs).collect();
    let p_mat = RatMatrix::from_rows(cols)?.transpose();
    let t = p_mat.invert()?;
    let check = &(&t.transpose() * &standard_symplectic(dim / 2)) * &t;
    if check != form {
        return Err(Error::InternalAssertion(
            "T^t J0 T != -theta11 after symplectic reduction".into(),
        ));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::{int, rat};

    fn skew2(a: Rational) -> SkewMatrix {
        SkewMatrix::from_upper(2, &[a]).unwrap()
    }

    #[test]
    fn pfaffian_two_by_two_is_upper_entry() {
        assert_eq!(skew2(rat(5, 3)).pfaffian().unwrap(), rat(5, 3));
    }

    #[test]
    fn pfaffian_block_diagonal() {
        let s = SkewMatrix::from_upper(4, &[int(2), int(0), int(0), int(0), int(0), int(3)])
            .unwrap();
        assert_eq!(s.pfaffian().unwrap(), int(6));
        assert_eq!(s.inner().determinant().unwrap(), int(36));
    }

    #[test]
    fn pfaffian_empty_and_odd() {
        assert_eq!(SkewMatrix::zeros(0).pfaffian().unwrap(), int(1));
        assert_eq!(SkewMatrix::zeros(3).pfaffian(), Err(Error::OddDimension(3)));
    }

    #[test]
    fn pfaffian_four_by_four_formula() {
        // Pf = a12 a34 - a13 a24 + a14 a23
        let up = [int(1), int(2), int(3), int(4), int(5), int(6)];
        let s = SkewMatrix::from_upper(4, &up).unwrap();
        assert_eq!(s.pfaffian().unwrap(), int(6 - 2 * 5 + 3 * 4));
    }

    #[test]
    fn pfaffian_needs_pivot_swap() {
        // a12 = 0 forces a row/column exchange.
        let up = [int(0), int(2), int(3), int(4), int(5), int(6)];
        let s = SkewMatrix::from_upper(4, &up).unwrap();
        assert_eq!(s.pfaffian().unwrap(), int(-2 * 5 + 3 * 4));
    }

    #[test]
    fn rejects_non_antisymmetric() {
        assert_eq!(
            SkewMatrix::new(RatMatrix::from_ints(2, 2, &[0, 1, 1, 0])),
            Err(Error::NotAntisymmetric)
        );
        assert_eq!(
            SkewMatrix::new(RatMatrix::from_ints(2, 2, &[1, 0, 0, -1])),
            Err(Error::NotAntisymmetric)
        );
    }

    #[test]
    fn congruence_factor_of_minus_j0_is_identity() {
        let t = skew_congruence_factor(&skew2(int(-1))).unwrap();
        assert!(t.is_identity());
    }

    #[test]
    fn congruence_factor_half() {
        let t = skew_congruence_factor(&skew2(rat(1, 2))).unwrap();
        assert_eq!(t, RatMatrix::diagonal(&[int(1), rat(-1, 2)]));
    }

    #[test]
    fn congruence_factor_singular() {
        assert_eq!(
            skew_congruence_factor(&SkewMatrix::zeros(2)),
            Err(Error::SingularInput)
        );
        let up = [int(1), int(0), int(0), int(0), int(0), int(0)];
        assert_eq!(
            skew_congruence_factor(&SkewMatrix::from_upper(4, &up).unwrap()),
            Err(Error::SingularInput)
        );
    }

    #[test]
    fn congruence_factor_needs_reordering() {
        // theta_12 = 0 so the first pivot pairs index 0 with index 2.
        let up = [int(0), int(1), int(2), int(3), int(0), int(1)];
        let th = SkewMatrix::from_upper(4, &up).unwrap();
        let t = skew_congruence_factor(&th).unwrap();
        let lhs = &(&t.transpose() * &standard_symplectic(2)) * &t;
        assert_eq!(lhs, -th.inner());
    }
}
