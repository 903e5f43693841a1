//! Embedding-map construction behind the `sigma_2p` Morita equivalence.
//!
//! For `theta` with invertible top-left `2p x 2p` block `theta11` and
//! `q = n - 2p`, the embedding
//!
//! ```text
//!     T = [[T11, 0  ],      J = [[J0, 0,  0 ],      Tbar = [[T11, 0,   0],
//!          [0,   I_q],           [0,  0,  I ],              [0,   I,   0],
//!          [T31, T32]]           [0,  -I, 0 ]]              [T31, T32, I]]
//! ```
//!
//! satisfies `T^t J T = -theta`, so the skew cocycle `e(x . J y)` on
//! `G = R^2p x Z^q x T^q` restricts to `e(-x . theta y)` on the lattice
//! `D = T(Z^n)`. Its annihilator is `(Tbar^t J)^-1 (Z^{n+q})`; dropping the
//! middle column block (which lands in `0 x 0 x Z^q`, trivial in `G`) and an
//! overall sign gives the dual embedding `S` with `S^t J S = sigma_2p(theta)`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmat::{
    int, is_integer, skew_congruence_factor, standard_symplectic, RatMatrix, Rational, SkewMatrix,
};
use crate::{Error, Result};

/// How to split `theta22 = T32^t - T32`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum T32Mode {
    /// Strictly upper-triangular: `T32 = -(strict upper part of theta22)`.
    Upper,
    /// `T32 = -theta22 / 2`.
    #[default]
    Half,
}

impl std::str::FromStr for T32Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(T32Mode::Upper),
            "half" => Ok(T32Mode::Half),
            other => Err(Error::InvalidArgument(format!("unknown t32 mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingData {
    #[serde(skip)]
    pub n: usize,
    pub p: usize,
    pub q: usize,
    #[serde(skip)]
    pub mode: T32Mode,
    #[serde(skip)]
    pub theta: SkewMatrix,
    #[serde(rename = "T11")]
    pub t11: RatMatrix,
    #[serde(rename = "T31")]
    pub t31: RatMatrix,
    #[serde(rename = "T32")]
    pub t32: RatMatrix,
    #[serde(rename = "T")]
    pub t: RatMatrix,
    #[serde(rename = "J")]
    pub j: RatMatrix,
    #[serde(rename = "Tbar")]
    pub tbar: RatMatrix,
    #[serde(rename = "S")]
    pub s: RatMatrix,
    pub sigma_theta: SkewMatrix,
}

fn split_dims(theta: &SkewMatrix, p: usize) -> Result<(usize, usize)> {
    let n = theta.n();
    if 2 * p > n {
        return Err(Error::InvalidArgument(format!("2p = {} exceeds n = {n}", 2 * p)));
    }
    Ok((2 * p, n - 2 * p))
}

/// The symplectic matrix `J` of size `2p + 2q`.
pub fn heisenberg_form(p: usize, q: usize) -> RatMatrix {
    let j0 = standard_symplectic(p);
    let id = RatMatrix::identity(q);
    let z = |r, c| RatMatrix::zeros(r, c);
    RatMatrix::from_blocks(&[
        vec![&j0, &z(2 * p, q), &z(2 * p, q)],
        vec![&z(q, 2 * p), &z(q, q), &id],
        vec![&z(q, 2 * p), &(-&id), &z(q, q)],
    ])
    .unwrap()
}

/// `sigma_2p(theta)` from the block formula
/// `[[t11^-1, -t11^-1 t12], [t21 t11^-1, t22 - t21 t11^-1 t12]]`.
pub fn sigma_blocks(theta: &SkewMatrix, p: usize) -> Result<SkewMatrix> {
    let (k, q) = split_dims(theta, p)?;
    let th = theta.inner();
    let t11 = th.block(0, 0, k, k);
    let t12 = th.block(0, k, k, q);
    let t21 = th.block(k, 0, q, k);
    let t22 = th.block(k, k, q, q);
    let inv = t11.invert().map_err(|_| Error::SingularBlock(k))?;
    let top_right = -&(&inv * &t12);
    let bottom_left = &t21 * &inv;
    let bottom_right = &t22 - &(&bottom_left * &t12);
    let m = RatMatrix::from_blocks(&[vec![&inv, &top_right], vec![&bottom_left, &bottom_right]])?;
    SkewMatrix::new(m).map_err(|_| Error::InternalAssertion("sigma_2p(theta) not skew".into()))
}

fn t32_for(theta22: &RatMatrix, mode: T32Mode) -> RatMatrix {
    match mode {
        T32Mode::Half => theta22.scale(&Rational::new((-1).into(), 2.into())),
        T32Mode::Upper => {
            let q = theta22.rows();
            let mut t = RatMatrix::zeros(q, q);
            for i in 0..q {
                for j in i + 1..q {
                    t[(i, j)] = -theta22[(i, j)].clone();
                }
            }
            t
        }
    }
}

fn assert_identity(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InternalAssertion(what.to_string()))
    }
}

/// Builds `T11, T31, T32, T, J, Tbar` and the dual embedding `S`, asserting
/// `T^t J T = -theta`, `det Tbar != 0` and `S^t J S = sigma_2p(theta)`.
pub fn build_embedding(theta: &SkewMatrix, p: usize, mode: T32Mode) -> Result<EmbeddingData> {
    let (k, q) = split_dims(theta, p)?;
    let n = theta.n();
    let th = theta.inner();
    let t11 = match skew_congruence_factor(&theta.leading_block(k)) {
        Ok(t) => t,
        Err(Error::SingularInput) => return Err(Error::SingularBlock(k)),
        Err(e) => return Err(e),
    };
    let t31 = th.block(0, k, k, q).transpose();
    let theta22 = th.block(k, k, q, q);
    let t32 = t32_for(&theta22, mode);
    assert_identity(&t32.transpose() - &t32 == theta22, "theta22 != T32^t - T32")?;

    let z = |r, c| RatMatrix::zeros(r, c);
    let id = RatMatrix::identity(q);
    let t = RatMatrix::from_blocks(&[
        vec![&t11, &z(k, q)],
        vec![&z(q, k), &id],
        vec![&t31, &t32],
    ])?;
    let j = heisenberg_form(p, q);
    let tbar = RatMatrix::from_blocks(&[
        vec![&t11, &z(k, q), &z(k, q)],
        vec![&z(q, k), &id, &z(q, q)],
        vec![&t31, &t32, &id],
    ])?;
    assert_identity(
        &(&t.transpose() * &j) * &t == -th,
        "T^t J T != -theta",
    )?;
    assert_identity(!tbar.determinant()?.is_zero(), "Tbar is singular")?;

    let mut data = EmbeddingData {
        n,
        p,
        q,
        mode,
        theta: theta.clone(),
        t11,
        t31,
        t32,
        t,
        j,
        tbar,
        s: RatMatrix::zeros(n + q, n),
        sigma_theta: sigma_blocks(theta, p)?,
    };
    data.s = dual_embedding(&data)?;
    Ok(data)
}

/// `(Tbar^t J)^-1`, checked against its closed form
/// `[[-J0 T11^-t, 0, J0 T11^-t T31^t], [0, 0, -I], [0, I, -T32^t]]`.
pub fn dual_lattice_basis(e: &EmbeddingData) -> Result<RatMatrix> {
    let (k, q) = (2 * e.p, e.q);
    let x = (&e.tbar.transpose() * &e.j)
        .invert()
        .map_err(|_| Error::InternalAssertion("Tbar^t J is singular".into()))?;
    let j0 = standard_symplectic(e.p);
    let j0_t11_inv_t = &j0 * &e.t11.transpose().invert()?;
    let id = RatMatrix::identity(q);
    let z = |r, c| RatMatrix::zeros(r, c);
    let closed = RatMatrix::from_blocks(&[
        vec![&(-&j0_t11_inv_t), &z(k, q), &(&j0_t11_inv_t * &e.t31.transpose())],
        vec![&z(q, k), &z(q, q), &(-&id)],
        vec![&z(q, k), &id, &(-&e.t32.transpose())],
    ])?;
    assert_identity(x == closed, "(Tbar^t J)^-1 differs from its closed form")?;
    Ok(x)
}

/// The dual embedding `S : Z^n -> D^perp` with `S^t J S = sigma_2p(theta)`.
pub fn dual_embedding(e: &EmbeddingData) -> Result<RatMatrix> {
    let (k, q, n) = (2 * e.p, e.q, e.n);
    let x = dual_lattice_basis(e)?;
    // Middle column block maps Z^q onto 0 x 0 x Z^q, which is zero in G.
    let middle = x.block(0, k, n + q, q);
    let expected = RatMatrix::from_blocks(&[
        vec![&RatMatrix::zeros(k + q, q)],
        vec![&RatMatrix::identity(q)],
    ])?;
    assert_identity(middle == expected, "middle column block is not (0, 0, I)")?;
    let kept = RatMatrix::from_blocks(&[vec![&x.block(0, 0, n + q, k), &x.block(0, k + q, n + q, q)]])?;
    let s = -&kept;
    let sigma = sigma_blocks(&e.theta, e.p)?;
    assert_identity(
        &(&s.transpose() * &e.j) * &s == *sigma.inner(),
        "S^t J S != sigma_2p(theta)",
    )?;
    Ok(s)
}

/// `(T x) . J (T y) = -x . theta y` for integer vectors.
pub fn check_cocycle_restriction(e: &EmbeddingData, x: &[i64], y: &[i64]) -> Result<bool> {
    if x.len() != e.n || y.len() != e.n {
        return Err(Error::DimensionMismatch(format!(
            "vectors must have length {}",
            e.n
        )));
    }
    let xv: Vec<Rational> = x.iter().map(|&v| int(v)).collect();
    let yv: Vec<Rational> = y.iter().map(|&v| int(v)).collect();
    let tx = e.t.mul_vec(&xv);
    let jty = e.j.mul_vec(&e.t.mul_vec(&yv));
    let lhs: Rational = tx.iter().zip(&jty).map(|(a, b)| a * b).sum();
    let thy = e.theta.inner().mul_vec(&yv);
    let rhs: Rational = -xv.iter().zip(&thy).map(|(a, b)| a * b).sum::<Rational>();
    Ok(lhs == rhs)
}

/// Whether the preimage `w` in `R^2p x Z^q x R^q` lies in the annihilator
/// of `D`, i.e. `T^t J w` is integral.
pub fn dual_lattice_member(e: &EmbeddingData, w: &[Rational]) -> Result<bool> {
    let (k, q) = (2 * e.p, e.q);
    if w.len() != e.n + q {
        return Err(Error::MalformedVector(format!(
            "length {} but G has {} coordinates",
            w.len(),
            e.n + q
        )));
    }
    if !w[k..k + q].iter().all(is_integer) {
        return Err(Error::MalformedVector(
            "non-integer entry in the Z^q slot".into(),
        ));
    }
    let image = e.t.transpose().mul_vec(&e.j.mul_vec(w));
    Ok(image.iter().all(is_integer))
}

/// A point of `G = R^2p x Z^q x T^q`, torus part reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    pub u: Vec<Rational>,
    pub z: Vec<BigInt>,
    pub t: Vec<Rational>,
}

fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

impl LatticeVector {
    pub fn from_preimage(p: usize, q: usize, w: &[Rational]) -> Result<Self> {
        let k = 2 * p;
        if w.len() != k + 2 * q {
            return Err(Error::MalformedVector(format!("length {}", w.len())));
        }
        let z = w[k..k + q]
            .iter()
            .map(|v| {
                if is_integer(v) {
                    Ok(v.to_integer())
                } else {
                    Err(Error::MalformedVector("non-integer entry in the Z^q slot".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            u: w[..k].to_vec(),
            z,
            t: w[k + q..].iter().map(frac).collect(),
        })
    }

    /// Image of an integer vector under the embedding `T`.
    pub fn image(e: &EmbeddingData, x: &[i64]) -> Result<Self> {
        if x.len() != e.n {
            return Err(Error::DimensionMismatch(format!("expected length {}", e.n)));
        }
        let xv: Vec<Rational> = x.iter().map(|&v| int(v)).collect();
        Self::from_preimage(e.p, e.q, &e.t.mul_vec(&xv))
    }

    pub fn to_preimage(&self) -> Vec<Rational> {
        self.u
            .iter()
            .cloned()
            .chain(self.z.iter().map(|v| Rational::from_integer(v.clone())))
            .chain(self.t.iter().cloned())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().all(Zero::is_zero)
            && self.z.iter().all(Zero::is_zero)
            && self.t.iter().all(|v| !v.is_positive())
    }
}
