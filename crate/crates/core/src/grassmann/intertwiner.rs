//! The Fock-space intertwiner `U` with `U gamma U^-1 = alpha_g(gamma)` and
//! the projective action `U theta_hat ~ theta'_hat` it induces.
//!
//! The intertwining equations `alpha(gamma_i) U = U gamma_i` are linear in
//! the `4^n` entries of `U`. The equations for `a^j` acting on monomials
//! whose indices all exceed `j` express `U e_T` as
//! `alpha(a^{t_1}) ... alpha(a^{t_k}) U e_0` (`T = {t_1 < ... < t_k}`), so the
//! solution space is parametrized by the vacuum image `w = U e_0`. The
//! `a^j`-free equations at the vacuum say `alpha(b_i) w = 0`; the kernel of
//! those is computed first, and the remaining equations are imposed on that
//! kernel. The result is the exact solution space of the full system.

use num_traits::{One, Zero};
use serde::Serialize;

use super::operator::{ladder, CliffordOp, OperatorMatrix};
use super::{theta_hat, GrassmannElement};
use crate::exactmat::{serialize_rational, RatMatrix, Rational, RowReducer, SkewMatrix};
use crate::group::GroupElement;
use crate::{Error, Result};

/// Largest `n` accepted by default (operators are `2^n x 2^n`).
pub const DEFAULT_MAX_N: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Intertwiner {
    pub n: usize,
    /// Normalized so the first nonzero entry in row-major order is 1.
    pub u: OperatorMatrix,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectiveAction {
    pub theta_prime: SkewMatrix,
    /// Vacuum coefficient of `U theta_hat`, so `U theta_hat = scalar * theta'_hat`.
    #[serde(serialize_with = "serialize_rational")]
    pub scalar: Rational,
    pub image: GrassmannElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilatorReport {
    pub n: usize,
    pub holds: bool,
    /// `b_i theta_hat = theta_ij a^j theta_hat`, per `i`.
    pub base_identity: Vec<bool>,
    /// `alpha(b_i) w = theta_ik alpha(a^k) w` for `w = U theta_hat`, per `i`.
    pub transformed: Vec<bool>,
    /// `b_i w = theta'_ij a^j w`, per `i`.
    pub image_identity: Vec<bool>,
    pub theta_prime: SkewMatrix,
}

fn images(m: &RatMatrix) -> Vec<CliffordOp> {
    (0..m.rows()).map(|i| CliffordOp::image(m, i)).collect()
}

/// Columns `U e_T` determined by the vacuum image through the creation
/// equations.
fn columns_from_vacuum(alphas: &[CliffordOp], n: usize, w: Vec<Rational>) -> Vec<Vec<Rational>> {
    let dim = 1usize << n;
    let mut cols = Vec::with_capacity(dim);
    cols.push(w);
    for t in 1..dim {
        let j = t.trailing_zeros() as usize;
        let prev = alphas[j].apply(&cols[t ^ (1 << j)]);
        cols.push(prev);
    }
    cols
}

/// `alpha(gamma_i) U e_S - U gamma_i e_S` for every `(i, S)` not already
/// used to define the columns.
fn residuals<'a>(
    alphas: &'a [CliffordOp],
    n: usize,
    cols: &'a [Vec<Rational>],
) -> impl Iterator<Item = Vec<Rational>> + 'a {
    let dim = 1usize << n;
    (0..2 * n).flat_map(move |i| {
        (0..dim).filter_map(move |s| {
            if i < n && (s & ((1usize << (i + 1)) - 1)) == 0 {
                return None;
            }
            let mut r = alphas[i].apply(&cols[s]);
            if let Some((neg, to)) = ladder(n, i, s) {
                for (x, y) in r.iter_mut().zip(&cols[to]) {
                    if neg {
                        *x += y;
                    } else {
                        *x -= y;
                    }
                }
            }
            Some(r)
        })
    })
}

fn normalize(cols: &mut [Vec<Rational>]) {
    let dim = cols.len();
    let lead = (0..dim)
        .flat_map(|r| (0..dim).map(move |c| (r, c)))
        .map(|(r, c)| &cols[c][r])
        .find(|x| !x.is_zero())
        .cloned();
    if let Some(lead) = lead {
        if !lead.is_one() {
            for x in cols.iter_mut().flatten() {
                *x /= &lead;
            }
        }
    }
}

pub fn intertwiner(g: &GroupElement) -> Result<Intertwiner> {
    intertwiner_for_matrix(g.matrix(), DEFAULT_MAX_N)
}

/// Intertwiner for an arbitrary `2n x 2n` rational matrix. Matrices outside
/// `O(n,n)` do not preserve the anticommutation relations and yield
/// `NoIntertwiner`.
pub fn intertwiner_for_matrix(m: &RatMatrix, max_n: usize) -> Result<Intertwiner> {
    if !m.is_square() || m.rows() % 2 == 1 {
        return Err(Error::WrongDimension {
            expected: "2n x 2n".into(),
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows() / 2;
    if n > max_n {
        return Err(Error::DimensionCap { n, cap: max_n });
    }
    let dim = 1usize << n;
    let alphas = images(m);

    let mut vacuum = RowReducer::new(dim);
    for alpha in &alphas[n..] {
        let op = alpha.to_operator();
        for r in 0..dim {
            vacuum.insert(op.matrix().row(r).to_vec());
            if vacuum.is_full() {
                return Err(Error::NoIntertwiner);
            }
        }
    }
    let candidates = vacuum.nullspace();

    let families: Vec<Vec<Vec<Rational>>> = candidates
        .iter()
        .map(|w| columns_from_vacuum(&alphas, n, w.clone()))
        .collect();
    let d = families.len();
    let mut rest = RowReducer::new(d);
    let mut per_family: Vec<_> = families
        .iter()
        .map(|cols| residuals(&alphas, n, cols))
        .collect();
    'outer: loop {
        let mut block: Vec<Vec<Rational>> = Vec::with_capacity(d);
        for it in per_family.iter_mut() {
            match it.next() {
                Some(r) => block.push(r),
                None => break 'outer,
            }
        }
        for row in 0..dim {
            rest.insert(block.iter().map(|r| r[row].clone()).collect());
            if rest.is_full() {
                return Err(Error::NoIntertwiner);
            }
        }
    }
    drop(per_family);
    let kernel = rest.nullspace();
    match kernel.len() {
        0 => return Err(Error::NoIntertwiner),
        1 => {}
        k => return Err(Error::AmbiguousIntertwiner(k)),
    }
    let coeffs = &kernel[0];
    let mut cols = vec![vec![Rational::zero(); dim]; dim];
    for (c, fam) in coeffs.iter().zip(&families) {
        if c.is_zero() {
            continue;
        }
        for (dst, src) in cols.iter_mut().zip(fam) {
            for (x, y) in dst.iter_mut().zip(src) {
                *x += c * y;
            }
        }
    }
    normalize(&mut cols);

    // Every relation, including the defining ones, on the final U.
    for (i, alpha) in alphas.iter().enumerate() {
        for s in 0..dim {
            let mut r = alpha.apply(&cols[s]);
            if let Some((neg, to)) = ladder(n, i, s) {
                for (x, y) in r.iter_mut().zip(&cols[to]) {
                    if neg {
                        *x += y;
                    } else {
                        *x -= y;
                    }
                }
            }
            if r.iter().any(|x| !x.is_zero()) {
                return Err(Error::InternalAssertion(format!(
                    "intertwining relation fails for generator {i} on monomial {s}"
                )));
            }
        }
    }

    let mut u = RatMatrix::zeros(dim, dim);
    for (c, col) in cols.into_iter().enumerate() {
        for (r, x) in col.into_iter().enumerate() {
            u[(r, c)] = x;
        }
    }
    Ok(Intertwiner {
        n,
        u: OperatorMatrix::new(n, u)?,
        kernel_dim: 1,
    })
}

fn check_dims(g: &GroupElement, theta: &SkewMatrix) -> Result<()> {
    if g.n() != theta.n() {
        return Err(Error::DimensionMismatch(format!(
            "group element has n = {}, theta has n = {}",
            g.n(),
            theta.n()
        )));
    }
    Ok(())
}

/// `theta' ` read off from `U theta_hat = c * theta'_hat`; `DomainFailure`
/// when `c = 0`. Asserts agreement with the fractional-linear action.
pub fn projective_act(g: &GroupElement, theta: &SkewMatrix) -> Result<ProjectiveAction> {
    check_dims(g, theta)?;
    let u = intertwiner(g)?.u;
    projective_act_with(g, &u, theta)
}

fn projective_act_with(
    g: &GroupElement,
    u: &OperatorMatrix,
    theta: &SkewMatrix,
) -> Result<ProjectiveAction> {
    let n = theta.n();
    let image = u.apply(&theta_hat(theta));
    let c = image.coeff(0).clone();
    if c.is_zero() {
        return Err(Error::DomainFailure);
    }
    let mut tp = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = image.coeff((1 << i) | (1 << j)) / &c;
            tp[(j, i)] = -v.clone();
            tp[(i, j)] = v;
        }
    }
    let theta_prime = SkewMatrix::new(tp)?;
    if theta_hat(&theta_prime).scale(&c) != image {
        return Err(Error::InternalAssertion(
            "U theta_hat is not a multiple of a Gaussian".into(),
        ));
    }
    match g.act(theta) {
        Ok(direct) if direct == theta_prime => {}
        Ok(_) => {
            return Err(Error::InternalAssertion(
                "projective action disagrees with the fractional-linear action".into(),
            ))
        }
        Err(Error::OutsideDomain) => {
            return Err(Error::InternalAssertion(
                "vacuum coefficient is nonzero but C theta + D is singular".into(),
            ))
        }
        Err(e) => return Err(e),
    }
    Ok(ProjectiveAction {
        theta_prime,
        scalar: c,
        image,
    })
}

fn annihilator_identity(
    b: &[CliffordOp],
    a: &[CliffordOp],
    theta: &SkewMatrix,
    w: &GrassmannElement,
) -> Vec<bool> {
    let n = theta.n();
    (0..n)
        .map(|i| {
            let lhs = b[i].apply(w.coeffs());
            let mut rhs = vec![Rational::zero(); w.coeffs().len()];
            for (k, ak) in a.iter().enumerate() {
                let t = theta.get(i, k);
                if t.is_zero() {
                    continue;
                }
                for (x, y) in rhs.iter_mut().zip(ak.apply(w.coeffs())) {
                    *x += t * y;
                }
            }
            lhs == rhs
        })
        .collect()
}

/// Checks that `theta_hat` is annihilated by `b_i - theta_ij a^j`, that
/// `U theta_hat` is annihilated by the transported operators, and that it is
/// annihilated by `b_i - theta'_ij a^j`.
pub fn verify_annihilators(g: &GroupElement, theta: &SkewMatrix) -> Result<AnnihilatorReport> {
    check_dims(g, theta)?;
    let n = theta.n();
    let u = intertwiner(g)?.u;
    let plain: Vec<CliffordOp> = (0..2 * n).map(|k| CliffordOp::generator(n, k)).collect();
    let alphas = images(g.matrix());
    let th = theta_hat(theta);
    let base_identity = annihilator_identity(&plain[n..], &plain[..n], theta, &th);
    let act = projective_act_with(g, &u, theta)?;
    let transformed = annihilator_identity(&alphas[n..], &alphas[..n], theta, &act.image);
    let image_identity =
        annihilator_identity(&plain[n..], &plain[..n], &act.theta_prime, &act.image);
    let holds = base_identity
        .iter()
        .chain(&transformed)
        .chain(&image_identity)
        .all(|&b| b);
    Ok(AnnihilatorReport {
        n,
        holds,
        base_identity,
        transformed,
        image_identity,
        theta_prime: act.theta_prime,
    })
}
