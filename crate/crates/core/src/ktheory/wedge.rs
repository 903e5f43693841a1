//! Second exterior power of 3x3 integer matrices and the exhaustive search
//! for `A` with `A ^ A = diag(-1, 1, 1)`.
//!
//! `det(A ^ A) = det(A)^2` for 3x3 matrices, so no such `A` exists. The
//! search confirms this by enumeration on a finite box.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactmat::RatMatrix;
use crate::{Error, Result};

pub type Mat3 = [[i64; 3]; 3];

/// Ordered basis `e1^e2, e1^e3, e2^e3` of the second exterior power.
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Matrix of `A ^ A` on `(e1^e2, e1^e3, e2^e3)`: entry `((l,m),(j,k))` is the
/// minor of `A` on rows `l, m` and columns `j, k`.
pub fn wedge_square(a: &RatMatrix) -> Result<RatMatrix> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(Error::WrongDimension {
            expected: "3x3".into(),
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let mut w = RatMatrix::zeros(3, 3);
    for (r, &(l, m)) in PAIRS.iter().enumerate() {
        for (c, &(j, k)) in PAIRS.iter().enumerate() {
            w[(r, c)] = &a[(l, j)] * &a[(m, k)] - &a[(l, k)] * &a[(m, j)];
        }
    }
    Ok(w)
}

pub fn wedge_square_i64(a: &Mat3) -> Mat3 {
    let mut w = [[0i64; 3]; 3];
    for (r, &(l, m)) in PAIRS.iter().enumerate() {
        for (c, &(j, k)) in PAIRS.iter().enumerate() {
            w[r][c] = a[l][j] * a[m][k] - a[l][k] * a[m][j];
        }
    }
    w
}

pub fn det3(a: &Mat3) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminantWitness {
    pub required_det_of_wedge: i64,
    pub identity: String,
    /// Every hit would need `det(A)^2 = required_det_of_wedge`.
    pub impossible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub bound: i64,
    pub target: Mat3,
    pub checked: u64,
    pub hits: Vec<Mat3>,
    /// True when more hits exist than were recorded.
    pub truncated: bool,
    pub witness: DeterminantWitness,
}

/// Hits kept per report; the control target has very few.
const MAX_HITS: usize = 1000;

/// Every `A` with entries in `[-bound, bound]` and `A ^ A = target`,
/// in lexicographic order of the row-major entries.
pub fn search_wedge_target(bound: i64, target: Mat3) -> Result<CounterexampleReport> {
    if bound < 1 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let base = 2 * bound + 1;
    let total = (base as u64).pow(9);
    // One chunk per value of the first two entries; rayon keeps chunk order.
    let head = (base * base) as u64;
    let tail = total / head;
    let per_chunk: Vec<(u64, Vec<Mat3>)> = (0..head)
        .into_par_iter()
        .map(|h| {
            let mut hits = Vec::new();
            let mut a = [[0i64; 3]; 3];
            a[0][0] = (h / base as u64) as i64 - bound;
            a[0][1] = (h % base as u64) as i64 - bound;
            for t in 0..tail {
                let mut rest = t;
                for idx in (2..9).rev() {
                    a[idx / 3][idx % 3] = (rest % base as u64) as i64 - bound;
                    rest /= base as u64;
                }
                if wedge_square_i64(&a) == target && hits.len() <= MAX_HITS {
                    hits.push(a);
                }
            }
            (tail, hits)
        })
        .collect();
    let checked = per_chunk.iter().map(|(c, _)| c).sum();
    let mut hits: Vec<Mat3> = per_chunk.into_iter().flat_map(|(_, h)| h).collect();
    let truncated = hits.len() > MAX_HITS;
    hits.truncate(MAX_HITS);
    let required = det3(&target);
    for a in &hits {
        let d = det3(a);
        if d * d != required {
            return Err(Error::InternalAssertion(
                "hit violates det(A ^ A) = det(A)^2".into(),
            ));
        }
    }
    Ok(CounterexampleReport {
        bound,
        target,
        checked,
        hits,
        truncated,
        witness: DeterminantWitness {
            required_det_of_wedge: required,
            identity: "det(A ^ A) = det(A)^2 >= 0".into(),
            impossible: required < 0,
        },
    })
}

/// Search for `A ^ A = diag(-1, 1, 1)`.
pub fn counterexample_search(bound: i64) -> Result<CounterexampleReport> {
    search_wedge_target(bound, [[-1, 0, 0], [0, 1, 0], [0, 0, 1]])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetIdentityReport {
    pub seed: u64,
    pub count: usize,
    pub entry_bound: i64,
    pub violations: Vec<Mat3>,
}

/// `det(A ^ A) = det(A)^2` on `count` seeded random matrices, checked with
/// exact rational determinants.
pub fn det_identity_sample(seed: u64, count: usize, entry_bound: i64) -> DetIdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..count {
        let mut a = [[0i64; 3]; 3];
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.gen_range(-entry_bound..=entry_bound);
            }
        }
        let flat: Vec<i64> = a.iter().flatten().copied().collect();
        let m = RatMatrix::from_ints(3, 3, &flat);
        let w = wedge_square(&m).expect("3x3");
        let d = m.determinant().expect("square");
        if w.determinant().expect("square") != &d * &d {
            violations.push(a);
        }
    }
    DetIdentityReport {
        seed,
        count,
        entry_bound,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::int;

    #[test]
    fn identity_and_diagonal() {
        let id = RatMatrix::identity(3);
        assert_eq!(wedge_square(&id).unwrap(), id);
        let d = RatMatrix::diagonal(&[int(1), int(1), int(-1)]);
        assert_eq!(
            wedge_square(&d).unwrap(),
            RatMatrix::diagonal(&[int(1), int(-1), int(-1)])
        );
        assert!(matches!(
            wedge_square(&RatMatrix::identity(2)),
            Err(Error::WrongDimension { .. })
        ));
    }

    #[test]
    fn fast_path_matches_exact() {
        let a = [[2, -1, 0], [3, 4, -5], [1, 0, 2]];
        let m = RatMatrix::from_ints(3, 3, &a.concat());
        let w = wedge_square_i64(&a);
        assert_eq!(wedge_square(&m).unwrap(), RatMatrix::from_ints(3, 3, &w.concat()));
        assert_eq!(int(det3(&a)), m.determinant().unwrap());
    }

    #[test]
    fn bound_one_is_empty() {
        let r = counterexample_search(1).unwrap();
        assert_eq!(r.checked, 19_683);
        assert!(r.hits.is_empty());
        assert!(r.witness.impossible);
    }

    #[test]
    fn control_finds_identity() {
        let r = search_wedge_target(1, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert!(r.hits.contains(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        assert!(r.hits.contains(&[[-1, 0, 0], [0, -1, 0], [0, 0, -1]]));
    }

    #[test]
    fn det_identity_small_sample() {
        assert!(det_identity_sample(7, 200, 5).violations.is_empty());
    }
}
