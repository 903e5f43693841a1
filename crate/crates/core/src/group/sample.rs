//! Seeded pseudorandom words and the empirical domain probe.
//!
//! Token distribution: `sigma_2` with probability 1/4 (when `n >= 2`),
//! otherwise `rho`, `nu`, `mu` uniformly; `rho(R)` uses a product of one to
//! three elementary or transposition matrices; `nu`/`mu` entries lie in
//! `[-2, 2]`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GeneratorWord, Token};
use crate::exactmat::{format_rational, int, RatMatrix, Rational, SkewMatrix};
use crate::{Error, Result};

pub fn random_skew_int<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-bound..=bound);
            m[(i, j)] = int(v);
            m[(j, i)] = int(-v);
        }
    }
    m
}

fn random_factor<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let mut f = RatMatrix::identity(n);
    if n == 1 {
        if rng.gen_bool(0.5) {
            f[(0, 0)] = int(-1);
        }
        return f;
    }
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    if rng.gen_bool(0.5) {
        let c = [-2, -1, 1, 2][rng.gen_range(0..4)];
        f[(i, j)] = int(c);
    } else {
        f[(i, i)] = int(0);
        f[(j, j)] = int(0);
        f[(i, j)] = int(1);
        f[(j, i)] = int(1);
    }
    f
}

/// Product of one to three elementary/transposition matrices.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let k = rng.gen_range(1..=3);
    (0..k).fold(RatMatrix::identity(n), |acc, _| &acc * &random_factor(rng, n))
}

pub fn random_generator<R: Rng>(rng: &mut R, n: usize) -> Token {
    if n >= 2 && rng.gen_bool(0.25) {
        return Token::Sigma {
            k: 2,
            allow_odd: false,
        };
    }
    match rng.gen_range(0..3) {
        0 => Token::Rho {
            r: random_unimodular(rng, n),
        },
        1 => Token::Nu {
            n: random_skew_int(rng, n, 2),
        },
        _ => Token::Mu {
            n: random_skew_int(rng, n, 2),
        },
    }
}

/// Word of uniformly random length in `1..=max_len`.
pub fn random_word<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> GeneratorWord {
    let len = rng.gen_range(1..=max_len.max(1));
    GeneratorWord {
        n: Some(n),
        tokens: (0..len).map(|_| random_generator(rng, n)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthStats {
    pub length: usize,
    pub count: usize,
    pub defined: usize,
    pub stepwise_defined: usize,
}

/// Empirical probe of how often random words act at a given `theta`.
///
/// `defined` counts words whose product `g` has `C theta + D` invertible;
/// `stepwise_defined` counts words where every letter is defined along the
/// way (`theta` lies in the dense open set attached to that factorization);
/// `defined_not_stepwise` counts the cases where `g theta` exists but the
/// factorization breaks down, which are only flagged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DomainReport {
    pub n: usize,
    pub seed: u64,
    pub count: usize,
    pub max_word_len: usize,
    pub defined: usize,
    pub fraction_defined: String,
    pub stepwise_defined: usize,
    pub fraction_stepwise_defined: String,
    pub defined_not_stepwise: usize,
    pub action_law_violations: usize,
    pub by_length: Vec<LengthStats>,
}

pub fn sample_domain_report(
    theta: &SkewMatrix,
    max_word_len: usize,
    count: usize,
    seed: u64,
) -> Result<DomainReport> {
    if max_word_len == 0 {
        return Err(Error::InvalidArgument("max_word_len must be >= 1".into()));
    }
    let n = theta.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_length: Vec<LengthStats> = (1..=max_word_len)
        .map(|length| LengthStats {
            length,
            count: 0,
            defined: 0,
            stepwise_defined: 0,
        })
        .collect();
    let (mut defined, mut stepwise, mut flagged, mut violations) = (0, 0, 0, 0);
    for _ in 0..count {
        let word = random_word(&mut rng, n, max_word_len);
        let letters = word.letters(n)?;
        let g = word.evaluate(n)?;
        let direct = g.act(theta).ok();
        // Rightmost letter acts first.
        let chained = letters
            .iter()
            .rev()
            .try_fold(theta.clone(), |th, h| h.act(&th).ok());
        let stats = &mut by_length[word.len() - 1];
        stats.count += 1;
        if direct.is_some() {
            defined += 1;
            stats.defined += 1;
        }
        if chained.is_some() {
            stepwise += 1;
            stats.stepwise_defined += 1;
        }
        match (&direct, &chained) {
            (Some(a), Some(b)) if a != b => violations += 1,
            (None, Some(_)) => violations += 1,
            (Some(_), None) => flagged += 1,
            _ => {}
        }
    }
    let frac = |k: usize| {
        if count == 0 {
            "0".to_string()
        } else {
            format_rational(&Rational::new(k.into(), count.into()))
        }
    };
    Ok(DomainReport {
        n,
        seed,
        count,
        max_word_len,
        defined,
        fraction_defined: frac(defined),
        stepwise_defined: stepwise,
        fraction_stepwise_defined: frac(stepwise),
        defined_not_stepwise: flagged,
        action_law_violations: violations,
        by_length,
    })
}
