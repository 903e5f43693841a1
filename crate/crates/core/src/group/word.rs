use serde::{Deserialize, Serialize};

use super::{mu, nu, rho, sigma_with, GroupElement};
use crate::exactmat::RatMatrix;
use crate::{Error, Result};

/// One letter of a word in the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Token {
    Rho {
        #[serde(rename = "R")]
        r: RatMatrix,
    },
    Nu {
        #[serde(rename = "N")]
        n: RatMatrix,
    },
    Mu {
        #[serde(rename = "N")]
        n: RatMatrix,
    },
    Sigma {
        k: usize,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        allow_odd: bool,
    },
    Inverse {
        of: Box<Token>,
    },
}

impl Token {
    pub fn evaluate(&self, n: usize) -> Result<GroupElement> {
        let g = match self {
            Token::Rho { r } => rho(r)?,
            Token::Nu { n: m } => nu(m)?,
            Token::Mu { n: m } => mu(m)?,
            Token::Sigma { k, allow_odd } => sigma_with(*k, n, *allow_odd)?,
            Token::Inverse { of } => of.evaluate(n)?.inverse(),
        };
        if g.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "token has n = {}, word has n = {n}",
                g.n()
            )));
        }
        Ok(g)
    }

    /// Dimension implied by the token's matrix, if it carries one.
    pub fn implied_n(&self) -> Option<usize> {
        match self {
            Token::Rho { r } => Some(r.rows()),
            Token::Nu { n } | Token::Mu { n } => Some(n.rows()),
            Token::Sigma { .. } => None,
            Token::Inverse { of } => of.implied_n(),
        }
    }
}

/// Ordered product of generators; `[t1, t2, t3]` evaluates to `t1 t2 t3`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorWord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub tokens: Vec<Token>,
}

impl GeneratorWord {
    pub fn new(tokens: Vec<Token>) -> Self {
        Self { n: None, tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Explicit `n`, else the first token that carries a matrix.
    pub fn infer_n(&self) -> Option<usize> {
        self.n
            .or_else(|| self.tokens.iter().find_map(Token::implied_n))
    }

    pub fn evaluate(&self, n: usize) -> Result<GroupElement> {
        if let Some(declared) = self.n {
            if declared != n {
                return Err(Error::DimensionMismatch(format!(
                    "word declares n = {declared}, evaluated at n = {n}"
                )));
            }
        }
        self.tokens
            .iter()
            .try_fold(GroupElement::identity(n), |acc, t| acc.compose(&t.evaluate(n)?))
    }

    /// The elements `t1, ..., tk` in word order.
    pub fn letters(&self, n: usize) -> Result<Vec<GroupElement>> {
        self.tokens.iter().map(|t| t.evaluate(n)).collect()
    }
}

pub fn evaluate(word: &GeneratorWord, n: usize) -> Result<GroupElement> {
    word.evaluate(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{mu, sigma};

    #[test]
    fn sigma_nu_sigma_is_mu() {
        let n = RatMatrix::from_ints(2, 2, &[0, 5, -5, 0]);
        let w = GeneratorWord::new(vec![
            Token::Sigma { k: 2, allow_odd: false },
            Token::Nu { n: n.clone() },
            Token::Sigma { k: 2, allow_odd: false },
        ]);
        assert_eq!(w.evaluate(2).unwrap(), mu(&n).unwrap());
    }

    #[test]
    fn permutation_conjugation_moves_support() {
        // N supported on (0,1); conjugating by the permutation (1 3) moves it to (2,1).
        let n = RatMatrix::from_ints(3, 3, &[0, 2, 0, -2, 0, 0, 0, 0, 0]);
        let p = RatMatrix::from_ints(3, 3, &[0, 0, 1, 0, 1, 0, 1, 0, 0]);
        let pinv = p.invert().unwrap();
        let w = GeneratorWord::new(vec![
            Token::Rho { r: p.clone() },
            Token::Mu { n: n.clone() },
            Token::Rho { r: pinv },
        ]);
        // rho(P) mu(N) rho(P)^-1 = mu(P^-t N P^-1)
        let pit = p.invert().unwrap().transpose();
        let moved = &(&pit * &n) * &p.invert().unwrap();
        assert_eq!(w.evaluate(3).unwrap(), mu(&moved).unwrap());
        assert_eq!(moved[(2, 1)], crate::exactmat::int(2));
    }

    #[test]
    fn inverse_token() {
        let w = GeneratorWord::new(vec![
            Token::Sigma { k: 2, allow_odd: false },
            Token::Inverse {
                of: Box::new(Token::Sigma { k: 2, allow_odd: false }),
            },
        ]);
        assert!(w.evaluate(3).unwrap().is_identity());
        let _ = sigma(2, 3).unwrap();
    }

    #[test]
    fn json_shape() {
        let w = GeneratorWord::new(vec![
            Token::Sigma { k: 2, allow_odd: false },
            Token::Rho { r: RatMatrix::identity(2) },
        ]);
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.starts_with(r#"{"tokens":[{"kind":"sigma","k":2},{"kind":"rho","R":"#));
        let back: GeneratorWord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.infer_n(), Some(2));
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let w = GeneratorWord::new(vec![Token::Rho { r: RatMatrix::identity(3) }]);
        assert!(matches!(w.evaluate(2), Err(Error::DimensionMismatch(_))));
    }
}
