use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FieldCtx, FieldElem, FieldError};

/// Exhaustive additivity check up to this subfield order, sampling above.
const EXHAUSTIVE_CHECK_LIMIT: u64 = 256;
const SAMPLED_PAIRS: usize = 1000;

/// The copy of F_q inside F_{q^m}, generated by `beta = alpha^((q^m-1)/(q-1))`.
///
/// Carries both contexts so that polynomials with coefficients in the small
/// field can be evaluated at points of the big field.
#[derive(Debug, Clone)]
pub struct SubfieldEmbedding {
    big: FieldCtx,
    small: FieldCtx,
    beta: FieldElem,
    to_big: Vec<FieldElem>,
    to_small: HashMap<FieldElem, FieldElem>,
}

impl SubfieldEmbedding {
    pub fn new(big: FieldCtx, small: FieldCtx) -> Result<Self, FieldError> {
        let (bp, sp) = (big.prime_power(), small.prime_power());
        if bp.p != sp.p || bp.s % sp.s != 0 {
            return Err(FieldError::NotASubfield {
                big: bp.q,
                small: sp.q,
            });
        }
        let q = small.order();
        let cofactor = ((big.order() - 1) / (q - 1)) as u128;
        let beta = big.alpha_pow(cofactor);

        // beta has order q-1; sending some primitive gamma of F_q to beta
        // and extending multiplicatively is an isomorphism for the right gamma.
        let candidates = small
            .elements()
            .skip(1)
            .filter(|&g| small.multiplicative_order(g).ok() == Some(q - 1));
        for gamma in candidates {
            let mut to_big = vec![FieldElem::ZERO; q as usize];
            let (mut x, mut y) = (FieldElem::ONE, FieldElem::ONE);
            for _ in 0..q - 1 {
                to_big[x.0 as usize] = y;
                x = small.mul(x, gamma);
                y = big.mul(y, beta);
            }
            if is_additive(&big, &small, &to_big) {
                let to_small = to_big
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| (b, FieldElem(i as u64)))
                    .collect();
                return Ok(SubfieldEmbedding {
                    big,
                    small,
                    beta,
                    to_big,
                    to_small,
                });
            }
        }
        Err(FieldError::EmbeddingMismatch)
    }

    pub fn big(&self) -> &FieldCtx {
        &self.big
    }

    pub fn small(&self) -> &FieldCtx {
        &self.small
    }

    pub fn beta(&self) -> FieldElem {
        self.beta
    }

    /// `m` with `|big| = |small|^m`.
    pub fn extension_degree(&self) -> u32 {
        self.big.degree() / self.small.degree()
    }

    pub fn lift(&self, x: FieldElem) -> FieldElem {
        self.to_big[x.0 as usize]
    }

    /// Inverse of [`lift`](Self::lift); `None` outside the image.
    pub fn project(&self, y: FieldElem) -> Option<FieldElem> {
        self.to_small.get(&y).copied()
    }

    pub fn image(&self) -> &[FieldElem] {
        &self.to_big
    }
}

fn is_additive(big: &FieldCtx, small: &FieldCtx, to_big: &[FieldElem]) -> bool {
    let check = |a: u64, b: u64| {
        let lhs = to_big[small.add(FieldElem(a), FieldElem(b)).0 as usize];
        lhs == big.add(to_big[a as usize], to_big[b as usize])
    };
    let q = small.order();
    if q <= EXHAUSTIVE_CHECK_LIMIT {
        (0..q).all(|a| (0..q).all(|b| check(a, b)))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        (0..SAMPLED_PAIRS).all(|_| check(rng.gen_range(0..q), rng.gen_range(0..q)))
    }
}
