//! q-adic digits and weights, the zero-index sets `I`, `I_` and `Ī`, and
//! q-cyclotomic classes modulo `n = q^m - 1`.
//!
//! Multiplication by `q` modulo `n` rotates the m base-q digits, so a class is
//! the set of digit rotations of any member and the q-weight is constant on it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest `|I|` that [`index_set_i`] and [`coset_partition`] will materialize.
pub const MATERIALIZE_LIMIT: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomyError {
    #[error("need q >= 2 and m >= 2, got q={q}, m={m}")]
    BadParams { q: u128, m: u32 },
    #[error("q^m - 1 does not fit in 127 bits for q={q}, m={m}")]
    Overflow { q: u128, m: u32 },
    #[error("{a} is outside [0, {max}]")]
    OutOfRange { a: u128, max: u128 },
    #[error("h={h} must lie in [1, {max}]")]
    BadRange { h: u32, max: u32 },
    #[error("|I| = {size} exceeds the materialization limit")]
    TooLarge { size: u128 },
}

/// `q`, `m` and `n = q^m - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QadicParams {
    q: u128,
    m: u32,
    n: u128,
    /// `q^(m-1)`, the weight of the top digit.
    top: u128,
}

impl QadicParams {
    pub fn new(q: u128, m: u32) -> Result<Self, CyclotomyError> {
        if q < 2 || m < 2 {
            return Err(CyclotomyError::BadParams { q, m });
        }
        let qm = q
            .checked_pow(m)
            .filter(|&v| v <= i128::MAX as u128)
            .ok_or(CyclotomyError::Overflow { q, m })?;
        Ok(QadicParams {
            q,
            m,
            n: qm - 1,
            top: q.pow(m - 1),
        })
    }

    pub fn q(&self) -> u128 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u128 {
        self.n
    }

    /// Base-q digits of `a`, least significant first, always `m` of them.
    pub fn q_digits(&self, a: u128) -> Result<Vec<u128>, CyclotomyError> {
        if a >= self.n {
            return Err(CyclotomyError::OutOfRange { a, max: self.n - 1 });
        }
        let mut out = Vec::with_capacity(self.m as usize);
        let mut x = a;
        for _ in 0..self.m {
            out.push(x % self.q);
            x /= self.q;
        }
        Ok(out)
    }

    /// Hamming q-weight of the least non-negative residue of `x` mod `n`.
    pub fn wt_q(&self, x: i128) -> u32 {
        let mut r = crate::nt::reduce_signed(x, self.n);
        let mut w = 0;
        while r > 0 {
            if r % self.q != 0 {
                w += 1;
            }
            r /= self.q;
        }
        w
    }

    /// `a * q mod n` for `a` in `[0, n-1]`: a left rotation of the digits.
    pub fn times_q(&self, a: u128) -> u128 {
        (a % self.top) * self.q + a / self.top
    }

    /// The q-cyclotomic class of `a`, sorted.
    pub fn class_of(&self, a: u128) -> Vec<u128> {
        let mut class = vec![a];
        let mut b = self.times_q(a);
        while b != a {
            class.push(b);
            b = self.times_q(b);
        }
        class.sort_unstable();
        class
    }

    fn is_class_minimum(&self, a: u128) -> bool {
        let mut b = self.times_q(a);
        while b != a {
            if b < a {
                return false;
            }
            b = self.times_q(b);
        }
        true
    }

    fn check_h(&self, h: u32) -> Result<(), CyclotomyError> {
        if h == 0 || h >= self.m {
            Err(CyclotomyError::BadRange { h, max: self.m - 1 })
        } else {
            Ok(())
        }
    }

    /// Calls `visit` for every `a` in `[1, n-1]` with `1 <= wt_q(a) <= h`,
    /// in no particular order.
    pub fn for_each_low_weight(&self, h: u32, mut visit: impl FnMut(u128)) {
        fn walk(p: &QadicParams, pos: u32, place: u128, left: u32, acc: u128, visit: &mut dyn FnMut(u128)) {
            if pos == p.m {
                if acc != 0 {
                    visit(acc);
                }
                return;
            }
            walk(p, pos + 1, place * p.q, left, acc, visit);
            if left > 0 {
                for d in 1..p.q {
                    walk(p, pos + 1, place * p.q, left - 1, acc + d * place, visit);
                }
            }
        }
        // h <= m-1 keeps the all-(q-1) word n out of range automatically.
        walk(self, 0, 1, h.min(self.m - 1), 0, &mut visit);
    }
}

/// `sum_{i=1}^{h} (q-1)^i C(m,i)`, the size of `I(q,m,h)`.
pub fn low_weight_count(q: u128, m: u32, h: u32) -> u128 {
    let mut binom = 1u128;
    let mut total = 0u128;
    for i in 1..=h.min(m) as u128 {
        binom = binom * (m as u128 - i + 1) / i;
        total += (q - 1).pow(i as u32) * binom;
    }
    total
}

fn check_materializable(params: &QadicParams, h: u32) -> Result<(), CyclotomyError> {
    params.check_h(h)?;
    let size = low_weight_count(params.q, params.m, h);
    if size > MATERIALIZE_LIMIT {
        return Err(CyclotomyError::TooLarge { size });
    }
    Ok(())
}

/// `I(q,m,h)`, sorted ascending.
pub fn index_set_i(params: &QadicParams, h: u32) -> Result<Vec<u128>, CyclotomyError> {
    check_materializable(params, h)?;
    let mut out = Vec::new();
    params.for_each_low_weight(h, |a| out.push(a));
    out.sort_unstable();
    Ok(out)
}

/// `I_(q,m,h) = { n - a : a in I }`, sorted ascending.
pub fn index_set_i_minus(params: &QadicParams, h: u32) -> Result<Vec<u128>, CyclotomyError> {
    let mut out: Vec<u128> = index_set_i(params, h)?
        .into_iter()
        .map(|a| params.n - a)
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// `Ī(q,m,h) = I ∪ I_ ∪ {0}`, sorted ascending without duplicates.
pub fn index_set_i_bar(params: &QadicParams, h: u32) -> Result<Vec<u128>, CyclotomyError> {
    let mut out = index_set_i(params, h)?;
    out.extend(index_set_i_minus(params, h)?);
    out.push(0);
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Partition of `I(q,m,h)` into q-cyclotomic classes with the least element
/// of each class as representative, and the representatives that divide no
/// other representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetPartition {
    pub params: QadicParams,
    pub h: u32,
    pub classes: Vec<Vec<u128>>,
    pub representatives: Vec<u128>,
    pub maximal: Vec<u128>,
}

pub fn coset_partition(params: &QadicParams, h: u32) -> Result<CosetPartition, CyclotomyError> {
    check_materializable(params, h)?;
    let representatives = representatives(params, h)?;
    let classes = representatives.iter().map(|&a| params.class_of(a)).collect();
    let maximal = maximal_elements(&representatives);
    Ok(CosetPartition {
        params: *params,
        h,
        classes,
        representatives,
        maximal,
    })
}

/// `R(q,m,h)` without materializing `I`.
pub fn representatives(params: &QadicParams, h: u32) -> Result<Vec<u128>, CyclotomyError> {
    params.check_h(h)?;
    let mut reps = Vec::new();
    params.for_each_low_weight(h, |a| {
        if params.is_class_minimum(a) {
            reps.push(a);
        }
    });
    reps.sort_unstable();
    Ok(reps)
}

/// Maximal elements of `reps` under divisibility: those dividing no other
/// distinct element. Input must be sorted ascending.
pub fn maximal_elements(reps: &[u128]) -> Vec<u128> {
    reps.iter()
        .enumerate()
        .filter(|&(i, &a)| !reps[i + 1..].iter().any(|&b| b % a == 0))
        .map(|(_, &a)| a)
        .collect()
}

/// `M(q,m,h)`.
pub fn maximal_set(params: &QadicParams, h: u32) -> Result<Vec<u128>, CyclotomyError> {
    Ok(maximal_elements(&representatives(params, h)?))
}

/// Folds an exponent of F_{q^{ml}}^* down to `[1, q^m - 2]` by moving every
/// digit at position `i >= m` to position `i - m`. The result is congruent to
/// `a` modulo `q^m - 1` and its q-weight does not exceed that of `a`.
pub fn fold_exponent(a: u128, params: &QadicParams) -> u128 {
    let qm = params.n + 1;
    let mut x = a;
    while x >= qm {
        // Highest non-zero digit position.
        let mut place = 1u128;
        let mut pos = 0u32;
        while x / place >= params.q {
            place *= params.q;
            pos += 1;
        }
        debug_assert!(pos >= params.m);
        let digit = x / place;
        let down = place / qm;
        x = x - digit * place + digit * down;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(q: u128, m: u32) -> QadicParams {
        QadicParams::new(q, m).unwrap()
    }

    #[test]
    fn digits() {
        let p = params(3, 4);
        assert_eq!(p.q_digits(0).unwrap(), vec![0; 4]);
        assert_eq!(p.q_digits(20).unwrap(), vec![2, 0, 2, 0]);
        // n - 1 = q^m - 2 = (q-2) + (q-1)q + ... + (q-1)q^{m-1}
        assert_eq!(p.q_digits(p.n() - 1).unwrap(), vec![1, 2, 2, 2]);
        assert_eq!(
            p.q_digits(p.n()).unwrap_err(),
            CyclotomyError::OutOfRange { a: 80, max: 79 }
        );
    }

    #[test]
    fn weights() {
        let p = params(3, 4);
        assert_eq!(p.wt_q(20), 2);
        assert_eq!(p.wt_q(-1), 4);
        assert_eq!(p.wt_q(80), 0);
        for a in 0..80 {
            assert_eq!(p.wt_q(p.times_q(a) as i128), p.wt_q(a as i128));
            assert_eq!(p.times_q(a), a * 3 % 80);
        }
    }

    #[test]
    fn index_sets() {
        assert_eq!(index_set_i(&params(2, 3), 1).unwrap(), vec![1, 2, 4]);
        assert_eq!(index_set_i(&params(3, 2), 1).unwrap(), vec![1, 2, 3, 6]);
        assert_eq!(index_set_i_minus(&params(2, 3), 1).unwrap(), vec![3, 5, 6]);
        let i = index_set_i(&params(3, 4), 2).unwrap();
        assert_eq!(i.len(), 2 * 4 + 4 * 6);
        let brute: Vec<u128> = (1..80).filter(|&a| params(3, 4).wt_q(a as i128) <= 2).collect();
        assert_eq!(i, brute);
        assert_eq!(
            index_set_i(&params(3, 4), 4).unwrap_err(),
            CyclotomyError::BadRange { h: 4, max: 3 }
        );
        assert!(index_set_i(&params(3, 4), 0).is_err());
    }

    #[test]
    fn disjoint_negation_for_small_h() {
        for (q, m) in [(2u128, 5u32), (3, 5), (4, 4), (5, 3)] {
            let p = params(q, m);
            for h in 1..=(m - 1) / 2 {
                let i = index_set_i(&p, h).unwrap();
                let im = index_set_i_minus(&p, h).unwrap();
                assert!(i.iter().all(|a| im.binary_search(a).is_err()));
                assert_eq!(index_set_i_bar(&p, h).unwrap().len(), 2 * i.len() + 1);
            }
        }
    }

    #[test]
    fn worked_example_classes() {
        let part = coset_partition(&params(3, 4), 2).unwrap();
        assert_eq!(part.representatives, vec![1, 2, 4, 5, 7, 8, 10, 11, 20]);
        assert_eq!(part.maximal, vec![7, 8, 11, 20]);
        // For m = 6 the pairs at digit distance 2 and 4 are different
        // classes, which adds 19; and 2 + 2*27 = 56 has weight 2 while 58 does not.
        let r6 = representatives(&params(3, 6), 2).unwrap();
        assert_eq!(r6, vec![1, 2, 4, 5, 7, 8, 10, 11, 19, 20, 28, 29, 56]);
        assert_eq!(maximal_set(&params(3, 6), 2).unwrap(), vec![11, 19, 20, 29, 56]);
        assert_eq!(params(3, 6).wt_q(58), 3);
    }

    #[test]
    fn weight_one_representatives() {
        for q in [2u128, 3, 4, 5, 7, 8, 9] {
            for m in 2..6 {
                let reps = representatives(&params(q, m), 1).unwrap();
                assert_eq!(reps, (1..q).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn too_large_is_refused_but_streaming_works() {
        let p = params(25, 23);
        assert!(matches!(index_set_i(&p, 4), Err(CyclotomyError::TooLarge { .. })));
        assert_eq!(representatives(&p, 1).unwrap().len(), 24);
    }

    #[test]
    fn fold_examples() {
        let p = params(3, 2);
        // 3^2 = 9 folds onto 1; 2*27 + 1 = 55 folds to 2*3 + 1 = 7.
        assert_eq!(fold_exponent(9, &p), 1);
        assert_eq!(fold_exponent(55, &p), 7);
        assert_eq!(55 % 8, 7);
    }
}
