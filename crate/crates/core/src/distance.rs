//! Exact minimum distance of small codes and upper bounds from explicit words.
//!
//! Two exact routes:
//! - message enumeration over all `q^k` nonzero messages, used when
//!   `q^k <= max_messages`;
//! - low-weight syndrome search, which tries weights `w = 1, 2, ...` in
//!   turn and stops at the first weight that carries a codeword. By cyclic
//!   and scalar symmetry the search fixes position 0 with coefficient 1.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, CodeInstance, Codeword};
use crate::gf::FieldElem;

pub const DEFAULT_MAX_MESSAGES: u128 = 1 << 24;
pub const DEFAULT_MAX_LOW_WEIGHT_WORDS: u128 = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("q^k = {messages} messages exceeds the budget of {max}")]
    BudgetExceeded { messages: u128, max: u128 },
    #[error("low-weight search needs {words} partial words, budget is {max}")]
    LowWeightBudgetExceeded { words: u128, max: u128 },
    #[error("the code has dimension 0")]
    EmptyCode,
    #[error("no candidate codewords given")]
    EmptyCandidates,
    #[error("candidate {index} is not a codeword")]
    NotAMember { index: usize },
    #[error("budget must be positive")]
    BadBudget,
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_messages: u128,
    /// Stop as soon as a word of at most this weight turns up. The result is
    /// then not marked exact.
    pub max_weight_target: Option<usize>,
    /// Cap on partial words examined by the low-weight search.
    pub max_low_weight_words: u128,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_messages: DEFAULT_MAX_MESSAGES,
            max_weight_target: None,
            max_low_weight_words: DEFAULT_MAX_LOW_WEIGHT_WORDS,
        }
    }
}

impl SearchBudget {
    pub fn with_max_messages(max_messages: u128) -> Self {
        SearchBudget {
            max_messages,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), DistanceError> {
        if self.max_messages == 0 || self.max_low_weight_words == 0 {
            return Err(DistanceError::BadBudget);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Messages,
    LowWeight,
    Candidates,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: usize,
    /// No nonzero codeword is lighter than `value`.
    pub exact: bool,
    pub method: SearchMethod,
    pub witness: Codeword,
}

/// Exact distance, by message enumeration if it fits the budget and by
/// low-weight search otherwise.
pub fn minimum_distance(inst: &CodeInstance, budget: &SearchBudget) -> Result<DistanceResult, DistanceError> {
    match exhaustive_distance(inst, budget) {
        Err(DistanceError::BudgetExceeded { .. }) => low_weight_distance(inst, budget),
        other => other,
    }
}

fn message_count(inst: &CodeInstance) -> Option<u128> {
    (inst.small_field().order() as u128).checked_pow(inst.k() as u32)
}

/// Minimum weight over the codewords `msg(x) g(x)` of every nonzero message.
pub fn exhaustive_distance(inst: &CodeInstance, budget: &SearchBudget) -> Result<DistanceResult, DistanceError> {
    budget.validate()?;
    let k = inst.k();
    if k == 0 {
        return Err(DistanceError::EmptyCode);
    }
    let q = inst.small_field().order();
    let messages = message_count(inst).unwrap_or(u128::MAX);
    if messages > budget.max_messages {
        return Err(DistanceError::BudgetExceeded {
            messages,
            max: budget.max_messages,
        });
    }

    // Fix the top `fixed` message digits per task, enumerate the rest.
    let mut fixed = 0usize;
    while fixed < k && (q as u128).pow(fixed as u32) < 4096 {
        fixed += 1;
    }
    let free = k - fixed;
    let tasks = q.pow(fixed as u32);
    let best = AtomicUsize::new(usize::MAX);
    let target = budget.max_weight_target;

    let found: Option<(usize, Vec<u64>)> = (0..tasks)
        .into_par_iter()
        .filter_map(|t| enumerate_block(inst, free, t, &best, target))
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    let (value, digits) = found.expect("a nonzero message exists when k > 0");
    let small = inst.small_field();
    let msg: Vec<FieldElem> = digits.iter().map(|&d| small.elem(d).expect("digit below q")).collect();
    let witness = inst.encode(&msg)?;
    debug_assert_eq!(witness.weight(), value);
    let stopped_early = target.is_some_and(|t| value <= t);
    Ok(DistanceResult {
        value,
        exact: !stopped_early,
        method: SearchMethod::Messages,
        witness,
    })
}

/// Enumerates the messages whose top digits spell `block` in base q. Returns
/// the lightest word found, if it beats the shared best, as
/// `(weight, message digits)`.
fn enumerate_block(
    inst: &CodeInstance,
    free: usize,
    block: u64,
    best: &AtomicUsize,
    target: Option<usize>,
) -> Option<(usize, Vec<u64>)> {
    let small = inst.small_field();
    let q = small.order();
    let k = inst.k();
    let n = inst.n();
    let g = inst.gen_poly().coeffs();

    let mut digits = vec![0u64; k];
    let mut rest = block;
    for d in digits.iter_mut().skip(free) {
        *d = rest % q;
        rest /= q;
    }

    let mut word = vec![FieldElem::ZERO; n];
    let add_row = |word: &mut [FieldElem], j: usize, c: FieldElem| -> isize {
        let mut delta = 0isize;
        for (i, &gi) in g.iter().enumerate() {
            let old = word[i + j];
            let new = small.add(old, small.mul(c, gi));
            delta += (!new.is_zero()) as isize - (!old.is_zero()) as isize;
            word[i + j] = new;
        }
        delta
    };
    let mut weight = 0isize;
    for (j, &d) in digits.iter().enumerate().skip(free) {
        if d != 0 {
            let c = small.elem(d).expect("digit below q");
            weight += add_row(&mut word, j, c);
        }
    }

    // delta[d] moves digit value d to d + 1 (mod q in index order).
    let step: Vec<FieldElem> = (0..q)
        .map(|d| {
            let cur = small.elem(d).expect("digit below q");
            let next = small.elem((d + 1) % q).expect("digit below q");
            small.sub(next, cur)
        })
        .collect();

    let mut local: Option<(usize, Vec<u64>)> = None;
    loop {
        if weight > 0 {
            let w = weight as usize;
            if local.as_ref().is_none_or(|(lw, _)| w < *lw) && w <= best.load(Ordering::Relaxed) {
                local = Some((w, digits.clone()));
                best.fetch_min(w, Ordering::Relaxed);
            }
        }
        if target.is_some_and(|t| best.load(Ordering::Relaxed) <= t) {
            break;
        }
        // Odometer over the free digits.
        let mut j = 0;
        loop {
            if j == free {
                return local;
            }
            let d = digits[j];
            weight += add_row(&mut word, j, step[d as usize]);
            digits[j] = (d + 1) % q;
            if digits[j] != 0 {
                break;
            }
            j += 1;
        }
    }
    local
}

/// Exact distance by trying weights in increasing order. A word of weight `w`
/// is `x^0 + sum_{i=1}^{w-1} c_i x^{p_i}` up to shift and scaling; the
/// first `w - 2` terms are enumerated and the last one is found by syndrome
/// lookup.
pub fn low_weight_distance(inst: &CodeInstance, budget: &SearchBudget) -> Result<DistanceResult, DistanceError> {
    budget.validate()?;
    if inst.k() == 0 {
        return Err(DistanceError::EmptyCode);
    }
    let n = inst.n();
    let small = inst.small_field();
    let big = inst.big_field();
    let emb = inst.embedding();
    let reps = inst.zero_representatives();
    let nonzero: Vec<FieldElem> = small.elements().filter(|c| !c.is_zero()).collect();

    // term[p][c] = syndrome of c x^p, one big-field value per zero representative.
    let term_syndrome = |p: usize, c: FieldElem| -> Vec<FieldElem> {
        let lc = emb.lift(c);
        reps.iter()
            .map(|&a| big.mul(lc, big.alpha_pow((a as u128 * p as u128) % n as u128)))
            .collect()
    };
    let mut lookup: HashMap<Vec<FieldElem>, Vec<(usize, FieldElem)>> = HashMap::new();
    for p in 1..n {
        for &c in &nonzero {
            lookup.entry(term_syndrome(p, c)).or_default().push((p, c));
        }
    }
    let one = term_syndrome(0, FieldElem::ONE);
    if one.iter().all(|s| s.is_zero()) {
        return finish(inst, vec![(0, FieldElem::ONE)]);
    }

    let terms: Vec<Vec<Vec<FieldElem>>> = (0..n)
        .map(|p| nonzero.iter().map(|&c| term_syndrome(p, c)).collect())
        .collect();
    let add = |a: &[FieldElem], b: &[FieldElem]| -> Vec<FieldElem> {
        a.iter().zip(b).map(|(&x, &y)| big.add(x, y)).collect()
    };

    let mut examined: u128 = 0;
    for w in 2..=n {
        // Partial words: position 0 plus w-2 further terms.
        let middle = w - 2;
        let count = binomial(n as u128 - 1, middle as u128).saturating_mul((nonzero.len() as u128).saturating_pow(middle as u32));
        examined = examined.saturating_add(count);
        if examined > budget.max_low_weight_words {
            return Err(DistanceError::LowWeightBudgetExceeded {
                words: examined,
                max: budget.max_low_weight_words,
            });
        }
        let firsts: Vec<usize> = if middle == 0 { vec![0] } else { (1..n).collect() };
        let hit = firsts.into_par_iter().find_map_first(|first| {
            let mut prefix = vec![(0usize, FieldElem::ONE)];
            let syn = one.clone();
            if middle == 0 {
                return complete(&lookup, &syn, 0, &prefix, big);
            }
            let mut out = None;
            for (ci, &c) in nonzero.iter().enumerate() {
                prefix.push((first, c));
                let s = add(&syn, &terms[first][ci]);
                out = extend(&terms, &nonzero, &lookup, &mut prefix, &s, first, middle - 1, n, &add, big);
                prefix.pop();
                if out.is_some() {
                    break;
                }
            }
            out
        });
        if let Some(support) = hit {
            return finish(inst, support);
        }
    }
    unreachable!("the all-ones class or the generator itself is a codeword");
}

type Term = (usize, FieldElem);

#[allow(clippy::too_many_arguments)]
fn extend(
    terms: &[Vec<Vec<FieldElem>>],
    nonzero: &[FieldElem],
    lookup: &HashMap<Vec<FieldElem>, Vec<Term>>,
    prefix: &mut Vec<Term>,
    syn: &[FieldElem],
    last: usize,
    remaining: usize,
    n: usize,
    add: &dyn Fn(&[FieldElem], &[FieldElem]) -> Vec<FieldElem>,
    big: &crate::gf::FieldCtx,
) -> Option<Vec<Term>> {
    if remaining == 0 {
        return complete(lookup, syn, last, prefix, big);
    }
    for p in last + 1..n {
        for (ci, &c) in nonzero.iter().enumerate() {
            prefix.push((p, c));
            let s = add(syn, &terms[p][ci]);
            let out = extend(terms, nonzero, lookup, prefix, &s, p, remaining - 1, n, add, big);
            prefix.pop();
            if out.is_some() {
                return out;
            }
        }
    }
    None
}

/// Looks up a single term `c x^p` with `p > last` cancelling `syn`.
fn complete(
    lookup: &HashMap<Vec<FieldElem>, Vec<Term>>,
    syn: &[FieldElem],
    last: usize,
    prefix: &[Term],
    big: &crate::gf::FieldCtx,
) -> Option<Vec<Term>> {
    let neg: Vec<FieldElem> = syn.iter().map(|&s| big.neg(s)).collect();
    let &(p, c) = lookup.get(&neg)?.iter().find(|(p, _)| *p > last)?;
    let mut out = prefix.to_vec();
    out.push((p, c));
    Some(out)
}

fn finish(inst: &CodeInstance, support: Vec<Term>) -> Result<DistanceResult, DistanceError> {
    let mut coeffs = vec![FieldElem::ZERO; inst.n()];
    for (p, c) in support {
        coeffs[p] = c;
    }
    let witness = Codeword::new(coeffs);
    if !inst.is_member(witness.coeffs())? {
        return Err(CodeError::InvariantViolated("low-weight witness fails membership".into()).into());
    }
    Ok(DistanceResult {
        value: witness.weight(),
        exact: true,
        method: SearchMethod::LowWeight,
        witness,
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// The lightest of the given codewords, as an upper bound on the distance.
pub fn witness_upper_bound(inst: &CodeInstance, candidates: &[Codeword]) -> Result<DistanceResult, DistanceError> {
    if candidates.is_empty() {
        return Err(DistanceError::EmptyCandidates);
    }
    for (index, c) in candidates.iter().enumerate() {
        if c.weight() == 0 || !inst.is_member(c.coeffs())? {
            return Err(DistanceError::NotAMember { index });
        }
    }
    let best = candidates
        .iter()
        .min_by_key(|c| c.weight())
        .expect("non-empty");
    Ok(DistanceResult {
        value: best.weight(),
        exact: false,
        method: SearchMethod::Candidates,
        witness: best.clone(),
    })
}
