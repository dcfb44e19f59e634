//! Construction of `Ω(q,m,h)` and `Ω̄(q,m,h)`: generator polynomials,
//! dimensions, encoding, membership, and the quotient codewords
//! `(x^N - 1)/(x^F - 1)` that certify upper bounds on the distance.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomy::{self, CyclotomyError, QadicParams};
use crate::gf::{FieldCtx, FieldElem, FieldError, FieldOptions, Poly, PrimePower, SubfieldEmbedding};

/// Default bound on the code length for full construction.
pub const DEFAULT_MAX_N: u64 = 1 << 20;

/// Lengths up to this get the root set checked at every exponent.
const EXHAUSTIVE_ROOT_CHECK: u64 = 1 << 16;
const SAMPLED_ROOT_CHECKS: usize = 64;

/// Longest word [`quotient_codeword`] will materialize.
pub const MAX_WORD_LENGTH: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    InvalidSpec(String),
    #[error("code length {n} exceeds the construction bound {max}")]
    TooLarge { n: u128, max: u128 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cyclotomy(#[from] CyclotomyError),
    #[error("minimal polynomial of alpha^{0} has a coefficient outside F_q")]
    CoefficientNotInSubfield(u128),
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{e} does not divide {n}")]
    NotADivisor { e: u128, n: u128 },
    #[error("{e} divides {a}, an element of the maximal representative set")]
    ConditionStarFails { e: u128, a: u128 },
    #[error("(x - 1)(x^N - 1)/(x^F - 1) vanishes for F = 1")]
    DegenerateCodeword,
    #[error("construction invariant violated: {0}")]
    InvariantViolated(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `Ω(q,m,h)`: zeros `alpha^a`, `a in I(q,m,h)`.
    Omega,
    /// `Ω̄(q,m,h)`: zeros `1`, `alpha^a` and `alpha^-a`, `a in I(q,m,h)`.
    OmegaBar,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Omega => "omega",
            Variant::OmegaBar => "omega_bar",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "omega" => Ok(Variant::Omega),
            "omega_bar" => Ok(Variant::OmegaBar),
            other => Err(format!("unknown variant {other:?} (expected omega or omega_bar)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub q: u64,
    pub m: u32,
    pub h: u32,
    pub variant: Variant,
}

impl CodeSpec {
    pub fn new(q: u64, m: u32, h: u32, variant: Variant) -> Result<Self, CodeError> {
        PrimePower::from_order(q).map_err(|e| CodeError::InvalidSpec(e.to_string()))?;
        if m < 2 {
            return Err(CodeError::InvalidSpec(format!("m must be at least 2, got {m}")));
        }
        if h == 0 || h >= m {
            return Err(CodeError::InvalidSpec(format!("h must lie in [1, {}], got {h}", m - 1)));
        }
        QadicParams::new(q as u128, m)?;
        Ok(CodeSpec { q, m, h, variant })
    }

    pub fn omega(q: u64, m: u32, h: u32) -> Result<Self, CodeError> {
        Self::new(q, m, h, Variant::Omega)
    }

    pub fn omega_bar(q: u64, m: u32, h: u32) -> Result<Self, CodeError> {
        Self::new(q, m, h, Variant::OmegaBar)
    }

    pub fn params(&self) -> QadicParams {
        QadicParams::new(self.q as u128, self.m).expect("validated on construction")
    }

    pub fn n(&self) -> u128 {
        self.params().n()
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        CodeSpec { variant, ..*self }
    }

    /// `true` when `I` and `I_` are disjoint, i.e. `h <= floor((m-1)/2)`.
    pub fn negation_disjoint(&self) -> bool {
        self.h <= (self.m - 1) / 2
    }

    /// Dimension predicted by counting low-weight exponents, where a closed
    /// form exists: always for `Ω`, and for `Ω̄` when `I ∩ I_` is empty.
    pub fn dimension_formula(&self) -> Option<u128> {
        let count = cyclotomy::low_weight_count(self.q as u128, self.m, self.h);
        let n = self.n();
        match self.variant {
            Variant::Omega => Some(n - count),
            Variant::OmegaBar if self.negation_disjoint() => Some(n - 1 - 2 * count),
            Variant::OmegaBar => None,
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.variant {
            Variant::Omega => "Ω",
            Variant::OmegaBar => "Ω̄",
        };
        write!(f, "{name}({},{},{})", self.q, self.m, self.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub max_n: u64,
    pub field: FieldOptions,
    /// Seed for the sampled root checks on long codes.
    pub seed: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_n: DEFAULT_MAX_N,
            field: FieldOptions::default(),
            seed: 0,
        }
    }
}

/// A word of length `n` over F_q with its Hamming weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Codeword {
    coeffs: Vec<FieldElem>,
    weight: usize,
}

impl Codeword {
    pub fn new(coeffs: Vec<FieldElem>) -> Self {
        let weight = coeffs.iter().filter(|c| !c.is_zero()).count();
        Codeword { coeffs, weight }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    pub fn as_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// Multiplication by `x^s` modulo `x^n - 1`.
    pub fn cyclic_shift(&self, s: usize) -> Codeword {
        let n = self.coeffs.len();
        let mut out = vec![FieldElem::ZERO; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[(i + s) % n] = c;
        }
        Codeword { coeffs: out, weight: self.weight }
    }
}

/// A realized code: generator polynomial, zeros and dimension, together with
/// the field pair the zeros live in.
#[derive(Debug, Clone)]
pub struct CodeInstance {
    spec: CodeSpec,
    n: usize,
    zero_exponents: Vec<u64>,
    /// One exponent per cyclotomic class of zeros; vanishing there is membership.
    zero_reps: Vec<u64>,
    gen_poly: Poly,
    k: usize,
    emb: SubfieldEmbedding,
}

/// `prod_{i in class(a)} (x - alpha^i)`, mapped into F_q.
pub fn minimal_poly(a: u128, params: &QadicParams, emb: &SubfieldEmbedding) -> Result<Poly, CodeError> {
    let a = a % params.n();
    let big = emb.big();
    let mut acc = Poly::one();
    for i in params.class_of(a) {
        acc = acc.mul(&Poly::linear(big.alpha_pow(i), big), big);
    }
    let coeffs = acc
        .coeffs()
        .iter()
        .map(|&c| emb.project(c).ok_or(CodeError::CoefficientNotInSubfield(a)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(coeffs))
}

/// Builds the field pair (F_q, F_{q^m}) for a spec.
pub fn field_pair(spec: &CodeSpec, field: &FieldOptions) -> Result<SubfieldEmbedding, CodeError> {
    let pp = PrimePower::from_order(spec.q)?;
    let big = FieldCtx::build_with(pp.p, pp.s * spec.m, field)?;
    let small = FieldCtx::build_with(
        pp.p,
        pp.s,
        &FieldOptions {
            table_threshold: field.table_threshold,
            primitive_rank: 0,
        },
    )?;
    Ok(SubfieldEmbedding::new(big, small)?)
}

pub fn build_code(spec: &CodeSpec) -> Result<CodeInstance, CodeError> {
    build_code_with(spec, &BuildOptions::default())
}

pub fn build_code_with(spec: &CodeSpec, opts: &BuildOptions) -> Result<CodeInstance, CodeError> {
    let spec = CodeSpec::new(spec.q, spec.m, spec.h, spec.variant)?;
    let params = spec.params();
    let n = params.n();
    if n > opts.max_n as u128 {
        return Err(CodeError::TooLarge {
            n,
            max: opts.max_n as u128,
        });
    }
    let emb = field_pair(&spec, &opts.field)?;
    let small = emb.small();
    let reps = cyclotomy::representatives(&params, spec.h)?;
    let g = reps.iter().try_fold(Poly::one(), |acc, &a| {
        Ok::<_, CodeError>(acc.mul(&minimal_poly(a, &params, &emb)?, small))
    })?;

    let (gen_poly, zero_exponents, mut zero_reps) = match spec.variant {
        Variant::Omega => (g, cyclotomy::index_set_i(&params, spec.h)?, reps.clone()),
        Variant::OmegaBar => {
            let g_hat = g.reciprocal(small)?;
            let gen = Poly::linear(FieldElem::ONE, small).mul(&g.lcm(&g_hat, small)?, small);
            let mut zr: Vec<u128> = reps.iter().flat_map(|&a| [a, n - a]).collect();
            zr.push(0);
            (gen, cyclotomy::index_set_i_bar(&params, spec.h)?, zr)
        }
    };
    zero_reps.sort_unstable();
    zero_reps.dedup();

    let n = n as usize;
    let k = n - gen_poly.degree().expect("generator is non-zero");
    let inst = CodeInstance {
        spec,
        n,
        zero_exponents: zero_exponents.into_iter().map(|a| a as u64).collect(),
        zero_reps: zero_reps.into_iter().map(|a| a as u64).collect(),
        gen_poly,
        k,
        emb,
    };
    inst.check_invariants(opts.seed)?;
    Ok(inst)
}

impl CodeInstance {
    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gen_poly(&self) -> &Poly {
        &self.gen_poly
    }

    pub fn zero_exponents(&self) -> &[u64] {
        &self.zero_exponents
    }

    pub fn zero_representatives(&self) -> &[u64] {
        &self.zero_reps
    }

    pub fn embedding(&self) -> &SubfieldEmbedding {
        &self.emb
    }

    pub fn small_field(&self) -> &FieldCtx {
        self.emb.small()
    }

    pub fn big_field(&self) -> &FieldCtx {
        self.emb.big()
    }

    fn is_zero_exponent(&self, a: u64) -> bool {
        self.zero_exponents.binary_search(&a).is_ok()
    }

    fn check_invariants(&self, seed: u64) -> Result<(), CodeError> {
        let small = self.small_field();
        let violated = |msg: String| Err(CodeError::InvariantViolated(msg));
        let (_, rem) = Poly::x_pow_minus_one(self.n, small).divmod(&self.gen_poly, small)?;
        if !rem.is_zero() {
            return violated(format!("generator of {} does not divide x^n - 1", self.spec));
        }
        if self.n - self.k != self.zero_exponents.len() {
            return violated(format!(
                "deg g = {} but there are {} zeros",
                self.n - self.k,
                self.zero_exponents.len()
            ));
        }
        if let Some(k) = self.spec.dimension_formula() {
            if k != self.k as u128 {
                return violated(format!("dimension {} disagrees with the count formula {k}", self.k));
            }
        }
        let big = self.big_field();
        let check = |a: u64| {
            let vanishes = self.gen_poly.eval_lifted(big.alpha_pow(a as u128), &self.emb).is_zero();
            vanishes == self.is_zero_exponent(a)
        };
        let bad = if (self.n as u64) <= EXHAUSTIVE_ROOT_CHECK {
            (0..self.n as u64).into_par_iter().find_any(|&a| !check(a))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sampled: Vec<u64> = (0..SAMPLED_ROOT_CHECKS)
                .map(|_| rng.gen_range(0..self.n as u64))
                .collect();
            self.zero_exponents
                .par_iter()
                .copied()
                .chain(sampled)
                .find_any(|&a| !check(a))
        };
        match bad {
            Some(a) => violated(format!("root set mismatch at alpha^{a}")),
            None => Ok(()),
        }
    }

    fn check_length(&self, got: usize, expected: usize) -> Result<(), CodeError> {
        if got == expected {
            Ok(())
        } else {
            Err(CodeError::LengthMismatch { expected, got })
        }
    }

    /// Non-systematic encoding `msg(x) * g(x)`.
    pub fn encode(&self, msg: &[FieldElem]) -> Result<Codeword, CodeError> {
        self.check_length(msg.len(), self.k)?;
        let small = self.small_field();
        let prod = Poly::new(msg.to_vec()).mul(&self.gen_poly, small);
        let mut coeffs = prod.coeffs().to_vec();
        coeffs.resize(self.n, FieldElem::ZERO);
        Ok(Codeword::new(coeffs))
    }

    /// Membership by evaluation at one zero per cyclotomic class.
    pub fn is_member(&self, word: &[FieldElem]) -> Result<bool, CodeError> {
        self.check_length(word.len(), self.n)?;
        let poly = Poly::new(word.to_vec());
        let big = self.big_field();
        Ok(self
            .zero_reps
            .iter()
            .all(|&a| poly.eval_lifted(big.alpha_pow(a as u128), &self.emb).is_zero()))
    }

    /// Membership by division: `g(x) | word(x)`.
    pub fn is_member_by_division(&self, word: &[FieldElem]) -> Result<bool, CodeError> {
        self.check_length(word.len(), self.n)?;
        Ok(Poly::new(word.to_vec())
            .rem(&self.gen_poly, self.small_field())?
            .is_zero())
    }

    pub fn to_document(&self) -> CodeDocument {
        CodeDocument {
            q: self.spec.q,
            m: self.spec.m,
            h: self.spec.h,
            variant: self.spec.variant,
            n: self.n as u64,
            k: self.k as u64,
            gen_poly: self.gen_poly.coeffs().iter().map(|c| c.index()).collect(),
            zero_exponents: self.zero_exponents.clone(),
        }
    }
}

/// Serialized form of a [`CodeInstance`]. `gen_poly` lists coefficients
/// lowest degree first as F_q element indices: index `i` is the element whose
/// polynomial-basis coefficients are the base-p digits of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub q: u64,
    pub m: u32,
    pub h: u32,
    pub variant: Variant,
    pub n: u64,
    pub k: u64,
    pub gen_poly: Vec<u64>,
    pub zero_exponents: Vec<u64>,
}

/// `c(x) = (x^N - 1)/(x^F - 1)` in `Ω(q, m*l, h)`, or `(x - 1) c(x)` in `Ω̄`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientCodeword {
    pub target: CodeSpec,
    /// The divisor of `q^m - 1` the word is built from.
    pub e: u128,
    /// `F = N / e` with `N = q^{ml} - 1`.
    pub stride: u128,
    pub word: Codeword,
}

/// Builds the weight-`e` word `sum_{j<e} x^{jF}` of length `N = q^{ml} - 1`
/// (or its product with `x - 1` for [`Variant::OmegaBar`]) after checking that
/// `e | q^m - 1` and that `e` divides no element of `M(q,m,h)`.
pub fn quotient_codeword(
    q: u64,
    m: u32,
    h: u32,
    e: u128,
    l: u32,
    variant: Variant,
) -> Result<QuotientCodeword, CodeError> {
    if l == 0 {
        return Err(CodeError::InvalidSpec("l must be at least 1".into()));
    }
    let base = CodeSpec::new(q, m, h, variant)?;
    let n = base.n();
    if e < 2 || n % e != 0 {
        return Err(CodeError::NotADivisor { e, n });
    }
    if e < n {
        let maximal = cyclotomy::maximal_set(&base.params(), h)?;
        if let Some(&a) = maximal.iter().find(|&&a| a % e == 0) {
            return Err(CodeError::ConditionStarFails { e, a });
        }
    }
    let target = CodeSpec::new(q, m * l, h, variant)?;
    let big_n = target.n();
    if big_n > MAX_WORD_LENGTH {
        return Err(CodeError::TooLarge {
            n: big_n,
            max: MAX_WORD_LENGTH,
        });
    }
    let stride = big_n / e;
    let len = big_n as usize;
    let mut coeffs = vec![FieldElem::ZERO; len];
    match variant {
        Variant::Omega => {
            for j in 0..e as usize {
                coeffs[j * stride as usize] = FieldElem::ONE;
            }
        }
        Variant::OmegaBar => {
            if stride == 1 {
                return Err(CodeError::DegenerateCodeword);
            }
            let small = FieldCtx::of_order(q)?;
            let minus_one = small.neg(FieldElem::ONE);
            for j in 0..e as usize {
                let at = j * stride as usize;
                coeffs[at] = minus_one;
                coeffs[at + 1] = FieldElem::ONE;
            }
        }
    }
    Ok(QuotientCodeword {
        target,
        e,
        stride,
        word: Codeword::new(coeffs),
    })
}

/// Distance of the code extended by an overall parity coordinate.
pub fn extended_distance(d: u64) -> u64 {
    d + 1
}
