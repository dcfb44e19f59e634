//! Lower and upper bounds on `d(q,m,h)` and `d̄(q,m,h)` with the rule or
//! witness behind each value.
//!
//! Every upper bound below `2q^h - 1` comes from an explicit codeword: if a
//! divisor `e` of `q^m - 1` divides no exponent in `I(q,m,h)`, then
//! `(x^N - 1)/(x^F - 1)` with `N = q^{ml} - 1 = eF` is a weight-`e` word of
//! `Ω(q,ml,h)` and its product with `x - 1` a word of weight `2e` in `Ω̄`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, CodeSpec, Variant};
use crate::cyclotomy::{self, CyclotomyError, QadicParams, MATERIALIZE_LIMIT};
use crate::golden;
use crate::gf::PrimePower;
use crate::nt::{self, NtError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Nt(#[from] NtError),
    #[error(transparent)]
    Cyclotomy(#[from] CyclotomyError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("{e} does not divide n = {n}")]
    NotADivisor { e: u128, n: u128 },
    #[error("divisor {e} outside [2, n-1] for n = {n}")]
    RangeError { e: u128, n: u128 },
    #[error("weight identity failed: wt_q({t} * {e}) = {weight}, expected {expected}")]
    CertificateFailed {
        t: u128,
        e: u128,
        weight: u32,
        expected: u32,
    },
    #[error("q = {0} must be a prime power >= {1}")]
    BadField(u64, u64),
}

/// The rule or witness behind a bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// `(q^{h+1}-1)/(q-1) <= d`.
    WeightLower,
    /// `d <= 2q^h - 1`.
    WeightUpper,
    /// `2(q^{h+1}-1)/(q-1) <= d̄` for `h <= floor((m+1)/2)`.
    BarredWeightLower,
    /// No structural lower bound applies; only `d >= 1`.
    Trivial,
    /// `d(2,m,h) = 2^{h+1} - 1`.
    BinaryExact,
    /// `d(q,m,m-1) = (q^m-1)/(q-1)`.
    TopWeightExact,
    /// `d(3,m,1) = 4`.
    TernaryWeightOneExact,
    /// `q >= 3` and `(h+1) | m`: the lower bound is met by a quotient codeword.
    DivisorExact,
    /// `d̄(2,m,1) = 6` for `m >= 4`.
    BinaryBarredExact,
    /// `d̄(3,m,1) <= 10` for odd `m >= 3`.
    TernaryBarredUpper,
    /// Quotient codeword from a divisor `e` of `q^{base_m} - 1`, `base_m | m`.
    QuotientCodeword { e: u128, base_m: u32 },
    /// Odd order `l` of `-a` modulo `e = q + a`, with `m / l` odd.
    OddOrder { a: u64, l: u64, e: u64 },
    /// A larger distance would violate the sphere-packing bound.
    SpherePacking,
    /// Minimum distance found by complete search.
    Exhaustive,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::WeightLower => write!(f, "lower weight bound (q^(h+1)-1)/(q-1)"),
            Source::WeightUpper => write!(f, "upper weight bound 2q^h-1"),
            Source::BarredWeightLower => write!(f, "barred lower bound 2(q^(h+1)-1)/(q-1)"),
            Source::Trivial => write!(f, "trivial bound (no structural lower bound applies)"),
            Source::BinaryExact => write!(f, "binary case d = 2^(h+1)-1"),
            Source::TopWeightExact => write!(f, "h = m-1 case d = (q^m-1)/(q-1)"),
            Source::TernaryWeightOneExact => write!(f, "ternary h = 1 case d = 4"),
            Source::DivisorExact => write!(f, "(h+1) | m: lower bound attained"),
            Source::BinaryBarredExact => write!(f, "binary barred h = 1, m >= 4: d̄ = 6"),
            Source::TernaryBarredUpper => write!(f, "ternary barred h = 1, odd m: d̄ <= 10"),
            Source::QuotientCodeword { e, base_m } => {
                write!(f, "quotient codeword e = {e} | q^{base_m}-1")
            }
            Source::OddOrder { a, l, e } => write!(f, "odd order l = O_{e}(-{a}) = {l}"),
            Source::SpherePacking => write!(f, "sphere-packing bound"),
            Source::Exhaustive => write!(f, "exhaustive search"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: u128,
    pub source: Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

/// One certificate that contributed a bound, whether or not it is the tightest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: BoundKind,
    pub value: u128,
    pub source: Source,
}

/// Distance bounds for one code. `lower <= upper`, and `exact`, when known,
/// lies in between.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub spec: CodeSpec,
    pub lower: Bound,
    pub upper: Option<Bound>,
    pub exact: Option<Bound>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(spec: CodeSpec, lower: Bound) -> Self {
        let witnesses = vec![Witness {
            kind: BoundKind::Lower,
            value: lower.value,
            source: lower.source.clone(),
        }];
        BoundReport {
            spec,
            lower,
            upper: None,
            exact: None,
            witnesses,
            notes: Vec::new(),
        }
    }

    pub fn add_lower(&mut self, value: u128, source: Source) {
        self.witnesses.push(Witness {
            kind: BoundKind::Lower,
            value,
            source: source.clone(),
        });
        if value > self.lower.value {
            self.lower = Bound { value, source };
        }
    }

    pub fn add_upper(&mut self, value: u128, source: Source) {
        self.witnesses.push(Witness {
            kind: BoundKind::Upper,
            value,
            source: source.clone(),
        });
        if self.upper.as_ref().is_none_or(|u| value < u.value) {
            self.upper = Some(Bound { value, source });
        }
    }

    /// Records an exact value, which also tightens both sides.
    pub fn add_exact(&mut self, value: u128, source: Source) {
        self.witnesses.push(Witness {
            kind: BoundKind::Exact,
            value,
            source: source.clone(),
        });
        if self.exact.is_none() {
            self.exact = Some(Bound {
                value,
                source: source.clone(),
            });
        }
        if value > self.lower.value {
            self.lower = Bound {
                value,
                source: source.clone(),
            };
        }
        if self.upper.as_ref().is_none_or(|u| value < u.value) {
            self.upper = Some(Bound { value, source });
        }
    }

    /// `lower <= exact <= upper` across every recorded witness.
    pub fn is_consistent(&self) -> bool {
        let lo = self.lower.value;
        let hi = self.upper.as_ref().map_or(u128::MAX, |u| u.value);
        lo <= hi
            && self.witnesses.iter().all(|w| match w.kind {
                BoundKind::Lower => w.value <= hi,
                BoundKind::Upper => w.value >= lo,
                BoundKind::Exact => w.value >= lo && w.value <= hi,
            })
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.spec.variant {
            Variant::Omega => "d",
            Variant::OmegaBar => "d̄",
        };
        let (q, m, h) = (self.spec.q, self.spec.m, self.spec.h);
        match (&self.exact, &self.upper) {
            (Some(x), _) => writeln!(f, "{sym}({q},{m},{h}) = {}  [{}]", x.value, x.source)?,
            (None, Some(u)) => writeln!(
                f,
                "{} <= {sym}({q},{m},{h}) <= {}",
                self.lower.value, u.value
            )?,
            (None, None) => writeln!(f, "{sym}({q},{m},{h}) >= {}", self.lower.value)?,
        }
        writeln!(f, "  lower {}  [{}]", self.lower.value, self.lower.source)?;
        if let Some(u) = &self.upper {
            writeln!(f, "  upper {}  [{}]", u.value, u.source)?;
        }
        for w in &self.witnesses {
            let kind = match w.kind {
                BoundKind::Lower => ">=",
                BoundKind::Upper => "<=",
                BoundKind::Exact => "==",
            };
            writeln!(f, "  witness {sym} {kind} {}  [{}]", w.value, w.source)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// `(q^{h+1} - 1)/(q - 1)`.
pub fn weight_lower_bound(q: u128, h: u32) -> u128 {
    (q.pow(h + 1) - 1) / (q - 1)
}

/// Bounds that follow from the parameters alone.
pub fn generic_bounds(spec: &CodeSpec) -> BoundReport {
    let (q, m, h) = (spec.q as u128, spec.m, spec.h);
    let base = weight_lower_bound(q, h);
    match spec.variant {
        Variant::Omega => {
            let mut r = BoundReport::new(
                *spec,
                Bound {
                    value: base,
                    source: Source::WeightLower,
                },
            );
            r.add_upper(2 * q.pow(h) - 1, Source::WeightUpper);
            if q == 2 {
                r.add_exact((1 << (h + 1)) - 1, Source::BinaryExact);
            }
            if h == m - 1 {
                r.add_exact(weight_lower_bound(q, m - 1), Source::TopWeightExact);
            }
            if q == 3 && h == 1 {
                r.add_exact(4, Source::TernaryWeightOneExact);
            }
            if q >= 3 && m % (h + 1) == 0 {
                r.add_exact(base, Source::DivisorExact);
            }
            r
        }
        Variant::OmegaBar => {
            let mut r = if h <= (m + 1) / 2 {
                BoundReport::new(
                    *spec,
                    Bound {
                        value: 2 * base,
                        source: Source::BarredWeightLower,
                    },
                )
            } else {
                let mut r = BoundReport::new(
                    *spec,
                    Bound {
                        value: 1,
                        source: Source::Trivial,
                    },
                );
                r.notes.push(format!(
                    "h = {h} > floor((m+1)/2) = {}: barred lower bound does not apply",
                    (m + 1) / 2
                ));
                r
            };
            if q >= 3 && m % (h + 1) == 0 {
                r.add_exact(2 * base, Source::DivisorExact);
            }
            if q == 2 && h == 1 && m >= 4 {
                r.add_exact(6, Source::BinaryBarredExact);
            }
            if q == 3 && h == 1 && m % 2 == 1 && m >= 3 {
                r.add_upper(10, Source::TernaryBarredUpper);
            }
            r
        }
    }
}

fn check_divisor(e: u128, n: u128) -> Result<(), BoundsError> {
    if e < 2 || e >= n {
        return Err(BoundsError::RangeError { e, n });
    }
    if n % e != 0 {
        return Err(BoundsError::NotADivisor { e, n });
    }
    Ok(())
}

/// `e` divides no element of `set`.
pub fn divides_none(e: u128, set: &[u128]) -> bool {
    set.iter().all(|a| a % e != 0)
}

/// Condition (*) for a divisor `e` of `n = q^m - 1`: no exponent in
/// `I(q,m,h)` is a multiple of `e`. Decided on the maximal set `M(q,m,h)`.
pub fn condition_star(q: u64, m: u32, h: u32, e: u128) -> Result<bool, BoundsError> {
    let params = QadicParams::new(q as u128, m)?;
    check_divisor(e, params.n())?;
    Ok(divides_none(e, &cyclotomy::maximal_set(&params, h)?))
}

/// The same predicate decided on the full index set `I(q,m,h)`.
pub fn condition_star_full(q: u64, m: u32, h: u32, e: u128) -> Result<bool, BoundsError> {
    let params = QadicParams::new(q as u128, m)?;
    check_divisor(e, params.n())?;
    Ok(divides_none(e, &cyclotomy::index_set_i(&params, h)?))
}

/// Divisors `e` of `q^m - 1` in `[2, min(max_e, n-1)]` satisfying
/// condition (*), ascending.
pub fn divisor_search(q: u64, m: u32, h: u32, max_e: Option<u128>) -> Result<Vec<u128>, BoundsError> {
    let params = QadicParams::new(q as u128, m)?;
    let n = params.n();
    let maximal = cyclotomy::maximal_set(&params, h)?;
    let cap = max_e.unwrap_or(u128::MAX).min(n - 1);
    Ok(nt::factorize(n)?
        .divisors()
        .into_iter()
        .filter(|&e| e >= 2 && e <= cap && divides_none(e, &maximal))
        .collect())
}

/// The divisor `e = (q^{h+1}-1)/(q-1)` of `q^{h+1} - 1` with the weight
/// identities showing it satisfies condition (*).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorCertificate {
    pub q: u64,
    pub h: u32,
    pub m: u32,
    pub e: u128,
    /// `(t, wt_q(t e))` for `1 <= t <= q-2`; every weight is `h + 1`.
    pub weights: Vec<(u128, u32)>,
}

pub fn divisor_certificate(q: u64, h: u32) -> Result<DivisorCertificate, BoundsError> {
    if q < 3 || !PrimePower::is_prime_power(q) {
        return Err(BoundsError::BadField(q, 3));
    }
    let m = h + 1;
    let params = QadicParams::new(q as u128, m)?;
    let e = weight_lower_bound(q as u128, h);
    let mut weights = Vec::new();
    // The multiples of e below n are t*e for 1 <= t <= q-2.
    for t in 1..(q as u128 - 1) {
        let weight = params.wt_q((t * e) as i128);
        if weight != h + 1 {
            return Err(BoundsError::CertificateFailed {
                t,
                e,
                weight,
                expected: h + 1,
            });
        }
        weights.push((t, weight));
    }
    Ok(DivisorCertificate { q, h, m, e, weights })
}

/// `sum_{i=0}^{t} (q-1)^i C(n,i)`, the size of a Hamming ball of radius `t`.
pub fn sphere_volume(n: u128, q: u128, t: u128) -> BigUint {
    let mut total = BigUint::zero();
    let mut term = BigUint::one();
    let qm1 = BigUint::from(q - 1);
    for i in 0..=t.min(n) {
        if i > 0 {
            term = term * BigUint::from(n - i + 1) * &qm1 / BigUint::from(i);
        }
        total += &term;
    }
    total
}

/// Whether an `[n, k, d]_q` code is compatible with the sphere-packing bound
/// `q^{n-k} >= V(n, floor((d-1)/2))`.
pub fn sphere_packing_ok(n: u128, k: u128, q: u128, d: u128) -> bool {
    assert!(k <= n && d >= 1, "need k <= n and d >= 1");
    let t = (d - 1) / 2;
    let redundancy = u32::try_from(n - k).expect("redundancy fits 32 bits");
    BigUint::from(q).pow(redundancy) >= sphere_volume(n, q, t)
}

/// Certified optimal by sphere packing: distance `d` is allowed but `d + 1` is not.
pub fn distance_optimal(n: u128, k: u128, q: u128, d: u128) -> bool {
    sphere_packing_ok(n, k, q, d) && !sphere_packing_ok(n, k, q, d + 1)
}

/// Largest `d` the sphere-packing bound allows for an `[n, k]_q` code, or
/// `None` when the bound excludes nothing up to `d = n`.
pub fn sphere_packing_max_distance(n: u128, k: u128, q: u128) -> Option<u128> {
    let redundancy = u32::try_from(n - k).ok()?;
    let budget = BigUint::from(q).pow(redundancy);
    let qm1 = BigUint::from(q - 1);
    let mut volume = BigUint::one();
    let mut term = BigUint::one();
    let mut t = 0u128;
    while t < n {
        let next = t + 1;
        term = term * BigUint::from(n - next + 1) * &qm1 / BigUint::from(next);
        volume += &term;
        if volume > budget {
            return Some((2 * t + 2).min(n));
        }
        t = next;
    }
    None
}

/// Exact values of the two polynomials whose positivity closes the binary
/// and ternary barred sphere-packing arguments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityReport {
    /// `f(15), f'(15), f''(15), f'''(15)` for `f(x) = x^3 - 12x^2 - 19x - 6`.
    pub cubic_at_15: [i64; 4],
    /// `4n^5 - 75n^4 - 80n^3 - 390n^2 - 104n - 30` at `n = 26`.
    pub quintic_at_26: i64,
    /// `f(n) = 6 V_2(n, 3) - 12 (n+1)^2` for `n = 2^m - 1`, `4 <= m <= 40`.
    pub cubic_matches_ball: bool,
    /// quintic(n) `= 15 V_3(n, 5) - 45 (n+1)^4` for `n = 3^m - 1`, `3 <= m <= 25`.
    pub quintic_matches_ball: bool,
    pub all_positive: bool,
}

pub fn cubic(x: i64) -> [i64; 4] {
    [
        x * x * x - 12 * x * x - 19 * x - 6,
        3 * x * x - 24 * x - 19,
        6 * x - 24,
        6,
    ]
}

pub fn quintic(n: i64) -> i64 {
    4 * n.pow(5) - 75 * n.pow(4) - 80 * n.pow(3) - 390 * n.pow(2) - 104 * n - 30
}

fn quintic_big(n: &BigInt) -> BigInt {
    let c = |v: i64| BigInt::from(v);
    c(4) * n.pow(5) - c(75) * n.pow(4) - c(80) * n.pow(3) - c(390) * n.pow(2) - c(104) * n - c(30)
}

pub fn polynomial_positivity_check() -> PositivityReport {
    let cubic_at_15 = cubic(15);
    let quintic_at_26 = quintic(26);
    let cubic_matches_ball = (4..=40u32).all(|m| {
        let n = (1u128 << m) - 1;
        let nb = BigInt::from(n);
        let f = &nb * &nb * &nb - BigInt::from(12) * &nb * &nb - BigInt::from(19) * &nb - BigInt::from(6);
        let ball = BigInt::from(sphere_volume(n, 2, 3));
        let np1 = BigInt::from(n + 1);
        f == BigInt::from(6) * ball - BigInt::from(12) * &np1 * &np1
    });
    let quintic_matches_ball = (3..=25u32).all(|m| {
        let n = 3u128.pow(m) - 1;
        let ball = BigInt::from(sphere_volume(n, 3, 5));
        let np1 = BigInt::from(n + 1);
        quintic_big(&BigInt::from(n)) == BigInt::from(15) * ball - BigInt::from(45) * np1.pow(4)
    });
    let all_positive = cubic_at_15.iter().all(|&v| v > 0) && quintic_at_26 > 0;
    PositivityReport {
        cubic_at_15,
        quintic_at_26,
        cubic_matches_ball,
        quintic_matches_ball,
        all_positive,
    }
}

/// Whether sphere packing alone forces `d̄(q,m,1) <= 2(2q-1)`: an
/// `[n, n-1-2(q-1)m]_q` code cannot reach distance `4q - 1`.
pub fn barred_weight_one_sphere_packing(q: u64, m: u32) -> bool {
    let (q, m) = (q as u128, m as u128);
    let n = q.pow(m as u32) - 1;
    let k = n - 1 - 2 * (q - 1) * m;
    !sphere_packing_ok(n, k, q, 2 * (2 * q - 1) + 1)
}

/// One `(a, l, e)` with `e = q + a` and `l = O_e(-a)` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderSearchRow {
    pub q: u64,
    pub a: u64,
    pub l: u64,
    pub e: u64,
}

/// All `a` in `[2, q-2]` coprime to `q` for which `-a` has odd order modulo
/// `q + a`, sorted by `a`. Such a row gives `d(q, l λ, 1) <= q + a` and
/// `d̄(q, l λ, 1) <= 2(q + a)` for every odd `λ`.
pub fn odd_order_search(q: u64) -> Result<Vec<OrderSearchRow>, BoundsError> {
    if q < 4 || !PrimePower::is_prime_power(q) {
        return Err(BoundsError::BadField(q, 4));
    }
    let mut rows = Vec::new();
    for a in 2..=q - 2 {
        if num_integer::gcd(a, q) != 1 {
            continue;
        }
        let e = q + a;
        let l = nt::mult_order(-(a as i128), e as u128)? as u64;
        if l % 2 == 1 {
            rows.push(OrderSearchRow { q, a, l, e });
        }
    }
    Ok(rows)
}

/// For odd `m`: `e | q^m - 1` and `q + 1 <= e <= 2q - 1`. Even `m` is
/// outside the rule's domain and yields `false`.
pub fn odd_m_divisor_check(q: u64, m: u32, e: u64) -> bool {
    if m % 2 == 0 || e < q + 1 || e > 2 * q - 1 {
        return false;
    }
    nt::pow_mod(q as u128, m as u128, e as u128) == 1
}

/// A row of the emitted table: one order-search row plus the general bounds
/// `q + 1 <= d(q,m,1) <= 2q - 1`, flagged when it matches a printed cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub q: u64,
    pub a: u64,
    pub l: u64,
    pub e: u64,
    pub q_plus_1: u64,
    pub two_q_minus_1: u64,
    pub pinned: u8,
}

/// Order-search rows for every prime power `q` in `[q_min, q_max]`, `q >= 4`.
pub fn order_table(q_min: u64, q_max: u64) -> Result<Vec<TableRow>, BoundsError> {
    let mut out = Vec::new();
    for q in q_min.max(4)..=q_max {
        if !PrimePower::is_prime_power(q) {
            continue;
        }
        for r in odd_order_search(q)? {
            out.push(TableRow {
                q,
                a: r.a,
                l: r.l,
                e: r.e,
                q_plus_1: q + 1,
                two_q_minus_1: 2 * q - 1,
                pinned: golden::is_printed_cell(q, r.a, r.l, r.e) as u8,
            });
        }
    }
    Ok(out)
}

/// Tightening beyond [`generic_bounds`]: quotient codewords from every
/// `base_m | m`, odd-order rows for `h = 1`, and the sphere-packing limit.
pub fn refined_bounds(spec: &CodeSpec) -> BoundReport {
    let mut report = generic_bounds(spec);
    let (q, m, h) = (spec.q, spec.m, spec.h);
    let factor = match spec.variant {
        Variant::Omega => 1,
        Variant::OmegaBar => 2,
    };

    for base_m in (h + 1).max(2)..=m {
        if m % base_m != 0 {
            continue;
        }
        match smallest_star_divisor(q, base_m, h) {
            Ok(Some(e)) => {
                debug_assert!(e >= weight_lower_bound(q as u128, h));
                report.add_upper(factor * e, Source::QuotientCodeword { e, base_m });
            }
            Ok(None) => {}
            Err(err) => report
                .notes
                .push(format!("divisor search for q^{base_m}-1 skipped: {err}")),
        }
    }

    if h == 1 && q >= 4 {
        if let Ok(rows) = odd_order_search(q) {
            for r in rows {
                if m as u64 % r.l == 0 && (m as u64 / r.l) % 2 == 1 {
                    report.add_upper(
                        factor * r.e as u128,
                        Source::OddOrder {
                            a: r.a,
                            l: r.l,
                            e: r.e,
                        },
                    );
                }
            }
        }
    }

    if let Some(k) = spec.dimension_formula() {
        let n = spec.n();
        let bits = (n - k) as f64 * (spec.q as f64).log2();
        if k > 0 && bits <= 65_536.0 {
            if let Some(d) = sphere_packing_max_distance(n, k, spec.q as u128) {
                report.add_upper(d, Source::SpherePacking);
            }
        }
    }
    report
}

fn smallest_star_divisor(q: u64, m: u32, h: u32) -> Result<Option<u128>, BoundsError> {
    let params = QadicParams::new(q as u128, m)?;
    if cyclotomy::low_weight_count(q as u128, m, h) > MATERIALIZE_LIMIT {
        return Err(CyclotomyError::TooLarge {
            size: cyclotomy::low_weight_count(q as u128, m, h),
        }
        .into());
    }
    let maximal = cyclotomy::maximal_set(&params, h)?;
    let n = params.n();
    Ok(nt::factorize(n)?
        .divisors()
        .into_iter()
        .find(|&e| e >= 2 && e < n && divides_none(e, &maximal)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_examples() {
        let r = generic_bounds(&CodeSpec::omega(3, 4, 2).unwrap());
        assert_eq!(r.lower.value, 13);
        assert_eq!(r.upper.as_ref().unwrap().value, 17);
        assert!(r.exact.is_none());

        let r = generic_bounds(&CodeSpec::omega(25, 2, 1).unwrap());
        assert_eq!(r.exact.unwrap().value, 26);
        let r = generic_bounds(&CodeSpec::omega_bar(25, 2, 1).unwrap());
        assert_eq!(r.exact.unwrap().value, 52);

        let r = generic_bounds(&CodeSpec::omega(2, 5, 3).unwrap());
        assert_eq!(r.exact.unwrap().value, 15);

        let r = generic_bounds(&CodeSpec::omega_bar(2, 5, 1).unwrap());
        assert_eq!(r.exact.unwrap(), Bound { value: 6, source: Source::BinaryBarredExact });

        let r = generic_bounds(&CodeSpec::omega_bar(3, 5, 1).unwrap());
        assert_eq!(r.upper.unwrap().value, 10);
        assert_eq!(r.lower.value, 8);
    }

    #[test]
    fn barred_lower_bound_out_of_range_is_flagged() {
        let r = generic_bounds(&CodeSpec::omega_bar(3, 6, 4).unwrap());
        assert_eq!(r.lower.source, Source::Trivial);
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn generic_bounds_consistent_everywhere() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 25] {
            for m in 2..9 {
                for h in 1..m {
                    for spec in [CodeSpec::omega(q, m, h), CodeSpec::omega_bar(q, m, h)] {
                        let spec = match spec {
                            Ok(s) => s,
                            Err(_) => continue,
                        };
                        let r = generic_bounds(&spec);
                        assert!(r.is_consistent(), "{spec}: {r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn condition_star_examples() {
        assert!(condition_star(3, 4, 2, 16).unwrap());
        assert!(condition_star(3, 6, 2, 13).unwrap());
        assert!(!condition_star(3, 4, 2, 2).unwrap());
        assert!(!condition_star(5, 2, 1, 4).unwrap());
        assert_eq!(
            condition_star(3, 4, 2, 7).unwrap_err(),
            BoundsError::NotADivisor { e: 7, n: 80 }
        );
        assert_eq!(
            condition_star(3, 4, 2, 80).unwrap_err(),
            BoundsError::RangeError { e: 80, n: 80 }
        );
    }

    #[test]
    fn divisor_search_examples() {
        assert!(divisor_search(3, 4, 2, None).unwrap().contains(&16));
        assert!(divisor_search(3, 6, 2, None).unwrap().contains(&13));
        assert!(divisor_search(2, 3, 1, Some(6)).unwrap().is_empty());
    }

    #[test]
    fn divisor_certificates() {
        let c = divisor_certificate(3, 1).unwrap();
        assert_eq!(c.e, 4);
        assert_eq!(c.weights, vec![(1, 2)]);
        assert_eq!(divisor_certificate(3, 2).unwrap().e, 13);
        assert_eq!(divisor_certificate(25, 1).unwrap().e, 26);
        for q in [3u64, 4, 5, 7, 8, 9, 11] {
            for h in 1..5 {
                let c = divisor_certificate(q, h).unwrap();
                assert!(condition_star(q, h + 1, h, c.e).unwrap() || c.e == QadicParams::new(q as u128, h + 1).unwrap().n());
            }
        }
        assert!(divisor_certificate(2, 1).is_err());
    }

    #[test]
    fn sphere_packing_examples() {
        assert!(!sphere_packing_ok(15, 6, 2, 7));
        assert_eq!(sphere_volume(15, 2, 3), BigUint::from(576u32));
        assert!(sphere_packing_ok(10, 10, 5, 1));
        assert!(sphere_packing_ok(7, 4, 2, 3));
        assert!(distance_optimal(15, 6, 2, 6));
        assert!(!sphere_packing_ok(8, 4, 3, 5));
        assert!(distance_optimal(8, 4, 3, 4));
        // The Hamming code meets the bound with equality at radius 1, so
        // sphere packing cannot exclude d = 4 and does not certify d = 3.
        assert!(sphere_packing_ok(7, 4, 2, 4));
        assert!(!distance_optimal(7, 4, 2, 3));
        assert_eq!(sphere_packing_max_distance(7, 4, 2), Some(4));
        assert_eq!(sphere_packing_max_distance(15, 6, 2), Some(6));
    }

    #[test]
    fn positivity() {
        let r = polynomial_positivity_check();
        assert_eq!(r.cubic_at_15, [384, 296, 66, 6]);
        assert_eq!(r.quintic_at_26, 11_579_850);
        assert!(r.cubic_matches_ball && r.quintic_matches_ball && r.all_positive);
    }

    #[test]
    fn odd_order_rows() {
        let rows = odd_order_search(7).unwrap();
        assert_eq!(rows, vec![OrderSearchRow { q: 7, a: 2, l: 3, e: 9 }]);
        let rows = odd_order_search(25).unwrap();
        for (a, l, e) in [(2, 9, 27), (3, 3, 28), (4, 7, 29), (8, 5, 33), (22, 23, 47)] {
            assert!(rows.contains(&OrderSearchRow { q: 25, a, l, e }));
        }
        assert!(odd_order_search(6).is_err());
        assert!(odd_order_search(3).is_err());
    }

    #[test]
    fn odd_m_divisor() {
        assert!(odd_m_divisor_check(7, 3, 9));
        for q in [3u64, 4, 5, 7, 8, 9, 11] {
            for m in [1u32, 3, 5, 7] {
                assert!(!odd_m_divisor_check(q, m, q + 1));
            }
        }
        assert!(!odd_m_divisor_check(7, 3, 7));
        assert!(!odd_m_divisor_check(7, 3, 14));
        assert!(!odd_m_divisor_check(7, 2, 9));
    }

    #[test]
    fn refined_examples() {
        let r = refined_bounds(&CodeSpec::omega(3, 4, 2).unwrap());
        assert_eq!(r.lower.value, 13);
        assert_eq!(r.upper.as_ref().unwrap().value, 16);
        assert!(r.is_consistent());
        let r = refined_bounds(&CodeSpec::omega_bar(3, 4, 2).unwrap());
        assert_eq!(r.upper.as_ref().unwrap().value, 32);
        let r = refined_bounds(&CodeSpec::omega(3, 6, 2).unwrap());
        assert_eq!(r.exact.as_ref().unwrap().value, 13);
        let r = refined_bounds(&CodeSpec::omega(25, 9, 1).unwrap());
        assert_eq!(r.upper.as_ref().unwrap().value, 27);
        assert!(r.is_consistent());
    }

    #[test]
    fn report_serializes() {
        let r = refined_bounds(&CodeSpec::omega(3, 4, 2).unwrap());
        let json = serde_json::to_string(&r).unwrap();
        let back: BoundReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
