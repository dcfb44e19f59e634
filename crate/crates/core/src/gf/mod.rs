//! Finite fields F_{p^s} in a polynomial basis, the embedding of F_q into
//! F_{q^m}, and dense polynomials over either.
//!
//! Elements are stored as a packed index: the element with polynomial-basis
//! coefficients `(c_0, ..., c_{s-1})` has index `c_0 + c_1 p + ... + c_{s-1} p^{s-1}`.
//! This is also the element ordering used in serialized output.
//!
//! Fields up to [`DEFAULT_TABLE_THRESHOLD`] elements carry exp/log tables;
//! larger fields multiply polynomials directly.

mod embed;
mod poly;
pub(crate) mod zp;

pub use embed::SubfieldEmbedding;
pub use poly::Poly;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nt;

pub const DEFAULT_TABLE_THRESHOLD: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {p}^{s} exceeds the supported 64-bit width")]
    Overflow { p: u64, s: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {index} out of range for a field of order {order}")]
    ForeignElement { index: u64, order: u64 },
    #[error("polynomial has zero constant term; its reciprocal loses degree")]
    ZeroConstantTerm,
    #[error("F_{small} is not a subfield of F_{big}")]
    NotASubfield { big: u64, small: u64 },
    #[error("no multiplicative extension of the subfield map is additive")]
    EmbeddingMismatch,
}

/// `q = p^s` with `p` verified prime by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub s: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(p: u64, s: u32) -> Result<Self, FieldError> {
        if s == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !nt::is_prime_trial(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = p.checked_pow(s).ok_or(FieldError::Overflow { p, s })?;
        Ok(PrimePower { p, s, q })
    }

    /// Splits `q` into `p^s`.
    pub fn from_order(q: u64) -> Result<Self, FieldError> {
        if q < 2 {
            return Err(FieldError::NotPrimePower(q));
        }
        let p = (2..=q)
            .take_while(|d| d.saturating_mul(*d) <= q)
            .find(|d| q % d == 0)
            .unwrap_or(q);
        let mut rest = q;
        let mut s = 0;
        while rest % p == 0 {
            rest /= p;
            s += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotPrimePower(q));
        }
        Ok(PrimePower { p, s, q })
    }

    pub fn is_prime_power(q: u64) -> bool {
        Self::from_order(q).is_ok()
    }
}

/// A field element as its packed polynomial-basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FieldElem(pub u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which primitive element to use: `rank = 0` picks the least one in index
/// order, `rank = r` the (r+1)-th.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldOptions {
    pub table_threshold: u64,
    pub primitive_rank: usize,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            table_threshold: DEFAULT_TABLE_THRESHOLD,
            primitive_rank: 0,
        }
    }
}

#[derive(Debug, Clone)]
struct LogTables {
    exp: Vec<FieldElem>,
    log: Vec<u64>,
}

/// A constructed finite field. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    prime_power: PrimePower,
    modulus: Vec<u64>,
    primitive: FieldElem,
    place: Vec<u64>,
    tables: Option<LogTables>,
}

impl FieldCtx {
    /// Builds F_{p^s} with the least monic irreducible modulus (ascending
    /// index order over the lower coefficients) and the least primitive element.
    pub fn build(p: u64, s: u32) -> Result<Self, FieldError> {
        Self::build_with(p, s, &FieldOptions::default())
    }

    pub fn build_with(p: u64, s: u32, opts: &FieldOptions) -> Result<Self, FieldError> {
        let pp = PrimePower::new(p, s)?;
        let modulus = (0..pp.q)
            .map(|idx| {
                let mut f: Vec<u64> = unpack(idx, p, s as usize);
                f.push(1);
                f
            })
            .find(|f| zp::is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists");
        let place = (0..s).map(|i| p.pow(i)).collect();
        let mut ctx = FieldCtx {
            prime_power: pp,
            modulus,
            primitive: FieldElem::ONE,
            place,
            tables: None,
        };
        ctx.primitive = ctx.find_primitive(opts.primitive_rank);
        if pp.q <= opts.table_threshold {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    /// Builds the field of order `q` (a prime power).
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let pp = PrimePower::from_order(q)?;
        Self::build(pp.p, pp.s)
    }

    fn find_primitive(&self, rank: usize) -> FieldElem {
        let order = self.order();
        if order == 2 {
            return FieldElem::ONE;
        }
        let group = (order - 1) as u128;
        let primes: Vec<u128> = nt::factorize(group)
            .expect("q - 1 below 2^64 always factors")
            .primes()
            .collect();
        (1..order)
            .map(FieldElem)
            .filter(|&x| {
                primes
                    .iter()
                    .all(|&r| self.pow_slow(x, (group / r) as u64) != FieldElem::ONE)
            })
            .nth(rank)
            .expect("primitive rank below the number of primitive elements")
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order();
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![0u64; q as usize];
        let mut x = FieldElem::ONE;
        for i in 0..q - 1 {
            exp.push(x);
            log[x.0 as usize] = i;
            x = self.mul_slow(x, self.primitive);
        }
        debug_assert_eq!(x, FieldElem::ONE);
        LogTables { exp, log }
    }

    pub fn prime_power(&self) -> PrimePower {
        self.prime_power
    }

    pub fn order(&self) -> u64 {
        self.prime_power.q
    }

    pub fn characteristic(&self) -> u64 {
        self.prime_power.p
    }

    pub fn degree(&self) -> u32 {
        self.prime_power.s
    }

    /// The monic irreducible modulus over Z_p, lowest degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive(&self) -> FieldElem {
        self.primitive
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem, FieldError> {
        if index < self.order() {
            Ok(FieldElem(index))
        } else {
            Err(FieldError::ForeignElement {
                index,
                order: self.order(),
            })
        }
    }

    /// Element with the given polynomial-basis coefficients.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem, FieldError> {
        let p = self.characteristic();
        if coeffs.len() > self.degree() as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(FieldError::ForeignElement {
                index: u64::MAX,
                order: self.order(),
            });
        }
        Ok(FieldElem(pack(coeffs, p)))
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u64> {
        unpack(x.0, self.characteristic(), self.degree() as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order()).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.characteristic();
        if p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.degree() == 1 {
            return FieldElem(((a.0 as u128 + b.0 as u128) % p as u128) as u64);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        for &w in &self.place {
            let d = (x % p + y % p) % p;
            out += d * w;
            x /= p;
            y /= p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.characteristic();
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u64;
        for &w in &self.place {
            out += ((p - x % p) % p) * w;
            x /= p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.order() - 1;
                let e = (t.log[a.0 as usize] + t.log[b.0 as usize]) % n;
                t.exp[e as usize]
            }
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.characteristic();
        let s = self.degree() as usize;
        let prod = zp::mul_mod(&unpack(a.0, p, s), &unpack(b.0, p, s), &self.modulus, p);
        FieldElem(pack(&prod, p))
    }

    fn pow_slow(&self, x: FieldElem, mut e: u64) -> FieldElem {
        let mut base = x;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = self.order() - 1;
                t.exp[((n - t.log[a.0 as usize]) % n) as usize]
            }
            None => self.pow_slow(a, self.order() - 2),
        })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x^e` for any signed exponent; negative exponents go through the inverse.
    pub fn pow(&self, x: FieldElem, e: i128) -> Result<FieldElem, FieldError> {
        let group = (self.order() - 1) as u128;
        if x.is_zero() {
            return match e {
                0 => Ok(FieldElem::ONE),
                e if e > 0 => Ok(FieldElem::ZERO),
                _ => Err(FieldError::DivisionByZero),
            };
        }
        let base = if e < 0 { self.inv(x)? } else { x };
        let exp = (e.unsigned_abs() % group) as u64;
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[base.0 as usize] as u128 * exp as u128 % group;
                t.exp[l as usize]
            }
            None => self.pow_slow(base, exp),
        })
    }

    /// `alpha^e` for the primitive element `alpha`.
    pub fn alpha_pow(&self, e: u128) -> FieldElem {
        let group = (self.order() - 1) as u128;
        let e = e % group;
        match &self.tables {
            Some(t) => t.exp[e as usize],
            None => self.pow_slow(self.primitive, e as u64),
        }
    }

    /// Discrete logarithm to base `alpha`; `None` for zero. Falls back to a
    /// linear scan when no tables are present.
    pub fn log(&self, x: FieldElem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[x.0 as usize]),
            None => {
                let mut y = FieldElem::ONE;
                for i in 0..self.order() - 1 {
                    if y == x {
                        return Some(i);
                    }
                    y = self.mul_slow(y, self.primitive);
                }
                None
            }
        }
    }

    /// Multiplicative order of a non-zero element.
    pub fn multiplicative_order(&self, x: FieldElem) -> Result<u64, FieldError> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let group = self.order() - 1;
        if group == 1 {
            return Ok(1);
        }
        let mut order = group;
        let fac = nt::factorize(group as u128).expect("64-bit values factor");
        for r in fac.primes() {
            let r = r as u64;
            while order % r == 0 && self.pow_slow(x, order / r) == FieldElem::ONE {
                order /= r;
            }
        }
        Ok(order)
    }
}

fn unpack(mut idx: u64, p: u64, s: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(s);
    for _ in 0..s {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn pack(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}
