//! Elementary number theory on 128-bit integers: primality, factorization,
//! Euler's totient, multiplicative orders and the structural odd-order test.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Trial division bound before switching to Pollard rho.
const TRIAL_LIMIT: u128 = 1 << 20;

/// Iterations allowed per Pollard-rho attempt.
const RHO_ITERATIONS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NtError {
    #[error("cannot factor {0}: expected an integer >= 2")]
    TooSmall(u128),
    #[error("factorization of {value} incomplete: composite cofactor {cofactor} survived the rho budget")]
    FactorizationIncomplete { value: u128, cofactor: u128 },
    #[error("{base} is not coprime to {modulus}")]
    NotCoprime { base: i128, modulus: u128 },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u128),
    #[error("odd-order criteria disagree with the computed order for base {base} mod {modulus}")]
    InternalMismatch { base: i128, modulus: u128 },
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(p, k)| acc * p.pow(k))
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// All positive divisors in ascending order.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(p, k) in &self.factors {
            let len = divs.len();
            let mut pk = 1u128;
            for _ in 0..k {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, k)| if k == 1 { p.to_string() } else { format!("{p}^{k}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// `a * b mod m` without overflow.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m > 0);
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    // Double-and-add; only reached for moduli above 2^64.
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

pub fn pow_mod(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Least non-negative residue of a signed integer.
pub fn reduce_signed(b: i128, m: u128) -> u128 {
    if b >= 0 {
        (b as u128) % m
    } else {
        let r = b.unsigned_abs() % m;
        if r == 0 {
            0
        } else {
            m - r
        }
    }
}

const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_EXTRA_BASES: [u128; 11] = [43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];
/// The first 13 prime bases are a deterministic witness set below this bound.
const MR_DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

/// Miller-Rabin. Deterministic below 3.3e24; above that 24 prime bases are
/// used, which can only err by calling a composite prime.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in MR_BASES.iter().chain(MR_EXTRA_BASES.iter()) {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let witness = |a: u128| -> bool {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            return false;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                return false;
            }
        }
        true
    };
    if MR_BASES.iter().any(|&a| witness(a)) {
        return false;
    }
    if n < MR_DETERMINISTIC_BOUND {
        return true;
    }
    !MR_EXTRA_BASES.iter().any(|&a| witness(a))
}

/// Trial-division primality, used where the input is known to be small.
pub fn is_prime_trial(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a non-trivial factor of `n`.
fn rho(n: u128, c: u128) -> Option<u128> {
    let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
    let mut y = 2u128;
    let mut r = 1u64;
    let mut q = 1u128;
    let mut g = 1u128;
    let mut x = y;
    let mut ys = y;
    let batch = 128u64;
    let mut iters = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..batch.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += batch;
        }
        r *= 2;
        iters += r;
        if iters > RHO_ITERATIONS {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_composite(n: u128) -> Option<u128> {
    (1u128..=24).find_map(|c| rho(n, c))
}

/// Full prime factorization: trial division to 2^20, then Pollard rho.
pub fn factorize(x: u128) -> Result<Factorization, NtError> {
    if x < 2 {
        return Err(NtError::TooSmall(x));
    }
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut rest = x;
    let push = |factors: &mut Vec<(u128, u32)>, p: u128, k: u32| {
        if let Some(entry) = factors.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += k;
        } else {
            factors.push((p, k));
        }
    };

    let mut d = 2u128;
    while d < TRIAL_LIMIT && d * d <= rest {
        if rest % d == 0 {
            let mut k = 0;
            while rest % d == 0 {
                rest /= d;
                k += 1;
            }
            push(&mut factors, d, k);
        }
        d += if d == 2 { 1 } else { 2 };
    }

    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    while let Some(c) = stack.pop() {
        if c < TRIAL_LIMIT * TRIAL_LIMIT || is_prime(c) {
            // Below TRIAL_LIMIT^2 every cofactor left by trial division is prime.
            push(&mut factors, c, 1);
            continue;
        }
        match split_composite(c) {
            Some(f) => {
                stack.push(f);
                stack.push(c / f);
            }
            None => {
                return Err(NtError::FactorizationIncomplete {
                    value: x,
                    cofactor: c,
                })
            }
        }
    }
    factors.sort_unstable();
    Ok(Factorization { factors })
}

pub fn euler_phi(e: u128) -> Result<u128, NtError> {
    if e == 1 {
        return Ok(1);
    }
    let fac = factorize(e)?;
    Ok(fac
        .factors
        .iter()
        .fold(1u128, |acc, &(p, k)| acc * (p - 1) * p.pow(k - 1)))
}

/// Least `l >= 1` with `b^l = 1 (mod e)`; negative bases are reduced first.
pub fn mult_order(b: i128, e: u128) -> Result<u128, NtError> {
    if e < 2 {
        return Err(NtError::BadModulus(e));
    }
    let base = reduce_signed(b, e);
    if base.gcd(&e) != 1 {
        return Err(NtError::NotCoprime { base: b, modulus: e });
    }
    let phi = euler_phi(e)?;
    let mut order = phi;
    for p in factorize_or_one(phi)?.primes() {
        while order % p == 0 && pow_mod(base, order / p, e) == 1 {
            order /= p;
        }
    }
    Ok(order)
}

fn factorize_or_one(x: u128) -> Result<Factorization, NtError> {
    if x == 1 {
        Ok(Factorization { factors: vec![] })
    } else {
        factorize(x)
    }
}

/// One step of the structural odd-order decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OddOrderStep {
    /// Modulus 2^a: the order is odd iff `b = 1 (mod 2^a)`.
    PowerOfTwo { modulus: u128, residue: u128, odd: bool },
    /// Odd prime power p^a: decided by the order modulo p, where
    /// `p - 1 = 2^twos * odd_part` and the order is odd iff `b^odd_part = 1 (mod p)`.
    OddPrimePower {
        prime: u128,
        exponent: u32,
        odd_part: u128,
        twos: u32,
        odd: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddOrderTrace {
    pub base: i128,
    pub modulus: u128,
    pub odd: bool,
    pub steps: Vec<OddOrderStep>,
}

/// Decides whether `O_e(b)` is odd by splitting `e` into prime powers and
/// testing each locally, then confirms against the parity of
/// [`mult_order`]. A disagreement is reported as `InternalMismatch`.
pub fn odd_order_test(b: i128, e: u128) -> Result<OddOrderTrace, NtError> {
    if e < 2 {
        return Err(NtError::BadModulus(e));
    }
    let base = reduce_signed(b, e);
    if base.gcd(&e) != 1 {
        return Err(NtError::NotCoprime { base: b, modulus: e });
    }
    let mut steps = Vec::new();
    for &(p, k) in &factorize(e)?.factors {
        if p == 2 {
            let modulus = 1u128 << k;
            let residue = base % modulus;
            steps.push(OddOrderStep::PowerOfTwo {
                modulus,
                residue,
                odd: residue == 1,
            });
        } else {
            let mut odd_part = p - 1;
            let mut twos = 0;
            while odd_part % 2 == 0 {
                odd_part /= 2;
                twos += 1;
            }
            let odd = pow_mod(base % p, odd_part, p) == 1;
            steps.push(OddOrderStep::OddPrimePower {
                prime: p,
                exponent: k,
                odd_part,
                twos,
                odd,
            });
        }
    }
    let odd = steps.iter().all(|s| match s {
        OddOrderStep::PowerOfTwo { odd, .. } | OddOrderStep::OddPrimePower { odd, .. } => *odd,
    });
    if odd != (mult_order(b, e)? % 2 == 1) {
        return Err(NtError::InternalMismatch { base: b, modulus: e });
    }
    Ok(OddOrderTrace {
        base: b,
        modulus: e,
        odd,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(b: i128, e: u128) -> u128 {
        let b = reduce_signed(b, e);
        let mut x = b;
        let mut l = 1;
        while x != 1 {
            x = x * b % e;
            l += 1;
        }
        l
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(728).unwrap().factors, vec![(2, 3), (7, 1), (13, 1)]);
        assert_eq!(factorize(2).unwrap().factors, vec![(2, 1)]);
        assert_eq!(factorize(80).unwrap().factors, vec![(2, 4), (5, 1)]);
        assert!(matches!(factorize(1), Err(NtError::TooSmall(1))));
    }

    #[test]
    fn factorize_beyond_trial_division() {
        // 2^61 - 1 is prime; (2^31 - 1)(2^61 - 1) needs rho or a primality proof.
        let m61 = (1u128 << 61) - 1;
        let m31 = (1u128 << 31) - 1;
        assert_eq!(factorize(m61).unwrap().factors, vec![(m61, 1)]);
        assert_eq!(factorize(m31 * m61).unwrap().factors, vec![(m31, 1), (m61, 1)]);
        let p = 1_000_003u128;
        let q = 1_000_033u128;
        assert_eq!(factorize(p * q).unwrap().factors, vec![(p, 1), (q, 1)]);
        let f = factorize(3u128.pow(40) - 1).unwrap();
        assert_eq!(f.value(), 3u128.pow(40) - 1);
        assert!(f.primes().all(is_prime));
    }

    #[test]
    fn mul_mod_wide_modulus() {
        let m = (1u128 << 100) + 277;
        let a = (1u128 << 99) + 12345;
        let b = (1u128 << 98) + 999;
        // (a*b) mod m via splitting b
        let split = add_mod(mul_mod(a, 1 << 98, m), mul_mod(a, 999, m), m);
        assert_eq!(mul_mod(a, b, m), split);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(9).unwrap(), 6);
        for a in 1..20 {
            assert_eq!(euler_phi(1 << a).unwrap(), 1 << (a - 1));
        }
        for e in 1u128..300 {
            let count = (1..=e).filter(|i| i.gcd(&e) == 1).count() as u128;
            assert_eq!(euler_phi(e).unwrap(), count);
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(mult_order(-2, 27).unwrap(), 9);
        assert_eq!(mult_order(-2, 9).unwrap(), 3);
        assert_eq!(mult_order(1, 17).unwrap(), 1);
        assert!(matches!(mult_order(3, 12), Err(NtError::NotCoprime { .. })));
        for e in 2u128..200 {
            let phi = euler_phi(e).unwrap();
            for b in -30i128..30 {
                if reduce_signed(b, e).gcd(&e) != 1 {
                    continue;
                }
                let l = mult_order(b, e).unwrap();
                assert_eq!(l, brute_order(b, e), "b={b} e={e}");
                assert_eq!(phi % l, 0);
            }
        }
    }

    #[test]
    fn odd_order_examples() {
        assert!(odd_order_test(-2, 27).unwrap().odd);
        for q in 3u128..60 {
            assert!(!odd_order_test(-1, q + 1).unwrap().odd);
        }
        let t = odd_order_test(-4, 23).unwrap();
        assert!(!t.odd);
        assert!(odd_order_test(4, 23).unwrap().odd);
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(factorize(80).unwrap().divisors(), vec![1, 2, 4, 5, 8, 10, 16, 20, 40, 80]);
    }
}
