//! Dense polynomials over the prime field Z_p, stored lowest degree first.
//! Used to search for irreducible moduli and as the slow multiplication path.

pub(crate) type ZpPoly = Vec<u64>;

pub(crate) fn trim(mut a: ZpPoly) -> ZpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::nt::pow_mod(a as u128, (p - 2) as u128, p as u128) as u64
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> ZpPoly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> ZpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % p as u128;
        }
    }
    trim(out.into_iter().map(|c| c as u64).collect())
}

/// Remainder of `a` modulo `m` (`m` non-zero).
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> ZpPoly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = (r[top] as u128 * lead_inv as u128 % p as u128) as u64;
        let shift = top - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = (factor as u128 * c as u128 % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> ZpPoly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> ZpPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// `base^p` reduced modulo `m`.
fn frobenius(base: &[u64], m: &[u64], p: u64) -> ZpPoly {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// A monic polynomial `f` of degree `s` is irreducible over Z_p iff
/// `gcd(f, x^(p^i) - x) = 1` for every `1 <= i <= s/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let s = f.len() - 1;
    if s <= 1 {
        return s == 1;
    }
    let x: ZpPoly = rem(&[0, 1], f, p);
    let mut power = x.clone();
    for _ in 1..=s / 2 {
        power = frobenius(&power, f, p);
        let g = gcd(f, &sub(&power, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        // x^3 + x + 1 and x^3 + x^2 + 1 over F_2; x^2 + 1 = (x+1)^2 is not.
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // x^2 + 1 over F_3 is irreducible (-1 is a non-square), x^2 - 1 is not.
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[2, 0, 1], 3));
        // (x^2 + x + 1)^2 over F_2 has no roots but is reducible.
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // Number of monic irreducibles of degree 4 over F_2 is 3, over F_3 it is 18.
        for (p, expected) in [(2u64, 3usize), (3, 18)] {
            let total = p.pow(4);
            let count = (0..total)
                .filter(|&idx| {
                    let mut f: Vec<u64> = (0..4).map(|i| idx / p.pow(i) % p).collect();
                    f.push(1);
                    is_irreducible(&f, p)
                })
                .count();
            assert_eq!(count, expected);
        }
    }
}
