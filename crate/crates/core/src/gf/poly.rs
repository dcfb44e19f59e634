use serde::{Deserialize, Serialize};

use super::{FieldCtx, FieldElem, FieldError, SubfieldEmbedding};

/// Dense polynomial over a field, lowest degree first. No trailing zeros;
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(FieldElem::ONE)
    }

    pub fn constant(c: FieldElem) -> Self {
        Poly::new(vec![c])
    }

    /// `x - root`.
    pub fn linear(root: FieldElem, f: &FieldCtx) -> Self {
        Poly::new(vec![f.neg(root), FieldElem::ONE])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize, f: &FieldCtx) -> Self {
        let mut coeffs = vec![FieldElem::ZERO; n + 1];
        coeffs[0] = f.neg(FieldElem::ONE);
        coeffs[n] = f.add(coeffs[n], FieldElem::ONE);
        Poly::new(coeffs)
    }

    pub fn from_indices(indices: &[u64]) -> Self {
        Poly::new(indices.iter().map(|&i| FieldElem(i)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    /// Number of non-zero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn add(&self, other: &Poly, f: &FieldCtx) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &FieldCtx) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: FieldElem, f: &FieldCtx) -> Poly {
        Poly::new(self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &FieldCtx) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// `(quotient, remainder)` with `deg(remainder) < deg(divisor)`.
    pub fn divmod(&self, divisor: &Poly, f: &FieldCtx) -> Result<(Poly, Poly), FieldError> {
        let d = divisor.degree().ok_or(FieldError::DivisionByZero)?;
        let lead_inv = f.inv(divisor.coeffs[d])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![FieldElem::ZERO; rem.len() - d];
        for top in (d..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            let shift = top - d;
            quot[shift] = factor;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[shift + i] = f.sub(rem[shift + i], f.mul(factor, dc));
                }
            }
        }
        rem.truncate(d);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly, f: &FieldCtx) -> Result<Poly, FieldError> {
        Ok(self.divmod(divisor, f)?.1)
    }

    pub fn monic(&self, f: &FieldCtx) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(f.inv(l).expect("leading coefficient is non-zero"), f),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &FieldCtx) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("divisor is non-zero");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Monic least common multiple, `a*b / gcd(a, b)`.
    pub fn lcm(&self, other: &Poly, f: &FieldCtx) -> Result<Poly, FieldError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        let g = self.gcd(other, f);
        let (q, _) = self.mul(other, f).divmod(&g, f)?;
        Ok(q.monic(f))
    }

    /// `x^deg f * f(1/x)`, made monic. Requires a non-zero constant term so
    /// that the degree is preserved.
    pub fn reciprocal(&self, f: &FieldCtx) -> Result<Poly, FieldError> {
        if self.coeff(0).is_zero() {
            return Err(FieldError::ZeroConstantTerm);
        }
        let mut rev = self.coeffs.clone();
        rev.reverse();
        Ok(Poly::new(rev).monic(f))
    }

    /// Horner evaluation in the coefficient field.
    pub fn eval(&self, x: FieldElem, f: &FieldCtx) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates a polynomial with coefficients in the small field of `emb`
    /// at a point of the big field.
    pub fn eval_lifted(&self, x: FieldElem, emb: &SubfieldEmbedding) -> FieldElem {
        let big = emb.big();
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| big.add(big.mul(acc, x), emb.lift(c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> FieldCtx {
        FieldCtx::build(2, 1).unwrap()
    }

    fn p(bits: &[u64]) -> Poly {
        Poly::from_indices(bits)
    }

    #[test]
    fn geometric_sum_division() {
        let f = gf2();
        let (q, r) = Poly::x_pow_minus_one(7, &f).divmod(&p(&[1, 1]), &f).unwrap();
        assert_eq!(q, p(&[1; 7]));
        assert!(r.is_zero());
    }

    #[test]
    fn divmod_by_zero() {
        let f = gf2();
        assert_eq!(p(&[1, 1]).divmod(&Poly::zero(), &f), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn gcd_and_lcm_basics() {
        let f = FieldCtx::build(5, 1).unwrap();
        let g = Poly::from_indices(&[3, 2, 4]);
        assert_eq!(g.gcd(&g, &f), g.monic(&f));
        let x_minus_one = Poly::linear(FieldElem::ONE, &f);
        assert_eq!(x_minus_one.lcm(&x_minus_one, &f).unwrap(), x_minus_one);
    }

    #[test]
    fn reciprocal_examples() {
        let f = gf2();
        let x_minus_one = Poly::linear(FieldElem::ONE, &f);
        assert_eq!(x_minus_one.reciprocal(&f).unwrap(), x_minus_one);
        assert_eq!(p(&[1, 1, 0, 1]).reciprocal(&f).unwrap(), p(&[1, 0, 1, 1]));
        assert_eq!(p(&[0, 1]).reciprocal(&f), Err(FieldError::ZeroConstantTerm));
        let f7 = FieldCtx::build(7, 1).unwrap();
        let g = Poly::from_indices(&[3, 5, 0, 2]);
        assert_eq!(
            g.reciprocal(&f7).unwrap().reciprocal(&f7).unwrap(),
            g.monic(&f7)
        );
    }

    #[test]
    fn evaluation() {
        let f = FieldCtx::build(2, 3).unwrap();
        let n = 7;
        let xn1 = Poly::x_pow_minus_one(n, &f);
        for a in 0..n as u128 {
            assert!(xn1.eval(f.alpha_pow(a), &f).is_zero());
        }
        assert!(Poly::linear(FieldElem::ONE, &f).eval(FieldElem::ONE, &f).is_zero());
    }
}
