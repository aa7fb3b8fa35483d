//! Bivariate polynomials and rational functions over the rationals.
//!
//! Just enough algebra to decide whether an identity between rational
//! expressions in two symbols holds for all values: subtract, clear
//! denominators, and check that the resulting polynomial is identically
//! zero. No factorization, no gcd reduction; denominators grow but the
//! expressions here are tiny.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, Zero};

use super::rat;

/// Polynomial in two symbols `a` and `g`, keyed by `(deg_a, deg_g)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { terms: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly2::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn int(c: i64) -> Self {
        Poly2::constant(rat(c, 1))
    }

    /// The symbol `a`.
    pub fn var_a() -> Self {
        let mut p = Poly2::zero();
        p.add_term(1, 0, rat(1, 1));
        p
    }

    /// The symbol `g`.
    pub fn var_g() -> Self {
        let mut p = Poly2::zero();
        p.add_term(0, 1, rat(1, 1));
        p
    }

    fn add_term(&mut self, da: u32, dg: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((da, dg)).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(da, dg));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(da, dg), c) in &other.terms {
            out.add_term(da, dg, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(da, dg), c) in &other.terms {
            out.add_term(da, dg, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(da1, dg1), c1) in &self.terms {
            for (&(da2, dg2), c2) in &other.terms {
                out.add_term(da1 + da2, dg1 + dg2, c1 * c2);
            }
        }
        out
    }

    /// Evaluate at concrete rational values of the symbols.
    pub fn eval(&self, a: &BigRational, g: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(da, dg), c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..da {
                term *= a;
            }
            for _ in 0..dg {
                term *= g;
            }
            acc += term;
        }
        acc
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(da, dg), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            if da > 0 {
                write!(f, "*a^{}", da)?;
            }
            if dg > 0 {
                write!(f, "*g^{}", dg)?;
            }
        }
        Ok(())
    }
}

/// Formal quotient of two [`Poly2`]. The denominator is nonzero as a
/// polynomial; nothing guards against evaluation on its zero set, which is
/// exactly the degenerate locus callers report separately.
#[derive(Clone, Debug)]
pub struct RatFn2 {
    pub num: Poly2,
    pub den: Poly2,
}

impl RatFn2 {
    pub fn from_poly(p: Poly2) -> Self {
        RatFn2 { num: p, den: Poly2::int(1) }
    }

    pub fn int(c: i64) -> Self {
        RatFn2::from_poly(Poly2::int(c))
    }

    pub fn add(&self, other: &RatFn2) -> RatFn2 {
        RatFn2 {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &RatFn2) -> RatFn2 {
        RatFn2 {
            num: self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn mul(&self, other: &RatFn2) -> RatFn2 {
        RatFn2 { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn div(&self, other: &RatFn2) -> RatFn2 {
        assert!(!other.num.is_zero(), "division by the zero rational function");
        RatFn2 { num: self.num.mul(&other.den), den: self.den.mul(&other.num) }
    }

    pub fn recip(&self) -> RatFn2 {
        assert!(!self.num.is_zero(), "reciprocal of the zero rational function");
        RatFn2 { num: self.den.clone(), den: self.num.clone() }
    }

    /// Whether `self == other` identically, by clearing denominators.
    pub fn equals(&self, other: &RatFn2) -> bool {
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_arithmetic_cancels() {
        // (a + g)(a - g) == a^2 - g^2
        let a = Poly2::var_a();
        let g = Poly2::var_g();
        let lhs = a.add(&g).mul(&a.sub(&g));
        let rhs = a.mul(&a).sub(&g.mul(&g));
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn rational_function_identity() {
        // 1/(a-1) - 1/(a+1) == 2/(a^2-1)
        let a = RatFn2::from_poly(Poly2::var_a());
        let one = RatFn2::int(1);
        let two = RatFn2::int(2);
        let lhs = one.div(&a.sub(&one)).sub(&one.div(&a.add(&one)));
        let rhs = two.div(&a.mul(&a).sub(&one));
        assert!(lhs.equals(&rhs));
        assert!(!lhs.equals(&two));
    }

    #[test]
    fn evaluation_matches_structure() {
        // p = 3a^2 g - 1/2 at (a,g) = (2, 5) is 59.5
        let p = Poly2::int(3)
            .mul(&Poly2::var_a())
            .mul(&Poly2::var_a())
            .mul(&Poly2::var_g())
            .sub(&Poly2::constant(rat(1, 2)));
        assert_eq!(p.eval(&rat(2, 1), &rat(5, 1)), rat(119, 2));
    }
}
