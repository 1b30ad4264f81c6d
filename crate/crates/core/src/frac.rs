//! Fractions of polynomials, just enough field structure for exact linear
//! algebra over function fields.
//!
//! No gcd machinery: normalization cancels exact divisors and rescales the
//! denominator, which keeps the desk-scale computations here small while
//! staying exact. Equality is decided by cross multiplication.

use std::fmt;
use std::sync::Arc;

use num::One;

use crate::poly::{div_exact, Poly, VarTable};
use crate::scalar::Rat;

#[derive(Clone)]
pub struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.vars());
        Frac { num: p, den: one }
    }

    pub fn zero(vars: &Arc<VarTable>) -> Self {
        Frac::from_poly(Poly::zero(vars))
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Frac::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: &Arc<VarTable>, c: Rat) -> Self {
        Frac::from_poly(Poly::constant(vars, c))
    }

    /// Build `num/den`; panics on a zero denominator, which is always a
    /// caller bug here.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = Frac { num, den };
        f.normalize();
        f
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.num.vars());
            return;
        }
        if let Some(q) = div_exact(&self.num, &self.den) {
            self.num = q;
            self.den = Poly::one(self.num.vars());
            return;
        }
        // Scale so the denominator's leading coefficient is one; keeps
        // representatives canonical enough for display and hashing-free
        // comparison paths.
        let lead = self.den.terms().next_back().map(|(_, c)| c.clone());
        if let Some(c) = lead {
            let inv = c.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Frac) -> Frac {
        Frac::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Frac) -> Frac {
        Frac::new(
            self.num
                .mul(&other.den)
                .sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Frac) -> Frac {
        Frac::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Option<Frac> {
        if self.is_zero() {
            return None;
        }
        Some(Frac::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Frac) -> Option<Frac> {
        Some(self.mul(&other.inv()?))
    }

    /// The underlying polynomial when the denominator is trivial.
    pub fn as_poly(&self) -> Option<Poly> {
        if self.den.as_constant().map_or(false, |c| c.is_one()) {
            Some(self.num.clone())
        } else {
            div_exact(&self.num, &self.den)
        }
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Frac {}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().map_or(false, |c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;

    fn ring() -> Arc<VarTable> {
        let mut t = VarTable::new();
        t.add("x", false);
        t.add("y", false);
        Arc::new(t)
    }

    #[test]
    fn field_identities() {
        let vars = ring();
        let x = Frac::from_poly(Poly::var(&vars, 0));
        let y = Frac::from_poly(Poly::var(&vars, 1));
        let s = x.add(&y);
        let d = x.sub(&y);
        let prod = s.mul(&d);
        let direct = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(prod, direct);

        let r = s.div(&d).unwrap();
        assert_eq!(r.mul(&d), s);
        assert_eq!(r.inv().unwrap().mul(&r), Frac::one(&vars));
    }

    #[test]
    fn cancellation() {
        let vars = ring();
        let x = Poly::var(&vars, 0);
        let y = Poly::var(&vars, 1);
        let f = Frac::new(x.mul(&y), y.clone());
        assert_eq!(f.as_poly().unwrap(), x);
        assert_eq!(f, Frac::from_poly(x.clone()));
        assert!(Frac::new(Poly::zero(&vars), y).is_zero());
    }
}
