//! Sparse multivariate Laurent polynomials over the rationals.
//!
//! A [`VarTable`] fixes the ambient variable list once; every [`Poly`]
//! carries a shared handle to its table. Variables are either plain
//! (exponents must stay nonnegative) or invertible (Laurent). Terms are
//! kept in a sorted map with no explicit zero coefficients, so structural
//! equality is semantic equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::scalar::{rat_str, rpow, Rat};

pub type VarId = usize;

/// Exponent vector, one entry per variable in the table.
pub type Expo = Vec<i32>;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    invertible: Vec<bool>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a variable; names must be unique.
    pub fn add(&mut self, name: &str, invertible: bool) -> VarId {
        assert!(
            self.id(name).is_none(),
            "variable {name:?} registered twice"
        );
        self.names.push(name.to_string());
        self.invertible.push(invertible);
        self.names.len() - 1
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    pub fn is_invertible(&self, v: VarId) -> bool {
        self.invertible[v]
    }

    pub fn count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Arc<VarTable>,
    terms: BTreeMap<Expo, Rat>,
}

impl Poly {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        Poly {
            vars: Arc::clone(vars),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarTable>, c: Rat) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.count()], c);
        }
        p
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Poly::constant(vars, Rat::one())
    }

    pub fn var(vars: &Arc<VarTable>, v: VarId) -> Self {
        let mut e = vec![0; vars.count()];
        e[v] = 1;
        Poly::monomial(vars, e, Rat::one())
    }

    /// Single term. Panics if a plain variable gets a negative exponent,
    /// which would silently leave the ring.
    pub fn monomial(vars: &Arc<VarTable>, expo: Expo, c: Rat) -> Self {
        assert_eq!(expo.len(), vars.count(), "exponent length mismatch");
        for (v, &e) in expo.iter().enumerate() {
            assert!(
                e >= 0 || vars.is_invertible(v),
                "negative exponent on plain variable {}",
                vars.name(v)
            );
        }
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(expo, c);
        }
        p
    }

    pub fn from_terms(vars: &Arc<VarTable>, terms: Vec<(Expo, Rat)>) -> Self {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    fn same_ring(&self, other: &Poly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials from different rings"
        );
    }

    fn add_term(&mut self, e: Expo, c: Rat) {
        if c.is_zero() {
            return;
        }
        for (v, &ev) in e.iter().enumerate() {
            assert!(
                ev >= 0 || self.vars.is_invertible(v),
                "negative exponent on plain variable {}",
                self.vars.name(v)
            );
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The constant value if the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The (exponent, coefficient) pair if the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(Expo, Rat)> {
        (self.terms.len() == 1)
            .then(|| {
                self.terms
                    .iter()
                    .next()
                    .map(|(e, c)| (e.clone(), c.clone()))
            })
            .flatten()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_ring(other);
        let mut out = Poly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Expo = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Multiply by a single term without building an intermediate `Poly`.
    pub fn mul_term(&self, expo: &Expo, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        let mut out = Poly::zero(&self.vars);
        for (e, v) in &self.terms {
            let ne: Expo = e.iter().zip(expo).map(|(x, y)| x + y).collect();
            out.add_term(ne, v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euler derivative `x ∂/∂x` in variable `v`: multiplies each term by
    /// its exponent. Well defined on Laurent terms.
    pub fn euler(&self, v: VarId) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * Rat::from_integer(e[v].into()));
        }
        out
    }

    /// Substitute rational values for a subset of variables. Substituting
    /// zero into a term where the variable appears with negative exponent
    /// panics: callers are expected to sample away from that locus.
    pub fn eval_partial(&self, assign: &BTreeMap<VarId, Rat>) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut ne = e.clone();
            for (&v, val) in assign {
                let ev = e[v];
                if ev != 0 {
                    assert!(
                        !(val.is_zero() && ev < 0),
                        "specializing {} to zero under a negative exponent",
                        self.vars.name(v)
                    );
                    coeff *= rpow(val, ev);
                }
                ne[v] = 0;
            }
            out.add_term(ne, coeff);
        }
        out
    }

    /// Full evaluation; panics unless every variable is assigned.
    pub fn eval(&self, assign: &BTreeMap<VarId, Rat>) -> Rat {
        assert_eq!(assign.len(), self.vars.count(), "incomplete assignment");
        self.eval_partial(assign)
            .as_constant()
            .expect("evaluation left free variables")
    }

    /// Rescale one variable, `x ↦ c·x`.
    pub fn scale_var(&self, v: VarId, c: &Rat) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (e, coeff) in &self.terms {
            if c.is_zero() && e[v] != 0 {
                assert!(e[v] > 0, "scaling an inverted variable to zero");
                continue;
            }
            let factor = if e[v] == 0 { Rat::one() } else { rpow(c, e[v]) };
            out.add_term(e.clone(), coeff * factor);
        }
        out
    }

    pub fn min_exp(&self, v: VarId) -> Option<i32> {
        self.terms.keys().map(|e| e[v]).min()
    }

    pub fn max_exp(&self, v: VarId) -> Option<i32> {
        self.terms.keys().map(|e| e[v]).max()
    }

    /// Coefficient of `x^k` in variable `v`, as a polynomial with the
    /// `v`-exponent zeroed out.
    pub fn coeff_of(&self, v: VarId, k: i32) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[v] == k {
                let mut ne = e.clone();
                ne[v] = 0;
                out.add_term(ne, c.clone());
            }
        }
        out
    }

    /// Weighted degrees of all terms under the grading `weights`.
    pub fn weighted_degrees(&self, weights: &[i64]) -> BTreeSet<i64> {
        assert_eq!(weights.len(), self.vars.count());
        self.terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(&x, &w)| x as i64 * w).sum())
            .collect()
    }

    /// True if all terms share one weighted degree (or the poly is zero).
    pub fn is_homogeneous(&self, weights: &[i64]) -> bool {
        self.weighted_degrees(weights).len() <= 1
    }

    /// Map this polynomial into another ring by variable name. Every
    /// variable that actually occurs must exist in the target table.
    pub fn rename_into(&self, target: &Arc<VarTable>) -> Result<Poly, String> {
        let mut map: Vec<Option<VarId>> = Vec::with_capacity(self.vars.count());
        for v in 0..self.vars.count() {
            map.push(target.id(self.vars.name(v)));
        }
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.count()];
            for (v, &ev) in e.iter().enumerate() {
                if ev == 0 {
                    continue;
                }
                match map[v] {
                    Some(tv) => ne[tv] = ev,
                    None => {
                        return Err(format!(
                            "variable {} has no counterpart in the target ring",
                            self.vars.name(v)
                        ))
                    }
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Serialization-friendly view: sorted `(exponents, coefficient)` rows.
    pub fn sorted_terms(&self) -> Vec<(Expo, String)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), rat_str(c)))
            .collect()
    }
}

/// Exact division of Laurent polynomials. Strips the common monomial
/// content first, then runs term-by-term division; returns `None` when the
/// quotient does not exist in the ring.
pub fn div_exact(num: &Poly, den: &Poly) -> Option<Poly> {
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some(Poly::zero(num.vars()));
    }
    let vars = num.vars();
    let n = vars.count();
    let shift_of = |p: &Poly| -> Expo {
        let mut s = vec![i32::MAX; n];
        for (e, _) in p.terms() {
            for (v, &ev) in e.iter().enumerate() {
                s[v] = s[v].min(ev);
            }
        }
        s
    };
    let num_shift = shift_of(num);
    let den_shift = shift_of(den);
    let unshift = |p: &Poly, s: &Expo| -> Poly {
        let neg: Expo = s.iter().map(|x| -x).collect();
        let mut out = Poly::zero(vars);
        for (e, c) in p.terms() {
            let ne: Expo = e.iter().zip(&neg).map(|(x, y)| x + y).collect();
            out = out.add(&Poly {
                vars: Arc::clone(vars),
                terms: BTreeMap::from([(ne, c.clone())]),
            });
        }
        out
    };
    let a = unshift(num, &num_shift);
    let b = unshift(den, &den_shift);

    // Ordinary division in the plain polynomial ring, leading terms in the
    // map order (lex on exponent vectors).
    let (lead_e, lead_c) = b.terms().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
    let mut rem = a;
    let mut quo: Vec<(Expo, Rat)> = Vec::new();
    while !rem.is_zero() {
        let (re, rc) = rem
            .terms()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
            .unwrap();
        let te: Expo = re.iter().zip(&lead_e).map(|(x, y)| x - y).collect();
        if te.iter().any(|&x| x < 0) {
            return None;
        }
        let tc = rc / lead_c.clone();
        rem = rem.sub(&b.mul_term(&te, &tc));
        quo.push((te, tc));
    }
    // Reapply the monomial shift; bail out if it would take a plain
    // variable negative.
    let mut out = Poly::zero(vars);
    for (e, c) in quo {
        let ne: Expo = e
            .iter()
            .zip(num_shift.iter().zip(&den_shift))
            .map(|(x, (ns, ds))| x + ns - ds)
            .collect();
        if ne
            .iter()
            .enumerate()
            .any(|(v, &x)| x < 0 && !vars.is_invertible(v))
        {
            return None;
        }
        out = out.add(&Poly::monomial(vars, ne, c));
    }
    Some(out)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mut factors: Vec<String> = Vec::new();
            for (v, &ev) in e.iter().enumerate() {
                match ev {
                    0 => {}
                    1 => factors.push(self.vars.name(v).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(v), ev)),
                }
            }
            let abs = c.abs();
            let lead = if factors.is_empty() {
                rat_str(&abs)
            } else if abs.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", rat_str(&abs), factors.join("*"))
            };
            if first {
                if c.is_negative() {
                    write!(f, "-{lead}")?;
                } else {
                    write!(f, "{lead}")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - {lead}")?;
            } else {
                write!(f, " + {lead}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rint;

    fn ring() -> Arc<VarTable> {
        let mut t = VarTable::new();
        t.add("x", false);
        t.add("z", true);
        Arc::new(t)
    }

    #[test]
    fn arithmetic_and_normalization() {
        let vars = ring();
        let x = Poly::var(&vars, 0);
        let z = Poly::var(&vars, 1);
        let p = x.add(&z).mul(&x.sub(&z));
        let expect = x.mul(&x).sub(&z.mul(&z));
        assert_eq!(p, expect);
        assert!(p.sub(&expect).is_zero());
    }

    #[test]
    fn laurent_exponents_allowed_only_on_invertible() {
        let vars = ring();
        let zi = Poly::monomial(&vars, vec![0, -3], rint(2));
        assert_eq!(zi.min_exp(1), Some(-3));
        let bad = std::panic::catch_unwind(|| Poly::monomial(&ring(), vec![-1, 0], rint(1)));
        assert!(bad.is_err());
    }

    #[test]
    fn exact_division() {
        let vars = ring();
        let x = Poly::var(&vars, 0);
        let z = Poly::var(&vars, 1);
        let a = x.add(&z);
        let b = x.sub(&z);
        let prod = a.mul(&b);
        assert_eq!(div_exact(&prod, &a).unwrap(), b);
        assert_eq!(div_exact(&prod, &b).unwrap(), a);
        assert!(div_exact(&a, &b).is_none());
        // Laurent content: (z^-1 x + 1) divides x + z exactly.
        let lp = Poly::monomial(&vars, vec![1, -1], rint(1)).add(&Poly::one(&vars));
        let q = div_exact(&a, &lp).unwrap();
        assert_eq!(q, z);
    }

    #[test]
    fn euler_and_eval() {
        let vars = ring();
        let p = Poly::monomial(&vars, vec![2, -1], rint(3));
        assert_eq!(p.euler(0), p.scale(&rint(2)));
        assert_eq!(p.euler(1), p.scale(&rint(-1)));
        let assign = BTreeMap::from([(0, rint(2)), (1, rint(4))]);
        assert_eq!(p.eval(&assign), rint(3));
    }
}
