//! Buchberger's algorithm over the rationals, with Laurent variables
//! handled through companion inverses, plus zero-dimensional quotient
//! rings with standard-monomial bases and multiplication matrices.
//!
//! Every reduction step counts against a configurable budget so that a
//! runaway computation surfaces as an error instead of a hang. The budget
//! can be set per call, through `FLAGMIRROR_STEP_BUDGET`, or defaults to
//! ten million steps.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::matrix::Matrix;
use crate::poly::{Expo, Poly, VarId, VarTable};
use crate::scalar::Rat;

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;
pub const STEP_BUDGET_ENV: &str = "FLAGMIRROR_STEP_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
}

#[derive(Debug, Clone)]
pub struct GrobnerConfig {
    pub order: MonomialOrder,
    pub step_budget: u64,
}

impl GrobnerConfig {
    pub fn new(order: MonomialOrder, step_budget: Option<u64>) -> Self {
        let step_budget = step_budget
            .or_else(|| {
                std::env::var(STEP_BUDGET_ENV)
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(DEFAULT_STEP_BUDGET);
        GrobnerConfig { order, step_budget }
    }
}

impl Default for GrobnerConfig {
    fn default() -> Self {
        GrobnerConfig::new(MonomialOrder::GrevLex, None)
    }
}

#[derive(Debug, Error)]
pub enum SymbolicError {
    #[error("step budget exceeded ({steps} steps) while {context}")]
    BudgetExceeded { steps: u64, context: String },
    #[error("not zero-dimensional: {0}")]
    NotZeroDimensional(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

fn total_degree(e: &Expo) -> i64 {
    e.iter().map(|&x| x as i64).sum()
}

/// Strict comparison of exponent vectors under the given order. All
/// exponents are assumed nonnegative (model ring).
pub fn cmp_expo(order: MonomialOrder, a: &Expo, b: &Expo) -> Ordering {
    match order {
        MonomialOrder::Lex => a.cmp(b),
        MonomialOrder::GrevLex => {
            let (da, db) = (total_degree(a), total_degree(b));
            if da != db {
                return da.cmp(&db);
            }
            for (x, y) in a.iter().zip(b).rev() {
                match x.cmp(y) {
                    Ordering::Equal => {}
                    // Smaller exponent on the rightmost differing variable
                    // means the larger monomial.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                }
            }
            Ordering::Equal
        }
    }
}

fn divides(d: &Expo, e: &Expo) -> bool {
    d.iter().zip(e).all(|(a, b)| a <= b)
}

/// Translation between a ring with invertible variables and its plain
/// polynomial model, where each invertible variable `x` gets a companion
/// `x·x__inv = 1`. Companions come first in the model table so that the
/// graded order prefers to eliminate them, keeping standard monomials
/// expressed in the original variables.
#[derive(Debug, Clone)]
pub struct LaurentModel {
    source: Arc<VarTable>,
    model: Arc<VarTable>,
    /// Model id of each source variable.
    forward: Vec<VarId>,
    /// `(source var, model id of its companion)`.
    companions: Vec<(VarId, VarId)>,
}

impl LaurentModel {
    pub fn new(source: &Arc<VarTable>) -> Self {
        let mut model = VarTable::new();
        let mut companions = Vec::new();
        for v in 0..source.count() {
            if source.is_invertible(v) {
                let c = model.add(&format!("{}__inv", source.name(v)), false);
                companions.push((v, c));
            }
        }
        let mut forward = Vec::with_capacity(source.count());
        for v in 0..source.count() {
            forward.push(model.add(source.name(v), false));
        }
        LaurentModel {
            source: Arc::clone(source),
            model: Arc::new(model),
            forward,
            companions,
        }
    }

    pub fn source_vars(&self) -> &Arc<VarTable> {
        &self.source
    }

    pub fn model_vars(&self) -> &Arc<VarTable> {
        &self.model
    }

    pub fn to_model(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(&self.model);
        for (e, c) in f.terms() {
            let mut ne = vec![0; self.model.count()];
            for (v, &ev) in e.iter().enumerate() {
                if ev >= 0 {
                    ne[self.forward[v]] = ev;
                } else {
                    let comp = self
                        .companions
                        .iter()
                        .find(|(s, _)| *s == v)
                        .map(|(_, c)| *c)
                        .expect("negative exponent on a plain variable");
                    ne[comp] = -ev;
                }
            }
            out = out.add(&Poly::monomial(&self.model, ne, c.clone()));
        }
        out
    }

    /// Push a model polynomial back to the source ring, sending each
    /// companion to the corresponding negative power.
    pub fn from_model(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(&self.source);
        for (e, c) in f.terms() {
            let mut ne = vec![0; self.source.count()];
            for (v, &mv) in self.forward.iter().enumerate() {
                ne[v] += e[mv];
            }
            for &(v, comp) in &self.companions {
                ne[v] -= e[comp];
            }
            out = out.add(&Poly::monomial(&self.source, ne, c.clone()));
        }
        out
    }

    pub fn companion_relations(&self) -> Vec<Poly> {
        self.companions
            .iter()
            .map(|&(v, comp)| {
                let mut e = vec![0; self.model.count()];
                e[self.forward[v]] = 1;
                e[comp] = 1;
                Poly::monomial(&self.model, e, Rat::one())
                    .sub(&Poly::one(&self.model))
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct GbElem {
    p: Poly,
    lt: Expo,
    lc: Rat,
}

fn leading(p: &Poly, order: MonomialOrder) -> Option<(Expo, Rat)> {
    let mut best: Option<(&Expo, &Rat)> = None;
    for (e, c) in p.terms() {
        best = match best {
            None => Some((e, c)),
            Some((be, bc)) => {
                if cmp_expo(order, e, be) == Ordering::Greater {
                    Some((e, c))
                } else {
                    Some((be, bc))
                }
            }
        };
    }
    best.map(|(e, c)| (e.clone(), c.clone()))
}

struct Budget {
    used: u64,
    limit: u64,
    context: &'static str,
}

impl Budget {
    fn spend(&mut self, n: u64) -> Result<(), SymbolicError> {
        self.used += n;
        if self.used > self.limit {
            Err(SymbolicError::BudgetExceeded {
                steps: self.used,
                context: self.context.to_string(),
            })
        } else {
            Ok(())
        }
    }
}

fn normal_form(
    f: &Poly,
    basis: &[GbElem],
    order: MonomialOrder,
    budget: &mut Budget,
) -> Result<Poly, SymbolicError> {
    let mut work = f.clone();
    let mut rem = Poly::zero(work.vars());
    'outer: while let Some((e, c)) = leading(&work, order) {
        for g in basis {
            if divides(&g.lt, &e) {
                budget.spend(1)?;
                let t: Expo = e.iter().zip(&g.lt).map(|(a, b)| a - b).collect();
                let k = c.clone() / g.lc.clone();
                work = work.sub(&g.p.mul_term(&t, &k));
                continue 'outer;
            }
        }
        let mono = Poly::monomial(work.vars(), e, c);
        work = work.sub(&mono);
        rem = rem.add(&mono);
    }
    Ok(rem)
}

#[derive(Debug, Clone)]
pub struct GrobnerResult {
    pub model: LaurentModel,
    pub order: MonomialOrder,
    /// Reduced basis, monic, sorted by leading term.
    pub basis: Vec<Poly>,
}

/// Reduced Groebner basis of the ideal generated by `gens` (plus the
/// companion relations when invertible variables are present).
pub fn groebner_basis(
    gens: &[Poly],
    cfg: &GrobnerConfig,
) -> Result<GrobnerResult, SymbolicError> {
    assert!(!gens.is_empty(), "no generators");
    let model = LaurentModel::new(gens[0].vars());
    let mut budget = Budget {
        used: 0,
        limit: cfg.step_budget,
        context: "computing a Groebner basis",
    };

    let mut basis: Vec<GbElem> = Vec::new();
    let mut queue: Vec<Poly> = model
        .companion_relations()
        .into_iter()
        .chain(gens.iter().map(|g| model.to_model(g)))
        .collect();
    // Pairs are processed smallest lcm first (normal selection).
    let mut pairs: BTreeSet<(i64, Expo, usize, usize)> = BTreeSet::new();

    let push = |p: Poly,
                    basis: &mut Vec<GbElem>,
                    pairs: &mut BTreeSet<(i64, Expo, usize, usize)>,
                    order: MonomialOrder| {
        if p.is_zero() {
            return;
        }
        let (lt, lc) = leading(&p, order).unwrap();
        let monic = p.scale(&lc.recip());
        let idx = basis.len();
        for (j, g) in basis.iter().enumerate() {
            let lcm: Expo = lt.iter().zip(&g.lt).map(|(a, b)| *a.max(b)).collect();
            // Product criterion: coprime leading terms give a useless pair.
            if lt.iter().zip(&g.lt).any(|(a, b)| *a > 0 && *b > 0) {
                pairs.insert((total_degree(&lcm), lcm, j, idx));
            }
        }
        basis.push(GbElem {
            p: monic,
            lt,
            lc: Rat::one(),
        });
    };

    for g in queue.drain(..) {
        let nf = normal_form(&g, &basis, cfg.order, &mut budget)?;
        push(nf, &mut basis, &mut pairs, cfg.order);
    }

    while let Some(entry) = pairs.iter().next().cloned() {
        pairs.remove(&entry);
        let (_, lcm, i, j) = entry;
        budget.spend(1)?;
        let (gi, gj) = (&basis[i], &basis[j]);
        let ti: Expo = lcm.iter().zip(&gi.lt).map(|(a, b)| a - b).collect();
        let tj: Expo = lcm.iter().zip(&gj.lt).map(|(a, b)| a - b).collect();
        let s = gi
            .p
            .mul_term(&ti, &Rat::one())
            .sub(&gj.p.mul_term(&tj, &Rat::one()));
        let nf = normal_form(&s, &basis, cfg.order, &mut budget)?;
        push(nf, &mut basis, &mut pairs, cfg.order);
    }

    // Inter-reduce to the unique reduced basis.
    let mut polys: Vec<Poly> = basis.iter().map(|g| g.p.clone()).collect();
    loop {
        let mut changed = false;
        let mut next: Vec<Poly> = Vec::with_capacity(polys.len());
        for i in 0..polys.len() {
            let others: Vec<GbElem> = polys
                .iter()
                .enumerate()
                .filter(|(j, p)| *j != i && !p.is_zero())
                .map(|(_, p)| {
                    let (lt, lc) = leading(p, cfg.order).unwrap();
                    GbElem {
                        p: p.clone(),
                        lt,
                        lc,
                    }
                })
                .collect();
            let nf = normal_form(&polys[i], &others, cfg.order, &mut budget)?;
            if nf != polys[i] {
                changed = true;
            }
            next.push(nf);
        }
        polys = next.into_iter().filter(|p| !p.is_zero()).collect();
        if !changed {
            break;
        }
    }
    let mut reduced: Vec<Poly> = polys
        .into_iter()
        .map(|p| {
            let (_, lc) = leading(&p, cfg.order).unwrap();
            p.scale(&lc.recip())
        })
        .collect();
    reduced.sort_by(|a, b| {
        let (la, _) = leading(a, cfg.order).unwrap();
        let (lb, _) = leading(b, cfg.order).unwrap();
        cmp_expo(cfg.order, &la, &lb)
    });
    reduced.dedup();

    Ok(GrobnerResult {
        model,
        order: cfg.order,
        basis: reduced,
    })
}

/// Zero-dimensional quotient ring with a standard-monomial basis.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    model: LaurentModel,
    order: MonomialOrder,
    basis: Vec<GbElem>,
    monomials: Vec<Expo>,
    step_budget: u64,
}

/// Groebner basis plus the standard-monomial data; errors if the ideal is
/// not zero-dimensional over the model ring.
pub fn quotient_ring(
    gens: &[Poly],
    cfg: &GrobnerConfig,
) -> Result<QuotientRing, SymbolicError> {
    let gr = groebner_basis(gens, cfg)?;
    QuotientRing::from_basis(gr, cfg.step_budget)
}

impl QuotientRing {
    pub fn from_basis(gr: GrobnerResult, step_budget: u64) -> Result<Self, SymbolicError> {
        let order = gr.order;
        let basis: Vec<GbElem> = gr
            .basis
            .iter()
            .map(|p| {
                let (lt, lc) = leading(p, order).unwrap();
                GbElem {
                    p: p.clone(),
                    lt,
                    lc,
                }
            })
            .collect();
        let nvars = gr.model.model_vars().count();
        if basis.iter().any(|g| g.p.as_constant().is_some()) {
            // The ideal is the whole ring; the quotient is zero, which we
            // treat as degenerate for this crate's purposes.
            return Err(SymbolicError::Degenerate(
                "ideal contains a nonzero constant; the quotient ring is zero".into(),
            ));
        }
        let mut caps = vec![None::<i32>; nvars];
        for g in &basis {
            let support: Vec<usize> = g
                .lt
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, _)| v)
                .collect();
            if support.len() == 1 {
                let v = support[0];
                let d = g.lt[v];
                caps[v] = Some(caps[v].map_or(d, |c: i32| c.min(d)));
            }
        }
        for (v, cap) in caps.iter().enumerate() {
            if cap.is_none() {
                return Err(SymbolicError::NotZeroDimensional(format!(
                    "no leading term is a pure power of {}",
                    gr.model.model_vars().name(v)
                )));
            }
        }
        let caps: Vec<i32> = caps.into_iter().map(Option::unwrap).collect();
        let mut monomials: Vec<Expo> = Vec::new();
        let mut current = vec![0; nvars];
        enumerate_standard(&caps, &basis, &mut current, 0, &mut monomials);
        monomials.sort_by(|a, b| {
            (total_degree(a), a.clone()).cmp(&(total_degree(b), b.clone()))
        });
        Ok(QuotientRing {
            model: gr.model,
            order,
            basis,
            monomials,
            step_budget,
        })
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn model(&self) -> &LaurentModel {
        &self.model
    }

    pub fn basis_polys(&self) -> Vec<Poly> {
        self.basis.iter().map(|g| g.p.clone()).collect()
    }

    pub fn monomials(&self) -> &[Expo] {
        &self.monomials
    }

    pub fn monomial_strings(&self) -> Vec<String> {
        self.monomials
            .iter()
            .map(|e| {
                let p = Poly::monomial(self.model.model_vars(), e.clone(), Rat::one());
                format!("{p}")
            })
            .collect()
    }

    /// Normal form of a source-ring (Laurent) polynomial.
    pub fn reduce(&self, f: &Poly) -> Result<Poly, SymbolicError> {
        let mut budget = Budget {
            used: 0,
            limit: self.step_budget,
            context: "reducing to normal form",
        };
        normal_form(&self.model.to_model(f), &self.basis, self.order, &mut budget)
    }

    /// Coordinates of `f` on the standard-monomial basis.
    pub fn coords(&self, f: &Poly) -> Result<Vec<Rat>, SymbolicError> {
        let nf = self.reduce(f)?;
        let mut out = vec![Rat::zero(); self.monomials.len()];
        for (e, c) in nf.terms() {
            match self.monomials.iter().position(|m| m == e) {
                Some(i) => out[i] = c.clone(),
                None => {
                    return Err(SymbolicError::Degenerate(format!(
                        "normal form left the standard monomial span at {e:?}"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Matrix of multiplication by `f`; column `j` is the image of the
    /// `j`-th standard monomial.
    pub fn mult_matrix(&self, f: &Poly) -> Result<Matrix<Rat>, SymbolicError> {
        let fm = self.model.to_model(f);
        let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(self.dim());
        for m in &self.monomials {
            let prod = fm.mul_term(m, &Rat::one());
            let back = self.model.from_model(&prod);
            cols.push(self.coords(&back)?);
        }
        let rows: Vec<Vec<Rat>> = (0..self.dim())
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Ok(Matrix::from_rows(rows))
    }
}

fn enumerate_standard(
    caps: &[i32],
    basis: &[GbElem],
    current: &mut Expo,
    v: usize,
    out: &mut Vec<Expo>,
) {
    if v == caps.len() {
        if !basis.iter().any(|g| divides(&g.lt, current)) {
            out.push(current.clone());
        }
        return;
    }
    for e in 0..caps[v] {
        current[v] = e;
        enumerate_standard(caps, basis, current, v + 1, out);
    }
    current[v] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain_ring(names: &[&str]) -> Arc<VarTable> {
        let mut t = VarTable::new();
        for n in names {
            t.add(n, false);
        }
        Arc::new(t)
    }

    #[test]
    fn reduced_basis_collapses_redundancy() {
        let vars = plain_ring(&["x"]);
        let x = Poly::var(&vars, 0);
        let one = Poly::one(&vars);
        let gens = vec![x.mul(&x).sub(&one), x.sub(&one)];
        let cfg = GrobnerConfig::new(MonomialOrder::Lex, None);
        let gr = groebner_basis(&gens, &cfg).unwrap();
        assert_eq!(gr.basis, vec![x.sub(&one).rename_into(gr.model.model_vars()).unwrap()]);
    }

    #[test]
    fn linear_ideal_reduces_to_variables() {
        let vars = plain_ring(&["x", "y"]);
        let x = Poly::var(&vars, 0);
        let y = Poly::var(&vars, 1);
        let gens = vec![x.add(&y), x.sub(&y)];
        let gr = groebner_basis(&gens, &GrobnerConfig::default()).unwrap();
        let xm = x.rename_into(gr.model.model_vars()).unwrap();
        let ym = y.rename_into(gr.model.model_vars()).unwrap();
        // Ascending by leading term; under graded reverse lex y sorts
        // below x.
        assert_eq!(gr.basis, vec![ym, xm]);
    }

    #[test]
    fn positive_dimensional_ideal_is_rejected() {
        let vars = plain_ring(&["x", "y"]);
        let gens = vec![Poly::var(&vars, 0)];
        let err = quotient_ring(&gens, &GrobnerConfig::default()).unwrap_err();
        assert!(matches!(err, SymbolicError::NotZeroDimensional(_)));
        assert!(err.to_string().contains("not zero-dimensional"));
    }

    #[test]
    fn budget_is_enforced() {
        let vars = plain_ring(&["x", "y", "z"]);
        let x = Poly::var(&vars, 0);
        let y = Poly::var(&vars, 1);
        let z = Poly::var(&vars, 2);
        let gens = vec![
            x.pow(3).sub(&y.mul(&z).add(&Poly::one(&vars))),
            y.pow(4).sub(&x.mul(&z)),
            z.pow(3).sub(&x.mul(&y).mul(&z).add(&x)),
        ];
        let tight = GrobnerConfig::new(MonomialOrder::GrevLex, Some(5));
        let err = groebner_basis(&gens, &tight).unwrap_err();
        assert!(matches!(err, SymbolicError::BudgetExceeded { .. }));
        assert!(err.to_string().contains("budget exceeded"));
    }
}
