//! Small quantum multiplication on coset classes, the associated flat
//! connection matrices, and their reduction to a single scalar operator.
//!
//! Everything is built over one polynomial ring in the deformation
//! parameters `q_1..q_k` (invertible), the equivariant parameters
//! `h_1..h_r`, and the loop variable `hbar`. The multiplication table is
//! checked against frozen small cases and structural constraints at
//! construction time, so a model that constructs at all is trustworthy.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::frac::Frac;
use crate::matrix::{express_in_span, shared_table, Matrix};
use crate::poly::{Expo, Poly, VarId, VarTable};
use crate::scalar::Rat;
use crate::weyl::{pairing, Parabolic, Weight, WeylElt};

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("multiplication self-check failed: {0}")]
    Oracle(String),
    #[error("scalar reduction needs exactly one deformation direction, found {0}")]
    NotCyclic(usize),
    #[error("no linear dependence among derivatives up to order {0}")]
    NoClosure(usize),
}

/// How the equivariant parameters are treated in a computation.
#[derive(Debug, Clone)]
pub enum HMode {
    Zero,
    Symbolic,
    Rational(Vec<Rat>),
}

/// Multiplication operators and connection matrices for one parabolic
/// quotient, over exact polynomial entries.
pub struct QuantumModel {
    par: Parabolic,
    vars: Arc<VarTable>,
    basis: Vec<WeylElt>,
    q_ids: Vec<VarId>,
    h_ids: Vec<VarId>,
    hbar_id: VarId,
    sigma: Vec<Matrix<Poly>>,
}

impl QuantumModel {
    pub fn new(par: Parabolic) -> Result<Self, QuantumError> {
        let rank = par.rank();
        let k = par.quantum_count();
        let mut q_ids = Vec::new();
        let mut h_ids = Vec::new();
        let mut hbar_id = 0;
        let vars = shared_table(|t| {
            for i in 1..=k {
                q_ids.push(t.add(&format!("q_{i}"), true));
            }
            for j in 1..=rank {
                h_ids.push(t.add(&format!("h_{j}"), false));
            }
            hbar_id = t.add("hbar", false);
        });
        let basis = par.min_reps();
        let index: BTreeMap<WeylElt, usize> = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let complement = par.complement_roots();
        let drops: Vec<i64> = complement
            .iter()
            .map(|alpha| {
                complement
                    .iter()
                    .map(|beta| pairing(&beta.root, &alpha.coroot))
                    .sum()
            })
            .collect();

        let mut sigma = Vec::with_capacity(k);
        for qi in 0..k {
            let j = par.quantum_roots()[qi];
            let omega = Weight::fundamental(rank, j);
            let mut m = Matrix::zero(basis.len(), basis.len(), &Poly::zero(&vars));
            for (col, v) in basis.iter().enumerate() {
                let diag = omega.sub(&v.act_weight(&omega));
                *m.at_mut(col, col) = linear_in_h(&vars, &h_ids, &diag);
                for (alpha, &drop) in complement.iter().zip(&drops) {
                    let coeff = pairing(&omega, &alpha.coroot);
                    if coeff == 0 {
                        continue;
                    }
                    let t = v.mul(&alpha.refl);
                    let proj = par.project(&t);
                    if proj == t && t.length() == v.length() + 1 {
                        let row = index[&t];
                        *m.at_mut(row, col) = m
                            .at(row, col)
                            .add(&Poly::constant(&vars, Rat::from_integer(coeff.into())));
                    }
                    if proj.length() as i64 == v.length() as i64 + 1 - drop {
                        let row = index[&proj];
                        let class = par.coroot_class(&alpha.coroot);
                        let mono = q_monomial(&vars, &q_ids, &class)
                            .scale(&Rat::from_integer(coeff.into()));
                        *m.at_mut(row, col) = m.at(row, col).add(&mono);
                    }
                }
            }
            sigma.push(m);
        }

        let model = QuantumModel {
            par,
            vars,
            basis,
            q_ids,
            h_ids,
            hbar_id,
            sigma,
        };
        model.self_check().map_err(QuantumError::Oracle)?;
        Ok(model)
    }

    pub fn parabolic(&self) -> &Parabolic {
        &self.par
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn basis(&self) -> &[WeylElt] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn q_ids(&self) -> &[VarId] {
        &self.q_ids
    }

    pub fn h_ids(&self) -> &[VarId] {
        &self.h_ids
    }

    pub fn hbar_id(&self) -> VarId {
        self.hbar_id
    }

    /// Matrix of multiplication by the i-th degree-two generator class
    /// (1-based), columns indexed by the coset basis.
    pub fn sigma_matrix(&self, i: usize) -> &Matrix<Poly> {
        &self.sigma[i - 1]
    }

    /// Connection matrix in the i-th deformation direction: the
    /// multiplication operator shifted by the scalar ω_{j_i}(h).
    pub fn connection_matrix(&self, i: usize) -> Matrix<Poly> {
        let j = self.par.quantum_roots()[i - 1];
        let omega = Weight::fundamental(self.par.rank(), j);
        let shift = linear_in_h(&self.vars, &self.h_ids, &omega);
        let id = Matrix::identity(self.dim(), &Poly::zero(&self.vars));
        self.sigma[i - 1].sub(&id.scale(&shift))
    }

    /// Specialize the equivariant parameters of a matrix.
    pub fn specialize_h(&self, m: &Matrix<Poly>, mode: &HMode) -> Matrix<Poly> {
        let assign = match mode {
            HMode::Symbolic => return m.clone(),
            HMode::Zero => self
                .h_ids
                .iter()
                .map(|&v| (v, Rat::zero()))
                .collect::<BTreeMap<_, _>>(),
            HMode::Rational(vals) => {
                assert_eq!(vals.len(), self.h_ids.len());
                self.h_ids
                    .iter()
                    .zip(vals)
                    .map(|(&v, c)| (v, c.clone()))
                    .collect()
            }
        };
        m.map(|p| p.eval_partial(&assign))
    }

    /// Evaluate a polynomial matrix at rational parameter values; `hbar`
    /// is sent to zero, which is immaterial for connection matrices.
    pub fn eval_matrix(&self, m: &Matrix<Poly>, q: &[Rat], h: &[Rat]) -> Matrix<Rat> {
        assert_eq!(q.len(), self.q_ids.len());
        assert_eq!(h.len(), self.h_ids.len());
        let mut assign = BTreeMap::new();
        for (&v, c) in self.q_ids.iter().zip(q) {
            assign.insert(v, c.clone());
        }
        for (&v, c) in self.h_ids.iter().zip(h) {
            assign.insert(v, c.clone());
        }
        assign.insert(self.hbar_id, Rat::zero());
        m.map(|p| p.eval(&assign))
    }

    /// Zero-curvature conditions: all connection matrices commute, and
    /// the scaled partials match across directions.
    pub fn flatness_check(&self) -> Result<(), String> {
        let k = self.q_ids.len();
        let mats: Vec<Matrix<Poly>> = (1..=k).map(|i| self.connection_matrix(i)).collect();
        for i in 0..k {
            for j in i + 1..k {
                let comm = mats[i].mul(&mats[j]).sub(&mats[j].mul(&mats[i]));
                if !comm.is_zero_matrix() {
                    return Err(format!(
                        "connection matrices {} and {} do not commute",
                        i + 1,
                        j + 1
                    ));
                }
                let dij = mats[j].map(|p| p.euler(self.q_ids[i]));
                let dji = mats[i].map(|p| p.euler(self.q_ids[j]));
                if !dij.sub(&dji).is_zero_matrix() {
                    return Err(format!(
                        "scaled partials of directions {} and {} disagree",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        Ok(())
    }

    /// Reduce the connection to a monic scalar operator in the single
    /// deformation direction by iterating it on the unit class.
    pub fn cyclic_ode(&self, mode: &HMode) -> Result<Ode, QuantumError> {
        if self.q_ids.len() != 1 {
            return Err(QuantumError::NotCyclic(self.q_ids.len()));
        }
        let d = self.specialize_h(&self.connection_matrix(1), mode);
        let q = self.q_ids[0];
        let hbar = Poly::var(&self.vars, self.hbar_id);
        let n = self.dim();

        let mut unit = vec![Poly::zero(&self.vars); n];
        unit[0] = Poly::one(&self.vars);
        let mut iterates: Vec<Vec<Poly>> = vec![unit];
        for order in 1..=n {
            let prev = iterates.last().unwrap();
            let mut next = d.mul_vec(prev);
            for (comp, prev_comp) in next.iter_mut().zip(prev) {
                *comp = comp.add(&prev_comp.euler(q).mul(&hbar));
            }
            let span: Vec<Vec<Frac>> = iterates
                .iter()
                .map(|s| s.iter().map(|p| Frac::from_poly(p.clone())).collect())
                .collect();
            let target: Vec<Frac> = next.iter().map(|p| Frac::from_poly(p.clone())).collect();
            if let Some(c) = express_in_span(&span, &target) {
                debug_assert_eq!(c.len(), order);
                let mut coeffs: Vec<Frac> = c.iter().map(|x| x.neg()).collect();
                coeffs.push(Frac::one(&self.vars));
                return Ok(Ode {
                    vars: self.vars.clone(),
                    coeffs,
                });
            }
            iterates.push(next);
        }
        Err(QuantumError::NoClosure(n))
    }

    fn self_check(&self) -> Result<(), String> {
        let rank = self.par.rank();
        let mut weights = vec![0i64; self.vars.count()];
        for (i, &v) in self.q_ids.iter().enumerate() {
            weights[v] = self.par.quantum_degree(i + 1);
        }
        for &v in &self.h_ids {
            weights[v] = 2;
        }
        weights[self.hbar_id] = 2;

        for (qi, m) in self.sigma.iter().enumerate() {
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    let entry = m.at(r, c);
                    if entry.is_zero() {
                        continue;
                    }
                    let want =
                        2 + 2 * self.basis[c].length() as i64 - 2 * self.basis[r].length() as i64;
                    let degs = entry.weighted_degrees(&weights);
                    if degs.len() != 1 || !degs.contains(&want) {
                        return Err(format!(
                            "direction {} entry ({r},{c}) is not homogeneous of degree {want}",
                            qi + 1
                        ));
                    }
                }
            }
        }

        let vars = &self.vars;
        let h = |j: usize| Poly::var(vars, self.h_ids[j - 1]);
        let q1 = Poly::var(vars, self.q_ids[0]);

        if rank == 1 && self.par.levi().is_empty() {
            let expect = Matrix::from_rows(vec![
                vec![Poly::zero(vars), q1.clone()],
                vec![Poly::one(vars), h(1).scale(&Rat::from_integer(2.into()))],
            ]);
            if self.sigma[0] != expect {
                return Err("rank-1 multiplication table differs from the pinned one".into());
            }
        }
        if rank == 2 && self.par.levi() == [2] {
            let expect = Matrix::from_rows(vec![
                vec![Poly::zero(vars), Poly::zero(vars), q1.clone()],
                vec![
                    Poly::one(vars),
                    h(1).scale(&Rat::from_integer(2.into())).sub(&h(2)),
                    Poly::zero(vars),
                ],
                vec![Poly::zero(vars), Poly::one(vars), h(1).add(&h(2))],
            ]);
            if self.sigma[0] != expect {
                return Err("projective-plane multiplication table differs from the pinned one".into());
            }
        }

        // Power identities for the generator class at h = 0.
        if self.q_ids.len() == 1 {
            let power = match (rank, self.par.levi()) {
                (1, l) if l.is_empty() => Some(2u32),
                (2, l) if l == [2] || l == [1] => Some(3u32),
                _ => None,
            };
            if let Some(p) = power {
                let at0 = self.specialize_h(&self.sigma[0], &HMode::Zero);
                let id = Matrix::identity(self.dim(), &Poly::zero(vars));
                if at0.pow(p) != id.scale(&q1) {
                    return Err(format!(
                        "generator power {p} does not reproduce the deformation parameter"
                    ));
                }
            }
        }
        Ok(())
    }
}

fn linear_in_h(vars: &Arc<VarTable>, h_ids: &[VarId], w: &Weight) -> Poly {
    let mut out = Poly::zero(vars);
    for (&v, &c) in h_ids.iter().zip(&w.0) {
        if c != 0 {
            out = out.add(&Poly::var(vars, v).scale(&Rat::from_integer(c.into())));
        }
    }
    out
}

fn q_monomial(vars: &Arc<VarTable>, q_ids: &[VarId], class: &[i64]) -> Poly {
    let mut expo: Expo = vec![0; vars.count()];
    for (&v, &e) in q_ids.iter().zip(class) {
        expo[v] = i32::try_from(e).expect("deformation exponent fits in i32");
    }
    Poly::monomial(vars, expo, Rat::one())
}

/// Monic scalar operator `D^m + c_{m-1} D^{m-1} + ... + c_0` with exact
/// rational-function coefficients.
#[derive(Clone)]
pub struct Ode {
    vars: Arc<VarTable>,
    coeffs: Vec<Frac>,
}

impl Ode {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients, ending in the leading 1.
    pub fn coeffs(&self) -> &[Frac] {
        &self.coeffs
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn from_parts(vars: Arc<VarTable>, coeffs: Vec<Frac>) -> Self {
        assert!(!coeffs.is_empty());
        Ode { vars, coeffs }
    }

    /// Map the coefficients into another ring by variable name.
    pub fn renamed_into(&self, target: &Arc<VarTable>) -> Result<Ode, String> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|f| {
                Ok(Frac::new(
                    f.num().rename_into(target)?,
                    f.den().rename_into(target)?,
                ))
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Ode {
            vars: target.clone(),
            coeffs,
        })
    }
}

/// True when the two operators agree coefficientwise after translating
/// the second into the ring of the first.
pub fn same_equation(a: &Ode, b: &Ode) -> Result<bool, String> {
    if a.order() != b.order() {
        return Ok(false);
    }
    let b = b.renamed_into(&a.vars)?;
    Ok(a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| x == y))
}

impl fmt::Display for Ode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.order();
        write!(f, "D^{m}")?;
        for p in (0..m).rev() {
            let c = &self.coeffs[p];
            if c.is_zero() {
                continue;
            }
            if p == 0 {
                write!(f, " + ({c})")?;
            } else {
                write!(f, " + ({c})*D^{p}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::RootSystem;

    fn model(rank: usize, levi: &[usize]) -> QuantumModel {
        let par = Parabolic::new(RootSystem::new("A", rank).unwrap(), levi).unwrap();
        QuantumModel::new(par).unwrap()
    }

    #[test]
    fn rank_one_connection_and_ode() {
        let m = model(1, &[]);
        assert_eq!(m.dim(), 2);
        let ode = m.cyclic_ode(&HMode::Zero).unwrap();
        assert_eq!(ode.order(), 2);
        // D^2 - q: constant coefficient is -q_1, middle one vanishes.
        let q = Poly::var(m.vars(), m.q_ids()[0]);
        assert_eq!(ode.coeffs()[0], Frac::from_poly(q.neg()));
        assert!(ode.coeffs()[1].is_zero());

        let sym = m.cyclic_ode(&HMode::Symbolic).unwrap();
        let h = Poly::var(m.vars(), m.h_ids()[0]);
        let expect = q.add(&h.mul(&h)).neg();
        assert_eq!(sym.coeffs()[0], Frac::from_poly(expect));
        assert!(sym.coeffs()[1].is_zero());
    }

    #[test]
    fn projective_plane_ode() {
        let m = model(2, &[2]);
        assert_eq!(m.dim(), 3);
        let ode = m.cyclic_ode(&HMode::Zero).unwrap();
        assert_eq!(ode.order(), 3);
        let q = Poly::var(m.vars(), m.q_ids()[0]);
        assert_eq!(ode.coeffs()[0], Frac::from_poly(q.neg()));
        assert!(ode.coeffs()[1].is_zero());
        assert!(ode.coeffs()[2].is_zero());
    }

    #[test]
    fn full_flag_rank_two_flatness() {
        let m = model(2, &[]);
        assert_eq!(m.dim(), 6);
        assert_eq!(m.q_ids().len(), 2);
        m.flatness_check().unwrap();
    }

    #[test]
    fn rank_three_cases_construct() {
        for levi in [vec![], vec![2], vec![3], vec![2, 3]] {
            let m = model(3, &levi);
            m.flatness_check().unwrap();
        }
    }

    #[test]
    fn connection_diagonal_is_shifted_weight() {
        let m = model(2, &[2]);
        let d = m.connection_matrix(1);
        // Unit-class diagonal entry is -omega(h) = -h_1.
        let h1 = Poly::var(m.vars(), m.h_ids()[0]);
        assert_eq!(*d.at(0, 0), h1.neg());
    }

    #[test]
    fn grading_check_catches_corruption() {
        let par = Parabolic::new(RootSystem::new("A", 1).unwrap(), &[]).unwrap();
        let m = QuantumModel::new(par).unwrap();
        let mut broken = m;
        // Sneak a constant into an off-degree slot and rerun the check.
        let one = Poly::one(&broken.vars);
        *broken.sigma[0].at_mut(1, 1) = one;
        assert!(broken.self_check().is_err());
    }

    #[test]
    fn ode_display_and_rename() {
        let m = model(1, &[]);
        let ode = m.cyclic_ode(&HMode::Zero).unwrap();
        let shown = format!("{ode}");
        assert!(shown.starts_with("D^2"));
        let other = shared_table(|t| {
            t.add("z", true);
            t.add("q_1", true);
            t.add("h_1", false);
            t.add("hbar", false);
        });
        let moved = ode.renamed_into(&other).unwrap();
        assert!(same_equation(&moved, &ode).unwrap());
    }
}
