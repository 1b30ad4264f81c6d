//! Fiber algebras of the superpotential, built along two independent
//! routes and compared exactly.
//!
//! Route one starts from a chart: specialize the critical relations at
//! rational deformation and twist values and take the quotient ring.
//! Route two never sees a chart. It carves the same fiber out of the
//! upper triangular matrix model: commutation with a fixed companion
//! matrix, the stratum minor conditions, and one extremal minor
//! equation per stratum character. The distinguished elements on that
//! side come from raising operators applied to a lowest tensor vector,
//! and the superpotential element is recovered through the
//! factorization map, executed over the quotient ring itself.
//!
//! Agreement is checked through characteristic polynomials of
//! multiplication operators, which do not depend on any basis choice.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use thiserror::Error;

use crate::chart::Chart;
use crate::dual::{DomChar, DualModel};
use crate::grobner::{quotient_ring, GrobnerConfig, QuotientRing, SymbolicError};
use crate::matrix::{FieldElem, Matrix, RingElem};
use crate::poly::{Poly, VarTable};
use crate::scalar::{rat_str, rpow, Rat};
use crate::weyl::Parabolic;

#[derive(Debug, Error)]
pub enum JacobiError {
    #[error("bad input: {0}")]
    Input(String),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("matrix-model fiber: {0}")]
    Model(String),
}

fn check_point(par: &Parabolic, q0: &[Rat], h0: &[Rat]) -> Result<(), JacobiError> {
    if q0.len() != par.quantum_count() {
        return Err(JacobiError::Input(format!(
            "expected {} deformation values, got {}",
            par.quantum_count(),
            q0.len()
        )));
    }
    if h0.len() != par.rank() {
        return Err(JacobiError::Input(format!(
            "expected {} twist values, got {}",
            par.rank(),
            h0.len()
        )));
    }
    for (i, q) in q0.iter().enumerate() {
        if q.is_zero() {
            return Err(JacobiError::Input(format!(
                "deformation value {} is zero; the fiber degenerates there",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Element of a zero-dimensional quotient ring, stored as its normal
/// form. Sums and differences of normal forms are again normal forms;
/// products are reduced on the spot. Only rings over plain (not
/// Laurent) variable tables are supported, so normal forms live in the
/// same exponent layout as the source ring.
#[derive(Clone)]
pub struct Residue {
    ring: Arc<QuotientRing>,
    nf: Poly,
}

impl Residue {
    pub fn new(ring: &Arc<QuotientRing>, f: &Poly) -> Result<Residue, SymbolicError> {
        let nf = ring.reduce(f)?;
        Ok(Residue {
            ring: Arc::clone(ring),
            nf,
        })
    }

    /// The normal form, a linear combination of standard monomials.
    pub fn normal_form(&self) -> &Poly {
        &self.nf
    }
}

impl PartialEq for Residue {
    fn eq(&self, other: &Self) -> bool {
        self.nf == other.nf
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.nf)
    }
}

impl RingElem for Residue {
    fn zero_of(&self) -> Self {
        Residue {
            ring: Arc::clone(&self.ring),
            nf: Poly::zero(self.nf.vars()),
        }
    }

    fn one_of(&self) -> Self {
        Residue {
            ring: Arc::clone(&self.ring),
            nf: Poly::one(self.nf.vars()),
        }
    }

    fn from_rat_of(&self, c: &Rat) -> Self {
        Residue {
            ring: Arc::clone(&self.ring),
            nf: Poly::constant(self.nf.vars(), c.clone()),
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        Residue {
            ring: Arc::clone(&self.ring),
            nf: self.nf.add(&other.nf),
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        Residue {
            ring: Arc::clone(&self.ring),
            nf: self.nf.sub(&other.nf),
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let prod = self.nf.mul(&other.nf);
        let nf = self
            .ring
            .reduce(&prod)
            .expect("product reduction stays within the step budget");
        Residue {
            ring: Arc::clone(&self.ring),
            nf,
        }
    }

    fn neg_ref(&self) -> Self {
        Residue {
            ring: Arc::clone(&self.ring),
            nf: self.nf.neg(),
        }
    }

    fn is_zero_elem(&self) -> bool {
        self.nf.is_zero_elem()
    }
}

impl FieldElem for Residue {
    fn inv_ref(&self) -> Option<Self> {
        let dim = self.ring.dim();
        let m = self.ring.mult_matrix(&self.nf).ok()?;
        let mut unit = vec![Rat::zero(); dim];
        // Standard monomials are sorted by degree, so the constant
        // monomial sits first.
        unit[0] = Rat::one();
        let coords = match m.solve(&unit) {
            Some(Ok(c)) => c,
            _ => return None,
        };
        let table = self.nf.vars();
        let mut nf = Poly::zero(table);
        for (mono, c) in self.ring.monomials().iter().zip(&coords) {
            if !c.is_zero() {
                nf = nf.add(&Poly::monomial(table, mono.clone(), c.clone()));
            }
        }
        Some(Residue {
            ring: Arc::clone(&self.ring),
            nf,
        })
    }
}

/// The dominant character whose extreme weight functionals produce the
/// distinguished elements: one fundamental factor `n - j` per marked
/// node `j`, replicated just enough times to land in the root lattice.
pub fn adapted_character(par: &Parabolic) -> DomChar {
    let n = par.n();
    let base: Vec<usize> = par.quantum_roots().iter().map(|&j| n - j).collect();
    let total: usize = base.iter().sum();
    let mut copies = 1;
    while (copies * total) % n != 0 {
        copies += 1;
    }
    let mut factors = Vec::new();
    for _ in 0..copies {
        factors.extend_from_slice(&base);
    }
    DomChar::new(factors, n)
}

/// Route one: the critical fiber of a chart at a rational point,
/// presented by the specialized relations.
pub struct ChartFiber {
    ring: Arc<QuotientRing>,
    w: Poly,
    j: Vec<Poly>,
}

impl ChartFiber {
    pub fn new(chart: &Chart, q0: &[Rat], h0: &[Rat]) -> Result<ChartFiber, JacobiError> {
        let par = chart.parabolic();
        check_point(par, q0, h0)?;
        let mut gens = Vec::with_capacity(chart.relations().len());
        for rel in chart.relations() {
            gens.push(
                chart
                    .specialize_poly(rel, q0, h0)
                    .map_err(JacobiError::Input)?,
            );
        }
        let ring = Arc::new(quotient_ring(&gens, &GrobnerConfig::default())?);
        let w = chart
            .specialize_poly(chart.superpotential(), q0, h0)
            .map_err(JacobiError::Input)?;
        let mut j = Vec::with_capacity(par.quantum_count());
        for i in 0..par.quantum_count() {
            // Differentiate along the canonical lift of the deformation
            // direction, not the chart's naive trivialization: the
            // torus-flow weights contribute coordinate Euler terms.
            let mut raw = chart.q_euler_w(i);
            let lift = chart.lift_weights(i).map_err(JacobiError::Input)?;
            for (l, u) in lift.iter().enumerate() {
                if !u.is_zero() {
                    raw = raw.add(&chart.superpotential().euler(chart.z_ids()[l]).scale(u));
                }
            }
            let raw = raw.sub(&chart.nu(i));
            j.push(
                chart
                    .specialize_poly(&raw, q0, h0)
                    .map_err(JacobiError::Input)?,
            );
        }
        Ok(ChartFiber { ring, w, j })
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    /// The element representing the i-th deformation direction of the
    /// connection (0-based), already shifted by its twist weight.
    pub fn connection_element(&self, i: usize) -> &Poly {
        &self.j[i]
    }

    pub fn superpotential_element(&self) -> &Poly {
        &self.w
    }

    pub fn char_poly_of(&self, f: &Poly) -> Result<Vec<Rat>, JacobiError> {
        Ok(self.ring.mult_matrix(f)?.char_poly())
    }
}

/// Route two: the same fiber cut out of the upper triangular matrix
/// slice, with no chart in sight.
pub struct SliceFiber {
    ring: Arc<QuotientRing>,
    bmat: Matrix<Poly>,
    j: Vec<Poly>,
    q0: Vec<Rat>,
}

impl SliceFiber {
    pub fn new(dual: &DualModel, q0: &[Rat], h0: &[Rat]) -> Result<SliceFiber, JacobiError> {
        SliceFiber::build(dual, q0, h0, false)
    }

    /// Same construction with the first extremal equation deliberately
    /// rescaled. The result presents a genuinely different fiber and is
    /// used as a negative control: comparisons against route one must
    /// fail on it.
    pub fn perturbed(dual: &DualModel, q0: &[Rat], h0: &[Rat]) -> Result<SliceFiber, JacobiError> {
        SliceFiber::build(dual, q0, h0, true)
    }

    fn build(
        dual: &DualModel,
        q0: &[Rat],
        h0: &[Rat],
        perturb: bool,
    ) -> Result<SliceFiber, JacobiError> {
        let par = dual.parabolic();
        check_point(par, q0, h0)?;
        let n = par.n();
        let rank = par.rank();

        // Coordinates: one variable per free entry of the slice. The
        // top left entry is pinned to one (every stratum point has a
        // unit there after scaling), forced-zero entries are omitted,
        // and one extra variable inverts the determinant.
        let forced: Vec<(usize, usize)> = dual.forced_zero_entries().to_vec();
        let mut tb = VarTable::new();
        let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                if (i, j) == (0, 0) || forced.contains(&(i, j)) {
                    continue;
                }
                ids.insert((i, j), tb.add(&format!("b{}{}", i + 1, j + 1), false));
            }
        }
        let y = tb.add("y", false);
        let table = Arc::new(tb);

        let rows: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match ids.get(&(i, j)) {
                        Some(&v) => Poly::var(&table, v),
                        None if (i, j) == (0, 0) => Poly::one(&table),
                        None => Poly::zero(&table),
                    })
                    .collect()
            })
            .collect();
        let bmat = Matrix::from_rows(rows);

        // Companion matrix: ones on the superdiagonal, and on the
        // diagonal the twist values paired against the coordinate
        // characters of the torus.
        let diag_at = |i: usize| -> Rat {
            let mut d = Rat::zero();
            if i < rank {
                d += h0[i].clone();
            }
            if i > 0 {
                d -= h0[i - 1].clone();
            }
            d
        };
        let xirows: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j == i {
                            Poly::constant(&table, diag_at(i))
                        } else if j == i + 1 {
                            Poly::one(&table)
                        } else {
                            Poly::zero(&table)
                        }
                    })
                    .collect()
            })
            .collect();
        let xi = Matrix::from_rows(xirows);

        let mut gens: Vec<Poly> = Vec::new();

        // Commutation with the companion matrix.
        let comm = bmat.mul(&xi).sub(&xi.mul(&bmat));
        for i in 0..n {
            for j in i..n {
                let e = comm.at(i, j);
                if !e.is_zero_elem() {
                    gens.push(e.clone());
                }
            }
        }

        // Stratum membership: the minors below the distinguished one
        // vanish.
        for j in 1..n {
            let rowset: Vec<usize> = (0..j).collect();
            for cols in dual.vanishing_minors(j) {
                let colset: Vec<usize> = cols.iter().map(|&c| c - 1).collect();
                let m = bmat.minor(&rowset, &colset);
                if !m.is_zero_elem() {
                    gens.push(m);
                }
            }
        }

        // Extremal equations: for each stratum character the extreme
        // weight functional equals the matching deformation monomial,
        // after the determinant twist that makes both sides scale
        // invariant.
        let det = bmat.det();
        for (count, dom) in dual.stratum_characters().iter().enumerate() {
            let expo = dual.stratum_char_exponents(dom);
            let total: i64 = dom.factors().iter().map(|&f| f as i64).sum();
            let m = total / n as i64;
            let lhs = dual.extreme_low(dom).evaluate(&bmat);
            if lhs.is_zero_elem() {
                return Err(JacobiError::Model(
                    "extreme weight functional vanished identically".into(),
                ));
            }
            let mut scal = Rat::one();
            for (idx, &ji) in par.quantum_roots().iter().enumerate() {
                let c: i64 = (0..ji).map(|l| expo[l] - m).sum();
                scal *= rpow(&q0[idx], i32::try_from(c).expect("small exponent"));
            }
            if perturb && count == 0 {
                scal *= Rat::from_integer(2.into());
            }
            let rhs = det
                .pow(u32::try_from(m).expect("small power"))
                .scale(&scal);
            gens.push(lhs.sub(&rhs));
        }

        // Invert the determinant.
        let mut yexpo = vec![0i32; table.count()];
        yexpo[y] = 1;
        gens.push(det.mul_term(&yexpo, &Rat::one()).sub(&Poly::one(&table)));

        let ring = Arc::new(quotient_ring(&gens, &GrobnerConfig::default())?);

        // Distinguished elements: raising operators applied to the
        // lowest vector of the adapted character, rescaled by the
        // deformation monomial of its extreme weight and recentered by
        // the twist value at the marked node.
        let dom0 = adapted_character(par);
        let eps = dom0.eps_coords(n);
        let m0 = dom0.factors().iter().map(|&f| f as i64).sum::<i64>() / n as i64;
        let low = dual.lowest(&dom0);
        let mut gamma = Rat::one();
        for (idx, &ji) in par.quantum_roots().iter().enumerate() {
            let c: i64 = (1..=ji).map(|l| eps[n - l] - m0).sum();
            gamma *= rpow(&q0[idx], i32::try_from(-c).expect("small exponent"));
        }
        let mut yexpo0 = vec![0i32; table.count()];
        yexpo0[y] = i32::try_from(m0).expect("small power");
        let mut j = Vec::with_capacity(par.quantum_count());
        for &ji in par.quantum_roots() {
            let pairing = eps[n - ji] - eps[n - ji - 1];
            if pairing >= 0 {
                return Err(JacobiError::Model(
                    "marked node pairs non-negatively against the lowest weight".into(),
                ));
            }
            let v = low
                .raise(ji)
                .scale(&(-Rat::one() / Rat::from_integer(pairing.into())));
            if v.is_zero() {
                return Err(JacobiError::Model(
                    "raising the lowest vector gave zero".into(),
                ));
            }
            let vb = v.evaluate(&bmat);
            let shifted = vb
                .scale(&gamma)
                .mul_term(&yexpo0, &Rat::one())
                .sub(&Poly::constant(
                    &table,
                    h0[ji - 1].clone(),
                ));
            j.push(shifted);
        }

        Ok(SliceFiber {
            ring,
            bmat,
            j,
            q0: q0.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn matrix_model(&self) -> &Matrix<Poly> {
        &self.bmat
    }

    /// The element representing the i-th deformation direction of the
    /// connection (0-based).
    pub fn connection_element(&self, i: usize) -> &Poly {
        &self.j[i]
    }

    /// The superpotential element, recovered by running the
    /// factorization map over the quotient ring and summing the
    /// subdiagonal characters of both unitriangular factors.
    pub fn superpotential_element(&self, dual: &DualModel) -> Result<Poly, JacobiError> {
        let n = self.bmat.nrows();
        let mut rows: Vec<Vec<Residue>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for jj in 0..n {
                row.push(Residue::new(&self.ring, self.bmat.at(i, jj))?);
            }
            rows.push(row);
        }
        let bres = Matrix::from_rows(rows);
        let f = dual
            .factorize(&bres, false)
            .map_err(|e| JacobiError::Model(e.to_string()))?;
        // The diagonal part must project onto the point's deformation
        // coordinates; anything else means the fiber is inconsistent.
        for (idx, qc) in dual.q_coordinates(&f).iter().enumerate() {
            let want = qc.from_rat_of(&self.q0[idx]);
            if *qc != want {
                return Err(JacobiError::Model(format!(
                    "deformation coordinate {} drifted to {:?}",
                    idx + 1,
                    qc
                )));
            }
        }
        Ok(dual.superpotential(&f).normal_form().clone())
    }

    pub fn char_poly_of(&self, f: &Poly) -> Result<Vec<Rat>, JacobiError> {
        Ok(self.ring.mult_matrix(f)?.char_poly())
    }
}

/// Outcome of running both routes at one rational point. Coefficient
/// vectors are ascending and monic.
#[derive(Debug, Clone)]
pub struct RouteReport {
    pub case_name: String,
    pub q0: Vec<Rat>,
    pub h0: Vec<Rat>,
    pub expected_dim: usize,
    pub chart_dim: usize,
    pub slice_dim: usize,
    pub chart_connection_chars: Vec<Vec<Rat>>,
    pub slice_connection_chars: Vec<Vec<Rat>>,
    pub chart_w_char: Vec<Rat>,
    pub slice_w_char: Vec<Rat>,
}

impl RouteReport {
    pub fn dims_agree(&self) -> bool {
        self.chart_dim == self.expected_dim && self.slice_dim == self.expected_dim
    }

    pub fn connection_chars_agree(&self) -> bool {
        self.chart_connection_chars == self.slice_connection_chars
    }

    pub fn w_chars_agree(&self) -> bool {
        self.chart_w_char == self.slice_w_char
    }

    pub fn passed(&self) -> bool {
        self.dims_agree() && self.connection_chars_agree() && self.w_chars_agree()
    }

    /// Human-readable one-line verdict with the point baked in, usable
    /// as a reproduction hint.
    pub fn describe(&self) -> String {
        let q: Vec<String> = self.q0.iter().map(rat_str).collect();
        let h: Vec<String> = self.h0.iter().map(rat_str).collect();
        format!(
            "{}: q=({}) h=({}) dims {}/{}/{} conn {} w {}",
            self.case_name,
            q.join(","),
            h.join(","),
            self.expected_dim,
            self.chart_dim,
            self.slice_dim,
            if self.connection_chars_agree() { "ok" } else { "MISMATCH" },
            if self.w_chars_agree() { "ok" } else { "MISMATCH" },
        )
    }
}

fn compare(
    chart: &Chart,
    dual: &DualModel,
    q0: &[Rat],
    h0: &[Rat],
    perturb: bool,
) -> Result<RouteReport, JacobiError> {
    let par = chart.parabolic();
    let a = ChartFiber::new(chart, q0, h0)?;
    let b = if perturb {
        SliceFiber::perturbed(dual, q0, h0)?
    } else {
        SliceFiber::new(dual, q0, h0)?
    };
    let mut ca = Vec::with_capacity(par.quantum_count());
    let mut cb = Vec::with_capacity(par.quantum_count());
    for i in 0..par.quantum_count() {
        ca.push(a.char_poly_of(a.connection_element(i))?);
        cb.push(b.char_poly_of(b.connection_element(i))?);
    }
    let wa = a.char_poly_of(a.superpotential_element())?;
    // A fiber that fails to factor consistently over its own ring has
    // no superpotential element; record that as an empty coefficient
    // vector, which can never match the chart side.
    let wb = match b.superpotential_element(dual) {
        Ok(w) => b.char_poly_of(&w)?,
        Err(JacobiError::Model(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(RouteReport {
        case_name: chart.name().to_string(),
        q0: q0.to_vec(),
        h0: h0.to_vec(),
        expected_dim: par.min_reps().len(),
        chart_dim: a.dim(),
        slice_dim: b.dim(),
        chart_connection_chars: ca,
        slice_connection_chars: cb,
        chart_w_char: wa,
        slice_w_char: wb,
    })
}

/// Build both routes at one rational point and compare everything.
pub fn compare_routes(
    chart: &Chart,
    dual: &DualModel,
    q0: &[Rat],
    h0: &[Rat],
) -> Result<RouteReport, JacobiError> {
    compare(chart, dual, q0, h0, false)
}

/// Negative control: route two is rebuilt with one extremal equation
/// rescaled, and the comparison is expected to fail.
pub fn compare_routes_perturbed(
    chart: &Chart,
    dual: &DualModel,
    q0: &[Rat],
    h0: &[Rat],
) -> Result<RouteReport, JacobiError> {
    compare(chart, dual, q0, h0, true)
}

/// Rescale a rational point along the grading: deformation values by
/// their even pairing degrees, twist values by degree two.
pub fn rescale_point(
    par: &Parabolic,
    t: &Rat,
    q0: &[Rat],
    h0: &[Rat],
) -> (Vec<Rat>, Vec<Rat>) {
    let q = q0
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v * rpow(
                t,
                i32::try_from(par.quantum_degree(i + 1)).expect("small degree"),
            )
        })
        .collect();
    let h = h0.iter().map(|v| v * rpow(t, 2)).collect();
    (q, h)
}

/// Check the grading identity on the characteristic polynomial of a
/// degree-two element: after rescaling the point by `t`, coefficient
/// `j` picks up `t` to the power `2 (dim - j)`.
pub fn charpoly_rescales(base: &[Rat], rescaled: &[Rat], t: &Rat) -> bool {
    base.len() == rescaled.len()
        && base.iter().enumerate().all(|(j, c)| {
            let d = base.len() - 1 - j;
            rescaled[j] == c * rpow(t, i32::try_from(2 * d).expect("small degree"))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::SdotConvention;
    use crate::scalar::rint;
    use crate::weyl::RootSystem;

    fn setup(chart_name: &str) -> (Chart, DualModel) {
        let chart = Chart::builtin(chart_name).unwrap();
        let dual = DualModel::new(chart.parabolic().clone(), SdotConvention::ExpPlus);
        (chart, dual)
    }

    #[test]
    fn adapted_characters_have_expected_shape() {
        let a1 = Parabolic::new(RootSystem::new("A", 1).unwrap(), &[]).unwrap();
        assert_eq!(adapted_character(&a1).factors(), &[1, 1]);
        let plane = Parabolic::new(RootSystem::new("A", 2).unwrap(), &[2]).unwrap();
        assert_eq!(adapted_character(&plane).factors(), &[2, 2, 2]);
        let flag = Parabolic::new(RootSystem::new("A", 2).unwrap(), &[]).unwrap();
        assert_eq!(adapted_character(&flag).factors(), &[1, 2]);
    }

    #[test]
    fn rank_one_slice_matches_frozen_operator() {
        let (_, dual) = setup("p1");
        let fiber = SliceFiber::new(&dual, &[rint(3)], &[rint(5)]).unwrap();
        assert_eq!(fiber.dim(), 2);
        // x^2 - h^2 - q at h = 5, q = 3.
        let char = fiber.char_poly_of(fiber.connection_element(0)).unwrap();
        assert_eq!(char, vec![rint(-28), rint(0), rint(1)]);
    }

    #[test]
    fn rank_one_slice_w_element_is_frozen() {
        let (_, dual) = setup("p1");
        let fiber = SliceFiber::new(&dual, &[rint(2)], &[rint(7)]).unwrap();
        let w = fiber.superpotential_element(&dual).unwrap();
        // x^2 - (4 h^2 + 4 q) at h = 7, q = 2.
        let char = fiber.char_poly_of(&w).unwrap();
        assert_eq!(char, vec![rint(-204), rint(0), rint(1)]);
    }

    #[test]
    fn rank_one_routes_agree() {
        let (chart, dual) = setup("p1");
        let rep = compare_routes(&chart, &dual, &[rint(2)], &[rint(7)]).unwrap();
        assert!(rep.passed(), "{}", rep.describe());
        assert_eq!(rep.expected_dim, 2);

        // Untwisted point, frozen oracle for the superpotential.
        let rep0 = compare_routes(&chart, &dual, &[rint(9)], &[rint(0)]).unwrap();
        assert!(rep0.passed(), "{}", rep0.describe());
        assert_eq!(rep0.chart_w_char, vec![rint(-36), rint(0), rint(1)]);
    }

    #[test]
    fn projective_plane_routes_agree() {
        let (chart, dual) = setup("p2");
        let rep = compare_routes(&chart, &dual, &[rint(2)], &[rint(1), rint(-2)]).unwrap();
        assert!(rep.passed(), "{}", rep.describe());
        assert_eq!(rep.expected_dim, 3);
    }

    #[test]
    fn full_flag_routes_agree() {
        let (chart, dual) = setup("sl3b");
        let rep = compare_routes(&chart, &dual, &[rint(5), rint(7)], &[rint(2), rint(11)])
            .unwrap();
        assert!(rep.passed(), "{}", rep.describe());
        assert_eq!(rep.expected_dim, 6);
        // Frozen from the small-cohomology operators at the same point,
        // computed by an unrelated code path.
        let frozen = [
            vec![36329, 43758, 12229, -396, -221, 0, 1],
            vec![33569, -44946, 12919, 396, -227, 0, 1],
        ];
        for (got, want) in rep.chart_connection_chars.iter().zip(&frozen) {
            let want: Vec<Rat> = want.iter().map(|&c| rint(c)).collect();
            assert_eq!(got, &want);
        }
    }

    #[test]
    fn perturbed_slice_is_detected() {
        let (chart, dual) = setup("p1");
        let rep = compare_routes_perturbed(&chart, &dual, &[rint(2)], &[rint(3)]).unwrap();
        assert!(!rep.passed(), "{}", rep.describe());
    }

    #[test]
    fn degenerate_deformation_is_rejected() {
        let (chart, dual) = setup("p1");
        let err = ChartFiber::new(&chart, &[rint(0)], &[rint(1)]).err().unwrap();
        assert!(matches!(err, JacobiError::Input(_)));
        let err = SliceFiber::new(&dual, &[rint(0)], &[rint(1)]).err().unwrap();
        assert!(matches!(err, JacobiError::Input(_)));
    }

    #[test]
    fn charpoly_respects_grading() {
        let (chart, _) = setup("p1");
        let par = chart.parabolic().clone();
        let q0 = [rint(3)];
        let h0 = [rint(2)];
        let t = rint(2);
        let (q1, h1) = rescale_point(&par, &t, &q0, &h0);
        assert_eq!(q1, vec![rint(48)]);
        assert_eq!(h1, vec![rint(8)]);
        let base = ChartFiber::new(&chart, &q0, &h0).unwrap();
        let moved = ChartFiber::new(&chart, &q1, &h1).unwrap();
        let cb = base
            .char_poly_of(base.connection_element(0))
            .unwrap();
        let cm = moved
            .char_poly_of(moved.connection_element(0))
            .unwrap();
        assert!(charpoly_rescales(&cb, &cm, &t));
        let wb = base.char_poly_of(base.superpotential_element()).unwrap();
        let wm = moved.char_poly_of(moved.superpotential_element()).unwrap();
        assert!(charpoly_rescales(&wb, &wm, &t));
    }

    #[test]
    fn plane_charpoly_respects_grading() {
        let (chart, _) = setup("p2");
        let par = chart.parabolic().clone();
        let q0 = [rint(1)];
        let h0 = [rint(1), rint(2)];
        let t = rfrac_t();
        let (q1, h1) = rescale_point(&par, &t, &q0, &h0);
        let base = ChartFiber::new(&chart, &q0, &h0).unwrap();
        let moved = ChartFiber::new(&chart, &q1, &h1).unwrap();
        let cb = base.char_poly_of(base.connection_element(0)).unwrap();
        let cm = moved.char_poly_of(moved.connection_element(0)).unwrap();
        assert!(charpoly_rescales(&cb, &cm, &t));
    }

    fn rfrac_t() -> Rat {
        crate::scalar::rfrac(3, 2)
    }
}
