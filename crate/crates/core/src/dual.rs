//! Matrix model for the mirror side: signed permutation lifts of Weyl
//! elements, the open factorization stratum inside the upper-triangular
//! group, the superpotential read off a canonical factorization triple,
//! generalized minors with their extreme-weight vectors, and the monomial
//! coordinates of the base torus.
//!
//! All routines are generic over [`FieldElem`] scalars so the same code
//! runs on rational sample points and on symbolic rational functions.

use std::collections::BTreeMap;

use num::{One, Zero};
use thiserror::Error;

use crate::matrix::{FieldElem, Matrix, RingElem};
use crate::scalar::Rat;
use crate::weyl::{Parabolic, WeylElt};

#[derive(Debug, Error)]
pub enum DualError {
    #[error("not in stratum: {0}")]
    NotInStratum(String),
    #[error("convention self-test failed: {0}")]
    Convention(String),
}

/// Sign convention for the rank-one lifts: which unipotent one-parameter
/// factors build the 2x2 block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdotConvention {
    /// Block [[0, 1], [-1, 0]].
    ExpPlus,
    /// Block [[0, -1], [1, 0]].
    ExpMinus,
}

impl SdotConvention {
    pub fn label(self) -> &'static str {
        match self {
            SdotConvention::ExpPlus => "exp-plus",
            SdotConvention::ExpMinus => "exp-minus",
        }
    }
}

/// Lift of the i-th simple reflection (1-based) to an n x n signed
/// permutation matrix.
pub fn sdot(n: usize, i: usize, conv: SdotConvention) -> Matrix<Rat> {
    assert!((1..n).contains(&i));
    let mut m = Matrix::identity(n, &Rat::zero());
    let (a, b) = (i - 1, i);
    let (pos, neg) = (Rat::one(), -Rat::one());
    match conv {
        SdotConvention::ExpPlus => {
            *m.at_mut(a, a) = Rat::zero();
            *m.at_mut(b, b) = Rat::zero();
            *m.at_mut(a, b) = pos;
            *m.at_mut(b, a) = neg;
        }
        SdotConvention::ExpMinus => {
            *m.at_mut(a, a) = Rat::zero();
            *m.at_mut(b, b) = Rat::zero();
            *m.at_mut(a, b) = neg;
            *m.at_mut(b, a) = pos;
        }
    }
    m
}

/// Signed permutation view of a matrix whose every row and column holds
/// exactly one nonzero entry.
#[derive(Debug, Clone)]
pub struct SignedPerm {
    /// image[j] = row index of the nonzero entry in column j (0-based).
    image: Vec<usize>,
    /// sign[j] = that entry's value.
    sign: Vec<Rat>,
}

impl SignedPerm {
    pub fn from_matrix(m: &Matrix<Rat>) -> Option<SignedPerm> {
        let n = m.nrows();
        let mut image = Vec::with_capacity(n);
        let mut sign = Vec::with_capacity(n);
        for j in 0..n {
            let hits: Vec<usize> = (0..n).filter(|&i| !m.at(i, j).is_zero()).collect();
            if hits.len() != 1 {
                return None;
            }
            image.push(hits[0]);
            sign.push(m.at(hits[0], j).clone());
        }
        let mut seen = vec![false; n];
        for &i in &image {
            if seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(SignedPerm { image, sign })
    }

    /// Apply to a wedge monomial given as a sorted 1-based index subset;
    /// returns the sorted image subset and the accumulated sign.
    fn apply_wedge(&self, subset: &[usize]) -> (Vec<usize>, Rat) {
        let mut coeff = Rat::one();
        let mut img: Vec<usize> = subset
            .iter()
            .map(|&s| {
                coeff *= self.sign[s - 1].clone();
                self.image[s - 1] + 1
            })
            .collect();
        // Bubble sort, tracking the permutation sign.
        let mut swapped = true;
        while swapped {
            swapped = false;
            for p in 1..img.len() {
                if img[p - 1] > img[p] {
                    img.swap(p - 1, p);
                    coeff = -coeff;
                    swapped = true;
                }
            }
        }
        (img, coeff)
    }
}

/// Dominant character encoded by the multiset of fundamental-weight
/// factors; [1, 2] means the sum of the first and second fundamentals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomChar {
    factors: Vec<usize>,
}

impl DomChar {
    pub fn new(mut factors: Vec<usize>, n: usize) -> Self {
        assert!(factors.iter().all(|&f| (1..n).contains(&f)));
        factors.sort_unstable();
        let total: usize = factors.iter().sum();
        assert_eq!(
            total % n,
            0,
            "character must lie in the root lattice (factor sum divisible by n)"
        );
        DomChar { factors }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// Coordinates on the diagonal torus: the l-th entry counts factors
    /// of index at least l (1-based l).
    pub fn eps_coords(&self, n: usize) -> Vec<i64> {
        (1..=n)
            .map(|l| self.factors.iter().filter(|&&f| f >= l).count() as i64)
            .collect()
    }

    /// Fundamental-weight coordinates of the character.
    pub fn weight_coords(&self, rank: usize) -> Vec<i64> {
        (1..=rank)
            .map(|j| self.factors.iter().filter(|&&f| f == j).count() as i64)
            .collect()
    }
}

/// Element of a tensor product of wedge powers, kept as an exact linear
/// combination of monomials; each monomial lists one sorted 1-based
/// subset per tensor factor.
#[derive(Debug, Clone)]
pub struct TensorVec {
    factor_sizes: Vec<usize>,
    terms: Vec<(Vec<Vec<usize>>, Rat)>,
}

impl TensorVec {
    /// Top monomial: every factor holds its leading subset {1..j}.
    pub fn top(dom: &DomChar) -> TensorVec {
        let mono: Vec<Vec<usize>> = dom.factors.iter().map(|&j| (1..=j).collect()).collect();
        TensorVec {
            factor_sizes: dom.factors.clone(),
            terms: vec![(mono, Rat::one())],
        }
    }

    fn normalized(self) -> TensorVec {
        let mut map: BTreeMap<Vec<Vec<usize>>, Rat> = BTreeMap::new();
        for (mono, c) in self.terms {
            let entry = map.entry(mono).or_insert_with(Rat::zero);
            *entry += c;
        }
        TensorVec {
            factor_sizes: self.factor_sizes,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn apply(&self, p: &SignedPerm) -> TensorVec {
        let terms = self
            .terms
            .iter()
            .map(|(mono, c)| {
                let mut coeff = c.clone();
                let img: Vec<Vec<usize>> = mono
                    .iter()
                    .map(|subset| {
                        let (s, sg) = p.apply_wedge(subset);
                        coeff *= sg;
                        s
                    })
                    .collect();
                (img, coeff)
            })
            .collect();
        TensorVec {
            factor_sizes: self.factor_sizes.clone(),
            terms,
        }
        .normalized()
    }

    /// Raising operator for the i-th simple direction: on a wedge factor
    /// it replaces index i+1 by i (zero if i is already present), summed
    /// over factors.
    pub fn raise(&self, i: usize) -> TensorVec {
        let mut out = Vec::new();
        for (mono, c) in &self.terms {
            for (pos, subset) in mono.iter().enumerate() {
                if subset.contains(&(i + 1)) && !subset.contains(&i) {
                    let mut s = subset.clone();
                    for v in s.iter_mut() {
                        if *v == i + 1 {
                            *v = i;
                        }
                    }
                    s.sort_unstable();
                    let mut m = mono.clone();
                    m[pos] = s;
                    out.push((m, c.clone()));
                }
            }
        }
        TensorVec {
            factor_sizes: self.factor_sizes.clone(),
            terms: out,
        }
        .normalized()
    }

    pub fn scale(&self, c: &Rat) -> TensorVec {
        TensorVec {
            factor_sizes: self.factor_sizes.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x * c))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Matrix coefficient against the top monomial: evaluate each wedge
    /// factor as the minor on leading rows and the subset's columns.
    pub fn evaluate<T: RingElem>(&self, x: &Matrix<T>) -> T {
        let ctx = x.at(0, 0);
        let mut total = ctx.zero_of();
        for (mono, c) in &self.terms {
            let mut prod = ctx.from_rat_of(c);
            for (subset, &j) in mono.iter().zip(&self.factor_sizes) {
                let rows: Vec<usize> = (0..j).collect();
                let cols: Vec<usize> = subset.iter().map(|&s| s - 1).collect();
                prod = prod.mul_ref(&x.minor(&rows, &cols));
            }
            total = total.add_ref(&prod);
        }
        total
    }
}

/// Canonical factorization triple of a stratum point: two lower
/// unitriangular factors around the twisted torus part.
#[derive(Debug, Clone)]
pub struct Factorization<T> {
    pub u1: Matrix<T>,
    pub base: Vec<T>,
    pub u2: Matrix<T>,
}

/// The parabolic's mirror-side matrix model under a fixed lift
/// convention.
pub struct DualModel {
    par: Parabolic,
    conv: SdotConvention,
    a_lift: Matrix<Rat>,
    m_lift: Matrix<Rat>,
    w0_lift: Matrix<Rat>,
    /// Per row of `m_lift`: the unique nonzero column and its sign.
    row_targets: Vec<(usize, Rat)>,
    slice: Vec<(usize, usize)>,
    gauge: Vec<(usize, usize)>,
    forced_zero: Vec<(usize, usize)>,
}

impl DualModel {
    pub fn new(par: Parabolic, conv: SdotConvention) -> Self {
        let n = par.n();
        let lift = |w: &WeylElt| -> Matrix<Rat> {
            w.reduced_word()
                .iter()
                .fold(Matrix::identity(n, &Rat::zero()), |acc, &i| {
                    acc.mul(&sdot(n, i, conv))
                })
        };
        let a_lift = lift(&par.longest_levi()).mul(&lift(&par.longest()));
        let w0_lift = lift(&par.longest());
        let m_lift = a_lift.inverse().expect("signed permutation is invertible");
        let row_targets: Vec<(usize, Rat)> = (0..n)
            .map(|i| {
                let j = (0..n)
                    .find(|&j| !m_lift.at(i, j).is_zero())
                    .expect("nonzero row");
                (j, m_lift.at(i, j).clone())
            })
            .collect();
        let slice: Vec<(usize, usize)> = par
            .complement_roots()
            .iter()
            .map(|r| (n - r.a, n - r.b))
            .collect();
        let gauge: Vec<(usize, usize)> = par
            .levi_roots()
            .iter()
            .map(|r| (n - r.a, n - r.b))
            .collect();

        let wpw0 = par.longest_levi().mul(&par.longest());
        let top = wpw0.apply(1);
        let forced_zero: Vec<(usize, usize)> = (top + 1..=n).map(|s| (0, s - 1)).collect();

        let model = DualModel {
            par,
            conv,
            a_lift,
            m_lift,
            w0_lift,
            row_targets,
            slice,
            gauge,
            forced_zero,
        };
        debug_assert!(model.mirror_exponents_are_identity());
        model
    }

    pub fn parabolic(&self) -> &Parabolic {
        &self.par
    }

    pub fn convention(&self) -> SdotConvention {
        self.conv
    }

    pub fn twist_lift(&self) -> &Matrix<Rat> {
        &self.a_lift
    }

    /// Upper-triangular entries that vanish identically on the stratum;
    /// samples must respect them to have any chance of factorizing.
    pub fn forced_zero_entries(&self) -> &[(usize, usize)] {
        &self.forced_zero
    }

    pub fn gauge_positions(&self) -> &[(usize, usize)] {
        &self.gauge
    }

    /// Factor an invertible upper-triangular matrix through the twisted
    /// stratum. With `enforce_base` the diagonal part must descend to the
    /// base torus (equal values across each Levi block).
    pub fn factorize<T: FieldElem>(
        &self,
        x: &Matrix<T>,
        enforce_base: bool,
    ) -> Result<Factorization<T>, DualError> {
        let n = self.par.n();
        assert_eq!(x.nrows(), n);
        assert_eq!(x.ncols(), n);
        let ctx = x.at(0, 0).clone();
        for i in 0..n {
            for j in 0..i {
                assert!(
                    x.at(i, j).is_zero_elem(),
                    "factorization input must be upper triangular"
                );
            }
        }

        // Solve for v = u1^{-1}, supported on the slice positions, from
        // the requirement that row i of v*x vanish beyond its target
        // column.
        let mut v = Matrix::identity(n, &ctx.zero_of());
        for i in 0..n {
            let unknowns: Vec<usize> = self
                .slice
                .iter()
                .filter(|&&(r, _)| r == i)
                .map(|&(_, c)| c)
                .collect();
            let c_i = self.row_targets[i].0;
            let cons: Vec<usize> = (c_i + 1..n).collect();
            if unknowns.is_empty() {
                for &m in &cons {
                    if !x.at(i, m).is_zero_elem() {
                        return Err(DualError::NotInStratum(format!(
                            "row {} violates the stratum zero pattern",
                            i + 1
                        )));
                    }
                }
                continue;
            }
            if cons.is_empty() {
                return Err(DualError::NotInStratum(format!(
                    "row {} is unconstrained",
                    i + 1
                )));
            }
            let rows: Vec<Vec<T>> = cons
                .iter()
                .map(|&m| unknowns.iter().map(|&p| x.at(p, m).clone()).collect())
                .collect();
            let rhs: Vec<T> = cons.iter().map(|&m| x.at(i, m).neg_ref()).collect();
            match Matrix::from_rows(rows).solve(&rhs) {
                Some(Ok(sol)) => {
                    for (&p, val) in unknowns.iter().zip(sol) {
                        *v.at_mut(i, p) = val;
                    }
                }
                Some(Err(())) => {
                    return Err(DualError::NotInStratum(format!(
                        "row {} system is underdetermined",
                        i + 1
                    )))
                }
                None => {
                    return Err(DualError::NotInStratum(format!(
                        "row {} system is inconsistent",
                        i + 1
                    )))
                }
            }
        }

        let e = v.mul(x);
        let mut base = vec![ctx.zero_of(); n];
        for i in 0..n {
            let (c_i, ref s_i) = self.row_targets[i];
            let val = e.at(i, c_i).mul_ref(&ctx.from_rat_of(&s_i.recip()));
            if val.is_zero_elem() {
                return Err(DualError::NotInStratum(format!(
                    "base coordinate {} vanishes",
                    c_i + 1
                )));
            }
            base[c_i] = val;
        }
        if enforce_base {
            for &j in self.par.levi() {
                if !base[j - 1].sub_ref(&base[j]).is_zero_elem() {
                    return Err(DualError::NotInStratum(format!(
                        "diagonal part is not constant across the Levi block at {j}"
                    )));
                }
            }
        }

        let mut u2 = Matrix::identity(n, &ctx.zero_of());
        for i in 0..n {
            let (c_i, ref s_i) = self.row_targets[i];
            let scale = base[c_i]
                .mul_ref(&ctx.from_rat_of(s_i))
                .inv_ref()
                .expect("nonzero base coordinate");
            for m in 0..=c_i {
                *u2.at_mut(c_i, m) = e.at(i, m).mul_ref(&scale);
            }
        }
        let u1 = v.inverse().expect("unitriangular matrix is invertible");
        Ok(Factorization { u1, base, u2 })
    }

    /// Rebuild the factored matrix; used as a round-trip identity check.
    pub fn recompose<T: FieldElem>(&self, f: &Factorization<T>) -> Matrix<T> {
        let ctx = f.u1.at(0, 0);
        let m_t = self.m_lift.map(|c| ctx.from_rat_of(c));
        let diag = diag_matrix(&f.base);
        f.u1.mul(&m_t).mul(&diag).mul(&f.u2)
    }

    /// The superpotential of a factorization: the additive character
    /// (sum of first-subdiagonal entries) applied to both unitriangular
    /// factors.
    pub fn superpotential<T: FieldElem>(&self, f: &Factorization<T>) -> T {
        let ctx = f.u1.at(0, 0);
        let mut total = ctx.zero_of();
        for m in [&f.u1, &f.u2] {
            for i in 1..m.nrows() {
                total = total.add_ref(m.at(i, i - 1));
            }
        }
        total
    }

    /// Deformation coordinates of the diagonal part: the simple-root
    /// ratios at the quantum indices.
    pub fn q_coordinates<T: FieldElem>(&self, f: &Factorization<T>) -> Vec<T> {
        self.par
            .quantum_roots()
            .iter()
            .map(|&j| {
                f.base[j - 1].mul_ref(&f.base[j].inv_ref().expect("nonzero base coordinate"))
            })
            .collect()
    }

    /// Move to an equivalent factorization using a unitriangular gauge
    /// element supported on the Levi positions.
    pub fn gauge_move<T: FieldElem>(
        &self,
        f: &Factorization<T>,
        g: &Matrix<T>,
    ) -> Factorization<T> {
        let ctx = f.u1.at(0, 0);
        let a_t = self.a_lift.map(|c| ctx.from_rat_of(c));
        let a_inv = a_t.inverse().expect("signed permutation");
        let g_inv = g.inverse().expect("unitriangular gauge element");
        let diag = diag_matrix(&f.base);
        let diag_inv = diag_matrix(
            &f.base
                .iter()
                .map(|t| t.inv_ref().expect("nonzero base"))
                .collect::<Vec<_>>(),
        );
        Factorization {
            u1: f.u1.mul(g),
            base: f.base.clone(),
            u2: diag_inv
                .mul(&a_t)
                .mul(&g_inv)
                .mul(&a_inv)
                .mul(&diag)
                .mul(&f.u2),
        }
    }

    /// Build a gauge element from one parameter per Levi position.
    pub fn gauge_element<T: FieldElem>(&self, ctx: &T, params: &[Rat]) -> Matrix<T> {
        assert_eq!(params.len(), self.gauge.len());
        let mut g = Matrix::identity(self.par.n(), &ctx.zero_of());
        for (&(r, c), p) in self.gauge.iter().zip(params) {
            *g.at_mut(r, c) = ctx.from_rat_of(p);
        }
        g
    }

    /// Fixed generating set of dominant root-lattice characters used by
    /// the stratum identities.
    pub fn stratum_characters(&self) -> Vec<DomChar> {
        let n = self.par.n();
        let sets: Vec<Vec<usize>> = match self.par.rank() {
            1 => vec![vec![1, 1]],
            2 => vec![vec![1, 2], vec![1, 1, 1], vec![2, 2, 2]],
            3 => vec![vec![1, 3], vec![2, 2], vec![1, 1, 2], vec![1, 1, 1, 1]],
            _ => vec![
                vec![1, 4],
                vec![2, 3],
                vec![1, 1, 3],
                vec![1, 2, 2],
                vec![1, 1, 1, 2],
                vec![1, 1, 1, 1, 1],
            ],
        };
        sets.into_iter().map(|f| DomChar::new(f, n)).collect()
    }

    /// Extreme-weight vector v_{w_P w_0} of a dominant character.
    pub fn extreme_low(&self, dom: &DomChar) -> TensorVec {
        let p = SignedPerm::from_matrix(&self.a_lift).expect("signed permutation");
        TensorVec::top(dom).apply(&p)
    }

    /// Lowest-weight vector v_{w_0} of a dominant character.
    pub fn lowest(&self, dom: &DomChar) -> TensorVec {
        let p = SignedPerm::from_matrix(&self.w0_lift).expect("signed permutation");
        TensorVec::top(dom).apply(&p)
    }

    /// Exponents on the diagonal part giving the stratum value of the
    /// extreme minor: the w_Pw_0-permuted torus coordinates of `dom`.
    pub fn stratum_char_exponents(&self, dom: &DomChar) -> Vec<i64> {
        let n = self.par.n();
        let w = self.par.longest_levi().mul(&self.par.longest());
        let eps = dom.eps_coords(n);
        let mut out = vec![0i64; n];
        for l in 1..=n {
            out[w.apply(l) - 1] = eps[l - 1];
        }
        out
    }

    /// Column subsets whose leading minors vanish identically on the
    /// stratum: the j-subsets strictly dominance-below w_Pw_0({1..j}).
    pub fn vanishing_minors(&self, j: usize) -> Vec<Vec<usize>> {
        let n = self.par.n();
        let w = self.par.longest_levi().mul(&self.par.longest());
        let mut star: Vec<usize> = (1..=j).map(|l| w.apply(l)).collect();
        star.sort_unstable();
        subsets(n, j)
            .into_iter()
            .filter(|s| s != &star && s.iter().zip(&star).all(|(a, b)| a >= b))
            .collect()
    }

    /// The stratum identities on one factorized point: the extreme minor
    /// of every generating character equals the matching monomial in the
    /// diagonal part, and the lower minors vanish.
    pub fn stratum_identity_check<T: FieldElem>(
        &self,
        x: &Matrix<T>,
        f: &Factorization<T>,
    ) -> Result<(), String> {
        let ctx = x.at(0, 0);
        for dom in self.stratum_characters() {
            let lhs = self.extreme_low(&dom).evaluate(x);
            let expo = self.stratum_char_exponents(&dom);
            let mut rhs = ctx.one_of();
            for (t, &e) in f.base.iter().zip(&expo) {
                assert!(e >= 0, "stratum character exponents are nonnegative");
                for _ in 0..e {
                    rhs = rhs.mul_ref(t);
                }
            }
            if !lhs.sub_ref(&rhs).is_zero_elem() {
                return Err(format!(
                    "extreme minor of {:?} disagrees with the diagonal monomial",
                    dom.factors()
                ));
            }
        }
        for j in 1..self.par.n() {
            for s in self.vanishing_minors(j) {
                let rows: Vec<usize> = (0..j).collect();
                let cols: Vec<usize> = s.iter().map(|&v| v - 1).collect();
                if !x.minor(&rows, &cols).is_zero_elem() {
                    return Err(format!("minor at columns {s:?} fails to vanish"));
                }
            }
        }
        Ok(())
    }

    /// Run factorization round-trips and the stratum identities over the
    /// provided upper-triangular samples; returns how many samples landed
    /// in the stratum. Samples outside it are skipped, but at least one
    /// must succeed.
    pub fn self_test(&self, samples: &[Matrix<Rat>]) -> Result<usize, DualError> {
        let mut hits = 0;
        for x in samples {
            let f = match self.factorize(x, false) {
                Ok(f) => f,
                Err(DualError::NotInStratum(_)) => continue,
                Err(e) => return Err(e),
            };
            if self.recompose(&f) != *x {
                return Err(DualError::Convention(
                    "factorization round-trip failed".into(),
                ));
            }
            self.stratum_identity_check(x, &f)
                .map_err(DualError::Convention)?;
            hits += 1;
        }
        if hits == 0 {
            return Err(DualError::Convention(
                "no sample landed in the stratum".into(),
            ));
        }
        Ok(hits)
    }

    /// Diagonal exponents of the base torus in the deformation
    /// coordinates: entry (l, i) is the q_i-exponent of the l-th diagonal
    /// coordinate.
    pub fn base_torus_exponents(&self) -> Vec<Vec<i64>> {
        let n = self.par.n();
        (1..=n)
            .map(|l| {
                self.par
                    .quantum_roots()
                    .iter()
                    .map(|&j| i64::from(j >= l))
                    .collect()
            })
            .collect()
    }

    /// Base-torus point with the given deformation coordinates.
    pub fn base_point<T: FieldElem>(&self, ctx: &T, q: &[T]) -> Vec<T> {
        assert_eq!(q.len(), self.par.quantum_count());
        self.base_torus_exponents()
            .iter()
            .map(|row| {
                let mut v = ctx.one_of();
                for (qi, &e) in q.iter().zip(row) {
                    for _ in 0..e {
                        v = v.mul_ref(qi);
                    }
                }
                v
            })
            .collect()
    }

    fn mirror_exponents_are_identity(&self) -> bool {
        let e = self.base_torus_exponents();
        let quantum = self.par.quantum_roots();
        quantum.iter().enumerate().all(|(i, &j)| {
            let row: Vec<i64> = (0..quantum.len())
                .map(|m| e[j - 1][m] - e[j][m])
                .collect();
            row.iter()
                .enumerate()
                .all(|(m, &v)| v == i64::from(m == i))
        })
    }
}

fn diag_matrix<T: RingElem>(d: &[T]) -> Matrix<T> {
    let mut m = Matrix::identity(d.len(), &d[0].zero_of());
    for (i, v) in d.iter().enumerate() {
        *m.at_mut(i, i) = v.clone();
    }
    m
}

fn subsets(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, j, cur, out);
            cur.pop();
        }
    }
    rec(1, n, j, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::Frac;
    use crate::matrix::shared_table;
    use crate::poly::Poly;
    use crate::scalar::{rfrac, rint};
    use crate::weyl::RootSystem;

    fn model(rank: usize, levi: &[usize], conv: SdotConvention) -> DualModel {
        let par = Parabolic::new(RootSystem::new("A", rank).unwrap(), levi).unwrap();
        DualModel::new(par, conv)
    }

    #[test]
    fn braid_relation_holds_for_both_conventions() {
        for conv in [SdotConvention::ExpPlus, SdotConvention::ExpMinus] {
            let a = sdot(3, 1, conv).mul(&sdot(3, 2, conv)).mul(&sdot(3, 1, conv));
            let b = sdot(3, 2, conv).mul(&sdot(3, 1, conv)).mul(&sdot(3, 2, conv));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rank_one_rational_point() {
        let m = model(1, &[], SdotConvention::ExpPlus);
        let x = Matrix::from_rows(vec![
            vec![rint(3), rint(2)],
            vec![rint(0), rint(1)],
        ]);
        let f = m.factorize(&x, true).unwrap();
        assert_eq!(m.recompose(&f), x);
        // Deformation coordinate is a/b^2.
        assert_eq!(m.q_coordinates(&f), vec![rfrac(3, 4)]);
        m.stratum_identity_check(&x, &f).unwrap();
    }

    #[test]
    fn identity_matrix_is_rejected() {
        let m = model(1, &[], SdotConvention::ExpPlus);
        let x = Matrix::identity(2, &Rat::zero());
        match m.factorize(&x, true) {
            Err(DualError::NotInStratum(_)) => {}
            other => panic!("expected stratum rejection, got {other:?}"),
        }
    }

    #[test]
    fn symbolic_rank_one_chart_point() {
        let vars = shared_table(|t| {
            t.add("z", true);
            t.add("q_1", true);
        });
        let z = Frac::from_poly(Poly::var(&vars, 0));
        let q = Frac::from_poly(Poly::var(&vars, 1));
        let one = Frac::one(&vars);
        let zero = Frac::zero(&vars);
        // x = [[1, z/q], [0, z^2/q]].
        let x = Matrix::from_rows(vec![
            vec![one.clone(), z.mul(&q.inv().unwrap())],
            vec![zero, z.mul(&z).mul(&q.inv().unwrap())],
        ]);
        let m = model(1, &[], SdotConvention::ExpPlus);
        let f = m.factorize(&x, true).unwrap();
        let w = m.superpotential(&f);
        let expect = z.add(&q.mul(&z.inv().unwrap()));
        assert_eq!(w, expect);
        assert_eq!(m.q_coordinates(&f), vec![q.clone()]);
        assert_eq!(m.recompose(&f), x);
        m.stratum_identity_check(&x, &f).unwrap();
    }

    #[test]
    fn gauge_and_center_invariance() {
        // Levi case with a nontrivial gauge direction.
        let m = model(2, &[2], SdotConvention::ExpPlus);
        let x = Matrix::from_rows(vec![
            vec![rint(5), rint(1), rint(0)],
            vec![rint(0), rint(3), rint(1)],
            vec![rint(0), rint(0), rint(2)],
        ]);
        let f = m.factorize(&x, true).unwrap();
        let w = m.superpotential(&f);
        let g = m.gauge_element(&Rat::one(), &[rfrac(7, 2)]);
        let moved = m.gauge_move(&f, &g);
        assert_eq!(m.superpotential(&moved), w);
        assert_eq!(m.recompose(&moved), x);

        let cx = x.scale(&rint(4));
        let fc = m.factorize(&cx, true).unwrap();
        assert_eq!(m.superpotential(&fc), w);
        assert_eq!(m.q_coordinates(&fc), m.q_coordinates(&f));
    }

    #[test]
    fn forced_zero_pattern_matches_vanishing_minors() {
        let m = model(2, &[2], SdotConvention::ExpPlus);
        assert_eq!(m.forced_zero_entries(), &[(0, 2)]);
        assert_eq!(m.vanishing_minors(1), vec![vec![3]]);
        assert!(m.vanishing_minors(2).is_empty());

        let borel = model(2, &[], SdotConvention::ExpPlus);
        assert!(borel.forced_zero_entries().is_empty());
        assert!(borel.vanishing_minors(1).is_empty());
    }

    #[test]
    fn base_torus_cascade() {
        let m = model(2, &[], SdotConvention::ExpPlus);
        let q = vec![rint(3), rint(5)];
        let t = m.base_point(&Rat::one(), &q);
        assert_eq!(t, vec![rint(15), rint(5), rint(1)]);

        let p2 = model(2, &[2], SdotConvention::ExpPlus);
        let t = p2.base_point(&Rat::one(), &[rint(7)]);
        assert_eq!(t, vec![rint(7), rint(1), rint(1)]);
    }

    #[test]
    fn self_test_accepts_patterned_samples() {
        let m = model(2, &[2], SdotConvention::ExpPlus);
        let mut samples = Vec::new();
        for (a, b, c, d, e) in [(5, 3, 2, 4, 7), (7, 2, 9, -3, 5), (11, 4, 3, 6, -2)] {
            samples.push(Matrix::from_rows(vec![
                vec![rint(a), rint(d), rint(0)],
                vec![rint(0), rint(b), rint(e)],
                vec![rint(0), rint(0), rint(c)],
            ]));
        }
        let hits = m.self_test(&samples).unwrap();
        assert_eq!(hits, 3);
    }

    #[test]
    fn raising_on_tensor_vectors() {
        let n = 3;
        let dom = DomChar::new(vec![1, 2], n);
        let m = model(2, &[], SdotConvention::ExpPlus);
        let low = m.lowest(&dom);
        // The string length in the first direction matches the character:
        // one raising step survives, the second vanishes.
        let once = low.raise(1);
        assert!(!once.is_zero());
        assert!(once.raise(1).is_zero());
    }
}
