//! Type-A root data: weights, coweights, the symmetric group as Weyl
//! group, parabolic subgroups and their minimal coset representatives.
//!
//! Weights are stored in the fundamental-weight basis and coweights in the
//! simple-coroot basis, so the canonical pairing is the plain dot product.
//! Weyl elements are permutations of `{1..n}`, `n = rank + 1`, acting on
//! both lattices through the standard coordinate lifts.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeylError {
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Type-A root system of the given rank (1 through 4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    rank: usize,
}

impl RootSystem {
    pub fn new(family: &str, rank: usize) -> Result<Self, WeylError> {
        if family != "A" {
            return Err(WeylError::Unsupported(format!(
                "type {family} is not handled; only type A is"
            )));
        }
        if !(1..=4).contains(&rank) {
            return Err(WeylError::Unsupported(format!(
                "rank {rank} is out of range; supported ranks are 1 through 4"
            )));
        }
        Ok(RootSystem { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Matrix size of the defining permutation representation.
    pub fn n(&self) -> usize {
        self.rank + 1
    }

    /// Positive roots ε_a - ε_b, ordered by (a, b).
    pub fn positive_roots(&self) -> Vec<PosRoot> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                let mut eps = vec![0i64; n];
                eps[a - 1] = 1;
                eps[b - 1] = -1;
                out.push(PosRoot {
                    a,
                    b,
                    root: Weight::from_eps(&eps),
                    coroot: Coweight::from_eps(&eps),
                    refl: WeylElt::transposition(n, a, b),
                });
            }
        }
        out
    }

    /// Half sum of the positive roots, which in the fundamental-weight
    /// basis is the all-ones vector.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Half sum of the positive coroots in the simple-coroot basis; the
    /// coordinates j(n-j)/2 are half-integers, returned as numerators of
    /// halves.
    pub fn two_rho_check(&self) -> Vec<i64> {
        let n = self.n() as i64;
        (1..=self.rank as i64).map(|j| j * (n - j)).collect()
    }
}

/// Weight in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

/// Coweight in the simple-coroot basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coweight(pub Vec<i64>);

impl Weight {
    pub fn fundamental(rank: usize, i: usize) -> Self {
        assert!((1..=rank).contains(&i));
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        Weight(v)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Coordinate lift to ε-space: ω_i has i leading ones.
    pub fn to_eps(&self) -> Vec<i64> {
        let r = self.0.len();
        let mut c = vec![0i64; r + 1];
        for j in 0..r {
            c[j] = self.0[j..].iter().sum();
        }
        c
    }

    /// Back from ε-space, discarding the determinant direction.
    pub fn from_eps(c: &[i64]) -> Weight {
        let r = c.len() - 1;
        Weight((0..r).map(|i| c[i] - c[i + 1]).collect())
    }
}

impl Coweight {
    pub fn simple(rank: usize, j: usize) -> Self {
        assert!((1..=rank).contains(&j));
        let mut v = vec![0; rank];
        v[j - 1] = 1;
        Coweight(v)
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Lift to ε-space with coordinate sum zero.
    pub fn to_eps(&self) -> Vec<i64> {
        let r = self.0.len();
        let mut d = vec![0i64; r + 1];
        d[0] = self.0[0];
        for j in 1..r {
            d[j] = self.0[j] - self.0[j - 1];
        }
        d[r] = -self.0[r - 1];
        d
    }

    pub fn from_eps(d: &[i64]) -> Coweight {
        let r = d.len() - 1;
        debug_assert_eq!(d.iter().sum::<i64>(), 0, "coweight lift must sum to zero");
        let mut acc = 0;
        Coweight(
            (0..r)
                .map(|j| {
                    acc += d[j];
                    acc
                })
                .collect(),
        )
    }
}

/// Canonical pairing, a plain dot product in these bases.
pub fn pairing(w: &Weight, c: &Coweight) -> i64 {
    w.0.iter().zip(&c.0).map(|(a, b)| a * b).sum()
}

/// Permutation of {1..n}, stored 0-based as the image list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeylElt {
    perm: Vec<usize>,
}

impl WeylElt {
    pub fn identity(n: usize) -> Self {
        WeylElt {
            perm: (0..n).collect(),
        }
    }

    pub fn simple(n: usize, i: usize) -> Self {
        WeylElt::transposition(n, i, i + 1)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        assert!(a >= 1 && b <= n && a < b);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(a - 1, b - 1);
        WeylElt { perm }
    }

    pub fn from_word(n: usize, word: &[usize]) -> Self {
        word.iter()
            .fold(WeylElt::identity(n), |acc, &i| acc.mul(&WeylElt::simple(n, i)))
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// Image of the 1-based index `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.perm[i - 1] + 1
    }

    pub fn mul(&self, other: &WeylElt) -> WeylElt {
        assert_eq!(self.perm.len(), other.perm.len());
        WeylElt {
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
        }
    }

    pub fn inv(&self) -> WeylElt {
        let mut perm = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        WeylElt { perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn length(&self) -> usize {
        let mut inv = 0;
        for i in 0..self.perm.len() {
            for j in i + 1..self.perm.len() {
                if self.perm[i] > self.perm[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    fn act_eps(&self, c: &[i64]) -> Vec<i64> {
        let mut out = vec![0; c.len()];
        for (i, &v) in c.iter().enumerate() {
            out[self.perm[i]] = v;
        }
        out
    }

    pub fn act_weight(&self, w: &Weight) -> Weight {
        Weight::from_eps(&self.act_eps(&w.to_eps()))
    }

    pub fn act_coweight(&self, c: &Coweight) -> Coweight {
        Coweight::from_eps(&self.act_eps(&c.to_eps()))
    }

    /// Lexicographically least reduced word, built by always taking the
    /// smallest left descent.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(w.length());
        while !w.is_identity() {
            let inv = w.inv();
            let i = (1..w.perm.len())
                .find(|&i| inv.apply(i) > inv.apply(i + 1))
                .expect("non-identity permutation has a left descent");
            word.push(i);
            w = WeylElt::simple(w.perm.len(), i).mul(&w);
        }
        word
    }

    pub fn word_string(&self) -> String {
        let word = self.reduced_word();
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter()
                .map(|i| format!("s{i}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// All permutations of {1..n}, unordered.
    pub fn all(n: usize) -> Vec<WeylElt> {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut out);
        out
    }
}

fn permute(perm: &mut Vec<usize>, k: usize, out: &mut Vec<WeylElt>) {
    if k == perm.len() {
        out.push(WeylElt { perm: perm.clone() });
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, out);
        perm.swap(k, i);
    }
}

impl fmt::Display for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word_string())
    }
}

/// Positive root ε_a - ε_b together with its frequently needed views.
#[derive(Debug, Clone)]
pub struct PosRoot {
    pub a: usize,
    pub b: usize,
    pub root: Weight,
    pub coroot: Coweight,
    pub refl: WeylElt,
}

impl PosRoot {
    /// True if the root lives in the Levi subsystem cut out by `levi`.
    pub fn in_levi(&self, levi: &[usize]) -> bool {
        (self.a..self.b).all(|i| levi.contains(&i))
    }
}

/// Parabolic datum: a root system plus a set of Levi simple indices.
#[derive(Debug, Clone)]
pub struct Parabolic {
    rs: RootSystem,
    levi: Vec<usize>,
    quantum: Vec<usize>,
}

impl Parabolic {
    pub fn new(rs: RootSystem, levi: &[usize]) -> Result<Self, WeylError> {
        let mut levi: Vec<usize> = levi.to_vec();
        levi.sort_unstable();
        levi.dedup();
        if let Some(&bad) = levi.iter().find(|&&i| i < 1 || i > rs.rank()) {
            return Err(WeylError::Unsupported(format!(
                "levi index {bad} is outside 1..={}",
                rs.rank()
            )));
        }
        let quantum: Vec<usize> = (1..=rs.rank()).filter(|i| !levi.contains(i)).collect();
        if quantum.is_empty() {
            return Err(WeylError::Unsupported(
                "the full Levi set leaves no quantum direction".into(),
            ));
        }
        Ok(Parabolic { rs, levi, quantum })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn n(&self) -> usize {
        self.rs.n()
    }

    pub fn levi(&self) -> &[usize] {
        &self.levi
    }

    /// Simple indices carrying a quantum parameter, ascending; the i-th
    /// quantum direction (1-based) is `quantum_roots()[i-1]`.
    pub fn quantum_roots(&self) -> &[usize] {
        &self.quantum
    }

    pub fn quantum_count(&self) -> usize {
        self.quantum.len()
    }

    /// A case label such as `A2/levi{2}` used in reports.
    pub fn label(&self) -> String {
        if self.levi.is_empty() {
            format!("A{}/B", self.rank())
        } else {
            let l: Vec<String> = self.levi.iter().map(|i| i.to_string()).collect();
            format!("A{}/levi{{{}}}", self.rank(), l.join(","))
        }
    }

    /// Positive roots outside the Levi subsystem, ordered by (a, b).
    pub fn complement_roots(&self) -> Vec<PosRoot> {
        self.rs
            .positive_roots()
            .into_iter()
            .filter(|r| !r.in_levi(&self.levi))
            .collect()
    }

    pub fn levi_roots(&self) -> Vec<PosRoot> {
        self.rs
            .positive_roots()
            .into_iter()
            .filter(|r| r.in_levi(&self.levi))
            .collect()
    }

    /// Longest element of the full Weyl group (the order reversal).
    pub fn longest(&self) -> WeylElt {
        let n = self.n();
        WeylElt {
            perm: (0..n).rev().collect(),
        }
    }

    /// Longest element of the Levi Weyl group: reversal inside each block
    /// of consecutive Levi indices.
    pub fn longest_levi(&self) -> WeylElt {
        let n = self.n();
        let mut perm: Vec<usize> = (0..n).collect();
        for (start, end) in self.levi_blocks() {
            perm[start - 1..end].reverse();
        }
        WeylElt { perm }
    }

    /// Maximal runs of consecutive Levi indices, as 1-based position
    /// ranges `(first, last)` on {1..n} (each run {i..j} of simple
    /// indices moves positions i through j+1).
    fn levi_blocks(&self) -> Vec<(usize, usize)> {
        let mut blocks = Vec::new();
        let mut iter = self.levi.iter().peekable();
        while let Some(&start) = iter.next() {
            let mut end = start;
            while iter.peek() == Some(&&(end + 1)) {
                end = *iter.next().unwrap();
            }
            blocks.push((start, end + 1));
        }
        blocks
    }

    /// Minimal-length representative of the coset w·W_P: sort the images
    /// inside every Levi block.
    pub fn project(&self, w: &WeylElt) -> WeylElt {
        let mut perm = w.perm.clone();
        for (start, end) in self.levi_blocks() {
            perm[start - 1..end].sort_unstable();
        }
        WeylElt { perm }
    }

    /// Minimal coset representatives, sorted by length and then by the
    /// lexicographically least reduced word; this order indexes every
    /// basis downstream.
    pub fn min_reps(&self) -> Vec<WeylElt> {
        let mut reps: Vec<WeylElt> = WeylElt::all(self.n())
            .into_iter()
            .filter(|w| {
                self.levi
                    .iter()
                    .all(|&i| w.apply(i) < w.apply(i + 1))
            })
            .collect();
        reps.sort_by_key(|w| (w.length(), w.reduced_word()));
        reps
    }

    /// Degree of the quantum parameter q_i (1-based), twice the pairing of
    /// the complement roots against the i-th quantum coroot.
    pub fn quantum_degree(&self, i: usize) -> i64 {
        let j = self.quantum[i - 1];
        let coroot = Coweight::simple(self.rank(), j);
        2 * self
            .complement_roots()
            .iter()
            .map(|r| pairing(&r.root, &coroot))
            .sum::<i64>()
    }

    /// Class of a coweight in the quotient by the Levi coroots: its
    /// coordinates at the quantum indices.
    pub fn coroot_class(&self, c: &Coweight) -> Vec<i64> {
        self.quantum.iter().map(|&j| c.0[j - 1]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsupported_inputs_error() {
        assert!(RootSystem::new("D", 4).is_err());
        assert!(RootSystem::new("A", 0).is_err());
        assert!(RootSystem::new("A", 5).is_err());
        let err = RootSystem::new("D", 4).unwrap_err();
        assert!(err.to_string().starts_with("unsupported"));
    }

    #[test]
    fn lengths_and_words() {
        let w0 = Parabolic::new(RootSystem::new("A", 2).unwrap(), &[])
            .unwrap()
            .longest();
        assert_eq!(w0.length(), 3);
        assert_eq!(w0.reduced_word(), vec![1, 2, 1]);
        let s1 = WeylElt::simple(3, 1);
        let s2 = WeylElt::simple(3, 2);
        assert_eq!(s1.mul(&s2).mul(&s1), s2.mul(&s1).mul(&s2));
    }

    #[test]
    fn weight_action_round_trips() {
        let rank = 3;
        let w = WeylElt::from_word(rank + 1, &[2, 1, 3]);
        for i in 1..=rank {
            let om = Weight::fundamental(rank, i);
            let moved = w.act_weight(&om);
            let back = w.inv().act_weight(&moved);
            assert_eq!(back, om);
        }
        let c = Coweight::simple(rank, 2);
        assert_eq!(w.inv().act_coweight(&w.act_coweight(&c)), c);
    }

    #[test]
    fn pairing_of_fundamentals_and_coroots() {
        // <ω_j, α_{ab}^∨> is 1 exactly when a <= j < b.
        let rs = RootSystem::new("A", 3).unwrap();
        for root in rs.positive_roots() {
            for j in 1..=3 {
                let om = Weight::fundamental(3, j);
                let expect = i64::from(root.a <= j && j < root.b);
                assert_eq!(pairing(&om, &root.coroot), expect);
            }
        }
    }

    #[test]
    fn coset_representatives_frozen_orders() {
        // A1: {e, s1}.
        let p = Parabolic::new(RootSystem::new("A", 1).unwrap(), &[]).unwrap();
        let reps = p.min_reps();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0].word_string(), "e");
        assert_eq!(reps[1].word_string(), "s1");

        // Projective plane: {e, s1, s2 s1}.
        let p = Parabolic::new(RootSystem::new("A", 2).unwrap(), &[2]).unwrap();
        let reps = p.min_reps();
        let words: Vec<String> = reps.iter().map(|w| w.word_string()).collect();
        assert_eq!(words, vec!["e", "s1", "s2 s1"]);

        // Full flag in rank 2: all six elements.
        let p = Parabolic::new(RootSystem::new("A", 2).unwrap(), &[]).unwrap();
        assert_eq!(p.min_reps().len(), 6);
    }

    #[test]
    fn quantum_degrees_frozen() {
        let b1 = Parabolic::new(RootSystem::new("A", 1).unwrap(), &[]).unwrap();
        assert_eq!(b1.quantum_degree(1), 4);
        let b2 = Parabolic::new(RootSystem::new("A", 2).unwrap(), &[]).unwrap();
        assert_eq!(b2.quantum_degree(1), 4);
        assert_eq!(b2.quantum_degree(2), 4);
        let p2 = Parabolic::new(RootSystem::new("A", 2).unwrap(), &[2]).unwrap();
        assert_eq!(p2.quantum_degree(1), 6);
    }

    #[test]
    fn projection_is_idempotent_and_shortens() {
        let p = Parabolic::new(RootSystem::new("A", 3).unwrap(), &[2, 3]).unwrap();
        for w in WeylElt::all(4) {
            let proj = p.project(&w);
            assert_eq!(p.project(&proj), proj);
            assert!(proj.length() <= w.length());
            assert!(p.min_reps().contains(&proj));
        }
    }
}
