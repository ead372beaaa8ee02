use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::{NormalWord, Syllable};
use crate::error::PcError;

/// Records which relation introduced a generator during p-quotient lifting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Definition {
    /// Image of the given generator of the finitely presented group.
    Defining(u16),
    /// `g = g_i^p`.
    Power(u16),
    /// `g = [g_j, g_i]` with `j > i`.
    Commutator(u16, u16),
}

/// Consistent power-commutator presentation of a finite p-group.
///
/// Commutators follow `[a,b] = a^-1 b^-1 a b`, so `g_j g_i = g_i g_j [g_j,g_i]`.
#[derive(Clone)]
pub struct PcPresentation {
    prime: u8,
    weights: Vec<u32>,
    power: Vec<NormalWord>,
    comm: Vec<Vec<NormalWord>>,
    definitions: Vec<Option<Definition>>,
    tables: Tables,
}

#[derive(Clone, Default)]
struct Tables {
    power: Vec<Vec<Syllable>>,
    // conj[k][i] = g_k^{g_i} = g_k [g_k, g_i] for i < k
    conj: Vec<Vec<Vec<Syllable>>>,
    inverse: Vec<Vec<Syllable>>,
    noncomm_above: Vec<Vec<u16>>,
    central: Vec<bool>,
}

impl PartialEq for PcPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.power == other.power && self.comm == other.comm
    }
}

impl Eq for PcPresentation {}

impl fmt::Debug for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Failed overlap in the consistency test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: OverlapKind,
    /// Generator indices of the overlap, highest first.
    pub indices: Vec<usize>,
    pub left: NormalWord,
    pub right: NormalWord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapKind {
    /// `(g_k g_j) g_i` against `g_k (g_j g_i)`.
    Triple,
    /// `(g_j^p) g_i` against `g_j^(p-1) (g_j g_i)`.
    PowerLeft,
    /// `g_j (g_i^p)` against `(g_j g_i) g_i^(p-1)`.
    PowerRight,
    /// `g_i (g_i^p)` against `(g_i^p) g_i`.
    PowerSelf,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.indices.iter().map(|i| format!("g{}", i + 1)).collect();
        write!(
            f,
            "{:?} overlap ({}): {} != {}",
            self.kind,
            names.join(","),
            self.left,
            self.right
        )
    }
}

impl PcPresentation {
    /// Builds a presentation from its relations.
    ///
    /// `comm[j]` holds the `j` words `[g_j, g_i]` for `i < j`.
    pub fn new(
        prime: u8,
        weights: Vec<u32>,
        power: Vec<NormalWord>,
        comm: Vec<Vec<NormalWord>>,
        definitions: Vec<Option<Definition>>,
    ) -> Result<Self, PcError> {
        let n = power.len();
        if weights.len() != n || comm.len() != n || definitions.len() != n {
            return Err(PcError::GeneratorOutOfRange {
                index: weights.len().max(comm.len()),
                ngens: n,
            });
        }
        for (i, w) in power.iter().enumerate() {
            check_word(w, n, prime, i, || format!("g{}^p", i + 1))?;
        }
        for (j, row) in comm.iter().enumerate() {
            if row.len() != j {
                return Err(PcError::GeneratorOutOfRange {
                    index: row.len(),
                    ngens: j,
                });
            }
            for (i, w) in row.iter().enumerate() {
                check_word(w, n, prime, j, || format!("[g{},g{}]", j + 1, i + 1))?;
            }
        }
        let mut g = PcPresentation {
            prime,
            weights,
            power,
            comm,
            definitions,
            tables: Tables::default(),
        };
        g.build_tables();
        Ok(g)
    }

    pub fn trivial(prime: u8) -> Self {
        Self::new(prime, vec![], vec![], vec![], vec![]).expect("trivial group")
    }

    pub fn elementary_abelian(prime: u8, rank: usize) -> Self {
        let power = vec![NormalWord::identity(rank); rank];
        let comm = (0..rank).map(|j| vec![NormalWord::identity(rank); j]).collect();
        let defs = (0..rank).map(|i| Some(Definition::Defining(i as u16))).collect();
        Self::new(prime, vec![1; rank], power, comm, defs).expect("elementary abelian")
    }

    fn build_tables(&mut self) {
        let n = self.ngens();
        let mut t = Tables {
            power: self.power.iter().map(|w| w.syllables()).collect(),
            conj: vec![vec![]; n],
            inverse: vec![vec![]; n],
            noncomm_above: vec![vec![]; n],
            central: vec![true; n],
        };
        for k in 0..n {
            for i in 0..k {
                let c = &self.comm[k][i];
                let mut syl = vec![(k as u16, 1u8)];
                syl.extend(c.syllables());
                t.conj[k].push(syl);
                if !c.is_identity() {
                    t.noncomm_above[i].push(k as u16);
                    t.central[k] = false;
                    t.central[i] = false;
                }
            }
        }
        self.tables = t;
        let inverses: Vec<Vec<Syllable>> = (0..n)
            .map(|i| self.inverse(&NormalWord::generator(n, i)).syllables())
            .collect();
        self.tables.inverse = inverses;
    }

    pub fn prime(&self) -> u8 {
        self.prime
    }

    pub fn ngens(&self) -> usize {
        self.power.len()
    }

    /// Logarithm of the group order to base p.
    pub fn log_order(&self) -> usize {
        self.ngens()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn definitions(&self) -> &[Option<Definition>] {
        &self.definitions
    }

    pub fn power_rhs(&self, i: usize) -> &NormalWord {
        &self.power[i]
    }

    /// `[g_j, g_i]` for `j > i`.
    pub fn comm_rhs(&self, j: usize, i: usize) -> &NormalWord {
        &self.comm[j][i]
    }

    pub fn is_central(&self, i: usize) -> bool {
        self.tables.central[i]
    }

    pub fn identity(&self) -> NormalWord {
        NormalWord::identity(self.ngens())
    }

    pub fn generator(&self, i: usize) -> NormalWord {
        NormalWord::generator(self.ngens(), i)
    }

    /// Right-multiplies `acc` by the product of `syllables`, collecting from the left.
    /// Syllable exponents must lie in `[1, p)`.
    pub fn mul_syllables(&self, acc: &mut NormalWord, syllables: &[Syllable]) {
        let mut stack: Vec<Syllable> = syllables.iter().rev().copied().collect();
        self.run(acc.exponents_mut(), &mut stack);
    }

    fn run(&self, e: &mut [u8], stack: &mut Vec<Syllable>) {
        let p = self.prime;
        let t = &self.tables;
        let mut tail: Vec<Syllable> = Vec::new();
        while let Some((g, m)) = stack.pop() {
            let gi = g as usize;
            let blocked = t.noncomm_above[gi].iter().any(|&k| e[k as usize] != 0);
            if !blocked {
                let s = e[gi] + m;
                if s < p {
                    e[gi] = s;
                    continue;
                }
                e[gi] = s - p;
                if t.power[gi].is_empty() {
                    continue;
                }
                self.pull_tail(e, gi, &mut tail);
                stack.extend(tail.iter().rev().copied());
                stack.extend(t.power[gi].iter().rev().copied());
            } else {
                if m > 1 {
                    stack.push((g, m - 1));
                }
                self.pull_tail(e, gi, &mut tail);
                for &(k, ek) in tail.iter().rev() {
                    let conj = &t.conj[k as usize][gi];
                    for _ in 0..ek {
                        stack.extend(conj.iter().rev().copied());
                    }
                }
                let s = e[gi] + 1;
                if s == p {
                    e[gi] = 0;
                    stack.extend(t.power[gi].iter().rev().copied());
                } else {
                    e[gi] = s;
                }
            }
        }
    }

    fn pull_tail(&self, e: &mut [u8], g: usize, tail: &mut Vec<Syllable>) {
        tail.clear();
        for k in g + 1..e.len() {
            if e[k] != 0 && !self.tables.central[k] {
                tail.push((k as u16, e[k]));
                e[k] = 0;
            }
        }
    }

    pub fn multiply(&self, a: &NormalWord, b: &NormalWord) -> NormalWord {
        let mut r = a.clone();
        self.mul_syllables(&mut r, &b.syllables());
        r
    }

    /// Collects a word of generator letters with arbitrary integer exponents.
    pub fn collect_letters(&self, letters: &[(usize, i64)]) -> NormalWord {
        let mut acc = self.identity();
        self.mul_letters(&mut acc, letters);
        acc
    }

    pub fn mul_letters(&self, acc: &mut NormalWord, letters: &[(usize, i64)]) {
        let p = self.prime as i64;
        for &(g, e) in letters {
            if e == 0 {
                continue;
            }
            let r = e.rem_euclid(p);
            let q = e.div_euclid(p);
            if r != 0 {
                self.mul_syllables(acc, &[(g as u16, r as u8)]);
            }
            // g^e = g^r (g^p)^q with g^p commuting with g
            if q > 0 {
                for _ in 0..q {
                    self.mul_syllables(acc, &self.tables.power[g]);
                }
            } else if q < 0 {
                let inv = self.inverse(&self.power[g]).syllables();
                for _ in 0..(-q) {
                    self.mul_syllables(acc, &inv);
                }
            }
        }
    }

    pub fn inverse(&self, a: &NormalWord) -> NormalWord {
        let p = self.prime;
        let mut u = a.clone();
        let mut v = self.identity();
        for k in 0..self.ngens() {
            let x = u.get(k);
            if x != 0 {
                let y = p - x;
                self.mul_syllables(&mut u, &[(k as u16, y)]);
                v.exponents_mut()[k] = y;
            }
        }
        v
    }

    pub fn generator_inverse(&self, i: usize) -> &[Syllable] {
        &self.tables.inverse[i]
    }

    pub fn pow(&self, a: &NormalWord, mut k: u64) -> NormalWord {
        let mut result = self.identity();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = self.multiply(&result, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.multiply(&base, &base);
            }
        }
        result
    }

    /// `[a,b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &NormalWord, b: &NormalWord) -> NormalWord {
        let ba = self.multiply(b, a);
        let ab = self.multiply(a, b);
        self.multiply(&self.inverse(&ba), &ab)
    }

    /// `a^b = b^-1 a b`.
    pub fn conjugate(&self, a: &NormalWord, b: &NormalWord) -> NormalWord {
        let ab = self.multiply(a, b);
        self.multiply(&self.inverse(b), &ab)
    }

    /// Logarithm of the order of `a`.
    pub fn element_order_log(&self, a: &NormalWord) -> u32 {
        let mut x = a.clone();
        let mut k = 0;
        while !x.is_identity() {
            x = self.pow(&x, self.prime as u64);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.comm.iter().flatten().all(|w| w.is_identity())
    }

    /// Checks the standard overlaps for a pc-presentation of a p-group.
    pub fn consistency_check(&self) -> Vec<Violation> {
        self.overlaps(self.ngens())
            .into_iter()
            .filter(|v| v.left != v.right)
            .collect()
    }

    /// Both sides of every standard overlap among the first `upto` generators.
    pub(crate) fn overlaps(&self, upto: usize) -> Vec<Violation> {
        let p = self.prime;
        let mut out = Vec::new();
        let gen = |i: usize| self.generator(i);
        let mut record = |kind, indices: Vec<usize>, left: NormalWord, right: NormalWord| {
            out.push(Violation {
                kind,
                indices,
                left,
                right,
            });
        };
        for k in 0..upto {
            for j in 0..k {
                let kj = self.multiply(&gen(k), &gen(j));
                for i in 0..j {
                    let left = self.multiply(&kj, &gen(i));
                    let right = self.multiply(&gen(k), &self.multiply(&gen(j), &gen(i)));
                    record(OverlapKind::Triple, vec![k, j, i], left, right);
                }
            }
        }
        for j in 0..upto {
            let gj_pm1 = self.pow(&gen(j), p as u64 - 1);
            for i in 0..j {
                let left = self.multiply(&self.power[j], &gen(i));
                let right = self.multiply(&gj_pm1, &self.multiply(&gen(j), &gen(i)));
                record(OverlapKind::PowerLeft, vec![j, i], left, right);
            }
        }
        for i in 0..upto {
            let gi_pm1 = self.pow(&gen(i), p as u64 - 1);
            for j in i + 1..upto {
                let left = self.multiply(&gen(j), &self.power[i]);
                let right = self.multiply(&self.multiply(&gen(j), &gen(i)), &gi_pm1);
                record(OverlapKind::PowerRight, vec![j, i], left, right);
            }
            let left = self.multiply(&gen(i), &self.power[i]);
            let right = self.multiply(&self.power[i], &gen(i));
            record(OverlapKind::PowerSelf, vec![i], left, right);
        }
        out
    }

    pub fn is_consistent(&self) -> bool {
        self.consistency_check().is_empty()
    }

    /// Replaces the definition tags, keeping all relations.
    pub fn with_definitions(mut self, definitions: Vec<Option<Definition>>) -> Self {
        assert_eq!(definitions.len(), self.ngens());
        self.definitions = definitions;
        self
    }

    pub fn with_weights(mut self, weights: Vec<u32>) -> Self {
        assert_eq!(weights.len(), self.ngens());
        self.weights = weights;
        self
    }

    /// True when every generator carries a definition tag.
    pub fn has_definitions(&self) -> bool {
        self.definitions.iter().all(|d| d.is_some())
    }
}

fn check_word(
    w: &NormalWord,
    n: usize,
    prime: u8,
    bound: usize,
    name: impl Fn() -> String,
) -> Result<(), PcError> {
    if w.len() != n {
        return Err(PcError::GeneratorOutOfRange {
            index: w.len(),
            ngens: n,
        });
    }
    for (k, &e) in w.exponents().iter().enumerate() {
        if e >= prime {
            return Err(PcError::ExponentRange {
                exponent: e as u32,
                prime,
            });
        }
        if e != 0 && k <= bound {
            return Err(PcError::NotAboveIndex {
                relation: name(),
                found: k + 1,
                bound: bound + 1,
            });
        }
    }
    Ok(())
}
