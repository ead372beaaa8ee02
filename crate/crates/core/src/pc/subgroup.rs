use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::presentation::PcPresentation;
use super::word::NormalWord;
use crate::error::PcError;

/// Canonical generating sequence of a subgroup.
///
/// Generators are sorted by depth, each has leading exponent 1 and zero
/// exponent at the leading position of every other generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupCgs {
    ngens: usize,
    gens: Vec<NormalWord>,
}

impl SubgroupCgs {
    pub fn trivial(ngens: usize) -> Self {
        SubgroupCgs { ngens, gens: vec![] }
    }

    pub fn generators(&self) -> &[NormalWord] {
        &self.gens
    }

    pub fn depths(&self) -> Vec<usize> {
        self.gens.iter().map(|g| g.depth().unwrap()).collect()
    }

    pub fn log_order(&self) -> usize {
        self.gens.len()
    }

    /// Logarithm of the index in the ambient group.
    pub fn log_index(&self) -> usize {
        self.ngens - self.gens.len()
    }

    pub fn ambient_ngens(&self) -> usize {
        self.ngens
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.gens.len() == self.ngens
    }

    pub fn contains(&self, g: &PcPresentation, w: &NormalWord) -> bool {
        let table = self.table();
        sift(g, &table, w.clone()).is_none()
    }

    pub fn is_subgroup_of(&self, g: &PcPresentation, other: &SubgroupCgs) -> bool {
        self.gens.iter().all(|w| other.contains(g, w))
    }

    fn table(&self) -> Vec<Option<NormalWord>> {
        let mut t = vec![None; self.ngens];
        for w in &self.gens {
            t[w.depth().unwrap()] = Some(w.clone());
        }
        t
    }

    /// Writes an element as `h_1^{c_1} ... h_m^{c_m}` in the generators of the CGS.
    pub fn coordinates(&self, g: &PcPresentation, w: &NormalWord) -> Result<Vec<u8>, PcError> {
        let mut y = w.clone();
        let mut coords = Vec::with_capacity(self.gens.len());
        for h in &self.gens {
            let d = h.depth().unwrap();
            let c = y.get(d);
            coords.push(c);
            if c != 0 {
                let hinv = g.inverse(&g.pow(h, c as u64));
                y = g.multiply(&hinv, &y);
            }
            if y.exponents()[..=d].iter().any(|&e| e != 0) {
                return Err(PcError::NotInSubgroup);
            }
        }
        if y.is_identity() {
            Ok(coords)
        } else {
            Err(PcError::NotInSubgroup)
        }
    }
}

// Reduces w against the table; returns the residue if it is not in the span.
fn sift(g: &PcPresentation, table: &[Option<NormalWord>], mut w: NormalWord) -> Option<NormalWord> {
    let p = g.prime();
    loop {
        let d = w.depth()?;
        match &table[d] {
            Some(t) => {
                let l = w.get(d);
                let tp = g.pow(t, (p - l) as u64);
                w = g.multiply(&w, &tp);
            }
            None => return Some(w),
        }
    }
}

fn inv_mod(a: u8, p: u8) -> u8 {
    (1..p).find(|&x| (a as u32 * x as u32) % p as u32 == 1).unwrap()
}

/// Incremental closure of a subgroup under multiplication.
pub struct SubgroupBuilder<'a> {
    g: &'a PcPresentation,
    table: Vec<Option<NormalWord>>,
    // every element placed in the table, in insertion order
    log: Vec<NormalWord>,
}

impl<'a> SubgroupBuilder<'a> {
    pub fn new(g: &'a PcPresentation) -> Self {
        SubgroupBuilder {
            g,
            table: vec![None; g.ngens()],
            log: vec![],
        }
    }

    pub fn from_cgs(g: &'a PcPresentation, h: &SubgroupCgs) -> Self {
        SubgroupBuilder {
            g,
            table: h.table(),
            log: h.gens.clone(),
        }
    }

    pub fn contains(&self, w: &NormalWord) -> bool {
        sift(self.g, &self.table, w.clone()).is_none()
    }

    /// Adds an element and closes; returns whether the subgroup grew.
    pub fn add(&mut self, w: NormalWord) -> bool {
        let g = self.g;
        let p = g.prime();
        let mut queue = VecDeque::from([w]);
        let mut grew = false;
        while let Some(x) = queue.pop_front() {
            let Some(r) = sift(g, &self.table, x) else {
                continue;
            };
            let d = r.depth().unwrap();
            let r = g.pow(&r, inv_mod(r.get(d), p) as u64);
            queue.push_back(g.pow(&r, p as u64));
            for t in self.table.iter().flatten() {
                queue.push_back(g.commutator(&r, t));
            }
            self.table[d] = Some(r.clone());
            self.log.push(r);
            grew = true;
        }
        grew
    }

    pub fn finish(self) -> SubgroupCgs {
        let g = self.g;
        let p = g.prime();
        let n = g.ngens();
        let depths: Vec<usize> = (0..n).filter(|&d| self.table[d].is_some()).collect();
        let mut reduced: Vec<Option<NormalWord>> = vec![None; n];
        for &d in depths.iter().rev() {
            let mut w = self.table[d].clone().unwrap();
            for &d2 in depths.iter().filter(|&&d2| d2 > d) {
                let e = w.get(d2);
                if e != 0 {
                    let t = reduced[d2].as_ref().unwrap();
                    w = g.multiply(&w, &g.pow(t, (p - e) as u64));
                }
            }
            reduced[d] = Some(w);
        }
        SubgroupCgs {
            ngens: n,
            gens: reduced.into_iter().flatten().collect(),
        }
    }
}

impl PcPresentation {
    pub fn subgroup(&self, words: &[NormalWord]) -> SubgroupCgs {
        let mut b = SubgroupBuilder::new(self);
        for w in words {
            b.add(w.clone());
        }
        b.finish()
    }

    pub fn whole_group(&self) -> SubgroupCgs {
        let gens: Vec<NormalWord> = (0..self.ngens()).map(|i| self.generator(i)).collect();
        SubgroupCgs {
            ngens: self.ngens(),
            gens,
        }
    }

    /// Normal closure of `words` under conjugation by `by`.
    pub fn normal_closure(&self, words: &[NormalWord], by: &[NormalWord]) -> SubgroupCgs {
        let mut b = SubgroupBuilder::new(self);
        for w in words {
            b.add(w.clone());
        }
        // the logged elements generate the subgroup, so conjugating each once suffices
        let mut next = 0;
        while next < b.log.len() {
            let s = b.log[next].clone();
            next += 1;
            for x in by {
                b.add(self.commutator(&s, x));
            }
        }
        b.finish()
    }

    /// Normal closure in the whole group.
    pub fn normal_closure_in_group(&self, words: &[NormalWord]) -> SubgroupCgs {
        let gens: Vec<NormalWord> = (0..self.ngens()).map(|i| self.generator(i)).collect();
        self.normal_closure(words, &gens)
    }

    /// `[A, B]` for subgroups with `A` normalized by `B` and by the ambient group
    /// generated by `A` and `B`.
    pub fn commutator_subgroup(&self, a: &SubgroupCgs, b: &SubgroupCgs) -> SubgroupCgs {
        let mut words = Vec::new();
        for x in a.generators() {
            for y in b.generators() {
                words.push(self.commutator(x, y));
            }
        }
        let mut by: Vec<NormalWord> = a.generators().to_vec();
        by.extend(b.generators().iter().cloned());
        self.normal_closure(&words, &by)
    }

    /// Derived subgroup of a subgroup `H`.
    pub fn derived_of(&self, h: &SubgroupCgs) -> SubgroupCgs {
        let gens = h.generators();
        let mut words = Vec::new();
        for (j, x) in gens.iter().enumerate() {
            for y in &gens[..j] {
                words.push(self.commutator(x, y));
            }
        }
        self.normal_closure(&words, gens)
    }

    pub fn derived_subgroup(&self) -> SubgroupCgs {
        self.derived_of(&self.whole_group())
    }

    /// Frattini subgroup `G^p G'`.
    pub fn frattini(&self) -> SubgroupCgs {
        let n = self.ngens();
        let mut words: Vec<NormalWord> = (0..n).map(|i| self.power_rhs(i).clone()).collect();
        for j in 0..n {
            for i in 0..j {
                words.push(self.comm_rhs(j, i).clone());
            }
        }
        self.normal_closure_in_group(&words)
    }

    /// Generator rank `d1`.
    pub fn generator_rank(&self) -> usize {
        self.frattini().log_index()
    }

    pub fn is_normal(&self, h: &SubgroupCgs) -> Result<(), PcError> {
        for w in h.generators() {
            for i in 0..self.ngens() {
                let c = self.conjugate(w, &self.generator(i));
                if !h.contains(self, &c) {
                    return Err(PcError::NotNormal {
                        element: w.to_string(),
                        generator: i + 1,
                    });
                }
            }
        }
        Ok(())
    }

    /// Index-p subgroups, enumerated by their normalized annihilating functional
    /// on `G/Φ(G)` in lexicographic order (first nonzero coordinate 1).
    pub fn maximal_subgroups(&self) -> Vec<SubgroupCgs> {
        let phi = self.frattini();
        let p = self.prime();
        let n = self.ngens();
        let phi_depths = phi.depths();
        let basis: Vec<usize> = (0..n).filter(|d| !phi_depths.contains(d)).collect();
        let d = basis.len();
        let mut out = Vec::new();
        for f in normalized_vectors(d, p) {
            let lead = f.iter().position(|&x| x != 0).unwrap();
            let mut words = phi.generators().to_vec();
            for k in 0..d {
                if k == lead {
                    continue;
                }
                // v = e_k - f_k e_lead lies in ker f
                let mut exps = vec![0u8; n];
                exps[basis[k]] = 1;
                exps[basis[lead]] = (p - f[k]) % p;
                words.push(self.vector_element(&exps));
            }
            out.push(self.subgroup(&words));
        }
        out
    }

    // Element with the given exponents at distinct positions, multiplied in order.
    fn vector_element(&self, exps: &[u8]) -> NormalWord {
        NormalWord::from_exponents(exps.to_vec())
    }
}

/// Nonzero vectors of `F_p^d` with first nonzero coordinate 1, in lexicographic order.
pub fn normalized_vectors(d: usize, p: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let total = (p as usize).pow(d as u32);
    for code in 0..total {
        let mut v = vec![0u8; d];
        let mut c = code;
        for k in (0..d).rev() {
            v[k] = (c % p as usize) as u8;
            c /= p as usize;
        }
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg() -> PcPresentation {
        let n = 3;
        let id = NormalWord::identity(n);
        let comm = vec![vec![], vec![NormalWord::generator(n, 2)], vec![id.clone(), id.clone()]];
        PcPresentation::new(3, vec![1, 1, 2], vec![id; 3], comm, vec![None; 3]).unwrap()
    }

    #[test]
    fn trivial_subgroup() {
        let g = heisenberg();
        let h = g.subgroup(&[g.identity()]);
        assert!(h.is_trivial());
        assert_eq!(h.log_index(), 3);
    }

    #[test]
    fn maximal_subgroups_count() {
        let g = heisenberg();
        let m = g.maximal_subgroups();
        assert_eq!(m.len(), 4);
        for h in &m {
            assert_eq!(h.log_index(), 1);
            assert!(g.is_normal(h).is_ok());
        }
        assert_eq!(PcPresentation::elementary_abelian(3, 3).maximal_subgroups().len(), 13);
        assert_eq!(PcPresentation::elementary_abelian(3, 1).maximal_subgroups().len(), 1);
    }

    #[test]
    fn resifting_is_idempotent() {
        let g = heisenberg();
        let h = g.subgroup(&[NormalWord::from_exponents(vec![1, 2, 1])]);
        assert_eq!(g.subgroup(h.generators()), h);
        assert_eq!(h.log_order(), 1);
    }

    #[test]
    fn derived_of_heisenberg() {
        let g = heisenberg();
        assert_eq!(g.derived_subgroup().depths(), vec![2]);
        assert_eq!(g.generator_rank(), 2);
    }

    #[test]
    fn non_normal_rejected() {
        let g = heisenberg();
        let h = g.subgroup(&[g.generator(0)]);
        assert!(g.is_normal(&h).is_err());
    }

    #[test]
    fn coordinates_roundtrip() {
        let g = heisenberg();
        let h = g.subgroup(&[g.generator(1), g.generator(2)]);
        let w = NormalWord::from_exponents(vec![0, 2, 1]);
        let c = h.coordinates(&g, &w).unwrap();
        let mut x = g.identity();
        for (hk, &ck) in h.generators().iter().zip(&c) {
            x = g.multiply(&x, &g.pow(hk, ck as u64));
        }
        assert_eq!(x, w);
        assert!(h.coordinates(&g, &g.generator(0)).is_err());
    }
}
