use serde::{Deserialize, Serialize};

use super::presentation::PcPresentation;
use super::subgroup::SubgroupCgs;
use super::word::NormalWord;
use crate::error::PcError;
use crate::invariants::TypeInvariants;
use crate::snf::{p_valuation, smith_diagonal};

/// Characteristic series and size data of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub log_order: usize,
    pub class: usize,
    pub coclass: usize,
    pub derived_length: usize,
    /// Log orders of `γ_1 = G, γ_2, ...` down to the trivial term.
    pub lower_central: Vec<usize>,
    /// Log orders of `G, G', G'', ...` down to the trivial term.
    pub derived: Vec<usize>,
}

impl PcPresentation {
    /// Reduces `w` to its coset representative with zero exponent at every
    /// leading position of `n`.
    pub fn reduce_mod(&self, n: &SubgroupCgs, w: &NormalWord) -> NormalWord {
        let p = self.prime();
        let mut w = w.clone();
        for t in n.generators() {
            let d = t.depth().unwrap();
            let e = w.get(d);
            if e != 0 {
                w = self.multiply(&w, &self.pow(t, (p - e) as u64));
            }
        }
        w
    }

    /// Presentation of `G/N` on the generators not led by `N`.
    pub fn quotient(&self, n: &SubgroupCgs) -> Result<PcPresentation, PcError> {
        self.is_normal(n)?;
        Ok(self.quotient_unchecked(n))
    }

    pub(crate) fn quotient_unchecked(&self, n: &SubgroupCgs) -> PcPresentation {
        let depths = n.depths();
        let kept: Vec<usize> = (0..self.ngens()).filter(|d| !depths.contains(d)).collect();
        let m = kept.len();
        let project = |w: &NormalWord| {
            let r = self.reduce_mod(n, w);
            NormalWord::from_exponents(kept.iter().map(|&k| r.get(k)).collect())
        };
        let power = kept.iter().map(|&i| project(self.power_rhs(i))).collect();
        let comm = (0..m)
            .map(|b| (0..b).map(|a| project(self.comm_rhs(kept[b], kept[a]))).collect())
            .collect();
        let weights = kept.iter().map(|&i| self.weights()[i]).collect();
        PcPresentation::new(self.prime(), weights, power, comm, vec![None; m])
            .expect("quotient relations stay in pc form")
    }

    /// Presentation of a subgroup on its canonical generating sequence.
    pub fn induced_presentation(&self, h: &SubgroupCgs) -> PcPresentation {
        let gens = h.generators();
        let m = gens.len();
        let coords = |w: &NormalWord| {
            NormalWord::from_exponents(h.coordinates(self, w).expect("element of subgroup"))
        };
        let power = gens
            .iter()
            .map(|x| coords(&self.pow(x, self.prime() as u64)))
            .collect();
        let comm = (0..m)
            .map(|b| {
                (0..b)
                    .map(|a| coords(&self.commutator(&gens[b], &gens[a])))
                    .collect()
            })
            .collect();
        let weights = gens
            .iter()
            .map(|x| self.weights()[x.depth().unwrap()])
            .collect();
        PcPresentation::new(self.prime(), weights, power, comm, vec![None; m])
            .expect("induced relations stay in pc form")
    }

    /// Abelian invariants of the group itself.
    pub fn abelian_invariants(&self) -> TypeInvariants {
        let q = self.quotient_unchecked(&self.derived_subgroup());
        abelian_invariants_of_abelian(&q)
    }

    /// Abelian invariants of `H/H'`.
    pub fn subgroup_abelian_invariants(&self, h: &SubgroupCgs) -> TypeInvariants {
        self.induced_presentation(h).abelian_invariants()
    }

    /// Abelian invariants of the section `H/N` for `N` normal in `H`.
    pub fn section_invariants(&self, h: &SubgroupCgs, n: &SubgroupCgs) -> TypeInvariants {
        let ph = self.induced_presentation(h);
        let nw: Vec<NormalWord> = n
            .generators()
            .iter()
            .map(|w| NormalWord::from_exponents(h.coordinates(self, w).expect("N inside H")))
            .collect();
        let ns = ph.subgroup(&nw);
        ph.quotient_unchecked(&ns).abelian_invariants()
    }

    pub fn lower_central_series(&self) -> Vec<SubgroupCgs> {
        let whole = self.whole_group();
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                break;
            }
            let next = self.commutator_subgroup(last, &whole);
            series.push(next);
        }
        series
    }

    pub fn derived_series(&self) -> Vec<SubgroupCgs> {
        let mut series = vec![self.whole_group()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                break;
            }
            let next = self.derived_of(last);
            if next == *last {
                break;
            }
            series.push(next);
        }
        series
    }

    /// Lower exponent-p central series `P_1 = G`, `P_{k+1} = [P_k, G] P_k^p`.
    pub fn lower_exponent_p_central_series(&self) -> Vec<SubgroupCgs> {
        let p = self.prime() as u64;
        let gens: Vec<NormalWord> = (0..self.ngens()).map(|i| self.generator(i)).collect();
        let mut series = vec![self.whole_group()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                break;
            }
            let mut words = Vec::new();
            for x in last.generators() {
                words.push(self.pow(x, p));
                for g in &gens {
                    words.push(self.commutator(x, g));
                }
            }
            let next = self.normal_closure(&words, &gens);
            series.push(next);
        }
        series
    }

    pub fn nilpotency_class(&self) -> usize {
        self.lower_central_series().len() - 1
    }

    pub fn series_and_sizes(&self) -> SeriesReport {
        let lcs = self.lower_central_series();
        let ds = self.derived_series();
        let class = lcs.len() - 1;
        SeriesReport {
            log_order: self.log_order(),
            class,
            coclass: self.log_order() - class,
            derived_length: ds.len() - 1,
            lower_central: lcs.iter().map(|s| s.log_order()).collect(),
            derived: ds.iter().map(|s| s.log_order()).collect(),
        }
    }

    /// `G/G''`.
    pub fn metabelianization(&self) -> PcPresentation {
        let d1 = self.derived_subgroup();
        let d2 = self.derived_of(&d1);
        self.quotient_unchecked(&d2)
    }
}

/// Abelian invariants of an abelian pc-group from its power relations.
fn abelian_invariants_of_abelian(g: &PcPresentation) -> TypeInvariants {
    let n = g.ngens();
    if n == 0 {
        return TypeInvariants::trivial();
    }
    let p = g.prime() as i128;
    let rows: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let w = g.power_rhs(i);
            (0..n)
                .map(|k| if k == i { p } else { 0 } - w.get(k) as i128)
                .collect()
        })
        .collect();
    let diag = smith_diagonal(rows);
    TypeInvariants::new(diag.iter().map(|d| p_valuation(d, &p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    // C9 x C3 given as g1^3 = g3
    fn c9xc3() -> PcPresentation {
        let n = 3;
        let id = NormalWord::identity(n);
        let power = vec![NormalWord::generator(n, 2), id.clone(), id.clone()];
        let comm = vec![vec![], vec![id.clone()], vec![id.clone(), id]];
        PcPresentation::new(3, vec![1; 3], power, comm, vec![None; 3]).unwrap()
    }

    #[test]
    fn abelian_invariants_cyclic_factor() {
        assert_eq!(c9xc3().abelian_invariants().to_string(), "21");
        assert!(PcPresentation::trivial(3).abelian_invariants().is_trivial());
    }

    #[test]
    fn quotient_by_whole_and_trivial() {
        let g = c9xc3();
        assert_eq!(g.quotient(&g.whole_group()).unwrap().ngens(), 0);
        let same = g.quotient(&SubgroupCgs::trivial(3)).unwrap();
        assert_eq!(same, g);
    }

    #[test]
    fn series_of_elementary_abelian() {
        let r = PcPresentation::elementary_abelian(3, 2).series_and_sizes();
        assert_eq!((r.class, r.coclass, r.derived_length), (1, 1, 1));
    }

    #[test]
    fn section_invariants_of_subgroup() {
        let g = c9xc3();
        let h = g.subgroup(&[g.generator(0)]);
        assert_eq!(g.subgroup_abelian_invariants(&h).to_string(), "2");
        let n = g.subgroup(&[g.generator(2)]);
        assert_eq!(g.section_invariants(&h, &n).to_string(), "1");
    }
}
