use crate::error::PcError;
use crate::pc::{NormalWord, PcPresentation, SubgroupBuilder, SubgroupCgs};

/// Artin transfer from `G` to a normal subgroup `H` of index p, with values in `H/H'`.
#[derive(Clone, Debug)]
pub struct Transfer<'a> {
    g: &'a PcPresentation,
    h: SubgroupCgs,
    h_derived: SubgroupCgs,
    transversal: Vec<NormalWord>,
}

impl<'a> Transfer<'a> {
    /// Uses the transversal `1, x, x^2, ...` for the first generator `x` outside `H`.
    pub fn new(g: &'a PcPresentation, h: &SubgroupCgs) -> Result<Self, PcError> {
        check_maximal(g, h)?;
        let x = (0..g.ngens())
            .map(|i| g.generator(i))
            .find(|x| !h.contains(g, x))
            .expect("proper subgroup misses a generator");
        let transversal = (0..g.prime() as u64).map(|k| g.pow(&x, k)).collect();
        Self::with_transversal(g, h, transversal)
    }

    /// Uses the given right transversal, one representative per coset.
    pub fn with_transversal(
        g: &'a PcPresentation,
        h: &SubgroupCgs,
        transversal: Vec<NormalWord>,
    ) -> Result<Self, PcError> {
        check_maximal(g, h)?;
        let p = g.prime() as usize;
        let distinct = transversal.len() == p
            && (0..p).all(|a| {
                (0..a).all(|b| {
                    let q = g.multiply(&transversal[a], &g.inverse(&transversal[b]));
                    !h.contains(g, &q)
                })
            });
        if !distinct {
            return Err(PcError::NotTransversal);
        }
        Ok(Transfer {
            g,
            h: h.clone(),
            h_derived: g.derived_of(h),
            transversal,
        })
    }

    pub fn subgroup(&self) -> &SubgroupCgs {
        &self.h
    }

    pub fn derived(&self) -> &SubgroupCgs {
        &self.h_derived
    }

    pub fn transversal(&self) -> &[NormalWord] {
        &self.transversal
    }

    /// Image of `x`, as the canonical representative of its coset of `H'`.
    pub fn apply(&self, x: &NormalWord) -> NormalWord {
        let g = self.g;
        let mut acc = g.identity();
        for t in &self.transversal {
            let tx = g.multiply(t, x);
            let back = self
                .transversal
                .iter()
                .map(|r| g.multiply(&tx, &g.inverse(r)))
                .find(|q| self.h.contains(g, q))
                .expect("transversal covers every coset");
            acc = g.multiply(&acc, &back);
        }
        g.reduce_mod(&self.h_derived, &acc)
    }

    pub fn is_trivial_image(&self, x: &NormalWord) -> bool {
        self.apply(x).is_identity()
    }

    /// Kernel of the transfer, as a subgroup of `G` containing `G'`.
    pub fn kernel(&self) -> SubgroupCgs {
        let g = self.g;
        let derived = g.derived_subgroup();
        let mut b = SubgroupBuilder::from_cgs(g, &derived);
        for x in coset_representatives(g, &derived) {
            if !b.contains(&x) && self.is_trivial_image(&x) {
                b.add(x);
            }
        }
        b.finish()
    }
}

fn check_maximal(g: &PcPresentation, h: &SubgroupCgs) -> Result<(), PcError> {
    if h.ambient_ngens() != g.ngens() || h.log_index() != 1 {
        return Err(PcError::NotMaximal);
    }
    Ok(())
}

/// Canonical representatives of the cosets of `N`: every normal word with
/// zero exponent at the leading positions of `N`.
pub fn coset_representatives(g: &PcPresentation, n: &SubgroupCgs) -> Vec<NormalWord> {
    let depths = n.depths();
    let free: Vec<usize> = (0..g.ngens()).filter(|d| !depths.contains(d)).collect();
    let p = g.prime();
    let mut out = vec![g.identity()];
    for &pos in &free {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for w in &out {
            for e in 0..p {
                let mut v = w.clone();
                v.exponents_mut()[pos] = e;
                next.push(v);
            }
        }
        out = next;
    }
    out
}
