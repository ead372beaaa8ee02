use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::fp::{FpPresentation, FreeWord, GroupOps};
use super::linalg::Echelon;
use crate::error::QuotientError;
use crate::pc::{Definition, NormalWord, PcPresentation, SubgroupCgs, Syllable};

/// Options for [`p_quotient_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PqOptions {
    /// Bound on the lower exponent-p class.
    pub max_pclass: usize,
    /// Optional bound on the nilpotency class.
    pub nilpotency_bound: Option<usize>,
}

impl Default for PqOptions {
    fn default() -> Self {
        PqOptions {
            max_pclass: 40,
            nilpotency_bound: None,
        }
    }
}

/// A p-quotient together with the images of the finitely presented generators.
#[derive(Clone, Debug)]
pub struct PQuotient {
    pub group: PcPresentation,
    pub images: Vec<NormalWord>,
    pub pclass: usize,
}

/// Largest p-quotient of lower exponent-p class at most `class_bound`.
pub fn p_quotient(
    f: &FpPresentation,
    p: u8,
    class_bound: usize,
) -> Result<PcPresentation, QuotientError> {
    let opts = PqOptions {
        max_pclass: class_bound,
        nilpotency_bound: None,
    };
    Ok(p_quotient_with(f, p, &opts)?.group)
}

pub fn p_quotient_with(
    f: &FpPresentation,
    p: u8,
    opts: &PqOptions,
) -> Result<PQuotient, QuotientError> {
    if opts.max_pclass == 0 || opts.nilpotency_bound == Some(0) {
        return Err(QuotientError::ZeroClass);
    }
    for (k, r) in f.relators().iter().enumerate() {
        if r.generator_bound() > f.ngens() {
            return Err(QuotientError::BadRelator(k));
        }
    }
    let mut st = class_one(f, p);
    let mut k = 1;
    while k < opts.max_pclass {
        let next = lift(&st, f, k + 1, opts.nilpotency_bound)?;
        if next.group.ngens() == st.group.ngens() {
            break;
        }
        st = next;
        k += 1;
    }
    Ok(PQuotient {
        group: st.group,
        images: st.images,
        pclass: k,
    })
}

fn class_one(f: &FpPresentation, p: u8) -> PQuotient {
    let m = f.ngens();
    // reversed columns put pivots on later generators
    let rows = f.relators().iter().map(|r| {
        let s = r.exponent_sums(m);
        (0..m)
            .map(|c| s[m - 1 - c].rem_euclid(p as i64) as u8)
            .collect::<Vec<u8>>()
    });
    let ech = Echelon::from_rows(rows, m, p);
    let free = ech.free_columns();
    let mut defining: Vec<usize> = free.iter().map(|&c| m - 1 - c).collect();
    defining.sort_unstable();
    let d = defining.len();
    let defs = defining.iter().map(|&x| Some(Definition::Defining(x as u16))).collect();
    let group = PcPresentation::elementary_abelian(p, d).with_definitions(defs);
    let images = (0..m)
        .map(|x| {
            let s = ech.substitution(m - 1 - x, &free, p);
            let mut exps = vec![0u8; d];
            for (fi, &c) in free.iter().enumerate() {
                let gen = m - 1 - c;
                let k = defining.iter().position(|&y| y == gen).unwrap();
                exps[k] = s[fi];
            }
            NormalWord::from_exponents(exps)
        })
        .collect();
    PQuotient {
        group,
        images,
        pclass: 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Source {
    Tau(usize),
    Power(usize),
    Comm(usize, usize),
}

struct Extension {
    h: PcPresentation,
    n: usize,
    sources: Vec<Source>,
    column: HashMap<Source, usize>,
}

/// Adds a central tail to every non-defining relation, and to each listed
/// finitely presented generator.
fn extend(g: &PcPresentation, taus: &[usize]) -> Extension {
    let n = g.ngens();
    let p = g.prime();
    let mut rels = Vec::new();
    for i in 0..n {
        rels.push(Source::Power(i));
    }
    for j in 0..n {
        for i in 0..j {
            rels.push(Source::Comm(j, i));
        }
    }
    let defined: Vec<Source> = g
        .definitions()
        .iter()
        .filter_map(|d| match d {
            Some(Definition::Power(i)) => Some(Source::Power(*i as usize)),
            Some(Definition::Commutator(j, i)) => Some(Source::Comm(*j as usize, *i as usize)),
            _ => None,
        })
        .collect();
    rels.retain(|r| !defined.contains(r));
    rels.reverse();
    let mut sources: Vec<Source> = taus.iter().map(|&x| Source::Tau(x)).collect();
    sources.extend(rels);
    let t = sources.len();
    let total = n + t;
    let column: HashMap<Source, usize> = sources.iter().enumerate().map(|(c, s)| (*s, c)).collect();
    let pad = |w: &NormalWord, src: Source| {
        let mut e = w.exponents().to_vec();
        e.resize(total, 0);
        if let Some(&c) = column.get(&src) {
            e[n + c] = 1;
        }
        NormalWord::from_exponents(e)
    };
    let mut power: Vec<NormalWord> = (0..n).map(|i| pad(g.power_rhs(i), Source::Power(i))).collect();
    power.extend((0..t).map(|_| NormalWord::identity(total)));
    let comm: Vec<Vec<NormalWord>> = (0..total)
        .map(|j| {
            (0..j)
                .map(|i| {
                    if j < n {
                        pad(g.comm_rhs(j, i), Source::Comm(j, i))
                    } else {
                        NormalWord::identity(total)
                    }
                })
                .collect()
        })
        .collect();
    let top = g.weights().iter().copied().max().unwrap_or(0);
    let mut weights = g.weights().to_vec();
    weights.extend(std::iter::repeat_n(top + 1, t));
    let mut defs = g.definitions().to_vec();
    defs.extend(sources.iter().map(|s| {
        Some(match *s {
            Source::Tau(x) => Definition::Defining(x as u16),
            Source::Power(i) => Definition::Power(i as u16),
            Source::Comm(j, i) => Definition::Commutator(j as u16, i as u16),
        })
    }));
    let h = PcPresentation::new(p, weights, power, comm, defs).expect("tails keep pc form");
    Extension {
        h,
        n,
        sources,
        column,
    }
}

fn sub_mod(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
    a.iter().zip(b).map(|(&x, &y)| (x + p - y) % p).collect()
}

fn consistency_rows(ext: &Extension, class: usize) -> Result<Vec<Vec<u8>>, QuotientError> {
    let n = ext.n;
    let p = ext.h.prime();
    let mut rows = Vec::new();
    for v in ext.h.overlaps(n) {
        let (l, r) = (v.left.exponents(), v.right.exponents());
        if l[..n] != r[..n] {
            return Err(QuotientError::InconsistentTails { class });
        }
        rows.push(sub_mod(&l[n..], &r[n..], p));
    }
    Ok(rows)
}

/// A pc group with chosen images of the free generators.
struct Images<'a> {
    h: &'a PcPresentation,
    img: Vec<Vec<Syllable>>,
    inv: Vec<Vec<Syllable>>,
}

impl GroupOps<NormalWord> for Images<'_> {
    fn one(&self) -> NormalWord {
        self.h.identity()
    }

    fn mul(&self, a: &NormalWord, b: &NormalWord) -> NormalWord {
        self.h.multiply(a, b)
    }

    fn inv(&self, a: &NormalWord) -> NormalWord {
        self.h.inverse(a)
    }

    fn gen_pow(&self, x: usize, e: i64) -> NormalWord {
        let s = if e > 0 { &self.img[x] } else { &self.inv[x] };
        let mut acc = self.h.identity();
        for _ in 0..e.unsigned_abs() {
            self.h.mul_syllables(&mut acc, s);
        }
        acc
    }
}

fn lift(
    st: &PQuotient,
    f: &FpPresentation,
    class: usize,
    nilpotency_bound: Option<usize>,
) -> Result<PQuotient, QuotientError> {
    let g = &st.group;
    let p = g.prime();
    let m = f.ngens();
    let defining: HashMap<usize, usize> = g
        .definitions()
        .iter()
        .enumerate()
        .filter_map(|(k, d)| match d {
            Some(Definition::Defining(x)) => Some((*x as usize, k)),
            _ => None,
        })
        .collect();
    let taus: Vec<usize> = (0..m).filter(|x| !defining.contains_key(x)).collect();
    let ext = extend(g, &taus);
    let n = ext.n;
    let t = ext.sources.len();
    let mut rows = consistency_rows(&ext, class)?;

    let h = &ext.h;
    let pad = |w: &NormalWord| {
        let mut e = w.exponents().to_vec();
        e.resize(n + t, 0);
        NormalWord::from_exponents(e)
    };
    let img: Vec<NormalWord> = st.images.iter().map(pad).collect();
    let ops = Images {
        h,
        img: img.iter().map(|w| w.syllables()).collect(),
        inv: img.iter().map(|w| h.inverse(w).syllables()).collect(),
    };
    for r in f.relators() {
        let v = r.eval(&ops);
        if v.exponents()[..n].iter().any(|&e| e != 0) {
            return Err(QuotientError::InconsistentTails { class });
        }
        let mut row = v.exponents()[n..].to_vec();
        let sums = r.exponent_sums(m);
        for &x in &taus {
            let c = ext.column[&Source::Tau(x)];
            let s = sums[x].rem_euclid(p as i64) as u8;
            row[c] = (row[c] + s) % p;
        }
        rows.push(row);
    }

    let ech = Echelon::from_rows(rows, t, p);
    let free = ech.free_columns();
    let subst: Vec<Vec<u8>> = (0..t).map(|c| ech.substitution(c, &free, p)).collect();
    let f_new = free.len();
    if free.iter().any(|&c| matches!(ext.sources[c], Source::Tau(_))) {
        return Err(QuotientError::InconsistentTails { class });
    }

    let total = n + f_new;
    let with_layer = |w: &NormalWord, src: Option<Source>| {
        let mut e = w.exponents().to_vec();
        e.resize(total, 0);
        if let Some(c) = src.and_then(|s| ext.column.get(&s)) {
            for (k, &a) in subst[*c].iter().enumerate() {
                e[n + k] = a;
            }
        }
        NormalWord::from_exponents(e)
    };
    let mut power: Vec<NormalWord> = (0..n)
        .map(|i| with_layer(g.power_rhs(i), Some(Source::Power(i))))
        .collect();
    power.extend((0..f_new).map(|_| NormalWord::identity(total)));
    let comm: Vec<Vec<NormalWord>> = (0..total)
        .map(|j| {
            (0..j)
                .map(|i| {
                    if j < n {
                        with_layer(g.comm_rhs(j, i), Some(Source::Comm(j, i)))
                    } else {
                        NormalWord::identity(total)
                    }
                })
                .collect()
        })
        .collect();
    let mut weights = g.weights().to_vec();
    weights.extend(std::iter::repeat_n(class as u32, f_new));
    let mut defs = g.definitions().to_vec();
    defs.extend(free.iter().map(|&c| {
        Some(match ext.sources[c] {
            Source::Power(i) => Definition::Power(i as u16),
            Source::Comm(j, i) => Definition::Commutator(j as u16, i as u16),
            Source::Tau(x) => Definition::Defining(x as u16),
        })
    }));
    let group = PcPresentation::new(p, weights, power, comm, defs)?;
    let images: Vec<NormalWord> = (0..m)
        .map(|x| {
            if taus.contains(&x) {
                with_layer(&st.images[x], Some(Source::Tau(x)))
            } else {
                with_layer(&st.images[x], None)
            }
        })
        .collect();
    let mut out = PQuotient {
        group,
        images,
        pclass: class,
    };
    if let Some(c) = nilpotency_bound {
        let lcs = out.group.lower_central_series();
        if lcs.len() > c + 1 {
            let (q, imgs) = quotient_keeping(&out.group, &lcs[c], &out.images);
            out.group = q;
            out.images = imgs;
        }
    }
    Ok(out)
}

/// Quotient by a normal subgroup inside the last layer, keeping definitions.
fn quotient_keeping(
    g: &PcPresentation,
    n: &SubgroupCgs,
    images: &[NormalWord],
) -> (PcPresentation, Vec<NormalWord>) {
    let depths = n.depths();
    let kept: Vec<usize> = (0..g.ngens()).filter(|d| !depths.contains(d)).collect();
    let q = g.quotient_unchecked(n);
    let remap = |i: u16| kept.iter().position(|&k| k == i as usize).expect("defining generator kept") as u16;
    let defs = kept
        .iter()
        .map(|&k| {
            g.definitions()[k].map(|d| match d {
                Definition::Defining(x) => Definition::Defining(x),
                Definition::Power(i) => Definition::Power(remap(i)),
                Definition::Commutator(j, i) => Definition::Commutator(remap(j), remap(i)),
            })
        })
        .collect();
    let imgs = images
        .iter()
        .map(|w| {
            let r = g.reduce_mod(n, w);
            NormalWord::from_exponents(kept.iter().map(|&k| r.get(k)).collect())
        })
        .collect();
    (q.with_definitions(defs), imgs)
}

/// Re-encodes a pc-presentation as a finitely presented group on its pc generators.
pub fn fp_from_pc(g: &PcPresentation) -> FpPresentation {
    let n = g.ngens();
    let word = |w: &NormalWord| {
        let mut letters = Vec::new();
        for (k, e) in w.syllables() {
            for _ in 0..e {
                letters.push(k as i32 + 1);
            }
        }
        FreeWord::from_letters(letters)
    };
    let mut rels = Vec::new();
    for i in 0..n {
        let lhs = FreeWord::generator(i).pow(g.prime() as i64);
        rels.push(lhs.mul(&word(g.power_rhs(i)).inverse()));
    }
    for j in 0..n {
        for i in 0..j {
            let lhs = FreeWord::comm(&FreeWord::generator(j), &FreeWord::generator(i));
            rels.push(lhs.mul(&word(g.comm_rhs(j, i)).inverse()));
        }
    }
    FpPresentation::new(n, rels)
}

/// Isomorphic presentation carrying definition tags, with the images of the
/// original pc generators.
pub fn with_definitions(g: &PcPresentation) -> Result<PQuotient, QuotientError> {
    if g.has_definitions() {
        let images = (0..g.ngens()).map(|i| g.generator(i)).collect();
        return Ok(PQuotient {
            group: g.clone(),
            images,
            pclass: g.weights().iter().copied().max().unwrap_or(0) as usize,
        });
    }
    if g.ngens() == 0 {
        return Ok(PQuotient {
            group: g.clone(),
            images: vec![],
            pclass: 0,
        });
    }
    let fp = fp_from_pc(g);
    let q = p_quotient_with(&fp, g.prime(), &PqOptions::default())?;
    debug_assert_eq!(q.group.ngens(), g.ngens());
    Ok(q)
}

/// The p-covering group with its multiplicator and nucleus.
#[derive(Clone, Debug)]
pub struct PCover {
    /// Group with definitions that the cover extends.
    pub base: PcPresentation,
    pub cover: PcPresentation,
    pub multiplicator: SubgroupCgs,
    pub nucleus: SubgroupCgs,
}

pub fn p_cover(g: &PcPresentation) -> Result<PCover, QuotientError> {
    let base = with_definitions(g)?.group;
    let pclass = base.lower_exponent_p_central_series().len() - 1;
    let ext = extend(&base, &[]);
    let n = ext.n;
    let t = ext.sources.len();
    let p = base.prime();
    let rows = consistency_rows(&ext, pclass + 1)?;
    let ech = Echelon::from_rows(rows, t, p);
    let free = ech.free_columns();
    let subst: Vec<Vec<u8>> = (0..t).map(|c| ech.substitution(c, &free, p)).collect();
    let total = n + free.len();
    let with_layer = |w: &NormalWord, src: Source| {
        let mut e = w.exponents().to_vec();
        e.resize(total, 0);
        if let Some(&c) = ext.column.get(&src) {
            for (k, &a) in subst[c].iter().enumerate() {
                e[n + k] = a;
            }
        }
        NormalWord::from_exponents(e)
    };
    let mut power: Vec<NormalWord> = (0..n).map(|i| with_layer(base.power_rhs(i), Source::Power(i))).collect();
    power.extend((n..total).map(|_| NormalWord::identity(total)));
    let comm: Vec<Vec<NormalWord>> = (0..total)
        .map(|j| {
            (0..j)
                .map(|i| {
                    if j < n {
                        with_layer(base.comm_rhs(j, i), Source::Comm(j, i))
                    } else {
                        NormalWord::identity(total)
                    }
                })
                .collect()
        })
        .collect();
    let mut weights = base.weights().to_vec();
    weights.extend(std::iter::repeat_n(pclass as u32 + 1, free.len()));
    let mut defs = base.definitions().to_vec();
    defs.extend(free.iter().map(|&c| {
        Some(match ext.sources[c] {
            Source::Power(i) => Definition::Power(i as u16),
            Source::Comm(j, i) => Definition::Commutator(j as u16, i as u16),
            Source::Tau(x) => Definition::Defining(x as u16),
        })
    }));
    let cover = PcPresentation::new(p, weights, power, comm, defs)?;
    let mult_words: Vec<NormalWord> = (n..total).map(|k| cover.generator(k)).collect();
    let multiplicator = cover.subgroup(&mult_words);
    let series = cover.lower_exponent_p_central_series();
    let nucleus = series
        .get(pclass)
        .cloned()
        .unwrap_or_else(|| SubgroupCgs::trivial(total));
    Ok(PCover {
        base,
        cover,
        multiplicator,
        nucleus,
    })
}

/// Generator rank, relation rank and nuclear rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub d1: usize,
    pub d2: usize,
    pub nu: usize,
}

pub fn rank_report(g: &PcPresentation) -> Result<RankReport, QuotientError> {
    let c = p_cover(g)?;
    Ok(RankReport {
        d1: g.generator_rank(),
        d2: c.multiplicator.log_order(),
        nu: c.nucleus.log_order(),
    })
}

/// `G/G''` of a presentation, as a pc-presentation without definitions.
pub fn metabelianization(g: &PcPresentation) -> PcPresentation {
    g.metabelianization()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(text: &str) -> FpPresentation {
        FpPresentation::parse(text).unwrap()
    }

    #[test]
    fn class_one_is_elementary() {
        let g = p_quotient(&fp("fp n=2\nx1^9\nx2^27\n"), 3, 1).unwrap();
        assert_eq!(g.ngens(), 2);
        assert!(g.is_abelian());
    }

    #[test]
    fn cyclic_quotient_grows() {
        let g = p_quotient(&fp("fp n=1\nx1^27\n"), 3, 10).unwrap();
        assert_eq!(g.ngens(), 3);
        assert_eq!(g.abelian_invariants().to_string(), "3");
    }

    #[test]
    fn substituted_generator_needs_tail() {
        // x2 = x1^3 forces the tail on the non-defining generator
        let g = p_quotient(&fp("fp n=2\nx2 = x1^3\nx1^27\n"), 3, 10).unwrap();
        assert_eq!(g.abelian_invariants().to_string(), "3");
    }

    #[test]
    fn heisenberg_quotient() {
        let g = p_quotient(&fp("fp n=2\nx1^3\nx2^3\n[x2,x1,x1]\n[x2,x1,x2]\n"), 3, 5).unwrap();
        assert_eq!(g.ngens(), 3);
        assert!(g.is_consistent());
        assert_eq!(g.nilpotency_class(), 2);
    }

    #[test]
    fn multiplicator_of_elementary_abelian() {
        for n in 1..=3 {
            let r = rank_report(&PcPresentation::elementary_abelian(3, n)).unwrap();
            assert_eq!(r.d1, n);
            assert_eq!(r.d2, n + n * (n - 1) / 2);
        }
    }

    #[test]
    fn cyclic_cover() {
        let g = p_quotient(&fp("fp n=1\nx1^9\n"), 3, 5).unwrap();
        let c = p_cover(&g).unwrap();
        assert_eq!(c.cover.ngens(), 3);
        assert_eq!(c.multiplicator.log_order(), 1);
        assert_eq!(c.nucleus.log_order(), 1);
    }

    #[test]
    fn regenerated_definitions() {
        let g = PcPresentation::from_text("pc p=3 n=3\ng1^p = 1\ng2^p = 1\ng3^p = 1\n[g2,g1] = g3\n")
            .unwrap();
        let q = with_definitions(&g).unwrap();
        assert!(q.group.has_definitions());
        assert_eq!(q.group.ngens(), 3);
    }
}
