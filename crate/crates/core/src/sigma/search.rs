use serde::{Deserialize, Serialize};

use super::SigmaError;
use crate::pc::{Definition, NormalWord, PcPresentation};
use crate::pq::{p_cover, rank_report, with_definitions, Echelon};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaOptions {
    /// Also require inversion on the p-multiplicator.
    pub check_h2: bool,
    /// Largest logarithmic order searched.
    pub max_log_order: usize,
}

impl Default for SigmaOptions {
    fn default() -> Self {
        SigmaOptions {
            check_h2: false,
            max_log_order: 10,
        }
    }
}

/// Verified involutory automorphism, given by the images of every pc generator
/// of the presentation it was found in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaWitness {
    pub images: Vec<NormalWord>,
    pub inverts_h1: bool,
    /// `None` when the multiplicator was not examined.
    pub inverts_h2: Option<bool>,
}

impl SigmaWitness {
    pub fn apply(&self, g: &PcPresentation, w: &NormalWord) -> NormalWord {
        apply(g, &self.images, w)
    }
}

fn apply(g: &PcPresentation, images: &[NormalWord], w: &NormalWord) -> NormalWord {
    let mut acc = g.identity();
    for (k, e) in w.syllables() {
        let x = g.pow(&images[k as usize], e as u64);
        acc = g.multiply(&acc, &x);
    }
    acc
}

struct Search<'a> {
    g: &'a PcPresentation,
    defs: Vec<Definition>,
    /// Positions of the defining generators.
    defining: Vec<usize>,
    /// Positions of each weight layer, starting at weight 1.
    layers: Vec<Vec<usize>>,
    weights: Vec<u32>,
}

impl<'a> Search<'a> {
    fn new(g: &'a PcPresentation) -> Self {
        let defs: Vec<Definition> = g
            .definitions()
            .iter()
            .map(|d| d.expect("presentation with definitions"))
            .collect();
        let mut defining: Vec<(u16, usize)> = defs
            .iter()
            .enumerate()
            .filter_map(|(k, d)| match d {
                Definition::Defining(x) => Some((*x, k)),
                _ => None,
            })
            .collect();
        defining.sort_unstable();
        let weights = g.weights().to_vec();
        let top = weights.iter().copied().max().unwrap_or(0) as usize;
        let layers = (1..=top)
            .map(|w| (0..g.ngens()).filter(|&k| weights[k] as usize == w).collect())
            .collect();
        Search {
            g,
            defs,
            defining: defining.into_iter().map(|(_, k)| k).collect(),
            layers,
            weights,
        }
    }

    /// Images of all generators from images of the defining ones.
    ///
    /// A generator defined by `lhs = w g_k` maps to `img(w)^-1 img(lhs)`.
    fn extend(&self, def_images: &[NormalWord]) -> Vec<NormalWord> {
        let g = self.g;
        let mut img: Vec<NormalWord> = Vec::with_capacity(g.ngens());
        for (k, d) in self.defs.iter().enumerate() {
            let (lhs, rhs) = match *d {
                Definition::Defining(_) => {
                    let j = self.defining.iter().position(|&q| q == k).unwrap();
                    img.push(def_images[j].clone());
                    continue;
                }
                Definition::Power(i) => (
                    g.pow(&img[i as usize], g.prime() as u64),
                    g.power_rhs(i as usize),
                ),
                Definition::Commutator(j, i) => (
                    g.commutator(&img[j as usize], &img[i as usize]),
                    g.comm_rhs(j as usize, i as usize),
                ),
            };
            debug_assert_eq!(rhs.get(k), 1);
            debug_assert!((k + 1..g.ngens()).all(|q| rhs.get(q) == 0));
            let mut w = rhs.clone();
            w.exponents_mut()[k] = 0;
            img.push(g.multiply(&g.inverse(&apply(g, &img, &w)), &lhs));
        }
        img
    }

    /// Span of the changes to the layer at `layer` made by conjugating with
    /// elements of the previous layer, as an echelon form over the digit vector.
    fn inner_span(&self, layer: usize, def_images: &[NormalWord]) -> Echelon {
        let g = self.g;
        let positions = &self.layers[layer];
        let r = positions.len();
        let d = def_images.len();
        let p = g.prime();
        let mut e = Echelon::new(d * r);
        for &h in &self.layers[layer - 1] {
            let gh = g.generator(h);
            let mut v = vec![0u8; d * r];
            for (j, x) in def_images.iter().enumerate() {
                let c = g.commutator(x, &gh);
                for (t, &pos) in positions.iter().enumerate() {
                    v[j * r + t] = c.get(pos);
                }
            }
            e.insert(v, p);
        }
        e
    }

    /// Whether every relation holds modulo the generators of weight above `k`.
    fn holds_mod(&self, img: &[NormalWord], k: u32) -> bool {
        let g = self.g;
        let n = g.ngens();
        let ok = |lhs: NormalWord, rhs: &NormalWord| {
            let r = g.multiply(&lhs, &g.inverse(&apply(g, img, rhs)));
            (0..n).all(|q| self.weights[q] > k || r.get(q) == 0)
        };
        for i in 0..n {
            if !ok(g.pow(&img[i], g.prime() as u64), g.power_rhs(i)) {
                return false;
            }
        }
        for j in 0..n {
            for i in 0..j {
                if !ok(g.commutator(&img[j], &img[i]), g.comm_rhs(j, i)) {
                    return false;
                }
            }
        }
        true
    }

    /// Depth-first over the layers; `accept` sees each automorphism in a fixed order.
    /// Conjugation preserves both inversion properties, so each layer only
    /// ranges over a complement of what inner automorphisms can reach.
    fn run(
        &self,
        layer: usize,
        def_images: &mut Vec<NormalWord>,
        accept: &mut dyn FnMut(Vec<NormalWord>) -> Option<SigmaWitness>,
    ) -> Option<SigmaWitness> {
        if layer == self.layers.len() {
            return accept(self.extend(def_images));
        }
        let positions = &self.layers[layer];
        let d = def_images.len();
        let r = positions.len();
        let p = self.g.prime();
        // one representative per coset of the inner span: zeros at its pivots
        let free: Vec<usize> = self.inner_span(layer, def_images).free_columns();
        let digits = free.len();
        let saved = def_images.clone();
        let mut counter = vec![0u8; digits];
        loop {
            let mut v = vec![0u8; d * r];
            for (k, &c) in free.iter().enumerate() {
                v[c] = counter[k];
            }
            for j in 0..d {
                let e = def_images[j].exponents_mut();
                for (t, &pos) in positions.iter().enumerate() {
                    e[pos] = v[j * r + t];
                }
            }
            let img = self.extend(def_images);
            if self.holds_mod(&img, layer as u32 + 1) {
                if let Some(w) = self.run(layer + 1, def_images, accept) {
                    return Some(w);
                }
            }
            // advance the counter, last digit fastest
            let mut k = digits;
            loop {
                if k == 0 {
                    *def_images = saved;
                    return None;
                }
                k -= 1;
                counter[k] += 1;
                if counter[k] < p {
                    break;
                }
                counter[k] = 0;
            }
        }
    }
}

fn compose(g: &PcPresentation, s: &[NormalWord], t: &[NormalWord]) -> Vec<NormalWord> {
    t.iter().map(|w| apply(g, s, w)).collect()
}

fn is_identity_map(g: &PcPresentation, s: &[NormalWord]) -> bool {
    s.iter().enumerate().all(|(k, w)| *w == g.generator(k))
}

/// Power of `s` of order 2, when `s` has order `2·p^k`.
fn involutory_power(g: &PcPresentation, s: Vec<NormalWord>) -> Option<Vec<NormalWord>> {
    let mut s = s;
    for _ in 0..64 {
        let sq = compose(g, &s, &s);
        if is_identity_map(g, &sq) {
            return (!is_identity_map(g, &s)).then_some(s);
        }
        s = compose(g, &s, &sq);
    }
    None
}

pub fn find_sigma(g: &PcPresentation, check_h2: bool) -> Result<Option<SigmaWitness>, SigmaError> {
    find_sigma_with(
        g,
        &SigmaOptions {
            check_h2,
            ..SigmaOptions::default()
        },
    )
}

/// Searches for an automorphism inverting `G/Φ(G)`, and with `check_h2` the
/// p-multiplicator as well, then returns its involutory power.
///
/// Images refer to the presentation itself when it carries definitions, and
/// otherwise to the presentation regenerated with definitions.
pub fn find_sigma_with(
    g: &PcPresentation,
    opts: &SigmaOptions,
) -> Result<Option<SigmaWitness>, SigmaError> {
    if g.log_order() > opts.max_log_order {
        return Err(SigmaError::Capacity {
            log_order: g.log_order(),
            ceiling: opts.max_log_order,
        });
    }
    let gd = with_definitions(g)?.group;
    if gd.ngens() == 0 {
        return Ok(None);
    }
    let search = Search::new(&gd);
    let cover = if opts.check_h2 { Some(p_cover(&gd)?) } else { None };
    let mut start: Vec<NormalWord> = search
        .defining
        .iter()
        .map(|&k| {
            let mut w = gd.identity();
            w.exponents_mut()[k] = gd.prime() - 1;
            w
        })
        .collect();
    let mut accept = |images: Vec<NormalWord>| -> Option<SigmaWitness> {
        let tau = involutory_power(&gd, images)?;
        let inverts_h1 = search.defining.iter().all(|&k| {
            let r = gd.multiply(&tau[k], &gd.generator(k));
            (0..gd.ngens()).all(|q| search.weights[q] > 1 || r.get(q) == 0)
        });
        let inverts_h2 = cover.as_ref().map(|c| {
            let n = gd.ngens();
            let cs = Search::new(&c.cover);
            let lifted: Vec<NormalWord> = cs
                .defining
                .iter()
                .map(|&k| {
                    let mut e = tau[k].exponents().to_vec();
                    e.resize(c.cover.ngens(), 0);
                    NormalWord::from_exponents(e)
                })
                .collect();
            debug_assert!(cs.defining.iter().all(|&k| k < n));
            let img = cs.extend(&lifted);
            c.multiplicator.generators().iter().all(|m| {
                let s = apply(&c.cover, &img, m);
                c.cover.multiply(&s, m).is_identity()
            })
        });
        if inverts_h2 == Some(false) {
            return None;
        }
        Some(SigmaWitness {
            images: tau,
            inverts_h1,
            inverts_h2,
        })
    };
    if search.layers.len() <= 1 {
        let images = search.extend(&start);
        if search.holds_mod(&images, u32::MAX) {
            return Ok(accept(images));
        }
        return Ok(None);
    }
    Ok(search.run(1, &mut start, &mut accept))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchurClass {
    Schur,
    SchurPlusOne,
    Neither,
}

/// Report fields of the Schur test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurStatus {
    pub sigma: bool,
    pub d1: usize,
    pub d2: usize,
    pub nu: usize,
    pub class: SchurClass,
}

pub fn schur_status(g: &PcPresentation, opts: &SigmaOptions) -> Result<SchurStatus, SigmaError> {
    let sigma = find_sigma_with(g, opts)?.is_some();
    let r = rank_report(g)?;
    let class = match (sigma, r.d2 as i64 - r.d1 as i64) {
        (true, 0) => SchurClass::Schur,
        (true, 1) => SchurClass::SchurPlusOne,
        _ => SchurClass::Neither,
    };
    Ok(SchurStatus {
        sigma,
        d1: r.d1,
        d2: r.d2,
        nu: r.nu,
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_of_elementary_group() {
        let g = PcPresentation::elementary_abelian(3, 2);
        let w = find_sigma(&g, false).unwrap().unwrap();
        assert!(w.inverts_h1);
        assert_eq!(w.inverts_h2, None);
        let x = g.generator(0);
        assert_eq!(w.apply(&g, &x), g.inverse(&x));
        // [y,x] in the cover is fixed by the inversion
        assert_eq!(find_sigma(&g, true).unwrap(), None);
    }

    #[test]
    fn capacity_is_named() {
        let g = PcPresentation::elementary_abelian(3, 11);
        assert!(matches!(
            find_sigma(&g, false),
            Err(SigmaError::Capacity { log_order: 11, .. })
        ));
    }

    #[test]
    fn heisenberg_group_is_sigma() {
        let g = PcPresentation::from_text("pc p=3 n=3\n[g2,g1] = g3\n").unwrap();
        let w = find_sigma(&g, false).unwrap().unwrap();
        let sq: Vec<NormalWord> = w.images.iter().map(|x| w.apply(&g, x)).collect();
        let gd = with_definitions(&g).unwrap().group;
        assert!(is_identity_map(&gd, &sq));
    }

    #[test]
    fn elementary_group_status() {
        let g = PcPresentation::elementary_abelian(3, 2);
        let s = schur_status(&g, &SigmaOptions::default()).unwrap();
        assert_eq!((s.d1, s.d2), (2, 3));
        assert_eq!(s.class, SchurClass::SchurPlusOne);
    }
}
