use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::QuotientError;
use crate::pc::PcPresentation;
use crate::pq::{p_quotient_with, with_definitions, Expr, FpPresentation, PqOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tree {
    Q,
    U,
}

impl Tree {
    /// Cover-limit parameter `e`.
    pub fn e(self) -> u8 {
        match self {
            Tree::Q => 0,
            Tree::U => 1,
        }
    }

    pub fn from_e(e: u8) -> Option<Tree> {
        match e {
            0 => Some(Tree::Q),
            1 => Some(Tree::U),
            _ => None,
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Relator variants of the metabelian coclass-2 families.
///
/// | tag | Q-tree | U-tree |
/// |---|---|---|
/// | `Mainline` | c.18 | c.21 |
/// | `Primary` | E.6 | E.8 |
/// | `SecondA`, `SecondB` | E.14 | E.9 |
/// | `ComplexA`, `ComplexB` | H.4 | G.16 |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    Mainline,
    Primary,
    SecondA,
    SecondB,
    ComplexA,
    ComplexB,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Mainline,
        Variant::Primary,
        Variant::SecondA,
        Variant::SecondB,
        Variant::ComplexA,
        Variant::ComplexB,
    ];

    /// Exponent of the last lower central generator in `R(x)`, `R(y)` (Q-tree)
    /// or `R(y)`, `R(x)` (U-tree).
    fn tail_exponents(self) -> (i64, i64) {
        match self {
            Variant::Mainline => (0, 0),
            Variant::Primary => (1, 0),
            Variant::SecondA => (1, 1),
            Variant::SecondB => (1, 2),
            Variant::ComplexA => (0, 1),
            Variant::ComplexB => (0, 2),
        }
    }

    /// Name of the transfer kernel type the variant is known to produce.
    pub fn type_name(self, tree: Tree) -> &'static str {
        match (tree, self) {
            (Tree::Q, Variant::Mainline) => "c.18",
            (Tree::Q, Variant::Primary) => "E.6",
            (Tree::Q, Variant::SecondA | Variant::SecondB) => "E.14",
            (Tree::Q, Variant::ComplexA | Variant::ComplexB) => "H.4",
            (Tree::U, Variant::Mainline) => "c.21",
            (Tree::U, Variant::Primary) => "E.8",
            (Tree::U, Variant::SecondA | Variant::SecondB) => "E.9",
            (Tree::U, Variant::ComplexA | Variant::ComplexB) => "G.16",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Variant::Mainline => "mainline",
            Variant::Primary => "primary",
            Variant::SecondA => "second-a",
            Variant::SecondB => "second-b",
            Variant::ComplexA => "complex-a",
            Variant::ComplexB => "complex-b",
        }
    }

    /// Parses a tag or a type name such as `E.6`, `E14a`, `G.16b`.
    pub fn parse(s: &str, tree: Tree) -> Option<Variant> {
        let t = s.to_ascii_lowercase().replace(['.', '_'], "");
        let by_tag = Variant::ALL.iter().find(|v| v.tag().replace('-', "") == t.replace('-', ""));
        if let Some(v) = by_tag {
            return Some(*v);
        }
        let v = match (tree, t.as_str()) {
            (_, "mainline") | (Tree::Q, "c18") | (Tree::U, "c21") => Variant::Mainline,
            (Tree::Q, "e6") | (Tree::U, "e8") => Variant::Primary,
            (Tree::Q, "e14" | "e14a") | (Tree::U, "e9" | "e9a") => Variant::SecondA,
            (Tree::Q, "e14b") | (Tree::U, "e9b") => Variant::SecondB,
            (Tree::Q, "h4" | "h4a") | (Tree::U, "g16" | "g16a") => Variant::ComplexA,
            (Tree::Q, "h4b") | (Tree::U, "g16b") => Variant::ComplexB,
            _ => return None,
        };
        Some(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// Mainline vertex `X_c^r`.
    Mainline { c: u32, r: u32 },
    /// Metabelian coclass-2 group of class `c`.
    Metabelian { c: u32, variant: Variant },
    /// Class-`c` quotient of the cover limit with parameter `ell`.
    Cover { ell: i8, c: u32 },
}

/// Family coordinates naming a constructible group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub tree: Tree,
    pub kind: Kind,
}

impl GroupDescriptor {
    pub fn mainline(tree: Tree, c: u32, r: u32) -> Self {
        GroupDescriptor {
            tree,
            kind: Kind::Mainline { c, r },
        }
    }

    pub fn metabelian(tree: Tree, c: u32, variant: Variant) -> Self {
        GroupDescriptor {
            tree,
            kind: Kind::Metabelian { c, variant },
        }
    }

    pub fn cover(e: u8, ell: i8, c: u32) -> Self {
        GroupDescriptor {
            tree: Tree::from_e(e).expect("e is 0 or 1"),
            kind: Kind::Cover { ell, c },
        }
    }

    /// State `n` for odd class `c = 2n+5`.
    pub fn state(&self) -> Option<u32> {
        match self.kind {
            Kind::Metabelian { c, .. } | Kind::Cover { c, .. } if c >= 5 && c % 2 == 1 => {
                Some((c - 5) / 2)
            }
            _ => None,
        }
    }

    /// Counter `i` of the relative identifier, where defined.
    pub fn counter(&self) -> Option<u32> {
        match self.kind {
            Kind::Metabelian { variant, .. } => match variant {
                Variant::Mainline => Some(1),
                Variant::Primary => Some(2),
                Variant::SecondA => Some(3),
                Variant::SecondB => Some(4),
                _ => None,
            },
            Kind::Cover { ell, .. } => match (self.tree, ell) {
                (_, 0) => Some(2),
                (_, -1) => Some(3),
                (Tree::U, 1) => Some(4),
                _ => None,
            },
            Kind::Mainline { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        let bad = |m: &str| Err(BuildError::Invalid(format!("{self}: {m}")));
        match self.kind {
            Kind::Mainline { c, r } => {
                if r < 2 {
                    return bad("coclass r must be at least 2");
                }
                if c < 2 * r - 1 {
                    return bad("class must satisfy c >= 2r-1");
                }
            }
            Kind::Metabelian { c, .. } => {
                if c < 5 {
                    return bad("class must be at least 5");
                }
            }
            Kind::Cover { ell, c } => {
                if !(-1..=1).contains(&ell) {
                    return bad("ell must be -1, 0 or 1");
                }
                if c < 5 || c % 2 == 0 {
                    return bad("class must be odd and at least 5");
                }
            }
        }
        Ok(())
    }

    /// Logarithmic order claimed for the group.
    pub fn expected_log_order(&self) -> usize {
        match self.kind {
            Kind::Mainline { c, r } => (c + r) as usize,
            Kind::Metabelian { c, .. } => (c + 2) as usize,
            Kind::Cover { c, .. } => (3 * (c - 5) / 2 + 8) as usize,
        }
    }

    pub fn class(&self) -> u32 {
        match self.kind {
            Kind::Mainline { c, .. } | Kind::Metabelian { c, .. } | Kind::Cover { c, .. } => c,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Mainline { c, r } => write!(f, "{}:X_{c}^{r}", self.tree),
            Kind::Metabelian { c, variant } => {
                write!(f, "{}:M(c={c},{})", self.tree, variant.type_name(self.tree))?;
                if matches!(variant, Variant::SecondB | Variant::ComplexB) {
                    write!(f, "b")?;
                } else if matches!(variant, Variant::SecondA | Variant::ComplexA) {
                    write!(f, "a")?;
                }
                Ok(())
            }
            Kind::Cover { ell, c } => write!(f, "Q_{c}^({},{ell})", self.tree.e()),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("invalid descriptor {0}")]
    Invalid(String),
    #[error("{descriptor}: constructed order 3^{found}, expected 3^{expected}")]
    OrderGate {
        descriptor: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

type E = Arc<Expr>;

fn comm(u: &E, v: &E) -> E {
    Expr::comm(u, v)
}

fn pow(u: &E, k: i64) -> E {
    Expr::pow(u, k)
}

fn mul<const N: usize>(parts: [&E; N]) -> E {
    Expr::mul(parts.into_iter().cloned().collect())
}

/// Finitely presented input and quotient options for a descriptor.
pub fn fp_presentation(d: &GroupDescriptor) -> (FpPresentation, PqOptions) {
    let names2 = |a: &str, b: &str| vec![a.to_string(), b.to_string()];
    let opts = PqOptions {
        max_pclass: 40,
        nilpotency_bound: Some(d.class() as usize),
    };
    match d.kind {
        Kind::Mainline { c, r } => {
            let a = &Expr::gen(0);
            let t = &Expr::gen(1);
            let sign = match d.tree {
                Tree::Q => 1,
                Tree::U => -1,
            };
            let mut rels = vec![
                mul([&pow(&mul([a, t]), 3), &pow(a, -3)]),
                mul([&comm(&comm(t, a), t), &pow(a, sign * 3)]),
                pow(a, 3i64.pow(r)),
            ];
            let j = c / 2;
            if c % 2 == 1 {
                rels.push(pow(&comm(t, a), 3i64.pow(j)));
            } else {
                rels.push(pow(t, 3i64.pow(j)));
            }
            (FpPresentation::from_exprs(names2("a", "t"), rels), opts)
        }
        Kind::Metabelian { c, variant } => {
            let x = &Expr::gen(0);
            let y = &Expr::gen(1);
            let c = c as usize;
            let (ex, ey) = variant.tail_exponents();
            let mut rels = Vec::new();
            // s[j] for the lower central chain
            let mut s: Vec<E> = vec![Expr::identity(); c + 1];
            let (lead, other) = match d.tree {
                Tree::Q => (x, y),
                Tree::U => (y, x),
            };
            // Q: s2=[y,x], t3=[s2,y], s_j=[s_{j-1},x]
            // U: t2=[y,x], s3=[t2,x], t_j=[t_{j-1},y]
            s[2] = comm(y, x);
            let side = comm(&s[2], other);
            for j in 3..=c {
                s[j] = comm(&s[j - 1], lead);
            }
            for j in 2..=c - 3 {
                rels.push(mul([&pow(&s[j], 3), &pow(&s[j + 3], -1), &pow(&s[j + 2], -2)]));
            }
            rels.push(mul([&pow(&s[c - 2], 3), &pow(&s[c], -2)]));
            rels.push(pow(&side, 3));
            let sc = &s[c];
            match d.tree {
                Tree::Q => {
                    // R(x), R(y)
                    rels.push(mul([&pow(x, 3), &pow(sc, -ex)]));
                    rels.push(mul([&pow(y, 3), &pow(&s[3], -2), &pow(&s[4], -1), &pow(sc, -ey)]));
                }
                Tree::U => {
                    // R(y) uses s3 = [t2, x] which is the side commutator here
                    rels.push(mul([&pow(y, 3), &pow(&side, -1), &pow(sc, -ex)]));
                    rels.push(mul([
                        &pow(x, 3),
                        &pow(&s[3], -1),
                        &pow(&s[4], -2),
                        &pow(&s[5], -1),
                        &pow(sc, -ey),
                    ]));
                }
            }
            (FpPresentation::from_exprs(names2("x", "y"), rels), opts)
        }
        Kind::Cover { ell, c } => {
            let a = &Expr::gen(0);
            let t = &Expr::gen(1);
            let e = d.tree.e() as i64;
            let u = &Expr::conj(t, a);
            let y = &mul([&pow(&mul([&Expr::conj(u, a), t, u]), -1), &pow(&comm(u, t), e)]);
            let z = &mul([&pow(a, 3), &Expr::comm_left(&[t.clone(), a.clone(), t.clone()])]);
            let ut = &comm(u, t);
            let w = |k: usize| {
                let mut v = t.clone();
                for _ in 0..k - 1 {
                    v = comm(&v, a);
                }
                v
            };
            let c = c as usize;
            let wc = &w(c);
            let vc = &comm(&w(c - 2), &comm(t, a));
            let rels = vec![
                comm(ut, t),
                comm(ut, u),
                pow(y, 3),
                comm(a, y),
                comm(t, y),
                comm(u, y),
                comm(z, y),
                pow(z, 3),
                comm(t, z),
                comm(u, z),
                mul([y, &pow(wc, ell as i64), vc]),
                mul([z, wc]),
            ];
            (FpPresentation::from_exprs(names2("a", "t"), rels), opts)
        }
    }
}

fn cache() -> &'static Mutex<HashMap<GroupDescriptor, Arc<PcPresentation>>> {
    static CACHE: OnceLock<Mutex<HashMap<GroupDescriptor, Arc<PcPresentation>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Constructs the group, checking its order against the claimed value.
pub fn build(d: &GroupDescriptor) -> Result<Arc<PcPresentation>, BuildError> {
    if let Some(g) = cache().lock().unwrap().get(d) {
        return Ok(g.clone());
    }
    let g = Arc::new(build_uncached(d)?);
    cache().lock().unwrap().insert(*d, g.clone());
    Ok(g)
}

pub fn build_uncached(d: &GroupDescriptor) -> Result<PcPresentation, BuildError> {
    d.validate()?;
    let (fp, opts) = fp_presentation(d);
    let q = p_quotient_with(&fp, 3, &opts)?;
    let mut g = q.group;
    if matches!(d.kind, Kind::Metabelian { .. }) && g.derived_series().len() > 3 {
        g = with_definitions(&g.metabelianization())?.group;
    }
    let expected = d.expected_log_order();
    if g.ngens() != expected {
        return Err(BuildError::OrderGate {
            descriptor: d.to_string(),
            expected,
            found: g.ngens(),
        });
    }
    Ok(g)
}
