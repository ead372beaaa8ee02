use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::build::{GroupDescriptor, Tree, Variant};
use crate::error::ParseError;

/// One descendant step `-#s;j`: step size `s`, counter `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub size: u8,
    pub counter: u32,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "-#{};{}", self.size, self.counter)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// `( )`: skeleton vertices.
    Paren,
    /// `[ ]`: hull vertices.
    Bracket,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Segment {
    Step(Step),
    Group {
        kind: GroupKind,
        steps: Vec<Step>,
        exponent: u32,
    },
}

impl Segment {
    fn steps(&self) -> (&[Step], u32) {
        match self {
            Segment::Step(s) => (std::slice::from_ref(s), 1),
            Segment::Group { steps, exponent, .. } => (steps, *exponent),
        }
    }
}

/// Path notation `base(-#s;j ...)^k[-#s;j ...]...` for descendants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelativeIdentifier {
    pub base: String,
    pub segments: Vec<Segment>,
}

impl RelativeIdentifier {
    /// All steps with repetitions expanded.
    pub fn flatten(&self) -> Vec<Step> {
        let mut out = Vec::new();
        for seg in &self.segments {
            let (steps, k) = seg.steps();
            for _ in 0..k {
                out.extend_from_slice(steps);
            }
        }
        out
    }
}

impl fmt::Display for RelativeIdentifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        for seg in &self.segments {
            match seg {
                Segment::Step(s) => write!(f, "{s}")?,
                Segment::Group { kind, steps, exponent } => {
                    let (open, close) = match kind {
                        GroupKind::Paren => ('(', ')'),
                        GroupKind::Bracket => ('[', ']'),
                    };
                    write!(f, "{open}")?;
                    for s in steps {
                        write!(f, "{s}")?;
                    }
                    write!(f, "{close}")?;
                    if *exponent != 1 {
                        write!(f, "^{exponent}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

struct Lexer {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Lexer {
    fn new(s: &str) -> Self {
        // columns refer to the original text; whitespace is skipped
        let chars = s
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(k, c)| (k + 1, c))
            .collect();
        Lexer { chars, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(k, _)| k)
            .unwrap_or_else(|| self.chars.last().map_or(1, |&(k, _)| k + 1))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(1, self.column(), msg))
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected '{c}'"))
        }
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            v = v * 10 + d as u64;
            if v > u32::MAX as u64 {
                return self.fail("number too large");
            }
            self.pos += 1;
        }
        if self.pos == start {
            return self.fail("expected a number");
        }
        Ok(v as u32)
    }

    fn step(&mut self) -> Result<Step, ParseError> {
        self.expect('-')?;
        self.expect('#')?;
        let col = self.column();
        let size = self.number()?;
        if !(1..=2).contains(&size) {
            return Err(ParseError::new(1, col, format!("step size {size} is not 1 or 2")));
        }
        self.expect(';')?;
        let col = self.column();
        let counter = self.number()?;
        if counter == 0 {
            return Err(ParseError::new(1, col, "counter must be at least 1"));
        }
        Ok(Step {
            size: size as u8,
            counter,
        })
    }
}

impl FromStr for RelativeIdentifier {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lx = Lexer::new(s);
        let mut base = String::new();
        while let Some(c) = lx.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                base.push(c);
                lx.pos += 1;
            } else {
                break;
            }
        }
        if base.is_empty() || !base.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return lx.fail("expected a base symbol");
        }
        let mut segments = Vec::new();
        while let Some(c) = lx.peek() {
            match c {
                '-' => segments.push(Segment::Step(lx.step()?)),
                '(' | '[' => {
                    let (kind, close) = if c == '(' {
                        (GroupKind::Paren, ')')
                    } else {
                        (GroupKind::Bracket, ']')
                    };
                    lx.pos += 1;
                    let mut steps = Vec::new();
                    while lx.peek() == Some('-') {
                        steps.push(lx.step()?);
                    }
                    if steps.is_empty() {
                        return lx.fail("empty group");
                    }
                    lx.expect(close)?;
                    let exponent = if lx.peek() == Some('^') {
                        lx.pos += 1;
                        lx.number()?
                    } else {
                        1
                    };
                    segments.push(Segment::Group { kind, steps, exponent });
                }
                _ => return lx.fail(format!("unexpected '{c}'")),
            }
        }
        Ok(RelativeIdentifier { base, segments })
    }
}

/// Coordinates of recognized groups that have no presentation here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unconstructible {
    /// Schur+1 groups with fork topology `T_{n,u}^i`.
    ForkSchurPlusOne { n: u32, u: u32, i: u32 },
    /// Schur group of the second E.14 variant on the Q-tree.
    SchurWithoutCover { tree: Tree, n: u32, i: u32 },
    /// Metabelian groups of complex type.
    ComplexMetabelian { tree: Tree, n: u32, i: u32 },
    /// Immediate descendants of complex metabelian groups.
    ComplexChild { tree: Tree, n: u32, i: u32, j: u32 },
    /// Schur groups of complex type with sub-state `t`.
    ComplexSchur { tree: Tree, n: u32, t: u32, i: u32 },
    /// The groups `G_m` of increasing soluble length.
    SolubleLengthChain { m: u32 },
}

impl fmt::Display for Unconstructible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unconstructible::ForkSchurPlusOne { n, u, i } => write!(f, "T_{{{n},{u}}}^{i}"),
            Unconstructible::SchurWithoutCover { tree, n, i } => write!(f, "S_{n}^{i} on {tree}"),
            Unconstructible::ComplexMetabelian { tree, n, i } => write!(f, "M_{n}^{i} on {tree}"),
            Unconstructible::ComplexChild { tree, n, i, j } => write!(f, "R_{{{n},{j}}}^{i} on {tree}"),
            Unconstructible::ComplexSchur { tree, n, t, i } => write!(f, "S_{{{n},{t}}}^{i} on {tree}"),
            Unconstructible::SolubleLengthChain { m } => write!(f, "G_{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resolved {
    Constructible(GroupDescriptor),
    Unconstructible(Unconstructible),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentifierError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("identifier {0} matches no known path shape")]
    Unrecognized(String),
}

const fn st(size: u8, counter: u32) -> Step {
    Step { size, counter }
}

const SKELETON: [Step; 2] = [st(1, 1), st(1, 1)];
const SCHUR_SKELETON: [Step; 2] = [st(2, 1), st(1, 1)];

/// Reads `segs` as `(steps)^k` groups with the given step patterns, where a
/// zero exponent may also be omitted; returns the exponents and the rest.
fn repeats<'a>(mut segs: &'a [Segment], pattern: &[Step]) -> (Option<u32>, &'a [Segment]) {
    match segs.first() {
        Some(Segment::Group {
            kind: GroupKind::Paren,
            steps,
            exponent,
        }) if steps == pattern => {
            segs = &segs[1..];
            (Some(*exponent), segs)
        }
        _ => (None, segs),
    }
}

/// Matches a trailing hull group `[steps]` or the same steps written bare.
fn hull<'a>(segs: &'a [Segment], len: usize) -> Option<(Vec<Step>, u32, &'a [Segment])> {
    match segs.first()? {
        Segment::Group {
            kind: GroupKind::Bracket,
            steps,
            exponent,
        } if steps.len() == len => Some((steps.clone(), *exponent, &segs[1..])),
        Segment::Group { .. } => None,
        Segment::Step(_) => {
            let bare: Option<Vec<Step>> = segs
                .iter()
                .take(len)
                .map(|s| match s {
                    Segment::Step(x) => Some(*x),
                    _ => None,
                })
                .collect();
            bare.filter(|b| b.len() == len).map(|b| (b, 1, &segs[len..]))
        }
    }
}

/// Mainline vertex reached by steps of size 1 with counter 1 only.
fn mainline(base_class: u32, segs: &[Segment], tree: Tree) -> Option<GroupDescriptor> {
    let id = RelativeIdentifier {
        base: String::new(),
        segments: segs.to_vec(),
    };
    let flat = id.flatten();
    let plain = segs.iter().all(|s| match s {
        Segment::Step(_) => true,
        Segment::Group { kind, .. } => *kind == GroupKind::Paren,
    });
    (plain && flat.iter().all(|&s| s == st(1, 1)))
        .then(|| GroupDescriptor::mainline(tree, base_class + flat.len() as u32, 2))
}

fn simple_variant(i: u32) -> Option<Variant> {
    match i {
        2 => Some(Variant::Primary),
        3 => Some(Variant::SecondA),
        4 => Some(Variant::SecondB),
        _ => None,
    }
}

/// Maps an identifier to a constructor, to the coordinates of a group that
/// has no presentation here, or rejects it.
pub fn resolve_identifier(r: &RelativeIdentifier, tree: Tree) -> Result<Resolved, IdentifierError> {
    use Resolved::{Constructible as C, Unconstructible as U};
    let unrecognized = || IdentifierError::Unrecognized(r.to_string());
    let mut segs: &[Segment] = &r.segments;
    let base_class = match r.base.as_str() {
        "R" => {
            // R-#1;1 is the fork
            if let Some(m) = mainline(3, segs, tree) {
                return Ok(C(m));
            }
            match segs.first().map(Segment::steps) {
                Some((&[s], 1)) if s == st(1, 1) => segs = &segs[1..],
                _ => return Err(unrecognized()),
            }
            4
        }
        "F" => 4,
        "N" => {
            let (k, rest) = repeats(segs, &SCHUR_SKELETON);
            return match (k, rest) {
                (Some(k), [Segment::Step(s)]) if *s == st(2, 2) => {
                    Ok(U(Unconstructible::SolubleLengthChain { m: k + 2 }))
                }
                _ => Err(unrecognized()),
            };
        }
        _ => return Err(unrecognized()),
    };
    if let Some(m) = mainline(base_class, segs, tree) {
        return Ok(C(m));
    }
    // skeleton part
    let (schur, rest) = repeats(segs, &SCHUR_SKELETON);
    let (plain, rest) = repeats(rest, &SKELETON);
    let u = schur.unwrap_or(0);
    let v = plain.unwrap_or(0);
    let n = u + v;
    let Some((h, hk, rest)) = hull(rest, 1).or_else(|| hull(rest, 2)) else {
        return Err(unrecognized());
    };
    if hk != 1 {
        return Err(unrecognized());
    }
    let is_metabelian_path = schur.is_none() || (plain.is_some() && u >= 1);
    match (h.as_slice(), rest) {
        // simple metabelian, or fork topology
        ([s], []) if s.size == 1 && simple_variant(s.counter).is_some() && is_metabelian_path => {
            if u == 0 {
                let v = simple_variant(s.counter).unwrap();
                Ok(C(GroupDescriptor::metabelian(tree, 2 * n + 5, v)))
            } else {
                Ok(U(Unconstructible::ForkSchurPlusOne { n, u, i: s.counter }))
            }
        }
        // simple Schur
        ([s], []) if s.size == 2 && plain.is_none() && simple_variant(s.counter).is_some() => {
            let c = 2 * n + 5;
            match (s.counter, tree) {
                (2, _) => Ok(C(GroupDescriptor::cover(tree.e(), 0, c))),
                (3, _) => Ok(C(GroupDescriptor::cover(tree.e(), -1, c))),
                (4, Tree::U) => Ok(C(GroupDescriptor::cover(tree.e(), 1, c))),
                (i, _) => Ok(U(Unconstructible::SchurWithoutCover { tree, n, i })),
            }
        }
        // complex metabelian, its children, or fork topology
        ([a, b], tail) if a.size == 1 && (5..=6).contains(&a.counter) && *b == st(1, 1) && is_metabelian_path => {
            let i = a.counter;
            match tail {
                [] if u == 0 => Ok(U(Unconstructible::ComplexMetabelian { tree, n, i })),
                [] => Ok(U(Unconstructible::ForkSchurPlusOne { n, u, i })),
                _ if u == 0 => {
                    let max_j = if tree == Tree::Q { 3 } else { 2 };
                    match hull(tail, 1) {
                        Some((js, 1, [])) if js[0].size == 1 && js[0].counter <= max_j => {
                            Ok(U(Unconstructible::ComplexChild { tree, n, i, j: js[0].counter }))
                        }
                        _ => Err(unrecognized()),
                    }
                }
                _ => Err(unrecognized()),
            }
        }
        // complex Schur with sub-state t
        ([a, b], tail) if a.size == 2 && (5..=6).contains(&a.counter) && *b == st(1, 1) && plain.is_none() => {
            let (t, tail) = match tail.first() {
                Some(Segment::Group {
                    kind: GroupKind::Bracket,
                    steps,
                    exponent,
                }) if steps[..] == SCHUR_SKELETON => (*exponent, &tail[1..]),
                _ => (0, tail),
            };
            match hull(tail, 1) {
                Some((last, 1, [])) if last[0] == st(2, 2) => {
                    Ok(U(Unconstructible::ComplexSchur { tree, n, t, i: a.counter }))
                }
                _ => Err(unrecognized()),
            }
        }
        _ => Err(unrecognized()),
    }
}

/// Parses and resolves in one go.
pub fn resolve_str(s: &str, tree: Tree) -> Result<Resolved, IdentifierError> {
    resolve_identifier(&s.parse()?, tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> RelativeIdentifier {
        s.parse().unwrap()
    }

    #[test]
    fn parse_shapes() {
        assert_eq!(id("F").segments, vec![]);
        let r = id("F(-#1;1-#1;1)^2[-#1;3]");
        assert_eq!(r.flatten().len(), 5);
        assert_eq!(r.flatten()[4], st(1, 3));
        let r = id("N(-#2;1-#1;1)^3-#2;2");
        assert_eq!(r.base, "N");
        assert_eq!(r.segments.len(), 2);
        assert_eq!(r.segments[1], Segment::Step(st(2, 2)));
    }

    #[test]
    fn printer_is_canonical() {
        for s in ["F(-#1;1-#1;1)^0[-#1;2]", "R(-#1;1)(-#2;1-#1;1)^3[-#2;4]", "N(-#2;1-#1;1)^3-#2;2"] {
            assert_eq!(id(s).to_string(), s);
        }
        assert_eq!(id(" F ( -#1 ; 1 -#1;1 ) ^ 2 ").to_string(), "F(-#1;1-#1;1)^2");
    }

    #[test]
    fn syntax_errors_have_columns() {
        let e = "F(-#3;1)".parse::<RelativeIdentifier>().unwrap_err();
        assert_eq!(e.column, 5);
        let e = "F(-#1;1".parse::<RelativeIdentifier>().unwrap_err();
        assert!(e.message.contains("')'"));
        let e = "F[-#1;0]".parse::<RelativeIdentifier>().unwrap_err();
        assert_eq!(e.column, 7);
        assert!("(-#1;1)".parse::<RelativeIdentifier>().is_err());
    }

    #[test]
    fn resolves_families() {
        let r = resolve_str("F(-#1;1-#1;1)^0[-#1;2]", Tree::U).unwrap();
        assert_eq!(r, Resolved::Constructible(GroupDescriptor::metabelian(Tree::U, 5, Variant::Primary)));
        let r = resolve_str("F(-#2;1-#1;1)^1[-#2;3]", Tree::U).unwrap();
        assert_eq!(r, Resolved::Constructible(GroupDescriptor::cover(1, -1, 7)));
        let r = resolve_str("R(-#1;1)(-#1;1-#1;1)^2[-#1;4]", Tree::Q).unwrap();
        assert_eq!(r, Resolved::Constructible(GroupDescriptor::metabelian(Tree::Q, 9, Variant::SecondB)));
        assert_eq!(
            resolve_str("F", Tree::Q).unwrap(),
            Resolved::Constructible(GroupDescriptor::mainline(Tree::Q, 4, 2))
        );
        assert_eq!(
            resolve_str("R-#1;1-#1;1", Tree::U).unwrap(),
            Resolved::Constructible(GroupDescriptor::mainline(Tree::U, 5, 2))
        );
    }

    #[test]
    fn resolves_unconstructible() {
        let r = resolve_str("F(-#2;1-#1;1)^1(-#1;1-#1;1)^0[-#1;2]", Tree::Q).unwrap();
        assert_eq!(r, Resolved::Unconstructible(Unconstructible::ForkSchurPlusOne { n: 1, u: 1, i: 2 }));
        let r = resolve_str("F(-#2;1-#1;1)^0[-#2;4]", Tree::Q).unwrap();
        assert!(matches!(r, Resolved::Unconstructible(Unconstructible::SchurWithoutCover { i: 4, .. })));
        let r = resolve_str("F(-#2;1-#1;1)^1[-#2;5-#1;1][-#2;1-#1;1]^2[-#2;2]", Tree::Q).unwrap();
        assert_eq!(
            r,
            Resolved::Unconstructible(Unconstructible::ComplexSchur { tree: Tree::Q, n: 1, t: 2, i: 5 })
        );
        let r = resolve_str("F[-#1;6-#1;1]-#1;3", Tree::Q).unwrap();
        assert!(matches!(r, Resolved::Unconstructible(Unconstructible::ComplexChild { j: 3, .. })));
        let r = resolve_str("N(-#2;1-#1;1)^3-#2;2", Tree::Q).unwrap();
        assert_eq!(r, Resolved::Unconstructible(Unconstructible::SolubleLengthChain { m: 5 }));
    }

    #[test]
    fn unrecognized_is_distinct() {
        for s in ["F[-#1;9]", "X-#1;1", "F[-#1;6-#1;1]-#1;3", "F(-#2;1-#1;1)^1[-#1;2]"] {
            let tree = if s.ends_with(";3") { Tree::U } else { Tree::Q };
            assert!(
                matches!(resolve_str(s, tree), Err(IdentifierError::Unrecognized(_))),
                "{s}"
            );
        }
    }
}
