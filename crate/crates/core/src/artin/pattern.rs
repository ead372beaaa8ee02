use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tkt::{tkt, Tkt};
use crate::error::{ParseError, PcError};
use crate::invariants::TypeInvariants;
use crate::pc::PcPresentation;

/// Display order: larger order first, then higher rank, then lexicographically larger.
fn display_cmp(a: &TypeInvariants, b: &TypeInvariants) -> Ordering {
    b.log_order()
        .cmp(&a.log_order())
        .then(b.rank().cmp(&a.rank()))
        .then(b.cmp(a))
}

/// First-order abelian type invariants of the maximal subgroups, with those of `G'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ati {
    /// In the order of [`PcPresentation::maximal_subgroups`].
    pub raw: Vec<TypeInvariants>,
    pub alpha0: TypeInvariants,
}

impl Ati {
    pub fn sorted(&self) -> Vec<TypeInvariants> {
        let mut v = self.raw.clone();
        v.sort_by(display_cmp);
        v
    }

    /// Whether the entries agree as a multiset with `[a,b,c,d]` notation.
    pub fn matches(&self, s: &str) -> bool {
        parse_quadruple(s).is_ok_and(|mut q| {
            q.sort_by(display_cmp);
            q == self.sorted()
        })
    }
}

impl fmt::Display for Ati {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sorted().iter().map(|t| t.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Parses `[32,111,21,21]`; entries may carry `^k` repetition.
pub fn parse_quadruple(s: &str) -> Result<Vec<TypeInvariants>, ParseError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ParseError::new(1, 1, "expected [..]"))?;
    let mut cur = Cursor::new(inner, 2);
    let out = cur.invariant_list()?;
    cur.end()?;
    Ok(out)
}

/// One second-order entry: the invariants of a maximal subgroup and of its
/// own maximal subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ati2Entry {
    pub head: TypeInvariants,
    /// Sorted into weakly decreasing order.
    pub tail: Vec<TypeInvariants>,
}

impl Ati2Entry {
    pub fn new(head: TypeInvariants, mut tail: Vec<TypeInvariants>) -> Self {
        tail.sort_by(|a, b| b.cmp(a));
        Ati2Entry { head, tail }
    }

    fn cmp_display(&self, other: &Self) -> Ordering {
        display_cmp(&self.head, &other.head).then_with(|| other.tail.cmp(&self.tail))
    }

    /// Tail entries other than one copy of `alpha0`, in display order.
    fn rest(&self, alpha0: &TypeInvariants) -> Vec<TypeInvariants> {
        let mut rest = self.tail.clone();
        if let Some(k) = rest.iter().position(|t| t == alpha0) {
            rest.remove(k);
        }
        rest
    }

    fn render(&self, alpha0: &TypeInvariants) -> String {
        let mut items = vec![];
        if self.tail.contains(alpha0) {
            items.push(alpha0.to_string());
        }
        items.extend(compress(&self.rest(alpha0)));
        format!("[{};{}]", self.head, items.join(","))
    }
}

fn compress(items: &[TypeInvariants]) -> Vec<String> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < items.len() {
        let mut m = 1;
        while k + m < items.len() && items[k + m] == items[k] {
            m += 1;
        }
        let s = items[k].to_string();
        if m == 1 {
            out.push(s);
        } else if s.starts_with('(') {
            out.push(format!("{s}^{m}"));
        } else {
            out.push(format!("({s})^{m}"));
        }
        k += m;
    }
    out
}

/// Second-order abelian type invariants.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ati2 {
    pub alpha0: TypeInvariants,
    /// In the order of the maximal subgroups when computed, display order when parsed.
    pub entries: Vec<Ati2Entry>,
}

impl Ati2 {
    pub fn new(alpha0: TypeInvariants, entries: Vec<Ati2Entry>) -> Self {
        Ati2 { alpha0, entries }
    }

    pub fn sorted_entries(&self) -> Vec<Ati2Entry> {
        let mut v = self.entries.clone();
        v.sort_by(|a, b| a.cmp_display(b));
        v
    }

    /// Every tail contains `alpha0`, and tail sizes fit the head rank.
    pub fn is_well_formed(&self) -> bool {
        self.entries.iter().all(|e| {
            let expected = match e.head.rank() {
                2 => 4,
                3 => 13,
                _ => e.tail.len(),
            };
            e.tail.contains(&self.alpha0) && e.tail.len() == expected
        })
    }

    /// Reads table cells like `32,(311)^3`, `111;(11)^9,(111)^3` or
    /// `[21;(21)^3]^2`, where tails omit `alpha0`.
    pub fn from_cells(alpha0: &TypeInvariants, cells: &[&str]) -> Result<Ati2, ParseError> {
        let mut entries = Vec::new();
        for cell in cells {
            let mut cur = Cursor::new(cell, 1);
            let bracketed = cur.eat('[');
            let head = cur.invariant()?;
            if !cur.eat(';') && !cur.eat(',') {
                return cur.fail("expected ';' after head");
            }
            let mut tail = vec![alpha0.clone()];
            tail.extend(cur.invariant_list()?);
            let mut times = 1;
            if bracketed {
                cur.expect(']')?;
                times = cur.repeat()?;
            }
            cur.end()?;
            for _ in 0..times {
                entries.push(Ati2Entry::new(head.clone(), tail.clone()));
            }
        }
        Ok(Ati2::new(alpha0.clone(), entries))
    }
}

impl PartialEq for Ati2 {
    /// Multiset equality of entries, each tail itself a multiset.
    fn eq(&self, other: &Self) -> bool {
        self.alpha0 == other.alpha0 && self.sorted_entries() == other.sorted_entries()
    }
}

impl Eq for Ati2 {}

impl fmt::Display for Ati2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.sorted_entries();
        let mut parts = Vec::new();
        let mut k = 0;
        while k < entries.len() {
            let mut m = 1;
            while k + m < entries.len() && entries[k + m] == entries[k] {
                m += 1;
            }
            let s = entries[k].render(&self.alpha0);
            parts.push(if m == 1 { s } else { format!("{s}^{m}") });
            k += m;
        }
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Ati2 {
    type Err = ParseError;

    /// Parses `([32;221,(311)^3],[21;221,(21)^3]^3)`; the first tail element
    /// of the first entry is taken as `alpha0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s, 1);
        cur.expect('(')?;
        let mut entries = Vec::new();
        loop {
            cur.expect('[')?;
            let head = cur.invariant()?;
            cur.expect(';')?;
            let tail = cur.invariant_list()?;
            cur.expect(']')?;
            let times = cur.repeat()?;
            for _ in 0..times {
                entries.push((head.clone(), tail.clone()));
            }
            if !cur.eat(',') {
                break;
            }
        }
        cur.expect(')')?;
        cur.end()?;
        let alpha0 = entries
            .first()
            .and_then(|(_, t)| t.first().cloned())
            .ok_or_else(|| ParseError::new(1, 1, "empty second-order invariants"))?;
        let entries: Vec<Ati2Entry> = entries
            .into_iter()
            .map(|(h, t)| Ati2Entry::new(h, t))
            .collect();
        if !entries.iter().all(|e| e.tail.contains(&alpha0)) {
            return Err(ParseError::new(1, 1, format!("{alpha0} missing from some tail")));
        }
        Ok(Ati2::new(alpha0, entries))
    }
}

/// Small recursive-descent reader shared by the bracket grammars.
struct Cursor<'s> {
    src: &'s str,
    pos: usize,
    offset: usize,
}

impl<'s> Cursor<'s> {
    fn new(src: &'s str, offset: usize) -> Self {
        Cursor { src, pos: 0, offset }
    }

    fn rest(&self) -> &'s str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(1, self.pos + self.offset, msg))
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected '{c}'"))
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            self.fail("trailing input")
        }
    }

    fn invariant(&mut self) -> Result<TypeInvariants, ParseError> {
        self.skip_ws();
        match TypeInvariants::parse_prefix(self.rest()) {
            Ok((t, rest)) => {
                self.pos = self.src.len() - rest.len();
                Ok(t)
            }
            Err(m) => self.fail(m),
        }
    }

    fn repeat(&mut self) -> Result<usize, ParseError> {
        if !self.eat('^') {
            return Ok(1);
        }
        self.skip_ws();
        let r = self.rest();
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        match r[..end].parse::<usize>() {
            Ok(k) if k > 0 => {
                self.pos += end;
                Ok(k)
            }
            _ => self.fail("expected a positive repetition count"),
        }
    }

    fn invariant_list(&mut self) -> Result<Vec<TypeInvariants>, ParseError> {
        let mut out = Vec::new();
        loop {
            let t = self.invariant()?;
            let k = self.repeat()?;
            out.extend(std::iter::repeat_n(t, k));
            if !self.eat(',') {
                break;
            }
        }
        Ok(out)
    }
}

/// TKT together with first and optionally second order invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtinPattern {
    /// Canonical representative.
    pub tkt: Tkt,
    pub raw_tkt: Tkt,
    pub ati: Ati,
    pub ati2: Option<Ati2>,
}

fn require_two_generated(g: &PcPresentation) -> Result<(), PcError> {
    match g.generator_rank() {
        2 => Ok(()),
        d => Err(PcError::GeneratorRank(d)),
    }
}

pub fn ati1(g: &PcPresentation) -> Result<Ati, PcError> {
    require_two_generated(g)?;
    let raw = g
        .maximal_subgroups()
        .iter()
        .map(|h| g.subgroup_abelian_invariants(h))
        .collect();
    let alpha0 = g.subgroup_abelian_invariants(&g.derived_subgroup());
    Ok(Ati { raw, alpha0 })
}

pub fn ati2(g: &PcPresentation) -> Result<Ati2, PcError> {
    require_two_generated(g)?;
    let alpha0 = g.subgroup_abelian_invariants(&g.derived_subgroup());
    let entries = g
        .maximal_subgroups()
        .iter()
        .map(|h| {
            let ph = g.induced_presentation(h);
            let tail = ph
                .maximal_subgroups()
                .iter()
                .map(|k| ph.subgroup_abelian_invariants(k))
                .collect();
            Ati2Entry::new(ph.abelian_invariants(), tail)
        })
        .collect();
    Ok(Ati2::new(alpha0, entries))
}

pub fn artin_pattern(g: &PcPresentation, second_order: bool) -> Result<ArtinPattern, PcError> {
    let raw_tkt = tkt(g)?;
    Ok(ArtinPattern {
        tkt: raw_tkt.canonical(),
        raw_tkt,
        ati: ati1(g)?,
        ati2: if second_order { Some(ati2(g)?) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::ti;

    #[test]
    fn quadruple_display_order() {
        let a = Ati {
            raw: vec![ti("21"), ti("111"), ti("32"), ti("21")],
            alpha0: ti("221"),
        };
        assert_eq!(a.to_string(), "[32,111,21,21]");
        assert!(a.matches("[21,32,21,111]"));
        assert!(a.matches("[32,111,(21)^2]"));
    }

    #[test]
    fn ati2_roundtrip() {
        let s = "([32;221,(311)^3],[111;221,(111)^3,(11)^9],[21;221,(21)^3]^2)";
        let a: Ati2 = s.parse().unwrap();
        assert_eq!(a.to_string(), s);
        assert!(a.is_well_formed());
        let expanded = "([21;21,221,21,21],[32;311,221,311,311],[21;21,221,21,21],\
                        [111;11,11,11,11,11,11,11,11,11,111,111,111,221])";
        assert_eq!(expanded.parse::<Ati2>().unwrap_err().column, 1);
        let expanded = "([32;221,311,311,311],[21;21,221,21,21],\
                        [111;221,11,11,11,11,11,11,11,11,11,111,111,111],[21;221,21,21,21])";
        assert_eq!(expanded.parse::<Ati2>().unwrap(), a);
    }

    #[test]
    fn table_cells() {
        let a = Ati2::from_cells(
            &ti("321"),
            &["32,(311)^3", "111;(11)^9,(111)^3", "[21;(21)^3]^2"],
        )
        .unwrap();
        assert!(a.is_well_formed());
        assert_eq!(
            a.to_string(),
            "([32;321,(311)^3],[111;321,(111)^3,(11)^9],[21;321,(21)^3]^2)"
        );
    }

    #[test]
    fn parse_errors_have_columns() {
        let e = parse_quadruple("[32,1x1]").unwrap_err();
        assert_eq!(e.column, 6);
        assert!("([32;221".parse::<Ati2>().is_err());
    }

    #[test]
    fn elementary_pattern() {
        let g = PcPresentation::elementary_abelian(3, 2);
        let a = ati1(&g).unwrap();
        assert_eq!(a.to_string(), "[1,1,1,1]");
        assert!(a.alpha0.is_trivial());
        assert!(ati1(&PcPresentation::elementary_abelian(3, 3)).is_err());
    }
}
