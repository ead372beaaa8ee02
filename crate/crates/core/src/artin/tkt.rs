use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::transfer::Transfer;
use crate::error::{ParseError, PcError};
use crate::pc::PcPresentation;

/// Transfer kernel type: entry `0` is a total kernel, `j` the `j`-th maximal subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Tkt(pub [u8; 4]);

/// Named types with a representative of their orbit.
pub const NAMED_TYPES: [(&str, [u8; 4]); 13] = [
    ("a.1", [0, 0, 0, 0]),
    ("a.2", [1, 0, 0, 0]),
    ("a.3", [2, 0, 0, 0]),
    ("c.18", [0, 1, 2, 2]),
    ("c.21", [0, 2, 3, 1]),
    ("D.5", [4, 2, 2, 4]),
    ("D.10", [2, 2, 4, 1]),
    ("E.6", [1, 1, 2, 2]),
    ("E.8", [1, 2, 3, 1]),
    ("E.9", [2, 2, 3, 1]),
    ("E.14", [3, 1, 2, 2]),
    ("G.16", [4, 2, 3, 1]),
    ("H.4", [2, 1, 2, 2]),
];

impl Tkt {
    pub fn entries(&self) -> [u8; 4] {
        self.0
    }

    /// Applies a relabeling `pi` of the maximal subgroups (`pi[i]` is the new
    /// position of subgroup `i+1`, zero-based) to positions and values.
    pub fn relabel(&self, pi: [usize; 4]) -> Tkt {
        let mut out = [0u8; 4];
        for i in 0..4 {
            let v = self.0[i];
            out[pi[i]] = if v == 0 { 0 } else { pi[v as usize - 1] as u8 + 1 };
        }
        Tkt(out)
    }

    /// Lexicographically least member of the orbit under relabeling.
    pub fn canonical(&self) -> Tkt {
        permutations4()
            .into_iter()
            .map(|pi| self.relabel(pi))
            .min()
            .expect("orbit is nonempty")
    }

    pub fn equivalent(&self, other: &Tkt) -> bool {
        self.canonical() == other.canonical()
    }

    /// Scholz-Taussky style name, when the orbit is one of the listed types.
    pub fn type_name(&self) -> Option<&'static str> {
        let c = self.canonical();
        NAMED_TYPES
            .iter()
            .find(|(_, rep)| Tkt(*rep).canonical() == c)
            .map(|(name, _)| *name)
    }

    /// Number of total kernels.
    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&v| v == 0).count()
    }
}

/// Representative of a named type.
pub fn named(name: &str) -> Option<Tkt> {
    NAMED_TYPES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, rep)| Tkt(*rep))
}

pub fn tkt_canonical(k: &Tkt) -> Tkt {
    k.canonical()
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let pi = [a, b, c, d];
                    let mut seen = [false; 4];
                    if pi.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(pi);
                    }
                }
            }
        }
    }
    out
}

/// Raw transfer kernel type in the order of [`PcPresentation::maximal_subgroups`].
pub fn tkt(g: &PcPresentation) -> Result<Tkt, PcError> {
    let maximals = g.maximal_subgroups();
    if maximals.len() != 4 {
        return Err(PcError::GeneratorRank(g.generator_rank()));
    }
    let mut out = [0u8; 4];
    for (i, h) in maximals.iter().enumerate() {
        let k = Transfer::new(g, h)?.kernel();
        out[i] = if k.is_whole() {
            0
        } else {
            let j = maximals
                .iter()
                .position(|m| *m == k)
                .ok_or(PcError::KernelUnmatched)?;
            j as u8 + 1
        };
    }
    Ok(Tkt(out))
}

impl fmt::Display for Tkt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Tkt {
    type Err = ParseError;

    /// Four digits in `0..=4`, optionally in parentheses, or a type name such as `E.8`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(k) = named(t) {
            return Ok(k);
        }
        let digits = t.trim_start_matches('(').trim_end_matches(')');
        let mut out = [0u8; 4];
        let bytes = digits.as_bytes();
        if bytes.len() != 4 {
            return Err(ParseError::new(1, 1, format!("expected four digits, got '{t}'")));
        }
        for (k, &b) in bytes.iter().enumerate() {
            if !(b'0'..=b'4').contains(&b) {
                return Err(ParseError::new(1, k + 1, format!("bad entry '{}'", b as char)));
            }
            out[k] = b - b'0';
        }
        Ok(Tkt(out))
    }
}

impl From<Tkt> for String {
    fn from(k: Tkt) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for Tkt {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> Tkt {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_is_idempotent() {
        for (_, rep) in NAMED_TYPES {
            let c = Tkt(rep).canonical();
            assert_eq!(c.canonical(), c);
        }
    }

    #[test]
    fn orbit_examples() {
        assert!(k("0134").equivalent(&k("0231")));
        assert!(!k("1122").equivalent(&k("3122")));
        assert_eq!(k("2122").type_name(), Some("H.4"));
        assert_eq!(k("0134").type_name(), Some("c.21"));
    }

    #[test]
    fn orbit_of_h4_by_brute_force() {
        let rep = k("2122");
        let orbit: std::collections::BTreeSet<Tkt> =
            permutations4().into_iter().map(|pi| rep.relabel(pi)).collect();
        let min = *orbit.iter().next().unwrap();
        assert_eq!(rep.canonical(), min);
        assert!(orbit.iter().all(|t| t.canonical() == min));
    }

    #[test]
    fn named_orbits_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for (_, rep) in NAMED_TYPES {
            assert!(seen.insert(Tkt(rep).canonical()));
        }
    }

    #[test]
    fn elementary_group_is_total() {
        let g = PcPresentation::elementary_abelian(3, 2);
        assert_eq!(tkt(&g).unwrap(), k("0000"));
    }

    #[test]
    fn parse_errors() {
        assert!("012".parse::<Tkt>().is_err());
        assert!("0125".parse::<Tkt>().is_err());
        assert_eq!("(1122)".parse::<Tkt>().unwrap(), k("1122"));
    }
}
