use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::state::polarization_state;
use super::ClassifyError;
use crate::artin::{Ati2, Ati2Entry, Tkt};
use crate::families::Tree;
use crate::invariants::{ti, TypeInvariants};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Real,
    Imaginary,
}

impl Signature {
    pub fn of_discriminant(d: i64) -> Signature {
        if d > 0 {
            Signature::Real
        } else {
            Signature::Imaginary
        }
    }
}

impl FromStr for Signature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => Ok(Signature::Real),
            "imaginary" | "imag" => Ok(Signature::Imaginary),
            _ => Err(format!("unknown signature '{s}', expected real or imaginary")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Length {
    Exactly2,
    Exactly3,
    AtLeast3,
    TwoOrThree,
    Unknown,
}

impl Length {
    pub const ALL: [Length; 5] = [
        Length::Exactly2,
        Length::Exactly3,
        Length::AtLeast3,
        Length::TwoOrThree,
        Length::Unknown,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Length::Exactly2 => "Exactly2",
            Length::Exactly3 => "Exactly3",
            Length::AtLeast3 => "AtLeast3",
            Length::TwoOrThree => "TwoOrThree",
            Length::Unknown => "Unknown",
        }
    }

    /// Whether a verdict is consistent with a claimed length.
    pub fn admits(self, claim: Length) -> bool {
        use Length::*;
        match (self, claim) {
            (a, b) if a == b => true,
            (AtLeast3, Exactly3) | (TwoOrThree, Exactly2) | (TwoOrThree, Exactly3) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Length {
    type Err = String;

    /// Tokens, or the table forms `2`, `3`, `>=3` and `2or3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(l) = Length::ALL.iter().find(|l| l.token().eq_ignore_ascii_case(t)) {
            return Ok(*l);
        }
        let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "2" => Ok(Length::Exactly2),
            "3" => Ok(Length::Exactly3),
            ">=3" | "≥3" => Ok(Length::AtLeast3),
            "2or3" => Ok(Length::TwoOrThree),
            _ => Err(format!("unknown length token '{t}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthVerdict {
    pub length: Length,
    /// Tag of the matched pattern, or the first mismatching bracket.
    pub reason: String,
    /// Complex-type verdicts beyond the proven states.
    pub conjectural: bool,
}

impl LengthVerdict {
    fn new(length: Length, reason: impl Into<String>) -> Self {
        LengthVerdict {
            length,
            reason: reason.into(),
            conjectural: false,
        }
    }
}

impl fmt::Display for LengthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.length, self.reason)?;
        if self.conjectural {
            write!(f, " [conjectural for n>=5]")?;
        }
        Ok(())
    }
}

/// Which criterion a transfer kernel type falls under, and on which tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeFamily {
    Simple(Tree),
    Complex(Tree),
}

impl TypeFamily {
    pub fn of(k: &Tkt) -> Option<TypeFamily> {
        Some(match k.type_name()? {
            "E.6" | "E.14" => TypeFamily::Simple(Tree::Q),
            "E.8" | "E.9" => TypeFamily::Simple(Tree::U),
            "H.4" => TypeFamily::Complex(Tree::Q),
            "G.16" => TypeFamily::Complex(Tree::U),
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stages {
    Two,
    Three,
}

fn inv(parts: &[u32]) -> TypeInvariants {
    TypeInvariants::new(parts.to_vec())
}

fn entry(alpha0: &TypeInvariants, head: TypeInvariants, tail: &[(TypeInvariants, usize)]) -> Ati2Entry {
    let mut t = vec![alpha0.clone()];
    for (x, k) in tail {
        t.extend(std::iter::repeat(x.clone()).take(*k));
    }
    Ati2Entry::new(head, t)
}

fn build(
    tree: Tree,
    alpha0: TypeInvariants,
    n: u32,
    polar_top: u32,
    wild_stabilization: bool,
) -> Ati2 {
    let mut entries = vec![entry(
        &alpha0,
        inv(&[n + 3, n + 2]),
        &[(inv(&[polar_top, n + 1, 1]), 3)],
    )];
    let regular = if wild_stabilization { ti("31") } else { ti("21") };
    let copies = match tree {
        Tree::Q => {
            let singular = if wild_stabilization { ti("211") } else { ti("111") };
            entries.push(entry(&alpha0, ti("111"), &[(singular, 3), (ti("11"), 9)]));
            2
        }
        Tree::U => 3,
    };
    for _ in 0..copies {
        entries.push(entry(&alpha0, ti("21"), &[(regular.clone(), 3)]));
    }
    Ati2::new(alpha0, entries)
}

/// Second-order pattern of a simple type in state `n` with two or three stages.
pub fn simple_pattern(tree: Tree, n: u32, stages: Stages) -> Ati2 {
    let alpha0 = inv(&[n + 2, n + 2, 1]);
    build(tree, alpha0, n, n + 3, stages == Stages::Three)
}

/// Second-order pattern of a complex type in state `n`; the tame pattern has
/// neither flag set.
pub fn complex_pattern(tree: Tree, n: u32, wild_polarization: bool, wild_stabilization: bool) -> Ati2 {
    let alpha0 = inv(&[n + 3, n + 2, 1]);
    let top = if wild_polarization { n + 4 } else { n + 3 };
    build(tree, alpha0, n, top, wild_stabilization)
}

/// State from the polarization bracket of a second-order pattern.
fn ati2_state(a: &Ati2) -> Option<u32> {
    let states: Vec<u32> = a.entries.iter().filter_map(|e| polarization_state(&e.head)).collect();
    match states[..] {
        [n] => Some(n),
        _ => None,
    }
}

/// First bracket of `actual` that none of `patterns` contains.
fn first_mismatch(actual: &Ati2, patterns: &[&Ati2]) -> String {
    if patterns.iter().all(|p| p.alpha0 != actual.alpha0) {
        return format!("alpha0 {} does not fit the state", actual.alpha0);
    }
    let one = |e: &Ati2Entry| Ati2::new(actual.alpha0.clone(), vec![e.clone()]).to_string();
    for e in actual.sorted_entries() {
        if !patterns.iter().any(|p| p.entries.contains(&e)) {
            let s = one(&e);
            return format!("unmatched bracket {}", &s[1..s.len() - 1]);
        }
    }
    "brackets mix two patterns".into()
}

pub fn classify_simple(k: &Tkt, sig: Signature, ati2: Option<&Ati2>) -> Result<LengthVerdict, ClassifyError> {
    let Some(TypeFamily::Simple(tree)) = TypeFamily::of(k) else {
        return Err(ClassifyError::NotSimple(*k));
    };
    if sig == Signature::Imaginary {
        return Ok(LengthVerdict::new(Length::Exactly3, "imaginary"));
    }
    let Some(a) = ati2 else {
        return Ok(LengthVerdict::new(Length::Unknown, "no second-order invariants"));
    };
    let Some(n) = ati2_state(a) else {
        return Ok(LengthVerdict::new(Length::Unknown, "no polarization bracket"));
    };
    let two = simple_pattern(tree, n, Stages::Two);
    let three = simple_pattern(tree, n, Stages::Three);
    Ok(if *a == two {
        LengthVerdict::new(Length::Exactly2, format!("two-stages-{tree}"))
    } else if *a == three {
        LengthVerdict::new(Length::Exactly3, format!("three-stages-{tree}"))
    } else {
        LengthVerdict::new(Length::Unknown, first_mismatch(a, &[&two, &three]))
    })
}

pub fn classify_complex(k: &Tkt, sig: Signature, ati2: Option<&Ati2>) -> Result<LengthVerdict, ClassifyError> {
    let Some(TypeFamily::Complex(tree)) = TypeFamily::of(k) else {
        return Err(ClassifyError::NotComplex(*k));
    };
    if sig == Signature::Imaginary {
        return Ok(LengthVerdict::new(Length::AtLeast3, "imaginary"));
    }
    let Some(a) = ati2 else {
        return Ok(LengthVerdict::new(Length::Unknown, "no second-order invariants"));
    };
    let Some(n) = ati2_state(a) else {
        return Ok(LengthVerdict::new(Length::Unknown, "no polarization bracket"));
    };
    let cases = [
        (false, false, Length::TwoOrThree, "tame"),
        (true, false, Length::AtLeast3, "wild-polarization"),
        (false, true, Length::AtLeast3, "wild-stabilization"),
        (true, true, Length::AtLeast3, "wild-polarization-stabilization"),
    ];
    let patterns: Vec<Ati2> = cases
        .iter()
        .map(|&(wp, ws, _, _)| complex_pattern(tree, n, wp, ws))
        .collect();
    let mut verdict = match cases.iter().zip(&patterns).find(|(_, p)| *p == a) {
        Some((&(_, _, len, tag), _)) => LengthVerdict::new(len, tag),
        None => {
            let refs: Vec<&Ati2> = patterns.iter().collect();
            LengthVerdict::new(Length::Unknown, first_mismatch(a, &refs))
        }
    };
    verdict.conjectural = n >= 5;
    Ok(verdict)
}

/// Dispatches on the type of `k`.
pub fn classify(k: &Tkt, sig: Signature, ati2: Option<&Ati2>) -> Result<LengthVerdict, ClassifyError> {
    match TypeFamily::of(k) {
        Some(TypeFamily::Simple(_)) => classify_simple(k, sig, ati2),
        Some(TypeFamily::Complex(_)) => classify_complex(k, sig, ati2),
        None => Err(ClassifyError::UnsupportedType(*k)),
    }
}
