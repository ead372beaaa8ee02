use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::state::{detect_state, StateReading};
use super::ClassifyError;
use crate::error::ParseError;
use crate::invariants::{ti, TypeInvariants};

/// Invariants of the base class group followed by those of the four
/// unramified cyclic cubic extensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Ipad(pub Vec<TypeInvariants>);

impl Ipad {
    pub fn base(&self) -> &TypeInvariants {
        &self.0[0]
    }

    pub fn extensions(&self) -> &[TypeInvariants] {
        &self.0[1..]
    }

    /// Orders as in `([3,3],[3,9],[3,9],[3,9],[9,27])`.
    pub fn to_orders(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|t| {
                let mut o: Vec<String> = t.parts().iter().rev().map(|&e| 3u64.pow(e).to_string()).collect();
                if o.is_empty() {
                    o.push("1".into());
                }
                format!("[{}]", o.join(","))
            })
            .collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for Ipad {
    /// Canonical form `[11;21,21,21,32]`, extensions in increasing order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut ext = self.extensions().to_vec();
        ext.sort_by(|a, b| a.log_order().cmp(&b.log_order()).then(b.rank().cmp(&a.rank())).then(a.cmp(b)));
        let ext: Vec<String> = ext.iter().map(|t| t.to_string()).collect();
        write!(f, "[{};{}]", self.0.first().map(|t| t.to_string()).unwrap_or_default(), ext.join(","))
    }
}

fn order_to_log(s: &str, col: usize) -> Result<u32, ParseError> {
    let v: u64 = s
        .trim()
        .parse()
        .map_err(|_| ParseError::new(1, col, format!("expected a power of 3, found '{}'", s.trim())))?;
    let mut e = 0;
    let mut x = v;
    while x > 1 && x % 3 == 0 {
        x /= 3;
        e += 1;
    }
    if x != 1 {
        return Err(ParseError::new(1, col, format!("{v} is not a power of 3")));
    }
    Ok(e)
}

/// `([3,3],[3,9],...)`: each component a bracketed list of cyclic orders.
fn parse_orders(s: &str) -> Result<Vec<TypeInvariants>, ParseError> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| ParseError::new(1, 1, "expected (..) around components"))?;
    let mut out = Vec::new();
    let mut rest = inner;
    let offset = |r: &str| s.len() - r.len() + 1;
    loop {
        rest = rest.trim_start();
        let open = rest
            .strip_prefix('[')
            .ok_or_else(|| ParseError::new(1, offset(rest), "expected '['"))?;
        let close = open
            .find(']')
            .ok_or_else(|| ParseError::new(1, offset(open), "unclosed '['"))?;
        let mut parts = Vec::new();
        let mut col = offset(open);
        for tok in open[..close].split(',') {
            parts.push(order_to_log(tok, col)?);
            col += tok.len() + 1;
        }
        out.push(TypeInvariants::new(parts));
        rest = open[close + 1..].trim_start();
        match rest.strip_prefix(',') {
            Some(r) => rest = r,
            None if rest.is_empty() => break,
            None => return Err(ParseError::new(1, offset(rest), "expected ',' or end")),
        }
    }
    Ok(out)
}

/// `[11;21,21,21,32]` in logarithmic notation.
fn parse_logs(s: &str) -> Result<Vec<TypeInvariants>, ParseError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ParseError::new(1, 1, "expected [base;...]"))?;
    let (base, ext) = inner
        .split_once(';')
        .ok_or_else(|| ParseError::new(1, 2, "expected ';' after the base component"))?;
    let mut out = vec![base
        .trim()
        .parse::<TypeInvariants>()
        .map_err(|e| ParseError::new(1, 2, e.message))?];
    let mut col = base.len() + 3;
    for tok in ext.split(',') {
        out.push(
            tok.trim()
                .parse::<TypeInvariants>()
                .map_err(|e| ParseError::new(1, col, e.message))?,
        );
        col += tok.len() + 1;
    }
    Ok(out)
}

impl FromStr for Ipad {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let comps = if s.trim_start().starts_with('(') {
            parse_orders(s)?
        } else {
            parse_logs(s)?
        };
        Ok(Ipad(comps))
    }
}

impl From<Ipad> for String {
    fn from(i: Ipad) -> String {
        i.to_string()
    }
}

impl TryFrom<String> for Ipad {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Outcome of screening an IPAD with base `11`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Screen {
    MaximalClass,
    /// Three elementary tricyclic components.
    Sporadic4,
    /// Two elementary tricyclic components.
    Branch7Or3,
    QTree(StateReading),
    UTree(StateReading),
    Homocyclic,
    Other,
}

impl Screen {
    pub fn state(&self) -> Option<&StateReading> {
        match self {
            Screen::QTree(s) | Screen::UTree(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Screen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Screen::MaximalClass => "maximal class, cc=1",
            Screen::Sporadic4 => "sporadic <243,4> branch",
            Screen::Branch7Or3 => "<243,7> or <243,3> branch",
            Screen::QTree(_) => "Q-tree",
            Screen::UTree(_) => "U-tree",
            Screen::Homocyclic => "homocyclic polarization",
            Screen::Other => "other",
        })
    }
}

pub fn screen_ipad(ipad: &Ipad) -> Result<Screen, ClassifyError> {
    if ipad.0.len() != 5 {
        return Err(ClassifyError::IpadArity(ipad.0.len()));
    }
    if *ipad.base() != ti("11") {
        return Err(ClassifyError::IpadBase(ipad.base().to_string()));
    }
    let ext = ipad.extensions();
    let count = |t: &TypeInvariants| ext.iter().filter(|x| *x == t).count();
    if count(&ti("11")) >= 3 {
        return Ok(Screen::MaximalClass);
    }
    let eps = count(&ti("111"));
    match eps {
        3 => return Ok(Screen::Sporadic4),
        2 => return Ok(Screen::Branch7Or3),
        _ => {}
    }
    let s = detect_state(ext);
    match (s.tree, s.reason.as_deref()) {
        (Some(crate::families::Tree::Q), _) if eps == 1 => Ok(Screen::QTree(s)),
        (Some(crate::families::Tree::U), _) if eps == 0 => Ok(Screen::UTree(s)),
        (_, Some("homocyclic polarization")) => Ok(Screen::Homocyclic),
        _ => Ok(Screen::Other),
    }
}
