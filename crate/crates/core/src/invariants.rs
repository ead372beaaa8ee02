use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// Logarithmic abelian type invariants: `(3,2)` stands for `C(p^3) x C(p^2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct TypeInvariants(Vec<u32>);

impl TypeInvariants {
    /// Sorts the parts into weakly decreasing order and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        TypeInvariants(parts)
    }

    pub fn trivial() -> Self {
        TypeInvariants(vec![])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Logarithm of the group order.
    pub fn log_order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses one invariant from the front of `s`, returning the rest.
    /// Accepts a run of digits, a parenthesized run of digits, or a
    /// parenthesized comma list such as `(10,9)` or `(12,)`.
    pub fn parse_prefix(s: &str) -> Result<(Self, &str), String> {
        let s = s.trim_start();
        if let Some(rest) = s.strip_prefix('(') {
            let close = rest.find(')').ok_or("unclosed parenthesis")?;
            let inner = &rest[..close];
            if !inner.contains(',') {
                let (inv, tail) = TypeInvariants::parse_prefix(inner)?;
                if !tail.trim().is_empty() {
                    return Err(format!("unexpected '{}' in parentheses", truncate(tail)));
                }
                return Ok((inv, &rest[close + 1..]));
            }
            let mut parts = Vec::new();
            let toks: Vec<&str> = inner.split(',').collect();
            for (k, tok) in toks.iter().enumerate() {
                let tok = tok.trim();
                if tok.is_empty() && k + 1 == toks.len() && k > 0 {
                    break;
                }
                let v: u32 = tok.parse().map_err(|_| format!("bad part '{tok}'"))?;
                parts.push(v);
            }
            return Ok((check(parts)?, &rest[close + 1..]));
        }
        let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
        if end == 0 {
            return Err(format!("expected invariant at '{}'", truncate(s)));
        }
        let digits = &s[..end];
        if digits == "0" {
            return Ok((TypeInvariants::trivial(), &s[end..]));
        }
        let parts: Vec<u32> = digits.bytes().map(|b| (b - b'0') as u32).collect();
        Ok((check(parts)?, &s[end..]))
    }
}

fn truncate(s: &str) -> &str {
    &s[..s.len().min(12)]
}

fn check(parts: Vec<u32>) -> Result<TypeInvariants, String> {
    if parts.contains(&0) {
        return Err("parts must be positive".into());
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err("parts must be weakly decreasing".into());
    }
    Ok(TypeInvariants(parts))
}

impl fmt::Display for TypeInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "0")
        } else if self.0.iter().all(|&x| x <= 9) {
            for x in &self.0 {
                write!(f, "{x}")?;
            }
            Ok(())
        } else if self.0.len() == 1 {
            write!(f, "({},)", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl FromStr for TypeInvariants {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (inv, rest) =
            TypeInvariants::parse_prefix(s).map_err(|m| ParseError::new(1, 1, m))?;
        if !rest.trim().is_empty() {
            let col = s.len() - rest.len() + 1;
            return Err(ParseError::new(1, col, "trailing input"));
        }
        Ok(inv)
    }
}

impl From<TypeInvariants> for String {
    fn from(t: TypeInvariants) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for TypeInvariants {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Shorthand for building invariants in tests and tables.
pub fn ti(s: &str) -> TypeInvariants {
    s.parse().expect("valid invariant literal")
}
