use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::artin::{Ati2, Tkt};
use crate::classify::{Ipad, Length, Signature};
use crate::error::ParseError;

/// Nonzero fundamental discriminant of a quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Option<Self> {
        (d != 0).then_some(Discriminant(d))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn signature(self) -> Signature {
        Signature::of_discriminant(self.0)
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub disc: Discriminant,
    pub ipad: Ipad,
    /// Canonical form.
    pub tkt: Option<Tkt>,
    pub length: Option<Length>,
    pub ati2: Option<Ati2>,
}

impl fmt::Display for FieldRecord {
    /// The canonical record line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "disc={} ipad={}", self.disc, self.ipad)?;
        if let Some(k) = &self.tkt {
            write!(f, " tkt={k}")?;
        }
        if let Some(l) = &self.length {
            write!(f, " len={l}")?;
        }
        if let Some(a) = &self.ati2 {
            write!(f, " ati2={a}")?;
        }
        Ok(())
    }
}

/// Splits `key=value` fields; a value runs up to the next whitespace that
/// starts another `key=`, so values may contain spaces.
fn fields(line: &str) -> Vec<(usize, &str, &str)> {
    let bytes = line.as_bytes();
    let mut starts = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let at_boundary = k == 0 || bytes[k - 1].is_ascii_whitespace();
        if at_boundary && bytes[k].is_ascii_alphabetic() {
            let mut j = k;
            while j < bytes.len() && bytes[j].is_ascii_alphanumeric() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'=' {
                starts.push((k, j));
            }
        }
        k += 1;
    }
    let mut out = Vec::new();
    for (n, &(k, j)) in starts.iter().enumerate() {
        let end = starts.get(n + 1).map_or(line.len(), |&(next, _)| next);
        out.push((k, &line[k..j], line[j + 1..end].trim()));
    }
    out
}

fn parse_line(line: &str, lineno: usize) -> Result<Option<FieldRecord>, ParseError> {
    let content = line.split('#').next().unwrap_or("");
    if content.trim().is_empty() {
        return Ok(None);
    }
    let lead = content.len() - content.trim_start().len();
    let fs = fields(content);
    match fs.first() {
        Some(&(k, _, _)) if content[..k].trim().is_empty() => {}
        _ => return Err(ParseError::new(lineno, lead + 1, "expected key=value fields")),
    }
    let mut disc = None;
    let mut ipad = None;
    let mut tkt = None;
    let mut length = None;
    let mut ati2 = None;
    for (col0, key, value) in fs {
        let vcol = col0 + key.len() + 2;
        let relocate = |e: ParseError| ParseError::new(lineno, vcol + e.column - 1, e.message);
        match key {
            "disc" => {
                let d: i64 = value
                    .parse()
                    .map_err(|_| ParseError::new(lineno, vcol, format!("invalid discriminant '{value}'")))?;
                disc = Some(Discriminant::new(d).ok_or_else(|| ParseError::new(lineno, vcol, "discriminant is zero"))?);
            }
            "ipad" => ipad = Some(value.parse::<Ipad>().map_err(relocate)?),
            "tkt" => tkt = Some(value.parse::<Tkt>().map_err(relocate)?.canonical()),
            "len" if value.is_empty() => {}
            "len" => {
                length = Some(value.parse::<Length>().map_err(|m| ParseError::new(lineno, vcol, m))?);
            }
            "ati2" => ati2 = Some(value.parse::<Ati2>().map_err(relocate)?),
            _ => return Err(ParseError::new(lineno, col0 + 1, format!("unknown field '{key}'"))),
        }
    }
    let disc = disc.ok_or_else(|| ParseError::new(lineno, lead + 1, "missing disc="))?;
    let ipad = ipad.ok_or_else(|| ParseError::new(lineno, lead + 1, "missing ipad="))?;
    if ipad.0.len() != 5 {
        return Err(ParseError::new(
            lineno,
            lead + 1,
            format!("ipad has {} components, expected 5", ipad.0.len()),
        ));
    }
    Ok(Some(FieldRecord {
        disc,
        ipad,
        tkt,
        length,
        ati2,
    }))
}

/// One record per non-blank line; `#` starts a comment.
pub fn parse_records(text: &str) -> Result<Vec<FieldRecord>, ParseError> {
    let mut out: Vec<FieldRecord> = Vec::new();
    let mut seen: HashMap<Discriminant, usize> = HashMap::new();
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        if let Some(r) = parse_line(line, lineno)? {
            if let Some(first) = seen.insert(r.disc, lineno) {
                let col = line.find("disc=").map_or(1, |c| c + 1);
                return Err(ParseError::new(
                    lineno,
                    col,
                    format!("duplicate discriminant {} (first on line {first})", r.disc),
                ));
            }
            out.push(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_ipad_forms() {
        let text = "# header\n\
                    disc=342664 ipad=([3,3], [3,9], [3,9], [3,9], [9,27]) tkt=E.9 len=3\n\
                    disc=-9748 ipad=[11;21,21,21,32] tkt=2231\n";
        let rs = parse_records(text).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[0].ipad, rs[1].ipad);
        assert_eq!(rs[0].length, Some(Length::Exactly3));
        assert_eq!(rs[1].disc.signature(), Signature::Imaginary);
        assert_eq!(rs[0].tkt, rs[1].tkt);
    }

    #[test]
    fn canonical_line_roundtrip() {
        let text = "disc=1162949 ipad=[11;111,21,21,32] tkt=H.4 len=2or3 ati2=([32;321,(311)^3],[111;321,(111)^3,(11)^9],[21;321,(21)^3]^2)";
        let r = &parse_records(text).unwrap()[0];
        let line = r.to_string();
        let again = &parse_records(&line).unwrap()[0];
        assert_eq!(r, again);
        assert_eq!(again.to_string(), line);
    }

    #[test]
    fn empty_and_errors() {
        assert!(parse_records("").unwrap().is_empty());
        let e = parse_records("disc=5 ipad=[11;21,21,21,32]\ndisc=5 ipad=[11;21,21,21,32]").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        assert!(e.message.contains("duplicate"));
        let e = parse_records("disc=0 ipad=[11;21,21,21,32]").unwrap_err();
        assert_eq!(e.column, 6);
        let e = parse_records("disc=12 ipad=[11;21,21,21,3x]").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.column > 13, "{e}");
        let e = parse_records("disc=12 ipad=[11;21,21,21,32] foo=1").unwrap_err();
        assert_eq!(e.column, 31);
        assert!(parse_records("disc=12 ipad=[11;21]").is_err());
    }

    #[test]
    fn blank_length_is_absent() {
        let r = &parse_records("disc=230668493 ipad=[11;21,21,21,43] tkt=E.9 len=").unwrap()[0];
        assert_eq!(r.length, None);
    }
}
