use std::fmt::Write as _;

use super::presentation::PcPresentation;
use super::word::NormalWord;
use crate::error::ParseError;

impl PcPresentation {
    /// Serializes to the line format: a `pc p=<p> n=<n>` header, every power
    /// relation, then the nontrivial commutator relations.
    pub fn to_text(&self) -> String {
        let n = self.ngens();
        let mut s = format!("pc p={} n={}\n", self.prime(), n);
        for i in 0..n {
            writeln!(s, "g{}^p = {}", i + 1, self.power_rhs(i)).unwrap();
        }
        for j in 0..n {
            for i in 0..j {
                let w = self.comm_rhs(j, i);
                if !w.is_identity() {
                    writeln!(s, "[g{},g{}] = {}", j + 1, i + 1, w).unwrap();
                }
            }
        }
        s
    }

    /// Parses the line format. Missing relations are trivial.
    pub fn from_text(text: &str) -> Result<PcPresentation, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, 1, "missing header"))?;
        let (p, n) = parse_header(header).ok_or_else(|| {
            ParseError::new(hl, 1, "expected header 'pc p=<prime> n=<ngens>'")
        })?;
        let id = NormalWord::identity(n);
        let mut power = vec![id.clone(); n];
        let mut comm: Vec<Vec<NormalWord>> = (0..n).map(|j| vec![id.clone(); j]).collect();
        for (ln, line) in lines {
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| ParseError::new(ln, 1, "expected '='"))?;
            let rhs_col = lhs.len() + 2;
            let word = parse_word(rhs.trim(), n, p)
                .map_err(|m| ParseError::new(ln, rhs_col, m))?;
            let lhs = lhs.trim();
            if let Some(inner) = lhs.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| ParseError::new(ln, 1, "expected [g<j>,g<i>]"))?;
                let j = parse_gen(a.trim(), n).map_err(|m| ParseError::new(ln, 2, m))?;
                let i = parse_gen(b.trim(), n).map_err(|m| ParseError::new(ln, 2, m))?;
                if j <= i {
                    return Err(ParseError::new(ln, 1, "commutator needs j > i"));
                }
                check_depth(&word, j, ln, rhs_col)?;
                comm[j][i] = word;
            } else if let Some(g) = lhs.strip_suffix("^p") {
                let i = parse_gen(g.trim(), n).map_err(|m| ParseError::new(ln, 1, m))?;
                check_depth(&word, i, ln, rhs_col)?;
                power[i] = word;
            } else {
                return Err(ParseError::new(ln, 1, "unrecognized relation"));
            }
        }
        PcPresentation::new(p, vec![1; n], power, comm, vec![None; n])
            .map_err(|e| ParseError::new(0, 0, e.to_string()))
    }
}

fn check_depth(word: &NormalWord, above: usize, ln: usize, col: usize) -> Result<(), ParseError> {
    match word.depth() {
        Some(d) if d <= above => Err(ParseError::new(
            ln,
            col,
            format!("right-hand side involves g{}, must be above g{}", d + 1, above + 1),
        )),
        _ => Ok(()),
    }
}

fn parse_header(h: &str) -> Option<(u8, usize)> {
    let mut it = h.split_whitespace();
    if it.next()? != "pc" {
        return None;
    }
    let p = it.next()?.strip_prefix("p=")?.parse().ok()?;
    let n = it.next()?.strip_prefix("n=")?.parse().ok()?;
    if it.next().is_some() || p < 2 {
        return None;
    }
    Some((p, n))
}

fn parse_gen(s: &str, n: usize) -> Result<usize, String> {
    let k: usize = s
        .strip_prefix('g')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| format!("bad generator '{s}'"))?;
    if k == 0 || k > n {
        return Err(format!("generator g{k} out of range"));
    }
    Ok(k - 1)
}

fn parse_word(s: &str, n: usize, p: u8) -> Result<NormalWord, String> {
    let mut w = NormalWord::identity(n);
    if s == "1" {
        return Ok(w);
    }
    let mut last: Option<usize> = None;
    for syl in s.split('*') {
        let syl = syl.trim();
        let (g, e) = match syl.split_once('^') {
            Some((g, e)) => (g, e.parse::<u8>().map_err(|_| format!("bad exponent in '{syl}'"))?),
            None => (syl, 1),
        };
        let k = parse_gen(g, n)?;
        if e == 0 || e >= p {
            return Err(format!("exponent {e} outside [1,{p})"));
        }
        if last.is_some_and(|l| l >= k) {
            return Err("word is not in normal form".into());
        }
        last = Some(k);
        w.exponents_mut()[k] = e;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEIS: &str = "pc p=3 n=3\ng1^p = 1\ng2^p = 1\ng3^p = 1\n[g2,g1] = g3\n";

    #[test]
    fn roundtrip_exact() {
        let g = PcPresentation::from_text(HEIS).unwrap();
        assert_eq!(g.to_text(), HEIS);
    }

    #[test]
    fn omitted_relations_trivial() {
        let g = PcPresentation::from_text("pc p=3 n=2\n").unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.to_text(), "pc p=3 n=2\ng1^p = 1\ng2^p = 1\n");
    }

    #[test]
    fn errors_carry_line() {
        let e = PcPresentation::from_text("pc p=3 n=2\n[g1,g2] = 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = PcPresentation::from_text("pc p=3 n=2\ng1^p = g2^3\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = PcPresentation::from_text("pc p=3 n=2\n\n[g2,g1] = g2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = PcPresentation::from_text("pc p=3 n=2\ng1^p = g1\n").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
