use std::fmt;
use std::sync::Arc;

use crate::error::ParseError;

/// Word in a free group: letter `k+1` is generator `k`, `-(k+1)` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(vec![])
    }

    pub fn generator(k: usize) -> Self {
        FreeWord(vec![k as i32 + 1])
    }

    pub fn from_letters(letters: Vec<i32>) -> Self {
        let mut w = FreeWord(vec![]);
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, l: i32) {
        if self.0.last() == Some(&-l) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn mul(&self, other: &FreeWord) -> Self {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = FreeWord::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `[a,b] = a^-1 b^-1 a b`.
    pub fn comm(a: &FreeWord, b: &FreeWord) -> Self {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    /// Left-normed `[a, b, c, ...]`.
    pub fn comm_left(words: &[FreeWord]) -> Self {
        let mut w = words[0].clone();
        for b in &words[1..] {
            w = FreeWord::comm(&w, b);
        }
        w
    }

    /// `w^v = v^-1 w v`.
    pub fn conj(&self, v: &FreeWord) -> Self {
        v.inverse().mul(self).mul(v)
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut s = vec![0i64; ngens];
        for &l in &self.0 {
            s[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        s
    }

    /// Runs of equal letters as `(generator, exponent)`.
    pub fn syllables(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for &l in &self.0 {
            let g = l.unsigned_abs() as usize - 1;
            let e = l.signum() as i64;
            match out.last_mut() {
                Some((h, f)) if *h == g && f.signum() == e => *f += e,
                _ => out.push((g, e)),
            }
        }
        out
    }
}

impl std::ops::Mul for &FreeWord {
    type Output = FreeWord;
    fn mul(self, rhs: &FreeWord) -> FreeWord {
        FreeWord::mul(self, rhs)
    }
}

/// Relator kept in the shape it was written, so that evaluation in a group
/// costs one operation per node instead of one per expanded letter.
#[derive(Clone, Debug)]
pub enum Expr {
    Word(FreeWord),
    Mul(Vec<Arc<Expr>>),
    Pow(Arc<Expr>, i64),
    /// `[a,b]`
    Comm(Arc<Expr>, Arc<Expr>),
    /// `a^b`
    Conj(Arc<Expr>, Arc<Expr>),
}

impl Expr {
    pub fn gen(k: usize) -> Arc<Expr> {
        Arc::new(Expr::Word(FreeWord::generator(k)))
    }

    pub fn identity() -> Arc<Expr> {
        Arc::new(Expr::Word(FreeWord::identity()))
    }

    pub fn mul(parts: Vec<Arc<Expr>>) -> Arc<Expr> {
        Arc::new(Expr::Mul(parts))
    }

    pub fn pow(a: &Arc<Expr>, k: i64) -> Arc<Expr> {
        Arc::new(Expr::Pow(a.clone(), k))
    }

    pub fn inv(a: &Arc<Expr>) -> Arc<Expr> {
        Expr::pow(a, -1)
    }

    pub fn comm(a: &Arc<Expr>, b: &Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Comm(a.clone(), b.clone()))
    }

    /// Left-normed `[a, b, c, ...]`.
    pub fn comm_left(parts: &[Arc<Expr>]) -> Arc<Expr> {
        let mut w = parts[0].clone();
        for b in &parts[1..] {
            w = Expr::comm(&w, b);
        }
        w
    }

    pub fn conj(a: &Arc<Expr>, b: &Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Conj(a.clone(), b.clone()))
    }

    /// Expands to a freely reduced word.
    pub fn expand(&self) -> FreeWord {
        match self {
            Expr::Word(w) => w.clone(),
            Expr::Mul(parts) => parts
                .iter()
                .fold(FreeWord::identity(), |acc, e| acc.mul(&e.expand())),
            Expr::Pow(a, k) => a.expand().pow(*k),
            Expr::Comm(a, b) => FreeWord::comm(&a.expand(), &b.expand()),
            Expr::Conj(a, b) => a.expand().conj(&b.expand()),
        }
    }

    /// Number of generators the expression mentions, counting up to the largest.
    pub fn generator_bound(&self) -> usize {
        match self {
            Expr::Word(w) => w.letters().iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0),
            Expr::Mul(parts) => parts.iter().map(|e| e.generator_bound()).max().unwrap_or(0),
            Expr::Pow(a, _) => a.generator_bound(),
            Expr::Comm(a, b) | Expr::Conj(a, b) => a.generator_bound().max(b.generator_bound()),
        }
    }

    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        match self {
            Expr::Word(w) => w.exponent_sums(ngens),
            Expr::Mul(parts) => {
                let mut s = vec![0; ngens];
                for e in parts {
                    for (x, y) in s.iter_mut().zip(e.exponent_sums(ngens)) {
                        *x += y;
                    }
                }
                s
            }
            Expr::Pow(a, k) => a.exponent_sums(ngens).into_iter().map(|x| x * k).collect(),
            Expr::Comm(..) => vec![0; ngens],
            Expr::Conj(a, _) => a.exponent_sums(ngens),
        }
    }

    /// Evaluates in a group given by its operations.
    pub fn eval<T: Clone>(&self, ops: &impl GroupOps<T>) -> T {
        match self {
            Expr::Word(w) => {
                let mut acc = ops.one();
                for (x, e) in w.syllables() {
                    acc = ops.mul(&acc, &ops.gen_pow(x, e));
                }
                acc
            }
            Expr::Mul(parts) => {
                let mut acc = ops.one();
                for e in parts {
                    acc = ops.mul(&acc, &e.eval(ops));
                }
                acc
            }
            Expr::Pow(a, k) => {
                let v = a.eval(ops);
                let v = if *k < 0 { ops.inv(&v) } else { v };
                ops.pow(&v, k.unsigned_abs())
            }
            Expr::Comm(a, b) => {
                let (x, y) = (a.eval(ops), b.eval(ops));
                let yx = ops.mul(&y, &x);
                let xy = ops.mul(&x, &y);
                ops.mul(&ops.inv(&yx), &xy)
            }
            Expr::Conj(a, b) => {
                let (x, y) = (a.eval(ops), b.eval(ops));
                ops.mul(&ops.inv(&y), &ops.mul(&x, &y))
            }
        }
    }
}

/// Group operations used to evaluate relators.
pub trait GroupOps<T: Clone> {
    fn one(&self) -> T;
    fn mul(&self, a: &T, b: &T) -> T;
    fn inv(&self, a: &T) -> T;
    /// Image of generator `x` raised to `e`.
    fn gen_pow(&self, x: usize, e: i64) -> T;
    fn pow(&self, a: &T, k: u64) -> T {
        let mut r = self.one();
        let mut b = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(&r, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }
}

/// Finitely presented group with freely reduced relators.
#[derive(Clone, Debug)]
pub struct FpPresentation {
    names: Vec<String>,
    relators: Vec<Arc<Expr>>,
}

impl PartialEq for FpPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.relator_words() == other.relator_words()
    }
}

impl FpPresentation {
    pub fn new(ngens: usize, relators: Vec<FreeWord>) -> Self {
        let names = (1..=ngens).map(|k| format!("x{k}")).collect();
        Self::with_names(names, relators)
    }

    pub fn with_names(names: Vec<String>, relators: Vec<FreeWord>) -> Self {
        let relators = relators
            .into_iter()
            .filter(|r| !r.is_identity())
            .map(|r| Arc::new(Expr::Word(r)))
            .collect();
        FpPresentation { names, relators }
    }

    /// Presentation with relators given as expressions.
    pub fn from_exprs(names: Vec<String>, relators: Vec<Arc<Expr>>) -> Self {
        FpPresentation { names, relators }
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Arc<Expr>] {
        &self.relators
    }

    /// Relators expanded to freely reduced words.
    pub fn relator_words(&self) -> Vec<FreeWord> {
        self.relators
            .iter()
            .map(|r| r.expand())
            .filter(|w| !w.is_identity())
            .collect()
    }

    pub fn add_relator(&mut self, r: FreeWord) {
        if !r.is_identity() {
            self.relators.push(Arc::new(Expr::Word(r)));
        }
    }

    pub fn render_word(&self, w: &FreeWord) -> String {
        if w.is_identity() {
            return "1".into();
        }
        let parts: Vec<String> = w
            .syllables()
            .into_iter()
            .map(|(g, e)| {
                if e == 1 {
                    self.names[g].clone()
                } else {
                    format!("{}^{}", self.names[g], e)
                }
            })
            .collect();
        parts.join("*")
    }

    /// Parses `fp n=<ngens> [gens=a,b,...]` followed by one relator per line.
    /// Lines may be relations `lhs = rhs`.
    pub fn parse(text: &str) -> Result<FpPresentation, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, 1, "missing header"))?;
        let names = parse_header(header)
            .ok_or_else(|| ParseError::new(hl, 1, "expected header 'fp n=<ngens> [gens=...]'"))?;
        let mut fp = FpPresentation::with_names(names, vec![]);
        for (ln, line) in lines {
            let r = fp
                .parse_expr(line)
                .map_err(|(col, m)| ParseError::new(ln, col, m))?;
            fp.relators.push(r);
        }
        Ok(fp)
    }

    /// Parses a relator or relation in this presentation's generator names.
    pub fn parse_relation(&self, s: &str) -> Result<FreeWord, (usize, String)> {
        Ok(self.parse_expr(s)?.expand())
    }

    fn parse_expr(&self, s: &str) -> Result<Arc<Expr>, (usize, String)> {
        let mut p = WordParser {
            src: s.as_bytes(),
            pos: 0,
            names: &self.names,
        };
        let lhs = p.word()?;
        p.skip_ws();
        let w = if p.eat(b'=') {
            let rhs = p.word()?;
            Expr::mul(vec![lhs, Expr::inv(&rhs)])
        } else {
            lhs
        };
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err((p.pos + 1, "unexpected input".into()));
        }
        Ok(w)
    }
}

impl fmt::Display for FpPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let default = self
            .names
            .iter()
            .enumerate()
            .all(|(k, n)| *n == format!("x{}", k + 1));
        if default {
            writeln!(f, "fp n={}", self.ngens())?;
        } else {
            writeln!(f, "fp n={} gens={}", self.ngens(), self.names.join(","))?;
        }
        for r in self.relator_words() {
            writeln!(f, "{}", self.render_word(&r))?;
        }
        Ok(())
    }
}

fn parse_header(h: &str) -> Option<Vec<String>> {
    let mut it = h.split_whitespace();
    if it.next()? != "fp" {
        return None;
    }
    let n: usize = it.next()?.strip_prefix("n=")?.parse().ok()?;
    let names = match it.next() {
        Some(g) => {
            let names: Vec<String> = g.strip_prefix("gens=")?.split(',').map(String::from).collect();
            if names.len() != n || names.iter().any(|s| !valid_name(s)) {
                return None;
            }
            names
        }
        None => (1..=n).map(|k| format!("x{k}")).collect(),
    };
    if it.next().is_some() {
        return None;
    }
    Some(names)
}

fn valid_name(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|f| f.is_ascii_alphabetic()) && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

type PResult<T> = Result<T, (usize, String)>;
type E = Arc<Expr>;

impl WordParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, m: &str) -> PResult<T> {
        Err((self.pos + 1, m.to_string()))
    }

    fn word(&mut self) -> PResult<E> {
        let mut parts = vec![self.term()?];
        while self.eat(b'*') {
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Expr::mul(parts)
        })
    }

    fn term(&mut self) -> PResult<E> {
        let mut w = self.primary()?;
        while self.eat(b'^') {
            self.skip_ws();
            let c = self.src.get(self.pos).copied();
            if c == Some(b'-') || c.is_some_and(|c| c.is_ascii_digit()) {
                let k = self.integer()?;
                w = Expr::pow(&w, k);
            } else {
                let v = self.primary()?;
                w = Expr::conj(&w, &v);
            }
        }
        Ok(w)
    }

    fn integer(&mut self) -> PResult<i64> {
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| (start + 1, "bad integer".to_string()))
    }

    fn primary(&mut self) -> PResult<E> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut parts = vec![self.word()?];
                while self.eat(b',') {
                    parts.push(self.word()?);
                }
                if !self.eat(b']') {
                    return self.err("expected ']'");
                }
                if parts.len() < 2 {
                    return self.err("commutator needs two entries");
                }
                Ok(Expr::comm_left(&parts))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Expr::identity())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.names.iter().position(|n| n == name) {
                    Some(k) => Ok(Expr::gen(k)),
                    None => Err((start + 1, format!("unknown generator '{name}'"))),
                }
            }
            _ => self.err("expected generator, '(' or '['"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let w = FreeWord::from_letters(vec![1, 2, -2, -1, 1]);
        assert_eq!(w.letters(), &[1]);
    }

    #[test]
    fn sugar_expands() {
        let fp = FpPresentation::parse("fp n=2 gens=a,t\n(a*t)^3 = a^3\n[t,a,t]\nt^a\n").unwrap();
        assert_eq!(fp.relators().len(), 3);
        let x = FreeWord::generator(0);
        let t = FreeWord::generator(1);
        let c = FreeWord::comm_left(&[t.clone(), x.clone(), t.clone()]);
        assert_eq!(fp.relator_words()[1], c);
        assert_eq!(fp.relator_words()[2], t.conj(&x));
    }

    #[test]
    fn normalized_roundtrip() {
        let fp = FpPresentation::parse("fp n=2\nx1^3\n[x2,x1]^-1\n").unwrap();
        let text = fp.to_string();
        assert_eq!(text, "fp n=2\nx1^3\nx1^-1*x2^-1*x1*x2\n");
        assert_eq!(FpPresentation::parse(&text).unwrap(), fp);
    }

    #[test]
    fn errors_located() {
        let e = FpPresentation::parse("fp n=1\nx1*y\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 4));
    }
}
