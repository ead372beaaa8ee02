use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator index paired with a positive exponent.
pub type Syllable = (u16, u8);

/// Element of a pc-group in collected form `g_1^{e_1} ... g_n^{e_n}` with
/// every exponent in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalWord {
    exps: Vec<u8>,
}

impl NormalWord {
    pub fn identity(ngens: usize) -> Self {
        NormalWord { exps: vec![0; ngens] }
    }

    pub fn generator(ngens: usize, index: usize) -> Self {
        let mut w = Self::identity(ngens);
        w.exps[index] = 1;
        w
    }

    pub fn from_exponents(exps: Vec<u8>) -> Self {
        NormalWord { exps }
    }

    pub fn from_syllables(ngens: usize, syllables: &[Syllable]) -> Self {
        let mut w = Self::identity(ngens);
        for &(g, e) in syllables {
            w.exps[g as usize] = e;
        }
        w
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub(crate) fn exponents_mut(&mut self) -> &mut [u8] {
        &mut self.exps
    }

    pub fn into_exponents(self) -> Vec<u8> {
        self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Index of the first nonzero exponent.
    pub fn depth(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e != 0)
    }

    pub fn leading_exponent(&self) -> u8 {
        self.depth().map(|d| self.exps[d]).unwrap_or(0)
    }

    pub fn syllables(&self) -> Vec<Syllable> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i as u16, e))
            .collect()
    }

    pub fn get(&self, index: usize) -> u8 {
        self.exps[index]
    }
}

impl fmt::Debug for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syl = self.syllables();
        if syl.is_empty() {
            return write!(f, "1");
        }
        for (k, (g, e)) in syl.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "g{}", g + 1)?;
            } else {
                write!(f, "g{}^{}", g + 1, e)?;
            }
        }
        Ok(())
    }
}
