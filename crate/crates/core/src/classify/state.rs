use std::fmt;

use serde::{Deserialize, Serialize};

use crate::families::Tree;
use crate::invariants::{ti, TypeInvariants};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Simple,
    Complex,
    Undetermined,
}

/// State and tree read off first-order invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateReading {
    pub n: Option<u32>,
    pub tree: Option<Tree>,
    /// First-order invariants do not separate simple from complex types;
    /// this is filled in from a transfer kernel type when one is known.
    pub family: Family,
    pub reason: Option<String>,
}

impl StateReading {
    fn undetermined(reason: impl Into<String>) -> Self {
        StateReading {
            n: None,
            tree: None,
            family: Family::Undetermined,
            reason: Some(reason.into()),
        }
    }

    /// `GS` for the ground state, `ES<n>` for excited states.
    pub fn label(&self) -> Option<String> {
        self.n.map(|n| if n == 0 { "GS".into() } else { format!("ES{n}") })
    }
}

impl fmt::Display for StateReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.n, self.tree, &self.reason) {
            (Some(_), Some(t), _) => write!(f, "{} on {t}", self.label().unwrap()),
            (_, _, Some(r)) => write!(f, "undetermined ({r})"),
            _ => write!(f, "undetermined"),
        }
    }
}

/// `Some(n)` when `t` is the polarization `(n+3, n+2)`.
pub fn polarization_state(t: &TypeInvariants) -> Option<u32> {
    match t.parts() {
        [a, b] if *a >= 3 && *b + 1 == *a => Some(a - 3),
        _ => None,
    }
}

pub fn detect_state(ati: &[TypeInvariants]) -> StateReading {
    if ati.len() != 4 {
        return StateReading::undetermined(format!("{} components instead of 4", ati.len()));
    }
    let polar: Vec<usize> = (0..4).filter(|&k| polarization_state(&ati[k]).is_some()).collect();
    let [k] = polar[..] else {
        if ati.iter().any(|t| matches!(t.parts(), [a, b] if a == b && *a >= 2)) {
            return StateReading::undetermined("homocyclic polarization");
        }
        return StateReading::undetermined("no unique heterocyclic polarization");
    };
    let n = polarization_state(&ati[k]);
    let mut rest: Vec<TypeInvariants> = (0..4).filter(|&j| j != k).map(|j| ati[j].clone()).collect();
    rest.sort();
    let tree = if rest == [ti("111"), ti("21"), ti("21")] {
        Tree::Q
    } else if rest == [ti("21"), ti("21"), ti("21")] {
        Tree::U
    } else {
        return StateReading::undetermined("stabilization is neither 111,21,21 nor 21,21,21");
    };
    StateReading {
        n,
        tree: Some(tree),
        family: Family::Undetermined,
        reason: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::parse_quadruple;

    fn read(s: &str) -> StateReading {
        detect_state(&parse_quadruple(s).unwrap())
    }

    #[test]
    fn ground_and_excited() {
        let r = read("[32,111,21,21]");
        assert_eq!((r.n, r.tree), (Some(0), Some(Tree::Q)));
        let r = read("[21,43,21,21]");
        assert_eq!((r.n, r.tree), (Some(1), Some(Tree::U)));
        assert_eq!(r.label().as_deref(), Some("ES1"));
    }

    #[test]
    fn homocyclic_is_undetermined() {
        let r = read("[33,21,21,21]");
        assert_eq!(r.n, None);
        assert_eq!(r.reason.as_deref(), Some("homocyclic polarization"));
        assert_eq!(read("[21,21,21,21]").n, None);
        assert_eq!(read("[32,111,111,21]").tree, None);
    }
}
