use serde::{Deserialize, Serialize};

/// Signature `(r1, r2)` of a number field and whether it contains the p-th roots of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSignature {
    pub r1: u32,
    pub r2: u32,
    pub theta: u32,
}

impl FieldSignature {
    pub fn new(r1: u32, r2: u32, theta: u32) -> Self {
        assert!(r1 + r2 >= 1, "a number field has at least one place at infinity");
        assert!(theta <= 1, "theta is 0 or 1");
        FieldSignature { r1, r2, theta }
    }

    pub fn imaginary_quadratic() -> Self {
        FieldSignature::new(0, 1, 0)
    }

    pub fn real_quadratic() -> Self {
        FieldSignature::new(2, 0, 0)
    }

    /// Torsion-free unit rank `r1 + r2 - 1`.
    pub fn unit_rank(&self) -> u32 {
        self.r1 + self.r2 - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShafarevichVerdict {
    pub admissible: bool,
    /// `d1 + r + theta - d2`.
    pub slack: i64,
}

/// Checks `d1 <= d2 <= d1 + r + theta`.
pub fn shafarevich_admissible(d1: usize, d2: usize, sig: FieldSignature) -> ShafarevichVerdict {
    let slack = d1 as i64 + sig.unit_rank() as i64 + sig.theta as i64 - d2 as i64;
    ShafarevichVerdict {
        admissible: d1 <= d2 && slack >= 0,
        slack,
    }
}
