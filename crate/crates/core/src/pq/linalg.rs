//! Row reduction over the field with p elements.

/// Reduced row echelon form of a span, with pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub ncols: usize,
    pub rows: Vec<Vec<u8>>,
    pub pivots: Vec<usize>,
}

fn inv_mod(a: u8, p: u8) -> u8 {
    (1..p).find(|&x| (a as u32 * x as u32) % p as u32 == 1).unwrap()
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: vec![],
            pivots: vec![],
        }
    }

    pub fn from_rows(rows: impl IntoIterator<Item = Vec<u8>>, ncols: usize, p: u8) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(r, p);
        }
        e
    }

    /// Adds a vector to the span, keeping the form fully reduced.
    pub fn insert(&mut self, mut v: Vec<u8>, p: u8) -> bool {
        self.reduce(&mut v, p);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv_mod(v[c], p);
        for x in v.iter_mut() {
            *x = ((*x as u32 * s as u32) % p as u32) as u8;
        }
        for r in self.rows.iter_mut() {
            let f = r[c];
            if f != 0 {
                axpy(r, &v, p - f, p);
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, v);
        true
    }

    pub fn reduce(&self, v: &mut [u8], p: u8) {
        for (r, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                axpy(v, r, p - f, p);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Coordinates of column `c` in terms of the free columns once the span is set to zero.
    pub fn substitution(&self, c: usize, free: &[usize], p: u8) -> Vec<u8> {
        match self.pivots.iter().position(|&q| q == c) {
            None => free.iter().map(|&f| u8::from(f == c)).collect(),
            Some(k) => free
                .iter()
                .map(|&f| (p - self.rows[k][f]) % p)
                .collect(),
        }
    }
}

/// `y += a x` modulo p.
pub fn axpy(y: &mut [u8], x: &[u8], a: u8, p: u8) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = ((*yi as u32 + a as u32 * xi as u32) % p as u32) as u8;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_substitution() {
        let e = Echelon::from_rows([vec![1, 2, 0], vec![2, 1, 0]], 3, 3);
        // second row is twice the first mod 3
        assert_eq!(e.rank(), 1);
        assert_eq!(e.pivots, vec![0]);
        let free = e.free_columns();
        assert_eq!(free, vec![1, 2]);
        // x0 = -2 x1 = x1
        assert_eq!(e.substitution(0, &free, 3), vec![1, 0]);
    }
}
