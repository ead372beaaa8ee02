//! Smith normal form over the integers.

use num_integer::Integer;
use num_traits::Signed;

/// Diagonal of the Smith normal form of `m`, each entry dividing the next.
/// Zero entries are kept for rank-deficient input.
pub fn smith_diagonal<T>(mut m: Vec<Vec<T>>) -> Vec<T>
where
    T: Integer + Signed + Clone,
{
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut done = true;
        for i in t + 1..rows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = m[i][t].div_floor(&m[t][t]);
            for j in t..cols {
                let v = m[t][j].clone() * q.clone();
                m[i][j] = m[i][j].clone() - v;
            }
            if !m[i][t].is_zero() {
                done = false;
            }
        }
        for j in t + 1..cols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = m[t][j].div_floor(&m[t][t]);
            for i in t..rows {
                let v = m[i][t].clone() * q.clone();
                m[i][j] = m[i][j].clone() - v;
            }
            if !m[t][j].is_zero() {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // enforce divisibility of the rest of the block
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !m[i][j].is_multiple_of(&m[t][t]) {
                    for k in t..cols {
                        let v = m[i][k].clone();
                        m[t][k] = m[t][k].clone() + v;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    while diag.len() < rows.min(cols) {
        diag.push(T::zero());
    }
    diag
}

/// Exponent of `p` in `x` (nonzero).
pub fn p_valuation<T>(x: &T, p: &T) -> u32
where
    T: Integer + Clone,
{
    let mut v = 0;
    let mut y = x.clone();
    while !y.is_zero() && y.is_multiple_of(p) {
        y = y / p.clone();
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_small() {
        let d = smith_diagonal(vec![vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn cyclic_decomposition() {
        // Z/3 x Z/9 presented redundantly
        let d = smith_diagonal(vec![vec![3i32, 0], vec![0, 9], vec![3, 9]]);
        assert_eq!(d, vec![3, 9]);
    }

    #[test]
    fn rank_deficient() {
        let d = smith_diagonal(vec![vec![0i64, 0], vec![0, 5]]);
        assert_eq!(d, vec![5, 0]);
    }

    #[test]
    fn valuation() {
        assert_eq!(p_valuation(&81i64, &3), 4);
        assert_eq!(p_valuation(&10i64, &3), 0);
    }
}
