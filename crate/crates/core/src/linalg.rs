//! Dense Gaussian elimination over a [`Field`].

use crate::gf::{Elem, Field};

/// Row-reduce in place to reduced echelon form; returns pivot columns.
pub fn row_reduce(f: &Field, rows: &mut [Vec<Elem>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c];
            for j in c..ncols {
                let t = f.mul(factor, rows[r][j]);
                rows[i][j] = f.sub(rows[i][j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &Field, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    rank_in_place(f, &mut m)
}

/// Rank, destroying `rows`. Forward elimination only.
pub fn rank_in_place(f: &Field, rows: &mut [Vec<Elem>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let factor = f.mul(rows[i][c], inv);
            for j in c..ncols {
                let t = f.mul(factor, rows[r][j]);
                rows[i][j] = f.sub(rows[i][j], t);
            }
        }
        r += 1;
    }
    r
}

/// Basis of the right kernel `{x : rows * x = 0}`.
pub fn kernel(f: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); ncols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[i][fc]);
            }
            v
        })
        .collect()
}

pub fn mat_vec(f: &Field, rows: &[Vec<Elem>], x: &[Elem]) -> Vec<Elem> {
    rows.iter().map(|r| f.dot(r, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn m(f: &Field, rows: &[&[i64]]) -> Vec<Vec<Elem>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| f.from_int(v)).collect())
            .collect()
    }

    #[test]
    fn rank_examples() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(rank(&f, &m(&f, &[&[1, 2, 0], &[2, 1, 0]])), 1);
        assert_eq!(rank(&f, &m(&f, &[&[1, 0, 0], &[0, 0, 1]])), 2);
        assert_eq!(rank(&f, &m(&f, &[&[0, 0, 0]])), 0);
        assert_eq!(rank(&f, &[]), 0);
    }

    #[test]
    fn kernel_is_annihilated_and_complementary() {
        let f = make_field(5, 1).unwrap();
        let a = m(&f, &[&[1, 2, 3, 4], &[0, 1, 1, 1]]);
        let k = kernel(&f, &a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&f, &a, v).iter().all(|e| e.is_zero()));
        }
        assert_eq!(rank(&f, &k), 2);
    }
}
