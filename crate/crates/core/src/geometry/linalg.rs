//! Small dense linear algebra over a [`Scalar`] field.

use std::cmp::Ordering;

use crate::scalar::{is_zero, Scalar};

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<S: Scalar>(a: &[S], k: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * k.clone()).collect()
}

pub fn norm_sq<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub fn cross3<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn is_zero_vec<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(is_zero)
}

/// Lexicographic comparison under the scalar tolerance.
pub fn lex_cmp<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match crate::scalar::cmp(x, y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub fn approx_eq_vec<S: Scalar>(a: &[S], b: &[S]) -> bool {
    lex_cmp(a, b) == Ordering::Equal
}

fn abs_greater<S: Scalar>(a: &S, b: &S) -> bool {
    a.abs() > b.abs()
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref<S: Scalar>(mut rows: Vec<Vec<S>>, ncols: usize) -> (Vec<Vec<S>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let mut best = None;
        for i in r..rows.len() {
            if is_zero(&rows[i][c]) {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) if !S::EXACT && abs_greater(&rows[i][c], &rows[b][c]) => best = Some(i),
                _ => {}
            }
        }
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = S::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i == r || is_zero(&rows[i][c]) {
                continue;
            }
            let f = rows[i][c].clone();
            for j in 0..ncols {
                let v = rows[r][j].clone() * f.clone();
                rows[i][j] = rows[i][j].clone() - v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).1.len()
}

/// Basis of `{x : row·x = 0 for every row}`.
pub fn null_space<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let (red, pivots) = rref(rows.to_vec(), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); ncols];
            v[f] = S::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solve the square system `a x = b`; `None` when singular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let aug: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(aug, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i128>;

    fn q(v: &[i128]) -> Vec<Q> {
        v.iter().map(|&x| Q::from_integer(x)).collect()
    }

    #[test]
    fn null_space_of_plane() {
        let ns = null_space(&[q(&[1, 1, 0])], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(dot(v, &q(&[1, 1, 0])), Q::from_integer(0));
        }
    }

    #[test]
    fn solve_two_by_two() {
        let x = solve(&[q(&[2, 1]), q(&[1, 3])], &q(&[5, 10])).unwrap();
        assert_eq!(x, q(&[1, 3]));
        assert!(solve(&[q(&[1, 2]), q(&[2, 4])], &q(&[1, 2])).is_none());
    }
}
