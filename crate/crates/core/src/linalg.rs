//! Small dense exact linear algebra over a field.

use crate::field::{ArithError, Field};

pub type Matrix<F> = Vec<Vec<F>>;

/// Row reduced echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Result<Vec<usize>, ArithError> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse()?;
        for x in m[r].iter_mut() {
            *x = x.times(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let d = f.times(&m[r][j]);
                    m[i][j] = m[i][j].minus(&d);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

pub fn rank<F: Field>(m: &Matrix<F>) -> Result<usize, ArithError> {
    let mut a = m.clone();
    Ok(rref(&mut a)?.len())
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column.
pub fn kernel<F: Field>(m: &Matrix<F>, cols: usize) -> Result<Vec<Vec<F>>, ArithError> {
    let mut a = m.clone();
    let pivots = rref(&mut a)?;
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][free].negate();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// One solution of `m x = b`, or `None` when inconsistent.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Result<Option<Vec<F>>, ArithError> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Matrix<F> = m
        .iter()
        .zip(b.iter())
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut a)?;
    if pivots.contains(&cols) {
        return Ok(None);
    }
    let mut x = vec![F::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = a[r][cols].clone();
    }
    Ok(Some(x))
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Result<Option<Matrix<F>>, ArithError> {
    let n = m.len();
    let mut a: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut a)?;
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Ok(None);
    }
    Ok(Some(a.into_iter().map(|r| r[n..].to_vec()).collect()))
}

pub fn det<F: Field>(m: &Matrix<F>) -> Result<F, ArithError> {
    let n = m.len();
    let mut a = m.clone();
    let mut d = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(F::zero());
        };
        if p != c {
            a.swap(p, c);
            d = d.negate();
        }
        d = d.times(&a[c][c]);
        let inv = a[c][c].inverse()?;
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].times(&inv);
            for j in c..n {
                let t = f.times(&a[c][j]);
                a[i][j] = a[i][j].minus(&t);
            }
        }
    }
    Ok(d)
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..k).fold(F::zero(), |acc, l| acc.plus(&a[i][l].times(&b[l][j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &Matrix<F>, v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v.iter())
                .fold(F::zero(), |acc, (x, y)| acc.plus(&x.times(y)))
        })
        .collect()
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    fn m(v: &[&[i64]]) -> Matrix<Rat> {
        v.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&a).unwrap(), 1);
        let k = kernel(&a, 3).unwrap();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(mat_vec(&a, &v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[0, 1, 0], &[1, 0, 1]]);
        let inv = inverse(&a).unwrap().unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
        assert_eq!(det(&a).unwrap(), Rat::from_int(2));
        assert!(inverse(&m(&[&[1, 1], &[1, 1]])).unwrap().is_none());
    }

    #[test]
    fn solve_consistency() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = solve(&a, &[Rat::from_int(3), Rat::from_int(1)]).unwrap().unwrap();
        assert_eq!(x, vec![Rat::from_int(2), Rat::from_int(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&b, &[Rat::from_int(1), Rat::from_int(3)]).unwrap().is_none());
    }
}
