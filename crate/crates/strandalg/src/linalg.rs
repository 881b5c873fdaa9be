//! Exact linear algebra over Q, Z and prime fields.
//!
//! Matrices are small and dense; ranks are certified by a modular pass
//! first (a full-rank result mod p is already exact) with a rational
//! fallback, and linear systems are solved over Q with big rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

const P0: u64 = 1_000_000_007;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn reduce(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// Rank of an integer matrix modulo p.
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    let mut mat: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| reduce(x, p)).collect())
        .collect();
    let nrows = mat.len();
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| mat[r][col] != 0);
        match pivot {
            None => {
                col += 1;
            }
            Some(pr) => {
                mat.swap(rank, pr);
                let inv = invmod(mat[rank][col], p);
                for c in col..ncols {
                    mat[rank][c] = mulmod(mat[rank][c], inv, p);
                }
                for r in 0..nrows {
                    if r != rank && mat[r][col] != 0 {
                        let f = mat[r][col];
                        for c in col..ncols {
                            let sub = mulmod(f, mat[rank][c], p);
                            mat[r][c] = (mat[r][c] + p - sub) % p;
                        }
                    }
                }
                rank += 1;
                col += 1;
            }
        }
    }
    rank
}

/// Exact rank over Q of a rational matrix (consumed, Gauss-Jordan).
pub fn rank_rational(mut mat: Vec<Vec<BigRational>>) -> usize {
    let nrows = mat.len();
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !mat[r][col].is_zero());
        match pivot {
            None => col += 1,
            Some(pr) => {
                mat.swap(rank, pr);
                let inv = mat[rank][col].recip();
                for c in col..ncols {
                    let v = &mat[rank][c] * &inv;
                    mat[rank][c] = v;
                }
                for r in 0..nrows {
                    if r != rank && !mat[r][col].is_zero() {
                        let f = mat[r][col].clone();
                        for c in col..ncols {
                            let v = &mat[r][c] - &f * &mat[rank][c];
                            mat[r][c] = v;
                        }
                    }
                }
                rank += 1;
                col += 1;
            }
        }
    }
    rank
}

/// Exact rank over Q of an integer matrix.
///
/// A full-rank result mod p certifies the rational rank (a nonzero minor
/// mod p is nonzero over Q); otherwise fall back to exact arithmetic.
pub fn rank_int(rows: &[Vec<i64>]) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if nrows == 0 || ncols == 0 {
        return 0;
    }
    let modular = rank_mod_p(rows, P0);
    if modular == nrows.min(ncols) {
        return modular;
    }
    let mat: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    rank_rational(mat)
}

/// Solves A x = b over Q, where A is given by rows. Returns any solution,
/// or None when the system is inconsistent.
pub fn solve_rational(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    assert_eq!(nrows, b.len());
    let ncols = a.first().map_or(0, |r| r.len());
    let mut mat: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            row.iter()
                .chain(std::iter::once(&rhs))
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !mat[r][col].is_zero());
        match pivot {
            None => col += 1,
            Some(pr) => {
                mat.swap(rank, pr);
                let inv = mat[rank][col].recip();
                for c in col..=ncols {
                    let v = &mat[rank][c] * &inv;
                    mat[rank][c] = v;
                }
                for r in 0..nrows {
                    if r != rank && !mat[r][col].is_zero() {
                        let f = mat[r][col].clone();
                        for c in col..=ncols {
                            let v = &mat[r][c] - &f * &mat[rank][c];
                            mat[r][c] = v;
                        }
                    }
                }
                pivots.push((rank, col));
                rank += 1;
                col += 1;
            }
        }
    }
    for r in rank..nrows {
        if !mat[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); ncols];
    for &(r, c) in &pivots {
        x[c] = mat[r][ncols].clone();
    }
    Some(x)
}

/// Solves A x = b over F_p. Returns any solution.
pub fn solve_mod_p(a: &[Vec<i64>], b: &[i64], p: u64) -> Option<Vec<u64>> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut mat: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            row.iter()
                .chain(std::iter::once(&rhs))
                .map(|&x| reduce(x, p))
                .collect()
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| mat[r][col] != 0);
        match pivot {
            None => col += 1,
            Some(pr) => {
                mat.swap(rank, pr);
                let inv = invmod(mat[rank][col], p);
                for c in col..=ncols {
                    mat[rank][c] = mulmod(mat[rank][c], inv, p);
                }
                for r in 0..nrows {
                    if r != rank && mat[r][col] != 0 {
                        let f = mat[r][col];
                        for c in col..=ncols {
                            let sub = mulmod(f, mat[rank][c], p);
                            mat[r][c] = (mat[r][c] + p - sub) % p;
                        }
                    }
                }
                pivots.push((rank, col));
                rank += 1;
                col += 1;
            }
        }
    }
    for r in rank..nrows {
        if mat[r][ncols] != 0 {
            return None;
        }
    }
    let mut x = vec![0u64; ncols];
    for &(r, c) in &pivots {
        x[c] = mat[r][ncols];
    }
    Some(x)
}

/// Diagonal of the Smith normal form of an integer matrix: the nonzero
/// invariant factors, each dividing the next.
pub fn smith_diagonal(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let mut mat: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = mat.len();
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut out: Vec<BigInt> = Vec::new();
    let mut top = 0;
    while top < nrows && top < ncols {
        let mut found = None;
        'search: for r in top..nrows {
            for c in top..ncols {
                if !mat[r][c].is_zero() {
                    found = Some((r, c));
                    break 'search;
                }
            }
        }
        let Some((r, c)) = found else { break };
        mat.swap(top, r);
        for row in mat.iter_mut() {
            row.swap(top, c);
        }
        loop {
            let mut dirty = false;
            for r in top + 1..nrows {
                if mat[r][top].is_zero() {
                    continue;
                }
                let q = &mat[r][top] / &mat[top][top];
                for cc in top..ncols {
                    let v = &mat[r][cc] - &q * &mat[top][cc];
                    mat[r][cc] = v;
                }
                if !mat[r][top].is_zero() {
                    mat.swap(top, r);
                    dirty = true;
                }
            }
            for cc in top + 1..ncols {
                if mat[top][cc].is_zero() {
                    continue;
                }
                let q = &mat[top][cc] / &mat[top][top];
                for row in mat.iter_mut().take(nrows).skip(top) {
                    let v = &row[cc] - &q * &row[top];
                    row[cc] = v;
                }
                if !mat[top][cc].is_zero() {
                    for row in mat.iter_mut() {
                        row.swap(top, cc);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        out.push(mat[top][top].abs());
        top += 1;
    }
    // enforce the divisibility chain
    let mut i = 0;
    while i + 1 < out.len() {
        if (&out[i + 1] % &out[i]).is_zero() {
            i += 1;
            continue;
        }
        let g = gcd(&out[i], &out[i + 1]);
        let l = (&out[i] * &out[i + 1]) / &g;
        out[i] = g;
        out[i + 1] = l;
        i = i.saturating_sub(1);
    }
    out
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_int(&m), 2);
        assert_eq!(rank_mod_p(&m, P0), 2);
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(rank_int(&id), 2);
        assert_eq!(rank_int(&[]), 0);
    }

    #[test]
    fn rank_sees_char_p_collapse() {
        // rank 1 mod 2, rank 2 over Q
        let m = vec![vec![1, 1], vec![1, -1]];
        assert_eq!(rank_mod_p(&m, 2), 1);
        assert_eq!(rank_int(&m), 2);
    }

    #[test]
    fn solving() {
        let a = vec![vec![2, 0], vec![0, 4]];
        let x = solve_rational(&a, &[1, 2]).unwrap();
        assert_eq!(x[0], BigRational::new(1.into(), 2.into()));
        assert_eq!(x[1], BigRational::new(1.into(), 2.into()));
        let a = vec![vec![1, 1], vec![1, 1]];
        assert!(solve_rational(&a, &[0, 1]).is_none());
        let a = vec![vec![1, 1]];
        assert!(solve_rational(&a, &[3]).is_some());
    }

    #[test]
    fn solve_mod() {
        let a = vec![vec![2, 0], vec![0, 3]];
        let x = solve_mod_p(&a, &[1, 1], 5).unwrap();
        assert_eq!(x, vec![3, 2]);
        assert!(solve_mod_p(&[vec![2]], &[1], 2).is_none());
    }

    #[test]
    fn smith_small() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        let d = smith_diagonal(&m);
        let expected: Vec<BigInt> = vec![2.into(), 2.into(), 156.into()];
        assert_eq!(d, expected);
    }

    #[test]
    fn smith_rank_only() {
        let m = vec![vec![1, 0], vec![0, 0]];
        let d = smith_diagonal(&m);
        assert_eq!(d, vec![BigInt::from(1)]);
    }
}
