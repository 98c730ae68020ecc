//! Small integer and prime-field helpers.

use crate::error::{Error, Result};

/// Largest prime accepted for coefficient fields. Keeps products of two
/// coefficients comfortably inside `u64`.
pub const MAX_PRIME: u32 = 65_521;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<u32> {
    if p <= MAX_PRIME && is_prime(p) {
        Ok(p)
    } else {
        Err(Error::InvalidPrime(p))
    }
}

/// Reduces a signed integer into `0..p`.
pub fn reduce(x: i128, p: u32) -> u32 {
    x.rem_euclid(p as i128) as u32
}

pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// Multiplicative inverse in F_p, `None` for zero.
pub fn inv_mod(a: u32, p: u32) -> Option<u32> {
    let (g, x, _) = ext_gcd(a as i128, p as i128);
    if g != 1 {
        return None;
    }
    Some(reduce(x, p))
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a as i128, b as i128).0 as i64
}

/// `C(a, 2) mod p` for an integer `a`.
pub fn binom2_mod(a: i64, p: u32) -> u32 {
    let a = a as i128;
    reduce(a * (a - 1) / 2, p)
}

/// Rank of a matrix over F_p (rows are consumed).
pub fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                let pivot_row = rows[rank].clone();
                for (x, &y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = add_mod(*x, neg_mod(mul_mod(f, y, p), p), p);
                }
            }
        }
        rank += 1;
    }
    rank
}
