//! Brute-force stabilizer counting over a prime field.
//!
//! The stabilizer of `v = (ell, m, n)` consists of the classes of matrices
//! `g` in `GL4(Fp[t])` whose entry `g_ij` is a polynomial of degree at most
//! `lambda_i - lambda_j` (zero when negative), `lambda = (ell, m, n, 0)`.
//! We enumerate that set, keep the matrices whose determinant is a nonzero
//! constant, and divide by the `p - 1` scalars. Nothing about the block
//! structure is assumed when testing invertibility: the full determinant is
//! expanded over `Fp[t]`.

use num_bigint::BigUint;

use crate::geometry::VertexId;
use crate::{check_q, Error};

const MAXC: usize = 16;

/// Degree bound per entry (row-major), `None` for forced zeros.
pub fn entry_degrees(x: VertexId) -> [Option<u32>; 16] {
    let lam = [x.ell as i64, x.m as i64, x.n as i64, 0];
    let mut out = [None; 16];
    for i in 0..4 {
        for j in 0..4 {
            let d = lam[i] - lam[j];
            if d >= 0 {
                out[4 * i + j] = Some(d as u32);
            }
        }
    }
    out
}

/// Number of matrices in the enumerated set, `q^(number of free coefficients)`.
pub fn enumeration_size(x: VertexId, q: u64) -> u128 {
    let slots: u32 = entry_degrees(x).iter().flatten().map(|d| d + 1).sum();
    (q as u128).checked_pow(slots).unwrap_or(u128::MAX)
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

#[derive(Clone, Copy)]
struct Poly {
    c: [u32; MAXC],
    deg: usize,
}

const PERMS: [[usize; 4]; 24] = {
    let mut out = [[0usize; 4]; 24];
    let mut k = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let mut d = 0;
                while d < 4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out[k] = [a, b, c, d];
                        k += 1;
                    }
                    d += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

fn parity(p: &[usize; 4]) -> bool {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Counts the stabilizer by enumeration. `budget` caps the number of
/// matrices visited.
pub fn brute_force_order(x: VertexId, q: u64, budget: u128) -> Result<BigUint, Error> {
    check_q(q)?;
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let size = enumeration_size(x, q);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let degs = entry_degrees(x);
    if degs.iter().flatten().map(|&d| d as usize).max().unwrap_or(0) * 4 >= MAXC {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let p = q as u32;

    // Permutations whose diagonal product is not structurally zero.
    let perms: Vec<([usize; 4], bool)> = PERMS
        .iter()
        .filter(|s| (0..4).all(|r| degs[4 * r + s[r]].is_some()))
        .map(|s| (*s, parity(s)))
        .collect();

    let mut entries = [Poly { c: [0; MAXC], deg: 0 }; 16];
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for (k, d) in degs.iter().enumerate() {
        if let Some(d) = d {
            entries[k].deg = *d as usize;
            for c in 0..=*d as usize {
                slots.push((k, c));
            }
        }
    }

    let mut count: u64 = 0;
    loop {
        if det_is_unit(&entries, &perms, p) {
            count += 1;
        }
        // Odometer step over all free coefficients.
        let mut k = 0;
        loop {
            if k == slots.len() {
                let total = BigUint::from(count);
                return Ok(total / BigUint::from(q - 1));
            }
            let (e, c) = slots[k];
            let val = &mut entries[e].c[c];
            *val += 1;
            if *val < p {
                break;
            }
            *val = 0;
            k += 1;
        }
    }
}

fn det_is_unit(m: &[Poly; 16], perms: &[([usize; 4], bool)], p: u32) -> bool {
    let mut det = [0u32; MAXC];
    let mut top = 0usize;
    for (s, odd) in perms {
        let mut prod = [0u32; MAXC];
        let first = &m[s[0]];
        prod[..=first.deg].copy_from_slice(&first.c[..=first.deg]);
        let mut deg = first.deg;
        let mut zero = first.c[..=first.deg].iter().all(|&c| c == 0);
        for r in 1..4 {
            if zero {
                break;
            }
            let e = &m[4 * r + s[r]];
            let mut next = [0u32; MAXC];
            for i in 0..=deg {
                if prod[i] == 0 {
                    continue;
                }
                for j in 0..=e.deg {
                    next[i + j] = (next[i + j] + prod[i] * e.c[j]) % p;
                }
            }
            deg += e.deg;
            prod = next;
            zero = prod[..=deg].iter().all(|&c| c == 0);
        }
        if zero {
            continue;
        }
        top = top.max(deg);
        for i in 0..=deg {
            let t = if *odd { p - prod[i] } else { prod[i] };
            det[i] = (det[i] + t) % p;
        }
    }
    det[0] != 0 && det[1..=top.max(0)].iter().all(|&c| c == 0)
}
