//! Dense polynomials over the prime field Z/pZ.
//!
//! Only what is needed to pick an irreducible modulus and to do reference
//! arithmetic in the polynomial basis. Polynomials are coefficient vectors,
//! constant term first, with no trailing zeros.

pub(crate) type ZpPoly = Vec<u32>;

pub(crate) fn trim(mut a: ZpPoly) -> ZpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> ZpPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> ZpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo `m` (any nonzero `m`).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> ZpPoly {
    let dm = degree(m).expect("division by zero polynomial");
    let lead_inv = inv_mod(m[dm], p) as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let pp = p as u64;
    while let Some(dr) = r.iter().rposition(|&c| c != 0) {
        if dr < dm {
            break;
        }
        let factor = r[dr] * lead_inv % pp;
        let shift = dr - dm;
        for (j, &c) in m.iter().enumerate() {
            let t = factor * c as u64 % pp;
            r[shift + j] = (r[shift + j] + pp - t) % pp;
        }
    }
    trim(r.into_iter().map(|c| c as u32).collect())
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> ZpPoly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_poly_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> ZpPoly {
    let mut acc: ZpPoly = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> ZpPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test for a monic polynomial of degree `k >= 1`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = match degree(f) {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    let x: ZpPoly = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..k / 2 {
        xp = pow_poly_mod(&xp, p as u64, f, p);
        let g = gcd(f, &sub(&xp, &x, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Monic polynomial of degree `k` whose lower coefficients `c_0..c_{k-1}`
/// are the base-`p` digits of `rank`, with `c_0` the most significant digit.
/// Increasing `rank` walks the monic polynomials in lexicographic order of
/// `(c_0, c_1, ..., c_{k-1})`.
pub(crate) fn monic_from_lex_rank(mut rank: u64, k: usize, p: u32) -> ZpPoly {
    let mut coeffs = vec![0u32; k + 1];
    for i in (0..k).rev() {
        coeffs[i] = (rank % p as u64) as u32;
        rank /= p as u64;
    }
    coeffs[k] = 1;
    coeffs
}

/// Trial-division irreducibility check, used as an independent oracle in tests.
#[cfg(test)]
pub(crate) fn is_irreducible_trial(f: &[u32], p: u32) -> bool {
    let k = match degree(f) {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    for dg in 1..=k / 2 {
        let count = (p as u64).pow(dg as u32);
        for rank in 0..count {
            let g = monic_from_lex_rank(rank, dg, p);
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}
