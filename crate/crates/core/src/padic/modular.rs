//! Word-sized modular arithmetic helpers.

pub(crate) fn ppow(p: u64, k: u32) -> u64 {
    p.checked_pow(k).expect("prime power exceeds u64")
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn modinv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

pub(crate) fn valuation_of_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub(crate) fn least_non_residue(p: u64) -> u64 {
    (2..p).find(|&a| powmod(a, (p - 1) / 2, p) == p - 1).expect("odd prime has a non-residue")
}

/// Legendre symbol of `a` modulo the odd prime `p`, for `a` prime to `p`.
pub(crate) fn legendre(a: u64, p: u64) -> i8 {
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_powers() {
        assert_eq!(modinv(3, 25), Some(17));
        assert_eq!(modinv(5, 25), None);
        assert_eq!(powmod(2, 10, 1000), 24);
        assert_eq!(least_non_residue(7), 3);
        assert_eq!(least_non_residue(3), 2);
        assert_eq!(least_non_residue(5), 2);
        assert_eq!(prime_factors(48), vec![2, 3]);
    }
}
