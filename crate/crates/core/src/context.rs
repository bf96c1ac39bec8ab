//! The prime `p` and the arithmetic tables derived from it.

use crate::{Error, Result};

/// An odd prime together with precomputed tables used everywhere else:
/// inverses mod p, factorials mod p and mod p^2, and binomial coefficients.
///
/// `r = (p - 1) / 2` is the number of nontrivial Kummer coordinates; the
/// Galois group acting on homology is elementary abelian of rank `r + 1`.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u64,
    r: usize,
    inv: Vec<u64>,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
    fact_sq: Vec<u64>,
    pascal: Vec<Vec<u64>>,
}

fn is_odd_prime(n: u64) -> bool {
    if n < 3 || n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let pu = p as usize;
        let mut inv = vec![0u64; pu];
        inv[1] = 1;
        for i in 2..pu {
            // p = (p/i)*i + p%i  =>  inv(i) = -(p/i)*inv(p%i)
            inv[i] = (p - (p / i as u64) * inv[(p % i as u64) as usize] % p) % p;
        }
        let mut fact = vec![1u64; pu];
        for i in 1..pu {
            fact[i] = fact[i - 1] * i as u64 % p;
        }
        let inv_fact = fact.iter().map(|&f| mod_inv(f, p)).collect();
        let p2 = p * p;
        let mut fact_sq = vec![1u64; 2 * pu - 1];
        for i in 1..2 * pu - 1 {
            fact_sq[i] = fact_sq[i - 1] * i as u64 % p2;
        }
        // Binomials up to row 2p-2, as plain integers reduced mod p^2; the
        // largest value that ever enters is C(24, 12) which fits u64.
        let rows = 2 * pu - 1;
        let mut pascal = vec![vec![0u64; rows]; rows];
        for i in 0..rows {
            pascal[i][0] = 1;
            for j in 1..=i {
                pascal[i][j] = (pascal[i - 1][j - 1] + pascal[i - 1][j]) % p2;
            }
        }
        Ok(PrimeContext {
            p,
            r: (pu - 1) / 2,
            inv,
            fact,
            inv_fact,
            fact_sq,
            pascal,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_usize(&self) -> usize {
        self.p as usize
    }

    /// `(p - 1) / 2`.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Rank of the Galois group: `r + 1`.
    pub fn rank(&self) -> usize {
        self.r + 1
    }

    /// Inverse of `a` mod p, for `a` not divisible by p.
    pub fn inv(&self, a: u64) -> u64 {
        let a = (a % self.p) as usize;
        assert!(a != 0, "division by zero mod {}", self.p);
        self.inv[a]
    }

    /// `n!` mod p for `n < p`.
    pub fn factorial(&self, n: usize) -> u64 {
        self.fact[n]
    }

    /// `(n!)^-1` mod p for `n < p`.
    pub fn inv_factorial(&self, n: usize) -> u64 {
        self.inv_fact[n]
    }

    /// `n!` mod p^2 for `n <= 2p - 2`.
    pub fn factorial_sq(&self, n: usize) -> u64 {
        self.fact_sq[n]
    }

    /// `(n! / p)` mod p for `p <= n <= 2p - 2`; the factorial has p-adic
    /// valuation exactly 1 in this range, and Wilson's theorem gives
    /// `n!/p = -(n - p)! mod p`.
    pub fn factorial_over_p(&self, n: usize) -> u64 {
        debug_assert!(n >= self.p_usize() && n <= 2 * self.p_usize() - 2);
        (self.p - self.fact[n - self.p_usize()]) % self.p
    }

    /// Binomial coefficient `C(n, k)` reduced mod p^2 (hence also valid mod p
    /// after a further reduction), for `n <= 2p - 2`.
    pub fn binomial(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.pascal[n][k]
        }
    }
}

/// Inverse of `a` modulo `m` for `gcd(a, m) = 1`, by extended Euclid.
pub fn mod_inv(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert!(old_r == 1, "attempt to invert a non-unit");
    (old_s.rem_euclid(m as i128)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_primes() {
        for n in [0, 1, 2, 4, 9, 15, 21, 169] {
            assert!(PrimeContext::new(n).is_err(), "{n} accepted");
        }
        for n in [3, 5, 7, 11, 13, 163] {
            assert!(PrimeContext::new(n).is_ok(), "{n} rejected");
        }
    }

    #[test]
    fn inverse_table() {
        for p in [3u64, 5, 7, 11, 13] {
            let ctx = PrimeContext::new(p).unwrap();
            for i in 1..p {
                assert_eq!(ctx.inv(i) * i % p, 1);
            }
        }
    }

    #[test]
    fn factorials_and_binomials() {
        let ctx = PrimeContext::new(7).unwrap();
        assert_eq!(ctx.factorial(6), 720 % 7);
        assert_eq!(ctx.factorial_sq(12), {
            let mut f = 1u64;
            for i in 1..=12 {
                f = f * i % 49;
            }
            f
        });
        // 7!/7 = 720 = -(0)! = -1 mod 7? 720 mod 7 = 6 = -1, consistent with
        // Wilson's theorem.
        assert_eq!(ctx.factorial_over_p(7), 6);
        assert_eq!(ctx.binomial(12, 5), 792 % 49);
        assert_eq!(ctx.binomial(4, 2), 6);
        assert_eq!(ctx.binomial(2, 5), 0);
    }

    #[test]
    fn factorial_over_p_exact() {
        // Cross-check against the integer factorial divided by p.
        let ctx = PrimeContext::new(5).unwrap();
        for n in 5..=8usize {
            let mut f: u128 = 1;
            for i in 1..=n as u128 {
                f *= i;
            }
            assert_eq!(f % 5, 0);
            assert_eq!(ctx.factorial_over_p(n) as u128, (f / 5) % 5);
        }
    }
}
