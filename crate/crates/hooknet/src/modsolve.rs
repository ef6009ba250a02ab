//! Exact rational linear solving via modular arithmetic.
//!
//! The covariance fixed-point equation produces dense integer systems with a
//! few hundred unknowns whose solutions are rationals with large numerators.
//! Gaussian elimination directly over big rationals thrashes on coefficient
//! growth, so we solve modulo a stream of 62-bit primes, combine residues by
//! the Chinese remainder theorem, lift to rationals by Wang reconstruction,
//! and accept only after an exact verification of the candidate solution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
///
/// The fixed base set is a proven witness set for every n below 3.3e24, far
/// beyond the u64 range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending stream of primes starting just below 2^62.
struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    fn new() -> Self {
        PrimeStream { next: (1u64 << 62) - 1 }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
    }
}

fn int_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

/// Residue of a rational mod p, or None when p divides the denominator.
fn rat_mod(x: &BigRational, p: u64) -> Option<u64> {
    let den = int_mod(x.denom(), p);
    if den == 0 {
        return None;
    }
    let num = int_mod(x.numer(), p);
    // Fermat inverse; p is prime.
    Some(mulmod(num, powmod(den, p - 2, p), p))
}

/// Solves a dense square system mod p. None marks an unlucky prime
/// (a denominator collision or a matrix singular mod p).
fn solve_mod_p(matrix: &RatMatrix, rhs: &[BigRational], p: u64) -> Option<Vec<u64>> {
    let n = matrix.rows;
    let mut a: Vec<Vec<u64>> = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = Vec::with_capacity(n + 1);
        for c in 0..n {
            row.push(rat_mod(matrix.get(r, c), p)?);
        }
        row.push(rat_mod(&rhs[r], p)?);
        a.push(row);
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let inv = powmod(a[col][col], p - 2, p);
        for c in col..=n {
            a[col][c] = mulmod(a[col][c], inv, p);
        }
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for c in col..=n {
                let sub = mulmod(f, a[col][c], p);
                a[r][c] = (a[r][c] + p - sub) % p;
            }
        }
    }
    Some((0..n).map(|r| a[r][n]).collect())
}

/// Rational reconstruction of residue x mod m with |num|, den <= sqrt(m/2).
fn reconstruct(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let num = if t1.is_negative() { -r1 } else { r1.clone() };
    let den = t1.abs();
    if num.gcd(&den) != BigInt::one() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Solves `matrix * x = rhs` exactly over the rationals.
///
/// The result is verified by exact substitution before it is returned, so a
/// spuriously early reconstruction can never leak out.
pub fn solve_rational(matrix: &RatMatrix, rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    assert_eq!(matrix.rows, matrix.cols, "solver needs a square system");
    assert_eq!(matrix.rows, rhs.len(), "right-hand side length mismatch");
    let n = matrix.rows;
    if n == 0 {
        return Ok(Vec::new());
    }

    let mut primes = PrimeStream::new();
    let mut modulus = BigInt::one();
    let mut combined: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut used = 0usize;
    let mut unlucky = 0usize;

    loop {
        let p = primes.next().expect("prime stream is unbounded");
        let Some(sol) = solve_mod_p(matrix, rhs, p) else {
            unlucky += 1;
            if unlucky > 24 {
                return Err(Error::Structural(
                    "linear system is singular, covariance equation has no unique solution".into(),
                ));
            }
            continue;
        };
        // Incremental CRT: lift each residue into Z/(modulus*p).
        let pb = BigInt::from(p);
        let minv = powmod(int_mod(&modulus, p), p - 2, p);
        for i in 0..n {
            let cur = int_mod(&combined[i], p);
            let delta = mulmod((sol[i] + p - cur) % p, minv, p);
            combined[i] += &modulus * BigInt::from(delta);
        }
        modulus *= &pb;
        used += 1;

        if used >= 2 {
            if let Some(candidate) = combined
                .iter()
                .map(|c| reconstruct(c, &modulus))
                .collect::<Option<Vec<_>>>()
            {
                if verifies(matrix, &candidate, rhs) {
                    return Ok(candidate);
                }
            }
        }
        if used > 96 {
            return Err(Error::Internal(
                "rational reconstruction did not converge".into(),
            ));
        }
    }
}

fn verifies(matrix: &RatMatrix, x: &[BigRational], rhs: &[BigRational]) -> bool {
    (0..matrix.rows).all(|r| {
        let mut acc = BigRational::zero();
        for c in 0..matrix.cols {
            let a = matrix.get(r, c);
            if !a.is_zero() && !x[c].is_zero() {
                acc += a * &x[c];
            }
        }
        acc == rhs[r]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{int, rat};

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64((1 << 62) - 1));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn prime_stream_yields_62_bit_primes() {
        let ps: Vec<u64> = PrimeStream::new().take(3).collect();
        assert_eq!(ps.len(), 3);
        for p in ps {
            assert!(is_prime_u64(p));
            assert!(p > 1 << 61);
        }
    }

    #[test]
    fn reconstruction_recovers_small_rationals() {
        let m = BigInt::from(4_611_686_018_427_387_847u64) * BigInt::from(4_611_686_018_427_387_817u64);
        let target = rat(-355, 113);
        let den_inv = {
            // Brute modular inverse via extended gcd on BigInt.
            let e = target.denom().extended_gcd(&m);
            e.x.mod_floor(&m)
        };
        let residue = (target.numer() * den_inv).mod_floor(&m);
        assert_eq!(reconstruct(&residue, &m).unwrap(), target);
    }

    #[test]
    fn solves_a_rational_system_exactly() {
        let a = RatMatrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![rat(1, 3), int(4), int(-1)],
            vec![int(0), int(5), int(9)],
        ]);
        let x_true = vec![rat(22, 7), rat(-1, 2), rat(5, 3)];
        let rhs: Vec<_> = (0..3)
            .map(|r| {
                (0..3).fold(num_traits::Zero::zero(), |acc: BigRational, c| {
                    acc + a.get(r, c) * &x_true[c]
                })
            })
            .collect();
        assert_eq!(solve_rational(&a, &rhs).unwrap(), x_true);
    }

    #[test]
    fn singular_system_is_refused() {
        let a = RatMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
        let rhs = vec![int(1), int(3)];
        assert!(solve_rational(&a, &rhs).is_err());
    }
}
