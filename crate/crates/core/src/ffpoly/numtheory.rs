//! Integer helpers: factorization (via `num-prime`), Euler phi, Möbius,
//! divisors and multiplicative orders.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_prime::nt_funcs::factorize128;

use crate::error::{Error, Result};

/// Prime factorization of `n >= 1`.
pub fn factorize(n: u128) -> BTreeMap<u128, usize> {
    if n <= 1 {
        return BTreeMap::new();
    }
    factorize128(n)
}

pub fn euler_phi(n: u128) -> u128 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u128) -> i32 {
    let fac = factorize(n);
    if fac.values().any(|&e| e > 1) {
        0
    } else if fac.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u128) -> Vec<u128> {
    let mut out = vec![1u128];
    for (p, e) in factorize(n) {
        let current = out.clone();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= p;
            out.extend(current.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn lcm(a: u128, b: u128) -> u128 {
    a.lcm(&b)
}

fn pow_mod(base: u128, e: u128, m: u128) -> u128 {
    let r = BigUint::from(base).modpow(&BigUint::from(e), &BigUint::from(m));
    u128::try_from(r).expect("residue fits")
}

/// `M(s; q)`: least `r >= 1` with `q^r ≡ 1 (mod s)`.
pub fn mult_order(s: u128, q: u128) -> Result<u128> {
    if s == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if s.gcd(&q) != 1 {
        return Err(Error::NotCoprime {
            what: "multiplicative order",
            a: s,
            b: q,
        });
    }
    if s == 1 {
        return Ok(1);
    }
    let mut ord = euler_phi(s);
    for (r, e) in factorize(ord) {
        for _ in 0..e {
            if pow_mod(q % s, ord / r, s) == 1 {
                ord /= r;
            } else {
                break;
            }
        }
    }
    Ok(ord)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(4, 3).unwrap(), 2);
        assert_eq!(mult_order(8, 3).unwrap(), 2);
        assert_eq!(mult_order(1, 7).unwrap(), 1);
        assert_eq!(mult_order(2, 3).unwrap(), 1);
        assert!(matches!(mult_order(6, 3), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn mult_order_matches_naive_loop() {
        for q in [3u128, 5, 7, 9, 25] {
            for s in 1..200u128 {
                if s.gcd(&q) != 1 {
                    continue;
                }
                let mut r = 1;
                let mut acc = q % s;
                while acc != 1 % s {
                    acc = acc * q % s;
                    r += 1;
                }
                assert_eq!(mult_order(s, q).unwrap(), r, "M({s};{q})");
            }
        }
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(7), -1);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }
}
