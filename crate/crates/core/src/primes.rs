//! Primality by trial division. Every prime this crate ever sees is tiny
//! (at most a few thousand), so nothing cleverer is warranted.

use crate::{Error, Result};

/// Trial division up to the square root.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut k = 3;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// Error out unless `p` is prime.
pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// All primes `<= n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}
