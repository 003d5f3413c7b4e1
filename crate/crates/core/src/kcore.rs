//! λ-ring style operations on formal sums of line classes.
//!
//! A [`KClass`] is an integer combination of line classes, which is enough
//! for the projective line, where every bundle class splits. The Adams
//! operation `ψ^k` sends a line class of degree `d` to degree `k·d`; the
//! Bott class `θ^k` of a line class is `1 + L + ⋯ + L^{k-1}` and extends
//! multiplicatively over sums. In characteristic `p` the Bott class of the
//! relative differentials has the concrete representative
//! `1 + ω + ⋯ + ω^{p-1}`, built here by [`tau_of_omega`].
//!
//! [`CondensedClass`] is the (rank, degree) shadow in which the Grothendieck
//! group of the projective line is classified; its multiplication law has a
//! square-zero degree part, and inverting a rank that is a power of `p`
//! lands in the localization `Z[1/p]`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigUint, One, Signed, Zero};

use crate::polyring::{rat, Rational};
use crate::primes::ensure_prime;
use crate::{Error, Result};

/// The class of a line bundle, known by its degree. Tensor adds degrees,
/// dual negates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineClass {
    pub degree: i64,
}

impl LineClass {
    pub fn new(degree: i64) -> Self {
        LineClass { degree }
    }

    pub fn tensor(self, other: LineClass) -> LineClass {
        LineClass::new(self.degree + other.degree)
    }

    pub fn dual(self) -> LineClass {
        LineClass::new(-self.degree)
    }
}

impl fmt::Display for LineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({})", self.degree)
    }
}

/// A formal integer combination of line classes. The zero class is the
/// empty combination; addition cancels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KClass {
    // invariant: no zero multiplicities stored
    terms: BTreeMap<LineClass, i64>,
}

impl KClass {
    pub fn zero() -> Self {
        KClass::default()
    }

    /// The class of a single line bundle of the given degree.
    pub fn line(degree: i64) -> Self {
        let mut c = KClass::zero();
        c.add_term(LineClass::new(degree), 1);
        c
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut c = KClass::zero();
        for &(degree, mult) in pairs {
            c.add_term(LineClass::new(degree), mult);
        }
        c
    }

    pub fn terms(&self) -> impl Iterator<Item = (LineClass, i64)> + '_ {
        self.terms.iter().map(|(&l, &m)| (l, m))
    }

    /// Sum of multiplicities.
    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Sum of multiplicity times degree.
    pub fn total_degree(&self) -> i64 {
        self.terms.iter().map(|(l, m)| l.degree * m).sum()
    }

    /// All multiplicities nonnegative (an honest sum of line bundles).
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&m| m >= 0)
    }

    /// Tensor product, extended bilinearly over the formal sums.
    pub fn tensor(&self, other: &KClass) -> KClass {
        let mut out = KClass::zero();
        for (la, ma) in self.terms() {
            for (lb, mb) in other.terms() {
                out.add_term(la.tensor(lb), ma * mb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> KClass {
        let mut out = KClass::line(0);
        for _ in 0..e {
            out = out.tensor(self);
        }
        out
    }

    fn add_term(&mut self, l: LineClass, m: i64) {
        if m == 0 {
            return;
        }
        let entry = self.terms.entry(l).or_insert(0);
        *entry += m;
        if *entry == 0 {
            self.terms.remove(&l);
        }
    }
}

impl std::ops::Add for &KClass {
    type Output = KClass;
    fn add(self, rhs: &KClass) -> KClass {
        let mut out = self.clone();
        for (l, m) in rhs.terms() {
            out.add_term(l, m);
        }
        out
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first, matching how decompositions read
        for (i, (l, m)) in self.terms.iter().rev().enumerate() {
            let negative = *m < 0;
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = m.unsigned_abs();
            if abs == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{abs}*{l}")?;
            }
        }
        Ok(())
    }
}

/// The `k`-th Adams operation: each line class of degree `d` goes to degree
/// `k·d` with the same multiplicity. Rank is preserved.
pub fn adams(k: u32, c: &KClass) -> Result<KClass> {
    if k < 2 {
        return Err(Error::OperationIndex(k));
    }
    let mut out = KClass::zero();
    for (l, m) in c.terms() {
        out.add_term(LineClass::new(k as i64 * l.degree), m);
    }
    Ok(out)
}

/// The `k`-th Bott class of an effective class: `1 + L + ⋯ + L^{k-1}` on a
/// single line class, the product of those on a sum. The rank of the result
/// is `k^rank(c)`.
pub fn bott(k: u32, c: &KClass) -> Result<KClass> {
    if k < 2 {
        return Err(Error::OperationIndex(k));
    }
    if !c.is_effective() {
        return Err(Error::BottOfVirtualClass);
    }
    let mut out = KClass::line(0);
    for (l, m) in c.terms() {
        let single = KClass::from_pairs(
            &(0..k as i64).map(|i| (i * l.degree, 1)).collect::<Vec<_>>(),
        );
        out = out.tensor(&single.pow(m as u32));
    }
    Ok(out)
}

/// Rank of the characteristic-p Bott representative of a rank-`r` bundle:
/// the number of exponent tuples `(i_1, …, i_r)` with `0 <= i_j < p`. Small
/// ranks are counted by explicit enumeration, the rest by the power formula.
pub fn tau_rank(r: u32, p: u64) -> Result<BigUint> {
    ensure_prime(p)?;
    if r <= 4 {
        let mut digits = vec![0u64; r as usize];
        let mut count = BigUint::zero();
        loop {
            count += 1u32;
            // odometer over base-p digits
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    return Ok(count);
                }
                digits[pos] += 1;
                if digits[pos] < p {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }
    Ok(BigUint::from(p).pow(r))
}

/// The class `1 + ω + ⋯ + ω^{p-1}` for a line class ω of the given fiber
/// degree: rank `p`, one summand of degree `k·e` for each `k < p`.
pub fn tau_of_omega(p: u64, omega_fiber_degree: i64) -> Result<KClass> {
    ensure_prime(p)?;
    Ok(KClass::from_pairs(
        &(0..p as i64)
            .map(|k| (k * omega_fiber_degree, 1))
            .collect::<Vec<_>>(),
    ))
}

/// The rank/degree pair of a class of the projective line. Multiplication
/// follows the truncated law `(r₁,e₁)·(r₂,e₂) = (r₁r₂, r₁e₂ + r₂e₁)`: the
/// degree part squares to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensedClass {
    pub rank: Rational,
    pub degree: Rational,
}

impl CondensedClass {
    pub fn new(rank: Rational, degree: Rational) -> Self {
        CondensedClass { rank, degree }
    }

    pub fn from_ints(rank: i64, degree: i64) -> Self {
        CondensedClass::new(rat(rank), rat(degree))
    }

    pub fn one() -> Self {
        CondensedClass::from_ints(1, 0)
    }

    pub fn mul(&self, other: &CondensedClass) -> CondensedClass {
        CondensedClass::new(
            &self.rank * &other.rank,
            &self.rank * &other.degree + &other.rank * &self.degree,
        )
    }

    pub fn add(&self, other: &CondensedClass) -> CondensedClass {
        CondensedClass::new(
            &self.rank + &other.rank,
            &self.degree + &other.degree,
        )
    }
}

impl fmt::Display for CondensedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rank, self.degree)
    }
}

/// Rank and degree of a formal sum of line classes.
pub fn condense(c: &KClass) -> CondensedClass {
    CondensedClass::from_ints(c.rank(), c.total_degree())
}

fn is_power_of(mut n: BigUint, p: u64) -> bool {
    if n.is_zero() {
        return false;
    }
    let p = BigUint::from(p);
    while !n.is_one() {
        if (&n % &p).is_zero() {
            n /= &p;
        } else {
            return false;
        }
    }
    true
}

// Units of Z[1/p] are exactly ±p^k, k any integer.
fn is_unit_in_localization(r: &Rational, p: u64) -> bool {
    if r.is_zero() {
        return false;
    }
    let numer: BigInt = r.numer().abs();
    let denom: BigInt = r.denom().clone();
    is_power_of(numer.to_biguint().unwrap(), p) && is_power_of(denom.to_biguint().unwrap(), p)
}

/// Inverse of a condensed class in the localization at `p`: defined when the
/// rank is `±p^m`, and then `(r, e)⁻¹ = (1/r, -e/r²)`.
pub fn condensed_inverse(c: &CondensedClass, p: u64) -> Result<CondensedClass> {
    ensure_prime(p)?;
    if !is_unit_in_localization(&c.rank, p) {
        return Err(Error::NotUnit {
            rank: c.rank.to_string(),
            p,
        });
    }
    let inv_rank = c.rank.recip();
    let inv_degree = -(&c.degree * &inv_rank * &inv_rank);
    Ok(CondensedClass::new(inv_rank, inv_degree))
}

/// Euler characteristic on the projective line: `χ(O(d)) = d + 1` extended
/// additively, i.e. rank + degree.
pub fn euler_char(c: &CondensedClass) -> Rational {
    &c.rank + &c.degree
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adams_scales_degrees() {
        for p in [2u32, 3, 5, 7] {
            for d in -5..=5 {
                assert_eq!(
                    adams(p, &KClass::line(d)).unwrap(),
                    KClass::line(p as i64 * d)
                );
            }
        }
        assert_eq!(adams(3, &KClass::line(0)).unwrap(), KClass::line(0));
    }

    #[test]
    fn adams_is_additive_and_preserves_rank() {
        let c = KClass::from_pairs(&[(1, 1), (-1, 1)]);
        let out = adams(2, &c).unwrap();
        assert_eq!(out, KClass::from_pairs(&[(2, 1), (-2, 1)]));
        assert_eq!(out.rank(), 2);
    }

    #[test]
    fn adams_rejects_small_index() {
        assert_eq!(adams(1, &KClass::line(1)), Err(Error::OperationIndex(1)));
    }

    #[test]
    fn bott_of_line_class() {
        for p in [2u32, 3, 5] {
            for d in [-2i64, 0, 1, 3] {
                let expected = KClass::from_pairs(
                    &(0..p as i64).map(|i| (i * d, 1)).collect::<Vec<_>>(),
                );
                assert_eq!(bott(p, &KClass::line(d)).unwrap(), expected);
            }
        }
        // trivial line class collapses to multiplicity k
        assert_eq!(bott(2, &KClass::line(0)).unwrap(), KClass::from_pairs(&[(0, 2)]));
    }

    #[test]
    fn bott_of_sum_is_product() {
        let c = KClass::from_pairs(&[(1, 1), (2, 1)]);
        let out = bott(2, &c).unwrap();
        // (1 + O(1)) * (1 + O(2))
        assert_eq!(out, KClass::from_pairs(&[(0, 1), (1, 1), (2, 1), (3, 1)]));
        assert_eq!(out.rank(), 4);
    }

    #[test]
    fn bott_rank_law_small_sweep() {
        // rank(theta^k(c)) = k^rank(c) for effective c of rank <= 3, k <= 5
        for k in 2u32..=5 {
            for d1 in -2i64..=2 {
                for d2 in -2i64..=2 {
                    for d3 in -2i64..=2 {
                        for r in 0..=3usize {
                            let degs = [d1, d2, d3];
                            let mut c = KClass::zero();
                            for &d in &degs[..r] {
                                c = &c + &KClass::line(d);
                            }
                            let out = bott(k, &c).unwrap();
                            assert_eq!(out.rank(), (k as i64).pow(r as u32));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bott_multiplicative_over_sums() {
        let a = KClass::from_pairs(&[(1, 1), (-1, 1)]);
        let b = KClass::from_pairs(&[(2, 1)]);
        let lhs = bott(3, &(&a + &b)).unwrap();
        let rhs = bott(3, &a).unwrap().tensor(&bott(3, &b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bott_rejects_virtual_classes() {
        let virt = KClass::from_pairs(&[(1, 1), (0, -1)]);
        assert_eq!(bott(2, &virt), Err(Error::BottOfVirtualClass));
    }

    #[test]
    fn tau_rank_matches_enumeration_and_power() {
        assert_eq!(tau_rank(1, 7).unwrap(), BigUint::from(7u32));
        assert_eq!(tau_rank(0, 5).unwrap(), BigUint::from(1u32));
        assert_eq!(tau_rank(2, 3).unwrap(), BigUint::from(9u32));
        assert_eq!(tau_rank(4, 3).unwrap(), BigUint::from(81u32));
        assert_eq!(tau_rank(6, 2).unwrap(), BigUint::from(64u32));
        assert_eq!(tau_rank(2, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn tau_of_omega_examples() {
        assert_eq!(
            tau_of_omega(2, -2).unwrap(),
            KClass::from_pairs(&[(0, 1), (-2, 1)])
        );
        let t3 = tau_of_omega(3, -2).unwrap();
        assert_eq!(t3, KClass::from_pairs(&[(0, 1), (-2, 1), (-4, 1)]));
        assert_eq!(t3.total_degree(), -6);
        // rank p, total degree -p(p-1)
        for p in [2u64, 3, 5, 7, 11, 13] {
            let t = tau_of_omega(p, -2).unwrap();
            assert_eq!(t.rank(), p as i64);
            assert_eq!(t.total_degree(), -(p as i64) * (p as i64 - 1));
        }
        assert_eq!(tau_of_omega(6, -2), Err(Error::NotPrime(6)));
    }

    #[test]
    fn condense_examples() {
        assert_eq!(condense(&KClass::line(5)), CondensedClass::from_ints(1, 5));
        assert_eq!(condense(&KClass::zero()), CondensedClass::from_ints(0, 0));
        assert_eq!(
            condense(&tau_of_omega(3, -2).unwrap()),
            CondensedClass::from_ints(3, -6)
        );
    }

    #[test]
    fn condensed_inverse_of_tau_class() {
        for p in [2u64, 3, 5, 7] {
            let pi = p as i64;
            let c = CondensedClass::from_ints(pi, -pi * (pi - 1));
            let inv = condensed_inverse(&c, p).unwrap();
            assert_eq!(inv.rank, rat(1) / rat(pi));
            assert_eq!(inv.degree, rat(pi - 1) / rat(pi));
            assert_eq!(c.mul(&inv), CondensedClass::one());
            assert_eq!(inv.mul(&c), CondensedClass::one());
        }
    }

    #[test]
    fn condensed_inverse_identity_and_rejection() {
        assert_eq!(
            condensed_inverse(&CondensedClass::one(), 5).unwrap(),
            CondensedClass::one()
        );
        let err = condensed_inverse(&CondensedClass::from_ints(2, 5), 3);
        assert_eq!(
            err,
            Err(Error::NotUnit {
                rank: "2".to_owned(),
                p: 3
            })
        );
        // rank 0 is never a unit
        assert!(condensed_inverse(&CondensedClass::from_ints(0, 1), 3).is_err());
    }

    #[test]
    fn euler_char_examples() {
        assert_eq!(euler_char(&CondensedClass::from_ints(1, 3)), rat(4));
        assert_eq!(euler_char(&CondensedClass::from_ints(0, 0)), rat(0));
        // (1/p, d + (p-1)/p) has chi = d + 1
        let p = 5i64;
        let d = 7i64;
        let c = CondensedClass::new(rat(1) / rat(p), rat(d) + rat(p - 1) / rat(p));
        assert_eq!(euler_char(&c), rat(d + 1));
    }

    #[test]
    fn condensed_class_rendering() {
        assert_eq!(CondensedClass::from_ints(3, -6).to_string(), "(3, -6)");
        let c = CondensedClass::new(ratio(1, 2), ratio(7, 2));
        assert_eq!(c.to_string(), "(1/2, 7/2)");
    }

    #[test]
    fn kclass_rendering() {
        assert_eq!(tau_of_omega(3, -2).unwrap().to_string(), "O(0) + O(-2) + O(-4)");
        assert_eq!(KClass::zero().to_string(), "0");
        assert_eq!(KClass::from_pairs(&[(0, 2)]).to_string(), "2*O(0)");
        assert_eq!(
            KClass::from_pairs(&[(1, 1), (0, -1)]).to_string(),
            "O(1) - O(0)"
        );
    }

    use crate::polyring::ratio;
}
