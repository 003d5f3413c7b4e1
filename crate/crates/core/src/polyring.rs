//! Exact multivariate polynomials over the rationals.
//!
//! A [`Poly`] is a sparse map from monomials in named symbols to nonzero
//! [`Rational`] coefficients, kept in graded-lexicographic order. Equality is
//! structural equality of the canonical form, and the `Display` rendering
//! walks the terms in that order, so the rendered string of a polynomial is
//! a stable output contract (e.g. `8*LL - 8*Lw + 16*lam`).
//!
//! The symbol set is open: callers register whatever named symbols they need
//! by building polynomials with [`Poly::var`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigRational, One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(n.into())
}

/// The reduced fraction `n / d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(n.into(), d.into())
}

/// An interned symbol name. Ordering is plain string ordering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: impl AsRef<str>) -> Self {
        Symbol(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Symbol::new(name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A product of symbols with positive exponents. The empty monomial is `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    // invariant: no zero exponents stored
    exps: BTreeMap<Symbol, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut exps = BTreeMap::new();
        exps.insert(s, 1);
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&Symbol, u32)> {
        self.exps.iter().map(|(s, &e)| (s, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (s, &e) in &other.exps {
            *exps.entry(s.clone()).or_insert(0) += e;
        }
        Monomial { exps }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|(s, &k)| (s.clone(), k * e)).collect(),
        }
    }
}

// Graded-lexicographic: lower total degree first, ties broken by the sorted
// (symbol, exponent) sequence. This is the canonical term order used both
// for storage and for rendering.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.iter().cmp(other.exps.iter()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, e) in self.exponents() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A multivariate polynomial in canonical form: no zero coefficients, terms
/// ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    /// The polynomial consisting of the single symbol `name`.
    pub fn var(name: &str) -> Self {
        Poly::from_monomial(Monomial::symbol(Symbol::new(name)), Rational::one())
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    /// True iff the canonical form has no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of `m`, zero if absent.
    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// All symbols that occur in some term.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().map(|(s, _)| s.clone()))
            .collect()
    }

    /// Multiply by an integer.
    pub fn scaled(&self, k: i64) -> Poly {
        self.scaled_rat(&rat(k))
    }

    /// Multiply by a rational.
    pub fn scaled_rat(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Sum of an iterator of polynomials.
    pub fn sum<I: IntoIterator<Item = Poly>>(iter: I) -> Poly {
        iter.into_iter().fold(Poly::zero(), |acc, p| &acc + &p)
    }

    /// Simultaneous substitution of symbols by polynomials, followed by
    /// canonicalization. A bound symbol's replacement must not mention any
    /// bound symbol; otherwise the substitution is rejected as cyclic.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Poly>) -> Result<Poly> {
        for replacement in bindings.values() {
            for s in replacement.symbols() {
                if bindings.contains_key(&s) {
                    return Err(Error::CyclicSubstitution(s.as_str().to_owned()));
                }
            }
        }
        let mut out = Poly::zero();
        for (mono, coeff) in &self.terms {
            let mut term = Poly::constant(coeff.clone());
            for (s, e) in mono.exponents() {
                let factor = match bindings.get(s) {
                    Some(p) => p.pow(e),
                    None => Poly::from_monomial(
                        Monomial::symbol(s.clone()).pow(e),
                        Rational::one(),
                    ),
                };
                term = &term * &factor;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    // Canonicalizing insert: accumulate and drop the entry if it cancels.
    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> Poly {
        Poly::var("x")
    }
    fn y() -> Poly {
        Poly::var("y")
    }
    fn w() -> Poly {
        Poly::var("w")
    }

    #[test]
    fn add_cancels() {
        let a = &x() + &Poly::one();
        let b = &x() - &Poly::one();
        assert_eq!(&a + &b, x().scaled(2));
    }

    #[test]
    fn add_zero_is_identity() {
        let p = &x().pow(2) + &y();
        assert_eq!(&p + &Poly::zero(), p);
    }

    #[test]
    fn rational_coefficients_merge() {
        let half_x = x().scaled_rat(&ratio(1, 2));
        assert_eq!(&half_x + &half_x, x());
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(p, &x().pow(2) - &y().pow(2));
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn one_is_multiplicative_identity() {
        let q = &(&x() * &y()).scaled(3) + &Poly::int(5);
        assert_eq!(&q * &Poly::one(), q);
    }

    #[test]
    fn truncated_geometric_square() {
        // (1 + w + w^2)^2 by direct convolution
        let t = Poly::sum([Poly::one(), w(), w().pow(2)]);
        let sq = &t * &t;
        let expected = Poly::sum([
            Poly::one(),
            w().scaled(2),
            w().pow(2).scaled(3),
            w().pow(3).scaled(2),
            w().pow(4),
        ]);
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "1 + 2*w + 3*w^2 + 2*w^3 + w^4");
    }

    #[test]
    fn substitute_scales_constants() {
        // 16*lam with lam -> c/12 gives 4/3*c
        let p = Poly::var("lam").scaled(16);
        let mut bindings = BTreeMap::new();
        bindings.insert(
            Symbol::new("lam"),
            Poly::var("c").scaled_rat(&ratio(1, 12)),
        );
        let out = p.substitute(&bindings).unwrap();
        assert_eq!(out, Poly::var("c").scaled_rat(&ratio(4, 3)));
        assert_eq!(out.to_string(), "4/3*c");
    }

    #[test]
    fn substitute_empty_is_identity() {
        let p = &x().pow(2) + &y();
        assert_eq!(p.substitute(&BTreeMap::new()).unwrap(), p);
    }

    #[test]
    fn substitute_evaluates() {
        // 3p^2 - 3p + 1 at p = 2 is 7
        let p = Poly::var("p");
        let poly = &(&p.pow(2).scaled(3) - &p.scaled(3)) + &Poly::one();
        let mut bindings = BTreeMap::new();
        bindings.insert(Symbol::new("p"), Poly::int(2));
        assert_eq!(poly.substitute(&bindings).unwrap(), Poly::int(7));
    }

    #[test]
    fn substitute_rejects_bound_symbol_in_replacement() {
        let p = &x() + &y();
        let mut bindings = BTreeMap::new();
        bindings.insert(Symbol::new("x"), &y() + &Poly::one());
        bindings.insert(Symbol::new("y"), Poly::int(3));
        assert_eq!(
            p.substitute(&bindings),
            Err(Error::CyclicSubstitution("y".to_owned()))
        );
    }

    #[test]
    fn is_zero_detects_cancellation() {
        assert!((&x() - &x()).is_zero());
        let xy = &x() * &y();
        let yx = &y() * &x();
        assert!((&xy - &yx).is_zero());
        assert!(!(&x().pow(2) - &x()).is_zero());
    }

    #[test]
    fn rendering_contract() {
        let p = Poly::sum([
            Poly::var("LL").scaled(8),
            Poly::var("Lw").scaled(-8),
            Poly::var("lam").scaled(16),
        ]);
        assert_eq!(p.to_string(), "8*LL - 8*Lw + 16*lam");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::var("ww").scaled_rat(&ratio(4, 3)).to_string(), "4/3*ww");
        assert_eq!((-&x()).to_string(), "-x");
    }

    fn no_zero_coefficients(p: &Poly) -> bool {
        p.terms().all(|(_, c)| !c.is_zero())
    }

    fn arb_poly_over(symbols: &'static [&'static str]) -> impl Strategy<Value = Poly> {
        let n = symbols.len();
        prop::collection::vec(
            (prop::collection::vec(0u32..3, n), -10i64..=10),
            0..6,
        )
        .prop_map(move |raw| {
            Poly::sum(raw.into_iter().map(|(exps, c)| {
                let mono = symbols
                    .iter()
                    .zip(exps)
                    .fold(Monomial::one(), |m, (s, e)| {
                        m.mul(&Monomial::symbol(Symbol::new(s)).pow(e))
                    });
                Poly::from_monomial(mono, rat(c))
            }))
        })
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        arb_poly_over(&["x", "y", "z", "u"])
    }

    proptest! {
        #[test]
        fn addition_associative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }

        #[test]
        fn multiplication_commutative(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn no_zero_terms_after_ops(a in arb_poly(), b in arb_poly()) {
            prop_assert!(no_zero_coefficients(&(&a + &b)));
            prop_assert!(no_zero_coefficients(&(&a - &b)));
            prop_assert!(no_zero_coefficients(&(&a * &b)));
        }

        #[test]
        fn substitute_distributes_over_mul(
            a in arb_poly_over(&["x", "u"]),
            b in arb_poly_over(&["x", "u"]),
            r in arb_poly_over(&["y", "z"]),
            s in arb_poly_over(&["y", "z"]),
        ) {
            let mut bindings = BTreeMap::new();
            bindings.insert(Symbol::new("x"), r);
            bindings.insert(Symbol::new("u"), s);
            let lhs = (&a * &b).substitute(&bindings).unwrap();
            let rhs = &a.substitute(&bindings).unwrap() * &b.substitute(&bindings).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
