//! The projective line over `F_p` as an explicit characteristic-p engine.
//!
//! Everything on the projective line has a closed form: the cohomology of
//! `O(d)`, and the splitting of the pushforward along the relative Frobenius
//! (the degree-p cover `t ↦ t^p` on an affine chart) into `p` line bundle
//! summands `O(e_0) ⊕ ⋯ ⊕ O(e_{p-1})` with `e_i = ⌊(d − i)/p⌋`. The closed
//! form is cross-checked against [`monomial_bucket_decomposition`], which
//! splits the monomial sections `t^j` by residue of `j` mod `p` and reads
//! off each bucket's twist — a genuinely independent route.
//!
//! On K-classes this gives two checks: the class of `F^*F_*O` agrees with
//! the Bott representative `1 + ω + ⋯ + ω^{p-1}` in rank and degree, and
//! the Adams-Riemann-Roch equality holds in the localization `Z[1/p]`:
//! pushing `O(d)` forward and correcting by the inverse Bott class of `ω`
//! recovers `χ(O(d)) = d + 1` exactly.

use num::One;

use crate::kcore::{condense, condensed_inverse, euler_char, tau_of_omega, CondensedClass, KClass};
use crate::polyring::{rat, Poly, Rational};
use crate::primes::ensure_prime;
use crate::Result;

/// Fiber degree of the dualizing sheaf on the projective line.
pub const OMEGA_DEGREE: i64 = -2;

/// The line bundle `O(d)` on the projective line over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjLineBundle {
    p: u64,
    d: i64,
}

impl ProjLineBundle {
    pub fn new(p: u64, d: i64) -> Result<Self> {
        ensure_prime(p)?;
        Ok(ProjLineBundle { p, d })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn twist(&self) -> i64 {
        self.d
    }

    /// Global sections: the monomials of degree at most `d`.
    pub fn h0(&self) -> i64 {
        (self.d + 1).max(0)
    }

    /// First cohomology, by duality with the twist `-d - 2`.
    pub fn h1(&self) -> i64 {
        (-self.d - 1).max(0)
    }

    pub fn chi(&self) -> i64 {
        self.h0() - self.h1()
    }

    /// Pullback along Frobenius multiplies the twist by `p`, which is the
    /// p-th Adams operation on the class of a line bundle.
    pub fn frobenius_pullback(&self) -> ProjLineBundle {
        ProjLineBundle {
            p: self.p,
            d: self.p as i64 * self.d,
        }
    }
}

/// The twists of the `p` line bundle summands of `F_*O(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusDecomposition {
    summands: Vec<i64>,
}

impl FrobeniusDecomposition {
    pub fn summands(&self) -> &[i64] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// `Σ(e_i + 1)`, the Euler characteristic of the pushforward. A finite
    /// morphism preserves it, so this must equal `d + 1`.
    pub fn chi_sum(&self) -> i64 {
        self.summands.iter().map(|e| e + 1).sum()
    }

    pub fn to_kclass(&self) -> KClass {
        KClass::from_pairs(&self.summands.iter().map(|&e| (e, 1)).collect::<Vec<_>>())
    }
}

impl std::fmt::Display for FrobeniusDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Splitting of `F_*O(d)` on the projective line: `e_i = ⌊(d − i)/p⌋` for
/// `i = 0, …, p-1`.
pub fn frobenius_pushforward(b: &ProjLineBundle) -> FrobeniusDecomposition {
    let p = b.p as i64;
    FrobeniusDecomposition {
        summands: (0..p).map(|i| (b.d - i).div_euclid(p)).collect(),
    }
}

/// Independent oracle for the splitting, valid for `d >= 0`: bucket the
/// monomial sections `t^j`, `0 <= j <= d`, by `j mod p`; a bucket with `k`
/// monomials is the section space of `O(k - 1)`.
pub fn monomial_bucket_decomposition(p: u64, d: i64) -> FrobeniusDecomposition {
    assert!(d >= 0, "bucket oracle needs global sections, so d >= 0");
    let mut counts = vec![0i64; p as usize];
    for j in 0..=d {
        counts[(j % p as i64) as usize] += 1;
    }
    FrobeniusDecomposition {
        summands: counts.into_iter().map(|k| k - 1).collect(),
    }
}

/// Both sides of the rank/degree identity for `F^*F_*O`: the pullback of
/// the pushforward of the trivial bundle, and the Bott representative of
/// `ω`. On the projective line both condense to `(p, -p(p-1))`.
pub fn gr_identity_sides(p: u64) -> Result<(CondensedClass, CondensedClass)> {
    let trivial = ProjLineBundle::new(p, 0)?;
    let push = frobenius_pushforward(&trivial);
    let pulled = KClass::from_pairs(
        &push
            .summands()
            .iter()
            .map(|&e| (p as i64 * e, 1))
            .collect::<Vec<_>>(),
    );
    let tau = tau_of_omega(p, OMEGA_DEGREE)?;
    Ok((condense(&pulled), condense(&tau)))
}

/// True iff the two sides of [`gr_identity_sides`] agree.
pub fn check_gr_identity(p: u64) -> Result<bool> {
    let (lhs, rhs) = gr_identity_sides(p)?;
    Ok(lhs == rhs)
}

/// Both sides of the Adams-Riemann-Roch check for `O(d)` over a point base:
/// the left side is `χ(O(d))`, the right side is the Euler characteristic of
/// `θ^p(ω)⁻¹ · ψ^p(O(d))` computed in the localization `Z[1/p]`.
pub fn arr_sides(p: u64, d: i64) -> Result<(Rational, Rational)> {
    let bundle = ProjLineBundle::new(p, d)?;
    let lhs = rat(bundle.chi());
    let inv = condensed_inverse(&condense(&tau_of_omega(p, OMEGA_DEGREE)?), p)?;
    let pulled = CondensedClass::from_ints(1, p as i64 * d);
    let rhs = euler_char(&inv.mul(&pulled));
    Ok((lhs, rhs))
}

/// True iff both Adams-Riemann-Roch sides equal `d + 1`.
pub fn verify_arr(p: u64, d: i64) -> Result<bool> {
    let (lhs, rhs) = arr_sides(p, d)?;
    Ok(lhs == rhs && lhs == rat(d + 1))
}

/// The right side of the Adams-Riemann-Roch check with the twist kept as the
/// free symbol `d`: the condensed product law applied to `(1/p, (p-1)/p)`
/// and `(1, p·d)`, then rank plus degree. Simplifies to `d + 1`.
pub fn arr_rhs_symbolic(p: u64) -> Result<Poly> {
    let inv = condensed_inverse(&condense(&tau_of_omega(p, OMEGA_DEGREE)?), p)?;
    let r1 = Poly::constant(inv.rank.clone());
    let e1 = Poly::constant(inv.degree.clone());
    let r2 = Poly::constant(Rational::one());
    let e2 = Poly::var("d").scaled(p as i64);
    let rank = &r1 * &r2;
    let degree = &(&r1 * &e2) + &(&r2 * &e1);
    Ok(&rank + &degree)
}
