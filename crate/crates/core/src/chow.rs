//! Symbolic degree calculus for a family of curves over a one-dimensional
//! base.
//!
//! Divisor classes live in the rank-2 lattice spanned by a line bundle class
//! `L` and the relative dualizing class `ω`. Their intersection numbers stay
//! symbolic: the pairing lands in polynomials over the three symbols `LL`,
//! `Lw`, `ww`. On top of that sits the degree model for the determinant of
//! cohomology,
//!
//! ```text
//!     D(M) = ½·M·(M − ω) + λ
//! ```
//!
//! with `λ = deg det Rf_*O` a free symbol. `D` is the unique quadratic
//! satisfying `D(A+B) − D(A) − D(B) + D(O) = A·B` together with the Serre
//! symmetry `D(M) = D(ω − M)`, and the Deligne pairing degree is the
//! intersection symbol itself. Mumford's isomorphism pins `λ` to `ww/12`;
//! that substitution is applied only on request, never silently.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::polyring::{ratio, Poly, Symbol};

pub const SYM_LL: &str = "LL";
pub const SYM_LW: &str = "Lw";
pub const SYM_WW: &str = "ww";
pub const SYM_LAMBDA: &str = "lam";

/// An integer combination `a·L + b·ω` of the two generating classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DivisorClass {
    pub l: i64,
    pub w: i64,
}

impl DivisorClass {
    pub const ZERO: DivisorClass = DivisorClass { l: 0, w: 0 };
    pub const L: DivisorClass = DivisorClass { l: 1, w: 0 };
    pub const OMEGA: DivisorClass = DivisorClass { l: 0, w: 1 };

    pub fn new(l: i64, w: i64) -> Self {
        DivisorClass { l, w }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.l + rhs.l, self.w + rhs.w)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.l - rhs.l, self.w - rhs.w)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(-self.l, -self.w)
    }
}

impl Mul<i64> for DivisorClass {
    type Output = DivisorClass;
    fn mul(self, k: i64) -> DivisorClass {
        DivisorClass::new(self.l * k, self.w * k)
    }
}

fn write_single(f: &mut fmt::Formatter<'_>, coeff: i64, name: &str) -> fmt::Result {
    match coeff {
        1 => write!(f, "{name}"),
        -1 => write!(f, "-{name}"),
        c => write!(f, "{c}*{name}"),
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.l, self.w) {
            (0, 0) => write!(f, "O"),
            (l, 0) => write_single(f, l, "L"),
            (0, w) => write_single(f, w, "w"),
            (l, w) => {
                write_single(f, l, "L")?;
                if w < 0 {
                    write!(f, " - ")?;
                    write_single(f, -w, "w")
                } else {
                    write!(f, " + ")?;
                    write_single(f, w, "w")
                }
            }
        }
    }
}

/// The symmetric bilinear pairing on divisor classes, valued in polynomials
/// over the intersection symbols.
#[derive(Debug, Clone)]
pub struct IntersectionForm {
    ll: Poly,
    lw: Poly,
    ww: Poly,
}

impl IntersectionForm {
    pub fn new() -> Self {
        IntersectionForm {
            ll: Poly::var(SYM_LL),
            lw: Poly::var(SYM_LW),
            ww: Poly::var(SYM_WW),
        }
    }

    /// `pair(aL + bω, cL + dω) = ac·LL + (ad + bc)·Lw + bd·ww`.
    pub fn pair(&self, a: DivisorClass, b: DivisorClass) -> Poly {
        Poly::sum([
            self.ll.scaled(a.l * b.l),
            self.lw.scaled(a.l * b.w + a.w * b.l),
            self.ww.scaled(a.w * b.w),
        ])
    }

    pub fn ww(&self) -> &Poly {
        &self.ww
    }
}

impl Default for IntersectionForm {
    fn default() -> Self {
        IntersectionForm::new()
    }
}

/// A line together with an integer grading, at the numerical level: tensor
/// adds degrees and gradings, dual negates both, and swapping two factors
/// costs the sign `(-1)^(grading·grading')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLine {
    pub degree: Poly,
    pub grading: i64,
}

impl GradedLine {
    pub fn new(degree: Poly, grading: i64) -> Self {
        GradedLine { degree, grading }
    }

    /// The unit object: degree 0, grading 0.
    pub fn unit() -> Self {
        GradedLine::new(Poly::zero(), 0)
    }

    pub fn tensor(&self, other: &GradedLine) -> GradedLine {
        GradedLine::new(&self.degree + &other.degree, self.grading + other.grading)
    }

    pub fn dual(&self) -> GradedLine {
        GradedLine::new(-&self.degree, -self.grading)
    }

    /// Sign picked up when the two factors are swapped.
    pub fn swap_sign(&self, other: &GradedLine) -> i64 {
        if (self.grading * other.grading) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// A formal integer combination of divisor classes, used for rank-zero
/// differences like `L - O`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VirtualCombo {
    terms: BTreeMap<DivisorClass, i64>,
}

impl VirtualCombo {
    pub fn zero() -> Self {
        VirtualCombo::default()
    }

    pub fn from_pairs(pairs: &[(DivisorClass, i64)]) -> Self {
        let mut v = VirtualCombo::zero();
        for &(c, m) in pairs {
            v.add_term(c, m);
        }
        v
    }

    pub fn add_term(&mut self, class: DivisorClass, mult: i64) {
        if mult == 0 {
            return;
        }
        let entry = self.terms.entry(class).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.terms.remove(&class);
        }
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (DivisorClass, i64)> + '_ {
        self.terms.iter().map(|(&c, &m)| (c, m))
    }
}

/// The degree model: intersection symbols plus the free symbol `λ`.
#[derive(Debug, Clone)]
pub struct ChowModel {
    form: IntersectionForm,
    lambda: Poly,
}

impl ChowModel {
    pub fn new() -> Self {
        ChowModel {
            form: IntersectionForm::new(),
            lambda: Poly::var(SYM_LAMBDA),
        }
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.form
    }

    pub fn lambda(&self) -> &Poly {
        &self.lambda
    }

    /// Degree of `det Rf_*M`: `½·M·(M − ω) + λ`.
    pub fn det_degree(&self, m: DivisorClass) -> Poly {
        let quad = self.form.pair(m, m - DivisorClass::OMEGA);
        &quad.scaled_rat(&ratio(1, 2)) + &self.lambda
    }

    /// Degree of the Deligne pairing `⟨A, B⟩`: the intersection symbol.
    pub fn pairing_degree(&self, a: DivisorClass, b: DivisorClass) -> Poly {
        self.form.pair(a, b)
    }

    /// Additive extension of `det_degree` to formal combinations.
    pub fn virtual_det_degree(&self, v: &VirtualCombo) -> Poly {
        Poly::sum(v.terms().map(|(c, m)| self.det_degree(c).scaled(m)))
    }

    /// Degree of `det Rf_*((H0 - H1)^⊗3 ⊗ H)`, expanded into its eight
    /// signed summands. Identically zero: the triple tensor of a rank-zero
    /// difference has trivial determinant of cohomology.
    pub fn cube_triviality(
        &self,
        h0: DivisorClass,
        h1: DivisorClass,
        h: DivisorClass,
    ) -> Poly {
        let mut combo = VirtualCombo::zero();
        for pick in 0u32..8 {
            let mut class = h;
            let mut sign = 1i64;
            for bit in 0..3 {
                if pick & (1 << bit) == 0 {
                    class = class + h0;
                } else {
                    class = class + h1;
                    sign = -sign;
                }
            }
            combo.add_term(class, sign);
        }
        self.virtual_det_degree(&combo)
    }

    /// Impose Mumford's isomorphism at degree level: substitute `λ ↦ ww/12`.
    pub fn assume_mumford(&self, p: &Poly) -> Poly {
        let mut bindings = BTreeMap::new();
        bindings.insert(
            Symbol::new(SYM_LAMBDA),
            Poly::var(SYM_WW).scaled_rat(&ratio(1, 12)),
        );
        // the binding is acyclic by construction
        p.substitute(&bindings).expect("lambda binding is acyclic")
    }
}

impl Default for ChowModel {
    fn default() -> Self {
        ChowModel::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> ChowModel {
        ChowModel::new()
    }

    #[test]
    fn det_degree_of_trivial_and_dualizing_class() {
        let m = model();
        assert_eq!(m.det_degree(DivisorClass::ZERO), Poly::var(SYM_LAMBDA));
        // the quadratic part of D(w) vanishes, mirroring det Rf_*O = det Rf_*w
        assert_eq!(m.det_degree(DivisorClass::OMEGA), Poly::var(SYM_LAMBDA));
    }

    #[test]
    fn det_degree_of_l2w() {
        let m = model();
        let c = DivisorClass::new(2, 1);
        let expected = Poly::sum([
            Poly::var(SYM_LL).scaled(2),
            Poly::var(SYM_LW),
            Poly::var(SYM_LAMBDA),
        ]);
        assert_eq!(m.det_degree(c), expected);
    }

    #[test]
    fn pairing_examples() {
        let m = model();
        assert!(m
            .pairing_degree(DivisorClass::ZERO, DivisorClass::new(3, -2))
            .is_zero());
        assert_eq!(
            m.pairing_degree(DivisorClass::L, DivisorClass::L - DivisorClass::OMEGA),
            &Poly::var(SYM_LL) - &Poly::var(SYM_LW)
        );
        assert_eq!(
            m.pairing_degree(DivisorClass::OMEGA, DivisorClass::OMEGA),
            Poly::var(SYM_WW)
        );
    }

    #[test]
    fn pairing_is_symmetric_and_biadditive() {
        let m = model();
        let classes = [
            DivisorClass::new(0, 0),
            DivisorClass::new(1, 0),
            DivisorClass::new(0, 1),
            DivisorClass::new(2, -3),
            DivisorClass::new(-1, 4),
        ];
        for &a in &classes {
            for &b in &classes {
                assert_eq!(m.pairing_degree(a, b), m.pairing_degree(b, a));
                for &c in &classes {
                    assert_eq!(
                        m.pairing_degree(a + b, c),
                        &m.pairing_degree(a, c) + &m.pairing_degree(b, c)
                    );
                }
            }
        }
    }

    #[test]
    fn det_degree_pairing_recursion() {
        let m = model();
        for al in -5..=5 {
            let a = DivisorClass::new(al, (al * 3) % 5 - 2);
            let b = DivisorClass::new(-al + 1, al % 3);
            let lhs = Poly::sum([
                m.det_degree(a + b),
                m.det_degree(a).scaled(-1),
                m.det_degree(b).scaled(-1),
                m.det_degree(DivisorClass::ZERO),
            ]);
            assert_eq!(lhs, m.pairing_degree(a, b));
        }
    }

    #[test]
    fn serre_symmetry() {
        let m = model();
        for l in -5..=5 {
            for w in -5..=5 {
                let c = DivisorClass::new(l, w);
                assert_eq!(m.det_degree(c), m.det_degree(DivisorClass::OMEGA - c));
            }
        }
    }

    #[test]
    fn virtual_det_degree_examples() {
        let m = model();
        let v = VirtualCombo::from_pairs(&[
            (DivisorClass::L, 1),
            (DivisorClass::ZERO, -1),
        ]);
        let expected =
            (&Poly::var(SYM_LL) - &Poly::var(SYM_LW)).scaled_rat(&ratio(1, 2));
        assert_eq!(m.virtual_det_degree(&v), expected);
        assert!(m.virtual_det_degree(&VirtualCombo::zero()).is_zero());
        // twice D(L) - D(O) is the pairing <L, L - w>
        assert_eq!(
            m.virtual_det_degree(&v).scaled(2),
            m.pairing_degree(DivisorClass::L, DivisorClass::L - DivisorClass::OMEGA)
        );
    }

    #[test]
    fn cube_triviality_examples() {
        let m = model();
        assert!(m
            .cube_triviality(DivisorClass::L, DivisorClass::ZERO, DivisorClass::ZERO)
            .is_zero());
        assert!(m
            .cube_triviality(DivisorClass::OMEGA, DivisorClass::L, DivisorClass::L)
            .is_zero());
        let x = DivisorClass::new(2, -1);
        assert!(m
            .cube_triviality(x, x, DivisorClass::new(1, 3))
            .is_zero());
    }

    #[test]
    fn graded_tensor_and_dual() {
        let a = GradedLine::new(Poly::var(SYM_LAMBDA), 1);
        assert_eq!(a.tensor(&GradedLine::unit()), a);
        let b = GradedLine::new(Poly::var("x"), 2);
        let c = GradedLine::new(Poly::var("y"), 3);
        assert_eq!(
            b.tensor(&c),
            GradedLine::new(&Poly::var("x") + &Poly::var("y"), 5)
        );
        assert_eq!(b.tensor(&c), c.tensor(&b));
        assert_eq!(b.tensor(&b.dual()), GradedLine::unit());
    }

    #[test]
    fn swap_sign_parity() {
        let even = GradedLine::new(Poly::zero(), 2);
        let odd = GradedLine::new(Poly::zero(), 3);
        assert_eq!(even.swap_sign(&odd), 1);
        assert_eq!(odd.swap_sign(&odd), -1);
        assert_eq!(even.swap_sign(&even), 1);
    }

    #[test]
    fn mumford_substitution() {
        let m = model();
        let out = m.assume_mumford(&Poly::var(SYM_LAMBDA).scaled(12));
        assert_eq!(out, Poly::var(SYM_WW));
    }

    #[test]
    fn divisor_class_rendering() {
        assert_eq!(DivisorClass::ZERO.to_string(), "O");
        assert_eq!(DivisorClass::L.to_string(), "L");
        assert_eq!(DivisorClass::new(2, 1).to_string(), "2*L + w");
        assert_eq!(DivisorClass::new(0, -2).to_string(), "-2*w");
        assert_eq!(DivisorClass::new(1, -1).to_string(), "L - w");
    }
}
