//! Vector-field calculus on graded polynomial fields.
//!
//! A three-dimensional field is quasi-homogeneous of degree `k` when its x
//! and y components have degree `k + 1` and its z component degree `k + 2`.
//! Planar fields use the weights (1, 1).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coeffring::rational::{int, rat};
use crate::coeffring::{ParamPolynomial, ParamTable, Rational};
use crate::error::{Error, Result};
use crate::gradedpoly::{Monomial3, QHPolynomial, Var};

const VARS: [Var; 3] = [Var::X, Var::Y, Var::Z];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VectorField3 {
    pub fx: QHPolynomial,
    pub fy: QHPolynomial,
    pub fz: QHPolynomial,
}

/// Graded degree of a monomial sitting in component `i` (0, 1, 2).
pub fn component_degree(i: usize, m: &Monomial3) -> i64 {
    m.degree() as i64 - if i == 2 { 2 } else { 1 }
}

impl VectorField3 {
    pub fn new(fx: QHPolynomial, fy: QHPolynomial, fz: QHPolynomial) -> Self {
        VectorField3 { fx, fy, fz }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `(-2y, 2x, x^2 + y^2)`.
    pub fn principal() -> Self {
        VectorField3::new(
            QHPolynomial::mono(0, 1, 0, int(-2)),
            QHPolynomial::mono(1, 0, 0, int(2)),
            QHPolynomial::h(),
        )
    }

    /// `(z^k x, z^k y, 0)`, the direction carrying `a_k`.
    pub fn radial_resonance(k: u32) -> Self {
        VectorField3::new(
            QHPolynomial::mono(1, 0, k, int(1)),
            QHPolynomial::mono(0, 1, k, int(1)),
            QHPolynomial::zero(),
        )
    }

    /// `(0, 0, z^(k+1))`, the direction carrying `b_k`.
    pub fn axial_resonance(k: u32) -> Self {
        VectorField3::new(
            QHPolynomial::zero(),
            QHPolynomial::zero(),
            QHPolynomial::mono(0, 0, k + 1, int(1)),
        )
    }

    pub fn components(&self) -> [&QHPolynomial; 3] {
        [&self.fx, &self.fy, &self.fz]
    }

    pub fn components_mut(&mut self) -> [&mut QHPolynomial; 3] {
        [&mut self.fx, &mut self.fy, &mut self.fz]
    }

    pub fn is_zero(&self) -> bool {
        self.fx.is_zero() && self.fy.is_zero() && self.fz.is_zero()
    }

    /// The quasi-homogeneous component of degree `k` (may be negative).
    pub fn component(&self, k: i64) -> Self {
        let part = |p: &QHPolynomial, shift: i64| {
            let d = k + shift;
            if d < 0 {
                QHPolynomial::zero()
            } else {
                p.homogeneous_part(d as u32)
            }
        };
        VectorField3::new(part(&self.fx, 1), part(&self.fy, 1), part(&self.fz, 2))
    }

    /// All nonzero components keyed by degree.
    pub fn decompose(&self) -> BTreeMap<i64, VectorField3> {
        let mut out: BTreeMap<i64, VectorField3> = BTreeMap::new();
        for (i, p) in self.components().into_iter().enumerate() {
            for (m, c) in p.terms() {
                let d = component_degree(i, m);
                let entry = out.entry(d).or_default();
                entry.components_mut()[i].add_term(*m, c.clone());
            }
        }
        out
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.decompose().keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.components()
            .into_iter()
            .enumerate()
            .filter_map(|(i, p)| p.terms().next_back().map(|(m, _)| component_degree(i, m)))
            .max()
    }

    /// Keeps components of degree at most `max`.
    pub fn truncate(&self, max: i64) -> Self {
        let cut = |p: &QHPolynomial, shift: i64| {
            let d = max + shift;
            if d < 0 {
                QHPolynomial::zero()
            } else {
                p.truncate(d as u32)
            }
        };
        VectorField3::new(cut(&self.fx, 1), cut(&self.fy, 1), cut(&self.fz, 2))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorField3::new(self.fx.scale(c), self.fy.scale(c), self.fz.scale(c))
    }

    pub fn scale_param(&self, c: &ParamPolynomial) -> Self {
        VectorField3::new(
            self.fx.scale_param(c),
            self.fy.scale_param(c),
            self.fz.scale_param(c),
        )
    }

    /// `f * self`, keeping components of degree at most `max`.
    pub fn mul_scalar_truncated(&self, f: &QHPolynomial, max: i64) -> Self {
        let mut out = Self::zero();
        for (i, (dst, src)) in out
            .components_mut()
            .into_iter()
            .zip(self.components())
            .enumerate()
        {
            let cap = max + if i == 2 { 2 } else { 1 };
            if cap >= 0 {
                dst.add_product_truncated(f, src, cap as u32);
            }
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&ParamPolynomial) -> ParamPolynomial) -> Self {
        VectorField3::new(
            self.fx.map_coefficients(&f),
            self.fy.map_coefficients(&f),
            self.fz.map_coefficients(&f),
        )
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.fx += &other.fx;
        self.fy += &other.fy;
        self.fz += &other.fz;
    }

    pub fn sub_assign(&mut self, other: &Self) {
        self.fx -= &other.fx;
        self.fy -= &other.fy;
        self.fz -= &other.fz;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    /// The field in coordinates `(X, Y, Z, T) = (lx, ly, l^2 z, t / s)`.
    pub fn scaling_conjugate(&self, l: &Rational, s: &Rational) -> Self {
        let il = l.recip();
        let il2 = &il * &il;
        let back = |p: &QHPolynomial| p.rescale_variables(&il, &il, &il2);
        VectorField3::new(
            back(&self.fx).scale(&(s * l)),
            back(&self.fy).scale(&(s * l)),
            back(&self.fz).scale(&(s * l * l)),
        )
    }

    pub fn to_text(&self, table: &ParamTable) -> [String; 3] {
        [
            self.fx.to_text(table),
            self.fy.to_text(table),
            self.fz.to_text(table),
        ]
    }
}

/// `d fx/dx + d fy/dy + d fz/dz`.
pub fn divergence(f: &VectorField3) -> QHPolynomial {
    let mut d = f.fx.partial(Var::X);
    d += &f.fy.partial(Var::Y);
    d += &f.fz.partial(Var::Z);
    d
}

/// `grad(f) . F`.
pub fn directional_derivative(f: &QHPolynomial, field: &VectorField3) -> QHPolynomial {
    let mut out = QHPolynomial::zero();
    for (v, c) in VARS.iter().zip(field.components()) {
        out += &(&f.partial(*v) * c);
    }
    out
}

/// `grad(f) . F`, keeping terms of degree at most `max`.
pub fn directional_derivative_truncated(
    f: &QHPolynomial,
    field: &VectorField3,
    max: u32,
) -> QHPolynomial {
    let mut out = QHPolynomial::zero();
    for (v, c) in VARS.iter().zip(field.components()) {
        out.add_product_truncated(&f.partial(*v), c, max);
    }
    out
}

/// `[F, G] = DG.F - DF.G`.
pub fn lie_bracket(f: &VectorField3, g: &VectorField3) -> VectorField3 {
    let comp = |gi: &QHPolynomial, fi: &QHPolynomial| {
        directional_derivative(gi, f) - directional_derivative(fi, g)
    };
    VectorField3::new(comp(&g.fx, &f.fx), comp(&g.fy, &f.fy), comp(&g.fz, &f.fz))
}

/// `[F, G]` keeping components of degree at most `max`.
pub fn lie_bracket_truncated(f: &VectorField3, g: &VectorField3, max: i64) -> VectorField3 {
    let mut out = VectorField3::zero();
    let fc = f.components();
    let gc = g.components();
    for (i, dst) in out.components_mut().into_iter().enumerate() {
        let cap = max + if i == 2 { 2 } else { 1 };
        if cap < 0 {
            continue;
        }
        let cap = cap as u32;
        *dst = directional_derivative_truncated(gc[i], f, cap);
        *dst -= &directional_derivative_truncated(fc[i], g, cap);
    }
    out
}

/// Polynomial in two variables with weights (1, 1); stored with `ez = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlanarPolynomial(pub QHPolynomial);

impl PlanarPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn mono(e1: u32, e2: u32, c: ParamPolynomial) -> Self {
        PlanarPolynomial(QHPolynomial::term(Monomial3::new(e1, e2, 0), c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn d1(&self) -> Self {
        PlanarPolynomial(self.0.partial(Var::X))
    }

    pub fn d2(&self) -> Self {
        PlanarPolynomial(self.0.partial(Var::Y))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PlanarPolynomial(self.0.scale(c))
    }

    /// Text form using the given variable names.
    pub fn to_text(&self, names: (&str, &str), table: &ParamTable) -> String {
        self.0.to_text_named(table, [names.0, names.1, "z"])
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlanarVectorField {
    pub pu: PlanarPolynomial,
    pub pv: PlanarPolynomial,
}

impl PlanarVectorField {
    pub fn new(pu: PlanarPolynomial, pv: PlanarPolynomial) -> Self {
        PlanarVectorField { pu, pv }
    }

    /// The radial field `D0 = (x, y)`.
    pub fn radial() -> Self {
        let one = ParamPolynomial::one();
        PlanarVectorField::new(
            PlanarPolynomial::mono(1, 0, one.clone()),
            PlanarPolynomial::mono(0, 1, one),
        )
    }

    /// `X_h = (-dh/dy, dh/dx)`.
    pub fn hamiltonian(h: &PlanarPolynomial) -> Self {
        PlanarVectorField::new(PlanarPolynomial(-&h.d2().0), h.d1())
    }

    pub fn add(&self, o: &Self) -> Self {
        PlanarVectorField::new(
            PlanarPolynomial(&self.pu.0 + &o.pu.0),
            PlanarPolynomial(&self.pv.0 + &o.pv.0),
        )
    }

    pub fn scale_by(&self, f: &PlanarPolynomial) -> Self {
        PlanarVectorField::new(
            PlanarPolynomial(&self.pu.0 * &f.0),
            PlanarPolynomial(&self.pv.0 * &f.0),
        )
    }
}

/// `F ^ G = P S - Q R` for `F = (P, Q)`, `G = (R, S)`.
pub fn wedge2(f: &PlanarVectorField, g: &PlanarVectorField) -> PlanarPolynomial {
    PlanarPolynomial(&(&f.pu.0 * &g.pv.0) - &(&f.pv.0 * &g.pu.0))
}

pub fn divergence2(f: &PlanarVectorField) -> PlanarPolynomial {
    PlanarPolynomial(&f.pu.d1().0 + &f.pv.d2().0)
}

/// Conservative-dissipative splitting `P_k = X_hamiltonian + radial_factor * D0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConDisSplit {
    pub hamiltonian: PlanarPolynomial,
    pub radial_factor: PlanarPolynomial,
}

impl ConDisSplit {
    pub fn reconstruct(&self) -> PlanarVectorField {
        PlanarVectorField::hamiltonian(&self.hamiltonian)
            .add(&PlanarVectorField::radial().scale_by(&self.radial_factor))
    }
}

/// Splits a planar field of degree `k` (components of degree `k + 1`).
pub fn condis_split(pk: &PlanarVectorField, k: u32) -> Result<ConDisSplit> {
    for p in [&pk.pu, &pk.pv] {
        if let Some(m) = p.0.offending_monomial(k + 1) {
            return Err(Error::NotQuasiHomogeneous {
                expected: k as i64 + 1,
                monomial: m.to_text(),
            });
        }
    }
    let inv = rat(1, k as i64 + 2);
    Ok(ConDisSplit {
        hamiltonian: wedge2(&PlanarVectorField::radial(), pk).scale(&inv),
        radial_factor: divergence2(pk).scale(&inv),
    })
}

/// Whether every coefficient of the field is a rational constant.
pub fn is_parameter_free(f: &VectorField3) -> bool {
    f.components()
        .into_iter()
        .all(|p| p.terms().all(|(_, c)| c.is_constant()))
}

/// Coefficient of `m` in component `i`, as a rational when parameter-free.
pub fn rational_coefficient(p: &QHPolynomial, m: &Monomial3) -> Option<Rational> {
    let c = p.coefficient(m);
    if c.is_zero() {
        Some(Rational::zero())
    } else {
        c.as_constant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> QHPolynomial {
        QHPolynomial::var(Var::X)
    }
    fn y() -> QHPolynomial {
        QHPolynomial::var(Var::Y)
    }
    fn z() -> QHPolynomial {
        QHPolynomial::var(Var::Z)
    }
    fn p(i: usize) -> ParamPolynomial {
        ParamPolynomial::var(i)
    }

    #[test]
    fn divergence_examples() {
        assert!(divergence(&VectorField3::principal()).is_zero());
        let e = VectorField3::new(x(), y(), z());
        assert_eq!(divergence(&e), QHPolynomial::mono(0, 0, 0, int(3)));
    }

    #[test]
    fn divergence_of_normal_form_term() {
        // (a z^k x, a z^k y, b z^(k+1)) has divergence (2a + (k+1) b) z^k
        for k in 1..5u32 {
            let (a, b) = (p(0), p(1));
            let g = VectorField3::radial_resonance(k)
                .scale_param(&a)
                .add(&VectorField3::axial_resonance(k).scale_param(&b));
            let coeff = &a.scale(&int(2)) + &b.scale(&int(k as i64 + 1));
            assert_eq!(
                divergence(&g),
                QHPolynomial::term(Monomial3::new(0, 0, k), coeff)
            );
        }
    }

    #[test]
    fn directional_derivative_examples() {
        let f0 = VectorField3::principal();
        assert!(directional_derivative(&QHPolynomial::h(), &f0).is_zero());
        assert_eq!(directional_derivative(&z(), &f0), QHPolynomial::h());
        assert_eq!(directional_derivative(&x(), &f0), y().scale(&int(-2)));
    }

    #[test]
    fn bracket_examples() {
        let f0 = VectorField3::principal();
        assert!(lie_bracket(&f0, &f0).is_zero());
        let euler = VectorField3::new(x(), y(), z().scale(&int(2)));
        assert!(lie_bracket(&euler, &f0).is_zero());
        let g = VectorField3::new(QHPolynomial::zero(), QHPolynomial::zero(), z());
        let br = lie_bracket(&f0, &g);
        assert_eq!(
            br,
            VectorField3::new(QHPolynomial::zero(), QHPolynomial::zero(), QHPolynomial::h())
        );
    }

    #[test]
    fn bracket_truncation_matches_full() {
        let f = VectorField3::new(&x() + &(&y() * &z()), x().pow(2), &z() + &x().pow(3));
        let g = VectorField3::new(z(), &y() + &x().pow(2), &x() * &z());
        let full = lie_bracket(&f, &g);
        for max in -1..6 {
            assert_eq!(lie_bracket_truncated(&f, &g, max), full.truncate(max));
        }
    }

    #[test]
    fn component_grading() {
        let f = VectorField3::principal().add(&VectorField3::new(
            z(),
            x().pow(2),
            y().pow(3),
        ));
        let d = f.decompose();
        assert_eq!(d.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(d[&0], VectorField3::principal());
        assert_eq!(f.component(1), d[&1]);
        assert_eq!(f.min_degree(), Some(0));
        assert_eq!(f.max_degree(), Some(1));
    }

    fn planar(pu: QHPolynomial, pv: QHPolynomial) -> PlanarVectorField {
        PlanarVectorField::new(PlanarPolynomial(pu), PlanarPolynomial(pv))
    }

    #[test]
    fn wedge_examples() {
        let d0 = PlanarVectorField::radial();
        assert!(wedge2(&d0, &d0).is_zero());
        let xh = planar(y().scale(&int(-2)), x().scale(&int(2)));
        assert_eq!(wedge2(&d0, &xh).0, QHPolynomial::h().scale(&int(2)));
        let e1 = planar(QHPolynomial::one(), QHPolynomial::zero());
        let e2 = planar(QHPolynomial::zero(), QHPolynomial::one());
        assert_eq!(wedge2(&e1, &e2).0, QHPolynomial::one());
    }

    #[test]
    fn split_examples() {
        let d0 = PlanarVectorField::radial();
        let s = condis_split(&d0, 0).unwrap();
        assert!(s.hamiltonian.is_zero());
        assert_eq!(s.radial_factor.0, QHPolynomial::one());

        let xh = planar(y().scale(&int(-2)), x().scale(&int(2)));
        let s = condis_split(&xh, 0).unwrap();
        assert_eq!(s.hamiltonian.0, QHPolynomial::h());
        assert!(s.radial_factor.is_zero());

        let hyp = planar(x(), y().scale(&int(-1)));
        let s = condis_split(&hyp, 0).unwrap();
        assert_eq!(s.hamiltonian.0, (&x() * &y()).scale(&int(-1)));
        assert!(s.radial_factor.is_zero());
        assert_eq!(s.reconstruct(), hyp);
    }

    #[test]
    fn split_rejects_mixed_degrees() {
        let bad = planar(&x() + &x().pow(2), QHPolynomial::zero());
        match condis_split(&bad, 0) {
            Err(Error::NotQuasiHomogeneous { monomial, .. }) => assert_eq!(monomial, "x^2"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
