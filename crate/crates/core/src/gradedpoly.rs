//! Sparse polynomials in x, y, z graded by the weights (1, 1, 2).

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use crate::coeffring::rational::format_rational;
use crate::coeffring::{ParamPolynomial, ParamTable, Rational};
use crate::error::{Error, Result};

/// Weight of z; x and y have weight one.
pub const Z_WEIGHT: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub fn weight(self) -> u32 {
        match self {
            Var::X | Var::Y => 1,
            Var::Z => Z_WEIGHT,
        }
    }
}

/// `x^ex * y^ey * z^ez`.
///
/// Ordered by quasi-homogeneous degree, then ascending `ez`, then
/// descending `ex`; within one degree this is the slice basis order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial3 {
    pub ex: u32,
    pub ey: u32,
    pub ez: u32,
}

impl Monomial3 {
    pub const ONE: Monomial3 = Monomial3 { ex: 0, ey: 0, ez: 0 };

    pub const fn new(ex: u32, ey: u32, ez: u32) -> Self {
        Monomial3 { ex, ey, ez }
    }

    pub fn degree(&self) -> u32 {
        self.ex + self.ey + Z_WEIGHT * self.ez
    }

    fn key(&self) -> (u32, u32, Reverse<u32>) {
        (self.degree(), self.ez, Reverse(self.ex))
    }

    /// Smallest monomial of the given degree in the ordering.
    fn first_of_degree(k: u32) -> Self {
        Monomial3::new(k, 0, 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial3::new(self.ex + o.ex, self.ey + o.ey, self.ez + o.ez)
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match v {
            Var::X => self.ex,
            Var::Y => self.ey,
            Var::Z => self.ez,
        }
    }

    fn lowered(&self, v: Var) -> Self {
        let mut m = *self;
        match v {
            Var::X => m.ex -= 1,
            Var::Y => m.ey -= 1,
            Var::Z => m.ez -= 1,
        }
        m
    }

    pub fn to_text(&self) -> String {
        self.to_text_named(["x", "y", "z"])
    }

    pub fn to_text_named(&self, names: [&str; 3]) -> String {
        let mut f = Vec::new();
        for (name, e) in names.into_iter().zip([self.ex, self.ey, self.ez]) {
            match e {
                0 => {}
                1 => f.push(name.to_string()),
                _ => f.push(format!("{name}^{e}")),
            }
        }
        if f.is_empty() {
            "1".to_string()
        } else {
            f.join("*")
        }
    }
}

impl Ord for Monomial3 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered monomial basis of the degree-`k` slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSliceBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial3>,
}

impl GradedSliceBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &Monomial3) -> Option<usize> {
        self.monomials.binary_search(m).ok()
    }
}

/// Monomials of quasi-homogeneous degree `k`, ascending in `ez`, then
/// descending in `ex`.
pub fn slice_basis(k: i64) -> Result<GradedSliceBasis> {
    if k < 0 {
        return Err(Error::NegativeDegree(k));
    }
    let k = k as u32;
    let mut monomials = Vec::new();
    for ez in 0..=k / Z_WEIGHT {
        let rest = k - Z_WEIGHT * ez;
        for ex in (0..=rest).rev() {
            monomials.push(Monomial3::new(ex, rest - ex, ez));
        }
    }
    Ok(GradedSliceBasis {
        degree: k,
        monomials,
    })
}

/// `sum_{l=0}^{floor(k/2)} (k - 2l + 1)`
pub fn slice_dimension(k: u32) -> usize {
    (0..=k / 2).map(|l| (k - 2 * l + 1) as usize).sum()
}

/// Polynomial in x, y, z with parameter-polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QHPolynomial {
    terms: BTreeMap<Monomial3, ParamPolynomial>,
}

impl QHPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ParamPolynomial::one())
    }

    pub fn constant(c: ParamPolynomial) -> Self {
        Self::term(Monomial3::ONE, c)
    }

    pub fn term(m: Monomial3, c: ParamPolynomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        QHPolynomial { terms }
    }

    /// Monomial with a rational coefficient.
    pub fn mono(ex: u32, ey: u32, ez: u32, c: Rational) -> Self {
        Self::term(Monomial3::new(ex, ey, ez), ParamPolynomial::constant(c))
    }

    pub fn var(v: Var) -> Self {
        let m = match v {
            Var::X => Monomial3::new(1, 0, 0),
            Var::Y => Monomial3::new(0, 1, 0),
            Var::Z => Monomial3::new(0, 0, 1),
        };
        Self::term(m, ParamPolynomial::one())
    }

    /// The Hamiltonian `x^2 + y^2` of the rotation.
    pub fn h() -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial3::new(2, 0, 0), ParamPolynomial::one());
        p.add_term(Monomial3::new(0, 2, 0), ParamPolynomial::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial3, &ParamPolynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial3) -> ParamPolynomial {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial3, c: ParamPolynomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, m: Monomial3, c: &ParamPolynomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += a * b * c` for monomial `m = a_m * b_m`.
    fn add_product_term(&mut self, m: Monomial3, a: &ParamPolynomial, b: &ParamPolynomial) {
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                let p = a * b;
                if !p.is_zero() {
                    v.insert(p);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_product(a, b);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial3::degree)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial3::degree)
    }

    /// True when every term has degree `k` (the zero polynomial qualifies).
    pub fn is_quasi_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    /// First term whose degree differs from `k`.
    pub fn offending_monomial(&self, k: u32) -> Option<Monomial3> {
        self.terms.keys().find(|m| m.degree() != k).copied()
    }

    /// The degree-`k` slice.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        QHPolynomial {
            terms: self
                .terms
                .range(Monomial3::first_of_degree(k)..Monomial3::first_of_degree(k + 1))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Drops every term of degree above `max`.
    pub fn truncate(&self, max: u32) -> Self {
        QHPolynomial {
            terms: self
                .terms
                .range(..Monomial3::first_of_degree(max + 1))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Partition of the terms by quasi-homogeneous degree.
    pub fn decompose(&self) -> BTreeMap<u32, QHPolynomial> {
        let mut out: BTreeMap<u32, QHPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_default()
                .terms
                .insert(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QHPolynomial {
            terms: self.terms.iter().map(|(m, p)| (*m, p.scale(c))).collect(),
        }
    }

    pub fn scale_param(&self, c: &ParamPolynomial) -> Self {
        let mut out = Self::zero();
        for (m, p) in &self.terms {
            out.add_term(*m, p * c);
        }
        out
    }

    /// `self += other * c`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, p) in &other.terms {
            self.add_term(*m, p.scale(c));
        }
    }

    /// Product keeping only terms of degree at most `max`.
    pub fn mul_truncated(&self, other: &Self, max: u32) -> Self {
        let mut out = Self::zero();
        out.add_product_truncated(self, other, max);
        out
    }

    /// `self += a * b`, discarding terms above degree `max`.
    pub fn add_product_truncated(&mut self, a: &Self, b: &Self, max: u32) {
        for (ma, ca) in &a.terms {
            let da = ma.degree();
            if da > max {
                break;
            }
            for (mb, cb) in &b.terms {
                if da + mb.degree() > max {
                    break;
                }
                self.add_product_term(ma.mul(mb), ca, cb);
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative; maps degree `k` to `k - weight(v)`.
    pub fn partial(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(m.lowered(v), c.scale(&Rational::from_integer(e.into())));
            }
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&ParamPolynomial) -> ParamPolynomial) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Multiplies each monomial by `sx^ex sy^ey sz^ez`.
    pub fn rescale_variables(&self, sx: &Rational, sy: &Rational, sz: &Rational) -> Self {
        use crate::coeffring::rational::pow;
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let f = pow(sx, m.ex) * pow(sy, m.ey) * pow(sz, m.ez);
            out.add_term(*m, c.scale(&f));
        }
        out
    }

    /// Human-readable form, e.g. `-2*y + a*x*z`.
    pub fn to_text(&self, table: &ParamTable) -> String {
        self.to_text_named(table, ["x", "y", "z"])
    }

    pub fn to_text_named(&self, table: &ParamTable, names: [&str; 3]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = m.to_text_named(names);
            let (neg, body) = if c.len() == 1 {
                let (pm, r) = c.terms().next().unwrap();
                let a = r.abs();
                let mut factors = Vec::new();
                if !a.is_one() || (pm.is_one() && m == &Monomial3::ONE) {
                    factors.push(format_rational(&a));
                }
                if !pm.is_one() {
                    factors.push(ParamPolynomial::monomial(pm.clone(), Rational::one()).to_canonical_string(table));
                }
                if m != &Monomial3::ONE {
                    factors.push(mono);
                }
                (r.is_negative(), factors.join("*"))
            } else {
                let coeff = format!("({})", c.to_canonical_string(table));
                if m == &Monomial3::ONE {
                    (false, coeff)
                } else {
                    (false, format!("{coeff}*{mono}"))
                }
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            s.push_str(&body);
        }
        s
    }
}

/// Parameter-polynomial coefficients of `f` in slice order, for `f` of
/// degree `basis.degree`.
pub fn coordinates(f: &QHPolynomial, basis: &GradedSliceBasis) -> Vec<ParamPolynomial> {
    basis.monomials.iter().map(|m| f.coefficient(m)).collect()
}

pub fn from_coordinates(coords: &[ParamPolynomial], basis: &GradedSliceBasis) -> QHPolynomial {
    let mut out = QHPolynomial::zero();
    for (m, c) in basis.monomials.iter().zip(coords) {
        out.add_term(*m, c.clone());
    }
    out
}

impl Add for &QHPolynomial {
    type Output = QHPolynomial;
    fn add(self, rhs: &QHPolynomial) -> QHPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QHPolynomial {
    type Output = QHPolynomial;
    fn sub(self, rhs: &QHPolynomial) -> QHPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &QHPolynomial {
    type Output = QHPolynomial;
    fn mul(self, rhs: &QHPolynomial) -> QHPolynomial {
        let mut out = QHPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_product_term(ma.mul(mb), ca, cb);
            }
        }
        out
    }
}

impl Neg for &QHPolynomial {
    type Output = QHPolynomial;
    fn neg(self) -> QHPolynomial {
        QHPolynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl AddAssign<&QHPolynomial> for QHPolynomial {
    fn add_assign(&mut self, rhs: &QHPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term_ref(*m, c);
        }
    }
}

impl SubAssign<&QHPolynomial> for QHPolynomial {
    fn sub_assign(&mut self, rhs: &QHPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl Add for QHPolynomial {
    type Output = QHPolynomial;
    fn add(mut self, rhs: QHPolynomial) -> QHPolynomial {
        self += &rhs;
        self
    }
}

impl Sub for QHPolynomial {
    type Output = QHPolynomial;
    fn sub(mut self, rhs: QHPolynomial) -> QHPolynomial {
        self -= &rhs;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rational::int;

    fn x() -> QHPolynomial {
        QHPolynomial::var(Var::X)
    }
    fn y() -> QHPolynomial {
        QHPolynomial::var(Var::Y)
    }
    fn z() -> QHPolynomial {
        QHPolynomial::var(Var::Z)
    }

    #[test]
    fn small_slices() {
        let b0 = slice_basis(0).unwrap();
        assert_eq!(b0.monomials, vec![Monomial3::ONE]);
        let b1 = slice_basis(1).unwrap();
        assert_eq!(
            b1.monomials,
            vec![Monomial3::new(1, 0, 0), Monomial3::new(0, 1, 0)]
        );
        let b2 = slice_basis(2).unwrap();
        assert_eq!(
            b2.monomials,
            vec![
                Monomial3::new(2, 0, 0),
                Monomial3::new(1, 1, 0),
                Monomial3::new(0, 2, 0),
                Monomial3::new(0, 0, 1)
            ]
        );
        assert!(matches!(slice_basis(-1), Err(Error::NegativeDegree(-1))));
    }

    #[test]
    fn slice_basis_is_sorted_in_monomial_order() {
        for k in 0..12 {
            let b = slice_basis(k).unwrap();
            assert!(b.monomials.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(b.len(), slice_dimension(k as u32));
        }
    }

    #[test]
    fn decompose_examples() {
        let f = &QHPolynomial::h() + &z();
        let d = f.decompose();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&2], f);

        let g = &x() + &x().pow(3);
        let d = g.decompose();
        assert_eq!(d[&1], x());
        assert_eq!(d[&3], x().pow(3));

        let a = ParamPolynomial::var(0);
        let b = ParamPolynomial::var(1);
        let f = &z().pow(2).scale_param(&a) + &(&x().pow(2) * &z()).scale_param(&b);
        let d = f.decompose();
        assert_eq!(d.keys().copied().collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn partial_examples() {
        assert_eq!(QHPolynomial::h().partial(Var::X), x().scale(&int(2)));
        assert_eq!(z().pow(2).partial(Var::Z), z().scale(&int(2)));
        let a = ParamPolynomial::var(0);
        let f = (&x().pow(3) * &y()).scale_param(&a);
        assert_eq!(f.partial(Var::Y), x().pow(3).scale_param(&a));
    }

    #[test]
    fn homogeneous_part_and_truncate() {
        let f = &(&x() + &z()) + &(&x().pow(3) + &z().pow(2));
        assert_eq!(f.homogeneous_part(2), z());
        assert_eq!(f.homogeneous_part(4), z().pow(2));
        assert_eq!(f.truncate(2), &x() + &z());
        assert_eq!(f.mul_truncated(&f, 3), (&(&x() + &z()) * &(&x() + &z())).truncate(3));
    }

    #[test]
    fn text_form() {
        let t = ParamTable::new(["a"]);
        let f = &y().scale(&int(-2)) + &(&x() * &z()).scale_param(&ParamPolynomial::var(0));
        assert_eq!(f.to_text(&t), "-2*y + a*x*z");
    }
}
