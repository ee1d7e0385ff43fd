//! Polynomials over Q in the declared system parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

/// Exponent vector over the parameter table, trailing zeros trimmed.
///
/// Ordered graded-lexicographically: total degree first, then the earlier
/// declared parameter dominates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParamMonomial(Vec<u32>);

impl ParamMonomial {
    pub fn one() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        ParamMonomial(exps)
    }

    pub fn var(index: usize, power: u32) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = power;
        Self::new(v)
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Self) -> Self {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut v = long.clone();
        for (a, b) in v.iter_mut().zip(short.iter()) {
            *a += b;
        }
        ParamMonomial(v)
    }

    fn with_exponent(&self, index: usize, e: u32) -> Self {
        let mut v = self.0.clone();
        if v.len() <= index {
            v.resize(index + 1, 0);
        }
        v[index] = e;
        Self::new(v)
    }
}

impl Ord for ParamMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let n = self.0.len().max(other.0.len());
                for i in 0..n {
                    match self.exponent(i).cmp(&other.exponent(i)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for ParamMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered list of declared parameter names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamTable {
    names: Vec<String>,
}

impl ParamTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        ParamTable {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    pub fn name(&self, index: usize) -> String {
        self.names
            .get(index)
            .cloned()
            .unwrap_or_else(|| format!("p{index}"))
    }

    /// The parameter as a polynomial.
    pub fn var(&self, name: &str) -> Result<ParamPolynomial> {
        Ok(ParamPolynomial::var(self.index_of(name)?))
    }
}

/// Exact element of Q[p_1, ..., p_m]. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPolynomial {
    terms: BTreeMap<ParamMonomial, Rational>,
}

impl ParamPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ParamMonomial::one(), c);
        }
        ParamPolynomial { terms }
    }

    pub fn var(index: usize) -> Self {
        Self::monomial(ParamMonomial::var(index, 1), Rational::one())
    }

    pub fn monomial(m: ParamMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPolynomial { terms }
    }

    /// Builds a polynomial from raw, possibly repeated or zero, terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(ParamMonomial::new(e), c);
        }
        p
    }

    /// Canonical form. Arithmetic already maintains it, so this is a clone.
    pub fn normalize(&self) -> Self {
        let mut p = Self::zero();
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c.clone());
        }
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

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ParamMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&ParamMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn add_term(&mut self, m: ParamMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ParamPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// `self += other * c`
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    /// `self += a * b`
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), ca * cb);
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

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(ParamMonomial::total_degree).max()
    }

    /// Degree in one parameter; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }

    /// Coefficient of `var^e`, as a polynomial in the other parameters.
    pub fn coefficient_in(&self, var: usize, e: u32) -> Self {
        let mut p = Self::zero();
        for (m, c) in &self.terms {
            if m.exponent(var) == e {
                p.add_term(m.with_exponent(var, 0), c.clone());
            }
        }
        p
    }

    /// Largest parameter index that occurs, plus one.
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    /// Replaces `var` by `value`.
    pub fn substitute(&self, var: usize, value: &Self) -> Self {
        let mut powers: Vec<Self> = vec![Self::one()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = Self::monomial(m.with_exponent(var, 0), c.clone());
            out.add_product(&rest, &powers[e]);
        }
        out
    }

    /// Substitutes every bound parameter; unbound ones stay symbolic.
    pub fn evaluate(&self, values: &[Option<Rational>]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.0.clone();
            for (i, e) in exps.iter_mut().enumerate() {
                if let Some(Some(v)) = values.get(i) {
                    coeff *= super::rational::pow(v, *e);
                    *e = 0;
                }
            }
            out.add_term(ParamMonomial::new(exps), coeff);
        }
        out
    }

    /// Pseudo-remainder of `self` by `constraint` with respect to `var`.
    ///
    /// Returns `r` with `lc^e * self = q * constraint + r` and
    /// `deg_var(r) < deg_var(constraint)`, where `lc` is the leading
    /// coefficient of `constraint` in `var`.
    pub fn pseudo_remainder(&self, constraint: &Self, var: usize) -> Result<Self> {
        let d = match constraint.degree_in(var) {
            Some(d) if d > 0 => d,
            _ => return Err(Error::ConstantConstraint(format!("p{var}"))),
        };
        let lc = constraint.coefficient_in(var, d);
        let mut r = self.clone();
        while let Some(dr) = r.degree_in(var) {
            if dr < d || r.is_zero() {
                break;
            }
            let lead = r.coefficient_in(var, dr);
            let shift = Self::monomial(ParamMonomial::var(var, dr - d), Rational::one());
            r = &(&lc * &r) - &(&(&lead * &shift) * constraint);
        }
        Ok(r)
    }

    /// Divides every coefficient by the gcd of the numerators and the lcm of
    /// the denominators, making the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        let Some((_, lead)) = self.terms.iter().next_back() else {
            return Self::zero();
        };
        let mut g = num_bigint::BigInt::zero();
        let mut l = num_bigint::BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let mut factor = Rational::new(l, g);
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn display<'a>(&'a self, table: &'a ParamTable) -> Display<'a> {
        Display { poly: self, table }
    }

    /// Canonical string: terms in descending order, `c*name^e` factors.
    pub fn to_canonical_string(&self, table: &ParamTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(format_rational(&a));
            }
            for (idx, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(table.name(idx)),
                    _ => factors.push(format!("{}^{}", table.name(idx), e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

pub struct Display<'a> {
    poly: &'a ParamPolynomial,
    table: &'a ParamTable,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.to_canonical_string(self.table))
    }
}

impl From<Rational> for ParamPolynomial {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl Add for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = ParamPolynomial::zero();
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(self) -> ParamPolynomial {
        ParamPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(mut self, rhs: ParamPolynomial) -> ParamPolynomial {
        self += &rhs;
        self
    }
}

impl Sub for ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(mut self, rhs: ParamPolynomial) -> ParamPolynomial {
        self -= &rhs;
        self
    }
}

impl Mul for ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, rhs: ParamPolynomial) -> ParamPolynomial {
        &self * &rhs
    }
}

impl Neg for ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(self) -> ParamPolynomial {
        -&self
    }
}

impl AddAssign<&ParamPolynomial> for ParamPolynomial {
    fn add_assign(&mut self, rhs: &ParamPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&ParamPolynomial> for ParamPolynomial {
    fn sub_assign(&mut self, rhs: &ParamPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rational::{int, rat};

    fn a() -> ParamPolynomial {
        ParamPolynomial::var(0)
    }
    fn b() -> ParamPolynomial {
        ParamPolynomial::var(1)
    }
    fn k(n: i64) -> ParamPolynomial {
        ParamPolynomial::constant(int(n))
    }

    #[test]
    fn cancellation_purges_terms() {
        let p = &(&(&k(2) * &a()) - &(&k(2) * &a())) + &b();
        assert_eq!(p, b());
        assert_eq!(p.normalize(), p);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn zero_has_no_terms() {
        let z = ParamPolynomial::constant(int(0));
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
        assert_eq!(z.to_canonical_string(&ParamTable::default()), "0");
    }

    #[test]
    fn unit_coefficient_product() {
        let half_a = a().scale(&rat(1, 2));
        let p = &half_a * &k(2);
        assert_eq!(p.normalize(), a());
    }

    #[test]
    fn reduce_by_linear_constraint_substitutes() {
        let p = a().pow(2);
        let g = &a() - &b();
        assert_eq!(p.pseudo_remainder(&g, 0).unwrap(), b().pow(2));
    }

    #[test]
    fn reduce_self_is_zero() {
        let g = &(&a().pow(2).scale(&int(126)) - &(&a() * &b()).scale(&int(117)))
            + &b().pow(2).scale(&int(40));
        assert!(g.pseudo_remainder(&g, 0).unwrap().is_zero());
        let lin = &a() - &b();
        assert!(lin.pseudo_remainder(&lin, 1).unwrap().is_zero());
    }

    #[test]
    fn reduce_rejects_constant_constraint() {
        assert!(a().pseudo_remainder(&b(), 0).is_err());
    }

    #[test]
    fn canonical_printing_is_graded_lex_descending() {
        let t = ParamTable::new(["a", "b"]);
        let p = &(&(&a().pow(2).scale(&rat(-3, 8)) + &(&a() * &b())) + &b()) - &k(1);
        assert_eq!(p.to_canonical_string(&t), "-3/8*a^2 + a*b + b - 1");
    }

    #[test]
    fn substitute_and_evaluate() {
        let p = &(&a() * &b()) + &a();
        let s = p.substitute(1, &(-&a()));
        assert_eq!(s, &(-&a().pow(2)) + &a());
        let v = p.evaluate(&[Some(int(2)), None]);
        assert_eq!(v, &b().scale(&int(2)) + &k(2));
    }

    #[test]
    fn primitive_part() {
        let p = &a().scale(&rat(-3, 8)) + &b().scale(&rat(3, 4));
        let t = ParamTable::new(["a", "b"]);
        assert_eq!(p.primitive().to_canonical_string(&t), "a - 2*b");
    }
}
