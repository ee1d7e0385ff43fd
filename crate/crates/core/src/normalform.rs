//! Orbital normal form by direct conjugacy.
//!
//! A near-identity change `x = Phi(xi) = xi + sum_k phi_k(xi)` and a time
//! factor `1 + mu` are found degree by degree so that
//! `D Phi . G = (1 + mu) F o Phi`, with `G = F0 + sum_j G_j` and
//! `G_j = a_j (z^j x, z^j y, 0) + b_j (0, 0, z^(j+1))` at degree `k = 2j`
//! (odd degrees have no resonant terms). At degree `k` the unknowns solve
//! `[phi_k, F0] + mu_k F0 - G_k = -R_k`, where `R_k` collects everything
//! of degree `k` built from lower orders. Only products with the input
//! monomials are formed; the transformed field is never expanded.
//!
//! Indices follow the coefficient names: `a_j`, `b_j` live at degree `2j`,
//! and a normal form "to index N" is exact through degree `2N`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::coeffring::rational::int;
use crate::coeffring::{ParamPolynomial, Rational};
use crate::error::{Error, Result};
use crate::gradedpoly::{slice_basis, Monomial3, QHPolynomial, Var};
use crate::homological::DegreeCache;
use crate::linsolve::{Factorization, SparseMatrix};
use crate::vectorfield::{
    directional_derivative, directional_derivative_truncated, lie_bracket, PlanarPolynomial,
    PlanarVectorField, VectorField3,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Unknown {
    Generator(usize, Monomial3),
    Time(Monomial3),
    A,
    B,
}

/// The map `(U, mu, a, b) -> [U, F0] + mu F0 - a Ra - b Rb` on degree `k`.
struct DegreeOperator {
    rows: HashMap<(usize, Monomial3), usize>,
    columns: Vec<Unknown>,
    factorization: Factorization,
}

fn field_slots(k: u32) -> Vec<(usize, Monomial3)> {
    let mut out = Vec::new();
    for i in 0..3 {
        let d = k as i64 + if i == 2 { 2 } else { 1 };
        for m in slice_basis(d).expect("nonnegative").monomials {
            out.push((i, m));
        }
    }
    out
}

fn unit_field(i: usize, m: Monomial3) -> VectorField3 {
    let mut f = VectorField3::zero();
    f.components_mut()[i].add_term(m, ParamPolynomial::one());
    f
}

fn build_operator(k: u32) -> DegreeOperator {
    let slots = field_slots(k);
    let rows: HashMap<(usize, Monomial3), usize> =
        slots.iter().enumerate().map(|(r, s)| (*s, r)).collect();

    let mut columns: Vec<Unknown> = slots
        .iter()
        .map(|&(i, m)| Unknown::Generator(i, m))
        .chain(
            slice_basis(k as i64)
                .expect("nonnegative")
                .monomials
                .into_iter()
                .map(Unknown::Time),
        )
        .collect();
    // top z-level first, resonant directions last
    columns.sort_by_key(|c| match c {
        Unknown::Generator(_, m) | Unknown::Time(m) => std::cmp::Reverse(m.ez),
        _ => std::cmp::Reverse(0),
    });
    if k.is_multiple_of(2) && k > 0 {
        columns.push(Unknown::A);
        columns.push(Unknown::B);
    }

    let f0 = VectorField3::principal();
    let j = k / 2;
    let mut matrix = SparseMatrix::new(columns.len());
    for _ in 0..rows.len() {
        matrix.push_row(BTreeMap::new());
    }
    for (c, unknown) in columns.iter().enumerate() {
        let image = match *unknown {
            Unknown::Generator(i, m) => lie_bracket(&unit_field(i, m), &f0),
            Unknown::Time(m) => f0.mul_scalar_truncated(
                &QHPolynomial::mono(m.ex, m.ey, m.ez, int(1)),
                k as i64,
            ),
            Unknown::A => VectorField3::radial_resonance(j).scale(&int(-1)),
            Unknown::B => VectorField3::axial_resonance(j).scale(&int(-1)),
        };
        for (i, p) in image.components().into_iter().enumerate() {
            for (m, v) in p.terms() {
                let r = rows[&(i, *m)];
                matrix.add_entry(r, c, &v.as_constant().expect("parameter-free operator"));
            }
        }
    }
    let order: Vec<usize> = (0..columns.len()).collect();
    DegreeOperator {
        rows,
        columns,
        factorization: matrix.factor(&order),
    }
}

static OPERATORS: LazyLock<DegreeCache<Arc<DegreeOperator>>> = LazyLock::new(DegreeCache::new);

fn degree_operator(k: u32) -> Arc<DegreeOperator> {
    OPERATORS.get_or_build(k, || Arc::new(build_operator(k)))
}

/// Transformation terms chosen at one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormStep {
    pub degree: u32,
    /// `phi_k`, the degree-`k` part of `Phi - id`.
    pub generator: VectorField3,
    pub reparametrization: QHPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormResult {
    pub a: BTreeMap<u32, ParamPolynomial>,
    pub b: BTreeMap<u32, ParamPolynomial>,
    /// Coefficients are known for indices `1..=max_index`.
    pub max_index: u32,
    pub steps: Vec<NormalFormStep>,
}

impl NormalFormResult {
    pub fn a(&self, k: u32) -> ParamPolynomial {
        self.a.get(&k).cloned().unwrap_or_default()
    }

    pub fn b(&self, k: u32) -> ParamPolynomial {
        self.b.get(&k).cloned().unwrap_or_default()
    }

    /// `a_j (z^j x, z^j y, 0) + b_j (0, 0, z^(j+1))` for `k = 2j`, zero for odd `k`.
    pub fn expected_slice(&self, k: u32) -> VectorField3 {
        if k % 2 == 1 {
            return VectorField3::zero();
        }
        let j = k / 2;
        VectorField3::radial_resonance(j)
            .scale_param(&self.a(j))
            .add(&VectorField3::axial_resonance(j).scale_param(&self.b(j)))
    }

    /// `F0 + sum_k G_k` through index `max_index`.
    pub fn normal_field(&self) -> VectorField3 {
        let mut g = VectorField3::principal();
        for k in 1..=2 * self.max_index {
            g.add_assign(&self.expected_slice(k));
        }
        g
    }
}

/// Checks that `f` has principal part `F0` and no terms of negative degree.
pub fn check_principal_part(f: &VectorField3) -> Result<()> {
    if let Some(d) = f.min_degree() {
        if d < 0 {
            let part = f.component(d);
            return Err(Error::PrincipalPart(format!(
                "terms of negative degree {d}: {}",
                describe(&part)
            )));
        }
    }
    let f0 = VectorField3::principal();
    let diff = f.component(0).sub(&f0);
    if !diff.is_zero() {
        return Err(Error::PrincipalPart(format!(
            "degree-0 part differs from (-2*y, 2*x, x^2 + y^2) by {}",
            describe(&diff)
        )));
    }
    Ok(())
}

fn describe(f: &VectorField3) -> String {
    let names = ["dx", "dy", "dz"];
    let table = crate::coeffring::ParamTable::default();
    f.components()
        .into_iter()
        .zip(names)
        .filter(|(p, _)| !p.is_zero())
        .map(|(p, n)| format!("{n}: {}", p.to_text(&table)))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Order-indexed expansion of `Phi^m` for the monomials `m` of the input,
/// where `Phi = id + sum phi_k`. Slice `j` of a node for `m` has degree
/// `deg(m) + j`.
struct Composition {
    /// `vars[v][j]`: order-`j` part of `Phi_v`.
    vars: [Vec<QHPolynomial>; 3],
    nodes: Vec<Node>,
    index: HashMap<Monomial3, usize>,
}

struct Node {
    /// Child node (`None` for the constant monomial 1) times variable `var`.
    left: Option<usize>,
    var: usize,
    slices: Vec<QHPolynomial>,
}

impl Composition {
    fn new() -> Self {
        let vars = [Var::X, Var::Y, Var::Z].map(|v| vec![QHPolynomial::var(v)]);
        Composition {
            vars,
            nodes: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn node(&mut self, m: Monomial3) -> Option<usize> {
        if m == Monomial3::ONE {
            return None;
        }
        if let Some(&i) = self.index.get(&m) {
            return Some(i);
        }
        let (var, rest) = if m.ez > 0 {
            (2, Monomial3::new(m.ex, m.ey, m.ez - 1))
        } else if m.ey > 0 {
            (1, Monomial3::new(m.ex, m.ey - 1, m.ez))
        } else {
            (0, Monomial3::new(m.ex - 1, m.ey, m.ez))
        };
        let left = self.node(rest);
        let slices = vec![QHPolynomial::mono(m.ex, m.ey, m.ez, int(1))];
        self.nodes.push(Node { left, var, slices });
        let i = self.nodes.len() - 1;
        self.index.insert(m, i);
        Some(i)
    }

    /// Order-`k` slices of every node with `phi_k` taken as zero.
    fn extend(&mut self, k: usize) {
        for v in &mut self.vars {
            v.push(QHPolynomial::zero());
        }
        for i in 0..self.nodes.len() {
            let (left, var) = (self.nodes[i].left, self.nodes[i].var);
            let s = match left {
                None => self.vars[var][k].clone(),
                Some(l) => {
                    let mut s = QHPolynomial::zero();
                    for j in 0..=k {
                        let a = &self.nodes[l].slices[j];
                        let b = &self.vars[var][k - j];
                        if !a.is_zero() && !b.is_zero() {
                            s += &(a * b);
                        }
                    }
                    s
                }
            };
            self.nodes[i].slices.push(s);
        }
    }

    /// Installs `phi_k` and corrects the order-`k` slices.
    fn set_order(&mut self, k: usize, phi: &VectorField3) {
        if phi.is_zero() {
            return;
        }
        for (v, c) in phi.components().into_iter().enumerate() {
            self.vars[v][k] = c.clone();
        }
        let mut delta: Vec<QHPolynomial> = Vec::with_capacity(self.nodes.len());
        for i in 0..self.nodes.len() {
            let (left, var) = (self.nodes[i].left, self.nodes[i].var);
            let dv = phi.components()[var];
            let d = match left {
                None => dv.clone(),
                Some(l) => {
                    // only the j = 0 and j = k terms of the Cauchy product change
                    let mut d = &self.nodes[l].slices[0] * dv;
                    if !delta[l].is_zero() {
                        d += &(&delta[l] * &self.vars[var][0]);
                    }
                    d
                }
            };
            self.nodes[i].slices[k] += &d;
            delta.push(d);
        }
    }
}

/// Shift between the order of a composed term and its node slice.
fn order_shift(i: usize, m: &Monomial3) -> usize {
    let top = if i == 2 { 2 } else { 1 };
    m.degree() as usize - top
}

/// Order-`k` part of `F o Phi`.
fn composed_slice(f: &VectorField3, comp: &Composition, k: usize) -> VectorField3 {
    let mut out = VectorField3::zero();
    for (i, (dst, src)) in out
        .components_mut()
        .into_iter()
        .zip(f.components())
        .enumerate()
    {
        for (m, c) in src.terms() {
            let d = order_shift(i, m);
            if d > k {
                break;
            }
            *dst += &comp.nodes[comp.index[m]].slices[k - d].scale_param(c);
        }
    }
    out
}

fn directional(f: &VectorField3, g: &VectorField3) -> VectorField3 {
    VectorField3::new(
        directional_derivative(&f.fx, g),
        directional_derivative(&f.fy, g),
        directional_derivative(&f.fz, g),
    )
}

fn run(f: &VectorField3, n: u32, stop_at_first: bool) -> Result<NormalFormResult> {
    check_principal_part(f)?;
    if n == 0 {
        return Err(Error::Config("normal form needs max index at least 1".into()));
    }
    let max = 2 * n as usize;
    let f = f.truncate(max as i64);

    let mut comp = Composition::new();
    for (i, p) in f.components().into_iter().enumerate() {
        for (m, _) in p.terms() {
            if order_shift(i, m) <= max {
                comp.node(*m);
            }
        }
    }

    // composed[j] = order-j part of F o Phi, resonant[j] = G_j
    let mut composed: Vec<VectorField3> = vec![VectorField3::principal()];
    let mut resonant: Vec<VectorField3> = vec![VectorField3::principal()];
    let mut mus: Vec<QHPolynomial> = vec![QHPolynomial::zero()];
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    let mut steps = Vec::new();
    let mut reached = n;

    for k in 1..=max {
        comp.extend(k);
        let mut r = composed_slice(&f, &comp, k);
        for i in 1..k {
            if !mus[i].is_zero() {
                r.add_assign(&composed[k - i].mul_scalar_truncated(&mus[i], k as i64));
            }
            if !resonant[k - i].is_zero() && !steps_generator(&steps, i).is_zero() {
                r.sub_assign(&directional(steps_generator(&steps, i), &resonant[k - i]));
            }
        }

        let (mut generator, mut mu) = (VectorField3::zero(), QHPolynomial::zero());
        let (mut ak, mut bk) = (ParamPolynomial::zero(), ParamPolynomial::zero());
        if !r.is_zero() {
            let op = degree_operator(k as u32);
            let mut rhs = vec![ParamPolynomial::zero(); op.rows.len()];
            for (i, p) in r.components().into_iter().enumerate() {
                for (m, c) in p.terms() {
                    rhs[op.rows[&(i, *m)]] = -c;
                }
            }
            let x = op.factorization.solve(&rhs).map_err(|e| {
                Error::Consistency(format!(
                    "degree {k} term is outside range plus resonant span (row {})",
                    e.row
                ))
            })?;
            for (unknown, v) in op.columns.iter().zip(x) {
                if v.is_zero() {
                    continue;
                }
                match *unknown {
                    Unknown::Generator(i, m) => generator.components_mut()[i].add_term(m, v),
                    Unknown::Time(m) => mu.add_term(m, v),
                    Unknown::A => ak = v,
                    Unknown::B => bk = v,
                }
            }
        }

        comp.set_order(k, &generator);
        composed.push(composed_slice(&f, &comp, k));
        let j = (k / 2) as u32;
        let g = if k % 2 == 0 {
            a.insert(j, ak.clone());
            b.insert(j, bk.clone());
            VectorField3::radial_resonance(j)
                .scale_param(&ak)
                .add(&VectorField3::axial_resonance(j).scale_param(&bk))
        } else {
            VectorField3::zero()
        };
        resonant.push(g);
        mus.push(mu.clone());
        steps.push(NormalFormStep {
            degree: k as u32,
            generator,
            reparametrization: mu,
        });
        if stop_at_first && (!ak.is_zero() || !bk.is_zero()) {
            reached = j;
            break;
        }
    }

    Ok(NormalFormResult {
        a,
        b,
        max_index: reached,
        steps,
    })
}

fn steps_generator(steps: &[NormalFormStep], k: usize) -> &VectorField3 {
    &steps[k - 1].generator
}

/// `D Phi . G - (1 + mu) F o Phi` through order `2 * max_index`, computed by
/// plain substitution; zero when the recorded transformation is correct.
pub fn conjugacy_defect(f: &VectorField3, nf: &NormalFormResult) -> VectorField3 {
    let max = 2 * nf.max_index as i64;
    let mut phi = VectorField3::zero();
    let mut mu = QHPolynomial::zero();
    for s in &nf.steps {
        if (s.degree as i64) <= max {
            phi.add_assign(&s.generator);
            mu += &s.reparametrization;
        }
    }
    let g = nf.normal_field();
    let cap = |i: usize| (max + if i == 2 { 2 } else { 1 }) as u32;

    let ids = [Var::X, Var::Y, Var::Z].map(QHPolynomial::var);
    let full: Vec<QHPolynomial> = phi
        .components()
        .into_iter()
        .zip(&ids)
        .map(|(p, v)| p + v)
        .collect();
    let mut lhs = VectorField3::zero();
    for (i, dst) in lhs.components_mut().into_iter().enumerate() {
        *dst = directional_derivative_truncated(&full[i], &g, cap(i));
    }

    let f = f.truncate(max);
    let mut rhs = VectorField3::zero();
    for (i, (dst, src)) in rhs
        .components_mut()
        .into_iter()
        .zip(f.components())
        .enumerate()
    {
        let c = cap(i);
        for (m, coef) in src.terms() {
            let mut t = QHPolynomial::constant(coef.clone());
            for (v, e) in [(0, m.ex), (1, m.ey), (2, m.ez)] {
                for _ in 0..e {
                    t = t.mul_truncated(&full[v], c);
                }
            }
            *dst += &t;
        }
    }
    let scaled = rhs.mul_scalar_truncated(&mu, max);
    rhs.add_assign(&scaled);
    lhs.sub(&rhs)
}

/// Normal form coefficients `a_j`, `b_j` for `j = 1..=n`.
pub fn orbital_normal_form(f: &VectorField3, n: u32) -> Result<NormalFormResult> {
    run(f, n, false)
}

/// As `orbital_normal_form`, stopping after the first index where `a_j` or
/// `b_j` is nonzero.
pub fn orbital_normal_form_leading(f: &VectorField3, n: u32) -> Result<NormalFormResult> {
    run(f, n, true)
}

/// A first index: known exactly, or only bounded below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FirstIndex {
    At(u32),
    AtLeast(u32),
}

impl FirstIndex {
    pub fn is_finite(&self) -> bool {
        matches!(self, FirstIndex::At(_))
    }

    pub fn value(&self) -> Option<u32> {
        match self {
            FirstIndex::At(k) => Some(*k),
            FirstIndex::AtLeast(_) => None,
        }
    }
}

impl std::fmt::Display for FirstIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FirstIndex::At(k) => write!(f, "{k}"),
            FirstIndex::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceData {
    pub l0: FirstIndex,
    pub m0: FirstIndex,
    pub n0: FirstIndex,
    /// `a_(l0)` when `l0` is known.
    pub principal_a: Option<ParamPolynomial>,
    /// `b_(m0)` when `m0` is known.
    pub principal_b: Option<ParamPolynomial>,
}

pub fn first_resonance(nf: &NormalFormResult) -> ResonanceData {
    let first = |pick: &dyn Fn(u32) -> ParamPolynomial| {
        (1..=nf.max_index)
            .find(|&k| !pick(k).is_zero())
            .map_or(FirstIndex::AtLeast(nf.max_index + 1), FirstIndex::At)
    };
    let l0 = first(&|k| nf.a(k));
    let m0 = first(&|k| nf.b(k));
    let n0 = first(&|k| &nf.a(k).scale(&int(2)) + &nf.b(k).scale(&int(k as i64 + 1)));
    ResonanceData {
        l0,
        m0,
        n0,
        principal_a: l0.value().map(|k| nf.a(k)),
        principal_b: m0.value().map(|k| nf.b(k)),
    }
}

/// The coprime pair `(n1, n2)` with `2 n1 a + (m0 + 1) n2 b = 0`, if any.
pub fn coprime_resonance(
    a: &Rational,
    b: &Rational,
    m0: u32,
) -> Result<Option<(BigInt, BigInt)>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroResonanceCoefficient);
    }
    let ratio = -(a * int(2)) / (b * int(m0 as i64 + 1));
    if !ratio.is_positive() {
        return Ok(None);
    }
    // ratio = n2 / n1 in lowest terms
    Ok(Some((ratio.denom().clone(), ratio.numer().clone())))
}

/// `(v + sum b_k u^(k+1), 2 v sum a_k u^k)`, with `u`, `v` stored as x, y.
pub fn planar_reduction(nf: &NormalFormResult) -> PlanarVectorField {
    let mut pu = PlanarPolynomial::mono(0, 1, ParamPolynomial::one());
    let mut pv = PlanarPolynomial::zero();
    for k in 1..=nf.max_index {
        let (a, b) = (nf.a(k), nf.b(k));
        if !b.is_zero() {
            pu.0.add_term(Monomial3::new(k + 1, 0, 0), b);
        }
        if !a.is_zero() {
            pv.0.add_term(Monomial3::new(k, 1, 0), a.scale(&int(2)));
        }
    }
    PlanarVectorField::new(pu, pv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rational::rat;

    fn p(i: usize) -> ParamPolynomial {
        ParamPolynomial::var(i)
    }

    fn family37() -> VectorField3 {
        // params a, b, c
        VectorField3::principal().add(&VectorField3::new(
            QHPolynomial::var(Var::Z).scale_param(&p(0)),
            QHPolynomial::mono(2, 0, 0, int(1)).scale_param(&p(1)),
            QHPolynomial::mono(0, 3, 0, int(1)).scale_param(&p(2)),
        ))
    }

    #[test]
    fn principal_part_is_already_normal() {
        let nf = orbital_normal_form(&VectorField3::principal(), 4).unwrap();
        assert!((1..=4).all(|k| nf.a(k).is_zero() && nf.b(k).is_zero()));
        let r = first_resonance(&nf);
        assert_eq!(r.l0, FirstIndex::AtLeast(5));
        assert_eq!(r.n0, FirstIndex::AtLeast(5));
    }

    // values cross-checked by a direct-substitution computation (not a Lie
    // transform) projecting the degree-2 slice along the range of l_2
    #[test]
    fn first_coefficients_family37() {
        let nf = orbital_normal_form(&family37(), 1).unwrap();
        let a2 = p(0).pow(2);
        assert_eq!(nf.a(1), a2.scale(&rat(-1, 4)));
        assert_eq!(nf.b(1), a2.scale(&rat(1, 4)));
        let r = first_resonance(&nf);
        assert_eq!((r.l0, r.m0), (FirstIndex::At(1), FirstIndex::At(1)));
        assert_eq!(r.n0, FirstIndex::AtLeast(2));
    }

    #[test]
    fn transformation_conjugates_exactly() {
        let f = family37();
        let nf = orbital_normal_form(&f, 4).unwrap();
        assert!(conjugacy_defect(&f, &nf).is_zero());
        let g = VectorField3::principal().add(&VectorField3::new(
            QHPolynomial::mono(1, 0, 1, int(1)),
            QHPolynomial::mono(0, 2, 0, rat(-1, 3)),
            &QHPolynomial::mono(0, 0, 2, int(2)) + &QHPolynomial::mono(3, 0, 0, int(1)),
        ));
        let nf = orbital_normal_form(&g, 5).unwrap();
        assert!(conjugacy_defect(&g, &nf).is_zero());
        assert!(!nf.b(1).is_zero());
    }

    #[test]
    fn resonant_perturbation_is_kept() {
        let c = p(0);
        let f = VectorField3::principal()
            .add(&VectorField3::axial_resonance(1).scale_param(&c));
        let nf = orbital_normal_form(&f, 2).unwrap();
        assert!(nf.a(1).is_zero());
        assert_eq!(nf.b(1), c);
        let r = first_resonance(&nf);
        assert_eq!(r.m0, FirstIndex::At(1));
        assert!(!r.l0.is_finite());
    }

    #[test]
    fn negative_degrees_are_rejected() {
        let f = VectorField3::principal().add(&VectorField3::new(
            QHPolynomial::one(),
            QHPolynomial::zero(),
            QHPolynomial::zero(),
        ));
        assert!(matches!(
            orbital_normal_form(&f, 1),
            Err(Error::PrincipalPart(_))
        ));
    }

    #[test]
    fn coprime_examples() {
        let pair = |a: Rational, b: Rational, m| {
            coprime_resonance(&a, &b, m)
                .unwrap()
                .map(|(x, y)| (x.to_string(), y.to_string()))
        };
        assert_eq!(pair(int(1), int(-1), 1), Some(("1".into(), "1".into())));
        assert_eq!(pair(rat(-3, 8), rat(3, 8), 1), Some(("1".into(), "1".into())));
        assert_eq!(pair(int(1), int(1), 1), None);
        assert_eq!(pair(int(3), int(-1), 2), Some(("1".into(), "2".into())));
        assert!(coprime_resonance(&int(0), &int(1), 1).is_err());
    }

    #[test]
    fn planar_examples() {
        let table = crate::coeffring::ParamTable::new(["al", "be"]);
        let zero = orbital_normal_form(&VectorField3::principal(), 3).unwrap();
        let pr = planar_reduction(&zero);
        assert_eq!(pr.pu.to_text(("u", "v"), &table), "v");
        assert!(pr.pv.is_zero());

        let mut nf = zero.clone();
        nf.a.insert(1, p(0));
        nf.b.insert(1, p(1));
        let pr = planar_reduction(&nf);
        assert_eq!(pr.pu, PlanarPolynomial(
            &QHPolynomial::var(Var::Y) + &QHPolynomial::mono(2, 0, 0, int(1)).scale_param(&p(1))
        ));
        assert_eq!(pr.pv.0, QHPolynomial::mono(1, 1, 0, int(2)).scale_param(&p(0)));
    }
}
