//! Obstruction sequences for first integrals and inverse Jacobi multipliers,
//! and the classification driver.
//!
//! Every sequence builds `W = seed + sum_k W_k` degree by degree so that
//! `grad(W) . F - c W div(F) = sum_j entry_j z^j`, with each `W_k` free of
//! `h^(k/2)`. Entry `j` sits at quasi-homogeneous degree `2j`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::coeffring::ParamPolynomial;
use crate::error::{Error, Result};
use crate::gradedpoly::{Monomial3, QHPolynomial, Var};
use crate::homological::solve_homological;
use crate::normalform::{
    check_principal_part, coprime_resonance, first_resonance, orbital_normal_form_leading,
    NormalFormResult, ResonanceData,
};
use crate::vectorfield::{divergence, is_parameter_free, VectorField3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    FirstIntegral,
    JacobiH,
    JacobiH2,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::FirstIntegral, Method::JacobiH, Method::JacobiH2];

    pub fn tag(&self) -> &'static str {
        match self {
            Method::FirstIntegral => "FIRST_INTEGRAL",
            Method::JacobiH => "JACOBI_H",
            Method::JacobiH2 => "JACOBI_H2",
        }
    }

    pub fn from_tag(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.tag().eq_ignore_ascii_case(s))
    }

    /// `(seed, seed degree, c)`.
    fn setup(&self) -> (QHPolynomial, u32, bool) {
        match self {
            Method::FirstIntegral => (QHPolynomial::h(), 2, false),
            Method::JacobiH => (QHPolynomial::h(), 2, true),
            Method::JacobiH2 => (QHPolynomial::h().pow(2), 4, true),
        }
    }

    /// First z-index carrying an entry.
    pub fn start_index(&self) -> u32 {
        self.setup().1 / 2 + 1
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionSequence {
    pub method: Method,
    /// z-index `j` to the coefficient of `z^j`, for `j = start..=max_index`.
    pub entries: BTreeMap<u32, ParamPolynomial>,
    /// `W` through degree `2 * max_index`.
    pub witness: QHPolynomial,
    pub max_index: u32,
}

impl ObstructionSequence {
    pub fn entry(&self, j: u32) -> ParamPolynomial {
        self.entries.get(&j).cloned().unwrap_or_default()
    }

    pub fn first_nonzero(&self) -> Option<(u32, &ParamPolynomial)> {
        self.entries
            .iter()
            .find(|(_, v)| !v.is_zero())
            .map(|(k, v)| (*k, v))
    }

    pub fn all_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }
}

/// `grad(W) . F - c W div(F)` through degree `max`.
pub fn defining_expression(w: &QHPolynomial, f: &VectorField3, c: bool, max: u32) -> QHPolynomial {
    let mut out = QHPolynomial::zero();
    let grads = [w.partial(Var::X), w.partial(Var::Y), w.partial(Var::Z)];
    for (g, comp) in grads.iter().zip(f.components()) {
        out.add_product_truncated(g, comp, max);
    }
    if c {
        out -= &w.mul_truncated(&divergence(f), max);
    }
    out
}

/// Whatever is left of the defining identity through degree `2 * max_index`;
/// zero for a correct sequence.
pub fn recombination_defect(f: &VectorField3, seq: &ObstructionSequence) -> QHPolynomial {
    let (_, _, c) = seq.method.setup();
    let max = 2 * seq.max_index;
    let mut d = defining_expression(&seq.witness, &f.truncate(max as i64), c, max);
    for (j, v) in &seq.entries {
        d -= &QHPolynomial::term(Monomial3::new(0, 0, *j), v.clone());
    }
    d
}

/// Obstruction entries for `j` up to `n` (degrees up to `2n`).
pub fn obstructions(f: &VectorField3, n: u32, method: Method) -> Result<ObstructionSequence> {
    check_principal_part(f)?;
    let (seed, d0, c) = method.setup();
    let max = 2 * n;
    let comps = f.truncate(max as i64).decompose();
    let slice = |i: u32| comps.get(&(i as i64)).cloned().unwrap_or_default();
    let divs: BTreeMap<u32, QHPolynomial> = (1..=max.saturating_sub(d0))
        .map(|i| (i, divergence(&slice(i))))
        .collect();

    // parts[d] = W_d, grads[d] = grad W_d
    let mut parts: BTreeMap<u32, QHPolynomial> = BTreeMap::new();
    let mut grads: BTreeMap<u32, [QHPolynomial; 3]> = BTreeMap::new();
    let push = |parts: &mut BTreeMap<u32, QHPolynomial>,
                    grads: &mut BTreeMap<u32, [QHPolynomial; 3]>,
                    d: u32,
                    w: QHPolynomial| {
        grads.insert(d, [w.partial(Var::X), w.partial(Var::Y), w.partial(Var::Z)]);
        parts.insert(d, w);
    };
    push(&mut parts, &mut grads, d0, seed);

    let mut entries = BTreeMap::new();
    for k in d0 + 1..=max {
        let mut r = QHPolynomial::zero();
        for (&d, w) in parts.iter() {
            let i = k - d;
            let fi = slice(i);
            if fi.is_zero() {
                continue;
            }
            for (g, comp) in grads[&d].iter().zip(fi.components()) {
                r += &(g * comp);
            }
            if c {
                r -= &(w * &divs[&i]);
            }
        }
        let sol = solve_homological(k as i64, &r)?;
        if k % 2 == 1 {
            if !sol.residual.is_zero() {
                return Err(Error::Consistency(format!(
                    "{method}: nonzero residual at odd degree {k}"
                )));
            }
        } else {
            entries.insert(k / 2, sol.residual);
        }
        push(&mut parts, &mut grads, k, -&sol.solution);
    }

    let mut witness = QHPolynomial::zero();
    for w in parts.values() {
        witness += w;
    }
    Ok(ObstructionSequence {
        method,
        entries,
        witness,
        max_index: n,
    })
}

pub fn first_integral_obstructions(f: &VectorField3, n: u32) -> Result<ObstructionSequence> {
    obstructions(f, n, Method::FirstIntegral)
}

pub fn jacobi_obstructions(f: &VectorField3, n: u32, mode: Method) -> Result<ObstructionSequence> {
    if mode == Method::FirstIntegral {
        return Err(Error::Config(
            "Jacobi obstructions take mode JACOBI_H or JACOBI_H2".into(),
        ));
    }
    obstructions(f, n, mode)
}

/// Shape of the leading normal form term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalFormCase {
    /// No nonzero coefficient through the computed index.
    A,
    /// `l0 < m0`.
    B1,
    /// `m0 < l0`.
    B2,
    /// `l0 = m0`; the coprime pair when the leading coefficients admit one.
    B3(Option<(BigInt, BigInt)>),
}

impl NormalFormCase {
    pub fn tag(&self) -> &'static str {
        match self {
            NormalFormCase::A => "a",
            NormalFormCase::B1 => "b1",
            NormalFormCase::B2 => "b2",
            NormalFormCase::B3(_) => "b3",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Obstruction { method: Method, index: u32 },
    /// `l0 = m0` and no coprime pair solves the resonance condition.
    Resonance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NfLinearizable,
    NoObstructionUpTo(u32),
    NotIntegrable(Witness),
    Symbolic,
}

impl Verdict {
    pub fn tag(&self) -> String {
        match self {
            Verdict::NfLinearizable => "NF_LINEARIZABLE".into(),
            Verdict::NoObstructionUpTo(n) => format!("NO_OBSTRUCTION_UP_TO({n})"),
            Verdict::NotIntegrable(Witness::Obstruction { method, index }) => {
                format!("NOT_INTEGRABLE({method}, {index})")
            }
            Verdict::NotIntegrable(Witness::Resonance) => "NOT_INTEGRABLE(RESONANCE)".into(),
            Verdict::Symbolic => "SYMBOLIC".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub case: NormalFormCase,
    pub resonance: ResonanceData,
    pub normal_form: NormalFormResult,
    pub sequences: Vec<ObstructionSequence>,
}

pub fn sequence_verdict(seq: &ObstructionSequence, n: u32, symbolic: bool) -> Verdict {
    match seq.first_nonzero() {
        None => Verdict::NoObstructionUpTo(n),
        Some(_) if symbolic => Verdict::Symbolic,
        Some((index, _)) => Verdict::NotIntegrable(Witness::Obstruction {
            method: seq.method,
            index,
        }),
    }
}

/// Dispatches on the leading normal form term and runs the matching
/// obstruction sequence through index `n`.
///
/// A field with free parameters takes the symbolic path: coefficients count
/// as nonzero when they are nonzero polynomials, and the verdict is
/// `Symbolic` unless every computed obstruction vanishes identically.
pub fn classify(f: &VectorField3, n: u32) -> Result<Classification> {
    let symbolic = !is_parameter_free(f);
    let nf = orbital_normal_form_leading(f, n)?;
    let resonance = first_resonance(&nf);

    let (case, methods) = match (resonance.l0.value(), resonance.m0.value()) {
        (None, None) => (NormalFormCase::A, vec![Method::FirstIntegral]),
        (Some(l), Some(m)) if l == m => {
            let a = resonance.principal_a.as_ref().and_then(|p| p.as_constant());
            let b = resonance.principal_b.as_ref().and_then(|p| p.as_constant());
            match (a, b) {
                (Some(a), Some(b)) => match coprime_resonance(&a, &b, m)? {
                    Some(pair) => (NormalFormCase::B3(Some(pair)), vec![Method::JacobiH2]),
                    None => {
                        return Ok(Classification {
                            verdict: Verdict::NotIntegrable(Witness::Resonance),
                            case: NormalFormCase::B3(None),
                            resonance,
                            normal_form: nf,
                            sequences: Vec::new(),
                        })
                    }
                },
                _ => (
                    NormalFormCase::B3(None),
                    vec![Method::JacobiH, Method::JacobiH2],
                ),
            }
        }
        (Some(l), m) if m.is_none_or(|m| l < m) => (NormalFormCase::B1, vec![Method::JacobiH]),
        _ => (NormalFormCase::B2, vec![Method::JacobiH]),
    };

    let sequences = methods
        .iter()
        .map(|&m| obstructions(f, n, m))
        .collect::<Result<Vec<_>>>()?;

    let verdict = if methods.len() > 1 {
        if sequences.iter().all(ObstructionSequence::all_zero) {
            Verdict::NoObstructionUpTo(n)
        } else {
            Verdict::Symbolic
        }
    } else if case == NormalFormCase::A && !symbolic && *f == VectorField3::principal() {
        Verdict::NfLinearizable
    } else {
        sequence_verdict(&sequences[0], n, symbolic)
    };

    Ok(Classification {
        verdict,
        case,
        resonance,
        normal_form: nf,
        sequences,
    })
}
