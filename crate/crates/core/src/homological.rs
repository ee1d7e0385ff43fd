//! The operator `l_k(mu) = grad(mu) . F0` on the graded slice `P_k`.
//!
//! Two solvers live here. `solve_homological` works level by level in the
//! powers of z and only ever inverts the rotation `-2y d/dx + 2x d/dy` on
//! binary forms; `solve_homological_dense` assembles the full slice matrix
//! and is kept as a cross-check.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeffring::rational::int;
use crate::coeffring::{ParamPolynomial, Rational};
use crate::error::{Error, Result};
use crate::gradedpoly::{
    coordinates, from_coordinates, slice_basis, GradedSliceBasis, Monomial3, QHPolynomial,
};
use crate::linsolve::SparseSystem;
use crate::vectorfield::{directional_derivative, VectorField3};

/// Per-degree cache with at-most-once construction of each entry.
pub(crate) struct DegreeCache<T> {
    slots: Mutex<HashMap<u32, Arc<OnceLock<T>>>>,
}

impl<T: Clone> DegreeCache<T> {
    pub(crate) fn new() -> Self {
        DegreeCache {
            slots: Mutex::new(HashMap::new()),
        }
    }

    pub(crate) fn get_or_build(&self, k: u32, build: impl FnOnce() -> T) -> T {
        let slot = {
            let mut slots = self.slots.lock().unwrap_or_else(|e| e.into_inner());
            slots.entry(k).or_default().clone()
        };
        slot.get_or_init(build).clone()
    }
}

/// `l(mu) = grad(mu) . F0`.
pub fn lie_operator(mu: &QHPolynomial) -> QHPolynomial {
    directional_derivative(mu, &VectorField3::principal())
}

fn check_degree(k: i64) -> Result<u32> {
    if k < 0 {
        Err(Error::NegativeDegree(k))
    } else {
        Ok(k as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieOperatorMatrix {
    pub degree: u32,
    pub basis: GradedSliceBasis,
    /// `entries[r][c]` is the coefficient of `basis[r]` in `l(basis[c])`.
    pub entries: Vec<Vec<Rational>>,
}

impl LieOperatorMatrix {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// Every entry of `l` has an integer value.
    fn integer_entries(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|v| v.to_integer()).collect())
            .collect()
    }
}

pub fn lie_operator_matrix(k: i64) -> Result<LieOperatorMatrix> {
    let degree = check_degree(k)?;
    let basis = slice_basis(k)?;
    let n = basis.len();
    let mut entries = vec![vec![Rational::zero(); n]; n];
    for (c, m) in basis.monomials.iter().enumerate() {
        let image = lie_operator(&QHPolynomial::mono(m.ex, m.ey, m.ez, int(1)));
        for (mm, v) in image.terms() {
            let r = basis
                .position(mm)
                .expect("l_k maps P_k into itself");
            entries[r][c] = v.as_constant().expect("l_k has rational entries");
        }
    }
    Ok(LieOperatorMatrix {
        degree,
        basis,
        entries,
    })
}

/// Row echelon form by fraction-free (Bareiss) elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivot_columns: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_columns.len()
    }
}

pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> Echelon {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivot_columns = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                // exact by Sylvester's identity
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivot_columns.push(c);
        r += 1;
    }
    Echelon {
        rows: a,
        pivot_columns,
    }
}

/// Null space of an echelon form, one vector per free column.
fn kernel_from_echelon(e: &Echelon, ncols: usize) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..ncols)
        .filter(|c| !e.pivot_columns.contains(c))
        .collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &pc) in e.pivot_columns.iter().enumerate().rev() {
                let row = &e.rows[i];
                let mut s = Rational::zero();
                for j in pc + 1..ncols {
                    if !row[j].is_zero() && !v[j].is_zero() {
                        s += Rational::from_integer(row[j].clone()) * &v[j];
                    }
                }
                v[pc] = -s / Rational::from_integer(row[pc].clone());
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorAnalysis {
    pub degree: u32,
    pub rank: usize,
    pub kernel_basis: Vec<QHPolynomial>,
    pub cokernel_representative: Option<QHPolynomial>,
    pub echelon: Echelon,
}

/// `h^(k/2)` for even `k`.
pub fn kernel_generator(k: u32) -> Option<QHPolynomial> {
    k.is_multiple_of(2).then(|| QHPolynomial::h().pow(k / 2))
}

/// `z^(k/2)` for even `k`.
pub fn cokernel_monomial(k: u32) -> Option<Monomial3> {
    k.is_multiple_of(2).then(|| Monomial3::new(0, 0, k / 2))
}

fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    let Some(i) = b.iter().position(|v| !v.is_zero()) else {
        return false;
    };
    let ratio = &a[i] / &b[i];
    !ratio.is_zero() && a.iter().zip(b).all(|(x, y)| *x == &ratio * y)
}

fn build_analysis(k: u32) -> Result<OperatorAnalysis> {
    let mat = lie_operator_matrix(k as i64)?;
    let n = mat.size();
    let echelon = bareiss(mat.integer_entries());
    let rank = echelon.rank();
    let kernel: Vec<Vec<Rational>> = kernel_from_echelon(&echelon, n);
    let kernel_basis: Vec<QHPolynomial> = kernel
        .iter()
        .map(|v| {
            let coords: Vec<ParamPolynomial> =
                v.iter().cloned().map(ParamPolynomial::constant).collect();
            from_coordinates(&coords, &mat.basis)
        })
        .collect();

    let mismatch = |what: &str| {
        Err(Error::Consistency(format!(
            "l_{k}: {what} (rank {rank}, size {n})"
        )))
    };

    let cokernel_representative = match cokernel_monomial(k) {
        None => {
            if rank != n {
                return mismatch("odd degree operator is not bijective");
            }
            None
        }
        Some(zm) => {
            if rank + 1 != n {
                return mismatch("expected a one-dimensional kernel");
            }
            let h = kernel_generator(k).unwrap();
            let hv: Vec<Rational> = coordinates(&h, &mat.basis)
                .iter()
                .map(|c| c.as_constant().unwrap_or_default())
                .collect();
            if !proportional(&kernel[0], &hv) {
                return mismatch("kernel is not spanned by h^(k/2)");
            }
            let zc = mat.basis.position(&zm).unwrap();
            let mut augmented = mat.integer_entries();
            for (r, row) in augmented.iter_mut().enumerate() {
                row.push(BigInt::from(u8::from(r == zc)));
            }
            if bareiss(augmented).rank() != n {
                return mismatch("z^(k/2) lies in the range");
            }
            Some(QHPolynomial::mono(0, 0, k / 2, int(1)))
        }
    };

    Ok(OperatorAnalysis {
        degree: k,
        rank,
        kernel_basis,
        cokernel_representative,
        echelon,
    })
}

static ANALYSES: LazyLock<DegreeCache<Result<Arc<OperatorAnalysis>>>> =
    LazyLock::new(DegreeCache::new);

/// Kernel and cokernel of `l_k`, checked against the expected structure.
/// Results are cached per degree.
pub fn analyze_operator(k: i64) -> Result<Arc<OperatorAnalysis>> {
    let k = check_degree(k)?;
    ANALYSES.get_or_build(k, || build_analysis(k).map(Arc::new))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologicalSolution {
    pub solution: QHPolynomial,
    /// Coefficient of `z^(k/2)` left outside the range; zero for odd `k`.
    pub residual: ParamPolynomial,
}

/// Mean of `x^i y^j` over the unit circle.
pub fn circle_average(i: u32, j: u32) -> Rational {
    if i % 2 == 1 || j % 2 == 1 {
        return Rational::zero();
    }
    let dfact = |n: u32| -> BigInt {
        let mut acc = BigInt::one();
        let mut t = n as i64;
        while t > 1 {
            acc *= t;
            t -= 2;
        }
        acc
    };
    let num = dfact(i.saturating_sub(1)) * dfact(j.saturating_sub(1));
    Rational::new(num, dfact(i + j))
}

/// Binary forms of degree `m` in the basis `x^(m-i) y^i`, `i = 0..=m`.
type Form = Vec<ParamPolynomial>;

fn form_average(f: &Form) -> ParamPolynomial {
    let m = f.len() as u32 - 1;
    let mut acc = ParamPolynomial::zero();
    for (i, c) in f.iter().enumerate() {
        if !c.is_zero() {
            let w = circle_average(m - i as u32, i as u32);
            if !w.is_zero() {
                acc.add_scaled(c, &w);
            }
        }
    }
    acc
}

/// `h * f`.
fn times_h(f: &Form) -> Form {
    let mut out = vec![ParamPolynomial::zero(); f.len() + 2];
    for (i, c) in f.iter().enumerate() {
        if !c.is_zero() {
            out[i] += c;
            out[i + 2] += c;
        }
    }
    out
}

/// `(h^(m/2))` as a form of degree `m`.
fn h_power_form(m: u32) -> Vec<Rational> {
    let n = m / 2;
    let mut out = vec![Rational::zero(); m as usize + 1];
    let mut binom = BigInt::one();
    for j in 0..=n {
        out[2 * j as usize] = Rational::from_integer(binom.clone());
        binom = binom * (n - j) / (j + 1);
    }
    out
}

/// Matrix `S` with `rot(S r) = r` and zero circle average of `S r`
/// whenever `r` has zero circle average.
fn build_rot_inverse(m: u32) -> Arc<Vec<Vec<Rational>>> {
    let n = m as usize + 1;
    // rot(x^(m-i) y^i) = -2(m-i) x^(m-i-1) y^(i+1) + 2i x^(m-i+1) y^(i-1)
    let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
    for i in 0..n {
        let a = (m as usize - i) as i64;
        if a > 0 {
            rows[i + 1].insert(i, int(-2 * a));
        }
        if i > 0 {
            rows[i - 1].insert(i, int(2 * i as i64));
        }
    }
    let even = m.is_multiple_of(2);
    let hp = h_power_form(m);
    let mut s = vec![vec![Rational::zero(); n]; n];
    for j in 0..n {
        // target e_j projected onto the zero-average part
        let mut target: Vec<Rational> = vec![Rational::zero(); n];
        target[j] = Rational::one();
        if even {
            let avg = circle_average(m - j as u32, j as u32);
            for (t, hv) in target.iter_mut().zip(&hp) {
                *t -= &avg * hv;
            }
        }
        let mut sys = SparseSystem::new(n);
        for (r, row) in rows.iter().enumerate() {
            sys.add_row(row.clone(), ParamPolynomial::constant(target[r].clone()));
        }
        if even {
            let avg_row: BTreeMap<usize, Rational> = (0..n)
                .map(|i| (i, circle_average(m - i as u32, i as u32)))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            sys.add_row(avg_row, ParamPolynomial::zero());
        }
        let order: Vec<usize> = (0..n).collect();
        let x = sys
            .solve(&order)
            .expect("rotation is invertible on zero-average forms");
        for (i, v) in x.into_iter().enumerate() {
            s[i][j] = v.as_constant().unwrap_or_default();
        }
    }
    Arc::new(s)
}

static ROT_INVERSES: LazyLock<DegreeCache<Arc<Vec<Vec<Rational>>>>> =
    LazyLock::new(DegreeCache::new);

fn rot_inverse(m: u32) -> Arc<Vec<Vec<Rational>>> {
    ROT_INVERSES.get_or_build(m, || build_rot_inverse(m))
}

fn apply(s: &[Vec<Rational>], f: &Form) -> Form {
    s.iter()
        .map(|row| {
            let mut acc = ParamPolynomial::zero();
            for (w, c) in row.iter().zip(f) {
                if !w.is_zero() && !c.is_zero() {
                    acc.add_scaled(c, w);
                }
            }
            acc
        })
        .collect()
}

fn require_slice(k: u32, rhs: &QHPolynomial) -> Result<()> {
    match rhs.offending_monomial(k) {
        Some(m) => Err(Error::NotQuasiHomogeneous {
            expected: k as i64,
            monomial: m.to_text(),
        }),
        None => Ok(()),
    }
}

/// Solves `l_k(S) + residual * z^(k/2) = rhs` with `S` free of `h^(k/2)`.
///
/// Writing `S = sum_l z^l p_l`, the equation at z-level `l` reads
/// `rot(p_l) + (l + 1) h p_(l+1) = r_l`, solved from the top level down.
/// For even `k` the circle average of each level fixes the `h`-power part of
/// the level above; the `h^(k/2)` part of `p_0` is set to zero.
pub fn solve_homological(k: i64, rhs: &QHPolynomial) -> Result<HomologicalSolution> {
    let k = check_degree(k)?;
    require_slice(k, rhs)?;
    let top = k / 2;
    let mut levels: Vec<Form> = (0..=top)
        .map(|l| vec![ParamPolynomial::zero(); (k - 2 * l) as usize + 1])
        .collect();
    for (m, c) in rhs.terms() {
        levels[m.ez as usize][m.ey as usize] = c.clone();
    }

    let even = k % 2 == 0;
    // p_l = q_l + c_l h^(m/2); q_l has zero circle average
    let mut q: Vec<Form> = vec![Vec::new(); top as usize + 1];
    let mut c: Vec<ParamPolynomial> = vec![ParamPolynomial::zero(); top as usize + 1];
    let mut residual = ParamPolynomial::zero();
    for l in (0..=top).rev() {
        let m = k - 2 * l;
        let mut target = std::mem::take(&mut levels[l as usize]);
        if l < top {
            let factor = -int(l as i64 + 1);
            for (t, v) in target.iter_mut().zip(times_h(&q[l as usize + 1])) {
                if !v.is_zero() {
                    t.add_scaled(&v, &factor);
                }
            }
            if even {
                c[l as usize + 1] = form_average(&target).scale(&int(l as i64 + 1).recip());
            }
        }
        if m == 0 {
            residual = target.pop().unwrap_or_default();
            q[l as usize] = vec![ParamPolynomial::zero()];
        } else {
            q[l as usize] = apply(&rot_inverse(m), &target);
        }
    }

    let mut solution = QHPolynomial::zero();
    for (l, form) in q.iter().enumerate() {
        let m = form.len() as u32 - 1;
        let mut form = form.clone();
        if !c[l].is_zero() {
            for (f, w) in form.iter_mut().zip(h_power_form(m)) {
                if !w.is_zero() {
                    f.add_scaled(&c[l], &w);
                }
            }
        }
        for (i, v) in form.into_iter().enumerate() {
            if !v.is_zero() {
                solution.add_term(Monomial3::new(m - i as u32, i as u32, l as u32), v);
            }
        }
    }
    Ok(HomologicalSolution { solution, residual })
}

/// Same contract as `solve_homological`, by elimination on the full slice.
pub fn solve_homological_dense(k: i64, rhs: &QHPolynomial) -> Result<HomologicalSolution> {
    let mat = lie_operator_matrix(k)?;
    let k = mat.degree;
    require_slice(k, rhs)?;
    let n = mat.size();
    let zc = cokernel_monomial(k).map(|m| mat.basis.position(&m).unwrap());
    let ncols = n + usize::from(zc.is_some());
    let b = coordinates(rhs, &mat.basis);
    let mut sys = SparseSystem::new(ncols);
    for (r, rhs_r) in b.into_iter().enumerate() {
        let mut row: BTreeMap<usize, Rational> = mat.entries[r]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        if zc == Some(r) {
            row.insert(n, Rational::one());
        }
        sys.add_row(row, rhs_r);
    }
    if zc.is_some() {
        let row: BTreeMap<usize, Rational> = mat
            .basis
            .monomials
            .iter()
            .enumerate()
            .filter(|(_, m)| m.ez == 0)
            .map(|(c, m)| (c, circle_average(m.ex, m.ey)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        sys.add_row(row, ParamPolynomial::zero());
    }
    let order: Vec<usize> = (0..ncols).collect();
    let x = sys.solve(&order).map_err(|e| {
        Error::Consistency(format!("dense solve of l_{k} failed at row {}", e.row))
    })?;
    let residual = if zc.is_some() {
        x[n].clone()
    } else {
        ParamPolynomial::zero()
    };
    Ok(HomologicalSolution {
        solution: from_coordinates(&x[..n], &mat.basis),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rational::rat;
    use crate::gradedpoly::Var;

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
    fn matrix_degree_one() {
        let m = lie_operator_matrix(1).unwrap();
        assert_eq!(m.basis.monomials, vec![Monomial3::new(1, 0, 0), Monomial3::new(0, 1, 0)]);
        assert_eq!(m.entries, vec![vec![int(0), int(2)], vec![int(-2), int(0)]]);
    }

    #[test]
    fn matrix_degree_two() {
        let m = lie_operator_matrix(2).unwrap();
        let image = |mono: &QHPolynomial| lie_operator(mono);
        assert_eq!(image(&x().pow(2)), (&x() * &y()).scale(&int(-4)));
        assert_eq!(image(&(&x() * &y())), (&x().pow(2) - &y().pow(2)).scale(&int(2)));
        assert_eq!(image(&y().pow(2)), (&x() * &y()).scale(&int(4)));
        assert_eq!(image(&z()), QHPolynomial::h());
        assert_eq!(m.size(), 4);
    }

    #[test]
    fn matrix_degree_zero() {
        let m = lie_operator_matrix(0).unwrap();
        assert_eq!(m.entries, vec![vec![int(0)]]);
        assert!(lie_operator_matrix(-1).is_err());
    }

    #[test]
    fn analysis_low_degrees() {
        let a = analyze_operator(2).unwrap();
        assert_eq!(a.kernel_basis.len(), 1);
        let kb = &a.kernel_basis[0];
        let ratio = kb.coefficient(&Monomial3::new(2, 0, 0));
        assert_eq!(kb, &QHPolynomial::h().scale_param(&ratio));
        assert_eq!(a.cokernel_representative, Some(z()));

        let a = analyze_operator(3).unwrap();
        assert!(a.kernel_basis.is_empty());
        assert!(a.cokernel_representative.is_none());

        let a = analyze_operator(0).unwrap();
        assert_eq!(a.kernel_basis, vec![QHPolynomial::one()]);
        assert_eq!(a.cokernel_representative, Some(QHPolynomial::one()));
    }

    #[test]
    fn cached_analysis_is_shared() {
        let a = analyze_operator(6).unwrap();
        let b = analyze_operator(6).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn solve_examples() {
        let c = ParamPolynomial::var(0);
        let s = solve_homological(2, &z().scale_param(&c)).unwrap();
        assert!(s.solution.is_zero());
        assert_eq!(s.residual, c);

        let s = solve_homological(2, &x().pow(2)).unwrap();
        assert_eq!(s.solution, &z().scale(&rat(1, 2)) + &(&x() * &y()).scale(&rat(1, 4)));
        assert!(s.residual.is_zero());

        let rhs = &x().pow(3) + &(&y() * &z());
        let s = solve_homological(3, &rhs).unwrap();
        assert!(s.residual.is_zero());
        assert_eq!(lie_operator(&s.solution), rhs);
    }

    #[test]
    fn wrong_degree_is_rejected() {
        assert!(matches!(
            solve_homological(3, &x().pow(2)),
            Err(Error::NotQuasiHomogeneous { .. })
        ));
    }

    #[test]
    fn circle_averages() {
        assert_eq!(circle_average(0, 0), int(1));
        assert_eq!(circle_average(2, 0), rat(1, 2));
        assert_eq!(circle_average(2, 2), rat(1, 8));
        assert_eq!(circle_average(4, 0), rat(3, 8));
        assert_eq!(circle_average(1, 1), int(0));
    }

    #[test]
    fn fast_and_dense_agree() {
        for k in 0..10i64 {
            let basis = slice_basis(k).unwrap();
            let mut rhs = QHPolynomial::zero();
            for (i, m) in basis.monomials.iter().enumerate() {
                let c = ParamPolynomial::constant(rat(i as i64 * 3 - 5, 2 + i as i64))
                    + ParamPolynomial::var(i % 2);
                rhs.add_term(*m, c);
            }
            let fast = solve_homological(k, &rhs).unwrap();
            let dense = solve_homological_dense(k, &rhs).unwrap();
            assert_eq!(fast, dense, "degree {k}");
        }
    }
}
