use num_traits::{One, Zero};

use crate::coeffring::rational::format_rational;
use crate::coeffring::{ParamTable, Rational};
use crate::error::{Error, Result};
use crate::gradedpoly::{Monomial3, QHPolynomial};
use crate::vectorfield::{rational_coefficient, VectorField3};

/// A field rescaled so that its principal part is exactly F0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub field: VectorField3,
    /// `t -> time_scale * t`.
    pub time_scale: Rational,
    /// `z -> z_scale * z'`.
    pub z_scale: Rational,
}

impl Normalized {
    pub fn is_identity(&self) -> bool {
        self.time_scale.is_one() && self.z_scale.is_one()
    }
}

const NAMES: [&str; 3] = ["dx", "dy", "dz"];

/// Rescales time and `z` so that a principal part `(-w y, w x, d (x^2+y^2))`
/// becomes `(-2y, 2x, x^2+y^2)`.
pub fn normalize_principal_part(f: &VectorField3, table: &ParamTable) -> Result<Normalized> {
    let mut bad: Vec<String> = Vec::new();
    let allowed = [
        vec![Monomial3::new(0, 1, 0)],
        vec![Monomial3::new(1, 0, 0)],
        vec![Monomial3::new(2, 0, 0), Monomial3::new(0, 2, 0)],
    ];
    let slice0 = f.component(0);
    for (i, comp) in f.components().into_iter().enumerate() {
        let top = if i == 2 { 2 } else { 1 };
        for (m, _) in comp.terms() {
            let d = m.degree() as i64 - top;
            if d < 0 || (d == 0 && !allowed[i].contains(m)) {
                bad.push(format!("{}: {}", NAMES[i], m.to_text()));
            }
        }
    }
    if !bad.is_empty() {
        return Err(Error::PrincipalPart(format!(
            "expected (-w*y, w*x, d*(x^2 + y^2)) as the lowest-degree part; offending monomials {}",
            bad.join(", ")
        )));
    }

    let coeff = |p: &QHPolynomial, m: Monomial3, name: &str| -> Result<Rational> {
        let c = p.coefficient(&m);
        let r = rational_coefficient(p, &m).ok_or_else(|| {
            Error::PrincipalPart(format!(
                "{name}: coefficient of {} must be a rational number, found {}",
                m.to_text(),
                c.to_canonical_string(table)
            ))
        })?;
        Ok(r)
    };
    let w = -coeff(&slice0.fx, Monomial3::new(0, 1, 0), "dx")?;
    let wy = coeff(&slice0.fy, Monomial3::new(1, 0, 0), "dy")?;
    let dx2 = coeff(&slice0.fz, Monomial3::new(2, 0, 0), "dz")?;
    let dy2 = coeff(&slice0.fz, Monomial3::new(0, 2, 0), "dz")?;
    if w.is_zero() || w != wy {
        return Err(Error::PrincipalPart(format!(
            "linear part must be a rotation (-w*y, w*x) with w != 0; found dx: {}*y, dy: {}*x",
            format_rational(&-w),
            format_rational(&wy)
        )));
    }
    if dx2.is_zero() || dx2 != dy2 {
        return Err(Error::PrincipalPart(format!(
            "dz must start with d*(x^2 + y^2), d != 0; found {}*x^2 + {}*y^2",
            format_rational(&dx2),
            format_rational(&dy2)
        )));
    }

    let time_scale = Rational::from_integer(2.into()) / &w;
    let z_scale = &dx2 * &time_scale;
    let g = f.scale(&time_scale);
    let one = Rational::one();
    let field = VectorField3::new(
        g.fx.rescale_variables(&one, &one, &z_scale),
        g.fy.rescale_variables(&one, &one, &z_scale),
        g.fz.rescale_variables(&one, &one, &z_scale).scale(&z_scale.recip()),
    );
    if field.component(0) != VectorField3::principal() {
        return Err(Error::Consistency("normalized principal part differs from F0".into()));
    }
    Ok(Normalized {
        field,
        time_scale,
        z_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rational::{int, rat};
    use crate::frontend::parse_system;

    fn norm(text: &str) -> Result<Normalized> {
        let s = parse_system(text).unwrap();
        normalize_principal_part(&s.to_field(), &s.params)
    }

    #[test]
    fn identity_when_already_normal() {
        let n = norm("dx = -2*y + z\ndy = 2*x\ndz = x^2 + y^2").unwrap();
        assert!(n.is_identity());
    }

    #[test]
    fn unit_rotation() {
        let n = norm("dx = -y + x*z\ndy = x\ndz = x^2 + y^2 + z^2").unwrap();
        assert_eq!((n.time_scale.clone(), n.z_scale.clone()), (int(2), int(2)));
        assert_eq!(n.field.component(0), VectorField3::principal());
        // x z -> 2 * (2 x z'), z^2 -> 2 * 4 z'^2 / 2
        assert_eq!(n.field.fx.coefficient(&Monomial3::new(1, 0, 1)).as_constant(), Some(int(4)));
        assert_eq!(n.field.fz.coefficient(&Monomial3::new(0, 0, 2)).as_constant(), Some(int(4)));
    }

    #[test]
    fn general_scales() {
        let n = norm("dx = -3*y\ndy = 3*x\ndz = 1/2*x^2 + 1/2*y^2").unwrap();
        assert_eq!(n.time_scale, rat(2, 3));
        assert_eq!(n.z_scale, rat(1, 3));
        assert_eq!(n.field, VectorField3::principal());
    }

    #[test]
    fn rejects_cross_term() {
        let e = norm("dx = -2*y\ndy = 2*x\ndz = x^2 + 2*x*y + y^2").unwrap_err();
        assert!(e.to_string().contains("dz: x*y"), "{e}");
        let e = norm("dx = -2*y + x\ndy = 2*x\ndz = x^2 + y^2").unwrap_err();
        assert!(e.to_string().contains("dx: x"), "{e}");
        assert!(norm("dx = -2*y\ndy = 2*x\ndz = z").is_err());
        assert!(norm("dx = -2*y\ndy = 2*x\ndz = x^2").is_err());
        assert!(norm("params a\ndx = -a*y\ndy = a*x\ndz = x^2 + y^2").is_err());
    }

    #[test]
    fn undoes_scaling_conjugation() {
        let s = parse_system("dx = -2*y + x*z\ndy = 2*x + y^2\ndz = x^2 + y^2 + x^3").unwrap();
        let f = s.to_field();
        let g = f.scaling_conjugate(&rat(3, 2), &rat(5, 7));
        let n = normalize_principal_part(&g, &s.params).unwrap();
        assert_eq!(n.time_scale, rat(7, 5));
        assert!(n.z_scale.is_one());
        assert_eq!(n.field.component(0), VectorField3::principal());
        assert_eq!(n.field, f.scaling_conjugate(&rat(3, 2), &int(1)));
    }
}
