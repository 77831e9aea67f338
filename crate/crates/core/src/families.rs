//! Built-in curves and Galois-point groups.
//!
//! * `fermat`: `X^{q+1} + Y^{q+1} + Z^{q+1} = 0` over `F_{q^2}`, with the
//!   cyclic groups scaling `X` and `Y` by `(q+1)`-th roots of unity.
//! * `projline`: the projective line over `F_q` (`q` odd, `q >= 5`), with
//!   `s -> ζ s` and `s -> ζ s + (1 - ζ) t`, `ζ` of order `(q-1)/2`.
//! * `bf`: `(x^{q^2} + x)^{q+1} + (y^{q^2} + y)^{q+1} + 1 = 0` homogenized,
//!   over `F_{q^4}`, with the affine groups `x -> λx + μ` and `y -> λy + μ`,
//!   `λ^{q+1} = 1`, `μ^{q^2} + μ = 0`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::autgroup::{preserves_curve, GroupError, ProjMap};
use crate::geometry::{Form, GeometryError, PlaneCurve};
use crate::gf::{prime_power, FieldError, FieldSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Fermat,
    ProjLine,
    Bf,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}` (expected fermat, projline or bf)")]
    Unknown(String),
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("projline needs q odd and q >= 5, got q = {0}")]
    ProjLineParameter(u64),
    #[error("family {family} with q = {q} works over a field of order {expected}, got {found}")]
    WrongField {
        family: Family,
        q: u64,
        expected: u64,
        found: u64,
    },
    #[error("candidate generator {0:?} does not preserve the curve")]
    Uncertified(ProjMap),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T> = std::result::Result<T, FamilyError>;

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Fermat => "fermat",
            Family::ProjLine => "projline",
            Family::Bf => "bf",
        }
    }

    /// Checks `q` and returns `(p, r)` with `q = p^r`.
    pub fn check_q(self, q: u64) -> Result<(u64, u32)> {
        let (p, r) = prime_power(q).ok_or(FamilyError::NotPrimePower(q))?;
        if self == Family::ProjLine && (p == 2 || q < 5) {
            return Err(FamilyError::ProjLineParameter(q));
        }
        Ok((p, r))
    }

    /// Extension degree of the working field over `F_q`.
    pub fn field_power(self) -> u32 {
        match self {
            Family::Fermat => 2,
            Family::ProjLine => 1,
            Family::Bf => 4,
        }
    }

    pub fn field(self, q: u64) -> Result<FieldSpec> {
        let (p, r) = self.check_q(q)?;
        Ok(FieldSpec::new(p, r * self.field_power())?)
    }

    pub fn curve(self, q: u64, field: &FieldSpec) -> Result<PlaneCurve> {
        self.check_field(q, field)?;
        let q32 = q as u32;
        let curve = match self {
            Family::ProjLine => PlaneCurve::projective_line(field),
            Family::Fermat => {
                let eq = (0..3)
                    .map(|i| Form::variable(field, 3, i).pow(q32 + 1))
                    .fold(Form::zero(field, 3), |acc, t| acc.add(&t));
                PlaneCurve::plane(eq)?
            }
            Family::Bf => {
                let z = Form::variable(field, 3, 2);
                let q2 = q32 * q32;
                let trace = |i: usize| {
                    let v = Form::variable(field, 3, i);
                    v.pow(q2).add(&v.mul(&z.pow(q2 - 1))).pow(q32 + 1)
                };
                PlaneCurve::plane(trace(0).add(&trace(1)).add(&z.pow(q2 * (q32 + 1))))?
            }
        };
        Ok(curve)
    }

    fn check_field(self, q: u64, field: &FieldSpec) -> Result<()> {
        self.check_q(q)?;
        let expected = q.pow(self.field_power());
        if field.order() != expected {
            return Err(FamilyError::WrongField {
                family: self,
                q,
                expected,
                found: field.order(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fermat" => Ok(Family::Fermat),
            "projline" => Ok(Family::ProjLine),
            "bf" => Ok(Family::Bf),
            other => Err(FamilyError::Unknown(other.to_string())),
        }
    }
}

/// Generator lists for the two Galois-point groups of a family.
pub fn builtin_generators(
    family: Family,
    q: u64,
    field: &FieldSpec,
) -> Result<(Vec<ProjMap>, Vec<ProjMap>)> {
    family.check_field(q, field)?;
    let (o, l) = (field.zero(), field.one());
    match family {
        Family::Fermat => {
            let z = field.root_of_unity(q + 1)?;
            let g1 = ProjMap::diagonal(&[z.clone(), l.clone(), l.clone()])?;
            let g2 = ProjMap::diagonal(&[l.clone(), z, l])?;
            Ok((vec![g1], vec![g2]))
        }
        Family::ProjLine => {
            let z = field.root_of_unity((q - 1) / 2)?;
            let g1 = ProjMap::new(vec![vec![z.clone(), o.clone()], vec![o.clone(), l.clone()]])?;
            let g2 = ProjMap::new(vec![vec![z.clone(), &l - &z], vec![o, l]])?;
            Ok((vec![g1], vec![g2]))
        }
        Family::Bf => {
            let curve = family.curve(q, field)?;
            let lambda = field.root_of_unity(q + 1)?;
            let shifts: Vec<_> = field
                .elements()
                .skip(1)
                .filter(|c| (&c.pow(q * q) + c).is_zero())
                .collect();
            // affine map acting on coordinate `axis` (0 = x, 1 = y)
            let affine =
                |axis: usize, scale: &crate::gf::FieldElement, shift: &crate::gf::FieldElement| {
                    let mut rows = vec![vec![o.clone(); 3]; 3];
                    for (i, row) in rows.iter_mut().enumerate() {
                        row[i] = l.clone();
                    }
                    rows[axis][axis] = scale.clone();
                    rows[axis][2] = shift.clone();
                    ProjMap::new(rows)
                };
            let mut lists = Vec::new();
            for axis in 0..2 {
                let mut gens = vec![affine(axis, &lambda, &o)?];
                for c in &shifts {
                    gens.push(affine(axis, &l, c)?);
                }
                for g in &gens {
                    if !preserves_curve(g, &curve)? {
                        return Err(FamilyError::Uncertified(g.clone()));
                    }
                }
                lists.push(gens);
            }
            let g2 = lists.pop().unwrap();
            Ok((lists.pop().unwrap(), g2))
        }
    }
}
