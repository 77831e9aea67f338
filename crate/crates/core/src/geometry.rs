//! Projective points, homogeneous forms, and plane curves.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::gf::{Embedding, FieldElement, FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("all coordinates are zero")]
    ZeroPoint,
    #[error("projective space must have 2 or 3 homogeneous coordinates, got {0}")]
    UnsupportedAmbient(usize),
    #[error("terms of a curve equation must share one total degree")]
    NotHomogeneous,
    #[error("a plane curve needs a nonzero equation of positive degree")]
    DegenerateEquation,
    #[error("the projective line carries no equation")]
    LineWithEquation,
    #[error("coordinates live in different fields")]
    MixedFields,
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// A homogeneous (or not yet checked) polynomial in `nvars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl Form {
    pub fn zero(field: &FieldSpec, nvars: usize) -> Self {
        Form {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElement, nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<u32>, c: FieldElement) -> Self {
        let mut f = Form::zero(c.field(), exps.len());
        if !c.is_zero() {
            f.terms.insert(exps, c);
        }
        f
    }

    pub fn variable(field: &FieldSpec, nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self::monomial(exps, field.one())
    }

    /// Builds a form from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        field: &FieldSpec,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self> {
        let mut f = Form::zero(field, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(GeometryError::DimensionMismatch {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            if c.field() != field {
                return Err(GeometryError::Field(FieldError::FieldMismatch));
            }
            f.add_term(exps, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: FieldElement) {
        let sum = match self.terms.remove(&exps) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(exps, sum);
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Option<&FieldElement> {
        self.terms.get(exps)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common total degree, or `None` for the zero form or a mixed-degree one.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, other: &Form) -> Form {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Form {
        let mut out = Form::zero(&self.field, self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Form) -> Form {
        let mut out = Form::zero(&self.field, self.nvars);
        for (ea, a) in &self.terms {
            for (eb, b) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, a * b);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Form {
        let mut acc = Form::constant(self.field.one(), self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(GeometryError::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t.checked_mul(&x.pow(k as u64))?;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// `F(L_0, .., L_{n-1})` for forms `L_i`.
    pub fn substitute(&self, images: &[Form]) -> Result<Form> {
        if images.len() != self.nvars {
            return Err(GeometryError::DimensionMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let nv = images[0].nvars;
        let mut out = Form::zero(&self.field, nv);
        // powers of each image are reused across terms
        let mut powers: Vec<BTreeMap<u32, Form>> = vec![BTreeMap::new(); self.nvars];
        for (e, c) in &self.terms {
            let mut t = Form::constant(c.clone(), nv);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers[i]
                    .entry(k)
                    .or_insert_with(|| images[i].pow(k))
                    .clone();
                t = t.mul(&pw);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Coefficients pushed through a field embedding.
    pub fn embed(&self, emb: &Embedding) -> Result<Form> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.clone(), emb.apply(c)?)))
            .collect::<std::result::Result<Vec<_>, FieldError>>()?;
        Form::from_terms(emb.to(), self.nvars, terms)
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{}*{:?}", c, e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A point of `P^1` or `P^2`, normalized so the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    pub fn new(coords: Vec<FieldElement>) -> Result<Self> {
        if !(2..=3).contains(&coords.len()) {
            return Err(GeometryError::UnsupportedAmbient(coords.len()));
        }
        let field = coords[0].field().clone();
        if coords.iter().any(|c| *c.field() != field) {
            return Err(GeometryError::MixedFields);
        }
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(GeometryError::ZeroPoint)?;
        let scale = lead.inv()?;
        let coords = coords.iter().map(|c| c * &scale).collect();
        Ok(ProjPoint { coords })
    }

    pub fn from_encodings(field: &FieldSpec, enc: &[u64]) -> Result<Self> {
        let coords = enc
            .iter()
            .map(|&e| field.decode(e))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(coords)
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> &FieldSpec {
        self.coords[0].field()
    }

    pub fn enc(&self) -> Vec<u64> {
        self.coords.iter().map(FieldElement::enc).collect()
    }

    /// Whether the point lies on the hyperplane "last coordinate = 0".
    pub fn at_infinity(&self) -> bool {
        self.coords.last().unwrap().is_zero()
    }

    /// Coordinate-wise `a -> a^sub_order`.
    pub fn frobenius(&self, sub_order: u64) -> Result<ProjPoint> {
        let field = self.field().clone();
        let coords = self
            .coords
            .iter()
            .map(|c| field.frobenius(sub_order, c))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ProjPoint::new(coords)
    }

    /// Rational over the subfield of order `sub_order`.
    pub fn is_rational_over(&self, sub_order: u64) -> Result<bool> {
        Ok(self.frobenius(sub_order)? == *self)
    }

    pub fn embed(&self, emb: &Embedding) -> Result<ProjPoint> {
        let coords = self
            .coords
            .iter()
            .map(|c| emb.apply(c))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ProjPoint::new(coords)
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.enc().cmp(&other.enc())
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.enc().to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// All points of `P^{nvars-1}(field)` in canonical order.
pub fn projective_space(field: &FieldSpec, nvars: usize) -> Result<Vec<ProjPoint>> {
    if !(2..=3).contains(&nvars) {
        return Err(GeometryError::UnsupportedAmbient(nvars));
    }
    let q = field.order();
    let mut out = Vec::new();
    for lead in 0..nvars {
        let free = nvars - lead - 1;
        for idx in 0..q.pow(free as u32) {
            let mut coords = vec![field.zero(); nvars];
            coords[lead] = field.one();
            let mut rest = idx;
            for slot in (lead + 1..nvars).rev() {
                coords[slot] = field.decode(rest % q)?;
                rest /= q;
            }
            out.push(ProjPoint { coords });
        }
    }
    out.sort();
    Ok(out)
}

/// A plane curve `F = 0` in `P^2`, or the whole projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    equation: Form,
}

impl PlaneCurve {
    pub fn projective_line(field: &FieldSpec) -> Self {
        PlaneCurve {
            equation: Form::zero(field, 2),
        }
    }

    pub fn plane(equation: Form) -> Result<Self> {
        if equation.nvars() != 3 {
            return Err(GeometryError::UnsupportedAmbient(equation.nvars()));
        }
        if equation.is_zero() {
            return Err(GeometryError::DegenerateEquation);
        }
        match equation.degree() {
            None => Err(GeometryError::NotHomogeneous),
            Some(0) => Err(GeometryError::DegenerateEquation),
            Some(_) => Ok(PlaneCurve { equation }),
        }
    }

    /// Dispatches on the number of variables; a line must come without terms.
    pub fn new(equation: Form) -> Result<Self> {
        match equation.nvars() {
            2 if equation.is_zero() => Ok(PlaneCurve { equation }),
            2 => Err(GeometryError::LineWithEquation),
            _ => Self::plane(equation),
        }
    }

    pub fn equation(&self) -> &Form {
        &self.equation
    }

    pub fn field(&self) -> &FieldSpec {
        self.equation.field()
    }

    /// Number of homogeneous coordinates (2 for the line, 3 for the plane).
    pub fn nvars(&self) -> usize {
        self.equation.nvars()
    }

    pub fn is_line(&self) -> bool {
        self.nvars() == 2
    }

    /// Degree of the equation; 0 for the projective line.
    pub fn degree(&self) -> u32 {
        self.equation.degree().unwrap_or(0)
    }

    pub fn contains(&self, pt: &ProjPoint) -> Result<bool> {
        if pt.dim() != self.nvars() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.nvars(),
                found: pt.dim(),
            });
        }
        if self.is_line() {
            return Ok(true);
        }
        let eq = self.over(pt.field())?;
        Ok(eq.equation.eval(pt.coords())?.is_zero())
    }

    /// The same curve with coefficients moved into an extension field.
    pub fn over(&self, field: &FieldSpec) -> Result<PlaneCurve> {
        if field == self.field() {
            return Ok(self.clone());
        }
        let emb = Embedding::new(self.field(), field)?;
        Ok(PlaneCurve {
            equation: self.equation.embed(&emb)?,
        })
    }

    /// Rational points over `field` in canonical order.
    pub fn enumerate_points(&self, field: &FieldSpec) -> Result<Vec<ProjPoint>> {
        let curve = self.over(field)?;
        let mut out = Vec::new();
        for pt in projective_space(field, self.nvars())? {
            if curve.is_line() || curve.equation.eval(pt.coords())?.is_zero() {
                out.push(pt);
            }
        }
        Ok(out)
    }

    /// Rational points on the line `Z = 0`.
    pub fn line_section_points(&self, field: &FieldSpec) -> Result<Vec<ProjPoint>> {
        if self.is_line() {
            return Err(GeometryError::UnsupportedAmbient(2));
        }
        Ok(self
            .enumerate_points(field)?
            .into_iter()
            .filter(ProjPoint::at_infinity)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldSpec {
        FieldSpec::new(3, 2).unwrap()
    }

    #[test]
    fn normalization_uses_first_nonzero_coordinate() {
        let f = f9();
        let p = ProjPoint::new(vec![f.zero(), f.from_int(2), f.generator()]).unwrap();
        assert_eq!(p.coords()[0], f.zero());
        assert!(p.coords()[1].is_one());
        let again = ProjPoint::new(p.coords().to_vec()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn zero_point_rejected() {
        let f = f9();
        assert_eq!(
            ProjPoint::new(vec![f.zero(), f.zero()]).unwrap_err(),
            GeometryError::ZeroPoint
        );
        assert!(matches!(
            ProjPoint::new(vec![f.one()]),
            Err(GeometryError::UnsupportedAmbient(1))
        ));
    }

    #[test]
    fn projective_space_sizes() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(projective_space(&f5, 2).unwrap().len(), 6);
        assert_eq!(projective_space(&f9(), 3).unwrap().len(), 91);
    }

    #[test]
    fn curve_validation() {
        let f = f9();
        let x = Form::variable(&f, 3, 0);
        let y = Form::variable(&f, 3, 1);
        assert_eq!(
            PlaneCurve::plane(x.add(&y.pow(2))).unwrap_err(),
            GeometryError::NotHomogeneous
        );
        assert_eq!(
            PlaneCurve::plane(Form::constant(f.one(), 3)).unwrap_err(),
            GeometryError::DegenerateEquation
        );
        assert_eq!(
            PlaneCurve::new(Form::variable(&f, 2, 0)).unwrap_err(),
            GeometryError::LineWithEquation
        );
    }

    #[test]
    fn point_not_on_curve() {
        let f = f9();
        // X + Z = 0 at (0:0:1) evaluates to 1
        let c = PlaneCurve::plane(Form::variable(&f, 3, 0).add(&Form::variable(&f, 3, 2))).unwrap();
        let pt = ProjPoint::new(vec![f.zero(), f.zero(), f.one()]).unwrap();
        assert!(!c.contains(&pt).unwrap());
        let line_pt = ProjPoint::new(vec![f.one(), f.zero()]).unwrap();
        assert!(PlaneCurve::projective_line(&f).contains(&line_pt).unwrap());
        assert!(matches!(
            c.contains(&line_pt),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn substitution_of_identity_is_identity() {
        let f = f9();
        let vars: Vec<Form> = (0..3).map(|i| Form::variable(&f, 3, i)).collect();
        let g = vars[0].pow(4).add(&vars[1].pow(4)).add(&vars[2].pow(4));
        assert_eq!(g.substitute(&vars).unwrap(), g);
    }
}
