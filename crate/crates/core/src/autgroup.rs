//! Projective-linear maps modulo scalars and the finite groups they generate.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::geometry::{Form, GeometryError, PlaneCurve, ProjPoint};
use crate::gf::{FieldElement, FieldError, FieldSpec};

/// Default bound on the size of a generated group.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("matrix must be square of size 2 or 3, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("generated group exceeds the cap of {0} elements")]
    CapExceeded(usize),
    #[error("no generators given")]
    NoGenerators,
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// An element of `PGL_2` or `PGL_3`, stored with its first nonzero entry
/// (row-major) equal to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjMap {
    dim: usize,
    entries: Vec<FieldElement>,
}

impl ProjMap {
    pub fn new(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let dim = rows.len();
        if !(2..=3).contains(&dim) || rows.iter().any(|r| r.len() != dim) {
            return Err(GroupError::BadShape {
                rows: dim,
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        let entries: Vec<FieldElement> = rows.into_iter().flatten().collect();
        let field = entries[0].field().clone();
        if entries.iter().any(|e| *e.field() != field) {
            return Err(FieldError::FieldMismatch.into());
        }
        Self::from_entries(dim, entries)
    }

    fn from_entries(dim: usize, entries: Vec<FieldElement>) -> Result<Self> {
        let m = ProjMap { dim, entries };
        if m.determinant().is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(m.normalized())
    }

    /// Row-major encodings, as stored in files.
    pub fn from_encodings(field: &FieldSpec, dim: usize, enc: &[u64]) -> Result<Self> {
        if enc.len() != dim * dim {
            return Err(GroupError::BadShape {
                rows: dim,
                cols: enc.len() / dim.max(1),
            });
        }
        let entries = enc
            .iter()
            .map(|&e| field.decode(e))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let rows = entries.chunks(dim).map(<[FieldElement]>::to_vec).collect();
        Self::new(rows)
    }

    pub fn identity(field: &FieldSpec, dim: usize) -> Self {
        Self::diagonal(&vec![field.one(); dim]).expect("identity is invertible")
    }

    pub fn diagonal(diag: &[FieldElement]) -> Result<Self> {
        let field = diag[0].field();
        let rows = (0..diag.len())
            .map(|i| {
                (0..diag.len())
                    .map(|j| {
                        if i == j {
                            diag[i].clone()
                        } else {
                            field.zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(rows)
    }

    fn normalized(mut self) -> Self {
        let lead = self
            .entries
            .iter()
            .find(|e| !e.is_zero())
            .expect("invertible")
            .clone();
        if !lead.is_one() {
            let s = lead.inv().expect("nonzero");
            for e in &mut self.entries {
                *e = &*e * &s;
            }
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &FieldSpec {
        self.entries[0].field()
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        self.entries
            .chunks(self.dim)
            .map(<[FieldElement]>::to_vec)
            .collect()
    }

    pub fn enc(&self) -> Vec<u64> {
        self.entries.iter().map(FieldElement::enc).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.entry(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn determinant(&self) -> FieldElement {
        let e = |i, j| self.entry(i, j);
        if self.dim == 2 {
            e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0)
        } else {
            let minor =
                |a: usize, b: usize, c: usize, d: usize| e(1, a) * e(2, b) - e(1, c) * e(2, d);
            e(0, 0) * minor(1, 2, 2, 1) - e(0, 1) * minor(0, 2, 2, 0) + e(0, 2) * minor(0, 1, 1, 0)
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ProjMap) -> Result<ProjMap> {
        if self.dim != other.dim {
            return Err(GroupError::DimensionMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.field().zero();
                for k in 0..n {
                    acc = &acc + &self.entry(i, k).checked_mul(other.entry(k, j))?;
                }
                entries.push(acc);
            }
        }
        Self::from_entries(n, entries)
    }

    /// Adjugate, which is a scalar multiple of the inverse.
    pub fn inverse(&self) -> ProjMap {
        let n = self.dim;
        let e = |i: usize, j: usize| self.entry(i, j).clone();
        let entries = if n == 2 {
            vec![e(1, 1), -e(0, 1), -e(1, 0), e(0, 0)]
        } else {
            let mut out = Vec::with_capacity(9);
            for i in 0..3 {
                for j in 0..3 {
                    // cofactor of (j, i)
                    let r: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                    let c: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                    let m = e(r[0], c[0]) * e(r[1], c[1]) - e(r[0], c[1]) * e(r[1], c[0]);
                    out.push(if (i + j) % 2 == 0 { m } else { -m });
                }
            }
            out
        };
        Self::from_entries(n, entries).expect("inverse of an invertible map")
    }

    pub fn apply(&self, pt: &ProjPoint) -> Result<ProjPoint> {
        if pt.dim() != self.dim {
            return Err(GroupError::DimensionMismatch(self.dim, pt.dim()));
        }
        let v = pt.coords();
        let mut out = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut acc = v[0].field().zero();
            for (j, x) in v.iter().enumerate() {
                acc = &acc + &self.entry(i, j).checked_mul(x)?;
            }
            out.push(acc);
        }
        Ok(ProjPoint::new(out)?)
    }

    /// The substitution `x_i -> sum_j m_ij x_j` as linear forms.
    fn linear_forms(&self) -> Vec<Form> {
        let field = self.field();
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(Form::zero(field, self.dim), |acc, j| {
                    acc.add(&Form::variable(field, self.dim, j).scale(self.entry(i, j)))
                })
            })
            .collect()
    }

    /// Pullback `F(M x)` of a form.
    pub fn pullback(&self, form: &Form) -> Result<Form> {
        if form.nvars() != self.dim {
            return Err(GroupError::DimensionMismatch(self.dim, form.nvars()));
        }
        Ok(form.substitute(&self.linear_forms())?)
    }
}

impl PartialOrd for ProjMap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjMap {
    fn cmp(&self, other: &Self) -> Ordering {
        self.enc().cmp(&other.enc())
    }
}

impl fmt::Debug for ProjMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjMap{:?}", self.enc())
    }
}

/// True iff `F(M x) = c F(x)` for a nonzero scalar `c`.
pub fn preserves_curve(m: &ProjMap, curve: &PlaneCurve) -> Result<bool> {
    if m.dim() != curve.nvars() {
        return Err(GroupError::DimensionMismatch(m.dim(), curve.nvars()));
    }
    let eq = curve.over(m.field())?;
    let eq = eq.equation();
    if eq.is_zero() {
        return Ok(true);
    }
    let pulled = m.pullback(eq)?;
    let (exps, lead) = eq.terms().next().expect("nonzero equation");
    let scalar = match pulled.coefficient(exps) {
        Some(c) => c.checked_div(lead)?,
        None => return Ok(false),
    };
    Ok(pulled == eq.scale(&scalar))
}

/// A finite group of projective maps, stored as its full element list.
#[derive(Clone)]
pub struct AutGroup {
    label: String,
    generators: Vec<ProjMap>,
    elements: Vec<ProjMap>,
    index: HashMap<Vec<u64>, usize>,
}

impl AutGroup {
    /// Breadth-first closure of `generators` under composition. Elements
    /// appear layer by layer, each layer sorted by matrix encoding.
    pub fn close(label: impl Into<String>, generators: Vec<ProjMap>, cap: usize) -> Result<Self> {
        let first = generators.first().ok_or(GroupError::NoGenerators)?;
        let (field, dim) = (first.field().clone(), first.dim());
        for g in &generators {
            if g.dim() != dim {
                return Err(GroupError::DimensionMismatch(dim, g.dim()));
            }
            if *g.field() != field {
                return Err(FieldError::FieldMismatch.into());
            }
        }
        let id = ProjMap::identity(&field, dim);
        let mut group = AutGroup {
            label: label.into(),
            generators,
            elements: Vec::new(),
            index: HashMap::new(),
        };
        group.push(id);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut fresh: BTreeMap<Vec<u64>, ProjMap> = BTreeMap::new();
            for &i in &layer {
                for g in &group.generators {
                    let h = g.compose(&group.elements[i])?;
                    let key = h.enc();
                    if !group.index.contains_key(&key) {
                        fresh.entry(key).or_insert(h);
                    }
                }
            }
            layer.clear();
            for (_, h) in fresh {
                if group.elements.len() == cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                layer.push(group.elements.len());
                group.push(h);
            }
        }
        Ok(group)
    }

    /// The group generated by the union of the given groups' generators.
    pub fn join(label: impl Into<String>, groups: &[&AutGroup], cap: usize) -> Result<Self> {
        let gens = groups
            .iter()
            .flat_map(|g| g.generators.iter().cloned())
            .collect();
        Self::close(label, gens, cap)
    }

    fn push(&mut self, m: ProjMap) {
        self.index.insert(m.enc(), self.elements.len());
        self.elements.push(m);
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[ProjMap] {
        &self.generators
    }

    /// Elements in closure order; the identity comes first.
    pub fn elements(&self) -> &[ProjMap] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn field(&self) -> &FieldSpec {
        self.elements[0].field()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn contains(&self, m: &ProjMap) -> bool {
        self.index.contains_key(&m.enc())
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Duplicate-free orbit in canonical point order.
    pub fn orbit(&self, pt: &ProjPoint) -> Result<Vec<ProjPoint>> {
        Ok(self.orbit_multiset(pt)?.into_keys().collect())
    }

    /// `sum_{g in G} g(pt)` as a point -> multiplicity map.
    pub fn orbit_multiset(&self, pt: &ProjPoint) -> Result<BTreeMap<ProjPoint, u32>> {
        let mut out = BTreeMap::new();
        for g in &self.elements {
            *out.entry(g.apply(pt)?).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn intersect(&self, other: &AutGroup) -> Result<AutGroup> {
        if self.field() != other.field() {
            return Err(FieldError::FieldMismatch.into());
        }
        if self.dim() != other.dim() {
            return Err(GroupError::DimensionMismatch(self.dim(), other.dim()));
        }
        let mut group = AutGroup {
            label: format!("{} ∩ {}", self.label, other.label),
            generators: Vec::new(),
            elements: Vec::new(),
            index: HashMap::new(),
        };
        for m in self.elements.iter().filter(|m| other.contains(m)) {
            group.push(m.clone());
        }
        group.generators = group.elements[1..].to_vec();
        Ok(group)
    }

    /// Closure under composition and inverses, checked on every pair.
    pub fn verify_closed(&self) -> Result<bool> {
        for a in &self.elements {
            if !self.contains(&a.inverse()) {
                return Ok(false);
            }
            for b in &self.elements {
                if !self.contains(&a.compose(b)?) {
                    return Ok(false);
                }
            }
        }
        Ok(self.elements[0].is_identity() && self.generators.iter().all(|g| self.contains(g)))
    }
}

impl fmt::Debug for AutGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AutGroup({}, order {})", self.label, self.order())
    }
}
