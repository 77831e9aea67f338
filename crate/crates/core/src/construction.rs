//! Checks the hypotheses on `(G1, G2, Q, Q')`, builds the divisor
//! `D = sum_{σ in G1} σ(Q)` and the evaluation set `S = <G1, G2> Q'`, and
//! assembles the generator matrix of the evaluation code.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{self, AnalysisError, EvalCode};
use crate::autgroup::{preserves_curve, AutGroup, GroupError, ProjMap, DEFAULT_CLOSURE_CAP};
use crate::families::{builtin_generators, Family, FamilyError};
use crate::geometry::{Form, GeometryError, PlaneCurve, ProjPoint};
use crate::gf::{Embedding, FieldElement, FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("at least two groups are required, got {0}")]
    TooFewGroups(usize),
    #[error("groups, curve and points must share one working field and dimension")]
    Inconsistent,
    #[error("{0} does not lie on the curve")]
    NotOnCurve(&'static str),
    #[error("{family} with q = {q}: no point Q' with all coordinates nonzero exists")]
    NoValidQPrime { family: Family, q: u64 },
    #[error("multiplier must be at least 1")]
    ZeroMultiplier,
    #[error("condition {}: {}", .0.condition, .0.detail)]
    ConditionFailed(Check),
    #[error("cannot synthesize an evaluation basis: {0}")]
    UnsupportedBasis(String),
    #[error("evaluation of function {row} at point {col} leaves the ground field")]
    NotGroundValued { row: usize, col: usize },
}

pub type Result<T> = std::result::Result<T, ConstructionError>;

/// Outcome of one verified hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub condition: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u64>>,
}

impl Check {
    fn new(condition: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            condition: condition.to_string(),
            passed,
            detail: detail.into(),
            witness: None,
        }
    }

    fn with_witness(mut self, w: Vec<u64>) -> Self {
        self.witness = Some(w);
        self
    }

    fn into_result(self) -> Result<Check> {
        if self.passed {
            Ok(self)
        } else {
            Err(ConstructionError::ConditionFailed(self))
        }
    }
}

/// A finite formal sum of points with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    support: BTreeMap<ProjPoint, u32>,
    field_of_definition: FieldSpec,
    ground_rational: bool,
}

impl Divisor {
    /// `ground_rational` is computed from Frobenius invariance over `ground`.
    pub fn new(support: BTreeMap<ProjPoint, u32>, ground: &FieldSpec) -> Result<Self> {
        let support: BTreeMap<_, _> = support.into_iter().filter(|(_, m)| *m > 0).collect();
        let mut d = Divisor {
            support,
            field_of_definition: ground.clone(),
            ground_rational: true,
        };
        d.ground_rational = d.is_rational_over(ground.order())?;
        Ok(d)
    }

    pub fn support(&self) -> &BTreeMap<ProjPoint, u32> {
        &self.support
    }

    pub fn field_of_definition(&self) -> &FieldSpec {
        &self.field_of_definition
    }

    pub fn ground_rational(&self) -> bool {
        self.ground_rational
    }

    pub fn degree(&self) -> u32 {
        self.support.values().sum()
    }

    pub fn multiplicity(&self, pt: &ProjPoint) -> u32 {
        self.support.get(pt).copied().unwrap_or(0)
    }

    /// Largest `e` with `D = e D_0`, `D_0` the reduced support.
    pub fn e(&self) -> u32 {
        self.support.values().fold(0, |a, &b| gcd(a, b))
    }

    /// Sum of the support points, each once.
    pub fn reduced(&self) -> Divisor {
        Divisor {
            support: self.support.keys().map(|p| (p.clone(), 1)).collect(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, m: u32) -> Divisor {
        Divisor {
            support: self
                .support
                .iter()
                .map(|(p, &k)| (p.clone(), k * m))
                .collect(),
            ..self.clone()
        }
    }

    /// Invariance of the multiset under `a -> a^sub_order`.
    pub fn is_rational_over(&self, sub_order: u64) -> Result<bool> {
        for (p, &k) in &self.support {
            if self.multiplicity(&p.frobenius(sub_order)?) != k {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `γ^* D = D`.
    pub fn is_invariant_under(&self, gamma: &ProjMap) -> Result<bool> {
        for (p, &k) in &self.support {
            if self.multiplicity(&gamma.apply(p)?) != k {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Homogeneous forms of one degree `t`; each stands for `form / Z^t`
/// (`form / t^t` on the line), evaluated at `(a:b:1)` as `form(a, b, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalBasis {
    forms: Vec<Form>,
    degree: u32,
}

impl EvalBasis {
    pub fn new(forms: Vec<Form>) -> Result<Self> {
        let first = forms
            .first()
            .ok_or_else(|| ConstructionError::UnsupportedBasis("no functions".into()))?;
        let degree = first.degree().ok_or_else(|| {
            ConstructionError::UnsupportedBasis("function is zero or not homogeneous".into())
        })?;
        for f in &forms {
            if f.degree() != Some(degree)
                || f.nvars() != first.nvars()
                || f.field() != first.field()
            {
                return Err(ConstructionError::UnsupportedBasis(
                    "functions must be nonzero forms of one degree over one field".into(),
                ));
            }
        }
        Ok(EvalBasis { forms, degree })
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Denominator power `t`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Value of function `i` at an affine point (last coordinate nonzero).
    pub fn evaluate(&self, i: usize, pt: &ProjPoint) -> Result<FieldElement> {
        let last = pt.coords().last().unwrap();
        if last.is_zero() {
            return Err(ConstructionError::UnsupportedBasis(format!(
                "{pt:?} is a pole of every function"
            )));
        }
        let form = if self.forms[i].field() == pt.field() {
            self.forms[i].clone()
        } else {
            self.forms[i].embed(&Embedding::new(self.forms[i].field(), pt.field())?)?
        };
        let num = form.eval(pt.coords())?;
        Ok(num.checked_div(&last.pow(self.degree as u64))?)
    }
}

/// Curve, groups, and the two base points `Q`, `Q'`.
///
/// `groups[0]` and `groups[1]` are the designated pair `(G1, G2)`; any
/// further groups come from additional collinear Galois points.
#[derive(Clone, Debug)]
pub struct Instance {
    label: String,
    family: Option<(Family, u64)>,
    curve: PlaneCurve,
    groups: Vec<AutGroup>,
    q_point: ProjPoint,
    q_prime: ProjPoint,
    ground: FieldSpec,
    multiplier: Option<u32>,
    functions: Option<EvalBasis>,
    cap: usize,
}

impl Instance {
    pub fn new(
        curve: PlaneCurve,
        groups: Vec<AutGroup>,
        q_point: ProjPoint,
        q_prime: ProjPoint,
        ground: FieldSpec,
    ) -> Result<Self> {
        if groups.len() < 2 {
            return Err(ConstructionError::TooFewGroups(groups.len()));
        }
        let working = groups[0].field().clone();
        let dim = curve.nvars();
        if groups
            .iter()
            .any(|g| *g.field() != working || g.dim() != dim)
            || *q_point.field() != working
            || *q_prime.field() != working
            || q_point.dim() != dim
            || q_prime.dim() != dim
        {
            return Err(ConstructionError::Inconsistent);
        }
        Embedding::new(&ground, &working)?;
        let curve = curve.over(&working)?;
        if !curve.contains(&q_point)? {
            return Err(ConstructionError::NotOnCurve("Q"));
        }
        if !curve.contains(&q_prime)? {
            return Err(ConstructionError::NotOnCurve("Q'"));
        }
        Ok(Instance {
            label: "custom".into(),
            family: None,
            curve,
            groups,
            q_point,
            q_prime,
            ground,
            multiplier: None,
            functions: None,
            cap: DEFAULT_CLOSURE_CAP,
        })
    }

    /// One of the built-in examples. `Q` is the first point of the curve on
    /// `Z = 0` (or `(1:0)` on the line); `Q'` is the first point with the
    /// shape the family requires: all coordinates nonzero for `fermat`,
    /// `(0:1)` for `projline`, `(x:0:1)` for `bf`.
    pub fn builtin(family: Family, q: u64) -> Result<Self> {
        let field = family.field(q)?;
        let curve = family.curve(q, &field)?;
        let (g1, g2) = builtin_generators(family, q, &field)?;
        let groups = vec![
            AutGroup::close("G1", g1, DEFAULT_CLOSURE_CAP)?,
            AutGroup::close("G2", g2, DEFAULT_CLOSURE_CAP)?,
        ];
        let (q_point, q_prime) = match family {
            Family::ProjLine => (
                ProjPoint::new(vec![field.one(), field.zero()])?,
                ProjPoint::new(vec![field.zero(), field.one()])?,
            ),
            Family::Fermat | Family::Bf => {
                let points = curve.enumerate_points(&field)?;
                let q_point = points
                    .iter()
                    .find(|p| p.at_infinity())
                    .cloned()
                    .ok_or(ConstructionError::NotOnCurve("a point on Z = 0"))?;
                let q_prime = if family == Family::Fermat {
                    points
                        .iter()
                        .find(|p| p.coords().iter().all(|c| !c.is_zero()))
                } else {
                    points
                        .iter()
                        .find(|p| p.coords()[1].is_zero() && !p.at_infinity())
                };
                let q_prime = q_prime
                    .cloned()
                    .ok_or(ConstructionError::NoValidQPrime { family, q })?;
                (q_point, q_prime)
            }
        };
        let mut inst = Instance::new(curve, groups, q_point, q_prime, field)?;
        inst.label = format!("{family} q={q}");
        inst.family = Some((family, q));
        Ok(inst)
    }

    /// Evaluate `L(m D_0)` instead of `L(D)`.
    pub fn with_multiplier(mut self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(ConstructionError::ZeroMultiplier);
        }
        self.multiplier = Some(m);
        Ok(self)
    }

    /// Explicit evaluation functions, bypassing basis synthesis.
    pub fn with_functions(mut self, basis: EvalBasis) -> Self {
        self.functions = Some(basis);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_groups(mut self, groups: Vec<AutGroup>) -> Result<Self> {
        let rebuilt = Instance::new(
            self.curve.clone(),
            groups,
            self.q_point.clone(),
            self.q_prime.clone(),
            self.ground.clone(),
        )?;
        self.groups = rebuilt.groups;
        Ok(self)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> Option<(Family, u64)> {
        self.family
    }

    pub fn curve(&self) -> &PlaneCurve {
        &self.curve
    }

    pub fn groups(&self) -> &[AutGroup] {
        &self.groups
    }

    pub fn q_point(&self) -> &ProjPoint {
        &self.q_point
    }

    pub fn q_prime(&self) -> &ProjPoint {
        &self.q_prime
    }

    pub fn ground(&self) -> &FieldSpec {
        &self.ground
    }

    pub fn working(&self) -> &FieldSpec {
        self.groups[0].field()
    }

    /// Explicit multiplier, if any. Without one the code uses `D` itself,
    /// i.e. `m = e`.
    pub fn multiplier(&self) -> Option<u32> {
        self.multiplier
    }

    pub fn functions(&self) -> Option<&EvalBasis> {
        self.functions.as_ref()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn g1(&self) -> &AutGroup {
        &self.groups[0]
    }

    /// `<G_1, .., G_k>`.
    pub fn joined_group(&self) -> Result<AutGroup> {
        let refs: Vec<&AutGroup> = self.groups.iter().collect();
        Ok(AutGroup::join("<G1,G2>", &refs, self.cap)?)
    }
}

/// Condition (b): `G1 ∩ G2 = {1}` on the designated pair, plus `|G1| = |G2|`
/// and `G1 != G2`.
pub fn check_condition_b(inst: &Instance) -> Result<Check> {
    let (g1, g2) = (&inst.groups[0], &inst.groups[1]);
    if g1.order() != g2.order() {
        return Ok(Check::new(
            "b",
            false,
            format!("|G1| = {} differs from |G2| = {}", g1.order(), g2.order()),
        ));
    }
    let common = g1.intersect(g2)?;
    let check = if common.is_trivial() {
        Check::new(
            "b",
            true,
            format!("G1 ∩ G2 = {{1}}, |G1| = |G2| = {}", g1.order()),
        )
    } else {
        Check::new("b", false, format!("G1 ∩ G2 has order {}", common.order()))
            .with_witness(common.elements()[1].enc())
    };
    Ok(check)
}

/// Condition (c): the `G_i`-orbit sums of `Q` agree and are rational over
/// the ground field. Every group is compared against `G1`.
pub fn build_divisor(inst: &Instance) -> Result<Divisor> {
    let reference = inst.g1().orbit_multiset(&inst.q_point)?;
    for (i, g) in inst.groups.iter().enumerate().skip(1) {
        let other = g.orbit_multiset(&inst.q_point)?;
        if other != reference {
            let witness = reference
                .iter()
                .find(|(p, k)| other.get(*p) != Some(*k))
                .or_else(|| other.iter().find(|(p, k)| reference.get(*p) != Some(*k)))
                .map(|(p, _)| p.enc());
            let mut check = Check::new(
                "c",
                false,
                format!("orbit sums of Q under G1 and G{} differ", i + 1),
            );
            check.witness = witness;
            return Err(ConstructionError::ConditionFailed(check));
        }
    }
    let d = Divisor::new(reference, &inst.ground)?;
    if !d.ground_rational() {
        return Err(ConstructionError::ConditionFailed(Check::new(
            "c",
            false,
            format!("D is not defined over {}", inst.ground),
        )));
    }
    Ok(d)
}

/// Condition (c) as a report.
pub fn check_condition_c(inst: &Instance) -> Result<Check> {
    match build_divisor(inst) {
        Ok(d) => Ok(Check::new(
            "c",
            true,
            format!(
                "D has degree {} on {} points, e = {}, rational over {}",
                d.degree(),
                d.support().len(),
                d.e(),
                inst.ground
            ),
        )),
        Err(ConstructionError::ConditionFailed(c)) => Ok(c),
        Err(e) => Err(e),
    }
}

/// Evaluation set and the report for (d), (d') or (d'').
#[derive(Clone, Debug)]
pub struct OrbitCheck {
    pub orbit: Vec<ProjPoint>,
    pub group: AutGroup,
    pub multiplier: u32,
    pub checks: Vec<Check>,
}

impl OrbitCheck {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Condition (d) and its variants. Uses (d'') when an explicit multiplier
/// differs from `e`, and (d') when more than two groups are present.
pub fn check_condition_d(inst: &Instance, d: &Divisor) -> Result<OrbitCheck> {
    let group = inst.joined_group()?;
    let orbit = group.orbit(&inst.q_prime)?;
    let e = d.e();
    let m = inst.multiplier.unwrap_or(e);
    let g1 = inst.g1().order();
    let n = orbit.len();
    let mut checks = Vec::new();

    let rational = inst.q_prime.is_rational_over(inst.ground.order())?;
    checks.push(
        Check::new(
            "d.rational",
            rational,
            format!("Q' rational over {}: {rational}", inst.ground),
        )
        .with_witness(inst.q_prime.enc()),
    );
    let off = d.multiplicity(&inst.q_prime) == 0;
    checks.push(Check::new(
        "d.off_support",
        off,
        format!("Q' outside supp(D): {off}"),
    ));

    if inst.groups.len() > 2 {
        let mut best = None;
        'pairs: for i in 0..inst.groups.len() {
            for j in 0..inst.groups.len() {
                if i == j {
                    continue;
                }
                let pair = AutGroup::join("pair", &[&inst.groups[i], &inst.groups[j]], inst.cap)?;
                let size = pair.orbit(&inst.q_prime)?.len();
                if size > inst.groups[i].order() {
                    best = Some((i, j, size));
                    break 'pairs;
                }
            }
        }
        let check = match best {
            Some((i, j, size)) => Check::new(
                "d'",
                true,
                format!(
                    "#(<G{},G{}>·Q') = {size} >= |G{}| + 1 = {}",
                    i + 1,
                    j + 1,
                    i + 1,
                    inst.groups[i].order() + 1
                ),
            ),
            None => Check::new(
                "d'",
                false,
                "no pair of groups has an orbit of Q' larger than the group",
            ),
        };
        checks.push(check);
    }
    if m == e && inst.groups.len() == 2 {
        let ok = n > g1;
        checks.push(Check::new(
            "d",
            ok,
            format!("#S = {n}, |G1| + 1 = {}", g1 + 1),
        ));
    } else if m != e {
        let ok = (m as usize) * g1 < (e as usize) * n;
        checks.push(Check::new(
            "d''",
            ok,
            format!("m = {m} < e·#S/|G1| = {e}·{n}/{g1}: {ok}"),
        ));
    }
    Ok(OrbitCheck {
        orbit,
        group,
        multiplier: m,
        checks,
    })
}

/// Evaluation functions spanning a subspace of `L(m D_0)`.
///
/// On the plane this requires `D` to be the full line section `X ∩ {Z = 0}`
/// and `e | m`; the forms are `X^i Y^j Z^{t-i-j}` with `t = m / e`. On the
/// line it requires `D_0 = (1:0)`, giving `s^i t^{m-i}`.
pub fn build_basis(inst: &Instance, d: &Divisor, m: u32) -> Result<EvalBasis> {
    if let Some(b) = &inst.functions {
        return Ok(b.clone());
    }
    let field = inst.working();
    if inst.curve.is_line() {
        let infinity = ProjPoint::new(vec![field.one(), field.zero()])?;
        if d.support().len() != 1 || d.multiplicity(&infinity) == 0 {
            return Err(ConstructionError::UnsupportedBasis(
                "D must be supported at (1:0)".into(),
            ));
        }
        let forms = (0..=m)
            .map(|i| Form::monomial(vec![i, m - i], field.one()))
            .collect();
        return EvalBasis::new(forms);
    }
    let section = inst.curve.line_section_points(field)?;
    let support: Vec<ProjPoint> = d.support().keys().cloned().collect();
    if support != section || d.degree() != inst.curve.degree() {
        return Err(ConstructionError::UnsupportedBasis(
            "D is not the line section at Z = 0".into(),
        ));
    }
    let e = d.e();
    if !m.is_multiple_of(e) {
        return Err(ConstructionError::UnsupportedBasis(format!(
            "multiplier {m} is not a multiple of e = {e}"
        )));
    }
    let t = m / e;
    let mut forms = Vec::new();
    for deg in 0..=t {
        for i in (0..=deg).rev() {
            forms.push(Form::monomial(vec![i, deg - i, t - deg], field.one()));
        }
    }
    EvalBasis::new(forms)
}

/// Everything produced by the pipeline.
#[derive(Clone, Debug)]
pub struct Construction {
    pub divisor: Divisor,
    pub multiplier: u32,
    pub group: AutGroup,
    pub basis: EvalBasis,
    pub code: EvalCode,
    pub checks: Vec<Check>,
}

impl Construction {
    pub fn orbit(&self) -> &[ProjPoint] {
        self.code.points()
    }

    pub fn e(&self) -> u32 {
        self.divisor.e()
    }
}

/// Runs every check and builds the code; the first failed check aborts.
pub fn build_code(inst: &Instance) -> Result<Construction> {
    let mut checks = vec![Check::new("a", true, "assumed: X/G_i is rational")];
    checks.push(check_condition_b(inst)?.into_result()?);
    let divisor = build_divisor(inst)?;
    checks.push(check_condition_c(inst)?);
    let orbit_check = check_condition_d(inst, &divisor)?;
    for c in &orbit_check.checks {
        checks.push(c.clone().into_result()?);
    }
    let OrbitCheck {
        orbit,
        group,
        multiplier,
        ..
    } = orbit_check;
    let basis = build_basis(inst, &divisor, multiplier)?;
    let emb = Embedding::new(&inst.ground, inst.working())?;
    let mut matrix = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let mut row = Vec::with_capacity(orbit.len());
        for (j, pt) in orbit.iter().enumerate() {
            let v = basis.evaluate(i, pt)?;
            row.push(
                emb.preimage(&v)
                    .map_err(|_| ConstructionError::NotGroundValued { row: i, col: j })?,
            );
        }
        matrix.push(row);
    }
    let zero_rows: Vec<u64> = (0..matrix.len() as u64)
        .filter(|&i| matrix[i as usize].iter().all(FieldElement::is_zero))
        .collect();
    let nonzero = Check::new(
        "nonzero_rows",
        zero_rows.is_empty(),
        "every function is nonzero somewhere on S",
    );
    checks.push(
        if zero_rows.is_empty() {
            nonzero
        } else {
            nonzero.with_witness(zero_rows)
        }
        .into_result()?,
    );
    let bound = orbit.len() as i64 - (multiplier as i64) * (divisor.reduced().degree() as i64);
    let code = EvalCode::new(inst.ground.clone(), orbit, matrix, bound)?;
    Ok(Construction {
        divisor,
        multiplier,
        group,
        basis,
        code,
        checks,
    })
}

/// Non-aborting verification of every computable hypothesis, plus curve
/// preservation by each group element, the invariance of `D` and `S`, and
/// faithfulness of the action on the code.
pub fn verify(inst: &Instance) -> Result<Vec<Check>> {
    let mut checks = vec![Check::new("a", true, "assumed: X/G_i is rational")];
    let group = inst.joined_group()?;
    let mut bad = None;
    for g in group.elements() {
        if !preserves_curve(g, &inst.curve)? {
            bad = Some(g.enc());
            break;
        }
    }
    let mut curve = Check::new(
        "curve",
        bad.is_none(),
        format!(
            "all {} elements of <G1,G2> preserve the curve",
            group.order()
        ),
    );
    curve.witness = bad;
    checks.push(curve);
    checks.push(check_condition_b(inst)?);
    let divisor = match build_divisor(inst) {
        Ok(d) => d,
        Err(ConstructionError::ConditionFailed(c)) => {
            checks.push(c);
            return Ok(checks);
        }
        Err(e) => return Err(e),
    };
    checks.push(check_condition_c(inst)?);
    let dc = check_condition_d(inst, &divisor)?;
    checks.extend(dc.checks.iter().cloned());

    let d_inv = dc
        .group
        .elements()
        .iter()
        .find(|g| !divisor.is_invariant_under(g).unwrap_or(false));
    checks.push(match d_inv {
        None => Check::new("invariant_D", true, "γ*D = D for every γ"),
        Some(g) => Check::new("invariant_D", false, "an element moves D").with_witness(g.enc()),
    });
    let mut s_bad = None;
    for g in dc.group.elements() {
        if analysis::permutation_of(g, &dc.orbit).is_err() {
            s_bad = Some(g.enc());
            break;
        }
    }
    let mut s_check = Check::new("invariant_S", s_bad.is_none(), "γ(S) = S for every γ");
    s_check.witness = s_bad;
    checks.push(s_check);

    if checks.iter().all(|c| c.passed) {
        match build_code(inst) {
            Ok(built) => {
                let rep = analysis::verify_faithful(&built.group, built.orbit(), &built.code)?;
                let mut c = Check::new(
                    "faithful",
                    rep.passed,
                    format!(
                        "image order {} of group order {}",
                        rep.image_order, rep.group_order
                    ),
                );
                c.witness = rep.kernel_witness.or(rep.non_automorphism_witness);
                checks.push(c);
            }
            Err(ConstructionError::ConditionFailed(c)) => checks.push(c),
            Err(e) => return Err(e),
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_arithmetic() {
        let f = FieldSpec::new(5, 1).unwrap();
        let p = ProjPoint::new(vec![f.one(), f.zero()]).unwrap();
        let q = ProjPoint::new(vec![f.zero(), f.one()]).unwrap();
        let d = Divisor::new(BTreeMap::from([(p.clone(), 4), (q.clone(), 6)]), &f).unwrap();
        assert_eq!(d.degree(), 10);
        assert_eq!(d.e(), 2);
        assert_eq!(d.reduced().degree(), 2);
        assert_eq!(d.scaled(3).multiplicity(&q), 18);
        assert!(d.ground_rational());
    }

    #[test]
    fn basis_rejects_mixed_degrees() {
        let f = FieldSpec::new(5, 1).unwrap();
        let forms = vec![Form::variable(&f, 3, 0), Form::variable(&f, 3, 0).pow(2)];
        assert!(matches!(
            EvalBasis::new(forms),
            Err(ConstructionError::UnsupportedBasis(_))
        ));
        assert!(EvalBasis::new(vec![]).is_err());
    }

    #[test]
    fn zero_multiplier_rejected() {
        let inst = Instance::builtin(Family::ProjLine, 5).unwrap();
        assert_eq!(
            inst.with_multiplier(0).unwrap_err(),
            ConstructionError::ZeroMultiplier
        );
    }

    #[test]
    fn too_few_groups() {
        let inst = Instance::builtin(Family::ProjLine, 5).unwrap();
        let g = inst.groups()[0].clone();
        let err = Instance::new(
            inst.curve().clone(),
            vec![g],
            inst.q_point().clone(),
            inst.q_prime().clone(),
            inst.ground().clone(),
        );
        assert_eq!(err.unwrap_err(), ConstructionError::TooFewGroups(1));
    }
}
