//! JSON file formats for instances and constructed codes.
//!
//! Field elements are always written as canonical encodings
//! `sum(coeffs[i] * p^i)`; points as tuples of encodings of the normalized
//! coordinates; projective maps as row-major encodings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{AnalysisError, DistanceReport, EvalCode, FaithfulnessReport};
use crate::autgroup::{AutGroup, GroupError, ProjMap};
use crate::construction::{Check, Construction, ConstructionError, EvalBasis, Instance};
use crate::geometry::{Form, GeometryError, PlaneCurve, ProjPoint};
use crate::gf::{FieldError, FieldSpec};

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

pub type Result<T> = std::result::Result<T, SchemaError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub k: u32,
    /// Monic irreducible modulus, ascending; omitted means the default choice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldJson {
    pub fn from_spec(f: &FieldSpec) -> Self {
        FieldJson {
            p: f.p(),
            k: f.k(),
            modulus: Some(f.modulus().to_vec()),
        }
    }

    pub fn to_spec(&self) -> Result<FieldSpec> {
        let spec = match &self.modulus {
            Some(m) => FieldSpec::with_modulus(self.p, m.clone())?,
            None => FieldSpec::new(self.p, self.k)?,
        };
        if spec.k() != self.k {
            return Err(FieldError::BadModulus {
                p: self.p,
                k: self.k,
                modulus: spec.modulus().to_vec(),
            }
            .into());
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: u64,
}

fn form_to_json(f: &Form) -> Vec<TermJson> {
    f.terms()
        .map(|(e, c)| TermJson {
            exp: e.clone(),
            coeff: c.enc(),
        })
        .collect()
}

fn form_from_json(field: &FieldSpec, nvars: usize, terms: &[TermJson]) -> Result<Form> {
    let terms = terms
        .iter()
        .map(|t| Ok((t.exp.clone(), field.decode(t.coeff)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Form::from_terms(field, nvars, terms)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    /// 2 for the projective line, 3 for a plane curve.
    pub nvars: usize,
    #[serde(default)]
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub label: String,
    pub generators: Vec<Vec<u64>>,
}

impl GroupJson {
    fn from_group(g: &AutGroup) -> Self {
        GroupJson {
            label: g.label().to_string(),
            generators: g.generators().iter().map(ProjMap::enc).collect(),
        }
    }
}

/// Input describing `(X, G_1, .., G_k, Q, Q')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub working_field: FieldJson,
    /// Field the code is defined over; defaults to the working field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_field: Option<FieldJson>,
    pub curve: CurveJson,
    pub groups: Vec<GroupJson>,
    pub q_point: Vec<u64>,
    pub q_prime: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Explicit evaluation forms; required when the divisor is not a line section.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<Vec<TermJson>>>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        let curve = inst.curve();
        InstanceFile {
            label: Some(inst.label().to_string()),
            working_field: FieldJson::from_spec(inst.working()),
            ground_field: (inst.ground() != inst.working())
                .then(|| FieldJson::from_spec(inst.ground())),
            curve: CurveJson {
                nvars: curve.nvars(),
                terms: form_to_json(curve.equation()),
            },
            groups: inst.groups().iter().map(GroupJson::from_group).collect(),
            q_point: inst.q_point().enc(),
            q_prime: inst.q_prime().enc(),
            m: inst.multiplier(),
            functions: inst
                .functions()
                .map(|b| b.forms().iter().map(form_to_json).collect()),
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let working = self.working_field.to_spec()?;
        let ground = match &self.ground_field {
            Some(g) => g.to_spec()?,
            None => working.clone(),
        };
        let nvars = self.curve.nvars;
        let curve = PlaneCurve::new(form_from_json(&working, nvars, &self.curve.terms)?)?;
        let groups = self
            .groups
            .iter()
            .map(|g| {
                let gens = g
                    .generators
                    .iter()
                    .map(|enc| ProjMap::from_encodings(&working, nvars, enc))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(AutGroup::close(
                    g.label.clone(),
                    gens,
                    crate::autgroup::DEFAULT_CLOSURE_CAP,
                )?)
            })
            .collect::<Result<Vec<_>>>()?;
        let q_point = ProjPoint::from_encodings(&working, &self.q_point)?;
        let q_prime = ProjPoint::from_encodings(&working, &self.q_prime)?;
        let mut inst = Instance::new(curve, groups, q_point, q_prime, ground)?;
        if let Some(label) = &self.label {
            inst = inst.with_label(label.clone());
        }
        if let Some(m) = self.m {
            inst = inst.with_multiplier(m)?;
        }
        if let Some(fs) = &self.functions {
            let forms = fs
                .iter()
                .map(|t| form_from_json(&working, nvars, t))
                .collect::<Result<Vec<_>>>()?;
            inst = inst.with_functions(EvalBasis::new(forms)?);
        }
        Ok(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub point: Vec<u64>,
    pub multiplicity: u32,
}

/// A constructed code with its parameters and the reports behind them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub m: u32,
    pub e: u32,
    pub ground_field: FieldJson,
    pub working_field: FieldJson,
    pub n: usize,
    pub k: usize,
    pub nominal_rows: usize,
    pub distance_bound: i64,
    pub distance_exact: Option<usize>,
    pub g1_order: usize,
    pub group_order: usize,
    pub divisor: Vec<DivisorEntry>,
    /// Evaluation set `S` over the working field, in column order.
    pub points: Vec<Vec<u64>>,
    /// Generator matrix over the ground field.
    pub matrix: Vec<Vec<u64>>,
    pub functions: Vec<Vec<TermJson>>,
    pub groups: Vec<GroupJson>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<DistanceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faithfulness: Option<FaithfulnessReport>,
}

impl CodeFile {
    pub fn new(inst: &Instance, built: &Construction) -> Self {
        let code = &built.code;
        CodeFile {
            label: inst.label().to_string(),
            family: inst.family().map(|(f, _)| f.name().to_string()),
            q: inst.family().map(|(_, q)| q),
            m: built.multiplier,
            e: built.e(),
            ground_field: FieldJson::from_spec(inst.ground()),
            working_field: FieldJson::from_spec(inst.working()),
            n: code.n(),
            k: code.k(),
            nominal_rows: code.nominal_rows(),
            distance_bound: code.distance_bound(),
            distance_exact: code.distance_exact(),
            g1_order: inst.groups()[0].order(),
            group_order: built.group.order(),
            divisor: built
                .divisor
                .support()
                .iter()
                .map(|(p, &k)| DivisorEntry {
                    point: p.enc(),
                    multiplicity: k,
                })
                .collect(),
            points: code.points().iter().map(ProjPoint::enc).collect(),
            matrix: code
                .matrix()
                .iter()
                .map(|r| r.iter().map(|x| x.enc()).collect())
                .collect(),
            functions: built.basis.forms().iter().map(form_to_json).collect(),
            groups: inst.groups().iter().map(GroupJson::from_group).collect(),
            checks: built.checks.clone(),
            distance: None,
            faithfulness: None,
        }
    }

    /// Rebuilds the code, validating every encoding.
    pub fn to_code(&self) -> Result<EvalCode> {
        let ground = self.ground_field.to_spec()?;
        let working = self.working_field.to_spec()?;
        let points = self
            .points
            .iter()
            .map(|p| ProjPoint::from_encodings(&working, p))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let matrix = self
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| ground.decode(x))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut code = EvalCode::new(ground, points, matrix, self.distance_bound)?;
        if let Some(d) = self.distance_exact {
            code.set_distance_exact(d)?;
        }
        Ok(code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_json_rejects_wrong_degree() {
        let f = FieldJson {
            p: 3,
            k: 3,
            modulus: Some(vec![1, 0, 1]),
        };
        assert!(f.to_spec().is_err());
        let ok = FieldJson {
            p: 3,
            k: 2,
            modulus: None,
        };
        assert_eq!(ok.to_spec().unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn malformed_instance_json() {
        let err = serde_json::from_str::<InstanceFile>("{\"working_field\": 3}").unwrap_err();
        assert!(SchemaError::from(err)
            .to_string()
            .starts_with("malformed JSON"));
    }
}
