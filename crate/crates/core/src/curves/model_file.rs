//! JSON model files. Every integer that is a field element or a modulus is a
//! decimal string, so files do not depend on machine word size.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::PrimeField;
use crate::curves::curve::PlaneCurve;
use crate::curves::forms::{Exps, Form};
use crate::curves::model::{CurveModel, DivisorExpr, Model, Synthetic};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSection {
    pub prime: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSection {
    pub degree: usize,
    pub coefficients: Vec<(Exps, String)>,
    #[serde(default)]
    pub nodes: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default)]
    pub name: String,
    pub field: FieldSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSection>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub points: BTreeMap<String, [String; 3]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub divisors: BTreeMap<String, DivisorExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<Synthetic>,
}

fn parse_point(f: PrimeField, p: &[String; 3]) -> Result<[u64; 3]> {
    Ok([f.parse_decimal(&p[0])?, f.parse_decimal(&p[1])?, f.parse_decimal(&p[2])?])
}

fn show_point(p: &[u64; 3]) -> [String; 3] {
    p.map(|c| c.to_string())
}

impl ModelFile {
    /// Builds the model. Parse-level problems come back as `Parse` or
    /// `InvalidModulus`, geometric ones (singular curve, point off the curve)
    /// as `Geometry`.
    pub fn into_model(self) -> Result<Model> {
        let prime: u64 = self
            .field
            .prime
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("field.prime is not a 64-bit integer: {:?}", self.field.prime)))?;
        let field = PrimeField::new(prime)?;
        match (self.curve, self.synthetic) {
            (Some(_), Some(_)) => Err(Error::Parse("a model has either a curve or a synthetic section".into())),
            (None, None) => Err(Error::Parse("model has neither a curve nor a synthetic section".into())),
            (None, Some(synthetic)) => Ok(Model::Synthetic {
                name: self.name,
                field,
                synthetic,
            }),
            (Some(c), None) => {
                let mut terms = Vec::with_capacity(c.coefficients.len());
                for (e, v) in &c.coefficients {
                    if e.iter().sum::<usize>() != c.degree {
                        return Err(Error::Parse(format!(
                            "monomial {e:?} does not have degree {}",
                            c.degree
                        )));
                    }
                    terms.push((*e, field.parse_decimal(v)?));
                }
                let form = Form::from_terms(field, c.degree, terms);
                let nodes = c
                    .nodes
                    .iter()
                    .map(|p| parse_point(field, p))
                    .collect::<Result<Vec<_>>>()?;
                let curve = PlaneCurve::new(field, form, &nodes)?;
                let points = self
                    .points
                    .iter()
                    .map(|(k, p)| Ok((k.clone(), parse_point(field, p)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let model = CurveModel {
                    name: self.name,
                    curve,
                    points,
                    divisors: self.divisors,
                };
                model.validate()?;
                Ok(Model::Curve(model))
            }
        }
    }

    pub fn from_model(model: &Model) -> Self {
        match model {
            Model::Synthetic { name, field, synthetic } => ModelFile {
                name: name.clone(),
                field: FieldSection {
                    prime: field.modulus().to_string(),
                },
                curve: None,
                points: BTreeMap::new(),
                divisors: BTreeMap::new(),
                synthetic: Some(synthetic.clone()),
            },
            Model::Curve(m) => ModelFile {
                name: m.name.clone(),
                field: FieldSection {
                    prime: m.field().modulus().to_string(),
                },
                curve: Some(CurveSection {
                    degree: m.curve.degree(),
                    coefficients: m.curve.form().terms().map(|(e, c)| (e, c.to_string())).collect(),
                    nodes: m.curve.nodes().iter().map(|n| show_point(&n.point)).collect(),
                }),
                points: m.points.iter().map(|(k, p)| (k.clone(), show_point(p))).collect(),
                divisors: m.divisors.clone(),
                synthetic: None,
            },
        }
    }
}

pub fn parse_model(json: &str) -> Result<Model> {
    serde_json::from_str::<ModelFile>(json)?.into_model()
}

pub fn model_to_json(model: &Model) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(model)).expect("model files always serialize")
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    parse_model(&std::fs::read_to_string(path)?)
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model_to_json(model) + "\n")?;
    Ok(())
}
