//! JSON forms of families, matrices and quadratic-form problems.
//!
//! Every reader re-validates the decoded object, so files edited by hand get
//! the same checks as values built in code.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{CommutingFamily, OrthonormalBasis, SymmetricMatrix};
use crate::quadform::{GFunction, QuadFormProblem};

/// `{"n", "T", "basis", "eigenvalues"}` with the basis stored column per entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub basis: Vec<Vec<f64>>,
    pub eigenvalues: Vec<Vec<f64>>,
}

impl FamilyJson {
    pub fn from_family(family: &CommutingFamily<f64>) -> Self {
        Self {
            n: family.dim(),
            t: family.len(),
            basis: family.basis().columns().to_vec(),
            eigenvalues: family.eigenvalue_rows().to_vec(),
        }
    }

    pub fn into_family(self) -> Result<CommutingFamily<f64>> {
        if self.basis.len() != self.n {
            return Err(Error::Malformed(format!(
                "field `basis`: expected {} columns, found {}",
                self.n,
                self.basis.len()
            )));
        }
        if self.eigenvalues.len() != self.t {
            return Err(Error::Malformed(format!(
                "field `eigenvalues`: expected {} rows (T), found {}",
                self.t,
                self.eigenvalues.len()
            )));
        }
        let basis = OrthonormalBasis::from_columns(self.basis).map_err(|e| field("basis", e))?;
        CommutingFamily::new(basis, self.eigenvalues).map_err(|e| field("eigenvalues", e))
    }
}

/// `{"n", "entries"}` with `entries` listed row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(a: &SymmetricMatrix<f64>) -> Self {
        Self {
            n: a.dim(),
            entries: a.to_rows(),
        }
    }

    pub fn into_matrix(self) -> Result<SymmetricMatrix<f64>> {
        if self.entries.len() != self.n {
            return Err(Error::Malformed(format!(
                "field `entries`: expected {} rows, found {}",
                self.n,
                self.entries.len()
            )));
        }
        SymmetricMatrix::from_rows(&self.entries).map_err(|e| field("entries", e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GJson {
    pub kind: String,
    #[serde(default)]
    pub params: serde_json::Map<String, Value>,
}

/// `{"family", "g": {"kind", "params"}, "G"}`; `G` defaults to the documented
/// Lipschitz constant of the chosen `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemJson {
    pub family: FamilyJson,
    pub g: GJson,
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
}

impl GJson {
    pub fn into_function(self, arity: usize) -> Result<GFunction<f64>> {
        let scalar = |key: &str| -> Result<f64> {
            self.params.get(key).and_then(Value::as_f64).ok_or_else(|| {
                Error::Malformed(format!("field `g.params.{key}`: expected a number"))
            })
        };
        let list = |key: &str| -> Result<Vec<f64>> {
            let arr = self
                .params
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| {
                    Error::Malformed(format!("field `g.params.{key}`: expected an array"))
                })?;
            arr.iter()
                .map(|v| {
                    v.as_f64().ok_or_else(|| {
                        Error::Malformed(format!("field `g.params.{key}`: non-numeric entry"))
                    })
                })
                .collect()
        };
        let g = match self.kind.as_str() {
            "neg_identity" => GFunction::NegIdentity,
            "max" => GFunction::Max { arity },
            "square" => GFunction::Square {
                target: scalar("b")?,
            },
            "interval" => GFunction::Interval {
                lower: scalar("a")?,
                upper: scalar("b")?,
            },
            "l1system" => GFunction::L1System {
                targets: list("b")?,
            },
            "polybox" => GFunction::PolyBox {
                lo: list("lo")?,
                hi: list("hi")?,
            },
            other => {
                return Err(Error::Malformed(format!(
                    "field `g.kind`: unknown kind {other:?}"
                )))
            }
        };
        g.validate().map_err(|e| field("g.params", e))?;
        Ok(g)
    }

    pub fn from_function(g: &GFunction<f64>) -> Self {
        let mut params = serde_json::Map::new();
        let kind = match g {
            GFunction::NegIdentity => "neg_identity",
            GFunction::Max { .. } => "max",
            GFunction::Square { target } => {
                params.insert("b".into(), (*target).into());
                "square"
            }
            GFunction::Interval { lower, upper } => {
                params.insert("a".into(), (*lower).into());
                params.insert("b".into(), (*upper).into());
                "interval"
            }
            GFunction::L1System { targets } => {
                params.insert("b".into(), targets.clone().into());
                "l1system"
            }
            GFunction::PolyBox { lo, hi } => {
                params.insert("lo".into(), lo.clone().into());
                params.insert("hi".into(), hi.clone().into());
                "polybox"
            }
        };
        Self {
            kind: kind.into(),
            params,
        }
    }
}

impl ProblemJson {
    /// Builds the problem; also returns the `g` so callers can inspect it.
    pub fn into_problem(self) -> Result<(QuadFormProblem<f64>, GFunction<f64>)> {
        let family = self.family.into_family()?;
        let g = self.g.into_function(family.len())?;
        let lipschitz = self.lipschitz.unwrap_or_else(|| g.documented_lipschitz());
        let problem = QuadFormProblem::from_family(&family, Box::new(g.clone()), lipschitz)
            .map_err(|e| field("G", e))?;
        Ok((problem, g))
    }
}

fn field(name: &str, e: Error) -> Error {
    match e {
        Error::Malformed(msg) => Error::Malformed(msg),
        other => Error::Malformed(format!("field `{name}`: {other}")),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Malformed(format!("line {} column {}: {e}", e.line(), e.column())))
}

pub fn family_from_json(text: &str) -> Result<CommutingFamily<f64>> {
    parse::<FamilyJson>(text)?.into_family()
}

pub fn family_to_json(family: &CommutingFamily<f64>) -> String {
    serde_json::to_string_pretty(&FamilyJson::from_family(family)).expect("plain data serializes")
}

pub fn matrix_from_json(text: &str) -> Result<SymmetricMatrix<f64>> {
    parse::<MatrixJson>(text)?.into_matrix()
}

pub fn matrix_to_json(a: &SymmetricMatrix<f64>) -> String {
    serde_json::to_string_pretty(&MatrixJson::from_matrix(a)).expect("plain data serializes")
}

pub fn problem_from_json(text: &str) -> Result<(QuadFormProblem<f64>, GFunction<f64>)> {
    parse::<ProblemJson>(text)?.into_problem()
}

pub fn problem_to_json(
    family: &CommutingFamily<f64>,
    g: &GFunction<f64>,
    lipschitz: f64,
) -> String {
    let p = ProblemJson {
        family: FamilyJson::from_family(family),
        g: GJson::from_function(g),
        lipschitz: Some(lipschitz),
    };
    serde_json::to_string_pretty(&p).expect("plain data serializes")
}
