//! Session files: the variables, the valuation and an optional group.

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use super::parse::is_identifier;
use crate::error::{Error, Result};
use crate::exactvalue::PrimeBasis;
use crate::group::{GroupElement, MonomialAction};
use crate::valuation::MonomialValuation;

/// A JSON number or a decimal string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    perm: Vec<usize>,
    #[serde(default)]
    scalars: Option<Vec<Scalar>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SessionFile {
    variables: Vec<String>,
    prime_basis: Vec<Scalar>,
    weights: Vec<Vec<Scalar>>,
    #[serde(default)]
    shift: Option<Vec<Scalar>>,
    #[serde(default)]
    group: Option<Vec<GeneratorFile>>,
}

#[derive(Clone, Debug)]
pub struct Session {
    pub names: Vec<String>,
    pub valuation: MonomialValuation,
    pub group: Option<MonomialAction>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Session(msg.into())
}

fn to_rational(s: &Scalar, what: &str) -> Result<BigRational> {
    match s {
        Scalar::Int(n) => Ok(BigRational::from_integer((*n).into())),
        Scalar::Text(t) => BigRational::from_str(t.trim())
            .map_err(|_| bad(format!("{what}: '{t}' is not a rational number"))),
    }
}

fn to_integer(s: &Scalar, what: &str) -> Result<BigInt> {
    match s {
        Scalar::Int(n) => Ok((*n).into()),
        Scalar::Text(t) => {
            BigInt::from_str(t.trim()).map_err(|_| bad(format!("{what}: '{t}' is not an integer")))
        }
    }
}

impl Session {
    pub fn load(path: &Path) -> Result<Session> {
        let text =
            std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Session::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Session> {
        let file: SessionFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let n = file.variables.len();
        if n == 0 {
            return Err(bad("at least one variable is required"));
        }
        for (i, name) in file.variables.iter().enumerate() {
            if !is_identifier(name) {
                return Err(bad(format!("'{name}' is not a valid identifier")));
            }
            if file.variables[..i].contains(name) {
                return Err(bad(format!("variable '{name}' is declared twice")));
            }
        }

        let primes = file
            .prime_basis
            .iter()
            .map(|p| to_integer(p, "prime_basis"))
            .collect::<Result<Vec<_>>>()?;
        let basis = Arc::new(PrimeBasis::new(primes).map_err(|e| bad(e.to_string()))?);
        let weights = file
            .weights
            .iter()
            .map(|row| row.iter().map(|w| to_rational(w, "weights")).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let shift = file
            .shift
            .map(|s| {
                s.iter()
                    .map(|a| to_rational(a, "shift"))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        let valuation = MonomialValuation::new(n, basis, weights, shift).map_err(|e| bad(e.to_string()))?;

        let group = match file.group {
            None => None,
            Some(gens) => {
                let mut elements = Vec::with_capacity(gens.len());
                for g in gens {
                    if g.perm.contains(&0) {
                        return Err(bad("group permutations are 1-based"));
                    }
                    let perm = g.perm.iter().map(|p| p - 1).collect();
                    let scalars = match g.scalars {
                        None => vec![BigRational::from_integer(1.into()); n],
                        Some(s) => s
                            .iter()
                            .map(|c| to_rational(c, "scalars"))
                            .collect::<Result<Vec<_>>>()?,
                    };
                    if scalars.len() != n {
                        return Err(bad(format!(
                            "group generator has {} scalars, expected {n}",
                            scalars.len()
                        )));
                    }
                    elements.push(GroupElement::new(perm, scalars).map_err(|e| bad(e.to_string()))?);
                }
                Some(MonomialAction::new(n, elements)?)
            }
        };

        Ok(Session {
            names: file.variables,
            valuation,
            group,
        })
    }
}
