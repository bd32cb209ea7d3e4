use std::collections::BTreeMap;

use num_rational::BigRational;

use super::adjoint::{adjoint_orbit_density, su2_cartan};
use super::model::ActionModel;
use super::poisson::{symplectic_bk_volume, Coefficient, PoissonFamilyModel, SymplecticModel};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureResult;
use crate::scalar::parse_rational;

pub const MODEL_NAMES: [&str; 7] = [
    "plane-so2",
    "plane-o2",
    "torus-free",
    "adjoint-su2",
    "symplectic-bk",
    "poisson-sphere-bundle",
    "su2-dual",
];

/// `key=value` parameters of a catalog run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn parse<S: AsRef<str>>(pairs: &[S]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for p in pairs {
            let p = p.as_ref();
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("expected key=value, got {p:?}")))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Precondition(format!("parameter {k} given twice")));
            }
        }
        Ok(Self(map))
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.0.insert(key.into(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn real(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Precondition(format!("{key}={v} is not a number"))),
        }
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| Error::Precondition(format!("{key}={v} is not a nonnegative integer"))),
        }
    }

    fn list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Precondition(format!("{key}: {s:?} is not a number")))
                })
                .collect(),
        }
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Precondition(format!(
                "unknown parameter {k}; expected one of {}",
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogOutput {
    Value(QuadratureResult<f64>),
    Exact(BigRational),
    /// Rows `(t, density)`.
    Table(Vec<(f64, f64)>),
}

fn coefficient(params: &Params) -> Result<Coefficient> {
    match params.get("f").unwrap_or("vprime2") {
        "vprime2" => Ok(Coefficient::DerivativeSquared),
        "vprime" => Ok(Coefficient::Derivative),
        "one" => Ok(Coefficient::One),
        other => Err(Error::Precondition(format!("f={other}: expected vprime2, vprime or one"))),
    }
}

fn table(ts: &[f64], mut density: impl FnMut(f64) -> Result<f64>) -> Result<CatalogOutput> {
    ts.iter()
        .map(|&t| density(t).map(|d| (t, d)))
        .collect::<Result<Vec<_>>>()
        .map(CatalogOutput::Table)
}

/// Evaluate the catalog model `name`. With a `t` list the plane and torus
/// models report pushforward densities instead of the volume.
pub fn run_example(name: &str, params: &Params) -> Result<CatalogOutput> {
    let common = ["seed", "tol"];
    let tol = params.real("tol", 1e-6)?;
    let allow = |extra: &[&str]| params.only(&[&common[..], extra].concat());
    match name {
        "plane-so2" | "plane-o2" | "torus-free" => {
            let model = match name {
                "plane-so2" => {
                    allow(&["R", "t"])?;
                    ActionModel::plane_so2(params.real("R", 2.0)?)?
                }
                "plane-o2" => {
                    allow(&["R", "t"])?;
                    ActionModel::plane_o2(params.real("R", 2.0)?)?
                }
                _ => {
                    allow(&["t"])?;
                    ActionModel::torus_free()
                }
            };
            if params.get("t").is_some() {
                table(&params.list("t", &[])?, |t| model.pushforward_density(t))
            } else {
                model.volume_def1(tol).map(CatalogOutput::Value)
            }
        }
        "adjoint-su2" => {
            allow(&["t"])?;
            let roots = su2_cartan::<f64>().roots();
            table(&params.list("t", &[0.25, 0.5, 1.0, 2.0])?, |t| {
                adjoint_orbit_density(&[t], &roots).map(|d| d.value)
            })
        }
        "symplectic-bk" => {
            allow(&["c", "k", "dim"])?;
            let c = match params.get("c") {
                None => BigRational::from_integer(1.into()),
                Some(v) => parse_rational(v)
                    .ok_or_else(|| Error::Precondition(format!("c={v} is not a rational")))?,
            };
            let m = SymplecticModel { c, k_order: params.count("k", 1)?, dimension: params.count("dim", 2)? };
            symplectic_bk_volume(&m).map(CatalogOutput::Exact)
        }
        "poisson-sphere-bundle" => {
            allow(&["p", "q", "f", "t"])?;
            let m = PoissonFamilyModel::sphere_bundle(params.real("p", 1.0)?, params.real("q", 3.0)?, coefficient(params)?)?;
            table(&params.list("t", &[0.5, 1.0, 1.5, 2.0])?, |t| m.poisson_stack_density(t))
        }
        "su2-dual" => {
            allow(&["f", "t", "measure"])?;
            let m = PoissonFamilyModel::su2_dual(coefficient(params)?)?;
            let ts = params.list("t", &[0.5, 1.0, 2.0])?;
            match params.get("measure").unwrap_or("stack") {
                "stack" => table(&ts, |t| m.poisson_stack_density(t)),
                "leaf" => table(&ts, |t| m.natural_leaf_measure(t)),
                "product" => table(&ts, |t| m.leaf_product_density(t)),
                other => Err(Error::Precondition(format!(
                    "measure={other}: expected stack, leaf or product"
                ))),
            }
        }
        other => Err(Error::Precondition(format!(
            "unknown model {other}; expected one of {}",
            MODEL_NAMES.join(", ")
        ))),
    }
}
