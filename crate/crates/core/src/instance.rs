//! Instances: a variable count, a named function catalog and a constraint list.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{library, WeightFunction};
use crate::rational::{format_rational, parse_weight};

/// One constraint: a catalog function applied to a scope of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub function: String,
    pub scope: Vec<usize>,
}

impl Constraint {
    pub fn new(function: impl Into<String>, scope: Vec<usize>) -> Self {
        Constraint {
            function: function.into(),
            scope,
        }
    }
}

/// A #CSP instance over the domain `[q]`.
///
/// Scopes may repeat variables. The catalog keeps insertion order, which is
/// the "catalog order" used wherever a reduction has to pick a function
/// deterministically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    q: usize,
    num_variables: usize,
    functions: IndexMap<String, WeightFunction>,
    constraints: Vec<Constraint>,
}

impl Instance {
    /// An instance with `num_variables` variables and no constraints.
    pub fn new(q: usize, num_variables: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::DomainSize(q));
        }
        Ok(Instance {
            q,
            num_variables,
            functions: IndexMap::new(),
            constraints: Vec::new(),
        })
    }

    pub fn boolean(num_variables: usize) -> Self {
        Self::new(2, num_variables).expect("q = 2 is valid")
    }

    /// Builds and validates an instance in one go.
    pub fn from_parts(
        q: usize,
        num_variables: usize,
        functions: IndexMap<String, WeightFunction>,
        constraints: Vec<Constraint>,
    ) -> Result<Self> {
        let mut instance = Self::new(q, num_variables)?;
        for (name, f) in functions {
            instance.define(name, f)?;
        }
        for c in constraints {
            instance.push_constraint(c)?;
        }
        Ok(instance)
    }

    pub fn domain_size(&self) -> usize {
        self.q
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn functions(&self) -> &IndexMap<String, WeightFunction> {
        &self.functions
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn function(&self, name: &str) -> Result<&WeightFunction> {
        self.functions
            .get(name)
            .ok_or_else(|| Error::UnknownFunction(name.to_string()))
    }

    /// Adds (or replaces) a catalog entry. Replacing must keep the arity.
    pub fn define(&mut self, name: impl Into<String>, f: WeightFunction) -> Result<&mut Self> {
        let name = name.into();
        if f.domain_size() != self.q {
            return Err(Error::Field {
                field: format!("functions.{name}"),
                message: format!("domain size {} differs from instance q={}", f.domain_size(), self.q),
            });
        }
        if let Some(old) = self.functions.get(&name) {
            if old.arity() != f.arity() && self.constraints.iter().any(|c| c.function == name) {
                return Err(Error::Field {
                    field: format!("functions.{name}"),
                    message: "redefinition changes the arity of a used function".into(),
                });
            }
        }
        self.functions.insert(name, f);
        Ok(self)
    }

    /// Appends a constraint after checking it against the catalog.
    pub fn constrain(&mut self, function: &str, scope: &[usize]) -> Result<&mut Self> {
        self.push_constraint(Constraint::new(function, scope.to_vec()))?;
        Ok(self)
    }

    fn push_constraint(&mut self, c: Constraint) -> Result<()> {
        let index = self.constraints.len();
        let f = self.functions.get(&c.function).ok_or_else(|| Error::Constraint {
            index,
            message: format!("unknown function `{}`", c.function),
        })?;
        if f.arity() != c.scope.len() {
            return Err(Error::Constraint {
                index,
                message: format!(
                    "scope has {} variables but `{}` has arity {}",
                    c.scope.len(),
                    c.function,
                    f.arity()
                ),
            });
        }
        if let Some(&v) = c.scope.iter().find(|&&v| v >= self.num_variables) {
            return Err(Error::Constraint {
                index,
                message: format!("variable {v} out of range (n = {})", self.num_variables),
            });
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Adds a fresh variable and returns its index.
    pub fn add_variable(&mut self) -> usize {
        self.num_variables += 1;
        self.num_variables - 1
    }

    /// Constraints paired with their functions.
    pub fn resolved(&self) -> impl Iterator<Item = (&WeightFunction, &[usize])> + '_ {
        self.constraints
            .iter()
            .map(move |c| (&self.functions[&c.function], c.scope.as_slice()))
    }

    /// Names of catalog functions referenced by at least one constraint, in catalog order.
    pub fn used_functions(&self) -> Vec<&str> {
        self.functions
            .keys()
            .filter(|name| self.constraints.iter().any(|c| &c.function == *name))
            .map(String::as_str)
            .collect()
    }

    /// Drops catalog entries that no constraint references.
    pub fn prune_catalog(&mut self) {
        let used: Vec<String> = self.used_functions().into_iter().map(str::to_string).collect();
        self.functions.retain(|name, _| used.contains(name));
    }

    /// Rewrites every scope through `map` into an instance with `num_variables`
    /// variables. Used by reductions that merge or rename variables.
    pub fn relabel(&self, num_variables: usize, map: impl Fn(usize) -> usize) -> Result<Self> {
        let constraints = self
            .constraints
            .iter()
            .map(|c| Constraint::new(c.function.clone(), c.scope.iter().map(|&v| map(v)).collect()))
            .collect();
        Self::from_parts(self.q, num_variables, self.functions.clone(), constraints)
    }

    /// Keeps only the constraints for which `keep` holds.
    pub fn filter_constraints(&self, keep: impl Fn(&Constraint) -> bool) -> Self {
        let mut out = self.clone();
        out.constraints.retain(keep);
        out
    }

    pub fn to_json(&self) -> String {
        let doc = InstanceOut {
            q: self.q,
            n: self.num_variables,
            functions: self
                .functions
                .iter()
                .map(|(name, f)| {
                    (
                        name.clone(),
                        FunctionOut {
                            arity: f.arity(),
                            table: f.table().iter().map(format_rational).collect(),
                        },
                    )
                })
                .collect(),
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintDoc {
                    f: c.function.clone(),
                    scope: c.scope.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("instance serialization cannot fail")
    }

    /// Parses the instance JSON format. Syntax errors carry line and column;
    /// semantic errors name the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let mut instance = Instance::new(doc.q, doc.n)?;
        for (name, entry) in doc.functions {
            let field = format!("functions.{name}");
            let f = entry.build(&field, doc.q)?;
            instance.define(name, f)?;
        }
        for (index, c) in doc.constraints.into_iter().enumerate() {
            instance
                .push_constraint(Constraint::new(c.f, c.scope))
                .map_err(|e| match e {
                    Error::Constraint { message, .. } => Error::Field {
                        field: format!("constraints[{index}]"),
                        message,
                    },
                    other => other,
                })?;
        }
        Ok(instance)
    }
}

#[derive(Serialize)]
struct InstanceOut {
    q: usize,
    n: usize,
    functions: IndexMap<String, FunctionOut>,
    constraints: Vec<ConstraintDoc>,
}

#[derive(Serialize)]
struct FunctionOut {
    arity: usize,
    table: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintDoc {
    f: String,
    scope: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    q: usize,
    /// Optional so a bare function catalog parses as an instance with no variables.
    #[serde(default)]
    n: usize,
    #[serde(default)]
    functions: IndexMap<String, FunctionDoc>,
    #[serde(default)]
    constraints: Vec<ConstraintDoc>,
}

/// A catalog entry: either an explicit table or a built-in name.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionDoc {
    arity: Option<usize>,
    table: Option<Vec<String>>,
    builtin: Option<String>,
}

impl FunctionDoc {
    fn build(self, field: &str, q: usize) -> Result<WeightFunction> {
        let err = |message: String| Error::Field {
            field: field.to_string(),
            message,
        };
        match (self.builtin, self.table) {
            (Some(name), None) => {
                let f = library::builtin(&name, q).map_err(|e| err(e.to_string()))?;
                if let Some(arity) = self.arity {
                    if arity != f.arity() {
                        return Err(err(format!("builtin `{name}` has arity {}, not {arity}", f.arity())));
                    }
                }
                Ok(f)
            }
            (None, Some(table)) => {
                let arity = self.arity.ok_or_else(|| err("missing `arity`".into()))?;
                let mut values = Vec::with_capacity(table.len());
                for (i, s) in table.iter().enumerate() {
                    values.push(parse_weight(s).map_err(|e| Error::Field {
                        field: format!("{field}.table[{i}]"),
                        message: e.to_string(),
                    })?);
                }
                WeightFunction::new(arity, q, values).map_err(|e| err(e.to_string()))
            }
            (Some(_), Some(_)) => Err(err("give either `table` or `builtin`, not both".into())),
            (None, None) => Err(err("missing `table`".into())),
        }
    }
}
