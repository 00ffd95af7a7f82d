use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::parse::parse_expr;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// The field `F_p(t_1,...,t_m)` together with its variable names.
///
/// The variables `t_1,...,t_m` form the p-basis used everywhere else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    p: u32,
    vars: Vec<String>,
}

pub type Field = Arc<FieldDescriptor>;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldDescriptor {
    pub fn new(p: u32, vars: Vec<String>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Semantic(format!("p = {p} is not prime")));
        }
        for (i, v) in vars.iter().enumerate() {
            let valid = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Semantic(format!("invalid variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Semantic(format!("duplicate variable name {v:?}")));
            }
        }
        Ok(FieldDescriptor { p, vars })
    }

    /// Convenience constructor from string slices; panics on invalid input.
    pub fn with_vars(p: u32, vars: &[&str]) -> Field {
        Arc::new(Self::new(p, vars.iter().map(|s| s.to_string()).collect()).expect("valid field descriptor"))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> RationalFunction {
        RationalFunction::zero(self.p, self.nvars())
    }

    pub fn one(&self) -> RationalFunction {
        RationalFunction::one(self.p, self.nvars())
    }

    pub fn constant(&self, c: i64) -> RationalFunction {
        RationalFunction::constant(self.p, self.nvars(), c)
    }

    pub fn var(&self, i: usize) -> RationalFunction {
        RationalFunction::var(self.p, self.nvars(), i)
    }

    /// Parses an expression such as `((x+y)^2)/(x*y)` over this field.
    pub fn parse(&self, src: &str) -> Result<RationalFunction> {
        parse_expr(self, src)
    }

    pub fn format(&self, a: &RationalFunction) -> String {
        a.display_with(&self.vars).to_string()
    }

    /// The field with extra variables appended after the existing ones.
    pub fn extended(&self, extra: impl IntoIterator<Item = String>) -> Result<Self> {
        let mut vars = self.vars.clone();
        vars.extend(extra);
        Self::new(self.p, vars)
    }

    /// Checks that an element lives in this field.
    pub fn owns(&self, a: &RationalFunction) -> bool {
        a.characteristic() == self.p && a.nvars() == self.nvars()
    }
}
