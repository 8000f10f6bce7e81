//! Data functions given as text, e.g. `tau = sin(x)` or `forcing = t*exp(-x)`.

use crate::CliError;

thread_local! {
    static BUILTINS: meval::Context<'static> = meval::Context::new();
}

/// Variables an expression may refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vars {
    T,
    X,
    TX,
}

impl Vars {
    fn names(self) -> &'static [&'static str] {
        match self {
            Vars::T => &["t"],
            Vars::X => &["x"],
            Vars::TX => &["t", "x"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataExpr {
    source: String,
    expr: meval::Expr,
    constant: Option<f64>,
}

impl DataExpr {
    /// Parses `source` and rejects names other than `vars` and the builtins.
    pub fn parse(key: &str, source: &str, vars: Vars) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::Config(format!("{key} = {source:?}: {msg}"));
        let expr: meval::Expr = source.parse().map_err(|e| bad(format!("{e}")))?;
        let probe: Vec<(&str, f64)> = vars.names().iter().map(|v| (*v, 0.5)).collect();
        BUILTINS
            .with(|b| expr.eval_with_context((probe, b)))
            .map_err(|e| {
                bad(format!(
                    "{e} (allowed variables: {})",
                    vars.names().join(", ")
                ))
            })?;
        let constant = BUILTINS.with(|b| expr.eval_with_context(b)).ok();
        Ok(Self {
            source: source.to_string(),
            expr,
            constant,
        })
    }

    pub fn zero() -> Self {
        Self::parse("zero", "0", Vars::TX).expect("literal parses")
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// The value when the expression uses no variables.
    pub fn constant(&self) -> Option<f64> {
        self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.constant == Some(0.0)
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        BUILTINS
            .with(|b| self.expr.eval_with_context((("t", t), (("x", x), b))))
            .unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_with_builtins() {
        let e = DataExpr::parse("forcing", "t * sin(x) + pi", Vars::TX).unwrap();
        let v = e.eval(2.0, 0.5);
        assert_eq!(v, 2.0 * 0.5f64.sin() + std::f64::consts::PI);
        assert_eq!(e.constant(), None);
        assert!(DataExpr::parse("phi0", "2 - 2", Vars::T).unwrap().is_zero());
    }

    #[test]
    fn rejects_foreign_variables() {
        assert!(matches!(
            DataExpr::parse("tau", "t * x", Vars::X),
            Err(CliError::Config(_))
        ));
        assert!(DataExpr::parse("tau", "sin(", Vars::X).is_err());
        assert!(DataExpr::parse("tau", "foo(x)", Vars::X).is_err());
    }
}
