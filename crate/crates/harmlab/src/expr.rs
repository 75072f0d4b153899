//! One-variable expressions for speed profiles and radii of curvature.

use evalexpr::{
    build_operator_tree, ContextWithMutableFunctions, ContextWithMutableVariables, DefaultNumericTypes, EvalexprError,
    Function, HashMapContext, Node, Value,
};

type Ctx = HashMapContext<DefaultNumericTypes>;

/// A compiled expression in one variable.
///
/// Besides evalexpr's own operators it understands `sin`, `cos`, `tan`, `exp`,
/// `ln`, `sqrt`, `abs` and the constant `pi`.
pub struct Expr {
    source: String,
    variable: String,
    tree: Node<DefaultNumericTypes>,
    context: Ctx,
}

fn unary(f: fn(f64) -> f64) -> Function<DefaultNumericTypes> {
    Function::new(move |arg: &Value<DefaultNumericTypes>| Ok(Value::Float(f(arg.as_number()?))))
}

type Unary = fn(f64) -> f64;

impl Expr {
    pub fn parse(source: &str, variable: &str) -> Result<Self, String> {
        let tree = build_operator_tree::<DefaultNumericTypes>(source).map_err(|e| format!("`{source}`: {e}"))?;
        let mut context = Ctx::new();
        let functions: [(&str, Unary); 7] = [
            ("sin", f64::sin),
            ("cos", f64::cos),
            ("tan", f64::tan),
            ("exp", f64::exp),
            ("ln", f64::ln),
            ("sqrt", f64::sqrt),
            ("abs", f64::abs),
        ];
        for (name, f) in functions {
            context.set_function(name.into(), unary(f)).map_err(|e| e.to_string())?;
        }
        context
            .set_value("pi".into(), Value::Float(std::f64::consts::PI))
            .map_err(|e| e.to_string())?;
        for id in tree.iter_variable_identifiers() {
            if id != variable && id != "pi" {
                return Err(format!(
                    "`{source}`: unknown variable `{id}` (only `{variable}` and `pi`)"
                ));
            }
        }
        let mut expr = Self {
            source: source.into(),
            variable: variable.into(),
            tree,
            context,
        };
        expr.eval(0.0)?;
        Ok(expr)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&mut self, x: f64) -> Result<f64, String> {
        let run = |e: &mut Self| -> Result<f64, EvalexprError<DefaultNumericTypes>> {
            e.context.set_value(e.variable.clone(), Value::Float(x))?;
            e.tree.eval_number_with_context(&e.context)
        };
        run(self).map_err(|e| format!("`{}` at {} = {x}: {e}", self.source, self.variable))
    }

    /// Values at `x_i = 2 pi i / n`.
    pub fn sample_periodic(&mut self, n: usize) -> Result<Vec<f64>, String> {
        (0..n)
            .map(|i| self.eval(2.0 * std::f64::consts::PI * i as f64 / n as f64))
            .collect()
    }
}
