use evalexpr::{build_operator_tree, Context, DefaultNumericTypes, EvalexprError, EvalexprResult, Node, Value};

type V = Value<DefaultNumericTypes>;

/// A real-valued expression in the coordinates `x1, …, xn`.
///
/// Integer literals are read as floats, so `1/2` is `0.5`. Available
/// functions: `sin cos tan exp ln sqrt abs tanh sinh cosh atan`; constants
/// `pi` and `e`; `^` is exponentiation.
#[derive(Debug, Clone)]
pub struct Expression {
    source: String,
    tree: Node<DefaultNumericTypes>,
    dim: usize,
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.dim == other.dim
    }
}

impl Expression {
    pub fn parse(source: &str, dim: usize) -> Result<Self, String> {
        let tree = build_operator_tree(&floatify(source)).map_err(|e| format!("{source:?}: {e}"))?;
        let expr = Self { source: source.to_string(), tree, dim };
        expr.tree
            .eval_number_with_context(&PointContext::new(&vec![0.5; dim], dim))
            .map_err(|e| format!("{source:?}: {e}"))?;
        for ident in expr.tree.iter_variable_identifiers() {
            if !is_known_variable(ident, dim) {
                return Err(format!("{source:?}: unknown variable {ident:?}"));
            }
        }
        for ident in expr.tree.iter_function_identifiers() {
            if !FUNCTIONS.contains(&ident) {
                return Err(format!("{source:?}: unknown function {ident:?}"));
            }
        }
        Ok(expr)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, String> {
        let ctx = PointContext::new(x, self.dim);
        self.tree.eval_number_with_context(&ctx).map_err(|e| format!("{:?} at {x:?}: {e}", self.source))
    }
}

const FUNCTIONS: [&str; 11] = ["sin", "cos", "tan", "exp", "ln", "sqrt", "abs", "tanh", "sinh", "cosh", "atan"];

fn is_known_variable(ident: &str, dim: usize) -> bool {
    if ident == "pi" || ident == "e" {
        return true;
    }
    ident
        .strip_prefix('x')
        .and_then(|i| i.parse::<usize>().ok())
        .is_some_and(|i| (1..=dim).contains(&i))
}

/// Rewrites every numeric literal in positional decimal form with a
/// fractional part (`2` -> `2.0`, `1e-3` -> `0.001`).
fn floatify(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len() + 8);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let prev_word = i > 0 && (chars[i - 1].is_alphanumeric() || chars[i - 1] == '_');
        let starts_number = c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit));
        if !starts_number || prev_word {
            out.push(c);
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
            i += 1;
        }
        if matches!(chars.get(i), Some('e') | Some('E')) {
            let mut j = i + 1;
            if matches!(chars.get(j), Some('+') | Some('-')) {
                j += 1;
            }
            if chars.get(j).is_some_and(char::is_ascii_digit) {
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let literal: String = chars[start..i].iter().collect();
        match literal.parse::<f64>() {
            Ok(v) => {
                let text = v.to_string();
                out.push_str(&text);
                if !text.contains('.') {
                    out.push_str(".0");
                }
            }
            Err(_) => out.push_str(&literal),
        }
    }
    out
}

struct PointContext {
    coords: Vec<V>,
    pi: V,
    e: V,
}

impl PointContext {
    fn new(x: &[f64], dim: usize) -> Self {
        let coords = (0..dim).map(|i| V::Float(x.get(i).copied().unwrap_or(f64::NAN))).collect();
        Self { coords, pi: V::Float(std::f64::consts::PI), e: V::Float(std::f64::consts::E) }
    }
}

impl Context for PointContext {
    type NumericTypes = DefaultNumericTypes;

    fn get_value(&self, identifier: &str) -> Option<&V> {
        match identifier {
            "pi" => Some(&self.pi),
            "e" => Some(&self.e),
            _ => identifier
                .strip_prefix('x')
                .and_then(|i| i.parse::<usize>().ok())
                .and_then(|i| i.checked_sub(1))
                .and_then(|i| self.coords.get(i)),
        }
    }

    fn call_function(&self, identifier: &str, argument: &V) -> EvalexprResult<V, DefaultNumericTypes> {
        let t = argument.as_number()?;
        let v = match identifier {
            "sin" => t.sin(),
            "cos" => t.cos(),
            "tan" => t.tan(),
            "exp" => t.exp(),
            "ln" => t.ln(),
            "sqrt" => t.sqrt(),
            "abs" => t.abs(),
            "tanh" => t.tanh(),
            "sinh" => t.sinh(),
            "cosh" => t.cosh(),
            "atan" => t.atan(),
            _ => return Err(EvalexprError::FunctionIdentifierNotFound(identifier.to_string())),
        };
        Ok(V::Float(v))
    }

    fn are_builtin_functions_disabled(&self) -> bool {
        true
    }

    fn set_builtin_functions_disabled(&mut self, _disabled: bool) -> EvalexprResult<(), DefaultNumericTypes> {
        Ok(())
    }
}
