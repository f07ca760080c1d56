//! Integer arithmetic for `is/2` and the comparison builtins.

use crate::bindings::Bindings;
use crate::error::{EngineError, Result};
use crate::term::Term;

/// Evaluates `expr` under `bindings` to an exact 64-bit integer.
///
/// Supported: `+ - * // mod abs min max` and unary `-`. `//` rounds toward
/// negative infinity and `mod` takes the sign of the divisor.
pub fn eval_arith(expr: &Term, bindings: &Bindings) -> Result<i64> {
    let expr = bindings.deref(expr);
    match expr {
        Term::Int(i) => Ok(*i),
        Term::Var(_) => Err(EngineError::instantiation("arithmetic expression is not ground")),
        Term::Atom(_) => Err(EngineError::type_error("evaluable", expr)),
        Term::Compound(c) => {
            let overflow = || EngineError::Evaluation("integer overflow".into());
            match (c.functor.as_str(), c.args.len()) {
                ("-", 1) => eval_arith(&c.args[0], bindings)?
                    .checked_neg()
                    .ok_or_else(overflow),
                ("+", 1) => eval_arith(&c.args[0], bindings),
                ("abs", 1) => eval_arith(&c.args[0], bindings)?
                    .checked_abs()
                    .ok_or_else(overflow),
                (op, 2) => {
                    let a = eval_arith(&c.args[0], bindings)?;
                    let b = eval_arith(&c.args[1], bindings)?;
                    match op {
                        "+" => a.checked_add(b).ok_or_else(overflow),
                        "-" => a.checked_sub(b).ok_or_else(overflow),
                        "*" => a.checked_mul(b).ok_or_else(overflow),
                        "//" => floor_div(a, b),
                        "mod" => floor_mod(a, b),
                        "min" => Ok(a.min(b)),
                        "max" => Ok(a.max(b)),
                        _ => Err(not_evaluable(expr)),
                    }
                }
                _ => Err(not_evaluable(expr)),
            }
        }
    }
}

fn not_evaluable(expr: &Term) -> EngineError {
    EngineError::Type {
        expected: "evaluable".into(),
        found: format!("{}/{}", expr.name().unwrap_or("?"), expr.args().len()),
    }
}

fn floor_div(a: i64, b: i64) -> Result<i64> {
    if b == 0 {
        return Err(EngineError::Evaluation("zero_divisor".into()));
    }
    let q = a
        .checked_div(b)
        .ok_or_else(|| EngineError::Evaluation("integer overflow".into()))?;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        Ok(q - 1)
    } else {
        Ok(q)
    }
}

fn floor_mod(a: i64, b: i64) -> Result<i64> {
    if b == 0 {
        return Err(EngineError::Evaluation("zero_divisor".into()));
    }
    let r = a.checked_rem(b).unwrap_or(0);
    if r != 0 && ((r < 0) != (b < 0)) {
        Ok(r + b)
    } else {
        Ok(r)
    }
}
