use std::collections::BTreeMap;

use super::ast::{Formula, Term};
use crate::error::{Error, Result};
use crate::groups::FiniteMetricGroup;
use crate::scalar::Scalar;

/// Values of free variables, as element indices.
pub type Assignment = BTreeMap<String, usize>;

struct Env<'a> {
    frames: Vec<(&'a str, usize)>,
}

impl<'a> Env<'a> {
    fn lookup(&self, name: &str) -> Result<usize> {
        self.frames
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|&(_, g)| g)
            .ok_or_else(|| Error::Evaluation(format!("unbound variable {name:?}")))
    }
}

fn eval_term<S: Scalar>(t: &Term, group: &FiniteMetricGroup<S>, env: &Env<'_>) -> Result<usize> {
    Ok(match t {
        Term::Identity => group.identity(),
        Term::Var(v) => env.lookup(v)?,
        Term::Mul(a, b) => group.mul(eval_term(a, group, env)?, eval_term(b, group, env)?),
        Term::Inv(a) => group.inv(eval_term(a, group, env)?),
    })
}

fn eval<'a, S: Scalar>(f: &'a Formula, group: &FiniteMetricGroup<S>, env: &mut Env<'a>) -> Result<S> {
    let zero = S::zero();
    let one = S::one();
    Ok(match f {
        Formula::Const(c) => S::from_rational(c),
        Formula::Dist(a, b) => group.distance(eval_term(a, group, env)?, eval_term(b, group, env)?),
        Formula::Half(a) => eval(a, group, env)?.half(),
        Formula::Neg(a) => one - eval(a, group, env)?,
        Formula::Sub(a, b) => (eval(a, group, env)? - eval(b, group, env)?).max_of(zero),
        Formula::Min(a, b) => eval(a, group, env)?.min_of(eval(b, group, env)?),
        Formula::Max(a, b) => eval(a, group, env)?.max_of(eval(b, group, env)?),
        Formula::AbsDiff(a, b) => (eval(a, group, env)? - eval(b, group, env)?).abs(),
        Formula::Add(a, b) => (eval(a, group, env)? + eval(b, group, env)?).min_of(one),
        Formula::Sup(v, body) | Formula::Inf(v, body) => {
            let is_sup = matches!(f, Formula::Sup(..));
            let mut best: Option<S> = None;
            for g in group.elements() {
                env.frames.push((v.as_str(), g));
                let value = eval(body, group, env);
                env.frames.pop();
                let value = value?;
                best = Some(match best {
                    None => value,
                    Some(b) if is_sup => b.max_of(value),
                    Some(b) => b.min_of(value),
                });
            }
            best.expect("carriers are non-empty")
        }
    })
}

/// Evaluates `formula` on `group`; `sup`/`inf` range over the whole carrier.
pub fn evaluate<S: Scalar>(formula: &Formula, group: &FiniteMetricGroup<S>, assignment: &Assignment) -> Result<S> {
    if let Some(missing) = formula.free_vars().into_iter().find(|v| !assignment.contains_key(v)) {
        return Err(Error::Evaluation(format!("unbound variable {missing:?}")));
    }
    if let Some((name, &g)) = assignment.iter().find(|(_, &g)| g >= group.order()) {
        return Err(Error::Evaluation(format!("{name} is assigned index {g} outside the carrier")));
    }
    let mut env = Env { frames: assignment.iter().map(|(k, &v)| (k.as_str(), v)).collect() };
    eval(formula, group, &mut env)
}

pub fn evaluate_sentence<S: Scalar>(formula: &Formula, group: &FiniteMetricGroup<S>) -> Result<S> {
    evaluate(formula, group, &Assignment::new())
}

fn require_sentence(formula: &Formula) -> Result<()> {
    let free = formula.free_vars();
    if !free.is_empty() {
        let names: Vec<String> = free.into_iter().collect();
        return Err(Error::arg(format!("not a sentence: free variables {}", names.join(", "))));
    }
    Ok(())
}

/// True iff the sentence is `sup x₁ .. sup xₙ φ` with `φ` quantifier-free.
pub fn is_sup_sentence(formula: &Formula) -> Result<bool> {
    require_sentence(formula)?;
    let mut f = formula;
    while let Formula::Sup(_, body) = f {
        f = body;
    }
    Ok(f.is_quantifier_free())
}

/// Whether the condition `formula = 0` holds on `group` up to `tolerance`.
pub fn check_condition<S: Scalar>(formula: &Formula, group: &FiniteMetricGroup<S>, tolerance: &S) -> Result<bool> {
    require_sentence(formula)?;
    Ok(evaluate_sentence(formula, group)? <= *tolerance)
}
