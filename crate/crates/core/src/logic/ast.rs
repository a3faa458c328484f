use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Identity,
    Var(String),
    Mul(Box<Term>, Box<Term>),
    Inv(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: Term) -> Term {
        Term::Inv(Box::new(a))
    }

    pub fn occurrences(&self, name: &str) -> usize {
        match self {
            Term::Identity => 0,
            Term::Var(v) => usize::from(v == name),
            Term::Mul(a, b) => a.occurrences(name) + b.occurrences(name),
            Term::Inv(a) => a.occurrences(name),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Identity => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Inv(a) => a.collect_vars(out),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Identity => f.write_str("e"),
            Term::Var(v) => f.write_str(v),
            Term::Mul(a, b) => {
                write!(f, "{a}*")?;
                if matches!(**b, Term::Mul(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Term::Inv(a) => {
                if matches!(**a, Term::Mul(..)) {
                    write!(f, "({a})^-1")
                } else {
                    write!(f, "{a}^-1")
                }
            }
        }
    }
}

/// A formula built from dyadic constants and atoms `d(t₁, t₂)` by the
/// connectives `x/2`, `x ∸ y`, `min`, `max`, `|x - y|`, `1 - x`, `x ∔ y`
/// and the binders `sup_x`, `inf_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Const(Rational),
    Dist(Term, Term),
    Half(Box<Formula>),
    Sub(Box<Formula>, Box<Formula>),
    Min(Box<Formula>, Box<Formula>),
    Max(Box<Formula>, Box<Formula>),
    AbsDiff(Box<Formula>, Box<Formula>),
    Neg(Box<Formula>),
    Add(Box<Formula>, Box<Formula>),
    Sup(String, Box<Formula>),
    Inf(String, Box<Formula>),
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Const(_) => {}
            Formula::Dist(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Half(a) | Formula::Neg(a) => a.collect_free(out),
            Formula::Sub(a, b)
            | Formula::Min(a, b)
            | Formula::Max(a, b)
            | Formula::AbsDiff(a, b)
            | Formula::Add(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Sup(v, body) | Formula::Inf(v, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Const(_) | Formula::Dist(..) => true,
            Formula::Half(a) | Formula::Neg(a) => a.is_quantifier_free(),
            Formula::Sub(a, b)
            | Formula::Min(a, b)
            | Formula::Max(a, b)
            | Formula::AbsDiff(a, b)
            | Formula::Add(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Sup(..) | Formula::Inf(..) => false,
        }
    }

    /// Structural Lipschitz constant in `var`: `|F[var:=g] - F[var:=h]| ≤ C·d(g, h)`.
    ///
    /// Each occurrence of `var` inside an atom contributes 1 (bi-invariance),
    /// `half` halves, sums and differences add, `min`/`max` take the larger.
    pub fn lipschitz_modulus(&self, var: &str) -> Rational {
        let two = Rational::from_integer(2.into());
        match self {
            Formula::Const(_) => Rational::zero(),
            Formula::Dist(a, b) => Rational::from_integer(((a.occurrences(var) + b.occurrences(var)) as i64).into()),
            Formula::Half(a) => a.lipschitz_modulus(var) / two,
            Formula::Neg(a) => a.lipschitz_modulus(var),
            Formula::Sub(a, b) | Formula::AbsDiff(a, b) | Formula::Add(a, b) => {
                a.lipschitz_modulus(var) + b.lipschitz_modulus(var)
            }
            Formula::Min(a, b) | Formula::Max(a, b) => {
                let (x, y) = (a.lipschitz_modulus(var), b.lipschitz_modulus(var));
                if x > y {
                    x
                } else {
                    y
                }
            }
            Formula::Sup(v, body) | Formula::Inf(v, body) => {
                if v == var {
                    Rational::zero()
                } else {
                    body.lipschitz_modulus(var)
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Dist(..) => 1,
            Formula::Half(a) | Formula::Neg(a) | Formula::Sup(_, a) | Formula::Inf(_, a) => 1 + a.depth(),
            Formula::Sub(a, b)
            | Formula::Min(a, b)
            | Formula::Max(a, b)
            | Formula::AbsDiff(a, b)
            | Formula::Add(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(c) => {
                if c.is_zero() || c.is_one() {
                    write!(f, "{}", c.numer())
                } else {
                    f.write_str(&format_rational(c))
                }
            }
            Formula::Dist(a, b) => write!(f, "d({a}, {b})"),
            Formula::Half(a) => write!(f, "half({a})"),
            Formula::Neg(a) => write!(f, "neg({a})"),
            Formula::Sub(a, b) => write!(f, "sub({a}, {b})"),
            Formula::Min(a, b) => write!(f, "min({a}, {b})"),
            Formula::Max(a, b) => write!(f, "max({a}, {b})"),
            Formula::AbsDiff(a, b) => write!(f, "absdiff({a}, {b})"),
            Formula::Add(a, b) => write!(f, "add({a}, {b})"),
            Formula::Sup(v, body) => write!(f, "sup {v}. {body}"),
            Formula::Inf(v, body) => write!(f, "inf {v}. {body}"),
        }
    }
}
