//! One-line group specifications such as `shift(cyclic:p=13:metric=lee,eps=1/2)`.

use std::fmt;
use std::str::FromStr;

use super::{make_cyclic_lee, make_symmetric_hamming, regular_metric_group, FiniteMetricGroup};
use crate::constructions::{make_nested_cyclic, shift_metric};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec {
    CyclicLee { p: u64 },
    SymmetricHamming { n: usize },
    Nested { p: u64, s: u32 },
    Shift { base: Box<GroupSpec>, eps: Rational },
    Regular { base: Box<GroupSpec> },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::CyclicLee { p } => write!(f, "cyclic:p={p}:metric=lee"),
            GroupSpec::SymmetricHamming { n } => write!(f, "symmetric:n={n}:metric=hamming"),
            GroupSpec::Nested { p, s } => write!(f, "nested:p={p}:s={s}"),
            GroupSpec::Shift { base, eps } => write!(f, "shift({base},eps={})", format_rational(eps)),
            GroupSpec::Regular { base } => write!(f, "regular({base})"),
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax { offset, message: message.into() }
}

fn parse_at(text: &str, offset: usize) -> Result<GroupSpec> {
    if let Some(rest) = text.strip_prefix("shift(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| syntax(offset + text.len(), "expected ')' closing shift("))?;
        let split = top_level_last_comma(inner)
            .ok_or_else(|| syntax(offset + 6, "shift(<spec>,eps=<rational>) needs a comma"))?;
        let (base, eps) = (&inner[..split], &inner[split + 1..]);
        let eps_offset = offset + 6 + split + 1;
        let eps = eps
            .strip_prefix("eps=")
            .ok_or_else(|| syntax(eps_offset, "expected eps=<rational>"))?;
        let eps = parse_rational(eps).map_err(|e| syntax(eps_offset + 4, e.to_string()))?;
        let base = parse_at(base, offset + 6)?;
        return Ok(GroupSpec::Shift { base: Box::new(base), eps });
    }
    if let Some(rest) = text.strip_prefix("regular(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| syntax(offset + text.len(), "expected ')' closing regular("))?;
        return Ok(GroupSpec::Regular { base: Box::new(parse_at(inner, offset + 8)?) });
    }
    let fields: Vec<&str> = text.split(':').collect();
    let value = |index: usize, key: &str| -> Result<&str> {
        let field_offset = offset + fields[..index].iter().map(|f| f.len() + 1).sum::<usize>();
        fields
            .get(index)
            .and_then(|f| f.strip_prefix(key))
            .and_then(|f| f.strip_prefix('='))
            .ok_or_else(|| syntax(field_offset, format!("expected {key}=...")))
    };
    let number = |index: usize, key: &str| -> Result<u64> {
        let v = value(index, key)?;
        v.parse().map_err(|_| syntax(offset, format!("{key}={v} is not a non-negative integer")))
    };
    match fields[0] {
        "cyclic" if fields.len() == 3 => {
            let p = number(1, "p")?;
            if value(2, "metric")? != "lee" {
                return Err(syntax(offset, "cyclic groups support metric=lee"));
            }
            Ok(GroupSpec::CyclicLee { p })
        }
        "symmetric" if fields.len() == 3 => {
            let n = number(1, "n")? as usize;
            if value(2, "metric")? != "hamming" {
                return Err(syntax(offset, "symmetric groups support metric=hamming"));
            }
            Ok(GroupSpec::SymmetricHamming { n })
        }
        "nested" if fields.len() == 3 => Ok(GroupSpec::Nested { p: number(1, "p")?, s: number(2, "s")? as u32 }),
        _ => Err(syntax(offset, format!("unrecognized group spec {text:?}"))),
    }
}

fn top_level_last_comma(text: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut last = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => last = Some(i),
            _ => {}
        }
    }
    last
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let lead = text.len() - text.trim_start().len();
        parse_at(trimmed, lead)
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteMetricGroup> {
        let group = match self {
            GroupSpec::CyclicLee { p } => make_cyclic_lee(*p)?,
            GroupSpec::SymmetricHamming { n } => make_symmetric_hamming(*n)?.metric_group()?,
            GroupSpec::Nested { p, s } => make_nested_cyclic(*p, *s)?,
            GroupSpec::Shift { base, eps } => shift_metric(&base.build()?, eps)?,
            GroupSpec::Regular { base } => regular_metric_group(&base.build()?)?,
        };
        Ok(group.renamed(self.to_string()))
    }
}

/// Parses and builds a group spec in one step.
pub fn build_group(spec: &str) -> Result<FiniteMetricGroup> {
    spec.parse::<GroupSpec>()?.build()
}
