//! The modal logic with `tt`, conjunction and threshold diamonds.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::process::Lmp;
use super::stable::threshold_set;
use crate::error::{Error, Result};
use crate::measurable::relation::critical_thresholds;
use crate::measurable::{relation_of, Cmp, Rel, StateSet};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Formula {
    True,
    And(Box<Formula>, Box<Formula>),
    Diamond { label: String, cmp: Cmp, q: Rational, body: Box<Formula> },
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn diamond(label: &str, cmp: Cmp, q: Rational, body: Formula) -> Formula {
        Formula::Diamond { label: label.to_string(), cmp, q, body: Box::new(body) }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::True => 0,
            Formula::And(a, b) => a.depth().max(b.depth()),
            Formula::Diamond { body, .. } => 1 + body.depth(),
        }
    }

    /// `true` when every comparator is `>`.
    pub fn is_strict(&self) -> bool {
        match self {
            Formula::True => true,
            Formula::And(a, b) => a.is_strict() && b.is_strict(),
            Formula::Diamond { cmp, body, .. } => *cmp == Cmp::Gt && body.is_strict(),
        }
    }

    fn first_non_strict(&self) -> Option<Cmp> {
        match self {
            Formula::True => None,
            Formula::And(a, b) => a.first_non_strict().or_else(|| b.first_non_strict()),
            Formula::Diamond { cmp, body, .. } => {
                if *cmp != Cmp::Gt {
                    Some(*cmp)
                } else {
                    body.first_non_strict()
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("tt"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Diamond { label, cmp, q, body } => write!(f, "<{label}>{{{cmp}{q}}} {body}"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::SyntaxError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected {tok:?}"))
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if pred(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn formula(&mut self) -> Result<Formula> {
        self.skip_ws();
        if self.eat("tt") {
            return Ok(Formula::True);
        }
        if self.eat("(") {
            let a = self.formula()?;
            self.expect("&")?;
            let b = self.formula()?;
            self.expect(")")?;
            return Ok(Formula::and(a, b));
        }
        if self.eat("<") {
            self.skip_ws();
            let label = self.take_while(|c| c.is_alphanumeric() || "_'.-".contains(c));
            if label.is_empty() {
                return self.err("expected a label");
            }
            let label = label.to_string();
            self.expect(">")?;
            self.expect("{")?;
            self.skip_ws();
            let cmp = if self.eat("<=") {
                Cmp::Le
            } else if self.eat(">=") {
                Cmp::Ge
            } else if self.eat("<") {
                Cmp::Lt
            } else if self.eat(">") {
                Cmp::Gt
            } else {
                return self.err("expected a comparator");
            };
            self.skip_ws();
            let at = self.pos;
            let lit = self.take_while(|c| c.is_ascii_digit() || c == '/' || c == '-');
            let q: Rational = match lit.parse() {
                Ok(q) => q,
                Err(_) => {
                    self.pos = at;
                    return self.err("expected a rational");
                }
            };
            if !q.in_unit_interval() {
                self.pos = at;
                return self.err("threshold outside [0,1]");
            }
            self.expect("}")?;
            let body = self.formula()?;
            return Ok(Formula::Diamond { label, cmp, q, body: Box::new(body) });
        }
        self.err("expected tt, ( or <")
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// ⟦φ⟧ with any comparator; the result is tagged by the caller.
pub fn semantics_any(lmp: &Lmp, phi: &Formula) -> Result<StateSet> {
    match phi {
        Formula::True => Ok(lmp.space().full()),
        Formula::And(a, b) => Ok(semantics_any(lmp, a)? & semantics_any(lmp, b)?),
        Formula::Diamond { label, cmp, q, body } => {
            let a = lmp.label_index(label)?;
            let inner = semantics_any(lmp, body)?;
            let mask = lmp.space().atom_mask(inner)?;
            Ok((0..lmp.len())
                .filter(|&s| cmp.holds(&lmp.tau_atoms(a, s, mask), q))
                .fold(0, |acc, s| acc | 1 << s))
        }
    }
}

/// ⟦φ⟧ for formulas using only `>`.
pub fn semantics(lmp: &Lmp, phi: &Formula) -> Result<StateSet> {
    if let Some(c) = phi.first_non_strict() {
        return Err(Error::UnsupportedComparator(c.to_string()));
    }
    semantics_any(lmp, phi)
}

/// Formulas of depth at most `depth`, one per distinct denotation, using
/// thresholds that realize every distinct threshold set.
pub fn formulas_up_to(lmp: &Lmp, depth: usize) -> Result<BTreeMap<StateSet, Formula>> {
    let mut known: BTreeMap<StateSet, Formula> = BTreeMap::new();
    known.insert(lmp.space().full(), Formula::True);
    for _ in 0..depth {
        let current: Vec<(StateSet, Formula)> = known.iter().map(|(k, v)| (*k, v.clone())).collect();
        let mut fresh = Vec::new();
        for (set, phi) in &current {
            for (a, label) in lmp.labels().iter().enumerate() {
                let mask = lmp.space().atom_mask(*set)?;
                let values: Vec<Rational> = (0..lmp.len()).map(|s| lmp.tau_atoms(a, s, mask)).collect();
                for q in critical_thresholds(values.iter()) {
                    let t = threshold_set(lmp, a, *set, &q)?;
                    fresh.push((t, Formula::diamond(label, Cmp::Gt, q, phi.clone())));
                }
            }
        }
        for (t, phi) in fresh {
            known.entry(t).or_insert(phi);
        }
        // close under conjunction
        loop {
            let sets: Vec<(StateSet, Formula)> = known.iter().map(|(k, v)| (*k, v.clone())).collect();
            let mut grew = false;
            for (i, (a, fa)) in sets.iter().enumerate() {
                for (b, fb) in &sets[i + 1..] {
                    if !known.contains_key(&(a & b)) {
                        known.insert(a & b, Formula::and(fa.clone(), fb.clone()));
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }
    Ok(known)
}

/// Logical equivalence restricted to formulas of bounded depth.
pub fn logical_equivalence(lmp: &Lmp, depth: usize) -> Result<Rel> {
    let sets: Vec<StateSet> = formulas_up_to(lmp, depth)?.into_keys().collect();
    Ok(relation_of(lmp.space(), &sets))
}

/// A formula true at `s` and false at `t`, or the reverse, if one of depth
/// at most `depth` exists.
pub fn distinguishing_formula(lmp: &Lmp, s: usize, t: usize, depth: usize) -> Result<Option<(Formula, bool)>> {
    for (set, phi) in formulas_up_to(lmp, depth)? {
        let (in_s, in_t) = (set >> s & 1 == 1, set >> t & 1 == 1);
        if in_s != in_t {
            return Ok(Some((phi, in_s)));
        }
    }
    Ok(None)
}
