use std::collections::{BTreeMap, BTreeSet};

use crate::lang::{Vocabulary, EQ, UNDEF};

use super::ModelError;

/// A domain element, as an index into [`FirstOrderModel::domain`].
pub type Value = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunInterp {
    /// Explicit graph; must cover every argument tuple over the domain.
    Table(BTreeMap<Vec<Value>, Value>),
    /// Sum of numeric values capped at the largest numeric domain value;
    /// undefined when an argument is not numeric.
    SaturatingAdd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredInterp {
    Table(BTreeSet<Vec<Value>>),
    /// Numeric `<`; false when an argument is not numeric.
    Less,
    /// Numeric `≤`; false when an argument is not numeric.
    LessEq,
}

/// A finite domain with a designated undefined element and interpretations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderModel {
    domain: Vec<String>,
    undef: Value,
    numeric: Vec<Option<u64>>,
    max_numeric: Option<Value>,
    constants: BTreeMap<String, Value>,
    functions: BTreeMap<String, (usize, FunInterp)>,
    predicates: BTreeMap<String, (usize, PredInterp)>,
}

impl FirstOrderModel {
    /// A model over `domain` whose undefined element is `domain[undef]`.
    ///
    /// Constants named like a domain element denote that element, and
    /// `undef` denotes the undefined element; others must be set explicitly.
    pub fn new(domain: Vec<String>, undef: Value) -> Result<Self, ModelError> {
        if undef >= domain.len() {
            return Err(ModelError::NoUndefined);
        }
        let distinct: BTreeSet<&String> = domain.iter().collect();
        if distinct.len() != domain.len() {
            return Err(ModelError::DuplicateValue);
        }
        let numeric: Vec<Option<u64>> = domain
            .iter()
            .enumerate()
            .map(|(i, d)| if i == undef { None } else { d.parse().ok() })
            .collect();
        let max_numeric = (0..domain.len())
            .filter(|&i| numeric[i].is_some())
            .max_by_key(|&i| numeric[i]);
        let mut constants: BTreeMap<String, Value> = domain
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != undef)
            .map(|(i, d)| (d.clone(), i))
            .collect();
        constants.insert(UNDEF.to_string(), undef);
        Ok(FirstOrderModel {
            domain,
            undef,
            numeric,
            max_numeric,
            constants,
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
        })
    }

    pub fn set_constant(&mut self, name: impl Into<String>, value: Value) -> Result<(), ModelError> {
        let name = name.into();
        if name == UNDEF && value != self.undef {
            return Err(ModelError::UndefRedefined);
        }
        self.check_value(value)?;
        self.constants.insert(name, value);
        Ok(())
    }

    pub fn set_function(&mut self, name: impl Into<String>, arity: usize, interp: FunInterp) -> Result<(), ModelError> {
        let name = name.into();
        if let FunInterp::Table(t) = &interp {
            let expected = self.domain.len().pow(arity as u32);
            let valid = t.iter().all(|(args, &v)| {
                args.len() == arity && args.iter().all(|&a| a < self.domain.len()) && v < self.domain.len()
            });
            if !valid || t.len() != expected {
                return Err(ModelError::PartialFunction(name));
            }
        }
        self.functions.insert(name, (arity, interp));
        Ok(())
    }

    pub fn set_predicate(&mut self, name: impl Into<String>, arity: usize, interp: PredInterp) -> Result<(), ModelError> {
        let name = name.into();
        if name == EQ {
            return Err(ModelError::EqualityRedefined);
        }
        if let PredInterp::Table(t) = &interp {
            if t.iter().any(|args| args.len() != arity || args.iter().any(|&a| a >= self.domain.len())) {
                return Err(ModelError::BadPredicate(name));
            }
        }
        self.predicates.insert(name, (arity, interp));
        Ok(())
    }

    fn check_value(&self, v: Value) -> Result<(), ModelError> {
        if v < self.domain.len() {
            Ok(())
        } else {
            Err(ModelError::UnknownValue(v.to_string()))
        }
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn undef(&self) -> Value {
        self.undef
    }

    pub fn value_name(&self, v: Value) -> &str {
        &self.domain[v]
    }

    pub fn value_named(&self, name: &str) -> Option<Value> {
        self.domain.iter().position(|d| d == name)
    }

    pub fn numeric_value(&self, v: Value) -> Option<u64> {
        self.numeric[v]
    }

    pub fn constants(&self) -> &BTreeMap<String, Value> {
        &self.constants
    }

    pub fn functions(&self) -> &BTreeMap<String, (usize, FunInterp)> {
        &self.functions
    }

    pub fn predicates(&self) -> &BTreeMap<String, (usize, PredInterp)> {
        &self.predicates
    }

    pub fn constant(&self, name: &str) -> Option<Value> {
        self.constants.get(name).copied()
    }

    pub fn apply(&self, fun: &str, args: &[Value]) -> Option<Value> {
        let (_, interp) = self.functions.get(fun)?;
        match interp {
            FunInterp::Table(t) => t.get(args).copied(),
            FunInterp::SaturatingAdd => {
                let mut sum = 0u64;
                for &a in args {
                    match self.numeric[a] {
                        Some(n) => sum = sum.saturating_add(n),
                        None => return Some(self.undef),
                    }
                }
                let max = self.max_numeric?;
                if sum >= self.numeric[max].expect("numeric") {
                    return Some(max);
                }
                Some(
                    (0..self.domain.len())
                        .find(|&i| self.numeric[i] == Some(sum))
                        .unwrap_or(max),
                )
            }
        }
    }

    pub fn holds(&self, pred: &str, args: &[Value]) -> Option<bool> {
        if pred == EQ {
            return Some(args.len() == 2 && args[0] == args[1]);
        }
        let (_, interp) = self.predicates.get(pred)?;
        let nums = || -> Option<(u64, u64)> {
            match args {
                [x, y] => Some((self.numeric[*x]?, self.numeric[*y]?)),
                _ => None,
            }
        };
        Some(match interp {
            PredInterp::Table(t) => t.contains(args),
            PredInterp::Less => nums().is_some_and(|(x, y)| x < y),
            PredInterp::LessEq => nums().is_some_and(|(x, y)| x <= y),
        })
    }

    /// Reports the first vocabulary symbol this model leaves uninterpreted.
    pub fn check_covers(&self, voc: &Vocabulary) -> Result<(), ModelError> {
        for c in voc.constants() {
            if !self.constants.contains_key(c) {
                return Err(ModelError::Uninterpreted(c.clone()));
            }
        }
        for (f, &n) in voc.functions() {
            match self.functions.get(f) {
                Some(&(m, _)) if m == n => {}
                _ => return Err(ModelError::Uninterpreted(format!("{f}/{n}"))),
            }
        }
        for (p, &n) in voc.predicates() {
            if p == EQ {
                continue;
            }
            match self.predicates.get(p) {
                Some(&(m, _)) if m == n => {}
                _ => return Err(ModelError::Uninterpreted(format!("{p}/{n}"))),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numbers(max: u64) -> FirstOrderModel {
        let mut dom: Vec<String> = (0..=max).map(|i| i.to_string()).collect();
        dom.push("U".into());
        let mut m = FirstOrderModel::new(dom, max as usize + 1).unwrap();
        m.set_function("plus", 2, FunInterp::SaturatingAdd).unwrap();
        m.set_predicate("leq", 2, PredInterp::LessEq).unwrap();
        m
    }

    #[test]
    fn saturating_add() {
        let m = numbers(4);
        assert_eq!(m.apply("plus", &[1, 2]), Some(3));
        assert_eq!(m.apply("plus", &[3, 3]), Some(4));
        assert_eq!(m.apply("plus", &[3, m.undef()]), Some(m.undef()));
    }

    #[test]
    fn builtin_order_is_false_on_undefined() {
        let m = numbers(4);
        assert_eq!(m.holds("leq", &[1, 1]), Some(true));
        assert_eq!(m.holds("leq", &[2, 1]), Some(false));
        assert_eq!(m.holds("leq", &[m.undef(), m.undef()]), Some(false));
        assert_eq!(m.holds(EQ, &[m.undef(), m.undef()]), Some(true));
    }

    #[test]
    fn tables_must_be_total() {
        let mut m = FirstOrderModel::new(vec!["x".into(), "U".into()], 1).unwrap();
        let partial = BTreeMap::from([(vec![0], 0)]);
        assert!(m.set_function("f", 1, FunInterp::Table(partial)).is_err());
        let total = BTreeMap::from([(vec![0], 0), (vec![1], 1)]);
        assert!(m.set_function("f", 1, FunInterp::Table(total)).is_ok());
    }

    #[test]
    fn constants_default_to_same_named_values() {
        let m = numbers(3);
        assert_eq!(m.constant("2"), Some(2));
        assert_eq!(m.constant(UNDEF), Some(m.undef()));
    }
}
