//! Pareto dominance over cost vectors and skyline extraction.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dim {
    pub name: String,
    pub sense: Sense,
}

impl Dim {
    pub fn new(name: impl Into<String>, sense: Sense) -> Self {
        Self { name: name.into(), sense }
    }
}

/// Ordered dimension list shared by every vector of one query.
pub type Schema = Arc<[Dim]>;

/// Per-object cost vector. Values are stored in minimize form: maximize
/// dimensions hold the negated attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector<T> {
    pub owner: String,
    pub schema: Schema,
    pub values: Vec<T>,
    pub unreachable: bool,
}

impl<T: Scalar> CostVector<T> {
    pub fn new(owner: impl Into<String>, schema: Schema, values: Vec<T>) -> Self {
        debug_assert_eq!(schema.len(), values.len());
        Self { owner: owner.into(), schema, values, unreachable: false }
    }

    pub fn unreachable(owner: impl Into<String>, schema: Schema) -> Self {
        let values = vec![T::infinity(); schema.len()];
        Self { owner: owner.into(), schema, values, unreachable: true }
    }

    /// Value in its natural sense (maximize dimensions un-negated).
    pub fn natural(&self, dim: usize) -> T {
        match self.schema[dim].sense {
            Sense::Minimize => self.values[dim],
            Sense::Maximize => -self.values[dim],
        }
    }

    pub fn same_costs(&self, other: &Self) -> bool {
        self.owner == other.owner && self.values == other.values && self.schema == other.schema
    }
}

/// Strict Pareto dominance: `a` no worse than `b` everywhere and strictly
/// better somewhere.
pub fn dominates<T: Scalar>(a: &CostVector<T>, b: &CostVector<T>) -> Result<bool> {
    if !Arc::ptr_eq(&a.schema, &b.schema) && a.schema != b.schema {
        return Err(Error::SchemaMismatch);
    }
    for v in [a, b] {
        if v.unreachable {
            return Err(Error::UnreachableVector(v.owner.clone()));
        }
    }
    Ok(dominates_values(&a.values, &b.values))
}

pub(crate) fn dominates_values<T: Scalar>(a: &[T], b: &[T]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

fn lex_cmp<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

/// Vectors not dominated by any other input, ordered by owner. Unreachable
/// vectors are ignored; equal vectors with distinct owners are all kept.
///
/// Inputs are visited in lexicographic order, in which a dominator always
/// precedes what it dominates, so comparing against the members found so far
/// is enough.
pub fn skyline_of<T: Scalar>(vectors: Vec<CostVector<T>>) -> Vec<CostVector<T>> {
    let mut pending: Vec<CostVector<T>> = vectors.into_iter().filter(|v| !v.unreachable).collect();
    pending.sort_by(|a, b| lex_cmp(&a.values, &b.values).then_with(|| a.owner.cmp(&b.owner)));
    let mut members: Vec<CostVector<T>> = Vec::new();
    for v in pending {
        if !members.iter().any(|m| dominates_values(&m.values, &v.values)) {
            members.push(v);
        }
    }
    members.sort_by(|a, b| a.owner.cmp(&b.owner));
    members
}

/// Answer of one skyline computation plus its cost metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct SkylineResult<T> {
    /// Skyline members ordered by owner id.
    pub members: Vec<CostVector<T>>,
    /// Network revision the answer was computed against.
    pub revision: u64,
    /// Settled search nodes plus expanded baseline entries.
    pub expansions: u64,
    pub cpu_nanos: u64,
    pub warnings: Vec<String>,
}

impl<T: Scalar> SkylineResult<T> {
    pub fn empty(revision: u64) -> Self {
        Self { members: Vec::new(), revision, expansions: 0, cpu_nanos: 0, warnings: Vec::new() }
    }

    pub fn member_ids(&self) -> Vec<&str> {
        self.members.iter().map(|m| m.owner.as_str()).collect()
    }

    /// Same members with bit-identical cost vectors.
    pub fn same_answer(&self, other: &Self) -> bool {
        self.members.len() == other.members.len()
            && self.members.iter().zip(&other.members).all(|(a, b)| a.same_costs(b))
    }
}
