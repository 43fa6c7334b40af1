use serde::{Deserialize, Serialize};

use crate::problems::DecisionVector;
use crate::{Error, Result};

/// A candidate and, once truly evaluated, its objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub x: DecisionVector,
    pub objective: Option<f64>,
    pub evaluated: bool,
}

impl Solution {
    pub fn unevaluated(x: DecisionVector) -> Self {
        Self { x, objective: None, evaluated: false }
    }

    pub fn evaluated(x: DecisionVector, f: f64) -> Result<Self> {
        if !f.is_finite() {
            return Err(Error::InvalidState(format!("objective value {f} is not finite")));
        }
        Ok(Self { x, objective: Some(f), evaluated: true })
    }

    /// Objective for evaluated solutions, `+inf` otherwise.
    pub fn f(&self) -> f64 {
        self.objective.filter(|_| self.evaluated).unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Population {
    pub members: Vec<Solution>,
    pub capacity: usize,
}

impl Population {
    pub fn new(capacity: usize) -> Self {
        Self { members: Vec::with_capacity(capacity), capacity }
    }

    pub fn from_members(members: Vec<Solution>, capacity: usize) -> Self {
        Self { members, capacity }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn points(&self) -> Vec<DecisionVector> {
        self.members.iter().map(|s| s.x.clone()).collect()
    }

    pub fn objectives(&self) -> Vec<f64> {
        self.members.iter().map(Solution::f).collect()
    }

    /// Member with the lowest objective; ties go to the earlier member.
    pub fn best(&self) -> Option<&Solution> {
        self.members.iter().reduce(|a, b| if b.f() < a.f() { b } else { a })
    }

    /// Keeps the `capacity` best members, stable on ties.
    pub fn truncate_best(&mut self) {
        self.members.sort_by(|a, b| a.f().total_cmp(&b.f()));
        self.members.truncate(self.capacity);
    }
}
