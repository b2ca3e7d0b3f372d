//! Increasing and decreasing filtrations with finitely many recorded
//! steps.  An increasing filtration is zero below its lowest recorded
//! step and constant above its highest.  A decreasing filtration is full
//! below its lowest recorded step and zero above its highest.  Between
//! recorded steps the value carries over from the nearest step below.

use crate::mat::Mat;
use crate::scalar::{Gauss, Rat};
use crate::subspace::{Quot, Subspace};
use num::traits::Num;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct IncFiltration<T> {
    pub ambient: usize,
    steps: BTreeMap<i64, Subspace<T>>,
}

#[derive(Clone, Debug)]
pub struct DecFiltration<T> {
    pub ambient: usize,
    steps: BTreeMap<i64, Subspace<T>>,
}

impl<T: Num + Clone> IncFiltration<T> {
    pub fn new(ambient: usize, steps: BTreeMap<i64, Subspace<T>>) -> Self {
        for s in steps.values() {
            assert_eq!(s.ambient, ambient, "filtration step in wrong ambient space");
        }
        IncFiltration { ambient, steps }
    }

    pub fn pure(ambient: usize, w: i64) -> Self {
        let mut steps = BTreeMap::new();
        steps.insert(w, Subspace::full(ambient));
        IncFiltration::new(ambient, steps)
    }

    pub fn at(&self, w: i64) -> Subspace<T> {
        match self.steps.range(..=w).next_back() {
            Some((_, s)) => s.clone(),
            None => Subspace::zero(self.ambient),
        }
    }

    pub fn recorded(&self) -> Vec<i64> {
        self.steps.keys().cloned().collect()
    }

    pub fn min_recorded(&self) -> Option<i64> {
        self.steps.keys().next().cloned()
    }

    pub fn max_recorded(&self) -> Option<i64> {
        self.steps.keys().next_back().cloned()
    }

    pub fn insert(&mut self, w: i64, s: Subspace<T>) {
        assert_eq!(s.ambient, self.ambient);
        self.steps.insert(w, s);
    }

    /// Weights where the dimension actually jumps.
    pub fn jumps(&self) -> Vec<i64> {
        self.normalized().keys().cloned().collect()
    }

    pub fn validate(&self) -> Result<(), String> {
        let keys = self.recorded();
        if keys.is_empty() {
            return Err("increasing filtration with no steps".into());
        }
        for pair in keys.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if !self.at(b).contains(&self.at(a)) {
                return Err(format!("filtration not nested between {} and {}", a, b));
            }
        }
        if !self.at(*keys.last().unwrap()).is_full() {
            return Err("increasing filtration is not exhaustive".into());
        }
        Ok(())
    }

    /// Quotient at(w)/at(w-1) with its canonical section.
    pub fn graded(&self, w: i64) -> Quot<T> {
        Quot::new(&self.at(w), &self.at(w - 1))
    }

    pub fn graded_dim(&self, w: i64) -> usize {
        self.at(w).dim() - self.at(w - 1).dim()
    }

    /// Image of s intersect at(w) in the graded quotient at w.
    pub fn graded_piece(&self, w: i64, s: &Subspace<T>) -> Subspace<T> {
        self.graded(w).project_subspace(s)
    }

    pub fn shift(&self, c: i64) -> Self {
        let steps = self
            .steps
            .iter()
            .map(|(&w, s)| (w + c, s.clone()))
            .collect();
        IncFiltration::new(self.ambient, steps)
    }

    /// Minimal step map producing the same value at every integer.
    pub fn normalized(&self) -> BTreeMap<i64, Subspace<T>> {
        let mut out = BTreeMap::new();
        let (Some(lo), Some(hi)) = (self.min_recorded(), self.max_recorded()) else {
            return out;
        };
        let mut prev = Subspace::zero(self.ambient);
        for w in lo..=hi {
            let cur = self.at(w);
            if cur != prev {
                out.insert(w, cur.clone());
            }
            prev = cur;
        }
        out
    }

    /// Transports the filtration into a quotient along its section.
    pub fn in_quot(&self, q: &Quot<T>) -> IncFiltration<T> {
        let steps = self
            .steps
            .iter()
            .map(|(&w, s)| (w, q.project_subspace(s)))
            .collect();
        IncFiltration::new(q.dim(), steps)
    }

    pub fn apply(&self, m: &Mat<T>) -> IncFiltration<T> {
        let steps = self.steps.iter().map(|(&w, s)| (w, s.apply(m))).collect();
        IncFiltration::new(m.rows, steps)
    }
}

impl<T: Num + Clone> PartialEq for IncFiltration<T> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.normalized() == other.normalized()
    }
}

impl<T: Num + Clone> DecFiltration<T> {
    pub fn new(ambient: usize, steps: BTreeMap<i64, Subspace<T>>) -> Self {
        for s in steps.values() {
            assert_eq!(s.ambient, ambient, "filtration step in wrong ambient space");
        }
        DecFiltration { ambient, steps }
    }

    pub fn at(&self, p: i64) -> Subspace<T> {
        if let Some(mx) = self.max_recorded() {
            if p > mx {
                return Subspace::zero(self.ambient);
            }
        }
        match self.steps.range(..=p).next_back() {
            Some((_, s)) => s.clone(),
            None => Subspace::full(self.ambient),
        }
    }

    pub fn recorded(&self) -> Vec<i64> {
        self.steps.keys().cloned().collect()
    }

    pub fn min_recorded(&self) -> Option<i64> {
        self.steps.keys().next().cloned()
    }

    pub fn max_recorded(&self) -> Option<i64> {
        self.steps.keys().next_back().cloned()
    }

    pub fn insert(&mut self, p: i64, s: Subspace<T>) {
        assert_eq!(s.ambient, self.ambient);
        self.steps.insert(p, s);
    }

    pub fn validate(&self) -> Result<(), String> {
        let keys = self.recorded();
        if keys.is_empty() {
            return Err("decreasing filtration with no steps".into());
        }
        for pair in keys.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if !self.at(a).contains(&self.at(b)) {
                return Err(format!("filtration not nested between {} and {}", a, b));
            }
        }
        if !self.at(keys[0]).is_full() {
            return Err("decreasing filtration does not start at the full space".into());
        }
        Ok(())
    }

    /// Minimal step map producing the same value at every integer.
    pub fn normalized(&self) -> BTreeMap<i64, Subspace<T>> {
        let mut out = BTreeMap::new();
        let (Some(lo), Some(hi)) = (self.min_recorded(), self.max_recorded()) else {
            return out;
        };
        let mut prev = Subspace::full(self.ambient);
        for p in lo..=(hi + 1) {
            let cur = self.at(p);
            if cur != prev {
                out.insert(p, cur.clone());
            }
            prev = cur;
        }
        out
    }

    pub fn in_quot(&self, q: &Quot<T>) -> DecFiltration<T> {
        let steps = self
            .steps
            .iter()
            .map(|(&p, s)| (p, q.project_subspace(s)))
            .collect();
        DecFiltration::new(q.dim(), steps)
    }

    pub fn apply(&self, m: &Mat<T>) -> DecFiltration<T> {
        let steps = self.steps.iter().map(|(&p, s)| (p, s.apply(m))).collect();
        DecFiltration::new(m.rows, steps)
    }
}

impl<T: Num + Clone> PartialEq for DecFiltration<T> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.normalized() == other.normalized()
    }
}

impl IncFiltration<Rat> {
    pub fn lift(&self) -> IncFiltration<Gauss> {
        let steps = self.steps.iter().map(|(&w, s)| (w, s.lift())).collect();
        IncFiltration::new(self.ambient, steps)
    }
}

impl DecFiltration<Gauss> {
    pub fn conj(&self) -> DecFiltration<Gauss> {
        let steps = self.steps.iter().map(|(&p, s)| (p, s.conj())).collect();
        DecFiltration::new(self.ambient, steps)
    }
}
