//! Prolog's search strategy as a resumable continuation-based traversal.
//! After each answer the caller decides: `cont` searches on, `halt`
//! abandons every remaining alternative.

use super::{Budget, EngineError, Frame, Interp, QList, Unification};
use crate::chainir::{Name, Registry};
use crate::terms::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Cont,
    Halt,
}

/// Lazily produced answers of `x ; qs`.
pub struct Enumeration<'r> {
    interp: Interp<'r>,
    budget: Budget,
    stack: Vec<Frame>,
    halted: bool,
}

impl<'r> Enumeration<'r> {
    pub(super) fn new(interp: Interp<'r>, x: &Term, qs: &[Name]) -> Enumeration<'r> {
        Enumeration {
            budget: Budget::new(interp.budget),
            interp,
            stack: vec![Frame::Goal(x.clone(), QList::from_slice(qs))],
            halted: false,
        }
    }

    /// Searches until the next answer. `Ok(None)` once the search space is
    /// exhausted or the enumeration was halted.
    pub fn resume(&mut self) -> Result<Option<Term>, EngineError> {
        if self.halted {
            return Ok(None);
        }
        while let Some(frame) = self.stack.pop() {
            if let Some(answer) = self.interp.dfs_step(frame, &mut self.stack, &mut self.budget)? {
                return Ok(Some(answer));
            }
        }
        Ok(None)
    }

    /// Drops the remaining search.
    pub fn halt(&mut self) {
        self.halted = true;
        self.stack.clear();
    }

    /// Applies a user decision: `Cont` resumes, `Halt` stops.
    pub fn control(&mut self, c: Control) -> Result<Option<Term>, EngineError> {
        match c {
            Control::Cont => self.resume(),
            Control::Halt => {
                self.halt();
                Ok(None)
            }
        }
    }

    /// Composition steps taken so far.
    pub fn steps(&self) -> u64 {
        self.budget.used
    }

    /// Frames still waiting to be explored.
    pub fn pending(&self) -> usize {
        self.stack.len()
    }

    pub fn is_halted(&self) -> bool {
        self.halted
    }

    /// Runs to exhaustion.
    pub fn collect_all(mut self) -> Result<Vec<Term>, EngineError> {
        let mut out = Vec::new();
        while let Some(a) = self.resume()? {
            out.push(a);
        }
        Ok(out)
    }
}

pub fn enumerate_prolog<'r>(x: &Term, qs: &[Name], r: &'r Registry, uni: Unification) -> Enumeration<'r> {
    Enumeration::new(Interp::new(r, uni), x, qs)
}
