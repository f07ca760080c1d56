//! Substitutions with a trail, and unification with occurs check.

use std::sync::Arc;

use crate::term::{Compound, Term, VarId};

/// Variable bindings for one resolution context.
///
/// Slots are indexed by variable id. Every binding is recorded on the trail
/// so that [`Bindings::undo_to`] restores an earlier state exactly.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    slots: Vec<Option<Term>>,
    trail: Vec<VarId>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, v: VarId) -> Option<&Term> {
        self.slots.get(v.0 as usize).and_then(Option::as_ref)
    }

    pub fn is_bound(&self, v: VarId) -> bool {
        self.lookup(v).is_some()
    }

    /// Binds an unbound variable.
    pub fn bind(&mut self, v: VarId, value: Term) {
        let idx = v.0 as usize;
        if idx >= self.slots.len() {
            self.slots.resize(idx + 1, None);
        }
        debug_assert!(self.slots[idx].is_none(), "rebinding {v:?}");
        self.slots[idx] = Some(value);
        self.trail.push(v);
    }

    /// Current trail height, usable as an undo checkpoint.
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail underflow");
            self.slots[v.0 as usize] = None;
        }
    }

    /// Follows variable bindings until reaching a non-variable or an unbound
    /// variable.
    pub fn deref<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.lookup(*v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    /// Applies the substitution fully.
    pub fn resolve(&self, t: &Term) -> Term {
        match self.deref(t) {
            Term::Compound(c) => {
                if c.args.iter().all(|a| self.resolved_already(a)) {
                    return Term::Compound(c.clone());
                }
                Term::Compound(Arc::new(Compound {
                    functor: c.functor.clone(),
                    args: c.args.iter().map(|a| self.resolve(a)).collect(),
                }))
            }
            other => other.clone(),
        }
    }

    fn resolved_already(&self, t: &Term) -> bool {
        match t {
            Term::Var(v) => !self.is_bound(*v),
            Term::Compound(c) => c.args.iter().all(|a| self.resolved_already(a)),
            _ => true,
        }
    }

    fn occurs(&self, v: VarId, t: &Term) -> bool {
        match self.deref(t) {
            Term::Var(w) => *w == v,
            Term::Compound(c) => c.args.iter().any(|a| self.occurs(v, a)),
            _ => false,
        }
    }

    /// Unifies two terms with occurs check. On failure the bindings are
    /// left exactly as they were on entry.
    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let mark = self.mark();
        if self.unify_inner(a, b) {
            true
        } else {
            self.undo_to(mark);
            false
        }
    }

    fn unify_inner(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.deref(a).clone();
        let b = self.deref(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) => {
                if x != y {
                    // bind the younger variable to the older one
                    if x > y {
                        self.bind(*x, b.clone());
                    } else {
                        self.bind(*y, a.clone());
                    }
                }
                true
            }
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if self.occurs(*x, other) {
                    return false;
                }
                self.bind(*x, other.clone());
                true
            }
            (Term::Atom(x), Term::Atom(y)) => x == y,
            (Term::Int(x), Term::Int(y)) => x == y,
            (Term::Compound(x), Term::Compound(y)) => {
                if Arc::ptr_eq(x, y) {
                    return true;
                }
                if x.functor != y.functor || x.args.len() != y.args.len() {
                    return false;
                }
                x.args
                    .iter()
                    .zip(y.args.iter())
                    .all(|(p, q)| self.unify_inner(p, q))
            }
            _ => false,
        }
    }
}

/// Unifies `t1` and `t2` under `bindings`; see [`Bindings::unify`].
pub fn unify(t1: &Term, t2: &Term, bindings: &mut Bindings) -> bool {
    bindings.unify(t1, t2)
}
