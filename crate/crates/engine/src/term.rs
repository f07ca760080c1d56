//! Terms: the single value type of the object language.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// An interned-by-value symbol. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Self {
        Atom(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

impl From<String> for Atom {
    fn from(s: String) -> Self {
        Atom(Arc::from(s))
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Identifier of a logic variable, unique within one resolution context.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarId(pub u32);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Compound {
    pub functor: Atom,
    pub args: Box<[Term]>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Atom(Atom),
    Int(i64),
    Var(VarId),
    Compound(Arc<Compound>),
}

/// Predicate indicator: functor name plus arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PredKey {
    pub name: Atom,
    pub arity: usize,
}

impl PredKey {
    pub fn new(name: impl Into<Atom>, arity: usize) -> Self {
        PredKey {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Atom::new(name))
    }

    pub fn int(value: i64) -> Term {
        Term::Int(value)
    }

    pub fn var(id: u32) -> Term {
        Term::Var(VarId(id))
    }

    /// Builds `functor(args...)`. An empty argument list yields an atom, since
    /// compounds always have arity at least one.
    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        Term::compound_from(Atom::new(functor), args)
    }

    pub fn compound_from(functor: Atom, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Atom(functor)
        } else {
            Term::Compound(Arc::new(Compound {
                functor,
                args: args.into_boxed_slice(),
            }))
        }
    }

    pub fn nil() -> Term {
        Term::atom("[]")
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::compound(".", vec![head, tail])
    }

    pub fn list(items: impl IntoIterator<Item = Term, IntoIter: DoubleEndedIterator>) -> Term {
        Term::list_with_tail(items, Term::nil())
    }

    pub fn list_with_tail(
        items: impl IntoIterator<Item = Term, IntoIter: DoubleEndedIterator>,
        tail: Term,
    ) -> Term {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::cons(item, acc))
    }

    /// Functor name and arity for callable terms.
    pub fn pred_key(&self) -> Option<PredKey> {
        match self {
            Term::Atom(a) => Some(PredKey::new(a.clone(), 0)),
            Term::Compound(c) => Some(PredKey::new(c.functor.clone(), c.args.len())),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(c) => &c.args,
            _ => &[],
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Term::Atom(a) => Some(a.as_str()),
            Term::Compound(c) => Some(c.functor.as_str()),
            _ => None,
        }
    }

    pub fn is_callable(&self) -> bool {
        matches!(self, Term::Atom(_) | Term::Compound(_))
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Term::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(i) => Some(*i),
            _ => None,
        }
    }

    /// True when `self` is the compound `name(..)` with the given arity.
    pub fn is_functor(&self, name: &str, arity: usize) -> bool {
        match self {
            Term::Compound(c) => c.args.len() == arity && c.functor.as_str() == name,
            Term::Atom(a) => arity == 0 && a.as_str() == name,
            _ => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Compound(c) => c.args.iter().all(Term::is_ground),
            _ => true,
        }
    }

    /// Calls `f` on every variable occurrence, left to right.
    pub fn visit_vars(&self, f: &mut impl FnMut(VarId)) {
        match self {
            Term::Var(v) => f(*v),
            Term::Compound(c) => c.args.iter().for_each(|a| a.visit_vars(f)),
            _ => {}
        }
    }

    /// Distinct variables in first-occurrence order.
    pub fn variables(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.visit_vars(&mut |v| {
            if !out.contains(&v) {
                out.push(v)
            }
        });
        out
    }

    pub fn max_var(&self) -> Option<VarId> {
        let mut max = None;
        self.visit_vars(&mut |v| {
            if max.is_none_or(|m| v > m) {
                max = Some(v)
            }
        });
        max
    }

    /// Copies the term with every variable id shifted by `offset`.
    pub fn offset_vars(&self, offset: u32) -> Term {
        match self {
            Term::Var(v) => Term::Var(VarId(v.0 + offset)),
            Term::Compound(c) => Term::Compound(Arc::new(Compound {
                functor: c.functor.clone(),
                args: c.args.iter().map(|a| a.offset_vars(offset)).collect(),
            })),
            other => other.clone(),
        }
    }

    /// Elements of a proper list, or `None` for partial or improper lists.
    pub fn list_items(&self) -> Option<Vec<Term>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Term::Atom(a) if a.as_str() == "[]" => return Some(out),
                Term::Compound(c) if c.functor.as_str() == "." && c.args.len() == 2 => {
                    out.push(c.args[0].clone());
                    cur = &c.args[1];
                }
                _ => return None,
            }
        }
    }

    /// Standard order of terms: Var < Int < Atom < Compound; compounds by
    /// arity, then name, then arguments left to right.
    pub fn standard_cmp(&self, other: &Term) -> Ordering {
        fn rank(t: &Term) -> u8 {
            match t {
                Term::Var(_) => 0,
                Term::Int(_) => 1,
                Term::Atom(_) => 2,
                Term::Compound(_) => 3,
            }
        }
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Int(a), Term::Int(b)) => a.cmp(b),
            (Term::Atom(a), Term::Atom(b)) => a.as_str().cmp(b.as_str()),
            (Term::Compound(a), Term::Compound(b)) => a
                .args
                .len()
                .cmp(&b.args.len())
                .then_with(|| a.functor.as_str().cmp(b.functor.as_str()))
                .then_with(|| {
                    a.args
                        .iter()
                        .zip(b.args.iter())
                        .map(|(x, y)| x.standard_cmp(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(Ordering::Equal)
                }),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl From<i64> for Term {
    fn from(v: i64) -> Self {
        Term::Int(v)
    }
}

impl From<Atom> for Term {
    fn from(a: Atom) -> Self {
        Term::Atom(a)
    }
}

impl From<&str> for Term {
    fn from(s: &str) -> Self {
        Term::atom(s)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::write::format_term(self, true))
    }
}

/// Quoted (`writeq`-style) rendering.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::write::format_term(self, true))
    }
}
