//! Generalised regular expressions over complement: construction,
//! star-height, parsing and printing.
//!
//! Expressions are immutable trees ([`GenExpr`]) with [`Arc`]-shared
//! children, so cloning is cheap and repeated subexpressions (wedges,
//! zero-occurrence languages, ...) are stored once. All constructors go
//! through the `smart_*` family, which applies a fixed set of local
//! rewrites that never increase star-height:
//!
//! * `∅ ∪ E → E`, `E ∪ ∅ → E`, `E ∪ E → E`
//! * `∅·E → ∅`, `E·∅ → ∅`, `ε·E → E`, `E·ε → E`
//! * `(E^c)^c → E`
//! * `∅* → ε`, `ε* → ε`
//!
//! No other simplification is performed; in particular nested stars are
//! kept as written so that the measured height of a tree is trustworthy.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

mod parser;

pub use parser::{parse, ParseError};

/// A single letter, restricted to `'a'..='z'`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(char);

impl Letter {
    pub fn new(c: char) -> Result<Letter, AlphabetError> {
        if c.is_ascii_lowercase() {
            Ok(Letter(c))
        } else {
            Err(AlphabetError::NotALetter(c))
        }
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must contain at least one letter")]
    Empty,
    #[error("'{0}' is not a letter in 'a'..='z'")]
    NotALetter(char),
    #[error("duplicate letter '{0}'")]
    Duplicate(char),
}

/// A finite, non-empty, ordered set of letters.
///
/// Iteration follows declaration order, which makes every construction
/// that folds over the alphabet deterministic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: Vec<Letter>) -> Result<Alphabet, AlphabetError> {
        if letters.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (pos, x) in letters.iter().enumerate() {
            if letters[..pos].contains(x) {
                return Err(AlphabetError::Duplicate(x.as_char()));
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn contains(&self, x: Letter) -> bool {
        self.letters.contains(&x)
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + '_ {
        self.letters.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl FromStr for Alphabet {
    type Err = AlphabetError;

    fn from_str(s: &str) -> Result<Alphabet, AlphabetError> {
        Alphabet::new(s.chars().map(Letter::new).collect::<Result<_, _>>()?)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.letters {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Shared handle to an expression node.
pub type Expr = Arc<GenExpr>;

/// A generalised regular expression: the usual basic expressions and
/// operations plus complement.
#[derive(Clone, Eq, Debug)]
pub enum GenExpr {
    EmptySet,
    Epsilon,
    Lit(Letter),
    Union(Expr, Expr),
    Concat(Expr, Expr),
    Star(Expr),
    Complement(Expr),
}

// Structural equality with a pointer fast path: shared subtrees compare
// in O(1).
impl PartialEq for GenExpr {
    fn eq(&self, other: &Self) -> bool {
        use GenExpr::*;
        fn arc_eq(a: &Expr, b: &Expr) -> bool {
            Arc::ptr_eq(a, b) || **a == **b
        }
        match (self, other) {
            (EmptySet, EmptySet) | (Epsilon, Epsilon) => true,
            (Lit(a), Lit(b)) => a == b,
            (Union(a1, b1), Union(a2, b2)) | (Concat(a1, b1), Concat(a2, b2)) => {
                arc_eq(a1, a2) && arc_eq(b1, b2)
            }
            (Star(a), Star(b)) | (Complement(a), Complement(b)) => arc_eq(a, b),
            _ => false,
        }
    }
}

impl GenExpr {
    pub fn empty() -> Expr {
        Arc::new(GenExpr::EmptySet)
    }

    pub fn epsilon() -> Expr {
        Arc::new(GenExpr::Epsilon)
    }

    pub fn lit(x: Letter) -> Expr {
        Arc::new(GenExpr::Lit(x))
    }

    /// `A* = ∅^c`, the universal language.
    pub fn universe() -> Expr {
        GenExpr::complement(GenExpr::empty())
    }

    pub fn union(l: Expr, r: Expr) -> Expr {
        match (&*l, &*r) {
            (GenExpr::EmptySet, _) => r,
            (_, GenExpr::EmptySet) => l,
            _ if l == r => l,
            _ => Arc::new(GenExpr::Union(l, r)),
        }
    }

    pub fn concat(l: Expr, r: Expr) -> Expr {
        match (&*l, &*r) {
            (GenExpr::EmptySet, _) | (_, GenExpr::EmptySet) => GenExpr::empty(),
            (GenExpr::Epsilon, _) => r,
            (_, GenExpr::Epsilon) => l,
            _ => Arc::new(GenExpr::Concat(l, r)),
        }
    }

    pub fn star(inner: Expr) -> Expr {
        match &*inner {
            GenExpr::EmptySet | GenExpr::Epsilon => GenExpr::epsilon(),
            _ => Arc::new(GenExpr::Star(inner)),
        }
    }

    pub fn complement(inner: Expr) -> Expr {
        match &*inner {
            GenExpr::Complement(e) => e.clone(),
            _ => Arc::new(GenExpr::Complement(inner)),
        }
    }

    /// `E ∩ F`, written through De Morgan as `((E^c) ∪ (F^c))^c`.
    /// Star-height is `max(h(E), h(F))`.
    pub fn intersect(l: Expr, r: Expr) -> Expr {
        GenExpr::complement(GenExpr::union(GenExpr::complement(l), GenExpr::complement(r)))
    }

    /// `E \ F = E ∩ F^c`.
    pub fn difference(l: Expr, r: Expr) -> Expr {
        GenExpr::intersect(l, GenExpr::complement(r))
    }

    /// Star-height of this tree: stars add one, complement is free,
    /// union and concatenation take the maximum of their children.
    pub fn star_height(&self) -> StarHeight {
        fn go(e: &GenExpr, memo: &mut HashMap<*const GenExpr, u32>) -> u32 {
            fn child(e: &Expr, memo: &mut HashMap<*const GenExpr, u32>) -> u32 {
                let key = Arc::as_ptr(e);
                if let Some(&h) = memo.get(&key) {
                    return h;
                }
                let h = go(e, memo);
                memo.insert(key, h);
                h
            }
            match e {
                GenExpr::EmptySet | GenExpr::Epsilon | GenExpr::Lit(_) => 0,
                GenExpr::Union(l, r) | GenExpr::Concat(l, r) => {
                    child(l, memo).max(child(r, memo))
                }
                GenExpr::Star(inner) => child(inner, memo) + 1,
                GenExpr::Complement(inner) => child(inner, memo),
            }
        }
        StarHeight(go(self, &mut HashMap::new()))
    }

    /// Render in the concrete grammar accepted by [`parse`]. Parsing the
    /// result reproduces this tree exactly.
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_at(self, Level::Union, &mut out);
        out
    }

    /// Indented one-node-per-line structural form.
    pub fn tree_string(&self) -> String {
        fn go(e: &GenExpr, depth: usize, out: &mut String) {
            let pad = "  ".repeat(depth);
            match e {
                GenExpr::EmptySet => out.push_str(&format!("{pad}EmptySet\n")),
                GenExpr::Epsilon => out.push_str(&format!("{pad}Epsilon\n")),
                GenExpr::Lit(x) => out.push_str(&format!("{pad}Lit {x}\n")),
                GenExpr::Union(l, r) => {
                    out.push_str(&format!("{pad}Union\n"));
                    go(l, depth + 1, out);
                    go(r, depth + 1, out);
                }
                GenExpr::Concat(l, r) => {
                    out.push_str(&format!("{pad}Concat\n"));
                    go(l, depth + 1, out);
                    go(r, depth + 1, out);
                }
                GenExpr::Star(inner) => {
                    out.push_str(&format!("{pad}Star\n"));
                    go(inner, depth + 1, out);
                }
                GenExpr::Complement(inner) => {
                    out.push_str(&format!("{pad}Complement\n"));
                    go(inner, depth + 1, out);
                }
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }
}

/// The star-height of an expression.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StarHeight(pub u32);

impl fmt::Display for StarHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Precedence levels of the concrete grammar. Union is left-associative,
// concatenation folds to the right, star is postfix on an atom, and
// complement is itself an atom.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Union = 0,
    Concat = 1,
    Postfix = 2,
    Atom = 3,
}

fn level_of(e: &GenExpr) -> Level {
    match e {
        GenExpr::Union(..) => Level::Union,
        GenExpr::Concat(..) => Level::Concat,
        GenExpr::Star(_) => Level::Postfix,
        GenExpr::EmptySet | GenExpr::Epsilon | GenExpr::Lit(_) | GenExpr::Complement(_) => {
            Level::Atom
        }
    }
}

fn render_at(e: &GenExpr, min: Level, out: &mut String) {
    if level_of(e) < min {
        out.push('(');
        render_at(e, Level::Union, out);
        out.push(')');
        return;
    }
    match e {
        GenExpr::EmptySet => out.push('0'),
        GenExpr::Epsilon => out.push('1'),
        GenExpr::Lit(x) => out.push(x.as_char()),
        GenExpr::Union(l, r) => {
            render_at(l, Level::Union, out);
            out.push('|');
            render_at(r, Level::Concat, out);
        }
        GenExpr::Concat(l, r) => {
            render_at(l, Level::Postfix, out);
            render_at(r, Level::Concat, out);
        }
        GenExpr::Star(inner) => {
            render_at(inner, Level::Postfix, out);
            out.push('*');
        }
        GenExpr::Complement(inner) => {
            out.push('!');
            render_at(inner, Level::Atom, out);
        }
    }
}

impl fmt::Display for GenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
