//! Language semantics for generalised regular expressions.
//!
//! Membership is decided by iterated Brzozowski derivatives; the
//! derivative commutes with complement (`d_x(E^c) = (d_x E)^c`), so the
//! full operation set is covered. Enumeration and bounded equivalence
//! walk the prefix tree of the alphabet, taking one derivative per tree
//! node and letter so common prefixes are shared. Nothing is memoised
//! across calls; within a call, shared subtrees are differentiated once.
//!
//! The module also houses the word combinatorics the rest of the crate
//! is checked against: factor occurrence counting (overlaps count) and
//! maximal borders.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::expr::{Alphabet, Expr, GenExpr, Letter};

/// Default ceiling for bounded enumeration and equivalence.
pub const ENUMERATION_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LangError {
    #[error("requested length {requested} exceeds the enumeration cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("the pattern word must be non-empty")]
    EmptyPattern,
    #[error("the word must be non-empty")]
    EmptyWord,
    #[error("'{0}' is not a letter in 'a'..='z'")]
    InvalidLetter(char),
    #[error("letter '{letter}' is not in alphabet {alphabet}")]
    LetterOutsideAlphabet { letter: char, alphabet: String },
}

/// A finite, possibly empty, sequence of letters.
///
/// Words are ordered by length first and lexicographically within a
/// length; that is the order used for word sets and counterexamples.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    /// Parse a string of letters in `'a'..='z'`. The empty string is ε.
    pub fn parse(text: &str) -> Result<Word, LangError> {
        text.chars()
            .map(|c| Letter::new(c).map_err(|_| LangError::InvalidLetter(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Parse and additionally require every letter to lie in `alphabet`.
    pub fn parse_in(text: &str, alphabet: &Alphabet) -> Result<Word, LangError> {
        let w = Word::parse(text)?;
        let stray = w.letters().find(|x| !alphabet.contains(*x));
        match stray {
            None => Ok(w),
            Some(x) => Err(LangError::LetterOutsideAlphabet {
                letter: x.as_char(),
                alphabet: alphabet.to_string(),
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    pub fn extended(&self, x: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(x);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// A deduplicated set of words in length-then-lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WordSet(Vec<Word>);

impl WordSet {
    pub fn contains(&self, w: &Word) -> bool {
        self.0.binary_search(w).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.0.iter()
    }
}

impl FromIterator<Word> for WordSet {
    fn from_iter<T: IntoIterator<Item = Word>>(iter: T) -> WordSet {
        let mut v: Vec<Word> = iter.into_iter().collect();
        v.sort();
        v.dedup();
        WordSet(v)
    }
}

impl IntoIterator for WordSet {
    type Item = Word;
    type IntoIter = std::vec::IntoIter<Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

/// Outcome of a bounded equivalence check.
///
/// `counterexample` is present exactly when `equivalent` is false, and
/// is then the shortest, lexicographically least word on which the two
/// languages disagree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivReport {
    pub equivalent: bool,
    pub counterexample: Option<Word>,
    pub max_len_checked: usize,
}

/// Does ε belong to the language?
pub fn nullable(e: &GenExpr) -> bool {
    fn child(e: &Expr, memo: &mut HashMap<*const GenExpr, bool>) -> bool {
        let key = Arc::as_ptr(e);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let v = go(e, memo);
        memo.insert(key, v);
        v
    }
    fn go(e: &GenExpr, memo: &mut HashMap<*const GenExpr, bool>) -> bool {
        match e {
            GenExpr::EmptySet | GenExpr::Lit(_) => false,
            GenExpr::Epsilon | GenExpr::Star(_) => true,
            GenExpr::Union(l, r) => child(l, memo) || child(r, memo),
            GenExpr::Concat(l, r) => child(l, memo) && child(r, memo),
            GenExpr::Complement(inner) => !child(inner, memo),
        }
    }
    go(e, &mut HashMap::new())
}

/// The Brzozowski derivative: `L(d_x e) = { v | xv ∈ L(e) }`.
///
/// The result is built with the smart constructors, so mismatching
/// branches collapse to ∅ as the derivative is taken.
pub fn derivative(e: &Expr, x: Letter) -> Expr {
    let mut ctx = DerivCtx {
        x,
        derivs: HashMap::new(),
        nullables: HashMap::new(),
    };
    ctx.deriv(e)
}

struct DerivCtx {
    x: Letter,
    derivs: HashMap<*const GenExpr, Expr>,
    nullables: HashMap<*const GenExpr, bool>,
}

impl DerivCtx {
    fn deriv(&mut self, e: &Expr) -> Expr {
        let key = Arc::as_ptr(e);
        if let Some(d) = self.derivs.get(&key) {
            return d.clone();
        }
        let d = match &**e {
            GenExpr::EmptySet | GenExpr::Epsilon => GenExpr::empty(),
            GenExpr::Lit(a) => {
                if *a == self.x {
                    GenExpr::epsilon()
                } else {
                    GenExpr::empty()
                }
            }
            GenExpr::Union(l, r) => GenExpr::union(self.deriv(l), self.deriv(r)),
            GenExpr::Concat(l, r) => {
                let left = GenExpr::concat(self.deriv(l), r.clone());
                if self.nullable(l) {
                    GenExpr::union(left, self.deriv(r))
                } else {
                    left
                }
            }
            GenExpr::Star(inner) => GenExpr::concat(self.deriv(inner), e.clone()),
            GenExpr::Complement(inner) => GenExpr::complement(self.deriv(inner)),
        };
        self.derivs.insert(key, d.clone());
        d
    }

    fn nullable(&mut self, e: &Expr) -> bool {
        let key = Arc::as_ptr(e);
        if let Some(&v) = self.nullables.get(&key) {
            return v;
        }
        let v = nullable(e);
        self.nullables.insert(key, v);
        v
    }
}

/// Is `w` in the language of `e`?
pub fn member(e: &Expr, w: &Word) -> bool {
    let mut d = e.clone();
    for x in w.letters() {
        if matches!(*d, GenExpr::EmptySet) {
            return false;
        }
        d = derivative(&d, x);
    }
    nullable(&d)
}

/// All words of length at most `max_len` in the language, under the
/// default cap of [`ENUMERATION_CAP`].
pub fn enumerate(e: &Expr, alphabet: &Alphabet, max_len: usize) -> Result<WordSet, LangError> {
    enumerate_capped(e, alphabet, max_len, ENUMERATION_CAP)
}

/// [`enumerate`] with an explicit cap.
pub fn enumerate_capped(
    e: &Expr,
    alphabet: &Alphabet,
    max_len: usize,
    cap: usize,
) -> Result<WordSet, LangError> {
    if max_len > cap {
        return Err(LangError::CapExceeded {
            requested: max_len,
            cap,
        });
    }
    let mut found = Vec::new();
    // Depth-first walk of the prefix tree; a subtree is dropped as soon
    // as its residual language is ∅.
    let mut stack = vec![(Word::empty(), e.clone())];
    while let Some((prefix, d)) = stack.pop() {
        if nullable(&d) {
            found.push(prefix.clone());
        }
        if prefix.len() < max_len {
            for x in alphabet.letters() {
                let dx = derivative(&d, x);
                if !matches!(*dx, GenExpr::EmptySet) {
                    stack.push((prefix.extended(x), dx));
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Compare two languages on every word of length at most `max_len`,
/// under the default cap of [`ENUMERATION_CAP`].
pub fn equiv_bounded(
    e1: &Expr,
    e2: &Expr,
    alphabet: &Alphabet,
    max_len: usize,
) -> Result<EquivReport, LangError> {
    equiv_bounded_capped(e1, e2, alphabet, max_len, ENUMERATION_CAP)
}

/// [`equiv_bounded`] with an explicit cap.
pub fn equiv_bounded_capped(
    e1: &Expr,
    e2: &Expr,
    alphabet: &Alphabet,
    max_len: usize,
    cap: usize,
) -> Result<EquivReport, LangError> {
    if max_len > cap {
        return Err(LangError::CapExceeded {
            requested: max_len,
            cap,
        });
    }
    let counterexample = |w: Word| EquivReport {
        equivalent: false,
        counterexample: Some(w),
        max_len_checked: max_len,
    };
    if nullable(e1) != nullable(e2) {
        return Ok(counterexample(Word::empty()));
    }
    // Breadth-first over word length; within a level the frontier is in
    // lexicographic order, so the first mismatch found is the least one.
    let mut frontier = vec![(Word::empty(), e1.clone(), e2.clone())];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for (prefix, d1, d2) in &frontier {
            for x in alphabet.letters() {
                let dx1 = derivative(d1, x);
                let dx2 = derivative(d2, x);
                if nullable(&dx1) != nullable(&dx2) {
                    return Ok(counterexample(prefix.extended(x)));
                }
                // Structurally equal residuals agree on every extension.
                if dx1 == dx2 {
                    continue;
                }
                if len < max_len {
                    next.push((prefix.extended(x), dx1, dx2));
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(EquivReport {
        equivalent: true,
        counterexample: None,
        max_len_checked: max_len,
    })
}

/// Every word over `alphabet` of length at most `max_len`, in
/// length-then-lexicographic order. The brute-force universe the
/// verification sweeps run over.
pub fn all_words_up_to(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::empty()];
    let mut level = vec![Word::empty()];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|w| alphabet.letters().map(move |x| w.extended(x)))
            .collect();
        all.extend(level.iter().cloned());
    }
    all
}

/// `|v|_w`: the number of start positions at which `w` occurs as a
/// factor of `v`. Overlapping occurrences all count.
pub fn count_occurrences(v: &Word, w: &Word) -> Result<usize, LangError> {
    if w.is_empty() {
        return Err(LangError::EmptyPattern);
    }
    Ok(v.as_slice()
        .windows(w.len())
        .filter(|window| *window == w.as_slice())
        .count())
}

/// The longest proper prefix of `w` that is also a suffix of `w`
/// (possibly ε).
pub fn maximal_border(w: &Word) -> Result<Word, LangError> {
    if w.is_empty() {
        return Err(LangError::EmptyWord);
    }
    let s = w.as_slice();
    let len = (0..s.len())
        .rev()
        .find(|&l| s[..l] == s[s.len() - l..])
        .expect("the empty prefix is always a border");
    Ok(Word::from_letters(s[..len].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        "ab".parse().unwrap()
    }

    fn letter(c: char) -> Letter {
        Letter::new(c).unwrap()
    }

    fn word(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn lit(c: char) -> Expr {
        GenExpr::lit(letter(c))
    }

    #[test]
    fn nullable_basics() {
        assert!(nullable(&GenExpr::star(lit('a'))));
        assert!(!nullable(&GenExpr::complement(GenExpr::epsilon())));
        assert!(!nullable(&GenExpr::concat(GenExpr::star(lit('a')), lit('b'))));
    }

    #[test]
    fn derivative_of_literal() {
        assert_eq!(*derivative(&lit('a'), letter('a')), GenExpr::Epsilon);
        assert_eq!(*derivative(&lit('a'), letter('b')), GenExpr::EmptySet);
    }

    #[test]
    fn derivative_applies_union_and_concat_rules() {
        // d_b(ab | b): d_b(ab) = ∅, d_b(b) = ε, union collapses to ε.
        let e = GenExpr::union(GenExpr::concat(lit('a'), lit('b')), lit('b'));
        assert_eq!(*derivative(&e, letter('b')), GenExpr::Epsilon);
    }

    #[test]
    fn derivative_commutes_with_complement() {
        let e = GenExpr::complement(lit('a'));
        let d = derivative(&e, letter('a'));
        assert_eq!(*d, *GenExpr::complement(GenExpr::epsilon()));
    }

    #[test]
    fn member_on_factor_exclusion() {
        let e = parse("!(!0 aa !0)", &ab()).unwrap();
        assert!(!member(&e, &word("aa")));
        assert!(member(&e, &word("aba")));
        assert!(member(&e, &Word::empty()));
    }

    #[test]
    fn member_of_empty_word_is_nullability() {
        let e = parse("a*b|1", &ab()).unwrap();
        assert_eq!(member(&e, &Word::empty()), nullable(&e));
    }

    #[test]
    fn enumerate_examples() {
        let a: Alphabet = "a".parse().unwrap();
        let got = enumerate(&parse("a*", &ab()).unwrap(), &ab(), 2).unwrap();
        let want: WordSet = [word(""), word("a"), word("aa")].into_iter().collect();
        assert_eq!(got, want);

        let got = enumerate(&parse("!0", &a).unwrap(), &a, 2).unwrap();
        let want: WordSet = [word(""), word("a"), word("aa")].into_iter().collect();
        assert_eq!(got, want);

        let got = enumerate(&parse("0", &ab()).unwrap(), &ab(), 3).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn enumerate_respects_cap() {
        let err = enumerate(&lit('a'), &ab(), 13).unwrap_err();
        assert_eq!(
            err,
            LangError::CapExceeded {
                requested: 13,
                cap: 12
            }
        );
        assert!(enumerate_capped(&lit('a'), &ab(), 13, 13).is_ok());
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let mut v = vec![word("b"), word("ab"), word("a"), word("")];
        v.sort();
        assert_eq!(v, vec![word(""), word("a"), word("b"), word("ab")]);
    }

    #[test]
    fn star_removal_identity_on_binary_alphabet() {
        // b* = A* \ (A*(A\{b})A*) over {a,b}.
        let e1 = parse("b*", &ab()).unwrap();
        let e2 = parse("!0 - (!0 a !0)", &ab()).unwrap();
        let report = equiv_bounded(&e1, &e2, &ab(), 5).unwrap();
        assert!(report.equivalent, "counterexample: {:?}", report.counterexample);
    }

    #[test]
    fn equiv_reports_least_counterexample() {
        let e1 = parse("a", &ab()).unwrap();
        let e2 = parse("a|aa", &ab()).unwrap();
        let report = equiv_bounded(&e1, &e2, &ab(), 2).unwrap();
        assert_eq!(report.counterexample, Some(word("aa")));
        assert!(!report.equivalent);
    }

    #[test]
    fn equiv_is_reflexive() {
        let e = parse("(a|b)*a!b", &ab()).unwrap();
        assert!(equiv_bounded(&e, &e, &ab(), 4).unwrap().equivalent);
    }

    #[test]
    fn count_occurrences_examples() {
        assert_eq!(count_occurrences(&word("abababa"), &word("aba")).unwrap(), 3);
        assert_eq!(count_occurrences(&word("aaaa"), &word("aa")).unwrap(), 3);
        assert_eq!(count_occurrences(&Word::empty(), &word("a")).unwrap(), 0);
        assert_eq!(
            count_occurrences(&word("a"), &Word::empty()),
            Err(LangError::EmptyPattern)
        );
    }

    #[test]
    fn maximal_border_examples() {
        assert_eq!(maximal_border(&word("aba")).unwrap(), word("a"));
        assert_eq!(maximal_border(&word("abc")).unwrap(), Word::empty());
        assert_eq!(maximal_border(&word("abab")).unwrap(), word("ab"));
        assert_eq!(maximal_border(&Word::empty()), Err(LangError::EmptyWord));
    }

    #[test]
    fn maximal_border_matches_all_prefix_scan_exhaustively() {
        // Every word of length <= 8 over {a,b}.
        fn brute(w: &Word) -> Word {
            let s = w.as_slice();
            let mut best = 0;
            for l in 0..s.len() {
                if s[..l] == s[s.len() - l..] {
                    best = l;
                }
            }
            Word::from_letters(s[..best].to_vec())
        }
        let mut level = vec![Word::empty()];
        for _ in 0..8 {
            level = level
                .iter()
                .flat_map(|w| [w.extended(letter('a')), w.extended(letter('b'))])
                .collect();
            for w in &level {
                assert_eq!(maximal_border(w).unwrap(), brute(w), "word {w}");
            }
        }
    }

    use crate::testutil::{arb_expr, arb_word};

    proptest! {
        #[test]
        fn member_unfolds_one_derivative(e in arb_expr(4), w in arb_word(4), c in prop_oneof![Just('a'), Just('b')]) {
            let x = Letter::new(c).unwrap();
            let mut xv = vec![x];
            xv.extend(w.letters());
            prop_assert_eq!(member(&e, &Word::from_letters(xv)), member(&derivative(&e, x), &w));
        }

        #[test]
        fn complement_negates_membership(e in arb_expr(4), w in arb_word(4)) {
            prop_assert_eq!(member(&GenExpr::complement(e.clone()), &w), !member(&e, &w));
        }

        #[test]
        fn member_agrees_with_enumeration(e in arb_expr(3)) {
            let alphabet = ab();
            let set = enumerate(&e, &alphabet, 5).unwrap();
            let mut frontier = vec![Word::empty()];
            for _ in 0..=5 {
                for w in &frontier {
                    prop_assert_eq!(member(&e, w), set.contains(w), "word {}", w);
                }
                frontier = frontier
                    .iter()
                    .flat_map(|w| alphabet.letters().map(move |x| w.extended(x)))
                    .collect();
            }
        }

        #[test]
        fn counting_matches_quadratic_scan(v in arb_word(8), w in arb_word(3)) {
            prop_assume!(!w.is_empty());
            let mut expected = 0;
            let (vs, ws) = (v.as_slice(), w.as_slice());
            for p in 0..vs.len().saturating_sub(ws.len() - 1) {
                let mut all = true;
                for (q, x) in ws.iter().enumerate() {
                    if vs[p + q] != *x {
                        all = false;
                        break;
                    }
                }
                if all {
                    expected += 1;
                }
            }
            prop_assert_eq!(count_occurrences(&v, &w).unwrap(), expected);
        }

        #[test]
        fn unary_counts_follow_the_closed_form(s in 0usize..12, r in 1usize..5) {
            let a = letter('a');
            let v = Word::from_letters(vec![a; s]);
            let w = Word::from_letters(vec![a; r]);
            let expected = s.saturating_sub(r - 1); // max(0, s - r + 1)
            prop_assert_eq!(count_occurrences(&v, &w).unwrap(), expected);
        }
    }
}
