//! Expressions for subword-counting languages.
//!
//! `Count(w, k)` is the set of words containing the factor `w` exactly
//! `k` times (overlaps count); `ModCount(w, k, n)` relaxes the count to
//! `k` modulo `n`. Four shapes of `w` are covered, dispatched by
//! [`classify_word`]:
//!
//! * a word over a unary alphabet;
//! * a power `a^r` of a letter over a larger alphabet;
//! * a word whose maximal border is ε (occurrences cannot overlap);
//! * a three-letter word `aba` with distinct letters.
//!
//! Every `Count` expression built here is star-free and every
//! `ModCount` expression has star-height at most one; the test suite
//! measures both on the produced trees and checks the languages against
//! brute-force occurrence counting.

use std::fmt;

use thiserror::Error;

use crate::expr::{Alphabet, Expr, GenExpr, Letter};
use crate::lang::{maximal_border, Word};

/// Largest occurrence count the finite composition unions are expanded
/// for. The number of terms grows exponentially with the count, so
/// anything beyond the cap is a hard error rather than a long build.
pub const DEFAULT_COMPOSITION_CAP: u32 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("no construction covers \"{word}\": {reason}")]
    Unsupported { word: String, reason: String },
    #[error("{op} needs a power-of-letter or aba-shaped case, got {got}")]
    WrongCase { op: &'static str, got: String },
    #[error("the prefix-and-suffix language needs at least one occurrence")]
    ZeroOccurrences,
    #[error("occurrence count {k} exceeds the composition cap {cap}")]
    CompositionCapExceeded { k: u32, cap: u32 },
    #[error("the counted word must be non-empty")]
    EmptyWord,
    #[error("letter '{0}' is outside the alphabet")]
    LetterOutsideAlphabet(char),
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u32),
    #[error("residue {k} is not below the modulus {n}")]
    ResidueTooLarge { k: u32, n: u32 },
    #[error("this spec carries a modulus; call build_modcount")]
    UnexpectedModulus,
    #[error("this spec has no modulus; call build_count")]
    MissingModulus,
}

/// Which construction applies to a counted word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseTag {
    UnaryAlphabet,
    PowerOfLetter { base: Letter, exponent: u32 },
    EmptyBorder,
    AbaPattern { outer: Letter, inner: Letter },
    Unsupported { reason: String },
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::UnaryAlphabet => write!(f, "unary alphabet"),
            CaseTag::PowerOfLetter { base, exponent } => {
                write!(f, "power {base}^{exponent}")
            }
            CaseTag::EmptyBorder => write!(f, "empty maximal border"),
            CaseTag::AbaPattern { outer, inner } => {
                write!(f, "pattern {outer}{inner}{outer}")
            }
            CaseTag::Unsupported { reason } => write!(f, "unsupported ({reason})"),
        }
    }
}

/// Decide the construction for `w`. A power of a letter also has an
/// empty border when `r = 1`; the power branch wins the dispatch.
pub fn classify_word(w: &Word, alphabet: &Alphabet) -> CaseTag {
    if w.is_empty() {
        return CaseTag::Unsupported {
            reason: "the empty word cannot be counted".into(),
        };
    }
    if alphabet.len() == 1 {
        return CaseTag::UnaryAlphabet;
    }
    let first = w.as_slice()[0];
    if w.letters().all(|x| x == first) {
        return CaseTag::PowerOfLetter {
            base: first,
            exponent: w.len() as u32,
        };
    }
    if maximal_border(w).expect("w is non-empty").is_empty() {
        return CaseTag::EmptyBorder;
    }
    let s = w.as_slice();
    if s.len() == 3 && s[0] == s[2] && s[0] != s[1] {
        return CaseTag::AbaPattern {
            outer: s[0],
            inner: s[1],
        };
    }
    CaseTag::Unsupported {
        reason: format!(
            "\"{w}\" has a non-empty border and is neither a power of a letter nor aba-shaped"
        ),
    }
}

/// A validated counting problem: the word `w`, the target count `k`,
/// the ambient alphabet, and an optional modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSpec {
    word: Word,
    k: u32,
    alphabet: Alphabet,
    modulus: Option<u32>,
}

impl CountSpec {
    /// Spec for `Count(w, k)`.
    pub fn exact(word: Word, k: u32, alphabet: Alphabet) -> Result<CountSpec, CountingError> {
        Self::check_word(&word, &alphabet)?;
        Ok(CountSpec {
            word,
            k,
            alphabet,
            modulus: None,
        })
    }

    /// Spec for `ModCount(w, k, n)`; requires `n >= 2` and `k < n`.
    pub fn modular(
        word: Word,
        k: u32,
        n: u32,
        alphabet: Alphabet,
    ) -> Result<CountSpec, CountingError> {
        Self::check_word(&word, &alphabet)?;
        if n < 2 {
            return Err(CountingError::ModulusTooSmall(n));
        }
        if k >= n {
            return Err(CountingError::ResidueTooLarge { k, n });
        }
        Ok(CountSpec {
            word,
            k,
            alphabet,
            modulus: Some(n),
        })
    }

    fn check_word(word: &Word, alphabet: &Alphabet) -> Result<(), CountingError> {
        if word.is_empty() {
            return Err(CountingError::EmptyWord);
        }
        match word.letters().find(|x| !alphabet.contains(*x)) {
            Some(x) => Err(CountingError::LetterOutsideAlphabet(x.as_char())),
            None => Ok(()),
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn modulus(&self) -> Option<u32> {
        self.modulus
    }
}

/// `(∅^c w ∅^c)^c`: the words with no occurrence of `w` at all. Valid
/// for every non-empty `w`, regardless of its shape, and star-free.
pub fn build_count_zero(w: &Word) -> Expr {
    assert!(!w.is_empty(), "the counted word must be non-empty");
    let mut items = vec![GenExpr::universe()];
    items.extend(w.letters().map(GenExpr::lit));
    items.push(GenExpr::universe());
    GenExpr::complement(concat_all(items))
}

/// `Count(w, k)`: exactly `k` occurrences of `w`. Star-free.
pub fn build_count(spec: &CountSpec) -> Result<Expr, CountingError> {
    build_count_capped(spec, DEFAULT_COMPOSITION_CAP)
}

pub fn build_count_capped(spec: &CountSpec, cap: u32) -> Result<Expr, CountingError> {
    if spec.modulus.is_some() {
        return Err(CountingError::UnexpectedModulus);
    }
    let case = supported_case(spec)?;
    if spec.k == 0 {
        return Ok(build_count_zero(&spec.word));
    }
    match &case {
        CaseTag::UnaryAlphabet => {
            let base = spec.word.as_slice()[0];
            let r = spec.word.len() as u32;
            Ok(letter_power(base, r + spec.k - 1))
        }
        CaseTag::PowerOfLetter { base, exponent } => {
            let (prefix, suffix) = power_affixes(*base, *exponent, &spec.alphabet);
            let mid = build_countps_capped(&case, spec.k, &spec.alphabet, cap)?;
            Ok(concat_all(vec![prefix, mid, suffix]))
        }
        CaseTag::EmptyBorder => {
            let c0 = build_count_zero(&spec.word);
            let block = GenExpr::concat(c0.clone(), word_expr(&spec.word));
            Ok(GenExpr::concat(expr_power(&block, spec.k), c0))
        }
        CaseTag::AbaPattern { outer, inner } => {
            let (prefix, suffix) = aba_affixes(*outer, *inner);
            let mid = build_countps_capped(&case, spec.k, &spec.alphabet, cap)?;
            Ok(concat_all(vec![prefix, mid, suffix]))
        }
        CaseTag::Unsupported { .. } => unreachable!("filtered by supported_case"),
    }
}

/// The wedge language `W` separating maximal runs of occurrences.
///
/// For a power `a^r`: non-empty words with no factor `a^r` that neither
/// start nor end with `a`. For `aba`: words that are not `b`, have no
/// prefix `ba`, no suffix `ab`, and no factor `aba`.
pub fn build_wedge(case: &CaseTag, alphabet: &Alphabet) -> Result<Expr, CountingError> {
    match case {
        CaseTag::PowerOfLetter { base, exponent } => {
            let b = buffer_class(*base, alphabet);
            let c0 = build_count_zero(&letter_run(*base, *exponent));
            Ok(GenExpr::union(
                b.clone(),
                concat_all(vec![b.clone(), c0, b]),
            ))
        }
        CaseTag::AbaPattern { outer, inner } => {
            let (a, b) = (*outer, *inner);
            let u = GenExpr::universe();
            let bad = GenExpr::union(
                GenExpr::lit(b),
                GenExpr::union(
                    concat_all(vec![GenExpr::lit(b), GenExpr::lit(a), u.clone()]),
                    GenExpr::union(
                        concat_all(vec![u.clone(), GenExpr::lit(a), GenExpr::lit(b)]),
                        concat_all(vec![
                            u.clone(),
                            GenExpr::lit(a),
                            GenExpr::lit(b),
                            GenExpr::lit(a),
                            u,
                        ]),
                    ),
                ),
            );
            Ok(GenExpr::complement(bad))
        }
        other => Err(CountingError::WrongCase {
            op: "build_wedge",
            got: other.to_string(),
        }),
    }
}

/// `CountPS(w, k)`: the words of `Count(w, k)` that have `w` as both a
/// prefix and a suffix, expanded as a finite union over compositions of
/// the occurrence count.
pub fn build_countps(case: &CaseTag, k: u32, alphabet: &Alphabet) -> Result<Expr, CountingError> {
    build_countps_capped(case, k, alphabet, DEFAULT_COMPOSITION_CAP)
}

pub fn build_countps_capped(
    case: &CaseTag,
    k: u32,
    alphabet: &Alphabet,
    cap: u32,
) -> Result<Expr, CountingError> {
    if k == 0 {
        return Err(CountingError::ZeroOccurrences);
    }
    if k > cap {
        return Err(CountingError::CompositionCapExceeded { k, cap });
    }
    match case {
        CaseTag::PowerOfLetter { base, exponent: r } => {
            let wedge = build_wedge(case, alphabet)?;
            let mut terms = Vec::new();
            // runs a^{k_1} W a^{k_2} W ... W a^{k_j} with k_i >= r and
            // k_1 + ... + k_j = k + (r-1)j
            for j in 1..=k {
                for comp in compositions(k + (r - 1) * j, j, *r) {
                    let mut items = Vec::new();
                    for (idx, ki) in comp.iter().enumerate() {
                        if idx > 0 {
                            items.push(wedge.clone());
                        }
                        items.push(letter_power(*base, *ki));
                    }
                    terms.push(concat_all(items));
                }
            }
            Ok(fold_union(terms))
        }
        CaseTag::AbaPattern { outer, inner } => {
            let wedge = build_wedge(case, alphabet)?;
            let mut terms = Vec::new();
            // runs a(ba)^{k_1} W a(ba)^{k_2} W ... W a(ba)^{k_j} with
            // k_i >= 1 and k_1 + ... + k_j = k
            for j in 1..=k {
                for comp in compositions(k, j, 1) {
                    let mut items = Vec::new();
                    for (idx, ki) in comp.iter().enumerate() {
                        if idx > 0 {
                            items.push(wedge.clone());
                        }
                        items.push(aba_run(*outer, *inner, *ki));
                    }
                    terms.push(concat_all(items));
                }
            }
            Ok(fold_union(terms))
        }
        other => Err(CountingError::WrongCase {
            op: "build_countps",
            got: other.to_string(),
        }),
    }
}

/// `Multiple(w, n)`: the words that contribute exactly `n` fresh
/// occurrences when appended after a `w`-suffix and themselves end in
/// `w`; the building block of the modular counting star.
///
/// The wedge-first decomposition is reachable, so the inner union index
/// starts at zero: its first term is `W · CountPS(w, n)`.
pub fn build_multiple(case: &CaseTag, n: u32, alphabet: &Alphabet) -> Result<Expr, CountingError> {
    build_multiple_capped(case, n, alphabet, DEFAULT_COMPOSITION_CAP)
}

pub fn build_multiple_capped(
    case: &CaseTag,
    n: u32,
    alphabet: &Alphabet,
    cap: u32,
) -> Result<Expr, CountingError> {
    if n < 2 {
        return Err(CountingError::ModulusTooSmall(n));
    }
    match case {
        CaseTag::PowerOfLetter { base, .. } => {
            let wedge = build_wedge(case, alphabet)?;
            // a^n ∪ ⋃_{i=0}^{n-1} a^i W CountPS(a^r, n-i)
            let mut terms = vec![letter_power(*base, n)];
            for i in 0..n {
                let ps = build_countps_capped(case, n - i, alphabet, cap)?;
                terms.push(concat_all(vec![letter_power(*base, i), wedge.clone(), ps]));
            }
            Ok(fold_union(terms))
        }
        CaseTag::AbaPattern { outer, inner } => {
            let wedge = build_wedge(case, alphabet)?;
            let ba = GenExpr::concat(GenExpr::lit(*inner), GenExpr::lit(*outer));
            // (ba)^n ∪ ⋃_{i=0}^{n-1} (ba)^i W CountPS(aba, n-i)
            let mut terms = vec![expr_power(&ba, n)];
            for i in 0..n {
                let ps = build_countps_capped(case, n - i, alphabet, cap)?;
                terms.push(concat_all(vec![expr_power(&ba, i), wedge.clone(), ps]));
            }
            Ok(fold_union(terms))
        }
        other => Err(CountingError::WrongCase {
            op: "build_multiple",
            got: other.to_string(),
        }),
    }
}

/// `ModCount(w, k, n)`: the count of `w` is `k` modulo `n`. Star-height
/// at most one.
pub fn build_modcount(spec: &CountSpec) -> Result<Expr, CountingError> {
    build_modcount_capped(spec, DEFAULT_COMPOSITION_CAP)
}

pub fn build_modcount_capped(spec: &CountSpec, cap: u32) -> Result<Expr, CountingError> {
    let n = spec.modulus.ok_or(CountingError::MissingModulus)?;
    let case = supported_case(spec)?;
    match &case {
        CaseTag::UnaryAlphabet => {
            let base = spec.word.as_slice()[0];
            let r = spec.word.len() as u32;
            let cycle = GenExpr::star(letter_power(base, n));
            if spec.k > 0 {
                // a^{r+k-1} (a^n)*
                Ok(GenExpr::concat(letter_power(base, r + spec.k - 1), cycle))
            } else {
                // ε ∪ a ∪ ... ∪ a^{r-1} ∪ a^{r+n-1} (a^n)*
                let mut terms: Vec<Expr> = (0..r).map(|e| letter_power(base, e)).collect();
                terms.push(GenExpr::concat(letter_power(base, r + n - 1), cycle));
                Ok(fold_union(terms))
            }
        }
        CaseTag::EmptyBorder => {
            // [C·w]^k [[C·w]^n]* C, with an empty leading power when k=0
            let c0 = build_count_zero(&spec.word);
            let block = GenExpr::concat(c0.clone(), word_expr(&spec.word));
            Ok(concat_all(vec![
                expr_power(&block, spec.k),
                GenExpr::star(expr_power(&block, n)),
                c0,
            ]))
        }
        CaseTag::PowerOfLetter { base, exponent } => {
            let modular = |k: u32| -> Result<Expr, CountingError> {
                let (prefix, suffix) = power_affixes(*base, *exponent, &spec.alphabet);
                let mid = build_countps_capped(&case, k, &spec.alphabet, cap)?;
                let mult = build_multiple_capped(&case, n, &spec.alphabet, cap)?;
                Ok(concat_all(vec![prefix, mid, GenExpr::star(mult), suffix]))
            };
            if spec.k > 0 {
                modular(spec.k)
            } else {
                // Count(w, 0) ∪ ModCount(w, n, n)
                Ok(GenExpr::union(build_count_zero(&spec.word), modular(n)?))
            }
        }
        CaseTag::AbaPattern { outer, inner } => {
            let modular = |k: u32| -> Result<Expr, CountingError> {
                let (prefix, suffix) = aba_affixes(*outer, *inner);
                let mid = build_countps_capped(&case, k, &spec.alphabet, cap)?;
                let mult = build_multiple_capped(&case, n, &spec.alphabet, cap)?;
                Ok(concat_all(vec![prefix, mid, GenExpr::star(mult), suffix]))
            };
            if spec.k > 0 {
                modular(spec.k)
            } else {
                Ok(GenExpr::union(build_count_zero(&spec.word), modular(n)?))
            }
        }
        CaseTag::Unsupported { .. } => unreachable!("filtered by supported_case"),
    }
}

fn supported_case(spec: &CountSpec) -> Result<CaseTag, CountingError> {
    match classify_word(&spec.word, &spec.alphabet) {
        CaseTag::Unsupported { reason } => Err(CountingError::Unsupported {
            word: spec.word.to_string(),
            reason,
        }),
        case => Ok(case),
    }
}

// --- small expression builders ------------------------------------------

/// Right-nested concatenation of `items`; the empty product is ε.
fn concat_all(items: Vec<Expr>) -> Expr {
    items
        .into_iter()
        .rev()
        .reduce(|acc, e| GenExpr::concat(e, acc))
        .unwrap_or_else(GenExpr::epsilon)
}

/// Right-nested union of `terms`; the empty union is ∅.
fn fold_union(terms: Vec<Expr>) -> Expr {
    terms
        .into_iter()
        .rev()
        .reduce(|acc, e| GenExpr::union(e, acc))
        .unwrap_or_else(GenExpr::empty)
}

fn word_expr(w: &Word) -> Expr {
    concat_all(w.letters().map(GenExpr::lit).collect())
}

fn letter_run(x: Letter, n: u32) -> Word {
    Word::from_letters(vec![x; n as usize])
}

fn letter_power(x: Letter, n: u32) -> Expr {
    concat_all((0..n).map(|_| GenExpr::lit(x)).collect())
}

fn expr_power(e: &Expr, n: u32) -> Expr {
    concat_all((0..n).map(|_| e.clone()).collect())
}

/// Union of all letters other than `base`, in alphabet order: the
/// buffers that interrupt runs of `base`.
fn buffer_class(base: Letter, alphabet: &Alphabet) -> Expr {
    fold_union(
        alphabet
            .letters()
            .filter(|x| *x != base)
            .map(GenExpr::lit)
            .collect(),
    )
}

/// `[ε ∪ Count(a^r,0)·B] · _ · [B·Count(a^r,0) ∪ ε]`
fn power_affixes(base: Letter, exponent: u32, alphabet: &Alphabet) -> (Expr, Expr) {
    let b = buffer_class(base, alphabet);
    let c0 = build_count_zero(&letter_run(base, exponent));
    let prefix = GenExpr::union(GenExpr::epsilon(), GenExpr::concat(c0.clone(), b.clone()));
    let suffix = GenExpr::union(GenExpr::concat(b, c0), GenExpr::epsilon());
    (prefix, suffix)
}

/// `(∅^c aba ∅^c ∪ ∅^c ab)^c · _ · (ba ∅^c ∪ ∅^c aba ∅^c)^c`
fn aba_affixes(a: Letter, b: Letter) -> (Expr, Expr) {
    let u = GenExpr::universe();
    let aba_inside = concat_all(vec![
        u.clone(),
        GenExpr::lit(a),
        GenExpr::lit(b),
        GenExpr::lit(a),
        u.clone(),
    ]);
    let prefix = GenExpr::complement(GenExpr::union(
        aba_inside.clone(),
        concat_all(vec![u.clone(), GenExpr::lit(a), GenExpr::lit(b)]),
    ));
    let suffix = GenExpr::complement(GenExpr::union(
        concat_all(vec![GenExpr::lit(b), GenExpr::lit(a), u]),
        aba_inside,
    ));
    (prefix, suffix)
}

/// `a (ba)^k`
fn aba_run(a: Letter, b: Letter, k: u32) -> Expr {
    let ba = GenExpr::concat(GenExpr::lit(b), GenExpr::lit(a));
    GenExpr::concat(GenExpr::lit(a), expr_power(&ba, k))
}

/// Compositions of `total` into `parts` summands, each at least `min`,
/// in lexicographic order.
fn compositions(total: u32, parts: u32, min: u32) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: u32, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            if total >= min {
                prefix.push(total);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let reserved = min * (parts - 1);
        if total < reserved + min {
            return;
        }
        for first in min..=(total - reserved) {
            prefix.push(first);
            go(total - first, parts - 1, min, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        go(total, parts, min, &mut Vec::new(), &mut out);
    }
    out
}
