//! Rees zero-matrix semigroups over abelian groups, morphisms from
//! `A⁺` into them, and star-height-bounded preimage expressions.
//!
//! The semigroup `M⁰[G; I, Λ; P]` consists of triples `(i, g, λ)` plus
//! a zero; the product `(i, g, λ)(j, h, μ)` is `(i, g + p_{λj} + h, μ)`
//! when the sandwich entry `p_{λj}` is non-zero and `0` otherwise. The
//! group `G` is given directly as a product of cyclic factors
//! `Z_{n_1} × ... × Z_{n_m}`.
//!
//! For a morphism `φ : A⁺ → M⁰[...]` the module constructs:
//!
//! * [`preimage_zero_expr`] — the words mapping to zero, star-free;
//! * [`preimage_element_expr`] — the words mapping to a fixed triple,
//!   star-height at most one, assembled per cyclic factor from letter
//!   counts ([`grp_contribution_expr`]) and adjacent-pair counts
//!   ([`mat_contribution_expr`]);
//! * [`recognized_language_expr`] — the preimage of any subset.
//!
//! The coordinate preimage expressions on their own admit words that
//! map to zero (take a one-letter alphabet whose only sandwich entry is
//! zero: the letter-class expressions accept every word, yet every
//! image collapses to zero). Element preimages therefore intersect with
//! the complement of the zero preimage, which is star-free and so keeps
//! the height bound.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::counting::{build_modcount_capped, CountSpec, CountingError, DEFAULT_COMPOSITION_CAP};
use crate::expr::{Alphabet, Expr, GenExpr, Letter};
use crate::lang::Word;

mod specfile;

pub use specfile::parse_rees_spec;

/// Ceiling on the number of count tuples a single contribution
/// expression may expand; the unions are exponential in the alphabet,
/// so overruns fail loudly instead of building forever.
pub const DEFAULT_TUPLE_BUDGET: usize = 4096;

/// Expansion limits threaded through the preimage constructions.
#[derive(Debug, Clone, Copy)]
pub struct ReesLimits {
    pub tuple_budget: usize,
    pub composition_cap: u32,
}

impl Default for ReesLimits {
    fn default() -> Self {
        ReesLimits {
            tuple_budget: DEFAULT_TUPLE_BUDGET,
            composition_cap: DEFAULT_COMPOSITION_CAP,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReesError {
    #[error("cyclic moduli must be at least 2, got {0}")]
    BadModulus(u32),
    #[error("the group needs at least one cyclic factor")]
    NoModuli,
    #[error("index sets I and Lambda must be non-empty")]
    EmptyIndexSet,
    #[error("the sandwich matrix must have {expected_rows} rows of {expected_cols} entries")]
    BadMatrixShape {
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("group element ({0}) does not fit the moduli")]
    BadResidues(String),
    #[error("row index {lambda} is outside 1..={max}")]
    LambdaOutOfRange { lambda: usize, max: usize },
    #[error("column index {i} is outside 1..={max}")]
    IndexOutOfRange { i: usize, max: usize },
    #[error("a semigroup morphism has no image for the empty word")]
    EmptyWord,
    #[error("letter '{0}' has no image under the morphism")]
    UnmappedLetter(char),
    #[error("the morphism must map every alphabet letter exactly once")]
    IncompleteMorphism,
    #[error("element preimages are built for non-zero triples; the zero preimage is separate")]
    NotATriple,
    #[error("contribution needs {required} tuples, over the budget of {budget}")]
    TupleBudgetExceeded { required: u128, budget: usize },
    #[error("coordinate {t} is out of range for {m} cyclic factors")]
    CoordinateOutOfRange { t: usize, m: usize },
    #[error("bad element \"{text}\": {message}")]
    BadElement { text: String, message: String },
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error("spec line {line}: {message}")]
    SpecFile { line: usize, message: String },
}

/// Parse `zero` or a comma-separated `<i>,<r1>,...,<rm>,<lambda>` into
/// a checked element of `s`.
pub fn parse_element(text: &str, s: &ReesSemigroup) -> Result<ReesElem, ReesError> {
    let trimmed = text.trim();
    if trimmed == "zero" {
        return Ok(ReesElem::Zero);
    }
    let bad = |message: String| ReesError::BadElement {
        text: trimmed.to_string(),
        message,
    };
    let m = s.moduli().len();
    let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
    if parts.len() != m + 2 {
        return Err(bad(format!(
            "expected \"zero\" or <i>,<{m} residues>,<lambda>"
        )));
    }
    let number = |part: &str| {
        part.parse::<u32>()
            .map_err(|_| bad(format!("\"{part}\" is not a number")))
    };
    let i = number(parts[0])? as usize;
    let lambda = number(parts[m + 1])? as usize;
    let residues: Vec<u32> = parts[1..=m]
        .iter()
        .map(|p| number(p))
        .collect::<Result<_, _>>()?;
    let elem = ReesElem::Triple {
        i,
        g: AbelianElem::new(residues),
        lambda,
    };
    s.check_element(&elem)?;
    Ok(elem)
}

/// An element of the abelian group, one residue per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianElem {
    residues: Vec<u32>,
}

impl AbelianElem {
    pub fn new(residues: Vec<u32>) -> AbelianElem {
        AbelianElem { residues }
    }

    pub fn zero(arity: usize) -> AbelianElem {
        AbelianElem {
            residues: vec![0; arity],
        }
    }

    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    fn add_mod(&self, other: &AbelianElem, moduli: &[u32]) -> AbelianElem {
        AbelianElem {
            residues: self
                .residues
                .iter()
                .zip(&other.residues)
                .zip(moduli)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        }
    }

    fn fits(&self, moduli: &[u32]) -> bool {
        self.residues.len() == moduli.len()
            && self.residues.iter().zip(moduli).all(|(r, n)| r < n)
    }
}

impl fmt::Display for AbelianElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A sandwich-matrix entry: a group element or the absorbing zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SandwichEntry {
    Zero,
    Value(AbelianElem),
}

/// `M⁰[Z_{n_1} × ... × Z_{n_m}; I, Λ; P]` with 1-based index ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReesSemigroup {
    moduli: Vec<u32>,
    i_size: usize,
    lambda_size: usize,
    /// `matrix[λ-1][i-1]` is the entry `p_{λi}`.
    matrix: Vec<Vec<SandwichEntry>>,
}

impl ReesSemigroup {
    pub fn new(
        moduli: Vec<u32>,
        i_size: usize,
        lambda_size: usize,
        matrix: Vec<Vec<SandwichEntry>>,
    ) -> Result<ReesSemigroup, ReesError> {
        if moduli.is_empty() {
            return Err(ReesError::NoModuli);
        }
        if let Some(&n) = moduli.iter().find(|&&n| n < 2) {
            return Err(ReesError::BadModulus(n));
        }
        if i_size == 0 || lambda_size == 0 {
            return Err(ReesError::EmptyIndexSet);
        }
        if matrix.len() != lambda_size || matrix.iter().any(|row| row.len() != i_size) {
            return Err(ReesError::BadMatrixShape {
                expected_rows: lambda_size,
                expected_cols: i_size,
            });
        }
        for row in &matrix {
            for entry in row {
                if let SandwichEntry::Value(g) = entry {
                    if !g.fits(&moduli) {
                        return Err(ReesError::BadResidues(g.to_string()));
                    }
                }
            }
        }
        Ok(ReesSemigroup {
            moduli,
            i_size,
            lambda_size,
            matrix,
        })
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn i_size(&self) -> usize {
        self.i_size
    }

    pub fn lambda_size(&self) -> usize {
        self.lambda_size
    }

    /// The sandwich entry `p_{λi}`, both indices 1-based.
    pub fn entry(&self, lambda: usize, i: usize) -> Result<&SandwichEntry, ReesError> {
        if lambda == 0 || lambda > self.lambda_size {
            return Err(ReesError::LambdaOutOfRange {
                lambda,
                max: self.lambda_size,
            });
        }
        if i == 0 || i > self.i_size {
            return Err(ReesError::IndexOutOfRange {
                i,
                max: self.i_size,
            });
        }
        Ok(&self.matrix[lambda - 1][i - 1])
    }

    /// Does every row and every column hold a non-zero entry?
    pub fn is_regular_matrix(&self) -> bool {
        let row_ok = self
            .matrix
            .iter()
            .all(|row| row.iter().any(|e| matches!(e, SandwichEntry::Value(_))));
        let col_ok = (0..self.i_size).all(|c| {
            self.matrix
                .iter()
                .any(|row| matches!(row[c], SandwichEntry::Value(_)))
        });
        row_ok && col_ok
    }

    pub fn check_element(&self, x: &ReesElem) -> Result<(), ReesError> {
        match x {
            ReesElem::Zero => Ok(()),
            ReesElem::Triple { i, g, lambda } => {
                if *i == 0 || *i > self.i_size {
                    return Err(ReesError::IndexOutOfRange {
                        i: *i,
                        max: self.i_size,
                    });
                }
                if *lambda == 0 || *lambda > self.lambda_size {
                    return Err(ReesError::LambdaOutOfRange {
                        lambda: *lambda,
                        max: self.lambda_size,
                    });
                }
                if !g.fits(&self.moduli) {
                    return Err(ReesError::BadResidues(g.to_string()));
                }
                Ok(())
            }
        }
    }

    /// Every group element, counted coordinate-major: the first residue
    /// varies slowest.
    pub fn group_elements(&self) -> Vec<AbelianElem> {
        let mut out = vec![AbelianElem::new(Vec::new())];
        for &n in &self.moduli {
            out = out
                .into_iter()
                .flat_map(|g| {
                    (0..n).map(move |r| {
                        let mut rs = g.residues.clone();
                        rs.push(r);
                        AbelianElem::new(rs)
                    })
                })
                .collect();
        }
        out
    }

    /// Every element: zero first, then triples ordered by `(i, g, λ)`.
    pub fn elements(&self) -> Vec<ReesElem> {
        let mut out = vec![ReesElem::Zero];
        for i in 1..=self.i_size {
            for g in self.group_elements() {
                for lambda in 1..=self.lambda_size {
                    out.push(ReesElem::Triple {
                        i,
                        g: g.clone(),
                        lambda,
                    });
                }
            }
        }
        out
    }

    /// The factor semigroup at cyclic coordinate `t` (0-based): same
    /// index sets, the matrix projected entrywise, zeros kept zero.
    pub fn project_factor(&self, t: usize) -> Result<ReesSemigroup, ReesError> {
        self.check_coordinate(t)?;
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        SandwichEntry::Zero => SandwichEntry::Zero,
                        SandwichEntry::Value(g) => {
                            SandwichEntry::Value(AbelianElem::new(vec![g.residues[t]]))
                        }
                    })
                    .collect()
            })
            .collect();
        ReesSemigroup::new(vec![self.moduli[t]], self.i_size, self.lambda_size, matrix)
    }

    fn check_coordinate(&self, t: usize) -> Result<(), ReesError> {
        if t >= self.moduli.len() {
            return Err(ReesError::CoordinateOutOfRange {
                t,
                m: self.moduli.len(),
            });
        }
        Ok(())
    }
}

/// An element of the semigroup: the zero or a triple `(i, g, λ)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReesElem {
    Zero,
    Triple {
        i: usize,
        g: AbelianElem,
        lambda: usize,
    },
}

impl fmt::Display for ReesElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReesElem::Zero => write!(f, "zero"),
            ReesElem::Triple { i, g, lambda } => write!(f, "({i}, [{g}], {lambda})"),
        }
    }
}

/// A letter-to-element map, total on its alphabet; the generator of a
/// morphism `A⁺ → M⁰[...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Alphabet,
    images: BTreeMap<Letter, ReesElem>,
}

impl Morphism {
    pub fn new(
        s: &ReesSemigroup,
        alphabet: Alphabet,
        images: Vec<(Letter, ReesElem)>,
    ) -> Result<Morphism, ReesError> {
        let mut map = BTreeMap::new();
        for (letter, elem) in images {
            s.check_element(&elem)?;
            if !alphabet.contains(letter) || map.insert(letter, elem).is_some() {
                return Err(ReesError::IncompleteMorphism);
            }
        }
        if map.len() != alphabet.len() {
            return Err(ReesError::IncompleteMorphism);
        }
        Ok(Morphism {
            alphabet,
            images: map,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, x: Letter) -> Result<&ReesElem, ReesError> {
        self.images
            .get(&x)
            .ok_or(ReesError::UnmappedLetter(x.as_char()))
    }

    /// Letters mapped to zero, in alphabet order.
    pub fn zero_letters(&self) -> Vec<Letter> {
        self.alphabet
            .letters()
            .filter(|x| matches!(self.images[x], ReesElem::Zero))
            .collect()
    }

    /// Letters with non-zero images, in alphabet order, with their
    /// triples.
    fn nonzero_letters(&self) -> Vec<(Letter, usize, &AbelianElem, usize)> {
        self.alphabet
            .letters()
            .filter_map(|x| match &self.images[&x] {
                ReesElem::Zero => None,
                ReesElem::Triple { i, g, lambda } => Some((x, *i, g, *lambda)),
            })
            .collect()
    }

    /// The composition with the projection onto cyclic coordinate `t`.
    pub fn project_factor(&self, t: usize) -> Result<Morphism, ReesError> {
        let images = self
            .images
            .iter()
            .map(|(x, e)| {
                let projected = match e {
                    ReesElem::Zero => ReesElem::Zero,
                    ReesElem::Triple { i, g, lambda } => {
                        let r = *g.residues.get(t).ok_or(ReesError::CoordinateOutOfRange {
                            t,
                            m: g.residues.len(),
                        })?;
                        ReesElem::Triple {
                            i: *i,
                            g: AbelianElem::new(vec![r]),
                            lambda: *lambda,
                        }
                    }
                };
                Ok((*x, projected))
            })
            .collect::<Result<BTreeMap<_, _>, ReesError>>()?;
        Ok(Morphism {
            alphabet: self.alphabet.clone(),
            images,
        })
    }
}

/// The semigroup product. Zero absorbs, and a zero sandwich entry sends
/// the product to zero.
pub fn multiply(s: &ReesSemigroup, x: &ReesElem, y: &ReesElem) -> Result<ReesElem, ReesError> {
    s.check_element(x)?;
    s.check_element(y)?;
    match (x, y) {
        (ReesElem::Zero, _) | (_, ReesElem::Zero) => Ok(ReesElem::Zero),
        (
            ReesElem::Triple { i, g, lambda },
            ReesElem::Triple {
                i: j,
                g: h,
                lambda: mu,
            },
        ) => match s.entry(*lambda, *j)? {
            SandwichEntry::Zero => Ok(ReesElem::Zero),
            SandwichEntry::Value(p) => Ok(ReesElem::Triple {
                i: *i,
                g: g.add_mod(p, &s.moduli).add_mod(h, &s.moduli),
                lambda: *mu,
            }),
        },
    }
}

/// `φ̄(w)` for non-empty `w`: the left fold of the product over the
/// letter images.
pub fn extend_morphism(
    s: &ReesSemigroup,
    phi: &Morphism,
    w: &Word,
) -> Result<ReesElem, ReesError> {
    let mut letters = w.letters();
    let first = letters.next().ok_or(ReesError::EmptyWord)?;
    let mut acc = phi.image(first)?.clone();
    for x in letters {
        acc = multiply(s, &acc, phi.image(x)?)?;
    }
    Ok(acc)
}

/// Project an element onto cyclic coordinate `t` (0-based): zero stays
/// zero, a triple keeps its indices and the `t`-th residue.
pub fn project(s: &ReesSemigroup, t: usize, x: &ReesElem) -> Result<ReesElem, ReesError> {
    s.check_coordinate(t)?;
    s.check_element(x)?;
    Ok(match x {
        ReesElem::Zero => ReesElem::Zero,
        ReesElem::Triple { i, g, lambda } => ReesElem::Triple {
            i: *i,
            g: AbelianElem::new(vec![g.residues[t]]),
            lambda: *lambda,
        },
    })
}

/// The words mapping to zero, as a star-free expression:
/// `A* A_0 A* ∪ ⋃ A* A_c A_d A*` over class pairs whose sandwich entry
/// is zero. Empty letter classes collapse to ∅.
pub fn preimage_zero_expr(s: &ReesSemigroup, phi: &Morphism) -> Expr {
    let u = GenExpr::universe;
    let zero_class = letter_class(&phi.zero_letters());
    let zero_term = concat_all(vec![u(), zero_class, u()]);

    // Non-zero letters grouped into classes by their image triple,
    // deterministically ordered by (i, g, λ).
    let mut classes: BTreeMap<(usize, Vec<u32>, usize), Vec<Letter>> = BTreeMap::new();
    for (x, i, g, lambda) in phi.nonzero_letters() {
        classes
            .entry((i, g.residues.to_vec(), lambda))
            .or_default()
            .push(x);
    }
    let mut pair_terms = Vec::new();
    for ((_, _, lambda1), letters1) in &classes {
        for ((i2, _, _), letters2) in &classes {
            let entry = s.entry(*lambda1, *i2).expect("class indices are valid");
            if matches!(entry, SandwichEntry::Zero) {
                pair_terms.push(concat_all(vec![
                    u(),
                    letter_class(letters1),
                    letter_class(letters2),
                    u(),
                ]));
            }
        }
    }
    GenExpr::union(zero_term, fold_union(pair_terms))
}

/// The letter-count contribution at one cyclic coordinate: the words
/// whose weighted non-zero letter counts sum to `target` modulo `n`,
/// as a union over residue tuples of intersections of single-letter
/// modular counting languages.
pub fn grp_contribution_expr(
    weights: &[(Letter, u32)],
    target: u32,
    n: u32,
    alphabet: &Alphabet,
    limits: &ReesLimits,
) -> Result<Expr, ReesError> {
    contribution_expr(weights, target, n, limits, |letter, k| {
        let spec = CountSpec::modular(
            Word::from_letters(vec![*letter]),
            k,
            n,
            alphabet.clone(),
        )?;
        Ok(build_modcount_capped(&spec, limits.composition_cap)?)
    })
}

/// The sandwich-entry contribution at one cyclic coordinate: as
/// [`grp_contribution_expr`], but weighting counts of two-letter
/// factors `ab` by the entry `p_{λ_a i_b}`.
pub fn mat_contribution_expr(
    pair_weights: &[((Letter, Letter), u32)],
    target: u32,
    n: u32,
    alphabet: &Alphabet,
    limits: &ReesLimits,
) -> Result<Expr, ReesError> {
    contribution_expr(pair_weights, target, n, limits, |(a, b), k| {
        let spec = CountSpec::modular(Word::from_letters(vec![*a, *b]), k, n, alphabet.clone())?;
        Ok(build_modcount_capped(&spec, limits.composition_cap)?)
    })
}

fn contribution_expr<K>(
    weights: &[(K, u32)],
    target: u32,
    n: u32,
    limits: &ReesLimits,
    mut modcount: impl FnMut(&K, u32) -> Result<Expr, ReesError>,
) -> Result<Expr, ReesError> {
    if n < 2 {
        return Err(ReesError::BadModulus(n));
    }
    let required = (n as u128)
        .checked_pow(weights.len() as u32)
        .unwrap_or(u128::MAX);
    if required > limits.tuple_budget as u128 {
        return Err(ReesError::TupleBudgetExceeded {
            required,
            budget: limits.tuple_budget,
        });
    }
    let mut terms = Vec::new();
    let mut tuple = vec![0u32; weights.len()];
    loop {
        let sum: u64 = weights
            .iter()
            .zip(&tuple)
            .map(|((_, w), k)| *w as u64 * *k as u64)
            .sum();
        if sum % n as u64 == target as u64 % n as u64 {
            let mut factors = Vec::new();
            for ((key, _), k) in weights.iter().zip(&tuple) {
                factors.push(modcount(key, *k)?);
            }
            terms.push(fold_intersect(factors));
        }
        // next tuple in lexicographic order, last coordinate fastest
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                return Ok(fold_union(terms));
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// `{w ∈ A⁺ : φ̄(w) = (i, g, λ)}` as an expression of star-height at
/// most one: for each cyclic factor, the intersection of the
/// first-coordinate, middle-coordinate and last-coordinate preimages,
/// intersected across factors and with the complement of the zero
/// preimage.
pub fn preimage_element_expr(
    s: &ReesSemigroup,
    phi: &Morphism,
    elem: &ReesElem,
) -> Result<Expr, ReesError> {
    preimage_element_expr_with_limits(s, phi, elem, &ReesLimits::default())
}

pub fn preimage_element_expr_with_limits(
    s: &ReesSemigroup,
    phi: &Morphism,
    elem: &ReesElem,
    limits: &ReesLimits,
) -> Result<Expr, ReesError> {
    s.check_element(elem)?;
    let (i, g, lambda) = match elem {
        ReesElem::Triple { i, g, lambda } => (*i, g, *lambda),
        ReesElem::Zero => return Err(ReesError::NotATriple),
    };
    let alphabet = phi.alphabet();
    let nonzero = phi.nonzero_letters();

    let zero_free = GenExpr::complement(preimage_zero_expr(s, phi));

    let mut across_factors: Option<Expr> = None;
    for t in 0..s.moduli.len() {
        let n = s.moduli[t];

        // first coordinate: a letter whose image has first index i
        let first_class: Vec<Letter> = nonzero
            .iter()
            .filter(|(_, ia, _, _)| *ia == i)
            .map(|(x, ..)| *x)
            .collect();
        let first = GenExpr::concat(letter_class(&first_class), GenExpr::universe());

        // last coordinate: a letter whose image has last index λ
        let last_class: Vec<Letter> = nonzero
            .iter()
            .filter(|(_, _, _, la)| *la == lambda)
            .map(|(x, ..)| *x)
            .collect();
        let last = GenExpr::concat(GenExpr::universe(), letter_class(&last_class));

        // middle coordinate: letter weights and pair weights projected
        // to this factor
        let letter_weights: Vec<(Letter, u32)> = nonzero
            .iter()
            .map(|(x, _, ga, _)| (*x, ga.residues[t]))
            .collect();
        let mut pair_weights: Vec<((Letter, Letter), u32)> = Vec::new();
        for (a, _, _, lambda_a) in &nonzero {
            for (b, i_b, _, _) in &nonzero {
                if let SandwichEntry::Value(p) = s.entry(*lambda_a, *i_b)? {
                    pair_weights.push(((*a, *b), p.residues[t]));
                }
            }
        }

        let mut middles = Vec::new();
        for g1 in 0..n {
            let g2 = (g.residues[t] + n - g1) % n;
            let grp = grp_contribution_expr(&letter_weights, g1, n, alphabet, limits)?;
            let mat = mat_contribution_expr(&pair_weights, g2, n, alphabet, limits)?;
            middles.push(GenExpr::intersect(grp, mat));
        }
        let middle = fold_union(middles);

        let triple = GenExpr::intersect(first, GenExpr::intersect(middle, last));
        across_factors = Some(match across_factors {
            None => triple,
            Some(acc) => GenExpr::intersect(acc, triple),
        });
    }

    Ok(GenExpr::intersect(
        across_factors.expect("at least one cyclic factor"),
        zero_free,
    ))
}

/// `X φ̄^{-1}` for a subset `X` of the semigroup: the union of the
/// element preimages, restricted to `A⁺`.
pub fn recognized_language_expr(
    s: &ReesSemigroup,
    phi: &Morphism,
    xs: &[ReesElem],
) -> Result<Expr, ReesError> {
    recognized_language_expr_with_limits(s, phi, xs, &ReesLimits::default())
}

pub fn recognized_language_expr_with_limits(
    s: &ReesSemigroup,
    phi: &Morphism,
    xs: &[ReesElem],
    limits: &ReesLimits,
) -> Result<Expr, ReesError> {
    let mut sorted = xs.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut terms = Vec::new();
    for x in &sorted {
        s.check_element(x)?;
        terms.push(match x {
            ReesElem::Zero => preimage_zero_expr(s, phi),
            triple => preimage_element_expr_with_limits(s, phi, triple, limits)?,
        });
    }
    // restrict to A⁺: everything except ε
    Ok(GenExpr::intersect(
        fold_union(terms),
        GenExpr::complement(GenExpr::epsilon()),
    ))
}

// --- expression plumbing ---------------------------------------------------

/// Union of literals in the given order; the empty class is ∅.
fn letter_class(letters: &[Letter]) -> Expr {
    fold_union(letters.iter().map(|x| GenExpr::lit(*x)).collect())
}

fn concat_all(items: Vec<Expr>) -> Expr {
    items
        .into_iter()
        .rev()
        .reduce(|acc, e| GenExpr::concat(e, acc))
        .unwrap_or_else(GenExpr::epsilon)
}

fn fold_union(terms: Vec<Expr>) -> Expr {
    terms
        .into_iter()
        .rev()
        .reduce(|acc, e| GenExpr::union(e, acc))
        .unwrap_or_else(GenExpr::empty)
}

/// Intersection of `terms`; the empty intersection is `A* = ∅^c`.
fn fold_intersect(terms: Vec<Expr>) -> Expr {
    terms
        .into_iter()
        .rev()
        .reduce(|acc, e| GenExpr::intersect(e, acc))
        .unwrap_or_else(GenExpr::universe)
}
