//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a `verify` run finds a mismatch,
//! 2 for usage errors (bad flags, unparsable expressions or spec
//! files). Output depends only on the arguments and input files, so
//! repeated runs are byte-identical.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::counting::{
    build_count_capped, build_modcount_capped, classify_word, CaseTag, CountSpec,
    DEFAULT_COMPOSITION_CAP,
};
use crate::expr::{parse, Alphabet, Expr, StarHeight};
use crate::lang::{
    all_words_up_to, count_occurrences, enumerate_capped, equiv_bounded_capped, member, Word,
    WordSet, ENUMERATION_CAP,
};
use crate::rees::{
    extend_morphism, parse_element as parse_rees_element, parse_rees_spec,
    preimage_element_expr_with_limits, preimage_zero_expr, recognized_language_expr_with_limits,
    Morphism, ReesElem, ReesLimits, ReesSemigroup, DEFAULT_TUPLE_BUDGET,
};

#[derive(Parser, Debug)]
#[command(
    name = "starheight",
    version,
    about = "Star-height-bounded expressions for subword counting and Rees zero-matrix recognition"
)]
struct Cli {
    /// Ceiling for --max-len in enumeration and equivalence.
    #[arg(long, global = true, default_value_t = ENUMERATION_CAP)]
    enum_cap: usize,

    /// Ceiling on count tuples expanded per contribution expression.
    #[arg(long, global = true, default_value_t = DEFAULT_TUPLE_BUDGET)]
    tuple_budget: usize,

    /// Ceiling on occurrence counts expanded into composition unions.
    #[arg(long, global = true, default_value_t = DEFAULT_COMPOSITION_CAP)]
    composition_cap: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the star-height of an expression.
    Height {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        alphabet: String,
    },
    /// Decide whether a word belongs to an expression's language.
    Member {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        alphabet: String,
    },
    /// List every word of the language up to a length, one per line.
    Enum {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Compare two expressions on all words up to a length.
    Equiv {
        #[arg(long)]
        expr1: String,
        #[arg(long)]
        expr2: String,
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Build the language of words containing a factor exactly k times
    /// (or k modulo n with --mod) and print it with its height.
    CountLang {
        #[arg(long)]
        word: String,
        #[arg(long)]
        k: u32,
        #[arg(long = "mod")]
        modulus: Option<u32>,
        #[arg(long)]
        alphabet: String,
        /// Print the tree structure instead of the one-line form.
        #[arg(long)]
        tree: bool,
    },
    /// Rees zero-matrix semigroup commands; all take a spec file.
    #[command(subcommand)]
    Rees(ReesCommand),
    /// Check constructions against brute-force counting oracles.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand, Debug)]
enum ReesCommand {
    /// Evaluate the morphism on a word.
    Eval {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Build the preimage expression of one element ("zero" or
    /// "<i>,<residues...>,<lambda>").
    Preimage {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long)]
        tree: bool,
    },
    /// Build the preimage of a set of elements, semicolon-separated.
    Recognized {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        elements: String,
        #[arg(long)]
        tree: bool,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Sweep Count (and with --mod, ModCount) against occurrence
    /// counting, for one word or every supported word of length <= 3.
    Count {
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        max_k: u32,
        #[arg(long = "mod")]
        modulus: Option<u32>,
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Sweep every element preimage of a spec file against the
    /// evaluated morphism.
    Rees {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
}

/// Parse `args` and run; output goes to `out`, errors to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, String> {
    let limits = ReesLimits {
        tuple_budget: cli.tuple_budget,
        composition_cap: cli.composition_cap,
    };
    let enum_cap = cli.enum_cap;
    let comp_cap = cli.composition_cap;
    match cli.command {
        Command::Height { expr, alphabet } => {
            let alphabet = parse_alphabet(&alphabet)?;
            let e = parse(&expr, &alphabet).map_err(|e| e.to_string())?;
            writeln!(out, "{}", e.star_height()).map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::Member {
            expr,
            word,
            alphabet,
        } => {
            let alphabet = parse_alphabet(&alphabet)?;
            let e = parse(&expr, &alphabet).map_err(|e| e.to_string())?;
            let w = Word::parse_in(&word, &alphabet).map_err(|e| e.to_string())?;
            writeln!(out, "{}", member(&e, &w)).map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::Enum {
            expr,
            alphabet,
            max_len,
        } => {
            let alphabet = parse_alphabet(&alphabet)?;
            let e = parse(&expr, &alphabet).map_err(|e| e.to_string())?;
            let words = enumerate_capped(&e, &alphabet, max_len, enum_cap)
                .map_err(|e| e.to_string())?;
            for w in words.iter() {
                writeln!(out, "{w}").map_err(|e| e.to_string())?;
            }
            Ok(0)
        }
        Command::Equiv {
            expr1,
            expr2,
            alphabet,
            max_len,
        } => {
            let alphabet = parse_alphabet(&alphabet)?;
            let e1 = parse(&expr1, &alphabet).map_err(|e| e.to_string())?;
            let e2 = parse(&expr2, &alphabet).map_err(|e| e.to_string())?;
            let report = equiv_bounded_capped(&e1, &e2, &alphabet, max_len, enum_cap)
                .map_err(|e| e.to_string())?;
            if report.equivalent {
                writeln!(out, "equivalent up to length {}", report.max_len_checked)
            } else {
                writeln!(
                    out,
                    "not equivalent: counterexample \"{}\"",
                    report.counterexample.expect("read from a failed report")
                )
            }
            .map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::CountLang {
            word,
            k,
            modulus,
            alphabet,
            tree,
        } => {
            let alphabet = parse_alphabet(&alphabet)?;
            let w = Word::parse_in(&word, &alphabet).map_err(|e| e.to_string())?;
            let e = match modulus {
                None => {
                    let spec =
                        CountSpec::exact(w, k, alphabet).map_err(|e| e.to_string())?;
                    build_count_capped(&spec, comp_cap).map_err(|e| e.to_string())?
                }
                Some(n) => {
                    let spec =
                        CountSpec::modular(w, k, n, alphabet).map_err(|e| e.to_string())?;
                    build_modcount_capped(&spec, comp_cap).map_err(|e| e.to_string())?
                }
            };
            print_expr(out, &e, tree)?;
            Ok(0)
        }
        Command::Rees(command) => run_rees(command, &limits, out),
        Command::Verify(command) => run_verify(command, &limits, enum_cap, comp_cap, out),
    }
}

fn run_rees(
    command: ReesCommand,
    limits: &ReesLimits,
    out: &mut dyn Write,
) -> Result<i32, String> {
    match command {
        ReesCommand::Eval { spec, word } => {
            let (s, phi) = load_spec(&spec)?;
            let w = Word::parse_in(&word, phi.alphabet()).map_err(|e| e.to_string())?;
            let value = extend_morphism(&s, &phi, &w).map_err(|e| e.to_string())?;
            writeln!(out, "{value}").map_err(|e| e.to_string())?;
            Ok(0)
        }
        ReesCommand::Preimage {
            spec,
            element,
            tree,
        } => {
            let (s, phi) = load_spec(&spec)?;
            let elem = parse_element(&element, &s)?;
            let e = match elem {
                ReesElem::Zero => preimage_zero_expr(&s, &phi),
                ref triple => preimage_element_expr_with_limits(&s, &phi, triple, limits)
                    .map_err(|e| e.to_string())?,
            };
            print_expr(out, &e, tree)?;
            Ok(0)
        }
        ReesCommand::Recognized {
            spec,
            elements,
            tree,
        } => {
            let (s, phi) = load_spec(&spec)?;
            let xs: Vec<ReesElem> = elements
                .split(';')
                .filter(|part| !part.trim().is_empty())
                .map(|part| parse_element(part, &s))
                .collect::<Result<_, _>>()?;
            let e = recognized_language_expr_with_limits(&s, &phi, &xs, limits)
                .map_err(|e| e.to_string())?;
            print_expr(out, &e, tree)?;
            Ok(0)
        }
    }
}

fn run_verify(
    command: VerifyCommand,
    limits: &ReesLimits,
    enum_cap: usize,
    comp_cap: u32,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let rows = match command {
        VerifyCommand::Count {
            word,
            max_k,
            modulus,
            alphabet,
            max_len,
        } => {
            let alphabet = parse_alphabet(&alphabet)?;
            let words = match word {
                Some(text) => {
                    vec![Word::parse_in(&text, &alphabet).map_err(|e| e.to_string())?]
                }
                None => all_words_up_to(&alphabet, 3)
                    .into_iter()
                    .filter(|w| {
                        !w.is_empty()
                            && !matches!(
                                classify_word(w, &alphabet),
                                CaseTag::Unsupported { .. }
                            )
                    })
                    .collect(),
            };
            let sweep = Sweep {
                universe: all_words_up_to(&alphabet, max_len),
                alphabet,
                max_len,
                enum_cap,
            };
            verify_count_rows(&words, max_k, modulus, &sweep, comp_cap)?
        }
        VerifyCommand::Rees { spec, max_len } => {
            let (s, phi) = load_spec(&spec)?;
            let alphabet = phi.alphabet().clone();
            let sweep = Sweep {
                universe: all_words_up_to(&alphabet, max_len)
                    .into_iter()
                    .filter(|w| !w.is_empty())
                    .collect(),
                alphabet,
                max_len,
                enum_cap,
            };
            verify_rees_rows(&s, &phi, &sweep, limits)?
        }
    };
    render_rows(out, &rows)
}

struct VerifyRow {
    name: String,
    words_checked: usize,
    mismatches: usize,
    height: StarHeight,
    bound: &'static str,
    height_ok: bool,
    first_mismatch: Option<(Word, bool, bool)>,
}

impl VerifyRow {
    fn passed(&self) -> bool {
        self.mismatches == 0 && self.height_ok
    }
}

/// The word universe one verification sweep compares languages over.
struct Sweep {
    alphabet: Alphabet,
    universe: Vec<Word>,
    max_len: usize,
    enum_cap: usize,
}

impl Sweep {
    fn check_language(
        &self,
        name: String,
        e: &Expr,
        expected: &WordSet,
        bound: &'static str,
        height_ok: impl Fn(StarHeight) -> bool,
    ) -> Result<VerifyRow, String> {
        let got = enumerate_capped(e, &self.alphabet, self.max_len, self.enum_cap)
            .map_err(|e| e.to_string())?;
        let mut mismatches = 0;
        let mut first_mismatch = None;
        for w in &self.universe {
            let in_expr = got.contains(w);
            let in_oracle = expected.contains(w);
            if in_expr != in_oracle {
                mismatches += 1;
                if first_mismatch.is_none() {
                    first_mismatch = Some((w.clone(), in_expr, in_oracle));
                }
            }
        }
        let height = e.star_height();
        Ok(VerifyRow {
            name,
            words_checked: self.universe.len(),
            mismatches,
            height,
            bound,
            height_ok: height_ok(height),
            first_mismatch,
        })
    }
}

fn verify_count_rows(
    words: &[Word],
    max_k: u32,
    modulus: Option<u32>,
    sweep: &Sweep,
    comp_cap: u32,
) -> Result<Vec<VerifyRow>, String> {
    let mut rows = Vec::new();
    for w in words {
        for k in 0..=max_k {
            let spec = CountSpec::exact(w.clone(), k, sweep.alphabet.clone())
                .map_err(|e| e.to_string())?;
            let e = build_count_capped(&spec, comp_cap).map_err(|e| e.to_string())?;
            let expected: WordSet = sweep
                .universe
                .iter()
                .filter(|v| count_occurrences(v, w).expect("w non-empty") == k as usize)
                .cloned()
                .collect();
            rows.push(sweep.check_language(
                format!("Count({w},{k})"),
                &e,
                &expected,
                "=0",
                |h| h == StarHeight(0),
            )?);
        }
        if let Some(n) = modulus {
            for k in 0..n {
                let spec = CountSpec::modular(w.clone(), k, n, sweep.alphabet.clone())
                    .map_err(|e| e.to_string())?;
                let e = build_modcount_capped(&spec, comp_cap).map_err(|e| e.to_string())?;
                let expected: WordSet = sweep
                    .universe
                    .iter()
                    .filter(|v| {
                        count_occurrences(v, w).expect("w non-empty") % n as usize == k as usize
                    })
                    .cloned()
                    .collect();
                rows.push(sweep.check_language(
                    format!("ModCount({w},{k},{n})"),
                    &e,
                    &expected,
                    "<=1",
                    |h| h <= StarHeight(1),
                )?);
            }
        }
    }
    Ok(rows)
}

fn verify_rees_rows(
    s: &ReesSemigroup,
    phi: &Morphism,
    sweep: &Sweep,
    limits: &ReesLimits,
) -> Result<Vec<VerifyRow>, String> {
    let images: Vec<ReesElem> = sweep
        .universe
        .iter()
        .map(|w| extend_morphism(s, phi, w).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for elem in s.elements() {
        let (e, bound, height_ok): (Expr, &'static str, fn(StarHeight) -> bool) = match &elem {
            ReesElem::Zero => (
                preimage_zero_expr(s, phi),
                "=0",
                |h| h == StarHeight(0),
            ),
            triple => (
                preimage_element_expr_with_limits(s, phi, triple, limits)
                    .map_err(|e| e.to_string())?,
                "<=1",
                |h| h <= StarHeight(1),
            ),
        };
        let expected: WordSet = sweep
            .universe
            .iter()
            .zip(&images)
            .filter(|(_, image)| **image == elem)
            .map(|(w, _)| w.clone())
            .collect();
        rows.push(sweep.check_language(
            format!("preimage {elem}"),
            &e,
            &expected,
            bound,
            height_ok,
        )?);
    }
    Ok(rows)
}

fn render_rows(out: &mut dyn Write, rows: &[VerifyRow]) -> Result<i32, String> {
    let name_width = rows
        .iter()
        .map(|r| r.name.len())
        .chain(["construction".len()])
        .max()
        .unwrap_or(12);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<name_width$}  {:>7}  {:>10}  {:>6}  {:>5}  status",
        "construction", "words", "mismatches", "height", "bound"
    );
    let mut failures = 0;
    for row in rows {
        let status = if row.passed() { "ok" } else { "FAIL" };
        if !row.passed() {
            failures += 1;
        }
        let _ = writeln!(
            text,
            "{:<name_width$}  {:>7}  {:>10}  {:>6}  {:>5}  {status}",
            row.name,
            row.words_checked,
            row.mismatches,
            row.height.to_string(),
            row.bound
        );
        if let Some((w, in_expr, in_oracle)) = &row.first_mismatch {
            let _ = writeln!(
                text,
                "{:<name_width$}  counterexample \"{w}\": expression={in_expr}, oracle={in_oracle}",
                ""
            );
        }
    }
    if failures == 0 {
        let _ = writeln!(text, "all {} checks passed", rows.len());
    } else {
        let _ = writeln!(text, "{failures} of {} checks failed", rows.len());
    }
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(if failures == 0 { 0 } else { 1 })
}

fn print_expr(out: &mut dyn Write, e: &Expr, tree: bool) -> Result<(), String> {
    if tree {
        write!(out, "{}", e.tree_string()).map_err(|e| e.to_string())?;
    } else {
        writeln!(out, "{}", e.render()).map_err(|e| e.to_string())?;
    }
    writeln!(out, "height: {}", e.star_height()).map_err(|e| e.to_string())
}

fn parse_alphabet(text: &str) -> Result<Alphabet, String> {
    text.parse::<Alphabet>().map_err(|e| e.to_string())
}

fn load_spec(path: &std::path::Path) -> Result<(ReesSemigroup, Morphism), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_rees_spec(&text).map_err(|e| e.to_string())
}

fn parse_element(text: &str, s: &ReesSemigroup) -> Result<ReesElem, String> {
    parse_rees_element(text, s).map_err(|e| e.to_string())
}
