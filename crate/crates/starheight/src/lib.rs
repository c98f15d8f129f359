//! Generalised regular expressions with certified star-height bounds.
//!
//! The crate builds expressions for two families of languages and ships
//! the machinery to check them against independent oracles at bounded
//! word length:
//!
//! * subword-counting languages — words containing a fixed factor
//!   exactly `k` times ([`counting::build_count`], star-height 0) or
//!   `k` modulo `n` times ([`counting::build_modcount`], star-height
//!   at most 1);
//! * preimages of elements under morphisms from `A⁺` into Rees
//!   zero-matrix semigroups over abelian groups ([`rees`], star-height
//!   at most 1).
//!
//! Expressions live in [`expr`]; their semantics (derivative-based
//! membership, bounded enumeration and equivalence) in [`lang`]. The
//! `starheight` binary exposes everything on the command line,
//! including `verify` subcommands that sweep the constructions against
//! brute-force occurrence counting.
//!
//! ```
//! use starheight::counting::{build_count, CountSpec};
//! use starheight::expr::{Alphabet, StarHeight};
//! use starheight::lang::{member, Word};
//!
//! let alphabet: Alphabet = "ab".parse().unwrap();
//! let aba = Word::parse("aba").unwrap();
//!
//! // words containing the factor aba exactly twice, star-free
//! let spec = CountSpec::exact(aba, 2, alphabet).unwrap();
//! let expr = build_count(&spec).unwrap();
//! assert_eq!(expr.star_height(), StarHeight(0));
//!
//! // abababa holds three overlapping occurrences, ababa two
//! assert!(member(&expr, &Word::parse("ababa").unwrap()));
//! assert!(!member(&expr, &Word::parse("abababa").unwrap()));
//! ```

pub mod cli;
pub mod counting;
pub mod expr;
pub mod lang;
pub mod rees;

#[cfg(test)]
pub(crate) mod testutil;
