//! Proptest strategies shared by the module test suites.

use std::sync::Arc;

use proptest::prelude::*;

use crate::expr::{Expr, GenExpr, Letter};
use crate::lang::Word;

/// Random expression trees over {a, b}, built from the raw enum
/// variants so arbitrary (non-smart) shapes are exercised.
pub(crate) fn arb_expr(depth: u32) -> BoxedStrategy<Expr> {
    let leaf = prop_oneof![
        Just(Arc::new(GenExpr::EmptySet)),
        Just(Arc::new(GenExpr::Epsilon)),
        prop_oneof![Just('a'), Just('b')]
            .prop_map(|c| Arc::new(GenExpr::Lit(Letter::new(c).unwrap()))),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Arc::new(GenExpr::Union(l, r))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Arc::new(GenExpr::Concat(l, r))),
            inner.clone().prop_map(|e| Arc::new(GenExpr::Star(e))),
            inner.prop_map(|e| Arc::new(GenExpr::Complement(e))),
        ]
    })
    .boxed()
}

/// Random words over {a, b} up to `max_len` letters.
pub(crate) fn arb_word(max_len: usize) -> BoxedStrategy<Word> {
    proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 0..=max_len)
        .prop_map(|cs| Word::from_letters(cs.into_iter().map(|c| Letter::new(c).unwrap()).collect()))
        .boxed()
}

/// Rebuild a tree bottom-up through the smart constructors.
pub(crate) fn smart_rebuild(e: &GenExpr) -> Expr {
    match e {
        GenExpr::EmptySet => GenExpr::empty(),
        GenExpr::Epsilon => GenExpr::epsilon(),
        GenExpr::Lit(x) => GenExpr::lit(*x),
        GenExpr::Union(l, r) => GenExpr::union(smart_rebuild(l), smart_rebuild(r)),
        GenExpr::Concat(l, r) => GenExpr::concat(smart_rebuild(l), smart_rebuild(r)),
        GenExpr::Star(inner) => GenExpr::star(smart_rebuild(inner)),
        GenExpr::Complement(inner) => GenExpr::complement(smart_rebuild(inner)),
    }
}
