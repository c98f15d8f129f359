//! C ABI for the starheight library.
//!
//! Every function returns an [`ShStatus`]; results come back through
//! out-parameters. Handles are opaque and freed with the matching
//! `*_free` function. Strings returned through `char **` are
//! NUL-terminated, owned by the caller, and released with
//! [`sh_string_free`]. On any non-OK status,
//! [`sh_last_error_message`] returns a description of what went wrong
//! on the current thread.
//!
//! The generated header lands in `include/starheight.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use starheight::counting::{build_count, build_modcount, CountSpec};
use starheight::expr::{parse, Alphabet, Expr};
use starheight::lang::{enumerate, equiv_bounded, member, Word};
use starheight::rees::{
    extend_morphism, parse_element, parse_rees_spec, preimage_element_expr, preimage_zero_expr,
    recognized_language_expr, Morphism, ReesElem, ReesSemigroup,
};

/// Result of every API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShStatus {
    /// The call succeeded.
    ShOk = 0,
    /// A pointer argument was NULL or text was not valid UTF-8.
    ShErrInvalidArgument = 1,
    /// Input text did not parse (expression, word, element or spec).
    ShErrParse = 2,
    /// The requested construction is not covered (word shape, modulus).
    ShErrUnsupported = 3,
    /// An expansion limit was hit (enumeration cap, tuple budget,
    /// composition cap).
    ShErrLimit = 4,
}

/// Opaque alphabet handle.
pub struct ShAlphabet(Alphabet);

/// Opaque expression handle.
pub struct ShExpr(Expr);

/// Opaque handle bundling a Rees zero-matrix semigroup with its
/// morphism, as read from spec text.
pub struct ShRees {
    semigroup: ReesSemigroup,
    morphism: Morphism,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<Vec<u8>>) {
    let text = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

/// The message for the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn fail(status: ShStatus, message: String) -> ShStatus {
    set_error(message);
    status
}

fn invalid(message: &str) -> ShStatus {
    fail(ShStatus::ShErrInvalidArgument, message.to_string())
}

/// Classify library errors whose display text mentions a limit.
fn classify(text: String) -> ShStatus {
    let limit = text.contains("cap") || text.contains("budget");
    let status = if limit {
        ShStatus::ShErrLimit
    } else {
        ShStatus::ShErrParse
    };
    fail(status, text)
}

unsafe fn read_str<'a>(text: *const c_char, what: &str) -> Result<&'a str, ShStatus> {
    if text.is_null() {
        return Err(invalid(&format!("{what} is NULL")));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| invalid(&format!("{what} is not valid UTF-8")))
}

fn give_string(text: String, out: *mut *mut c_char) -> ShStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ShStatus::ShOk
        }
        Err(_) => invalid("result contains an interior NUL"),
    }
}

/// Build an alphabet from its letters, e.g. `"abc"`.
///
/// # Safety
/// `letters` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sh_alphabet_new(
    letters: *const c_char,
    out: *mut *mut ShAlphabet,
) -> ShStatus {
    if out.is_null() {
        return invalid("out is NULL");
    }
    let text = match read_str(letters, "letters") {
        Ok(t) => t,
        Err(status) => return status,
    };
    match text.parse::<Alphabet>() {
        Ok(a) => {
            *out = Box::into_raw(Box::new(ShAlphabet(a)));
            ShStatus::ShOk
        }
        Err(e) => fail(ShStatus::ShErrParse, e.to_string()),
    }
}

/// # Safety
/// `alphabet` must come from [`sh_alphabet_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sh_alphabet_free(alphabet: *mut ShAlphabet) {
    if !alphabet.is_null() {
        drop(Box::from_raw(alphabet));
    }
}

/// Parse an expression in the text grammar (`0`, `1`, letters, `|`,
/// juxtaposition, `*`, `!`, `&`, `-`, parentheses).
///
/// # Safety
/// All pointers must be valid; `text` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sh_expr_parse(
    alphabet: *const ShAlphabet,
    text: *const c_char,
    out: *mut *mut ShExpr,
) -> ShStatus {
    if alphabet.is_null() || out.is_null() {
        return invalid("alphabet or out is NULL");
    }
    let text = match read_str(text, "text") {
        Ok(t) => t,
        Err(status) => return status,
    };
    match parse(text, &(*alphabet).0) {
        Ok(e) => {
            *out = Box::into_raw(Box::new(ShExpr(e)));
            ShStatus::ShOk
        }
        Err(e) => fail(ShStatus::ShErrParse, e.to_string()),
    }
}

/// # Safety
/// `expr` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sh_expr_free(expr: *mut ShExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Star-height of the expression tree.
///
/// # Safety
/// `expr` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn sh_expr_star_height(expr: *const ShExpr) -> u32 {
    if expr.is_null() {
        return u32::MAX;
    }
    (*expr).0.star_height().0
}

/// Render the expression in the text grammar.
///
/// # Safety
/// Pointers must be valid; free the result with [`sh_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sh_expr_render(expr: *const ShExpr, out: *mut *mut c_char) -> ShStatus {
    if expr.is_null() || out.is_null() {
        return invalid("expr or out is NULL");
    }
    give_string((*expr).0.render(), out)
}

/// Does `word` (possibly empty) belong to the expression's language?
///
/// # Safety
/// Pointers must be valid; `word` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sh_expr_member(
    expr: *const ShExpr,
    word: *const c_char,
    out: *mut bool,
) -> ShStatus {
    if expr.is_null() || out.is_null() {
        return invalid("expr or out is NULL");
    }
    let text = match read_str(word, "word") {
        Ok(t) => t,
        Err(status) => return status,
    };
    match Word::parse(text) {
        Ok(w) => {
            *out = member(&(*expr).0, &w);
            ShStatus::ShOk
        }
        Err(e) => fail(ShStatus::ShErrParse, e.to_string()),
    }
}

/// All words of the language up to `max_len`, newline-separated in
/// length-then-lexicographic order (the empty word prints as an empty
/// line).
///
/// # Safety
/// Pointers must be valid; free the result with [`sh_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sh_expr_enumerate(
    expr: *const ShExpr,
    alphabet: *const ShAlphabet,
    max_len: u32,
    out: *mut *mut c_char,
) -> ShStatus {
    if expr.is_null() || alphabet.is_null() || out.is_null() {
        return invalid("expr, alphabet or out is NULL");
    }
    match enumerate(&(*expr).0, &(*alphabet).0, max_len as usize) {
        Ok(words) => {
            let lines: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            give_string(lines.join("\n"), out)
        }
        Err(e) => fail(ShStatus::ShErrLimit, e.to_string()),
    }
}

/// Compare two languages on every word up to `max_len`. On
/// inequivalence, `*counterexample` receives the least word that tells
/// them apart (otherwise NULL).
///
/// # Safety
/// Pointers must be valid; free `*counterexample` with
/// [`sh_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sh_expr_equiv(
    left: *const ShExpr,
    right: *const ShExpr,
    alphabet: *const ShAlphabet,
    max_len: u32,
    equivalent: *mut bool,
    counterexample: *mut *mut c_char,
) -> ShStatus {
    if left.is_null()
        || right.is_null()
        || alphabet.is_null()
        || equivalent.is_null()
        || counterexample.is_null()
    {
        return invalid("a pointer argument is NULL");
    }
    match equiv_bounded(&(*left).0, &(*right).0, &(*alphabet).0, max_len as usize) {
        Ok(report) => {
            *equivalent = report.equivalent;
            match report.counterexample {
                None => {
                    *counterexample = ptr::null_mut();
                    ShStatus::ShOk
                }
                Some(w) => give_string(w.to_string(), counterexample),
            }
        }
        Err(e) => fail(ShStatus::ShErrLimit, e.to_string()),
    }
}

/// The star-free language of words containing `word` exactly `k` times.
///
/// # Safety
/// Pointers must be valid; `word` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sh_count_expr(
    alphabet: *const ShAlphabet,
    word: *const c_char,
    k: u32,
    out: *mut *mut ShExpr,
) -> ShStatus {
    if alphabet.is_null() || out.is_null() {
        return invalid("alphabet or out is NULL");
    }
    let text = match read_str(word, "word") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let built = Word::parse(text)
        .map_err(|e| e.to_string())
        .and_then(|w| {
            CountSpec::exact(w, k, (*alphabet).0.clone()).map_err(|e| e.to_string())
        })
        .and_then(|spec| build_count(&spec).map_err(|e| e.to_string()));
    match built {
        Ok(e) => {
            *out = Box::into_raw(Box::new(ShExpr(e)));
            ShStatus::ShOk
        }
        Err(text) if text.contains("no construction") => {
            fail(ShStatus::ShErrUnsupported, text)
        }
        Err(text) => classify(text),
    }
}

/// The height-at-most-one language of words containing `word` exactly
/// `k` modulo `modulus` times.
///
/// # Safety
/// Pointers must be valid; `word` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sh_modcount_expr(
    alphabet: *const ShAlphabet,
    word: *const c_char,
    k: u32,
    modulus: u32,
    out: *mut *mut ShExpr,
) -> ShStatus {
    if alphabet.is_null() || out.is_null() {
        return invalid("alphabet or out is NULL");
    }
    let text = match read_str(word, "word") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let built = Word::parse(text)
        .map_err(|e| e.to_string())
        .and_then(|w| {
            CountSpec::modular(w, k, modulus, (*alphabet).0.clone()).map_err(|e| e.to_string())
        })
        .and_then(|spec| build_modcount(&spec).map_err(|e| e.to_string()));
    match built {
        Ok(e) => {
            *out = Box::into_raw(Box::new(ShExpr(e)));
            ShStatus::ShOk
        }
        Err(text) if text.contains("no construction") || text.contains("modulus") => {
            fail(ShStatus::ShErrUnsupported, text)
        }
        Err(text) => classify(text),
    }
}

/// Load a semigroup and morphism from spec text (the same line format
/// the CLI reads from files).
///
/// # Safety
/// Pointers must be valid; `spec_text` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sh_rees_parse(
    spec_text: *const c_char,
    out: *mut *mut ShRees,
) -> ShStatus {
    if out.is_null() {
        return invalid("out is NULL");
    }
    let text = match read_str(spec_text, "spec_text") {
        Ok(t) => t,
        Err(status) => return status,
    };
    match parse_rees_spec(text) {
        Ok((semigroup, morphism)) => {
            *out = Box::into_raw(Box::new(ShRees {
                semigroup,
                morphism,
            }));
            ShStatus::ShOk
        }
        Err(e) => fail(ShStatus::ShErrParse, e.to_string()),
    }
}

/// # Safety
/// `rees` must come from [`sh_rees_parse`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sh_rees_free(rees: *mut ShRees) {
    if !rees.is_null() {
        drop(Box::from_raw(rees));
    }
}

/// Evaluate the morphism on a non-empty word; the image prints as
/// `zero` or `(i, [residues], lambda)`.
///
/// # Safety
/// Pointers must be valid; free the result with [`sh_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sh_rees_eval(
    rees: *const ShRees,
    word: *const c_char,
    out: *mut *mut c_char,
) -> ShStatus {
    if rees.is_null() || out.is_null() {
        return invalid("rees or out is NULL");
    }
    let text = match read_str(word, "word") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let rees = &*rees;
    let evaluated = Word::parse_in(text, rees.morphism.alphabet())
        .map_err(|e| e.to_string())
        .and_then(|w| {
            extend_morphism(&rees.semigroup, &rees.morphism, &w).map_err(|e| e.to_string())
        });
    match evaluated {
        Ok(elem) => give_string(elem.to_string(), out),
        Err(text) => fail(ShStatus::ShErrParse, text),
    }
}

/// The preimage expression of one element, written `zero` or
/// `<i>,<residues...>,<lambda>`; star-free for the zero, height at
/// most one otherwise.
///
/// # Safety
/// Pointers must be valid; `element` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sh_rees_preimage(
    rees: *const ShRees,
    element: *const c_char,
    out: *mut *mut ShExpr,
) -> ShStatus {
    if rees.is_null() || out.is_null() {
        return invalid("rees or out is NULL");
    }
    let text = match read_str(element, "element") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let rees = &*rees;
    let elem = match parse_element(text, &rees.semigroup) {
        Ok(e) => e,
        Err(e) => return fail(ShStatus::ShErrParse, e.to_string()),
    };
    let built = match elem {
        ReesElem::Zero => Ok(preimage_zero_expr(&rees.semigroup, &rees.morphism)),
        ref triple => preimage_element_expr(&rees.semigroup, &rees.morphism, triple),
    };
    match built {
        Ok(e) => {
            *out = Box::into_raw(Box::new(ShExpr(e)));
            ShStatus::ShOk
        }
        Err(e) => classify(e.to_string()),
    }
}

/// The preimage of a set of elements, semicolon-separated, restricted
/// to non-empty words; height at most one.
///
/// # Safety
/// Pointers must be valid; `elements` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sh_rees_recognized(
    rees: *const ShRees,
    elements: *const c_char,
    out: *mut *mut ShExpr,
) -> ShStatus {
    if rees.is_null() || out.is_null() {
        return invalid("rees or out is NULL");
    }
    let text = match read_str(elements, "elements") {
        Ok(t) => t,
        Err(status) => return status,
    };
    let rees = &*rees;
    let mut xs = Vec::new();
    for part in text.split(';').filter(|p| !p.trim().is_empty()) {
        match parse_element(part, &rees.semigroup) {
            Ok(e) => xs.push(e),
            Err(e) => return fail(ShStatus::ShErrParse, e.to_string()),
        }
    }
    match recognized_language_expr(&rees.semigroup, &rees.morphism, &xs) {
        Ok(e) => {
            *out = Box::into_raw(Box::new(ShExpr(e)));
            ShStatus::ShOk
        }
        Err(e) => classify(e.to_string()),
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `text` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn sh_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(text: &str) -> CString {
        CString::new(text).unwrap()
    }

    unsafe fn take_string(raw: *mut c_char) -> String {
        let text = CStr::from_ptr(raw).to_str().unwrap().to_string();
        sh_string_free(raw);
        text
    }

    #[test]
    fn expression_round_trip_through_the_c_surface() {
        unsafe {
            let mut alphabet = ptr::null_mut();
            assert_eq!(
                sh_alphabet_new(cstr("ab").as_ptr(), &mut alphabet),
                ShStatus::ShOk
            );

            let mut expr = ptr::null_mut();
            assert_eq!(
                sh_expr_parse(alphabet, cstr("!(!0 aa !0)").as_ptr(), &mut expr),
                ShStatus::ShOk
            );
            assert_eq!(sh_expr_star_height(expr), 0);

            let mut rendered = ptr::null_mut();
            assert_eq!(sh_expr_render(expr, &mut rendered), ShStatus::ShOk);
            assert_eq!(take_string(rendered), "!(!0aa!0)");

            let mut is_member = false;
            assert_eq!(
                sh_expr_member(expr, cstr("aba").as_ptr(), &mut is_member),
                ShStatus::ShOk
            );
            assert!(is_member);
            assert_eq!(
                sh_expr_member(expr, cstr("aa").as_ptr(), &mut is_member),
                ShStatus::ShOk
            );
            assert!(!is_member);

            let mut listing = ptr::null_mut();
            assert_eq!(
                sh_expr_enumerate(expr, alphabet, 2, &mut listing),
                ShStatus::ShOk
            );
            assert_eq!(take_string(listing), "\na\nb\nab\nba\nbb");

            sh_expr_free(expr);
            sh_alphabet_free(alphabet);
        }
    }

    #[test]
    fn counting_constructions_and_errors() {
        unsafe {
            let mut alphabet = ptr::null_mut();
            sh_alphabet_new(cstr("ab").as_ptr(), &mut alphabet);

            let mut count = ptr::null_mut();
            assert_eq!(
                sh_count_expr(alphabet, cstr("aba").as_ptr(), 1, &mut count),
                ShStatus::ShOk
            );
            assert_eq!(sh_expr_star_height(count), 0);
            sh_expr_free(count);

            let mut modcount = ptr::null_mut();
            assert_eq!(
                sh_modcount_expr(alphabet, cstr("ab").as_ptr(), 1, 2, &mut modcount),
                ShStatus::ShOk
            );
            assert!(sh_expr_star_height(modcount) <= 1);
            sh_expr_free(modcount);

            let mut bad = ptr::null_mut();
            assert_eq!(
                sh_count_expr(alphabet, cstr("abab").as_ptr(), 1, &mut bad),
                ShStatus::ShErrUnsupported
            );
            let message = CStr::from_ptr(sh_last_error_message());
            assert!(message.to_str().unwrap().contains("abab"));

            assert_eq!(
                sh_count_expr(alphabet, cstr("a|b").as_ptr(), 1, &mut bad),
                ShStatus::ShErrParse
            );

            sh_alphabet_free(alphabet);
        }
    }

    #[test]
    fn equivalence_reports_a_counterexample() {
        unsafe {
            let mut alphabet = ptr::null_mut();
            sh_alphabet_new(cstr("ab").as_ptr(), &mut alphabet);
            let mut left = ptr::null_mut();
            let mut right = ptr::null_mut();
            sh_expr_parse(alphabet, cstr("a").as_ptr(), &mut left);
            sh_expr_parse(alphabet, cstr("a|aa").as_ptr(), &mut right);

            let mut equivalent = true;
            let mut counterexample = ptr::null_mut();
            assert_eq!(
                sh_expr_equiv(left, right, alphabet, 3, &mut equivalent, &mut counterexample),
                ShStatus::ShOk
            );
            assert!(!equivalent);
            assert_eq!(take_string(counterexample), "aa");

            sh_expr_free(left);
            sh_expr_free(right);
            sh_alphabet_free(alphabet);
        }
    }

    #[test]
    fn rees_surface_loads_and_builds() {
        let spec = "group: 2\nI: 2\nLambda: 2\nP:\n0 1\n1 -\nalphabet: abc\n\
                    map a: 1 0 1\nmap b: 2 1 2\nmap c: zero\n";
        unsafe {
            let mut rees = ptr::null_mut();
            assert_eq!(sh_rees_parse(cstr(spec).as_ptr(), &mut rees), ShStatus::ShOk);

            let mut image = ptr::null_mut();
            assert_eq!(
                sh_rees_eval(rees, cstr("ab").as_ptr(), &mut image),
                ShStatus::ShOk
            );
            assert_eq!(take_string(image), "(1, [0], 2)");

            let mut zero = ptr::null_mut();
            assert_eq!(
                sh_rees_preimage(rees, cstr("zero").as_ptr(), &mut zero),
                ShStatus::ShOk
            );
            assert_eq!(sh_expr_star_height(zero), 0);
            let mut is_member = false;
            sh_expr_member(zero, cstr("bb").as_ptr(), &mut is_member);
            assert!(is_member);
            sh_expr_free(zero);

            let mut preimage = ptr::null_mut();
            assert_eq!(
                sh_rees_preimage(rees, cstr("1,0,2").as_ptr(), &mut preimage),
                ShStatus::ShOk
            );
            assert!(sh_expr_star_height(preimage) <= 1);
            sh_expr_member(preimage, cstr("ab").as_ptr(), &mut is_member);
            assert!(is_member);
            sh_expr_free(preimage);

            let mut recognized = ptr::null_mut();
            assert_eq!(
                sh_rees_recognized(rees, cstr("zero;1,0,2").as_ptr(), &mut recognized),
                ShStatus::ShOk
            );
            assert!(sh_expr_star_height(recognized) <= 1);
            sh_expr_free(recognized);

            let mut bad = ptr::null_mut();
            assert_eq!(
                sh_rees_preimage(rees, cstr("9,0,1").as_ptr(), &mut bad),
                ShStatus::ShErrParse
            );

            sh_rees_free(rees);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut out = ptr::null_mut();
            assert_eq!(
                sh_alphabet_new(ptr::null(), &mut out),
                ShStatus::ShErrInvalidArgument
            );
            assert_eq!(
                sh_expr_parse(ptr::null(), cstr("a").as_ptr(), ptr::null_mut()),
                ShStatus::ShErrInvalidArgument
            );
            assert_eq!(sh_expr_star_height(ptr::null()), u32::MAX);
            sh_expr_free(ptr::null_mut());
            sh_string_free(ptr::null_mut());
        }
    }
}
