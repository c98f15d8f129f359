//! Line-oriented text format describing a semigroup and morphism:
//!
//! ```text
//! group: 2 x 3          # cyclic moduli, each >= 2
//! I: 2                  # size of the index set I
//! Lambda: 2             # size of the index set Λ
//! P:                    # Lambda rows of I whitespace-separated entries
//! 1,2 0,1               #   "-" is the zero, "r1,...,rm" a group element
//! 1,0 -
//! alphabet: ab
//! map a: 1 1,2 1        # letter: i  g-residues  lambda
//! map b: zero           # or the semigroup zero
//! ```
//!
//! `#` starts a comment; blank lines are ignored. `group`, `I` and
//! `Lambda` must appear before `P`, and `alphabet` before the `map`
//! lines.

use crate::expr::{Alphabet, Letter};

use super::{AbelianElem, Morphism, ReesElem, ReesError, ReesSemigroup, SandwichEntry};

/// Parse the spec text into a semigroup and its morphism.
pub fn parse_rees_spec(text: &str) -> Result<(ReesSemigroup, Morphism), ReesError> {
    let mut moduli: Option<Vec<u32>> = None;
    let mut i_size: Option<usize> = None;
    let mut lambda_size: Option<usize> = None;
    let mut matrix: Option<Vec<Vec<SandwichEntry>>> = None;
    let mut rows_wanted = 0usize;
    let mut alphabet: Option<Alphabet> = None;
    let mut images: Vec<(Letter, ReesElem)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let fail = |message: String| ReesError::SpecFile {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }

        // pending matrix rows take priority over keyed lines
        if rows_wanted > 0 {
            let m = moduli.as_ref().expect("moduli precede P");
            let want_cols = i_size.expect("I precedes P");
            let row: Vec<SandwichEntry> = line
                .split_whitespace()
                .map(|entry| parse_entry(entry, m).map_err(&fail))
                .collect::<Result<_, _>>()?;
            if row.len() != want_cols {
                return Err(fail(format!(
                    "expected {want_cols} matrix entries, got {}",
                    row.len()
                )));
            }
            matrix.as_mut().expect("started by P:").push(row);
            rows_wanted -= 1;
            continue;
        }

        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| fail(format!("expected \"key: value\", got \"{line}\"")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "group" => {
                let parsed: Vec<u32> = value
                    .split('x')
                    .map(|part| {
                        part.trim()
                            .parse::<u32>()
                            .map_err(|_| fail(format!("bad modulus \"{}\"", part.trim())))
                    })
                    .collect::<Result<_, _>>()?;
                moduli = Some(parsed);
            }
            "I" => {
                i_size = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| fail(format!("bad size \"{value}\"")))?,
                );
            }
            "Lambda" => {
                lambda_size = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| fail(format!("bad size \"{value}\"")))?,
                );
            }
            "P" => {
                if moduli.is_none() || i_size.is_none() || lambda_size.is_none() {
                    return Err(fail("group, I and Lambda must appear before P".into()));
                }
                if !value.is_empty() {
                    return Err(fail("matrix rows belong on the following lines".into()));
                }
                rows_wanted = lambda_size.unwrap();
                matrix = Some(Vec::new());
            }
            "alphabet" => {
                alphabet =
                    Some(value.parse::<Alphabet>().map_err(|e| fail(e.to_string()))?);
            }
            _ if key.starts_with("map ") => {
                let name = key["map ".len()..].trim();
                let mut chars = name.chars();
                let letter = match (chars.next(), chars.next()) {
                    (Some(c), None) => Letter::new(c).map_err(|e| fail(e.to_string()))?,
                    _ => return Err(fail(format!("bad letter \"{name}\""))),
                };
                let m = moduli
                    .as_ref()
                    .ok_or_else(|| fail("group must appear before map lines".into()))?;
                let elem = parse_element_text(value, m).map_err(&fail)?;
                images.push((letter, elem));
            }
            other => return Err(fail(format!("unknown key \"{other}\""))),
        }
    }

    let end_fail = |message: String| ReesError::SpecFile {
        line: text.lines().count(),
        message,
    };
    if rows_wanted > 0 {
        return Err(end_fail(format!("{rows_wanted} matrix rows missing")));
    }
    let moduli = moduli.ok_or_else(|| end_fail("missing group line".into()))?;
    let i_size = i_size.ok_or_else(|| end_fail("missing I line".into()))?;
    let lambda_size = lambda_size.ok_or_else(|| end_fail("missing Lambda line".into()))?;
    let matrix = matrix.ok_or_else(|| end_fail("missing P block".into()))?;
    let alphabet = alphabet.ok_or_else(|| end_fail("missing alphabet line".into()))?;

    let semigroup = ReesSemigroup::new(moduli, i_size, lambda_size, matrix)?;
    let morphism = Morphism::new(&semigroup, alphabet, images)?;
    Ok((semigroup, morphism))
}

fn parse_entry(entry: &str, moduli: &[u32]) -> Result<SandwichEntry, String> {
    if entry == "-" {
        return Ok(SandwichEntry::Zero);
    }
    Ok(SandwichEntry::Value(parse_residues(entry, moduli)?))
}

fn parse_residues(text: &str, moduli: &[u32]) -> Result<AbelianElem, String> {
    let residues: Vec<u32> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad residue \"{}\"", part.trim()))
        })
        .collect::<Result<_, _>>()?;
    if residues.len() != moduli.len() {
        return Err(format!(
            "expected {} residues, got {}",
            moduli.len(),
            residues.len()
        ));
    }
    if let Some((r, n)) = residues
        .iter()
        .zip(moduli)
        .find(|(r, n)| *r >= *n)
        .map(|(r, n)| (*r, *n))
    {
        return Err(format!("residue {r} is not below the modulus {n}"));
    }
    Ok(AbelianElem::new(residues))
}

/// `zero` or `<i> <g-residues> <lambda>`.
fn parse_element_text(text: &str, moduli: &[u32]) -> Result<ReesElem, String> {
    if text == "zero" {
        return Ok(ReesElem::Zero);
    }
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected \"zero\" or \"<i> <residues> <lambda>\", got \"{text}\""
        ));
    }
    let i = parts[0]
        .parse::<usize>()
        .map_err(|_| format!("bad index \"{}\"", parts[0]))?;
    let g = parse_residues(parts[1], moduli)?;
    let lambda = parts[2]
        .parse::<usize>()
        .map_err(|_| format!("bad index \"{}\"", parts[2]))?;
    Ok(ReesElem::Triple { i, g, lambda })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{F1_SPEC, F2_SPEC};
    use super::*;

    #[test]
    fn parses_both_fixtures() {
        let (s1, phi1) = parse_rees_spec(F1_SPEC).unwrap();
        assert_eq!(s1.moduli(), &[2]);
        assert_eq!((s1.i_size(), s1.lambda_size()), (2, 2));
        assert_eq!(phi1.alphabet().to_string(), "abc");
        assert_eq!(phi1.zero_letters().len(), 1);

        let (s2, phi2) = parse_rees_spec(F2_SPEC).unwrap();
        assert_eq!(s2.moduli(), &[2, 3]);
        assert!(s2.is_regular_matrix());
        assert!(phi2.zero_letters().is_empty());
    }

    #[test]
    fn reports_line_numbers() {
        let bad = "group: 2\nI: 2\nLambda: 2\nP:\n0 1\n1 oops\nalphabet: a\nmap a: zero\n";
        match parse_rees_spec(bad).unwrap_err() {
            ReesError::SpecFile { line, message } => {
                assert_eq!(line, 6);
                assert!(message.contains("oops"), "message: {message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_order_and_incomplete_specs() {
        let premature = "P:\n0 1\n";
        assert!(matches!(
            parse_rees_spec(premature).unwrap_err(),
            ReesError::SpecFile { line: 1, .. }
        ));

        let unmapped = "group: 2\nI: 1\nLambda: 1\nP:\n0\nalphabet: ab\nmap a: zero\n";
        assert_eq!(
            parse_rees_spec(unmapped).unwrap_err(),
            ReesError::IncompleteMorphism
        );

        let bad_residue = "group: 2\nI: 1\nLambda: 1\nP:\n0\nalphabet: a\nmap a: 1 5 1\n";
        assert!(matches!(
            parse_rees_spec(bad_residue).unwrap_err(),
            ReesError::SpecFile { line: 7, .. }
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let spec = "\n# heading\ngroup: 2   # binary\nI: 1\nLambda: 1\nP:\n1\nalphabet: a\nmap a: 1 1 1\n";
        let (s, phi) = parse_rees_spec(spec).unwrap();
        assert_eq!(s.moduli(), &[2]);
        assert_eq!(phi.alphabet().len(), 1);
    }
}
