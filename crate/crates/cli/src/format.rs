//! The plain-text matrix file format.
//!
//! ```text
//! pmat 1
//! p 7
//! dims 2 3
//! shift 0,0,0          # optional, one entry per column
//! 0 0 1
//! 1 1
//! 2
//! 2 2
//! 0 2
//! 2
//! ```
//!
//! After the header come `m * n` coefficient lines in row-major order, each
//! a space-separated list of decimal coefficients in ascending degree with
//! no trailing zeros; the zero polynomial is the single token `0`. `#`
//! starts a comment, output uses LF line endings, and
//! `parse(serialize(m, s)) == (m, s)` bit-exactly.

use std::fmt;

use polmat::{Poly, PolyMatrix, PrimeField, Shift};

/// A parse failure, tagged with the 1-based line it happened on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Significant lines: comments stripped, blanks skipped, 1-based numbers.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            None
        } else {
            Some((i + 1, trimmed))
        }
    })
}

pub fn parse_matrix_file(text: &str) -> Result<(PolyMatrix, Option<Shift>), ParseError> {
    let total_lines = text.lines().count();
    let eof = total_lines + 1;
    let mut lines = significant_lines(text);

    let (ln, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(eof, "missing header"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("pmat") {
        return Err(ParseError::new(ln, "expected `pmat <version>` header"));
    }
    match tokens.next() {
        Some("1") => {}
        Some(v) => return Err(ParseError::new(ln, format!("unknown format version `{v}`"))),
        None => return Err(ParseError::new(ln, "missing format version")),
    }
    if tokens.next().is_some() {
        return Err(ParseError::new(ln, "trailing tokens after header"));
    }

    let (ln, pline) = lines
        .next()
        .ok_or_else(|| ParseError::new(eof, "missing `p` line"))?;
    let mut tokens = pline.split_whitespace();
    if tokens.next() != Some("p") {
        return Err(ParseError::new(ln, "expected `p <prime>`"));
    }
    let p: u64 = tokens
        .next()
        .ok_or_else(|| ParseError::new(ln, "missing modulus"))?
        .parse()
        .map_err(|_| ParseError::new(ln, "modulus is not a decimal integer"))?;
    if tokens.next().is_some() {
        return Err(ParseError::new(ln, "trailing tokens after modulus"));
    }
    let field = PrimeField::new(p).map_err(|e| ParseError::new(ln, format!("bad modulus: {e}")))?;

    let (ln, dline) = lines
        .next()
        .ok_or_else(|| ParseError::new(eof, "missing `dims` line"))?;
    let mut tokens = dline.split_whitespace();
    if tokens.next() != Some("dims") {
        return Err(ParseError::new(ln, "expected `dims <rows> <cols>`"));
    }
    let rows: usize = tokens
        .next()
        .ok_or_else(|| ParseError::new(ln, "missing row count"))?
        .parse()
        .map_err(|_| ParseError::new(ln, "row count is not a nonnegative integer"))?;
    let cols: usize = tokens
        .next()
        .ok_or_else(|| ParseError::new(ln, "missing column count"))?
        .parse()
        .map_err(|_| ParseError::new(ln, "column count is not a nonnegative integer"))?;
    if tokens.next().is_some() {
        return Err(ParseError::new(ln, "trailing tokens after dimensions"));
    }
    if rows.checked_mul(cols).is_none_or(|prod| prod > 1 << 20) {
        return Err(ParseError::new(ln, "dimensions out of range"));
    }

    let mut pending: Option<(usize, &str)> = lines.next();
    let mut shift = None;
    if let Some((ln, line)) = pending {
        if let Some(rest) = line.strip_prefix("shift") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                shift = Some(parse_shift_entries(ln, rest.trim(), cols)?);
                pending = lines.next();
            }
        }
    }

    let mut entries: Vec<Poly> = Vec::with_capacity(rows * cols);
    while entries.len() < rows * cols {
        let (ln, line) = match pending.take() {
            Some(x) => x,
            None => match lines.next() {
                Some(x) => x,
                None => {
                    return Err(ParseError::new(
                        eof,
                        format!(
                            "expected {} entry lines, found {}",
                            rows * cols,
                            entries.len()
                        ),
                    ))
                }
            },
        };
        entries.push(parse_poly_line(ln, line, field)?);
    }
    if let Some((ln, _)) = pending.or_else(|| lines.next()) {
        return Err(ParseError::new(
            ln,
            format!("expected exactly {} entry lines, found more", rows * cols),
        ));
    }

    let mut matrix = PolyMatrix::zero(field, rows, cols);
    for (k, poly) in entries.into_iter().enumerate() {
        matrix.set(k / cols, k % cols, poly);
    }
    Ok((matrix, shift))
}

fn parse_shift_entries(ln: usize, rest: &str, cols: usize) -> Result<Shift, ParseError> {
    // Bounded so that degree-plus-shift bookkeeping stays far from i64
    // overflow whatever the matrix looks like.
    const SHIFT_LIMIT: i64 = 1 << 40;
    let values: Vec<i64> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(',')
            .map(|t| {
                let v: i64 = t
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::new(ln, format!("bad shift entry `{}`", t.trim())))?;
                if v.abs() > SHIFT_LIMIT {
                    return Err(ParseError::new(ln, format!("shift entry {v} out of range")));
                }
                Ok(v)
            })
            .collect::<Result<_, _>>()?
    };
    if values.len() != cols {
        return Err(ParseError::new(
            ln,
            format!("shift has {} entries, expected {}", values.len(), cols),
        ));
    }
    Ok(Shift::new(values))
}

fn parse_poly_line(ln: usize, line: &str, field: PrimeField) -> Result<Poly, ParseError> {
    let mut coeffs = Vec::new();
    for token in line.split_whitespace() {
        let c: u64 = token
            .parse()
            .map_err(|_| ParseError::new(ln, format!("bad coefficient `{token}`")))?;
        if c >= field.modulus() {
            return Err(ParseError::new(
                ln,
                format!("coefficient {c} is not reduced mod {}", field.modulus()),
            ));
        }
        coeffs.push(c);
    }
    match coeffs.as_slice() {
        [] => Err(ParseError::new(ln, "empty entry line")),
        [0] => Ok(Poly::zero(field)),
        cs => {
            if *cs.last().unwrap() == 0 {
                Err(ParseError::new(ln, "trailing zero coefficient"))
            } else {
                Ok(Poly::from_coeffs(field, cs))
            }
        }
    }
}

pub fn serialize_matrix(matrix: &PolyMatrix, shift: Option<&Shift>) -> String {
    let mut out = String::new();
    out.push_str("pmat 1\n");
    out.push_str(&format!("p {}\n", matrix.field().modulus()));
    out.push_str(&format!("dims {} {}\n", matrix.rows(), matrix.cols()));
    if let Some(s) = shift {
        let entries: Vec<String> = s.values().iter().map(|v| v.to_string()).collect();
        if entries.is_empty() {
            out.push_str("shift\n");
        } else {
            out.push_str(&format!("shift {}\n", entries.join(",")));
        }
    }
    for i in 0..matrix.rows() {
        for j in 0..matrix.cols() {
            let p = matrix.entry(i, j);
            if p.is_zero() {
                out.push_str("0\n");
            } else {
                let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                out.push_str(&coeffs.join(" "));
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_running_example() {
        let f7 = PrimeField::new(7).unwrap();
        let m = PolyMatrix::from_signed(
            f7,
            &[
                vec![vec![0, 0, 1], vec![1, 1], vec![2]],
                vec![vec![2, 2], vec![0, 2], vec![2]],
            ],
        )
        .unwrap();
        let text = serialize_matrix(&m, None);
        assert_eq!(text, "pmat 1\np 7\ndims 2 3\n0 0 1\n1 1\n2\n2 2\n0 2\n2\n");
        let (parsed, shift) = parse_matrix_file(&text).unwrap();
        assert_eq!(parsed, m);
        assert_eq!(shift, None);
    }

    #[test]
    fn empty_matrix_is_header_only() {
        let f7 = PrimeField::new(7).unwrap();
        let m = PolyMatrix::zero(f7, 0, 0);
        let text = serialize_matrix(&m, None);
        assert_eq!(text, "pmat 1\np 7\ndims 0 0\n");
        let (parsed, _) = parse_matrix_file(&text).unwrap();
        assert_eq!(parsed, m);
    }

    #[test]
    fn shift_line_round_trips() {
        let f7 = PrimeField::new(7).unwrap();
        let m = PolyMatrix::identity(f7, 2);
        let s = Shift::new(vec![-3, 5]);
        let text = serialize_matrix(&m, Some(&s));
        let (parsed, shift) = parse_matrix_file(&text).unwrap();
        assert_eq!(parsed, m);
        assert_eq!(shift, Some(s));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# a file\npmat 1\n\np 7   # the field\ndims 1 2\n0 1\n# done\n3\n";
        let (m, _) = parse_matrix_file(text).unwrap();
        assert_eq!(m.rows(), 1);
        assert_eq!(m.cols(), 2);
        assert_eq!(*m.entry(0, 0), Poly::from_signed(m.field(), &[0, 1]));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_matrix_file("pmat 2\np 7\ndims 0 0\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("unknown format version"));

        let err = parse_matrix_file("pmat 1\np 6\ndims 0 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("bad modulus"));

        let err = parse_matrix_file("pmat 1\np 7\ndims 1 1\n9\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("not reduced"));

        let err = parse_matrix_file("pmat 1\np 7\ndims 2 1\n1\n").unwrap_err();
        assert!(err.message.contains("expected 2 entry lines"));

        let err = parse_matrix_file("pmat 1\np 7\ndims 1 1\n1\n1\n").unwrap_err();
        assert_eq!(err.line, 5);

        let err = parse_matrix_file("pmat 1\np 7\ndims 1 1\n1 0\n").unwrap_err();
        assert!(err.message.contains("trailing zero"));

        let err = parse_matrix_file("pmat 1\np 7\ndims 1 2\nshift 1\n0\n0\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("shift has 1 entries"));

        let err =
            parse_matrix_file("pmat 1\np 7\ndims 1 1\nshift 9999999999999999\n0\n").unwrap_err();
        assert!(err.message.contains("out of range"));
    }
}
