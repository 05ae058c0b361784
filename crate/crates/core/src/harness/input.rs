//! Comparison file format.
//!
//! ```text
//! # comments start with '#'
//! n=4
//! 0,1
//! 2,1
//! ```
//!
//! The first non-comment line declares the item count. Every following line
//! `a,b` is one observation that item `a` ranks below item `b`.

use crate::error::{Error, Result};
use crate::system::Comparison;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonFile {
    pub n: usize,
    pub comparisons: Vec<Comparison>,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_comparisons(text: &str) -> Result<ComparisonFile> {
    let mut n = None;
    let mut comparisons = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(n) = n else {
            let value = line
                .strip_prefix("n=")
                .ok_or_else(|| parse_error(line_no, "expected header `n=<count>`"))?;
            let count: usize = value
                .trim()
                .parse()
                .map_err(|_| parse_error(line_no, format!("invalid item count `{}`", value.trim())))?;
            n = Some(count);
            continue;
        };
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| parse_error(line_no, format!("expected `low,high`, got `{line}`")))?;
        let parse_index = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| parse_error(line_no, format!("invalid item index `{}`", s.trim())))
        };
        let (low, high) = (parse_index(a)?, parse_index(b)?);
        let c = Comparison::new(low, high).map_err(|e| parse_error(line_no, e.to_string()))?;
        c.check(n).map_err(|e| parse_error(line_no, e.to_string()))?;
        comparisons.push(c);
    }
    let n = n.ok_or_else(|| parse_error(0, "missing header `n=<count>`"))?;
    Ok(ComparisonFile { n, comparisons })
}

pub fn format_comparisons(n: usize, comparisons: &[Comparison]) -> String {
    let mut out = format!("n={n}\n");
    for c in comparisons {
        out.push_str(&format!("{},{}\n", c.low(), c.high()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_pairs() {
        let f = parse_comparisons("n=4\n0,1\n1,2\n").unwrap();
        assert_eq!(f.n, 4);
        assert_eq!(f.comparisons, vec![Comparison::new(0, 1).unwrap(), Comparison::new(1, 2).unwrap()]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let f = parse_comparisons("# five items\n\nn = 5 \n 3 , 4  # trailing\n#0,1\n").unwrap_err();
        // header must be written `n=`
        assert!(matches!(f, Error::Parse { line: 3, .. }));
        let f = parse_comparisons("# five items\n\nn=5\n 3 , 4  # trailing\n#0,1\n").unwrap();
        assert_eq!(f.comparisons, vec![Comparison::new(3, 4).unwrap()]);
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("n=4\n3,3\n", 2),
            ("n=4\n0,4\n", 2),
            ("n=4\n0;1\n", 2),
            ("n=4\n0,x\n", 2),
            ("n=4\n0,1\n1,2,3\n", 3),
            ("0,1\n", 1),
            ("n=four\n", 1),
        ];
        for (text, line) in cases {
            match parse_comparisons(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(parse_comparisons("# nothing\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn self_comparison_message() {
        let err = parse_comparisons("n=4\n3,3\n").unwrap_err();
        assert!(err.to_string().contains("itself"), "{err}");
    }

    #[test]
    fn format_round_trips() {
        let comps = vec![Comparison::new(0, 1).unwrap(), Comparison::new(2, 1).unwrap()];
        let text = format_comparisons(3, &comps);
        assert_eq!(parse_comparisons(&text).unwrap(), ComparisonFile { n: 3, comparisons: comps });
    }
}
