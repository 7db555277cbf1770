use super::{CellMatrix, Token};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The neighbour rules a well-formed matrix satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "L_in_column_0")]
    LeftInFirstColumn,
    #[serde(rename = "X_in_column_0")]
    CrossInFirstColumn,
    #[serde(rename = "U_in_row_0")]
    UpInFirstRow,
    #[serde(rename = "X_in_row_0")]
    CrossInFirstRow,
    /// `L` must follow `C` or `L`.
    #[serde(rename = "L_after_non_row_token")]
    LeftAfterForeign,
    /// `U` must sit below `C` or `U`.
    #[serde(rename = "U_below_non_column_token")]
    UpBelowForeign,
    /// `X` must follow `U` or `X`.
    #[serde(rename = "X_after_non_column_token")]
    CrossAfterForeign,
    /// `X` must sit below `L` or `X`.
    #[serde(rename = "X_below_non_row_token")]
    CrossBelowForeign,
    /// A position whose left neighbour continues downward and whose upper
    /// neighbour continues rightward lies inside that rectangle and must be `X`.
    #[serde(rename = "hole_in_span")]
    HoleInSpan,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::LeftInFirstColumn => "L_in_column_0",
            Rule::CrossInFirstColumn => "X_in_column_0",
            Rule::UpInFirstRow => "U_in_row_0",
            Rule::CrossInFirstRow => "X_in_row_0",
            Rule::LeftAfterForeign => "L_after_non_row_token",
            Rule::UpBelowForeign => "U_below_non_column_token",
            Rule::CrossAfterForeign => "X_after_non_column_token",
            Rule::CrossBelowForeign => "X_below_non_row_token",
            Rule::HoleInSpan => "hole_in_span",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub rule: Rule,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub is_valid: bool,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        let is_valid = violations.is_empty();
        Self {
            violations,
            is_valid,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.is_valid
    }

    pub fn has_rule(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid {
            return f.write_str("valid");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in self.violations.iter().take(5) {
            write!(f, "; {} at ({},{})", v.rule, v.row, v.col)?;
        }
        if self.violations.len() > 5 {
            f.write_str("; ...")?;
        }
        Ok(())
    }
}

/// Checks every neighbour rule and reports each violation with its position.
pub fn validate_matrix(m: &CellMatrix) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |row, col, rule: Rule, message: String| {
        out.push(Violation {
            row,
            col,
            rule,
            message,
        })
    };
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let t = m.get(r, c);
            let left = (c > 0).then(|| m.get(r, c - 1));
            let up = (r > 0).then(|| m.get(r - 1, c));
            match t {
                Token::Anchor => {}
                Token::Left => match left {
                    None => push(r, c, Rule::LeftInFirstColumn, "L has no left neighbour".into()),
                    Some(l) if !matches!(l, Token::Anchor | Token::Left) => push(
                        r,
                        c,
                        Rule::LeftAfterForeign,
                        format!("L follows {l}, expected C or L"),
                    ),
                    _ => {}
                },
                Token::Up => match up {
                    None => push(r, c, Rule::UpInFirstRow, "U has no upper neighbour".into()),
                    Some(u) if !matches!(u, Token::Anchor | Token::Up) => push(
                        r,
                        c,
                        Rule::UpBelowForeign,
                        format!("U below {u}, expected C or U"),
                    ),
                    _ => {}
                },
                Token::Cross => {
                    match left {
                        None => push(r, c, Rule::CrossInFirstColumn, "X has no left neighbour".into()),
                        Some(l) if !l.merges_up() => push(
                            r,
                            c,
                            Rule::CrossAfterForeign,
                            format!("X follows {l}, expected U or X"),
                        ),
                        _ => {}
                    }
                    match up {
                        None => push(r, c, Rule::CrossInFirstRow, "X has no upper neighbour".into()),
                        Some(u) if !u.merges_left() => push(
                            r,
                            c,
                            Rule::CrossBelowForeign,
                            format!("X below {u}, expected L or X"),
                        ),
                        _ => {}
                    }
                }
            }
            if t != Token::Cross {
                if let (Some(l), Some(u)) = (left, up) {
                    if l.merges_up() && u.merges_left() {
                        push(
                            r,
                            c,
                            Rule::HoleInSpan,
                            format!("{t} inside a merged rectangle, expected X"),
                        );
                    }
                }
            }
        }
    }
    ValidationReport::from_violations(out)
}
