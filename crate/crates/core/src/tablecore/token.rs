use serde::{Deserialize, Serialize};
use std::fmt;

/// One position of an atomic cell matrix.
///
/// The serialized letters are fixed: `C` starts a new cell, `L` continues the
/// cell to the left, `U` continues the cell above, and `X` continues a cell
/// that extends both left and up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Token {
    #[serde(rename = "C")]
    Anchor,
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "U")]
    Up,
    #[serde(rename = "X")]
    Cross,
}

impl Token {
    pub const ALL: [Token; 4] = [Token::Anchor, Token::Left, Token::Up, Token::Cross];

    pub fn letter(self) -> char {
        match self {
            Token::Anchor => 'C',
            Token::Left => 'L',
            Token::Up => 'U',
            Token::Cross => 'X',
        }
    }

    pub fn from_letter(c: char) -> Option<Token> {
        match c {
            'C' => Some(Token::Anchor),
            'L' => Some(Token::Left),
            'U' => Some(Token::Up),
            'X' => Some(Token::Cross),
            _ => None,
        }
    }

    /// True for tokens that belong to the same cell as their left neighbour.
    pub fn merges_left(self) -> bool {
        matches!(self, Token::Left | Token::Cross)
    }

    /// True for tokens that belong to the same cell as their upper neighbour.
    pub fn merges_up(self) -> bool {
        matches!(self, Token::Up | Token::Cross)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_round_trip() {
        for t in Token::ALL {
            assert_eq!(Token::from_letter(t.letter()), Some(t));
        }
        let letters: String = Token::ALL.iter().map(|t| t.letter()).collect();
        assert_eq!(letters, "CLUX");
        assert_eq!(Token::from_letter('c'), None);
    }

    #[test]
    fn serde_uses_letters() {
        let json = serde_json::to_string(&[Token::Anchor, Token::Cross]).unwrap();
        assert_eq!(json, r#"["C","X"]"#);
    }
}
