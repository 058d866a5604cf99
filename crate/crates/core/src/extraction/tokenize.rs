//! Word tokenizer with parenthesis depth and plural normalization.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TokenKind {
    Word,
    /// `(`
    Open,
    /// `)`
    Close,
    /// `,` `;` `/`
    Separator,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Lowercased and singularized for words; the character for punctuation.
    pub text: String,
    /// Parenthesis nesting depth. `(` and `)` carry the depth outside the group.
    pub depth: u32,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

const IRREGULAR_PLURALS: &[(&str, &str)] = &[
    ("mice", "mouse"),
    ("lice", "louse"),
    ("geese", "goose"),
    ("teeth", "tooth"),
    ("feet", "foot"),
    ("oxen", "ox"),
    ("children", "child"),
    ("men", "man"),
    ("women", "woman"),
    ("wolves", "wolf"),
    ("calves", "calf"),
    ("halves", "half"),
    ("leaves", "leaf"),
    ("loaves", "loaf"),
    ("knives", "knife"),
    ("wives", "wife"),
    ("lives", "life"),
    ("elves", "elf"),
    ("thieves", "thief"),
    ("hooves", "hoof"),
    ("mosquitoes", "mosquito"),
    ("buffaloes", "buffalo"),
];

/// Words ending in `s` that are not plurals (or whose singular would be misread).
const NOT_PLURAL: &[&str] = &[
    "does",
    "goes",
    "this",
    "thus",
    "always",
    "perhaps",
    "unless",
    "news",
    "series",
    "species",
    "besides",
    "sometimes",
    "afterwards",
    "towards",
    "whereas",
    "yes",
    "bus",
    "gas",
    "plus",
    "whereupon",
    "means",
];

/// Singularizes a lowercase word: irregulars table, then `-ies`→`y`,
/// sibilant `-es`, then plain `-s`.
pub fn singularize(word: &str) -> String {
    if let Some((_, singular)) = IRREGULAR_PLURALS.iter().find(|(p, _)| *p == word) {
        return (*singular).to_string();
    }
    if word.chars().count() <= 3 || NOT_PLURAL.contains(&word) {
        return word.to_string();
    }
    if let Some(stem) = word.strip_suffix("ies") {
        if stem.chars().count() >= 2 {
            return format!("{stem}y");
        }
    }
    for sibilant in ["sses", "xes", "ches", "shes", "zes"] {
        if word.ends_with(sibilant) {
            return word[..word.len() - 2].to_string();
        }
    }
    if word.ends_with("ss") || word.ends_with("us") || word.ends_with("is") {
        return word.to_string();
    }
    match word.strip_suffix('s') {
        Some(stem) => stem.to_string(),
        None => word.to_string(),
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn normalize_word(raw: &str) -> String {
    let lower = raw.to_lowercase();
    let trimmed = lower
        .strip_suffix("'s")
        .or_else(|| lower.strip_suffix("\u{2019}s"))
        .unwrap_or(&lower);
    singularize(trimmed)
}

/// Splits text into lowercase word tokens and punctuation tokens.
///
/// Apostrophes are kept only between alphanumerics, and a possessive `'s`
/// is dropped before singularization.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut depth: u32 = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_alphanumeric() {
            let start = i;
            i += 1;
            while i < chars.len() {
                if chars[i].is_alphanumeric() {
                    i += 1;
                } else if is_apostrophe(chars[i])
                    && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
                {
                    i += 2;
                } else {
                    break;
                }
            }
            let raw: String = chars[start..i].iter().collect();
            tokens.push(Token {
                kind: TokenKind::Word,
                text: normalize_word(&raw),
                depth,
            });
            continue;
        }
        i += 1;
        if c.is_whitespace() {
            continue;
        }
        let kind = match c {
            '(' => TokenKind::Open,
            ')' => TokenKind::Close,
            ',' | ';' | '/' => TokenKind::Separator,
            _ => TokenKind::Punct,
        };
        if kind == TokenKind::Close {
            depth = depth.saturating_sub(1);
        }
        tokens.push(Token {
            kind,
            text: c.to_string(),
            depth,
        });
        if kind == TokenKind::Open {
            depth += 1;
        }
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(text: &str) -> Vec<(String, u32)> {
        tokenize(text)
            .into_iter()
            .filter(Token::is_word)
            .map(|t| (t.text, t.depth))
            .collect()
    }

    #[test]
    fn parenthetical_depth() {
        let got = words("The fox (jackal) plays dead.");
        let expected: Vec<(String, u32)> = [
            ("the", 0),
            ("fox", 0),
            ("jackal", 1),
            ("play", 0),
            ("dead", 0),
        ]
        .iter()
        .map(|(w, d)| (w.to_string(), *d))
        .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn punctuation_tokens_carry_outer_depth() {
        let tokens = tokenize("a (b (c), d) e");
        let shown: Vec<(String, u32)> = tokens.iter().map(|t| (t.text.clone(), t.depth)).collect();
        let expected = [
            ("a", 0),
            ("(", 0),
            ("b", 1),
            ("(", 1),
            ("c", 2),
            (")", 1),
            (",", 1),
            ("d", 1),
            (")", 0),
            ("e", 0),
        ];
        assert_eq!(shown, expected.map(|(s, d)| (s.to_string(), d)));
        // Stray closer does not underflow.
        assert_eq!(tokenize(") x")[1].depth, 0);
    }

    #[test]
    fn irregular_plurals() {
        assert_eq!(words("mice")[0].0, "mouse");
        assert_eq!(words("Geese")[0].0, "goose");
        assert_eq!(words("oxen")[0].0, "ox");
    }

    #[test]
    fn suffix_rules() {
        let got: Vec<String> = words("wolves and the seven kids")
            .into_iter()
            .map(|w| w.0)
            .collect();
        assert!(got.contains(&"wolf".to_string()));
        assert!(got.contains(&"kid".to_string()));
        for (plural, singular) in [
            ("foxes", "fox"),
            ("flies", "fly"),
            ("horses", "horse"),
            ("monkeys", "monkey"),
            ("asses", "ass"),
            ("finches", "finch"),
            ("walrus", "walrus"),
            ("does", "does"),
            ("cat", "cat"),
            ("was", "was"),
        ] {
            assert_eq!(singularize(plural), singular, "{plural}");
        }
    }

    #[test]
    fn possessives() {
        let got: Vec<String> = words("The fox's tail and the wolves' den, the cat\u{2019}s paw")
            .into_iter()
            .map(|w| w.0)
            .collect();
        assert_eq!(
            got,
            ["the", "fox", "tail", "and", "the", "wolf", "den", "the", "cat", "paw"]
        );
    }

    #[test]
    fn separators_and_hyphens() {
        let kinds: Vec<TokenKind> = tokenize("a, b; c/d-e").iter().map(|t| t.kind).collect();
        use TokenKind::*;
        assert_eq!(
            kinds,
            [Word, Separator, Word, Separator, Word, Separator, Word, Punct, Word]
        );
    }
}
