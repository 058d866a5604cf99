//! Thompson Motif Index codes and the inline-token scanner.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The 23 major divisions of the motif index, in column order.
pub const MOTIF_LETTERS: [char; 23] = [
    'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'J', 'K', 'L', 'M', 'N', 'P', 'Q', 'R', 'S', 'T', 'U',
    'V', 'W', 'X', 'Z',
];

/// One of the 23 motif-index division letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotifLetter(char);

impl MotifLetter {
    pub fn new(c: char) -> Option<Self> {
        MOTIF_LETTERS.contains(&c).then_some(Self(c))
    }

    pub fn all() -> impl Iterator<Item = MotifLetter> {
        MOTIF_LETTERS.iter().map(|&c| MotifLetter(c))
    }

    pub fn as_char(self) -> char {
        self.0
    }

    /// Column position in [`MOTIF_LETTERS`].
    pub fn index(self) -> usize {
        MOTIF_LETTERS
            .iter()
            .position(|&c| c == self.0)
            .expect("constructed from the letter set")
    }
}

impl fmt::Display for MotifLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for MotifLetter {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MotifLetter {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut chars = s.chars();
        match (chars.next().and_then(MotifLetter::new), chars.next()) {
            (Some(l), None) => Ok(l),
            _ => Err(serde::de::Error::custom(format!(
                "invalid motif letter {s:?}"
            ))),
        }
    }
}

/// A motif tag such as `K371.1` or the range `K1700-2099`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MotifCode {
    pub letter: MotifLetter,
    pub major: u32,
    /// Dotted sub-path after the major number, digits kept verbatim (`"1"` for `K371.1`).
    pub sub: Option<String>,
    pub range_end: Option<u32>,
}

impl fmt::Display for MotifCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter, self.major)?;
        if let Some(sub) = &self.sub {
            write!(f, ".{sub}")?;
        }
        if let Some(end) = self.range_end {
            write!(f, "-{end}")?;
        }
        Ok(())
    }
}

impl FromStr for MotifCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let scan = scan_motif_codes(s);
        match (scan.codes.as_slice(), scan.rejected.as_slice()) {
            ([code], []) if code.to_string().len() == s.trim().len() => Ok(code.clone()),
            (_, [rej, ..]) => Err(format!("{}: {}", rej.token, rej.reason)),
            _ => Err(format!("not a single motif code: {s:?}")),
        }
    }
}

impl Serialize for MotifCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MotifCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A motif-like token that was not accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedToken {
    /// Byte offset of the token in the scanned text.
    pub offset: usize,
    pub token: String,
    pub reason: &'static str,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MotifScan {
    pub codes: Vec<MotifCode>,
    pub rejected: Vec<RejectedToken>,
}

/// Extracts every well-formed motif code from `text`, in order, duplicates kept.
pub fn extract_motif_codes(text: &str) -> Vec<MotifCode> {
    scan_motif_codes(text).codes
}

/// Like [`extract_motif_codes`] but also reports near-matches that were skipped.
///
/// Grammar: an uppercase letter at a word start, an integer, an optional dotted
/// sub-path, and an optional range end written `-2099` or ` - J1849`.
pub fn scan_motif_codes(text: &str) -> MotifScan {
    let bytes = text.as_bytes();
    let mut scan = MotifScan::default();
    let mut i = 0;
    while i < bytes.len() {
        let at_word_start = i == 0 || !is_word_byte(bytes[i - 1]);
        if !(at_word_start
            && bytes[i].is_ascii_uppercase()
            && bytes.get(i + 1).is_some_and(u8::is_ascii_digit))
        {
            i += 1;
            continue;
        }
        let (end, result) = scan_token(bytes, i);
        match result {
            Ok(code) => scan.codes.push(code),
            Err(reason) => scan.rejected.push(RejectedToken {
                offset: i,
                token: text[i..end].to_string(),
                reason,
            }),
        }
        i = end.max(i + 1);
    }
    scan
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b >= 0x80
}

fn digits_end(bytes: &[u8], from: usize) -> usize {
    let mut j = from;
    while j < bytes.len() && bytes[j].is_ascii_digit() {
        j += 1;
    }
    j
}

fn parse_number(bytes: &[u8], from: usize, to: usize) -> Option<u32> {
    std::str::from_utf8(&bytes[from..to]).ok()?.parse().ok()
}

/// Returns the length of a dash (`-`, en dash or em dash) starting at `j`.
fn dash_len(bytes: &[u8], j: usize) -> usize {
    match bytes.get(j..) {
        Some([b'-', ..]) => 1,
        Some([0xE2, 0x80, 0x93 | 0x94, ..]) => 3,
        _ => 0,
    }
}

fn skip_spaces(bytes: &[u8], mut j: usize) -> usize {
    while j < bytes.len() && bytes[j] == b' ' {
        j += 1;
    }
    j
}

fn scan_token(bytes: &[u8], start: usize) -> (usize, Result<MotifCode, &'static str>) {
    let letter_byte = bytes[start];
    let major_end = digits_end(bytes, start + 1);
    let Some(major) = parse_number(bytes, start + 1, major_end) else {
        return (major_end, Err("motif number too large"));
    };
    let mut end = major_end;

    let mut sub = None;
    while bytes.get(end) == Some(&b'.') && bytes.get(end + 1).is_some_and(u8::is_ascii_digit) {
        let seg_end = digits_end(bytes, end + 1);
        let seg = std::str::from_utf8(&bytes[end + 1..seg_end]).expect("ascii digits");
        sub = Some(match sub {
            None => seg.to_string(),
            Some(prev) => format!("{prev}.{seg}"),
        });
        end = seg_end;
    }

    let mut range_end = None;
    // Tight form: K1700-2099 or K1700-K2099.
    let dash = dash_len(bytes, end);
    if dash > 0 {
        let mut j = end + dash;
        if bytes.get(j) == Some(&letter_byte) {
            j += 1;
        }
        if bytes.get(j).is_some_and(u8::is_ascii_digit) {
            let r_end = digits_end(bytes, j);
            match parse_number(bytes, j, r_end) {
                Some(v) => range_end = Some(v),
                None => return (r_end, Err("motif range end too large")),
            }
            end = r_end;
            if bytes.get(end) == Some(&b'.') && bytes.get(end + 1).is_some_and(u8::is_ascii_digit) {
                return (digits_end(bytes, end + 1), Err("dotted range end"));
            }
        }
    } else {
        // Spaced form requires the letter to repeat: J1750 - J1849.
        let j = skip_spaces(bytes, end);
        let dash = dash_len(bytes, j);
        if j > end && dash > 0 {
            let k = skip_spaces(bytes, j + dash);
            if bytes.get(k) == Some(&letter_byte)
                && bytes.get(k + 1).is_some_and(u8::is_ascii_digit)
            {
                let r_end = digits_end(bytes, k + 1);
                match parse_number(bytes, k + 1, r_end) {
                    Some(v) => range_end = Some(v),
                    None => return (r_end, Err("motif range end too large")),
                }
                end = r_end;
                if bytes.get(end) == Some(&b'.')
                    && bytes.get(end + 1).is_some_and(u8::is_ascii_digit)
                {
                    return (digits_end(bytes, end + 1), Err("dotted range end"));
                }
            }
        }
    }

    if end < bytes.len() && is_word_byte(bytes[end]) {
        let mut j = end;
        while j < bytes.len() && is_word_byte(bytes[j]) {
            j += 1;
        }
        return (j, Err("trailing characters after motif code"));
    }
    let Some(letter) = MotifLetter::new(char::from(letter_byte)) else {
        return (end, Err("letter outside the motif index divisions"));
    };
    if let Some(r) = range_end {
        if sub.is_some() {
            return (end, Err("range on a dotted motif code"));
        }
        if r < major {
            return (end, Err("range end before range start"));
        }
    }
    (
        end,
        Ok(MotifCode {
            letter,
            major,
            sub,
            range_end,
        }),
    )
}
