//! Seeded generators for random catalogues and small animal corpora.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const WORDS: &[&str] = &[
    "the", "old", "miller", "river", "stone", "bread", "sings", "runs", "hides", "under", "bridge",
    "a", "clever", "trick", "falls", "into", "well", "and", "then", "escapes", "village", "night",
    "morning",
];
const MOTIF_LETTERS: &[char] = &[
    'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'J', 'K', 'L', 'M', 'N', 'P', 'Q', 'R', 'S', 'T', 'U',
    'V', 'W', 'X', 'Z',
];
const DASHES: &[&str] = &["\u{2014}", "\u{2013}", "-", "--"];
const SECTIONS: &[&str] = &["Combinations", "Remarks", "Literature"];

fn sentence(rng: &mut StdRng, words: std::ops::Range<usize>) -> String {
    let n = rng.gen_range(words);
    (0..n)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

fn motif(rng: &mut StdRng) -> String {
    let letter = *MOTIF_LETTERS.choose(rng).unwrap();
    let major = rng.gen_range(0..2500);
    match rng.gen_range(0..4) {
        0 => format!("{letter}{major}.{}", rng.gen_range(1..10)),
        1 => format!("{letter}{major}-{}", major + rng.gen_range(1..50)),
        _ => format!("{letter}{major}"),
    }
}

fn id(rng: &mut StdRng) -> String {
    let mut s = rng.gen_range(1..=299u16).to_string();
    if rng.gen_bool(0.25) {
        s.push((b'A' + rng.gen_range(0..4u8)) as char);
    }
    if rng.gen_bool(0.1) {
        s.push_str(&"*".repeat(rng.gen_range(1..=2)));
    }
    s
}

/// A syntactically valid catalogue with 1 to 30 records and unique ids.
pub fn random_catalogue(seed: u64) -> String {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(1..=30);
    let mut ids = BTreeSet::new();
    while ids.len() < n {
        ids.insert(id(&mut rng));
    }
    let mut ids: Vec<String> = ids.into_iter().collect();
    ids.shuffle(&mut rng);
    let mut records = Vec::new();
    for id in ids {
        let title = {
            let mut t = sentence(&mut rng, 1..5);
            t[..1].make_ascii_uppercase();
            t
        };
        let dash = *DASHES.choose(&mut rng).unwrap();
        let mut record = format!("ATU {id} {dash} {title}\n");
        match rng.gen_range(0..10) {
            0 => {}
            1 => record.push_str(&format!("See ATU {}.\n", rng.gen_range(1..=299))),
            _ => {
                for _ in 0..rng.gen_range(1..4) {
                    let mut line = sentence(&mut rng, 2..12);
                    for _ in 0..rng.gen_range(0..3) {
                        line.push_str(&format!(" ({})", motif(&mut rng)));
                        line.push(' ');
                        line.push_str(&sentence(&mut rng, 1..4));
                    }
                    line.push('.');
                    record.push_str(&line);
                    record.push('\n');
                }
            }
        }
        for label in SECTIONS {
            if rng.gen_bool(0.2) {
                record.push_str(&format!("{label}: {}.\n", sentence(&mut rng, 1..6)));
            }
        }
        records.push(record);
    }
    records.join("\n")
}

pub const ANIMALS: &[&str] = &["fox", "wolf", "bear", "goose", "crow", "hare"];

/// One animal mention, optionally followed by a parenthesised list of substitutes.
#[derive(Debug, Clone)]
pub struct Item {
    pub animal: &'static str,
    pub substitutes: Vec<&'static str>,
}

#[derive(Debug, Clone)]
pub struct SmallTale {
    pub number: u16,
    pub items: Vec<Item>,
}

/// Up to 10 tales over at most 6 animals, with random substitution groups.
pub fn random_small_corpus(seed: u64) -> Vec<SmallTale> {
    let mut rng = StdRng::seed_from_u64(seed);
    let pool: Vec<&'static str> = {
        let mut p = ANIMALS.to_vec();
        p.shuffle(&mut rng);
        p.truncate(rng.gen_range(1..=ANIMALS.len()));
        p
    };
    let mut numbers: Vec<u16> = (1..=299).collect();
    numbers.shuffle(&mut rng);
    (0..rng.gen_range(0..=10))
        .map(|i| SmallTale {
            number: numbers[i],
            items: (0..rng.gen_range(0..6))
                .map(|_| Item {
                    animal: pool.choose(&mut rng).unwrap(),
                    substitutes: if rng.gen_bool(0.3) {
                        (0..rng.gen_range(1..3))
                            .map(|_| *pool.choose(&mut rng).unwrap())
                            .collect()
                    } else {
                        Vec::new()
                    },
                })
                .collect(),
        })
        .collect()
}

pub fn render_small_corpus(tales: &[SmallTale]) -> String {
    let mut out = Vec::new();
    for (k, tale) in tales.iter().enumerate() {
        let mut text = format!("ATU {} \u{2014} Story number {k}\n", tale.number);
        let sentences: Vec<String> = tale
            .items
            .iter()
            .enumerate()
            .map(|(j, item)| {
                let subs = if item.substitutes.is_empty() {
                    String::new()
                } else {
                    let sep = if j % 2 == 0 { ", " } else { " or " };
                    format!(" ({})", item.substitutes.join(sep))
                };
                format!("Then the {}{subs} runs into the village.", item.animal)
            })
            .collect();
        if sentences.is_empty() {
            text.push_str("Nothing happens here.\n");
        } else {
            text.push_str(&sentences.join(" "));
            text.push('\n');
        }
        out.push(text);
    }
    out.join("\n")
}

pub fn small_lexicon_tsv() -> String {
    let mut s = String::from("animal\tanimal.n.01\t-\n");
    for a in ANIMALS {
        s.push_str(&format!("{a}\t{a}.n.01\tanimal.n.01\n"));
    }
    s
}

fn pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

/// Naive co-occurrence straight from the generated structure.
///
/// Set mode: one per tale containing both animals, minus one per tale in which
/// the pair is written as a substitution. Multiset mode: product of mention
/// counts, minus every written substitution.
pub fn naive_cooccurrence(tales: &[SmallTale], multiset: bool) -> BTreeMap<(String, String), i64> {
    let mut weights: BTreeMap<(String, String), i64> = BTreeMap::new();
    for tale in tales {
        let mut counts: BTreeMap<&str, i64> = BTreeMap::new();
        for item in &tale.items {
            *counts.entry(item.animal).or_default() += 1;
            for s in &item.substitutes {
                *counts.entry(s).or_default() += 1;
            }
        }
        let names: Vec<&str> = counts.keys().copied().collect();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                let add = if multiset {
                    counts[names[i]] * counts[names[j]]
                } else {
                    1
                };
                *weights.entry(pair(names[i], names[j])).or_default() += add;
            }
        }
        let mut subs: Vec<(String, String)> = Vec::new();
        for item in &tale.items {
            for s in &item.substitutes {
                if *s != item.animal {
                    subs.push(pair(item.animal, s));
                }
            }
        }
        if !multiset {
            subs.sort();
            subs.dedup();
        }
        for p in subs {
            *weights.get_mut(&p).expect("substituted pair co-occurs") -= 1;
        }
    }
    weights
}
