//! Checks shared by the focused suites and the acceptance target.
//!
//! Each returns `Err` with a short reason on the first violation.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use folkzoo::extraction::{extract_mentions, ExtractionOptions};
use folkzoo::lexicon::{
    default_aliases, default_exclusions, load_lexicon_tsv, load_wordnet_nouns, Lexicon,
    LexiconError,
};
use folkzoo::motif_stats::{
    animal_motif_matrix, category_motif_matrix, center_columns, to_relative, MotifMatrix, MotifUnit,
};
use folkzoo::{parse_corpus, AtuId, Corpus};

use super::{fixture, fixtures_dir, gen};

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

pub fn fixture_lexicon() -> Lexicon {
    Lexicon::new(load_lexicon_tsv(&fixture("lexicon.tsv")).unwrap(), "animal")
        .unwrap()
        .with_aliases(default_aliases())
        .unwrap()
        .with_exclusions(default_exclusions())
        .unwrap()
}

pub fn wordnet_fixture() -> (String, String) {
    let dir = fixtures_dir().join("wordnet");
    let read = |n: &str| std::fs::read_to_string(dir.join(n)).unwrap();
    (read("index.noun"), read("data.noun"))
}

fn corpus(text: &str) -> Corpus {
    parse_corpus(text).unwrap().corpus
}

pub fn lexicon_cycle_rejected() -> Result<(), String> {
    let tsv = "animal\tanimal.n.01\t-\nfox\tfox.n.01\tcanine.n.01\ncanine\tcanine.n.01\tfox.n.01\n";
    ensure!(
        matches!(load_lexicon_tsv(tsv), Err(LexiconError::Cycle(_))),
        "TSV cycle accepted"
    );
    // Point organism at animal: same byte length, so offsets stay valid.
    let (index, data) = wordnet_fixture();
    let data = data.replacen(
        "01 organism 0 001 @ 00000150",
        "01 organism 0 001 @ 00000274",
        1,
    );
    ensure!(
        matches!(
            load_wordnet_nouns(&index, &data),
            Err(LexiconError::Cycle(_))
        ),
        "WordNet cycle accepted"
    );
    Ok(())
}

pub fn lexicon_named_cases() -> Result<(), String> {
    let lex = fixture_lexicon();
    ensure!(
        lex.canonicalize("rooster").ok().as_deref() == Some("chicken"),
        "rooster canonicalized to {:?}",
        lex.canonicalize("rooster").ok()
    );
    ensure!(!lex.is_animal("fly"), "fly classified as an animal");
    ensure!(lex.canonicalize("fly").is_err(), "fly canonicalized");

    let c = corpus(
        "ATU 15 \u{2014} Barnyard\nThe rooster and the hen quarrel.\n\n\
         ATU 16 \u{2014} Buzzing\nA fly buzzes.\n",
    );
    let table = extract_mentions(&c, &lex, &ExtractionOptions::default());
    let sets = &table.per_tale_sets;
    let empty = BTreeSet::new();
    let barnyard = sets.get(&AtuId::new(15).unwrap()).unwrap_or(&empty);
    ensure!(
        barnyard.iter().eq(["chicken"].iter()),
        "rooster and hen gave {barnyard:?}"
    );
    let insect = sets.get(&AtuId::new(16).unwrap()).unwrap_or(&empty);
    ensure!(insect.is_empty(), "excluded fly gave {insect:?}");
    ensure!(
        table.mentions.iter().all(|m| m.lemma != "fly"),
        "fly mention survived"
    );
    Ok(())
}

pub fn lexicon_rollup_woodpecker() -> Result<(), String> {
    let lex = Lexicon::new(load_lexicon_tsv(&fixture("lexicon.tsv")).unwrap(), "animal")
        .unwrap()
        .with_rollup_targets(["bird".to_string()].into())
        .with_min_count(5);
    let counts: BTreeMap<String, u64> =
        [("woodpecker".to_string(), 2), ("bird".to_string(), 12)].into();
    let got = lex.apply_rollup(&counts);
    let want: BTreeMap<String, String> = [
        ("bird".to_string(), "bird".to_string()),
        ("woodpecker".to_string(), "bird".to_string()),
    ]
    .into();
    ensure!(got == want, "rollup gave {got:?}");
    Ok(())
}

pub fn lexicon_criterion() -> Result<(), String> {
    lexicon_cycle_rejected()?;
    lexicon_named_cases()?;
    lexicon_rollup_woodpecker()
}

/// Appends random motif tags to every description line of a rendered small corpus.
pub fn with_motifs(text: &str, seed: u64) -> String {
    let mut rng = StdRng::seed_from_u64(seed);
    let letters = ['A', 'B', 'J', 'K', 'N', 'W', 'Z'];
    text.lines()
        .map(|line| {
            if line.is_empty() || line.starts_with("ATU ") {
                return line.to_string();
            }
            let mut l = line.to_string();
            for _ in 0..rng.gen_range(0..4) {
                let letter = letters[rng.gen_range(0..letters.len())];
                l.push_str(&format!(" ({letter}{})", rng.gen_range(0..2000)));
            }
            l
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Splits the records of a catalogue into two catalogues by a seeded coin.
pub fn split_records(text: &str, seed: u64) -> (String, String) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for record in text.split("\n\n").filter(|r| !r.trim().is_empty()) {
        if rng.gen_bool(0.5) {
            a.push(record);
        } else {
            b.push(record);
        }
    }
    (a.join("\n\n"), b.join("\n\n"))
}

fn check_relative_and_centered(m: &MotifMatrix<f64>) -> Result<(), String> {
    let rel = to_relative(m).map_err(|e| e.to_string())?;
    for (label, (raw, sum)) in m
        .row_labels
        .iter()
        .zip(m.row_sums().into_iter().zip(rel.row_sums()))
    {
        if raw > 0.0 {
            ensure!((sum - 1.0).abs() <= 1e-12, "row {label} sums to {sum}");
        } else {
            ensure!(sum == 0.0, "zero row {label} sums to {sum}");
        }
    }
    let centered = center_columns(&rel).map_err(|e| e.to_string())?;
    for (c, s) in centered.column_sums().into_iter().enumerate() {
        ensure!(s.abs() <= 1e-9, "centered column {c} sums to {s}");
    }
    Ok(())
}

/// One random corpus: relative rows, centered columns and additivity over a split.
pub fn motif_case(seed: u64) -> Result<(), String> {
    let lex = super::small_lexicon();
    let opts = ExtractionOptions::default();
    let text = with_motifs(
        &gen::render_small_corpus(&gen::random_small_corpus(seed)),
        seed,
    );
    let (left, right) = split_records(&text, seed ^ 0x9e37_79b9);
    let whole = corpus(&text);
    let parts = [corpus(&left), corpus(&right)];
    ensure!(
        whole.analyzable_count() == parts[0].analyzable_count() + parts[1].analyzable_count(),
        "split lost tales"
    );

    let whole_table = extract_mentions(&whole, &lex, &opts);
    let freqs: BTreeMap<String, u64> = gen::ANIMALS.iter().map(|a| (a.to_string(), 1)).collect();
    for unit in [MotifUnit::Occurrences, MotifUnit::PerTale] {
        let cat: MotifMatrix<f64> = category_motif_matrix(&whole, unit);
        let animal: MotifMatrix<f64> = animal_motif_matrix(&whole, &whole_table, &freqs, 0, unit);
        check_relative_and_centered(&cat)?;
        if animal.nrows() > 0 {
            check_relative_and_centered(&animal)?;
        }

        let cat_sum = category_motif_matrix::<f64>(&parts[0], unit)
            .add(&category_motif_matrix(&parts[1], unit))
            .ok_or("category matrices not addable")?;
        ensure!(cat_sum == cat, "category counts not additive");

        let animal_parts: Vec<MotifMatrix<f64>> = parts
            .iter()
            .map(|p| animal_motif_matrix(p, &extract_mentions(p, &lex, &opts), &freqs, 0, unit))
            .collect();
        let animal_sum = animal_parts[0]
            .add(&animal_parts[1])
            .ok_or("animal matrices not addable")?;
        ensure!(animal_sum == animal, "animal counts not additive");
    }
    Ok(())
}

pub fn motif_criterion(cases: u64) -> Result<(), String> {
    for seed in 0..cases {
        motif_case(seed).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(())
}

pub fn golden_dir() -> std::path::PathBuf {
    fixtures_dir().join("golden")
}

/// Runs the CLI and returns (exit code, stdout, stderr).
pub fn folkzoo(args: &[&std::ffi::OsStr]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_folkzoo"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .expect("spawn folkzoo");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// `run` on the fixture configuration into `out`.
pub fn fixture_run(out: &std::path::Path) -> Result<(), String> {
    let conf = fixtures_dir().join("pipeline.conf");
    let (code, _, stderr) = folkzoo(&[
        "run".as_ref(),
        "-c".as_ref(),
        conf.as_os_str(),
        "--output-dir".as_ref(),
        out.as_os_str(),
    ]);
    ensure!(code == 0, "run exited {code}: {stderr}");
    Ok(())
}

/// Drops the one dated manifest field.
pub fn without_timestamp(bytes: &[u8]) -> Vec<u8> {
    String::from_utf8_lossy(bytes)
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"generated_at\""))
        .collect::<Vec<_>>()
        .join("\n")
        .into_bytes()
}

fn file_names(dir: &std::path::Path) -> BTreeSet<String> {
    std::fs::read_dir(dir)
        .map(|it| {
            it.filter_map(Result::ok)
                .map(|e| e.file_name().to_string_lossy().into_owned())
                .collect()
        })
        .unwrap_or_default()
}

/// Byte comparison of two artifact directories, timestamps excluded.
pub fn compare_dirs(expected: &std::path::Path, actual: &std::path::Path) -> Result<(), String> {
    let (want, got) = (file_names(expected), file_names(actual));
    ensure!(
        want == got,
        "file sets differ: expected {want:?}, got {got:?}"
    );
    for name in &want {
        let read = |d: &std::path::Path| std::fs::read(d.join(name)).unwrap();
        let (a, b) = (read(expected), read(actual));
        let same = if name == "run_manifest.json" {
            without_timestamp(&a) == without_timestamp(&b)
        } else {
            a == b
        };
        ensure!(same, "{name} differs from {}", expected.display());
    }
    Ok(())
}

/// `run` on the fixture corpus against the committed golden directory.
/// With `UPDATE_GOLDEN=1` the golden directory is rewritten first.
pub fn golden_run(scratch: &std::path::Path) -> Result<(), String> {
    let out = scratch.join("golden-run");
    fixture_run(&out)?;
    if std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1") {
        let golden = golden_dir();
        let _ = std::fs::remove_dir_all(&golden);
        std::fs::create_dir_all(&golden).unwrap();
        for name in file_names(&out) {
            std::fs::copy(out.join(&name), golden.join(&name)).unwrap();
        }
    }
    compare_dirs(&golden_dir(), &out)
}
