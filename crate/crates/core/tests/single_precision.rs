mod common;

use folkzoo::motif_stats::{category_motif_matrix, to_relative, MotifUnit};
use folkzoo::pca::{biplot_coordinates, pca_with, PcaOptions};
use folkzoo::{parse_corpus, Biplot32, MotifMatrix32, MotifMatrix64, PcaResult32, PcaResult64};

#[test]
fn f32_pipeline_tracks_f64() {
    let corpus = parse_corpus(&common::fixture("corpus.txt")).unwrap().corpus;
    let m32: MotifMatrix32 =
        to_relative(&category_motif_matrix(&corpus, MotifUnit::Occurrences)).unwrap();
    let m64: MotifMatrix64 =
        to_relative(&category_motif_matrix(&corpus, MotifUnit::Occurrences)).unwrap();
    let opts = PcaOptions::default();
    let r32: PcaResult32 = pca_with(&m32, &opts).unwrap();
    let r64: PcaResult64 = pca_with(&m64, &opts).unwrap();
    for (a, b) in r32.cumulative_ratio.iter().zip(&r64.cumulative_ratio) {
        assert!((f64::from(*a) - b).abs() < 1e-5, "{a} vs {b}");
    }
    for (a, b) in r32.singular_values.iter().zip(&r64.singular_values) {
        assert!((f64::from(*a) - b).abs() < 1e-5, "{a} vs {b}");
    }
    let b: Biplot32 = biplot_coordinates(&r32, None).unwrap();
    assert_eq!(b.points.len(), 5);
}
