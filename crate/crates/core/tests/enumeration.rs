mod common;

use flatgap::corpus::{corpus_get, corpus_list};
use flatgap::saddle::{
    enumerate_cached, enumerate_holonomies, enumerate_with, replay_witness, EnumConfig, SaddleError,
};
use flatgap::surface::Mat2;

use common::primitive_vectors;

fn integer_vectors(set: &flatgap::saddle::HolonomySet) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = set
        .vectors
        .iter()
        .map(|h| {
            assert_eq!(h.v.x.fract(), 0.0);
            assert_eq!(h.v.y.fract(), 0.0);
            (h.v.x as i64, h.v.y as i64)
        })
        .collect();
    v.sort_unstable();
    v
}

#[test]
fn torus_matches_primitive_vectors() {
    let torus = corpus_get("torus").unwrap();
    for r in [1.0, 1.5, 3.0, 7.3, 12.0] {
        assert_eq!(integer_vectors(&enumerate_holonomies(&torus, r).unwrap()), primitive_vectors(r), "R = {r}");
    }
}

#[test]
fn unimodular_images_of_the_torus_have_the_same_holonomy() {
    let torus = corpus_get("torus").unwrap();
    for m in [Mat2::from_ints(2, 1, 1, 1), Mat2::from_ints(1, 3, 0, 1), Mat2::from_ints(0, -1, 1, 0)] {
        let image = torus.apply_matrix(&m).unwrap();
        assert_eq!(integer_vectors(&enumerate_holonomies(&image, 9.0).unwrap()), primitive_vectors(9.0));
    }
}

/// On a surface tiled by unit squares whose every corner is a polygon
/// vertex, saddle connections are exactly the primitive integer vectors,
/// each repeated once per full turn of total cone angle.
#[test]
fn square_tiled_surfaces_repeat_primitive_vectors() {
    for name in ["l_2_2", "stsurf_3"] {
        let s = corpus_get(name).unwrap();
        let turns: f64 = s.cone_points().iter().map(|c| c.angle).sum::<f64>() / std::f64::consts::TAU;
        let turns = turns.round() as usize;
        assert_eq!(turns, 3, "{name}");
        let got = integer_vectors(&enumerate_holonomies(&s, 11.0).unwrap());
        let want: Vec<(i64, i64)> =
            primitive_vectors(11.0).into_iter().flat_map(|v| std::iter::repeat_n(v, turns)).collect();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn every_witness_replays() {
    for name in corpus_list() {
        let s = corpus_get(name).unwrap();
        let set = enumerate_holonomies(&s, 5.0).unwrap();
        assert!(!set.is_empty());
        assert!(set.is_symmetric(), "{name}");
        for h in &set.vectors {
            let v = replay_witness(&s, h).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!((v - h.v).norm() < 1e-9);
        }
    }
}

#[test]
fn quarter_turn_rotates_the_holonomy() {
    let s = corpus_get("golden_l").unwrap();
    let turned = s.apply_matrix(&Mat2::quarter_turns(1)).unwrap();
    let key = |x: f64, y: f64| ((x * 1e9).round() as i64, (y * 1e9).round() as i64);
    let mut a: Vec<_> = enumerate_holonomies(&s, 8.0).unwrap().vectors.iter().map(|h| key(-h.v.y, h.v.x)).collect();
    let mut b: Vec<_> = enumerate_holonomies(&turned, 8.0).unwrap().vectors.iter().map(|h| key(h.v.x, h.v.y)).collect();
    a.sort_unstable();
    b.sort_unstable();
    assert_eq!(a, b);
}

#[test]
fn serial_and_parallel_runs_agree() {
    let s = corpus_get("octagon").unwrap();
    let par = enumerate_with(&s, 15.0, &EnumConfig { keep_witnesses: false, ..EnumConfig::default() }).unwrap();
    let ser = enumerate_with(&s, 15.0, &EnumConfig { keep_witnesses: false, parallel: false, ..EnumConfig::default() }).unwrap();
    assert_eq!(par.to_csv(), ser.to_csv());
}

#[test]
fn budget_and_radius_errors() {
    let s = corpus_get("octagon").unwrap();
    let tight = EnumConfig { node_budget: 50, ..EnumConfig::default() };
    assert!(matches!(enumerate_with(&s, 20.0, &tight), Err(SaddleError::BudgetExceeded { limit: 50 })));
    assert!(matches!(enumerate_holonomies(&s, 0.0), Err(SaddleError::InvalidRadius(_))));
    assert!(matches!(enumerate_holonomies(&s, f64::NAN), Err(SaddleError::InvalidRadius(_))));
}

#[test]
fn cache_round_trip_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let s = corpus_get("l_2_2").unwrap();
    let cfg = EnumConfig::default();
    let fresh = enumerate_with(&s, 6.0, &cfg).unwrap();
    let first = enumerate_cached(&s, 6.0, &cfg, Some(dir.path())).unwrap();
    let second = enumerate_cached(&s, 6.0, &cfg, Some(dir.path())).unwrap();
    assert_eq!(fresh.to_csv(), first.to_csv());
    assert_eq!(first.to_csv(), second.to_csv());
    // a corrupted entry is recomputed, not trusted
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), b"garbage").unwrap();
    }
    assert_eq!(enumerate_cached(&s, 6.0, &cfg, Some(dir.path())).unwrap().to_csv(), fresh.to_csv());
}
