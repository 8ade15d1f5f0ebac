use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relqh_core::rational::{int, Rational};
use relqh_core::store::{canonical_key, KeyConstraints};
use relqh_core::{AbsClass, Error, Insertion, Provenance, Space, Store};

const PROVS: [Provenance; 6] = [
    Provenance::Axiom,
    Provenance::Seed,
    Provenance::Wdvv,
    Provenance::Owdvv,
    Provenance::WallCrossing,
    Provenance::OpenClosed,
];

fn random_record(rng: &mut ChaCha8Rng) -> (String, Rational, Provenance) {
    let n = [3, 5, 7][rng.gen_range(0..3)];
    let space = Space::quadric(n).unwrap();
    let len = rng.gen_range(0..6);
    let key = if rng.gen_bool(0.5) {
        let cs: Vec<AbsClass> = (0..len).map(|_| AbsClass::HPower(rng.gen_range(0..=n))).collect();
        canonical_key(space, &[rng.gen_range(0..20)], None, KeyConstraints::Closed(&cs), false)
    } else {
        let cs: Vec<Insertion> = (0..len).map(|_| Insertion::g(rng.gen_range(0..=n))).collect();
        let k = Some(rng.gen_range(0..30));
        canonical_key(space, &[rng.gen_range(0..20)], k, KeyConstraints::Open(&cs), rng.gen_bool(0.5))
    }
    .unwrap();
    let num: i64 = rng.gen_range(-1_000_000_000_000..1_000_000_000_000);
    let den: i64 = rng.gen_range(1..1000);
    let big = int(num) * int(num) * int(if rng.gen_bool(0.5) { 1 } else { -1 });
    (key, big / int(den), PROVS[rng.gen_range(0..PROVS.len())])
}

#[test]
fn thousand_random_records_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let store = Store::new();
    let mut expected = std::collections::HashMap::new();
    while expected.len() < 1000 {
        let (k, v, p) = random_record(&mut rng);
        if expected.contains_key(&k) {
            continue;
        }
        store.put(&k, v.clone(), p).unwrap();
        expected.insert(k, (v, p));
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    store.flush(&path).unwrap();
    let back = Store::new();
    let report = back.load(&path).unwrap();
    assert_eq!(report.loaded, 1000);
    assert_eq!(back.records(), store.records());
    for (k, (v, p)) in &expected {
        assert_eq!(back.get_record(k), Some((v.clone(), *p)));
    }
    // Flushing the reloaded store reproduces the file byte for byte.
    let again = dir.path().join("again.jsonl");
    back.flush(&again).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn conflicting_value_is_rejected() {
    let store = Store::new();
    store.put("QO:3|C|1|-|h2,h2,h2|-", int(8), Provenance::Wdvv).unwrap();
    store.put("QO:3|C|1|-|h2,h2,h2|-", int(8), Provenance::Wdvv).unwrap();
    let err = store.put("QO:3|C|1|-|h2,h2,h2|-", int(9), Provenance::Wdvv).unwrap_err();
    assert!(matches!(err, Error::Conflict { .. }));
}

#[test]
fn stale_version_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("old.jsonl");
    std::fs::write(&path, "{\"k\":\"QO:3|C|1|-|h2,h2,h2|-\",\"v\":\"8/1\",\"prov\":\"wdvv\",\"ver\":\"old\"}\n")
        .unwrap();
    let store = Store::new();
    let report = store.load(&path).unwrap();
    assert_eq!((report.loaded, report.stale), (0, 1));
    assert!(store.is_empty());
}
