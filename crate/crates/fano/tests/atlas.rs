use std::sync::OnceLock;

use proptest::prelude::*;

use fanoatlas::atlas::{
    dedup_and_id, enumerate, evaluate_all, parse_seed, run_batch, AtlasStore, SearchConfig, DUPLICATE_FLAG,
};
use fanoatlas::error::FanoError;
use fanoatlas::fanovariants::{evaluate, FanoRecord};
use flagcalc::dsl::{parse_spec, SpecAst};

const SEED: &str = "\
# small seed
P(5) ; O(3) ; 1-55-243-2
G(2,5) ; O(1) + O(2) ; 1-39-160-2
P(1) x P(5) ; O(0,3) + O(1,1) ; 2-36-144-2
P(2) x P(4) ; O(1,1) + O(1,2) ; 2-39-160-2-A
P(1) x G(2,4) ; O(1,2) ; 2-39-160-2-B
P(1) x P(1) x P(3) ; O(1,1,2)
P(1) x P(5) ; O(0,3) + O(1,2) ; 2-12-27-2
";

fn records() -> &'static Vec<FanoRecord> {
    static R: OnceLock<Vec<FanoRecord>> = OnceLock::new();
    R.get_or_init(|| {
        let specs: Vec<SpecAst> = parse_seed(SEED).unwrap().into_iter().map(|r| r.spec).collect();
        run_batch(&specs).store.records
    })
}

#[test]
fn seed_parse_round_trip() {
    let rows = parse_seed(SEED).unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0].line, 2);
    assert_eq!(rows[5].expected_id, None);
    let text: String = rows
        .iter()
        .map(|r| format!("{} ; {}\n", r.spec, r.expected_id.clone().unwrap_or_default()))
        .collect();
    let again = parse_seed(&text).unwrap();
    for (a, b) in rows.iter().zip(&again) {
        assert_eq!(a.spec.to_string(), b.spec.to_string());
        assert_eq!(a.expected_id, b.expected_id);
    }
}

#[test]
fn seed_errors_carry_line_numbers() {
    match parse_seed("P(5) ; O(3)\nP(5) ; O(3\n") {
        Err(FanoError::Seed { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_seed("P(5)\n"), Err(FanoError::Config { line: 1, .. })));
}

#[test]
fn ids_and_duplicate_flags() {
    let store = AtlasStore { records: records().clone() };
    let ids: Vec<&str> = store.records.iter().map(|r| r.id.as_str()).collect();
    for id in ["1-55-243-2", "1-39-160-2", "2-36-144-2", "2-39-160-2-A", "2-39-160-2-B", "3-39-160-2", "2-12-27-2"] {
        assert!(ids.contains(&id), "{id} missing from {ids:?}");
    }
    let pair = store.by_key(2, 39, 160, 2);
    assert_eq!(pair.len(), 2);
    assert!(pair.iter().all(|r| r.flags.iter().any(|f| f == DUPLICATE_FLAG)));
    assert!(store.get("1-55-243-2").unwrap().flags.iter().all(|f| f != DUPLICATE_FLAG));
    let (fk3, rest) = store.split_fk3();
    assert_eq!((fk3.len(), rest.len()), (6, 1));
}

#[test]
fn json_and_ndjson_round_trip() {
    let store = AtlasStore { records: records().clone() };
    assert_eq!(AtlasStore::from_json(&store.to_json().unwrap()).unwrap(), store);
    let mut buf = Vec::new();
    store.write_ndjson(&mut buf).unwrap();
    assert_eq!(String::from_utf8_lossy(&buf).lines().count(), store.len());
    assert_eq!(AtlasStore::read_ndjson(&buf[..]).unwrap(), store.records);
}

#[test]
fn csv_output() {
    let mut buf = Vec::new();
    AtlasStore::default().write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "id,rho,h22,h12,h0mK,K4,minus_chiT,ambient,bundle,annotations\n");

    let store = AtlasStore { records: records().clone() };
    let mut buf = Vec::new();
    store.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), store.len() + 1);
    assert!(text.lines().any(|l| l.starts_with("1-55-243-2,1,21,0,55,243,20,P(5),O(3),")), "{text}");
}

#[test]
fn parallel_matches_sequential() {
    let specs: Vec<SpecAst> = parse_seed(SEED).unwrap().into_iter().map(|r| r.spec).collect();
    let par = evaluate_all(&specs);
    for (s, p) in specs.iter().zip(par) {
        let p = p.unwrap();
        let q = evaluate(s).unwrap();
        assert_eq!((p.h0_minus_k, p.k_pow, p.chi_t, p.euler, &p.hodge), (q.h0_minus_k, q.k_pow, q.chi_t, q.euler, &q.hodge));
    }
}

#[test]
fn hodge_and_serre_symmetry() {
    for r in records() {
        let n = r.hodge.dim;
        assert!(r.hodge.symmetric(), "{}", r.id);
        for p in 0..=n {
            for q in 0..=n {
                assert_eq!(r.hodge.get(p, q), r.hodge.get(q, p), "{}", r.id);
                assert_eq!(r.hodge.get(p, q), r.hodge.get(n - p, n - q), "{}", r.id);
            }
        }
        assert_eq!(r.h(0, 0), Some(1));
        assert_eq!(r.hodge.euler(), Some(r.euler), "{}", r.id);
    }
}

#[test]
fn enumeration_is_deterministic_and_well_formed() {
    let cfg = SearchConfig { max_factors: 2, max_n: 6, max_ambient_dim: 7, ..SearchConfig::default() };
    let a = enumerate(&cfg);
    assert_eq!(a, enumerate(&cfg));
    assert!(!a.is_empty());
    for s in &a {
        let rank = s.expr().unwrap().rank(&s.ambient);
        assert_eq!(s.ambient.dim() as i64 - rank, cfg.target_dim as i64, "{s}");
        assert!(s.bundle.summands().len() <= cfg.max_summands, "{s}");
    }
    assert!(a.iter().any(|s| s.to_string() == parse_spec("P(5) ; O(3)").unwrap().to_string()));
}

#[test]
fn search_rejects_bad_config() {
    assert!(SearchConfig::parse("max_factors = 0").is_err());
    assert!(SearchConfig::parse("colour = blue").is_err());
    assert!(SearchConfig::parse("max_twist = two").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dedup_is_idempotent_and_order_free(perm in Just(records().clone()).prop_shuffle(), extra in 0usize..3) {
        let mut input = perm;
        // repeated presentations collapse
        for i in 0..extra.min(input.len()) {
            input.push(input[i].clone());
        }
        let once = dedup_and_id(input);
        prop_assert_eq!(&dedup_and_id(once.records.clone()), &once);
        prop_assert_eq!(&once, &dedup_and_id(records().clone()));
    }
}
