//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (visible under `cargo test -- --nocapture`).

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use gdd::algebra::{self, prime_power};
use gdd::blockgen::{self, Segment};
use gdd::catalog::{self, Catalog};
use gdd::constructions::{self, DesignLibrary};
use gdd::design::{expected_block_count, verify_gdd, verify_gdd_limited, Design, GroupType};
use gdd::oracle::{self, Verdict};
use gdd::recipe;
use gdd::search::{self, SearchLimits, SearchOutcome};

fn workspace_catalog() -> Catalog {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog");
    Catalog::open(&dir).expect("catalog directory")
}

/// The mandatory shipped entries: the general designs, the 14^u m^1 and
/// 20^u m^1 families, and the two 38^9 m^1 designs with the product action.
const MANDATORY: [&str; 45] = [
    "4^2_10^5",
    "4^3_10^4",
    "4^4_10^3",
    "4^5_10^2",
    "4^2_10^4_1^1",
    "8^2_2^8",
    "8^3_2^7",
    "8^4_2^6",
    "8^5_2^5",
    "8^6_2^4",
    "8^7_2^3",
    "8^2_2^11",
    "8^3_2^6_5^1",
    "8^5_2^4_5^1",
    "8^7_2^2_5^1",
    "8^5_14^1_20^1",
    "20^4_8^2_2^1",
    "20^4_8^2_5^1",
    "20^5_8^1_5^1",
    "14^6_8^1",
    "14^6_11^1",
    "14^6_17^1",
    "14^6_20^1",
    "14^6_23^1",
    "14^6_26^1",
    "14^6_29^1",
    "14^6_32^1",
    "14^9_11^1",
    "14^9_17^1",
    "14^9_20^1",
    "14^9_23^1",
    "14^9_26^1",
    "14^9_29^1",
    "14^9_32^1",
    "14^9_38^1",
    "14^9_41^1",
    "14^9_44^1",
    "14^9_47^1",
    "14^9_50^1",
    "14^9_53^1",
    "20^9_11^1",
    "20^9_17^1",
    "20^9_23^1",
    "38^9_11^1",
    "38^9_14^1",
];

#[test]
fn criterion_1_catalog_fidelity() {
    let cat = workspace_catalog();
    let names: BTreeSet<&str> = cat.entries.iter().map(|e| e.name.as_str()).collect();
    for want in MANDATORY {
        assert!(names.contains(want), "catalog is missing {want}");
    }
    assert!(cat.len() >= 45);

    let mut slowest = Duration::ZERO;
    for entry in &cat.entries {
        let start = Instant::now();
        let spec = cat.load_spec(&entry.name).unwrap();
        let design = blockgen::expand(&spec).unwrap();
        let report = verify_gdd_limited(&design, 3);
        assert!(report.ok, "{}: {report}", entry.name);
        let want = expected_block_count(&spec.group_type()).unwrap();
        assert_eq!(design.blocks().len(), want, "{}", entry.name);
        let sig = blockgen::check_signature(&spec)
            .unwrap_or_else(|| panic!("{}: no signature", entry.name));
        assert!(sig.matches, "{}: {:?}", entry.name, sig.diffs);
        let elapsed = start.elapsed();
        assert!(
            elapsed < Duration::from_secs(1),
            "{} took {elapsed:?}",
            entry.name
        );
        slowest = slowest.max(elapsed);
    }
    // the spec-pinned counts
    for (name, want) in [
        ("4^5_10^2", 110usize),
        ("14^6_8^1", 602),
        ("38^9_11^1", 9291),
    ] {
        let d = cat.expand(name).unwrap();
        assert_eq!(d.blocks().len(), want, "{name}");
    }
    println!(
        "criterion 1: PASS - {} entries expand, verify and match signatures (slowest {slowest:?})",
        cat.len()
    );
}

/// Redevelop a spec with the step-2 product rule deliberately flipped from
/// "add e(j) twice" to "add element number 2j": the resulting block multiset
/// must no longer verify.
#[test]
fn criterion_2_product_action_semantics() {
    let cat = workspace_catalog();
    for name in ["38^9_11^1", "38^9_14^1"] {
        let d = cat.expand(name).unwrap();
        assert!(verify_gdd_limited(&d, 1).ok, "{name}");
    }

    let spec = cat.load_spec("38^9_11^1").unwrap();
    let flipped_apply = |x: usize, j: usize, segs: &[Segment]| -> usize {
        let seg = segs.iter().find(|s| s.contains(x)).unwrap();
        match seg.prod3 {
            Some(c) if seg.step == 2 => {
                // wrong reading: element number 2j instead of e(j) (+) e(j)
                let local = x - seg.start;
                let (a, b) = (local / 3, local % 3);
                let (da, db) = ((2 * j / 3) % c, (2 * j) % 3);
                seg.start + 3 * ((a + da) % c) + (b + db) % 3
            }
            _ => blockgen::apply_mapping(x, j, std::slice::from_ref(seg)).unwrap(),
        }
    };
    let mut blocks: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut duplicate = false;
    for class in &spec.classes {
        for base in &class.base_blocks {
            for j in 0..class.j_count {
                let mut img: Vec<u32> = base
                    .iter()
                    .map(|&p| flipped_apply(p as usize, j, &class.segments) as u32)
                    .collect();
                img.sort_unstable();
                duplicate |= !blocks.insert(img);
            }
        }
    }
    let broken = duplicate || {
        let design = Design::new(spec.v, spec.groups(), blocks.into_iter().collect()).unwrap();
        !verify_gdd_limited(&design, 1).ok
    };
    assert!(broken, "flipped step-2 rule still verified");
    println!("criterion 2: PASS - product action pinned; the flipped step-2 rule fails");
}

#[test]
fn criterion_3_algebraic_ingredients() {
    let start = Instant::now();
    let qs: Vec<usize> = (2..=32).filter(|&q| prime_power(q).is_some()).collect();
    assert_eq!(qs.len(), 18);
    for &q in &qs {
        let set = algebra::mols(q).unwrap();
        assert_eq!(set.squares.len(), q - 1);
        assert!(set.is_valid(), "MOLS({q})");
        if q >= 3 {
            let td = algebra::transversal_design(4, q).unwrap();
            assert_eq!(td.blocks().len(), q * q);
        }
        for k in 2..=q.min(8) {
            let r = algebra::rgdd(k, q).unwrap();
            assert_eq!(r.resolution().unwrap().len(), q);
        }
    }
    assert!(matches!(
        algebra::transversal_design(4, 2),
        Err(gdd::Error::TooManyGroups { .. })
    ));
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "{elapsed:?}");
    println!("criterion 3: PASS - MOLS/TD/RGDD verified for all prime powers <= 32 in {elapsed:?}");
}

#[test]
fn criterion_4_pipeline_uniform_inflation() {
    let start = Instant::now();
    let mut lib = DesignLibrary::new();
    let three_five = lib.get(&GroupType::parse("3^5").unwrap()).unwrap();
    let nine = constructions::inflate_uniform(&three_five, 3, &mut lib).unwrap();
    assert_eq!(nine.group_type().to_string(), "9^5");
    assert_eq!(nine.blocks().len(), 135);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "{elapsed:?}");
    println!("criterion 4: PASS - 3^5 inflated by 3 to a verified 9^5 (135 blocks) in {elapsed:?}");
}

#[test]
fn criterion_5_pipeline_weighted_inflation() {
    let start = Instant::now();
    let mut lib = DesignLibrary::new();
    let master = algebra::transversal_design(5, 5).unwrap();
    let out = constructions::wfc_inflate(&master, &[3; 25], &mut lib).unwrap();
    assert_eq!(out.group_type().to_string(), "15^5");
    assert_eq!(out.blocks().len(), 375);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "{elapsed:?}");
    println!("criterion 5: PASS - weighted inflation of 5^5 gave a verified 15^5 (375 blocks) in {elapsed:?}");
}

#[test]
fn criterion_6_pipeline_hole_filling() {
    let start = Instant::now();
    let text = "(fill_holes (wfc_inflate_dgdd (td 4 3) h=1 u=4 \
                 (remove_parallel_class (rgdd 4 4) 0)) m=3 fill=(search 3^4_3^1))";
    let mut lib = DesignLibrary::new();
    let built = recipe::run(&recipe::parse(text).unwrap(), &mut lib).unwrap();
    assert_eq!(built.design.group_type().to_string(), "12^4 3^1");
    assert_eq!(built.design.blocks().len(), 168);
    assert!(verify_gdd(&built.design).ok);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "{elapsed:?}");
    println!("criterion 6: PASS - DGDD pipeline produced a verified 12^4 3^1 (168 blocks) in {elapsed:?}");
}

#[test]
fn criterion_7_search_refutation_and_discovery() {
    let limits = SearchLimits::default();
    let start = Instant::now();
    match search::solve_existence(&GroupType::parse("2^4").unwrap(), &limits).unwrap() {
        SearchOutcome::Exhausted { .. } => {}
        other => panic!("2^4: expected Exhausted, got {other:?}"),
    }
    let refute = start.elapsed();
    assert!(refute < Duration::from_secs(1), "{refute:?}");

    let start = Instant::now();
    for (name, blocks) in [("3^4", 9usize), ("3^5", 15)] {
        match search::solve_existence(&GroupType::parse(name).unwrap(), &limits).unwrap() {
            SearchOutcome::Found(d) => {
                assert_eq!(d.blocks().len(), blocks, "{name}");
                assert!(verify_gdd(&d).ok, "{name}");
            }
            other => panic!("{name}: expected Found, got {other:?}"),
        }
    }
    let found = start.elapsed();
    assert!(found < Duration::from_secs(10), "{found:?}");
    println!(
        "criterion 7: PASS - 2^4 exhausted in {refute:?}; 3^4 and 3^5 found and verified in {found:?}"
    );
}

/// Reproduces the refuted 2^6 5^1 under the slow profile. Run explicitly:
/// `cargo test -p gdd --test acceptance -- --ignored slow_profile`.
#[test]
#[ignore = "long refutation; no wall-clock guarantee"]
fn criterion_7_slow_profile_refutes_2_6_5_1() {
    let limits = SearchLimits::slow();
    match search::solve_existence(&GroupType::parse("2^6 5^1").unwrap(), &limits).unwrap() {
        SearchOutcome::Exhausted { nodes } => {
            println!("criterion 7 (slow): PASS - 2^6 5^1 exhausted after {nodes} nodes");
        }
        other => panic!("expected Exhausted, got {other:?}"),
    }
}

#[test]
fn criterion_8_oracle_grid() {
    let start = Instant::now();
    let mut not_exists = Vec::new();
    for g in 1..=62usize {
        let simplified_applies = g % 6 == 2 || g % 6 == 4;
        for u in 4..=27usize {
            for m in 0..=g * (u - 1) / 2 {
                let status = oracle::status_gum(g, u, m);
                if simplified_applies && m != 0 && m != g {
                    let simplified = u % 3 == 0 && m % 3 == g % 3;
                    assert_eq!(
                        status.verdict == Verdict::NecessaryFail,
                        !simplified,
                        "g={g} u={u} m={m}: {:?}",
                        status.verdict
                    );
                }
                if status.verdict == Verdict::NotExists {
                    not_exists.push((g, u, m));
                }
            }
        }
    }
    assert_eq!(not_exists, vec![(2, 4, 0), (2, 6, 5), (6, 4, 0)]);

    // open exceptions: exactly the listed m at u = 9 for g = 56, 80, 112
    let expect: [(usize, Vec<usize>); 3] = [
        (56, vec![206, 209, 215, 218, 221]),
        (80, vec![299, 311, 317]),
        (112, vec![433, 439, 445]),
    ];
    for (g, want) in expect {
        let got: Vec<usize> = (0..=4 * g)
            .filter(|&m| oracle::status_gum(g, 9, m).verdict == Verdict::OpenException)
            .collect();
        assert_eq!(got, want, "g={g}");
    }

    // every catalog type of shape g^u m^1 maps to Exists
    let cat = workspace_catalog();
    let mut checked = 0;
    for entry in &cat.entries {
        if let Some((g, u, m)) = entry.group_type.as_gum() {
            if m != 0 && m != g {
                let status = oracle::status_gum(g, u, m);
                assert_eq!(
                    status.verdict,
                    Verdict::Exists,
                    "{}: {}",
                    entry.name,
                    status.basis
                );
                checked += 1;
            }
        }
    }
    assert!(
        checked >= 26,
        "only {checked} catalog types of shape g^u m^1"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "{elapsed:?}");
    println!(
        "criterion 8: PASS - oracle grid swept (g <= 62, u <= 27) and {checked} catalog types exist, in {elapsed:?}"
    );
}

#[test]
fn criterion_9_round_trip_stability() {
    let cat = workspace_catalog();
    let digests = |threads: usize| -> Vec<(String, String)> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let summary = pool.install(|| catalog::verify_all(&cat));
        assert_eq!(summary.failures, 0);
        summary
            .entries
            .iter()
            .map(|e| (e.name.clone(), e.digest.clone()))
            .collect()
    };
    let single = digests(1);
    let multi = digests(num_threads());
    let again = digests(num_threads());
    assert_eq!(single, multi, "digests differ across thread counts");
    assert_eq!(multi, again, "digests differ across runs");

    // and the digest survives serialize -> parse -> serialize
    for name in ["4^5_10^2", "38^9_11^1"] {
        let d = cat.expand(name).unwrap();
        let text = gdd::gddx::serialize(&d);
        let reparsed = gdd::gddx::parse(&text).unwrap();
        assert_eq!(
            gdd::gddx::digest(&d),
            gdd::gddx::digest(&reparsed),
            "{name}"
        );
    }
    println!(
        "criterion 9: PASS - {} digests identical across thread counts 1 and {} and across runs",
        single.len(),
        num_threads()
    );
}

fn num_threads() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get().max(2))
}
