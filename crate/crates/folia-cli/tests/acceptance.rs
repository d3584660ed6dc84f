//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `-- --nocapture` to see them on success).

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use folia::annot::Annotations;
use folia::dual::unfold;
use folia::family::equising_sample_check;
use folia::field::{FieldDescriptor, FieldElem};
use folia::invariants::{
    camacho_sad_sums, delta_hat, formula46_check, is_second_kind, pullback_function_orders,
    second_kind_crosscheck,
};
use folia::localclass::classify_tree;
use folia::milnor::{milnor_number, Milnor};
use folia::nerve::{
    attach_green_prunable_branch, build_nerve, chain_count, cohomology_bruteforce_red, is_tff,
    prune, random_mixed_nerve, random_red_nerve, red_part, sigma_hat, witness_is_valid, Attr,
    Color, Mode, Nerve, NerveEdge, NerveVertex, SplitMix64, TffVerdict, VType,
};
use folia::parse::{parse_family, parse_oneform, parse_poly};
use folia::poly2::{OneForm, Poly2};
use folia::rat::{int, rat};
use folia::reduction::{
    determinacy_bound, multiplicity_recurrence_check, pre_reduce, reduce, Config,
};
use folia::report::{full_pipeline, tree_to_json, InvariantReport, TreeJson};
use folia::sep::separatrix_model;

fn pass(n: usize, msg: &str) {
    println!("criterion {}: PASS — {}", n, msg);
}

/// The golden corpus: differentials of reduced polynomials of degree ≤ 6.
fn corpus() -> Vec<(&'static str, OneForm)> {
    let polys = [
        "x y",
        "x^2 - y^2",
        "y^2 - x^3",
        "y^2 - x^5",
        "y^3 - x^4",
        "y^3 - x^5",
        "x^3 - y^3",
        "x^4 - y^4",
        "x^2 y - x y^2",
        "x y^2 - x^4",
        "y^3 - x^2 y",
        "y^3 - 2 x^2 y",
        "y^2 - x^6",
    ];
    polys
        .iter()
        .map(|&text| {
            let f = parse_poly(text).unwrap();
            (text, OneForm::new(f.deriv_x(), f.deriv_y()))
        })
        .collect()
}

fn classified_corpus() -> Vec<(&'static str, folia::reduction::ReductionTree)> {
    let cfg = Config::default();
    corpus()
        .into_iter()
        .map(|(name, form)| {
            let mut tree = reduce(&form, &cfg)
                .unwrap_or_else(|e| panic!("reduce failed on {}: {}", name, e));
            classify_tree(&mut tree, &cfg).unwrap();
            (name, tree)
        })
        .collect()
}

#[test]
fn criterion_01_milnor_oracle() {
    let start = Instant::now();
    let q = FieldDescriptor::rationals();
    for p in 1u32..=7 {
        for qq in 1u32..=7 {
            let a = Poly2::monomial(&q, FieldElem::from_int(&q, p as i64), p - 1, 0);
            let b = Poly2::monomial(&q, FieldElem::from_int(&q, qq as i64), 0, qq - 1);
            let mu = milnor_number(&a, &b, 256);
            assert_eq!(
                mu,
                Milnor::Finite(((p - 1) * (qq - 1)) as usize),
                "μ(p x^{{p-1}}, q y^{{q-1}}) failed at p={}, q={}",
                p,
                qq
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {:?}", elapsed);
    pass(1, &format!("49 monomial Milnor numbers exact in {:?}", elapsed));
}

#[test]
fn criterion_02_cusp_golden_run() {
    let start = Instant::now();
    let cfg = Config::default();
    let form = parse_oneform("2y dy - 3x^2 dx").unwrap();
    let mut tree = reduce(&form, &cfg).unwrap();
    classify_tree(&mut tree, &cfg).unwrap();
    assert_eq!(tree.height, 3);
    let mut es: Vec<i64> = tree.comps.iter().map(|c| c.self_int).collect();
    es.sort();
    assert_eq!(es, vec![-3, -2, -1]);
    let rec = multiplicity_recurrence_check(&tree);
    assert!(rec.ok, "recurrence diffs {:?}", rec.diffs);
    assert_eq!(delta_hat(&tree), 0);
    let sk = is_second_kind(&tree);
    assert!(sk.second_kind);
    // cross-check between the form pipeline and the separatrix pipeline
    let sep = separatrix_model(&tree);
    let cross = second_kind_crosscheck(&tree, &sep);
    assert!(cross.ok, "{:?}", cross);
    assert_eq!(cross.nu0_omega, cross.nu0_df);
    for (comp, m_omega, m_df) in &cross.rows {
        assert_eq!(m_omega, m_df, "m mismatch on component {}", comp);
    }
    // both verified against the independent symbolic pullback of f = y² − x³
    let f = parse_poly("y^2 - x^3").unwrap();
    let (orders, _) = pullback_function_orders(&tree, &f);
    assert_eq!(orders, sep.m_sep, "symbolic pullback disagrees");
    let m_omega: Vec<u64> = tree.comps.iter().map(|c| c.m_omega).collect();
    let m_df: Vec<u64> = sep.m_df();
    assert_eq!(m_omega, m_df);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {:?}", elapsed);
    pass(
        2,
        &format!(
            "cusp: height 3, e = {{−3,−2,−1}}, recurrence exact, δ̂ = 0, second kind, \
             m(ω) = m(df̂) = {:?} against the pullback oracle, in {:?}",
            m_omega, elapsed
        ),
    );
}

#[test]
fn criterion_03_camacho_sad_sums() {
    let mut components = 0usize;
    for (name, tree) in classified_corpus() {
        let cs = camacho_sad_sums(&tree);
        assert!(cs.skipped.is_empty(), "{}: skipped {:?}", name, cs.skipped);
        assert!(cs.ok, "{}: {:?}", name, cs.rows);
        components += cs.rows.len();
    }
    pass(
        3,
        &format!(
            "Camacho-Sad sums equal orbit·e(D) on {} components across 13 hamiltonians",
            components
        ),
    );
}

#[test]
fn criterion_04_formula46() {
    for (name, tree) in classified_corpus() {
        let rep = formula46_check(&tree);
        assert!(
            rep.ok,
            "{}: lhs {} ≠ rhs {}",
            name, rep.lhs, rep.rhs
        );
    }
    pass(4, "multiplicity identity exact on every corpus member");
}

fn tree_fingerprint(
    tree: &folia::reduction::ReductionTree,
) -> (
    BTreeMap<String, (usize, u32, usize)>,
    Vec<(String, i64, u64)>,
) {
    let points = tree
        .points
        .iter()
        .map(|p| (p.path.clone(), (p.height, p.nu, p.orbit)))
        .collect();
    let comps = tree
        .comps
        .iter()
        .map(|c| {
            (
                tree.points[c.creator].path.clone(),
                c.self_int,
                c.m_omega,
            )
        })
        .collect();
    (points, comps)
}

#[test]
fn criterion_05_pre_reduction_equals_reduction() {
    let cfg = Config::default();
    for (name, form) in corpus() {
        let full = reduce(&form, &cfg).unwrap();
        let pre = pre_reduce(&form, &cfg).unwrap();
        assert_eq!(
            tree_fingerprint(&full),
            tree_fingerprint(&pre),
            "pre-reduction differs from reduction on {}",
            name
        );
    }
    pass(
        5,
        "pre-reduction tree equals the reduction tree on every second-kind corpus member",
    );
}

#[test]
fn criterion_06_nerve_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = SplitMix64(0x5eed_0006);
    for round in 0..1000 {
        let nerve = random_red_nerve(&mut rng, 12);
        let red = red_part(&nerve).unwrap();
        let sigma = sigma_hat(&nerve);
        let coker = cohomology_bruteforce_red(&nerve, &red.vertices, &red.edges);
        assert_eq!(sigma, coker, "round {}: σ̂ {} vs coker {}", round, sigma, coker);
        let pruned = prune(&nerve);
        let coker_el = cohomology_bruteforce_red(&nerve, &pruned.vertices, &pruned.edges);
        assert_eq!(sigma, coker_el, "round {}: pruning changed the cokernel", round);
        // metamorphic: attaching a green prunable branch changes nothing
        let grown = attach_green_prunable_branch(&nerve, &mut rng);
        assert_eq!(sigma_hat(&grown), sigma, "round {}: green attach broke σ̂", round);
        let v1 = is_tff(&nerve);
        let v2 = is_tff(&grown);
        match (&v1, &v2) {
            (
                TffVerdict::Finite { sigma_hat: s1, tau_hat: t1 },
                TffVerdict::Finite { sigma_hat: s2, tau_hat: t2 },
            ) => {
                assert_eq!((s1, t1), (s2, t2));
            }
            (TffVerdict::Infinite { .. }, TffVerdict::Infinite { .. }) => {}
            other => panic!("round {}: verdict changed: {:?}", round, other),
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {:?}", elapsed);
    pass(
        6,
        &format!(
            "1000 random red nerves: census = cokernel before and after pruning, \
             green attachments inert, in {:?}",
            elapsed
        ),
    );
}

// independent implementations for the soundness check
fn naive_red_connected(nerve: &Nerve) -> bool {
    let reds: Vec<usize> = nerve
        .vertices
        .iter()
        .filter(|v| v.color.value == Some(Color::Red))
        .map(|v| v.id)
        .collect();
    if reds.is_empty() {
        return true;
    }
    let mut parent: BTreeMap<usize, usize> = reds.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let p = parent[&v];
        if p == v {
            v
        } else {
            let r = find(parent, p);
            parent.insert(v, r);
            r
        }
    }
    for e in &nerve.edges {
        if e.color.value == Some(Color::Red)
            && parent.contains_key(&e.v0)
            && parent.contains_key(&e.v1)
        {
            let (a, b) = (find(&mut parent, e.v0), find(&mut parent, e.v1));
            parent.insert(a, b);
        }
    }
    let roots: std::collections::BTreeSet<usize> =
        reds.iter().map(|&v| find(&mut parent, v)).collect();
    roots.len() == 1
}

fn naive_repulsive(nerve: &Nerve) -> bool {
    // distance from the red set by plain relaxation
    let n = nerve.vertices.len();
    let mut dist = vec![usize::MAX; n];
    for v in &nerve.vertices {
        if v.color.value == Some(Color::Red) {
            dist[v.id] = 0;
        }
    }
    loop {
        let mut changed = false;
        for e in &nerve.edges {
            for (a, b) in [(e.v0, e.v1), (e.v1, e.v0)] {
                if dist[a] != usize::MAX && dist[a] + 1 < dist[b] {
                    dist[b] = dist[a] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for (ei, e) in nerve.edges.iter().enumerate() {
        if dist[e.v0] == 0 && dist[e.v1] == 0 {
            continue;
        }
        let far = if dist[e.v0] >= dist[e.v1] { e.v0 } else { e.v1 };
        if nerve.bij_at(ei, far).value != Some(true) {
            return false;
        }
    }
    true
}

#[test]
fn criterion_07_tff_soundness() {
    let start = Instant::now();
    let mut rng = SplitMix64(0x5eed_0007);
    let mut finites = 0usize;
    let mut infinites = 0usize;
    for round in 0..1000 {
        let nerve = random_mixed_nerve(&mut rng, 12);
        let has_red = nerve
            .vertices
            .iter()
            .any(|v| v.color.value == Some(Color::Red));
        let expected_finite = naive_red_connected(&nerve) && naive_repulsive(&nerve);
        match is_tff(&nerve) {
            TffVerdict::Finite { .. } => {
                finites += 1;
                assert!(has_red && expected_finite, "round {}: spurious Finite", round);
            }
            TffVerdict::Infinite { witness } => {
                infinites += 1;
                assert!(
                    !expected_finite,
                    "round {}: Infinite but connected ∧ repulsive",
                    round
                );
                assert!(
                    witness_is_valid(&nerve, &witness),
                    "round {}: invalid witness {:?} in {:?}",
                    round,
                    witness,
                    nerve
                );
            }
            TffVerdict::NotApplicable { .. } => {
                assert!(!has_red, "round {}: NotApplicable with red vertices", round);
            }
            TffVerdict::Unknown { missing } => {
                panic!("round {}: unexpected Unknown ({})", round, missing);
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(finites > 50 && infinites > 50, "degenerate sampling");
    pass(
        7,
        &format!(
            "1000 random nerves: verdicts match connectivity ∧ repulsiveness, \
             every Infinite witness structurally valid ({} finite, {} infinite) in {:?}",
            finites, infinites, elapsed
        ),
    );
}

/// Random dual tree with arrows, painted by the non-degenerate table.
fn random_nondegenerate_nerve(rng: &mut SplitMix64) -> (Nerve, usize) {
    let ncomp = 1 + rng.below(8);
    let mut parent = vec![usize::MAX; ncomp];
    for v in 1..ncomp {
        parent[v] = rng.below(v);
    }
    let arrows: Vec<usize> = (0..ncomp).map(|_| rng.below(4)).collect();
    // valences
    let mut valence = arrows.clone();
    for v in 1..ncomp {
        valence[v] += 1;
        valence[parent[v]] += 1;
    }
    // the chain count comes from the synthetic dual tree
    let ct = folia::dual::CTree {
        comps: (0..ncomp)
            .map(|i| folia::dual::CompCopy {
                rep: i,
                copy: 0,
                e: -1,
                m_omega: 1,
                m_ideal: 1,
                dicritical: false,
                arrows: vec![0; arrows[i]],
            })
            .collect(),
        points: Vec::new(),
        edges: (1..ncomp)
            .map(|v| folia::dual::EdgeCopy {
                comps: (v, parent[v]),
                point: None,
            })
            .collect(),
    };
    let chains = chain_count(&ct);
    // nerve: a type-1 vertex per component, a type-0 vertex per corner and
    // per arrow, everything red, weight 0 exactly on valence-≥3 components
    let mut nerve = Nerve::default();
    for (i, &val) in valence.iter().enumerate() {
        nerve.vertices.push(NerveVertex {
            id: i,
            vtype: VType::Type1,
            color: Attr::known(Color::Red, folia::localclass::Provenance::Assumed),
            weight: Attr::known(u8::from(val < 3), folia::localclass::Provenance::Assumed),
            backref: format!("D{}", i + 1),
        });
    }
    let mut add_point = |nerve: &mut Nerve, on: &[usize]| {
        let id = nerve.vertices.len();
        nerve.vertices.push(NerveVertex {
            id,
            vtype: VType::Type0,
            color: Attr::known(Color::Red, folia::localclass::Provenance::Assumed),
            weight: Attr::known(1, folia::localclass::Provenance::Assumed),
            backref: format!("p{}", id),
        });
        for &c in on {
            nerve.edges.push(NerveEdge {
                v0: id,
                v1: c,
                color: Attr::known(Color::Red, folia::localclass::Provenance::Assumed),
                bij0: Attr::unknown(),
                bij1: Attr::unknown(),
            });
        }
    };
    for v in 1..ncomp {
        add_point(&mut nerve, &[v, parent[v]]);
    }
    for (i, &a) in arrows.iter().enumerate() {
        for _ in 0..a {
            add_point(&mut nerve, &[i]);
        }
    }
    folia::nerve::derive_red_arrows(&mut nerve);
    (nerve, chains)
}

#[test]
fn criterion_08_nondegenerate_fast_path() {
    let mut rng = SplitMix64(0x5eed_0008);
    for round in 0..100 {
        let (nerve, chains) = random_nondegenerate_nerve(&mut rng);
        let tau = match is_tff(&nerve) {
            TffVerdict::Finite { tau_hat, .. } => tau_hat as usize,
            other => panic!("round {}: non-degenerate nerve not finite: {:?}", round, other),
        };
        assert_eq!(
            tau, chains,
            "round {}: τ̂ {} vs chain count {}",
            round, tau, chains
        );
    }
    pass(
        8,
        "chain counts equal τ̂ from the pruning pipeline on 100 random dual trees",
    );
}

#[test]
fn criterion_09_family_checks() {
    let start = Instant::now();
    let cfg = Config::default();
    let eta1 = parse_family("x dy + y*(y - t) dx").unwrap();
    let samples = vec![int(1), rat(1, 2), rat(-2, 3), rat(1, 8)];
    let report = equising_sample_check(&eta1, &samples, &cfg).unwrap();
    assert!(!report.equisingular_at_samples);
    for (t, v) in &report.samples {
        assert_eq!(
            format!("{}", v),
            "μ drop 2 → 1",
            "sample {} gave {:?}",
            t,
            v
        );
    }
    let constant_cusp = parse_family("2y dy - 3x^2 dx").unwrap();
    let report = equising_sample_check(&constant_cusp, &[int(1), int(2), int(3)], &cfg).unwrap();
    assert!(report.equisingular_at_samples);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 2.0, "took {:?}", elapsed);
    pass(
        9,
        &format!(
            "η₁ fails with μ drop 2 → 1 at every sample, the constant cusp family passes, in {:?}",
            elapsed
        ),
    );
}

#[test]
fn criterion_10_determinacy_recurrence() {
    assert_eq!(determinacy_bound(2, 1), 3);
    assert_eq!(determinacy_bound(2, 2), 5);
    assert_eq!(determinacy_bound(2, 3), 11);
    for v in 1..=10 {
        for h in 1..=10 {
            assert_eq!(
                determinacy_bound(v, h + 2) - determinacy_bound(v, h + 1) - determinacy_bound(v, h),
                v + h
            );
        }
    }
    pass(10, "σ(2,·) base cases and the recurrence identity over 1 ≤ v, h ≤ 10");
}

fn run_cli(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_folia"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn criterion_11_determinism_and_round_trip() {
    // byte-identical CLI reruns
    let invocations: Vec<Vec<&str>> = vec![
        vec!["reduce", "2y dy - 3x^2 dx", "--out", "json"],
        vec!["reduce", "2y dy - 3x^2 dx", "--out", "dot"],
        vec![
            "invariants",
            "2y dy - 3x^2 dx",
            "--mode",
            "nondegenerate",
            "--out",
            "json",
        ],
        vec!["nerve", "3y^2 dy - 5x^4 dx", "--mode", "nondegenerate", "--out", "json"],
        vec!["tff", "2y dy - 3x^2 dx", "--mode", "nondegenerate"],
        vec!["equising", "x dy + y*(y - t) dx", "--samples", "1/8,1/16", "--out", "json"],
        vec!["bound", "2", "3"],
    ];
    for args in &invocations {
        let (out1, code1) = run_cli(args);
        let (out2, code2) = run_cli(args);
        assert_eq!(out1, out2, "non-deterministic output for {:?}", args);
        assert_eq!(code1, code2);
        assert!(!out1.is_empty());
    }
    // JSON round-trips are the identity on the corpus
    let cfg = Config::default();
    for (name, form) in corpus() {
        let (tree, report, nerve) =
            full_pipeline(&form, Mode::NonDegenerate, &Annotations::empty(), &cfg).unwrap();
        let tj = tree_to_json(&tree, true);
        let text = serde_json::to_string(&tj).unwrap();
        let back: TreeJson = serde_json::from_str(&text).unwrap();
        assert_eq!(tj, back, "tree round-trip failed on {}", name);
        let text = serde_json::to_string(&report).unwrap();
        let back: InvariantReport = serde_json::from_str(&text).unwrap();
        assert_eq!(report, back, "report round-trip failed on {}", name);
        if let Some(nerve) = nerve {
            let text = serde_json::to_string(&nerve).unwrap();
            let back: Nerve = serde_json::from_str(&text).unwrap();
            assert_eq!(
                serde_json::to_string(&back).unwrap(),
                text,
                "nerve round-trip failed on {}",
                name
            );
        }
        let _ = unfold(&tree);
    }
    pass(
        11,
        "CLI byte-reproducible across reruns; tree, report and nerve JSON round-trip exactly",
    );
}
