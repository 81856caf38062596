//! Acceptance suite: every criterion below prints one PASS line (run with
//! `cargo test -p lfgt-cli --test acceptance -- --nocapture` to see them)
//! and enforces its runtime budget.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use lfgt_core::group::{
    builtin_group, crisp_predicates, crisp_pronormal, enumerate_small_subgroups, subgroup_closure,
    FiniteGroup,
};
use lfgt_core::lattice::builtin_lattice;
use lfgt_core::lsubgroup::{
    central_chain, conjugate, generate, is_lsubgroup, is_maximal, is_normal, is_pronormal,
    is_subnormal, normalizer,
};
use lfgt_core::lsubset::{LPoint, LSubset};
use lfgt_core::sample::{dihedral_classes, eta_example, mu_example, s4_and_m};
use lfgt_core::verify::{
    gen_instance, oracle_generate, oracle_normalizer_maximality, InstanceSpec,
};

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("tests/fixtures");
    path.push(name);
    path.to_string_lossy().into_owned()
}

fn lfgt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lfgt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn pass(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "{criterion}: took {elapsed:?}, budget {budget:?}"
    );
    println!("PASS {criterion} ({elapsed:?})");
}

#[test]
fn acceptance_01_conjugate_table_is_reproduced_exactly() {
    let started = Instant::now();
    let out = lfgt(&[
        "compute",
        "conjugate",
        "--eta",
        &fixture("eta_ex.lsub"),
        "--mu",
        &fixture("mu_ex.lsub"),
        "--point",
        "d@(1 2 3)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);

    let (g, m) = s4_and_m();
    let classes = dihedral_classes(&g);
    let expected = |x: usize| -> &'static str {
        if classes.v4.contains(&x) {
            "d"
        } else if classes.d3_rest.contains(&x) {
            "a"
        } else if classes.d1_rest.contains(&x) {
            "b"
        } else if classes.d2_rest.contains(&x) {
            "c"
        } else {
            "f"
        }
    };
    let mut seen = 0;
    for line in text.lines() {
        let Some((elt, val)) = line.split_once(" : ") else {
            continue;
        };
        let x = g.element(elt.trim()).expect("table rows name elements");
        assert_eq!(val.trim(), expected(x), "value at {elt}");
        seen += 1;
    }
    assert_eq!(seen, 24, "table must list every element");
    let _ = m;
    pass(
        "criterion 1: conjugate table of the worked example",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_02_union_and_generated_join_are_exact() {
    let started = Instant::now();
    let (g, m) = s4_and_m();
    let mu = mu_example(&g, &m);
    let eta = eta_example(&g, &m);
    let classes = dihedral_classes(&g);
    let val = |s: &str| m.element(s).unwrap();

    let point = LPoint {
        value: val("d"),
        support: g.element("(1 2 3)").unwrap(),
    };
    let conj = conjugate(&eta, point, &mu).unwrap();
    let union = eta.union(&conj).unwrap();
    let in_dihedral_union = |x: usize| {
        classes.v4.contains(&x)
            || classes.d1_rest.contains(&x)
            || classes.d2_rest.contains(&x)
            || classes.d3_rest.contains(&x)
    };
    for x in 0..g.len() {
        let expect = if x == g.identity() {
            val("u")
        } else if in_dihedral_union(x) {
            val("d")
        } else {
            val("f")
        };
        assert_eq!(union.value(x), expect, "union at {}", g.name(x));
    }

    let generated = generate(&union, &mu).unwrap();
    let mut non_identity = 0;
    for x in 0..g.len() {
        let expect = if x == g.identity() {
            val("u")
        } else {
            non_identity += 1;
            val("d")
        };
        assert_eq!(generated.value(x), expect, "generated at {}", g.name(x));
    }
    assert_eq!(non_identity, 23);
    pass(
        "criterion 2: generated join of the conjugate pair",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_03_pronormality_with_the_full_witness_map() {
    let started = Instant::now();
    let (g, m) = s4_and_m();
    let mu = mu_example(&g, &m);
    let eta = eta_example(&g, &m);

    let verdict = is_pronormal(&eta, &mu).unwrap();
    assert!(verdict.holds);
    let non_bottom_points: usize = (0..g.len())
        .map(|x| {
            (0..m.len())
                .filter(|&a| a != m.bottom() && m.leq(a, mu.value(x)))
                .count()
        })
        .sum();
    assert_eq!(verdict.witness.len(), non_bottom_points);

    // The top-valued double transposition fixes the subset and is certified
    // at the identity.
    let u = m.element("u").unwrap();
    let w = g.element("(1 2)(3 4)").unwrap();
    let conj = conjugate(
        &eta,
        LPoint {
            value: u,
            support: w,
        },
        &mu,
    )
    .unwrap();
    assert_eq!(conj, eta);
    let cert = verdict
        .witness
        .iter()
        .find(|(c, _)| c.value == u && c.support == w)
        .map(|&(_, w)| w)
        .unwrap();
    assert_eq!(
        cert,
        LPoint {
            value: u,
            support: g.identity()
        }
    );
    pass(
        "criterion 3: pronormality of the worked example",
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn acceptance_04_non_normality_with_the_level_counterexample() {
    let started = Instant::now();
    let (g, m) = s4_and_m();
    let mu = mu_example(&g, &m);
    let eta = eta_example(&g, &m);

    let verdict = is_normal(&eta, &mu).unwrap();
    assert!(!verdict.holds);
    let (_, note) = verdict.counterexample.unwrap();
    assert!(note.contains("level `a`"), "{note}");

    // The level at `a` really is the first dihedral subgroup, and it is not
    // normal in the ambient level, the whole group.
    let a = m.element("a").unwrap();
    let level = eta.level_subset(a).unwrap();
    let d41 = subgroup_closure(
        &g,
        &[g.element("(2 4)").unwrap(), g.element("(1 2 3 4)").unwrap()],
    )
    .unwrap();
    assert_eq!(level, d41);
    let ambient_level = mu.level_subset(a).unwrap();
    assert_eq!(ambient_level.len(), 24);
    let preds = crisp_predicates(&g, &ambient_level, &level);
    assert!(preds.is_subgroup && !preds.is_normal_in_ambient);
    pass(
        "criterion 4: non-normality at the dihedral level",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_05_crisp_embedding_over_all_subgroup_pairs_of_s4() {
    let started = Instant::now();
    let g = Arc::new(builtin_group("S(4)").unwrap());
    let c2 = Arc::new(builtin_lattice("chain(2)").unwrap());
    let subgroups = enumerate_small_subgroups(&g);
    assert_eq!(subgroups.len(), 30);

    let mut pairs = 0;
    for ambient in &subgroups {
        for sub in &subgroups {
            if !sub.iter().all(|x| ambient.contains(x)) {
                continue;
            }
            pairs += 1;
            let crisp = crisp_pronormal(&g, ambient, sub).unwrap().holds;
            let valued = is_pronormal(
                &LSubset::characteristic(g.clone(), c2.clone(), sub),
                &LSubset::characteristic(g.clone(), c2.clone(), ambient),
            )
            .unwrap()
            .holds;
            assert_eq!(crisp, valued, "H={sub:?} K={ambient:?}");
        }
    }
    assert!(pairs >= 100, "expected many nested pairs, saw {pairs}");
    pass(
        &format!("criterion 5: crisp embedding over {pairs} subgroup pairs"),
        started,
        Duration::from_secs(300),
    );
}

#[test]
fn acceptance_06_theorem_suite_reports_no_failures() {
    let started = Instant::now();
    let out = lfgt(&[
        "verify",
        "--seed",
        "7",
        "--cases",
        "300",
        "--max-group",
        "12",
        "--max-lattice",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("verify: pass"), "{text}");
    assert!(text.contains("total_failures: 0"), "{text}");
    for required in [
        "normal_implies_pronormal",
        "pronormal_and_subnormal_imply_normal",
        "conjugates_inside_normal_closure",
        "conjugate_distributes_over_set_product",
        "conjugate_levels_are_conjugated_levels",
        "normalizer_definitions_agree",
        "generated_levels_under_sup_property",
        "hom_image_of_conjugate",
        "hom_image_of_levels",
        "hom_image_pronormal",
        "level_pronormality_on_chains",
        "normalizer_of_pronormal_is_pronormal",
        "product_with_normal_is_pronormal",
        "bracket_convention_is_immaterial",
    ] {
        let line = text
            .lines()
            .find(|l| l.starts_with(&format!("{required}:")))
            .unwrap_or_else(|| panic!("suite must report `{required}`"));
        assert!(line.contains("failures=0"), "{line}");
        assert!(!line.contains("checked=0"), "entry never ran: {line}");
    }
    pass(
        "criterion 6: randomized theorem suite (300 cases)",
        started,
        Duration::from_secs(600),
    );
}

#[test]
fn acceptance_07_oracle_equivalence() {
    let started = Instant::now();

    // One hundred seeded instances within the oracle cap.
    for seed in 0..100 {
        let spec = InstanceSpec::new(seed, 6, 3);
        let inst = gen_instance(&spec).unwrap();
        assert!(inst.within_oracle_cap());
        assert_eq!(
            generate(&inst.seed_subset, &inst.mu).unwrap(),
            oracle_generate(&inst.seed_subset, &inst.mu).unwrap(),
            "generation disagrees on seed {seed}"
        );
        assert_eq!(
            normalizer(&inst.eta, &inst.mu).unwrap(),
            oracle_normalizer_maximality(&inst.eta, &inst.mu).unwrap(),
            "normalizer disagrees on seed {seed}"
        );
    }

    // Exhaustive over every value map on two small carriers.
    let mut checked = 0usize;
    for (group_key, lattice_key) in [("C(4)", "chain(2)"), ("C(2)", "chain(3)")] {
        let g = Arc::new(builtin_group(group_key).unwrap());
        let lat = Arc::new(builtin_lattice(lattice_key).unwrap());
        let n = g.len();
        let m = lat.len();
        let total = m.pow(n as u32);
        let subset_of = |code: usize| -> LSubset {
            let mut values = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                values.push(c % m);
                c /= m;
            }
            LSubset::from_values(g.clone(), lat.clone(), values)
        };
        for mu_code in 0..total {
            let mu = subset_of(mu_code);
            if !is_lsubgroup(&mu).holds {
                continue;
            }
            for eta_code in 0..total {
                let eta = subset_of(eta_code);
                if !mu.contains(&eta).unwrap() {
                    continue;
                }
                assert_eq!(
                    generate(&eta, &mu).unwrap(),
                    oracle_generate(&eta, &mu).unwrap()
                );
                if is_lsubgroup(&eta).holds {
                    assert_eq!(
                        normalizer(&eta, &mu).unwrap(),
                        oracle_normalizer_maximality(&eta, &mu).unwrap()
                    );
                }
                checked += 1;
            }
        }
    }
    // 23 contained pairs over (C(4), chain(2)) plus 25 over (C(2), chain(3)).
    assert_eq!(checked, 48, "exhaustive sweep changed size");
    pass(
        &format!("criterion 7: oracle equivalence ({checked} exhaustive pairs + 100 seeds)"),
        started,
        Duration::from_secs(300),
    );
}

/// Direct product with the two-element cyclic group, giving a carrier that
/// properly contains a copy of the given group.
fn product_with_c2(g: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
    let n = g.len();
    let names: Vec<String> = (0..2 * n)
        .map(|i| format!("{}.{}", g.name(i / 2), i % 2))
        .collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let rows: Vec<Vec<&str>> = (0..2 * n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    let q = g.mul(i / 2, j / 2);
                    let c = (i + j) % 2;
                    name_refs[q * 2 + c]
                })
                .collect()
        })
        .collect();
    let product = FiniteGroup::from_table(&name_refs, &rows).unwrap();
    let copy: Vec<usize> = (0..n)
        .map(|q| product.element(&format!("{}.0", g.name(q))).unwrap())
        .collect();
    (product, copy)
}

#[test]
fn acceptance_08_nilpotent_corollaries_over_dihedral_and_quaternion_ambients() {
    let started = Instant::now();
    let c2 = Arc::new(builtin_lattice("chain(2)").unwrap());

    // The dihedral ambient lives inside the symmetric group on four points;
    // the quaternion group is not a subgroup of any catalog group, so its
    // carrier is the direct product with a two-element factor.
    let s4 = Arc::new(builtin_group("S(4)").unwrap());
    let d4 = subgroup_closure(
        &s4,
        &[
            s4.element("(2 4)").unwrap(),
            s4.element("(1 2 3 4)").unwrap(),
        ],
    )
    .unwrap();
    let q8 = builtin_group("Q8").unwrap();
    let (q8xc2, q8_copy) = product_with_c2(&q8);
    let q8xc2 = Arc::new(q8xc2);

    let mut checked = 0usize;
    for (carrier, member_set) in [(&s4, &d4), (&q8xc2, &q8_copy)] {
        let ambient = LSubset::characteristic(carrier.clone(), c2.clone(), member_set);
        let chain = central_chain(&ambient, &ambient).unwrap();
        assert!(chain.reached_target, "ambient must be nilpotent");

        // Every subgroup of the member set, as a characteristic map, has the
        // ambient's tip and tail.
        let subgroups: Vec<Vec<usize>> = enumerate_small_subgroups(carrier)
            .into_iter()
            .filter(|sub| sub.iter().all(|x| member_set.contains(x)))
            .collect();
        assert!(subgroups.len() >= 6);
        for sub in &subgroups {
            let eta = LSubset::characteristic(carrier.clone(), c2.clone(), sub);
            assert_eq!(eta.extrema(), ambient.extrema());
            let normal = is_normal(&eta, &ambient).unwrap().holds;
            let pronormal = is_pronormal(&eta, &ambient).unwrap().holds;
            assert_eq!(normal, pronormal, "split on {sub:?}");
            assert!(
                is_subnormal(&eta, &ambient).unwrap().holds,
                "not subnormal: {sub:?}"
            );
            checked += 1;
        }
    }
    pass(
        &format!("criterion 8: nilpotent ambient corollaries ({checked} subgroups)"),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn acceptance_09_maximality_witnesses() {
    let started = Instant::now();

    let z4 = Arc::new(builtin_group("C(4)").unwrap());
    let c2 = Arc::new(builtin_lattice("chain(2)").unwrap());
    let sub = LSubset::characteristic(z4.clone(), c2.clone(), &[0, 2]);
    let whole = LSubset::constant(z4, c2.clone(), c2.top());
    assert!(is_maximal(&sub, &whole).unwrap().holds);

    let z2 = Arc::new(builtin_group("C(2)").unwrap());
    let chain3 = Arc::new(
        lfgt_core::Lattice::from_covers(&["0", "m", "1"], &[("0", "m"), ("m", "1")]).unwrap(),
    );
    let one = chain3.element("1").unwrap();
    let mid = chain3.element("m").unwrap();
    let zero = chain3.element("0").unwrap();
    let eta = LSubset::from_values(z2.clone(), chain3.clone(), vec![one, zero]);
    let whole = LSubset::constant(z2, chain3.clone(), chain3.top());
    let verdict = is_maximal(&eta, &whole).unwrap();
    assert!(!verdict.holds);
    let (theta, _) = verdict.counterexample.unwrap();
    assert_eq!(theta.values(), &[one, mid]);
    pass(
        "criterion 9: maximality verdicts with exact witnesses",
        started,
        Duration::from_secs(2),
    );
}

#[test]
fn acceptance_10_lattice_diagnostics_via_the_cli() {
    let started = Instant::now();
    let out = lfgt(&["diag", "lattice", "--lattice", "example_M"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("distributive: false"), "{text}");
    assert!(text.contains("upper well ordered: false"), "{text}");

    for n in [2, 3, 5, 8] {
        let key = format!("chain({n})");
        let out = lfgt(&["diag", "lattice", "--lattice", &key]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("distributive: true"), "{key}: {text}");
        assert!(text.contains("upper well ordered: true"), "{key}: {text}");
    }
    pass(
        "criterion 10: lattice diagnostics",
        started,
        Duration::from_secs(1),
    );
}
