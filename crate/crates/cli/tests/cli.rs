use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::{json, Map, Value};

use sesqui::kernel::compose_norm;
use sesqui::random;
use sesqui::{FinSet, Kernel, KernelFlavor};
use sesqui_cli::run::{final_kernel, final_relation};
use sesqui_cli::{parse_scenario, run_scenario, run_text, Assoc, CliError, Format, RunOptions, Semantics};

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect()
}

fn sesqui(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sesqui"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sesqui-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn opts(semantics: Semantics, assoc: Assoc) -> RunOptions {
    RunOptions {
        semantics: Some(semantics),
        assoc: Some(assoc),
        ..RunOptions::default()
    }
}

#[test]
fn monty_hall_text_output() {
    let p = fixture("montyhall.json");
    let o = sesqui(&["run", p.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ML: 1/3\nRL: 2/3\n");

    let o = sesqui(&["run", p.to_str().unwrap(), "--semantics", "sub"]);
    assert_eq!(stdout(&o), "ML: 1/6\nRL: 1/3\n_bottom: 1/2\n");

    let o = sesqui(&["run", p.to_str().unwrap(), "--semantics", "par"]);
    assert_eq!(stdout(&o), "bottom\n");
}

#[test]
fn bracketings_differ_only_for_norm() {
    let p = fixture("prop5.json");
    let p = p.to_str().unwrap();
    assert_eq!(stdout(&sesqui(&["run", p, "--assoc", "left"])), "x: 2/5\ny: 3/5\n");
    assert_eq!(stdout(&sesqui(&["run", p, "--assoc", "right"])), "x: 1/2\ny: 1/2\n");
    for sem in ["sub", "par"] {
        let l = sesqui(&["run", p, "--semantics", sem, "--assoc", "left"]);
        let r = sesqui(&["run", p, "--semantics", sem, "--assoc", "right"]);
        assert_eq!(stdout(&l), stdout(&r), "{sem}");
    }
}

#[test]
fn support_fixtures() {
    let o = sesqui(&["run", fixture("montyhall-support.json").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ML") && stdout(&o).contains("RL"));
    let o = sesqui(&["run", fixture("prop5-support.json").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains('x') && stdout(&o).contains('y'));
}

#[test]
fn output_is_deterministic() {
    let p = fixture("montyhall.json");
    for args in [
        vec!["run", p.to_str().unwrap(), "--trace", "--format", "json"],
        vec!["laws", "include-normalize", "--samples", "50", "--seed", "9"],
        vec!["laws", "interval", "--samples", "50", "--format", "json"],
    ] {
        let a = sesqui(&args);
        let b = sesqui(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn json_output_shape() {
    let p = fixture("prop5.json");
    let o = sesqui(&["run", p.to_str().unwrap(), "--format", "json", "--trace"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["semantics"], "norm");
    assert_eq!(v["assoc"], "((0 1) 2)");
    assert_eq!(v["normalized"], false);
    assert_eq!(v["result"]["rows"]["*"], json!({"x": "2/5", "y": "3/5"}));
    assert_eq!(v["trace"].as_array().unwrap().len(), 2);
}

#[test]
fn sub_then_normalize_matches_norm_left_on_fixtures() {
    for name in ["montyhall.json", "prop5.json"] {
        let p = fixture(name);
        let p = p.to_str().unwrap();
        let norm = sesqui(&["run", p, "--semantics", "norm", "--assoc", "left"]);
        let sub = sesqui(&["run", p, "--semantics", "sub", "--normalize"]);
        assert_eq!(stdout(&norm), stdout(&sub), "{name}");
    }
}

#[test]
fn exit_codes() {
    let bad_json = scratch("bad.json", "{ not json");
    let o = sesqui(&["run", bad_json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let decimal = scratch(
        "decimal.json",
        r#"{"kernels": {"k": {"flavor": "stoch", "domain": ["*"], "codomain": ["a", "b"],
            "rows": {"*": {"a": "0.5", "b": "1/2"}}}}, "pipeline": ["k"]}"#,
    );
    let o = sesqui(&["run", decimal.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let short = scratch(
        "short.json",
        r#"{"kernels": {"k": {"flavor": "stoch", "domain": ["*"], "codomain": ["a", "b"],
            "rows": {"*": {"a": "9/10"}}}}, "pipeline": ["k"]}"#,
    );
    let o = sesqui(&["run", short.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"*\""));

    let p = fixture("prop5.json");
    let o = sesqui(&["run", p.to_str().unwrap(), "--normalize"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(sesqui(&["laws", "no-such-law"]).status.code(), Some(3));
    assert_eq!(sesqui(&["term", "eval", "(x <0.5> y)"]).status.code(), Some(2));
    assert_eq!(sesqui(&["run", "/nonexistent/scenario.json"]).status.code(), Some(2));
}

#[test]
fn scenario_validation_messages() {
    let cases = [
        (r#"{"kernels": {}, "pipeline": ["k"]}"#, "pipeline"),
        (r#"{"kernels": {}, "pipeline": [], "extra": 1}"#, "extra"),
        (
            r#"{"kernels": {
                "f": {"flavor": "stoch", "domain": ["*"], "codomain": ["a"], "rows": {"*": {"a": "1"}}},
                "g": {"flavor": "stoch", "domain": ["b"], "codomain": ["a"], "rows": {"b": {"a": "1"}}}},
               "pipeline": ["f", "g"]}"#,
            "domain",
        ),
    ];
    for (text, needle) in cases {
        match parse_scenario(text) {
            Err(CliError::Validation(m)) => assert!(m.contains(needle), "{m}"),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }
}

#[test]
fn relation_under_probabilistic_semantics_is_rejected() {
    let s = parse_scenario(&std::fs::read_to_string(fixture("prop5-support.json")).unwrap()).unwrap();
    let e = run_scenario(&s, &opts(Semantics::Prob(KernelFlavor::Norm), Assoc::Left)).unwrap_err();
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn term_subcommands() {
    let o = sesqui(&["term", "eval", "((x <1/3> y) <1/2> _|_)"]);
    assert_eq!(stdout(&o), "x: 1/6\ny: 1/3\n_bottom: 1/2\n");
    let o = sesqui(&["term", "normalize", "((x <1/3> y) <1/2> _|_)"]);
    assert_eq!(stdout(&o), "term: (x <1/3> y)\nvalidity: 1/2\n");
    let o = sesqui(&["term", "normal-form", "(y <1/2> x)"]);
    assert_eq!(stdout(&o), "(x <1/2> y)\n");
    let o = sesqui(&["term", "normalize", "(_|_ <1/2> _|_)"]);
    assert_eq!(stdout(&o), "bottom\n");
    let o = sesqui(&["term", "eval", "--instance", "terminal", "(x <*> _|_)"]);
    assert!(o.status.success());
}

#[test]
fn laws_command_reports_the_profile() {
    let o = sesqui(&["laws", "include-normalize", "--samples", "100", "--format", "json"]);
    let reports: Value = serde_json::from_slice(&o.stdout).unwrap();
    let failing: Vec<(String, String)> = reports
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| {
            r["axioms"].as_array().unwrap().iter().filter(|a| a["verdict"] == "fail").map(move |a| {
                (r["check"].as_str().unwrap().to_string(), a["name"].as_str().unwrap().to_string())
            })
        })
        .collect();
    assert_eq!(failing, vec![("beck-backward".to_string(), "mult-T".to_string())]);

    let o = sesqui(&["laws", "include-blackhole", "--samples", "100"]);
    assert!(!stdout(&o).contains("fail"));
}

fn scenario_json(ks: &[Kernel]) -> String {
    let mut kernels = Map::new();
    let mut pipeline = Vec::new();
    for (i, k) in ks.iter().enumerate() {
        kernels.insert(format!("k{i}"), k.to_json());
        pipeline.push(json!(format!("k{i}")));
    }
    json!({"kernels": kernels, "pipeline": pipeline}).to_string()
}

fn random_chain(seed: u64, flavor: KernelFlavor, len: usize) -> Vec<Kernel> {
    let mut rng = random::rng(seed);
    let sets: Vec<FinSet> = (0..=len).map(|i| random::finset(&mut rng, 3, &format!("s{i}_"))).collect();
    (0..len)
        .map(|i| random::kernel(&mut rng, flavor, &sets[i], &sets[i + 1], 12))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sub_normalize_equals_norm_left(seed in any::<u64>(), len in 1usize..5) {
        let ks = random_chain(seed, KernelFlavor::Norm, len);
        let s = parse_scenario(&scenario_json(&ks)).unwrap();
        let norm = run_scenario(&s, &opts(Semantics::Prob(KernelFlavor::Norm), Assoc::Left)).unwrap();
        let mut o = opts(Semantics::Prob(KernelFlavor::Sub), Assoc::Right);
        o.normalize = true;
        let sub = run_scenario(&s, &o).unwrap();
        prop_assert_eq!(final_kernel(&norm), final_kernel(&sub));

        // Independent check: left fold of normalized composition.
        let mut acc = ks[0].clone();
        for k in &ks[1..] {
            acc = compose_norm(&acc, k).unwrap();
        }
        prop_assert_eq!(final_kernel(&norm).unwrap(), &acc);
    }

    #[test]
    fn category_semantics_ignore_bracketing(seed in any::<u64>(), len in 1usize..6) {
        let ks = random_chain(seed, KernelFlavor::Sub, len);
        let s = parse_scenario(&scenario_json(&ks)).unwrap();
        for sem in Semantics::ALL.into_iter().filter(|s| s.is_category()) {
            let l = run_scenario(&s, &opts(sem, Assoc::Left));
            let r = run_scenario(&s, &opts(sem, Assoc::Right));
            match (l, r) {
                (Ok(l), Ok(r)) => {
                    prop_assert_eq!(final_kernel(&l), final_kernel(&r));
                    prop_assert_eq!(final_relation(&l), final_relation(&r));
                }
                (Err(a), Err(b)) => prop_assert_eq!(a, b),
                (l, r) => prop_assert!(false, "{sem}: {l:?} vs {r:?}"),
            }
        }
    }

    #[test]
    fn text_rendering_is_stable(seed in any::<u64>()) {
        let ks = random_chain(seed, KernelFlavor::Sub, 3);
        let text = scenario_json(&ks);
        let o = opts(Semantics::Prob(KernelFlavor::Sub), Assoc::Left);
        prop_assert_eq!(
            run_text(&text, &o, Format::Json).unwrap(),
            run_text(&text, &o, Format::Json).unwrap()
        );
    }
}
