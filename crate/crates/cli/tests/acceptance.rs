//! Acceptance checks, one PASS/FAIL line each. Run with
//! `cargo test -p dkh-cli --test acceptance`.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use dkh::harness::{random_formula, random_group, random_model, soundness_sweep, GenParams};
use dkh::proof::{check_derivation, Derivation};
use dkh::semantics::{kh_bruteforce_goal, kh_winning, OracleGuard};
use dkh::{eval, parse_formula, Formula, Group, Model, ModelDoc, StateId, StateSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock limit for the golden-example checks.
const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
/// Wall-clock limit for the 500-model sweep.
const SWEEP_LIMIT: Duration = Duration::from_secs(60);
const SWEEP_MODELS: usize = 500;
const SWEEP_INSTANCES: usize = 3;
const ORACLE_INSTANCES: usize = 300;
const EMPTY_GROUP_MODELS: u64 = 200;
const ROUND_TRIPS: usize = 1000;
/// Seed and budget of the frozen countermodels in `data/golden`.
const COUNTER_SEED: &str = "0";
const COUNTER_BUDGET: &str = "10000";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn dkh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn lines(o: &Output) -> Vec<String> {
    String::from_utf8_lossy(&o.stdout).lines().map(String::from).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

fn example4_closure() -> Outcome {
    let start = Instant::now();
    let ex4 = data("ex4.model.json");
    let canon: BTreeSet<String> = lines(&dkh(&["closure", "-m", &ex4, "-g", "0,1"])).into_iter().collect();
    let want: BTreeSet<String> = ["{d}", "{a}", "{b}", "{c}", "{a,c}", "{b,c}"].map(String::from).into();
    ensure(canon == want, || format!("canonical {canon:?}"))?;
    let nested: BTreeSet<String> = lines(&dkh(&["closure", "-m", &ex4, "-g", "0,1", "--nested"]))
        .into_iter()
        .collect();
    let want: BTreeSet<String> = ["d", "a", "b", "c", "<a,c>", "<b,c>"].map(String::from).into();
    ensure(nested == want, || format!("nested {nested:?}"))?;
    within(start, EXAMPLE_LIMIT)?;
    Ok("6 canonical and 6 nested actions".into())
}

fn example5_golden() -> Outcome {
    let start = Instant::now();
    let ex5 = data("ex5.model.json");
    for (f, want) in [("Kh{0,1}(~p & ~q)", "true"), ("Kh{0}~p", "false"), ("Kh{1}~q", "false")] {
        let out = lines(&dkh(&["check", "-m", &ex5, "-f", f, "-s", "s_pq"]));
        ensure(out == [want], || format!("{f}: {out:?}"))?;
    }
    let dir = std::env::temp_dir().join(format!("dkh-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let sigma = dir.join("ex5.strategy.json");
    let sigma = sigma.to_str().unwrap();
    let synth = dkh(&[
        "synth", "-m", &ex5, "-s", "s_pq", "-g", "0,1", "-f", "~p & ~q", "-o", sigma,
    ]);
    ensure(synth.status.success(), || "synth failed".into())?;
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(sigma).unwrap()).unwrap();
    let want = serde_json::json!({"group": [0, 1], "map": [{"class_rep": "s_pq", "action": ["a", "b"]}]});
    ensure(doc == want, || format!("strategy {doc}"))?;
    let v = lines(&dkh(&[
        "verify",
        "-m",
        &ex5,
        "-g",
        "0,1",
        "--strategy",
        sigma,
        "-s",
        "s_pq",
        "-f",
        "~p & ~q",
    ]));
    let _ = std::fs::remove_dir_all(&dir);
    ensure(v.contains(&"terminating: true".into()), || format!("{v:?}"))?;
    ensure(v.contains(&"leaves: [{t3}]".into()), || format!("{v:?}"))?;
    within(start, EXAMPLE_LIMIT)?;
    Ok("strategy {s_pq} -> {a,b}, sole leaf {t3}".into())
}

fn example3_golden() -> Outcome {
    let ex3 = data("ex3.model.json");
    for (f, want) in [
        ("Kh{0,1}(~p & ~q)", "true"),
        ("Kh{0}(~p & ~q)", "false"),
        ("Kh{1}(~p & ~q)", "false"),
    ] {
        let out = lines(&dkh(&["check", "-m", &ex3, "-f", f, "-s", "s_pq"]));
        ensure(out == [want], || format!("{f}: {out:?}"))?;
    }
    let synth =
        String::from_utf8(dkh(&["synth", "-m", &ex3, "-s", "s_pq", "-g", "0,1", "-f", "~p & ~q"]).stdout).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&synth).unwrap();
    ensure(doc["map"][0]["action"] == serde_json::json!(["a", "b"]), || {
        format!("strategy {doc}")
    })?;
    Ok("joint action {a,b}".into())
}

fn empty_group_modality() -> Outcome {
    let mut violations = 0;
    for i in 0..EMPTY_GROUP_MODELS {
        let m = random_model(&GenParams::default().with_seed(i));
        let mut rng = ChaCha8Rng::seed_from_u64(i);
        let props: Vec<String> = m.props().map(String::from).collect();
        let f = random_formula(&mut rng, &props, m.agent_count(), 2);
        let t = eval(&m, &f).map_err(|e| e.to_string())?;
        let want = if t.is_full() {
            t.clone()
        } else {
            StateSet::empty(m.state_count())
        };
        let k = eval(&m, &Formula::k(Group::empty(), f.clone())).map_err(|e| e.to_string())?;
        let kh = eval(&m, &Formula::kh(Group::empty(), f)).map_err(|e| e.to_string())?;
        violations += usize::from(k != want || kh != want);
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("{EMPTY_GROUP_MODELS} models, 0 violations"))
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let r = soundness_sweep(&GenParams::default().with_seed(2024), SWEEP_MODELS, SWEEP_INSTANCES)
        .map_err(|e| e.to_string())?;
    ensure(r.models_tested == SWEEP_MODELS, || {
        format!("{} models skipped", r.models_skipped)
    })?;
    ensure(r.passed(), || {
        format!("{} violations, first {:?}", r.violations.len(), r.violations[0])
    })?;
    within(start, SWEEP_LIMIT)?;
    Ok(format!(
        "{} models, {} instances, 0 violations in {:.1?}",
        r.models_tested,
        r.instances_tested,
        start.elapsed()
    ))
}

fn oracle_agreement() -> Outcome {
    let guard = OracleGuard::default();
    let (mut checked, mut disagree, mut seed) = (0, 0, 0u64);
    while checked < ORACLE_INSTANCES {
        seed += 1;
        let m = random_model(&GenParams::default().with_seed(seed ^ 0x5eed));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_group(&mut rng, m.agent_count());
        if !guard.admits(&m, &g) {
            continue;
        }
        let goal = StateSet::from_ids(m.state_count(), m.states().filter(|_| rng.gen_bool(0.5)));
        let s = StateId(rng.gen_range(0..m.state_count()));
        let fast = kh_winning(&m, &g, &goal).map_err(|e| e.to_string())?.wins_at(&m, s);
        let slow = kh_bruteforce_goal(&m, s, &g, &goal).map_err(|e| e.to_string())?;
        disagree += usize::from(fast != slow);
        checked += 1;
    }
    ensure(disagree == 0, || format!("{disagree} disagreements"))?;
    Ok(format!("{checked} instances, 0 disagreements"))
}

fn countermodels() -> Outcome {
    let mut found = Vec::new();
    for schema in ["coop", "khconj"] {
        let golden: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(data(&format!("golden/{schema}.json"))).unwrap()).unwrap();
        let m = Model::validate(&serde_json::from_value::<ModelDoc>(golden["model"].clone()).unwrap()).unwrap();
        let f = parse_formula(golden["instance"].as_str().unwrap()).unwrap();
        let s = m.state_id(golden["state"].as_str().unwrap()).unwrap();
        ensure(!eval(&m, &f).unwrap().contains(s), || {
            format!("{schema}: frozen instance holds")
        })?;

        let o = dkh(&[
            "counter",
            "--schema",
            schema,
            "--seed",
            COUNTER_SEED,
            "--budget",
            COUNTER_BUDGET,
        ]);
        ensure(o.status.success(), || format!("{schema}: none within {COUNTER_BUDGET}"))?;
        let fresh: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        ensure(fresh == golden, || {
            format!("{schema}: search no longer reproduces the frozen countermodel")
        })?;
        found.push(format!("{schema} at sample {}", golden["sample"]));
    }
    Ok(found.join(", "))
}

fn mutations(formula: &str) -> Vec<String> {
    let b = formula.as_bytes();
    let mut out = Vec::new();
    let mut in_group = false;
    let mut i = 0;
    while i < b.len() {
        let (head, tail) = formula.split_at(i);
        let mut swap = |len: usize, with: &str| out.push(format!("{head}{with}{}", &tail[len..]));
        match b[i] {
            b'{' => in_group = true,
            b'}' => in_group = false,
            b'0'..=b'9' if in_group => swap(1, if b[i] == b'0' { "1" } else { "0" }),
            b'-' if tail.starts_with("->") => {
                swap(2, "&");
                swap(2, "|");
                i += 1;
            }
            b'&' | b'|' => {
                swap(1, if b[i] == b'&' { "|" } else { "&" });
                swap(1, "->");
            }
            b'K' if tail.starts_with("Kh") => {
                swap(2, "K");
                i += 1;
            }
            b'K' => swap(1, "Kh"),
            _ => {}
        }
        i += 1;
    }
    out
}

fn proof_checker() -> Outcome {
    let path = data("monokh.prf");
    let o = dkh(&["prove", &path]);
    let out = lines(&o);
    ensure(o.status.success() && out.len() == 6, || format!("{out:?}"))?;

    let text = std::fs::read_to_string(&path).unwrap();
    let steps: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .collect();
    let mut tried = 0;
    for (n, line) in steps.iter().enumerate() {
        let (head, rest) = line.split_once(':').unwrap();
        let (formula, just) = rest.split_once(';').unwrap();
        let index: usize = head.trim().parse().unwrap();
        for mutated in mutations(formula) {
            let mut copy = steps.clone();
            let new_line = format!("{head}:{mutated};{just}");
            copy[n] = &new_line;
            let d = Derivation::parse(&copy.join("\n")).map_err(|e| format!("{new_line}: {e}"))?;
            let verdicts = check_derivation(&d).map_err(|e| e.to_string())?;
            let ok = verdicts.iter().any(|v| v.index == index && v.ok);
            ensure(!ok, || format!("mutation accepted: {new_line}"))?;
            tried += 1;
        }
    }
    Ok(format!("6 lines OK, {tried} mutations all rejected"))
}

fn round_trip() -> Outcome {
    let props: Vec<String> = ["p", "q", "r", "long_name"].map(String::from).into();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..ROUND_TRIPS {
        let depth = rng.gen_range(0..=5);
        let f = random_formula(&mut rng, &props, 4, depth);
        let printed = f.to_string();
        let back = parse_formula(&printed).map_err(|e| format!("{printed}: {e}"))?;
        ensure(back == f, || format!("{printed} reparsed as {back}"))?;
    }
    Ok(format!("{ROUND_TRIPS} formulas"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 closure of the four-action example", example4_closure),
        ("2 two-doctor example golden values", example5_golden),
        ("3 one-shot cure example golden values", example3_golden),
        ("4 empty group is the universal modality", empty_group_modality),
        ("5 soundness sweep", soundness),
        ("6 fixpoint agrees with brute force", oracle_agreement),
        ("7 countermodels to cooperation and Kh conjunction", countermodels),
        ("8 proof checker and mutations", proof_checker),
        ("9 parser round trip", round_trip),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
