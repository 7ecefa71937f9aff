mod common;

use common::data;
use dkh::harness::{random_model, GenParams, Span, Template};
use dkh::proof::{check_derivation, match_schema, Axiom, Derivation, Justification, ProofError};
use dkh::{eval, parse_formula};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn monokh() -> String {
    std::fs::read_to_string(data("monokh.prf")).unwrap()
}

fn verdicts(text: &str) -> Vec<(usize, bool)> {
    let d = Derivation::parse(text).unwrap();
    check_derivation(&d)
        .unwrap()
        .into_iter()
        .map(|v| (v.index, v.ok))
        .collect()
}

/// Every variant of `formula` with one group index or one connective changed.
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
            b'&' => {
                swap(1, "|");
                swap(1, "->");
            }
            b'|' => {
                swap(1, "&");
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

#[test]
fn monokh_derivation_checks() {
    let v = verdicts(&monokh());
    assert_eq!(v.len(), 6);
    assert!(v.iter().all(|&(_, ok)| ok), "{v:?}");
}

#[test]
fn every_single_token_mutation_fails_at_its_line() {
    let text = monokh();
    let lines: Vec<&str> = text.lines().collect();
    let mut tried = 0;
    for (n, line) in lines.iter().enumerate() {
        let Some((head, rest)) = line.split_once(':') else {
            continue;
        };
        if line.starts_with('#') {
            continue;
        }
        let index: usize = head.trim().parse().unwrap();
        let (formula, just) = rest.split_once(';').unwrap();
        for mutated in mutations(formula) {
            let mut copy = lines.clone();
            let new_line = format!("{head}:{mutated};{just}");
            copy[n] = &new_line;
            let result = verdicts(&copy.join("\n"));
            let ok = result.iter().find(|(i, _)| *i == index).unwrap().1;
            assert!(!ok, "mutation still checks: {new_line}");
            tried += 1;
        }
    }
    assert!(tried >= 20, "only {tried} mutations");
}

#[test]
fn renaming_atoms_and_agents_keeps_derivation_valid() {
    let text = monokh();
    // rewrite formula text only, leaving justifications alone
    let rename = |from: &str, to: &str| -> String {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| {
                let (formula, just) = l.split_once(';').unwrap();
                format!("{};{just}", formula.replace(from, to))
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    for renamed in [rename("p", "r"), rename("{0}", "{2}"), rename("{0}", "{0,1}")] {
        let v = verdicts(&renamed);
        assert!(v.iter().all(|&(_, ok)| ok), "{renamed}\n{v:?}");
    }
}

#[test]
fn justification_tokens() {
    assert_eq!("4".parse::<Justification>().unwrap(), Justification::Axiom(Axiom::Four));
    assert_eq!(
        "Five".parse::<Justification>().unwrap(),
        Justification::Axiom(Axiom::Five)
    );
    assert_eq!("MP 2 3".parse::<Justification>().unwrap(), Justification::Mp(2, 3));
    assert!("MP 2".parse::<Justification>().is_err());
    assert!("Cooperation".parse::<Justification>().is_err());
}

#[test]
fn structural_errors() {
    let forward = "1: p ; MP 2 3\n2: p -> p ; TAUT\n3: p -> p ; TAUT";
    assert!(matches!(
        check_derivation(&Derivation::parse(forward).unwrap()),
        Err(ProofError::ForwardReference { .. })
    ));
    let repeated = "1: p -> p ; TAUT\n1: p -> p ; TAUT";
    assert!(matches!(
        check_derivation(&Derivation::parse(repeated).unwrap()),
        Err(ProofError::BadIndex { .. })
    ));
    assert!(Derivation::parse("1: p -> ; TAUT").is_err());
    assert!(Derivation::parse("1 p -> p ; TAUT").is_err());
}

#[test]
fn side_conditions_are_enforced() {
    let ok = parse_formula("K{0} p -> K{0,1} p").unwrap();
    let bad = parse_formula("K{0,1} p -> K{0} p").unwrap();
    assert!(Axiom::AxKMono.matches(&ok));
    assert!(!Axiom::AxKMono.matches(&bad));
    assert!(!Axiom::AxKhMono.matches(&parse_formula("Kh{1} p -> Kh{0} p").unwrap()));
    assert!(!Axiom::AxEmpKhtoK.matches(&parse_formula("Kh{0} p -> K{0} p").unwrap()));
}

#[test]
fn schema_instances_are_recognised_and_valid() {
    let p = GenParams::default();
    let depth = Span::new(0, 2);
    for seed in 0..100 {
        let m = random_model(&p.clone().with_seed(seed));
        let props: Vec<String> = m.props().map(String::from).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for a in Axiom::ALL {
            let t = Template::axiom(a);
            let b = t.random_bindings(&mut rng, &props, m.agent_count(), &depth);
            assert!(t.side_conditions_hold(&b));
            let f = t.pattern.instantiate(&b).unwrap();
            assert!(match_schema(&f, Justification::Axiom(a)), "{a}: {f}");
            assert!(eval(&m, &f).unwrap().is_full(), "seed {seed}: {a} instance {f} fails");
        }
    }
}
