//! Checker for Hilbert-style derivations.
//!
//! A derivation is a numbered list of formulas, each justified by an axiom
//! schema, `TAUT`, modus ponens or necessitation for `K`. Derivations have
//! no hypotheses: every line must be a theorem.

mod taut;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::formula::Formula;
use crate::parser::{parse_formula, parse_template, ParseError};
use crate::template::Pattern;

pub use taut::{is_tautology_instance, MAX_TAUT_ATOMS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: malformed step: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unknown justification `{token}`")]
    UnknownJustification { line: usize, token: String },
    #[error("step {index}: indices must increase strictly from 1")]
    BadIndex { index: usize },
    #[error("step {index} refers to step {target}, which does not precede it")]
    ForwardReference { index: usize, target: usize },
    #[error("too many propositional atoms after abstraction: {found} (limit {limit})")]
    AtomBudget { found: usize, limit: usize },
}

/// Axiom schemas other than `TAUT`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    DistK,
    T,
    Four,
    Five,
    AxKMono,
    AxKhMono,
    AxKtoKh,
    AxEmpKhtoK,
    AxKhtoKKh,
    AxEmpMono,
    AxKhbot,
    AxKhtoKhK,
    AxKhKh,
}

impl Axiom {
    pub const ALL: [Axiom; 13] = [
        Axiom::DistK,
        Axiom::T,
        Axiom::Four,
        Axiom::Five,
        Axiom::AxKMono,
        Axiom::AxKhMono,
        Axiom::AxKtoKh,
        Axiom::AxEmpKhtoK,
        Axiom::AxKhtoKKh,
        Axiom::AxEmpMono,
        Axiom::AxKhbot,
        Axiom::AxKhtoKhK,
        Axiom::AxKhKh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::DistK => "DISTK",
            Axiom::T => "T",
            Axiom::Four => "4",
            Axiom::Five => "5",
            Axiom::AxKMono => "AxKMono",
            Axiom::AxKhMono => "AxKhMono",
            Axiom::AxKtoKh => "AxKtoKh",
            Axiom::AxEmpKhtoK => "AxEmpKhtoK",
            Axiom::AxKhtoKKh => "AxKhtoKKh",
            Axiom::AxEmpMono => "AxEmpMono",
            Axiom::AxKhbot => "AxKhbot",
            Axiom::AxKhtoKhK => "AxKhtoKhK",
            Axiom::AxKhKh => "AxKhKh",
        }
    }

    pub fn from_name(s: &str) -> Option<Axiom> {
        match s {
            "Four" => Some(Axiom::Four),
            "Five" => Some(Axiom::Five),
            _ => Axiom::ALL.into_iter().find(|a| a.name() == s),
        }
    }

    /// Surface form of the schema; `$G`, `$H` range over groups and
    /// `$phi`, `$psi` over formulas.
    pub fn template_text(self) -> &'static str {
        match self {
            Axiom::DistK => "K$G $phi & K$G($phi -> $psi) -> K$G $psi",
            Axiom::T => "K$G $phi -> $phi",
            Axiom::Four => "K$G $phi -> K$G K$G $phi",
            Axiom::Five => "~K$G $phi -> K$G ~K$G $phi",
            Axiom::AxKMono => "K$G $phi -> K$H $phi",
            Axiom::AxKhMono => "Kh$G $phi -> Kh$H $phi",
            Axiom::AxKtoKh => "K$G $phi -> Kh$G $phi",
            Axiom::AxEmpKhtoK => "Kh{} $phi -> K{} $phi",
            Axiom::AxKhtoKKh => "Kh$G $phi -> K$G Kh$G $phi",
            Axiom::AxEmpMono => "K{}($phi -> $psi) -> K{}(Kh$G $phi -> Kh$G $psi)",
            Axiom::AxKhbot => "Kh$G bot -> bot",
            Axiom::AxKhtoKhK => "Kh$G $phi -> Kh$G K$G $phi",
            Axiom::AxKhKh => "Kh$G Kh$G $phi -> Kh$G $phi",
        }
    }

    pub fn pattern(self) -> &'static Pattern {
        static PATTERNS: OnceLock<Vec<Pattern>> = OnceLock::new();
        let all = PATTERNS.get_or_init(|| {
            Axiom::ALL
                .iter()
                .map(|a| parse_template(a.template_text()).expect("built-in schemas parse"))
                .collect()
        });
        &all[self as usize]
    }

    /// Schemas whose instances need `$G ⊆ $H`.
    pub fn needs_subgroup(self) -> bool {
        matches!(self, Axiom::AxKMono | Axiom::AxKhMono)
    }

    /// Whether `f` is an instance of this schema, side conditions included.
    pub fn matches(self, f: &Formula) -> bool {
        match self.pattern().matches(f) {
            Some(b) if self.needs_subgroup() => b.groups["G"].is_subset(&b.groups["H"]),
            Some(_) => true,
            None => false,
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Justification {
    Taut,
    Axiom(Axiom),
    /// `MP i j`: line `i` is `phi`, line `j` is `phi -> psi`.
    Mp(usize, usize),
    Neck(usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Taut => write!(f, "TAUT"),
            Justification::Axiom(a) => write!(f, "{a}"),
            Justification::Mp(i, j) => write!(f, "MP {i} {j}"),
            Justification::Neck(i) => write!(f, "NECK {i}"),
        }
    }
}

impl FromStr for Justification {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let num = |w: &str| w.parse::<usize>().map_err(|_| format!("`{w}` is not a line number"));
        match words.as_slice() {
            ["TAUT"] => Ok(Justification::Taut),
            ["MP", i, j] => Ok(Justification::Mp(num(i)?, num(j)?)),
            ["NECK", i] => Ok(Justification::Neck(num(i)?)),
            [name] => Axiom::from_name(name)
                .map(Justification::Axiom)
                .ok_or_else(|| format!("unknown justification `{name}`")),
            _ => Err(format!("unknown justification `{s}`")),
        }
    }
}

/// Schema matching for axiom justifications (`TAUT` included); rules never
/// match on their own.
pub fn match_schema(f: &Formula, j: Justification) -> bool {
    match j {
        Justification::Taut => is_tautology_instance(f).unwrap_or(false),
        Justification::Axiom(a) => a.matches(f),
        Justification::Mp(..) | Justification::Neck(_) => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub index: usize,
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

impl Derivation {
    /// Reads `<index>: <formula> ; <justification>` lines. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Derivation, ProofError> {
        let mut steps = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let malformed = |message: &str| ProofError::Malformed {
                line,
                message: message.to_string(),
            };
            let (index, rest) = trimmed
                .split_once(':')
                .ok_or_else(|| malformed("expected `<index>: <formula> ; <justification>`"))?;
            let index = index
                .trim()
                .parse::<usize>()
                .map_err(|_| malformed("step index is not a number"))?;
            let (formula, just) = rest
                .rsplit_once(';')
                .ok_or_else(|| malformed("missing `;` before the justification"))?;
            let formula = parse_formula(formula).map_err(|source| ProofError::Parse { line, source })?;
            let justification = just.trim().parse().map_err(|_| ProofError::UnknownJustification {
                line,
                token: just.trim().to_string(),
            })?;
            steps.push(Step {
                index,
                formula,
                justification,
            });
        }
        Ok(Derivation { steps })
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{}: {} ; {}", s.index, s.formula, s.justification)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineVerdict {
    pub index: usize,
    pub ok: bool,
    pub reason: Option<String>,
}

/// Checks every step locally; a step's verdict never depends on whether
/// the steps it cites passed.
pub fn check_derivation(d: &Derivation) -> Result<Vec<LineVerdict>, ProofError> {
    let mut last = 0;
    for s in &d.steps {
        if s.index <= last {
            return Err(ProofError::BadIndex { index: s.index });
        }
        last = s.index;
    }
    let position = |index: usize, target: usize| {
        d.steps
            .iter()
            .position(|s| s.index == target)
            .filter(|_| target < index)
            .ok_or(ProofError::ForwardReference { index, target })
    };

    let mut out = Vec::with_capacity(d.steps.len());
    for s in &d.steps {
        let failure: Option<String> = match s.justification {
            Justification::Taut => match is_tautology_instance(&s.formula) {
                Ok(true) => None,
                Ok(false) => Some("not a propositional tautology instance".into()),
                Err(e) => Some(e.to_string()),
            },
            Justification::Axiom(a) => (!a.matches(&s.formula)).then(|| format!("not an instance of {a}")),
            Justification::Mp(i, j) => {
                let premise = &d.steps[position(s.index, i)?].formula;
                let implication = &d.steps[position(s.index, j)?].formula;
                match implication.as_implication() {
                    Some((l, r)) if l == premise && r == &s.formula => None,
                    _ => Some(format!("step {j} is not `step {i} -> this step`")),
                }
            }
            Justification::Neck(i) => {
                let premise = &d.steps[position(s.index, i)?].formula;
                match &s.formula {
                    Formula::K(_, inner) if inner.as_ref() == premise => None,
                    _ => Some(format!("not K_G applied to step {i}")),
                }
            }
        };
        out.push(LineVerdict {
            index: s.index,
            ok: failure.is_none(),
            reason: failure,
        });
    }
    Ok(out)
}
