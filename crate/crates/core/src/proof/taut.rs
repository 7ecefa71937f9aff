use std::collections::HashMap;

use crate::formula::Formula;

use super::ProofError;

pub const MAX_TAUT_ATOMS: usize = 12;

/// Whether `f` is an instance of a propositional tautology.
///
/// Every proposition letter and every maximal `K`/`Kh` subformula becomes a
/// propositional variable (equal subformulas share one), then the result is
/// checked on all valuations.
pub fn is_tautology_instance(f: &Formula) -> Result<bool, ProofError> {
    let mut vars: HashMap<&Formula, usize> = HashMap::new();
    collect(f, &mut vars);
    if vars.len() > MAX_TAUT_ATOMS {
        return Err(ProofError::AtomBudget {
            found: vars.len(),
            limit: MAX_TAUT_ATOMS,
        });
    }
    let n = vars.len();
    Ok((0u32..1 << n).all(|bits| truth(f, &vars, bits)))
}

fn collect<'a>(f: &'a Formula, vars: &mut HashMap<&'a Formula, usize>) {
    match f {
        Formula::Top => {}
        Formula::Atom(_) | Formula::K(..) | Formula::Kh(..) => {
            let next = vars.len();
            vars.entry(f).or_insert(next);
        }
        Formula::Not(g) => collect(g, vars),
        Formula::And(l, r) => {
            collect(l, vars);
            collect(r, vars);
        }
    }
}

fn truth(f: &Formula, vars: &HashMap<&Formula, usize>, bits: u32) -> bool {
    match f {
        Formula::Top => true,
        Formula::Atom(_) | Formula::K(..) | Formula::Kh(..) => bits >> vars[f] & 1 == 1,
        Formula::Not(g) => !truth(g, vars, bits),
        Formula::And(l, r) => truth(l, vars, bits) && truth(r, vars, bits),
    }
}
