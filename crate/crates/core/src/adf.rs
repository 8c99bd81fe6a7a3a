//! Consensus-operator semantics for may-must frameworks.
//!
//! `gamma` relabels every argument by the consensus of the two-valued
//! completions of the input: `in` (or `out`) when every completion designates
//! exactly that label, `undec` otherwise.

use std::collections::HashSet;

use crate::designation::{designated_total, ConditionProfile, AttackerCounts, DesignatedSet};
use crate::error::{Error, Result};
use crate::framework::{Framework, Label, Labelling};
use crate::semantics::{
    enumerate_labellings, maximal_elements, Engine, SemanticsName, SemanticsResult,
};

/// Every `in`/`out` labelling above `l`: each `undec` expands to both.
pub fn two_val(l: &Labelling) -> Vec<Labelling> {
    let undecided: Vec<usize> = l
        .iter()
        .filter(|&(_, lab)| lab == Label::Undec)
        .map(|(a, _)| a)
        .collect();
    let mut out = Vec::with_capacity(1 << undecided.len());
    for mask in 0..(1u64 << undecided.len()) {
        let mut c = l.clone();
        for (bit, &a) in undecided.iter().enumerate() {
            // high bit first so the output comes out in canonical order
            let shift = undecided.len() - 1 - bit;
            c.set(a, if mask >> shift & 1 == 0 { Label::In } else { Label::Out });
        }
        out.push(c);
    }
    out
}

fn consensus(sets: impl IntoIterator<Item = DesignatedSet>) -> Label {
    let mut agreed: Option<Label> = None;
    for s in sets {
        match (s.only(), agreed) {
            (Some(l @ (Label::In | Label::Out)), None) => agreed = Some(l),
            (Some(l), Some(prev)) if l == prev => {}
            _ => return Label::Undec,
        }
    }
    agreed.unwrap_or(Label::Undec)
}

/// One step of the consensus operator on a total labelling.
///
/// Designation for `a` only reads `a`'s attackers, so the completions are
/// enumerated over undecided attackers alone.
pub fn gamma(f: &Framework, l: &Labelling) -> Result<Labelling> {
    let labels = total_labels(f, l)?;
    Ok(gamma_total(f, &labels))
}

fn total_labels(f: &Framework, l: &Labelling) -> Result<Vec<Label>> {
    l.to_total(f.len()).ok_or_else(|| {
        let missing = (0..f.len()).find(|&a| !l.contains(a)).unwrap_or(0);
        match f.names().get(missing) {
            Some(name) => Error::UndefinedArgumentLabel(name.clone()),
            None => Error::DomainMismatch,
        }
    })
}

fn gamma_total(f: &Framework, labels: &[Label]) -> Labelling {
    Labelling::total((0..f.len()).map(|a| {
        let mut base = AttackerCounts::default();
        let mut free = 0u32;
        for &x in f.attackers(a) {
            match labels[x] {
                Label::In => base.n_in += 1,
                Label::Out => base.n_out += 1,
                Label::Undec => free += 1,
            }
        }
        // completions differ only in how many free attackers turn out
        let tuple = f.tuple(a);
        consensus((0..=free).map(|outs| {
            let counts = AttackerCounts {
                n_out: base.n_out + outs,
                n_in: base.n_in + (free - outs),
            };
            ConditionProfile::from_counts(tuple, counts).designated()
        }))
    }))
}

/// The operator evaluated straight from its definition, through the full set
/// of two-valued completions.
pub fn gamma_by_completions(f: &Framework, l: &Labelling) -> Result<Labelling> {
    total_labels(f, l)?;
    let completions: Vec<Vec<Label>> = two_val(l)
        .iter()
        .map(|c| c.to_total(f.len()).unwrap())
        .collect();
    Ok(Labelling::total((0..f.len()).map(|a| {
        consensus(completions.iter().map(|c| designated_total(f, c, a)))
    })))
}

/// Every fixpoint of `gamma`, by exhaustive scan.
pub fn adf_complete(f: &Framework) -> SemanticsResult {
    let fixpoints = enumerate_labellings(f)
        .filter(|l| {
            let labels = l.to_total(f.len()).unwrap();
            gamma_total(f, &labels) == *l
        })
        .collect();
    SemanticsResult::new(SemanticsName::AdfComplete, Engine::Brute, fixpoints)
}

pub fn adf_preferred(f: &Framework) -> SemanticsResult {
    preferred_from(&adf_complete(f))
}

pub(crate) fn preferred_from(complete: &SemanticsResult) -> SemanticsResult {
    SemanticsResult::new(
        SemanticsName::AdfPreferred,
        complete.engine,
        maximal_elements(&complete.labellings),
    )
}

/// Iterates `gamma` from the all-`undec` labelling. Fails with
/// `NonConvergent` if a labelling repeats before a fixpoint is reached or the
/// step budget of `3^n` runs out.
pub fn adf_grounded(f: &Framework) -> Result<SemanticsResult> {
    let n = f.len();
    let budget = 3u64.checked_pow(n as u32).unwrap_or(u64::MAX);
    let mut current = vec![Label::Undec; n];
    let mut seen = HashSet::new();
    let mut steps = 0u64;
    loop {
        let next = gamma_total(f, &current);
        let next_labels = next.to_total(n).unwrap();
        if next_labels == current {
            return Ok(SemanticsResult::new(
                SemanticsName::AdfGrounded,
                Engine::Brute,
                vec![next],
            ));
        }
        steps += 1;
        if !seen.insert(current) || steps >= budget {
            return Err(Error::NonConvergent { steps });
        }
        current = next_labels;
    }
}
