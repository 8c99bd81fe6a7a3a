//! Exhaustive semantics: exact, pre-maximally proper, maximally proper and the
//! maxi.{complete, preferred, stable, grounded} family.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::designation::proper_total;
use crate::error::{Error, Result};
use crate::framework::{labelling_lt, labelling_meet, Framework, Label, Labelling};
use crate::scc::sccs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemanticsName {
    Exact,
    PreMaximallyProper,
    MaxiComplete,
    MaxiPreferred,
    MaxiStable,
    MaxiGrounded,
    AdfComplete,
    AdfPreferred,
    AdfGrounded,
    DungComplete,
    DungPreferred,
    DungStable,
    DungGrounded,
}

impl SemanticsName {
    /// Semantics selectable from the command line.
    pub const SOLVABLE: [SemanticsName; 8] = [
        SemanticsName::Exact,
        SemanticsName::MaxiComplete,
        SemanticsName::MaxiPreferred,
        SemanticsName::MaxiStable,
        SemanticsName::MaxiGrounded,
        SemanticsName::AdfComplete,
        SemanticsName::AdfPreferred,
        SemanticsName::AdfGrounded,
    ];

    pub fn as_str(self) -> &'static str {
        use SemanticsName::*;
        match self {
            Exact => "exact",
            PreMaximallyProper => "pre-maximally-proper",
            MaxiComplete => "maxi-complete",
            MaxiPreferred => "maxi-preferred",
            MaxiStable => "maxi-stable",
            MaxiGrounded => "maxi-grounded",
            AdfComplete => "adf-complete",
            AdfPreferred => "adf-preferred",
            AdfGrounded => "adf-grounded",
            DungComplete => "dung-complete",
            DungPreferred => "dung-preferred",
            DungStable => "dung-stable",
            DungGrounded => "dung-grounded",
        }
    }
}

impl fmt::Display for SemanticsName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SemanticsName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SemanticsName::SOLVABLE
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| format!("unknown semantics `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Brute,
    Scc,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Brute => "brute",
            Engine::Scc => "scc",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the labelling space is walked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Search {
    /// Every one of the `3^n` labellings, in canonical order.
    Exhaustive,
    /// Depth-first in SCC order, cutting a branch as soon as an argument and
    /// all its attackers are labelled and the argument fails the filter.
    #[default]
    Pruned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticsResult {
    pub semantics: SemanticsName,
    pub engine: Engine,
    /// Total labellings, sorted and duplicate-free.
    pub labellings: Vec<Labelling>,
    /// Common proper-argument set, for maximally proper results.
    pub proper_set: Option<BTreeSet<usize>>,
}

impl SemanticsResult {
    pub fn new(semantics: SemanticsName, engine: Engine, mut labellings: Vec<Labelling>) -> Self {
        labellings.sort();
        labellings.dedup();
        SemanticsResult {
            semantics,
            engine,
            labellings,
            proper_set: None,
        }
    }

    pub fn len(&self) -> usize {
        self.labellings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labellings.is_empty()
    }

    pub fn contains(&self, l: &Labelling) -> bool {
        self.labellings.binary_search(l).is_ok()
    }

    pub fn set(&self) -> BTreeSet<Labelling> {
        self.labellings.iter().cloned().collect()
    }

    fn renamed(mut self, semantics: SemanticsName) -> Self {
        self.semantics = semantics;
        self
    }
}

/// Canonical-order odometer over the `3^n` total labellings.
pub struct LabellingStream {
    current: Option<Vec<Label>>,
}

impl Iterator for LabellingStream {
    type Item = Labelling;

    fn next(&mut self) -> Option<Labelling> {
        let cur = self.current.as_mut()?;
        let out = Labelling::total(cur.iter().copied());
        // advance, last argument fastest
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            match cur[i] {
                Label::In => {
                    cur[i] = Label::Out;
                    break;
                }
                Label::Out => {
                    cur[i] = Label::Undec;
                    break;
                }
                Label::Undec => cur[i] = Label::In,
            }
        }
        Some(out)
    }
}

pub fn enumerate_labellings(f: &Framework) -> LabellingStream {
    LabellingStream {
        current: Some(vec![Label::In; f.len()]),
    }
}

/// Arguments whose label is proper under the total labelling `l`.
pub fn proper_set(f: &Framework, l: &Labelling) -> BTreeSet<usize> {
    let labels = l
        .to_total(f.len())
        .expect("proper_set needs a total labelling");
    (0..f.len()).filter(|&a| proper_total(f, &labels, a)).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Filter {
    /// every argument proper
    Exact,
    /// every argument proper or undec
    PreMaximal,
}

impl Filter {
    fn accepts(self, f: &Framework, labels: &[Label], a: usize) -> bool {
        match self {
            Filter::Exact => proper_total(f, labels, a),
            Filter::PreMaximal => labels[a] == Label::Undec || proper_total(f, labels, a),
        }
    }
}

fn collect(f: &Framework, filter: Filter, search: Search) -> Vec<Labelling> {
    match search {
        Search::Exhaustive => enumerate_labellings(f)
            .filter(|l| {
                let labels = l.to_total(f.len()).unwrap();
                (0..f.len()).all(|a| filter.accepts(f, &labels, a))
            })
            .collect(),
        Search::Pruned => pruned(f, filter),
    }
}

fn pruned(f: &Framework, filter: Filter) -> Vec<Labelling> {
    let n = f.len();
    let order = sccs(f).topological_arguments();
    let mut position = vec![0; n];
    for (k, &a) in order.iter().enumerate() {
        position[a] = k;
    }
    // checks[k]: arguments decidable once the first k+1 positions are set
    let mut checks = vec![Vec::new(); n];
    for a in 0..n {
        let ready = f
            .attackers(a)
            .iter()
            .map(|&x| position[x])
            .chain(std::iter::once(position[a]))
            .max()
            .unwrap();
        checks[ready].push(a);
    }

    let mut out = Vec::new();
    let mut labels = vec![Label::Undec; n];
    fn go(
        k: usize,
        f: &Framework,
        filter: Filter,
        order: &[usize],
        checks: &[Vec<usize>],
        labels: &mut Vec<Label>,
        out: &mut Vec<Labelling>,
    ) {
        if k == order.len() {
            out.push(Labelling::total(labels.iter().copied()));
            return;
        }
        for lab in Label::ALL {
            labels[order[k]] = lab;
            if checks[k].iter().all(|&a| filter.accepts(f, labels, a)) {
                go(k + 1, f, filter, order, checks, labels, out);
            }
        }
    }
    go(0, f, filter, &order, &checks, &mut labels, &mut out);
    out
}

pub fn exact_semantics(f: &Framework) -> SemanticsResult {
    exact_with(f, Search::Exhaustive)
}

pub fn exact_with(f: &Framework, search: Search) -> SemanticsResult {
    SemanticsResult::new(SemanticsName::Exact, Engine::Brute, collect(f, Filter::Exact, search))
}

pub fn pre_maximally_proper(f: &Framework) -> SemanticsResult {
    pre_maximally_proper_with(f, Search::Exhaustive)
}

pub fn pre_maximally_proper_with(f: &Framework, search: Search) -> SemanticsResult {
    SemanticsResult::new(
        SemanticsName::PreMaximallyProper,
        Engine::Brute,
        collect(f, Filter::PreMaximal, search),
    )
}

/// Pre-maximally proper labellings whose proper set contains the proper set
/// of every other pre-maximally proper labelling.
pub fn maximally_proper_semantics(f: &Framework) -> Result<SemanticsResult> {
    maximally_proper_with(f, Search::Exhaustive)
}

pub fn maximally_proper_with(f: &Framework, search: Search) -> Result<SemanticsResult> {
    let pre = collect(f, Filter::PreMaximal, search);
    let with_sets: Vec<(Labelling, BTreeSet<usize>)> = pre
        .into_iter()
        .map(|l| {
            let p = proper_set(f, &l);
            (l, p)
        })
        .collect();
    let union: BTreeSet<usize> = with_sets.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    let kept: Vec<Labelling> = with_sets
        .into_iter()
        .filter(|(_, p)| *p == union)
        .map(|(l, _)| l)
        .collect();
    if kept.is_empty() {
        return Err(Error::NoMaximallyProper);
    }
    let mut result = SemanticsResult::new(SemanticsName::MaxiComplete, Engine::Brute, kept);
    result.proper_set = Some(union);
    Ok(result)
}

/// `≼`-maximal members.
pub fn maximal_elements(ls: &[Labelling]) -> Vec<Labelling> {
    ls.iter()
        .filter(|l| !ls.iter().any(|m| labelling_lt(l, m).unwrap_or(false)))
        .cloned()
        .collect()
}

pub fn undec_free(ls: &[Labelling]) -> Vec<Labelling> {
    ls.iter().filter(|l| !l.has_undec()).cloned().collect()
}

/// Preferred variant of a complete-style result.
pub fn preferred_of(complete: &SemanticsResult, name: SemanticsName) -> SemanticsResult {
    SemanticsResult::new(name, complete.engine, maximal_elements(&complete.labellings))
}

pub fn stable_of(complete: &SemanticsResult, name: SemanticsName) -> SemanticsResult {
    SemanticsResult::new(name, complete.engine, undec_free(&complete.labellings))
}

pub fn grounded_of(complete: &SemanticsResult, name: SemanticsName) -> Result<SemanticsResult> {
    let meet = labelling_meet(&complete.labellings)?;
    Ok(SemanticsResult::new(name, complete.engine, vec![meet]))
}

pub fn maxi_preferred(f: &Framework) -> Result<SemanticsResult> {
    let complete = maximally_proper_semantics(f)?;
    Ok(preferred_of(&complete, SemanticsName::MaxiPreferred))
}

/// Empty when no labelling qualifies, including when no maximally proper
/// labelling exists.
pub fn maxi_stable(f: &Framework) -> SemanticsResult {
    match maximally_proper_semantics(f) {
        Ok(complete) => stable_of(&complete, SemanticsName::MaxiStable),
        Err(_) => SemanticsResult::new(SemanticsName::MaxiStable, Engine::Brute, Vec::new()),
    }
}

pub fn maxi_grounded(f: &Framework) -> Result<SemanticsResult> {
    let complete = maximally_proper_semantics(f)?;
    grounded_of(&complete, SemanticsName::MaxiGrounded)
}

/// All four maxi semantics from one maximally proper computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxiFamily {
    pub complete: SemanticsResult,
    pub preferred: SemanticsResult,
    pub stable: SemanticsResult,
    pub grounded: SemanticsResult,
}

impl MaxiFamily {
    pub fn from_complete(complete: SemanticsResult) -> Result<Self> {
        let complete = complete.renamed(SemanticsName::MaxiComplete);
        Ok(MaxiFamily {
            preferred: preferred_of(&complete, SemanticsName::MaxiPreferred),
            stable: stable_of(&complete, SemanticsName::MaxiStable),
            grounded: grounded_of(&complete, SemanticsName::MaxiGrounded)?,
            complete,
        })
    }
}

pub fn maxi_family(f: &Framework, search: Search) -> Result<MaxiFamily> {
    MaxiFamily::from_complete(maximally_proper_with(f, search)?)
}
