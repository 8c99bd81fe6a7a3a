//! Differential checks: brute force against the SCC engine, the structural
//! invariants of the maxi family, the Dung correspondence on Dung-shaped
//! instances, and the consensus-operator fixpoints. Also the seeded fuzz
//! driver and its reproducer shrinker.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::adf::{adf_complete, adf_grounded, gamma, preferred_from};
use crate::dung::{dung_semantics, is_dung_instantiated, DungFramework};
use crate::error::{Error, Result};
use crate::framework::{labelling_leq, restrict, Fraction, Framework, Labelling, NuanceTuple};
use crate::generate::{generate_random, TupleMode};
use crate::io::serialize_mmaf;
use crate::scc::{bottom_up_maxi, bottom_up_trace};
use crate::semantics::{
    exact_with, maximally_proper_with, MaxiFamily, Search, SemanticsResult,
};
use crate::solver::ensure_brute_feasible;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSummary {
    pub arguments: usize,
    pub attacks: usize,
    pub dung: bool,
    pub max_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub instance: InstanceSummary,
    pub checks: Vec<CheckOutcome>,
    pub notes: Vec<String>,
    /// The first labelling that witnessed a failure.
    pub counterexample: Option<String>,
    /// The instance in `.mmaf` form; present whenever a check failed.
    pub reproducer: Option<String>,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.verdict)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instance": {
                "arguments": self.instance.arguments,
                "attacks": self.instance.attacks,
                "dung": self.instance.dung,
                "max_depth": self.instance.max_depth,
            },
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "verdict": c.verdict.as_str().to_lowercase(),
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "notes": self.notes,
            "counterexample": self.counterexample,
            "reproducer": self.reproducer,
        })
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = &self.instance;
        writeln!(
            f,
            "instance: {} arguments, {} attacks, max depth {}{}",
            i.arguments,
            i.attacks,
            i.max_depth,
            if i.dung { ", dung tuples" } else { "" }
        )?;
        for c in &self.checks {
            write!(f, "  {:<8} {}", c.verdict.as_str(), c.name)?;
            if !c.detail.is_empty() {
                write!(f, ": {}", c.detail)?;
            }
            writeln!(f)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        if let Some(c) = &self.counterexample {
            writeln!(f, "  counterexample: {c}")?;
        }
        if let Some(r) = &self.reproducer {
            writeln!(f, "  reproducer:")?;
            for line in r.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

struct Recorder<'a> {
    f: &'a Framework,
    checks: Vec<CheckOutcome>,
    counterexample: Option<String>,
}

impl Recorder<'_> {
    fn pass(&mut self, name: &'static str, detail: impl Into<String>) {
        self.push(name, Verdict::Pass, detail.into());
    }

    fn skip(&mut self, name: &'static str, detail: impl Into<String>) {
        self.push(name, Verdict::Skipped, detail.into());
    }

    fn fail(&mut self, name: &'static str, detail: impl Into<String>, witness: Option<&Labelling>) {
        if self.counterexample.is_none() {
            self.counterexample = witness.map(|l| format!("{name}: {}", self.f.show(l)));
        }
        self.push(name, Verdict::Fail, detail.into());
    }

    fn push(&mut self, name: &'static str, verdict: Verdict, detail: String) {
        self.checks.push(CheckOutcome {
            name,
            verdict,
            detail,
        });
    }

    /// Set equality, reporting the first labelling in the symmetric
    /// difference.
    fn same(&mut self, name: &'static str, left: (&str, &[Labelling]), right: (&str, &[Labelling])) {
        let l: BTreeSet<&Labelling> = left.1.iter().collect();
        let r: BTreeSet<&Labelling> = right.1.iter().collect();
        if l == r {
            self.pass(name, format!("{} labelling(s)", l.len()));
            return;
        }
        let witness = l.symmetric_difference(&r).next().copied();
        let side = witness.map(|w| if l.contains(w) { left.0 } else { right.0 });
        self.fail(
            name,
            format!(
                "{} has {}, {} has {}; first difference only in {}",
                left.0,
                l.len(),
                right.0,
                r.len(),
                side.unwrap_or("?")
            ),
            witness,
        );
    }
}

fn outcome(r: &Result<SemanticsResult>) -> String {
    match r {
        Ok(r) => format!("{} labelling(s)", r.len()),
        Err(e) => e.to_string(),
    }
}

/// Runs every applicable check on one instance. Refuses frameworks above the
/// brute-force bound.
pub fn check_instance(f: &Framework) -> Result<DiffReport> {
    ensure_brute_feasible(f)?;
    let dung = !f.is_empty() && is_dung_instantiated(f);
    let trace = bottom_up_trace(f, Search::Pruned);
    let mut rec = Recorder {
        f,
        checks: Vec::new(),
        counterexample: None,
    };
    let mut notes = Vec::new();

    let exact = exact_with(f, Search::Exhaustive);
    let maxi = maximally_proper_with(f, Search::Exhaustive);
    let scc = bottom_up_maxi(f);

    // engines
    match (&maxi, &scc) {
        (Ok(b), Ok(s)) => rec.same("engines.maxi", ("brute", &b.labellings), ("scc", &s.labellings)),
        (Err(a), Err(b)) if a == b => rec.pass("engines.maxi", format!("both report: {a}")),
        _ => rec.fail(
            "engines.maxi",
            format!("brute: {}; scc: {}", outcome(&maxi), outcome(&scc)),
            None,
        ),
    }
    match (&maxi, &trace) {
        (Ok(b), Ok(t)) => {
            let mut bad = None;
            for (depth, bundle) in t.info.bundles.iter().enumerate() {
                let from_brute: BTreeSet<Labelling> =
                    b.labellings.iter().map(|l| restrict(l, bundle)).collect();
                if from_brute != t.per_depth[depth] {
                    let w = from_brute
                        .symmetric_difference(&t.per_depth[depth])
                        .next()
                        .cloned();
                    bad = Some((depth, from_brute.len(), t.per_depth[depth].len(), w));
                    break;
                }
            }
            match bad {
                None => rec.pass("bottom-up.per-depth", format!("{} depth(s)", t.info.bundles.len())),
                Some((d, nb, ns, w)) => rec.fail(
                    "bottom-up.per-depth",
                    format!("depth {d}: brute restricts to {nb} labelling(s), bottom-up yields {ns}"),
                    w.as_ref(),
                ),
            }
        }
        (Err(_), _) => rec.skip("bottom-up.per-depth", "no brute-force maximally proper set"),
        (Ok(_), Err(e)) => rec.fail("bottom-up.per-depth", format!("bottom-up: {e}"), None),
    }
    let pruned_maxi = maximally_proper_with(f, Search::Pruned);
    let pruned_exact = exact_with(f, Search::Pruned);
    if pruned_exact.labellings != exact.labellings {
        rec.same(
            "search.pruned",
            ("exhaustive exact", &exact.labellings),
            ("pruned exact", &pruned_exact.labellings),
        );
    } else {
        match (&maxi, &pruned_maxi) {
            (Ok(a), Ok(b)) => rec.same(
                "search.pruned",
                ("exhaustive maxi", &a.labellings),
                ("pruned maxi", &b.labellings),
            ),
            (Err(a), Err(b)) if a == b => rec.pass("search.pruned", "both report no maximum"),
            _ => rec.fail(
                "search.pruned",
                format!("exhaustive: {}; pruned: {}", outcome(&maxi), outcome(&pruned_maxi)),
                None,
            ),
        }
    }

    // conservation and existence
    let maxi_ls: &[Labelling] = maxi.as_ref().map(|r| r.labellings.as_slice()).unwrap_or(&[]);
    match exact.labellings.iter().find(|l| !maxi_ls.contains(l)) {
        None => rec.pass("conservation.exact-subset-maxi", format!("{} exact", exact.len())),
        Some(l) => rec.fail("conservation.exact-subset-maxi", "exact labelling not maximally proper", Some(l)),
    }
    if exact.is_empty() {
        rec.skip("conservation.exact-equals-maxi", "no exact labelling");
    } else {
        rec.same("conservation.exact-equals-maxi", ("exact", &exact.labellings), ("maxi", maxi_ls));
    }
    match &maxi {
        Ok(m) => rec.pass("existence.maxi-nonempty", format!("{} labelling(s)", m.len())),
        Err(e) => {
            let union = crate::semantics::pre_maximally_proper(f)
                .labellings
                .iter()
                .flat_map(|l| crate::semantics::proper_set(f, l))
                .collect::<BTreeSet<_>>();
            rec.fail(
                "existence.maxi-nonempty",
                format!(
                    "{e}; union of proper sets {{{}}} is reached by no labelling",
                    union.iter().map(|&a| f.name(a)).collect::<Vec<_>>().join(", ")
                ),
                None,
            )
        }
    }

    // subsumption and the common proper set
    let family = maxi.clone().and_then(MaxiFamily::from_complete);
    match &family {
        Ok(fam) => {
            match fam.preferred.labellings.iter().find(|l| !fam.complete.contains(l)) {
                None => rec.pass("maxi.preferred-subset", format!("{} preferred", fam.preferred.len())),
                Some(l) => rec.fail("maxi.preferred-subset", "preferred outside complete", Some(l)),
            }
            let undec_free_pref: Vec<Labelling> = fam
                .preferred
                .labellings
                .iter()
                .filter(|l| !l.has_undec())
                .cloned()
                .collect();
            rec.same(
                "maxi.stable-eq",
                ("maxi.stable", &fam.stable.labellings),
                ("undec-free preferred", &undec_free_pref),
            );
            let sets: BTreeSet<BTreeSet<usize>> = fam
                .complete
                .labellings
                .iter()
                .map(|l| crate::semantics::proper_set(f, l))
                .collect();
            if sets.len() <= 1 {
                rec.pass("maxi.common-proper-set", "");
            } else {
                rec.fail("maxi.common-proper-set", format!("{} distinct proper sets", sets.len()), None);
            }
            if !fam.complete.contains(&fam.grounded.labellings[0]) {
                notes.push(format!(
                    "maxi.grounded {} is not maximally proper",
                    f.show(&fam.grounded.labellings[0])
                ));
            }
        }
        Err(_) => {
            for name in ["maxi.preferred-subset", "maxi.stable-eq", "maxi.common-proper-set"] {
                rec.skip(name, "no maximally proper labelling");
            }
        }
    }

    // Dung correspondence
    let dung_checks = [
        "dung.complete",
        "dung.preferred",
        "dung.stable",
        "dung.grounded",
        "dung.exact",
    ];
    if dung {
        let oracle = dung_semantics(&DungFramework::from_framework(f));
        match &family {
            Ok(fam) => {
                rec.same(dung_checks[0], ("maxi", &fam.complete.labellings), ("oracle", &oracle.complete.labellings));
                rec.same(dung_checks[1], ("maxi", &fam.preferred.labellings), ("oracle", &oracle.preferred.labellings));
                rec.same(dung_checks[2], ("maxi", &fam.stable.labellings), ("oracle", &oracle.stable.labellings));
                rec.same(dung_checks[3], ("maxi", &fam.grounded.labellings), ("oracle", &oracle.grounded.labellings));
                rec.same(dung_checks[4], ("maxi", &fam.complete.labellings), ("exact", &exact.labellings));
            }
            Err(e) => {
                for name in dung_checks {
                    rec.fail(name, format!("maxi: {e}"), None);
                }
            }
        }
    } else {
        for name in dung_checks {
            rec.skip(name, "tuples are not Dung-shaped");
        }
    }

    // consensus operator
    let complete = adf_complete(f);
    match adf_grounded(f) {
        Ok(g) => {
            let g = &g.labellings[0];
            match gamma(f, g) {
                Ok(next) if next == *g => rec.pass("adf.grounded-fixpoint", f.show(g)),
                _ => rec.fail("adf.grounded-fixpoint", "iterate is not a fixpoint", Some(g)),
            }
            let above = complete
                .labellings
                .iter()
                .find(|l| !labelling_leq(g, l).unwrap_or(false));
            match (complete.contains(g), above) {
                (true, None) => rec.pass("adf.grounded-least", format!("{} fixpoint(s)", complete.len())),
                (false, _) => rec.fail("adf.grounded-least", "iterate missing from the scan", Some(g)),
                (true, Some(l)) => rec.fail("adf.grounded-least", "a fixpoint is not above the iterate", Some(l)),
            }
        }
        Err(e) => {
            rec.fail("adf.grounded-fixpoint", e.to_string(), None);
            rec.skip("adf.grounded-least", "no iterate");
        }
    }
    let preferred = preferred_from(&complete);
    match preferred.labellings.iter().find(|l| !complete.contains(l)) {
        None => rec.pass("adf.preferred-subset", format!("{} preferred", preferred.len())),
        Some(l) => rec.fail("adf.preferred-subset", "preferred outside complete", Some(l)),
    }

    if exact.is_empty() {
        notes.push("exact = ∅".into());
    }
    if exact.labellings.iter().all(|l| !complete.contains(l)) {
        notes.push("exact ∩ adf.complete = ∅".into());
    }
    if let Ok(m) = &maxi {
        if m.len() <= 4 {
            let shown: Vec<String> = m.labellings.iter().map(|l| f.show(l)).collect();
            notes.push(format!("maxi = {{{}}}", shown.join(", ")));
        }
    }

    let max_depth = trace.as_ref().map(|t| t.info.max_depth).unwrap_or(0);
    let failed = rec.checks.iter().any(|c| c.verdict == Verdict::Fail);
    Ok(DiffReport {
        instance: InstanceSummary {
            arguments: f.len(),
            attacks: f.attack_count(),
            dung,
            max_depth,
        },
        checks: rec.checks,
        notes,
        counterexample: rec.counterexample,
        reproducer: failed.then(|| serialize_mmaf(f)),
    })
}

fn failing_names(f: &Framework) -> BTreeSet<&'static str> {
    match check_instance(f) {
        Ok(r) => r.failures().map(|c| c.name).collect(),
        Err(_) => BTreeSet::new(),
    }
}

fn with_dung_tuples(f: &Framework) -> Framework {
    let tuples = (0..f.len())
        .map(|a| NuanceTuple::dung(f.in_degree(a) as u32))
        .collect();
    f.with_tuples(tuples).expect("dung tuples are valid")
}

fn without_argument(f: &Framework, drop: usize) -> Framework {
    let keep: Vec<usize> = (0..f.len()).filter(|&a| a != drop).collect();
    let new_index = |a: usize| if a > drop { a - 1 } else { a };
    Framework::from_parts(
        keep.iter().map(|&a| f.name(a).to_string()).collect(),
        keep.iter().map(|&a| f.tuple(a)).collect(),
        f.attacks()
            .filter(|&(s, t)| s != drop && t != drop)
            .map(|(s, t)| (new_index(s), new_index(t))),
    )
}

fn without_attack(f: &Framework, edge: (usize, usize)) -> Framework {
    Framework::from_parts(
        f.names().to_vec(),
        f.tuples().to_vec(),
        f.attacks().filter(|&e| e != edge),
    )
}

fn smaller_tuples(f: &Framework) -> Vec<Framework> {
    let mut out = Vec::new();
    for a in 0..f.len() {
        let t = f.tuple(a);
        let mut cands = Vec::new();
        let fields = [t.acc_may, t.acc_must, t.rej_may, t.rej_must];
        for i in 0..4 {
            if fields[i] > 0 {
                let mut g = fields;
                g[i] -= 1;
                cands.push(NuanceTuple::new(g[0], g[1], g[2], g[3]));
            }
        }
        for c in cands.into_iter().filter(NuanceTuple::is_valid) {
            let mut ts = f.tuples().to_vec();
            ts[a] = c;
            out.push(f.with_tuples(ts).expect("validated tuple"));
        }
    }
    out
}

/// Greedily removes arguments and attacks and lowers thresholds while `check`
/// keeps failing. Dung-shaped instances stay Dung-shaped.
pub fn shrink(f: &Framework, check: &str) -> Framework {
    let dung = is_dung_instantiated(f);
    let still_fails = |g: &Framework| failing_names(g).contains(check);
    let mut current = f.clone();
    loop {
        let mut candidates: Vec<Framework> = (0..current.len())
            .map(|a| without_argument(&current, a))
            .chain(current.attacks().map(|e| without_attack(&current, e)))
            .collect();
        if dung {
            candidates = candidates.iter().map(with_dung_tuples).collect();
        } else {
            candidates.extend(smaller_tuples(&current));
        }
        match candidates.into_iter().find(|g| still_fails(g)) {
            Some(g) => current = g,
            None => return current,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub count: usize,
    /// Instances have between 1 and `max_args` arguments.
    pub max_args: usize,
    pub seed: u64,
    pub edge_prob: Fraction,
    pub tuples: TupleMode,
}

impl FuzzConfig {
    pub fn new(count: usize, max_args: usize, seed: u64) -> Self {
        FuzzConfig {
            count,
            max_args,
            seed,
            edge_prob: Fraction::new(3, 10),
            tuples: TupleMode::Uniform { max_bound: None },
        }
    }

    /// Argument count and generator seed of instance `i`.
    pub fn instance(&self, i: usize) -> (usize, u64) {
        // splitmix64 step, so neighbouring seeds give unrelated streams
        let mut z = self.seed.wrapping_add((i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        let n = 1 + (z % self.max_args.max(1) as u64) as usize;
        (n.min(self.max_args), z)
    }

    pub fn framework(&self, i: usize) -> Result<Framework> {
        let (n, seed) = self.instance(i);
        generate_random(n, self.edge_prob, self.tuples, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzFailure {
    pub index: usize,
    pub seed: u64,
    pub report: DiffReport,
    /// Shrunk instance per failing check, in `.mmaf` form.
    pub minimal: BTreeMap<&'static str, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckTotals {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub instances: usize,
    pub totals: BTreeMap<&'static str, CheckTotals>,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed_instances(&self, check: &str) -> usize {
        self.totals.get(check).map_or(0, |t| t.fail)
    }

    /// Writes one reproducer file per failing check of every failing
    /// instance.
    pub fn write_archive(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for fail in &self.failures {
            for (check, text) in &fail.minimal {
                let path = dir.join(format!("instance{}-{}.mmaf", fail.index, check));
                let header = format!(
                    "# fails {check}\n# fuzz instance {} (generator seed {})\n",
                    fail.index, fail.seed
                );
                std::fs::write(&path, header + text)?;
                written.push(path);
            }
        }
        Ok(written)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instances": self.instances,
            "passed": self.passed(),
            "totals": self.totals.iter().map(|(k, t)| (k.to_string(), json!({
                "pass": t.pass, "fail": t.fail, "skipped": t.skipped,
            }))).collect::<serde_json::Map<_, _>>(),
            "failures": self.failures.iter().map(|f| json!({
                "index": f.index,
                "seed": f.seed,
                "failed": f.report.failures().map(|c| c.name).collect::<Vec<_>>(),
                "minimal": f.minimal,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} instance(s)", self.instances)?;
        for (name, t) in &self.totals {
            writeln!(
                f,
                "  {name:<24} pass {:>5}  fail {:>5}  skipped {:>5}",
                t.pass, t.fail, t.skipped
            )?;
        }
        for fail in &self.failures {
            let names: Vec<&str> = fail.report.failures().map(|c| c.name).collect();
            writeln!(f, "instance {} (seed {}): {}", fail.index, fail.seed, names.join(", "))?;
            for (check, text) in &fail.minimal {
                writeln!(f, "  minimal reproducer for {check}:")?;
                for line in text.lines() {
                    writeln!(f, "    {line}")?;
                }
            }
        }
        Ok(())
    }
}

/// Generates and checks `count` instances in parallel; failures are shrunk.
pub fn fuzz(config: &FuzzConfig) -> Result<FuzzReport> {
    if config.max_args > crate::solver::max_brute() {
        return Err(Error::InstanceTooLarge {
            args: config.max_args,
            bound: crate::solver::max_brute(),
        });
    }
    let reports: Vec<(usize, u64, Framework, DiffReport)> = (0..config.count)
        .into_par_iter()
        .map(|i| {
            let f = config.framework(i)?;
            let report = check_instance(&f)?;
            Ok((i, config.instance(i).1, f, report))
        })
        .collect::<Result<_>>()?;

    let mut totals: BTreeMap<&'static str, CheckTotals> = BTreeMap::new();
    for (_, _, _, r) in &reports {
        for c in &r.checks {
            let t = totals.entry(c.name).or_default();
            match c.verdict {
                Verdict::Pass => t.pass += 1,
                Verdict::Fail => t.fail += 1,
                Verdict::Skipped => t.skipped += 1,
            }
        }
    }
    let mut failures: Vec<FuzzFailure> = reports
        .into_par_iter()
        .filter(|(_, _, _, r)| !r.passed())
        .map(|(index, seed, f, report)| {
            let minimal = report
                .failures()
                .map(|c| (c.name, serialize_mmaf(&shrink(&f, c.name))))
                .collect();
            FuzzFailure {
                index,
                seed,
                report,
                minimal,
            }
        })
        .collect();
    failures.sort_by_key(|f| f.index);
    Ok(FuzzReport {
        instances: config.count,
        totals,
        failures,
    })
}
