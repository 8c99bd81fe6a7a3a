//! Frameworks, nuance tuples and (partial) labellings.
//!
//! Arguments are dense indices `0..n` in declaration order; the user-facing
//! identifiers live in [`Framework`]. A [`Labelling`] is a partial map from
//! indices to [`Label`]s, stored as a slot vector with trailing gaps trimmed so
//! that structural equality coincides with equality as partial functions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    In,
    Out,
    Undec,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::In, Label::Out, Label::Undec];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::In => "in",
            Label::Out => "out",
            Label::Undec => "undec",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "in" => Ok(Label::In),
            "out" => Ok(Label::Out),
            "undec" => Ok(Label::Undec),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

/// May-must acceptance scale `(acc_may, acc_must)` over rejected attackers and
/// may-must rejection scale `(rej_may, rej_must)` over accepted attackers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NuanceTuple {
    pub acc_may: u32,
    pub acc_must: u32,
    pub rej_may: u32,
    pub rej_must: u32,
}

impl NuanceTuple {
    pub const fn new(acc_may: u32, acc_must: u32, rej_may: u32, rej_must: u32) -> Self {
        NuanceTuple {
            acc_may,
            acc_must,
            rej_may,
            rej_must,
        }
    }

    /// Tuple that makes an argument behave like a Dung argument with the
    /// given number of attackers.
    pub const fn dung(in_degree: u32) -> Self {
        NuanceTuple::new(in_degree, in_degree, 1, 1)
    }

    pub fn is_valid(&self) -> bool {
        self.acc_may <= self.acc_must && self.rej_may <= self.rej_must
    }

    fn check(&self, argument: &str) -> Result<()> {
        if self.acc_may > self.acc_must {
            return Err(Error::MayExceedsMust {
                argument: argument.to_string(),
                scale: "acceptance",
            });
        }
        if self.rej_may > self.rej_must {
            return Err(Error::MayExceedsMust {
                argument: argument.to_string(),
                scale: "rejection",
            });
        }
        Ok(())
    }
}

impl fmt::Display for NuanceTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({},{}),({},{}))",
            self.acc_may, self.acc_must, self.rej_may, self.rej_must
        )
    }
}

/// Exact non-negative rational used for ratio directives.
pub type Fraction = Ratio<u64>;

/// Parses a decimal such as `0.8`, `1`, or `.25` into an exact fraction.
pub fn parse_decimal(text: &str) -> Result<Fraction> {
    let bad = || Error::FractionOutOfRange(text.to_string());
    let (whole, frac) = match text.split_once('.') {
        Some((w, f)) => (w, f),
        None => (text, ""),
    };
    if (whole.is_empty() && frac.is_empty())
        || !whole.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
        || frac.len() > 18
    {
        return Err(bad());
    }
    let whole: u64 = if whole.is_empty() {
        0
    } else {
        whole.parse().map_err(|_| bad())?
    };
    let den = 10u64.pow(frac.len() as u32);
    let frac_num: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let num = whole
        .checked_mul(den)
        .and_then(|w| w.checked_add(frac_num))
        .ok_or_else(bad)?;
    let value = Fraction::new(num, den);
    if value > Fraction::from_integer(1) {
        return Err(bad());
    }
    Ok(value)
}

fn ceil_times(frac: Fraction, d: u32) -> u32 {
    let num = *frac.numer() as u128 * d as u128;
    let den = *frac.denom() as u128;
    num.div_ceil(den) as u32
}

/// Builds a nuance tuple from fractions of the argument's in-degree, rounding
/// up. The rejection scale is floored at `rej_floor`.
pub fn ratio_tuple(
    in_degree: u32,
    acc_may_frac: Fraction,
    acc_must_frac: Fraction,
    rej_may_frac: Fraction,
    rej_must_frac: Fraction,
    rej_floor: u32,
) -> Result<NuanceTuple> {
    let one = Fraction::from_integer(1);
    for f in [acc_may_frac, acc_must_frac, rej_may_frac, rej_must_frac] {
        if f > one {
            return Err(Error::FractionOutOfRange(f.to_string()));
        }
    }
    if acc_may_frac > acc_must_frac || rej_may_frac > rej_must_frac {
        return Err(Error::FractionOrderViolation);
    }
    Ok(NuanceTuple::new(
        ceil_times(acc_may_frac, in_degree),
        ceil_times(acc_must_frac, in_degree),
        rej_floor.max(ceil_times(rej_may_frac, in_degree)),
        rej_floor.max(ceil_times(rej_must_frac, in_degree)),
    ))
}

/// The four fractions and floor of a `ratio` directive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioPreset {
    pub acc_may: Fraction,
    pub acc_must: Fraction,
    pub rej_may: Fraction,
    pub rej_must: Fraction,
    pub rej_floor: u32,
}

impl RatioPreset {
    /// May-accept at 80% rejected attackers, must-accept at 90%, may-reject at
    /// 40% accepted attackers and must-reject at 50%, both at least one.
    pub fn percentage_example() -> Self {
        RatioPreset {
            acc_may: Fraction::new(8, 10),
            acc_must: Fraction::new(9, 10),
            rej_may: Fraction::new(4, 10),
            rej_must: Fraction::new(5, 10),
            rej_floor: 1,
        }
    }

    pub fn tuple_for(&self, in_degree: u32) -> Result<NuanceTuple> {
        ratio_tuple(
            in_degree,
            self.acc_may,
            self.acc_must,
            self.rej_may,
            self.rej_must,
            self.rej_floor,
        )
    }
}

/// A finite may-must argumentation framework.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Framework {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// Sorted, duplicate-free attacker lists.
    attackers: Vec<Vec<usize>>,
    tuples: Vec<NuanceTuple>,
}

pub(crate) fn valid_identifier(id: &str) -> bool {
    !id.is_empty() && !id.starts_with('#') && !id.chars().any(char::is_whitespace)
}

/// Validates and builds a framework from named arguments and named attacks.
pub fn build_framework<S, A, B>(
    args: impl IntoIterator<Item = (S, NuanceTuple)>,
    attacks: impl IntoIterator<Item = (A, B)>,
) -> Result<Framework>
where
    S: Into<String>,
    A: AsRef<str>,
    B: AsRef<str>,
{
    let mut names = Vec::new();
    let mut index = HashMap::new();
    let mut tuples = Vec::new();
    for (id, tuple) in args {
        let id: String = id.into();
        if !valid_identifier(&id) {
            return Err(Error::InvalidIdentifier(id));
        }
        if index.contains_key(&id) {
            return Err(Error::DuplicateArgument(id));
        }
        tuple.check(&id)?;
        index.insert(id.clone(), names.len());
        names.push(id);
        tuples.push(tuple);
    }
    let mut attackers = vec![Vec::new(); names.len()];
    for (src, dst) in attacks {
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownArgumentInAttack(id.to_string()))
        };
        let s = lookup(src.as_ref())?;
        let d = lookup(dst.as_ref())?;
        attackers[d].push(s);
    }
    for list in &mut attackers {
        list.sort_unstable();
        list.dedup();
    }
    Ok(Framework {
        names,
        index,
        attackers,
        tuples,
    })
}

impl Framework {
    pub fn empty() -> Self {
        Framework {
            names: Vec::new(),
            index: HashMap::new(),
            attackers: Vec::new(),
            tuples: Vec::new(),
        }
    }

    /// Builds a framework over already-indexed attacks. Panics on malformed
    /// input; intended for internal constructions from validated frameworks.
    pub(crate) fn from_parts(
        names: Vec<String>,
        tuples: Vec<NuanceTuple>,
        attacks: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        assert_eq!(names.len(), tuples.len());
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut attackers = vec![Vec::new(); names.len()];
        for (s, d) in attacks {
            attackers[d].push(s);
        }
        for list in &mut attackers {
            list.sort_unstable();
            list.dedup();
        }
        Framework {
            names,
            index,
            attackers,
            tuples,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Attackers of `a` in ascending index order.
    pub fn attackers(&self, a: usize) -> &[usize] {
        &self.attackers[a]
    }

    pub fn in_degree(&self, a: usize) -> usize {
        self.attackers[a].len()
    }

    pub fn tuple(&self, a: usize) -> NuanceTuple {
        self.tuples[a]
    }

    pub fn tuples(&self) -> &[NuanceTuple] {
        &self.tuples
    }

    /// All attacks `(source, target)`, sorted by target then source.
    pub fn attacks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.attackers
            .iter()
            .enumerate()
            .flat_map(|(d, list)| list.iter().map(move |&s| (s, d)))
    }

    pub fn attack_count(&self) -> usize {
        self.attackers.iter().map(Vec::len).sum()
    }

    /// Returns a copy with the given tuples, which must keep the invariants.
    pub fn with_tuples(&self, tuples: Vec<NuanceTuple>) -> Result<Framework> {
        assert_eq!(tuples.len(), self.len());
        for (a, t) in tuples.iter().enumerate() {
            t.check(&self.names[a])?;
        }
        Ok(Framework {
            tuples,
            ..self.clone()
        })
    }

    /// Renders a labelling with this framework's identifiers.
    pub fn show(&self, l: &Labelling) -> String {
        let parts: Vec<String> = l
            .iter()
            .map(|(a, lab)| match self.names.get(a) {
                Some(name) => format!("{name}:{lab}"),
                None => format!("#{a}:{lab}"),
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }

    /// Parses `[a1:in, a2:out]`-style labellings over this framework.
    pub fn labelling(&self, pairs: &[(&str, Label)]) -> Option<Labelling> {
        let mut l = Labelling::empty();
        for (id, lab) in pairs {
            l.set(self.index_of(id)?, *lab);
        }
        Some(l)
    }
}

/// A partial map from argument indices to labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labelling {
    slots: Vec<Option<Label>>,
}

impl Labelling {
    pub fn empty() -> Self {
        Labelling { slots: Vec::new() }
    }

    /// Total labelling over `0..labels.len()`.
    pub fn total(labels: impl IntoIterator<Item = Label>) -> Self {
        Labelling {
            slots: labels.into_iter().map(Some).collect(),
        }
    }

    /// Total labelling over `0..n` with every argument labelled `label`.
    pub fn uniform(n: usize, label: Label) -> Self {
        Labelling {
            slots: vec![Some(label); n],
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Label)>) -> Self {
        let mut l = Labelling::empty();
        for (a, lab) in pairs {
            l.set(a, lab);
        }
        l
    }

    fn trim(&mut self) {
        while matches!(self.slots.last(), Some(None)) {
            self.slots.pop();
        }
    }

    pub fn get(&self, a: usize) -> Option<Label> {
        self.slots.get(a).copied().flatten()
    }

    pub fn set(&mut self, a: usize, label: Label) {
        if self.slots.len() <= a {
            self.slots.resize(a + 1, None);
        }
        self.slots[a] = Some(label);
    }

    pub fn unset(&mut self, a: usize) {
        if let Some(slot) = self.slots.get_mut(a) {
            *slot = None;
        }
        self.trim();
    }

    pub fn contains(&self, a: usize) -> bool {
        self.get(a).is_some()
    }

    /// Defined `(argument, label)` pairs in ascending argument order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Label)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(a, s)| s.map(|l| (a, l)))
    }

    pub fn domain(&self) -> BTreeSet<usize> {
        self.iter().map(|(a, _)| a).collect()
    }

    pub fn domain_len(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn same_domain(&self, other: &Labelling) -> bool {
        self.slots.len() == other.slots.len()
            && self
                .slots
                .iter()
                .zip(&other.slots)
                .all(|(x, y)| x.is_some() == y.is_some())
    }

    /// True iff the domain is exactly `0..n`.
    pub fn is_total(&self, n: usize) -> bool {
        self.slots.len() == n && self.slots.iter().all(Option::is_some)
    }

    /// Labels of a total labelling over `0..n`.
    pub fn to_total(&self, n: usize) -> Option<Vec<Label>> {
        if !self.is_total(n) {
            return None;
        }
        Some(self.slots.iter().map(|s| s.unwrap()).collect())
    }

    pub fn count(&self, label: Label) -> usize {
        self.slots.iter().filter(|s| **s == Some(label)).count()
    }

    pub fn has_undec(&self) -> bool {
        self.count(Label::Undec) > 0
    }
}

/// `l1 ≼ l2`: every `in` and every `out` of `l1` is kept by `l2`.
pub fn labelling_leq(l1: &Labelling, l2: &Labelling) -> Result<bool> {
    if !l1.same_domain(l2) {
        return Err(Error::DomainMismatch);
    }
    Ok(l1.iter().all(|(a, lab)| match lab {
        Label::Undec => true,
        definite => l2.get(a) == Some(definite),
    }))
}

/// `l1 ≺ l2`.
pub fn labelling_lt(l1: &Labelling, l2: &Labelling) -> Result<bool> {
    Ok(labelling_leq(l1, l2)? && !labelling_leq(l2, l1)?)
}

/// Greatest lower bound under `≼`.
pub fn labelling_meet<'a>(ls: impl IntoIterator<Item = &'a Labelling>) -> Result<Labelling> {
    let mut iter = ls.into_iter();
    let mut acc = iter.next().ok_or(Error::EmptyInput)?.clone();
    for l in iter {
        if !l.same_domain(&acc) {
            return Err(Error::DomainMismatch);
        }
        for (slot, other) in acc.slots.iter_mut().zip(&l.slots) {
            if let (Some(x), Some(y)) = (slot.as_mut(), other) {
                if x != y {
                    *x = Label::Undec;
                }
            }
        }
    }
    Ok(acc)
}

/// `l↓subset`.
pub fn restrict<'a>(l: &Labelling, subset: impl IntoIterator<Item = &'a usize>) -> Labelling {
    let mut out = Labelling::empty();
    for &a in subset {
        if let Some(lab) = l.get(a) {
            out.set(a, lab);
        }
    }
    out
}

/// `⊕(l1, l2)`: defined on the symmetric difference of the two domains.
pub fn compose(l1: &Labelling, l2: &Labelling) -> Labelling {
    compose_with_overlap(l1, l2).0
}

/// Like [`compose`], also reporting the arguments dropped because both inputs
/// define them.
pub fn compose_with_overlap(l1: &Labelling, l2: &Labelling) -> (Labelling, Vec<usize>) {
    let width = l1.slots.len().max(l2.slots.len());
    let mut out = Labelling {
        slots: vec![None; width],
    };
    let mut overlap = Vec::new();
    for a in 0..width {
        match (l1.get(a), l2.get(a)) {
            (Some(_), Some(_)) => overlap.push(a),
            (Some(x), None) | (None, Some(x)) => out.slots[a] = Some(x),
            (None, None) => {}
        }
    }
    out.trim();
    (out, overlap)
}
