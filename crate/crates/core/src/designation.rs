//! Condition satisfaction and label designation.
//!
//! An argument's acceptance side is classified by the number of its attackers
//! labelled `out`, the rejection side by the number labelled `in`. The pair of
//! classifications selects the set of labels the labelling designates for the
//! argument.

use std::fmt;

use crate::error::{Error, Result};
use crate::framework::{Framework, Label, Labelling, NuanceTuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AttackerCounts {
    pub n_out: u32,
    pub n_in: u32,
}

/// Which part of a may-must scale a count reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    /// At or above the must threshold.
    Must,
    /// At or above the may threshold but below the must threshold.
    MayS,
    /// Below the may threshold.
    Not,
}

impl Status {
    pub const ALL: [Status; 3] = [Status::Must, Status::MayS, Status::Not];

    pub fn classify(may: u32, must: u32, count: u32) -> Status {
        if must <= count {
            Status::Must
        } else if may <= count {
            Status::MayS
        } else {
            Status::Not
        }
    }

    /// The may condition holds (`may ≤ count`).
    pub fn may(self) -> bool {
        self != Status::Not
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Must => "must",
            Status::MayS => "may_s",
            Status::Not => "not",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConditionProfile {
    pub acc: Status,
    pub rej: Status,
}

impl ConditionProfile {
    pub fn from_counts(tuple: NuanceTuple, counts: AttackerCounts) -> Self {
        ConditionProfile {
            acc: Status::classify(tuple.acc_may, tuple.acc_must, counts.n_out),
            rej: Status::classify(tuple.rej_may, tuple.rej_must, counts.n_in),
        }
    }

    pub fn all() -> impl Iterator<Item = ConditionProfile> {
        Status::ALL.into_iter().flat_map(|acc| {
            Status::ALL
                .into_iter()
                .map(move |rej| ConditionProfile { acc, rej })
        })
    }

    /// Designated labels, evaluated clause by clause.
    pub fn designated(self) -> DesignatedSet {
        use Status::*;
        let ConditionProfile { acc, rej } = self;
        let mut set = DesignatedSet::EMPTY;
        if acc.may() && rej != Must {
            set = set.with(Label::In);
        }
        if rej.may() && acc != Must {
            set = set.with(Label::Out);
        }
        if (acc == Must && rej == Must) || acc == MayS || rej == MayS || (acc == Not && rej == Not)
        {
            set = set.with(Label::Undec);
        }
        set
    }
}

impl fmt::Display for ConditionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-a/{}-r", self.acc, self.rej)
    }
}

/// A subset of `{in, out, undec}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DesignatedSet(u8);

impl DesignatedSet {
    pub const EMPTY: DesignatedSet = DesignatedSet(0);

    fn bit(l: Label) -> u8 {
        match l {
            Label::In => 1,
            Label::Out => 2,
            Label::Undec => 4,
        }
    }

    pub fn of(labels: &[Label]) -> Self {
        labels.iter().fold(Self::EMPTY, |s, &l| s.with(l))
    }

    #[must_use]
    pub fn with(self, l: Label) -> Self {
        DesignatedSet(self.0 | Self::bit(l))
    }

    pub fn contains(self, l: Label) -> bool {
        self.0 & Self::bit(l) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: DesignatedSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// The single designated label, if exactly one.
    pub fn only(self) -> Option<Label> {
        match self.0 {
            1 => Some(Label::In),
            2 => Some(Label::Out),
            4 => Some(Label::Undec),
            _ => None,
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Label> {
        Label::ALL.into_iter().filter(move |&l| self.contains(l))
    }
}

impl fmt::Debug for DesignatedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Counts `out`- and `in`-labelled attackers of `a`. A self-attacking
/// argument counts its own label.
pub fn attacker_counts(f: &Framework, l: &Labelling, a: usize) -> Result<AttackerCounts> {
    let mut counts = AttackerCounts::default();
    for &x in f.attackers(a) {
        match l.get(x) {
            Some(Label::Out) => counts.n_out += 1,
            Some(Label::In) => counts.n_in += 1,
            Some(Label::Undec) => {}
            None => {
                return Err(Error::UndefinedAttackerLabel {
                    argument: f.name(a).to_string(),
                    attacker: f.name(x).to_string(),
                })
            }
        }
    }
    Ok(counts)
}

pub fn condition_profile(f: &Framework, l: &Labelling, a: usize) -> Result<ConditionProfile> {
    Ok(ConditionProfile::from_counts(
        f.tuple(a),
        attacker_counts(f, l, a)?,
    ))
}

pub fn designated_labels(f: &Framework, l: &Labelling, a: usize) -> Result<DesignatedSet> {
    Ok(condition_profile(f, l, a)?.designated())
}

pub fn is_proper(f: &Framework, l: &Labelling, a: usize) -> Result<bool> {
    let own = l
        .get(a)
        .ok_or_else(|| Error::UndefinedArgumentLabel(f.name(a).to_string()))?;
    Ok(designated_labels(f, l, a)?.contains(own))
}

/// Designation for `a` under a total labelling given as a label slice.
pub(crate) fn designated_total(f: &Framework, labels: &[Label], a: usize) -> DesignatedSet {
    let mut counts = AttackerCounts::default();
    for &x in f.attackers(a) {
        match labels[x] {
            Label::Out => counts.n_out += 1,
            Label::In => counts.n_in += 1,
            Label::Undec => {}
        }
    }
    ConditionProfile::from_counts(f.tuple(a), counts).designated()
}

pub(crate) fn proper_total(f: &Framework, labels: &[Label], a: usize) -> bool {
    designated_total(f, labels, a).contains(labels[a])
}
