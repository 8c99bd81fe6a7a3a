//! Classical Dung frameworks: embedding into may-must frameworks and an
//! independent labelling oracle.
//!
//! The oracle evaluates the complete-labelling clauses directly (an argument
//! is `in` iff all its attackers are `out`, `out` iff some attacker is `in`)
//! and derives preferred, stable and grounded labellings from them. It shares
//! nothing with the designation machinery except the [`Label`] type.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::framework::{valid_identifier, Framework, Label, Labelling, NuanceTuple};
use crate::semantics::{Engine, SemanticsName, SemanticsResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DungFramework {
    names: Vec<String>,
    /// Sorted, duplicate-free `(attacker, target)` pairs.
    attacks: Vec<(usize, usize)>,
}

impl DungFramework {
    pub fn new<S, A, B>(
        names: impl IntoIterator<Item = S>,
        attacks: impl IntoIterator<Item = (A, B)>,
    ) -> Result<Self>
    where
        S: Into<String>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !valid_identifier(n) {
                return Err(Error::InvalidIdentifier(n.clone()));
            }
            if index.insert(n.as_str(), i).is_some() {
                return Err(Error::DuplicateArgument(n.clone()));
            }
        }
        let mut pairs = Vec::new();
        for (s, d) in attacks {
            let find = |id: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::UnknownArgumentInAttack(id.to_string()))
            };
            pairs.push((find(s.as_ref())?, find(d.as_ref())?));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(DungFramework {
            names,
            attacks: pairs,
        })
    }

    /// Forgets the nuance tuples of a may-must framework.
    pub fn from_framework(f: &Framework) -> Self {
        let mut attacks: Vec<(usize, usize)> = f.attacks().collect();
        attacks.sort_unstable();
        DungFramework {
            names: f.names().to_vec(),
            attacks,
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

    pub fn attacks(&self) -> &[(usize, usize)] {
        &self.attacks
    }
}

/// Gives every argument `((d, d), (1, 1))` with `d` its number of attackers.
pub fn dung_to_maymust(d: &DungFramework) -> Framework {
    let mut in_degree = vec![0u32; d.len()];
    for &(_, t) in &d.attacks {
        in_degree[t] += 1;
    }
    Framework::from_parts(
        d.names.clone(),
        in_degree.into_iter().map(NuanceTuple::dung).collect(),
        d.attacks.iter().copied(),
    )
}

/// True iff every tuple of `f` is the Dung tuple for its in-degree.
pub fn is_dung_instantiated(f: &Framework) -> bool {
    (0..f.len()).all(|a| f.tuple(a) == NuanceTuple::dung(f.in_degree(a) as u32))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DungSemantics {
    pub complete: SemanticsResult,
    pub preferred: SemanticsResult,
    pub stable: SemanticsResult,
    pub grounded: SemanticsResult,
}

fn is_complete(attackers: &[Vec<usize>], lab: &[Label]) -> bool {
    (0..lab.len()).all(|a| {
        let all_out = attackers[a].iter().all(|&x| lab[x] == Label::Out);
        let some_in = attackers[a].iter().any(|&x| lab[x] == Label::In);
        (lab[a] == Label::In) == all_out && (lab[a] == Label::Out) == some_in
    })
}

/// `x` below `y` in the information order.
fn below(x: &[Label], y: &[Label]) -> bool {
    x.iter().zip(y).all(|(a, b)| *a == Label::Undec || a == b)
}

fn strictly_below(x: &[Label], y: &[Label]) -> bool {
    below(x, y) && !below(y, x)
}

fn result(name: SemanticsName, ls: Vec<Vec<Label>>) -> SemanticsResult {
    SemanticsResult::new(name, Engine::Brute, ls.into_iter().map(Labelling::total).collect())
}

pub fn dung_semantics(d: &DungFramework) -> DungSemantics {
    let n = d.len();
    let mut attackers = vec![Vec::new(); n];
    for &(s, t) in &d.attacks {
        attackers[t].push(s);
    }
    let mut complete = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        // most significant digit is the first argument
        let mut lab = vec![Label::In; n];
        for slot in lab.iter_mut().rev() {
            *slot = [Label::In, Label::Out, Label::Undec][c % 3];
            c /= 3;
        }
        if is_complete(&attackers, &lab) {
            complete.push(lab);
        }
    }
    let preferred: Vec<Vec<Label>> = complete
        .iter()
        .filter(|l| !complete.iter().any(|m| strictly_below(l, m)))
        .cloned()
        .collect();
    let stable: Vec<Vec<Label>> = preferred
        .iter()
        .filter(|l| l.iter().all(|&x| x != Label::Undec))
        .cloned()
        .collect();
    let grounded = complete
        .iter()
        .cloned()
        .reduce(|acc, l| {
            acc.iter()
                .zip(&l)
                .map(|(a, b)| if a == b { *a } else { Label::Undec })
                .collect()
        })
        .into_iter()
        .collect();
    DungSemantics {
        complete: result(SemanticsName::DungComplete, complete),
        preferred: result(SemanticsName::DungPreferred, preferred),
        stable: result(SemanticsName::DungStable, stable),
        grounded: result(SemanticsName::DungGrounded, grounded),
    }
}

pub fn dung_complete_oracle(d: &DungFramework) -> SemanticsResult {
    dung_semantics(d).complete
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::*;

    #[test]
    fn embedding() {
        let pair = DungFramework::new(["a1", "a2"], [("a1", "a2"), ("a2", "a1")]).unwrap();
        let f = dung_to_maymust(&pair);
        assert_eq!(f.tuple(0), NuanceTuple::new(1, 1, 1, 1));
        assert_eq!(f.tuple(1), NuanceTuple::new(1, 1, 1, 1));
        assert!(is_dung_instantiated(&f));

        let lone = DungFramework::new(["a"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(dung_to_maymust(&lone).tuple(0), NuanceTuple::new(0, 0, 1, 1));

        let chain = DungFramework::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        let f = dung_to_maymust(&chain);
        assert_eq!(
            f.tuples(),
            &[
                NuanceTuple::new(0, 0, 1, 1),
                NuanceTuple::new(1, 1, 1, 1),
                NuanceTuple::new(1, 1, 1, 1)
            ]
        );
    }

    #[test]
    fn oracle_on_mutual_attack() {
        let pair = DungFramework::new(["a1", "a2"], [("a1", "a2"), ("a2", "a1")]).unwrap();
        let s = dung_semantics(&pair);
        let l1 = Labelling::total([In, Out]);
        let l2 = Labelling::total([Out, In]);
        let l3 = Labelling::total([Undec, Undec]);
        assert_eq!(s.complete.labellings, vec![l1.clone(), l2.clone(), l3.clone()]);
        assert_eq!(s.preferred.labellings, vec![l1.clone(), l2.clone()]);
        assert_eq!(s.stable.labellings, vec![l1, l2]);
        assert_eq!(s.grounded.labellings, vec![l3]);
    }

    #[test]
    fn oracle_small_cases() {
        let lone = DungFramework::new(["a"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(dung_complete_oracle(&lone).labellings, vec![Labelling::total([In])]);

        let cycle = DungFramework::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
            .unwrap();
        let s = dung_semantics(&cycle);
        assert_eq!(s.complete.labellings, vec![Labelling::uniform(3, Undec)]);
        assert!(s.stable.is_empty());

        let empty = DungFramework::new(Vec::<String>::new(), Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(dung_semantics(&empty).grounded.labellings, vec![Labelling::empty()]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            DungFramework::new(["a", "a"], Vec::<(&str, &str)>::new()),
            Err(Error::DuplicateArgument("a".into()))
        );
        assert_eq!(
            DungFramework::new(["a"], [("a", "z")]),
            Err(Error::UnknownArgumentInAttack("z".into()))
        );
    }
}
