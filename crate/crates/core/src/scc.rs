//! Strongly connected components, SCC-depth, designation-conservative
//! reduction and the depth-by-depth engine for maximally proper labellings.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::framework::{Framework, Label, Labelling, NuanceTuple};
use crate::semantics::{self, Engine, Search, SemanticsName, SemanticsResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccInfo {
    /// Components sorted by (depth, smallest member); members ascending.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// SCC-depth per argument.
    pub depth: Vec<usize>,
    /// `bundles[d]` holds every argument of depth `d`, ascending.
    pub bundles: Vec<Vec<usize>>,
    pub max_depth: usize,
}

impl SccInfo {
    /// Arguments ordered so that every component precedes the components it
    /// attacks.
    pub fn topological_arguments(&self) -> Vec<usize> {
        self.components.iter().flatten().copied().collect()
    }
}

/// Iterative Tarjan over the attack graph; emits components sinks-first.
fn tarjan(n: usize, succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    // (node, next successor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos == 0 && index[v] == UNSEEN {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

pub fn sccs(f: &Framework) -> SccInfo {
    let n = f.len();
    let mut succ = vec![Vec::new(); n];
    for (s, d) in f.attacks() {
        succ[s].push(d);
    }
    let raw = tarjan(n, &succ);
    let mut comp_of = vec![0; n];
    for (c, members) in raw.iter().enumerate() {
        for &a in members {
            comp_of[a] = c;
        }
    }
    // Tarjan emits sinks first, so walking backwards visits attackers first.
    let mut comp_depth = vec![0usize; raw.len()];
    for c in (0..raw.len()).rev() {
        let mut depth = None;
        for &a in &raw[c] {
            for &x in f.attackers(a) {
                let cx = comp_of[x];
                if cx != c {
                    let d = comp_depth[cx] + 1;
                    depth = Some(depth.map_or(d, |cur: usize| cur.max(d)));
                }
            }
        }
        comp_depth[c] = depth.unwrap_or(0);
    }

    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by_key(|&c| (comp_depth[c], raw[c][0]));
    let components: Vec<Vec<usize>> = order.iter().map(|&c| raw[c].clone()).collect();
    let mut component_of = vec![0; n];
    let mut depth = vec![0; n];
    for (new_c, &old_c) in order.iter().enumerate() {
        for &a in &raw[old_c] {
            component_of[a] = new_c;
            depth[a] = comp_depth[old_c];
        }
    }
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    let mut bundles = vec![Vec::new(); if n == 0 { 0 } else { max_depth + 1 }];
    for a in 0..n {
        bundles[depth[a]].push(a);
    }
    SccInfo {
        components,
        component_of,
        depth,
        bundles,
        max_depth,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionPlan {
    /// Kept arguments, ascending; position `i` becomes argument `i` of the
    /// reduced framework.
    pub kept: Vec<usize>,
    /// `(out_shift, in_shift)` for every kept argument with an external attacker.
    pub boundary_shifts: BTreeMap<usize, (u32, u32)>,
}

pub fn reduction_plan(f: &Framework, keep: &BTreeSet<usize>, frozen: &Labelling) -> Result<ReductionPlan> {
    let kept: Vec<usize> = keep.iter().copied().filter(|&a| a < f.len()).collect();
    let mut boundary_shifts = BTreeMap::new();
    for &a in &kept {
        let mut external = false;
        let (mut out_shift, mut in_shift) = (0u32, 0u32);
        for &x in f.attackers(a) {
            if keep.contains(&x) {
                continue;
            }
            external = true;
            match frozen.get(x) {
                Some(Label::Out) => out_shift += 1,
                Some(Label::In) => in_shift += 1,
                Some(Label::Undec) => {}
                None => return Err(Error::FrozenLabelMissing(f.name(x).to_string())),
            }
        }
        if external {
            boundary_shifts.insert(a, (out_shift, in_shift));
        }
    }
    Ok(ReductionPlan {
        kept,
        boundary_shifts,
    })
}

impl ReductionPlan {
    pub fn apply(&self, f: &Framework) -> Framework {
        let position: HashMap<usize, usize> =
            self.kept.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let names = self.kept.iter().map(|&a| f.name(a).to_string()).collect();
        let tuples = self
            .kept
            .iter()
            .map(|&a| {
                let t = f.tuple(a);
                let (i, j) = self.boundary_shifts.get(&a).copied().unwrap_or((0, 0));
                NuanceTuple::new(
                    t.acc_may.saturating_sub(i),
                    t.acc_must.saturating_sub(i),
                    t.rej_may.saturating_sub(j),
                    t.rej_must.saturating_sub(j),
                )
            })
            .collect();
        let attacks = f.attacks().filter_map(|(s, d)| {
            Some((*position.get(&s)?, *position.get(&d)?))
        });
        Framework::from_parts(names, tuples, attacks)
    }

    /// Maps a labelling of the reduced framework back to original indices.
    pub fn lift(&self, local: &Labelling) -> Labelling {
        Labelling::from_pairs(local.iter().map(|(i, l)| (self.kept[i], l)))
    }
}

/// Designation-conservative sub-framework on `keep`, with external attackers
/// frozen at their labels in `frozen`.
pub fn conservative_reduction(
    f: &Framework,
    keep: &BTreeSet<usize>,
    frozen: &Labelling,
) -> Result<Framework> {
    Ok(reduction_plan(f, keep, frozen)?.apply(f))
}

/// Per-depth output of the bottom-up engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottomUpTrace {
    pub info: SccInfo,
    /// For each depth, every labelling of that bundle (original indices)
    /// produced by some branch of the search.
    pub per_depth: Vec<BTreeSet<Labelling>>,
    /// Full-framework compositions, canonical order.
    pub labellings: Vec<Labelling>,
}

/// Runs the depth-by-depth construction: solve the depth-0 bundle, then for
/// every partial solution reduce the next bundle against it and solve that,
/// composing as it goes. Reduced sub-problems are memoised on the labels of
/// the bundle's actual external attackers.
pub fn bottom_up_trace(f: &Framework, search: Search) -> Result<BottomUpTrace> {
    let info = sccs(f);
    let mut partials = vec![Labelling::empty()];
    let mut per_depth = Vec::with_capacity(info.bundles.len());

    for bundle in &info.bundles {
        let keep: BTreeSet<usize> = bundle.iter().copied().collect();
        let boundary: BTreeSet<usize> = bundle
            .iter()
            .flat_map(|&a| f.attackers(a).iter().copied())
            .filter(|x| !keep.contains(x))
            .collect();
        let mut memo: HashMap<Vec<(usize, Label)>, Vec<Labelling>> = HashMap::new();
        let mut next = Vec::new();
        for partial in &partials {
            let key: Vec<(usize, Label)> = boundary
                .iter()
                .map(|&x| {
                    partial
                        .get(x)
                        .map(|l| (x, l))
                        .ok_or_else(|| Error::FrozenLabelMissing(f.name(x).to_string()))
                })
                .collect::<Result<_>>()?;
            let local = match memo.get(&key) {
                Some(found) => found,
                None => {
                    let plan = reduction_plan(f, &keep, partial)?;
                    let reduced = plan.apply(f);
                    let solved = semantics::maximally_proper_with(&reduced, search)?;
                    let lifted = solved.labellings.iter().map(|l| plan.lift(l)).collect();
                    memo.entry(key).or_insert(lifted)
                }
            };
            for l in local {
                let mut composed = partial.clone();
                for (a, lab) in l.iter() {
                    composed.set(a, lab);
                }
                next.push(composed);
            }
        }
        per_depth.push(memo.into_values().flatten().collect());
        partials = next;
    }

    partials.sort();
    partials.dedup();
    Ok(BottomUpTrace {
        info,
        per_depth,
        labellings: partials,
    })
}

/// Maximally proper labellings assembled depth by depth.
pub fn bottom_up_maxi(f: &Framework) -> Result<SemanticsResult> {
    bottom_up_maxi_with(f, Search::Pruned)
}

pub fn bottom_up_maxi_with(f: &Framework, search: Search) -> Result<SemanticsResult> {
    let trace = bottom_up_trace(f, search)?;
    let proper_sets: BTreeSet<BTreeSet<usize>> = trace
        .labellings
        .iter()
        .map(|l| semantics::proper_set(f, l))
        .collect();
    let proper_set = if proper_sets.len() == 1 {
        proper_sets.into_iter().next()
    } else {
        None
    };
    let mut result = SemanticsResult::new(SemanticsName::MaxiComplete, Engine::Scc, trace.labellings);
    result.proper_set = proper_set;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designation::{designated_labels, designated_total};
    use crate::framework::{build_framework, compose, restrict};
    use crate::generate::{generate_random, TupleMode};
    use crate::semantics::enumerate_labellings;
    use Label::*;

    fn q(a: u32, b: u32, c: u32, d: u32) -> NuanceTuple {
        NuanceTuple::new(a, b, c, d)
    }

    /// SCCs via reachability closure, for cross-checking Tarjan.
    fn naive_components(f: &Framework) -> BTreeSet<Vec<usize>> {
        let n = f.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for (s, d) in f.attacks() {
            reach[s][d] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        (0..n)
            .map(|a| (0..n).filter(|&b| reach[a][b] && reach[b][a]).collect())
            .collect()
    }

    /// Depth straight from the recursive definition.
    fn naive_depth(f: &Framework, comps: &BTreeSet<Vec<usize>>, a: usize) -> usize {
        let own = comps.iter().find(|c| c.contains(&a)).unwrap();
        let external: Vec<usize> = own
            .iter()
            .flat_map(|&m| f.attackers(m).iter().copied())
            .filter(|x| !own.contains(x))
            .collect();
        external
            .iter()
            .map(|&x| naive_depth(f, comps, x) + 1)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn chain_example_depths() {
        let t = q(0, 0, 0, 0);
        let f = build_framework(
            [("a1", t), ("a2", t), ("a3", t), ("a4", t)],
            [("a1", "a2"), ("a2", "a1"), ("a2", "a3"), ("a3", "a4")],
        )
        .unwrap();
        let info = sccs(&f);
        assert_eq!(info.components, vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(info.depth, vec![0, 0, 1, 2]);
        assert_eq!(info.bundles, vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(info.max_depth, 2);
    }

    #[test]
    fn isolated_and_self_loop() {
        let t = q(0, 0, 1, 1);
        let f = build_framework([("a", t), ("b", t), ("c", t)], Vec::<(&str, &str)>::new()).unwrap();
        let info = sccs(&f);
        assert_eq!(info.components.len(), 3);
        assert_eq!(info.depth, vec![0, 0, 0]);
        let g = build_framework([("a1", t)], [("a1", "a1")]).unwrap();
        let info = sccs(&g);
        assert_eq!(info.components, vec![vec![0]]);
        assert_eq!(info.depth, vec![0]);
        assert_eq!(sccs(&Framework::empty()).bundles.len(), 0);
    }

    #[test]
    fn tarjan_matches_closure() {
        for seed in 0..300 {
            let f = generate_random(seed as usize % 9, crate::framework::Fraction::new(3, 10), TupleMode::Dung, seed).unwrap();
            let info = sccs(&f);
            let naive = naive_components(&f);
            let got: BTreeSet<Vec<usize>> = info.components.iter().cloned().collect();
            assert_eq!(got, naive, "seed {seed}");
            for a in 0..f.len() {
                assert_eq!(info.depth[a], naive_depth(&f, &naive, a), "seed {seed}");
            }
        }
    }

    fn example1() -> Framework {
        build_framework(
            [
                ("a1", q(0, 0, 1, 1)),
                ("a2", q(0, 1, 1, 2)),
                ("a3", q(1, 1, 1, 1)),
                ("a4", q(1, 1, 1, 1)),
                ("a5", q(0, 0, 1, 1)),
            ],
            [("a1", "a2"), ("a2", "a3"), ("a4", "a3"), ("a5", "a4")],
        )
        .unwrap()
    }

    #[test]
    fn reduction_of_example1_a3() {
        let f = example1();
        let l1 = Labelling::total([In, Out, In, Out, In]);
        let keep = BTreeSet::from([2]);
        let frozen = restrict(&l1, &[1, 3]);
        let plan = reduction_plan(&f, &keep, &frozen).unwrap();
        assert_eq!(plan.boundary_shifts, BTreeMap::from([(2, (2, 0))]));
        let reduced = plan.apply(&f);
        assert_eq!(reduced.tuple(0), q(0, 0, 1, 1));
        let in_reduced = designated_labels(&reduced, &Labelling::empty(), 0).unwrap();
        assert_eq!(in_reduced.only(), Some(In));
        assert_eq!(designated_labels(&f, &l1, 2).unwrap(), in_reduced);
    }

    #[test]
    fn reduction_identity_and_errors() {
        let f = example1();
        let all: BTreeSet<usize> = (0..5).collect();
        assert_eq!(conservative_reduction(&f, &all, &Labelling::empty()).unwrap(), f);
        assert_eq!(
            conservative_reduction(&f, &BTreeSet::from([2]), &Labelling::empty()),
            Err(Error::FrozenLabelMissing("a2".into()))
        );
    }

    #[test]
    fn one_external_in_attacker_shifts_rejection() {
        let f = build_framework(
            [("x", q(0, 0, 1, 1)), ("a", q(2, 3, 2, 4))],
            [("x", "a")],
        )
        .unwrap();
        let r = conservative_reduction(&f, &BTreeSet::from([1]), &Labelling::from_pairs([(0, In)]))
            .unwrap();
        assert_eq!(r.tuple(0), q(2, 3, 1, 3));
    }

    #[test]
    fn reduction_conserves_designation() {
        for seed in 0..200u64 {
            let f = generate_random(
                2 + seed as usize % 6,
                crate::framework::Fraction::new(35, 100),
                TupleMode::Uniform { max_bound: None },
                seed,
            )
            .unwrap();
            let info = sccs(&f);
            for (d, bundle) in info.bundles.iter().enumerate() {
                if bundle.len() > 4 {
                    continue;
                }
                let keep: BTreeSet<usize> = bundle.iter().copied().collect();
                let outside: Vec<usize> = (0..f.len()).filter(|a| !keep.contains(a)).collect();
                // frozen labelling over the outside, chosen from the seed
                let frozen = Labelling::from_pairs(
                    outside
                        .iter()
                        .map(|&a| (a, Label::ALL[(seed as usize + a * 7 + d) % 3])),
                );
                let plan = reduction_plan(&f, &keep, &frozen).unwrap();
                let reduced = plan.apply(&f);
                for local in enumerate_labellings(&reduced) {
                    let full = compose(&frozen, &plan.lift(&local));
                    let labels = full.to_total(f.len()).unwrap();
                    let local_labels = local.to_total(reduced.len()).unwrap();
                    for (i, &a) in plan.kept.iter().enumerate() {
                        assert_eq!(
                            designated_total(&reduced, &local_labels, i),
                            designated_total(&f, &labels, a),
                            "seed {seed}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bottom_up_example1() {
        let f = example1();
        let r = bottom_up_maxi(&f).unwrap();
        assert_eq!(
            r.labellings,
            vec![
                Labelling::total([In, In, Undec, Out, In]),
                Labelling::total([In, Out, In, Out, In]),
                Labelling::total([In, Undec, In, Out, In]),
            ]
        );
        assert_eq!(r.engine, Engine::Scc);
    }

    #[test]
    fn bottom_up_single_scc_matches_brute() {
        let t = q(1, 1, 1, 1);
        let f = build_framework(
            [("a", t), ("b", t), ("c", t)],
            [("a", "b"), ("b", "c"), ("c", "a")],
        )
        .unwrap();
        assert_eq!(sccs(&f).bundles.len(), 1);
        assert_eq!(
            bottom_up_maxi(&f).unwrap().labellings,
            semantics::maximally_proper_semantics(&f).unwrap().labellings
        );
    }
}
