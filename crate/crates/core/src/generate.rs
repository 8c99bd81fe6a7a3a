//! Seeded random instances.
//!
//! Edges are drawn first, row by row over `(attacker, target)` pairs with
//! self-attacks allowed, then tuples argument by argument. A `ChaCha8` stream
//! seeded from the 64-bit seed keeps output stable across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::framework::{parse_decimal, Fraction, Framework, NuanceTuple, RatioPreset};
use crate::io::{Declaration, InstanceDocument, TupleSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleMode {
    /// `dung` directives.
    Dung,
    /// Uniform `may ≤ must` pairs on both scales with entries up to
    /// `max_bound`, or up to in-degree + 1 when unset.
    Uniform { max_bound: Option<u32> },
    /// `ratio` directives with the 80/90/40/50 percentage preset.
    RatioPreset,
}

impl std::str::FromStr for TupleMode {
    type Err = String;

    /// `dung`, `uniform`, `uniform:K` or `ratio`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dung" => Ok(TupleMode::Dung),
            "uniform" => Ok(TupleMode::Uniform { max_bound: None }),
            "ratio" | "ratio-preset" => Ok(TupleMode::RatioPreset),
            _ => match s.strip_prefix("uniform:").map(str::parse) {
                Some(Ok(k)) => Ok(TupleMode::Uniform { max_bound: Some(k) }),
                _ => Err(format!(
                    "unknown tuple mode `{s}` (expected dung, uniform, uniform:K or ratio)"
                )),
            },
        }
    }
}

/// Parses an edge probability written as a decimal in `[0, 1]`.
pub fn parse_probability(text: &str) -> Result<Fraction> {
    parse_decimal(text).map_err(|_| Error::InvalidProbability(text.to_string()))
}

fn bernoulli(rng: &mut ChaCha8Rng, p: Fraction) -> bool {
    rng.gen_range(0..*p.denom()) < *p.numer()
}

/// A uniformly chosen pair `x ≤ y` with both in `0..=bound`.
fn ordered_pair(rng: &mut ChaCha8Rng, bound: u32) -> (u32, u32) {
    let b = bound as u64 + 1;
    let mut k = rng.gen_range(0..b * (b + 1) / 2);
    // pairs are listed by x, each x contributing b - x choices of y
    let mut x = 0u64;
    while k >= b - x {
        k -= b - x;
        x += 1;
    }
    (x as u32, (x + k) as u32)
}

/// The instance as a document, keeping `dung` and `ratio` directives.
pub fn generate_document(
    n: usize,
    edge_prob: Fraction,
    mode: TupleMode,
    seed: u64,
) -> Result<InstanceDocument> {
    if edge_prob > Fraction::from_integer(1) || *edge_prob.denom() == 0 {
        return Err(Error::InvalidProbability(edge_prob.to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let mut attacks = Vec::new();
    let mut in_degree = vec![0u32; n];
    for s in 0..n {
        for (t, degree) in in_degree.iter_mut().enumerate() {
            if bernoulli(&mut rng, edge_prob) {
                attacks.push((s, t));
                *degree += 1;
            }
        }
    }
    let mut declarations = Vec::with_capacity(n + attacks.len());
    for (a, name) in names.iter().enumerate() {
        let spec = match mode {
            TupleMode::Dung => TupleSpec::Dung,
            TupleMode::RatioPreset => TupleSpec::Ratio(RatioPreset::percentage_example()),
            TupleMode::Uniform { max_bound } => {
                let bound = max_bound.unwrap_or(in_degree[a] + 1);
                let (am, a_m) = ordered_pair(&mut rng, bound);
                let (rm, r_m) = ordered_pair(&mut rng, bound);
                TupleSpec::Absolute(NuanceTuple::new(am, a_m, rm, r_m))
            }
        };
        declarations.push(Declaration::Arg {
            id: name.clone(),
            spec,
            line: 0,
        });
    }
    for (s, t) in attacks {
        declarations.push(Declaration::Att {
            src: names[s].clone(),
            dst: names[t].clone(),
            line: 0,
        });
    }
    Ok(InstanceDocument { declarations })
}

pub fn generate_random(n: usize, edge_prob: Fraction, mode: TupleMode, seed: u64) -> Result<Framework> {
    generate_document(n, edge_prob, mode, seed)?.resolve()
}
