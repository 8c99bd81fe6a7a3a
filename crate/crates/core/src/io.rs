//! The `.mmaf` instance format and result renderers.
//!
//! ```text
//! # comment
//! arg <id> <acc_may> <acc_must> <rej_may> <rej_must>
//! arg <id> dung
//! arg <id> ratio <am> <aM> <rm> <rM> [floor <k>]
//! att <src> <dst>
//! ```
//!
//! `dung` and `ratio` tuples depend on in-degree and are resolved once every
//! attack has been read.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::framework::{
    build_framework, parse_decimal, Fraction, Framework, Label, Labelling, NuanceTuple,
    RatioPreset,
};
use crate::semantics::SemanticsResult;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleSpec {
    Absolute(NuanceTuple),
    Dung,
    Ratio(RatioPreset),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Declaration {
    /// `line` is 1-based, or 0 for generated declarations.
    Arg { id: String, spec: TupleSpec, line: usize },
    Att { src: String, dst: String, line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceDocument {
    pub declarations: Vec<Declaration>,
}

fn number(tok: &str, line: usize) -> Result<u32> {
    tok.parse()
        .map_err(|_| Error::syntax(line, format!("expected a natural number, found `{tok}`")))
}

fn fraction(tok: &str, line: usize) -> Result<Fraction> {
    parse_decimal(tok).map_err(|_| {
        Error::syntax(line, format!("expected a decimal fraction in [0, 1], found `{tok}`"))
    })
}

fn parse_arg(toks: &[&str], line: usize) -> Result<Declaration> {
    let id = toks
        .first()
        .ok_or_else(|| Error::syntax(line, "`arg` needs an identifier"))?
        .to_string();
    let spec = match &toks[1..] {
        ["dung"] => TupleSpec::Dung,
        ["ratio", rest @ ..] => {
            let (fracs, floor) = match rest {
                [a, b, c, d] => ([*a, *b, *c, *d], 0),
                [a, b, c, d, "floor", k] => ([*a, *b, *c, *d], number(k, line)?),
                _ => {
                    return Err(Error::syntax(
                        line,
                        "`ratio` takes four fractions and an optional `floor <k>`",
                    ))
                }
            };
            TupleSpec::Ratio(RatioPreset {
                acc_may: fraction(fracs[0], line)?,
                acc_must: fraction(fracs[1], line)?,
                rej_may: fraction(fracs[2], line)?,
                rej_must: fraction(fracs[3], line)?,
                rej_floor: floor,
            })
        }
        [a, b, c, d] => TupleSpec::Absolute(NuanceTuple::new(
            number(a, line)?,
            number(b, line)?,
            number(c, line)?,
            number(d, line)?,
        )),
        _ => {
            return Err(Error::syntax(
                line,
                "`arg` takes four numbers, `dung`, or a `ratio` directive",
            ))
        }
    };
    Ok(Declaration::Arg { id, spec, line })
}

pub fn parse_document(text: &str) -> Result<InstanceDocument> {
    let mut declarations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw
            .split_whitespace()
            .take_while(|t| !t.starts_with('#'))
            .collect();
        match toks.as_slice() {
            [] => {}
            ["arg", rest @ ..] => declarations.push(parse_arg(rest, line)?),
            ["att", src, dst] => declarations.push(Declaration::Att {
                src: src.to_string(),
                dst: dst.to_string(),
                line,
            }),
            ["att", ..] => return Err(Error::syntax(line, "`att` takes exactly two identifiers")),
            [other, ..] => {
                return Err(Error::syntax(line, format!("unknown declaration `{other}`")))
            }
        }
    }
    Ok(InstanceDocument { declarations })
}

impl InstanceDocument {
    /// Resolves directives against the final in-degrees and validates.
    pub fn resolve(&self) -> Result<Framework> {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut args = Vec::new();
        let mut attacks = Vec::new();
        for d in &self.declarations {
            match d {
                Declaration::Arg { id, spec, .. } => {
                    if ids.insert(id, args.len()).is_some() {
                        return Err(Error::DuplicateArgument(id.clone()));
                    }
                    args.push((id.as_str(), spec));
                }
                Declaration::Att { src, dst, .. } => attacks.push((src.as_str(), dst.as_str())),
            }
        }
        let mut attackers: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); args.len()];
        for &(s, t) in &attacks {
            for id in [s, t] {
                if !ids.contains_key(id) {
                    return Err(Error::UnknownArgumentInAttack(id.to_string()));
                }
            }
            attackers[ids[t]].insert(s);
        }
        let resolved = args
            .iter()
            .zip(&attackers)
            .map(|(&(id, spec), att)| {
                let d = att.len() as u32;
                let tuple = match spec {
                    TupleSpec::Absolute(t) => *t,
                    TupleSpec::Dung => NuanceTuple::dung(d),
                    TupleSpec::Ratio(r) => r.tuple_for(d)?,
                };
                Ok((id, tuple))
            })
            .collect::<Result<Vec<_>>>()?;
        build_framework(resolved, attacks)
    }

    /// The framework with every tuple written out.
    pub fn from_framework(f: &Framework) -> Self {
        let mut declarations: Vec<Declaration> = (0..f.len())
            .map(|a| Declaration::Arg {
                id: f.name(a).to_string(),
                spec: TupleSpec::Absolute(f.tuple(a)),
                line: 0,
            })
            .collect();
        declarations.extend(f.attacks().map(|(s, t)| Declaration::Att {
            src: f.name(s).to_string(),
            dst: f.name(t).to_string(),
            line: 0,
        }));
        InstanceDocument { declarations }
    }
}

/// Writes an exact decimal; every fraction read from a file has one.
fn decimal(x: Fraction) -> String {
    let (num, den) = (*x.numer(), *x.denom());
    let mut digits = 0u32;
    let mut scale = 1u128;
    while !scale.is_multiple_of(den as u128) {
        scale *= 10;
        digits += 1;
        if digits > 38 {
            // not a terminating decimal; fall back to rational notation
            return format!("{num}/{den}");
        }
    }
    let scaled = num as u128 * (scale / den as u128);
    if digits == 0 {
        return scaled.to_string();
    }
    let p = 10u128.pow(digits);
    format!("{}.{:0width$}", scaled / p, scaled % p, width = digits as usize)
}

impl fmt::Display for InstanceDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.declarations {
            match d {
                Declaration::Arg { id, spec, .. } => match spec {
                    TupleSpec::Absolute(t) => writeln!(
                        f,
                        "arg {id} {} {} {} {}",
                        t.acc_may, t.acc_must, t.rej_may, t.rej_must
                    )?,
                    TupleSpec::Dung => writeln!(f, "arg {id} dung")?,
                    TupleSpec::Ratio(r) => {
                        write!(
                            f,
                            "arg {id} ratio {} {} {} {}",
                            decimal(r.acc_may),
                            decimal(r.acc_must),
                            decimal(r.rej_may),
                            decimal(r.rej_must)
                        )?;
                        if r.rej_floor != 0 {
                            write!(f, " floor {}", r.rej_floor)?;
                        }
                        writeln!(f)?;
                    }
                },
                Declaration::Att { src, dst, .. } => writeln!(f, "att {src} {dst}")?,
            }
        }
        Ok(())
    }
}

pub fn parse_mmaf(text: &str) -> Result<Framework> {
    parse_document(text)?.resolve()
}

pub fn serialize_mmaf(f: &Framework) -> String {
    InstanceDocument::from_framework(f).to_string()
}

fn labelling_object(f: &Framework, l: &Labelling) -> Value {
    let mut m = Map::new();
    for (a, lab) in l.iter() {
        m.insert(f.name(a).to_string(), Value::from(lab.as_str()));
    }
    Value::Object(m)
}

pub fn result_json(f: &Framework, r: &SemanticsResult) -> Value {
    let mut m = Map::new();
    m.insert("semantics".into(), r.semantics.as_str().into());
    m.insert("engine".into(), r.engine.as_str().into());
    m.insert("count".into(), r.len().into());
    m.insert(
        "labellings".into(),
        Value::Array(r.labellings.iter().map(|l| labelling_object(f, l)).collect()),
    );
    Value::Object(m)
}

pub fn render_json(f: &Framework, r: &SemanticsResult) -> String {
    let mut s = serde_json::to_string_pretty(&result_json(f, r)).expect("json values serialize");
    s.push('\n');
    s
}

pub fn render_text(f: &Framework, r: &SemanticsResult) -> String {
    let mut s = format!("{} ({} engine): ", r.semantics, r.engine);
    if r.is_empty() {
        s.push_str("none\n");
        return s;
    }
    s.push_str(&format!("{} labelling(s)\n", r.len()));
    for l in &r.labellings {
        s.push_str("  ");
        s.push_str(&f.show(l));
        s.push('\n');
    }
    s
}

fn dot_id(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

fn colour(l: Label) -> &'static str {
    match l {
        Label::In => "green",
        Label::Out => "red",
        Label::Undec => "gray",
    }
}

fn dot_graph(f: &Framework, name: &str, l: Option<&Labelling>) -> String {
    let mut s = format!("digraph {name} {{\n");
    for a in 0..f.len() {
        let id = dot_id(f.name(a));
        match l.and_then(|l| l.get(a)) {
            Some(lab) => s.push_str(&format!(
                "  {id} [style=filled, fillcolor={}, xlabel=\"{lab}\"];\n",
                colour(lab)
            )),
            None => s.push_str(&format!("  {id};\n")),
        }
    }
    for (src, dst) in f.attacks() {
        s.push_str(&format!("  {} -> {};\n", dot_id(f.name(src)), dot_id(f.name(dst))));
    }
    s.push_str("}\n");
    s
}

/// The first labelling as a coloured graph, or one graph per labelling when
/// `all` is set. An empty result yields the bare attack graph.
pub fn render_dot(f: &Framework, r: &SemanticsResult, all: bool) -> String {
    if r.is_empty() {
        return dot_graph(f, "framework", None);
    }
    let take = if all { r.len() } else { 1 };
    r.labellings
        .iter()
        .take(take)
        .enumerate()
        .map(|(i, l)| dot_graph(f, &format!("labelling_{}", i + 1), Some(l)))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_document, generate_random, TupleMode};
    use crate::semantics::{exact_semantics, Engine, SemanticsName};
    use proptest::prelude::*;
    use Label::*;

    const EXAMPLE1: &str = "\
# five arguments
arg a1 0 0 1 1
arg a2 0 1 1 2
arg a3 1 1 1 1
arg a4 1 1 1 1
arg a5 0 0 1 1
att a1 a2
att a2 a3
att a4 a3   # two attackers on a3
att a5 a4
";

    #[test]
    fn parses_example1() {
        let f = parse_mmaf(EXAMPLE1).unwrap();
        let expected = build_framework(
            [
                ("a1", NuanceTuple::new(0, 0, 1, 1)),
                ("a2", NuanceTuple::new(0, 1, 1, 2)),
                ("a3", NuanceTuple::new(1, 1, 1, 1)),
                ("a4", NuanceTuple::new(1, 1, 1, 1)),
                ("a5", NuanceTuple::new(0, 0, 1, 1)),
            ],
            [("a1", "a2"), ("a2", "a3"), ("a4", "a3"), ("a5", "a4")],
        )
        .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn directives_resolve_after_attacks() {
        let f = parse_mmaf("arg a dung\natt a a\n").unwrap();
        assert_eq!(f.tuple(0), NuanceTuple::new(1, 1, 1, 1));

        let text = "arg x ratio 0.8 0.9 0.4 0.5 floor 1\n\
                    arg y 0 0 1 1\narg z 0 0 1 1\natt y x\natt z x\n";
        let f = parse_mmaf(text).unwrap();
        assert_eq!(f.tuple(0), NuanceTuple::new(2, 2, 1, 1));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_mmaf("arg a 2 1 0 0"),
            Err(Error::MayExceedsMust { .. })
        ));
        assert_eq!(
            parse_mmaf("arg a 0 0 1 1\natt a b"),
            Err(Error::UnknownArgumentInAttack("b".into()))
        );
        assert_eq!(
            parse_mmaf("arg a 0 0 1 1\narg a dung"),
            Err(Error::DuplicateArgument("a".into()))
        );
        for (text, line) in [
            ("arg a 0 0 1", 1),
            ("\n\nfoo bar", 3),
            ("arg a 0 0 1 1\natt a", 2),
            ("arg a -1 0 1 1", 1),
            ("arg a ratio 0.8 0.9 0.4", 1),
            ("arg a ratio 0.8 0.9 0.4 1.5", 1),
            ("arg a ratio 0.8 0.9 0.4 0.5 floor", 1),
        ] {
            match parse_mmaf(text) {
                Err(Error::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert_eq!(
            parse_mmaf("arg a ratio 0.9 0.8 0.4 0.5"),
            Err(Error::FractionOrderViolation)
        );
    }

    #[test]
    fn decimals_print_exactly() {
        assert_eq!(decimal(Fraction::new(8, 10)), "0.8");
        assert_eq!(decimal(Fraction::new(1, 1)), "1");
        assert_eq!(decimal(Fraction::new(0, 1)), "0");
        assert_eq!(decimal(Fraction::new(1, 8)), "0.125");
        assert_eq!(decimal(Fraction::new(7, 100)), "0.07");
    }

    #[test]
    fn directive_documents_round_trip() {
        for mode in [TupleMode::Dung, TupleMode::RatioPreset] {
            let doc = generate_document(5, Fraction::new(3, 10), mode, 7).unwrap();
            let reparsed = parse_document(&doc.to_string()).unwrap();
            assert_eq!(reparsed.resolve().unwrap(), doc.resolve().unwrap());
            assert_eq!(reparsed.to_string(), doc.to_string());
        }
    }

    #[test]
    fn json_rendering() {
        let f = parse_mmaf(EXAMPLE1).unwrap();
        let r = exact_semantics(&f);
        let v: Value = serde_json::from_str(&render_json(&f, &r)).unwrap();
        assert_eq!(v["semantics"], "exact");
        assert_eq!(v["engine"], "brute");
        assert_eq!(v["count"], 3);
        assert_eq!(v["labellings"][0]["a1"], "in");
        let keys: Vec<&String> = v["labellings"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["a1", "a2", "a3", "a4", "a5"]);
    }

    #[test]
    fn text_and_dot_rendering() {
        let f = parse_mmaf("arg a 0 0 1 1\narg b 1 1 1 1\natt a b\n").unwrap();
        let r = SemanticsResult::new(
            SemanticsName::Exact,
            Engine::Brute,
            vec![Labelling::total([In, Out])],
        );
        assert_eq!(render_text(&f, &r), "exact (brute engine): 1 labelling(s)\n  [a:in, b:out]\n");
        let dot = render_dot(&f, &r, false);
        assert!(dot.contains("\"a\" [style=filled, fillcolor=green"));
        assert!(dot.contains("\"b\" [style=filled, fillcolor=red"));
        assert!(dot.contains("\"a\" -> \"b\";"));

        let empty = SemanticsResult::new(SemanticsName::MaxiStable, Engine::Brute, vec![]);
        assert_eq!(render_text(&f, &empty), "maxi-stable (brute engine): none\n");
        assert!(!render_dot(&f, &empty, false).contains("fillcolor"));

        let two = SemanticsResult::new(
            SemanticsName::Exact,
            Engine::Brute,
            vec![Labelling::total([In, Out]), Labelling::total([Undec, Undec])],
        );
        assert_eq!(render_dot(&f, &two, false).matches("digraph").count(), 1);
        assert_eq!(render_dot(&f, &two, true).matches("digraph").count(), 2);
        assert!(render_dot(&f, &two, true).contains("fillcolor=gray"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn serialize_round_trips(n in 0usize..9, p in 0u64..=10, seed in any::<u64>(), bound in 0u32..4) {
            let f = generate_random(
                n,
                Fraction::new(p, 10),
                TupleMode::Uniform { max_bound: Some(bound) },
                seed,
            ).unwrap();
            prop_assert_eq!(parse_mmaf(&serialize_mmaf(&f)).unwrap(), f);
        }
    }
}
