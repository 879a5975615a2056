//! Mutants counted from the printed source text: every single-token
//! replacement allowed by the operator tables, plus deletion of every
//! assignment or call line, kept when the edited text still type-checks.

use std::collections::BTreeMap;

use mtcforge_core::coupling::CoupledPair;
use mtcforge_core::minilang::{parse_program, print_program, MethodRef, Program, TypeName};
use mtcforge_core::validation::{enumerate_mutants, generate_mutants, Operator};

const REFERENCE: &str = r#"
class Ref {
    int total;

    int clamp(int x, int lo, int hi) {
        if (x < lo && lo <= hi) {
            return lo;
        } else if (x > hi || hi == 0) {
            return hi;
        }
        total = total + x % 7;
        return x;
    }

    string greet(string name, bool loud) {
        string s = "Hello, " + name;
        if (loud) {
            s = s + "!";
        }
        print(s);
        return s;
    }

    int checksum(list<int> data) {
        int sum = 0;
        int i = 0;
        while (i < len(data) && !false) {
            sum = sum * 31 + data[i];
            i = i + 1;
        }
        total = -1;
        return sum - total;
    }
}
"#;

const ARITH: &[&str] = &["+", "-", "*", "/", "%"];
const REL: &[&str] = &["==", "!=", "<", "<=", ">", ">="];
const COND: &[&str] = &["&&", "||"];

#[derive(Debug, Clone)]
struct Tok {
    start: usize,
    end: usize,
    text: String,
}

/// A minimal scanner: string literals, numbers (with a sign where a value is
/// expected), words, and one- or two-character symbols.
fn tokens(line: &str) -> Vec<Tok> {
    let b = line.as_bytes();
    let mut out: Vec<Tok> = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let value_expected = out.last().is_none_or(|t| {
            let last = t.text.chars().last().unwrap();
            !(last.is_alphanumeric() || last == '_' || last == ')' || last == ']' || last == '"') || t.text == "return"
        });
        if c == '"' {
            i += 1;
            while b[i] != b'"' {
                i += if b[i] == b'\\' { 2 } else { 1 };
            }
            i += 1;
        } else if c.is_ascii_digit() || (c == '-' && value_expected && b.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            i += 1;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        } else if c.is_alphanumeric() || c == '_' {
            while i < b.len() && ((b[i] as char).is_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
        } else if i + 1 < b.len() && ["==", "!=", "<=", ">=", "&&", "||"].contains(&&line[i..i + 2]) {
            i += 2;
        } else {
            i += 1;
        }
        out.push(Tok { start, end: i, text: line[start..i].to_string() });
    }
    out
}

fn is_sdl_line(line: &str) -> bool {
    let t = line.trim();
    if !t.ends_with(';') || ["return", "throw", "assert"].iter().any(|k| t.starts_with(k)) {
        return false;
    }
    // `Type name = ...` declares; `target = ...` and `call(...)` do not.
    let before_eq = t.split(" = ").next().unwrap();
    t.contains(" = ") && !before_eq.contains(' ') || !t.contains(" = ")
}

type Found = Vec<(Operator, String, String)>;

/// Line range of a method body in the printed text.
fn body_lines(printed: &str, header: &str) -> std::ops::Range<usize> {
    let lines: Vec<&str> = printed.lines().collect();
    let start = lines.iter().position(|l| l.trim_start().starts_with(header)).unwrap() + 1;
    let end = (start..lines.len()).find(|&i| lines[i] == "    }").unwrap();
    start..end
}

fn oracle(printed: &str, header: &str) -> Found {
    let lines: Vec<&str> = printed.lines().collect();
    let mut found = Vec::new();
    let try_text = |lines: &[String]| parse_program(&[("ref.mini", lines.join("\n"))]).is_ok();
    let with_line = |i: usize, new: String| {
        let mut v: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        v[i] = new;
        v
    };
    for i in body_lines(printed, header) {
        let line = lines[i];
        if is_sdl_line(line) {
            let mut v: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
            v.remove(i);
            if try_text(&v) {
                found.push((Operator::SDL, line.trim().to_string(), String::new()));
            }
        }
        for t in tokens(line) {
            let mut alts: Vec<(Operator, String)> = Vec::new();
            for (op, table) in [(Operator::AOR, ARITH), (Operator::ROR, REL), (Operator::COR, COND)] {
                if table.contains(&t.text.as_str()) {
                    alts.extend(table.iter().filter(|a| **a != t.text).map(|a| (op, a.to_string())));
                }
            }
            if let Ok(k) = t.text.parse::<i64>() {
                let mut ks: Vec<i64> = Vec::new();
                for v in [k + 1, k - 1, 0] {
                    if v != k && !ks.contains(&v) {
                        ks.push(v);
                    }
                }
                alts.extend(ks.into_iter().map(|v| (Operator::LVR, v.to_string())));
            }
            match t.text.as_str() {
                "true" => alts.push((Operator::LVR, "false".into())),
                "false" => alts.push((Operator::LVR, "true".into())),
                s if s.len() > 2 && s.starts_with('"') => alts.push((Operator::LVR, "\"\"".into())),
                _ => {}
            }
            for (op, alt) in alts {
                // a sign must not merge with a preceding minus
                let spaced = if alt.starts_with('-') && line[..t.start].ends_with('-') { format!("({alt})") } else { alt.clone() };
                let new = format!("{}{}{}", &line[..t.start], spaced, &line[t.end..]);
                if try_text(&with_line(i, new)) {
                    found.push((op, t.text.clone(), alt));
                }
            }
        }
    }
    found
}

fn pair(a: &str, pa: Vec<TypeName>, b: &str, pb: Vec<TypeName>) -> CoupledPair {
    CoupledPair { target: MethodRef::new("Ref", a, pa), candidate: MethodRef::new("Ref", b, pb), features: vec![] }
}

fn breakdown(found: &Found) -> BTreeMap<Operator, usize> {
    let mut m = BTreeMap::new();
    for (op, _, _) in found {
        *m.entry(*op).or_default() += 1;
    }
    m
}

fn engine(program: &Program, p: &CoupledPair) -> Found {
    enumerate_mutants(program, p).into_iter().map(|m| (m.operator, m.diff_token.0, m.diff_token.1)).collect()
}

pub fn engine_matches_textual_enumeration_on_reference_bodies() {
    let program = parse_program(&[("ref.mini", REFERENCE)]).unwrap();
    let printed = print_program(&program);
    let clamp = oracle(&printed, "int clamp(");
    let greet = oracle(&printed, "string greet(");
    let checksum = oracle(&printed, "int checksum(");

    let ints = || vec![TypeName::Int; 3];
    let cases = [
        (pair("clamp", ints(), "greet", vec![TypeName::Str, TypeName::Bool]), [clamp.clone(), greet.clone()].concat()),
        (pair("checksum", vec![TypeName::list_of(TypeName::Int)], "clamp", ints()), [checksum.clone(), clamp.clone()].concat()),
    ];
    for (p, want) in &cases {
        let got = engine(&program, p);
        assert_eq!(got.len(), want.len(), "{}", p.slug());
        assert_eq!(breakdown(&got), breakdown(want), "{}", p.slug());
        let (mut g, mut w) = (got.clone(), want.clone());
        g.sort();
        w.sort();
        assert_eq!(g, w, "{}", p.slug());
    }

    // The string concatenations admit no arithmetic replacement.
    assert!(!greet.iter().any(|(op, _, _)| *op == Operator::AOR));
    assert_eq!(breakdown(&greet)[&Operator::LVR], 2);
}

pub fn sampling_keeps_a_subset_in_order() {
    let program = parse_program(&[("ref.mini", REFERENCE)]).unwrap();
    let p = pair("checksum", vec![TypeName::list_of(TypeName::Int)], "clamp", vec![TypeName::Int; 3]);
    let all = enumerate_mutants(&program, &p);
    assert!(all.len() > 20);
    let some = generate_mutants(&program, &p, 20, 3);
    assert_eq!(some.len(), 20);
    let ids: Vec<&str> = some.iter().map(|m| m.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(some.iter().all(|m| all.iter().any(|a| a.id == m.id && a.diff_token == m.diff_token)));
    let again: Vec<String> = generate_mutants(&program, &p, 20, 3).into_iter().map(|m| m.id).collect();
    assert_eq!(again, ids);
}
