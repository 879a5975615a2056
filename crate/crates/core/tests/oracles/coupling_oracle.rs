//! Random classes are generated together with the facts each method was
//! built from; a brute-force evaluation of the six coupling predicates over
//! those facts must agree with `analyze_coupling` on the parsed source.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::time::Instant;

use mtcforge_core::coupling::{analyze_coupling, CouplingConfig, Label};
use mtcforge_core::minilang::{parse_program, MethodRef, TypeName};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VOCAB: &[&str] = &["encrypt", "decrypt", "text", "key", "value", "count", "load", "store", "item", "bytes"];
const TYPES: &[&str] = &["int", "string", "bool", "list<int>"];
const BUILTIN_STMTS: &[(&str, &str)] =
    &[("print", "print(\"x\");"), ("len", "len(\"ab\");"), ("abs", "abs(1);"), ("max", "max(1, 2);")];
const IGNORED: &[&str] = &["print", "len"];

#[derive(Clone)]
struct Spec {
    name: String,
    tokens: BTreeSet<String>,
    params: Vec<&'static str>,
    ret: &'static str,
    calls: BTreeSet<String>,
    reads: BTreeSet<usize>,
    writes: BTreeSet<usize>,
    body: Vec<String>,
}

impl Spec {
    fn key(&self) -> String {
        format!("{}({})", self.name, self.params.join(","))
    }

    fn types(&self) -> BTreeSet<&'static str> {
        let mut t: BTreeSet<&str> = self.params.iter().copied().collect();
        if self.ret != "void" {
            t.insert(self.ret);
        }
        t
    }
}

fn default_value(ty: &str) -> &'static str {
    match ty {
        "int" => "0",
        "string" => "\"\"",
        "bool" => "false",
        _ => "[]",
    }
}

fn camel(tokens: &[&str]) -> String {
    let mut s = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i == 0 {
            s.push_str(t);
        } else {
            s.push_str(&t[..1].to_uppercase());
            s.push_str(&t[1..]);
        }
    }
    s
}

fn generate(rng: &mut ChaCha8Rng) -> (String, Vec<Spec>) {
    let n_fields = rng.gen_range(0..=6);
    let n_methods = rng.gen_range(1..=12);
    let mut specs: Vec<Spec> = Vec::new();
    while specs.len() < n_methods {
        let (name, tokens) = if !specs.is_empty() && rng.gen_bool(0.15) {
            let s = specs.choose(rng).unwrap();
            (s.name.clone(), s.tokens.clone())
        } else {
            let k = rng.gen_range(1..=2);
            let toks: Vec<&str> = VOCAB.choose_multiple(rng, k).copied().collect();
            let mut parts = toks.clone();
            // a stoplisted prefix contributes no token
            if rng.gen_bool(0.2) {
                parts.insert(0, "get");
            }
            (camel(&parts), toks.iter().map(|t| t.to_string()).collect())
        };
        let params: Vec<&str> = (0..rng.gen_range(0..=3)).map(|_| *TYPES.choose(rng).unwrap()).collect();
        let ret = if rng.gen_bool(0.3) { "void" } else { *TYPES.choose(rng).unwrap() };
        let spec = Spec {
            name,
            tokens,
            params,
            ret,
            calls: BTreeSet::new(),
            reads: BTreeSet::new(),
            writes: BTreeSet::new(),
            body: Vec::new(),
        };
        if specs.iter().all(|s| s.key() != spec.key()) {
            specs.push(spec);
        }
    }
    let sigs: Vec<(String, Vec<&str>)> = specs.iter().map(|s| (s.name.clone(), s.params.clone())).collect();
    for spec in specs.iter_mut() {
        for v in 0..rng.gen_range(0..=5) {
            match rng.gen_range(0..6) {
                0 | 1 if n_fields > 0 => {
                    let f = rng.gen_range(0..n_fields);
                    match rng.gen_range(0..3) {
                        0 => {
                            spec.body.push(format!("int v{v} = f{f};"));
                            spec.reads.insert(f);
                        }
                        1 => {
                            spec.body.push(format!("f{f} = {v};"));
                            spec.writes.insert(f);
                        }
                        _ => {
                            spec.body.push(format!("f{f} = f{f} + 1;"));
                            spec.reads.insert(f);
                            spec.writes.insert(f);
                        }
                    }
                }
                2 => {
                    let (name, params) = sigs.choose(rng).unwrap();
                    let args: Vec<&str> = params.iter().map(|t| default_value(t)).collect();
                    spec.body.push(format!("{name}({});", args.join(", ")));
                    spec.calls.insert(format!("K.{name}({})", params.join(",")));
                }
                3 => {
                    let j = rng.gen_range(0..3);
                    spec.body.push(format!("H.util{j}(1);"));
                    spec.calls.insert(format!("H.util{j}"));
                }
                4 => {
                    spec.body.push(format!("H h{v} = new H();"));
                    spec.calls.insert("new H".into());
                }
                _ => {
                    let (name, stmt) = BUILTIN_STMTS.choose(rng).unwrap();
                    spec.body.push(stmt.to_string());
                    spec.calls.insert(format!("builtin {name}"));
                }
            }
        }
    }
    let mut src = String::from("class H {\n    static int util0(int x) { return x; }\n    static int util1(int x) { return x; }\n    static int util2(int x) { return x; }\n}\nclass K {\n");
    for f in 0..n_fields {
        writeln!(src, "    int f{f};").unwrap();
    }
    for s in &specs {
        let params: Vec<String> = s.params.iter().enumerate().map(|(i, t)| format!("{t} p{i}")).collect();
        writeln!(src, "    {} {}({}) {{", s.ret, s.name, params.join(", ")).unwrap();
        for line in &s.body {
            writeln!(src, "        {line}").unwrap();
        }
        if s.ret != "void" {
            writeln!(src, "        return {};", default_value(s.ret)).unwrap();
        }
        src.push_str("    }\n");
    }
    src.push_str("}\n");
    (src, specs)
}

/// The six predicates, written directly from their definitions.
fn oracle(t: &Spec, c: &Spec) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    if t.name == c.name {
        out.insert(Label::Overloading);
    } else if !t.tokens.is_disjoint(&c.tokens) && !t.types().is_disjoint(&c.types()) {
        out.insert(Label::SharedSigTokensAndTypes);
    }
    let t_calls_c = t.calls.contains(&format!("K.{}", c.key()));
    let c_calls_t = c.calls.contains(&format!("K.{}", t.key()));
    if t_calls_c || c_calls_t {
        out.insert(Label::DirectCall);
    } else if t.calls.intersection(&c.calls).any(|x| !IGNORED.iter().any(|i| x == &format!("builtin {i}"))) {
        out.insert(Label::SharedCalls);
    }
    if !t.writes.is_disjoint(&c.reads) || !c.writes.is_disjoint(&t.reads) {
        out.insert(Label::DirectDataDep);
    } else if !t.reads.is_disjoint(&c.reads) || !t.writes.is_disjoint(&c.writes) {
        out.insert(Label::SharedState);
    }
    out
}

fn type_name(t: &str) -> TypeName {
    match t {
        "int" => TypeName::Int,
        "string" => TypeName::Str,
        "bool" => TypeName::Bool,
        _ => TypeName::list_of(TypeName::Int),
    }
}

pub fn coupling_matches_brute_force_on_1000_classes() {
    let start = Instant::now();
    let cfg = CouplingConfig::default();
    let mut compared = 0usize;
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (src, specs) = generate(&mut rng);
        let program = parse_program(&[("K.mini", src.as_str())]).unwrap_or_else(|d| panic!("seed {seed}: {d:?}\n{src}"));
        for t in &specs {
            let target = MethodRef::new("K", t.name.clone(), t.params.iter().map(|p| type_name(p)).collect());
            let got: BTreeSet<(String, Label)> = analyze_coupling(&program, &target, &cfg)
                .unwrap()
                .into_iter()
                .flat_map(|p| {
                    let key = format!("{}({})", p.candidate.name, p.candidate.params.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                    p.labels().into_iter().map(move |l| (key.clone(), l))
                })
                .collect();
            let want: BTreeSet<(String, Label)> = specs
                .iter()
                .filter(|c| c.key() != t.key())
                .flat_map(|c| oracle(t, c).into_iter().map(move |l| (c.key(), l)))
                .collect();
            assert_eq!(got, want, "seed {seed}, target {}\n{src}", t.key());
            compared += 1;
        }
    }
    assert!(compared >= 1000);
    assert!(start.elapsed().as_secs() < 30, "took {:?}", start.elapsed());
}
