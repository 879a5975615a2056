//! Tree-walking interpreter and test runner.
//!
//! Each `@Test` method runs against fresh program state: static fields are
//! (lazily) re-initialized, so test order never affects outcomes. The only
//! non-structural input is the wall-clock guard, which only ever converts a
//! long-running test into `TIMEOUT`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::ast::*;
use super::typeck::{check_test_class, Callee, FieldRef, IdentRes, TypeInfo};

const MAX_CALL_DEPTH: usize = 128;
const CLOCK_CHECK_INTERVAL: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OutcomeKind {
    Pass,
    AssertFail,
    RuntimeError,
    Timeout,
    CompileError,
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OutcomeKind::Pass => "PASS",
            OutcomeKind::AssertFail => "ASSERT_FAIL",
            OutcomeKind::RuntimeError => "RUNTIME_ERROR",
            OutcomeKind::Timeout => "TIMEOUT",
            OutcomeKind::CompileError => "COMPILE_ERROR",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub kind: OutcomeKind,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_assertion: Option<NodeId>,
}

impl TestOutcome {
    fn pass() -> Self {
        TestOutcome { kind: OutcomeKind::Pass, message: String::new(), failed_assertion: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    pub max_steps: u64,
    #[serde(with = "duration_ms")]
    pub per_test_timeout: Duration,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_steps: 1_000_000, per_test_timeout: Duration::from_secs(2) }
    }
}

mod duration_ms {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

/// Result of running one test class.
///
/// A class that fails to type-check yields `class_error` (kind
/// `COMPILE_ERROR`) and no per-method outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestClassRun {
    pub class_error: Option<TestOutcome>,
    pub outcomes: BTreeMap<String, TestOutcome>,
}

impl TestClassRun {
    pub fn passed(&self) -> usize {
        self.outcomes.values().filter(|o| o.kind == OutcomeKind::Pass).count()
    }

    pub fn total(&self) -> usize {
        self.outcomes.len()
    }

    pub fn all_pass(&self) -> bool {
        self.class_error.is_none() && self.total() > 0 && self.passed() == self.total()
    }

    pub fn all_runtime_errors(&self) -> bool {
        self.class_error.is_some() || self.outcomes.values().all(|o| o.kind == OutcomeKind::RuntimeError)
    }
}

pub fn run_test_class(program: &Program, tests: &TestClass, limits: &Limits) -> TestClassRun {
    let path = format!("{}.mini", tests.name());
    let test_info = match check_test_class(program, tests, &path) {
        Ok(info) => info,
        Err(diags) => {
            let message = diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n");
            return TestClassRun {
                class_error: Some(TestOutcome { kind: OutcomeKind::CompileError, message, failed_assertion: None }),
                outcomes: BTreeMap::new(),
            };
        }
    };
    let mut outcomes = BTreeMap::new();
    for method in tests.test_methods() {
        let mut interp = Interp::new(program, &tests.decl, &test_info, *limits);
        outcomes.insert(method.name.clone(), interp.run_test(method));
    }
    TestClassRun { class_error: None, outcomes }
}

#[derive(Clone)]
pub enum Value {
    Unit,
    Null,
    Int(i64),
    Bool(bool),
    Str(Rc<str>),
    List(Rc<Vec<Value>>),
    Obj(Rc<RefCell<Object>>),
}

pub struct Object {
    class: String,
    fields: BTreeMap<String, Value>,
}

impl Value {
    fn default_for(ty: &TypeName) -> Value {
        match ty {
            TypeName::Int => Value::Int(0),
            TypeName::Bool => Value::Bool(false),
            TypeName::Unit => Value::Unit,
            _ => Value::Null,
        }
    }

    /// Value equality: deep for strings and lists, identity for objects.
    pub fn equals(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Unit, Value::Unit) | (Value::Null, Value::Null) => true,
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::List(a), Value::List(b)) => a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x.equals(y)),
            (Value::Obj(a), Value::Obj(b)) => Rc::ptr_eq(a, b),
            _ => false,
        }
    }

    fn concat_repr(&self) -> String {
        match self {
            Value::Str(s) => s.to_string(),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Null => f.write_str("null"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(&super::printer::quote(s)),
            Value::List(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            Value::Obj(o) => write!(f, "<{} object>", o.borrow().class),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

enum Trap {
    Assert { message: String, node: NodeId },
    Runtime(String),
    Timeout,
}

type Exec<T> = Result<T, Trap>;

fn rt<T>(msg: impl Into<String>) -> Exec<T> {
    Err(Trap::Runtime(msg.into()))
}

enum Flow {
    Normal,
    Return(Value),
}

struct Frame<'p> {
    class: &'p str,
    this: Option<Rc<RefCell<Object>>>,
    scopes: Vec<HashMap<String, Value>>,
}

impl Frame<'_> {
    fn lookup(&self, name: &str) -> Option<&Value> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn assign(&mut self, name: &str, value: Value) -> bool {
        for scope in self.scopes.iter_mut().rev() {
            if let Some(slot) = scope.get_mut(name) {
                *slot = value;
                return true;
            }
        }
        false
    }
}

struct Interp<'p> {
    classes: HashMap<&'p str, &'p ClassDecl>,
    methods: HashMap<MethodRef, &'p MethodDecl>,
    prog_info: &'p TypeInfo,
    test_info: &'p TypeInfo,
    test_class: &'p str,
    statics: HashMap<FieldRef, Value>,
    initialized: HashSet<&'p str>,
    steps: u64,
    limits: Limits,
    started: Instant,
    depth: usize,
}

impl<'p> Interp<'p> {
    fn new(program: &'p Program, test: &'p ClassDecl, test_info: &'p TypeInfo, limits: Limits) -> Self {
        let mut classes: HashMap<&str, &ClassDecl> = program.classes.iter().map(|c| (c.name.as_str(), c)).collect();
        classes.insert(test.name.as_str(), test);
        let mut methods = HashMap::new();
        for c in classes.values() {
            for m in &c.methods {
                methods.insert(m.method_ref(&c.name), m);
            }
        }
        Interp {
            classes,
            methods,
            prog_info: program.type_info(),
            test_info,
            test_class: test.name.as_str(),
            statics: HashMap::new(),
            initialized: HashSet::new(),
            steps: 0,
            limits,
            started: Instant::now(),
            depth: 0,
        }
    }

    fn run_test(&mut self, method: &'p MethodDecl) -> TestOutcome {
        self.started = Instant::now();
        let result = (|| {
            let this = if method.is_static { None } else { Some(self.instantiate(self.test_class)?) };
            self.invoke(self.test_class, method, this, Vec::new()).map(|_| ())
        })();
        match result {
            Ok(()) => TestOutcome::pass(),
            Err(Trap::Assert { message, node }) => {
                TestOutcome { kind: OutcomeKind::AssertFail, message, failed_assertion: Some(node) }
            }
            Err(Trap::Runtime(message)) => TestOutcome { kind: OutcomeKind::RuntimeError, message, failed_assertion: None },
            Err(Trap::Timeout) => TestOutcome {
                kind: OutcomeKind::Timeout,
                message: format!("exceeded {} steps or {:?}", self.limits.max_steps, self.limits.per_test_timeout),
                failed_assertion: None,
            },
        }
    }

    fn info(&self, class: &str) -> &'p TypeInfo {
        if class == self.test_class {
            self.test_info
        } else {
            self.prog_info
        }
    }

    fn tick(&mut self) -> Exec<()> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(Trap::Timeout);
        }
        if self.steps % CLOCK_CHECK_INTERVAL == 0 && self.started.elapsed() > self.limits.per_test_timeout {
            return Err(Trap::Timeout);
        }
        Ok(())
    }

    fn ensure_init(&mut self, class: &'p str) -> Exec<()> {
        if !self.initialized.insert(class) {
            return Ok(());
        }
        let decl = self.classes[class];
        for f in decl.fields.iter().filter(|f| f.is_static) {
            self.statics.insert(FieldRef::new(class, f.name.clone()), Value::default_for(&f.ty));
        }
        for f in decl.fields.iter().filter(|f| f.is_static) {
            if let Some(init) = &f.init {
                let mut frame = Frame { class: &decl.name, this: None, scopes: vec![HashMap::new()] };
                let v = self.eval(init, &mut frame)?;
                self.statics.insert(FieldRef::new(class, f.name.clone()), v);
            }
        }
        Ok(())
    }

    fn instantiate(&mut self, class: &str) -> Exec<Rc<RefCell<Object>>> {
        let Some(decl) = self.classes.get(class).copied() else {
            return rt(format!("unknown class {class}"));
        };
        self.ensure_init(&decl.name)?;
        let fields = decl
            .fields
            .iter()
            .filter(|f| !f.is_static)
            .map(|f| (f.name.clone(), Value::default_for(&f.ty)))
            .collect();
        let obj = Rc::new(RefCell::new(Object { class: decl.name.clone(), fields }));
        for f in decl.fields.iter().filter(|f| !f.is_static) {
            if let Some(init) = &f.init {
                let mut frame = Frame { class: &decl.name, this: Some(obj.clone()), scopes: vec![HashMap::new()] };
                let v = self.eval(init, &mut frame)?;
                obj.borrow_mut().fields.insert(f.name.clone(), v);
            }
        }
        Ok(obj)
    }

    fn invoke(
        &mut self,
        class: &'p str,
        method: &'p MethodDecl,
        this: Option<Rc<RefCell<Object>>>,
        args: Vec<Value>,
    ) -> Exec<Value> {
        self.tick()?;
        if self.depth >= MAX_CALL_DEPTH {
            return rt("stack overflow");
        }
        self.ensure_init(class)?;
        let scope: HashMap<String, Value> = method.params.iter().map(|p| p.name.clone()).zip(args).collect();
        let mut frame = Frame { class, this, scopes: vec![scope] };
        self.depth += 1;
        let flow = self.exec_block(&method.body, &mut frame);
        self.depth -= 1;
        match flow? {
            Flow::Return(v) => Ok(v),
            Flow::Normal if method.ret == TypeName::Unit => Ok(Value::Unit),
            Flow::Normal => rt(format!("method `{}` finished without returning a value", method.name)),
        }
    }

    fn exec_block(&mut self, block: &'p Block, frame: &mut Frame<'p>) -> Exec<Flow> {
        frame.scopes.push(HashMap::new());
        let mut result = Ok(Flow::Normal);
        for stmt in &block.stmts {
            match self.exec(stmt, frame) {
                Ok(Flow::Normal) => {}
                other => {
                    result = other;
                    break;
                }
            }
        }
        frame.scopes.pop();
        result
    }

    fn exec(&mut self, stmt: &'p Stmt, frame: &mut Frame<'p>) -> Exec<Flow> {
        self.tick()?;
        match &stmt.kind {
            StmtKind::VarDecl { name, init, .. } => {
                let v = self.eval(init, frame)?;
                frame.scopes.last_mut().unwrap().insert(name.clone(), v);
            }
            StmtKind::Assign { target, value } => {
                let v = self.eval(value, frame)?;
                self.assign(target, v, frame)?;
            }
            StmtKind::If { cond, then_block, else_block } => {
                if self.eval_bool(cond, frame)? {
                    return self.exec_block(then_block, frame);
                } else if let Some(b) = else_block {
                    return self.exec_block(b, frame);
                }
            }
            StmtKind::While { cond, body } => {
                while self.eval_bool(cond, frame)? {
                    if let Flow::Return(v) = self.exec_block(body, frame)? {
                        return Ok(Flow::Return(v));
                    }
                }
            }
            StmtKind::Return(value) => {
                let v = match value {
                    Some(e) => self.eval(e, frame)?,
                    None => Value::Unit,
                };
                return Ok(Flow::Return(v));
            }
            StmtKind::Expr(e) => {
                self.eval(e, frame)?;
            }
            StmtKind::Throw(e) => {
                let v = self.eval(e, frame)?;
                return rt(format!("uncaught exception: {}", v.concat_repr()));
            }
            StmtKind::Assert { kind, args } => {
                let vals = args.iter().map(|a| self.eval(a, frame)).collect::<Exec<Vec<_>>>()?;
                let failure = match kind {
                    AssertKind::Equals if !vals[0].equals(&vals[1]) => {
                        Some(format!("assertEquals failed: expected {} but was {}", vals[0], vals[1]))
                    }
                    AssertKind::NotEquals if vals[0].equals(&vals[1]) => {
                        Some(format!("assertNotEquals failed: both were {}", vals[0]))
                    }
                    AssertKind::True if !matches!(vals[0], Value::Bool(true)) => Some("assertTrue failed".to_string()),
                    AssertKind::False if !matches!(vals[0], Value::Bool(false)) => {
                        Some("assertFalse failed".to_string())
                    }
                    _ => None,
                };
                if let Some(message) = failure {
                    return Err(Trap::Assert { message, node: stmt.id });
                }
            }
        }
        Ok(Flow::Normal)
    }

    fn assign(&mut self, target: &'p Expr, value: Value, frame: &mut Frame<'p>) -> Exec<()> {
        let info = self.info(frame.class);
        match &target.kind {
            ExprKind::Ident(name) => match info.idents.get(&target.id) {
                Some(IdentRes::Local) => {
                    if !frame.assign(name, value) {
                        return rt(format!("unbound variable `{name}`"));
                    }
                    Ok(())
                }
                Some(IdentRes::Field(fref)) => self.write_field(fref, frame.this.clone(), value),
                _ => rt(format!("cannot assign to `{name}`")),
            },
            ExprKind::Field { target: obj_expr, .. } => {
                let Some(fref) = info.fields.get(&target.id) else {
                    return rt("unresolved field");
                };
                let obj = if self.is_class_ref(obj_expr, frame.class) { None } else { Some(self.eval(obj_expr, frame)?) };
                match obj {
                    None => self.write_field(fref, None, value),
                    Some(Value::Obj(o)) => self.write_field(fref, Some(o), value),
                    Some(Value::Null) => rt(format!("null field access: cannot write `{}`", fref.name)),
                    Some(other) => rt(format!("cannot write field on {other}")),
                }
            }
            _ => rt("invalid assignment target"),
        }
    }

    fn field_is_static(&self, fref: &FieldRef) -> bool {
        self.classes.get(fref.class.as_str()).and_then(|c| c.field(&fref.name)).is_some_and(|f| f.is_static)
    }

    fn write_field(&mut self, fref: &FieldRef, obj: Option<Rc<RefCell<Object>>>, value: Value) -> Exec<()> {
        if self.field_is_static(fref) {
            let class = self.classes[fref.class.as_str()];
            self.ensure_init(&class.name)?;
            self.statics.insert(fref.clone(), value);
            return Ok(());
        }
        match obj {
            Some(o) => {
                o.borrow_mut().fields.insert(fref.name.clone(), value);
                Ok(())
            }
            None => rt(format!("null field access: cannot write `{}`", fref.name)),
        }
    }

    fn read_field(&mut self, fref: &FieldRef, obj: Option<Rc<RefCell<Object>>>) -> Exec<Value> {
        if self.field_is_static(fref) {
            let class = self.classes[fref.class.as_str()];
            self.ensure_init(&class.name)?;
            return Ok(self.statics.get(fref).cloned().unwrap_or(Value::Null));
        }
        match obj {
            Some(o) => Ok(o.borrow().fields.get(&fref.name).cloned().unwrap_or(Value::Null)),
            None => rt(format!("null field access: cannot read `{}`", fref.name)),
        }
    }

    fn is_class_ref(&self, e: &Expr, class: &str) -> bool {
        matches!(self.info(class).idents.get(&e.id), Some(IdentRes::Class(_)))
    }

    fn eval_bool(&mut self, e: &'p Expr, frame: &mut Frame<'p>) -> Exec<bool> {
        match self.eval(e, frame)? {
            Value::Bool(b) => Ok(b),
            other => rt(format!("expected bool, found {other}")),
        }
    }

    fn eval_int(&mut self, e: &'p Expr, frame: &mut Frame<'p>) -> Exec<i64> {
        match self.eval(e, frame)? {
            Value::Int(v) => Ok(v),
            other => rt(format!("expected int, found {other}")),
        }
    }

    fn eval(&mut self, e: &'p Expr, frame: &mut Frame<'p>) -> Exec<Value> {
        self.tick()?;
        let info = self.info(frame.class);
        match &e.kind {
            ExprKind::Int(v) => Ok(Value::Int(*v)),
            ExprKind::Bool(b) => Ok(Value::Bool(*b)),
            ExprKind::Str(s) => Ok(Value::Str(Rc::from(s.as_str()))),
            ExprKind::Null => Ok(Value::Null),
            ExprKind::List(items) => {
                let vals = items.iter().map(|i| self.eval(i, frame)).collect::<Exec<Vec<_>>>()?;
                Ok(Value::List(Rc::new(vals)))
            }
            ExprKind::Ident(name) => match info.idents.get(&e.id) {
                Some(IdentRes::Local) => match frame.lookup(name) {
                    Some(v) => Ok(v.clone()),
                    None => rt(format!("unbound variable `{name}`")),
                },
                Some(IdentRes::Field(fref)) => self.read_field(fref, frame.this.clone()),
                _ => rt(format!("`{name}` is not a value")),
            },
            ExprKind::This => match &frame.this {
                Some(o) => Ok(Value::Obj(o.clone())),
                None => rt("`this` in static context"),
            },
            ExprKind::Field { target, name } => {
                let Some(fref) = info.fields.get(&e.id) else {
                    return rt(format!("unresolved field `{name}`"));
                };
                if self.is_class_ref(target, frame.class) {
                    return self.read_field(fref, None);
                }
                match self.eval(target, frame)? {
                    Value::Obj(o) => self.read_field(fref, Some(o)),
                    Value::Null => rt(format!("null field access: cannot read `{name}`")),
                    other => rt(format!("cannot read field `{name}` of {other}")),
                }
            }
            ExprKind::Unary { op, operand } => match op {
                UnaryOp::Neg => Ok(Value::Int(self.eval_int(operand, frame)?.wrapping_neg())),
                UnaryOp::Not => Ok(Value::Bool(!self.eval_bool(operand, frame)?)),
            },
            ExprKind::Binary { op, lhs, rhs } => self.binary(*op, lhs, rhs, frame),
            ExprKind::Call { receiver, args, .. } => {
                let Some(callee) = info.calls.get(&e.id) else {
                    return rt("unresolved call");
                };
                self.call(callee, receiver.as_deref(), args, frame)
            }
            ExprKind::New { class } => Ok(Value::Obj(self.instantiate(class)?)),
            ExprKind::Index { target, index } => {
                let list = self.eval(target, frame)?;
                let i = self.eval_int(index, frame)?;
                match list {
                    Value::List(items) => match usize::try_from(i).ok().and_then(|i| items.get(i)) {
                        Some(v) => Ok(v.clone()),
                        None => rt(format!("index {i} out of bounds for length {}", items.len())),
                    },
                    Value::Null => rt("null list access"),
                    other => rt(format!("cannot index into {other}")),
                }
            }
        }
    }

    fn binary(&mut self, op: BinOp, lhs: &'p Expr, rhs: &'p Expr, frame: &mut Frame<'p>) -> Exec<Value> {
        match op {
            BinOp::And => {
                return Ok(Value::Bool(self.eval_bool(lhs, frame)? && self.eval_bool(rhs, frame)?));
            }
            BinOp::Or => {
                return Ok(Value::Bool(self.eval_bool(lhs, frame)? || self.eval_bool(rhs, frame)?));
            }
            _ => {}
        }
        let l = self.eval(lhs, frame)?;
        let r = self.eval(rhs, frame)?;
        match op {
            BinOp::Eq => return Ok(Value::Bool(l.equals(&r))),
            BinOp::Ne => return Ok(Value::Bool(!l.equals(&r))),
            BinOp::Add => {
                if matches!(l, Value::Str(_)) || matches!(r, Value::Str(_)) {
                    if matches!(l, Value::Null) || matches!(r, Value::Null) {
                        return rt("null operand in string concatenation");
                    }
                    let s = format!("{}{}", l.concat_repr(), r.concat_repr());
                    return Ok(Value::Str(Rc::from(s)));
                }
            }
            _ => {}
        }
        let (Value::Int(a), Value::Int(b)) = (&l, &r) else {
            return rt(format!("operator `{}` applied to {l} and {r}", op.symbol()));
        };
        let (a, b) = (*a, *b);
        Ok(match op {
            BinOp::Add => Value::Int(a.wrapping_add(b)),
            BinOp::Sub => Value::Int(a.wrapping_sub(b)),
            BinOp::Mul => Value::Int(a.wrapping_mul(b)),
            BinOp::Div | BinOp::Rem if b == 0 => return rt("division by zero"),
            BinOp::Div => Value::Int(a.wrapping_div(b)),
            BinOp::Rem => Value::Int(a.wrapping_rem(b)),
            BinOp::Lt => Value::Bool(a < b),
            BinOp::Le => Value::Bool(a <= b),
            BinOp::Gt => Value::Bool(a > b),
            BinOp::Ge => Value::Bool(a >= b),
            BinOp::Eq | BinOp::Ne | BinOp::And | BinOp::Or => unreachable!(),
        })
    }

    fn call(&mut self, callee: &Callee, receiver: Option<&'p Expr>, args: &'p [Expr], frame: &mut Frame<'p>) -> Exec<Value> {
        match callee {
            Callee::Method(mref) => {
                let Some(method) = self.methods.get(mref).copied() else {
                    return rt(format!("unknown method {mref}"));
                };
                let this = match receiver {
                    Some(r) if self.is_class_ref(r, frame.class) => None,
                    Some(r) => match self.eval(r, frame)? {
                        Value::Obj(o) => Some(o),
                        Value::Null if !method.is_static => {
                            return rt(format!("null dereference calling `{}`", mref.name))
                        }
                        _ => None,
                    },
                    None => frame.this.clone(),
                };
                let vals = args.iter().map(|a| self.eval(a, frame)).collect::<Exec<Vec<_>>>()?;
                let this = if method.is_static { None } else { this };
                if !method.is_static && this.is_none() {
                    return rt(format!("instance method `{}` called without an instance", mref.name));
                }
                let class = self.classes[mref.class.as_str()];
                self.invoke(&class.name, method, this, vals)
            }
            Callee::Builtin(name) => {
                let vals = args.iter().map(|a| self.eval(a, frame)).collect::<Exec<Vec<_>>>()?;
                builtin(name, vals)
            }
            Callee::Constructor(class) => Ok(Value::Obj(self.instantiate(class)?)),
            Callee::Unresolved(name) => rt(format!("unresolved call `{name}`")),
        }
    }
}

fn builtin(name: &str, args: Vec<Value>) -> Exec<Value> {
    fn s(v: &Value) -> Exec<&Rc<str>> {
        match v {
            Value::Str(s) => Ok(s),
            Value::Null => rt("null argument"),
            other => rt(format!("expected string, found {other}")),
        }
    }
    fn list(v: &Value) -> Exec<&Rc<Vec<Value>>> {
        match v {
            Value::List(l) => Ok(l),
            Value::Null => rt("null argument"),
            other => rt(format!("expected list, found {other}")),
        }
    }
    fn int(v: &Value) -> Exec<i64> {
        match v {
            Value::Int(i) => Ok(*i),
            other => rt(format!("expected int, found {other}")),
        }
    }
    match (name, args.as_slice()) {
        ("print", [_]) => Ok(Value::Unit),
        ("len", [Value::List(l)]) => Ok(Value::Int(l.len() as i64)),
        ("len", [v]) => Ok(Value::Int(s(v)?.chars().count() as i64)),
        ("charCode", [text, i]) => {
            let i = int(i)?;
            let text = s(text)?;
            match usize::try_from(i).ok().and_then(|i| text.chars().nth(i)) {
                Some(c) => Ok(Value::Int(c as i64)),
                None => rt(format!("charCode index {i} out of bounds")),
            }
        }
        ("fromCharCodes", [codes]) => {
            let mut out = String::new();
            for c in list(codes)?.iter() {
                let code = int(c)?;
                match u32::try_from(code).ok().and_then(char::from_u32) {
                    Some(ch) => out.push(ch),
                    None => return rt(format!("invalid character code {code}")),
                }
            }
            Ok(Value::Str(Rc::from(out)))
        }
        ("substring", [text, from, to]) => {
            let chars: Vec<char> = s(text)?.chars().collect();
            let (from, to) = (int(from)?, int(to)?);
            if from < 0 || to < from || to as usize > chars.len() {
                return rt(format!("substring range {from}..{to} out of bounds"));
            }
            Ok(Value::Str(Rc::from(chars[from as usize..to as usize].iter().collect::<String>())))
        }
        ("append", [xs, x]) => {
            let mut items: Vec<Value> = list(xs)?.as_ref().clone();
            items.push(x.clone());
            Ok(Value::List(Rc::new(items)))
        }
        ("contains", [Value::Str(hay), needle]) => Ok(Value::Bool(hay.contains(s(needle)?.as_ref()))),
        ("contains", [xs, x]) => Ok(Value::Bool(list(xs)?.iter().any(|v| v.equals(x)))),
        ("equals", [a, b]) => Ok(Value::Bool(a.equals(b))),
        ("str", [v]) => Ok(Value::Str(Rc::from(v.concat_repr()))),
        ("reverse", [Value::List(l)]) => Ok(Value::List(Rc::new(l.iter().rev().cloned().collect()))),
        ("reverse", [v]) => Ok(Value::Str(Rc::from(s(v)?.chars().rev().collect::<String>()))),
        ("abs", [v]) => Ok(Value::Int(int(v)?.wrapping_abs())),
        ("min", [a, b]) => Ok(Value::Int(int(a)?.min(int(b)?))),
        ("max", [a, b]) => Ok(Value::Int(int(a)?.max(int(b)?))),
        _ => rt(format!("bad call to builtin `{name}`")),
    }
}
