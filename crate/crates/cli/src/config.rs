//! Experiment configuration: TOML parsing plus full precondition checks.
//!
//! ```toml
//! kind = "threshold"
//! seed = 7
//! shots = 1000          # optional
//!
//! [params]
//! n = 4
//! reference = 7
//! relation = "greater"
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use qbsc::algorithms::{DatabaseMode, MAX_PRIME_CANDIDATE};
use qbsc::comparator::Relation;
use toml::{Table, Value};

/// One configuration problem, tied to the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Compare,
    Threshold,
    Minimum,
    Zero,
    Prime,
    Factor,
    Conditional,
}

impl Kind {
    const ALL: [Kind; 7] = [
        Kind::Compare,
        Kind::Threshold,
        Kind::Minimum,
        Kind::Zero,
        Kind::Prime,
        Kind::Factor,
        Kind::Conditional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Compare => "compare",
            Kind::Threshold => "threshold",
            Kind::Minimum => "minimum",
            Kind::Zero => "zero",
            Kind::Prime => "prime",
            Kind::Factor => "factor",
            Kind::Conditional => "conditional",
        }
    }
}

/// One basis term of a superposed comparator input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub value: u64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Compare {
        n: usize,
        a: u64,
        b: Vec<Term>,
    },
    Threshold {
        n: usize,
        reference: u64,
        relation: Relation,
        iterations: Option<usize>,
    },
    Minimum {
        n: usize,
        members: Option<BTreeSet<u64>>,
        max_rounds: Option<usize>,
        stability_rounds: Option<usize>,
    },
    Zero {
        n: usize,
        output_width: usize,
        table: Vec<u64>,
        reference: u64,
    },
    Prime {
        a: u64,
        mode: DatabaseMode,
        exclude_one: bool,
        repetitions: Option<usize>,
    },
    Factor {
        a: u64,
        mode: DatabaseMode,
    },
    Conditional {
        n: usize,
        a: u64,
        b: u64,
        s1: u64,
        s2: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seed: u64,
    pub shots: Option<usize>,
    pub params: Params,
    /// The `[params]` table as written, echoed into results.
    pub raw_params: Table,
}

pub fn load(path: &Path) -> Result<ExperimentConfig, Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| vec![Diagnostic::new("config", format!("cannot read {}: {e}", path.display()))])?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<ExperimentConfig, Vec<Diagnostic>> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| vec![Diagnostic::new("config", e.message().to_string())])?;
    let mut diags = Vec::new();

    let mut top = Reader::new(&root, "", &mut diags);
    let kind_name = top.string("kind", true);
    let seed = top.uint("seed").unwrap_or(0);
    let shots = top.uint("shots").map(|s| s as usize);
    let params_value = top.take("params");
    top.finish();

    if shots == Some(0) {
        diags.push(Diagnostic::new("shots", "must be at least 1"));
    }
    let kind = kind_name.as_deref().and_then(|k| {
        let found = Kind::ALL.into_iter().find(|c| c.name() == k);
        if found.is_none() {
            let names: Vec<_> = Kind::ALL.iter().map(|k| k.name()).collect();
            diags.push(Diagnostic::new(
                "kind",
                format!("unknown kind `{k}`, expected one of {}", names.join(", ")),
            ));
        }
        found
    });
    let raw_params = match params_value {
        Some(Value::Table(t)) => t.clone(),
        Some(_) => {
            diags.push(Diagnostic::new("params", "must be a table"));
            Table::new()
        }
        None => {
            diags.push(Diagnostic::new("params", "missing [params] table"));
            Table::new()
        }
    };

    let params = kind.and_then(|k| parse_params(k, &raw_params, &mut diags));
    match (kind, params) {
        (Some(kind), Some(params)) if diags.is_empty() => Ok(ExperimentConfig {
            kind,
            seed,
            shots,
            params,
            raw_params,
        }),
        _ => Err(diags),
    }
}

fn parse_params(kind: Kind, table: &Table, diags: &mut Vec<Diagnostic>) -> Option<Params> {
    let before = diags.len();
    let mut r = Reader::new(table, "params.", diags);
    let params = match kind {
        Kind::Compare => {
            let n = r.width("n", 16);
            let a = r.value_fitting("a", n);
            let b = r.terms("b", n);
            Params::Compare {
                n: n.unwrap_or(0),
                a: a.unwrap_or(0),
                b: b.unwrap_or_default(),
            }
        }
        Kind::Threshold => {
            let n = r.width("n", 12);
            let reference = r.value_fitting("reference", n);
            let relation = r.relation("relation");
            let iterations = r.optional_uint("iterations").map(|k| k as usize);
            if iterations.is_some_and(|k| k > 10_000) {
                r.report("iterations", "must be at most 10000");
            }
            Params::Threshold {
                n: n.unwrap_or(0),
                reference: reference.unwrap_or(0),
                relation: relation.unwrap_or(Relation::Gt),
                iterations,
            }
        }
        Kind::Minimum => {
            let n = r.width("n", 10);
            let members = r.optional_list("members").map(|list| {
                if list.is_empty() {
                    r.report("members", "must not be empty");
                }
                if let Some(n) = n {
                    if let Some(v) = list.iter().find(|&&v| v >> n != 0) {
                        r.report("members", format!("member {v} does not fit in {n} bits"));
                    }
                }
                list.into_iter().collect::<BTreeSet<_>>()
            });
            let max_rounds = r.optional_uint("max_rounds").map(|v| v as usize);
            let stability_rounds = r.optional_uint("stability_rounds").map(|v| v as usize);
            if max_rounds == Some(0) {
                r.report("max_rounds", "must be at least 1");
            }
            if stability_rounds == Some(0) {
                r.report("stability_rounds", "must be at least 1");
            }
            Params::Minimum {
                n: n.unwrap_or(0),
                members,
                max_rounds,
                stability_rounds,
            }
        }
        Kind::Zero => {
            let n = r.width("n", 8);
            let output_width = match r.optional_uint("output_width") {
                Some(m) if (1..=8).contains(&m) => Some(m as usize),
                Some(m) => {
                    r.report("output_width", format!("must be between 1 and 8, got {m}"));
                    None
                }
                None => n,
            };
            let table = r.list("table");
            if let (Some(n), Some(t)) = (n, &table) {
                if t.len() != 1 << n {
                    r.report(
                        "table",
                        format!("has {} entries, expected 2^{n} = {}", t.len(), 1usize << n),
                    );
                }
            }
            if let (Some(m), Some(t)) = (output_width, &table) {
                if let Some((x, v)) = t.iter().enumerate().find(|(_, &v)| v >> m != 0) {
                    r.report("table", format!("entry {x} = {v} does not fit in {m} output bits"));
                }
            }
            let reference = match r.optional_uint("reference") {
                Some(v) => {
                    if output_width.is_some_and(|m| v >> m != 0) {
                        r.report("reference", format!("{v} does not fit the output width"));
                    }
                    v
                }
                None => 0,
            };
            Params::Zero {
                n: n.unwrap_or(0),
                output_width: output_width.unwrap_or(0),
                table: table.unwrap_or_default(),
                reference,
            }
        }
        Kind::Prime => {
            let a = r.prime_candidate("a");
            let mode = r.mode("mode");
            let exclude_one = r.optional_bool("exclude_one").unwrap_or(false);
            let repetitions = r.optional_uint("repetitions").map(|v| v as usize);
            if repetitions == Some(0) {
                r.report("repetitions", "must be at least 1");
            }
            Params::Prime {
                a: a.unwrap_or(0),
                mode,
                exclude_one,
                repetitions,
            }
        }
        Kind::Factor => {
            let a = r.prime_candidate("a");
            let mode = r.mode("mode");
            Params::Factor {
                a: a.unwrap_or(0),
                mode,
            }
        }
        Kind::Conditional => {
            let n = r.width("n", 10);
            let values: Vec<_> = ["a", "b", "s1", "s2"]
                .into_iter()
                .map(|k| r.value_fitting(k, n).unwrap_or(0))
                .collect();
            Params::Conditional {
                n: n.unwrap_or(0),
                a: values[0],
                b: values[1],
                s1: values[2],
                s2: values[3],
            }
        }
    };
    r.finish();
    (diags.len() == before).then_some(params)
}

/// Typed field access that records a diagnostic for every problem.
struct Reader<'t, 'd> {
    table: &'t Table,
    prefix: &'static str,
    diags: &'d mut Vec<Diagnostic>,
    seen: BTreeSet<&'static str>,
}

impl<'t, 'd> Reader<'t, 'd> {
    fn new(table: &'t Table, prefix: &'static str, diags: &'d mut Vec<Diagnostic>) -> Self {
        Self {
            table,
            prefix,
            diags,
            seen: BTreeSet::new(),
        }
    }

    fn report(&mut self, key: &str, message: impl Into<String>) {
        self.diags
            .push(Diagnostic::new(format!("{}{key}", self.prefix), message));
    }

    fn take(&mut self, key: &'static str) -> Option<&'t Value> {
        self.seen.insert(key);
        self.table.get(key)
    }

    fn required(&mut self, key: &'static str) -> Option<&'t Value> {
        let v = self.take(key);
        if v.is_none() {
            self.report(key, "missing required field");
        }
        v
    }

    fn uint_value(&mut self, key: &str, v: &Value) -> Option<u64> {
        match v {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            Value::Integer(i) => {
                self.report(key, format!("must be a non-negative integer, got {i}"));
                None
            }
            other => {
                self.report(key, format!("must be an integer, got {}", other.type_str()));
                None
            }
        }
    }

    fn uint(&mut self, key: &'static str) -> Option<u64> {
        let v = self.take(key)?;
        self.uint_value(key, v)
    }

    fn optional_uint(&mut self, key: &'static str) -> Option<u64> {
        self.uint(key)
    }

    fn required_uint(&mut self, key: &'static str) -> Option<u64> {
        let v = self.required(key)?;
        self.uint_value(key, v)
    }

    fn optional_bool(&mut self, key: &'static str) -> Option<bool> {
        match self.take(key)? {
            Value::Boolean(b) => Some(*b),
            other => {
                let t = other.type_str();
                self.report(key, format!("must be a boolean, got {t}"));
                None
            }
        }
    }

    fn string(&mut self, key: &'static str, required: bool) -> Option<String> {
        let v = if required { self.required(key) } else { self.take(key) }?;
        match v {
            Value::String(s) => Some(s.clone()),
            other => {
                let t = other.type_str();
                self.report(key, format!("must be a string, got {t}"));
                None
            }
        }
    }

    fn width(&mut self, key: &'static str, max: usize) -> Option<usize> {
        let v = self.required(key)?;
        match v {
            Value::Integer(i) if (1..=max as i64).contains(i) => Some(*i as usize),
            Value::Integer(i) => {
                self.report(key, format!("must be between 1 and {max}, got {i}"));
                None
            }
            other => {
                let t = other.type_str();
                self.report(key, format!("must be an integer, got {t}"));
                None
            }
        }
    }

    fn value_fitting(&mut self, key: &'static str, width: Option<usize>) -> Option<u64> {
        let v = self.required_uint(key)?;
        if let Some(n) = width {
            if v >> n != 0 {
                self.report(key, format!("{v} does not fit in {n} bits"));
                return None;
            }
        }
        Some(v)
    }

    fn list_of(&mut self, key: &'static str, v: &Value) -> Option<Vec<u64>> {
        let Value::Array(items) = v else {
            let t = v.type_str();
            self.report(key, format!("must be an array of integers, got {t}"));
            return None;
        };
        items.iter().map(|item| self.uint_value(key, item)).collect()
    }

    fn list(&mut self, key: &'static str) -> Option<Vec<u64>> {
        let v = self.required(key)?;
        self.list_of(key, v)
    }

    fn optional_list(&mut self, key: &'static str) -> Option<Vec<u64>> {
        let v = self.take(key)?;
        self.list_of(key, v)
    }

    fn relation(&mut self, key: &'static str) -> Option<Relation> {
        let s = self.string(key, true)?;
        match s.parse() {
            Ok(r) => Some(r),
            Err(_) => {
                self.report(
                    key,
                    format!("unknown relation `{s}`, expected greater, less, eq, leq, geq or neq"),
                );
                None
            }
        }
    }

    fn mode(&mut self, key: &'static str) -> DatabaseMode {
        match self.string(key, false).as_deref() {
            None | Some("idealized") => DatabaseMode::Idealized,
            Some("literal-grover") => DatabaseMode::LiteralGrover,
            Some(other) => {
                self.report(
                    key,
                    format!("unknown mode `{other}`, expected idealized or literal-grover"),
                );
                DatabaseMode::Idealized
            }
        }
    }

    fn prime_candidate(&mut self, key: &'static str) -> Option<u64> {
        let a = self.required_uint(key)?;
        if a % 2 == 0 {
            self.report(key, "a must be odd");
            return None;
        }
        if !(3..=MAX_PRIME_CANDIDATE).contains(&a) {
            self.report(key, format!("must be between 3 and {MAX_PRIME_CANDIDATE}, got {a}"));
            return None;
        }
        Some(a)
    }

    /// Either a single basis value or an array of `{ value, re, im }` terms.
    fn terms(&mut self, key: &'static str, width: Option<usize>) -> Option<Vec<Term>> {
        let v = self.required(key)?;
        let terms = match v {
            Value::Integer(_) => vec![Term {
                value: self.uint_value(key, v)?,
                re: 1.0,
                im: 0.0,
            }],
            Value::Array(items) if !items.is_empty() => {
                let mut out = Vec::new();
                for item in items {
                    let Some(t) = item.as_table() else {
                        self.report(key, "terms must be tables { value, re, im }");
                        return None;
                    };
                    out.push(self.term(key, t)?);
                }
                out
            }
            _ => {
                self.report(key, "must be an integer or a non-empty array of { value, re, im }");
                return None;
            }
        };
        let mut values = BTreeSet::new();
        for t in &terms {
            if let Some(n) = width {
                if t.value >> n != 0 {
                    self.report(key, format!("value {} does not fit in {n} bits", t.value));
                    return None;
                }
            }
            if !values.insert(t.value) {
                self.report(key, format!("value {} listed twice", t.value));
                return None;
            }
        }
        let norm: f64 = terms.iter().map(|t| t.re * t.re + t.im * t.im).sum();
        if (norm - 1.0).abs() > 1e-9 {
            self.report(key, format!("amplitudes have squared norm {norm}, expected 1"));
            return None;
        }
        Some(terms)
    }

    fn term(&mut self, key: &str, t: &Table) -> Option<Term> {
        let number = |name: &str| -> Result<f64, String> {
            match t.get(name) {
                None => Ok(0.0),
                Some(Value::Float(f)) => Ok(*f),
                Some(Value::Integer(i)) => Ok(*i as f64),
                Some(other) => Err(format!("`{name}` must be a number, got {}", other.type_str())),
            }
        };
        let value = match t.get("value") {
            Some(v) => self.uint_value(key, v)?,
            None => {
                self.report(key, "term is missing `value`");
                return None;
            }
        };
        if let Some(extra) = t.keys().find(|k| !["value", "re", "im"].contains(&k.as_str())) {
            self.report(key, format!("unknown term field `{extra}`"));
            return None;
        }
        match (number("re"), number("im")) {
            (Ok(re), Ok(im)) => Some(Term { value, re, im }),
            (Err(e), _) | (_, Err(e)) => {
                self.report(key, e);
                None
            }
        }
    }

    fn finish(self) {
        for key in self.table.keys() {
            if !self.seen.contains(key.as_str()) {
                self.diags.push(Diagnostic::new(
                    format!("{}{key}", self.prefix),
                    "unknown field",
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields(text: &str) -> Vec<String> {
        parse(text).unwrap_err().into_iter().map(|d| d.field).collect()
    }

    #[test]
    fn threshold_parses() {
        let c = parse(
            "kind = \"threshold\"\nseed = 3\n[params]\nn = 4\nreference = 7\nrelation = \"greater\"\n",
        )
        .unwrap();
        assert_eq!(c.kind, Kind::Threshold);
        assert_eq!(c.seed, 3);
        assert_eq!(
            c.params,
            Params::Threshold {
                n: 4,
                reference: 7,
                relation: Relation::Gt,
                iterations: None
            }
        );
    }

    #[test]
    fn negative_width_names_n() {
        let f = fields("kind = \"threshold\"\n[params]\nn = -3\nreference = 1\nrelation = \"lt\"\n");
        assert_eq!(f, ["params.n"]);
    }

    #[test]
    fn even_prime_candidate() {
        let diags = parse("kind = \"prime\"\n[params]\na = 16\n").unwrap_err();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("a must be odd"));
    }

    #[test]
    fn table_length_mismatch() {
        let diags = parse("kind = \"zero\"\n[params]\nn = 3\ntable = [1, 2, 3, 0, 1]\n").unwrap_err();
        assert_eq!(diags[0].field, "params.table");
        assert!(diags[0].message.contains("expected 2^3 = 8"));
    }

    #[test]
    fn every_problem_is_reported() {
        let f = fields("kind = \"conditional\"\nshots = 0\nextra = 1\n[params]\nn = 2\na = 9\ns1 = 1\ns2 = 2\n");
        assert_eq!(f, ["extra", "shots", "params.a", "params.b"]);
    }

    #[test]
    fn superposed_compare_input() {
        let c = parse(
            "kind = \"compare\"\n[params]\nn = 2\na = 3\nb = [{ value = 1, re = 0.6 }, { value = 3, re = 0.8 }]\n",
        )
        .unwrap();
        let Params::Compare { b, .. } = c.params else { panic!() };
        assert_eq!(b.len(), 2);
        assert!(fields("kind = \"compare\"\n[params]\nn = 2\na = 3\nb = [{ value = 1, re = 0.6 }]\n")
            .contains(&"params.b".to_string()));
    }

    #[test]
    fn unknown_kind() {
        assert_eq!(fields("kind = \"teleport\"\n[params]\n"), ["kind"]);
    }
}
