//! The `haan/1` text formats.
//!
//! Instance files:
//!
//! ```text
//! haan/1 instance
//! agents 3
//! houses 3
//! edge 0 1
//! pref 0 0
//! pref 1 0
//! pref 2 0
//! feasible 0 0 1 2      (annotated files only, one line per agent)
//! angry 1               (annotated files only)
//! meta target_envy 2
//! ```
//!
//! Blank lines and `#` comments are ignored. Edge and preference entries may
//! come in any order; printing sorts them, so print∘parse is canonical.
//! Result files carry `solver`, `objective`, `min_envy`, `happiness`,
//! `allocation`, `guesses` and optionally `wall_ms`; allocation files carry
//! only `allocation`.

use std::fmt::Write as _;

use haan::{validate_instance, Allocation, AnnotatedInstance, Instance, RawInstance, SolveResult};

use crate::CliError;

pub const INSTANCE_HEADER: &str = "haan/1 instance";
pub const RESULT_HEADER: &str = "haan/1 result";
pub const ALLOCATION_HEADER: &str = "haan/1 allocation";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub feasible: Vec<Vec<usize>>,
    pub angry: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub annotation: Option<Annotation>,
    pub meta: Vec<(String, String)>,
}

impl InstanceFile {
    pub fn plain(instance: Instance) -> Self {
        InstanceFile {
            instance,
            annotation: None,
            meta: Vec::new(),
        }
    }

    /// The annotated view; plain files get `B = ∅`, `F_a = H`.
    pub fn annotated(&self) -> Result<AnnotatedInstance, CliError> {
        Ok(match &self.annotation {
            None => AnnotatedInstance::plain(self.instance.clone()),
            Some(a) => AnnotatedInstance::new(self.instance.clone(), a.feasible.clone(), &a.angry)?,
        })
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Splits a document into numbered, comment-free, non-blank lines.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        msg: msg.into(),
    }
}

fn numbers(line: usize, words: &[&str]) -> Result<Vec<usize>, CliError> {
    words
        .iter()
        .map(|w| w.parse().map_err(|_| parse_err(line, format!("`{w}` is not a non-negative integer"))))
        .collect()
}

fn single(line: usize, words: &[&str]) -> Result<usize, CliError> {
    match numbers(line, words)?.as_slice() {
        [x] => Ok(*x),
        _ => Err(parse_err(line, "expected exactly one number")),
    }
}

fn expect_header<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, header: &str) -> Result<(), CliError> {
    match it.next() {
        Some((_, l)) if l == header => Ok(()),
        Some((i, l)) => Err(parse_err(i, format!("expected `{header}`, found `{l}`"))),
        None => Err(parse_err(0, format!("empty document, expected `{header}`"))),
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, CliError> {
    let mut it = lines(text);
    expect_header(&mut it, INSTANCE_HEADER)?;
    let (mut n, mut m) = (None, None);
    let mut edges = Vec::new();
    let mut prefs: Vec<Option<Vec<usize>>> = Vec::new();
    let mut feasible: Vec<Option<Vec<usize>>> = Vec::new();
    let mut angry = None;
    let mut meta = Vec::new();
    let mut last = 0;
    for (i, l) in it {
        last = i;
        let words: Vec<&str> = l.split_whitespace().collect();
        let need_n = || n.ok_or_else(|| parse_err(i, "`agents` must come first"));
        match words[0] {
            "agents" if n.is_none() => {
                let v = single(i, &words[1..])?;
                n = Some(v);
                prefs = vec![None; v];
            }
            "houses" if m.is_none() => m = Some(single(i, &words[1..])?),
            "edge" => match numbers(i, &words[1..])?.as_slice() {
                [u, v] => edges.push((*u, *v)),
                _ => return Err(parse_err(i, "an edge has two endpoints")),
            },
            "pref" | "feasible" => {
                let n = need_n()?;
                let nums = numbers(i, &words[1..])?;
                let (&a, houses) = nums.split_first().ok_or_else(|| parse_err(i, "missing agent index"))?;
                if a >= n {
                    return Err(parse_err(i, format!("agent {a} out of range")));
                }
                let table = if words[0] == "pref" {
                    &mut prefs
                } else {
                    if feasible.is_empty() {
                        feasible = vec![None; n];
                    }
                    &mut feasible
                };
                if table[a].replace(houses.to_vec()).is_some() {
                    return Err(parse_err(i, format!("agent {a} listed twice")));
                }
            }
            "angry" if angry.is_none() => angry = Some(numbers(i, &words[1..])?),
            "meta" => {
                let key = words.get(1).ok_or_else(|| parse_err(i, "meta needs a key"))?;
                let value = words[2..].join(" ");
                meta.push((key.to_string(), value));
            }
            w @ ("agents" | "houses" | "angry") => return Err(parse_err(i, format!("`{w}` given twice"))),
            w => return Err(parse_err(i, format!("unknown keyword `{w}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(last, "missing `agents`"))?;
    let m = m.ok_or_else(|| parse_err(last, "missing `houses`"))?;
    // an agent without a `pref` line likes nothing
    let preferences = prefs.into_iter().map(Option::unwrap_or_default).collect();
    let instance = validate_instance(RawInstance {
        n_agents: n,
        n_houses: m,
        edges,
        preferences,
    })?;
    let annotation = if feasible.is_empty() && angry.is_none() {
        None
    } else {
        let feasible = if feasible.is_empty() {
            vec![(0..m).collect(); n]
        } else {
            feasible
                .into_iter()
                .enumerate()
                .map(|(a, f)| f.ok_or_else(|| parse_err(last, format!("agent {a} has no `feasible` line"))))
                .collect::<Result<_, _>>()?
        };
        let angry = angry.unwrap_or_default();
        AnnotatedInstance::new(instance.clone(), feasible.clone(), &angry)?;
        let mut a = Annotation { feasible, angry };
        for f in &mut a.feasible {
            f.sort_unstable();
        }
        a.angry.sort_unstable();
        Some(a)
    };
    Ok(InstanceFile {
        instance,
        annotation,
        meta,
    })
}

fn push_list(out: &mut String, head: &str, items: impl IntoIterator<Item = usize>) {
    out.push_str(head);
    for x in items {
        let _ = write!(out, " {x}");
    }
    out.push('\n');
}

pub fn print_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let mut out = format!("{INSTANCE_HEADER}\nagents {}\nhouses {}\n", inst.n_agents(), inst.n_houses());
    for &(u, v) in inst.edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    for a in 0..inst.n_agents() {
        push_list(&mut out, &format!("pref {a}"), inst.preferences(a).iter().copied());
    }
    if let Some(ann) = &file.annotation {
        for (a, f) in ann.feasible.iter().enumerate() {
            push_list(&mut out, &format!("feasible {a}"), f.iter().copied());
        }
        push_list(&mut out, "angry", ann.angry.iter().copied());
    }
    for (k, v) in &file.meta {
        if v.is_empty() {
            let _ = writeln!(out, "meta {k}");
        } else {
            let _ = writeln!(out, "meta {k} {v}");
        }
    }
    out
}

/// A parsed result file. `wall_ms` is only present when timing was asked for.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultFile {
    pub solver: String,
    pub objective: String,
    pub min_envy: usize,
    pub happiness: usize,
    pub allocation: Vec<usize>,
    pub guesses: u64,
    pub wall_ms: Option<f64>,
}

impl ResultFile {
    pub fn from_result(r: &SolveResult, objective: haan::Objective, wall_ms: Option<f64>) -> Self {
        ResultFile {
            solver: r.solver_id.to_string(),
            objective: objective.label().to_string(),
            min_envy: r.min_envy,
            happiness: r.happiness,
            allocation: r.allocation.houses().to_vec(),
            guesses: r.guesses_explored,
            wall_ms,
        }
    }
}

pub fn print_result(r: &ResultFile) -> String {
    let mut out = format!(
        "{RESULT_HEADER}\nsolver {}\nobjective {}\nmin_envy {}\nhappiness {}\n",
        r.solver, r.objective, r.min_envy, r.happiness
    );
    push_list(&mut out, "allocation", r.allocation.iter().copied());
    let _ = writeln!(out, "guesses {}", r.guesses);
    if let Some(ms) = r.wall_ms {
        let _ = writeln!(out, "wall_ms {ms:.3}");
    }
    out
}

pub fn parse_result(text: &str) -> Result<ResultFile, CliError> {
    let mut it = lines(text);
    expect_header(&mut it, RESULT_HEADER)?;
    let mut fields: Vec<(usize, &str, Vec<&str>)> = Vec::new();
    for (i, l) in it {
        let mut words = l.split_whitespace();
        let key = words.next().unwrap_or_default();
        if fields.iter().any(|f| f.1 == key) {
            return Err(parse_err(i, format!("`{key}` given twice")));
        }
        fields.push((i, key, words.collect()));
    }
    let get = |key: &str| {
        fields
            .iter()
            .find(|f| f.1 == key)
            .ok_or_else(|| parse_err(0, format!("missing `{key}`")))
    };
    let word = |key: &str| -> Result<String, CliError> {
        let (i, _, w) = get(key)?;
        match w.as_slice() {
            [x] => Ok(x.to_string()),
            _ => Err(parse_err(*i, format!("`{key}` takes one word"))),
        }
    };
    let num = |key: &str| -> Result<usize, CliError> {
        let (i, _, w) = get(key)?;
        single(*i, w)
    };
    if let Some((i, k, _)) = fields.iter().find(|f| {
        !["solver", "objective", "min_envy", "happiness", "allocation", "guesses", "wall_ms"].contains(&f.1)
    }) {
        return Err(parse_err(*i, format!("unknown keyword `{k}`")));
    }
    let (ai, _, aw) = get("allocation")?;
    let wall_ms = match fields.iter().find(|f| f.1 == "wall_ms") {
        None => None,
        Some((i, _, w)) => Some(
            w.first()
                .and_then(|x| x.parse().ok())
                .filter(|_| w.len() == 1)
                .ok_or_else(|| parse_err(*i, "bad `wall_ms`"))?,
        ),
    };
    Ok(ResultFile {
        solver: word("solver")?,
        objective: word("objective")?,
        min_envy: num("min_envy")?,
        happiness: num("happiness")?,
        allocation: numbers(*ai, aw)?,
        guesses: num("guesses")? as u64,
        wall_ms,
    })
}

pub fn print_allocation(alloc: &Allocation) -> String {
    let mut out = format!("{ALLOCATION_HEADER}\n");
    push_list(&mut out, "allocation", alloc.houses().iter().copied());
    out
}

/// Reads an allocation from either an allocation file or a result file.
pub fn parse_allocation(text: &str) -> Result<Allocation, CliError> {
    let first = lines(text).next().map(|(_, l)| l);
    if first == Some(RESULT_HEADER) {
        return Ok(Allocation::new(parse_result(text)?.allocation));
    }
    let mut it = lines(text);
    expect_header(&mut it, ALLOCATION_HEADER)?;
    let mut houses = None;
    for (i, l) in it {
        let words: Vec<&str> = l.split_whitespace().collect();
        match words[0] {
            "allocation" if houses.is_none() => houses = Some(numbers(i, &words[1..])?),
            w => return Err(parse_err(i, format!("unexpected `{w}`"))),
        }
    }
    houses
        .map(Allocation::new)
        .ok_or_else(|| parse_err(0, "missing `allocation`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "haan/1 instance\nagents 3\nhouses 3\nedge 0 1\nedge 0 2\nedge 1 2\npref 0 0\npref 1 0\npref 2 0\n";

    #[test]
    fn canonical_instance_round_trips() {
        let f = parse_instance(TRIANGLE).unwrap();
        assert_eq!(print_instance(&f), TRIANGLE);
    }

    #[test]
    fn messy_input_prints_canonically() {
        let messy = "# a triangle\nhaan/1 instance\n\nagents 3\nhouses 3\npref 2 0\nedge 2 1 # reversed\nedge 0 1\nedge 2 0\npref 0 0\npref 1 0\n";
        let f = parse_instance(messy).unwrap();
        assert_eq!(print_instance(&f), TRIANGLE);
    }

    #[test]
    fn annotated_block_and_meta() {
        let text = "haan/1 instance\nagents 1\nhouses 2\npref 0 0\nfeasible 0 1\nangry 0\nmeta note two words\n";
        let f = parse_instance(text).unwrap();
        assert_eq!(f.annotation.as_ref().unwrap().angry, vec![0]);
        assert_eq!(f.meta("note"), Some("two words"));
        assert_eq!(print_instance(&f), text);
    }

    #[test]
    fn empty_instance() {
        let text = "haan/1 instance\nagents 0\nhouses 0\n";
        assert_eq!(print_instance(&parse_instance(text).unwrap()), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_instance("haan/1 instance\nagents 2\nhouses x\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }));
        assert!(matches!(parse_instance("nope"), Err(CliError::Parse { line: 1, .. })));
        let err = parse_instance("haan/1 instance\nagents 2\nhouses 2\nedge 0 0\n").unwrap_err();
        assert!(matches!(err, CliError::Core(haan::Error::InvalidInstance(_))));
    }

    #[test]
    fn result_round_trip() {
        let r = ResultFile {
            solver: "brute".into(),
            objective: "envy".into(),
            min_envy: 2,
            happiness: 1,
            allocation: vec![0, 1, 2],
            guesses: 7,
            wall_ms: Some(1.5),
        };
        let text = print_result(&r);
        assert_eq!(parse_result(&text).unwrap(), r);
        assert_eq!(parse_allocation(&text).unwrap().houses(), &[0, 1, 2]);
    }

    #[test]
    fn allocation_round_trip() {
        let a = Allocation::new(vec![2, 0]);
        assert_eq!(parse_allocation(&print_allocation(&a)).unwrap(), a);
        let empty = Allocation::new(vec![]);
        assert_eq!(parse_allocation(&print_allocation(&empty)).unwrap(), empty);
    }
}
