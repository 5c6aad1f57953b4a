use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};
use std::time::{Duration, Instant};

use haan::graphtools::{find_clique, find_half_separator};
use haan::reductions::{
    gen_clique_bipartite_d2, gen_clique_vc_bipartite, gen_clique_vc_split, gen_halfsep_3regular, pad_half_separator,
    witness_from_clique, witness_from_clique_vc, witness_from_separator, Family, ReducedInstance,
};
use haan::{
    evaluate_annotated, solve, solve_separator, solve_vertex_cover_xp, Algorithm, Allocation, Error, Objective,
    Parallelism, SeparatorPolicy, SolveResult, SolverConfig,
};

use crate::args::{BenchArgs, Cli, Command, GenerateArgs, SolveArgs, SolverOpts, VerifyArgs};
use crate::format::{self, InstanceFile, ResultFile};
use crate::graphs::named_graph;
use crate::{exit, CliError};

/// Runs a parsed command line, writing documents to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let res = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Bench(a) => cmd_bench(&a, out, err),
    };
    match res {
        Ok(()) => exit::OK,
        Err(e) => {
            let _ = writeln!(err, "haan: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.into(),
        source: e,
    })
}

fn within(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Parse { .. } | CliError::Core(_) => CliError::In {
            path: path.into(),
            source: Box::new(e),
        },
        e => e,
    }
}

pub fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    format::parse_instance(&read(path)?).map_err(|e| within(path, e))
}

/// Writes `doc` to `path`, or to `out` when no path is given.
fn emit(doc: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |p: &Path| {
        let p = p.to_path_buf();
        move |e| CliError::Io { path: p, source: e }
    };
    match path {
        Some(p) => std::fs::write(p, doc).map_err(io(p)),
        None => out.write_all(doc.as_bytes()).map_err(io(Path::new("<stdout>"))),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| w.parse().map_err(|_| CliError::Usage(format!("bad {what} entry `{w}`"))))
        .collect()
}

pub fn solver_config(o: &SolverOpts) -> Result<SolverConfig, CliError> {
    let mut cfg = SolverConfig::with_objective(o.objective.parse::<Objective>()?);
    let workers = match o.workers {
        Some(w) => Some(w),
        None => match std::env::var("HAAN_WORKERS") {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("HAAN_WORKERS=`{v}` is not a number")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(w) = workers {
        cfg.parallelism = Parallelism::Workers(w);
    }
    if let Some(l) = o.guess_limit {
        cfg.guess_limit = l;
    }
    if let Some(s) = o.separator_max {
        cfg.separator_size_policy = SeparatorPolicy::Max(s);
    }
    Ok(cfg)
}

/// Solves a loaded file. Annotated files only go to the separator solver.
pub fn solve_file(
    file: &InstanceFile,
    algo: Algorithm,
    cover: Option<&[usize]>,
    cfg: &SolverConfig,
) -> Result<SolveResult, CliError> {
    if file.annotation.is_some() {
        return match algo {
            Algorithm::Separator | Algorithm::Auto => Ok(solve_separator(&file.annotated()?, cfg)?),
            other => Err(Error::WrongSolver {
                solver: other.label(),
                reason: "annotated instances need the separator solver".into(),
            }
            .into()),
        };
    }
    Ok(match (algo, cover) {
        (Algorithm::VcXp, Some(c)) => solve_vertex_cover_xp(&file.instance, Some(c), cfg)?,
        (_, Some(_)) => return Err(CliError::Usage("--cover only applies to vc-xp".into())),
        _ => solve(&file.instance, algo, cfg)?,
    })
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let algo: Algorithm = a.algo.parse()?;
    let cfg = solver_config(&a.solver)?;
    let cover = a.cover.as_deref().map(|c| parse_list(c, "cover")).transpose()?;
    let file = load_instance(&a.input)?;
    let start = Instant::now();
    let r = solve_file(&file, algo, cover.as_deref(), &cfg)?;
    let wall = a.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let doc = format::print_result(&ResultFile::from_result(&r, cfg.objective, wall));
    emit(&doc, a.output.as_deref(), out)
}

fn generate(a: &GenerateArgs, family: Family) -> Result<ReducedInstance, CliError> {
    let g = named_graph(&a.graph, a.seed)?;
    Ok(match family {
        Family::CliqueBipD2 => gen_clique_bipartite_d2(&g, a.k)?,
        Family::HalfSep3Reg => gen_halfsep_3regular(&g, a.k)?,
        Family::CliqueVcBip => gen_clique_vc_bipartite(&g, a.k, a.t_pad)?,
        Family::CliqueVcSplit => gen_clique_vc_split(&g, a.k, a.t)?,
    })
}

/// The instance file for a reduction, with provenance as `meta` lines.
pub fn reduced_file(red: &ReducedInstance, graph_name: &str, seed: Option<u64>) -> InstanceFile {
    let p = &red.provenance;
    let join = |items: Vec<String>| items.join(" ");
    let mut meta = vec![
        ("family".to_string(), p.family.to_string()),
        ("graph".to_string(), graph_name.to_string()),
    ];
    if let Some(s) = seed {
        meta.push(("seed".into(), s.to_string()));
    }
    let source = std::iter::once(p.source.n().to_string())
        .chain(p.source.edges().iter().map(|(u, v)| format!("{u}-{v}")))
        .collect();
    meta.push(("source".into(), join(source)));
    meta.push(("k".into(), p.k.to_string()));
    if let Some(t) = p.padding {
        meta.push(("padding".into(), t.to_string()));
    }
    if p.trivial {
        meta.push(("trivial".into(), "true".into()));
    }
    meta.push(("target_envy".into(), red.target_envy.to_string()));
    meta.push(("agent_roles".into(), join(p.agent_roles.iter().map(|r| r.to_string()).collect())));
    meta.push(("house_roles".into(), join(p.house_roles.iter().map(|r| r.to_string()).collect())));
    InstanceFile {
        instance: red.instance.clone(),
        annotation: None,
        meta,
    }
}

pub fn witness(red: &ReducedInstance, clique: Option<&str>, separator: Option<&str>) -> Result<Allocation, CliError> {
    let p = &red.provenance;
    let g = &p.source;
    if p.family == Family::HalfSep3Reg {
        let (s, x, y) = match separator {
            Some(desc) => {
                let parts: Vec<&str> = desc.split('/').collect();
                let [s, x, y] = parts.as_slice() else {
                    return Err(CliError::Usage("--separator must look like S/X/Y".into()));
                };
                (parse_list(s, "separator")?, parse_list(x, "separator")?, parse_list(y, "separator")?)
            }
            None => find_half_separator(g, p.k)
                .ok_or_else(|| CliError::NoWitness(format!("no half separator with at most {} vertices", p.k)))?,
        };
        let (s, x, y) = pad_half_separator(g, &s, &x, &y, p.k)?;
        return Ok(witness_from_separator(red, &s, &x, &y)?);
    }
    let c = match clique {
        Some(c) => parse_list(c, "clique")?,
        None => find_clique(g, p.k).ok_or_else(|| CliError::NoWitness(format!("no {}-clique", p.k)))?,
    };
    Ok(match p.family {
        Family::CliqueBipD2 => witness_from_clique(red, &c)?,
        _ => witness_from_clique_vc(red, &c)?,
    })
}

fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let family: Family = a.family.parse().map_err(|_| CliError::Usage(format!("unknown family `{}`", a.family)))?;
    let red = generate(a, family)?;
    let doc = format::print_instance(&reduced_file(&red, &a.graph, a.seed));
    if let Some(path) = &a.witness_out {
        let w = witness(&red, a.clique.as_deref(), a.separator.as_deref())?;
        emit(&format::print_allocation(&w), Some(path), out)?;
    }
    emit(&doc, a.output.as_deref(), out)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = load_instance(&a.instance)?;
    let alloc = format::parse_allocation(&read(&a.allocation)?).map_err(|e| within(&a.allocation, e))?;
    let ann = file.annotated()?;
    let (feasible, report) = evaluate_annotated(&ann, &alloc)?;
    let agents = |flags: &[bool]| -> String {
        (0..flags.len())
            .filter(|&a| flags[a])
            .map(|a| format!(" {a}"))
            .collect()
    };
    let mut doc = format!(
        "haan/1 report\nenvious {}\nhappy {}\nenvious_agents{}\nhappy_agents{}\n",
        report.n_envious,
        report.n_happy,
        agents(&report.envious),
        agents(&report.happy)
    );
    if file.annotation.is_some() {
        doc.push_str(&format!("feasible {feasible}\n"));
    }
    if let Some(t) = file.meta("target_envy").and_then(|t| t.parse::<usize>().ok()) {
        doc.push_str(&format!("target_envy {t}\nwithin_target {}\n", report.n_envious <= t));
    }
    emit(&doc, None, out)?;
    if !feasible {
        let a = (0..alloc.len()).find(|&a| !ann.feasible_bits(a).contains(alloc.house_of(a))).unwrap_or(0);
        return Err(CliError::Infeasible(a));
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct Row {
    instance: String,
    algo: &'static str,
    outcome: Result<(SolveResult, f64), String>,
}

fn status_of(e: &CliError) -> String {
    match e {
        CliError::Core(Error::Cancelled) => "timeout".into(),
        CliError::Core(Error::BudgetExceeded { .. }) => "budget".into(),
        CliError::Core(Error::WrongSolver { .. }) => "wrong-solver".into(),
        CliError::Core(Error::InstanceInfeasible { .. }) => "infeasible".into(),
        CliError::Core(Error::NoFeasibleAllocation) => "no-feasible".into(),
        CliError::Core(Error::TooLarge(_)) => "too-large".into(),
        CliError::In { source, .. } => status_of(source),
        CliError::Parse { .. } | CliError::Core(Error::InvalidInstance(_)) => "bad-input".into(),
        _ => "error".into(),
    }
}

/// Runs `f` with a cancellation flag that trips after `limit`.
fn with_timeout<T>(limit: Duration, f: impl FnOnce(Arc<AtomicBool>) -> T) -> T {
    let flag = Arc::new(AtomicBool::new(false));
    let (done, wait) = mpsc::channel::<()>();
    let watchdog = {
        let flag = flag.clone();
        std::thread::spawn(move || {
            if let Err(mpsc::RecvTimeoutError::Timeout) = wait.recv_timeout(limit) {
                flag.store(true, Ordering::Relaxed);
            }
        })
    };
    let out = f(flag);
    drop(done);
    let _ = watchdog.join();
    out
}

fn bench_instance(path: &Path, algos: &[Algorithm], cfg: &SolverConfig, limit: Duration) -> Vec<Row> {
    let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let file = load_instance(path);
    algos
        .iter()
        .map(|&algo| {
            let outcome = match &file {
                Err(e) => Err(status_of(e)),
                Ok(file) => with_timeout(limit, |flag| {
                    let cfg = SolverConfig {
                        cancel: Some(flag),
                        ..cfg.clone()
                    };
                    let start = Instant::now();
                    solve_file(file, algo, None, &cfg)
                        .map(|r| (r, start.elapsed().as_secs_f64() * 1e3))
                        .map_err(|e| status_of(&e))
                }),
            };
            Row {
                instance: name.clone(),
                algo: algo.label(),
                outcome,
            }
        })
        .collect()
}

fn corpus(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io = |e| CliError::Io {
        path: dir.into(),
        source: e,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let p = entry.map_err(io)?.path();
        if p.is_file() && p.extension().is_some_and(|e| e == "haan") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let algos: Vec<Algorithm> = a
        .algos
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()?;
    let cfg = solver_config(&a.solver)?;
    if !(a.timeout > 0.0 && a.timeout.is_finite()) {
        return Err(CliError::Usage("--timeout must be a positive number of seconds".into()));
    }
    let limit = Duration::from_secs_f64(a.timeout);
    let files = corpus(&a.corpus)?;

    let mut per_file: Vec<Vec<Row>> = vec![Vec::new(); files.len()];
    if a.parallel {
        let next = AtomicUsize::new(0);
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(files.len());
        let results: Vec<Vec<(usize, Vec<Row>)>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|_| {
                    s.spawn(|| {
                        let mut mine = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            if i >= files.len() {
                                return mine;
                            }
                            mine.push((i, bench_instance(&files[i], &algos, &cfg, limit)));
                        }
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect()
        });
        for (i, rows) in results.into_iter().flatten() {
            per_file[i] = rows;
        }
    } else {
        for (i, f) in files.iter().enumerate() {
            per_file[i] = bench_instance(f, &algos, &cfg, limit);
        }
    }

    let mut doc = String::from("instance\talgo\tmin_envy\thappiness\tguesses\twall_ms\tstatus\tagreement\n");
    let mut failures = 0;
    for rows in &per_file {
        let done: Vec<&SolveResult> = rows.iter().filter_map(|r| r.outcome.as_ref().ok().map(|o| &o.0)).collect();
        let key = |r: &SolveResult| match cfg.objective {
            Objective::MinEnvy => (r.min_envy, 0),
            Objective::MinEnvyThenMaxHappy => (r.min_envy, r.happiness),
        };
        let agree = done.windows(2).all(|w| key(w[0]) == key(w[1]));
        if !agree {
            failures += 1;
            let _ = writeln!(err, "haan: FAILURE: solvers disagree on {}", rows[0].instance);
        }
        for r in rows {
            match &r.outcome {
                Ok((s, ms)) => doc.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{ms:.3}\t{}\t{}\n",
                    r.instance,
                    r.algo,
                    s.min_envy,
                    s.happiness,
                    s.guesses_explored,
                    "ok",
                    if agree { "ok" } else { "FAILURE" }
                )),
                Err(status) => doc.push_str(&format!("{}\t{}\t-\t-\t-\t-\t{status}\t-\n", r.instance, r.algo)),
            }
        }
    }
    emit(&doc, None, out)?;
    if failures > 0 {
        return Err(CliError::Disagreement(failures));
    }
    Ok(())
}
