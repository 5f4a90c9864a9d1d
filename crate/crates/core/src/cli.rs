//! Command-line frontend. Every solver command prints one JSON object that
//! embeds its instance, so `verify` can re-check it from the file alone.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::algebraic::{
    balanced_bipartition, edmonds_matrix, edmonds_pm_test, random_substitution,
    randomized_pm_test, trial_rng, tutte_matrix, tutte_rank_estimate, Fp,
};
use crate::bidirected::{classical_deficiency, orientation_deficiency, verify_factor_cut, FactorCut};
use crate::error::{Error, Result};
use crate::general_factor::{general_factor_deficiency, improve_round};
use crate::graph::{EdgeSubset, Graph, Vertex, ENUMERATION_LIMIT};
use crate::io;
use crate::jump::{jump_sponge_deficiency, DegreeVectorOracle, ExplicitJumpSystem, JumpSystemOracle};
use crate::matching::{is_cover, is_matching, konig_cover, maximum_matching};
use crate::oracle;
use crate::selftest;
use crate::sponge::ClassicalSpec;
use crate::tjoin::{
    bipartite_tcut_packing, coverage, is_conservative, level_families, min_tjoin, tcut_2packing,
    PmWeighting, TCut,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "factorum", version, about = "Matchings, factors, T-joins and jump systems with certificates")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximum matching with a Tutte–Berge barrier.
    Match { graph: String },
    /// Maximum matching and minimum vertex cover of a bipartite graph.
    Konig { graph: String },
    /// Randomized perfect-matching test over GF(2^31 - 1).
    TutteTest {
        graph: String,
        #[arg(long, default_value_t = 3)]
        trials: u64,
        /// Use the Edmonds matrix (bipartite graphs only).
        #[arg(long)]
        edmonds: bool,
    },
    /// Minimum T-join, with T-cut packings and distance levels.
    Tjoin {
        graph: String,
        /// Comma-separated terminal vertices.
        #[arg(long, short = 't', default_value = "")]
        terminals: String,
        /// JSON array of ±1 edge weights (default: all 1).
        #[arg(long)]
        weights: Option<String>,
        /// Root for the distance levels of the optimal join.
        #[arg(long)]
        x0: Option<String>,
    },
    /// Minimum-deficiency (l, u, parity) factor with a cut certificate.
    Factor {
        graph: String,
        /// Spec file; default is l = u = 1 with parity everywhere.
        #[arg(long)]
        spec: Option<String>,
    },
    /// Orientation minimizing the indegree deficiency.
    Orient {
        graph: String,
        #[arg(long)]
        spec: Option<String>,
    },
    /// Minimum-deficiency factor for arbitrary sponges.
    GeneralFactor {
        graph: String,
        #[arg(long)]
        sponge: String,
        #[arg(long)]
        trace: bool,
    },
    /// Sponge deficiency over a jump system (`file.json` or `graph:<file>`).
    Jump {
        #[arg(long)]
        system: String,
        #[arg(long)]
        sponge: String,
        #[arg(long)]
        trace: bool,
    },
    /// Re-check a certificate produced by any solver command.
    Verify { cert: String },
    /// Run the acceptance suite.
    Selftest {
        /// Run a single criterion (1-10).
        #[arg(long)]
        criterion: Option<u32>,
    },
}

/// An error with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() {
            1
        } else if e.is_internal() {
            3
        } else {
            2
        };
        Failure { code, message: e.to_string() }
    }
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure { code: 1, message: msg.into() }
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    seed: u64,
}

impl Ctx<'_> {
    fn read(&mut self, path: &str) -> std::result::Result<String, Failure> {
        if path == "-" {
            if self.stdin_used {
                return Err(malformed("standard input can be read only once"));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| malformed(format!("stdin: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| malformed(format!("{path}: {e}")))
        }
    }

    fn json(&mut self, path: &str) -> std::result::Result<Value, Failure> {
        let text = self.read(path)?;
        Ok(io::parse_json(&text)?)
    }

    fn graph(&mut self, path: &str) -> std::result::Result<Graph, Failure> {
        let text = self.read(path)?;
        Ok(io::parse_graph(&text)?)
    }
}

/// Parses `argv`, runs the command, writes its output and returns the exit
/// code.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let mut ctx = Ctx { stdin, stdin_used: false, seed: cli.seed };
    let result = dispatch(&cli.command, &mut ctx, err);
    match result {
        Ok((value, code)) => {
            let text = if cli.pretty { pretty(&value) } else { value.to_string() };
            let _ = writeln!(out, "{text}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            let _ = writeln!(out, "{}", json!({ "error": f.message, "exit_code": f.code }));
            f.code
        }
    }
}

fn envelope(command: &str, seed: u64, instance: Value, result: Value) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(VERSION));
    m.insert("seed".into(), json!(seed));
    m.insert("instance".into(), instance);
    if let Value::Object(r) = result {
        m.extend(r);
    }
    Value::Object(m)
}

type Outcome = std::result::Result<(Value, i32), Failure>;

fn dispatch(cmd: &Command, ctx: &mut Ctx, err: &mut dyn Write) -> Outcome {
    let seed = ctx.seed;
    match cmd {
        Command::Match { graph } => {
            let g = ctx.graph(graph)?;
            Ok((envelope("match", seed, json!({ "graph": io::graph_to_json(&g) }), solve_match(&g)?), 0))
        }
        Command::Konig { graph } => {
            let g = ctx.graph(graph)?;
            Ok((envelope("konig", seed, json!({ "graph": io::graph_to_json(&g) }), solve_konig(&g)?), 0))
        }
        Command::TutteTest { graph, trials, edmonds } => {
            let g = ctx.graph(graph)?;
            let inst = json!({ "graph": io::graph_to_json(&g), "trials": trials, "edmonds": edmonds });
            Ok((envelope("tutte-test", seed, inst, solve_tutte(&g, *trials, *edmonds, seed)?), 0))
        }
        Command::Tjoin { graph, terminals, weights, x0 } => {
            let g = ctx.graph(graph)?;
            let t = io::parse_vertex_list(terminals, &g)?;
            let w = match weights {
                Some(p) => io::weights_from_json(&ctx.json(p)?, g.m())?,
                None => PmWeighting::ones(g.m()),
            };
            let x0 = match x0 {
                Some(s) => Some(*io::parse_vertex_list(s, &g)?.first().ok_or_else(|| malformed("empty --x0"))?),
                None => None,
            };
            let mut inst = json!({
                "graph": io::graph_to_json(&g),
                "terminals": io::vertices_out(&g, &t),
                "weights": io::weights_to_json(&w, g.m()),
            });
            if let Some(x) = x0 {
                inst["x0"] = io::vertex_out(&g, x);
            }
            Ok((envelope("tjoin", seed, inst, solve_tjoin(&g, &t, &w, x0)?), 0))
        }
        Command::Factor { graph, spec } => {
            let g = ctx.graph(graph)?;
            let spec = load_spec(ctx, spec.as_deref(), &g)?;
            let inst = json!({ "graph": io::graph_to_json(&g), "spec": io::spec_to_json(&spec) });
            let sol = classical_deficiency(&g, &spec)?;
            let res = json!({
                "deficiency": sol.deficiency,
                "factor": sol.factor,
                "degrees": g.degree_vector(&sol.factor)?.0,
                "cut": cut_out(&g, &sol.cut),
            });
            Ok((envelope("factor", seed, inst, res), 0))
        }
        Command::Orient { graph, spec } => {
            let g = ctx.graph(graph)?;
            let spec = load_spec(ctx, spec.as_deref(), &g)?;
            let inst = json!({ "graph": io::graph_to_json(&g), "spec": io::spec_to_json(&spec) });
            let o = orientation_deficiency(&g, &spec)?;
            let res = json!({
                "deficiency": o.deficiency,
                "arcs": o.arcs.iter().map(|&(a, b)| json!([io::vertex_out(&g, a), io::vertex_out(&g, b)])).collect::<Vec<_>>(),
                "indegree": o.indegree,
                "cut": { "L": o.cut.lower, "U": o.cut.upper, "violation": o.cut.violation },
            });
            Ok((envelope("orient", seed, inst, res), 0))
        }
        Command::GeneralFactor { graph, sponge, trace } => {
            let g = ctx.graph(graph)?;
            let h = io::sponges_from_json(&ctx.json(sponge)?, &g)?;
            let inst = json!({ "graph": io::graph_to_json(&g), "sponge": io::sponges_to_json(&h) });
            let out = general_factor_deficiency(&g, &h)?;
            let mut res = json!({
                "deficiency": out.deficiency,
                "factor": out.factor,
                "degrees": out.degrees,
                "oracle_calls": out.trace.oracle_calls,
                "rounds": out.trace.rounds,
            });
            if *trace {
                res["trace"] = json!(out.trace.steps);
            }
            Ok((envelope("general-factor", seed, inst, res), 0))
        }
        Command::Jump { system, sponge, trace } => {
            let h = io::sponge_list(&ctx.json(sponge)?)?;
            let (sys_json, out) = if let Some(path) = system.strip_prefix("graph:") {
                let g = ctx.graph(path)?;
                let j = DegreeVectorOracle::new(g.clone());
                (json!({ "graph": io::graph_to_json(&g) }), jump_sponge_deficiency(&j, &h)?)
            } else {
                let j = io::jump_system_from_json(&ctx.json(system)?)?;
                (io::jump_system_to_json(&j), jump_sponge_deficiency(&j, &h)?)
            };
            let inst = json!({ "system": sys_json, "sponge": io::sponges_to_json(&h) });
            let mut res = json!({
                "deficiency": out.deficiency,
                "point": out.point,
                "oracle_calls": out.trace.oracle_calls,
                "rounds": out.trace.rounds,
            });
            if *trace {
                res["trace"] = json!(out.trace.steps);
            }
            Ok((envelope("jump", seed, inst, res), 0))
        }
        Command::Verify { cert } => {
            let c = ctx.json(cert)?;
            verify(&c)
        }
        Command::Selftest { criterion } => {
            let reports = match criterion {
                Some(id) => vec![selftest::run_criterion(*id, seed)
                    .ok_or_else(|| malformed(format!("no criterion {id}; expected 1-{}", selftest::CRITERIA)))?],
                None => selftest::run_all(seed),
            };
            for r in &reports {
                let _ = writeln!(err, "{}", r.line());
            }
            let passed = reports.iter().all(|r| r.passed);
            let res = json!({ "command": "selftest", "version": VERSION, "seed": seed, "passed": passed, "criteria": reports });
            Ok((res, if passed { 0 } else { 2 }))
        }
    }
}

fn load_spec(ctx: &mut Ctx, path: Option<&str>, g: &Graph) -> std::result::Result<ClassicalSpec, Failure> {
    match path {
        Some(p) => Ok(io::spec_from_json(&ctx.json(p)?, g)?),
        None => Ok(ClassicalSpec::perfect_matching(g.n())),
    }
}

fn cut_out(g: &Graph, c: &FactorCut) -> Value {
    json!({
        "L": io::vertices_out(g, &c.lower),
        "U": io::vertices_out(g, &c.upper),
        "odd_components": c.odd_components.iter().map(|k| io::vertices_out(g, k)).collect::<Vec<_>>(),
        "violation": c.violation,
    })
}

fn solve_match(g: &Graph) -> Result<Value> {
    let mm = maximum_matching(g)?;
    Ok(json!({
        "nu": mm.size,
        "missed": g.n() - 2 * mm.size,
        "matching": mm.matching,
        "barrier": io::vertices_out(g, &mm.barrier.vertices),
        "odd_components": mm.barrier.odd_components.iter().map(|c| io::vertices_out(g, c)).collect::<Vec<_>>(),
    }))
}

fn solve_konig(g: &Graph) -> Result<Value> {
    let cover = konig_cover(g)?;
    let mm = maximum_matching(g)?;
    Ok(json!({ "nu": mm.size, "matching": mm.matching, "cover": io::vertices_out(g, &cover) }))
}

fn solve_tutte(g: &Graph, trials: u64, edmonds: bool, seed: u64) -> Result<Value> {
    let (verdict, rank) = if edmonds {
        let v = edmonds_pm_test(g, trials, seed)?;
        (v.verdict, v.rank_estimate)
    } else {
        (randomized_pm_test(g, trials, seed)?, tutte_rank_estimate(g, trials, seed)?)
    };
    let mut res = json!({ "has_perfect_matching": verdict.has_pm(), "rank_estimate": rank });
    if let Value::Object(m) = serde_json::to_value(&verdict).expect("verdict serializes") {
        res.as_object_mut().unwrap().extend(m);
    }
    if verdict.has_pm() {
        let mm = maximum_matching(g)?;
        if 2 * mm.size != g.n() {
            return Err(crate::error::internal("nonzero determinant but no perfect matching"));
        }
        res["matching"] = json!(mm.matching);
    }
    Ok(res)
}

fn cuts_out(g: &Graph, cuts: &[TCut]) -> Value {
    json!(cuts
        .iter()
        .map(|c| json!({ "shore": io::vertices_out(g, &c.shore), "edges": c.edges }))
        .collect::<Vec<_>>())
}

fn solve_tjoin(g: &Graph, t: &[Vertex], w: &PmWeighting, x0: Option<Vertex>) -> Result<Value> {
    let j = min_tjoin(g, t, w)?;
    let mut res = json!({ "join": j.join, "weight": j.weight });
    let unit = (0..g.m()).all(|e| w.get(e) == 1);
    if unit {
        res["tau"] = json!(j.join.count());
        if g.is_bipartite() {
            res["packing"] = cuts_out(g, &bipartite_tcut_packing(g, t)?);
        }
        res["two_packing"] = cuts_out(g, &tcut_2packing(g, t)?);
    }
    if let Some(x0) = x0 {
        let mut neg = w.negative_set();
        for e in j.join.ids() {
            neg.toggle(e);
        }
        let fam = level_families(g, &PmWeighting::negative_on(&neg), x0)?;
        res["lambda"] = json!(fam.lambda);
        res["levels"] = json!(fam
            .levels
            .iter()
            .map(|lv| json!({
                "i": lv.i,
                "D": lv.d.iter().map(|d| io::vertices_out(g, d)).collect::<Vec<_>>(),
                "D_hat": lv.d_hat.iter().map(|d| io::vertices_out(g, d)).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>());
    }
    Ok(res)
}

fn pretty(v: &Value) -> String {
    let mut lines = Vec::new();
    if let Value::Object(m) = v {
        let width = m.keys().map(String::len).max().unwrap_or(0);
        for (k, x) in m {
            if k == "instance" {
                continue;
            }
            if k == "criteria" {
                if let Value::Array(rs) = x {
                    for r in rs {
                        let mark = if r["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
                        lines.push(format!("  [{mark}] {:>2}. {}", r["id"], r["name"].as_str().unwrap_or("")));
                    }
                    continue;
                }
            }
            let text = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            lines.push(format!("{k:<width$}  {text}"));
        }
    } else {
        lines.push(v.to_string());
    }
    lines.join("\n")
}

// ---------------------------------------------------------------------------
// verify

fn field<'a>(v: &'a Value, key: &str) -> std::result::Result<&'a Value, Failure> {
    v.get(key).ok_or_else(|| malformed(format!("certificate: missing {key:?}")))
}

fn uint(v: &Value, key: &str) -> std::result::Result<u64, Failure> {
    field(v, key)?.as_u64().ok_or_else(|| malformed(format!("certificate: {key:?} is not a non-negative integer")))
}

fn int(v: &Value, key: &str) -> std::result::Result<i64, Failure> {
    field(v, key)?.as_i64().ok_or_else(|| malformed(format!("certificate: {key:?} is not an integer")))
}

fn edge_set(g: &Graph, v: &Value, key: &str) -> std::result::Result<EdgeSubset, Failure> {
    let arr = field(v, key)?.as_array().ok_or_else(|| malformed(format!("certificate: {key:?} is not an array")))?;
    let ids = arr
        .iter()
        .map(|x| x.as_u64().map(|i| i as usize).ok_or_else(|| malformed(format!("certificate: bad edge id in {key:?}"))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(EdgeSubset::from_ids(g.m(), ids)?)
}

fn vertex_set(g: &Graph, v: &Value) -> std::result::Result<Vec<Vertex>, Failure> {
    let arr = v.as_array().ok_or_else(|| malformed("certificate: expected a vertex list"))?;
    Ok(arr.iter().map(|x| io::vertex_ref(g.labels(), g.n(), x)).collect::<Result<Vec<_>>>()?)
}

fn ints(v: &Value, key: &str) -> std::result::Result<Vec<i64>, Failure> {
    field(v, key)?
        .as_array()
        .ok_or_else(|| malformed(format!("certificate: {key:?} is not an array")))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| malformed(format!("certificate: non-integer in {key:?}"))))
        .collect()
}

/// Collects failed checks.
struct Checks(Vec<String>);

impl Checks {
    fn require(&mut self, ok: bool, what: &str) {
        if !ok {
            self.0.push(what.to_owned());
        }
    }
}

fn verify(c: &Value) -> Outcome {
    let command = field(c, "command")?.as_str().ok_or_else(|| malformed("certificate: bad \"command\""))?.to_owned();
    let inst = field(c, "instance")?;
    let mut ck = Checks(Vec::new());
    match command.as_str() {
        "match" => {
            let g = io::graph_from_json(field(inst, "graph")?)?;
            let m = edge_set(&g, c, "matching")?;
            let nu = uint(c, "nu")? as usize;
            let missed = uint(c, "missed")? as i64;
            let x = vertex_set(&g, field(c, "barrier")?)?;
            ck.require(is_matching(&g, &m)?, "matching is not a matching");
            ck.require(m.count() == nu, "matching size differs from nu");
            ck.require(missed == g.n() as i64 - 2 * nu as i64, "missed differs from n - 2 nu");
            ck.require(oracle::barrier_value(&g, &x) == missed, "odd(G - X) - |X| differs from missed");
        }
        "konig" => {
            let g = io::graph_from_json(field(inst, "graph")?)?;
            let m = edge_set(&g, c, "matching")?;
            let cover = vertex_set(&g, field(c, "cover")?)?;
            let nu = uint(c, "nu")? as usize;
            ck.require(is_matching(&g, &m)?, "matching is not a matching");
            ck.require(is_cover(&g, &cover), "cover misses an edge");
            ck.require(m.count() == nu && cover.len() == nu, "sizes of matching, cover and nu differ");
        }
        "tutte-test" => {
            let g = io::graph_from_json(field(inst, "graph")?)?;
            let seed = uint(c, "seed")?;
            let edmonds = field(inst, "edmonds")?.as_bool().unwrap_or(false);
            let perfect = 2 * maximum_matching(&g)?.size == g.n();
            match field(c, "verdict")?.as_str() {
                Some("has_perfect_matching") => {
                    let trial = uint(c, "trial")?;
                    let determinant = Fp::new(int(c, "determinant")?);
                    let vals = random_substitution(g.m(), &mut trial_rng(seed, trial));
                    let det = if edmonds {
                        let (l, r) = balanced_bipartition(&g)?;
                        edmonds_matrix(&g, &l, &r, &vals)?.determinant()?
                    } else {
                        tutte_matrix(&g, &vals)?.determinant()?
                    };
                    ck.require(!det.is_zero() && det == determinant, "determinant does not reproduce");
                    let m = edge_set(&g, c, "matching")?;
                    ck.require(oracle::is_perfect_matching(&g, &m)?, "matching is not perfect");
                }
                Some("no_perfect_matching") => {
                    ck.require(!perfect, "the graph has a perfect matching");
                }
                _ => return Err(malformed("certificate: unknown verdict")),
            }
        }
        "tjoin" => {
            let g = io::graph_from_json(field(inst, "graph")?)?;
            let t = vertex_set(&g, field(inst, "terminals")?)?;
            let w = io::weights_from_json(field(inst, "weights")?, g.m())?;
            let j = edge_set(&g, c, "join")?;
            let mut want = vec![false; g.n()];
            for &v in &t {
                want[v] ^= true;
            }
            let d = g.degree_vector(&j)?;
            ck.require((0..g.n()).all(|v| (d[v] % 2 == 1) == want[v]), "join is not a T-join");
            ck.require(j.ids().map(|e| w.get(e)).sum::<i64>() == int(c, "weight")?, "weight does not match");
            let mut neg = w.negative_set();
            for e in j.ids() {
                neg.toggle(e);
            }
            ck.require(
                is_conservative(&g, &PmWeighting::negative_on(&neg))?.conservative,
                "w negated on the join has a negative circuit",
            );
            for (key, cap, count) in [("packing", 1, j.count()), ("two_packing", 2, 2 * j.count())] {
                if let Some(p) = c.get(key) {
                    let cuts = parse_cuts(&g, p)?;
                    let ok_cuts = cuts.iter().all(|cut| {
                        let odd = cut.shore.iter().filter(|v| want[**v]).count() % 2 == 1;
                        odd && g.boundary(&cut.shore).map(|b| b.ids().collect::<Vec<_>>() == cut.edges).unwrap_or(false)
                    });
                    ck.require(ok_cuts, "a listed cut is not the T-cut of its shore");
                    ck.require(coverage(&g, &cuts).iter().all(|&k| k <= cap), "cuts overlap too much");
                    ck.require(cuts.len() == count, "wrong number of cuts");
                }
            }
        }
        "factor" => {
            let g = io::graph_from_json(field(inst, "graph")?)?;
            let spec = io::spec_from_json(field(inst, "spec")?, &g)?;
            let f = edge_set(&g, c, "factor")?;
            let def = uint(c, "deficiency")?;
            let cut = field(c, "cut")?;
            let l = vertex_set(&g, field(cut, "L")?)?;
            let u = vertex_set(&g, field(cut, "U")?)?;
            ck.require(spec.deficiency(&g.degree_vector(&f)?)? == def, "deficiency of the factor differs");
            ck.require(verify_factor_cut(&g, &spec, &l, &u)? == def as i64, "cut violation differs from the deficiency");
        }
        "orient" => {
            let g = io::graph_from_json(field(inst, "graph")?)?;
            let spec = io::spec_from_json(field(inst, "spec")?, &g)?;
            let arcs = field(c, "arcs")?.as_array().ok_or_else(|| malformed("certificate: bad arcs"))?;
            let def = uint(c, "deficiency")?;
            let mut indeg = vec![0i64; g.n()];
            let mut ok = arcs.len() == g.m();
            for (e, a) in arcs.iter().enumerate().take(g.m()) {
                let pair = vertex_set(&g, a)?;
                let (x, y) = g.edges()[e];
                ok &= pair.len() == 2 && ((pair[0], pair[1]) == (x, y) || (pair[0], pair[1]) == (y, x));
                if let Some(&h) = pair.get(1) {
                    indeg[h] += 1;
                }
            }
            ck.require(ok, "arcs are not an orientation of the edges");
            ck.require(spec.deficiency(&indeg)? == def, "indegree deficiency differs");
            let (s, _) = g.subdivide();
            let mut l = spec.l.clone();
            let mut u = spec.u.clone();
            let mut p = spec.parity.clone();
            l.resize(s.n(), 1);
            u.resize(s.n(), 1);
            p.resize(s.n(), true);
            let ext = ClassicalSpec::new(l, u, p)?;
            let cut = field(c, "cut")?;
            let idx = |key: &str| -> std::result::Result<Vec<Vertex>, Failure> {
                Ok(ints(cut, key)?.into_iter().map(|x| x as usize).collect())
            };
            ck.require(verify_factor_cut(&s, &ext, &idx("L")?, &idx("U")?)? == def as i64, "cut violation differs from the deficiency");
        }
        "general-factor" => {
            let g = io::graph_from_json(field(inst, "graph")?)?;
            let h = io::sponges_from_json(field(inst, "sponge")?, &g)?;
            let f = edge_set(&g, c, "factor")?;
            let def = uint(c, "deficiency")?;
            ck.require(h.mu(&g.degree_vector(&f)?)? == def, "distance of the factor differs");
            ck.require(improve_round(&g, &h, &f)?.is_none(), "an improving round exists");
            if g.m() <= ENUMERATION_LIMIT {
                ck.require(oracle::general_deficiency(&g, &h)? == def, "exhaustive minimum differs");
            }
        }
        "jump" => {
            let h = io::sponge_list(field(inst, "sponge")?)?;
            let sys = field(inst, "system")?;
            let point = ints(c, "point")?;
            let def = uint(c, "deficiency")?;
            ck.require(h.mu(&point)? == def, "distance of the point differs");
            if let Some(gj) = sys.get("graph") {
                let g = io::graph_from_json(gj)?;
                let j = DegreeVectorOracle::new(g.clone());
                ck.require(jump_sponge_deficiency(&j, &h)?.deficiency == def, "recomputed deficiency differs");
                if g.m() <= ENUMERATION_LIMIT {
                    let pts = oracle::degree_vectors(&g)?;
                    ck.require(pts.contains(&point), "point is not a degree vector");
                    ck.require(oracle::jump_minimum(&pts, &h)? == def, "exhaustive minimum differs");
                }
            } else {
                let j: ExplicitJumpSystem = io::jump_system_from_json(sys)?;
                ck.require(j.contains(&point) == Some(true), "point is not in the system");
                ck.require(oracle::jump_minimum(j.points(), &h)? == def, "exhaustive minimum differs");
            }
        }
        other => return Err(malformed(format!("certificate: cannot verify command {other:?}"))),
    }
    let verified = ck.0.is_empty();
    let res = json!({ "command": "verify", "version": VERSION, "checked": command, "verified": verified, "failures": ck.0 });
    Ok((res, if verified { 0 } else { 2 }))
}

fn parse_cuts(g: &Graph, v: &Value) -> std::result::Result<Vec<TCut>, Failure> {
    let arr = v.as_array().ok_or_else(|| malformed("certificate: cut list is not an array"))?;
    arr.iter()
        .map(|c| {
            let shore = vertex_set(g, field(c, "shore")?)?;
            let edges = ints(c, "edges")?.into_iter().map(|e| e as usize).collect();
            Ok(TCut { shore, edges })
        })
        .collect()
}
