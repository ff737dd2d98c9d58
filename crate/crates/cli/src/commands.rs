use std::fs::File;
use std::io::{BufWriter, Write};
use std::ops::ControlFlow;
use std::time::Duration;

use serde_json::{json, Value};
use twofactor_core::classify::{Budget, ClassificationReport};
use twofactor_core::constructions::{self, NAMES};
use twofactor_core::generator::{generate_all, GenOptions};
use twofactor_core::structure::is_essentially_4_edge_connected;
use twofactor_core::voltage::{enumerate_lifts, BaseGraph, FiniteGroup, LiftOptions};
use twofactor_core::{
    automorphisms, bipartition, classify as run_classify, cyclic_edge_connectivity, edge_connectivity,
    enumerate_perfect_matchings, girth, parse_graph6, transitivity, write_graph6, ClassifyOptions, Graph, Mode,
};

use crate::args::{
    ClassifyArgs, FilterArgs, Format, GenArgs, LiftArgs, MatchingsArgs, ModeArg, NamedArgs, PropsArgs,
};
use crate::input::{for_each_graph, skip};
use crate::CliError;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn workers(requested: Option<usize>) -> Result<usize, CliError> {
    match requested {
        Some(0) => Err(invalid("--workers must be at least 1")),
        Some(w) => Ok(w),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn verdict(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "unknown",
    }
}

/// Checks the classifier preconditions; `Err` carries the reason.
fn suitable(g: &Graph) -> Result<(), String> {
    g.require_cubic().map_err(|e| e.to_string())?;
    if !g.is_connected() {
        return Err("graph is disconnected".into());
    }
    Ok(())
}

fn passes(filter: &FilterArgs, g: &Graph) -> bool {
    if let Some(m) = filter.min_girth {
        if girth(g).is_some_and(|x| x < m) {
            return false;
        }
    }
    if filter.require_bipartite && !bipartition(g).is_bipartite() {
        return false;
    }
    if filter.require_e4ec && !is_essentially_4_edge_connected(g).unwrap_or(false) {
        return false;
    }
    true
}

fn report_json(graph6: &str, r: &ClassificationReport, timings: bool) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    let obj = v.as_object_mut().expect("object");
    obj.insert("graph6".into(), Value::String(graph6.to_string()));
    if timings {
        obj.insert("elapsed_ms".into(), json!(r.elapsed.as_secs_f64() * 1000.0));
    }
    v
}

const TSV_HEADER: &str = "graph6\tn\tgirth\ttwo_factors\tp2fi\t2fi\t2fh\ttypes";

fn report_tsv(graph6: &str, g: &Graph, r: &ClassificationReport) -> String {
    let types: Vec<String> = r.observed_types().iter().map(|t| t.to_string()).collect();
    format!(
        "{graph6}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.n,
        girth(g).map_or("inf".to_string(), |x| x.to_string()),
        r.two_factor_count.map_or("unknown".to_string(), |c| c.to_string()),
        verdict(r.verdict_p2fi),
        verdict(r.verdict_2fi),
        verdict(r.verdict_2fh),
        types.join(";"),
    )
}

pub fn classify(a: &ClassifyArgs, out: &mut impl Write) -> Result<(), CliError> {
    if a.format == Format::Graph6 {
        return Err(invalid("classify writes json or tsv"));
    }
    if a.max_seconds.is_some_and(|s| !(s > 0.0) || !s.is_finite()) {
        return Err(invalid("--max-seconds must be positive"));
    }
    if a.max_matchings == Some(0) {
        return Err(invalid("--max-matchings must be positive"));
    }
    let opts = ClassifyOptions {
        mode: match a.mode {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Heuristic => Mode::Heuristic,
            ModeArg::Hybrid => Mode::Hybrid,
        },
        workers: workers(a.workers)?,
        seed: a.seed,
        budget: Budget {
            time: a.max_seconds.map(Duration::from_secs_f64),
            matchings: a.max_matchings,
        },
        full: a.full,
    };
    let mut dump = match &a.dump_matchings {
        Some(p) => Some(BufWriter::new(
            File::create(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?,
        )),
        None => None,
    };
    if a.format == Format::Tsv {
        writeln!(out, "{TSV_HEADER}")?;
    }
    let (mut graphs, mut filtered) = (0u64, 0u64);
    let mut hits: Vec<(String, bool)> = Vec::new();
    let mut undecided = 0u64;
    for_each_graph(&a.input, |item| {
        if let Err(why) = suitable(&item.graph) {
            return skip(a.input.strict, &format!("{}: {why}", item.graph6));
        }
        if !passes(&a.filter, &item.graph) {
            filtered += 1;
            return Ok(());
        }
        graphs += 1;
        let report = run_classify(&item.graph, &opts).map_err(|e| invalid(e.to_string()))?;
        if let Some(d) = dump.as_mut() {
            writeln!(d, "# {}", item.graph6)?;
            let mut err = None;
            enumerate_perfect_matchings(&item.graph, |m| {
                if let Err(e) = writeln!(d, "{}", m.to_owned().to_line()) {
                    err = Some(e);
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            if let Some(e) = err {
                return Err(e.into());
            }
        }
        match report.verdict_p2fi {
            Some(true) => hits.push((
                item.graph6.clone(),
                is_essentially_4_edge_connected(&item.graph).unwrap_or(false),
            )),
            Some(false) => {}
            None => undecided += 1,
        }
        match a.format {
            Format::Json => writeln!(out, "{}", report_json(&item.graph6, &report, a.timings))?,
            _ => writeln!(out, "{}", report_tsv(&item.graph6, &item.graph, &report))?,
        }
        Ok(())
    })?;
    if let Some(mut d) = dump {
        d.flush()?;
    }
    out.flush()?;
    eprintln!(
        "summary: {graphs} classified, {filtered} filtered, {} pseudo 2-factor isomorphic, {undecided} undecided",
        hits.len()
    );
    for (g6, e4ec) in &hits {
        eprintln!("p2fi\t{g6}\te4ec={e4ec}");
    }
    Ok(())
}

pub fn props(a: &PropsArgs, out: &mut impl Write) -> Result<(), CliError> {
    if a.format == Format::Graph6 {
        return Err(invalid("props writes json or tsv"));
    }
    if a.format == Format::Tsv {
        writeln!(
            out,
            "graph6\tn\tedges\tgirth\tbipartite\tedge_connectivity\tcyclic_edge_connectivity\te4ec\taut_order\tvertex_transitive\tedge_transitive\tsemisymmetric"
        )?;
    }
    for_each_graph(&a.input, |item| {
        let g = &item.graph;
        let info = automorphisms(g);
        let tr = transitivity(g);
        let e4ec = g.is_cubic().then(|| is_essentially_4_edge_connected(g).unwrap_or(false));
        let cec = cyclic_edge_connectivity(g);
        match a.format {
            Format::Json => {
                let v = json!({
                    "graph6": item.graph6,
                    "n": g.n(),
                    "edges": g.edge_count(),
                    "girth": girth(g),
                    "bipartite": bipartition(g).is_bipartite(),
                    "edge_connectivity": edge_connectivity(g),
                    "cyclic_edge_connectivity": cec,
                    "essentially_4_edge_connected": e4ec,
                    "aut_order": info.group_order.to_string(),
                    "vertex_orbits": info.vertex_orbits.len(),
                    "edge_orbits": info.edge_orbits.len(),
                    "vertex_transitive": tr.vertex_transitive,
                    "edge_transitive": tr.edge_transitive,
                    "semisymmetric": tr.semisymmetric,
                });
                writeln!(out, "{v}")?;
            }
            _ => {
                let opt = |x: Option<usize>| x.map_or("undefined".to_string(), |v| v.to_string());
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    item.graph6,
                    g.n(),
                    g.edge_count(),
                    girth(g).map_or("inf".to_string(), |x| x.to_string()),
                    bipartition(g).is_bipartite(),
                    edge_connectivity(g),
                    opt(cec),
                    e4ec.map_or("n/a".to_string(), |x| x.to_string()),
                    info.group_order,
                    tr.vertex_transitive,
                    tr.edge_transitive,
                    tr.semisymmetric,
                )?;
            }
        }
        Ok(())
    })
}

pub fn gen(a: &GenArgs, out: &mut impl Write) -> Result<(), CliError> {
    if a.n % 2 == 1 {
        return Err(invalid(format!("n = {} is odd", a.n)));
    }
    if a.n > 26 {
        eprintln!("warning: n = {} is beyond 26 vertices; expect a long run", a.n);
    }
    let opts = GenOptions {
        workers: workers(a.workers)?,
        progress: a.progress.then_some(progress as fn(u64)),
    };
    let graphs = generate_all(a.n, &opts).map_err(|e| invalid(e.to_string()))?;
    if a.count_only {
        writeln!(out, "{}", graphs.len())?;
        return Ok(());
    }
    match &a.output {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?);
            for g in &graphs {
                writeln!(f, "{}", write_graph6(g))?;
            }
            f.flush()?;
        }
        None => {
            for g in &graphs {
                writeln!(out, "{}", write_graph6(g))?;
            }
        }
    }
    eprintln!("{} graphs", graphs.len());
    Ok(())
}

fn progress(configs: u64) {
    eprintln!("... {configs} configurations");
}

fn parse_base(spec: &str) -> Result<BaseGraph, CliError> {
    if spec.eq_ignore_ascii_case("theta") {
        return Ok(BaseGraph::theta());
    }
    let g = match spec.strip_prefix("g6:") {
        Some(s) => parse_graph6(s).map_err(|e| invalid(format!("base: {e}")))?,
        None => constructions::named(spec).map_err(|e| invalid(format!("base: {e}")))?,
    };
    Ok(BaseGraph::from_graph(&g))
}

pub fn lift(a: &LiftArgs, out: &mut impl Write) -> Result<(), CliError> {
    if a.format == Format::Tsv {
        return Err(invalid("lift writes graph6 or json"));
    }
    if a.min_girth < 3 {
        return Err(invalid("--min-girth must be at least 3"));
    }
    let base = parse_base(&a.base)?;
    if !base.is_connected() {
        return Err(invalid("base graph must be connected"));
    }
    let group = FiniteGroup::parse(&a.group).map_err(|e| invalid(e.to_string()))?;
    let opts = LiftOptions {
        min_girth: a.min_girth,
        connected_only: !a.allow_disconnected,
        workers: workers(a.workers)?,
    };
    let lifts = enumerate_lifts(&base, &group, &opts, |_| true);
    for f in &lifts {
        match a.format {
            Format::Json => writeln!(
                out,
                "{}",
                json!({
                    "graph6": write_graph6(&f.graph),
                    "n": f.graph.n(),
                    "girth": girth(&f.graph),
                    "voltages": f.voltages,
                })
            )?,
            _ => writeln!(out, "{}", write_graph6(&f.graph))?,
        }
    }
    eprintln!("{} lifts", lifts.len());
    Ok(())
}

pub fn named(a: &NamedArgs, out: &mut impl Write) -> Result<(), CliError> {
    if a.list {
        for n in NAMES {
            writeln!(out, "{n}")?;
        }
        return Ok(());
    }
    let name = a.name.as_deref().ok_or_else(|| invalid("give a graph name or --list"))?;
    let g = constructions::named(name).map_err(|e| invalid(e.to_string()))?;
    match a.format {
        Format::Graph6 => writeln!(out, "{}", write_graph6(&g))?,
        Format::Json => writeln!(
            out,
            "{}",
            json!({ "name": name, "graph6": write_graph6(&g), "n": g.n(), "edges": g.edges() })
        )?,
        Format::Tsv => return Err(invalid("named writes graph6 or json")),
    }
    Ok(())
}

pub fn matchings(a: &MatchingsArgs, out: &mut impl Write) -> Result<(), CliError> {
    for_each_graph(&a.input, |item| {
        let g = &item.graph;
        if a.types {
            if let Err(why) = suitable(g) {
                return skip(a.input.strict, &format!("{}: {why}", item.graph6));
            }
        }
        if a.count_only {
            let c = enumerate_perfect_matchings(g, |_| ControlFlow::Continue(()));
            writeln!(out, "{}\t{c}", item.graph6)?;
            return Ok(());
        }
        writeln!(out, "# {}", item.graph6)?;
        let mut err = None;
        enumerate_perfect_matchings(g, |m| {
            let pm = m.to_owned();
            let line = if a.types {
                let t = twofactor_core::two_factor_of(g, &pm).expect("checked cubic");
                format!("{}\t{t}", pm.to_line())
            } else {
                pm.to_line()
            };
            if let Err(e) = writeln!(out, "{line}") {
                err = Some(e);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        match err {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    })
}
