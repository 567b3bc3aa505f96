//! One function per subcommand, each returning the record printed on stdout.

use std::path::{Path, PathBuf};

use selfaffine_core::connect::{
    adjacency_matrix, chain_is_valid, chain_witness, classify, column_adjacent, diagonal_adjacent,
    horizontal_gap_bound, inner_band, next_column_range, oracle_adjacency, outer_band,
    same_column_range, vertical_adjacent, Branch, ConnectStatus, ConnectVerdict, IntersectionCase,
};
use selfaffine_core::extremal::{
    extremes_report, Attainability, AttainabilityResult, ExtremeSymbol,
};
use selfaffine_core::geometry::{
    adjacency_graph_with_budget, first_certified_cut, graph_connected, EdgeLabel, EdgePolicy,
    DEFAULT_NODE_BUDGET,
};
use selfaffine_core::params::{normalize_sign, validate};
use selfaffine_core::render::{render, RenderFormat};
use selfaffine_core::tiling::{
    cardinality_probe, classify_tile_with_budget, discreteness_probe, CardinalityOutcome,
    TileStatus,
};
use selfaffine_core::{parse_rational, AffinePair, Rational};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::record::Record;
use crate::sweep::{run_sweep, write_file, SweepSpec};

/// Raw positional parameters; `a` is the lower-left matrix entry.
#[derive(Debug, Clone)]
pub struct PairArgs {
    pub p: i64,
    pub q: i64,
    pub a: String,
    pub m: u32,
    pub n: u32,
}

impl PairArgs {
    pub fn pair(&self) -> Result<AffinePair, CliError> {
        let a = parse_rational("a", &self.a)?;
        Ok(AffinePair::new(self.p, self.q, a, self.m, self.n)?)
    }
}

fn band_text(band: &(Rational, Option<Rational>)) -> String {
    match &band.1 {
        Some(hi) => format!("[{},{}]", band.0, hi),
        None => format!("[{},inf)", band.0),
    }
}

fn push_pair(r: &mut Record, pair: &AffinePair) {
    r.push("p", pair.p())
        .push("q", pair.q())
        .push("a", pair.lower_left())
        .push("m", pair.m())
        .push("n", pair.n());
}

fn push_verdict(r: &mut Record, v: &ConnectVerdict) {
    r.push("verdict", v.status_name())
        .push("branch", v.branch.name())
        .push("inequality", &v.satisfied_inequality);
    if let ConnectStatus::OutOfScope(why) = &v.status {
        r.push("out_of_scope", why);
    }
}

pub fn decide(args: &PairArgs) -> Result<Record, CliError> {
    let pair = args.pair()?;
    let norm = normalize_sign(&pair);
    let verdict = classify(&norm);
    let report = validate(&norm);
    let mut r = Record::new("decide");
    push_pair(&mut r, &pair);
    r.push("normalized", norm != pair);
    push_verdict(&mut r, &verdict);
    r.push("abs_a", norm.a_abs())
        .push("outer_band", band_text(&outer_band(norm.q(), norm.n())))
        .push("inner_band", band_text(&inner_band(norm.q(), norm.n())))
        .push("main_theorem_ok", report.main_theorem_ok)
        .push("deng_lau_ok", report.deng_lau_ok)
        .push("tile_dimension_ok", report.tile_dimension_ok)
        .push("hypothesis_notes", report.messages.join("; "));
    Ok(r)
}

fn status_text(res: &AttainabilityResult) -> &'static str {
    match res.status {
        Attainability::Attainable(_) => "Attainable",
        Attainability::Unattainable => "Unattainable",
        Attainability::Unknown => "Unknown",
    }
}

fn tri_text(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "Connected",
        Some(false) => "Disconnected",
        None => "Unknown",
    }
}

pub fn verify(args: &PairArgs, cfg: &RunConfig) -> Result<Record, CliError> {
    let pair = args.pair()?;
    let norm = normalize_sign(&pair);
    let formula = classify(&norm);
    let mut r = Record::new("verify");
    push_pair(&mut r, &pair);
    r.push("depth", cfg.depth);
    r.push("formula", formula.status_name())
        .push("formula_branch", formula.branch.name());
    let formula_known = match formula.status {
        ConnectStatus::OutOfScope(_) => None,
        _ => Some(formula.is_connected()),
    };

    let oracle = if validate(&norm).main_theorem_ok {
        let o = oracle_adjacency(&norm, cfg.depth)?;
        let cases = [
            (IntersectionCase::NextColumnSameRow, &o.horizontal),
            (IntersectionCase::SameColumn, &o.vertical),
            (IntersectionCase::NextColumnNextRow, &o.diag_up),
            (IntersectionCase::NextColumnPrevRow, &o.diag_down),
            (IntersectionCase::ColumnCrossing, &o.column),
        ];
        for (case, res) in cases {
            r.push(&format!("oracle_{}", case.name()), status_text(res));
            if let Some(w) = res.witness() {
                r.push(&format!("witness_{}", case.name()), w);
            }
        }
        r.push("oracle", tri_text(o.connected()));
        Some(o.connected())
    } else {
        r.push("oracle", "NotApplicable");
        None
    };

    let pool = cfg.pool()?;
    let cut = pool.install(|| first_certified_cut(&norm, cfg.depth, DEFAULT_NODE_BUDGET))?;
    let graph_connected = match &cut {
        Some(g) => {
            r.push("graph", "Disconnected")
                .push("graph_cut_depth", g.depth)
                .push("graph_components", g.components().len());
            false
        }
        None => {
            r.push("graph", "Connected")
                .push("graph_note", "no separation certified up to depth");
            true
        }
    };

    let agree = |other: Option<bool>| match (formula_known, other) {
        (Some(f), Some(o)) => (f == o).to_string(),
        _ => "unknown".to_string(),
    };
    r.push("formula_oracle_agree", agree(oracle.flatten()));
    let graph_agree = match (formula_known, graph_connected) {
        (Some(f), g) if f == g => "true".to_string(),
        // the graph can miss a separation at finite depth but never invents one
        (Some(false), true) => "inconclusive".to_string(),
        (Some(_), _) => "false".to_string(),
        (None, _) => "unknown".to_string(),
    };
    r.push("formula_graph_agree", graph_agree);
    Ok(r)
}

pub fn extremes(p: i64, q: i64, m: u32, cfg: &RunConfig) -> Result<Record, CliError> {
    let rep = extremes_report(p, q, m, cfg.depth)?;
    let mut r = Record::new("extremes");
    r.push("p", p)
        .push("q", q)
        .push("m", m)
        .push("depth", cfg.depth);
    for s in ExtremeSymbol::ALL {
        r.push(s.name(), &rep.closed[&s])
            .push(&format!("{}_enclosure", s.name()), &rep.enclosures[&s])
            .push(&format!("{}_contained", s.name()), rep.contained(s));
    }
    r.push("all_contained", rep.all_contained())
        .push("widths_within_tail", rep.widths_within_tail());
    Ok(r)
}

fn piece(pc: (u32, u32)) -> String {
    format!("{}:{}", pc.0, pc.1)
}

/// `graph_depth` adds the geometric graph's edge labels at that depth.
pub fn adjacency(
    args: &PairArgs,
    graph_depth: Option<u32>,
    cfg: &RunConfig,
) -> Result<Record, CliError> {
    let pair = args.pair()?;
    let norm = normalize_sign(&pair);
    let mut r = Record::new("adjacency");
    push_pair(&mut r, &pair);
    let adj = adjacency_matrix(&norm)?;
    let (gap, gap_range) = horizontal_gap_bound(&norm)?;
    r.push("horizontal_gap", gap)
        .push("horizontal_gap_range", gap_range)
        .push("same_column_range", same_column_range(&norm))
        .push("next_column_range", next_column_range(&norm))
        .push("column_adjacent", column_adjacent(&norm))
        .push("vertical_adjacent", vertical_adjacent(&norm))
        .push("diagonal_adjacent", diagonal_adjacent(&norm))
        .push("horizontal", adj.horizontal)
        .push("vertical", adj.vertical)
        .push("diag_up", adj.diag_up)
        .push("diag_down", adj.diag_down)
        .push("column", adj.column)
        .push("outer_route", adj.outer_route())
        .push("inner_route", adj.inner_route());
    let verdict = classify(&norm);
    if verdict.is_connected() && verdict.branch != Branch::DengLau {
        let chain = chain_witness(&norm)?;
        let order: Vec<String> = chain.order.iter().copied().map(piece).collect();
        let links: Vec<&str> = chain.links.iter().map(|l| l.name()).collect();
        r.push("chain", order.join(" "))
            .push("chain_links", links.join(" "))
            .push("chain_valid", chain_is_valid(&norm, &chain));
    } else {
        r.push("chain", "none");
    }
    if let Some(depth) = graph_depth {
        let pool = cfg.pool()?;
        let g = pool.install(|| adjacency_graph_with_budget(&norm, depth, DEFAULT_NODE_BUDGET))?;
        r.push("graph_depth", depth)
            .push("graph_error_radius", &g.error_radius)
            .push(
                "graph_connected",
                graph_connected(&g, EdgePolicy::PlausibleOnly),
            );
        for e in &g.edges {
            let label = match e.label {
                EdgeLabel::CertifiedDisjoint => "certified_disjoint",
                EdgeLabel::Plausible if e.exhausted => "plausible_budget",
                EdgeLabel::Plausible => "plausible",
            };
            r.push(&format!("edge_{}_{}", piece(e.a), piece(e.b)), label);
        }
    }
    Ok(r)
}

pub fn tile(args: &PairArgs, k_max: u32, cfg: &RunConfig) -> Result<Record, CliError> {
    let pair = args.pair()?;
    let v = classify_tile_with_budget(&pair, cfg.point_budget)?;
    let mut r = Record::new("tile");
    push_pair(&mut r, &pair);
    let status = match v.status {
        TileStatus::Tile => "Tile",
        TileStatus::NotTile => "NotTile",
        TileStatus::Unknown => "Unknown",
    };
    r.push("status", status).push("case", v.case.name());
    if let Some(w) = &v.witness {
        r.push("witness", w)
            .push("witness_valid", w.is_valid(&pair));
    }
    match cardinality_probe(&pair, k_max, cfg.point_budget)? {
        CardinalityOutcome::Pass { through } => {
            r.push("cardinality", "pass")
                .push("cardinality_through", through);
        }
        CardinalityOutcome::Fail { k, witness } => {
            r.push("cardinality", "fail")
                .push("cardinality_k", k)
                .push("cardinality_witness", witness);
        }
        CardinalityOutcome::Unknown { checked_through } => {
            r.push("cardinality", "unknown")
                .push("cardinality_through", checked_through);
        }
    }
    for (k, d) in discreteness_probe(&pair, k_max, cfg.point_budget)? {
        r.push(&format!("min_distance_k{k}"), d);
    }
    Ok(r)
}

pub struct SweepArgs {
    pub p: i64,
    pub q: i64,
    pub m: u32,
    pub n: u32,
    pub a_min: String,
    pub a_max: String,
    pub steps: u32,
    pub oracle: bool,
    pub out: Option<PathBuf>,
    pub phase: Option<PathBuf>,
}

/// Writes the CSV (and the phase strip if asked); per-row timings go to `timing`.
pub fn sweep(
    args: &SweepArgs,
    cfg: &RunConfig,
    timing: &mut dyn std::io::Write,
) -> Result<Record, CliError> {
    let spec = SweepSpec {
        p: args.p,
        q: args.q,
        m: args.m,
        n: args.n,
        a_min: parse_rational("a_min", &args.a_min)?,
        a_max: parse_rational("a_max", &args.a_max)?,
        steps: args.steps,
        oracle_depth: args.oracle.then_some(cfg.depth),
    };
    let pool = cfg.pool()?;
    let res = run_sweep(&spec, &pool)?;
    for (row, t) in res.rows.iter().zip(&res.timings) {
        writeln!(timing, "a={} seconds={:.6}", row.a, t.as_secs_f64())?;
    }
    cfg.ensure_output_dir()?;
    let out = args.out.clone().unwrap_or_else(|| {
        cfg.output_dir.join(format!(
            "sweep_p{}_q{}_m{}_n{}.csv",
            spec.p, spec.q, spec.m, spec.n
        ))
    });
    write_file(&out, &res.to_csv()?)?;
    let mut r = Record::new("sweep");
    r.push("p", spec.p)
        .push("q", spec.q)
        .push("m", spec.m)
        .push("n", spec.n)
        .push("a_min", &spec.a_min)
        .push("a_max", &spec.a_max)
        .push("steps", spec.steps)
        .push("rows", res.rows.len())
        .push("csv", out.display());
    let flips: Vec<String> = res.transitions().iter().map(Rational::to_string).collect();
    r.push("transitions", flips.join(","));
    if let Some(phase) = &args.phase {
        write_file(phase, &res.phase_strip(16).encode_pgm())?;
        r.push("phase", phase.display());
    }
    Ok(r)
}

pub fn render_cmd(
    args: &PairArgs,
    format: RenderFormat,
    out: Option<&Path>,
    cfg: &RunConfig,
) -> Result<Record, CliError> {
    let pair = args.pair()?;
    let bytes = render(&pair, cfg.depth, format, cfg.raster_size, cfg.point_budget)?;
    cfg.ensure_output_dir()?;
    let ext = match format {
        RenderFormat::Pgm => "pgm",
        RenderFormat::Svg => "svg",
    };
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.output_dir.join(format!("render.{ext}")));
    write_file(&path, &bytes)?;
    let mut r = Record::new("render");
    push_pair(&mut r, &pair);
    r.push("depth", cfg.depth)
        .push("size", cfg.raster_size)
        .push("format", ext)
        .push("bytes", bytes.len())
        .push("path", path.display());
    Ok(r)
}
