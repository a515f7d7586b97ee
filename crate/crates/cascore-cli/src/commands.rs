use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use cascore::benchgen::{generate, GenConfig};
use cascore::ecg::{cas_ecg, EcgConfig, Scheme};
use cascore::graph::Cover;
use cascore::io;
use cascore::louvain::{louvain, modularity};
use cascore::metrics::{ami, onmi, roc};
use cascore::overlap::{ego_split, outlier_counts_per_tau, refine_cover, RefineConfig, DEFAULT_TAU_GRID};
use cascore::scores::{rank_communities, score_all, ScoreKind, ScoreRow, ScoreTable};
use cascore::{Error, Graph, Partition};
use serde_json::json;

use crate::manifest::{emit, RunManifest};
use crate::plot;
use crate::{
    EcgArgs, EvalArgs, GenerateArgs, OutliersArgs, PartitionArgs, PlotArgs, RefineArgs, ScoreArgs,
};

/// Command failure with its exit code class: bad input (2) or a computation
/// that is degenerate on this input (1).
pub enum Failure {
    Input(String),
    Degenerate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::EmptyGraph
            | Error::NoNodes
            | Error::EmptyCover
            | Error::NoCommunities
            | Error::SingleClass => Failure::Degenerate(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path, manifest: &mut RunManifest) -> Result<Graph, Failure> {
    let text = read(path)?;
    manifest.add_input(path, &text);
    Ok(Graph::parse_edge_list(&text)?)
}

fn kind_json(kind: ScoreKind) -> serde_json::Value {
    json!(kind.name())
}

fn json_line(fields: &[(&str, serde_json::Value)]) -> String {
    let map: serde_json::Map<String, serde_json::Value> = fields
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map)).unwrap();
    s.push('\n');
    s
}

pub fn cmd_score(args: &ScoreArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new(
        "score",
        None,
        json!({
            "graph": args.graph.display().to_string(),
            "communities": args.communities.display().to_string(),
            "score": kind_json(args.score),
            "node": args.node,
            "top": args.top,
        }),
    );
    let g = load_graph(&args.graph, &mut manifest)?;
    let text = read(&args.communities)?;
    manifest.add_input(&args.communities, &text);
    let cover = io::parse_communities(&g, &text)?;

    let table = if let Some(top) = args.top {
        // rebuild rows from the full per-node ranking so every node gets
        // exactly `top` rows even when it touches no community
        let communities = cover.communities();
        let mut rows = Vec::new();
        for v in 0..g.n_nodes() {
            for &(c, _) in rank_communities(&g, v, &cover, args.score)?.iter().take(top) {
                let members = &communities[c];
                rows.push(ScoreRow {
                    node: v,
                    community: c,
                    ief: cascore::scores::ief(&g, v, members)?,
                    nief: cascore::scores::nief(&g, v, members)?,
                    p: cascore::scores::p_score(&g, v, members)?,
                });
            }
        }
        ScoreTable { rows }
    } else {
        score_all(&g, &cover)?
    };

    let mut rows = table.rows;
    if let Some(label) = &args.node {
        let v = g.require_node(label)?;
        rows.retain(|r| r.node == v);
    }
    let table = ScoreTable { rows };
    emit(
        &args.out.out_dir,
        args.out.stdout,
        &manifest,
        &[("scores.csv", table.to_csv(&g))],
    )
}

pub fn cmd_partition(args: &PartitionArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new(
        "partition",
        Some(args.seed),
        json!({ "graph": args.graph.display().to_string() }),
    );
    let g = load_graph(&args.graph, &mut manifest)?;
    let p = louvain(&g, args.seed)?;
    let q = modularity(&g, &p)?;
    let summary = json_line(&[
        ("modularity", json!(q)),
        ("n_communities", json!(p.n_parts())),
    ]);
    emit(
        &args.out.out_dir,
        args.out.stdout,
        &manifest,
        &[
            ("partition.tsv", io::write_partition(&g, &p)),
            ("summary.json", summary),
        ],
    )
}

pub fn cmd_ecg(args: &EcgArgs) -> Result<(), Failure> {
    let config = EcgConfig::new(args.k, args.scheme, args.score, args.floor, args.seed)?;
    let mut manifest = RunManifest::new(
        "ecg",
        Some(args.seed),
        json!({
            "graph": args.graph.display().to_string(),
            "k": args.k,
            "scheme": scheme_name(args.scheme),
            "score": kind_json(args.score),
            "floor": args.floor,
            "weights": args.weights,
        }),
    );
    let g = load_graph(&args.graph, &mut manifest)?;
    let result = cas_ecg(&g, &config)?;
    let q = modularity(&g, &result.partition)?;
    let summary = json_line(&[
        ("modularity", json!(q)),
        ("n_communities", json!(result.partition.n_parts())),
    ]);
    let mut files = vec![
        ("partition.tsv", io::write_partition(&g, &result.partition)),
        ("summary.json", summary),
    ];
    if args.weights {
        files.push(("weighted.edges", result.weighted.to_edge_list(6)));
    }
    emit(&args.out.out_dir, args.out.stdout, &manifest, &files)
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::Ecg => "ecg",
        Scheme::Or => "or",
        Scheme::And => "and",
    }
}

pub fn cmd_outliers(args: &OutliersArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new(
        "outliers",
        Some(args.seed),
        json!({
            "graph": args.graph.display().to_string(),
            "partition": args.partition.as_ref().map(|p| p.display().to_string()),
            "score": kind_json(args.score),
            "truth": args.truth.as_ref().map(|p| p.display().to_string()),
        }),
    );
    let g = load_graph(&args.graph, &mut manifest)?;
    let found = match &args.partition {
        Some(path) => {
            let text = read(path)?;
            manifest.add_input(path, &text);
            io::parse_partition(&g, &text)?
        }
        None => {
            let config = EcgConfig {
                kind: args.score,
                seed: args.seed,
                ..EcgConfig::default()
            };
            cas_ecg(&g, &config)?.partition
        }
    };

    // best community and score per node from the batch table; every node has
    // at least the row for its own part
    let table = score_all(&g, &found.as_cover())?;
    let mut best: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for row in &table.rows {
        let s = row.get(args.score);
        let entry = best.entry(row.node).or_insert((s, row.community));
        if s > entry.0 {
            *entry = (s, row.community);
        }
    }
    let mut ranked: Vec<(usize, f64, usize)> = best
        .into_iter()
        .map(|(v, (s, c))| (v, s, c))
        .collect();
    ranked.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .unwrap()
            .then_with(|| g.label(a.0).cmp(g.label(b.0)))
    });
    let mut csv = String::from("node,max_cas,community\n");
    for (v, s, c) in &ranked {
        csv.push_str(&format!("{},{:.6},{}\n", g.label(*v), s, c));
    }

    let mut files = vec![("outliers.csv", csv)];
    if let Some(path) = &args.truth {
        let text = read(path)?;
        manifest.add_input(path, &text);
        let true_outliers = io::parse_node_set(&g, &text)?;
        let set: std::collections::HashSet<_> = true_outliers.into_iter().collect();
        let mut scores = vec![0.0; g.n_nodes()];
        for &(v, s, _) in &ranked {
            scores[v] = s;
        }
        let labels: Vec<bool> = (0..g.n_nodes()).map(|v| set.contains(&v)).collect();
        let curve = roc(&scores, &labels)?;
        files.push(("roc.csv", curve.to_csv()));
        files.push(("auc.json", json_line(&[("auc", json!(curve.auc))])));
    }
    emit(&args.out.out_dir, args.out.stdout, &manifest, &files)
}

pub fn cmd_refine(args: &RefineArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new(
        "refine",
        Some(args.seed),
        json!({
            "graph": args.graph.display().to_string(),
            "cover": args.cover.as_ref().map(|p| p.display().to_string()),
            "init": if args.init.is_some() { Some("ego-split") } else { None },
            "ego_min_size": args.ego_min_size,
            "score": kind_json(args.score),
            "tau": args.tau,
            "tau_grid": args.tau_grid,
            "min_size": args.min_size,
            "truth": args.truth.as_ref().map(|p| p.display().to_string()),
        }),
    );
    let g = load_graph(&args.graph, &mut manifest)?;
    let initial = match (&args.cover, args.init.is_some()) {
        (Some(path), false) => {
            let text = read(path)?;
            manifest.add_input(path, &text);
            io::parse_communities(&g, &text)?
        }
        (None, true) => ego_split(&g, args.seed, args.ego_min_size)?,
        _ => {
            return Err(Failure::Input(
                "provide either a cover file or --init ego-split".into(),
            ))
        }
    };

    let config = RefineConfig::new(args.score, args.tau, args.min_size)?;
    let refined = refine_cover(&g, &initial, &config)?;
    if refined.n_communities() == 0 || refined.count_outliers() == g.n_nodes() {
        eprintln!(
            "warning: refinement at tau={} left every node an outlier",
            args.tau
        );
    }

    let grid: Vec<f64> = match &args.tau_grid {
        Some(s) => parse_grid(s)?,
        None => DEFAULT_TAU_GRID.to_vec(),
    };
    let counts = outlier_counts_per_tau(&g, &initial, args.score, &grid, args.min_size)?;
    let mut tau_csv = String::from("tau,outliers\n");
    for (tau, n) in &counts {
        tau_csv.push_str(&format!("{tau},{n}\n"));
    }

    let mut summary = vec![
        ("tau", json!(args.tau)),
        ("outliers_before", json!(initial.count_outliers())),
        ("outliers_after", json!(refined.count_outliers())),
        ("n_communities", json!(refined.n_communities())),
    ];
    if let Some(path) = &args.truth {
        let text = read(path)?;
        manifest.add_input(path, &text);
        let truth = io::parse_communities(&g, &text)?;
        let before = onmi(&initial, &truth)?;
        let after = onmi(&refined, &truth)?;
        println!("onmi before: {before:.6}");
        println!("onmi after:  {after:.6}");
        summary.push(("onmi_before", json!(before)));
        summary.push(("onmi_after", json!(after)));
    }

    emit(
        &args.out.out_dir,
        args.out.stdout,
        &manifest,
        &[
            ("refined.cover", io::write_cover(&g, &refined)),
            ("tau_counts.csv", tau_csv),
            ("summary.json", json_line(&summary)),
        ],
    )
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Input(format!("bad tau value {t:?} in --tau-grid")))
        })
        .collect()
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<(), Failure> {
    let config = GenConfig {
        n: args.n,
        gamma: args.gamma,
        d_min: args.d_min,
        d_max: args.d_max,
        beta: args.beta,
        s_min: args.s_min,
        s_max: args.s_max,
        xi: args.xi,
        n_outliers: args.outliers,
        eta: args.eta,
        seed: args.seed,
    };
    let manifest = RunManifest::new(
        "generate",
        Some(args.seed),
        json!({
            "n": args.n,
            "gamma": args.gamma,
            "d_min": args.d_min,
            "d_max": args.d_max,
            "beta": args.beta,
            "s_min": args.s_min,
            "s_max": args.s_max,
            "xi": args.xi,
            "outliers": args.outliers,
            "eta": args.eta,
        }),
    );
    let out = generate(&config)?;
    emit(
        &args.out.out_dir,
        args.out.stdout,
        &manifest,
        &[
            ("graph.edges", out.graph.to_edge_list(6)),
            ("truth.cover", io::write_cover(&out.graph, &out.truth)),
            ("outliers.nodes", io::write_node_set(&out.graph, &out.outliers)),
        ],
    )
}

fn as_partition(cover: &Cover) -> Option<Partition> {
    let mut raw = Vec::with_capacity(cover.n_nodes());
    for v in 0..cover.n_nodes() {
        match cover.memberships_of(v) {
            [c] => raw.push(*c),
            _ => return None,
        }
    }
    Some(Partition::from_assignments(&raw))
}

pub fn cmd_eval(args: &EvalArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new(
        "eval",
        None,
        json!({
            "graph": args.graph.display().to_string(),
            "pred": args.pred.display().to_string(),
            "truth": args.truth.display().to_string(),
        }),
    );
    let g = load_graph(&args.graph, &mut manifest)?;
    let pred_text = read(&args.pred)?;
    manifest.add_input(&args.pred, &pred_text);
    let truth_text = read(&args.truth)?;
    manifest.add_input(&args.truth, &truth_text);
    let pred = io::parse_communities(&g, &pred_text)?;
    let truth = io::parse_communities(&g, &truth_text)?;

    let mut fields = Vec::new();
    match (as_partition(&pred), as_partition(&truth)) {
        (Some(p), Some(t)) => {
            fields.push(("ami", json!(ami(&p, &t)?)));
            fields.push(("modularity", json!(modularity(&g, &p)?)));
        }
        _ => {
            fields.push(("onmi", json!(onmi(&pred, &truth)?)));
        }
    }
    emit(
        &args.out.out_dir,
        args.out.stdout,
        &manifest,
        &[("metrics.json", json_line(&fields))],
    )
}

pub fn cmd_plot(args: &PlotArgs) -> Result<(), Failure> {
    let mut manifest = RunManifest::new(
        "plot",
        None,
        json!({
            "input": args.input.display().to_string(),
            "kind": args.kind,
        }),
    );
    let text = read(&args.input)?;
    manifest.add_input(&args.input, &text);

    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Failure::Input("empty csv".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() != 2 {
        return Err(Failure::Input(format!(
            "expected a two-column csv, got header {header:?}"
        )));
    }
    let mut rows: Vec<(String, f64)> = Vec::new();
    for (i, line) in lines.enumerate() {
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Failure::Input(format!("bad csv row {}: {line:?}", i + 2)));
        }
        let y: f64 = parts[1]
            .parse()
            .map_err(|_| Failure::Input(format!("bad value {:?} on row {}", parts[1], i + 2)))?;
        rows.push((parts[0].to_string(), y));
    }
    if rows.is_empty() {
        return Err(Failure::Degenerate("csv has no data rows".into()));
    }

    let kind = match args.kind.as_deref() {
        Some(k) => k.to_string(),
        // a curve csv has a numeric first column; labelled tables become bars
        None => {
            if cols == ["tau", "outliers"] {
                "bar".into()
            } else {
                "line".into()
            }
        }
    };
    let svg = match kind.as_str() {
        "line" => {
            let pts: Result<Vec<(f64, f64)>, Failure> = rows
                .iter()
                .map(|(x, y)| {
                    x.parse::<f64>()
                        .map(|xv| (xv, *y))
                        .map_err(|_| Failure::Input(format!("bad x value {x:?} for a line chart")))
                })
                .collect();
            let pts = pts?;
            let unit = pts
                .iter()
                .all(|&(x, y)| (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
            let (xr, yr) = if unit {
                ((0.0, 1.0), (0.0, 1.0))
            } else {
                let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
                let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
                (
                    (xs.iter().cloned().fold(f64::MAX, f64::min), xs.iter().cloned().fold(f64::MIN, f64::max)),
                    (0.0, ys.iter().cloned().fold(f64::MIN, f64::max).max(1e-12)),
                )
            };
            plot::line_chart(&pts, xr, yr, cols[0], cols[1])
        }
        "bar" => plot::bar_chart(&rows, cols[0], cols[1]),
        other => return Err(Failure::Input(format!("unknown plot kind {other:?}"))),
    };
    emit(&args.out.out_dir, args.out.stdout, &manifest, &[("plot.svg", svg)])
}
