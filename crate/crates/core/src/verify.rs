//! Exhaustive certification suites: each enumerates a family of small graphs,
//! recomputes spectra and parameters, and checks a bound or an extremal
//! characterization on every member.
//!
//! Reports are deterministic: findings are sorted by graph6 string, and the
//! wall time is kept out of the serialized form.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::blocks::decompose_blocks;
use crate::bounds::{
    beta_gamma, cioba_bound_v2, dh_bound, dh_bound_unscaled, dh_dominance_condition, llt_baseline,
    pineapple_lower, pineapple_regime, pineapple_upper, pineapple_upper_formulas, quadratic_min_check,
    treewidth_bound, BOUND_TOL,
};
use crate::canon::canonical_key;
use crate::families::{enumerate_family, pineapple, s_knk, Family, FamilyError};
use crate::graph::{Graph, Vertex};
use crate::params::{
    edge_disjoint_paths, graph_params, independence_number_blockgraph, independence_number_blockgraph_with,
    independence_number_bruteforce, leaf_block_ledger, maximum_independent_sets, LeafChoice, ParamError,
};
use crate::spectra::{pineapple_rho_exact, spectral_radius, spectral_radius_jacobi};

pub const SCHEMA_VERSION: u32 = 1;
/// Stored findings per list; the total is always counted.
pub const FINDING_CAP: usize = 100;
/// Tolerance for equality of a spectral radius with a bound.
pub const EQUALITY_TOL: f64 = 1e-9;

const CHUNK: usize = 2048;

pub const DH_MAX_N: usize = 8;
pub const BLOCK_MAX_N: usize = 11;
pub const MACHINERY_MAX_N: usize = 9;
pub const PINEAPPLE_MAX_N: usize = 60;
/// Block graphs enumerated by the pineapple suite for the final bound.
pub const PINEAPPLE_GRAPHS_MAX_N: usize = 9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("suite {suite} is capped at n = {cap}, got {n}")]
    Cap { suite: &'static str, n: usize, cap: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub graph6: String,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalWitness {
    pub graph6: String,
    pub rho: f64,
    pub role: String,
    /// Distance from the bound, where the suite tracks one.
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub counters: BTreeMap<String, usize>,
    pub finding_count: usize,
    pub findings: Vec<Finding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Universe {
    pub family: String,
    pub n: Vec<usize>,
    pub filters: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub suite: String,
    pub universe: Universe,
    pub instances: usize,
    pub violation_count: usize,
    pub violations: Vec<Finding>,
    pub witnesses: Vec<ExtremalWitness>,
    pub sections: Vec<Section>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn counter(&self, section: &str, counter: &str) -> usize {
        self.section(section)
            .and_then(|s| s.counters.get(counter).copied())
            .unwrap_or(0)
    }

    /// Combines reports of the same suite over different universes.
    pub fn merge(reports: Vec<VerificationReport>) -> Option<VerificationReport> {
        let mut iter = reports.into_iter();
        let first = iter.next()?;
        let mut tally = Tally::from_report(&first);
        let mut universe = first.universe;
        let mut wall_time = first.wall_time;
        for r in iter {
            tally.absorb(Tally::from_report(&r));
            universe.n.extend(&r.universe.n);
            wall_time += r.wall_time;
        }
        universe.n.sort_unstable();
        universe.n.dedup();
        let mut merged = tally.finish(&first.suite, universe, Instant::now());
        merged.wall_time = wall_time;
        Some(merged)
    }

    /// Summary table: one row per section counter plus the violation count.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("suite,section,counter,value\n");
        out.push_str(&format!("{},,instances,{}\n", self.suite, self.instances));
        out.push_str(&format!("{},,violations,{}\n", self.suite, self.violation_count));
        for s in &self.sections {
            for (k, v) in &s.counters {
                out.push_str(&format!("{},{},{},{}\n", self.suite, s.name, k, v));
            }
        }
        out
    }
}

#[derive(Default)]
struct SectionAcc {
    counters: BTreeMap<String, usize>,
    finding_count: usize,
    findings: Vec<Finding>,
}

/// Accumulates the outcome of a suite; per-graph tallies are merged in
/// stream order.
#[derive(Default)]
struct Tally {
    instances: usize,
    violation_count: usize,
    violations: Vec<Finding>,
    witnesses: Vec<ExtremalWitness>,
    sections: BTreeMap<String, SectionAcc>,
}

fn finding(g6: &str, check: &str, detail: String) -> Finding {
    Finding {
        graph6: g6.to_string(),
        check: check.to_string(),
        detail,
    }
}

impl Tally {
    fn violation(&mut self, g6: &str, check: &str, detail: String) {
        self.violation_count += 1;
        if self.violations.len() < FINDING_CAP {
            self.violations.push(finding(g6, check, detail));
        }
    }

    fn count(&mut self, section: &str, counter: &str) {
        self.add(section, counter, 1);
    }

    fn add(&mut self, section: &str, counter: &str, amount: usize) {
        *self
            .sections
            .entry(section.to_string())
            .or_default()
            .counters
            .entry(counter.to_string())
            .or_default() += amount;
    }

    fn note(&mut self, section: &str, g6: &str, check: &str, detail: String) {
        let s = self.sections.entry(section.to_string()).or_default();
        s.finding_count += 1;
        if s.findings.len() < FINDING_CAP {
            s.findings.push(finding(g6, check, detail));
        }
    }

    fn witness(&mut self, g6: &str, rho: f64, role: &str, slack: Option<f64>) {
        self.witnesses.push(ExtremalWitness {
            graph6: g6.to_string(),
            rho,
            role: role.to_string(),
            slack,
        });
    }

    fn absorb(&mut self, other: Tally) {
        self.instances += other.instances;
        self.violation_count += other.violation_count;
        let room = FINDING_CAP - self.violations.len();
        self.violations.extend(other.violations.into_iter().take(room));
        self.witnesses.extend(other.witnesses);
        for (name, acc) in other.sections {
            let s = self.sections.entry(name).or_default();
            for (k, v) in acc.counters {
                *s.counters.entry(k).or_default() += v;
            }
            s.finding_count += acc.finding_count;
            let room = FINDING_CAP - s.findings.len();
            s.findings.extend(acc.findings.into_iter().take(room));
        }
    }

    fn from_report(r: &VerificationReport) -> Tally {
        Tally {
            instances: r.instances,
            violation_count: r.violation_count,
            violations: r.violations.clone(),
            witnesses: r.witnesses.clone(),
            sections: r
                .sections
                .iter()
                .map(|s| {
                    (
                        s.name.clone(),
                        SectionAcc {
                            counters: s.counters.clone(),
                            finding_count: s.finding_count,
                            findings: s.findings.clone(),
                        },
                    )
                })
                .collect(),
        }
    }

    fn finish(mut self, suite: &str, universe: Universe, start: Instant) -> VerificationReport {
        self.violations.sort();
        self.witnesses
            .sort_by(|a, b| (&a.role, &a.graph6).cmp(&(&b.role, &b.graph6)));
        let sections = self
            .sections
            .into_iter()
            .map(|(name, mut acc)| {
                acc.findings.sort();
                Section {
                    name,
                    counters: acc.counters,
                    finding_count: acc.finding_count,
                    findings: acc.findings,
                }
            })
            .collect();
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            universe,
            instances: self.instances,
            violation_count: self.violation_count,
            violations: self.violations,
            witnesses: self.witnesses,
            sections,
            wall_time: start.elapsed(),
        }
    }
}

/// Runs `check` over the stream in parallel chunks, merging in stream order.
fn scan<I, F>(stream: I, check: F) -> Tally
where
    I: Iterator<Item = Graph>,
    F: Fn(&Graph) -> Tally + Sync,
{
    let mut total = Tally::default();
    let mut stream = stream.peekable();
    while stream.peek().is_some() {
        let chunk: Vec<Graph> = stream.by_ref().take(CHUNK).collect();
        let parts: Vec<Tally> = chunk.par_iter().map(&check).collect();
        for part in parts {
            total.absorb(part);
        }
    }
    total
}

fn cap(suite: &'static str, n: usize, max: usize) -> Result<(), VerifyError> {
    if n > max {
        Err(VerifyError::Cap { suite, n, cap: max })
    } else {
        Ok(())
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

// ---------------------------------------------------------------------------
// Distance-hereditary lower bound

/// Whether `count` pairwise edge-disjoint a,b-paths of at most `max_len`
/// edges exist, by exhaustive search.
pub fn short_edge_disjoint_paths_exist(g: &Graph, a: Vertex, b: Vertex, count: usize, max_len: usize) -> bool {
    let n = g.n();
    let mut index = vec![usize::MAX; n * n];
    for (i, (u, v)) in g.edges().enumerate() {
        index[u * n + v] = i;
        index[v * n + u] = i;
    }
    assert!(g.m() <= 128, "edge masks hold at most 128 edges");
    let mut paths: Vec<u128> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn walk(
        g: &Graph,
        index: &[usize],
        at: Vertex,
        b: Vertex,
        left: usize,
        visited: u64,
        edges: u128,
        out: &mut Vec<u128>,
    ) {
        if at == b {
            out.push(edges);
            return;
        }
        if left == 0 {
            return;
        }
        for w in g.neighbors(at) {
            if visited >> w & 1 == 0 {
                let e = index[at * g.n() + w];
                walk(g, index, w, b, left - 1, visited | 1 << w, edges | 1 << e, out);
            }
        }
    }
    walk(g, &index, a, b, max_len, 1 << a, 0, &mut paths);
    paths.sort_by_key(|p| p.count_ones());
    fn choose(paths: &[u128], from: usize, used: u128, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        (from..paths.len()).any(|i| paths[i] & used == 0 && choose(paths, i + 1, used | paths[i], need - 1))
    }
    choose(&paths, 0, 0, count)
}

fn check_dh_graph(g: &Graph) -> Tally {
    let mut t = Tally {
        instances: 1,
        ..Tally::default()
    };
    let g6 = g.to_string();
    let p = graph_params(g).expect("enumerated graphs are connected");
    let data = spectral_radius(g).expect("enumerated graphs are connected");
    let gap = p.delta_max as f64 - data.rho;
    let dh = dh_bound(&p).expect("nonregular");
    if gap < dh - BOUND_TOL {
        t.violation(&g6, "dh_bound", format!("gap {} < bound {}", fmt(gap), fmt(dh)));
    }

    let v2 = cioba_bound_v2(&p).expect("nonregular");
    let condition = dh_dominance_condition(&p);
    t.count("dominance", if condition { "condition_holds" } else { "condition_fails" });
    match (condition, dh >= v2) {
        (true, true) => t.count("dominance", "condition_holds_dh_ge_v2"),
        (true, false) => t.violation(
            &g6,
            "dominance_condition",
            format!("dh {} < 1/(Dn) {} although the condition holds", fmt(dh), fmt(v2)),
        ),
        (false, true) => t.count("dominance", "condition_fails_dh_ge_v2"),
        (false, false) => t.count("dominance", "condition_fails_dh_lt_v2"),
    }

    let unscaled = dh_bound_unscaled(&p).expect("nonregular");
    if gap >= unscaled - BOUND_TOL {
        t.count("unscaled_form", "holds");
    } else {
        t.count("unscaled_form", "fails");
        t.note(
            "unscaled_form",
            &g6,
            "dh_unscaled",
            format!("gap {} < unscaled {}", fmt(gap), fmt(unscaled)),
        );
    }

    let quad = quadratic_min_check(&p, data.x_max()).expect("nonregular");
    if !quad.holds() {
        t.violation(
            &g6,
            "quadratic_minimum",
            format!("f(x_hat) {} != {}", fmt(quad.value), fmt(quad.closed_form)),
        );
    }

    let (a, b) = (data.argmin(), data.argmax());
    let k = p.edge_connectivity;
    let flow_paths = edge_disjoint_paths(g, a, b).expect("argmin and argmax differ on nonregular graphs");
    let longest = flow_paths.iter().map(|q| q.len() - 1).max().unwrap_or(0);
    if flow_paths.len() >= k && flow_paths.iter().take(k).all(|q| q.len() - 1 <= p.diameter) {
        t.count("path_premise", "flow_paths_within_diameter");
    } else {
        t.count("path_premise", "flow_paths_exceed_diameter");
    }
    if short_edge_disjoint_paths_exist(g, a, b, k, p.diameter) {
        t.count("path_premise", "holds");
    } else {
        t.count("path_premise", "fails");
        t.note(
            "path_premise",
            &g6,
            "short_paths",
            format!("no {k} edge-disjoint {a},{b}-paths of length <= {}; longest flow path {longest}", p.diameter),
        );
    }
    t.witness(&g6, data.rho, "tightest", Some(gap - dh));
    t
}

/// Every connected nonregular distance-hereditary graph on `2..=n_max`
/// vertices: `Delta - rho >= dh_bound`, the dominance condition, the
/// quadratic minimum, and (as a separate section) the short-path premise.
pub fn verify_dh_lower_bound(n_max: usize) -> Result<VerificationReport, VerifyError> {
    cap("dh-lower-bound", n_max, DH_MAX_N)?;
    let start = Instant::now();
    let mut total = Tally::default();
    let ns: Vec<usize> = (2..=n_max).collect();
    for &n in &ns {
        let stream = enumerate_family(n, Family::DistanceHereditary)?.filter(|g| !g.is_regular());
        let mut part = scan(stream, check_dh_graph);
        // Keep only the tightest instance per n.
        let tightest = part
            .witnesses
            .drain(..)
            .min_by(|a, b| a.slack.unwrap().total_cmp(&b.slack.unwrap()).then(a.graph6.cmp(&b.graph6)));
        part.witnesses.extend(tightest);
        total.absorb(part);
    }
    Ok(total.finish(
        "dh-lower-bound",
        Universe {
            family: Family::DistanceHereditary.to_string(),
            n: ns,
            filters: vec!["connected".into(), "nonregular".into()],
        },
        start,
    ))
}

// ---------------------------------------------------------------------------
// Extremal characterizations

struct Scored {
    graph6: String,
    rho: f64,
    is_extremal: bool,
}

/// Shared two-sided equality analysis: the bound must hold, equality must
/// occur exactly at the extremal graph, and the extremal graph must be in
/// the universe.
fn extremal_analysis(t: &mut Tally, scored: &[Scored], bound: f64, extremal_g6: &str, label: &str) {
    let mut found = false;
    for s in scored {
        if s.rho > bound + EQUALITY_TOL {
            t.violation(&s.graph6, "bound", format!("rho {} > bound {}", fmt(s.rho), fmt(bound)));
        }
        let tight = (s.rho - bound).abs() < EQUALITY_TOL;
        match (tight, s.is_extremal) {
            (true, false) => t.violation(
                &s.graph6,
                "equality_not_extremal",
                format!("rho {} meets the bound but is not {label}", fmt(s.rho)),
            ),
            (false, true) => t.violation(
                &s.graph6,
                "extremal_not_tight",
                format!("{label} has rho {} != bound {}", fmt(s.rho), fmt(bound)),
            ),
            _ => {}
        }
        found |= s.is_extremal;
    }
    if !scored.is_empty() && !found {
        t.violation(extremal_g6, "extremal_missing", format!("{label} not in the universe"));
    }
    if let Some(best) = scored.iter().max_by(|a, b| a.rho.total_cmp(&b.rho)) {
        let ties = scored.iter().filter(|s| (s.rho - best.rho).abs() < EQUALITY_TOL).count();
        if ties > 1 {
            t.violation(&best.graph6, "maximizer_not_unique", format!("{ties} graphs attain rho {}", fmt(best.rho)));
        }
        t.witness(&best.graph6, best.rho, "maximizer", Some(bound - best.rho));
    }
}

/// Every k-tree on `n` vertices: `rho <= treewidth_bound(n, k)` with
/// equality exactly at `S_{k,n-k}`.
pub fn verify_treewidth_extremal(n: usize, k: usize) -> Result<VerificationReport, VerifyError> {
    let family = Family::KTree(k);
    cap("treewidth-extremal", n, family.cap())?;
    let start = Instant::now();
    let universe = Universe {
        family: family.to_string(),
        n: vec![n],
        filters: Vec::new(),
    };
    let mut t = Tally::default();
    if k == 0 || n < k {
        t.count("universe", "vacuous");
        return Ok(t.finish("treewidth-extremal", universe, start));
    }
    let extremal = s_knk(n, k)?;
    let key = canonical_key(&extremal);
    let graphs: Vec<Graph> = enumerate_family(n, family)?.collect();
    let scored: Vec<Scored> = graphs
        .par_iter()
        .map(|g| Scored {
            graph6: g.to_string(),
            rho: spectral_radius(g).expect("connected").rho,
            is_extremal: canonical_key(g) == key,
        })
        .collect();
    t.instances = scored.len();
    let bound = treewidth_bound(n, k).expect("1 <= k <= n");
    extremal_analysis(&mut t, &scored, bound, &extremal.to_string(), "S_(k,n-k)");
    Ok(t.finish("treewidth-extremal", universe, start))
}

/// Any two distinct leaf blocks of `G - (leaf-block simplicial vertices)`
/// share exactly one vertex.
fn leaf_blocks_of_h_meet(g: &Graph) -> bool {
    let Ok(d) = decompose_blocks(g) else { return true };
    let h = g.remove_vertices(&d.leaf_simplicials).graph;
    if h.n() < 2 {
        return true;
    }
    let hd = decompose_blocks(&h).expect("H of a connected block graph is connected");
    let leaves: Vec<&Vec<Vertex>> = hd.leaf_blocks.iter().map(|&b| &hd.blocks[b]).collect();
    leaves.iter().enumerate().all(|(i, a)| {
        leaves[i + 1..]
            .iter()
            .all(|b| a.iter().filter(|v| b.binary_search(v).is_ok()).count() == 1)
    })
}

/// Every connected block graph on `n` vertices with independence number
/// `alpha`: `rho <= rho(pineapple(n, alpha))`, with equality exactly at the
/// pineapple, and leaf blocks of H meeting pairwise at every maximizer.
pub fn verify_block_extremal(n: usize, alpha: usize) -> Result<VerificationReport, VerifyError> {
    cap("block-extremal", n, BLOCK_MAX_N)?;
    let start = Instant::now();
    let universe = Universe {
        family: Family::Block.to_string(),
        n: vec![n],
        filters: vec![format!("alpha = {alpha}")],
    };
    let mut t = Tally::default();
    let Ok(extremal) = pineapple(n, alpha) else {
        t.count("universe", "vacuous");
        return Ok(t.finish("block-extremal", universe, start));
    };
    let extremal_rho = spectral_radius(&extremal).expect("pineapples are connected").rho;
    if alpha >= 2 && alpha + 2 <= n {
        let cubic = pineapple_rho_exact(n, alpha).expect("range checked");
        if (cubic - extremal_rho).abs() > EQUALITY_TOL {
            t.violation(
                &extremal.to_string(),
                "cubic_root",
                format!("cubic {} != eigensolver {}", fmt(cubic), fmt(extremal_rho)),
            );
        }
    }
    let key = canonical_key(&extremal);
    let graphs: Vec<Graph> = enumerate_family(n, Family::Block)?
        .filter(|g| independence_number_blockgraph(g).ok() == Some(alpha))
        .collect();
    let scored: Vec<Scored> = graphs
        .par_iter()
        .map(|g| Scored {
            graph6: g.to_string(),
            rho: spectral_radius(g).expect("connected").rho,
            is_extremal: canonical_key(g) == key,
        })
        .collect();
    t.instances = scored.len();
    if scored.is_empty() {
        t.count("universe", "vacuous");
    }
    extremal_analysis(&mut t, &scored, extremal_rho, &extremal.to_string(), "the pineapple");
    let top = scored.iter().map(|s| s.rho).fold(f64::NEG_INFINITY, f64::max);
    for (g, s) in graphs.iter().zip(&scored) {
        if (s.rho - top).abs() < EQUALITY_TOL {
            if leaf_blocks_of_h_meet(g) {
                t.count("maximizer_leaf_blocks", "meet");
            } else {
                t.violation(&s.graph6, "maximizer_leaf_blocks", "two leaf blocks of H are disjoint".into());
            }
        }
    }
    Ok(t.finish("block-extremal", universe, start))
}

// ---------------------------------------------------------------------------
// Independence machinery

fn alpha_of(g: &Graph) -> usize {
    if g.n() == 0 {
        0
    } else {
        independence_number_bruteforce(g).expect("small graphs")
    }
}

fn check_machinery_graph(g: &Graph) -> Tally {
    let mut t = Tally {
        instances: 1,
        ..Tally::default()
    };
    let g6 = g.to_string();
    let brute = alpha_of(g);
    let low = independence_number_blockgraph(g).expect("block graph");
    let high = independence_number_blockgraph_with(g, LeafChoice::HighestCut).expect("block graph");
    if low != brute {
        t.violation(&g6, "leaf_block_recursion", format!("recursion {low} != brute force {brute}"));
    }
    if high != low {
        t.violation(&g6, "recursion_choice", format!("lowest-cut {low} != highest-cut {high}"));
    }

    let d = decompose_blocks(g).expect("connected");
    let sets = maximum_independent_sets(g).expect("small graphs");
    let simplicial: Vec<bool> = (0..g.n()).map(|v| d.simplicial_vertices.binary_search(&v).is_ok()).collect();
    let mask_of = |vs: &[Vertex]| vs.iter().fold(0u64, |m, &v| m | 1 << v);
    for block in d.blocks.iter().filter(|b| b.iter().any(|&v| simplicial[v])) {
        let bm = mask_of(block);
        t.count("simplicial_blocks", "checked");
        if let Some(s) = sets.iter().find(|&&s| (s & bm).count_ones() != 1) {
            t.violation(
                &g6,
                "simplicial_block_meets_once",
                format!("block {block:?} meets S = {:?} in {} vertices", bits(*s), (s & bm).count_ones()),
            );
        }
    }
    let leaf_masks: Vec<(u64, u64)> = d
        .leaf_blocks
        .iter()
        .map(|&b| {
            let block = &d.blocks[b];
            let simp: Vec<Vertex> = block.iter().copied().filter(|&v| simplicial[v]).collect();
            (mask_of(block), mask_of(&simp))
        })
        .collect();
    let good = sets
        .iter()
        .any(|&s| leaf_masks.iter().all(|&(bm, sm)| (s & bm).count_ones() == 1 && s & bm & sm != 0));
    if good {
        t.count("leaf_block_choice", "exists");
    } else {
        t.violation(&g6, "leaf_block_choice", "no maximum independent set uses a simplicial vertex of every leaf block".into());
    }

    match leaf_block_ledger(g) {
        Err(ParamError::CompleteGraph) => t.count("ledger", "complete_input"),
        Err(e) => t.violation(&g6, "ledger", e.to_string()),
        Ok(ledger) => {
            if ledger.entries.is_empty() {
                t.count("ledger", "no_blocks_in_h");
            }
            for e in &ledger.entries {
                let Some((removed, offset)) = e.identity() else {
                    t.count("ledger", "out_of_domain");
                    continue;
                };
                let which = if e.has_simplicial { "identity_with_simplicial" } else { "identity_without_simplicial" };
                let got = alpha_of(&g.remove_vertices(&removed).graph) + offset;
                t.count(which, "checked");
                if got != brute {
                    t.violation(
                        &g6,
                        which,
                        format!(
                            "block {:?}: alpha(G - {:?}) + {offset} = {got} != {brute}; leaf blocks at the cut vertex: {}",
                            e.block, removed, e.leaf_count_at_h_cut
                        ),
                    );
                }
                let (kept_removed, kept_offset) = e.identity_keeping_cut_leaves().expect("same domain");
                let kept = alpha_of(&g.remove_vertices(&kept_removed).graph) + kept_offset;
                if kept == brute {
                    t.count("identity_keeping_cut_leaves", "holds");
                } else {
                    t.count("identity_keeping_cut_leaves", "fails");
                    t.note(
                        "identity_keeping_cut_leaves",
                        &g6,
                        which,
                        format!("block {:?}: {kept} != {brute}", e.block),
                    );
                }
            }
        }
    }
    t
}

fn bits(mask: u64) -> Vec<Vertex> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Every connected block graph on `1..=n_max` vertices: the leaf-block
/// recursion against brute force (under both leaf choices), the
/// simplicial-block property of every maximum independent set, the
/// existence of a leaf-block-respecting maximum independent set, and the
/// two ledger identities.
pub fn verify_independence_machinery(n_max: usize) -> Result<VerificationReport, VerifyError> {
    cap("independence-machinery", n_max, MACHINERY_MAX_N)?;
    let start = Instant::now();
    let mut total = Tally::default();
    let ns: Vec<usize> = (1..=n_max).collect();
    for &n in &ns {
        total.absorb(scan(enumerate_family(n, Family::Block)?, check_machinery_graph));
        for alpha in 1..n.max(2) {
            if let Ok(g) = pineapple(n, alpha) {
                let ok = independence_number_blockgraph(&g).ok() == Some(alpha) && alpha_of(&g) == alpha;
                check_pineapple_row(&mut total, &g, alpha, ok);
            }
        }
    }
    Ok(total.finish(
        "independence-machinery",
        Universe {
            family: Family::Block.to_string(),
            n: ns,
            filters: Vec::new(),
        },
        start,
    ))
}

fn check_pineapple_row(t: &mut Tally, g: &Graph, alpha: usize, ok: bool) {
    t.count("pineapple_rows", "checked");
    if !ok {
        t.violation(&g.to_string(), "pineapple_alpha", format!("independence number differs from {alpha}"));
    }
}

// ---------------------------------------------------------------------------
// Pineapple bounds

/// The `(n, alpha)` grid for `2 <= alpha <= n - 2`, `n <= n_max`: cubic root
/// against the eigensolver, elementary lower bound, regime upper bound, and
/// both baseline refinements; then the final bound on every block graph up
/// to `min(n_max, 9)` vertices, cross-checked against the pineapple maxima.
pub fn verify_pineapple_bounds(n_max: usize) -> Result<VerificationReport, VerifyError> {
    cap("pineapple-bounds", n_max, PINEAPPLE_MAX_N)?;
    let start = Instant::now();
    let grid: Vec<(usize, usize)> = (4..=n_max).flat_map(|n| (2..=n - 2).map(move |a| (n, a))).collect();
    let parts: Vec<Tally> = grid.par_iter().map(|&(n, a)| check_pineapple_point(n, a)).collect();
    let mut total = Tally::default();
    for p in parts {
        total.absorb(p);
    }
    let graph_max = n_max.min(PINEAPPLE_GRAPHS_MAX_N);
    for n in 4..=graph_max {
        let mut best: BTreeMap<usize, (f64, String)> = BTreeMap::new();
        let graphs: Vec<Graph> = enumerate_family(n, Family::Block)?.collect();
        let rows: Vec<(String, usize, f64)> = graphs
            .par_iter()
            .map(|g| {
                let alpha = independence_number_blockgraph(g).expect("block graph");
                (g.to_string(), alpha, spectral_radius(g).expect("connected").rho)
            })
            .collect();
        for (g6, alpha, rho) in rows {
            if alpha < 2 || alpha + 2 > n {
                continue;
            }
            total.instances += 1;
            let (_, upper) = pineapple_upper(n, alpha).expect("range checked");
            if rho > upper + BOUND_TOL {
                total.violation(&g6, "final_bound", format!("rho {} > {}", fmt(rho), fmt(upper)));
            }
            let entry = best.entry(alpha).or_insert((f64::NEG_INFINITY, String::new()));
            if rho > entry.0 {
                *entry = (rho, g6);
            }
        }
        for (alpha, (rho, g6)) in best {
            let exact = pineapple_rho_exact(n, alpha).expect("range checked");
            if (rho - exact).abs() < EQUALITY_TOL {
                total.count("maxima_cross_check", "match");
            } else {
                total.violation(
                    &g6,
                    "maxima_cross_check",
                    format!("largest rho {} for alpha = {alpha} differs from the pineapple {}", fmt(rho), fmt(exact)),
                );
            }
        }
    }
    Ok(total.finish(
        "pineapple-bounds",
        Universe {
            family: "pineapple grid; block".into(),
            n: (4..=n_max).collect(),
            filters: vec!["2 <= alpha <= n - 2".into()],
        },
        start,
    ))
}

fn check_pineapple_point(n: usize, alpha: usize) -> Tally {
    let mut t = Tally {
        instances: 1,
        ..Tally::default()
    };
    let g = pineapple(n, alpha).expect("range checked");
    let g6 = g.to_string();
    let exact = pineapple_rho_exact(n, alpha).expect("range checked");
    let eigen = spectral_radius_jacobi(&g).expect("connected").rho;
    if (exact - eigen).abs() > EQUALITY_TOL {
        t.violation(&g6, "cubic_root", format!("cubic {} != eigensolver {}", fmt(exact), fmt(eigen)));
    }
    let lower = pineapple_lower(n, alpha);
    if lower > exact + BOUND_TOL {
        t.violation(&g6, "lower_bound", format!("{} > rho {}", fmt(lower), fmt(exact)));
    }
    let (regime, upper) = pineapple_upper(n, alpha).expect("range checked");
    if upper < exact - BOUND_TOL {
        t.violation(&g6, "regime_bound", format!("{regime:?} bound {} < rho {}", fmt(upper), fmt(exact)));
    }
    t.count("regimes", &format!("{regime:?}").to_lowercase());
    let (dense, sparse) = pineapple_upper_formulas(n, alpha).expect("range checked");
    if (n - alpha) * (n - alpha) == n - 1 {
        t.note(
            "regime_boundary",
            &g6,
            "both_formulas",
            format!("n = {n}, alpha = {alpha}: dense {}, sparse {}, rho {}", fmt(dense), fmt(sparse), fmt(exact)),
        );
    }
    debug_assert_eq!(pineapple_regime(n, alpha), regime);
    let baseline = llt_baseline(n, alpha).expect("range checked");
    match baseline.dense {
        Ok(b) if dense < b => t.count("refinement_dense", "holds"),
        Ok(b) => t.violation(&g6, "refinement_dense", format!("{} >= baseline {}", fmt(dense), fmt(b))),
        Err(_) => t.count("refinement_dense", "outside_domain"),
    }
    match baseline.sparse {
        Ok(b) if sparse < b => t.count("refinement_sparse", "holds"),
        Ok(b) => t.violation(&g6, "refinement_sparse", format!("{} >= baseline {}", fmt(sparse), fmt(b))),
        Err(_) => t.count("refinement_sparse", "outside_domain"),
    }
    let (_, gamma) = beta_gamma(n, alpha);
    if gamma > 0.0 {
        t.count("regimes", "gamma_positive");
    }
    t
}
