//! Edge rewirings that strictly increase the spectral radius of a connected
//! graph: adding an edge, moving neighbours from a vertex with smaller Perron
//! entry to one with larger entry, and its generalization that moves a whole
//! set `W` from one vertex group to another.
//!
//! The Perron data is supplied by the caller and never recomputed here, so
//! one eigensolve can serve many candidate moves.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeSet, Graph, GraphError, Vertex};
use crate::spectra::SpectralData;

/// Perron-sum differences below this are near ties; the move is still made
/// but the plan is marked non-strict.
pub const NEAR_TIE_TOL: f64 = 1e-9;
/// Residual above which supplied Perron data is taken not to belong to the graph.
pub const STALE_RESIDUAL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Precondition {
    VertexOutOfRange { vertex: Vertex },
    RepeatedVertex { vertex: Vertex },
    EmptySet { which: &'static str },
    /// `x_u > x_v` beyond the tie tolerance.
    PerronOrder { u: Vertex, v: Vertex, x_u: f64, x_v: f64 },
    TargetNotNeighbour { target: Vertex },
    TargetAdjacentToReceiver { target: Vertex },
    SourceNotComplete { source: Vertex, w: Vertex },
    SinkNotAnticomplete { sink: Vertex, w: Vertex },
    /// Source sum exceeds sink sum beyond the tie tolerance.
    PerronSums { source_sum: f64, sink_sum: f64 },
    Disconnects,
    StaleSpectralData { residual: f64 },
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precondition::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            Precondition::RepeatedVertex { vertex } => write!(f, "vertex {vertex} used twice"),
            Precondition::EmptySet { which } => write!(f, "{which} is empty"),
            Precondition::PerronOrder { u, v, x_u, x_v } => write!(f, "x_{u} = {x_u} exceeds x_{v} = {x_v}"),
            Precondition::TargetNotNeighbour { target } => write!(f, "target {target} is not a neighbour of u"),
            Precondition::TargetAdjacentToReceiver { target } => write!(f, "target {target} is already a neighbour of v"),
            Precondition::SourceNotComplete { source, w } => write!(f, "source {source} is not adjacent to {w} in W"),
            Precondition::SinkNotAnticomplete { sink, w } => write!(f, "sink {sink} is adjacent to {w} in W"),
            Precondition::PerronSums { source_sum, sink_sum } => {
                write!(f, "source Perron sum {source_sum} exceeds sink sum {sink_sum}")
            }
            Precondition::Disconnects => f.write_str("the result is disconnected"),
            Precondition::StaleSpectralData { residual } => {
                write!(f, "Perron data does not match the graph (residual {residual:e})")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("preconditions violated: {}", .0.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; "))]
    Preconditions(Vec<Precondition>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RewireVariant {
    AddEdge,
    Rowlinson,
    BlockSwap,
}

/// The Perron-vector inequality justifying a move: `sum(x[sources]) <= sum(x[sinks])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub sources: Vec<Vertex>,
    pub sinks: Vec<Vertex>,
    pub w_set: Vec<Vertex>,
    pub source_sum: f64,
    pub sink_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RewirePlan {
    pub variant: RewireVariant,
    pub removed: EdgeSet,
    pub added: EdgeSet,
    pub witness: Option<Witness>,
    /// False when the witness sums are within [`NEAR_TIE_TOL`] of each other.
    pub strict: bool,
}

impl RewirePlan {
    pub fn apply(&self, g: &Graph) -> Result<Graph, GraphError> {
        g.rewired(&self.removed, &self.added)
    }
}

fn fail<T>(violations: Vec<Precondition>) -> Result<T, TransformError> {
    Err(TransformError::Preconditions(violations))
}

fn check_vertices(g: &Graph, groups: &[&[Vertex]], out: &mut Vec<Precondition>) {
    let mut seen = vec![false; g.n()];
    for group in groups {
        for &v in *group {
            if v >= g.n() {
                out.push(Precondition::VertexOutOfRange { vertex: v });
            } else if std::mem::replace(&mut seen[v], true) {
                out.push(Precondition::RepeatedVertex { vertex: v });
            }
        }
    }
}

fn check_data(g: &Graph, data: &SpectralData, out: &mut Vec<Precondition>) {
    if data.x.len() != g.n() {
        out.push(Precondition::StaleSpectralData { residual: f64::INFINITY });
        return;
    }
    let residual = (0..g.n())
        .map(|v| {
            let ax: f64 = g.neighbors(v).map(|w| data.x[w]).sum();
            (ax - data.rho * data.x[v]).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    if residual.is_nan() || residual > STALE_RESIDUAL {
        out.push(Precondition::StaleSpectralData { residual });
    }
}

fn plan_result(g: &Graph, plan: RewirePlan, mut violations: Vec<Precondition>) -> Result<RewirePlan, TransformError> {
    if violations.is_empty() && !plan.apply(g)?.is_connected() {
        violations.push(Precondition::Disconnects);
    }
    if violations.is_empty() {
        Ok(plan)
    } else {
        fail(violations)
    }
}

/// `G + uv`.
pub fn add_edge(g: &Graph, u: Vertex, v: Vertex) -> Result<Graph, TransformError> {
    Ok(g.with_edge(u, v)?)
}

pub fn plan_add_edge(g: &Graph, u: Vertex, v: Vertex) -> Result<RewirePlan, TransformError> {
    g.with_edge(u, v)?;
    Ok(RewirePlan {
        variant: RewireVariant::AddEdge,
        removed: EdgeSet::new(),
        added: EdgeSet::from_pairs([(u, v)])?,
        witness: None,
        strict: true,
    })
}

/// Moves the edges `u t` (`t` in `targets`) to `v t`, given `x_u <= x_v`
/// and `targets` inside `N(u) \ N(v)`.
pub fn plan_rowlinson(
    g: &Graph,
    data: &SpectralData,
    u: Vertex,
    v: Vertex,
    targets: &[Vertex],
) -> Result<RewirePlan, TransformError> {
    let mut violations = Vec::new();
    check_vertices(g, &[&[u, v], targets], &mut violations);
    if !violations.is_empty() {
        return fail(violations);
    }
    check_data(g, data, &mut violations);
    if targets.is_empty() {
        violations.push(Precondition::EmptySet { which: "targets" });
    }
    let (x_u, x_v) = (data.x.get(u).copied().unwrap_or(0.0), data.x.get(v).copied().unwrap_or(0.0));
    if x_u > x_v + NEAR_TIE_TOL {
        violations.push(Precondition::PerronOrder { u, v, x_u, x_v });
    }
    for &t in targets {
        if !g.has_edge(u, t) {
            violations.push(Precondition::TargetNotNeighbour { target: t });
        }
        if g.has_edge(v, t) {
            violations.push(Precondition::TargetAdjacentToReceiver { target: t });
        }
    }
    if !violations.is_empty() {
        return fail(violations);
    }
    let plan = RewirePlan {
        variant: RewireVariant::Rowlinson,
        removed: EdgeSet::from_pairs(targets.iter().map(|&t| (u, t)))?,
        added: EdgeSet::from_pairs(targets.iter().map(|&t| (v, t)))?,
        witness: Some(Witness {
            sources: vec![u],
            sinks: vec![v],
            w_set: targets.to_vec(),
            source_sum: x_u,
            sink_sum: x_v,
        }),
        strict: (x_v - x_u).abs() >= NEAR_TIE_TOL,
    };
    plan_result(g, plan, violations)
}

pub fn rowlinson_move(
    g: &Graph,
    data: &SpectralData,
    u: Vertex,
    v: Vertex,
    targets: &[Vertex],
) -> Result<Graph, TransformError> {
    Ok(plan_rowlinson(g, data, u, v, targets)?.apply(g)?)
}

/// Removes every edge between `W` and `sources` and adds every edge between
/// `W` and `sinks`, given `sources` complete to `W`, `sinks` anticomplete to
/// `W`, and the source Perron sum at most the sink Perron sum.
pub fn plan_block_swap(
    g: &Graph,
    data: &SpectralData,
    sources: &[Vertex],
    sinks: &[Vertex],
    w_set: &[Vertex],
) -> Result<RewirePlan, TransformError> {
    let mut violations = Vec::new();
    check_vertices(g, &[sources, sinks, w_set], &mut violations);
    if !violations.is_empty() {
        return fail(violations);
    }
    check_data(g, data, &mut violations);
    for (which, set) in [("sources", sources), ("sinks", sinks), ("W", w_set)] {
        if set.is_empty() {
            violations.push(Precondition::EmptySet { which });
        }
    }
    for &w in w_set {
        for &s in sources {
            if !g.has_edge(s, w) {
                violations.push(Precondition::SourceNotComplete { source: s, w });
            }
        }
        for &t in sinks {
            if g.has_edge(t, w) {
                violations.push(Precondition::SinkNotAnticomplete { sink: t, w });
            }
        }
    }
    let sum = |set: &[Vertex]| set.iter().map(|&v| data.x.get(v).copied().unwrap_or(0.0)).sum::<f64>();
    let (source_sum, sink_sum) = (sum(sources), sum(sinks));
    if source_sum > sink_sum + NEAR_TIE_TOL {
        violations.push(Precondition::PerronSums { source_sum, sink_sum });
    }
    if !violations.is_empty() {
        return fail(violations);
    }
    let cross = |set: &[Vertex]| -> Vec<(Vertex, Vertex)> {
        w_set.iter().flat_map(|&w| set.iter().map(move |&s| (w, s))).collect()
    };
    let plan = RewirePlan {
        variant: RewireVariant::BlockSwap,
        removed: EdgeSet::from_pairs(cross(sources))?,
        added: EdgeSet::from_pairs(cross(sinks))?,
        witness: Some(Witness {
            sources: sources.to_vec(),
            sinks: sinks.to_vec(),
            w_set: w_set.to_vec(),
            source_sum,
            sink_sum,
        }),
        strict: (sink_sum - source_sum).abs() >= NEAR_TIE_TOL,
    };
    plan_result(g, plan, violations)
}

pub fn block_swap(
    g: &Graph,
    data: &SpectralData,
    sources: &[Vertex],
    sinks: &[Vertex],
    w_set: &[Vertex],
) -> Result<Graph, TransformError> {
    Ok(plan_block_swap(g, data, sources, sinks, w_set)?.apply(g)?)
}
