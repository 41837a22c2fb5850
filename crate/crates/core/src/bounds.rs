//! Closed-form spectral bounds evaluated from graph parameters, and the
//! per-graph report comparing them with the actual spectral radius.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{recognize_block_graph, recognize_distance_hereditary};
use crate::graph::Graph;
use crate::params::{graph_params, treewidth_exact, GraphParams, ParamError, TREEWIDTH_MAX_N};
use crate::spectra::{pineapple_rho_exact, spectral_radius, SpectralError};

/// Absolute tolerance for deciding whether a bound is satisfied.
pub const BOUND_TOL: f64 = 1e-9;
/// Tolerance for the stationary-value identity of the quadratic.
pub const QUADRATIC_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("bound requires a nonregular graph")]
    Regular,
    #[error("bound requires a connected graph on at least two vertices")]
    Degenerate,
    #[error("tree-width bound needs 1 <= k <= n, got n = {n}, k = {k}")]
    TreewidthRange { n: usize, k: usize },
    #[error("pineapple bounds need 2 <= alpha <= n - 2, got n = {n}, alpha = {alpha}")]
    PineappleRange { n: usize, alpha: usize },
    #[error("first baseline needs beta^2 > n, got beta = {beta}, n = {n}")]
    BaselineBeta { n: usize, beta: usize },
    #[error("second baseline needs gamma > 0, got gamma = {gamma}")]
    BaselineGamma { gamma: f64 },
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// `(n*Delta - 2m, D, kappa')` as reals, after checking the common
/// preconditions of the degree-gap bounds.
fn gap_inputs(p: &GraphParams) -> Result<(f64, f64, f64), BoundError> {
    if p.n < 2 || p.diameter == 0 || p.edge_connectivity == 0 {
        return Err(BoundError::Degenerate);
    }
    if p.delta_max == p.delta_min {
        return Err(BoundError::Regular);
    }
    Ok((p.degree_deficit() as f64, p.diameter as f64, p.edge_connectivity as f64))
}

/// `(n*Delta - 2m) / (n (D (n*Delta - 2m) + 1))`, a lower bound on `Delta - rho`.
pub fn cioba_bound_v1(p: &GraphParams) -> Result<f64, BoundError> {
    let (def, d, _) = gap_inputs(p)?;
    Ok(def / (p.n as f64 * (d * def + 1.0)))
}

/// `1 / (D n)`, a lower bound on `Delta - rho`.
pub fn cioba_bound_v2(p: &GraphParams) -> Result<f64, BoundError> {
    let (_, d, _) = gap_inputs(p)?;
    Ok(1.0 / (d * p.n as f64))
}

/// `(n*Delta - 2m) kappa' / (n (D (n*Delta - 2m) + kappa'))`, the lower bound
/// on `Delta - rho` for nonregular distance-hereditary graphs.
pub fn dh_bound(p: &GraphParams) -> Result<f64, BoundError> {
    Ok(dh_bound_unscaled(p)? / p.n as f64)
}

/// The same expression without the factor `1/n` in the denominator.
pub fn dh_bound_unscaled(p: &GraphParams) -> Result<f64, BoundError> {
    let (def, d, k) = gap_inputs(p)?;
    Ok(def * k / (d * def + k))
}

/// Whether `D (n*Delta - 2m) > 2` and `kappa' > 2`, the condition under
/// which the distance-hereditary bound beats `1/(Dn)`.
pub fn dh_dominance_condition(p: &GraphParams) -> bool {
    p.diameter * p.degree_deficit() > 2 && p.edge_connectivity > 2
}

/// `(k - 1 + sqrt(4kn - (k+1)(3k-1))) / 2`, the upper bound on `rho` for
/// graphs of tree-width `k`.
pub fn treewidth_bound(n: usize, k: usize) -> Result<f64, BoundError> {
    if k == 0 || k > n {
        return Err(BoundError::TreewidthRange { n, k });
    }
    let (n, k) = (n as i128, k as i128);
    let radicand = 4 * k * n - (k + 1) * (3 * k - 1);
    Ok(((k - 1) as f64 + (radicand as f64).sqrt()) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `alpha <= n - sqrt(n - 1)`
    Dense,
    /// `alpha > n - sqrt(n - 1)`
    Sparse,
}

fn check_pineapple_range(n: usize, alpha: usize) -> Result<(), BoundError> {
    if alpha < 2 || alpha + 2 > n {
        return Err(BoundError::PineappleRange { n, alpha });
    }
    Ok(())
}

/// `beta = n - alpha + 1` and `gamma = 1 - (n - alpha - 1)/sqrt(n - 1)`.
pub fn beta_gamma(n: usize, alpha: usize) -> (usize, f64) {
    let beta = n + 1 - alpha;
    let gamma = 1.0 - (n - alpha - 1) as f64 / ((n - 1) as f64).sqrt();
    (beta, gamma)
}

pub fn pineapple_regime(n: usize, alpha: usize) -> Regime {
    // alpha <= n - sqrt(n-1)  <=>  (n - alpha)^2 >= n - 1
    if (n - alpha) * (n - alpha) >= n - 1 {
        Regime::Dense
    } else {
        Regime::Sparse
    }
}

/// Both upper-bound formulas for the pineapple spectral radius, regardless
/// of which regime `(n, alpha)` falls in.
pub fn pineapple_upper_formulas(n: usize, alpha: usize) -> Result<(f64, f64), BoundError> {
    check_pineapple_range(n, alpha)?;
    let (beta, gamma) = beta_gamma(n, alpha);
    let (nf, af, bf) = (n as f64, alpha as f64, beta as f64);
    let shift = bf * bf - nf;
    let dense = bf - 1.0 + ((shift * shift + 4.0 * (nf - bf) * (2.0 * bf - 1.0)).sqrt() - shift) / (4.0 * bf - 2.0);
    let root = ((af - 1.0) * gamma * gamma + (nf - af) * (2.0 - gamma)).sqrt();
    let sparse = (2.0 * (nf - 1.0).sqrt() + root) / (2.0 + gamma);
    Ok((dense, sparse))
}

/// The regime-appropriate upper bound on the pineapple spectral radius.
pub fn pineapple_upper(n: usize, alpha: usize) -> Result<(Regime, f64), BoundError> {
    let (dense, sparse) = pineapple_upper_formulas(n, alpha)?;
    Ok(match pineapple_regime(n, alpha) {
        Regime::Dense => (Regime::Dense, dense),
        Regime::Sparse => (Regime::Sparse, sparse),
    })
}

/// `max(n - alpha, sqrt(n - 1))`, the elementary lower bound on the pineapple
/// spectral radius.
pub fn pineapple_lower(n: usize, alpha: usize) -> f64 {
    ((n - alpha) as f64).max(((n - 1) as f64).sqrt())
}

/// The two earlier upper bounds the pineapple formulas refine.
#[derive(Debug, Clone, PartialEq)]
pub struct LltBaseline {
    /// `beta - 1 + (n - beta)/(beta^2 - n)`, defined when `beta^2 > n`.
    pub dense: Result<f64, BoundError>,
    /// `sqrt(n-1) + (n - alpha)(1 - gamma)/(2 sqrt(n-1) gamma)`, defined when `gamma > 0`.
    pub sparse: Result<f64, BoundError>,
}

pub fn llt_baseline(n: usize, alpha: usize) -> Result<LltBaseline, BoundError> {
    check_pineapple_range(n, alpha)?;
    let (beta, gamma) = beta_gamma(n, alpha);
    let dense = if beta * beta > n {
        Ok(beta as f64 - 1.0 + (n - beta) as f64 / (beta * beta - n) as f64)
    } else {
        Err(BoundError::BaselineBeta { n, beta })
    };
    let sparse = if gamma > 0.0 {
        let s = ((n - 1) as f64).sqrt();
        Ok(s + (n - alpha) as f64 * (1.0 - gamma) / (2.0 * s * gamma))
    } else {
        Err(BoundError::BaselineGamma { gamma })
    };
    Ok(LltBaseline { dense, sparse })
}

/// Evaluation of `f(x) = (n*Delta - 2m) x^2 + (kappa'/D)(x_max - x)^2` at its
/// minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticCheck {
    pub x_hat: f64,
    pub value: f64,
    /// `(n*Delta - 2m) kappa' x_max^2 / (D (n*Delta - 2m) + kappa')`
    pub closed_form: f64,
}

impl QuadraticCheck {
    pub fn holds(&self) -> bool {
        (self.value - self.closed_form).abs() <= QUADRATIC_TOL * self.closed_form.abs().max(1.0)
    }
}

pub fn quadratic_min_check(p: &GraphParams, x_max: f64) -> Result<QuadraticCheck, BoundError> {
    let (def, d, k) = gap_inputs(p)?;
    let x_hat = k * x_max / (d * def + k);
    let value = def * x_hat * x_hat + k / d * (x_max - x_hat).powi(2);
    let closed_form = def * k * x_max * x_max / (d * def + k);
    Ok(QuadraticCheck {
        x_hat,
        value,
        closed_form,
    })
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Lower bound on `Delta - rho`.
    GapLower,
    /// Upper bound on `rho`.
    RhoUpper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: &'static str,
    pub kind: BoundKind,
    pub value: f64,
    /// Whether the graph belongs to the class the bound is claimed for
    /// (`None` when the class is unknown, e.g. for parameter-only input).
    pub applies: Option<bool>,
    /// `None` without a spectral radius to compare against.
    pub satisfied: Option<bool>,
    /// `gap - value` for gap bounds, `value - rho` for radius bounds.
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dominance {
    pub left: &'static str,
    pub right: &'static str,
    /// `left - right`, unrounded.
    pub difference: f64,
}

/// Everything a bound report needs. Graph input fills every field; JSON
/// parameter input may leave the optional ones out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    #[serde(default)]
    pub graph6: Option<String>,
    #[serde(flatten)]
    pub params: GraphParams,
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default)]
    pub treewidth: Option<usize>,
    #[serde(default)]
    pub distance_hereditary: Option<bool>,
    #[serde(default)]
    pub block_graph: Option<bool>,
}

impl BoundInputs {
    pub fn from_graph(g: &Graph) -> Result<BoundInputs, BoundError> {
        let params = graph_params(g)?;
        let rho = spectral_radius(g)?.rho;
        let treewidth = if g.n() <= TREEWIDTH_MAX_N { Some(treewidth_exact(g)?) } else { None };
        let distance_hereditary = Some(recognize_distance_hereditary(g).map_err(|_| BoundError::Degenerate)?.is_some());
        let block_graph = Some(recognize_block_graph(g).map_err(|_| BoundError::Degenerate)?);
        Ok(BoundInputs {
            graph6: Some(g.to_string()),
            params,
            rho: Some(rho),
            treewidth,
            distance_hereditary,
            block_graph,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub graph6: Option<String>,
    pub params: GraphParams,
    pub rho: Option<f64>,
    /// `Delta - rho`
    pub gap: Option<f64>,
    pub treewidth: Option<usize>,
    pub regime: Option<Regime>,
    pub bounds: Vec<BoundEntry>,
    pub dominance: Vec<Dominance>,
    /// `D (n*Delta - 2m) > 2` and `kappa' > 2`.
    pub dh_dominance_condition: bool,
}

pub const CSV_HEADER: &str = "graph6,n,m,max_degree,diameter,edge_connectivity,independence_number,rho,gap,\
cioba_v1,cioba_v2,dh,dh_unscaled,treewidth_bound,pineapple_rho,pineapple_upper";

const CSV_BOUNDS: [&str; 7] = [
    "cioba_v1",
    "cioba_v2",
    "dh",
    "dh_unscaled",
    "treewidth_bound",
    "pineapple_rho",
    "pineapple_upper",
];

impl BoundReport {
    pub fn for_graph(g: &Graph) -> Result<BoundReport, BoundError> {
        Ok(BoundReport::evaluate(&BoundInputs::from_graph(g)?))
    }

    /// Evaluates every bound whose preconditions hold; bounds that do not
    /// apply to these parameters are simply absent.
    pub fn evaluate(inputs: &BoundInputs) -> BoundReport {
        let p = &inputs.params;
        let gap = inputs.rho.map(|r| p.delta_max as f64 - r);
        let mut bounds = Vec::new();
        let mut push = |name, kind, value: f64, applies: Option<bool>| {
            let slack = match kind {
                BoundKind::GapLower => gap.map(|g| g - value),
                BoundKind::RhoUpper => inputs.rho.map(|r| value - r),
            };
            bounds.push(BoundEntry {
                name,
                kind,
                value,
                applies,
                satisfied: slack.map(|s| s >= -BOUND_TOL),
                slack,
            });
        };
        if let Ok(v) = cioba_bound_v1(p) {
            push("cioba_v1", BoundKind::GapLower, v, Some(true));
        }
        if let Ok(v) = cioba_bound_v2(p) {
            push("cioba_v2", BoundKind::GapLower, v, Some(true));
        }
        if let (Ok(scaled), Ok(unscaled)) = (dh_bound(p), dh_bound_unscaled(p)) {
            push("dh", BoundKind::GapLower, scaled, inputs.distance_hereditary);
            push("dh_unscaled", BoundKind::GapLower, unscaled, inputs.distance_hereditary);
        }
        if let Some(Ok(v)) = inputs.treewidth.map(|k| treewidth_bound(p.n, k)) {
            push("treewidth_bound", BoundKind::RhoUpper, v, Some(true));
        }
        let alpha = p.independence_number;
        let pineapple_applies = inputs.block_graph;
        if (alpha >= 1 && alpha < p.n) || p.n == 1 {
            let exact = if alpha >= 2 && alpha + 2 <= p.n {
                pineapple_rho_exact(p.n, alpha).ok()
            } else if alpha == 1 {
                Some((p.n - 1) as f64)
            } else {
                // alpha = n - 1: the star.
                Some(((p.n - 1) as f64).sqrt())
            };
            if let Some(v) = exact {
                push("pineapple_rho", BoundKind::RhoUpper, v, pineapple_applies);
            }
        }
        let mut regime = None;
        if let Ok((r, v)) = pineapple_upper(p.n, alpha) {
            regime = Some(r);
            push("pineapple_upper", BoundKind::RhoUpper, v, pineapple_applies);
        }
        let mut dominance = Vec::new();
        for (i, a) in bounds.iter().enumerate() {
            for b in &bounds[i + 1..] {
                if a.kind == b.kind {
                    dominance.push(Dominance {
                        left: a.name,
                        right: b.name,
                        difference: a.value - b.value,
                    });
                }
            }
        }
        BoundReport {
            graph6: inputs.graph6.clone(),
            params: p.clone(),
            rho: inputs.rho,
            gap,
            treewidth: inputs.treewidth,
            regime,
            bounds,
            dominance,
            dh_dominance_condition: dh_dominance_condition(p),
        }
    }

    pub fn bound(&self, name: &str) -> Option<&BoundEntry> {
        self.bounds.iter().find(|b| b.name == name)
    }

    /// Bounds claimed for this graph's class that fail.
    pub fn violations(&self) -> Vec<&BoundEntry> {
        self.bounds
            .iter()
            .filter(|b| b.applies == Some(true) && b.satisfied == Some(false) && b.name != "dh_unscaled")
            .collect()
    }

    /// One CSV row in the column order of [`CSV_HEADER`]; missing values are
    /// empty cells.
    pub fn csv_row(&self) -> String {
        let p = &self.params;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.12}")).unwrap_or_default();
        let mut cells = vec![
            self.graph6.clone().unwrap_or_default(),
            p.n.to_string(),
            p.m.to_string(),
            p.delta_max.to_string(),
            p.diameter.to_string(),
            p.edge_connectivity.to_string(),
            p.independence_number.to_string(),
            opt(self.rho),
            opt(self.gap),
        ];
        for name in CSV_BOUNDS {
            cells.push(opt(self.bound(name).map(|b| b.value)));
        }
        cells.join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(g: &Graph) -> GraphParams {
        graph_params(g).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn cioba_examples() {
        let star = params(&Graph::star(4));
        assert!(close(cioba_bound_v1(&star).unwrap(), 6.0 / 52.0));
        assert!(close(cioba_bound_v2(&star).unwrap(), 1.0 / 8.0));
        let p3 = params(&Graph::path(3));
        assert!(close(cioba_bound_v1(&p3).unwrap(), 2.0 / 15.0));
        assert!(close(cioba_bound_v2(&p3).unwrap(), 1.0 / 6.0));
        assert!(close(cioba_bound_v2(&params(&Graph::path(4))).unwrap(), 1.0 / 12.0));
        assert_eq!(cioba_bound_v1(&params(&Graph::cycle(5))), Err(BoundError::Regular));
        assert_eq!(cioba_bound_v2(&params(&Graph::complete(4))), Err(BoundError::Regular));
    }

    #[test]
    fn dh_examples() {
        let star = params(&Graph::star(4));
        assert!(close(dh_bound(&star).unwrap(), 6.0 / 52.0));
        assert!(close(dh_bound(&star).unwrap(), cioba_bound_v1(&star).unwrap()));
        let k4e = params(&Graph::complete(4).without_edge(0, 1).unwrap());
        assert_eq!((k4e.edge_connectivity, k4e.diameter, k4e.degree_deficit()), (2, 2, 2));
        assert!(close(dh_bound(&k4e).unwrap(), 4.0 / 24.0));
        assert!(close(dh_bound_unscaled(&k4e).unwrap(), 4.0 / 6.0));
    }

    #[test]
    fn treewidth_bound_examples() {
        for n in 1..50 {
            assert!(close(treewidth_bound(n, 1).unwrap(), ((n - 1) as f64).sqrt()));
            assert!(close(treewidth_bound(n, n).unwrap(), (n - 1) as f64));
        }
        assert!(close(treewidth_bound(5, 2).unwrap(), 3.0));
        assert!(treewidth_bound(3, 4).is_err());
        assert!(treewidth_bound(3, 0).is_err());
    }

    #[test]
    fn pineapple_regimes() {
        // 10 - sqrt(9) = 7
        assert_eq!(pineapple_regime(10, 7), Regime::Dense);
        assert_eq!(pineapple_regime(10, 8), Regime::Sparse);
        assert_eq!(pineapple_upper(10, 3).unwrap().0, Regime::Dense);
        assert!(pineapple_upper(10, 9).is_err());
        assert!(pineapple_upper(10, 1).is_err());
    }

    #[test]
    fn pineapple_upper_dominates_exact_root() {
        for n in 4..=30 {
            for alpha in 2..=n - 2 {
                let exact = pineapple_rho_exact(n, alpha).unwrap();
                let (_, upper) = pineapple_upper(n, alpha).unwrap();
                assert!(upper >= exact - 1e-9, "n={n} alpha={alpha}");
                assert!(pineapple_lower(n, alpha) <= exact + 1e-12);
            }
        }
    }

    #[test]
    fn baselines_at_12_4() {
        let b = llt_baseline(12, 4).unwrap();
        let (dense, sparse) = pineapple_upper_formulas(12, 4).unwrap();
        // beta = 9, beta^2 = 81 > 12
        assert!(close(b.dense.clone().unwrap(), 8.0 + 3.0 / 69.0));
        assert!(dense < b.dense.unwrap());
        // gamma = 1 - 7/sqrt(11) < 0
        assert!(matches!(b.sparse, Err(BoundError::BaselineGamma { .. })));
        assert!(sparse.is_finite());
    }

    #[test]
    fn quadratic_identity() {
        let p = params(&Graph::star(5));
        assert!(quadratic_min_check(&p, 0.7).unwrap().holds());
        let zero = quadratic_min_check(&p, 0.0).unwrap();
        assert_eq!(zero.value, 0.0);
        assert!(zero.holds());
    }

    #[test]
    fn report_for_star() {
        let r = BoundReport::for_graph(&Graph::star(4)).unwrap();
        assert!(close(r.rho.unwrap(), 3f64.sqrt()));
        assert!(r.violations().is_empty());
        assert_eq!(r.bound("dh").unwrap().applies, Some(true));
        assert!(r.bound("treewidth_bound").unwrap().slack.unwrap().abs() < 1e-9);
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("Cs,4,3,3,2,1,3,"));
    }

    #[test]
    fn report_from_params_only() {
        let inputs = BoundInputs {
            graph6: None,
            params: params(&Graph::path(5)),
            rho: None,
            treewidth: None,
            distance_hereditary: None,
            block_graph: None,
        };
        let r = BoundReport::evaluate(&inputs);
        assert!(r.gap.is_none());
        assert!(r.bounds.iter().all(|b| b.satisfied.is_none()));
        assert!(r.bound("cioba_v2").is_some());
    }
}
