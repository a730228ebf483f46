//! Statistics that converge to `w_d` on random geometric graphs, and the
//! end-to-end dimension estimator built on them.
//!
//! Vertices are 0-based. `W1` looks at the smallest label among the vertices
//! of maximal degree, `W4` at the vertex labeled 0. Both, and the
//! label-dependent denominator of `W2`, assume the labeling is uniformly
//! random; [`estimate_dimension`] shuffles before evaluating them.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geograph::{choose2, Graph, Vertex};
use crate::wd::{dim_from_stat, DimensionEstimate, DEFAULT_DIMENSION_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Neighborhood density of the max-degree vertex.
    W1,
    /// Triangles over max-labeled cherries.
    W2,
    /// Three times the triangles over all cherries.
    #[serde(rename = "W2sym")]
    W2Sym,
    /// Mean local clustering over vertices of degree at least two.
    W3,
    /// Neighborhood density of vertex 0.
    W4,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::W1, Method::W2, Method::W2Sym, Method::W3, Method::W4];

    /// Whether the statistic depends on vertex labels.
    pub fn label_dependent(self) -> bool {
        matches!(self, Method::W1 | Method::W2 | Method::W4)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::W1 => "W1",
            Method::W2 => "W2",
            Method::W2Sym => "W2sym",
            Method::W3 => "W3",
            Method::W4 => "W4",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}` (expected W1, W2, W2sym, W3 or W4)")))
    }
}

/// Why a statistic is undefined on a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Failure {
    /// The designated vertex has degree below two.
    DegenerateDegree,
    /// The denominator of a global ratio is zero.
    EmptyDenominator,
}

impl Failure {
    pub fn as_str(self) -> &'static str {
        match self {
            Failure::DegenerateDegree => "degenerate-degree",
            Failure::EmptyDenominator => "empty-denominator",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Counts behind a statistic; fields not used by a method stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighborhood_edges: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangles: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denominator: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qualifying_vertices: Option<u64>,
}

/// Either a statistic with its dimension estimate, or a typed failure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOutcome {
    pub method: Method,
    pub result: std::result::Result<DimensionEstimate, Failure>,
    pub diagnostics: Diagnostics,
}

impl EstimatorOutcome {
    pub fn statistic(&self) -> Option<f64> {
        self.result.as_ref().ok().map(|e| e.statistic)
    }

    pub fn delta(&self) -> Option<u32> {
        self.result.as_ref().ok().map(|e| e.delta)
    }

    pub fn clamped(&self) -> Option<bool> {
        self.result.as_ref().ok().map(|e| e.clamped)
    }

    pub fn failure(&self) -> Option<Failure> {
        self.result.err()
    }
}

impl Serialize for EstimatorOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EstimatorOutcome", 6)?;
        s.serialize_field("method", &self.method)?;
        s.serialize_field("W", &self.statistic())?;
        s.serialize_field("delta", &self.delta())?;
        s.serialize_field("clamped", &self.clamped())?;
        s.serialize_field("failure", &self.failure())?;
        s.serialize_field("diagnostics", &self.diagnostics)?;
        s.end()
    }
}

/// A raw statistic before inversion.
type Statistic = (std::result::Result<f64, Failure>, Diagnostics);

fn ratio(numerator: u64, denominator: u64) -> f64 {
    numerator as f64 / denominator as f64
}

/// `δ_v / C(D_v, 2)` for one designated vertex.
fn local_density(g: &Graph, v: Vertex) -> Statistic {
    let degree = g.degree(v);
    let mut diag = Diagnostics {
        vertex: Some(v),
        degree: Some(degree),
        ..Diagnostics::default()
    };
    if degree < 2 {
        return (Err(Failure::DegenerateDegree), diag);
    }
    let delta = g.neighborhood_edges(v);
    diag.neighborhood_edges = Some(delta);
    diag.denominator = Some(choose2(degree));
    (Ok(ratio(delta, choose2(degree))), diag)
}

fn statistic_w1(g: &Graph) -> Statistic {
    let max = g.max_degree();
    match (0..g.n() as Vertex).find(|&v| g.degree(v) == max) {
        Some(m) => local_density(g, m),
        None => (Err(Failure::DegenerateDegree), Diagnostics::default()),
    }
}

fn statistic_w2(g: &Graph) -> Statistic {
    let triangles = g.count_triangles();
    let cherries = g.count_max_labeled_cherries();
    global_ratio(triangles, triangles, cherries)
}

fn statistic_w2_symmetric(g: &Graph) -> Statistic {
    let triangles = g.count_triangles();
    global_ratio(triangles, 3 * triangles, g.count_cherries())
}

fn global_ratio(triangles: u64, numerator: u64, denominator: u64) -> Statistic {
    let diag = Diagnostics {
        triangles: Some(triangles),
        denominator: Some(denominator),
        ..Diagnostics::default()
    };
    if denominator == 0 {
        return (Err(Failure::EmptyDenominator), diag);
    }
    (Ok(ratio(numerator, denominator)), diag)
}

fn statistic_w3(g: &Graph) -> Statistic {
    let deltas = g.triangles_per_vertex();
    // Sequential sum keeps the result independent of the worker count.
    let (mut sum, mut qualifying) = (0.0, 0u64);
    for (v, &delta) in deltas.iter().enumerate() {
        let degree = g.degree(v as Vertex);
        if degree >= 2 {
            sum += ratio(delta, choose2(degree));
            qualifying += 1;
        }
    }
    let diag = Diagnostics {
        qualifying_vertices: Some(qualifying),
        ..Diagnostics::default()
    };
    if qualifying == 0 {
        return (Err(Failure::EmptyDenominator), diag);
    }
    (Ok(sum / qualifying as f64), diag)
}

fn statistic_w4(g: &Graph) -> Statistic {
    if g.n() == 0 {
        return (Err(Failure::DegenerateDegree), Diagnostics::default());
    }
    local_density(g, 0)
}

/// Evaluate `method` on `g` as labeled, inverting with dimension cap `cap`.
pub fn evaluate(g: &Graph, method: Method, cap: u32) -> Result<EstimatorOutcome> {
    let (value, diagnostics) = match method {
        Method::W1 => statistic_w1(g),
        Method::W2 => statistic_w2(g),
        Method::W2Sym => statistic_w2_symmetric(g),
        Method::W3 => statistic_w3(g),
        Method::W4 => statistic_w4(g),
    };
    let result = match value {
        Ok(w) => Ok(dim_from_stat(w, cap)?),
        Err(failure) => Err(failure),
    };
    Ok(EstimatorOutcome {
        method,
        result,
        diagnostics,
    })
}

fn evaluate_default(g: &Graph, method: Method) -> EstimatorOutcome {
    evaluate(g, method, DEFAULT_DIMENSION_CAP).expect("statistics are finite and the default cap is valid")
}

/// `δ_M / C(D_M, 2)`, `M` the smallest label of maximal degree.
pub fn w1(g: &Graph) -> EstimatorOutcome {
    evaluate_default(g, Method::W1)
}

/// Triangles over max-labeled cherries.
pub fn w2(g: &Graph) -> EstimatorOutcome {
    evaluate_default(g, Method::W2)
}

/// `3 · triangles / Σ_i C(D_i, 2)`; label-invariant.
pub fn w2_symmetric(g: &Graph) -> EstimatorOutcome {
    evaluate_default(g, Method::W2Sym)
}

/// Mean of `δ_i / C(D_i, 2)` over vertices with `D_i >= 2`.
pub fn w3(g: &Graph) -> EstimatorOutcome {
    evaluate_default(g, Method::W3)
}

/// `δ_0 / C(D_0, 2)`.
pub fn w4(g: &Graph) -> EstimatorOutcome {
    evaluate_default(g, Method::W4)
}

/// Shuffle labels with `seed` when the method depends on them, evaluate, and
/// invert the statistic to a dimension in `[1, cap]`.
pub fn estimate_dimension(g: &Graph, method: Method, seed: u64, cap: u32) -> Result<EstimatorOutcome> {
    if method.label_dependent() {
        evaluate(&g.shuffle_labels(seed), method, cap)
    } else {
        evaluate(g, method, cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geograph::fixtures::{complete, path3, star};

    fn stat(o: &EstimatorOutcome) -> f64 {
        o.statistic().expect("statistic should be defined")
    }

    #[test]
    fn w1_examples() {
        let o = w1(&complete(3));
        assert_eq!(o.diagnostics.vertex, Some(0));
        assert_eq!((stat(&o), o.delta(), o.clamped()), (1.0, Some(1), Some(true)));

        let o = w1(&star(4));
        assert_eq!(o.diagnostics.vertex, Some(0));
        assert_eq!(stat(&o), 0.0);
        assert_eq!((o.delta(), o.clamped()), (Some(DEFAULT_DIMENSION_CAP), Some(true)));

        // Vertices 1 and 3 both have degree 3.
        let g = Graph::from_edges(6, [(3, 0), (3, 4), (3, 5), (1, 2), (1, 4), (1, 5)]).unwrap();
        assert_eq!(w1(&g).diagnostics.vertex, Some(1));
    }

    #[test]
    fn w2_examples() {
        assert_eq!(stat(&w2(&complete(3))), 1.0);
        let centre_two = Graph::from_edges(3, [(2, 0), (2, 1)]).unwrap();
        assert_eq!(stat(&w2(&centre_two)), 0.0);
        assert_eq!(w2(&path3()).failure(), Some(Failure::EmptyDenominator));
    }

    #[test]
    fn w2_symmetric_examples() {
        assert_eq!(stat(&w2_symmetric(&complete(3))), 1.0);
        assert_eq!(stat(&w2_symmetric(&path3())), 0.0);
        let matching = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(w2_symmetric(&matching).failure(), Some(Failure::EmptyDenominator));
    }

    #[test]
    fn w3_examples() {
        assert_eq!(stat(&w3(&complete(3))), 1.0);
        let o = w3(&path3());
        assert_eq!((stat(&o), o.diagnostics.qualifying_vertices), (0.0, Some(1)));
        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(w3(&edge).failure(), Some(Failure::EmptyDenominator));
    }

    #[test]
    fn w4_examples() {
        // Vertex 0 has neighbors 1, 2, 3 and the single edge (1, 2) among them.
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        assert!((stat(&w4(&g)) - 1.0 / 3.0).abs() < 1e-15);
        let isolated = Graph::from_edges(3, [(1, 2)]).unwrap();
        assert_eq!(w4(&isolated).failure(), Some(Failure::DegenerateDegree));
        for seed in 0..5 {
            let o = estimate_dimension(&complete(3), Method::W4, seed, 100).unwrap();
            assert_eq!(stat(&o), 1.0);
        }
    }

    #[test]
    fn empty_graph_fails_for_every_method() {
        for g in [Graph::empty(0), Graph::empty(5)] {
            for m in Method::ALL {
                let o = estimate_dimension(&g, m, 1, 100).unwrap();
                assert!(o.failure().is_some() && o.delta().is_none(), "{m} on n={}", g.n());
            }
        }
    }

    #[test]
    fn complete_graphs_give_one() {
        for m in 3..9 {
            let g = complete(m);
            for method in Method::ALL {
                assert_eq!(stat(&estimate_dimension(&g, method, 7, 64).unwrap()), 1.0);
            }
        }
    }

    #[test]
    fn triangle_free_graphs_give_zero() {
        let cycle = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        for g in [cycle, star(5), path3()] {
            assert_eq!(stat(&w3(&g)), 0.0);
            for method in [Method::W1, Method::W2, Method::W4, Method::W2Sym] {
                for seed in 0..4 {
                    let o = estimate_dimension(&g, method, seed, 64).unwrap();
                    if let Some(w) = o.statistic() {
                        assert_eq!(w, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn method_names_roundtrip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{m}\""));
        }
        assert!("w1".parse::<Method>().is_err());
    }

    #[test]
    fn json_shape() {
        let o = w3(&complete(3));
        let v: serde_json::Value = serde_json::to_value(o).unwrap();
        assert_eq!(v["method"], "W3");
        assert_eq!(v["W"], 1.0);
        assert_eq!(v["delta"], 1);
        assert_eq!(v["clamped"], true);
        assert!(v["failure"].is_null());
        assert_eq!(v["diagnostics"]["qualifying_vertices"], 3);

        let v = serde_json::to_value(w3(&Graph::empty(2))).unwrap();
        assert!(v["W"].is_null() && v["delta"].is_null());
        assert_eq!(v["failure"], "empty-denominator");
    }
}
