//! Island graphs on the circle Z_L: vertices are indices whose magnitudes
//! clear a threshold, edges connect indices within the propagation reach.
//!
//! Three edge rules are supported. Time and frequency islands connect
//! vertices at circular distance 1..=reach+1; the window-step rule (for
//! short-support windows) connects vertices at circular distance exactly
//! equal to the window step. "mod L" distance is read as circular
//! distance min(|l - l'|, L - |l - l'|), which makes the cycle topology
//! consistent for all three rules.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal::{wrap, ComplexSignal};
use crate::Scalar;

/// Edge rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphMode {
    Time,
    Frequency,
    WindowStep,
}

/// Threshold and reach for graph construction.
///
/// `reach` is the maximum separation parameter for time/frequency modes
/// (edges up to circular distance reach + 1) and the window step for
/// window-step mode (edges at circular distance exactly reach).
#[derive(Debug, Clone, Copy)]
pub struct GraphParams<S: Scalar> {
    pub delta0: S,
    pub mode: GraphMode,
    pub reach: usize,
}

/// One BFS propagation step: `vertex` receives phase from `parent` over a
/// signed step `step = vertex - parent` (smallest-modulus legal
/// representative). The root carries no parent.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PropStep {
    pub vertex: usize,
    pub parent: Option<usize>,
    pub step: i64,
}

/// Vertex set, connected components and BFS propagation trees.
#[derive(Debug, Clone)]
pub struct IslandGraph<S: Scalar> {
    l: usize,
    mode: GraphMode,
    reach: usize,
    delta0: S,
    vertices: Vec<usize>,
    components: Vec<Vec<usize>>,
    roots: Vec<usize>,
    orders: Vec<Vec<PropStep>>,
}

impl<S: Scalar> IslandGraph<S> {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn reach(&self) -> usize {
        self.reach
    }

    pub fn delta0(&self) -> S {
        self.delta0
    }

    /// Sorted vertex indices.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.vertices.binary_search(&index).is_ok()
    }

    /// Connected components (each sorted ascending). They partition the
    /// vertex set.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// One root per component: a vertex of minimum BFS eccentricity, ties
    /// broken by smallest index.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Component index of a vertex, if it is one.
    pub fn component_of(&self, index: usize) -> Option<usize> {
        self.components.iter().position(|c| c.binary_search(&index).is_ok())
    }
}

fn legal_steps(mode: GraphMode, reach: usize) -> Vec<i64> {
    // interleave +-1, +-2, ... so BFS visits nearest neighbours first
    match mode {
        GraphMode::Time | GraphMode::Frequency => (1..=reach as i64 + 1)
            .flat_map(|d| [d, -d])
            .collect(),
        GraphMode::WindowStep => {
            if reach == 0 {
                Vec::new()
            } else {
                vec![reach as i64, -(reach as i64)]
            }
        }
    }
}

/// Builds the island graph over indices where every supplied magnitude
/// vector exceeds `delta0`. Pass one vector at reconstruction time, two
/// when certifying a signal pair.
pub fn build_graph<S: Scalar>(
    magnitudes: &[&[S]],
    params: GraphParams<S>,
) -> Result<IslandGraph<S>> {
    if magnitudes.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one magnitude vector required".into(),
        ));
    }
    let l = magnitudes[0].len();
    if l < 2 || magnitudes.iter().any(|v| v.len() != l) {
        return Err(Error::DimensionMismatch(
            "all magnitude vectors must share a length >= 2".into(),
        ));
    }
    if params.delta0 <= S::zero() || !params.delta0.is_finite() {
        return Err(Error::InvalidParameter("delta0 must be > 0".into()));
    }
    match params.mode {
        GraphMode::Time | GraphMode::Frequency => {
            if params.reach + 1 > l / 2 {
                return Err(Error::InvalidParameter(format!(
                    "reach {} outside 0..={} for L = {l}",
                    params.reach,
                    l / 2 - 1
                )));
            }
        }
        GraphMode::WindowStep => {
            if params.reach >= l.div_ceil(2) {
                return Err(Error::InvalidParameter(format!(
                    "window step {} must be < ceil(L/2) = {} for L = {l}",
                    params.reach,
                    l.div_ceil(2)
                )));
            }
        }
    }

    let vertices: Vec<usize> = (0..l)
        .filter(|&i| magnitudes.iter().all(|v| v[i] > params.delta0))
        .collect();
    let in_set: Vec<bool> = {
        let mut b = vec![false; l];
        for &v in &vertices {
            b[v] = true;
        }
        b
    };

    let steps = legal_steps(params.mode, params.reach);
    let neighbours = |u: usize| -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for &s in &steps {
            let v = wrap(u as i64 + s, l);
            if v != u && in_set[v] && !out.iter().any(|&(w, _)| w == v) {
                out.push((v, s));
            }
        }
        out
    };

    // connected components by BFS over ascending start vertices
    let mut comp_id = vec![usize::MAX; l];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &start in &vertices {
        if comp_id[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut queue = std::collections::VecDeque::from([start]);
        comp_id[start] = id;
        let mut members = vec![start];
        while let Some(u) = queue.pop_front() {
            for (v, _) in neighbours(u) {
                if comp_id[v] == usize::MAX {
                    comp_id[v] = id;
                    members.push(v);
                    queue.push_back(v);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }

    // BFS distances from a source, restricted to its component
    let bfs_dist = |source: usize| -> Vec<(usize, usize)> {
        let mut dist = vec![usize::MAX; l];
        dist[source] = 0;
        let mut queue = std::collections::VecDeque::from([source]);
        let mut out = vec![(source, 0)];
        while let Some(u) = queue.pop_front() {
            for (v, _) in neighbours(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    out.push((v, dist[v]));
                    queue.push_back(v);
                }
            }
        }
        out
    };

    let mut roots = Vec::with_capacity(components.len());
    let mut orders = Vec::with_capacity(components.len());
    for comp in &components {
        // root = vertex of minimum eccentricity, smallest index on ties
        let root = comp
            .iter()
            .map(|&v| {
                let ecc = bfs_dist(v).iter().map(|&(_, d)| d).max().unwrap_or(0);
                (ecc, v)
            })
            .min()
            .map(|(_, v)| v)
            .expect("components are non-empty");
        roots.push(root);

        let mut order = vec![PropStep {
            vertex: root,
            parent: None,
            step: 0,
        }];
        let mut seen = vec![false; l];
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for (v, s) in neighbours(u) {
                if !seen[v] {
                    seen[v] = true;
                    order.push(PropStep {
                        vertex: v,
                        parent: Some(u),
                        step: s,
                    });
                    queue.push_back(v);
                }
            }
        }
        orders.push(order);
    }

    Ok(IslandGraph {
        l,
        mode: params.mode,
        reach: params.reach,
        delta0: params.delta0,
        vertices,
        components,
        roots,
        orders,
    })
}

/// BFS order of component `k`: root first, then each vertex with its
/// parent and signed step.
pub fn propagation_order<S: Scalar>(g: &IslandGraph<S>, k: usize) -> Result<&[PropStep]> {
    g.orders
        .get(k)
        .map(|o| o.as_slice())
        .ok_or_else(|| Error::IndexOutOfRange(format!("component {k} of {}", g.orders.len())))
}

/// Detects the circular support interval [n0, n0 + l_phi] of a window:
/// the smallest cyclic interval containing all entries with modulus
/// strictly above `tol`. Fails when those entries are not a cyclic
/// interval or the interval length reaches L/2.
pub fn window_support<S: Scalar>(phi: &ComplexSignal<S>, tol: S) -> Result<(usize, usize)> {
    if tol < S::zero() {
        return Err(Error::InvalidParameter("tol must be >= 0".into()));
    }
    let l = phi.len();
    let above: Vec<bool> = (0..l).map(|i| phi.at(i as i64).norm() > tol).collect();
    let count = above.iter().filter(|&&b| b).count();
    if count == 0 {
        return Err(Error::NonIntervalSupport);
    }
    if count == l {
        return Err(Error::SupportTooLong { support: l, l });
    }
    // cyclic runs of `true`: exactly one means the support is an interval
    let run_starts: Vec<usize> = (0..l)
        .filter(|&i| above[i] && !above[(i + l - 1) % l])
        .collect();
    if run_starts.len() != 1 {
        return Err(Error::NonIntervalSupport);
    }
    let n0 = run_starts[0];
    let ell_phi = count - 1;
    if ell_phi >= l.div_ceil(2) {
        return Err(Error::SupportTooLong {
            support: count,
            l,
        });
    }
    Ok((n0, ell_phi))
}

/// Connectivity of the step graph on the full vertex set: the step-l_phi
/// cycle on Z_L is connected iff gcd(l_phi, L) = 1.
pub fn step_graph_connected(l: usize, step: usize) -> bool {
    gcd(step % l, l) == 1
}

/// The alternative coprimality condition on l_phi - 1 used by the
/// uniqueness result for short-support windows; exposed separately from
/// [`step_graph_connected`] because the two do not coincide.
pub fn step_minus_one_coprime(l: usize, step: usize) -> bool {
    if step == 0 {
        return false;
    }
    gcd((step - 1) % l, l) == 1
}

fn gcd(a: usize, b: usize) -> usize {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mode: GraphMode, delta0: f64, reach: usize) -> GraphParams<f64> {
        GraphParams { delta0, mode, reach }
    }

    #[test]
    fn full_cycle_single_component() {
        let mags = vec![1.0; 12];
        let g = build_graph(&[&mags], params(GraphMode::Time, 0.5, 0)).unwrap();
        assert_eq!(g.components().len(), 1);
        assert_eq!(g.components()[0], (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn two_bumps_split_and_bridge() {
        // two above-threshold clusters separated by gaps of 3 zeros
        let mut mags = vec![0.0; 16];
        for i in 0..5 {
            mags[i] = 1.0;
            mags[i + 8] = 1.0;
        }
        // reach 0: edges at distance 1 only -> two islands
        let g0 = build_graph(&[&mags], params(GraphMode::Time, 0.5, 0)).unwrap();
        assert_eq!(g0.components().len(), 2);
        // reach 2 (edges up to distance 3) still cannot cross a 3-zero gap
        let g2 = build_graph(&[&mags], params(GraphMode::Time, 0.5, 2)).unwrap();
        assert_eq!(g2.components().len(), 2);
        // reach 3 (edges up to distance 4) bridges it -> one island
        let g3 = build_graph(&[&mags], params(GraphMode::Time, 0.5, 3)).unwrap();
        assert_eq!(g3.components().len(), 1);
        // the bridged graph must contain some steps with |step| > 1
        let order = propagation_order(&g3, 0).unwrap();
        assert!(order.iter().any(|s| s.step.abs() > 1));
    }

    #[test]
    fn window_step_component_count_is_gcd() {
        let mags = vec![1.0; 8];
        let g = build_graph(&[&mags], params(GraphMode::WindowStep, 0.5, 3)).unwrap();
        assert_eq!(g.components().len(), 1); // gcd(3, 8) = 1
        let g2 = build_graph(&[&mags], params(GraphMode::WindowStep, 0.5, 2)).unwrap();
        assert_eq!(g2.components().len(), 2); // even / odd
    }

    #[test]
    fn window_step_gcd_bruteforce() {
        for l in 4..=24usize {
            let mags = vec![1.0; l];
            for step in 1..l.div_ceil(2) {
                let g =
                    build_graph(&[&mags], params(GraphMode::WindowStep, 0.5, step)).unwrap();
                assert_eq!(
                    g.components().len(),
                    gcd(step, l),
                    "L = {l}, step = {step}"
                );
                assert_eq!(step_graph_connected(l, step), gcd(step, l) == 1);
            }
        }
    }

    #[test]
    fn two_vector_vertex_rule() {
        let a = vec![1.0, 1.0, 0.1, 1.0];
        let b = vec![1.0, 0.1, 1.0, 1.0];
        let g = build_graph(&[&a, &b], params(GraphMode::Time, 0.5, 0)).unwrap();
        assert_eq!(g.vertices(), &[0, 3]);
    }

    #[test]
    fn vertex_monotonicity_and_rotation_invariance() {
        let mags: Vec<f64> = (0..16).map(|i| ((i * 7 + 3) % 11) as f64 / 10.0).collect();
        let lo = build_graph(&[&mags], params(GraphMode::Time, 0.2, 1)).unwrap();
        let hi = build_graph(&[&mags], params(GraphMode::Time, 0.6, 1)).unwrap();
        assert!(hi.vertices().iter().all(|v| lo.vertices().contains(v)));
        for rot in 0..16 {
            let rotated: Vec<f64> = (0..16).map(|i| mags[(i + rot) % 16]).collect();
            let gr = build_graph(&[&rotated], params(GraphMode::Time, 0.2, 1)).unwrap();
            assert_eq!(gr.components().len(), lo.components().len());
        }
    }

    #[test]
    fn bfs_paths_respect_eccentricity_bound() {
        for (l, reach) in [(6usize, 0usize), (12, 1), (16, 2)] {
            let mags = vec![1.0; l];
            let g = build_graph(&[&mags], params(GraphMode::Time, 0.5, reach)).unwrap();
            for (k, comp) in g.components().iter().enumerate() {
                let order = propagation_order(&g, k).unwrap();
                let bound = comp.len().div_ceil(2);
                // replay parent chains
                let mut depth = std::collections::HashMap::new();
                for step in order {
                    let d = match step.parent {
                        None => 0usize,
                        Some(p) => depth[&p] + 1,
                    };
                    depth.insert(step.vertex, d);
                    assert!(d <= bound, "depth {d} exceeds {bound}");
                    if let Some(p) = step.parent {
                        assert_eq!(
                            wrap(p as i64 + step.step, l),
                            step.vertex,
                            "step inconsistent"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn full_cycle_reach0_l6_root_paths() {
        let mags = vec![1.0; 6];
        let g = build_graph(&[&mags], params(GraphMode::Time, 0.5, 0)).unwrap();
        let order = propagation_order(&g, 0).unwrap();
        let mut depth = std::collections::HashMap::new();
        let mut max_depth = 0;
        for step in order {
            let d = step.parent.map(|p| depth[&p] + 1).unwrap_or(0);
            depth.insert(step.vertex, d);
            max_depth = max_depth.max(d);
        }
        assert_eq!(max_depth, 3);
    }

    #[test]
    fn singleton_component() {
        let mags = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let g = build_graph(&[&mags], params(GraphMode::Time, 0.5, 0)).unwrap();
        assert_eq!(g.components().len(), 1);
        let order = propagation_order(&g, 0).unwrap();
        assert_eq!(order.len(), 1);
        assert!(order[0].parent.is_none());
    }

    #[test]
    fn rejects_bad_parameters() {
        let mags = vec![1.0; 8];
        assert!(build_graph(&[&mags], params(GraphMode::Time, 0.0, 0)).is_err());
        assert!(build_graph(&[&mags], params(GraphMode::Time, 0.5, 4)).is_err());
        assert!(build_graph(&[&mags], params(GraphMode::WindowStep, 0.5, 4)).is_err());
        assert!(propagation_order(
            &build_graph(&[&mags], params(GraphMode::Time, 0.5, 0)).unwrap(),
            1
        )
        .is_err());
    }

    #[test]
    fn window_support_detection() {
        let l = 1024;
        let mut re = vec![0.0; l];
        for v in re.iter_mut().take(64) {
            *v = 1.0;
        }
        let phi = ComplexSignal::from_re(&re).unwrap();
        assert_eq!(window_support(&phi, 0.0).unwrap(), (0, 63));
        // cyclic rotation moves n0, keeps the length
        let rotated = phi.cyclic_shift(1000);
        assert_eq!(window_support(&rotated, 0.0).unwrap(), (1000, 63));
        // full support fails
        let ones = ComplexSignal::from_re(&vec![1.0; 16]).unwrap();
        assert!(matches!(
            window_support(&ones, 0.0),
            Err(Error::SupportTooLong { .. })
        ));
        // split support fails
        let mut split = vec![0.0; 16];
        split[0] = 1.0;
        split[5] = 1.0;
        let split = ComplexSignal::from_re(&split).unwrap();
        assert!(matches!(
            window_support(&split, 0.0),
            Err(Error::NonIntervalSupport)
        ));
    }

    #[test]
    fn window_support_wraps_across_zero() {
        let mut re = vec![0.0; 16];
        for i in [14usize, 15, 0, 1, 2] {
            re[i] = 1.0;
        }
        let phi = ComplexSignal::from_re(&re).unwrap();
        assert_eq!(window_support(&phi, 0.0).unwrap(), (14, 4));
    }

    #[test]
    fn coprimality_predicates_differ() {
        // step 3 on L = 8: connected (gcd 1) but step-1 = 2 shares a factor
        assert!(step_graph_connected(8, 3));
        assert!(!step_minus_one_coprime(8, 3));
    }
}
