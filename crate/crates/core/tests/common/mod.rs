#![allow(dead_code)]

use mcpath::{CriteriaVector, Graph, NodeId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Params {
    pub directed: bool,
    pub nodes: (usize, usize),
    pub q: (usize, usize),
    pub weight: (u64, u64),
    /// Edge probability, drawn per graph from this range.
    pub density: (f64, f64),
    /// Forces every edge's criteria to sum to at least 1.
    pub positive_aggregate: bool,
}

impl Params {
    pub fn small(directed: bool) -> Self {
        Params {
            directed,
            nodes: (3, 8),
            q: (1, 4),
            weight: (0, 7),
            density: (0.25, 0.75),
            positive_aggregate: false,
        }
    }
}

pub fn random_graph(rng: &mut impl Rng, p: Params) -> Graph {
    let n = rng.gen_range(p.nodes.0..=p.nodes.1);
    let q = rng.gen_range(p.q.0..=p.q.1);
    let density = rng.gen_range(p.density.0..=p.density.1);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!p.directed && v < u) {
                continue;
            }
            if rng.gen_bool(density) {
                let mut w: Vec<u64> = (0..q)
                    .map(|_| rng.gen_range(p.weight.0..=p.weight.1))
                    .collect();
                if p.positive_aggregate && w.iter().all(|&x| x == 0) {
                    let i = rng.gen_range(0..q);
                    w[i] = 1;
                }
                edges.push((u, v, CriteriaVector::new(w)));
            }
        }
    }
    edges.shuffle(rng);
    Graph::build(p.directed, n, q, edges).expect("generator emits valid graphs")
}

/// Distinct endpoints.
pub fn endpoints(rng: &mut impl Rng, g: &Graph) -> (NodeId, NodeId) {
    let n = g.node_count();
    let s = rng.gen_range(0..n);
    let mut t = rng.gen_range(0..n - 1);
    if t >= s {
        t += 1;
    }
    (s, t)
}

/// Random instance built from `k_routes` planted routes whose criteria are
/// all multiples of one base vector, plus noise edges. Planted routes are
/// often simultaneously shortest, which the uniform generator rarely gives.
pub fn planted_instance(rng: &mut impl Rng, directed: bool) -> (Graph, NodeId, NodeId) {
    let n = rng.gen_range(4..=8);
    let q = rng.gen_range(1..=3);
    let base: Vec<u64> = (0..q).map(|_| rng.gen_range(1..=3)).collect();
    let mut slots: Vec<Option<CriteriaVector>> = vec![None; n * n];
    let key = |u: usize, v: usize| {
        if directed || u < v {
            u * n + v
        } else {
            v * n + u
        }
    };
    let (s, t) = (0, n - 1);
    for _ in 0..rng.gen_range(1..=3) {
        let mut inner: Vec<usize> = (1..n - 1).collect();
        inner.shuffle(rng);
        inner.truncate(rng.gen_range(0..=2.min(n - 2)));
        let mut route = vec![s];
        route.extend(inner);
        route.push(t);
        for w in route.windows(2) {
            let scale = rng.gen_range(1..=2);
            slots[key(w[0], w[1])] = Some(CriteriaVector::new(
                base.iter().map(|b| b * scale).collect(),
            ));
        }
    }
    for _ in 0..rng.gen_range(0..n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && slots[key(u, v)].is_none() {
            slots[key(u, v)] = Some(CriteriaVector::new(
                (0..q).map(|_| rng.gen_range(1..=7)).collect(),
            ));
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if let Some(w) = slots[key(u, v)].take() {
                edges.push((u, v, w));
            }
        }
    }
    edges.shuffle(rng);
    (Graph::build(directed, n, q, edges).unwrap(), s, t)
}
