//! Strict-threshold emptiness and optimal values for weighted graphs.
//!
//! The central query: does the automaton accept a word of value strictly
//! below a threshold? Each value function gets its own optimizer over a
//! plain weighted graph, and every NONEMPTY answer carries a concrete
//! witness (a word, or an ultimately periodic word for the infinitary value
//! functions) whose exhibited run is exactly evaluated and strictly below
//! the threshold. Infima are reported on EMPTY answers; they need not be
//! attained by any single word.
//!
//! All arithmetic is exact. Pump counts are found by doubling a candidate
//! and re-checking the exact inequality, which avoids rational-to-integer
//! rounding entirely.

use std::collections::{BTreeSet, HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::alphabet::{Lasso, Letter};
use crate::error::{Error, Result};
use crate::numeric::{from_usize, Ext, Scalar};
use crate::wa::{ValueFunction, WeightedAutomaton};

/// One edge of a weighted graph; `letter` is carried along so witnesses can
/// be read back as words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GEdge<W> {
    pub src: usize,
    pub letter: Letter,
    pub weight: W,
    pub dst: usize,
}

/// A weighted graph with generalized acceptance.
///
/// Finite-word semantics uses exactly one accepting set (runs end there).
/// Buchi semantics requires a run to visit every set infinitely often;
/// one set is the ordinary Buchi condition.
#[derive(Debug, Clone)]
pub struct WGraph<W> {
    pub state_count: usize,
    pub initial: BTreeSet<usize>,
    pub accepting_sets: Vec<BTreeSet<usize>>,
    pub edges: Vec<GEdge<W>>,
}

/// Answer to an emptiness-below query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emptiness<W> {
    /// No word has value strictly below the threshold; `infimum` is the
    /// greatest lower bound over all accepted words (`PosInf` if none).
    Empty { infimum: Ext<W> },
    NonEmpty { witness: EmptinessWitness<W> },
}

/// `value` is the exact value of the exhibited run, an upper bound on the
/// witness word's value and itself strictly below the queried threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmptinessWitness<W> {
    Word { letters: Vec<Letter>, value: W },
    Lasso { lasso: Lasso<Letter>, value: W },
}

impl<W: Scalar> EmptinessWitness<W> {
    pub fn value(&self) -> &W {
        match self {
            EmptinessWitness::Word { value, .. } | EmptinessWitness::Lasso { value, .. } => value,
        }
    }
}

/// Does `wa` accept a word of value strictly below `lambda`?
pub fn emptiness_below<W: Scalar>(
    wa: &WeightedAutomaton<W>,
    lambda: &W,
) -> Result<Emptiness<W>> {
    graph_emptiness_below(&wa_graph(wa), wa.value_fn(), lambda)
}

/// Graph-level entry point, shared with product constructions that carry
/// generalized acceptance.
pub fn graph_emptiness_below<W: Scalar>(
    g: &WGraph<W>,
    value_fn: &ValueFunction<W>,
    lambda: &W,
) -> Result<Emptiness<W>> {
    value_fn.validate()?;
    if !value_fn.infinitary() && g.accepting_sets.len() != 1 {
        return Err(Error::Internal(
            "finite-word emptiness requires exactly one accepting set".into(),
        ));
    }
    if g.accepting_sets.is_empty() {
        return Err(Error::Internal("emptiness requires an accepting set".into()));
    }
    Ok(match value_fn {
        ValueFunction::Sum => sum_emptiness(g, lambda),
        ValueFunction::DiscountedFinite(d) => disc_fin_emptiness(g, d, lambda),
        ValueFunction::LimitAverage => limavg_emptiness(g, lambda),
        ValueFunction::DiscountedInfinite(d) => disc_inf_emptiness(g, d, lambda),
    })
}

/// Exact value of an ultimately periodic word under an infinitary value
/// function: the infimum over accepting runs, `PosInf` when none exists.
pub fn evaluate_lasso<W: Scalar>(
    wa: &WeightedAutomaton<W>,
    lasso: &Lasso<Letter>,
) -> Result<Ext<W>> {
    if !wa.value_fn().infinitary() {
        return Err(Error::ValueFunctionMismatch(
            "lasso evaluation needs an infinitary value function".into(),
        ));
    }
    for l in lasso.stem.iter().chain(lasso.cycle.iter()) {
        wa.check_letter(l)?;
    }
    let g = lasso_product(wa, lasso);
    Ok(match wa.value_fn() {
        ValueFunction::LimitAverage => match limavg_best(&g) {
            None => Ext::PosInf,
            Some(best) => Ext::Fin(best.mean),
        },
        ValueFunction::DiscountedInfinite(d) => match disc_inf_best(&g, d) {
            None => Ext::PosInf,
            Some(best) => Ext::Fin(best.value),
        },
        _ => unreachable!("infinitary checked above"),
    })
}

/// Minimum cycle mean over all cycles of the graph, with one cycle
/// attaining it (as edge ids). Ignores initial and accepting structure.
pub fn min_mean_cycle<W: Scalar>(g: &WGraph<W>) -> Option<(W, Vec<usize>)> {
    let alive = vec![true; g.state_count];
    let mut best: Option<(W, Vec<usize>)> = None;
    for scc in sccs(g, &alive) {
        if let Some((mean, cycle)) = karp_min_mean(g, &scc) {
            if best.as_ref().map_or(true, |(b, _)| mean < *b) {
                best = Some((mean, cycle));
            }
        }
    }
    best
}

pub(crate) fn wa_graph<W: Scalar>(wa: &WeightedAutomaton<W>) -> WGraph<W> {
    WGraph {
        state_count: wa.state_count(),
        initial: wa.initial().clone(),
        accepting_sets: vec![wa.accepting().clone()],
        edges: wa
            .transitions()
            .iter()
            .map(|t| GEdge {
                src: t.src,
                letter: t.letter.clone(),
                weight: t.weight.clone(),
                dst: t.dst,
            })
            .collect(),
    }
}

// ---------------------------------------------------------------- utilities

fn by_src<W>(g: &WGraph<W>) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.state_count];
    for (i, e) in g.edges.iter().enumerate() {
        out[e.src].push(i);
    }
    out
}

fn reachable<W>(g: &WGraph<W>) -> Vec<bool> {
    let adj = by_src(g);
    let mut seen = vec![false; g.state_count];
    let mut queue: VecDeque<usize> = g.initial.iter().copied().collect();
    for &q in &g.initial {
        seen[q] = true;
    }
    while let Some(q) = queue.pop_front() {
        for &e in &adj[q] {
            let d = g.edges[e].dst;
            if !seen[d] {
                seen[d] = true;
                queue.push_back(d);
            }
        }
    }
    seen
}

fn coreachable<W>(g: &WGraph<W>, targets: &BTreeSet<usize>) -> Vec<bool> {
    let mut rev = vec![Vec::new(); g.state_count];
    for e in &g.edges {
        rev[e.dst].push(e.src);
    }
    let mut seen = vec![false; g.state_count];
    let mut queue: VecDeque<usize> = targets.iter().copied().collect();
    for &q in targets {
        seen[q] = true;
    }
    while let Some(q) = queue.pop_front() {
        for &s in &rev[q] {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
    }
    seen
}

/// Shortest edge-id path (by edge count) from any source to a goal state,
/// through alive states only. `Some(vec![])` when a source is a goal.
fn bfs_path<W>(
    g: &WGraph<W>,
    alive: &[bool],
    sources: impl IntoIterator<Item = usize>,
    goal: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let adj = by_src(g);
    let mut parent: Vec<Option<usize>> = vec![None; g.state_count];
    let mut seen = vec![false; g.state_count];
    let mut queue = VecDeque::new();
    for s in sources {
        if alive[s] && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    let mut found = None;
    'search: while let Some(q) = queue.pop_front() {
        if goal(q) {
            found = Some(q);
            break 'search;
        }
        for &e in &adj[q] {
            let d = g.edges[e].dst;
            if alive[d] && !seen[d] {
                seen[d] = true;
                parent[d] = Some(e);
                queue.push_back(d);
            }
        }
    }
    let mut cur = found?;
    let mut path = Vec::new();
    while let Some(e) = parent[cur] {
        path.push(e);
        cur = g.edges[e].src;
    }
    path.reverse();
    Some(path)
}

/// Strongly connected components of the alive subgraph, as state lists.
fn sccs<W>(g: &WGraph<W>, alive: &[bool]) -> Vec<Vec<usize>> {
    let mut gr = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..g.state_count).map(|_| gr.add_node(())).collect();
    for e in &g.edges {
        if alive[e.src] && alive[e.dst] {
            gr.add_edge(nodes[e.src], nodes[e.dst], ());
        }
    }
    tarjan_scc(&gr)
        .into_iter()
        .map(|c| c.into_iter().map(|n| n.index()).filter(|&q| alive[q]).collect::<Vec<_>>())
        .filter(|c: &Vec<usize>| !c.is_empty())
        .collect()
}

fn letters_of<W>(g: &WGraph<W>, edges: &[usize]) -> Vec<Letter> {
    edges.iter().map(|&e| g.edges[e].letter.clone()).collect()
}

fn weight_of<W: Scalar>(g: &WGraph<W>, edges: &[usize]) -> W {
    edges.iter().fold(W::zero(), |acc, &e| acc + g.edges[e].weight.clone())
}

/// `sum_i delta^i w_i` with `i` from 1, for the weights along `edges`.
fn disc_weight_of<W: Scalar>(g: &WGraph<W>, delta: &W, edges: &[usize]) -> W {
    let mut acc = W::zero();
    let mut pow = W::one();
    for &e in edges {
        pow = pow * delta.clone();
        acc = acc + pow.clone() * g.edges[e].weight.clone();
    }
    acc
}

// ---------------------------------------------------------------------- sum

fn sum_emptiness<W: Scalar>(g: &WGraph<W>, lambda: &W) -> Emptiness<W> {
    let finals = &g.accepting_sets[0];
    let reach = reachable(g);
    let coreach = coreachable(g, finals);
    let alive: Vec<bool> = (0..g.state_count).map(|q| reach[q] && coreach[q]).collect();
    if !g.initial.iter().any(|&q| alive[q]) {
        return Emptiness::Empty { infimum: Ext::PosInf };
    }
    let n_alive = alive.iter().filter(|&&a| a).count();
    let adj = by_src(g);

    // Bellman-Ford over the alive subgraph, multi-source.
    let mut dist: Vec<Option<W>> = vec![None; g.state_count];
    let mut parent: Vec<Option<usize>> = vec![None; g.state_count];
    for &q in &g.initial {
        if alive[q] {
            dist[q] = Some(W::zero());
        }
    }
    let mut improved_node = None;
    for round in 0..n_alive {
        let mut any = false;
        for (q, es) in adj.iter().enumerate() {
            if !alive[q] || dist[q].is_none() {
                continue;
            }
            for &e in es {
                let edge = &g.edges[e];
                if !alive[edge.dst] {
                    continue;
                }
                let cand = dist[q].clone().unwrap() + edge.weight.clone();
                if dist[edge.dst].as_ref().map_or(true, |d| cand < *d) {
                    dist[edge.dst] = Some(cand);
                    parent[edge.dst] = Some(e);
                    any = true;
                    if round == n_alive - 1 {
                        improved_node = Some(edge.dst);
                    }
                }
            }
        }
        if !any {
            break;
        }
    }

    if let Some(mut v) = improved_node {
        // A relaxation in round n means a negative cycle: walk parents n
        // steps to land on it, then collect it.
        for _ in 0..n_alive {
            v = g.edges[parent[v].expect("improved node has a parent")].src;
        }
        let start = v;
        let mut cycle = Vec::new();
        let mut cur = start;
        loop {
            let e = parent[cur].expect("cycle node has a parent");
            cycle.push(e);
            cur = g.edges[e].src;
            if cur == start {
                break;
            }
        }
        cycle.reverse();
        let w_cycle = weight_of(g, &cycle);
        debug_assert!(w_cycle < W::zero());
        let stem =
            bfs_path(g, &alive, g.initial.iter().copied(), |q| q == start).expect("cycle is alive");
        let tail = bfs_path(g, &alive, [start], |q| finals.contains(&q)).expect("cycle is alive");
        let base = weight_of(g, &stem) + weight_of(g, &tail);
        // Smallest power-of-two pump count pushing the value below lambda.
        let mut n: usize = 1;
        loop {
            let value = base.clone() + from_usize::<W>(n) * w_cycle.clone();
            if value < *lambda {
                let mut letters = letters_of(g, &stem);
                for _ in 0..n {
                    letters.extend(letters_of(g, &cycle));
                }
                letters.extend(letters_of(g, &tail));
                return Emptiness::NonEmpty {
                    witness: EmptinessWitness::Word { letters, value },
                };
            }
            n *= 2;
        }
    }

    // No negative cycle: finite infimum attained by a shortest path.
    let best = finals
        .iter()
        .filter_map(|&q| dist[q].clone().map(|d| (d, q)))
        .min_by(|(a, _), (b, _)| a.cmp(b));
    match best {
        None => Emptiness::Empty { infimum: Ext::PosInf },
        Some((value, q)) if value < *lambda => {
            let mut path = Vec::new();
            let mut cur = q;
            while let Some(e) = parent[cur] {
                path.push(e);
                cur = g.edges[e].src;
            }
            path.reverse();
            debug_assert_eq!(weight_of(g, &path), value);
            Emptiness::NonEmpty {
                witness: EmptinessWitness::Word { letters: letters_of(g, &path), value },
            }
        }
        Some((value, _)) => Emptiness::Empty { infimum: Ext::Fin(value) },
    }
}

// ------------------------------------------------------- discounted, finite

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    Stop,
    Edge(usize),
}

/// Minimize `sum_i delta^i w_i` over runs that may stop only at `stops`
/// (when non-empty) or never stop (when `stops` is empty), restricted to
/// alive states. Every alive state must admit an action. Returns exact
/// per-state optima and an optimal stationary policy.
fn discounted_optimum<W: Scalar>(
    g: &WGraph<W>,
    alive: &[bool],
    delta: &W,
    stops: &BTreeSet<usize>,
) -> (HashMap<usize, W>, HashMap<usize, Action>) {
    let adj = by_src(g);
    // Start from any valid policy; stopping where allowed biases toward
    // short evaluations but is not required for convergence.
    let mut policy: HashMap<usize, Action> = HashMap::new();
    for q in 0..g.state_count {
        if !alive[q] {
            continue;
        }
        if stops.contains(&q) {
            policy.insert(q, Action::Stop);
            continue;
        }
        let e = adj[q]
            .iter()
            .copied()
            .find(|&e| alive[g.edges[e].dst])
            .expect("alive state admits an action");
        policy.insert(q, Action::Edge(e));
    }
    loop {
        let values = eval_policy(g, alive, delta, &policy);
        let mut changed = false;
        for q in 0..g.state_count {
            if !alive[q] {
                continue;
            }
            let mut best_val = values[&q].clone();
            let mut best_act = None;
            if stops.contains(&q) && W::zero() < best_val {
                best_val = W::zero();
                best_act = Some(Action::Stop);
            }
            for &e in &adj[q] {
                let edge = &g.edges[e];
                if !alive[edge.dst] {
                    continue;
                }
                let cand = delta.clone() * (edge.weight.clone() + values[&edge.dst].clone());
                if cand < best_val {
                    best_val = cand;
                    best_act = Some(Action::Edge(e));
                }
            }
            if let Some(act) = best_act {
                policy.insert(q, act);
                changed = true;
            }
        }
        if !changed {
            return (values, policy);
        }
    }
}

/// Exact value of each alive state under a fixed policy. The policy graph
/// is functional; chains fold back from stops or from cycles, whose value
/// solves the one-variable linear equation of going around once.
fn eval_policy<W: Scalar>(
    g: &WGraph<W>,
    alive: &[bool],
    delta: &W,
    policy: &HashMap<usize, Action>,
) -> HashMap<usize, W> {
    let mut values: HashMap<usize, W> = HashMap::new();
    for start in 0..g.state_count {
        if !alive[start] || values.contains_key(&start) {
            continue;
        }
        let mut stack: Vec<usize> = Vec::new();
        let mut pos: HashMap<usize, usize> = HashMap::new();
        let mut cur = start;
        loop {
            if values.contains_key(&cur) {
                break;
            }
            if let Some(&p) = pos.get(&cur) {
                // stack[p..] closes a cycle at cur.
                let cycle = &stack[p..];
                let ws: Vec<W> = cycle
                    .iter()
                    .map(|&q| match policy[&q] {
                        Action::Edge(e) => g.edges[e].weight.clone(),
                        Action::Stop => unreachable!("stops never sit on a policy cycle"),
                    })
                    .collect();
                let mut num = W::zero();
                let mut pow = W::one();
                for w in &ws {
                    pow = pow * delta.clone();
                    num = num + pow.clone() * w.clone();
                }
                // V(head) = (sum_i delta^i w_i) / (1 - delta^L)
                let mut v = num / (W::one() - pow);
                values.insert(cycle[0], v.clone());
                for i in 0..cycle.len() - 1 {
                    // V(q) = delta (w + V(next))  =>  V(next) = V(q)/delta - w
                    v = v / delta.clone() - ws[i].clone();
                    values.insert(cycle[i + 1], v.clone());
                }
                stack.truncate(p);
                break;
            }
            match policy[&cur] {
                Action::Stop => {
                    values.insert(cur, W::zero());
                    break;
                }
                Action::Edge(e) => {
                    pos.insert(cur, stack.len());
                    stack.push(cur);
                    cur = g.edges[e].dst;
                }
            }
        }
        // Fold the remaining chain; each element's successor is valued.
        for &q in stack.iter().rev() {
            let Action::Edge(e) = policy[&q] else { unreachable!("chain entries step") };
            let edge = &g.edges[e];
            let v = delta.clone() * (edge.weight.clone() + values[&edge.dst].clone());
            values.insert(q, v);
        }
    }
    values
}

fn disc_fin_emptiness<W: Scalar>(g: &WGraph<W>, delta: &W, lambda: &W) -> Emptiness<W> {
    let finals = &g.accepting_sets[0];
    let reach = reachable(g);
    let coreach = coreachable(g, finals);
    let alive: Vec<bool> = (0..g.state_count).map(|q| reach[q] && coreach[q]).collect();
    if !g.initial.iter().any(|&q| alive[q]) {
        return Emptiness::Empty { infimum: Ext::PosInf };
    }
    let stops: BTreeSet<usize> = finals.iter().copied().filter(|&q| alive[q]).collect();
    let (values, policy) = discounted_optimum(g, &alive, delta, &stops);
    let (start, v_star) = g
        .initial
        .iter()
        .filter(|&&q| alive[q])
        .map(|&q| (q, values[&q].clone()))
        .min_by(|(_, a), (_, b)| a.cmp(b))
        .expect("an initial state is alive");
    if v_star >= *lambda {
        return Emptiness::Empty { infimum: Ext::Fin(v_star) };
    }
    // Follow the optimal policy until it stops or closes a cycle.
    let mut prefix_edges: Vec<usize> = Vec::new();
    let mut seen_at: HashMap<usize, usize> = HashMap::new();
    let mut cur = start;
    let cycle_from = loop {
        match policy[&cur] {
            Action::Stop => break None,
            Action::Edge(e) => {
                if let Some(&p) = seen_at.get(&cur) {
                    break Some(p);
                }
                seen_at.insert(cur, prefix_edges.len());
                prefix_edges.push(e);
                cur = g.edges[e].dst;
            }
        }
    };
    let Some(split) = cycle_from else {
        // The policy run itself is a finite accepting run of value v_star.
        let value = disc_weight_of(g, delta, &prefix_edges);
        debug_assert_eq!(value, v_star);
        return Emptiness::NonEmpty {
            witness: EmptinessWitness::Word { letters: letters_of(g, &prefix_edges), value },
        };
    };
    // stem . cycle^n . exit, with n grown until the exact value drops
    // below lambda. The run value converges to v_star geometrically.
    let cycle: Vec<usize> = prefix_edges[split..].to_vec();
    let stem: Vec<usize> = prefix_edges[..split].to_vec();
    let cycle_start = g.edges[cycle[0]].src;
    let exit = bfs_path(g, &alive, [cycle_start], |q| stops.contains(&q))
        .expect("alive states reach a stop");
    let stem_val = disc_weight_of(g, delta, &stem);
    let cycle_val = disc_weight_of(g, delta, &cycle);
    let exit_val = disc_weight_of(g, delta, &exit);
    let mut pow_stem = crate::wa::pow(delta, stem.len());
    let pow_cycle = crate::wa::pow(delta, cycle.len());
    // value(n) = stem_val + pow(stem)*sum_{j<n} pow(cycle)^j*cycle_val
    //          + pow(stem)*pow(cycle)^n*exit_val
    let mut prefix_val = stem_val;
    let mut n: usize = 0;
    loop {
        let value = prefix_val.clone() + pow_stem.clone() * exit_val.clone();
        if value < *lambda {
            let mut edges = stem.clone();
            for _ in 0..n {
                edges.extend(cycle.iter().copied());
            }
            edges.extend(exit.iter().copied());
            debug_assert_eq!(disc_weight_of(g, delta, &edges), value);
            return Emptiness::NonEmpty {
                witness: EmptinessWitness::Word { letters: letters_of(g, &edges), value },
            };
        }
        prefix_val = prefix_val + pow_stem.clone() * cycle_val.clone();
        pow_stem = pow_stem * pow_cycle.clone();
        n += 1;
    }
}

// ------------------------------------------------------------ limit average

struct LimAvgBest<W> {
    mean: W,
    cycle: Vec<usize>,
    /// States of the component the cycle lives in.
    component: Vec<usize>,
}

/// Minimum cycle mean over reachable components that intersect every
/// accepting set; such a component can host an accepting run of that value.
fn limavg_best<W: Scalar>(g: &WGraph<W>) -> Option<LimAvgBest<W>> {
    let reach = reachable(g);
    let mut best: Option<LimAvgBest<W>> = None;
    for scc in sccs(g, &reach) {
        let members: BTreeSet<usize> = scc.iter().copied().collect();
        if !g.accepting_sets.iter().all(|set| set.iter().any(|q| members.contains(q))) {
            continue;
        }
        let Some((mean, cycle)) = karp_min_mean(g, &scc) else { continue };
        if best.as_ref().map_or(true, |b| mean < b.mean) {
            best = Some(LimAvgBest { mean, cycle, component: scc });
        }
    }
    best
}

fn limavg_emptiness<W: Scalar>(g: &WGraph<W>, lambda: &W) -> Emptiness<W> {
    let Some(best) = limavg_best(g) else {
        return Emptiness::Empty { infimum: Ext::PosInf };
    };
    if best.mean >= *lambda {
        return Emptiness::Empty { infimum: Ext::Fin(best.mean) };
    }
    let reach = reachable(g);
    let in_scc = membership(g.state_count, &best.component);
    let cycle_start = g.edges[best.cycle[0]].src;
    let stem = bfs_path(g, &reach, g.initial.iter().copied(), |q| q == cycle_start)
        .expect("component is reachable");
    // Detour from the cycle through one state of each accepting set not
    // already on the cycle, and back; everything stays in the component.
    let on_cycle: BTreeSet<usize> = best.cycle.iter().map(|&e| g.edges[e].src).collect();
    let mut detour: Vec<usize> = Vec::new();
    let mut at = cycle_start;
    for set in &g.accepting_sets {
        if on_cycle.iter().any(|q| set.contains(q)) {
            continue;
        }
        let hop = bfs_path(g, &in_scc, [at], |q| set.contains(&q))
            .expect("component intersects every accepting set");
        at = hop.last().map_or(at, |&e| g.edges[e].dst);
        detour.extend(hop);
    }
    if at != cycle_start {
        let back = bfs_path(g, &in_scc, [at], |q| q == cycle_start)
            .expect("component is strongly connected");
        detour.extend(back);
    }
    let w_cycle = weight_of(g, &best.cycle);
    let w_detour = weight_of(g, &detour);
    let (l_cycle, l_detour) = (best.cycle.len(), detour.len());
    // mean(cycle^n . detour) < lambda for large n since mean(cycle) < lambda.
    let mut n: usize = 1;
    loop {
        let total_w = from_usize::<W>(n) * w_cycle.clone() + w_detour.clone();
        let total_l = from_usize::<W>(n * l_cycle + l_detour);
        if total_w.clone() / total_l.clone() < *lambda {
            let mut loop_edges = Vec::new();
            for _ in 0..n {
                loop_edges.extend(best.cycle.iter().copied());
            }
            loop_edges.extend(detour.iter().copied());
            let lasso = Lasso::new(letters_of(g, &stem), letters_of(g, &loop_edges))
                .expect("cycle part is non-empty");
            return Emptiness::NonEmpty {
                witness: EmptinessWitness::Lasso { lasso, value: total_w / total_l },
            };
        }
        n *= 2;
    }
}

fn membership(state_count: usize, members: &[usize]) -> Vec<bool> {
    let mut out = vec![false; state_count];
    for &q in members {
        out[q] = true;
    }
    out
}

/// Karp's minimum cycle mean within one strongly connected component, and
/// one cycle attaining it. `None` when the component has no internal edge.
fn karp_min_mean<W: Scalar>(g: &WGraph<W>, scc: &[usize]) -> Option<(W, Vec<usize>)> {
    let local: HashMap<usize, usize> = scc.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let n = scc.len();
    let internal: Vec<usize> = (0..g.edges.len())
        .filter(|&e| {
            local.contains_key(&g.edges[e].src) && local.contains_key(&g.edges[e].dst)
        })
        .collect();
    if internal.is_empty() {
        return None;
    }
    // F[k][v] = min weight of a walk with exactly k edges from scc[0].
    let mut table: Vec<Vec<Option<W>>> = vec![vec![None; n]; n + 1];
    table[0][0] = Some(W::zero());
    for k in 1..=n {
        for &e in &internal {
            let (u, v) = (local[&g.edges[e].src], local[&g.edges[e].dst]);
            if let Some(prev) = &table[k - 1][u] {
                let cand = prev.clone() + g.edges[e].weight.clone();
                if table[k][v].as_ref().map_or(true, |cur| cand < *cur) {
                    table[k][v] = Some(cand);
                }
            }
        }
    }
    let mut mu: Option<W> = None;
    for v in 0..n {
        let Some(fn_v) = &table[n][v] else { continue };
        let mut worst: Option<W> = None;
        for k in 0..n {
            let Some(fk_v) = &table[k][v] else { continue };
            let ratio = (fn_v.clone() - fk_v.clone()) / from_usize::<W>(n - k);
            if worst.as_ref().map_or(true, |w| ratio > *w) {
                worst = Some(ratio);
            }
        }
        let worst = worst.expect("k = 0 walk exists when F_n(v) is finite");
        if mu.as_ref().map_or(true, |m| worst < *m) {
            mu = Some(worst);
        }
    }
    let mu = mu.expect("strongly connected component with an edge has a cycle");
    // Extraction: with weights shifted by -mu, shortest-walk potentials make
    // every edge of every minimum-mean cycle tight, so the tight subgraph
    // contains a cycle and any of its cycles has mean exactly mu.
    let mut dist: Vec<Option<W>> = vec![None; n];
    dist[0] = Some(W::zero());
    for _ in 0..n {
        let mut any = false;
        for &e in &internal {
            let (u, v) = (local[&g.edges[e].src], local[&g.edges[e].dst]);
            if let Some(du) = &dist[u] {
                let cand = du.clone() + g.edges[e].weight.clone() - mu.clone();
                if dist[v].as_ref().map_or(true, |cur| cand < *cur) {
                    dist[v] = Some(cand);
                    any = true;
                }
            }
        }
        if !any {
            break;
        }
    }
    let tight: Vec<usize> = internal
        .iter()
        .copied()
        .filter(|&e| {
            let (u, v) = (local[&g.edges[e].src], local[&g.edges[e].dst]);
            match (&dist[u], &dist[v]) {
                (Some(du), Some(dv)) => {
                    du.clone() + g.edges[e].weight.clone() - mu.clone() == *dv
                }
                _ => false,
            }
        })
        .collect();
    // Iterative DFS over tight edges; the first back edge closes a cycle.
    let mut tight_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in &tight {
        tight_adj[local[&g.edges[e].src]].push(e);
    }
    let mut color = vec![0u8; n]; // 0 new, 1 on stack, 2 done
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        // Stack of (node, next edge index to try).
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut entered: Vec<Option<usize>> = vec![None; n];
        color[root] = 1;
        while !stack.is_empty() {
            let (v, i) = *stack.last().expect("loop guard");
            if i >= tight_adj[v].len() {
                color[v] = 2;
                stack.pop();
                continue;
            }
            stack.last_mut().expect("loop guard").1 += 1;
            let e = tight_adj[v][i];
            let w = local[&g.edges[e].dst];
            match color[w] {
                0 => {
                    color[w] = 1;
                    entered[w] = Some(e);
                    stack.push((w, 0));
                }
                1 => {
                    // Back edge: w .. v on the stack, then e closes the cycle.
                    let mut cycle = vec![e];
                    let mut cur = v;
                    while cur != w {
                        let back = entered[cur].expect("on-stack node was entered");
                        cycle.push(back);
                        cur = local[&g.edges[back].src];
                    }
                    cycle.reverse();
                    let mean = weight_of(g, &cycle) / from_usize::<W>(cycle.len());
                    debug_assert_eq!(mean, mu);
                    return Some((mu, cycle));
                }
                _ => {}
            }
        }
    }
    unreachable!("tight subgraph always contains a minimum-mean cycle")
}

// ----------------------------------------------------- discounted, infinite

struct DiscInfBest<W> {
    value: W,
    start: usize,
    policy: HashMap<usize, Action>,
    alive: Vec<bool>,
    /// States of good components (intersecting every accepting set).
    good: Vec<bool>,
}

/// Infimum over Buchi-accepting infinite runs of the discounted sum. Equals
/// the unconstrained optimum over the live subgraph: discounted tails fade,
/// so rerouting any run into a good component changes its value by an
/// arbitrarily small amount.
fn disc_inf_best<W: Scalar>(g: &WGraph<W>, delta: &W) -> Option<DiscInfBest<W>> {
    let reach = reachable(g);
    let mut good = vec![false; g.state_count];
    for scc in sccs(g, &vec![true; g.state_count]) {
        let members: BTreeSet<usize> = scc.iter().copied().collect();
        let has_edge = g
            .edges
            .iter()
            .any(|e| members.contains(&e.src) && members.contains(&e.dst));
        if !has_edge {
            continue;
        }
        if g.accepting_sets.iter().all(|set| set.iter().any(|q| members.contains(q))) {
            for &q in &scc {
                good[q] = true;
            }
        }
    }
    let good_set: BTreeSet<usize> = (0..g.state_count).filter(|&q| good[q]).collect();
    if good_set.is_empty() {
        return None;
    }
    let live = coreachable(g, &good_set);
    let alive: Vec<bool> = (0..g.state_count).map(|q| reach[q] && live[q]).collect();
    if !g.initial.iter().any(|&q| alive[q]) {
        return None;
    }
    let (values, policy) = discounted_optimum(g, &alive, delta, &BTreeSet::new());
    let (start, value) = g
        .initial
        .iter()
        .filter(|&&q| alive[q])
        .map(|&q| (q, values[&q].clone()))
        .min_by(|(_, a), (_, b)| a.cmp(b))
        .expect("an initial state is alive");
    Some(DiscInfBest { value, start, policy, alive, good })
}

fn disc_inf_emptiness<W: Scalar>(g: &WGraph<W>, delta: &W, lambda: &W) -> Emptiness<W> {
    let Some(best) = disc_inf_best(g, delta) else {
        return Emptiness::Empty { infimum: Ext::PosInf };
    };
    if best.value >= *lambda {
        return Emptiness::Empty { infimum: Ext::Fin(best.value) };
    }
    // The optimal policy run is stem . policy-cycle^omega, possibly outside
    // the good components. Splice: stem . cycle^n . bridge . (f-cycle)^omega
    // with n grown until the exact run value drops below lambda.
    let mut prefix_edges: Vec<usize> = Vec::new();
    let mut seen_at: HashMap<usize, usize> = HashMap::new();
    let mut cur = best.start;
    let split = loop {
        if let Some(&p) = seen_at.get(&cur) {
            break p;
        }
        let Action::Edge(e) = best.policy[&cur] else {
            unreachable!("no stops in the infinite-run optimum")
        };
        seen_at.insert(cur, prefix_edges.len());
        prefix_edges.push(e);
        cur = g.edges[e].dst;
    };
    let cycle: Vec<usize> = prefix_edges[split..].to_vec();
    let stem: Vec<usize> = prefix_edges[..split].to_vec();
    let cycle_start = g.edges[cycle[0]].src;
    let bridge = bfs_path(g, &best.alive, [cycle_start], |q| best.good[q])
        .expect("live states reach a good component");
    let g0 = bridge.last().map_or(cycle_start, |&e| g.edges[e].dst);
    // An accepting cycle from g0 through one state of each set, inside the
    // good component of g0.
    let scc_of_g0 = sccs(g, &best.good)
        .into_iter()
        .find(|scc| scc.contains(&g0))
        .expect("g0 lies in a good component");
    let in_scc = membership(g.state_count, &scc_of_g0);
    let f_cycle = accepting_cycle_through(g, &in_scc, g0, &g.accepting_sets);
    // Exact value of stem . cycle^n . bridge . f-cycle^omega.
    let stem_val = disc_weight_of(g, delta, &stem);
    let cycle_val = disc_weight_of(g, delta, &cycle);
    let bridge_val = disc_weight_of(g, delta, &bridge);
    let f_val = disc_weight_of(g, delta, &f_cycle);
    let pow_f = crate::wa::pow(delta, f_cycle.len());
    let f_omega = f_val / (W::one() - pow_f); // value of f-cycle^omega from its start
    let tail_val = bridge_val + crate::wa::pow(delta, bridge.len()) * f_omega;
    let pow_cycle = crate::wa::pow(delta, cycle.len());
    let mut prefix_val = stem_val;
    let mut pow_prefix = crate::wa::pow(delta, stem.len());
    let mut pumps: usize = 0;
    loop {
        let value = prefix_val.clone() + pow_prefix.clone() * tail_val.clone();
        if value < *lambda {
            let mut stem_edges = stem.clone();
            for _ in 0..pumps {
                stem_edges.extend(cycle.iter().copied());
            }
            stem_edges.extend(bridge.iter().copied());
            let lasso = Lasso::new(letters_of(g, &stem_edges), letters_of(g, &f_cycle))
                .expect("accepting cycle is non-empty");
            return Emptiness::NonEmpty {
                witness: EmptinessWitness::Lasso { lasso, value },
            };
        }
        prefix_val = prefix_val + pow_prefix.clone() * cycle_val.clone();
        pow_prefix = pow_prefix * pow_cycle.clone();
        pumps += 1;
    }
}

/// A non-empty cycle from `anchor` back to itself inside one strongly
/// connected component, visiting at least one state of every accepting set.
fn accepting_cycle_through<W: Scalar>(
    g: &WGraph<W>,
    in_scc: &[bool],
    anchor: usize,
    accepting_sets: &[BTreeSet<usize>],
) -> Vec<usize> {
    let mut cycle: Vec<usize> = Vec::new();
    let mut at = anchor;
    for set in accepting_sets {
        if set.contains(&at) || cycle.iter().any(|&e| set.contains(&g.edges[e].dst)) {
            continue;
        }
        let hop = bfs_path(g, in_scc, [at], |q| set.contains(&q))
            .expect("component intersects every accepting set");
        at = hop.last().map_or(at, |&e| g.edges[e].dst);
        cycle.extend(hop);
    }
    if at != anchor {
        let back = bfs_path(g, in_scc, [at], |q| q == anchor)
            .expect("component is strongly connected");
        cycle.extend(back);
    }
    if cycle.is_empty() {
        // The anchor alone satisfies every set; close a shortest non-empty
        // loop through any internal successor.
        let adj = by_src(g);
        for &e in &adj[anchor] {
            let d = g.edges[e].dst;
            if !in_scc[d] {
                continue;
            }
            if d == anchor {
                return vec![e];
            }
            if let Some(rest) = bfs_path(g, in_scc, [d], |q| q == anchor) {
                let mut path = vec![e];
                path.extend(rest);
                return path;
            }
        }
        unreachable!("nontrivial component has a cycle through each state")
    }
    cycle
}

// ------------------------------------------------------------ lasso product

/// Synchronous product of an automaton with an ultimately periodic word.
/// States are (position class, automaton state); accepting sets lift by
/// the automaton component.
fn lasso_product<W: Scalar>(wa: &WeightedAutomaton<W>, lasso: &Lasso<Letter>) -> WGraph<W> {
    let s = lasso.stem.len();
    let c = lasso.cycle.len();
    let total = s + c;
    let letter_at = |pos: usize| -> &Letter {
        if pos < s {
            &lasso.stem[pos]
        } else {
            &lasso.cycle[pos - s]
        }
    };
    let next_pos = |pos: usize| -> usize {
        if pos + 1 < total {
            pos + 1
        } else {
            s
        }
    };
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states: Vec<(usize, usize)> = Vec::new();
    let mut edges: Vec<GEdge<W>> = Vec::new();
    for &q in wa.initial() {
        index.insert((0, q), states.len());
        states.push((0, q));
    }
    let mut head = 0;
    while head < states.len() {
        let (pos, q) = states[head];
        let want = letter_at(pos).clone();
        let np = next_pos(pos);
        for t in wa.transitions_from(q) {
            if t.letter != want {
                continue;
            }
            let key = (np, t.dst);
            let dst = *index.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            edges.push(GEdge { src: head, letter: t.letter.clone(), weight: t.weight.clone(), dst });
        }
        head += 1;
    }
    let accepting_sets = vec![states
        .iter()
        .enumerate()
        .filter(|(_, (_, q))| wa.accepting().contains(q))
        .map(|(i, _)| i)
        .collect()];
    WGraph {
        state_count: states.len(),
        // Initial product states were interned first, in order.
        initial: (0..wa.initial().len()).collect(),
        accepting_sets,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::wa_tests::*;
    use crate::Q;

    fn assert_word_witness(e: &Emptiness<Q>, lambda: &Q) -> (Vec<Letter>, Q) {
        match e {
            Emptiness::NonEmpty { witness: EmptinessWitness::Word { letters, value } } => {
                assert!(value < lambda, "witness value {value} not below {lambda}");
                (letters.clone(), value.clone())
            }
            other => panic!("expected word witness, got {other:?}"),
        }
    }

    fn assert_lasso_witness(e: &Emptiness<Q>, lambda: &Q) -> (Lasso<Letter>, Q) {
        match e {
            Emptiness::NonEmpty { witness: EmptinessWitness::Lasso { lasso, value } } => {
                assert!(value < lambda, "witness value {value} not below {lambda}");
                (lasso.clone(), value.clone())
            }
            other => panic!("expected lasso witness, got {other:?}"),
        }
    }

    #[test]
    fn sum_empty_reports_finite_infimum() {
        let a = wa(
            &["a"],
            ValueFunction::Sum,
            "p q",
            "p",
            "q",
            &[("p", "a", "3", "q"), ("q", "a", "1", "q")],
        );
        match emptiness_below(&a, &q("3")).unwrap() {
            Emptiness::Empty { infimum } => assert_eq!(infimum, fin("3")),
            other => panic!("expected empty, got {other:?}"),
        }
    }

    #[test]
    fn sum_strictness_matters_at_the_threshold() {
        let a = wa(&["a"], ValueFunction::Sum, "p q", "p", "q", &[("p", "a", "3", "q")]);
        assert!(matches!(emptiness_below(&a, &q("3")).unwrap(), Emptiness::Empty { .. }));
        let e = emptiness_below(&a, &q("7/2")).unwrap();
        let (letters, value) = assert_word_witness(&e, &q("7/2"));
        assert_eq!(letters.len(), 1);
        assert_eq!(value, q("3"));
    }

    #[test]
    fn sum_negative_cycle_pumps_past_any_threshold() {
        let a = wa(
            &["a b"],
            ValueFunction::Sum,
            "p q",
            "p",
            "q",
            &[("p", "a", "-1", "p"), ("p", "b", "0", "q")],
        );
        let lam = q("-100");
        let e = emptiness_below(&a, &lam).unwrap();
        let (letters, value) = assert_word_witness(&e, &lam);
        // Re-evaluate the witness word independently.
        assert_eq!(a.evaluate(&letters).unwrap(), Ext::Fin(value));
    }

    #[test]
    fn sum_unreachable_accepting_is_empty_at_any_threshold() {
        let a = wa(&["a"], ValueFunction::Sum, "p q", "p", "q", &[("q", "a", "-1", "q")]);
        match emptiness_below(&a, &q("-1000000")).unwrap() {
            Emptiness::Empty { infimum } => assert_eq!(infimum, Ext::PosInf),
            other => panic!("expected empty, got {other:?}"),
        }
    }

    #[test]
    fn sum_empty_word_witness() {
        let a = wa(&["a"], ValueFunction::Sum, "p", "p", "p", &[("p", "a", "1", "p")]);
        let e = emptiness_below(&a, &q("1/2")).unwrap();
        let (letters, value) = assert_word_witness(&e, &q("1/2"));
        assert!(letters.is_empty());
        assert_eq!(value, q("0"));
    }

    #[test]
    fn discounted_unattained_infimum() {
        // a^n has value -(1 - 2^-n): infimum -1, never attained.
        let a = wa(
            &["a"],
            ValueFunction::DiscountedFinite(q("1/2")),
            "p",
            "p",
            "p",
            &[("p", "a", "-1", "p")],
        );
        match emptiness_below(&a, &q("-1")).unwrap() {
            Emptiness::Empty { infimum } => assert_eq!(infimum, fin("-1")),
            other => panic!("expected empty, got {other:?}"),
        }
        let lam = q("-9/10");
        let e = emptiness_below(&a, &lam).unwrap();
        let (letters, value) = assert_word_witness(&e, &lam);
        assert!(letters.len() >= 4, "need at least four letters, got {}", letters.len());
        assert_eq!(a.evaluate(&letters).unwrap(), Ext::Fin(value));
    }

    #[test]
    fn discounted_stop_versus_continue() {
        // Stopping at the initial state gives 0; one more step gives -5.
        let a = wa(
            &["a"],
            ValueFunction::DiscountedFinite(q("1/2")),
            "p q",
            "p",
            "p q",
            &[("p", "a", "-10", "q")],
        );
        let lam = q("-4");
        let e = emptiness_below(&a, &lam).unwrap();
        let (letters, value) = assert_word_witness(&e, &lam);
        assert_eq!(value, q("-5"));
        assert_eq!(letters.len(), 1);
    }

    #[test]
    fn limavg_min_mean_over_accepting_components() {
        // Mean -1 loop at accepting q; the initial loop has mean 1.
        let a = wa(
            &["a b"],
            ValueFunction::LimitAverage,
            "p q",
            "p",
            "q",
            &[("p", "a", "1", "p"), ("p", "b", "0", "q"), ("q", "a", "-1", "q")],
        );
        let lam = q("0");
        let e = emptiness_below(&a, &lam).unwrap();
        let (lasso, value) = assert_lasso_witness(&e, &lam);
        assert_eq!(value, q("-1"));
        assert_eq!(evaluate_lasso(&a, &lasso).unwrap(), Ext::Fin(value));
    }

    #[test]
    fn limavg_ignores_components_missing_accepting_states() {
        // The cheap loop cannot accept; only the mean-2 loop counts.
        let a = wa(
            &["a"],
            ValueFunction::LimitAverage,
            "p q r",
            "p",
            "q",
            &[("p", "a", "0", "q"), ("q", "a", "2", "q"), ("p", "a", "0", "r"), ("r", "a", "-5", "r")],
        );
        match emptiness_below(&a, &q("2")).unwrap() {
            Emptiness::Empty { infimum } => assert_eq!(infimum, fin("2")),
            other => panic!("expected empty, got {other:?}"),
        }
    }

    #[test]
    fn limavg_detour_keeps_acceptance_while_tracking_the_cheap_cycle() {
        // Accepting state sits off the cheap cycle but in the same
        // component: the witness must still dip below the threshold.
        let a = wa(
            &["a b"],
            ValueFunction::LimitAverage,
            "p f",
            "p",
            "f",
            &[("p", "a", "0", "p"), ("p", "b", "10", "f"), ("f", "a", "10", "p")],
        );
        let lam = q("1");
        let e = emptiness_below(&a, &lam).unwrap();
        let (lasso, value) = assert_lasso_witness(&e, &lam);
        let exact = evaluate_lasso(&a, &lasso).unwrap();
        assert!(exact <= Ext::Fin(value));
        assert!(exact < Ext::Fin(lam));
    }

    #[test]
    fn disc_inf_geometric_loop_value() {
        // Infinite run on weight -1 at delta 1/2 is exactly -1.
        let a = wa(
            &["a"],
            ValueFunction::DiscountedInfinite(q("1/2")),
            "p",
            "p",
            "p",
            &[("p", "a", "-1", "p")],
        );
        match emptiness_below(&a, &q("-1")).unwrap() {
            Emptiness::Empty { infimum } => assert_eq!(infimum, fin("-1")),
            other => panic!("expected empty, got {other:?}"),
        }
        let lam = q("-99/100");
        let e = emptiness_below(&a, &lam).unwrap();
        let (lasso, value) = assert_lasso_witness(&e, &lam);
        assert_eq!(evaluate_lasso(&a, &lasso).unwrap(), Ext::Fin(value));
    }

    #[test]
    fn disc_inf_must_keep_acceptance_reachable() {
        // The cheap loop at r is a dead end (no accepting state ever
        // again); the only accepting run cycles at f with weight 1.
        let a = wa(
            &["a b"],
            ValueFunction::DiscountedInfinite(q("1/2")),
            "p r f",
            "p",
            "f",
            &[
                ("p", "a", "-100", "r"),
                ("r", "a", "-100", "r"),
                ("p", "b", "1", "f"),
                ("f", "b", "1", "f"),
            ],
        );
        // Value of the accepting run: sum_i 2^-i = 1.
        match emptiness_below(&a, &q("1")).unwrap() {
            Emptiness::Empty { infimum } => assert_eq!(infimum, fin("1")),
            other => panic!("expected empty, got {other:?}"),
        }
        let lam = q("2");
        let e = emptiness_below(&a, &lam).unwrap();
        let (lasso, value) = assert_lasso_witness(&e, &lam);
        assert_eq!(evaluate_lasso(&a, &lasso).unwrap(), Ext::Fin(value));
    }

    #[test]
    fn disc_inf_splices_through_a_bridge() {
        // Optimal discounted behaviour pumps the cheap non-accepting loop
        // before bridging into the accepting one; the witness must be a
        // real accepting lasso below the threshold.
        let a = wa(
            &["a b"],
            ValueFunction::DiscountedInfinite(q("1/2")),
            "p f",
            "p",
            "f",
            &[("p", "a", "-8", "p"), ("p", "b", "0", "f"), ("f", "b", "3", "f")],
        );
        // Staying at p forever would be -8; accepting runs approach it by
        // pumping p. Ask for anything below -7.
        let lam = q("-7");
        let e = emptiness_below(&a, &lam).unwrap();
        let (lasso, value) = assert_lasso_witness(&e, &lam);
        assert_eq!(evaluate_lasso(&a, &lasso).unwrap(), Ext::Fin(value));
    }

    #[test]
    fn min_mean_cycle_spans_all_components() {
        let a = wa(
            &["a"],
            ValueFunction::Sum,
            "p q",
            "p",
            "q",
            &[("p", "a", "4", "p"), ("q", "a", "-2", "q"), ("p", "a", "0", "q")],
        );
        let g = wa_graph(&a);
        let (mean, cycle) = min_mean_cycle(&g).unwrap();
        assert_eq!(mean, q("-2"));
        assert_eq!(cycle.len(), 1);
    }

    #[test]
    fn evaluate_lasso_prefers_the_cheapest_accepting_run() {
        // Nondeterministic on (a,a): loop of mean 3 or of mean 5.
        let a = wa(
            &["a b"],
            ValueFunction::LimitAverage,
            "p q r",
            "p",
            "q r",
            &[
                ("p", "a", "0", "q"),
                ("p", "a", "0", "r"),
                ("q", "a", "3", "q"),
                ("r", "a", "5", "r"),
            ],
        );
        let l = Lasso::new(letters("a"), letters("a")).unwrap();
        assert_eq!(evaluate_lasso(&a, &l).unwrap(), fin("3"));
    }

    #[test]
    fn evaluate_lasso_rejects_when_no_run_fits() {
        let a = wa(&["a b"], ValueFunction::LimitAverage, "p", "p", "p", &[("p", "a", "1", "p")]);
        let l = Lasso::new(vec![], letters("b")).unwrap();
        assert_eq!(evaluate_lasso(&a, &l).unwrap(), Ext::PosInf);
    }
}
