use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::ir::{Cmp, LinearConstraint, Piece, Rational, ReachInstance};
use crate::lp;

use super::affine::AffineForm;
use super::{SearchStats, SolveError, SolverConfig};

/// Linear constraints on the inputs carved out by fixing `piece` for a
/// node whose pre-activation is the affine form `s`.
pub(super) fn piece_domain_rows(piece: &Piece, s: &AffineForm) -> Vec<LinearConstraint> {
    let mut rows = Vec::new();
    if piece.is_point() {
        let v = piece.lo.as_ref().expect("point piece has finite endpoints");
        rows.push(LinearConstraint::new(
            s.coeffs.clone(),
            Cmp::Eq,
            v - &s.constant,
        ));
        return rows;
    }
    if let Some(v) = &piece.lo {
        // s(x) ≥ v  ⇔  -s_coeffs·x ≤ s_const - v (strict when open)
        rows.push(LinearConstraint::new(
            s.coeffs.iter().map(|c| -c).collect(),
            if piece.lo_closed { Cmp::Le } else { Cmp::Lt },
            &s.constant - v,
        ));
    }
    if let Some(v) = &piece.hi {
        // s(x) ≤ v  ⇔  s_coeffs·x ≤ v - s_const (strict when open)
        rows.push(LinearConstraint::new(
            s.coeffs.clone(),
            if piece.hi_closed { Cmp::Le } else { Cmp::Lt },
            v - &s.constant,
        ));
    }
    rows
}

/// Output-specification row re-expressed over the inputs given the final
/// layer's affine forms.
pub(super) fn output_row(
    row: &LinearConstraint,
    out_forms: &[&AffineForm],
    n: usize,
) -> LinearConstraint {
    let g = AffineForm::combine(&row.coeffs, out_forms, &Rational::zero(), n);
    LinearConstraint::new(g.coeffs, row.cmp, &row.rhs - &g.constant)
}

struct Search<'a> {
    inst: &'a ReachInstance,
    /// (layer, node) in layer-major order; within a layer, nodes with
    /// more pieces branch first. Pieces themselves are tried in
    /// declaration order.
    plan: Vec<(usize, usize)>,
    input_forms: Vec<AffineForm>,
    budget: Option<u64>,
    lp_calls: AtomicU64,
    nodes_expanded: AtomicU64,
}

#[derive(Clone)]
struct PathState {
    y_forms: Vec<Vec<Option<AffineForm>>>,
    constraints: Vec<LinearConstraint>,
}

impl<'a> Search<'a> {
    fn new(inst: &'a ReachInstance, cfg: &SolverConfig) -> Self {
        let n = inst.network.input_dim();
        let mut plan = Vec::with_capacity(inst.network.node_count());
        for (li, layer) in inst.network.layers().iter().enumerate() {
            let mut nodes: Vec<usize> = (0..layer.width()).collect();
            nodes.sort_by_key(|&i| {
                (
                    std::cmp::Reverse(layer.activations[i].piece_count()),
                    i,
                )
            });
            plan.extend(nodes.into_iter().map(|i| (li, i)));
        }
        Search {
            inst,
            plan,
            input_forms: (0..n).map(|j| AffineForm::input(n, j)).collect(),
            budget: cfg.budget,
            lp_calls: AtomicU64::new(0),
            nodes_expanded: AtomicU64::new(0),
        }
    }

    fn n(&self) -> usize {
        self.inst.network.input_dim()
    }

    fn initial_state(&self) -> PathState {
        PathState {
            y_forms: self
                .inst
                .network
                .layers()
                .iter()
                .map(|l| vec![None; l.width()])
                .collect(),
            constraints: self.inst.input_spec.constraints.clone(),
        }
    }

    fn stats(&self) -> SearchStats {
        SearchStats {
            lp_calls: self.lp_calls.load(Ordering::Relaxed),
            nodes_expanded: self.nodes_expanded.load(Ordering::Relaxed),
        }
    }

    fn bump_expanded(&self) -> Result<(), SolveError> {
        let expanded = self.nodes_expanded.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(b) = self.budget {
            if expanded > b {
                return Err(SolveError::BudgetExhausted { expanded });
            }
        }
        Ok(())
    }

    fn lp_feasible(&self, rows: &[LinearConstraint]) -> bool {
        self.lp_calls.fetch_add(1, Ordering::Relaxed);
        lp::feasible_rows(self.n(), rows).is_feasible()
    }

    fn pre_activation(&self, state: &PathState, layer: usize, node: usize) -> AffineForm {
        let l = &self.inst.network.layers()[layer];
        let prev: Vec<&AffineForm> = if layer == 0 {
            self.input_forms.iter().collect()
        } else {
            state.y_forms[layer - 1]
                .iter()
                .map(|f| f.as_ref().expect("previous layer fully assigned"))
                .collect()
        };
        AffineForm::combine(&l.weights[node], &prev, &l.biases[node], self.n())
    }

    /// Leaf check: all nodes assigned, add the output rows and solve.
    fn check_leaf(&self, state: &mut PathState) -> Option<Vec<Rational>> {
        let mark = state.constraints.len();
        let last = state.y_forms.last().expect("network has layers");
        let out_forms: Vec<&AffineForm> = last
            .iter()
            .map(|f| f.as_ref().expect("leaf state fully assigned"))
            .collect();
        let rows: Vec<LinearConstraint> = self
            .inst
            .output_spec
            .constraints
            .iter()
            .map(|c| output_row(c, &out_forms, self.n()))
            .collect();
        state.constraints.extend(rows);
        self.lp_calls.fetch_add(1, Ordering::Relaxed);
        let verdict = lp::feasible_rows(self.n(), &state.constraints);
        state.constraints.truncate(mark);
        verdict.witness
    }

    fn dfs(&self, state: &mut PathState, depth: usize) -> Result<Option<Vec<Rational>>, SolveError> {
        if depth == self.plan.len() {
            return Ok(self.check_leaf(state));
        }
        let (layer, node) = self.plan[depth];
        let s = self.pre_activation(state, layer, node);
        let act = &self.inst.network.layers()[layer].activations[node];
        let branching = act.piece_count() > 1;
        for piece in act.pieces() {
            let mark = state.constraints.len();
            state
                .constraints
                .extend(piece_domain_rows(piece, &s));
            state.y_forms[layer][node] = Some(s.scale_shift(&piece.slope, &piece.intercept));
            let mut pruned = false;
            if branching {
                self.bump_expanded().inspect_err(|_| {
                    state.constraints.truncate(mark);
                    state.y_forms[layer][node] = None;
                })?;
                // The leaf LP subsumes this relaxation, so skip the check
                // when the child is the leaf.
                if depth + 1 < self.plan.len() && !self.lp_feasible(&state.constraints) {
                    pruned = true;
                }
            }
            let found = if pruned { None } else { self.dfs(state, depth + 1)? };
            state.constraints.truncate(mark);
            state.y_forms[layer][node] = None;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Breadth-first expansion of the first branching levels, used to
    /// split work across threads. Items keep their own path state.
    fn frontier(
        &self,
        target: usize,
    ) -> Result<(Vec<PathState>, usize), SolveError> {
        let mut depth = 0;
        let mut items = vec![self.initial_state()];
        while items.len() < target && depth < self.plan.len() {
            let (layer, node) = self.plan[depth];
            let act = &self.inst.network.layers()[layer].activations[node];
            let branching = act.piece_count() > 1;
            let mut next = Vec::with_capacity(items.len() * act.piece_count());
            for state in items {
                let s = self.pre_activation(&state, layer, node);
                for piece in act.pieces() {
                    let mut child = state.clone();
                    child
                        .constraints
                        .extend(piece_domain_rows(piece, &s));
                    child.y_forms[layer][node] = Some(s.scale_shift(&piece.slope, &piece.intercept));
                    if branching {
                        self.bump_expanded()?;
                        if depth + 1 < self.plan.len() && !self.lp_feasible(&child.constraints) {
                            continue;
                        }
                    }
                    next.push(child);
                }
            }
            items = next;
            depth += 1;
            if items.is_empty() {
                break;
            }
        }
        Ok((items, depth))
    }
}

pub(super) fn run(
    inst: &ReachInstance,
    cfg: &SolverConfig,
) -> Result<(Option<Vec<Rational>>, SearchStats), SolveError> {
    let search = Search::new(inst, cfg);
    if cfg.threads <= 1 {
        let mut state = search.initial_state();
        let witness = search.dfs(&mut state, 0)?;
        return Ok((witness, search.stats()));
    }

    let (frontier, depth) = search.frontier(cfg.threads * 4)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .expect("thread pool");
    let outcome: Option<Result<Vec<Rational>, SolveError>> = pool.install(|| {
        frontier
            .into_par_iter()
            .find_map_any(|mut state| match search.dfs(&mut state, depth) {
                Ok(Some(witness)) => Some(Ok(witness)),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            })
    });
    let witness = match outcome {
        Some(Ok(w)) => Some(w),
        Some(Err(e)) => return Err(e),
        None => None,
    };
    Ok((witness, search.stats()))
}
