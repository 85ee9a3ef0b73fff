//! Linear complementarity formulation of the Total Effort game and a
//! Lemke pivotal solver.
//!
//! A profile `s` is an equilibrium exactly when `z = [s; mu]` solves
//! `LCP(q, M)` with `q = [-d o (1 - X); 1]` and `M = [[A + I, I], [-I, 0]]`:
//! the first block encodes the interior first-order conditions with upper
//! bound multipliers `mu`, the second block encodes `s <= 1`. `M` is
//! copositive by construction (`x' M x = x_1' (A + I) x_1 >= 0`), which is
//! the structural property behind Lemke convergence; [`check_copositive`]
//! probes it numerically.
//!
//! Players whose full investment is dominant (no interior critical point)
//! are eliminated before assembly: their `s_i = 1` is folded into the
//! neighbors' constant terms and restored in [`extract_profile`].

use crate::critical::CriticalError;
use crate::total_effort::{
    attack_probabilities, node_kinds, verify_pne, EquilibriumReport, GameError, GameSpec,
    NodeKind, SolveMethod, StrategyProfile, DEFAULT_VERIFY_TOL,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Entries smaller than this never serve as pivots.
pub const PIVOT_TOL: f64 = 1e-11;

/// Slack allowed on `z >= 0` and `q + Mz >= 0` for a solved instance.
pub const SOLUTION_SLACK: f64 = 1e-9;

/// Cap on `|z . (q + Mz)|` for a solved instance.
pub const COMPLEMENTARITY_TOL: f64 = 1e-7;

/// Largest clamp [`extract_profile`] applies silently.
pub const CLAMP_INTEGRITY_TOL: f64 = 1e-7;

/// Errors from LCP assembly and solution extraction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LcpError {
    #[error("solver finished with status {status:?}, not Solved")]
    NotSolved { status: LemkeStatus },
    #[error("investment for node {node} off by {magnitude} before clamping")]
    ClampIntegrity { node: usize, magnitude: f64 },
    #[error("permutation is not a bijection on 0..{n}")]
    InvalidPermutation { n: usize },
    #[error(transparent)]
    Game(#[from] GameError),
}

impl From<CriticalError> for LcpError {
    fn from(e: CriticalError) -> Self {
        LcpError::Game(GameError::Critical(e))
    }
}

/// An assembled complementarity problem plus the node bookkeeping needed
/// to map solutions back onto the game.
#[derive(Debug, Clone, PartialEq)]
pub struct LcpInstance {
    /// Constant vector, length `2n`.
    pub q: DVector<f64>,
    /// Problem matrix, `2n x 2n`.
    pub m: DMatrix<f64>,
    /// Number of retained players (half the problem dimension).
    pub n: usize,
    /// Game node ids (1-based) of the retained players, in block order.
    pub kept: Vec<usize>,
    /// Game node ids eliminated with `s = 1` before assembly.
    pub dominant: Vec<usize>,
}

impl LcpInstance {
    /// Plain-text dump: a size line, then `2n` entries of `q`, then the
    /// `2n` rows of `M`, space-separated.
    pub fn dump(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for value in self.q.iter() {
            out.push_str(&format!("{value:.17e}\n"));
        }
        for r in 0..self.m.nrows() {
            let row: Vec<String> = (0..self.m.ncols())
                .map(|c| format!("{:.17e}", self.m[(r, c)]))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// How a Lemke run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemkeStatus {
    Solved,
    RayTermination,
    IterLimit,
}

/// A Lemke run's outcome: `z = [s; mu]` over the retained players.
#[derive(Debug, Clone, PartialEq)]
pub struct LcpSolution {
    pub z: DVector<f64>,
    pub status: LemkeStatus,
    pub pivots: usize,
}

/// Assembles the complementarity problem for a Total Effort game.
///
/// Linear-weighting players are rejected (their response has no critical
/// point); players with full investment dominant are eliminated and their
/// unit investment folded into the neighbors' constants.
pub fn build_lcp(game: &GameSpec) -> Result<LcpInstance, LcpError> {
    if game.externality() != crate::total_effort::Externality::TotalEffort {
        return Err(LcpError::Game(GameError::WrongExternality {
            want: crate::total_effort::Externality::TotalEffort,
            got: game.externality(),
        }));
    }
    let kinds = node_kinds(game)?;
    let mut kept = Vec::new();
    let mut dominant = Vec::new();
    let mut targets = Vec::new();
    for (idx, kind) in kinds.iter().enumerate() {
        match kind {
            NodeKind::Interior { target, .. } => {
                kept.push(idx + 1);
                targets.push(*target);
            }
            NodeKind::Dominant => dominant.push(idx + 1),
            NodeKind::RiskNeutral { .. } => {
                return Err(LcpError::from(CriticalError::LinearWeighting));
            }
        }
    }
    let k = kept.len();
    let mut local = vec![usize::MAX; game.n() + 1];
    for (pos, &id) in kept.iter().enumerate() {
        local[id] = pos;
    }
    let dominant_mask: Vec<bool> = {
        let mut mask = vec![false; game.n() + 1];
        for &id in &dominant {
            mask[id] = true;
        }
        mask
    };
    let mut q = DVector::zeros(2 * k);
    let mut m = DMatrix::zeros(2 * k, 2 * k);
    for (pos, &id) in kept.iter().enumerate() {
        let folded = game
            .graph()
            .neighbors(id)
            .iter()
            .filter(|&&j| dominant_mask[j])
            .count() as f64;
        q[pos] = -(targets[pos] - folded);
        q[k + pos] = 1.0;
        m[(pos, pos)] = 1.0;
        for &j in game.graph().neighbors(id) {
            if local[j] != usize::MAX {
                m[(pos, local[j])] = 1.0;
            }
        }
        m[(pos, k + pos)] = 1.0;
        m[(k + pos, pos)] = -1.0;
    }
    Ok(LcpInstance {
        q,
        m,
        n: k,
        kept,
        dominant,
    })
}

/// Lexicographic strictly-less on ratio vectors.
fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        let scale = x.abs().max(y.abs()).max(1.0);
        if (x - y).abs() > 1e-12 * scale {
            return x < y;
        }
    }
    false
}

/// Lemke's method with a covering vector of ones and lexicographic ratio
/// tests. The tableau is `[B^-1 | -B^-1 M | -B^-1 1 | B^-1 q]`; carrying
/// the leading identity block gives the tie-breaking rows directly.
fn lemke_tableau(q: &DVector<f64>, m: &DMatrix<f64>, max_pivots: usize) -> LcpSolution {
    let dim = q.len();
    if dim == 0 || q.iter().all(|&v| v >= 0.0) {
        return LcpSolution {
            z: DVector::zeros(dim),
            status: LemkeStatus::Solved,
            pivots: 0,
        };
    }
    let z0_col = 2 * dim;
    let q_col = 2 * dim + 1;
    let mut t = vec![vec![0.0f64; 2 * dim + 2]; dim];
    for (r, row) in t.iter_mut().enumerate() {
        row[r] = 1.0;
        for c in 0..dim {
            row[dim + c] = -m[(r, c)];
        }
        row[z0_col] = -1.0;
        row[q_col] = q[r];
    }
    let mut basis: Vec<usize> = (0..dim).collect();

    let pivot = |t: &mut Vec<Vec<f64>>, r: usize, col: usize| {
        let p = t[r][col];
        for v in t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col];
            if factor == 0.0 {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
        }
    };

    // First pivot: the covering variable enters against the most negative
    // constant; ties break toward the smallest row so the basis stays
    // lexicographically positive.
    let mut r = 0;
    for i in 1..dim {
        if t[i][q_col] < t[r][q_col] - 1e-15 {
            r = i;
        }
    }
    let mut leaving = basis[r];
    pivot(&mut t, r, z0_col);
    basis[r] = z0_col;
    let mut pivots = 1;

    let status = loop {
        let entering = if leaving < dim {
            dim + leaving
        } else {
            leaving - dim
        };
        let mut choice: Option<(usize, Vec<f64>)> = None;
        for (i, row) in t.iter().enumerate() {
            let p = row[entering];
            if p <= PIVOT_TOL {
                continue;
            }
            let mut ratio = Vec::with_capacity(dim + 1);
            ratio.push(row[q_col] / p);
            ratio.extend(row[..dim].iter().map(|v| v / p));
            match &choice {
                Some((_, best)) if !lex_less(&ratio, best) => {}
                _ => choice = Some((i, ratio)),
            }
        }
        let Some((row, _)) = choice else {
            break LemkeStatus::RayTermination;
        };
        leaving = basis[row];
        pivot(&mut t, row, entering);
        basis[row] = entering;
        pivots += 1;
        if leaving == z0_col {
            break LemkeStatus::Solved;
        }
        if pivots >= max_pivots {
            break LemkeStatus::IterLimit;
        }
    };

    let mut z = DVector::zeros(dim);
    for (row, &b) in basis.iter().enumerate() {
        if (dim..2 * dim).contains(&b) {
            z[b - dim] = t[row][q_col];
        }
    }
    LcpSolution { z, status, pivots }
}

/// Solves an assembled instance. `max_pivots = 0` means the default cap of
/// fifty times the problem dimension.
pub fn lemke_solve(inst: &LcpInstance, max_pivots: usize) -> LcpSolution {
    let cap = if max_pivots == 0 {
        50 * inst.q.len().max(1)
    } else {
        max_pivots
    };
    lemke_tableau(&inst.q, &inst.m, cap)
}

/// Solves the instance under a relabeling of the retained players.
///
/// Lemke returns one solution; games with several equilibria can surface
/// a different one when the player blocks are permuted. `perm` maps new
/// position -> old position over `0..n`; the returned `z` is expressed in
/// the original ordering.
pub fn lemke_solve_permuted(
    inst: &LcpInstance,
    perm: &[usize],
    max_pivots: usize,
) -> Result<LcpSolution, LcpError> {
    let k = inst.n;
    let mut seen = vec![false; k];
    if perm.len() != k || !perm.iter().all(|&p| p < k && !std::mem::replace(&mut seen[p], true)) {
        return Err(LcpError::InvalidPermutation { n: k });
    }
    let full: Vec<usize> = perm
        .iter()
        .copied()
        .chain(perm.iter().map(|&p| k + p))
        .collect();
    let mut q = DVector::zeros(2 * k);
    let mut m = DMatrix::zeros(2 * k, 2 * k);
    for (new_r, &old_r) in full.iter().enumerate() {
        q[new_r] = inst.q[old_r];
        for (new_c, &old_c) in full.iter().enumerate() {
            m[(new_r, new_c)] = inst.m[(old_r, old_c)];
        }
    }
    let cap = if max_pivots == 0 { 50 * (2 * k).max(1) } else { max_pivots };
    let permuted = lemke_tableau(&q, &m, cap);
    let mut z = DVector::zeros(2 * k);
    for (new_i, &old_i) in full.iter().enumerate() {
        z[old_i] = permuted.z[new_i];
    }
    Ok(LcpSolution {
        z,
        status: permuted.status,
        pivots: permuted.pivots,
    })
}

/// Randomized copositivity probe: `trials` nonnegative unit vectors, pass
/// iff every quadratic form stays above `-1e-10`. For matrices in the
/// game's block shape the analytic identity
/// `x' M x = x_1' (A + I) x_1` is asserted per sample as well. Returns
/// the pass flag and the smallest sampled quadratic form.
pub fn check_copositive(m: &DMatrix<f64>, trials: usize, seed: u64) -> (bool, f64) {
    let dim = m.nrows();
    if dim == 0 {
        return (true, 0.0);
    }
    let k = dim / 2;
    let blockwise = dim.is_multiple_of(2) && k > 0 && {
        let mut ok = true;
        for r in 0..k {
            for c in 0..k {
                ok &= m[(k + r, k + c)] == 0.0;
                ok &= m[(r, k + c)] == if r == c { 1.0 } else { 0.0 };
                ok &= m[(k + r, c)] == if r == c { -1.0 } else { 0.0 };
            }
        }
        ok
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_quadform = f64::INFINITY;
    let mut pass = true;
    for _ in 0..trials {
        let mut x = DVector::from_fn(dim, |_, _| rng.random::<f64>());
        let norm = x.norm();
        if norm == 0.0 {
            continue;
        }
        x /= norm;
        let quad = (x.transpose() * m * &x)[(0, 0)];
        min_quadform = min_quadform.min(quad);
        if quad < -1e-10 {
            pass = false;
        }
        if blockwise {
            let x1 = x.rows(0, k).into_owned();
            let top_left = m.view((0, 0), (k, k));
            let direct = (x1.transpose() * top_left * &x1)[(0, 0)];
            if (quad - direct).abs() > 1e-9 {
                pass = false;
            }
        }
    }
    if !min_quadform.is_finite() {
        min_quadform = 0.0;
    }
    (pass, min_quadform)
}

/// Maps a solved instance back to a full strategy profile: retained
/// players take their `z` block values (clamped into `[0, 1]`, clamp
/// magnitude capped at `1e-7`), eliminated players take 1.
pub fn extract_profile(sol: &LcpSolution, game: &GameSpec) -> Result<StrategyProfile, LcpError> {
    if sol.status != LemkeStatus::Solved {
        return Err(LcpError::NotSolved { status: sol.status });
    }
    let kinds = node_kinds(game)?;
    let mut s = vec![0.0; game.n()];
    let mut pos = 0usize;
    for (idx, kind) in kinds.iter().enumerate() {
        match kind {
            NodeKind::Dominant => s[idx] = 1.0,
            NodeKind::Interior { .. } => {
                let raw = sol.z[pos];
                let clamped = raw.clamp(0.0, 1.0);
                if (raw - clamped).abs() > CLAMP_INTEGRITY_TOL {
                    return Err(LcpError::ClampIntegrity {
                        node: idx + 1,
                        magnitude: (raw - clamped).abs(),
                    });
                }
                s[idx] = clamped;
                pos += 1;
            }
            NodeKind::RiskNeutral { .. } => {
                return Err(LcpError::from(CriticalError::LinearWeighting));
            }
        }
    }
    Ok(StrategyProfile::new(s)?)
}

/// End-to-end pipeline: assemble, solve, extract, verify. `iterations`
/// in the report counts Lemke pivots.
pub fn lcp_solve(game: &GameSpec, max_pivots: usize) -> Result<EquilibriumReport, LcpError> {
    let inst = build_lcp(game)?;
    let sol = lemke_solve(&inst, max_pivots);
    let profile = extract_profile(&sol, game)?;
    let (is_pne, max_violation, per_node_case) = verify_pne(game, &profile, DEFAULT_VERIFY_TOL)?;
    let attack_probs = attack_probabilities(game, &profile)?;
    let phi = attack_probs.iter().sum::<f64>() / attack_probs.len() as f64;
    Ok(EquilibriumReport {
        profile,
        attack_probs,
        phi,
        is_pne,
        per_node_case,
        max_violation,
        iterations: sol.pivots,
        method: SolveMethod::Lcp,
    })
}

/// Residual diagnostics for a solution: `(min z, min q + Mz, |z.(q+Mz)|)`.
pub fn solution_residuals(inst: &LcpInstance, sol: &LcpSolution) -> (f64, f64, f64) {
    if inst.q.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let w = &inst.q + &inst.m * &sol.z;
    let min_z = sol.z.min();
    let min_w = w.min();
    let residual = sol.z.dot(&w).abs();
    (min_z, min_w, residual)
}

/// Convenience wrapper asserting the solved-solution invariants.
pub fn solution_is_clean(inst: &LcpInstance, sol: &LcpSolution) -> bool {
    let (min_z, min_w, residual) = solution_residuals(inst, sol);
    sol.status == LemkeStatus::Solved
        && min_z >= -SOLUTION_SLACK
        && min_w >= -SOLUTION_SLACK
        && residual < COMPLEMENTARITY_TOL
}
