//! Ground truth independent of the transfer-matrix pipeline.
//!
//! Everything here works on the explicit cylinder graph with functions
//! `V → {0, 1, 2}` and the bare Roman domination condition, so bugs in the
//! word encoding cannot hide: exhaustive search enumerates all `3^(mn)`
//! assignments, and the column dynamic program tracks exact
//! "needs-domination" flags instead of the letter abstraction.

use rayon::prelude::*;

use crate::CylinderError;

/// The cylinder `P_m □ C_n`: `m` rows (paths down each column) and `n`
/// cyclically arranged columns. Vertex `(i, j)` is adjacent to `(i±1, j)`
/// within the column and to `(i, j±1 mod n)` along its row.
#[derive(Copy, Clone, Debug)]
pub struct CylinderGraph {
    pub m: usize,
    pub n: usize,
}

impl CylinderGraph {
    pub fn new(m: usize, n: usize) -> Result<Self, CylinderError> {
        if m < 2 {
            return Err(CylinderError::invalid(format!("cylinder needs at least 2 rows, got {m}")));
        }
        if n < 3 {
            return Err(CylinderError::invalid(format!("cycle needs at least 3 columns, got {n}")));
        }
        Ok(CylinderGraph { m, n })
    }

    pub fn vertex_count(&self) -> usize {
        self.m * self.n
    }

    fn index(&self, row: usize, col: usize) -> usize {
        row * self.n + col
    }

    fn for_each_neighbor(&self, row: usize, col: usize, mut visit: impl FnMut(usize)) {
        if row > 0 {
            visit(self.index(row - 1, col));
        }
        if row + 1 < self.m {
            visit(self.index(row + 1, col));
        }
        visit(self.index(row, (col + 1) % self.n));
        visit(self.index(row, (col + self.n - 1) % self.n));
    }

    pub fn degree(&self, row: usize) -> usize {
        if row == 0 || row == self.m - 1 {
            3
        } else {
            4
        }
    }
}

/// A function `V → {0, 1, 2}` on a cylinder, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RomanFunction {
    pub m: usize,
    pub n: usize,
    values: Vec<u8>,
}

impl RomanFunction {
    pub fn new(graph: &CylinderGraph, values: Vec<u8>) -> Result<Self, CylinderError> {
        if values.len() != graph.vertex_count() {
            return Err(CylinderError::invalid(format!(
                "function must assign all {} vertices, got {} values",
                graph.vertex_count(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v > 2) {
            return Err(CylinderError::invalid(format!("vertex values must be 0, 1 or 2, got {v}")));
        }
        Ok(RomanFunction { m: graph.m, n: graph.n, values })
    }

    pub fn value(&self, row: usize, col: usize) -> u8 {
        self.values[row * self.n + col]
    }

    /// Total weight `|S_1| + 2|S_2|`.
    pub fn weight(&self) -> u64 {
        self.values.iter().map(|&v| v as u64).sum()
    }

    /// Plain-text grid: one row per line, characters 0/1/2, columns in cycle
    /// order.
    pub fn to_grid(&self) -> String {
        let mut out = String::with_capacity(self.m * (self.n + 1));
        for row in 0..self.m {
            for col in 0..self.n {
                out.push(char::from(b'0' + self.value(row, col)));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_grid(text: &str) -> Result<Self, CylinderError> {
        let rows: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.chars().count());
        let graph = CylinderGraph::new(m, n)?;
        let mut values = Vec::with_capacity(m * n);
        for row in &rows {
            if row.chars().count() != n {
                return Err(CylinderError::invalid("ragged certificate grid"));
            }
            for c in row.chars() {
                match c {
                    '0' | '1' | '2' => values.push(c as u8 - b'0'),
                    _ => return Err(CylinderError::invalid(format!("invalid grid character {c:?}"))),
                }
            }
        }
        RomanFunction::new(&graph, values)
    }
}

/// Checks the Roman domination condition: every 0-vertex has a neighbor of
/// value 2.
pub fn validate_rdf(graph: &CylinderGraph, f: &RomanFunction) -> Result<bool, CylinderError> {
    if f.m != graph.m || f.n != graph.n {
        return Err(CylinderError::invalid("function shape does not match the graph"));
    }
    for row in 0..graph.m {
        for col in 0..graph.n {
            if f.value(row, col) != 0 {
                continue;
            }
            let mut dominated = false;
            graph.for_each_neighbor(row, col, |v| dominated |= f.values[v] == 2);
            if !dominated {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Largest vertex count accepted by the exhaustive search.
pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 16;
/// Bounds for the column dynamic program.
pub const DP_MAX_ROWS: usize = 4;
pub const DP_MAX_COLS: usize = 30;

/// How `brute_force_gamma_r` and `brute_force_witness` explore the space.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Enumerate all `3^(mn)` assignments. Needs `m*n <= 16`.
    Exhaustive,
    /// Column profile DP with exact pending-domination flags. Needs
    /// `m <= 4, n <= 30`.
    ColumnDp,
}

/// Minimum Roman dominating weight by direct search over the explicit graph.
pub fn brute_force_gamma_r(m: usize, n: usize, mode: OracleMode) -> Result<u64, CylinderError> {
    let graph = CylinderGraph::new(m, n)?;
    match mode {
        OracleMode::Exhaustive => Ok(exhaustive_search(&graph).0),
        OracleMode::ColumnDp => column_dp(&graph),
    }
}

/// Exhaustive minimum together with a witness function.
pub fn brute_force_witness(m: usize, n: usize) -> Result<(u64, RomanFunction), CylinderError> {
    let graph = CylinderGraph::new(m, n)?;
    let (weight, encoded) = exhaustive_search(&graph);
    let values = decode_assignment(encoded, graph.vertex_count());
    let witness = RomanFunction::new(&graph, values)?;
    debug_assert!(validate_rdf(&graph, &witness).unwrap());
    Ok((weight, witness))
}

fn decode_assignment(mut code: u64, len: usize) -> Vec<u8> {
    let mut values = vec![0u8; len];
    for v in values.iter_mut() {
        *v = (code % 3) as u8;
        code /= 3;
    }
    values
}

fn exhaustive_search(graph: &CylinderGraph) -> (u64, u64) {
    let count = graph.vertex_count();
    assert!(
        count <= EXHAUSTIVE_VERTEX_LIMIT,
        "exhaustive mode supports at most {EXHAUSTIVE_VERTEX_LIMIT} vertices"
    );
    let total = 3u64.pow(count as u32);

    // Neighbor lists once, indexed by vertex.
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); count];
    for row in 0..graph.m {
        for col in 0..graph.n {
            let v = graph.index(row, col);
            graph.for_each_neighbor(row, col, |u| neighbors[v].push(u));
        }
    }

    const CHUNK: u64 = 1 << 16;
    let chunks: u64 = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut best = (u64::MAX, 0u64);
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let mut values = decode_assignment(lo, count);
            let mut code = lo;
            loop {
                let weight: u64 = values.iter().map(|&v| v as u64).sum();
                if weight < best.0 {
                    let valid = (0..count).all(|v| {
                        values[v] != 0 || neighbors[v].iter().any(|&u| values[u] == 2)
                    });
                    if valid {
                        best = (weight, code);
                    }
                }
                code += 1;
                if code >= hi {
                    break;
                }
                // Odometer step in base 3.
                for v in values.iter_mut() {
                    if *v == 2 {
                        *v = 0;
                    } else {
                        *v += 1;
                        break;
                    }
                }
            }
            best
        })
        .min()
        .expect("at least one chunk")
}

/// Exact capacity check for either mode; errors mirror the mode bounds.
fn check_capacity(graph: &CylinderGraph, mode: OracleMode) -> Result<(), CylinderError> {
    match mode {
        OracleMode::Exhaustive if graph.vertex_count() > EXHAUSTIVE_VERTEX_LIMIT => {
            Err(CylinderError::Capacity {
                what: format!("exhaustive search over 3^{} assignments", graph.vertex_count()),
                required_bytes: 0,
            })
        }
        OracleMode::ColumnDp if graph.m > DP_MAX_ROWS || graph.n > DP_MAX_COLS => {
            Err(CylinderError::Capacity {
                what: format!("column DP for {} rows x {} columns", graph.m, graph.n),
                required_bytes: 0,
            })
        }
        _ => Ok(()),
    }
}

// --- Column dynamic program -------------------------------------------------
//
// State after placing column j: (labels of column j, mask of rows whose
// 0-vertex in column j is still undominated and can only be saved by column
// j+1). The cyclic closure fixes the first column and a guess of which of
// its pending rows the wrap-around final column will dominate.

fn column_weight(labels: &[u8]) -> u64 {
    labels.iter().map(|&v| v as u64).sum()
}

/// Rows of `labels` that hold a 0 with no 2 above or below in the same
/// column.
fn vertically_pending(labels: &[u8]) -> u32 {
    let m = labels.len();
    let mut mask = 0u32;
    for i in 0..m {
        if labels[i] != 0 {
            continue;
        }
        let above = i > 0 && labels[i - 1] == 2;
        let below = i + 1 < m && labels[i + 1] == 2;
        if !above && !below {
            mask |= 1 << i;
        }
    }
    mask
}

/// Places `next` after `prev`: `None` when some pending row would be left
/// undominated for good, otherwise the pending mask of `next`.
fn dp_transition(prev: &[u8], pending: u32, next: &[u8]) -> Option<u32> {
    let m = prev.len();
    // Every pending 0 of the previous column must be saved now.
    for i in 0..m {
        if pending & (1 << i) != 0 && next[i] != 2 {
            return None;
        }
    }
    // New pending rows: 0s of `next` not dominated vertically nor by the
    // previous column.
    let mut mask = vertically_pending(next);
    for i in 0..m {
        if prev[i] == 2 {
            mask &= !(1 << i);
        }
    }
    Some(mask)
}

fn all_columns(m: usize) -> Vec<Vec<u8>> {
    let total = 3usize.pow(m as u32);
    (0..total)
        .map(|mut code| {
            let mut labels = vec![0u8; m];
            for l in labels.iter_mut() {
                *l = (code % 3) as u8;
                code /= 3;
            }
            labels
        })
        .collect()
}

fn column_dp(graph: &CylinderGraph) -> Result<u64, CylinderError> {
    check_capacity(graph, OracleMode::ColumnDp)?;
    let m = graph.m;
    let n = graph.n;
    let columns = all_columns(m);
    let weights: Vec<u64> = columns.iter().map(|c| column_weight(c)).collect();
    let masks = 1usize << m;

    let mut best = u64::MAX;
    for (first_idx, first) in columns.iter().enumerate() {
        let init_pending = vertically_pending(first);
        // Guess which pending rows of the first column the last column will
        // dominate through the wrap-around adjacency.
        let mut wrap_guess = init_pending;
        loop {
            let start_pending = init_pending & !wrap_guess;
            // dp[column label][pending mask] = min weight so far
            let mut dp = vec![u64::MAX; columns.len() * masks];
            dp[first_idx * masks + start_pending as usize] = weights[first_idx];

            for _step in 1..n {
                let mut next_dp = vec![u64::MAX; columns.len() * masks];
                for (prev_idx, prev) in columns.iter().enumerate() {
                    for pending in 0..masks {
                        let cur = dp[prev_idx * masks + pending];
                        if cur == u64::MAX {
                            continue;
                        }
                        for (next_idx, next) in columns.iter().enumerate() {
                            if let Some(new_pending) = dp_transition(prev, pending as u32, next) {
                                let slot = &mut next_dp[next_idx * masks + new_pending as usize];
                                let cand = cur + weights[next_idx];
                                if cand < *slot {
                                    *slot = cand;
                                }
                            }
                        }
                    }
                }
                dp = next_dp;
            }

            // Close the cycle: the last column must dominate the guessed
            // rows, and its own pending rows must be saved by the first
            // column.
            for (last_idx, last) in columns.iter().enumerate() {
                let covers_guess = (0..m).all(|i| wrap_guess & (1 << i) == 0 || last[i] == 2);
                if !covers_guess {
                    continue;
                }
                for pending in 0..masks {
                    let cur = dp[last_idx * masks + pending];
                    if cur == u64::MAX {
                        continue;
                    }
                    let saved = (0..m).all(|i| pending & (1 << i) == 0 || first[i] == 2);
                    if saved {
                        best = best.min(cur);
                    }
                }
            }

            if wrap_guess == 0 {
                break;
            }
            wrap_guess = (wrap_guess - 1) & init_pending;
        }
    }
    Ok(best)
}

// --- Diagonal construction ---------------------------------------------------

/// The periodic Roman dominating function achieving weight `2(m+1)n/5` when
/// `n ≡ 0 (mod 5)`: 2-vertices on the residue pattern `2i + j ≡ 0 (mod 5)`
/// (rows 1-indexed), and 1-vertices filling the positions of the first and
/// last rows that the pattern leaves undominated.
pub fn diagonal_pattern(m: usize, n: usize) -> Result<RomanFunction, CylinderError> {
    if m < 4 {
        return Err(CylinderError::invalid(format!("diagonal pattern needs at least 4 rows, got {m}")));
    }
    if n < 5 || n % 5 != 0 {
        return Err(CylinderError::invalid(format!(
            "diagonal pattern needs a positive multiple of 5 columns, got {n}"
        )));
    }
    let graph = CylinderGraph::new(m, n)?;
    let mut values = vec![0u8; graph.vertex_count()];
    for row in 0..m {
        for col in 0..n {
            let t = (2 * (row + 1) + col) % 5;
            let v = &mut values[row * n + col];
            if t == 0 {
                *v = 2;
            } else if row == 0 && t == 2 {
                *v = 1;
            } else if row == m - 1 && t == 3 {
                *v = 1;
            }
        }
    }
    RomanFunction::new(&graph, values)
}
