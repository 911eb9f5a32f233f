//! Contour tracing of a sign field on a rectangular lattice.
//!
//! Node signs are computed on demand and memoized, so a very fine lattice
//! costs only the nodes next to the contour. Cells are resolved the usual
//! marching-squares way; the four-crossing (saddle) case is split by the
//! sign at the cell centre.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;

use crate::arith::{int, Rational};
use crate::render::exact_sign::common_form;
use crate::render::Window;

/// Lattice with `n` cells per axis over a window. Node (i, j) sits at
/// x_min + i·Δx, y_min + j·Δy; half-integer positions (cell centres) are
/// addressed with doubled indices.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub window: Window,
    pub n: u32,
}

impl Lattice {
    /// Exact coordinates of doubled-index position (ki, kj), 0 ≤ k ≤ 2n.
    pub fn doubled_point(&self, ki: u32, kj: u32) -> (Rational, Rational) {
        let w = &self.window;
        let two_n = int(2 * i64::from(self.n));
        let x = (&w.x_min * (&two_n - int(ki.into())) + &w.x_max * int(ki.into())) / &two_n;
        let y = (&w.y_min * (&two_n - int(kj.into())) + &w.y_max * int(kj.into())) / &two_n;
        (x, y)
    }

    pub fn point(&self, i: u32, j: u32) -> (Rational, Rational) {
        self.doubled_point(2 * i, 2 * j)
    }

    pub fn doubled_integer_point(&self, ki: u32, kj: u32) -> (BigInt, BigInt, BigInt) {
        let (x, y) = self.doubled_point(ki, kj);
        common_form(&x, &y)
    }

    pub fn point_f64(&self, i: f64, j: f64) -> (f64, f64) {
        let w = &self.window;
        let (x0, x1, y0, y1) = w.bounds_f64();
        let n = f64::from(self.n);
        (x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n)
    }
}

/// Lattice edge: `H(i, j)` joins (i, j)–(i+1, j), `V(i, j)` joins (i, j)–(i, j+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edge {
    H(u32, u32),
    V(u32, u32),
}

impl Edge {
    pub fn endpoints(self) -> ((u32, u32), (u32, u32)) {
        match self {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        }
    }

    /// Midpoint in lattice units.
    pub fn midpoint(self) -> (f64, f64) {
        match self {
            Edge::H(i, j) => (f64::from(i) + 0.5, f64::from(j)),
            Edge::V(i, j) => (f64::from(i), f64::from(j) + 0.5),
        }
    }
}

/// Memoized sign field over a lattice. Values are kept whole so that callers
/// can read extra information back (see [`SignField::value`]).
pub struct SignField<V, F>
where
    F: Fn(&BigInt, &BigInt, &BigInt) -> V,
{
    pub lattice: Lattice,
    eval: F,
    sign_of: fn(&V) -> i8,
    memo: HashMap<(u32, u32), V>,
}

impl<V: Clone, F> SignField<V, F>
where
    F: Fn(&BigInt, &BigInt, &BigInt) -> V,
{
    pub fn new(lattice: Lattice, eval: F, sign_of: fn(&V) -> i8) -> Self {
        SignField {
            lattice,
            eval,
            sign_of,
            memo: HashMap::new(),
        }
    }

    pub fn value_doubled(&mut self, ki: u32, kj: u32) -> V {
        if let Some(v) = self.memo.get(&(ki, kj)) {
            return v.clone();
        }
        let (x, y, d) = self.lattice.doubled_integer_point(ki, kj);
        let v = (self.eval)(&x, &y, &d);
        self.memo.insert((ki, kj), v.clone());
        v
    }

    pub fn value(&mut self, i: u32, j: u32) -> V {
        self.value_doubled(2 * i, 2 * j)
    }

    /// Binary node sign; exact zeros count as positive.
    pub fn sign(&mut self, i: u32, j: u32) -> i8 {
        let v = self.value(i, j);
        if (self.sign_of)(&v) < 0 {
            -1
        } else {
            1
        }
    }

    fn centre_sign(&mut self, i: u32, j: u32) -> i8 {
        let v = self.value_doubled(2 * i + 1, 2 * j + 1);
        if (self.sign_of)(&v) < 0 {
            -1
        } else {
            1
        }
    }

    pub fn evaluations(&self) -> usize {
        self.memo.len()
    }

    pub fn crosses(&mut self, e: Edge) -> bool {
        let ((i0, j0), (i1, j1)) = e.endpoints();
        self.sign(i0, j0) != self.sign(i1, j1)
    }

    /// Cells (by lower-left node) on either side of an edge.
    fn cells_of(&self, e: Edge) -> Vec<(u32, u32)> {
        let n = self.lattice.n;
        let mut out = Vec::with_capacity(2);
        match e {
            Edge::H(i, j) => {
                if j > 0 {
                    out.push((i, j - 1));
                }
                if j < n {
                    out.push((i, j));
                }
            }
            Edge::V(i, j) => {
                if i > 0 {
                    out.push((i - 1, j));
                }
                if i < n {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The edge paired with `entry` inside cell (i, j).
    fn exit(&mut self, (i, j): (u32, u32), entry: Edge) -> Edge {
        let bottom = Edge::H(i, j);
        let right = Edge::V(i + 1, j);
        let top = Edge::H(i, j + 1);
        let left = Edge::V(i, j);
        let crossing: Vec<Edge> = [bottom, right, top, left]
            .into_iter()
            .filter(|&e| self.crosses(e))
            .collect();
        if crossing.len() == 2 {
            return if crossing[0] == entry {
                crossing[1]
            } else {
                crossing[0]
            };
        }
        debug_assert_eq!(crossing.len(), 4);
        let pairs = if self.centre_sign(i, j) == self.sign(i, j) {
            // corners (i+1, j) and (i, j+1) are cut off
            [(bottom, right), (top, left)]
        } else {
            [(bottom, left), (right, top)]
        };
        for (a, b) in pairs {
            if a == entry {
                return b;
            }
            if b == entry {
                return a;
            }
        }
        unreachable!("entry edge is not on the cell")
    }

    /// Follows the contour through `seed` in both directions.
    /// Returns the ordered edges and whether the contour closed up.
    pub fn trace(&mut self, seed: Edge, visited: &mut HashSet<Edge>) -> (Vec<Edge>, bool) {
        visited.insert(seed);
        let cells = self.cells_of(seed);
        let mut halves: Vec<Vec<Edge>> = Vec::new();
        for &start_cell in &cells {
            let mut path = Vec::new();
            let mut cell = start_cell;
            let mut entry = seed;
            loop {
                let exit = self.exit(cell, entry);
                if exit == seed {
                    // closed loop; the first direction already has it all
                    return (std::iter::once(seed).chain(path).collect(), true);
                }
                if !visited.insert(exit) {
                    break;
                }
                path.push(exit);
                let next = self.cells_of(exit).into_iter().find(|&c| c != cell);
                match next {
                    Some(c) => {
                        cell = c;
                        entry = exit;
                    }
                    None => break,
                }
            }
            halves.push(path);
        }
        let mut out: Vec<Edge> = Vec::new();
        if halves.len() == 2 {
            out.extend(halves[1].iter().rev());
            out.push(seed);
            out.extend(halves[0].iter());
        } else {
            out.push(seed);
            out.extend(halves.into_iter().flatten());
        }
        (out, false)
    }
}

/// Crossing edges along the window boundary and along the lines of a coarse
/// grid (every `stride` lattice lines), in a fixed order.
pub fn seed_edges<V: Clone, F>(field: &mut SignField<V, F>, stride: u32) -> Vec<Edge>
where
    F: Fn(&BigInt, &BigInt, &BigInt) -> V,
{
    let n = field.lattice.n;
    let mut seeds = Vec::new();
    let mut lines: Vec<u32> = (0..=n).step_by(stride as usize).collect();
    if *lines.last().unwrap() != n {
        lines.push(n);
    }
    // coarse-node sign changes first decide which coarse edges to scan
    for &j in &lines {
        for ci in 0..lines.len() - 1 {
            let (i0, i1) = (lines[ci], lines[ci + 1]);
            let boundary = j == 0 || j == n;
            if boundary || field.sign(i0, j) != field.sign(i1, j) {
                for i in i0..i1 {
                    if field.crosses(Edge::H(i, j)) {
                        seeds.push(Edge::H(i, j));
                    }
                }
            }
        }
    }
    for &i in &lines {
        for cj in 0..lines.len() - 1 {
            let (j0, j1) = (lines[cj], lines[cj + 1]);
            let boundary = i == 0 || i == n;
            if boundary || field.sign(i, j0) != field.sign(i, j1) {
                for j in j0..j1 {
                    if field.crosses(Edge::V(i, j)) {
                        seeds.push(Edge::V(i, j));
                    }
                }
            }
        }
    }
    seeds
}

/// All contour pieces reachable from the seeds.
pub fn trace_all<V: Clone, F>(field: &mut SignField<V, F>, seeds: &[Edge]) -> Vec<(Vec<Edge>, bool)>
where
    F: Fn(&BigInt, &BigInt, &BigInt) -> V,
{
    let mut visited = HashSet::new();
    let mut out = Vec::new();
    for &s in seeds {
        if visited.contains(&s) {
            continue;
        }
        out.push(field.trace(s, &mut visited));
    }
    out
}
