//! Grid graphs, orientations, and unique-sink verification.
//!
//! The grid on shape `(n_1, ..., n_d)` has vertex set
//! `[n_1] x ... x [n_d]` (0-based here) and an edge between every two
//! vertices that differ in exactly one coordinate, by any amount: each
//! axis line carries a complete tournament. An orientation is stored as
//! one antisymmetric sign matrix per line, which makes line transitivity
//! and subgrid restriction direct to express.
//!
//! `build_sigma` orients the grid of a colored point set: the edge
//! between `v` and `v'` differing in dimension `i` points from `v'` to
//! `v` exactly when the class-`i` point indexed by `v'` lies above the
//! colorful hyperplane spanned by the points indexed by `v`. Under weak
//! general position and well-separation this is a unique-sink
//! orientation, which the checks here verify two independent ways: from
//! the definition (every induced subgrid has exactly one sink) and via
//! the combination of sink existence with the cube outmap criterion.

use crate::geometry::{hyperplane_through, Point, Sign};
use crate::separation::{
    check_weak_general_position, check_well_separated, ColoredPointSet, SeparationReport,
    WeakPositionReport,
};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridError {
    MalformedShape(String),
    OutOfRange(String),
    NotACube { dims: Vec<usize> },
    TooLarge { required: u128, budget: u128 },
    NotFound,
    PreconditionFailed(Box<PreconditionFailure>),
    /// A point lies on a colorful hyperplane; impossible once weak
    /// general position holds, so this signals a caller error.
    OnPredicate { dim: usize, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreconditionFailure {
    WeakPosition(WeakPositionReport),
    Separation(SeparationReport),
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::MalformedShape(msg) => write!(f, "malformed shape: {msg}"),
            GridError::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            GridError::NotACube { dims } => {
                write!(f, "shape {dims:?} has a dimension with more than 2 directions")
            }
            GridError::TooLarge { required, budget } => {
                write!(f, "work {required} exceeds budget {budget}")
            }
            GridError::NotFound => write!(f, "no vertex attains the requested outmap"),
            GridError::PreconditionFailed(why) => match &**why {
                PreconditionFailure::WeakPosition(_) => {
                    write!(f, "point set is not in weak general position")
                }
                PreconditionFailure::Separation(_) => write!(f, "point set is not well-separated"),
            },
            GridError::OnPredicate { dim, index } => write!(
                f,
                "point {index} of class {dim} lies on a colorful hyperplane"
            ),
        }
    }
}

impl std::error::Error for GridError {}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridShape {
    dims: Vec<usize>,
}

impl GridShape {
    pub fn new(dims: Vec<usize>) -> Result<GridShape, GridError> {
        if dims.is_empty() {
            return Err(GridError::MalformedShape("no dimensions".into()));
        }
        if dims.iter().any(|&n| n == 0) {
            return Err(GridError::MalformedShape("every dimension needs n >= 1".into()));
        }
        Ok(GridShape { dims })
    }

    pub fn d(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn vertex_count(&self) -> u128 {
        self.dims.iter().map(|&n| n as u128).product()
    }

    pub fn edge_count(&self) -> u128 {
        (0..self.d())
            .map(|i| {
                let line_count: u128 = self
                    .dims
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, &n)| n as u128)
                    .product();
                let n = self.dims[i] as u128;
                line_count * n * (n - 1) / 2
            })
            .sum()
    }

    pub fn subgrid_count(&self) -> u128 {
        self.dims
            .iter()
            .map(|&n| (1u128 << n) - 1)
            .product()
    }

    pub fn contains(&self, v: &GridVertex) -> bool {
        v.coords.len() == self.d() && v.coords.iter().zip(&self.dims) .all(|(&a, &n)| a < n)
    }

    /// Vertices in lexicographic order, last coordinate fastest.
    pub fn vertices(&self) -> Vec<GridVertex> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; self.d()];
        loop {
            out.push(GridVertex { coords: cur.clone() });
            let mut k = self.d();
            while k > 0 {
                cur[k - 1] += 1;
                if cur[k - 1] < self.dims[k - 1] {
                    break;
                }
                cur[k - 1] = 0;
                k -= 1;
            }
            if k == 0 {
                return out;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridVertex {
    pub coords: Vec<usize>,
}

impl GridVertex {
    pub fn new(coords: Vec<usize>) -> GridVertex {
        GridVertex { coords }
    }
}

impl fmt::Display for GridVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Per-dimension outdegrees of a vertex; component `i` lies in
/// `0..n_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outmap {
    pub components: Vec<usize>,
}

impl fmt::Display for Outmap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A nonempty choice of directions per dimension, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgrid {
    pub directions: Vec<Vec<usize>>,
}

impl Subgrid {
    pub fn full(shape: &GridShape) -> Subgrid {
        Subgrid {
            directions: shape.dims().iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    fn validate(&self, shape: &GridShape) -> Result<(), GridError> {
        if self.directions.len() != shape.d() {
            return Err(GridError::OutOfRange(format!(
                "subgrid has {} dimensions, shape has {}",
                self.directions.len(),
                shape.d()
            )));
        }
        for (i, dirs) in self.directions.iter().enumerate() {
            if dirs.is_empty() {
                return Err(GridError::OutOfRange(format!("dimension {i} empty")));
            }
            if dirs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GridError::OutOfRange(format!(
                    "dimension {i} not sorted strictly ascending"
                )));
            }
            if *dirs.last().expect("nonempty") >= shape.dims()[i] {
                return Err(GridError::OutOfRange(format!("dimension {i} out of range")));
            }
        }
        Ok(())
    }

    /// Vertices of the subgrid in lexicographic order of direction
    /// indices, in global coordinates.
    fn vertices(&self) -> Vec<GridVertex> {
        let d = self.directions.len();
        let mut out = Vec::new();
        let mut idx = vec![0usize; d];
        loop {
            out.push(GridVertex {
                coords: (0..d).map(|i| self.directions[i][idx[i]]).collect(),
            });
            let mut k = d;
            while k > 0 {
                idx[k - 1] += 1;
                if idx[k - 1] < self.directions[k - 1].len() {
                    break;
                }
                idx[k - 1] = 0;
                k -= 1;
            }
            if k == 0 {
                return out;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UsoMode {
    /// Every induced subgrid has exactly one sink.
    Full,
    /// Every induced subgrid has at least one sink and every subcube
    /// passes the outmap criterion.
    Lemma21,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsoViolation {
    pub subgrid: Subgrid,
    pub sinks: Vec<GridVertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsoReport {
    pub uso: bool,
    pub violation: Option<UsoViolation>,
}

pub const DEFAULT_SUBGRID_BUDGET: u128 = 1_000_000;
pub const DEFAULT_EDGE_BUDGET: u128 = 1_000_000;

/// An orientation of every grid edge, stored as one antisymmetric
/// `n_i x n_i` sign matrix per line (`+1` at `[a][b]` means the edge is
/// oriented from position `a` to position `b`). Serializes to JSON
/// bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridOrientation {
    shape: GridShape,
    /// `lines[i][r]` is the tournament of the `r`-th line along
    /// dimension `i`, lines ranked lexicographically by the remaining
    /// coordinates.
    lines: Vec<Vec<Vec<Vec<i8>>>>,
}

impl GridOrientation {
    /// Materializes an orientation from an edge rule: `f(i, line, a, b)`
    /// with `a < b` returns true when the edge is oriented from position
    /// `a` to position `b` on the line along dimension `i` whose
    /// remaining coordinates are `line` (ascending dimension order).
    pub fn from_fn<F>(shape: GridShape, mut f: F) -> Result<GridOrientation, GridError>
    where
        F: FnMut(usize, &[usize], usize, usize) -> bool,
    {
        if shape.edge_count() > DEFAULT_EDGE_BUDGET {
            return Err(GridError::TooLarge {
                required: shape.edge_count(),
                budget: DEFAULT_EDGE_BUDGET,
            });
        }
        let d = shape.d();
        let mut lines = Vec::with_capacity(d);
        for i in 0..d {
            let n = shape.dims()[i];
            let mut per_line = Vec::new();
            for line in line_coords(&shape, i) {
                let mut m = vec![vec![0i8; n]; n];
                for a in 0..n {
                    for b in a + 1..n {
                        if f(i, &line, a, b) {
                            m[a][b] = 1;
                            m[b][a] = -1;
                        } else {
                            m[a][b] = -1;
                            m[b][a] = 1;
                        }
                    }
                }
                per_line.push(m);
            }
            lines.push(per_line);
        }
        Ok(GridOrientation { shape, lines })
    }

    /// Every edge oriented toward the smaller index on its line.
    pub fn toward_lower(shape: GridShape) -> Result<GridOrientation, GridError> {
        GridOrientation::from_fn(shape, |_, _, _, _| false)
    }

    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    fn line_rank(&self, dim: usize, v: &GridVertex) -> usize {
        let mut rank = 0;
        for k in 0..self.shape.d() {
            if k == dim {
                continue;
            }
            rank = rank * self.shape.dims()[k] + v.coords[k];
        }
        rank
    }

    /// True when the edge from `v` along dimension `dim` toward position
    /// `b` leaves `v`.
    pub fn is_outgoing(&self, v: &GridVertex, dim: usize, b: usize) -> bool {
        let a = v.coords[dim];
        debug_assert_ne!(a, b, "not an edge");
        self.lines[dim][self.line_rank(dim, v)][a][b] == 1
    }

    fn check_vertex(&self, v: &GridVertex) -> Result<(), GridError> {
        if self.shape.contains(v) {
            Ok(())
        } else {
            Err(GridError::OutOfRange(format!(
                "vertex {v} not in shape {:?}",
                self.shape.dims()
            )))
        }
    }

    /// The restriction to a subgrid, re-indexed to its own coordinates.
    /// Dimensions keep their positions; a single-direction dimension
    /// simply carries no edges (use `normalized` to drop such
    /// dimensions).
    pub fn restrict(&self, sub: &Subgrid) -> Result<GridOrientation, GridError> {
        sub.validate(&self.shape)?;
        let d = self.shape.d();
        let shape = GridShape::new(sub.directions.iter().map(|dirs| dirs.len()).collect())?;
        let mut lines = Vec::with_capacity(d);
        for i in 0..d {
            let mut per_line = Vec::new();
            for line in line_coords(&shape, i) {
                // Translate the sub-line coordinates back to global ones.
                let mut global = Vec::with_capacity(d - 1);
                let mut t = 0;
                for k in 0..d {
                    if k == i {
                        continue;
                    }
                    global.push(sub.directions[k][line[t]]);
                    t += 1;
                }
                let n = sub.directions[i].len();
                let mut m = vec![vec![0i8; n]; n];
                let mut v = global.clone();
                v.insert(i, 0);
                let v = GridVertex { coords: v };
                let rank = self.line_rank(i, &v);
                for a in 0..n {
                    for b in 0..n {
                        if a != b {
                            m[a][b] =
                                self.lines[i][rank][sub.directions[i][a]][sub.directions[i][b]];
                        }
                    }
                }
                per_line.push(m);
            }
            lines.push(per_line);
        }
        Ok(GridOrientation { shape, lines })
    }

    /// The same orientation with single-direction dimensions dropped.
    /// Dropping the last dimension of a single-vertex grid is not
    /// meaningful, so such grids are returned unchanged.
    pub fn normalized(&self) -> GridOrientation {
        let keep: Vec<usize> = (0..self.shape.d())
            .filter(|&i| self.shape.dims()[i] > 1)
            .collect();
        if keep.len() == self.shape.d() || keep.is_empty() {
            return self.clone();
        }
        let shape = GridShape::new(keep.iter().map(|&i| self.shape.dims()[i]).collect())
            .expect("kept dimensions are nonempty");
        let lines = keep.iter().map(|&i| self.lines[i].clone()).collect();
        GridOrientation { shape, lines }
    }

    /// Per-dimension outdegrees of `v`.
    pub fn outmap(&self, v: &GridVertex) -> Result<Outmap, GridError> {
        self.check_vertex(v)?;
        let components = (0..self.shape.d())
            .map(|i| {
                let line = &self.lines[i][self.line_rank(i, v)];
                let a = v.coords[i];
                (0..self.shape.dims()[i])
                    .filter(|&b| b != a && line[a][b] == 1)
                    .count()
            })
            .collect();
        Ok(Outmap { components })
    }

    /// The outmap of every vertex in lexicographic order, with a flag
    /// telling whether the map is a bijection onto the outmap space.
    pub fn outmap_table(&self) -> Result<(Vec<(GridVertex, Outmap)>, bool), GridError> {
        if self.shape.vertex_count() > DEFAULT_EDGE_BUDGET {
            return Err(GridError::TooLarge {
                required: self.shape.vertex_count(),
                budget: DEFAULT_EDGE_BUDGET,
            });
        }
        let mut table = Vec::new();
        let mut seen = HashSet::new();
        let mut bijection = true;
        for v in self.shape.vertices() {
            let om = self.outmap(&v).expect("enumerated vertex is in range");
            if !seen.insert(om.clone()) {
                bijection = false;
            }
            table.push((v, om));
        }
        // The vertex space and outmap space have equal cardinality, so
        // injectivity alone settles bijectivity.
        Ok((table, bijection))
    }

    /// First vertex in lexicographic order whose outmap equals `target`.
    pub fn find_vertex_with_outmap(&self, target: &Outmap) -> Result<GridVertex, GridError> {
        for v in self.shape.vertices() {
            let om = self.outmap(&v).expect("enumerated vertex is in range");
            if om == *target {
                return Ok(v);
            }
        }
        Err(GridError::NotFound)
    }

    /// Sinks of the given subgrid, in lexicographic order.
    pub fn subgrid_sinks(&self, sub: &Subgrid) -> Result<Vec<GridVertex>, GridError> {
        sub.validate(&self.shape)?;
        let d = self.shape.d();
        Ok(sub
            .vertices()
            .into_iter()
            .filter(|v| {
                (0..d).all(|i| {
                    sub.directions[i]
                        .iter()
                        .all(|&b| b == v.coords[i] || !self.is_outgoing(v, i, b))
                })
            })
            .collect())
    }

    /// The cube unique-sink criterion: every dimension must offer at most
    /// two directions, and every vertex pair must have outmaps that
    /// differ in some coordinate where the vertices differ.
    pub fn is_cube_uso(&self) -> Result<bool, GridError> {
        if self.shape.dims().iter().any(|&n| n > 2) {
            return Err(GridError::NotACube {
                dims: self.shape.dims().to_vec(),
            });
        }
        let vertices = self.shape.vertices();
        let outmaps: Vec<Outmap> = vertices
            .iter()
            .map(|v| self.outmap(v).expect("in range"))
            .collect();
        for x in 0..vertices.len() {
            for y in x + 1..vertices.len() {
                let separated = (0..self.shape.d()).any(|i| {
                    vertices[x].coords[i] != vertices[y].coords[i]
                        && outmaps[x].components[i] != outmaps[y].components[i]
                });
                if !separated {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Unique-sink verification with the default subgrid budget.
    pub fn is_uso(&self, mode: UsoMode) -> Result<UsoReport, GridError> {
        self.is_uso_with_budget(mode, DEFAULT_SUBGRID_BUDGET)
    }

    /// Unique-sink verification. `Full` demands exactly one sink in every
    /// induced subgrid; `Lemma21` demands at least one sink in every
    /// induced subgrid plus the cube criterion on every subcube. Both
    /// modes enumerate all subgrids and are bounded by `budget`.
    pub fn is_uso_with_budget(&self, mode: UsoMode, budget: u128) -> Result<UsoReport, GridError> {
        let required = self.shape.subgrid_count();
        if required > budget {
            return Err(GridError::TooLarge { required, budget });
        }
        for sub in self.subgrids() {
            let sinks = self.subgrid_sinks(&sub).expect("enumerated subgrid is valid");
            let bad = match mode {
                UsoMode::Full => sinks.len() != 1,
                UsoMode::Lemma21 => sinks.is_empty(),
            };
            if bad {
                return Ok(UsoReport {
                    uso: false,
                    violation: Some(UsoViolation { subgrid: sub, sinks }),
                });
            }
        }
        if mode == UsoMode::Lemma21 {
            for sub in self.subcubes() {
                let restricted = self.restrict(&sub).expect("enumerated subcube is valid");
                if !restricted.is_cube_uso().expect("subcube shape") {
                    // The criterion guarantees some subgrid of this cube
                    // has a sink count other than one; find it for the
                    // witness.
                    let inner = restricted
                        .is_uso_with_budget(UsoMode::Full, budget)
                        .expect("subcube is within budget");
                    let violation = inner.violation.map(|v| UsoViolation {
                        subgrid: Subgrid {
                            directions: v
                                .subgrid
                                .directions
                                .iter()
                                .enumerate()
                                .map(|(i, dirs)| {
                                    dirs.iter().map(|&a| sub.directions[i][a]).collect()
                                })
                                .collect(),
                        },
                        sinks: v
                            .sinks
                            .iter()
                            .map(|s| GridVertex {
                                coords: s
                                    .coords
                                    .iter()
                                    .enumerate()
                                    .map(|(i, &a)| sub.directions[i][a])
                                    .collect(),
                            })
                            .collect(),
                    });
                    return Ok(UsoReport {
                        uso: false,
                        violation,
                    });
                }
            }
        }
        Ok(UsoReport {
            uso: true,
            violation: None,
        })
    }

    /// All induced subgrids, by ascending per-dimension direction masks.
    pub fn subgrids(&self) -> Vec<Subgrid> {
        let per_dim: Vec<Vec<Vec<usize>>> = self
            .shape
            .dims()
            .iter()
            .map(|&n| {
                (1usize..1 << n)
                    .map(|mask| (0..n).filter(|&a| mask >> a & 1 == 1).collect())
                    .collect()
            })
            .collect();
        cartesian(&per_dim)
    }

    /// All subcubes: subgrids with one or two directions per dimension.
    pub fn subcubes(&self) -> Vec<Subgrid> {
        let per_dim: Vec<Vec<Vec<usize>>> = self
            .shape
            .dims()
            .iter()
            .map(|&n| {
                let mut choices: Vec<Vec<usize>> = (0..n).map(|a| vec![a]).collect();
                for a in 0..n {
                    for b in a + 1..n {
                        choices.push(vec![a, b]);
                    }
                }
                choices
            })
            .collect();
        cartesian(&per_dim)
    }

    /// True when every line carries a transitive tournament.
    pub fn all_lines_transitive(&self) -> bool {
        for i in 0..self.shape.d() {
            let n = self.shape.dims()[i];
            for m in &self.lines[i] {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            if a != b && b != c && a != c && m[a][b] == 1 && m[b][c] == 1 && m[a][c] != 1 {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

fn cartesian(per_dim: &[Vec<Vec<usize>>]) -> Vec<Subgrid> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_dim.len()];
    loop {
        out.push(Subgrid {
            directions: idx
                .iter()
                .enumerate()
                .map(|(i, &k)| per_dim[i][k].clone())
                .collect(),
        });
        let mut k = per_dim.len();
        while k > 0 {
            idx[k - 1] += 1;
            if idx[k - 1] < per_dim[k - 1].len() {
                break;
            }
            idx[k - 1] = 0;
            k -= 1;
        }
        if k == 0 {
            return out;
        }
    }
}

/// Remaining-coordinate tuples of all lines along `dim`, lexicographic.
fn line_coords(shape: &GridShape, dim: usize) -> Vec<Vec<usize>> {
    let others: Vec<usize> = (0..shape.d())
        .filter(|&k| k != dim)
        .map(|k| shape.dims()[k])
        .collect();
    if others.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; others.len()];
    loop {
        out.push(cur.clone());
        let mut k = others.len();
        while k > 0 {
            cur[k - 1] += 1;
            if cur[k - 1] < others[k - 1] {
                break;
            }
            cur[k - 1] = 0;
            k -= 1;
        }
        if k == 0 {
            return out;
        }
    }
}

/// Orients the grid of a colored point set: for vertices differing in
/// dimension `i`, the edge points from `v'` to `v` exactly when the
/// class-`i` point of `v'` lies above the colorful hyperplane spanned by
/// the points of `v`. Weak general position and well-separation are
/// verified first.
pub fn build_sigma(p: &ColoredPointSet) -> Result<GridOrientation, GridError> {
    let wgp = check_weak_general_position(p);
    if !wgp.satisfied {
        return Err(GridError::PreconditionFailed(Box::new(
            PreconditionFailure::WeakPosition(wgp),
        )));
    }
    let ws = check_well_separated(p);
    if !ws.satisfied {
        return Err(GridError::PreconditionFailed(Box::new(
            PreconditionFailure::Separation(ws),
        )));
    }
    build_sigma_unchecked(p)
}

/// The orientation construction without the precondition checks; exposed
/// for callers that have already validated the instance.
pub fn build_sigma_unchecked(p: &ColoredPointSet) -> Result<GridOrientation, GridError> {
    let d = p.dimension();
    let shape = GridShape::new(p.class_sizes()).expect("classes are nonempty");
    let mut failure: Option<GridError> = None;
    let orientation = GridOrientation::from_fn(shape, |i, line, a, b| {
        if failure.is_some() {
            return false;
        }
        // Spanning points of the vertex holding `a` in dimension `i`, in
        // class order.
        let mut span: Vec<Point> = Vec::with_capacity(d);
        let mut t = 0;
        for k in 0..d {
            if k == i {
                span.push(p.class(i)[a].clone());
            } else {
                span.push(p.class(k)[line[t]].clone());
                t += 1;
            }
        }
        let h = match hyperplane_through(&span) {
            Ok(h) => h,
            Err(_) => {
                failure = Some(GridError::OnPredicate { dim: i, index: a });
                return false;
            }
        };
        match h.side(&p.class(i)[b]) {
            // The other endpoint's point above this vertex's hyperplane
            // orients the edge into this vertex, so nothing leaves `a`.
            Sign::Above => false,
            Sign::Below => true,
            Sign::On => {
                failure = Some(GridError::OnPredicate { dim: i, index: b });
                false
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(orientation),
    }
}

/// All orientations of a shape, as an exhaustive deterministic sweep:
/// edge `k` of the lexicographic edge list (dimension, line rank, pair)
/// follows bit `k` of the iteration index (`1` orients the pair from its
/// smaller to its larger position). Intended as a test oracle; refuses
/// shapes with more than `max_edges` edges.
pub fn enumerate_orientations(
    shape: &GridShape,
    max_edges: u32,
) -> Result<Vec<GridOrientation>, GridError> {
    let edges = shape.edge_count();
    if edges > max_edges as u128 {
        return Err(GridError::TooLarge {
            required: edges,
            budget: max_edges as u128,
        });
    }
    let edges = edges as u32;
    let mut out = Vec::with_capacity(1usize << edges);
    for word in 0u64..1u64 << edges {
        let mut k = 0;
        let o = GridOrientation::from_fn(shape.clone(), |_, _, _, _| {
            let bit = word >> k & 1 == 1;
            k += 1;
            bit
        })
        .expect("edge budget already checked");
        out.push(o);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_i;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cps(dimension: usize, classes: &[&[&[i64]]]) -> ColoredPointSet {
        ColoredPointSet::new(
            dimension,
            classes
                .iter()
                .map(|class| class.iter().map(|c| point_i(c)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn v(coords: &[usize]) -> GridVertex {
        GridVertex::new(coords.to_vec())
    }

    fn cyclic_2x2() -> GridOrientation {
        // (0,0) -> (1,0) -> (1,1) -> (0,1) -> (0,0).
        GridOrientation::from_fn(GridShape::new(vec![2, 2]).unwrap(), |dim, line, _, _| {
            if dim == 0 {
                line[0] == 0
            } else {
                line[0] == 1
            }
        })
        .unwrap()
    }

    #[test]
    fn sigma_1d_points_toward_larger_values() {
        let p = cps(1, &[&[&[0], &[1], &[2]]]);
        let o = build_sigma(&p).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert_eq!(o.is_outgoing(&v(&[a]), 0, b), b > a);
                }
            }
        }
        // The largest point is the sink.
        assert_eq!(o.outmap(&v(&[2])).unwrap(), Outmap { components: vec![0] });
        assert_eq!(o.outmap(&v(&[0])).unwrap(), Outmap { components: vec![2] });
        assert!(o.is_uso(UsoMode::Full).unwrap().uso);
        assert!(o.is_uso(UsoMode::Lemma21).unwrap().uso);
    }

    #[test]
    fn sigma_rejects_bad_preconditions() {
        let not_weak = cps(2, &[&[&[0, 0], &[2, 2]], &[&[1, 1], &[5, 0]]]);
        assert!(matches!(
            build_sigma(&not_weak),
            Err(GridError::PreconditionFailed(why))
                if matches!(*why, PreconditionFailure::WeakPosition(_))
        ));
        let not_separated = cps(2, &[&[&[0, 0], &[2, 0]], &[&[1, 1], &[1, -1]]]);
        assert!(matches!(
            build_sigma(&not_separated),
            Err(GridError::PreconditionFailed(why))
                if matches!(*why, PreconditionFailure::Separation(_))
        ));
    }

    #[test]
    fn sigma_2d_lines_are_transitive_and_outmaps_biject() {
        let p = cps(
            2,
            &[
                &[&[0, 0], &[1, 3], &[-1, 5]],
                &[&[10, 1], &[11, 4], &[10, 6]],
            ],
        );
        assert!(check_well_separated(&p).satisfied);
        assert!(check_weak_general_position(&p).satisfied);
        let o = build_sigma(&p).unwrap();
        assert!(o.all_lines_transitive());
        let (_, bijection) = o.outmap_table().unwrap();
        assert!(bijection);
        assert!(o.is_uso(UsoMode::Full).unwrap().uso);
    }

    #[test]
    fn sigma_agrees_from_both_edge_endpoints() {
        let p = cps(
            2,
            &[
                &[&[0, 0], &[1, 3], &[-1, 5]],
                &[&[10, 1], &[11, 4], &[10, 6]],
            ],
        );
        let o = build_sigma(&p).unwrap();
        // Recompute each edge from the other endpoint's hyperplane: the
        // point of `v` must lie below the hyperplane of `v'` exactly when
        // the point of `v'` lies above the hyperplane of `v`.
        for a in 0..3usize {
            for b in 0..3usize {
                if a == b {
                    continue;
                }
                for other in 0..3usize {
                    for (dim, mk) in [(0usize, true), (1usize, false)] {
                        let (va, vb) = if mk {
                            (v(&[a, other]), v(&[b, other]))
                        } else {
                            (v(&[other, a]), v(&[other, b]))
                        };
                        let span_b: Vec<Point> = if mk {
                            vec![p.class(0)[b].clone(), p.class(1)[other].clone()]
                        } else {
                            vec![p.class(0)[other].clone(), p.class(1)[b].clone()]
                        };
                        let h_b = hyperplane_through(&span_b).unwrap();
                        // The edge leaves `va` iff its own point lies
                        // above the hyperplane of the other endpoint.
                        let from_other_end = h_b.side(&p.class(dim)[a]) == Sign::Above;
                        let _ = vb;
                        assert_eq!(o.is_outgoing(&va, dim, b), from_other_end);
                    }
                }
            }
        }
    }

    #[test]
    fn outmap_of_toward_lower_orientation_is_the_coordinates() {
        let shape = GridShape::new(vec![2, 3]).unwrap();
        let o = GridOrientation::toward_lower(shape).unwrap();
        for vert in o.shape().vertices() {
            let om = o.outmap(&vert).unwrap();
            assert_eq!(om.components, vert.coords);
        }
        let (_, bijection) = o.outmap_table().unwrap();
        assert!(bijection);
    }

    #[test]
    fn outmap_rejects_out_of_range() {
        let o = GridOrientation::toward_lower(GridShape::new(vec![2, 2]).unwrap()).unwrap();
        assert!(matches!(
            o.outmap(&v(&[2, 0])),
            Err(GridError::OutOfRange(_))
        ));
    }

    #[test]
    fn cyclic_square_has_no_sink_and_fails_everywhere() {
        let o = cyclic_2x2();
        assert!(!o.is_cube_uso().unwrap());
        for mode in [UsoMode::Full, UsoMode::Lemma21] {
            let report = o.is_uso(mode).unwrap();
            assert!(!report.uso);
            let witness = report.violation.unwrap();
            assert_eq!(witness.subgrid, Subgrid::full(o.shape()));
            assert_eq!(witness.sinks, Vec::<GridVertex>::new());
        }
        let (_, bijection) = o.outmap_table().unwrap();
        assert!(!bijection);
        assert!(matches!(
            o.find_vertex_with_outmap(&Outmap { components: vec![0, 0] }),
            Err(GridError::NotFound)
        ));
    }

    #[test]
    fn all_toward_a_corner_is_uso() {
        let o = GridOrientation::toward_lower(GridShape::new(vec![2, 2]).unwrap()).unwrap();
        assert!(o.is_cube_uso().unwrap());
        assert!(o.is_uso(UsoMode::Full).unwrap().uso);
        assert!(o.is_uso(UsoMode::Lemma21).unwrap().uso);
    }

    #[test]
    fn cube_criterion_rejects_non_cubes() {
        let o = GridOrientation::toward_lower(GridShape::new(vec![3, 2]).unwrap()).unwrap();
        assert!(matches!(o.is_cube_uso(), Err(GridError::NotACube { .. })));
    }

    #[test]
    fn find_vertex_with_outmap_examples() {
        let o = GridOrientation::toward_lower(GridShape::new(vec![2, 3]).unwrap()).unwrap();
        assert_eq!(
            o.find_vertex_with_outmap(&Outmap { components: vec![1, 2] }).unwrap(),
            v(&[1, 2])
        );
        assert_eq!(
            o.find_vertex_with_outmap(&Outmap { components: vec![0, 0] }).unwrap(),
            v(&[0, 0])
        );
        assert!(matches!(
            o.find_vertex_with_outmap(&Outmap { components: vec![5, 0] }),
            Err(GridError::NotFound)
        ));
    }

    #[test]
    fn modes_agree_on_all_square_orientations() {
        let shape = GridShape::new(vec![2, 2]).unwrap();
        let all = enumerate_orientations(&shape, 8).unwrap();
        assert_eq!(all.len(), 16);
        let mut usos = 0;
        for o in &all {
            let full = o.is_uso(UsoMode::Full).unwrap().uso;
            let lemma = o.is_uso(UsoMode::Lemma21).unwrap().uso;
            let cube = o.is_cube_uso().unwrap();
            assert_eq!(full, lemma);
            assert_eq!(full, cube);
            if full {
                usos += 1;
                let (_, bijection) = o.outmap_table().unwrap();
                assert!(bijection);
            }
        }
        // The square has 12 unique-sink orientations.
        assert_eq!(usos, 12);
    }

    #[test]
    fn restriction_commutes_with_sigma() {
        let p = cps(
            2,
            &[
                &[&[0, 0], &[1, 3], &[-1, 5]],
                &[&[10, 1], &[11, 4], &[10, 6]],
            ],
        );
        let o = build_sigma(&p).unwrap();
        let sub = Subgrid {
            directions: vec![vec![0, 2], vec![1, 2]],
        };
        let restricted = o.restrict(&sub).unwrap();
        let sub_instance = ColoredPointSet::new(
            2,
            vec![
                vec![p.class(0)[0].clone(), p.class(0)[2].clone()],
                vec![p.class(1)[1].clone(), p.class(1)[2].clone()],
            ],
        )
        .unwrap();
        assert_eq!(restricted, build_sigma(&sub_instance).unwrap());
    }

    #[test]
    fn random_sigma_restrictions_commute() {
        let mut rng = StdRng::seed_from_u64(321);
        let mut done = 0;
        while done < 10 {
            // Two x-separated clusters are well-separated.
            let classes: Vec<Vec<Point>> = (0..2)
                .map(|i| {
                    (0..3)
                        .map(|_| {
                            point_i(&[
                                rng.random_range(0..6) + i * 20,
                                rng.random_range(-9..9),
                            ])
                        })
                        .collect()
                })
                .collect();
            let Ok(p) = ColoredPointSet::new(2, classes) else {
                continue;
            };
            if !check_weak_general_position(&p).satisfied
                || !check_well_separated(&p).satisfied
            {
                continue;
            }
            let o = build_sigma(&p).unwrap();
            let dirs: Vec<Vec<usize>> = (0..2)
                .map(|_| {
                    let mask = rng.random_range(1..8usize);
                    (0..3).filter(|&a| mask >> a & 1 == 1).collect()
                })
                .collect();
            let sub = Subgrid { directions: dirs.clone() };
            let sub_instance = ColoredPointSet::new(
                2,
                (0..2)
                    .map(|i| dirs[i].iter().map(|&a| p.class(i)[a].clone()).collect())
                    .collect(),
            )
            .unwrap();
            assert_eq!(o.restrict(&sub).unwrap(), build_sigma(&sub_instance).unwrap());
            done += 1;
        }
    }

    #[test]
    fn normalization_drops_singleton_dimensions() {
        let o = GridOrientation::toward_lower(GridShape::new(vec![3, 1, 2]).unwrap()).unwrap();
        let n = o.normalized();
        assert_eq!(n.shape().dims(), &[3, 2]);
        assert_eq!(
            n.outmap(&v(&[2, 1])).unwrap(),
            Outmap { components: vec![2, 1] }
        );
    }

    #[test]
    fn serialization_round_trips_bit_exactly() {
        let o = cyclic_2x2();
        let json1 = serde_json::to_string(&o).unwrap();
        let back: GridOrientation = serde_json::from_str(&json1).unwrap();
        assert_eq!(back, o);
        let json2 = serde_json::to_string(&back).unwrap();
        assert_eq!(json1, json2);
    }

    #[test]
    fn budgets_are_enforced() {
        assert!(matches!(
            GridOrientation::toward_lower(GridShape::new(vec![2000, 2000]).unwrap()),
            Err(GridError::TooLarge { .. })
        ));
        let big_line = GridOrientation::toward_lower(GridShape::new(vec![30]).unwrap()).unwrap();
        assert!(matches!(
            big_line.is_uso(UsoMode::Full),
            Err(GridError::TooLarge { .. })
        ));
        let shape = GridShape::new(vec![3, 3]).unwrap();
        assert!(matches!(
            enumerate_orientations(&shape, 8),
            Err(GridError::TooLarge { .. })
        ));
    }
}
