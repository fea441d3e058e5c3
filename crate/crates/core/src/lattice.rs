//! Vertices and the lattice of achievable supports of a standard-form
//! polytope, which is order-isomorphic to its face lattice.
//!
//! [`support_lattice`] builds the lattice as the join-closure of the vertex
//! supports. [`face_lattice_oracle`] computes the face lattice independently,
//! from zero-sets and vertex incidences only, and exists to cross-check the
//! first path on small inputs.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::PolytopeError;
use crate::linalg::{lp_solve, max_min_with_free, LinearSystem, LpProblem, LpResult};
use crate::polytope::{ConstraintSystem, FaceKey};
use crate::rational::Rational;
use crate::support::SupportVector;

/// Default cell limit for [`face_lattice_oracle`].
pub const DEFAULT_ORACLE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub support: SupportVector,
    pub point: Vec<Rational>,
}

/// Enumerates all vertices, sorted by support bitstring.
///
/// Candidate supports are grown one column at a time in increasing index
/// order. A branch is abandoned as soon as its columns become linearly
/// dependent, once it is itself a vertex support, or when no point of `P`
/// that vanishes on the skipped columns is positive on all chosen ones.
pub fn enumerate_vertices(system: &ConstraintSystem) -> Result<Vec<Vertex>, PolytopeError> {
    let n = system.num_cells();
    let rank = system.rank();
    let sys = system.system();
    let mut out = Vec::new();
    if sys.b.iter().all(Rational::is_zero) {
        // bounded and homogeneous: P = {0}
        out.push(Vertex {
            support: SupportVector::empty(n),
            point: vec![Rational::ZERO; n],
        });
        return Ok(out);
    }
    let mut chosen = Vec::new();
    grow(sys, n, rank, 0, &mut chosen, &mut out);
    out.sort_by(|a, b| a.support.cmp_bits(&b.support));
    Ok(out)
}

fn grow(
    sys: &LinearSystem,
    n: usize,
    rank: usize,
    next: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vertex>,
) {
    for c in next..n {
        chosen.push(c);
        let sub = sys.restrict_columns(chosen);
        let independent = sub.a.rank() == chosen.len();
        if independent {
            match basic_point(&sub, chosen, n) {
                Some(v) => out.push(v),
                None => {
                    if chosen.len() < rank && can_extend(sys, n, chosen) {
                        grow(sys, n, rank, c + 1, chosen, out);
                    }
                }
            }
        }
        chosen.pop();
    }
}

/// The unique solution of the restricted system, if it is a vertex with
/// support exactly `cols`.
fn basic_point(sub: &LinearSystem, cols: &[usize], n: usize) -> Option<Vertex> {
    let y = sub.unique_solution()?;
    if !y.iter().all(Rational::is_positive) {
        return None;
    }
    let mut point = vec![Rational::ZERO; n];
    for (&c, v) in cols.iter().zip(y) {
        point[c] = v;
    }
    Some(Vertex {
        support: SupportVector::from_indices(n, cols.iter().copied()),
        point,
    })
}

fn can_extend(sys: &LinearSystem, n: usize, chosen: &[usize]) -> bool {
    let last = *chosen.last().expect("nonempty");
    let required = SupportVector::from_indices(n, chosen.iter().copied());
    let free = SupportVector::from_indices(n, last + 1..n);
    max_min_with_free(sys, &required, &free).is_positive()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeNode {
    pub key: FaceKey,
    pub dimension: i64,
    pub witness: Option<Vec<Rational>>,
    pub atom: bool,
}

/// Finite lattice of achievable supports with an adjoined bottom.
///
/// Node 0 is always the bottom; the remaining nodes are sorted by support
/// size and then bitstring. Edges are Hasse covers `(lower, upper)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportLattice {
    cells: usize,
    nodes: Vec<LatticeNode>,
    edges: Vec<(usize, usize)>,
    index: HashMap<SupportVector, usize>,
}

impl SupportLattice {
    /// Builds the lattice structure (order, covers, atoms) over the given
    /// nodes. A bottom node is added if absent.
    pub fn from_nodes(cells: usize, nodes: Vec<LatticeNode>) -> Self {
        let mut supports: Vec<LatticeNode> = nodes
            .into_iter()
            .filter(|n| n.key != FaceKey::Bottom)
            .collect();
        supports.sort_by(|a, b| {
            let (sa, sb) = (a.key.support().unwrap(), b.key.support().unwrap());
            sa.count().cmp(&sb.count()).then_with(|| sa.cmp_bits(sb))
        });
        let mut all = Vec::with_capacity(supports.len() + 1);
        all.push(LatticeNode {
            key: FaceKey::Bottom,
            dimension: -1,
            witness: None,
            atom: false,
        });
        all.extend(supports);
        let index: HashMap<SupportVector, usize> = all
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.key.support().map(|s| (s.clone(), i)))
            .collect();

        let edges = hasse_edges(&all);
        let mut lat = SupportLattice {
            cells,
            nodes: all,
            edges,
            index,
        };
        let atoms: Vec<usize> = lat
            .edges
            .iter()
            .filter(|(lo, _)| *lo == 0)
            .map(|&(_, hi)| hi)
            .collect();
        for (i, node) in lat.nodes.iter_mut().enumerate() {
            node.atom = atoms.contains(&i);
        }
        lat
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn nodes(&self) -> &[LatticeNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    /// Nodes without upper covers; exactly one in a lattice.
    pub fn maximal_nodes(&self) -> Vec<usize> {
        let has_upper: HashSet<usize> = self.edges.iter().map(|&(lo, _)| lo).collect();
        (0..self.nodes.len())
            .filter(|i| !has_upper.contains(i))
            .collect()
    }

    pub fn top(&self) -> usize {
        *self.maximal_nodes().last().expect("nonempty lattice")
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].atom)
            .collect()
    }

    pub fn coatoms(&self) -> Vec<usize> {
        let top = self.top();
        self.edges
            .iter()
            .filter(|&&(_, hi)| hi == top)
            .map(|&(lo, _)| lo)
            .collect()
    }

    pub fn node_of(&self, support: &SupportVector) -> Option<usize> {
        self.index.get(support).copied()
    }

    pub fn key(&self, i: usize) -> &FaceKey {
        &self.nodes[i].key
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.nodes[a].key.le(&self.nodes[b].key)
    }

    /// Componentwise disjunction of two nodes, which is again a node.
    pub fn join(&self, a: &FaceKey, b: &FaceKey) -> Result<usize, PolytopeError> {
        let lookup = |k: &FaceKey| match k {
            FaceKey::Bottom => Some(0),
            FaceKey::Support(s) => self.node_of(s),
        };
        lookup(a).ok_or(PolytopeError::NotANode)?;
        lookup(b).ok_or(PolytopeError::NotANode)?;
        match (a, b) {
            (FaceKey::Bottom, k) | (k, FaceKey::Bottom) => lookup(k).ok_or(PolytopeError::NotANode),
            (FaceKey::Support(x), FaceKey::Support(y)) => {
                self.node_of(&x.join(y)).ok_or(PolytopeError::NotANode)
            }
        }
    }

    /// Greatest lower bound computed inside the node set.
    pub fn glb(&self, members: &[usize]) -> Option<usize> {
        let lower: Vec<usize> = (0..self.nodes.len())
            .filter(|&i| members.iter().all(|&m| self.le(i, m)))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&c| lower.iter().all(|&o| self.le(o, c)))
    }

    /// Copy of the lattice with one node removed; used to build negative
    /// test cases for [`check_lattice_properties`].
    pub fn without_node(&self, i: usize) -> SupportLattice {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, n)| n.clone())
            .collect();
        SupportLattice::from_nodes(self.cells, nodes)
    }

    /// Graphviz rendering: nodes labelled `support/dim`, edges are covers.
    pub fn to_dot(&self) -> String {
        let mut s = String::from(
            "digraph support_lattice {\n  rankdir=BT;\n  node [shape=box, fontname=monospace];\n",
        );
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}/{}\"];", n.key, n.dimension);
        }
        for (lo, hi) in &self.edges {
            let _ = writeln!(s, "  n{lo} -> n{hi};");
        }
        s.push_str("}\n");
        s
    }
}

fn hasse_edges(nodes: &[LatticeNode]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    // node 0 is bottom; nodes 1.. are sorted by support size
    for hi in 1..nodes.len() {
        let top = nodes[hi].key.support().expect("non-bottom");
        let mut lower: Vec<usize> = (1..hi)
            .filter(|&lo| {
                nodes[lo]
                    .key
                    .support()
                    .expect("non-bottom")
                    .is_strict_subset(top)
            })
            .collect();
        if lower.is_empty() {
            edges.push((0, hi));
            continue;
        }
        lower.sort_by_key(|&lo| std::cmp::Reverse(nodes[lo].key.support().unwrap().count()));
        let mut maximal: Vec<usize> = Vec::new();
        for lo in lower {
            let s = nodes[lo].key.support().unwrap();
            if !maximal
                .iter()
                .any(|&m| s.is_strict_subset(nodes[m].key.support().unwrap()))
            {
                maximal.push(lo);
            }
        }
        maximal.sort_unstable();
        edges.extend(maximal.into_iter().map(|lo| (lo, hi)));
    }
    edges.sort_unstable();
    edges
}

fn average(points: &[&Vec<Rational>], n: usize) -> Vec<Rational> {
    let mut sum = vec![Rational::ZERO; n];
    for p in points {
        for (acc, v) in sum.iter_mut().zip(p.iter()) {
            if !v.is_zero() {
                *acc += v;
            }
        }
    }
    let inv = Rational::from(points.len()).recip();
    sum.iter().map(|v| v * &inv).collect()
}

/// The lattice of achievable supports: join-closure of the vertex supports,
/// plus bottom. Every node is checked achievable and carries its face
/// dimension and a relative-interior witness.
pub fn support_lattice(system: &ConstraintSystem) -> Result<SupportLattice, PolytopeError> {
    let vertices = enumerate_vertices(system)?;
    support_lattice_from_vertices(system, &vertices)
}

pub fn support_lattice_from_vertices(
    system: &ConstraintSystem,
    vertices: &[Vertex],
) -> Result<SupportLattice, PolytopeError> {
    let n = system.num_cells();
    let atoms: Vec<SupportVector> = vertices.iter().map(|v| v.support.clone()).collect();
    let mut seen: HashSet<SupportVector> = atoms.iter().cloned().collect();
    let mut queue: VecDeque<SupportVector> = atoms.iter().cloned().collect();
    while let Some(s) = queue.pop_front() {
        for a in &atoms {
            let j = s.join(a);
            if !seen.contains(&j) {
                seen.insert(j.clone());
                queue.push_back(j);
            }
        }
    }
    let sys = system.system();
    let mut nodes = Vec::with_capacity(seen.len());
    for s in seen {
        if !system.is_achievable(&s) {
            return Err(PolytopeError::Precondition(format!(
                "join of vertex supports {s} is not achievable"
            )));
        }
        let inside: Vec<&Vec<Rational>> = vertices
            .iter()
            .filter(|v| v.support.is_subset(&s))
            .map(|v| &v.point)
            .collect();
        let witness = average(&inside, n);
        debug_assert_eq!(SupportVector::of(&witness), s);
        let cols = s.indices();
        let dimension = cols.len() as i64 - sys.a.select_columns(&cols).rank() as i64;
        nodes.push(LatticeNode {
            key: FaceKey::Support(s),
            dimension,
            witness: Some(witness),
            atom: false,
        });
    }
    Ok(SupportLattice::from_nodes(n, nodes))
}

/// Lattice meet: the closure of the componentwise conjunction, or bottom.
pub fn meet(
    system: &ConstraintSystem,
    lattice: &SupportLattice,
    a: &FaceKey,
    b: &FaceKey,
) -> Result<usize, PolytopeError> {
    let find = |k: &FaceKey| match k {
        FaceKey::Bottom => Some(0),
        FaceKey::Support(s) => lattice.node_of(s),
    };
    find(a).ok_or(PolytopeError::NotANode)?;
    find(b).ok_or(PolytopeError::NotANode)?;
    let (FaceKey::Support(x), FaceKey::Support(y)) = (a, b) else {
        return Ok(0);
    };
    let c = system.support_closure(&x.and(y));
    if c.is_empty() {
        return Ok(0);
    }
    lattice.node_of(&c.support).ok_or(PolytopeError::NotANode)
}

/// The face lattice computed without looking at supports of interior points.
///
/// Faces are the sets `F_Z = {x ∈ P : x_i = 0 for i ∈ Z}` for all zero-sets
/// `Z`; feasibility is decided by LP (points returned by earlier LPs are
/// reused as certificates), and each face is identified by the vertices it
/// contains. Node keys are the joins of those vertices' supports, dimensions
/// come from the affine rank of the vertices, and covers from vertex-set
/// inclusion.
#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub max_cells: usize,
    pub force: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_cells: DEFAULT_ORACLE_LIMIT,
            force: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleLattice {
    /// Faces in the node order of `lattice`; each lists indices into
    /// `vertices`.
    pub vertex_sets: Vec<Vec<usize>>,
    pub vertices: Vec<Vertex>,
    pub lattice: SupportLattice,
}

pub fn face_lattice_oracle(
    system: &ConstraintSystem,
    vertices: &[Vertex],
    options: &OracleOptions,
) -> Result<OracleLattice, PolytopeError> {
    let n = system.num_cells();
    if n > options.max_cells && !options.force {
        return Err(PolytopeError::OracleTooLarge {
            cells: n,
            limit: options.max_cells,
        });
    }
    let sys = system.system();
    let mut certificates: Vec<Vec<Rational>> = Vec::new();
    let mut faces: HashSet<Vec<usize>> = HashSet::new();
    let mut zero = Vec::new();
    explore_zero_sets(
        sys,
        vertices,
        n,
        0,
        &mut zero,
        &mut certificates,
        &mut faces,
    );

    let mut nodes = Vec::with_capacity(faces.len() + 1);
    let mut sets = Vec::new();
    for vs in faces {
        let members: Vec<&Vertex> = vs.iter().map(|&i| &vertices[i]).collect();
        let key = members
            .iter()
            .fold(SupportVector::empty(n), |acc, v| acc.join(&v.support));
        let points: Vec<&Vec<Rational>> = members.iter().map(|v| &v.point).collect();
        nodes.push(LatticeNode {
            key: FaceKey::Support(key.clone()),
            dimension: affine_dimension(&points),
            witness: Some(average(&points, n)),
            atom: false,
        });
        sets.push((key, vs));
    }
    let lattice = SupportLattice::from_nodes(n, nodes);
    let mut vertex_sets = vec![Vec::new(); lattice.len()];
    for (key, vs) in sets {
        let i = lattice.node_of(&key).expect("node was inserted");
        vertex_sets[i] = vs;
    }
    // The oracle's own order is vertex-set inclusion; the support keys must
    // reproduce it exactly, otherwise the keyed lattice would be meaningless.
    for i in 1..lattice.len() {
        for j in 1..lattice.len() {
            let by_sets = vertex_sets[i].iter().all(|v| vertex_sets[j].contains(v));
            assert_eq!(
                by_sets,
                lattice.le(i, j),
                "vertex-set order disagrees with keys"
            );
        }
    }
    Ok(OracleLattice {
        vertex_sets,
        vertices: vertices.to_vec(),
        lattice,
    })
}

fn explore_zero_sets(
    sys: &LinearSystem,
    vertices: &[Vertex],
    n: usize,
    next: usize,
    zero: &mut Vec<usize>,
    certificates: &mut Vec<Vec<Rational>>,
    faces: &mut HashSet<Vec<usize>>,
) {
    if !face_feasible(sys, n, zero, certificates) {
        return;
    }
    let members: Vec<usize> = vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| zero.iter().all(|&i| v.point[i].is_zero()))
        .map(|(i, _)| i)
        .collect();
    faces.insert(members);
    for c in next..n {
        zero.push(c);
        explore_zero_sets(sys, vertices, n, c + 1, zero, certificates, faces);
        zero.pop();
    }
}

fn face_feasible(
    sys: &LinearSystem,
    n: usize,
    zero: &[usize],
    certificates: &mut Vec<Vec<Rational>>,
) -> bool {
    if certificates
        .iter()
        .any(|p| zero.iter().all(|&i| p[i].is_zero()))
    {
        return true;
    }
    let keep: Vec<usize> = (0..n).filter(|i| !zero.contains(i)).collect();
    match lp_solve(&LpProblem::feasibility(sys.restrict_columns(&keep))) {
        LpResult::Optimal { solution, .. } => {
            let mut p = vec![Rational::ZERO; n];
            for (&c, v) in keep.iter().zip(solution) {
                p[c] = v;
            }
            certificates.push(p);
            true
        }
        _ => false,
    }
}

/// Dimension of the affine hull of a point set (`-1` when empty).
fn affine_dimension(points: &[&Vec<Rational>]) -> i64 {
    let Some((first, rest)) = points.split_first() else {
        return -1;
    };
    if rest.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    crate::linalg::RationalMatrix::from_rows(rows).rank() as i64
}

/// Pass/fail for each structural property of a finite face lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeReport {
    pub unique_bottom_and_top: bool,
    pub join_closed: bool,
    pub atomistic: bool,
    pub coatomistic: bool,
    pub graded: bool,
    /// Length of every maximal chain, in covers, when graded.
    pub chain_length: Option<usize>,
}

impl LatticeReport {
    pub fn all_pass(&self) -> bool {
        self.unique_bottom_and_top
            && self.join_closed
            && self.atomistic
            && self.coatomistic
            && self.graded
    }

    pub fn lines(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("unique bottom and top", self.unique_bottom_and_top),
            ("join-closed", self.join_closed),
            ("atomistic", self.atomistic),
            ("coatomistic", self.coatomistic),
            ("graded", self.graded),
        ]
    }
}

pub fn check_lattice_properties(lattice: &SupportLattice) -> LatticeReport {
    let len = lattice.len();
    let minimal = (0..len)
        .filter(|&i| !lattice.edges.iter().any(|&(_, hi)| hi == i))
        .count();
    let unique_bottom_and_top = minimal == 1 && lattice.maximal_nodes().len() == 1;

    let supports: Vec<&SupportVector> = lattice.nodes[1..]
        .iter()
        .map(|n| n.key.support().expect("non-bottom"))
        .collect();
    let join_closed = supports.iter().enumerate().all(|(i, a)| {
        supports[i + 1..]
            .iter()
            .all(|b| lattice.node_of(&a.join(b)).is_some())
    });

    let atoms = lattice.atoms();
    let atomistic = (1..len).all(|i| {
        let s = lattice.key(i).support().expect("non-bottom");
        let below: Vec<&SupportVector> = atoms
            .iter()
            .filter_map(|&a| lattice.key(a).support())
            .filter(|a| a.is_subset(s))
            .collect();
        let j = below
            .iter()
            .fold(SupportVector::empty(lattice.cells), |acc, a| acc.join(a));
        !below.is_empty() && j == *s
    });

    let top = lattice.top();
    let coatoms = lattice.coatoms();
    let coatomistic = unique_bottom_and_top
        && (0..len).filter(|&i| i != top).all(|i| {
            let above: Vec<usize> = coatoms
                .iter()
                .copied()
                .filter(|&c| lattice.le(i, c))
                .collect();
            !above.is_empty() && lattice.glb(&above) == Some(i)
        });

    // longest and shortest cover-chains from bottom must agree everywhere
    let mut shortest = vec![usize::MAX; len];
    let mut longest = vec![0usize; len];
    shortest[0] = 0;
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); len];
    for &(lo, hi) in &lattice.edges {
        upper[lo].push(hi);
    }
    // node order is a linear extension (bottom first, then by size)
    for i in 0..len {
        if shortest[i] == usize::MAX {
            continue;
        }
        for &j in &upper[i] {
            shortest[j] = shortest[j].min(shortest[i] + 1);
            longest[j] = longest[j].max(longest[i] + 1);
        }
    }
    let dims_step = lattice
        .edges
        .iter()
        .all(|&(lo, hi)| lattice.nodes[hi].dimension == lattice.nodes[lo].dimension + 1);
    let graded = unique_bottom_and_top && dims_step && (0..len).all(|i| shortest[i] == longest[i]);
    let chain_length = graded.then(|| longest[top]);
    LatticeReport {
        unique_bottom_and_top,
        join_closed,
        atomistic,
        coatomistic,
        graded,
        chain_length,
    }
}

/// True iff the identity on keys is an order-isomorphism between the two
/// lattices: same node keys and the same order.
pub fn order_isomorphic(a: &SupportLattice, b: &SupportLattice) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let map: Option<Vec<usize>> = (0..a.len())
        .map(|i| match a.key(i) {
            FaceKey::Bottom => Some(0),
            FaceKey::Support(s) => b.node_of(s),
        })
        .collect();
    let Some(map) = map else {
        return false;
    };
    for i in 0..a.len() {
        for j in 0..a.len() {
            if a.le(i, j) != b.le(map[i], map[j]) {
                return false;
            }
        }
    }
    let ea: HashSet<(usize, usize)> = a.edges.iter().map(|&(x, y)| (map[x], map[y])).collect();
    let eb: HashSet<(usize, usize)> = b.edges.iter().copied().collect();
    ea == eb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Scenario;

    fn system_for(vars: &[&str], contexts: &[&[&str]]) -> ConstraintSystem {
        let s = Scenario::new(
            vars.iter().copied(),
            ["0", "1"],
            contexts.iter().map(|c| c.to_vec()),
        )
        .unwrap();
        ConstraintSystem::no_signalling(&s)
    }

    #[test]
    fn simplex_vertices_are_point_masses() {
        let cs = system_for(&["a", "b"], &[&["a", "b"]]);
        let vs = enumerate_vertices(&cs).unwrap();
        assert_eq!(vs.len(), 4);
        for v in &vs {
            assert_eq!(v.support.count(), 1);
            assert!(v.point.iter().all(|x| x.is_zero() || x.is_one()));
        }
    }

    #[test]
    fn one_variable_lattice() {
        let cs = system_for(&["x"], &[&["x"]]);
        let lat = support_lattice(&cs).unwrap();
        let keys: Vec<String> = lat.nodes().iter().map(|n| n.key.to_string()).collect();
        assert_eq!(keys, ["bottom", "01", "10", "11"]);
        assert_eq!(lat.atoms(), vec![1, 2]);
        assert_eq!(lat.edges(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(check_lattice_properties(&lat).all_pass());
    }

    #[test]
    fn tetrahedron_is_boolean() {
        let cs = system_for(&["a", "b"], &[&["a", "b"]]);
        let lat = support_lattice(&cs).unwrap();
        assert_eq!(lat.len(), 16);
        let report = check_lattice_properties(&lat);
        assert!(report.all_pass());
        assert_eq!(report.chain_length, Some(4));
        let oracle = face_lattice_oracle(
            &cs,
            &enumerate_vertices(&cs).unwrap(),
            &OracleOptions::default(),
        )
        .unwrap();
        assert!(order_isomorphic(&lat, &oracle.lattice));
    }

    #[test]
    fn mutant_lattice_fails() {
        let cs = system_for(&["a", "b"], &[&["a", "b"]]);
        let lat = support_lattice(&cs).unwrap();
        // drop one edge of the tetrahedron (a 2-element support)
        let edge = (1..lat.len())
            .find(|&i| lat.key(i).support().unwrap().count() == 2)
            .unwrap();
        let report = check_lattice_properties(&lat.without_node(edge));
        assert!(!report.join_closed);
        assert!(!report.all_pass());
        // dropping an atom breaks atomisticity
        let report = check_lattice_properties(&lat.without_node(1));
        assert!(!report.atomistic);
    }

    #[test]
    fn oracle_size_guard() {
        let cs = system_for(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let vs = enumerate_vertices(&cs).unwrap();
        let opts = OracleOptions {
            max_cells: 4,
            force: false,
        };
        assert_eq!(
            face_lattice_oracle(&cs, &vs, &opts).unwrap_err(),
            PolytopeError::OracleTooLarge { cells: 8, limit: 4 }
        );
        let forced = OracleOptions {
            force: true,
            ..opts
        };
        assert_eq!(
            face_lattice_oracle(&cs, &vs, &forced)
                .unwrap()
                .lattice
                .len(),
            256
        );
    }

    #[test]
    fn join_and_meet() {
        let cs = system_for(&["x"], &[&["x"]]);
        let lat = support_lattice(&cs).unwrap();
        let a = lat.key(1).clone();
        let b = lat.key(2).clone();
        assert_eq!(lat.join(&a, &b).unwrap(), 3);
        assert_eq!(meet(&cs, &lat, &a, &a).unwrap(), 1);
        assert_eq!(meet(&cs, &lat, &a, &b).unwrap(), 0);
        let bogus = FaceKey::Support(SupportVector::empty(2));
        assert_eq!(lat.join(&bogus, &a), Err(PolytopeError::NotANode));
    }
}
