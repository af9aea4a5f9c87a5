//! Structured triangulations of the unit square and their red refinement.
//!
//! Vertex indices are stable under refinement: a refined mesh keeps every
//! vertex of its parent at the same index and appends the edge midpoints.
//! Each appended vertex remembers the edge it bisects, which is all that is
//! needed to prolongate P1 functions along the hierarchy.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Coordinate tolerance for detecting vertices on the boundary of the square.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<[usize; 2]>,
    boundary_nodes: Vec<usize>,
    interior_nodes: Vec<usize>,
    level: usize,
    /// Number of vertices at each level of the hierarchy, `0..=level`.
    level_vertex_counts: Vec<usize>,
    /// For vertex `level_vertex_counts[0] + k`, the endpoints of the edge it bisects.
    midpoint_parents: Vec<[usize; 2]>,
}

/// Builds an `n x n` grid of squares, each cut along the diagonal from its
/// lower-left to its upper-right corner.
pub fn unit_square_mesh(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::ZeroSubdivisions);
    }
    let stride = n + 1;
    let h = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity(stride * stride);
    for j in 0..=n {
        for i in 0..=n {
            // exact endpoints, so the coordinate boundary test is clean
            let x = if i == n { 1.0 } else { i as f64 * h };
            let y = if j == n { 1.0 } else { j as f64 * h };
            vertices.push([x, y]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let v00 = j * stride + i;
            let v10 = v00 + 1;
            let v01 = v00 + stride;
            let v11 = v01 + 1;
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    let count = vertices.len();
    Mesh::from_parts(vertices, triangles, 0, vec![count], Vec::new())
}

/// Red refinement: every triangle is split into four congruent children
/// through its edge midpoints.
pub fn refine_uniform(mesh: &Mesh) -> Mesh {
    let mut vertices = mesh.vertices.clone();
    let mut midpoint_parents = mesh.midpoint_parents.clone();
    let mut midpoints: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());

    let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point>| -> usize {
        let key = if a < b { (a, b) } else { (b, a) };
        *midpoints.entry(key).or_insert_with(|| {
            let (pa, pb) = (vertices[a], vertices[b]);
            vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
            midpoint_parents.push([key.0, key.1]);
            vertices.len() - 1
        })
    };

    for &[a, b, c] in &mesh.triangles {
        let ab = midpoint(a, b, &mut vertices);
        let bc = midpoint(b, c, &mut vertices);
        let ca = midpoint(c, a, &mut vertices);
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }

    let mut level_vertex_counts = mesh.level_vertex_counts.clone();
    level_vertex_counts.push(vertices.len());
    Mesh::from_parts(vertices, triangles, mesh.level + 1, level_vertex_counts, midpoint_parents)
        .expect("red refinement of a valid mesh is valid")
}

/// `unit_square_mesh(n0)` followed by `levels` uniform refinements; entry `j`
/// is the mesh at level `j`.
pub fn hierarchy(n0: usize, levels: usize) -> Result<Vec<Mesh>> {
    let mut meshes = Vec::with_capacity(levels + 1);
    meshes.push(unit_square_mesh(n0)?);
    for _ in 0..levels {
        let next = refine_uniform(meshes.last().unwrap());
        meshes.push(next);
    }
    Ok(meshes)
}

impl Mesh {
    fn from_parts(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        level: usize,
        level_vertex_counts: Vec<usize>,
        midpoint_parents: Vec<[usize; 2]>,
    ) -> Result<Self> {
        for t in &triangles {
            let area = signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            if !(area > 0.0) {
                return Err(Error::DegenerateTriangle { area });
            }
        }

        let boundary_edges = edges_with_one_triangle(&triangles);

        let mut on_boundary = vec![false; vertices.len()];
        let mut boundary_nodes = Vec::new();
        let mut interior_nodes = Vec::new();
        for (i, p) in vertices.iter().enumerate() {
            if perimeter_parameter(*p).is_some() {
                on_boundary[i] = true;
                boundary_nodes.push(i);
            } else {
                interior_nodes.push(i);
            }
        }
        boundary_nodes.sort_by(|&a, &b| {
            let ta = perimeter_parameter(vertices[a]).unwrap();
            let tb = perimeter_parameter(vertices[b]).unwrap();
            ta.total_cmp(&tb)
        });

        // The coordinate test and the topological test must agree.
        let mut topological = vec![false; vertices.len()];
        for e in &boundary_edges {
            topological[e[0]] = true;
            topological[e[1]] = true;
        }
        assert_eq!(on_boundary, topological, "boundary detection disagrees with edge incidence");

        Ok(Mesh {
            vertices,
            triangles,
            boundary_edges,
            boundary_nodes,
            interior_nodes,
            level,
            level_vertex_counts,
            midpoint_parents,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Boundary edges oriented with the domain on their left.
    pub fn boundary_edges(&self) -> &[[usize; 2]] {
        &self.boundary_edges
    }

    /// Boundary vertices, counterclockwise starting at the origin.
    pub fn boundary_nodes(&self) -> &[usize] {
        &self.boundary_nodes
    }

    pub fn interior_nodes(&self) -> &[usize] {
        &self.interior_nodes
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Vertex count of the mesh at `level` of this hierarchy (`None` above this mesh).
    pub fn vertex_count_at_level(&self, level: usize) -> Option<usize> {
        self.level_vertex_counts.get(level).copied()
    }

    /// Vertex count of the coarser mesh this one was refined from.
    pub fn parent_vertex_count(&self) -> Option<usize> {
        self.level.checked_sub(1).map(|l| self.level_vertex_counts[l])
    }

    /// Endpoints of the edge bisected by `vertex`, or `None` for a vertex of the
    /// coarsest mesh.
    pub fn midpoint_parents(&self, vertex: usize) -> Option<[usize; 2]> {
        vertex.checked_sub(self.level_vertex_counts[0]).and_then(|k| self.midpoint_parents.get(k).copied())
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        signed_area(a, b, c)
    }

    /// Diameter of triangle `t`, i.e. its longest edge.
    pub fn triangle_diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        distance(a, b).max(distance(b, c)).max(distance(c, a))
    }

    /// Global mesh width `h = max_K h_K`.
    pub fn mesh_size(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_diameter(t)).fold(0.0, f64::max)
    }

    /// Number of distinct edges.
    pub fn num_edges(&self) -> usize {
        let mut edges: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }

    /// Whether `coarse` is an ancestor (or copy) of `self` in the same hierarchy.
    pub fn refines(&self, coarse: &Mesh) -> bool {
        coarse.level <= self.level
            && self.level_vertex_counts[..=coarse.level] == coarse.level_vertex_counts[..]
            && self.vertices[..coarse.vertices.len()] == coarse.vertices[..]
    }
}

/// Indices of boundary vertices as a free function.
pub fn boundary_nodes(mesh: &Mesh) -> &[usize] {
    mesh.boundary_nodes()
}

pub fn mesh_size(mesh: &Mesh) -> f64 {
    mesh.mesh_size()
}

pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn distance(a: Point, b: Point) -> f64 {
    libm::hypot(b[0] - a[0], b[1] - a[1])
}

/// Position along the boundary of the unit square, counterclockwise from
/// the origin with each side of unit length; `None` for interior points.
fn perimeter_parameter(p: Point) -> Option<f64> {
    let [x, y] = p;
    let near = |a: f64, b: f64| (a - b).abs() <= BOUNDARY_TOL;
    if near(y, 0.0) {
        Some(x)
    } else if near(x, 1.0) {
        Some(1.0 + y)
    } else if near(y, 1.0) {
        Some(2.0 + (1.0 - x))
    } else if near(x, 0.0) {
        Some(3.0 + (1.0 - y))
    } else {
        None
    }
}

fn edges_with_one_triangle(triangles: &[[usize; 3]]) -> Vec<[usize; 2]> {
    let mut count: BTreeMap<(usize, usize), (usize, [usize; 2])> = BTreeMap::new();
    for t in triangles {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            let key = if a < b { (a, b) } else { (b, a) };
            count.entry(key).or_insert((0, [a, b])).0 += 1;
        }
    }
    count.values().filter(|(n, _)| *n == 1).map(|&(_, e)| e).collect()
}
