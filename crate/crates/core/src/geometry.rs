//! Numerical spherical geometry: triangle solving, assembly of cone
//! surfaces from constellations as tilings by 2d copies of the base
//! half-triangle, geodesic-graph distance estimation, and certification of
//! the diameter bracket behind the narrowness constant ε₀.

use crate::angles::{gb_area, BaseFamily, ConeTuple, RationalAngle};
use crate::classifier::LinkRecord;
use crate::covers::Constellation;
use crate::{exec_map, Exec};
use serde::Serialize;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate spherical triangle: angle sum {sum} not in (pi, 3pi)")]
    DegenerateTriangle { sum: f64 },
    #[error("diameter bracket upper {upper} still >= pi at refinement {refinement}")]
    NotConverged { upper: f64, refinement: usize },
}

// ---------------------------------------------------------------------------
// Small 3-vector helpers on the unit sphere.

pub type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: Vec3) -> Vec3 {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Geodesic distance on the unit sphere, robust near 0 and π.
pub fn sphere_dist(a: Vec3, b: Vec3) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

fn midpoint(a: Vec3, b: Vec3) -> Vec3 {
    normalize(add(a, b))
}

// ---------------------------------------------------------------------------
// Spherical triangles.

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SphericalTriangle {
    pub angles: [f64; 3],
    /// side i is opposite angle i
    pub sides: [f64; 3],
    pub area: f64,
}

/// Solve a spherical triangle from its angles by the dual law of cosines:
/// cos(aᵢ) = (cos Aᵢ + cos Aⱼ cos Aₖ) / (sin Aⱼ sin Aₖ).
pub fn solve_triangle(angles: [f64; 3]) -> Result<SphericalTriangle, GeometryError> {
    let sum: f64 = angles.iter().sum();
    if !(sum > PI && sum < 3.0 * PI) || angles.iter().any(|&a| a <= 0.0 || a >= PI) {
        return Err(GeometryError::DegenerateTriangle { sum });
    }
    let mut sides = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let c = (angles[i].cos() + angles[j].cos() * angles[k].cos())
            / (angles[j].sin() * angles[k].sin());
        sides[i] = c.clamp(-1.0, 1.0).acos();
    }
    Ok(SphericalTriangle {
        angles,
        sides,
        area: sum - PI,
    })
}

/// The base half-triangle of a family: angles π/kⱼ at the branch points.
pub fn half_triangle(family: BaseFamily) -> SphericalTriangle {
    let orders = family.orbifold().orders();
    solve_triangle([
        PI / orders[0] as f64,
        PI / orders[1] as f64,
        PI / orders[2] as f64,
    ])
    .expect("base half-triangle is nondegenerate")
}

/// Corner coordinates of a spherical triangle: corner 1 at the pole,
/// corner 2 along the x-meridian.
fn corner_positions(t: &SphericalTriangle) -> [Vec3; 3] {
    let v1 = [0.0, 0.0, 1.0];
    let s3 = t.sides[2]; // |corner1 corner2|, opposite angle 3
    let s2 = t.sides[1]; // |corner1 corner3|
    let v2 = [s3.sin(), 0.0, s3.cos()];
    let a1 = t.angles[0];
    let v3 = [s2.sin() * a1.cos(), s2.sin() * a1.sin(), s2.cos()];
    [v1, v2, v3]
}

/// Spherical excess by L'Huilier's theorem (stable for small cells).
fn cell_excess(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let (p, q, r) = (sphere_dist(b, c), sphere_dist(a, c), sphere_dist(a, b));
    let s = 0.5 * (p + q + r);
    let t = ((s / 2.0).tan()
        * ((s - p) / 2.0).tan()
        * ((s - q) / 2.0).tan()
        * ((s - r) / 2.0).tan())
    .max(0.0);
    4.0 * t.sqrt().atan()
}

/// Circumradius of a spherical cell: angular distance from the point
/// equidistant to the three corners.
fn cell_circumradius(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let u = cross(
        [b[0] - a[0], b[1] - a[1], b[2] - a[2]],
        [c[0] - a[0], c[1] - a[1], c[2] - a[2]],
    );
    if norm(u) == 0.0 {
        return 0.5 * sphere_dist(b, c).max(sphere_dist(a, c)).max(sphere_dist(a, b));
    }
    let center = normalize(u);
    let centroid = normalize(add(add(a, b), c));
    let center = if dot(center, centroid) >= 0.0 {
        center
    } else {
        [-center[0], -center[1], -center[2]]
    };
    sphere_dist(center, a)
}

// ---------------------------------------------------------------------------
// Reference grid: iterated geodesic-midpoint 4-way subdivision of the base
// half-triangle. Level r+1 vertices extend level r's, so grids are nested.

pub struct RefinedGrid {
    pub level: usize,
    pub verts: Vec<Vec3>,
    pub cells: Vec<[usize; 3]>,
    /// Boundary vertex chains, ordered: corner1→2, corner2→3, corner3→1.
    pub chains: [Vec<usize>; 3],
    pub corners: [usize; 3],
    /// Exact pairwise spherical distances between grid vertices.
    pub dist: Vec<Vec<f64>>,
    pub max_circumradius: f64,
}

pub fn refined_grid(t: &SphericalTriangle, level: usize) -> RefinedGrid {
    let corners = corner_positions(t);
    let mut verts: Vec<Vec3> = corners.to_vec();
    let mut cells: Vec<[usize; 3]> = vec![[0, 1, 2]];
    let mut chains: [Vec<usize>; 3] = [vec![0, 1], vec![1, 2], vec![2, 0]];
    for _ in 0..level {
        let mut edge_mid: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *edge_mid.entry(key).or_insert_with(|| {
                verts.push(midpoint(verts[a], verts[b]));
                verts.len() - 1
            })
        };
        let mut next_cells = Vec::with_capacity(cells.len() * 4);
        for &[a, b, c] in &cells {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next_cells.push([a, ab, ca]);
            next_cells.push([ab, b, bc]);
            next_cells.push([ca, bc, c]);
            next_cells.push([ab, bc, ca]);
        }
        cells = next_cells;
        for chain in &mut chains {
            let mut refined = Vec::with_capacity(chain.len() * 2 - 1);
            for w in chain.windows(2) {
                refined.push(w[0]);
                refined.push(mid(w[0], w[1], &mut verts));
            }
            refined.push(*chain.last().unwrap());
            *chain = refined;
        }
    }
    let n = verts.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = sphere_dist(verts[i], verts[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let max_circumradius = cells
        .iter()
        .map(|&[a, b, c]| cell_circumradius(verts[a], verts[b], verts[c]))
        .fold(0.0, f64::max);
    RefinedGrid {
        level,
        verts,
        cells,
        chains,
        corners: [0, 1, 2],
        dist,
        max_circumradius,
    }
}

// ---------------------------------------------------------------------------
// The glued surface.

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A vertex of the glued complex.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceVertex {
    /// Branch point index 0..3 the vertex lies over.
    pub branch: usize,
    /// Number of triangle corners glued here (= 2 × cycle length).
    pub corner_count: usize,
    pub total_angle: RationalAngle,
    pub is_cone: bool,
}

/// A closed cone surface tiled by 2·degree copies of the half-triangle:
/// copies 0..d are white (wᵢ), d..2d black (bᵢ); wᵢ glues to bᵢ along
/// (p₁p₂), to b_{σ₁(i)} along (p₃p₁), and to b_{σ₂⁻¹(i)} along (p₂p₃).
pub struct ConeSurface {
    pub family: BaseFamily,
    pub cover: Constellation,
    pub triangle: SphericalTriangle,
    pub copies: usize,
    pub vertices: Vec<SurfaceVertex>,
    pub euler_characteristic: i64,
    pub exact_area: RationalAngle,
    pub cone_tuple: ConeTuple,
    /// corner (copy, local corner 0..3) -> vertex id
    corner_vertex: Vec<[usize; 3]>,
    /// black partner of copy wᵢ along each side: side 0 = (p₁p₂),
    /// side 1 = (p₂p₃), side 2 = (p₃p₁)
    white_partner: Vec<[usize; 3]>,
}

pub fn build_surface(c: &Constellation, family: BaseFamily) -> ConeSurface {
    let base = family.orbifold();
    let triangle = half_triangle(family);
    let d = c.degree;
    let copies = 2 * d;
    let s1 = &c.sigma[0];
    let s2_inv = c.sigma[1].inverse();

    let white_partner: Vec<[usize; 3]> = (0..d)
        .map(|i| [i, s2_inv.apply(i), s1.apply(i)])
        .collect();

    // Glue corners: an edge identification also identifies its endpoints.
    // Local corners 0,1,2 sit over branch points p₁,p₂,p₃; side 0 joins
    // corners (0,1), side 1 joins (1,2), side 2 joins (2,0).
    let corner_id = |copy: usize, corner: usize| copy * 3 + corner;
    let mut uf = UnionFind::new(copies * 3);
    let side_corners = [[0usize, 1], [1, 2], [2, 0]];
    let mut edge_pairs = 0usize;
    for i in 0..d {
        for side in 0..3 {
            let black = d + white_partner[i][side];
            for &corner in &side_corners[side] {
                uf.union(corner_id(i, corner), corner_id(black, corner));
            }
            edge_pairs += 1;
        }
    }
    assert_eq!(edge_pairs, 3 * d);

    // Collect vertex classes and recount the Euler characteristic.
    let mut class_of = vec![usize::MAX; copies * 3];
    let mut vertices: Vec<SurfaceVertex> = Vec::new();
    let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
    for copy in 0..copies {
        for corner in 0..3 {
            let root = uf.find(corner_id(copy, corner));
            if class_of[root] == usize::MAX {
                class_of[root] = vertices.len();
                vertices.push(SurfaceVertex {
                    branch: corner,
                    corner_count: 0,
                    total_angle: RationalAngle::zero(),
                    is_cone: false,
                });
                members.push(Vec::new());
            }
            let v = class_of[root];
            assert_eq!(vertices[v].branch, corner, "mixed-branch vertex class");
            vertices[v].corner_count += 1;
            members[v].push((copy, corner));
        }
    }
    let corner_vertex: Vec<[usize; 3]> = (0..copies)
        .map(|copy| std::array::from_fn(|corner| class_of[uf.find(corner_id(copy, corner))]))
        .collect();
    for v in &mut vertices {
        // Each corner contributes π/kⱼ; 2kⱼ corners make a regular point.
        let k = base.orders()[v.branch] as i64;
        assert_eq!(v.corner_count % 2, 0);
        v.total_angle = RationalAngle::new(1, k).scale(v.corner_count as i64);
        v.is_cone = v.corner_count != 2 * k as usize;
    }
    let euler = vertices.len() as i64 - (3 * d) as i64 + copies as i64;

    let cone_tuple = ConeTuple::new(
        vertices
            .iter()
            .filter(|v| v.is_cone)
            .map(|v| v.total_angle)
            .collect(),
    );
    assert_eq!(cone_tuple, c.cone_tuple(&base), "cone angles mismatch");
    let exact_area = gb_area(&cone_tuple);
    assert!(
        (exact_area.to_f64() - copies as f64 * triangle.area).abs() < 1e-9,
        "area mismatch"
    );

    ConeSurface {
        family,
        cover: c.clone(),
        triangle,
        copies,
        vertices,
        euler_characteristic: euler,
        exact_area,
        cone_tuple,
        corner_vertex,
        white_partner,
    }
}

// ---------------------------------------------------------------------------
// Refined glued mesh and graph distances.

pub struct SurfaceMesh {
    pub refinement: usize,
    /// Identified vertex classes; class ids are 0..class_count.
    pub class_count: usize,
    /// (copy, local grid vertex) -> class id
    pub class_of: Vec<Vec<usize>>,
    /// Adjacency with exact intra-copy spherical distances; every edge is a
    /// realizable surface path, so graph distances over-estimate geodesics.
    pub adjacency: Vec<Vec<(usize, f64)>>,
    /// class ids of the cone points
    pub cone_classes: Vec<usize>,
    pub max_circumradius: f64,
    /// numerically integrated area (sum of cell excesses)
    pub numeric_area: f64,
}

/// Build the refined glued graph: each copy carries the reference grid with
/// complete intra-copy edges (the half-triangle is geodesically convex, so
/// every chord is a realizable path); seams are identified chain-index to
/// chain-index, both chains being parameterized from the same base corner.
pub fn refine_surface(s: &ConeSurface, refinement: usize) -> SurfaceMesh {
    let grid = refined_grid(&s.triangle, refinement);
    let n = grid.verts.len();
    let d = s.copies / 2;

    let mut uf = UnionFind::new(s.copies * n);
    let vid = |copy: usize, local: usize| copy * n + local;
    // side s of white i glues to the same side of black partner; the chains
    // run corner→corner in reference indices on both copies.
    for i in 0..d {
        for side in 0..3 {
            let black = d + s.white_partner[i][side];
            for &local in &grid.chains[side] {
                uf.union(vid(i, local), vid(black, local));
            }
        }
    }
    let mut class_of = vec![vec![usize::MAX; n]; s.copies];
    let mut class_count = 0usize;
    let mut root_class = vec![usize::MAX; s.copies * n];
    for copy in 0..s.copies {
        for local in 0..n {
            let root = uf.find(vid(copy, local));
            if root_class[root] == usize::MAX {
                root_class[root] = class_count;
                class_count += 1;
            }
            class_of[copy][local] = root_class[root];
        }
    }

    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); class_count];
    for copy in 0..s.copies {
        for a in 0..n {
            let ca = class_of[copy][a];
            for b in (a + 1)..n {
                let cb = class_of[copy][b];
                let w = grid.dist[a][b];
                adjacency[ca].push((cb, w));
                adjacency[cb].push((ca, w));
            }
        }
    }

    // Cone point classes, ordered by the surface's vertex list.
    let mut cone_classes = Vec::new();
    for (v_idx, v) in s.vertices.iter().enumerate() {
        if v.is_cone {
            let (copy, corner) = (0..s.copies)
                .flat_map(|c| (0..3).map(move |k| (c, k)))
                .find(|&(c, k)| s.corner_vertex[c][k] == v_idx)
                .unwrap();
            cone_classes.push(class_of[copy][grid.corners[corner]]);
        }
    }

    let numeric_area: f64 = s.copies as f64
        * grid
            .cells
            .iter()
            .map(|&[a, b, c]| cell_excess(grid.verts[a], grid.verts[b], grid.verts[c]))
            .sum::<f64>();

    SurfaceMesh {
        refinement,
        class_count,
        class_of,
        adjacency,
        cone_classes,
        max_circumradius: grid.max_circumradius,
        numeric_area,
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry(f64, usize);
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adjacency: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adjacency.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry(0.0, source));
    while let Some(HeapEntry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adjacency[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapEntry(nd, v));
            }
        }
    }
    dist
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceReport {
    pub refinement: usize,
    /// Pairwise cone-point graph distances (upper bounds on geodesics).
    pub cone_labels: Vec<String>,
    pub cone_matrix: Vec<Vec<f64>>,
    /// Max pairwise graph distance over all mesh vertices.
    pub diameter_lower: f64,
    /// Sound upper bound: any surface point lies in some refined cell, so it
    /// is within one cell circumradius of a graph vertex; hence
    /// diam ≤ max pairwise graph distance + 2 × max cell circumradius.
    pub diameter_upper: f64,
    pub graph_vertices: usize,
    pub numeric_area: f64,
}

pub fn estimate_distances(s: &ConeSurface, refinement: usize) -> DistanceReport {
    let mesh = refine_surface(s, refinement);
    distances_on_mesh(s, &mesh)
}

fn distances_on_mesh(s: &ConeSurface, mesh: &SurfaceMesh) -> DistanceReport {
    let cone_labels: Vec<String> = s
        .vertices
        .iter()
        .filter(|v| v.is_cone)
        .enumerate()
        .map(|(i, v)| format!("c{}[{}]", i, v.total_angle.pretty()))
        .collect();

    let mut cone_matrix: Vec<Vec<f64>> =
        vec![Vec::new(); mesh.cone_classes.len()];
    let mut sampled_max: f64 = 0.0;
    for src in 0..mesh.class_count {
        let dist = dijkstra(&mesh.adjacency, src);
        for &dv in &dist {
            assert!(dv.is_finite(), "mesh graph is connected");
            sampled_max = sampled_max.max(dv);
        }
        if let Some(i) = mesh.cone_classes.iter().position(|&c| c == src) {
            cone_matrix[i] = mesh.cone_classes.iter().map(|&c| dist[c]).collect();
        }
    }

    DistanceReport {
        refinement: mesh.refinement,
        cone_labels,
        cone_matrix,
        diameter_lower: sampled_max,
        diameter_upper: sampled_max + 2.0 * mesh.max_circumradius,
        graph_vertices: mesh.class_count,
        numeric_area: mesh.numeric_area,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkBracket {
    pub table_index: usize,
    pub refinement: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonBracket {
    pub lower: f64,
    pub upper: f64,
    pub per_link: Vec<LinkBracket>,
}

/// Certify the diameter bracket for every link: refine each surface until
/// its upper bound drops below π (or the refinement cap is hit). The global
/// bracket is the max of the per-link brackets, since ε₀ is the largest
/// link diameter.
pub fn certify_epsilon0(
    records: &[LinkRecord],
    max_refinement: usize,
    exec: Exec,
) -> Result<EpsilonBracket, GeometryError> {
    let jobs: Vec<(usize, BaseFamily, Constellation)> = records
        .iter()
        .map(|r| {
            let real = &r.realizations[0];
            (r.table_index, real.base, real.cover.clone())
        })
        .collect();
    let per_link = exec_map(exec, jobs, |(index, family, cover)| {
        let surface = build_surface(&cover, family);
        assert_eq!(surface.euler_characteristic, 2);
        let mut best: Option<LinkBracket> = None;
        for refinement in 3..=max_refinement {
            let report = estimate_distances(&surface, refinement);
            assert!(
                (report.numeric_area - surface.exact_area.to_f64()).abs() < 1e-9,
                "area drift on link {index}"
            );
            let bracket = LinkBracket {
                table_index: index,
                refinement,
                lower: report.diameter_lower,
                upper: report.diameter_upper,
            };
            let done = bracket.upper < PI;
            best = Some(bracket);
            if done {
                break;
            }
        }
        best.unwrap()
    });
    let lower = per_link.iter().map(|b| b.lower).fold(0.0, f64::max);
    let upper = per_link.iter().map(|b| b.upper).fold(0.0, f64::max);
    if upper >= PI {
        let worst = per_link.iter().max_by(|a, b| a.upper.total_cmp(&b.upper)).unwrap();
        return Err(GeometryError::NotConverged {
            upper: worst.upper,
            refinement: worst.refinement,
        });
    }
    Ok(EpsilonBracket {
        lower,
        upper,
        per_link,
    })
}

// ---------------------------------------------------------------------------
// Mesh export: develop each copy onto the unit sphere along a spanning tree
// of the gluing graph, reflecting across shared edge planes. Seams stay
// duplicated (each copy owns its vertices).

fn reflect_across_plane(n: Vec3, p: Vec3) -> Vec3 {
    let k = 2.0 * dot(n, p);
    [p[0] - k * n[0], p[1] - k * n[1], p[2] - k * n[2]]
}

/// Per-copy developed coordinates of the refined grid.
pub fn develop(s: &ConeSurface, refinement: usize) -> Vec<Vec<Vec3>> {
    let grid = refined_grid(&s.triangle, refinement);
    let d = s.copies / 2;
    let mut neighbors: Vec<Vec<(usize, usize)>> = vec![Vec::new(); s.copies];
    for w in 0..d {
        for side in 0..3 {
            let b = d + s.white_partner[w][side];
            neighbors[w].push((side, b));
            neighbors[b].push((side, w));
        }
    }
    let mut placed: Vec<Option<Vec<Vec3>>> = vec![None; s.copies];
    placed[0] = Some(grid.verts.clone());
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(copy) = queue.pop_front() {
        let coords = placed[copy].clone().unwrap();
        for &(side, other) in &neighbors[copy] {
            if placed[other].is_some() {
                continue;
            }
            // Reflect across the plane of the shared edge's great circle.
            let chain = &grid.chains[side];
            let (a, b) = (coords[chain[0]], coords[*chain.last().unwrap()]);
            let n = normalize(cross(a, b));
            placed[other] = Some(coords.iter().map(|&p| reflect_across_plane(n, p)).collect());
            queue.push_back(other);
        }
    }
    placed.into_iter().map(|p| p.expect("connected")).collect()
}

pub fn export_obj(s: &ConeSurface, refinement: usize) -> String {
    let grid = refined_grid(&s.triangle, refinement);
    let coords = develop(s, refinement);
    let n = grid.verts.len();
    let mut out = String::new();
    for copy_coords in &coords {
        for v in copy_coords {
            out.push_str(&format!("v {:.12} {:.12} {:.12}\n", v[0], v[1], v[2]));
        }
    }
    for copy in 0..s.copies {
        for &[a, b, c] in &grid.cells {
            out.push_str(&format!(
                "f {} {} {}\n",
                copy * n + a + 1,
                copy * n + b + 1,
                copy * n + c + 1
            ));
        }
    }
    out
}

pub fn export_off(s: &ConeSurface, refinement: usize) -> String {
    let grid = refined_grid(&s.triangle, refinement);
    let coords = develop(s, refinement);
    let n = grid.verts.len();
    let mut out = String::from("OFF\n");
    out.push_str(&format!(
        "{} {} 0\n",
        s.copies * n,
        s.copies * grid.cells.len()
    ));
    for copy_coords in &coords {
        for v in copy_coords {
            out.push_str(&format!("{:.12} {:.12} {:.12}\n", v[0], v[1], v[2]));
        }
    }
    for copy in 0..s.copies {
        for &[a, b, c] in &grid.cells {
            out.push_str(&format!(
                "3 {} {} {}\n",
                copy * n + a,
                copy * n + b,
                copy * n + c
            ));
        }
    }
    out
}

pub fn distance_csv(report: &DistanceReport) -> String {
    let mut out = String::from("label");
    for l in &report.cone_labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (i, row) in report.cone_matrix.iter().enumerate() {
        out.push_str(&report.cone_labels[i]);
        for d in row {
            out.push_str(&format!(",{d:.9}"));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "# diameter bracket [{:.9}, {:.9}] at refinement {}\n",
        report.diameter_lower, report.diameter_upper, report.refinement
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::RationalAngle;
    use crate::branching::enumerate_branching;
    use crate::covers::enumerate_covers;

    fn angle(n: i64, d: i64) -> RationalAngle {
        RationalAngle::new(n, d)
    }

    #[test]
    fn octant_triangle() {
        let t = solve_triangle([PI / 2.0, PI / 2.0, PI / 2.0]).unwrap();
        for s in t.sides {
            assert!((s - PI / 2.0).abs() < 1e-12);
        }
        assert!((t.area - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn s4_half_triangle_area() {
        let t = solve_triangle([PI / 4.0, PI / 3.0, PI / 2.0]).unwrap();
        assert!((t.area - PI / 12.0).abs() < 1e-12);
        // consistency: dual law reproduces the angles from the sides
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let lhs = t.sides[i].cos();
            let rhs = (t.angles[i].cos() + t.angles[j].cos() * t.angles[k].cos())
                / (t.angles[j].sin() * t.angles[k].sin());
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn wide_isoceles_has_long_side() {
        let t = solve_triangle([5.0 * PI / 6.0, PI / 2.0, PI / 2.0]).unwrap();
        assert!((t.sides[0] - 5.0 * PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_triangle_rejected() {
        assert!(solve_triangle([PI / 6.0, PI / 6.0, PI / 6.0]).is_err());
    }

    fn cover_for(family: BaseFamily, tuple: &[(i64, i64)]) -> Constellation {
        let t = ConeTuple::new(tuple.iter().map(|&(n, d)| angle(n, d)).collect());
        let base = family.orbifold();
        for datum in enumerate_branching(&t, &base) {
            let covers = enumerate_covers(&datum);
            if let Some(c) = covers.into_iter().next() {
                return c;
            }
        }
        panic!("no cover for {tuple:?}");
    }

    #[test]
    fn degree_one_double_of_base_triangle() {
        let c = cover_for(BaseFamily::S4, &[(1, 2), (2, 3), (1, 1)]);
        assert_eq!(c.degree, 1);
        let s = build_surface(&c, BaseFamily::S4);
        assert_eq!(s.copies, 2);
        assert_eq!(s.euler_characteristic, 2);
        let report = estimate_distances(&s, 3);
        // cone-point pairwise distances are the half-triangle's sides
        let t = s.triangle;
        let mut got: Vec<f64> = vec![
            report.cone_matrix[0][1],
            report.cone_matrix[0][2],
            report.cone_matrix[1][2],
        ];
        got.sort_by(f64::total_cmp);
        let mut want = t.sides.to_vec();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-2, "got {g}, want {w}");
        }
    }

    #[test]
    fn refinement_is_monotone() {
        let c = cover_for(BaseFamily::D6, &[(1, 1), (1, 1), (1, 1)]);
        let s = build_surface(&c, BaseFamily::D6);
        let r2 = estimate_distances(&s, 2);
        let r3 = estimate_distances(&s, 3);
        for (a, b) in r2.cone_matrix.iter().flatten().zip(r3.cone_matrix.iter().flatten()) {
            assert!(b <= &(a + 1e-12));
        }
    }

    #[test]
    fn seam_distance_of_wide_double() {
        // double of the (5π/6, π/2, π/2) triangle: the two π-points are
        // exactly 5π/6 apart along the seam, and the path is in the graph.
        let c = cover_for(BaseFamily::D6, &[(5, 3), (1, 1), (1, 1)]);
        let s = build_surface(&c, BaseFamily::D6);
        let report = estimate_distances(&s, 3);
        let pi_points: Vec<usize> = s
            .vertices
            .iter()
            .filter(|v| v.is_cone)
            .enumerate()
            .filter(|(_, v)| v.total_angle == angle(1, 1))
            .map(|(i, _)| i)
            .collect();
        assert_eq!(pi_points.len(), 2);
        let d = report.cone_matrix[pi_points[0]][pi_points[1]];
        assert!((d - 5.0 * PI / 6.0).abs() < 1e-2, "seam distance {d}");
    }

    #[test]
    fn round_sphere_cover_has_diameter_pi() {
        let base = BaseFamily::D6.orbifold();
        let data = enumerate_branching(&ConeTuple::empty(), &base);
        let c = enumerate_covers(&data[0]).into_iter().next().unwrap();
        let s = build_surface(&c, BaseFamily::D6);
        assert_eq!(s.euler_characteristic, 2);
        assert!(s.vertices.iter().all(|v| !v.is_cone));
        let report = estimate_distances(&s, 3);
        assert!(report.diameter_lower > PI - 0.05);
        assert!(report.diameter_upper >= PI);
        assert!((report.numeric_area - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn export_formats_well_formed() {
        let c = cover_for(BaseFamily::S4, &[(1, 2), (2, 3), (1, 1)]);
        let s = build_surface(&c, BaseFamily::S4);
        let obj = export_obj(&s, 1);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 12);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 8);
        let off = export_off(&s, 1);
        assert!(off.starts_with("OFF\n12 8 0\n"));
    }
}
