use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{face_vertices, Complex, TriError, Triangulation, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    /// Unglued `(tet, face)` slots, sorted.
    pub faces: Vec<(usize, usize)>,
    pub euler: i64,
    pub orientable: bool,
}

/// The face across boundary edge `{p, q}` of boundary face `(t, f)`,
/// found by walking around the edge through the interior, with the images
/// of `p` and `q` there.
fn boundary_partner(
    c: &Complex,
    t: usize,
    f: usize,
    p: usize,
    q: usize,
) -> Result<(usize, usize, usize, usize), TriError> {
    let (mut t, mut p, mut q) = (t, p, q);
    let mut exit = (0..4)
        .find(|&v| v != f && v != p && v != q)
        .expect("four vertices");
    for _ in 0..=4 * c.n_tets() {
        let Some(x) = c.across(t, exit) else {
            return Ok((t, exit, p, q));
        };
        let entered = x.perm[exit];
        t = x.tet;
        p = x.perm[p];
        q = x.perm[q];
        exit = (0..4)
            .find(|&v| v != entered && v != p && v != q)
            .expect("four vertices");
    }
    Err(TriError::EdgeWalk(format!(
        "boundary edge of face {f} of tetrahedron {t} never reaches the boundary"
    )))
}

/// +1 when `p → q` follows the cyclic order of the face's sorted vertices.
fn direction(f: usize, p: usize, q: usize) -> i8 {
    let v = face_vertices(f);
    let forward = (0..3).any(|i| v[i] == p && v[(i + 1) % 3] == q);
    if forward {
        1
    } else {
        -1
    }
}

/// Boundary surface data: faces, and for each face and each of its three
/// edges (indexed by the face vertex opposite the edge) the adjacent face
/// with the vertex correspondence on the shared edge.
struct Surface {
    faces: Vec<(usize, usize)>,
    /// `adj[i][k] = (j, p, q, p', q')`: edge `{p, q}` of face `i` (opposite
    /// its `k`-th vertex) meets face `j` along `{p', q'}`.
    adj: Vec<[(usize, usize, usize, usize, usize); 3]>,
}

fn surface(c: &Complex) -> Result<Surface, TriError> {
    let faces = c.boundary_faces();
    let index: BTreeMap<(usize, usize), usize> =
        faces.iter().enumerate().map(|(i, &tf)| (tf, i)).collect();
    let mut adj = Vec::with_capacity(faces.len());
    for &(t, f) in &faces {
        let fv = face_vertices(f);
        let mut row = [(0, 0, 0, 0, 0); 3];
        for (k, slot) in row.iter_mut().enumerate() {
            let (p, q) = (fv[(k + 1) % 3], fv[(k + 2) % 3]);
            let (t2, f2, p2, q2) = boundary_partner(c, t, f, p, q)?;
            *slot = (index[&(t2, f2)], p, q, p2, q2);
        }
        adj.push(row);
    }
    Ok(Surface { faces, adj })
}

impl Triangulation {
    pub fn boundary_components(&self) -> Result<Vec<BoundaryComponent>, TriError> {
        let c = self.complex()?;
        let s = surface(&c)?;
        let nf = s.faces.len();
        let mut comps = UnionFind::new(nf);
        let mut corners = UnionFind::new(4 * nf);
        let mut edges = UnionFind::new(3 * nf);
        for (i, row) in s.adj.iter().enumerate() {
            for (k, &(j, p, q, p2, q2)) in row.iter().enumerate() {
                comps.union(i, j);
                corners.union(4 * i + p, 4 * j + p2);
                corners.union(4 * i + q, 4 * j + q2);
                let fj = s.faces[j].1;
                let kj = face_vertices(fj)
                    .iter()
                    .position(|&v| v != p2 && v != q2)
                    .expect("edge leaves one vertex");
                edges.union(3 * i + k, 3 * j + kj);
            }
        }
        // orientation of each face relative to the first face of its component
        let mut orient: Vec<Option<i8>> = vec![None; nf];
        let mut orientable_root: BTreeMap<usize, bool> = BTreeMap::new();
        for start in 0..nf {
            if orient[start].is_some() {
                continue;
            }
            orient[start] = Some(1);
            let mut ok = true;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let oi = orient[i].expect("queued");
                for &(j, p, q, p2, q2) in &s.adj[i] {
                    // coherent orientations traverse a shared edge oppositely
                    let want =
                        -oi * direction(s.faces[i].1, p, q) * direction(s.faces[j].1, p2, q2);
                    match orient[j] {
                        None => {
                            orient[j] = Some(want);
                            queue.push_back(j);
                        }
                        Some(have) if have != want => ok = false,
                        Some(_) => {}
                    }
                }
            }
            orientable_root.insert(comps.find(start), ok);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..nf {
            groups.entry(comps.find(i)).or_default().push(i);
        }
        let mut out = Vec::new();
        for (root, members) in groups {
            let mut vset = std::collections::BTreeSet::new();
            let mut eset = std::collections::BTreeSet::new();
            for &i in &members {
                for v in face_vertices(s.faces[i].1) {
                    vset.insert(corners.find(4 * i + v));
                }
                for k in 0..3 {
                    eset.insert(edges.find(3 * i + k));
                }
            }
            let euler = vset.len() as i64 - eset.len() as i64 + members.len() as i64;
            out.push(BoundaryComponent {
                faces: members.iter().map(|&i| s.faces[i]).collect(),
                euler,
                orientable: orientable_root[&root],
            });
        }
        Ok(out)
    }

    /// A mirror copy on tetrahedra `n..2n` with the same internal gluings,
    /// each face in `faces` glued to its mirror image by the identity.
    pub fn double_along_boundary(
        &self,
        faces: &[(usize, usize)],
    ) -> Result<Triangulation, TriError> {
        let c = self.complex()?;
        let n = c.n_tets();
        for &(t, f) in faces {
            if t >= n || f > 3 || c.across(t, f).is_some() {
                return Err(TriError::FaceNotOnBoundary { tet: t, face: f });
            }
        }
        let mut out = Triangulation::new(2 * n);
        for p in c.pairings() {
            out.glue(p.a.0, p.a.1, p.b.0, p.perm);
        }
        for p in c.pairings() {
            out.glue(p.a.0 + n, p.a.1, p.b.0 + n, p.perm);
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(t, f) in faces {
            if seen.insert((t, f)) {
                out.glue(t, f, t + n, [0, 1, 2, 3]);
            }
        }
        Ok(out)
    }

    pub fn double_along_whole_boundary(&self) -> Result<Triangulation, TriError> {
        let faces = self.complex()?.boundary_faces();
        self.double_along_boundary(&faces)
    }

    /// Cones off every boundary component of Euler characteristic 2 with one
    /// new tetrahedron per boundary triangle. Cone vertices 0, 1, 2 sit on
    /// the sorted vertices of the triangle and vertex 3 is the apex.
    pub fn cap_spherical_boundaries(&self) -> Result<Triangulation, TriError> {
        let c = self.complex()?;
        let s = surface(&c)?;
        let spheres: Vec<(usize, usize)> = self
            .boundary_components()?
            .into_iter()
            .filter(|b| b.euler == 2)
            .flat_map(|b| b.faces)
            .collect();
        let mut out = self.clone();
        let mut cone: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, tf) in s.faces.iter().enumerate() {
            if spheres.contains(tf) {
                cone.insert(i, out.n_tets);
                out.n_tets += 1;
            }
        }
        for (&i, &ci) in &cone {
            let (t, f) = s.faces[i];
            let fv = face_vertices(f);
            out.glue(ci, 3, t, [fv[0], fv[1], fv[2], f]);
            for (k, &(j, p, q, p2, q2)) in s.adj[i].iter().enumerate() {
                let cj = cone[&j];
                let fv2 = face_vertices(s.faces[j].1);
                let local = |v: usize| fv.iter().position(|&x| x == v).expect("on face");
                let local2 = |v: usize| fv2.iter().position(|&x| x == v).expect("on face");
                let k2 = (0..3)
                    .find(|&m| m != local2(p2) && m != local2(q2))
                    .expect("three");
                // each side pair is glued once, from its smaller end
                if (ci, k) >= (cj, k2) {
                    if (ci, k) == (cj, k2) {
                        return Err(TriError::EdgeWalk(format!(
                            "boundary edge of face {f} of tetrahedron {t} is folded onto itself"
                        )));
                    }
                    continue;
                }
                let mut perm = [0; 4];
                perm[local(p)] = local2(p2);
                perm[local(q)] = local2(q2);
                perm[k] = k2;
                perm[3] = 3;
                out.glue(ci, k, cj, perm);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball_of_two() -> Triangulation {
        let mut t = Triangulation::new(2);
        t.glue(0, 3, 1, [1, 0, 2, 3]);
        t
    }

    #[test]
    fn single_tet_boundary_is_a_sphere() {
        let b = Triangulation::new(1).boundary_components().unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].euler, 2);
        assert!(b[0].orientable);
        assert_eq!(b[0].faces.len(), 4);
    }

    #[test]
    fn two_balls_two_components() {
        let t = Triangulation::new(1).disjoint_union(&ball_of_two());
        let b = t.boundary_components().unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|c| c.euler == 2));
    }

    #[test]
    fn double_of_a_ball_is_closed() {
        let t = Triangulation::new(1);
        let d = t.double_along_whole_boundary().unwrap();
        assert_eq!(d.n_tets, 2);
        assert!(d.boundary_components().unwrap().is_empty());
        assert_eq!(d.euler_characteristic().unwrap(), 0);
        assert!(d.is_orientable().unwrap());
    }

    #[test]
    fn empty_double_is_disjoint_union() {
        let t = ball_of_two();
        let d = t.double_along_boundary(&[]).unwrap();
        assert_eq!(d.n_tets, 4);
        assert_eq!(d.split_components().unwrap().len(), 2);
        assert_eq!(d.boundary_components().unwrap().len(), 2);
        assert_eq!(
            t.double_along_boundary(&[(0, 3)]),
            Err(TriError::FaceNotOnBoundary { tet: 0, face: 3 })
        );
    }

    #[test]
    fn capping_a_ball_closes_it() {
        let t = ball_of_two();
        let capped = t.cap_spherical_boundaries().unwrap();
        assert_eq!(capped.n_tets, 2 + 6);
        capped.validate().unwrap();
        assert!(capped.boundary_components().unwrap().is_empty());
        assert_eq!(capped.euler_characteristic().unwrap(), 0);
        assert!(capped.is_orientable().unwrap());
    }

    #[test]
    fn capping_leaves_closed_input_alone() {
        let closed = Triangulation::new(1).double_along_whole_boundary().unwrap();
        assert_eq!(closed.cap_spherical_boundaries().unwrap(), closed);
    }
}
