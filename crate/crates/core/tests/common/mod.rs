#![allow(dead_code)]

use conjugacy::backend::{AbelianSubgroup, FreeGroup};
use conjugacy::index2::{KernelBackend, OrientationCharacter, Sign};
use conjugacy::klein::{KleinBackend, KleinElem};
use conjugacy::pipeline::{KleinCoordinates, PipelineContext};
use conjugacy::trimesh::{face_vertices, Perm, Triangulation};
use conjugacy::word::{Presentation, ShortlexWords, Word};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn free_xy() -> Presentation {
    Presentation::parse(&["x", "y"], &[] as &[&str]).unwrap()
}

/// `F(x, y)` with `x` reversing.
pub fn free_pipeline() -> PipelineContext {
    let p = free_xy();
    let chi = OrientationCharacter::new(&p, vec![Sign::Minus, Sign::Plus]).unwrap();
    let g = FreeGroup::new(p.alphabet.clone());
    let h = KernelBackend::new(g.clone(), chi.clone(), 1000);
    PipelineContext::builder(p, chi, Box::new(h), Box::new(g))
        .build()
        .unwrap()
}

pub fn klein_presentation() -> Presentation {
    Presentation::parse(
        &["a", "b", "t"],
        &["a b a^-1 b^-1", "t t a^-1", "t b t^-1 b"],
    )
    .unwrap()
}

pub fn klein_pipeline() -> PipelineContext {
    let p = klein_presentation();
    let chi = OrientationCharacter::new(&p, vec![Sign::Plus, Sign::Plus, Sign::Minus]).unwrap();
    let hb = AbelianSubgroup::with_basis(KleinBackend::new(), Word::gen(0), Word::gen(1));
    PipelineContext::builder(p, chi, Box::new(hb), Box::new(KleinBackend::new()))
        .zz_coordinates(Box::new(KleinCoordinates))
        .build()
        .unwrap()
}

pub fn klein_box(r: i64) -> Vec<KleinElem<i64>> {
    let mut out = Vec::new();
    for m in -r..=r {
        for n in -r..=r {
            for twisted in [false, true] {
                out.push(KleinElem::new(m, n, twisted));
            }
        }
    }
    out
}

/// Reduced words of length at most `max_len` in shortlex order.
pub fn words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    ShortlexWords::new(rank)
        .take_while(|w| w.len() <= max_len)
        .collect()
}

/// Free-group conjugacy by comparing cyclic rotations of cyclically
/// reduced forms.
pub fn free_conjugate_brute(u: &Word, v: &Word) -> bool {
    let cu = u.cyclic_reduce().core;
    let cv = v.cyclic_reduce().core;
    cu.len() == cv.len() && (0..cu.len().max(1)).any(|k| cu.rotate(k) == cv)
}

pub fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let g = rng.gen_range(0..rank);
            if rng.gen_bool(0.5) {
                conjugacy::word::Letter::pos(g)
            } else {
                conjugacy::word::Letter::neg(g)
            }
        })
        .collect();
    Word::from_letters(letters).free_reduce()
}

pub fn all_perms() -> Vec<Perm> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut s = p;
                    s.sort_unstable();
                    if s == [0, 1, 2, 3] {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// A ball: each new tetrahedron is glued along one face to a free face of
/// an earlier one.
pub fn random_tree_ball(rng: &mut ChaCha8Rng, n: usize) -> Triangulation {
    let perms = all_perms();
    let mut t = Triangulation::new(n);
    let mut free: Vec<(usize, usize)> = (0..4).map(|f| (0, f)).collect();
    for k in 1..n {
        let i = rng.gen_range(0..free.len());
        let (pt, pf) = free.swap_remove(i);
        let perm = *perms.choose(rng).unwrap();
        t.glue(pt, pf, k, perm);
        free.extend((0..4).filter(|&f| f != perm[pf]).map(|f| (k, f)));
    }
    t
}

/// Boundary faces and vertex classes of a triangulation.
pub fn vertex_classes(t: &Triangulation) -> Vec<usize> {
    let mut d = Dsu((0..4 * t.n_tets).collect());
    for g in &t.gluings {
        let fv = face_vertices(g.face);
        for (i, &v) in fv.iter().enumerate() {
            d.union(4 * g.tet + v, 4 * g.to_tet + g.vmap[i]);
        }
    }
    (0..4 * t.n_tets).map(|x| d.find(x)).collect()
}

pub fn boundary_faces(t: &Triangulation) -> Vec<(usize, usize)> {
    t.complex().unwrap().boundary_faces()
}

/// A ball with one 1-handle attached between two boundary triangles that
/// share no vertex, giving a solid torus or a solid Klein bottle.
pub fn random_handlebody(rng: &mut ChaCha8Rng, n: usize) -> Option<Triangulation> {
    for _ in 0..50 {
        let mut t = random_tree_ball(rng, n);
        let vc = vertex_classes(&t);
        let faces = boundary_faces(&t);
        let mut pairs = Vec::new();
        for (i, &(t1, f1)) in faces.iter().enumerate() {
            for &(t2, f2) in &faces[i + 1..] {
                let disjoint = face_vertices(f1).iter().all(|&a| {
                    face_vertices(f2)
                        .iter()
                        .all(|&b| vc[4 * t1 + a] != vc[4 * t2 + b])
                });
                if disjoint {
                    pairs.push(((t1, f1), (t2, f2)));
                }
            }
        }
        if let Some(&((t1, f1), (t2, f2))) = pairs.choose(rng) {
            let choices: Vec<Perm> = all_perms().into_iter().filter(|p| p[f1] == f2).collect();
            t.glue(t1, f1, t2, *choices.choose(rng).unwrap());
            return Some(t);
        }
    }
    None
}

/// Seeded corpus of manifold triangulations with at most six tetrahedra.
pub fn triangulation_corpus(rng: &mut ChaCha8Rng) -> Vec<Triangulation> {
    let mut out = vec![Triangulation::new(1)];
    let mut fold = Triangulation::new(1);
    fold.glue(0, 0, 0, [1, 0, 2, 3]);
    out.push(fold);
    for n in 2..=6 {
        for _ in 0..2 {
            out.push(random_tree_ball(rng, n));
        }
    }
    for n in 3..=6 {
        for _ in 0..4 {
            if let Some(h) = random_handlebody(rng, n) {
                out.push(h);
            }
        }
    }
    for _ in 0..6 {
        if let Some(h) = random_handlebody(rng, 3) {
            out.push(h.double_along_whole_boundary().unwrap());
        }
    }
    for n in 1..=3 {
        out.push(
            random_tree_ball(rng, n)
                .double_along_whole_boundary()
                .unwrap(),
        );
    }
    out
}
