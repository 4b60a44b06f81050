//! Type tables for Goldberg-Coxeter refinements `G_{q,a,b}`.
//!
//! An explicit patch of the refined triangulation is built over a ball of
//! the `{3,q}` skeleton (each skeleton face carries a copy of the master
//! triangle `0, z, wz` of the Eisenstein lattice, `z = a + b - b*w`). The
//! patch is then split into rings around the root corner, vertex classes
//! are refined until stable, and the resulting table is checked against the
//! whole patch.

use std::collections::VecDeque;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use super::{Grid, GridParams, TypeTable, TypeTag};
use crate::error::{Error, Result};

type Pt = (i64, i64);

// Multiplication by the sixth root of unity in the basis (1, w).
fn rot(p: Pt) -> Pt {
    (-p.1, p.0 + p.1)
}

fn rot_n(mut p: Pt, n: u8) -> Pt {
    for _ in 0..n {
        p = rot(p);
    }
    p
}

fn sub(p: Pt, q: Pt) -> Pt {
    (p.0 - q.0, p.1 - q.1)
}

fn add(p: Pt, q: Pt) -> Pt {
    (p.0 + q.0, p.1 + q.1)
}

// Orientation with respect to the lattice basis; positive = counterclockwise.
fn cross(u: Pt, v: Pt) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

const UNITS: [Pt; 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Corner(u32),
    Edge(u32, u32, i64),
    Inner(u32, i64, i64),
}

struct Patch {
    corners: [Pt; 3],
    edge_steps: i64,
    faces: Vec<[u32; 3]>,
    face_of: FxHashMap<(u32, u32), u32>,
    rotation: FxHashMap<u32, Vec<u32>>,
}

impl Patch {
    fn build(a: i64, b: i64, skeleton: &mut Grid, radius: u32) -> Patch {
        let z = (a + b, -b);
        let corners = [(0, 0), z, rot(z)];
        let mut rotation = FxHashMap::default();
        for v in skeleton.ball(radius) {
            if skeleton.depth(v) >= radius {
                continue;
            }
            let mut r = Vec::new();
            if v.0 != 0 {
                let pr = skeleton.tree_parent(v).unwrap();
                let pl = skeleton.left_parent(v).unwrap();
                r.push(pr.0);
                if pl != pr {
                    r.push(pl.0);
                }
                r.push(skeleton.pred_inner(v).0);
                r.extend(skeleton.children(v).iter().map(|c| c.0));
                r.push(skeleton.succ_inner(v).0);
            } else {
                r.extend(skeleton.children(v).iter().map(|c| c.0));
            }
            rotation.insert(v.0, r);
        }
        let mut faces = Vec::new();
        let mut face_of = FxHashMap::default();
        let mut keys: Vec<_> = rotation.keys().copied().collect();
        keys.sort_unstable();
        for v in keys {
            let r = &rotation[&v];
            for i in 0..r.len() {
                let f = [v, r[i], r[(i + 1) % r.len()]];
                if face_of.contains_key(&(v, r[i])) {
                    continue;
                }
                let id = faces.len() as u32;
                faces.push(f);
                for k in 0..3 {
                    let prev = face_of.insert((f[k], f[(k + 1) % 3]), id);
                    debug_assert!(prev.is_none(), "skeleton rotation is not planar");
                }
            }
        }
        Patch { corners, edge_steps: gcd(a, b), faces, face_of, rotation }
    }

    fn side(&self, k: usize, p: Pt) -> i64 {
        let e = sub(self.corners[(k + 1) % 3], self.corners[k]);
        cross(e, sub(p, self.corners[k]))
    }

    fn canonical(&self, f: u32, p: Pt) -> Key {
        let face = self.faces[f as usize];
        if let Some(k) = self.corners.iter().position(|&c| c == p) {
            return Key::Corner(face[k]);
        }
        for k in 0..3 {
            if self.side(k, p) == 0 {
                let e = sub(self.corners[(k + 1) % 3], self.corners[k]);
                let d = sub(p, self.corners[k]);
                // position along the edge in steps of length |e|/g
                let len2 = norm(e);
                let t = self.edge_steps * dot(d, e);
                debug_assert_eq!(t % len2, 0);
                let j = t / len2;
                let (u, w) = (face[k], face[(k + 1) % 3]);
                return if u < w {
                    Key::Edge(u, w, j)
                } else {
                    Key::Edge(w, u, self.edge_steps - j)
                };
            }
        }
        Key::Inner(f, p.0, p.1)
    }

    fn points(&self) -> Vec<Pt> {
        let xs = self.corners.iter().map(|c| c.0);
        let ys = self.corners.iter().map(|c| c.1);
        let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                if (0..3).all(|k| self.side(k, (x, y)) >= 0) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    // Crosses edge k of face f; returns the neighbouring face and the map
    // from f's frame into its frame.
    fn unfold(&self, f: u32, k: usize) -> Option<(u32, u8, Pt)> {
        let face = self.faces[f as usize];
        let (a, b) = (face[k], face[(k + 1) % 3]);
        let g = *self.face_of.get(&(b, a))?;
        let gf = self.faces[g as usize];
        let pa = self.corners[k];
        let pb = self.corners[(k + 1) % 3];
        let pd = sub(add(pa, pb), self.corners[(k + 2) % 3]);
        let pos = |x: u32| {
            if x == a {
                pa
            } else if x == b {
                pb
            } else {
                pd
            }
        };
        let origin = pos(gf[0]);
        let v = sub(pos(gf[1]), origin);
        let m = (0..6).find(|&m| rot_n(v, m) == self.corners[1])?;
        Some((g, m, origin))
    }

    // Follows the straight segment from s to e (both in f's frame) across
    // faces; returns the face containing e and e's coordinates there.
    fn walk(&self, mut f: u32, mut s: Pt, mut e: Pt) -> Option<(u32, Pt)> {
        for _ in 0..32 {
            let oe: Vec<i64> = (0..3).map(|k| self.side(k, e)).collect();
            if oe.iter().all(|&o| o >= 0) {
                return Some((f, e));
            }
            let mut best: Option<(i64, i64, usize)> = None;
            for (k, &o) in oe.iter().enumerate() {
                if o >= 0 {
                    continue;
                }
                let os = self.side(k, s);
                debug_assert!(os >= 0);
                let (num, den) = (os, os - o);
                best = match best {
                    Some((bn, bd, bk)) if bn * den <= num * bd => Some((bn, bd, bk)),
                    _ => Some((num, den, k)),
                };
            }
            let (_, _, k) = best?;
            let (g, m, origin) = self.unfold(f, k)?;
            s = rot_n(sub(s, origin), m);
            e = rot_n(sub(e, origin), m);
            f = g;
        }
        None
    }
}

fn dot(u: Pt, v: Pt) -> i64 {
    // Euclidean inner product for the basis (1, w) with |w| = 1, w.1 = 1/2,
    // doubled to stay integral.
    2 * u.0 * v.0 + 2 * u.1 * v.1 + u.0 * v.1 + u.1 * v.0
}

fn norm(u: Pt) -> i64 {
    dot(u, u)
}

struct Refined {
    // counterclockwise neighbour lists; None where the patch ends
    nbrs: Vec<Option<Vec<u32>>>,
    root: u32,
}

fn refine(q: u32, a: u32, b: u32, radius: u32) -> Refined {
    let mut skeleton = Grid::with_table(GridParams::new(q, 1, 0), Arc::new(TypeTable::regular(q)));
    let patch = Patch::build(a as i64, b as i64, &mut skeleton, radius);
    let mut ids: FxHashMap<Key, u32> = FxHashMap::default();
    let mut reps: Vec<(Key, u32, Pt)> = Vec::new();
    let points = patch.points();
    for f in 0..patch.faces.len() as u32 {
        for &p in &points {
            let key = patch.canonical(f, p);
            ids.entry(key).or_insert_with(|| {
                reps.push((key, f, p));
                reps.len() as u32 - 1
            });
        }
    }
    let mut nbrs = Vec::with_capacity(reps.len());
    for &(key, f, p) in &reps {
        let list = match key {
            Key::Corner(v) => corner_neighbors(&patch, &ids, v),
            _ => UNITS
                .iter()
                .map(|&u| {
                    let (g, e) = patch.walk(f, p, add(p, u))?;
                    ids.get(&patch.canonical(g, e)).copied()
                })
                .collect::<Option<Vec<u32>>>(),
        };
        nbrs.push(list);
    }
    let root = ids[&Key::Corner(0)];
    Refined { nbrs, root }
}

fn corner_neighbors(patch: &Patch, ids: &FxHashMap<Key, u32>, v: u32) -> Option<Vec<u32>> {
    let r = patch.rotation.get(&v)?;
    let mut out: Vec<u32> = Vec::new();
    for &n in r {
        let f = *patch.face_of.get(&(v, n))?;
        let face = patch.faces[f as usize];
        let k = face.iter().position(|&x| x == v).unwrap();
        let pk = patch.corners[k];
        let e1 = sub(patch.corners[(k + 1) % 3], pk);
        let e2 = sub(patch.corners[(k + 2) % 3], pk);
        let mut sector: Vec<Pt> = UNITS
            .iter()
            .copied()
            .filter(|&u| cross(e1, u) >= 0 && cross(u, e2) >= 0)
            .collect();
        sector.sort_by_key(|&u| std::cmp::Reverse(dot(e1, u)));
        for u in sector {
            let id = *ids.get(&patch.canonical(f, add(pk, u)))?;
            if out.last() != Some(&id) {
                out.push(id);
            }
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    Some(out)
}

struct Rings {
    depth: Vec<u32>,
    parents: Vec<u32>,
    // non-rightmost children in ring order
    own: Vec<Vec<u32>>,
    // first parent in counterclockwise order (any neighbour for the root)
    first: Vec<u32>,
    max_depth: u32,
}

fn split_rings(r: &Refined) -> std::result::Result<Rings, String> {
    let n = r.nbrs.len();
    let mut depth = vec![u32::MAX; n];
    depth[r.root as usize] = 0;
    let mut queue = VecDeque::from([r.root]);
    let mut first_incomplete = u32::MAX;
    while let Some(v) = queue.pop_front() {
        let d = depth[v as usize];
        if d >= first_incomplete {
            break;
        }
        let Some(list) = &r.nbrs[v as usize] else {
            first_incomplete = d;
            continue;
        };
        for &w in list {
            if depth[w as usize] == u32::MAX {
                depth[w as usize] = d + 1;
                queue.push_back(w);
            }
        }
    }
    if first_incomplete == u32::MAX || first_incomplete < 3 {
        return Err("patch too small".into());
    }
    let max_depth = first_incomplete - 1;
    let mut parents = vec![0u32; n];
    let mut own = vec![Vec::new(); n];
    let mut first = vec![u32::MAX; n];
    let mut succ = vec![u32::MAX; n];
    let mut first_child = vec![u32::MAX; n];
    let mut last_child = vec![u32::MAX; n];
    for v in 0..n {
        let d = depth[v];
        if d > max_depth {
            continue;
        }
        let list = r.nbrs[v].as_ref().unwrap();
        if v as u32 == r.root {
            if list.iter().any(|&w| depth[w as usize] != 1) {
                return Err("root neighbour off ring 1".into());
            }
            own[v] = list.clone();
            first[v] = list[0];
            continue;
        }
        let lab: Vec<i64> = list.iter().map(|&w| depth[w as usize] as i64 - d as i64).collect();
        let m = lab.len();
        let start = (0..m)
            .find(|&i| lab[i] == -1 && lab[(i + m - 1) % m] == 0)
            .ok_or_else(|| format!("vertex {v} has no parent block"))?;
        let rot: Vec<u32> = (0..m).map(|i| list[(start + i) % m]).collect();
        let rl: Vec<i64> = (0..m).map(|i| lab[(start + i) % m]).collect();
        let p = rl.iter().take_while(|&&l| l == -1).count();
        let c = rl[p + 1..].iter().take_while(|&&l| l == 1).count();
        if !(1..=2).contains(&p) || rl[p] != 0 || c < 2 || p + 1 + c + 1 != m || rl[m - 1] != 0 {
            return Err(format!("vertex {v} has an irregular neighbourhood {rl:?}"));
        }
        parents[v] = p as u32;
        first[v] = rot[0];
        let children = &rot[p + 1..p + 1 + c];
        own[v] = children[..c - 1].to_vec();
        succ[v] = rot[m - 1];
        first_child[v] = children[0];
        last_child[v] = children[c - 1];
    }
    for v in 0..n {
        if depth[v] == 0 || depth[v] > max_depth {
            continue;
        }
        let s = succ[v] as usize;
        if depth[s] != depth[v] {
            return Err("successor off ring".into());
        }
        if last_child[v] != first_child[s] {
            return Err(format!("rightmost child of {v} is not the leftmost child of its successor"));
        }
    }
    Ok(Rings { depth, parents, own, first, max_depth })
}

// Canonical code of the radius-`rho` neighbourhood of `v` with depths
// relative to `v`, traversed breadth first from the first parent.
fn neighbourhood_code(r: &Refined, rings: &Rings, v: u32, rho: u32, buf: &mut Vec<i64>) -> (u64, u64) {
    buf.clear();
    let mut idx: FxHashMap<u32, u32> = FxHashMap::default();
    let mut order: Vec<(u32, u32, u32)> = vec![(v, rings.first[v as usize], 0)];
    idx.insert(v, 0);
    let base = rings.depth[v as usize] as i64;
    let mut i = 0;
    while i < order.len() {
        let (u, from, dist) = order[i];
        buf.push(rings.depth[u as usize] as i64 - base);
        if dist < rho {
            let list = r.nbrs[u as usize].as_ref().expect("expanded vertex is complete");
            let start = list.iter().position(|&w| w == from).unwrap();
            buf.push(list.len() as i64);
            for j in 0..list.len() {
                let w = list[(start + j) % list.len()];
                let next = idx.len() as u32;
                let k = *idx.entry(w).or_insert_with(|| {
                    order.push((w, u, dist + 1));
                    next
                });
                buf.push(k as i64);
            }
        }
        i += 1;
    }
    let hash = |salt: u8| {
        let mut h = DefaultHasher::new();
        salt.hash(&mut h);
        buf.hash(&mut h);
        h.finish()
    };
    (hash(0), hash(1))
}

type Obs = (bool, u32, u32);

// Labels every vertex by its neighbourhood code and reads off a finite
// automaton, then merges equivalent states.
enum Failure {
    // equal labels with different child labels
    Ambiguous,
    // some reachable label never occurs with labelled children
    Open,
    Invalid(String),
}

fn automaton(r: &Refined, rings: &Rings, rho: u32) -> std::result::Result<TypeTable, Failure> {
    let n = rings.own.len();
    let dmax = rings.max_depth;
    let root = r.root as usize;
    let mut label = vec![u32::MAX; n];
    let mut ids: FxHashMap<(u64, u64), u32> = FxHashMap::default();
    let mut buf = Vec::new();
    for (v, slot) in label.iter_mut().enumerate() {
        if rings.depth[v] as u64 + rho as u64 <= dmax as u64 + 1 {
            let code = neighbourhood_code(r, rings, v as u32, rho, &mut buf);
            let next = ids.len() as u32;
            *slot = *ids.entry(code).or_insert(next);
        }
    }
    let states = ids.len();
    let mut trans: Vec<Option<Vec<u32>>> = vec![None; states];
    let mut obs: Vec<Obs> = vec![(false, 0, 0); states];
    for v in 0..n {
        if rings.depth[v] as u64 + rho as u64 > dmax as u64 {
            continue;
        }
        let word: Vec<u32> = rings.own[v].iter().map(|&c| label[c as usize]).collect();
        let l = label[v] as usize;
        match &trans[l] {
            Some(w) if *w != word => return Err(Failure::Ambiguous),
            Some(_) => {}
            None => {
                trans[l] = Some(word);
                obs[l] = (v == root, rings.parents[v], rings.own[v].len() as u32);
            }
        }
    }
    // reachable states must all have known transitions
    let start = label[root];
    let mut reach = vec![false; states];
    reach[start as usize] = true;
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        let Some(w) = &trans[s as usize] else {
            return Err(Failure::Open);
        };
        for &c in w {
            if !reach[c as usize] {
                reach[c as usize] = true;
                stack.push(c);
            }
        }
    }

    let live: Vec<usize> = (0..states).filter(|&s| reach[s]).collect();
    let mut class = vec![u32::MAX; states];
    let mut intern: FxHashMap<Obs, u32> = FxHashMap::default();
    for &s in &live {
        let next = intern.len() as u32;
        class[s] = *intern.entry(obs[s]).or_insert(next);
    }
    let mut count = intern.len();
    loop {
        let mut refined: FxHashMap<(u32, Vec<u32>), u32> = FxHashMap::default();
        let mut next = vec![u32::MAX; states];
        for &s in &live {
            let key = (class[s], trans[s].as_ref().unwrap().iter().map(|&c| class[c as usize]).collect());
            let k = refined.len() as u32;
            next[s] = *refined.entry(key).or_insert(k);
        }
        class = next;
        if refined.len() == count {
            break;
        }
        count = refined.len();
    }

    // number classes breadth first from the root
    let mut witness: FxHashMap<u32, usize> = FxHashMap::default();
    for &s in &live {
        witness.entry(class[s]).or_insert(s);
    }
    let mut number: FxHashMap<u32, TypeTag> = FxHashMap::default();
    number.insert(class[start as usize], 0);
    let mut rep = vec![start as usize];
    let mut words: Vec<Vec<TypeTag>> = Vec::new();
    let mut i = 0;
    while i < rep.len() {
        let mut w = Vec::new();
        for &c in trans[rep[i]].as_ref().unwrap() {
            let cl = class[c as usize];
            let next = number.len() as TypeTag;
            let t = *number.entry(cl).or_insert_with(|| {
                rep.push(witness[&cl]);
                next
            });
            w.push(t);
        }
        words.push(w);
        i += 1;
    }
    TypeTable::new(words, 0).map_err(Failure::Invalid)
}

// The table must reproduce every vertex of the patch.
fn validate(r: &Refined, rings: &Rings, table: &TypeTable) -> std::result::Result<(), String> {
    let root = r.root as usize;
    let n = rings.own.len();
    let mut ty = vec![u16::MAX; n];
    ty[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        if rings.depth[v] > rings.max_depth {
            continue;
        }
        let t = ty[v];
        let degree = r.nbrs[v].as_ref().map_or(0, |l| l.len() as u32);
        let parents = if v == root { 0 } else { table.parent_count(t) };
        if parents != rings.parents[v]
            || rings.own[v].len() != table.child_word(t).len()
            || degree != table.degree(t)
        {
            return Err(format!("table mispredicts a vertex at depth {}", rings.depth[v]));
        }
        for (j, &c) in rings.own[v].iter().enumerate() {
            ty[c as usize] = table.child_word(t)[j];
            queue.push_back(c as usize);
        }
    }
    Ok(())
}

fn derive(q: u32, a: u32, b: u32, radius: u32) -> std::result::Result<TypeTable, String> {
    let refined = refine(q, a, b, radius);
    let rings = split_rings(&refined)?;
    for rho in 1..rings.max_depth.saturating_sub(1) {
        match automaton(&refined, &rings, rho) {
            Ok(t) => match validate(&refined, &rings, &t) {
                Ok(()) => return Ok(t),
                Err(_) => continue,
            },
            Err(Failure::Ambiguous) => continue,
            Err(Failure::Open) => return Err(format!("patch of radius {radius} too small")),
            Err(Failure::Invalid(e)) => return Err(e),
        }
    }
    Err(format!("patch of radius {radius} too small"))
}

fn skeleton_size(q: u32, radius: u32) -> usize {
    let t = TypeTable::regular(q);
    (0..=radius)
        .map(|k| {
            let c = t.descendant_counts(k);
            usize::try_from(&c[0]).unwrap_or(usize::MAX)
        })
        .fold(0usize, |a, b| a.saturating_add(b))
}

fn compute(params: GridParams) -> Result<TypeTable> {
    let GridParams { q, a, b } = params;
    let area = (a * a + a * b + b * b) as usize;
    let mut last = String::new();
    for radius in 3..40 {
        if skeleton_size(q, radius).saturating_mul(area) > 40_000_000 {
            break;
        }
        match derive(q, a, b, radius) {
            Ok(t) => return Ok(t),
            Err(e) => last = e,
        }
    }
    Err(Error::TableDerivation(format!("{params}: {last}")))
}

static CACHE: OnceLock<Mutex<FxHashMap<GridParams, Arc<TypeTable>>>> = OnceLock::new();

pub(super) fn table_for(params: GridParams) -> Result<Arc<TypeTable>> {
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&params) {
        return Ok(Arc::clone(t));
    }
    let t = Arc::new(compute(params)?);
    cache.lock().unwrap().insert(params, Arc::clone(&t));
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_refinement_reproduces_regular_table() {
        let t = compute(GridParams::new(7, 1, 0)).unwrap();
        assert_eq!(t, TypeTable::regular(7));
    }

    #[test]
    fn seven_types_for_first_refinement() {
        for q in [7, 8] {
            let t = compute(GridParams::new(q, 1, 1)).unwrap();
            assert_eq!(t.len(), 7);
        }
    }

    #[test]
    fn refined_degrees() {
        let t = compute(GridParams::new(7, 2, 1)).unwrap();
        for ty in 1..t.len() as TypeTag {
            let d = t.degree(ty);
            assert!(d == 6 || d == 7, "type {ty} has degree {d}");
        }
    }

    #[test]
    fn eisenstein_rotation() {
        let mut p = (2, -1);
        for _ in 0..6 {
            p = rot(p);
        }
        assert_eq!(p, (2, -1));
        assert_eq!(norm(rot((3, -1))), norm((3, -1)));
    }
}
