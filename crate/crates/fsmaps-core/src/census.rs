//! Brute-force census of rooted maps in the permutation model.
//!
//! A map is a triple of permutations of the oriented edges: sigma0 rotates an
//! oriented edge anticlockwise around the vertex it points to, sigma1 swaps
//! the two orientations of an edge, sigma2 rotates anticlockwise around the
//! face on its left, and sigma0 o sigma1 o sigma2 = id. Vertices, edges and
//! faces are the cycles of sigma0, sigma1, sigma2.
//!
//! The enumerator pins sigma2 to a canonical cycle structure (boundary
//! blocks first, with roots at block starts, then internal faces grouped by
//! degree) and walks all fixed-point-free involutions sigma1. Each surviving
//! triple is counted once per equivalence class after dividing by the
//! stabilizer of the canonical sigma2, which is the group rotating and
//! permuting same-degree internal faces. For closed maps the same division
//! yields the sum of inverse automorphism orders, which is exactly the
//! weight the generating series uses.

use crate::error::{AlgError, Result};
use crate::rational::{rat_i64, Rat};
use crate::table::{
    profile_edges_contribution, profile_faces, CountTable, Profile, Provenance, TableKind,
};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

/// A rooted combinatorial map as a permutation triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermTriple {
    pub sigma0: Vec<usize>,
    pub sigma1: Vec<usize>,
    pub sigma2: Vec<usize>,
    pub roots: Vec<usize>,
}

/// Validated combinatorial data of a triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapShape {
    pub genus: u32,
    pub vertex_degrees: Vec<usize>,
    pub face_degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TripleViolation {
    LengthMismatch,
    NotAPermutation { which: &'static str },
    FixedPointInInvolution,
    NotAnInvolution,
    ProductNotIdentity,
    NotConnected,
    RootOutOfRange,
    RootsShareFace,
}

fn is_permutation(p: &[usize]) -> bool {
    let n = p.len();
    let mut seen = vec![false; n];
    for &v in p {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

fn cycle_lengths(p: &[usize]) -> Vec<usize> {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut lens = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut e = s;
        while !seen[e] {
            seen[e] = true;
            len += 1;
            e = p[e];
        }
        lens.push(len);
    }
    lens
}

fn cycle_id(p: &[usize]) -> Vec<usize> {
    let n = p.len();
    let mut id = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if id[s] != usize::MAX {
            continue;
        }
        let mut e = s;
        while id[e] == usize::MAX {
            id[e] = next;
            e = p[e];
        }
        next += 1;
    }
    id
}

impl PermTriple {
    pub fn ne(&self) -> usize {
        self.sigma1.len()
    }

    /// Check every structural invariant and report the combinatorial shape.
    pub fn validate(&self) -> core::result::Result<MapShape, TripleViolation> {
        let n = self.ne();
        if self.sigma0.len() != n || self.sigma2.len() != n {
            return Err(TripleViolation::LengthMismatch);
        }
        for (p, which) in [
            (&self.sigma0, "sigma0"),
            (&self.sigma1, "sigma1"),
            (&self.sigma2, "sigma2"),
        ] {
            if !is_permutation(p) {
                return Err(TripleViolation::NotAPermutation { which });
            }
        }
        for e in 0..n {
            if self.sigma1[e] == e {
                return Err(TripleViolation::FixedPointInInvolution);
            }
            if self.sigma1[self.sigma1[e]] != e {
                return Err(TripleViolation::NotAnInvolution);
            }
        }
        for e in 0..n {
            if self.sigma0[self.sigma1[self.sigma2[e]]] != e {
                return Err(TripleViolation::ProductNotIdentity);
            }
        }
        if n > 0 && !connected(&self.sigma1, &self.sigma2) {
            return Err(TripleViolation::NotConnected);
        }
        let face_id = cycle_id(&self.sigma2);
        let mut used = BTreeSet::new();
        for &r in &self.roots {
            if r >= n {
                return Err(TripleViolation::RootOutOfRange);
            }
            if !used.insert(face_id[r]) {
                return Err(TripleViolation::RootsShareFace);
            }
        }
        let mut vertex_degrees = cycle_lengths(&self.sigma0);
        let mut face_degrees = cycle_lengths(&self.sigma2);
        vertex_degrees.sort_unstable();
        face_degrees.sort_unstable();
        let v = vertex_degrees.len() as i64;
        let f = face_degrees.len() as i64;
        let e = (n / 2) as i64;
        let euler = v - e + f;
        // Euler characteristic of a connected oriented surface is even, <= 2
        debug_assert!(euler % 2 == 0 && euler <= 2);
        Ok(MapShape {
            genus: ((2 - euler) / 2) as u32,
            vertex_degrees,
            face_degrees,
        })
    }

    /// Boundary set: union of the sigma2-orbits of the roots.
    fn boundary_set(&self) -> Vec<bool> {
        let mut b = vec![false; self.ne()];
        for &r in &self.roots {
            let mut e = r;
            loop {
                b[e] = true;
                e = self.sigma2[e];
                if e == r {
                    break;
                }
            }
        }
        b
    }

    /// A map is fully simple when every vertex carries at most one boundary
    /// oriented edge, i.e. the restriction of sigma0 to the boundary set is
    /// the identity.
    pub fn is_fully_simple(&self) -> bool {
        let b = self.boundary_set();
        restriction_is_identity(&self.sigma0, &b)
    }

    /// Dual map: exchange sigma0 and sigma2, keeping sigma1 and the roots.
    pub fn dual(&self) -> PermTriple {
        PermTriple {
            sigma0: self.sigma2.clone(),
            sigma1: self.sigma1.clone(),
            sigma2: self.sigma0.clone(),
            roots: self.roots.clone(),
        }
    }

    /// Star and uniqueness constraints of the multi-ciliated reading: the
    /// restriction of sigma2 to the union of sigma0-orbits of the roots is
    /// the identity.
    pub fn star_unique_check(&self) -> bool {
        let mut b = vec![false; self.ne()];
        for &r in &self.roots {
            let mut e = r;
            loop {
                b[e] = true;
                e = self.sigma0[e];
                if e == r {
                    break;
                }
            }
        }
        restriction_is_identity(&self.sigma2, &b)
    }
}

/// The cycle-deletion restriction of p to the marked set equals the identity
/// exactly when no p-cycle holds two marked elements.
fn restriction_is_identity(p: &[usize], marked: &[bool]) -> bool {
    let id = cycle_id(p);
    let ncyc = id.iter().max().map_or(0, |m| m + 1);
    let mut count = vec![0usize; ncyc];
    for e in 0..p.len() {
        if marked[e] {
            count[id[e]] += 1;
            if count[id[e]] > 1 {
                return false;
            }
        }
    }
    true
}

fn connected(sigma1: &[usize], sigma2: &[usize]) -> bool {
    let n = sigma1.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut visited = 1;
    while let Some(e) = stack.pop() {
        for f in [sigma1[e], sigma2[e]] {
            if !seen[f] {
                seen[f] = true;
                visited += 1;
                stack.push(f);
            }
        }
    }
    visited == n
}

/// Instance filter for the enumerator: genus, ordered boundary degrees and
/// an exact internal-face profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFilter {
    pub genus: u32,
    pub boundary: Vec<usize>,
    pub profile: Profile,
}

impl MapFilter {
    pub fn oriented_edges(&self) -> usize {
        self.boundary.iter().sum::<usize>() + profile_edges_contribution(&self.profile)
    }

    /// Vertex count forced by Euler's relation, when it is a positive
    /// integer.
    pub fn vertex_count(&self) -> Option<u32> {
        let ne = self.oriented_edges();
        if ne % 2 != 0 {
            return None;
        }
        let e = (ne / 2) as i64;
        let f = (self.boundary.len() + profile_faces(&self.profile)) as i64;
        let v = 2 - 2 * (self.genus as i64) + e - f;
        if v >= 1 {
            Some(v as u32)
        } else {
            None
        }
    }
}

/// Counts from one enumeration pass: ordinary and fully simple classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceCount {
    pub ordinary: Rat,
    pub fully_simple: Rat,
}

/// The canonical sigma2 for a filter: boundary blocks first (root at each
/// block start), then internal faces in degree order.
fn canonical_sigma2(filter: &MapFilter) -> (Vec<usize>, Vec<usize>) {
    let ne = filter.oriented_edges();
    let mut sigma2 = vec![0usize; ne];
    let mut roots = Vec::new();
    let mut pos = 0;
    let mut blocks: Vec<(usize, bool)> = filter.boundary.iter().map(|&k| (k, true)).collect();
    for (d, c) in &filter.profile {
        for _ in 0..*c {
            blocks.push((*d, false));
        }
    }
    for (len, is_boundary) in blocks {
        if is_boundary {
            roots.push(pos);
        }
        for i in 0..len {
            sigma2[pos + i] = pos + (i + 1) % len;
        }
        pos += len;
    }
    (sigma2, roots)
}

/// Stabilizer order of the canonical sigma2 with pinned roots: internal
/// faces of equal degree may be permuted and each rotated.
fn stabilizer_order(profile: &Profile) -> Rat {
    let mut ord = Rat::one();
    for (d, c) in profile {
        ord *= Rat::from_integer(crate::rational::factorial(*c as u64));
        for _ in 0..*c {
            ord *= rat_i64(*d as i64);
        }
    }
    ord
}

/// Enumerate all maps matching the filter by walking fixed-point-free
/// involutions sigma1 against the canonical sigma2. Returns the weighted
/// class counts (ordinary and fully simple in one pass).
pub fn enumerate(filter: &MapFilter, edge_cap: usize) -> Result<InstanceCount> {
    let ne = filter.oriented_edges();
    if ne > edge_cap {
        return Err(AlgError::CapExceeded {
            requested: ne,
            cap: edge_cap,
        });
    }
    let zero = InstanceCount {
        ordinary: Rat::zero(),
        fully_simple: Rat::zero(),
    };
    if ne == 0 {
        // the single-vertex map: one class, fully simple by convention
        if filter.genus == 0 && filter.boundary.iter().all(|&k| k == 0) && filter.profile.is_empty()
        {
            let one = Rat::one();
            return Ok(InstanceCount {
                ordinary: one.clone(),
                fully_simple: one,
            });
        }
        return Ok(zero);
    }
    if ne % 2 != 0 {
        return Ok(zero);
    }
    let v_target = match filter.vertex_count() {
        Some(v) => v as usize,
        None => return Ok(zero),
    };
    let (sigma2, roots) = canonical_sigma2(filter);
    let mut sigma2_inv = vec![0usize; ne];
    for e in 0..ne {
        sigma2_inv[sigma2[e]] = e;
    }
    // boundary marks for the fully simple test (union of root faces)
    let mut boundary_mark = vec![false; ne];
    {
        let mut pos = 0;
        for &k in &filter.boundary {
            for i in 0..k {
                boundary_mark[pos + i] = true;
            }
            pos += k;
        }
    }
    let mut state = EnumState {
        ne,
        sigma2_inv: &sigma2_inv,
        boundary_mark: &boundary_mark,
        v_target,
        pair: vec![usize::MAX; ne],
        sigma0: vec![0usize; ne],
        seen: vec![0u32; ne],
        seen_round: 0,
        stack: Vec::with_capacity(ne),
        ordinary: 0u64,
        fully_simple: 0u64,
        duality_violations: 0u64,
        check_duality: ne <= 12,
        sigma2: &sigma2,
        roots: &roots,
    };
    state.search(0);
    if state.duality_violations > 0 {
        return Err(AlgError::BadInput {
            detail: String::from("duality equivalence violated in census"),
        });
    }
    let stab = stabilizer_order(&filter.profile);
    let ordinary = rat_i64(state.ordinary as i64) / &stab;
    let fully_simple = rat_i64(state.fully_simple as i64) / &stab;
    if !filter.boundary.is_empty() {
        // rooted maps have no automorphisms: the division must be exact
        if !crate::rational::rat_is_integer(&ordinary)
            || !crate::rational::rat_is_integer(&fully_simple)
        {
            return Err(AlgError::BadInput {
                detail: format!(
                    "non-integer rooted count {ordinary} / {fully_simple} for {filter:?}"
                ),
            });
        }
    }
    Ok(InstanceCount {
        ordinary,
        fully_simple,
    })
}

struct EnumState<'a> {
    ne: usize,
    sigma2_inv: &'a [usize],
    boundary_mark: &'a [bool],
    v_target: usize,
    pair: Vec<usize>,
    sigma0: Vec<usize>,
    seen: Vec<u32>,
    seen_round: u32,
    stack: Vec<usize>,
    ordinary: u64,
    fully_simple: u64,
    duality_violations: u64,
    check_duality: bool,
    sigma2: &'a [usize],
    roots: &'a [usize],
}

impl<'a> EnumState<'a> {
    fn search(&mut self, from: usize) {
        let mut first = from;
        while first < self.ne && self.pair[first] != usize::MAX {
            first += 1;
        }
        if first == self.ne {
            self.visit_leaf();
            return;
        }
        for j in (first + 1)..self.ne {
            if self.pair[j] != usize::MAX {
                continue;
            }
            self.pair[first] = j;
            self.pair[j] = first;
            self.search(first + 1);
            self.pair[first] = usize::MAX;
            self.pair[j] = usize::MAX;
        }
    }

    fn visit_leaf(&mut self) {
        let ne = self.ne;
        // sigma0 = sigma2^{-1} o sigma1
        for e in 0..ne {
            self.sigma0[e] = self.sigma2_inv[self.pair[e]];
        }
        // connectivity under <sigma1, sigma2> via iterative scan
        self.seen_round += 1;
        let round = self.seen_round;
        self.stack.clear();
        self.stack.push(0);
        self.seen[0] = round;
        let mut visited = 1;
        while let Some(e) = self.stack.pop() {
            for f in [self.pair[e], self.sigma2[e]] {
                if self.seen[f] != round {
                    self.seen[f] = round;
                    visited += 1;
                    self.stack.push(f);
                }
            }
        }
        if visited != ne {
            return;
        }
        // vertex count and the fully simple test in one sweep over sigma0
        self.seen_round += 1;
        let round = self.seen_round;
        let mut cycles = 0usize;
        let mut fs = true;
        for s in 0..ne {
            if self.seen[s] == round {
                continue;
            }
            cycles += 1;
            if cycles > self.v_target {
                return;
            }
            let mut marked = 0usize;
            let mut e = s;
            while self.seen[e] != round {
                self.seen[e] = round;
                if self.boundary_mark[e] {
                    marked += 1;
                }
                e = self.sigma0[e];
            }
            if marked > 1 {
                fs = false;
            }
        }
        if cycles != self.v_target {
            return;
        }
        self.ordinary += 1;
        if fs {
            self.fully_simple += 1;
        }
        if self.check_duality {
            // duality equivalence: fully simple <=> the dual passes the
            // star/uniqueness constraint
            let triple = PermTriple {
                sigma0: self.sigma0.clone(),
                sigma1: self.pair.clone(),
                sigma2: self.sigma2.to_vec(),
                roots: self.roots.to_vec(),
            };
            if triple.dual().star_unique_check() != fs {
                self.duality_violations += 1;
            }
        }
    }
}

/// All internal-face profiles over the allowed degrees that keep the
/// instance within the oriented-edge cap.
pub fn feasible_profiles(boundary_sum: usize, allowed: &[usize], edge_cap: usize) -> Vec<Profile> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Profile, usize)> = vec![(0, Vec::new(), boundary_sum)];
    while let Some((idx, profile, used)) = stack.pop() {
        if idx == allowed.len() {
            out.push(profile);
            continue;
        }
        let d = allowed[idx];
        let mut count = 0;
        loop {
            let total = used + d * count;
            if total > edge_cap {
                break;
            }
            let mut p = profile.clone();
            if count > 0 {
                p.push((d, count));
            }
            stack.push((idx + 1, p, total));
            count += 1;
        }
    }
    out.sort();
    out
}

/// Census table for one (kind, genus, boundary) across all feasible
/// profiles.
pub fn oracle_counts(
    kind: TableKind,
    g: u32,
    boundary: &[usize],
    allowed_degrees: &[usize],
    edge_cap: usize,
) -> Result<CountTable> {
    let mut table = CountTable::new(kind, g, boundary.to_vec(), Provenance::Census);
    let bsum: usize = boundary.iter().sum();
    for profile in feasible_profiles(bsum, allowed_degrees, edge_cap) {
        let filter = MapFilter {
            genus: g,
            boundary: boundary.to_vec(),
            profile: profile.clone(),
        };
        let v = match filter.vertex_count() {
            Some(v) => v,
            None => continue,
        };
        let counts = enumerate(&filter, edge_cap)?;
        let value = match kind {
            TableKind::Ordinary | TableKind::Closed => counts.ordinary,
            TableKind::FullySimple => counts.fully_simple,
        };
        table.insert(v, profile, value);
    }
    Ok(table)
}

/// Independent cross-check: fixed canonical sigma1, all sigma2 permutations,
/// labeled counts divided by the hyperoctahedral order. Only viable for tiny
/// instances.
pub fn enumerate_by_sigma2(filter: &MapFilter, max_ne: usize) -> Result<InstanceCount> {
    let ne = filter.oriented_edges();
    if ne > max_ne {
        return Err(AlgError::CapExceeded {
            requested: ne,
            cap: max_ne,
        });
    }
    if ne == 0 || ne % 2 != 0 {
        return enumerate(filter, max_ne);
    }
    let v_target = match filter.vertex_count() {
        Some(v) => v as usize,
        None => {
            return Ok(InstanceCount {
                ordinary: Rat::zero(),
                fully_simple: Rat::zero(),
            })
        }
    };
    let sigma1: Vec<usize> = (0..ne).map(|e| e ^ 1).collect();
    let mut wanted_internal: Vec<usize> = Vec::new();
    for (d, c) in &filter.profile {
        for _ in 0..*c {
            wanted_internal.push(*d);
        }
    }
    wanted_internal.sort_unstable();
    let mut ordinary = 0u64;
    let mut fully_simple = 0u64;
    let mut perm: Vec<usize> = (0..ne).collect();
    permute_all(&mut perm, 0, &mut |sigma2| {
        count_rootings(
            sigma2,
            &sigma1,
            filter,
            &wanted_internal,
            v_target,
            &mut ordinary,
            &mut fully_simple,
        );
    });
    // labeled tuples with fixed sigma1 / |centralizer of sigma1|
    let e = ne / 2;
    let mut cent = Rat::from_integer(crate::rational::factorial(e as u64));
    for _ in 0..e {
        cent *= rat_i64(2);
    }
    Ok(InstanceCount {
        ordinary: rat_i64(ordinary as i64) / &cent,
        fully_simple: rat_i64(fully_simple as i64) / &cent,
    })
}

fn permute_all(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute_all(perm, k + 1, f);
        perm.swap(k, i);
    }
}

fn count_rootings(
    sigma2: &[usize],
    sigma1: &[usize],
    filter: &MapFilter,
    wanted_internal: &[usize],
    v_target: usize,
    ordinary: &mut u64,
    fully_simple: &mut u64,
) {
    let ne = sigma2.len();
    if !is_permutation(sigma2) {
        return;
    }
    let mut sigma2_inv = vec![0usize; ne];
    for e in 0..ne {
        sigma2_inv[sigma2[e]] = e;
    }
    let sigma0: Vec<usize> = (0..ne).map(|e| sigma2_inv[sigma1[e]]).collect();
    if !connected(sigma1, sigma2) {
        return;
    }
    if cycle_lengths(&sigma0).len() != v_target {
        return;
    }
    // face cycles
    let face_id = cycle_id(sigma2);
    let nfaces = face_id.iter().max().map_or(0, |m| m + 1);
    let mut face_len = vec![0usize; nfaces];
    let mut face_repr = vec![0usize; nfaces];
    for e in (0..ne).rev() {
        face_len[face_id[e]] += 1;
        face_repr[face_id[e]] = e;
    }
    let _ = face_repr;
    // assign ordered boundary cycles recursively
    let n = filter.boundary.len();
    let mut chosen = vec![usize::MAX; n];
    let mut used = vec![false; nfaces];
    assign_boundaries(
        0,
        n,
        filter,
        &face_len,
        &mut chosen,
        &mut used,
        &mut |chosen, used| {
            // remaining faces must match the internal profile
            let mut rest: Vec<usize> = (0..nfaces)
                .filter(|f| !used[*f])
                .map(|f| face_len[f])
                .collect();
            rest.sort_unstable();
            if rest != wanted_internal {
                return;
            }
            // rooting choices: any oriented edge in each chosen cycle
            let mut ways = 1u64;
            for &f in chosen.iter() {
                ways *= face_len[f] as u64;
            }
            *ordinary += ways;
            // fully simple: boundary set = union of chosen cycles
            let mut marked = vec![false; ne];
            for e in 0..ne {
                if chosen.contains(&face_id[e]) {
                    marked[e] = true;
                }
            }
            if restriction_is_identity(&sigma0, &marked) {
                *fully_simple += ways;
            }
        },
    );
}

fn assign_boundaries(
    i: usize,
    n: usize,
    filter: &MapFilter,
    face_len: &[usize],
    chosen: &mut Vec<usize>,
    used: &mut Vec<bool>,
    done: &mut impl FnMut(&[usize], &[bool]),
) {
    if i == n {
        done(chosen, used);
        return;
    }
    for f in 0..face_len.len() {
        if !used[f] && face_len[f] == filter.boundary[i] {
            used[f] = true;
            chosen[i] = f;
            assign_boundaries(i + 1, n, filter, face_len, chosen, used, done);
            used[f] = false;
            chosen[i] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(g: u32, boundary: &[usize], profile: &[(usize, usize)]) -> InstanceCount {
        enumerate(
            &MapFilter {
                genus: g,
                boundary: boundary.to_vec(),
                profile: profile.to_vec(),
            },
            16,
        )
        .unwrap()
    }

    #[test]
    fn two_edge_triples_exhaustive() {
        // single edge map: sigma2 one face of degree 2
        let single_edge = PermTriple {
            sigma0: vec![0, 1],
            sigma1: vec![1, 0],
            sigma2: vec![1, 0],
            roots: vec![0],
        };
        let shape = single_edge.validate().unwrap();
        assert_eq!(shape.genus, 0);
        assert_eq!(shape.vertex_degrees, vec![1, 1]);
        assert_eq!(shape.face_degrees, vec![2]);
        assert!(single_edge.is_fully_simple());
        // loop map: sigma2 = id gives two faces of degree 1, one vertex
        let loop_map = PermTriple {
            sigma0: vec![1, 0],
            sigma1: vec![1, 0],
            sigma2: vec![0, 1],
            roots: vec![0],
        };
        let shape = loop_map.validate().unwrap();
        assert_eq!(shape.genus, 0);
        assert_eq!(shape.vertex_degrees, vec![2]);
        assert_eq!(shape.face_degrees, vec![1, 1]);
    }

    #[test]
    fn violations_reported() {
        let fixed_point = PermTriple {
            sigma0: vec![0, 1],
            sigma1: vec![0, 1],
            sigma2: vec![0, 1],
            roots: vec![],
        };
        assert_eq!(
            fixed_point.validate(),
            Err(TripleViolation::FixedPointInInvolution)
        );
        let bad_product = PermTriple {
            sigma0: vec![0, 1],
            sigma1: vec![1, 0],
            sigma2: vec![0, 1],
            roots: vec![],
        };
        assert_eq!(
            bad_product.validate(),
            Err(TripleViolation::ProductNotIdentity)
        );
    }

    #[test]
    fn two_edge_path_is_not_fully_simple() {
        // path on vertices L-M-R rooted at its single degree-4 face
        let path = PermTriple {
            sigma0: vec![3, 1, 2, 0],
            sigma1: vec![1, 0, 3, 2],
            sigma2: vec![2, 0, 3, 1],
            roots: vec![0],
        };
        let shape = path.validate().unwrap();
        assert_eq!(shape.genus, 0);
        assert_eq!(shape.face_degrees, vec![4]);
        assert!(!path.is_fully_simple());
        assert!(!path.dual().star_unique_check());
    }

    #[test]
    fn dual_is_involutive_on_random_triples() {
        // pseudo-random valid triples: random sigma1 pairing and sigma2
        let mut state = 77u64;
        let mut rnd = move |m: usize| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) as usize) % m
        };
        let mut produced = 0;
        while produced < 1000 {
            let ne = 2 * (1 + rnd(4));
            // random involution
            let mut left: Vec<usize> = (0..ne).collect();
            let mut sigma1 = vec![0usize; ne];
            while !left.is_empty() {
                let a = left.swap_remove(rnd(left.len()));
                let b = left.swap_remove(rnd(left.len()));
                sigma1[a] = b;
                sigma1[b] = a;
            }
            // random permutation sigma2
            let mut sigma2: Vec<usize> = (0..ne).collect();
            for i in (1..ne).rev() {
                let j = rnd(i + 1);
                sigma2.swap(i, j);
            }
            let mut sigma2_inv = vec![0usize; ne];
            for e in 0..ne {
                sigma2_inv[sigma2[e]] = e;
            }
            let sigma0: Vec<usize> = (0..ne).map(|e| sigma2_inv[sigma1[e]]).collect();
            let t = PermTriple {
                sigma0,
                sigma1,
                sigma2,
                roots: vec![rnd(ne)],
            };
            if t.validate().is_err() {
                continue;
            }
            produced += 1;
            assert_eq!(t.dual().dual(), t);
            assert_eq!(t.is_fully_simple(), t.dual().star_unique_check());
        }
    }

    #[test]
    fn catalan_discs() {
        // plane trees with m edges rooted on the unique face
        for (m, cat) in [(1, 1i64), (2, 2), (3, 5), (4, 14), (5, 42)] {
            let c = count(0, &[2 * m], &[]);
            assert_eq!(c.ordinary, rat_i64(cat), "boundary {}", 2 * m);
        }
    }

    #[test]
    fn degenerate_disc_and_parity() {
        let c = count(0, &[0], &[]);
        assert_eq!(c.ordinary, rat_i64(1));
        assert_eq!(c.fully_simple, rat_i64(1));
        // odd parity vanishes
        let c = count(0, &[1, 1, 1], &[]);
        assert_eq!(c.ordinary, rat_i64(0));
    }

    #[test]
    fn one_face_torus_gluings() {
        // genus-1 square gluing
        let c = count(1, &[4], &[]);
        assert_eq!(c.ordinary, rat_i64(1));
        // genus-1 hexagon gluings (one-face maps on the torus)
        let c = count(1, &[6], &[]);
        assert_eq!(c.ordinary, rat_i64(10));
    }

    #[test]
    fn fully_simple_small_instances() {
        // single edge disc
        let c = count(0, &[2], &[]);
        assert_eq!(c.fully_simple, rat_i64(1));
        // larger tree boundaries force a doubled boundary vertex
        for m in 2..=4 {
            let c = count(0, &[2 * m], &[]);
            assert_eq!(c.fully_simple, rat_i64(0), "boundary {}", 2 * m);
        }
        // genus 1, digon boundary, one quad: one ordinary map, no fully simple
        let c = count(1, &[2], &[(4, 1)]);
        assert_eq!(c.ordinary, rat_i64(1));
        assert_eq!(c.fully_simple, rat_i64(0));
        // genus 1, digon boundary, two quads: six fully simple classes
        let c = count(1, &[2], &[(4, 2)]);
        assert_eq!(c.fully_simple, rat_i64(6));
    }

    #[test]
    fn cross_check_methods_agree() {
        let filters = [
            MapFilter {
                genus: 0,
                boundary: vec![2],
                profile: vec![],
            },
            MapFilter {
                genus: 0,
                boundary: vec![4],
                profile: vec![],
            },
            MapFilter {
                genus: 0,
                boundary: vec![2],
                profile: vec![(4, 1)],
            },
            MapFilter {
                genus: 0,
                boundary: vec![2, 2],
                profile: vec![],
            },
            MapFilter {
                genus: 1,
                boundary: vec![4],
                profile: vec![],
            },
            MapFilter {
                genus: 1,
                boundary: vec![2],
                profile: vec![(3, 2)],
            },
            MapFilter {
                genus: 0,
                boundary: vec![3],
                profile: vec![(3, 1)],
            },
            MapFilter {
                genus: 0,
                boundary: vec![],
                profile: vec![(3, 2)],
            },
            MapFilter {
                genus: 1,
                boundary: vec![],
                profile: vec![(4, 2)],
            },
        ];
        for f in filters {
            let a = enumerate(&f, 16).unwrap();
            let b = enumerate_by_sigma2(&f, 8).unwrap();
            assert_eq!(a, b, "filter {f:?}");
        }
    }

    #[test]
    fn closed_counts_carry_automorphism_weights() {
        // one-vertex genus-1 quadrangulation: the square gluing has |Aut| = 4
        // (labeled count 6 over stabilizer 4! ... division yields 3/2? the
        // weighted count is what the generating series needs)
        let c = count(1, &[], &[(4, 1)]);
        assert!(!crate::rational::rat_is_integer(&c.ordinary) || c.ordinary == rat_i64(1));
        // cross-checked against the labeled method above; here pin the value
        let b = enumerate_by_sigma2(
            &MapFilter {
                genus: 1,
                boundary: vec![],
                profile: vec![(4, 1)],
            },
            8,
        )
        .unwrap();
        assert_eq!(c, b);
    }

    #[test]
    fn profiles_enumerated_within_cap() {
        let ps = feasible_profiles(2, &[3, 4], 10);
        assert!(ps.contains(&vec![]));
        assert!(ps.contains(&vec![(3, 2)]));
        assert!(ps.contains(&vec![(4, 2)]));
        assert!(ps.contains(&vec![(3, 1), (4, 1)]));
        assert!(!ps.contains(&vec![(3, 3)]));
        let over = enumerate(
            &MapFilter {
                genus: 0,
                boundary: vec![20],
                profile: vec![],
            },
            16,
        );
        assert!(matches!(over, Err(AlgError::CapExceeded { .. })));
    }
}
