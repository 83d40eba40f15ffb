//! Root systems of small rank as exact rational data: Weyl orbits, the
//! spanning / no-2+2 / no-3+3 orbit conditions, and the brute-force
//! verification that orbits satisfying the first two occur only for simple
//! type A with the scaled coordinate-vector orbit.

use std::collections::{HashMap, HashSet};

use num_rational::Ratio;
use serde::Serialize;

use crate::par::par_map;

pub type Vect = Vec<Ratio<i64>>;

fn vadd(a: &Vect, b: &Vect) -> Vect {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vsub(a: &Vect, b: &Vect) -> Vect {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vscale(a: &Vect, c: Ratio<i64>) -> Vect {
    a.iter().map(|x| x * c).collect()
}

fn vdot(a: &Vect, b: &Vect) -> Ratio<i64> {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn vzero(a: &Vect) -> bool {
    a.iter().all(|x| *x == Ratio::from_integer(0))
}

fn from_ints(v: &[i64]) -> Vect {
    v.iter().map(|&x| Ratio::from_integer(x)).collect()
}

/// A root system with exact rational roots, its simple reflections, and
/// the blocks of coordinates that live in a sum-zero quotient.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub label: String,
    pub dim: usize,
    /// rank of the span of the roots
    pub rank: usize,
    pub roots: Vec<Vect>,
    pub simple: Vec<Vect>,
    /// coordinate blocks to be centered (A-type quotients); others are left alone
    centered_blocks: Vec<(usize, usize)>,
    pub weyl_order: u64,
    /// `Some(l)` when the system is simple of type A_l
    pub a_type: Option<usize>,
}

impl RootSystem {
    /// Orthogonal projection onto the span of the roots: centers each
    /// sum-zero block. Vectors compare equal iff equal in the quotient.
    pub fn project(&self, v: &Vect) -> Vect {
        assert_eq!(v.len(), self.dim);
        let mut out = v.clone();
        for &(lo, hi) in &self.centered_blocks {
            let len = (hi - lo) as i64;
            let mean: Ratio<i64> =
                out[lo..hi].iter().sum::<Ratio<i64>>() / Ratio::from_integer(len);
            for x in &mut out[lo..hi] {
                *x -= mean;
            }
        }
        out
    }

    fn reflect(alpha: &Vect, v: &Vect) -> Vect {
        let c = Ratio::from_integer(2) * vdot(v, alpha) / vdot(alpha, alpha);
        vsub(v, &vscale(alpha, c))
    }

    /// Closure of the projected vector under the simple reflections;
    /// elements sorted lexicographically.
    pub fn weyl_orbit(&self, lambda: &Vect) -> WeightOrbit {
        self.weyl_orbit_capped(lambda, 100_000)
            .expect("orbit cap exceeded")
    }

    pub fn weyl_orbit_capped(&self, lambda: &Vect, cap: usize) -> Option<WeightOrbit> {
        let base = self.project(lambda);
        let mut seen: HashSet<Vect> = HashSet::new();
        let mut queue = vec![base.clone()];
        seen.insert(base.clone());
        while let Some(v) = queue.pop() {
            for alpha in &self.simple {
                let w = Self::reflect(alpha, &v);
                if seen.insert(w.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push(w);
                }
            }
        }
        let mut elements: Vec<Vect> = seen.into_iter().collect();
        elements.sort();
        Some(WeightOrbit {
            base,
            elements,
            system: self.label.clone(),
        })
    }

    /// Pairs of orthogonal roots (unordered, each pair once).
    pub fn orthogonal_root_pairs(&self) -> Vec<(Vect, Vect)> {
        let mut out = Vec::new();
        for (i, a) in self.roots.iter().enumerate() {
            for b in self.roots.iter().skip(i + 1) {
                if vdot(a, b) == Ratio::from_integer(0) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// The scaled coordinate orbit `{c e_i}` for type A, projected.
    fn standard_a_orbit(&self, c: Ratio<i64>) -> Vec<Vect> {
        let l = self.a_type.expect("A-type only");
        let mut out: Vec<Vect> = (0..=l)
            .map(|i| {
                let mut v = vec![Ratio::from_integer(0); self.dim];
                v[i] = c;
                self.project(&v)
            })
            .collect();
        out.sort();
        out
    }
}

#[derive(Clone, Debug)]
pub struct WeightOrbit {
    pub base: Vect,
    /// sorted, deduplicated orbit elements (projected)
    pub elements: Vec<Vect>,
    pub system: String,
}

/// The three orbit conditions: (a) spans the ambient space, (b) no
/// `l1+l2 = l3+l4` among four distinct elements, (c) no
/// `l1+l2+l3 = l4+l5+l6` among six distinct elements.
pub fn check_conditions(sys: &RootSystem, orbit: &WeightOrbit) -> (bool, bool, bool) {
    (
        spans(sys, orbit),
        no_pair_relation(orbit),
        no_triple_relation(orbit),
    )
}

fn spans(sys: &RootSystem, orbit: &WeightOrbit) -> bool {
    // rational Gaussian elimination
    let mut rows: Vec<Vect> = Vec::new();
    for v in &orbit.elements {
        let mut w = v.clone();
        for r in &rows {
            let p = r.iter().position(|x| *x != Ratio::from_integer(0)).unwrap();
            if w[p] != Ratio::from_integer(0) {
                let f = w[p] / r[p];
                w = vsub(&w, &vscale(r, f));
            }
        }
        if !vzero(&w) {
            rows.push(w);
            if rows.len() == sys.rank {
                return true;
            }
        }
    }
    rows.len() == sys.rank
}

/// True iff there is NO relation `l1+l2 = l3+l4` with all four distinct.
pub fn no_pair_relation(orbit: &WeightOrbit) -> bool {
    let n = orbit.elements.len();
    let mut sums: HashMap<Vect, Vec<(u16, u16)>> = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let s = vadd(&orbit.elements[i], &orbit.elements[j]);
            let entry = sums.entry(s).or_default();
            for &(a, b) in entry.iter() {
                if a as usize != i && a as usize != j && b as usize != i && b as usize != j {
                    return false;
                }
            }
            entry.push((i as u16, j as u16));
        }
    }
    true
}

/// True iff there is NO relation `l1+l2+l3 = l4+l5+l6` with six distinct.
pub fn no_triple_relation(orbit: &WeightOrbit) -> bool {
    let n = orbit.elements.len();
    let mut sums: HashMap<Vect, Vec<[u16; 3]>> = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = vadd(
                    &vadd(&orbit.elements[i], &orbit.elements[j]),
                    &orbit.elements[k],
                );
                let t = [i as u16, j as u16, k as u16];
                let entry = sums.entry(s).or_default();
                for prev in entry.iter() {
                    if prev.iter().all(|x| !t.contains(x)) {
                        return false;
                    }
                }
                entry.push(t);
            }
        }
    }
    true
}

/// The orthogonality dichotomy: under condition (b), every orbit element is
/// orthogonal to at least one root of every orthogonal root pair.
pub fn orthogonal_pair_property(sys: &RootSystem, orbit: &WeightOrbit) -> bool {
    let pairs = sys.orthogonal_root_pairs();
    for lam in &orbit.elements {
        for (a, b) in &pairs {
            if vdot(lam, a) != Ratio::from_integer(0) && vdot(lam, b) != Ratio::from_integer(0) {
                return false;
            }
        }
    }
    true
}

fn a_system(l: usize) -> RootSystem {
    let dim = l + 1;
    let mut roots = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                let mut v = vec![0i64; dim];
                v[i] = 1;
                v[j] = -1;
                roots.push(from_ints(&v));
            }
        }
    }
    let simple: Vec<Vect> = (1..dim)
        .map(|i| {
            let mut v = vec![0i64; dim];
            v[i - 1] = 1;
            v[i] = -1;
            from_ints(&v)
        })
        .collect();
    let weyl_order = (1..=dim as u64).product();
    RootSystem {
        label: format!("A{l}"),
        dim,
        rank: l,
        roots,
        simple,
        centered_blocks: vec![(0, dim)],
        weyl_order,
        a_type: Some(l),
    }
}

fn bc_system(n: usize, long: bool) -> RootSystem {
    // B_n: short +-e_i and long +-e_i +- e_j; C_n: long +-2e_i
    let mut roots = Vec::new();
    for i in 0..n {
        let mut v = vec![0i64; n];
        v[i] = if long { 2 } else { 1 };
        roots.push(from_ints(&v));
        v[i] = -v[i];
        roots.push(from_ints(&v));
    }
    for i in 0..n {
        for j in i + 1..n {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0i64; n];
                v[i] = si;
                v[j] = sj;
                roots.push(from_ints(&v));
            }
        }
    }
    let mut simple: Vec<Vect> = (1..n)
        .map(|i| {
            let mut v = vec![0i64; n];
            v[i - 1] = 1;
            v[i] = -1;
            from_ints(&v)
        })
        .collect();
    let mut last = vec![0i64; n];
    last[n - 1] = if long { 2 } else { 1 };
    simple.push(from_ints(&last));
    let weyl_order = (1..=n as u64).product::<u64>() * (1u64 << n);
    RootSystem {
        label: format!("{}{n}", if long { "C" } else { "B" }),
        dim: n,
        rank: n,
        roots,
        simple,
        centered_blocks: vec![],
        weyl_order,
        a_type: None,
    }
}

fn d4_system() -> RootSystem {
    let n = 4usize;
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0i64; n];
                v[i] = si;
                v[j] = sj;
                roots.push(from_ints(&v));
            }
        }
    }
    let simple = vec![
        from_ints(&[1, -1, 0, 0]),
        from_ints(&[0, 1, -1, 0]),
        from_ints(&[0, 0, 1, -1]),
        from_ints(&[0, 0, 1, 1]),
    ];
    RootSystem {
        label: "D4".into(),
        dim: 4,
        rank: 4,
        roots,
        simple,
        centered_blocks: vec![],
        weyl_order: 192,
        a_type: None,
    }
}

fn g2_system() -> RootSystem {
    // inside the sum-zero plane of R^3: 6 short A2-type roots and 6 long
    let short = [[1, -1, 0], [0, 1, -1], [1, 0, -1]];
    let long = [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]];
    let mut roots = Vec::new();
    for r in short.iter().chain(long.iter()) {
        roots.push(from_ints(r));
        roots.push(from_ints(&r.map(|x| -x)));
    }
    RootSystem {
        label: "G2".into(),
        dim: 3,
        rank: 2,
        roots,
        simple: vec![from_ints(&[1, -1, 0]), from_ints(&[-1, 2, -1])],
        centered_blocks: vec![(0, 3)],
        weyl_order: 12,
        a_type: None,
    }
}

fn product_a(l1: usize, l2: usize) -> RootSystem {
    let s1 = a_system(l1);
    let s2 = a_system(l2);
    let dim = s1.dim + s2.dim;
    let emb1 = |v: &Vect| {
        let mut w = vec![Ratio::from_integer(0); dim];
        w[..s1.dim].clone_from_slice(v);
        w
    };
    let emb2 = |v: &Vect| {
        let mut w = vec![Ratio::from_integer(0); dim];
        w[s1.dim..].clone_from_slice(v);
        w
    };
    let roots: Vec<Vect> = s1
        .roots
        .iter()
        .map(emb1)
        .chain(s2.roots.iter().map(emb2))
        .collect();
    let simple: Vec<Vect> = s1
        .simple
        .iter()
        .map(emb1)
        .chain(s2.simple.iter().map(emb2))
        .collect();
    RootSystem {
        label: format!("A{l1}xA{l2}"),
        dim,
        rank: l1 + l2,
        roots,
        simple,
        centered_blocks: vec![(0, s1.dim), (s1.dim, dim)],
        weyl_order: s1.weyl_order * s2.weyl_order,
        a_type: None,
    }
}

/// The verification catalog: all simple systems of rank <= 3, plus A4, D4,
/// and the products the exclusion lemmas feed on.
pub fn catalog() -> Vec<RootSystem> {
    vec![
        a_system(1),
        a_system(2),
        a_system(3),
        a_system(4),
        bc_system(2, false),
        bc_system(3, false),
        bc_system(3, true),
        d4_system(),
        g2_system(),
        product_a(1, 1),
        product_a(1, 2),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemVerdict {
    pub system: String,
    pub orbits_checked: usize,
    /// orbits satisfying (a) and (b)
    pub ab_orbits: usize,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictTable {
    pub box_radius: i64,
    pub rows: Vec<SystemVerdict>,
    pub total_counterexamples: usize,
}

/// Exhaustive verification over the catalog with sample vectors from the
/// integer box `[-r, r]^dim`: every orbit satisfying (a)+(b) occurs only in
/// simple type A, and is the scaled coordinate orbit (for A_2 only under
/// the additional condition (c)). Also checks the orthogonal-pair
/// dichotomy on every orbit satisfying (b).
pub fn verify_main_theorem(box_radius: i64) -> VerdictTable {
    let systems = catalog();
    let rows = par_map(systems, |sys| verify_system(&sys, box_radius));
    let total = rows.iter().map(|r| r.counterexamples.len()).sum();
    VerdictTable {
        box_radius,
        rows,
        total_counterexamples: total,
    }
}

/// Sequential twin of [`verify_main_theorem`], for the bench comparison.
pub fn verify_main_theorem_seq(box_radius: i64) -> VerdictTable {
    let systems = catalog();
    let rows = crate::par::seq_map(systems, |sys| verify_system(&sys, box_radius));
    let total = rows.iter().map(|r| r.counterexamples.len()).sum();
    VerdictTable {
        box_radius,
        rows,
        total_counterexamples: total,
    }
}

fn verify_system(sys: &RootSystem, r: i64) -> SystemVerdict {
    let mut seen: HashSet<Vect> = HashSet::new();
    let mut orbits_checked = 0usize;
    let mut ab_orbits = 0usize;
    let mut counterexamples = Vec::new();
    let mut coords = vec![-r; sys.dim];
    loop {
        let v: Vect = coords.iter().map(|&x| Ratio::from_integer(x)).collect();
        let pv = sys.project(&v);
        if !seen.contains(&pv) {
            let orbit = sys.weyl_orbit(&pv);
            for e in &orbit.elements {
                seen.insert(e.clone());
            }
            orbits_checked += 1;
            let a = spans(sys, &orbit);
            let b = no_pair_relation(&orbit);
            if b && !orthogonal_pair_property(sys, &orbit) {
                counterexamples.push(format!(
                    "{}: orbit of {:?} violates the orthogonal-pair dichotomy",
                    sys.label, orbit.base
                ));
            }
            if a && b {
                ab_orbits += 1;
                match sys.a_type {
                    None => counterexamples.push(format!(
                        "{}: non-A system has an orbit of {:?} satisfying (a)+(b)",
                        sys.label, orbit.base
                    )),
                    Some(l) => {
                        let need_form = l != 2 || no_triple_relation(&orbit);
                        if need_form && !is_scaled_coordinate_orbit(sys, &orbit) {
                            counterexamples.push(format!(
                                "{}: orbit of {:?} satisfies the conditions but is not c*e_i",
                                sys.label, orbit.base
                            ));
                        }
                    }
                }
            }
        }
        // next box vector
        let mut i = 0usize;
        loop {
            if i == sys.dim {
                return SystemVerdict {
                    system: sys.label.clone(),
                    orbits_checked,
                    ab_orbits,
                    counterexamples,
                };
            }
            coords[i] += 1;
            if coords[i] <= r {
                break;
            }
            coords[i] = -r;
            i += 1;
        }
    }
}

fn is_scaled_coordinate_orbit(sys: &RootSystem, orbit: &WeightOrbit) -> bool {
    let Some(l) = sys.a_type else { return false };
    if orbit.elements.len() != l + 1 {
        return false;
    }
    // derive c from the first element: it must be parallel to some proj(e_i)
    let e0 = {
        let mut v = vec![Ratio::from_integer(0); sys.dim];
        v[0] = Ratio::from_integer(1);
        sys.project(&v)
    };
    let cand = &orbit.elements[0];
    // cand = c * proj(e_i) for the permutation-translate; since all
    // proj(e_i) are permutations of proj(e_0), test every coordinate ratio
    for (x, y) in cand.iter().zip(&e0) {
        if *y == Ratio::from_integer(0) {
            continue;
        }
        let c = *x / *y;
        if c == Ratio::from_integer(0) {
            continue;
        }
        if orbit.elements == sys.standard_a_orbit(c) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_examples() {
        // A2, e_0: the three coordinate vectors, size 3
        let a2 = a_system(2);
        let orbit = a2.weyl_orbit(&from_ints(&[1, 0, 0]));
        assert_eq!(orbit.elements.len(), 3);

        // A1, lambda = 0: {0}
        let a1 = a_system(1);
        let orbit = a1.weyl_orbit(&from_ints(&[0, 0]));
        assert_eq!(orbit.elements.len(), 1);
        assert!(vzero(&orbit.elements[0]));

        // B2, e_1: {+-e_1, +-e_2}, size 4
        let b2 = bc_system(2, false);
        let orbit = b2.weyl_orbit(&from_ints(&[1, 0]));
        assert_eq!(orbit.elements.len(), 4);
    }

    #[test]
    fn condition_examples() {
        let a2 = a_system(2);
        // {e_i}: all three conditions hold
        let orbit = a2.weyl_orbit(&from_ints(&[1, 0, 0]));
        assert_eq!(check_conditions(&a2, &orbit), (true, true, true));

        // generic vector (0,1,3): 6 elements; (a) holds, (c) fails (the sum
        // of the three even permutations equals the sum of the three odd
        // ones). For rank 2 this is exactly the case (b) cannot exclude.
        let orbit = a2.weyl_orbit(&from_ints(&[0, 1, 3]));
        assert_eq!(orbit.elements.len(), 6);
        let (a, _b, c) = check_conditions(&a2, &orbit);
        assert!(a);
        assert!(!c);

        // B2 {+-e_i}: e_1 + (-e_1) = e_2 + (-e_2), so (b) fails
        let b2 = bc_system(2, false);
        let orbit = b2.weyl_orbit(&from_ints(&[1, 0]));
        let (a, b, _) = check_conditions(&b2, &orbit);
        assert!(a);
        assert!(!b);
    }

    #[test]
    fn reflections_are_orthogonal_involutions() {
        for sys in catalog() {
            for alpha in &sys.simple {
                // reflection preserves the inner product and squares to id
                let v = sys.project(&from_ints(
                    &(0..sys.dim as i64).map(|i| i + 1).collect::<Vec<_>>(),
                ));
                let w = RootSystem::reflect(alpha, &v);
                assert_eq!(vdot(&w, &w), vdot(&v, &v));
                assert_eq!(RootSystem::reflect(alpha, &w), v);
            }
            // reflections permute the roots
            for alpha in &sys.simple {
                for beta in &sys.roots {
                    let r = RootSystem::reflect(alpha, beta);
                    assert!(
                        sys.roots.contains(&r),
                        "{}: reflection does not permute roots",
                        sys.label
                    );
                }
            }
        }
    }

    #[test]
    fn orbit_size_divides_weyl_order() {
        for sys in catalog() {
            let v: Vec<i64> = (0..sys.dim as i64).collect();
            let orbit = sys.weyl_orbit(&from_ints(&v));
            assert_eq!(
                sys.weyl_order % orbit.elements.len() as u64,
                0,
                "{}: orbit size {} does not divide |W| = {}",
                sys.label,
                orbit.elements.len(),
                sys.weyl_order
            );
        }
    }

    #[test]
    fn conditions_invariant_under_scaling() {
        let a3 = a_system(3);
        let v = from_ints(&[2, 1, 0, 0]);
        let orbit = a3.weyl_orbit(&v);
        let scaled = a3.weyl_orbit(&vscale(&v, Ratio::new(3, 2)));
        assert_eq!(
            check_conditions(&a3, &orbit),
            check_conditions(&a3, &scaled)
        );
    }

    #[test]
    fn g2_and_d4_have_no_ab_orbits_small_box() {
        // spot-check with a radius-2 box; the full radius-3 run is in the
        // acceptance suite
        for sys in [g2_system(), d4_system()] {
            let verdict = verify_system(&sys, 2);
            assert_eq!(verdict.ab_orbits, 0, "{}", sys.label);
            assert!(verdict.counterexamples.is_empty());
        }
    }

    #[test]
    fn a2_ab_orbits_are_coordinate_orbits() {
        let verdict = verify_system(&a_system(2), 2);
        assert!(verdict.counterexamples.is_empty());
        assert!(verdict.ab_orbits > 0);
    }
}
