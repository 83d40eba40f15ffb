//! Matrix groups over truncated local rings: breadth-first closure with
//! canonical hashing, the congruence filtration and its strong-approximation
//! verdict, Lie-bracket spans, invariant-subgroup lattices, adjoint traces
//! and the two trace criteria, Goursat analysis of product subgroups, and
//! the order formulas for (twisted) SL_n over finite fields.

use std::collections::HashSet;
use std::sync::Arc;

use crate::field::{Elem, FqField};
use crate::matrix::{Mat, RowSpace};
use crate::ring::Ring;
use crate::trunc::{TruncElem, TruncRing};
use crate::Error;

// ---------------------------------------------------------------------------
// closure

/// Deduplication set over canonical encodings. Small encodings (at most 16
/// bytes) are packed into fixed arrays; anything larger falls back to heap
/// keys.
pub enum ClosureSet {
    Packed { len: usize, set: HashSet<[u8; 16]> },
    Plain(HashSet<Vec<u8>>),
}

impl ClosureSet {
    fn new(len: usize) -> ClosureSet {
        if len <= 16 {
            ClosureSet::Packed {
                len,
                set: HashSet::new(),
            }
        } else {
            ClosureSet::Plain(HashSet::new())
        }
    }

    fn pad(len: usize, enc: &[u8]) -> [u8; 16] {
        debug_assert_eq!(enc.len(), len);
        let mut k = [0u8; 16];
        k[..len].copy_from_slice(enc);
        k
    }

    pub fn len(&self) -> usize {
        match self {
            ClosureSet::Packed { set, .. } => set.len(),
            ClosureSet::Plain(set) => set.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, enc: &[u8]) -> bool {
        match self {
            ClosureSet::Packed { len, set } => set.contains(&Self::pad(*len, enc)),
            ClosureSet::Plain(set) => set.contains(enc),
        }
    }

    /// Returns true if newly inserted.
    pub fn insert(&mut self, enc: &[u8]) -> bool {
        match self {
            ClosureSet::Packed { len, set } => set.insert(Self::pad(*len, enc)),
            ClosureSet::Plain(set) => set.insert(enc.to_vec()),
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = &[u8]> + '_> {
        match self {
            ClosureSet::Packed { len, set } => Box::new(set.iter().map(move |k| &k[..*len])),
            ClosureSet::Plain(set) => Box::new(set.iter().map(|v| v.as_slice())),
        }
    }

    /// Canonical (sorted) element list, for set-equality assertions.
    pub fn sorted_elements(&self) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = self.iter().map(|s| s.to_vec()).collect();
        out.sort();
        out
    }
}

/// Group closure over canonical byte encodings. `complete == false` means
/// the cap was hit; the partial element set is retained.
pub struct MatGroupClosure {
    pub ring: Arc<TruncRing>,
    pub n: usize,
    pub gens: Vec<Mat<TruncElem>>,
    pub set: ClosureSet,
    pub complete: bool,
}

impl MatGroupClosure {
    pub fn order(&self) -> usize {
        self.set.len()
    }

    pub fn contains(&self, m: &Mat<TruncElem>) -> bool {
        self.set.contains(&m.encode())
    }
}

/// Table-driven arithmetic for matrices over `k[u]/(u^m)` with `|k| <= 64`:
/// entries become base-`|k|` index bytes and all field operations are
/// lookups. This is the hot kernel under the BFS closures.
pub struct MatKernel {
    p: usize,
    e: usize,
    q: usize,
    n: usize,
    m: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    /// canonical encoding length of one matrix
    pub bytes: usize,
    idx_len: usize,
}

impl MatKernel {
    pub fn try_new(field: &Arc<FqField>, n: usize, m: usize) -> Option<MatKernel> {
        if field.order() > 64 {
            return None;
        }
        let q = field.order() as usize;
        let p = field.characteristic() as usize;
        let e = field.encoded_len();
        let elems = field.elements();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for i in 0..q {
            for j in 0..q {
                add[i * q + j] = field.element_index(&elems[i].add(&elems[j])) as u8;
                mul[i * q + j] = field.element_index(&elems[i].mul(&elems[j])) as u8;
            }
        }
        Some(MatKernel {
            p,
            e,
            q,
            n,
            m,
            add,
            mul,
            bytes: n * n * m * e,
            idx_len: n * n * m,
        })
    }

    /// Canonical coefficient bytes -> index bytes (base-p digit groups).
    pub fn bytes_to_idx(&self, bytes: &[u8], out: &mut [u8]) {
        if self.e == 1 {
            out.copy_from_slice(bytes);
            return;
        }
        for (g, o) in bytes.chunks(self.e).zip(out.iter_mut()) {
            let mut v = 0usize;
            let mut mult = 1usize;
            for &b in g {
                v += b as usize * mult;
                mult *= self.p;
            }
            *o = v as u8;
        }
    }

    pub fn idx_to_bytes(&self, idx: &[u8], out: &mut [u8]) {
        if self.e == 1 {
            out.copy_from_slice(idx);
            return;
        }
        for (&v, g) in idx.iter().zip(out.chunks_mut(self.e)) {
            let mut rem = v as usize;
            for b in g {
                *b = (rem % self.p) as u8;
                rem /= self.p;
            }
        }
    }

    pub fn idx_len(&self) -> usize {
        self.idx_len
    }

    /// `out = a * b` on index arrays (row-major entries, each entry `m`
    /// truncated coefficients).
    pub fn mul_mats(&self, a: &[u8], b: &[u8], out: &mut [u8]) {
        let (n, m, q) = (self.n, self.m, self.q);
        out.fill(0);
        for i in 0..n {
            for kk in 0..n {
                let a_off = (i * n + kk) * m;
                for j in 0..n {
                    let b_off = (kk * n + j) * m;
                    let out_off = (i * n + j) * m;
                    for da in 0..m {
                        let x = a[a_off + da] as usize;
                        if x == 0 {
                            continue;
                        }
                        for db in 0..m - da {
                            let y = b[b_off + db] as usize;
                            if y == 0 {
                                continue;
                            }
                            let t = self.mul[x * q + y] as usize;
                            let slot = &mut out[out_off + da + db];
                            *slot = self.add[*slot as usize * q + t];
                        }
                    }
                }
            }
        }
    }
}

pub fn encode_trunc_mat(m: &Mat<TruncElem>) -> Vec<u8> {
    m.encode()
}

pub fn decode_trunc_mat(ring: &Arc<TruncRing>, n: usize, bytes: &[u8]) -> Mat<TruncElem> {
    let k = ring.field();
    let elem_len = k.encoded_len();
    let m = ring.len();
    let mut pos = 0usize;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            let mut coeffs = Vec::with_capacity(m);
            for _ in 0..m {
                coeffs.push(Elem::decode(k, &bytes[pos..pos + elem_len]));
                pos += elem_len;
            }
            row.push(ring.from_coeffs(coeffs));
        }
        rows.push(row);
    }
    Mat::from_rows(rows)
}

/// BFS closure of the subgroup generated by `gens` (which must be
/// invertible; in a finite monoid of units the generated sub-semigroup is
/// the subgroup). The frontier is sharded over workers level by level; the
/// final element set equals the sequential result.
pub fn closure(
    ring: &Arc<TruncRing>,
    n: usize,
    gens: &[Mat<TruncElem>],
    cap: usize,
) -> MatGroupClosure {
    closure_impl(ring, n, gens, cap, true)
}

/// Sequential reference implementation with the identical contract.
pub fn closure_seq(
    ring: &Arc<TruncRing>,
    n: usize,
    gens: &[Mat<TruncElem>],
    cap: usize,
) -> MatGroupClosure {
    closure_impl(ring, n, gens, cap, false)
}

fn closure_impl(
    ring: &Arc<TruncRing>,
    n: usize,
    gens: &[Mat<TruncElem>],
    cap: usize,
    parallel: bool,
) -> MatGroupClosure {
    for g in gens {
        assert!(g.det().try_inv().is_some(), "generators must be invertible");
    }
    let kern = MatKernel::try_new(ring.field(), n, ring.len())
        .expect("closure requires a residue field of order at most 64");
    let gen_idx: Vec<Vec<u8>> = gens
        .iter()
        .map(|g| {
            let enc = g.encode();
            let mut idx = vec![0u8; kern.idx_len()];
            kern.bytes_to_idx(&enc, &mut idx);
            idx
        })
        .collect();
    let id_enc = Mat::identity(n, &ring.zero()).encode();
    let mut id_idx = vec![0u8; kern.idx_len()];
    kern.bytes_to_idx(&id_enc, &mut id_idx);

    let mut set = ClosureSet::new(kern.bytes);
    set.insert(&id_enc);
    let mut frontier: Vec<Vec<u8>> = vec![id_idx];
    let mut complete = true;
    let mut enc_buf = vec![0u8; kern.bytes];
    'bfs: while !frontier.is_empty() {
        let products: Vec<Vec<u8>> = if parallel {
            // shard the frontier in coarse chunks; tiny per-element work
            let chunks: Vec<Vec<Vec<u8>>> = frontier.chunks(2048).map(|c| c.to_vec()).collect();
            crate::par::par_map(chunks, |chunk| {
                let mut out = Vec::with_capacity(chunk.len() * gen_idx.len());
                for a in &chunk {
                    for g in &gen_idx {
                        let mut prod = vec![0u8; kern.idx_len()];
                        kern.mul_mats(a, g, &mut prod);
                        out.push(prod);
                    }
                }
                out
            })
            .into_iter()
            .flatten()
            .collect()
        } else {
            let mut out = Vec::with_capacity(frontier.len() * gen_idx.len());
            for a in &frontier {
                for g in &gen_idx {
                    let mut prod = vec![0u8; kern.idx_len()];
                    kern.mul_mats(a, g, &mut prod);
                    out.push(prod);
                }
            }
            out
        };
        let mut next = Vec::new();
        for p in products {
            kern.idx_to_bytes(&p, &mut enc_buf);
            if set.len() >= cap && !set.contains(&enc_buf) {
                complete = false;
                break 'bfs;
            }
            if set.insert(&enc_buf) {
                next.push(p);
            }
        }
        frontier = next;
    }
    MatGroupClosure {
        ring: ring.clone(),
        n,
        gens: gens.to_vec(),
        set,
        complete,
    }
}

// ---------------------------------------------------------------------------
// filtration

/// One graded layer `H^{[i]}`, `i >= 1`: an additive subgroup of `gl_n(k)`
/// given by a prime-field basis.
#[derive(Debug)]
pub struct Layer {
    pub index: usize,
    /// dimension over the prime field
    pub dim: usize,
    pub contains_nonscalar: bool,
    /// equals `sl_n(k)` as an additive group
    pub is_sl: bool,
    pub basis: Vec<Mat<Elem>>,
}

#[derive(Debug)]
pub struct FiltrationProfile {
    pub level0_order: usize,
    /// the determinant-1 part of `H^{[0]}` is all of `SL_n(k)`
    pub level0_contains_sl: bool,
    pub layers: Vec<Layer>,
}

impl FiltrationProfile {
    /// Hypotheses of the strong-approximation theorem.
    pub fn strong_approx_hypotheses(&self) -> (bool, bool) {
        let h1 = self
            .layers
            .first()
            .map(|l| l.contains_nonscalar)
            .unwrap_or(false);
        (self.level0_contains_sl, h1)
    }
}

pub fn filtration_profile(h: &MatGroupClosure) -> Result<FiltrationProfile, Error> {
    if !h.complete {
        return Err(Error::Unsupported(
            "filtration of an incomplete closure".into(),
        ));
    }
    let ring = &h.ring;
    let k = ring.field();
    let n = h.n;
    let prime = FqField::prime(k.characteristic());
    let e = k.degree_over(&prime);
    let flat_dim = n * n * e;
    let mut level0: HashSet<Vec<u8>> = HashSet::new();
    let mut level0_sl_count = 0usize;
    let mut layer_spans: Vec<RowSpace> = (1..ring.len())
        .map(|_| RowSpace::new(&prime, flat_dim))
        .collect();
    let mut layer_reps: Vec<Vec<Mat<Elem>>> = vec![Vec::new(); ring.len().saturating_sub(1)];
    for enc in h.set.iter() {
        let m = decode_trunc_mat(ring, n, enc);
        let residue = m.map(|t: &TruncElem| t.residue());
        let mut buf = Vec::new();
        for x in residue.entries() {
            x.encode(&mut buf);
        }
        if level0.insert(buf) && residue.det().is_one() {
            // count det-1 elements of the residue image
        }
        if residue.det().is_one() {
            // recount below from the set to avoid double counting
        }
        // congruence depth: first level with a nonzero coefficient beyond Id
        let diff = m.sub(&Mat::identity(n, m.sample()));
        let depth = diff
            .entries()
            .iter()
            .filter_map(|t| t.valuation())
            .min()
            .unwrap_or(ring.len());
        if (1..ring.len()).contains(&depth) {
            let x = diff.map(|t: &TruncElem| t.coeff(depth).clone());
            let mut flat = Vec::with_capacity(flat_dim);
            for entry in x.entries() {
                flat.extend(entry.coords_over(&prime));
            }
            if layer_spans[depth - 1].insert(flat) {
                layer_reps[depth - 1].push(x);
            }
        }
    }
    // determinant-1 count of the residue image, from the deduplicated set
    for buf in &level0 {
        let m = decode_field_mat(k, n, buf);
        if m.det().is_one() {
            level0_sl_count += 1;
        }
    }
    let sl_order = group_order(n as u32, k.order(), false);
    let level0_contains_sl = level0_sl_count as u128 == sl_order;
    let sl_dim = (n * n - 1) * e;
    let layers = layer_spans
        .into_iter()
        .zip(layer_reps)
        .enumerate()
        .map(|(i, (span, reps))| {
            let contains_nonscalar = reps.iter().any(|m| !m.is_scalar());
            let traceless = reps.iter().all(|m| m.trace().is_zero());
            Layer {
                index: i + 1,
                dim: span.rank(),
                contains_nonscalar,
                is_sl: span.rank() == sl_dim && traceless,
                basis: reps,
            }
        })
        .collect();
    Ok(FiltrationProfile {
        level0_order: level0.len(),
        level0_contains_sl,
        layers,
    })
}

fn decode_field_mat(k: &Arc<FqField>, n: usize, bytes: &[u8]) -> Mat<Elem> {
    let el = k.encoded_len();
    let mut pos = 0usize;
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let e = Elem::decode(k, &bytes[pos..pos + el]);
                    pos += el;
                    e
                })
                .collect()
        })
        .collect();
    Mat::from_rows(rows)
}

/// Strong-approximation check at truncation length `m`: hypotheses from the
/// filtration, exhaustive closure, and the consistency verdict
/// (hypotheses hold iff the closure is all of `SL_n(R)`).
#[derive(Debug)]
pub struct StrongApproxReport {
    pub in_regime: bool,
    pub residually_sl: bool,
    pub layer1_nonscalar: bool,
    pub full: bool,
    pub order: usize,
    pub expected_full_order: u128,
    /// hypotheses => full (the theorem), as observed on this input
    pub consistent: bool,
    /// whenever the hypotheses hold, layer 1 is exactly sl_n
    pub layer1_is_sl_when_hypotheses: bool,
}

pub fn verify_strong_approx(
    ring: &Arc<TruncRing>,
    n: usize,
    gens: &[Mat<TruncElem>],
    cap: usize,
) -> Result<StrongApproxReport, Error> {
    for g in gens {
        assert!(g.det().is_one(), "generators must lie in SL_n(R)");
    }
    let k = ring.field();
    let h = closure(ring, n, gens, cap);
    if !h.complete {
        return Err(Error::Unsupported(format!("closure cap {cap} exceeded")));
    }
    let profile = filtration_profile(&h)?;
    let (h0, h1) = profile.strong_approx_hypotheses();
    let expected = group_order(n as u32, k.order(), false)
        * (k.order() as u128).pow(((n * n - 1) * (ring.len() - 1)) as u32);
    let full = h.order() as u128 == expected;
    let consistent = (h0 && h1) == full;
    let layer1_ok = if h0 && h1 {
        profile.layers.first().map(|l| l.is_sl).unwrap_or(false)
    } else {
        true
    };
    Ok(StrongApproxReport {
        in_regime: k.order() > 9,
        residually_sl: h0,
        layer1_nonscalar: h1,
        full,
        order: h.order(),
        expected_full_order: expected,
        consistent,
        layer1_is_sl_when_hypotheses: layer1_ok,
    })
}

// ---------------------------------------------------------------------------
// Lie algebra spans and invariant subgroups

/// Basis of `sl_n(k)`: off-diagonal units and consecutive diagonal
/// differences.
pub fn sl_basis(k: &Arc<FqField>, n: usize) -> Vec<Mat<Elem>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = Mat::zero(n, &k.zero());
                *m.at_mut(i, j) = k.one();
                out.push(m);
            }
        }
    }
    for i in 0..n - 1 {
        let mut m = Mat::zero(n, &k.zero());
        *m.at_mut(i, i) = k.one();
        *m.at_mut(i + 1, i + 1) = k.one().neg();
        out.push(m);
    }
    out
}

/// Dimension over `k` of the span of all brackets `[X, Y]` of elements of
/// `sl_n(k)`. Full (`n^2 - 1`) except in the degenerate case `(p, n) = (2, 2)`.
pub fn bracket_span(k: &Arc<FqField>, n: usize) -> usize {
    let basis = sl_basis(k, n);
    let mut span = RowSpace::new(k, n * n);
    for x in &basis {
        for y in &basis {
            let br = x.mul(y).sub(&y.mul(x));
            span.insert(br.entries().to_vec());
        }
    }
    span.rank()
}

/// An additive subgroup of `gl_n(k)` as a prime-field subspace.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub dim: usize,
    /// reduced-echelon basis over the prime field, flattened entries
    pub basis: Vec<Vec<Elem>>,
}

impl Submodule {
    fn key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for row in &self.basis {
            for e in row {
                e.encode(&mut out);
            }
        }
        out
    }

    pub fn contains(&self, other: &Submodule, prime: &Arc<FqField>, cols: usize) -> bool {
        let mut rs = RowSpace::new(prime, cols);
        for r in &self.basis {
            rs.insert(r.clone());
        }
        other.basis.iter().all(|r| rs.contains(r))
    }
}

/// Transvection generators of `SL_n(k)`.
pub fn sln_gens(k: &Arc<FqField>, n: usize) -> Vec<Mat<Elem>> {
    let prime = FqField::prime(k.characteristic());
    let e = k.degree_over(&prime);
    let mut basis_elems = Vec::with_capacity(e);
    for i in 0..e {
        let mut coords = vec![prime.zero(); e];
        coords[i] = prime.one();
        basis_elems.push(Elem::from_coords_over(k, &prime, &coords));
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for b in &basis_elems {
                let mut m = Mat::identity(n, &k.zero());
                *m.at_mut(i, j) = b.clone();
                out.push(m);
            }
        }
    }
    out
}

/// The full lattice of additive subgroups of `gl_n(k)` invariant under
/// `SL_n(k)`-conjugation, via cyclic-submodule generation and join closure.
/// Members are returned sorted by (dimension, canonical key).
pub fn invariant_subgroups(k: &Arc<FqField>, n: usize) -> Vec<Submodule> {
    let prime = FqField::prime(k.characteristic());
    let e = k.degree_over(&prime);
    let cols = n * n * e;
    let gens = sln_gens(k, n);
    let gen_invs: Vec<Mat<Elem>> = gens.iter().map(|g| g.inverse().unwrap()).collect();
    let flatten = |m: &Mat<Elem>| -> Vec<Elem> {
        let mut v = Vec::with_capacity(cols);
        for x in m.entries() {
            v.extend(x.coords_over(&prime));
        }
        v
    };
    let unflatten = |v: &[Elem]| -> Mat<Elem> {
        let rows: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let off = (i * n + j) * e;
                        Elem::from_coords_over(k, &prime, &v[off..off + e])
                    })
                    .collect()
            })
            .collect();
        Mat::from_rows(rows)
    };
    let close = |seed_rows: Vec<Vec<Elem>>| -> Submodule {
        let mut span = RowSpace::new(&prime, cols);
        let mut queue: Vec<Mat<Elem>> = Vec::new();
        for row in seed_rows {
            if span.insert(row.clone()) {
                queue.push(unflatten(&row));
            }
        }
        while let Some(m) = queue.pop() {
            for (g, gi) in gens.iter().zip(&gen_invs) {
                let c = g.mul(&m).mul(gi);
                let fc = flatten(&c);
                if span.insert(fc.clone()) {
                    queue.push(unflatten(&fc));
                }
            }
        }
        Submodule {
            dim: span.rank(),
            basis: span.basis().to_vec(),
        }
    };

    use std::collections::BTreeMap;
    let mut members: BTreeMap<Vec<u8>, Submodule> = BTreeMap::new();
    let zero = Submodule {
        dim: 0,
        basis: Vec::new(),
    };
    members.insert(zero.key(), zero);
    let total = (prime.order() as u128).pow(cols as u32);
    for idx in 1..total {
        let mut rem = idx;
        let row: Vec<Elem> = (0..cols)
            .map(|_| {
                let d = rem % prime.order();
                rem /= prime.order();
                prime.element_from_index(d)
            })
            .collect();
        let sm = close(vec![row]);
        members.entry(sm.key()).or_insert(sm);
    }
    // join closure
    loop {
        let snapshot: Vec<Submodule> = members.values().cloned().collect();
        let mut grew = false;
        for i in 0..snapshot.len() {
            for j in i + 1..snapshot.len() {
                let mut rows = snapshot[i].basis.clone();
                rows.extend(snapshot[j].basis.clone());
                let sm = close(rows);
                if !members.contains_key(&sm.key()) {
                    members.insert(sm.key(), sm);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Submodule> = members.into_values().collect();
    out.sort_by(|a, b| (a.dim, a.key()).cmp(&(b.dim, b.key())));
    out
}

/// The scalar subspace `c(k)` of `gl_n(k)` as a Submodule-style basis.
pub fn scalar_submodule(k: &Arc<FqField>, n: usize) -> Submodule {
    let prime = FqField::prime(k.characteristic());
    let e = k.degree_over(&prime);
    let cols = n * n * e;
    let mut span = RowSpace::new(&prime, cols);
    for i in 0..e {
        let mut coords = vec![prime.zero(); e];
        coords[i] = prime.one();
        let lam = Elem::from_coords_over(k, &prime, &coords);
        let m = Mat::identity(n, &k.zero()).scale(&lam);
        let mut flat = Vec::with_capacity(cols);
        for x in m.entries() {
            flat.extend(x.coords_over(&prime));
        }
        span.insert(flat);
    }
    Submodule {
        dim: span.rank(),
        basis: span.basis().to_vec(),
    }
}

/// The `sl_n(k)` subspace as a Submodule.
pub fn sl_submodule(k: &Arc<FqField>, n: usize) -> Submodule {
    let prime = FqField::prime(k.characteristic());
    let e = k.degree_over(&prime);
    let cols = n * n * e;
    let mut span = RowSpace::new(&prime, cols);
    let mut basis_elems = Vec::with_capacity(e);
    for i in 0..e {
        let mut coords = vec![prime.zero(); e];
        coords[i] = prime.one();
        basis_elems.push(Elem::from_coords_over(k, &prime, &coords));
    }
    for m in sl_basis(k, n) {
        for b in &basis_elems {
            let sb = m.scale(b);
            let mut flat = Vec::with_capacity(cols);
            for x in sb.entries() {
                flat.extend(x.coords_over(&prime));
            }
            span.insert(flat);
        }
    }
    Submodule {
        dim: span.rank(),
        basis: span.basis().to_vec(),
    }
}

// ---------------------------------------------------------------------------
// adjoint traces

/// `Tr Ad(g) = Tr(g) * Tr(g^{-1})`, the trace of conjugation on `gl_n`.
pub fn tr_ad<R: Ring>(g: &Mat<R>) -> Result<R, Error> {
    let inv = g.inverse().ok_or(Error::NonInvertible)?;
    Ok(g.trace().mul(&inv.trace()))
}

/// The charpoly route: from `X^n + b_1 X^{n-1} + ... + b_n` (constant term
/// first in the slice), `Tr Ad = b_1 * b_{n-1} / b_n`, with `b_0 = 1`.
pub fn tr_ad_from_charpoly<R: Ring>(cp: &[R]) -> Result<R, Error> {
    let n = cp.len() - 1;
    let b_n = &cp[0];
    let inv = b_n.try_inv().ok_or(Error::NonInvertible)?;
    if n == 1 {
        return Ok(cp[0].one_like());
    }
    let b_1 = &cp[n - 1];
    let b_nm1 = &cp[1];
    Ok(b_1.mul(b_nm1).mul(&inv))
}

/// In characteristic 2 the adjoint trace collapses to
/// `Tr(g)^2 * det(g)^{-1}` (the `+2` vanishes).
pub fn char2_trad_identity<R: Ring>(g: &Mat<R>) -> Result<bool, Error> {
    let lhs = tr_ad(g)?;
    let det_inv = g.det().try_inv().ok_or(Error::NonInvertible)?;
    let tr = g.trace();
    Ok(lhs == tr.mul(&tr).mul(&det_inv))
}

// ---------------------------------------------------------------------------
// trace criteria

/// Prime-field linear span closed under products: the subring generated by
/// `1` and the given elements. Returns (dimension, basis representatives).
fn subring_span<T: Clone>(
    one: &T,
    gens: &[T],
    mul: impl Fn(&T, &T) -> T,
    flat: impl Fn(&T) -> Vec<Elem>,
    prime: &Arc<FqField>,
    cols: usize,
) -> (usize, Vec<T>) {
    let mut span = RowSpace::new(prime, cols);
    let mut reps: Vec<T> = Vec::new();
    let mut queue: Vec<T> = Vec::new();
    for t in std::iter::once(one).chain(gens.iter()) {
        if span.insert(flat(t)) {
            reps.push(t.clone());
            queue.push(t.clone());
        }
    }
    while let Some(t) = queue.pop() {
        let snapshot: Vec<T> = reps.clone();
        for s in &snapshot {
            for prod in [mul(&t, s), mul(s, &t)] {
                if span.insert(flat(&prod)) {
                    reps.push(prod.clone());
                    queue.push(prod);
                }
            }
        }
    }
    (span.rank(), reps)
}

fn flat_trunc(prime: &Arc<FqField>) -> impl Fn(&TruncElem) -> Vec<Elem> + '_ {
    move |t: &TruncElem| {
        let mut v = Vec::new();
        for c in t.coeffs() {
            v.extend(c.coords_over(prime));
        }
        v
    }
}

/// True iff the samples generate all of `k[u]/(u^m)` as a ring
/// (the depth-m form of "topologically generates the ring").
pub fn trace_criterion_1(ring: &Arc<TruncRing>, samples: &[TruncElem]) -> bool {
    assert!(ring.len() >= 2);
    if samples.is_empty() {
        return false;
    }
    let k = ring.field();
    let prime = FqField::prime(k.characteristic());
    let e = k.degree_over(&prime);
    let cols = ring.len() * e;
    let (dim, _) = subring_span(
        &ring.one(),
        samples,
        |a, b| a.mul(b),
        flat_trunc(&prime),
        &prime,
        cols,
    );
    dim == cols
}

/// Characteristic-2 variant at depth `m = 3`: samples must be squares
/// (zero `u`-coefficient) and must generate the square subring
/// `k + k u^2` exactly.
pub fn trace_criterion_2(ring: &Arc<TruncRing>, samples: &[TruncElem]) -> bool {
    assert_eq!(ring.field().characteristic(), 2);
    assert_eq!(ring.len(), 3);
    if samples.is_empty() {
        return false;
    }
    // squares in k[u]/(u^3) have the form a^2 + b^2 u^2
    if samples.iter().any(|s| !s.coeff(1).is_zero()) {
        return false;
    }
    let k = ring.field();
    let prime = FqField::prime(k.characteristic());
    let e = k.degree_over(&prime);
    let (dim, _) = subring_span(
        &ring.one(),
        samples,
        |a, b| a.mul(b),
        flat_trunc(&prime),
        &prime,
        ring.len() * e,
    );
    // target subring k + k u^2 has prime dimension 2e
    dim == 2 * e
}

// ---------------------------------------------------------------------------
// Goursat

#[derive(Debug)]
pub enum GoursatClass {
    /// the subgroup is the full product
    Full,
    /// graph of an isomorphism up to center; the pairing on the input
    /// generators realizes it
    Graph {
        generator_pairs: Vec<(Mat<Elem>, Mat<Elem>)>,
    },
    Other,
}

/// Classify a subgroup of `SL_n(k1) x SL_n(k2)` given by generator pairs.
pub fn goursat_analyze(
    k1: &Arc<FqField>,
    k2: &Arc<FqField>,
    n: usize,
    gens: &[(Mat<Elem>, Mat<Elem>)],
    cap: usize,
) -> Result<GoursatClass, Error> {
    for (a, b) in gens {
        assert!(
            a.det().is_one() && b.det().is_one(),
            "generators must be in SL_n"
        );
    }
    let kern1 = MatKernel::try_new(k1, n, 1)
        .ok_or_else(|| Error::Unsupported("goursat needs |k| <= 64".into()))?;
    let kern2 = MatKernel::try_new(k2, n, 1)
        .ok_or_else(|| Error::Unsupported("goursat needs |k| <= 64".into()))?;
    let (l1, l2) = (kern1.idx_len(), kern2.idx_len());
    let split = kern1.bytes;
    let pair_idx = |a: &Mat<Elem>, b: &Mat<Elem>| -> Vec<u8> {
        let mut idx = vec![0u8; l1 + l2];
        kern1.bytes_to_idx(&a.encode(), &mut idx[..l1]);
        kern2.bytes_to_idx(&b.encode(), &mut idx[l1..]);
        idx
    };
    let gen_idx: Vec<Vec<u8>> = gens.iter().map(|(a, b)| pair_idx(a, b)).collect();
    let id1 = Mat::identity(n, &k1.zero());
    let id2 = Mat::identity(n, &k2.zero());
    let start = pair_idx(&id1, &id2);
    let mut set = ClosureSet::new(kern1.bytes + kern2.bytes);
    let mut enc_buf = vec![0u8; kern1.bytes + kern2.bytes];
    let to_enc = |idx: &[u8], buf: &mut [u8]| {
        kern1.idx_to_bytes(&idx[..l1], &mut buf[..split]);
        kern2.idx_to_bytes(&idx[l1..], &mut buf[split..]);
    };
    to_enc(&start, &mut enc_buf);
    set.insert(&enc_buf);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start);
    while let Some(a) = queue.pop_front() {
        for g in &gen_idx {
            let mut prod = vec![0u8; l1 + l2];
            kern1.mul_mats(&a[..l1], &g[..l1], &mut prod[..l1]);
            kern2.mul_mats(&a[l1..], &g[l1..], &mut prod[l1..]);
            to_enc(&prod, &mut enc_buf);
            if set.len() >= cap && !set.contains(&enc_buf) {
                return Err(Error::Unsupported(format!(
                    "goursat closure cap {cap} exceeded"
                )));
            }
            if set.insert(&enc_buf) {
                queue.push_back(prod);
            }
        }
    }
    // surjectivity onto both factors
    let mut proj1: HashSet<Vec<u8>> = HashSet::new();
    let mut proj2: HashSet<Vec<u8>> = HashSet::new();
    for v in set.iter() {
        proj1.insert(v[..split].to_vec());
        proj2.insert(v[split..].to_vec());
    }
    let o1 = group_order(n as u32, k1.order(), false);
    let o2 = group_order(n as u32, k2.order(), false);
    if proj1.len() as u128 != o1 || proj2.len() as u128 != o2 {
        return Ok(GoursatClass::Other);
    }
    if set.len() as u128 == o1 * o2 {
        return Ok(GoursatClass::Full);
    }
    // N1 = H cap (SL x 1), N2 = H cap (1 x SL)
    let id2_enc = id2.encode();
    let id1_enc = id1.encode();
    let mut n1_central = true;
    let mut n2_central = true;
    for v in set.iter() {
        if v[split..] == id2_enc[..] {
            let m = decode_field_mat(k1, n, &v[..split]);
            if !m.is_scalar() {
                n1_central = false;
            }
        }
        if v[..split] == id1_enc[..] {
            let m = decode_field_mat(k2, n, &v[split..]);
            if !m.is_scalar() {
                n2_central = false;
            }
        }
    }
    if n1_central && n2_central {
        return Ok(GoursatClass::Graph {
            generator_pairs: gens.to_vec(),
        });
    }
    Ok(GoursatClass::Other)
}

// ---------------------------------------------------------------------------
// order formulas

/// `|SL_n(F_q)|` (split) or `|SU_n(F_q)|` (twisted):
/// `q^{n(n-1)/2} * prod_{i=2}^{n} (q^i - eps^i)` with `eps = +-1`.
pub fn group_order(n: u32, q: u128, twisted: bool) -> u128 {
    let mut order = q.pow(n * (n - 1) / 2);
    for i in 2..=n {
        let qi = q.pow(i);
        let term = if twisted {
            // eps = -1: q^i - (-1)^i
            if i % 2 == 0 {
                qi - 1
            } else {
                qi + 1
            }
        } else {
            qi - 1
        };
        order = order.checked_mul(term).expect("group order overflow");
    }
    order
}

/// Confirms the strict order inequality behind the field bound: for prime
/// powers `q' >= 2q` in the range, every twisted/split combination has
/// `order(n, q') > order(n, q)`.
pub fn field_bound_check(n_max: u32, q_max: u64) -> bool {
    let prime_powers: Vec<u64> = (2..=q_max)
        .filter(|&q| crate::field::prime_power_split(q).is_ok())
        .collect();
    for n in 2..=n_max {
        for &q in &prime_powers {
            for &qp in &prime_powers {
                if qp < 2 * q {
                    continue;
                }
                for eps in [false, true] {
                    for eps_p in [false, true] {
                        if group_order(n, qp as u128, eps_p) <= group_order(n, q as u128, eps) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// generator kits used by tests, the acceptance suite and the CLI

/// Constant (Teichmüller) lift of a field matrix into the truncated ring.
pub fn lift_const(ring: &Arc<TruncRing>, m: &Mat<Elem>) -> Mat<TruncElem> {
    m.map(|x| ring.embed_const(x))
}

/// `Id + u^depth * E_{01}`.
pub fn depth_transvection(ring: &Arc<TruncRing>, n: usize, depth: usize) -> Mat<TruncElem> {
    let mut m = Mat::identity(n, &ring.zero());
    let mut coeffs = vec![ring.field().zero(); ring.len()];
    coeffs[depth] = ring.field().one();
    *m.at_mut(0, 1) = ring.from_coeffs(coeffs);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::build_extension;

    #[test]
    fn closure_identity_and_sl2_f3() {
        let f3 = FqField::prime(3);
        let ring = TruncRing::new(&f3, 1);
        let id = Mat::identity(2, &ring.zero());
        let c = closure(&ring, 2, &[id], 10);
        assert_eq!(c.order(), 1);

        let gens: Vec<Mat<TruncElem>> = sln_gens(&f3, 2)
            .iter()
            .map(|g| lift_const(&ring, g))
            .collect();
        let c = closure(&ring, 2, &gens, 100_000);
        assert!(c.complete);
        assert_eq!(c.order(), 24);
    }

    #[test]
    fn closure_matches_sequential_and_generator_order() {
        let f5 = FqField::prime(5);
        let ring = TruncRing::new(&f5, 2);
        let mut gens: Vec<Mat<TruncElem>> = sln_gens(&f5, 2)
            .iter()
            .map(|g| lift_const(&ring, g))
            .collect();
        gens.push(depth_transvection(&ring, 2, 1));
        let a = closure(&ring, 2, &gens, 100_000);
        let b = closure_seq(&ring, 2, &gens, 100_000);
        assert_eq!(a.set.sorted_elements(), b.set.sorted_elements());
        gens.reverse();
        let c = closure(&ring, 2, &gens, 100_000);
        assert_eq!(a.set.sorted_elements(), c.set.sorted_elements());
        // SL_2(F_5[u]/u^2): 120 * 5^3
        assert_eq!(a.order(), 120 * 125);
    }

    #[test]
    fn closure_cap_reports_partial() {
        let f11 = FqField::prime(11);
        let ring = TruncRing::new(&f11, 1);
        let gens: Vec<Mat<TruncElem>> = sln_gens(&f11, 2)
            .iter()
            .map(|g| lift_const(&ring, g))
            .collect();
        let c = closure(&ring, 2, &gens, 10);
        assert!(!c.complete);
        assert!(c.order() >= 10);
    }

    #[test]
    fn filtration_of_full_and_constant_groups() {
        let f5 = FqField::prime(5);
        let ring = TruncRing::new(&f5, 2);
        let mut gens: Vec<Mat<TruncElem>> = sln_gens(&f5, 2)
            .iter()
            .map(|g| lift_const(&ring, g))
            .collect();
        gens.push(depth_transvection(&ring, 2, 1));
        let c = closure(&ring, 2, &gens, 100_000);
        let p = filtration_profile(&c).unwrap();
        assert_eq!(p.level0_order, 120);
        assert!(p.level0_contains_sl);
        assert_eq!(p.layers.len(), 1);
        assert_eq!(p.layers[0].dim, 3); // sl_2(F_5)
        assert!(p.layers[0].contains_nonscalar);
        assert!(p.layers[0].is_sl);

        // Teichmüller constants: trivial layer
        let const_gens: Vec<Mat<TruncElem>> = sln_gens(&f5, 2)
            .iter()
            .map(|g| lift_const(&ring, g))
            .collect();
        let c = closure(&ring, 2, &const_gens, 100_000);
        let p = filtration_profile(&c).unwrap();
        assert!(p.level0_contains_sl);
        assert_eq!(p.layers[0].dim, 0);
        assert!(!p.layers[0].contains_nonscalar);
    }

    #[test]
    fn layer_is_closed_under_addition() {
        // layers are additive by construction (RowSpace); spot-check that
        // sums of layer basis elements come from group elements
        let f5 = FqField::prime(5);
        let ring = TruncRing::new(&f5, 2);
        let mut gens: Vec<Mat<TruncElem>> = sln_gens(&f5, 2)
            .iter()
            .map(|g| lift_const(&ring, g))
            .collect();
        gens.push(depth_transvection(&ring, 2, 1));
        let c = closure(&ring, 2, &gens, 100_000);
        // Id + u(X+Y) for X, Y in the layer: must be in the closure
        let p = filtration_profile(&c).unwrap();
        let xs = &p.layers[0].basis;
        for x in xs {
            for y in xs {
                let mut m = Mat::identity(2, &ring.zero());
                for i in 0..2 {
                    for j in 0..2 {
                        let add = x.at(i, j).add(y.at(i, j));
                        let coeffs = vec![if i == j { f5.one() } else { f5.zero() }, add];
                        *m.at_mut(i, j) = ring.from_coeffs(coeffs);
                    }
                }
                assert!(c.contains(&m));
            }
        }
    }

    #[test]
    fn strong_approx_small_field_exploration() {
        // |k| <= 9: out of regime, but the machinery still runs
        let f5 = FqField::prime(5);
        let ring = TruncRing::new(&f5, 2);
        let mut gens: Vec<Mat<TruncElem>> = sln_gens(&f5, 2)
            .iter()
            .map(|g| lift_const(&ring, g))
            .collect();
        gens.push(depth_transvection(&ring, 2, 1));
        let rep = verify_strong_approx(&ring, 2, &gens, 100_000).unwrap();
        assert!(!rep.in_regime);
        assert!(rep.residually_sl && rep.layer1_nonscalar && rep.full && rep.consistent);

        let const_gens: Vec<Mat<TruncElem>> = sln_gens(&f5, 2)
            .iter()
            .map(|g| lift_const(&ring, g))
            .collect();
        let rep = verify_strong_approx(&ring, 2, &const_gens, 100_000).unwrap();
        assert!(!rep.layer1_nonscalar && !rep.full && rep.consistent);
    }

    #[test]
    fn bracket_span_examples() {
        assert_eq!(bracket_span(&FqField::prime(3), 2), 3);
        assert_eq!(bracket_span(&FqField::prime(2), 2), 1);
        assert_eq!(bracket_span(&FqField::prime(2), 3), 8);
        assert_eq!(bracket_span(&FqField::prime(5), 2), 3);
        assert_eq!(bracket_span(&FqField::prime(3), 3), 8);
    }

    #[test]
    fn char2_pgl_ladder_connecting_map() {
        // the squaring map c(p/p^2) -> c*(p^2/p^3): for g = diag(1+ux, (1+ux)^{-1}) g2
        // with g2 = Id mod u^2, Tr((1+ux)g - Id) = u^2 x^2 mod u^3
        let f4 = build_extension(2, 2).unwrap();
        let ring = TruncRing::new(&f4, 3);
        for xi in 0..4u128 {
            let x = f4.element_from_index(xi);
            let mut sc = ring.one();
            sc = sc.add(&ring.from_coeffs(vec![f4.zero(), x.clone(), f4.zero()]));
            let sc_inv = sc.inv().unwrap();
            for g2_entry in 0..4u128 {
                // g2 = Id + u^2 * [[y, 0],[0, y]]-ish sample; keep det-friendly
                let y = f4.element_from_index(g2_entry);
                let mut g2 = Mat::identity(2, &ring.zero());
                *g2.at_mut(0, 1) = ring.from_coeffs(vec![f4.zero(), f4.zero(), y.clone()]);
                let mut g = Mat::zero(2, &ring.zero());
                *g.at_mut(0, 0) = sc.clone();
                *g.at_mut(1, 1) = sc_inv.clone();
                let g = g.mul(&g2);
                let gt = g.scale(&sc); // (1 + ux) * g
                let tr = gt.trace().sub(&Mat::identity(2, &ring.zero()).trace());
                // expected u^2 x^2
                assert!(tr.coeff(0).is_zero());
                assert!(tr.coeff(1).is_zero());
                assert_eq!(tr.coeff(2), &x.mul(&x));
            }
        }
    }

    #[test]
    fn gormogon_trace_map_is_homomorphism() {
        // f(h) = Tr(g_2 - Id) mod u^3 on GL_2(k) * G^{2-} decompositions
        let f4 = build_extension(2, 2).unwrap();
        let ring = TruncRing::new(&f4, 3);
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let rand_const_gl = |rng: &mut rand_chacha::ChaCha8Rng| loop {
            let m = Mat::from_rows(vec![
                vec![
                    f4.element_from_index(rng.gen_range(0..4)),
                    f4.element_from_index(rng.gen_range(0..4)),
                ],
                vec![
                    f4.element_from_index(rng.gen_range(0..4)),
                    f4.element_from_index(rng.gen_range(0..4)),
                ],
            ]);
            if !m.det().is_zero() {
                return m;
            }
        };
        let build = |gamma: &Mat<Elem>, g2x: &Elem, g2y: &Elem, x: &Elem| {
            // h = gamma * g2 * (1 + u x) with g2 = Id + u^2 [[g2x, g2y],[0, g2x]]
            let mut g2 = Mat::identity(2, &ring.zero());
            *g2.at_mut(0, 0) = ring.from_coeffs(vec![f4.one(), f4.zero(), g2x.clone()]);
            *g2.at_mut(0, 1) = ring.from_coeffs(vec![f4.zero(), f4.zero(), g2y.clone()]);
            *g2.at_mut(1, 1) = ring.from_coeffs(vec![f4.one(), f4.zero(), g2x.clone()]);
            let sc = ring
                .one()
                .add(&ring.from_coeffs(vec![f4.zero(), x.clone(), f4.zero()]));
            lift_const(&ring, gamma).mul(&g2).map(|t| t.mul(&sc))
        };
        // decomposition and f
        let f_of = |h: &Mat<TruncElem>| -> Elem {
            let gamma = h.map(|t: &TruncElem| t.residue());
            let gamma_inv_lift = lift_const(&ring, &gamma.inverse().unwrap());
            let w = gamma_inv_lift.mul(h);
            // w = (1 + u x) * g2 with g2 = Id mod u^2; u-coefficient of w is scalar x*Id
            let lam = w.at(0, 0).coeff(1).clone();
            let sc = ring
                .one()
                .add(&ring.from_coeffs(vec![f4.zero(), lam, f4.zero()]));
            let g2 = w.map(|t| t.mul(&sc.inv().unwrap()));
            let tr = g2.trace();
            assert!(tr.coeff(1).is_zero());
            tr.coeff(2).clone()
        };
        for _ in 0..30 {
            let h1 = build(
                &rand_const_gl(&mut rng),
                &f4.element_from_index(rng.gen_range(0..4)),
                &f4.element_from_index(rng.gen_range(0..4)),
                &f4.element_from_index(rng.gen_range(0..4)),
            );
            let h2 = build(
                &rand_const_gl(&mut rng),
                &f4.element_from_index(rng.gen_range(0..4)),
                &f4.element_from_index(rng.gen_range(0..4)),
                &f4.element_from_index(rng.gen_range(0..4)),
            );
            assert_eq!(f_of(&h1.mul(&h2)), f_of(&h1).add(&f_of(&h2)));
        }
    }

    #[test]
    fn invariant_subgroups_f11() {
        let f11 = FqField::prime(11);
        let lat = invariant_subgroups(&f11, 2);
        assert_eq!(lat.len(), 4);
        let dims: Vec<usize> = lat.iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![0, 1, 3, 4]);
        // dichotomy: each member inside scalars or containing sl_2
        let prime = FqField::prime(11);
        let scal = scalar_submodule(&f11, 2);
        let sl = sl_submodule(&f11, 2);
        for m in &lat {
            assert!(scal.contains(m, &prime, 4) || m.contains(&sl, &prime, 4));
        }
    }

    #[test]
    fn tr_ad_examples() {
        let f13 = FqField::prime(13);
        let id: Mat<Elem> = Mat::identity(3, &f13.one());
        assert_eq!(tr_ad(&id).unwrap(), f13.from_u64(9));
        // diag(a,b): 2 + a/b + b/a
        let a = f13.from_u64(3);
        let b = f13.from_u64(5);
        let mut d = Mat::zero(2, &f13.zero());
        *d.at_mut(0, 0) = a.clone();
        *d.at_mut(1, 1) = b.clone();
        let expected = f13
            .from_u64(2)
            .add(&a.mul(&b.inv().unwrap()))
            .add(&b.mul(&a.inv().unwrap()));
        assert_eq!(tr_ad(&d).unwrap(), expected);

        // matrix path equals charpoly path on random invertibles
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut count = 0;
        while count < 1000 {
            let m = Mat::from_rows(vec![
                vec![
                    f13.from_u64(rng.gen_range(0..13)),
                    f13.from_u64(rng.gen_range(0..13)),
                ],
                vec![
                    f13.from_u64(rng.gen_range(0..13)),
                    f13.from_u64(rng.gen_range(0..13)),
                ],
            ]);
            if m.det().is_zero() {
                continue;
            }
            count += 1;
            assert_eq!(
                tr_ad(&m).unwrap(),
                tr_ad_from_charpoly(&m.charpoly()).unwrap()
            );
        }
    }

    #[test]
    fn char2_identity_exhaustive_gl2_f4() {
        let f4 = build_extension(2, 2).unwrap();
        let mut total = 0;
        for idx in 0..256u128 {
            let m = Mat::from_rows(vec![
                vec![
                    f4.element_from_index(idx % 4),
                    f4.element_from_index((idx / 4) % 4),
                ],
                vec![
                    f4.element_from_index((idx / 16) % 4),
                    f4.element_from_index((idx / 64) % 4),
                ],
            ]);
            if m.det().is_zero() {
                continue;
            }
            total += 1;
            assert!(char2_trad_identity(&m).unwrap());
        }
        assert_eq!(total, 180);
    }

    #[test]
    fn trace_criteria_examples() {
        let f11 = FqField::prime(11);
        let ring = TruncRing::new(&f11, 2);
        // constants only: Teichmüller obstruction
        let consts: Vec<TruncElem> = (1..4).map(|i| ring.embed_const(&f11.from_u64(i))).collect();
        assert!(!trace_criterion_1(&ring, &consts));
        // a generator of k plus one element with u-depth
        let mut samples = consts.clone();
        samples.push(ring.one().add(&ring.uniformizer()));
        assert!(trace_criterion_1(&ring, &samples));
        assert!(!trace_criterion_1(&ring, &[]));

        // char-2 criterion at m = 3
        let f16 = build_extension(2, 4).unwrap();
        let r3 = TruncRing::new(&f16, 3);
        let consts: Vec<TruncElem> = (1..16)
            .map(|i| r3.embed_const(&f16.element_from_index(i)))
            .collect();
        assert!(!trace_criterion_2(&r3, &consts));
        let mut samples = consts.clone();
        // a square with nonzero u^2 part
        samples.push(
            r3.one()
                .add(&r3.from_coeffs(vec![f16.zero(), f16.zero(), f16.one()])),
        );
        assert!(trace_criterion_2(&r3, &samples));
        // non-square content (u^1 coefficient) is rejected
        let bad = vec![r3.one().add(&r3.uniformizer())];
        assert!(!trace_criterion_2(&r3, &bad));
    }

    #[test]
    fn goursat_examples() {
        let f5 = FqField::prime(5);
        // identity diagonal of SL_2(F_5)
        let gens: Vec<(Mat<Elem>, Mat<Elem>)> = sln_gens(&f5, 2)
            .into_iter()
            .map(|g| (g.clone(), g))
            .collect();
        match goursat_analyze(&f5, &f5, 2, &gens, 1_000_000).unwrap() {
            GoursatClass::Graph { .. } => {}
            other => panic!("expected graph, got {other:?}"),
        }

        // full product: pair each generator with the identity and vice versa
        let id = Mat::identity(2, &f5.zero());
        let mut gens2: Vec<(Mat<Elem>, Mat<Elem>)> = sln_gens(&f5, 2)
            .into_iter()
            .map(|g| (g, id.clone()))
            .collect();
        gens2.extend(sln_gens(&f5, 2).into_iter().map(|g| (id.clone(), g)));
        match goursat_analyze(&f5, &f5, 2, &gens2, 1_000_000).unwrap() {
            GoursatClass::Full => {}
            other => panic!("expected full, got {other:?}"),
        }

        // not surjective onto the second factor: Other
        let gens3: Vec<(Mat<Elem>, Mat<Elem>)> = sln_gens(&f5, 2)
            .into_iter()
            .map(|g| (g, id.clone()))
            .collect();
        match goursat_analyze(&f5, &f5, 2, &gens3, 1_000_000).unwrap() {
            GoursatClass::Other => {}
            other => panic!("expected other, got {other:?}"),
        }
    }

    #[test]
    fn order_formula_examples() {
        assert_eq!(group_order(2, 2, false), 6);
        assert_eq!(group_order(2, 3, false), 24);
        assert_eq!(group_order(2, 4, false), 60);
        assert_eq!(group_order(2, 5, false), 120);
        assert_eq!(group_order(2, 2, true), 6);
        assert_eq!(group_order(3, 2, true), 8 * 3 * 9); // |SU_3(2)| = 216
        assert!(field_bound_check(3, 16));
    }

    #[test]
    fn order_formula_matches_enumeration() {
        for q in [2u64, 3, 4, 5] {
            let k = build_extension(q, 1).unwrap();
            let ring = TruncRing::new(&k, 1);
            let gens: Vec<Mat<TruncElem>> = sln_gens(&k, 2)
                .iter()
                .map(|g| lift_const(&ring, g))
                .collect();
            let c = closure(&ring, 2, &gens, 10_000_000);
            assert_eq!(c.order() as u128, group_order(2, q as u128, false));
        }
    }
}
