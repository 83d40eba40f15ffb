//! Dense univariate polynomials over a finite field: Euclidean arithmetic,
//! irreducibility, deterministic factorization, prime enumeration for
//! `A = F_q[T]`, and CRT reconstruction.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{prime_power_split, Elem, FqField};
use crate::ring::Ring;
use crate::Error;

/// Seed for the equal-degree splitting stream. Factorizations are canonical
/// (factors sorted) so any seed yields the same output; a fixed one keeps
/// runs bit-reproducible.
const EDF_SEED: u64 = 0;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Arc<FqField>,
    /// Dense, constant term first, trailing coefficient nonzero.
    coeffs: Vec<Elem>,
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl Poly {
    pub fn zero(field: &Arc<FqField>) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Arc<FqField>) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![field.one()],
        }
    }

    pub fn x(field: &Arc<FqField>) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![field.zero(), field.one()],
        }
    }

    pub fn constant(c: Elem) -> Poly {
        let field = c.field().clone();
        let coeffs = if c.is_zero() { Vec::new() } else { vec![c] };
        Poly { field, coeffs }
    }

    pub fn from_coeffs(field: &Arc<FqField>, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Monomial `c * x^k`.
    pub fn monomial(c: Elem, k: usize) -> Poly {
        let field = c.field().clone();
        if c.is_zero() {
            return Poly::zero(&field);
        }
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Poly { field, coeffs }
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        Poly::from_coeffs(&self.field, out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(&self.field, out)
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        Poly::from_coeffs(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn divmod(&self, rhs: &Poly) -> Result<(Poly, Poly), Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dr = rhs.deg().unwrap();
        let lead_inv = rhs.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![self.field.zero(); self.coeffs.len().saturating_sub(dr)];
        while rem.len() > dr {
            let lead = rem.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let c = lead.mul(&lead_inv);
            let shift = rem.len() - dr;
            quo[shift] = c.clone();
            for (j, b) in rhs.coeffs[..dr].iter().enumerate() {
                rem[shift + j] = rem[shift + j].sub(&c.mul(b));
            }
        }
        Ok((
            Poly::from_coeffs(&self.field, quo),
            Poly::from_coeffs(&self.field, rem),
        ))
    }

    pub fn rem(&self, rhs: &Poly) -> Poly {
        self.divmod(rhs).expect("division by zero").1
    }

    pub fn div_exact(&self, rhs: &Poly) -> Poly {
        let (q, r) = self.divmod(rhs).expect("division by zero");
        assert!(r.is_zero(), "non-exact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, u, v)` with `g = gcd` monic and `u*self + v*rhs = g`.
    pub fn ext_gcd(&self, rhs: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = self.clone();
        let mut r1 = rhs.clone();
        let mut s0 = Poly::one(&self.field);
        let mut s1 = Poly::zero(&self.field);
        let mut t0 = Poly::zero(&self.field);
        let mut t1 = Poly::one(&self.field);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).unwrap();
            r0 = r1;
            r1 = r;
            let s2 = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s2;
            let t2 = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t2;
        }
        if let Some(l) = r0.leading() {
            let li = l.inv().unwrap();
            return (r0.scale(&li), s0.scale(&li), t0.scale(&li));
        }
        (r0, s0, t0)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let out: Vec<Elem> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale_u64(i as u64))
            .collect();
        Poly::from_coeffs(&self.field, out)
    }

    /// Evaluate at a point of any extension field containing the
    /// coefficient field.
    pub fn eval(&self, x: &Elem) -> Elem {
        let mut acc = x.field().zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&c.lift_into(x.field()));
        }
        acc
    }

    /// The same polynomial over a structurally equal field with fresh
    /// handles.
    pub fn rebase(&self, field: &Arc<FqField>) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.rebase(field)).collect(),
        }
    }

    /// Lift coefficients into an extension field.
    pub fn lift_into(&self, ext: &Arc<FqField>) -> Poly {
        Poly {
            field: ext.clone(),
            coeffs: self.coeffs.iter().map(|c| c.lift_into(ext)).collect(),
        }
    }

    /// Project coefficients down to a subfield of the tower, if possible.
    pub fn try_down(&self, sub: &Arc<FqField>) -> Option<Poly> {
        let coeffs: Option<Vec<Elem>> = self.coeffs.iter().map(|c| c.try_down(sub)).collect();
        Some(Poly {
            field: sub.clone(),
            coeffs: coeffs?,
        })
    }

    pub fn pow_mod(&self, mut e: u128, modulus: &Poly) -> Poly {
        let mut r = Poly::one(&self.field);
        let mut b = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).rem(modulus);
            }
            b = b.mul(&b).rem(modulus);
            e >>= 1;
        }
        r
    }

    /// `self(arg) mod modulus` by Horner.
    pub fn compose_mod(&self, arg: &Poly, modulus: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(arg).add(&Poly::constant(c.clone())).rem(modulus);
        }
        acc
    }

    /// `x^Q mod self` where `Q` is the coefficient field order.
    fn frob_x(&self) -> Poly {
        let p = self.field.characteristic() as u128;
        let mut g = Poly::x(&self.field).rem(self);
        for _ in 0..self.field.degree_over_prime() {
            g = g.pow_mod(p, self);
        }
        g
    }

    /// Multiplicity of the monic irreducible `pi` in `self`.
    pub fn valuation_at(&self, pi: &Poly) -> usize {
        assert!(!self.is_zero(), "valuation of zero polynomial");
        let mut v = 0usize;
        let mut f = self.clone();
        loop {
            let (q, r) = f.divmod(pi).unwrap();
            if !r.is_zero() {
                return v;
            }
            v += 1;
            f = q;
        }
    }

    /// Irreducibility by an incremental distinct-degree scan: reject at the
    /// smallest factor degree, so the enumeration searches stay cheap.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.deg() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        if self.coeff(0).is_zero() {
            return false; // divisible by x
        }
        // cheap pre-filter over small fields: scan for roots
        if self.field.order() <= 64 {
            for i in 0..self.field.order() {
                if self.eval(&self.field.element_from_index(i)).is_zero() {
                    return false;
                }
            }
            if n == 2 || n == 3 {
                return true; // no roots and degree <= 3
            }
        }
        let f = self.monic();
        let x = Poly::x(&self.field).rem(&f);
        // h = x^(Q^d) mod f; a factor of degree d exists iff
        // gcd(h - x, f) is nontrivial at stage d
        let mut h = f.frob_x();
        for _d in 1..=n / 2 {
            if f.gcd(&h.sub(&x)).deg() != Some(0) {
                return false;
            }
            h = frob_once(&h, &f);
        }
        true
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, enumeration index). The product of the powers,
    /// scaled by the leading coefficient, reconstructs `self`.
    pub fn factor(&self) -> Result<Vec<(Poly, usize)>, Error> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.monic();
        let mut out: Vec<(Poly, usize)> = Vec::new();
        for (g, mult) in squarefree_decomposition(&f) {
            for h in distinct_degree_then_split(&g) {
                out.push((h, mult));
            }
        }
        out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
        Ok(out)
    }

    /// Roots (with multiplicity) in a given extension of the coefficient
    /// field. Factors of degree not dividing the extension degree contribute
    /// nothing.
    pub fn roots_in(&self, ext: &Arc<FqField>) -> Result<Vec<(Elem, usize)>, Error> {
        let lifted = self.lift_into(ext);
        let mut out = Vec::new();
        for (g, m) in lifted.factor()? {
            if g.deg() == Some(1) {
                out.push((g.coeff(0).neg(), m));
            }
        }
        Ok(out)
    }

    /// Canonical string with the given variable name; coefficients are
    /// printed as element indices.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let ci = self.field.element_index(c);
            let part = match (k, ci) {
                (0, _) => format!("{ci}"),
                (1, 1) => var.to_string(),
                (1, _) => format!("{ci}*{var}"),
                (_, 1) => format!("{var}^{k}"),
                (_, _) => format!("{ci}*{var}^{k}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }

    /// Parse the format produced by [`Poly::to_string_var`]. Also accepts
    /// `-` separators, mapping `-t` to `+(p-1)*t`-style negation.
    pub fn parse(s: &str, var: &str, field: &Arc<FqField>) -> Result<Poly, Error> {
        let s = s.trim().replace(' ', "");
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut acc = Poly::zero(field);
        let mut term = String::new();
        let mut sign_neg = false;
        let mut chars = s.chars().peekable();
        let mut pending_sign = false; // at a term boundary
        if chars.peek() == Some(&'-') {
            chars.next();
            sign_neg = true;
        } else if chars.peek() == Some(&'+') {
            chars.next();
        }
        let flush = |term: &str, neg: bool, acc: &Poly| -> Result<Poly, Error> {
            let t = parse_term(term, var, field)?;
            Ok(if neg { acc.sub(&t) } else { acc.add(&t) })
        };
        for ch in chars {
            if ch == '+' || ch == '-' {
                acc = flush(&term, sign_neg, &acc)?;
                term.clear();
                sign_neg = ch == '-';
                pending_sign = true;
            } else {
                term.push(ch);
                pending_sign = false;
            }
        }
        if pending_sign || term.is_empty() {
            return Err(Error::Parse(format!("dangling sign in '{s}'")));
        }
        acc = flush(&term, sign_neg, &acc)?;
        Ok(acc)
    }
}

fn parse_term(term: &str, var: &str, field: &Arc<FqField>) -> Result<Poly, Error> {
    let bad = || Error::Parse(format!("bad term '{term}'"));
    if term.is_empty() {
        return Err(bad());
    }
    // Forms: INT | INT*var | INT*var^K | var | var^K
    let (coeff_str, var_part) = match term.find('*') {
        Some(i) => (&term[..i], &term[i + 1..]),
        None => {
            if term.starts_with(var) {
                ("", term)
            } else {
                (term, "")
            }
        }
    };
    let coeff = if coeff_str.is_empty() {
        field.one()
    } else {
        let idx: u128 = coeff_str.parse().map_err(|_| bad())?;
        if field.base().is_none() {
            field.from_u64((idx % field.characteristic() as u128) as u64)
        } else {
            if idx >= field.order() {
                return Err(bad());
            }
            field.element_from_index(idx)
        }
    };
    let k = if var_part.is_empty() {
        0usize
    } else if var_part == var {
        1
    } else {
        let rest = var_part
            .strip_prefix(var)
            .and_then(|r| r.strip_prefix('^'))
            .ok_or_else(bad)?;
        rest.parse().map_err(|_| bad())?
    };
    Ok(Poly::monomial(coeff, k))
}

/// Counting-order comparison: by degree, then by coefficient digits from the
/// highest power down. Matches the enumeration order used for irreducible
/// search.
pub fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    match a.coeffs.len().cmp(&b.coeffs.len()) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.coeffs.iter().rev().zip(b.coeffs.iter().rev()) {
        let (ix, iy) = (a.field.element_index(x), b.field.element_index(y));
        match ix.cmp(&iy) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// Square-free decomposition in characteristic p: pairwise coprime monic
/// square-free parts with their multiplicities.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let fd = f.derivative();
    if fd.is_zero() {
        // f = g(x^p)
        let root = pth_root_poly(f);
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * f.field().characteristic() as usize));
        }
        return out;
    }
    let mut c = f.gcd(&fd);
    let mut w = f.div_exact(&c);
    let mut i = 1usize;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        c = c.div_exact(&y);
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let root = pth_root_poly(&c);
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * f.field().characteristic() as usize));
        }
    }
    out
}

fn pth_root_poly(f: &Poly) -> Poly {
    let p = f.field().characteristic() as usize;
    let d = f.field().degree_over_prime();
    let mut coeffs = Vec::new();
    for (k, c) in f.coeffs().iter().enumerate() {
        if k % p == 0 {
            coeffs.push(c.frob_p(d.saturating_sub(1)));
        } else {
            assert!(c.is_zero(), "polynomial is not a p-th power");
        }
    }
    Poly::from_coeffs(f.field(), coeffs)
}

/// Factor a monic square-free polynomial into irreducibles.
fn distinct_degree_then_split(f: &Poly) -> Vec<Poly> {
    let mut out = Vec::new();
    let mut g = f.clone();
    if g.deg() == Some(0) {
        return out;
    }
    let mut h = Poly::x(f.field()).rem(&g);
    let mut d = 0usize;
    while let Some(dg) = g.deg() {
        if dg == 0 {
            break;
        }
        d += 1;
        if 2 * d > dg {
            out.push(g.clone());
            break;
        }
        h = frob_once(&h, &g);
        let gd = g.gcd(&h.sub(&Poly::x(f.field()).rem(&g)));
        if gd.deg().is_some_and(|k| k > 0) {
            equal_degree_split(&gd, d, &mut out);
            g = g.div_exact(&gd);
            h = h.rem(&g);
        }
    }
    out
}

/// One application of `y -> y^Q mod f`.
fn frob_once(y: &Poly, f: &Poly) -> Poly {
    let p = f.field().characteristic() as u128;
    let mut g = y.rem(f);
    for _ in 0..f.field().degree_over_prime() {
        g = g.pow_mod(p, f);
    }
    g
}

/// Cantor–Zassenhaus equal-degree splitting with a fixed seeded stream.
fn equal_degree_split(f: &Poly, d: usize, out: &mut Vec<Poly>) {
    let deg = f.deg().unwrap();
    if deg == d {
        out.push(f.monic());
        return;
    }
    let field = f.field();
    let p = field.characteristic();
    let dop = field.degree_over_prime();
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    loop {
        let a = Poly::from_coeffs(
            field,
            (0..deg)
                .map(|_| field.element_from_index(rng.gen_range(0..field.order())))
                .collect(),
        );
        if a.deg().is_none() {
            continue;
        }
        let g = if p == 2 {
            // trace splitting: sum of 2^i-th powers over F_2
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..(dop as usize * d) {
                t = t.pow_mod(2, f);
                acc = acc.add(&t).rem(f);
            }
            f.gcd(&acc)
        } else {
            // norm to the degree-d subfield, then (Q-1)/2 power
            let q: u128 = (p as u128).pow(dop);
            let mut t = a.rem(f);
            let mut norm = t.clone();
            for _ in 1..d {
                t = frob_once(&t, f);
                norm = norm.mul(&t).rem(f);
            }
            let b = norm.pow_mod((q - 1) / 2, f);
            f.gcd(&b.sub(&Poly::one(field)))
        };
        if let Some(k) = g.deg() {
            if k > 0 && k < deg {
                equal_degree_split(&g, d, out);
                equal_degree_split(&f.div_exact(&g), d, out);
                return;
            }
        }
    }
}

/// The monic polynomial of degree `deg` at the given enumeration index:
/// digits of `idx` in base `|field|`, constant coordinate least significant.
pub fn monic_by_index(field: &Arc<FqField>, deg: usize, idx: u128) -> Poly {
    let q = field.order();
    let mut coeffs = Vec::with_capacity(deg + 1);
    let mut rem = idx;
    for _ in 0..deg {
        coeffs.push(field.element_from_index(rem % q));
        rem /= q;
    }
    assert!(rem == 0);
    coeffs.push(field.one());
    Poly {
        field: field.clone(),
        coeffs,
    }
}

/// First monic irreducible of the given degree in enumeration order.
/// The search is lazy; an irreducible appears after O(deg) candidates.
pub fn first_irreducible(field: &Arc<FqField>, deg: usize) -> Poly {
    assert!(deg >= 1);
    let mut idx: u128 = 0;
    loop {
        let f = monic_by_index(field, deg, idx);
        if f.is_irreducible() {
            return f;
        }
        idx += 1;
    }
}

/// Deterministic irreducible search. Small spaces use the plain
/// enumeration order; larger ones draw candidates from a fixed seeded
/// stream, because the initial counting-order segment consists of sparse
/// polynomials that are almost never irreducible. Either way the result is
/// bit-for-bit reproducible.
pub fn canonical_irreducible(field: &Arc<FqField>, deg: usize) -> Poly {
    let small = field
        .order()
        .checked_pow(deg.min(64) as u32)
        .is_some_and(|space| space <= 1 << 16);
    if small {
        return first_irreducible(field, deg);
    }
    let q = field.order();
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    loop {
        let mut coeffs: Vec<Elem> = (0..deg)
            .map(|_| field.element_from_index(rng.gen_range(0..q)))
            .collect();
        coeffs.push(field.one());
        let f = Poly {
            field: field.clone(),
            coeffs,
        };
        if f.is_irreducible() {
            return f;
        }
    }
}

/// Degree-`k` extension of `field` with the canonical defining polynomial
/// from [`canonical_irreducible`]; `k = 1` returns the field itself.
/// Results are memoized per (field, degree).
pub fn extension_of(field: &Arc<FqField>, k: usize) -> Arc<FqField> {
    if k == 1 {
        return field.clone();
    }
    use std::cell::RefCell;
    use std::collections::HashMap;
    // thread-local: cached descriptors are never shared across workers, so
    // reference counting stays core-local under parallel sweeps
    thread_local! {
        static CACHE: RefCell<HashMap<(Vec<u8>, usize), Arc<FqField>>> =
            RefCell::new(HashMap::new());
    }
    let key = (field_signature(field), k);
    if let Some(ext) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return ext;
    }
    let modulus = canonical_irreducible(field, k);
    let ext = FqField::extension(field, modulus.coeffs().to_vec());
    CACHE.with(|c| c.borrow_mut().insert(key, ext.clone()));
    ext
}

/// Structural signature of a field tower (characteristic plus the chain of
/// defining polynomials), used as a cache key.
fn field_signature(field: &Arc<FqField>) -> Vec<u8> {
    let mut out = vec![field.characteristic() as u8];
    let mut cur = field.clone();
    while let Some(base) = cur.base().cloned() {
        out.push(cur.step_degree() as u8);
        for c in cur.modulus() {
            c.encode(&mut out);
        }
        cur = base;
    }
    out
}

/// `F_{q^k}` as a degree-`k` extension of `F_q`, for a prime power `q`.
/// Deterministic: repeated calls build identical fields.
pub fn build_extension(q: u64, k: usize) -> Result<Arc<FqField>, Error> {
    if k < 1 {
        return Err(Error::Parse("extension degree must be >= 1".into()));
    }
    let (p, e) = prime_power_split(q)?;
    let prime = FqField::prime(p);
    let fq = if e == 1 {
        prime
    } else {
        extension_of(&prime, e as usize)
    };
    Ok(extension_of(&fq, k))
}

/// All monic irreducibles of degree <= `bound`, by (degree, enumeration
/// index). These are the primes of `A = F_q[T]`.
pub fn enumerate_primes(field: &Arc<FqField>, bound: usize) -> Vec<Poly> {
    let q = field.order();
    let mut out = Vec::new();
    for d in 1..=bound {
        for idx in 0..q.pow(d as u32) {
            let f = monic_by_index(field, d, idx);
            if f.is_irreducible() {
                out.push(f);
            }
        }
    }
    out
}

/// CRT for pairwise coprime moduli: the unique polynomial of degree less
/// than the product's degree with the given residues.
pub fn crt(pairs: &[(Poly, Poly)]) -> Poly {
    assert!(!pairs.is_empty());
    let mut r = pairs[0].0.rem(&pairs[0].1);
    let mut m = pairs[0].1.clone();
    for (ri, mi) in &pairs[1..] {
        let (g, u, _) = m.ext_gcd(mi);
        assert!(g.is_one(), "CRT moduli not coprime");
        // r_new = r + m * (u * (ri - r) mod mi)
        let diff = ri.sub(&r).rem(mi);
        let adj = u.mul(&diff).rem(mi);
        r = r.add(&m.mul(&adj));
        m = m.mul(mi);
        r = r.rem(&m);
    }
    r
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Poly::one(&self.field)
    }
    fn add(&self, rhs: &Self) -> Self {
        Poly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Poly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Poly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.deg() == Some(0) {
            Some(Poly::constant(self.coeffs[0].inv().ok()?))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(field: &Arc<FqField>, cs: &[i64]) -> Poly {
        Poly::from_coeffs(field, cs.iter().map(|&c| field.from_i64(c)).collect())
    }

    #[test]
    fn build_extension_examples() {
        // trivial degree-1 field
        let f2 = build_extension(2, 1).unwrap();
        assert_eq!(f2.order(), 2);
        assert!(f2.base().is_none());

        // F_9: first monic irreducible quadratic over F_3, by root search
        let f9 = build_extension(3, 2).unwrap();
        let f3 = FqField::prime(3);
        let expected = (0..9u128)
            .map(|i| monic_by_index(&f3, 2, i))
            .find(|f| (0..3).all(|a| !f.eval(&f3.from_u64(a)).is_zero()))
            .unwrap();
        assert_eq!(f9.modulus(), expected.coeffs());

        // F_64 as a degree-3 extension of F_4, same enumeration oracle
        let f64 = build_extension(4, 3).unwrap();
        assert_eq!(f64.order(), 64);
        let f4 = f64.base().unwrap().clone();
        assert_eq!(f4.order(), 4);
        let expected3 = (0..64u128)
            .map(|i| monic_by_index(&f4, 3, i))
            .find(|f| (0..4).all(|a| !f.eval(&f4.element_from_index(a)).is_zero()))
            .unwrap();
        assert_eq!(f64.modulus(), expected3.coeffs());
        assert!(build_extension(12, 2).is_err());
    }

    #[test]
    fn factor_examples() {
        let f5 = FqField::prime(5);
        // x^2 - 1 = (x-1)(x+1) = (x+4)(x+1)
        let f = poly(&f5, &[-1, 0, 1]);
        let fac = f.factor().unwrap();
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].0, poly(&f5, &[1, 1]));
        assert_eq!(fac[1].0, poly(&f5, &[4, 1]));
        assert!(fac.iter().all(|(_, m)| *m == 1));

        // x^2 + 1 irreducible over F_3
        let f3 = FqField::prime(3);
        let g = poly(&f3, &[1, 0, 1]);
        let fac = g.factor().unwrap();
        assert_eq!(fac, vec![(g.clone(), 1)]);

        // x^q - x over F_q: all monic linear factors once
        let f9 = build_extension(3, 2).unwrap();
        let mut xq = Poly::monomial(f9.one(), 9);
        xq = xq.sub(&Poly::x(&f9));
        let fac = xq.factor().unwrap();
        assert_eq!(fac.len(), 9);
        assert!(fac.iter().all(|(h, m)| h.deg() == Some(1) && *m == 1));

        assert!(Poly::zero(&f3).factor().is_err());
    }

    #[test]
    fn factor_remultiplies_randomized() {
        let f4 = build_extension(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let deg = rng.gen_range(1..9);
            let mut cs: Vec<Elem> = (0..deg)
                .map(|_| f4.element_from_index(rng.gen_range(0..4)))
                .collect();
            cs.push(f4.one());
            let f = Poly::from_coeffs(&f4, cs);
            let fac = f.factor().unwrap();
            let mut prod = Poly::one(&f4);
            for (g, m) in &fac {
                assert!(g.is_irreducible());
                for _ in 0..*m {
                    prod = prod.mul(g);
                }
            }
            assert_eq!(prod, f.monic());
        }
    }

    #[test]
    fn factor_with_p_power_multiplicities() {
        let f2 = FqField::prime(2);
        // (x+1)^4 * x^3 * (x^2+x+1)^2
        let a = poly(&f2, &[1, 1]);
        let b = Poly::x(&f2);
        let c = poly(&f2, &[1, 1, 1]);
        let mut f = Poly::one(&f2);
        for _ in 0..4 {
            f = f.mul(&a);
        }
        for _ in 0..3 {
            f = f.mul(&b);
        }
        for _ in 0..2 {
            f = f.mul(&c);
        }
        let mut fac = f.factor().unwrap();
        fac.sort_by(|x, y| cmp_poly(&x.0, &y.0));
        assert_eq!(fac, vec![(b, 3), (a, 4), (c, 2)]);
    }

    #[test]
    fn enumerate_primes_examples() {
        let f2 = FqField::prime(2);
        let ps = enumerate_primes(&f2, 2);
        assert_eq!(
            ps,
            vec![Poly::x(&f2), poly(&f2, &[1, 1]), poly(&f2, &[1, 1, 1])]
        );

        let f3 = FqField::prime(3);
        let ps = enumerate_primes(&f3, 1);
        assert_eq!(
            ps,
            vec![Poly::x(&f3), poly(&f3, &[1, 1]), poly(&f3, &[2, 1])]
        );

        // q=2, bound=3: 2 linear + 1 quadratic + 2 cubic = 5
        let ps = enumerate_primes(&f2, 3);
        assert_eq!(ps.len(), 5);
        assert_eq!(ps.iter().filter(|p| p.deg() == Some(3)).count(), 2);
    }

    #[test]
    fn ext_gcd_and_crt() {
        let f5 = FqField::prime(5);
        let m1 = poly(&f5, &[1, 1]); // x+1
        let m2 = poly(&f5, &[2, 1]); // x+2
        let m3 = poly(&f5, &[2, 0, 1]);
        let target = poly(&f5, &[3, 2, 4, 1]);
        let pairs: Vec<(Poly, Poly)> = [m1, m2, m3]
            .iter()
            .map(|m| (target.rem(m), m.clone()))
            .collect();
        assert_eq!(crt(&pairs), target);
    }

    #[test]
    fn display_parse_roundtrip() {
        let f3 = FqField::prime(3);
        let f = poly(&f3, &[2, 0, 1, 1]);
        let s = f.to_string_var("T");
        assert_eq!(s, "T^3+T^2+2");
        assert_eq!(Poly::parse(&s, "T", &f3).unwrap(), f);
        assert_eq!(Poly::parse("-T+1", "T", &f3).unwrap(), poly(&f3, &[1, -1]));
        assert!(Poly::parse("", "T", &f3).is_err());
        assert!(Poly::parse("T^", "T", &f3).is_err());
        assert_eq!(Poly::parse("0", "T", &f3).unwrap(), Poly::zero(&f3));
    }

    #[test]
    fn irreducibility_matches_bruteforce() {
        let f3 = FqField::prime(3);
        for d in 1..=4usize {
            for idx in 0..3u128.pow(d as u32) {
                let f = monic_by_index(&f3, d, idx);
                let brute = (1..d).all(|k| {
                    (0..3u128.pow(k as u32)).all(|j| !f.rem(&monic_by_index(&f3, k, j)).is_zero())
                });
                assert_eq!(f.is_irreducible(), brute, "degree {d} index {idx}");
            }
        }
    }

    #[test]
    fn valuation_at_prime() {
        let f3 = FqField::prime(3);
        let t = Poly::x(&f3);
        let f = t.mul(&t).mul(&poly(&f3, &[1, 1]));
        assert_eq!(f.valuation_at(&t), 2);
        assert_eq!(f.valuation_at(&poly(&f3, &[1, 1])), 1);
        assert_eq!(f.valuation_at(&poly(&f3, &[2, 1])), 0);
    }
}
