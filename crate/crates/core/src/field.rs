//! Exact finite fields and their extension towers.
//!
//! A field is either a prime field `F_p` or a single-step extension of
//! another field by a monic irreducible polynomial. Towers of arbitrary
//! depth are supported (`F_2 -> F_4 -> F_64 -> ...`); every element carries
//! a pointer to its field descriptor and all arithmetic is exact.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::Error;

/// Descriptor of a finite field. Shared behind `Arc`; construction goes
/// through [`FqField::prime`] and [`FqField::extension`].
pub struct FqField {
    p: u64,
    base: Option<Arc<FqField>>,
    /// Monic defining polynomial over `base`, dense, constant first.
    /// Empty for prime fields.
    modulus: Vec<Elem>,
    deg_over_prime: u32,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.deg_over_prime)
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        self.p == other.p
            && self.deg_over_prime == other.deg_over_prime
            && self.base == other.base
            && self.modulus == other.modulus
    }
}
impl Eq for FqField {}

impl FqField {
    pub fn prime(p: u64) -> Arc<FqField> {
        assert!(is_prime(p), "{p} is not prime");
        assert!(p < 256, "characteristic must fit in a byte");
        Arc::new(FqField {
            p,
            base: None,
            modulus: Vec::new(),
            deg_over_prime: 1,
        })
    }

    /// Extension of `base` by a monic polynomial, given dense with constant
    /// term first. The caller is responsible for irreducibility; use
    /// `poly::extension_of` to search for a canonical defining polynomial.
    pub fn extension(base: &Arc<FqField>, modulus: Vec<Elem>) -> Arc<FqField> {
        let k = modulus.len() - 1;
        assert!(k >= 1, "extension degree must be at least 1");
        for c in &modulus {
            debug_assert!(c.field() == base);
        }
        assert!(modulus[k].is_one(), "defining polynomial must be monic");
        Arc::new(FqField {
            p: base.p,
            base: Some(base.clone()),
            modulus,
            deg_over_prime: base.deg_over_prime * k as u32,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn base(&self) -> Option<&Arc<FqField>> {
        self.base.as_ref()
    }

    /// Degree of the top extension step (1 for prime fields).
    pub fn step_degree(&self) -> usize {
        if self.modulus.is_empty() {
            1
        } else {
            self.modulus.len() - 1
        }
    }

    pub fn degree_over_prime(&self) -> u32 {
        self.deg_over_prime
    }

    /// Coefficients of the defining polynomial (empty for prime fields).
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// Field order as `u128`; panics if it does not fit.
    pub fn order(&self) -> u128 {
        (self.p as u128)
            .checked_pow(self.deg_over_prime)
            .expect("field order overflows u128")
    }

    /// Degree of `self` over `scalar`, which must occur in the tower.
    pub fn degree_over(self: &Arc<Self>, scalar: &Arc<FqField>) -> usize {
        let mut deg = 1usize;
        let mut cur = self.clone();
        loop {
            if cur == *scalar {
                return deg;
            }
            match cur.base.clone() {
                Some(b) => {
                    deg *= cur.step_degree();
                    cur = b;
                }
                None => panic!("field is not an extension of the given scalar field"),
            }
        }
    }

    /// True if `scalar` occurs in the tower under `self`.
    pub fn has_subfield(self: &Arc<Self>, scalar: &Arc<FqField>) -> bool {
        let mut cur = self.clone();
        loop {
            if cur == *scalar {
                return true;
            }
            match cur.base.clone() {
                Some(b) => cur = b,
                None => return false,
            }
        }
    }

    pub fn zero(self: &Arc<Self>) -> Elem {
        match &self.base {
            None => Elem {
                field: self.clone(),
                repr: Repr::Prime(0),
            },
            Some(b) => {
                let z = b.zero();
                Elem {
                    field: self.clone(),
                    repr: Repr::Ext(vec![z; self.step_degree()]),
                }
            }
        }
    }

    pub fn one(self: &Arc<Self>) -> Elem {
        let mut e = self.zero();
        match &mut e.repr {
            Repr::Prime(v) => *v = 1 % self.p,
            Repr::Ext(cs) => cs[0] = self.base.as_ref().unwrap().one(),
        }
        e
    }

    pub fn from_u64(self: &Arc<Self>, n: u64) -> Elem {
        match &self.base {
            None => Elem {
                field: self.clone(),
                repr: Repr::Prime(n % self.p),
            },
            Some(b) => {
                let mut e = self.zero();
                if let Repr::Ext(cs) = &mut e.repr {
                    cs[0] = b.from_u64(n);
                }
                e
            }
        }
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> Elem {
        let p = self.p as i64;
        self.from_u64(n.rem_euclid(p) as u64)
    }

    /// Generator of the top extension step (class of the adjoined variable);
    /// for prime fields this is `1`.
    pub fn gen(self: &Arc<Self>) -> Elem {
        if self.base.is_none() {
            return self.one();
        }
        self.element_from_index(self.base.as_ref().unwrap().order())
    }

    /// Deterministic enumeration of elements: index written in base `|base|`
    /// digits, least significant digit = constant coordinate.
    pub fn element_from_index(self: &Arc<Self>, idx: u128) -> Elem {
        match &self.base {
            None => {
                assert!(idx < self.p as u128);
                Elem {
                    field: self.clone(),
                    repr: Repr::Prime(idx as u64),
                }
            }
            Some(b) => {
                let bo = b.order();
                let mut rem = idx;
                let cs: Vec<Elem> = (0..self.step_degree())
                    .map(|_| {
                        let d = rem % bo;
                        rem /= bo;
                        b.element_from_index(d)
                    })
                    .collect();
                assert!(rem == 0, "element index out of range");
                Elem {
                    field: self.clone(),
                    repr: Repr::Ext(cs),
                }
            }
        }
    }

    pub fn element_index(self: &Arc<Self>, e: &Elem) -> u128 {
        debug_assert!(e.field() == self);
        match &e.repr {
            Repr::Prime(v) => *v as u128,
            Repr::Ext(cs) => {
                let b = self.base.as_ref().unwrap();
                let bo = b.order();
                cs.iter()
                    .rev()
                    .fold(0u128, |acc, c| acc * bo + b.element_index(c))
            }
        }
    }

    /// All elements, in index order. Only sensible for small fields.
    pub fn elements(self: &Arc<Self>) -> Vec<Elem> {
        (0..self.order())
            .map(|i| self.element_from_index(i))
            .collect()
    }

    /// Number of bytes in the canonical encoding of one element.
    pub fn encoded_len(&self) -> usize {
        self.deg_over_prime as usize
    }

    /// Rebuild the tower with fresh shared handles. Parallel sweeps give
    /// each worker its own copy so that reference-count traffic on the
    /// descriptors never crosses threads.
    pub fn deep_clone(self: &Arc<Self>) -> Arc<FqField> {
        match &self.base {
            None => FqField::prime(self.p),
            Some(b) => {
                let nb = b.deep_clone();
                let modulus = self.modulus.iter().map(|c| c.rebase(&nb)).collect();
                FqField::extension(&nb, modulus)
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Repr {
    Prime(u64),
    /// Dense coordinates over the base field, length = step degree.
    Ext(Vec<Elem>),
}

/// An element of a finite field, carrying its field descriptor.
#[derive(Clone)]
pub struct Elem {
    field: Arc<FqField>,
    repr: Repr,
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(
            self.field == other.field,
            "comparing elements of different fields"
        );
        self.repr == other.repr
    }
}
impl Eq for Elem {}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Prime(v) => write!(f, "{v}"),
            Repr::Ext(cs) => {
                write!(f, "[")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c:?}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl Elem {
    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Prime(v) => *v == 0,
            Repr::Ext(cs) => cs.iter().all(|c| c.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Prime(v) => *v == 1 % self.field.p,
            Repr::Ext(cs) => cs[0].is_one() && cs[1..].iter().all(|c| c.is_zero()),
        }
    }

    pub fn add(&self, rhs: &Elem) -> Elem {
        debug_assert!(self.field == rhs.field);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => Repr::Prime((a + b) % self.field.p),
            (Repr::Ext(a), Repr::Ext(b)) => {
                Repr::Ext(a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            }
            _ => unreachable!(),
        };
        Elem {
            field: self.field.clone(),
            repr,
        }
    }

    pub fn neg(&self) -> Elem {
        let repr = match &self.repr {
            Repr::Prime(a) => Repr::Prime((self.field.p - a) % self.field.p),
            Repr::Ext(cs) => Repr::Ext(cs.iter().map(|c| c.neg()).collect()),
        };
        Elem {
            field: self.field.clone(),
            repr,
        }
    }

    pub fn sub(&self, rhs: &Elem) -> Elem {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Elem) -> Elem {
        debug_assert!(self.field == rhs.field);
        match (&self.repr, &rhs.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => Elem {
                field: self.field.clone(),
                repr: Repr::Prime((a * b) % self.field.p),
            },
            (Repr::Ext(a), Repr::Ext(b)) => {
                let base = self.field.base.as_ref().unwrap();
                let prod = vec_mul(base, a, b);
                let red = vec_rem(base, prod, &self.field.modulus);
                let mut cs = red;
                cs.resize(self.field.step_degree(), base.zero());
                Elem {
                    field: self.field.clone(),
                    repr: Repr::Ext(cs),
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn scale_u64(&self, n: u64) -> Elem {
        self.mul(&self.field.from_u64(n))
    }

    pub fn inv(&self) -> Result<Elem, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.repr {
            Repr::Prime(a) => {
                // Fermat inverse; p is small.
                let p = self.field.p;
                let mut r = 1u64;
                let mut b = *a;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        r = r * b % p;
                    }
                    b = b * b % p;
                    e >>= 1;
                }
                Ok(Elem {
                    field: self.field.clone(),
                    repr: Repr::Prime(r),
                })
            }
            Repr::Ext(cs) => {
                let base = self.field.base.as_ref().unwrap();
                let inv = vec_inv_mod(base, cs, &self.field.modulus)?;
                let mut cs = inv;
                cs.resize(self.field.step_degree(), base.zero());
                Ok(Elem {
                    field: self.field.clone(),
                    repr: Repr::Ext(cs),
                })
            }
        }
    }

    pub fn pow(&self, mut e: u128) -> Elem {
        let mut r = self.field.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Frobenius `x -> x^p`.
    pub fn pth_pow(&self) -> Elem {
        self.pow(self.field.p as u128)
    }

    /// `x -> x^(p^k)`.
    pub fn frob_p(&self, k: u32) -> Elem {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.pth_pow();
        }
        x
    }

    /// Coordinates over a scalar field occurring in the tower, with respect
    /// to the product power basis (inner basis varying fastest).
    pub fn coords_over(&self, scalar: &Arc<FqField>) -> Vec<Elem> {
        if &self.field == scalar {
            return vec![self.clone()];
        }
        match &self.repr {
            Repr::Prime(_) => panic!("field is not an extension of the given scalar field"),
            Repr::Ext(cs) => cs.iter().flat_map(|c| c.coords_over(scalar)).collect(),
        }
    }

    /// Inverse of [`Elem::coords_over`].
    pub fn from_coords_over(field: &Arc<FqField>, scalar: &Arc<FqField>, coords: &[Elem]) -> Elem {
        if field == scalar {
            assert_eq!(coords.len(), 1);
            return coords[0].clone();
        }
        let base = field
            .base
            .as_ref()
            .expect("not an extension of the scalar field");
        let inner = base.degree_over(scalar);
        let step = field.step_degree();
        assert_eq!(coords.len(), inner * step);
        let cs: Vec<Elem> = (0..step)
            .map(|i| Elem::from_coords_over(base, scalar, &coords[i * inner..(i + 1) * inner]))
            .collect();
        Elem {
            field: field.clone(),
            repr: Repr::Ext(cs),
        }
    }

    /// Lift into an extension `ext` whose tower contains `self.field`,
    /// acting as the canonical inclusion.
    pub fn lift_into(&self, ext: &Arc<FqField>) -> Elem {
        if &self.field == ext {
            return self.clone();
        }
        let base = ext
            .base
            .as_ref()
            .expect("target is not an extension of the element's field");
        let lifted = self.lift_into(base);
        let mut e = ext.zero();
        if let Repr::Ext(cs) = &mut e.repr {
            cs[0] = lifted;
        }
        e
    }

    /// Project to a subfield of the tower if the element lies in it.
    pub fn try_down(&self, sub: &Arc<FqField>) -> Option<Elem> {
        if &self.field == sub {
            return Some(self.clone());
        }
        match &self.repr {
            Repr::Prime(_) => None,
            Repr::Ext(cs) => {
                if cs[1..].iter().all(|c| c.is_zero()) {
                    cs[0].try_down(sub)
                } else {
                    None
                }
            }
        }
    }

    /// The same element over a structurally equal field with fresh handles.
    pub fn rebase(&self, field: &Arc<FqField>) -> Elem {
        debug_assert!(*field == self.field);
        match &self.repr {
            Repr::Prime(v) => Elem {
                field: field.clone(),
                repr: Repr::Prime(*v),
            },
            Repr::Ext(cs) => {
                let base = field.base().expect("structurally equal tower");
                Elem {
                    field: field.clone(),
                    repr: Repr::Ext(cs.iter().map(|c| c.rebase(base)).collect()),
                }
            }
        }
    }

    /// Canonical byte encoding: prime-field coordinates, inner first.
    pub fn encode(&self, out: &mut Vec<u8>) {
        match &self.repr {
            Repr::Prime(v) => out.push(*v as u8),
            Repr::Ext(cs) => {
                for c in cs {
                    c.encode(out);
                }
            }
        }
    }

    pub fn decode(field: &Arc<FqField>, bytes: &[u8]) -> Elem {
        let mut pos = 0usize;
        let e = decode_rec(field, bytes, &mut pos);
        debug_assert_eq!(pos, bytes.len());
        e
    }
}

fn decode_rec(field: &Arc<FqField>, bytes: &[u8], pos: &mut usize) -> Elem {
    match &field.base {
        None => {
            let v = bytes[*pos] as u64;
            *pos += 1;
            Elem {
                field: field.clone(),
                repr: Repr::Prime(v),
            }
        }
        Some(b) => {
            let cs = (0..field.step_degree())
                .map(|_| decode_rec(b, bytes, pos))
                .collect();
            Elem {
                field: field.clone(),
                repr: Repr::Ext(cs),
            }
        }
    }
}

// Dense polynomial helpers over a base field, used for extension arithmetic.
// The public polynomial type lives in `poly`; these stay minimal.

fn vec_trim(v: &mut Vec<Elem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn vec_mul(base: &Arc<FqField>, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![base.zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    vec_trim(&mut out);
    out
}

fn vec_rem(_base: &Arc<FqField>, mut a: Vec<Elem>, m: &[Elem]) -> Vec<Elem> {
    let dm = m.len() - 1;
    // m is monic
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let shift = a.len() - dm;
        for (j, c) in m[..dm].iter().enumerate() {
            a[shift + j] = a[shift + j].sub(&lead.mul(c));
        }
    }
    vec_trim(&mut a);
    a
}

/// Extended Euclid inverse of `a` modulo the monic polynomial `m`.
fn vec_inv_mod(base: &Arc<FqField>, a: &[Elem], m: &[Elem]) -> Result<Vec<Elem>, Error> {
    // r0 = m, r1 = a; track s only.
    let mut r0: Vec<Elem> = m.to_vec();
    let mut r1: Vec<Elem> = a.to_vec();
    vec_trim(&mut r1);
    let mut s0: Vec<Elem> = Vec::new();
    let mut s1: Vec<Elem> = vec![base.one()];
    while !r1.is_empty() {
        // divide r0 by r1
        let mut q = vec![base.zero(); r0.len().saturating_sub(r1.len()) + 1];
        let lead_inv = r1.last().unwrap().inv()?;
        let mut r = r0.clone();
        while r.len() >= r1.len() && !r.is_empty() {
            let c = r.last().unwrap().mul(&lead_inv);
            let shift = r.len() - r1.len();
            q[shift] = c.clone();
            for (j, y) in r1.iter().enumerate() {
                r[shift + j] = r[shift + j].sub(&c.mul(y));
            }
            vec_trim(&mut r);
            if r.len() < r1.len() {
                break;
            }
        }
        vec_trim(&mut q);
        // (r0, r1) = (r1, r0 - q r1); (s0, s1) = (s1, s0 - q s1)
        let qs = vec_mul(base, &q, &s1);
        let mut s2 = s0.clone();
        s2.resize(s2.len().max(qs.len()), base.zero());
        for (i, c) in qs.iter().enumerate() {
            s2[i] = s2[i].sub(c);
        }
        vec_trim(&mut s2);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    // r0 = gcd; must be a nonzero constant since m is irreducible and a != 0.
    if r0.len() != 1 {
        return Err(Error::NonInvertible);
    }
    let c = r0[0].inv()?;
    let mut out: Vec<Elem> = s0.iter().map(|x| x.mul(&c)).collect();
    vec_trim(&mut out);
    Ok(vec_rem(base, out, m))
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Split a prime power `q = p^e`; errors if `q` is not a prime power.
pub fn prime_power_split(q: u64) -> Result<(u64, u32), Error> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut e = 0u32;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            return if m == 1 {
                Ok((p, e))
            } else {
                Err(Error::NotPrimePower(q))
            };
        }
        p += 1;
    }
    Ok((q, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f9() -> Arc<FqField> {
        crate::poly::build_extension(3, 2).unwrap()
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FqField::prime(7);
        let a = f.from_u64(3);
        let b = f.from_u64(5);
        assert_eq!(a.add(&b), f.from_u64(1));
        assert_eq!(a.mul(&b), f.from_u64(1));
        assert_eq!(a.inv().unwrap(), f.from_u64(5));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn field_axioms_randomized() {
        let f = f9();
        let l = crate::poly::extension_of(&f, 2); // F_81 over F_9
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let a = l.element_from_index(rng.gen_range(0..l.order()));
            let b = l.element_from_index(rng.gen_range(0..l.order()));
            let c = l.element_from_index(rng.gen_range(0..l.order()));
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            if !a.is_zero() {
                assert!(a.mul(&a.inv().unwrap()).is_one());
            }
            // Frobenius is additive
            assert_eq!(a.add(&b).pth_pow(), a.pth_pow().add(&b.pth_pow()));
        }
    }

    #[test]
    fn tower_coords_roundtrip() {
        let f4 = crate::poly::build_extension(2, 2).unwrap();
        let f64 = crate::poly::extension_of(&f4, 3);
        let f2 = FqField::prime(2);
        assert_eq!(f64.degree_over(&f2), 6);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = f64.element_from_index(rng.gen_range(0..f64.order()));
            let co = a.coords_over(&f2);
            assert_eq!(co.len(), 6);
            assert_eq!(Elem::from_coords_over(&f64, &f2, &co), a);
            let co4 = a.coords_over(&f4);
            assert_eq!(co4.len(), 3);
            assert_eq!(Elem::from_coords_over(&f64, &f4, &co4), a);
        }
    }

    #[test]
    fn lift_and_down() {
        let f3 = FqField::prime(3);
        let f9 = f9();
        let a = f3.from_u64(2);
        let up = a.lift_into(&f9);
        assert_eq!(up.try_down(&f3), Some(a));
        assert_eq!(f9.gen().try_down(&f3), None);
    }

    #[test]
    fn encode_roundtrip() {
        let f = f9();
        for i in 0..f.order() {
            let a = f.element_from_index(i);
            let mut buf = Vec::new();
            a.encode(&mut buf);
            assert_eq!(buf.len(), f.encoded_len());
            assert_eq!(Elem::decode(&f, &buf), a);
        }
    }

    #[test]
    fn index_roundtrip() {
        let f = f9();
        for i in 0..f.order() {
            assert_eq!(f.element_index(&f.element_from_index(i)), i);
        }
    }

    #[test]
    fn prime_power_splits() {
        assert_eq!(prime_power_split(9).unwrap(), (3, 2));
        assert_eq!(prime_power_split(32).unwrap(), (2, 5));
        assert_eq!(prime_power_split(7).unwrap(), (7, 1));
        assert!(prime_power_split(12).is_err());
        assert!(prime_power_split(1).is_err());
    }
}
