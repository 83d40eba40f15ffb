//! Truncated equal-characteristic local rings `k[u]/(u^m)` and residue
//! rings `A/pi^i`, with the Teichmüller-based expansion carrying one into
//! the other.

use std::fmt;
use std::sync::Arc;

use crate::field::{Elem, FqField};
use crate::matrix::ByteEncode;
use crate::poly::Poly;
use crate::ring::Ring;
use crate::Error;

/// `k[u]/(u^m)`: length-`m` truncation of a complete discrete valuation
/// ring of equal characteristic with residue field `k`.
#[derive(PartialEq, Eq, Debug)]
pub struct TruncRing {
    field: Arc<FqField>,
    m: usize,
}

impl TruncRing {
    pub fn new(field: &Arc<FqField>, m: usize) -> Arc<TruncRing> {
        assert!(m >= 1);
        Arc::new(TruncRing {
            field: field.clone(),
            m,
        })
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn zero(self: &Arc<Self>) -> TruncElem {
        TruncElem {
            ring: self.clone(),
            coeffs: vec![self.field.zero(); self.m],
        }
    }

    pub fn one(self: &Arc<Self>) -> TruncElem {
        self.embed_const(&self.field.one())
    }

    /// Teichmüller (constant) embedding of the residue field.
    pub fn embed_const(self: &Arc<Self>, c: &Elem) -> TruncElem {
        let mut e = self.zero();
        e.coeffs[0] = c.clone();
        e
    }

    pub fn uniformizer(self: &Arc<Self>) -> TruncElem {
        let mut e = self.zero();
        if self.m > 1 {
            e.coeffs[1] = self.field.one();
        }
        e
    }

    pub fn from_coeffs(self: &Arc<Self>, mut coeffs: Vec<Elem>) -> TruncElem {
        coeffs.resize(self.m, self.field.zero());
        TruncElem {
            ring: self.clone(),
            coeffs,
        }
    }

    pub fn encoded_len(&self) -> usize {
        self.m * self.field.encoded_len()
    }
}

/// Element of `k[u]/(u^m)`, dense coefficients `u^0..u^{m-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncElem {
    ring: Arc<TruncRing>,
    coeffs: Vec<Elem>,
}

impl std::hash::Hash for TruncElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for TruncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl TruncElem {
    pub fn ring(&self) -> &Arc<TruncRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Elem {
        &self.coeffs[i]
    }

    pub fn residue(&self) -> Elem {
        self.coeffs[0].clone()
    }

    /// Index of the first nonzero coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn inv(&self) -> Result<TruncElem, Error> {
        if !self.is_unit() {
            return Err(Error::NonInvertible);
        }
        // series inversion to length m
        let m = self.ring.m;
        let c0inv = self.coeffs[0].inv()?;
        let mut out = vec![self.ring.field.zero(); m];
        out[0] = c0inv.clone();
        for k in 1..m {
            // coefficient k of self * out must vanish
            let mut s = self.ring.field.zero();
            for j in 0..k {
                s = s.add(&self.coeffs[k - j].mul(&out[j]));
            }
            out[k] = s.neg().mul(&c0inv);
        }
        Ok(TruncElem {
            ring: self.ring.clone(),
            coeffs: out,
        })
    }
}

impl Ring for TruncElem {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert!(self.ring == rhs.ring);
        TruncElem {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert!(self.ring == rhs.ring);
        let m = self.ring.m;
        let mut out = vec![self.ring.field.zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= m {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        TruncElem {
            ring: self.ring.clone(),
            coeffs: out,
        }
    }
    fn neg(&self) -> Self {
        TruncElem {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl ByteEncode for TruncElem {
    fn encode_into(&self, out: &mut Vec<u8>) {
        for c in &self.coeffs {
            c.encode(out);
        }
    }
}

/// Residue ring `A/pi^power` for `A = F_q[T]` and a monic irreducible `pi`.
#[derive(PartialEq, Eq, Debug)]
pub struct ResRing {
    pi: Poly,
    power: usize,
    modulus: Poly,
}

impl ResRing {
    pub fn new(pi: &Poly, power: usize) -> Arc<ResRing> {
        assert!(power >= 1);
        assert!(pi.is_monic());
        let mut modulus = Poly::one(pi.field());
        for _ in 0..power {
            modulus = modulus.mul(pi);
        }
        Arc::new(ResRing {
            pi: pi.clone(),
            power,
            modulus,
        })
    }

    pub fn pi(&self) -> &Poly {
        &self.pi
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn base_field(&self) -> &Arc<FqField> {
        self.pi.field()
    }

    pub fn reduce(self: &Arc<Self>, f: &Poly) -> ResElem {
        ResElem {
            ring: self.clone(),
            rep: f.rem(&self.modulus),
        }
    }

    pub fn zero(self: &Arc<Self>) -> ResElem {
        ResElem {
            ring: self.clone(),
            rep: Poly::zero(self.pi.field()),
        }
    }

    pub fn one(self: &Arc<Self>) -> ResElem {
        ResElem {
            ring: self.clone(),
            rep: Poly::one(self.pi.field()),
        }
    }
}

/// Element of `A/pi^i`, stored as the reduced representative in `A`.
#[derive(Clone, PartialEq, Eq)]
pub struct ResElem {
    ring: Arc<ResRing>,
    rep: Poly,
}

impl fmt::Debug for ResElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} mod {}^{}",
            self.rep.to_string_var("T"),
            self.ring.pi.to_string_var("T"),
            self.ring.power
        )
    }
}

impl ResElem {
    pub fn ring(&self) -> &Arc<ResRing> {
        &self.ring
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    /// Reduce to a lower power of the same prime.
    pub fn reduce_to(&self, target: &Arc<ResRing>) -> ResElem {
        assert_eq!(target.pi, self.ring.pi);
        assert!(target.power <= self.ring.power);
        target.reduce(&self.rep)
    }
}

impl Ring for ResElem {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert!(self.ring == rhs.ring);
        self.ring.reduce(&self.rep.add(&rhs.rep))
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert!(self.ring == rhs.ring);
        self.ring.reduce(&self.rep.sub(&rhs.rep))
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert!(self.ring == rhs.ring);
        self.ring.reduce(&self.rep.mul(&rhs.rep))
    }
    fn neg(&self) -> Self {
        self.ring.reduce(&self.rep.neg())
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        let (g, u, _) = self.rep.ext_gcd(&self.ring.modulus);
        if g.is_one() {
            Some(self.ring.reduce(&u))
        } else {
            None
        }
    }
}

/// The residue field `k_pi = A/pi` realized as an extension of the
/// coefficient field by the modulus `pi` itself.
pub fn residue_field(pi: &Poly) -> Arc<FqField> {
    if pi.deg() == Some(1) {
        return pi.field().clone();
    }
    FqField::extension(pi.field(), pi.coeffs().to_vec())
}

/// Image of `f in A` in the residue field `A/pi` (for `deg pi = 1` this is
/// evaluation at the root).
pub fn residue_of_poly(f: &Poly, pi: &Poly, kp: &Arc<FqField>) -> Elem {
    let r = f.rem(pi);
    if pi.deg() == Some(1) {
        // root of pi is -c0
        return r.eval(&pi.coeff(0).neg());
    }
    let mut coords = r.coeffs().to_vec();
    coords.resize(pi.deg().unwrap(), pi.field().zero());
    Elem::from_coords_over(kp, pi.field(), &coords)
}

/// Teichmüller digits: the canonical isomorphism `A/pi^m = k_pi[u]/(u^m)`.
/// Digit `j` is the residue of the Teichmüller component of the `pi^j` slot.
pub fn teichmuller_expand(
    f: &Poly,
    pi: &Poly,
    m: usize,
    kp: &Arc<FqField>,
    tring: &Arc<TruncRing>,
) -> TruncElem {
    assert_eq!(tring.field(), kp);
    assert_eq!(tring.len(), m);
    let ring = ResRing::new(pi, m);
    let q_res: u128 = kp.order();
    let mut cur = ring.reduce(f);
    let mut digits = Vec::with_capacity(m);
    for level in 0..m {
        // Teichmüller lift: iterate x -> x^{|k|}; Frobenius contracts the
        // non-constant part, stabilizing once |k|^j >= m.
        let mut teich = cur.clone();
        let mut reach: u128 = 1;
        while reach < (m - level) as u128 {
            let mut t = ring.one();
            let mut b = teich.clone();
            let mut e = q_res;
            while e > 0 {
                if e & 1 == 1 {
                    t = t.mul(&b);
                }
                b = b.mul(&b);
                e >>= 1;
            }
            teich = t;
            reach = reach.saturating_mul(q_res);
        }
        digits.push(residue_of_poly(teich.rep(), pi, kp));
        // next digit: (cur - teich)/pi
        let diff = cur.rep().sub(teich.rep());
        let quot = diff.div_exact(pi);
        cur = ring.reduce(&quot);
    }
    tring.from_coeffs(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqField;

    #[test]
    fn trunc_arithmetic_and_valuation() {
        let f3 = FqField::prime(3);
        let r = TruncRing::new(&f3, 3);
        let u = r.uniformizer();
        let a = r.one().add(&u); // 1 + u
        let b = a.mul(&a); // 1 + 2u + u^2
        assert_eq!(b.coeffs()[0], f3.from_u64(1));
        assert_eq!(b.coeffs()[1], f3.from_u64(2));
        assert_eq!(b.coeffs()[2], f3.from_u64(1));
        assert_eq!(u.mul(&u).mul(&u).valuation(), None);
        assert_eq!(u.mul(&u).valuation(), Some(2));
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
        assert!(u.inv().is_err());
    }

    #[test]
    fn res_ring_inverse() {
        let f3 = FqField::prime(3);
        let pi = Poly::parse("T+1", "T", &f3).unwrap();
        let ring = ResRing::new(&pi, 2);
        let t = ring.reduce(&Poly::x(&f3));
        let inv = t.try_inv().unwrap();
        assert!(t.mul(&inv) == ring.one());
        let p = ring.reduce(&pi);
        assert!(p.try_inv().is_none());
    }

    #[test]
    fn teichmuller_expansion_of_t_at_t_minus_1() {
        // T = 1 + (T - 1): at pi = T-1 (k_p = F_3), u-coefficient is 1.
        let f3 = FqField::prime(3);
        let pi = Poly::parse("T+2", "T", &f3).unwrap(); // T - 1
        let kp = residue_field(&pi);
        let tr = TruncRing::new(&kp, 2);
        let e = teichmuller_expand(&Poly::x(&f3), &pi, 2, &kp, &tr);
        assert_eq!(e.coeffs()[0], f3.from_u64(1));
        assert_eq!(e.coeffs()[1], f3.from_u64(1));
    }

    #[test]
    fn teichmuller_digits_multiplicative() {
        // the Teichmüller set is closed under multiplication: digits of a
        // constant-lift product have zero higher digits
        let f5 = FqField::prime(5);
        let pi = Poly::parse("T^2+2", "T", &f5).unwrap();
        assert!(pi.is_irreducible());
        let kp = residue_field(&pi);
        let tr = TruncRing::new(&kp, 3);
        for i in 0..25u128 {
            let a = kp.element_from_index(i);
            // build the Teichmüller lift by expanding any lift and checking
            // the round trip: expand(TeichLift(a)) = (a, 0, 0)
            let lift = {
                // lift coordinates back to a polynomial representative
                let coords = a.coords_over(&f5);
                Poly::from_coeffs(&f5, coords)
            };
            let ring = ResRing::new(&pi, 3);
            let mut t = ring.reduce(&lift);
            for _ in 0..4 {
                let mut acc = ring.one();
                for _ in 0..25 {
                    acc = acc.mul(&t);
                }
                t = acc;
            }
            let e = teichmuller_expand(t.rep(), &pi, 3, &kp, &tr);
            assert_eq!(e.coeffs()[0], a);
            assert!(e.coeffs()[1].is_zero());
            assert!(e.coeffs()[2].is_zero());
        }
    }
}
