//! The twisted polynomial ring `K{tau}` with `tau * u = u^q * tau`.
//!
//! Elements act on extensions of `K` as the F_q-linear maps
//! `x -> sum c_i x^(q^i)`. The twist `q = p^e` is carried by every element;
//! coefficients may live in a finite field or in `F_q[s]` / `F_q(s)` for
//! families.

use std::fmt;
use std::sync::Arc;

use crate::field::{Elem, FqField};
use crate::matrix::{null_space, RowSpace};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::ring::Ring;
use crate::Error;

/// Coefficient rings usable under the twist: a ring with a p-th power map.
pub trait SkewCoeff: Ring {
    fn char_p(&self) -> u64;
    /// `x -> x^p`.
    fn frob_p(&self) -> Self;
    /// `x -> x^(q^k)` for `q = p^e`.
    fn qpow(&self, e: u32, k: usize) -> Self {
        let mut x = self.clone();
        for _ in 0..(e as usize * k) {
            x = x.frob_p();
        }
        x
    }
}

impl SkewCoeff for Elem {
    fn char_p(&self) -> u64 {
        self.field().characteristic()
    }
    fn frob_p(&self) -> Self {
        self.pth_pow()
    }
}

impl SkewCoeff for Poly {
    fn char_p(&self) -> u64 {
        self.field().characteristic()
    }
    /// `(sum a_i s^i)^p = sum a_i^p s^(ip)`.
    fn frob_p(&self) -> Self {
        let p = self.field().characteristic() as usize;
        let mut coeffs = vec![self.field().zero(); self.coeffs().len().saturating_sub(1) * p + 1];
        if self.is_zero() {
            return Poly::zero(self.field());
        }
        for (i, c) in self.coeffs().iter().enumerate() {
            coeffs[i * p] = c.frob_p(1);
        }
        Poly::from_coeffs(self.field(), coeffs)
    }
}

impl SkewCoeff for RatFunc {
    fn char_p(&self) -> u64 {
        self.num().field().characteristic()
    }
    fn frob_p(&self) -> Self {
        RatFunc::new(self.num().frob_p(), self.den().frob_p())
    }
}

/// `sum c_i tau^i` with `tau u = u^q tau`, `q = p^twist_e`.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewPoly<C: SkewCoeff> {
    twist_e: u32,
    zero: C,
    coeffs: Vec<C>, // dense, tau^0 first, trailing nonzero
}

impl<C: SkewCoeff> fmt::Debug for SkewPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c:?}"),
                1 => format!("({c:?})t"),
                _ => format!("({c:?})t^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: SkewCoeff> SkewPoly<C> {
    pub fn from_coeffs(twist_e: u32, zero: C, mut coeffs: Vec<C>) -> SkewPoly<C> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SkewPoly {
            twist_e,
            zero,
            coeffs,
        }
    }

    pub fn zero_with(twist_e: u32, zero: C) -> SkewPoly<C> {
        SkewPoly {
            twist_e,
            zero,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(twist_e: u32, c: C) -> SkewPoly<C> {
        let zero = c.zero_like();
        SkewPoly::from_coeffs(twist_e, zero, vec![c])
    }

    pub fn tau_power(twist_e: u32, zero: C, k: usize) -> SkewPoly<C> {
        let mut coeffs = vec![zero.clone(); k + 1];
        coeffs[k] = zero.one_like();
        SkewPoly {
            twist_e,
            zero,
            coeffs,
        }
    }

    pub fn twist(&self) -> u32 {
        self.twist_e
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.zero.clone())
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
        self.coeffs.len() == 1 && self.coeffs[0] == self.zero.one_like()
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn constant_coeff(&self) -> C {
        self.coeff(0)
    }

    pub fn add(&self, rhs: &SkewPoly<C>) -> SkewPoly<C> {
        debug_assert_eq!(self.twist_e, rhs.twist_e);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect();
        SkewPoly::from_coeffs(self.twist_e, self.zero.clone(), coeffs)
    }

    pub fn neg(&self) -> SkewPoly<C> {
        SkewPoly {
            twist_e: self.twist_e,
            zero: self.zero.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, rhs: &SkewPoly<C>) -> SkewPoly<C> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &C) -> SkewPoly<C> {
        SkewPoly::from_coeffs(
            self.twist_e,
            self.zero.clone(),
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    /// Ring product under `tau u = u^q tau`; as maps, `a * b = a o b`.
    pub fn mul(&self, rhs: &SkewPoly<C>) -> SkewPoly<C> {
        debug_assert_eq!(self.twist_e, rhs.twist_e, "mismatched twists");
        if self.is_zero() || rhs.is_zero() {
            return SkewPoly::zero_with(self.twist_e, self.zero.clone());
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a.mul(&b.qpow(self.twist_e, i));
                out[i + j] = out[i + j].add(&t);
            }
        }
        SkewPoly::from_coeffs(self.twist_e, self.zero.clone(), out)
    }

    /// Left-multiply by `tau^k` (shift with coefficient twists).
    pub fn tau_shift(&self, k: usize) -> SkewPoly<C> {
        let mut coeffs = vec![self.zero.clone(); k];
        coeffs.extend(self.coeffs.iter().map(|c| c.qpow(self.twist_e, k)));
        SkewPoly::from_coeffs(self.twist_e, self.zero.clone(), coeffs)
    }

    /// Right division: `self = quotient * rhs + remainder` with
    /// `deg remainder < deg rhs`. Requires invertible coefficients only.
    pub fn right_divmod(&self, rhs: &SkewPoly<C>) -> Result<(SkewPoly<C>, SkewPoly<C>), Error> {
        debug_assert_eq!(self.twist_e, rhs.twist_e);
        let Some(db) = rhs.deg() else {
            return Err(Error::DivisionByZero);
        };
        let lead_b = rhs.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![self.zero.clone(); self.coeffs.len().saturating_sub(db)];
        while rem.len() > db {
            let lead = rem.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = rem.len() - db;
            let denom = lead_b.qpow(self.twist_e, shift);
            let c = lead.mul(&denom.try_inv().ok_or(Error::NonInvertible)?);
            // subtract (c tau^shift) * rhs from the remainder (top term cancels)
            for (j, b) in rhs.coeffs[..db].iter().enumerate() {
                let t = c.mul(&b.qpow(self.twist_e, shift));
                rem[shift + j] = rem[shift + j].sub(&t);
            }
            quo[shift] = c;
        }
        Ok((
            SkewPoly::from_coeffs(self.twist_e, self.zero.clone(), quo),
            SkewPoly::from_coeffs(self.twist_e, self.zero.clone(), rem),
        ))
    }
}

impl SkewPoly<Elem> {
    /// Scalar field of the twist: the tower level with `p^twist_e` elements.
    pub fn scalar_field(&self) -> Arc<FqField> {
        scalar_subfield(self.zero.field(), self.twist_e)
    }

    /// `sum c_i x^(q^i)` for `x` in an extension of the coefficient field.
    pub fn eval(&self, x: &Elem) -> Elem {
        let mut acc = x.field().zero();
        let mut xq = x.clone();
        let mut last = 0usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for _ in last..i {
                xq = xq.frob_p(self.twist_e);
            }
            last = i;
            acc = acc.add(&c.lift_into(x.field()).mul(&xq));
        }
        acc
    }

    /// F_q-basis of the kernel of the induced map on `ext`.
    pub fn kernel_basis(&self, ext: &Arc<FqField>) -> Result<Vec<Elem>, Error> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let fq = self.scalar_field();
        let dim = ext.degree_over(&fq);
        // columns of the map in the flattened basis
        let mut rows: Vec<Vec<Elem>> = vec![Vec::with_capacity(dim); dim];
        let mut basis_elem = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut coords = vec![fq.zero(); dim];
            coords[i] = fq.one();
            basis_elem.push(Elem::from_coords_over(ext, &fq, &coords));
        }
        for b in &basis_elem {
            let img = self.eval(b).coords_over(&fq);
            for (r, c) in img.into_iter().enumerate() {
                rows[r].push(c);
            }
        }
        let ns = null_space(&fq, &rows);
        Ok(ns
            .into_iter()
            .map(|v| Elem::from_coords_over(ext, &fq, &v))
            .collect())
    }

    /// Order of the map `x -> x^(q^m)` on `ker(self)`: the least `j >= 1`
    /// with `tau^(m j) = 1 (mod self)` by right division. `None` if the cap
    /// is exceeded.
    pub fn frobenius_order_on_kernel(&self, m: usize, cap: usize) -> Option<usize> {
        let one = SkewPoly::constant(self.twist_e, self.zero.one_like());
        let mut rho = one.clone();
        for j in 1..=cap {
            rho = rho
                .tau_shift(m)
                .right_divmod(self)
                .expect("nonzero modulus")
                .1;
            if rho == one {
                return Some(j);
            }
        }
        None
    }

    /// The monic skew polynomial of degree `dim span(W)` whose kernel is
    /// exactly the F_q-span of `W`, by the iterated construction
    /// `f_(j+1) = (tau - f_j(w)^(q-1)) f_j`.
    pub fn annihilator_of_subspace(
        w: &[Elem],
        twist_e: u32,
        field: &Arc<FqField>,
    ) -> Result<SkewPoly<Elem>, Error> {
        let zero = field.zero();
        let mut f = SkewPoly::constant(twist_e, field.one());
        let fq = scalar_subfield(field, twist_e);
        let q = fq.order();
        let mut span = RowSpace::new(&fq, field.degree_over(&fq));
        for v in w {
            if !span.insert(v.coords_over(&fq)) {
                // already in the span: the construction must annihilate it
                if !f.eval(v).is_zero() {
                    return Err(Error::DependentInput);
                }
                continue;
            }
            let fv = f.eval(v);
            if fv.is_zero() {
                return Err(Error::DependentInput);
            }
            let c = fv.pow(q - 1);
            let factor = SkewPoly::from_coeffs(twist_e, zero.clone(), vec![c.neg(), field.one()]);
            f = factor.mul(&f);
        }
        Ok(f)
    }
}

/// Walk the tower down to the subfield of order `p^e`.
pub fn scalar_subfield(field: &Arc<FqField>, twist_e: u32) -> Arc<FqField> {
    let mut cur = field.clone();
    loop {
        if cur.degree_over_prime() == twist_e {
            return cur;
        }
        match cur.base() {
            Some(b) if cur.degree_over_prime() > twist_e => cur = b.clone(),
            _ => panic!("tower does not contain the twist scalar field"),
        }
    }
}
