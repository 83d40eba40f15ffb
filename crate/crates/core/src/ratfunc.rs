//! The rational function field `F = F_q(T)` with exact valuations and a
//! squareness test. Elements are reduced fractions with monic denominator.

use std::fmt;

use crate::poly::Poly;
use crate::ring::Ring;
use crate::Error;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly, // monic, coprime to num
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num.to_string_var("T"))
        } else {
            write!(
                f,
                "({})/({})",
                self.num.to_string_var("T"),
                self.den.to_string_var("T")
            )
        }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let num = num.div_exact(&g);
        let den = den.div_exact(&g);
        let lead_inv = den.leading().unwrap().inv().unwrap();
        RatFunc {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        }
    }

    pub fn from_poly(p: &Poly) -> RatFunc {
        RatFunc {
            num: p.clone(),
            den: Poly::one(p.field()),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<RatFunc, Error> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    /// Order of vanishing at the monic irreducible `pi`.
    pub fn valuation_at(&self, pi: &Poly) -> i64 {
        if self.num.is_zero() {
            panic!("valuation of zero");
        }
        self.num.valuation_at(pi) as i64 - self.den.valuation_at(pi) as i64
    }

    /// Valuation at infinity, normalized with `v(T) = -1`.
    pub fn valuation_at_infinity(&self) -> i64 {
        if self.num.is_zero() {
            panic!("valuation of zero");
        }
        self.den.deg().unwrap() as i64 - self.num.deg().unwrap() as i64
    }

    /// Exact squareness in `F_q(T)`. In odd characteristic: all prime
    /// multiplicities even and square leading unit. In characteristic 2
    /// every constant is a square, so `num*den` must be a polynomial in
    /// `T^2` up to square factors.
    pub fn is_square(&self) -> Result<bool, Error> {
        if self.num.is_zero() {
            return Ok(true);
        }
        let field = self.num.field();
        let p = field.characteristic();
        // n/d is a square iff n*d is (multiply by d^2)
        let prod = self.num.mul(&self.den);
        if p == 2 {
            // square polynomials have only even-exponent terms (the field is
            // perfect, so coefficients are always squares)
            return Ok(prod
                .coeffs()
                .iter()
                .enumerate()
                .all(|(k, c)| k % 2 == 0 || c.is_zero()));
        }
        let lead = prod.leading().unwrap();
        let q = field.order();
        if !lead.pow((q - 1) / 2).is_one() {
            return Ok(false);
        }
        Ok(prod.factor()?.iter().all(|(_, m)| m % 2 == 0))
    }
}

impl Ring for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::from_poly(&Poly::zero(self.num.field()))
    }
    fn one_like(&self) -> Self {
        RatFunc::from_poly(&Poly::one(self.num.field()))
    }
    fn add(&self, rhs: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}
