//! Drinfeld modules for `A = F_q[T]`: torsion modules, Frobenius matrices,
//! Frobenius characteristic polynomials by two independent routes (the
//! tau-motive and torsion-CRT), endomorphisms, isogenies, and
//! specialization of families over `F_q(s)` to finite base fields.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field::{Elem, FqField};
use crate::matrix::{solve, Mat, RowSpace};
use crate::newton::{newton_polygon_integral, Place};
use crate::poly::{self, Poly};
use crate::skew::SkewPoly;
use crate::trunc::{residue_field, ResElem, ResRing};
use crate::Error;
use num_rational::Ratio;

/// Default cap on the torsion-field degree over the base field.
pub const TORSION_DEGREE_CAP: usize = 64;

/// A Drinfeld `A`-module of rank `r` over a finite field `kappa`,
/// an extension of the coefficient field `F_q` of `A = F_q[T]`.
#[derive(Clone, Debug)]
pub struct DrinfeldModule {
    fq: Arc<FqField>,
    base: Arc<FqField>,
    phi_t: SkewPoly<Elem>,
    gamma: Elem,
    p0: Poly,
    rank: usize,
    /// `[kappa : F_q]`
    m: usize,
}

impl DrinfeldModule {
    pub fn new(
        fq: &Arc<FqField>,
        base: &Arc<FqField>,
        phi_t: SkewPoly<Elem>,
    ) -> Result<Self, Error> {
        if !base.has_subfield(fq) {
            return Err(Error::MismatchedFields);
        }
        if phi_t.twist() != fq.degree_over_prime() {
            return Err(Error::MismatchedFields);
        }
        let rank = match phi_t.deg() {
            Some(r) if r >= 1 => r,
            _ => {
                return Err(Error::Unsupported(
                    "phi_T must have positive tau-degree".into(),
                ))
            }
        };
        let gamma = phi_t.constant_coeff();
        let p0 = min_poly_over(&gamma, fq, base);
        let m = base.degree_over(fq);
        Ok(DrinfeldModule {
            fq: fq.clone(),
            base: base.clone(),
            phi_t,
            gamma,
            p0,
            rank,
            m,
        })
    }

    pub fn fq(&self) -> &Arc<FqField> {
        &self.fq
    }

    pub fn base(&self) -> &Arc<FqField> {
        &self.base
    }

    pub fn phi_t(&self) -> &SkewPoly<Elem> {
        &self.phi_t
    }

    pub fn gamma(&self) -> &Elem {
        &self.gamma
    }

    /// The characteristic: minimal polynomial of `gamma(T)` over `F_q`.
    pub fn p0(&self) -> &Poly {
        &self.p0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `[kappa : F_q]`.
    pub fn base_degree(&self) -> usize {
        self.m
    }

    /// A copy over freshly built field handles, for per-worker isolation.
    pub fn deep_clone(&self) -> DrinfeldModule {
        let fq = self.fq.deep_clone();
        let base = rebase_tower(&self.base, &fq);
        let coeffs: Vec<Elem> = self
            .phi_t
            .coeffs()
            .iter()
            .map(|c| c.rebase(&base))
            .collect();
        let phi_t = SkewPoly::from_coeffs(self.phi_t.twist(), base.zero(), coeffs);
        DrinfeldModule::new(&fq, &base, phi_t).expect("structure preserved")
    }

    /// The ring homomorphism `A -> K{tau}` on an arbitrary `a in A`.
    pub fn phi_of(&self, a: &Poly) -> SkewPoly<Elem> {
        debug_assert!(a.field() == &self.fq);
        let mut acc = SkewPoly::zero_with(self.phi_t.twist(), self.base.zero());
        for c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.phi_t);
            acc = acc.add(&SkewPoly::constant(
                self.phi_t.twist(),
                c.lift_into(&self.base),
            ));
        }
        acc
    }

    /// `p^level`-torsion of the module: a free `A/p^level`-basis of size
    /// `rank` inside the smallest extension containing all torsion points.
    pub fn torsion_basis(
        &self,
        pi: &Poly,
        level: usize,
        cap: usize,
    ) -> Result<TorsionBasis, Error> {
        if *pi == self.p0 {
            return Err(Error::CharacteristicPrime);
        }
        assert!(pi.is_monic() && level >= 1);
        let mut pw = Poly::one(&self.fq);
        for _ in 0..level {
            pw = pw.mul(pi);
        }
        let op = self.phi_of(&pw);
        // separable: the constant coefficient is pi(gamma)^level != 0
        debug_assert!(!op.constant_coeff().is_zero());
        let j = op
            .frobenius_order_on_kernel(self.m, cap)
            .ok_or(Error::TorsionCapExceeded(cap))?;
        let ext = poly::extension_of(&self.base, j);
        let kernel = op.kernel_basis(&ext)?;
        let d = pi.deg().unwrap();
        let s = self.rank * level * d;
        assert_eq!(kernel.len(), s, "torsion kernel has unexpected dimension");

        // choose generators whose images are k_p-independent in K/pK
        let dim_ext = ext.degree_over(&self.fq);
        let phi_pi = self.phi_of(pi);
        let mut modspan = RowSpace::new(&self.fq, dim_ext);
        for v in &kernel {
            modspan.insert(phi_pi.eval(v).coords_over(&self.fq));
        }
        let phi_tpow: Vec<SkewPoly<Elem>> = (0..d)
            .map(|k| self.phi_of(&Poly::monomial(self.fq.one(), k)))
            .collect();
        let mut gens = Vec::with_capacity(self.rank);
        for v in &kernel {
            if gens.len() == self.rank {
                break;
            }
            if modspan.contains(&v.coords_over(&self.fq)) {
                continue;
            }
            for op_t in &phi_tpow {
                modspan.insert(op_t.eval(v).coords_over(&self.fq));
            }
            gens.push(v.clone());
        }
        assert_eq!(
            gens.len(),
            self.rank,
            "failed to build a free torsion basis"
        );
        Ok(TorsionBasis {
            ext,
            gens,
            pi: pi.clone(),
            level,
        })
    }

    /// Matrix of the base-field Frobenius `x -> x^{q^m}` on the
    /// `p^level`-torsion basis, with entries in `A/p^level`. Invertible.
    pub fn frobenius_matrix_mod(
        &self,
        pi: &Poly,
        level: usize,
        cap: usize,
    ) -> Result<(Mat<ResElem>, TorsionBasis), Error> {
        let tb = self.torsion_basis(pi, level, cap)?;
        let mat = self.frobenius_matrix_on(&tb);
        Ok((mat, tb))
    }

    fn frobenius_matrix_on(&self, tb: &TorsionBasis) -> Mat<ResElem> {
        let d = tb.pi.deg().unwrap();
        let slots = tb.level * d;
        let r = self.rank;
        // columns: coords of phi_{T^j}(g_u) for u in 0..r, j in 0..slots
        let mut cols: Vec<Vec<Elem>> = Vec::with_capacity(r * slots);
        for g in &tb.gens {
            let mut cur = g.clone();
            for j in 0..slots {
                if j > 0 {
                    cur = self.phi_t.eval(&cur);
                }
                cols.push(cur.coords_over(&self.fq));
            }
        }
        let n_rows = cols[0].len();
        let rows: Vec<Vec<Elem>> = (0..n_rows)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let ring = ResRing::new(&tb.pi, tb.level);
        let frob_steps = self.fq.degree_over_prime() * self.m as u32;
        let mut mat = Mat::zero(r, &ring.zero());
        for (t, g) in tb.gens.iter().enumerate() {
            let img = g.frob_p(frob_steps);
            let x = solve(&self.fq, &rows, &img.coords_over(&self.fq))
                .expect("Frobenius image must lie in the torsion span");
            for u in 0..r {
                let coeffs = x[u * slots..(u + 1) * slots].to_vec();
                *mat.at_mut(t, u) = ring.reduce(&Poly::from_coeffs(&self.fq, coeffs));
            }
        }
        mat
    }

    /// Frobenius characteristic polynomial by the tau-motive: `kappa{tau}`
    /// as a free `kappa[T]`-module with basis `1..tau^{r-1}`, `T` acting by
    /// right multiplication by `phi_T`, Frobenius by left multiplication by
    /// `tau^m` (applied as `m` semilinear single-tau steps).
    pub fn charpoly_motive(&self) -> Result<Vec<Poly>, Error> {
        let r = self.rank;
        let e = self.phi_t.twist();
        let lead_inv = self.phi_t.leading().unwrap().inv()?;
        // coordinates of tau^r in the basis
        let mut tau_r: Vec<Poly> = Vec::with_capacity(r);
        tau_r.push(Poly::from_coeffs(
            &self.base,
            vec![self.gamma.neg().mul(&lead_inv), lead_inv.clone()],
        ));
        for j in 1..r {
            tau_r.push(Poly::constant(self.phi_t.coeff(j).neg().mul(&lead_inv)));
        }
        // one semilinear tau step on a coordinate vector
        let tau_step = |coords: &[Poly]| -> Vec<Poly> {
            let twisted: Vec<Poly> = coords.iter().map(|p| poly_coeff_qpow(p, e)).collect();
            let mut out = vec![Poly::zero(&self.base); r];
            for j in 1..r {
                out[j] = twisted[j - 1].clone();
            }
            let top = &twisted[r - 1];
            for j in 0..r {
                out[j] = out[j].add(&top.mul(&tau_r[j]));
            }
            out
        };
        // columns of the matrix of tau^m
        let mut mat_rows: Vec<Vec<Poly>> = vec![vec![Poly::zero(&self.base); r]; r];
        for t in 0..r {
            let mut coords = vec![Poly::zero(&self.base); r];
            coords[t] = Poly::one(&self.base);
            for _ in 0..self.m {
                coords = tau_step(&coords);
            }
            for (u, c) in coords.into_iter().enumerate() {
                mat_rows[u][t] = c;
            }
        }
        let mat = Mat::from_rows(mat_rows);
        let cp = mat.charpoly();
        // coefficients must descend to F_q[T]
        let mut out = Vec::with_capacity(r + 1);
        for c in &cp {
            match c.try_down(&self.fq) {
                Some(p) => out.push(p),
                None => {
                    return Err(Error::CoefficientOutsideA(format!(
                        "{}",
                        c.to_string_var("T")
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Frobenius characteristic polynomial by torsion matrices at several
    /// primes, reconstructed via CRT against the degree bounds
    /// `deg(coeff of X^{n-j}) <= j*m/n`.
    pub fn charpoly_torsion_crt(&self, cap: usize) -> Result<Vec<Poly>, Error> {
        let n = self.rank;
        let need = self.m + 1; // strict bound on every coefficient degree
        let schedule = self.torsion_schedule(need, cap)?;
        let mut residues: Vec<(Vec<ResElem>, Poly)> = Vec::new();
        for (pi, level) in &schedule {
            let (mat, _tb) = self.frobenius_matrix_mod(pi, *level, cap)?;
            let cp = mat.charpoly();
            let mut modulus = Poly::one(&self.fq);
            for _ in 0..*level {
                modulus = modulus.mul(pi);
            }
            residues.push((cp, modulus));
        }
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let pairs: Vec<(Poly, Poly)> = residues
                .iter()
                .map(|(cp, modulus)| (cp[i].rep().clone(), modulus.clone()))
                .collect();
            let c = poly::crt(&pairs);
            let bound = ((n - i) * self.m) / n;
            if c.deg().is_some_and(|d| d > bound) {
                return Err(Error::NewtonViolation(format!(
                    "coefficient of X^{i} has degree {} > bound {bound}",
                    c.deg().unwrap()
                )));
            }
            out.push(c);
        }
        out.push(Poly::one(&self.fq));
        Ok(out)
    }

    /// Deterministic prime/level schedule for the CRT: smallest torsion
    /// fields first (their degree is probed cheaply in the skew ring),
    /// one level per prime, until the modulus degree exceeds the bound.
    fn torsion_schedule(&self, need: usize, cap: usize) -> Result<Vec<(Poly, usize)>, Error> {
        let mut candidates: Vec<(usize, usize, usize, Poly)> = Vec::new(); // (cost, d, level, pi)
        for d in 1..=3usize {
            for pi in poly::enumerate_primes(&self.fq, d) {
                if pi.deg() != Some(d) || pi == self.p0 {
                    continue;
                }
                for level in 1..=3usize {
                    let mut pw = Poly::one(&self.fq);
                    for _ in 0..level {
                        pw = pw.mul(&pi);
                    }
                    let op = self.phi_of(&pw);
                    if let Some(j) = op.frobenius_order_on_kernel(self.m, cap) {
                        candidates.push((j * level * d, d, level, pi.clone()));
                    }
                }
            }
        }
        candidates.sort_by(|a, b| {
            (a.0, a.1, a.2)
                .cmp(&(b.0, b.1, b.2))
                .then_with(|| poly::cmp_poly(&a.3, &b.3))
        });
        let mut chosen: Vec<(Poly, usize)> = Vec::new();
        let mut budget = 0usize;
        for (_, d, level, pi) in candidates {
            if chosen.iter().any(|(p, _)| *p == pi) {
                continue;
            }
            budget += level * d;
            chosen.push((pi, level));
            if budget >= need {
                return Ok(chosen);
            }
        }
        Err(Error::TorsionCapExceeded(cap))
    }

    /// Both charpoly routes, compared exactly. This is the central
    /// cross-validation of the toolkit.
    pub fn charpoly_frobenius(&self) -> Result<FrobeniusData, Error> {
        self.charpoly_frobenius_named("base", TORSION_DEGREE_CAP)
    }

    pub fn charpoly_frobenius_named(
        &self,
        place: &str,
        cap: usize,
    ) -> Result<FrobeniusData, Error> {
        let motive = self.charpoly_motive()?;
        let torsion = self.charpoly_torsion_crt(cap)?;
        if motive != torsion {
            return Err(Error::CharpolyMismatch(format!(
                "motive {:?} vs torsion {:?}",
                motive
                    .iter()
                    .map(|c| c.to_string_var("T"))
                    .collect::<Vec<_>>(),
                torsion
                    .iter()
                    .map(|c| c.to_string_var("T"))
                    .collect::<Vec<_>>()
            )));
        }
        Ok(FrobeniusData {
            place: place.to_string(),
            deg_x: self.m,
            n: self.rank,
            fx: motive,
            p0: self.p0.clone(),
        })
    }

    /// F_q-basis of `{u : deg_tau(u) <= bound, u phi_T = phi_T u}`.
    pub fn endomorphisms_up_to(&self, bound: usize) -> Vec<SkewPoly<Elem>> {
        let e = self.phi_t.twist();
        let dim_base = self.base.degree_over(&self.fq);
        let n_unknowns = (bound + 1) * dim_base;
        let out_len = (bound + self.rank + 1) * dim_base;
        let mut cols: Vec<Vec<Elem>> = Vec::with_capacity(n_unknowns);
        let basis: Vec<Elem> = (0..dim_base)
            .map(|i| {
                let mut coords = vec![self.fq.zero(); dim_base];
                coords[i] = self.fq.one();
                Elem::from_coords_over(&self.base, &self.fq, &coords)
            })
            .collect();
        for i in 0..=bound {
            for b in &basis {
                // commutator coefficient at tau^{i+j}: b*c_j^{q^i} - c_j*b^{q^j}
                let mut out = vec![self.fq.zero(); out_len];
                for j in 0..=self.rank {
                    let cj = self.phi_t.coeff(j);
                    if cj.is_zero() {
                        continue;
                    }
                    let lhs = b.mul(&cj.frob_p(e * i as u32));
                    let rhs = cj.mul(&b.frob_p(e * j as u32));
                    let val = lhs.sub(&rhs);
                    let coords = val.coords_over(&self.fq);
                    let off = (i + j) * dim_base;
                    for (k, c) in coords.into_iter().enumerate() {
                        out[off + k] = out[off + k].add(&c);
                    }
                }
                cols.push(out);
            }
        }
        let rows: Vec<Vec<Elem>> = (0..out_len)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let ns = crate::matrix::null_space(&self.fq, &rows);
        ns.into_iter()
            .map(|v| {
                let coeffs: Vec<Elem> = (0..=bound)
                    .map(|i| {
                        let coords = &v[i * dim_base..(i + 1) * dim_base];
                        Elem::from_coords_over(&self.base, &self.fq, coords)
                    })
                    .collect();
                SkewPoly::from_coeffs(e, self.base.zero(), coeffs)
            })
            .collect()
    }

    /// For rank 1: the unique `a' in A` with `phi_{a'} = tau^m`, which
    /// generates a positive power of the characteristic prime.
    pub fn frobenius_as_element(&self) -> Result<Poly, Error> {
        if self.rank != 1 {
            return Err(Error::Unsupported(
                "frobenius_as_element requires rank 1".into(),
            ));
        }
        let e = self.phi_t.twist();
        let dim_base = self.base.degree_over(&self.fq);
        let slots = self.m + 1;
        let out_len = slots * dim_base;
        // phi_{T^k} columns for k = 0..m, unknowns a_k in F_q
        let mut cols = Vec::with_capacity(slots);
        for k in 0..slots {
            let op = self.phi_of(&Poly::monomial(self.fq.one(), k));
            let mut out = vec![self.fq.zero(); out_len];
            for (j, c) in op.coeffs().iter().enumerate() {
                for (t, x) in c.coords_over(&self.fq).into_iter().enumerate() {
                    out[j * dim_base + t] = x;
                }
            }
            cols.push(out);
        }
        let target = SkewPoly::tau_power(e, self.base.zero(), self.m);
        let mut rhs = vec![self.fq.zero(); out_len];
        for (j, c) in target.coeffs().iter().enumerate() {
            for (t, x) in c.coords_over(&self.fq).into_iter().enumerate() {
                rhs[j * dim_base + t] = x;
            }
        }
        let rows: Vec<Vec<Elem>> = (0..out_len)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let sol = solve(&self.fq, &rows, &rhs)
            .ok_or_else(|| Error::NoSolution("tau^m is not in phi(A)".into()))?;
        let a = Poly::from_coeffs(&self.fq, sol);
        // verify (a') = p0^j with j*deg(p0) = m
        let fac = a.factor()?;
        let ok =
            fac.len() == 1 && fac[0].0 == self.p0 && fac[0].1 * self.p0.deg().unwrap() == self.m;
        if !ok {
            return Err(Error::NoSolution(format!(
                "phi_{{a'}} = tau^m solved but (a') is not the expected p0-power: a' = {}",
                a.to_string_var("T")
            )));
        }
        Ok(a)
    }

    /// Separable-kernel isogeny from an endomorphism: `H` is the
    /// `A[s]`-module generated by `ker phi_a`, `f` its annihilator, and
    /// `phi'` the target module with `f phi_T = phi'_T f`.
    pub fn isogeny_from_endomorphism(
        &self,
        s: &SkewPoly<Elem>,
        a: &Poly,
        cap: usize,
    ) -> Result<(SkewPoly<Elem>, DrinfeldModule), Error> {
        if s.mul(&self.phi_t) != self.phi_t.mul(s) {
            return Err(Error::Unsupported("s does not commute with phi_T".into()));
        }
        if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let phi_a = self.phi_of(a);
        if phi_a.constant_coeff().is_zero() {
            return Err(Error::InseparableKernel);
        }
        let j = phi_a
            .frobenius_order_on_kernel(self.m, cap)
            .ok_or(Error::TorsionCapExceeded(cap))?;
        let ext = poly::extension_of(&self.base, j);
        let kernel = phi_a.kernel_basis(&ext)?;
        // close under s and phi_T
        let dim_ext = ext.degree_over(&self.fq);
        let mut span = RowSpace::new(&self.fq, dim_ext);
        let mut reps: Vec<Elem> = Vec::new();
        let mut queue: Vec<Elem> = kernel;
        while let Some(v) = queue.pop() {
            if !span.insert(v.coords_over(&self.fq)) {
                continue;
            }
            queue.push(self.phi_t.eval(&v));
            if !s.is_zero() {
                queue.push(eval_lifted(s, &v));
            }
            reps.push(v);
        }
        let f = SkewPoly::annihilator_of_subspace(&reps, self.phi_t.twist(), &ext)?;
        let lhs = f.mul(&self.phi_t_lifted(&ext));
        let (phi_t_new, rem) = lhs.right_divmod(&f)?;
        if !rem.is_zero() {
            return Err(Error::NonExactDivision);
        }
        let target = DrinfeldModule::new(&self.fq, &ext, phi_t_new)?;
        // sanity: the isogeny relation carries to other elements of A
        for k in [1usize, 2] {
            let t_k = Poly::monomial(self.fq.one(), k);
            let l = f.mul(&lift_skew(&self.phi_of(&t_k), &ext));
            let r = target.phi_of(&t_k).mul(&f);
            debug_assert!(l == r);
        }
        Ok((f, target))
    }

    fn phi_t_lifted(&self, ext: &Arc<FqField>) -> SkewPoly<Elem> {
        lift_skew(&self.phi_t, ext)
    }

    /// Canonical text form of the base field and module, used in reports.
    pub fn describe(&self) -> String {
        format!(
            "rank {} over F_{}^{} (q={})",
            self.rank,
            self.base.characteristic(),
            self.base.degree_over_prime(),
            self.fq.order()
        )
    }
}

fn eval_lifted(s: &SkewPoly<Elem>, x: &Elem) -> Elem {
    lift_skew(s, x.field()).eval(x)
}

fn lift_skew(s: &SkewPoly<Elem>, ext: &Arc<FqField>) -> SkewPoly<Elem> {
    SkewPoly::from_coeffs(
        s.twist(),
        ext.zero(),
        s.coeffs().iter().map(|c| c.lift_into(ext)).collect(),
    )
}

/// Rebuild the steps of `tower` above the already-rebuilt base `fq`.
fn rebase_tower(tower: &Arc<FqField>, fq: &Arc<FqField>) -> Arc<FqField> {
    if **tower == **fq {
        return fq.clone();
    }
    let base = rebase_tower(tower.base().expect("fq occurs in the tower"), fq);
    let modulus: Vec<Elem> = tower.modulus().iter().map(|c| c.rebase(&base)).collect();
    FqField::extension(&base, modulus)
}

/// Coefficient-wise `q`-power Frobenius on a polynomial over an extension
/// (the polynomial variable is fixed).
fn poly_coeff_qpow(p: &Poly, e: u32) -> Poly {
    Poly::from_coeffs(p.field(), p.coeffs().iter().map(|c| c.frob_p(e)).collect())
}

/// Minimal polynomial of an element of a tower over the scalar field.
pub fn min_poly_over(x: &Elem, scalar: &Arc<FqField>, field: &Arc<FqField>) -> Poly {
    let dim = field.degree_over(scalar);
    let mut span = RowSpace::new(scalar, dim);
    let mut powers: Vec<Vec<Elem>> = Vec::new();
    let mut cur = field.one();
    for k in 0..=dim {
        let coords = cur.coords_over(scalar);
        powers.push(coords.clone());
        if !span.insert(coords) {
            // x^k in the span of lower powers: solve for the dependency
            let rows: Vec<Vec<Elem>> = (0..dim)
                .map(|i| (0..k).map(|j| powers[j][i].clone()).collect())
                .collect();
            let sol = solve(scalar, &rows, &powers[k]).expect("dependency must be solvable");
            let mut coeffs = sol;
            coeffs.iter_mut().for_each(|c| *c = c.neg());
            coeffs.push(scalar.one());
            return Poly::from_coeffs(scalar, coeffs);
        }
        cur = cur.mul(x);
        let _ = k;
    }
    unreachable!("minimal polynomial search exceeded the tower degree");
}

/// A torsion basis: free `A/p^level`-module generators inside `ext`.
#[derive(Clone, Debug)]
pub struct TorsionBasis {
    pub ext: Arc<FqField>,
    pub gens: Vec<Elem>,
    pub pi: Poly,
    pub level: usize,
}

/// A place (specialization point) together with its Frobenius
/// characteristic polynomial `f_x in A[X]`, constant coefficient first.
#[derive(Clone, Debug)]
pub struct FrobeniusData {
    pub place: String,
    /// `[kappa_x : F_q]`
    pub deg_x: usize,
    pub n: usize,
    pub fx: Vec<Poly>,
    pub p0: Poly,
}

impl FrobeniusData {
    pub fn fx_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.fx.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string_var("T");
            let part = match i {
                0 => format!("({cs})"),
                1 => {
                    if c.is_one() {
                        "X".into()
                    } else {
                        format!("({cs})*X")
                    }
                }
                _ => {
                    if c.is_one() {
                        format!("X^{i}")
                    } else {
                        format!("({cs})*X^{i}")
                    }
                }
            };
            parts.push(part);
        }
        parts.join("+")
    }

    /// Evaluate `f_x` at a matrix over `A/p^i` (Horner). Used to confirm
    /// Cayley–Hamilton against torsion Frobenius matrices.
    pub fn eval_at_matrix(&self, mat: &Mat<ResElem>) -> Mat<ResElem> {
        let ring = mat.sample().ring().clone();
        let n = mat.n();
        let mut acc = Mat::zero(n, mat.sample());
        for c in self.fx.iter().rev() {
            acc = acc.mul(mat);
            let c_red = ring.reduce(c);
            acc = acc.add(&Mat::identity(n, mat.sample()).scale(&c_red));
        }
        acc
    }
}

/// Report of the Weil-style valuation constraints on a Frobenius charpoly
/// (all slopes zero away from `p0` and infinity; one slope at infinity;
/// height `n_x` at `p0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonReport {
    pub n_x: usize,
}

/// Check parts (a),(b),(c) of the eigenvalue valuation constraints for
/// `d = 1` and return `n_x`.
pub fn newton_check(fd: &FrobeniusData) -> Result<NewtonReport, Error> {
    let n = fd.n;
    let m = fd.deg_x as i64;
    let fq = fd.p0.field();
    // (a) away from p0 and infinity: all slopes 0, i.e. f_x(0) is a
    // p0-power times a unit
    let b = &fd.fx[0];
    if b.is_zero() {
        return Err(Error::NewtonViolation("constant term vanishes".into()));
    }
    for (g, _) in b.factor()? {
        if g.deg() == Some(0) {
            continue;
        }
        if g != fd.p0 {
            return Err(Error::NewtonViolation(format!(
                "constant term divisible by {} != p0",
                g.to_string_var("T")
            )));
        }
    }
    // (b) at infinity: single slope m/n of length n
    let np_inf = newton_polygon_integral(&fd.fx, &Place::Infinity)?;
    if np_inf != vec![(Ratio::new(m, n as i64), n)] {
        return Err(Error::NewtonViolation(format!(
            "slope profile at infinity is {np_inf:?}, expected single slope {m}/{n}"
        )));
    }
    // (c) at p0: n_x roots of valuation m/(n_x deg p0), rest of valuation 0
    let d0 = fd.p0.deg().unwrap() as i64;
    let np0 = newton_polygon_integral(&fd.fx, &Place::Finite(fd.p0.clone()))?;
    let _ = fq;
    let check = |n_x: usize| -> bool {
        let neg = (Ratio::new(-m, n_x as i64 * d0), n_x);
        if n_x == n {
            np0 == vec![neg]
        } else {
            np0 == vec![neg, (Ratio::new(0, 1), n - n_x)]
        }
    };
    for n_x in 1..=n {
        if check(n_x) {
            return Ok(NewtonReport { n_x });
        }
    }
    Err(Error::NewtonViolation(format!(
        "slope profile at p0 is {np0:?}"
    )))
}

/// A family of Drinfeld modules over `F_q(s)` with integral coefficients
/// (elements of `F_q[s]`).
#[derive(Clone, Debug)]
pub struct DrinfeldFamily {
    fq: Arc<FqField>,
    phi_t: SkewPoly<Poly>,
    name: String,
}

/// Outcome of specializing a family at a place of the `s`-line.
#[derive(Clone, Debug)]
pub enum SpecializeOutcome {
    Good(DrinfeldModule),
    /// The leading coefficient vanishes at the place.
    BadReduction,
}

impl DrinfeldFamily {
    pub fn new(fq: &Arc<FqField>, phi_t: SkewPoly<Poly>, name: &str) -> Result<Self, Error> {
        if phi_t.deg().is_none() || phi_t.deg() == Some(0) {
            return Err(Error::Unsupported(
                "phi_T must have positive tau-degree".into(),
            ));
        }
        if phi_t.twist() != fq.degree_over_prime() {
            return Err(Error::MismatchedFields);
        }
        Ok(DrinfeldFamily {
            fq: fq.clone(),
            phi_t: phi_t.clone(),
            name: name.to_string(),
        })
    }

    pub fn fq(&self) -> &Arc<FqField> {
        &self.fq
    }

    pub fn phi_t(&self) -> &SkewPoly<Poly> {
        &self.phi_t
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.phi_t.deg().unwrap()
    }

    /// Constant coefficient `gamma(T) in F_q[s]`.
    pub fn gamma(&self) -> Poly {
        self.phi_t.constant_coeff()
    }

    /// The family has special characteristic iff `gamma` is constant in
    /// `s`; then `p0` is its minimal polynomial `T - gamma`.
    pub fn p0(&self) -> Result<Poly, Error> {
        let g = self.gamma();
        if !g.is_constant() {
            return Err(Error::Unsupported(
                "family has generic characteristic (gamma depends on s)".into(),
            ));
        }
        let c = g.coeff(0);
        Ok(Poly::from_coeffs(&self.fq, vec![c.neg(), self.fq.one()]))
    }

    /// A copy over freshly built field handles, for per-worker isolation.
    pub fn deep_clone(&self) -> DrinfeldFamily {
        let fq = self.fq.deep_clone();
        let coeffs: Vec<Poly> = self.phi_t.coeffs().iter().map(|c| c.rebase(&fq)).collect();
        let phi_t = SkewPoly::from_coeffs(self.phi_t.twist(), Poly::zero(&fq), coeffs);
        DrinfeldFamily {
            fq,
            phi_t,
            name: self.name.clone(),
        }
    }

    /// Isotrivial iff every coefficient of `phi_T` is constant in `s`.
    pub fn is_isotrivial(&self) -> bool {
        self.phi_t.coeffs().iter().all(|c| c.is_constant())
    }

    /// Specialize at the place of the `s`-line given by a monic irreducible
    /// `h(s)`: the residue field is `F_q[s]/(h)` and `s` maps to the class
    /// of `s`. Good reduction iff the leading coefficient survives.
    pub fn specialize(&self, h: &Poly) -> Result<SpecializeOutcome, Error> {
        assert!(h.is_monic());
        let kx = residue_field(h);
        let coeffs: Vec<Elem> = self
            .phi_t
            .coeffs()
            .iter()
            .map(|c| crate::trunc::residue_of_poly(c, h, &kx))
            .collect();
        if coeffs.last().unwrap().is_zero() {
            return Ok(SpecializeOutcome::BadReduction);
        }
        let phi_t = SkewPoly::from_coeffs(self.phi_t.twist(), kx.zero(), coeffs);
        let module = DrinfeldModule::new(&self.fq, &kx, phi_t)?;
        Ok(SpecializeOutcome::Good(module))
    }
}

/// On-disk module definition. Coefficient strings are sparse polynomials in
/// `s`, constant first in the `phiT` list; over a finite base, `s` denotes
/// the power-basis generator of `F_{q^m}` over `F_q` and digits index the
/// `F_q` element enumeration.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpecFile {
    pub q: u64,
    pub base: String,
    pub m_or_var: MOrVar,
    pub rank: usize,
    #[serde(rename = "phiT")]
    pub phi_t: Vec<String>,
    pub name: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum MOrVar {
    Degree(usize),
    Var(String),
}

/// A parsed module definition.
#[derive(Clone, Debug)]
pub enum ModuleInput {
    Finite(DrinfeldModule),
    Family(DrinfeldFamily),
}

impl ModuleSpecFile {
    pub fn parse_json(text: &str) -> Result<ModuleSpecFile, Error> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialization cannot fail")
    }

    pub fn build(&self) -> Result<ModuleInput, Error> {
        let fq = poly::build_extension(self.q, 1)?;
        if self.phi_t.len() != self.rank + 1 {
            return Err(Error::Parse(format!(
                "phiT must list rank+1 = {} coefficients",
                self.rank + 1
            )));
        }
        match self.base.as_str() {
            "rational" => {
                let coeffs: Result<Vec<Poly>, Error> = self
                    .phi_t
                    .iter()
                    .map(|s| Poly::parse(s, self.var_name(), &fq))
                    .collect();
                let phi_t = SkewPoly::from_coeffs(fq.degree_over_prime(), Poly::zero(&fq), coeffs?);
                if phi_t.deg() != Some(self.rank) {
                    return Err(Error::Parse("leading coefficient of phiT vanishes".into()));
                }
                Ok(ModuleInput::Family(DrinfeldFamily::new(
                    &fq, phi_t, &self.name,
                )?))
            }
            "finite" => {
                let m = match &self.m_or_var {
                    MOrVar::Degree(m) => *m,
                    MOrVar::Var(_) => {
                        return Err(Error::Parse("finite base needs integer m_or_var".into()))
                    }
                };
                let kappa = poly::extension_of(&fq, m);
                let gen = kappa.gen();
                let coeffs: Result<Vec<Elem>, Error> = self
                    .phi_t
                    .iter()
                    .map(|s| Ok(Poly::parse(s, "s", &fq)?.eval(&gen)))
                    .collect();
                let phi_t = SkewPoly::from_coeffs(fq.degree_over_prime(), kappa.zero(), coeffs?);
                if phi_t.deg() != Some(self.rank) {
                    return Err(Error::Parse("leading coefficient of phiT vanishes".into()));
                }
                Ok(ModuleInput::Finite(DrinfeldModule::new(
                    &fq, &kappa, phi_t,
                )?))
            }
            other => Err(Error::Parse(format!("unknown base kind '{other}'"))),
        }
    }

    fn var_name(&self) -> &str {
        match &self.m_or_var {
            MOrVar::Var(v) => v.as_str(),
            MOrVar::Degree(_) => "s",
        }
    }

    /// Canonical re-serialization of a parsed module, for round-trip tests.
    pub fn from_family(fam: &DrinfeldFamily) -> ModuleSpecFile {
        ModuleSpecFile {
            q: fam.fq.order() as u64,
            base: "rational".into(),
            m_or_var: MOrVar::Var("s".into()),
            rank: fam.rank(),
            phi_t: fam
                .phi_t
                .coeffs()
                .iter()
                .map(|c| c.to_string_var("s"))
                .collect(),
            name: fam.name.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::build_extension;
    use crate::ring::Ring;

    fn carlitz(q: u64, m: usize) -> DrinfeldModule {
        // phi_T = gamma + tau with gamma = 0 is not a Drinfeld module of
        // characteristic (T-gamma) unless gamma = 0 means p0 = T; use
        // phi_T = tau to match the rank-1 examples.
        let fq = build_extension(q, 1).unwrap();
        let kappa = poly::extension_of(&fq, m);
        let phi_t = SkewPoly::from_coeffs(
            fq.degree_over_prime(),
            kappa.zero(),
            vec![kappa.zero(), kappa.one()],
        );
        DrinfeldModule::new(&fq, &kappa, phi_t).unwrap()
    }

    fn rank2_family_f3() -> DrinfeldFamily {
        // phi_T = s*tau + tau^2 over F_3
        let f3 = build_extension(3, 1).unwrap();
        let phi_t = SkewPoly::from_coeffs(
            1,
            Poly::zero(&f3),
            vec![Poly::zero(&f3), Poly::x(&f3), Poly::one(&f3)],
        );
        DrinfeldFamily::new(&f3, phi_t, "ref-rank2-f3").unwrap()
    }

    #[test]
    fn phi_of_examples() {
        let m = carlitz(2, 2); // phi_T = tau over F_4, q = 2
        let t = Poly::x(m.fq());
        assert_eq!(m.phi_of(&t), *m.phi_t());
        // constants map to constants
        let lam = Poly::constant(m.fq().one());
        assert!(m.phi_of(&lam).is_one());
        // T^2 -> tau^2
        let t2 = t.mul(&t);
        assert_eq!(m.phi_of(&t2), SkewPoly::tau_power(1, m.base().zero(), 2));
        assert_eq!(m.p0(), &Poly::x(m.fq()));
    }

    #[test]
    fn phi_of_is_ring_homomorphism() {
        let fq = build_extension(3, 1).unwrap();
        let kappa = poly::extension_of(&fq, 2);
        let phi_t =
            SkewPoly::from_coeffs(1, kappa.zero(), vec![kappa.one(), kappa.gen(), kappa.one()]);
        let m = DrinfeldModule::new(&fq, &kappa, phi_t).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let a = Poly::from_coeffs(
                &fq,
                (0..3).map(|_| fq.from_u64(rng.gen_range(0..3))).collect(),
            );
            let b = Poly::from_coeffs(
                &fq,
                (0..3).map(|_| fq.from_u64(rng.gen_range(0..3))).collect(),
            );
            assert_eq!(m.phi_of(&a.mul(&b)), m.phi_of(&a).mul(&m.phi_of(&b)));
            assert_eq!(m.phi_of(&a.add(&b)), m.phi_of(&a).add(&m.phi_of(&b)));
        }
    }

    #[test]
    fn torsion_rank1_example() {
        // phi_T = tau over F_2, p = (T+1): phi_{T+1} = tau + 1, kernel F_2
        let m = carlitz(2, 1);
        let pi = Poly::parse("T+1", "T", m.fq()).unwrap();
        let tb = m.torsion_basis(&pi, 1, 64).unwrap();
        assert_eq!(tb.gens.len(), 1);
        assert_eq!(tb.ext.order(), 2);
    }

    #[test]
    fn torsion_rank2_and_level_consistency() {
        let fam = rank2_family_f3();
        let h = Poly::parse("s+2", "s", fam.fq()).unwrap();
        let SpecializeOutcome::Good(m) = fam.specialize(&h).unwrap() else {
            panic!("good reduction expected")
        };
        let pi = Poly::parse("T+1", "T", m.fq()).unwrap();
        let tb = m.torsion_basis(&pi, 1, 64).unwrap();
        assert_eq!(tb.gens.len(), 2);

        // p^2 torsion: multiplying the basis by pi lands in the p-torsion
        let tb2 = m.torsion_basis(&pi, 2, 64).unwrap();
        let phi_pi = m.phi_of(&pi);
        let op = lift_skew(&phi_pi, &tb2.ext);
        for g in &tb2.gens {
            let w = op.eval(g);
            // w is killed by phi_pi
            assert!(op.eval(&w).is_zero());
        }
    }

    #[test]
    fn frobenius_matrix_rank1_is_t_power() {
        // phi_T = tau over F_{2^m}: Frobenius acts on p-torsion as T^m
        for m in 1..=4usize {
            let md = carlitz(2, m);
            let pi = Poly::parse("T+1", "T", md.fq()).unwrap();
            let (mat, _) = md.frobenius_matrix_mod(&pi, 2, 64).unwrap();
            let ring = mat.sample().ring().clone();
            let tm = Poly::monomial(md.fq().one(), m);
            assert_eq!(mat.at(0, 0), &ring.reduce(&tm));
            assert!(mat.det().try_inv().is_some());
        }
    }

    #[test]
    fn charpoly_rank1_motive_vs_operator_identity() {
        for (q, m) in [(2u64, 1usize), (2, 3), (3, 2), (5, 2)] {
            let md = carlitz(q, m);
            let fd = md.charpoly_frobenius().unwrap();
            // f_x(X) = X - T^m
            assert_eq!(fd.fx.len(), 2);
            assert!(fd.fx[1].is_one());
            let tm = Poly::monomial(md.fq().one(), m);
            assert_eq!(fd.fx[0], tm.neg());
        }
    }

    #[test]
    fn charpoly_rank2_family_and_newton() {
        let fam = rank2_family_f3();
        // at s = 0 the fiber is supersingular (a_x = 0, n_x = 2); the other
        // degree-1 places are ordinary with n_x = 1
        for (h, expected_nx) in [("s", 2), ("s+1", 1), ("s+2", 1)] {
            let h = Poly::parse(h, "s", fam.fq()).unwrap();
            let SpecializeOutcome::Good(md) = fam.specialize(&h).unwrap() else {
                panic!()
            };
            let fd = md.charpoly_frobenius().unwrap();
            // f_x = X^2 - a X + b with b = mu*T (valuation 1 at T, slopes -1/2 at infinity)
            let b = &fd.fx[0];
            assert_eq!(b.deg(), Some(1));
            assert_eq!(b.valuation_at(&Poly::x(md.fq())), 1);
            let rep = newton_check(&fd).unwrap();
            assert_eq!(rep.n_x, expected_nx);
        }
    }

    #[test]
    fn charpoly_cayley_hamilton_mod_three_primes() {
        let fam = rank2_family_f3();
        let h = Poly::parse("s+1", "s", fam.fq()).unwrap();
        let SpecializeOutcome::Good(md) = fam.specialize(&h).unwrap() else {
            panic!()
        };
        let fd = md.charpoly_frobenius().unwrap();
        for pi_s in ["T+1", "T+2", "T^2+1"] {
            let pi = Poly::parse(pi_s, "T", md.fq()).unwrap();
            let (mat, _) = md.frobenius_matrix_mod(&pi, 1, 64).unwrap();
            let z = fd.eval_at_matrix(&mat);
            assert!(
                z.entries().iter().all(|e| e.is_zero()),
                "f_x(Frob) != 0 mod {pi_s}"
            );
        }
    }

    #[test]
    fn frobenius_matrix_level_congruence() {
        let fam = rank2_family_f3();
        let h = Poly::parse("s+1", "s", fam.fq()).unwrap();
        let SpecializeOutcome::Good(md) = fam.specialize(&h).unwrap() else {
            panic!()
        };
        let pi = Poly::parse("T+1", "T", md.fq()).unwrap();
        let (m2, _) = md.frobenius_matrix_mod(&pi, 2, 64).unwrap();
        let (m1, _) = md.frobenius_matrix_mod(&pi, 1, 64).unwrap();
        // charpolys agree mod pi
        let ring1 = m1.sample().ring().clone();
        let cp2: Vec<ResElem> = m2.charpoly().iter().map(|c| c.reduce_to(&ring1)).collect();
        let cp1 = m1.charpoly();
        assert_eq!(cp2, cp1);
    }

    #[test]
    fn newton_check_rank1() {
        let md = carlitz(3, 3);
        let fd = md.charpoly_frobenius().unwrap();
        let rep = newton_check(&fd).unwrap();
        assert_eq!(rep.n_x, 1);
    }

    #[test]
    fn endomorphisms_examples() {
        let md = carlitz(2, 2);
        // tau^m is an endomorphism (Frobenius), so dimension at D = m
        // exceeds the A-multiples alone
        let endos = md.endomorphisms_up_to(2);
        let tau2 = SkewPoly::tau_power(1, md.base().zero(), 2);
        // tau^2 must lie in the span: check via coords
        let fq = md.fq().clone();
        let dim = md.base().degree_over(&fq);
        let flat = |s: &SkewPoly<Elem>| -> Vec<Elem> {
            let mut v = Vec::new();
            for i in 0..=2 {
                v.extend(s.coeff(i).coords_over(&fq));
            }
            v
        };
        let mut span = RowSpace::new(&fq, 3 * dim);
        for e in &endos {
            span.insert(flat(e));
        }
        assert!(span.contains(&flat(&tau2)));

        // phi_T = tau over F_q, D = 0: constants F_q only
        let md1 = carlitz(3, 1);
        let endos0 = md1.endomorphisms_up_to(0);
        assert_eq!(endos0.len(), 1);

        // dimension nondecreasing in D
        let mut prev = 0;
        for d in 0..4 {
            let k = md.endomorphisms_up_to(d).len();
            assert!(k >= prev);
            prev = k;
        }
    }

    #[test]
    fn frobenius_as_element_examples() {
        // phi_T = tau over F_{2^3}: a' = T^3
        let md = carlitz(2, 3);
        let a = md.frobenius_as_element().unwrap();
        assert_eq!(a, Poly::monomial(md.fq().one(), 3));
        // over F_q itself: a' = T
        let md1 = carlitz(5, 1);
        assert_eq!(md1.frobenius_as_element().unwrap(), Poly::x(md1.fq()));
    }

    #[test]
    fn isogeny_examples() {
        // rank-1 phi_T = tau over F_4, a = T+1: H = F_2, f normalizes tau+1
        let md = carlitz(2, 2);
        let one = SkewPoly::constant(1, md.base().one());
        let a = Poly::parse("T+1", "T", md.fq()).unwrap();
        let (f, target) = md.isogeny_from_endomorphism(&one, &a, 64).unwrap();
        assert_eq!(f.deg(), Some(1));
        // f * phi_T = phi'_T * f
        let lhs = f.mul(&lift_skew(md.phi_t(), f.coeffs()[0].field()));
        let rhs = target.phi_t().mul(&f);
        assert_eq!(lhs, rhs);

        // self-isogeny: s = 1, H = ker phi_a, f = phi_a up to unit
        let md3 = carlitz(3, 1);
        let one3 = SkewPoly::constant(1, md3.base().one());
        let a3 = Poly::parse("T+2", "T", md3.fq()).unwrap();
        let (f3, _t3) = md3.isogeny_from_endomorphism(&one3, &a3, 64).unwrap();
        assert_eq!(f3.deg(), md3.phi_of(&a3).deg());

        // inseparable kernel rejected: a = T with p0 = (T)
        let t = Poly::x(md3.fq());
        assert!(matches!(
            md3.isogeny_from_endomorphism(&one3, &t, 64),
            Err(Error::InseparableKernel)
        ));
    }

    #[test]
    fn specialize_examples() {
        let fam = rank2_family_f3();
        // alpha = 0: leading coeff 1, good reduction, rank 2
        let h = Poly::x(fam.fq());
        match fam.specialize(&h).unwrap() {
            SpecializeOutcome::Good(md) => {
                assert_eq!(md.rank(), 2);
                assert_eq!(md.p0(), &Poly::x(md.fq()));
            }
            SpecializeOutcome::BadReduction => panic!("expected good reduction"),
        }

        // phi_T = s*tau^2: bad reduction at s = 0
        let f3 = build_extension(3, 1).unwrap();
        let bad_fam = DrinfeldFamily::new(
            &f3,
            SkewPoly::from_coeffs(
                1,
                Poly::zero(&f3),
                vec![Poly::zero(&f3), Poly::zero(&f3), Poly::x(&f3)],
            ),
            "bad",
        )
        .unwrap();
        assert!(matches!(
            bad_fam.specialize(&Poly::x(&f3)).unwrap(),
            SpecializeOutcome::BadReduction
        ));
        assert!(!fam.is_isotrivial());
    }

    #[test]
    fn module_file_roundtrip() {
        let text = r#"{"q":3,"base":"rational","m_or_var":"s","rank":2,"phiT":["0","s","1"],"name":"ref-rank2-f3"}"#;
        let spec = ModuleSpecFile::parse_json(text).unwrap();
        let ModuleInput::Family(fam) = spec.build().unwrap() else {
            panic!("expected family")
        };
        assert_eq!(fam.rank(), 2);
        let back = ModuleSpecFile::from_family(&fam);
        assert_eq!(back.to_json(), text);

        let fin =
            r#"{"q":2,"base":"finite","m_or_var":3,"rank":1,"phiT":["0","1"],"name":"carlitz-f8"}"#;
        let spec = ModuleSpecFile::parse_json(fin).unwrap();
        let ModuleInput::Finite(md) = spec.build().unwrap() else {
            panic!("expected finite module")
        };
        assert_eq!(md.base_degree(), 3);
        assert!(ModuleSpecFile::parse_json("{bad").is_err());
    }

    #[test]
    fn min_poly_examples() {
        let f4 = build_extension(2, 2).unwrap();
        let f2 = FqField::prime(2);
        let g = f4.gen();
        let mp = min_poly_over(&g, &f2, &f4);
        assert_eq!(mp.coeffs(), f4.modulus());
        let mp1 = min_poly_over(&f4.one(), &f2, &f4);
        assert_eq!(mp1, Poly::parse("T+1", "T", &f2).unwrap());
    }

    use crate::field::FqField;
}
