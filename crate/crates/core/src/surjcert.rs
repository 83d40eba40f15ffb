//! The certification pipeline: sweep the places of a Drinfeld family over
//! `F_q(s)`, collect adjoint traces of Frobenius into the ring of traces,
//! and check the charpoly-computable hypotheses (residual and pairwise
//! trace surjectivity, depth-2 generation, nonvanishing of the eigenvalue
//! relation) that the surjectivity theorems consume. The report certifies
//! hypotheses, never a Galois image computation.

use serde::Serialize;

use crate::drinfeld::{newton_check, DrinfeldFamily, FrobeniusData, SpecializeOutcome};
use crate::eigenrel::{self};
use crate::field::{Elem, FqField};
use crate::matrix::{Mat, RowSpace};
use crate::par::par_map;
use crate::poly::{self, Poly};
use crate::ratfunc::RatFunc;
use crate::ring::Ring;
use crate::trunc::{residue_field, residue_of_poly, teichmuller_expand, ResRing, TruncRing};
use crate::Error;
use std::sync::Arc;

/// One adjoint-trace value `Tr Ad(Frob_x)`, an exact element of `F` whose
/// denominator is a power of the characteristic prime (membership in `A_0`).
#[derive(Clone, Debug)]
pub struct TraceSample {
    pub place: String,
    pub deg_x: usize,
    pub value: RatFunc,
}

/// `Tr Ad` along the charpoly route: `b_1 b_{n-1} / b_n` (with `b_0 = 1`),
/// checked to lie in `A_0`.
pub fn trad_of(fd: &FrobeniusData) -> Result<TraceSample, Error> {
    let n = fd.n;
    let fq = fd.p0.field();
    let value = if n == 1 {
        RatFunc::from_poly(&Poly::one(fq))
    } else {
        let b1 = &fd.fx[n - 1];
        let bn1 = &fd.fx[1];
        let bn = &fd.fx[0];
        RatFunc::new(b1.mul(bn1), bn.clone())
    };
    // A_0 membership: the reduced denominator is a p0-power
    if !value.is_zero() {
        for (g, _) in value.den().factor()? {
            if g.deg() == Some(0) {
                continue;
            }
            if g != fd.p0 {
                return Err(Error::NewtonViolation(format!(
                    "trace denominator has the factor {} != p0 at place {}",
                    g.to_string_var("T"),
                    fd.place
                )));
            }
        }
    }
    Ok(TraceSample {
        place: fd.place.clone(),
        deg_x: fd.deg_x,
        value,
    })
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub data: Vec<FrobeniusData>,
    pub places_good: usize,
    pub places_bad: usize,
}

/// Specialize the family at every place of the `s`-line of degree at most
/// `bound` (one representative per place, canonically the monic irreducible
/// itself), skipping bad reduction, and compute the cross-validated
/// Frobenius charpoly at each good place. Every datum passes the Weil
/// valuation checks.
pub fn collect_frobenius(
    fam: &DrinfeldFamily,
    bound: usize,
    torsion_cap: usize,
) -> Result<SweepResult, Error> {
    fam.p0()?; // special characteristic required
    let places = poly::enumerate_primes(fam.fq(), bound);
    let results: Vec<Result<Option<FrobeniusData>, Error>> = par_map(places, |h| {
        // per-worker copies: field handles are never shared across threads
        let local = fam.deep_clone();
        let h = h.rebase(local.fq());
        match local.specialize(&h)? {
            SpecializeOutcome::BadReduction => Ok(None),
            SpecializeOutcome::Good(md) => {
                let fd = md.charpoly_frobenius_named(&h.to_string_var("s"), torsion_cap)?;
                newton_check(&fd)?;
                Ok(Some(fd))
            }
        }
    });
    let mut data = Vec::new();
    let mut bad = 0usize;
    for r in results {
        match r? {
            Some(fd) => data.push(fd),
            None => bad += 1,
        }
    }
    Ok(SweepResult {
        places_good: data.len(),
        places_bad: bad,
        data,
    })
}

fn sample_image_in_kp(s: &TraceSample, pi: &Poly, kp: &Arc<FqField>) -> Elem {
    let num = residue_of_poly(s.value.num(), pi, kp);
    let den = residue_of_poly(s.value.den(), pi, kp);
    num.mul(
        &den.inv()
            .expect("denominator is a p0-power, invertible away from p0"),
    )
}

/// True iff the images of the samples generate the residue field `k_p` as
/// a ring (prime-field algebra closure).
pub fn residual_trace_surjectivity(samples: &[TraceSample], pi: &Poly) -> bool {
    let kp = residue_field(pi);
    let prime = FqField::prime(kp.characteristic());
    let dim = kp.degree_over(&prime);
    let mut span = RowSpace::new(&prime, dim);
    let mut reps: Vec<Elem> = Vec::new();
    let mut queue: Vec<Elem> = Vec::new();
    let push = |e: Elem, span: &mut RowSpace, reps: &mut Vec<Elem>, queue: &mut Vec<Elem>| {
        if span.insert(e.coords_over(&prime)) {
            reps.push(e.clone());
            queue.push(e);
        }
    };
    push(kp.one(), &mut span, &mut reps, &mut queue);
    for s in samples {
        push(
            sample_image_in_kp(s, pi, &kp),
            &mut span,
            &mut reps,
            &mut queue,
        );
    }
    while let Some(t) = queue.pop() {
        let snapshot = reps.clone();
        for r in &snapshot {
            push(t.mul(r), &mut span, &mut reps, &mut queue);
        }
    }
    span.rank() == dim
}

/// True iff the images generate the product ring `k_{p1} x k_{p2}`; this
/// is what rules out graph-of-isomorphism images across two primes.
pub fn pairwise_trace_surjectivity(samples: &[TraceSample], p1: &Poly, p2: &Poly) -> bool {
    assert!(p1 != p2);
    let k1 = residue_field(p1);
    let k2 = residue_field(p2);
    let prime = FqField::prime(k1.characteristic());
    let d1 = k1.degree_over(&prime);
    let d2 = k2.degree_over(&prime);
    let cols = d1 + d2;
    let flat = |a: &Elem, b: &Elem| -> Vec<Elem> {
        let mut v = a.coords_over(&prime);
        v.extend(b.coords_over(&prime));
        v
    };
    let mut span = RowSpace::new(&prime, cols);
    let mut reps: Vec<(Elem, Elem)> = Vec::new();
    let mut queue: Vec<(Elem, Elem)> = Vec::new();
    let push = |p: (Elem, Elem),
                span: &mut RowSpace,
                reps: &mut Vec<(Elem, Elem)>,
                queue: &mut Vec<(Elem, Elem)>| {
        if span.insert(flat(&p.0, &p.1)) {
            reps.push(p.clone());
            queue.push(p);
        }
    };
    push((k1.one(), k2.one()), &mut span, &mut reps, &mut queue);
    for s in samples {
        let im = (
            sample_image_in_kp(s, p1, &k1),
            sample_image_in_kp(s, p2, &k2),
        );
        push(im, &mut span, &mut reps, &mut queue);
    }
    while let Some((a, b)) = queue.pop() {
        let snapshot = reps.clone();
        for (c, d) in &snapshot {
            push((a.mul(c), b.mul(d)), &mut span, &mut reps, &mut queue);
        }
    }
    span.rank() == cols
}

/// Sample depth used by the generation criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthMode {
    /// `A_p` at level 2 (trace criterion 1)
    Full,
    /// the square subring at level 3, characteristic 2 (trace criterion 2)
    Squares,
}

/// Expand each sample `pi`-adically (Teichmüller digits) and delegate to
/// the matching trace criterion.
pub fn depth2_generation(samples: &[TraceSample], pi: &Poly, mode: DepthMode) -> bool {
    let kp = residue_field(pi);
    let m = match mode {
        DepthMode::Full => 2,
        DepthMode::Squares => 3,
    };
    let tring = TruncRing::new(&kp, m);
    let ring = ResRing::new(pi, m);
    let mut expanded = Vec::with_capacity(samples.len());
    for s in samples {
        let num = ring.reduce(s.value.num());
        let den = ring.reduce(s.value.den());
        let t = num.mul(&den.try_inv().expect("denominator invertible away from p0"));
        expanded.push(teichmuller_expand(t.rep(), pi, m, &kp, &tring));
    }
    match mode {
        DepthMode::Full => crate::matgroups::trace_criterion_1(&tring, &expanded),
        DepthMode::Squares => crate::matgroups::trace_criterion_2(&tring, &expanded),
    }
}

/// `f(Frob_x^c)` computed once in `A` (via the companion matrix of `f_x`
/// raised to the `c`-th power); by construction its reduction mod any prime
/// `p` equals `f` of the mod-`p` Frobenius charpoly.
pub fn f_power_value_in_a(fd: &FrobeniusData, c: u64) -> Result<Poly, Error> {
    let fq = fd.p0.field();
    if fd.n == 1 {
        return Ok(Poly::one(fq));
    }
    let sym = eigenrel::symbolic_f(fd.n)?;
    let cp = charpoly_of_frobenius_power(fd, c);
    let betas: Vec<Poly> = (1..=fd.n).map(|j| cp[fd.n - j].clone()).collect();
    Ok(sym.eval(&betas, &Poly::zero(fq)))
}

/// Charpoly of the `c`-th power of Frobenius, over `A`, from `f_x` alone.
pub fn charpoly_of_frobenius_power(fd: &FrobeniusData, c: u64) -> Vec<Poly> {
    let fq = fd.p0.field();
    let n = fd.n;
    // companion matrix of f_x
    let mut comp: Mat<Poly> = Mat::zero(n, &Poly::zero(fq));
    for i in 1..n {
        *comp.at_mut(i, i - 1) = Poly::one(fq);
    }
    for i in 0..n {
        *comp.at_mut(i, n - 1) = fd.fx[i].neg();
    }
    comp.pow(c).charpoly()
}

/// Scan the sweep for a place where `f(Frob_x^c)` is nonzero mod `pi`.
pub fn f_nonvanishing_scan(
    data: &[FrobeniusData],
    c: u64,
    pi: &Poly,
) -> Result<Option<String>, Error> {
    for fd in data {
        let a = f_power_value_in_a(fd, c)?;
        if !a.is_zero() && a.valuation_at(pi) == 0 {
            return Ok(Some(fd.place.clone()));
        }
    }
    Ok(None)
}

/// Cross-check of the p-independence mechanism: the value computed in `A`
/// reduces to `f` of the residual charpoly at every prime given.
pub fn verify_p_independence(
    data: &[FrobeniusData],
    c: u64,
    primes: &[Poly],
) -> Result<bool, Error> {
    for fd in data {
        if fd.n == 1 {
            continue;
        }
        let a = f_power_value_in_a(fd, c)?;
        let cp_a = charpoly_of_frobenius_power(fd, c);
        for pi in primes {
            if *pi == fd.p0 {
                continue;
            }
            let kp = residue_field(pi);
            let coeffs: Vec<Elem> = cp_a.iter().map(|h| residue_of_poly(h, pi, &kp)).collect();
            let cp_kp = Poly::from_coeffs(&kp, coeffs);
            if cp_kp.coeff(0).is_zero() {
                return Ok(false); // would contradict the Weil bounds
            }
            let rep = eigenrel::f_value(&cp_kp)?;
            if rep.value != residue_of_poly(&a, pi, &kp) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TradField {
    F,
    FSquared,
    Undetermined,
}

/// Detect whether every adjoint trace is a square in `F` (the degenerate
/// `F^trad = F^2` case of characteristic 2, rank 2).
pub fn trad_field_detect(samples: &[TraceSample]) -> Result<TradField, Error> {
    if samples.is_empty() {
        return Ok(TradField::Undetermined);
    }
    for s in samples {
        if !s.value.is_square()? {
            return Ok(TradField::F);
        }
    }
    Ok(TradField::FSquared)
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub prime_degree_bound: usize,
    pub place_degree_bound: usize,
    /// primes excluded by the user, as canonical `T`-strings
    pub exclusions: Vec<String>,
    pub torsion_cap: usize,
    /// exponent for the nonvanishing scan
    pub f_exponent: u64,
    /// override the automatic full/squares depth-mode selection
    pub mode_override: Option<DepthMode>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            prime_degree_bound: 2,
            place_degree_bound: 3,
            exclusions: Vec::new(),
            torsion_cap: crate::drinfeld::TORSION_DEGREE_CAP,
            f_exponent: 1,
            mode_override: None,
        }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct SweepInfo {
    pub place_degree_bound: usize,
    pub places_good: usize,
    pub places_bad: usize,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct PrimeEntry {
    pub pi: String,
    pub deg: usize,
    pub status: String,
    pub residual: bool,
    pub depth2: bool,
    pub f_witness: Option<String>,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct PairEntry {
    pub p1: String,
    pub p2: String,
    pub pairwise: bool,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub family: String,
    pub sweep: SweepInfo,
    pub trad_field: String,
    pub primes: Vec<PrimeEntry>,
    pub pairs: Vec<PairEntry>,
}

impl CertificateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Run the full pipeline. The report labels each prime CERTIFIED /
/// EVIDENCE / EXCLUDED; EXCLUDED is exactly `p = p0`, `|k_p| <= 9`, or a
/// user exclusion. Residual, depth and witness data are still recorded for
/// excluded primes other than `p0`.
pub fn certify(fam: &DrinfeldFamily, opts: &CertifyOptions) -> Result<CertificateReport, Error> {
    if fam.is_isotrivial() {
        return Err(Error::Unsupported(
            "family is isotrivial (all coefficients constant); the pipeline requires a \
             non-isotrivial family"
                .into(),
        ));
    }
    let p0 = fam.p0()?;
    let sweep = collect_frobenius(fam, opts.place_degree_bound, opts.torsion_cap)?;
    let samples: Vec<TraceSample> = sweep.data.iter().map(trad_of).collect::<Result<_, _>>()?;
    let detect = trad_field_detect(&samples)?;
    let p = fam.fq().characteristic();
    let squares_mode = match opts.mode_override {
        Some(DepthMode::Squares) => true,
        Some(DepthMode::Full) => false,
        None => detect == TradField::FSquared && p == 2 && fam.rank() == 2,
    };
    // the index-2 subgroup proxy: places of even degree over the constant
    // field, matching the degree-2 constant-field extension
    let depth_samples: Vec<TraceSample> = if squares_mode {
        samples
            .iter()
            .filter(|s| s.deg_x % 2 == 0)
            .cloned()
            .collect()
    } else {
        samples.clone()
    };
    let mode = if squares_mode {
        DepthMode::Squares
    } else {
        DepthMode::Full
    };

    let primes = poly::enumerate_primes(fam.fq(), opts.prime_degree_bound);
    let mut entries = Vec::new();
    let mut usable: Vec<Poly> = Vec::new();
    for pi in &primes {
        let pi_str = pi.to_string_var("T");
        let deg = pi.deg().unwrap();
        let kp_order = fam.fq().order().pow(deg as u32);
        let excluded = *pi == p0 || kp_order <= 9 || opts.exclusions.iter().any(|x| *x == pi_str);
        let (residual, depth2, witness) = if *pi == p0 {
            (false, false, None)
        } else {
            let residual = residual_trace_surjectivity(&samples, pi);
            let depth2 = depth2_generation(&depth_samples, pi, mode);
            let witness = f_nonvanishing_scan(&sweep.data, opts.f_exponent, pi)?;
            (residual, depth2, witness)
        };
        let status = if excluded {
            "EXCLUDED"
        } else if residual && depth2 && witness.is_some() {
            "CERTIFIED"
        } else {
            "EVIDENCE"
        };
        if !excluded {
            usable.push(pi.clone());
        }
        entries.push(PrimeEntry {
            pi: pi_str,
            deg,
            status: status.to_string(),
            residual,
            depth2,
            f_witness: witness,
        });
    }
    let mut pairs = Vec::new();
    for i in 0..usable.len() {
        for j in i + 1..usable.len() {
            pairs.push(PairEntry {
                p1: usable[i].to_string_var("T"),
                p2: usable[j].to_string_var("T"),
                pairwise: pairwise_trace_surjectivity(&samples, &usable[i], &usable[j]),
            });
        }
    }
    Ok(CertificateReport {
        family: fam.name().to_string(),
        sweep: SweepInfo {
            place_degree_bound: opts.place_degree_bound,
            places_good: sweep.places_good,
            places_bad: sweep.places_bad,
        },
        trad_field: match detect {
            TradField::F => "F",
            TradField::FSquared => "F2",
            TradField::Undetermined => "undetermined",
        }
        .to_string(),
        primes: entries,
        pairs,
    })
}
