//! Exact verifiers for the kernel identities, the transformation formulas
//! and the row-type operator results.
//!
//! Each verifier evaluates both sides at seeded random points whose
//! coordinates are rational fourth powers, and records the difference. A
//! check passes only when every residual is exactly zero. Points that hit a
//! vanishing denominator are resampled (see [`Sampler::generic`]).

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::combinat::{
    box_partitions, box_vectors, chain_count, chain_enumerate, conjugate_star, dominance_leq, e_col, h_row,
    partitions_up_to, signed_subsets, complement, special_point, weight, Chain, Partition,
};
use crate::error::{QbcError, Result};
use crate::koornwinder::{
    build_matrix, compute_koornwinder, dual_cauchy_kernel, dual_cauchy_residual, duality_residual, eigenvalue_column,
    eigenvalue_row, is_triangular, pieri_coefficients, pieri_residual, x_vars,
};
use crate::qops::{
    conjugated_dgen, conjugated_vandiejen, hrow_apply, hrow_operator, vandiejen_apply, vandiejen_operator, ParamQuad,
    Side,
};
use crate::scalars::{pow_scalar, sign, t_binomial, Frac, Gen, ParamPoint, QMono, Sampler, Scalar};

/// Outcome of one verifier run.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub id: String,
    /// Human cross-reference, e.g. `"Theorem 3.2"`.
    pub anchor: String,
    pub sizes: String,
    pub seed: u64,
    pub trials: usize,
    pub pass: bool,
    /// Every difference that must vanish, in evaluation order.
    pub residuals: Vec<Scalar>,
    /// Fourth roots used at each trial, for the generators the check reads.
    pub points: Vec<Vec<(String, String)>>,
    pub notes: Vec<String>,
    pub time_ms: u128,
}

impl VerificationReport {
    pub fn nonzero_residuals(&self) -> usize {
        self.residuals.iter().filter(|r| !r.is_zero()).count()
    }
}

/// Collects residuals and points while a verifier runs.
struct Run {
    id: String,
    anchor: String,
    sizes: String,
    seed: u64,
    trials: usize,
    gens: Vec<Gen>,
    sampler: Sampler,
    residuals: Vec<Scalar>,
    points: Vec<Vec<(String, String)>>,
    notes: Vec<String>,
    start: Instant,
}

impl Run {
    fn new(id: &str, anchor: &str, sizes: String, seed: u64, trials: usize, gens: Vec<Gen>) -> Run {
        let sampler = Sampler::new(seed, &format!("{id}|{sizes}"));
        Run {
            id: id.to_string(),
            anchor: anchor.to_string(),
            sizes,
            seed,
            trials,
            gens,
            sampler,
            residuals: Vec::new(),
            points: Vec::new(),
            notes: Vec::new(),
            start: Instant::now(),
        }
    }

    /// A second deterministic stream, for interpolation points and the like.
    fn side_sampler(&self, tag: &str) -> Sampler {
        Sampler::new(self.seed, &format!("{}|{}|{tag}", self.id, self.sizes))
    }

    fn trial(&mut self, f: impl FnMut(&ParamPoint) -> Result<Vec<Scalar>>) -> Result<()> {
        self.trial_with(|p| p.clone(), f)
    }

    /// Like [`Run::trial`], but first maps the sampled point (used to pin `t`).
    fn trial_with(
        &mut self,
        prep: impl Fn(&ParamPoint) -> ParamPoint,
        mut f: impl FnMut(&ParamPoint) -> Result<Vec<Scalar>>,
    ) -> Result<()> {
        let (p, res) = self.sampler.generic(|p| {
            let p = prep(p);
            let r = f(&p)?;
            Ok((p, r))
        })?;
        self.points.push(p.assignments(&self.gens));
        self.residuals.extend(res);
        Ok(())
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self) -> VerificationReport {
        let pass = self.residuals.iter().all(Zero::is_zero);
        VerificationReport {
            id: self.id,
            anchor: self.anchor,
            sizes: self.sizes,
            seed: self.seed,
            trials: self.trials,
            pass,
            residuals: self.residuals,
            points: self.points,
            notes: self.notes,
            time_ms: self.start.elapsed().as_millis(),
        }
    }
}

fn param_gens() -> Vec<Gen> {
    vec![Gen::A, Gen::B, Gen::C, Gen::D, Gen::Q, Gen::T, Gen::U]
}

fn gens_xy(m: usize, n: usize) -> Vec<Gen> {
    let mut g = param_gens();
    g.extend((0..m).map(Gen::X));
    g.extend((0..n).map(Gen::Y));
    g
}

fn y_vars(n: usize) -> Vec<QMono> {
    (0..n).map(QMono::y).collect()
}

fn fmt_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Zero residual for a boolean condition, one otherwise.
fn flag(ok: bool) -> Scalar {
    if ok {
        Scalar::zero()
    } else {
        Scalar::one()
    }
}

fn check_sizes(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(QbcError::Invalid(what.to_string()))
    }
}

/// Product of q-shifted brackets, with the zero-denominator check deferred.
struct Prod<'a> {
    p: &'a ParamPoint,
    base: QMono,
    f: Frac,
}

impl<'a> Prod<'a> {
    fn new(p: &'a ParamPoint, base: QMono) -> Prod<'a> {
        Prod { p, base, f: Frac::one() }
    }

    /// Multiplies by `<z>_k`.
    fn up(&mut self, z: QMono, k: i64) -> Result<()> {
        let v = self.p.brf(&z, &self.base, k)?;
        self.f.mul(v);
        Ok(())
    }

    /// Divides by `<z>_k`.
    fn down(&mut self, z: QMono, k: i64) -> Result<()> {
        let v = self.p.brf(&z, &self.base, k)?;
        self.f.div(v);
        Ok(())
    }

    fn up1(&mut self, z: QMono) -> Result<()> {
        self.up(z, 1)
    }

    fn down1(&mut self, z: QMono) -> Result<()> {
        self.down(z, 1)
    }

    fn times(&mut self, s: Scalar) {
        self.f.mul(s);
    }

    fn over(&mut self, s: Scalar) {
        self.f.div(s);
    }

    fn finish(&self, what: &str) -> Result<Scalar> {
        self.f.finish(what)
    }
}

fn signed(x: &QMono, e: i32) -> QMono {
    if e >= 0 {
        *x
    } else {
        x.inv()
    }
}

fn alpha_of(pars: &[QMono; 4], q: &QMono) -> Result<QMono> {
    (pars[0] * pars[1] * pars[2] * pars[3] / *q).sqrt()
}

// ---------------------------------------------------------------------------
// Cauchy kernel identity and its explicit base-q form.

/// `Phi^{-1} D^x(u) Phi - e(u; alpha)_{t,m-n} Phi^{-1} D~^y(u) Phi`.
pub fn cauchy_residual(xs: &[QMono], ys: &[QMono], u: &QMono, quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let (m, n) = (xs.len() as i64, ys.len() as i64);
    let lhs = conjugated_dgen(u, xs, ys, quad, Side::X, p)?;
    let rhs = conjugated_dgen(u, xs, ys, quad, Side::Y, p)?;
    let pre = p.ef(u, &quad.alpha()?, &quad.t, m - n)?;
    Ok(lhs - pre * rhs)
}

pub fn verify_cauchy_kernel(m: usize, n: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(m + n <= 4, "cauchy kernel needs m + n <= 4")?;
    let mut run = Run::new("cauchy", "Theorem 2.1", format!("m={m},n={n}"), seed, trials, gens_xy(m, n));
    let quad = ParamQuad::standard();
    let (xs, ys, u) = (x_vars(m), y_vars(n), QMono::u());
    if n == 0 {
        run.note("n = 0: the left side is also compared with D(u)1 = e(u; alpha)_{t,m}");
    }
    if m < n {
        run.note("m < n: the prefactor uses the reciprocal branch of the e-factorial");
    }
    for _ in 0..trials {
        run.trial(|p| {
            let mut out = vec![cauchy_residual(&xs, &ys, &u, &quad, p)?];
            if n == 0 {
                let lhs = conjugated_dgen(&u, &xs, &ys, &quad, Side::X, p)?;
                out.push(lhs - p.ef(&u, &quad.alpha()?, &quad.t, m as i64)?);
            }
            Ok(out)
        })?;
    }
    Ok(run.finish())
}

/// One side of the explicit base-q kernel identity: the double sum over
/// signed subsets `(I, eps)` and `(J, delta)`, with `e(u; ebase)_{q,.}`.
fn set_side(xs: &[QMono], ys: &[QMono], pars: &[QMono; 4], ebase: &QMono, u: &QMono, p: &ParamPoint) -> Result<Scalar> {
    let (q, t) = (QMono::q(), QMono::t());
    let lo = (t / q).sqrt()?;
    let hi = (t * q).sqrt()?;
    let m = xs.len();
    let all: Vec<usize> = (0..m).collect();
    let w = |z: &QMono, pr: &mut Prod| -> Result<()> {
        for a in pars {
            pr.up1(*a * *z)?;
        }
        pr.down1(z.pow(2))?;
        pr.down1(t * z.pow(2))
    };
    let mut total = Scalar::zero();
    for k in 0..=m {
        for ieps in signed_subsets(&all, k) {
            let zs: Vec<QMono> = ieps.pairs.iter().map(|&(i, e)| signed(&xs[i], e)).collect();
            let rest = complement(m, &ieps.indices());
            let mut outer = Prod::new(p, q);
            outer.times(sign(k as i64));
            for z in &zs {
                w(z, &mut outer)?;
            }
            for a in 0..zs.len() {
                for b in a + 1..zs.len() {
                    let zz = zs[a] * zs[b];
                    outer.up1(q * zz)?;
                    outer.up1(t * q * zz)?;
                    outer.down1(zz)?;
                    outer.down1(t * zz)?;
                }
            }
            for z in &zs {
                for &j in &rest {
                    for xj in [xs[j], xs[j].inv()] {
                        outer.up1(q * *z * xj)?;
                        outer.down1(*z * xj)?;
                    }
                }
                for y in ys {
                    outer.times(p.e(&(lo * *z), y));
                    outer.over(p.e(&(hi * *z), y));
                }
            }
            let mut inner = Scalar::zero();
            for r in 0..=rest.len() {
                let ef = p.ef(u, ebase, &q, (rest.len() - r) as i64)?;
                for jd in signed_subsets(&rest, r) {
                    let ws: Vec<QMono> = jd.pairs.iter().map(|&(i, e)| signed(&xs[i], e)).collect();
                    let inj = jd.indices();
                    let mut pr = Prod::new(p, q);
                    for z in &ws {
                        w(z, &mut pr)?;
                    }
                    for a in 0..ws.len() {
                        for b in a + 1..ws.len() {
                            let zz = ws[a] * ws[b];
                            pr.up1(q * zz)?;
                            pr.up1(t * zz / q)?;
                            pr.down1(zz)?;
                            pr.down1(t * zz)?;
                        }
                    }
                    for z in &ws {
                        for &j in rest.iter().filter(|j| !inj.contains(j)) {
                            for xj in [xs[j], xs[j].inv()] {
                                pr.up1(q * *z * xj)?;
                                pr.down1(*z * xj)?;
                            }
                        }
                    }
                    inner += &ef * pr.finish("inner kernel term")?;
                }
            }
            total += outer.finish("outer kernel term")? * inner;
        }
    }
    Ok(total)
}

/// Both sides of the explicit base-q kernel identity.
fn explicit_kernel_sides(xs: &[QMono], ys: &[QMono], pars: &[QMono; 4], u: &QMono, p: &ParamPoint) -> Result<(Scalar, Scalar)> {
    let (q, t) = (QMono::q(), QMono::t());
    let s = (t * q).sqrt()?;
    let al = alpha_of(pars, &q)?;
    let ebase = (q / t).sqrt()? * al;
    let lhs = set_side(xs, ys, pars, &ebase, u, p)?;
    let dual_pars = [s / pars[0], s / pars[1], s / pars[2], s / pars[3]];
    let rhs_sum = set_side(ys, xs, &dual_pars, &(s / al), u, p)?;
    let pre = p.ef(u, &ebase, &q, xs.len() as i64 - ys.len() as i64)?;
    Ok((lhs, pre * rhs_sum))
}

pub fn verify_theorem_2_2(m: usize, n: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(m + n <= 4, "explicit kernel identity needs m + n <= 4")?;
    let mut run = Run::new("thm2-2", "Theorem 2.2", format!("m={m},n={n}"), seed, trials, gens_xy(m, n));
    run.note("residuals per trial: explicit left - explicit right, explicit left - swapped operator form, explicit right - swapped operator form");
    let quad = ParamQuad::standard();
    let hat = quad.hat();
    let (xs, ys, u) = (x_vars(m), y_vars(n), QMono::u());
    for _ in 0..trials {
        run.trial(|p| {
            let (lhs, rhs) = explicit_kernel_sides(&xs, &ys, &quad.abcd(), &u, p)?;
            let op_l = conjugated_dgen(&u, &xs, &ys, &hat, Side::X, p)?;
            let op_r = conjugated_dgen(&u, &xs, &ys, &hat, Side::Y, p)? * p.ef(&u, &hat.alpha()?, &hat.t, m as i64 - n as i64)?;
            Ok(vec![&lhs - &rhs, lhs - op_l, rhs - op_r])
        })?;
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// Coefficient relation and base-point change.

/// `Phi^{-1} D_r^x Phi - sum_k [n-k, r-k]_t e(...)_{t,r-k} Phi^{-1} D~_k^y Phi`.
pub fn coefficient_relation_residual(r: usize, xs: &[QMono], ys: &[QMono], quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let (m, n) = (xs.len() as i32, ys.len() as i32);
    let t = quad.t;
    let al = quad.alpha()?;
    let tilde = quad.tilde()?;
    let lhs = conjugated_vandiejen(r, xs, ys, quad, p)?;
    let mut rhs = Scalar::zero();
    for k in 0..=r as i32 {
        let bin = t_binomial((n - k) as i64, (r as i32 - k) as i64, &t, p)?;
        if bin.is_zero() {
            continue;
        }
        let z = t.pow(n - k + 1).sqrt()? / al;
        let w = t.pow(1 + n - 2 * m + k).sqrt()? / al;
        let ef = p.ef(&z, &w, &t, (r as i32 - k) as i64)?;
        rhs += bin * ef * conjugated_vandiejen(k as usize, ys, xs, &tilde, p)?;
    }
    Ok(lhs - rhs)
}

/// `<t>(D_1^x - D~_1^y) Phi - <t^m><t^-n><alpha^2 t^(m-n-1)> Phi`, divided by `Phi`.
pub fn kns_residual(xs: &[QMono], ys: &[QMono], quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let (m, n) = (xs.len() as i32, ys.len() as i32);
    let t = quad.t;
    let al = quad.alpha()?;
    let d1 = conjugated_vandiejen(1, xs, ys, quad, p)?;
    let dt1 = conjugated_vandiejen(1, ys, xs, &quad.tilde()?, p)?;
    let bt = p.br(&t)?;
    let rhs = p.br(&t.pow(m))? * p.br(&t.pow(-n))? * p.br(&(al.pow(2) * t.pow(m - n - 1)))?;
    Ok(&bt * d1 - bt * dt1 - rhs)
}

pub fn verify_coefficient_relation(r: usize, m: usize, n: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(r <= m && m + n <= 4, "coefficient relation needs r <= m and m + n <= 4")?;
    let mut run = Run::new("coeff-rel", "Theorem 2.1, coefficient form", format!("r={r},m={m},n={n}"), seed, trials, gens_xy(m, n));
    if r == 1 {
        run.note("r = 1 is the KNS identity; its product form is checked as a second residual per trial");
    }
    let quad = ParamQuad::standard();
    let (xs, ys) = (x_vars(m), y_vars(n));
    for _ in 0..trials {
        run.trial(|p| {
            let mut out = vec![coefficient_relation_residual(r, &xs, &ys, &quad, p)?];
            if r == 1 {
                out.push(kns_residual(&xs, &ys, &quad, p)?);
            }
            Ok(out)
        })?;
    }
    Ok(run.finish())
}

/// `e(w;b)_{t,l} - sum_r (-1)^r [l r]_t e(t^((l-1)/2) b; t^((1-l)/2)/a)_{t,r} e(w;a)_{t,l-r}`.
pub fn saalschutz_residual(l: usize, w: &QMono, a: &QMono, b: &QMono, t: &QMono, p: &ParamPoint) -> Result<Scalar> {
    let li = l as i32;
    let lhs = p.ef(w, b, t, l as i64)?;
    let z = t.pow(li - 1).sqrt()? * *b;
    let zb = t.pow(1 - li).sqrt()? / *a;
    let mut rhs = Scalar::zero();
    for r in 0..=l as i64 {
        let term = sign(r) * t_binomial(l as i64, r, t, p)? * p.ef(&z, &zb, t, r)? * p.ef(w, a, t, l as i64 - r)?;
        rhs += term;
    }
    Ok(lhs - rhs)
}

pub fn verify_saalschutz(l: usize, same_base: bool, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(l <= 6, "base-point change needs l <= 6")?;
    let tag = if same_base { ",a=b" } else { "" };
    let mut run = Run::new("saalschutz", "q-Saalschutz base change", format!("l={l}{tag}"), seed, trials, vec![Gen::A, Gen::B, Gen::T, Gen::U]);
    let (w, a, t) = (QMono::u(), QMono::a(), QMono::t());
    let b = if same_base { a } else { QMono::b() };
    for _ in 0..trials {
        run.trial(|p| Ok(vec![saalschutz_residual(l, &w, &a, &b, &t, p)?]))?;
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// Type BC transformation.

/// `x_{(i,a)} = scale * z_i * q^a` for each block.
fn principal(zs: &[QMono], sizes: &[i64], scale: &QMono) -> Vec<QMono> {
    let q = QMono::q();
    let mut out = Vec::new();
    for (z, &s) in zs.iter().zip(sizes) {
        for a in 0..s {
            out.push(*scale * *z * q.pow(a as i32));
        }
    }
    out
}

struct BcData<'a> {
    xs: &'a [QMono],
    ys: &'a [QMono],
    al: &'a [i64],
    be: &'a [i64],
    pars: [QMono; 4],
}

/// Chain-independent factor in front of the left multi-sum.
fn bc_left_prefactor(d: &BcData, p: &ParamPoint) -> Result<Scalar> {
    let (q, t) = (QMono::q(), QMono::t());
    let qp = |k: i64| q.pow(k as i32);
    let (xs, ys, al, be) = (d.xs, d.ys, d.al, d.be);
    let mut pr = Prod::new(p, q);
    for i in 0..xs.len() {
        for a in &d.pars {
            pr.up(t * q * xs[i] / *a, al[i])?;
        }
        pr.down(t * q * xs[i].pow(2), al[i])?;
        pr.down(t.pow(2) * q * xs[i].pow(2), al[i])?;
        for j in i + 1..xs.len() {
            let xx = xs[i] * xs[j];
            pr.up(t * qp(al[j] + 1) * xx, al[i])?;
            pr.up(t.pow(2) * qp(al[j] + 1) * xx, al[i])?;
            pr.down(t * q * xx, al[i])?;
            pr.down(t.pow(2) * q * xx, al[i])?;
        }
        for k in 0..ys.len() {
            pr.up(t * xs[i] * ys[k], al[i])?;
            pr.up(t * qp(1 - be[k]) * xs[i] / ys[k], al[i])?;
            pr.down(t * qp(be[k]) * xs[i] * ys[k], al[i])?;
            pr.down(t * q * xs[i] / ys[k], al[i])?;
        }
    }
    pr.finish("left prefactor")
}

/// One chain of the left multi-sum, without the `e(u; .)` factor.
fn bc_left_term(d: &BcData, ch: &Chain, p: &ParamPoint) -> Result<Scalar> {
    let (q, t) = (QMono::q(), QMono::t());
    let qp = |k: i64| q.pow(k as i32);
    let (xs, ys, al, be) = (d.xs, d.ys, d.al, d.be);
    let (mm, nm, np, mp) = (&ch.mu_minus, &ch.nu_minus, &ch.nu_plus, &ch.mu_plus);
    let m = xs.len();
    let mut pr = Prod::new(p, q);
    pr.times(sign(weight(al) + weight(np) + weight(nm)));
    for i in 0..m {
        for a in &d.pars {
            pr.up(*a * xs[i], nm[i])?;
            pr.down(t * q * xs[i] / *a, np[i])?;
        }
    }
    for i in 0..m {
        for j in i..m {
            let xx = xs[i] * xs[j];
            pr.up1(qp(mm[i] + mm[j]) * xx)?;
            pr.up1(t.pow(2) * qp(mp[i] + mp[j]) * xx)?;
            pr.down1(xx)?;
            pr.down1(t.pow(2) * xx)?;
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let r = xs[i] / xs[j];
            let xx = xs[i] * xs[j];
            for v in [mm, mp, nm, np] {
                pr.up1(qp(v[i] - v[j]) * r)?;
                pr.down1(r)?;
            }
            pr.up(t * xx, nm[i] + nm[j])?;
            pr.up(q * xx, nm[i] + nm[j])?;
            pr.down(t.pow(2) * xx, np[i] + np[j])?;
            pr.down(t * q * xx, np[i] + np[j])?;
        }
    }
    for i in 0..m {
        for j in 0..m {
            let xx = xs[i] * xs[j];
            let r = xs[i] / xs[j];
            pr.up1(t * qp(mm[i] + mp[j]) * xx)?;
            pr.up1(t * qp(nm[i] + np[j]) * xx)?;
            pr.up1(qp(mm[i] - mp[j]) * r / t)?;
            pr.up(t * xx, mm[i] + np[j])?;
            pr.up(t.pow(2) * xx, mp[i] + np[j])?;
            pr.down1(t * xx)?;
            pr.down1(t * xx)?;
            pr.down1(r / (t * qp(mp[j])))?;
            pr.down(q * xx, mm[i] + nm[j])?;
            pr.down(t * q * xx, mp[i] + nm[j])?;

            pr.up(xx, mm[i])?;
            pr.up(r / qp(nm[j]), mm[i])?;
            pr.up(r / (t * qp(al[j])), mm[i])?;
            pr.up(t * xx, mp[i])?;
            pr.up(r / qp(al[j]), mp[i])?;
            pr.up(q * r / (t * qp(np[j])), nm[i])?;
            pr.up(r / qp(np[j]), nm[i])?;
            pr.down(t * qp(al[j] + 1) * xx, mm[i])?;
            pr.down(q * r / (t * qp(np[j])), mm[i])?;
            pr.down(q * r, mm[i])?;
            pr.down(t.pow(2) * qp(al[j] + 1) * xx, mp[i])?;
            pr.down(q * r, mp[i])?;
            pr.down(q * r / (t * qp(mp[j])), nm[i])?;
            pr.down(q * r, nm[i])?;

            pr.up(r / qp(mp[j]), np[i])?;
            pr.down(q * r, np[i])?;
        }
    }
    for i in 0..m {
        for k in 0..ys.len() {
            let xy = xs[i] * ys[k];
            let xoy = xs[i] / ys[k];
            pr.up(qp(be[k]) * xy, mm[i])?;
            pr.up(q * xoy, mm[i])?;
            pr.up(t * qp(be[k]) * xy, mp[i])?;
            pr.up(t * q * xoy, mp[i])?;
            pr.down(xy, mm[i])?;
            pr.down(qp(1 - be[k]) * xoy, mm[i])?;
            pr.down(t * xy, mp[i])?;
            pr.down(t * qp(1 - be[k]) * xoy, mp[i])?;
        }
    }
    pr.finish("left chain term")
}

/// Chain-independent factor in front of the right multi-sum (without `e(u; .)`).
fn bc_right_prefactor(d: &BcData, p: &ParamPoint) -> Result<Scalar> {
    let (q, t) = (QMono::q(), QMono::t());
    let qp = |k: i64| q.pow(k as i32);
    let (xs, ys, al, be) = (d.xs, d.ys, d.al, d.be);
    let mut pr = Prod::new(p, q);
    for k in 0..ys.len() {
        for a in &d.pars {
            pr.up(*a * ys[k], be[k])?;
        }
        pr.down(ys[k].pow(2), be[k])?;
        pr.down(t * ys[k].pow(2), be[k])?;
        for l in k + 1..ys.len() {
            let yy = ys[k] * ys[l];
            pr.up(qp(be[l]) * yy, be[k])?;
            pr.up(t * qp(be[l]) * yy, be[k])?;
            pr.down(yy, be[k])?;
            pr.down(t * yy, be[k])?;
        }
        for i in 0..xs.len() {
            pr.up(t * ys[k] * xs[i], be[k])?;
            pr.up(qp(-al[i]) * ys[k] / xs[i], be[k])?;
            pr.down(t * qp(al[i]) * ys[k] * xs[i], be[k])?;
            pr.down(ys[k] / xs[i], be[k])?;
        }
    }
    pr.finish("right prefactor")
}

/// One chain `(lambda-, kappa-, kappa+, lambda+)` of the right multi-sum,
/// without the `e(u; .)` factor.
fn bc_right_term(d: &BcData, ch: &Chain, p: &ParamPoint) -> Result<Scalar> {
    let (q, t) = (QMono::q(), QMono::t());
    let qp = |k: i64| q.pow(k as i32);
    let (xs, ys, al, be) = (d.xs, d.ys, d.al, d.be);
    let (lm, km, kp, lp) = (&ch.mu_minus, &ch.nu_minus, &ch.nu_plus, &ch.mu_plus);
    let n = ys.len();
    let mut pr = Prod::new(p, q);
    pr.times(sign(weight(be) + weight(kp) + weight(km)));
    for k in 0..n {
        for a in &d.pars {
            pr.up(ys[k] / *a, km[k])?;
            pr.down(*a * ys[k], kp[k])?;
        }
    }
    for k in 0..n {
        for l in k..n {
            let yy = ys[k] * ys[l];
            pr.up1(qp(lm[k] + lm[l]) * yy / (t * q))?;
            pr.up1(t * qp(lp[k] + lp[l]) * yy / q)?;
            pr.down1(yy / (t * q))?;
            pr.down1(t * yy / q)?;
        }
    }
    for k in 0..n {
        for l in k + 1..n {
            let r = ys[k] / ys[l];
            let yy = ys[k] * ys[l];
            for v in [lm, lp, km, kp] {
                pr.up1(qp(v[k] - v[l]) * r)?;
                pr.down1(r)?;
            }
            pr.up(yy / q, km[k] + km[l])?;
            pr.up(yy / t, km[k] + km[l])?;
            pr.down(t * yy / q, kp[k] + kp[l])?;
            pr.down(yy, kp[k] + kp[l])?;
        }
    }
    for k in 0..n {
        for l in 0..n {
            let yy = ys[k] * ys[l];
            let r = ys[k] / ys[l];
            pr.up1(qp(lm[k] + lp[l]) * yy / q)?;
            pr.up1(qp(km[k] + kp[l]) * yy / q)?;
            pr.up1(qp(lm[k] - lp[l]) * r / t)?;
            pr.up(yy / q, lm[k] + kp[l])?;
            pr.up(t * yy / q, lp[k] + kp[l])?;
            pr.down1(yy / q)?;
            pr.down1(yy / q)?;
            pr.down1(r / (t * qp(lp[l])))?;
            pr.down(yy / t, lm[k] + km[l])?;
            pr.down(yy, lp[k] + km[l])?;

            pr.up(yy / (t * q), lm[k])?;
            pr.up(r / qp(km[l]), lm[k])?;
            pr.up(r / (t * qp(be[l])), lm[k])?;
            pr.up(yy / q, lp[k])?;
            pr.up(r / qp(be[l]), lp[k])?;
            pr.up(q * r / (t * qp(kp[l])), km[k])?;
            pr.up(r / qp(kp[l]), km[k])?;
            pr.down(qp(be[l]) * yy, lm[k])?;
            pr.down(q * r / (t * qp(kp[l])), lm[k])?;
            pr.down(q * r, lm[k])?;
            pr.down(t * qp(be[l]) * yy, lp[k])?;
            pr.down(q * r, lp[k])?;
            pr.down(q * r / (t * qp(lp[l])), km[k])?;
            pr.down(q * r, km[k])?;

            pr.up(r / qp(lp[l]), kp[k])?;
            pr.down(q * r, kp[k])?;
        }
    }
    for k in 0..n {
        for i in 0..xs.len() {
            let yx = ys[k] * xs[i];
            let yox = ys[k] / xs[i];
            pr.up(qp(al[i]) * yx, lm[k])?;
            pr.up(yox / t, lm[k])?;
            pr.up(t * qp(al[i]) * yx, lp[k])?;
            pr.up(yox, lp[k])?;
            pr.down(yx, lm[k])?;
            pr.down(yox / (t * qp(al[i])), lm[k])?;
            pr.down(t * yx, lp[k])?;
            pr.down(qp(-al[i]) * yox, lp[k])?;
        }
    }
    pr.finish("right chain term")
}

/// The three evaluations of the type BC transformation at one point:
/// (left, right, right regrouped by the base-point change).
fn bc_sides(d: &BcData, u: &QMono, p: &ParamPoint) -> Result<(Scalar, Scalar, Scalar)> {
    let (q, t) = (QMono::q(), QMono::t());
    let a0 = alpha_of(&d.pars, &q)?;
    let s = (t * q).sqrt()?;
    let lo = (q / t).sqrt()?;
    let (wa, wb) = (weight(d.al), weight(d.be));

    let mut left = Scalar::zero();
    for ch in chain_enumerate(d.al) {
        let ef = p.ef(u, &(s / a0), &q, weight(&ch.nu_plus) - weight(&ch.nu_minus))?;
        left += ef * bc_left_term(d, &ch, p)?;
    }
    left *= bc_left_prefactor(d, p)?;

    let pre = bc_right_prefactor(d, p)?;
    let outer = p.ef(u, &(s / a0), &q, wa - wb)?;
    let mut right = Scalar::zero();
    let mut regrouped = Scalar::zero();
    for ch in chain_enumerate(d.be) {
        let term = bc_right_term(d, &ch, p)?;
        let kk = weight(&ch.nu_plus) - weight(&ch.nu_minus);
        right += &outer * p.ef(u, &(lo * a0), &q, kk)? * &term;
        let z = t.inv().sqrt()? * q.pow(kk as i32).sqrt()? * a0;
        let w = t.inv().sqrt()? * q.pow((-kk - 2 * wa + 2 * wb) as i32).sqrt()? * a0;
        let mut inner = Scalar::zero();
        for r in 0..=kk {
            let mut f = Frac::one();
            f.mul(p.brf(&q.pow(-kk as i32), &q, r)?);
            f.div(p.brf(&q, &q, r)?);
            f.mul(p.ef(&z, &w, &q, r)?);
            f.mul(p.ef(u, &(s / a0), &q, wa - wb + kk - r)?);
            inner += f.finish("regrouped coefficient")?;
        }
        regrouped += inner * term;
    }
    right *= &pre;
    regrouped *= pre;
    Ok((left, right, regrouped))
}

/// The explicit kernel identity specialized at `x = p_alpha(sqrt(tq) x; q)`,
/// `y = p_beta(y; q)` with parameters `sqrt(tq)/a_i`: returns its two sides.
fn bc_oracle(d: &BcData, u: &QMono, p: &ParamPoint) -> Result<(Scalar, Scalar)> {
    let (q, t) = (QMono::q(), QMono::t());
    let s = (t * q).sqrt()?;
    let xs = principal(d.xs, d.al, &s);
    let ys = principal(d.ys, d.be, &QMono::one());
    let pars = [s / d.pars[0], s / d.pars[1], s / d.pars[2], s / d.pars[3]];
    explicit_kernel_sides(&xs, &ys, &pars, u, p)
}

pub fn verify_transform_bc(alpha: &[i64], beta: &[i64], budget: u128, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(alpha.len() <= 2 && beta.len() <= 2, "type BC transformation needs m, n <= 2")?;
    check_sizes(alpha.iter().chain(beta).all(|&v| (0..=3).contains(&v)), "multi-index entries must lie in 0..=3")?;
    let count = chain_count(alpha) + chain_count(beta);
    if count > budget {
        return Err(QbcError::ChainOverflow(count, budget));
    }
    let (m, n) = (alpha.len(), beta.len());
    let sizes = format!("alpha={},beta={}", fmt_vec(alpha), fmt_vec(beta));
    let mut run = Run::new("transform-bc", "Theorem 3.2", sizes, seed, trials, gens_xy(m, n));
    run.note("residuals per trial: left - right, right - regrouped right, left - specialized kernel left, right - specialized kernel right");
    let (xs, ys, u) = (x_vars(m), y_vars(n), QMono::u());
    let d = BcData { xs: &xs, ys: &ys, al: alpha, be: beta, pars: ParamQuad::standard().abcd() };
    for _ in 0..trials {
        run.trial(|p| {
            let (l, r, g) = bc_sides(&d, &u, p)?;
            let (ol, or) = bc_oracle(&d, &u, p)?;
            Ok(vec![&l - &r, &r - g, l - ol, r - or])
        })?;
    }
    Ok(run.finish())
}

/// Left multi-sum for `n = 0` against its closed product.
pub fn verify_summation_n0(alpha: &[i64], seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(alpha.len() <= 2, "summation needs m <= 2")?;
    check_sizes(alpha.iter().all(|&v| (0..=3).contains(&v)), "multi-index entries must lie in 0..=3")?;
    let m = alpha.len();
    let mut run = Run::new("summation", "Theorem 3.2, n = 0", format!("alpha={}", fmt_vec(alpha)), seed, trials, gens_xy(m, 0));
    let (xs, u) = (x_vars(m), QMono::u());
    let d = BcData { xs: &xs, ys: &[], al: alpha, be: &[], pars: ParamQuad::standard().abcd() };
    let (q, t) = (QMono::q(), QMono::t());
    let qp = |k: i64| q.pow(k as i32);
    for _ in 0..trials {
        run.trial(|p| {
            let a0 = alpha_of(&d.pars, &q)?;
            let s = (t * q).sqrt()?;
            let mut left = Scalar::zero();
            for ch in chain_enumerate(alpha) {
                let ef = p.ef(&u, &(s / a0), &q, weight(&ch.nu_plus) - weight(&ch.nu_minus))?;
                left += ef * bc_left_term(&d, &ch, p)?;
            }
            let mut pr = Prod::new(p, q);
            pr.times(p.ef(&u, &(s / a0), &q, weight(alpha))?);
            for i in 0..m {
                pr.up(t * q * xs[i].pow(2), alpha[i])?;
                pr.up(t.pow(2) * q * xs[i].pow(2), alpha[i])?;
                for a in &d.pars {
                    pr.down(t * q * xs[i] / *a, alpha[i])?;
                }
                for j in i + 1..m {
                    let xx = xs[i] * xs[j];
                    pr.up(t * q * xx, alpha[i])?;
                    pr.up(t.pow(2) * q * xx, alpha[i])?;
                    pr.down(t * qp(alpha[j] + 1) * xx, alpha[i])?;
                    pr.down(t.pow(2) * qp(alpha[j] + 1) * xx, alpha[i])?;
                }
            }
            Ok(vec![left - pr.finish("summation product")?])
        })?;
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// Type C: Milne's product, the collapse lemma, and the transformation.

pub fn milne_residual(xs: &[QMono], lambda: &[i64], p: &ParamPoint) -> Result<Scalar> {
    let q = QMono::q();
    let m = xs.len();
    let mut lhs = Prod::new(p, q);
    let mut rhs = Prod::new(p, q);
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let r = xs[i] / xs[j];
            lhs.up(q * r, lambda[i])?;
            lhs.down(r / q.pow(lambda[j] as i32), lambda[i])?;
            if i < j {
                rhs.up1(q.pow((lambda[i] - lambda[j]) as i32) * r)?;
                rhs.down1(r)?;
            }
        }
    }
    Ok(lhs.finish("Milne left")? - rhs.finish("Milne right")?)
}

pub fn verify_milne(lambda: &[i64], seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(lambda.len() <= 3 && lambda.iter().all(|&v| (0..=4).contains(&v)), "Milne's product needs m <= 3 and entries in 0..=4")?;
    let m = lambda.len();
    let mut gens = vec![Gen::Q];
    gens.extend((0..m).map(Gen::X));
    let mut run = Run::new("milne", "Milne's lemma", format!("lambda={}", fmt_vec(lambda)), seed, trials, gens);
    let xs = x_vars(m);
    for _ in 0..trials {
        run.trial(|p| Ok(vec![milne_residual(&xs, lambda, p)?]))?;
    }
    Ok(run.finish())
}

/// Milne's product identity for every `lambda in {0..=emax}^m`, `1 <= m <= mmax`.
pub fn verify_milne_sweep(mmax: usize, emax: i64, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(mmax <= 3 && (0..=4).contains(&emax), "Milne's product needs m <= 3 and entries in 0..=4")?;
    let mut gens = vec![Gen::Q];
    gens.extend((0..mmax).map(Gen::X));
    let mut run = Run::new("milne", "Milne's lemma", format!("m<={mmax},entries<={emax}"), seed, trials, gens);
    run.note("one residual per multi-index per point");
    for _ in 0..trials {
        run.trial(|p| {
            let mut out = Vec::new();
            for m in 1..=mmax {
                let xs = x_vars(m);
                for lam in box_vectors(&vec![emax; m]) {
                    out.push(milne_residual(&xs, &lam, p)?);
                }
            }
            Ok(out)
        })?;
    }
    Ok(run.finish())
}

type Gauss = Complex<Scalar>;

fn real(s: Scalar) -> Gauss {
    Complex::new(s, Scalar::zero())
}

/// `i^k`.
fn i_pow(k: usize) -> Gauss {
    match k % 4 {
        0 => Complex::new(Scalar::one(), Scalar::zero()),
        1 => Complex::new(Scalar::zero(), Scalar::one()),
        2 => Complex::new(-Scalar::one(), Scalar::zero()),
        _ => Complex::new(Scalar::zero(), -Scalar::one()),
    }
}

/// Which inner sum of the type C specialization to collapse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Collapse {
    /// `sum_J e(u; alpha)_{|I^c|-|J|} prod sqrt(-1) <a x, b x>/<x^2> ...`
    X,
    /// `sum_L e(u; q/alpha)_{|K^c|-|L|} prod -sqrt(-1) <q y/a, q y/b>/<y^2> ...`
    Y,
}

/// Inner sum at `(c, d, t) = (q^(1/2), -q^(1/2), q)` minus `(u + 1/u)^|vars|`,
/// in Gaussian rationals. With `alpha = sqrt(-ab)` the base point satisfies
/// `alpha q^j + 1/(alpha q^j) = sqrt(-1) <ab q^(2j)>`.
pub fn collapse_residual(side: Collapse, vs: &[QMono], u: &QMono, a: &QMono, b: &QMono, p: &ParamPoint) -> Result<Gauss> {
    let q = QMono::q();
    let n = vs.len();
    let uu = p.val(u) + p.val(u).recip();
    let sab = (*a * *b).sqrt()?;
    let e_fact = |l: usize| -> Result<Gauss> {
        let mut acc = real(Scalar::one());
        for j in 0..l as i32 {
            let im = match side {
                Collapse::X => -p.br(&(sab.pow(2) * q.pow(2 * j)))?,
                Collapse::Y => p.br(&(q.pow(2 + 2 * j) / sab.pow(2)))?,
            };
            acc *= Complex::new(uu.clone(), im);
        }
        Ok(acc)
    };
    let all: Vec<usize> = (0..n).collect();
    let mut total = real(Scalar::zero());
    for r in 0..=n {
        let ef = e_fact(n - r)?;
        for jd in signed_subsets(&all, r) {
            let ws: Vec<QMono> = jd.pairs.iter().map(|&(i, e)| signed(&vs[i], e)).collect();
            let inj = jd.indices();
            let mut pr = Prod::new(p, q);
            for w in &ws {
                match side {
                    Collapse::X => {
                        pr.up1(*a * *w)?;
                        pr.up1(*b * *w)?;
                    }
                    Collapse::Y => {
                        pr.up1(q * *w / *a)?;
                        pr.up1(q * *w / *b)?;
                    }
                }
                pr.down1(w.pow(2))?;
                for &j in all.iter().filter(|j| !inj.contains(j)) {
                    for v in [vs[j], vs[j].inv()] {
                        pr.up1(q * *w * v)?;
                        pr.down1(*w * v)?;
                    }
                }
            }
            let unit = match side {
                Collapse::X => i_pow(r),
                Collapse::Y => i_pow(3 * r),
            };
            total += ef.clone() * unit * real(pr.finish("collapse term")?);
        }
    }
    let target = real(pow_scalar(&uu, n as i32));
    Ok(total - target)
}

pub fn verify_lemma_3_1(side: Collapse, size: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(size <= 3, "collapse lemma needs |I^c| <= 3")?;
    let tag = match side {
        Collapse::X => "x",
        Collapse::Y => "y",
    };
    let mut gens = vec![Gen::A, Gen::B, Gen::Q, Gen::U];
    gens.extend((0..size).map(Gen::X));
    let mut run = Run::new("lemma3-1", "Lemma 3.1", format!("side={tag},size={size}"), seed, trials, gens);
    run.note("evaluated in Gaussian rationals; residuals per trial: real part, imaginary part");
    let xs = x_vars(size);
    for _ in 0..trials {
        run.trial(|p| {
            let r = collapse_residual(side, &xs, &QMono::u(), &QMono::a(), &QMono::b(), p)?;
            Ok(vec![r.re, r.im])
        })?;
    }
    Ok(run.finish())
}

/// Both sides of the base-q type C rational identity with sign patterns
/// `eps in {+-1}^m` and `{+-1}^n`.
fn set_c_sides(xs: &[QMono], ys: &[QMono], a: &QMono, b: &QMono, p: &ParamPoint) -> Result<(Scalar, Scalar)> {
    let q = QMono::q();
    let sq = q.sqrt()?;
    let (m, n) = (xs.len(), ys.len());
    // One side: sum over sign patterns of `vs`, with cross factors against `ws`.
    // `plus(v)` and `minus(v)` give the two bracket arguments of the one-variable factor.
    let side = |vs: &[QMono], ws: &[QMono], plus: &dyn Fn(&QMono) -> [QMono; 2], minus: &dyn Fn(&QMono) -> [QMono; 2]| -> Result<Scalar> {
        let k = vs.len();
        let mut total = Scalar::zero();
        for mask in 0..(1usize << k) {
            let pos = |i: usize| mask >> i & 1 == 0;
            let mut pr = Prod::new(p, q);
            for i in 0..k {
                let args = if pos(i) { plus(&vs[i]) } else { minus(&vs[i]) };
                pr.up1(args[0])?;
                pr.up1(args[1])?;
                pr.down1(vs[i].pow(2))?;
                if !pos(i) {
                    pr.times(-Scalar::one());
                }
            }
            for i in 0..k {
                for j in i + 1..k {
                    let vv = vs[i] * vs[j];
                    match (pos(i), pos(j)) {
                        (true, true) => {
                            pr.up1(q * vv)?;
                            pr.down1(vv)?;
                        }
                        (false, false) => {
                            pr.up1(vv / q)?;
                            pr.down1(vv)?;
                        }
                        (true, false) => {
                            pr.up1(q * vs[i] / vs[j])?;
                            pr.down1(vs[i] / vs[j])?;
                        }
                        (false, true) => {
                            pr.up1(q * vs[j] / vs[i])?;
                            pr.down1(vs[j] / vs[i])?;
                        }
                    }
                }
            }
            for i in (0..k).filter(|&i| !pos(i)) {
                for w in ws {
                    for ww in [*w, w.inv()] {
                        pr.up1(sq * vs[i] * ww)?;
                        pr.down1(vs[i] * ww / sq)?;
                    }
                }
            }
            total += pr.finish("type C sign term")?;
        }
        Ok(total)
    };
    let lhs = side(xs, ys, &|x| [*a * *x, *b * *x], &|x| [*x / *a, *x / *b])?;
    let rhs_sum = side(ys, xs, &|y| [sq * *y / *a, sq * *y / *b], &|y| [*a * *y / sq, *b * *y / sq])?;
    let mut pre = Prod::new(p, q);
    pre.up(*a * *b, m as i64)?;
    pre.down(q.pow(1 - m as i32) / (*a * *b), n as i64)?;
    for x in xs {
        for y in ys {
            pre.up1(*y / (sq * *x))?;
            pre.down1(sq * *y / *x)?;
        }
    }
    Ok((lhs, pre.finish("type C prefactor")? * rhs_sum))
}

fn transform_c_sides(xs: &[QMono], ys: &[QMono], al: &[i64], be: &[i64], a1: &QMono, a2: &QMono, p: &ParamPoint) -> Result<(Scalar, Scalar)> {
    let q = QMono::q();
    let qp = |k: i64| q.pow(k as i32);
    let (m, n) = (xs.len(), ys.len());
    let mut lhs = Scalar::zero();
    for mu in box_vectors(al) {
        let mut pr = Prod::new(p, q);
        for i in 0..m {
            pr.up(*a1 * xs[i], mu[i])?;
            pr.up(*a2 * xs[i], mu[i])?;
            pr.down(q * xs[i] / *a1, mu[i])?;
            pr.down(q * xs[i] / *a2, mu[i])?;
            for j in i..m {
                let xx = xs[i] * xs[j];
                pr.up1(qp(mu[i] + mu[j]) * xx)?;
                pr.down1(xx)?;
                if j > i {
                    let r = xs[i] / xs[j];
                    pr.up1(qp(mu[i] - mu[j]) * r)?;
                    pr.down1(r)?;
                }
            }
            for j in 0..m {
                let xx = xs[i] * xs[j];
                let r = xs[i] / xs[j];
                pr.up(xx, mu[i])?;
                pr.up(r / qp(al[j]), mu[i])?;
                pr.down(qp(al[j] + 1) * xx, mu[i])?;
                pr.down(q * r, mu[i])?;
            }
            for k in 0..n {
                pr.up(qp(be[k]) * xs[i] * ys[k], mu[i])?;
                pr.up(q * xs[i] / ys[k], mu[i])?;
                pr.down(xs[i] * ys[k], mu[i])?;
                pr.down(qp(1 - be[k]) * xs[i] / ys[k], mu[i])?;
            }
        }
        lhs += pr.finish("type C left term")?;
    }

    let (wa, wb) = (weight(al), weight(be));
    let mut pre = Prod::new(p, q);
    pre.up(q / (*a1 * *a2), wa)?;
    pre.down(*a1 * *a2 / qp(wa), wb)?;
    for k in 0..n {
        pre.up(*a1 * ys[k], be[k])?;
        pre.up(*a2 * ys[k], be[k])?;
    }
    for i in 0..m {
        pre.down(q * xs[i] / *a1, al[i])?;
        pre.down(q * xs[i] / *a2, al[i])?;
        for j in 0..m {
            pre.up(q * xs[i] * xs[j], al[i])?;
            if i < j {
                pre.down(q * xs[i] * xs[j], al[i] + al[j])?;
            }
        }
    }
    for k in 0..n {
        for l in 0..n {
            if k < l {
                pre.up(ys[k] * ys[l], be[k] + be[l])?;
            }
            pre.down(ys[k] * ys[l], be[k])?;
        }
        for i in 0..m {
            pre.up(ys[k] / (qp(al[i]) * xs[i]), be[k])?;
            pre.down(ys[k] / xs[i], be[k])?;
        }
    }
    let mut rsum = Scalar::zero();
    for nu in box_vectors(be) {
        let mut pr = Prod::new(p, q);
        for k in 0..n {
            pr.up(ys[k] / *a1, nu[k])?;
            pr.up(ys[k] / *a2, nu[k])?;
            pr.down(*a1 * ys[k], nu[k])?;
            pr.down(*a2 * ys[k], nu[k])?;
            for l in k..n {
                let yy = ys[k] * ys[l];
                pr.up1(qp(nu[k] + nu[l]) * yy / q)?;
                pr.down1(yy / q)?;
                if l > k {
                    let r = ys[k] / ys[l];
                    pr.up1(qp(nu[k] - nu[l]) * r)?;
                    pr.down1(r)?;
                }
            }
            for l in 0..n {
                let yy = ys[k] * ys[l];
                let r = ys[k] / ys[l];
                pr.up(yy / q, nu[k])?;
                pr.up(r / qp(be[l]), nu[k])?;
                pr.down(qp(be[l]) * yy, nu[k])?;
                pr.down(q * r, nu[k])?;
            }
            for i in 0..m {
                pr.up(qp(al[i]) * ys[k] * xs[i], nu[k])?;
                pr.up(ys[k] / xs[i], nu[k])?;
                pr.down(ys[k] * xs[i], nu[k])?;
                pr.down(ys[k] / (qp(al[i]) * xs[i]), nu[k])?;
            }
        }
        rsum += pr.finish("type C right term")?;
    }
    Ok((lhs, pre.finish("type C right prefactor")? * rsum))
}

pub fn verify_transform_c(alpha: &[i64], beta: &[i64], seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(alpha.len() <= 3 && beta.len() <= 3, "type C transformation needs m, n <= 3")?;
    check_sizes(alpha.iter().chain(beta).all(|&v| (0..=3).contains(&v)), "multi-index entries must lie in 0..=3")?;
    let (m, n) = (alpha.len(), beta.len());
    let sizes = format!("alpha={},beta={}", fmt_vec(alpha), fmt_vec(beta));
    let mut gens = vec![Gen::A, Gen::B, Gen::Q];
    gens.extend((0..m).map(Gen::X));
    gens.extend((0..n).map(Gen::Y));
    let mut run = Run::new("transform-c", "Theorem 3.3", sizes, seed, trials, gens);
    run.note("residuals per trial: left - right, then the sign-pattern identity at a generic point and at the specialized point");
    let (xs, ys) = (x_vars(m), y_vars(n));
    let (a1, a2) = (QMono::a(), QMono::b());
    let q = QMono::q();
    for _ in 0..trials {
        run.trial(|p| {
            let (l, r) = transform_c_sides(&xs, &ys, alpha, beta, &a1, &a2, p)?;
            let gx = x_vars(weight(alpha) as usize);
            let gy = y_vars(weight(beta) as usize);
            let (gl, gr) = set_c_sides(&gx, &gy, &a1, &a2, p)?;
            let sq = q.sqrt()?;
            let sx = principal(&xs, alpha, &sq);
            let sy = principal(&ys, beta, &QMono::one());
            let (sl, sr) = set_c_sides(&sx, &sy, &(sq / a1), &(sq / a2), p)?;
            Ok(vec![l - r, gl - gr, sl - sr])
        })?;
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// Row-type generating function.

/// Three evaluations of the eigenvalue ratio for `lambda` in the `m x n` box:
/// the Pochhammer product, the cell product, and the `E`-ratio.
pub fn lemma_4_1_routes(lambda: &Partition, m: usize, n: usize, u: &QMono, quad: &ParamQuad, p: &ParamPoint) -> Result<[Scalar; 3]> {
    let (q, t) = (quad.q, quad.t);
    let al = quad.alpha()?;
    let lo = (q / t).sqrt()?;
    let hi = (t * q).sqrt()?;
    let lam = lambda.padded(m);

    let mut poch = Frac::one();
    for i in 1..=m {
        let li = lam[i - 1];
        let tm = t.pow((m - i) as i32);
        let back = t.pow(i as i32 - m as i32) * q.pow(-li as i32) / al;
        poch.mul(crate::scalars::pochhammer(&(lo * *u * al * tm), &q, li as u32, p));
        poch.mul(crate::scalars::pochhammer(&(hi * *u * back), &q, li as u32, p));
        poch.div(crate::scalars::pochhammer(&(hi * *u * al * tm), &q, li as u32, p));
        poch.div(crate::scalars::pochhammer(&(lo * *u * back), &q, li as u32, p));
    }
    let route_a = poch.finish("Pochhammer route")?;

    let mut cells = Prod::new(p, q);
    for i in 1..=m {
        for j in 1..=lam[i - 1] {
            let c = al * t.pow((m - i) as i32) * q.pow((j - 1) as i32);
            for uu in [*u, u.inv()] {
                cells.up1(uu * lo * c)?;
                cells.down1(uu * hi * c)?;
            }
        }
    }
    let route_b = cells.finish("cell route")?;

    let ah = lo * al;
    let star = conjugate_star(lambda, m, n)?.padded(n);
    let mut e = Frac::one();
    e.mul(p.ef(u, &ah, &q, n as i64)?);
    e.div(p.ef(u, &(ah * t.pow(m as i32)), &q, n as i64)?);
    for k in 1..=n {
        let base = ah * q.pow((n - k) as i32);
        e.mul(p.e(u, &(base * t.pow(star[k - 1] as i32))));
        e.div(p.e(u, &base));
    }
    let route_c = e.finish("E-ratio route")?;
    Ok([route_a, route_b, route_c])
}

pub fn verify_lemma_4_1(m: usize, n: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(m <= 3 && n <= 3, "eigenvalue ratio needs m, n <= 3")?;
    let mut run = Run::new("lemma4-1", "Lemma 4.1", format!("m={m},n={n}"), seed, trials, param_gens());
    run.note("every lambda in the box; residuals: Pochhammer - cells, Pochhammer - E-ratio");
    let quad = ParamQuad::standard();
    let u = QMono::u();
    for _ in 0..trials {
        run.trial(|p| {
            let mut out = Vec::new();
            for lam in box_partitions(m, n) {
                let [a, b, c] = lemma_4_1_routes(&lam, m, n, &u, &quad, p)?;
                out.push(&a - b);
                out.push(a - c);
            }
            Ok(out)
        })?;
    }
    Ok(run.finish())
}

/// At `t = q^-k`: `prod_i e(u; q^((1-k)/2) xi_i)_k - sum_l h_l(xi) e(u; sqrt(tq)/alpha)_{km-l}`.
pub fn lemma_4_2_residual(k: usize, xs: &[QMono], u: &QMono, quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let (q, t) = (quad.q, quad.t);
    let m = xs.len();
    let al = quad.alpha()?;
    let shift = q.pow(1 - k as i32).sqrt()?;
    let mut lhs = Scalar::one();
    for x in xs {
        lhs *= p.ef(u, &(shift * *x), &q, k as i64)?;
    }
    let base = (t * q).sqrt()? / al;
    let mut rhs = Scalar::zero();
    for l in 0..=k * m {
        rhs += h_row(l, xs, &al, &q, &t, p)? * p.ef(u, &base, &q, (k * m - l) as i64)?;
    }
    Ok(lhs - rhs)
}

pub fn verify_lemma_4_2(k: usize, m: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(k <= 2 && m <= 2, "truncated identity needs k <= 2 and m <= 2")?;
    let mut run = Run::new("lemma4-2", "Lemma 4.2", format!("k={k},m={m}"), seed, trials, gens_xy(m, 0));
    run.note("t is pinned to q^-k");
    let quad = ParamQuad::standard();
    let (xs, u) = (x_vars(m), QMono::u());
    let pin = |p: &ParamPoint| {
        let mut p = p.clone();
        p.set(Gen::T, pow_scalar(p.root(Gen::Q), -(k as i32)));
        p
    };
    for _ in 0..trials {
        run.trial_with(pin, |p| Ok(vec![lemma_4_2_residual(k, &xs, &u, &quad, p)?]))?;
    }
    Ok(run.finish())
}

/// `(-1)^l H_l^x Psi - sum_s c_s D^_{l-s}^y Psi` at one point.
pub fn h_d_residual(l: usize, m: usize, n: usize, quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let (q, t) = (quad.q, quad.t);
    let psi = dual_cauchy_kernel(m, n);
    let (xs, ys) = (x_vars(m), y_vars(n));
    let joined = |a: &[QMono], b: &[QMono]| -> Vec<QMono> { a.iter().chain(b).copied().collect() };
    let hop = hrow_operator(l, quad, &xs, p)?;
    let lhs = sign(l as i64)
        * hop.apply_with(|s| {
            let sx = crate::qops::shift_point(&xs, s, &q);
            Ok(psi.eval_monos(&joined(&sx, &ys), p))
        })?;
    let hat = quad.hat();
    let al = quad.alpha()?;
    let mut rhs = Scalar::zero();
    for s in 0..=l as i64 {
        let mut c = Prod::new(p, q);
        c.up(q.pow((n - l + 1) as i32), s)?;
        c.down(q, s)?;
        c.up(q.pow(1 - l as i32) / t.pow(m as i32), s)?;
        c.up(t.pow(m as i32 - 1) * q.pow(n as i32) * al.pow(2), s)?;
        let coeff = c.finish("H-D coefficient")?;
        if coeff.is_zero() {
            continue;
        }
        let dop = vandiejen_operator(l - s as usize, &hat, &ys, p)?;
        let val = dop.apply_with(|sh| {
            let sy = crate::qops::shift_point(&ys, sh, &hat.q);
            Ok(psi.eval_monos(&joined(&xs, &sy), p))
        })?;
        rhs += coeff * val;
    }
    Ok(lhs - rhs)
}

pub fn verify_h_d_relation(l: usize, m: usize, n: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(l <= n && n <= 3 && m <= 3, "H-D relation needs l <= n <= 3 and m <= 3")?;
    let mut run = Run::new("h-d-relation", "Theorem 4.4", format!("l={l},m={m},n={n}"), seed, trials, gens_xy(m, n));
    let quad = ParamQuad::standard();
    for _ in 0..trials {
        run.trial(|p| Ok(vec![h_d_residual(l, m, n, &quad, p)?]))?;
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// Koornwinder polynomial checks.

/// Largest partition (in dominance) among the orbit of an exponent vector.
fn exponent_partition(e: &[i32]) -> Partition {
    let mut v: Vec<usize> = e.iter().map(|x| x.unsigned_abs() as usize).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(&v).expect("non-increasing")
}

/// `D_r P = e_r P` for `r <= m`, `H_l P = h_l P` for `l <= lmax`, and
/// triangular support, for every `|lambda| <= size` in `m <= mmax` variables.
pub fn verify_eigen_suite(mmax: usize, size: usize, lmax: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(mmax <= 3 && size <= 6, "eigen suite needs m <= 3 and |lambda| <= 6")?;
    let mut gens = param_gens();
    gens.extend((0..mmax).map(Gen::X));
    let mut run = Run::new("eigen", "Koornwinder eigenfunctions", format!("m<={mmax},|lambda|<={size},l<={lmax}"), seed, trials, gens);
    run.note("per lambda and point: support flag, D_0..D_m residuals, H_0..H_lmax residuals");
    let quad = ParamQuad::standard();
    let mut interp = run.side_sampler("interp");
    for m in 1..=mmax {
        let xs = x_vars(m);
        for lam in partitions_up_to(size, m) {
            let mut triangular_checked = false;
            for _ in 0..trials {
                run.trial(|p| {
                    let k = compute_koornwinder(&lam, m, &quad, p, &mut interp)?;
                    let mut out = Vec::new();
                    let support_ok = k.poly.terms().all(|(e, _)| dominance_leq(&exponent_partition(e), &lam));
                    let top: Vec<i32> = lam.padded(m).iter().map(|&v| v as i32).collect();
                    out.push(flag(support_ok && k.poly.coeff(&top).is_one()));
                    if !triangular_checked {
                        let mat = build_matrix(&lam, m, &quad, p, &mut interp)?;
                        out.push(flag(is_triangular(&mat)));
                        triangular_checked = true;
                    }
                    let val = k.eval(&xs, p);
                    for r in 0..=m {
                        let lhs = vandiejen_apply(r, &k.poly, &quad, &xs, p)?;
                        out.push(lhs - eigenvalue_column(&lam, m, r, &quad, p)? * &val);
                    }
                    for l in 0..=lmax {
                        let lhs = hrow_apply(l, &k.poly, &quad, &xs, p)?;
                        out.push(lhs - eigenvalue_row(&lam, m, l, &quad, p)? * &val);
                    }
                    Ok(out)
                })?;
            }
        }
    }
    Ok(run.finish())
}

pub fn verify_duality(lambdas: &[Partition], m: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(m <= 3 && lambdas.iter().all(|l| l.len() <= m && l.size() <= 6), "duality needs m <= 3 and |lambda| <= 6")?;
    let names: Vec<String> = lambdas.iter().map(|l| l.to_string()).collect();
    let sizes = format!("m={m},set={{{}}}", names.join(";"));
    let mut run = Run::new("duality", "Koornwinder duality", sizes, seed, trials, param_gens());
    run.note("one residual per ordered pair (lambda, mu)");
    let quad = ParamQuad::standard();
    let mut interp = run.side_sampler("interp");
    for _ in 0..trials {
        run.trial(|p| {
            let mut out = Vec::new();
            for lam in lambdas {
                for mu in lambdas {
                    out.push(duality_residual(lam, mu, m, &quad, p, &mut interp)?);
                }
            }
            Ok(out)
        })?;
    }
    Ok(run.finish())
}

pub fn verify_dual_cauchy(m: usize, n: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(m + n <= 4, "dual Cauchy expansion needs m + n <= 4")?;
    let mut run = Run::new("dual-cauchy-expansion", "Dual Cauchy kernel expansion", format!("m={m},n={n}"), seed, trials, param_gens());
    run.note("residuals are the coefficients of the difference polynomial (a single 0 when it vanishes)");
    let quad = ParamQuad::standard();
    let mut interp = run.side_sampler("interp");
    for _ in 0..trials {
        run.trial(|p| {
            let diff = dual_cauchy_residual(m, n, &quad, p, &mut interp)?;
            if diff.is_zero() {
                Ok(vec![Scalar::zero()])
            } else {
                Ok(diff.terms().map(|(_, c)| c.clone()).collect())
            }
        })?;
    }
    Ok(run.finish())
}

/// Row-type Pieri expansion of `h_l(x; a) P_mu(x)`, plus the vanishing of
/// every coefficient whose target leaves the neighbourhood of `mu`.
pub fn verify_pieri(mu: &Partition, m: usize, l: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(m <= 3 && l <= 3 && mu.len() <= m, "Pieri check needs m <= 3, l <= 3 and len(mu) <= m")?;
    let mut gens = param_gens();
    gens.extend((0..m).map(Gen::X));
    let mut run = Run::new("pieri", "Theorem 4.7", format!("mu={mu},m={m},l={l}"), seed, trials, gens);
    run.note("per point: excluded coefficients (must vanish), then the expansion residual");
    let quad = ParamQuad::standard();
    let xs = x_vars(m);
    let mut interp = run.side_sampler("interp");
    for _ in 0..trials {
        run.trial(|p| {
            let coeffs = pieri_coefficients(mu, m, l, &quad, p)?;
            let mut out: Vec<Scalar> = coeffs.excluded.iter().map(|(_, c)| c.clone()).collect();
            let mut polys = BTreeMap::new();
            polys.insert(mu.clone(), compute_koornwinder(mu, m, &quad, p, &mut interp)?);
            for (lam, _) in &coeffs.kept {
                if !polys.contains_key(lam) {
                    polys.insert(lam.clone(), compute_koornwinder(lam, m, &quad, p, &mut interp)?);
                }
            }
            out.push(pieri_residual(mu, l, &coeffs, &polys, &quad, &xs, p)?);
            Ok(out)
        })?;
    }
    Ok(run.finish())
}

/// Interpolation vanishing of `e_r` and `h_l` at `alpha t^rho q^mu`, with
/// one non-vanishing control per degree.
pub fn verify_vanishing(mmax: usize, size: usize, rmax: usize, seed: u64, trials: usize) -> Result<VerificationReport> {
    check_sizes(mmax <= 3 && size <= 6 && rmax <= 3, "vanishing check needs m <= 3, |mu| <= 6, r <= 3")?;
    let mut run = Run::new("vanishing", "Interpolation vanishing", format!("m<={mmax},|mu|<={size},r<={rmax}"), seed, trials, param_gens());
    run.note("controls contribute 0 when the value at the control point is nonzero, 1 otherwise");
    let quad = ParamQuad::standard();
    for _ in 0..trials {
        run.trial(|p| {
            let al = quad.alpha()?;
            let mut out = Vec::new();
            for m in 1..=mmax {
                for r in 1..=rmax {
                    for mu in partitions_up_to(size, m) {
                        let xs = special_point(&al, &mu.padded(m), &quad.t, &quad.q);
                        if r <= m && mu.len() < r {
                            out.push(e_col(r, &xs, &al, &quad.t, p));
                        }
                        if mu.part(0) < r {
                            out.push(h_row(r, &xs, &al, &quad.q, &quad.t, p)?);
                        }
                    }
                    if r <= m {
                        let ctrl = Partition::new(&vec![1; r]).expect("column");
                        let xs = special_point(&al, &ctrl.padded(m), &quad.t, &quad.q);
                        out.push(flag(!e_col(r, &xs, &al, &quad.t, p).is_zero()));
                    }
                    let ctrl = Partition::new(&[r]).expect("row");
                    let xs = special_point(&al, &ctrl.padded(m), &quad.t, &quad.q);
                    out.push(flag(!h_row(r, &xs, &al, &quad.q, &quad.t, p)?.is_zero()));
                }
            }
            Ok(out)
        })?;
    }
    Ok(run.finish())
}
