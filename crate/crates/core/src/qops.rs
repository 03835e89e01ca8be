//! Van Diejen's q-difference operators, their generating function, the
//! kernel-conjugated actions, and the row-type operators `H_l`.
//!
//! Operators are never built symbolically. At a fixed point `x` each one
//! expands into a finite list of `(coefficient, shift)` pairs, and applying
//! it to a function means summing coefficients times shifted values.

use num_traits::{One, Zero};

use crate::combinat::{box_vectors, complement, signed_subsets, signed_vectors, LaurentPoly, SignedSubset};
use crate::error::{QbcError, Result};
use crate::scalars::{sign, Frac, ParamPoint, QMono, Scalar};

/// The parameters `(a, b, c, d)` together with the shift base `q` and `t`.
///
/// Swapping `q` and `t` (see [`ParamQuad::hat`]) gives the operators whose
/// shifts are in `t`, so every formula reads the two roles from here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamQuad {
    pub a: QMono,
    pub b: QMono,
    pub c: QMono,
    pub d: QMono,
    pub q: QMono,
    pub t: QMono,
}

impl Default for ParamQuad {
    fn default() -> Self {
        ParamQuad::standard()
    }
}

impl ParamQuad {
    pub fn standard() -> ParamQuad {
        ParamQuad { a: QMono::a(), b: QMono::b(), c: QMono::c(), d: QMono::d(), q: QMono::q(), t: QMono::t() }
    }

    /// `alpha = sqrt(abcd/q)`.
    pub fn alpha(&self) -> Result<QMono> {
        (self.a * self.b * self.c * self.d / self.q).sqrt()
    }

    /// `(a,b,c,d) -> (sqrt(tq)/a, ...)`; the new alpha is `t/alpha`.
    pub fn tilde(&self) -> Result<ParamQuad> {
        let s = (self.t * self.q).sqrt()?;
        Ok(ParamQuad { a: s / self.a, b: s / self.b, c: s / self.c, d: s / self.d, ..*self })
    }

    /// Swaps the roles of `q` and `t`.
    pub fn hat(&self) -> ParamQuad {
        ParamQuad { q: self.t, t: self.q, ..*self }
    }

    /// `(alpha, ab/alpha, ac/alpha, ad/alpha)`.
    pub fn dual(&self) -> Result<ParamQuad> {
        let al = self.alpha()?;
        Ok(ParamQuad { a: al, b: self.a * self.b / al, c: self.a * self.c / al, d: self.a * self.d / al, ..*self })
    }

    pub fn abcd(&self) -> [QMono; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Anything that can be evaluated at a point given by variable monomials.
pub trait Evaluable {
    fn eval_at(&self, xs: &[QMono], p: &ParamPoint) -> Result<Scalar>;
}

impl Evaluable for LaurentPoly {
    fn eval_at(&self, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
        Ok(self.eval_monos(xs, p))
    }
}

impl<F> Evaluable for F
where
    F: Fn(&[QMono], &ParamPoint) -> Result<Scalar>,
{
    fn eval_at(&self, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
        self(xs, p)
    }
}

/// `xs` with `x_i` multiplied by `base^shift_i`.
pub fn shift_point(xs: &[QMono], shift: &[i32], base: &QMono) -> Vec<QMono> {
    xs.iter().zip(shift).map(|(x, &k)| *x * base.pow(k)).collect()
}

/// An operator expanded at a fixed point: a sum of coefficients times shifts.
#[derive(Clone, Debug, Default)]
pub struct PointOperator {
    pub terms: Vec<(Scalar, Vec<i32>)>,
}

impl PointOperator {
    pub fn apply(&self, f: &dyn Evaluable, xs: &[QMono], base: &QMono, p: &ParamPoint) -> Result<Scalar> {
        self.apply_with(|shift| f.eval_at(&shift_point(xs, shift, base), p))
    }

    /// Sums `coefficient * g(shift)` for an arbitrary per-shift value.
    pub fn apply_with<G>(&self, mut g: G) -> Result<Scalar>
    where
        G: FnMut(&[i32]) -> Result<Scalar>,
    {
        let mut acc = Scalar::zero();
        for (c, s) in &self.terms {
            if c.is_zero() {
                continue;
            }
            acc += c * g(s)?;
        }
        Ok(acc)
    }
}

/// `w(z) = <az, bz, cz, dz> / <z^2, q z^2>`.
pub fn w_weight(z: &QMono, quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let mut f = Frac::one();
    for par in quad.abcd() {
        f.mul(p.br(&(par * *z))?);
    }
    let z2 = z.pow(2);
    f.div(p.br(&z2)?).div(p.br(&(quad.q * z2))?);
    f.finish("w(z)")
}

/// `v(z) = <tz> / <z>`.
pub fn v_weight(z: &QMono, quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let mut f = Frac::one();
    f.mul(p.br(&(quad.t * *z))?).div(p.br(z)?);
    f.finish("v(z)")
}

fn signed_pow(x: &QMono, e: i32) -> QMono {
    if e >= 0 {
        *x
    } else {
        x.inv()
    }
}

/// `V_{eps I, J}(x)`.
pub fn v_coeff(ieps: &SignedSubset, j: &[usize], quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    let mut acc = Scalar::one();
    let zs: Vec<QMono> = ieps.pairs.iter().map(|&(i, e)| signed_pow(&xs[i], e)).collect();
    for z in &zs {
        acc *= w_weight(z, quad, p)?;
    }
    for a in 0..zs.len() {
        for b in a + 1..zs.len() {
            let zz = zs[a] * zs[b];
            acc *= v_weight(&zz, quad, p)?;
            acc *= v_weight(&(quad.q * zz), quad, p)?;
        }
    }
    for z in &zs {
        for &jj in j {
            acc *= v_weight(&(*z * xs[jj]), quad, p)?;
            acc *= v_weight(&(*z / xs[jj]), quad, p)?;
        }
    }
    Ok(acc)
}

/// The product shared by `U_{J,r}` and `U_J(u)` for one signed subset `I` of `J`.
fn u_product(ideltas: &SignedSubset, j: &[usize], quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    let mut acc = Scalar::one();
    let zs: Vec<QMono> = ideltas.pairs.iter().map(|&(i, e)| signed_pow(&xs[i], e)).collect();
    for z in &zs {
        acc *= w_weight(z, quad, p)?;
    }
    for a in 0..zs.len() {
        for b in a + 1..zs.len() {
            let zz = zs[a] * zs[b];
            acc *= v_weight(&zz, quad, p)?;
            acc *= v_weight(&(zz.inv() / quad.q), quad, p)?;
        }
    }
    let inside = ideltas.indices();
    for z in &zs {
        for &jj in j.iter().filter(|k| !inside.contains(k)) {
            acc *= v_weight(&(*z * xs[jj]), quad, p)?;
            acc *= v_weight(&(*z / xs[jj]), quad, p)?;
        }
    }
    Ok(acc)
}

/// `U_{J,r}(x)`, the signed sum over signed `r`-subsets of `J`.
pub fn u_coeff(j: &[usize], r: usize, quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for s in signed_subsets(j, r) {
        acc += u_product(&s, j, quad, xs, p)?;
    }
    Ok(sign(r as i64) * acc)
}

/// `U_J(u; x) = sum_{I, delta} e(u; alpha)_{t, |J|-|I|} prod(...)`.
pub fn u_gen(j: &[usize], u: &QMono, quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    let alpha = quad.alpha()?;
    let mut acc = Scalar::zero();
    for r in 0..=j.len() {
        let ef = p.ef(u, &alpha, &quad.t, (j.len() - r) as i64)?;
        for s in signed_subsets(j, r) {
            acc += &ef * u_product(&s, j, quad, xs, p)?;
        }
    }
    Ok(acc)
}

/// `D_r` expanded at `xs`.
pub fn vandiejen_operator(r: usize, quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<PointOperator> {
    let m = xs.len();
    let all: Vec<usize> = (0..m).collect();
    let mut terms = Vec::new();
    for k in 0..=r.min(m) {
        for ieps in signed_subsets(&all, k) {
            let jc = complement(m, &ieps.indices());
            if r - k > jc.len() {
                continue;
            }
            let c = v_coeff(&ieps, &jc, quad, xs, p)? * u_coeff(&jc, r - k, quad, xs, p)?;
            terms.push((c, ieps.shift(m)));
        }
    }
    Ok(PointOperator { terms })
}

/// The generating function `D(u) = sum_r (-1)^r D_r e(u; alpha)_{t, m-r}` in
/// its subset expansion `sum_{I, eps} (-1)^|I| V U_{I^c}(u) T`.
pub fn dgen_operator(u: &QMono, quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<PointOperator> {
    let m = xs.len();
    let all: Vec<usize> = (0..m).collect();
    let mut terms = Vec::new();
    for k in 0..=m {
        for ieps in signed_subsets(&all, k) {
            let jc = complement(m, &ieps.indices());
            let c = sign(k as i64) * v_coeff(&ieps, &jc, quad, xs, p)? * u_gen(&jc, u, quad, xs, p)?;
            terms.push((c, ieps.shift(m)));
        }
    }
    Ok(PointOperator { terms })
}

pub fn vandiejen_apply(r: usize, f: &dyn Evaluable, quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    vandiejen_operator(r, quad, xs, p)?.apply(f, xs, &quad.q, p)
}

pub fn dgen_apply(u: &QMono, f: &dyn Evaluable, quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    dgen_operator(u, quad, xs, p)?.apply(f, xs, &quad.q, p)
}

/// `D(u) f` computed as the `r`-sum of `D_r f`.
pub fn dgen_apply_by_degree(u: &QMono, f: &dyn Evaluable, quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    let m = xs.len();
    let alpha = quad.alpha()?;
    let mut acc = Scalar::zero();
    for r in 0..=m {
        let ef = p.ef(u, &alpha, &quad.t, (m - r) as i64)?;
        acc += sign(r as i64) * vandiejen_apply(r, f, quad, xs, p)? * ef;
    }
    Ok(acc)
}

/// `F(z; w) = prod e(sqrt(q/t) z_i; w_k) / e(sqrt(tq) z_i; w_k)`.
pub fn f_ratio(zs: &[QMono], ws: &[QMono], quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let lo = (quad.q / quad.t).sqrt()?;
    let hi = (quad.q * quad.t).sqrt()?;
    let mut f = Frac::one();
    for z in zs {
        for w in ws {
            f.mul(p.e(&(lo * *z), w)).div(p.e(&(hi * *z), w));
        }
    }
    f.finish("F(z;w)")
}

/// The kernel factor `Phi^{-1} T^{(I,eps)} Phi`, i.e. `F(x_I^eps; y)`.
fn kernel_shift_factor(shift: &[i32], xs: &[QMono], ys: &[QMono], quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let zs: Vec<QMono> = shift
        .iter()
        .zip(xs)
        .filter(|(&s, _)| s != 0)
        .map(|(&s, x)| signed_pow(x, s))
        .collect();
    f_ratio(&zs, ys, quad, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

/// `Phi^{-1} D^x(u) Phi` at `(x, y)` (side X), or `Phi^{-1} D~^y(u) Phi` with
/// the tilde parameters and the roles of `x` and `y` exchanged (side Y).
pub fn conjugated_dgen(u: &QMono, xs: &[QMono], ys: &[QMono], quad: &ParamQuad, side: Side, p: &ParamPoint) -> Result<Scalar> {
    let (xs, ys, quad) = match side {
        Side::X => (xs, ys, *quad),
        Side::Y => (ys, xs, quad.tilde()?),
    };
    dgen_operator(u, &quad, xs, p)?.apply_with(|s| kernel_shift_factor(s, xs, ys, &quad, p))
}

/// `Phi^{-1} D_r^x Phi` at `(x, y)`.
pub fn conjugated_vandiejen(r: usize, xs: &[QMono], ys: &[QMono], quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    vandiejen_operator(r, quad, xs, p)?.apply_with(|s| kernel_shift_factor(s, xs, ys, quad, p))
}

/// `H^{(l)}_nu(x)` for `nu` in `Z^m` with `sum |nu_i| <= l`.
///
/// Negative entries invert the corresponding variable and use `|nu_i|`.
pub fn hrow_coeff(l: usize, nu: &[i64], quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    let (abs, ys) = unsign(nu, xs);
    hrow_coeff_natural(l, &abs, quad, &ys, p)
}

/// Closed product valid when `sum |nu_i| = l`.
pub fn hrow_coeff_top(nu: &[i64], quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    let (nu, xs) = unsign(nu, xs);
    let m = xs.len();
    let q = quad.q;
    let t = quad.t;
    let mut f = Frac::one();
    for i in 0..m {
        for par in quad.abcd() {
            f.mul(p.brf(&(par * xs[i]), &q, nu[i])?);
        }
        f.div(p.brf(&xs[i].pow(2), &q, 2 * nu[i])?);
    }
    for i in 0..m {
        for j in i + 1..m {
            let xx = xs[i] * xs[j];
            let r = xs[i] / xs[j];
            f.mul(p.brf(&(t * xx), &q, nu[i] + nu[j])?);
            f.mul(p.br(&(q.pow((nu[i] - nu[j]) as i32) * r))?);
            f.div(p.brf(&xx, &q, nu[i] + nu[j])?);
            f.div(p.br(&r)?);
        }
    }
    for i in 0..m {
        for j in 0..m {
            let r = xs[i] / xs[j];
            f.mul(p.brf(&(t * r), &q, nu[i])?);
            f.div(p.brf(&(q * r), &q, nu[i])?);
        }
    }
    f.finish("H coefficient (top)")
}

fn unsign(nu: &[i64], xs: &[QMono]) -> (Vec<i64>, Vec<QMono>) {
    let abs = nu.iter().map(|v| v.abs()).collect();
    let ys = nu.iter().zip(xs).map(|(&v, x)| if v < 0 { x.inv() } else { *x }).collect();
    (abs, ys)
}

/// The double sum over `nu <= nu+` and `nu-` for `nu` in `N^m`.
fn hrow_coeff_natural(l: usize, nu: &[i64], quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    let m = xs.len();
    let l = l as i64;
    let wt: i64 = nu.iter().sum();
    if wt > l {
        return Err(QbcError::Invalid(format!("|nu| = {wt} exceeds l = {l}")));
    }
    let mut acc = Scalar::zero();
    for np in box_vectors(&vec![l; m]) {
        let wp: i64 = np.iter().sum();
        if wp > l || wp < wt || np.iter().zip(nu).any(|(a, b)| a < b) {
            continue;
        }
        let caps: Vec<i64> = np.iter().map(|v| l - v).collect();
        for nm in box_vectors(&caps) {
            if nm.iter().sum::<i64>() != l - wp {
                continue;
            }
            acc += hrow_term(l, nu, &np, &nm, quad, xs, p)?;
        }
    }
    Ok(acc)
}

fn hrow_term(l: i64, nu: &[i64], np: &[i64], nm: &[i64], quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    let m = xs.len();
    let q = quad.q;
    let t = quad.t;
    let qp = |k: i64| q.pow(k as i32);
    let bf = |z: QMono, k: i64| p.brf(&z, &q, k);
    let mut f = Frac::one();
    f.mul(sign(l));
    for i in 0..m {
        let x = xs[i];
        for par in quad.abcd() {
            f.mul(bf(par * x, np[i])?);
            f.mul(bf(par / x, nm[i])?);
        }
        f.div(bf(x.pow(2), nu[i] + np[i])?);
        f.div(bf(x.pow(-2), nu[i] + nm[i])?);
    }
    for i in 0..m {
        for j in i..m {
            let xx = xs[i] * xs[j];
            f.mul(p.br(&(qp(nu[i] + nu[j]) * xx))?);
            f.div(p.br(&xx)?);
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            let r = xs[i] / xs[j];
            let xx = xs[i] * xs[j];
            f.mul(p.br(&(qp(nu[i] - nu[j]) * r))?);
            f.mul(p.br(&(qp(np[i] - np[j]) * r))?);
            f.mul(p.br(&(qp(nm[j] - nm[i]) * r))?);
            let br = p.br(&r)?;
            f.div(br.clone() * &br * &br);
            f.mul(bf(t * xx, np[i] + np[j])?);
            f.mul(bf(q * xx, np[i] + np[j])?);
            f.mul(bf(t / xx, nm[i] + nm[j])?);
            f.mul(bf(q / xx, nm[i] + nm[j])?);
            f.div(bf(xx, nu[i] + np[j])?);
            f.div(bf(xx, np[i] + nu[j])?);
            f.div(bf(xx.inv(), nu[i] + nm[j])?);
            f.div(bf(xx.inv(), nm[i] + nu[j])?);
        }
    }
    for i in 0..m {
        for j in 0..m {
            let xx = xs[i] * xs[j];
            let r = xs[i] / xs[j];
            f.mul(p.br(&(qp(np[i] - nm[j]) * xx))?);
            f.mul(p.br(&xx.inv())?);
            f.div(p.br(&(qp(nu[i] + np[j]) * xx))?);
            f.div(p.br(&(qp(nu[i] + nm[j]) / xx))?);

            f.mul(bf(qp(-np[j]) * r, nu[i])?);
            f.mul(bf(t * r, np[i])?);
            f.mul(bf(qp(np[j] + 1) / r, nm[i])?);
            f.mul(bf(t * qp(np[j]) / r, nm[i])?);
            f.mul(bf(xx, nu[i])?);
            f.mul(bf(qp(nm[j] + 1) / xx, nu[i])?);
            f.div(bf(q * r, nu[i])?);
            f.div(bf(q * r, np[i])?);
            f.div(bf(q / r, nm[i])?);
            f.div(bf(qp(nu[j] + 1) / r, nm[i])?);
            f.div(bf(q * xx, np[i])?);
            f.div(bf(qp(1 - nu[j]) / xx, nm[i])?);
        }
    }
    f.finish("H coefficient")
}

/// `H_l` expanded at `xs`: `sum_{nu in Z^m, |nu| <= l} H_nu(x) T^nu`.
pub fn hrow_operator(l: usize, quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<PointOperator> {
    let mut terms = Vec::new();
    for nu in signed_vectors(xs.len(), l) {
        let c = hrow_coeff(l, &nu, quad, xs, p)?;
        terms.push((c, nu.iter().map(|&v| v as i32).collect()));
    }
    Ok(PointOperator { terms })
}

pub fn hrow_apply(l: usize, f: &dyn Evaluable, quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Scalar> {
    hrow_operator(l, quad, xs, p)?.apply(f, xs, &quad.q, p)
}
