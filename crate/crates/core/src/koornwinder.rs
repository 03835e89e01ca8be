//! Koornwinder polynomials by a triangular eigenproblem for `D_1`, their
//! eigenvalues, and the duality, dual-Cauchy and row-type Pieri checks.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::combinat::{
    box_partitions, conjugate_star, dominance_leq, dominated_by, e_col, h_row, in_pieri_neighborhood, orbit_sum,
    signed_vectors, special_point, LaurentPoly, Partition,
};
use crate::error::{QbcError, Result};
use crate::linalg::solve;
use crate::qops::{hrow_coeff, vandiejen_operator, ParamQuad};
use crate::scalars::{checked_div, sign, Gen, ParamPoint, QMono, Sampler, Scalar, RETRY_BUDGET};

/// Extra interpolation points used only to certify a solved expansion.
const HELD_OUT: usize = 3;

pub fn x_vars(m: usize) -> Vec<QMono> {
    (0..m).map(QMono::x).collect()
}

pub fn x_gens(m: usize) -> Vec<Gen> {
    (0..m).map(Gen::X).collect()
}

/// `e_r(alpha t^rho q^lambda; alpha | t)`, the eigenvalue of `D_r` on `P_lambda`.
pub fn eigenvalue_column(lambda: &Partition, m: usize, r: usize, quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let al = quad.alpha()?;
    let xs = special_point(&al, &lambda.padded(m), &quad.t, &quad.q);
    Ok(e_col(r, &xs, &al, &quad.t, p))
}

/// `h_l(alpha t^rho q^lambda; alpha | q, t)`, the eigenvalue of `H_l` on `P_lambda`.
pub fn eigenvalue_row(lambda: &Partition, m: usize, l: usize, quad: &ParamQuad, p: &ParamPoint) -> Result<Scalar> {
    let al = quad.alpha()?;
    let xs = special_point(&al, &lambda.padded(m), &quad.t, &quad.q);
    h_row(l, &xs, &al, &quad.q, &quad.t, p)
}

/// `D_1` on the orbit sums `m_mu`, `mu <= lambda`: `D_1 m_mu = sum_nu M[nu][mu] m_nu`.
#[derive(Clone, Debug)]
pub struct KoornwinderBasisMatrix {
    pub basis: Vec<Partition>,
    pub matrix: Vec<Vec<Scalar>>,
}

impl KoornwinderBasisMatrix {
    pub fn entry(&self, nu: &Partition, mu: &Partition) -> Scalar {
        let i = self.basis.iter().position(|b| b == nu).expect("nu in basis");
        let j = self.basis.iter().position(|b| b == mu).expect("mu in basis");
        self.matrix[i][j].clone()
    }
}

/// Expands `D_1 m_mu` over `{m_nu : nu <= lambda}` by interpolation.
///
/// The parameters are read from `p`; only the x fourth roots are resampled
/// for interpolation. The solution is certified at held-out points.
pub fn build_matrix(lambda: &Partition, m: usize, quad: &ParamQuad, p: &ParamPoint, sampler: &mut Sampler) -> Result<KoornwinderBasisMatrix> {
    if lambda.len() > m {
        return Err(QbcError::Invalid(format!("{lambda} has more than {m} parts")));
    }
    let basis = dominated_by(lambda, m);
    let n = basis.len();
    let orbits: Vec<LaurentPoly> = basis.iter().map(|mu| orbit_sum(mu, m)).collect();
    let xs = x_vars(m);

    for _ in 0..=RETRY_BUDGET {
        let (rows, images) = interpolation_data(&orbits, quad, &xs, p, sampler, n + HELD_OUT)?;
        let Some(sol) = solve(rows[..n].to_vec(), images[..n].to_vec()) else {
            continue;
        };
        // sol[nu][mu] = M[nu][mu]
        for k in n..n + HELD_OUT {
            for mu in 0..n {
                let predicted: Scalar = (0..n).map(|nu| &sol[nu][mu] * &rows[k][nu]).sum();
                if predicted != images[k][mu] {
                    return Err(QbcError::NotInSpan(format!("D_1 m_{}", basis[mu])));
                }
            }
        }
        return Ok(KoornwinderBasisMatrix { basis, matrix: sol });
    }
    Err(QbcError::DegenerateSample)
}

type Samples = (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>);

/// Orbit-sum values and `D_1` images at `count` fresh x-points.
fn interpolation_data(orbits: &[LaurentPoly], quad: &ParamQuad, xs: &[QMono], p: &ParamPoint, sampler: &mut Sampler, count: usize) -> Result<Samples> {
    let m = xs.len();
    let mut rows = Vec::with_capacity(count);
    let mut images = Vec::with_capacity(count);
    let mut misses = 0;
    while rows.len() < count {
        let pt = sampler.resample(p, &x_gens(m));
        match d1_images(orbits, quad, xs, &pt) {
            Ok(img) => {
                rows.push(orbits.iter().map(|o| o.eval_monos(xs, &pt)).collect::<Vec<_>>());
                images.push(img);
            }
            Err(e) if e.is_singular() => {
                misses += 1;
                if misses > RETRY_BUDGET * count {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok((rows, images))
}

fn d1_images(orbits: &[LaurentPoly], quad: &ParamQuad, xs: &[QMono], p: &ParamPoint) -> Result<Vec<Scalar>> {
    let op = vandiejen_operator(1, quad, xs, p)?;
    orbits.iter().map(|o| op.apply(o, xs, &quad.q, p)).collect()
}

/// A Koornwinder polynomial at fixed parameter values.
#[derive(Clone, Debug)]
pub struct KoornwinderPoly {
    pub lambda: Partition,
    pub m: usize,
    pub quad: ParamQuad,
    /// Coefficients on `m_mu`, in the basis order of the matrix.
    pub coeffs: Vec<(Partition, Scalar)>,
    pub poly: LaurentPoly,
}

impl KoornwinderPoly {
    pub fn eval(&self, xs: &[QMono], p: &ParamPoint) -> Scalar {
        self.poly.eval_monos(xs, p)
    }
}

/// Solves `(M - E_lambda) c = 0` with `c_lambda = 1` from the top down.
pub fn compute_koornwinder(lambda: &Partition, m: usize, quad: &ParamQuad, p: &ParamPoint, sampler: &mut Sampler) -> Result<KoornwinderPoly> {
    let mat = build_matrix(lambda, m, quad, p, sampler)?;
    let n = mat.basis.len();
    let top = n - 1;
    debug_assert_eq!(&mat.basis[top], lambda);
    let e = mat.matrix[top][top].clone();
    let mut c = vec![Scalar::zero(); n];
    c[top] = Scalar::one();
    for nu in (0..top).rev() {
        let mut rhs = Scalar::zero();
        for mu in nu + 1..n {
            rhs -= &mat.matrix[nu][mu] * &c[mu];
        }
        let diag = &mat.matrix[nu][nu] - &e;
        if diag.is_zero() {
            if rhs.is_zero() {
                continue;
            }
            return Err(QbcError::EigenvalueCollision(mat.basis[nu].to_string(), lambda.to_string()));
        }
        c[nu] = rhs / diag;
    }
    let mut poly = LaurentPoly::zero(m);
    for (mu, cm) in mat.basis.iter().zip(&c) {
        poly = &poly + &orbit_sum(mu, m).scale(cm);
    }
    let coeffs = mat.basis.into_iter().zip(c).collect();
    Ok(KoornwinderPoly { lambda: lambda.clone(), m, quad: *quad, coeffs, poly })
}

/// Checks `P_lambda(a t^rho q^mu)/P_lambda(a t^rho) = P_mu(alpha t^rho q^lambda; dual)/P_mu(alpha t^rho; dual)`.
/// Returns the residual (left minus right).
pub fn duality_residual(lambda: &Partition, mu: &Partition, m: usize, quad: &ParamQuad, p: &ParamPoint, sampler: &mut Sampler) -> Result<Scalar> {
    let pl = compute_koornwinder(lambda, m, quad, p, sampler)?;
    let dual = quad.dual()?;
    let pm = compute_koornwinder(mu, m, &dual, p, sampler)?;
    let a = quad.a;
    let al = quad.alpha()?;
    let zero = vec![0; m];
    let lhs = checked_div(
        pl.eval(&special_point(&a, &mu.padded(m), &quad.t, &quad.q), p),
        pl.eval(&special_point(&a, &zero, &quad.t, &quad.q), p),
        "P_lambda at a t^rho",
    )?;
    let rhs = checked_div(
        pm.eval(&special_point(&al, &lambda.padded(m), &quad.t, &quad.q), p),
        pm.eval(&special_point(&al, &zero, &quad.t, &quad.q), p),
        "dual P_mu at alpha t^rho",
    )?;
    Ok(lhs - rhs)
}

/// `Psi(x; y) = prod e(x_i; y_k)` as a Laurent polynomial in `m + n` variables
/// (x first, then y).
pub fn dual_cauchy_kernel(m: usize, n: usize) -> LaurentPoly {
    let nv = m + n;
    let mut psi = LaurentPoly::one(nv);
    for i in 0..m {
        for k in 0..n {
            let e = &(&LaurentPoly::var(nv, i, 1) + &LaurentPoly::var(nv, i, -1))
                - &(&LaurentPoly::var(nv, m + k, 1) + &LaurentPoly::var(nv, m + k, -1));
            psi = &psi * &e;
        }
    }
    psi
}

/// `sum_{lambda in (n^m)} (-1)^|lambda*| P_lambda(x) P^_{lambda*}(y)` as a Laurent polynomial.
pub fn dual_cauchy_expansion(m: usize, n: usize, quad: &ParamQuad, p: &ParamPoint, sampler: &mut Sampler) -> Result<LaurentPoly> {
    let nv = m + n;
    let hat = quad.hat();
    let mut acc = LaurentPoly::zero(nv);
    for lambda in box_partitions(m, n) {
        let star = conjugate_star(&lambda, m, n)?;
        let px = compute_koornwinder(&lambda, m, quad, p, sampler)?.poly.embed(nv, 0);
        let py = compute_koornwinder(&star, n, &hat, p, sampler)?.poly.embed(nv, m);
        let term = (&px * &py).scale(&sign(star.size() as i64));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Difference of the two sides of the dual-Cauchy expansion (zero on success).
pub fn dual_cauchy_residual(m: usize, n: usize, quad: &ParamQuad, p: &ParamPoint, sampler: &mut Sampler) -> Result<LaurentPoly> {
    let lhs = dual_cauchy_kernel(m, n);
    let rhs = dual_cauchy_expansion(m, n, quad, p, sampler)?;
    Ok(&lhs - &rhs)
}

/// Pieri coefficients `H_nu(alpha t^rho q^mu; dual)` for all `|nu| <= l`,
/// split into those landing in the column neighbourhood of `mu` and the rest.
pub struct PieriCoefficients {
    pub kept: Vec<(Partition, Scalar)>,
    pub excluded: Vec<(Vec<i64>, Scalar)>,
}

pub fn pieri_coefficients(mu: &Partition, m: usize, l: usize, quad: &ParamQuad, p: &ParamPoint) -> Result<PieriCoefficients> {
    let dual = quad.dual()?;
    let al = quad.alpha()?;
    let base = mu.padded(m);
    let xs = special_point(&al, &base, &quad.t, &quad.q);
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    for nu in signed_vectors(m, l) {
        let c = hrow_coeff(l, &nu, &dual, &xs, p)?;
        let target: Vec<i64> = base.iter().zip(&nu).map(|(a, b)| a + b).collect();
        match Partition::from_vec(&target) {
            Some(lam) if in_pieri_neighborhood(&lam, mu) => kept.push((lam, c)),
            _ => excluded.push((nu, c)),
        }
    }
    Ok(PieriCoefficients { kept, excluded })
}

/// Row-type Pieri check at one x-point: returns (left - right).
///
/// Left: `h_l(x; a) P_mu(x) / P_mu(a t^rho)`.
/// Right: `sum H_nu(alpha t^rho q^mu; dual) P_{mu+nu}(x) / P_{mu+nu}(a t^rho)`.
pub fn pieri_residual(
    mu: &Partition,
    l: usize,
    coeffs: &PieriCoefficients,
    polys: &BTreeMap<Partition, KoornwinderPoly>,
    quad: &ParamQuad,
    xs: &[QMono],
    p: &ParamPoint,
) -> Result<Scalar> {
    let m = xs.len();
    let zero = vec![0; m];
    let base = special_point(&quad.a, &zero, &quad.t, &quad.q);
    let norm = |poly: &KoornwinderPoly| -> Result<Scalar> { checked_div(poly.eval(xs, p), poly.eval(&base, p), "P(a t^rho)") };
    let lhs = h_row(l, xs, &quad.a, &quad.q, &quad.t, p)? * norm(&polys[mu])?;
    let mut rhs = Scalar::zero();
    for (lam, c) in &coeffs.kept {
        if c.is_zero() {
            continue;
        }
        rhs += c * norm(&polys[lam])?;
    }
    Ok(lhs - rhs)
}

/// Whether the `D_1` matrix is triangular for dominance: `M[nu][mu] = 0` unless `nu <= mu`.
pub fn is_triangular(mat: &KoornwinderBasisMatrix) -> bool {
    for (i, nu) in mat.basis.iter().enumerate() {
        for (j, mu) in mat.basis.iter().enumerate() {
            if !dominance_leq(nu, mu) && !mat.matrix[i][j].is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{partitions_up_to, w_invariant};
    use crate::qops::{hrow_apply, vandiejen_apply};

    fn part(v: &[usize]) -> Partition {
        Partition::new(v).unwrap()
    }

    #[test]
    fn empty_partition_gives_constant() {
        let quad = ParamQuad::standard();
        let mut s = Sampler::new(1, "k");
        let p = s.point();
        let mat = build_matrix(&Partition::empty(), 2, &quad, &p, &mut s).unwrap();
        assert_eq!(mat.matrix, vec![vec![Scalar::zero()]]);
        let k = compute_koornwinder(&Partition::empty(), 2, &quad, &p, &mut s).unwrap();
        assert_eq!(k.poly, LaurentPoly::one(2));
    }

    #[test]
    fn one_variable_matrix() {
        let quad = ParamQuad::standard();
        let mut s = Sampler::new(2, "k1");
        let p = s.point();
        let lam = part(&[1]);
        let mat = build_matrix(&lam, 1, &quad, &p, &mut s).unwrap();
        assert_eq!(mat.basis.len(), 2);
        assert!(mat.matrix[1][0].is_zero());
        assert!(mat.matrix[0][0].is_zero());
        let al = quad.alpha().unwrap();
        assert_eq!(mat.matrix[1][1], p.e(&(al * quad.q), &al));
    }

    #[test]
    fn triangular_and_eigen() {
        let quad = ParamQuad::standard();
        let mut s = Sampler::new(3, "k2");
        let p = s.point();
        for m in 1..=2 {
            for lam in partitions_up_to(3, m) {
                let mat = build_matrix(&lam, m, &quad, &p, &mut s).unwrap();
                assert!(is_triangular(&mat), "{lam}");
                for (i, mu) in mat.basis.iter().enumerate() {
                    assert_eq!(mat.matrix[i][i], eigenvalue_column(mu, m, 1, &quad, &p).unwrap());
                }
                let k = compute_koornwinder(&lam, m, &quad, &p, &mut s).unwrap();
                assert!(w_invariant(&k.poly));
                let again = compute_koornwinder(&lam, m, &quad, &p, &mut Sampler::new(99, "other")).unwrap();
                assert_eq!(k.coeffs, again.coeffs);
                let xs = x_vars(m);
                for _ in 0..2 {
                    let pt = s.resample(&p, &x_gens(m));
                    let val = k.eval(&xs, &pt);
                    for r in 0..=m {
                        let lhs = vandiejen_apply(r, &k.poly, &quad, &xs, &pt).unwrap();
                        let ev = eigenvalue_column(&lam, m, r, &quad, &pt).unwrap();
                        assert_eq!(lhs, ev * &val, "D_{r} on P_{lam}");
                    }
                    for l in 0..=2 {
                        let lhs = hrow_apply(l, &k.poly, &quad, &xs, &pt).unwrap();
                        let ev = eigenvalue_row(&lam, m, l, &quad, &pt).unwrap();
                        assert_eq!(lhs, ev * &val, "H_{l} on P_{lam}");
                    }
                }
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let quad = ParamQuad::standard();
        let p = Sampler::new(4, "ev").point();
        let e = Partition::empty();
        for m in 1..=3 {
            assert!(eigenvalue_column(&e, m, 0, &quad, &p).unwrap().is_one());
            assert!(eigenvalue_row(&e, m, 0, &quad, &p).unwrap().is_one());
            for r in 1..=m {
                assert!(eigenvalue_column(&e, m, r, &quad, &p).unwrap().is_zero());
                assert!(eigenvalue_row(&e, m, r, &quad, &p).unwrap().is_zero());
            }
        }
        let al = quad.alpha().unwrap();
        let one = part(&[1]);
        assert_eq!(eigenvalue_column(&one, 1, 1, &quad, &p).unwrap(), p.e(&(al * quad.q), &al));
        let want = p.br(&quad.t).unwrap() / p.br(&quad.q).unwrap() * p.e(&(al * quad.q), &al);
        assert_eq!(eigenvalue_row(&one, 1, 1, &quad, &p).unwrap(), want);
    }

    #[test]
    fn duality_small() {
        let quad = ParamQuad::standard();
        let mut s = Sampler::new(5, "dual");
        let p = s.point();
        let cases = [(part(&[]), part(&[])), (part(&[]), part(&[2])), (part(&[1]), part(&[1]))];
        for (l, mu) in cases {
            assert!(duality_residual(&l, &mu, 2, &quad, &p, &mut s).unwrap().is_zero(), "{l} {mu}");
        }
    }

    #[test]
    fn dual_cauchy_small() {
        let quad = ParamQuad::standard();
        let mut s = Sampler::new(6, "dc");
        let p = s.point();
        assert!(dual_cauchy_residual(1, 1, &quad, &p, &mut s).unwrap().is_zero());
        assert!(dual_cauchy_residual(0, 2, &quad, &p, &mut s).unwrap().is_zero());
    }
}
