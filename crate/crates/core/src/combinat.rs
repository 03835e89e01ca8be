//! Partitions, multi-index chains, Laurent polynomials with the hyperoctahedral
//! action, and the column- and row-type interpolation polynomials.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{QbcError, Result};
use crate::scalars::{pow_scalar, ParamPoint, QMono, Scalar};

/// A weakly decreasing list of positive parts; zeros are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn new(parts: &[usize]) -> Result<Partition> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(QbcError::Invalid(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts.iter().copied().filter(|&p| p > 0).collect()))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn padded(&self, m: usize) -> Vec<i64> {
        (0..m).map(|i| self.part(i) as i64).collect()
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.part(0);
        Partition((1..=w).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Builds a partition from a signed vector, failing on negatives or increases.
    pub fn from_vec(v: &[i64]) -> Option<Partition> {
        if v.iter().any(|&x| x < 0) || v.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        Some(Partition(v.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect()))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Partial-sum dominance; unequal weights allowed.
pub fn dominance_leq(mu: &Partition, nu: &Partition) -> bool {
    let m = mu.len().max(nu.len());
    let (mut a, mut b) = (0usize, 0usize);
    for i in 0..m {
        a += mu.part(i);
        b += nu.part(i);
        if a > b {
            return false;
        }
    }
    true
}

/// Partitions with at most `m` parts, each at most `max_part`, of size exactly `size`.
pub fn partitions_of(size: usize, m: usize, max_part: usize) -> Vec<Partition> {
    fn go(rest: usize, slots: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, slots - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(size, m, max_part, &mut Vec::new(), &mut out);
    out
}

/// All partitions with at most `m` parts and size at most `max_size`, by size then lex.
pub fn partitions_up_to(max_size: usize, m: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for s in 0..=max_size {
        let mut level = partitions_of(s, m, s);
        level.sort();
        out.extend(level);
    }
    out
}

/// The partitions `mu <= lambda` with at most `m` parts, in an order that
/// extends dominance (size first, then lexicographic).
pub fn dominated_by(lambda: &Partition, m: usize) -> Vec<Partition> {
    partitions_up_to(lambda.size(), m)
        .into_iter()
        .filter(|mu| dominance_leq(mu, lambda))
        .collect()
}

/// Partitions inside the `m x n` box (at most `m` parts, each at most `n`).
pub fn box_partitions(m: usize, n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for s in 0..=m * n {
        let mut level = partitions_of(s, m, n);
        level.sort();
        out.extend(level);
    }
    out
}

/// `lambda* = (m - lambda'_n, ..., m - lambda'_1)`, the complement of the
/// conjugate inside the `n x m` box.
pub fn conjugate_star(lambda: &Partition, m: usize, n: usize) -> Result<Partition> {
    if lambda.len() > m || lambda.part(0) > n {
        return Err(QbcError::OutOfBox(lambda.to_string(), m, n));
    }
    let c = lambda.conjugate();
    let v: Vec<usize> = (0..n).map(|k| m - c.part(n - 1 - k)).collect();
    Partition::new(&v)
}

/// Whether every column length of `lambda` is within one of that of `mu`.
pub fn in_pieri_neighborhood(lambda: &Partition, mu: &Partition) -> bool {
    let lc = lambda.conjugate();
    let mc = mu.conjugate();
    let cols = lc.len().max(mc.len());
    (0..cols).all(|j| (lc.part(j) as i64 - mc.part(j) as i64).abs() <= 1)
}

/// Partitions `lambda` with at most `m` parts in the column neighbourhood of
/// `mu` and with `sum |lambda_i - mu_i| <= l`.
pub fn pieri_neighborhood(mu: &Partition, m: usize, l: usize) -> Vec<Partition> {
    let base = mu.padded(m);
    signed_vectors(m, l)
        .into_iter()
        .filter_map(|nu| {
            let v: Vec<i64> = base.iter().zip(&nu).map(|(a, b)| a + b).collect();
            Partition::from_vec(&v)
        })
        .filter(|lam| in_pieri_neighborhood(lam, mu))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Vectors in Z^m with `sum |v_i| <= l`, lexicographically ordered.
pub fn signed_vectors(m: usize, l: usize) -> Vec<Vec<i64>> {
    fn go(m: usize, rest: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in -rest..=rest {
            cur.push(v);
            go(m, rest - v.abs(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, l as i64, &mut Vec::new(), &mut out);
    out
}

/// Compositions of `l` into `m` non-negative parts.
pub fn compositions(l: usize, m: usize) -> Vec<Vec<i64>> {
    fn go(m: usize, rest: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() + 1 == m {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=rest {
            cur.push(v);
            go(m, rest - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if l == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(m, l as i64, &mut Vec::new(), &mut out);
    out
}

/// Multi-indices `0 <= v <= bound` componentwise.
pub fn box_vectors(bound: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for v in &out {
            for k in 0..=b {
                let mut w = v.clone();
                w.push(k);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

pub fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn weight(a: &[i64]) -> i64 {
    a.iter().sum()
}

/// A 4-chain `mu_minus <= nu_minus <= nu_plus <= mu_plus` of multi-indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chain {
    pub mu_plus: Vec<i64>,
    pub nu_plus: Vec<i64>,
    pub nu_minus: Vec<i64>,
    pub mu_minus: Vec<i64>,
}

/// Number of 4-chains below `alpha`: `prod C(alpha_i + 4, 4)`.
pub fn chain_count(alpha: &[i64]) -> u128 {
    alpha
        .iter()
        .map(|&a| {
            let a = a as u128;
            (a + 1) * (a + 2) * (a + 3) * (a + 4) / 24
        })
        .product()
}

/// Every 4-chain under `alpha`, ordered lexicographically by
/// `(mu_plus, nu_plus, nu_minus, mu_minus)`.
pub fn chain_enumerate(alpha: &[i64]) -> Vec<Chain> {
    let per_coord: Vec<Vec<[i64; 4]>> = alpha
        .iter()
        .map(|&a| {
            let mut v = Vec::new();
            for d in 0..=a {
                for c in 0..=d {
                    for b in 0..=c {
                        for e in 0..=b {
                            v.push([e, b, c, d]);
                        }
                    }
                }
            }
            v
        })
        .collect();
    let mut out = vec![Chain { mu_plus: vec![], nu_plus: vec![], nu_minus: vec![], mu_minus: vec![] }];
    for coord in &per_coord {
        let mut next = Vec::with_capacity(out.len() * coord.len());
        for ch in &out {
            for t in coord {
                let mut c = ch.clone();
                c.mu_minus.push(t[0]);
                c.nu_minus.push(t[1]);
                c.nu_plus.push(t[2]);
                c.mu_plus.push(t[3]);
                next.push(c);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// A subset `I` of variable indices with a sign on each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSubset {
    pub pairs: Vec<(usize, i32)>,
}

impl SignedSubset {
    pub fn indices(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(i, _)| i).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Shift vector of length `m` with `eps_i` in position `i`.
    pub fn shift(&self, m: usize) -> Vec<i32> {
        let mut v = vec![0; m];
        for &(i, e) in &self.pairs {
            v[i] = e;
        }
        v
    }
}

/// Subsets of `universe` (keeping its order) of size in `sizes`.
pub fn subsets(universe: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = universe.len();
    if size > n {
        return out;
    }
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == size {
            out.push((0..n).filter(|b| mask >> b & 1 == 1).map(|b| universe[b]).collect());
        }
    }
    out
}

/// All signed subsets of `universe` with exactly `size` elements.
pub fn signed_subsets(universe: &[usize], size: usize) -> Vec<SignedSubset> {
    let mut out = Vec::new();
    for s in subsets(universe, size) {
        for signs in 0u32..(1 << size) {
            let pairs = s
                .iter()
                .enumerate()
                .map(|(k, &i)| (i, if signs >> k & 1 == 0 { 1 } else { -1 }))
                .collect();
            out.push(SignedSubset { pairs });
        }
    }
    out
}

pub fn complement(m: usize, set: &[usize]) -> Vec<usize> {
    (0..m).filter(|i| !set.contains(i)).collect()
}

/// A finite Laurent polynomial over the rationals in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Scalar>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> LaurentPoly {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> LaurentPoly {
        LaurentPoly::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> LaurentPoly {
        LaurentPoly::constant(nvars, Scalar::one())
    }

    pub fn monomial(exps: Vec<i32>, c: Scalar) -> LaurentPoly {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// `x_i^k`.
    pub fn var(nvars: usize, i: usize, k: i32) -> LaurentPoly {
        let mut e = vec![0; nvars];
        e[i] = k;
        LaurentPoly::monomial(e, Scalar::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<i32>, c: Scalar) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Applies a signed permutation of variables: variable `i` becomes
    /// `x_{perm[i]}^{signs[i]}`.
    pub fn act(&self, perm: &[usize], signs: &[i32]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.nvars];
            for i in 0..self.nvars {
                ne[perm[i]] += e[i] * signs[i];
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Exact value at the given variable values.
    pub fn eval(&self, xs: &[Scalar]) -> Scalar {
        assert_eq!(xs.len(), self.nvars, "wrong number of variables");
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in xs.iter().zip(e) {
                if k != 0 {
                    t *= pow_scalar(x, k);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_monos(&self, xs: &[QMono], p: &ParamPoint) -> Scalar {
        let vals: Vec<Scalar> = xs.iter().map(|x| p.val(x)).collect();
        self.eval(&vals)
    }

    /// Embeds into `nvars` variables, placing variable `i` at `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            ne[offset..offset + self.nvars].copy_from_slice(e);
            out.terms.insert(ne, c.clone());
        }
        out
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// `m_mu = sum of x^nu over the hyperoctahedral orbit of mu`.
pub fn orbit_sum(mu: &Partition, m: usize) -> LaurentPoly {
    assert!(mu.len() <= m, "partition longer than the number of variables");
    let base: Vec<i32> = mu.padded(m).iter().map(|&v| v as i32).collect();
    let mut orbit = BTreeSet::new();
    for perm in permutations(m) {
        for signs in 0u32..(1 << m) {
            let e: Vec<i32> = (0..m)
                .map(|i| {
                    let v = base[perm[i]];
                    if signs >> i & 1 == 1 {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            orbit.insert(e);
        }
    }
    let mut out = LaurentPoly::zero(m);
    for e in orbit {
        out.terms.insert(e, Scalar::one());
    }
    out
}

pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Invariance under adjacent transpositions and under inverting each variable.
pub fn w_invariant(f: &LaurentPoly) -> bool {
    let m = f.nvars();
    let id: Vec<usize> = (0..m).collect();
    for i in 0..m.saturating_sub(1) {
        let mut perm = id.clone();
        perm.swap(i, i + 1);
        if f.act(&perm, &vec![1; m]) != *f {
            return false;
        }
    }
    for i in 0..m {
        let mut signs = vec![1; m];
        signs[i] = -1;
        if f.act(&id, &signs) != *f {
            return false;
        }
    }
    true
}

/// The point `base * t^(m-i) * q^(mu_i)`, `i = 1..m`.
pub fn special_point(base: &QMono, mu: &[i64], t: &QMono, q: &QMono) -> Vec<QMono> {
    let m = mu.len();
    (0..m)
        .map(|i| *base * t.pow((m - 1 - i) as i32) * q.pow(mu[i] as i32))
        .collect()
}

/// Column interpolation polynomial `e_r(x; alpha | t)`, first form:
/// `sum_{i_1<..<i_r} prod_k e(x_{i_k}; t^(i_k - k) alpha)`.
pub fn e_col(r: usize, xs: &[QMono], alpha: &QMono, t: &QMono, p: &ParamPoint) -> Scalar {
    let m = xs.len();
    let idx: Vec<usize> = (0..m).collect();
    let mut acc = Scalar::zero();
    for s in subsets(&idx, r) {
        let mut term = Scalar::one();
        for (k, &i) in s.iter().enumerate() {
            term *= p.e(&xs[i], &(t.pow((i - k) as i32) * *alpha));
        }
        acc += term;
    }
    acc
}

/// Second form: `sum prod_k e(x_{i_k}; t^(m - i_k - r + k) alpha)` (1-based indices).
pub fn e_col_reversed(r: usize, xs: &[QMono], alpha: &QMono, t: &QMono, p: &ParamPoint) -> Scalar {
    let m = xs.len() as i32;
    let idx: Vec<usize> = (0..xs.len()).collect();
    let mut acc = Scalar::zero();
    for s in subsets(&idx, r) {
        let mut term = Scalar::one();
        for (k, &i) in s.iter().enumerate() {
            let ex = m - (i as i32 + 1) - r as i32 + (k as i32 + 1);
            term *= p.e(&xs[i], &(t.pow(ex) * *alpha));
        }
        acc += term;
    }
    acc
}

/// Whether `e_r` vanishes at `alpha t^rho q^mu`.
pub fn e_col_vanishing_check(r: usize, mu: &Partition, m: usize, alpha: &QMono, t: &QMono, q: &QMono, p: &ParamPoint) -> bool {
    let xs = special_point(alpha, &mu.padded(m), t, q);
    e_col(r, &xs, alpha, t, p).is_zero()
}

/// Row interpolation polynomial `h_l(xi; alpha | q, t)`.
pub fn h_row(l: usize, xs: &[QMono], alpha: &QMono, q: &QMono, t: &QMono, p: &ParamPoint) -> Result<Scalar> {
    let m = xs.len();
    let mut acc = Scalar::zero();
    for nu in compositions(l, m) {
        let mut num = Scalar::one();
        let mut den = Scalar::one();
        let mut base = *alpha;
        for k in 0..m {
            num *= p.brf(t, q, nu[k])?;
            den *= p.brf(q, q, nu[k])?;
            num *= p.ef(&xs[k], &base, q, nu[k])?;
            base = base * *t * q.pow(nu[k] as i32);
        }
        if den.is_zero() {
            return Err(QbcError::Singular("h_row".into()));
        }
        acc += num / den;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Sampler;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p(&[1, 1]), &p(&[2])));
        assert!(!dominance_leq(&p(&[2]), &p(&[1, 1])));
        assert!(dominance_leq(&Partition::empty(), &p(&[3, 1])));
    }

    #[test]
    fn orbit_sum_examples() {
        assert_eq!(orbit_sum(&Partition::empty(), 2), LaurentPoly::one(2));
        let want = &LaurentPoly::var(1, 0, 1) + &LaurentPoly::var(1, 0, -1);
        assert_eq!(orbit_sum(&p(&[1]), 1), want);
        let m2 = orbit_sum(&p(&[1]), 2);
        assert_eq!(m2.terms().count(), 4);
        assert!(m2.coeff(&[0, -1]).is_one());
    }

    #[test]
    fn invariance_examples() {
        for m in 1..=3 {
            for mu in partitions_up_to(3, m) {
                assert!(w_invariant(&orbit_sum(&mu, m)), "{mu}");
            }
        }
        assert!(!w_invariant(&LaurentPoly::var(2, 0, 1)));
        let prod = &orbit_sum(&p(&[1]), 2) * &orbit_sum(&p(&[2, 1]), 2);
        assert!(w_invariant(&prod));
    }

    #[test]
    fn chain_examples() {
        assert_eq!(chain_enumerate(&[0]).len(), 1);
        assert_eq!(chain_enumerate(&[1]).len(), 5);
        assert_eq!(chain_enumerate(&[1, 1]).len(), 25);
        for a in 0..=3 {
            for b in 0..=3 {
                let ch = chain_enumerate(&[a, b]);
                assert_eq!(ch.len() as u128, chain_count(&[a, b]));
                let set: BTreeSet<_> = ch.iter().cloned().collect();
                assert_eq!(set.len(), ch.len());
            }
        }
    }

    #[test]
    fn conjugate_star_examples() {
        assert_eq!(conjugate_star(&Partition::empty(), 2, 2).unwrap(), p(&[2, 2]));
        assert_eq!(conjugate_star(&p(&[2, 2]), 2, 2).unwrap(), Partition::empty());
        assert_eq!(conjugate_star(&p(&[1]), 2, 2).unwrap(), p(&[2, 1]));
        assert!(matches!(conjugate_star(&p(&[3]), 2, 2), Err(QbcError::OutOfBox(..))));
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)] {
            for lam in box_partitions(m, n) {
                let s = conjugate_star(&lam, m, n).unwrap();
                assert_eq!(conjugate_star(&s, n, m).unwrap(), lam);
            }
        }
    }

    #[test]
    fn pieri_neighborhood_examples() {
        assert_eq!(pieri_neighborhood(&Partition::empty(), 1, 1), vec![Partition::empty(), p(&[1])]);
        assert_eq!(pieri_neighborhood(&p(&[1]), 1, 1), vec![Partition::empty(), p(&[1]), p(&[2])]);
        let mu = p(&[2, 1]);
        for lam in pieri_neighborhood(&mu, 3, 3) {
            assert!(in_pieri_neighborhood(&lam, &mu));
        }
        assert!(!in_pieri_neighborhood(&p(&[1, 1]), &Partition::empty()));
    }

    #[test]
    fn e_col_forms_agree_and_vanish() {
        let (alpha, t, q) = (QMono::a(), QMono::t(), QMono::q());
        let mut s = Sampler::new(11, "ecol");
        for _ in 0..10 {
            let pt = s.point();
            for m in 1..=3 {
                let xs: Vec<QMono> = (0..m).map(QMono::x).collect();
                assert!(e_col(0, &xs, &alpha, &t, &pt).is_one());
                for r in 0..=m {
                    assert_eq!(e_col(r, &xs, &alpha, &t, &pt), e_col_reversed(r, &xs, &alpha, &t, &pt));
                }
            }
        }
        let pt = s.point();
        assert!(e_col_vanishing_check(1, &Partition::empty(), 3, &alpha, &t, &q, &pt));
        assert!(e_col_vanishing_check(2, &p(&[3]), 2, &alpha, &t, &q, &pt));
        assert!(!e_col_vanishing_check(1, &p(&[1]), 2, &alpha, &t, &q, &pt));
        let one = [QMono::x(0)];
        assert_eq!(e_col(1, &one, &alpha, &t, &pt), pt.e(&one[0], &alpha));
    }

    #[test]
    fn h_row_examples() {
        let (alpha, t, q) = (QMono::a(), QMono::t(), QMono::q());
        let pt = Sampler::new(12, "hrow").point();
        let xs = [QMono::x(0)];
        assert!(h_row(0, &xs, &alpha, &q, &t, &pt).unwrap().is_one());
        let want = pt.br(&t).unwrap() / pt.br(&q).unwrap() * pt.e(&xs[0], &alpha);
        assert_eq!(h_row(1, &xs, &alpha, &q, &t, &pt).unwrap(), want);
        let sp = special_point(&alpha, &[1, 0], &t, &q);
        assert!(h_row(2, &sp, &alpha, &q, &t, &pt).unwrap().is_zero());
    }
}
