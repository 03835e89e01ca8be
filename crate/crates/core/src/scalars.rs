//! Exact rationals, monomials with quarter-integer exponents, and the
//! bracket / shifted-factorial kernel every formula is evaluated in.
//!
//! Fractional powers are made concrete by giving each generator a positive
//! rational fourth root. A [`QMono`] stores exponents in quarter units, so
//! `sqrt(t*q)` or `sqrt(a*b*c*d/q)` evaluate to exact rationals.

use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QbcError, Result};

pub type Scalar = BigRational;

/// Largest number of x (and of y) variables a session can address.
pub const MAX_VARS: usize = 8;
/// Total number of generator slots: a, b, c, d, q, t, u, x_1.., y_1..
pub const NGEN: usize = 7 + 2 * MAX_VARS;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q` rendering that keeps the denominator even when it is 1.
pub fn fmt_scalar(s: &Scalar) -> String {
    format!("{}/{}", s.numer(), s.denom())
}

pub fn sign(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Zero-indexed variable indices: `X(0)` is x_1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    A,
    B,
    C,
    D,
    Q,
    T,
    U,
    X(usize),
    Y(usize),
}

impl Gen {
    pub fn slot(self) -> usize {
        match self {
            Gen::A => 0,
            Gen::B => 1,
            Gen::C => 2,
            Gen::D => 3,
            Gen::Q => 4,
            Gen::T => 5,
            Gen::U => 6,
            Gen::X(i) => {
                assert!(i < MAX_VARS, "x index {i} out of range");
                7 + i
            }
            Gen::Y(k) => {
                assert!(k < MAX_VARS, "y index {k} out of range");
                7 + MAX_VARS + k
            }
        }
    }

    pub fn from_slot(s: usize) -> Gen {
        match s {
            0 => Gen::A,
            1 => Gen::B,
            2 => Gen::C,
            3 => Gen::D,
            4 => Gen::Q,
            5 => Gen::T,
            6 => Gen::U,
            s if s < 7 + MAX_VARS => Gen::X(s - 7),
            s => Gen::Y(s - 7 - MAX_VARS),
        }
    }

    pub fn all() -> impl Iterator<Item = Gen> {
        (0..NGEN).map(Gen::from_slot)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::A => write!(f, "a"),
            Gen::B => write!(f, "b"),
            Gen::C => write!(f, "c"),
            Gen::D => write!(f, "d"),
            Gen::Q => write!(f, "q"),
            Gen::T => write!(f, "t"),
            Gen::U => write!(f, "u"),
            Gen::X(i) => write!(f, "x{}", i + 1),
            Gen::Y(k) => write!(f, "y{}", k + 1),
        }
    }
}

/// A formal monomial in the generators. Exponent `n` in a slot means power `n/4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMono([i32; NGEN]);

impl Default for QMono {
    fn default() -> Self {
        QMono::one()
    }
}

impl QMono {
    pub fn one() -> QMono {
        QMono([0; NGEN])
    }

    /// The generator itself (integer power 1).
    pub fn gen(g: Gen) -> QMono {
        QMono::quarters(g, 4)
    }

    pub fn quarters(g: Gen, n: i32) -> QMono {
        let mut e = [0; NGEN];
        e[g.slot()] = n;
        QMono(e)
    }

    pub fn a() -> QMono {
        QMono::gen(Gen::A)
    }
    pub fn b() -> QMono {
        QMono::gen(Gen::B)
    }
    pub fn c() -> QMono {
        QMono::gen(Gen::C)
    }
    pub fn d() -> QMono {
        QMono::gen(Gen::D)
    }
    pub fn q() -> QMono {
        QMono::gen(Gen::Q)
    }
    pub fn t() -> QMono {
        QMono::gen(Gen::T)
    }
    pub fn u() -> QMono {
        QMono::gen(Gen::U)
    }
    pub fn x(i: usize) -> QMono {
        QMono::gen(Gen::X(i))
    }
    pub fn y(k: usize) -> QMono {
        QMono::gen(Gen::Y(k))
    }

    pub fn exponent_quarters(&self, g: Gen) -> i32 {
        self.0[g.slot()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&n| n == 0)
    }

    pub fn inv(&self) -> QMono {
        let mut e = self.0;
        for n in e.iter_mut() {
            *n = -*n;
        }
        QMono(e)
    }

    pub fn pow(&self, k: i32) -> QMono {
        let mut e = self.0;
        for n in e.iter_mut() {
            *n *= k;
        }
        QMono(e)
    }

    /// Halves every exponent; fails when an exponent would leave the quarter lattice.
    pub fn sqrt(&self) -> Result<QMono> {
        let mut e = self.0;
        for n in e.iter_mut() {
            if *n % 2 != 0 {
                return Err(QbcError::Granularity(format!("sqrt({self})")));
            }
            *n /= 2;
        }
        Ok(QMono(e))
    }

    /// Replaces every occurrence of generator `g` by the monomial `by`.
    /// `by` must have exponents divisible by 4 unless the exponent of `g` is a multiple of 4.
    pub fn substitute(&self, g: Gen, by: &QMono) -> Result<QMono> {
        let n = self.0[g.slot()];
        let mut e = self.0;
        e[g.slot()] = 0;
        for (slot, &b) in by.0.iter().enumerate() {
            let prod = n * b;
            if prod % 4 != 0 {
                return Err(QbcError::Granularity(format!("substituting {by} for {g} in {self}")));
            }
            e[slot] += prod / 4;
        }
        Ok(QMono(e))
    }
}

impl Mul for QMono {
    type Output = QMono;
    fn mul(self, rhs: QMono) -> QMono {
        let mut e = self.0;
        for (n, r) in e.iter_mut().zip(rhs.0) {
            *n += r;
        }
        QMono(e)
    }
}

impl Div for QMono {
    type Output = QMono;
    fn div(self, rhs: QMono) -> QMono {
        self * rhs.inv()
    }
}

impl fmt::Display for QMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (slot, &n) in self.0.iter().enumerate() {
            if n == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let g = Gen::from_slot(slot);
            if n == 4 {
                write!(f, "{g}")?;
            } else if n % 4 == 0 {
                write!(f, "{g}^{}", n / 4)?;
            } else {
                write!(f, "{g}^({n}/4)")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMono({self})")
    }
}

/// Positive rational fourth roots for every generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamPoint {
    roots: Vec<Scalar>,
}

impl Default for ParamPoint {
    fn default() -> Self {
        ParamPoint::new()
    }
}

impl ParamPoint {
    /// Every fourth root set to 1.
    pub fn new() -> ParamPoint {
        ParamPoint { roots: vec![Scalar::one(); NGEN] }
    }

    pub fn with(mut self, g: Gen, root: Scalar) -> ParamPoint {
        self.set(g, root);
        self
    }

    pub fn set(&mut self, g: Gen, root: Scalar) {
        assert!(root.is_positive(), "fourth roots must be positive");
        self.roots[g.slot()] = root;
    }

    pub fn root(&self, g: Gen) -> &Scalar {
        &self.roots[g.slot()]
    }

    /// Exact value of a monomial: a product of integer powers of fourth roots.
    pub fn val(&self, z: &QMono) -> Scalar {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (slot, &n) in z.0.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let r = &self.roots[slot];
            let k = n.unsigned_abs();
            if n > 0 {
                num *= num_traits::pow(r.numer().clone(), k as usize);
                den *= num_traits::pow(r.denom().clone(), k as usize);
            } else {
                num *= num_traits::pow(r.denom().clone(), k as usize);
                den *= num_traits::pow(r.numer().clone(), k as usize);
            }
        }
        Scalar::new(num, den)
    }

    pub fn br(&self, z: &QMono) -> Result<Scalar> {
        bracket(z, self)
    }

    /// Product of brackets over a list of arguments.
    pub fn brs(&self, zs: &[QMono]) -> Result<Scalar> {
        let mut acc = Scalar::one();
        for z in zs {
            acc *= bracket(z, self)?;
        }
        Ok(acc)
    }

    pub fn brf(&self, z: &QMono, base: &QMono, l: i64) -> Result<Scalar> {
        bracket_factorial(z, base, l, self)
    }

    pub fn e(&self, z: &QMono, w: &QMono) -> Scalar {
        e_pair(z, w, self)
    }

    pub fn ef(&self, z: &QMono, w: &QMono, base: &QMono, l: i64) -> Result<Scalar> {
        e_factorial(z, w, base, l, self)
    }

    /// Shifts generator `g` by multiplying its fourth root by that of `by`, `k` times.
    pub fn shifted(&self, g: Gen, by: Gen, k: i32) -> ParamPoint {
        let mut out = self.clone();
        let f = pow_scalar(&self.roots[by.slot()], k);
        out.roots[g.slot()] = &out.roots[g.slot()] * f;
        out
    }

    /// `(generator, fourth root)` pairs for the generators a formula touches.
    pub fn assignments(&self, gens: &[Gen]) -> Vec<(String, String)> {
        gens.iter()
            .map(|g| (g.to_string(), fmt_scalar(self.root(*g))))
            .collect()
    }
}

pub fn pow_scalar(s: &Scalar, k: i32) -> Scalar {
    if k >= 0 {
        num_traits::pow(s.clone(), k as usize)
    } else {
        num_traits::pow(s.recip(), k.unsigned_abs() as usize)
    }
}

/// `<z> = z^(1/2) - z^(-1/2)`.
pub fn bracket(z: &QMono, p: &ParamPoint) -> Result<Scalar> {
    let h = p.val(&z.sqrt()?);
    let inv = h.recip();
    Ok(h - inv)
}

/// `<z>_{base,l} = prod_{i=1..l} <base^(i-1) z>`.
///
/// Negative `l` gives the reciprocal of `prod_{i=1..|l|} <base^(-i) z>`,
/// so that `<z>_{l} <base^l z>_{k} = <z>_{l+k}` for all integers.
pub fn bracket_factorial(z: &QMono, base: &QMono, l: i64, p: &ParamPoint) -> Result<Scalar> {
    let mut acc = Scalar::one();
    if l >= 0 {
        let mut arg = *z;
        for _ in 0..l {
            acc *= bracket(&arg, p)?;
            arg = arg * *base;
        }
        Ok(acc)
    } else {
        let mut arg = *z;
        for _ in 0..(-l) {
            arg = arg / *base;
            acc *= bracket(&arg, p)?;
        }
        if acc.is_zero() {
            return Err(QbcError::Singular(format!("<{z}>_({base},{l})")));
        }
        Ok(acc.recip())
    }
}

/// `(z; base)_l = prod (1 - base^(i-1) z)`.
pub fn pochhammer(z: &QMono, base: &QMono, l: u32, p: &ParamPoint) -> Scalar {
    let mut acc = Scalar::one();
    let mut arg = *z;
    for _ in 0..l {
        acc *= Scalar::one() - p.val(&arg);
        arg = arg * *base;
    }
    acc
}

/// `e(z; w) = z + 1/z - w - 1/w`.
pub fn e_pair(z: &QMono, w: &QMono, p: &ParamPoint) -> Scalar {
    let zv = p.val(z);
    let wv = p.val(w);
    let zi = zv.recip();
    let wi = wv.recip();
    zv + zi - wv - wi
}

/// `e(z; w)_{base,l}`, the BC-type shifted factorial with base point `w`.
pub fn e_factorial(z: &QMono, w: &QMono, base: &QMono, l: i64, p: &ParamPoint) -> Result<Scalar> {
    let mut acc = Scalar::one();
    if l >= 0 {
        let mut arg = *w;
        for _ in 0..l {
            acc *= e_pair(z, &arg, p);
            arg = arg * *base;
        }
        Ok(acc)
    } else {
        let mut arg = *w;
        for _ in 0..(-l) {
            arg = arg / *base;
            acc *= e_pair(z, &arg, p);
        }
        if acc.is_zero() {
            return Err(QbcError::Singular(format!("e({z};{w})_({base},{l})")));
        }
        Ok(acc.recip())
    }
}

/// Bracket-normalised binomial `(-1)^r <t^-l>_{t,r} / <t>_{t,r}`.
pub fn t_binomial(l: i64, r: i64, tgen: &QMono, p: &ParamPoint) -> Result<Scalar> {
    if r < 0 || r > l {
        return Ok(Scalar::zero());
    }
    let mut f = Frac::one();
    f.mul(sign(r));
    f.mul(bracket_factorial(&tgen.pow(-(l as i32)), tgen, r, p)?);
    f.div(bracket_factorial(tgen, tgen, r, p)?);
    f.finish("t-binomial")
}

/// Accumulates a quotient, deferring the zero-denominator check to the end.
#[derive(Clone, Debug)]
pub struct Frac {
    num: Scalar,
    den: Scalar,
}

impl Default for Frac {
    fn default() -> Self {
        Frac::one()
    }
}

impl Frac {
    pub fn one() -> Frac {
        Frac { num: Scalar::one(), den: Scalar::one() }
    }

    pub fn mul(&mut self, x: Scalar) -> &mut Frac {
        self.num *= x;
        self
    }

    pub fn div(&mut self, x: Scalar) -> &mut Frac {
        self.den *= x;
        self
    }

    pub fn finish(&self, what: &str) -> Result<Scalar> {
        if self.den.is_zero() {
            return Err(QbcError::Singular(what.to_string()));
        }
        Ok(&self.num / &self.den)
    }
}

/// Checked division for one-off quotients.
pub fn checked_div(num: Scalar, den: Scalar, what: &str) -> Result<Scalar> {
    if den.is_zero() {
        return Err(QbcError::Singular(what.to_string()));
    }
    Ok(num / den)
}

/// Resamples allowed after the first singular point before giving up.
pub const RETRY_BUDGET: usize = 8;

/// Deterministic source of generic fourth roots.
///
/// Roots are drawn from `{2..19}/{1..7}` excluding 1. Within one point all
/// roots are pairwise distinct and never reciprocal to each other, which
/// removes the most common accidental coincidences up front.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, stream: &str) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed ^ fnv1a(stream)) }
    }

    pub fn root(&mut self) -> Scalar {
        loop {
            let n: i64 = self.rng.gen_range(2..=19);
            let d: i64 = self.rng.gen_range(1..=7);
            let r = ratio(n, d);
            if !r.is_one() {
                return r;
            }
        }
    }

    fn fresh_root(&mut self, used: &[Scalar]) -> Scalar {
        loop {
            let r = self.root();
            let ri = r.recip();
            if !used.iter().any(|s| *s == r || *s == ri) {
                return r;
            }
        }
    }

    /// A point with every generator freshly sampled.
    pub fn point(&mut self) -> ParamPoint {
        let mut p = ParamPoint::new();
        let mut used = Vec::with_capacity(NGEN);
        for g in Gen::all() {
            let r = self.fresh_root(&used);
            used.push(r.clone());
            p.set(g, r);
        }
        p
    }

    /// Runs `f` at fresh points, resampling whenever it hits a vanishing
    /// denominator, at most [`RETRY_BUDGET`] times.
    pub fn generic<T>(&mut self, mut f: impl FnMut(&ParamPoint) -> Result<T>) -> Result<T> {
        let mut last = String::new();
        for _ in 0..=RETRY_BUDGET {
            let p = self.point();
            match f(&p) {
                Err(e) if e.is_singular() => last = e.to_string(),
                other => return other,
            }
        }
        Err(QbcError::RetryBudgetExhausted(RETRY_BUDGET, last))
    }

    /// Resamples only the listed generators, keeping the rest.
    pub fn resample(&mut self, p: &ParamPoint, gens: &[Gen]) -> ParamPoint {
        let mut out = p.clone();
        let keep: Vec<Scalar> = Gen::all()
            .filter(|g| !gens.contains(g))
            .map(|g| p.root(g).clone())
            .collect();
        let mut used = keep;
        for g in gens {
            let r = self.fresh_root(&used);
            used.push(r.clone());
            out.set(*g, r);
        }
        out
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q16() -> ParamPoint {
        ParamPoint::new().with(Gen::Q, int(2))
    }

    #[test]
    fn bracket_of_one_is_zero() {
        let p = Sampler::new(1, "b").point();
        assert!(bracket(&QMono::one(), &p).unwrap().is_zero());
    }

    #[test]
    fn bracket_of_sixteen() {
        assert_eq!(bracket(&QMono::q(), &q16()).unwrap(), ratio(15, 4));
        let tq = QMono::t() * QMono::q();
        assert_eq!(bracket(&tq, &q16()).unwrap(), ratio(15, 4));
    }

    #[test]
    fn bracket_rejects_odd_quarters() {
        let z = QMono::quarters(Gen::A, 1);
        assert!(matches!(bracket(&z, &q16()), Err(QbcError::Granularity(_))));
    }

    #[test]
    fn bracket_factorial_examples() {
        let p = q16();
        assert!(bracket_factorial(&QMono::a(), &QMono::q(), 0, &p).unwrap().is_one());
        let want = ratio(15, 4) * (int(16) - ratio(1, 16));
        assert_eq!(bracket_factorial(&QMono::q(), &QMono::q(), 2, &p).unwrap(), want);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&QMono::q(), &QMono::q(), 1, &q16()), int(-15));
        // eval(z) = 1/2, eval(base) = 1/4
        let p = ParamPoint::new()
            .with(Gen::A, ratio(1, 2))
            .with(Gen::B, ratio(1, 2));
        let z = QMono::quarters(Gen::A, 1);
        let base = QMono::quarters(Gen::B, 2);
        assert_eq!(pochhammer(&z, &base, 2, &p), ratio(7, 16));
        assert!(pochhammer(&z, &base, 0, &p).is_one());
    }

    #[test]
    fn e_pair_examples() {
        let p = ParamPoint::new()
            .with(Gen::A, ratio(2, 1))
            .with(Gen::B, ratio(3, 1));
        let z = QMono::quarters(Gen::A, 1);
        let w = QMono::quarters(Gen::B, 1);
        assert_eq!(e_pair(&z, &w, &p), ratio(-5, 6));
        assert!(e_pair(&z, &z, &p).is_zero());
        assert!(e_pair(&z, &z.inv(), &p).is_zero());
    }

    #[test]
    fn e_factorial_examples() {
        let p = Sampler::new(3, "ef").point();
        let (z, w, q) = (QMono::u(), QMono::a(), QMono::q());
        assert!(e_factorial(&z, &w, &q, 0, &p).unwrap().is_one());
        assert_eq!(e_factorial(&z, &w, &q, 1, &p).unwrap(), e_pair(&z, &w, &p));
        let neg = e_factorial(&z, &w, &q, -1, &p).unwrap();
        let pos = e_factorial(&z, &(w / q), &q, 1, &p).unwrap();
        assert!((neg * pos).is_one());
    }

    #[test]
    fn t_binomial_examples() {
        let p = ParamPoint::new().with(Gen::T, int(2));
        let t = QMono::t();
        assert_eq!(t_binomial(2, 1, &t, &p).unwrap(), ratio(17, 4));
        assert!(t_binomial(3, 0, &t, &p).unwrap().is_one());
        let mut s = Sampler::new(5, "tb");
        for _ in 0..5 {
            let p = s.point();
            for l in 0..=4 {
                for r in 0..=l {
                    assert_eq!(
                        t_binomial(l, r, &t, &p).unwrap(),
                        t_binomial(l, l - r, &t, &p).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn sqrt_and_substitute() {
        let m = QMono::t() * QMono::q();
        let r = m.sqrt().unwrap();
        assert_eq!(r.exponent_quarters(Gen::T), 2);
        assert!(r.sqrt().is_ok());
        assert!(r.sqrt().unwrap().sqrt().is_err());
        let s = QMono::t().pow(2).substitute(Gen::T, &QMono::q().inv()).unwrap();
        assert_eq!(s, QMono::q().pow(-2));
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = Sampler::new(9, "x").point();
        let b = Sampler::new(9, "x").point();
        let c = Sampler::new(9, "y").point();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
