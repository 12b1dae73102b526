//! Fixed-precision arithmetic in `Z/p^N`.
//!
//! A [`PadicScalar`] is a residue modulo `p^N` tagged with its ring. Exact
//! zero cannot be told apart from "valuation at least `N`", so valuations of
//! zero residues are reported as [`Valuation::AtLeast`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps sums inside `u64` and products inside `u128`.
const MODULUS_CAP: u64 = 1 << 62;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// The residue ring `Z/p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zpn {
    p: u64,
    prec: u32,
    modulus: u64,
}

impl Zpn {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter("p must be prime"));
        }
        if prec == 0 {
            return Err(Error::InvalidParameter("precision must be positive"));
        }
        let mut modulus = 1u64;
        for _ in 0..prec {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m < MODULUS_CAP)
                .ok_or(Error::InvalidParameter("p^N exceeds 2^62"))?;
        }
        Ok(Self { p, prec, modulus })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn prec(self) -> u32 {
        self.prec
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn with_prec(self, prec: u32) -> Result<Self> {
        Self::new(self.p, prec)
    }

    pub fn elem(self, v: i128) -> PadicScalar {
        PadicScalar {
            ring: self,
            residue: v.rem_euclid(self.modulus as i128) as u64,
        }
    }

    pub fn zero(self) -> PadicScalar {
        self.elem(0)
    }

    pub fn one(self) -> PadicScalar {
        self.elem(1)
    }

    /// `p^e`, which is zero once `e >= N`.
    pub fn p_power(self, e: u32) -> PadicScalar {
        let mut x = self.one();
        let p = self.elem(self.p as i128);
        for _ in 0..e.min(self.prec) {
            x = x * p;
        }
        x
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> PadicScalar {
        PadicScalar {
            ring: self,
            residue: rng.gen_range(0..self.modulus),
        }
    }

    pub fn random_unit<R: Rng + ?Sized>(self, rng: &mut R) -> PadicScalar {
        loop {
            let x = self.random(rng);
            if x.is_unit() {
                return x;
            }
        }
    }

    /// A random element of the closed disc `v >= m`.
    pub fn random_in_disc<R: Rng + ?Sized>(self, m: u32, rng: &mut R) -> PadicScalar {
        self.p_power(m) * self.random(rng)
    }

    /// A random element of exact valuation `v` (zero when `v >= N`).
    pub fn random_with_valuation<R: Rng + ?Sized>(self, v: u32, rng: &mut R) -> PadicScalar {
        self.p_power(v) * self.random_unit(rng)
    }

    /// A generator of the cyclic group `(Z/p^N)^x`; `p` must be odd.
    pub fn primitive_root(self) -> Result<PadicScalar> {
        if self.p == 2 {
            return Err(Error::Divergent);
        }
        let order = self.p - 1;
        let factors = prime_factors(order);
        let mut g = 2u64;
        let fp = Zpn::new(self.p, 1)?;
        let g = loop {
            let cand = fp.elem(g as i128);
            if factors.iter().all(|q| cand.pow_u(order / q).residue != 1) {
                break g;
            }
            g += 1;
        };
        // g or g + p generates mod p^2, hence mod every p^N.
        let g1 = self.elem(g as i128);
        if self.prec == 1 {
            return Ok(g1);
        }
        let p2 = Zpn::new(self.p, 2)?;
        if p2.elem(g as i128).pow_u(order).residue != 1 {
            Ok(g1)
        } else {
            Ok(self.elem((g + self.p) as i128))
        }
    }
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= m {
        if m.is_multiple_of(q) {
            out.push(q);
            while m.is_multiple_of(q) {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// `v_p(k)` for a positive integer.
pub fn vp(p: u64, mut k: u64) -> u32 {
    let mut v = 0;
    while k > 0 && k.is_multiple_of(p) {
        k /= p;
        v += 1;
    }
    v
}

/// Valuation of a residue: exact, or only bounded below by the precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn at_least(self, m: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= m,
            Valuation::AtLeast(n) => n >= m,
        }
    }

    /// Lower bound usable in comparisons.
    pub fn floor(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            Valuation::AtLeast(n) => s.serialize_str(&format!(">={n}")),
        }
    }
}

/// The four disc shapes. On integer valuations the three open ones agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscFlavor {
    Closed,
    Open,
    ClosureOpen,
    StrictOpen,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawScalar", into = "RawScalar")]
pub struct PadicScalar {
    ring: Zpn,
    residue: u64,
}

#[derive(Serialize, Deserialize)]
struct RawScalar {
    p: u64,
    #[serde(rename = "N")]
    prec: u32,
    residue: u64,
}

impl TryFrom<RawScalar> for PadicScalar {
    type Error = Error;

    fn try_from(raw: RawScalar) -> Result<Self> {
        let ring = Zpn::new(raw.p, raw.prec)?;
        if raw.residue >= ring.modulus {
            return Err(Error::InvalidParameter("residue out of range"));
        }
        Ok(PadicScalar { ring, residue: raw.residue })
    }
}

impl From<PadicScalar> for RawScalar {
    fn from(x: PadicScalar) -> Self {
        RawScalar {
            p: x.ring.p,
            prec: x.ring.prec,
            residue: x.residue,
        }
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.ring.p, self.ring.prec)
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl PadicScalar {
    pub fn ring(self) -> Zpn {
        self.ring
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    pub fn valuation(self) -> Valuation {
        if self.residue == 0 {
            Valuation::AtLeast(self.ring.prec)
        } else {
            Valuation::Finite(vp(self.ring.p, self.residue))
        }
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn is_one(self) -> bool {
        self.residue == 1 % self.ring.modulus
    }

    pub fn is_unit(self) -> bool {
        !self.residue.is_multiple_of(self.ring.p)
    }

    /// Representative in `(-p^N/2, p^N/2]`.
    pub fn lift_symmetric(self) -> i128 {
        let m = self.ring.modulus as i128;
        let r = self.residue as i128;
        if 2 * r > m {
            r - m
        } else {
            r
        }
    }

    pub fn inverse(self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let m = self.ring.modulus as i128;
        let (mut a, mut b) = (self.residue as i128, m);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        Ok(self.ring.elem(x0))
    }

    pub fn pow_u(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow(self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow_u(e as u64))
        } else {
            Ok(self.inverse()?.pow_u(e.unsigned_abs()))
        }
    }

    /// Reduction to a smaller precision.
    pub fn truncate(self, prec: u32) -> Result<Self> {
        if prec > self.ring.prec {
            return Err(Error::PrecisionInsufficient);
        }
        let ring = self.ring.with_prec(prec)?;
        Ok(ring.elem(self.residue as i128))
    }

    /// Exact division by `p^e`; the quotient is only known modulo `p^(N-e)`.
    pub fn div_p_power(self, e: u32) -> Result<Self> {
        if e == 0 {
            return Ok(self);
        }
        if e >= self.ring.prec {
            return Err(Error::PrecisionInsufficient);
        }
        let pe = self.ring.p.pow(e);
        if !self.residue.is_multiple_of(pe) {
            return Err(Error::PreconditionViolated("not divisible by the requested power of p"));
        }
        let ring = self.ring.with_prec(self.ring.prec - e)?;
        Ok(ring.elem((self.residue / pe) as i128))
    }

    fn same_ring(self, other: Self) {
        assert_eq!(self.ring, other.ring, "mixed residue rings");
    }
}

impl Add for PadicScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.same_ring(rhs);
        let s = self.residue + rhs.residue;
        let m = self.ring.modulus;
        PadicScalar {
            ring: self.ring,
            residue: if s >= m { s - m } else { s },
        }
    }
}

impl Sub for PadicScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for PadicScalar {
    type Output = Self;
    fn neg(self) -> Self {
        let m = self.ring.modulus;
        PadicScalar {
            ring: self.ring,
            residue: if self.residue == 0 { 0 } else { m - self.residue },
        }
    }
}

impl Mul for PadicScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.same_ring(rhs);
        let prod = (self.residue as u128 * rhs.residue as u128) % self.ring.modulus as u128;
        PadicScalar {
            ring: self.ring,
            residue: prod as u64,
        }
    }
}

pub fn valuation(x: PadicScalar) -> Valuation {
    x.valuation()
}

pub fn disc_member(x: PadicScalar, flavor: DiscFlavor, m: u32) -> Result<bool> {
    let n = x.ring.prec;
    if m >= n {
        return Err(Error::PrecisionInsufficient);
    }
    match flavor {
        DiscFlavor::Closed => Ok(x.valuation().at_least(m)),
        DiscFlavor::Open | DiscFlavor::ClosureOpen | DiscFlavor::StrictOpen => {
            if m + 1 >= n {
                return Err(Error::PrecisionInsufficient);
            }
            Ok(x.valuation().at_least(m + 1))
        }
    }
}

/// Teichmüller representative: the fixed point of `z -> z^p`.
pub fn teichmuller(z: PadicScalar) -> Result<PadicScalar> {
    if !z.is_unit() {
        return Err(Error::NotAUnit);
    }
    let mut w = z;
    for _ in 0..=z.ring.prec {
        let next = w.pow_u(z.ring.p);
        if next == w {
            return Ok(w);
        }
        w = next;
    }
    unreachable!("z -> z^p stabilises after N steps")
}

/// Splits a unit as `omega * principal` with `principal = 1 mod p`.
pub fn unit_decompose(z: PadicScalar) -> Result<(PadicScalar, PadicScalar)> {
    let omega = teichmuller(z)?;
    Ok((omega, z * omega.inverse()?))
}

/// `<z> = z / omega(z)`.
pub fn principal_part(z: PadicScalar) -> Result<PadicScalar> {
    Ok(unit_decompose(z)?.1)
}

fn check_principal(z: PadicScalar) -> Result<()> {
    if z.ring.p == 2 {
        return Err(Error::Divergent);
    }
    if !(z - z.ring.one()).valuation().at_least(1) {
        return Err(Error::Divergent);
    }
    Ok(())
}

fn series_len(ring: Zpn) -> u64 {
    2 * ring.prec as u64 + 4
}

/// `log z` for `z = 1 mod p`.
///
/// With `z = 1 + p x`, the `k`-th term is `(-1)^(k+1) x^k p^(k - v(k)) / (k / p^v(k))`,
/// so every term is computed without leaving `Z/p^N`.
pub fn log_principal(z: PadicScalar) -> Result<PadicScalar> {
    check_principal(z)?;
    let ring = z.ring;
    let n = ring.prec as u64;
    let x = ring.elem(((z - ring.one()).residue / ring.p) as i128);
    let mut xk = ring.one();
    let mut acc = ring.zero();
    for k in 1..=series_len(ring) {
        xk = xk * x;
        let v = vp(ring.p, k);
        let e = k - v as u64;
        if e >= n {
            continue;
        }
        let unit = ring.elem((k / ring.p.pow(v)) as i128).inverse()?;
        let term = xk * ring.p_power(e as u32) * unit;
        acc = if k % 2 == 1 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// `exp y` for `v(y) >= 1`, summed as `(y/p)^k p^(k - v(k!)) / unit(k!)`.
pub fn exp_divisible(y: PadicScalar) -> Result<PadicScalar> {
    let ring = y.ring;
    if ring.p == 2 || !y.valuation().at_least(1) {
        return Err(Error::Divergent);
    }
    let n = ring.prec as u64;
    let yp = ring.elem((y.residue / ring.p) as i128);
    let mut yk = ring.one();
    let mut acc = ring.one();
    let mut fact_unit = ring.one();
    let mut fact_v = 0u64;
    for k in 1..=series_len(ring) {
        yk = yk * yp;
        let v = vp(ring.p, k);
        fact_v += v as u64;
        fact_unit = fact_unit * ring.elem((k / ring.p.pow(v)) as i128);
        let e = k - fact_v;
        if e >= n {
            continue;
        }
        acc = acc + yk * ring.p_power(e as u32) * fact_unit.inverse()?;
    }
    Ok(acc)
}

/// `z^s = exp(s log z)` for a principal unit `z` and `s` in `Z_p`.
pub fn unit_power(z: PadicScalar, s: PadicScalar) -> Result<PadicScalar> {
    if z.ring != s.ring {
        return Err(Error::RingMismatch);
    }
    check_principal(z)?;
    exp_divisible(s * log_principal(z)?)
}

/// A continuous character of `Z_p^x` of the shape `z -> finite(z mod p^r) <z>^s`.
///
/// `finite` is a table indexed by residues mod `p^r`; entries at non-units are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCharacter", into = "RawCharacter")]
pub struct AnalyticCharacter {
    r: u32,
    finite: Vec<u64>,
    s: PadicScalar,
}

#[derive(Serialize, Deserialize)]
struct RawCharacter {
    r: u32,
    finite: Vec<u64>,
    s: PadicScalar,
}

impl TryFrom<RawCharacter> for AnalyticCharacter {
    type Error = Error;
    fn try_from(raw: RawCharacter) -> Result<Self> {
        AnalyticCharacter::from_table(raw.r, raw.finite, raw.s)
    }
}

impl From<AnalyticCharacter> for RawCharacter {
    fn from(c: AnalyticCharacter) -> Self {
        RawCharacter {
            r: c.r,
            finite: c.finite,
            s: c.s,
        }
    }
}

impl AnalyticCharacter {
    /// Validates that `finite` is a homomorphism `(Z/p^r)^x -> (Z/p^N)^x`.
    pub fn from_table(r: u32, finite: Vec<u64>, s: PadicScalar) -> Result<Self> {
        let ring = s.ring;
        if ring.p == 2 {
            return Err(Error::Divergent);
        }
        if r == 0 || r > ring.prec {
            return Err(Error::InvalidParameter("finite part depth must lie in 1..=N"));
        }
        let pr = ring.p.pow(r);
        if finite.len() as u64 != pr {
            return Err(Error::ShapeMismatch("finite table must have p^r entries"));
        }
        let small = ring.with_prec(r)?;
        let g = small.primitive_root()?.residue;
        let at = |z: u64| ring.elem(finite[z as usize] as i128);
        let chi_g = at(g);
        for z in 0..pr {
            let v = finite[z as usize];
            if v >= ring.modulus {
                return Err(Error::NotACharacter);
            }
            if z % ring.p == 0 {
                if v != 0 {
                    return Err(Error::NotACharacter);
                }
                continue;
            }
            if !at(z).is_unit() {
                return Err(Error::NotACharacter);
            }
            let gz = (g as u128 * z as u128 % pr as u128) as u64;
            if at(gz) != chi_g * at(z) {
                return Err(Error::NotACharacter);
            }
        }
        if !at(1).is_one() {
            return Err(Error::NotACharacter);
        }
        Ok(Self { r, finite, s })
    }

    pub fn trivial(ring: Zpn) -> Result<Self> {
        Self::teichmuller_power(ring, 0)
    }

    /// `z -> omega(z)^a`.
    pub fn teichmuller_power(ring: Zpn, a: i64) -> Result<Self> {
        if ring.p == 2 {
            return Err(Error::Divergent);
        }
        let mut finite = vec![0u64; ring.p as usize];
        for (z, slot) in finite.iter_mut().enumerate().skip(1) {
            *slot = teichmuller(ring.elem(z as i128))?.pow(a)?.residue;
        }
        Ok(Self {
            r: 1,
            finite,
            s: ring.zero(),
        })
    }

    /// `z -> z^k`, split as `omega^k <z>^k`.
    pub fn algebraic(ring: Zpn, k: i64) -> Result<Self> {
        let mut c = Self::teichmuller_power(ring, k)?;
        c.s = ring.elem(k as i128);
        Ok(c)
    }

    /// `z -> <z>^s`.
    pub fn principal_power(s: PadicScalar) -> Result<Self> {
        let mut c = Self::trivial(s.ring)?;
        c.s = s;
        Ok(c)
    }

    pub fn ring(&self) -> Zpn {
        self.s.ring
    }

    pub fn depth(&self) -> u32 {
        self.r
    }

    pub fn exponent(&self) -> PadicScalar {
        self.s
    }

    pub fn table(&self) -> &[u64] {
        &self.finite
    }

    pub fn eval(&self, z: PadicScalar) -> Result<PadicScalar> {
        if z.ring != self.ring() {
            return Err(Error::RingMismatch);
        }
        let (_, principal) = unit_decompose(z)?;
        let idx = z.residue % self.ring().p.pow(self.r);
        let f = self.ring().elem(self.finite[idx as usize] as i128);
        Ok(f * unit_power(principal, self.s)?)
    }

    fn lifted_table(&self, r: u32) -> Vec<u64> {
        let p = self.ring().p;
        let small = p.pow(self.r);
        (0..p.pow(r)).map(|z| self.finite[(z % small) as usize]).collect()
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch);
        }
        let r = self.r.max(other.r);
        let ring = self.ring();
        let finite = self
            .lifted_table(r)
            .into_iter()
            .zip(other.lifted_table(r))
            .map(|(a, b)| (ring.elem(a as i128) * ring.elem(b as i128)).residue)
            .collect();
        Ok(Self {
            r,
            finite,
            s: self.s + other.s,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        let ring = self.ring();
        let mut finite = Vec::with_capacity(self.finite.len());
        for &v in &self.finite {
            finite.push(if v == 0 { 0 } else { ring.elem(v as i128).inverse()?.residue });
        }
        Ok(Self {
            r: self.r,
            finite,
            s: -self.s,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow_int(&self, k: i64) -> Result<Self> {
        let ring = self.ring();
        let mut finite = Vec::with_capacity(self.finite.len());
        for &v in &self.finite {
            finite.push(if v == 0 { 0 } else { ring.elem(v as i128).pow(k)?.residue });
        }
        Ok(Self {
            r: self.r,
            finite,
            s: self.s * ring.elem(k as i128),
        })
    }

    /// Equality as functions on `(Z/p^N)^x`, decided at a generator of that cyclic group.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch);
        }
        let g = self.ring().primitive_root()?;
        Ok(self.eval(g)? == other.eval(g)?)
    }

    pub fn is_trivial(&self) -> Result<bool> {
        self.agrees_with(&Self::trivial(self.ring())?)
    }

    /// The integer `k` with `self = (z -> z^k)`, read off from the exponent.
    pub fn as_algebraic(&self) -> Result<Option<i64>> {
        let k = self.s.lift_symmetric();
        let Ok(k) = i64::try_from(k) else {
            return Ok(None);
        };
        if self.agrees_with(&Self::algebraic(self.ring(), k)?)? {
            Ok(Some(k))
        } else {
            Ok(None)
        }
    }

    pub fn describe(&self) -> String {
        format!("finite depth {} exponent {}", self.r, self.s)
    }
}

pub fn eval_character(chi: &AnalyticCharacter, z: PadicScalar) -> Result<PadicScalar> {
    chi.eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u64, n: u32) -> Zpn {
        Zpn::new(p, n).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let r = ring(3, 4);
        assert_eq!(r.elem(9).valuation(), Valuation::Finite(2));
        assert_eq!(r.elem(1).valuation(), Valuation::Finite(0));
        assert_eq!(r.elem(0).valuation(), Valuation::AtLeast(4));
    }

    #[test]
    fn disc_boundaries() {
        let r = ring(5, 6);
        for m in 0..4 {
            let x = r.p_power(m);
            assert!(disc_member(x, DiscFlavor::Closed, m).unwrap());
            assert!(!disc_member(x, DiscFlavor::Open, m).unwrap());
            assert!(disc_member(r.p_power(m + 1), DiscFlavor::StrictOpen, m).unwrap());
        }
        assert_eq!(disc_member(r.one(), DiscFlavor::Open, 5), Err(Error::PrecisionInsufficient));
    }

    #[test]
    fn teichmuller_examples() {
        let r = ring(3, 3);
        let (omega, principal) = unit_decompose(r.elem(2)).unwrap();
        assert_eq!(omega.residue(), 26);
        assert_eq!(principal, r.elem(2) * r.elem(26).inverse().unwrap());
        let (o1, p1) = unit_decompose(r.one()).unwrap();
        assert!(o1.is_one() && p1.is_one());

        let r = ring(5, 2);
        let omega = teichmuller(r.elem(7)).unwrap();
        assert_eq!(omega.residue() % 5, 2);
        assert!(omega.pow_u(4).is_one());
        assert_eq!(unit_decompose(r.elem(10)), Err(Error::NotAUnit));
    }

    #[test]
    fn unit_power_integer_cases() {
        let r = ring(3, 4);
        assert!(unit_power(r.elem(4), r.zero()).unwrap().is_one());
        assert_eq!(unit_power(r.elem(4), r.elem(2)).unwrap(), r.elem(16));
        assert_eq!(unit_power(r.elem(2), r.one()), Err(Error::Divergent));
        let r2 = ring(2, 5);
        assert_eq!(unit_power(r2.elem(3), r2.one()), Err(Error::Divergent));
    }

    // (1+p)^s mod p^N only depends on s mod p^(N-1); an integer representative
    // gives an oracle that never touches log or exp.
    #[test]
    fn unit_power_matches_periodic_integer_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(p, n) in &[(3u64, 3u32), (3, 6), (5, 4), (7, 3)] {
            let r = ring(p, n);
            for _ in 0..200 {
                let z = r.one() + r.random_in_disc(1, &mut rng);
                let s = r.random(&mut rng);
                let period = p.pow(n - 1);
                let oracle = z.pow_u(s.residue() % period);
                assert_eq!(unit_power(z, s).unwrap(), oracle, "p={p} N={n} z={z} s={s}");
            }
        }
    }

    #[test]
    fn log_exp_round_trip() {
        let r = ring(5, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let z = r.one() + r.random_in_disc(1, &mut rng);
            assert_eq!(exp_divisible(log_principal(z).unwrap()).unwrap(), z);
        }
    }

    #[test]
    fn algebraic_character_example() {
        let r = ring(5, 2);
        let chi = AnalyticCharacter::algebraic(r, 3).unwrap();
        assert_eq!(chi.eval(r.elem(2)).unwrap(), r.elem(8));
        let triv = AnalyticCharacter::trivial(r).unwrap();
        assert!(triv.eval(r.elem(7)).unwrap().is_one());
    }

    #[test]
    fn quadratic_finite_part() {
        let r = ring(7, 3);
        let s = r.elem(40);
        let legendre = AnalyticCharacter::teichmuller_power(r, 3).unwrap();
        let chi = legendre.mul(&AnalyticCharacter::principal_power(s).unwrap()).unwrap();
        // 3 is a non-residue mod 7
        let z = r.elem(3);
        let expected = -unit_power(principal_part(z).unwrap(), s).unwrap();
        assert_eq!(chi.eval(z).unwrap(), expected);
    }

    #[test]
    fn table_validation_rejects_non_characters() {
        let r = ring(5, 2);
        let s = r.zero();
        assert!(AnalyticCharacter::from_table(1, vec![0, 1, 1, 1, 2], s).is_err());
        assert!(AnalyticCharacter::from_table(1, vec![0, 1, 24, 24, 1], s).is_ok());
    }

    #[test]
    fn algebraic_detection() {
        let r = ring(5, 4);
        let chi = AnalyticCharacter::algebraic(r, -7).unwrap();
        assert_eq!(chi.as_algebraic().unwrap(), Some(-7));
        let odd = AnalyticCharacter::principal_power(r.elem(3)).unwrap();
        assert_eq!(odd.as_algebraic().unwrap(), None);
    }

    #[test]
    fn primitive_roots_generate() {
        for &(p, n) in &[(3u64, 4u32), (5, 3), (7, 2), (11, 2)] {
            let r = ring(p, n);
            let g = r.primitive_root().unwrap();
            let order = (p - 1) * p.pow(n - 1);
            let mut x = g;
            let mut k = 1;
            while !x.is_one() {
                x = x * g;
                k += 1;
            }
            assert_eq!(k, order);
        }
    }
}
