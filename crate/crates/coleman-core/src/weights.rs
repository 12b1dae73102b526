//! Characters of the diagonal torus of `GL(1) x prod_tau GL(2n)`.
//!
//! A weight is `(c0; c_{1,tau}, ..., c_{2n,tau})` for `d` embeddings with
//! `tau0` at index 0. Half-integral data (ρ and its pieces) is stored doubled.
//! Kostant representatives `w_0, ..., w_{2n-1}` only move the `tau0` row.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub n: usize,
    pub d: usize,
    pub c0: i64,
    pub grid: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "core::ops::Not::not")]
    pub doubled: bool,
}

impl Weight {
    pub fn new(n: usize, d: usize, c0: i64, grid: Vec<Vec<i64>>) -> Result<Self> {
        let w = Self {
            n,
            d,
            c0,
            grid,
            doubled: false,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::InvalidParameter("n and d must be positive"));
        }
        if self.grid.len() != self.d || self.grid.iter().any(|row| row.len() != 2 * self.n) {
            return Err(Error::ShapeMismatch("grid must be d rows of length 2n"));
        }
        Ok(())
    }

    pub fn zero(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            c0: 0,
            grid: vec![vec![0; 2 * n]; d],
            doubled: false,
        }
    }

    /// Weight with the given `tau0` row and zeros elsewhere.
    pub fn from_tau0(n: usize, d: usize, c0: i64, tau0: &[i64]) -> Result<Self> {
        let mut w = Self::zero(n, d);
        w.c0 = c0;
        if tau0.len() != 2 * n {
            return Err(Error::ShapeMismatch("tau0 row must have length 2n"));
        }
        w.grid[0] = tau0.to_vec();
        Ok(w)
    }

    /// `c_{i,tau}` with 1-based `i`, as in the usual tuple notation.
    pub fn c(&self, i: usize, tau: usize) -> i64 {
        self.grid[tau][i - 1]
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.n == other.n && self.d == other.d && self.doubled == other.doubled,
            "weights of different shape"
        );
    }

    fn zip(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        self.same_shape(other);
        Self {
            n: self.n,
            d: self.d,
            c0: f(self.c0, other.c0),
            grid: self
                .grid
                .iter()
                .zip(&other.grid)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
                .collect(),
            doubled: self.doubled,
        }
    }

    fn map(&self, f: impl Fn(i64) -> i64) -> Self {
        Self {
            n: self.n,
            d: self.d,
            c0: f(self.c0),
            grid: self.grid.iter().map(|row| row.iter().map(|&x| f(x)).collect()).collect(),
            doubled: self.doubled,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, k: i64) -> Self {
        self.map(|a| k * a)
    }

    /// The same character with entries stored ×2.
    pub fn to_doubled(&self) -> Self {
        if self.doubled {
            return self.clone();
        }
        let mut w = self.scale(2);
        w.doubled = true;
        w
    }

    /// Undo doubling; every entry must be even.
    pub fn halve(&self) -> Result<Self> {
        if !self.doubled {
            return Ok(self.clone());
        }
        let odd = self.c0 % 2 != 0 || self.grid.iter().flatten().any(|x| x % 2 != 0);
        if odd {
            return Err(Error::PreconditionViolated("half-integral weight"));
        }
        let mut w = self.map(|a| a / 2);
        w.doubled = false;
        Ok(w)
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.grid.iter().flatten().all(|&x| x == 0)
    }
}

/// `(2ρ, 2ρ_c, 2ρ_nc)`, all stored doubled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoData {
    pub rho: Weight,
    pub rho_c: Weight,
    pub rho_nc: Weight,
}

pub fn build_rho(n: usize, d: usize) -> RhoData {
    let nn = n as i64;
    let mut rho = Weight::zero(n, d);
    let mut rho_c = Weight::zero(n, d);
    let mut rho_nc = Weight::zero(n, d);
    for tau in 0..d {
        for i in 1..=2 * n {
            let r = 2 * nn - 2 * i as i64 + 1;
            rho.grid[tau][i - 1] = r;
            if tau == 0 {
                let (c, nc) = if i == 1 { (0, 2 * nn - 1) } else { (2 * nn - 2 * i as i64 + 2, -1) };
                rho_c.grid[0][i - 1] = c;
                rho_nc.grid[0][i - 1] = nc;
            } else {
                rho_c.grid[tau][i - 1] = r;
            }
        }
    }
    for w in [&mut rho, &mut rho_c, &mut rho_nc] {
        w.doubled = true;
    }
    RhoData { rho, rho_c, rho_nc }
}

/// The integral weight `2ρ`, not flagged as doubled.
pub fn two_rho(n: usize, d: usize) -> Weight {
    undoubled_flag(build_rho(n, d).rho)
}

pub fn two_rho_c(n: usize, d: usize) -> Weight {
    undoubled_flag(build_rho(n, d).rho_c)
}

pub fn two_rho_nc(n: usize, d: usize) -> Weight {
    undoubled_flag(build_rho(n, d).rho_nc)
}

fn undoubled_flag(mut w: Weight) -> Weight {
    w.doubled = false;
    w
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub dominant: bool,
    pub trivial_on_t0: bool,
    pub mg_dominant: bool,
    pub pure_weight: Option<i64>,
    pub in_monoid_c: bool,
}

pub fn is_dominant(w: &Weight) -> bool {
    w.grid.iter().all(|row| row.windows(2).all(|p| p[0] >= p[1]))
}

pub fn is_trivial_on_t0(w: &Weight) -> bool {
    let m = 2 * w.n;
    w.c0 == 0 && w.grid.iter().all(|row| (0..m).all(|i| row[i] + row[m - 1 - i] == 0))
}

/// Dominance for the Levi `GL(1) x GL(2n-1)` at `tau0` and `GL(2n)` elsewhere.
pub fn is_mg_dominant(w: &Weight) -> bool {
    let tau0_ok = w.grid[0][1..].windows(2).all(|p| p[0] >= p[1]);
    tau0_ok && w.grid[1..].iter().all(|row| row.windows(2).all(|p| p[0] >= p[1]))
}

/// The `w` with `c_{i,tau0} + c_{2n+2-i,tau0} = w` for `2 <= i <= n` and
/// antisymmetric rows away from `tau0`.
///
/// When `n = 1` the `tau0` condition is empty and the weight is normalised to 0.
pub fn pure_weight(k: &Weight) -> Option<i64> {
    let n = k.n;
    let m = 2 * n;
    let others_ok = k.grid[1..].iter().all(|row| (0..m).all(|i| row[i] + row[m - 1 - i] == 0));
    if !others_ok {
        return None;
    }
    if n == 1 {
        return Some(0);
    }
    let row = &k.grid[0];
    let w = row[1] + row[m - 1];
    (2..=n).all(|i| row[i - 1] + row[m + 1 - i] == w).then_some(w)
}

pub fn in_monoid_c(k: &Weight) -> bool {
    if !is_mg_dominant(k) {
        return false;
    }
    match pure_weight(k) {
        Some(w) => w <= 0 && k.c(k.n + 1, 0) <= w,
        None => false,
    }
}

pub fn classify_weight(w: &Weight) -> Classification {
    Classification {
        dominant: is_dominant(w),
        trivial_on_t0: is_trivial_on_t0(w),
        mg_dominant: is_mg_dominant(w),
        pure_weight: pure_weight(w),
        in_monoid_c: in_monoid_c(w),
    }
}

/// Kostant representative `w_i`, `0 <= i <= 2n-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KostantElement {
    pub length: usize,
}

impl KostantElement {
    pub fn new(length: usize, n: usize) -> Result<Self> {
        if length >= 2 * n {
            return Err(Error::InvalidParameter("Kostant length must be below 2n"));
        }
        Ok(Self { length })
    }
}

fn check_len(w: KostantElement, lam: &Weight) -> Result<()> {
    if w.length >= 2 * lam.n {
        return Err(Error::InvalidParameter("Kostant length must be below 2n"));
    }
    Ok(())
}

/// `tau0` row becomes `(c_{i+1}, c_1, ..., c_i, c_{i+2}, ..., c_{2n})`.
pub fn weyl_shuffle(w: KostantElement, lam: &Weight) -> Result<Weight> {
    check_len(w, lam)?;
    let i = w.length;
    let mut out = lam.clone();
    let row = &lam.grid[0];
    out.grid[0][0] = row[i];
    out.grid[0][1..=i].copy_from_slice(&row[..i]);
    Ok(out)
}

/// Inverse shuffle: `(c_2, ..., c_{i+1}, c_1, c_{i+2}, ...)`.
pub fn weyl_shuffle_inverse(w: KostantElement, lam: &Weight) -> Result<Weight> {
    check_len(w, lam)?;
    let i = w.length;
    let mut out = lam.clone();
    let row = &lam.grid[0];
    out.grid[0][..i].copy_from_slice(&row[1..=i]);
    out.grid[0][i] = row[0];
    Ok(out)
}

fn dot_action(lam: &Weight, shuffle: impl Fn(&Weight) -> Result<Weight>) -> Result<Weight> {
    let rho = build_rho(lam.n, lam.d).rho;
    let shifted = lam.to_doubled().add(&rho);
    shuffle(&shifted)?.sub(&rho).halve()
}

/// `w ⋆ λ = w(λ + ρ) - ρ`, computed on doubled entries.
pub fn star_action(w: KostantElement, lam: &Weight) -> Result<Weight> {
    dot_action(lam, |x| weyl_shuffle(w, x))
}

/// `w⁻¹ ⋆ λ`.
pub fn star_action_inverse(w: KostantElement, lam: &Weight) -> Result<Weight> {
    dot_action(lam, |x| weyl_shuffle_inverse(w, x))
}

/// Longest element of `W_G`: reverse every row.
pub fn w_g_max(lam: &Weight) -> Weight {
    let mut out = lam.clone();
    for row in &mut out.grid {
        row.reverse();
    }
    out
}

/// Longest element of the Levi Weyl group: reverse entries `2..2n` at `tau0`
/// and whole rows elsewhere.
pub fn w_m_max(lam: &Weight) -> Weight {
    let mut out = lam.clone();
    out.grid[0][1..].reverse();
    for row in &mut out.grid[1..] {
        row.reverse();
    }
    out
}

/// `λ* = -w_G^max λ`.
pub fn lambda_star(lam: &Weight) -> Weight {
    w_g_max(lam).neg()
}

/// `κ^∨ = -w_M^max κ - 2ρ_nc`.
pub fn serre_dual(k: &Weight) -> Result<Weight> {
    if !is_mg_dominant(k) {
        return Err(Error::PreconditionViolated("weight is not M_G-dominant"));
    }
    Ok(w_m_max(k).neg().sub(&two_rho_nc(k.n, k.d)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DictionaryEntry {
    pub i: usize,
    /// Harish-Chandra parameter, doubled.
    pub xi: Weight,
    pub nu: Weight,
    pub kappa: Weight,
}

pub fn parameter_dictionary(lam: &Weight) -> Result<Vec<DictionaryEntry>> {
    if !is_dominant(lam) {
        return Err(Error::PreconditionViolated("weight is not dominant"));
    }
    let (n, d) = (lam.n, lam.d);
    let rho = build_rho(n, d).rho;
    let lam_plus_2rho = lam.add(&two_rho(n, d));
    let rho_c2 = two_rho_c(n, d);
    let ls = lambda_star(lam);
    (0..2 * n)
        .map(|i| {
            let w = KostantElement::new(i, n)?;
            Ok(DictionaryEntry {
                i,
                xi: weyl_shuffle(w, &lam.to_doubled().add(&rho))?,
                nu: weyl_shuffle(w, &lam_plus_2rho)?.sub(&rho_c2),
                kappa: star_action(w, &ls)?,
            })
        })
        .collect()
}

/// Highest weight of the `i`-th exterior power of `p/m`.
///
/// The weights of `p/m` are the roots `e_j - e_1`, `2 <= j <= 2n`, at `tau0`;
/// the highest weight is the unique `M_G`-dominant sum of `i` distinct ones.
pub fn wedge_weight_alpha(i: usize, n: usize, d: usize) -> Result<Weight> {
    if i >= 2 * n {
        return Err(Error::InvalidParameter("wedge degree must be below 2n"));
    }
    let roots: Vec<Weight> = (2..=2 * n)
        .map(|j| {
            let mut w = Weight::zero(n, d);
            w.grid[0][0] = -1;
            w.grid[0][j - 1] = 1;
            w
        })
        .collect();
    let mut found: Option<Weight> = None;
    for mask in 0u32..(1 << roots.len()) {
        if mask.count_ones() as usize != i {
            continue;
        }
        let sum = roots
            .iter()
            .enumerate()
            .filter(|(j, _)| mask >> j & 1 == 1)
            .fold(Weight::zero(n, d), |acc, (_, r)| acc.add(r));
        if is_mg_dominant(&sum) {
            if found.is_some() {
                return Err(Error::PreconditionViolated("several dominant wedge weights"));
            }
            found = Some(sum);
        }
    }
    found.ok_or(Error::PreconditionViolated("no dominant wedge weight"))
}

/// Is `λ + ρ` regular and dominant (strictly decreasing rows)?
pub fn is_regular_dominant_shift(lam: &Weight) -> bool {
    let shifted = lam.to_doubled().add(&build_rho(lam.n, lam.d).rho);
    shifted.grid.iter().all(|row| row.windows(2).all(|p| p[0] > p[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w1(tau0: &[i64]) -> Weight {
        Weight::from_tau0(tau0.len() / 2, 1, 0, tau0).unwrap()
    }

    #[test]
    fn rho_examples() {
        let r = build_rho(1, 1);
        assert_eq!(r.rho.grid[0], vec![1, -1]);
        let r = build_rho(2, 1);
        assert_eq!(r.rho_nc.grid[0], vec![3, -1, -1, -1]);
        for n in 1..5 {
            for d in 1..4 {
                let r = build_rho(n, d);
                assert!(r.rho.sub(&r.rho_c).sub(&r.rho_nc).is_zero());
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify_weight(&Weight::zero(2, 2));
        assert!(c.dominant && c.trivial_on_t0 && c.mg_dominant && c.in_monoid_c);
        assert_eq!(c.pure_weight, Some(0));

        let c = classify_weight(&w1(&[5, 1, -2, -3]));
        assert!(c.mg_dominant && c.in_monoid_c);
        assert_eq!(c.pure_weight, Some(-2));

        for a in 0..6 {
            let c = classify_weight(&w1(&[a, -a]));
            assert!(c.dominant && c.trivial_on_t0);
        }
    }

    #[test]
    fn shuffle_examples() {
        let lam = w1(&[4, 3, 2, 1]);
        let w2 = KostantElement::new(2, 2).unwrap();
        assert_eq!(weyl_shuffle(w2, &lam).unwrap().grid[0], vec![2, 4, 3, 1]);
        assert_eq!(weyl_shuffle_inverse(w2, &weyl_shuffle(w2, &lam).unwrap()).unwrap(), lam);
        let w0 = KostantElement::new(0, 2).unwrap();
        assert_eq!(weyl_shuffle(w0, &lam).unwrap(), lam);
        let w1e = KostantElement::new(1, 1).unwrap();
        assert_eq!(weyl_shuffle(w1e, &w1(&[7, -2])).unwrap().grid[0], vec![-2, 7]);
    }

    #[test]
    fn star_examples() {
        let w1e = KostantElement::new(1, 1).unwrap();
        for a in 0..5 {
            assert_eq!(star_action(w1e, &w1(&[a, -a])).unwrap().grid[0], vec![-a - 1, a + 1]);
        }
        let w2 = KostantElement::new(2, 2).unwrap();
        assert_eq!(star_action(w2, &w1(&[3, 1, -1, -3])).unwrap().grid[0], vec![-3, 4, 2, -3]);
    }

    #[test]
    fn serre_dual_examples() {
        assert_eq!(serre_dual(&Weight::zero(2, 1)).unwrap(), two_rho_nc(2, 1).neg());
        let k = w1(&[4, -3]);
        assert_eq!(serre_dual(&k).unwrap().grid[0], vec![-5, 4]);
        let k = w1(&[2, 5, 1, 0]);
        assert_eq!(serre_dual(&serre_dual(&k).unwrap()).unwrap(), k);
    }

    #[test]
    fn dictionary_rank_one() {
        for a in 0..6 {
            let t = parameter_dictionary(&w1(&[a, -a])).unwrap();
            assert_eq!(t[0].nu.grid[0], vec![a + 1, -a - 1]);
            assert_eq!(t[1].kappa.grid[0], vec![-a - 1, a + 1]);
        }
    }

    #[test]
    fn alpha_examples() {
        assert!(wedge_weight_alpha(0, 3, 2).unwrap().is_zero());
        assert_eq!(wedge_weight_alpha(1, 1, 1).unwrap().grid[0], vec![-1, 1]);
        for n in 1..5 {
            assert_eq!(wedge_weight_alpha(2 * n - 1, n, 2).unwrap(), two_rho_nc(n, 2).neg());
        }
    }
}
