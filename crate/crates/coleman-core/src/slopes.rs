//! Valuations of Hecke eigenvalues and the small-slope criterion.
//!
//! A torus element `diag(p^{e_1}, ..., p^{e_2n})` per embedding is stored by
//! its exponents. The monoid `T⁻` is the set with non-decreasing rows; it is
//! generated by `x_{i,tau}` (the last `i` exponents equal to 1) for
//! `i < 2n`, together with the lines spanned by `x_{2n,tau}` and the
//! similitude factor. A strict inequality that holds at some element of `T⁻`
//! therefore holds at one of these generators or at an inverse of a line
//! generator, so the witness search below is complete.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::{is_dominant, is_trivial_on_t0, lambda_star, star_action, star_action_inverse, KostantElement, Weight};

pub type Q = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeElement {
    pub central: i64,
    pub exponents: Vec<Vec<i64>>,
}

impl HeckeElement {
    pub fn identity(n: usize, d: usize) -> Self {
        Self {
            central: 0,
            exponents: vec![vec![0; 2 * n]; d],
        }
    }

    /// `x_{i,tau}`: the last `i` entries of row `tau` are 1.
    pub fn generator(n: usize, d: usize, i: usize, tau: usize) -> Self {
        let mut x = Self::identity(n, d);
        for e in &mut x.exponents[tau][2 * n - i..] {
            *e = 1;
        }
        x
    }

    /// `(1; 1, p, ..., p^{2n-1})` at every embedding.
    pub fn standard(n: usize, d: usize) -> Self {
        Self {
            central: 0,
            exponents: vec![(0..2 * n as i64).collect(); d],
        }
    }

    pub fn in_t_minus(&self) -> bool {
        self.exponents.iter().all(|row| row.windows(2).all(|p| p[0] <= p[1]))
    }

    pub fn in_t_minus_minus(&self) -> bool {
        self.exponents.iter().all(|row| row.windows(2).all(|p| p[0] < p[1]))
    }

    pub fn inverse(&self) -> Self {
        Self {
            central: -self.central,
            exponents: self.exponents.iter().map(|r| r.iter().map(|e| -e).collect()).collect(),
        }
    }
}

/// `⟨μ, x⟩ = Σ c_{i,tau} e_{i,tau} + c0 · central`, halved for doubled weights.
pub fn slope_pairing(mu: &Weight, x: &HeckeElement) -> Q {
    let mut acc = mu.c0 * x.central;
    for (row, ex) in mu.grid.iter().zip(&x.exponents) {
        acc += row.iter().zip(ex).map(|(c, e)| c * e).sum::<i64>();
    }
    if mu.doubled {
        Q::new(acc, 2)
    } else {
        Q::from_integer(acc)
    }
}

/// `v∘θ` on the generators `x_{i,tau}` (`i = 1..2n`, stored at `i-1`) and the similitude line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeDatum {
    pub n: usize,
    pub d: usize,
    pub central: Q,
    pub values: Vec<Vec<Q>>,
}

impl SlopeDatum {
    /// The additive extension to an arbitrary torus element.
    pub fn eval(&self, x: &HeckeElement) -> Q {
        let m = 2 * self.n;
        let mut acc = self.central * x.central;
        for (vals, e) in self.values.iter().zip(&x.exponents) {
            // x = e_1 x_{2n} + Σ_{i<2n} (e_{2n-i+1} - e_{2n-i}) x_i
            acc += vals[m - 1] * e[0];
            for i in 1..m {
                acc += vals[i - 1] * (e[m - i] - e[m - i - 1]);
            }
        }
        acc
    }

    /// `v(θ(x)) = v(μ(x))`; with `μ = λ*` this is the Borel-ordinary datum.
    pub fn from_weight(mu: &Weight) -> Self {
        let (n, d) = (mu.n, mu.d);
        let values = (0..d)
            .map(|tau| (1..=2 * n).map(|i| slope_pairing(mu, &HeckeElement::generator(n, d, i, tau))).collect())
            .collect();
        let mut c = HeckeElement::identity(n, d);
        c.central = 1;
        Self {
            n,
            d,
            central: slope_pairing(mu, &c),
            values,
        }
    }
}

/// A candidate witness: a monoid generator or the inverse of a line generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    Standard { i: usize, tau: usize },
    StandardInverse { tau: usize },
    Central,
    CentralInverse,
}

impl Generator {
    pub fn element(self, n: usize, d: usize) -> HeckeElement {
        match self {
            Generator::Standard { i, tau } => HeckeElement::generator(n, d, i, tau),
            Generator::StandardInverse { tau } => HeckeElement::generator(n, d, 2 * n, tau).inverse(),
            Generator::Central => {
                let mut x = HeckeElement::identity(n, d);
                x.central = 1;
                x
            }
            Generator::CentralInverse => {
                let mut x = HeckeElement::identity(n, d);
                x.central = -1;
                x
            }
        }
    }
}

pub fn witness_candidates(n: usize, d: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for tau in 0..d {
        for i in 1..=2 * n {
            out.push(Generator::Standard { i, tau });
        }
        out.push(Generator::StandardInverse { tau });
    }
    out.push(Generator::Central);
    out.push(Generator::CentralInverse);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub generator: Generator,
    pub margin: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KostantVerdict {
    pub i: usize,
    pub witness: Option<Witness>,
    /// `⟨w_i⁻¹ ⋆ κ_n, x⟩ - v(θ(x))` at every candidate.
    pub margins: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallSlopeVerdict {
    pub verdict: bool,
    pub per_kostant: Vec<KostantVerdict>,
}

/// `κ_n = w_n ⋆ λ*`.
pub fn kappa_n(lam: &Weight) -> Result<Weight> {
    star_action(KostantElement::new(lam.n, lam.n)?, &lambda_star(lam))
}

fn check_lambda(lam: &Weight) -> Result<()> {
    lam.validate()?;
    if lam.doubled || !is_dominant(lam) || !is_trivial_on_t0(lam) {
        return Err(Error::PreconditionViolated("λ must be dominant and trivial on T0"));
    }
    Ok(())
}

/// The weights `w_i⁻¹ ⋆ κ_n` for `i = 0..2n-1`.
pub fn shifted_kappas(lam: &Weight) -> Result<Vec<Weight>> {
    let kn = kappa_n(lam)?;
    (0..2 * lam.n).map(|i| star_action_inverse(KostantElement::new(i, lam.n)?, &kn)).collect()
}

pub fn is_small_slope(theta: &SlopeDatum, lam: &Weight) -> Result<SmallSlopeVerdict> {
    check_lambda(lam)?;
    if theta.n != lam.n || theta.d != lam.d {
        return Err(Error::ShapeMismatch("slope datum and weight disagree on (n, d)"));
    }
    let (n, d) = (lam.n, lam.d);
    let cands = witness_candidates(n, d);
    let mut per_kostant = Vec::new();
    let mut verdict = true;
    for (i, mu) in shifted_kappas(lam)?.iter().enumerate() {
        if i == n {
            continue;
        }
        let margins: Vec<Q> = cands
            .iter()
            .map(|g| {
                let x = g.element(n, d);
                slope_pairing(mu, &x) - theta.eval(&x)
            })
            .collect();
        let witness = cands
            .iter()
            .zip(&margins)
            .find(|(_, m)| **m > Q::from_integer(0))
            .map(|(g, m)| Witness { generator: *g, margin: *m });
        verdict &= witness.is_some();
        per_kostant.push(KostantVerdict { i, witness, margins });
    }
    Ok(SmallSlopeVerdict { verdict, per_kostant })
}

/// `v(δ_i(x))` for `δ_i = w_i⁻¹ ⋆ κ_n - λ*`, rows indexed by `i`, columns by
/// [`witness_candidates`].
pub fn borel_delta_table(lam: &Weight) -> Result<Vec<Vec<Q>>> {
    check_lambda(lam)?;
    let (n, d) = (lam.n, lam.d);
    let ls = lambda_star(lam);
    let cands = witness_candidates(n, d);
    Ok(shifted_kappas(lam)?
        .iter()
        .map(|mu| {
            let delta = mu.sub(&ls);
            cands.iter().map(|g| slope_pairing(&delta, &g.element(n, d))).collect()
        })
        .collect())
}

/// A datum that fails the inequality at `w_i`: every generator margin is
/// pushed to at most zero, with the line generators pinned to exactly zero.
pub fn adversarial_datum(lam: &Weight, i: usize) -> Result<SlopeDatum> {
    check_lambda(lam)?;
    if i == lam.n || i >= 2 * lam.n {
        return Err(Error::InvalidParameter("adversarial index must differ from n"));
    }
    let (n, d) = (lam.n, lam.d);
    let mu = &shifted_kappas(lam)?[i];
    let mut theta = SlopeDatum::from_weight(&lambda_star(lam));
    for tau in 0..d {
        for g in 1..=2 * n {
            let target = slope_pairing(mu, &HeckeElement::generator(n, d, g, tau));
            let slot = &mut theta.values[tau][g - 1];
            if g == 2 * n || target > *slot {
                *slot = target;
            }
        }
    }
    theta.central = slope_pairing(mu, &Generator::Central.element(n, d));
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(tau0: &[i64]) -> Weight {
        Weight::from_tau0(tau0.len() / 2, 1, 0, tau0).unwrap()
    }

    fn idx(n: usize, g: Generator) -> usize {
        witness_candidates(n, 1).iter().position(|c| *c == g).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let x = HeckeElement::standard(3, 2);
        assert_eq!(slope_pairing(&Weight::zero(3, 2), &x), Q::from_integer(0));
        for a in 0..5 {
            let mut e = HeckeElement::identity(1, 1);
            e.exponents[0] = vec![0, 1];
            assert_eq!(slope_pairing(&lam(&[a, -a]), &e), Q::from_integer(-a));
        }
        let rho = crate::weights::build_rho(2, 1).rho;
        let expected: i64 = (1..=4).map(|i| (4 - 2 * i + 1) * (i - 1)).sum();
        assert_eq!(slope_pairing(&rho, &HeckeElement::standard(2, 1)), Q::new(expected, 2));
    }

    #[test]
    fn datum_extension_agrees_with_pairing() {
        let mu = lam(&[3, 1, -1, -3]);
        let theta = SlopeDatum::from_weight(&mu);
        let mut x = HeckeElement::standard(2, 1);
        x.exponents[0] = vec![-2, 0, 5, 5];
        x.central = 4;
        assert_eq!(theta.eval(&x), slope_pairing(&mu, &x));
    }

    #[test]
    fn delta_table_examples() {
        let l = lam(&[3, 1, -1, -3]);
        let t = borel_delta_table(&l).unwrap();
        let x2 = idx(2, Generator::Standard { i: 2, tau: 0 });
        let x1 = idx(2, Generator::Standard { i: 1, tau: 0 });
        assert_eq!(t[1][x2], Q::from_integer(3));
        assert_eq!(t[3][x1], Q::from_integer(3));
        let t0 = borel_delta_table(&Weight::zero(2, 1)).unwrap();
        assert_eq!(t0[0][x2], Q::from_integer(1));
    }

    #[test]
    fn borel_ordinary_and_adversarial() {
        for l in [lam(&[3, 1, -1, -3]), Weight::zero(3, 2), lam(&[0, 0])] {
            let theta = SlopeDatum::from_weight(&lambda_star(&l));
            assert!(is_small_slope(&theta, &l).unwrap().verdict);
            for i in (0..2 * l.n).filter(|&i| i != l.n) {
                let bad = adversarial_datum(&l, i).unwrap();
                let v = is_small_slope(&bad, &l).unwrap();
                assert!(!v.verdict);
            }
        }
    }

    #[test]
    fn raising_x_n_breaks_low_indices() {
        let l = lam(&[3, 1, -1, -3]);
        let mut theta = SlopeDatum::from_weight(&lambda_star(&l));
        theta.values[0][1] += Q::from_integer(2 * l.c(2, 0) + 1);
        let v = is_small_slope(&theta, &l).unwrap();
        let x2 = idx(2, Generator::Standard { i: 2, tau: 0 });
        assert!(v.per_kostant[1].margins[x2] <= Q::from_integer(0));
    }
}
