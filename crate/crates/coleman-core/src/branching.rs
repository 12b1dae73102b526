//! Branching from the Levi of `G` to the twisted Levi `u⁻¹ M_H u`.
//!
//! The distinguished vectors are modelled as functions on the square subgroup:
//! for `g = u⁻¹ h u · b` the value is `σ(h) · (w_M^max κ)(b⁻¹)`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{box_decompose, GroupElement};
use crate::padic::{AnalyticCharacter, PadicScalar};
use crate::weights::{in_monoid_c, pure_weight, w_m_max, Weight};

/// A pair `(κ, j)` with `κ ∈ 𝒞` and `0 <= j_tau <= κ_{n,tau}` for `tau != tau0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidPairE {
    pub kappa: Weight,
    /// Indexed by `tau = 1..d`.
    pub j: Vec<i64>,
}

impl MonoidPairE {
    pub fn new(kappa: Weight, j: Vec<i64>) -> Result<Self> {
        let x = Self { kappa, j };
        x.validate()?;
        Ok(x)
    }

    pub fn validate(&self) -> Result<()> {
        let k = &self.kappa;
        k.validate()?;
        if self.j.len() + 1 != k.d {
            return Err(Error::ShapeMismatch("j needs one entry per embedding other than tau0"));
        }
        if k.doubled || !in_monoid_c(k) {
            return Err(Error::NotInE);
        }
        let bounded = self.j.iter().enumerate().all(|(t, &j)| 0 <= j && j <= k.c(k.n, t + 1));
        if !bounded {
            return Err(Error::NotInE);
        }
        Ok(())
    }

    pub fn zero(n: usize, d: usize) -> Self {
        Self {
            kappa: Weight::zero(n, d),
            j: vec![0; d - 1],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            kappa: self.kappa.add(&other.kappa),
            j: self.j.iter().zip(&other.j).map(|(a, b)| a + b).collect(),
        }
    }

    /// `w` with the convention `w = 0` when `n = 1`.
    pub fn weight(&self) -> i64 {
        pure_weight(&self.kappa).unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gen", rename_all = "kebab-case")]
pub enum GeneratorId {
    Mu0,
    MuW,
    /// `μ_{i,tau}`; at `tau0` the index runs to `n+1`.
    Mu {
        i: usize,
        tau: usize,
    },
    /// `(μ_{n,tau}, 1_tau)`.
    Pair {
        tau: usize,
    },
}

/// The generators of `ℰ` in a fixed order. `μ_w` is left out when `n = 1`,
/// where it coincides with `μ_{2,tau0}`.
pub fn generator_ids(n: usize, d: usize) -> Vec<GeneratorId> {
    let mut out = vec![GeneratorId::Mu0];
    if n > 1 {
        out.push(GeneratorId::MuW);
    }
    for i in 1..=n + 1 {
        out.push(GeneratorId::Mu { i, tau: 0 });
    }
    for tau in 1..d {
        for i in 1..=n {
            out.push(GeneratorId::Mu { i, tau });
        }
    }
    for tau in 1..d {
        out.push(GeneratorId::Pair { tau });
    }
    out
}

pub fn generator(n: usize, d: usize, id: GeneratorId) -> MonoidPairE {
    let m = 2 * n;
    let mut x = MonoidPairE::zero(n, d);
    match id {
        GeneratorId::Mu0 => x.kappa.c0 = 1,
        GeneratorId::MuW => x.kappa.grid[0][n..].iter_mut().for_each(|c| *c = -1),
        GeneratorId::Mu { i: 1, tau: 0 } => x.kappa.grid[0][0] = 1,
        GeneratorId::Mu { i, tau: 0 } if i == n + 1 => {
            let r = &mut x.kappa.grid[0];
            r[1..n].iter_mut().for_each(|c| *c = 1);
            r[n..].iter_mut().for_each(|c| *c = -1);
        }
        GeneratorId::Mu { i, tau: 0 } => {
            let r = &mut x.kappa.grid[0];
            r[1..i].iter_mut().for_each(|c| *c = 1);
            r[m + 1 - i..].iter_mut().for_each(|c| *c = -1);
        }
        GeneratorId::Mu { i, tau } => {
            let r = &mut x.kappa.grid[tau];
            r[..i].iter_mut().for_each(|c| *c = 1);
            r[m - i..].iter_mut().for_each(|c| *c = -1);
        }
        GeneratorId::Pair { tau } => {
            let r = &mut x.kappa.grid[tau];
            r[..n].iter_mut().for_each(|c| *c = 1);
            r[n..].iter_mut().for_each(|c| *c = -1);
            x.j[tau - 1] = 1;
        }
    }
    x
}

pub fn generator_set(n: usize, d: usize) -> Vec<(GeneratorId, MonoidPairE)> {
    generator_ids(n, d).into_iter().map(|id| (id, generator(n, d, id))).collect()
}

/// Coefficients of `(κ, j)` on the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingExponents {
    pub a0: i64,
    pub aw: i64,
    /// Row `tau0` holds `a_{1..n+1,tau0}`; the other rows hold `a_{1..n,tau}`.
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
}

impl BranchingExponents {
    /// Exponents in the order of [`generator_ids`].
    pub fn to_list(&self, n: usize, d: usize) -> Vec<i64> {
        generator_ids(n, d)
            .into_iter()
            .map(|id| match id {
                GeneratorId::Mu0 => self.a0,
                GeneratorId::MuW => self.aw,
                GeneratorId::Mu { i, tau } => self.a[tau][i - 1],
                GeneratorId::Pair { tau } => self.b[tau - 1],
            })
            .collect()
    }
}

pub fn decompose_pair(x: &MonoidPairE) -> Result<BranchingExponents> {
    x.validate()?;
    let k = &x.kappa;
    let (n, d) = (k.n, k.d);
    let w = x.weight();
    let c = |i: usize, tau: usize| k.c(i, tau);
    let mut a0 = vec![0; n + 1];
    a0[0] = c(1, 0);
    for i in 2..n {
        a0[i - 1] = c(i, 0) - c(i + 1, 0);
    }
    if n >= 2 {
        a0[n - 1] = c(n + 1, 0) - c(n + 2, 0);
    }
    a0[n] = w - c(n + 1, 0);
    let mut a = vec![a0];
    for tau in 1..d {
        let mut row: Vec<i64> = (1..n).map(|i| c(i, tau) - c(i + 1, tau)).collect();
        row.push(c(n, tau) - x.j[tau - 1]);
        a.push(row);
    }
    Ok(BranchingExponents {
        a0: k.c0,
        aw: if n > 1 { -w } else { 0 },
        a,
        b: x.j.clone(),
    })
}

/// `Σ exponent · generator`, without any membership check.
pub fn reconstruct(e: &BranchingExponents, n: usize, d: usize) -> MonoidPairE {
    generator_set(n, d)
        .into_iter()
        .zip(e.to_list(n, d))
        .fold(MonoidPairE::zero(n, d), |acc, ((_, g), k)| MonoidPairE {
            kappa: acc.kappa.add(&g.kappa.scale(k)),
            j: acc.j.iter().zip(&g.j).map(|(s, t)| s + k * t).collect(),
        })
}

/// A random element of `ℰ` built from non-negative generator exponents
/// (the two unrestricted ones may be negative).
pub fn random_pair<R: Rng + ?Sized>(n: usize, d: usize, bound: i64, rng: &mut R) -> MonoidPairE {
    let ids = generator_ids(n, d);
    let list: Vec<i64> = ids
        .iter()
        .map(|id| match id {
            GeneratorId::Mu0 | GeneratorId::Mu { i: 1, tau: 0 } => rng.gen_range(-bound..=bound),
            _ => rng.gen_range(0..=bound),
        })
        .collect();
    let e = exponents_from_list(&list, n, d);
    reconstruct(&e, n, d)
}

pub fn exponents_from_list(list: &[i64], n: usize, d: usize) -> BranchingExponents {
    let mut e = BranchingExponents {
        a0: 0,
        aw: 0,
        a: (0..d).map(|tau| vec![0; if tau == 0 { n + 1 } else { n }]).collect(),
        b: vec![0; d - 1],
    };
    for (id, &v) in generator_ids(n, d).iter().zip(list) {
        match *id {
            GeneratorId::Mu0 => e.a0 = v,
            GeneratorId::MuW => e.aw = v,
            GeneratorId::Mu { i, tau } => e.a[tau][i - 1] = v,
            GeneratorId::Pair { tau } => e.b[tau - 1] = v,
        }
    }
    e
}

/// `σ_κ^[j](h) = x^{-κ0} y1^{-κ_1} det(y2)^{κ_{n+1} - w} det(y3)^{-κ_{n+1}} ∏ det(z1)^{-j} det(z2)^{j}`.
pub fn sigma_character(x: &MonoidPairE, h: &GroupElement) -> Result<PadicScalar> {
    if !h.is_in_levi_h() {
        return Err(Error::NotInSubgroup("σ is defined on the Levi of H"));
    }
    let (n, d) = (h.n(), h.d());
    if x.kappa.n != n || x.kappa.d != d {
        return Err(Error::ShapeMismatch("pair and element disagree on (n, d)"));
    }
    let k = &x.kappa;
    let w = x.weight();
    let b0 = h.block(0);
    let y1 = b0.get(0, 0);
    let y2 = b0.block(1, 1, n - 1, n - 1);
    let y3 = b0.block(n, n, n, n);
    let kn1 = k.c(n + 1, 0);
    let mut acc = h.sim().pow(-k.c0)? * y1.pow(-k.c(1, 0))?;
    if n > 1 {
        acc = acc * y2.det()?.pow(kn1 - w)?;
    }
    acc = acc * y3.det()?.pow(-kn1)?;
    for tau in 1..d {
        let (z1, z2) = h.h_pair(tau);
        let jt = x.j[tau - 1];
        acc = acc * z1.det()?.pow(-jt)? * z2.det()?.pow(jt)?;
    }
    Ok(acc)
}

/// `λ(t)` for the diagonal of `t` and the similitude.
pub fn torus_character(lam: &Weight, t: &GroupElement) -> Result<PadicScalar> {
    let mut acc = t.sim().pow(lam.c0)?;
    for (tau, row) in lam.grid.iter().enumerate() {
        for (x, &c) in t.block(tau).diag().into_iter().zip(row) {
            acc = acc * x.pow(c)?;
        }
    }
    Ok(acc)
}

/// `σ(h) · (w_M^max κ)(b⁻¹)` for a given decomposition `g = u⁻¹ h u b`.
pub fn eval_with_decomposition(x: &MonoidPairE, h: &GroupElement, b: &GroupElement) -> Result<PadicScalar> {
    let s = sigma_character(x, h)?;
    let t = torus_character(&w_m_max(&x.kappa), b)?.inverse()?;
    Ok(s * t)
}

pub fn eval_branching_vector(x: &MonoidPairE, g: &GroupElement, r: u32) -> Result<PadicScalar> {
    x.validate()?;
    let (h, b) = box_decompose(g, r)?;
    eval_with_decomposition(x, &h, &b)
}

/// `∏ ξ_gen(x_gen(g))` over the generators, with characters listed in the
/// order of [`generator_ids`].
pub fn eval_family_vector(coeffs: &[AnalyticCharacter], g: &GroupElement, r: u32) -> Result<PadicScalar> {
    let (n, d) = (g.n(), g.d());
    let gens = generator_set(n, d);
    if coeffs.len() != gens.len() {
        return Err(Error::ShapeMismatch("one character per generator"));
    }
    let (h, b) = box_decompose(g, r)?;
    let mut acc = g.ring().one();
    for ((_, gen), xi) in gens.iter().zip(coeffs) {
        let v = eval_with_decomposition(gen, &h, &b)?;
        if !v.is_unit() {
            return Err(Error::NotAUnit);
        }
        acc = acc * xi.eval(v)?;
    }
    Ok(acc)
}

/// Multiplicity of `y1^{-j} y2^{j}` in `V_{(a,-a)}` restricted to the diagonal torus of `GL(2)`.
pub fn classical_multiplicity(a: i64, j: i64) -> Result<u64> {
    if a < 0 {
        return Err(Error::PreconditionViolated("highest weight (a, -a) needs a >= 0"));
    }
    // Weights of Sym^{2a} ⊗ det^{-a}: (a - k, k - a) for k = 0..=2a.
    Ok((0..=2 * a).filter(|k| (a - k, k - a) == (-j, j)).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_distinguished_elements, random_borel_levi, random_mclub, random_msquare};
    use crate::padic::Zpn;
    use crate::weights::classify_weight;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kappa(tau0: &[i64]) -> Weight {
        Weight::from_tau0(tau0.len() / 2, 1, 0, tau0).unwrap()
    }

    #[test]
    fn generators_in_c() {
        for n in 1..5 {
            for d in 1..4 {
                for (id, g) in generator_set(n, d) {
                    assert!(classify_weight(&g.kappa).in_monoid_c, "{id:?}");
                    g.validate().unwrap();
                }
            }
        }
        let w = generator(3, 2, GeneratorId::MuW);
        assert_eq!(w.kappa.grid[0], vec![0, 0, 0, -1, -1, -1]);
        let m = generator(3, 2, GeneratorId::Mu { i: 2, tau: 1 });
        assert_eq!(m.kappa.grid[1], vec![1, 1, 0, 0, -1, -1]);
    }

    #[test]
    fn decompose_example() {
        let x = MonoidPairE::new(kappa(&[5, 1, -2, -3]), vec![]).unwrap();
        let e = decompose_pair(&x).unwrap();
        assert_eq!((e.a0, e.aw, e.a[0][0], e.a[0][1], e.a[0][2]), (0, 2, 5, 1, 0));
        assert_eq!(reconstruct(&e, 2, 1), x);
        let w = generator(2, 2, GeneratorId::MuW);
        let e = decompose_pair(&w).unwrap();
        assert_eq!(e.to_list(2, 2), {
            let mut v = vec![0; generator_ids(2, 2).len()];
            v[1] = 1;
            v
        });
        assert!(decompose_pair(&MonoidPairE::zero(2, 3)).unwrap().to_list(2, 3).iter().all(|&a| a == 0));
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..4 {
            for d in 1..4 {
                for _ in 0..50 {
                    let x = random_pair(n, d, 6, &mut rng);
                    x.validate().unwrap();
                    let e = decompose_pair(&x).unwrap();
                    assert_eq!(reconstruct(&e, n, d), x);
                }
            }
        }
    }

    #[test]
    fn not_in_e() {
        let mut k = Weight::zero(2, 2);
        k.grid[1] = vec![1, 0, 0, -1];
        assert_eq!(MonoidPairE::new(k.clone(), vec![2]), Err(Error::NotInE));
        assert!(MonoidPairE::new(k, vec![0]).is_ok());
        assert_eq!(MonoidPairE::new(kappa(&[0, 0, 1, 1]), vec![]), Err(Error::NotInE));
    }

    #[test]
    fn sigma_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = Zpn::new(5, 6).unwrap();
        for _ in 0..30 {
            let h = random_mclub(r, 2, 2, 1, false, &mut rng);
            assert!(sigma_character(&MonoidPairE::zero(2, 2), &h).unwrap().is_one());
            let x = random_pair(2, 2, 4, &mut rng);
            let y = random_pair(2, 2, 4, &mut rng);
            assert!(sigma_character(&x, &GroupElement::identity(r, 2, 2)).unwrap().is_one());
            let lhs = sigma_character(&x.add(&y), &h).unwrap();
            let rhs = sigma_character(&x, &h).unwrap() * sigma_character(&y, &h).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn eval_transformation_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, n, d) in [(3, 1, 1), (3, 2, 1), (5, 2, 2), (3, 1, 3)] {
            let r = Zpn::new(p, 6).unwrap();
            let u = build_distinguished_elements(r, n, d).unwrap().u;
            for _ in 0..20 {
                let x = random_pair(n, d, 4, &mut rng);
                assert!(eval_branching_vector(&x, &GroupElement::identity(r, n, d), 1).unwrap().is_one());
                let g = random_msquare(r, n, d, 1, &mut rng);
                let h = random_mclub(r, n, d, 1, false, &mut rng);
                let twisted = h.conjugate_by(&u).unwrap();
                let lhs = eval_branching_vector(&x, &twisted.mul(&g), 1).unwrap();
                let rhs = sigma_character(&x, &h).unwrap() * eval_branching_vector(&x, &g, 1).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(eval_branching_vector(&x, &twisted, 1).unwrap(), sigma_character(&x, &h).unwrap());
                let b = random_borel_levi(r, n, d, &mut rng);
                let expected = torus_character(&w_m_max(&x.kappa), &b.inverse().unwrap()).unwrap();
                assert_eq!(eval_branching_vector(&x, &b, 1).unwrap(), expected);
            }
        }
    }

    #[test]
    fn classical_oracle() {
        assert_eq!(classical_multiplicity(2, 1).unwrap(), 1);
        assert_eq!(classical_multiplicity(2, 3).unwrap(), 0);
        assert_eq!(classical_multiplicity(0, 0).unwrap(), 1);
        assert!(classical_multiplicity(-1, 0).is_err());
    }
}
