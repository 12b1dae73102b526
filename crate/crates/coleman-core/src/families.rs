//! Characters of `T(Z_p)` and their coordinates on the generating cocharacter
//! combinations, for single weights and for pairs `(κ, β)`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::branching::{exponents_from_list, generator_ids, generator_set, reconstruct, MonoidPairE};
use crate::error::{Error, Result};
use crate::padic::{AnalyticCharacter, PadicScalar, Zpn};
use crate::weights::Weight;

type Ch = AnalyticCharacter;

/// A point of `T(Z_p)`, with one extra unit per `tau != tau0` for the `β` slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusUnit {
    pub c0: PadicScalar,
    pub t: Vec<Vec<PadicScalar>>,
    pub s: Vec<PadicScalar>,
}

impl TorusUnit {
    pub fn random<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, rng: &mut R) -> Self {
        Self {
            c0: ring.random_unit(rng),
            t: (0..d).map(|_| (0..2 * n).map(|_| ring.random_unit(rng)).collect()).collect(),
            s: (1..d).map(|_| ring.random_unit(rng)).collect(),
        }
    }

    fn ring(&self) -> Zpn {
        self.c0.ring()
    }

    /// `λ(t)` for an integral weight.
    pub fn weight_value(&self, lam: &Weight) -> Result<PadicScalar> {
        let mut acc = self.c0.pow(lam.c0)?;
        for (row, units) in lam.grid.iter().zip(&self.t) {
            for (&c, &z) in row.iter().zip(units) {
                acc = acc * z.pow(c)?;
            }
        }
        Ok(acc)
    }

    /// `κ(t) ∏ s_tau^{j_tau}`.
    pub fn pair_value(&self, x: &MonoidPairE) -> Result<PadicScalar> {
        let mut acc = self.weight_value(&x.kappa)?;
        for (&j, &z) in x.j.iter().zip(&self.s) {
            acc = acc * z.pow(j)?;
        }
        Ok(acc)
    }
}

/// `λ = c0 ⊗ ⊗ α_{i,tau}` together with `β_tau` for `tau != tau0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCharacter {
    pub n: usize,
    pub d: usize,
    pub c0: Ch,
    /// `alpha[tau][i - 1]`, length `2n` per row.
    pub alpha: Vec<Vec<Ch>>,
    pub beta: Vec<Ch>,
}

impl FamilyCharacter {
    pub fn trivial(ring: Zpn, n: usize, d: usize) -> Result<Self> {
        let one = Ch::trivial(ring)?;
        Ok(Self {
            n,
            d,
            c0: one.clone(),
            alpha: vec![vec![one.clone(); 2 * n]; d],
            beta: vec![one; d - 1],
        })
    }

    /// The algebraic character `z -> z^κ`, with `β_tau = z^{j_tau}`.
    pub fn algebraic(ring: Zpn, kappa: &Weight, j: &[i64]) -> Result<Self> {
        let alg = |k: i64| Ch::algebraic(ring, k);
        Ok(Self {
            n: kappa.n,
            d: kappa.d,
            c0: alg(kappa.c0)?,
            alpha: kappa
                .grid
                .iter()
                .map(|row| row.iter().map(|&c| alg(c)).collect())
                .collect::<Result<_>>()?,
            beta: j.iter().map(|&k| alg(k)).collect::<Result<_>>()?,
        })
    }

    pub fn ring(&self) -> Zpn {
        self.c0.ring()
    }

    fn check_shape(&self) -> Result<()> {
        let ok = self.alpha.len() == self.d && self.alpha.iter().all(|r| r.len() == 2 * self.n) && self.beta.len() + 1 == self.d && self.n >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch("family character has the wrong shape"))
        }
    }

    fn a(&self, i: usize, tau: usize) -> &Ch {
        &self.alpha[tau][i - 1]
    }

    pub fn is_trivial_on_t0(&self) -> Result<bool> {
        self.check_shape()?;
        if !self.c0.is_trivial()? {
            return Ok(false);
        }
        let m = 2 * self.n;
        for tau in 0..self.d {
            for i in 1..=self.n {
                if !self.a(i, tau).mul(self.a(m + 1 - i, tau))?.is_trivial()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The relations `κ_i κ_{2n+2-i}` constant at `tau0` (for `2 <= i <= n`)
    /// and `κ_i κ_{2n+1-i}` trivial elsewhere.
    pub fn satisfies_pair_relations(&self) -> Result<bool> {
        self.check_shape()?;
        let (n, m) = (self.n, 2 * self.n);
        if n >= 2 {
            let w = self.a(2, 0).mul(self.a(m, 0))?;
            for i in 3..=n {
                if !self.a(i, 0).mul(self.a(m + 2 - i, 0))?.agrees_with(&w)? {
                    return Ok(false);
                }
            }
        }
        for tau in 1..self.d {
            for i in 1..=n {
                if !self.a(i, tau).mul(self.a(m + 1 - i, tau))?.is_trivial()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `κ(t) ∏ β_tau(s_tau)`.
    pub fn eval(&self, u: &TorusUnit) -> Result<PadicScalar> {
        self.check_shape()?;
        let mut acc = self.c0.eval(u.c0)?;
        for (chars, units) in self.alpha.iter().zip(&u.t) {
            for (c, &z) in chars.iter().zip(units) {
                acc = acc * c.eval(z)?;
            }
        }
        for (c, &z) in self.beta.iter().zip(&u.s) {
            acc = acc * c.eval(z)?;
        }
        Ok(acc)
    }
}

/// `ξ_{i,tau}` for `i = 1..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusCoefficients {
    pub n: usize,
    pub d: usize,
    pub xi: Vec<Vec<Ch>>,
}

/// Generator `λ_{i,tau}`: `i` ones followed by `i` minus ones at `tau`.
pub fn torus_generator(n: usize, d: usize, i: usize, tau: usize) -> Weight {
    let mut w = Weight::zero(n, d);
    let row = &mut w.grid[tau];
    row[..i].iter_mut().for_each(|c| *c = 1);
    row[2 * n - i..].iter_mut().for_each(|c| *c = -1);
    w
}

pub fn decompose_family(lam: &FamilyCharacter) -> Result<TorusCoefficients> {
    if !lam.is_trivial_on_t0()? {
        return Err(Error::NotTrivialOnT0);
    }
    let n = lam.n;
    let xi = (0..lam.d)
        .map(|tau| {
            (1..=n)
                .map(|i| {
                    if i < n {
                        lam.a(i, tau).div(lam.a(i + 1, tau))
                    } else {
                        Ok(lam.a(n, tau).clone())
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(TorusCoefficients { n, d: lam.d, xi })
}

/// `∏ ξ_{i,tau}(λ_{i,tau}(t))`.
pub fn eval_torus_coefficients(c: &TorusCoefficients, u: &TorusUnit) -> Result<PadicScalar> {
    let mut acc = u.ring().one();
    for (tau, row) in c.xi.iter().enumerate() {
        for (i, xi) in row.iter().enumerate() {
            acc = acc * xi.eval(u.weight_value(&torus_generator(c.n, c.d, i + 1, tau))?)?;
        }
    }
    Ok(acc)
}

/// Coefficients of `(κ, β)` on the generators of `ℰ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCoefficients {
    pub n: usize,
    pub d: usize,
    pub xi0: Ch,
    /// Unused (trivial) when `n = 1`.
    pub xiw: Ch,
    /// Row `tau0` has `n+1` entries, the others `n`.
    pub xi: Vec<Vec<Ch>>,
    pub big_xi: Vec<Ch>,
}

impl PairCoefficients {
    /// Characters in the order of the branching generator list.
    pub fn to_generator_list(&self) -> Vec<Ch> {
        generator_ids(self.n, self.d)
            .into_iter()
            .map(|id| {
                use crate::branching::GeneratorId::*;
                match id {
                    Mu0 => self.xi0.clone(),
                    MuW => self.xiw.clone(),
                    Mu { i, tau } => self.xi[tau][i - 1].clone(),
                    Pair { tau } => self.big_xi[tau - 1].clone(),
                }
            })
            .collect()
    }

    pub fn from_generator_list(n: usize, d: usize, list: &[Ch]) -> Result<Self> {
        let ids = generator_ids(n, d);
        if list.len() != ids.len() {
            return Err(Error::ShapeMismatch("one character per generator"));
        }
        let one = Ch::trivial(list[0].ring())?;
        let mut out = Self {
            n,
            d,
            xi0: one.clone(),
            xiw: one.clone(),
            xi: (0..d).map(|tau| vec![one.clone(); if tau == 0 { n + 1 } else { n }]).collect(),
            big_xi: vec![one; d - 1],
        };
        for (id, c) in ids.into_iter().zip(list) {
            use crate::branching::GeneratorId::*;
            let slot = match id {
                Mu0 => &mut out.xi0,
                MuW => &mut out.xiw,
                Mu { i, tau } => &mut out.xi[tau][i - 1],
                Pair { tau } => &mut out.big_xi[tau - 1],
            };
            *slot = c.clone();
        }
        Ok(out)
    }
}

pub fn decompose_family_pair(k: &FamilyCharacter) -> Result<PairCoefficients> {
    if !k.satisfies_pair_relations()? {
        return Err(Error::RelationViolated);
    }
    let (n, d, m) = (k.n, k.d, 2 * k.n);
    let ring = k.ring();
    let w = if n >= 2 { k.a(2, 0).mul(k.a(m, 0))? } else { Ch::trivial(ring)? };
    let mut row0 = Vec::with_capacity(n + 1);
    row0.push(k.a(1, 0).clone());
    for i in 2..n {
        row0.push(k.a(i, 0).div(k.a(i + 1, 0))?);
    }
    if n >= 2 {
        row0.push(k.a(n + 1, 0).div(k.a(n + 2, 0))?);
    }
    row0.push(w.div(k.a(n + 1, 0))?);
    let mut xi = vec![row0];
    for tau in 1..d {
        let mut row = Vec::with_capacity(n);
        for i in 1..n {
            row.push(k.a(i, tau).div(k.a(i + 1, tau))?);
        }
        row.push(k.a(n, tau).div(&k.beta[tau - 1])?);
        xi.push(row);
    }
    Ok(PairCoefficients {
        n,
        d,
        xi0: k.c0.clone(),
        xiw: if n >= 2 { w.inv()? } else { Ch::trivial(ring)? },
        xi,
        big_xi: k.beta.clone(),
    })
}

/// `∏ ξ_gen(gen(t, s))` over the generators of `ℰ`.
pub fn eval_pair_coefficients(c: &PairCoefficients, u: &TorusUnit) -> Result<PadicScalar> {
    let mut acc = u.ring().one();
    for ((_, g), xi) in generator_set(c.n, c.d).iter().zip(c.to_generator_list()) {
        acc = acc * xi.eval(u.pair_value(g)?)?;
    }
    Ok(acc)
}

/// Reads every coefficient as `z -> z^k` and sums the generators. The result
/// is not checked for membership in `ℰ`.
pub fn specialize_family(c: &PairCoefficients) -> Result<MonoidPairE> {
    let list = c
        .to_generator_list()
        .iter()
        .map(|x| x.as_algebraic()?.ok_or(Error::NonAlgebraic))
        .collect::<Result<Vec<i64>>>()?;
    Ok(reconstruct(&exponents_from_list(&list, c.n, c.d), c.n, c.d))
}

/// `ω^a <z>^s` with `a` and `s` uniform.
pub fn random_character<R: Rng + ?Sized>(ring: Zpn, rng: &mut R) -> Result<Ch> {
    let a = rng.gen_range(0..ring.p() as i64 - 1);
    Ch::teichmuller_power(ring, a)?.mul(&Ch::principal_power(ring.random(rng))?)
}

/// A random character trivial on `T_0`.
pub fn random_trivial_on_t0<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, rng: &mut R) -> Result<FamilyCharacter> {
    let mut f = FamilyCharacter::trivial(ring, n, d)?;
    for tau in 0..d {
        for i in 0..n {
            let c = random_character(ring, rng)?;
            f.alpha[tau][2 * n - 1 - i] = c.inv()?;
            f.alpha[tau][i] = c;
        }
    }
    Ok(f)
}

/// A random `(κ, β)` satisfying the pair relations.
pub fn random_pair_character<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, rng: &mut R) -> Result<FamilyCharacter> {
    let mut f = random_trivial_on_t0(ring, n, d, rng)?;
    let m = 2 * n;
    f.c0 = random_character(ring, rng)?;
    let w = random_character(ring, rng)?;
    f.alpha[0][0] = random_character(ring, rng)?;
    f.alpha[0][n] = random_character(ring, rng)?;
    for i in 2..=n {
        let c = random_character(ring, rng)?;
        f.alpha[0][m + 1 - i] = w.div(&c)?;
        f.alpha[0][i - 1] = c;
    }
    for b in f.beta.iter_mut() {
        *b = random_character(ring, rng)?;
    }
    Ok(f)
}

/// Looks for a unit in `sample` where the two coefficient tuples evaluate differently.
pub fn find_separating_unit<'a>(a: &PairCoefficients, b: &PairCoefficients, sample: &'a [TorusUnit]) -> Result<Option<&'a TorusUnit>> {
    for u in sample {
        if eval_pair_coefficients(a, u)? != eval_pair_coefficients(b, u)? {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::{decompose_pair, random_pair};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring() -> Zpn {
        Zpn::new(5, 6).unwrap()
    }

    #[test]
    fn algebraic_differences() {
        let k = Weight::from_tau0(2, 1, 0, &[4, 1, -1, -4]).unwrap();
        let f = FamilyCharacter::algebraic(ring(), &k, &[]).unwrap();
        let c = decompose_family(&f).unwrap();
        let got: Vec<_> = c.xi[0].iter().map(|x| x.as_algebraic().unwrap()).collect();
        assert_eq!(got, vec![Some(3), Some(1)]);
    }

    #[test]
    fn trivial_cases() {
        let f = FamilyCharacter::trivial(ring(), 2, 2).unwrap();
        assert!(decompose_family(&f).unwrap().xi.iter().flatten().all(|x| x.is_trivial().unwrap()));
        assert!(decompose_family_pair(&f)
            .unwrap()
            .to_generator_list()
            .iter()
            .all(|x| x.is_trivial().unwrap()));
        assert_eq!(specialize_family(&decompose_family_pair(&f).unwrap()).unwrap(), MonoidPairE::zero(2, 2));
    }

    #[test]
    fn torus_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (n, d) in [(1, 1), (2, 2), (3, 1)] {
            let f = random_trivial_on_t0(ring(), n, d, &mut rng).unwrap();
            let c = decompose_family(&f).unwrap();
            for _ in 0..30 {
                let u = TorusUnit::random(ring(), n, d, &mut rng);
                assert_eq!(eval_torus_coefficients(&c, &u).unwrap(), f.eval(&u).unwrap());
            }
        }
    }

    #[test]
    fn pair_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, d) in [(1, 1), (1, 3), (2, 2), (3, 2)] {
            let f = random_pair_character(ring(), n, d, &mut rng).unwrap();
            let c = decompose_family_pair(&f).unwrap();
            for _ in 0..30 {
                let u = TorusUnit::random(ring(), n, d, &mut rng);
                assert_eq!(eval_pair_coefficients(&c, &u).unwrap(), f.eval(&u).unwrap());
            }
        }
    }

    #[test]
    fn specialization_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (n, d) in [(1, 2), (2, 2), (3, 1)] {
            for _ in 0..10 {
                let x = random_pair(n, d, 5, &mut rng);
                let f = FamilyCharacter::algebraic(ring(), &x.kappa, &x.j).unwrap();
                let c = decompose_family_pair(&f).unwrap();
                let expected = decompose_pair(&x).unwrap().to_list(n, d);
                let got: Vec<_> = c.to_generator_list().iter().map(|x| x.as_algebraic().unwrap().unwrap()).collect();
                assert_eq!(got, expected);
                assert_eq!(specialize_family(&c).unwrap(), x);
            }
        }
    }

    #[test]
    fn errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut f = FamilyCharacter::trivial(ring(), 2, 1).unwrap();
        f.alpha[0][0] = Ch::algebraic(ring(), 1).unwrap();
        assert_eq!(decompose_family(&f), Err(Error::NotTrivialOnT0));
        let mut f = FamilyCharacter::trivial(ring(), 3, 1).unwrap();
        f.alpha[0][1] = Ch::algebraic(ring(), 1).unwrap();
        assert_eq!(decompose_family_pair(&f), Err(Error::RelationViolated));
        let mut c = decompose_family_pair(&FamilyCharacter::trivial(ring(), 2, 1).unwrap()).unwrap();
        c.xiw = Ch::principal_power(ring().elem(5)).unwrap();
        assert_eq!(specialize_family(&c), Err(Error::NonAlgebraic));
        let g = random_pair_character(ring(), 2, 2, &mut rng).unwrap();
        assert!(g.satisfies_pair_relations().unwrap());
    }

    #[test]
    fn perturbation_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_pair_character(ring(), 2, 2, &mut rng).unwrap();
        let c = decompose_family_pair(&f).unwrap();
        let mut bad = c.clone();
        bad.xiw = c.xiw.mul(&Ch::teichmuller_power(ring(), 1).unwrap()).unwrap();
        let sample: Vec<_> = (0..20).map(|_| TorusUnit::random(ring(), 2, 2, &mut rng)).collect();
        assert!(find_separating_unit(&c, &bad, &sample).unwrap().is_some());
        assert!(find_separating_unit(&c, &c, &sample).unwrap().is_none());
    }
}
