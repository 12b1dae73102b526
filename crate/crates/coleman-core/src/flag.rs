//! Projective coordinates on `P^(2n-1)` and `P^(n-1)`, Bruhat cells and tubes.
//!
//! Points are row vectors; `G` acts on the right by `x ⋆ g = x · ᵗg⁻¹`. Only the
//! `tau0` component carries geometry, so translations use the `tau0` block.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{build_distinguished_elements, random_iwahori_g, random_kdiamond, subgroup_member, GroupElement, SubgroupSpec};
use crate::matrix::Matrix;
use crate::padic::{PadicScalar, Zpn};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagPoint {
    pub coords: Vec<PadicScalar>,
}

impl FlagPoint {
    /// A point with at least one unit coordinate.
    pub fn new(coords: Vec<PadicScalar>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ShapeMismatch("a point needs at least one coordinate"));
        }
        let ring = coords[0].ring();
        if coords.iter().any(|c| c.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        if !coords.iter().any(|c| c.is_unit()) {
            return Err(Error::NotPrimitive);
        }
        Ok(Self { coords })
    }

    pub fn from_ints(ring: Zpn, xs: &[i64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| ring.elem(x as i128)).collect())
    }

    pub fn ring(&self) -> Zpn {
        self.coords[0].ring()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Scale so that the last unit coordinate is exactly 1.
    pub fn normalized(&self) -> Self {
        let i = self.coords.iter().rposition(|c| c.is_unit()).expect("primitive point");
        self.scaled_at(i).expect("unit pivot")
    }

    /// Scale so that coordinate `i` is 1; fails if it is not a unit.
    pub fn scaled_at(&self, i: usize) -> Result<Self> {
        let inv = self.coords[i].inverse()?;
        Ok(Self {
            coords: self.coords.iter().map(|&c| c * inv).collect(),
        })
    }

    /// Equality as points of projective space.
    pub fn same_point(&self, other: &Self) -> bool {
        self.len() == other.len() && self.normalized() == other.normalized()
    }

    fn row(&self) -> Matrix {
        Matrix::from_fn(self.ring(), 1, self.len(), |_, j| self.coords[j])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    G,
    H,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TubeSpec {
    pub cell: usize,
    pub m: u32,
    pub k: u32,
    pub side: Side,
}

impl TubeSpec {
    pub fn new(cell: usize, m: u32, k: u32, side: Side) -> Result<Self> {
        if k > m {
            return Err(Error::InvalidParameter("tube radii need k <= m"));
        }
        Ok(Self { cell, m, k, side })
    }
}

/// `x · ᵗg⁻¹` for a square matrix `g`.
pub fn star_translate_matrix(x: &FlagPoint, g: &Matrix) -> Result<FlagPoint> {
    if g.rows() != x.len() {
        return Err(Error::ShapeMismatch("matrix size differs from the number of coordinates"));
    }
    let m = &x.row() * &g.inverse()?.transpose();
    FlagPoint::new((0..x.len()).map(|j| m.get(0, j)).collect())
}

/// Translation of a point of `P^(2n-1)` by the `tau0` block of `g`.
pub fn star_translate(x: &FlagPoint, g: &GroupElement) -> Result<FlagPoint> {
    star_translate_matrix(x, g.block(0))
}

/// Translation of a point of `P^(n-1)` by the first `GL(n)` factor at `tau0`.
pub fn star_translate_h(y: &FlagPoint, h: &GroupElement) -> Result<FlagPoint> {
    if !h.is_in_h() {
        return Err(Error::NotInSubgroup("element is not in H"));
    }
    star_translate_matrix(y, &h.h_pair(0).0)
}

/// Index of the last coordinate that is nonzero modulo `p`.
pub fn bruhat_cell(x: &FlagPoint) -> usize {
    x.coords.iter().rposition(|c| c.is_unit()).expect("primitive point")
}

/// `[y_1 : ... : y_{n-1} : 0 : y_0 - Σ y_i : -y_{n-1} : ... : -y_1]`.
pub fn iota_hat(y: &FlagPoint) -> Result<FlagPoint> {
    let n = y.len();
    let ring = y.ring();
    let mut out = Vec::with_capacity(2 * n);
    out.extend_from_slice(&y.coords[1..]);
    out.push(ring.zero());
    let tail = y.coords[1..].iter().fold(ring.zero(), |acc, &c| acc + c);
    out.push(y.coords[0] - tail);
    out.extend(y.coords[1..].iter().rev().map(|&c| -c));
    FlagPoint::new(out)
}

/// The untwisted embedding `[y : 0]`.
pub fn iota(y: &FlagPoint) -> Result<FlagPoint> {
    let ring = y.ring();
    let mut coords = y.coords.clone();
    coords.resize(2 * y.len(), ring.zero());
    FlagPoint::new(coords)
}

fn check_radius(ring: Zpn, m: u32) -> Result<()> {
    if m + 1 >= ring.prec() {
        return Err(Error::PrecisionInsufficient);
    }
    Ok(())
}

/// Membership in `]C_{w_i}[_{m,k}`: after scaling coordinate `i` to 1, the
/// earlier coordinates lie in the closed disc of radius `k` and the later ones
/// in the open disc of radius `m`.
pub fn tube_member(x: &FlagPoint, t: TubeSpec) -> Result<bool> {
    if t.k > t.m {
        return Err(Error::InvalidParameter("tube radii need k <= m"));
    }
    if t.cell >= x.len() {
        return Err(Error::InvalidParameter("cell index out of range"));
    }
    check_radius(x.ring(), t.m)?;
    let Ok(y) = x.scaled_at(t.cell) else {
        return Ok(false);
    };
    let before = y.coords[..t.cell].iter().all(|c| c.valuation().at_least(t.k));
    let after = y.coords[t.cell + 1..].iter().all(|c| c.valuation().at_least(t.m + 1));
    Ok(before && after)
}

/// Coordinates after `x_pivot` are divisible by `p^(radius+1)` once `x_pivot` is scaled to 1.
fn tail_small(x: &FlagPoint, pivot: usize, radius: u32) -> Result<bool> {
    check_radius(x.ring(), radius)?;
    let Ok(y) = x.scaled_at(pivot) else {
        return Ok(false);
    };
    Ok(y.coords[pivot + 1..].iter().all(|c| c.valuation().at_least(radius + 1)))
}

/// The Iwahori-saturated tube `𝚄^G_k` around the cell of `w_n`.
pub fn saturated_u_g(x: &FlagPoint, k: u32) -> Result<bool> {
    let n = x.len() / 2;
    if k == 0 {
        return Ok(x.coords[n..].iter().any(|c| c.is_unit()));
    }
    tail_small(x, n, k)
}

/// The Iwahori-saturated tube `𝙸^G_{m,k}`; on integer radii it does not depend on `k`.
pub fn saturated_i_g(x: &FlagPoint, m: u32, _k: u32) -> Result<bool> {
    tail_small(x, x.len() / 2, m)
}

/// `𝚄^H_k`: everything for `k = 0`, otherwise a neighbourhood of `[1 : 0 : ... : 0]`.
pub fn saturated_u_h(y: &FlagPoint, k: u32) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    tail_small(y, 0, k)
}

/// `𝚉^H_m`.
pub fn saturated_z_h(y: &FlagPoint, m: u32) -> Result<bool> {
    tail_small(y, 0, m)
}

/// For `x` in `𝙸^G_{m,k}`, an upper unipotent `g` (so `g` lies in every
/// Iwahori subgroup) with `x ⋆ g` in `]C_{w_n}[_{m,k}`.
pub fn iwahori_witness(x: &FlagPoint, m: u32, k: u32) -> Result<Matrix> {
    if !saturated_i_g(x, m, k)? {
        return Err(Error::PreconditionViolated("point is not in the saturated tube"));
    }
    let n = x.len() / 2;
    let y = x.scaled_at(n)?;
    let ring = x.ring();
    // x ⋆ g = x · L with L lower unipotent, row n equal to -x_j for j < n.
    let mut l = Matrix::identity(ring, 2 * n);
    for j in 0..n {
        l.set(n, j, -y.coords[j]);
    }
    l.transpose().inverse()
}

/// `x ⋆ diag(p^{e_0}, ..., p^{e_{2n-1}})`, rescaled to a primitive vector.
///
/// Coordinate `j` is multiplied by `p^{max e - e_j}`; dividing out the common
/// power of `p` lowers the working precision by that amount.
pub fn hecke_translate(x: &FlagPoint, exps: &[i64]) -> Result<FlagPoint> {
    if exps.len() != x.len() {
        return Err(Error::ShapeMismatch("one exponent per coordinate"));
    }
    let ring = x.ring();
    let top = *exps.iter().max().expect("nonempty");
    let scaled: Vec<PadicScalar> = x
        .coords
        .iter()
        .zip(exps)
        .map(|(&c, &e)| {
            let shift = u32::try_from(top - e).unwrap_or(u32::MAX);
            if shift >= ring.prec() {
                ring.zero()
            } else {
                c * ring.p_power(shift)
            }
        })
        .collect();
    let v = scaled
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.valuation().floor())
        .min()
        .ok_or(Error::PrecisionInsufficient)?;
    let coords = scaled.iter().map(|c| c.div_p_power(v)).collect::<Result<Vec<_>>>()?;
    FlagPoint::new(coords)
}

/// `v(x_j) - v(x_pivot)` for every `j`, or `None` where precision is exhausted.
pub fn relative_valuations(x: &FlagPoint, pivot: usize) -> Result<Vec<Option<i64>>> {
    let finite = |c: &PadicScalar| match c.valuation() {
        crate::padic::Valuation::Finite(v) => Some(i64::from(v)),
        crate::padic::Valuation::AtLeast(_) => None,
    };
    let base = finite(&x.coords[pivot]).ok_or(Error::PrecisionInsufficient)?;
    Ok(x.coords.iter().map(|c| finite(c).map(|v| v - base)).collect())
}

/// Every point of `P^(n-1)(F_p)`, normalized with last nonzero coordinate 1.
pub fn projective_points(ring: Zpn, n: usize, budget: u64) -> Result<Vec<FlagPoint>> {
    let p = ring.p();
    let count = (p.checked_pow(n as u32).ok_or(Error::BudgetExceeded)? - 1) / (p - 1);
    if count > budget {
        return Err(Error::BudgetExceeded);
    }
    let mut out = Vec::with_capacity(count as usize);
    for lead in 0..n {
        let free = lead as u32;
        for code in 0..p.pow(free) {
            let mut coords = alloc::vec![ring.zero(); n];
            coords[lead] = ring.one();
            let mut c = code;
            for slot in coords.iter_mut().take(lead) {
                *slot = ring.elem((c % p) as i128);
                c /= p;
            }
            out.push(FlagPoint::new(coords)?);
        }
    }
    Ok(out)
}

/// Over `F_p`: `ι̂` never lands in a cell below `w_n`, and lands in `C_{w_n}`
/// exactly on the identity cell `[1 : 0 : ... : 0]` of `P^(n-1)`.
pub fn verify_cell_preimages(n: usize, p: u64, budget: u64) -> Result<Report> {
    let ring = Zpn::new(p, 1)?;
    let mut report = Report::new();
    for y in projective_points(ring, n, budget)? {
        let cell = bruhat_cell(&iota_hat(&y)?);
        let in_id = bruhat_cell(&y) == 0;
        let ok = cell >= n && ((cell == n) == in_id);
        report.check(
            ok,
            || format!("n={n} p={p} y={:?}", y.coords),
            || format!("cell >= {n}, equal to {n} iff y is in the identity cell"),
            || format!("cell {cell}, identity cell {in_id}"),
        );
    }
    Ok(report)
}

/// A random primitive vector whose coordinates after the first have a valuation
/// drawn from `0..=spread`, so that every tube is hit with positive frequency.
pub fn random_h_point<R: Rng + ?Sized>(ring: Zpn, n: usize, spread: u32, rng: &mut R) -> FlagPoint {
    loop {
        let mut coords = Vec::with_capacity(n);
        coords.push(if rng.gen_bool(0.8) { ring.random_unit(rng) } else { ring.random(rng) });
        for _ in 1..n {
            let v = rng.gen_range(0..=spread.min(ring.prec() - 1));
            coords.push(ring.random_unit(rng) * ring.p_power(v));
        }
        if let Ok(pt) = FlagPoint::new(coords) {
            return pt;
        }
    }
}

/// Sampled check of the Cartesian square relating tubes in `P^(n-1)` and `P^(2n-1)`.
///
/// For each sample `y` with `h ∈ K^H_♦(p^t)` and `κ ∈ K^G_Iw(p^t)`:
/// * `y ∈ 𝚄^H_k ⇔ ι̂(y) ∈ 𝚄^G_k` and `y ∈ 𝚉^H_m ⇔ ι̂(y) ∈ 𝙸^G_{m,k}`;
/// * `ι̂(y ⋆ h) = ι̂(y) ⋆ (w_hat⁻¹ h w_hat)` with the conjugate in the Iwahori;
/// * both saturated tubes are stable under `κ`;
/// * points of `𝙸^G_{m,k}` are moved into `]C_{w_n}[_{m,k}` by an explicit Iwahori element.
#[allow(clippy::too_many_arguments)]
pub fn cartesian_sample<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, m: u32, k: u32, t: u32, samples: u64, rng: &mut R) -> Result<Report> {
    if !(k <= m && m < t) {
        return Err(Error::InvalidParameter("need 0 <= k <= m < t"));
    }
    check_radius(ring, t)?;
    let w_hat = build_distinguished_elements(ring, n, d)?.w_hat;
    let mut report = Report::new();
    for _ in 0..samples {
        let y = random_h_point(ring, n, m + 2, rng);
        let h = random_kdiamond(ring, n, d, t, rng);
        let kappa = random_iwahori_g(ring, n, d, t, rng);
        let x = iota_hat(&y)?;
        let input = || format!("y={:?} h={:?} kappa={:?}", y.coords, h, kappa);

        let (uh, ug) = (saturated_u_h(&y, k)?, saturated_u_g(&x, k)?);
        report.check(uh == ug, input, || format!("U^H_k = {uh}"), || format!("U^G_k = {ug}"));
        let (zh, ig) = (saturated_z_h(&y, m)?, saturated_i_g(&x, m, k)?);
        report.check(zh == ig, input, || format!("Z^H_m = {zh}"), || format!("I^G_mk = {ig}"));

        let conj = h.conjugate_by(&w_hat)?;
        let lhs = iota_hat(&star_translate_h(&y, &h)?)?;
        let rhs = star_translate(&x, &conj)?;
        let iw = subgroup_member(&conj, SubgroupSpec::IwahoriG(t))?;
        report.check(
            lhs.same_point(&rhs) && iw,
            input,
            || "equivariant image in the Iwahori orbit".into(),
            || format!("{:?} vs {:?}, Iwahori {iw}", lhs.coords, rhs.coords),
        );

        let moved = star_translate(&x, &kappa)?;
        let stable_u = saturated_u_g(&moved, k)? == ug;
        let stable_i = saturated_i_g(&moved, m, k)? == ig;
        report.check(
            stable_u && stable_i,
            input,
            || "saturated tubes are Iwahori stable".into(),
            || format!("U {stable_u}, I {stable_i}"),
        );

        if ig {
            let g = iwahori_witness(&x, m, k)?;
            let inside = tube_member(&star_translate_matrix(&x, &g)?, TubeSpec::new(n, m, k, Side::G)?)?;
            let iw = g.lower_part_at_least(t) && g.is_invertible();
            report.check(
                inside && iw,
                input,
                || "Iwahori witness into the basic tube".into(),
                || format!("inside {inside}, Iwahori {iw}"),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{integral_distinguished, random_iwahori_g, shuffle_permutation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u64, n: u32) -> Zpn {
        Zpn::new(p, n).unwrap()
    }

    fn pt(r: Zpn, xs: &[i64]) -> FlagPoint {
        FlagPoint::from_ints(r, xs).unwrap()
    }

    #[test]
    fn shuffle_action() {
        let r = ring(5, 3);
        let x = pt(r, &[10, 11, 12, 13]);
        for i in 0..4 {
            let w = Matrix::from_rows(r, &shuffle_permutation(i, 4)).unwrap();
            let got = star_translate_matrix(&x, &w).unwrap();
            let mut expected: Vec<i64> = (1..=i as i64).map(|j| 10 + j).collect();
            expected.push(10);
            expected.extend((i as i64 + 1..4).map(|j| 10 + j));
            assert_eq!(got, pt(r, &expected));
        }
        let g = Matrix::identity(r, 4);
        assert_eq!(star_translate_matrix(&x, &g).unwrap(), x);
    }

    #[test]
    fn cell_examples() {
        let r = ring(3, 4);
        assert_eq!(bruhat_cell(&pt(r, &[1, 0, 0, 0])), 0);
        assert_eq!(bruhat_cell(&pt(r, &[7, 1, 0, 0])), 1);
        assert_eq!(bruhat_cell(&pt(r, &[3, 1, 9, 1])), 3);
    }

    #[test]
    fn borel_keeps_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = ring(3, 5);
        for i in 0..4 {
            let mut coords = alloc::vec![r.zero(); 4];
            coords[i] = r.one();
            let x = FlagPoint::new(coords).unwrap();
            for _ in 0..20 {
                let b = Matrix::from_fn(r, 4, 4, |a, c| match () {
                    _ if a == c => r.random_unit(&mut rng),
                    _ if a < c => r.random(&mut rng),
                    _ => r.zero(),
                });
                assert_eq!(bruhat_cell(&star_translate_matrix(&x, &b).unwrap()), i);
            }
        }
    }

    #[test]
    fn iota_hat_examples() {
        let r = ring(5, 3);
        assert_eq!(iota_hat(&pt(r, &[1])).unwrap(), pt(r, &[0, 1]));
        assert_eq!(iota_hat(&pt(r, &[1, 0])).unwrap(), pt(r, &[0, 0, 1, 0]));
        assert_eq!(iota_hat(&pt(r, &[0, 1])).unwrap(), pt(r, &[1, 0, -1, -1]));
    }

    #[test]
    fn iota_hat_is_translate_by_w_hat() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..5 {
            let r = ring(7, 4);
            let w = Matrix::from_rows(r, &integral_distinguished(n, true).w_hat).unwrap();
            for _ in 0..20 {
                let y = random_h_point(r, n, 2, &mut rng);
                let a = iota_hat(&y).unwrap();
                let b = star_translate_matrix(&iota(&y).unwrap(), &w).unwrap();
                assert!(a.same_point(&b), "n={n}");
                assert!(a.coords[n - 1].is_zero());
            }
        }
    }

    #[test]
    fn tube_examples() {
        let r = ring(3, 6);
        for k in 0..3u32 {
            for m in k..4 {
                let x = FlagPoint::new(alloc::vec![r.p_power(k), r.one()]).unwrap();
                assert!(tube_member(&x, TubeSpec::new(1, m, k, Side::G).unwrap()).unwrap());
                if m >= 1 {
                    let y = FlagPoint::new(alloc::vec![r.one(), r.p_power(m)]).unwrap();
                    for cell in 0..2 {
                        assert!(!tube_member(&y, TubeSpec::new(cell, m, k, Side::G).unwrap()).unwrap());
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x = FlagPoint::new((0..4).map(|_| r.random(&mut rng)).collect()).unwrap_or_else(|_| pt(r, &[1, 0, 0, 0]));
            let c = bruhat_cell(&x);
            assert!(tube_member(&x, TubeSpec::new(c, 0, 0, Side::G).unwrap()).unwrap());
        }
    }

    #[test]
    fn preimage_counts() {
        let rep = verify_cell_preimages(2, 3, 1000).unwrap();
        assert_eq!((rep.checked, rep.failures.len()), (4, 0));
        let rep = verify_cell_preimages(1, 2, 1000).unwrap();
        assert_eq!((rep.checked, rep.failures.len()), (1, 0));
        let rep = verify_cell_preimages(3, 2, 1000).unwrap();
        assert_eq!((rep.checked, rep.failures.len()), (7, 0));
        assert_eq!(verify_cell_preimages(3, 3, 5), Err(Error::BudgetExceeded));
    }

    #[test]
    fn right_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let r = ring(5, 4);
        for _ in 0..50 {
            let x = random_h_point(r, 4, 2, &mut rng);
            let g = random_iwahori_g(r, 2, 1, 1, &mut rng);
            let h = random_iwahori_g(r, 2, 1, 1, &mut rng);
            let lhs = star_translate(&star_translate(&x, &g).unwrap(), &h).unwrap();
            let rhs = star_translate(&x, &g.mul(&h)).unwrap();
            assert!(lhs.same_point(&rhs));
        }
    }

    #[test]
    fn hecke_contraction() {
        let r = ring(3, 12);
        let n = 2;
        let x = pt(r, &[5, 3, 1, 27]);
        let std: Vec<i64> = (0..2 * n as i64).collect();
        let before = relative_valuations(&x, n).unwrap();
        let after = relative_valuations(&hecke_translate(&x, &std).unwrap(), n).unwrap();
        for j in 0..n {
            assert_eq!(after[j], before[j].map(|v| v + (n - j) as i64));
        }
        let inv: Vec<i64> = std.iter().map(|e| -e).collect();
        let after = relative_valuations(&hecke_translate(&x, &inv).unwrap(), n).unwrap();
        assert_eq!(after[3], Some(4));
        assert_eq!(after[0], Some(-2));
    }

    #[test]
    fn cartesian_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (p, n, d, m, k, t) in [(3, 1, 1, 0, 0, 1), (3, 2, 2, 1, 0, 2), (5, 3, 1, 2, 1, 3)] {
            let rep = cartesian_sample(ring(p, 8), n, d, m, k, t, 60, &mut rng).unwrap();
            assert!(rep.ok(), "{:?}", rep.failures.first());
        }
    }
}
