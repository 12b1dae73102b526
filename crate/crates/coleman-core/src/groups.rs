//! Elements of `G = GL(1) x prod_tau GL(2n)` and of `H = GL(1) x prod_tau (GL(n) x GL(n))`.
//!
//! Every element is stored in `G`-coordinates: a similitude scalar and one
//! `2n x 2n` block per embedding. `H` sits block-diagonally. The Levi of the
//! parabolic at `tau0` is `GL(1) x GL(2n-1)`; away from `tau0` it is all of
//! `GL(2n)`. The Levi of `H` at `tau0` is `(diag(y1, y2), y3)` with
//! `y2 in GL(n-1)` and `y3 in GL(n)`.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::padic::{PadicScalar, Zpn};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct GroupElement {
    n: usize,
    d: usize,
    sim: PadicScalar,
    blocks: Vec<Matrix>,
}

/// JSON form. Either `blocks` (one `2n x 2n` array per embedding) or
/// `h_blocks` (one `[A, B]` pair per embedding) must be present.
#[derive(Serialize, Deserialize)]
struct RawElement {
    p: u64,
    #[serde(rename = "N")]
    prec: u32,
    n: usize,
    d: usize,
    sim: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h_blocks: Option<Vec<[Vec<Vec<i64>>; 2]>>,
}

impl TryFrom<RawElement> for GroupElement {
    type Error = Error;
    fn try_from(raw: RawElement) -> Result<Self> {
        let ring = Zpn::new(raw.p, raw.prec)?;
        let sim = ring.elem(raw.sim as i128);
        match (raw.blocks, raw.h_blocks) {
            (Some(blocks), None) => {
                let blocks = blocks.iter().map(|b| Matrix::from_rows(ring, b)).collect::<Result<Vec<_>>>()?;
                GroupElement::new(raw.n, raw.d, sim, blocks)
            }
            (None, Some(pairs)) => {
                let pairs = pairs
                    .iter()
                    .map(|[a, b]| Ok((Matrix::from_rows(ring, a)?, Matrix::from_rows(ring, b)?)))
                    .collect::<Result<Vec<_>>>()?;
                GroupElement::from_h_blocks(raw.n, raw.d, sim, &pairs)
            }
            _ => Err(Error::InvalidParameter("give exactly one of blocks and h_blocks")),
        }
    }
}

impl From<GroupElement> for RawElement {
    fn from(g: GroupElement) -> Self {
        let ring = g.ring();
        let rows = |m: &Matrix| -> Vec<Vec<i64>> {
            m.to_signed_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| x as i64).collect())
                .collect()
        };
        RawElement {
            p: ring.p(),
            prec: ring.prec(),
            n: g.n,
            d: g.d,
            sim: g.sim.lift_symmetric() as i64,
            blocks: Some(g.blocks.iter().map(rows).collect()),
            h_blocks: None,
        }
    }
}

impl GroupElement {
    pub fn new(n: usize, d: usize, sim: PadicScalar, blocks: Vec<Matrix>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidParameter("n and d must be positive"));
        }
        if blocks.len() != d || blocks.iter().any(|b| b.rows() != 2 * n || b.cols() != 2 * n) {
            return Err(Error::ShapeMismatch("expected d blocks of size 2n"));
        }
        if blocks.iter().any(|b| b.ring() != sim.ring()) {
            return Err(Error::RingMismatch);
        }
        Ok(Self { n, d, sim, blocks })
    }

    pub fn from_h_blocks(n: usize, d: usize, sim: PadicScalar, pairs: &[(Matrix, Matrix)]) -> Result<Self> {
        if pairs
            .iter()
            .any(|(a, b)| a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n)
        {
            return Err(Error::ShapeMismatch("H blocks must be n x n"));
        }
        Self::new(n, d, sim, pairs.iter().map(|(a, b)| Matrix::block_diag(a, b)).collect())
    }

    pub fn identity(ring: Zpn, n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            sim: ring.one(),
            blocks: vec![Matrix::identity(ring, 2 * n); d],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ring(&self) -> Zpn {
        self.sim.ring()
    }

    pub fn sim(&self) -> PadicScalar {
        self.sim
    }

    pub fn block(&self, tau: usize) -> &Matrix {
        &self.blocks[tau]
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// The pair `(A, B)` of diagonal `n x n` blocks at `tau`.
    pub fn h_pair(&self, tau: usize) -> (Matrix, Matrix) {
        let n = self.n;
        (self.blocks[tau].block(0, 0, n, n), self.blocks[tau].block(n, n, n, n))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.n == other.n && self.d == other.d, "group elements of different shape");
        Self {
            n: self.n,
            d: self.d,
            sim: self.sim * other.sim,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            n: self.n,
            d: self.d,
            sim: self.sim.inverse()?,
            blocks: self.blocks.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?,
        })
    }

    /// `a⁻¹ · self · a`.
    pub fn conjugate_by(&self, a: &Self) -> Result<Self> {
        Ok(a.inverse()?.mul(self).mul(a))
    }

    pub fn is_invertible(&self) -> bool {
        self.sim.is_unit() && self.blocks.iter().all(Matrix::is_invertible)
    }

    pub fn is_identity(&self) -> bool {
        self.sim.is_one() && self.blocks.iter().all(Matrix::is_identity)
    }

    /// Off-diagonal `n x n` blocks vanish.
    pub fn is_in_h(&self) -> bool {
        let n = self.n;
        self.blocks
            .iter()
            .all(|b| (0..n).all(|i| (0..n).all(|j| b.get(i, n + j).is_zero() && b.get(n + i, j).is_zero())))
    }

    /// The `tau0` block is `diag(y, g')` with `g' in GL(2n-1)`.
    pub fn is_in_levi_g(&self) -> bool {
        let b = &self.blocks[0];
        (1..2 * self.n).all(|j| b.get(0, j).is_zero() && b.get(j, 0).is_zero())
    }

    pub fn is_in_levi_h(&self) -> bool {
        self.is_in_h() && self.is_in_levi_g()
    }
}

/// Integer matrices used for the distinguished elements and Lie algebra ranks.
pub type IntMatrix = Vec<Vec<i64>>;

fn int_identity(m: usize) -> IntMatrix {
    (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect()
}

fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r)
        .map(|i| (0..c).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

fn int_transpose(a: &IntMatrix) -> IntMatrix {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

/// The nilpotent part of `u_tau`; `u = 1 + N` with `N² = 0`.
fn u_nilpotent(n: usize, tau0: bool) -> IntMatrix {
    let mut m = vec![vec![0; 2 * n]; 2 * n];
    if tau0 {
        for k in 1..n {
            m[n + k][n - k] = 1;
        }
    } else {
        for i in 0..n {
            m[n + i][n - 1 - i] = 1;
        }
    }
    m
}

/// The nilpotent part of the unipotent factor of `gamma` at `tau0`: first row `(0, 1, ..., 1, 0, ..., 0)`.
fn gamma_nilpotent(n: usize) -> IntMatrix {
    let mut m = vec![vec![0; 2 * n]; 2 * n];
    m[0][1..=n].iter_mut().for_each(|x| *x = 1);
    m
}

fn add_scaled(a: &IntMatrix, b: &IntMatrix, k: i64) -> IntMatrix {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(s, t)| s + k * t).collect()).collect()
}

/// Integer forms of `u, gamma, w_n, w_hat` and their inverses at one embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralDistinguished {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub gamma: IntMatrix,
    pub gamma_inv: IntMatrix,
    pub w_n: IntMatrix,
    pub w_hat: IntMatrix,
    pub w_hat_inv: IntMatrix,
}

/// The shuffle permutation `P` with `[x_0 : ... : x_{2n-1}] · P = [x_1 : ... : x_i : x_0 : x_{i+1} : ...]`.
pub fn shuffle_permutation(i: usize, m: usize) -> IntMatrix {
    let mut p = vec![vec![0; m]; m];
    p[0][i] = 1;
    for j in 0..i {
        p[j + 1][j] = 1;
    }
    for (j, row) in p.iter_mut().enumerate().skip(i + 1) {
        row[j] = 1;
    }
    p
}

pub fn integral_distinguished(n: usize, tau0: bool) -> IntegralDistinguished {
    let id = int_identity(2 * n);
    let nu = u_nilpotent(n, tau0);
    let u = add_scaled(&id, &nu, 1);
    let u_inv = add_scaled(&id, &nu, -1);
    let (gamma, gamma_inv, w_n) = if tau0 {
        let ng = gamma_nilpotent(n);
        let m = add_scaled(&id, &ng, 1);
        let m_inv = add_scaled(&id, &ng, -1);
        (int_mul(&u, &m), int_mul(&m_inv, &u_inv), shuffle_permutation(n, 2 * n))
    } else {
        (u.clone(), u_inv.clone(), id.clone())
    };
    let w_hat = int_mul(&gamma, &w_n);
    let w_hat_inv = int_mul(&int_transpose(&w_n), &gamma_inv);
    IntegralDistinguished {
        u,
        u_inv,
        gamma,
        gamma_inv,
        w_n,
        w_hat,
        w_hat_inv,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinguishedElements {
    pub u: GroupElement,
    pub gamma: GroupElement,
    pub w_n: GroupElement,
    pub w_hat: GroupElement,
}

fn from_integral(ring: Zpn, n: usize, d: usize, pick: impl Fn(&IntegralDistinguished) -> &IntMatrix) -> Result<GroupElement> {
    let at0 = integral_distinguished(n, true);
    let away = integral_distinguished(n, false);
    let blocks = (0..d)
        .map(|tau| Matrix::from_rows(ring, pick(if tau == 0 { &at0 } else { &away })))
        .collect::<Result<Vec<_>>>()?;
    GroupElement::new(n, d, ring.one(), blocks)
}

pub fn build_distinguished_elements(ring: Zpn, n: usize, d: usize) -> Result<DistinguishedElements> {
    Ok(DistinguishedElements {
        u: from_integral(ring, n, d, |x| &x.u)?,
        gamma: from_integral(ring, n, d, |x| &x.gamma)?,
        w_n: from_integral(ring, n, d, |x| &x.w_n)?,
        w_hat: from_integral(ring, n, d, |x| &x.w_hat)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "depth")]
pub enum SubgroupSpec {
    IwahoriG(u32),
    IwahoriH(u32),
    DiamondH(u32),
    G1kk(u32),
    Msquare(u32),
    Mclub(u32),
    Mdiamond(u32),
    BorelLevi,
}

impl SubgroupSpec {
    fn required_precision(self) -> u32 {
        match self {
            SubgroupSpec::G1kk(k) => k + 1,
            SubgroupSpec::BorelLevi => 0,
            SubgroupSpec::IwahoriG(t)
            | SubgroupSpec::IwahoriH(t)
            | SubgroupSpec::DiamondH(t)
            | SubgroupSpec::Msquare(t)
            | SubgroupSpec::Mclub(t)
            | SubgroupSpec::Mdiamond(t) => t,
        }
    }
}

fn congruent(a: PadicScalar, b: PadicScalar, r: u32) -> bool {
    (a - b).valuation().at_least(r)
}

/// Diagonal relations of the stabilizer torus, modulo `p^r`.
///
/// At `tau0` the diagonal reads `(x_1, ..., x_{n+1}, x_n, ..., x_2)`; away from
/// `tau0` the second block's diagonal is the reverse of the first.
fn club_relations(g: &GroupElement, r: u32) -> bool {
    let n = g.n;
    let m = 2 * n;
    let d0 = g.blocks[0].diag();
    let tau0_ok = (1..n).all(|k| congruent(d0[k], d0[m - k], r));
    tau0_ok
        && g.blocks[1..].iter().all(|b| {
            let dg = b.diag();
            (0..n).all(|k| congruent(dg[k], dg[m - 1 - k], r))
        })
}

fn every_block(g: &GroupElement, f: impl Fn(&Matrix) -> bool) -> bool {
    g.blocks.iter().all(f)
}

pub fn subgroup_member(g: &GroupElement, s: SubgroupSpec) -> Result<bool> {
    if s.required_precision() >= g.ring().prec() {
        return Err(Error::PrecisionInsufficient);
    }
    if !g.is_invertible() {
        return Ok(false);
    }
    Ok(match s {
        SubgroupSpec::IwahoriG(t) => every_block(g, |b| b.lower_part_at_least(t)),
        SubgroupSpec::IwahoriH(t) => g.is_in_h() && every_block(g, |b| b.lower_part_at_least(t)),
        SubgroupSpec::DiamondH(t) => {
            if !g.is_in_h() {
                return Ok(false);
            }
            let w = build_distinguished_elements(g.ring(), g.n, g.d)?.w_hat;
            every_block(&g.conjugate_by(&w)?, |b| b.lower_part_at_least(t))
        }
        SubgroupSpec::G1kk(k) => {
            (g.sim - g.ring().one()).valuation().at_least(k + 1)
                && every_block(g, |b| {
                    b.lower_part_at_least(k + 1) && b.upper_part_at_least(k) && b.diag().iter().all(|&x| congruent(x, g.ring().one(), k + 1))
                })
        }
        SubgroupSpec::Msquare(r) => g.is_in_levi_g() && every_block(g, |b| b.lower_part_at_least(r)),
        SubgroupSpec::Mclub(r) => g.is_in_levi_h() && every_block(g, |b| b.off_diagonal_at_least(r)) && club_relations(g, r),
        SubgroupSpec::Mdiamond(r) => {
            g.is_in_levi_h()
                && every_block(g, |b| b.off_diagonal_at_least(r))
                && club_relations(g, r)
                && congruent(g.blocks[0].get(0, 0), g.blocks[0].get(g.n, g.n), r)
        }
        SubgroupSpec::BorelLevi => g.is_in_levi_g() && every_block(g, Matrix::is_upper_triangular),
    })
}

fn check_depth(ring: Zpn, r: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1"));
    }
    if r >= ring.prec() {
        return Err(Error::PrecisionInsufficient);
    }
    Ok(())
}

/// `M = R · S` with `R` unipotent upper and `S` lower triangular, both `≡ 1 mod p^r`.
pub fn iwahori_factor(m: &Matrix, r: u32) -> Result<(Matrix, Matrix)> {
    check_depth(m.ring(), r)?;
    if !m.congruent_to_identity(r) {
        return Err(Error::NotInSubgroup("matrix is not congruent to 1 modulo p^r"));
    }
    m.ul()
}

/// Shape of the antidiagonal matrix `ξ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", content = "size", rename_all = "lowercase")]
pub enum XiShape {
    /// `d x d` with ones on the antidiagonal.
    Square(usize),
    /// `n x (n-1)`: a zero first row above the `(n-1) x (n-1)` antidiagonal.
    Rect(usize),
}

impl XiShape {
    pub fn dims(self) -> (usize, usize) {
        match self {
            XiShape::Square(d) => (d, d),
            XiShape::Rect(n) => (n, n.saturating_sub(1)),
        }
    }

    pub fn matrix(self, ring: Zpn) -> Matrix {
        match self {
            XiShape::Square(d) => Matrix::antidiagonal(ring, d),
            XiShape::Rect(n) => {
                let mut m = Matrix::zeros(ring, n, n.saturating_sub(1));
                for k in 1..n {
                    m.set(k, n - 1 - k, ring.one());
                }
                m
            }
        }
    }
}

/// `ξ + Y = R ξ S` for `Y` with entries of valuation at least `r+1`.
pub fn xi_factor(shape: XiShape, y: &Matrix, r: u32) -> Result<(Matrix, Matrix)> {
    check_depth(y.ring(), r)?;
    if r + 1 >= y.ring().prec() {
        return Err(Error::PrecisionInsufficient);
    }
    if !entries_at_least(y, r + 1) {
        return Err(Error::PreconditionViolated("entries of Y must have valuation at least r+1"));
    }
    xi_factor_at_depth(shape, y, r)
}

fn entries_at_least(m: &Matrix, v: u32) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j).valuation().at_least(v)))
}

/// The same factorization when the entries of `Y` are only known to have
/// valuation at least `r`; this is what the box decomposition needs.
pub fn xi_factor_at_depth(shape: XiShape, y: &Matrix, r: u32) -> Result<(Matrix, Matrix)> {
    check_depth(y.ring(), r)?;
    let ring = y.ring();
    if (y.rows(), y.cols()) != shape.dims() {
        return Err(Error::ShapeMismatch("Y does not match the shape of xi"));
    }
    if !entries_at_least(y, r) {
        return Err(Error::PreconditionViolated("entries of Y must have valuation at least r"));
    }
    match shape {
        XiShape::Square(d) => {
            let j = Matrix::antidiagonal(ring, d);
            let m = &Matrix::identity(ring, d) + &(y * &j);
            let (rr, s) = m.ul()?;
            Ok((rr, s.flip()))
        }
        XiShape::Rect(n) => {
            if n <= 1 {
                return Ok((Matrix::identity(ring, n), Matrix::identity(ring, 0)));
            }
            let top = y.block(0, 0, 1, n - 1);
            let rest = y.block(1, 0, n - 1, n - 1);
            let (r1, s) = xi_factor_at_depth(XiShape::Square(n - 1), &rest, r)?;
            let rho = &(&top * &s.inverse()?) * &Matrix::antidiagonal(ring, n - 1);
            let mut rr = Matrix::identity(ring, n);
            rr.set_block(0, 1, &rho);
            rr.set_block(1, 1, &r1);
            Ok((rr, s))
        }
    }
}

/// One Levi block: `g = u⁻¹ h u b` with `u = [[1, 0], [ξ, 1]]` and the top block of size `a`.
fn box_block(g: &Matrix, a: usize, shape: XiShape, r: u32) -> Result<(Matrix, Matrix)> {
    let ring = g.ring();
    let m = g.rows();
    let c = m - a;
    let (l, up) = g.lu()?;
    let x1 = l.block(0, 0, a, a);
    let x2 = l.block(a, 0, c, a);
    let x3 = l.block(a, a, c, c);
    let xi = shape.matrix(ring);
    let y = &(&x3.inverse()? * &(&x2 + &(&xi * &x1))) - &xi;
    let (rr, s) = xi_factor_at_depth(shape, &y, r)?;
    let h = Matrix::block_diag(&(&x1 * &s.inverse()?), &(&x3 * &rr));
    let b = &Matrix::block_diag(&s, &rr.inverse()?) * &up;
    Ok((h, b))
}

/// `g = u⁻¹ · h · u · b` with `h` in the club subgroup of the Levi of `H` and
/// `b` upper triangular in the square subgroup.
///
/// The similitude and the `GL(1)` entry at `tau0` are placed in `b`.
pub fn box_decompose(g: &GroupElement, r: u32) -> Result<(GroupElement, GroupElement)> {
    check_depth(g.ring(), r)?;
    if !subgroup_member(g, SubgroupSpec::Msquare(r))? {
        return Err(Error::NotInSubgroup("box decomposition needs an element of the square subgroup"));
    }
    let (n, d) = (g.n, g.d);
    let ring = g.ring();
    let mut hs = Vec::with_capacity(d);
    let mut bs = Vec::with_capacity(d);
    for (tau, blk) in g.blocks.iter().enumerate() {
        if tau == 0 {
            let inner = blk.block(1, 1, 2 * n - 1, 2 * n - 1);
            let (h, b) = box_block(&inner, n - 1, XiShape::Rect(n), r)?;
            let one = Matrix::identity(ring, 1);
            hs.push(Matrix::block_diag(&one, &h));
            bs.push(Matrix::block_diag(&blk.block(0, 0, 1, 1), &b));
        } else {
            let (h, b) = box_block(blk, n, XiShape::Square(n), r)?;
            hs.push(h);
            bs.push(b);
        }
    }
    Ok((GroupElement::new(n, d, ring.one(), hs)?, GroupElement::new(n, d, g.sim, bs)?))
}

/// A second decomposition of `g`, obtained by factoring `g β⁻¹` for a random
/// `β` in the Borel of the square subgroup and moving `β` back into `b`.
pub fn box_decompose_randomized<R: Rng + ?Sized>(g: &GroupElement, r: u32, rng: &mut R) -> Result<(GroupElement, GroupElement)> {
    let beta = random_borel_levi(g.ring(), g.n, g.d, rng);
    let (h, b) = box_decompose(&g.mul(&beta.inverse()?), r)?;
    Ok((h, b.mul(&beta)))
}

/// `u⁻¹ h u b`.
pub fn box_reconstruct(h: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    let u = build_distinguished_elements(h.ring(), h.n, h.d)?.u;
    Ok(h.conjugate_by(&u)?.mul(b))
}

fn random_matrix<R: Rng + ?Sized>(ring: Zpn, m: usize, rng: &mut R, mut entry: impl FnMut(usize, usize, &mut R) -> PadicScalar) -> Matrix {
    let mut out = Matrix::zeros(ring, m, m);
    for i in 0..m {
        for j in 0..m {
            out.set(i, j, entry(i, j, rng));
        }
    }
    out
}

fn levi_g_mask(_n: usize, tau: usize, i: usize, j: usize) -> bool {
    tau != 0 || (i == 0) == (j == 0)
}

fn levi_h_mask(n: usize, tau: usize, i: usize, j: usize) -> bool {
    levi_g_mask(n, tau, i, j) && (i < n) == (j < n)
}

/// Random element of `M_G` that is upper triangular.
pub fn random_borel_levi<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, rng: &mut R) -> GroupElement {
    let blocks = (0..d)
        .map(|tau| {
            random_matrix(ring, 2 * n, rng, |i, j, rng| match () {
                _ if i == j => ring.random_unit(rng),
                _ if i < j && levi_g_mask(n, tau, i, j) => ring.random(rng),
                _ => ring.zero(),
            })
        })
        .collect();
    GroupElement {
        n,
        d,
        sim: ring.random_unit(rng),
        blocks,
    }
}

/// Random element of `M_G` whose strictly lower entries are divisible by `p^r`.
pub fn random_msquare<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, r: u32, rng: &mut R) -> GroupElement {
    let blocks = (0..d)
        .map(|tau| {
            random_matrix(ring, 2 * n, rng, |i, j, rng| match () {
                _ if !levi_g_mask(n, tau, i, j) => ring.zero(),
                _ if i == j => ring.random_unit(rng),
                _ if i < j => ring.random(rng),
                _ => ring.random_in_disc(r, rng),
            })
        })
        .collect();
    GroupElement {
        n,
        d,
        sim: ring.random_unit(rng),
        blocks,
    }
}

/// Random element of the Iwahori subgroup of `G` of depth `t`.
pub fn random_iwahori_g<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, t: u32, rng: &mut R) -> GroupElement {
    let blocks = (0..d)
        .map(|_| {
            random_matrix(ring, 2 * n, rng, |i, j, rng| match () {
                _ if i == j => ring.random_unit(rng),
                _ if i < j => ring.random(rng),
                _ => ring.random_in_disc(t, rng),
            })
        })
        .collect();
    GroupElement {
        n,
        d,
        sim: ring.random_unit(rng),
        blocks,
    }
}

/// Random point of the stabilizer torus of the open orbit of the Levi of `H`.
///
/// With `diamond` set, the `GL(1)` entry at `tau0` also equals the first entry
/// of the second block, which is the stabilizer for the full orbit.
pub fn random_stabilizer_torus<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, diamond: bool, rng: &mut R) -> GroupElement {
    let m = 2 * n;
    let blocks = (0..d)
        .map(|tau| {
            let mut diag = vec![ring.one(); m];
            if tau == 0 {
                diag[0] = ring.random_unit(rng);
                diag[n] = if diamond { diag[0] } else { ring.random_unit(rng) };
                for k in 1..n {
                    diag[k] = ring.random_unit(rng);
                    diag[m - k] = diag[k];
                }
            } else {
                for k in 0..n {
                    diag[k] = ring.random_unit(rng);
                    diag[m - 1 - k] = diag[k];
                }
            }
            Matrix::diagonal(ring, &diag)
        })
        .collect();
    GroupElement {
        n,
        d,
        sim: ring.random_unit(rng),
        blocks,
    }
}

/// `1 + p^r X` for random `X` supported on `mask`.
fn random_congruence<R: Rng + ?Sized>(
    ring: Zpn,
    n: usize,
    d: usize,
    r: u32,
    rng: &mut R,
    mask: impl Fn(usize, usize, usize, usize) -> bool,
) -> GroupElement {
    let blocks = (0..d)
        .map(|tau| {
            random_matrix(ring, 2 * n, rng, |i, j, rng| {
                let one = if i == j { ring.one() } else { ring.zero() };
                if mask(n, tau, i, j) {
                    one + ring.random_in_disc(r, rng)
                } else {
                    one
                }
            })
        })
        .collect();
    GroupElement {
        n,
        d,
        sim: ring.one() + ring.random_in_disc(r, rng),
        blocks,
    }
}

/// Random element of the club subgroup of depth `r` (or the diamond subgroup).
pub fn random_mclub<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, r: u32, diamond: bool, rng: &mut R) -> GroupElement {
    let s = random_stabilizer_torus(ring, n, d, diamond, rng);
    s.mul(&random_congruence(ring, n, d, r, rng, levi_h_mask))
}

/// Random element of `K^H_♦(p^t)`.
///
/// A product `∏ (1 + c_K K)` over an integral basis of the stabilizer of the
/// open orbit (each factor lies in `H ∩ w_hat B w_hat⁻¹`), times an element of
/// `H` congruent to 1 modulo `p^t`.
pub fn random_kdiamond<R: Rng + ?Sized>(ring: Zpn, n: usize, d: usize, t: u32, rng: &mut R) -> GroupElement {
    let mut h = GroupElement::identity(ring, n, d);
    h.sim = ring.random_unit(rng);
    for tau in 0..d {
        for k in stabilizer_basis(OrbitCase::Full, n, tau == 0) {
            let km = Matrix::from_rows(ring, &k).expect("integral basis");
            let factor = loop {
                let f = &Matrix::identity(ring, 2 * n) + &km.scale(ring.random(rng));
                if f.is_invertible() {
                    break f;
                }
            };
            h.blocks[tau] = &h.blocks[tau] * &factor;
        }
    }
    h.mul(&random_congruence(ring, n, d, t, rng, |n, _, i, j| (i < n) == (j < n)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitCase {
    /// The Levi of `H` acting on the flag variety of `M_G` through `u`.
    Levi,
    /// `H` acting on the flag variety of `G` through `w_hat`.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerDimensions {
    pub dim_acting: usize,
    pub dim_stab: usize,
    pub dim_flag: usize,
    pub open: bool,
}

/// Rank over `Q` by fraction-free elimination.
pub fn rank_over_q(mut rows: Vec<Vec<i128>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = *x * pivot[c] - f * y;
                }
                let g = row.iter().fold(0i128, |g, &x| gcd(g, x));
                if g > 1 {
                    row.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rank over `F_p`.
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    let p = p as i128;
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| (x as i128).rem_euclid(p)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = mod_inverse(a[rank][c], p);
        let pivot: Vec<i128> = a[rank].iter().map(|x| x * inv % p).collect();
        for row in a.iter_mut().skip(rank + 1) {
            let f = row[c];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        a[rank] = pivot;
        rank += 1;
    }
    rank
}

fn mod_inverse(a: i128, p: i128) -> i128 {
    let (mut r0, mut r1, mut s0, mut s1) = (a, p, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p)
}

/// Matrix of `X -> strictly lower part of c⁻¹ X c` on the Lie algebra spanned
/// by `basis`, restricted to the lower positions in `targets`.
fn lower_part_map(basis: &[(usize, usize)], c: &IntMatrix, c_inv: &IntMatrix, targets: &[(usize, usize)]) -> Vec<Vec<i64>> {
    // Column (i, j) of c⁻¹ E_{ab} c is c_inv[i][a] * c[b][j].
    targets
        .iter()
        .map(|&(i, j)| basis.iter().map(|&(a, b)| c_inv[i][a] * c[b][j]).collect())
        .collect()
}

fn levi_h_basis(n: usize, tau0: bool) -> Vec<(usize, usize)> {
    let m = 2 * n;
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let same_h = (i < n) == (j < n);
            let levi = !tau0 || (i == 0) == (j == 0);
            if same_h && levi {
                out.push((i, j));
            }
        }
    }
    out
}

fn h_basis(n: usize) -> Vec<(usize, usize)> {
    let m = 2 * n;
    (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| (i < n) == (j < n))
        .collect()
}

fn lower_targets(n: usize, levi_tau0: bool) -> Vec<(usize, usize)> {
    let m = 2 * n;
    let lo = usize::from(levi_tau0);
    (lo..m).flat_map(|i| (lo..i).map(move |j| (i, j))).collect()
}

pub fn stabilizer_dimension(case: OrbitCase, n: usize, d: usize) -> Result<StabilizerDimensions> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter("n and d must be positive"));
    }
    let mut dim_acting = 1;
    let mut dim_flag = 0;
    let mut rank = 0;
    for tau in 0..d {
        let tau0 = tau == 0;
        let x = integral_distinguished(n, tau0);
        let (basis, targets, c, c_inv) = match case {
            OrbitCase::Levi => (levi_h_basis(n, tau0), lower_targets(n, tau0), &x.u, &x.u_inv),
            OrbitCase::Full => (h_basis(n), lower_targets(n, false), &x.w_hat, &x.w_hat_inv),
        };
        dim_acting += basis.len();
        dim_flag += targets.len();
        let map = lower_part_map(&basis, c, c_inv, &targets);
        rank += rank_over_q(map.into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect());
    }
    let dim_stab = dim_acting - rank;
    Ok(StabilizerDimensions {
        dim_acting,
        dim_stab,
        dim_flag,
        open: dim_acting - dim_stab == dim_flag,
    })
}

/// Integral basis of the stabilizer Lie algebra at one embedding, as `2n x 2n` matrices.
pub fn stabilizer_basis(case: OrbitCase, n: usize, tau0: bool) -> Vec<IntMatrix> {
    let x = integral_distinguished(n, tau0);
    let (basis, targets, c, c_inv) = match case {
        OrbitCase::Levi => (levi_h_basis(n, tau0), lower_targets(n, tau0), &x.u, &x.u_inv),
        OrbitCase::Full => (h_basis(n), lower_targets(n, false), &x.w_hat, &x.w_hat_inv),
    };
    let map = lower_part_map(&basis, c, c_inv, &targets);
    nullspace_over_q(&map)
        .into_iter()
        .map(|v| {
            let mut m = vec![vec![0; 2 * n]; 2 * n];
            for (&(i, j), &x) in basis.iter().zip(&v) {
                m[i][j] = x;
            }
            m
        })
        .collect()
}

/// Integral vectors spanning the kernel of `rows`.
fn nullspace_over_q(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    type Q = Ratio<i128>;
    let cols = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] != Q::from_integer(0)) else {
            continue;
        };
        a.swap(rank, p);
        let pv = a[rank][c];
        a[rank].iter_mut().for_each(|x| *x /= pv);
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && row[c] != Q::from_integer(0) {
                let f = row[c];
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x -= f * y);
            }
        }
        pivots.push(c);
        rank += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::from_integer(0); cols];
            v[free] = Q::from_integer(1);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free];
            }
            let den = v.iter().fold(1i128, |l, x| lcm(l, *x.denom()));
            v.iter().map(|x| (x * den).to_integer() as i64).collect()
        })
        .collect()
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelIndex {
    /// Index found by enumerating residues, when within budget.
    pub count: Option<u64>,
    /// Index predicted by the rank of the linearised congruence conditions.
    pub rank_value: u64,
    pub formula_value: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Counts pairs `(A, B)` modulo `p^(t+1)` with `w_hat⁻¹ diag(A, B) w_hat`
/// lower-triangular modulo `p^depth`, for `depth = t` and `t+1`.
fn enumerate_component(p: u64, n: usize, t: u32, tau0: bool, budget: &mut u64) -> Result<(u64, u64)> {
    let ring = Zpn::new(p, t + 1)?;
    let x = integral_distinguished(n, tau0);
    let w = Matrix::from_rows(ring, &x.w_hat)?;
    let w_inv = Matrix::from_rows(ring, &x.w_hat_inv)?;
    let basis = h_basis(n);
    let q = ring.modulus();
    let total = (q as u128).checked_pow(basis.len() as u32).ok_or(Error::BudgetExceeded)?;
    if total > *budget as u128 {
        return Err(Error::BudgetExceeded);
    }
    *budget -= total as u64;
    let (mut at_t, mut at_t1) = (0u64, 0u64);
    let mut digits = vec![0u64; basis.len()];
    loop {
        let mut m = Matrix::zeros(ring, 2 * n, 2 * n);
        for (&(i, j), &v) in basis.iter().zip(&digits) {
            m.set(i, j, ring.elem(v as i128));
        }
        if m.is_invertible() {
            let c = &(&w_inv * &m) * &w;
            if c.lower_part_at_least(t) {
                at_t += 1;
                if c.lower_part_at_least(t + 1) {
                    at_t1 += 1;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok((at_t, at_t1));
            }
            digits[k] += 1;
            if digits[k] < q {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

fn rank_component(p: u64, n: usize, tau0: bool) -> usize {
    let x = integral_distinguished(n, tau0);
    let map = lower_part_map(&h_basis(n), &x.w_hat, &x.w_hat_inv, &lower_targets(n, false));
    rank_mod_p(&map, p)
}

/// `[K^H_♦(p^t) : K^H_♦(p^(t+1))]` against `p^(d n (2n-1))`.
pub fn level_index(p: u64, n: usize, d: usize, t: u32, budget: u64) -> Result<LevelIndex> {
    if n == 0 || d == 0 || t == 0 {
        return Err(Error::InvalidParameter("n, d and t must be positive"));
    }
    let exp = (d * n * (2 * n - 1)) as u32;
    let formula_value = p.checked_pow(exp).ok_or(Error::InvalidParameter("index does not fit in 64 bits"))?;
    let ranks = rank_component(p, n, true) + (d - 1) * rank_component(p, n, false);
    let rank_value = p.pow(ranks as u32);
    let mut left = budget;
    let count = (|| -> Result<u64> {
        let (a0, b0) = enumerate_component(p, n, t, true, &mut left)?;
        let mut index = a0 / b0;
        if d > 1 {
            let (a1, b1) = enumerate_component(p, n, t, false, &mut left)?;
            index *= (a1 / b1).pow(d as u32 - 1);
        }
        Ok(index)
    })();
    let count = match count {
        Ok(c) => Some(c),
        Err(Error::BudgetExceeded) => None,
        Err(e) => return Err(e),
    };
    let matches = rank_value == formula_value && count.is_none_or(|c| c == formula_value);
    Ok(LevelIndex {
        count,
        rank_value,
        formula_value,
        matches,
    })
}
