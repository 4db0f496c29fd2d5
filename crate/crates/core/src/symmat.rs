//! Symbolic constructions on the generic matrices `X = (x_{(i-1)n+j})` and
//! `Y = (y_{(i-1)n+j})`: determinant, adjugate, the invertibility relation
//! `x0·det(X) - 1`, and the substitutions that express `f(XY)`, `f(X⁻¹)` and
//! `f(X·Y⁻¹)` as polynomials.
//!
//! Denominators never appear as rational functions. `f(X⁻¹)` is returned as
//! a numerator `h` together with the exponent `l` of `det(X)` underneath it;
//! inverses of `det(Y)` are written with the variable `y0` instead.

use std::collections::HashMap;
use std::sync::Arc;

use crate::coeff::Field;
use crate::parse::ProblemSpec;
use crate::poly::{MonomialOrder, PolyError, Polynomial, VarRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    X,
    Y,
}

impl Block {
    fn prefix(self) -> char {
        match self {
            Block::X => 'x',
            Block::Y => 'y',
        }
    }

    /// Name of the `(i, j)` entry, 0-based, row-major: `x1 … xn` is row one.
    pub fn entry_name(self, n: usize, i: usize, j: usize) -> String {
        format!("{}{}", self.prefix(), i * n + j + 1)
    }

    /// The block's inverse-determinant variable, `x0` or `y0`.
    pub fn inverse_det_name(self) -> String {
        format!("{}0", self.prefix())
    }

    fn entry_names(self, n: usize) -> impl Iterator<Item = String> {
        (1..=n * n).map(move |k| format!("{}{k}", self.prefix()))
    }
}

/// `K[x1, …, x_{n²}]` under degrevlex.
pub fn x_ring<K: Field>(n: usize, ctx: K::Ctx) -> Arc<VarRing<K>> {
    VarRing::for_matrices(n, Block::X.entry_names(n), MonomialOrder::degrevlex(), ctx)
        .expect("distinct names")
}

/// `K[x1, …, x_{n²}, x0]`, with `x0` ranked lowest.
pub fn xhat_ring<K: Field>(n: usize, ctx: K::Ctx) -> Arc<VarRing<K>> {
    let names = Block::X.entry_names(n).chain(std::iter::once("x0".to_string()));
    VarRing::for_matrices(n, names, MonomialOrder::degrevlex(), ctx).expect("distinct names")
}

/// The two-block ring. Ranking from highest: `y1 … y_{n²}`, `y0`,
/// `x1 … x_{n²}`, `x0`. With `hat = false` the `x0`/`y0` variables are
/// omitted.
pub fn xy_ring<K: Field>(n: usize, ctx: K::Ctx, hat: bool) -> Arc<VarRing<K>> {
    let mut names: Vec<String> = Block::Y.entry_names(n).collect();
    if hat {
        names.push("y0".into());
    }
    names.extend(Block::X.entry_names(n));
    if hat {
        names.push("x0".into());
    }
    VarRing::for_matrices(n, names, MonomialOrder::degrevlex(), ctx).expect("distinct names")
}

/// The generic matrix of `block` inside `ring`.
pub fn generic_matrix<K: Field>(
    ring: &Arc<VarRing<K>>,
    n: usize,
    block: Block,
) -> Result<Vec<Vec<Polynomial<K>>>, PolyError> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Polynomial::var_named(ring, &block.entry_name(n, i, j)))
                .collect()
        })
        .collect()
}

/// Determinant by first-row cofactor expansion, memoising minors by the set
/// of columns they use.
pub fn det_of<K: Field>(ring: &Arc<VarRing<K>>, m: &[Vec<Polynomial<K>>]) -> Polynomial<K> {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(ring);
    }
    assert!(n <= 16, "determinant of order {n} not supported");
    let mut memo: HashMap<u32, Polynomial<K>> = HashMap::new();
    minor_det(ring, m, 0, (1u32 << n) - 1, &mut memo)
}

fn minor_det<K: Field>(
    ring: &Arc<VarRing<K>>,
    m: &[Vec<Polynomial<K>>],
    row: usize,
    cols: u32,
    memo: &mut HashMap<u32, Polynomial<K>>,
) -> Polynomial<K> {
    if cols == 0 {
        return Polynomial::one(ring);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = Polynomial::zero(ring);
    let mut sign_positive = true;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let sub = minor_det(ring, m, row + 1, cols & !(1 << c), memo);
            let t = entry * &sub;
            acc = if sign_positive { &acc + &t } else { &acc - &t };
        }
        sign_positive = !sign_positive;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// `det` of the generic matrix of `block`, expanded in `ring`.
pub fn det_poly<K: Field>(ring: &Arc<VarRing<K>>, n: usize, block: Block) -> Result<Polynomial<K>, PolyError> {
    Ok(det_of(ring, &generic_matrix(ring, n, block)?))
}

/// Classical adjoint (transposed cofactor matrix) of `m`.
pub fn adjugate_of<K: Field>(ring: &Arc<VarRing<K>>, m: &[Vec<Polynomial<K>>]) -> Vec<Vec<Polynomial<K>>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![Polynomial::one(ring)]];
    }
    let mut adj = vec![vec![Polynomial::zero(ring); n]; n];
    for r in 0..n {
        for c in 0..n {
            let minor: Vec<Vec<Polynomial<K>>> = (0..n)
                .filter(|&i| i != r)
                .map(|i| (0..n).filter(|&j| j != c).map(|j| m[i][j].clone()).collect())
                .collect();
            let d = det_of(ring, &minor);
            // adj(M)_{c,r} = (-1)^{r+c} det(M without row r and column c)
            adj[c][r] = if (r + c) % 2 == 0 { d } else { d.neg() };
        }
    }
    adj
}

pub fn adjugate<K: Field>(
    ring: &Arc<VarRing<K>>,
    n: usize,
    block: Block,
) -> Result<Vec<Vec<Polynomial<K>>>, PolyError> {
    Ok(adjugate_of(ring, &generic_matrix(ring, n, block)?))
}

/// `x0·det(X) - 1` (or the `Y` counterpart).
pub fn build_f0_for<K: Field>(ring: &Arc<VarRing<K>>, n: usize, block: Block) -> Result<Polynomial<K>, PolyError> {
    let inv = Polynomial::var_named(ring, &block.inverse_det_name())?;
    Ok(&(&inv * &det_poly(ring, n, block)?) - &Polynomial::one(ring))
}

pub fn build_f0<K: Field>(ring: &Arc<VarRing<K>>, n: usize) -> Result<Polynomial<K>, PolyError> {
    build_f0_for(ring, n, Block::X)
}

/// Generators of `Î = I + (x0·det(X) - 1)` in `K[x1, …, x_{n²}, x0]`.
pub fn build_hat_ideal<K: Field>(spec: &ProblemSpec<K>) -> (Arc<VarRing<K>>, Vec<Polynomial<K>>) {
    let ring = xhat_ring::<K>(spec.n, spec.ring.ctx().clone());
    let mut gens: Vec<Polynomial<K>> = spec
        .generators
        .iter()
        .map(|g| g.embed(&ring).expect("x-ring embeds in the hat ring"))
        .collect();
    gens.push(build_f0(&ring, spec.n).expect("hat ring has x0"));
    (ring, gens)
}

fn matrix_product<K: Field>(
    ring: &Arc<VarRing<K>>,
    a: &[Vec<Polynomial<K>>],
    b: &[Vec<Polynomial<K>>],
) -> Vec<Vec<Polynomial<K>>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(Polynomial::zero(ring), |acc, k| &acc + &(&a[i][k] * &b[k][j]))
                })
                .collect()
        })
        .collect()
}

fn entry_images<K: Field>(f: &Polynomial<K>, n: usize, entries: &[Vec<Polynomial<K>>]) -> Vec<Option<Polynomial<K>>> {
    let src = f.ring();
    (0..src.arity())
        .map(|v| {
            let name = src.name(v);
            let k: usize = name.strip_prefix('x')?.parse().ok()?;
            if k == 0 || k > n * n {
                return None;
            }
            Some(entries[(k - 1) / n][(k - 1) % n].clone())
        })
        .collect()
}

fn matrix_dim_of<K: Field>(f: &Polynomial<K>) -> usize {
    f.ring().matrix_dim().expect("polynomial must live in a matrix ring")
}

/// `f(XY)`: each `x_{(i-1)n+j}` becomes the `(i, j)` entry of `XY`.
pub fn subst_product<K: Field>(f: &Polynomial<K>, xy: &Arc<VarRing<K>>) -> Result<Polynomial<K>, PolyError> {
    let n = matrix_dim_of(f);
    let prod = matrix_product(xy, &generic_matrix(xy, n, Block::X)?, &generic_matrix(xy, n, Block::Y)?);
    f.substitute(xy, &entry_images(f, n, &prod))
}

/// `f(X·N(Y))` with `N(Y) = y0·adj(Y)`; each entry becomes `y0·(X·adj(Y))_{ij}`.
/// This equals `f(X·Y⁻¹)` modulo `y0·det(Y) - 1`.
pub fn subst_x_times_inverse_y<K: Field>(
    f: &Polynomial<K>,
    xy: &Arc<VarRing<K>>,
) -> Result<Polynomial<K>, PolyError> {
    let n = matrix_dim_of(f);
    let y0 = Polynomial::var_named(xy, "y0")?;
    let prod = matrix_product(xy, &generic_matrix(xy, n, Block::X)?, &adjugate(xy, n, Block::Y)?);
    let scaled: Vec<Vec<Polynomial<K>>> =
        prod.into_iter().map(|row| row.into_iter().map(|e| &y0 * &e).collect()).collect();
    f.substitute(xy, &entry_images(f, n, &scaled))
}

/// `f` at a formal inverse, as a numerator over `det^l`: `h / det(x)^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalInverseImage<K: Field> {
    pub numerator: Polynomial<K>,
    pub denom_exponent: u32,
}

/// Substitutes `entry_k ↦ images_k / pad` and clears the denominator with
/// `pad^L`, `L = deg f`: a degree-`m` term picks up `pad^{L-m}`.
fn padded_substitution<K: Field>(
    f: &Polynomial<K>,
    target: &Arc<VarRing<K>>,
    images: &[Option<Polynomial<K>>],
    pad: &Polynomial<K>,
) -> Result<FormalInverseImage<K>, PolyError> {
    let l = f.total_degree().unwrap_or(0);
    let mut pad_powers = vec![Polynomial::one(target)];
    for k in 1..=l as usize {
        let next = &pad_powers[k - 1] * pad;
        pad_powers.push(next);
    }
    // Group terms by degree so each pad power multiplies once.
    let mut by_degree: HashMap<u32, Vec<(crate::poly::Monomial, K)>> = HashMap::new();
    for (m, c) in f.terms() {
        by_degree.entry(m.degree()).or_default().push((m.clone(), c.clone()));
    }
    let mut h = Polynomial::zero(target);
    for (deg, terms) in by_degree {
        let part = Polynomial::from_terms(f.ring(), terms).substitute(target, images)?;
        h = &h + &(&part * &pad_powers[(l - deg) as usize]);
    }
    Ok(FormalInverseImage { numerator: h, denom_exponent: l })
}

/// `f(N(X))` with `N(X) = adj(X)/det(X)`, returned as `h / det^l` where
/// `l = deg f` (lower-degree terms are padded with powers of `det`).
pub fn eval_at_formal_inverse<K: Field>(f: &Polynomial<K>) -> Result<FormalInverseImage<K>, PolyError> {
    let n = matrix_dim_of(f);
    let ring = f.ring();
    let adj = adjugate(ring, n, Block::X)?;
    let det = det_poly(ring, n, Block::X)?;
    padded_substitution(f, ring, &entry_images(f, n, &adj), &det)
}

/// `k = h·det(X)`.
pub fn make_k<K: Field>(img: &FormalInverseImage<K>) -> Result<Polynomial<K>, PolyError> {
    let ring = img.numerator.ring();
    let n = ring.matrix_dim().expect("matrix ring");
    Ok(&img.numerator * &det_poly(ring, n, Block::X)?)
}

/// `f(X·adj(Y)/det(Y))` as `h / det(Y)^l` in a ring without `y0`.
pub fn subst_x_times_adj_y<K: Field>(
    f: &Polynomial<K>,
    xy: &Arc<VarRing<K>>,
) -> Result<FormalInverseImage<K>, PolyError> {
    let n = matrix_dim_of(f);
    let prod = matrix_product(xy, &generic_matrix(xy, n, Block::X)?, &adjugate(xy, n, Block::Y)?);
    let det_y = det_poly(xy, n, Block::Y)?;
    padded_substitution(f, xy, &entry_images(f, n, &prod), &det_y)
}
