//! Ways to build tight fusion frames: orbits of finite orthogonal groups,
//! composition of a frame inside the subspaces of another, realification of
//! complex projective designs, and a small catalog of named examples.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::frame::{FrameEntry, WeightedFrame};
use crate::gram::{projector_distance, Subspace, SAME_SUBSPACE_TOL};
use crate::poly::{check_size, monomials, HomogeneousPoly};

/// Largest allowed deviation of `G^T G` from the identity.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Max-norm distance under which two group elements are identified.
pub const ELEMENT_TOL: f64 = 1e-8;

/// Largest monomial space on which the Reynolds operator is built.
pub const REYNOLDS_LIMIT: u128 = 100_000;

/// Tolerance on the unit hermitian norm of complex line representatives.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// A finite subgroup of `O(d)`, stored element by element.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    d: usize,
    elements: Vec<DMatrix<f64>>,
    generators: Vec<DMatrix<f64>>,
}

impl MatrixGroup {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[DMatrix<f64>] {
        &self.elements
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    fn position(&self, g: &DMatrix<f64>) -> Option<usize> {
        self.elements.iter().position(|h| (h - g).amax() <= ELEMENT_TOL)
    }

    /// Whether the product of any two elements is again an element.
    pub fn is_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| self.position(&(a * b)).is_some()))
    }
}

/// Breadth-first closure of the generators under multiplication.
pub fn close_group(generators: &[DMatrix<f64>], max_order: usize) -> Result<MatrixGroup> {
    let d = generators
        .first()
        .ok_or_else(|| FrameError::Parameter("at least one generator is required".into()))?
        .nrows();
    for g in generators {
        if g.shape() != (d, d) {
            return Err(FrameError::Dimension(format!("generator of shape {:?} in dimension {d}", g.shape())));
        }
        let dev = (g.transpose() * g - DMatrix::<f64>::identity(d, d)).amax();
        if dev > ORTHOGONALITY_TOL {
            return Err(FrameError::NotOrthogonal(dev));
        }
    }
    let mut group = MatrixGroup { d, elements: vec![DMatrix::identity(d, d)], generators: generators.to_vec() };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let h = &group.elements[i] * g;
            if group.position(&h).is_none() {
                if group.elements.len() == max_order {
                    return Err(FrameError::GroupTooLarge(max_order));
                }
                group.elements.push(h);
                queue.push_back(group.elements.len() - 1);
            }
        }
    }
    Ok(group)
}

/// `f(g x)` for a homogeneous polynomial `f`.
pub fn substitute(f: &HomogeneousPoly, g: &DMatrix<f64>) -> HomogeneousPoly {
    let d = f.dim();
    // (g x)_i as linear forms, with their powers cached
    let powers: Vec<Vec<HomogeneousPoly>> = (0..d)
        .map(|i| {
            let row: Vec<f64> = g.row(i).iter().copied().collect();
            let lin = HomogeneousPoly::linear(&row);
            let mut v = vec![HomogeneousPoly::constant(d, 1.0)];
            for e in 1..=f.degree() {
                let next = v[e - 1].mul(&lin);
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = HomogeneousPoly::zero(d, f.degree());
    for (e, c) in f.terms() {
        let mut term = HomogeneousPoly::constant(d, c);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                term = term.mul(&powers[i][k as usize]);
            }
        }
        out.add_scaled(&term, 1.0);
    }
    out
}

/// Group average `(1/|G|) Σ_g f(g x)`.
pub fn reynolds(group: &MatrixGroup, f: &HomogeneousPoly) -> HomogeneousPoly {
    let mut out = HomogeneousPoly::zero(f.dim(), f.degree());
    let w = 1.0 / group.order() as f64;
    for g in group.elements() {
        out.add_scaled(&substitute(f, g), w);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub p: usize,
    /// Dimension of the degree-`2p` invariant polynomials.
    pub invariant_dim: usize,
    /// Whether `(Σ x_i^2)^p` spans them, i.e. every orbit is a tight
    /// `p`-fusion frame.
    pub passes: bool,
}

/// Rank of the Reynolds operator on degree-`2p` forms.
///
/// The operator is idempotent, so its rank is its trace: the sum over
/// monomials `m` of the coefficient of `m` in the group average of `m`.
pub fn invariance_check(group: &MatrixGroup, p: usize) -> Result<InvarianceReport> {
    if p == 0 {
        return Err(FrameError::Parameter("power must be at least 1".into()));
    }
    let d = group.dim();
    check_size(d, 2 * p, REYNOLDS_LIMIT)?;
    let trace: f64 = monomials(d, 2 * p)
        .into_iter()
        .map(|e| {
            let mut m = HomogeneousPoly::zero(d, 2 * p);
            m.add_term(e.clone(), 1.0);
            reynolds(group, &m).coeff(&e)
        })
        .sum();
    let invariant_dim = trace.round() as usize;
    Ok(InvarianceReport { p, invariant_dim, passes: invariant_dim == 1 })
}

/// The distinct images `g(V)`, each with weight one.
pub fn orbit_frame(group: &MatrixGroup, seed: &Subspace) -> Result<WeightedFrame> {
    if seed.ambient_dim() != group.dim() {
        return Err(FrameError::Dimension(format!(
            "seed in R^{} for a group acting on R^{}",
            seed.ambient_dim(),
            group.dim()
        )));
    }
    let mut orbit: Vec<Subspace> = Vec::new();
    for g in group.elements() {
        let image = seed.transformed(g)?;
        if !orbit.iter().any(|s| projector_distance(s, &image) <= SAME_SUBSPACE_TOL) {
            orbit.push(image);
        }
    }
    WeightedFrame::uniform(orbit, 1.0)
}

/// Places a copy of the inner frame (in `R^ℓ`) inside every `ℓ`-dimensional
/// subspace of the outer frame through that subspace's basis. The weights
/// multiply.
pub fn extend(inner: &WeightedFrame, outer: &WeightedFrame) -> Result<WeightedFrame> {
    let ell = inner.ambient_dim();
    if outer.subspaces().any(|s| s.dim() != ell) {
        return Err(FrameError::Dimension(format!(
            "every outer subspace must have dimension {ell}, the inner ambient dimension"
        )));
    }
    let mut entries = Vec::with_capacity(inner.len() * outer.len());
    for o in outer.entries() {
        for i in inner.entries() {
            let basis = o.subspace.basis() * i.subspace.basis();
            entries.push(FrameEntry { subspace: Subspace::new(basis)?, weight: i.weight * o.weight });
        }
    }
    WeightedFrame::new(outer.ambient_dim(), entries)
}

/// Unit vectors in `C^d`, stored as `[re_1, im_1, re_2, im_2, ..]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLineSet {
    d_complex: usize,
    vectors: Vec<Vec<f64>>,
}

impl ComplexLineSet {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let len = vectors.first().ok_or(FrameError::EmptyFrame)?.len();
        if len < 4 || len % 2 != 0 {
            return Err(FrameError::Dimension(format!(
                "interleaved complex vectors need an even length of at least 4, got {len}"
            )));
        }
        for v in &vectors {
            if v.len() != len {
                return Err(FrameError::LengthMismatch { expected: len, found: v.len() });
            }
            let norm_sq: f64 = v.iter().map(|x| x * x).sum();
            if (norm_sq - 1.0).abs() > UNIT_NORM_TOL {
                return Err(FrameError::Parameter(format!("complex vector has squared norm {norm_sq}")));
            }
        }
        Ok(Self { d_complex: len / 2, vectors })
    }

    pub fn d_complex(&self) -> usize {
        self.d_complex
    }

    pub fn vectors(&self) -> &Vec<Vec<f64>> {
        &self.vectors
    }
}

/// `i z` in the interleaved layout.
fn times_i(z: &[f64]) -> Vec<f64> {
    z.chunks(2).flat_map(|c| [-c[1], c[0]]).collect()
}

/// The real 2-plane of each complex line, spanned by `z` and `i z`, weight one.
pub fn realify(lines: &ComplexLineSet) -> Result<WeightedFrame> {
    let d = 2 * lines.d_complex();
    let planes = lines
        .vectors()
        .iter()
        .map(|z| Subspace::from_columns(d, &[z.clone(), times_i(z)]))
        .collect::<Result<Vec<_>>>()?;
    WeightedFrame::uniform(planes, 1.0)
}

/// The six states of the three mutually unbiased bases of `C^2`.
pub fn mub_c2() -> ComplexLineSet {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexLineSet::new(vec![
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![s, 0.0, s, 0.0],
        vec![s, 0.0, -s, 0.0],
        vec![s, 0.0, 0.0, s],
        vec![s, 0.0, 0.0, -s],
    ])
    .expect("unit vectors")
}

fn reflection(axis_deg: f64) -> DMatrix<f64> {
    let (s, c) = (2.0 * axis_deg.to_radians()).sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, s, s, -c])
}

/// Reflections in the lines at 0° and 60°, generating the Weyl group of `A_2`
/// (the symmetries of an equilateral triangle, order 6).
pub fn weyl_a2_generators() -> Vec<DMatrix<f64>> {
    vec![reflection(0.0), reflection(60.0)]
}

/// The reflection in the x-axis alone: a group of order 2.
pub fn reflection_generators() -> Vec<DMatrix<f64>> {
    vec![reflection(0.0)]
}

/// Sign changes and coordinate permutations of `R^d` (order `2^d d!`).
pub fn hyperoctahedral_generators(d: usize) -> Vec<DMatrix<f64>> {
    let mut flip = DMatrix::identity(d, d);
    flip[(0, 0)] = -1.0;
    let mut gens = vec![flip];
    for i in 0..d.saturating_sub(1) {
        let mut swap = DMatrix::identity(d, d);
        swap.swap_rows(i, i + 1);
        gens.push(swap);
    }
    gens
}

/// `n` lines through the origin of `R^2` at angles `π j / n`.
pub fn equispaced_lines(n: usize) -> Result<WeightedFrame> {
    if n < 2 {
        return Err(FrameError::Parameter(format!("need at least two lines, got {n}")));
    }
    let lines = (0..n).map(|j| Subspace::line_at_angle(std::f64::consts::PI * j as f64 / n as f64)).collect();
    WeightedFrame::uniform(lines, 1.0)
}

/// A named frame with the largest `p` at which it is tight.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub frame: WeightedFrame,
    pub tight_order: usize,
}

/// Parses `name` or `name(arg)`.
fn split_name(name: &str) -> Result<(&str, Option<i64>)> {
    let name = name.trim();
    match name.find('(') {
        None => Ok((name, None)),
        Some(i) => {
            let arg = name[i + 1..]
                .strip_suffix(')')
                .and_then(|a| a.trim().parse().ok())
                .ok_or_else(|| FrameError::UnknownName(name.to_string()))?;
            Ok((&name[..i], Some(arg)))
        }
    }
}

/// Looks up a built-in frame:
///
/// * `mercedes` — three lines at 60° in `R^2`, tight up to `p = 2`;
/// * `equispaced-lines(n)` — tight exactly for `p <= n - 1`;
/// * `cross-polytope-lines(d)` — the coordinate axes of `R^d`, tight at `p = 1`;
/// * `mub-planes-r4` — the realified MUB states of `C^2`, tight up to `p = 3`;
/// * `weyl-a2-orbit(θ)` — orbit of the line at `θ` degrees under the Weyl group
///   of `A_2`: three lines when `θ ≡ 0 (mod 30)`, six equispaced lines (tight
///   up to `p = 5`) when `θ ≡ 15 (mod 30)`, and six lines tight up to `p = 2`
///   otherwise.
pub fn catalog(name: &str) -> Result<CatalogEntry> {
    let unknown = || FrameError::UnknownName(name.to_string());
    let (base, arg) = split_name(name)?;
    let positive = |a: Option<i64>| -> Result<usize> {
        match a {
            Some(v) if v >= 2 => Ok(v as usize),
            _ => Err(unknown()),
        }
    };
    let (frame, tight_order) = match base {
        "mercedes" if arg.is_none() => (equispaced_lines(3)?, 2),
        "equispaced-lines" => {
            let n = positive(arg)?;
            (equispaced_lines(n)?, n - 1)
        }
        "cross-polytope-lines" => {
            let d = positive(arg)?;
            let axes = (0..d).map(|i| Subspace::coordinate(d, &[i])).collect::<Result<Vec<_>>>()?;
            (WeightedFrame::uniform(axes, 1.0)?, 1)
        }
        "mub-planes-r4" if arg.is_none() => (realify(&mub_c2())?, 3),
        "weyl-a2-orbit" => {
            let theta = arg.ok_or_else(unknown)?;
            let group = close_group(&weyl_a2_generators(), 6)?;
            let frame = orbit_frame(&group, &Subspace::line_at_angle((theta as f64).to_radians()))?;
            let order = if theta.rem_euclid(30) == 15 { 5 } else { 2 };
            (frame, order)
        }
        _ => return Err(unknown()),
    };
    Ok(CatalogEntry { name: name.trim().to_string(), frame, tight_order })
}

/// Representative names covering every catalog family.
pub fn standard_catalog() -> Vec<CatalogEntry> {
    [
        "mercedes",
        "equispaced-lines(2)",
        "equispaced-lines(4)",
        "equispaced-lines(5)",
        "cross-polytope-lines(3)",
        "cross-polytope-lines(4)",
        "mub-planes-r4",
        "weyl-a2-orbit(0)",
        "weyl-a2-orbit(15)",
        "weyl-a2-orbit(10)",
    ]
    .iter()
    .map(|n| catalog(n).expect("built-in names resolve"))
    .collect()
}
