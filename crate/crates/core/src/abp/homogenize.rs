//! Extraction of a single homogeneous component of an ABP.
//!
//! Every label splits as `alpha + l` (constant plus homogeneous linear
//! part). Tracking how many `l`-steps a path has taken splits each vertex
//! into `d + 1` degree copies: `alpha` edges keep the degree, `l` edges raise
//! it by one, and only paths arriving with degree exactly `d` count. That
//! split program (see [`split_by_degree`]) computes `Hom_d` within the
//! `(d+1)`-fold size and width budget, but still carries constant labels.
//!
//! To get a layered program whose labels are all homogeneous, the constant
//! edges are collapsed: layer `e` of the output holds one vertex per input
//! vertex, standing for "the `e`-th homogeneous step has just arrived
//! here". An output edge from `w` to `v'` sums, over every constant-only
//! detour from `w` to a predecessor `u` of `v'`, the detour's weight times
//! the homogeneous part of the label `u -> v'`. The last layer closes with
//! the linear form of all remaining paths that take exactly one more
//! homogeneous step.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Abp, Transition};
use crate::error::AlgebraError;
use crate::field::Scalar;
use crate::linear::LinearForm;
use crate::poly::Poly;

/// An explicit constant, the degree-0 component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarAbp {
    pub nvars: usize,
    pub value: Scalar,
}

/// A homogeneous component: a constant (degree 0), a linear form (degree 1,
/// which no layered homogeneous program can express), or a homogeneous ABP.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HomComponent {
    Scalar(ScalarAbp),
    Linear(LinearForm),
    Abp(Abp),
}

impl HomComponent {
    pub fn to_poly(&self) -> Poly {
        match self {
            HomComponent::Scalar(s) => Poly::constant(s.nvars, s.value.clone()),
            HomComponent::Linear(l) => l.to_poly(),
            HomComponent::Abp(a) => a.to_poly(),
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        match self {
            HomComponent::Scalar(s) => Ok(s.value.clone()),
            HomComponent::Linear(l) => l.eval(point),
            HomComponent::Abp(a) => a.eval(point),
        }
    }

    /// Vertex count; constants and linear forms count as one vertex.
    pub fn size(&self) -> usize {
        match self {
            HomComponent::Abp(a) => a.size(),
            _ => 1,
        }
    }

    pub fn width(&self) -> usize {
        match self {
            HomComponent::Abp(a) => a.width(),
            _ => 1,
        }
    }

    /// As an ordinary ABP (`b = (value)`, `c = (1)` for the degenerate
    /// degrees, which are then not homogeneous as programs).
    pub fn into_abp(self) -> Abp {
        match self {
            HomComponent::Scalar(s) => Abp::from_linear(LinearForm::constant_form(s.nvars, s.value)),
            HomComponent::Linear(l) => Abp::from_linear(l),
            HomComponent::Abp(a) => a,
        }
    }
}

/// Resource accounting of one homogenization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomogenizeReport {
    pub degree: usize,
    pub input_size: usize,
    pub input_width: usize,
    /// Size and width of the degree-split program, before pruning.
    pub split_size: usize,
    pub split_width: usize,
    /// `input_size * (d + 1)` and `input_width * (d + 1)`.
    pub size_bound: usize,
    pub width_bound: usize,
    pub out_size: usize,
    pub out_width: usize,
}

impl HomogenizeReport {
    pub fn within_bounds(&self) -> bool {
        self.split_size <= self.size_bound && self.split_width <= self.width_bound
    }
}

/// Constant and homogeneous parts of every edge, per transition matrix.
struct Split {
    alpha: Vec<Vec<Vec<(usize, Scalar)>>>,
    ell: Vec<Vec<Vec<(usize, LinearForm)>>>,
}

impl Split {
    fn new(a: &Abp) -> Self {
        let mut alpha = Vec::with_capacity(a.mats.len());
        let mut ell = Vec::with_capacity(a.mats.len());
        for m in &a.mats {
            let mut al = vec![Vec::new(); m.rows()];
            let mut el = vec![Vec::new(); m.rows()];
            for (i, j, f) in m.iter() {
                if !f.constant().is_zero() {
                    al[i].push((j, f.constant().clone()));
                }
                let h = f.homogeneous_part();
                if !h.is_zero() {
                    el[i].push((j, h));
                }
            }
            alpha.push(al);
            ell.push(el);
        }
        Split { alpha, ell }
    }
}

/// The degree-tracking program with `d + 1` copies of every vertex. It
/// computes `Hom_d` of the input but keeps constant labels; vertex `(v, e)`
/// of layer `t` sits at position `v * (d + 1) + e`.
pub fn split_by_degree(a: &Abp, d: usize) -> Abp {
    let (nvars, field) = (a.nvars, a.field);
    let copies = d + 1;
    let konst = |s: &Scalar| LinearForm::constant_form(nvars, s.clone());
    let zero = LinearForm::zero(nvars, field);
    let mut b = vec![zero.clone(); a.b.len() * copies];
    for (v, l) in a.b.iter().enumerate() {
        b[v * copies] = konst(l.constant());
        if d >= 1 {
            b[v * copies + 1] = l.homogeneous_part();
        }
    }
    let mats = a
        .mats
        .iter()
        .map(|m| {
            let mut t = Transition::new(m.rows() * copies, m.cols() * copies);
            for (u, v, l) in m.iter() {
                let (alpha, ell) = (konst(l.constant()), l.homogeneous_part());
                for e in 0..copies {
                    t.set(u * copies + e, v * copies + e, alpha.clone());
                    if e < d {
                        t.set(u * copies + e, v * copies + e + 1, ell.clone());
                    }
                }
            }
            t
        })
        .collect();
    let mut c = vec![zero; a.c.len() * copies];
    for (v, l) in a.c.iter().enumerate() {
        c[v * copies + d] = konst(l.constant());
        if d >= 1 {
            c[v * copies + d - 1] = l.homogeneous_part();
        }
    }
    Abp::from_parts(nvars, field, b, mats, c)
}

/// The degree-`d` homogeneous component of `a`.
pub fn homogenize_component(a: &Abp, d: usize) -> HomComponent {
    homogenize_with_report(a, d).0
}

/// [`homogenize_component`] together with its resource report.
pub fn homogenize_with_report(a: &Abp, d: usize) -> (HomComponent, HomogenizeReport) {
    let split = split_by_degree(a, d);
    let out = collapse(a, d);
    let report = HomogenizeReport {
        degree: d,
        input_size: a.size(),
        input_width: a.width(),
        split_size: split.size(),
        split_width: split.width(),
        size_bound: a.size() * (d + 1),
        width_bound: a.width() * (d + 1),
        out_size: out.size(),
        out_width: out.width(),
    };
    (out, report)
}

fn collapse(a: &Abp, d: usize) -> HomComponent {
    let (nvars, field) = (a.nvars, a.field);
    let k = a.mats.len();
    let widths = a.widths();
    let split = Split::new(a);
    let zero_form = LinearForm::zero(nvars, field);

    // kappa[t][v]: constant-only paths to the sink;
    // lin[t][v]: paths to the sink with exactly one homogeneous step.
    let mut kappa: Vec<Vec<Scalar>> = vec![Vec::new(); k + 1];
    let mut lin: Vec<Vec<LinearForm>> = vec![Vec::new(); k + 1];
    kappa[k] = a.c.iter().map(|l| l.constant().clone()).collect();
    lin[k] = a.c.iter().map(LinearForm::homogeneous_part).collect();
    for t in (0..k).rev() {
        let mut kv = vec![field.zero(); widths[t]];
        let mut lv = vec![zero_form.clone(); widths[t]];
        for u in 0..widths[t] {
            for (v, al) in &split.alpha[t][u] {
                kv[u] = &kv[u] + &(al * &kappa[t + 1][*v]);
                lv[u].add_scaled(&lin[t + 1][*v], al);
            }
            for (v, l) in &split.ell[t][u] {
                lv[u].add_scaled(l, &kappa[t + 1][*v]);
            }
        }
        kappa[t] = kv;
        lin[t] = lv;
    }

    match d {
        0 => {
            let mut value = field.zero();
            for (v, l) in a.b.iter().enumerate() {
                value = value + l.constant() * &kappa[0][v];
            }
            return HomComponent::Scalar(ScalarAbp { nvars, value });
        }
        1 => {
            let mut form = zero_form;
            for (v, l) in a.b.iter().enumerate() {
                form.add_scaled(&lin[0][v], l.constant());
                form.add_scaled(&l.homogeneous_part(), &kappa[0][v]);
            }
            return HomComponent::Linear(form);
        }
        _ => {}
    }
    if d > a.degree_bound() {
        return HomComponent::Abp(Abp::zero(nvars, field));
    }

    let mut offset = vec![0usize; k + 2];
    for t in 0..=k {
        offset[t + 1] = offset[t] + widths[t];
    }
    let total = offset[k + 1];

    // Follows constant edges from `start` (sparse per-layer weights at
    // layer `t0`) and adds `weight * l(u -> v')` into `row` for every
    // homogeneous edge leaving a reached vertex.
    let sweep = |t0: usize, start: BTreeMap<usize, Scalar>, row: &mut BTreeMap<usize, LinearForm>| {
        let mut frontier = start;
        let mut t = t0;
        while t < k && !frontier.is_empty() {
            let mut next: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (&u, wgt) in &frontier {
                for (v, l) in &split.ell[t][u] {
                    row.entry(offset[t + 1] + v)
                        .or_insert_with(|| LinearForm::zero(nvars, field))
                        .add_scaled(l, wgt);
                }
                for (v, al) in &split.alpha[t][u] {
                    let slot = next.entry(*v).or_insert_with(|| field.zero());
                    *slot = &*slot + &(al * wgt);
                }
            }
            next.retain(|_, s| !s.is_zero());
            frontier = next;
            t += 1;
        }
    };

    // b': a homogeneous first step straight from the source, or constant
    // source steps and detours followed by a homogeneous edge.
    let mut b_row: BTreeMap<usize, LinearForm> = BTreeMap::new();
    for (v, l) in a.b.iter().enumerate() {
        let h = l.homogeneous_part();
        if !h.is_zero() {
            b_row.insert(offset[0] + v, h);
        }
    }
    let start: BTreeMap<usize, Scalar> = a
        .b
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.constant().is_zero())
        .map(|(v, l)| (v, l.constant().clone()))
        .collect();
    sweep(0, start, &mut b_row);
    let mut b = vec![zero_form.clone(); total];
    for (id, l) in b_row {
        b[id] = l;
    }

    let mut step = Transition::new(total, total);
    for t in 0..=k {
        for v in 0..widths[t] {
            let mut row = BTreeMap::new();
            let mut start = BTreeMap::new();
            start.insert(v, field.one());
            sweep(t, start, &mut row);
            for (id, l) in row {
                step.set(offset[t] + v, id, l);
            }
        }
    }

    let c: Vec<LinearForm> = (0..=k).flat_map(|t| lin[t].iter().cloned()).collect();
    let out = Abp::from_parts(nvars, field, b, vec![step; d - 2], c).prune();
    HomComponent::Abp(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rational;

    fn affine(n: usize, c: i64, coeffs: &[(usize, i64)]) -> LinearForm {
        LinearForm::new(n, Q.from_i64(c), coeffs.iter().map(|&(i, a)| (i, Q.from_i64(a)))).unwrap()
    }

    /// (1 + x)(1 + y)
    fn shifted_product() -> Abp {
        Abp::new(2, Q, vec![affine(2, 1, &[(0, 1)])], vec![], vec![affine(2, 1, &[(1, 1)])]).unwrap()
    }

    #[test]
    fn components_of_shifted_product() {
        let a = shifted_product();
        let p = a.to_poly();
        for d in 0..=3 {
            let (h, rep) = homogenize_with_report(&a, d);
            assert_eq!(h.to_poly(), p.hom_component(d), "d = {d}");
            assert!(rep.within_bounds());
            assert_eq!(split_by_degree(&a, d).to_poly(), p.hom_component(d));
        }
        let HomComponent::Abp(xy) = homogenize_component(&a, 2) else { panic!("expected an ABP") };
        assert!(xy.is_homogeneous());
        assert_eq!(homogenize_component(&a, 0), HomComponent::Scalar(ScalarAbp { nvars: 2, value: Q.one() }));
        assert!(homogenize_component(&a, 3).to_poly().is_zero());
    }

    #[test]
    fn idempotent_on_homogeneous_input() {
        let n = 2;
        let mut m = Transition::new(2, 2);
        m.set(0, 0, affine(n, 0, &[(0, 1)]));
        m.set(1, 1, affine(n, 0, &[(1, 1)]));
        m.set(0, 1, affine(n, 0, &[(0, 2), (1, -1)]));
        let v = vec![affine(n, 0, &[(0, 1)]), affine(n, 0, &[(1, 1)])];
        let a = Abp::new(n, Q, v.clone(), vec![m], v).unwrap();
        let HomComponent::Abp(h) = homogenize_component(&a, 3) else { panic!("expected an ABP") };
        assert_eq!(h.to_poly(), a.to_poly());
        assert_eq!(h.size(), a.size());
        assert_eq!(h.num_mats(), 1);
    }

    #[test]
    fn constant_detours_are_collapsed() {
        // b = (2 + x0), M1 = (3 + x1), M2 = (1 + x0), c = (5 + x1)
        let n = 2;
        let edge = |c, i| {
            let mut t = Transition::new(1, 1);
            t.set(0, 0, affine(n, c, &[(i, 1)]));
            t
        };
        let a = Abp::new(n, Q, vec![affine(n, 2, &[(0, 1)])], vec![edge(3, 1), edge(1, 0)], vec![affine(n, 5, &[(1, 1)])]).unwrap();
        let p = a.to_poly();
        for d in 0..=5 {
            let h = homogenize_component(&a, d);
            assert_eq!(h.to_poly(), p.hom_component(d), "d = {d}");
            if let HomComponent::Abp(x) = &h {
                assert!(x.is_homogeneous());
            }
        }
    }
}
