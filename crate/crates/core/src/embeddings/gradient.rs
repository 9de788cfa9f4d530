//! Per-pair skip-gram objectives and their analytic gradients.
//!
//! Both objectives are maximized. With `u` the center (input) vector:
//!
//! * negative sampling: `log σ(u·v) + Σₙ log σ(−u·vₙ)`
//! * hierarchical softmax: `Σⱼ log σ(sⱼ u·vⱼ)` over the Huffman path, with
//!   `sⱼ = +1` for code bit 0 and `−1` for code bit 1.
//!
//! The `*_pair_gradient` functions take one ascent step of size
//! `learning_rate`, with every gradient evaluated at the pre-update point.

use crate::scalar::{axpy, dot, log_sigmoid, sigmoid, Real};

/// `(log σ(x), d/dx log σ(x))`
#[inline]
pub(crate) fn positive_term<T: Real>(x: T) -> (T, T) {
    (log_sigmoid(x), T::one() - sigmoid(x))
}

/// `(log σ(−x), d/dx log σ(−x))`
#[inline]
pub(crate) fn negative_term<T: Real>(x: T) -> (T, T) {
    (log_sigmoid(-x), -sigmoid(x))
}

/// Code bit 0 ⇒ `+1`, bit 1 ⇒ `−1`.
#[inline]
pub(crate) fn code_sign<T: Real>(bit: u8) -> T {
    if bit == 0 {
        T::one()
    } else {
        -T::one()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SgnsGradient<T> {
    pub objective: T,
    pub center: Vec<T>,
    pub context: Vec<T>,
    pub negatives: Vec<Vec<T>>,
}

pub fn sgns_objective<T: Real>(center: &[T], context: &[T], negatives: &[&[T]]) -> T {
    let mut obj = positive_term(dot(center, context)).0;
    for n in negatives {
        obj += negative_term(dot(center, n)).0;
    }
    obj
}

pub fn sgns_gradient<T: Real>(center: &[T], context: &[T], negatives: &[&[T]]) -> SgnsGradient<T> {
    let d = center.len();
    let (mut objective, g) = positive_term(dot(center, context));
    let mut grad_center = vec![T::zero(); d];
    axpy(g, context, &mut grad_center);
    let grad_context = center.iter().map(|&x| g * x).collect();
    let mut grad_negatives = Vec::with_capacity(negatives.len());
    for n in negatives {
        let (obj, g) = negative_term(dot(center, n));
        objective += obj;
        axpy(g, n, &mut grad_center);
        grad_negatives.push(center.iter().map(|&x| g * x).collect());
    }
    SgnsGradient {
        objective,
        center: grad_center,
        context: grad_context,
        negatives: grad_negatives,
    }
}

/// One negative-sampling ascent step. Returns the objective before the update.
pub fn sgns_pair_gradient<T: Real>(
    center: &mut [T],
    context: &mut [T],
    negatives: &mut [Vec<T>],
    learning_rate: T,
) -> T {
    let views: Vec<&[T]> = negatives.iter().map(Vec::as_slice).collect();
    let grad = sgns_gradient(center, context, &views);
    axpy(learning_rate, &grad.center, center);
    axpy(learning_rate, &grad.context, context);
    for (n, g) in negatives.iter_mut().zip(&grad.negatives) {
        axpy(learning_rate, g, n);
    }
    grad.objective
}

#[derive(Clone, Debug, PartialEq)]
pub struct SghsGradient<T> {
    pub objective: T,
    pub center: Vec<T>,
    pub nodes: Vec<Vec<T>>,
}

pub fn sghs_objective<T: Real>(center: &[T], nodes: &[&[T]], codes: &[u8]) -> T {
    debug_assert_eq!(nodes.len(), codes.len());
    nodes
        .iter()
        .zip(codes)
        .map(|(v, &bit)| log_sigmoid(code_sign::<T>(bit) * dot(center, v)))
        .fold(T::zero(), |a, b| a + b)
}

/// Probability of the leaf reached by `codes`: `Πⱼ σ(sⱼ u·vⱼ)`.
pub fn sghs_probability<T: Real>(center: &[T], nodes: &[&[T]], codes: &[u8]) -> T {
    nodes
        .iter()
        .zip(codes)
        .map(|(v, &bit)| sigmoid(code_sign::<T>(bit) * dot(center, v)))
        .fold(T::one(), |a, b| a * b)
}

pub fn sghs_gradient<T: Real>(center: &[T], nodes: &[&[T]], codes: &[u8]) -> SghsGradient<T> {
    debug_assert_eq!(nodes.len(), codes.len());
    let mut objective = T::zero();
    let mut grad_center = vec![T::zero(); center.len()];
    let mut grad_nodes = Vec::with_capacity(nodes.len());
    for (v, &bit) in nodes.iter().zip(codes) {
        let s = code_sign::<T>(bit);
        let (obj, g) = positive_term(s * dot(center, v));
        objective += obj;
        let g = s * g;
        axpy(g, v, &mut grad_center);
        grad_nodes.push(center.iter().map(|&x| g * x).collect());
    }
    SghsGradient {
        objective,
        center: grad_center,
        nodes: grad_nodes,
    }
}

/// One hierarchical-softmax ascent step. Returns the objective before the
/// update. An empty path leaves everything unchanged.
pub fn sghs_pair_gradient<T: Real>(
    center: &mut [T],
    nodes: &mut [Vec<T>],
    codes: &[u8],
    learning_rate: T,
) -> T {
    let views: Vec<&[T]> = nodes.iter().map(Vec::as_slice).collect();
    let grad = sghs_gradient(center, &views, codes);
    axpy(learning_rate, &grad.center, center);
    for (n, g) in nodes.iter_mut().zip(&grad.nodes) {
        axpy(learning_rate, g, n);
    }
    grad.objective
}
