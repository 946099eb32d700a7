//! Finite-alphabet probability arithmetic.
//!
//! Distributions, row-stochastic kernels and dense joint tensors with named
//! axes, plus the entropy and mutual-information functionals built on them.
//! All information quantities are in bits.

use ndarray::{ArrayD, Axis as NdAxis, IxDyn};

use crate::error::{Error, Result};

/// Tolerance on total probability mass.
pub const MASS_TOLERANCE: f64 = 1e-12;
/// Tolerance on nonnegativity of information quantities.
pub const NONNEGATIVITY_TOLERANCE: f64 = 1e-12;
/// Default cap on the number of cells in a joint tensor.
pub const DEFAULT_MAX_CELLS: usize = 10_000_000;

fn check_row(row: &[f64], what: &str) -> Result<()> {
    if row.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what}: empty")));
    }
    if let Some(p) = row.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "{what}: entry {p} is negative or not finite"
        )));
    }
    let total: f64 = row.iter().sum();
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "{what}: sums to {total}"
        )));
    }
    Ok(())
}

/// Shannon entropy in bits of a nonnegative mass vector, with `0 log 0 = 0`.
pub(crate) fn entropy_of_masses<'a>(masses: impl IntoIterator<Item = &'a f64>) -> f64 {
    masses
        .into_iter()
        .filter(|p| **p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// A probability vector over a finite alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution {
    probs: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_row(&probs, "distribution")?;
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs a nonempty alphabet");
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point(n: usize, index: usize) -> Self {
        assert!(index < n);
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Self { probs }
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidDistribution(
                "weights must be nonnegative with positive sum".into(),
            ));
        }
        Ok(Self {
            probs: weights.iter().map(|w| w / total).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }
}

/// A row-stochastic matrix: row `i` is the output distribution given input `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalKernel {
    n_in: usize,
    n_out: usize,
    data: Vec<f64>,
}

impl ConditionalKernel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = Self::from_rows_unchecked(rows)?;
        for i in 0..k.n_in {
            check_row(k.row(i), &format!("kernel row {i}"))?;
        }
        Ok(k)
    }

    /// Builds a kernel checking only the shape. Row stochasticity is left to
    /// [`ConditionalKernel::violations`], so that malformed inputs can be
    /// reported as data rather than rejected up front.
    pub fn from_rows_unchecked(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_in = rows.len();
        if n_in == 0 {
            return Err(Error::DimensionMismatch("kernel has no rows".into()));
        }
        let n_out = rows[0].len();
        if n_out == 0 {
            return Err(Error::DimensionMismatch("kernel has empty rows".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_out) {
            return Err(Error::DimensionMismatch(format!(
                "kernel row {i} has {} entries, expected {n_out}",
                r.len()
            )));
        }
        Ok(Self {
            n_in,
            n_out,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_flat(n_in: usize, n_out: usize, data: Vec<f64>) -> Result<Self> {
        if n_in == 0 || n_out == 0 || data.len() != n_in * n_out {
            return Err(Error::DimensionMismatch(format!(
                "flat kernel of length {} does not match {n_in}x{n_out}",
                data.len()
            )));
        }
        let k = Self { n_in, n_out, data };
        for i in 0..n_in {
            check_row(k.row(i), &format!("kernel row {i}"))?;
        }
        Ok(k)
    }

    pub fn identity(n: usize) -> Self {
        Self::deterministic(n, &(0..n).collect::<Vec<_>>())
    }

    /// The kernel sending input `i` to output `map[i]` with probability one.
    pub fn deterministic(n_out: usize, map: &[usize]) -> Self {
        let n_in = map.len();
        let mut data = vec![0.0; n_in * n_out];
        for (i, &j) in map.iter().enumerate() {
            assert!(j < n_out, "deterministic kernel target out of range");
            data[i * n_out + j] = 1.0;
        }
        Self { n_in, n_out, data }
    }

    /// Every input mapped to the same output distribution.
    pub fn constant(n_in: usize, dist: &FiniteDistribution) -> Self {
        Self {
            n_in,
            n_out: dist.len(),
            data: (0..n_in).flat_map(|_| dist.probs().iter().copied()).collect(),
        }
    }

    pub fn input_size(&self) -> usize {
        self.n_in
    }

    pub fn output_size(&self) -> usize {
        self.n_out
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_out..(i + 1) * self.n_out]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_out + j]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_in).map(|i| self.row(i).to_vec()).collect()
    }

    /// `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.n_in != other.n_in || self.n_out != other.n_out {
            return Err(Error::DimensionMismatch("mixing kernels of different shape".into()));
        }
        Ok(Self {
            n_in: self.n_in,
            n_out: self.n_out,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect(),
        })
    }

    /// Output distribution when the input is drawn from `input`.
    pub fn push_forward(&self, input: &FiniteDistribution) -> Result<FiniteDistribution> {
        if input.len() != self.n_in {
            return Err(Error::DimensionMismatch(format!(
                "input has {} symbols, kernel expects {}",
                input.len(),
                self.n_in
            )));
        }
        let mut out = vec![0.0; self.n_out];
        for (i, p) in input.probs().iter().enumerate() {
            for (o, k) in out.iter_mut().zip(self.row(i)) {
                *o += p * k;
            }
        }
        Ok(FiniteDistribution { probs: out })
    }

    /// Rows that fail the stochasticity check, as `(row, description)`.
    pub fn violations(&self) -> Vec<(usize, String)> {
        (0..self.n_in)
            .filter_map(|i| {
                check_row(self.row(i), &format!("row {i}"))
                    .err()
                    .map(|e| (i, e.to_string()))
            })
            .collect()
    }
}

/// A named finite alphabet, one axis of a [`JointTensor`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    pub name: String,
    pub size: usize,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Self {
            name: name.into(),
            size,
        }
    }
}

/// One factor of a Markov factorization.
///
/// Kernel inputs and outputs may span several axes; the row (column) index is
/// the row-major mixed-radix index over `given` (`outputs`) in the listed order.
#[derive(Clone, Debug)]
pub enum Factor {
    Source {
        axis: Alphabet,
        dist: FiniteDistribution,
    },
    Kernel {
        given: Vec<String>,
        outputs: Vec<Alphabet>,
        kernel: ConditionalKernel,
    },
}

impl Factor {
    pub fn source(name: &str, dist: &FiniteDistribution) -> Self {
        Factor::Source {
            axis: Alphabet::new(name, dist.len()),
            dist: dist.clone(),
        }
    }

    pub fn kernel(given: &[&str], outputs: &[(&str, usize)], kernel: &ConditionalKernel) -> Self {
        Factor::Kernel {
            given: given.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|(n, s)| Alphabet::new(*n, *s)).collect(),
            kernel: kernel.clone(),
        }
    }
}

/// A dense joint distribution over named axes (row-major, last axis fastest).
#[derive(Clone, Debug)]
pub struct JointTensor {
    axes: Vec<Alphabet>,
    values: ArrayD<f64>,
}

impl JointTensor {
    /// Wraps an array of masses. The array must sum to one.
    pub fn new(axes: Vec<Alphabet>, values: ArrayD<f64>) -> Result<Self> {
        let shape: Vec<usize> = axes.iter().map(|a| a.size).collect();
        if values.shape() != shape.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "values have shape {:?}, axes declare {:?}",
                values.shape(),
                shape
            )));
        }
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::DuplicateAxis(a.name.clone()));
            }
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidDistribution("joint has negative entries".into()));
        }
        let total = values.sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("joint sums to {total}")));
        }
        Ok(Self { axes, values })
    }

    pub fn axes(&self) -> &[Alphabet] {
        &self.axes
    }

    pub fn values(&self) -> &ArrayD<f64> {
        &self.values
    }

    pub fn total_mass(&self) -> f64 {
        self.values.sum()
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAxis(name.to_string()))
    }

    /// Mass at a full index tuple, ordered as [`JointTensor::axes`].
    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[IxDyn(index)]
    }

    /// Sums out every axis not named in `keep`. Kept axes retain their order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointTensor> {
        let mut keep_idx = Vec::with_capacity(keep.len());
        for name in keep {
            let i = self.axis_index(name)?;
            if !keep_idx.contains(&i) {
                keep_idx.push(i);
            }
        }
        let mut values = self.values.clone();
        for i in (0..self.axes.len()).rev() {
            if !keep_idx.contains(&i) {
                values = values.sum_axis(NdAxis(i));
            }
        }
        let axes = (0..self.axes.len())
            .filter(|i| keep_idx.contains(i))
            .map(|i| self.axes[i].clone())
            .collect();
        Ok(JointTensor { axes, values })
    }

    /// Joint entropy of the named axes, in bits. An empty set has entropy zero.
    pub fn entropy_of(&self, names: &[&str]) -> Result<f64> {
        if names.is_empty() {
            return Ok(0.0);
        }
        Ok(entropy_of_masses(self.marginalize(names)?.values.iter()))
    }

    /// Copy with the axes reordered to `order`; masses are unchanged.
    pub fn permute(&self, order: &[&str]) -> Result<JointTensor> {
        if order.len() != self.axes.len() {
            return Err(Error::InvalidArgument("permutation must list every axis".into()));
        }
        let idx = order
            .iter()
            .map(|n| self.axis_index(n))
            .collect::<Result<Vec<_>>>()?;
        let values = self.values.clone().permuted_axes(IxDyn(&idx));
        Ok(JointTensor {
            axes: idx.iter().map(|i| self.axes[*i].clone()).collect(),
            values: values.as_standard_layout().to_owned(),
        })
    }
}

fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut s = vec![1; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * sizes[i + 1];
    }
    s
}

/// Product-form joint of an ordered Markov factorization.
pub fn compose(factors: &[Factor]) -> Result<JointTensor> {
    compose_with_limit(factors, DEFAULT_MAX_CELLS)
}

pub fn compose_with_limit(factors: &[Factor], max_cells: usize) -> Result<JointTensor> {
    let mut axes: Vec<Alphabet> = Vec::new();
    let mut values: Vec<f64> = vec![1.0];

    for factor in factors {
        let (given, outputs, kernel): (Vec<String>, Vec<Alphabet>, ConditionalKernel) =
            match factor {
                Factor::Source { axis, dist } => (
                    Vec::new(),
                    vec![axis.clone()],
                    ConditionalKernel::constant(1, dist),
                ),
                Factor::Kernel {
                    given,
                    outputs,
                    kernel,
                } => (given.clone(), outputs.clone(), kernel.clone()),
            };

        let mut given_pos = Vec::with_capacity(given.len());
        for name in &given {
            let pos = axes
                .iter()
                .position(|a| &a.name == name)
                .ok_or_else(|| Error::DanglingAxis(name.clone()))?;
            given_pos.push(pos);
        }
        for (i, out) in outputs.iter().enumerate() {
            if axes.iter().any(|a| a.name == out.name) || outputs[..i].iter().any(|a| a.name == out.name)
            {
                return Err(Error::DuplicateAxis(out.name.clone()));
            }
        }
        let in_size: usize = given_pos.iter().map(|p| axes[*p].size).product();
        let out_size: usize = outputs.iter().map(|a| a.size).product();
        if kernel.input_size() != in_size || kernel.output_size() != out_size {
            return Err(Error::DimensionMismatch(format!(
                "factor producing {:?} is {}x{}, axes imply {}x{}",
                outputs.iter().map(|a| &a.name).collect::<Vec<_>>(),
                kernel.input_size(),
                kernel.output_size(),
                in_size,
                out_size
            )));
        }
        let cells = values.len().saturating_mul(out_size);
        if cells > max_cells {
            return Err(Error::TooLarge {
                cells,
                limit: max_cells,
            });
        }

        let sizes: Vec<usize> = axes.iter().map(|a| a.size).collect();
        let st = strides(&sizes);
        let given_sizes: Vec<usize> = given_pos.iter().map(|p| sizes[*p]).collect();
        let given_st = strides(&given_sizes);

        let mut next = Vec::with_capacity(cells);
        for (flat, &mass) in values.iter().enumerate() {
            let row: usize = given_pos
                .iter()
                .zip(&given_st)
                .map(|(p, gs)| ((flat / st[*p]) % sizes[*p]) * gs)
                .sum();
            next.extend(kernel.row(row).iter().map(|k| mass * k));
        }
        values = next;
        axes.extend(outputs);
    }

    let total: f64 = values.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidDistribution("composed joint has zero mass".into()));
    }
    values.iter_mut().for_each(|v| *v /= total);
    let shape: Vec<usize> = axes.iter().map(|a| a.size).collect();
    let values = ArrayD::from_shape_vec(IxDyn(&shape), values)
        .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
    Ok(JointTensor { axes, values })
}

/// `-Σ p log₂ p`.
pub fn entropy(dist: &FiniteDistribution) -> f64 {
    entropy_of_masses(dist.probs())
}

fn union<'a>(a: &[&'a str], b: &[&'a str]) -> Vec<&'a str> {
    let mut out: Vec<&str> = a.to_vec();
    for n in b {
        if !out.contains(n) {
            out.push(n);
        }
    }
    out
}

fn check_disjoint(a: &[&str], b: &[&str]) -> Result<()> {
    match a.iter().find(|n| b.contains(n)) {
        Some(n) => Err(Error::OverlappingAxes(n.to_string())),
        None => Ok(()),
    }
}

fn check_known(joint: &JointTensor, names: &[&str]) -> Result<()> {
    names.iter().try_for_each(|n| joint.axis_index(n).map(|_| ()))
}

/// `H(target | given) = H(target, given) − H(given)`.
pub fn conditional_entropy(joint: &JointTensor, target: &[&str], given: &[&str]) -> Result<f64> {
    check_known(joint, target)?;
    check_known(joint, given)?;
    Ok(joint.entropy_of(&union(target, given))? - joint.entropy_of(given)?)
}

/// `I(A; B) = H(A) + H(B) − H(A, B)`.
pub fn mutual_information(joint: &JointTensor, a: &[&str], b: &[&str]) -> Result<f64> {
    check_known(joint, a)?;
    check_known(joint, b)?;
    check_disjoint(a, b)?;
    Ok(joint.entropy_of(a)? + joint.entropy_of(b)? - joint.entropy_of(&union(a, b))?)
}

/// `I(A; B | C)`, evaluated as `H(A,C) + H(B,C) − H(A,B,C) − H(C)`.
pub fn conditional_mutual_information(
    joint: &JointTensor,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    for s in [a, b, c] {
        check_known(joint, s)?;
    }
    check_disjoint(a, b)?;
    check_disjoint(a, c)?;
    check_disjoint(b, c)?;
    let ac = union(a, c);
    let bc = union(b, c);
    let abc = union(&ac, b);
    Ok(joint.entropy_of(&ac)? + joint.entropy_of(&bc)? - joint.entropy_of(&abc)? - joint.entropy_of(c)?)
}

/// `D(p ‖ q)` in bits; `+∞` when `p` puts mass where `q` has none.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, qi)| {
            if *qi > 0.0 {
                pi * (pi / qi).log2()
            } else {
                f64::INFINITY
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bern(p: f64) -> FiniteDistribution {
        FiniteDistribution::new(vec![1.0 - p, p]).unwrap()
    }

    #[test]
    fn identity_coupling_of_fair_bit() {
        let joint = compose(&[
            Factor::source("W", &FiniteDistribution::uniform(2)),
            Factor::kernel(&["W"], &[("U", 2)], &ConditionalKernel::identity(2)),
        ])
        .unwrap();
        assert_eq!(joint.get(&[0, 0]), 0.5);
        assert_eq!(joint.get(&[1, 1]), 0.5);
        assert_eq!(joint.get(&[0, 1]), 0.0);
        let w = joint.marginalize(&["W"]).unwrap();
        assert_eq!(w.values().as_slice().unwrap(), &[0.5, 0.5]);
    }

    #[test]
    fn brute_force_product_2x2x2() {
        let pa = FiniteDistribution::new(vec![0.3, 0.7]).unwrap();
        let kb = ConditionalKernel::new(vec![vec![0.2, 0.8], vec![0.6, 0.4]]).unwrap();
        let kc = ConditionalKernel::new(vec![
            vec![0.1, 0.9],
            vec![0.5, 0.5],
            vec![0.75, 0.25],
            vec![0.35, 0.65],
        ])
        .unwrap();
        let joint = compose(&[
            Factor::source("A", &pa),
            Factor::kernel(&["A"], &[("B", 2)], &kb),
            Factor::kernel(&["A", "B"], &[("C", 2)], &kc),
        ])
        .unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let expected = pa.probs()[a] * kb.get(a, b) * kc.get(a * 2 + b, c);
                    assert_abs_diff_eq!(joint.get(&[a, b, c]), expected, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn compose_errors() {
        let w = FiniteDistribution::uniform(2);
        let dangling = compose(&[
            Factor::source("W", &w),
            Factor::kernel(&["Q"], &[("U", 2)], &ConditionalKernel::identity(2)),
        ]);
        assert!(matches!(dangling, Err(Error::DanglingAxis(n)) if n == "Q"));
        let mismatch = compose(&[
            Factor::source("W", &w),
            Factor::kernel(&["W"], &[("U", 3)], &ConditionalKernel::identity(2)),
        ]);
        assert!(matches!(mismatch, Err(Error::DimensionMismatch(_))));
        let big = compose_with_limit(
            &[
                Factor::source("W", &w),
                Factor::kernel(&["W"], &[("U", 2)], &ConditionalKernel::identity(2)),
            ],
            3,
        );
        assert!(matches!(big, Err(Error::TooLarge { .. })));
    }

    #[test]
    fn marginalize_all_axes_is_identity_and_unknown_axis_errors() {
        let joint = compose(&[
            Factor::source("W", &bern(0.25)),
            Factor::kernel(&["W"], &[("U", 2)], &ConditionalKernel::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap()),
        ])
        .unwrap();
        let same = joint.marginalize(&["W", "U"]).unwrap();
        assert_eq!(same.values(), joint.values());
        assert!(matches!(joint.marginalize(&["Z"]), Err(Error::UnknownAxis(_))));
    }

    #[test]
    fn entropy_cases() {
        assert_abs_diff_eq!(entropy(&FiniteDistribution::uniform(4)), 2.0, epsilon = 1e-15);
        assert_eq!(entropy(&FiniteDistribution::point(3, 1)), 0.0);
        let h = entropy(&bern(0.1));
        let oracle = -0.9f64 * 0.9f64.log2() - 0.1f64 * 0.1f64.log2();
        assert_abs_diff_eq!(h, oracle, epsilon = 1e-15);
    }

    #[test]
    fn distribution_validation() {
        assert!(FiniteDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(FiniteDistribution::new(vec![1.1, -0.1]).is_err());
        assert!(FiniteDistribution::new(vec![]).is_err());
        let k = ConditionalKernel::from_rows_unchecked(vec![vec![0.5, 0.4], vec![0.5, 0.5]]).unwrap();
        assert_eq!(k.violations().len(), 1);
    }

    #[test]
    fn conditional_entropy_of_function_is_zero() {
        // U = W xor 1
        let joint = compose(&[
            Factor::source("W", &bern(0.3)),
            Factor::kernel(&["W"], &[("U", 2)], &ConditionalKernel::deterministic(2, &[1, 0])),
        ])
        .unwrap();
        assert_abs_diff_eq!(conditional_entropy(&joint, &["U"], &["W"]).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn independent_axes() {
        let joint = compose(&[
            Factor::source("A", &bern(0.3)),
            Factor::source("B", &FiniteDistribution::new(vec![0.2, 0.5, 0.3]).unwrap()),
        ])
        .unwrap();
        let hb = entropy(&FiniteDistribution::new(vec![0.2, 0.5, 0.3]).unwrap());
        assert_abs_diff_eq!(conditional_entropy(&joint, &["B"], &["A"]).unwrap(), hb, epsilon = 1e-14);
        assert_abs_diff_eq!(mutual_information(&joint, &["A"], &["B"]).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn identity_coupling_mi_is_log_n() {
        for n in 2..6 {
            let joint = compose(&[
                Factor::source("A", &FiniteDistribution::uniform(n)),
                Factor::kernel(&["A"], &[("B", n)], &ConditionalKernel::identity(n)),
            ])
            .unwrap();
            assert_abs_diff_eq!(
                mutual_information(&joint, &["A"], &["B"]).unwrap(),
                (n as f64).log2(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn overlap_is_rejected() {
        let joint = compose(&[
            Factor::source("A", &bern(0.3)),
            Factor::source("B", &bern(0.6)),
            Factor::source("C", &bern(0.5)),
        ])
        .unwrap();
        assert!(matches!(
            mutual_information(&joint, &["A", "B"], &["B"]),
            Err(Error::OverlappingAxes(_))
        ));
        assert!(matches!(
            conditional_mutual_information(&joint, &["A"], &["B"], &["A"]),
            Err(Error::OverlappingAxes(_))
        ));
    }

    #[test]
    fn cmi_with_independent_conditioner_and_with_determined_b() {
        let kb = ConditionalKernel::new(vec![vec![0.8, 0.2], vec![0.3, 0.7]]).unwrap();
        let joint = compose(&[
            Factor::source("A", &bern(0.4)),
            Factor::kernel(&["A"], &[("B", 2)], &kb),
            Factor::source("C", &FiniteDistribution::new(vec![0.1, 0.6, 0.3]).unwrap()),
        ])
        .unwrap();
        let i_ab = mutual_information(&joint, &["A"], &["B"]).unwrap();
        assert_abs_diff_eq!(
            conditional_mutual_information(&joint, &["A"], &["B"], &["C"]).unwrap(),
            i_ab,
            epsilon = 1e-14
        );

        let determined = compose(&[
            Factor::source("A", &bern(0.4)),
            Factor::kernel(&["A"], &[("C", 2)], &kb),
            Factor::kernel(&["C"], &[("B", 2)], &ConditionalKernel::identity(2)),
        ])
        .unwrap();
        assert_abs_diff_eq!(
            conditional_mutual_information(&determined, &["A"], &["B"], &["C"]).unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn kl_infinite_outside_support() {
        assert_eq!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]), f64::INFINITY);
        assert_eq!(kl_divergence(&[1.0, 0.0], &[0.5, 0.5]), 1.0);
    }
}
