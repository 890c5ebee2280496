//! Sample containers, the kernel abstraction, and the built-in kernels.
//!
//! A kernel is a degree-`r` symmetric function of `r` sample points. Sample
//! points are fixed-length real vectors; scalar samples are length-1 vectors.
//! Paired-sample kernels (`bergsma_dassios`, `dcov`) take points that are
//! concatenations `x ‖ y` with a declared split index, which keeps a dataset
//! homogeneous.
//!
//! Sign convention: `sign(0) = 0` in every sign-based kernel.

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use rand::seq::SliceRandom;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub const MAX_DEGREE: usize = 8;

/// One observation: a fixed-length real vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePoint(pub Vec<f64>);

impl SamplePoint {
    pub fn scalar(x: f64) -> Self {
        SamplePoint(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// An ordered sample `X_1, ..., X_n`, stored as a flat row-major matrix.
/// All points share the same vector length.
#[derive(Clone, Debug)]
pub struct Dataset {
    data: Vec<f64>,
    dim: usize,
    n: usize,
}

impl Dataset {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidConfig("dataset must have n >= 1".into()));
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(Error::InvalidConfig("points must have dimension >= 1".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Dataset { data, dim, n: rows.len() })
    }

    pub fn from_scalars(xs: &[f64]) -> Result<Self> {
        Self::from_rows(xs.iter().map(|&x| vec![x]).collect())
    }

    /// CSV ingestion: one row per observation, columns are coordinates.
    /// `has_header` skips the first line.
    pub fn read_csv<R: std::io::Read>(reader: R, has_header: bool) -> Result<Self> {
        use std::io::BufRead;
        let buf = std::io::BufReader::new(reader);
        let mut rows = Vec::new();
        for (lineno, line) in buf.lines().enumerate() {
            let line = line?;
            if lineno == 0 && has_header {
                continue;
            }
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                trimmed.split(',').map(|f| f.trim().parse::<f64>()).collect();
            match row {
                Ok(r) => rows.push(r),
                Err(e) => {
                    return Err(Error::Parse { line: lineno + 1, msg: e.to_string() });
                }
            }
        }
        Self::from_rows(rows)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Dataset with points rotated left by `shift` positions (X_{i+shift} first).
    pub fn rotated(&self, shift: usize) -> Dataset {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.n {
            data.extend_from_slice(self.point((i + shift) % self.n));
        }
        Dataset { data, dim: self.dim, n: self.n }
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

type KernelFn = dyn Fn(&[&[f64]]) -> f64 + Send + Sync;

#[derive(Clone)]
enum KernelForm {
    /// sign(2x1-x2-x3) + sign(2x2-x3-x1) + sign(2x3-x1-x2), scalar inputs.
    SignSymmetry,
    /// sin(x1+x2+x3), scalar inputs.
    SinSum,
    /// 27 * prod_l (sin(2 x_l) - sin^2(1)), scalar inputs; degenerate up to degree 2.
    DegenerateProduct,
    /// Count of positive values among ranks lo..=hi after sorting by |y|.
    TreatmentCount { lo: usize, hi: usize },
    /// Sign covariance of paired samples (x ‖ y), symmetrized over all 4! orders.
    BergsmaDassios { split: usize },
    /// Distance covariance kernel of paired samples (x ‖ y).
    Dcov { split: usize },
    Custom(Arc<KernelFn>),
}

/// A degree-`r` permutation-invariant kernel. Immutable and freely shareable
/// across threads; evaluation is pure and reentrant.
#[derive(Clone)]
pub struct Kernel {
    name: String,
    degree: usize,
    form: KernelForm,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel").field("name", &self.name).field("degree", &self.degree).finish()
    }
}

/// Parameter map for kernel construction (`r`, `r_lo`, `r_hi`, `split`).
pub type KernelParams = BTreeMap<String, f64>;

/// Look up a built-in kernel by name.
///
/// Names: `sign_symmetry`, `sin_sum`, `degenerate_product`,
/// `treatment_count` (params `r`, `r_lo`, `r_hi`), `bergsma_dassios`
/// (param `split`), `dcov` (param `split`).
pub fn builtin_kernel(name: &str, params: &KernelParams) -> Result<Kernel> {
    let get_usize = |key: &str, default: Option<usize>| -> Result<usize> {
        match params.get(key) {
            Some(&v) if v >= 1.0 && v.fract() == 0.0 => Ok(v as usize),
            Some(&v) => Err(Error::InvalidConfig(format!("parameter {key}={v} must be a positive integer"))),
            None => default.ok_or_else(|| Error::InvalidConfig(format!("kernel `{name}` requires parameter `{key}`"))),
        }
    };
    match name {
        "sign_symmetry" => Ok(Kernel { name: name.into(), degree: 3, form: KernelForm::SignSymmetry }),
        "sin_sum" => Ok(Kernel { name: name.into(), degree: 3, form: KernelForm::SinSum }),
        "degenerate_product" => {
            Ok(Kernel { name: name.into(), degree: 3, form: KernelForm::DegenerateProduct })
        }
        "treatment_count" => {
            let r = get_usize("r", None)?;
            if r < 2 || r > MAX_DEGREE {
                return Err(Error::InvalidConfig(format!("treatment_count degree r={r} outside [2, {MAX_DEGREE}]")));
            }
            let lo = get_usize("r_lo", Some(1))?;
            let hi = get_usize("r_hi", Some(r))?;
            if !(1 <= lo && lo <= hi && hi <= r) {
                return Err(Error::InvalidConfig(format!("treatment_count needs 1 <= r_lo <= r_hi <= r, got ({lo}, {hi})")));
            }
            Ok(Kernel { name: name.into(), degree: r, form: KernelForm::TreatmentCount { lo, hi } })
        }
        "bergsma_dassios" => {
            let split = get_usize("split", Some(1))?;
            Ok(Kernel { name: name.into(), degree: 4, form: KernelForm::BergsmaDassios { split } })
        }
        "dcov" => {
            let split = get_usize("split", Some(1))?;
            Ok(Kernel { name: name.into(), degree: 4, form: KernelForm::Dcov { split } })
        }
        other => Err(Error::UnknownKernel(other.into())),
    }
}

/// All built-in kernel names, for CLI help and sweep tests.
pub const BUILTIN_KERNELS: &[&str] =
    &["sign_symmetry", "sin_sum", "degenerate_product", "treatment_count", "bergsma_dassios", "dcov"];

impl Kernel {
    pub fn custom<F>(name: &str, degree: usize, f: F) -> Kernel
    where
        F: Fn(&[&[f64]]) -> f64 + Send + Sync + 'static,
    {
        Kernel { name: name.into(), degree, form: KernelForm::Custom(Arc::new(f)) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Evaluate on exactly `degree` points of equal dimension.
    pub fn eval(&self, points: &[&[f64]]) -> Result<f64> {
        if points.len() != self.degree {
            return Err(Error::ArityMismatch { expected: self.degree, got: points.len() });
        }
        let dim = points[0].len();
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
        }
        match &self.form {
            KernelForm::SignSymmetry => {
                require_scalar(dim)?;
                let (a, b, c) = (points[0][0], points[1][0], points[2][0]);
                Ok(sign(2.0 * a - b - c) + sign(2.0 * b - c - a) + sign(2.0 * c - a - b))
            }
            KernelForm::SinSum => {
                require_scalar(dim)?;
                Ok((points[0][0] + points[1][0] + points[2][0]).sin())
            }
            KernelForm::DegenerateProduct => {
                require_scalar(dim)?;
                let s1sq = 1.0_f64.sin().powi(2);
                Ok(27.0 * points.iter().map(|p| ((2.0 * p[0]).sin() - s1sq)).product::<f64>())
            }
            KernelForm::TreatmentCount { lo, hi } => {
                require_scalar(dim)?;
                let mut ys: Vec<f64> = points.iter().map(|p| p[0]).collect();
                // Stable sort by |y|; ties keep input order (paper assumes continuous Y).
                ys.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
                Ok(ys[lo - 1..=hi - 1].iter().filter(|&&y| y > 0.0).count() as f64)
            }
            KernelForm::BergsmaDassios { split } => {
                require_split(dim, *split)?;
                Ok(bergsma_dassios(points, *split))
            }
            KernelForm::Dcov { split } => {
                require_split(dim, *split)?;
                Ok(dcov_kernel(points, *split))
            }
            KernelForm::Custom(f) => Ok(f(points)),
        }
    }

    /// Evaluate on dataset points selected by `idx`.
    pub fn eval_on(&self, data: &Dataset, idx: &[usize]) -> Result<f64> {
        let mut buf: [&[f64]; MAX_DEGREE] = [&[]; MAX_DEGREE];
        for (slot, &i) in buf.iter_mut().zip(idx) {
            *slot = data.point(i);
        }
        self.eval(&buf[..idx.len()])
    }
}

fn require_scalar(dim: usize) -> Result<()> {
    if dim != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: dim });
    }
    Ok(())
}

fn require_split(dim: usize, split: usize) -> Result<()> {
    if split == 0 || split >= dim {
        return Err(Error::DimensionMismatch { expected: split + 1, got: dim });
    }
    Ok(())
}

fn sign_term(d: &dyn Fn(usize, usize) -> f64, p: &[usize; 4]) -> f64 {
    sign(d(p[0], p[1]) + d(p[2], p[3]) - d(p[0], p[2]) - d(p[1], p[3]))
}

const PERMS4: [[usize; 4]; 24] = perms4();

const fn perms4() -> [[usize; 4]; 24] {
    let mut out = [[0usize; 4]; 24];
    let mut count = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let mut d = 0;
                while d < 4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out[count] = [a, b, c, d];
                        count += 1;
                    }
                    d += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

/// Sign covariance with Euclidean metrics, symmetrized by averaging the
/// signed product over all 24 input orders so the kernel is exactly
/// permutation-invariant.
fn bergsma_dassios(points: &[&[f64]], split: usize) -> f64 {
    let dx = |i: usize, j: usize| euclidean(&points[i][..split], &points[j][..split]);
    let dy = |i: usize, j: usize| euclidean(&points[i][split..], &points[j][split..]);
    let mut total = 0.0;
    for p in &PERMS4 {
        total += sign_term(&dx, p) * sign_term(&dy, p);
    }
    total / 24.0
}

/// Distance covariance kernel: mean over all permutations (s,t,u,v) of the
/// four points of `a_st b_uv + a_st b_st - a_st b_su - a_st b_tv`, with
/// `a`/`b` Euclidean distances on the two halves of each point.
fn dcov_kernel(points: &[&[f64]], split: usize) -> f64 {
    let a = |i: usize, j: usize| euclidean(&points[i][..split], &points[j][..split]);
    let b = |i: usize, j: usize| euclidean(&points[i][split..], &points[j][split..]);
    let mut total = 0.0;
    for p in &PERMS4 {
        let (s, t, u, v) = (p[0], p[1], p[2], p[3]);
        total += a(s, t) * b(u, v) + a(s, t) * b(s, t) - a(s, t) * b(s, u) - a(s, t) * b(t, v);
    }
    total / 24.0
}

/// Evaluate `kernel` on a sequence of points (the spec-level operation).
pub fn eval_kernel(kernel: &Kernel, points: &[SamplePoint]) -> Result<f64> {
    let refs: Vec<&[f64]> = points.iter().map(|p| p.0.as_slice()).collect();
    kernel.eval(&refs)
}

/// True iff `kernel.eval` agrees (within 1e-12 absolute) across `trials`
/// random permutations of `points`.
pub fn check_symmetry(kernel: &Kernel, points: &[SamplePoint], trials: usize, rng_seed: u64) -> Result<bool> {
    if trials == 0 {
        return Err(Error::InvalidConfig("check_symmetry needs trials >= 1".into()));
    }
    let base = eval_kernel(kernel, points)?;
    let mut rng = rng_from_seed(rng_seed);
    let mut perm: Vec<SamplePoint> = points.to_vec();
    for _ in 0..trials {
        perm.shuffle(&mut rng);
        let v = eval_kernel(kernel, &perm)?;
        if (v - base).abs() > 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Wrap a kernel so every evaluation bumps a shared counter. Used by the
/// computational-budget tests.
pub fn counting_kernel(inner: Kernel) -> (Kernel, Arc<std::sync::atomic::AtomicU64>) {
    use std::sync::atomic::{AtomicU64, Ordering};
    let counter = Arc::new(AtomicU64::new(0));
    let c = Arc::clone(&counter);
    let name = format!("counting({})", inner.name());
    let degree = inner.degree();
    let kernel = Kernel::custom(&name, degree, move |points| {
        c.fetch_add(1, Ordering::Relaxed);
        inner.eval(points).expect("inner kernel failed")
    });
    (kernel, counter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn scalars(xs: &[f64]) -> Vec<SamplePoint> {
        xs.iter().map(|&x| SamplePoint::scalar(x)).collect()
    }

    fn no_params() -> KernelParams {
        KernelParams::new()
    }

    #[test]
    fn sign_symmetry_example_values() {
        let k = builtin_kernel("sign_symmetry", &no_params()).unwrap();
        // (1,2,3): sign(-3) + sign(0) + sign(3) = 0
        assert_eq!(eval_kernel(&k, &scalars(&[1.0, 2.0, 3.0])).unwrap(), 0.0);
        // identical points: 3*sign(0) = 0
        assert_eq!(eval_kernel(&k, &scalars(&[0.7, 0.7, 0.7])).unwrap(), 0.0);
        // a case with a strict majority above: (5, 1, 1)
        assert_eq!(eval_kernel(&k, &scalars(&[5.0, 1.0, 1.0])).unwrap(), 1.0 - 1.0 + 1.0);
    }

    #[test]
    fn sin_sum_zero_case() {
        let k = builtin_kernel("sin_sum", &no_params()).unwrap();
        assert_eq!(eval_kernel(&k, &scalars(&[0.0, 0.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_product_value() {
        let k = builtin_kernel("degenerate_product", &no_params()).unwrap();
        let x = std::f64::consts::FRAC_PI_4;
        let got = eval_kernel(&k, &scalars(&[x, x, x])).unwrap();
        let want = 27.0 * (1.0 - 1.0_f64.sin().powi(2)).powi(3);
        assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        assert!((want - 0.6716).abs() < 5e-4);
    }

    #[test]
    fn treatment_count_all_positive() {
        let mut params = KernelParams::new();
        params.insert("r".into(), 4.0);
        let k = builtin_kernel("treatment_count", &params).unwrap();
        let v = eval_kernel(&k, &scalars(&[0.5, 1.5, 2.5, 3.5])).unwrap();
        assert_eq!(v, 4.0);
    }

    #[test]
    fn treatment_count_rank_window() {
        let mut params = KernelParams::new();
        params.insert("r".into(), 3.0);
        params.insert("r_lo".into(), 3.0);
        params.insert("r_hi".into(), 3.0);
        let k = builtin_kernel("treatment_count", &params).unwrap();
        // |y| order: 0.1, -2.0, 3.0 -> rank 3 is 3.0 > 0
        assert_eq!(eval_kernel(&k, &scalars(&[3.0, 0.1, -2.0])).unwrap(), 1.0);
        // rank 3 is -3.0
        assert_eq!(eval_kernel(&k, &scalars(&[-3.0, 0.1, -2.0])).unwrap(), 0.0);
    }

    #[test]
    fn bergsma_dassios_identical_pairs() {
        let mut params = KernelParams::new();
        params.insert("split".into(), 1.0);
        let k = builtin_kernel("bergsma_dassios", &params).unwrap();
        let p = SamplePoint(vec![1.0, 2.0]);
        let v = eval_kernel(&k, &[p.clone(), p.clone(), p.clone(), p]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn dcov_on_degenerate_distances() {
        let mut params = KernelParams::new();
        params.insert("split".into(), 1.0);
        let k = builtin_kernel("dcov", &params).unwrap();
        let p = SamplePoint(vec![0.0, 0.0]);
        let v = eval_kernel(&k, &[p.clone(), p.clone(), p.clone(), p]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn arity_and_dimension_errors() {
        let k = builtin_kernel("sin_sum", &no_params()).unwrap();
        assert!(matches!(
            eval_kernel(&k, &scalars(&[0.0, 0.0])),
            Err(Error::ArityMismatch { expected: 3, got: 2 })
        ));
        let mixed = vec![SamplePoint(vec![0.0]), SamplePoint(vec![0.0, 1.0]), SamplePoint(vec![0.0])];
        assert!(matches!(eval_kernel(&k, &mixed), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(builtin_kernel("nope", &no_params()), Err(Error::UnknownKernel(_))));
    }

    #[test]
    fn eval_is_deterministic() {
        let k = builtin_kernel("sin_sum", &no_params()).unwrap();
        let pts = scalars(&[0.3, -1.2, 2.4]);
        let a = eval_kernel(&k, &pts).unwrap();
        let b = eval_kernel(&k, &pts).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn all_builtins_pass_permutation_checks() {
        let mut rng = rng_from_seed(991);
        for &name in BUILTIN_KERNELS {
            let mut params = KernelParams::new();
            params.insert("r".into(), 4.0);
            params.insert("split".into(), 2.0);
            let k = builtin_kernel(name, &params).unwrap();
            let dim = match name {
                "bergsma_dassios" | "dcov" => 4,
                _ => 1,
            };
            let pts: Vec<SamplePoint> = (0..k.degree())
                .map(|_| SamplePoint((0..dim).map(|_| rng.random_range(-2.0..2.0)).collect()))
                .collect();
            assert!(
                check_symmetry(&k, &pts, 1000, 17).unwrap(),
                "kernel {name} failed permutation invariance"
            );
        }
    }

    #[test]
    fn treatment_count_symmetric_on_distinct_values() {
        let mut params = KernelParams::new();
        params.insert("r".into(), 4.0);
        let k = builtin_kernel("treatment_count", &params).unwrap();
        let pts = scalars(&[0.3, -1.7, 2.2, -0.9]);
        assert!(check_symmetry(&k, &pts, 200, 5).unwrap());
    }

    #[test]
    fn asymmetric_function_detected() {
        let k = Kernel::custom("first_coordinate", 2, |p| p[0][0]);
        let pts = scalars(&[0.0, 1.0]);
        assert!(!check_symmetry(&k, &pts, 10, 3).unwrap());
    }

    #[test]
    fn csv_round_trip_and_header() {
        let csv = "x\n1.0\n2.5\n-3.0\n";
        let d = Dataset::read_csv(csv.as_bytes(), true).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.point(2), &[-3.0]);
        let bad = Dataset::read_csv("1.0,2.0\noops,3.0\n".as_bytes(), false);
        assert!(matches!(bad, Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn counting_kernel_counts() {
        let (k, counter) = counting_kernel(builtin_kernel("sin_sum", &no_params()).unwrap());
        let pts = scalars(&[0.1, 0.2, 0.3]);
        for _ in 0..5 {
            eval_kernel(&k, &pts).unwrap();
        }
        assert_eq!(counter.load(std::sync::atomic::Ordering::Relaxed), 5);
    }
}
