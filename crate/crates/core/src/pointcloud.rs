//! Sampling densities, point clouds and the two distance conventions.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::{seeded, Rng};
use crate::specfun::unit_ball_volume;

/// How distances between points are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// `[0,1)^d` with per-coordinate wraparound.
    Torus,
    Euclidean,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Torus => "torus",
            Metric::Euclidean => "euclidean",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(Metric::Torus),
            "euclidean" => Ok(Metric::Euclidean),
            other => Err(Error::Config(format!("unknown metric `{other}`"))),
        }
    }
}

/// The built-in density families.
///
/// Textual form: `torus`, `cube`, `gauss:sigma=<v>`, `beta:a=<v>,b=<v>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DensityKind {
    /// Uniform on the unit torus.
    UniformTorus,
    /// Uniform on `[0,1]^d` with Euclidean distances.
    UniformCube,
    /// Isotropic centered Gaussian with standard deviation `sigma`.
    Gaussian { sigma: f64 },
    /// Independent beta(a, b) coordinates.
    ProductBeta { a: f64, b: f64 },
}

impl DensityKind {
    pub fn metric(&self) -> Metric {
        match self {
            DensityKind::UniformTorus => Metric::Torus,
            _ => Metric::Euclidean,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DensityKind::Gaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                domain(format!("gaussian scale must be positive, got {sigma}"))
            }
            DensityKind::ProductBeta { a, b }
                if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) =>
            {
                domain(format!("beta shapes must be positive, got a={a}, b={b}"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityKind::UniformTorus => f.write_str("torus"),
            DensityKind::UniformCube => f.write_str("cube"),
            DensityKind::Gaussian { sigma } => write!(f, "gauss:sigma={sigma}"),
            DensityKind::ProductBeta { a, b } => write!(f, "beta:a={a},b={b}"),
        }
    }
}

impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Config(format!("invalid density `{s}`: {why}"));
        let (name, params) = match s.split_once(':') {
            Some((name, params)) => (name.trim(), Some(params)),
            None => (s.trim(), None),
        };
        let mut values = Vec::new();
        if let Some(params) = params {
            for item in params.split(',') {
                let (key, value) = item.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                let value: f64 = value.trim().parse().map_err(|_| bad("parameter is not a number"))?;
                values.push((key.trim(), value));
            }
        }
        let take = |key: &str| {
            values
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| bad(&format!("missing parameter `{key}`")))
        };
        let allow = |keys: &[&str]| match values.iter().find(|(k, _)| !keys.contains(k)) {
            Some((k, _)) => Err(bad(&format!("unexpected parameter `{k}`"))),
            None => Ok(()),
        };
        let kind = match name {
            "torus" => {
                allow(&[])?;
                DensityKind::UniformTorus
            }
            "cube" => {
                allow(&[])?;
                DensityKind::UniformCube
            }
            "gauss" => {
                allow(&["sigma"])?;
                DensityKind::Gaussian { sigma: take("sigma")? }
            }
            "beta" => {
                allow(&["a", "b"])?;
                DensityKind::ProductBeta { a: take("a")?, b: take("b")? }
            }
            _ => return Err(bad("unknown family")),
        };
        kind.validate().map_err(|e| bad(&e.to_string()))?;
        Ok(kind)
    }
}

impl TryFrom<String> for DensityKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DensityKind> for String {
    fn from(k: DensityKind) -> Self {
        k.to_string()
    }
}

/// A density family together with its dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySpec {
    kind: DensityKind,
    dim: usize,
}

impl DensitySpec {
    pub fn new(kind: DensityKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return domain("density dimension must be at least 1");
        }
        kind.validate()?;
        Ok(Self { kind, dim })
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> Metric {
        self.kind.metric()
    }
}

/// `n` points in `R^d`, stored row-major, plus the metric they live under.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    coords: Vec<f64>,
    dim: usize,
    metric: Metric,
}

impl PointCloud {
    /// Build a cloud from row-major coordinates.
    pub fn new(coords: Vec<f64>, dim: usize, metric: Metric) -> Result<Self> {
        if dim == 0 {
            return domain("point dimension must be at least 1");
        }
        if coords.len() % dim != 0 {
            return domain(format!("{} coordinates do not split into points of dimension {dim}", coords.len()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return domain(format!("non-finite coordinate {bad}"));
        }
        if metric == Metric::Torus {
            if let Some(bad) = coords.iter().find(|c| !(0.0..1.0).contains(*c)) {
                return domain(format!("torus coordinate {bad} outside [0, 1)"));
            }
        }
        Ok(Self { coords, dim, metric })
    }

    pub fn empty(dim: usize, metric: Metric) -> Result<Self> {
        Self::new(Vec::new(), dim, metric)
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Write as text: a `# d=<d> metric=<m>` header, then one comma-separated
    /// point per line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# d={} metric={}", self.dim, self.metric)?;
        for p in self.points() {
            let mut first = true;
            for c in p {
                if !first {
                    out.write_all(b",")?;
                }
                write!(out, "{c}")?;
                first = false;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut header: Option<(usize, Metric)> = None;
        let mut coords = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let parse_err = |message: String| Error::Parse { line: lineno, message };
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            let Some((dim, _)) = header else {
                header = Some(parse_cloud_header(text).map_err(parse_err)?);
                continue;
            };
            let before = coords.len();
            for field in text.split(',') {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(format!("`{}` is not a number", field.trim())))?;
                coords.push(v);
            }
            if coords.len() - before != dim {
                return Err(parse_err(format!("expected {dim} coordinates, found {}", coords.len() - before)));
            }
        }
        let (dim, metric) = header.ok_or(Error::Parse {
            line: 1,
            message: "missing `# d=<d> metric=<m>` header".into(),
        })?;
        Self::new(coords, dim, metric)
    }
}

fn parse_cloud_header(text: &str) -> std::result::Result<(usize, Metric), String> {
    let body = text
        .strip_prefix('#')
        .ok_or_else(|| "expected header `# d=<d> metric=<torus|euclidean>`".to_string())?;
    let mut dim = None;
    let mut metric = None;
    for token in body.split_whitespace() {
        match token.split_once('=') {
            Some(("d", v)) => dim = Some(v.parse::<usize>().map_err(|_| format!("bad dimension `{v}`"))?),
            Some(("metric", v)) => metric = Some(v.parse::<Metric>().map_err(|e| e.to_string())?),
            _ => return Err(format!("unexpected header token `{token}`")),
        }
    }
    match (dim, metric) {
        (Some(d), Some(m)) if d > 0 => Ok((d, m)),
        _ => Err("header must give d >= 1 and metric".into()),
    }
}

/// Uniform in the open interval (0, 1).
fn open_unit(rng: &mut Rng) -> f64 {
    ((rng.random::<u64>() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Box–Muller pairs, handing out the second variate on the next call.
#[derive(Default)]
pub(crate) struct NormalSampler {
    spare: Option<f64>,
}

impl NormalSampler {
    pub(crate) fn sample(&mut self, rng: &mut Rng) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let radius = libm::sqrt(-2.0 * libm::log(open_unit(rng)));
        let angle = 2.0 * std::f64::consts::PI * open_unit(rng);
        self.spare = Some(radius * libm::sin(angle));
        radius * libm::cos(angle)
    }
}

/// Marsaglia–Tsang squeeze/acceptance sampler for gamma(shape, 1).
fn sample_gamma(shape: f64, rng: &mut Rng, normal: &mut NormalSampler) -> f64 {
    if shape < 1.0 {
        let boosted = sample_gamma(shape + 1.0, rng, normal);
        return boosted * libm::pow(open_unit(rng), 1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / libm::sqrt(9.0 * d);
    loop {
        let x = normal.sample(rng);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = open_unit(rng);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || libm::log(u) < 0.5 * x2 + d * (1.0 - v + libm::log(v)) {
            return d * v;
        }
    }
}

fn sample_beta(a: f64, b: f64, rng: &mut Rng, normal: &mut NormalSampler) -> f64 {
    let x = sample_gamma(a, rng, normal);
    let y = sample_gamma(b, rng, normal);
    x / (x + y)
}

/// Draw `n` i.i.d. points from `spec` using a fresh generator seeded with `seed`.
pub fn sample_points(spec: &DensitySpec, n: usize, seed: u64) -> PointCloud {
    let mut rng = seeded(seed);
    let coords = draw_coords(spec, n, &mut rng);
    PointCloud {
        coords,
        dim: spec.dim,
        metric: spec.metric(),
    }
}

fn draw_coords(spec: &DensitySpec, n: usize, rng: &mut Rng) -> Vec<f64> {
    let total = n * spec.dim;
    let mut normal = NormalSampler::default();
    let mut coords = Vec::with_capacity(total);
    match spec.kind {
        DensityKind::UniformTorus | DensityKind::UniformCube => {
            coords.extend((0..total).map(|_| rng.random::<f64>()));
        }
        DensityKind::Gaussian { sigma } => {
            coords.extend((0..total).map(|_| sigma * normal.sample(rng)));
        }
        DensityKind::ProductBeta { a, b } => {
            coords.extend((0..total).map(|_| sample_beta(a, b, rng, &mut normal)));
        }
    }
    coords
}

/// Distance under `metric`. Torus coordinates are assumed to lie in `[0,1)`.
pub fn distance(metric: Metric, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return domain(format!("dimension mismatch: {} vs {}", x.len(), y.len()));
    }
    Ok(unchecked_distance(metric, x, y))
}

#[inline]
pub(crate) fn unchecked_distance(metric: Metric, x: &[f64], y: &[f64]) -> f64 {
    squared_distance(metric, x, y).sqrt()
}

#[inline]
pub(crate) fn squared_distance(metric: Metric, x: &[f64], y: &[f64]) -> f64 {
    let mut sum = 0.0;
    match metric {
        Metric::Euclidean => {
            for (a, b) in x.iter().zip(y) {
                let t = a - b;
                sum += t * t;
            }
        }
        Metric::Torus => {
            for (a, b) in x.iter().zip(y) {
                let t = (a - b).abs();
                let t = t.min(1.0 - t);
                sum += t * t;
            }
        }
    }
    sum
}

/// `n` uniform points of the unit ball: an isotropic direction scaled by
/// `U^{1/d}`.
pub fn sample_unit_ball(d: usize, n: usize, seed: u64) -> Result<PointCloud> {
    if d == 0 {
        return domain("unit ball dimension must be at least 1");
    }
    let mut rng = seeded(seed);
    let mut normal = NormalSampler::default();
    let mut coords = Vec::with_capacity(n * d);
    let mut buf = vec![0.0; d];
    for _ in 0..n {
        fill_unit_ball_point(&mut buf, &mut rng, &mut normal);
        coords.extend_from_slice(&buf);
    }
    Ok(PointCloud {
        coords,
        dim: d,
        metric: Metric::Euclidean,
    })
}

pub(crate) fn fill_unit_ball_point(out: &mut [f64], rng: &mut Rng, normal: &mut NormalSampler) {
    let d = out.len();
    let norm = loop {
        let mut sq = 0.0;
        for c in out.iter_mut() {
            *c = normal.sample(rng);
            sq += *c * *c;
        }
        if sq > 0.0 {
            break libm::sqrt(sq);
        }
    };
    let radius = libm::pow(rng.random::<f64>(), 1.0 / d as f64);
    for c in out.iter_mut() {
        *c *= radius / norm;
    }
}

/// A probability estimate with its standard error (zero when exact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallMass {
    pub mass: f64,
    pub std_error: f64,
}

/// Probability mass the density assigns to the ball `B(x, r)`.
///
/// Exact for the torus (`V_d r^d`, valid for `r <= 1/2`); otherwise a
/// hit-or-miss Monte Carlo estimate from `mc_samples` draws of the density.
pub fn ball_mass(spec: &DensitySpec, x: &[f64], r: f64, mc_samples: usize, seed: u64) -> Result<BallMass> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("ball radius must be positive, got {r}"));
    }
    if x.len() != spec.dim {
        return domain(format!("centre has dimension {}, density has {}", x.len(), spec.dim));
    }
    if spec.kind == DensityKind::UniformTorus {
        if r > 0.5 {
            return domain(format!("torus radius must be at most 1/2, got {r}"));
        }
        let mass = unit_ball_volume(spec.dim as u32)? * r.powi(spec.dim as i32);
        return Ok(BallMass { mass, std_error: 0.0 });
    }
    if mc_samples == 0 {
        return domain("Monte Carlo ball mass needs at least one sample");
    }
    let mut rng = seeded(seed);
    let mut normal = NormalSampler::default();
    let mut buf = vec![0.0; spec.dim];
    let mut hits = 0usize;
    for _ in 0..mc_samples {
        for c in buf.iter_mut() {
            *c = match spec.kind {
                DensityKind::UniformCube => rng.random::<f64>(),
                DensityKind::Gaussian { sigma } => sigma * normal.sample(&mut rng),
                DensityKind::ProductBeta { a, b } => sample_beta(a, b, &mut rng, &mut normal),
                DensityKind::UniformTorus => unreachable!(),
            };
        }
        if unchecked_distance(Metric::Euclidean, x, &buf) <= r {
            hits += 1;
        }
    }
    let p = hits as f64 / mc_samples as f64;
    Ok(BallMass {
        mass: p,
        std_error: (p * (1.0 - p) / mc_samples as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(kind: DensityKind, d: usize) -> DensitySpec {
        DensitySpec::new(kind, d).unwrap()
    }

    fn coordinate_means(cloud: &PointCloud) -> Vec<f64> {
        let mut sums = vec![0.0; cloud.dim()];
        for p in cloud.points() {
            for (s, c) in sums.iter_mut().zip(p) {
                *s += c;
            }
        }
        sums.iter().map(|s| s / cloud.len() as f64).collect()
    }

    #[test]
    fn density_grammar() {
        assert_eq!("torus".parse::<DensityKind>().unwrap(), DensityKind::UniformTorus);
        assert_eq!("cube".parse::<DensityKind>().unwrap(), DensityKind::UniformCube);
        assert_eq!(
            "gauss:sigma=0.5".parse::<DensityKind>().unwrap(),
            DensityKind::Gaussian { sigma: 0.5 }
        );
        assert_eq!(
            "beta:a=2,b=3.5".parse::<DensityKind>().unwrap(),
            DensityKind::ProductBeta { a: 2.0, b: 3.5 }
        );
        for bad in ["sphere", "gauss", "gauss:sigma=-1", "beta:a=1", "torus:x=1", "beta:a=1,b=x"] {
            assert!(matches!(bad.parse::<DensityKind>(), Err(Error::Config(_))), "{bad}");
        }
        for kind in [DensityKind::Gaussian { sigma: 1.5 }, DensityKind::ProductBeta { a: 0.9, b: 4.0 }] {
            assert_eq!(kind.to_string().parse::<DensityKind>().unwrap(), kind);
        }
    }

    #[test]
    fn empty_cloud() {
        let cloud = sample_points(&spec(DensityKind::UniformTorus, 2), 0, 1);
        assert!(cloud.is_empty());
        assert_eq!(cloud.metric(), Metric::Torus);
    }

    #[test]
    fn uniform_torus_means() {
        let cloud = sample_points(&spec(DensityKind::UniformTorus, 3), 100_000, 7);
        for m in coordinate_means(&cloud) {
            assert!((m - 0.5).abs() < 0.005, "{m}");
        }
        assert!(cloud.coords().iter().all(|c| (0.0..1.0).contains(c)));
    }

    #[test]
    fn gaussian_second_moment() {
        let cloud = sample_points(&spec(DensityKind::Gaussian { sigma: 1.0 }, 2), 100_000, 7);
        let msq: f64 = cloud.points().map(|p| p.iter().map(|c| c * c).sum::<f64>()).sum::<f64>()
            / cloud.len() as f64;
        assert!((msq - 2.0).abs() < 0.05, "{msq}");
    }

    #[test]
    fn product_beta_marginal_means() {
        let n = 100_000;
        for (a, b) in [(2.0, 5.0), (0.9, 0.9), (0.5, 3.0)] {
            let cloud = sample_points(&spec(DensityKind::ProductBeta { a, b }, 2), n, 11);
            let mean = a / (a + b);
            let var = a * b / ((a + b).powi(2) * (a + b + 1.0));
            for m in coordinate_means(&cloud) {
                assert!((m - mean).abs() < 4.0 * (var / n as f64).sqrt(), "a={a} b={b}: {m}");
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = spec(DensityKind::ProductBeta { a: 2.0, b: 0.7 }, 3);
        let a = sample_points(&s, 500, 42);
        let b = sample_points(&s, 500, 42);
        assert_eq!(a.coords().len(), b.coords().len());
        assert!(a.coords().iter().zip(b.coords()).all(|(x, y)| x.to_bits() == y.to_bits()));
        let c = sample_points(&s, 500, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn distance_examples() {
        let d = |m, x: &[f64], y: &[f64]| distance(m, x, y).unwrap();
        assert!((d(Metric::Torus, &[0.1], &[0.9]) - 0.2).abs() < 1e-12);
        assert_eq!(d(Metric::Torus, &[0.3, 0.4], &[0.3, 0.4]), 0.0);
        assert_eq!(d(Metric::Euclidean, &[0.3, 4.0], &[0.3, 4.0]), 0.0);
        assert!((d(Metric::Torus, &[0.1, 0.2], &[0.9, 0.9]) - 0.13f64.sqrt()).abs() < 1e-12);
        assert!((d(Metric::Euclidean, &[0.0, 0.0], &[3.0, 4.0]) - 5.0).abs() < 1e-12);
        assert!(matches!(distance(Metric::Euclidean, &[0.0], &[0.0, 1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn unit_ball_support_and_radial_law() {
        let cloud = sample_unit_ball(3, 100_000, 5).unwrap();
        let norms: Vec<f64> = cloud.points().map(|p| p.iter().map(|c| c * c).sum::<f64>().sqrt()).collect();
        assert!(norms.iter().all(|&r| r <= 1.0));
        let inner = norms.iter().filter(|&&r| r <= 0.5).count() as f64 / norms.len() as f64;
        assert!((inner - 0.125).abs() < 0.004, "{inner}");

        let line = sample_unit_ball(1, 100_000, 5).unwrap();
        assert!(coordinate_means(&line)[0].abs() < 0.01);
        assert!(sample_unit_ball(0, 1, 1).is_err());
    }

    #[test]
    fn ball_mass_examples() {
        let torus = spec(DensityKind::UniformTorus, 2);
        let m = ball_mass(&torus, &[0.3, 0.3], 0.1, 0, 0).unwrap();
        assert!((m.mass - std::f64::consts::PI * 0.01).abs() < 1e-15);
        assert_eq!(m.std_error, 0.0);
        assert!(matches!(ball_mass(&torus, &[0.3, 0.3], 0.6, 0, 0), Err(Error::Domain(_))));

        let gauss = spec(DensityKind::Gaussian { sigma: 1.0 }, 2);
        let m = ball_mass(&gauss, &[0.0, 0.0], 0.05, 1_000_000, 3).unwrap();
        let approx = 0.0025 / 2.0;
        assert!((m.mass - approx).abs() < 3.0 * m.std_error, "{m:?}");

        for s in [spec(DensityKind::UniformCube, 3), spec(DensityKind::ProductBeta { a: 2.0, b: 2.0 }, 3)] {
            let m = ball_mass(&s, &[0.5, 0.5, 0.5], 2.0, 1000, 1).unwrap();
            assert_eq!(m.mass, 1.0);
            let m = ball_mass(&s, &[0.5, 0.5, 0.5], 0.2, 1000, 1).unwrap();
            assert!((0.0..=1.0).contains(&m.mass));
        }
    }

    #[test]
    fn csv_roundtrip_and_errors() {
        let cloud = sample_points(&spec(DensityKind::Gaussian { sigma: 2.0 }, 3), 50, 9);
        let mut buf = Vec::new();
        cloud.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"# d=3 metric=euclidean\n"));
        assert_eq!(PointCloud::read_csv(&buf[..]).unwrap(), cloud);

        let bad = b"# d=2 metric=torus\n0.1,0.2\n0.3\n";
        assert!(matches!(PointCloud::read_csv(&bad[..]), Err(Error::Parse { line: 3, .. })));
        let outside = b"# d=1 metric=torus\n1.5\n";
        assert!(matches!(PointCloud::read_csv(&outside[..]), Err(Error::Domain(_))));
        assert!(matches!(PointCloud::read_csv(&b"0.1\n"[..]), Err(Error::Parse { line: 1, .. })));
    }

    fn torus_point() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.0f64..1.0, 3)
    }

    proptest! {
        #[test]
        fn torus_distance_is_a_bounded_metric(x in torus_point(), y in torus_point(), z in torus_point()) {
            let d = |a: &[f64], b: &[f64]| distance(Metric::Torus, a, b).unwrap();
            prop_assert!(d(&x, &y) <= 3f64.sqrt() / 2.0 + 1e-15);
            prop_assert_eq!(d(&x, &y), d(&y, &x));
            prop_assert_eq!(d(&x, &y) == 0.0, x == y);
            prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12);
        }
    }

    #[test]
    fn torus_triangle_inequality_many_triples() {
        let cloud = sample_points(&spec(DensityKind::UniformTorus, 4), 30_000, 77);
        for t in 0..10_000 {
            let (x, y, z) = (cloud.point(3 * t), cloud.point(3 * t + 1), cloud.point(3 * t + 2));
            let d = |a, b| distance(Metric::Torus, a, b).unwrap();
            assert!(d(x, z) <= d(x, y) + d(y, z) + 1e-12);
        }
    }
}
