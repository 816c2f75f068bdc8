//! Continuous positive kernels on [0,1]^2 and their midpoint-rule
//! discretization to nonnegative matrices.
//!
//! The quadrature is deliberately uniform: with nodes `x_i = (i - 1/2)/n`
//! and the constant weight `h = 1/n` folded into every entry,
//! `M_ij = a(x_i, x_j) * h`, the identity `(a^t b^(1-t)) h = (a h)^t (b h)^(1-t)`
//! makes discretization commute with Hadamard weighted geometric means, so
//! the matrix chains evaluated on discretized kernels are exactly the
//! discretized kernel chains.

use crate::error::{Error, Result};
use crate::matrix::NonNegativeMatrix;
use crate::report::{InequalityReport, InstanceDigest, Tolerance};
use crate::suites::find_suite;

/// The four built-in kernel families on [0,1]^2, each with one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    /// `exp(-c (x-y)^2)`
    Gauss,
    /// `1 / (1 + c (x-y)^2)`
    Rational,
    /// `c x y`
    Bilinear,
    /// `c`
    Constant,
}

impl KernelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Gauss => "gauss",
            KernelFamily::Rational => "rational",
            KernelFamily::Bilinear => "bilinear",
            KernelFamily::Constant => "constant",
        }
    }
}

/// A named kernel plus grid size, discretizable to a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub param: f64,
    pub grid_n: usize,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, param: f64, grid_n: usize) -> Self {
        Self { family, param, grid_n }
    }

    /// Parses `name` or `name:param`, e.g. `gauss` or `gauss:2.5`.
    pub fn parse(text: &str, grid_n: usize) -> Result<Self> {
        let (name, param) = match text.split_once(':') {
            Some((n, p)) => {
                let param: f64 = p.parse().map_err(|_| Error::Parse {
                    message: format!("bad kernel parameter '{p}'"),
                })?;
                (n, param)
            }
            None => (text, 1.0),
        };
        let family = match name {
            "gauss" => KernelFamily::Gauss,
            "rational" => KernelFamily::Rational,
            "bilinear" => KernelFamily::Bilinear,
            "constant" => KernelFamily::Constant,
            _ => return Err(Error::UnknownKernel { name: name.to_string() }),
        };
        Ok(Self::new(family, param, grid_n))
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let c = self.param;
        match self.family {
            KernelFamily::Gauss => (-c * (x - y) * (x - y)).exp(),
            KernelFamily::Rational => 1.0 / (1.0 + c * (x - y) * (x - y)),
            KernelFamily::Bilinear => c * x * y,
            KernelFamily::Constant => c,
        }
    }

    pub fn with_grid(&self, grid_n: usize) -> Self {
        Self { grid_n, ..*self }
    }
}

/// Midpoint-rule discretization: `M_ij = a(x_i, x_j) / n` with
/// `x_i = (i - 1/2)/n`. Rejects kernels that evaluate negative (or
/// non-finite) at any node.
pub fn discretize(spec: &KernelSpec) -> Result<NonNegativeMatrix> {
    let n = spec.grid_n;
    if n < 2 {
        return Err(Error::BadDimension { n });
    }
    let h = 1.0 / n as f64;
    let node = |i: usize| (i as f64 + 0.5) * h;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let v = spec.evaluate(node(i), node(j));
            if !v.is_finite() || v < 0.0 {
                return Err(Error::KernelValue {
                    name: spec.family.name().to_string(),
                    x: node(i),
                    y: node(j),
                    value: v,
                });
            }
            data.push(v * h);
        }
    }
    NonNegativeMatrix::new(n, data)
}

/// Discretizes the kernels at each grid size and runs the named suite on
/// the resulting operator lists with its canonical parameters. Returns one
/// report per refinement level.
pub fn refine_and_check(
    kernels: &[KernelSpec],
    suite: &str,
    grids: &[usize],
    tol: Tolerance,
) -> Result<Vec<(usize, InequalityReport)>> {
    let spec = find_suite(suite)?;
    if !spec.arity.accepts(kernels.len()) {
        return Err(Error::Arity {
            suite: suite.to_string(),
            expected: spec.arity.describe(),
            got: kernels.len(),
        });
    }
    let mut out = Vec::with_capacity(grids.len());
    for &g in grids {
        let mats: Result<Vec<NonNegativeMatrix>> =
            kernels.iter().map(|k| discretize(&k.with_grid(g))).collect();
        let digest = InstanceDigest {
            seed: 0,
            n: g,
            m: kernels.len(),
            density: 1.0,
            ..InstanceDigest::default()
        };
        out.push((g, spec.run_on_list(&mats?, tol, digest)?));
    }
    Ok(out)
}

/// Convergence trend over the last three levels: for every quantity the
/// change across the finest pair must not exceed 1.1x the change across the
/// previous pair (plus a rounding floor).
pub fn convergence_trend_ok(levels: &[(usize, InequalityReport)]) -> bool {
    if levels.len() < 3 {
        return true;
    }
    let k = levels.len();
    let (_, a) = &levels[k - 3];
    let (_, b) = &levels[k - 2];
    let (_, c) = &levels[k - 1];
    a.quantities.iter().all(|(label, va)| {
        let vb = b.value(label);
        let vc = c.value(label);
        (vc - vb).abs() <= 1.1 * (vb - va).abs() + 1e-12
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectral_radius_value;

    #[test]
    fn constant_kernel_is_rank_one_with_unit_radius() {
        for n in [2, 5, 16] {
            let m = discretize(&KernelSpec::new(KernelFamily::Constant, 1.0, n)).unwrap();
            let expect = 1.0 / n as f64;
            assert!(m.entries().iter().all(|&v| v == expect));
            // Rank one with trace exactly 1.
            let rho = spectral_radius_value(&m).unwrap();
            assert!((rho - 1.0).abs() <= 1e-11, "n={n}: rho={rho}");
        }
    }

    #[test]
    fn gauss_kernel_entries_match_pointwise_evaluation() {
        let spec = KernelSpec::new(KernelFamily::Gauss, 1.0, 4);
        let m = discretize(&spec).unwrap();
        let h = 0.25;
        for i in 0..4 {
            for j in 0..4 {
                let x = (i as f64 + 0.5) * h;
                let y = (j as f64 + 0.5) * h;
                let expect = (-(x - y) * (x - y)).exp() * h;
                assert!((m.get(i, j) - expect).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn bilinear_radius_approaches_one_third() {
        // Rank one: rho = h * sum x_i^2, the midpoint Riemann sum of x^2.
        let mut prev_err = f64::INFINITY;
        for n in [8, 32, 128] {
            let m = discretize(&KernelSpec::new(KernelFamily::Bilinear, 1.0, n)).unwrap();
            let rho = spectral_radius_value(&m).unwrap();
            let h = 1.0 / n as f64;
            let riemann: f64 = (0..n).map(|i| ((i as f64 + 0.5) * h).powi(2) * h).sum();
            assert!((rho - riemann).abs() <= 1e-10);
            let err = (rho - 1.0 / 3.0).abs();
            assert!(err < prev_err);
            prev_err = err;
        }
        assert!(prev_err <= 1e-4);
    }

    #[test]
    fn negative_kernels_are_rejected() {
        assert!(matches!(
            discretize(&KernelSpec::new(KernelFamily::Constant, -1.0, 4)),
            Err(Error::KernelValue { .. })
        ));
        assert!(discretize(&KernelSpec::new(KernelFamily::Gauss, 1.0, 1)).is_err());
    }

    #[test]
    fn kernel_parsing() {
        let k = KernelSpec::parse("gauss:2.5", 8).unwrap();
        assert_eq!(k.family, KernelFamily::Gauss);
        assert_eq!(k.param, 2.5);
        assert_eq!(KernelSpec::parse("rational", 8).unwrap().param, 1.0);
        assert!(KernelSpec::parse("nosuch", 8).is_err());
        assert!(KernelSpec::parse("gauss:abc", 8).is_err());
    }

    #[test]
    fn discretization_commutes_with_hadamard_means() {
        // (a^t b^(1-t)) h equals (a h)^t (b h)^(1-t) entrywise.
        let n = 16;
        let t = 0.35;
        let ka = KernelSpec::new(KernelFamily::Gauss, 1.5, n);
        let kb = KernelSpec::new(KernelFamily::Rational, 2.0, n);
        let ma = discretize(&ka).unwrap();
        let mb = discretize(&kb).unwrap();
        let mean = ma
            .hadamard_power(t)
            .unwrap()
            .hadamard(&mb.hadamard_power(1.0 - t).unwrap())
            .unwrap();
        let h = 1.0 / n as f64;
        for i in 0..n {
            for j in 0..n {
                let x = (i as f64 + 0.5) * h;
                let y = (j as f64 + 0.5) * h;
                let blended = ka.evaluate(x, y).powf(t) * kb.evaluate(x, y).powf(1.0 - t) * h;
                assert!(
                    (mean.get(i, j) - blended).abs() <= 1e-12 * blended.max(1.0),
                    "({i},{j}): {} vs {blended}",
                    mean.get(i, j)
                );
            }
        }
    }

    #[test]
    fn constant_kernels_give_all_one_chains() {
        let kernels =
            vec![KernelSpec::new(KernelFamily::Constant, 1.0, 8); 2];
        let levels = refine_and_check(&kernels, "cor35", &[8, 16], Tolerance::DEFAULT).unwrap();
        assert_eq!(levels.len(), 2);
        for (_, rep) in &levels {
            assert!(rep.all_pass());
            for (label, v) in &rep.quantities {
                assert!((v - 1.0).abs() <= 1e-10, "{label} = {v}");
            }
        }
        assert!(convergence_trend_ok(&levels));
    }

    #[test]
    fn arity_mismatch_is_config_error() {
        let kernels = vec![KernelSpec::new(KernelFamily::Gauss, 1.0, 8)];
        assert!(matches!(
            refine_and_check(&kernels, "thm44", &[8], Tolerance::DEFAULT),
            Err(Error::Arity { .. })
        ));
        assert!(matches!(
            refine_and_check(&kernels, "nosuch", &[8], Tolerance::DEFAULT),
            Err(Error::UnknownSuite { .. })
        ));
    }
}
