//! One checker per inequality chain. Each checker evaluates every quantity
//! in its chain, compares adjacent links under the hybrid tolerance and
//! returns an [`InequalityReport`]; constraint problems surface as
//! configuration errors, never as inequality failures.
//!
//! The suite registry maps the short tags used on the command line
//! (`thm21` ... `cor49`) to samplers that draw a random instance for a
//! [`TrialConfig`] and to kernel-driven runs on fixed operator lists.

use crate::error::{Error, Result};
use crate::matrix::{
    alternating_cyclic_product, alternating_product_mean_even_pow,
    alternating_product_mean_odd_pow, cyclic_product, entrywise_leq, reversed_alternating_product,
    rotated_geometric_mean, weighted_geometric_mean, NonNegativeMatrix, WeightConstraint,
    WeightVector,
};
use crate::report::{InequalityReport, InstanceDigest, Tolerance};
use crate::sampling::{sample_matrix, sample_weights, trial_rng};
use crate::spectral::{numerical_radius, operator_norm, spectral_radius_value, NormKind};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Per-trial configuration; the digest of a report is reconstructible from
/// one of these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub density: f64,
    pub weight_mode: WeightConstraint,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl TrialConfig {
    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.rel_tol, self.abs_tol)
    }

    fn base_digest(&self) -> InstanceDigest {
        InstanceDigest {
            seed: self.seed,
            n: self.n,
            m: self.m,
            density: self.density,
            ..InstanceDigest::default()
        }
    }
}

fn same_dim(mats: &[NonNegativeMatrix]) -> Result<usize> {
    let first = mats.first().ok_or(Error::EmptyList)?;
    for m in mats {
        if m.n() != first.n() {
            return Err(Error::DimensionMismatch { left: first.n(), right: m.n() });
        }
    }
    Ok(first.n())
}

fn require_constraint(w: &WeightVector, required: WeightConstraint, suite: &str) -> Result<()> {
    if w.constraint() != required {
        return Err(Error::WeightConstraintMismatch {
            suite: suite.to_string(),
            required: required.tag(),
        });
    }
    Ok(())
}

/// `prod_j values_j ^ weights_j`.
fn weighted_product(values: &[f64], weights: &[f64]) -> f64 {
    values.iter().zip(weights).map(|(&v, &w)| v.powf(w)).product()
}

fn product(mats: &[NonNegativeMatrix]) -> Result<NonNegativeMatrix> {
    let mut acc = mats.first().ok_or(Error::EmptyList)?.clone();
    for m in &mats[1..] {
        acc = acc.matmul(m)?;
    }
    Ok(acc)
}

/// Entrywise `A_1^(a) o ... o A_m^(a)` with one exponent for all factors.
fn hadamard_combine(mats: &[NonNegativeMatrix], alpha: f64) -> Result<NonNegativeMatrix> {
    let n = same_dim(mats)?;
    let mut acc = NonNegativeMatrix::identity(n).hadamard_power(0.0)?;
    for m in mats {
        acc = acc.hadamard(&m.hadamard_power(alpha)?)?;
    }
    Ok(acc)
}

/// Cyclically rotated Hadamard means `B_1 ... B_m` multiplied in order.
fn rotated_mean_product(
    mats: &[NonNegativeMatrix],
    w: &WeightVector,
) -> Result<NonNegativeMatrix> {
    let factors: Result<Vec<_>> =
        (1..=mats.len()).map(|i| rotated_geometric_mean(mats, w, i)).collect();
    product(&factors?)
}

fn all_cyclic_products(mats: &[NonNegativeMatrix]) -> Result<Vec<NonNegativeMatrix>> {
    (1..=mats.len()).map(|j| cyclic_product(mats, j)).collect()
}

fn record_entrywise(
    rep: &mut InequalityReport,
    lhs: &NonNegativeMatrix,
    rhs: &NonNegativeMatrix,
    tol: f64,
) -> Result<()> {
    let check = entrywise_leq(lhs, rhs, tol)?;
    rep.quantity("basic2_lhs_worst", check.lhs_at_worst);
    rep.quantity("basic2_rhs_worst", check.rhs_at_worst);
    rep.push_verdict(
        "basic2_lhs_worst",
        "basic2_rhs_worst",
        check.pass,
        -check.worst_excess,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Grid checkers: A = product over rows of row-wise Hadamard means, compared
// against the column products.
// ---------------------------------------------------------------------------

struct GridParts {
    a: NonNegativeMatrix,
    col_products: Vec<NonNegativeMatrix>,
    mean_of_col_products: NonNegativeMatrix,
}

fn grid_parts(grid: &[Vec<NonNegativeMatrix>], w: &WeightVector) -> Result<GridParts> {
    if grid.is_empty() {
        return Err(Error::EmptyList);
    }
    let m = w.len();
    for row in grid {
        if row.len() != m {
            return Err(Error::WeightCount { mats: row.len(), weights: m });
        }
        same_dim(row)?;
    }
    let flat: Vec<NonNegativeMatrix> = grid.iter().flatten().cloned().collect();
    same_dim(&flat)?;

    let row_means: Result<Vec<_>> =
        grid.iter().map(|row| weighted_geometric_mean(row, w)).collect();
    let a = product(&row_means?)?;

    let col_products: Result<Vec<_>> = (0..m)
        .map(|j| {
            let col: Vec<NonNegativeMatrix> = grid.iter().map(|row| row[j].clone()).collect();
            product(&col)
        })
        .collect();
    let col_products = col_products?;
    let mean_of_col_products = weighted_geometric_mean(&col_products, w)?;
    Ok(GridParts { a, col_products, mean_of_col_products })
}

/// Product of Hadamard means against column products: entrywise bound, then
/// one-step norm, spectral-radius and numerical-radius bounds.
pub fn check_thm21(
    grid: &[Vec<NonNegativeMatrix>],
    w: &WeightVector,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    require_constraint(w, WeightConstraint::SumOne, "thm21")?;
    let parts = grid_parts(grid, w)?;
    let mut rep = InequalityReport::new("thm21", digest, tol);

    record_entrywise(&mut rep, &parts.a, &parts.mean_of_col_products, tol.rel)?;

    for kind in NormKind::ALL {
        let t = kind.tag();
        let lhs = operator_norm(&parts.a, kind)?;
        let bounds: Result<Vec<f64>> =
            parts.col_products.iter().map(|c| operator_norm(c, kind)).collect();
        rep.quantity(&format!("norm_{t}_lhs"), lhs);
        rep.quantity(&format!("norm_{t}_rhs"), weighted_product(&bounds?, w.weights()));
        rep.chain(&[&format!("norm_{t}_lhs"), &format!("norm_{t}_rhs")]);
    }

    let rhos: Result<Vec<f64>> =
        parts.col_products.iter().map(spectral_radius_value).collect();
    rep.quantity("rho_lhs", spectral_radius_value(&parts.a)?);
    rep.quantity("rho_rhs", weighted_product(&rhos?, w.weights()));
    rep.chain(&["rho_lhs", "rho_rhs"]);

    let wrads: Result<Vec<f64>> = parts.col_products.iter().map(numerical_radius).collect();
    rep.quantity("numrad_lhs", numerical_radius(&parts.a)?);
    rep.quantity("numrad_rhs", weighted_product(&wrads?, w.weights()));
    rep.chain(&["numrad_lhs", "numrad_rhs"]);
    Ok(rep)
}

/// Refined grid chains: the Hadamard mean of the column products is
/// inserted as a middle term in the norm, spectral and numerical-radius
/// bounds.
pub fn check_thm23(
    grid: &[Vec<NonNegativeMatrix>],
    w: &WeightVector,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    require_constraint(w, WeightConstraint::SumOne, "thm23")?;
    let parts = grid_parts(grid, w)?;
    let mut rep = InequalityReport::new("thm23", digest, tol);

    for kind in NormKind::ALL {
        let t = kind.tag();
        let bounds: Result<Vec<f64>> =
            parts.col_products.iter().map(|c| operator_norm(c, kind)).collect();
        rep.quantity(&format!("norm_{t}_lhs"), operator_norm(&parts.a, kind)?);
        rep.quantity(
            &format!("norm_{t}_mid"),
            operator_norm(&parts.mean_of_col_products, kind)?,
        );
        rep.quantity(&format!("norm_{t}_rhs"), weighted_product(&bounds?, w.weights()));
        rep.chain(&[
            &format!("norm_{t}_lhs"),
            &format!("norm_{t}_mid"),
            &format!("norm_{t}_rhs"),
        ]);
    }

    let rhos: Result<Vec<f64>> =
        parts.col_products.iter().map(spectral_radius_value).collect();
    rep.quantity("rho_lhs", spectral_radius_value(&parts.a)?);
    rep.quantity("rho_mid", spectral_radius_value(&parts.mean_of_col_products)?);
    rep.quantity("rho_rhs", weighted_product(&rhos?, w.weights()));
    rep.chain(&["rho_lhs", "rho_mid", "rho_rhs"]);

    let wrads: Result<Vec<f64>> = parts.col_products.iter().map(numerical_radius).collect();
    rep.quantity("numrad_lhs", numerical_radius(&parts.a)?);
    rep.quantity("numrad_mid", numerical_radius(&parts.mean_of_col_products)?);
    rep.quantity("numrad_rhs", weighted_product(&wrads?, w.weights()));
    rep.chain(&["numrad_lhs", "numrad_mid", "numrad_rhs"]);
    Ok(rep)
}

/// Grid chains under the relaxed weight constraint (sum >= 1): entrywise
/// bound plus refined norm and spectral chains. The numerical-radius
/// product bound is deliberately not asserted here.
pub fn check_thm24(
    grid: &[Vec<NonNegativeMatrix>],
    w: &WeightVector,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    require_constraint(w, WeightConstraint::SumAtLeastOne, "thm24")?;
    let parts = grid_parts(grid, w)?;
    let mut rep = InequalityReport::new("thm24", digest, tol);

    record_entrywise(&mut rep, &parts.a, &parts.mean_of_col_products, tol.rel)?;

    for kind in NormKind::ALL {
        let t = kind.tag();
        let bounds: Result<Vec<f64>> =
            parts.col_products.iter().map(|c| operator_norm(c, kind)).collect();
        rep.quantity(&format!("norm_{t}_lhs"), operator_norm(&parts.a, kind)?);
        rep.quantity(
            &format!("norm_{t}_mid"),
            operator_norm(&parts.mean_of_col_products, kind)?,
        );
        rep.quantity(&format!("norm_{t}_rhs"), weighted_product(&bounds?, w.weights()));
        rep.chain(&[
            &format!("norm_{t}_lhs"),
            &format!("norm_{t}_mid"),
            &format!("norm_{t}_rhs"),
        ]);
    }

    let rhos: Result<Vec<f64>> =
        parts.col_products.iter().map(spectral_radius_value).collect();
    rep.quantity("rho_lhs", spectral_radius_value(&parts.a)?);
    rep.quantity("rho_mid", spectral_radius_value(&parts.mean_of_col_products)?);
    rep.quantity("rho_rhs", weighted_product(&rhos?, w.weights()));
    rep.chain(&["rho_lhs", "rho_mid", "rho_rhs"]);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Cyclic-rotation checkers.
// ---------------------------------------------------------------------------

/// Spectral radius of the product of rotated Hadamard means against the
/// plain operator product.
pub fn check_thm31(
    mats: &[NonNegativeMatrix],
    w: &WeightVector,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    require_constraint(w, WeightConstraint::SumOne, "thm31")?;
    same_dim(mats)?;
    if mats.len() != w.len() {
        return Err(Error::WeightCount { mats: mats.len(), weights: w.len() });
    }
    let mut rep = InequalityReport::new("thm31", digest, tol);
    rep.quantity("rho_lhs", spectral_radius_value(&rotated_mean_product(mats, w)?)?);
    rep.quantity("rho_rhs", spectral_radius_value(&cyclic_product(mats, 1)?)?);
    rep.chain(&["rho_lhs", "rho_rhs"]);
    Ok(rep)
}

fn rotation_chains(
    suite: &'static str,
    mats: &[NonNegativeMatrix],
    w: &WeightVector,
    rho_rhs_exponent: f64,
    assert_numrad_product_bound: bool,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    same_dim(mats)?;
    if mats.len() != w.len() {
        return Err(Error::WeightCount { mats: mats.len(), weights: w.len() });
    }
    let mean_product = rotated_mean_product(mats, w)?;
    let cyclics = all_cyclic_products(mats)?;
    let cyclic_mean = {
        let powered: Result<Vec<_>> = cyclics
            .iter()
            .zip(w.weights())
            .map(|(p, &a)| p.hadamard_power(a))
            .collect();
        let mut acc = NonNegativeMatrix::identity(mats[0].n()).hadamard_power(0.0)?;
        for f in powered? {
            acc = acc.hadamard(&f)?;
        }
        acc
    };

    let mut rep = InequalityReport::new(suite, digest, tol);

    rep.quantity("rho_lhs", spectral_radius_value(&mean_product)?);
    rep.quantity("rho_mid", spectral_radius_value(&cyclic_mean)?);
    rep.quantity(
        "rho_rhs",
        spectral_radius_value(&cyclics[0])?.powf(rho_rhs_exponent),
    );
    rep.chain(&["rho_lhs", "rho_mid", "rho_rhs"]);

    for kind in NormKind::ALL {
        let t = kind.tag();
        let bounds: Result<Vec<f64>> = cyclics.iter().map(|p| operator_norm(p, kind)).collect();
        rep.quantity(&format!("norm_{t}_lhs"), operator_norm(&mean_product, kind)?);
        rep.quantity(&format!("norm_{t}_mid"), operator_norm(&cyclic_mean, kind)?);
        rep.quantity(&format!("norm_{t}_rhs"), weighted_product(&bounds?, w.weights()));
        rep.chain(&[
            &format!("norm_{t}_lhs"),
            &format!("norm_{t}_mid"),
            &format!("norm_{t}_rhs"),
        ]);
    }

    rep.quantity("numrad_lhs", numerical_radius(&mean_product)?);
    rep.quantity("numrad_mid", numerical_radius(&cyclic_mean)?);
    if assert_numrad_product_bound {
        let wrads: Result<Vec<f64>> = cyclics.iter().map(numerical_radius).collect();
        rep.quantity("numrad_rhs", weighted_product(&wrads?, w.weights()));
        rep.chain(&["numrad_lhs", "numrad_mid", "numrad_rhs"]);
    } else {
        rep.chain(&["numrad_lhs", "numrad_mid"]);
    }
    Ok(rep)
}

/// Rotated-mean product against the Hadamard mean of cyclic products, with
/// norm and numerical-radius chains (weights summing to one).
pub fn check_thm32(
    mats: &[NonNegativeMatrix],
    w: &WeightVector,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    require_constraint(w, WeightConstraint::SumOne, "thm32")?;
    rotation_chains("thm32", mats, w, 1.0, true, digest, tol)
}

/// Equal-weight specialization: the Hadamard mean itself enters on the left
/// and every exponent becomes 1/m.
pub fn check_cor33(
    mats: &[NonNegativeMatrix],
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    same_dim(mats)?;
    let m = mats.len();
    let w = WeightVector::equal(m);
    let inv_m = 1.0 / m as f64;

    let mean = weighted_geometric_mean(mats, &w)?;
    let mean_pow_m = mean.matrix_power(m);
    let cyclics = all_cyclic_products(mats)?;
    let cyclic_mean = {
        let mut acc = NonNegativeMatrix::identity(mats[0].n()).hadamard_power(0.0)?;
        for p in &cyclics {
            acc = acc.hadamard(&p.hadamard_power(inv_m)?)?;
        }
        acc
    };

    let mut rep = InequalityReport::new("cor33", digest, tol);
    rep.quantity("rho_lhs", spectral_radius_value(&mean)?);
    rep.quantity("rho_mid", spectral_radius_value(&cyclic_mean)?.powf(inv_m));
    rep.quantity("rho_rhs", spectral_radius_value(&cyclics[0])?.powf(inv_m));
    rep.chain(&["rho_lhs", "rho_mid", "rho_rhs"]);

    for kind in NormKind::ALL {
        let t = kind.tag();
        let bounds: Result<Vec<f64>> = cyclics.iter().map(|p| operator_norm(p, kind)).collect();
        rep.quantity(&format!("norm_{t}_lhs"), operator_norm(&mean_pow_m, kind)?);
        rep.quantity(&format!("norm_{t}_mid"), operator_norm(&cyclic_mean, kind)?);
        rep.quantity(&format!("norm_{t}_rhs"), weighted_product(&bounds?, w.weights()));
        rep.chain(&[
            &format!("norm_{t}_lhs"),
            &format!("norm_{t}_mid"),
            &format!("norm_{t}_rhs"),
        ]);
    }

    let wrads: Result<Vec<f64>> = cyclics.iter().map(numerical_radius).collect();
    rep.quantity("numrad_lhs", numerical_radius(&mean_pow_m)?);
    rep.quantity("numrad_mid", numerical_radius(&cyclic_mean)?);
    rep.quantity("numrad_rhs", weighted_product(&wrads?, w.weights()));
    rep.chain(&["numrad_lhs", "numrad_mid", "numrad_rhs"]);
    Ok(rep)
}

/// Two-operator chains: the alpha-weighted pair of Hadamard means against
/// the mean of the two ordered products, in rho, every norm and the
/// numerical radius, plus the square-root forms.
pub fn check_cor35(
    a: &NonNegativeMatrix,
    b: &NonNegativeMatrix,
    alpha: f64,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    same_dim(&[a.clone(), b.clone()])?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::ExponentRange { alpha, min: 0.0 });
    }
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    let g1 = a.hadamard_power(alpha)?.hadamard(&b.hadamard_power(1.0 - alpha)?)?;
    let g2 = b.hadamard_power(alpha)?.hadamard(&a.hadamard_power(1.0 - alpha)?)?;
    let pair_product = g1.matmul(&g2)?;
    let mean_w = ab.hadamard_power(alpha)?.hadamard(&ba.hadamard_power(1.0 - alpha)?)?;
    let half = a.hadamard_power(0.5)?.hadamard(&b.hadamard_power(0.5)?)?;
    let half_sq = half.matmul(&half)?;
    let mean_half = ab.hadamard_power(0.5)?.hadamard(&ba.hadamard_power(0.5)?)?;

    let rho_ab = spectral_radius_value(&ab)?;
    let rho_ba = spectral_radius_value(&ba)?;

    let mut rep = InequalityReport::new("cor35", digest, tol);

    rep.quantity("rho_w_lhs", spectral_radius_value(&pair_product)?);
    rep.quantity("rho_w_mid", spectral_radius_value(&mean_w)?);
    rep.quantity("rho_w_rhs", rho_ab);
    rep.chain(&["rho_w_lhs", "rho_w_mid", "rho_w_rhs"]);

    rep.quantity("rho_half_lhs", spectral_radius_value(&half)?);
    rep.quantity("rho_half_mid", spectral_radius_value(&mean_half)?.sqrt());
    rep.quantity("rho_half_rhs", rho_ab.sqrt());
    rep.chain(&["rho_half_lhs", "rho_half_mid", "rho_half_rhs"]);

    for kind in NormKind::ALL {
        let t = kind.tag();
        let nab = operator_norm(&ab, kind)?;
        let nba = operator_norm(&ba, kind)?;
        rep.quantity(&format!("norm_{t}_w_lhs"), operator_norm(&pair_product, kind)?);
        rep.quantity(&format!("norm_{t}_w_mid"), operator_norm(&mean_w, kind)?);
        rep.quantity(&format!("norm_{t}_w_rhs"), nab.powf(alpha) * nba.powf(1.0 - alpha));
        rep.chain(&[
            &format!("norm_{t}_w_lhs"),
            &format!("norm_{t}_w_mid"),
            &format!("norm_{t}_w_rhs"),
        ]);

        rep.quantity(&format!("norm_{t}_half_lhs"), operator_norm(&half_sq, kind)?);
        rep.quantity(&format!("norm_{t}_half_mid"), operator_norm(&mean_half, kind)?);
        rep.quantity(&format!("norm_{t}_half_rhs"), nab.sqrt() * nba.sqrt());
        rep.chain(&[
            &format!("norm_{t}_half_lhs"),
            &format!("norm_{t}_half_mid"),
            &format!("norm_{t}_half_rhs"),
        ]);
    }

    let wab = numerical_radius(&ab)?;
    let wba = numerical_radius(&ba)?;
    rep.quantity("numrad_w_lhs", numerical_radius(&pair_product)?);
    rep.quantity("numrad_w_mid", numerical_radius(&mean_w)?);
    rep.quantity("numrad_w_rhs", wab.powf(alpha) * wba.powf(1.0 - alpha));
    rep.chain(&["numrad_w_lhs", "numrad_w_mid", "numrad_w_rhs"]);

    rep.quantity("numrad_half_lhs", numerical_radius(&half_sq)?);
    rep.quantity("numrad_half_mid", numerical_radius(&mean_half)?);
    rep.quantity("numrad_half_rhs", wab.sqrt() * wba.sqrt());
    rep.chain(&["numrad_half_lhs", "numrad_half_mid", "numrad_half_rhs"]);
    Ok(rep)
}

/// Rotation chains under sum >= 1 weights: the right end of the spectral
/// chain carries the total weight as exponent, and only the first
/// numerical-radius link is asserted (the product bound is known to fail in
/// this regime).
pub fn check_thm36(
    mats: &[NonNegativeMatrix],
    w: &WeightVector,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    require_constraint(w, WeightConstraint::SumAtLeastOne, "thm36")?;
    rotation_chains("thm36", mats, w, w.sum(), false, digest, tol)
}

// ---------------------------------------------------------------------------
// Hilbert-space (l2) checkers built on gram matrices.
// ---------------------------------------------------------------------------

/// Gram-route chains: the l2 norm of the equal-weight Hadamard mean against
/// the gram means and gram cyclic products, plus the weighted norm
/// refinement.
pub fn check_thm41(
    mats: &[NonNegativeMatrix],
    w: &WeightVector,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    require_constraint(w, WeightConstraint::SumOne, "thm41")?;
    same_dim(mats)?;
    if mats.len() != w.len() {
        return Err(Error::WeightCount { mats: mats.len(), weights: w.len() });
    }
    let m = mats.len();
    let inv_m = 1.0 / m as f64;
    let grams: Vec<NonNegativeMatrix> = mats.iter().map(|a| a.gram()).collect();
    let gram_cyclics = all_cyclic_products(&grams)?;
    let equal = WeightVector::equal(m);

    let mut rep = InequalityReport::new("thm41", digest, tol);

    rep.quantity(
        "gram_q1",
        operator_norm(&weighted_geometric_mean(mats, &equal)?, NormKind::L2)?,
    );
    rep.quantity(
        "gram_q2",
        spectral_radius_value(&weighted_geometric_mean(&grams, &equal)?)?.sqrt(),
    );
    rep.quantity(
        "gram_q3",
        spectral_radius_value(&weighted_geometric_mean(&gram_cyclics, &equal)?)?
            .powf(0.5 * inv_m),
    );
    rep.quantity(
        "gram_q4",
        spectral_radius_value(&gram_cyclics[0])?.powf(0.5 * inv_m),
    );
    rep.chain(&["gram_q1", "gram_q2", "gram_q3", "gram_q4"]);

    norm_ref_chain(&mut rep, mats, &grams, w)?;
    Ok(rep)
}

fn norm_ref_chain(
    rep: &mut InequalityReport,
    mats: &[NonNegativeMatrix],
    grams: &[NonNegativeMatrix],
    w: &WeightVector,
) -> Result<()> {
    rep.quantity(
        "normref_lhs",
        operator_norm(&weighted_geometric_mean(mats, w)?, NormKind::L2)?,
    );
    rep.quantity(
        "normref_mid",
        spectral_radius_value(&weighted_geometric_mean(grams, w)?)?.sqrt(),
    );
    let norms: Result<Vec<f64>> =
        mats.iter().map(|a| operator_norm(a, NormKind::L2)).collect();
    rep.quantity("normref_rhs", weighted_product(&norms?, w.weights()));
    rep.chain(&["normref_lhs", "normref_mid", "normref_rhs"]);
    Ok(())
}

/// The weighted norm refinement alone, under sum >= 1 weights.
pub fn check_thm42(
    mats: &[NonNegativeMatrix],
    w: &WeightVector,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    require_constraint(w, WeightConstraint::SumAtLeastOne, "thm42")?;
    same_dim(mats)?;
    if mats.len() != w.len() {
        return Err(Error::WeightCount { mats: mats.len(), weights: w.len() });
    }
    let grams: Vec<NonNegativeMatrix> = mats.iter().map(|a| a.gram()).collect();
    let mut rep = InequalityReport::new("thm42", digest, tol);
    norm_ref_chain(&mut rep, mats, &grams, w)?;
    Ok(rep)
}

/// Two-operator gram chains ending in the exact identity
/// `rho(A^T A B^T B)^(1/4) = ||A B^T||^(1/2)`, checked two-sided, plus the
/// alpha and alpha+beta weighted variants.
pub fn check_cor43(
    a: &NonNegativeMatrix,
    b: &NonNegativeMatrix,
    alpha: f64,
    beta: f64,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    same_dim(&[a.clone(), b.clone()])?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::ExponentRange { alpha, min: 0.0 });
    }
    if !(beta > 0.0) || alpha + beta < 1.0 - 1e-12 {
        return Err(Error::ExponentRange { alpha: beta, min: 1.0 - alpha });
    }
    let sa = a.gram();
    let sb = b.gram();
    let sab = sa.matmul(&sb)?;
    let sba = sb.matmul(&sa)?;
    let norm_a = operator_norm(a, NormKind::L2)?;
    let norm_b = operator_norm(b, NormKind::L2)?;

    let mut rep = InequalityReport::new("cor43", digest, tol);

    rep.quantity(
        "gram_q1",
        operator_norm(
            &a.hadamard_power(0.5)?.hadamard(&b.hadamard_power(0.5)?)?,
            NormKind::L2,
        )?,
    );
    rep.quantity(
        "gram_q2",
        spectral_radius_value(&sa.hadamard_power(0.5)?.hadamard(&sb.hadamard_power(0.5)?)?)?
            .sqrt(),
    );
    rep.quantity(
        "gram_q3",
        spectral_radius_value(
            &sab.hadamard_power(0.5)?.hadamard(&sba.hadamard_power(0.5)?)?,
        )?
        .powf(0.25),
    );
    rep.quantity("gram_q4", spectral_radius_value(&sab)?.powf(0.25));
    rep.quantity(
        "cross_norm_half",
        operator_norm(&a.matmul(&b.transpose())?, NormKind::L2)?.sqrt(),
    );
    rep.quantity("norm_product_half", norm_a.sqrt() * norm_b.sqrt());
    rep.chain(&["gram_q1", "gram_q2", "gram_q3", "gram_q4"]);
    rep.link_equal("gram_q4", "cross_norm_half");
    rep.link("cross_norm_half", "norm_product_half");

    rep.quantity(
        "alpha_lhs",
        operator_norm(
            &a.hadamard_power(alpha)?.hadamard(&b.hadamard_power(1.0 - alpha)?)?,
            NormKind::L2,
        )?,
    );
    rep.quantity(
        "alpha_mid",
        spectral_radius_value(
            &sa.hadamard_power(alpha)?.hadamard(&sb.hadamard_power(1.0 - alpha)?)?,
        )?
        .sqrt(),
    );
    rep.quantity("alpha_rhs", norm_a.powf(alpha) * norm_b.powf(1.0 - alpha));
    rep.chain(&["alpha_lhs", "alpha_mid", "alpha_rhs"]);

    rep.quantity(
        "ab_lhs",
        operator_norm(
            &a.hadamard_power(alpha)?.hadamard(&b.hadamard_power(beta)?)?,
            NormKind::L2,
        )?,
    );
    rep.quantity(
        "ab_mid",
        spectral_radius_value(
            &sa.hadamard_power(alpha)?.hadamard(&sb.hadamard_power(beta)?)?,
        )?
        .sqrt(),
    );
    rep.quantity("ab_rhs", norm_a.powf(alpha) * norm_b.powf(beta));
    rep.chain(&["ab_lhs", "ab_mid", "ab_rhs"]);
    Ok(rep)
}

/// Cross-gram chains `||A^(1/2) o B^(1/2)||` against `rho(A^T B)` and its
/// alpha >= 1/2 variant, extended through the cross norm to the norm
/// product.
pub fn check_thm44(
    a: &NonNegativeMatrix,
    b: &NonNegativeMatrix,
    alpha: f64,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    same_dim(&[a.clone(), b.clone()])?;
    if alpha < 0.5 - 1e-15 {
        return Err(Error::ExponentRange { alpha, min: 0.5 });
    }
    let atb = a.transpose().matmul(b)?;
    let bta = b.transpose().matmul(a)?;
    let rho_atb = spectral_radius_value(&atb)?;

    let mut rep = InequalityReport::new("thm44", digest, tol);

    rep.quantity(
        "half_lhs",
        operator_norm(
            &a.hadamard_power(0.5)?.hadamard(&b.hadamard_power(0.5)?)?,
            NormKind::L2,
        )?,
    );
    rep.quantity(
        "half_mid",
        spectral_radius_value(
            &atb.hadamard_power(0.5)?.hadamard(&bta.hadamard_power(0.5)?)?,
        )?
        .sqrt(),
    );
    rep.quantity("half_rhs", rho_atb.sqrt());
    rep.quantity(
        "cross_norm_half",
        operator_norm(&a.matmul(&b.transpose())?, NormKind::L2)?.sqrt(),
    );
    rep.quantity(
        "norm_product_half",
        operator_norm(a, NormKind::L2)?.sqrt() * operator_norm(b, NormKind::L2)?.sqrt(),
    );
    rep.chain(&["half_lhs", "half_mid", "half_rhs", "cross_norm_half", "norm_product_half"]);

    rep.quantity(
        "alpha_lhs",
        operator_norm(
            &a.hadamard_power(alpha)?.hadamard(&b.hadamard_power(alpha)?)?,
            NormKind::L2,
        )?,
    );
    rep.quantity(
        "alpha_mid",
        spectral_radius_value(
            &atb.hadamard_power(alpha)?.hadamard(&bta.hadamard_power(alpha)?)?,
        )?
        .sqrt(),
    );
    rep.quantity("alpha_rhs", rho_atb.powf(alpha));
    rep.chain(&["alpha_lhs", "alpha_mid", "alpha_rhs"]);
    Ok(rep)
}

/// Alternating-product chains for any m: even lists go through the cyclic
/// alternating-transpose mean, odd lists through the doubled-length one.
pub fn check_thm45_47(
    mats: &[NonNegativeMatrix],
    alpha: f64,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    same_dim(mats)?;
    let m = mats.len();
    let min = 1.0 / m as f64;
    if alpha < min - 1e-15 {
        return Err(Error::ExponentRange { alpha, min });
    }
    let mut rep = InequalityReport::new("thm4547", digest, tol);
    rep.quantity(
        "mean_norm",
        operator_norm(&hadamard_combine(mats, alpha)?, NormKind::L2)?,
    );
    if m % 2 == 0 {
        let shifted_mean = alternating_product_mean_even_pow(mats, alpha)?;
        rep.quantity(
            "shift_mean_root",
            spectral_radius_value(&shifted_mean)?.powf(1.0 / m as f64),
        );
        let forward = alternating_cyclic_product(mats, 1, m, true)?;
        let reversed = reversed_alternating_product(mats)?;
        rep.quantity(
            "alternating_bound",
            (spectral_radius_value(&forward)? * spectral_radius_value(&reversed)?)
                .powf(alpha / 2.0),
        );
    } else {
        let shifted_mean = alternating_product_mean_odd_pow(mats, alpha)?;
        rep.quantity(
            "shift_mean_root",
            spectral_radius_value(&shifted_mean)?.powf(1.0 / (2 * m) as f64),
        );
        let long = alternating_cyclic_product(mats, 1, 2 * m, false)?;
        rep.quantity(
            "alternating_bound",
            spectral_radius_value(&long)?.powf(alpha / 2.0),
        );
    }
    rep.chain(&["mean_norm", "shift_mean_root", "alternating_bound"]);
    Ok(rep)
}

/// Three-operator specialization of the odd alternating chain.
pub fn check_cor48(
    a1: &NonNegativeMatrix,
    a2: &NonNegativeMatrix,
    a3: &NonNegativeMatrix,
    alpha: f64,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    let mats = [a1.clone(), a2.clone(), a3.clone()];
    same_dim(&mats)?;
    if alpha < 1.0 / 3.0 - 1e-15 {
        return Err(Error::ExponentRange { alpha, min: 1.0 / 3.0 });
    }
    let mut rep = InequalityReport::new("cor48", digest, tol);
    rep.quantity(
        "mean_norm",
        operator_norm(&hadamard_combine(&mats, alpha)?, NormKind::L2)?,
    );
    rep.quantity(
        "shift_mean_root",
        spectral_radius_value(&alternating_product_mean_odd_pow(&mats, alpha)?)?
            .powf(1.0 / 6.0),
    );
    rep.quantity(
        "alternating_bound",
        spectral_radius_value(&alternating_cyclic_product(&mats, 1, 6, false)?)?
            .powf(alpha / 2.0),
    );
    rep.chain(&["mean_norm", "shift_mean_root", "alternating_bound"]);
    Ok(rep)
}

/// Lower bound for the norm of the triple product A B A: the transposed
/// middle factor makes the chain valid (the counterexample shows the plain
/// middle factor does not).
pub fn check_cor49_jordan(
    a: &NonNegativeMatrix,
    b: &NonNegativeMatrix,
    alpha: f64,
    digest: InstanceDigest,
    tol: Tolerance,
) -> Result<InequalityReport> {
    same_dim(&[a.clone(), b.clone()])?;
    if alpha < 1.0 / 3.0 - 1e-15 {
        return Err(Error::ExponentRange { alpha, min: 1.0 / 3.0 });
    }
    let mats = [a.clone(), b.transpose(), a.clone()];
    let triple = a.matmul(b)?.matmul(a)?;

    let mut rep = InequalityReport::new("cor49", digest, tol);
    rep.quantity(
        "jordan_mean_norm",
        operator_norm(&hadamard_combine(&mats, alpha)?, NormKind::L2)?,
    );
    rep.quantity(
        "shift_mean_root",
        spectral_radius_value(&alternating_product_mean_odd_pow(&mats, alpha)?)?
            .powf(1.0 / 6.0),
    );
    rep.quantity(
        "jordan_bound",
        operator_norm(&triple, NormKind::L2)?.powf(alpha),
    );
    rep.chain(&["jordan_mean_norm", "shift_mean_root", "jordan_bound"]);
    Ok(rep)
}

/// The closing counterexample: with the plain (untransposed) middle factor
/// the triple-product bound fails outright. The report's single verdict is
/// expected to be a violation; reproducing it is the point.
pub fn run_counterexample(alpha: f64, tol: Tolerance) -> InequalityReport {
    let (a, b) = counterexample_pair();
    counterexample_report(&a, &b, alpha, tol)
}

/// The fixed 2x2 pair whose triple product collapses to zero.
pub fn counterexample_pair() -> (NonNegativeMatrix, NonNegativeMatrix) {
    let a = NonNegativeMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap();
    let b = NonNegativeMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
    (a, b)
}

/// Evaluates `||A^(a) o B^(a) o A^(a)||` against `||A B A||^a` for an
/// arbitrary pair; used both for the canonical counterexample and its
/// corrupted self-test variant.
pub fn counterexample_report(
    a: &NonNegativeMatrix,
    b: &NonNegativeMatrix,
    alpha: f64,
    tol: Tolerance,
) -> InequalityReport {
    let digest = InstanceDigest {
        seed: 0,
        n: a.n(),
        m: 2,
        density: 1.0,
        alpha: Some(alpha),
        ..InstanceDigest::default()
    };
    let mut rep = InequalityReport::new("counterexample", digest, tol);
    let triple_mean = a
        .hadamard_power(alpha)
        .and_then(|x| x.hadamard(&b.hadamard_power(alpha).unwrap()))
        .and_then(|x| x.hadamard(&a.hadamard_power(alpha).unwrap()))
        .expect("same dimensions");
    let triple_product = a.matmul(b).and_then(|x| x.matmul(a)).expect("same dimensions");
    rep.quantity(
        "hadamard_triple_norm",
        operator_norm(&triple_mean, NormKind::L2).expect("norm converges"),
    );
    rep.quantity(
        "jordan_bound",
        operator_norm(&triple_product, NormKind::L2).expect("norm converges").powf(alpha),
    );
    rep.chain(&["hadamard_triple_norm", "jordan_bound"]);
    rep
}

/// A found violation of the numerical-radius product bound under sum > 1
/// weights.
#[derive(Debug, Clone, PartialEq)]
pub struct NumradViolation {
    pub probe: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub weights: Vec<f64>,
    pub report: InequalityReport,
}

/// Randomized search for `w(B_1...B_m) > prod_j w(P_j)^(a_j)` with weights
/// summing past one. Best effort: returns the first violation within the
/// budget, or None. Never part of any pass/fail gate.
pub fn search_numrad_violation(
    cfg: &TrialConfig,
    weights: Option<&WeightVector>,
    budget: u64,
) -> Result<Option<NumradViolation>> {
    let tol = cfg.tolerance();
    let mut rng = trial_rng(cfg.seed);
    for probe in 0..budget {
        let w = match weights {
            Some(w) => w.clone(),
            None => sample_weights(&mut rng, cfg.m, WeightConstraint::SumAtLeastOne),
        };
        let mats: Vec<NonNegativeMatrix> =
            (0..cfg.m).map(|_| sample_matrix(&mut rng, cfg.n, cfg.density)).collect();
        let mean_product = rotated_mean_product(&mats, &w)?;
        let cyclics = all_cyclic_products(&mats)?;
        let lhs = numerical_radius(&mean_product)?;
        let wrads: Result<Vec<f64>> = cyclics.iter().map(numerical_radius).collect();
        let rhs = weighted_product(&wrads?, w.weights());
        if !tol.leq(lhs, rhs) {
            let mut digest = cfg.base_digest();
            digest.weight_constraint = Some(w.constraint());
            digest.weights = w.weights().to_vec();
            let mut rep = InequalityReport::new("numrad_search", digest, tol);
            rep.quantity("numrad_lhs", lhs);
            rep.quantity("numrad_rhs", rhs);
            rep.chain(&["numrad_lhs", "numrad_rhs"]);
            return Ok(Some(NumradViolation {
                probe,
                lhs,
                rhs,
                weights: w.weights().to_vec(),
                report: rep,
            }));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// Operator count a suite needs when driven by a fixed list (kernels or
/// explicit matrix files).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(&self, got: usize) -> bool {
        match *self {
            Arity::Exactly(k) => got == k,
            Arity::AtLeast(k) => got >= k,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Arity::Exactly(k) => k.to_string(),
            Arity::AtLeast(k) => format!(">= {k}"),
        }
    }
}

/// Registry entry: suite tag, required weight constraint (if any), arity
/// for list-driven runs, plus the random sampler and the fixed-operator
/// runner.
pub struct SuiteSpec {
    pub name: &'static str,
    pub weight_mode: Option<WeightConstraint>,
    pub arity: Arity,
    sample_run: fn(&TrialConfig) -> Result<InequalityReport>,
    list_run: fn(&[NonNegativeMatrix], Tolerance, InstanceDigest) -> Result<InequalityReport>,
}

impl SuiteSpec {
    /// Runs one random trial drawn deterministically from the config seed.
    pub fn run_trial(&self, cfg: &TrialConfig) -> Result<InequalityReport> {
        (self.sample_run)(cfg)
    }

    /// Runs the checker on a fixed operator list with canonical parameters
    /// (equal weights; the smallest admissible exponent).
    pub fn run_on_list(
        &self,
        mats: &[NonNegativeMatrix],
        tol: Tolerance,
        digest: InstanceDigest,
    ) -> Result<InequalityReport> {
        if !self.arity.accepts(mats.len()) {
            return Err(Error::Arity {
                suite: self.name.to_string(),
                expected: self.arity.describe(),
                got: mats.len(),
            });
        }
        (self.list_run)(mats, tol, digest)
    }
}

pub const SUITE_NAMES: [&str; 15] = [
    "thm21", "thm23", "thm24", "thm31", "thm32", "cor33", "cor35", "thm36", "thm41", "thm42",
    "cor43", "thm44", "thm4547", "cor48", "cor49",
];

pub fn registry() -> &'static [SuiteSpec] {
    &REGISTRY
}

pub fn find_suite(name: &str) -> Result<&'static SuiteSpec> {
    REGISTRY
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownSuite { name: name.to_string() })
}

static REGISTRY: [SuiteSpec; 15] = [
    SuiteSpec {
        name: "thm21",
        weight_mode: Some(WeightConstraint::SumOne),
        arity: Arity::AtLeast(1),
        sample_run: sample_thm21,
        list_run: |mats, tol, digest| {
            check_thm21(&[mats.to_vec()], &WeightVector::equal(mats.len()), digest, tol)
        },
    },
    SuiteSpec {
        name: "thm23",
        weight_mode: Some(WeightConstraint::SumOne),
        arity: Arity::AtLeast(1),
        sample_run: sample_thm23,
        list_run: |mats, tol, digest| {
            check_thm23(&[mats.to_vec()], &WeightVector::equal(mats.len()), digest, tol)
        },
    },
    SuiteSpec {
        name: "thm24",
        weight_mode: Some(WeightConstraint::SumAtLeastOne),
        arity: Arity::AtLeast(1),
        sample_run: sample_thm24,
        list_run: |mats, tol, digest| {
            let ones =
                WeightVector::new(vec![1.0; mats.len()], WeightConstraint::SumAtLeastOne)
                    .expect("all-ones weights");
            check_thm24(&[mats.to_vec()], &ones, digest, tol)
        },
    },
    SuiteSpec {
        name: "thm31",
        weight_mode: Some(WeightConstraint::SumOne),
        arity: Arity::AtLeast(1),
        sample_run: sample_thm31,
        list_run: |mats, tol, digest| {
            check_thm31(mats, &WeightVector::equal(mats.len()), digest, tol)
        },
    },
    SuiteSpec {
        name: "thm32",
        weight_mode: Some(WeightConstraint::SumOne),
        arity: Arity::AtLeast(1),
        sample_run: sample_thm32,
        list_run: |mats, tol, digest| {
            check_thm32(mats, &WeightVector::equal(mats.len()), digest, tol)
        },
    },
    SuiteSpec {
        name: "cor33",
        weight_mode: None,
        arity: Arity::AtLeast(1),
        sample_run: sample_cor33,
        list_run: |mats, tol, digest| check_cor33(mats, digest, tol),
    },
    SuiteSpec {
        name: "cor35",
        weight_mode: None,
        arity: Arity::Exactly(2),
        sample_run: sample_cor35,
        list_run: |mats, tol, digest| check_cor35(&mats[0], &mats[1], 0.5, digest, tol),
    },
    SuiteSpec {
        name: "thm36",
        weight_mode: Some(WeightConstraint::SumAtLeastOne),
        arity: Arity::AtLeast(1),
        sample_run: sample_thm36,
        list_run: |mats, tol, digest| {
            let ones =
                WeightVector::new(vec![1.0; mats.len()], WeightConstraint::SumAtLeastOne)
                    .expect("all-ones weights");
            check_thm36(mats, &ones, digest, tol)
        },
    },
    SuiteSpec {
        name: "thm41",
        weight_mode: Some(WeightConstraint::SumOne),
        arity: Arity::AtLeast(1),
        sample_run: sample_thm41,
        list_run: |mats, tol, digest| {
            check_thm41(mats, &WeightVector::equal(mats.len()), digest, tol)
        },
    },
    SuiteSpec {
        name: "thm42",
        weight_mode: Some(WeightConstraint::SumAtLeastOne),
        arity: Arity::AtLeast(1),
        sample_run: sample_thm42,
        list_run: |mats, tol, digest| {
            let ones =
                WeightVector::new(vec![1.0; mats.len()], WeightConstraint::SumAtLeastOne)
                    .expect("all-ones weights");
            check_thm42(mats, &ones, digest, tol)
        },
    },
    SuiteSpec {
        name: "cor43",
        weight_mode: None,
        arity: Arity::Exactly(2),
        sample_run: sample_cor43,
        list_run: |mats, tol, digest| check_cor43(&mats[0], &mats[1], 0.5, 0.5, digest, tol),
    },
    SuiteSpec {
        name: "thm44",
        weight_mode: None,
        arity: Arity::Exactly(2),
        sample_run: sample_thm44,
        list_run: |mats, tol, digest| check_thm44(&mats[0], &mats[1], 0.5, digest, tol),
    },
    SuiteSpec {
        name: "thm4547",
        weight_mode: None,
        arity: Arity::AtLeast(1),
        sample_run: sample_thm4547,
        list_run: |mats, tol, digest| {
            check_thm45_47(mats, 1.0 / mats.len() as f64, digest, tol)
        },
    },
    SuiteSpec {
        name: "cor48",
        weight_mode: None,
        arity: Arity::Exactly(3),
        sample_run: sample_cor48,
        list_run: |mats, tol, digest| {
            check_cor48(&mats[0], &mats[1], &mats[2], 1.0 / 3.0, digest, tol)
        },
    },
    SuiteSpec {
        name: "cor49",
        weight_mode: None,
        arity: Arity::Exactly(2),
        sample_run: sample_cor49,
        list_run: |mats, tol, digest| {
            check_cor49_jordan(&mats[0], &mats[1], 1.0 / 3.0, digest, tol)
        },
    },
];

// Samplers: draw order is fixed (weights / exponents, then grid shape, then
// matrices) so a digest fully reproduces the instance.

fn sample_mats(rng: &mut ChaCha8Rng, count: usize, cfg: &TrialConfig) -> Vec<NonNegativeMatrix> {
    (0..count).map(|_| sample_matrix(rng, cfg.n, cfg.density)).collect()
}

fn sample_grid_with(
    cfg: &TrialConfig,
    mode: WeightConstraint,
) -> (Vec<Vec<NonNegativeMatrix>>, WeightVector, InstanceDigest) {
    let mut rng = trial_rng(cfg.seed);
    let w = sample_weights(&mut rng, cfg.m, mode);
    let k = rng.gen_range(1..=3usize);
    let grid: Vec<Vec<NonNegativeMatrix>> =
        (0..k).map(|_| sample_mats(&mut rng, cfg.m, cfg)).collect();
    let mut digest = cfg.base_digest();
    digest.k = Some(k);
    digest.weight_constraint = Some(mode);
    digest.weights = w.weights().to_vec();
    (grid, w, digest)
}

fn sample_list_with(
    cfg: &TrialConfig,
    mode: WeightConstraint,
) -> (Vec<NonNegativeMatrix>, WeightVector, InstanceDigest) {
    let mut rng = trial_rng(cfg.seed);
    let w = sample_weights(&mut rng, cfg.m, mode);
    let mats = sample_mats(&mut rng, cfg.m, cfg);
    let mut digest = cfg.base_digest();
    digest.weight_constraint = Some(mode);
    digest.weights = w.weights().to_vec();
    (mats, w, digest)
}

fn sample_pair_alpha(
    cfg: &TrialConfig,
    lo: f64,
    hi: f64,
) -> (NonNegativeMatrix, NonNegativeMatrix, f64, InstanceDigest) {
    let mut rng = trial_rng(cfg.seed);
    let alpha = rng.gen_range(lo..hi);
    let a = sample_matrix(&mut rng, cfg.n, cfg.density);
    let b = sample_matrix(&mut rng, cfg.n, cfg.density);
    let mut digest = cfg.base_digest();
    digest.m = 2;
    digest.alpha = Some(alpha);
    (a, b, alpha, digest)
}

fn sample_thm21(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (grid, w, digest) = sample_grid_with(cfg, WeightConstraint::SumOne);
    check_thm21(&grid, &w, digest, cfg.tolerance())
}

fn sample_thm23(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (grid, w, digest) = sample_grid_with(cfg, WeightConstraint::SumOne);
    check_thm23(&grid, &w, digest, cfg.tolerance())
}

fn sample_thm24(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (grid, w, digest) = sample_grid_with(cfg, WeightConstraint::SumAtLeastOne);
    check_thm24(&grid, &w, digest, cfg.tolerance())
}

fn sample_thm31(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (mats, w, digest) = sample_list_with(cfg, WeightConstraint::SumOne);
    check_thm31(&mats, &w, digest, cfg.tolerance())
}

fn sample_thm32(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (mats, w, digest) = sample_list_with(cfg, WeightConstraint::SumOne);
    check_thm32(&mats, &w, digest, cfg.tolerance())
}

fn sample_cor33(cfg: &TrialConfig) -> Result<InequalityReport> {
    let mut rng = trial_rng(cfg.seed);
    let mats = sample_mats(&mut rng, cfg.m, cfg);
    check_cor33(&mats, cfg.base_digest(), cfg.tolerance())
}

fn sample_cor35(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (a, b, alpha, digest) = sample_pair_alpha(cfg, 0.0, 1.0);
    check_cor35(&a, &b, alpha, digest, cfg.tolerance())
}

fn sample_thm36(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (mats, w, digest) = sample_list_with(cfg, WeightConstraint::SumAtLeastOne);
    check_thm36(&mats, &w, digest, cfg.tolerance())
}

fn sample_thm41(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (mats, w, digest) = sample_list_with(cfg, WeightConstraint::SumOne);
    check_thm41(&mats, &w, digest, cfg.tolerance())
}

fn sample_thm42(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (mats, w, digest) = sample_list_with(cfg, WeightConstraint::SumAtLeastOne);
    check_thm42(&mats, &w, digest, cfg.tolerance())
}

fn sample_cor43(cfg: &TrialConfig) -> Result<InequalityReport> {
    let mut rng = trial_rng(cfg.seed);
    let alpha: f64 = rng.gen_range(0.0..1.0);
    let beta: f64 = rng.gen_range((1.0 - alpha).max(0.05)..1.5);
    let a = sample_matrix(&mut rng, cfg.n, cfg.density);
    let b = sample_matrix(&mut rng, cfg.n, cfg.density);
    let mut digest = cfg.base_digest();
    digest.m = 2;
    digest.alpha = Some(alpha);
    digest.beta = Some(beta);
    check_cor43(&a, &b, alpha, beta, digest, cfg.tolerance())
}

fn sample_thm44(cfg: &TrialConfig) -> Result<InequalityReport> {
    let (a, b, alpha, digest) = sample_pair_alpha(cfg, 0.5, 1.25);
    check_thm44(&a, &b, alpha, digest, cfg.tolerance())
}

fn sample_thm4547(cfg: &TrialConfig) -> Result<InequalityReport> {
    let mut rng = trial_rng(cfg.seed);
    let min = 1.0 / cfg.m as f64;
    let alpha = rng.gen_range(min..1.2);
    let mats = sample_mats(&mut rng, cfg.m, cfg);
    let mut digest = cfg.base_digest();
    digest.alpha = Some(alpha);
    check_thm45_47(&mats, alpha, digest, cfg.tolerance())
}

fn sample_cor48(cfg: &TrialConfig) -> Result<InequalityReport> {
    let mut rng = trial_rng(cfg.seed);
    let alpha = rng.gen_range(1.0 / 3.0..1.2);
    let mats = sample_mats(&mut rng, 3, cfg);
    let mut digest = cfg.base_digest();
    digest.m = 3;
    digest.alpha = Some(alpha);
    check_cor48(&mats[0], &mats[1], &mats[2], alpha, digest, cfg.tolerance())
}

fn sample_cor49(cfg: &TrialConfig) -> Result<InequalityReport> {
    let mut rng = trial_rng(cfg.seed);
    let alpha = rng.gen_range(1.0 / 3.0..1.2);
    let a = sample_matrix(&mut rng, cfg.n, cfg.density);
    let b = sample_matrix(&mut rng, cfg.n, cfg.density);
    let mut digest = cfg.base_digest();
    digest.m = 2;
    digest.alpha = Some(alpha);
    check_cor49_jordan(&a, &b, alpha, digest, cfg.tolerance())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::DEFAULT
    }

    fn identity_list(m: usize, n: usize) -> Vec<NonNegativeMatrix> {
        vec![NonNegativeMatrix::identity(n); m]
    }

    fn zero_list(m: usize, n: usize) -> Vec<NonNegativeMatrix> {
        vec![NonNegativeMatrix::zero(n); m]
    }

    #[test]
    fn thm21_identity_grid_all_ones() {
        let grid = vec![identity_list(3, 4), identity_list(3, 4)];
        let w = WeightVector::equal(3);
        let rep = check_thm21(&grid, &w, InstanceDigest::default(), tol()).unwrap();
        assert!(rep.all_pass());
        for (label, v) in &rep.quantities {
            if label.starts_with("basic2") {
                continue;
            }
            assert!((v - 1.0).abs() <= 1e-11, "{label} = {v}");
        }
    }

    #[test]
    fn thm21_rejects_wrong_constraint() {
        let grid = vec![identity_list(2, 2)];
        let w = WeightVector::new(vec![1.0, 1.0], WeightConstraint::SumAtLeastOne).unwrap();
        assert!(matches!(
            check_thm21(&grid, &w, InstanceDigest::default(), tol()),
            Err(Error::WeightConstraintMismatch { .. })
        ));
    }

    #[test]
    fn zero_matrices_pass_every_suite() {
        let t = tol();
        let d = InstanceDigest::default();
        let w2 = WeightVector::equal(2);
        let ge1 = WeightVector::new(vec![0.8, 0.7], WeightConstraint::SumAtLeastOne).unwrap();
        let z = zero_list(2, 3);
        let grid = vec![z.clone()];

        let reports = vec![
            check_thm21(&grid, &w2, d.clone(), t).unwrap(),
            check_thm23(&grid, &w2, d.clone(), t).unwrap(),
            check_thm24(&grid, &ge1, d.clone(), t).unwrap(),
            check_thm31(&z, &w2, d.clone(), t).unwrap(),
            check_thm32(&z, &w2, d.clone(), t).unwrap(),
            check_cor33(&z, d.clone(), t).unwrap(),
            check_cor35(&z[0], &z[1], 0.4, d.clone(), t).unwrap(),
            check_thm36(&z, &ge1, d.clone(), t).unwrap(),
            check_thm41(&z, &w2, d.clone(), t).unwrap(),
            check_thm42(&z, &ge1, d.clone(), t).unwrap(),
            check_cor43(&z[0], &z[1], 0.5, 0.7, d.clone(), t).unwrap(),
            check_thm44(&z[0], &z[1], 0.6, d.clone(), t).unwrap(),
            check_thm45_47(&z, 0.6, d.clone(), t).unwrap(),
            check_cor48(&z[0], &z[1], &z[0], 0.5, d.clone(), t).unwrap(),
            check_cor49_jordan(&z[0], &z[1], 0.5, d.clone(), t).unwrap(),
        ];
        for rep in reports {
            assert!(rep.all_pass(), "zero-matrix failure in {}", rep.suite);
            for (label, v) in &rep.quantities {
                assert_eq!(*v, 0.0, "{}::{label} = {v}", rep.suite);
            }
        }
    }

    #[test]
    fn counterexample_is_violated_by_design() {
        for alpha in [1.0 / 3.0, 1.0] {
            let rep = run_counterexample(alpha, tol());
            assert!(!rep.all_pass());
            assert!((rep.value("hadamard_triple_norm") - 1.0).abs() <= 1e-12);
            assert_eq!(rep.value("jordan_bound"), 0.0);
        }
    }

    #[test]
    fn counterexample_pair_fixed_by_transpose() {
        // The same pair passes once the middle factor is transposed.
        let (a, b) = counterexample_pair();
        let rep =
            check_cor49_jordan(&a, &b, 1.0 / 3.0, InstanceDigest::default(), tol()).unwrap();
        assert!(rep.all_pass());
    }

    #[test]
    fn cor49_sharp_at_identity() {
        for alpha in [1.0 / 3.0, 0.5, 1.0] {
            let id = NonNegativeMatrix::identity(3);
            let rep =
                check_cor49_jordan(&id, &id, alpha, InstanceDigest::default(), tol()).unwrap();
            assert!(rep.all_pass());
            for (label, v) in &rep.quantities {
                assert!((v - 1.0).abs() <= 1e-12, "{label} = {v}");
            }
        }
    }

    #[test]
    fn exponent_preconditions_are_config_errors() {
        let a = NonNegativeMatrix::identity(2);
        let d = InstanceDigest::default;
        assert!(matches!(
            check_thm44(&a, &a, 0.4, d(), tol()),
            Err(Error::ExponentRange { .. })
        ));
        assert!(matches!(
            check_cor48(&a, &a, &a, 0.2, d(), tol()),
            Err(Error::ExponentRange { .. })
        ));
        assert!(matches!(
            check_cor49_jordan(&a, &a, 0.1, d(), tol()),
            Err(Error::ExponentRange { .. })
        ));
        assert!(matches!(
            check_thm45_47(&vec![a.clone(); 4], 0.2, d(), tol()),
            Err(Error::ExponentRange { .. })
        ));
        assert!(matches!(
            check_cor35(&a, &a, 1.4, d(), tol()),
            Err(Error::ExponentRange { .. })
        ));
        assert!(matches!(
            check_cor43(&a, &a, 0.3, 0.3, d(), tol()),
            Err(Error::ExponentRange { .. })
        ));
    }

    #[test]
    fn cor35_alpha_zero_uses_all_ones_convention() {
        let mut rng = trial_rng(99);
        let a = sample_matrix(&mut rng, 3, 1.0);
        let b = sample_matrix(&mut rng, 3, 1.0);
        let rep = check_cor35(&a, &b, 0.0, InstanceDigest::default(), tol()).unwrap();
        assert!(rep.all_pass());
    }

    #[test]
    fn cor35_equal_operators_collapse_to_equalities() {
        let mut rng = trial_rng(5);
        let a = sample_matrix(&mut rng, 4, 1.0);
        let rep = check_cor35(&a, &a, 0.5, InstanceDigest::default(), tol()).unwrap();
        assert!(rep.all_pass());
        let lhs = rep.value("rho_half_lhs");
        let rhs = rep.value("rho_half_rhs");
        assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(1.0));
    }

    #[test]
    fn every_suite_passes_a_seeded_random_trial() {
        for (i, spec) in registry().iter().enumerate() {
            let cfg = TrialConfig {
                seed: 1000 + i as u64,
                n: 4,
                m: 3,
                density: 0.7,
                weight_mode: spec.weight_mode.unwrap_or(WeightConstraint::SumOne),
                rel_tol: 1e-7,
                abs_tol: 1e-12,
            };
            let rep = spec.run_trial(&cfg).unwrap();
            assert!(
                rep.all_pass(),
                "suite {} failed: {:?}",
                spec.name,
                rep.verdicts.iter().find(|v| !v.pass)
            );
        }
    }

    #[test]
    fn search_respects_budget_and_sum_one_finds_nothing() {
        let cfg = TrialConfig {
            seed: 3,
            n: 2,
            m: 2,
            density: 1.0,
            weight_mode: WeightConstraint::SumAtLeastOne,
            rel_tol: 1e-7,
            abs_tol: 1e-12,
        };
        assert_eq!(search_numrad_violation(&cfg, None, 0).unwrap(), None);

        // Weights summing to one are covered by the proven chain: nothing
        // to find.
        let w = WeightVector::equal(2);
        assert_eq!(search_numrad_violation(&cfg, Some(&w), 50).unwrap(), None);
    }

    #[test]
    fn registry_is_complete_and_ordered() {
        let names: Vec<&str> = registry().iter().map(|s| s.name).collect();
        assert_eq!(names, SUITE_NAMES);
        assert!(find_suite("thm31").is_ok());
        assert!(matches!(
            find_suite("nosuch"),
            Err(Error::UnknownSuite { .. })
        ));
    }
}
