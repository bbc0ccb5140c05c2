//! Named-check registry: manifest entries dispatch to the checkers with
//! seeded instances, so suite runs are reproducible record-for-record.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::checks::{
    blaschke_to_rational, check_degree_invariant, check_dynkin, check_hardy, check_i_chain,
    check_kernel4, check_operator_norm_bounds, check_peller_equality, check_peller_general,
    check_theorem3, check_uss, BmoaBound, StepFunction,
};
use super::sweeps::{
    check_afp_scaling, check_critical_alpha, check_dolzhenko, check_peller_small_p, SweepFamily,
};
use super::CheckReport;
use crate::blaschke::BlaschkeProduct;
use crate::norms::QuadOpts;
use crate::rational::ModelSpaceTag;
use crate::{Error, Result};

/// Parameters a manifest entry may set; unspecified fields take defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckParams {
    pub p: f64,
    pub alpha: f64,
    /// Maximum instance degree.
    pub n: usize,
    pub trials: usize,
    /// Zero-support radius for random products.
    pub radius: f64,
    /// Offset from the critical weight exponent.
    pub eps: f64,
    /// Pole-reflection radius for the sharpness family.
    pub r: f64,
    /// Degrees of a sweep; empty means the per-check default.
    pub ns: Vec<usize>,
    /// Pieces of random step functions.
    pub pieces: usize,
    /// Quadrature tolerance; 0 means the per-check default.
    pub tol: f64,
    /// Sweep family: "monomial" or "random".
    pub family: String,
    /// Random model-space samples per instance (opnorm), or draws per
    /// degree (random sweeps).
    pub samples: usize,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            p: 2.0,
            alpha: 0.0,
            n: 16,
            trials: 20,
            radius: 0.95,
            eps: 0.5,
            r: 0.9,
            ns: Vec::new(),
            pieces: 8,
            tol: 0.0,
            family: "monomial".into(),
            samples: 3,
        }
    }
}

impl CheckParams {
    fn opts(&self, default_tol: f64) -> QuadOpts {
        let tol = if self.tol > 0.0 { self.tol } else { default_tol };
        QuadOpts::tol(tol)
    }

    fn ns_or(&self, lo: usize, hi: usize) -> Vec<usize> {
        if self.ns.is_empty() {
            powers_of_two(lo, hi)
        } else {
            self.ns.clone()
        }
    }

    fn sweep_family(&self) -> Result<SweepFamily> {
        match self.family.as_str() {
            "monomial" => Ok(SweepFamily::Monomial),
            "random" => Ok(SweepFamily::RandomZeros {
                radius: self.radius.min(0.9999),
                draws: self.samples.max(1),
            }),
            other => Err(Error::Param(format!("unknown sweep family '{other}'"))),
        }
    }
}

/// Powers of two from `lo` to `hi` inclusive.
pub fn powers_of_two(lo: usize, hi: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = lo.max(1);
    while n <= hi {
        out.push(n);
        n *= 2;
    }
    out
}

/// One suite item: a named check with its seed and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub check: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: CheckParams,
}

impl ManifestEntry {
    pub fn new(check: &str, seed: u64, params: CheckParams) -> Self {
        ManifestEntry {
            check: check.into(),
            seed,
            params,
        }
    }
}

fn random_instance(
    rng: &mut ChaCha8Rng,
    max_degree: usize,
    radius: f64,
) -> Result<BlaschkeProduct> {
    let n = rng.gen_range(1..=max_degree.max(1));
    let instance_seed = rng.gen::<u64>();
    BlaschkeProduct::random(n, radius, instance_seed)
}

/// Runs one named check, producing one report per trial (sweeps produce a
/// single report).
pub fn run_check(entry: &ManifestEntry) -> Result<Vec<CheckReport>> {
    let p = &entry.params;
    let mut rng = ChaCha8Rng::seed_from_u64(entry.seed);
    let mut out = Vec::new();
    match entry.check.as_str() {
        "dynkin" => {
            for t in 0..p.trials {
                let b = random_instance(&mut rng, p.n, p.radius)?;
                let inst = format!("n={}; radius<={}; seed={}; trial={t}", b.degree(), p.radius, entry.seed);
                out.push(check_dynkin(&b, inst, p.opts(1e-9))?);
            }
        }
        "theorem3" => {
            for t in 0..p.trials {
                let b = random_instance(&mut rng, p.n, p.radius)?;
                let inst = format!(
                    "n={}; p={}; alpha={}; seed={}; trial={t}",
                    b.degree(),
                    p.p,
                    p.alpha,
                    entry.seed
                );
                out.push(check_theorem3(&b, p.p, p.alpha, inst, p.opts(1e-7))?);
            }
        }
        "peller" => {
            for t in 0..p.trials {
                let sigma = random_instance(&mut rng, p.n, p.radius.min(0.8))?;
                let inst = format!(
                    "f=B; n={}; p={}; alpha={}; seed={}; trial={t}",
                    sigma.degree(),
                    p.p,
                    p.alpha,
                    entry.seed
                );
                out.push(check_peller_equality(
                    &sigma,
                    p.p,
                    p.alpha,
                    1e-10,
                    inst,
                    p.opts(1e-12),
                )?);
                let f = blaschke_to_rational(&sigma);
                let inst = format!(
                    "f=B (inequality); n={}; p={}; alpha={}; trial={t}",
                    sigma.degree(),
                    p.p,
                    p.alpha
                );
                out.push(check_peller_general(
                    &sigma,
                    &f,
                    p.p,
                    p.alpha,
                    BmoaBound::ExactOne,
                    inst,
                    p.opts(1e-9),
                )?);
                let tag = ModelSpaceTag::new(sigma.clone(), 1);
                let shifted = tag.backward_shift()?;
                let inst = format!(
                    "f=S*(zB); n={}; p={}; alpha={}; trial={t}",
                    sigma.degree(),
                    p.p,
                    p.alpha
                );
                out.push(check_peller_general(
                    &sigma,
                    &shifted,
                    p.p,
                    p.alpha,
                    BmoaBound::ShiftBound,
                    inst,
                    p.opts(1e-9),
                )?);
            }
        }
        "hardy" => {
            // Domain guard up front so bad exponents fail fast.
            let probe = StepFunction::constant(1.0)?;
            check_hardy(&probe, p.p, p.alpha, "probe".into())?;
            for t in 0..p.trials {
                let h = StepFunction::random(p.pieces, entry.seed.wrapping_add(t as u64))?;
                let inst = format!(
                    "pieces={}; p={}; alpha={}; seed={}; trial={t}",
                    p.pieces, p.p, p.alpha, entry.seed
                );
                out.push(check_hardy(&h, p.p, p.alpha, inst)?);
            }
        }
        "opnorm" => {
            for t in 0..p.trials {
                let b = random_instance(&mut rng, p.n, p.radius.min(0.85))?;
                let inst = format!(
                    "n={}; p={}; alpha={}; seed={}; trial={t}",
                    b.degree(),
                    p.p,
                    p.alpha,
                    entry.seed
                );
                out.push(check_operator_norm_bounds(
                    &b,
                    p.p,
                    p.alpha,
                    p.samples,
                    entry.seed.wrapping_add(1000 + t as u64),
                    inst,
                    p.opts(1e-9),
                )?);
            }
        }
        "kernel4" => {
            for t in 0..p.trials {
                let b = random_instance(&mut rng, p.n, p.radius.min(0.85))?;
                let tag = ModelSpaceTag::new(b, 1);
                let u = Complex64::from_polar(
                    0.85 * rng.gen::<f64>(),
                    std::f64::consts::TAU * rng.gen::<f64>(),
                );
                let inst = format!(
                    "deg Theta={}; |u|={:.3}; seed={}; trial={t}",
                    tag.degree(),
                    u.norm(),
                    entry.seed
                );
                out.push(check_kernel4(&tag, u, 1e-8, inst)?);
            }
        }
        "uss" => {
            for t in 0..p.trials {
                let b = random_instance(&mut rng, p.n, p.radius)?;
                let u = Complex64::from_polar(
                    0.999 * rng.gen::<f64>().sqrt(),
                    std::f64::consts::TAU * rng.gen::<f64>(),
                );
                let inst = format!("n={}; |u|={:.4}; seed={}; trial={t}", b.degree(), u.norm(), entry.seed);
                out.push(check_uss(&b, u, inst)?);
            }
        }
        "degree" => {
            for t in 0..p.trials {
                let b = random_instance(&mut rng, p.n, p.radius)?;
                let inst = format!("n={}; seed={}; trial={t}", b.degree(), entry.seed);
                out.push(check_degree_invariant(&b, 1e-8, inst, p.opts(1e-9))?);
            }
        }
        "i_chain" => {
            for t in 0..p.trials {
                let b = random_instance(&mut rng, p.n, p.radius.min(0.85))?;
                let inst = format!(
                    "n={}; p={}; alpha={}; seed={}; trial={t}",
                    b.degree(),
                    p.p,
                    p.alpha,
                    entry.seed
                );
                out.push(check_i_chain(&b, p.p, p.alpha, inst, p.opts(1e-7))?);
            }
        }
        "afp" => {
            let ns = p.ns_or(2, 256);
            let (_, report) =
                check_afp_scaling(p.p, &ns, p.sweep_family()?, entry.seed, p.opts(1e-7))?;
            out.push(report);
        }
        "peller_small_p" => {
            let ns = p.ns_or(4, 128);
            let (_, report) =
                check_peller_small_p(p.p, &ns, p.sweep_family()?, entry.seed, p.opts(1e-6))?;
            out.push(report);
        }
        "critical" => {
            let ns = p.ns_or(8, 512);
            let (_, report) = check_critical_alpha(p.p, p.eps, &ns, p.opts(1e-10))?;
            out.push(report);
        }
        "dolzhenko" => {
            let ns = p.ns_or(8, 128);
            let (_, report) = check_dolzhenko(p.p, &ns, p.r, p.opts(1e-8))?;
            out.push(report);
        }
        other => return Err(Error::UnknownCheck(other.into())),
    }
    Ok(out)
}

/// Runs every entry in order, concatenating the reports.
pub fn run_manifest(entries: &[ManifestEntry]) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for entry in entries {
        out.extend(run_check(entry)?);
    }
    Ok(out)
}

/// The default suite: every check at desk scale with pinned seeds.
pub fn default_suite() -> Vec<ManifestEntry> {
    let d = CheckParams::default;
    vec![
        ManifestEntry::new(
            "uss",
            101,
            CheckParams {
                n: 64,
                trials: 200,
                ..d()
            },
        ),
        ManifestEntry::new(
            "dynkin",
            7,
            CheckParams {
                n: 32,
                trials: 60,
                ..d()
            },
        ),
        ManifestEntry::new(
            "degree",
            11,
            CheckParams {
                n: 32,
                trials: 25,
                ..d()
            },
        ),
        ManifestEntry::new(
            "theorem3",
            21,
            CheckParams {
                p: 2.0,
                alpha: 0.0,
                n: 16,
                trials: 12,
                ..d()
            },
        ),
        ManifestEntry::new(
            "theorem3",
            22,
            CheckParams {
                p: 3.0,
                alpha: 0.5,
                n: 12,
                trials: 8,
                ..d()
            },
        ),
        ManifestEntry::new(
            "theorem3",
            23,
            CheckParams {
                p: 1.5,
                alpha: -0.25,
                n: 12,
                trials: 8,
                ..d()
            },
        ),
        ManifestEntry::new(
            "peller",
            31,
            CheckParams {
                n: 8,
                radius: 0.6,
                trials: 8,
                ..d()
            },
        ),
        ManifestEntry::new(
            "kernel4",
            41,
            CheckParams {
                n: 8,
                trials: 20,
                ..d()
            },
        ),
        ManifestEntry::new(
            "hardy",
            51,
            CheckParams {
                trials: 25,
                ..d()
            },
        ),
        ManifestEntry::new(
            "hardy",
            52,
            CheckParams {
                p: 3.0,
                alpha: 1.0,
                trials: 15,
                ..d()
            },
        ),
        ManifestEntry::new(
            "hardy",
            53,
            CheckParams {
                p: 1.5,
                alpha: -0.25,
                trials: 15,
                ..d()
            },
        ),
        ManifestEntry::new(
            "opnorm",
            61,
            CheckParams {
                n: 12,
                trials: 8,
                samples: 2,
                ..d()
            },
        ),
        ManifestEntry::new(
            "i_chain",
            71,
            CheckParams {
                p: 2.5,
                alpha: 0.25,
                n: 10,
                trials: 6,
                ..d()
            },
        ),
        ManifestEntry::new(
            "afp",
            81,
            CheckParams {
                p: 2.0,
                family: "monomial".into(),
                ns: powers_of_two(2, 256),
                ..d()
            },
        ),
        ManifestEntry::new(
            "afp",
            82,
            CheckParams {
                p: 1.0,
                family: "monomial".into(),
                ns: powers_of_two(2, 256),
                ..d()
            },
        ),
        ManifestEntry::new(
            "afp",
            83,
            CheckParams {
                p: 1.5,
                family: "random".into(),
                radius: 0.9,
                samples: 3,
                ns: powers_of_two(4, 64),
                ..d()
            },
        ),
        ManifestEntry::new(
            "peller_small_p",
            91,
            CheckParams {
                p: 0.75,
                family: "monomial".into(),
                ns: powers_of_two(4, 128),
                ..d()
            },
        ),
        ManifestEntry::new(
            "critical",
            95,
            CheckParams {
                p: 2.0,
                eps: 0.5,
                ns: powers_of_two(8, 512),
                ..d()
            },
        ),
        ManifestEntry::new(
            "dolzhenko",
            97,
            CheckParams {
                p: 4.0,
                r: 0.9,
                ns: powers_of_two(8, 128),
                ..d()
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_json_round_trip() {
        let suite = default_suite();
        let text = serde_json::to_string_pretty(&suite).unwrap();
        let back: Vec<ManifestEntry> = serde_json::from_str(&text).unwrap();
        assert_eq!(suite, back);
        // Partial params deserialize with defaults.
        let entry: ManifestEntry =
            serde_json::from_str(r#"{"check":"dynkin","seed":7,"params":{"n":4,"trials":2}}"#)
                .unwrap();
        assert_eq!(entry.params.n, 4);
        assert_eq!(entry.params.p, 2.0);
    }

    #[test]
    fn unknown_check_is_an_error() {
        let entry = ManifestEntry::new("nope", 0, CheckParams::default());
        assert!(matches!(run_check(&entry), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn small_runs_of_every_check_pass() {
        let quick = |check: &str, seed: u64, params: CheckParams| {
            let reports = run_check(&ManifestEntry::new(check, seed, params)).unwrap();
            assert!(!reports.is_empty(), "{check}: no reports");
            for r in &reports {
                assert!(r.pass, "{check}: {r:?}");
            }
            reports
        };
        let d = CheckParams::default;
        quick("uss", 1, CheckParams { n: 16, trials: 10, ..d() });
        quick("dynkin", 2, CheckParams { n: 8, trials: 4, ..d() });
        quick("degree", 3, CheckParams { n: 8, trials: 3, ..d() });
        quick("theorem3", 4, CheckParams { n: 6, trials: 2, ..d() });
        quick(
            "peller",
            5,
            CheckParams { n: 5, radius: 0.6, trials: 2, ..d() },
        );
        quick("hardy", 6, CheckParams { trials: 5, ..d() });
        quick(
            "opnorm",
            7,
            CheckParams { n: 6, trials: 2, samples: 1, ..d() },
        );
        quick("kernel4", 8, CheckParams { n: 5, trials: 3, ..d() });
        quick(
            "i_chain",
            9,
            CheckParams { p: 2.5, alpha: 0.25, n: 6, trials: 2, ..d() },
        );
        quick(
            "afp",
            10,
            CheckParams { p: 2.0, ns: powers_of_two(2, 32), ..d() },
        );
        quick(
            "peller_small_p",
            11,
            CheckParams { p: 1.0, ns: powers_of_two(4, 32), ..d() },
        );
        quick(
            "critical",
            12,
            CheckParams { p: 2.0, eps: 0.5, ns: powers_of_two(8, 128), ..d() },
        );
        quick(
            "dolzhenko",
            13,
            CheckParams { p: 2.0, r: 0.5, ns: vec![2, 4, 8, 16], ..d() },
        );
    }

    #[test]
    fn reports_are_reproducible() {
        let entry = ManifestEntry::new(
            "dynkin",
            99,
            CheckParams {
                n: 10,
                trials: 3,
                ..CheckParams::default()
            },
        );
        let a = run_check(&entry).unwrap();
        let b = run_check(&entry).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
