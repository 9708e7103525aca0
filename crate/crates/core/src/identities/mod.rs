//! The identity registry: closed forms, numerical left-hand sides, cases,
//! verdicts, suites and reports.

mod lhs;
mod report;
mod rhs;
mod suite;
mod verify;

pub use report::{from_csv, from_json, params_json, to_csv, to_json, to_table, ReportFormat, FIELDS};
pub use rhs::{
    rhs_bessel_k_product, rhs_cauchy_beta, rhs_cauchy_selberg, rhs_f11_parseval, rhs_f21_weighted,
    rhs_matrix_cauchy_beta, rhs_multivariate_gamma, rhs_weber_schafheitlin, rhs_wishart_normalization,
};
pub use suite::{parse_id_list, parse_param, Suite, SuiteDefaults, DEFAULT_SUITE};
pub use verify::{derive_seed, run_suite, verify_case, Summary, SuiteReport};

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::special::{c64, ComplexScalar};
use std::fmt;
use std::str::FromStr;

/// One displayed identity. `*-1` ids have a closed form; `*-0` ids vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Cb1,
    Cb0,
    F11One,
    F11Zero,
    F21One,
    Bk1,
    Ws1,
    Gd1,
    Wi1,
    Mc1,
    Mc0,
    Cs1,
    Cs0,
}

/// Catalog entry printed by `list`.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub id: IdentityId,
    pub title: &'static str,
    pub display: &'static str,
    pub hypothesis: &'static str,
}

const CATALOG: [CatalogEntry; 13] = [
    CatalogEntry {
        id: IdentityId::Cb1,
        title: "Cauchy's beta integral",
        display: "∫ (1+iσ₁t)^(−α₁) (1−iσ₂t)^(−α₂) dt = 2π Γ(α₁+α₂−1)/(Γ(α₁)Γ(α₂)) · σ₁^(α₂−1) σ₂^(α₁−1)/(σ₁+σ₂)^(α₁+α₂−1)",
        hypothesis: "Re(α₁+α₂) > 1, Re σ₁ > 0, Re σ₂ > 0",
    },
    CatalogEntry {
        id: IdentityId::Cb0,
        title: "Cauchy's beta integral, same-sign factors",
        display: "∫ (1+iσ₁t)^(−α₁) (1+iσ₂t)^(−α₂) dt = 0",
        hypothesis: "Re(α₁+α₂) > 1, Re σ₁ > 0, Re σ₂ > 0",
    },
    CatalogEntry {
        id: IdentityId::F11One,
        title: "Beta-density pairing of confluent hypergeometric functions",
        display: "(1/2π) ∫ ₁F₁(α₁;α₁+σ₁;−it) ₁F₁(α₂;α₂+σ₂;it) dt = Γ(α₁+α₂−1)Γ(σ₁+σ₂−1)Γ(α₁+σ₁)Γ(α₂+σ₂) / (Γ(α₁+α₂+σ₁+σ₂−2)Γ(α₁)Γ(σ₁)Γ(α₂)Γ(σ₂))",
        hypothesis: "Re(α₁+α₂) > 1, Re(σ₁+σ₂) > 1, Re(α_j+σ_j) > 0",
    },
    CatalogEntry {
        id: IdentityId::F11Zero,
        title: "Confluent hypergeometric pairing, same-sign arguments",
        display: "∫ ₁F₁(α₁;α₁+σ₁;it) ₁F₁(α₂;α₂+σ₂;it) dt = 0",
        hypothesis: "Re(α₁+α₂) > 1, Re(σ₁+σ₂) > 1, Re(α_j+σ_j) > 0",
    },
    CatalogEntry {
        id: IdentityId::F21One,
        title: "Cauchy beta integral with a Gauss hypergeometric weight",
        display: "(1/2π) ∫ (1+iσ₁t)^(−α₁) (1−iσ₂t)^(−α₂) ₂F₁(γ₁,α₂;γ₂;σ₂/(θ(1−iσ₂t))) dt = Γ(α₁+α₂−1)/(Γ(α₁)Γ(α₂)) · σ₁^(α₂−1)σ₂^(α₁−1)/(σ₁+σ₂)^(α₁+α₂−1) · ₂F₁(γ₁,α₁+α₂−1;γ₂;(σ₁⁻¹+σ₂⁻¹)⁻¹/θ)",
        hypothesis: "Re(α₁+α₂) > 1, Re σ₁ > 0, Re θ > Re σ₂ > 0, −γ₂ not a non-negative integer",
    },
    CatalogEntry {
        id: IdentityId::Bk1,
        title: "Product of two modified Bessel functions K",
        display: "∫₀^∞ t^(ν₁+ν₂) K_ν₁(t) K_ν₂(t) dt = 2^(ν₁+ν₂−2) √π Γ(ν₁+ν₂+1/2) Γ(ν₁+1/2) Γ(ν₂+1/2)/Γ(ν₁+ν₂+1)",
        hypothesis: "Re ν_j > −1/2, Re(ν₁+ν₂) > −1; the numerical side needs real ν_j",
    },
    CatalogEntry {
        id: IdentityId::Ws1,
        title: "Weber-Schafheitlin integral",
        display: "∫₀^∞ t^(−ν₁−ν₂) J_ν₁(t) J_ν₂(t) dt = √π Γ(ν₁+ν₂) / (2^(ν₁+ν₂) Γ(ν₁+ν₂+1/2) Γ(ν₁+1/2) Γ(ν₂+1/2))",
        hypothesis: "Re(ν₁+ν₂) > 0; the numerical side needs real ν_j ≥ 0",
    },
    CatalogEntry {
        id: IdentityId::Gd1,
        title: "Gamma function of the positive definite cone",
        display: "∫_{X>0} det X^(α−(d+1)/2) etr(−X) dX = π^(d(d−1)/4) ∏_{j=1}^d Γ(α−(j−1)/2)",
        hypothesis: "Re α > (d−1)/2; the numerical side needs real α",
    },
    CatalogEntry {
        id: IdentityId::Wi1,
        title: "Wishart normalization",
        display: "∫_{X>0} det X^(α−(d+1)/2) etr(−Σ⁻¹X) dX = Γ_d(α) det Σ^α",
        hypothesis: "α > (d−1)/2 real, Σ positive definite",
    },
    CatalogEntry {
        id: IdentityId::Mc1,
        title: "Cauchy beta integral on symmetric matrices",
        display: "∫ det(I+iΣ₁T)^(−α₁) det(I−iΣ₂T)^(−α₂) dT = 2^d π^(d(d+1)/2) Γ_d(α₁+α₂−(d+1)/2)/(Γ_d(α₁)Γ_d(α₂)) · det Σ₁^(α₂−(d+1)/2) det Σ₂^(α₁−(d+1)/2) / det(Σ₁+Σ₂)^(α₁+α₂−(d+1)/2)",
        hypothesis: "Re(α₁+α₂) > d, Σ_j positive definite",
    },
    CatalogEntry {
        id: IdentityId::Mc0,
        title: "Cauchy beta integral on symmetric matrices, same-sign factors",
        display: "∫ det(I+iΣ₁T)^(−α₁) det(I+iΣ₂T)^(−α₂) dT = 0",
        hypothesis: "Re(α₁+α₂) > d, Σ_j positive definite",
    },
    CatalogEntry {
        id: IdentityId::Cs1,
        title: "Cauchy-Selberg integral",
        display: "∫_{ℝ^d} ∏_{j<k}|t_j−t_k| ∏_j (1+iσ₁t_j)^(−α₁)(1−iσ₂t_j)^(−α₂) dt = d! 2^d π^(d/2) Γ_d(d/2) Γ_d(α₁+α₂−(d+1)/2)/(Γ_d(α₁)Γ_d(α₂)) · σ₁^(α₂d−d(d+1)/2) σ₂^(α₁d−d(d+1)/2)/(σ₁+σ₂)^((α₁+α₂)d−d(d+1)/2)",
        hypothesis: "Re(α₁+α₂) > d, Re σ_j > 0",
    },
    CatalogEntry {
        id: IdentityId::Cs0,
        title: "Cauchy-Selberg integral, same-sign factors",
        display: "∫_{ℝ^d} ∏_{j<k}|t_j−t_k| ∏_j (1+iσ₁t_j)^(−α₁)(1+iσ₂t_j)^(−α₂) dt = 0",
        hypothesis: "Re(α₁+α₂) > d, Re σ_j > 0",
    },
];

impl IdentityId {
    pub const ALL: [IdentityId; 13] = [
        IdentityId::Cb1,
        IdentityId::Cb0,
        IdentityId::F11One,
        IdentityId::F11Zero,
        IdentityId::F21One,
        IdentityId::Bk1,
        IdentityId::Ws1,
        IdentityId::Gd1,
        IdentityId::Wi1,
        IdentityId::Mc1,
        IdentityId::Mc0,
        IdentityId::Cs1,
        IdentityId::Cs0,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Cb1 => "CB-1",
            IdentityId::Cb0 => "CB-0",
            IdentityId::F11One => "F11-1",
            IdentityId::F11Zero => "F11-0",
            IdentityId::F21One => "F21-1",
            IdentityId::Bk1 => "BK-1",
            IdentityId::Ws1 => "WS-1",
            IdentityId::Gd1 => "GD-1",
            IdentityId::Wi1 => "WI-1",
            IdentityId::Mc1 => "MC-1",
            IdentityId::Mc0 => "MC-0",
            IdentityId::Cs1 => "CS-1",
            IdentityId::Cs0 => "CS-0",
        }
    }

    pub fn catalog(self) -> &'static CatalogEntry {
        &CATALOG[self as usize]
    }

    /// `true` for identities whose right-hand side is zero.
    pub fn is_vanishing(self) -> bool {
        matches!(
            self,
            IdentityId::Cb0 | IdentityId::F11Zero | IdentityId::Mc0 | IdentityId::Cs0
        )
    }

    /// Parameter names in canonical order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            IdentityId::Cb1 | IdentityId::Cb0 => &["alpha1", "alpha2", "sigma1", "sigma2"],
            IdentityId::F11One | IdentityId::F11Zero => &["alpha1", "sigma1", "alpha2", "sigma2"],
            IdentityId::F21One => &["alpha1", "alpha2", "sigma1", "sigma2", "gamma1", "gamma2", "theta"],
            IdentityId::Bk1 | IdentityId::Ws1 => &["nu1", "nu2"],
            IdentityId::Gd1 => &["d", "alpha"],
            IdentityId::Wi1 => &["d", "alpha", "Sigma"],
            IdentityId::Mc1 | IdentityId::Mc0 => &["d", "alpha1", "alpha2", "Sigma1", "Sigma2"],
            IdentityId::Cs1 | IdentityId::Cs0 => &["d", "alpha1", "alpha2", "sigma1", "sigma2"],
        }
    }

    /// Engine used when a case does not choose one.
    pub fn default_engine(self) -> Engine {
        match self {
            IdentityId::Gd1 | IdentityId::Wi1 | IdentityId::Mc1 | IdentityId::Mc0 => Engine::MonteCarlo,
            _ => Engine::Quadrature,
        }
    }

    pub fn supports(self, engine: Engine) -> bool {
        match engine {
            Engine::Quadrature => !matches!(
                self,
                IdentityId::Gd1 | IdentityId::Wi1 | IdentityId::Mc1 | IdentityId::Mc0
            ),
            Engine::MonteCarlo => matches!(
                self,
                IdentityId::Gd1
                    | IdentityId::Wi1
                    | IdentityId::Mc1
                    | IdentityId::Mc0
                    | IdentityId::Cs1
                    | IdentityId::Cs0
            ),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown identity id '{s}'")))
    }
}

/// Integration route for the left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Quadrature,
    MonteCarlo,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Quadrature => "quadrature",
            Engine::MonteCarlo => "mc",
        }
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(Engine::Quadrature),
            "mc" => Ok(Engine::MonteCarlo),
            _ => Err(Error::Config(format!("unknown engine '{s}' (expected quadrature or mc)"))),
        }
    }
}

/// A named parameter value.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Dim(usize),
    Scalar(ComplexScalar),
    Matrix(SymMatrix),
}

/// Kind of value a parameter name carries.
pub(crate) fn is_matrix_name(name: &str) -> bool {
    name.starts_with("Sigma")
}

pub(crate) fn is_dim_name(name: &str) -> bool {
    name == "d"
}

/// Parameter assignment in the identity's canonical order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params(Vec<(String, ParamValue)>);

impl Params {
    pub fn iter(&self) -> impl Iterator<Item = (&str, &ParamValue)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn get(&self, name: &str) -> Option<&ParamValue> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn scalar(&self, name: &str) -> Result<ComplexScalar> {
        match self.get(name) {
            Some(ParamValue::Scalar(z)) => Ok(*z),
            _ => Err(Error::Config(format!("missing scalar parameter '{name}'"))),
        }
    }

    pub fn dim(&self) -> Result<usize> {
        match self.get("d") {
            Some(ParamValue::Dim(d)) => Ok(*d),
            _ => Err(Error::Config("missing dimension 'd'".into())),
        }
    }

    pub fn matrix(&self, name: &str) -> Result<&SymMatrix> {
        match self.get(name) {
            Some(ParamValue::Matrix(m)) => Ok(m),
            _ => Err(Error::Config(format!("missing matrix parameter '{name}'"))),
        }
    }
}

/// Per-case engine settings; unset fields fall back to the run settings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CaseSettings {
    pub rel_tol: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub engine: Option<Engine>,
}

/// A validated parameter assignment for one identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCase {
    pub id: IdentityId,
    params: Params,
    pub settings: CaseSettings,
}

impl IdentityCase {
    /// Validates names, kinds and hypotheses. Omitted `Sigma*` matrices
    /// default to the identity.
    pub fn new(id: IdentityId, params: Vec<(String, ParamValue)>) -> Result<Self> {
        let names = id.parameter_names();
        for (k, _) in &params {
            if !names.contains(&k.as_str()) {
                return Err(Error::Config(format!("{id}: unknown parameter '{k}'")));
            }
        }
        let lookup = |name: &str| params.iter().find(|(k, _)| k == name).map(|(_, v)| v.clone());
        let d = match lookup("d") {
            Some(ParamValue::Dim(d)) => Some(d),
            Some(_) => return Err(Error::Config(format!("{id}: 'd' must be a positive integer"))),
            None => None,
        };
        let mut ordered = Vec::with_capacity(names.len());
        for &name in names {
            let value = match lookup(name) {
                Some(v) => {
                    let kind_ok = match v {
                        ParamValue::Dim(_) => is_dim_name(name),
                        ParamValue::Matrix(_) => is_matrix_name(name),
                        ParamValue::Scalar(_) => !is_dim_name(name) && !is_matrix_name(name),
                    };
                    if !kind_ok {
                        return Err(Error::Config(format!("{id}: parameter '{name}' has the wrong kind")));
                    }
                    v
                }
                None if is_matrix_name(name) => match d {
                    Some(d) => ParamValue::Matrix(SymMatrix::identity(d)),
                    None => return Err(Error::Config(format!("{id}: missing 'd'"))),
                },
                None => return Err(Error::Config(format!("{id}: missing parameter '{name}'"))),
            };
            ordered.push((name.to_string(), value));
        }
        let case = IdentityCase {
            id,
            params: Params(ordered),
            settings: CaseSettings::default(),
        };
        lhs::validate(&case)?;
        Ok(case)
    }

    /// Convenience constructor from `(name, value)` pairs of real scalars.
    pub fn real(id: IdentityId, values: &[(&str, f64)]) -> Result<Self> {
        let params = values
            .iter()
            .map(|&(k, v)| {
                let value = if is_dim_name(k) {
                    if v < 1.0 || v.fract() != 0.0 {
                        return Err(Error::Config(format!("{id}: 'd' must be a positive integer")));
                    }
                    ParamValue::Dim(v as usize)
                } else {
                    ParamValue::Scalar(c64(v, 0.0))
                };
                Ok((k.to_string(), value))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(id, params)
    }

    pub fn with_settings(mut self, settings: CaseSettings) -> Result<Self> {
        if let Some(engine) = settings.engine {
            if !self.id.supports(engine) {
                return Err(Error::Config(format!("{}: engine '{}' is not available", self.id, engine.as_str())));
            }
        }
        if let Some(t) = settings.rel_tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("{}: rel_tol must be positive", self.id)));
            }
        }
        self.settings = settings;
        lhs::validate(&self)?;
        Ok(self)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn engine(&self) -> Engine {
        self.settings.engine.unwrap_or_else(|| self.id.default_engine())
    }
}

/// Verdict thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub mc_sigma_multiplier: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec {
            rel_tol: 1e-6,
            abs_floor: 1e-8,
            mc_sigma_multiplier: 4.0,
        }
    }
}

impl ToleranceSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_floor", self.abs_floor),
            ("mc_sigma_multiplier", self.mc_sigma_multiplier),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Settings shared by every case of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub tol: ToleranceSpec,
    pub master_seed: u64,
    pub mc_samples: usize,
    /// Worker threads; 0 uses the global pool.
    pub parallelism: usize,
    /// Record wall-clock time per case (breaks byte-identical reports).
    pub timings: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            tol: ToleranceSpec::default(),
            master_seed: 0,
            mc_samples: 1_000_000,
            parallelism: 0,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    EngineError,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::EngineError => "engine-error",
        }
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Verdict::Pass),
            "fail" => Ok(Verdict::Fail),
            "engine-error" => Ok(Verdict::EngineError),
            _ => Err(Error::Config(format!("unknown verdict '{s}'"))),
        }
    }
}

/// Outcome of checking one case.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRecord {
    pub id: IdentityId,
    pub params: Params,
    pub lhs: Option<ComplexScalar>,
    /// Quadrature error estimate, or Monte Carlo standard error.
    pub lhs_err: Option<f64>,
    pub rhs: Option<ComplexScalar>,
    pub abs_err: Option<f64>,
    /// `None` when the right-hand side is zero.
    pub rel_err: Option<f64>,
    pub verdict: Verdict,
    pub evals_or_samples: u64,
    /// Seed used by Monte Carlo cases.
    pub seed: Option<u64>,
    pub wall_ms: Option<f64>,
    /// Message for engine errors.
    pub error: Option<String>,
}
