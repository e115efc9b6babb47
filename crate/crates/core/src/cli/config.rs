//! `key = value` run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::dynamics::{Dissipator, DEFAULT_DT, FOCK_CAP};
use crate::error::{Error, Result};
use crate::hilbert::{Qubit, SpaceLayout};
use crate::linalg::{norm, C64};

use super::output::fmt_num;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Spectrum,
    Evolve,
    Steady,
    GroundEofSweep,
    Fig1a,
    Fig1b,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Spectrum => "spectrum",
            Experiment::Evolve => "evolve",
            Experiment::Steady => "steady",
            Experiment::GroundEofSweep => "ground_eof_sweep",
            Experiment::Fig1a => "fig1a",
            Experiment::Fig1b => "fig1b",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "spectrum" => Experiment::Spectrum,
            "evolve" => Experiment::Evolve,
            "steady" => Experiment::Steady,
            "ground_eof_sweep" => Experiment::GroundEofSweep,
            "fig1a" => Experiment::Fig1a,
            "fig1b" => Experiment::Fig1b,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianKind {
    Rabi,
    JaynesCummings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FockSetting {
    Fixed(usize),
    Auto,
}

/// Inclusive grid over g/ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// One term of an initial state: amplitude times a basis ket or |Φ⁻0⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Ket {
    Basis(Qubit, Qubit, usize),
    PhiMinus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialState {
    pub text: String,
    #[serde(skip_serializing)]
    pub terms: Vec<(f64, Ket)>,
}

impl InitialState {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty initial state".into());
        }
        let mut terms = Vec::new();
        for (sign, term) in split_terms(&s)? {
            let (coef, ket) = match term.split_once('*') {
                Some((c, k)) => (c.parse::<f64>().map_err(|_| format!("bad coefficient '{c}'"))?, k),
                None => (1.0, term),
            };
            if !coef.is_finite() {
                return Err(format!("bad coefficient '{coef}'"));
            }
            terms.push((sign * coef, parse_ket(ket)?));
        }
        let st = Self { text: text.trim().to_string(), terms };
        if st.terms.iter().all(|(c, _)| *c == 0.0) {
            return Err("initial state has zero norm".into());
        }
        Ok(st)
    }

    pub fn max_fock_index(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, k)| match k {
                Ket::Basis(_, _, n) => *n,
                Ket::PhiMinus => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Normalized state vector in the given layout.
    pub fn ket(&self, layout: &SpaceLayout) -> Result<Vec<C64>> {
        let mut psi = vec![C64::new(0.0, 0.0); layout.total_dim()];
        for &(c, k) in &self.terms {
            match k {
                Ket::Basis(i, j, n) => {
                    if n >= layout.fock_dim() {
                        return Err(Error::InvalidParameter(format!(
                            "initial state needs Fock level {n} but d = {}",
                            layout.fock_dim()
                        )));
                    }
                    psi[layout.index(i, j, n)] += c;
                }
                Ket::PhiMinus => {
                    for (z, p) in psi.iter_mut().zip(layout.phi_minus_ket(0)) {
                        *z += p * c;
                    }
                }
            }
        }
        let nrm = norm(&psi);
        if nrm < 1e-12 {
            return Err(Error::InvalidParameter(format!("initial state '{}' has zero norm", self.text)));
        }
        Ok(psi.into_iter().map(|z| z / nrm).collect())
    }
}

fn split_terms(s: &str) -> std::result::Result<Vec<(f64, &str)>, String> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut sign = 1.0;
    for (i, &b) in bytes.iter().enumerate() {
        if b != b'+' && b != b'-' {
            continue;
        }
        // exponent sign inside a number such as 1e-3
        let in_exponent = i >= 2
            && matches!(bytes[i - 1], b'e' | b'E')
            && (bytes[i - 2].is_ascii_digit() || bytes[i - 2] == b'.');
        if in_exponent {
            continue;
        }
        if i > start {
            out.push((sign, &s[start..i]));
        } else if i > 0 {
            return Err(format!("dangling sign at position {i}"));
        }
        sign = if b == b'-' { -1.0 } else { 1.0 };
        start = i + 1;
    }
    if start >= s.len() {
        return Err("initial state ends with a sign".into());
    }
    out.push((sign, &s[start..]));
    Ok(out)
}

fn parse_ket(k: &str) -> std::result::Result<Ket, String> {
    if k == "phi_minus" {
        return Ok(Ket::PhiMinus);
    }
    let mut chars = k.chars();
    let (Some(a), Some(b)) = (chars.next(), chars.next()) else {
        return Err(format!("bad ket '{k}'"));
    };
    let (Some(a), Some(b)) = (Qubit::from_char(a), Qubit::from_char(b)) else {
        return Err(format!("bad ket '{k}': qubit labels must be e or g"));
    };
    let n: usize = chars.as_str().parse().map_err(|_| format!("bad ket '{k}': missing Fock index"))?;
    Ok(Ket::Basis(a, b, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub steady_tol: f64,
    pub fock_tol: f64,
    pub fock_cap: usize,
    /// Overrides the 500/κ default.
    pub t_max: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { steady_tol: 1e-7, fock_tol: 1e-4, fock_cap: FOCK_CAP, t_max: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub omega_a: f64,
    pub omega_f: f64,
    pub g: f64,
    pub kappa: f64,
    pub fock: FockSetting,
    pub initial_state: InitialState,
    pub dissipator: Dissipator,
    pub hamiltonian: HamiltonianKind,
    pub t_end: f64,
    pub dt: f64,
    pub stride: f64,
    pub sweep: Sweep,
    pub g_list: Vec<f64>,
    pub levels: usize,
    pub output_path: Option<PathBuf>,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        Self {
            experiment,
            omega_a: 1.0,
            omega_f: 1.0,
            g: 0.1,
            kappa: 0.2,
            fock: FockSetting::Auto,
            initial_state: InitialState::parse("ge0").expect("valid literal"),
            dissipator: Dissipator::Improved,
            hamiltonian: HamiltonianKind::Rabi,
            t_end: 200.0,
            dt: DEFAULT_DT,
            stride: 0.5,
            sweep: Sweep { start: 0.0, stop: 1.0, step: 0.025 },
            g_list: vec![0.25, 0.4, 0.5],
            levels: 8,
            output_path: None,
            tolerances: Tolerances::default(),
        }
    }

    /// Resolved parameters as `key = value` pairs, in a fixed order.
    pub fn describe(&self) -> Vec<(&'static str, String)> {
        let fock = match self.fock {
            FockSetting::Fixed(d) => d.to_string(),
            FockSetting::Auto => "auto".into(),
        };
        let dissipator = match self.dissipator {
            Dissipator::Improved => "improved",
            Dissipator::Standard => "standard",
            Dissipator::StandardRabi => "standard_rabi",
        };
        let hamiltonian = match self.hamiltonian {
            HamiltonianKind::Rabi => "rabi",
            HamiltonianKind::JaynesCummings => "jc",
        };
        let list = self.g_list.iter().map(|&g| fmt_num(g)).collect::<Vec<_>>().join(",");
        vec![
            ("experiment", self.experiment.name().into()),
            ("omega_a", fmt_num(self.omega_a)),
            ("omega_f", fmt_num(self.omega_f)),
            ("g", fmt_num(self.g)),
            ("kappa", fmt_num(self.kappa)),
            ("d", fock),
            ("initial_state", self.initial_state.text.clone()),
            ("dissipator", dissipator.into()),
            ("hamiltonian", hamiltonian.into()),
            ("t_end", fmt_num(self.t_end)),
            ("dt", fmt_num(self.dt)),
            ("stride", fmt_num(self.stride)),
            ("sweep_start", fmt_num(self.sweep.start)),
            ("sweep_stop", fmt_num(self.sweep.stop)),
            ("sweep_step", fmt_num(self.sweep.step)),
            ("g_list", list),
            ("levels", self.levels.to_string()),
            ("steady_tol", fmt_num(self.tolerances.steady_tol)),
            ("fock_tol", fmt_num(self.tolerances.fock_tol)),
            ("fock_cap", self.tolerances.fock_cap.to_string()),
            ("t_max", self.tolerances.t_max.map_or_else(|| "500/kappa".into(), fmt_num)),
        ]
    }
}

fn cfg_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| cfg_err(line, format!("expected `key = value`, got '{content}'")))?;
        let key = match key.trim() {
            "fock_dim" => "d",
            k => k,
        };
        if !KNOWN_KEYS.contains(&key) {
            return Err(cfg_err(line, format!("unknown key '{key}'")));
        }
        if let Some((prev, _)) = entries.get(key) {
            return Err(cfg_err(line, format!("duplicate key '{key}' (first set on line {prev})")));
        }
        entries.insert(key.to_string(), (line, value.trim().to_string()));
    }

    let (exp_line, exp) = entries.remove("experiment").ok_or_else(|| cfg_err(0, "missing required key 'experiment'"))?;
    let experiment =
        Experiment::parse(&exp).ok_or_else(|| cfg_err(exp_line, format!("unknown experiment '{exp}'")))?;
    let mut cfg = RunConfig::defaults(experiment);
    if experiment == Experiment::Spectrum {
        cfg.fock = FockSetting::Fixed(10);
    }

    let mut sweep_lines = 0;
    let mut omega_line = 0;
    for (key, (line, value)) in &entries {
        let line = *line;
        let num = || parse_f64(line, key, value);
        match key.as_str() {
            "omega" => {
                let w = positive(line, key, num()?)?;
                cfg.omega_a = w;
                cfg.omega_f = w;
                omega_line = line;
            }
            "omega_a" => cfg.omega_a = positive(line, key, num()?)?,
            "omega_f" => cfg.omega_f = positive(line, key, num()?)?,
            "g" => cfg.g = non_negative(line, key, num()?)?,
            "kappa" => cfg.kappa = non_negative(line, key, num()?)?,
            "d" => {
                cfg.fock = if value == "auto" {
                    FockSetting::Auto
                } else {
                    let d: usize = value.parse().map_err(|_| cfg_err(line, format!("d must be an integer ≥ 2 or 'auto', got '{value}'")))?;
                    if d < 2 {
                        return Err(cfg_err(line, "d must be ≥ 2"));
                    }
                    FockSetting::Fixed(d)
                }
            }
            "initial_state" => {
                cfg.initial_state = InitialState::parse(value).map_err(|m| cfg_err(line, format!("invalid state: {m}")))?
            }
            "dissipator" => {
                cfg.dissipator = match value.as_str() {
                    "improved" => Dissipator::Improved,
                    "standard" => Dissipator::Standard,
                    "standard_rabi" => Dissipator::StandardRabi,
                    other => {
                        return Err(cfg_err(line, format!("dissipator must be improved, standard or standard_rabi, got '{other}'")))
                    }
                }
            }
            "hamiltonian" => {
                cfg.hamiltonian = match value.as_str() {
                    "rabi" => HamiltonianKind::Rabi,
                    "jc" => HamiltonianKind::JaynesCummings,
                    other => return Err(cfg_err(line, format!("hamiltonian must be rabi or jc, got '{other}'"))),
                }
            }
            "t_end" => cfg.t_end = non_negative(line, key, num()?)?,
            "dt" => cfg.dt = positive(line, key, num()?)?,
            "stride" => cfg.stride = positive(line, key, num()?)?,
            "sweep_start" => {
                cfg.sweep.start = non_negative(line, key, num()?)?;
                sweep_lines = sweep_lines.max(line);
            }
            "sweep_stop" => {
                cfg.sweep.stop = num()?;
                sweep_lines = sweep_lines.max(line);
            }
            "sweep_step" => {
                cfg.sweep.step = positive(line, key, num()?)?;
                sweep_lines = sweep_lines.max(line);
            }
            "g_list" => {
                cfg.g_list = value
                    .split(',')
                    .map(|v| parse_f64(line, key, v.trim()).and_then(|g| non_negative(line, key, g)))
                    .collect::<Result<_>>()?;
                if cfg.g_list.is_empty() {
                    return Err(cfg_err(line, "g_list must not be empty"));
                }
            }
            "levels" => {
                cfg.levels = value
                    .parse()
                    .ok()
                    .filter(|&l: &usize| l > 0)
                    .ok_or_else(|| cfg_err(line, format!("levels must be a positive integer, got '{value}'")))?
            }
            "output_path" => cfg.output_path = Some(PathBuf::from(value)),
            "steady_tol" => cfg.tolerances.steady_tol = positive(line, key, num()?)?,
            "fock_tol" => cfg.tolerances.fock_tol = positive(line, key, num()?)?,
            "fock_cap" => {
                cfg.tolerances.fock_cap = value
                    .parse()
                    .ok()
                    .filter(|&c: &usize| c >= 4)
                    .ok_or_else(|| cfg_err(line, format!("fock_cap must be an integer ≥ 4, got '{value}'")))?
            }
            "t_max" => cfg.tolerances.t_max = Some(positive(line, key, num()?)?),
            _ => unreachable!("key list checked above"),
        }
    }

    if omega_line > 0 && (entries.contains_key("omega_a") || entries.contains_key("omega_f")) {
        return Err(cfg_err(omega_line, "'omega' cannot be combined with 'omega_a' or 'omega_f'"));
    }
    if cfg.sweep.start >= cfg.sweep.stop {
        return Err(cfg_err(sweep_lines, "sweep requires sweep_start < sweep_stop"));
    }
    if let FockSetting::Fixed(d) = cfg.fock {
        let need = cfg.initial_state.max_fock_index();
        if need >= d {
            let line = entries.get("initial_state").map_or(0, |e| e.0);
            return Err(cfg_err(line, format!("initial state needs Fock level {need} but d = {d}")));
        }
    }
    if cfg.dissipator == Dissipator::Improved && cfg.kappa == 0.0 && experiment == Experiment::Steady {
        let line = entries.get("kappa").map_or(0, |e| e.0);
        return Err(cfg_err(line, "steady-state search needs kappa > 0"));
    }
    Ok(cfg)
}

const KNOWN_KEYS: &[&str] = &[
    "experiment",
    "omega",
    "omega_a",
    "omega_f",
    "g",
    "kappa",
    "d",
    "initial_state",
    "dissipator",
    "hamiltonian",
    "t_end",
    "dt",
    "stride",
    "sweep_start",
    "sweep_stop",
    "sweep_step",
    "g_list",
    "levels",
    "output_path",
    "steady_tol",
    "fock_tol",
    "fock_cap",
    "t_max",
];

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| cfg_err(line, format!("{key}: malformed number '{value}'")))
}

fn positive(line: usize, key: &str, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(cfg_err(line, format!("{key} must be > 0, got {v}")))
    }
}

fn non_negative(line: usize, key: &str, v: f64) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(cfg_err(line, format!("{key} must be ≥ 0, got {v}")))
    }
}
