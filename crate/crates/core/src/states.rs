//! Named resource states and the `name:key=value,...` mini-syntax.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::{c, identity, real, BellState, ComplexMatrix, DensityMatrix, PureState, ZERO};

/// Constructors for the families of states the games are played with.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedState {
    Bell(BellState),
    /// `a|ψᵏ⟩⟨ψᵏ| + (1−a)𝟙/4`.
    Werner { bell: BellState, a: f64 },
    /// `√r|00⟩ + √(1−r)|11⟩`.
    Schmidt { r: f64 },
    /// `a|ψ⁺⟩⟨ψ⁺| + (1−a)|ψ⁻⟩⟨ψ⁻|`.
    TwoBellMixture { a: f64 },
    /// Weights on (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).
    BellDiagonal { weights: [f64; 4] },
    /// `ρ₀₀|00⟩⟨00| + ρ₀₁|00⟩⟨11| + ρ₀₁*|11⟩⟨00| + (1−ρ₀₀)|11⟩⟨11|`.
    Sa { rho00: f64, rho01: num_complex::Complex64 },
    /// Computational basis product state.
    Basis { bits: [usize; 2] },
    MaximallyMixed,
}

fn in_unit(field: &str, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(Error::validation(field, format!("{v} is outside [0, 1]")));
    }
    Ok(v)
}

fn parse_f64(field: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::validation(field, format!("`{s}` is not a number")))
}

impl NamedState {
    pub fn werner(bell: BellState, a: f64) -> Result<Self> {
        in_unit("a", a)?;
        Ok(NamedState::Werner { bell, a })
    }

    pub fn schmidt(r: f64) -> Result<Self> {
        in_unit("r", r)?;
        Ok(NamedState::Schmidt { r })
    }

    pub fn two_bell_mixture(a: f64) -> Result<Self> {
        in_unit("a", a)?;
        Ok(NamedState::TwoBellMixture { a })
    }

    pub fn bell_diagonal(weights: [f64; 4]) -> Result<Self> {
        for (i, w) in weights.iter().enumerate() {
            in_unit(&format!("p{}", i + 1), *w)?;
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::validation("p", format!("weights sum to {sum}, not 1")));
        }
        Ok(NamedState::BellDiagonal { weights })
    }

    pub fn sa(rho00: f64, rho01: num_complex::Complex64) -> Result<Self> {
        in_unit("rho00", rho00)?;
        let limit = (rho00 * (1.0 - rho00)).sqrt();
        if rho01.norm() > limit + 1e-12 {
            return Err(Error::validation(
                "rho01",
                format!("|rho01| = {} exceeds sqrt(rho00(1-rho00)) = {limit}", rho01.norm()),
            ));
        }
        Ok(NamedState::Sa { rho00, rho01 })
    }

    /// The state vector for the pure families.
    pub fn pure(&self) -> Option<PureState> {
        match *self {
            NamedState::Bell(b) => Some(b.state()),
            NamedState::Schmidt { r } => {
                PureState::two_qubit([real(r.sqrt()), ZERO, ZERO, real((1.0 - r).sqrt())]).ok()
            }
            NamedState::Basis { bits } => PureState::basis(&bits).ok(),
            _ => None,
        }
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        if let Some(psi) = self.pure() {
            return Ok(psi.projector());
        }
        match *self {
            NamedState::Werner { bell, a } => {
                let m = bell.projector().matrix() * real(a) + identity(4) * real((1.0 - a) / 4.0);
                DensityMatrix::new(vec![2, 2], m)
            }
            NamedState::TwoBellMixture { a } => {
                let m = BellState::PsiPlus.projector().matrix() * real(a)
                    + BellState::PsiMinus.projector().matrix() * real(1.0 - a);
                DensityMatrix::new(vec![2, 2], m)
            }
            NamedState::BellDiagonal { weights } => {
                let mut m = ComplexMatrix::zeros(4, 4);
                for (w, b) in weights.iter().zip(BellState::ALL) {
                    m += b.projector().matrix() * real(*w);
                }
                DensityMatrix::new(vec![2, 2], m)
            }
            NamedState::Sa { rho00, rho01 } => {
                let mut m = ComplexMatrix::zeros(4, 4);
                m[(0, 0)] = real(rho00);
                m[(0, 3)] = rho01;
                m[(3, 0)] = rho01.conj();
                m[(3, 3)] = real(1.0 - rho00);
                DensityMatrix::new(vec![2, 2], m)
            }
            NamedState::MaximallyMixed => Ok(DensityMatrix::maximally_mixed(vec![2, 2])),
            NamedState::Bell(_) | NamedState::Schmidt { .. } | NamedState::Basis { .. } => {
                unreachable!("pure families handled above")
            }
        }
    }

    /// Builds a state from a name and a parameter map (values as text).
    pub fn from_params(name: &str, params: &BTreeMap<String, String>) -> Result<Self> {
        let get = |key: &str| -> Result<f64> {
            let v = params
                .get(key)
                .ok_or_else(|| Error::validation(key, format!("missing parameter for `{name}`")))?;
            parse_f64(key, v)
        };
        let bell_param = |default: BellState| -> Result<BellState> {
            match params.get("k").or_else(|| params.get("bell")) {
                Some(s) => s.parse(),
                None => Ok(default),
            }
        };
        let state = match name.to_ascii_lowercase().as_str() {
            "bell" => NamedState::Bell(bell_param(BellState::PhiPlus)?),
            "phi+" | "phi-" | "psi+" | "psi-" => NamedState::Bell(name.parse()?),
            "werner" => NamedState::werner(bell_param(BellState::PsiPlus)?, get("a")?)?,
            "schmidt" => NamedState::schmidt(get("r")?)?,
            "two_bell" | "two_bell_mixture" => NamedState::two_bell_mixture(get("a")?)?,
            "bell_diagonal" => {
                NamedState::bell_diagonal([get("p1")?, get("p2")?, get("p3")?, get("p4")?])?
            }
            "sa" => {
                let im = match params.get("rho01_im") {
                    Some(s) => parse_f64("rho01_im", s)?,
                    None => 0.0,
                };
                let re = match params.get("rho01_re") {
                    Some(s) => parse_f64("rho01_re", s)?,
                    None => get("rho01")?,
                };
                NamedState::sa(get("rho00")?, c(re, im))?
            }
            "basis" | "product" => {
                let bits = params
                    .get("bits")
                    .ok_or_else(|| Error::validation("bits", "missing, e.g. basis:01"))?;
                let digits: Vec<usize> = bits
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(Error::validation("bits", format!("`{bits}` is not a bitstring"))),
                    })
                    .collect::<Result<_>>()?;
                if digits.len() != 2 {
                    return Err(Error::validation("bits", "need exactly two bits"));
                }
                NamedState::Basis {
                    bits: [digits[0], digits[1]],
                }
            }
            "mixed" | "maximally_mixed" => NamedState::MaximallyMixed,
            other => return Err(Error::validation("name", format!("unknown state `{other}`"))),
        };
        let allowed: &[&str] = match &state {
            NamedState::Bell(_) => &["k", "bell"],
            NamedState::Werner { .. } => &["a", "k", "bell"],
            NamedState::Schmidt { .. } => &["r"],
            NamedState::TwoBellMixture { .. } => &["a"],
            NamedState::BellDiagonal { .. } => &["p1", "p2", "p3", "p4"],
            NamedState::Sa { .. } => &["rho00", "rho01", "rho01_re", "rho01_im"],
            NamedState::Basis { .. } => &["bits"],
            NamedState::MaximallyMixed => &[],
        };
        if let Some(extra) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::validation(extra.as_str(), format!("unknown parameter for `{name}`")));
        }
        Ok(state)
    }

    pub fn name(&self) -> &'static str {
        match self {
            NamedState::Bell(_) => "bell",
            NamedState::Werner { .. } => "werner",
            NamedState::Schmidt { .. } => "schmidt",
            NamedState::TwoBellMixture { .. } => "two_bell",
            NamedState::BellDiagonal { .. } => "bell_diagonal",
            NamedState::Sa { .. } => "sa",
            NamedState::Basis { .. } => "basis",
            NamedState::MaximallyMixed => "mixed",
        }
    }

    pub fn params(&self) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            p.insert(k.to_string(), v);
        };
        match self {
            NamedState::Bell(b) => put("k", b.label().into()),
            NamedState::Werner { bell, a } => {
                put("k", bell.label().into());
                put("a", a.to_string());
            }
            NamedState::Schmidt { r } => put("r", r.to_string()),
            NamedState::TwoBellMixture { a } => put("a", a.to_string()),
            NamedState::BellDiagonal { weights } => {
                for (i, w) in weights.iter().enumerate() {
                    put(&format!("p{}", i + 1), w.to_string());
                }
            }
            NamedState::Sa { rho00, rho01 } => {
                put("rho00", rho00.to_string());
                put("rho01_re", rho01.re.to_string());
                put("rho01_im", rho01.im.to_string());
            }
            NamedState::Basis { bits } => put("bits", format!("{}{}", bits[0], bits[1])),
            NamedState::MaximallyMixed => {}
        }
        p
    }
}

impl FromStr for NamedState {
    type Err = Error;

    /// `werner:a=0.6,k=psi-`, `bell:phi+`, `basis:01`, `mixed`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => (s.trim(), ""),
        };
        let mut params = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => {
                    params.insert(k.trim().to_string(), v.trim().to_string());
                }
                None => {
                    let key = match name {
                        "basis" | "product" => "bits",
                        _ => "k",
                    };
                    params.insert(key.to_string(), item.to_string());
                }
            }
        }
        NamedState::from_params(name, &params)
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            return f.write_str(self.name());
        }
        let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}:{}", self.name(), body.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn werner_limits() {
        let w1 = NamedState::werner(BellState::PsiPlus, 1.0).unwrap().density().unwrap();
        let p = BellState::PsiPlus.projector();
        assert!((w1.matrix() - p.matrix()).amax_norm() < 1e-15);
        let w0 = NamedState::werner(BellState::PsiPlus, 0.0).unwrap().density().unwrap();
        assert!((w0.matrix() - identity(4) * real(0.25)).amax_norm() < 1e-15);
    }

    trait AmaxNorm {
        fn amax_norm(&self) -> f64;
    }
    impl AmaxNorm for ComplexMatrix {
        fn amax_norm(&self) -> f64 {
            self.iter().map(|z| z.norm()).fold(0.0, f64::max)
        }
    }

    #[test]
    fn bell_diagonal_spectrum_is_weights() {
        let w = [0.7, 0.1, 0.1, 0.1];
        let rho = NamedState::bell_diagonal(w).unwrap().density().unwrap();
        let vals = rho.eigenvalues();
        for (got, want) in vals.iter().zip([0.1, 0.1, 0.1, 0.7]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn out_of_range_parameters_name_the_field() {
        match NamedState::werner(BellState::PsiPlus, 1.5) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "a"),
            other => panic!("unexpected {other:?}"),
        }
        match NamedState::bell_diagonal([0.5, 0.5, 0.5, -0.5]) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "p4"),
            other => panic!("unexpected {other:?}"),
        }
        match NamedState::sa(0.5, c(0.6, 0.0)) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "rho01"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sa_accepts_psd_boundary() {
        // |ρ₀₁| = √(ρ₀₀(1−ρ₀₀)) is a pure state
        let r00: f64 = 0.3;
        let s = NamedState::sa(r00, c((r00 * (1.0 - r00)).sqrt(), 0.0)).unwrap();
        let rho = s.density().unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!(NamedState::sa(r00, c((r00 * (1.0 - r00)).sqrt() + 1e-6, 0.0)).is_err());
    }

    #[test]
    fn mini_syntax() {
        let s: NamedState = "werner:a=0.6".parse().unwrap();
        assert_eq!(s, NamedState::Werner { bell: BellState::PsiPlus, a: 0.6 });
        let s: NamedState = "bell:phi+".parse().unwrap();
        assert_eq!(s, NamedState::Bell(BellState::PhiPlus));
        let s: NamedState = "basis:01".parse().unwrap();
        assert_eq!(s, NamedState::Basis { bits: [0, 1] });
        let s: NamedState = "sa:rho00=0.5,rho01=0.3".parse().unwrap();
        assert_eq!(s, NamedState::Sa { rho00: 0.5, rho01: c(0.3, 0.0) });
        assert!("werner:b=0.3".parse::<NamedState>().is_err());
        assert!("nonsense".parse::<NamedState>().is_err());
        let round: NamedState = s.to_string().parse().unwrap();
        assert_eq!(round, s);
    }
}
