use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pauli::{parse_term_line, PauliSum};

const BUNDLED: &[(&str, &str)] = &[
    ("h2_sto3g_0.50", include_str!("../../data/h2_sto3g_0.50.ham")),
    ("h2_sto3g_0.7414", include_str!("../../data/h2_sto3g_0.7414.ham")),
    ("h2_sto3g_1.50", include_str!("../../data/h2_sto3g_1.50.ham")),
    ("h2_631g_0.7414", include_str!("../../data/h2_631g_0.7414.ham")),
];

/// Names of the Hamiltonians shipped with the crate.
pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// Text of a bundled Hamiltonian file.
pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// A qubit Hamiltonian plus the `# key: value` header of its file.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub n_qubits: usize,
    pub hamiltonian: PauliSum,
    /// Header entries in file order; comment lines without a key have an empty key.
    pub metadata: Vec<(String, String)>,
}

impl ProblemFile {
    pub fn new(hamiltonian: PauliSum, n_qubits: usize) -> Result<Self> {
        let p = Self {
            n_qubits,
            hamiltonian,
            metadata: vec![("n_qubits".into(), n_qubits.to_string())],
        };
        p.validate()?;
        Ok(p)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut terms = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                match comment.split_once(':') {
                    Some((key, value)) if !key.trim().contains(' ') => {
                        metadata.push((key.trim().to_string(), value.trim().to_string()))
                    }
                    _ => metadata.push((String::new(), comment.to_string())),
                }
                continue;
            }
            terms.push(parse_term_line(line, k + 1)?);
        }
        let hamiltonian = PauliSum::from_terms(terms);
        let declared = metadata
            .iter()
            .find(|(k, _)| k == "n_qubits")
            .map(|(_, v)| {
                v.parse::<usize>()
                    .map_err(|_| Error::Parse {
                        line: 0,
                        msg: format!("invalid n_qubits `{v}`"),
                    })
            })
            .transpose()?;
        let n_qubits = match declared {
            Some(n) => n,
            None => hamiltonian.max_qubit().map_or(1, |q| q + 1),
        };
        let p = Self {
            n_qubits,
            hamiltonian,
            metadata,
        };
        p.validate()?;
        Ok(p)
    }

    /// Reads `path`, or a bundled problem when `path` is `bundled:<name>`.
    pub fn load(path: &str) -> Result<Self> {
        if let Some(name) = path.strip_prefix("bundled:") {
            let text = bundled(name).ok_or_else(|| {
                Error::Config(format!(
                    "unknown bundled problem `{name}` (available: {})",
                    bundled_names().collect::<Vec<_>>().join(", ")
                ))
            })?;
            return Self::parse(text);
        }
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        if !self.hamiltonian.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        if let Some(q) = self.hamiltonian.max_qubit() {
            if q >= self.n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    size: self.n_qubits,
                });
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Option<T> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn hf_energy(&self) -> Option<f64> {
        self.get_parsed("hf_energy")
    }

    pub fn n_electrons(&self) -> Option<usize> {
        self.get_parsed("n_electrons")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            if k.is_empty() {
                let _ = writeln!(out, "# {v}");
            } else {
                let _ = writeln!(out, "# {k}: {v}");
            }
        }
        out.push_str(&self.hamiltonian.to_text());
        out
    }
}
