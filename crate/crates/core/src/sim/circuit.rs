use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fermion::Excitation;
use crate::pauli::{parse_term_line, PauliSum};

/// Parameter assignment, radians.
pub type Values = BTreeMap<String, f64>;

/// Gate angle: either a fixed number or `scale · value(name) + offset`.
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Param { name: String, scale: f64, offset: f64 },
}

impl Angle {
    pub fn param(name: impl Into<String>) -> Self {
        Angle::Param {
            name: name.into(),
            scale: 1.0,
            offset: 0.0,
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Angle::Fixed(_) => None,
            Angle::Param { name, .. } => Some(name),
        }
    }

    /// Derivative of the angle with respect to its parameter.
    pub fn scale(&self) -> f64 {
        match self {
            Angle::Fixed(_) => 0.0,
            Angle::Param { scale, .. } => *scale,
        }
    }

    pub fn value(&self, values: &Values) -> Result<f64> {
        match self {
            Angle::Fixed(v) => Ok(*v),
            Angle::Param {
                name,
                scale,
                offset,
            } => values
                .get(name)
                .map(|v| scale * v + offset)
                .ok_or_else(|| Error::UnassignedParameter(name.clone())),
        }
    }

    pub fn shifted(&self, s: f64) -> Angle {
        match self {
            Angle::Fixed(v) => Angle::Fixed(v + s),
            Angle::Param {
                name,
                scale,
                offset,
            } => Angle::Param {
                name: name.clone(),
                scale: *scale,
                offset: offset + s,
            },
        }
    }

    pub fn negated(&self) -> Angle {
        match self {
            Angle::Fixed(v) => Angle::Fixed(-v),
            Angle::Param {
                name,
                scale,
                offset,
            } => Angle::Param {
                name: name.clone(),
                scale: -scale,
                offset: -offset,
            },
        }
    }

    pub fn bound(&self, values: &Values) -> Result<Angle> {
        Ok(Angle::Fixed(self.value(values)?))
    }

    fn parse(token: &str) -> Option<Angle> {
        if let Ok(v) = token.parse::<f64>() {
            return Some(Angle::Fixed(v));
        }
        let (scale, rest) = match token.split_once('*') {
            Some((s, r)) => (s.parse::<f64>().ok()?, r),
            None => match token.strip_prefix('-') {
                Some(r) => (-1.0, r),
                None => (1.0, token),
            },
        };
        let split = rest
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i);
        let (name, offset) = match split {
            Some(i) => (&rest[..i], rest[i..].parse::<f64>().ok()?),
            None => (rest, 0.0),
        };
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        valid.then(|| Angle::Param {
            name: name.to_string(),
            scale,
            offset,
        })
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Fixed(v) => write!(f, "{v:?}"),
            Angle::Param {
                name,
                scale,
                offset,
            } => {
                if *scale == 1.0 {
                    write!(f, "{name}")?;
                } else if *scale == -1.0 {
                    write!(f, "-{name}")?;
                } else {
                    write!(f, "{scale:?}*{name}")?;
                }
                if *offset != 0.0 {
                    write!(f, "{offset:+?}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Pauli-X on one qubit.
    BasisFlip(usize),
    /// `∏_k exp(−i·angle·c_k σ_k / 2)` over mutually commuting hermitian strings.
    PauliRotation { generator: PauliSum, angle: Angle },
    /// `exp(−i·angle·G/2)` with `G` the excitation generator.
    FermionicExcitation { excitation: Excitation, angle: Angle },
    /// `exp(−i·angle·P₀)` with `P₀` the excitation's nullspace projector.
    NullspacePhase { excitation: Excitation, angle: f64 },
}

impl Gate {
    /// Validated rotation gate.
    pub fn rotation(generator: PauliSum, angle: Angle) -> Result<Gate> {
        if !generator.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        if !generator.strings_commute() {
            return Err(Error::NonCommutingGenerator);
        }
        Ok(Gate::PauliRotation {
            generator: generator.hermitized()?,
            angle,
        })
    }

    pub fn excitation(excitation: Excitation, angle: Angle) -> Gate {
        Gate::FermionicExcitation { excitation, angle }
    }

    pub fn angle(&self) -> Option<&Angle> {
        match self {
            Gate::PauliRotation { angle, .. } | Gate::FermionicExcitation { angle, .. } => {
                Some(angle)
            }
            _ => None,
        }
    }

    pub fn with_angle(&self, new: Angle) -> Gate {
        match self {
            Gate::PauliRotation { generator, .. } => Gate::PauliRotation {
                generator: generator.clone(),
                angle: new,
            },
            Gate::FermionicExcitation { excitation, .. } => Gate::FermionicExcitation {
                excitation: excitation.clone(),
                angle: new,
            },
            other => other.clone(),
        }
    }

    pub fn max_qubit(&self) -> Option<usize> {
        match self {
            Gate::BasisFlip(q) => Some(*q),
            Gate::PauliRotation { generator, .. } => generator.max_qubit(),
            Gate::FermionicExcitation { excitation, .. }
            | Gate::NullspacePhase { excitation, .. } => Some(excitation.max_index()),
        }
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::BasisFlip(q) => Gate::BasisFlip(*q),
            Gate::PauliRotation { generator, angle } => Gate::PauliRotation {
                generator: generator.clone(),
                angle: angle.negated(),
            },
            Gate::FermionicExcitation { excitation, angle } => Gate::FermionicExcitation {
                excitation: excitation.clone(),
                angle: angle.negated(),
            },
            Gate::NullspacePhase { excitation, angle } => Gate::NullspacePhase {
                excitation: excitation.clone(),
                angle: -angle,
            },
        }
    }

    pub fn bound(&self, values: &Values) -> Result<Gate> {
        Ok(match self.angle() {
            Some(a) => self.with_angle(a.bound(values)?),
            None => self.clone(),
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flat = |e: &Excitation| {
            e.flat()
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            Gate::BasisFlip(q) => write!(f, "X {q}"),
            Gate::PauliRotation { generator, angle } => {
                write!(f, "ROT {angle}")?;
                for (k, (s, c)) in generator.iter().enumerate() {
                    if k > 0 {
                        write!(f, " |")?;
                    }
                    write!(f, " {:?}", c.re)?;
                    for (q, a) in s.factors() {
                        write!(f, " {}{}", a.symbol(), q)?;
                    }
                }
                Ok(())
            }
            Gate::FermionicExcitation { excitation, angle } => {
                write!(f, "FERM {angle} {}", flat(excitation))
            }
            Gate::NullspacePhase { excitation, angle } => {
                write!(f, "NULLPHASE {angle:?} {}", flat(excitation))
            }
        }
    }
}

/// Ordered gate list over a fixed register, with a registry of the named
/// parameters its gates reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    parameters: Vec<String>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            parameters: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Named parameters in order of first use.
    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn has_parameter(&self, name: &str) -> bool {
        self.parameters.iter().any(|p| p == name)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(q) = gate.max_qubit() {
            if q >= self.n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    size: self.n_qubits,
                });
            }
        }
        if let Some(name) = gate.angle().and_then(Angle::name) {
            if !self.has_parameter(name) {
                self.parameters.push(name.to_string());
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn x(mut self, qubit: usize) -> Result<Self> {
        self.push(Gate::BasisFlip(qubit))?;
        Ok(self)
    }

    pub fn ferm(mut self, excitation: Excitation, angle: Angle) -> Result<Self> {
        self.push(Gate::excitation(excitation, angle))?;
        Ok(self)
    }

    pub fn rot(mut self, generator: PauliSum, angle: Angle) -> Result<Self> {
        self.push(Gate::rotation(generator, angle)?)?;
        Ok(self)
    }

    pub fn null_phase(mut self, excitation: Excitation, angle: f64) -> Result<Self> {
        self.push(Gate::NullspacePhase { excitation, angle })?;
        Ok(self)
    }

    /// Appends all gates of `other`.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitCountMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        let mut c = self.clone();
        for g in &other.gates {
            c.push(g.clone())?;
        }
        Ok(c)
    }

    /// Reversed gate order with negated angles.
    pub fn adjoint(&self) -> Circuit {
        let mut c = Circuit::new(self.n_qubits);
        for g in self.gates.iter().rev() {
            c.push(g.adjoint()).expect("same register");
        }
        c
    }

    /// Replaces every named angle by its value.
    pub fn bind(&self, values: &Values) -> Result<Circuit> {
        let gates = self
            .gates
            .iter()
            .map(|g| g.bound(values))
            .collect::<Result<Vec<_>>>()?;
        Circuit::from_gates(self.n_qubits, gates)
    }

    /// Copy with the gate at `position` replaced by `replacement` (possibly several gates).
    pub fn splice(&self, position: usize, replacement: Vec<Gate>) -> Result<Circuit> {
        if position >= self.gates.len() {
            return Err(Error::GatePosition(position));
        }
        let mut gates = self.gates.clone();
        gates.splice(position..=position, replacement);
        let mut c = Circuit::from_gates(self.n_qubits, gates)?;
        // Keep the registry stable even if the spliced gate was the only user.
        for p in &self.parameters {
            if !c.has_parameter(p) {
                c.parameters.push(p.clone());
            }
        }
        Ok(c)
    }

    /// Positions of gates whose angle depends on `name`.
    pub fn positions_of(&self, name: &str) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| g.angle().and_then(Angle::name) == Some(name))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the line format (`X`, `ROT`, `FERM`, `NULLPHASE`). Blank lines
    /// and `#` comments are ignored.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Circuit> {
        let mut c = Circuit::new(n_qubits);
        for (k, raw) in text.lines().enumerate() {
            let lineno = k + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let gate = parse_gate(line, lineno)?;
            c.push(gate).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
        }
        Ok(c)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_gate(line: &str, lineno: usize) -> Result<Gate> {
    let err = |msg: String| Error::Parse { line: lineno, msg };
    let mut tokens = line.split_whitespace();
    let op = tokens.next().unwrap_or_default();
    let angle = |tokens: &mut std::str::SplitWhitespace| -> Result<Angle> {
        let tok = tokens
            .next()
            .ok_or_else(|| err(format!("`{op}` needs an angle")))?;
        Angle::parse(tok).ok_or_else(|| err(format!("invalid angle `{tok}`")))
    };
    let indices = |tokens: std::str::SplitWhitespace| -> Result<Excitation> {
        let idx = tokens
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| err(format!("invalid orbital index `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Excitation::from_flat(&idx).map_err(|e| err(e.to_string()))
    };
    match op {
        "X" => {
            let tok = tokens.next().ok_or_else(|| err("`X` needs a qubit".into()))?;
            let q = tok
                .parse::<usize>()
                .map_err(|_| err(format!("invalid qubit `{tok}`")))?;
            if tokens.next().is_some() {
                return Err(err("trailing tokens after `X <q>`".into()));
            }
            Ok(Gate::BasisFlip(q))
        }
        "FERM" => {
            let a = angle(&mut tokens)?;
            Ok(Gate::excitation(indices(tokens)?, a))
        }
        "NULLPHASE" => {
            let a = match angle(&mut tokens)? {
                Angle::Fixed(v) => v,
                _ => return Err(err("NULLPHASE takes a fixed angle".into())),
            };
            Ok(Gate::NullspacePhase {
                excitation: indices(tokens)?,
                angle: a,
            })
        }
        "ROT" => {
            let a = angle(&mut tokens)?;
            let rest: Vec<&str> = tokens.collect();
            let rest = rest.join(" ");
            let mut terms = Vec::new();
            for chunk in rest.split('|') {
                let chunk = chunk.trim();
                let (coef, strings) = chunk.split_once(' ').unwrap_or((chunk, ""));
                let (s, c) = parse_term_line(&format!("{coef} 0 {strings}"), lineno)?;
                terms.push((s, c));
            }
            Gate::rotation(PauliSum::from_terms(terms), a).map_err(|e| err(e.to_string()))
        }
        other => Err(err(format!("unknown gate `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;

    #[test]
    fn angle_tokens() {
        assert_eq!(Angle::parse("0.5"), Some(Angle::Fixed(0.5)));
        assert_eq!(Angle::parse("theta"), Some(Angle::param("theta")));
        assert_eq!(
            Angle::parse("-t1"),
            Some(Angle::Param {
                name: "t1".into(),
                scale: -1.0,
                offset: 0.0
            })
        );
        assert_eq!(
            Angle::parse("2*a+0.5"),
            Some(Angle::Param {
                name: "a".into(),
                scale: 2.0,
                offset: 0.5
            })
        );
        assert_eq!(Angle::parse("1x"), None);
        for a in [
            Angle::param("theta"),
            Angle::Fixed(-1.25),
            Angle::param("a").shifted(-1.5707963267948966).negated(),
        ] {
            assert_eq!(Angle::parse(&a.to_string()), Some(a));
        }
    }

    #[test]
    fn parse_and_print() {
        let text = "# H2 ansatz\nX 0\nX 1\nFERM theta 0 2 1 3\nNULLPHASE 0.7853981633974483 0 2\nROT 0.3 0.5 Z0 Z1 | -0.25 X2\n";
        let c = Circuit::parse(text, 4).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.parameters(), ["theta"]);
        let again = Circuit::parse(&c.to_text(), 4).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = Circuit::parse("X 0\nFERM t 0 2 1\n", 4).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = Circuit::parse("X 9\n", 4).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = Circuit::parse("ROT t 1 X0 | 1 Z0\n", 1).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = Circuit::parse("CNOT 0 1\n", 2).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn adjoint_reverses_and_negates() {
        let e = Excitation::single(0, 1).unwrap();
        let c = Circuit::new(2)
            .x(0)
            .unwrap()
            .ferm(e.clone(), Angle::param("a"))
            .unwrap()
            .rot(PauliSum::single(1.0, 1, Axis::Z), Angle::Fixed(0.3))
            .unwrap();
        let adj = c.adjoint();
        assert_eq!(adj.gates()[0], Gate::rotation(PauliSum::single(1.0, 1, Axis::Z), Angle::Fixed(-0.3)).unwrap());
        assert_eq!(adj.gates()[1].angle().unwrap().scale(), -1.0);
        assert_eq!(adj.gates()[2], Gate::BasisFlip(0));
        assert_eq!(adj.adjoint(), c);
    }

    #[test]
    fn rotation_validation() {
        let bad = PauliSum::parse("1 0 X0\n1 0 Z0\n").unwrap();
        assert_eq!(Gate::rotation(bad, Angle::Fixed(0.1)), Err(Error::NonCommutingGenerator));
        let nh = PauliSum::parse("1 1 X0\n").unwrap();
        assert_eq!(Gate::rotation(nh, Angle::Fixed(0.1)), Err(Error::NonHermitian));
    }

    #[test]
    fn unassigned_parameter() {
        let a = Angle::param("t");
        assert_eq!(a.value(&Values::new()), Err(Error::UnassignedParameter("t".into())));
    }
}
