use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};

/// Hard cap on the total Hilbert-space dimension of any dense object.
pub const MAX_TOTAL_DIM: usize = 1 << 14;

/// One named tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of registers. The first register is the most significant
/// digit of the flat basis index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Register>", into = "Vec<Register>")]
pub struct RegisterLayout {
    registers: Vec<Register>,
    total_dim: usize,
}

impl TryFrom<Vec<Register>> for RegisterLayout {
    type Error = crate::Error;

    fn try_from(registers: Vec<Register>) -> Result<Self> {
        Self::from_registers(registers)
    }
}

impl From<RegisterLayout> for Vec<Register> {
    fn from(layout: RegisterLayout) -> Self {
        layout.registers
    }
}

impl RegisterLayout {
    pub fn new<S: Into<String>>(regs: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        Self::from_registers(
            regs.into_iter()
                .map(|(label, dim)| Register { label: label.into(), dim })
                .collect(),
        )
    }

    pub fn from_registers(registers: Vec<Register>) -> Result<Self> {
        let mut total: usize = 1;
        for (i, r) in registers.iter().enumerate() {
            if r.dim == 0 {
                bail!(Dimension, "register '{}' has dimension 0", r.label);
            }
            if registers[..i].iter().any(|o| o.label == r.label) {
                bail!(Layout, "duplicate register label '{}'", r.label);
            }
            total = match total.checked_mul(r.dim) {
                Some(t) if t <= MAX_TOTAL_DIM => t,
                _ => bail!(
                    Dimension,
                    "total dimension exceeds the cap of {MAX_TOTAL_DIM}"
                ),
            };
        }
        Ok(Self { registers, total_dim: total })
    }

    /// A single register.
    pub fn single(label: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new([(label.into(), dim)])
    }

    /// `count` registers of equal dimension labelled `{prefix}{i}`.
    pub fn uniform(prefix: &str, count: usize, dim: usize) -> Result<Self> {
        Self::new((0..count).map(|i| (format!("{prefix}{i}"), dim)))
    }

    pub fn qubits(prefix: &str, count: usize) -> Result<Self> {
        Self::uniform(prefix, count, 2)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn dims(&self) -> Vec<usize> {
        self.registers.iter().map(|r| r.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.registers.iter().map(|r| r.label.as_str()).collect()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        match self.registers.iter().position(|r| r.label == label) {
            Some(p) => Ok(p),
            None => bail!(Layout, "unknown register label '{label}'"),
        }
    }

    pub fn contains(&self, label: &str) -> bool {
        self.registers.iter().any(|r| r.label == label)
    }

    /// Positions for a list of labels, rejecting unknown or repeated labels.
    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l.as_ref())?;
            if out.contains(&p) {
                bail!(Layout, "register '{}' listed twice", l.as_ref());
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Place value of each register in the flat index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.registers.len()];
        for i in (0..self.registers.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.registers[i + 1].dim;
        }
        strides
    }

    /// Concatenation; labels must be disjoint.
    pub fn concat(&self, other: &RegisterLayout) -> Result<Self> {
        for r in &other.registers {
            if self.contains(&r.label) {
                bail!(Layout, "label collision on '{}'", r.label);
            }
        }
        let mut regs = self.registers.clone();
        regs.extend(other.registers.iter().cloned());
        Self::from_registers(regs)
    }

    /// Layout restricted to the given positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> Result<Self> {
        Self::from_registers(positions.iter().map(|&p| self.registers[p].clone()).collect())
    }

    /// Positions not listed, in layout order.
    pub fn complement(&self, positions: &[usize]) -> Vec<usize> {
        (0..self.registers.len()).filter(|p| !positions.contains(p)).collect()
    }

    pub fn dim_of(&self, positions: &[usize]) -> usize {
        positions.iter().map(|&p| self.registers[p].dim).product()
    }

    /// Offsets contributed by every joint value of the listed registers:
    /// entry `k` is the flat-index contribution when the listed registers
    /// (most-significant first) take the mixed-radix value `k`.
    pub fn offsets(&self, positions: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offs = vec![0usize];
        for &p in positions {
            let dim = self.registers[p].dim;
            let mut next = Vec::with_capacity(offs.len() * dim);
            for &o in &offs {
                for v in 0..dim {
                    next.push(o + v * strides[p]);
                }
            }
            offs = next;
        }
        offs
    }

    /// Rename registers keeping dimensions.
    pub fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.registers.len() {
            bail!(Layout, "relabel needs {} labels", self.registers.len());
        }
        Self::new(
            labels
                .iter()
                .zip(&self.registers)
                .map(|(l, r)| (l.as_ref().to_string(), r.dim)),
        )
    }

    /// Digits of a flat index, one per register.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.registers.len()];
        for (i, r) in self.registers.iter().enumerate().rev() {
            out[i] = index % r.dim;
            index /= r.dim;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.registers)
            .fold(0, |acc, (&d, r)| acc * r.dim + d)
    }
}
