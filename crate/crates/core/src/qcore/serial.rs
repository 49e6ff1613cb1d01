use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{OperatorMatrix, PureState, RegisterLayout, Roles, C64};
use crate::error::{bail, Error, Result};

/// JSON form of a state: layout, then amplitudes as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateRecord {
    pub layout: RegisterLayout,
    pub amplitudes: Vec<[f64; 2]>,
}

/// JSON form of an operator: layout, roles, then row-major `[re, im]` entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub layout: RegisterLayout,
    #[serde(default)]
    pub roles: Roles,
    pub entries: Vec<[f64; 2]>,
}

impl From<&PureState> for StateRecord {
    fn from(s: &PureState) -> Self {
        Self {
            layout: s.layout().clone(),
            amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl TryFrom<StateRecord> for PureState {
    type Error = Error;

    fn try_from(r: StateRecord) -> Result<Self> {
        let v = DVector::from_iterator(r.amplitudes.len(), r.amplitudes.iter().map(|p| C64::new(p[0], p[1])));
        PureState::from_vector(r.layout, v).map_err(|e| Error::Format(e.to_string()))
    }
}

impl From<&OperatorMatrix> for OperatorRecord {
    fn from(o: &OperatorMatrix) -> Self {
        let m = o.entries();
        let n = m.nrows();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        Self { layout: o.layout().clone(), roles: o.roles(), entries }
    }
}

impl TryFrom<OperatorRecord> for OperatorMatrix {
    type Error = Error;

    fn try_from(r: OperatorRecord) -> Result<Self> {
        let n = r.layout.total_dim();
        if r.entries.len() != n * n {
            bail!(Format, "expected {} entries, found {}", n * n, r.entries.len());
        }
        let m = DMatrix::from_row_iterator(n, n, r.entries.iter().map(|p| C64::new(p[0], p[1])));
        OperatorMatrix::with_roles(r.layout, m, r.roles).map_err(|e| Error::Format(e.to_string()))
    }
}

impl Serialize for PureState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = StateRecord::deserialize(d)?;
        PureState::try_from(r).map_err(serde::de::Error::custom)
    }
}

impl Serialize for OperatorMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = OperatorRecord::deserialize(d)?;
        OperatorMatrix::try_from(r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_state_on, RandomStream};

    #[test]
    fn state_round_trip() {
        let mut rng = RandomStream::new(1, 0);
        let s = haar_state_on(RegisterLayout::new([("a", 2), ("b", 3)]).unwrap(), &mut rng).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: PureState = serde_json::from_str(&json).unwrap();
        assert_eq!(back.layout(), s.layout());
        assert!((back.inner(&s).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operator_round_trip_keeps_roles() {
        let mut rng = RandomStream::new(2, 0);
        let s = haar_state_on(RegisterLayout::single("a", 3).unwrap(), &mut rng).unwrap();
        let p = s.density();
        let json = serde_json::to_string(&p).unwrap();
        let back: OperatorMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back.roles(), p.roles());
        assert!((back.entries() - p.entries()).norm() < 1e-12);
    }

    #[test]
    fn schema_shape() {
        let s = PureState::basis(RegisterLayout::single("a", 2).unwrap(), 1).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["layout"][0]["label"], "a");
        assert_eq!(v["amplitudes"][1][0], 1.0);
    }

    #[test]
    fn malformed_rejected() {
        let bad = r#"{"layout":[{"label":"a","dim":2}],"amplitudes":[[1.0,0.0],[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<PureState>(bad).is_err());
        let dup = r#"{"layout":[{"label":"a","dim":1},{"label":"a","dim":1}],"amplitudes":[[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<PureState>(dup).is_err());
    }
}
