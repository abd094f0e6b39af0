//! JSON channel descriptions and their conversion to library types.

use qubit_channels::channel::{self, BlochParams, Channel, ChoiMatrix, KrausSet, PauliTransfer};
use qubit_channels::matrix::C64;
use qubit_channels::ComplexMatrix;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Complex number as `[re, im]`.
pub type JsonComplex = [f64; 2];
/// Row-major matrix of `[re, im]` pairs.
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelSpec {
    Kraus {
        operators: Vec<JsonMatrix>,
    },
    Choi {
        matrix: JsonMatrix,
    },
    Bloch {
        t: [f64; 3],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<[f64; 3]>,
        #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
        t_matrix: Option<[[f64; 3]; 3]>,
    },
    Named {
        name: NamedChannel,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lambda: Option<[f64; 3]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedChannel {
    Identity,
    Depolarizing,
    CompletelyDepolarizing,
    CompletelyDephasing,
    Dephasing,
    AmplitudeDamping,
    Rank2,
    Unital,
}

fn require(v: Option<f64>, field: &str, name: NamedChannel) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Input(format!("named channel {name:?} needs parameter \"{field}\"")))
}

pub fn matrix_from_json(m: &JsonMatrix) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<C64>> = m
        .iter()
        .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    Ok(ComplexMatrix::from_rows(&rows)?)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

impl ChannelSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("cannot parse channel: {e}")))
    }

    pub fn to_channel(&self) -> Result<Channel, CliError> {
        Ok(match self {
            ChannelSpec::Kraus { operators } => {
                let ops = operators.iter().map(matrix_from_json).collect::<Result<Vec<_>, _>>()?;
                Channel::Kraus(KrausSet::new(ops)?)
            }
            ChannelSpec::Choi { matrix } => Channel::Choi(ChoiMatrix::new(matrix_from_json(matrix)?)?),
            ChannelSpec::Bloch { t, lambda, t_matrix } => match (t_matrix, lambda) {
                (Some(t_matrix), _) => Channel::PauliTransfer(PauliTransfer { t: *t, t_matrix: *t_matrix }),
                (None, Some(lambda)) => Channel::Bloch(BlochParams::new(*t, *lambda)),
                (None, None) => {
                    return Err(CliError::Input("bloch channel needs \"lambda\" or \"T\"".into()))
                }
            },
            ChannelSpec::Named { name, p, alpha, beta, lambda } => {
                let name = *name;
                let k = match name {
                    NamedChannel::Identity => channel::identity(),
                    NamedChannel::Depolarizing => channel::depolarizing(require(*p, "p", name)?)?,
                    NamedChannel::CompletelyDepolarizing => channel::completely_depolarizing(),
                    NamedChannel::CompletelyDephasing => channel::completely_dephasing(),
                    NamedChannel::Dephasing => channel::dephasing(require(*alpha, "alpha", name)?),
                    NamedChannel::AmplitudeDamping => {
                        channel::amplitude_damping(require(*alpha, "alpha", name)?)
                    }
                    NamedChannel::Rank2 => channel::rank2(
                        require(*alpha, "alpha", name)?,
                        require(*beta, "beta", name)?,
                    ),
                    NamedChannel::Unital => {
                        let lambda = lambda.ok_or_else(|| {
                            CliError::Input("named channel Unital needs parameter \"lambda\"".into())
                        })?;
                        return Ok(Channel::Bloch(channel::unital(lambda)?));
                    }
                };
                Channel::Kraus(k)
            }
        })
    }

    pub fn from_kraus(k: &KrausSet) -> Self {
        ChannelSpec::Kraus { operators: k.operators().iter().map(matrix_to_json).collect() }
    }

    pub fn from_choi(c: &ChoiMatrix) -> Self {
        ChannelSpec::Choi { matrix: matrix_to_json(c.matrix()) }
    }

    /// Diagonal transfer blocks come out as `lambda`, anything else as `T`.
    pub fn from_pauli_transfer(p: &PauliTransfer, tol: f64) -> Self {
        match p.to_bloch(tol) {
            Some(b) => ChannelSpec::Bloch { t: b.t, lambda: Some(b.lambda), t_matrix: None },
            None => ChannelSpec::Bloch { t: p.t, lambda: None, t_matrix: Some(p.t_matrix) },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let k = ChannelSpec::parse(r#"{"kind":"kraus","operators":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#)
            .unwrap();
        assert!(matches!(k.to_channel().unwrap(), Channel::Kraus(_)));
        let b = ChannelSpec::parse(r#"{"kind":"bloch","t":[0,0,0],"lambda":[1,1,1]}"#).unwrap();
        assert!(matches!(b.to_channel().unwrap(), Channel::Bloch(_)));
        let t = ChannelSpec::parse(
            r#"{"kind":"bloch","t":[0,0,0],"T":[[0,1,0],[1,0,0],[0,0,-1]]}"#,
        )
        .unwrap();
        assert!(matches!(t.to_channel().unwrap(), Channel::PauliTransfer(_)));
        let n = ChannelSpec::parse(r#"{"kind":"named","name":"rank2","alpha":0.1,"beta":0.2}"#).unwrap();
        assert!(matches!(n.to_channel().unwrap(), Channel::Kraus(_)));
    }

    #[test]
    fn missing_parameters_are_input_errors() {
        let n = ChannelSpec::parse(r#"{"kind":"named","name":"depolarizing"}"#).unwrap();
        assert!(matches!(n.to_channel(), Err(CliError::Input(_))));
        let b = ChannelSpec::parse(r#"{"kind":"bloch","t":[0,0,0]}"#).unwrap();
        assert!(matches!(b.to_channel(), Err(CliError::Input(_))));
        assert!(matches!(ChannelSpec::parse(r#"{"kind":"qutrit"}"#), Err(CliError::Input(_))));
        let ragged = ChannelSpec::parse(r#"{"kind":"choi","matrix":[[[1,0]],[[0,0],[1,0]]]}"#).unwrap();
        assert!(matches!(ragged.to_channel(), Err(CliError::Input(_))));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let c = channel::rank2(0.3, 1.1).choi();
        let spec = ChannelSpec::from_choi(&c);
        let text = serde_json::to_string(&spec).unwrap();
        let back = ChannelSpec::parse(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.to_channel().unwrap().choi(), c);
    }
}
