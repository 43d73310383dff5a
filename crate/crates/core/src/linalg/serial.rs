use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{SparseMatrix, Subspace};
use crate::scalar::Scalar;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    ambient_dim: usize,
    basis: Vec<Vec<(usize, String)>>,
}

impl<S: Scalar> Serialize for SparseMatrix<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        MatrixJson {
            rows: self.nrows,
            cols: self.ncols,
            entries: self
                .triplets()
                .map(|(r, c, v)| (r, c, v.encode()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for SparseMatrix<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        let mut trip = Vec::with_capacity(raw.entries.len());
        for (r, c, v) in raw.entries {
            let x = S::decode(&v).ok_or_else(|| D::Error::custom(format!("bad scalar {v:?}")))?;
            trip.push((r, c, x));
        }
        SparseMatrix::from_triplets(raw.rows, raw.cols, trip).map_err(D::Error::custom)
    }
}

impl<S: Scalar> Serialize for Subspace<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        SubspaceJson {
            ambient_dim: self.ambient_dim,
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(|(c, x)| (*c, x.encode())).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Subspace<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = SubspaceJson::deserialize(d)?;
        let mut basis = Vec::with_capacity(raw.basis.len());
        for v in raw.basis {
            let mut out = Vec::with_capacity(v.len());
            for (c, x) in v {
                let x =
                    S::decode(&x).ok_or_else(|| D::Error::custom(format!("bad scalar {x:?}")))?;
                out.push((c, x));
            }
            basis.push(out);
        }
        Subspace::from_basis(raw.ambient_dim, basis).map_err(D::Error::custom)
    }
}
