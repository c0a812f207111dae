//! Parsing of distribution parameters from command-line strings.

use clap::ValueEnum;
use ncst::{DMatrix, DVector, NcstParams, SkewNormalParams};

use crate::failure::Failure;

/// Distribution family for the `sample` and `density` verbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    /// Skew-normal.
    Sn,
    /// Non-central skew-t (requires `--r`).
    Ncst,
}

/// Parses a comma-separated list of finite floats, e.g. `"1,2.5,-3"`.
pub fn parse_vector(name: &str, text: &str) -> Result<Vec<f64>, Failure> {
    let mut out = Vec::new();
    for (i, piece) in text.split(',').enumerate() {
        let trimmed = piece.trim();
        let value: f64 = trimmed.parse().map_err(|_| {
            Failure::invalid(format!(
                "--{name}: entry {} ({trimmed:?}) is not a number",
                i + 1
            ))
        })?;
        if !value.is_finite() {
            return Err(Failure::invalid(format!(
                "--{name}: entry {} must be finite",
                i + 1
            )));
        }
        out.push(value);
    }
    if out.is_empty() {
        return Err(Failure::invalid(format!("--{name}: empty list")));
    }
    Ok(out)
}

/// Parses a k-by-k matrix for a k-dimensional model: either the full matrix
/// in row-major order (k*k entries) or a diagonal shorthand (k entries).
pub fn parse_matrix(name: &str, text: &str, k: usize) -> Result<DMatrix<f64>, Failure> {
    let entries = parse_vector(name, text)?;
    if entries.len() == k * k {
        Ok(DMatrix::from_row_slice(k, k, &entries))
    } else if entries.len() == k {
        Ok(DMatrix::from_diagonal(&DVector::from_vec(entries)))
    } else {
        Err(Failure::invalid(format!(
            "--{name}: expected {} entries (row-major) or {k} (diagonal), got {}",
            k * k,
            entries.len()
        )))
    }
}

/// Raw textual parameters shared by the verbs that take a distribution on
/// the command line. Dimension is inferred from `--xi`.
#[derive(Debug, clap::Args)]
pub struct DistArgs {
    /// Location vector, comma-separated (sets the dimension k).
    #[arg(long)]
    pub xi: String,

    /// Scale matrix: k*k row-major entries, or k diagonal entries.
    #[arg(long)]
    pub omega: String,

    /// Shape vector (k entries); defaults to zero (no skew).
    #[arg(long)]
    pub alpha: Option<String>,

    /// Mixing degrees of freedom (required for the non-central skew-t).
    #[arg(long)]
    pub r: Option<f64>,
}

impl DistArgs {
    pub fn skew_normal(&self) -> Result<SkewNormalParams, Failure> {
        let xi = parse_vector("xi", &self.xi)?;
        let k = xi.len();
        let omega = parse_matrix("omega", &self.omega, k)?;
        let alpha = match &self.alpha {
            Some(text) => parse_vector("alpha", text)?,
            None => vec![0.0; k],
        };
        if alpha.len() != k {
            return Err(Failure::invalid(format!(
                "--alpha: expected {k} entries to match --xi, got {}",
                alpha.len()
            )));
        }
        Ok(SkewNormalParams::new(
            DVector::from_vec(xi),
            omega,
            DVector::from_vec(alpha),
        )?)
    }

    pub fn ncst(&self) -> Result<NcstParams, Failure> {
        let r = self
            .r
            .ok_or_else(|| Failure::invalid("--r is required for the non-central skew-t"))?;
        Ok(NcstParams::new(self.skew_normal()?, r)?)
    }

    /// The parameters for `kind`, erroring on a stray `--r` for the
    /// skew-normal so a misremembered flag does not silently change meaning.
    pub fn for_kind(&self, kind: DistKind) -> Result<Dist, Failure> {
        match kind {
            DistKind::Sn => {
                if self.r.is_some() {
                    return Err(Failure::invalid(
                        "--r applies to --dist ncst only; the skew-normal has no degrees of freedom",
                    ));
                }
                Ok(Dist::Sn(self.skew_normal()?))
            }
            DistKind::Ncst => Ok(Dist::Ncst(self.ncst()?)),
        }
    }

    /// JSON record of the parameters as given, for the run manifest.
    pub fn manifest_value(&self) -> serde_json::Value {
        serde_json::json!({
            "xi": self.xi,
            "omega": self.omega,
            "alpha": self.alpha,
            "r": self.r,
        })
    }
}

/// A fully built distribution for the sampling and density verbs.
pub enum Dist {
    Sn(SkewNormalParams),
    Ncst(NcstParams),
}

impl Dist {
    pub fn dim(&self) -> usize {
        match self {
            Dist::Sn(p) => p.dim(),
            Dist::Ncst(p) => p.dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_parse_with_whitespace() {
        assert_eq!(
            parse_vector("xi", "1, 2 ,-3.5").unwrap(),
            vec![1.0, 2.0, -3.5]
        );
    }

    #[test]
    fn bad_entries_name_the_flag_and_position() {
        let err = parse_vector("alpha", "1,x,3").unwrap_err();
        assert_eq!(err.code, crate::failure::EXIT_INVALID);
        assert!(err.message.contains("--alpha"), "{}", err.message);
        assert!(err.message.contains("entry 2"), "{}", err.message);
    }

    #[test]
    fn matrices_accept_diagonal_shorthand() {
        let m = parse_matrix("omega", "4,1", 2).unwrap();
        assert_eq!(m[(0, 0)], 4.0);
        assert_eq!(m[(1, 1)], 1.0);
        assert_eq!(m[(0, 1)], 0.0);
    }

    #[test]
    fn matrices_reject_wrong_entry_counts() {
        let err = parse_matrix("omega", "1,2,3", 2).unwrap_err();
        assert!(err.message.contains("expected 4"), "{}", err.message);
    }
}
