use std::path::PathBuf;

use clap::Args;
use serde_json::Value;

use oscalg::coeffseq::{CoeffSeqSpec, FamilyId};
use oscalg::ratfun::parse_expr;
use oscalg::scalar::parse_rat;
use oscalg::{CoeffSeq, Error, Result};

/// The sequence `b_n²`, plus the family parameter when one is needed.
#[derive(Args, Clone, Debug)]
pub struct SeqArgs {
    #[command(flatten)]
    pub source: SeqSource,
    /// Gegenbauer parameter.
    #[arg(long, requires = "builtin", allow_hyphen_values = true)]
    pub alpha: Option<String>,
}

/// Exactly one way of naming `b_n²`.
#[derive(Args, Clone, Debug)]
#[group(required = true, multiple = false, id = "sequence")]
pub struct SeqSource {
    /// hermite | legendre | gegenbauer (with --alpha).
    #[arg(long)]
    pub builtin: Option<String>,
    /// Closed form in n, e.g. "(n+1)/2".
    #[arg(long)]
    pub bsq: Option<String>,
    /// Polynomial in n.
    #[arg(long)]
    pub poly: Option<String>,
    /// Exact values b_0², b_1², … separated by commas.
    #[arg(long)]
    pub table: Option<String>,
    /// JSON file with an `encoding` field.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

impl SeqArgs {
    pub fn to_spec(&self) -> Result<CoeffSeqSpec> {
        if self.alpha.is_some() && self.source.builtin.is_none() {
            return Err(Error::InvalidArgument("--alpha only applies to --builtin".into()));
        }
        if let Some(name) = &self.source.builtin {
            let alpha = self.alpha.as_deref().map(parse_rat).transpose()?;
            let fam = FamilyId::from_name(name, alpha)?;
            return Ok(CoeffSeq::Builtin(fam).to_spec());
        }
        if let Some(text) = &self.source.bsq {
            // Parse first so malformed input fails here.
            parse_expr(text)?.to_ratfun("n")?;
            return Ok(CoeffSeqSpec::ClosedForm {
                bsq: text.clone(),
                head: Vec::new(),
            });
        }
        if let Some(text) = &self.source.poly {
            return Ok(CoeffSeqSpec::PolyForm { bsq: text.clone() });
        }
        if let Some(text) = &self.source.table {
            let values = text
                .split(',')
                .map(|v| parse_rat(v).map(oscalg::scalar::RatText))
                .collect::<Result<_>>()?;
            return Ok(CoeffSeqSpec::Table { values });
        }
        if let Some(path) = &self.source.spec {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            return serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("spec: {e}")));
        }
        Err(Error::InvalidArgument("no sequence given".into()))
    }

    /// The parsed sequence, with its canonical JSON description.
    pub fn load(&self) -> Result<(CoeffSeq, Value)> {
        let spec = self.to_spec()?;
        let seq = CoeffSeq::from_spec(&spec)?;
        let canonical = serde_json::to_value(seq.to_spec()).expect("specs serialize");
        Ok((seq, canonical))
    }
}
