//! CSV tables: one row per dimension, residual and verdict.

use std::io::Write;

use qtwist_core::report::Report;

pub fn write_csv(reports: &[Report], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["report", "kind", "key", "value"])?;
    for r in reports {
        for (k, v) in &r.dims {
            w.write_record([r.name.as_str(), "dim", k, &v.to_string()])?;
        }
        for (k, v) in &r.residuals {
            w.write_record([r.name.as_str(), "residual", k, &format!("{v:e}")])?;
        }
        for (k, v) in &r.verdicts {
            w.write_record([r.name.as_str(), "verdict", k, &v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qtwist_core::matspan::Tolerance;

    #[test]
    fn rows_per_entry() {
        let mut r = Report::new("t", serde_json::json!({}), Tolerance::default());
        r.dim("dim", 4).residual("x", 0.5).verdict("ok", true);
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "report,kind,key,value\nt,dim,dim,4\nt,residual,x,5e-1\nt,verdict,ok,true\n"
        );
    }
}
