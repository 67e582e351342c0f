use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use super::sweep::{ResultRow, Scheme};
use crate::error::{usage, Error, Result};

pub const CSV_HEADER: &str = "scheme,n_t,snr_db,secrecy_bits,user_bits,eve_bits,std_error,trials,flags";

/// Formats with nine significant digits, plain decimal where the exponent
/// is moderate and scientific otherwise, trailing zeros trimmed. Locale
/// independent.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..=15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Rounds to the value [`fmt_sig9`] writes.
pub fn quantize_sig9(x: f64) -> f64 {
    fmt_sig9(x).parse().expect("fmt_sig9 output parses")
}

/// Writes rows as CSV to any writer.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        w.write_record([
            r.scheme.tag().to_string(),
            r.n_t.to_string(),
            fmt_sig9(r.snr_db),
            fmt_sig9(r.secrecy_bits),
            fmt_sig9(r.user_bits),
            fmt_sig9(r.eve_bits),
            fmt_sig9(r.std_error),
            r.trials.to_string(),
            r.flags.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the sweep table to `path`.
pub fn emit_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if rows.is_empty() {
        return Err(usage("no rows to write"));
    }
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(rows, std::io::BufWriter::new(file)).map_err(|e| Error::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Parses a table written by [`write_csv`].
pub fn parse_csv<R: Read>(input: R) -> std::result::Result<Vec<ResultRow>, String> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
    let mut records = reader.records();
    let header = records.next().ok_or("empty file")?.map_err(|e| e.to_string())?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(format!("unexpected header, expected `{CSV_HEADER}`"));
    }
    let mut rows = Vec::new();
    for (line, rec) in records.enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let line = line + 2;
        let field = |i: usize| rec.get(i).ok_or_else(|| format!("line {line}: missing column {i}"));
        let num = |i: usize| -> std::result::Result<f64, String> {
            field(i)?.parse().map_err(|e| format!("line {line}: column {i}: {e}"))
        };
        let int = |i: usize| -> std::result::Result<usize, String> {
            field(i)?.parse().map_err(|e| format!("line {line}: column {i}: {e}"))
        };
        rows.push(ResultRow {
            scheme: Scheme::from_tag(field(0)?).ok_or_else(|| format!("line {line}: unknown scheme"))?,
            n_t: int(1)?,
            snr_db: num(2)?,
            secrecy_bits: num(3)?,
            user_bits: num(4)?,
            eve_bits: num(5)?,
            std_error: num(6)?,
            trials: int(7)?,
            flags: field(8)?.to_string(),
        });
    }
    Ok(rows)
}

/// Reads a table from `path`.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(file).map_err(|message| Error::Csv {
        path: path.to_path_buf(),
        message,
    })
}

/// Self-contained gnuplot script drawing `secrecy_bits` against `snr_db`,
/// one curve per scheme and array size, with the data inlined.
pub fn plot_script(rows: &[ResultRow], image_name: &str) -> String {
    let mut curves: BTreeMap<(Scheme, usize), Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        curves.entry((r.scheme, r.n_t)).or_default().push((r.snr_db, r.secrecy_bits));
    }
    let mut s = String::new();
    s.push_str("# Ergodic secrecy capacity versus P_T/sigma^2.\n");
    s.push_str("set terminal pngcairo size 900,600\n");
    s.push_str(&format!("set output '{image_name}'\n"));
    s.push_str("set xlabel 'P_T/{/Symbol s}^2 (dB)'\n");
    s.push_str("set ylabel 'Ergodic secrecy capacity (bits/channel use)'\n");
    s.push_str("set key top left\nset grid\n\n");
    let mut plots = Vec::new();
    for ((scheme, n_t), mut points) in curves {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let block = format!("${}_nt{}", scheme.tag(), n_t);
        s.push_str(&format!("{block} << EOD\n"));
        for (x, y) in points {
            s.push_str(&format!("{} {}\n", fmt_sig9(x), fmt_sig9(y)));
        }
        s.push_str("EOD\n\n");
        plots.push(format!(
            "{block} using 1:2 with linespoints title '{} (N_t={n_t})'",
            scheme.tag().replace('_', "\\_")
        ));
    }
    s.push_str("plot ");
    s.push_str(&plots.join(", \\\n     "));
    s.push('\n');
    s
}

/// Writes [`plot_script`] to `path`; the image lands next to it as `<stem>.png`.
pub fn emit_plot_script(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if rows.is_empty() {
        return Err(usage("no rows to plot"));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("secrecy");
    std::fs::write(path, plot_script(rows, &format!("{stem}.png"))).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(scheme: Scheme, snr: f64, sec: f64) -> ResultRow {
        ResultRow {
            scheme,
            n_t: 100,
            snr_db: snr,
            secrecy_bits: quantize_sig9(sec),
            user_bits: quantize_sig9(sec + 1.0 / 3.0),
            eve_bits: quantize_sig9(1.0 / 3.0),
            std_error: quantize_sig9(0.0123456789123),
            trials: 1000,
            flags: "low_h0_rate=0.001;cancel_power=12.5".into(),
        }
    }

    #[test]
    fn header_is_exact() {
        let mut buf = Vec::new();
        write_csv(&[row(Scheme::Ce, 0.0, 1.0)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "scheme,n_t,snr_db,secrecy_bits,user_bits,eve_bits,std_error,trials,flags"
        );
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![row(Scheme::Mf, -10.0, 0.0), row(Scheme::CeScheme2, 40.0, 17.123456789123)];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert_eq!(parse_csv(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn empty_rows_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(emit_csv(&[], dir.path().join("a.csv")), Err(Error::Usage(_))));
        assert!(emit_plot_script(&[], dir.path().join("a.gp")).is_err());
    }

    #[test]
    fn io_errors_carry_path() {
        let err = emit_csv(&[row(Scheme::Ce, 0.0, 1.0)], "/nonexistent/dir/out.csv").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(14.5), "14.5");
        assert_eq!(fmt_sig9(-10.0), "-10");
        assert_eq!(fmt_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig9(123456789.4), "123456789");
        assert_eq!(fmt_sig9(9.9999999999), "10");
        assert_eq!(fmt_sig9(1.5e-9), "1.5e-9");
        assert_eq!(fmt_sig9(2.0e20), "2e20");
    }

    #[test]
    fn plot_script_is_idempotent_and_complete() {
        let rows = vec![row(Scheme::Mf, 0.0, 1.0), row(Scheme::Mf, 10.0, 2.0), row(Scheme::CeScheme2, 0.0, 3.0)];
        let a = plot_script(&rows, "x.png");
        assert_eq!(a, plot_script(&rows, "x.png"));
        assert!(a.contains("$mf_nt100 << EOD"));
        assert!(a.contains("$ce_scheme2_nt100 << EOD"));
        assert!(a.contains("plot "));
        assert_eq!(a.matches("with linespoints").count(), 2);
    }

    proptest::proptest! {
        #[test]
        fn sig9_is_stable(x in proptest::num::f64::NORMAL) {
            let q = quantize_sig9(x);
            proptest::prop_assert_eq!(fmt_sig9(q), fmt_sig9(x));
            proptest::prop_assert_eq!(quantize_sig9(q), q);
            proptest::prop_assert!(((q - x) / x).abs() <= 5.1e-9);
        }
    }
}
