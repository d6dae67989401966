//! Report rendering. One renderer per output format with stable field
//! ordering; floats are printed with 12 significant digits everywhere so
//! reruns of a seeded campaign are byte-identical.

use std::fmt::Write as _;

use tailbound_core::canonical::{BoundReport, NvSolution};
use tailbound_core::montecarlo::CampaignResult;
use tailbound_core::norms::NormEstimate;
use tailbound_core::orlicz::ValidationReport;

use crate::args::Format;

/// 12-significant-digit rendering, fixed-point where the exponent allows it,
/// trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return String::from("0");
    }
    if x.is_nan() {
        return String::from("NaN");
    }
    if x.is_infinite() {
        return String::from(if x > 0.0 { "inf" } else { "-inf" });
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        let s = format!("{:.11e}", x);
        trim_exponential(&s)
    } else {
        let decimals = (11 - exp).max(0) as usize;
        trim_fixed(&format!("{:.*}", decimals, x))
    }
}

fn trim_fixed(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

fn trim_exponential(s: &str) -> String {
    match s.split_once('e') {
        Some((mantissa, exp)) => format!("{}e{exp}", trim_fixed(mantissa)),
        None => s.to_string(),
    }
}

fn json_num(x: f64) -> String {
    if x.is_finite() {
        fmt_sig(x)
    } else {
        String::from("null")
    }
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A field of a flat report.
#[derive(Debug, Clone)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    NumList(Vec<f64>),
}

impl Value {
    fn json(&self) -> String {
        match self {
            Value::Num(x) => json_num(*x),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => json_str(s),
            Value::NumList(xs) => {
                let body: Vec<String> = xs.iter().map(|&x| json_num(x)).collect();
                format!("[{}]", body.join(","))
            }
        }
    }

    fn flat(&self) -> String {
        match self {
            Value::Num(x) => fmt_sig(*x),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::NumList(xs) => xs
                .iter()
                .map(|&x| fmt_sig(x))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }
}

/// A flat ordered field/value report, the common shape of the calculator
/// outputs.
#[derive(Debug, Clone, Default)]
pub struct Fields(pub Vec<(String, Value)>);

impl Fields {
    pub fn new() -> Self {
        Fields(Vec::new())
    }

    pub fn num(mut self, name: &str, x: f64) -> Self {
        self.0.push((name.to_string(), Value::Num(x)));
        self
    }

    pub fn int(mut self, name: &str, n: u64) -> Self {
        self.0.push((name.to_string(), Value::Int(n)));
        self
    }

    pub fn boolean(mut self, name: &str, b: bool) -> Self {
        self.0.push((name.to_string(), Value::Bool(b)));
        self
    }

    pub fn text(mut self, name: &str, s: &str) -> Self {
        self.0.push((name.to_string(), Value::Text(s.to_string())));
        self
    }

    pub fn list(mut self, name: &str, xs: &[f64]) -> Self {
        self.0.push((name.to_string(), Value::NumList(xs.to_vec())));
        self
    }
}

/// Anything the CLI can print in the three formats.
pub trait Report {
    fn to_json(&self) -> String;
    fn to_csv(&self) -> String;
    fn to_table(&self) -> String;
}

pub fn emit_report(report: &dyn Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Table => report.to_table(),
    }
}

impl Report for Fields {
    fn to_json(&self) -> String {
        let body: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| format!("{}:{}", json_str(k), v.json()))
            .collect();
        format!("{{{}}}", body.join(","))
    }

    fn to_csv(&self) -> String {
        let mut out = String::from("field,value\n");
        for (k, v) in &self.0 {
            let _ = writeln!(out, "{},{}", csv_field(k), csv_field(&v.flat()));
        }
        out
    }

    fn to_table(&self) -> String {
        let width = self.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.0 {
            let _ = writeln!(out, "{k:width$}  {}", v.flat());
        }
        out
    }
}

impl Report for BoundReport {
    fn to_json(&self) -> String {
        let constants: Vec<String> = self
            .constants
            .iter()
            .map(|(k, v)| format!("{}:{}", json_str(k), json_num(*v)))
            .collect();
        format!(
            "{{\"threshold\":{},\"probability_bound\":{},\"constants\":{{{}}},\"regime\":{}}}",
            json_num(self.threshold),
            json_num(self.probability_bound),
            constants.join(","),
            json_str(&regime_name(self)),
        )
    }

    fn to_csv(&self) -> String {
        let mut f = Fields::new()
            .num("threshold", self.threshold)
            .num("probability_bound", self.probability_bound);
        for (k, v) in &self.constants {
            f = f.num(k, *v);
        }
        f.text("regime", &regime_name(self)).to_csv()
    }

    fn to_table(&self) -> String {
        let mut f = Fields::new()
            .num("threshold", self.threshold)
            .num("probability_bound", self.probability_bound);
        for (k, v) in &self.constants {
            f = f.num(k, *v);
        }
        f.text("regime", &regime_name(self)).to_table()
    }
}

fn regime_name(report: &BoundReport) -> String {
    use tailbound_core::canonical::BoundRegime;
    String::from(match report.regime {
        BoundRegime::General => "general",
        BoundRegime::IidOrlicz => "iid-orlicz",
        BoundRegime::IidQuadratic => "iid-quadratic",
        BoundRegime::MinOfBoth => "min-of-both",
    })
}

impl Report for NvSolution {
    fn to_json(&self) -> String {
        let maximizer: Vec<String> = self.maximizer.iter().map(|&b| json_num(b)).collect();
        format!(
            "{{\"value\":{},\"maximizer\":[{}],\"multiplier\":{},\"active\":{},\"v\":{},\"fallback\":{}}}",
            json_num(self.value),
            maximizer.join(","),
            self.multiplier.map_or(String::from("null"), json_num),
            self.active,
            json_num(self.v),
            self.fallback,
        )
    }

    fn to_csv(&self) -> String {
        self.fields().to_csv()
    }

    fn to_table(&self) -> String {
        self.fields().to_table()
    }
}

trait NvFields {
    fn fields(&self) -> Fields;
}

impl NvFields for NvSolution {
    fn fields(&self) -> Fields {
        let mut f = Fields::new()
            .num("value", self.value)
            .list("maximizer", &self.maximizer);
        f = match self.multiplier {
            Some(mu) => f.num("multiplier", mu),
            None => f.text("multiplier", "none"),
        };
        f.boolean("active", self.active)
            .num("v", self.v)
            .boolean("fallback", self.fallback)
    }
}

impl Report for NormEstimate {
    fn to_json(&self) -> String {
        let method = format!("{:?}", self.method).to_lowercase();
        let range = match self.search_range {
            Some((lo, hi)) => format!("[{},{}]", json_num(lo), json_num(hi)),
            None => String::from("null"),
        };
        let caveat = self
            .caveat
            .as_deref()
            .map_or(String::from("null"), json_str);
        format!(
            "{{\"value\":{},\"method\":{},\"search_range\":{range},\"caveat\":{caveat}}}",
            json_num(self.value),
            json_str(&method),
        )
    }

    fn to_csv(&self) -> String {
        self.norm_fields().to_csv()
    }

    fn to_table(&self) -> String {
        self.norm_fields().to_table()
    }
}

trait NormFields {
    fn norm_fields(&self) -> Fields;
}

impl NormFields for NormEstimate {
    fn norm_fields(&self) -> Fields {
        let mut f = Fields::new()
            .num("value", self.value)
            .text("method", &format!("{:?}", self.method).to_lowercase());
        if let Some((lo, hi)) = self.search_range {
            f = f.list("search_range", &[lo, hi]);
        }
        if let Some(c) = &self.caveat {
            f = f.text("caveat", c);
        }
        f
    }
}

impl Report for ValidationReport {
    fn to_json(&self) -> String {
        let checks: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                format!(
                    "{{\"property\":{},\"pass\":{},\"witness\":{}}}",
                    json_str(&c.property),
                    c.pass,
                    c.witness.as_deref().map_or(String::from("null"), json_str),
                )
            })
            .collect();
        format!(
            "{{\"function\":{},\"all_pass\":{},\"largest_c\":{},\"checks\":[{}]}}",
            json_str(&self.function),
            self.all_pass(),
            self.largest_c.map_or(String::from("null"), json_num),
            checks.join(","),
        )
    }

    fn to_csv(&self) -> String {
        let mut out = String::from("property,pass,witness\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{}",
                csv_field(&c.property),
                c.pass,
                csv_field(c.witness.as_deref().unwrap_or("")),
            );
        }
        out
    }

    fn to_table(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.property.len())
            .max()
            .unwrap_or(0);
        let mut out = format!("function: {}\n", self.function);
        if let Some(c) = self.largest_c {
            let _ = writeln!(out, "largest admissible c: {}", fmt_sig(c));
        }
        for c in &self.checks {
            let verdict = if c.pass { "pass" } else { "FAIL" };
            let _ = write!(out, "{:width$}  {verdict}", c.property);
            if let Some(w) = &c.witness {
                let _ = write!(out, "  ({w})");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "overall: {}",
            if self.all_pass() { "pass" } else { "FAIL" }
        );
        out
    }
}

impl Report for CampaignResult {
    fn to_json(&self) -> String {
        let points: Vec<String> = self
            .points
            .iter()
            .map(|p| {
                let params: Vec<String> = p
                    .params
                    .iter()
                    .map(|(k, v)| format!("{}:{}", json_str(k), json_num(*v)))
                    .collect();
                format!(
                    "{{\"label\":{},\"params\":{{{}}},\"threshold\":{},\"bound\":{},\
                     \"empirical\":{},\"ci_low\":{},\"ci_high\":{},\"dominated\":{},\"p_value\":{}}}",
                    json_str(&p.label),
                    params.join(","),
                    json_num(p.threshold),
                    json_num(p.bound),
                    json_num(p.empirical),
                    json_num(p.ci_low),
                    json_num(p.ci_high),
                    p.dominated,
                    p.p_value.map_or(String::from("null"), json_num),
                )
            })
            .collect();
        let constants: Vec<String> = self
            .constants
            .iter()
            .map(|(k, v)| format!("{}:{}", json_str(k), json_num(*v)))
            .collect();
        format!(
            "{{\"points\":[{}],\"summary\":{{\"points\":{},\"violations\":{},\
             \"worst_margin\":{},\"all_dominated\":{}}},\"provenance\":{{\"seed\":{},\
             \"stream\":{},\"config_hash\":{}}},\"constants\":{{{}}}}}",
            points.join(","),
            self.summary.points,
            self.summary.violations,
            json_num(self.summary.worst_margin),
            self.summary.all_dominated,
            self.provenance.seed,
            self.provenance.stream,
            self.provenance.config_hash,
            constants.join(","),
        )
    }

    fn to_csv(&self) -> String {
        let mut out =
            String::from("label,threshold,bound,empirical,ci_low,ci_high,dominated,p_value\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                csv_field(&p.label),
                fmt_sig(p.threshold),
                fmt_sig(p.bound),
                fmt_sig(p.empirical),
                fmt_sig(p.ci_low),
                fmt_sig(p.ci_high),
                p.dominated,
                p.p_value.map_or(String::new(), fmt_sig),
            );
        }
        out
    }

    fn to_table(&self) -> String {
        let mut rows: Vec<[String; 8]> = Vec::with_capacity(self.points.len() + 1);
        rows.push([
            "label".into(),
            "threshold".into(),
            "bound".into(),
            "empirical".into(),
            "ci_low".into(),
            "ci_high".into(),
            "verdict".into(),
            "p_value".into(),
        ]);
        for p in &self.points {
            rows.push([
                p.label.clone(),
                fmt_sig(p.threshold),
                fmt_sig(p.bound),
                fmt_sig(p.empirical),
                fmt_sig(p.ci_low),
                fmt_sig(p.ci_high),
                if p.dominated { "dominated".into() } else { "VIOLATED".into() },
                p.p_value.map_or(String::from("-"), fmt_sig),
            ]);
        }
        let mut widths = [0usize; 8];
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  "));
        }
        let _ = writeln!(
            out,
            "\npoints: {}  violations: {}  worst margin: {}  all dominated: {}",
            self.summary.points,
            self.summary.violations,
            fmt_sig(self.summary.worst_margin),
            self.summary.all_dominated,
        );
        for (k, v) in &self.constants {
            let _ = writeln!(out, "constant {k} = {}", fmt_sig(*v));
        }
        let _ = writeln!(
            out,
            "seed: {}  stream: {}  config hash: {:016x}",
            self.provenance.seed, self.provenance.stream, self.provenance.config_hash,
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digit_formatting() {
        assert_eq!(fmt_sig(10.0), "10");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(1e15), "1e15");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig(123456789.0), "123456789");
        // 12 significant digits survive a round trip to within 1e-11 relative
        for &x in &[core::f64::consts::PI, 2.0_f64.sqrt() * 1e-3, 88123.456789] {
            let back: f64 = fmt_sig(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11);
        }
    }

    #[test]
    fn fields_render_in_all_formats() {
        let f = Fields::new()
            .num("value", 10.0)
            .text("regime", "general")
            .boolean("ok", true);
        assert_eq!(f.to_json(), "{\"value\":10,\"regime\":\"general\",\"ok\":true}");
        assert!(f.to_csv().starts_with("field,value\n"));
        assert!(f.to_table().contains("value"));
    }

    #[test]
    fn csv_escapes_commas() {
        let f = Fields::new().text("note", "a,b");
        assert!(f.to_csv().contains("\"a,b\""));
    }

    #[test]
    fn empty_campaign_csv_is_header_only() {
        let result = CampaignResult {
            points: vec![],
            summary: tailbound_core::montecarlo::CampaignSummary {
                points: 0,
                violations: 0,
                worst_margin: 0.0,
                all_dominated: true,
            },
            provenance: tailbound_core::montecarlo::Provenance {
                seed: 0,
                stream: 0,
                config_hash: 0,
            },
            constants: Default::default(),
        };
        assert_eq!(
            result.to_csv(),
            "label,threshold,bound,empirical,ci_low,ci_high,dominated,p_value\n"
        );
    }
}
