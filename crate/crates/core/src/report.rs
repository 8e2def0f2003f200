//! Deterministic JSON and CSV emission for report objects.
//!
//! Reals print with 12 significant digits; identical inputs and
//! configuration produce byte-identical output (summation order inside the
//! pipeline is fixed, and field order here is static). Exact integers and
//! rationals print as decimal strings. The JSON schema is versioned through
//! the `schema_version` field.

use std::fmt::Write as _;

use crate::nevanlinna::{AbcReport, HeightBreakdown, LogderLemmaReport, PjReport, ScanSummary};
use crate::ntabc::{NtReport, NtScanOutcome, ScanHit};

pub const SCHEMA_VERSION: u32 = 1;

/// 12 significant digits; non-finite values print as JSON null.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        "null".to_string()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_real(v),
        None => "null".to_string(),
    }
}

pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

impl PjReport {
    pub fn to_json(&self, f_text: &str) -> String {
        format!(
            "{{\"schema_version\":{SCHEMA_VERSION},\"kind\":\"pj\",\"f\":\"{}\",\"rho\":{},\
             \"nonarch\":{},\"circle\":{},\"v_inf\":{},\"residual\":{},\"quad_error\":{}}}",
            json_escape(f_text),
            fmt_real(self.rho),
            fmt_real(self.nonarch),
            fmt_real(self.circle),
            fmt_real(self.v_inf),
            fmt_real(self.residual),
            fmt_real(self.quad_error),
        )
    }

    pub const CSV_HEADER: &'static str = "rho,nonarch,circle,v_inf,residual,quad_error";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            fmt_real(self.rho),
            fmt_real(self.nonarch),
            fmt_real(self.circle),
            fmt_real(self.v_inf),
            fmt_real(self.residual),
            fmt_real(self.quad_error),
        )
    }
}

fn sites_json(h: &HeightBreakdown) -> String {
    let mut out = String::from("[");
    for (i, entry) in h.sites.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let s = &entry.site;
        let _ = write!(
            out,
            "{{\"x_re\":{},\"x_im\":{},\"origin\":{},\"ord_a\":{},\"ord_b\":{},\"ord_c\":{},\
             \"degree\":{},\"height_term\":{},\"radical_term\":{}}}",
            fmt_real(s.x.re),
            fmt_real(s.x.im),
            s.is_origin,
            s.orders[0],
            s.orders[1],
            s.orders[2],
            fmt_real(s.degree),
            fmt_real(entry.height_term),
            fmt_real(entry.radical_term),
        );
    }
    out.push(']');
    out
}

impl AbcReport {
    pub fn to_json(&self, triple_text: &str) -> String {
        format!(
            "{{\"schema_version\":{SCHEMA_VERSION},\"kind\":\"abc-mero\",\"triple\":\"{}\",\
             \"rho\":{},\"h\":{},\"r_na\":{},\"r_arch\":{},\"r\":{},\"slack\":{},\
             \"quad_error\":{},\"h_nonarch\":{},\"h_arch_integral\":{},\"h_inf\":{},\
             \"arch_integral\":{},\"arch_h_inf\":{},\"sites\":{}}}",
            json_escape(triple_text),
            fmt_real(self.rho),
            fmt_real(self.height.total),
            fmt_real(self.r_na),
            fmt_real(self.arch.value),
            fmt_real(self.r),
            fmt_real(self.slack),
            fmt_real(self.quad_error),
            fmt_real(self.height.nonarch),
            fmt_real(self.height.arch_integral),
            fmt_real(self.height.h_inf),
            fmt_real(self.arch.integral),
            fmt_real(self.arch.h_inf),
            sites_json(&self.height),
        )
    }

    pub const CSV_HEADER: &'static str = "rho,h,r_na,r_arch,r,slack,quad_error";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            fmt_real(self.rho),
            fmt_real(self.height.total),
            fmt_real(self.r_na),
            fmt_real(self.arch.value),
            fmt_real(self.r),
            fmt_real(self.slack),
            fmt_real(self.quad_error),
        )
    }
}

impl ScanSummary {
    pub const CSV_HEADER: &'static str =
        "rho,h,r_na,r_arch,r,slack,bound,exceeds,masked,quad_error";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                fmt_real(row.rho),
                fmt_opt(row.h),
                fmt_opt(row.r_na),
                fmt_opt(row.r_arch),
                fmt_opt(row.r),
                fmt_opt(row.slack),
                fmt_opt(row.bound),
                row.exceeds,
                row.masked,
                fmt_opt(row.quad_error),
            );
        }
        out
    }

    pub fn to_json(&self, triple_text: &str) -> String {
        let mut rows = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                rows.push(',');
            }
            let _ = write!(
                rows,
                "{{\"rho\":{},\"h\":{},\"r_na\":{},\"r_arch\":{},\"r\":{},\"slack\":{},\
                 \"bound\":{},\"exceeds\":{},\"masked\":{},\"quad_error\":{}}}",
                fmt_real(row.rho),
                fmt_opt(row.h),
                fmt_opt(row.r_na),
                fmt_opt(row.r_arch),
                fmt_opt(row.r),
                fmt_opt(row.slack),
                fmt_opt(row.bound),
                row.exceeds,
                row.masked,
                fmt_opt(row.quad_error),
            );
        }
        rows.push(']');
        format!(
            "{{\"schema_version\":{SCHEMA_VERSION},\"kind\":\"scan\",\"triple\":\"{}\",\
             \"rho_min\":{},\"rho_max\":{},\"steps\":{},\"c_coeff\":{},\"cell_length\":{},\
             \"masked\":{},\"exceeding\":{},\"exceptional_measure\":{},\"max_quad_error\":{},\
             \"rows\":{}}}",
            json_escape(triple_text),
            fmt_real(self.rho_min),
            fmt_real(self.rho_max),
            self.steps,
            fmt_real(self.c_coeff),
            fmt_real(self.cell_length),
            self.masked_count,
            self.exceed_count,
            fmt_real(self.exceptional_measure),
            fmt_real(self.max_quad_error),
            rows,
        )
    }
}

impl LogderLemmaReport {
    pub fn to_json(&self, f_text: &str, rho: f64) -> String {
        format!(
            "{{\"schema_version\":{SCHEMA_VERSION},\"kind\":\"logder-lemma\",\"f\":\"{}\",\
             \"rho\":{},\"m\":{},\"h\":{},\"margin\":{},\"quad_error\":{}}}",
            json_escape(f_text),
            fmt_real(rho),
            fmt_real(self.m),
            fmt_real(self.h),
            fmt_real(self.margin),
            fmt_real(self.quad_error),
        )
    }
}

fn nt_report_fields(r: &NtReport) -> String {
    format!(
        "\"h\":{},\"r_na\":{},\"psi\":{},\"margin\":{},\"holds\":{},\
         \"q_paper\":{},\"q_classical\":{}",
        fmt_real(r.h),
        fmt_real(r.r_na),
        fmt_real(r.psi),
        fmt_real(r.margin),
        r.holds,
        fmt_real(r.quality_paper),
        fmt_real(r.quality_classical),
    )
}

impl NtReport {
    /// JSON for one integer triple; coordinates print as exact decimal
    /// strings.
    pub fn to_json(&self, triple: &crate::ntabc::IntTriple) -> String {
        format!(
            "{{\"schema_version\":{SCHEMA_VERSION},\"kind\":\"abc-int\",\
             \"a\":\"{}\",\"b\":\"{}\",\"c\":\"{}\",{}}}",
            triple.a,
            triple.b,
            triple.c,
            nt_report_fields(self),
        )
    }

    pub const CSV_HEADER: &'static str = "a,b,c,h,r_na,psi,margin,holds,q_paper,q_classical";

    pub fn to_csv_row(&self, triple: &crate::ntabc::IntTriple) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            triple.a,
            triple.b,
            triple.c,
            fmt_real(self.h),
            fmt_real(self.r_na),
            fmt_real(self.psi),
            fmt_real(self.margin),
            self.holds,
            fmt_real(self.quality_paper),
            fmt_real(self.quality_classical),
        )
    }
}

fn hits_json(hits: &[ScanHit]) -> String {
    let mut out = String::from("[");
    for (i, hit) in hits.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "{{\"a\":\"{}\",\"b\":\"{}\",\"c\":\"{}\",{}}}",
            hit.triple.a,
            hit.triple.b,
            hit.triple.c,
            nt_report_fields(&hit.report),
        );
    }
    out.push(']');
    out
}

impl NtScanOutcome {
    pub fn to_json(&self, max_c: u64) -> String {
        format!(
            "{{\"schema_version\":{SCHEMA_VERSION},\"kind\":\"abc-scan\",\"max_c\":{max_c},\
             \"examined\":{},\"violations\":{},\"top\":{}}}",
            self.examined,
            hits_json(&self.violations),
            hits_json(&self.top),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(NtReport::CSV_HEADER);
        out.push('\n');
        for hit in &self.top {
            out.push_str(&hit.report.to_csv_row(&hit.triple));
            out.push('\n');
        }
        out
    }
}
