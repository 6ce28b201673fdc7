use std::io::Write;

use decoh_core::InitialState;

/// Marker written for undefined measures.
pub const NA: &str = "NA";

/// 17 significant digits, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), num)
}

/// Short form of a parameter value for column tags (`nu0.01`, `a20`).
pub fn tag(x: f64) -> String {
    format!("{x}")
}

/// Parameter columns shared by the long-format tables.
pub const STATE_COLUMNS: [&str; 6] = ["state", "a", "phi", "rho", "cat_phase", "fock_m"];

pub fn state_cells(s: &InitialState) -> Vec<String> {
    let na = || NA.to_string();
    let (a, phi, rho, cat, m) = match *s {
        InitialState::Coherent { a, phi } => (num(a), num(phi), na(), na(), na()),
        InitialState::Cat { a, phi_cat } => (num(a), na(), na(), num(phi_cat), na()),
        InitialState::Squeezed { a, phi, rho } => (num(a), num(phi), num(rho), na(), na()),
        InitialState::Fock { m } => (na(), na(), na(), na(), m.to_string()),
    };
    vec![s.family().to_string(), a, phi, rho, cat, m]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for r in &self.rows {
            writeln!(w, "{}", r.join(","))?;
        }
        w.flush()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(opt(None), "NA");
        assert_eq!(tag(0.01), "0.01");
        assert_eq!(tag(10.0), "10");
    }
}
