//! CSV tables with a `#`-prefixed provenance header.

use std::fmt::{Display, Write};

pub struct Table {
    header: Vec<String>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(content: &str, columns: &[&'static str]) -> Self {
        let header = vec![format!("tool = ppwave-euler {}", env!("CARGO_PKG_VERSION")), format!("content = {content}")];
        Self { header, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Cell) -> &mut Self {
        self.header.push(format!("{key} = {}", value.cell()));
        self
    }

    /// Multi-line value, indented under `key:`.
    pub fn block(&mut self, key: &str, text: &str) -> &mut Self {
        self.header.push(format!("{key}:"));
        self.header.extend(text.lines().filter(|l| !l.trim().is_empty()).map(|l| format!("  {l}")));
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.header {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Space-separated list for header values.
pub fn list<T: Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// CSV cell text. Floats use the shortest string that parses back to the
/// same value, switching to exponent form for very small or large magnitudes.
pub trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        let a = self.abs();
        if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
            format!("{self:e}")
        } else {
            format!("{self}")
        }
    }
}

macro_rules! display_cell {
    ($($t:ty),*) => { $(impl Cell for $t { fn cell(&self) -> String { self.to_string() } })* };
}

display_cell!(i64, u64, u32, u8, usize, bool, &str, String);

impl<T: Cell> Cell for &T {
    fn cell(&self) -> String {
        (*self).cell()
    }
}

#[macro_export]
macro_rules! cells {
    ($($x:expr),* $(,)?) => { vec![$($crate::table::Cell::cell(&$x)),*] };
}
