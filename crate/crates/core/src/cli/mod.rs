//! Command-line front end: descriptors in, CSV/JSON reports out.

pub mod commands;
pub mod descriptor;
pub mod verify;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::disk::C64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 1;
/// Side of the polar image grid emitted by `eval` with a radius.
pub const DEFAULT_IMAGE_N: usize = 101;

/// `count` points uniformly distributed (by area) in `|z| ≤ radius`.
pub fn probe_points(seed: u64, count: usize, radius: f64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// Number formatting shared by all reports: 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// CSV text with a version/seed comment, optional `key=value` comments
/// and a column header.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(seed: u64, notes: &[(&str, String)], columns: &[&str]) -> Self {
        let mut text = format!("# smirnov {VERSION} seed={seed}\n");
        for (k, v) in notes {
            text.push_str(&format!("# {k}={v}\n"));
        }
        text.push_str(&columns.join(","));
        text.push('\n');
        Csv {
            text,
            columns: columns.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.columns);
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_points_are_reproducible() {
        let a = probe_points(7, 50, 0.9);
        assert_eq!(a, probe_points(7, 50, 0.9));
        assert_ne!(a, probe_points(8, 50, 0.9));
        assert!(a.iter().all(|z| z.norm() <= 0.9));
    }

    #[test]
    fn formatting() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(f64::NAN), "NaN");
        let mut c = Csv::new(3, &[("mode", "x".into())], &["a", "b"]);
        c.row(&[num(1.0), "ok".into()]);
        assert_eq!(c.finish(), "# smirnov 0.1.0 seed=3\n# mode=x\na,b\n1.0000000000000000e0,ok\n");
    }
}
