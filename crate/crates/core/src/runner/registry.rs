use crate::{Error, Result};

/// One row of the run table: dimension, full resolution, time step and
/// coefficients (with `λ = 1`, `L = 2π`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegistryEntry {
    pub label: &'static str,
    pub dim: usize,
    pub n: usize,
    pub dt: f64,
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
}

const fn a(label: &'static str, nu: f64) -> RegistryEntry {
    RegistryEntry {
        label,
        dim: 2,
        n: 2048,
        dt: 2e-4,
        nu,
        alpha: 100.0,
        beta: 5.0,
    }
}

const fn f(label: &'static str, nu: f64) -> RegistryEntry {
    RegistryEntry {
        label,
        dim: 2,
        n: 2048,
        dt: 2e-4,
        nu,
        alpha: 1.0,
        beta: 1.0,
    }
}

const fn b(label: &'static str, nu: f64, dt: f64) -> RegistryEntry {
    RegistryEntry {
        label,
        dim: 3,
        n: 512,
        dt,
        nu,
        alpha: 10.0,
        beta: 0.1,
    }
}

pub const REGISTRY: [RegistryEntry; 18] = [
    a("A1", 0.287),
    a("A2", 0.141),
    a("A3", 0.0707),
    a("A4", 0.0353),
    a("A5", 0.0236),
    a("A6", 0.0177),
    a("A7", 0.01),
    a("A8", 0.088),
    f("F1", 0.62),
    f("F2", 0.12),
    f("F3", 0.06),
    f("F4", 0.03),
    f("F5", 0.015),
    f("F6", 0.007),
    f("F7", 0.0031),
    b("B1", 0.5, 1e-3),
    b("B2", 0.05, 1e-3),
    b("B3", 0.01, 5e-4),
];

pub fn registry(label: &str) -> Result<RegistryEntry> {
    REGISTRY
        .iter()
        .find(|e| e.label.eq_ignore_ascii_case(label.trim()))
        .copied()
        .ok_or_else(|| {
            let labels: Vec<&str> = REGISTRY.iter().map(|e| e.label).collect();
            Error::Config(format!(
                "unknown run label '{label}'; available: {}",
                labels.join(", ")
            ))
        })
}
