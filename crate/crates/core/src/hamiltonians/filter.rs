//! Mid-spectrum selection and level-spacing statistics.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectralWindow {
    /// Keep `|E/L| < w` (strict).
    EnergyDensity(f64),
    /// Keep the middle `round(f·n)` levels (at least one) of an ascending spectrum.
    CentralFraction(f64),
}

/// Indices of the retained eigenvalues, ascending.
pub fn midspectrum_filter(eigenvalues: &[f64], n_qubits: usize, window: SpectralWindow) -> Vec<usize> {
    let n = eigenvalues.len();
    match window {
        SpectralWindow::EnergyDensity(w) => (0..n)
            .filter(|&i| (eigenvalues[i] / n_qubits as f64).abs() < w)
            .collect(),
        SpectralWindow::CentralFraction(f) => {
            if n == 0 {
                return vec![];
            }
            let count = ((f * n as f64).round() as usize).clamp(1, n);
            let start = (n - count) / 2;
            (start..start + count).collect()
        }
    }
}

/// Mean adjacent-gap ratio `⟨min(s_n, s_{n+1}) / max(s_n, s_{n+1})⟩` of an
/// ascending spectrum; pairs of vanishing gaps are skipped.
pub fn mean_gap_ratio(eigenvalues: &[f64]) -> Option<f64> {
    let gaps: Vec<f64> = eigenvalues.windows(2).map(|w| w[1] - w[0]).collect();
    let mut acc = 0.0;
    let mut count = 0usize;
    for w in gaps.windows(2) {
        let hi = w[0].max(w[1]);
        if hi > 0.0 {
            acc += w[0].min(w[1]) / hi;
            count += 1;
        }
    }
    (count > 0).then(|| acc / count as f64)
}
