//! Exact per-pair figures from dense density matrices.
//!
//! Every decoy pair is modelled as dealer ⊗ transit ⊗ eavesdropper register
//! with dimensions `(2, 2, d)`. The state after the tap is built directly
//! from the Bell amplitudes and the attack's defining map, without going
//! through the session simulator, so the two can be compared.

use crate::adversary::{build_collective_unitary, Strategy};
use crate::error::{invalid, Result};
use crate::protocol::{expected_parity, BellLabel, CheckOp};
use crate::qsim::{Complex64, DensityMatrix, Matrix, ZERO};

/// Bell amplitudes `β[a][b]` with `a` the dealer's qubit.
fn bell(label: BellLabel) -> [[f64; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match label {
        BellLabel::PhiPlus => [[h, 0.0], [0.0, h]],
        BellLabel::PhiMinus => [[h, 0.0], [0.0, -h]],
        BellLabel::PsiPlus => [[0.0, h], [h, 0.0]],
        BellLabel::PsiMinus => [[0.0, h], [-h, 0.0]],
    }
}

fn outer(v: &[Complex64]) -> Matrix {
    let mut m = Matrix::zeros(v.len());
    for (r, x) in v.iter().enumerate() {
        for (c, y) in v.iter().enumerate() {
            m.set(r, c, x * y.conj());
        }
    }
    m
}

fn conjugate(u: &Matrix, rho: &Matrix) -> Matrix {
    u.mul(rho).mul(&u.adjoint())
}

/// Joint state after the tap and the eavesdropper register dimension `d`.
///
/// `ir-measure` keeps the recorded bit as a classical register; `ir-fake`
/// keeps the original qubit plus a classical copy of the forwarded bit.
pub fn tapped_pair_state(strategy: &Strategy, label: BellLabel) -> Result<(Matrix, usize)> {
    let beta = bell(label);
    let c = |x: f64| Complex64::new(x, 0.0);
    let pair: Vec<Complex64> = (0..4).map(|i| c(beta[i >> 1][i & 1])).collect();
    match strategy {
        Strategy::None | Strategy::Collusion { .. } => Ok((outer(&pair), 1)),
        Strategy::Dcna => {
            let joint: Vec<Complex64> = pair.iter().flat_map(|&x| [x, ZERO]).collect();
            let u = Matrix::identity(2).kron(&Matrix::cnot());
            Ok((conjugate(&u, &outer(&joint)), 2))
        }
        Strategy::Collective(spec) => {
            let u_e = build_collective_unitary(spec)?;
            let d = spec.ancilla_dim();
            let joint: Vec<Complex64> =
                pair.iter().flat_map(|&x| std::iter::once(x).chain(std::iter::repeat_n(ZERO, d - 1))).collect();
            let u = Matrix::identity(2).kron(&u_e);
            Ok((conjugate(&u, &outer(&joint)), d))
        }
        Strategy::IrMeasure => {
            // ρ[(a,b,e),(a',b',e')] = β(a,b)β(a',b') δ(b,b') δ(e,b) δ(e',b')
            let mut rho = Matrix::zeros(8);
            for a in 0..2 {
                for a2 in 0..2 {
                    for b in 0..2 {
                        let (r, col) = ((a * 2 + b) * 2 + b, (a2 * 2 + b) * 2 + b);
                        rho.set(r, col, c(beta[a][b] * beta[a2][b]));
                    }
                }
            }
            Ok((rho, 2))
        }
        Strategy::IrFake => {
            // Register (original e, copy f); the forwarded bit b equals f.
            // ρ[(a,b,e,b),(a',b,e',b)] = β(a,e)β(a',e') / 2
            let mut rho = Matrix::zeros(16);
            for b in 0..2 {
                for a in 0..2 {
                    for e in 0..2 {
                        for a2 in 0..2 {
                            for e2 in 0..2 {
                                let r = ((a * 2 + b) * 2 + e) * 2 + b;
                                let col = ((a2 * 2 + b) * 2 + e2) * 2 + b;
                                rho.set(r, col, c(beta[a][e] * beta[a2][e2] / 2.0));
                            }
                        }
                    }
                }
            }
            Ok((rho, 4))
        }
    }
}

fn after_check(rho: &Matrix, d: usize, op: CheckOp) -> Matrix {
    match op {
        CheckOp::Measure => rho.clone(),
        CheckOp::HadamardMeasure => {
            let u = Matrix::hadamard().kron(&Matrix::hadamard()).kron(&Matrix::identity(d));
            conjugate(&u, rho)
        }
    }
}

/// Probability that a tapped pair with this label and check breaks the
/// correlation rule.
pub fn pair_fail_probability(strategy: &Strategy, label: BellLabel, op: CheckOp) -> Result<f64> {
    let (rho, d) = tapped_pair_state(strategy, label)?;
    let rho = after_check(&rho, d, op);
    let rule = expected_parity(label, op);
    let mut fail = 0.0;
    for a in 0..2u8 {
        for b in 0..2u8 {
            if rule.holds(a, b) {
                continue;
            }
            let base = (usize::from(a) * 2 + usize::from(b)) * d;
            fail += (0..d).map(|e| rho.get(base + e, base + e).re).sum::<f64>();
        }
    }
    Ok(fail)
}

/// Probability that a tapped pair passes, averaged over uniform labels and
/// uniform check operations.
pub fn per_pair_escape(strategy: &Strategy) -> Result<f64> {
    let mut fail = 0.0;
    for label in BellLabel::ALL {
        for op in [CheckOp::Measure, CheckOp::HadamardMeasure] {
            fail += pair_fail_probability(strategy, label, op)?;
        }
    }
    Ok(1.0 - fail / 8.0)
}

/// `1 − escape^pairs` for `pairs` independently tapped decoy pairs, i.e. the
/// abort probability at threshold 0.
pub fn exact_detection_probability(strategy: &Strategy, pairs: usize) -> Result<f64> {
    let escape = per_pair_escape(strategy)?;
    Ok(1.0 - escape.powi(pairs as i32))
}

/// Probability that the failed fraction of `total` pairs exceeds
/// `threshold` when `tapped` of them are attacked and the rest are clean.
pub fn exact_abort_probability(strategy: &Strategy, tapped: usize, total: usize, threshold: f64) -> Result<f64> {
    if tapped > total || total == 0 {
        return invalid(format!("{tapped} tapped pairs out of {total}"));
    }
    let q = 1.0 - per_pair_escape(strategy)?;
    let mut coeff = 1.0f64;
    let mut p = 0.0;
    for f in 0..=tapped {
        if f > 0 {
            coeff = coeff * (tapped - f + 1) as f64 / f as f64;
        }
        if f as f64 / total as f64 > threshold {
            p += coeff * q.powi(f as i32) * (1.0 - q).powi((tapped - f) as i32);
        }
    }
    Ok(p)
}

/// `1 − (1/4)^k`, the closed form claimed for the single-CNOT attack. Kept
/// for side-by-side reporting only.
pub fn paper_detection_formula(k: usize) -> f64 {
    1.0 - 0.25f64.powi(k as i32)
}

/// The eavesdropper register conditioned on the participant's check bit,
/// as a two-element ensemble (zero-probability branches dropped).
pub fn eve_ensemble_on_decoy_bit(
    strategy: &Strategy,
    label: BellLabel,
    op: CheckOp,
) -> Result<Vec<(f64, DensityMatrix)>> {
    let (rho, d) = tapped_pair_state(strategy, label)?;
    let rho = after_check(&rho, d, op);
    let mut ensemble = Vec::new();
    for b in 0..2 {
        let mut block = Matrix::zeros(d);
        for a in 0..2 {
            let base = (a * 2 + b) * d;
            for r in 0..d {
                for c in 0..d {
                    block.set(r, c, block.get(r, c) + rho.get(base + r, base + c));
                }
            }
        }
        let p = block.trace().re;
        if p <= 1e-14 {
            continue;
        }
        for r in 0..d {
            for c in 0..d {
                block.set(r, c, block.get(r, c) / p);
            }
        }
        ensemble.push((p, DensityMatrix::new(block)?));
    }
    Ok(ensemble)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::CollectiveSpec;

    #[test]
    fn honest_pairs_never_fail() {
        for label in BellLabel::ALL {
            for op in [CheckOp::Measure, CheckOp::HadamardMeasure] {
                assert!(pair_fail_probability(&Strategy::None, label, op).unwrap().abs() < 1e-12);
            }
        }
        assert_eq!(exact_detection_probability(&Strategy::None, 10).unwrap(), 0.0);
    }

    #[test]
    fn dcna_fails_half_of_mh_checks_only() {
        for label in BellLabel::ALL {
            let m = pair_fail_probability(&Strategy::Dcna, label, CheckOp::Measure).unwrap();
            let mh = pair_fail_probability(&Strategy::Dcna, label, CheckOp::HadamardMeasure).unwrap();
            assert!(m.abs() < 1e-12, "{label}");
            assert!((mh - 0.5).abs() < 1e-12, "{label}");
        }
        assert!((per_pair_escape(&Strategy::Dcna).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(exact_detection_probability(&Strategy::Dcna, 0).unwrap(), 0.0);
        assert!((exact_detection_probability(&Strategy::Dcna, 2).unwrap() - 0.4375).abs() < 1e-12);
    }

    #[test]
    fn intercept_resend_figures() {
        assert!((per_pair_escape(&Strategy::IrMeasure).unwrap() - 0.75).abs() < 1e-12);
        for label in BellLabel::ALL {
            for op in [CheckOp::Measure, CheckOp::HadamardMeasure] {
                let p = pair_fail_probability(&Strategy::IrFake, label, op).unwrap();
                assert!((p - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn collective_corner_cases() {
        let passive = Strategy::Collective(CollectiveSpec::passive(4));
        assert!(exact_detection_probability(&passive, 16).unwrap().abs() < 1e-12);
        let cnot = Strategy::Collective(CollectiveSpec::cnot_equivalent());
        assert!((per_pair_escape(&cnot).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn threshold_zero_matches_closed_form() {
        for pairs in [1, 2, 4, 8] {
            let a = exact_abort_probability(&Strategy::Dcna, pairs, pairs, 0.0).unwrap();
            let b = exact_detection_probability(&Strategy::Dcna, pairs).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        // Two clean pairs dilute the rate: one failure in 4 is 0.25.
        let p = exact_abort_probability(&Strategy::IrFake, 2, 4, 0.25).unwrap();
        assert!((p - 0.25).abs() < 1e-12);
    }

    #[test]
    fn paper_formula_instances() {
        assert_eq!(paper_detection_formula(0), 0.0);
        assert_eq!(paper_detection_formula(1), 0.75);
        assert!((paper_detection_formula(3) - (1.0 - 1.0 / 64.0)).abs() < 1e-15);
    }
}
