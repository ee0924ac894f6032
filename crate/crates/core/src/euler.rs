//! The global Euler–Poincaré characteristic delta
//! `chi_c(U, F_chi) - chi_c(U, Q_l) = (Sw, Sw + K^log) - sum_x r_x`
//! from user-supplied intersection numbers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EulerError {
    #[error("intersection matrix must be {n}x{n}")]
    NotSquare { n: usize },
    #[error("intersection matrix is not symmetric at ({i},{j})")]
    Asymmetric { i: usize, j: usize },
    #[error("klog has {got} entries, expected {n}")]
    KlogLength { got: usize, n: usize },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("arithmetic overflow")]
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub sw: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceConfig {
    pub components: Vec<Component>,
    pub intersections: Vec<Vec<i64>>,
    /// `(K_X^log, D_i)` for each component.
    pub klog: Vec<i64>,
    pub r_sum: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    pub sw_self: i64,
    pub sw_klog: i64,
    pub delta: i64,
}

impl SurfaceConfig {
    pub fn validate(&self) -> Result<(), EulerError> {
        let n = self.components.len();
        if self.intersections.len() != n || self.intersections.iter().any(|row| row.len() != n) {
            return Err(EulerError::NotSquare { n });
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.intersections[i][j] != self.intersections[j][i] {
                    return Err(EulerError::Asymmetric { i, j });
                }
            }
        }
        if self.klog.len() != n {
            return Err(EulerError::KlogLength { got: self.klog.len(), n });
        }
        Ok(())
    }

    /// The projective plane with boundary one line `L`: `L^2 = 1`, `(K + L, L) = -2`.
    pub fn plane_with_line(sw: u64, r_sum: u64) -> Self {
        SurfaceConfig {
            components: vec![Component { name: "L".into(), sw }],
            intersections: vec![vec![1]],
            klog: vec![-2],
            r_sum,
        }
    }

    /// The projective plane with boundary two lines: all intersections 1,
    /// `(K + L1 + L2, L_i) = -1`.
    pub fn plane_with_two_lines(sw: [u64; 2], r_sum: u64) -> Self {
        SurfaceConfig {
            components: vec![Component { name: "L1".into(), sw: sw[0] }, Component { name: "L2".into(), sw: sw[1] }],
            intersections: vec![vec![1, 1], vec![1, 1]],
            klog: vec![-1, -1],
            r_sum,
        }
    }

    /// `name` is `p2-line` or `p2-two-lines`; missing Swan values are 0.
    pub fn preset(name: &str, sw: &[u64], r_sum: u64) -> Result<Self, EulerError> {
        let at = |i: usize| sw.get(i).copied().unwrap_or(0);
        match name {
            "p2-line" => Ok(Self::plane_with_line(at(0), r_sum)),
            "p2-two-lines" => Ok(Self::plane_with_two_lines([at(0), at(1)], r_sum)),
            other => Err(EulerError::UnknownPreset(other.to_string())),
        }
    }
}

pub fn euler_delta(cfg: &SurfaceConfig) -> Result<EulerReport, EulerError> {
    cfg.validate()?;
    let sw: Vec<i64> = cfg
        .components
        .iter()
        .map(|c| i64::try_from(c.sw).map_err(|_| EulerError::Overflow))
        .collect::<Result<_, _>>()?;
    let mut sw_self: i64 = 0;
    for (i, row) in cfg.intersections.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let term = sw[i].checked_mul(sw[j]).and_then(|v| v.checked_mul(x)).ok_or(EulerError::Overflow)?;
            sw_self = sw_self.checked_add(term).ok_or(EulerError::Overflow)?;
        }
    }
    let mut sw_klog: i64 = 0;
    for (s, k) in sw.iter().zip(&cfg.klog) {
        sw_klog = s.checked_mul(*k).and_then(|v| sw_klog.checked_add(v)).ok_or(EulerError::Overflow)?;
    }
    let r = i64::try_from(cfg.r_sum).map_err(|_| EulerError::Overflow)?;
    let delta = sw_self.checked_add(sw_klog).and_then(|v| v.checked_sub(r)).ok_or(EulerError::Overflow)?;
    Ok(EulerReport { sw_self, sw_klog, delta })
}
