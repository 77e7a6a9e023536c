//! Qubit efficiency `η = c/q` of comparable multi-party schemes, in exact
//! rational arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{invalid, Result, SqssError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProtocolId {
    Li2010,
    Li2013,
    Yang2013,
    Xie2015,
    Yu2017,
    Li2020,
    Ye2024,
    Younes2024,
    ThisWork,
}

impl ProtocolId {
    /// Row order of the comparison table.
    pub const ALL: [ProtocolId; 9] = [
        Self::Li2010,
        Self::Li2013,
        Self::Yang2013,
        Self::Xie2015,
        Self::Yu2017,
        Self::Li2020,
        Self::Ye2024,
        Self::Younes2024,
        Self::ThisWork,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Li2010 => "Li2010",
            Self::Li2013 => "Li2013",
            Self::Yang2013 => "Yang2013",
            Self::Xie2015 => "Xie2015",
            Self::Yu2017 => "Yu2017",
            Self::Li2020 => "Li2020",
            Self::Ye2024 => "Ye2024",
            Self::Younes2024 => "Younes2024",
            Self::ThisWork => "ThisWork",
        }
    }

    /// The efficiency formula as printed, in terms of `M`.
    pub fn formula(self) -> &'static str {
        match self {
            Self::Li2010 => "1/(2^M(3M+2))",
            Self::Li2013 => "1/(2^M(3M))",
            Self::Yang2013 => "1/(6M)",
            Self::Xie2015 => "1/(2^(M-1)(3M+2))",
            Self::Yu2017 => "1/(6M+4)",
            Self::Li2020 => "1/(5M)",
            Self::Ye2024 => "1/(3M+1)",
            Self::Younes2024 => "1/(3M)",
            Self::ThisWork => "1/(4M)",
        }
    }

    pub fn features(self) -> Features {
        let generate_measure_reflect = "Generate |0> or |1>; Measure in Z; Reflect";
        let (quantum_resources, abilities) = match self {
            Self::Li2010 | Self::Xie2015 | Self::Yu2017 => ("Multi-qubit entangled states", generate_measure_reflect),
            Self::Li2013 | Self::Yang2013 => ("Single qubits", generate_measure_reflect),
            Self::Li2020 => ("Bell states", generate_measure_reflect),
            Self::Ye2024 | Self::Younes2024 => {
                ("Multi-qubit entangled states; Single qubits", generate_measure_reflect)
            }
            Self::ThisWork => ("Multi-qubit entangled states; Bell states", "Measure in Z; Perform H"),
        };
        Features {
            quantum_resources,
            participant_abilities: abilities,
            mitigates_trojan_horse: matches!(self, Self::Younes2024 | Self::ThisWork),
            mitigates_dcna: self != Self::Younes2024,
            specific_secret: matches!(self, Self::Xie2015 | Self::Ye2024 | Self::Younes2024 | Self::ThisWork),
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolId {
    type Err = SqssError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| SqssError::InvalidArgument(format!("unknown protocol '{s}'")))
    }
}

/// Qualitative columns of the comparison table, transcribed as data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Features {
    pub quantum_resources: &'static str,
    pub participant_abilities: &'static str,
    pub mitigates_trojan_horse: bool,
    pub mitigates_dcna: bool,
    /// The dealer chooses the secret rather than sharing a random one.
    pub specific_secret: bool,
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return invalid(format!("efficiency needs at least 2 participants, got {m}"));
    }
    Ok(())
}

pub fn qubit_efficiency(protocol: ProtocolId, m: usize) -> Result<BigRational> {
    check_m(m)?;
    let mm = BigInt::from(m);
    let pow2 = |e: usize| BigInt::from(1) << e;
    let denominator = match protocol {
        ProtocolId::Li2010 => pow2(m) * (3 * &mm + 2),
        ProtocolId::Li2013 => pow2(m) * (3 * &mm),
        ProtocolId::Yang2013 => 6 * &mm,
        ProtocolId::Xie2015 => pow2(m - 1) * (3 * &mm + 2),
        ProtocolId::Yu2017 => 6 * &mm + 4,
        ProtocolId::Li2020 => 5 * &mm,
        ProtocolId::Ye2024 => 3 * &mm + 1,
        ProtocolId::Younes2024 => 3 * &mm,
        ProtocolId::ThisWork => 4 * &mm,
    };
    Ok(BigRational::new(BigInt::from(1), denominator))
}

/// Qubits the dealer generates: `2N` message states of `M` qubits plus
/// `K` Bell pairs per participant, i.e. `(2N + 2K)·M`.
pub fn this_work_qubit_count(secret_len: usize, decoys: usize, participants: usize) -> usize {
    (2 * secret_len + 2 * decoys) * participants
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EfficiencyRow {
    pub protocol: ProtocolId,
    pub formula: &'static str,
    #[serde(serialize_with = "serialize_ratio")]
    pub efficiency: BigRational,
    pub features: Features,
}

fn serialize_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn efficiency_table(m: usize) -> Result<Vec<EfficiencyRow>> {
    check_m(m)?;
    ProtocolId::ALL
        .into_iter()
        .map(|p| {
            Ok(EfficiencyRow { protocol: p, formula: p.formula(), efficiency: qubit_efficiency(p, m)?, features: p.features() })
        })
        .collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

pub const TABLE_COLUMNS: [&str; 8] = [
    "protocol",
    "quantum_resources",
    "participant_abilities",
    "mitigates_trojan_horse",
    "mitigates_dcna",
    "sharing_secret",
    "formula",
    "efficiency",
];

/// Cells of one row, in [`TABLE_COLUMNS`] order.
pub fn row_cells(row: &EfficiencyRow) -> [String; 8] {
    [
        row.protocol.name().to_owned(),
        row.features.quantum_resources.to_owned(),
        row.features.participant_abilities.to_owned(),
        yes_no(row.features.mitigates_trojan_horse).to_owned(),
        yes_no(row.features.mitigates_dcna).to_owned(),
        if row.features.specific_secret { "Specific" } else { "Unspecific" }.to_owned(),
        row.formula.to_owned(),
        row.efficiency.to_string(),
    ]
}

/// Aligned plain-text rendering.
pub fn render_text(rows: &[EfficiencyRow]) -> String {
    let cells: Vec<[String; 8]> = rows.iter().map(row_cells).collect();
    let widths: Vec<usize> = (0..8)
        .map(|c| cells.iter().map(|r| r[c].len()).chain([TABLE_COLUMNS[c].len()]).max().unwrap_or(0))
        .collect();
    let line = |row: Vec<&str>| -> String {
        row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_owned()
    };
    let mut out = line(TABLE_COLUMNS.to_vec());
    out.push('\n');
    for r in &cells {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn known_values() {
        assert_eq!(qubit_efficiency(ProtocolId::ThisWork, 3).unwrap(), ratio(1, 12));
        assert_eq!(qubit_efficiency(ProtocolId::Li2010, 2).unwrap(), ratio(1, 32));
        assert_eq!(qubit_efficiency(ProtocolId::Yang2013, 4).unwrap(), ratio(1, 24));
        assert_eq!(qubit_efficiency(ProtocolId::Yu2017, 5).unwrap(), ratio(1, 34));
        assert_eq!(qubit_efficiency(ProtocolId::Xie2015, 3).unwrap(), ratio(1, 44));
        assert!(qubit_efficiency(ProtocolId::ThisWork, 1).is_err());
    }

    #[test]
    fn table_for_two_participants() {
        let rows = efficiency_table(2).unwrap();
        let get = |p| rows.iter().find(|r| r.protocol == p).unwrap().efficiency.clone();
        assert_eq!(get(ProtocolId::ThisWork), ratio(1, 8));
        assert_eq!(get(ProtocolId::Younes2024), ratio(1, 6));
        assert_eq!(get(ProtocolId::Ye2024), ratio(1, 7));
        assert_eq!(rows.iter().map(|r| r.protocol).collect::<Vec<_>>(), ProtocolId::ALL);
    }

    #[test]
    fn qubit_count_matches_efficiency() {
        assert_eq!(this_work_qubit_count(4, 4, 3), 48);
        assert_eq!(this_work_qubit_count(1, 1, 2), 8);
        for m in 2..=10 {
            for n in 1..=8 {
                let q = this_work_qubit_count(n, n, m);
                assert_eq!(BigRational::new(n.into(), q.into()), qubit_efficiency(ProtocolId::ThisWork, m).unwrap());
            }
        }
    }

    #[test]
    fn this_work_decreases_in_m() {
        for m in 2..20 {
            assert!(qubit_efficiency(ProtocolId::ThisWork, m + 1).unwrap() < qubit_efficiency(ProtocolId::ThisWork, m).unwrap());
        }
    }

    #[test]
    fn efficiencies_lie_in_unit_interval() {
        for m in 2..=12 {
            for p in ProtocolId::ALL {
                let e = qubit_efficiency(p, m).unwrap();
                assert!(e > ratio(0, 1) && e < ratio(1, 1));
            }
        }
    }

    #[test]
    fn text_rendering_has_a_row_per_protocol() {
        let text = render_text(&efficiency_table(3).unwrap());
        assert_eq!(text.lines().count(), 10);
        assert!(text.lines().last().unwrap().contains("1/12"));
    }
}
