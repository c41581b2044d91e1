use std::fmt;

use serde::{Deserialize, Serialize};

use super::TopoError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Diffeotype {
    S2xS2,
    /// `ℂP² # ℓ ℂP̄²`
    Cp2Blowup(u8),
}

impl Diffeotype {
    pub fn degree(self) -> i64 {
        match self {
            Diffeotype::S2xS2 => 8,
            Diffeotype::Cp2Blowup(l) => 9 - l as i64,
        }
    }

    /// ASCII spelling used in CSV output.
    pub fn ascii(self) -> String {
        match self {
            Diffeotype::S2xS2 => "S2xS2".into(),
            Diffeotype::Cp2Blowup(0) => "CP2".into(),
            Diffeotype::Cp2Blowup(l) => format!("CP2#{l}-CP2"),
        }
    }
}

impl fmt::Display for Diffeotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diffeotype::S2xS2 => f.write_str("S²×S²"),
            Diffeotype::Cp2Blowup(0) => f.write_str("ℂP²"),
            Diffeotype::Cp2Blowup(1) => f.write_str("ℂP²#ℂP̄²"),
            Diffeotype::Cp2Blowup(l) => write!(f, "ℂP²#{l}ℂP̄²"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelPezzoReport {
    pub diffeotype: Diffeotype,
    /// Other Del Pezzo types with the same `(χ, τ)`; only `(4, 0)` has one.
    pub alternatives: Vec<Diffeotype>,
    pub b_plus: i64,
    pub b_minus: i64,
    pub degree: i64,
}

/// Del Pezzo diffeotype with Euler characteristic `χ` and signature `τ`.
///
/// `(4, 0)` is reported as `S²×S²` with `ℂP²#ℂP̄²` as an alternative, since
/// `χ` and `τ` do not separate them.
pub fn del_pezzo_recognition(euler: i64, signature: i64) -> Result<DelPezzoReport, TopoError> {
    let err = || TopoError::NotDelPezzo { euler, signature };
    if (euler - 2 + signature) % 2 != 0 {
        return Err(err());
    }
    let b_plus = (euler - 2 + signature) / 2;
    let b_minus = (euler - 2 - signature) / 2;
    if b_plus != 1 || !(0..=8).contains(&b_minus) {
        return Err(err());
    }
    let blowup = Diffeotype::Cp2Blowup(b_minus as u8);
    let (diffeotype, alternatives) =
        if b_minus == 1 { (Diffeotype::S2xS2, vec![blowup]) } else { (blowup, Vec::new()) };
    Ok(DelPezzoReport { diffeotype, alternatives, b_plus, b_minus, degree: 2 * euler + 3 * signature })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognition_examples() {
        let r = del_pezzo_recognition(8, -4).unwrap();
        assert_eq!(r.diffeotype, Diffeotype::Cp2Blowup(5));
        assert_eq!(r.diffeotype.to_string(), "ℂP²#5ℂP̄²");
        let r = del_pezzo_recognition(4, 0).unwrap();
        assert_eq!(r.diffeotype, Diffeotype::S2xS2);
        assert_eq!(r.alternatives, vec![Diffeotype::Cp2Blowup(1)]);
        assert!(matches!(del_pezzo_recognition(12, -8), Err(TopoError::NotDelPezzo { .. })));
        assert!(del_pezzo_recognition(5, 0).is_err());
    }

    #[test]
    fn full_table() {
        for l in 0..=8i64 {
            let r = del_pezzo_recognition(3 + l, 1 - l).unwrap();
            assert_eq!(r.b_plus, 1);
            assert_eq!(r.b_minus, l);
            assert_eq!(r.degree, 9 - l);
            if l != 1 {
                assert_eq!(r.diffeotype, Diffeotype::Cp2Blowup(l as u8));
            }
            assert_eq!(r.diffeotype.degree(), r.degree);
        }
    }
}
