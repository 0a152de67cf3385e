//! JSON palette documents.
//!
//! Every field-element coordinate is serialized as an exact rational string
//! `"p/q"`; the `*_approx` fields are convenience decimals and carry no
//! authority. Lattice point coordinates are decimal integer strings.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{BaseSpec, QBeta, ZGamma};
use crate::interval::Rat;
use crate::voronoi::Protocell;

fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rat(s: &str) -> Result<Rat> {
    let parse_err = |msg: &str| Error::ParseError {
        pos: 0,
        msg: msg.to_string(),
    };
    let (n, d) = s.split_once('/').ok_or_else(|| parse_err("expected p/q"))?;
    let numer: BigInt = n.parse().map_err(|_| parse_err("bad numerator"))?;
    let denom: BigInt = d.parse().map_err(|_| parse_err("bad denominator"))?;
    if !denom.is_positive() {
        return Err(parse_err("denominator must be positive"));
    }
    Ok(Rat::new(numer, denom))
}

fn qbeta_strs(q: &QBeta) -> [String; 3] {
    [rat_str(&q.c[0]), rat_str(&q.c[1]), rat_str(&q.c[2])]
}

fn qbeta_from_strs(s: &[String; 3]) -> Result<QBeta> {
    Ok(QBeta::new(
        parse_rat(&s[0])?,
        parse_rat(&s[1])?,
        parse_rat(&s[2])?,
    ))
}

fn zgamma_strs(z: &ZGamma) -> [String; 3] {
    let k = z.key();
    [k[0].to_string(), k[1].to_string(), k[2].to_string()]
}

fn zgamma_from_strs(s: &[String; 3]) -> Result<ZGamma> {
    let parse = |t: &str| -> Result<BigInt> {
        t.parse().map_err(|_| Error::ParseError {
            pos: 0,
            msg: "bad integer coordinate".to_string(),
        })
    };
    Ok(ZGamma::from_bigints([
        parse(&s[0])?,
        parse(&s[1])?,
        parse(&s[2])?,
    ]))
}

#[derive(Serialize, Deserialize)]
pub struct BaseDoc {
    pub a: i64,
    pub b: i64,
}

#[derive(Serialize, Deserialize)]
pub struct WindowDoc {
    pub c: [String; 3],
    pub c_approx: f64,
}

#[derive(Serialize, Deserialize)]
pub struct CellDoc {
    pub neighbors: Vec<[String; 3]>,
    pub delta_sq: [String; 3],
    pub delta_sq_approx: f64,
    #[serde(rename = "Delta_sq")]
    pub big_delta_sq: [String; 3],
    #[serde(rename = "Delta_sq_approx")]
    pub big_delta_sq_approx: f64,
    pub delta_star_sq: [String; 3],
    pub delta_star_sq_approx: f64,
}

#[derive(Serialize, Deserialize)]
pub struct PaletteDoc {
    pub base: BaseDoc,
    pub window: WindowDoc,
    pub palette: Vec<CellDoc>,
}

impl PaletteDoc {
    pub fn build(base: &BaseSpec, c: &QBeta, cells: &[Protocell]) -> PaletteDoc {
        PaletteDoc {
            base: BaseDoc {
                a: base.a(),
                b: base.b(),
            },
            window: WindowDoc {
                c: qbeta_strs(c),
                c_approx: base.qbeta_f64(c),
            },
            palette: cells
                .iter()
                .map(|cell| CellDoc {
                    neighbors: cell.neighbors.iter().map(zgamma_strs).collect(),
                    delta_sq: qbeta_strs(&cell.delta_sq),
                    delta_sq_approx: base.qbeta_f64(&cell.delta_sq),
                    big_delta_sq: qbeta_strs(&cell.big_delta_sq),
                    big_delta_sq_approx: base.qbeta_f64(&cell.big_delta_sq),
                    delta_star_sq: qbeta_strs(&cell.delta_star_sq),
                    delta_star_sq_approx: base.qbeta_f64(&cell.delta_star_sq),
                })
                .collect(),
        }
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("palette document serializes")
    }

    pub fn parse(text: &str) -> Result<PaletteDoc> {
        serde_json::from_str(text).map_err(|e| Error::ParseError {
            pos: e.column(),
            msg: e.to_string(),
        })
    }

    /// Exact window endpoint.
    pub fn window_c(&self) -> Result<QBeta> {
        qbeta_from_strs(&self.window.c)
    }

    /// Canonical keys of the serialized cells: sorted neighbor triples, in
    /// document order.
    pub fn canonical_keys(&self) -> Result<Vec<Vec<[BigInt; 3]>>> {
        self.palette
            .iter()
            .map(|cell| {
                let mut keys = cell
                    .neighbors
                    .iter()
                    .map(|n| Ok(zgamma_from_strs(n)?.key()))
                    .collect::<Result<Vec<_>>>()?;
                keys.sort();
                Ok(keys)
            })
            .collect()
    }
}
