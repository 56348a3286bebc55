//! JSON job schema and its validation into core types.

use logconn_core::liecore::{LieMatrix, SemisimpleData};
use logconn_core::linalg::Matrix;
use logconn_core::moduli::{Connection, Family, FiniteModel, ResidueDatum};
use logconn_core::rational::{self, Q};
use logconn_core::wpoly::CurveParams;
use serde::Deserialize;

/// A rational given as a JSON integer or a `"num/den"` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RawQ {
    Int(i64),
    Str(String),
}

impl RawQ {
    fn to_q(&self, what: &str) -> Result<Q, String> {
        match self {
            RawQ::Int(k) => Ok(Q::from_integer((*k).into())),
            RawQ::Str(s) => rational::parse(s).ok_or_else(|| format!("{what}: {s:?} is not a rational")),
        }
    }
}

fn to_qs(v: &[RawQ], what: &str) -> Result<Vec<Q>, String> {
    v.iter().map(|x| x.to_q(what)).collect()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConnection {
    pub c: Vec<RawQ>,
    pub n: Vec<RawQ>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFamily {
    pub params: Vec<String>,
    pub c: Vec<String>,
    pub n: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub p: i64,
    pub q: i64,
    pub n: usize,
    pub s: Vec<RawQ>,
    #[serde(default)]
    pub n0: Option<Vec<Vec<RawQ>>>,
    #[serde(default)]
    pub wmax: Option<i64>,
    #[serde(default)]
    pub weights: Option<Vec<i64>>,
    #[serde(default)]
    pub connection: Option<RawConnection>,
    #[serde(default)]
    pub family: Option<RawFamily>,
    #[serde(default)]
    pub gamma: Option<Vec<RawQ>>,
    #[serde(default)]
    pub max_eigen: Option<i64>,
    #[serde(default)]
    pub samples: Option<usize>,
}

/// A validated job.
pub struct Job {
    pub params: CurveParams,
    pub s: SemisimpleData,
    pub n0: Option<LieMatrix>,
    pub wmax: Option<i64>,
    pub weights: Vec<i64>,
    pub connection: Option<Connection>,
    pub family: Option<Family>,
    pub gamma: Option<Vec<Q>>,
    pub max_eigen: Option<i64>,
    pub samples: usize,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid job: {e}"))
    }

    pub fn validate(&self, wmax_flag: Option<i64>) -> Result<Job, String> {
        if self.p <= 0 || self.q <= 0 {
            return Err("p and q must be positive".into());
        }
        if gcd(self.p, self.q) != 1 {
            return Err("p,q must be coprime".into());
        }
        if self.p >= self.q {
            return Err("need p < q".into());
        }
        let params = CurveParams::new(self.p, self.q).map_err(|e| e.to_string())?;
        if self.n == 0 || self.s.len() != self.n {
            return Err(format!("s must have n = {} entries", self.n));
        }
        let s = SemisimpleData::new(to_qs(&self.s, "s")?).map_err(|e| e.to_string())?;
        let n0 = match &self.n0 {
            None => None,
            Some(rows) => {
                if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                    return Err("n0 must be an n x n matrix".into());
                }
                let rows = rows.iter().map(|r| to_qs(r, "n0")).collect::<Result<Vec<_>, _>>()?;
                let m = Matrix::from_rows(rows).map_err(|e| e.to_string())?;
                ResidueDatum::new(s.clone(), m.clone()).map_err(|e| format!("n0: {e}"))?;
                Some(m)
            }
        };
        let wmax = wmax_flag.or(self.wmax);
        if let Some(w) = wmax {
            if w < 0 {
                return Err("wmax must be nonnegative".into());
            }
        }
        let connection = match &self.connection {
            None => None,
            Some(c) => Some(Connection { c: to_qs(&c.c, "connection.c")?, n: to_qs(&c.n, "connection.n")? }),
        };
        let family = match &self.family {
            None => None,
            Some(f) => Some(parse_family(f)?),
        };
        let gamma = match &self.gamma {
            None => None,
            Some(g) => Some(to_qs(g, "gamma")?),
        };
        Ok(Job {
            params,
            s,
            n0,
            wmax,
            weights: self.weights.clone().unwrap_or_default(),
            connection,
            family,
            gamma,
            max_eigen: self.max_eigen,
            samples: self.samples.unwrap_or(8),
        })
    }
}

fn parse_family(f: &RawFamily) -> Result<Family, String> {
    let mut seen = std::collections::BTreeSet::new();
    for name in &f.params {
        if !seen.insert(name) {
            return Err(format!("family: duplicate parameter {name:?}"));
        }
    }
    let parse = |e: &String| crate::expr::parse(e, &f.params).map_err(|m| format!("family: {m}"));
    Ok(Family {
        nvars: f.params.len(),
        names: f.params.clone(),
        c: f.c.iter().map(parse).collect::<Result<_, _>>()?,
        n: f.n.iter().map(parse).collect::<Result<_, _>>()?,
    })
}

impl Job {
    pub fn model(&self) -> Result<FiniteModel, String> {
        let m = match self.wmax {
            Some(w) => FiniteModel::with_wmax(self.params, self.s.clone(), w),
            None => FiniteModel::new(self.params, self.s.clone()),
        }
        .map_err(|e| e.to_string())?;
        if let Some(c) = &self.connection {
            m.check_connection(c).map_err(|e| format!("connection: {e}"))?;
        }
        Ok(m)
    }

    pub fn connection_or_zero(&self, m: &FiniteModel) -> Connection {
        self.connection.clone().unwrap_or_else(|| m.zero_connection())
    }

    pub fn residue_datum(&self) -> ResidueDatum {
        match &self.n0 {
            Some(n0) => ResidueDatum { s: self.s.clone(), n0: n0.clone() },
            None => ResidueDatum::semisimple(self.s.clone()),
        }
    }
}
