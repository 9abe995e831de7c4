use serde::Serialize;

/// Which estimator produced a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Sync,
    Bli,
    BliRaw,
    Blisor,
    BlisorRaw,
    Rwb,
    Forest,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Sync => "sync",
            Method::Bli => "bli",
            Method::BliRaw => "bli-raw",
            Method::Blisor => "blisor",
            Method::BlisorRaw => "blisor-raw",
            Method::Rwb => "rwb",
            Method::Forest => "forest",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "exact" => Method::Exact,
            "sync" => Method::Sync,
            "bli" => Method::Bli,
            "bli-raw" => Method::BliRaw,
            "blisor" => Method::Blisor,
            "blisor-raw" => Method::BlisorRaw,
            "rwb" => Method::Rwb,
            "forest" => Method::Forest,
            other => return Err(format!("unknown method {other:?}")),
        })
    }
}

/// An equilibrium estimate together with how it was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateResult {
    #[serde(skip)]
    pub z_hat: Vec<f64>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    pub pushes: u64,
    pub touched_arcs: u64,
    pub walks: u64,
    pub samples: u64,
    /// Seconds.
    pub wall_time: f64,
}

impl EstimateResult {
    pub fn new(method: Method, z_hat: Vec<f64>) -> Self {
        Self {
            z_hat,
            method,
            epsilon: None,
            sigma: None,
            c: None,
            omega: None,
            pushes: 0,
            touched_arcs: 0,
            walks: 0,
            samples: 0,
            wall_time: 0.0,
        }
    }
}
