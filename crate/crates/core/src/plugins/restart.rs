use std::str::FromStr;

/// Coin counts between restarts.
#[derive(Clone, Debug, PartialEq)]
pub enum RestartSchedule {
    /// Explicit intervals; no restart after the last one.
    List(Vec<usize>),
    /// `base, base·factor, base·factor², …`
    Geometric { base: usize, factor: f64 },
    /// `unit` times the Luby sequence `1, 1, 2, 1, 1, 2, 4, …`
    Luby { unit: usize },
}

impl RestartSchedule {
    pub fn intervals(&self) -> Box<dyn Iterator<Item = usize>> {
        match self {
            RestartSchedule::List(v) => Box::new(v.clone().into_iter()),
            RestartSchedule::Geometric { base, factor } => {
                let (base, factor) = (*base as f64, *factor);
                Box::new((0..).map(move |i| (base * factor.powi(i)).ceil() as usize))
            }
            RestartSchedule::Luby { unit } => {
                let unit = *unit;
                Box::new((1..).map(move |i| unit * luby(i)))
            }
        }
    }
}

/// The `i`-th term (from 1) of the Luby sequence.
pub fn luby(i: u64) -> usize {
    let mut i = i;
    loop {
        let mut k = 1u32;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if i == (1u64 << k) - 1 {
            return 1usize << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

impl FromStr for RestartSchedule {
    type Err = String;

    /// `10,20,40`, `geom:BASE:FACTOR` or `luby:UNIT`.
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad restart interval `{x}`: {e}"));
        if let Some(rest) = s.strip_prefix("geom:") {
            let (b, f) = rest.split_once(':').ok_or("expected geom:BASE:FACTOR")?;
            let factor: f64 = f.parse().map_err(|e| format!("bad factor `{f}`: {e}"))?;
            if factor < 1.0 {
                return Err("the geometric factor must be at least 1".into());
            }
            return Ok(RestartSchedule::Geometric { base: num(b)?.max(1), factor });
        }
        if let Some(u) = s.strip_prefix("luby:") {
            return Ok(RestartSchedule::Luby { unit: num(u)?.max(1) });
        }
        let v = s.split(',').filter(|x| !x.trim().is_empty()).map(num).collect::<Result<Vec<_>, _>>()?;
        Ok(RestartSchedule::List(v))
    }
}
