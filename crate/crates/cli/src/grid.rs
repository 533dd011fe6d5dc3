//! Parse sweep grid specifications of the form
//! `d=start:end:count,m=start:end:count,g=start:end:count`.

pub struct GridSpec {
    pub d: Vec<f64>,
    pub m: Vec<f64>,
    pub g: Vec<f64>,
}

fn parse_value(s: &str, allow_inf: bool) -> Result<f64, String> {
    if allow_inf && (s == "inf" || s == "+inf") {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>()
        .map_err(|_| format!("bad grid number `{s}`"))
        .and_then(|x| {
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("grid value `{s}` must be finite here"))
            }
        })
}

fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    (0..count)
        .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
        .collect()
}

fn parse_axis(part: &str, allow_inf: bool) -> Result<(String, Vec<f64>), String> {
    let (name, range) = part
        .split_once('=')
        .ok_or_else(|| format!("grid component `{part}` must look like name=start:end:count"))?;
    let pieces: Vec<&str> = range.split(':').collect();
    if pieces.len() != 3 {
        return Err(format!("grid range `{range}` must be start:end:count"));
    }
    let start = parse_value(pieces[0], allow_inf)?;
    let end = parse_value(pieces[1], allow_inf)?;
    let count: usize = pieces[2]
        .parse()
        .map_err(|_| format!("bad grid count `{}`", pieces[2]))?;
    if count == 0 {
        return Err("grid count must be >= 1".to_string());
    }
    if count > 1 && (start.is_infinite() || end.is_infinite()) {
        return Err("infinite endpoints need count = 1".to_string());
    }
    Ok((name.trim().to_string(), linspace(start, end, count)))
}

pub fn parse(spec: &str) -> Result<GridSpec, String> {
    let mut d: Option<Vec<f64>> = None;
    let mut m: Option<Vec<f64>> = None;
    let mut g: Option<Vec<f64>> = None;
    for part in spec.split(',') {
        let allow_inf = part.trim_start().starts_with("g=");
        let (name, values) = parse_axis(part.trim(), allow_inf)?;
        let slot = match name.as_str() {
            "d" => &mut d,
            "m" => &mut m,
            "g" => &mut g,
            other => return Err(format!("unknown grid axis `{other}`")),
        };
        if slot.is_some() {
            return Err(format!("grid axis `{name}` given twice"));
        }
        *slot = Some(values);
    }
    let (d, m, g) = match (d, m, g) {
        (Some(d), Some(m), Some(g)) => (d, m, g),
        _ => return Err("grid needs all three axes: d, m, g".to_string()),
    };
    if d.iter().any(|&x| x < 1.0) {
        return Err("thermal parameter d must be >= 1".to_string());
    }
    if m.iter().any(|&x| x < 1.0) {
        return Err("squeeze parameter m must be >= 1".to_string());
    }
    if g.iter().any(|&x| x.is_nan() || x <= 0.0) {
        return Err("noise parameter g must be > 0".to_string());
    }
    Ok(GridSpec { d, m, g })
}
