use std::str::FromStr;

/// Inclusive grid `start:stop:step`; a bare number is a one-point grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.step == 0.0 {
            return vec![self.start];
        }
        // stop is included when within half a step
        let count = ((self.stop - self.start) / self.step + 0.5).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
        let range = match parts.as_slice() {
            [single] => {
                let v = parse(single)?;
                Range {
                    start: v,
                    stop: v,
                    step: 0.0,
                }
            }
            [a, b, c] => Range {
                start: parse(a)?,
                stop: parse(b)?,
                step: parse(c)?,
            },
            _ => return Err(format!("expected start:stop:step, got {s:?}")),
        };
        if ![range.start, range.stop, range.step].iter().all(|v| v.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if range.step < 0.0 || (range.step == 0.0 && range.start != range.stop) {
            return Err("step must be positive".into());
        }
        if range.stop < range.start {
            return Err("stop must not be below start".into());
        }
        if range.step > 0.0 && (range.stop - range.start) / range.step > 1e6 {
            return Err("range has more than a million points".into());
        }
        Ok(range)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_within_half_step() {
        let r: Range = "0.05:1.0:0.05".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 20);
        assert!((p[19] - 1.0).abs() < 1e-12);
        let r: Range = "0:1:0.3".parse().unwrap();
        assert_eq!(r.points().len(), 4);
        let r: Range = "0:1.1:0.3".parse().unwrap();
        assert_eq!(r.points().len(), 5);
    }

    #[test]
    fn single_point_and_errors() {
        assert_eq!("0.7".parse::<Range>().unwrap().points(), vec![0.7]);
        assert!("1:0:0.1".parse::<Range>().is_err());
        assert!("0:1:-0.1".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
        assert!("a:1:0.1".parse::<Range>().is_err());
        assert!("0:1:0".parse::<Range>().is_err());
    }
}
