use std::fmt;
use std::str::FromStr;

/// A numeric flag given either as a single value or as `start:end:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Span {
    Value(f64),
    Range { start: f64, end: f64, step: f64 },
}

impl Span {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Span::Value(v) => vec![v],
            Span::Range { start, end, step } => firefront::figures::linspace((start, end, step)),
        }
    }

    pub fn is_range(&self) -> bool {
        matches!(self, Span::Range { .. })
    }

    pub fn first(&self) -> f64 {
        match *self {
            Span::Value(v) => v,
            Span::Range { start, .. } => start,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Span::Value(v) => write!(f, "{v}"),
            Span::Range { start, end, step } => write!(f, "{start}:{end}:{step}"),
        }
    }
}

impl serde::Serialize for Span {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Span::Value(v) => s.serialize_f64(*v),
            Span::Range { .. } => s.serialize_str(&self.to_string()),
        }
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("{t:?} is not a finite number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(Span::Value(num(v)?)),
            [a, b, c] => {
                let (start, end, step) = (num(a)?, num(b)?, num(c)?);
                if step <= 0.0 {
                    return Err("range step must be > 0".into());
                }
                if end < start {
                    return Err("range end must not be below its start".into());
                }
                Ok(Span::Range { start, end, step })
            }
            _ => Err(format!("expected a number or start:end:step, got {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalars_and_ranges() {
        assert_eq!("2.5".parse::<Span>().unwrap(), Span::Value(2.5));
        let r: Span = "0:30:0.5".parse().unwrap();
        assert_eq!(r.values().len(), 61);
        assert_eq!(r.to_string(), "0:30:0.5");
        assert!("0:30".parse::<Span>().is_err());
        assert!("0:30:0".parse::<Span>().is_err());
        assert!("5:1:1".parse::<Span>().is_err());
        assert!("nan".parse::<Span>().is_err());
    }
}
