use std::fmt;

use crate::point::PayoffPoint;

/// Fixed six-decimal formatting with negative zero printed as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(6);
        let s = format!("{:.*}", prec, self.0);
        match s.strip_prefix('-') {
            Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => f.write_str(rest),
            _ => f.write_str(&s),
        }
    }
}

pub(crate) fn pt(p: PayoffPoint) -> String {
    format!("({}, {})", Num(p.p1), Num(p.p2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_zero() {
        assert_eq!(Num(-0.0).to_string(), "0.000000");
        assert_eq!(Num(-1e-9).to_string(), "0.000000");
        assert_eq!(Num(-0.5).to_string(), "-0.500000");
        assert_eq!(format!("{:.2}", Num(-0.001)), "0.00");
    }
}
