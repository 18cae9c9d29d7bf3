use serde::{Deserialize, Serialize};

/// A real number stored as sign and natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedLog {
    pub sign: i8,
    pub log_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };

    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog {
                sign: if x > 0.0 { 1 } else { -1 },
                log_abs: x.abs().ln(),
            }
        }
    }

    /// exp(log_abs) with the sign; overflows to ±∞ beyond f64 range.
    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.sign as f64 * self.log_abs.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn neg(self) -> Self {
        SignedLog {
            sign: -self.sign,
            ..self
        }
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.sign * o.sign, self.log_abs + o.log_abs)
    }

    /// Multiply by e^{l}.
    pub fn scale_log(self, l: f64) -> Self {
        Self::new(self.sign, self.log_abs + l)
    }

    pub fn add(self, o: Self) -> Self {
        if self.sign == 0 {
            return o;
        }
        if o.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_abs >= o.log_abs {
            (self, o)
        } else {
            (o, self)
        };
        let r = (small.log_abs - big.log_abs).exp();
        if big.sign == small.sign {
            Self::new(big.sign, big.log_abs + r.ln_1p())
        } else if r == 1.0 {
            Self::ZERO
        } else {
            Self::new(big.sign, big.log_abs + (-r).ln_1p())
        }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }
}
