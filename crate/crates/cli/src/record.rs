//! `key=value` records, one pair per line.
//!
//! Keys contain no `=`; values run to the end of the line. Rationals print
//! as `n` or `n/d` in lowest terms and intervals as `[lo,hi]`, so both parse
//! back exactly with [`Record::rational`] and [`Record::interval`].

use std::fmt;

use selfaffine_core::{parse_rational, Rational, RationalInterval};

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        debug_assert!(!key.contains('='));
        let value = value.to_string().replace('\n', " ");
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    /// Last value stored under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn rational(&self, key: &str) -> Result<Rational, CliError> {
        let text = self
            .get(key)
            .ok_or_else(|| CliError::Invalid(format!("missing key {key}")))?;
        Ok(parse_rational(key, text)?)
    }

    pub fn interval(&self, key: &str) -> Result<RationalInterval, CliError> {
        let text = self
            .get(key)
            .ok_or_else(|| CliError::Invalid(format!("missing key {key}")))?;
        Ok(RationalInterval::parse(key, text)?)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut r = Self::default();
        for line in text.lines().filter(|l| !l.is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Invalid(format!("record line without '=': {line:?}")))?;
            r.fields.push((k.to_string(), v.to_string()));
        }
        Ok(r)
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.fields {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use selfaffine_core::rational::frac;

    proptest! {
        #[test]
        fn rationals_round_trip(num in -10_000i64..10_000, den in 1i64..500, w in 0i64..50) {
            let x = frac(num, den);
            let iv = RationalInterval::new(x.clone(), &x + frac(w, den + 1)).unwrap();
            let mut r = Record::new("test");
            r.push("x", &x).push("iv", &iv);
            let back = Record::parse(&r.to_string()).unwrap();
            prop_assert_eq!(back.rational("x").unwrap(), x);
            prop_assert_eq!(back.interval("iv").unwrap(), iv);
            prop_assert_eq!(back, r);
        }
    }
}
