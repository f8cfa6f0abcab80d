use crate::{Error, Result};

/// Uniformly sampled multi-channel series. Sample `i` is at
/// `t0 + i / sample_rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalFrame {
    pub sample_rate: f64,
    pub t0: f64,
    channels: Vec<(String, Vec<f64>)>,
}

impl SignalFrame {
    pub fn new(sample_rate: f64, t0: f64) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        Ok(Self {
            sample_rate,
            t0,
            channels: Vec::new(),
        })
    }

    /// Adds a channel; its length must match the existing ones. Replaces a
    /// channel of the same name.
    pub fn with_channel(mut self, name: &str, data: Vec<f64>) -> Result<Self> {
        self.set_channel(name, data)?;
        Ok(self)
    }

    pub fn set_channel(&mut self, name: &str, data: Vec<f64>) -> Result<()> {
        let others = self.channels.iter().find(|(n, _)| n != name);
        if let Some((other, d)) = others {
            if d.len() != data.len() {
                return Err(Error::DimensionMismatch(format!(
                    "channel `{name}` has {} samples, `{other}` has {}",
                    data.len(),
                    d.len()
                )));
            }
        }
        match self.channels.iter_mut().find(|(n, _)| n == name) {
            Some((_, d)) => *d = data,
            None => self.channels.push((name.to_string(), data)),
        }
        Ok(())
    }

    pub fn channel(&self, name: &str) -> Result<&[f64]> {
        self.channels
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d.as_slice())
            .ok_or_else(|| Error::UnknownChannel(name.to_string()))
    }

    pub fn has_channel(&self, name: &str) -> bool {
        self.channels.iter().any(|(n, _)| n == name)
    }

    pub fn channel_names(&self) -> impl Iterator<Item = &str> {
        self.channels.iter().map(|(n, _)| n.as_str())
    }

    pub fn channels(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.channels
            .iter()
            .map(|(n, d)| (n.as_str(), d.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.channels.first().map_or(0, |(_, d)| d.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.sample_rate
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }
}
