//! Python bindings for stitched polar codes.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use stitched_polar::analysis::{coset_spectrum, min_distance};
use stitched_polar::construction::{brs_code, build_family, partially_stitched, qup_code, transform_count, CodeFamily};
use stitched_polar::harness::{simulate_bler, SimConfig, StopRule};
use stitched_polar::io::{code_from_str, code_to_json, family_from_json, family_to_json};
use stitched_polar::reliability::de_bec;
use stitched_polar::{ChannelModel, CheckRule, CodeSpec, CouplingSequence, Decoder, DecoderConfig, RateMatchedCode};

fn err(e: stitched_polar::Error) -> PyErr {
    PyValueError::new_err(format!("{}: {}", e.kind(), e))
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(format!("json: {e}"))
}

fn loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Bit vectors go back to Python as int lists rather than bytes.
fn bits(v: Vec<u8>) -> Vec<u32> {
    v.into_iter().map(u32::from).collect()
}

fn sequence(n: usize, pairs: Vec<(usize, usize)>) -> PyResult<CouplingSequence> {
    CouplingSequence::from_one_based(n, &pairs).map_err(err)
}

/// A code with its rate-matching pattern. Positions are 1-based.
#[pyclass(name = "Code", module = "stitched_polar", skip_from_py_object)]
#[derive(Clone)]
struct PyCode {
    inner: RateMatchedCode,
}

#[pymethods]
impl PyCode {
    /// Stitched code from 1-based coupling pairs and information set.
    #[staticmethod]
    fn from_pairs(n: usize, pairs: Vec<(usize, usize)>, info: Vec<usize>) -> PyResult<Self> {
        let seq = sequence(n, pairs)?;
        if info.iter().any(|&i| i == 0) {
            return Err(PyValueError::new_err("information positions are 1-based"));
        }
        let spec = CodeSpec::new(seq, info.iter().map(|i| i - 1).collect(), None).map_err(err)?;
        Ok(PyCode { inner: RateMatchedCode::plain(spec) })
    }

    /// Punctured regular baseline designed at Es/N0 `design_snr` dB.
    #[staticmethod]
    #[pyo3(signature = (n, k, design_snr = 1.0))]
    fn qup(n: usize, k: usize, design_snr: f64) -> PyResult<Self> {
        let inner = qup_code(n, k, &ChannelModel::awgn_esn0_db(design_snr)).map_err(err)?;
        Ok(PyCode { inner })
    }

    /// Shortened regular baseline designed at Es/N0 `design_snr` dB.
    #[staticmethod]
    #[pyo3(signature = (n, k, design_snr = 1.0))]
    fn brs(n: usize, k: usize, design_snr: f64) -> PyResult<Self> {
        let inner = brs_code(n, k, &ChannelModel::awgn_esn0_db(design_snr)).map_err(err)?;
        Ok(PyCode { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCode { inner: code_from_str(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&code_to_json(&self.inner, None)).map_err(json_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn info(&self) -> Vec<usize> {
        self.inner.outer_info().iter().map(|i| i + 1).collect()
    }

    #[getter]
    fn pairs(&self) -> Vec<(usize, usize)> {
        self.inner.mother().sequence().to_one_based()
    }

    #[getter]
    fn transforms(&self) -> usize {
        transform_count(self.inner.mother().sequence())
    }

    fn encode(&self, message: Vec<u8>) -> PyResult<Vec<u32>> {
        self.inner.encode(&message).map(bits).map_err(err)
    }

    /// SC or SCL decoding of one channel LLR vector.
    #[pyo3(signature = (llr, list_size = 1, minsum = false))]
    fn decode<'py>(&self, py: Python<'py>, llr: Vec<f64>, list_size: usize, minsum: bool) -> PyResult<Bound<'py, PyDict>> {
        let cfg = DecoderConfig {
            list_size: list_size.max(1),
            rule: if minsum { CheckRule::MinSum } else { CheckRule::Exact },
        };
        let dec = Decoder::new(&self.inner, cfg).map_err(err)?;
        let (d, list) = py.detach(|| Ok::<_, stitched_polar::Error>((dec.decode(&llr)?, dec.decode_list(&llr)?))).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("message", bits(d.message))?;
        out.set_item("u_hat", bits(d.u_hat))?;
        out.set_item("x_hat", bits(d.x_hat))?;
        out.set_item("metric", d.metric)?;
        out.set_item("crc_ok", d.crc_ok)?;
        out.set_item("path_metrics", list.iter().map(|c| c.metric).collect::<Vec<_>>())?;
        Ok(out)
    }

    /// Monte-Carlo BLER on a channel such as "awgn:1.5" or "bec:0.5".
    #[pyo3(signature = (channel, trials, seed = 1, max_errors = None, threads = 0, list_size = 1))]
    fn simulate<'py>(
        &self,
        py: Python<'py>,
        channel: &str,
        trials: u64,
        seed: u64,
        max_errors: Option<u64>,
        threads: usize,
        list_size: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let ch = ChannelModel::parse(channel).map_err(err)?;
        let dec = DecoderConfig { list_size: list_size.max(1), ..DecoderConfig::default() };
        let stop = StopRule { max_trials: trials, max_errors, exclude: None };
        let mut cfg = SimConfig::new(ch, dec, stop, seed);
        cfg.threads = threads;
        let r = py.detach(|| simulate_bler(&self.inner, &cfg)).map_err(err)?;
        loads(py, &serde_json::to_string(&r).map_err(json_err)?)
    }

    /// Coset spectrum of the transmitted code.
    fn spectrum(&self) -> PyResult<Vec<usize>> {
        Ok(coset_spectrum(&self.inner.outer_generator()).map_err(err)?.0)
    }

    fn min_distance(&self) -> PyResult<Option<usize>> {
        let g = self.inner.info_generator();
        min_distance(&g, &(0..g.rows()).collect::<Vec<_>>()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Code(n={}, k={}, mode={})", self.inner.n(), self.inner.k(), self.inner.mode().as_str())
    }
}

/// Recursive family of short stitched codes.
#[pyclass(name = "Family", module = "stitched_polar")]
struct PyFamily {
    inner: CodeFamily,
}

#[pymethods]
impl PyFamily {
    #[staticmethod]
    #[pyo3(signature = (max_len, channel = "bec:0.5"))]
    fn build(py: Python<'_>, max_len: usize, channel: &str) -> PyResult<Self> {
        let ch = ChannelModel::parse(channel).map_err(err)?;
        let inner = py.detach(|| build_family(max_len, &ch)).map_err(err)?;
        Ok(PyFamily { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
        Ok(PyFamily { inner: family_from_json(&v).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&family_to_json(&self.inner)).map_err(json_err)
    }

    #[getter]
    fn max_len(&self) -> usize {
        self.inner.max_len()
    }

    /// Member code of length n and dimension k.
    fn code(&self, n: usize, k: usize) -> PyResult<PyCode> {
        let spec = self.inner.code(n, k).map_err(err)?.clone();
        Ok(PyCode { inner: RateMatchedCode::plain(spec) })
    }

    /// Partially stitched code with 2^s sub-blocks, designed on `design`
    /// (the family channel when omitted).
    #[pyo3(signature = (n, k, s = 6, design = None))]
    fn partially_stitched(&self, n: usize, k: usize, s: u32, design: Option<&str>) -> PyResult<PyCode> {
        let ch = match design {
            Some(d) => ChannelModel::parse(d).map_err(err)?,
            None => self.inner.channel(),
        };
        let (spec, _) = partially_stitched(n, k, s, &self.inner, &ch).map_err(err)?;
        Ok(PyCode { inner: RateMatchedCode::plain(spec) })
    }
}

/// Whether a 1-based coupling sequence passes validation.
#[pyfunction]
fn validate(n: usize, pairs: Vec<(usize, usize)>) -> PyResult<bool> {
    Ok(sequence(n, pairs)?.validate().is_valid())
}

/// Bit-channel capacities on BEC(epsilon) for a 1-based coupling sequence.
#[pyfunction]
fn capacities(n: usize, pairs: Vec<(usize, usize)>, epsilon: f64) -> PyResult<Vec<f64>> {
    let seq = sequence(n, pairs)?;
    let p = de_bec(&seq, &vec![epsilon; n]).map_err(err)?;
    Ok(p.metric.iter().map(|z| 1.0 - z).collect())
}

#[pymodule(name = "stitched_polar")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_class::<PyFamily>()?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(capacities, m)?)?;
    Ok(())
}
