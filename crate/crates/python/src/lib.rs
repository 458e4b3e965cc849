//! Python bindings. Bit vectors cross the boundary as strings of `0`/`1`,
//! payloads as Python ints.

use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use vlc_beacon::coding::{self, PolarCodeConfig as CoreCode, RllScheme};
use vlc_beacon::datapath::{self, ClockConfig, SimConfig, SimState};
use vlc_beacon::firmware;
use vlc_beacon::{BitBlock, Error, LineCodedFrame};

create_exception!(vlc_beacon, LineCodeViolation, PyValueError);
create_exception!(vlc_beacon, InvalidAddress, PyIndexError);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::LineCodeViolation { .. } => LineCodeViolation::new_err(err.to_string()),
        Error::InvalidAddress { .. } => InvalidAddress::new_err(err.to_string()),
        Error::OutOfRange { .. } => PyIndexError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn bits(s: &str) -> PyResult<BitBlock> {
    BitBlock::from_bit_str(s).map_err(to_py)
}

fn scheme(name: &str) -> PyResult<RllScheme> {
    name.parse().map_err(to_py)
}

#[pyclass(name = "PolarCode", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolarCode {
    inner: CoreCode,
}

#[pymethods]
impl PyPolarCode {
    /// Designed frozen set for an (N, K) code, or an explicit one when `frozen` is given.
    #[new]
    #[pyo3(signature = (cl, ml=None, erasure=0.5, frozen=None))]
    fn new(cl: usize, ml: Option<usize>, erasure: f64, frozen: Option<Vec<usize>>) -> PyResult<Self> {
        let inner = match (frozen, ml) {
            (Some(f), _) => CoreCode::with_codeword_len(cl, f),
            (None, Some(ml)) => CoreCode::designed(cl, ml, erasure),
            (None, None) => return Err(PyValueError::new_err("give ml or frozen")),
        }
        .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn cl(&self) -> usize {
        self.inner.codeword_len()
    }

    #[getter]
    fn ml(&self) -> usize {
        self.inner.info_len()
    }

    #[getter]
    fn frozen(&self) -> Vec<usize> {
        self.inner.frozen().to_vec()
    }

    fn encode(&self, message: &str) -> PyResult<String> {
        let cw = coding::polar_encode(&bits(message)?, &self.inner).map_err(to_py)?;
        Ok(cw.to_bit_string())
    }

    fn extract(&self, codeword: &str) -> PyResult<String> {
        let m = coding::polar_extract(&bits(codeword)?, &self.inner).map_err(to_py)?;
        Ok(m.to_bit_string())
    }

    fn __repr__(&self) -> String {
        format!("PolarCode(cl={}, ml={})", self.cl(), self.ml())
    }
}

#[pyfunction]
#[pyo3(signature = (cl, ml, erasure=0.5))]
fn design_frozen_set(cl: usize, ml: usize, erasure: f64) -> PyResult<Vec<usize>> {
    let code = CoreCode::designed(cl, ml, erasure).map_err(to_py)?;
    Ok(code.frozen().to_vec())
}

#[pyfunction]
fn polar_transform(u: &str) -> PyResult<String> {
    Ok(coding::polar_transform(&bits(u)?).map_err(to_py)?.to_bit_string())
}

#[pyfunction]
fn manchester_encode(codeword: &str) -> PyResult<String> {
    let f = coding::manchester_encode(&bits(codeword)?).map_err(to_py)?;
    Ok(f.bits().to_bit_string())
}

#[pyfunction]
fn manchester_decode(frame: &str) -> PyResult<String> {
    let f = LineCodedFrame::new(RllScheme::Manchester, bits(frame)?);
    Ok(coding::manchester_decode(&f).map_err(to_py)?.to_bit_string())
}

#[pyfunction]
fn four_b_six_b_encode(codeword: &str) -> PyResult<String> {
    let f = coding::four_b_six_b_encode(&bits(codeword)?).map_err(to_py)?;
    Ok(f.bits().to_bit_string())
}

#[pyfunction]
fn four_b_six_b_decode(frame: &str) -> PyResult<String> {
    let f = LineCodedFrame::new(RllScheme::FourBSixB, bits(frame)?);
    Ok(coding::four_b_six_b_decode(&f).map_err(to_py)?.to_bit_string())
}

/// Message bits to line-coded frame bits.
#[pyfunction]
#[pyo3(signature = (message, code, rll="manchester"))]
fn transmit(message: &str, code: &PyPolarCode, rll: &str) -> PyResult<String> {
    let frame = coding::transmit_pipeline(&bits(message)?, &code.inner, scheme(rll)?).map_err(to_py)?;
    Ok(frame.bits().to_bit_string())
}

#[pyfunction]
#[pyo3(signature = (frame, code, rll="manchester"))]
fn receive(frame: &str, code: &PyPolarCode, rll: &str) -> PyResult<String> {
    let f = LineCodedFrame::new(scheme(rll)?, bits(frame)?);
    Ok(coding::receive_pipeline(&f, &code.inner).map_err(to_py)?.to_bit_string())
}

#[pyfunction]
fn report_throughput(code: &PyPolarCode, latency: u32, fmax_hz: f64) -> PyResult<f64> {
    datapath::report_throughput(&code.inner, latency, fmax_hz).map_err(to_py)
}

/// `(array_bytes, total)` for one transmitter.
#[pyfunction]
#[pyo3(signature = (ml, rll="manchester", overhead=0))]
fn estimate_footprint(ml: usize, rll: &str, overhead: usize) -> PyResult<(usize, usize)> {
    let r = firmware::estimate_footprint(ml, 2 * ml, scheme(rll)?, overhead).map_err(to_py)?;
    Ok((r.array_bytes, r.total))
}

#[pyclass(name = "Simulator")]
struct PySimulator {
    state: SimState,
}

#[pymethods]
impl PySimulator {
    #[new]
    #[pyo3(signature = (code, rll="manchester", front_ends=100, latency=14, fifo_depth=128, sys_hz=50_000_000, sr_hz=100_000, overlap=false))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        code: &PyPolarCode,
        rll: &str,
        front_ends: usize,
        latency: u32,
        fifo_depth: usize,
        sys_hz: u64,
        sr_hz: u64,
        overlap: bool,
    ) -> PyResult<Self> {
        let mut config = SimConfig::new(code.inner.clone(), scheme(rll)?);
        config.front_ends = front_ends;
        config.latency = latency;
        config.fifo_depth = fifo_depth;
        config.clock = ClockConfig::new(sys_hz, sr_hz).map_err(to_py)?;
        config.overlap = overlap;
        let state = SimState::new(config).map_err(to_py)?;
        Ok(Self { state })
    }

    #[getter]
    fn cycle(&self) -> u64 {
        self.state.cycle()
    }

    #[getter]
    fn sr_ticks(&self) -> u64 {
        self.state.sr_ticks()
    }

    #[getter]
    fn frame_len(&self) -> usize {
        self.state.config().frame_len()
    }

    #[pyo3(signature = (address, payload, at_cycle=None))]
    fn enqueue(&mut self, address: usize, payload: u128, at_cycle: Option<u64>) -> PyResult<()> {
        let at = at_cycle.unwrap_or(self.state.cycle());
        self.state.enqueue(address, payload, at).map_err(to_py)
    }

    fn run_until(&mut self, cycle: u64) {
        self.state.run_until(cycle);
    }

    fn run_until_quiescent(&mut self) {
        self.state.run_until_quiescent();
    }

    /// Advances `sr_ticks` output ticks and returns what the anchor emitted.
    fn sample_waveform(&mut self, anchor: usize, sr_ticks: usize) -> PyResult<String> {
        Ok(self.state.sample_waveform(anchor, sr_ticks).map_err(to_py)?.to_bit_string())
    }

    /// Samples until the next frame start, or None while the anchor is dark.
    fn next_frame_offset(&self, anchor: usize) -> PyResult<Option<usize>> {
        Ok(self.state.front_end(anchor).map_err(to_py)?.next_frame_offset())
    }

    fn loaded_payload(&self, anchor: usize) -> Option<u128> {
        self.state.loaded_payload(anchor)
    }

    /// `(cycle, event, anchor, detail)` tuples.
    fn events(&self) -> Vec<(u64, &'static str, Option<usize>, String)> {
        self.state
            .events()
            .iter()
            .map(|e| (e.cycle, e.kind.as_str(), e.anchor, e.detail.clone()))
            .collect()
    }
}

#[pymodule]
#[pyo3(name = "vlc_beacon")]
fn vlc_beacon_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolarCode>()?;
    m.add_class::<PySimulator>()?;
    m.add("LineCodeViolation", m.py().get_type::<LineCodeViolation>())?;
    m.add("InvalidAddress", m.py().get_type::<InvalidAddress>())?;
    m.add_function(wrap_pyfunction!(design_frozen_set, m)?)?;
    m.add_function(wrap_pyfunction!(polar_transform, m)?)?;
    m.add_function(wrap_pyfunction!(manchester_encode, m)?)?;
    m.add_function(wrap_pyfunction!(manchester_decode, m)?)?;
    m.add_function(wrap_pyfunction!(four_b_six_b_encode, m)?)?;
    m.add_function(wrap_pyfunction!(four_b_six_b_decode, m)?)?;
    m.add_function(wrap_pyfunction!(transmit, m)?)?;
    m.add_function(wrap_pyfunction!(receive, m)?)?;
    m.add_function(wrap_pyfunction!(report_throughput, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_footprint, m)?)?;
    Ok(())
}
