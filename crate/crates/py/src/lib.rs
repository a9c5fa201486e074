//! Python bindings. Rationals cross the boundary as `fractions.Fraction`,
//! compositions as tuples of ints, polynomials as `Polynomial` or text.

use harmsum::{
    CIndex, ClosedForm, Composition, Convention, Format, LeadingBlock, Method, Polynomial, Rational,
    SpiessKind, StructuredForm,
};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyTuple};

fn value_error(e: harmsum::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

fn fractions<'py>(py: Python<'py>, rs: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    rs.iter().map(|r| fraction(py, r)).collect()
}

/// Accepts `int`, `Fraction`, or anything with integer `numerator`/`denominator`.
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let num: BigInt = obj.getattr("numerator")?.extract()?;
    let den: BigInt = obj.getattr("denominator")?.extract()?;
    if den == BigInt::from(0) {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn to_composition(entries: Vec<i64>) -> Composition {
    Composition::new(entries)
}

fn composition_tuple<'py>(py: Python<'py>, k: &Composition) -> PyResult<Bound<'py, PyTuple>> {
    PyTuple::new(py, k.entries())
}

fn parse_enum<T: std::str::FromStr<Err = String>>(s: &str) -> PyResult<T> {
    s.parse().map_err(PyValueError::new_err)
}

/// Either a `Polynomial` or its text form.
#[derive(FromPyObject)]
enum PolyArg {
    Poly(PyPolynomial),
    Text(String),
}

impl PolyArg {
    fn into_poly(self) -> PyResult<Polynomial> {
        match self {
            PolyArg::Poly(p) => Ok(p.0),
            PolyArg::Text(s) => harmsum::parse_poly(&s).map_err(value_error),
        }
    }
}

/// Exact polynomial with rational coefficients.
#[pyclass(name = "Polynomial", module = "harmsum", from_py_object)]
#[derive(Clone)]
struct PyPolynomial(Polynomial);

#[pymethods]
impl PyPolynomial {
    /// `Polynomial("3*m^2 + m")` or `Polynomial([c0, c1, ...])`.
    #[new]
    fn new(arg: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(text) = arg.extract::<String>() {
            return harmsum::parse_poly(&text).map(PyPolynomial).map_err(value_error);
        }
        let list = arg.cast::<PyList>()?;
        let coeffs = list.iter().map(|c| to_rational(&c)).collect::<PyResult<Vec<_>>>()?;
        Ok(PyPolynomial(Polynomial::new(coeffs)))
    }

    fn coeffs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, self.0.coeffs())
    }

    #[getter]
    fn degree(&self) -> i64 {
        self.0.degree()
    }

    fn __call__<'py>(&self, py: Python<'py>, x: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.eval(&to_rational(x)?))
    }

    /// `P(x + c)`.
    fn shift(&self, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyPolynomial(self.0.shift(&to_rational(c)?)))
    }

    /// `S(n) = P(1) + … + P(n)`.
    fn discrete_sum(&self) -> Self {
        PyPolynomial(self.0.discrete_sum())
    }

    fn derivative(&self) -> Self {
        PyPolynomial(self.0.derivative())
    }

    #[pyo3(signature = (var = "n"))]
    fn latex(&self, var: &str) -> String {
        self.0.render_latex(var)
    }

    fn __str__(&self) -> String {
        self.0.render("n")
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.0.render("n"))
    }

    fn __eq__(&self, other: PolyArg) -> PyResult<bool> {
        Ok(self.0 == other.into_poly()?)
    }

    fn __add__(&self, other: PolyArg) -> PyResult<Self> {
        Ok(PyPolynomial(&self.0 + &other.into_poly()?))
    }

    fn __sub__(&self, other: PolyArg) -> PyResult<Self> {
        Ok(PyPolynomial(&self.0 - &other.into_poly()?))
    }

    fn __mul__(&self, other: PolyArg) -> PyResult<Self> {
        Ok(PyPolynomial(&self.0 * &other.into_poly()?))
    }

    fn __neg__(&self) -> Self {
        PyPolynomial(-&self.0)
    }
}

/// Finite combination of proper multiple harmonic sums with polynomial
/// coefficients in `n`.
#[pyclass(name = "ClosedForm", module = "harmsum", from_py_object)]
#[derive(Clone)]
struct PyClosedForm(ClosedForm);

#[pymethods]
impl PyClosedForm {
    /// `[(composition, Polynomial), ...]` in canonical order.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Bound<'py, PyTuple>, PyPolynomial)>> {
        self.0
            .iter()
            .map(|(k, p)| Ok((composition_tuple(py, k)?, PyPolynomial(p.clone()))))
            .collect()
    }

    fn coeff(&self, comp: Vec<i64>) -> PyPolynomial {
        PyPolynomial(self.0.coeff(&to_composition(comp)))
    }

    fn __call__<'py>(&self, py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.eval(n).map_err(value_error)?)
    }

    /// Values at `n = 0..=n_max`.
    fn eval_range<'py>(&self, py: Python<'py>, n_max: u64) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.0.eval_range(n_max).map_err(value_error)?)
    }

    #[pyo3(signature = (format = "text"))]
    fn render(&self, format: &str) -> PyResult<String> {
        Ok(self.0.render(parse_enum::<Format>(format)?))
    }

    fn to_json(&self) -> String {
        self.0.render(Format::Json)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        ClosedForm::parse_json(text).map(PyClosedForm).map_err(value_error)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.render(Format::Text)
    }

    fn __repr__(&self) -> String {
        format!("ClosedForm('{}')", self.0.render(Format::Text))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __add__(&self, other: &Self) -> Self {
        PyClosedForm(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyClosedForm(&self.0 - &other.0)
    }

    fn __neg__(&self) -> Self {
        PyClosedForm(-&self.0)
    }
}

/// A sum written through powers of `H_n` plus `H_n(2)`, `H_n(2,1)`, `H_n(3)`.
#[pyclass(name = "StructuredForm", module = "harmsum", from_py_object)]
#[derive(Clone)]
struct PyStructuredForm(StructuredForm);

#[pymethods]
impl PyStructuredForm {
    /// `"H^t"` or `"H*H(2)"`.
    #[getter]
    fn block(&self) -> String {
        match self.0.block {
            LeadingBlock::Power(t) => format!("H^{t}"),
            LeadingBlock::HarmonicTimesOrderTwo => "H*H(2)".to_string(),
        }
    }

    #[getter]
    fn leading(&self) -> PyPolynomial {
        PyPolynomial(self.0.leading.clone())
    }

    /// `q[i]` multiplies `H_n^i`.
    #[getter]
    fn q(&self) -> Vec<PyPolynomial> {
        self.0.q.iter().cloned().map(PyPolynomial).collect()
    }

    #[getter]
    fn c2(&self) -> PyPolynomial {
        PyPolynomial(self.0.c2.clone())
    }

    #[getter]
    fn c21<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.c21)
    }

    #[getter]
    fn c3<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.c3)
    }

    /// Expansion into the flat basis.
    fn to_closed(&self) -> PyClosedForm {
        PyClosedForm(harmsum::structured_to_closed(&self.0))
    }

    #[pyo3(signature = (format = "text"))]
    fn render(&self, format: &str) -> PyResult<String> {
        Ok(self.0.render(parse_enum::<Format>(format)?))
    }

    fn __str__(&self) -> String {
        self.0.render(Format::Text)
    }

    fn __repr__(&self) -> String {
        format!("StructuredForm('{}')", self.0.render(Format::Text))
    }
}

/// The `i`-th Bernoulli number; `convention` is `"plus"` (B1 = 1/2) or `"minus"`.
#[pyfunction]
#[pyo3(signature = (i, convention = "plus"))]
fn bernoulli<'py>(py: Python<'py>, i: usize, convention: &str) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &harmsum::bernoulli(i, parse_enum::<Convention>(convention)?))
}

/// `F(B)`: `x^i` replaced by the `i`-th Bernoulli number.
#[pyfunction]
#[pyo3(signature = (f, convention = "plus"))]
fn umbral_eval<'py>(py: Python<'py>, f: PolyArg, convention: &str) -> PyResult<Bound<'py, PyAny>> {
    let c = parse_enum::<Convention>(convention)?;
    fraction(py, &harmsum::umbral_eval(&f.into_poly()?, c))
}

/// `(F(B~) == 0, F(B - 1) == 0)`.
#[pyfunction]
fn check_two_bs(f: PolyArg) -> PyResult<(bool, bool)> {
    Ok(harmsum::check_two_bs(&f.into_poly()?))
}

#[pyfunction]
fn parse_poly(text: &str) -> PyResult<PyPolynomial> {
    harmsum::parse_poly(text).map(PyPolynomial).map_err(value_error)
}

/// Exact `H_n(k)`; the first entry may be zero or negative.
#[pyfunction]
fn mhs_eval<'py>(py: Python<'py>, n: u64, comp: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &harmsum::mhs_eval(n, &to_composition(comp)).map_err(value_error)?)
}

#[pyfunction]
#[pyo3(signature = (n, order = 1))]
fn harmonic<'py>(py: Python<'py>, n: u64, order: u32) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &harmsum::harmonic(n, order))
}

/// Closed form of `H_n(-p, *comp)`. With `method="both"` a disagreement
/// between the two paths raises `ValueError`.
#[pyfunction]
#[pyo3(signature = (p, comp, method = "recurrence"))]
fn reduce(p: u32, comp: Vec<i64>, method: &str) -> PyResult<PyClosedForm> {
    let (a, b) = harmsum::reduce_with(p, &to_composition(comp), parse_enum::<Method>(method)?)
        .map_err(value_error)?;
    match b {
        Some(b) if b != a => Err(PyValueError::new_err(format!(
            "reduction paths disagree: {} vs {}",
            a.render(Format::Text),
            b.render(Format::Text)
        ))),
        _ => Ok(PyClosedForm(a)),
    }
}

/// `Σ_{m=1..n} F(m)·H_{m-1}^t`, or `Σ_{m=0..n} F(m)·H_m^t` when shifted.
#[pyfunction]
#[pyo3(signature = (f, t, shifted = false))]
fn sum_power(f: PolyArg, t: u32, shifted: bool) -> PyResult<PyClosedForm> {
    let f = f.into_poly()?;
    let cf = if shifted { harmsum::sum_power_shifted(&f, t) } else { harmsum::sum_power(&f, t) };
    cf.map(PyClosedForm).map_err(value_error)
}

/// `Σ F(m)·Π H_{m-1}(order)^mult` for `factors = [(order, mult), ...]`.
#[pyfunction]
#[pyo3(signature = (f, factors, shifted = false))]
fn sum_product(f: PolyArg, factors: Vec<(u32, u32)>, shifted: bool) -> PyResult<PyClosedForm> {
    if factors.iter().any(|&(o, _)| o == 0) {
        return Err(PyValueError::new_err("harmonic orders must be positive"));
    }
    let f = f.into_poly()?;
    let cf = if shifted {
        harmsum::sum_product_shifted(&f, &factors)
    } else {
        harmsum::sum_product(&f, &factors)
    };
    cf.map(PyClosedForm).map_err(value_error)
}

/// Explicit presentation; `kind` is one of `hn1`, `hn2`, `hn3`, `mixed`, `hn4`.
#[pyfunction]
#[pyo3(signature = (kind, f, shifted = false))]
fn spiess_form(kind: &str, f: PolyArg, shifted: bool) -> PyResult<PyStructuredForm> {
    let f = f.into_poly()?;
    let kind = match kind {
        "hn1" => SpiessKind::Hn1(f),
        "hn2" => SpiessKind::Hn2(f),
        "hn3" => SpiessKind::Hn3(f),
        "mixed" => SpiessKind::Mixed(f),
        "hn4" => SpiessKind::Hn4(f),
        other => return Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
    };
    let s = if shifted { harmsum::spiess_form_shifted(&kind) } else { harmsum::spiess_form(&kind) };
    s.map(PyStructuredForm).map_err(value_error)
}

/// Report dict with `passes`, `offending_terms`, `remainder`, and the bounds.
#[pyfunction]
fn structure_check<'py>(py: Python<'py>, f: PolyArg, t: u32) -> PyResult<Bound<'py, PyDict>> {
    let r = harmsum::structure_check(&f.into_poly()?, t).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("passes", r.passes)?;
    let offending = r
        .offending_terms
        .iter()
        .map(|(k, p)| Ok((composition_tuple(py, k)?, PyPolynomial(p.clone()))))
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("offending_terms", offending)?;
    d.set_item("remainder", PyClosedForm(r.remainder))?;
    d.set_item("depth_bound", r.depth_bound)?;
    d.set_item("degree_bound", r.degree_bound)?;
    Ok(d)
}

/// `H_n(order)^t` as `[(composition, coefficient), ...]`.
#[pyfunction]
fn expand_power<'py>(py: Python<'py>, order: u32, t: u32) -> PyResult<Vec<(Bound<'py, PyTuple>, Bound<'py, PyAny>)>> {
    if order == 0 {
        return Err(PyValueError::new_err("harmonic order must be positive"));
    }
    harmsum::expand_power(order, t)
        .iter()
        .map(|(k, c)| Ok((composition_tuple(py, k)?, fraction(py, c)?)))
        .collect()
}

/// Polynomial equal to `1^p + … + n^p`.
#[pyfunction]
fn faulhaber(p: u32) -> PyPolynomial {
    PyPolynomial(harmsum::faulhaber(p))
}

/// `C^{(p)}_{a}(x)`.
#[pyfunction]
#[pyo3(signature = (p, a = Vec::new()))]
fn c_poly(p: u32, a: Vec<u32>) -> PyPolynomial {
    PyPolynomial(harmsum::c_poly(&CIndex::new(p, &a)))
}

/// `D^{(p)}_{a}(B)`.
#[pyfunction]
#[pyo3(signature = (p, a = Vec::new()))]
fn d_umbral<'py>(py: Python<'py>, p: u32, a: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &harmsum::d_umbral(&CIndex::new(p, &a)).map_err(value_error)?)
}

#[pymodule]
#[pyo3(name = "harmsum")]
fn harmsum_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyClosedForm>()?;
    m.add_class::<PyStructuredForm>()?;
    m.add_function(wrap_pyfunction!(bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(umbral_eval, m)?)?;
    m.add_function(wrap_pyfunction!(check_two_bs, m)?)?;
    m.add_function(wrap_pyfunction!(parse_poly, m)?)?;
    m.add_function(wrap_pyfunction!(mhs_eval, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(sum_power, m)?)?;
    m.add_function(wrap_pyfunction!(sum_product, m)?)?;
    m.add_function(wrap_pyfunction!(spiess_form, m)?)?;
    m.add_function(wrap_pyfunction!(structure_check, m)?)?;
    m.add_function(wrap_pyfunction!(expand_power, m)?)?;
    m.add_function(wrap_pyfunction!(faulhaber, m)?)?;
    m.add_function(wrap_pyfunction!(c_poly, m)?)?;
    m.add_function(wrap_pyfunction!(d_umbral, m)?)?;
    Ok(())
}
