//! Python bindings: `import pyhomvar`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use homvar::{Coordinate, DifferentialForm, Error, SourceForm};

create_exception!(pyhomvar, HomvarError, PyException);
create_exception!(pyhomvar, ParseError, HomvarError);
create_exception!(pyhomvar, NotVariationalError, HomvarError);
create_exception!(pyhomvar, NotSupportedError, HomvarError);
create_exception!(pyhomvar, InternalError, HomvarError);

fn to_py(error: Error) -> PyErr {
    let message = error.to_string();
    match error {
        Error::Parse(_) => ParseError::new_err(message),
        Error::NotVariational { .. } => NotVariationalError::new_err(message),
        Error::NonPolynomialCoefficient | Error::NotAffine { .. } | Error::OrderTooHigh { .. } => {
            NotSupportedError::new_err(message)
        }
        Error::Internal(_) => InternalError::new_err(message),
        _ => HomvarError::new_err(message),
    }
}

fn coordinate(index: u32, order: u32) -> PyResult<Coordinate> {
    if index == 0 {
        return Err(HomvarError::new_err("coordinate indices start at 1"));
    }
    Ok(Coordinate::new(index, order))
}

/// An exact expression in the coordinates `q<i>` and their derivatives.
#[pyclass(name = "Expression", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyExpression(homvar::Expression);

#[pymethods]
impl PyExpression {
    #[new]
    fn new(text: &str, dim: usize) -> PyResult<Self> {
        homvar::parse_expression(text, dim)
            .map(PyExpression)
            .map_err(|e| to_py(e.into()))
    }

    fn differentiate(&self, index: u32, order: u32) -> PyResult<Self> {
        Ok(PyExpression(
            self.0.differentiate(coordinate(index, order)?),
        ))
    }

    fn total_derivative(&self) -> Self {
        PyExpression(self.0.total_derivative())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Highest derivative order present, `None` for constants.
    fn order(&self) -> Option<u32> {
        self.0.max_order()
    }

    fn __add__(&self, other: &Self) -> Self {
        PyExpression(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyExpression(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyExpression(&self.0 * &other.0)
    }

    fn __neg__(&self) -> Self {
        PyExpression(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expression({:?})", self.0.to_string())
    }
}

/// An exterior differential form with expression coefficients.
#[pyclass(name = "Form", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyForm(DifferentialForm);

#[pymethods]
impl PyForm {
    #[new]
    fn new(text: &str, dim: usize) -> PyResult<Self> {
        homvar::parse_form(text, dim)
            .map(PyForm)
            .map_err(|e| to_py(e.into()))
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn d(&self) -> Self {
        PyForm(self.0.exterior_d())
    }

    fn total_derivative(&self) -> Self {
        PyForm(self.0.total_derivative())
    }

    fn vertical_s(&self) -> Self {
        PyForm(homvar::vertical_s(&self.0))
    }

    fn wedge(&self, other: &Self) -> Self {
        PyForm(self.0.wedge(&other.0))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        if self.0.degree() != other.0.degree() {
            return Err(HomvarError::new_err("cannot add forms of different degree"));
        }
        Ok(PyForm(&self.0 + &other.0))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        if self.0.degree() != other.0.degree() {
            return Err(HomvarError::new_err(
                "cannot subtract forms of different degree",
            ));
        }
        Ok(PyForm(&self.0 - &other.0))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Form({:?})", self.0.to_string())
    }
}

fn source(components: Vec<PyRef<'_, PyExpression>>) -> PyResult<SourceForm> {
    SourceForm::new(components.iter().map(|c| c.0.clone()).collect()).map_err(to_py)
}

#[pyfunction]
fn euler_lagrange(lagrangian: &PyExpression, dim: usize) -> PyResult<Vec<PyExpression>> {
    let eps = homvar::euler_lagrange(&lagrangian.0, dim).map_err(to_py)?;
    Ok(eps.components().iter().cloned().map(PyExpression).collect())
}

#[pyfunction]
fn hilbert_form(lagrangian: &PyExpression) -> PyForm {
    PyForm(homvar::hilbert_form(&lagrangian.0))
}

#[pyfunction]
fn variational_delta(form: &PyForm) -> PyForm {
    PyForm(homvar::variational_delta(&form.0))
}

#[pyfunction]
fn p_operator(form: &PyForm) -> PyResult<PyForm> {
    homvar::p_operator(&form.0).map(PyForm).map_err(to_py)
}

#[pyfunction]
fn poincare_h(form: &PyForm) -> PyResult<PyForm> {
    homvar::poincare_h(&form.0).map(PyForm).map_err(to_py)
}

/// Helmholtz-Sonin form of the source form with the given components.
#[pyfunction]
fn helmholtz_sonin(components: Vec<PyRef<'_, PyExpression>>) -> PyResult<PyForm> {
    Ok(PyForm(homvar::helmholtz_sonin(&source(components)?)))
}

#[pyfunction]
fn homogenize(lagrangian: &PyExpression, dim: usize) -> PyResult<PyExpression> {
    homvar::homogenize(&lagrangian.0, dim)
        .map(PyExpression)
        .map_err(to_py)
}

/// Returns `(homogeneous, residuals)`.
#[pyfunction]
fn check_homogeneous(lagrangian: &PyExpression, k: usize) -> PyResult<(bool, Vec<PyExpression>)> {
    let report = homvar::check_homogeneous(&lagrangian.0, k).map_err(to_py)?;
    Ok((
        report.homogeneous,
        report.residuals.into_iter().map(PyExpression).collect(),
    ))
}

/// Result of Lagrangian recovery.
#[pyclass(name = "Recovery", frozen, get_all)]
pub struct PyRecovery {
    lagrangian: PyExpression,
    kappa: PyForm,
    order: Option<u32>,
    verified: bool,
}

#[pymethods]
impl PyRecovery {
    fn __repr__(&self) -> String {
        format!(
            "Recovery(lagrangian={:?}, order={:?}, verified={})",
            self.lagrangian.0.to_string(),
            self.order,
            self.verified
        )
    }
}

/// Recovers a Lagrangian for the source form; `first_order=True` runs the
/// gauge reduction for second-order equations.
#[pyfunction]
#[pyo3(signature = (components, first_order = false))]
fn recover_lagrangian(
    components: Vec<PyRef<'_, PyExpression>>,
    first_order: bool,
) -> PyResult<PyRecovery> {
    let eps = source(components)?;
    let report = if first_order {
        homvar::recover_first_order(&eps)
    } else {
        homvar::recover_lagrangian(&eps)
    }
    .map_err(to_py)?;
    Ok(PyRecovery {
        lagrangian: PyExpression(report.lagrangian),
        kappa: PyForm(report.kappa),
        order: report.order_of_lagrangian,
        verified: report.verification,
    })
}

#[pymodule]
fn pyhomvar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyExpression>()?;
    m.add_class::<PyForm>()?;
    m.add_class::<PyRecovery>()?;
    m.add_function(wrap_pyfunction!(euler_lagrange, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_form, m)?)?;
    m.add_function(wrap_pyfunction!(variational_delta, m)?)?;
    m.add_function(wrap_pyfunction!(p_operator, m)?)?;
    m.add_function(wrap_pyfunction!(poincare_h, m)?)?;
    m.add_function(wrap_pyfunction!(helmholtz_sonin, m)?)?;
    m.add_function(wrap_pyfunction!(homogenize, m)?)?;
    m.add_function(wrap_pyfunction!(check_homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(recover_lagrangian, m)?)?;
    m.add("HomvarError", py.get_type::<HomvarError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("NotVariationalError", py.get_type::<NotVariationalError>())?;
    m.add("NotSupportedError", py.get_type::<NotSupportedError>())?;
    m.add("InternalError", py.get_type::<InternalError>())?;
    Ok(())
}
