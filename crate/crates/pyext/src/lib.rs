//! Python bindings for the genring computational-algebra library.
//!
//! Rationals cross the boundary as strings ("p/q"), coefficient vectors as
//! lists of such strings, and structured reports as plain dicts — enough to
//! drive every analysis from Python without pulling the whole type system
//! across.

use std::collections::HashMap;
use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use genring::classify;
use genring::coeffmonads::{self, CoeffMonad, Element};
use genring::exactnum::{self, Rat, Valuation};
use genring::monad::{parse_val, Handle};
use genring::picard_arakelov as pic;
use genring::presentations as pres;
use genring::projgraded as proj;
use genring::spectra;

fn err(e: genring::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rat(s: &str) -> PyResult<Rat> {
    s.parse().map_err(err)
}

fn parse_vec(v: &[String]) -> PyResult<Vec<Rat>> {
    v.iter().map(|s| parse_rat(s)).collect()
}

fn parse_monad(id: &str) -> PyResult<CoeffMonad> {
    id.parse().map_err(err)
}

fn parse_handle(id: &str) -> PyResult<Handle> {
    id.parse().map_err(err)
}

fn parse_space(id: &str) -> PyResult<spectra::SpecSpace> {
    id.parse().map_err(err)
}

/// v_p(x) for a prime p and a nonzero rational x.
#[pyfunction]
fn vp(p: u64, x: &str) -> PyResult<i64> {
    exactnum::vp(p, &parse_rat(x)?).map_err(err)
}

/// |x| at a place ("inf" or a prime), as an exact rational string.
#[pyfunction]
fn abs_at(place: &str, x: &str) -> PyResult<String> {
    let v = if place == "inf" {
        Valuation::Infinite
    } else {
        Valuation::finite(
            place
                .parse()
                .map_err(|_| PyValueError::new_err("bad place"))?,
        )
        .map_err(err)?
    };
    Ok(exactnum::abs_at(v, &parse_rat(x)?)
        .map_err(err)?
        .to_string())
}

/// Per-place factors and the verdict of the product formula.
#[pyfunction]
fn product_formula(py: Python<'_>, x: &str) -> PyResult<Py<PyDict>> {
    let rep = exactnum::product_formula_check(&parse_rat(x)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item(
        "factors",
        rep.factors
            .iter()
            .map(|(p, f)| (*p, f.to_string()))
            .collect::<Vec<_>>(),
    )?;
    d.set_item("finite_product", rep.finite_product.to_string())?;
    d.set_item("archimedean", rep.archimedean.to_string())?;
    d.set_item("holds", rep.holds)?;
    Ok(d.into())
}

/// Membership of a rational coefficient vector in a coefficient monad.
#[pyfunction]
fn contains(monad: &str, coeffs: Vec<String>) -> PyResult<bool> {
    Ok(parse_monad(monad)?.contains(&parse_vec(&coeffs)?))
}

/// Bilinear substitution t ∘ args in a coefficient monad.
#[pyfunction]
fn substitute(monad: &str, t: Vec<String>, args: Vec<Vec<String>>) -> PyResult<Vec<String>> {
    let m = parse_monad(monad)?;
    let t = Element::new(m.clone(), parse_vec(&t)?).map_err(err)?;
    let args: Vec<Element> = args
        .iter()
        .map(|a| Element::new(m.clone(), parse_vec(a)?).map_err(err))
        .collect::<PyResult<_>>()?;
    let out = coeffmonads::substitute(&t, &args).map_err(err)?;
    Ok(out.coeffs().iter().map(|c| c.to_string()).collect())
}

/// The induced map Σ(φ) along a 1-based φ into arity m.
#[pyfunction]
fn induced(monad: &str, phi: Vec<usize>, t: Vec<String>, m: usize) -> PyResult<Vec<String>> {
    let mm = parse_monad(monad)?;
    let t = Element::new(mm, parse_vec(&t)?).map_err(err)?;
    let out = coeffmonads::induced_map(&phi, &t, m).map_err(err)?;
    Ok(out.coeffs().iter().map(|c| c.to_string()).collect())
}

/// Normalized intersection of coefficient monads.
#[pyfunction]
fn intersect(ids: Vec<String>) -> PyResult<String> {
    let ms: Vec<CoeffMonad> = ids
        .iter()
        .map(|s| parse_monad(s))
        .collect::<PyResult<_>>()?;
    Ok(coeffmonads::intersect(&ms).map_err(err)?.to_string())
}

/// Least k with f^k·v in the monad, or None when the bound is exhausted.
#[pyfunction]
fn in_localization(monad: &str, f: &str, v: Vec<String>, bound: u32) -> PyResult<Option<u32>> {
    let m = parse_monad(monad)?;
    match coeffmonads::in_localization(&m, &parse_rat(f)?, &parse_vec(&v)?, bound).map_err(err)? {
        coeffmonads::Localization::Member { k } => Ok(Some(k)),
        coeffmonads::Localization::Undecided { .. } => Ok(None),
    }
}

/// Additivity classification: dict with oui/non columns.
#[pyfunction]
#[pyo3(signature = (monad, arity = 3))]
fn classify_additivity(py: Python<'_>, monad: &str, arity: usize) -> PyResult<Py<PyDict>> {
    let h = parse_handle(monad)?;
    let rep = classify::classify_additivity(&h, arity, 0).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("monad", rep.monad)?;
    d.set_item("hypoadditive", rep.hypoadditive.oui_non())?;
    d.set_item("hyperadditive", rep.hyperadditive.oui_non())?;
    d.set_item("additive", rep.additive)?;
    d.set_item("witnesses", rep.witnesses)?;
    Ok(d.into())
}

/// Interchange-law check of two operations (CLI element syntax).
#[pyfunction]
fn commute(monad: &str, left: &str, right: &str) -> PyResult<bool> {
    let h = parse_handle(monad)?;
    let t = parse_val(&h, left).map_err(err)?;
    let s = parse_val(&h, right).map_err(err)?;
    Ok(classify::commute(&h, &t, &s).map_err(err)?.commute)
}

/// The unique binary operation with comparison image (e, e), if any.
#[pyfunction]
fn pseudoaddition(monad: &str) -> PyResult<Option<String>> {
    let h = parse_handle(monad)?;
    Ok(classify::find_pseudoaddition(&h).map_err(err)?.found)
}

/// Points of a symbolic spectrum, rendered ("xi", "2", …, "inf").
#[pyfunction]
#[pyo3(signature = (space, bound = 50))]
fn spec_points(space: &str, bound: u64) -> PyResult<Vec<String>> {
    let s = parse_space(space)?;
    Ok(spectra::points(s, bound)
        .map_err(err)?
        .iter()
        .map(|p| p.to_string())
        .collect())
}

/// Closure of a point: a list of points, or the string "whole".
#[pyfunction]
fn closure(py: Python<'_>, space: &str, point: &str) -> PyResult<Py<PyAny>> {
    let s = parse_space(space)?;
    let pt: spectra::SpecPoint = point.parse().map_err(err)?;
    match spectra::closure(s, pt).map_err(err)? {
        spectra::ClosureSet::Whole => Ok("whole".into_pyobject(py)?.into_any().unbind()),
        spectra::ClosureSet::Points(set) => {
            let v: Vec<String> = set.iter().map(|p| p.to_string()).collect();
            Ok(v.into_pyobject(py)?.into_any().unbind())
        }
    }
}

/// Openness of the cofinite subset avoiding the given points.
#[pyfunction]
fn is_open(space: &str, complement: Vec<String>) -> PyResult<bool> {
    let s = parse_space(space)?;
    let pts: Vec<spectra::SpecPoint> = complement
        .iter()
        .map(|p| p.parse().map_err(err))
        .collect::<PyResult<_>>()?;
    Ok(spectra::is_open(s, &spectra::OpenSubset::avoiding(pts)))
}

/// The ring of germs at a point, as a descriptor string.
#[pyfunction]
fn stalk(space: &str, point: &str) -> PyResult<String> {
    let s = parse_space(space)?;
    let pt: spectra::SpecPoint = point.parse().map_err(err)?;
    Ok(spectra::stalk(s, pt).map_err(err)?.describe())
}

/// Membership of a rational in the stalk at a point.
#[pyfunction]
fn stalk_contains(space: &str, point: &str, x: &str) -> PyResult<bool> {
    let s = parse_space(space)?;
    let pt: spectra::SpecPoint = point.parse().map_err(err)?;
    Ok(spectra::stalk(s, pt).map_err(err)?.contains(&parse_rat(x)?))
}

/// Ideals of a finite monad: list of (elements, is_prime).
#[pyfunction]
fn ideals(monad: &str) -> PyResult<Vec<(Vec<String>, bool)>> {
    let h = parse_handle(monad)?;
    Ok(spectra::ideals_finite(&h, 2)
        .map_err(err)?
        .into_iter()
        .map(|i| (i.elements, i.prime))
        .collect())
}

/// Free terms of a presentation at context arity n and the given depth.
#[pyfunction]
fn free_terms(presentation: &str, n: usize, depth: usize) -> PyResult<Vec<String>> {
    let p = pres::parse_presentation(presentation).map_err(err)?;
    let ts = pres::free_terms(&p, n, depth, 100_000);
    Ok(ts.terms.iter().map(|t| t.to_string()).collect())
}

fn term_from(p: &pres::Presentation, s: &str) -> PyResult<pres::Term> {
    let text = format!("{}rel {s} = {s};", p.to_text());
    let parsed = pres::parse_presentation(&text).map_err(err)?;
    Ok(parsed.relations.last().unwrap().lhs.clone())
}

/// Bounded equational proof: True when proven (sound), False when unknown.
#[pyfunction]
#[pyo3(signature = (presentation, lhs, rhs, depth = 2))]
fn prove(presentation: &str, lhs: &str, rhs: &str, depth: usize) -> PyResult<bool> {
    let p = pres::parse_presentation(presentation).map_err(err)?;
    let l = term_from(&p, lhs)?;
    let r = term_from(&p, rhs)?;
    Ok(pres::derive_equal(&p, &l, &r, depth).map_err(err)?.proven())
}

/// Finite-model refutation: "found", "none" or "undecided".
#[pyfunction]
#[pyo3(signature = (presentation, lhs, rhs, max_size = 3))]
fn countermodel(presentation: &str, lhs: &str, rhs: &str, max_size: usize) -> PyResult<String> {
    let p = pres::parse_presentation(presentation).map_err(err)?;
    let l = term_from(&p, lhs)?;
    let r = term_from(&p, rhs)?;
    Ok(
        match pres::find_countermodel(&p, &l, &r, max_size, 50_000_000).map_err(err)? {
            pres::CountermodelOutcome::Found { .. } => "found".into(),
            pres::CountermodelOutcome::None => "none".into(),
            pres::CountermodelOutcome::Undecided => "undecided".into(),
        },
    )
}

/// Tensor product of two presentations, rendered in the text grammar.
#[pyfunction]
fn tensor(presentation1: &str, presentation2: &str) -> PyResult<String> {
    let p1 = pres::parse_presentation(presentation1).map_err(err)?;
    let p2 = pres::parse_presentation(presentation2).map_err(err)?;
    Ok(pres::tensor_presentation(&p1, &p2).map_err(err)?.to_text())
}

/// Checks a presentation's relations under an assignment of coefficient
/// vectors (as rational-string lists) in the target monad.
#[pyfunction]
fn check_relations(
    presentation: &str,
    monad: &str,
    assignment: HashMap<String, Vec<String>>,
) -> PyResult<bool> {
    let p = pres::parse_presentation(presentation).map_err(err)?;
    let m = parse_monad(monad)?;
    let mut interp = pres::Interpretation::new(Handle::Coeff(m.clone()));
    for (sym, coeffs) in assignment {
        let e = Element::new(m.clone(), parse_vec(&coeffs)?).map_err(err)?;
        interp = interp.assign(sym, genring::monad::Val::Coeff(e));
    }
    Ok(pres::check_relations(&p, &interp).map_err(err)?.all_hold)
}

/// Number of points of projective n-space over the one-element base.
#[pyfunction]
fn proj_count(n: u32) -> PyResult<u64> {
    Ok(proj::proj_points_f1(n).map_err(err)?.count)
}

/// Does Proj of the graded ring match the level-N compactification?
#[pyfunction]
#[pyo3(signature = (n, bound = 50))]
fn proj_verify(n: u64, bound: u64) -> PyResult<bool> {
    Ok(proj::proj_is_compactification(n, bound, 0).map_err(err)?.ok)
}

/// Degree-zero localization membership with certificate.
#[pyfunction]
#[pyo3(signature = (n, localizer, v, bound = 48))]
fn deg0_member(n: u64, localizer: &str, v: Vec<String>, bound: u32) -> PyResult<Option<u32>> {
    let ring = proj::GradedRing::new(n).map_err(err)?;
    let f = proj::Localizer::from_str(localizer).map_err(err)?;
    match proj::deg0_localization_contains(&ring, f, &parse_vec(&v)?, bound) {
        proj::Deg0Membership::Member { d } => Ok(Some(d)),
        proj::Deg0Membership::NotFound { .. } => Ok(None),
    }
}

/// Rank of the Picard group at level N.
#[pyfunction]
fn pic_rank(n: u64) -> PyResult<usize> {
    Ok(pic::pic_group(n).map_err(err)?.rank())
}

/// Basis labels of the Picard group at level N.
#[pyfunction]
fn pic_basis(n: u64) -> PyResult<Vec<String>> {
    Ok(pic::pic_group(n).map_err(err)?.basis())
}

/// Prime-exponent vector of a positive rational.
#[pyfunction]
fn factor_vec(x: &str) -> PyResult<HashMap<u64, i64>> {
    let v = pic::pic_limit_element(&parse_rat(x)?).map_err(err)?;
    Ok(v.0.into_iter().collect())
}

/// Lattice points of a body (`oct:r` needs dim; `box:a,b`; `ell:entries`).
#[pyfunction]
#[pyo3(signature = (body, dim = None))]
fn sections(body: &str, dim: Option<usize>) -> PyResult<(u64, Vec<Vec<i64>>)> {
    let b = genring::cli::parse_body(body, dim).map_err(err)?;
    let s = pic::global_sections_count(&pic::ArakelovBundle::new(b.dim(), b).map_err(err)?)
        .map_err(err)?;
    Ok((s.count, s.points))
}

/// Minkowski verdict: (volume display, exceeds 2^d, optional point).
#[pyfunction]
#[pyo3(signature = (body, dim = None))]
fn minkowski(body: &str, dim: Option<usize>) -> PyResult<(String, bool, Option<Vec<i64>>)> {
    let b = genring::cli::parse_body(body, dim).map_err(err)?;
    let v = pic::minkowski_check(&b).map_err(err)?;
    Ok((v.volume.display(), v.exceeds, v.point))
}

/// Coefficient norm Σ|c| of a polynomial line.
#[pyfunction]
fn poly_norm(line: &str) -> PyResult<String> {
    Ok(pic::PolyQ::parse(line).map_err(err)?.norm().to_string())
}

/// Model record for a list of polynomial lines: rescaled relations with
/// norm ≤ 1, plus the homogeneity flag.
#[pyfunction]
fn build_model(py: Python<'_>, lines: Vec<String>) -> PyResult<Py<PyDict>> {
    let polys: Vec<pic::PolyQ> = lines
        .iter()
        .map(|l| pic::PolyQ::parse(l).map_err(err))
        .collect::<PyResult<_>>()?;
    let m = pic::build_model(&polys).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("generators", m.generators)?;
    d.set_item(
        "relations",
        m.relations
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>(),
    )?;
    d.set_item("rescaled", m.rescaled)?;
    d.set_item("homogeneous", m.homogeneous)?;
    Ok(d.into())
}

#[pymodule]
fn genring_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(vp, m)?)?;
    m.add_function(wrap_pyfunction!(abs_at, m)?)?;
    m.add_function(wrap_pyfunction!(product_formula, m)?)?;
    m.add_function(wrap_pyfunction!(contains, m)?)?;
    m.add_function(wrap_pyfunction!(substitute, m)?)?;
    m.add_function(wrap_pyfunction!(induced, m)?)?;
    m.add_function(wrap_pyfunction!(intersect, m)?)?;
    m.add_function(wrap_pyfunction!(in_localization, m)?)?;
    m.add_function(wrap_pyfunction!(classify_additivity, m)?)?;
    m.add_function(wrap_pyfunction!(commute, m)?)?;
    m.add_function(wrap_pyfunction!(pseudoaddition, m)?)?;
    m.add_function(wrap_pyfunction!(spec_points, m)?)?;
    m.add_function(wrap_pyfunction!(closure, m)?)?;
    m.add_function(wrap_pyfunction!(is_open, m)?)?;
    m.add_function(wrap_pyfunction!(stalk, m)?)?;
    m.add_function(wrap_pyfunction!(stalk_contains, m)?)?;
    m.add_function(wrap_pyfunction!(ideals, m)?)?;
    m.add_function(wrap_pyfunction!(free_terms, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(countermodel, m)?)?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    m.add_function(wrap_pyfunction!(check_relations, m)?)?;
    m.add_function(wrap_pyfunction!(proj_count, m)?)?;
    m.add_function(wrap_pyfunction!(proj_verify, m)?)?;
    m.add_function(wrap_pyfunction!(deg0_member, m)?)?;
    m.add_function(wrap_pyfunction!(pic_rank, m)?)?;
    m.add_function(wrap_pyfunction!(pic_basis, m)?)?;
    m.add_function(wrap_pyfunction!(factor_vec, m)?)?;
    m.add_function(wrap_pyfunction!(sections, m)?)?;
    m.add_function(wrap_pyfunction!(minkowski, m)?)?;
    m.add_function(wrap_pyfunction!(poly_norm, m)?)?;
    m.add_function(wrap_pyfunction!(build_model, m)?)?;
    Ok(())
}
