#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>

#include "dsnls/config.hpp"
#include "dsnls/duhamel.hpp"
#include "dsnls/errors.hpp"
#include "dsnls/harness.hpp"
#include "dsnls/io.hpp"
#include "dsnls/lorentz.hpp"
#include "dsnls/nonlocal.hpp"
#include "dsnls/parallel.hpp"
#include "dsnls/propagator.hpp"
#include "dsnls/selfsim.hpp"
#include "dsnls/strichartz.hpp"

namespace py = pybind11;
using namespace ds;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

std::vector<py::ssize_t> shape_of(const GridSpec& g) {
  std::vector<py::ssize_t> s;
  for (int a = 0; a < g.dim; ++a) s.push_back(py::ssize_t(g.points[a]));
  return s;
}

CArray to_numpy(std::span<const cplx> v, const GridSpec& g) {
  CArray out(shape_of(g));
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(cplx));
  return out;
}

Field from_numpy(const GridSpec& g, const CArray& a, double t) {
  const auto want = shape_of(g);
  if (a.ndim() != py::ssize_t(want.size()) || !std::equal(want.begin(), want.end(), a.shape()))
    throw ArgumentError("Field: array shape does not match the grid");
  return Field(g, std::vector<cplx>(a.data(), a.data() + a.size()), t);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Davey-Stewartson type NLS toolkit";

  auto base = py::register_exception<Error>(m, "DsError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.def("thread_count", &thread_count);
  m.def("set_thread_count", &set_thread_count, py::arg("n"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_static("cube", &GridSpec::cube, py::arg("dim"), py::arg("n"), py::arg("length"))
      .def_readwrite("dim", &GridSpec::dim)
      .def_readwrite("points", &GridSpec::points)
      .def_readwrite("length", &GridSpec::length)
      .def("validate", &GridSpec::validate)
      .def("size", &GridSpec::size)
      .def("spacing", &GridSpec::spacing)
      .def("cell_volume", &GridSpec::cell_volume)
      .def("box_volume", &GridSpec::box_volume)
      .def("coordinates", [](const GridSpec& g, int axis) {
        if (axis < 0 || axis >= g.dim) throw ArgumentError("coordinates: axis out of range");
        return coordinate_tables(g)[axis];
      })
      .def("frequencies", [](const GridSpec& g, int axis) {
        if (axis < 0 || axis >= g.dim) throw ArgumentError("frequencies: axis out of range");
        return frequency_tables(g)[axis];
      })
      .def(py::self == py::self)
      .def("__repr__", [](const GridSpec& g) {
        std::string s = "GridSpec(dim=" + std::to_string(g.dim) + ", points=(";
        for (int a = 0; a < g.dim; ++a) s += (a ? ", " : "") + std::to_string(g.points[a]);
        s += "), length=(";
        for (int a = 0; a < g.dim; ++a) s += (a ? ", " : "") + std::to_string(g.length[a]);
        return s + "))";
      });

  py::class_<Field>(m, "Field")
      .def(py::init(&from_numpy), py::arg("spec"), py::arg("samples"), py::arg("time") = 0.0)
      .def_static("zeros", &Field::zeros, py::arg("spec"), py::arg("time") = 0.0)
      .def_property_readonly("spec", &Field::spec)
      .def_property_readonly("time", &Field::time)
      .def("to_numpy", [](const Field& f) { return to_numpy(f.samples(), f.spec()); })
      .def("with_time", [](const Field& f, double t) { return f.with_time(t); })
      .def("is_real", &Field::is_real)
      .def("max_abs", &Field::max_abs)
      .def("__len__", &Field::size)
      .def("__add__", [](const Field& a, const Field& b) { return a + b; })
      .def("__sub__", [](const Field& a, const Field& b) { return a - b; })
      .def("__mul__", [](const Field& a, cplx s) { return s * a; })
      .def("__rmul__", [](const Field& a, cplx s) { return s * a; });

  py::class_<SpectralField>(m, "SpectralField")
      .def_property_readonly("spec", &SpectralField::spec)
      .def_property_readonly("time", &SpectralField::time)
      .def("at", &SpectralField::at, py::arg("k0"), py::arg("k1"), py::arg("k2") = 0)
      .def("to_numpy", [](const SpectralField& s) { return to_numpy(s.coefficients(), s.spec()); });

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init<std::vector<Field>, double, double>(), py::arg("slices"), py::arg("t0"), py::arg("dt"))
      .def("__len__", &Trajectory::size)
      .def("__getitem__", [](const Trajectory& u, std::size_t j) {
        if (j >= u.size()) throw py::index_error();
        return u[j];
      })
      .def_property_readonly("t0", &Trajectory::t0)
      .def_property_readonly("dt", &Trajectory::dt)
      .def_property_readonly("spec", &Trajectory::spec)
      .def("time", &Trajectory::time)
      .def("to_numpy", [](const Trajectory& u) {
        auto shape = shape_of(u.spec());
        shape.insert(shape.begin(), py::ssize_t(u.size()));
        CArray out(shape);
        const std::size_t n = u.spec().size();
        for (std::size_t j = 0; j < u.size(); ++j)
          std::memcpy(out.mutable_data() + j * n, u[j].samples().data(), n * sizeof(cplx));
        return out;
      });

  m.def("sample_function", [](const GridSpec& g, const py::function& fn, double t) {
    // fn receives one coordinate array per axis (meshgrid, ij indexing).
    g.validate();
    py::list axes;
    for (int a = 0; a < g.dim; ++a) axes.append(py::cast(coordinate_tables(g)[a]));
    py::object np = py::module_::import("numpy");
    py::object grids = np.attr("meshgrid")(*axes, py::arg("indexing") = "ij");
    return from_numpy(g, CArray::ensure(fn(*grids)), t);
  }, py::arg("spec"), py::arg("fn"), py::arg("time") = 0.0);

  m.def("forward_transform", &forward_transform);
  m.def("inverse_transform", &inverse_transform);
  m.def("lp_norm", py::overload_cast<const Field&, double>(&lp_norm), py::arg("f"), py::arg("p"));
  m.def("spectral_resample", [](const Field& f, double beta) {
    auto r = spectral_resample(f, beta);
    return py::make_tuple(r.field, r.high_band_fraction, r.aliasing_warning);
  }, py::arg("f"), py::arg("beta"));
  m.def("spectral_derivative", &spectral_derivative, py::arg("f"), py::arg("axis"), py::arg("order"));

  m.def("write_field", &write_field);
  m.def("read_field", &read_field);
  m.def("write_trajectory", &write_trajectory);
  m.def("read_trajectory", &read_trajectory);

  // nonlocal
  py::class_<MultiplierParams>(m, "MultiplierParams")
      .def(py::init([](double mm, int dim) { return MultiplierParams{mm, dim}; }), py::arg("m") = 1.0,
           py::arg("dim") = 2)
      .def_readwrite("m", &MultiplierParams::m)
      .def_readwrite("dim", &MultiplierParams::dim);
  m.def("symbol_value", py::overload_cast<double, double, double, double>(&symbol_value), py::arg("xi0"),
        py::arg("xi1"), py::arg("xi2"), py::arg("m"));
  m.def("apply_E", &apply_E);
  m.def("recover_phi_x1", &recover_phi_x1);
  m.def("recover_phi", &recover_phi);

  // propagator
  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double delta, double chi, double b, double mm, double alpha, int dim) {
             return ModelParams{delta, chi, b, mm, alpha, dim};
           }),
           py::arg("delta") = 1.0, py::arg("chi") = 1.0, py::arg("b") = 0.0, py::arg("m") = 1.0,
           py::arg("alpha") = 2.0, py::arg("dim") = 2)
      .def_readwrite("delta", &ModelParams::delta)
      .def_readwrite("chi", &ModelParams::chi)
      .def_readwrite("b", &ModelParams::b)
      .def_readwrite("m", &ModelParams::m)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("dim", &ModelParams::dim)
      .def("violations", &ModelParams::violations)
      .def("validate", &ModelParams::validate)
      .def("critical_exponent", &ModelParams::critical_exponent);
  m.def("free_evolve", &free_evolve, py::arg("f"), py::arg("t"), py::arg("delta") = 1.0);
  m.def("group_property_check", &group_property_check);
  m.def("split_step_evolve", [](const Field& u0, double T, double dt, const ModelParams& mp, int order,
                                std::size_t store_every, bool dealias) {
    return split_step_evolve(u0, T, dt, mp, SplitStepOptions{order, store_every, dealias});
  }, py::arg("u0"), py::arg("T"), py::arg("dt"), py::arg("model"), py::arg("order") = 2,
        py::arg("store_every") = 1, py::arg("dealias") = false);

  // duhamel
  m.def("duhamel_G", &duhamel_G, py::arg("F"), py::arg("delta") = 1.0);
  m.def("tt_star", &tt_star, py::arg("F"), py::arg("delta") = 1.0);
  m.def("free_trajectory", &free_trajectory, py::arg("u0"), py::arg("dt"), py::arg("steps"),
        py::arg("delta") = 1.0);
  m.def("nonlinearity", py::overload_cast<const Field&, const ModelParams&>(&nonlinearity));
  m.def("picard_map", &picard_map);
  py::class_<PicardReport>(m, "PicardReport")
      .def_readonly("iterates", &PicardReport::iterates)
      .def_readonly("weak_distances", &PicardReport::weak_distances)
      .def_readonly("l2_distances", &PicardReport::l2_distances)
      .def_readonly("converged", &PicardReport::converged)
      .def_readonly("contraction_ratio", &PicardReport::contraction_ratio)
      .def_readonly("residual_weak", &PicardReport::residual_weak)
      .def_readonly("residual_l2", &PicardReport::residual_l2)
      .def_readonly("ball_ratio", &PicardReport::ball_ratio)
      .def_readonly("weak_exponent", &PicardReport::weak_exponent)
      .def("to_csv", &PicardReport::to_csv);
  m.def("picard_solve", [](const Field& u0, const ModelParams& mp, double T, double dt, std::size_t max_iter,
                           double tol) {
    auto r = picard_solve(u0, mp, T, dt, max_iter, tol);
    return py::make_tuple(std::move(r.solution), std::move(r.report));
  }, py::arg("u0"), py::arg("model"), py::arg("T"), py::arg("dt"), py::arg("max_iter") = 50,
        py::arg("tol") = 1e-10);
  m.def("scattering_limits", [](const Trajectory& u, const ModelParams& mp) {
    auto r = scattering_limits(u, mp);
    return py::make_tuple(r.u_plus, r.tail);
  });
  m.def("pde_residual", &pde_residual);
  m.def("sup_relative_l2", &sup_relative_l2);

  // lorentz
  m.def("weak_lp_norm", py::overload_cast<const Field&, double>(&weak_lp_norm), py::arg("f"), py::arg("p"));
  m.def("weak_spacetime_norm", &weak_spacetime_norm, py::arg("u"), py::arg("p"));
  m.def("mixed_norm", &mixed_norm, py::arg("u"), py::arg("q"), py::arg("r"));
  m.def("distribution_function", [](const Field& f, double lambda) {
    return distribution_function(SampledMeasureSpace::from_field(f), lambda);
  }, py::arg("f"), py::arg("lam"));
  m.def("k_functional", [](const Field& f, double t, double p0, double p1) {
    return k_functional(SampledMeasureSpace::from_field(f), t, p0, p1);
  }, py::arg("f"), py::arg("t"), py::arg("p0"), py::arg("p1"));
  m.def("threshold_split", &threshold_split);

  // selfsim
  py::enum_<BkNormalization>(m, "BkNormalization")
      .value("GammaA", BkNormalization::GammaA)
      .value("GammaB", BkNormalization::GammaB);
  py::enum_<RemainderForm>(m, "RemainderForm")
      .value("ConjugatePhases", RemainderForm::ConjugatePhases)
      .value("CommonPhase", RemainderForm::CommonPhase);
  py::class_<SeriesParams>(m, "SeriesParams")
      .def(py::init([](int n, double p, int mm, int l, int nodes, BkNormalization bk, RemainderForm rf) {
             return SeriesParams{n, p, mm, l, nodes, bk, rf};
           }),
           py::arg("n") = 2, py::arg("p") = 1.0, py::arg("m") = -1, py::arg("l") = -1, py::arg("quad_nodes") = 48,
           py::arg("bk") = BkNormalization::GammaA, py::arg("remainder") = RemainderForm::ConjugatePhases)
      .def_readwrite("n", &SeriesParams::n)
      .def_readwrite("p", &SeriesParams::p)
      .def_readwrite("m", &SeriesParams::m)
      .def_readwrite("l", &SeriesParams::l)
      .def_readwrite("quad_nodes", &SeriesParams::quad_nodes)
      .def_readwrite("bk", &SeriesParams::bk)
      .def_readwrite("remainder", &SeriesParams::remainder)
      .def("resolved", &SeriesParams::resolved);
  py::class_<CwSeries>(m, "CwSeries")
      .def(py::init<const SeriesParams&>())
      .def("A", &CwSeries::A)
      .def("B", &CwSeries::B)
      .def("__call__", &CwSeries::operator(), py::arg("r"), py::arg("t"));
  m.def("cw_free_evolution", &cw_free_evolution, py::arg("x"), py::arg("t"), py::arg("params"));
  m.def("cw_field", &cw_field, py::arg("spec"), py::arg("t"), py::arg("params"));
  m.def("homogeneous_field", [](const GridSpec& g, double eps, double alpha, double cutoff) {
    return homogeneous_field(HomogeneousData{eps, alpha, cutoff}, g);
  }, py::arg("spec"), py::arg("eps"), py::arg("alpha"), py::arg("core_cutoff") = 0.0);
  m.def("compare_with_fft", [](const GridSpec& g, double p, double t, double r_min, double r_max, int nodes) {
    const auto c = compare_with_fft(g, p, t, r_min, r_max, std::nullopt, nodes);
    py::dict d;
    for (const auto& v : c.variants)
      d[py::str(std::string(to_string(v.bk)) + "/" + to_string(v.remainder))] = v.max_rel_error;
    return d;
  }, py::arg("spec"), py::arg("p"), py::arg("t"), py::arg("r_min") = 2.0, py::arg("r_max") = 0.0,
        py::arg("quad_nodes") = 48);
  m.def("predicted_sigma", &predicted_sigma);
  m.def("profile_decay_fit", &profile_decay_fit);
  m.def("scaling_residual", [](const Trajectory& u, double beta, double alpha, double exclusion) {
    return scaling_residual(u, beta, alpha, ScalingOptions{exclusion});
  }, py::arg("u"), py::arg("beta"), py::arg("alpha"), py::arg("exclusion_radius") = 0.0);

  // strichartz
  py::class_<ExponentQuad>(m, "ExponentQuad")
      .def(py::init([](double q, double r, double qt, double rt, int n) { return ExponentQuad{q, r, qt, rt, n}; }),
           py::arg("q"), py::arg("r"), py::arg("qt"), py::arg("rt"), py::arg("n") = 2)
      .def_readwrite("q", &ExponentQuad::q)
      .def_readwrite("r", &ExponentQuad::r)
      .def_readwrite("qt", &ExponentQuad::qt)
      .def_readwrite("rt", &ExponentQuad::rt)
      .def_readwrite("n", &ExponentQuad::n);
  m.def("is_admissible", [](const ExponentQuad& e) {
    const auto a = is_admissible(e);
    return py::make_tuple(a.admissible, a.violated);
  });
  m.def("prop3_window", [](double r, int n) {
    const auto w = prop3_window(r, n);
    return py::make_tuple(w.inside, w.lo, w.hi, w.p);
  }, py::arg("r"), py::arg("n"));
  m.def("strichartz_sweep", [](const ExponentQuad& e, std::size_t N, double L, std::vector<double> betas,
                               std::size_t samples, std::uint64_t seed) {
    StrichartzConfig cfg;
    cfg.grid = GridSpec::cube(e.n, N, L);
    cfg.betas = std::move(betas);
    cfg.samples = samples;
    cfg.seed = seed;
    const auto rep = strichartz_ratio_sweep(e, cfg);
    return py::make_tuple(rep.to_csv(), rep.spread_G, rep.spread_TT);
  }, py::arg("quad"), py::arg("N") = 64, py::arg("L") = 24.0,
        py::arg("betas") = std::vector<double>{0.5, 1.0, 2.0}, py::arg("samples") = 1, py::arg("seed") = 1);

  // harness
  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("model", &RunConfig::model)
      .def_readwrite("grid", &RunConfig::grid)
      .def_readwrite("T", &RunConfig::T)
      .def_readwrite("dt", &RunConfig::dt)
      .def_readwrite("out_dir", &RunConfig::out_dir)
      .def("canonical", &RunConfig::canonical);
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "<config>");
  m.def("load_config", &load_config);
  m.def("config_hash", &config_hash);
  const auto outcome = [](const RunOutcome& o) {
    return py::make_tuple(o.exit_code, o.artifacts, o.failed_checks);
  };
  m.def("run_simulate", [outcome](const RunConfig& c, const std::string& d) { return outcome(run_simulate(c, d)); });
  m.def("run_picard", [outcome](const RunConfig& c, const std::string& d) { return outcome(run_picard(c, d)); });
  m.def("run_norms", [](const std::string& input, double p, std::optional<double> q, std::optional<double> r) {
    return run_norms(NormsOptions{input, p, q, r});
  }, py::arg("input"), py::arg("p"), py::arg("q") = py::none(), py::arg("r") = py::none());
}
