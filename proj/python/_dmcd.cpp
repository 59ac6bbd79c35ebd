#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dmcd/config.hpp"
#include "dmcd/diff_ops.hpp"
#include "dmcd/fourier.hpp"
#include "dmcd/frames.hpp"
#include "dmcd/image_io.hpp"
#include "dmcd/metrics.hpp"
#include "dmcd/pipeline.hpp"
#include "dmcd/prox.hpp"
#include "dmcd/solver.hpp"

namespace py = pybind11;
using namespace dmcd;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Image to_image(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
  const Lattice lat(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  return Image(lat, std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const Image& f) {
  Array a({f.rows(), f.cols()});
  std::copy(f.begin(), f.end(), a.mutable_data());
  return a;
}

// keyword arguments use the config-file keys, values are stringified
ExperimentConfig config_from(const py::dict& kw, ExperimentConfig cfg = {}) {
  for (const auto& [k, v] : kw) {
    std::string value = py::isinstance<py::bool_>(v) ? (v.cast<bool>() ? "true" : "false") : py::str(v).cast<std::string>();
    set_config_value(cfg, k.cast<std::string>(), value);
  }
  return cfg;
}

py::dict decomposition_dict(const Decomposition& d) {
  py::dict out;
  out["u"] = to_array(d.u);
  out["v"] = to_array(d.v);
  out["rho"] = to_array(d.rho);
  out["eps"] = to_array(d.eps);
  out["f_re"] = to_array(d.f_re);
  out["iterations"] = d.iterations;
  out["converged"] = d.converged;
  out["final_err_v"] = d.final_err_v;
  out["constraint_residual"] = d.constraint_residual;
  out["err_v_history"] = d.err_v_history;
  return out;
}

}  // namespace

PYBIND11_MODULE(_dmcd, m) {
  m.doc() = "Directional mean curvature deconvolution and cartoon/texture/noise demixing";

  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

  m.def("forward_diff", [](const Array& f, int l, int L) { return to_array(forward_diff(to_image(f), l, DirectionBank(L))); },
        py::arg("f"), py::arg("l"), py::arg("L"));
  m.def("backward_diff", [](const Array& f, int l, int L) { return to_array(backward_diff(to_image(f), l, DirectionBank(L))); },
        py::arg("f"), py::arg("l"), py::arg("L"));
  m.def("directional_laplacian", [](const Array& f, int L) { return to_array(directional_laplacian(to_image(f), DirectionBank(L))); },
        py::arg("f"), py::arg("L"));
  m.def("dmc_norm", [](const Array& u, int L) { return dmc_norm(to_image(u), DirectionBank(L)); }, py::arg("u"), py::arg("L"));

  m.def("shrink", [](const Array& f, double alpha) { return to_array(shrink(to_image(f), alpha)); }, py::arg("f"),
        py::arg("alpha"));
  m.def("circular_convolve", [](const Array& f, const Array& h) { return to_array(circular_convolve(to_image(f), to_image(h))); },
        py::arg("f"), py::arg("h"));

  m.def(
      "make_blur_kernel",
      [](const std::string& spec, int rows, int cols) { return to_array(make_blur_kernel(parse_kernel(spec), Lattice(rows, cols))); },
      py::arg("spec"), py::arg("rows"), py::arg("cols"), "spec is gaussian:N, disk:N or delta; centered at index 0");
  m.def("add_noise", [](const Array& f, double sigma, std::uint64_t seed) { return to_array(add_noise(to_image(f), sigma, seed)); },
        py::arg("f"), py::arg("sigma"), py::arg("seed"));

  py::class_<MultiscaleFrameSet>(m, "MultiscaleFrames")
      .def(py::init([](int rows, int cols, int scales, int directions, double dilation, double c,
                       const std::string& family, const std::string& mode) {
             return MultiscaleFrameSet(Lattice(rows, cols),
                                       {scales, directions, dilation, c, parse_family(family), parse_mode(mode)});
           }),
           py::arg("rows"), py::arg("cols"), py::arg("scales") = 3, py::arg("directions") = 8, py::arg("dilation") = 2.0,
           py::arg("c") = 1.0, py::arg("family") = "phi-psi", py::arg("mode") = "discrete")
      .def("unity_residual", &MultiscaleFrameSet::unity_residual)
      .def("analyze",
           [](const MultiscaleFrameSet& fs, const Array& f) {
             const auto p = fs.analyze(to_image(f));
             py::list bands;
             for (const auto& b : p.bands) bands.append(to_array(b));
             return py::make_tuple(to_array(p.lowpass), bands);
           })
      .def("synthesize", [](const MultiscaleFrameSet& fs, const Array& lowpass, const std::vector<Array>& bands) {
        CoefficientPyramid p{to_image(lowpass), {}};
        for (const auto& b : bands) p.bands.push_back(to_image(b));
        return to_array(fs.synthesize(p));
      });

  m.def("mse", [](const Array& a, const Array& b) { return mse(to_image(a), to_image(b)); });
  m.def("mec", [](const Array& e, int block) { return mec(to_image(e), block); }, py::arg("error"), py::arg("block") = 10);
  m.def("sparsity", [](const Array& v) { return sparsity(to_image(v)); }, "percentage of nonzero sites");
  m.def("qq_r_squared", [](const Array& eps) { return qq_r_squared(qq_data(to_image(eps))); });

  m.def("load_image", [](const std::string& path) { return to_array(load_image(path)); });
  m.def(
      "save_image",
      [](const Array& f, const std::string& path, const std::string& mode) { save_image(to_image(f), path, parse_save_mode(mode)); },
      py::arg("f"), py::arg("path"), py::arg("mode") = "clamp");

  m.def(
      "demix",
      [](const Array& f, const Array& h, const py::kwargs& kw) {
        const ExperimentConfig cfg = config_from(kw);
        const Image fi = to_image(f), hi = to_image(h);
        Decomposition d = [&] {
          py::gil_scoped_release release;
          return demix(fi, hi, cfg.solver);
        }();
        return decomposition_dict(d);
      },
      py::arg("f"), py::arg("h"),
      "Solver parameters are keyword arguments named like the config keys (L, S, beta, mu2, nu_rho, tol, ...)");

  m.def(
      "run_experiment",
      [](const py::kwargs& kw) {
        const ExperimentConfig cfg = config_from(kw);
        ExperimentResult r = [&] {
          py::gil_scoped_release release;
          return run_experiment(cfg);
        }();
        py::dict out = decomposition_dict(r.decomposition);
        out["f0"] = to_array(r.f0);
        out["f"] = to_array(r.f);
        out["mse"] = r.metrics.mse;
        out["mec"] = r.metrics.mec;
        out["sparsity_percent"] = r.metrics.sparsity_percent;
        out["files"] = r.files;
        return out;
      },
      "Keyword arguments are config keys; preset= is applied where it appears");
}
