#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lipstd/cli.hpp"
#include "lipstd/dataio.hpp"
#include "lipstd/harness.hpp"
#include "lipstd/scaler.hpp"
#include "lipstd/special.hpp"

namespace py = pybind11;
using namespace lipstd;

namespace {

expfam::Family fam(const std::string& name) { return expfam::family_from_name(name); }

std::vector<std::uint8_t> to_mask(const std::vector<int>& mask) {
    return {mask.begin(), mask.end()};
}

py::dict estimate_to_dict(const smoothness::SmoothnessEstimate& est) {
    py::dict d;
    d["per_param"] = est.per_param;
    d["total"] = est.total;
    d["at_params"] = est.at_params.values;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Likelihood-smoothness scaling for mixed tabular data";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("log_gamma", &log_gamma, py::arg("x"));
    m.def("digamma", &digamma, py::arg("x"));
    m.def("trigamma", &trigamma, py::arg("x"));

    m.def(
        "to_natural",
        [](const std::string& family, const std::vector<double>& params) {
            return expfam::to_natural(fam(family), expfam::CanonicalParams{params}).values;
        },
        py::arg("family"), py::arg("params"));
    m.def(
        "from_natural",
        [](const std::string& family, const std::vector<double>& nat) {
            return expfam::from_natural(fam(family), expfam::NaturalParams{nat}).values;
        },
        py::arg("family"), py::arg("nat"));
    m.def(
        "log_pdf",
        [](const std::string& family, const std::vector<double>& nat, double x) {
            return expfam::log_pdf(fam(family), expfam::NaturalParams{nat}, x);
        },
        py::arg("family"), py::arg("nat"), py::arg("x"));
    m.def(
        "fit_empirical",
        [](const std::string& family, const std::vector<double>& data, const std::vector<int>& mask) {
            const auto m8 = to_mask(mask);
            return expfam::fit_empirical(fam(family), data, m8).values;
        },
        py::arg("family"), py::arg("data"), py::arg("mask") = std::vector<int>{});
    m.def(
        "scale_natural",
        [](const std::string& family, const std::vector<double>& nat, double omega) {
            return expfam::scale_natural(fam(family), expfam::NaturalParams{nat}, omega).values;
        },
        py::arg("family"), py::arg("nat"), py::arg("omega"));
    m.def(
        "unscale_natural",
        [](const std::string& family, const std::vector<double>& nat, double omega) {
            return expfam::unscale_natural(fam(family), expfam::NaturalParams{nat}, omega).values;
        },
        py::arg("family"), py::arg("nat"), py::arg("omega"));
    m.def(
        "transform_data",
        [](const std::string& family, const std::vector<double>& data, double omega) {
            return expfam::transform_data(fam(family), data, omega);
        },
        py::arg("family"), py::arg("data"), py::arg("omega"));

    m.def(
        "estimate_smoothness",
        [](const std::string& family, const std::vector<double>& nat) {
            return estimate_to_dict(smoothness::estimate(fam(family), expfam::NaturalParams{nat}));
        },
        py::arg("family"), py::arg("nat"));
    m.def(
        "estimate_smoothness_fd",
        [](const std::string& family, const std::vector<double>& nat) {
            return estimate_to_dict(smoothness::estimate_fd(fam(family), expfam::NaturalParams{nat}));
        },
        py::arg("family"), py::arg("nat"));
    m.def(
        "smoothness_after_standardization",
        [](const std::string& family, const std::vector<double>& params) {
            return estimate_to_dict(
                smoothness::smoothness_after_standardization(fam(family), expfam::CanonicalParams{params}));
        },
        py::arg("family"), py::arg("params"));

    m.def(
        "solve_omega",
        [](const std::string& family, const std::vector<double>& nat, double l_star) {
            scaler::ScalingTarget target;
            target.l_star = l_star;
            const scaler::ScalingResult res =
                scaler::solve_omega(fam(family), expfam::NaturalParams{nat}, target);
            py::dict d;
            d["omega"] = res.omega;
            d["achieved_total"] = res.achieved.total;
            d["residual"] = res.residual;
            d["method"] = res.method == scaler::SolveMethod::ClosedForm ? "closed_form" : "bisection";
            d["infeasible"] = res.infeasible;
            return d;
        },
        py::arg("family"), py::arg("nat"), py::arg("l_star"));
    m.def("solve_quartic_positive_root", &scaler::solve_quartic_positive_root, py::arg("l1"),
          py::arg("l2"), py::arg("l_star"));
    m.def(
        "baseline_omega",
        [](const std::string& method, const std::vector<double>& data, const std::vector<int>& mask) {
            scaler::BaselineMethod bm;
            if (method == "std") {
                bm = scaler::BaselineMethod::Std;
            } else if (method == "max") {
                bm = scaler::BaselineMethod::Max;
            } else if (method == "iqr") {
                bm = scaler::BaselineMethod::Iqr;
            } else {
                throw Error(errc::usage, "baseline method must be std, max, or iqr");
            }
            const auto m8 = to_mask(mask);
            return scaler::baseline_omega(bm, data, m8);
        },
        py::arg("method"), py::arg("data"), py::arg("mask") = std::vector<int>{});

    m.def(
        "apply_gamma_trick",
        [](const std::vector<double>& column, double beta_a, double beta_b, std::uint64_t seed) {
            tricks::NoiseConfig noise{beta_a, beta_b, seed};
            const tricks::GammaTrickResult res = tricks::apply_gamma_trick(column, {}, noise);
            return py::make_tuple(res.values, res.gamma_fit.values);
        },
        py::arg("column"), py::arg("beta_a") = 1.1, py::arg("beta_b") = 30.0, py::arg("seed") = 0);
    m.def(
        "apply_bernoulli_trick",
        [](const std::vector<double>& column, int k) {
            return tricks::apply_bernoulli_trick(column, {}, k).columns;
        },
        py::arg("column"), py::arg("k"));
    m.def(
        "recover_bernoulli",
        [](const std::vector<double>& gamma_params, double beta_a, double beta_b) {
            return tricks::recover_bernoulli(expfam::CanonicalParams{gamma_params},
                                             tricks::NoiseConfig{beta_a, beta_b, 0});
        },
        py::arg("gamma_params"), py::arg("beta_a") = 1.1, py::arg("beta_b") = 30.0);
    m.def(
        "recover_poisson",
        [](const std::vector<double>& gamma_params, double beta_a, double beta_b, double delta) {
            return tricks::recover_poisson(expfam::CanonicalParams{gamma_params},
                                           tricks::NoiseConfig{beta_a, beta_b, 0}, delta);
        },
        py::arg("gamma_params"), py::arg("beta_a") = 1.1, py::arg("beta_b") = 30.0,
        py::arg("delta") = 1e-6);
    m.def(
        "recover_categorical",
        [](const std::vector<double>& means) {
            const tricks::CategoricalRecovery r = tricks::recover_categorical(means);
            return py::make_tuple(r.pi, r.degenerate);
        },
        py::arg("means"));
    m.def(
        "end_to_end_recovery_error",
        [](const std::string& kind, const std::vector<double>& grid, std::size_t n, std::uint64_t seed) {
            const tricks::DiscreteKind dk =
                kind == "bernoulli" ? tricks::DiscreteKind::Bernoulli : tricks::DiscreteKind::Poisson;
            return tricks::end_to_end_recovery_error(dk, grid, n, seed);
        },
        py::arg("kind"), py::arg("grid"), py::arg("n"), py::arg("seed"));

    m.def(
        "run_cli", [](const std::vector<std::string>& args) { return cli::run(args); },
        py::arg("args"), "Run a CLI subcommand in-process; returns the exit code");

#ifdef VERSION_INFO
#define LIPSTD_STR2(x) #x
#define LIPSTD_STR(x) LIPSTD_STR2(x)
    m.attr("__version__") = LIPSTD_STR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
