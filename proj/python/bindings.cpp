#include "clipofdm/bussgang.hpp"
#include "clipofdm/evm.hpp"
#include "clipofdm/experiments.hpp"
#include "clipofdm/lowerbound.hpp"
#include "clipofdm/rate.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace clipofdm;

namespace {

SubcarrierPlan plan_for(const std::string& scheme, std::size_t n)
{
    return SubcarrierPlan::make(parse_scheme(scheme), n);
}

ClipBiasConfig config_for(const SubcarrierPlan& plan, double gamma, double varsigma)
{
    return ClipBiasConfig::make_for(plan.scheme, frame_sigma(plan, kQpskPower), gamma, varsigma);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Clipping distortion, EVM bounds and achievable rate for DCO-/ACO-OFDM";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("db_to_amplitude", &db_to_amplitude);
    m.def("amplitude_to_db", &amplitude_to_db);

    m.def("dco_clip_error_power", &dco_clip_error_power, py::arg("gamma"), py::arg("varsigma"));
    m.def("dco_evm", &dco_evm, py::arg("gamma"), py::arg("varsigma") = 0.5);
    m.def("dco_optimal_bias", [] { return dco_optimal_bias(); });
    m.def("aco_clip_error_power", &aco_clip_error_power, py::arg("gamma"));
    m.def("aco_evm", &aco_evm, py::arg("gamma"));

    m.def(
        "clip_and_bias",
        [](const std::vector<double>& x, double sigma, double gamma, double varsigma) {
            return clip_and_bias(x, ClipBiasConfig::make(sigma, gamma, varsigma));
        },
        py::arg("x"), py::arg("sigma"), py::arg("gamma"), py::arg("varsigma"));

    m.def(
        "monte_carlo_evm",
        [](const std::string& scheme, std::size_t n, double gamma, double varsigma, std::size_t num_symbols,
           std::uint64_t seed) {
            const auto plan = plan_for(scheme, n);
            const auto r = monte_carlo_evm(plan, config_for(plan, gamma, varsigma), num_symbols, seed);
            return py::dict(py::arg("evm") = r.evm, py::arg("stderr") = r.stderr_batch,
                            py::arg("clip_error_power") = r.clip_error_power);
        },
        py::arg("scheme"), py::arg("n"), py::arg("gamma"), py::arg("varsigma"), py::arg("num_symbols"),
        py::arg("seed"));

    m.def(
        "evm_lower_bound",
        [](const std::string& scheme, std::size_t n, double gamma, std::size_t num_symbols, std::uint64_t seed) {
            const auto r = evm_lower_bound(plan_for(scheme, n), gamma, num_symbols, seed);
            return py::dict(py::arg("evm_lower_bound") = r.evm_lower_bound, py::arg("evm_scheme") = r.evm_scheme,
                            py::arg("mean_kt_residual") = r.mean_kt_residual,
                            py::arg("max_kt_residual") = r.max_kt_residual);
        },
        py::arg("scheme"), py::arg("n"), py::arg("gamma"), py::arg("num_symbols"), py::arg("seed"));

    m.def("alpha", &alpha, py::arg("gamma"), py::arg("varsigma"));
    m.def("bussgang_coeffs", &bussgang_coeffs, py::arg("gamma"), py::arg("varsigma"), py::arg("sigma"),
          py::arg("order"));
    m.def(
        "sdr_per_subcarrier",
        [](const std::string& scheme, std::size_t n, double gamma, double varsigma) {
            const auto plan = plan_for(scheme, n);
            const auto p = sdr_per_subcarrier(plan, config_for(plan, gamma, varsigma));
            return py::dict(py::arg("alpha") = p.alpha, py::arg("data_indices") = plan.data_indices,
                            py::arg("sdr") = p.sdr, py::arg("p_x") = p.p_x, py::arg("p_xbar") = p.p_xbar,
                            py::arg("p_d") = p.p_d);
        },
        py::arg("scheme"), py::arg("n"), py::arg("gamma"), py::arg("varsigma"));

    m.def(
        "optimal_operating_point",
        [](const std::string& scheme, std::size_t n, std::optional<double> eta_osnr_db,
           std::optional<double> eta_dsnr_db) {
            ConstraintPair c;
            if (eta_osnr_db) {
                c.osnr = db_to_amplitude(*eta_osnr_db);
            }
            if (eta_dsnr_db) {
                c.dsnr = db_to_amplitude(*eta_dsnr_db);
            }
            const auto s = parse_scheme(scheme);
            const auto op = optimize_operating_point(SubcarrierPlan::make(s, n), c, ChannelSpec::awgn(n),
                                                     default_gamma_grid(), default_varsigma_grid(s));
            return py::dict(py::arg("gamma") = op.gamma, py::arg("varsigma") = op.varsigma,
                            py::arg("rate") = op.rate);
        },
        py::arg("scheme"), py::arg("n"), py::arg("eta_osnr_db"), py::arg("eta_dsnr_db"));

    m.def("ceiling_bounce_response",
          [](double delay_spread, double sample_rate, std::size_t n) {
              return ceiling_bounce_response(delay_spread, sample_rate, n).h_mag2;
          },
          py::arg("delay_spread"), py::arg("sample_rate"), py::arg("n"));

    m.def("presets", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& p : presets()) {
            out.emplace_back(p.name, p.figure);
        }
        return out;
    });

    m.def(
        "run_experiment",
        [](const std::map<std::string, std::string>& settings, const std::string& preset) {
            Settings s;
            if (!preset.empty()) {
                s.merge(find_preset(preset).settings);
            }
            for (const auto& [k, v] : settings) {
                s.set(k, v);
            }
            auto out = run_experiment(ExperimentConfig::from_settings(s));
            return py::make_tuple(out.table.text(), out.summary);
        },
        py::arg("settings") = std::map<std::string, std::string>{}, py::arg("preset") = "",
        "Run one experiment; returns (csv_text, summary).");
}
