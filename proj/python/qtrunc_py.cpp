#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtrunc/bv.hpp"
#include "qtrunc/cipher.hpp"
#include "qtrunc/commands.hpp"
#include "qtrunc/config.hpp"
#include "qtrunc/error.hpp"
#include "qtrunc/oracle.hpp"
#include "qtrunc/truncated.hpp"
#include "qtrunc/walsh.hpp"

namespace py = pybind11;
using namespace qtrunc;

namespace {

RunConfig config(const std::string& text) { return config_from_json(nlohmann::json::parse(text)); }

std::vector<uint64_t> words(const AffineSolutionSet& s, uint64_t cap) {
    std::vector<uint64_t> out;
    if (s.empty) return out;
    for (const auto& w : enumerate(s, cap).members) out.push_back(w.bits());
    return out;
}

}  // namespace

PYBIND11_MODULE(_qtrunc, m) {
    m.doc() = "Truncated and boomerang differential search on small block ciphers";

    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

    m.def("sample_budget", &sample_budget, py::arg("n"), py::arg("sigma"), py::arg("tau"));

    m.def(
        "_complexity",
        [](int n, int mk, double sigma, double tau, int r, double enc) {
            return dump_report(to_json(complexity_report(n, mk, sigma, tau, r, enc)));
        },
        py::arg("n"), py::arg("m"), py::arg("sigma"), py::arg("tau"), py::arg("rounds"), py::arg("enc_gates"));

    m.def("_find_truncated", [](const std::string& cfg) {
        py::gil_scoped_release release;
        return run_find_truncated(config(cfg));
    });
    m.def("_find_boomerang", [](const std::string& cfg) {
        py::gil_scoped_release release;
        return run_find_boomerang(config(cfg));
    });
    m.def("_verify", [](const std::string& cfg, const std::string& report) {
        py::gil_scoped_release release;
        return run_verify(config(cfg), nlohmann::json::parse(report));
    });
    m.def("_attack", [](const std::string& cfg, const std::string& report) {
        py::gil_scoped_release release;
        return run_attack(config(cfg), nlohmann::json::parse(report));
    });

    py::class_<CommandOutput>(m, "_CommandOutput")
        .def_property_readonly("exit_code", [](const CommandOutput& o) { return o.exit_code; })
        .def_property_readonly("report", [](const CommandOutput& o) { return dump_report(o.report); })
        .def_property_readonly("csv", [](const CommandOutput& o) { return o.csv; });

    m.def(
        "walsh_spectrum",
        [](const std::vector<uint8_t>& table, int N) { return walsh_spectrum(table, N).coeffs; },
        py::arg("table"), py::arg("N"));

    m.def(
        "algorithm1",
        [](const std::vector<uint8_t>& table, int N, uint64_t q, uint64_t seed, uint64_t cap) {
            Rng rng(seed);
            auto r = algorithm1(table, N, q, rng);
            py::dict d;
            d["found"] = r.found;
            d["rank"] = r.rank;
            d["samples_used"] = r.samples_used;
            d["z0"] = words(r.z0, cap);
            d["z1"] = words(r.z1, cap);
            return d;
        },
        py::arg("table"), py::arg("N"), py::arg("q"), py::arg("seed") = 0, py::arg("cap") = kDefaultEnumerationCap);

    m.def(
        "key_fraction_above",
        [](const std::string& cipher, int t, uint64_t a, const std::string& b, double sigma, const std::string& dir) {
            auto c = make_cipher(nlohmann::json::parse(cipher));
            return key_fraction_above(*c, t, a, TruncatedDifference::parse(b), sigma, parse_direction(dir)).value();
        },
        py::arg("cipher"), py::arg("t"), py::arg("a"), py::arg("b"), py::arg("sigma"), py::arg("direction") = "forward");
}
