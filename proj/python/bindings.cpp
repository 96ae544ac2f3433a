#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>

#include "couplemap/ensemble.hpp"
#include "couplemap/error.hpp"
#include "couplemap/metrics.hpp"
#include "couplemap/netmap.hpp"
#include "couplemap/series.hpp"
#include "couplemap/synth.hpp"

namespace py = pybind11;
using namespace couplemap;

namespace {

template <class T>
py::array_t<T> to_array(std::span<const T> xs) {
    return py::array_t<T>(static_cast<py::ssize_t>(xs.size()), xs.data());
}

py::dict report_dict(const MeasureReport& r) {
    py::dict d;
    for (std::size_t i = 0; i < kMeasureNames.size(); ++i) d[py::str(std::string(kMeasureNames[i]))] = r.values[i];
    return d;
}

CouplingNetwork network_from_array(py::array_t<std::uint64_t, py::array::c_style | py::array::forcecast> w) {
    if (w.ndim() != 2 || w.shape(0) != w.shape(1))
        throw Error(ErrorKind::InvalidArgument, "weights must be a square matrix");
    const auto b = static_cast<std::size_t>(w.shape(0));
    std::vector<std::uint64_t> v(w.data(), w.data() + b * b);
    std::uint64_t total = 0;
    for (auto x : v) total += x;
    return CouplingNetwork(b, std::move(v), total);
}

}  // namespace

PYBIND11_MODULE(_couplemap, m) {
    m.doc() = "Amplitude coupling networks of time-series pairs.";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result([&] { return py::exception<Error>(m, "CouplemapError", PyExc_RuntimeError); });
    // Instances carry the error kind and detail as attributes.
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object type = error_type.get_stored();
            py::object inst = type(e.what());
            inst.attr("kind") = std::string(to_string(e.kind()));
            inst.attr("detail") = e.detail();
            PyErr_SetObject(type.ptr(), inst.ptr());
        }
    });

    py::enum_<SeriesKind>(m, "SeriesKind")
        .value("raw", SeriesKind::raw)
        .value("log_return", SeriesKind::log_return)
        .value("standardized", SeriesKind::standardized);
    py::enum_<TimeAxis>(m, "TimeAxis").value("date", TimeAxis::date).value("index", TimeAxis::index);

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init([](std::vector<double> values) { return TimeSeries::indexed(std::move(values)); }),
             py::arg("values"))
        .def_static("from_dates",
                    [](const std::vector<std::string>& dates, std::vector<double> values) {
                        std::vector<std::int64_t> ts;
                        ts.reserve(dates.size());
                        for (const auto& d : dates) ts.push_back(parse_iso_date(d));
                        return TimeSeries(TimeAxis::date, std::move(ts), std::move(values));
                    },
                    py::arg("dates"), py::arg("values"))
        .def_static("load_csv", &load_csv, py::arg("path"), py::arg("value_column") = "value")
        .def_property_readonly("values", [](const TimeSeries& s) { return to_array(s.values()); })
        .def_property_readonly("timestamps", [](const TimeSeries& s) { return to_array(s.timestamps()); })
        .def_property_readonly("kind", &TimeSeries::kind)
        .def_property_readonly("axis", &TimeSeries::axis)
        .def("label", &TimeSeries::label)
        .def("save_csv", [](const TimeSeries& s, const std::filesystem::path& p) { save_csv(s, p); })
        .def("__len__", &TimeSeries::size)
        .def("__eq__", [](const TimeSeries& a, const TimeSeries& b) { return a == b; });

    py::class_<AlignedPair>(m, "AlignedPair")
        .def_readonly("x", &AlignedPair::x)
        .def_readonly("y", &AlignedPair::y)
        .def("__len__", &AlignedPair::common_length);

    m.def("align_pair", &align_pair, py::arg("a"), py::arg("b"));
    m.def("log_returns", &log_returns, py::arg("series"));
    m.def("standardize", &standardize, py::arg("series"));

    m.def("generate_fgn",
          [](double hurst, std::size_t length, std::uint64_t seed) { return generate_fgn({hurst, length, seed}); },
          py::arg("hurst"), py::arg("length") = 2000, py::arg("seed") = 0);
    m.def("fgn_autocovariance", &fgn_autocovariance, py::arg("hurst"), py::arg("lag"));
    m.def("estimate_hurst", &estimate_hurst, py::arg("series"));
    m.def("surrogate", &surrogate, py::arg("series"), py::arg("seed"));
    m.def("spectrum", [](const TimeSeries& s) {
        const auto sp = spectrum_of(s);
        return py::make_tuple(to_array<double>(sp.amplitudes), to_array<double>(sp.phases));
    });

    py::class_<CouplingNetwork>(m, "CouplingNetwork")
        .def(py::init(&network_from_array), py::arg("weights"))
        .def_property_readonly("bin_count", &CouplingNetwork::bin_count)
        .def_property_readonly("sample_count", &CouplingNetwork::sample_count)
        .def_property_readonly("weights",
                               [](const CouplingNetwork& n) {
                                   const auto b = static_cast<py::ssize_t>(n.bin_count());
                                   return to_array(n.weights()).reshape({b, b});
                               })
        .def("joint_probability",
             [](const CouplingNetwork& n) {
                 const auto jp = joint_probability(n);
                 const auto b = static_cast<py::ssize_t>(jp.bin_count);
                 return to_array<double>(jp.p).reshape({b, b});
             })
        .def("transposed", &CouplingNetwork::transposed)
        .def("__eq__", [](const CouplingNetwork& a, const CouplingNetwork& b) { return a == b; });

    m.def("discretize", py::overload_cast<const TimeSeries&, std::size_t>(&discretize), py::arg("series"),
          py::arg("bins"));
    m.def("map_pair", &map_pair, py::arg("pair"), py::arg("bins") = 50);
    m.def("map_lagged", &map_lagged, py::arg("series"), py::arg("lag") = 1, py::arg("bins") = 50);

    m.attr("MEASURE_NAMES") = [] {
        py::list names;
        for (auto n : kMeasureNames) names.append(std::string(n));
        return py::tuple(names);
    }();

    m.def(
        "measure_all",
        [](const CouplingNetwork& net) {
            const auto r = measure_all(net);
            return py::make_tuple(report_dict(r), r.flags);
        },
        py::arg("network"), "Returns (values by measure name, flagged measure names).");
    m.def("deformation_ratio", [](const CouplingNetwork& n) { return deformation_ratio(joint_probability(n)); });
    m.def("detect_communities", &detect_communities, py::arg("network"));

    m.def("z_score", &z_score, py::arg("level") = 0.90);
    m.def(
        "confidence_interval",
        [](const std::vector<double>& xs, double level) {
            const auto ci = confidence_interval(xs, level);
            return py::make_tuple(ci.mean, ci.half_width);
        },
        py::arg("samples"), py::arg("level") = 0.90);

    py::class_<SummaryRow>(m, "SummaryRow")
        .def_readonly("measure_name", &SummaryRow::measure_name)
        .def_readonly("mean", &SummaryRow::mean)
        .def_readonly("half_width", &SummaryRow::half_width)
        .def_readonly("n", &SummaryRow::n)
        .def_readonly("flags", &SummaryRow::flags);

    py::class_<SystemSummary>(m, "SystemSummary")
        .def_readonly("system", &SystemSummary::system)
        .def_readonly("rows", &SystemSummary::rows)
        .def("row", &SystemSummary::row, py::return_value_policy::reference_internal)
        .def("replica_values", [](const SystemSummary& s) {
            py::list out;
            for (const auto& r : s.replicas) out.append(report_dict(r));
            return out;
        });

    m.def(
        "run_fgn_ensemble",
        [](std::vector<double> hurst, std::size_t replicas, std::size_t length, std::size_t bins, std::size_t lag,
           std::uint64_t seed, double level, const std::string& mode, std::size_t threads) {
            EnsembleConfig cfg;
            cfg.hurst_values = std::move(hurst);
            cfg.replicas_per_h = replicas;
            cfg.series_length = length;
            cfg.bin_count = bins;
            cfg.lag = lag;
            cfg.master_seed = seed;
            cfg.level = level;
            if (mode == "lagged")
                cfg.mode = CouplingMode::lagged;
            else if (mode == "pair")
                cfg.mode = CouplingMode::pair;
            else
                throw Error(ErrorKind::InvalidArgument, "mode must be 'lagged' or 'pair'");
            cfg.threads = threads;
            py::gil_scoped_release release;
            return run_fgn_ensemble(cfg);
        },
        py::arg("hurst_values") = EnsembleConfig{}.hurst_values, py::arg("replicas_per_h") = 32,
        py::arg("series_length") = 2000, py::arg("bin_count") = 50, py::arg("lag") = 1, py::arg("seed") = 0,
        py::arg("level") = 0.90, py::arg("mode") = "lagged", py::arg("threads") = 0);

    m.def(
        "run_surrogate_pair",
        [](const AlignedPair& pair, std::size_t replicas, std::size_t bins, std::uint64_t seed, double level,
           std::string system, std::size_t threads) {
            SurrogateConfig cfg{replicas, bins, seed, level, threads};
            py::gil_scoped_release release;
            return run_surrogate_pair(pair, cfg, std::move(system));
        },
        py::arg("pair"), py::arg("replicas") = 32, py::arg("bin_count") = 50, py::arg("seed") = 0,
        py::arg("level") = 0.90, py::arg("system") = "surrogate", py::arg("threads") = 0);

    m.def(
        "radar_normalize",
        [](const std::vector<std::pair<std::string, py::dict>>& systems, const std::string& baseline) {
            std::vector<SystemVector> vs;
            for (const auto& [name, values] : systems) {
                SystemVector v{name, {}, {}};
                for (auto [k, x] : values) {
                    v.measures.push_back(py::cast<std::string>(k));
                    v.values.push_back(py::cast<double>(x));
                }
                vs.push_back(std::move(v));
            }
            const auto rep = radar_normalize(vs, baseline);
            py::dict out;
            for (const auto& e : rep.systems) {
                py::dict norm;
                for (std::size_t i = 0; i < rep.measures.size(); ++i) norm[py::str(rep.measures[i])] = e.normalized[i];
                out[py::str(e.name)] = py::make_tuple(norm, e.distance_to_uncoupled);
            }
            return out;
        },
        py::arg("systems"), py::arg("baseline") = std::string(kUncoupledBaseline),
        "systems: [(name, {measure: value})]. Returns {name: (normalized, distance)}.");
}
