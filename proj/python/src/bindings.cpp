#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "photonstats/errors.hpp"
#include "photonstats/estimators.hpp"
#include "photonstats/model_io.hpp"
#include "photonstats/photon_stats.hpp"
#include "photonstats/simulation.hpp"
#include "photonstats/verify.hpp"
#include "photonstats/wishart.hpp"

namespace py = pybind11;
using namespace photonstats;

namespace {

std::string normalized(std::string s) {
    std::replace(s.begin(), s.end(), '-', '_');
    return s;
}

SeriesAccel accel_from(const std::string& name) {
    auto s = normalized(name);
    if (s == "none") return SeriesAccel::none;
    if (s == "euler") return SeriesAccel::euler;
    throw ValidationError("unknown series acceleration: " + name);
}

ZeroPolicy zero_policy_from(const std::string& name) {
    auto s = normalized(name);
    if (s == "marginalize") return ZeroPolicy::marginalize;
    if (s == "formal") return ZeroPolicy::formal;
    throw ValidationError("unknown zero policy: " + name);
}

JointCumulantPolicy cumulant_policy_from(const std::string& name) {
    auto s = normalized(name);
    if (s == "standard") return JointCumulantPolicy::standard;
    if (s == "restricted") return JointCumulantPolicy::restricted;
    throw ValidationError("unknown joint cumulant policy: " + name);
}

RandomizedKind randomized_kind_from(const std::string& name) {
    auto s = normalized(name);
    if (s == "moment") return RandomizedKind::moment;
    if (s == "cumulant") return RandomizedKind::cumulant;
    if (s == "factorial_moment") return RandomizedKind::factorial_moment;
    if (s == "factorial_cumulant") return RandomizedKind::factorial_cumulant;
    throw ValidationError("unknown randomized statistic kind: " + name);
}

IntegerPartition partition_from(std::vector<int> parts) {
    for (int p : parts)
        if (p < 1) throw ValidationError("partition parts must be positive");
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    return IntegerPartition{std::move(parts)};
}

py::array_t<double> rows_to_array(const std::vector<std::vector<double>>& rows, int d) {
    py::array_t<double> out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(d)});
    auto w = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < w.shape(0); ++i)
        for (py::ssize_t j = 0; j < w.shape(1); ++j)
            w(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

py::array_t<long long> rows_to_array(const std::vector<std::vector<long long>>& rows, int d) {
    py::array_t<long long> out(
        {static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(d)});
    auto w = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < w.shape(0); ++i)
        for (py::ssize_t j = 0; j < w.shape(1); ++j)
            w(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

struct PySampleBatch {
    py::array_t<double> intensities;
    std::optional<py::array_t<long long>> counts;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string model_digest;
    int n = 0;
    int d = 0;
};

PySampleBatch wrap_batch(const SampleBatch& b) {
    PySampleBatch out;
    out.n = b.n;
    out.d = b.d;
    out.seed = b.seed;
    out.stream = b.stream_index;
    out.model_digest = b.model_digest;
    out.intensities = rows_to_array(b.intensities, b.d);
    if (!b.counts.empty()) out.counts = rows_to_array(b.counts, b.d);
    return out;
}

Sample sample_from(const std::vector<double>& xs) { return Sample::from_doubles(xs); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Photon-counting statistics for Wishart-modeled intensities";
    m.attr("__version__") = "0.1.0";

    py::class_<WishartModel>(m, "WishartModel")
        .def_readonly("d", &WishartModel::d)
        .def_readonly("p", &WishartModel::p)
        .def_property_readonly("sigma", [](const WishartModel& w) { return w.sigma; })
        .def_property_readonly("mean_matrix",
                               [](const WishartModel& w) { return w.mean_matrix; })
        .def_property_readonly("means", [](const WishartModel& w) { return w.means; })
        .def_property_readonly("has_means", &WishartModel::has_means)
        .def_property_readonly("digest", [](const WishartModel& w) { return model_digest(w); })
        .def("__repr__", [](const WishartModel& w) {
            return "<WishartModel d=" + std::to_string(w.d) + " p=" + std::to_string(w.p) +
                   (w.has_means() ? " noncentral" : " central") + ">";
        });

    py::class_<CountModel>(m, "CountModel")
        .def("moments",
             [](const CountModel& c, int K) {
                 std::vector<double> out;
                 for (const auto& v : c.moments(K)) out.push_back(to_double(v));
                 return out;
             },
             py::arg("order"))
        .def("__repr__", [](const CountModel& c) {
            switch (c.kind) {
                case CountModel::Kind::deterministic:
                    return "<CountModel deterministic p=" + std::to_string(c.p) + ">";
                case CountModel::Kind::poisson:
                    return "<CountModel poisson mu=" + std::to_string(to_double(c.mu)) + ">";
                default:
                    return std::string("<CountModel custom>");
            }
        });

    py::class_<SeriesResult>(m, "SeriesResult")
        .def_readonly("value", &SeriesResult::value)
        .def_readonly("truncation_order", &SeriesResult::truncation_order)
        .def_readonly("last_term_magnitude", &SeriesResult::last_term_magnitude)
        .def_readonly("accelerated", &SeriesResult::accelerated)
        .def_readonly("converged", &SeriesResult::converged)
        .def("__repr__", [](const SeriesResult& r) {
            return "<SeriesResult value=" + std::to_string(r.value) +
                   (r.converged ? " converged>" : " NOT CONVERGED>");
        });

    py::class_<PySampleBatch>(m, "SampleBatch")
        .def_readonly("intensities", &PySampleBatch::intensities)
        .def_readonly("counts", &PySampleBatch::counts)
        .def_readonly("seed", &PySampleBatch::seed)
        .def_readonly("stream", &PySampleBatch::stream)
        .def_readonly("model_digest", &PySampleBatch::model_digest)
        .def_readonly("n", &PySampleBatch::n)
        .def_readonly("d", &PySampleBatch::d)
        .def("__repr__", [](const PySampleBatch& b) {
            return "<SampleBatch n=" + std::to_string(b.n) + " d=" + std::to_string(b.d) +
                   (b.counts ? " with counts>" : ">");
        });

    py::class_<EmpiricalCumulants>(m, "EmpiricalCumulants")
        .def_readonly("values", &EmpiricalCumulants::values)
        .def_readonly("std_errors", &EmpiricalCumulants::std_errors);

    py::class_<ParsedModel>(m, "ParsedModel")
        .def_readonly("model", &ParsedModel::model)
        .def_readonly("count", &ParsedModel::count);

    py::class_<VerifyCheck>(m, "VerifyCheck")
        .def_readonly("suite", &VerifyCheck::suite)
        .def_readonly("name", &VerifyCheck::name)
        .def_readonly("passed", &VerifyCheck::pass)
        .def_readonly("detail", &VerifyCheck::detail);

    py::class_<VerifyReport>(m, "VerifyReport")
        .def_readonly("checks", &VerifyReport::checks)
        .def_readonly("notes", &VerifyReport::notes)
        .def("all_pass", &VerifyReport::all_pass);

    // Model construction and serialization.
    m.def(
        "make_model",
        [](const ZMatrix& sigma, int p, const std::vector<ZVector>& means, double herm_tol) {
            return make_wishart_model(sigma, p, means, herm_tol);
        },
        py::arg("sigma"), py::arg("p"), py::arg("means") = std::vector<ZVector>{},
        py::arg("herm_tol") = kHermitianTol,
        "Build an intensity model from a Hermitian covariance, wave count, and "
        "optional per-wave means.");
    m.def("parse_model", &parse_model_json, py::arg("text"));
    m.def("load_model", &parse_model_file, py::arg("path"));
    m.def(
        "serialize_model",
        [](const WishartModel& model, const std::optional<CountModel>& count) {
            return serialize_model(model, count);
        },
        py::arg("model"), py::arg("count") = std::nullopt);
    m.def("model_digest", &model_digest, py::arg("model"));
    m.def("single_wave", &single_wave, py::arg("model"), py::arg("wave"),
          "The one-wave model carrying the given wave's mean (1-based).");

    // Count models.
    m.def("count_deterministic", &count_deterministic, py::arg("p"));
    m.def("count_poisson", &count_poisson, py::arg("mu"));
    m.def("count_custom", &count_custom, py::arg("moments"));

    // Trace statistics of the intensity matrix.
    m.def("trace_moment", &trace_moment, py::arg("model"), py::arg("k"));
    m.def("trace_cumulant", &trace_cumulant, py::arg("model"), py::arg("k"));

    // Overall photocounter.
    m.def("overall_moment", &overall_moment, py::arg("model"), py::arg("k"));
    m.def("overall_cumulant", &overall_cumulant, py::arg("model"), py::arg("k"));
    m.def("overall_factorial_moment", &overall_factorial_moment, py::arg("model"), py::arg("k"));
    m.def("overall_factorial_cumulant", &overall_factorial_cumulant, py::arg("model"),
          py::arg("k"));
    m.def(
        "overall_pmf",
        [](const WishartModel& model, int k, int truncation, const std::string& accel,
           double tol) { return overall_pmf(model, k, truncation, accel_from(accel), tol); },
        py::arg("model"), py::arg("k"), py::arg("truncation") = kDefaultTruncation,
        py::arg("accel") = "none", py::arg("tol") = kDefaultSeriesTol);

    // Joint photocounter.
    m.def(
        "joint_moment",
        [](const WishartModel& model, const MultiIndex& k, const std::string& zero_policy,
           int bound) { return joint_moment(model, k, zero_policy_from(zero_policy), bound); },
        py::arg("model"), py::arg("k"), py::arg("zero_policy") = "marginalize",
        py::arg("bound") = kMaxJointOrder);
    m.def(
        "joint_cumulant",
        [](const WishartModel& model, const MultiIndex& k, const std::string& policy,
           int bound) { return joint_cumulant(model, k, cumulant_policy_from(policy), bound); },
        py::arg("model"), py::arg("k"), py::arg("policy") = "standard",
        py::arg("bound") = kMaxJointOrder);
    m.def("joint_factorial_moment", &joint_factorial_moment, py::arg("model"), py::arg("k"),
          py::arg("bound") = kMaxJointOrder);
    m.def("joint_factorial_cumulant", &joint_factorial_cumulant, py::arg("model"), py::arg("k"),
          py::arg("bound") = kMaxJointOrder);
    m.def(
        "joint_pmf",
        [](const WishartModel& model, const MultiIndex& k, int truncation,
           const std::string& accel, double tol, int bound) {
            return joint_pmf_series(model, k, truncation, accel_from(accel), tol, bound);
        },
        py::arg("model"), py::arg("k"), py::arg("truncation") = kDefaultTruncation,
        py::arg("accel") = "none", py::arg("tol") = kDefaultSeriesTol,
        py::arg("bound") = kMaxJointOrder);

    // Randomized wave count.
    m.def(
        "randomized_stat",
        [](const WishartModel& model, const CountModel& count, const std::string& kind, int k) {
            return randomized_stat(model, count, randomized_kind_from(kind), k);
        },
        py::arg("model"), py::arg("count"), py::arg("kind"), py::arg("k"));

    // Estimators.
    m.def(
        "polykay",
        [](const std::vector<double>& xs, const std::vector<int>& parts) {
            return polykay(sample_from(xs), partition_from(parts));
        },
        py::arg("values"), py::arg("parts"),
        "Unbiased estimator of the product of population cumulants indexed by parts.");
    m.def(
        "factorial_moment_ustat",
        [](const std::vector<double>& xs, int k) {
            return factorial_moment_ustat(sample_from(xs), k);
        },
        py::arg("values"), py::arg("k"));
    m.def(
        "spectral_polykay",
        [](const ZMatrix& w, const std::vector<int>& parts, double herm_tol) {
            return spectral_polykay(SpectralSample::from_matrix(w, herm_tol),
                                    partition_from(parts));
        },
        py::arg("matrix"), py::arg("parts"), py::arg("herm_tol") = kHermitianTol,
        "Dimension-normalized trace-cumulant product estimator from one matrix draw.");
    m.def(
        "spectral_polykay_traces",
        [](int d, const std::vector<double>& traces, const std::vector<int>& parts) {
            return spectral_polykay(SpectralSample::from_trace_doubles(d, traces),
                                    partition_from(parts));
        },
        py::arg("d"), py::arg("traces"), py::arg("parts"));
    m.def(
        "spectral_weights",
        [](const std::vector<int>& parts, int d) {
            auto w = spectral_weights(partition_from(parts), d);
            std::vector<std::pair<std::vector<int>, double>> weights;
            for (const auto& [mu, coeff] : w.weights)
                weights.emplace_back(mu.parts, to_double(coeff));
            return py::make_tuple(to_double(w.prefactor), weights);
        },
        py::arg("parts"), py::arg("d"),
        "(prefactor, [(trace-power partition, weight), ...]) for the spectral estimator.");
    m.def("empirical_cumulants",
          py::overload_cast<const std::vector<double>&, int>(&empirical_cumulants),
          py::arg("values"), py::arg("order"));

    // Sampling.
    m.def(
        "sample_intensities",
        [](const WishartModel& model, int n, std::uint64_t seed, std::uint64_t stream,
           int workers) {
            return wrap_batch(sample_intensities(model, n, RngStream{seed, stream}, workers));
        },
        py::arg("model"), py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0,
        py::arg("workers") = 1);
    m.def(
        "sample_counts",
        [](const WishartModel& model, int n, std::uint64_t seed, std::uint64_t stream,
           int workers) {
            return wrap_batch(sample_counts(model, n, RngStream{seed, stream}, workers));
        },
        py::arg("model"), py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0,
        py::arg("workers") = 1);
    m.def(
        "sample_counts_randomized",
        [](const WishartModel& model, const CountModel& count, int n, std::uint64_t seed,
           std::uint64_t stream, int workers) {
            return wrap_batch(
                sample_counts_randomized(model, count, n, RngStream{seed, stream}, workers));
        },
        py::arg("model"), py::arg("count"), py::arg("n"), py::arg("seed") = 0,
        py::arg("stream") = 0, py::arg("workers") = 1);
    m.def(
        "sample_wishart",
        [](const WishartModel& model, std::uint64_t seed, std::uint64_t stream,
           std::uint64_t draw) { return sample_wishart(model, RngStream{seed, stream}, draw); },
        py::arg("model"), py::arg("seed") = 0, py::arg("stream") = 0, py::arg("draw") = 0,
        "One draw of the full intensity matrix.");

    // Closed-form verification report.
    m.def("run_verification", &run_verification, py::arg("suites") = std::vector<std::string>{},
          py::arg("seed") = 2026);
}
