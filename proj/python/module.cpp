#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "carpets/config.hpp"
#include "carpets/deviation.hpp"
#include "carpets/experiment.hpp"
#include "carpets/observables.hpp"

namespace py = pybind11;
using namespace carpets;

namespace {

std::vector<Digit> to_digits(const std::vector<std::pair<int, int>>& pairs) {
    std::vector<Digit> out;
    out.reserve(pairs.size());
    for (const auto& [i, j] : pairs)
        out.push_back(Digit{i, j});
    return out;
}

std::vector<std::pair<int, int>> from_digits(const std::vector<Digit>& digits) {
    std::vector<std::pair<int, int>> out;
    out.reserve(digits.size());
    for (const Digit& d : digits)
        out.emplace_back(d.i, d.j);
    return out;
}

} // namespace

PYBIND11_MODULE(carpetlab, m) {
    m.doc() = "dimensions, local observables and deviation statistics of grid "
              "self-affine carpets";

    py::register_exception<Error>(m, "CarpetError");

    py::class_<Carpet>(m, "Carpet")
        .def_static(
            "create",
            [](int mm, int nn, const std::vector<std::pair<int, int>>& digits) {
                return Carpet::create(mm, nn, to_digits(digits));
            },
            py::arg("m"), py::arg("n"), py::arg("digits"))
        .def_property_readonly("m", &Carpet::m)
        .def_property_readonly("n", &Carpet::n)
        .def_property_readonly("digits",
                               [](const Carpet& c) { return from_digits(c.digits()); })
        .def_property_readonly("column_counts", &Carpet::column_counts)
        .def_property_readonly("occupied_columns", &Carpet::occupied_columns)
        .def_property_readonly("max_column_count", &Carpet::max_column_count)
        .def("uniform_fibres", &Carpet::uniform_fibres)
        .def("gamma", &Carpet::gamma)
        .def("assouad_dim", &Carpet::assouad_dim)
        .def("box_dim", &Carpet::box_dim)
        .def("hausdorff_dim", &Carpet::hausdorff_dim)
        .def("gamma_ceil", &Carpet::gamma_ceil, py::arg("k"))
        .def(
            "render_depth",
            [](const Carpet& c, int k, std::uint64_t cap) {
                std::vector<std::tuple<double, double, double, double>> out;
                for (const Rect& r : c.render_depth(k, cap))
                    out.emplace_back(r.x, r.y, r.width, r.height);
                return out;
            },
            py::arg("k"), py::arg("cap") = 1000000ull);

    py::class_<FibreMoments>(m, "FibreMoments")
        .def_readonly("mean", &FibreMoments::mean)
        .def_readonly("variance", &FibreMoments::variance);

    py::class_<BernoulliMeasure>(m, "BernoulliMeasure")
        .def_static(
            "from_weights",
            [](const Carpet& c, const std::vector<std::pair<std::pair<int, int>, double>>& w) {
                std::vector<std::pair<Digit, double>> table;
                table.reserve(w.size());
                for (const auto& [d, p] : w)
                    table.emplace_back(Digit{d.first, d.second}, p);
                return BernoulliMeasure::from_weights(c, table);
            },
            py::arg("carpet"), py::arg("weights"))
        .def_static("max_entropy", &BernoulliMeasure::max_entropy, py::arg("carpet"))
        .def_static("mcmullen", &BernoulliMeasure::mcmullen, py::arg("carpet"))
        .def_static("column_uniform", &BernoulliMeasure::column_uniform, py::arg("carpet"))
        .def_property_readonly("carpet", &BernoulliMeasure::carpet,
                               py::return_value_policy::reference_internal)
        .def_property_readonly("digit_weights", &BernoulliMeasure::digit_weights)
        .def_property_readonly("column_weights", &BernoulliMeasure::column_weights)
        .def("mean_dim", &BernoulliMeasure::mean_dim)
        .def("fibre_moments", &BernoulliMeasure::fibre_moments)
        .def("argmax_mass", &BernoulliMeasure::argmax_mass)
        .def("cumulant", &BernoulliMeasure::cumulant, py::arg("theta"))
        .def("cumulant_derivative", &BernoulliMeasure::cumulant_derivative, py::arg("theta"));

    py::class_<Code>(m, "Code")
        .def(py::init([](const std::vector<std::pair<int, int>>& word) {
                 return Code(to_digits(word));
             }),
             py::arg("word"))
        .def_static(
            "constant",
            [](const std::pair<int, int>& d, std::size_t length) {
                return Code::constant(Digit{d.first, d.second}, length);
            },
            py::arg("digit"), py::arg("length"))
        .def_property_readonly("word", [](const Code& d) { return from_digits(d.word()); })
        .def("__len__", [](const Code& d) { return d.length(); })
        .def("letter",
             [](const Code& d, std::size_t l) {
                 const Digit& g = d.letter(l);
                 return std::make_pair(g.i, g.j);
             },
             py::arg("l"));

    py::class_<Scale>(m, "Scale")
        .def(py::init([](double r) { return Scale::real(r); }), py::arg("r"))
        .def_static("real", &Scale::real, py::arg("r"))
        .def_static("power", &Scale::power, py::arg("base"), py::arg("exponent"))
        .def_property_readonly("value", &Scale::value)
        .def_property_readonly("log_value", &Scale::log_value);
    py::implicitly_convertible<py::float_, Scale>();

    m.def(
        "scale_indices",
        [](const Carpet& c, const Scale& r) {
            const ScaleIndices idx = scale_indices(c, r);
            return std::make_pair(idx.l1, idx.l2);
        },
        py::arg("carpet"), py::arg("r"));

    m.def("column_proportion", &column_proportion, py::arg("code"), py::arg("column"),
          py::arg("s"), py::arg("t"));
    m.def("geo_mean_at", &geo_mean_at, py::arg("code"), py::arg("carpet"), py::arg("R"));
    m.def("geo_mean_between", &geo_mean_between, py::arg("code"), py::arg("carpet"), py::arg("r"),
          py::arg("R"));
    m.def("covering_count", &covering_count, py::arg("code"), py::arg("carpet"), py::arg("R"),
          py::arg("r"));
    m.def("covering_count_log", &covering_count_log, py::arg("code"), py::arg("carpet"),
          py::arg("R"), py::arg("r"));
    m.def(
        "mesh_covering_count",
        [](const Code& d, const Carpet& c, const Scale& R, const Scale& r, long max_depth,
           std::uint64_t max_rects) {
            return mesh_covering_count(d, c, R, r, MeshLimits{max_depth, max_rects});
        },
        py::arg("code"), py::arg("carpet"), py::arg("R"), py::arg("r"),
        py::arg("max_depth") = 14, py::arg("max_rects") = 4000000ull);
    m.def("code_of_point", &code_of_point, py::arg("carpet"), py::arg("x"), py::arg("y"),
          py::arg("length"));
    m.def("codes_of_point", &codes_of_point, py::arg("carpet"), py::arg("x"), py::arg("y"),
          py::arg("length"));

    m.def(
        "dimension_profile",
        [](const Code& d, const Carpet& c, const Scale& R, const Scale& r) {
            const ProfilePoint p = dimension_profile(d, c, R, r);
            return std::make_pair(p.value, p.branch);
        },
        py::arg("code"), py::arg("carpet"), py::arg("R"), py::arg("r"));
    m.def("profile_fine", &profile_fine, py::arg("code"), py::arg("carpet"), py::arg("R"),
          py::arg("r"));
    m.def("profile_coarse", &profile_coarse, py::arg("code"), py::arg("carpet"), py::arg("R"),
          py::arg("r"));
    m.def("profile_sup", &profile_sup, py::arg("code"), py::arg("carpet"), py::arg("k"),
          py::arg("eps"));
    m.def("window_mean_dim", &window_mean_dim, py::arg("code"), py::arg("carpet"), py::arg("k"),
          py::arg("delta"));
    m.def("covering_profile_sup", &covering_profile_sup, py::arg("code"), py::arg("carpet"),
          py::arg("k"), py::arg("eps"), py::arg("j_cap"));
    m.def("point_covering_sup", &point_covering_sup, py::arg("carpet"), py::arg("x"),
          py::arg("y"), py::arg("k"), py::arg("eps"), py::arg("j_cap"));

    py::class_<RateFunction>(m, "RateFunction")
        .def(py::init<BernoulliMeasure>(), py::arg("measure"))
        .def_property_readonly("mean_log_fibre", &RateFunction::mean_log_fibre)
        .def_property_readonly("log_cmax", &RateFunction::log_cmax)
        .def_property_readonly("argmax_mass", &RateFunction::argmax_mass)
        .def(
            "evaluate",
            [](const RateFunction& rf, double lp) {
                const RateValue v = rf.evaluate(lp);
                return v.infinite ? std::numeric_limits<double>::infinity() : v.value;
            },
            py::arg("lambda_prime"))
        .def("solve_theta", &RateFunction::solve_theta, py::arg("lambda_prime"));

    m.def("lambda_prime", &lambda_prime, py::arg("measure"), py::arg("lam"));
    m.def("lambda_from_prime", &lambda_from_prime, py::arg("measure"), py::arg("lambda_prime"));
    m.def("ldp_rate_symbolic", &ldp_rate_symbolic, py::arg("rate"), py::arg("lam"),
          py::arg("eps"));
    m.def("ldp_rate_geometric", &ldp_rate_geometric, py::arg("rate"), py::arg("lam"),
          py::arg("eps"));
    m.def(
        "exceedance_exact",
        [](const BernoulliMeasure& mu, long k, double eps, double lp, int max_distinct,
           long max_window_end) {
            return exceedance_exact(mu, k, eps, lp, DpLimits{max_distinct, max_window_end});
        },
        py::arg("measure"), py::arg("k"), py::arg("eps"), py::arg("lambda_prime"),
        py::arg("max_distinct") = 4, py::arg("max_window_end") = 1000);
    m.def(
        "exceedance_exact_window",
        [](const BernoulliMeasure& mu, long lo, long hi, double lp) {
            return exceedance_exact_window(mu, lo, hi, lp);
        },
        py::arg("measure"), py::arg("window_lo"), py::arg("window_hi"), py::arg("lambda_prime"));
    m.def(
        "sandwich_bounds",
        [](const RateFunction& rf, long k, double eps, double lp) {
            const SandwichBounds b = sandwich_bounds(rf, k, eps, lp);
            return std::make_pair(b.lower, b.upper);
        },
        py::arg("rate"), py::arg("k"), py::arg("eps"), py::arg("lambda_prime"));
    m.def("clt_normalizer", &clt_normalizer, py::arg("measure"), py::arg("k"), py::arg("delta"),
          py::arg("tau"));
    m.def("normal_cdf", &normal_cdf, py::arg("tau"));

    m.def(
        "sample_code",
        [](const BernoulliMeasure& mu, std::size_t length, std::uint64_t seed,
           std::uint64_t stream) { return sample_code(mu, length, CounterRng(seed, stream)); },
        py::arg("measure"), py::arg("length"), py::arg("seed"), py::arg("stream") = 0);
    m.def(
        "estimate_exceedance_mc",
        [](const BernoulliMeasure& mu, long k, double eps, double lambda, long long trials,
           std::uint64_t seed, int threads) {
            const McEstimate est = estimate_exceedance_mc(mu, k, eps, lambda, trials, seed,
                                                          threads);
            py::dict out;
            out["p_hat"] = est.p_hat;
            out["stderr"] = est.stderr_;
            out["hits"] = est.hits;
            out["trials"] = est.trials;
            return out;
        },
        py::arg("measure"), py::arg("k"), py::arg("eps"), py::arg("lam"), py::arg("trials"),
        py::arg("seed"), py::arg("threads") = 1);
    m.def(
        "ldp_fit",
        [](const BernoulliMeasure& mu, double eps, double lambda, const std::vector<long>& ks) {
            const LdpFit fit = ldp_fit(mu, eps, lambda, ks);
            py::dict out;
            out["slope"] = fit.slope;
            out["intercept"] = fit.intercept;
            out["predicted"] = fit.predicted;
            py::list table;
            for (const TailRow& row : fit.table)
                table.append(py::make_tuple(row.k, row.probability, row.rate_estimate));
            out["table"] = table;
            return out;
        },
        py::arg("measure"), py::arg("eps"), py::arg("lam"), py::arg("k_list"));
    m.def(
        "clt_test",
        [](const BernoulliMeasure& mu, long k, double delta, long long trials,
           std::uint64_t seed, int threads) {
            const CltResult res = clt_test(mu, k, delta, trials, seed, threads);
            py::dict out;
            out["ks_stat"] = res.ks_stat;
            py::list table;
            for (const CltRow& row : res.table)
                table.append(py::make_tuple(row.tau, row.empirical, row.phi));
            out["table"] = table;
            return out;
        },
        py::arg("measure"), py::arg("k"), py::arg("delta"), py::arg("trials"), py::arg("seed"),
        py::arg("threads") = 1);

    m.def("emit_profile", &emit_profile, py::arg("code"), py::arg("carpet"), py::arg("R"),
          py::arg("r_grid"), py::arg("path"));
    m.def(
        "emit_rate_curve",
        [](const RateFunction& rf, const std::vector<double>& grid, double eps,
           const std::string& path) { emit_rate_curve(rf, grid, eps, path); },
        py::arg("rate"), py::arg("lambda_grid"), py::arg("eps"), py::arg("path"));
}
