#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "carpets/config.hpp"
#include "carpets/deviation.hpp"
#include "carpets/experiment.hpp"
#include "carpets/observables.hpp"

namespace {

using namespace carpets;

struct GlobalArgs {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int threads = 1;
};

std::vector<long> parse_k_list(const std::string& text) {
    std::vector<long> ks;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos)
            comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        try {
            ks.push_back(std::stol(item));
        } catch (const std::exception&) {
            raise(errc::bad_config, "k list entry '" + item + "' is not an integer");
        }
        pos = comma + 1;
    }
    if (ks.empty())
        raise(errc::bad_config, "empty k list");
    return ks;
}

void print_kv(const std::string& key, const std::string& value) {
    std::cout << key << " = " << value << "\n";
}

int run_dims(const GlobalArgs& g) {
    const CarpetConfig cfg = parse_config_file(g.config);
    const Carpet c = make_carpet(cfg);
    const BernoulliMeasure mu = make_measure(cfg, c);
    print_kv("assouad_dim", format_double(c.assouad_dim()));
    print_kv("box_dim", format_double(c.box_dim()));
    print_kv("hausdorff_dim", format_double(c.hausdorff_dim()));
    print_kv("gamma", format_double(c.gamma()));
    print_kv("alpha", format_double(mu.mean_dim()));
    print_kv("uniform_fibres", c.uniform_fibres() ? "true" : "false");
    print_kv("argmax_mass", format_double(mu.argmax_mass()));
    if (!g.out.empty()) {
        std::ofstream out(g.out, std::ios::binary);
        if (!out)
            raise(errc::io_error, "cannot open '" + g.out + "'");
        out << "quantity,value\n"
            << "assouad_dim," << format_double(c.assouad_dim()) << "\n"
            << "box_dim," << format_double(c.box_dim()) << "\n"
            << "hausdorff_dim," << format_double(c.hausdorff_dim()) << "\n"
            << "gamma," << format_double(c.gamma()) << "\n"
            << "alpha," << format_double(mu.mean_dim()) << "\n"
            << "uniform_fibres," << (c.uniform_fibres() ? 1 : 0) << "\n"
            << "argmax_mass," << format_double(mu.argmax_mass()) << "\n";
    }
    return 0;
}

int run_rate(const GlobalArgs& g, double eps, double lambda_min, double lambda_max, int steps) {
    const CarpetConfig cfg = parse_config_file(g.config);
    const Carpet c = make_carpet(cfg);
    const BernoulliMeasure mu = make_measure(cfg, c);
    const RateFunction rf(mu);
    if (std::isnan(lambda_min))
        lambda_min = std::min(mu.mean_dim(), c.box_dim());
    if (std::isnan(lambda_max))
        lambda_max = c.assouad_dim();
    if (!(lambda_min < lambda_max) || steps < 2)
        raise(errc::bad_range, "need lambda_min < lambda_max and at least 2 steps");
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i)
        grid[i] = lambda_min + (lambda_max - lambda_min) * i / (steps - 1);
    emit_rate_curve(rf, grid, eps, g.out);
    std::cout << "rate curve: " << steps << " rows over lambda in [" << format_double(lambda_min)
              << ", " << format_double(lambda_max) << "], right limit -log(argmax_mass) = "
              << format_double(-std::log(rf.argmax_mass())) << ", wrote " << g.out << "\n";
    return 0;
}

int run_profile(const GlobalArgs& g, const std::string& code_spec, const std::string& R_token,
                const std::string& rmin_token, int points) {
    const CarpetConfig cfg = parse_config_file(g.config);
    const Carpet c = make_carpet(cfg);
    const BernoulliMeasure mu = make_measure(cfg, c);
    const Scale R = parse_scale_token(R_token, c);
    Scale r_min = rmin_token.empty()
                      ? Scale::real(std::exp((c.gamma() + 1.0) * R.log_value()))
                      : parse_scale_token(rmin_token, c);
    if (!scale_less(r_min, R))
        raise(errc::bad_scales, "r-min must be smaller than R");
    if (points < 1)
        raise(errc::bad_range, "need at least one grid point");

    const ScaleIndices iR = scale_indices(c, R);
    const ScaleIndices ir = scale_indices(c, r_min);
    const std::size_t needed = static_cast<std::size_t>(std::max(iR.l1, ir.l2));
    const Code code = parse_code_spec(code_spec, c, mu, needed);

    std::vector<Scale> grid;
    grid.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double f = (i + 0.5) / points;
        grid.push_back(Scale::real(std::exp(r_min.log_value() * (1.0 - f) + R.log_value() * f)));
    }
    emit_profile(code, c, R, grid, g.out);

    const double geo = fibre_geo_mean(code, c, iR.l2 + 1, iR.l1);
    const double avg = static_cast<double>(c.digit_count()) / c.occupied_count();
    const char* shape = geo > avg + 1e-12 ? "decreasing" : (geo < avg - 1e-12 ? "increasing"
                                                                              : "constant");
    std::cout << "profile: " << points << " rows, R = " << format_double(R.value())
              << ", fine-branch shape " << shape << ", wrote " << g.out << "\n";
    return 0;
}

int run_ldp(const GlobalArgs& g, double eps, double lambda, const std::string& k_text,
            long long trials) {
    const CarpetConfig cfg = parse_config_file(g.config);
    const Carpet c = make_carpet(cfg);
    const BernoulliMeasure mu = make_measure(cfg, c);
    const std::vector<long> ks = parse_k_list(k_text);

    const RateFunction rf(mu);
    const double predicted = ldp_rate_symbolic(rf, lambda, eps);

    std::vector<TailRow> rows;
    double slope = 0, intercept = 0;
    if (trials > 0) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const McEstimate est = estimate_exceedance_mc(
                mu, ks[i], eps, lambda, trials, g.seed + static_cast<std::uint64_t>(ks[i]),
                g.threads);
            if (!(est.p_hat > 0.0))
                raise(errc::bad_range, "no exceedances at k = " + std::to_string(ks[i]) +
                                           "; increase --trials or lower k");
            rows.push_back(TailRow{ks[i], est.p_hat,
                                   -std::log(est.p_hat) / static_cast<double>(ks[i])});
            xs.push_back(static_cast<double>(ks[i]));
            ys.push_back(-std::log(est.p_hat));
        }
        fit_line(xs, ys, slope, intercept);
    } else {
        const LdpFit fit = ldp_fit(mu, eps, lambda, ks);
        rows = fit.table;
        slope = fit.slope;
        intercept = fit.intercept;
    }
    if (!g.out.empty())
        emit_tail_table(rows, g.out);
    const double rel = std::fabs(slope - predicted) / predicted;
    std::cout << "ldp" << (trials > 0 ? " (monte carlo)" : " (exact)") << ": slope = "
              << format_double(slope) << ", predicted eps*I = " << format_double(predicted)
              << ", rel_err = " << format_double(rel);
    if (!g.out.empty())
        std::cout << ", wrote " << g.out;
    std::cout << "\n";
    return 0;
}

int run_clt(const GlobalArgs& g, double delta, long k, long long trials) {
    const CarpetConfig cfg = parse_config_file(g.config);
    const Carpet c = make_carpet(cfg);
    const BernoulliMeasure mu = make_measure(cfg, c);
    const CltResult res = clt_test(mu, k, delta, trials, g.seed, g.threads);
    if (!g.out.empty())
        emit_clt_table(res.table, g.out);
    std::cout << "clt: ks_stat = " << format_double(res.ks_stat) << " over " << trials
              << " trials, window " << (delta_window_end(k, delta) - k + 1) << " letters";
    if (!g.out.empty())
        std::cout << ", wrote " << g.out;
    std::cout << "\n";
    return 0;
}

int run_cover_check(const GlobalArgs& g, const std::string& code_spec, const std::string& R_token,
                    const std::string& r_token) {
    const CarpetConfig cfg = parse_config_file(g.config);
    const Carpet c = make_carpet(cfg);
    const BernoulliMeasure mu = make_measure(cfg, c);
    const Scale R = parse_scale_token(R_token, c);
    const Scale r = parse_scale_token(r_token, c);
    if (!scale_less(r, R))
        raise(errc::bad_scales, "need r < R");
    const ScaleIndices ir = scale_indices(c, r);
    const Code code = parse_code_spec(code_spec, c, mu, static_cast<std::size_t>(ir.l1));

    const std::uint64_t formula = covering_count(code, c, R, r);
    const std::uint64_t mesh = mesh_covering_count(code, c, R, r);
    const double log_rr = R.log_value() - r.log_value();
    const double ratio = std::fabs(std::log(static_cast<double>(mesh)) -
                                   std::log(static_cast<double>(formula))) /
                         log_rr;
    std::cout << "cover-check: formula = " << formula << ", mesh = " << mesh
              << ", |log ratio|/log(R/r) = " << format_double(ratio) << "\n";
    if (!g.out.empty()) {
        std::ofstream out(g.out, std::ios::binary);
        if (!out)
            raise(errc::io_error, "cannot open '" + g.out + "'");
        out << "formula_count,mesh_count,log_ratio_normalized\n"
            << formula << "," << mesh << "," << format_double(ratio) << "\n";
        std::cout << "wrote " << g.out << "\n";
    }
    return 0;
}

int run_render(const GlobalArgs& g, int k) {
    const CarpetConfig cfg = parse_config_file(g.config);
    const Carpet c = make_carpet(cfg);
    const std::vector<Rect> rects = c.render_depth(k);
    emit_rects(rects, g.out);
    std::cout << "render: depth " << k << ", " << rects.size() << " rectangles, wrote " << g.out
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimension and large-deviation toolkit for grid self-affine carpets"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config, "carpet/measure definition file")->required();
    app.add_option("--out", g.out, "output CSV path");
    app.add_option("--seed", g.seed, "base seed for stochastic commands");
    app.add_option("--threads", g.threads, "worker threads for Monte Carlo");

    auto* dims = app.add_subcommand("dims", "closed-form dimensions and measure summary");
    dims->fallthrough();

    auto* rate = app.add_subcommand("rate", "rate function curve as CSV");
    rate->fallthrough();
    double rate_eps = 0.2, rate_lmin = NAN, rate_lmax = NAN;
    int rate_steps = 200;
    rate->add_option("--eps", rate_eps, "epsilon in (0, gamma-1)");
    rate->add_option("--lambda-min", rate_lmin, "grid start (default min(alpha, box dim))");
    rate->add_option("--lambda-max", rate_lmax, "grid end (default assouad dim)");
    rate->add_option("--steps", rate_steps, "grid size");

    auto* profile = app.add_subcommand("profile", "two-scale dimension profile as CSV");
    profile->fallthrough();
    std::string profile_code = "random:1", profile_R, profile_rmin;
    int profile_points = 256;
    profile->add_option("--code", profile_code, "random:<seed> | const:<i>,<j> | [[i,j],...]");
    profile->add_option("--R", profile_R, "reference scale (decimal or m^-k / n^-k)")->required();
    profile->add_option("--r-min", profile_rmin, "smallest r (default R^(gamma+1))");
    profile->add_option("--points", profile_points, "grid size");

    auto* ldp = app.add_subcommand("ldp", "exceedance decay slope vs the predicted rate");
    ldp->fallthrough();
    double ldp_eps = 0.2, ldp_lambda = NAN;
    std::string ldp_ks = "100,200,300,400,500";
    long long ldp_trials = 0;
    ldp->add_option("--eps", ldp_eps, "epsilon in (0, gamma-1)");
    ldp->add_option("--lambda", ldp_lambda, "threshold in [max(alpha, box), assouad)")->required();
    ldp->add_option("--k-list", ldp_ks, "comma-separated reference depths");
    ldp->add_option("--trials", ldp_trials, "Monte Carlo trials per k (omit for exact DP)");

    auto* clt = app.add_subcommand("clt", "single-scale CLT check");
    clt->fallthrough();
    double clt_delta = 1.2;
    long clt_k = 2000;
    long long clt_trials = 100000;
    clt->add_option("--delta", clt_delta, "window exponent in (1, gamma)");
    clt->add_option("--k", clt_k, "reference depth");
    clt->add_option("--trials", clt_trials, "Monte Carlo trials");

    auto* cover = app.add_subcommand("cover-check", "covering formula vs geometric mesh count");
    cover->fallthrough();
    std::string cover_code = "random:1", cover_R, cover_r;
    cover->add_option("--code", cover_code, "code spec");
    cover->add_option("--R", cover_R, "reference scale")->required();
    cover->add_option("--r", cover_r, "fine scale")->required();

    auto* render = app.add_subcommand("render", "depth-k rectangle list as CSV");
    render->fallthrough();
    int render_k = 1;
    render->add_option("--k", render_k, "depth");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(dims))
            return run_dims(g);
        if (app.got_subcommand(rate)) {
            if (g.out.empty())
                raise(errc::bad_config, "rate requires --out");
            return run_rate(g, rate_eps, rate_lmin, rate_lmax, rate_steps);
        }
        if (app.got_subcommand(profile)) {
            if (g.out.empty())
                raise(errc::bad_config, "profile requires --out");
            return run_profile(g, profile_code, profile_R, profile_rmin, profile_points);
        }
        if (app.got_subcommand(ldp))
            return run_ldp(g, ldp_eps, ldp_lambda, ldp_ks, ldp_trials);
        if (app.got_subcommand(clt))
            return run_clt(g, clt_delta, clt_k, clt_trials);
        if (app.got_subcommand(cover))
            return run_cover_check(g, cover_code, cover_R, cover_r);
        if (app.got_subcommand(render)) {
            if (g.out.empty())
                raise(errc::bad_config, "render requires --out");
            return run_render(g, render_k);
        }
    } catch (const carpets::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.is_config())
            return 2;
        if (e.is_precondition())
            return 3;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
