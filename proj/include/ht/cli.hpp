#ifndef HT_CLI_HPP
#define HT_CLI_HPP

// Command-line front end: CSV ingestion, subcommand dispatch onto the library
// modules, reproducible Monte Carlo configuration, JSON / CSV / plot-data
// emission. Exit codes: 0 success, 2 usage, 3 data, 4 numeric.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "ht/common.hpp"
#include "ht/diagnostics.hpp"
#include "ht/dists.hpp"
#include "ht/inequality.hpp"
#include "ht/json.hpp"
#include "ht/kappa.hpp"
#include "ht/pvmeta.hpp"
#include "ht/quad.hpp"
#include "ht/shadow.hpp"
#include "ht/special.hpp"
#include "ht/tailfit.hpp"
#include "ht/tailoptions.hpp"

namespace ht::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct RunConfig {
    std::uint64_t seed = 1;
    std::size_t samples = 0;  // MC paths / replications, when applicable
    unsigned workers = 1;
    std::string input_path;
    std::string output = "json";  // json | csv | plotdata
};

struct Report {
    std::string tool;
    RunConfig config;
    json::Value results = json::Value::object();
    std::vector<std::string> warnings;

    json::Value to_json() const {
        auto root = json::Value::object();
        root.set("schema_version", kSchemaVersion);
        root.set("tool", tool);
        root.set("version", kVersion);
        auto cfg = json::Value::object();
        cfg.set("seed", static_cast<std::int64_t>(config.seed));
        cfg.set("samples", static_cast<std::int64_t>(config.samples));
        cfg.set("workers", static_cast<std::int64_t>(config.workers));
        cfg.set("input_path", config.input_path);
        cfg.set("output", config.output);
        root.set("config", cfg);
        root.set("results", results);
        auto warn = json::Value::array();
        for (const auto& w : warnings) warn.push(w);
        root.set("warnings", warn);
        return root;
    }
};

inline std::string fmt(double d) { return json::Value::format_double(d); }

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

}  // namespace detail

// tidy (x, y, series) rows that any plotting tool can consume
struct PlotData {
    std::vector<std::tuple<double, double, std::string>> rows;

    void add(double x, double y, const std::string& series) { rows.emplace_back(x, y, series); }

    std::string to_csv() const {
        std::string out = "x,y,series\n";
        for (const auto& [x, y, s] : rows)
            out += fmt(x) + "," + fmt(y) + "," + detail::csv_field(s) + "\n";
        return out;
    }
};

struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;

    void row(std::vector<std::string> r) { rows.push_back(std::move(r)); }

    std::string to_csv() const {
        std::string out;
        for (std::size_t i = 0; i < headers.size(); ++i) {
            out += detail::csv_field(headers[i]);
            out += (i + 1 < headers.size()) ? "," : "";
        }
        out += "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                out += detail::csv_field(r[i]);
                out += (i + 1 < r.size()) ? "," : "";
            }
            out += "\n";
        }
        return out;
    }
};

// One numeric value per row; an optional single header row is auto-detected.
// Blank lines are skipped; any non-finite or unparsable row is an error
// naming its 1-based line number.
inline Sample ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open input file: " + path);
    Sample sample;
    sample.name = std::filesystem::path(path).stem().string();
    std::string line;
    std::size_t lineno = 0;
    bool saw_first = false;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;  // blank
        std::string tok = line.substr(start);
        const char* cstr = tok.c_str();
        char* end = nullptr;
        double v = std::strtod(cstr, &end);
        bool parsed = end == cstr + tok.size() && end != cstr;
        if (!saw_first) {
            saw_first = true;
            if (!parsed) {
                sample.name = tok;  // header row
                continue;
            }
        }
        if (!parsed)
            throw data_error(path + ": line " + std::to_string(lineno) + ": not a single numeric value: '" + tok + "'");
        if (!std::isfinite(v))
            throw data_error(path + ": line " + std::to_string(lineno) + ": non-finite value: '" + tok + "'");
        sample.values.push_back(v);
    }
    if (sample.values.empty()) throw data_error(path + ": no numeric rows");
    return sample;
}

namespace detail {

inline unsigned env_default_workers() {
    const char* e = std::getenv("HT_WORKERS");
    if (!e) return 1;
    char* end = nullptr;
    unsigned long v = std::strtoul(e, &end, 10);
    if (end == e || *end != '\0' || v < 1 || v > 1024) return 1;
    return static_cast<unsigned>(v);
}

struct DistFlags {
    std::string name;
    double alpha = 0.0;
    double l = 1.0;
    double scale = 1.0;
    double location = 0.0;
    double mu = 0.0;
    double sigma = 1.0;
    double beta = 0.0;
    double d = 0.0;
    double lambda = 1.0;
    double a = 0.0;
    double p = 0.5;
    bool has_alpha = false;
    bool has_d = false;
};

inline void add_dist_options(CLI::App* sub, DistFlags& f) {
    sub->add_option("--dist", f.name,
                    "distribution: pareto, student, lognormal, stable, twostate, exponential, "
                    "gaussian, bimodal")
        ->required();
    auto* oa = sub->add_option("--alpha", f.alpha, "tail exponent (pareto, student, stable)");
    sub->add_option("--l", f.l, "pareto minimum (default 1)");
    sub->add_option("--scale", f.scale, "student scale (default 1)");
    sub->add_option("--location", f.location, "student location (default 0)");
    sub->add_option("--mu", f.mu, "location (lognormal, stable, gaussian; default 0)");
    sub->add_option("--sigma", f.sigma, "scale (lognormal, stable, gaussian, twostate, bimodal; default 1)");
    sub->add_option("--beta", f.beta, "stable skewness in [-1,1] (default 0)");
    auto* od = sub->add_option("--d", f.d, "bimodal mode separation");
    sub->add_option("--lambda", f.lambda, "exponential rate (default 1)");
    sub->add_option("--a", f.a, "twostate variance jump size");
    sub->add_option("--p", f.p, "twostate jump probability (default 0.5)");
    sub->parse_complete_callback([&f, oa, od]() {
        f.has_alpha = oa->count() > 0;
        f.has_d = od->count() > 0;
    });
}

inline std::pair<dists::Dist, json::Value> make_dist(const DistFlags& f) {
    auto echo = json::Value::object();
    echo.set("name", f.name);
    auto need_alpha = [&]() {
        if (!f.has_alpha) throw domain_error("--alpha is required for --dist " + f.name);
    };
    dists::Dist d;
    if (f.name == "pareto") {
        need_alpha();
        d = dists::ParetoI{f.alpha, f.l};
        echo.set("alpha", f.alpha).set("l", f.l);
    } else if (f.name == "student") {
        need_alpha();
        d = dists::StudentT{f.alpha, f.scale, f.location};
        echo.set("alpha", f.alpha).set("scale", f.scale).set("location", f.location);
    } else if (f.name == "lognormal") {
        d = dists::Lognormal{f.mu, f.sigma};
        echo.set("mu", f.mu).set("sigma", f.sigma);
    } else if (f.name == "stable") {
        need_alpha();
        d = dists::StableParams{f.alpha, f.beta, f.mu, f.sigma};
        echo.set("alpha", f.alpha).set("beta", f.beta).set("mu", f.mu).set("sigma", f.sigma);
    } else if (f.name == "twostate") {
        d = dists::TwoStateGaussian{f.sigma, f.a, f.p};
        echo.set("sigma", f.sigma).set("a", f.a).set("p", f.p);
    } else if (f.name == "exponential") {
        d = dists::Exponential{f.lambda};
        echo.set("lambda", f.lambda);
    } else if (f.name == "gaussian") {
        d = dists::Gaussian{f.mu, f.sigma};
        echo.set("mu", f.mu).set("sigma", f.sigma);
    } else if (f.name == "bimodal") {
        if (!f.has_d) throw domain_error("--d is required for --dist bimodal");
        d = dists::BimodalGaussian{f.d, f.sigma};
        echo.set("d", f.d).set("sigma", f.sigma);
    } else {
        throw domain_error("unknown --dist: " + f.name);
    }
    dists::validate(d);
    return {d, echo};
}

inline void emit(const Report& report, const PlotData& plot, const Table& table,
                 const std::string& out_path) {
    std::string payload;
    if (report.config.output == "json")
        payload = report.to_json().dump();
    else if (report.config.output == "csv")
        payload = table.to_csv();
    else if (report.config.output == "plotdata")
        payload = plot.to_csv();
    else
        throw domain_error("unknown --format: " + report.config.output);
    if (out_path.empty()) {
        std::fwrite(payload.data(), 1, payload.size(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw data_error("cannot open output file: " + out_path);
        out << payload;
    }
}

inline json::Value pair_array(const std::vector<std::pair<double, double>>& v) {
    auto arr = json::Value::array();
    for (const auto& [a, b] : v) {
        auto e = json::Value::array();
        e.push(a);
        e.push(b);
        arr.push(e);
    }
    return arr;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// subcommand runners
// ---------------------------------------------------------------------------

namespace run {

struct KappaArgs {
    detail::DistFlags dist;
    bool has_dist = false;
    std::vector<int> ns;
    int n0 = 1;
    std::string exact;       // exponential | cubic-student | bimodal
    double exact_n = 2.0;
    double bim_d = 0.0, bim_sigma = 1.0;
    double kappa1 = -1.0;
    double n_gaussian = 30.0;
    bool want_equiv = false;
};

inline int kappa_cmd(const KappaArgs& a, Report& rep, PlotData& plot, Table& table) {
    if (!a.exact.empty()) {
        rep.config.samples = 0;
        rep.results.set("mode", "exact");
        rep.results.set("form", a.exact);
        double k;
        if (a.exact == "exponential") {
            k = kappa::kappa_exponential_exact(a.exact_n);
            rep.results.set("n", a.exact_n);
        } else if (a.exact == "cubic-student") {
            k = kappa::kappa_cubic_student_exact(a.exact_n);
            rep.results.set("n", a.exact_n);
        } else if (a.exact == "bimodal") {
            k = kappa::kappa_bimodal_exact(a.bim_d, a.bim_sigma);
            rep.results.set("d", a.bim_d).set("sigma", a.bim_sigma);
        } else {
            throw domain_error("--exact must be exponential, cubic-student, or bimodal");
        }
        rep.results.set("kappa", k);
        table.headers = {"key", "value"};
        table.row({"kappa", fmt(k)});
        return 0;
    }
    if (a.want_equiv) {
        rep.config.samples = 0;
        double nv = kappa::equivalent_sample_size(a.kappa1, a.n_gaussian);
        rep.results.set("mode", "equivalent-sample-size");
        rep.results.set("kappa1", a.kappa1);
        rep.results.set("n_gaussian", a.n_gaussian);
        rep.results.set("n_equivalent", nv);
        table.headers = {"key", "value"};
        table.row({"n_equivalent", fmt(nv)});
        return 0;
    }
    if (!a.has_dist) throw domain_error("kappa needs --dist (or --exact / --equivalent-n)");
    auto [dist, echo] = detail::make_dist(a.dist);
    auto r = kappa::kappa_empirical(dist, a.n0, a.ns, rep.config.samples, rep.config.seed,
                                    rep.config.workers);
    rep.results.set("mode", "mc");
    rep.results.set("dist", echo);
    rep.results.set("n0", r.n0);
    auto entries = json::Value::array();
    table.headers = {"n", "kappa", "mc_stderr"};
    for (std::size_t i = 0; i < r.ns.size(); ++i) {
        auto e = json::Value::object();
        e.set("n", r.ns[i]);
        e.set("kappa", r.kappa[i]);
        e.set("mc_stderr", r.mc_stderr[i]);
        entries.push(e);
        table.row({std::to_string(r.ns[i]), fmt(r.kappa[i]), fmt(r.mc_stderr[i])});
        plot.add(r.ns[i], r.kappa[i], "kappa");
    }
    rep.results.set("entries", entries);
    auto madc = json::Value::array();
    for (const auto& [n, m] : r.mad_curve) {
        auto e = json::Value::array();
        e.push(n);
        e.push(m);
        madc.push(e);
        plot.add(n, m, "mad");
    }
    rep.results.set("mad_curve", madc);
    return 0;
}

struct DiagArgs {
    bool returns = false;
    double ms_p = 0.0;
    bool has_ms = false;
    std::vector<int> lags;
    int window = 0;
    std::vector<double> thresholds;
    std::string side = "right";
    std::vector<int> acf_lags;
};

inline int diag_cmd(const DiagArgs& a, Report& rep, PlotData& plot, Table& table) {
    Sample sample = ingest_csv(rep.config.input_path);
    sample.is_returns = a.returns;
    rep.results.set("name", sample.name);
    rep.results.set("n", static_cast<std::int64_t>(sample.size()));
    table.headers = {"key", "value"};
    table.row({"n", std::to_string(sample.size())});

    if (a.has_ms) {
        auto curve = diagnostics::ms_plot(sample, a.ms_p);
        auto ms = json::Value::object();
        ms.set("p", curve.p);
        auto ratios = json::Value::array();
        for (const auto& [n, rr] : curve.ratios) {
            auto e = json::Value::array();
            e.push(static_cast<std::int64_t>(n));
            e.push(rr);
            ratios.push(e);
            plot.add(static_cast<double>(n), rr, "ms");
        }
        ms.set("ratios", ratios);
        rep.results.set("ms", ms);
        double mmc = curve.ratios.back().second;
        rep.results.set("max_moment_contribution", mmc);
        table.row({"max_moment_contribution", fmt(mmc)});
    }
    if (!a.lags.empty()) {
        auto ks = diagnostics::kurtosis_under_aggregation(sample, a.lags);
        auto arr = json::Value::array();
        for (const auto& [lag, k] : ks) {
            auto e = json::Value::object();
            e.set("lag", lag);
            e.set("kurtosis", k);
            e.set("excess", k - 3.0);
            arr.push(e);
            plot.add(lag, k, "kurtosis");
            table.row({"kurtosis_lag_" + std::to_string(lag), fmt(k)});
        }
        rep.results.set("kurtosis", arr);
    }
    if (!a.thresholds.empty()) {
        auto ex = diagnostics::excess_conditional_expectation(sample, a.thresholds, a.side);
        auto arr = json::Value::array();
        for (const auto& e : ex) {
            auto o = json::Value::object();
            o.set("k", e.k);
            o.set("phi", e.phi);
            o.set("n_exceed", static_cast<std::int64_t>(e.n_exceed));
            o.set("low_confidence", e.low_confidence);
            arr.push(o);
            plot.add(e.k, e.phi, "excess");
            if (e.low_confidence)
                rep.warnings.push_back("excess threshold " + fmt(e.k) + " has fewer than 20 exceedances");
        }
        rep.results.set("excess", arr);
        rep.results.set("excess_side", a.side);
    }
    auto rec = diagnostics::gumbel_records(sample);
    auto ro = json::Value::object();
    ro.set("count", static_cast<std::int64_t>(rec.count));
    ro.set("expected", rec.expected);
    ro.set("stderr", rec.stderr_);
    rep.results.set("records", ro);
    table.row({"records_count", std::to_string(rec.count)});
    table.row({"records_expected", fmt(rec.expected)});
    if (a.window > 0) {
        auto dd = diagnostics::max_drawdown(sample, a.window);
        auto arr = json::Value::array();
        double worst = 0.0;
        for (std::size_t i = 0; i < dd.size(); ++i) {
            arr.push(dd[i]);
            worst = std::min(worst, dd[i]);
            plot.add(static_cast<double>(i), dd[i], "drawdown");
        }
        rep.results.set("drawdowns", arr);
        rep.results.set("worst_drawdown", worst);
        table.row({"worst_drawdown", fmt(worst)});
    }
    if (!a.acf_lags.empty()) {
        auto arr = json::Value::array();
        for (int lag : a.acf_lags) {
            double rho = diagnostics::autocorrelation(sample, lag);
            auto e = json::Value::object();
            e.set("lag", lag);
            e.set("rho", rho);
            arr.push(e);
            plot.add(lag, rho, "acf");
            table.row({"acf_lag_" + std::to_string(lag), fmt(rho)});
        }
        rep.results.set("autocorrelation", arr);
    }
    return 0;
}

struct TailfitArgs {
    double threshold = 0.0;
    bool has_threshold = false;
    bool debias = false;
    std::vector<int> hill_ks;
    double gpd_u = 0.0;
    bool has_gpd = false;
    double hidden_k = 0.0, hidden_p = 0.0;
    bool has_hidden = false;
    std::vector<double> sd;       // alpha,n[,truncate]
    bool sd_raw = false;
    std::string stoch_kind;
    double stoch_alpha0 = 0.0, stoch_spread = 0.0, stoch_floor = 1.0, stoch_lambda = 1.0;
};

inline int tailfit_cmd(const TailfitArgs& a, Report& rep, PlotData& plot, Table& table) {
    table.headers = {"key", "value"};
    std::optional<tailfit::TailFit> fit;
    bool need_input = a.has_threshold || !a.hill_ks.empty() || a.has_gpd;
    Sample sample;
    if (need_input) {
        if (rep.config.input_path.empty())
            throw domain_error("--threshold, --hill, and --gpd-u need --input");
        sample = ingest_csv(rep.config.input_path);
    }

    if (a.has_threshold) {
        fit = tailfit::pareto_mle(sample, a.threshold, a.debias);
        auto o = json::Value::object();
        o.set("alpha_hat", fit->alpha_hat);
        o.set("L", fit->L);
        o.set("n_exceed", static_cast<std::int64_t>(fit->n_exceed));
        o.set("stderr", fit->stderr_);
        o.set("debiased", fit->debiased);
        if (fit->alpha_hat > 1.0)
            o.set("plugin_mean", tailfit::plugin_pareto_mean(*fit));
        else
            rep.warnings.push_back("alpha_hat <= 1: plug-in mean undefined");
        rep.results.set("pareto", o);
        table.row({"alpha_hat", fmt(fit->alpha_hat)});
        table.row({"stderr", fmt(fit->stderr_)});
    }
    if (!a.hill_ks.empty()) {
        auto sweep = tailfit::hill_sweep(sample, a.hill_ks, a.debias);
        auto arr = json::Value::array();
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            auto o = json::Value::object();
            o.set("k", a.hill_ks[i]);
            o.set("L", sweep[i].L);
            o.set("alpha_hat", sweep[i].alpha_hat);
            o.set("stderr", sweep[i].stderr_);
            arr.push(o);
            plot.add(a.hill_ks[i], sweep[i].alpha_hat, "hill");
        }
        rep.results.set("hill", arr);
    }
    if (a.has_gpd) {
        auto g = tailfit::gpd_fit_mle(sample, a.gpd_u);
        auto o = json::Value::object();
        o.set("xi", g.xi);
        o.set("beta", g.beta);
        o.set("u", g.u);
        o.set("n_exceed", static_cast<std::int64_t>(g.n_exceed));
        o.set("stderr_xi", g.stderrs.first);
        o.set("stderr_beta", g.stderrs.second);
        o.set("low_confidence", g.low_confidence);
        if (g.low_confidence) rep.warnings.push_back("GPD fit has fewer than 30 exceedances");
        rep.results.set("gpd", o);
        table.row({"xi", fmt(g.xi)});
        table.row({"beta", fmt(g.beta)});
    }
    if (a.has_hidden) {
        if (!fit) throw domain_error("--hidden-k requires --threshold (uses the fitted alpha and L)");
        double m = tailfit::hidden_tail_moment(fit->alpha_hat, fit->L, a.hidden_k, a.hidden_p);
        auto o = json::Value::object();
        o.set("K", a.hidden_k);
        o.set("p", a.hidden_p);
        o.set("moment", m);
        rep.results.set("hidden_tail", o);
        table.row({"hidden_tail_moment", fmt(m)});
    }
    if (!a.sd.empty()) {
        if (a.sd.size() != 2 && a.sd.size() != 3)
            throw domain_error("--sampling-density wants alpha,n[,truncate]");
        std::optional<double> trunc;
        if (a.sd.size() == 3) trunc = a.sd[2];
        auto dens = tailfit::alpha_sampling_density(a.sd[0], static_cast<int>(a.sd[1]), trunc, !a.sd_raw);
        auto arr = json::Value::array();
        double lo = std::max(dens.lower, a.sd[0] * 0.25), hi = a.sd[0] * 2.5;
        for (int j = 0; j <= 60; ++j) {
            double x = lo + (hi - lo) * j / 60.0;
            auto e = json::Value::array();
            e.push(x);
            e.push(dens(x));
            arr.push(e);
            plot.add(x, dens(x), "alpha_sampling_density");
        }
        auto o = json::Value::object();
        o.set("alpha_true", dens.alpha_true);
        o.set("n", dens.n);
        o.set("debiased", dens.debiased);
        if (trunc) o.set("truncate_at", *trunc);
        o.set("grid", arr);
        rep.results.set("sampling_density", o);
    }
    if (!a.stoch_kind.empty()) {
        double v = tailfit::stochastic_alpha_mean(a.stoch_kind, a.stoch_alpha0, a.stoch_spread,
                                                  a.stoch_floor, a.stoch_lambda);
        auto o = json::Value::object();
        o.set("kind", a.stoch_kind);
        o.set("alpha0", a.stoch_alpha0);
        o.set("spread", a.stoch_spread);
        o.set("b_or_floor", a.stoch_floor);
        o.set("lambda_scale", a.stoch_lambda);
        o.set("mean", v);
        rep.results.set("stochastic_alpha_mean", o);
        table.row({"stochastic_alpha_mean", fmt(v)});
    }
    if (rep.results.is_object() && !a.has_threshold && a.hill_ks.empty() && !a.has_gpd &&
        !a.has_hidden && a.sd.empty() && a.stoch_kind.empty())
        throw domain_error("tailfit needs at least one of --threshold, --hill, --gpd-u, "
                           "--sampling-density, --stoch-kind");
    return 0;
}

struct ShadowArgs {
    double L = 0.0, H = 0.0;
    double Lstar = 0.0;
    bool has_lstar = false;
    double alpha = 0.0, sigma = 0.0;
    bool has_alpha = false, has_sigma = false;
    std::string populations;
    double today_pop = 0.0;
    std::vector<double> quantiles{0.5, 0.9, 0.95, 0.99};
    std::vector<double> es_levels;
    std::size_t bootstrap = 0;
    double perturb = 0.0;
    std::size_t perturb_reps = 100;
    double bounded_sigma = 0.0, bounded_alpha = 0.0;
    bool has_bounded = false;
};

inline int shadow_cmd(const ShadowArgs& a, Report& rep, PlotData& plot, Table& table) {
    shadow::DualSpec spec{a.L, a.H, a.has_lstar ? a.Lstar : a.L};
    shadow::validate(spec);
    auto so = json::Value::object();
    so.set("L", spec.L);
    so.set("H", spec.H);
    so.set("Lstar", spec.Lstar);
    rep.results.set("spec", so);
    table.headers = {"key", "value"};

    bool closed_form = a.has_alpha && a.has_sigma;
    std::optional<Sample> sample;
    if (!rep.config.input_path.empty()) {
        Sample s = ingest_csv(rep.config.input_path);
        if (!a.populations.empty()) {
            if (!(a.today_pop > 0.0)) throw domain_error("--populations requires --today-pop");
            Sample pops = ingest_csv(a.populations);
            s = shadow::rescale_series(s, pops, a.today_pop);
        }
        sample = std::move(s);
    }

    double alpha = a.alpha, sigma = a.sigma;
    if (!closed_form) {
        if (!sample) throw domain_error("shadow needs --input unless both --alpha and --sigma are given");
        auto res = shadow::shadow_analysis(*sample, spec);
        alpha = res.alpha;
        sigma = res.sigma;
        auto o = json::Value::object();
        o.set("alpha", res.alpha);
        o.set("sigma", res.sigma);
        o.set("shadow_mean", res.shadow_mean);
        o.set("sample_mean", res.sample_mean);
        o.set("ratio", res.ratio);
        rep.results.set("analysis", o);
        table.row({"alpha", fmt(res.alpha)});
        table.row({"sigma", fmt(res.sigma)});
        table.row({"shadow_mean", fmt(res.shadow_mean)});
        table.row({"sample_mean", fmt(res.sample_mean)});
        table.row({"ratio", fmt(res.ratio)});
    } else {
        double sm = shadow::shadow_mean(spec, alpha, sigma);
        rep.results.set("alpha", alpha);
        rep.results.set("sigma", sigma);
        rep.results.set("shadow_mean", sm);
        table.row({"shadow_mean", fmt(sm)});
        if (sample) {
            KahanSum s;
            std::size_t n = 0;
            for (double x : sample->values)
                if (x > spec.Lstar) {
                    s.add(x);
                    ++n;
                }
            if (n > 0) {
                double sm2 = s.value() / static_cast<double>(n);
                rep.results.set("sample_mean", sm2);
                rep.results.set("ratio", sm / sm2);
            }
        }
    }

    auto qs = json::Value::array();
    for (double p : a.quantiles) {
        auto e = json::Value::object();
        e.set("p", p);
        e.set("value", shadow::shadow_quantile(p, spec, alpha, sigma));
        qs.push(e);
        plot.add(p, shadow::shadow_quantile(p, spec, alpha, sigma), "quantile");
    }
    rep.results.set("quantiles", qs);
    if (!a.es_levels.empty()) {
        auto es = json::Value::array();
        for (double u : a.es_levels) {
            auto e = json::Value::object();
            e.set("u", u);
            e.set("value", shadow::shadow_expected_shortfall(u, spec, alpha, sigma));
            es.push(e);
        }
        rep.results.set("expected_shortfall", es);
    }

    if (a.bootstrap > 0) {
        if (!sample) throw domain_error("--bootstrap requires --input");
        rep.config.samples = a.bootstrap;
        Sample dual;
        for (double y : sample->values)
            if (y > spec.Lstar && y < spec.H) dual.values.push_back(shadow::dual_transform(y, spec));
        double zstar = shadow::dual_transform(spec.Lstar, spec);
        auto bs = shadow::bootstrap_gpd(dual, zstar, a.bootstrap, rep.config.seed);
        std::vector<double> means;
        std::size_t skipped = 0;
        for (std::size_t i = 0; i < bs.xi.size(); ++i) {
            if (bs.xi[i] > 0.0)
                means.push_back(shadow::shadow_mean(spec, 1.0 / bs.xi[i], bs.beta[i]));
            else
                ++skipped;
        }
        auto o = json::Value::object();
        o.set("replications", static_cast<std::int64_t>(a.bootstrap));
        auto iv = [&](std::vector<double> v) {
            auto p = json::Value::array();
            p.push(shadow::percentile(v, 0.05));
            p.push(shadow::percentile(v, 0.95));
            return p;
        };
        o.set("xi_90pct", iv(bs.xi));
        o.set("beta_90pct", iv(bs.beta));
        if (!means.empty()) o.set("shadow_mean_90pct", iv(means));
        if (skipped > 0)
            rep.warnings.push_back(std::to_string(skipped) + " bootstrap replications had xi <= 0");
        rep.results.set("bootstrap", o);
    }

    if (a.perturb > 0.0) {
        if (!sample) throw domain_error("--perturb requires --input");
        if (!(a.perturb < 1.0)) throw domain_error("--perturb wants a fraction in (0,1)");
        rep.config.samples = a.perturb_reps;
        std::vector<double> ratios, means;
        std::size_t failed = 0;
        for (std::size_t r = 0; r < a.perturb_reps; ++r) {
            rng::Counter g(rep.config.seed, r);
            Sample noisy = *sample;
            for (auto& x : noisy.values) x *= 1.0 - a.perturb + 2.0 * a.perturb * g.u01();
            try {
                auto res = shadow::shadow_analysis(noisy, spec);
                ratios.push_back(res.ratio);
                means.push_back(res.shadow_mean);
            } catch (const std::exception&) {
                ++failed;
            }
        }
        if (ratios.empty()) throw numeric_error("all perturbation replications failed");
        auto o = json::Value::object();
        o.set("fraction", a.perturb);
        o.set("replications", static_cast<std::int64_t>(a.perturb_reps));
        auto iv = json::Value::array();
        iv.push(shadow::percentile(means, 0.05));
        iv.push(shadow::percentile(means, 0.95));
        o.set("shadow_mean_90pct", iv);
        auto iv2 = json::Value::array();
        iv2.push(shadow::percentile(ratios, 0.05));
        iv2.push(shadow::percentile(ratios, 0.95));
        o.set("ratio_90pct", iv2);
        if (failed > 0) rep.warnings.push_back(std::to_string(failed) + " perturbation replications failed");
        rep.results.set("perturb", o);
    }

    if (a.has_bounded) {
        auto o = json::Value::object();
        o.set("sigma", a.bounded_sigma);
        o.set("alpha", a.bounded_alpha);
        o.set("lomax_bounded_mean", shadow::lomax_bounded_mean(spec.L, spec.H, a.bounded_sigma, a.bounded_alpha));
        o.set("heaviside_conditional_mean",
              shadow::heaviside_conditional_mean(spec.L, spec.H, a.bounded_sigma, a.bounded_alpha));
        rep.results.set("bounded_means", o);
    }

    if (sample) {
        // Zipf coordinates of the (rescaled) input for plotting
        std::vector<double> x = sample->values;
        std::sort(x.begin(), x.end(), std::greater<double>());
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(x[i] > 0.0)) break;
            plot.add(std::log10(x[i]),
                     std::log10(static_cast<double>(i + 1) / static_cast<double>(x.size())), "zipf");
        }
    }
    return 0;
}

struct GiniArgs {
    double alpha = 0.0;
    bool has_alpha = false;
    double mu = 0.0;
    bool has_mu = false;
    double fit_threshold = 0.0;
    bool has_fit = false;
};

inline int gini_cmd(const GiniArgs& a, Report& rep, PlotData& plot, Table& table) {
    Sample sample = ingest_csv(rep.config.input_path);
    table.headers = {"key", "value"};
    double g_np = inequality::gini_nonparametric(sample);
    rep.results.set("g_np", g_np);
    table.row({"g_np", fmt(g_np)});
    plot.add(static_cast<double>(sample.size()), g_np, "g_np");

    std::optional<double> fitted;
    if (a.has_fit) {
        auto fit = tailfit::pareto_mle(sample, a.fit_threshold);
        fitted = fit.alpha_hat;
        auto o = json::Value::object();
        o.set("alpha_hat", fit.alpha_hat);
        o.set("L", fit.L);
        o.set("n_exceed", static_cast<std::int64_t>(fit.n_exceed));
        o.set("g_mle", inequality::gini_mle_pareto(fit.alpha_hat));
        o.set("g_mle_stderr", inequality::gini_mle_stderr(fit.alpha_hat, fit.n_exceed));
        rep.results.set("mle", o);
        table.row({"g_mle", fmt(inequality::gini_mle_pareto(fit.alpha_hat))});
    }
    double alpha_eff = a.has_alpha ? a.alpha : (fitted ? *fitted : 0.0);
    if (alpha_eff > 1.0 && alpha_eff < 2.0) {
        double mu = a.has_mu ? a.mu
                             : alpha_eff / (alpha_eff - 1.0) * (a.has_fit ? a.fit_threshold : 1.0);
        if (!a.has_mu)
            rep.warnings.push_back("--mu not given; assuming a Pareto mean of alpha/(alpha-1) times the threshold");
        auto g = inequality::gini_corrected(sample, alpha_eff, mu, fitted);
        rep.results.set("g_corrected", g.g_corrected);
        rep.results.set("alpha_used", g.alpha_used);
        rep.results.set("gamma_n", g.gamma_n);
        rep.results.set("mode_shift", g.mode_shift);
        table.row({"g_corrected", fmt(g.g_corrected)});
        table.row({"mode_shift", fmt(g.mode_shift)});
    } else if (a.has_alpha) {
        throw domain_error("--alpha must lie in (1,2) for the stable-limit correction");
    } else if (!a.has_fit) {
        rep.warnings.push_back("no --alpha or --fit-threshold: reporting the uncorrected estimator only");
    } else {
        rep.warnings.push_back("fitted alpha outside (1,2): stable-limit correction not applicable");
    }
    return 0;
}

struct KqArgs {
    double q = 0.01;
    double alpha = 0.0;
    bool has_alpha = false;
    std::vector<std::string> inputs;
};

inline int kq_cmd(const KqArgs& a, Report& rep, PlotData& plot, Table& table) {
    table.headers = {"key", "value"};
    std::optional<double> alpha;
    if (a.has_alpha) alpha = a.alpha;
    if (!a.inputs.empty()) {
        if (!rep.config.input_path.empty())
            throw domain_error("use either --input or --inputs, not both");
        std::vector<Sample> samples;
        auto arr = json::Value::array();
        for (const auto& path : a.inputs) {
            samples.push_back(ingest_csv(path));
            auto qc = inequality::quantile_contribution(samples.back(), a.q, alpha);
            auto o = json::Value::object();
            o.set("input", path);
            o.set("kappa_q_hat", qc.kappa_q_hat);
            o.set("h_q", qc.h_q);
            arr.push(o);
        }
        auto [weighted, pooled] = inequality::superadditivity_check(samples, a.q);
        rep.results.set("q", a.q);
        rep.results.set("subsamples", arr);
        rep.results.set("weighted_avg", weighted);
        rep.results.set("pooled", pooled);
        rep.results.set("superadditive", pooled >= weighted);
        table.row({"weighted_avg", fmt(weighted)});
        table.row({"pooled", fmt(pooled)});
        return 0;
    }
    if (rep.config.input_path.empty()) throw domain_error("kq needs --input or --inputs");
    Sample sample = ingest_csv(rep.config.input_path);
    auto qc = inequality::quantile_contribution(sample, a.q, alpha);
    rep.results.set("q", qc.q);
    rep.results.set("kappa_q_hat", qc.kappa_q_hat);
    rep.results.set("h_q", qc.h_q);
    if (qc.kappa_q_theory) rep.results.set("kappa_q_theory", *qc.kappa_q_theory);
    table.row({"kappa_q_hat", fmt(qc.kappa_q_hat)});
    table.row({"h_q", fmt(qc.h_q)});
    plot.add(a.q, qc.kappa_q_hat, "kappa_q");
    return 0;
}

struct PvmetaArgs {
    double pm = 0.0;
    int n = 0;
    bool has_n = false;
    std::vector<double> grid{0.001, 0.005, 0.01, 0.025, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.45, 0.49};
    std::vector<int> min_m;
    std::size_t simulate = 0;
};

inline int pvmeta_cmd(const PvmetaArgs& a, Report& rep, PlotData& plot, Table& table) {
    pvmeta::PvMetaSpec spec{a.pm, a.has_n ? std::optional<int>(a.n) : std::nullopt};
    pvmeta::validate(spec);
    rep.config.samples = a.simulate;
    rep.results.set("p_median", a.pm);
    if (a.has_n)
        rep.results.set("n", a.n);
    else
        rep.results.set("n", "limit");
    table.headers = {"p", "density", "cdf"};
    auto dens = json::Value::array();
    auto cdfs = json::Value::array();
    for (double p : a.grid) {
        double d = pvmeta::pv_density(p, spec);
        double F = a.has_n ? pvmeta::pv_cdf_finite(p, spec) : pvmeta::pv_cdf(p, a.pm);
        auto e = json::Value::array();
        e.push(p);
        e.push(d);
        dens.push(e);
        auto c = json::Value::array();
        c.push(p);
        c.push(F);
        cdfs.push(c);
        plot.add(p, d, "density");
        plot.add(p, F, "cdf");
        table.row({fmt(p), fmt(d), fmt(F)});
    }
    rep.results.set("density", dens);
    rep.results.set("cdf", cdfs);
    rep.results.set("mean_limit", pvmeta::pv_mean_limit(a.pm));
    if (!a.min_m.empty()) {
        auto arr = json::Value::array();
        for (int m : a.min_m) {
            double em = pvmeta::pv_min_expectation(a.pm, m);
            auto e = json::Value::object();
            e.set("m", m);
            e.set("expected_min", em);
            arr.push(e);
            plot.add(m, em, "expected_min");
        }
        rep.results.set("min_of_m", arr);
    }
    if (a.simulate > 0) {
        if (!a.has_n) throw domain_error("--simulate requires --n (finite degrees of freedom)");
        auto s = pvmeta::pv_simulate(a.pm, a.n, a.simulate, rep.config.seed, rep.config.workers);
        std::size_t below = 0;
        for (double p : s.values)
            if (p < 0.05) ++below;
        auto o = json::Value::object();
        o.set("reps", static_cast<std::int64_t>(a.simulate));
        o.set("mean", mean(s.values));
        o.set("median", shadow::percentile(s.values, 0.5));
        o.set("frac_below_005", static_cast<double>(below) / static_cast<double>(s.values.size()));
        rep.results.set("simulate", o);
    }
    return 0;
}

struct TailpriceArgs {
    double alpha = 0.0;
    double anchor_k = 0.0, anchor_c = 0.0;
    double spot = 1.0;
    std::string side = "price";
    std::vector<double> strikes;
    double bound_k = 0.0, bound_sigma = 0.0, bound_slope = 0.0, bound_t = 1.0, bound_l = 0.0;
    bool has_bound = false;
};

inline int tailprice_cmd(const TailpriceArgs& a, Report& rep, PlotData& plot, Table& table) {
    table.headers = {"strike", "price"};
    bool want_curve = a.alpha > 0.0 || !a.strikes.empty();
    if (!want_curve && !a.has_bound)
        throw domain_error("tailprice needs --alpha with an anchor, or --bound-k with --bound-sigma");
    if (want_curve) {
        tailoptions::Side side;
        if (a.side == "price")
            side = tailoptions::Side::call_on_price;
        else if (a.side == "return")
            side = tailoptions::Side::call_on_return;
        else if (a.side == "put")
            side = tailoptions::Side::put_on_return;
        else
            throw domain_error("--side must be price, return, or put");
        tailoptions::TailPricingSpec spec{a.alpha, a.anchor_k, a.anchor_c, a.spot, side};
        double l = tailoptions::implied_karamata_constant(spec);
        rep.results.set("side", a.side);
        rep.results.set("alpha", a.alpha);
        rep.results.set("spot", a.spot);
        rep.results.set("anchor_strike", a.anchor_k);
        rep.results.set("anchor_price", a.anchor_c);
        rep.results.set("implied_l", l);
        if (!a.strikes.empty()) {
            auto curve = tailoptions::price_curve(spec, a.strikes);
            auto arr = json::Value::array();
            for (std::size_t i = 0; i < curve.strikes.size(); ++i) {
                auto e = json::Value::object();
                e.set("strike", curve.strikes[i]);
                e.set("price", curve.prices[i]);
                arr.push(e);
                plot.add(curve.strikes[i], curve.prices[i], "curve");
                table.row({fmt(curve.strikes[i]), fmt(curve.prices[i])});
                if (!tailoptions::in_karamata_zone(curve.strikes[i], spec))
                    rep.warnings.push_back("strike " + fmt(curve.strikes[i]) +
                                           " is outside the declared tail zone");
            }
            rep.results.set("curve", arr);
            auto diag = tailoptions::curve_diagnostics(curve, side == tailoptions::Side::put_on_return);
            auto d = json::Value::object();
            d.set("ok", diag.ok);
            auto sv = json::Value::array();
            for (auto i : diag.spread_violations) sv.push(static_cast<std::int64_t>(i));
            d.set("spread_violations", sv);
            auto bv = json::Value::array();
            for (auto i : diag.butterfly_violations) bv.push(static_cast<std::int64_t>(i));
            d.set("butterfly_violations", bv);
            auto id = json::Value::array();
            for (std::size_t i = 0; i < diag.implied_density.size(); ++i) {
                id.push(diag.implied_density[i]);
                plot.add(curve.strikes[i + 1], diag.implied_density[i], "implied_density");
            }
            d.set("implied_density", id);
            rep.results.set("diagnostics", d);
        }
    }
    if (a.has_bound) {
        double bound = tailoptions::min_alpha_no_arbitrage(a.bound_k, a.bound_sigma, a.bound_slope,
                                                           a.spot, a.bound_t, a.bound_l);
        auto o = json::Value::object();
        o.set("K", a.bound_k);
        o.set("sigma", a.bound_sigma);
        o.set("sigma_slope", a.bound_slope);
        o.set("t", a.bound_t);
        o.set("l", a.bound_l);
        o.set("min_alpha", bound);
        rep.results.set("min_alpha_no_arbitrage", o);
        table.row({"min_alpha", fmt(bound)});
    }
    return 0;
}

struct DistArgs {
    detail::DistFlags dist;
    std::size_t sample_n = 0;
    bool describe = false;
    std::vector<double> at;       // stable pdf evaluation points
    std::vector<double> mixture;  // mu1,mu2,s1,s2
};

inline int dist_cmd(const DistArgs& a, Report& rep, PlotData& plot, Table& table) {
    auto [d, echo] = detail::make_dist(a.dist);
    rep.results.set("dist", echo);
    table.headers = {"value"};

    if (a.describe) {
        auto o = json::Value::object();
        const auto& f = a.dist;
        if (f.name == "pareto") {
            if (f.alpha > 1.0) o.set("mean", f.alpha * f.l / (f.alpha - 1.0));
            if (f.alpha > 2.0) o.set("std_over_mad", dists::std_over_mad(d));
        } else if (f.name == "student") {
            if (f.alpha > 1.0) {
                auto cr = dists::student_crossovers(f.alpha, f.scale);
                auto arr = json::Value::array();
                for (double c : cr) arr.push(c + f.location);
                o.set("crossovers", arr);
            }
            if (f.alpha == 3.0) o.set("std_over_mad", dists::std_over_mad(d));
        } else if (f.name == "gaussian") {
            auto cr = dists::gaussian_crossovers(f.mu, f.sigma);
            auto arr = json::Value::array();
            for (double c : cr) arr.push(c);
            o.set("crossovers", arr);
            o.set("std_over_mad", dists::std_over_mad(d));
        } else if (f.name == "stable") {
            dists::StableParams sp{f.alpha, f.beta, f.mu, f.sigma};
            if (f.alpha > 1.0) o.set("mean_abs_dev", dists::stable_mean_abs_dev(sp));
            o.set("mode", dists::stable_mode(sp));
            if (!a.at.empty()) {
                auto arr = json::Value::array();
                for (double x : a.at) {
                    auto e = json::Value::array();
                    e.push(x);
                    e.push(dists::stable_pdf(x, sp));
                    arr.push(e);
                    plot.add(x, dists::stable_pdf(x, sp), "stable_pdf");
                }
                o.set("pdf", arr);
            }
        } else if (f.name == "twostate") {
            o.set("kurtosis", dists::two_state_kurtosis(f.a, f.p));
        } else if (f.name == "bimodal") {
            o.set("kurtosis", dists::mixture_kurtosis(-f.d / 2.0, f.d / 2.0, f.sigma, f.sigma));
        } else if (f.name == "exponential") {
            o.set("mean", 1.0 / f.lambda);
        } else if (f.name == "lognormal") {
            o.set("mean", std::exp(f.mu + f.sigma * f.sigma / 2.0));
        }
        rep.results.set("describe", o);
    }
    if (!a.mixture.empty()) {
        if (a.mixture.size() != 4) throw domain_error("--mixture wants mu1,mu2,s1,s2");
        auto o = json::Value::object();
        double k = dists::mixture_kurtosis(a.mixture[0], a.mixture[1], a.mixture[2], a.mixture[3]);
        o.set("kurtosis", k);
        if (a.mixture[2] != a.mixture[3])
            o.set("crossover_separation",
                  dists::mixture_kurtosis_crossover(a.mixture[2], a.mixture[3]));
        rep.results.set("mixture", o);
    }
    if (a.sample_n > 0) {
        rep.config.samples = a.sample_n;
        auto s = dists::sample(d, a.sample_n, rep.config.seed);
        auto arr = json::Value::array();
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            arr.push(s.values[i]);
            plot.add(static_cast<double>(i), s.values[i], "sample");
            table.row({fmt(s.values[i])});
        }
        rep.results.set("sample", arr);
    }
    if (!a.describe && a.mixture.empty() && a.sample_n == 0)
        throw domain_error("dist needs at least one of --describe, --mixture, --sample");
    return 0;
}

}  // namespace run

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

inline int dispatch(int argc, const char* const* argv) {
    CLI::App app{"heavy-tail statistics toolkit: preasymptotic convergence, tail-exponent "
                 "inference, shadow means, inequality estimation, p-value meta-distributions, "
                 "power-law option pricing"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.workers = detail::env_default_workers();
    std::string out_path;

    auto add_common = [&](CLI::App* sub, bool with_input) {
        sub->add_option("--seed", cfg.seed, "RNG seed (default 1)");
        sub->add_option("--workers", cfg.workers, "worker threads for Monte Carlo loops "
                                                  "(default from HT_WORKERS, else 1)");
        sub->add_option("--format", cfg.output, "output format: json (default), csv, plotdata");
        sub->add_option("--out", out_path, "write output to a file instead of stdout");
        if (with_input) sub->add_option("--input", cfg.input_path, "CSV input, one value per row");
    };

    // kappa
    run::KappaArgs ka;
    auto* sub_kappa = app.add_subcommand(
        "kappa", "preasymptotic convergence metric for n-fold sums, Monte Carlo or exact forms");
    {
        auto* od = sub_kappa->add_option("--dist", ka.dist.name, "summand distribution (see dist)");
        auto* oa = sub_kappa->add_option("--alpha", ka.dist.alpha, "tail exponent");
        sub_kappa->add_option("--l", ka.dist.l, "pareto minimum (default 1)");
        sub_kappa->add_option("--scale", ka.dist.scale, "student scale (default 1)");
        sub_kappa->add_option("--location", ka.dist.location, "student location (default 0)");
        sub_kappa->add_option("--mu", ka.dist.mu, "location (lognormal/gaussian, default 0)");
        sub_kappa->add_option("--sigma", ka.dist.sigma, "scale (default 1)");
        sub_kappa->add_option("--d", ka.dist.d, "bimodal separation")->needs(od);
        sub_kappa->add_option("--lambda", ka.dist.lambda, "exponential rate (default 1)");
        sub_kappa->add_option("--n", ka.ns, "target sum lengths (comma-separated)")->delimiter(',');
        sub_kappa->add_option("--n0", ka.n0, "baseline sum length (default 1)");
        sub_kappa->add_option("--paths", cfg.samples, "Monte Carlo paths")->default_val(100000);
        sub_kappa->add_option("--exact", ka.exact,
                              "closed form instead of MC: exponential, cubic-student, bimodal");
        sub_kappa->add_option("--exact-n", ka.exact_n, "sum length for the exact forms (default 2)");
        sub_kappa->add_option("--bimodal-d", ka.bim_d, "separation for --exact bimodal");
        sub_kappa->add_option("--bimodal-sigma", ka.bim_sigma, "scale for --exact bimodal (default 1)");
        auto* oe = sub_kappa->add_flag("--equivalent-n", ka.want_equiv,
                                       "convert kappa to an equivalent sample size");
        sub_kappa->add_option("--kappa1", ka.kappa1, "kappa(1,2) for --equivalent-n")->needs(oe);
        sub_kappa->add_option("--n-gaussian", ka.n_gaussian,
                              "Gaussian benchmark size for --equivalent-n (default 30)");
        sub_kappa->parse_complete_callback([&ka, od, oa]() {
            ka.has_dist = od->count() > 0;
            ka.dist.has_alpha = oa->count() > 0;
        });
        add_common(sub_kappa, false);
    }

    // diag
    run::DiagArgs da;
    auto* sub_diag = app.add_subcommand("diag", "moment-convergence and memory diagnostics on a series");
    {
        auto* op = sub_diag->add_option("--ms-p", da.ms_p, "maximum-to-sum plot moment order");
        sub_diag->add_option("--lags", da.lags, "aggregation lags for kurtosis")->delimiter(',');
        sub_diag->add_option("--window", da.window, "drawdown window length (>= 2)");
        sub_diag->add_option("--thresholds", da.thresholds, "excess-conditional-expectation thresholds")
            ->delimiter(',');
        sub_diag->add_option("--side", da.side, "excess side: right (default) or left");
        sub_diag->add_option("--acf-lags", da.acf_lags, "autocorrelation lags")->delimiter(',');
        sub_diag->add_flag("--returns", da.returns, "treat input as returns (cumulate for drawdowns)");
        sub_diag->parse_complete_callback([&da, op]() { da.has_ms = op->count() > 0; });
        add_common(sub_diag, true);
        sub_diag->get_option("--input")->required();
    }

    // tailfit
    run::TailfitArgs ta;
    auto* sub_tail = app.add_subcommand("tailfit", "tail-exponent inference and hidden-tail accounting");
    {
        auto* ot = sub_tail->add_option("--threshold", ta.threshold, "exceedance MLE threshold L");
        sub_tail->add_flag("--debias", ta.debias, "apply the (n-1)/n small-sample factor");
        sub_tail->add_option("--hill", ta.hill_ks, "order-statistic sweep sizes")->delimiter(',');
        auto* og = sub_tail->add_option("--gpd-u", ta.gpd_u, "GPD threshold u");
        auto* oh = sub_tail->add_option("--hidden-k", ta.hidden_k,
                                        "hidden-tail cutoff K (needs --threshold)");
        sub_tail->add_option("--hidden-p", ta.hidden_p, "hidden-tail moment order (default 0)");
        sub_tail->add_option("--sampling-density", ta.sd,
                             "alpha,n[,truncate]: tabulate the estimator sampling density")
            ->delimiter(',');
        sub_tail->add_flag("--sampling-raw", ta.sd_raw, "raw (biased) parameterization");
        sub_tail->add_option("--stoch-kind", ta.stoch_kind, "stochastic exponent: lognormal or gamma");
        sub_tail->add_option("--alpha0", ta.stoch_alpha0, "central exponent for --stoch-kind");
        sub_tail->add_option("--spread", ta.stoch_spread, "exponent spread for --stoch-kind");
        sub_tail->add_option("--floor", ta.stoch_floor, "shift/floor for --stoch-kind (default 1)");
        sub_tail->add_option("--lambda-scale", ta.stoch_lambda, "scale for --stoch-kind (default 1)");
        sub_tail->parse_complete_callback([&ta, ot, og, oh]() {
            ta.has_threshold = ot->count() > 0;
            ta.has_gpd = og->count() > 0;
            ta.has_hidden = oh->count() > 0;
        });
        add_common(sub_tail, true);
    }

    // shadow
    run::ShadowArgs sa;
    auto* sub_shadow = app.add_subcommand("shadow", "dual-transform shadow mean, VaR, and expected shortfall");
    {
        sub_shadow->add_option("--L", sa.L, "support floor")->required();
        sub_shadow->add_option("--H", sa.H, "remote upper bound")->required();
        auto* ol = sub_shadow->add_option("--Lstar", sa.Lstar, "analysis threshold (default L)");
        auto* oa = sub_shadow->add_option("--alpha", sa.alpha, "tail exponent (skip fitting)");
        auto* os = sub_shadow->add_option("--sigma", sa.sigma, "GPD scale on the dual (skip fitting)");
        sub_shadow->add_option("--populations", sa.populations, "population CSV for rescaling");
        sub_shadow->add_option("--today-pop", sa.today_pop, "reference population for rescaling");
        sub_shadow->add_option("--quantiles", sa.quantiles, "shadow quantile levels")->delimiter(',');
        sub_shadow->add_option("--es", sa.es_levels, "expected-shortfall thresholds")->delimiter(',');
        sub_shadow->add_option("--bootstrap", sa.bootstrap, "subsample bootstrap replications");
        sub_shadow->add_option("--perturb", sa.perturb, "uniform perturbation fraction of each value");
        sub_shadow->add_option("--perturb-reps", sa.perturb_reps, "perturbation replications (default 100)");
        auto* ob = sub_shadow->add_option("--bounded-sigma", sa.bounded_sigma,
                                          "scale for the bounded-mean closed forms");
        sub_shadow->add_option("--bounded-alpha", sa.bounded_alpha,
                               "exponent for the bounded-mean closed forms");
        sub_shadow->parse_complete_callback([&sa, ol, oa, os, ob]() {
            sa.has_lstar = ol->count() > 0;
            sa.has_alpha = oa->count() > 0;
            sa.has_sigma = os->count() > 0;
            sa.has_bounded = ob->count() > 0;
        });
        add_common(sub_shadow, true);
    }

    // gini
    run::GiniArgs ga;
    auto* sub_gini = app.add_subcommand("gini", "Gini estimation with the stable-limit correction");
    {
        auto* oa = sub_gini->add_option("--alpha", ga.alpha, "tail exponent in (1,2) for the correction");
        auto* om = sub_gini->add_option("--mu", ga.mu, "distribution mean for the stable scale");
        auto* of = sub_gini->add_option("--fit-threshold", ga.fit_threshold,
                                        "fit alpha by exceedance MLE above this threshold");
        sub_gini->parse_complete_callback([&ga, oa, om, of]() {
            ga.has_alpha = oa->count() > 0;
            ga.has_mu = om->count() > 0;
            ga.has_fit = of->count() > 0;
        });
        add_common(sub_gini, true);
        sub_gini->get_option("--input")->required();
    }

    // kq
    run::KqArgs qa;
    auto* sub_kq = app.add_subcommand("kq", "top-q quantile contribution and superadditivity check");
    {
        sub_kq->add_option("--q", qa.q, "top share fraction (default 0.01)");
        auto* oa = sub_kq->add_option("--alpha", qa.alpha, "tail exponent for the theoretical share");
        sub_kq->add_option("--inputs", qa.inputs, "subsample CSVs for the superadditivity check")
            ->delimiter(',');
        sub_kq->parse_complete_callback([&qa, oa]() { qa.has_alpha = oa->count() > 0; });
        add_common(sub_kq, true);
    }

    // pvmeta
    run::PvmetaArgs pa;
    auto* sub_pv = app.add_subcommand("pvmeta", "meta-distribution of p-values across identical studies");
    {
        sub_pv->add_option("--pm", pa.pm, "median p-value")->required();
        auto* on = sub_pv->add_option("--n", pa.n, "degrees of freedom (omit for the limit form)");
        sub_pv->add_option("--grid", pa.grid, "evaluation grid of p values")->delimiter(',');
        sub_pv->add_option("--min-m", pa.min_m, "m values for the min-of-m expectation")->delimiter(',');
        sub_pv->add_option("--simulate", pa.simulate, "simulated test replications");
        sub_pv->parse_complete_callback([&pa, on]() { pa.has_n = on->count() > 0; });
        add_common(sub_pv, false);
    }

    // tailprice
    run::TailpriceArgs oa_;
    auto* sub_opt = app.add_subcommand("tailprice", "power-law option pricing off a single anchor");
    {
        sub_opt->add_option("--alpha", oa_.alpha, "tail exponent (> 1)");
        sub_opt->add_option("--anchor-k", oa_.anchor_k, "anchor strike");
        sub_opt->add_option("--anchor-c", oa_.anchor_c, "anchor price");
        sub_opt->add_option("--spot", oa_.spot, "spot (default 1)");
        sub_opt->add_option("--side", oa_.side, "price (default), return, or put");
        sub_opt->add_option("--strikes", oa_.strikes, "strike grid")->delimiter(',');
        auto* ob = sub_opt->add_option("--bound-k", oa_.bound_k, "strike for the min-alpha bound");
        sub_opt->add_option("--bound-sigma", oa_.bound_sigma, "implied vol at that strike");
        sub_opt->add_option("--bound-slope", oa_.bound_slope, "smile slope (default 0)");
        sub_opt->add_option("--bound-t", oa_.bound_t, "maturity (default 1)");
        sub_opt->add_option("--bound-l", oa_.bound_l, "Karamata constant for the bound");
        sub_opt->parse_complete_callback([&oa_, ob]() { oa_.has_bound = ob->count() > 0; });
        add_common(sub_opt, false);
    }

    // dist
    run::DistArgs dsa;
    auto* sub_dist = app.add_subcommand("dist", "distribution utilities: sampling and closed-form facts");
    {
        detail::add_dist_options(sub_dist, dsa.dist);
        sub_dist->add_option("--sample", dsa.sample_n, "number of draws to emit");
        sub_dist->add_flag("--describe", dsa.describe, "emit closed-form facts for the distribution");
        sub_dist->add_option("--at", dsa.at, "stable pdf evaluation points")->delimiter(',');
        sub_dist->add_option("--mixture", dsa.mixture, "mu1,mu2,s1,s2 Gaussian-mixture kurtosis")
            ->delimiter(',');
        add_common(sub_dist, false);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Report rep;
    PlotData plot;
    Table table;
    rep.config = cfg;
    try {
        if (cfg.output != "json" && cfg.output != "csv" && cfg.output != "plotdata")
            throw domain_error("--format must be json, csv, or plotdata");
        int rc = 0;
        if (app.got_subcommand(sub_kappa)) {
            rep.tool = "kappa";
            rc = run::kappa_cmd(ka, rep, plot, table);
        } else if (app.got_subcommand(sub_diag)) {
            rep.tool = "diag";
            rc = run::diag_cmd(da, rep, plot, table);
        } else if (app.got_subcommand(sub_tail)) {
            rep.tool = "tailfit";
            rc = run::tailfit_cmd(ta, rep, plot, table);
        } else if (app.got_subcommand(sub_shadow)) {
            rep.tool = "shadow";
            rc = run::shadow_cmd(sa, rep, plot, table);
        } else if (app.got_subcommand(sub_gini)) {
            rep.tool = "gini";
            rc = run::gini_cmd(ga, rep, plot, table);
        } else if (app.got_subcommand(sub_kq)) {
            rep.tool = "kq";
            rc = run::kq_cmd(qa, rep, plot, table);
        } else if (app.got_subcommand(sub_pv)) {
            rep.tool = "pvmeta";
            rc = run::pvmeta_cmd(pa, rep, plot, table);
        } else if (app.got_subcommand(sub_opt)) {
            rep.tool = "tailprice";
            rc = run::tailprice_cmd(oa_, rep, plot, table);
        } else if (app.got_subcommand(sub_dist)) {
            rep.tool = "dist";
            rc = run::dist_cmd(dsa, rep, plot, table);
        }
        if (rc == 0) detail::emit(rep, plot, table, out_path);
        return rc;
    } catch (const domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const data_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}

}  // namespace ht::cli

#endif  // HT_CLI_HPP
