// Command-line front end: logrep, swap, trajectory, spectrum, selftest.
// Exit codes: 0 success, 1 threshold/selftest failure, 2 config error,
// 3 numerical error (error name recorded in the manifest).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "oplog/complex_matrix.hpp"
#include "oplog/contour.hpp"
#include "oplog/errors.hpp"
#include "oplog/evolution.hpp"
#include "oplog/io.hpp"
#include "oplog/linalg.hpp"
#include "oplog/presets.hpp"
#include "oplog/selftest.hpp"
#include "oplog/swap.hpp"

namespace {

using njson = nlohmann::json;
using namespace oplog;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    bool override_illposed = false;
};

struct StageClock {
    std::chrono::steady_clock::time_point last = std::chrono::steady_clock::now();
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last).count();
        last = now;
        return s;
    }
};

njson parse_config(const GlobalOpts& g, const std::set<std::string>& allowed) {
    if (g.config_path.empty()) throw ConfigError("this command requires --config");
    const std::string raw = io::read_text_file(g.config_path);
    njson j;
    try {
        j = njson::parse(raw);
    } catch (const njson::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    for (const auto& item : j.items())
        if (allowed.find(item.key()) == allowed.end())
            throw ConfigError("unknown config key: " + item.key());
    return j;
}

double num_field(const njson& j, const char* key, double defv, double lo, double hi) {
    if (!j.contains(key)) return defv;
    const njson& v = j.at(key);
    if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi)
        throw ConfigError(std::string(key) + " out of range");
    return x;
}

std::int64_t int_field(const njson& j, const char* key, std::int64_t defv, std::int64_t lo,
                       std::int64_t hi) {
    if (!j.contains(key)) return defv;
    const njson& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError(std::string(key) + " must be an integer");
    const std::int64_t x = v.get<std::int64_t>();
    if (x < lo || x > hi) throw ConfigError(std::string(key) + " out of range");
    return x;
}

std::string str_field(const njson& j, const char* key, const std::string& defv) {
    if (!j.contains(key)) return defv;
    const njson& v = j.at(key);
    if (!v.is_string()) throw ConfigError(std::string(key) + " must be a string");
    return v.get<std::string>();
}

Scheme scheme_field(const njson& j) {
    const std::string s = str_field(j, "scheme", "midpoint_exp");
    if (s == "midpoint_exp") return Scheme::midpoint_exp;
    if (s == "cf4") return Scheme::cf4;
    throw ConfigError("scheme must be midpoint_exp or cf4");
}

// kappa: the string "auto" or an explicit real number
std::optional<double> kappa_field(const njson& j) {
    if (!j.contains("kappa")) return std::nullopt;
    const njson& v = j.at("kappa");
    if (v.is_string()) {
        if (v.get<std::string>() == "auto") return std::nullopt;
        throw ConfigError("kappa must be \"auto\" or a number");
    }
    if (!v.is_number()) throw ConfigError("kappa must be \"auto\" or a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x == 0.0) throw ConfigError("explicit kappa must be nonzero");
    return x;
}

std::size_t nodes_field(const njson& j) {
    const std::int64_t n = int_field(j, "nodes", 64, 8, 4096);
    if (n % 2 != 0) throw ConfigError("nodes must be even");
    return static_cast<std::size_t>(n);
}

std::vector<std::pair<std::string, double>> thresholds_field(
    const njson& j, const std::set<std::string>& known) {
    std::vector<std::pair<std::string, double>> out;
    if (!j.contains("thresholds")) return out;
    const njson& t = j.at("thresholds");
    if (!t.is_object()) throw ConfigError("thresholds must be an object");
    for (const auto& item : t.items()) {
        if (known.find(item.key()) == known.end())
            throw ConfigError("unknown threshold key: " + item.key());
        if (!item.value().is_number())
            throw ConfigError("threshold " + item.key() + " must be a number");
        out.emplace_back(item.key(), item.value().get<double>());
    }
    return out;
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
    return (std::filesystem::path(g.out_dir) / name).string();
}

void ensure_out_dir(const GlobalOpts& g) {
    std::filesystem::create_directories(g.out_dir);
}

// report rows double both as the CSV body and the manifest residual table
struct Rows {
    std::vector<std::pair<std::string, std::string>> text;
    std::vector<std::pair<std::string, double>> numeric;

    void add(const std::string& name, double v) {
        text.emplace_back(name, io::fmt17(v));
        numeric.emplace_back(name, v);
    }
    void add_text(const std::string& name, const std::string& v) {
        text.emplace_back(name, v);
    }
    std::optional<double> find(const std::string& name) const {
        for (const auto& [k, v] : numeric)
            if (k == name) return v;
        return std::nullopt;
    }
};

void fill_residuals(io::ManifestBuilder& man, const Rows& rows) {
    man.residuals.clear();
    for (const auto& [name, v] : rows.numeric) man.add_residual(name, v);
}

// exit 0 when every named threshold exists and is met, else 1
int apply_gate(const Rows& rows, const std::vector<std::pair<std::string, double>>& gates) {
    int rc = 0;
    for (const auto& [key, bound] : gates) {
        const std::optional<double> got = rows.find(key);
        if (!got || !(*got <= bound)) {
            std::fprintf(stderr, "threshold not met: %s (bound %s, got %s)\n", key.c_str(),
                         io::fmt17(bound).c_str(),
                         got ? io::fmt17(*got).c_str() : "absent");
            rc = 1;
        }
    }
    return rc;
}

// ------------------------------------------------------------------- logrep

int run_logrep(const GlobalOpts& g) {
    const std::set<std::string> keys = {"preset", "n",     "steps",      "scheme", "j",
                                        "k",      "kappa", "nodes",      "thresholds"};
    const std::set<std::string> gate_keys = {"forward_residual",    "recovery_residual",
                                             "eq5_agreement",       "derivative_agreement",
                                             "commutator",          "factor_condition"};
    const njson cfg = parse_config(g, keys);

    const std::string preset = str_field(cfg, "preset", "constant");
    const std::size_t n = static_cast<std::size_t>(int_field(cfg, "n", 8, 1, 64));
    const std::size_t steps = static_cast<std::size_t>(int_field(cfg, "steps", 32, 2, 4096));
    const Scheme scheme = scheme_field(cfg);
    const std::size_t j = static_cast<std::size_t>(
        int_field(cfg, "j", static_cast<std::int64_t>(steps), 0,
                  static_cast<std::int64_t>(steps)));
    const std::size_t k =
        static_cast<std::size_t>(int_field(cfg, "k", 0, 0, static_cast<std::int64_t>(j)));
    const std::optional<double> kappa = kappa_field(cfg);
    const std::size_t nodes = nodes_field(cfg);
    const auto gates = thresholds_field(cfg, gate_keys);
    const GeneratorFamily gen = presets::by_name(preset, n, g.seed);

    ensure_out_dir(g);
    io::ManifestBuilder man;
    man.command = "logrep";
    man.config_echo = cfg.dump();
    man.seed = g.seed;
    StageClock clock;
    Rows rows;

    try {
        const PropagatorGrid grid = build_family(gen, steps, scheme);
        man.timings.emplace_back("build", clock.lap());

        KappaCertificate cert;
        if (kappa) {
            // certify the sweep's worst member so one contour serves all of it
            double worst = -1.0;
            ComplexMatrix pick = ComplexMatrix::identity(gen.dim);
            ComplexMatrix acc = ComplexMatrix::identity(gen.dim);
            for (std::size_t s = k; s <= grid.steps(); ++s) {
                if (s > k) acc = grid.one_step(s - 1) * acc;
                const double nb = operator_norm_estimate(acc);
                if (nb > worst) {
                    worst = nb;
                    pick = acc;
                }
            }
            cert = make_certificate(pick, cplx(*kappa, 0.0), nodes);
        } else {
            cert = sweep_certificate(grid, k, nodes);
        }
        man.timings.emplace_back("certify", clock.lap());

        const ComplexMatrix u = propagator(grid, j, k);
        const ComplexMatrix kj = gen.eval(grid.point(j));
        RepresentationReport rep;
        try {
            rep = log_representation(grid, j, k, cert);
        } catch (const RepresentationNotInvertible& e) {
            rep = e.report();
            rows.add_text("error_recovery", e.name());
        }
        try {
            representation_eq5(grid, j, k, cert);
        } catch (const BackwardNotAvailable& e) {
            rows.add_text("error_eq5", e.name());
        }
        man.timings.emplace_back("represent", clock.lap());

        rows.add("forward_residual", rep.forward_residual);
        rows.add("factor_condition", rep.factor_condition);
        rows.add("commutator", rep.commutator);
        if (rep.recovery_residual) rows.add("recovery_residual", *rep.recovery_residual);
        if (rep.eq5_agreement) rows.add("eq5_agreement", *rep.eq5_agreement);
        if (rep.derivative_agreement)
            rows.add("derivative_agreement", *rep.derivative_agreement);
        rows.add("kappa_re", cert.kappa.real());
        rows.add("kappa_im", cert.kappa.imag());
        rows.add("norm_bound", cert.norm_bound);
        rows.add("spectral_margin", cert.spectral_margin);
        rows.add("contour_radius", cert.contour.radius);
        rows.add("contour_nodes", static_cast<double>(cert.contour.nodes));
        rows.add("steps", static_cast<double>(steps));
        rows.add("step_size", grid.step_size());
        rows.add("j", static_cast<double>(j));
        rows.add("k", static_cast<double>(k));

        io::write_matrix(out_path(g, "propagator.json"), u);
        man.add_file("propagator.json");
        io::write_matrix(out_path(g, "generator.json"), kj);
        man.add_file("generator.json");
        io::write_matrix(out_path(g, "shifted_log.json"), shifted_log(u, cert));
        man.add_file("shifted_log.json");
        io::write_text_file(out_path(g, "certificate.json"), io::certificate_to_json(cert));
        man.add_file("certificate.json");
        io::write_report_csv(out_path(g, "report.csv"), rows.text);
        man.add_file("report.csv");
        fill_residuals(man, rows);
        man.timings.emplace_back("emit", clock.lap());
    } catch (const Error& e) {
        man.error = e.name();
        fill_residuals(man, rows);
        man.write(out_path(g, "manifest.json"));
        std::fprintf(stderr, "logrep failed: %s: %s\n", e.name().c_str(), e.what());
        return 3;
    }

    man.write(out_path(g, "manifest.json"));
    return apply_gate(rows, gates);
}

// --------------------------------------------------------------------- swap

ProblemSpec spec_from_config(const njson& cfg) {
    ProblemSpec sp;
    const std::string kind = str_field(cfg, "problem", "transport");
    if (kind == "transport")
        sp.kind = ProblemKind::transport;
    else if (kind == "heat")
        sp.kind = ProblemKind::heat;
    else
        throw ConfigError("problem must be transport or heat");
    sp.c = num_field(cfg, "c", 1.0, -100.0, 100.0);
    if (sp.c == 0.0) throw ConfigError("c must be nonzero");
    sp.nu = num_field(cfg, "nu", 0.02, 1e-12, 100.0);
    sp.T = num_field(cfg, "T", 1.0, 1e-6, 100.0);
    sp.L = num_field(cfg, "L", 1.0, 1e-6, 100.0);
    sp.n0 = static_cast<std::size_t>(int_field(cfg, "n0", 128, 8, 1024));
    sp.n1 = static_cast<std::size_t>(int_field(cfg, "n1", 128, 8, 1024));
    const std::string prof = str_field(cfg, "profile", "gaussian");
    if (prof == "gaussian")
        sp.profile = ProfileKind::gaussian;
    else if (prof == "fourier_mode")
        sp.profile = ProfileKind::fourier_mode;
    else
        throw ConfigError("profile must be gaussian or fourier_mode");
    sp.mode = static_cast<int>(int_field(cfg, "mode", 1, -64, 64));
    sp.width = num_field(cfg, "width", 0.35, 1e-6, 100.0);
    return sp;
}

void add_direction_rows(Rows& rows, const std::string& p, const DirectionReport& rep) {
    rows.add(p + "_spectral_abscissa", rep.spectral_abscissa);
    rows.add(p + "_wellposed", rep.wellposed ? 1.0 : 0.0);
    rows.add(p + "_growth_bound", rep.growth_bound);
    for (const auto& [sz, val] : rep.abscissa_trend)
        rows.add(p + "_trend_" + std::to_string(sz), val);
}

int run_swap(const GlobalOpts& g) {
    const std::set<std::string> keys = {"problem", "c",    "nu",   "T",
                                        "L",       "n0",   "n1",   "profile",
                                        "mode",    "width", "threshold_comparison"};
    const njson cfg = parse_config(g, keys);
    const ProblemSpec sp = spec_from_config(cfg);
    std::optional<double> gate;
    if (cfg.contains("threshold_comparison"))
        gate = num_field(cfg, "threshold_comparison", 0.0, 0.0, 1e300);

    ensure_out_dir(g);
    io::ManifestBuilder man;
    man.command = "swap";
    man.config_echo = cfg.dump();
    man.seed = g.seed;
    StageClock clock;
    Rows rows;

    try {
        const DirectionReport rep0 = illposedness_indicator(sp, 0);
        const DirectionReport rep1 = illposedness_indicator(sp, 1);
        add_direction_rows(rows, "dir0", rep0);
        add_direction_rows(rows, "dir1", rep1);
        man.timings.emplace_back("screen", clock.lap());

        std::optional<SpaceTimeField> f0, f1, fx;
        try {
            f0 = solve_direction(sp, 0, g.override_illposed, &rep0);
        } catch (const IllPosedDirection&) {
            rows.add_text("dir0_refused", "IllPosedDirection");
        }
        try {
            f1 = solve_direction(sp, 1, g.override_illposed, &rep1);
        } catch (const IllPosedDirection&) {
            rows.add_text("dir1_refused", "IllPosedDirection");
        }
        if (sp.kind == ProblemKind::transport) fx = exact_field(sp);
        man.timings.emplace_back("solve", clock.lap());

        if (f0 && f1) rows.add("comparison", compare_directions(*f0, *f1));
        if (f0 && fx) rows.add("comparison_dir0_exact", compare_directions(*fx, *f0));
        if (f1 && fx) rows.add("comparison_dir1_exact", compare_directions(*fx, *f1));
        if (f0) {
            const ResliceReport rs = reslice_discrete_trajectory(*f0);
            rows.add("reslice_modulus_x0", rs.modulus_x0);
            rows.add("reslice_modulus_x1", rs.modulus_x1);
        }

        if (f0) {
            io::write_field_csv(out_path(g, "dir0.csv"), *f0);
            man.add_file("dir0.csv");
        }
        if (f1) {
            io::write_field_csv(out_path(g, "dir1.csv"), *f1);
            man.add_file("dir1.csv");
        }
        if (fx) {
            io::write_field_csv(out_path(g, "exact.csv"), *fx);
            man.add_file("exact.csv");
        }

        // per-slice error profile: dir0 vs dir1 when both exist, else vs the
        // exact field, else the slice norms of the one computed field
        if (f0) {
            const GridAxis& ax0 = f0->axis0();
            const GridAxis& ax1 = f0->axis1();
            const SpaceTimeField* ref = f1 ? &*f1 : (fx ? &*fx : nullptr);
            std::vector<double> xs(ax0.n), ys(ax0.n);
            for (std::size_t i = 0; i < ax0.n; ++i) {
                xs[i] = ax0.point(i);
                double acc = 0.0, base = 0.0;
                for (std::size_t c = 0; c < ax1.n; ++c) {
                    base += std::norm(f0->at(i, c));
                    if (ref) acc += std::norm(f0->at(i, c) - ref->at(i, c));
                }
                ys[i] = ref ? std::sqrt(acc) / std::max(std::sqrt(base), 1e-300)
                            : std::sqrt(base * ax1.step());
            }
            io::write_svg_polyline(out_path(g, "slices.svg"), xs, ys);
            man.add_file("slices.svg");
        }

        io::write_report_csv(out_path(g, "report.csv"), rows.text);
        man.add_file("report.csv");
        fill_residuals(man, rows);
        man.timings.emplace_back("emit", clock.lap());
    } catch (const Error& e) {
        man.error = e.name();
        fill_residuals(man, rows);
        man.write(out_path(g, "manifest.json"));
        std::fprintf(stderr, "swap failed: %s: %s\n", e.name().c_str(), e.what());
        return 3;
    }

    man.write(out_path(g, "manifest.json"));
    if (gate) {
        Rows g2;
        g2.numeric = rows.numeric;
        return apply_gate(g2, {{"comparison", *gate}});
    }
    return 0;
}

// --------------------------------------------------------------- trajectory

int run_trajectory(const GlobalOpts& g) {
    const std::set<std::string> keys = {"preset", "n",     "steps", "scheme",
                                        "k",      "kappa", "nodes", "u0"};
    const njson cfg = parse_config(g, keys);
    const std::string preset = str_field(cfg, "preset", "constant");
    const std::size_t n = static_cast<std::size_t>(int_field(cfg, "n", 8, 1, 64));
    const std::size_t steps = static_cast<std::size_t>(int_field(cfg, "steps", 32, 2, 4096));
    const Scheme scheme = scheme_field(cfg);
    const std::size_t k = static_cast<std::size_t>(
        int_field(cfg, "k", 0, 0, static_cast<std::int64_t>(steps) - 1));
    const std::optional<double> kappa = kappa_field(cfg);
    const std::size_t nodes = nodes_field(cfg);
    const GeneratorFamily gen = presets::by_name(preset, n, g.seed);

    std::vector<cplx> u0(gen.dim, cplx(0.0, 0.0));
    if (cfg.contains("u0")) {
        const njson& a = cfg.at("u0");
        if (!a.is_array() || a.size() != 2 * gen.dim)
            throw ConfigError("u0 must be an array of 2*dim numbers (re, im interleaved)");
        for (std::size_t i = 0; i < gen.dim; ++i) {
            if (!a[2 * i].is_number() || !a[2 * i + 1].is_number())
                throw ConfigError("u0 entries must be numbers");
            u0[i] = cplx(a[2 * i].get<double>(), a[2 * i + 1].get<double>());
            if (!std::isfinite(u0[i].real()) || !std::isfinite(u0[i].imag()))
                throw ConfigError("u0 entries must be finite");
        }
    } else {
        u0[0] = cplx(1.0, 0.0);
    }

    ensure_out_dir(g);
    io::ManifestBuilder man;
    man.command = "trajectory";
    man.config_echo = cfg.dump();
    man.seed = g.seed;
    StageClock clock;
    Rows rows;

    try {
        const PropagatorGrid grid = build_family(gen, steps, scheme);
        KappaCertificate cert;
        if (kappa) {
            double worst = -1.0;
            ComplexMatrix pick = ComplexMatrix::identity(gen.dim);
            ComplexMatrix acc = ComplexMatrix::identity(gen.dim);
            for (std::size_t s = k; s <= grid.steps(); ++s) {
                if (s > k) acc = grid.one_step(s - 1) * acc;
                const double nb = operator_norm_estimate(acc);
                if (nb > worst) {
                    worst = nb;
                    pick = acc;
                }
            }
            cert = make_certificate(pick, cplx(*kappa, 0.0), nodes);
        } else {
            cert = sweep_certificate(grid, k, nodes);
        }
        man.timings.emplace_back("build", clock.lap());

        const auto traj = regularized_trajectory(grid, k, cert, u0);
        man.timings.emplace_back("evolve", clock.lap());

        // trajectory as a field: x0 = evolution parameter, x1 = component index
        const GridAxis ax0{grid.point(k),
                           grid.point(k) + static_cast<double>(traj.size()) * grid.step_size(),
                           traj.size()};
        const GridAxis ax1{0.0, static_cast<double>(gen.dim), gen.dim};
        SpaceTimeField field(ax0, ax1, Provenance::evolved_in_x0);
        for (std::size_t r = 0; r < traj.size(); ++r)
            for (std::size_t c = 0; c < gen.dim; ++c) field.at(r, c) = traj[r].second[c];

        rows.add("kappa_re", cert.kappa.real());
        rows.add("kappa_im", cert.kappa.imag());
        rows.add("norm_bound", cert.norm_bound);
        rows.add("spectral_margin", cert.spectral_margin);
        rows.add("points", static_cast<double>(traj.size()));
        rows.add("initial_norm", vec_norm(u0));
        rows.add("final_norm", vec_norm(traj.back().second));

        io::write_field_csv(out_path(g, "trajectory.csv"), field);
        man.add_file("trajectory.csv");
        io::write_text_file(out_path(g, "certificate.json"), io::certificate_to_json(cert));
        man.add_file("certificate.json");
        io::write_report_csv(out_path(g, "report.csv"), rows.text);
        man.add_file("report.csv");
        fill_residuals(man, rows);
        man.timings.emplace_back("emit", clock.lap());
    } catch (const CertificateFailed& e) {
        man.error = e.name();
        fill_residuals(man, rows);
        man.write(out_path(g, "manifest.json"));
        std::fprintf(stderr, "trajectory failed: %s at grid index %ld: %s\n",
                     e.name().c_str(), e.grid_index(), e.what());
        return 3;
    } catch (const Error& e) {
        man.error = e.name();
        fill_residuals(man, rows);
        man.write(out_path(g, "manifest.json"));
        std::fprintf(stderr, "trajectory failed: %s: %s\n", e.name().c_str(), e.what());
        return 3;
    }

    man.write(out_path(g, "manifest.json"));
    return 0;
}

// ----------------------------------------------------------------- spectrum

int run_spectrum(const GlobalOpts& g) {
    const std::set<std::string> keys = {"matrix"};
    const njson cfg = parse_config(g, keys);
    const std::string mpath = str_field(cfg, "matrix", "");
    if (mpath.empty()) throw ConfigError("spectrum config requires a matrix path");
    const ComplexMatrix m = io::read_matrix(mpath);
    if (m.dim() > 256) throw ConfigError("spectrum supports dim <= 256");

    ensure_out_dir(g);
    io::ManifestBuilder man;
    man.command = "spectrum";
    man.config_echo = cfg.dump();
    man.seed = g.seed;
    StageClock clock;
    Rows rows;

    try {
        const Spectrum sp = eigenvalues(m);
        man.timings.emplace_back("eigenvalues", clock.lap());

        std::string csv = "index,re,im\n";
        for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
            csv += std::to_string(i);
            csv += ',';
            csv += io::fmt17(sp.eigenvalues[i].real());
            csv += ',';
            csv += io::fmt17(sp.eigenvalues[i].imag());
            csv += '\n';
        }
        io::write_text_file(out_path(g, "spectrum.csv"), csv);
        man.add_file("spectrum.csv");

        rows.add("dim", static_cast<double>(m.dim()));
        rows.add("spectral_radius", sp.radius);
        io::write_report_csv(out_path(g, "report.csv"), rows.text);
        man.add_file("report.csv");
        fill_residuals(man, rows);
        man.timings.emplace_back("emit", clock.lap());
    } catch (const Error& e) {
        man.error = e.name();
        man.write(out_path(g, "manifest.json"));
        std::fprintf(stderr, "spectrum failed: %s: %s\n", e.name().c_str(), e.what());
        return 3;
    }

    man.write(out_path(g, "manifest.json"));
    return 0;
}

// ----------------------------------------------------------------- selftest

int run_selftest(const GlobalOpts& g) {
    ensure_out_dir(g);
    const selftest::Outcome outcome = selftest::run_all_checks();

    Rows rows;
    for (const auto& c : outcome.checks) {
        std::printf("%s  %-34s criterion %d  value=%s bound=%s%s%s\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.criterion,
                    io::fmt17(c.value).c_str(), io::fmt17(c.threshold).c_str(),
                    c.note.empty() ? "" : "  # ", c.note.c_str());
        rows.add(c.name, c.value);
    }
    std::printf("selftest: %zu checks, %zu failures, %.2f s\n", outcome.checks.size(),
                outcome.failures(), outcome.total_seconds);
    if (!outcome.all_pass()) {
        std::printf("failing invariants:");
        for (const auto& c : outcome.checks)
            if (!c.pass) std::printf(" %s", c.name.c_str());
        std::printf("\n");
    }

    io::ManifestBuilder man;
    man.command = "selftest";
    man.seed = g.seed;
    fill_residuals(man, rows);
    for (const auto& [crit, secs] : outcome.criterion_seconds)
        man.timings.emplace_back("criterion_" + std::to_string(crit), secs);
    io::write_report_csv(out_path(g, "report.csv"), rows.text);
    man.add_file("report.csv");
    man.write(out_path(g, "manifest.json"));
    return outcome.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-logarithm toolkit: certified contour calculus, evolution "
                 "families, and direction-swapped 1+1D problems"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config file");
    app.add_option("--out", g.out_dir, "output directory (default: out)");
    app.add_option("--seed", g.seed, "seed for preset construction (default: 1)");
    app.add_flag("--override-illposed", g.override_illposed,
                 "march an ill-posed direction anyway (blow-up is then reported)");

    CLI::App* c_logrep = app.add_subcommand("logrep", "logarithmic representation report");
    CLI::App* c_swap = app.add_subcommand("swap", "solve one problem along both directions");
    CLI::App* c_traj = app.add_subcommand("trajectory", "regularized trajectory emission");
    CLI::App* c_spec = app.add_subcommand("spectrum", "eigenvalues of a matrix file");
    CLI::App* c_self = app.add_subcommand("selftest", "run every invariant suite");
    // global options may follow the subcommand name
    for (CLI::App* sc : {c_logrep, c_swap, c_traj, c_spec, c_self}) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_logrep->parsed()) return run_logrep(g);
        if (c_swap->parsed()) return run_swap(g);
        if (c_traj->parsed()) return run_trajectory(g);
        if (c_spec->parsed()) return run_spectrum(g);
        if (c_self->parsed()) return run_selftest(g);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.name().c_str(), e.what());
        return 3;
    }
    return 0;
}
