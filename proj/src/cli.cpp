#include "flb/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "flb/asymptotics.hpp"
#include "flb/bounds.hpp"
#include "flb/figures.hpp"
#include "flb/format.hpp"
#include "flb/quantities.hpp"
#include "flb/verify.hpp"

namespace flb {

namespace {

const std::set<std::string> task_names = {"srng",    "ht",      "source", "source-side",
                                          "channel", "wiretap", "bpsk",   "correlated"};

bool uses_delta(const std::string& task) {
    return task == "wiretap" || task == "bpsk" || task == "correlated";
}

std::vector<std::string> available_bounds(const std::string& task) {
    if (task == "srng") return {"exact", "expansion", "legacy", "second-order"};
    if (uses_delta(task)) return {"expansion", "second-order"};
    return {"exact", "expansion", "second-order"};
}

}  // namespace

SweepSpec parse_sweep(std::istream& in, const std::string& source, const std::string& base_dir) {
    SweepSpec s;
    int bounds_line = 0, ln = 0;
    auto fail = [&](int l, const std::string& m) { throw ParseError(source, l, m); };
    std::string raw;
    while (std::getline(in, raw)) {
        ++ln;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ss(raw);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string key = tok[0];
        std::vector<std::string> args(tok.begin() + 1, tok.end());
        auto numbers = [&] {
            std::vector<double> v;
            for (const auto& a : args) {
                double x;
                if (!parse_double(a, x)) fail(ln, "expected a number, got '" + a + "'");
                v.push_back(x);
            }
            return v;
        };
        if (key == "task") {
            if (args.size() != 1 || !task_names.count(args[0])) fail(ln, "unknown task");
            s.task = args[0];
        } else if (key == "params") {
            if (args.size() != 1) fail(ln, "usage: params FILE");
            std::filesystem::path p(args[0]);
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            s.params = p.string();
        } else if (key == "use") {
            if (args.empty() || args.size() > 2) fail(ln, "usage: use NAME [NAME]");
            s.use = args;
        } else if (key == "n") {
            if (args.empty()) fail(ln, "usage: n N [N ...]");
            for (const auto& a : args) {
                long long v;
                if (!parse_int(a, v) || v < 1 || v > 100000000) fail(ln, "bad block length '" + a + "'");
                s.n.push_back(static_cast<int>(v));
            }
        } else if (key == "n-geom") {
            auto v = numbers();
            if (v.size() != 3 || v[0] < 1 || v[1] < v[0] || v[2] < 1 || v[2] != std::floor(v[2]))
                fail(ln, "usage: n-geom FROM TO POINTS");
            for (int n : geometric_grid(v[0], v[1], static_cast<int>(v[2]))) s.n.push_back(n);
        } else if (key == "eps" || key == "delta") {
            auto v = numbers();
            if (v.empty()) fail(ln, "usage: " + key + " VALUE [VALUE ...]");
            for (double x : v)
                if (!(x > 0.0 && x < 1.0)) fail(ln, key + " values must lie in (0,1)");
            auto& dst = key == "eps" ? s.eps : s.delta;
            dst.insert(dst.end(), v.begin(), v.end());
        } else if (key == "bounds") {
            if (args.empty()) fail(ln, "usage: bounds SET [SET ...]");
            s.bounds = args;
            bounds_line = ln;
        } else if (key == "out") {
            if (args.size() != 1) fail(ln, "usage: out PATH");
            std::filesystem::path p(args[0]);
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            s.out = p.string();
        } else if (key == "bits") {
            if (!args.empty()) fail(ln, "'bits' takes no arguments");
            s.bits = true;
        } else {
            fail(ln, "unknown key '" + key + "'");
        }
    }
    if (s.task.empty()) fail(ln, "missing 'task'");
    if (s.params.empty()) fail(ln, "missing 'params'");
    if (s.n.empty()) fail(ln, "missing 'n' or 'n-geom'");
    if (s.eps.empty()) fail(ln, "missing 'eps'");
    if (uses_delta(s.task) && s.delta.empty()) fail(ln, "task " + s.task + " needs 'delta'");
    if (!uses_delta(s.task) && !s.delta.empty()) fail(ln, "task " + s.task + " takes no 'delta'");
    auto avail = available_bounds(s.task);
    if (s.bounds.empty()) s.bounds = avail;
    for (const auto& b : s.bounds)
        if (std::find(avail.begin(), avail.end(), b) == avail.end())
            fail(bounds_line, "bound set '" + b + "' is not available for task " + s.task);
    return s;
}

SweepSpec parse_sweep_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open file");
    return parse_sweep(f, path, std::filesystem::path(path).parent_path().string());
}

namespace {

struct Emitter {
    std::string task;
    double unit;
    std::optional<double> delta;
    std::ostringstream os;

    void cell(double v) { os << ',' << fmt_g12(v / unit); }
    void head(const std::string& bound, const char* kind, int n, double eps) {
        os << task << ',' << bound << ',' << kind << ',' << n << ',' << fmt_g12(eps) << ','
           << (delta ? fmt_g12(*delta) : "");
    }
    void exact(const std::string& bound, BoundKind kind, int n, double eps, double value) {
        head(bound, to_string(kind), n, eps);
        cell(value);
        os << ",,,,\n";
    }
    void expansion(const std::string& bound, const Expansion& e, int n, double eps, bool second) {
        head(second ? bound + "_second_order" : bound, to_string(e.direction), n, eps);
        cell(second ? e.second_order(n) : e.at(n));
        for (double a : {e.a1, e.a2, e.a3, e.a4}) cell(a);
        os << '\n';
    }
};

// Named expansions at one (eps, delta) point.
using ExpansionSet = std::vector<std::pair<std::string, Expansion>>;

struct Resolved {
    std::optional<LlrSpectrum> order1;
    std::function<ExpansionSet(double eps, double delta)> expansions;
};

const Model::PairRef* first_pair(const Model& m, bool joint_p) {
    for (const auto& p : m.pairs)
        if (!joint_p || m.joints.count(p.p)) return &p;
    return nullptr;
}

LlrSpectrum pair_spectrum(const Model& m, const std::string& p, const std::string& q) {
    if (m.joints.count(p)) {
        if (m.joints.count(q)) return build_spectrum(m.joints.at(p), m.joints.at(q));
        return build_spectrum(m.joints.at(p), m.measures.at(q));
    }
    return build_spectrum(m.measures.at(p), m.measures.at(q));
}

template <class Map>
const typename Map::mapped_type& lookup(const Map& map, const std::string& name, const char* what) {
    auto it = map.find(name);
    if (it == map.end()) throw std::invalid_argument(std::string("no ") + what + " named '" + name + "'");
    return it->second;
}

std::string use_or(const SweepSpec& s, std::size_t i, const std::string& fallback) {
    return s.use.size() > i ? s.use[i] : fallback;
}

Resolved resolve(const SweepSpec& s, const Model& m) {
    Resolved r;
    const std::string& task = s.task;
    if (task == "srng" || task == "source-side") {
        const auto* fp = first_pair(m, true);
        std::string jn = use_or(s, 0, fp ? fp->p : "");
        if (jn.empty()) throw std::invalid_argument("no joint measure to use");
        const auto& j = lookup(m.joints, jn, "joint");
        DiscreteMeasure re = marginal(j, Axis::cols);
        if (task == "srng" && (s.use.size() > 1 || (s.use.empty() && fp)))
            re = lookup(m.measures, use_or(s, 1, fp ? fp->q : ""), "measure");
        r.order1 = build_spectrum(j, re);
        auto st = divergence_stats(j, re);
        if (task == "srng")
            r.expansions = [st](double eps, double) {
                auto e = expand_srng(st, eps);
                return ExpansionSet{{"gs1", e.gs1}, {"gs2", e.gs2}, {"gs3", e.gs3}};
            };
        else
            r.expansions = [j](double eps, double) {
                auto e = expand_source_side(j, eps);
                return ExpansionSet{{"lower", e.lower}, {"upper", e.upper}};
            };
    } else if (task == "ht") {
        const auto* fp = first_pair(m, false);
        if (s.use.size() == 1) throw std::invalid_argument("ht needs two names in 'use'");
        std::string pn = use_or(s, 0, fp ? fp->p : ""), qn = use_or(s, 1, fp ? fp->q : "");
        if (pn.empty()) throw std::invalid_argument("no pair to use");
        r.order1 = pair_spectrum(m, pn, qn);
        auto st = divergence_stats(*r.order1);
        r.expansions = [st](double eps, double) {
            auto e = expand_ht(st, eps);
            return ExpansionSet{{"dh", e.dh}, {"ddt", e.ddt}};
        };
    } else if (task == "source") {
        if (s.use.size() != 1) throw std::invalid_argument("source needs 'use MEASURE'");
        const auto& p = lookup(m.measures, s.use[0], "measure");
        r.order1 = build_spectrum(p, counting_measure(p.labels()));
        r.expansions = [p](double eps, double) { return ExpansionSet{{"kkf", expand_source(p, eps)}}; };
    } else if (task == "channel") {
        std::string cn = use_or(s, 0, m.channel_order.empty() ? "" : m.channel_order.front());
        const auto& ch = lookup(m.channels, cn, "channel");
        r.order1 = channel_spectrum(ch, 1);
        r.expansions = [ch](double eps, double) {
            auto e = expand_channel(ch, eps);
            return ExpansionSet{{"lower", e.lower}, {"upper", e.upper}};
        };
    } else if (task == "wiretap") {
        const Model::WiretapRef* ref = nullptr;
        for (const auto& w : m.wiretaps)
            if (s.use.empty() || (s.use.size() == 2 && w.y == s.use[0] && w.z == s.use[1])) {
                ref = &w;
                break;
            }
        if (!ref) throw std::invalid_argument("no matching wiretap statement");
        auto wp = m.wiretap(*ref);
        r.expansions = [wp](double eps, double delta) {
            auto e = expand_wiretap(wp, eps, delta);
            return ExpansionSet{{"lower", e.lower}, {"upper", e.upper}};
        };
    } else if (task == "bpsk") {
        if (m.bpsk.empty()) throw std::invalid_argument("no bpsk statement");
        auto pr = m.bpsk.front();
        r.expansions = [pr](double eps, double delta) {
            auto e = bpsk_expansions(pr, eps, delta);
            return ExpansionSet{{"lower", e.lower}, {"upper", e.upper}};
        };
    } else {
        std::string tn = use_or(s, 0, m.triples.empty() ? "" : m.triples.begin()->first);
        const auto& t = lookup(m.triples, tn, "triple");
        r.expansions = [t](double eps, double delta) {
            auto e = correlated_rv_expansions(t, eps, delta);
            return ExpansionSet{{"lower", e.lower}, {"upper", e.upper}};
        };
    }
    return r;
}

bool wants(const SweepSpec& s, const char* set) {
    return std::find(s.bounds.begin(), s.bounds.end(), set) != s.bounds.end();
}

void exact_rows(const SweepSpec& s, const Resolved& r, const LlrSpectrum& sn, double eps, Emitter& em) {
    const int n = sn.n();
    if (s.task == "srng") {
        em.exact("hmin_eps", BoundKind::upper, n, eps, hmin_smooth_eps(sn, eps));
        em.exact("ell_2", BoundKind::lower, n, eps, ell_2_eps(sn, eps));
        em.exact("ell_min", BoundKind::lower, n, eps, ell_min_eps(sn, eps));
    } else if (s.task == "ht") {
        em.exact("d_h", BoundKind::exact, n, eps, d_h_eps(sn, eps));
        em.exact("d_dt", BoundKind::lower, n, eps, d_dt_eps(sn, eps));
    } else if (s.task == "source") {
        double lb = log_beta_eps(sn, eps);
        em.exact("log_size", BoundKind::lower, n, eps, lb);
        em.exact("log_size", BoundKind::upper, n, eps, log_add(lb, 0.0));
    } else if (s.task == "source-side") {
        em.exact("minus_d_h", BoundKind::lower, n, eps, -d_h_eps(sn, eps));
        em.exact("minus_d_dt", BoundKind::upper, n, eps, -d_dt_eps(sn, eps));
    } else if (s.task == "channel") {
        em.exact("d_dt", BoundKind::lower, n, eps, d_dt_eps(sn, eps));
        em.exact("d_h", BoundKind::upper, n, eps, d_h_eps(sn, eps));
    }
    (void)r;
}

}  // namespace

void run_sweep(const SweepSpec& s, const Model& model, std::ostream& out) {
    Resolved r = resolve(s, model);
    const double unit = s.bits ? std::log(2.0) : 1.0;
    const bool need_spectrum = wants(s, "exact") || wants(s, "legacy");
    std::vector<double> deltas = s.delta;
    if (deltas.empty()) deltas.push_back(NAN);

    // expansions depend only on (eps, delta); evaluate them once
    std::vector<ExpansionSet> ex;
    if (wants(s, "expansion") || wants(s, "second-order"))
        for (double e : s.eps)
            for (double d : deltas) ex.push_back(r.expansions(e, d));

    std::vector<std::string> chunks(s.n.size());
    std::vector<std::string> errors(s.n.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < s.n.size(); ++i) {
        try {
            const int n = s.n[i];
            std::optional<LlrSpectrum> sn;
            if (need_spectrum) sn = convolve_iid(*r.order1, n);
            std::ostringstream all;
            std::size_t k = 0;
            for (double eps : s.eps)
                for (double d : deltas) {
                    Emitter em{s.task, unit, std::isnan(d) ? std::nullopt : std::optional<double>(d), {}};
                    if (wants(s, "exact") && std::isnan(d)) exact_rows(s, r, *sn, eps, em);
                    if (wants(s, "legacy")) {
                        auto w = legacy_bounds_w(*r.order1, *sn, eps);
                        em.exact("w1", BoundKind::upper, n, eps, w.w1_upper);
                        em.exact("w1", BoundKind::lower, n, eps, w.w1_lower);
                        em.exact("w2", BoundKind::lower, n, eps, w.w2_lower);
                        em.exact("w3", BoundKind::lower, n, eps, w.w3_lower);
                    }
                    if (!ex.empty()) {
                        for (const auto& [name, e] : ex[k]) {
                            if (wants(s, "expansion")) em.expansion(name, e, n, eps, false);
                            if (wants(s, "second-order")) em.expansion(name, e, n, eps, true);
                        }
                    }
                    ++k;
                    all << em.os.str();
                }
            chunks[i] = all.str();
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error(e);
    out << "task,bound,kind,n,eps,delta," << (s.bits ? "value_bits" : "value_nats") << ",a1,a2,a3,a4\n";
    for (const auto& c : chunks) out << c;
}

void write_quantities(const Model& m, double eps, std::ostream& out) {
    out << "name,eps,D,V,kappa,span,F1,F2,F3,F4,F5\n";
    auto row = [&](const std::string& name, const DivergenceStats& st) {
        out << name << ',' << fmt_g12(eps);
        for (double v : {st.D, st.V, st.kappa, st.span}) out << ',' << fmt_g12(v);
        for (int i = 1; i <= 5; ++i) {
            double f = NAN;
            try {
                f = f_constant(i, st, eps);
            } catch (const std::domain_error&) {
            }
            out << ',' << fmt_g12(f);
        }
        out << '\n';
    };
    for (const auto& p : m.pairs) row(p.p + "||" + p.q, divergence_stats(pair_spectrum(m, p.p, p.q)));
    for (const auto& c : m.channel_order)
        row("channel:" + c, divergence_stats(channel_spectrum(m.channels.at(c), 1)));
    for (const auto& b : m.bpsk) {
        row("bpsk:" + fmt_g12(b.sigma_y2), bpsk_stats(b.sigma_y2));
        row("bpsk:" + fmt_g12(b.sigma_z2), bpsk_stats(b.sigma_z2));
        row("bpsk-degraded:" + fmt_g12(b.sigma_y2) + "/" + fmt_g12(b.sigma_z2), bpsk_joint_stats(b));
    }
}

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_parse;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
}

}  // namespace

int cmd_quantities(const std::string& file, double eps, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto m = parse_model_file(file);
        write_quantities(m, eps, out);
        return exit_ok;
    });
}

int cmd_sweep(const std::string& file, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto spec = parse_sweep_file(file);
        auto model = parse_model_file(spec.params);
        if (spec.out.empty()) {
            run_sweep(spec, model, out);
        } else {
            std::ostringstream buf;
            run_sweep(spec, model, buf);
            std::ofstream f(spec.out);
            if (!f) throw std::runtime_error("cannot write " + spec.out);
            f << buf.str();
        }
        return exit_ok;
    });
}

int cmd_figure(const std::string& name, const std::string& out_path, bool bits, std::ostream& out,
               std::ostream& err) {
    return guarded(err, [&] {
        auto t = make_figure(name, bits);
        if (out_path.empty()) {
            t.write_csv(out);
        } else {
            std::ofstream f(out_path);
            if (!f) throw std::runtime_error("cannot write " + out_path);
            t.write_csv(f);
        }
        return exit_ok;
    });
}

int cmd_verify(bool full, std::ostream& out) {
    auto results = run_checks(full ? VerifyLevel::full : VerifyLevel::fast);
    print_report(out, results);
    return all_passed(results) ? exit_ok : exit_verify;
}

}  // namespace flb
