#include "flb/textio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>

namespace flb {

ParseError::ParseError(std::string source, int line, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + msg), line_(line) {}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    if (b != e && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && ptr == e && std::isfinite(out);
}

bool parse_int(const std::string& s, long long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

WiretapPair Model::wiretap(const WiretapRef& w) const {
    std::optional<ConditionalKernel> k;
    if (!w.witness.empty()) k = kernels.at(w.witness);
    return WiretapPair(channels.at(w.y), channels.at(w.z), k);
}

namespace {

struct Entry {
    std::vector<std::string> labels;
    double w;
    int line;
};

struct Block {
    std::string type, name;
    MeasureKind kind = MeasureKind::probability;
    std::vector<int> radices;
    std::vector<Entry> entries;
    int line = 0;
};

// Labels in order of first appearance.
struct Index {
    std::vector<std::string> names;
    std::map<std::string, std::size_t> pos;
    std::size_t add(const std::string& s) {
        auto it = pos.find(s);
        if (it != pos.end()) return it->second;
        pos[s] = names.size();
        names.push_back(s);
        return names.size() - 1;
    }
};

class Parser {
public:
    Parser(std::string source) : src_(std::move(source)) {}

    Model run(std::istream& in) {
        std::string raw;
        int ln = 0;
        while (std::getline(in, raw)) {
            ++ln;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            std::istringstream ss(raw);
            std::vector<std::string> tok;
            for (std::string t; ss >> t;) tok.push_back(t);
            if (tok.empty()) continue;
            line(tok, ln);
        }
        if (block_) fail(block_->line, "block '" + block_->name + "' is missing 'end'");
        resolve();
        return std::move(m_);
    }

private:
    [[noreturn]] void fail(int ln, const std::string& msg) const { throw ParseError(src_, ln, msg); }

    double number(const std::string& s, int ln) const {
        double v;
        if (!parse_double(s, v)) fail(ln, "expected a number, got '" + s + "'");
        return v;
    }

    void claim(const std::string& name, int ln) {
        if (!names_.insert(name).second) fail(ln, "name '" + name + "' is already defined");
    }

    void line(const std::vector<std::string>& tok, int ln) {
        const std::string& head = tok[0];
        if (block_) {
            if (head == "end") {
                if (tok.size() != 1) fail(ln, "'end' takes no arguments");
                close(ln);
                return;
            }
            entry(tok, ln);
            return;
        }
        if (head == "measure" || head == "joint" || head == "kernel" || head == "triple" || head == "channel") {
            open(tok, ln);
        } else if (head == "bsc") {
            if (tok.size() != 3) fail(ln, "usage: bsc NAME CROSSOVER");
            claim(tok[1], ln);
            try {
                m_.channels.emplace(tok[1], bsc_channel(number(tok[2], ln)));
            } catch (const std::invalid_argument& e) {
                fail(ln, e.what());
            }
            m_.channel_order.push_back(tok[1]);
        } else if (head == "pair") {
            if (tok.size() != 3) fail(ln, "usage: pair P Q");
            m_.pairs.push_back({tok[1], tok[2], ln});
        } else if (head == "wiretap") {
            if (tok.size() != 3 && tok.size() != 4) fail(ln, "usage: wiretap CHANNEL_Y CHANNEL_Z [WITNESS]");
            m_.wiretaps.push_back({tok[1], tok[2], tok.size() == 4 ? tok[3] : "", ln});
        } else if (head == "bpsk") {
            if (tok.size() != 3) fail(ln, "usage: bpsk SIGMA_Y2 SIGMA_Z2");
            try {
                m_.bpsk.emplace_back(number(tok[1], ln), number(tok[2], ln));
            } catch (const std::invalid_argument& e) {
                fail(ln, e.what());
            }
        } else if (head == "end") {
            fail(ln, "'end' outside a block");
        } else {
            fail(ln, "unknown statement '" + head + "'");
        }
    }

    void open(const std::vector<std::string>& tok, int ln) {
        if (tok.size() < 2) fail(ln, "'" + tok[0] + "' needs a name");
        Block b;
        b.type = tok[0];
        b.name = tok[1];
        b.line = ln;
        claim(b.name, ln);
        if (b.type == "measure" || b.type == "joint") {
            if (tok.size() > 3) fail(ln, "usage: " + b.type + " NAME [probability|subnormalized|generic]");
            if (tok.size() == 3) {
                if (tok[2] == "probability") b.kind = MeasureKind::probability;
                else if (tok[2] == "subnormalized") b.kind = MeasureKind::subnormalized;
                else if (tok[2] == "generic") b.kind = MeasureKind::generic;
                else fail(ln, "unknown measure kind '" + tok[2] + "'");
            }
        } else if (b.type == "channel") {
            if (tok.size() < 3) fail(ln, "usage: channel NAME RADIX [RADIX ...]");
            for (std::size_t i = 2; i < tok.size(); ++i) {
                long long r;
                if (!parse_int(tok[i], r) || r < 2 || r > 1000000) fail(ln, "bad cyclic factor '" + tok[i] + "'");
                b.radices.push_back(static_cast<int>(r));
            }
        } else if (tok.size() != 2) {
            fail(ln, "usage: " + b.type + " NAME");
        }
        block_ = std::move(b);
    }

    void entry(std::vector<std::string> tok, int ln) {
        const std::string& type = block_->type;
        // optional entry keyword: atom / joint / kernel
        const char* kw = type == "measure" ? "atom" : type == "joint" ? "joint" : type == "kernel" ? "kernel" : "";
        if (tok[0] == kw) tok.erase(tok.begin());
        if (tok.empty()) fail(ln, "empty entry");
        std::size_t want = type == "measure" ? 2 : type == "triple" ? 4 : 3;
        bool ok = tok.size() == want || (type == "channel" && tok.size() == 2);
        if (!ok) fail(ln, "expected " + std::to_string(want) + " fields in a " + type + " entry");
        if (type == "channel" && !block_->entries.empty() &&
            block_->entries.front().labels.size() != tok.size() - 1)
            fail(ln, "channel entries mix forms with and without y~");
        Entry e{{tok.begin(), tok.end() - 1}, number(tok.back(), ln), ln};
        block_->entries.push_back(std::move(e));
    }

    void close(int ln) {
        Block b = std::move(*block_);
        block_.reset();
        if (b.entries.empty()) fail(ln, "block '" + b.name + "' has no entries");
        try {
            build(b);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            fail(b.line, "block '" + b.name + "': " + e.what());
        }
    }

    // Dense weights over the label axes, rejecting repeated cells.
    std::vector<double> dense(const Block& b, std::vector<Index>& axes) {
        std::map<std::vector<std::size_t>, double> cells;
        for (const auto& e : b.entries) {
            std::vector<std::size_t> key;
            for (std::size_t k = 0; k < e.labels.size(); ++k) key.push_back(axes[k].add(e.labels[k]));
            if (!cells.emplace(key, e.w).second) fail(e.line, "repeated entry");
        }
        std::size_t total = 1;
        for (const auto& a : axes) total *= a.names.size();
        std::vector<double> w(total, 0.0);
        for (const auto& [key, v] : cells) {
            std::size_t idx = 0;
            for (std::size_t k = 0; k < key.size(); ++k) idx = idx * axes[k].names.size() + key[k];
            w[idx] = v;
        }
        return w;
    }

    void build(const Block& b) {
        if (b.type == "measure") {
            std::vector<Index> ax(1);
            auto w = dense(b, ax);
            m_.measures.emplace(b.name, DiscreteMeasure(ax[0].names, w, b.kind));
        } else if (b.type == "joint") {
            std::vector<Index> ax(2);
            auto w = dense(b, ax);
            m_.joints.emplace(b.name, JointMeasure(ax[0].names, ax[1].names, w, b.kind));
        } else if (b.type == "kernel") {
            std::vector<Index> ax(2);
            auto w = dense(b, ax);
            m_.kernels.emplace(b.name, ConditionalKernel(ax[0].names, ax[1].names, w));
        } else if (b.type == "triple") {
            std::vector<Index> ax(3);
            TripleMeasure t;
            t.w = dense(b, ax);
            t.x = ax[0].names;
            t.y = ax[1].names;
            t.z = ax[2].names;
            double s = 0.0;
            for (double v : t.w) {
                if (!(v >= 0.0)) throw std::invalid_argument("negative weight");
                s += v;
            }
            if (std::abs(s - 1.0) > kind_tol) throw std::invalid_argument("triple weights must sum to 1");
            m_.triples.emplace(b.name, std::move(t));
        } else {
            bool trivial = b.entries.front().labels.size() == 1;
            Block c = b;
            if (trivial)
                for (auto& e : c.entries) e.labels.push_back("-");
            std::vector<Index> ax(2);
            auto w = dense(c, ax);
            m_.channels.emplace(b.name, ConditionalAdditiveChannel(
                                            b.radices, JointMeasure(ax[0].names, ax[1].names, w,
                                                                    MeasureKind::probability)));
            m_.channel_order.push_back(b.name);
        }
    }

    void resolve() {
        for (const auto& p : m_.pairs) {
            bool pm = m_.measures.count(p.p), pj = m_.joints.count(p.p);
            bool qm = m_.measures.count(p.q), qj = m_.joints.count(p.q);
            if (!pm && !pj) fail(p.line, "unknown measure '" + p.p + "'");
            if (!qm && !qj) fail(p.line, "unknown measure '" + p.q + "'");
            if (pm && qj) fail(p.line, "pair of a plain measure against a joint is not defined");
        }
        for (const auto& w : m_.wiretaps) {
            for (const auto* c : {&w.y, &w.z})
                if (!m_.channels.count(*c)) fail(w.line, "unknown channel '" + *c + "'");
            if (!w.witness.empty() && !m_.kernels.count(w.witness))
                fail(w.line, "unknown kernel '" + w.witness + "'");
            try {
                (void)m_.wiretap(w);
            } catch (const std::invalid_argument& e) {
                fail(w.line, e.what());
            }
        }
    }

    std::string src_;
    Model m_;
    std::optional<Block> block_;
    std::set<std::string> names_;
};

}  // namespace

Model parse_model(std::istream& in, const std::string& source) { return Parser(source).run(in); }

Model parse_model_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open file");
    return parse_model(f, path);
}

}  // namespace flb
