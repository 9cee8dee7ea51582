#include "flb/measures.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace flb {

const char* to_string(MeasureKind kind) {
    switch (kind) {
    case MeasureKind::probability: return "probability";
    case MeasureKind::subnormalized: return "subnormalized";
    case MeasureKind::generic: return "generic";
    }
    return "generic";
}

namespace {

void check_kind(double total, MeasureKind kind, const char* what) {
    if (kind == MeasureKind::probability && std::abs(total - 1.0) > kind_tol)
        throw std::invalid_argument(std::string(what) + ": probability weights sum to " +
                                    std::to_string(total));
    if (kind == MeasureKind::subnormalized && total > 1.0 + kind_tol)
        throw std::invalid_argument(std::string(what) + ": subnormalized weights sum to " +
                                    std::to_string(total));
}

void check_weights(const std::vector<double>& w, const char* what) {
    for (double x : w)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument(std::string(what) + ": weights must be finite and >= 0");
}

void check_unique(const std::vector<std::string>& labels, const char* what) {
    std::set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second)
            throw std::invalid_argument(std::string(what) + ": duplicate label '" + l + "'");
}

double kahan_sum(const std::vector<double>& w) {
    double s = 0.0, c = 0.0;
    for (double x : w) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, MeasureKind kind)
    : atoms_(std::move(atoms)), kind_(kind) {
    check_unique(labels(), "measure");
    check_weights(weights(), "measure");
    check_kind(mass(), kind_, "measure");
}

DiscreteMeasure::DiscreteMeasure(const std::vector<std::string>& labels,
                                 const std::vector<double>& weights, MeasureKind kind) {
    if (labels.size() != weights.size())
        throw std::invalid_argument("measure: label/weight count mismatch");
    std::vector<Atom> atoms;
    atoms.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) atoms.push_back({labels[i], weights[i]});
    *this = DiscreteMeasure(std::move(atoms), kind);
}

double DiscreteMeasure::mass() const { return kahan_sum(weights()); }

std::optional<std::size_t> DiscreteMeasure::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].label == label) return i;
    return std::nullopt;
}

double DiscreteMeasure::weight(const std::string& label) const {
    auto i = index_of(label);
    return i ? atoms_[*i].weight : 0.0;
}

std::vector<std::string> DiscreteMeasure::labels() const {
    std::vector<std::string> out;
    out.reserve(atoms_.size());
    for (const auto& a : atoms_) out.push_back(a.label);
    return out;
}

std::vector<double> DiscreteMeasure::weights() const {
    std::vector<double> out;
    out.reserve(atoms_.size());
    for (const auto& a : atoms_) out.push_back(a.weight);
    return out;
}

JointMeasure::JointMeasure(std::vector<std::string> rows, std::vector<std::string> cols,
                           std::vector<double> weights, MeasureKind kind)
    : rows_(std::move(rows)), cols_(std::move(cols)), w_(std::move(weights)), kind_(kind) {
    if (w_.size() != rows_.size() * cols_.size())
        throw std::invalid_argument("joint: weight matrix has wrong size");
    check_unique(rows_, "joint rows");
    check_unique(cols_, "joint cols");
    check_weights(w_, "joint");
    check_kind(mass(), kind_, "joint");
}

double JointMeasure::mass() const { return kahan_sum(w_); }

ConditionalKernel::ConditionalKernel(std::vector<std::string> inputs,
                                     std::vector<std::string> outputs, std::vector<double> matrix)
    : in_(std::move(inputs)), out_(std::move(outputs)), m_(std::move(matrix)) {
    if (m_.size() != in_.size() * out_.size())
        throw std::invalid_argument("kernel: matrix has wrong size");
    check_unique(in_, "kernel inputs");
    check_unique(out_, "kernel outputs");
    check_weights(m_, "kernel");
    for (std::size_t i = 0; i < in_.size(); ++i) {
        std::vector<double> row(m_.begin() + i * out_.size(), m_.begin() + (i + 1) * out_.size());
        if (std::abs(kahan_sum(row) - 1.0) > kind_tol)
            throw std::invalid_argument("kernel: row '" + in_[i] + "' does not sum to 1");
    }
}

DiscreteMeasure marginal(const JointMeasure& j, Axis keep) {
    std::vector<double> w;
    if (keep == Axis::rows) {
        w.assign(j.n_rows(), 0.0);
        for (std::size_t r = 0; r < j.n_rows(); ++r)
            for (std::size_t c = 0; c < j.n_cols(); ++c) w[r] += j.at(r, c);
        return DiscreteMeasure(j.rows(), w, j.kind());
    }
    w.assign(j.n_cols(), 0.0);
    for (std::size_t r = 0; r < j.n_rows(); ++r)
        for (std::size_t c = 0; c < j.n_cols(); ++c) w[c] += j.at(r, c);
    return DiscreteMeasure(j.cols(), w, j.kind());
}

JointMeasure compose(const ConditionalKernel& k, const DiscreteMeasure& p) {
    if (k.inputs().size() != p.size())
        throw std::invalid_argument("compose: kernel inputs do not match measure atoms");
    std::vector<double> w(k.inputs().size() * k.outputs().size());
    for (std::size_t i = 0; i < k.inputs().size(); ++i) {
        auto idx = p.index_of(k.inputs()[i]);
        if (!idx)
            throw std::invalid_argument("compose: kernel input '" + k.inputs()[i] +
                                        "' missing from measure");
        double pa = p.atoms()[*idx].weight;
        for (std::size_t o = 0; o < k.outputs().size(); ++o)
            w[i * k.outputs().size() + o] = k.at(i, o) * pa;
    }
    return JointMeasure(k.inputs(), k.outputs(), std::move(w), p.kind());
}

ConditionalKernel chain(const ConditionalKernel& k1, const ConditionalKernel& k2) {
    if (k1.outputs() != k2.inputs())
        throw std::invalid_argument("chain: intermediate alphabets differ");
    std::size_t ni = k1.inputs().size(), nm = k2.inputs().size(), no = k2.outputs().size();
    std::vector<double> m(ni * no, 0.0);
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < nm; ++j)
            for (std::size_t o = 0; o < no; ++o) m[i * no + o] += k1.at(i, j) * k2.at(j, o);
    // renormalize rounding so the stochastic check stays exact
    for (std::size_t i = 0; i < ni; ++i) {
        double s = 0.0;
        for (std::size_t o = 0; o < no; ++o) s += m[i * no + o];
        for (std::size_t o = 0; o < no; ++o) m[i * no + o] /= s;
    }
    return ConditionalKernel(k1.inputs(), k2.outputs(), std::move(m));
}

DiscreteMeasure counting_measure(const std::vector<std::string>& labels) {
    if (labels.empty()) throw std::invalid_argument("counting_measure: empty label set");
    return DiscreteMeasure(labels, std::vector<double>(labels.size(), 1.0), MeasureKind::generic);
}

DiscreteMeasure uniform_measure(const std::vector<std::string>& labels) {
    if (labels.empty()) throw std::invalid_argument("uniform_measure: empty label set");
    // The kind check tolerates the rounding of 1/k summed k times.
    return DiscreteMeasure(labels, std::vector<double>(labels.size(), 1.0 / labels.size()),
                           MeasureKind::probability);
}

JointMeasure product(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    std::vector<double> w;
    w.reserve(a.size() * b.size());
    for (const auto& x : a.atoms())
        for (const auto& y : b.atoms()) w.push_back(x.weight * y.weight);
    MeasureKind kind = MeasureKind::generic;
    if (a.kind() != MeasureKind::generic && b.kind() != MeasureKind::generic)
        kind = (a.kind() == MeasureKind::probability && b.kind() == MeasureKind::probability)
                   ? MeasureKind::probability
                   : MeasureKind::subnormalized;
    return JointMeasure(a.labels(), b.labels(), std::move(w), kind);
}

std::string pair_label(const std::string& r, const std::string& c) { return r + "|" + c; }

DiscreteMeasure flatten(const JointMeasure& j) {
    std::vector<std::string> labels;
    labels.reserve(j.n_rows() * j.n_cols());
    for (const auto& r : j.rows())
        for (const auto& c : j.cols()) labels.push_back(pair_label(r, c));
    return DiscreteMeasure(labels, j.weights(), j.kind());
}

}  // namespace flb
