#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace flb {

enum class MeasureKind { probability, subnormalized, generic };

const char* to_string(MeasureKind kind);

// Tolerance on declared totals. Inputs come from short decimal files.
inline constexpr double kind_tol = 1e-12;

struct Atom {
    std::string label;
    double weight = 0.0;
};

class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    DiscreteMeasure(std::vector<Atom> atoms, MeasureKind kind);
    DiscreteMeasure(const std::vector<std::string>& labels, const std::vector<double>& weights,
                    MeasureKind kind);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    MeasureKind kind() const { return kind_; }
    double mass() const;

    std::optional<std::size_t> index_of(const std::string& label) const;
    // 0 for labels outside the atom set.
    double weight(const std::string& label) const;
    std::vector<std::string> labels() const;
    std::vector<double> weights() const;

private:
    std::vector<Atom> atoms_;
    MeasureKind kind_ = MeasureKind::generic;
};

// Weight matrix over rows x cols, row-major.
class JointMeasure {
public:
    JointMeasure() = default;
    JointMeasure(std::vector<std::string> rows, std::vector<std::string> cols,
                 std::vector<double> weights, MeasureKind kind);

    const std::vector<std::string>& rows() const { return rows_; }
    const std::vector<std::string>& cols() const { return cols_; }
    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return cols_.size(); }
    double at(std::size_t r, std::size_t c) const { return w_[r * cols_.size() + c]; }
    const std::vector<double>& weights() const { return w_; }
    MeasureKind kind() const { return kind_; }
    double mass() const;

private:
    std::vector<std::string> rows_;
    std::vector<std::string> cols_;
    std::vector<double> w_;
    MeasureKind kind_ = MeasureKind::generic;
};

// Row-stochastic matrix, entry (i, o) = k(o | i).
class ConditionalKernel {
public:
    ConditionalKernel() = default;
    ConditionalKernel(std::vector<std::string> inputs, std::vector<std::string> outputs,
                      std::vector<double> matrix);

    const std::vector<std::string>& inputs() const { return in_; }
    const std::vector<std::string>& outputs() const { return out_; }
    double at(std::size_t i, std::size_t o) const { return m_[i * out_.size() + o]; }
    const std::vector<double>& matrix() const { return m_; }

private:
    std::vector<std::string> in_;
    std::vector<std::string> out_;
    std::vector<double> m_;
};

enum class Axis { rows, cols };

// Keeps the named axis and sums over the other one.
DiscreteMeasure marginal(const JointMeasure& j, Axis keep);

// Entry (a, b) = k(b|a) p(a).
JointMeasure compose(const ConditionalKernel& k, const DiscreteMeasure& p);

// Kernel product k2 . k1 : inputs of k1 to outputs of k2.
ConditionalKernel chain(const ConditionalKernel& k1, const ConditionalKernel& k2);

DiscreteMeasure counting_measure(const std::vector<std::string>& labels);
DiscreteMeasure uniform_measure(const std::vector<std::string>& labels);
JointMeasure product(const DiscreteMeasure& a, const DiscreteMeasure& b);

// Row label of entry (r, c) when a joint is viewed as a flat measure.
std::string pair_label(const std::string& r, const std::string& c);
DiscreteMeasure flatten(const JointMeasure& j);

}  // namespace flb
