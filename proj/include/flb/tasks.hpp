#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flb/asymptotics.hpp"
#include "flb/measures.hpp"
#include "flb/quantities.hpp"
#include "flb/spectrum.hpp"

namespace flb {

// Channel W(x, y~ | x') = P_{X,Y~}(x - x', y~) over a product of cyclic
// groups. Rows of the base joint enumerate group elements in mixed-radix
// order (last digit fastest); columns are the y~ alphabet.
class ConditionalAdditiveChannel {
public:
    ConditionalAdditiveChannel(std::vector<int> radices, JointMeasure base);

    const std::vector<int>& radices() const { return radices_; }
    const JointMeasure& base() const { return base_; }
    std::size_t order() const { return base_.n_rows(); }
    bool prime_power_order() const;

    // Output labels: the x label alone when y~ is trivial, else "x|y~".
    std::vector<std::string> output_labels() const;
    // Full kernel from inputs (group elements) to outputs.
    ConditionalKernel kernel() const;
    // Index of x - x' in mixed radix.
    std::size_t subtract(std::size_t x, std::size_t xp) const;

private:
    std::vector<int> radices_;
    JointMeasure base_;
};

ConditionalAdditiveChannel bsc_channel(double p);
// Cyclic group Z_d, rows labelled 0..d-1.
ConditionalAdditiveChannel additive_channel(int d, const JointMeasure& base);

// Spectrum of P_{X,Y~} against U_X x P_{Y~}, convolved to n.
LlrSpectrum channel_spectrum(const ConditionalAdditiveChannel& ch, int n);
bool channel_degenerate(const ConditionalAdditiveChannel& ch);

// lower: DT achievability; upper: Neyman-Pearson converse.
BoundPair expand_channel(const ConditionalAdditiveChannel& ch, double eps);

struct WiretapPair {
    ConditionalAdditiveChannel y_channel;
    ConditionalAdditiveChannel z_channel;
    // W~_{Z|Y}: inputs are y outputs, outputs are z outputs.
    std::optional<ConditionalKernel> degraded_witness;

    WiretapPair(ConditionalAdditiveChannel y, ConditionalAdditiveChannel z,
                std::optional<ConditionalKernel> witness = std::nullopt);
};

// Joint W~_{YZ|X=0} and the reference W~_{Y|Z} x W_{Z|X=0}, rows y, cols z.
struct DegradedPair {
    JointMeasure p, q;
};
DegradedPair degraded_pair(const WiretapPair& wp);

BoundPair expand_wiretap(const WiretapPair& wp, double eps, double delta);

ConditionalKernel degraded_witness_bsc(double p_y, double p_z);
WiretapPair bsc_wiretap(double p_y, double p_z);

// Verbatim: the tables as commonly displayed, where the second table's lower
// row repeats the first row and is not normalized. Corrected: rows are the
// legitimate output y, columns the second-stage flip, and the second table is
// W~_{Y|Z} x W_{Z|X=0} in those coordinates.
enum class TableForm { verbatim, corrected };
struct BscTables {
    JointMeasure p1, p2;
};
BscTables wiretap_bsc_tables(double p_y, double p_z, TableForm form = TableForm::corrected);
BoundPair wiretap_bsc_expansions(double p_y, double p_z, double eps, double delta,
                                 TableForm form = TableForm::corrected);

struct BpskPair {
    double sigma_y2, sigma_z2;
    BpskPair(double sy2, double sz2);
};

struct QuadratureReport {
    int panels = 0;
    double achieved_rel = 0.0;
};

// D, V, kappa of N(1, s2) against the +-1 mixture, by composite Gauss-Legendre
// over a standardized window. panels = 0 selects adaptive doubling.
DivergenceStats bpsk_stats(double sigma2, int panels = 0, QuadratureReport* report = nullptr);
// Stats of the degraded pair for the Gaussian wire-tap converse (2-D tensor rule).
DivergenceStats bpsk_joint_stats(const BpskPair& pair, int panels = 0,
                                 QuadratureReport* report = nullptr);
BoundPair bpsk_expansions(const BpskPair& pair, double eps, double delta);

// Joint over X~ x Y~ x Z~, index (x, y, z) -> w[(x * ny + y) * nz + z].
struct TripleMeasure {
    std::vector<std::string> x, y, z;
    std::vector<double> w;
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return w[(i * y.size() + j) * z.size() + k];
    }
    JointMeasure xy() const;
    JointMeasure xz() const;
    // max |P(x,y,z) - P(x,y) P(z|y)|
    double markov_gap() const;
};

BoundPair correlated_rv_expansions(const TripleMeasure& triple, double eps, double delta);

}  // namespace flb
