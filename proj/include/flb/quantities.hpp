#pragma once

#include "flb/measures.hpp"
#include "flb/spectrum.hpp"

namespace flb {

struct DivergenceStats {
    double D = 0.0;
    double V = 0.0;
    // Skewness of -log(P/Q) under P. Zero when V = 0.
    double kappa = 0.0;
    double span = 0.0;
};

// Moments of t = log(P/Q) under the normalized P-masses of an order-1 spectrum.
DivergenceStats divergence_stats(const LlrSpectrum& s);
DivergenceStats divergence_stats(const DiscreteMeasure& p, const DiscreteMeasure& q);
DivergenceStats divergence_stats(const JointMeasure& p, const JointMeasure& q);
// Conditional pair (P_AB || R_B).
DivergenceStats divergence_stats(const JointMeasure& p, const DiscreteMeasure& r);

struct CondEntropies {
    double H = 0.0;
    double H_min = 0.0;
    double H_2 = 0.0;
};

CondEntropies cond_entropies(const JointMeasure& j, const DiscreteMeasure& r);

double v_of(double d);
double v_of(double d, double s);

// Constant-term functions F_1 .. F_5.
//
// FForm::derived (default) puts the skewness of log(P/Q) into the F_4 and
// F_5 correction and has no -1/2 log V term in F_5. For non-lattice spectra
// this is the constant the Neyman-Pearson and DT bounds converge to.
// FForm::literal takes kappa of -log(P/Q) in all five and keeps the
// -1/2 log V term in F_5. F_1 .. F_3 are the same in both forms.
enum class FForm { derived, literal };
double f_constant(int i, const DivergenceStats& st, double eps, FForm form = FForm::derived);

double gauss_cdf(double x);
double gauss_pdf(double x);
double gauss_inv(double eps);

// Binary entropy and varentropy in nats.
double binary_entropy(double p);
double binary_varentropy(double p);

}  // namespace flb
