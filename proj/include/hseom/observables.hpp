// Figure-producing quantities: Loschmidt echo, populations, two- and
// three-body correlators via scheduled operator insertions, truncated Fourier
// spectra, and the fluctuation-dissipation residual.
#pragma once

#include "hseom/propagator.hpp"
#include "hseom/spin_system.hpp"
#include "hseom/thermal.hpp"

#include <map>
#include <string>
#include <vector>

namespace hseom {

enum class SeriesKind {
    LoschmidtEcho,
    Population,
    CorrelatorA,
    CorrelatorC,
    CorrelatorD,
    CorrelatorRaw,
    SpectrumC,
    SpectrumA,
    FDTRatio,
    TraceHealth,
};

struct ObservableSeries {
    SeriesKind kind = SeriesKind::CorrelatorRaw;
    std::string name;
    std::vector<double> grid; // time or frequency, strictly increasing
    std::vector<cplx> values;
    std::map<std::string, std::string> meta;
};

// --- pure post-processing ---

// L(t) = |rho01(t)|^2 / |rho01(0)|^2 from normalized 2x2 densities.
ObservableSeries loschmidt(const std::vector<double>& t,
                           const std::vector<std::array<cplx, 4>>& rho);

// <+|rho|+> and <-|rho|-> from normalized densities.
std::pair<ObservableSeries, ObservableSeries>
population(const std::vector<double>& t,
           const std::vector<std::array<cplx, 4>>& rho);

// Truncated cosine/sine transforms of a forward correlator series s(t) on a
// uniform grid (composite trapezoid):
//   C[w] = 2 int_0^T cos(wt) Re s(t) dt
//   A[w] = -4 int_0^T sin(wt) Im s(t) dt
// The A sign uses the reversed-order imaginary part so the harmonic-bath
// kernel satisfies C[w] = coth(beta w/2)/2 * A[w] identically.
struct SpectrumParams {
    double omega_min = 0.0;
    double omega_max = 5.0;
    double d_omega = 0.01;
    double t_window = -1.0; // <= 0: use the full series
};
ObservableSeries spectrum(const ObservableSeries& fwd_series, SeriesKind kind,
                          const SpectrumParams& params);

// C[w] - coth(beta w/2)/2 * A[w], on the shared grid above omega_floor.
ObservableSeries fdt_ratio(const ObservableSeries& c_spec,
                           const ObservableSeries& a_spec, double beta,
                           double omega_floor = 0.0);

// A = fwd - rev and C = (fwd + rev)/2 plus the Hermiticity health metric
// max |fwd - conj(rev)|.
struct TwoTimeCombined {
    ObservableSeries a_series;
    ObservableSeries c_series;
    double hermiticity_residual = 0.0;
};
TwoTimeCombined combine_two_time(const ObservableSeries& fwd,
                                 const ObservableSeries& rev);

// --- insertion-run drivers (weight-summed over thermal components) ---

struct InsertionRunParams {
    double dt = 2e-3;
    double t_max = 20.0;
    int record_stride = 25;
    ExecPolicy policy = ExecPolicy::Parallel;
};

// <sigma_j^z(t) sigma_k^z(0)> (fwd, ket insertion at 0) and
// <sigma_k^z(0) sigma_j^z(t)> (rev, bra insertion at 0), raw sums.
struct TwoTimeResult {
    ObservableSeries fwd;
    ObservableSeries rev;
};
TwoTimeResult two_time_correlator(const SpinSystemSpec& spec,
                                  const HierarchySpace& space,
                                  const BathExpansion& expansion,
                                  const std::vector<WeightedKet>& runs,
                                  int site_j, int site_k,
                                  const InsertionRunParams& params);

// D(t, t') = <sigma_i^z(t') sigma_j^z(t) sigma_k^z(0)> at the sample times;
// t <= t' samples need one propagation each, t > t' share a single run.
ObservableSeries three_time_correlator(const SpinSystemSpec& spec,
                                       const HierarchySpace& space,
                                       const BathExpansion& expansion,
                                       const std::vector<WeightedKet>& runs,
                                       int site_i, int site_j, int site_k,
                                       double t_prime,
                                       const std::vector<double>& sample_times,
                                       const InsertionRunParams& params);

} // namespace hseom
