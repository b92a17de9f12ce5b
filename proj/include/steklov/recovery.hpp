#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steklov/progressions.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

/// Three-parameter tail model σ ≈ A n + B + C/n fitted by least squares.
struct ParityFit {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double max_residual = 0.0;
};

/// Fits the even- and odd-indexed subsequences of sigma over ranks
/// [lo, hi) (0-based into the sorted sequence).
std::pair<ParityFit, ParityFit> fit_even_odd(const SpectrumSeq& sigma, std::size_t lo,
                                             std::size_t hi);

enum class AlphaCase { generic, alpha_zero, alpha_half };

struct RecoveredInvariants {
    double length = 0.0;
    double alpha = 0.0;  // symmetry-class representative in [0, 1/2]
    double curvature_flux_abs = 0.0;
    double q_integral = 0.0;
    AlphaCase case_tag = AlphaCase::generic;
    double fit_residual = 0.0;
    bool degenerate = false;  // all order-1/n information vanished
    bool ambiguous = false;   // case decision within tolerance of two cases
};

/// Extracts the boundary invariants of a single-circle spectrum from its
/// sorted tail.
RecoveredInvariants recover_single(const SpectrumSeq& sigma);

struct MultiComponentEstimate {
    int m = 0;
    std::vector<std::pair<double, double>> components;  // (length, alpha) by length
    double residual = 0.0;
    bool degeneracy_warning = false;        // a larger m fits equally well
    std::vector<bool> alpha_near_quarter;   // flags α within eps of 1/4 or 3/4
};

/// Brute-force model selection over 1..m_max merged two-sided ladders.  The
/// input must be a merged spectrum truncated at one energy, the way a sorted
/// spectrum arrives; per-component truncations at wildly different energies
/// starve the slot-occupancy gate.
MultiComponentEstimate recover_multi(const SpectrumSeq& sigma, int m_max);

struct MatchReport {
    std::size_t head_x = 0;  // discarded leading entries
    std::size_t head_y = 0;
    std::size_t matched = 0;
    std::vector<double> window_sup;  // sup |x - y| per window
    double weyl_slope_x = 0.0;
    double weyl_slope_y = 0.0;
    bool structural_mismatch = false;
    bool consistent = false;
};

/// Monotone matching of two sorted truncations after discarding optimal
/// finite heads; consistent when windowed deviations fall below the schedule.
/// The schedule gives one tolerance per window (last entry repeats).
MatchReport match_close(const SpectrumSeq& X, const SpectrumSeq& Y,
                        const std::vector<double>& schedule);

struct EcsCertificateResult {
    bool equivalent = false;
    bool hypothesis_ok = true;
    std::vector<int> signs;                           // per part, when found
    std::vector<std::pair<Rational, Rational>> pairs;  // certified covering pairs
    std::string note;
};

/// Decides whether a single circle (ℓ1, α1) and a list of circles
/// (ℓ2j, α2j) generate almost-equal doubled multisets, certifying the
/// positive case by an exact covering system over the length ratios when the
/// offsets allow it.
EcsCertificateResult ecs_certificate(const Rational& l1, const Rational& alpha1,
                                     const std::vector<std::pair<Rational, Rational>>& parts);

}  // namespace steklov
