#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "leedecay/errors.hpp"

namespace leedecay {

// One decay channel: coupling squared g^2 and the box form-factor window
// [e_th, lambda_cut]. All energies share one arbitrary unit; hbar = c = 1,
// times are inverse energies.
struct Channel {
    double g2 = 0.0;         // coupling squared, equals the partial width in the exponential limit
    double e_th = 0.0;       // lower threshold
    double lambda_cut = 0.0; // upper cutoff
};

// Unstable state |S> of bare mass m0 coupled to one continuum per channel.
// Channel index 0 is "channel 1" wherever a ratio of two channels appears.
struct LeeModel {
    double m0 = 0.0;
    std::vector<Channel> channels;
};

// Uniform sampling grid over an energy interval.
struct EnergyGrid {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;

    void validate() const {
        if (!(lo < hi)) throw DomainError("EnergyGrid: lo must be < hi");
        if (n < 2) throw DomainError("EnergyGrid: need at least 2 samples");
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw DomainError("EnergyGrid: bounds must be finite");
    }

    double step() const { return (hi - lo) / static_cast<double>(n - 1); }
    double point(std::size_t i) const { return lo + step() * static_cast<double>(i); }
};

// Checks all model invariants, returns the model unchanged. Negative e_th is
// allowed (needed for wide symmetric windows around m0).
inline const LeeModel& validate_model(const LeeModel& model) {
    if (model.channels.empty()) throw EmptyChannels();
    if (!std::isfinite(model.m0)) throw DomainError("model: m0 must be finite");
    for (std::size_t i = 0; i < model.channels.size(); ++i) {
        const Channel& ch = model.channels[i];
        const std::string tag = "channel " + std::to_string(i);
        if (!std::isfinite(ch.g2) || !std::isfinite(ch.e_th) || !std::isfinite(ch.lambda_cut))
            throw DomainError("model: " + tag + " has a non-finite parameter");
        if (ch.g2 < 0.0)
            throw NegativeCoupling("model: " + tag + " has g2 = " + std::to_string(ch.g2) + " < 0");
        if (!(ch.e_th < ch.lambda_cut))
            throw InvertedWindow("model: " + tag + " window [" + std::to_string(ch.e_th) + ", " +
                                 std::to_string(ch.lambda_cut) + "] is empty or inverted");
    }
    return model;
}

// Box form factor, 1 on the closed window [e_th, lambda_cut] and 0 outside.
// Both edges belong to the window so edge quadrature nodes behave
// deterministically.
inline double form_factor(const Channel& ch, double k) {
    return (k >= ch.e_th && k <= ch.lambda_cut) ? 1.0 : 0.0;
}

inline double total_width(const LeeModel& model) {
    double g = 0.0;
    for (const Channel& ch : model.channels) g += ch.g2;
    return g;
}

} // namespace leedecay
