#pragma once

#include <stdexcept>
#include <string>

namespace leedecay {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- model validation ---
struct EmptyChannels : Error {
    EmptyChannels() : Error("model: channel list is empty") {}
};
struct InvertedWindow : Error {
    explicit InvertedWindow(const std::string& msg) : Error(msg) {}
};
struct NegativeCoupling : Error {
    explicit NegativeCoupling(const std::string& msg) : Error(msg) {}
};
struct ChannelCountError : Error {
    explicit ChannelCountError(const std::string& msg) : Error(msg) {}
};

// --- numerics ---
struct NonConvergence : Error {
    explicit NonConvergence(const std::string& msg) : Error(msg) {}
};
struct PhaseBudgetOverflow : Error {
    explicit PhaseBudgetOverflow(const std::string& msg) : Error(msg) {}
};
struct NoSignChange : Error {
    explicit NoSignChange(const std::string& msg) : Error(msg) {}
};
struct EvaluationAtLogSingularity : Error {
    explicit EvaluationAtLogSingularity(const std::string& msg) : Error(msg) {}
};
struct BracketingFailure : Error {
    explicit BracketingFailure(const std::string& msg) : Error(msg) {}
};
struct NormalizationFailure : Error {
    explicit NormalizationFailure(const std::string& msg) : Error(msg) {}
};
struct DivisionNearZero : Error {
    explicit DivisionNearZero(const std::string& msg) : Error(msg) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// --- cli / io ---
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace leedecay
